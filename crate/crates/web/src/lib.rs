//! Browser demo: three operations exposed to JavaScript. Each one returns
//! JSON text; the plain functions are what the native tests call, the
//! `#[wasm_bindgen]` wrappers turn their errors into JS exceptions.

use inften::chains::{joint, verify_shift_invariance, ChainSpec};
use inften::circuit::{evaluate, parse};
use inften::cylinder::CylinderSet;
use inften::itp::{biased_kernel, dirac_zero, lc_evaluate, uniform_measure};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Deepest chain the page will unroll; the joint has `2^(k·depth)` rows.
pub const MAX_CHAIN_DEPTH: usize = 10;

/// Parses and evaluates a circuit.
pub fn evaluate_circuit(src: &str) -> Result<String, String> {
    let term = parse(src).map_err(|e| e.to_string())?;
    let arity = term.arity().map_err(|e| e.to_string())?;
    let matrix = evaluate(&term).map_err(|e| e.to_string())?;
    Ok(json!({
        "term": term.to_string(),
        "inputs": arity.inputs,
        "outputs": arity.outputs,
        "matrix": matrix,
    })
    .to_string())
}

/// `f(U | given)` for a built-in kernel. `given` is a string of digits.
pub fn measure_cylinder(kernel: &str, cylinder: &str, given: &str) -> Result<f64, String> {
    let k = match kernel {
        "uniform" => uniform_measure(),
        "biased" => biased_kernel(),
        "dirac0" => dirac_zero(),
        other => return Err(format!("unknown kernel `{other}`")),
    };
    let space = k.codomain().omega_part().expect("built-ins land in Cantor space");
    let cyl = CylinderSet::parse(cylinder, space).map_err(|e| e.to_string())?;
    let given: Vec<usize> = given
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(format!("conditioning prefix may only contain 0 and 1, found `{c}`")),
        })
        .collect::<Result<_, _>>()?;
    lc_evaluate(&k, &cyl, &given).map_err(|e| e.to_string())
}

/// The joint law of the first `depth` states of a chain whose step and
/// initial state are circuits, with the shift-invariance report.
pub fn chain_joint(step: &str, init: &str, depth: usize) -> Result<String, String> {
    if depth == 0 || depth > MAX_CHAIN_DEPTH {
        return Err(format!("depth must be between 1 and {MAX_CHAIN_DEPTH}"));
    }
    let circuit = |src: &str| parse(src).and_then(|t| evaluate(&t)).map_err(|e| e.to_string());
    let spec = ChainSpec::new(circuit(step)?, Some(circuit(init)?)).map_err(|e| e.to_string())?;
    let k = spec.states().len();
    if k * depth > 16 {
        return Err(format!("{k}-bit states at depth {depth} is too large to show"));
    }
    let joint = joint(&spec, depth).map_err(|e| e.to_string())?;
    let shift = verify_shift_invariance(&spec, depth).map_err(|e| e.to_string())?;
    Ok(json!({ "bitsPerState": k, "joint": joint, "shift": shift }).to_string())
}

#[wasm_bindgen(js_name = evaluateCircuit)]
pub fn evaluate_circuit_js(src: &str) -> Result<String, JsError> {
    evaluate_circuit(src).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = measureCylinder)]
pub fn measure_cylinder_js(kernel: &str, cylinder: &str, given: &str) -> Result<f64, JsError> {
    measure_cylinder(kernel, cylinder, given).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = chainJoint)]
pub fn chain_joint_js(step: &str, init: &str, depth: usize) -> Result<String, JsError> {
    chain_joint(step, init, depth).map_err(|e| JsError::new(&e))
}
