//! Golden-file cases shared by the golden test and the acceptance binary.
//! Each case runs in `tests/fixtures`; its transcript lives in
//! `tests/golden/<name>.txt`. Set `INFTEN_BLESS=1` to rewrite transcripts.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

const fn case(name: &'static str, args: &'static [&'static str], exit: i32) -> Case {
    Case { name, args, exit }
}

pub const CASES: &[Case] = &[
    case("eval_file", &["eval", "coins_and.cc"], 0),
    case("eval_expr", &["eval", "-e", "st(0.5)*st(0.5);and"], 0),
    case("eval_counit", &["eval", "counit.cc"], 0),
    case("eval_syntax_error", &["eval", "bad_syntax.cc"], 2),
    case("eval_arity_error", &["eval", "bad_arity.cc"], 2),
    case("eval_arity_assertion", &["eval", "bad_assert.cc"], 2),
    case("eval_range_error", &["eval", "-e", "st(1.5)"], 2),
    case("eval_missing_file", &["eval", "missing.cc"], 2),
    case("equal_same_file", &["equal", "coins_and.cc", "coins_and.cc"], 0),
    case("equal_quarter", &["equal", "coins_and.cc", "quarter.cc"], 0),
    case("equal_cocommutative", &["equal", "cocommute.cc", "copy.cc", "--json"], 0),
    case("equal_not_equal", &["equal", "counit.cc", "not.cc"], 1),
    case("equal_arity_mismatch", &["equal", "copy.cc", "not.cc"], 2),
    case("equal_chains", &["equal", "not_chain.cc", "not_chain.cc", "--depth", "4"], 0),
    case("equal_chains_differ", &["equal", "not_chain.cc", "sticky_chain.cc", "--depth", "3", "--json"], 1),
    case("marginal_uniform", &["marginal", "uniform", "--depth", "3"], 0),
    case("marginal_biased", &["marginal", "biased", "--depth", "2"], 0),
    case("marginal_dirac0", &["marginal", "dirac0", "--depth", "2"], 0),
    case("marginal_chain", &["marginal", "not_chain.cc", "--depth", "3"], 0),
    case("marginal_unknown", &["marginal", "nosuch"], 2),
    case("measure_uniform", &["measure", "uniform", "cyl(2;00,01,10)"], 0),
    case("measure_biased", &["measure", "biased", "cyl(2; 01, 10)", "--given", "011", "--json"], 0),
    case("measure_dirac0", &["measure", "dirac0", "cyl(3; 000, 001)"], 0),
    case("measure_chain", &["measure", "sticky_chain.cc", "cyl(3; 110, 111)"], 0),
    case("measure_short_prefix", &["measure", "biased", "cyl(1; 1)"], 2),
    case("measure_bad_literal", &["measure", "uniform", "cyl(2; 0)"], 2),
    case("compose_uniform_biased", &["compose", "uniform", "biased", "--depth", "3"], 0),
    case("compose_dirac0_biased", &["compose", "dirac0", "biased", "--depth", "2"], 0),
    case("compose_mismatch", &["compose", "biased", "uniform"], 2),
    case("chain_alternating", &["chain", "--step", "not", "--init", "st(0)", "--depth", "3"], 0),
    case("chain_json_step", &["chain", "--step", "sticky.json", "--init", "st(0.5)", "--depth", "3"], 0),
    case("chain_no_init", &["chain", "--step", "not", "--depth", "2"], 0),
    case("chain_not_square", &["chain", "--step", "copy"], 2),
    case("check_biased", &["check", "biased", "--depth", "5"], 0),
    case("check_chain", &["check", "not_chain.cc", "--depth", "4", "--json"], 0),
    case("check_bad_tolerance", &["check", "uniform", "--tolerance", "0"], 2),
];

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_path(case: &Case) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("tests/golden/{}.txt", case.name))
}

/// Runs a case and renders its exit code, stdout and stderr.
pub fn transcript(case: &Case) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_inften"))
        .args(case.args)
        .current_dir(fixtures())
        .output()
        .expect("run inften");
    let code = out.status.code().unwrap_or(-1);
    let text = format!(
        "$ inften {}\n--- exit {code}\n--- stdout\n{}--- stderr\n{}",
        case.args.join(" "),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    (code, text)
}

pub fn blessing() -> bool {
    std::env::var_os("INFTEN_BLESS").is_some()
}
