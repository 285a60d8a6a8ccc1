use std::fmt;
use std::sync::Arc;

use super::{evaluate, Arity, Term};
use crate::error::{Error, Result};
use crate::finstoch::FinObject;
use crate::itp::{check_adjacent, CompatKernel, Layout, Level, TensorObject};

type Body = dyn Fn(usize) -> Result<Term> + Send + Sync;

/// A plate: a family of circuits indexed by output depth. The depth-`d`
/// body has one output wire per coordinate of `codomain.marginal_at(d)` and
/// reads the finite inputs plus as many ω-inputs as it likes, as long as
/// that number does not decrease with `d`.
#[derive(Clone)]
pub struct PlateFamily {
    domain: TensorObject,
    codomain: TensorObject,
    body: Arc<Body>,
}

impl fmt::Debug for PlateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlateFamily")
            .field("domain", &self.domain)
            .field("codomain", &self.codomain)
            .finish_non_exhaustive()
    }
}

impl PlateFamily {
    pub fn new(
        domain: TensorObject,
        codomain: TensorObject,
        body: impl Fn(usize) -> Result<Term> + Send + Sync + 'static,
    ) -> Result<Self> {
        for obj in [&domain, &codomain] {
            if !obj.is_binary() {
                return Err(Error::NotBinary(obj.to_string()));
            }
        }
        Ok(Self {
            domain,
            codomain,
            body: Arc::new(body),
        })
    }

    pub fn identity(x: &TensorObject) -> Result<Self> {
        let fin = x.finite_part().len();
        Self::new(x.clone(), x.clone(), move |d| Ok(Term::Id(fin + d)))
    }

    /// A plate without ω-wires, whose body is the same term at every depth.
    pub fn constant(term: Term) -> Result<Self> {
        let arity = term.arity()?;
        Self::new(
            TensorObject::finite(FinObject::bits(arity.inputs)),
            TensorObject::finite(FinObject::bits(arity.outputs)),
            move |_| Ok(term.clone()),
        )
    }

    pub fn domain(&self) -> &TensorObject {
        &self.domain
    }

    pub fn codomain(&self) -> &TensorObject {
        &self.codomain
    }

    /// The body at output depth `d` (normalised as for kernels) together with
    /// its input depth, after checking its arity.
    pub fn instantiate(&self, d: usize) -> Result<(Term, usize)> {
        let d = self.codomain.effective_depth(d);
        let term = (self.body)(d)?;
        let arity = term.arity()?;
        let n = self.input_depth_of(d, arity)?;
        Ok((term, n))
    }

    fn input_depth_of(&self, d: usize, arity: Arity) -> Result<usize> {
        let fin_in = self.domain.finite_part().len();
        let outputs = self.codomain.marginal_at(d).len();
        let fits = arity.outputs == outputs
            && arity.inputs >= fin_in
            && (self.domain.has_omega() || arity.inputs == fin_in);
        if !fits {
            let inputs = if self.domain.has_omega() {
                format!("{fin_in} + n")
            } else {
                fin_in.to_string()
            };
            return Err(Error::ArityDrift {
                depth: d,
                expected: format!("{inputs} -> {outputs}"),
                found: arity,
            });
        }
        Ok(arity.inputs - fin_in)
    }
}

/// The kernel denoted by a plate. Each level is checked against the one
/// below it when first probed, so a plate that is not a compatible family
/// fails at the first bad depth.
pub fn evaluate_plate(p: &PlateFamily) -> CompatKernel {
    let p = p.clone();
    let (dom, cod) = (p.domain.clone(), p.codomain.clone());
    CompatKernel::with_self(dom.clone(), cod.clone(), move |this, d| {
        let (term, n) = p.instantiate(d)?;
        let matrix = evaluate(&term)?.reshape(dom.marginal_at(n), cod.marginal_at(d))?;
        let level = Level { input_depth: n, matrix };
        if d > 0 && cod.has_omega() {
            let prev = this.level(d - 1)?;
            check_adjacent(&dom, &cod, d, &prev, &level)?;
        }
        Ok(level)
    })
}

/// `p` then `q`: depth `d` of `q` decides how deep `p` has to go.
pub fn plate_seq(p: &PlateFamily, q: &PlateFamily) -> Result<PlateFamily> {
    if p.codomain != q.domain {
        return Err(Error::ObjectMismatch(format!(
            "cannot compose plates: codomain {} does not match domain {}",
            p.codomain, q.domain
        )));
    }
    let (p2, q2) = (p.clone(), q.clone());
    PlateFamily::new(p.domain.clone(), q.codomain.clone(), move |d| {
        let (tq, m) = q2.instantiate(d)?;
        let (tp, _) = p2.instantiate(m)?;
        Ok(Term::seq(tp, tq))
    })
}

/// `p ⊗ q`, with ω-wires interleaved like [`crate::itp::tensor_k`].
pub fn plate_par(p: &PlateFamily, q: &PlateFamily) -> Result<PlateFamily> {
    let dom_layout = Layout::of(&p.domain, &q.domain);
    let cod_layout = Layout::of(&p.codomain, &q.codomain);
    let (p2, q2) = (p.clone(), q.clone());
    PlateFamily::new(p.domain.tensor(&q.domain), p.codomain.tensor(&q.codomain), move |d| {
        let (a, b) = cod_layout.split(d);
        let (tp, np) = p2.instantiate(a)?;
        let (tq, nq) = q2.instantiate(b)?;
        let n = dom_layout.covering(np, nq);
        let (la, lb) = dom_layout.split(n);
        let tp = widen(tp, p2.domain.finite_part().len() + np, la - np);
        let tq = widen(tq, q2.domain.finite_part().len() + nq, lb - nq);
        let into_natural = invert(&dom_layout.perm(n));
        Ok(Term::seq_all(
            [
                Term::permutation(&into_natural),
                Term::par(tp, tq),
                Term::permutation(&cod_layout.perm(d)),
            ],
            0,
        ))
    })
}

/// Reads `extra` more input wires and discards them.
fn widen(term: Term, used: usize, extra: usize) -> Term {
    if extra == 0 {
        return term;
    }
    Term::seq(Term::par(Term::Id(used), Term::del_n(extra)), term)
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}
