mod common;

use inften::cylinder::{CylinderSet, OmegaSpec};
use inften::finstoch::{FinObject, StochMatrix};
use inften::itp::random::{random_lc_kernel, random_measure};
use inften::itp::{
    biased_kernel, compose_k, continuous_embed, copy_k, delete_k, from_finite, identity_k, lc_evaluate, pair_from_marginals, swap_k,
    tensor_k, uniform_measure, CompatKernel, TensorObject,
};
use inften::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::binary_prefixes;

const DEPTH: usize = 4;

fn kernel(seed: u64) -> CompatKernel {
    random_lc_kernel(seed, true, (seed % 3) as usize)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn composition_is_associative(a: u64, b: u64, c: u64) {
        let (f, g, h) = (kernel(a), kernel(b), kernel(c));
        let left = compose_k(&compose_k(&h, &g).unwrap(), &f).unwrap();
        let right = compose_k(&h, &compose_k(&g, &f).unwrap()).unwrap();
        prop_assert!(left.max_difference_up_to(&right, DEPTH).unwrap() < 1e-12);
    }

    #[test]
    fn composition_is_unital(a: u64) {
        let f = kernel(a);
        let id = identity_k(&TensorObject::cantor());
        prop_assert!(compose_k(&id, &f).unwrap().equivalent_up_to(&f, DEPTH, 0.0).unwrap());
        prop_assert!(compose_k(&f, &id).unwrap().equivalent_up_to(&f, DEPTH, 0.0).unwrap());
    }

    #[test]
    fn tensor_is_functorial(a: u64, b: u64, c: u64, d: u64) {
        let (f1, g1, f2, g2) = (kernel(a), kernel(b), kernel(c), random_measure(d));
        let left = compose_k(&tensor_k(&g1, &f1), &tensor_k(&f2, &g2)).unwrap();
        let right = tensor_k(&compose_k(&g1, &f2).unwrap(), &compose_k(&f1, &g2).unwrap());
        prop_assert!(left.max_difference_up_to(&right, DEPTH).unwrap() < 1e-12);
    }

    #[test]
    fn measures_are_finitely_additive(seed: u64, x in prop::collection::vec(0usize..2, 8)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = kernel(seed);
        let full = CylinderSet::full(OmegaSpec::cantor());
        prop_assert!((lc_evaluate(&k, &full, &x).unwrap() - 1.0).abs() < 1e-12);
        for d in 0..=3 {
            let a = CylinderSet::new(OmegaSpec::cantor(), d, (0..1 << d).map(|_| rng.gen_bool(0.5)).collect()).unwrap();
            let b = CylinderSet::new(OmegaSpec::cantor(), 3, (0..8).map(|_| rng.gen_bool(0.5)).collect()).unwrap();
            let b = b.difference(&a).unwrap();
            let whole = lc_evaluate(&k, &a.union(&b).unwrap(), &x).unwrap();
            let parts = lc_evaluate(&k, &a, &x).unwrap() + lc_evaluate(&k, &b, &x).unwrap();
            prop_assert!((whole - parts).abs() < 1e-12);
        }
    }

    #[test]
    fn longer_conditioning_prefixes_change_nothing(seed: u64, x in prop::collection::vec(0usize..2, 6), tail in prop::collection::vec(0usize..2, 0..6)) {
        let k = biased_kernel();
        let g = kernel(seed);
        let mut longer = x.clone();
        longer.extend(tail);
        for u in [
            CylinderSet::parse("cyl(2; 00, 11)", &OmegaSpec::cantor()).unwrap(),
            CylinderSet::parse("cyl(3; 010)", &OmegaSpec::cantor()).unwrap(),
        ] {
            prop_assert_eq!(lc_evaluate(&k, &u, &x).unwrap(), lc_evaluate(&k, &u, &longer).unwrap());
            // depth 3 plus a lag of at most 2 fits in the 6 given coordinates
            prop_assert_eq!(lc_evaluate(&g, &u, &x).unwrap(), lc_evaluate(&g, &u, &longer).unwrap());
        }
    }

    #[test]
    fn gate_accepts_exactly_the_consistent_families(seed: u64, bump in 0.0f64..0.3, at in 2usize..6) {
        let source = random_measure(seed);
        let moved = source.level(at).unwrap().matrix.get(0, 0).min(bump);
        let family = {
            let source = source.clone();
            move |d: usize| -> inften::Result<StochMatrix> {
                let m = source.level(d)?.matrix.clone();
                if d != at {
                    return Ok(m);
                }
                // move mass from 00…0 to 10…0; their parents differ
                let mut rows: Vec<Vec<f64>> = m.rows().map(<[f64]>::to_vec).collect();
                rows[0][0] -= moved;
                rows[1 << (at - 1)][0] += moved;
                StochMatrix::from_rows(m.domain().clone(), m.codomain().clone(), rows)
            }
        };
        let k = pair_from_marginals(TensorObject::unit(), TensorObject::cantor(), family).unwrap();
        prop_assert!((0..at).all(|d| k.level(d).is_ok()));
        match k.level(at) {
            Err(Error::Inconsistent { depth, deviation }) => {
                prop_assert!(moved > 1e-9);
                prop_assert_eq!(depth, at);
                prop_assert!((deviation - moved).abs() < 1e-12);
            }
            Ok(_) => {
                prop_assert!(moved <= 1e-9);
                prop_assert!(k.check_naturality(at).unwrap().passes(1e-9));
            }
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

/// Position of coordinate `k` of factor `comp` in `(A ⊗ B) ⊗ C`.
fn left_slot(comp: usize, k: usize) -> usize {
    match comp {
        0 => 4 * k,
        1 => 4 * k + 2,
        _ => 2 * k + 1,
    }
}

/// Owner of slot `s` in `A ⊗ (B ⊗ C)`.
fn right_owner(s: usize) -> (usize, usize) {
    if s.is_multiple_of(2) {
        return (0, s / 2);
    }
    let t = s / 2;
    if t.is_multiple_of(2) {
        (1, t / 2)
    } else {
        (2, t / 2)
    }
}

/// The associator `(A ⊗ B) ⊗ C → A ⊗ (B ⊗ C)` on Cantor spaces.
fn associator() -> CompatKernel {
    let c = TensorObject::cantor();
    let source = move |s: usize| {
        let (comp, k) = right_owner(s);
        left_slot(comp, k)
    };
    continuous_embed(
        c.clone(),
        c,
        move |d| (0..d).map(|s| source(s) + 1).max().unwrap_or(0),
        move |d, x| (0..d).map(|s| x[source(s)]).collect(),
    )
}

#[test]
fn comonoid_laws_on_infinite_objects() {
    let objects = [
        TensorObject::cantor(),
        TensorObject::new(FinObject::new(vec![3]).unwrap(), Some(OmegaSpec::cantor())),
        TensorObject::omega(OmegaSpec::periodic(vec![], vec![2, 3]).unwrap()),
    ];
    for x in &objects {
        let id = identity_k(x);
        let copy = copy_k(x);
        let del = delete_k(x);
        let counit_l = compose_k(&tensor_k(&del, &id), &copy).unwrap();
        let counit_r = compose_k(&tensor_k(&id, &del), &copy).unwrap();
        assert!(counit_l.equivalent_up_to(&id, DEPTH, 0.0).unwrap(), "{x}");
        assert!(counit_r.equivalent_up_to(&id, DEPTH, 0.0).unwrap(), "{x}");
        let swapped = compose_k(&swap_k(x, x), &copy).unwrap();
        assert!(swapped.equivalent_up_to(&copy, DEPTH, 0.0).unwrap(), "{x}");
        if x == &TensorObject::cantor() {
            let left = compose_k(&tensor_k(&copy, &id), &copy).unwrap();
            let right = compose_k(&tensor_k(&id, &copy), &copy).unwrap();
            let left = compose_k(&associator(), &left).unwrap();
            assert!(left.equivalent_up_to(&right, 6, 0.0).unwrap());
        }
    }
}

#[test]
fn delete_is_terminal_for_random_kernels() {
    for seed in 0..10 {
        let k = compose_k(&delete_k(&TensorObject::cantor()), &kernel(seed)).unwrap();
        assert!(k.equivalent_up_to(&delete_k(&TensorObject::cantor()), DEPTH, 1e-12).unwrap());
    }
}

#[test]
fn copy_of_a_measure_is_its_diagonal() {
    for seed in 0..5 {
        let mu = random_measure(seed);
        let copied = compose_k(&copy_k(&TensorObject::cantor()), &mu).unwrap();
        for d in 0..=DEPTH {
            // slots alternate between the two copies; a copy agrees with itself
            let m = &copied.level(d).unwrap().matrix;
            let base = &mu.level(d.div_ceil(2)).unwrap().matrix;
            for (y, prefix) in binary_prefixes(d).iter().enumerate() {
                let left: Vec<usize> = prefix.iter().step_by(2).copied().collect();
                let right: Vec<usize> = prefix.iter().skip(1).step_by(2).copied().collect();
                let agree = right.iter().zip(&left).all(|(a, b)| a == b);
                let expected = if agree {
                    let idx = left.iter().fold(0, |acc, &b| acc * 2 + b);
                    base.get(idx, 0)
                } else {
                    0.0
                };
                assert!((m.get(y, 0) - expected).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn finite_kernels_embed_functorially() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let a = FinObject::new(vec![2, 3]).unwrap();
        let b = FinObject::new(vec![3]).unwrap();
        let f = common::random_matrix(&mut rng, a.clone(), b.clone());
        let g = common::random_matrix(&mut rng, b, FinObject::bits(2));
        let composite = compose_k(&from_finite(g.clone()), &from_finite(f.clone())).unwrap();
        let direct = from_finite(inften::finstoch::compose(&g, &f).unwrap());
        assert!(composite.equivalent_up_to(&direct, 2, 1e-12).unwrap());
    }
    let u = compose_k(&biased_kernel(), &uniform_measure()).unwrap();
    assert!(u.equivalent_up_to(&uniform_measure(), 6, 1e-12).unwrap());
}
