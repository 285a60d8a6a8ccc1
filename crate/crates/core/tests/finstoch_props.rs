mod common;

use inften::finstoch::{
    cancellative_check, compose, marginalize, tensor, FinObject, StochMatrix,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_matrix, random_object};

const TOL: f64 = 1e-9;

fn objects() -> impl Strategy<Value = FinObject> {
    prop::collection::vec(1usize..=3, 0..=3).prop_map(|f| FinObject::new(f).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(seed: u64, a in objects(), b in objects(), c in objects(), d in objects()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_matrix(&mut rng, a, b.clone());
        let g = random_matrix(&mut rng, b, c.clone());
        let h = random_matrix(&mut rng, c, d);
        let left = compose(&compose(&h, &g).unwrap(), &f).unwrap();
        let right = compose(&h, &compose(&g, &f).unwrap()).unwrap();
        prop_assert!(left.approx_eq(&right, TOL));
        prop_assert!(left.validate(TOL).is_ok());
    }

    #[test]
    fn identities_are_units(seed: u64, a in objects(), b in objects()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_matrix(&mut rng, a.clone(), b.clone());
        prop_assert_eq!(compose(&StochMatrix::identity(&b), &f).unwrap(), f.clone());
        prop_assert_eq!(compose(&f, &StochMatrix::identity(&a)).unwrap(), f);
    }

    #[test]
    fn interchange(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let objs: Vec<FinObject> = (0..6).map(|_| random_object(&mut rng, 2)).collect();
        let f1 = random_matrix(&mut rng, objs[0].clone(), objs[1].clone());
        let g1 = random_matrix(&mut rng, objs[1].clone(), objs[2].clone());
        let f2 = random_matrix(&mut rng, objs[3].clone(), objs[4].clone());
        let g2 = random_matrix(&mut rng, objs[4].clone(), objs[5].clone());
        let left = compose(&tensor(&g1, &g2), &tensor(&f1, &f2)).unwrap();
        let right = tensor(&compose(&g1, &f1).unwrap(), &compose(&g2, &f2).unwrap());
        prop_assert!(left.approx_eq(&right, TOL));
        prop_assert!(left.validate(TOL).is_ok());
    }

    #[test]
    fn marginals_stay_stochastic(seed: u64, a in objects(), b in objects(), mask: u8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_matrix(&mut rng, a, b.clone());
        let keep: Vec<usize> = (0..b.len()).filter(|i| mask >> i & 1 == 1).collect();
        let m = marginalize(&f, &keep).unwrap();
        prop_assert!(m.validate(TOL).is_ok());
        prop_assert_eq!(m.codomain(), &b.select(&keep).unwrap());
    }

    #[test]
    fn marginalising_everything_is_delete(seed: u64, a in objects(), b in objects()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_matrix(&mut rng, a.clone(), b);
        prop_assert!(marginalize(&f, &[]).unwrap().approx_eq(&StochMatrix::delete(&a), TOL));
    }

    #[test]
    fn marginal_equals_composite_with_projection(seed: u64, b in objects(), mask: u8) {
        // a marginal is composition with the deterministic projection
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_matrix(&mut rng, FinObject::new(vec![2]).unwrap(), b.clone());
        let keep: Vec<usize> = (0..b.len()).filter(|i| mask >> i & 1 == 1).collect();
        let kept = b.select(&keep).unwrap();
        let proj = StochMatrix::deterministic(b, kept, |t| keep.iter().map(|&i| t[i]).collect()).unwrap();
        prop_assert!(marginalize(&f, &keep).unwrap().approx_eq(&compose(&proj, &f).unwrap(), TOL));
    }

    #[test]
    fn cancellative(seed: u64, a in objects(), b in objects(), x in objects()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_matrix(&mut rng, a.clone(), b.clone());
        let g = random_matrix(&mut rng, a, b);
        prop_assert_eq!(cancellative_check(&f, &g, &x, TOL).unwrap(), f.approx_eq(&g, TOL));
        prop_assert!(cancellative_check(&f, &f, &x, TOL).unwrap());
    }

    #[test]
    fn json_round_trip(seed: u64, a in objects(), b in objects()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_matrix(&mut rng, a, b);
        let text = serde_json::to_string(&f).unwrap();
        let back: StochMatrix = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, f);
    }
}

/// Objects of dimension at most 64 built from factors 1 to 4.
fn small_objects() -> Vec<FinObject> {
    let mut out = vec![FinObject::unit()];
    for a in 1..=4 {
        out.push(FinObject::new(vec![a]).unwrap());
        for b in 1..=4 {
            out.push(FinObject::new(vec![a, b]).unwrap());
            for c in 1..=4 {
                out.push(FinObject::new(vec![a, b, c]).unwrap());
            }
        }
    }
    out
}

/// `(f ⊗ h) v` for a vector `v` on the joint domain, without forming `f ⊗ h`.
fn apply_tensor(f: &StochMatrix, h: &StochMatrix, v: &[f64]) -> Vec<f64> {
    let (fr, fc) = (f.codomain().dim(), f.domain().dim());
    let (hr, hc) = (h.codomain().dim(), h.domain().dim());
    let mut out = vec![0.0; fr * hr];
    for (i, &w) in v.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let (u, t) = (i / hc, i % hc);
        debug_assert!(u < fc);
        for y in 0..fr {
            let a = f.get(y, u) * w;
            if a == 0.0 {
                continue;
            }
            for z in 0..hr {
                out[y * hr + z] += a * h.get(z, t);
            }
        }
    }
    out
}

#[test]
fn comonoid_laws_are_exact() {
    for x in small_objects() {
        let id = StochMatrix::identity(&x);
        let copy = StochMatrix::copy(&x);
        let del = StochMatrix::delete(&x);
        let swap = StochMatrix::swap(&x, &x);
        assert_eq!(compose(&swap, &copy).unwrap(), copy, "cocommutativity on {x}");
        if x.dim() <= 16 {
            let left = compose(&tensor(&copy, &id), &copy).unwrap();
            let right = compose(&tensor(&id, &copy), &copy).unwrap();
            assert_eq!(left, right, "coassociativity on {x}");
        }
        for col in 0..x.dim() {
            let diag: Vec<f64> = (0..copy.codomain().dim()).map(|r| copy.get(r, col)).collect();
            let left = apply_tensor(&copy, &id, &diag);
            let right = apply_tensor(&id, &copy, &diag);
            assert_eq!(left, right, "coassociativity on {x}, column {col}");
        }
        assert_eq!(compose(&tensor(&id, &del), &copy).unwrap().reshape(x.clone(), x.clone()).unwrap(), id);
        assert_eq!(compose(&tensor(&del, &id), &copy).unwrap().reshape(x.clone(), x.clone()).unwrap(), id);
    }
}

#[test]
fn copy_of_product() {
    let objs = small_objects();
    for x in objs.iter().filter(|o| o.dim() <= 8) {
        for y in objs.iter().filter(|o| o.dim() <= 8) {
            let xy = x.tensor(y);
            let middle = tensor(
                &tensor(&StochMatrix::identity(x), &StochMatrix::swap(x, y)),
                &StochMatrix::identity(y),
            );
            let split = compose(&middle, &tensor(&StochMatrix::copy(x), &StochMatrix::copy(y))).unwrap();
            assert_eq!(split, StochMatrix::copy(&xy), "{x} and {y}");
        }
    }
}
