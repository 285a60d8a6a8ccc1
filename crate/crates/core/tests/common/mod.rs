#![allow(dead_code)]

use inften::finstoch::{FinObject, StochMatrix};
use rand::Rng;

/// A random column-stochastic matrix. Some columns are made sparse so that
/// zero entries get exercised too.
pub fn random_matrix<R: Rng>(rng: &mut R, domain: FinObject, codomain: FinObject) -> StochMatrix {
    let rows = codomain.dim();
    let cols = domain.dim();
    let mut entries = vec![0.0; rows * cols];
    for x in 0..cols {
        let sparse = rng.gen_bool(0.2);
        let mut col: Vec<f64> = (0..rows)
            .map(|_| if sparse && rng.gen_bool(0.5) { 0.0 } else { rng.gen::<f64>() + 1e-3 })
            .collect();
        if col.iter().all(|&v| v == 0.0) {
            col[rng.gen_range(0..rows)] = 1.0;
        }
        let total: f64 = col.iter().sum();
        for (y, v) in col.into_iter().enumerate() {
            entries[y * cols + x] = v / total;
        }
    }
    StochMatrix::new(domain, codomain, entries).expect("normalised columns")
}

/// A random object with at most `max_factors` factors of size 1 to 3.
pub fn random_object<R: Rng>(rng: &mut R, max_factors: usize) -> FinObject {
    let n = rng.gen_range(0..=max_factors);
    FinObject::new((0..n).map(|_| rng.gen_range(1..=3)).collect()).unwrap()
}

pub fn random_distribution<R: Rng>(rng: &mut R, x: FinObject) -> StochMatrix {
    random_matrix(rng, FinObject::unit(), x)
}

/// Every prefix of length `n` over an alphabet of size 2, in index order.
pub fn binary_prefixes(n: usize) -> Vec<Vec<usize>> {
    (0..1usize << n).map(|i| (0..n).map(|k| (i >> (n - 1 - k)) & 1).collect()).collect()
}
