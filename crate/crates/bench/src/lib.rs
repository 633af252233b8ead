//! Fixtures shared by the criterion benchmarks in `benches/`.

use submod_core::{random_submodular, GroundSet, PointFunction, Scalar, SetFunction};

/// Seeded submodular capacity on `n` points.
pub fn capacity(n: usize) -> SetFunction {
    random_submodular(n, 42).expect("n within generator range")
}

/// Integrand `f(i) = (i * 7 mod n) / n`, injective on `n` points.
pub fn integrand(ground: &GroundSet) -> PointFunction {
    let n = ground.n() as i64;
    let values = (0..n).map(|i| Scalar::ratio(i * 7 % n, n)).collect();
    PointFunction::new(ground.clone(), values).expect("one value per point")
}
