//! Shared fixtures for the benchmarks in `benches/`.

use lnash::exactnum::rat_int;
use lnash::{ExactScalar, LatticeSpec};
use num_complex::Complex64;

/// The square lattice ⟨1, i⟩.
pub fn gauss() -> LatticeSpec {
    LatticeSpec::from_omega(&ExactScalar::gaussian(rat_int(0), rat_int(1))).expect("valid lattice")
}

/// Points spread over a fundamental parallelogram, away from the lattice.
pub fn points(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let t = (k as f64 + 0.5) / n as f64;
            let s = (k as f64 * 0.618_033_988_75).fract();
            Complex64::new(0.1 + 0.8 * t, 0.1 + 0.8 * s)
        })
        .collect()
}
