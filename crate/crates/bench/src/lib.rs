//! Fixtures shared by the benchmarks.

use ness_core::{BathSpec, ModelParams};

/// A symmetric and a nonsymmetric chain, each at a moderate temperature bias.
pub fn regimes() -> [(&'static str, ModelParams, BathSpec); 2] {
    [
        (
            "symmetric",
            ModelParams::new(1.0, 1.0, 1.0).unwrap(),
            BathSpec::with_default_gamma(0.3, 0.5).unwrap(),
        ),
        (
            "nonsymmetric",
            ModelParams::new(3.0, 0.5, 2.5).unwrap(),
            BathSpec::from_mean_difference(0.4, -0.3, 0.05, 0.05).unwrap(),
        ),
    ]
}
