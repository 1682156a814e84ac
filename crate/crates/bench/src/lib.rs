//! Inputs shared by the benchmarks in `benches/`.

use std::sync::Arc;

use tensorcoh::quotient::QuotientRing;
use tensorcoh::vector::ModuleOrder;
use tensorcoh::{AmbientRing, GroundField, Polynomial};

pub const VARS: [&str; 5] = ["x1", "x2", "x3", "x4", "x5"];

pub fn ambient(n: usize) -> Arc<AmbientRing> {
    AmbientRing::new(GroundField::default(), &VARS[..n]).expect("valid ring")
}

/// Polynomial ring on `n` variables with the given module order.
pub fn ring(n: usize, order: ModuleOrder) -> Arc<QuotientRing> {
    QuotientRing::with_module_order(&ambient(n), Vec::new(), order).expect("valid ring")
}

pub fn parse(s: &Arc<AmbientRing>, gens: &[&str]) -> Vec<Polynomial> {
    gens.iter().map(|g| Polynomial::parse(s, g).expect("valid polynomial")).collect()
}

/// Cyclic-4 system with the last equation homogenized by `x5`.
pub fn cyclic4(s: &Arc<AmbientRing>) -> Vec<Polynomial> {
    parse(
        s,
        &[
            "x1+x2+x3+x4",
            "x1*x2+x2*x3+x3*x4+x4*x1",
            "x1*x2*x3+x2*x3*x4+x3*x4*x1+x4*x1*x2",
            "x1*x2*x3*x4-x5^4",
        ],
    )
}

/// Generic quadrics in five variables.
pub fn quadrics(s: &Arc<AmbientRing>) -> Vec<Polynomial> {
    parse(
        s,
        &[
            "x1^2+3*x2*x3-x4*x5",
            "x2^2-2*x1*x5+x3*x4",
            "x3^2+x1*x2-5*x4^2",
            "x4^2+7*x1*x3-x2*x5",
        ],
    )
}
