//! Shared inputs for the benchmarks.

use eddeg_core::ed::VarietySpec;

pub fn nodal_cubic() -> VarietySpec {
    VarietySpec::new(3, vec!["x1*x2^2 - x0*x3^2 + i*x0*x2^2"], "nodal cubic")
}

pub fn nodal_product() -> VarietySpec {
    VarietySpec::new(
        3,
        vec!["x0^2*x2^4 + x1^2*x2^4 - 2*x0*x1*x2^2*x3^2 + x0^2*x3^4"],
        "conjugate product",
    )
}

pub fn twisted_sphere() -> VarietySpec {
    VarietySpec::new(4, vec!["x0^2 - x3*x4", "x0^2 - x1^2 - x2^2 - x3^2 - x4^2"], "binomial on the sphere")
}

pub const PENCIL_GERM: &str = "u^4 - 2*i*u^2 + v^4 + u^2*v^2";
