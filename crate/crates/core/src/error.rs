use alloc::string::String;

use num_complex::Complex64;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("product did not converge within {cap} terms (needed {needed})")]
    NonConvergent { needed: usize, cap: usize },
    #[error("argument {arg} lies within the pole-exclusion radius{}", factor_suffix(.factor))]
    Pole { arg: Complex64, factor: Option<String> },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unbound symbol `{0}`")]
    Unbound(String),
    #[error("pole on the unit circle: {0}")]
    Degenerate(String),
    #[error("quadrature did not converge (estimate {estimate}, est. error {est_error:e})")]
    NotConverged { estimate: Complex64, est_error: f64 },
    #[error("constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("no admissible sample after {0} draws")]
    SamplingExhausted(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

fn factor_suffix(factor: &Option<String>) -> String {
    match factor {
        Some(f) => alloc::format!(" (factor {f})"),
        None => String::new(),
    }
}
