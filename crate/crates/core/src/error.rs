use thiserror::Error;

use crate::model::Family;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("level index {n} out of range (n_max = {n_max})")]
    OutOfRange { n: usize, n_max: usize },

    #[error("{op} is not supported for the {family} family")]
    UnsupportedFamily { op: &'static str, family: Family },

    #[error("relative error undefined for an exact value of zero")]
    UndefinedRelativeError,

    #[error("state n = {n} is not normalizable (asymptotic decay rate {decay_rate:.6} >= 0)")]
    NonNormalizable { n: usize, decay_rate: f64 },

    #[error("integral diverges: operand decay rate {decay_rate:.6} >= 0")]
    DivergentIntegral { decay_rate: f64 },

    #[error("wavefunctions have different frequency scales ({0} vs {1})")]
    MismatchedScale(f64, f64),

    #[error("no classically allowed region at E = {energy} (min V = {v_min})")]
    NoAllowedRegion { energy: f64, v_min: f64 },

    #[error("could not bracket level n = {n}: {reason}")]
    BracketFailure { n: usize, reason: String },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("requested {requested} eigenvalues but at most {limit} are allowed for this grid")]
    TooManyEigenvalues { requested: usize, limit: usize },

    #[error("unreliable convergence order: {0}")]
    UnreliableOrder(String),
}
