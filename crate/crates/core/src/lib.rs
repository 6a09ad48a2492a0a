//! Supersymmetric shape-invariant potentials: exact spectra and eigenstates,
//! and the numerical methods used to check them.

pub mod config;
pub mod error;
pub mod harness;
pub mod laurent;
pub mod model;
pub mod numerics;
pub mod quad;
pub mod wavefunction;

pub use error::{Error, Result};
pub use model::{relative_error, Family, ModelParams, ParamStage, PotentialSample, SpectrumExact};
pub use numerics::SolverConfig;
pub use wavefunction::{build_state, inner_product, residual, Direction, ExactWavefunction, LadderStage, Parity};
