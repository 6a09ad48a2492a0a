//! Numerical eigensolvers for `-ψ'' + Vψ = Eψ` on a finite box.
//!
//! Four independent routes: finite differences with Sturm bisection
//! ([`fd`]), two-sided Numerov shooting ([`shooting`]), and WKB / SWKB
//! quantization ([`semiclassical`]).

pub mod fd;
pub mod semiclassical;
pub mod shooting;
pub mod tridiag;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, ORACLE_LEVELS};

pub use fd::{fd_eigenpairs, fd_spectrum, richardson_check, richardson_order, FdEigenpair};
pub use semiclassical::{
    swkb_energy, swkb_level, turning_points, wkb_action, wkb_energy, wkb_level, SemiclassicalLevel,
    TurningPoints,
};
pub use shooting::shooting_solve;
pub use tridiag::{sturm_count, TridiagonalOperator};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Dirichlet walls at `±half_width`.
    pub half_width: f64,
    /// Interior grid points.
    pub grid_points: usize,
    pub energy_tol: f64,
    pub root_tol: f64,
    pub max_iter: usize,
    pub quad_tol: f64,
    /// Let the solvers return levels at or above the continuum threshold.
    #[serde(default)]
    pub allow_above_threshold: bool,
}

pub const DEFAULT_GRID_POINTS: usize = 32_000;

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            half_width: 24.0,
            grid_points: DEFAULT_GRID_POINTS,
            energy_tol: 1e-2,
            root_tol: 1e-10,
            max_iter: 200,
            quad_tol: 1e-10,
            allow_above_threshold: false,
        }
    }
}

impl SolverConfig {
    /// Defaults with a domain wide enough for the slowest-decaying exact state.
    pub fn for_model(params: &ModelParams) -> Self {
        let half_width = match *params {
            ModelParams::HarmonicOscillatorOracle { omega } => {
                let top = (2 * ORACLE_LEVELS + 1) as f64 / omega;
                (12.0 / omega.sqrt()).max(2.0 * top.sqrt())
            }
            _ => {
                let r_min = (0..=params.n_max())
                    .filter_map(|n| params.state_decay_rate(n))
                    .map(f64::abs)
                    .fold(f64::INFINITY, f64::min);
                // rounded so the echoed configuration stays readable
                ((18.0 / r_min).clamp(8.0 / params.p(), 400.0) * 1e6).round() / 1e6
            }
        };
        SolverConfig { half_width, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.half_width > 0.0
            && self.half_width.is_finite()
            && self.grid_points >= 64
            && self.energy_tol > 0.0
            && self.root_tol > 0.0
            && self.quad_tol > 0.0
            && self.max_iter > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "solver config requires half_width > 0, grid_points >= 64 and positive tolerances: {self:?}"
            )))
        }
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.grid_points + 1) as f64
    }

    /// Upper energy bound for bracketing bound states.
    pub(crate) fn energy_ceiling(&self, params: &ModelParams) -> f64 {
        let c = self.half_width;
        let v_edge = params.potential(c).min(params.potential(-c));
        let below = |v: f64| v - 1e-9 * v.abs().max(1.0);
        match params.continuum_threshold() {
            // the box edge must stay classically forbidden, even for tails that reach the threshold slowly
            Some(t) if !self.allow_above_threshold => below(t.min(v_edge)),
            // confining potential: stop where the walls start to matter
            None => below(v_edge),
            Some(_) => {
                let v_edge = params.potential(c).max(params.potential(-c));
                let v_max = (0..=2000)
                    .map(|i| params.potential(-c + 2.0 * c * i as f64 / 2000.0))
                    .fold(v_edge, f64::max);
                v_max + 4.0 / self.spacing().powi(2)
            }
        }
    }
}
