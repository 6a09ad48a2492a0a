//! Finite-difference spectrum: the lowest eigenvalues of the Dirichlet
//! central-difference Hamiltonian via Sturm bisection.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::ModelParams;

use super::tridiag::TridiagonalOperator;
use super::SolverConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct FdEigenpair {
    pub energy: f64,
    /// Grid abscissae of the interior points.
    pub x: Vec<f64>,
    /// Eigenvector normalized so that `Σ ψ_i² h = 1`.
    pub psi: Vec<f64>,
}

fn check_request(cfg: &SolverConfig, m: usize) -> Result<()> {
    let limit = cfg.grid_points / 4;
    if m > limit {
        return Err(Error::TooManyEigenvalues { requested: m, limit });
    }
    Ok(())
}

/// The `m` lowest eigenvalues, ascending.
pub fn fd_spectrum(params: &ModelParams, cfg: &SolverConfig, m: usize) -> Result<Vec<f64>> {
    check_request(cfg, m)?;
    if m == 0 {
        return Ok(Vec::new());
    }
    let op = TridiagonalOperator::from_model(params, cfg)?;
    Ok((0..m).into_par_iter().map(|k| op.eigenvalue(k)).collect())
}

/// The `m` lowest eigenpairs; eigenvectors from inverse iteration.
pub fn fd_eigenpairs(params: &ModelParams, cfg: &SolverConfig, m: usize) -> Result<Vec<FdEigenpair>> {
    check_request(cfg, m)?;
    let op = TridiagonalOperator::from_model(params, cfg)?;
    let x: Vec<f64> = (0..op.n).map(|i| op.x(i)).collect();
    (0..m)
        .into_par_iter()
        .map(|k| {
            let (energy, psi) = op.eigenpair(k, cfg.max_iter)?;
            Ok(FdEigenpair { energy, x: x.clone(), psi })
        })
        .collect()
}

/// Observed order `log2((e1 - e2) / (e2 - e3))` from three halvings of `h`.
pub fn richardson_order(e1: f64, e2: f64, e3: f64) -> Result<f64> {
    let (d1, d2) = (e1 - e2, e2 - e3);
    let floor = 1e-12 * e1.abs().max(1.0);
    if d1.abs() <= floor || d2.abs() <= floor {
        return Err(Error::UnreliableOrder(format!(
            "differences {d1:.3e}, {d2:.3e} are at the round-off floor"
        )));
    }
    if d1.signum() != d2.signum() {
        return Err(Error::UnreliableOrder(format!(
            "non-monotone sequence {e1}, {e2}, {e3}"
        )));
    }
    Ok((d1 / d2).log2())
}

/// Grid-convergence order of level `n` from grids with spacing `h`, `h/2`, `h/4`.
pub fn richardson_check(params: &ModelParams, n: usize, cfg: &SolverConfig) -> Result<f64> {
    let energies = [0u32, 1, 2]
        .into_par_iter()
        .map(|level| {
            let f = 1usize << level;
            // (N + 1) → 2(N + 1) intervals halves h exactly
            let grid_points = f * (cfg.grid_points + 1) - 1;
            let c = SolverConfig { grid_points, ..*cfg };
            let op = TridiagonalOperator::from_model(params, &c)?;
            Ok(op.eigenvalue(n))
        })
        .collect::<Result<Vec<f64>>>()?;
    richardson_order(energies[0], energies[1], energies[2])
}
