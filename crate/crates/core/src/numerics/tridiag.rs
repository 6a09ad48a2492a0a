//! Symmetric tridiagonal operators with constant off-diagonal, Sturm-sequence
//! bisection and inverse iteration.

use crate::error::{Error, Result};
use crate::model::ModelParams;

use super::SolverConfig;

/// Central-difference discretization of `-d²/dx² + V` with Dirichlet walls.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    /// `2/h² + V(x_i)`
    pub diag: Vec<f64>,
    /// `-1/h²`
    pub offdiag: f64,
    pub h: f64,
    pub n: usize,
    /// Abscissa of the first interior point.
    pub x0: f64,
}

impl TridiagonalOperator {
    pub fn from_model(params: &ModelParams, cfg: &SolverConfig) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.grid_points;
        let h = cfg.spacing();
        let x0 = -cfg.half_width + h;
        let diag = (0..n)
            .map(|i| 2.0 / (h * h) + params.potential(x0 + i as f64 * h))
            .collect();
        Ok(TridiagonalOperator { diag, offdiag: -1.0 / (h * h), h, n, x0 })
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.h
    }

    pub fn gershgorin(&self) -> (f64, f64) {
        let e = self.offdiag.abs();
        self.diag.iter().enumerate().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (i, &d)| {
            let r = e * ((i > 0) as u8 + (i + 1 < self.n) as u8) as f64;
            (lo.min(d - r), hi.max(d + r))
        })
    }

    /// `index`-th smallest eigenvalue (0-based) by Sturm bisection.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
            if sturm_count(self, mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Whether the diagonal is mirror-symmetric, i.e. the potential is even on the grid.
    pub fn is_even(&self) -> bool {
        let scale = self.diag.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        (0..self.n / 2).all(|i| (self.diag[i] - self.diag[self.n - 1 - i]).abs() <= 1e-12 * scale)
    }

    /// Unit-norm (`Σ ψ_i² h = 1`) eigenvector for an eigenvalue estimate.
    pub fn eigenvector(&self, lambda: f64, max_iter: usize) -> Result<Vec<f64>> {
        self.inverse_iteration(lambda, None, max_iter)
    }

    /// The `index`-th eigenpair. For an even potential the iteration is kept
    /// in the parity sector `(-1)^index`, which separates tunnelling pairs
    /// that are degenerate to machine precision.
    pub fn eigenpair(&self, index: usize, max_iter: usize) -> Result<(f64, Vec<f64>)> {
        let lambda = self.eigenvalue(index);
        let parity = self.is_even().then_some(if index.is_multiple_of(2) { 1.0 } else { -1.0 });
        Ok((lambda, self.inverse_iteration(lambda, parity, max_iter)?))
    }

    fn inverse_iteration(&self, lambda: f64, parity: Option<f64>, max_iter: usize) -> Result<Vec<f64>> {
        let n = self.n;
        let e = self.offdiag;
        let tiny = f64::EPSILON * e.abs();
        // LU of (T - lambda I) without pivoting, guarding small pivots.
        let mut piv = vec![0.0; n];
        piv[0] = self.diag[0] - lambda;
        for i in 1..n {
            if piv[i - 1].abs() < tiny {
                piv[i - 1] = tiny;
            }
            piv[i] = self.diag[i] - lambda - e * e / piv[i - 1];
        }
        if piv[n - 1].abs() < tiny {
            piv[n - 1] = tiny;
        }
        let solve = |rhs: &[f64]| -> Vec<f64> {
            let mut y = rhs.to_vec();
            for i in 1..n {
                y[i] -= e / piv[i - 1] * y[i - 1];
            }
            let mut x = vec![0.0; n];
            x[n - 1] = y[n - 1] / piv[n - 1];
            for i in (0..n - 1).rev() {
                x[i] = (y[i] - e * x[i + 1]) / piv[i];
            }
            x
        };
        let project = |v: &mut Vec<f64>| {
            if let Some(s) = parity {
                for i in 0..n / 2 {
                    let j = n - 1 - i;
                    let a = 0.5 * (v[i] + s * v[j]);
                    v[i] = a;
                    v[j] = s * a;
                }
                if n % 2 == 1 && s < 0.0 {
                    v[n / 2] = 0.0;
                }
            }
        };
        let normalize = |v: &mut Vec<f64>| {
            let norm = (v.iter().map(|a| a * a).sum::<f64>() * self.h).sqrt();
            v.iter_mut().for_each(|a| *a /= norm);
        };
        let residual = |v: &[f64]| -> f64 {
            (0..n)
                .map(|i| {
                    let mut t = (self.diag[i] - lambda) * v[i];
                    if i > 0 {
                        t += e * v[i - 1];
                    }
                    if i + 1 < n {
                        t += e * v[i + 1];
                    }
                    t.abs()
                })
                .fold(0.0, f64::max)
        };
        let norm_t = self.diag.iter().fold(0.0f64, |m, d| m.max(d.abs())) + 2.0 * e.abs();
        // deterministic start vector with no special symmetry
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_7).sin()).collect();
        project(&mut v);
        normalize(&mut v);
        for _ in 0..max_iter {
            let mut w = solve(&v);
            project(&mut w);
            normalize(&mut w);
            let dot: f64 = w.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() * self.h;
            if dot < 0.0 {
                w.iter_mut().for_each(|a| *a = -*a);
            }
            let diff = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let peak = w.iter().fold(0.0f64, |m, a| m.max(a.abs()));
            v = w;
            if diff <= 1e-10 * peak || residual(&v) <= 1e-12 * norm_t * peak {
                return Ok(v);
            }
        }
        Err(Error::NoConvergence { what: "inverse iteration", iterations: max_iter })
    }
}

/// Number of eigenvalues strictly below `lambda` (negative pivots of the
/// shifted LDLᵀ recurrence).
pub fn sturm_count(op: &TridiagonalOperator, lambda: f64) -> usize {
    let e2 = op.offdiag * op.offdiag;
    let guard = f64::EPSILON * op.offdiag.abs();
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in op.diag.iter().enumerate() {
        q = if i == 0 { d - lambda } else { d - lambda - e2 / q };
        if q == 0.0 || q.abs() < guard {
            q = -guard;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator_op(grid_points: usize) -> TridiagonalOperator {
        let m = ModelParams::oscillator(1.0).unwrap();
        let cfg = SolverConfig { half_width: 12.0, grid_points, ..Default::default() };
        TridiagonalOperator::from_model(&m, &cfg).unwrap()
    }

    #[test]
    fn sturm_count_limits() {
        let op = oscillator_op(4000);
        let (lo, hi) = op.gershgorin();
        assert_eq!(sturm_count(&op, lo - 1.0), 0);
        assert_eq!(sturm_count(&op, hi + 1.0), op.n);
        assert_eq!(sturm_count(&op, 4.0), 2);
    }

    #[test]
    fn sturm_count_is_monotone() {
        let op = oscillator_op(2000);
        let mut last = 0;
        for i in 0..400 {
            let c = sturm_count(&op, -5.0 + 0.1 * i as f64);
            assert!(c >= last);
            last = c;
        }
    }

    #[test]
    fn small_matrix_against_closed_form() {
        // tridiag(-1, 2, -1) of size n has eigenvalues 2 - 2cos(kπ/(n+1)).
        let n = 7;
        let op = TridiagonalOperator { diag: vec![2.0; n], offdiag: -1.0, h: 1.0, n, x0: 0.0 };
        for k in 0..n {
            let want = 2.0 - 2.0 * (((k + 1) as f64) * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((op.eigenvalue(k) - want).abs() < 1e-13);
            let v = op.eigenvector(op.eigenvalue(k), 50).unwrap();
            // residual ‖Tv - λv‖
            let lam = op.eigenvalue(k);
            for i in 0..n {
                let mut tv = 2.0 * v[i];
                if i > 0 {
                    tv -= v[i - 1];
                }
                if i + 1 < n {
                    tv -= v[i + 1];
                }
                assert!((tv - lam * v[i]).abs() < 1e-9);
            }
        }
    }
}
