//! Two-sided Numerov shooting.
//!
//! The level index is bracketed by counting nodes of the solution shot from
//! the left wall; the bracket is then closed on the Numerov Wronskian between
//! the left and right solutions at the potential minimum.

use crate::error::{Error, Result};
use crate::model::ModelParams;

use super::SolverConfig;

const RENORMALIZE_ABOVE: f64 = 1e120;

pub(crate) struct Shooter {
    h: f64,
    v: Vec<f64>,
    /// Index of the matching point.
    m: usize,
}

impl Shooter {
    pub(crate) fn new(params: &ModelParams, cfg: &SolverConfig) -> Result<Self> {
        cfg.validate()?;
        let h = cfg.spacing();
        let n = cfg.grid_points + 2;
        let v: Vec<f64> = (0..n).map(|i| params.potential(-cfg.half_width + i as f64 * h)).collect();
        // matching point: rightmost global minimum, kept away from the walls
        let mut m = 2;
        for i in 2..n - 2 {
            if v[i] <= v[m] {
                m = i;
            }
        }
        Ok(Shooter { h, v, m })
    }

    fn weights(&self, energy: f64) -> impl Fn(usize) -> f64 + '_ {
        let k = self.h * self.h / 12.0;
        move |i| 1.0 - k * (self.v[i] - energy)
    }

    /// Nodes of the left-shot solution in the open domain.
    pub(crate) fn node_count(&self, energy: f64) -> usize {
        let w = self.weights(energy);
        let n = self.v.len();
        // y_i = w_i ψ_i, y_{i+1} = (12 - 10 w_i) / w_i · y_i - y_{i-1}
        let (mut y_prev, mut y) = (0.0, self.h * w(1));
        let mut nodes = 0;
        let mut sign = 1.0;
        for i in 1..n - 2 {
            let wi = w(i);
            let y_next = (12.0 - 10.0 * wi) / wi * y - y_prev;
            y_prev = y;
            y = y_next;
            if y != 0.0 {
                let s = y.signum() * w(i + 1).signum();
                if s != sign {
                    nodes += 1;
                    sign = s;
                }
            }
            if y.abs() > RENORMALIZE_ABOVE {
                y /= RENORMALIZE_ABOVE;
                y_prev /= RENORMALIZE_ABOVE;
            }
        }
        nodes
    }

    /// Normalized Numerov Wronskian of the left and right solutions at the matching point.
    pub(crate) fn defect(&self, energy: f64) -> f64 {
        let w = self.weights(energy);
        let n = self.v.len();
        let m = self.m;
        let step = |y: f64, y_prev: f64, i: usize| (12.0 - 10.0 * w(i)) / w(i) * y - y_prev;

        let (mut l0, mut l1) = (0.0, self.h * w(1));
        for i in 1..=m {
            let next = step(l1, l0, i);
            l0 = l1;
            l1 = next;
            let s = l0.abs().max(l1.abs());
            if s > RENORMALIZE_ABOVE {
                l0 /= s;
                l1 /= s;
            }
        }
        // l0 = y_m, l1 = y_{m+1}
        let (mut r0, mut r1) = (0.0, self.h * w(n - 2));
        for i in (m + 1..=n - 2).rev() {
            let next = step(r1, r0, i);
            r0 = r1;
            r1 = next;
            let s = r0.abs().max(r1.abs());
            if s > RENORMALIZE_ABOVE {
                r0 /= s;
                r1 /= s;
            }
        }
        // r1 = y_m, r0 = y_{m+1}
        let wronskian = l0 * r0 - l1 * r1;
        wronskian / ((l0 * l0 + l1 * l1).sqrt() * (r0 * r0 + r1 * r1).sqrt())
    }

    fn v_min(&self) -> f64 {
        self.v.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Energy of level `n` by shooting.
pub fn shooting_solve(params: &ModelParams, cfg: &SolverConfig, n: usize) -> Result<f64> {
    let shooter = Shooter::new(params, cfg)?;
    let ceiling = cfg.energy_ceiling(params);
    let mut lo = shooter.v_min();
    let mut hi = ceiling;
    if shooter.node_count(hi) <= n {
        return Err(Error::BracketFailure {
            n,
            reason: format!("fewer than {} levels below E = {hi}", n + 1),
        });
    }
    // narrow until exactly one level sits in (lo, hi]
    let mut iterations = 0;
    loop {
        let (c_lo, c_hi) = (shooter.node_count(lo), shooter.node_count(hi));
        if c_lo == n && c_hi == n + 1 {
            break;
        }
        iterations += 1;
        if iterations > cfg.max_iter || hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
            return Err(Error::NoConvergence { what: "shooting node bisection", iterations });
        }
        let mid = 0.5 * (lo + hi);
        if shooter.node_count(mid) > n {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    // Illinois regula falsi on the matching defect
    let (mut f_lo, mut f_hi) = (shooter.defect(lo), shooter.defect(hi));
    let mut side = 0i8;
    for _ in 0..cfg.max_iter {
        let mut e = if f_lo.signum() != f_hi.signum() {
            (lo * f_hi - hi * f_lo) / (f_hi - f_lo)
        } else {
            0.5 * (lo + hi)
        };
        if !(e > lo && e < hi) {
            e = 0.5 * (lo + hi);
        }
        let f = shooter.defect(e);
        if f.abs() < cfg.root_tol || hi - lo <= 4.0 * f64::EPSILON * e.abs().max(1.0) {
            return Ok(e);
        }
        // keep the bracket on the node count, which is unambiguous
        if shooter.node_count(e) > n {
            hi = e;
            f_hi = f;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        } else {
            lo = e;
            f_lo = f;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        }
    }
    Err(Error::NoConvergence { what: "shooting defect refinement", iterations: cfg.max_iter })
}
