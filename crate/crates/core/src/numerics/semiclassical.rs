//! WKB and SWKB quantization.
//!
//! WKB: `∫ sqrt(E - V) dx = (n + 1/2)π` between turning points of `V`.
//! SWKB: `∫ sqrt(E⁻ - W²) dx = nπ` between zeros of `E⁻ - W²`, reported as
//! `E⁻ + shift`. Both in ħ = 2m = 1 units. Action integrals use tanh-sinh
//! quadrature, which absorbs the square-root endpoint behaviour.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::quad::tanh_sinh;

use super::SolverConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurningPoints {
    /// All roots of `V(x) = E` in the domain, ascending.
    pub points: Vec<f64>,
    /// Classically allowed intervals bounded by turning points on both sides.
    pub pairs: Vec<(f64, f64)>,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemiclassicalLevel {
    pub energy: f64,
    pub turning_points: usize,
    /// More than one allowed interval; only the innermost was quantized.
    pub degraded: bool,
}

fn bisect_root<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (b - a) <= tol || mid == a || mid == b {
            break;
        }
        if f(mid).signum() == fa.signum() {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    for _ in 0..80 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Roots of `f(x) - level` on `[-c, c]`; `f < level` inside each returned pair.
fn crossings<F: Fn(f64) -> f64>(f: &F, level: f64, cfg: &SolverConfig) -> Result<TurningPoints> {
    let c = cfg.half_width;
    let samples = (cfg.grid_points / 4).max(256);
    let mut xs: Vec<f64> = (0..=samples).map(|i| -c + 2.0 * c * i as f64 / samples as f64).collect();
    let g = |x: f64| f(x) - level;
    // local minima finer than the scan can hide a narrow allowed region
    let vals: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    let mut extra = Vec::new();
    let mut v_min = f64::INFINITY;
    for i in 1..samples {
        if vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1] {
            let (xm, vm) = golden_min(&g, xs[i - 1], xs[i + 1]);
            v_min = v_min.min(vm + level);
            if vm < 0.0 && vals[i] >= 0.0 {
                extra.push(xm);
            }
        }
    }
    v_min = vals.iter().fold(v_min, |m, &v| m.min(v + level));
    if v_min >= level {
        return Err(Error::NoAllowedRegion { energy: level, v_min });
    }
    xs.extend(extra);
    xs.sort_by(f64::total_cmp);

    let mut points = Vec::new();
    let mut prev = (xs[0], g(xs[0]));
    for &x in &xs[1..] {
        let gx = g(x);
        if gx == 0.0 {
            points.push(x);
        } else if prev.1 != 0.0 && gx.signum() != prev.1.signum() {
            points.push(bisect_root(&g, prev.0, x, cfg.root_tol));
        }
        prev = (x, gx);
    }
    points.dedup_by(|a, b| (*a - *b).abs() <= cfg.root_tol);
    let pairs = points
        .windows(2)
        .filter(|w| g(0.5 * (w[0] + w[1])) < 0.0)
        .map(|w| (w[0], w[1]))
        .collect();
    Ok(TurningPoints { count: points.len(), points, pairs })
}

pub fn turning_points(params: &ModelParams, energy: f64, cfg: &SolverConfig) -> Result<TurningPoints> {
    crossings(&|x| params.potential(x), energy, cfg)
}

/// Allowed interval containing the deepest point of `f`, and whether others exist.
fn innermost<F: Fn(f64) -> f64>(f: &F, level: f64, cfg: &SolverConfig, n: usize) -> Result<((f64, f64), usize, bool)> {
    let tp = crossings(f, level, cfg)?;
    if tp.pairs.is_empty() {
        return Err(Error::BracketFailure {
            n,
            reason: format!("allowed region at E = {level} is not bounded by turning points"),
        });
    }
    let depth = |&(a, b): &(f64, f64)| golden_min(f, a, b).1;
    let best = tp
        .pairs
        .iter()
        .min_by(|x, y| depth(x).total_cmp(&depth(y)))
        .copied()
        .expect("non-empty");
    Ok((best, tp.count, tp.count > 2))
}

fn action<F: Fn(f64) -> f64>(f: &F, level: f64, cfg: &SolverConfig, n: usize) -> Result<(f64, usize, bool)> {
    let ((a, b), count, degraded) = innermost(f, level, cfg, n)?;
    let r = tanh_sinh(|x| (level - f(x)).max(0.0).sqrt(), a, b, cfg.quad_tol, 12);
    Ok((r.value, count, degraded))
}

/// `∫ sqrt(E - V) dx` over the innermost allowed interval.
pub fn wkb_action(params: &ModelParams, energy: f64, cfg: &SolverConfig) -> Result<f64> {
    Ok(action(&|x| params.potential(x), energy, cfg, 0)?.0)
}

fn quantize<F: Fn(f64) -> f64>(
    f: &F,
    target: f64,
    lo: f64,
    hi: f64,
    cfg: &SolverConfig,
    n: usize,
) -> Result<SemiclassicalLevel> {
    let top = action(f, hi, cfg, n).map_err(|e| Error::BracketFailure { n, reason: e.to_string() })?;
    if top.0 < target {
        return Err(Error::BracketFailure {
            n,
            reason: format!("action at the ceiling E = {hi} is {:.6}π < {:.6}π", top.0 / PI, target / PI),
        });
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut last = (top.1, top.2);
    for _ in 0..cfg.max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= cfg.root_tol * mid.abs().max(1.0) || mid <= lo || mid >= hi {
            break;
        }
        match action(f, mid, cfg, n) {
            Ok((s, count, degraded)) => {
                last = (count, degraded);
                if s < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Err(Error::NoAllowedRegion { .. }) => lo = mid,
            Err(e) => return Err(e),
        }
    }
    Ok(SemiclassicalLevel { energy: 0.5 * (lo + hi), turning_points: last.0, degraded: last.1 })
}

fn potential_floor<F: Fn(f64) -> f64>(f: &F, cfg: &SolverConfig) -> f64 {
    let c = cfg.half_width;
    let samples = (cfg.grid_points / 4).max(256);
    let (i_min, _) = (0..=samples)
        .map(|i| f(-c + 2.0 * c * i as f64 / samples as f64))
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    let dx = 2.0 * c / samples as f64;
    let x = -c + dx * i_min as f64;
    golden_min(f, x - dx, x + dx).1
}

pub fn wkb_level(params: &ModelParams, n: usize, cfg: &SolverConfig) -> Result<SemiclassicalLevel> {
    cfg.validate()?;
    let v = |x: f64| params.potential(x);
    let lo = potential_floor(&v, cfg);
    quantize(&v, (n as f64 + 0.5) * PI, lo, cfg.energy_ceiling(params), cfg, n)
}

pub fn wkb_energy(params: &ModelParams, n: usize, cfg: &SolverConfig) -> Result<f64> {
    Ok(wkb_level(params, n, cfg)?.energy)
}

pub fn swkb_level(params: &ModelParams, n: usize, cfg: &SolverConfig) -> Result<SemiclassicalLevel> {
    cfg.validate()?;
    let shift = params.shift();
    if n == 0 {
        return Ok(SemiclassicalLevel { energy: shift, turning_points: 0, degraded: false });
    }
    let stage = params.stage(0);
    let w2 = |x: f64| params.superpotential(&stage, x).powi(2);
    let hi = cfg.energy_ceiling(params) - shift;
    let level = quantize(&w2, n as f64 * PI, 0.0, hi, cfg, n)?;
    Ok(SemiclassicalLevel { energy: level.energy + shift, ..level })
}

pub fn swkb_energy(params: &ModelParams, n: usize, cfg: &SolverConfig) -> Result<f64> {
    Ok(swkb_level(params, n, cfg)?.energy)
}
