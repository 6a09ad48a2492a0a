use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{relative_error, ModelParams};
use crate::numerics::{fd_spectrum, shooting_solve, sturm_count, swkb_energy, wkb_energy, SolverConfig, TridiagonalOperator};

/// Numerical eigensolvers compared against the exact spectrum, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "NDE")]
    Nde,
    #[serde(rename = "WKB")]
    Wkb,
    #[serde(rename = "SWKB")]
    Swkb,
    Shooting,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Nde, Method::Wkb, Method::Swkb, Method::Shooting];

    pub fn label(self) -> &'static str {
        match self {
            Method::Nde => "NDE",
            Method::Wkb => "WKB",
            Method::Swkb => "SWKB",
            Method::Shooting => "Shooting",
        }
    }

    /// Whether the solver can see states beyond the continuum threshold.
    fn reaches_above_threshold(self) -> bool {
        matches!(self, Method::Nde | Method::Shooting)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nde" | "fd" => Ok(Method::Nde),
            "wkb" => Ok(Method::Wkb),
            "swkb" => Ok(Method::Swkb),
            "shooting" => Ok(Method::Shooting),
            other => Err(Error::InvalidArgument(format!(
                "unknown method {other:?} (expected nde, wkb, swkb or shooting)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    Ok,
    AboveAsymptote,
    OnAsymptote,
    Skipped,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Ok => "ok",
            Flag::AboveAsymptote => "above_asymptote",
            Flag::OnAsymptote => "on_asymptote",
            Flag::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodEntry {
    pub value: Option<f64>,
    /// Percent relative error; absent without a value or when the exact energy is zero.
    pub err_pct: Option<f64>,
    pub flag: Flag,
}

impl MethodEntry {
    pub const SKIPPED: MethodEntry = MethodEntry { value: None, err_pct: None, flag: Flag::Skipped };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub n: usize,
    pub exact: f64,
    pub per_method: BTreeMap<Method, MethodEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableOptions {
    pub methods: Vec<Method>,
    /// Also ask the box-sensitive solvers for the first state at or above the threshold.
    pub replicate_above_asymptote: bool,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { methods: Method::ALL.to_vec(), replicate_above_asymptote: false }
    }
}

/// Energies a method reports: ordinary bound levels plus an optional
/// above-threshold state.
fn method_levels(params: &ModelParams, cfg: &SolverConfig, method: Method, replicate: bool) -> Vec<f64> {
    let limit = params.n_max() + 1;
    let solve = |n: usize, c: &SolverConfig| -> Result<f64> {
        match method {
            Method::Nde => Ok(TridiagonalOperator::from_model(params, c)?.eigenvalue(n)),
            Method::Wkb => wkb_energy(params, n, c),
            Method::Swkb => swkb_energy(params, n, c),
            Method::Shooting => shooting_solve(params, c, n),
        }
    };

    let mut levels = match method {
        Method::Nde => {
            let count = TridiagonalOperator::from_model(params, cfg)
                .map(|op| sturm_count(&op, cfg.energy_ceiling(params)).min(limit))
                .unwrap_or(0);
            fd_spectrum(params, cfg, count).unwrap_or_default()
        }
        _ => {
            let all: Vec<Result<f64>> = (0..limit).into_par_iter().map(|n| solve(n, cfg)).collect();
            all.into_iter().map_while(|r| r.ok()).collect()
        }
    };

    if replicate && method.reaches_above_threshold() {
        if let Some(threshold) = params.continuum_threshold() {
            let open = SolverConfig { allow_above_threshold: true, ..*cfg };
            if let Ok(e) = solve(levels.len(), &open) {
                if e >= threshold - cfg.energy_tol {
                    levels.push(e);
                }
            }
        }
    }
    levels
}

fn flag_for(value: f64, threshold: Option<f64>, tol: f64) -> Flag {
    match threshold {
        Some(t) if value > t + tol => Flag::AboveAsymptote,
        Some(t) if (value - t).abs() <= tol => Flag::OnAsymptote,
        _ => Flag::Ok,
    }
}

/// Exact spectrum beside the numerical methods. Each numerical level is
/// placed in the row of the nearest exact energy; rows a method does not
/// reach are flagged skipped. Solver failures never abort the table.
pub fn build_table(params: &ModelParams, cfg: &SolverConfig, opts: &TableOptions) -> Result<Vec<SpectrumRow>> {
    params.validate()?;
    cfg.validate()?;
    let exact: Vec<f64> = (0..=params.n_max()).map(|n| params.exact_energy(n)).collect::<Result<_>>()?;
    let mut methods = opts.methods.clone();
    methods.sort();
    methods.dedup();

    let columns: Vec<(Method, Vec<f64>)> = methods
        .par_iter()
        .map(|&m| (m, method_levels(params, cfg, m, opts.replicate_above_asymptote)))
        .collect();

    let threshold = params.continuum_threshold();
    let mut rows: Vec<SpectrumRow> = exact
        .iter()
        .enumerate()
        .map(|(n, &e)| SpectrumRow {
            n,
            exact: e,
            per_method: methods.iter().map(|&m| (m, MethodEntry::SKIPPED)).collect(),
        })
        .collect();

    for (method, values) in columns {
        let mut best: Vec<Option<f64>> = vec![None; exact.len()];
        for v in values {
            let row = nearest(&exact, v);
            // a second value for the same row keeps the closer one
            if best[row].is_none_or(|b| (b - exact[row]).abs() > (v - exact[row]).abs()) {
                best[row] = Some(v);
            }
        }
        for (row, value) in rows.iter_mut().zip(best) {
            if let Some(v) = value {
                row.per_method.insert(
                    method,
                    MethodEntry {
                        value: Some(v),
                        err_pct: relative_error(row.exact, v).ok(),
                        flag: flag_for(v, threshold, cfg.energy_tol),
                    },
                );
            }
        }
    }
    Ok(rows)
}

fn nearest(exact: &[f64], v: f64) -> usize {
    exact
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - v).abs().total_cmp(&(b.1 - v).abs()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}
