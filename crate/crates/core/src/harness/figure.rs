use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Family, ModelParams};
use crate::numerics::{fd_eigenpairs, SolverConfig};
use crate::wavefunction::{build_state, ExactWavefunction};

/// Displayed amplitude of each state, as a fraction of the mean level
/// spacing: the stacked curve is `E_n + AMPLITUDE_FRACTION · Δ · ψ/max|ψ|`.
pub const AMPLITUDE_FRACTION: f64 = 0.4;

/// Samples per curve.
const SAMPLES: usize = 801;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureKind {
    Fig1,
    Fig2,
}

impl FigureKind {
    pub fn name(self) -> &'static str {
        match self {
            FigureKind::Fig1 => "fig1",
            FigureKind::Fig2 => "fig2",
        }
    }

    pub fn family(self) -> Family {
        match self {
            FigureKind::Fig1 => Family::Tanh6,
            FigureKind::Fig2 => Family::ScarfII,
        }
    }

    /// Parameters used when none are given.
    pub fn default_params(self) -> ModelParams {
        match self {
            FigureKind::Fig1 => ModelParams::default(),
            FigureKind::Fig2 => ModelParams::ScarfII { a: 7.0, b: 4.0, p: 1.0 },
        }
    }
}

impl FromStr for FigureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fig1" | "1" => Ok(FigureKind::Fig1),
            "fig2" | "2" => Ok(FigureKind::Fig2),
            other => Err(Error::InvalidArgument(format!("unknown figure {other:?} (expected fig1 or fig2)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub n: usize,
    pub exact: f64,
    /// Finite-difference eigenvalue with `n` nodes.
    pub numeric: f64,
    /// The numeric value is not a bound state and the exact one is drawn instead.
    pub substituted: bool,
}

impl Level {
    pub fn drawn(&self) -> f64 {
        if self.substituted {
            self.exact
        } else {
            self.numeric
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateTrace {
    pub n: usize,
    pub exact: Vec<f64>,
    pub numeric: Vec<f64>,
    pub exact_nodes: usize,
    pub numeric_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotBundle {
    pub which: FigureKind,
    pub params: ModelParams,
    pub potential: Vec<(f64, f64)>,
    pub levels: Vec<Level>,
    /// Common abscissae of every state trace.
    pub x: Vec<f64>,
    /// Normalized `ψ_n`; exact and numeric share the sign of the largest lobe.
    pub states: Vec<StateTrace>,
    /// Multiplier from `ψ/max|ψ|` to energy units in the stacked display.
    pub amplitude: f64,
}

/// Visible nodes: sign changes among samples above 1e-6 of the peak, so
/// round-off in forbidden regions is not counted.
fn sign_changes(values: &[f64]) -> usize {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut count = 0;
    let mut last = 0.0;
    for &v in values.iter().filter(|v| v.abs() > 1e-6 * peak) {
        if last != 0.0 && v.signum() != last {
            count += 1;
        }
        last = v.signum();
    }
    count
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let h = xs[1] - xs[0];
    let t = (x - xs[0]) / h;
    if t <= 0.0 || t >= (xs.len() - 1) as f64 {
        return 0.0;
    }
    let i = t.floor() as usize;
    let f = t - i as f64;
    ys[i] * (1.0 - f) + ys[i + 1] * f
}

/// Plot data for the eigenfunction overlays: potential, levels and exact
/// versus finite-difference states on a common grid.
pub fn build_figure(params: &ModelParams, cfg: &SolverConfig, which: FigureKind) -> Result<PlotBundle> {
    params.validate()?;
    cfg.validate()?;
    if params.family() != which.family() {
        return Err(Error::UnsupportedFamily { op: which.name(), family: params.family() });
    }
    let n_max = params.n_max();
    let states: Vec<ExactWavefunction> = (0..=n_max).into_par_iter().map(|n| build_state(params, n)).collect::<Result<_>>()?;
    let pairs = fd_eigenpairs(params, cfg, n_max + 1)?;
    let threshold = params.continuum_threshold().unwrap_or(f64::INFINITY);

    // window wide enough for the loosest state, inside the solver box
    let reach = states
        .iter()
        .map(|wf| {
            let (a, b) = wf.extent(1e-4);
            a.abs().max(b.abs())
        })
        .fold(0.0, f64::max)
        .min(cfg.half_width);
    let x: Vec<f64> = (0..SAMPLES).map(|i| -reach + 2.0 * reach * i as f64 / (SAMPLES - 1) as f64).collect();

    let mut levels = Vec::with_capacity(n_max + 1);
    let mut traces = Vec::with_capacity(n_max + 1);
    for (n, (wf, pair)) in states.iter().zip(&pairs).enumerate() {
        let exact_e = params.exact_energy(n)?;
        levels.push(Level {
            n,
            exact: exact_e,
            numeric: pair.energy,
            substituted: pair.energy >= threshold - cfg.energy_tol,
        });
        let exact: Vec<f64> = x.iter().map(|&xi| wf.evaluate(xi)).collect();
        let mut numeric: Vec<f64> = x.iter().map(|&xi| interpolate(&pair.x, &pair.psi, xi)).collect();
        let anchor = exact
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        if numeric[anchor].signum() != exact[anchor].signum() {
            numeric.iter_mut().for_each(|v| *v = -*v);
        }
        // node counts use the full solver grid, not the display samples
        let (a, b) = wf.extent(1e-10);
        let numeric_nodes = sign_changes(&pair.psi);
        traces.push(StateTrace { n, exact_nodes: wf.node_count((a, b)), numeric_nodes, exact, numeric });
    }

    let potential = x.iter().map(|&xi| (xi, params.potential(xi))).collect();
    let spacing = if n_max > 0 {
        (levels[n_max].exact - levels[0].exact) / n_max as f64
    } else {
        1.0
    };
    Ok(PlotBundle {
        which,
        params: *params,
        potential,
        levels,
        x,
        states: traces,
        amplitude: AMPLITUDE_FRACTION * spacing,
    })
}

/// Columnar text files `(name, contents)` for a bundle, each opening with
/// the provenance line (if any) and then a header.
pub fn figure_files(bundle: &PlotBundle, provenance: Option<&serde_json::Value>) -> Vec<(String, String)> {
    let name = bundle.which.name();
    let head = |out: &mut String| {
        if let Some(p) = provenance {
            let _ = writeln!(out, "# config {p}");
        }
    };

    let mut pot = String::new();
    head(&mut pot);
    pot.push_str("x V\n");
    for (x, v) in &bundle.potential {
        let _ = writeln!(pot, "{x:.6} {v:.6}");
    }

    let mut lev = String::new();
    head(&mut lev);
    lev.push_str("n exact numeric drawn substituted\n");
    for l in &bundle.levels {
        let _ = writeln!(lev, "{} {:.6} {:.6} {:.6} {}", l.n, l.exact, l.numeric, l.drawn(), l.substituted as u8);
    }

    let mut st = String::new();
    head(&mut st);
    let _ = writeln!(st, "# stacked columns: E_n + {:.6} * psi / max|psi|", bundle.amplitude);
    st.push('x');
    for s in &bundle.states {
        let _ = write!(st, " psi{0}_exact psi{0}_numeric stack{0}_exact stack{0}_numeric", s.n);
    }
    st.push('\n');
    let peaks: Vec<(f64, f64)> = bundle
        .states
        .iter()
        .map(|s| {
            let pe = s.exact.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
            let pn = s.numeric.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
            (pe, pn)
        })
        .collect();
    for (i, x) in bundle.x.iter().enumerate() {
        let _ = write!(st, "{x:.6}");
        for ((s, l), (pe, pn)) in bundle.states.iter().zip(&bundle.levels).zip(&peaks) {
            let e = l.drawn();
            let _ = write!(
                st,
                " {:.8e} {:.8e} {:.6} {:.6}",
                s.exact[i],
                s.numeric[i],
                e + bundle.amplitude * s.exact[i] / pe,
                e + bundle.amplitude * s.numeric[i] / pn
            );
        }
        st.push('\n');
    }

    vec![
        (format!("{name}_potential.dat"), pot),
        (format!("{name}_levels.dat"), lev),
        (format!("{name}_states.dat"), st),
    ]
}
