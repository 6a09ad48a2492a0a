//! Shape-invariant model definitions: superpotentials, partner potentials,
//! parameter hierarchies and closed-form spectra.
//!
//! Units follow the operator `-d²/dx² + V` (ħ = 2m = 1) everywhere.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of levels reported for the harmonic-oscillator fixture, whose true
/// spectrum is unbounded.
pub const ORACLE_LEVELS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Tanh6,
    ScarfII,
    HarmonicOscillatorOracle,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Tanh6 => "tanh6",
            Family::ScarfII => "scarf2",
            Family::HarmonicOscillatorOracle => "oscillator",
        })
    }
}

/// Parameters of one model.
///
/// `Tanh6` is the superpotential `A tanh px + B tanh 6px` with
/// `A0 = -B0/6 + p` always derived from `B0`. `ScarfII` is
/// `A tanh px + B sech px`. The oscillator `W = ωx` is a solver fixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModelParams {
    Tanh6 { b0: f64, p: f64 },
    #[serde(rename = "scarf2")]
    ScarfII { a: f64, b: f64, p: f64 },
    #[serde(rename = "oscillator")]
    HarmonicOscillatorOracle { omega: f64 },
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams::Tanh6 { b0: 24.0, p: 0.35 }
    }
}

/// Stage `k` of the shape-invariance sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamStage {
    pub k: usize,
    pub a: f64,
    pub b: f64,
    /// Level value: `A_k + B_k` for Tanh6, `A_k` for Scarf II and `0` for
    /// the oscillator (whose spectrum is not a difference of squares).
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSample {
    pub x: f64,
    pub v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumExact {
    /// `(n, E_n)` in the shifted convention used by [`ModelParams::potential`].
    pub levels: Vec<(usize, f64)>,
    pub n_max: usize,
    /// Horizontal asymptote in the shifted convention (Tanh6 only).
    pub asymptote: Option<f64>,
    pub shift: f64,
}

/// Largest integer strictly below `r` (the two-case floor rule).
fn floor_strict(r: f64) -> usize {
    if r <= 0.0 {
        return 0;
    }
    let nearest = r.round();
    if (r - nearest).abs() <= 1e-9 * r.max(1.0) {
        (nearest as usize).saturating_sub(1)
    } else {
        r.floor() as usize
    }
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

impl ModelParams {
    pub fn tanh6(b0: f64, p: f64) -> Result<Self> {
        let m = ModelParams::Tanh6 { b0, p };
        m.validate()?;
        Ok(m)
    }

    pub fn scarf2(a: f64, b: f64, p: f64) -> Result<Self> {
        let m = ModelParams::ScarfII { a, b, p };
        m.validate()?;
        Ok(m)
    }

    pub fn oscillator(omega: f64) -> Result<Self> {
        let m = ModelParams::HarmonicOscillatorOracle { omega };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelParams::Tanh6 { b0, p } => {
                if !(b0.is_finite() && p.is_finite() && p > 0.0 && p < b0 / 3.0) {
                    return Err(Error::InvalidParams(format!(
                        "tanh6 requires 0 < p < B0/3 (got B0 = {b0}, p = {p})"
                    )));
                }
            }
            ModelParams::ScarfII { a, b, p } => {
                if !(a.is_finite() && b.is_finite() && p.is_finite() && p > 0.0 && a > p) {
                    return Err(Error::InvalidParams(format!(
                        "scarf2 requires A > p > 0 (got A = {a}, B = {b}, p = {p})"
                    )));
                }
            }
            ModelParams::HarmonicOscillatorOracle { omega } => {
                if !(omega.is_finite() && omega > 0.0) {
                    return Err(Error::InvalidParams(format!(
                        "oscillator requires omega > 0 (got {omega})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn family(&self) -> Family {
        match self {
            ModelParams::Tanh6 { .. } => Family::Tanh6,
            ModelParams::ScarfII { .. } => Family::ScarfII,
            ModelParams::HarmonicOscillatorOracle { .. } => Family::HarmonicOscillatorOracle,
        }
    }

    /// Inverse-length scale `p`; the oscillator reports `sqrt(ω)`.
    pub fn p(&self) -> f64 {
        match *self {
            ModelParams::Tanh6 { p, .. } | ModelParams::ScarfII { p, .. } => p,
            ModelParams::HarmonicOscillatorOracle { omega } => omega.sqrt(),
        }
    }

    /// `A0 = -B0/6 + p` for Tanh6, `A` for Scarf II.
    pub fn a0(&self) -> f64 {
        match *self {
            ModelParams::Tanh6 { b0, p } => -b0 / 6.0 + p,
            ModelParams::ScarfII { a, .. } => a,
            ModelParams::HarmonicOscillatorOracle { omega } => omega,
        }
    }

    pub fn stage(&self, k: usize) -> ParamStage {
        let kf = k as f64;
        match *self {
            ModelParams::Tanh6 { b0, p } => {
                let a = self.a0() - kf * p;
                let b = b0 - 6.0 * kf * p;
                ParamStage { k, a, b, c: a + b }
            }
            ModelParams::ScarfII { a, b, p } => {
                let ak = a - kf * p;
                ParamStage { k, a: ak, b, c: ak }
            }
            ModelParams::HarmonicOscillatorOracle { omega } => ParamStage {
                k,
                a: omega,
                b: 0.0,
                c: 0.0,
            },
        }
    }

    pub fn superpotential(&self, stage: &ParamStage, x: f64) -> f64 {
        match *self {
            ModelParams::Tanh6 { p, .. } => stage.a * (p * x).tanh() + stage.b * (6.0 * p * x).tanh(),
            ModelParams::ScarfII { p, .. } => stage.a * (p * x).tanh() + stage.b * sech(p * x),
            ModelParams::HarmonicOscillatorOracle { .. } => stage.a * x,
        }
    }

    pub fn superpotential_derivative(&self, stage: &ParamStage, x: f64) -> f64 {
        match *self {
            ModelParams::Tanh6 { p, .. } => {
                let s1 = sech(p * x);
                let s6 = sech(6.0 * p * x);
                stage.a * p * s1 * s1 + 6.0 * stage.b * p * s6 * s6
            }
            ModelParams::ScarfII { p, .. } => {
                let s = sech(p * x);
                stage.a * p * s * s - stage.b * p * s * (p * x).tanh()
            }
            ModelParams::HarmonicOscillatorOracle { .. } => stage.a,
        }
    }

    /// `(V-, V+) = (W² - W', W² + W')` at stage `stage`.
    pub fn partner_potentials(&self, stage: &ParamStage, x: f64) -> (f64, f64) {
        let w = self.superpotential(stage, x);
        let dw = self.superpotential_derivative(stage, x);
        (w * w - dw, w * w + dw)
    }

    /// Constant added to `V-` to obtain the Hamiltonian potential used by the
    /// numerical solvers: `-(V-)_min` for Tanh6, `0` for Scarf II and `ω` for
    /// the oscillator (so that `V = ω²x²`).
    pub fn shift(&self) -> f64 {
        match *self {
            ModelParams::Tanh6 { b0, p } => (35.0 * b0 + 6.0 * p) * p / 6.0,
            ModelParams::ScarfII { .. } => 0.0,
            ModelParams::HarmonicOscillatorOracle { omega } => omega,
        }
    }

    /// Potential of the Hamiltonian `-d²/dx² + V` in the reporting convention.
    pub fn potential(&self, x: f64) -> f64 {
        match *self {
            ModelParams::HarmonicOscillatorOracle { omega } => omega * omega * x * x,
            _ => self.partner_potentials(&self.stage(0), x).0 + self.shift(),
        }
    }

    /// Nonnegative Tanh6 potential `V- + (35B0 + 6p)p/6` with zero minimum at the origin.
    pub fn shifted_potential(&self, x: f64) -> Result<f64> {
        self.require(Family::Tanh6, "shifted_potential")?;
        Ok(self.potential(x))
    }

    pub fn sample_potential(&self, xs: impl IntoIterator<Item = f64>) -> Vec<PotentialSample> {
        xs.into_iter()
            .map(|x| PotentialSample { x, v: self.potential(x) })
            .collect()
    }

    fn require(&self, family: Family, op: &'static str) -> Result<()> {
        if self.family() == family {
            Ok(())
        } else {
            Err(Error::UnsupportedFamily { op, family: self.family() })
        }
    }

    pub fn n_max(&self) -> usize {
        match *self {
            ModelParams::Tanh6 { b0, p } => floor_strict((5.0 * b0 + 6.0 * p) / (42.0 * p)),
            ModelParams::ScarfII { a, p, .. } => floor_strict(a / p),
            ModelParams::HarmonicOscillatorOracle { .. } => ORACLE_LEVELS - 1,
        }
    }

    fn check_level(&self, n: usize) -> Result<()> {
        let n_max = self.n_max();
        if n > n_max {
            Err(Error::OutOfRange { n, n_max })
        } else {
            Ok(())
        }
    }

    /// Unshifted `E_n^(-)`, the eigenvalue of `-d²/dx² + V-`.
    pub fn exact_energy_unshifted(&self, n: usize) -> Result<f64> {
        self.check_level(n)?;
        Ok(match *self {
            ModelParams::HarmonicOscillatorOracle { omega } => 2.0 * n as f64 * omega,
            _ => {
                let c0 = self.stage(0).c;
                let cn = self.stage(n).c;
                c0 * c0 - cn * cn
            }
        })
    }

    /// Exact energy in the shifted convention (directly comparable to the
    /// numerical solvers, which all use [`ModelParams::potential`]).
    pub fn exact_energy(&self, n: usize) -> Result<f64> {
        Ok(self.exact_energy_unshifted(n)? + self.shift())
    }

    /// Tanh6 energy in the expanded polynomial form `(7/3) n p (5B0 + 3(2 - 7n)p)`.
    pub fn exact_energy_expanded(&self, n: usize) -> Result<f64> {
        self.require(Family::Tanh6, "exact_energy_expanded")?;
        self.check_level(n)?;
        let ModelParams::Tanh6 { b0, p } = *self else { unreachable!() };
        let nf = n as f64;
        Ok(7.0 / 3.0 * nf * p * (5.0 * b0 + 3.0 * (2.0 - 7.0 * nf) * p))
    }

    /// `C_k = E^(-)_{k+1} - E^(-)_k`, the vertical offset between `V+(a_k)` and `V-(a_{k+1})`.
    pub fn shape_invariance_constant(&self, k: usize) -> Result<f64> {
        let n_max = self.n_max();
        if k >= n_max {
            return Err(Error::OutOfRange { n: k, n_max });
        }
        Ok(match *self {
            ModelParams::HarmonicOscillatorOracle { omega } => 2.0 * omega,
            _ => {
                let ck = self.stage(k).c;
                let ck1 = self.stage(k + 1).c;
                ck * ck - ck1 * ck1
            }
        })
    }

    /// Upper bound on `n` from requiring strictly increasing nonnegative energies.
    pub fn monotonicity_bound(&self) -> Result<f64> {
        self.require(Family::Tanh6, "monotonicity_bound")?;
        let ModelParams::Tanh6 { b0, p } = *self else { unreachable!() };
        Ok((5.0 * b0 + 27.0 * p) / (42.0 * p))
    }

    /// Horizontal asymptote of the Tanh6 potential in the shifted convention.
    pub fn asymptote(&self) -> Result<f64> {
        Ok(self.asymptote_unshifted()? + self.shift())
    }

    /// `lim V-(x)` as `x -> ±∞`, i.e. `(A0 + B0)²`.
    pub fn asymptote_unshifted(&self) -> Result<f64> {
        self.require(Family::Tanh6, "asymptote")?;
        let c0 = self.stage(0).c;
        Ok(c0 * c0)
    }

    /// Energy above which the spectrum is continuous, in the shifted convention.
    pub fn continuum_threshold(&self) -> Option<f64> {
        match *self {
            ModelParams::Tanh6 { .. } => self.asymptote().ok(),
            ModelParams::ScarfII { a, .. } => Some(a * a),
            ModelParams::HarmonicOscillatorOracle { .. } => None,
        }
    }

    /// Asymptotic exponential rate of the exact state `n` (negative means normalizable).
    pub fn state_decay_rate(&self, n: usize) -> Option<f64> {
        let nf = n as f64;
        match *self {
            ModelParams::Tanh6 { b0, p } => Some(-p - 5.0 * b0 / 6.0 + 7.0 * nf * p),
            ModelParams::ScarfII { a, p, .. } => Some(-a + nf * p),
            ModelParams::HarmonicOscillatorOracle { .. } => None,
        }
    }

    pub fn exact_spectrum(&self) -> SpectrumExact {
        let n_max = self.n_max();
        let levels = (0..=n_max)
            .map(|n| (n, self.exact_energy(n).expect("n within n_max")))
            .collect();
        SpectrumExact {
            levels,
            n_max,
            asymptote: self.asymptote().ok(),
            shift: self.shift(),
        }
    }
}

/// Percent relative error `100 |exact - approx| / |exact|`.
pub fn relative_error(exact: f64, approx: f64) -> Result<f64> {
    if exact == 0.0 {
        return Err(Error::UndefinedRelativeError);
    }
    Ok(100.0 * (exact - approx).abs() / exact.abs())
}
