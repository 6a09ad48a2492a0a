//! Closed-form bound states built by ladder operators.
//!
//! A state is stored as
//!
//! ```text
//! ψ(x) = scale · cosh(px)^alpha · cosh(6px)^beta · exp(-γ φ(x)) · Σ_k c_k e^{kpx}
//! ```
//!
//! with `φ(x) = 2 arctan(tanh(px/2)) / p` (Scarf II only). The representation
//! is closed under `d/dx` and under multiplication by `W` once the cosh
//! prefactors are lowered by one power, so each ladder application is exact
//! coefficient arithmetic.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::model::{Family, ModelParams, ParamStage};
use crate::numerics::SolverConfig;
use crate::quad::gauss_kronrod;

/// Quadrature tolerance used when normalizing freshly built states.
const NORMALIZATION_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactWavefunction {
    pub p: f64,
    /// Exponent on `cosh(px)`.
    pub alpha: f64,
    /// Exponent on `cosh(6px)`.
    pub beta: f64,
    /// Weight `γ` of the bounded factor `exp(-2γ arctan(tanh(px/2)) / p)`.
    pub arctan_weight: f64,
    pub poly: Laurent,
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// `A† = -d/dx + W`
    Raising,
    /// `A = d/dx + W`
    Lowering,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderStage {
    pub stage: ParamStage,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

fn ln_cosh(y: f64) -> f64 {
    let a = y.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

fn sech(y: f64) -> f64 {
    1.0 / y.cosh()
}

fn uses_sextuple(params: &ModelParams) -> Result<bool> {
    match params.family() {
        Family::Tanh6 => Ok(true),
        Family::ScarfII => Ok(false),
        family => Err(Error::UnsupportedFamily { op: "exact wavefunctions", family }),
    }
}

/// Ground state `exp(-∫W(x, a_k) dx)` of `V-(x, a_k)`, equal to 1 at `x = 0`.
pub fn ground_state(params: &ModelParams, stage: &ParamStage) -> Result<ExactWavefunction> {
    let sextuple = uses_sextuple(params)?;
    let p = params.p();
    Ok(ExactWavefunction {
        p,
        alpha: -stage.a / p,
        beta: if sextuple { -stage.b / (6.0 * p) } else { 0.0 },
        arctan_weight: if sextuple { 0.0 } else { stage.b },
        poly: Laurent::one(),
        scale: 1.0,
    })
}

/// Applies `∓d/dx + W(x, a_k)` in closed form.
pub fn apply_ladder(
    params: &ModelParams,
    wf: &ExactWavefunction,
    ladder: &LadderStage,
) -> Result<ExactWavefunction> {
    let sextuple = uses_sextuple(params)?;
    let p = params.p();
    if (p - wf.p).abs() > 1e-14 * p {
        return Err(Error::MismatchedScale(wf.p, p));
    }
    let sigma = match ladder.direction {
        Direction::Raising => -1.0,
        Direction::Lowering => 1.0,
    };
    let st = &ladder.stage;
    // (σ d/dx + W) F P = F [c1 tanh(px) + c6 tanh(6px) + cs sech(px)] P + σ F P'
    let (w_tanh6, w_sech) = if sextuple { (st.b, 0.0) } else { (0.0, st.b) };
    let c1 = st.a + sigma * wf.alpha * p;
    let c6 = w_tanh6 + 6.0 * sigma * wf.beta * p;
    let cs = w_sech - sigma * wf.arctan_weight;
    let dp = wf.poly.derivative(p);

    // Multiply the bracket by cosh(px) (and cosh(6px)) to clear denominators.
    let poly = if sextuple {
        wf.poly
            .mul_sinh(1)
            .mul_cosh(6)
            .scaled(c1)
            .add(&wf.poly.mul_sinh(6).mul_cosh(1).scaled(c6))
            .add(&wf.poly.mul_cosh(6).scaled(cs))
            .add(&dp.mul_cosh(1).mul_cosh(6).scaled(sigma))
    } else {
        wf.poly
            .mul_sinh(1)
            .scaled(c1)
            .add(&wf.poly.scaled(cs))
            .add(&dp.mul_cosh(1).scaled(sigma))
    };
    Ok(ExactWavefunction {
        p,
        alpha: wf.alpha - 1.0,
        beta: if sextuple { wf.beta - 1.0 } else { wf.beta },
        arctan_weight: wf.arctan_weight,
        poly,
        scale: wf.scale,
    })
}

/// Unnormalized `Ψ_n(x, a_s) = A†(a_s) A†(a_{s+1}) … A†(a_{s+n-1}) Ψ_0(x, a_{s+n})`.
pub fn raise_from(params: &ModelParams, start: usize, n: usize) -> Result<ExactWavefunction> {
    let mut wf = ground_state(params, &params.stage(start + n))?;
    for k in (start..start + n).rev() {
        let ladder = LadderStage { stage: params.stage(k), direction: Direction::Raising };
        wf = apply_ladder(params, &wf, &ladder)?;
        wf.rescale_poly();
    }
    Ok(wf)
}

/// Normalized `Ψ_n(x, a_0)` with a deterministic sign.
pub fn build_state(params: &ModelParams, n: usize) -> Result<ExactWavefunction> {
    let mut wf = raise_from(params, 0, n)?;
    wf.canonicalize();
    let decay_rate = wf.decay_rate();
    if decay_rate >= 0.0 {
        return Err(Error::NonNormalizable { n, decay_rate });
    }
    let n_max = params.n_max();
    if n > n_max {
        return Err(Error::OutOfRange { n, n_max });
    }
    let cfg = SolverConfig { quad_tol: NORMALIZATION_TOL, ..Default::default() };
    let norm2 = inner_product(&wf, &wf, &cfg)?;
    wf.scale /= norm2.sqrt();
    if wf.leading_lobe_sign() < 0.0 {
        wf.scale = -wf.scale;
    }
    Ok(wf)
}

impl ExactWavefunction {
    fn rescale_poly(&mut self) {
        let m = self.poly.max_abs();
        if m > 0.0 {
            self.poly = self.poly.scaled(1.0 / m);
            self.scale *= m;
        }
    }

    /// Drops round-off coefficients at the edges of the Laurent support.
    pub fn canonicalize(&mut self) {
        self.rescale_poly();
        self.poly.trim_relative(1e-13);
    }

    fn log_prefactor(&self, x: f64) -> f64 {
        let px = self.p * x;
        let mut l = self.alpha * ln_cosh(px);
        if self.beta != 0.0 {
            l += self.beta * ln_cosh(6.0 * px);
        }
        if self.arctan_weight != 0.0 {
            l -= self.arctan_weight * 2.0 * (0.5 * px).tanh().atan() / self.p;
        }
        l
    }

    /// `g = F'/F` and `g'` for the prefactor `F`.
    fn log_derivatives(&self, x: f64) -> (f64, f64) {
        let p = self.p;
        let px = p * x;
        let (t1, s1) = (px.tanh(), sech(px));
        let (t6, s6) = ((6.0 * px).tanh(), sech(6.0 * px));
        let g = self.alpha * p * t1 + 6.0 * self.beta * p * t6 - self.arctan_weight * s1;
        let dg = self.alpha * p * p * s1 * s1
            + 36.0 * self.beta * p * p * s6 * s6
            + self.arctan_weight * p * s1 * t1;
        (g, dg)
    }

    /// `(sign, ln|ψ(x)|)`; the sign stays meaningful deep in the tails.
    pub fn log_abs(&self, x: f64) -> (f64, f64) {
        let (sum, k_ref) = self.poly.eval_scaled(self.p, x, 0);
        let sign = (self.scale * sum).signum();
        if sum == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        let l = self.scale.abs().ln() + self.log_prefactor(x) + k_ref as f64 * self.p * x + sum.abs().ln();
        (sign, l)
    }

    fn envelope(&self, x: f64) -> (f64, [f64; 3]) {
        let mut parts = [0.0; 3];
        let mut k_ref = 0;
        for (order, slot) in parts.iter_mut().enumerate() {
            let (s, k) = self.poly.eval_scaled(self.p, x, order as i32);
            *slot = s;
            k_ref = k;
        }
        let env = self.scale * (self.log_prefactor(x) + k_ref as f64 * self.p * x).exp();
        (env, parts)
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let (env, [p0, _, _]) = self.envelope(x);
        if env == 0.0 {
            0.0
        } else {
            env * p0
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let (env, [p0, p1, _]) = self.envelope(x);
        if env == 0.0 {
            return 0.0;
        }
        let (g, _) = self.log_derivatives(x);
        env * (g * p0 + p1)
    }

    /// Exact second derivative from the representation.
    pub fn derivative2(&self, x: f64) -> f64 {
        let (env, [p0, p1, p2]) = self.envelope(x);
        if env == 0.0 {
            return 0.0;
        }
        let (g, dg) = self.log_derivatives(x);
        env * ((g * g + dg) * p0 + 2.0 * g * p1 + p2)
    }

    /// Asymptotic exponential rates `(x -> -∞, x -> +∞)` of `|ψ|` in `|x|`.
    pub fn decay_rates(&self) -> (f64, f64) {
        let (Some(lo), Some(hi)) = (self.poly.min_degree(), self.poly.max_degree()) else {
            return (f64::NEG_INFINITY, f64::NEG_INFINITY);
        };
        let base = self.alpha + 6.0 * self.beta;
        (self.p * (base - lo as f64), self.p * (base + hi as f64))
    }

    /// Slowest asymptotic rate; negative iff normalizable.
    pub fn decay_rate(&self) -> f64 {
        let (l, r) = self.decay_rates();
        l.max(r)
    }

    pub fn parity(&self) -> Option<Parity> {
        if self.arctan_weight != 0.0 {
            return None;
        }
        let tol = 1e-12 * self.poly.max_abs();
        let top = self.poly.max_abs_degree();
        let even = (1..=top).all(|k| (self.poly.coeff(k) - self.poly.coeff(-k)).abs() <= tol);
        let odd = (0..=top).all(|k| (self.poly.coeff(k) + self.poly.coeff(-k)).abs() <= tol);
        match (even, odd) {
            (true, false) => Some(Parity::Even),
            (false, true) => Some(Parity::Odd),
            _ => None,
        }
    }

    /// Hyperbolic coefficients `(k, α_k, β_k)` of `Σ α_k cosh(kpx) + β_k sinh(kpx)`.
    pub fn hyperbolic_coefficients(&self) -> Vec<(u32, f64, f64)> {
        self.poly.hyperbolic_form()
    }

    /// Interval outside which `|ψ| < rel · max|ψ|`.
    pub fn extent(&self, rel: f64) -> (f64, f64) {
        let step = 0.25 / self.p;
        let cut = rel.ln();
        let mut peak = f64::NEG_INFINITY;
        let mut bounds = [0.0; 2];
        for (slot, dir) in bounds.iter_mut().zip([-1.0, 1.0]) {
            let mut below = 0;
            let mut x = 0.0f64;
            while x.abs() < 1e4 / self.p {
                let (_, l) = self.log_abs(x);
                peak = peak.max(l);
                if l < peak + cut {
                    below += 1;
                    if below >= 4 {
                        break;
                    }
                } else {
                    below = 0;
                }
                x += dir * step;
            }
            *slot = x;
        }
        (bounds[0], bounds[1])
    }

    fn leading_lobe_sign(&self) -> f64 {
        let (a, b) = self.extent(1e-6);
        let h = std::f64::consts::PI / (7.0 * self.p) / 8.0;
        let n = ((b - a) / h).ceil() as usize + 1;
        let vals: Vec<f64> = (0..=n).map(|i| self.evaluate(a + i as f64 * (b - a) / n as f64)).collect();
        let peak = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 1..vals.len() - 1 {
            let v = vals[i].abs();
            if v > 1e-3 * peak && v >= vals[i - 1].abs() && v > vals[i + 1].abs() {
                return vals[i].signum();
            }
        }
        1.0
    }

    /// Sign-change locations on `[a, b]`, refined by bisection.
    pub fn nodes(&self, domain: (f64, f64)) -> Vec<f64> {
        let (a, b) = domain;
        let h = std::f64::consts::PI / (7.0 * self.p) / 8.0;
        let steps = ((b - a) / h).ceil().max(1.0) as usize;
        let sign_at = |x: f64| self.log_abs(x).0;
        let mut nodes = Vec::new();
        let mut last: Option<(f64, f64)> = None;
        for i in 0..=steps {
            let x = a + (b - a) * i as f64 / steps as f64;
            let s = sign_at(x);
            if s == 0.0 {
                continue;
            }
            if let Some((x0, s0)) = last {
                if s != s0 {
                    let (mut lo, mut hi) = (x0, x);
                    for _ in 0..60 {
                        let mid = 0.5 * (lo + hi);
                        let sm = sign_at(mid);
                        if sm == 0.0 {
                            lo = mid;
                            hi = mid;
                            break;
                        }
                        if sm == s0 {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    nodes.push(0.5 * (lo + hi));
                }
            }
            last = Some((x, s));
        }
        nodes
    }

    pub fn node_count(&self, domain: (f64, f64)) -> usize {
        self.nodes(domain).len()
    }
}

fn integrate_product<F: Fn(f64) -> f64>(f: F, domain: (f64, f64), p: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    let panels = (((domain.1 - domain.0) * p * 7.0 / std::f64::consts::PI).ceil() as usize).clamp(8, 4000);
    gauss_kronrod(f, domain.0, domain.1, abs_tol, rel_tol, panels, 200_000).value
}

fn common_extent(a: &ExactWavefunction, b: &ExactWavefunction) -> (f64, f64) {
    let (l1, r1) = a.extent(1e-17);
    let (l2, r2) = b.extent(1e-17);
    (l1.min(l2), r1.max(r2))
}

fn peak_abs(wf: &ExactWavefunction, domain: (f64, f64)) -> f64 {
    (0..=400)
        .map(|i| wf.evaluate(domain.0 + (domain.1 - domain.0) * i as f64 / 400.0).abs())
        .fold(0.0, f64::max)
}

/// `∫ ψ1 ψ2 dx` over the real line.
pub fn inner_product(wf1: &ExactWavefunction, wf2: &ExactWavefunction, cfg: &SolverConfig) -> Result<f64> {
    if (wf1.p - wf2.p).abs() > 1e-14 * wf1.p {
        return Err(Error::MismatchedScale(wf1.p, wf2.p));
    }
    for wf in [wf1, wf2] {
        let decay_rate = wf.decay_rate();
        if decay_rate >= 0.0 {
            return Err(Error::DivergentIntegral { decay_rate });
        }
    }
    if let (Some(a), Some(b)) = (wf1.parity(), wf2.parity()) {
        if a != b {
            return Ok(0.0);
        }
    }
    let domain = common_extent(wf1, wf2);
    let width = domain.1 - domain.0;
    let abs_tol = cfg.quad_tol * 1e-3 * peak_abs(wf1, domain) * peak_abs(wf2, domain) * width;
    Ok(integrate_product(
        |x| wf1.evaluate(x) * wf2.evaluate(x),
        domain,
        wf1.p,
        abs_tol,
        cfg.quad_tol,
    ))
}

/// `‖-ψ'' + Vψ - Eψ‖₂ / ‖ψ‖₂` with `V` the model's reporting-convention potential.
pub fn residual(wf: &ExactWavefunction, params: &ModelParams, energy: f64, cfg: &SolverConfig) -> Result<f64> {
    let decay_rate = wf.decay_rate();
    if decay_rate >= 0.0 {
        return Err(Error::DivergentIntegral { decay_rate });
    }
    let domain = wf.extent(1e-17);
    let width = domain.1 - domain.0;
    let peak = peak_abs(wf, domain);
    let norm2 = integrate_product(|x| wf.evaluate(x).powi(2), domain, wf.p, 1e-3 * cfg.quad_tol * peak * peak * width, cfg.quad_tol);
    // round-off in ψ'' leaves r ~ 1e-13 |ψ|; resolving below 1e-10 is pointless
    let floor = 1e-20 * norm2;
    let res2 = integrate_product(
        |x| {
            let r = -wf.derivative2(x) + (params.potential(x) - energy) * wf.evaluate(x);
            r * r
        },
        domain,
        wf.p,
        floor,
        1e-6,
    );
    Ok((res2 / norm2).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference() -> ModelParams {
        ModelParams::tanh6(24.0, 0.35).unwrap()
    }

    fn scarf() -> ModelParams {
        ModelParams::scarf2(7.0, 4.0, 1.0).unwrap()
    }

    fn cfg() -> SolverConfig {
        SolverConfig { quad_tol: 1e-12, ..Default::default() }
    }

    /// Sixth-order central difference of `f` at `x`.
    fn fd1(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        (f(x + 3.0 * h) - 9.0 * f(x + 2.0 * h) + 45.0 * f(x + h) - 45.0 * f(x - h) + 9.0 * f(x - 2.0 * h)
            - f(x - 3.0 * h))
            / (60.0 * h)
    }

    #[test]
    fn ground_state_exponents_and_value() {
        let m = reference();
        let g = ground_state(&m, &m.stage(0)).unwrap();
        assert_relative_eq!(g.alpha, 24.0 / 2.1 - 1.0, epsilon = 1e-12);
        assert_relative_eq!(g.beta, -24.0 / 2.1, epsilon = 1e-12);
        assert_eq!(g.evaluate(0.0), 1.0);
        assert_relative_eq!(g.decay_rate(), -(0.35 + 20.0), epsilon = 1e-12);
        let s = scarf();
        assert_eq!(ground_state(&s, &s.stage(0)).unwrap().evaluate(0.0), 1.0);
        assert!(ground_state(&ModelParams::oscillator(1.0).unwrap(), &ParamStage { k: 0, a: 1.0, b: 0.0, c: 0.0 }).is_err());
    }

    #[test]
    fn evaluate_matches_direct_formula() {
        let m = reference();
        let g = ground_state(&m, &m.stage(0)).unwrap();
        let (p, x) = (0.35_f64, 1.0_f64);
        let direct = (p * x).cosh().powf(g.alpha) * (6.0 * p * x).cosh().powf(g.beta);
        assert_relative_eq!(g.evaluate(x), direct, max_relative = 1e-12);
        // far tail: no overflow, tiny but finite
        let v = g.evaluate(60.0);
        assert!(v.is_finite() && v >= 0.0);
        let (s, l) = g.log_abs(200.0);
        assert_eq!(s, 1.0);
        assert_relative_eq!(l / 200.0, g.decay_rate(), max_relative = 1e-2);
    }

    #[test]
    fn lowering_annihilates_ground_states() {
        for m in [reference(), scarf()] {
            for k in 0..=m.n_max() {
                let st = m.stage(k);
                let g = ground_state(&m, &st).unwrap();
                let out = apply_ladder(&m, &g, &LadderStage { stage: st, direction: Direction::Lowering }).unwrap();
                assert!(out.poly.max_abs() < 1e-12 * g.poly.max_abs(), "k = {k}: {:?}", out.poly);
            }
        }
    }

    #[test]
    fn first_raising_matches_finite_difference_oracle() {
        let m = reference();
        let g1 = ground_state(&m, &m.stage(1)).unwrap();
        let up = apply_ladder(&m, &g1, &LadderStage { stage: m.stage(0), direction: Direction::Raising }).unwrap();
        let st0 = m.stage(0);
        let f = |x: f64| g1.evaluate(x);
        for i in 0..50 {
            let x = -2.0 + 4.0 * i as f64 / 49.0 + 1e-3;
            let oracle = -fd1(&f, x, 1e-3) + m.superpotential(&st0, x) * g1.evaluate(x);
            let got = up.evaluate(x);
            assert!((got - oracle).abs() <= 1e-8 * oracle.abs().max(1e-3 * up.evaluate(0.3).abs()), "x = {x}: {got} vs {oracle}");
        }
        // closed form (B0 - 3p)/6 · cosh^{B0/6p - 1}(px) cosh^{-B0/6p}(6px) · (7 sinh 5px + 5 sinh 7px)
        let (b0, p) = (24.0f64, 0.35f64);
        for &x in &[-1.3, -0.2, 0.45, 1.7] {
            let closed = (b0 - 3.0 * p) / 6.0
                * (p * x).cosh().powf(b0 / (6.0 * p) - 1.0)
                * (6.0 * p * x).cosh().powf(-b0 / (6.0 * p))
                * (7.0 * (5.0 * p * x).sinh() + 5.0 * (7.0 * p * x).sinh());
            assert_relative_eq!(up.evaluate(x), closed, max_relative = 1e-11);
        }
    }

    #[test]
    fn degree_growth_per_application() {
        let m = reference();
        for n in 1..=m.n_max() {
            let wf = raise_from(&m, 0, n).unwrap();
            assert!(wf.poly.max_abs_degree() <= 7 * n as i32);
            assert_relative_eq!(wf.alpha, 24.0 / 2.1 - 1.0, epsilon = 1e-9);
            assert_relative_eq!(wf.beta, -24.0 / 2.1, epsilon = 1e-9);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for (m, n) in [(reference(), 1), (reference(), 3), (scarf(), 2)] {
            let wf = build_state(&m, n).unwrap();
            let f = |x: f64| wf.evaluate(x);
            let df = |x: f64| wf.derivative(x);
            let x = 0.7;
            assert_relative_eq!(wf.derivative(x), fd1(&f, x, 1e-4), max_relative = 1e-6);
            let h = 1e-4;
            let fd2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
            assert_relative_eq!(wf.derivative2(x), fd2, max_relative = 1e-6);
            assert_relative_eq!(wf.derivative2(x), fd1(&df, x, 1e-4), max_relative = 1e-7);
        }
        let flat = ExactWavefunction { p: 1.0, alpha: 0.0, beta: 0.0, arctan_weight: 0.0, poly: Laurent::one(), scale: 1.0 };
        assert_eq!(flat.derivative2(0.3), 0.0);
    }

    #[test]
    fn ground_state_solves_schrodinger() {
        for m in [reference(), scarf()] {
            let g = build_state(&m, 0).unwrap();
            let r = residual(&g, &m, m.exact_energy(0).unwrap(), &cfg()).unwrap();
            assert!(r < 1e-8, "{r}");
            let off = residual(&g, &m, m.exact_energy(0).unwrap() + 1.0, &cfg()).unwrap();
            assert_relative_eq!(off, 1.0, max_relative = 1e-6);
        }
    }

    #[test]
    fn tanh6_first_excited_state_is_exact() {
        let m = reference();
        let wf = build_state(&m, 1).unwrap();
        assert_eq!(wf.parity(), Some(Parity::Odd));
        let nodes = wf.nodes((-20.0, 20.0));
        assert_eq!(nodes.len(), 1);
        assert!(nodes[0].abs() < 1e-9);
        let r = residual(&wf, &m, m.exact_energy(1).unwrap(), &cfg()).unwrap();
        assert!(r < 1e-8, "{r}");
    }

    #[test]
    fn scarf_states_are_exact_eigenfunctions() {
        let m = scarf();
        let states: Vec<_> = (0..=m.n_max()).map(|n| build_state(&m, n).unwrap()).collect();
        for (n, wf) in states.iter().enumerate() {
            let r = residual(wf, &m, m.exact_energy(n).unwrap(), &cfg()).unwrap();
            assert!(r < 1e-8, "n = {n}: residual {r}");
            assert_eq!(wf.node_count(wf.extent(1e-12)), n);
            // prefactor matches cosh(px)^{-A/p} · exp(-2B arctan(tanh(px/2))/p)
            assert_relative_eq!(wf.alpha, -7.0, epsilon = 1e-12);
            assert_eq!(wf.arctan_weight, 4.0);
            assert!(wf.poly.max_abs_degree() <= n as i32);
        }
        for i in 0..states.len() {
            for j in 0..states.len() {
                let g = inner_product(&states[i], &states[j], &cfg()).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - want).abs() < 1e-8, "({i},{j}) = {g}");
            }
        }
    }

    #[test]
    fn parity_of_tanh6_states() {
        let m = reference();
        for n in 0..=m.n_max() {
            let wf = build_state(&m, n).unwrap();
            let want = if n % 2 == 0 { Parity::Even } else { Parity::Odd };
            assert_eq!(wf.parity(), Some(want), "n = {n}");
            for &x in &[0.3, 1.1, 2.5] {
                let (a, b) = (wf.evaluate(x), wf.evaluate(-x));
                let b = if n % 2 == 0 { b } else { -b };
                assert!((a - b).abs() <= 1e-10 * a.abs().max(1e-300), "n = {n}");
            }
        }
    }

    #[test]
    fn normalizability_frontier() {
        let m = reference();
        let top = build_state(&m, 8).unwrap();
        assert_relative_eq!(top.decay_rate(), -0.75, epsilon = 1e-9);
        match build_state(&m, 9) {
            Err(Error::NonNormalizable { n: 9, decay_rate }) => assert!(decay_rate >= 0.0),
            other => panic!("expected rejection, got {other:?}"),
        }
        let s = scarf();
        assert!(matches!(build_state(&s, 7), Err(Error::NonNormalizable { .. })));
    }

    #[test]
    fn inner_product_rejects_divergent_operand() {
        let m = reference();
        let bad = raise_from(&m, 0, 9).unwrap();
        let good = build_state(&m, 0).unwrap();
        assert!(matches!(inner_product(&bad, &good, &cfg()), Err(Error::DivergentIntegral { .. })));
        let odd = build_state(&m, 1).unwrap();
        assert_eq!(inner_product(&odd, &good, &cfg()).unwrap(), 0.0);
        assert_relative_eq!(inner_product(&good, &good, &cfg()).unwrap(), 1.0, max_relative = 1e-10);
    }
}
