//! Laurent polynomials `Σ c_k u^k` in `u = e^{px}`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Laurent {
    /// Exponent of `coeffs[0]`.
    lo: i32,
    coeffs: Vec<f64>,
}

impl Laurent {
    pub fn one() -> Self {
        Laurent { lo: 0, coeffs: vec![1.0] }
    }

    pub fn zero() -> Self {
        Laurent { lo: 0, coeffs: Vec::new() }
    }

    pub fn from_coeffs(lo: i32, coeffs: Vec<f64>) -> Self {
        let mut l = Laurent { lo, coeffs };
        l.trim_exact_zeros();
        l
    }

    /// `(k, c_k)` pairs over the stored range, including interior zeros.
    pub fn terms(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.coeffs.iter().enumerate().map(move |(i, &c)| (self.lo + i as i32, c))
    }

    pub fn coeff(&self, k: i32) -> f64 {
        let i = k - self.lo;
        if i < 0 {
            0.0
        } else {
            self.coeffs.get(i as usize).copied().unwrap_or(0.0)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn max_degree(&self) -> Option<i32> {
        self.coeffs.iter().rposition(|&c| c != 0.0).map(|i| self.lo + i as i32)
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.coeffs.iter().position(|&c| c != 0.0).map(|i| self.lo + i as i32)
    }

    pub fn max_abs_degree(&self) -> i32 {
        match (self.min_degree(), self.max_degree()) {
            (Some(lo), Some(hi)) => lo.abs().max(hi.abs()),
            _ => 0,
        }
    }

    fn trim_exact_zeros(&mut self) {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0.0).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
    }

    /// Drop edge coefficients below `rel * max_abs`.
    pub fn trim_relative(&mut self, rel: f64) {
        let cut = rel * self.max_abs();
        while self.coeffs.last().is_some_and(|c| c.abs() <= cut) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.abs() <= cut).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Laurent { lo: self.lo, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, other: &Laurent) -> Self {
        if self.coeffs.is_empty() {
            return other.clone();
        }
        if other.coeffs.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = (self.lo + self.coeffs.len() as i32).max(other.lo + other.coeffs.len() as i32);
        let coeffs = (lo..hi).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Laurent::from_coeffs(lo, coeffs)
    }

    /// Multiply by `(u^m + sign·u^{-m}) / 2`.
    fn mul_hyperbolic(&self, m: i32, sign: f64) -> Self {
        if self.coeffs.is_empty() {
            return Laurent::zero();
        }
        let lo = self.lo - m;
        let len = self.coeffs.len() + 2 * m as usize;
        let mut coeffs = vec![0.0; len];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i + 2 * m as usize] += 0.5 * c;
            coeffs[i] += 0.5 * sign * c;
        }
        Laurent::from_coeffs(lo, coeffs)
    }

    /// Multiply by `cosh(m p x)`.
    pub fn mul_cosh(&self, m: i32) -> Self {
        self.mul_hyperbolic(m, 1.0)
    }

    /// Multiply by `sinh(m p x)`.
    pub fn mul_sinh(&self, m: i32) -> Self {
        self.mul_hyperbolic(m, -1.0)
    }

    /// `d/dx` with `u = e^{px}`: `c_k ↦ k p c_k`.
    pub fn derivative(&self, p: f64) -> Self {
        let coeffs = self.terms().map(|(k, c)| k as f64 * p * c).collect();
        Laurent::from_coeffs(self.lo, coeffs)
    }

    /// `Σ c_k e^{(k - k_ref) p x} · k^order p^order` with `k_ref` chosen as the
    /// dominant exponent for the sign of `x`. Returns `(sum, k_ref)`; the
    /// true value is `sum · e^{k_ref p x}`.
    pub(crate) fn eval_scaled(&self, p: f64, x: f64, order: i32) -> (f64, i32) {
        let (Some(lo), Some(hi)) = (self.min_degree(), self.max_degree()) else {
            return (0.0, 0);
        };
        let k_ref = if x >= 0.0 { hi } else { lo };
        let sum = self
            .terms()
            .filter(|(_, c)| *c != 0.0)
            .map(|(k, c)| c * (k as f64 * p).powi(order) * ((k - k_ref) as f64 * p * x).exp())
            .sum();
        (sum, k_ref)
    }

    /// Symmetrized hyperbolic form `Σ_k a_k cosh(kpx) + b_k sinh(kpx)` as
    /// `(k, a_k, b_k)` for `k = 0..=max|k|`.
    pub fn hyperbolic_form(&self) -> Vec<(u32, f64, f64)> {
        let top = self.max_abs_degree();
        (0..=top)
            .map(|k| {
                if k == 0 {
                    (0, self.coeff(0), 0.0)
                } else {
                    let (cp, cm) = (self.coeff(k), self.coeff(-k));
                    (k as u32, cp + cm, cp - cm)
                }
            })
            .collect()
    }
}
