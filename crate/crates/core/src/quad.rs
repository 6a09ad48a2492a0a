//! Quadrature rules: adaptive Gauss–Kronrod for smooth integrands and the
//! tanh-sinh (double-exponential) rule for integrable endpoint singularities.

use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, &xk) in XGK.iter().take(7).enumerate() {
        let dx = h * xk;
        let sum = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive G7–K15 quadrature on `[a, b]`, starting from `panels` equal
/// subintervals, with a global error target of `max(abs_tol, rel_tol * |I|)`.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    panels: usize,
    max_intervals: usize,
) -> QuadResult {
    if a == b {
        return QuadResult { value: 0.0, error: 0.0, evaluations: 0 };
    }
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    let mut err = 0.0;
    let mut heap = BinaryHeap::with_capacity(panels);
    for i in 0..panels {
        let lo = a + i as f64 * width;
        let hi = if i + 1 == panels { b } else { lo + width };
        let (v, e) = gk15(&f, lo, hi);
        total += v;
        err += e;
        heap.push(Panel { lo, hi, value: v, error: e });
    }
    let mut evaluations = 15 * panels;
    while err > abs_tol.max(rel_tol * total.abs()) && heap.len() < max_intervals {
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        let (v1, e1) = gk15(&f, worst.lo, mid);
        let (v2, e2) = gk15(&f, mid, worst.hi);
        evaluations += 30;
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.error;
        heap.push(Panel { lo: worst.lo, hi: mid, value: v1, error: e1 });
        heap.push(Panel { lo: mid, hi: worst.hi, value: v2, error: e2 });
        if heap.len() % 1024 == 0 {
            // running sums drift; resum occasionally
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.error).sum();
        }
    }
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    QuadResult { value, error, evaluations }
}

struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error).is_eq()
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Tanh-sinh quadrature on `[a, b]`. The integrand is never evaluated at the
/// endpoints, so square-root or logarithmic endpoint singularities are fine.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, max_levels: usize) -> QuadResult {
    if a == b {
        return QuadResult { value: 0.0, error: 0.0, evaluations: 0 };
    }
    let half = 0.5 * (b - a);
    let t_max = 3.2;
    // Node at parameter t, returned as (abscissa, weight) pairs for ±t.
    let nodes = |t: f64| -> [(f64, f64); 2] {
        let s = FRAC_PI_2 * t.sinh();
        let ch = s.cosh();
        // 1 - tanh(s) computed without cancellation
        let delta = 1.0 / (s.exp() * ch);
        let w = half * FRAC_PI_2 * t.cosh() / (ch * ch);
        [(b - half * delta, w), (a + half * delta, w)]
    };
    let eval = |t: f64, count: &mut usize| -> f64 {
        nodes(t)
            .iter()
            .filter(|(x, _)| *x > a && *x < b)
            .map(|&(x, w)| {
                *count += 1;
                let y = f(x);
                if y.is_finite() {
                    w * y
                } else {
                    0.0
                }
            })
            .sum()
    };

    let mut evaluations = 1;
    let mut h = 1.0;
    let mut sum = half * FRAC_PI_2 * f(0.5 * (a + b));
    let mut k = 1;
    while k as f64 * h <= t_max {
        sum += eval(k as f64 * h, &mut evaluations);
        k += 1;
    }
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    for _ in 0..max_levels {
        h *= 0.5;
        let mut t = h;
        while t <= t_max {
            sum += eval(t, &mut evaluations);
            t += 2.0 * h;
        }
        let next = sum * h;
        error = (next - estimate).abs();
        estimate = next;
        if error <= tol {
            break;
        }
    }
    QuadResult { value: estimate, error, evaluations }
}
