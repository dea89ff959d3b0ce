//! Numerical integration: adaptive Gauss-Kronrod (7/15) plus substitutions
//! for inverse-square-root endpoints and algebraically decaying tails.

use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{MuskatError, Result};

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
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

/// Relative error estimate still accepted once the interval budget is spent;
/// tighter requests can stall at the round-off level of nearly singular
/// integrands.
const FALLBACK_REL: f64 = 1e-10;

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-15,
            rel: 1e-13,
        }
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (value, error) = kronrod(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value, error });
    let mut total = value;
    let mut total_error = error;
    while total_error > tol.abs.max(tol.rel * total.abs()) {
        if heap.len() >= MAX_INTERVALS {
            if total_error <= FALLBACK_REL * total.abs() {
                break;
            }
            return Err(MuskatError::Quadrature(format!(
                "error estimate {total_error:e} after {MAX_INTERVALS} intervals"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = kronrod(&f, worst.a, mid);
        let (rv, re) = kronrod(&f, mid, worst.b);
        total += lv + rv - worst.value;
        total_error += le + re - worst.error;
        heap.push(Piece {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
        if !total.is_finite() {
            return Err(MuskatError::Quadrature("non-finite integrand".into()));
        }
    }
    // re-sum to shed the drift of the running total
    Ok(heap.iter().map(|p| p.value).sum())
}

/// `∫_lo^hi g` for integrands behaving like `1/sqrt((x-lo)(hi-x))` at both
/// ends, through `x = mid + half sin(theta)`. `f` receives the distances
/// `x - lo` and `hi - x`, both computed without cancellation.
pub fn integrate_sqrt_endpoints<F: Fn(f64, f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: Tolerance,
) -> Result<f64> {
    let half = 0.5 * (hi - lo);
    integrate(
        |theta: f64| {
            let (s, c) = theta.sin_cos();
            if c <= 0.0 {
                return 0.0;
            }
            // 1 -+ sin = cos^2 / (1 +- sin)
            let (from_lo, from_hi) = if s >= 0.0 {
                (half * (1.0 + s), half * c * c / (1.0 + s))
            } else {
                (half * c * c / (1.0 - s), half * (1.0 - s))
            };
            f(from_lo, from_hi) * half * c
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        tol,
    )
}

/// `∫_0^length g(u) du` for integrands with an inverse-square-root
/// singularity at `u = 0`, through `u = s^2`.
pub fn integrate_sqrt_lower<F: Fn(f64) -> f64>(f: F, length: f64, tol: Tolerance) -> Result<f64> {
    integrate(
        |s: f64| {
            if s <= 0.0 {
                return 0.0;
            }
            2.0 * s * f(s * s)
        },
        0.0,
        length.sqrt(),
        tol,
    )
}

/// `∫_lo^∞ f` (with `lo > 0`) for integrands decaying at least like
/// `1/x^2`, through `x = 1/t`.
pub fn integrate_tail<F: Fn(f64) -> f64>(f: F, lo: f64, tol: Tolerance) -> Result<f64> {
    if lo <= 0.0 {
        return Err(MuskatError::Quadrature(format!(
            "tail integral needs a positive lower limit, got {lo}"
        )));
    }
    integrate(
        |t: f64| {
            if t <= 0.0 {
                // the limit x^2 f(x) as x -> inf, sampled far out
                let x = 1e150;
                return f(x) * x * x;
            }
            f(1.0 / t) / (t * t)
        },
        0.0,
        1.0 / lo,
        tol,
    )
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn smooth_integrals() {
        let v = integrate(|x: f64| x.sin(), 0.0, PI, Tolerance::default()).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
        let v = integrate(|x: f64| (-x * x).exp(), -8.0, 8.0, Tolerance::default()).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularities() {
        // ∫_{-1}^{1} 1/sqrt(1-x^2) = pi
        let v = integrate_sqrt_endpoints(
            |u: f64, w: f64| 1.0 / (u * w).sqrt(),
            -1.0,
            1.0,
            Tolerance::default(),
        )
        .unwrap();
        assert!((v - PI).abs() < 1e-13);
        // ∫_0^1 1/sqrt(x) = 2
        let v = integrate_sqrt_lower(|x: f64| 1.0 / x.sqrt(), 1.0, Tolerance::default()).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn algebraic_tail() {
        let v = integrate_tail(|x: f64| 1.0 / (1.0 + x * x), 1.0, Tolerance::default()).unwrap();
        assert!((v - PI / 4.0).abs() < 1e-13);
    }

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }
}
