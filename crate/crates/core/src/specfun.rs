//! Special functions: Carlson's symmetric integral `R_F`, the incomplete
//! elliptic integral of the first kind for complex amplitude, the Gauss
//! hypergeometric value `2F1(1/2,1/2;1;x)` and the Cassini amplitude-sum.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{MuskatError, Result};
use crate::C64;

/// Relative accuracy targeted by the duplication loop.
const RF_TOLERANCE: f64 = 1e-14;
const SERIES_TOLERANCE: f64 = 1e-16;
/// Largest argument for which `hyp2f1_half` sums the power series.
pub const HYP2F1_SERIES_CUTOFF: f64 = 0.5;

/// Modulus of an elliptic integral with its parameter `m = k^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus {
    k: f64,
    m: f64,
}

impl EllipticModulus {
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() || k.abs() >= 1.0 {
            return Err(MuskatError::Modulus(k));
        }
        Ok(Self { k: k.abs(), m: k * k })
    }

    /// Modulus of the Cassini pressure integral, `sqrt(a^4 - b^4) / a^2`.
    pub fn cassini(a: f64, b: f64) -> Result<Self> {
        let a4 = a.powi(4);
        Self::new((a4 - b.powi(4)).max(0.0).sqrt() / (a * a))
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// Complementary modulus `sqrt(1 - k^2)`.
    pub fn complementary(&self) -> f64 {
        (1.0 - self.m).sqrt()
    }
}

fn is_on_negative_axis(w: C64) -> bool {
    w.im == 0.0 && w.re < 0.0
}

/// Carlson's symmetric elliptic integral of the first kind,
/// `R_F(x,y,z) = 1/2 ∫_0^∞ dt / sqrt((t+x)(t+y)(t+z))`, by duplication.
///
/// Arguments must lie in the plane cut along the negative real axis and at
/// most one of them may vanish.
pub fn carlson_rf(x: C64, y: C64, z: C64) -> Result<C64> {
    let args = [x, y, z];
    if args.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
        return Err(MuskatError::Domain("non-finite argument to R_F".into()));
    }
    if args.iter().any(|w| is_on_negative_axis(*w)) {
        return Err(MuskatError::Domain(
            "R_F argument on the negative real axis".into(),
        ));
    }
    if args.iter().filter(|w| w.norm() == 0.0).count() > 1 {
        return Err(MuskatError::Domain("more than one zero argument to R_F".into()));
    }

    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let spread = [x, y, z]
        .iter()
        .map(|w| (a0 - w).norm())
        .fold(0.0_f64, f64::max);
    let q = (3.0 * RF_TOLERANCE).powf(-1.0 / 6.0) * spread;
    let mut a = a0;
    let mut scale = 1.0_f64;
    for _ in 0..200 {
        if scale * q < a.norm() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        x = (x + lambda) * 0.25;
        y = (y + lambda) * 0.25;
        z = (z + lambda) * 0.25;
        a = (a + lambda) * 0.25;
        scale *= 0.25;
    }
    let dx = (a0 - x0) * scale / a;
    let dy = (a0 - y0) * scale / a;
    let dz = -(dx + dy);
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    let poly = 1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - e2 * e3 * (3.0 / 44.0);
    Ok(poly / a.sqrt())
}

/// Arithmetic-geometric mean of two positive numbers.
pub fn agm(mut x: f64, mut y: f64) -> f64 {
    for _ in 0..64 {
        if (x - y).abs() <= 1e-16 * x.abs() {
            break;
        }
        let next = 0.5 * (x + y);
        y = (x * y).sqrt();
        x = next;
    }
    0.5 * (x + y)
}

/// Complete elliptic integral `K(k)` through the AGM.
pub fn ellip_k(modulus: EllipticModulus) -> f64 {
    FRAC_PI_2 / agm(1.0, modulus.complementary())
}

/// Incomplete elliptic integral of the first kind `F(phi, k)` for complex
/// amplitude.
///
/// The real part of the amplitude is reduced into `(-pi/2, pi/2]` with
/// `F(phi + pi) = F(phi) + 2K`, then the Carlson form
/// `sin(phi) R_F(cos^2 phi, 1 - k^2 sin^2 phi, 1)` is used.
pub fn ellip_f(phi: C64, k: f64) -> Result<C64> {
    let modulus = EllipticModulus::new(k)?;
    if !phi.re.is_finite() || !phi.im.is_finite() {
        return Err(MuskatError::Reduction(format!("non-finite amplitude {phi}")));
    }
    let mut shift = (phi.re / PI).round();
    let mut reduced = phi - shift * PI;
    if reduced.re <= -FRAC_PI_2 {
        reduced += PI;
        shift -= 1.0;
    }
    let base = ellip_f_principal(reduced, modulus).map_err(|_| {
        MuskatError::Reduction(format!(
            "amplitude {phi} reduces onto a cut of the principal strip"
        ))
    })?;
    if shift == 0.0 {
        Ok(base)
    } else {
        Ok(base + 2.0 * shift * ellip_k(modulus))
    }
}

fn ellip_f_principal(phi: C64, modulus: EllipticModulus) -> Result<C64> {
    if phi.norm() == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let s = phi.sin();
    let c = phi.cos();
    let delta2 = 1.0 - modulus.m() * s * s;
    Ok(s * carlson_rf(c * c, delta2, C64::new(1.0, 0.0))?)
}

/// Power-series branch of `2F1(1/2, 1/2; 1; x)`.
pub fn hyp2f1_half_series(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..10_000 {
        let ratio = (n as f64 + 0.5) / (n as f64 + 1.0);
        term *= ratio * ratio * x;
        sum += term;
        if term.abs() < SERIES_TOLERANCE * sum.abs() {
            break;
        }
    }
    sum
}

/// AGM branch of `2F1(1/2, 1/2; 1; x) = (2/pi) K(sqrt(x))`.
pub fn hyp2f1_half_agm(x: f64) -> f64 {
    1.0 / agm(1.0, (1.0 - x).sqrt())
}

/// `2F1(1/2, 1/2; 1; x)` on `[0, 1)`.
pub fn hyp2f1_half(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(MuskatError::Domain(format!(
            "2F1(1/2,1/2;1;x) requires 0 <= x < 1, got {x}"
        )));
    }
    if x <= HYP2F1_SERIES_CUTOFF {
        Ok(hyp2f1_half_series(x))
    } else {
        Ok(hyp2f1_half_agm(x))
    }
}

/// Combined amplitude of the Cassini pressure.
///
/// For `xi = arccos(b/z)` and `k = sqrt(a^4-b^4)/a^2` returns the real
/// amplitude `alpha` with `F(xi,k) + F(conj xi,k) = F(alpha,k)`. Both
/// `sin(alpha)` and `cos(alpha)` are formed from `z` and `conj z` directly,
/// which fixes `alpha` in `[-pi/2, 3pi/2)` without inverse trigonometric
/// branches.
///
/// Along the curve `1 = k^2 |sin xi|^4` both numerators and the common
/// denominator vanish; points within a relative `1e-10` of it are reported
/// as [`MuskatError::Branch`].
pub fn ellip_f_sum_amplitude(z: C64, a: f64, b: f64) -> Result<f64> {
    let terms = CassiniAmplitudeTerms::new(z, a, b);
    if terms.denominator.abs() <= 1e-10 * terms.scale {
        return Err(MuskatError::Branch(format!(
            "amplitude sum is indeterminate at z = {z}"
        )));
    }
    let sign = terms.denominator.signum();
    let mut alpha = (sign * terms.sin_numerator).atan2(sign * terms.cos_numerator);
    if alpha < -FRAC_PI_2 {
        alpha += 2.0 * PI;
    }
    Ok(alpha)
}

/// `sin(alpha) = sin_numerator / denominator`, likewise for the cosine.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CassiniAmplitudeTerms {
    pub sin_numerator: f64,
    pub cos_numerator: f64,
    pub denominator: f64,
    pub scale: f64,
}

impl CassiniAmplitudeTerms {
    pub(crate) fn new(z: C64, a: f64, b: f64) -> Self {
        let a2 = a * a;
        let a4 = a2 * a2;
        let b2 = b * b;
        let c4 = a4 - b2 * b2;
        let r = crate::curves::sqrt_with_segment_cut(z, b);
        let p = (b2 * z * z + c4).sqrt();
        let z2 = z.norm_sqr();
        let sin_numerator = 2.0 * a2 * (z * r * p.conj()).re;
        let cos_numerator = a4 * z2 - r.norm_sqr() * p.norm_sqr();
        let denominator = b2 * z2 * z2 + c4 * (2.0 * (z * z).re - b2);
        let scale = b2 * z2 * z2 + c4 * (2.0 * z2 + b2);
        Self {
            sin_numerator,
            cos_numerator,
            denominator,
            scale,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const K_HALF: f64 = 1.854_074_677_301_372;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rf_of_equal_arguments() {
        let v = carlson_rf(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((v - 1.0).norm() < 1e-15);
        let v = carlson_rf(c(4.0, 0.0), c(4.0, 0.0), c(4.0, 0.0)).unwrap();
        assert!((v - 0.5).norm() < 1e-15);
    }

    #[test]
    fn rf_reproduces_complete_integral() {
        let v = carlson_rf(c(0.0, 0.0), c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        assert!((v.re - K_HALF).abs() < 1e-13, "{v}");
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn rf_rejects_bad_domains() {
        assert!(carlson_rf(c(-1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)).is_err());
        assert!(carlson_rf(c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)).is_err());
    }

    #[test]
    fn agm_complete_integral_matches_known_value() {
        let k = EllipticModulus::new(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        assert!((ellip_k(k) - K_HALF).abs() < 1e-14);
    }

    #[test]
    fn ellip_f_trivial_cases() {
        assert_eq!(ellip_f(c(0.0, 0.0), 0.3).unwrap(), c(0.0, 0.0));
        let phi = c(0.7, -0.4);
        assert!((ellip_f(phi, 0.0).unwrap() - phi).norm() < 1e-14);
        let full = ellip_f(c(FRAC_PI_2, 0.0), std::f64::consts::FRAC_1_SQRT_2).unwrap();
        assert!((full.re - K_HALF).abs() < 1e-13);
    }

    #[test]
    fn ellip_f_quasi_periodicity() {
        let k = 0.8;
        let kk = ellip_k(EllipticModulus::new(k).unwrap());
        let phi = c(0.3, 0.2);
        let f0 = ellip_f(phi, k).unwrap();
        let f1 = ellip_f(phi + PI, k).unwrap();
        let f2 = ellip_f(phi - 2.0 * PI, k).unwrap();
        assert!((f1 - f0 - 2.0 * kk).norm() < 1e-13);
        assert!((f2 - f0 + 4.0 * kk).norm() < 1e-13);
    }

    #[test]
    fn ellip_f_matches_simpson_on_real_amplitude() {
        // independent composite Simpson of 1/sqrt(1 - k^2 sin^2 t)
        let (k, phi) = (0.6_f64, 1.1_f64);
        let n = 2000;
        let h = phi / n as f64;
        let f = |t: f64| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt();
        let mut s = f(0.0) + f(phi);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        let simpson = s * h / 3.0;
        assert!((ellip_f(c(phi, 0.0), k).unwrap().re - simpson).abs() < 1e-12);
    }

    #[test]
    fn ellip_f_errors() {
        assert!(matches!(ellip_f(c(0.1, 0.0), 1.0), Err(MuskatError::Modulus(_))));
        assert!(matches!(
            ellip_f(c(f64::NAN, 0.0), 0.5),
            Err(MuskatError::Reduction(_))
        ));
    }

    #[test]
    fn hyp2f1_known_values() {
        assert_eq!(hyp2f1_half(0.0).unwrap(), 1.0);
        let expected = 2.0 / PI * K_HALF;
        assert!((hyp2f1_half(0.5).unwrap() - expected).abs() < 1e-13);
        assert!((hyp2f1_half(0.5).unwrap() - 1.180_340_599_016_096).abs() < 1e-12);
        let x = 0.0625;
        assert!((hyp2f1_half_series(x) - hyp2f1_half_agm(x)).abs() < 1e-12);
    }

    #[test]
    fn hyp2f1_domain() {
        assert!(hyp2f1_half(-0.1).is_err());
        assert!(hyp2f1_half(1.0).is_err());
    }

    #[test]
    fn cassini_amplitude_on_real_axis_is_real_and_half_pi_on_boundary() {
        let (a, b) = (2.0_f64, 1.0_f64);
        let x = (a * a + b * b).sqrt();
        let alpha = ellip_f_sum_amplitude(c(x, 0.0), a, b).unwrap();
        assert!((alpha - FRAC_PI_2).abs() < 1e-12);
        let far = ellip_f_sum_amplitude(c(4.0, 0.0), a, b).unwrap();
        assert!(far > FRAC_PI_2 && far < 3.0 * FRAC_PI_2);
    }
}
