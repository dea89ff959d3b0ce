//! Two-phase mother bodies: supports, densities and fluxes of the sinks and
//! sources that keep each family closed under the flow.
//!
//! Densities are stored as nonnegative magnitudes; the sign lives in
//! [`WeightedSupport::orientation`] (`+1` source, `-1` sink of the fluid the
//! support sits in). Fluxes follow the same convention, so for every mother
//! body the interior parts sum to `dA/dt` and the exterior parts to
//! `-dA/dt`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::curves::{Family, Mobility, Shape, ShapeRates};
use crate::error::{MuskatError, Result};
use crate::quadrature::{self, Tolerance};
use crate::specfun::{self, EllipticModulus};
use crate::C64;

/// Rays are integrated up to this multiple of the shape scale; the rest is
/// handled by an inversion substitution.
pub const RAY_TRUNCATION: f64 = 1e3;

/// Geometric support of one part of a mother body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CutSupport {
    PointSink { z: C64 },
    Ray { origin: C64, direction: f64 },
    Segment { z1: C64, z2: C64 },
    PointAtInfinity,
}

impl CutSupport {
    pub fn kind(&self) -> &'static str {
        match self {
            CutSupport::PointSink { .. } => "point",
            CutSupport::Ray { .. } => "ray",
            CutSupport::Segment { .. } => "segment",
            CutSupport::PointAtInfinity => "infinity",
        }
    }

    pub fn is_line(&self) -> bool {
        matches!(self, CutSupport::Ray { .. } | CutSupport::Segment { .. })
    }

    /// Start point and unit direction of a line support.
    pub fn frame(&self) -> Option<(C64, C64)> {
        match *self {
            CutSupport::Ray { origin, direction } => Some((origin, C64::from_polar(1.0, direction))),
            CutSupport::Segment { z1, z2 } => Some((z1, (z2 - z1) / (z2 - z1).norm())),
            _ => None,
        }
    }

    /// Length of a line support (`inf` for rays).
    pub fn length(&self) -> f64 {
        match *self {
            CutSupport::Ray { .. } | CutSupport::PointAtInfinity => f64::INFINITY,
            CutSupport::Segment { z1, z2 } => (z2 - z1).norm(),
            CutSupport::PointSink { .. } => 0.0,
        }
    }

    /// Point at arclength `s` along a line support.
    pub fn point_at(&self, s: f64) -> Option<C64> {
        self.frame().map(|(start, dir)| start + s * dir)
    }

    /// Distance from `z` to the support (0 for the point at infinity only
    /// when `z` is not finite).
    pub fn distance(&self, z: C64) -> f64 {
        match *self {
            CutSupport::PointSink { z: p } => (z - p).norm(),
            CutSupport::PointAtInfinity => {
                if z.norm().is_finite() {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            _ => {
                let (start, dir) = self.frame().expect("line support");
                let t = ((z - start) * dir.conj()).re.clamp(0.0, self.length());
                (z - (start + t * dir)).norm()
            }
        }
    }
}

/// Closed-form density along a support, with the parameters it was built
/// from. Line densities are magnitudes of the jump of the normal pressure
/// derivative across the cut.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Density {
    /// Point sink/source or the point at infinity; `log_coefficient` is `c` in
    /// `p ~ c ln|z - z0|` (or `c ln|z|` at infinity).
    Concentrated { log_coefficient: f64, k: f64 },
    EllipseSegment { a: f64, b: f64, a_dot: f64, b_dot: f64, k: f64 },
    NeumannRay { a: f64, b: f64, a_dot: f64, b_dot: f64, k: f64 },
    CassiniSegment { a: f64, b: f64, a_dot: f64, k: f64 },
    CassiniRay { a: f64, b: f64, a_dot: f64, k: f64 },
}

impl Density {
    pub fn mobility(&self) -> f64 {
        match *self {
            Density::Concentrated { k, .. }
            | Density::EllipseSegment { k, .. }
            | Density::NeumannRay { k, .. }
            | Density::CassiniSegment { k, .. }
            | Density::CassiniRay { k, .. } => k,
        }
    }

    /// Density magnitude at distance `u` from the start of the support and
    /// `w` from its end (`inf` for rays). Segments run from `-h` to `h`,
    /// rays outward from their origin.
    fn line_value(&self, u: f64, w: f64) -> f64 {
        match *self {
            Density::Concentrated { .. } => 0.0,
            Density::EllipseSegment { a, b, a_dot, b_dot, k } => {
                let d2 = a * a - b * b;
                (2.0 * a * b * (a * a_dot - b * b_dot)).abs() / (d2 * k * (u * w).sqrt())
            }
            Density::NeumannRay { a, b, a_dot, b_dot, k } => {
                let d2 = a * a - b * b;
                let c = a * b / d2.sqrt();
                let y = c + u;
                let a2b2_dot = 2.0 * a * a_dot * b * b + 2.0 * a * a * b * b_dot;
                // y^2 d^2 - a^2 b^2 = d^2 (y - c)(y + c)
                let root = d2.sqrt() * (u * (2.0 * c + u)).sqrt();
                (a2b2_dot * y / ((4.0 * y * y + d2) * root)).abs() / k
            }
            Density::CassiniSegment { a, b, a_dot, k } => {
                let x = u - b;
                let outer = (b * b * x * x + a.powi(4) - b.powi(4)).sqrt();
                2.0 * a.powi(3) * a_dot.abs() / (k * outer * (u * w).sqrt())
            }
            Density::CassiniRay { a, b, a_dot, k } => {
                let c = (a.powi(4) - b.powi(4)).sqrt() / b;
                let y = c + u;
                let inner = b * (u * (2.0 * c + u)).sqrt();
                2.0 * a.powi(3) * a_dot.abs() / (k * inner * (y * y + b * b).sqrt())
            }
        }
    }
}

/// One support with its fluid, density and flux.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedSupport {
    pub support: CutSupport,
    pub fluid: u8,
    pub density: Density,
    /// `+1` for a source of `fluid`, `-1` for a sink.
    pub orientation: f64,
    /// Volume rate injected into `fluid` (negative for sinks).
    pub signed_flux: f64,
}

/// The full two-phase mother body of a shape under given rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotherBody {
    pub parts: Vec<WeightedSupport>,
}

impl MotherBody {
    /// Parts living in `fluid`.
    pub fn in_fluid(&self, fluid: u8) -> impl Iterator<Item = &WeightedSupport> {
        self.parts.iter().filter(move |p| p.fluid == fluid)
    }

    /// Sum of signed fluxes into `fluid`.
    pub fn net_flux(&self, fluid: u8) -> f64 {
        self.in_fluid(fluid).map(|p| p.signed_flux).sum()
    }

    /// Smallest distance from `z` to any finite support.
    pub fn distance(&self, z: C64) -> f64 {
        self.parts
            .iter()
            .map(|p| p.support.distance(z))
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks that finite supports are pairwise disjoint and lie strictly in
    /// the domain of their fluid.
    pub fn check_structure(&self, shape: &Shape) -> Result<()> {
        let scale = shape.scale();
        let samples = |s: &CutSupport| -> Vec<C64> {
            match *s {
                CutSupport::PointSink { z } => vec![z],
                CutSupport::PointAtInfinity => vec![],
                CutSupport::Segment { .. } => (1..64)
                    .map(|i| s.point_at(s.length() * i as f64 / 64.0).unwrap())
                    .collect(),
                CutSupport::Ray { .. } => (1..64)
                    .map(|i| s.point_at(scale * 0.05 * (i * i) as f64).unwrap())
                    .collect(),
            }
        };
        for part in &self.parts {
            for z in samples(&part.support) {
                let inside = shape.contains(z) && !shape.is_on_boundary(z);
                let outside = !shape.contains(z) && !shape.is_on_boundary(z);
                let ok = if part.fluid == 2 { inside } else { outside };
                if !ok {
                    return Err(MuskatError::Degenerate(format!(
                        "{} support reaches outside fluid {} at {z}",
                        part.support.kind(),
                        part.fluid
                    )));
                }
            }
        }
        for (i, p) in self.parts.iter().enumerate() {
            for q in &self.parts[i + 1..] {
                for z in samples(&p.support) {
                    if q.support.distance(z) <= 1e-12 * scale {
                        return Err(MuskatError::Degenerate(format!(
                            "{} and {} supports intersect",
                            p.support.kind(),
                            q.support.kind()
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Type of a singular point of the complex potentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularityKind {
    /// Simple pole of `S`: logarithmic point sink/source.
    Pole,
    /// Moving square-root branch point.
    SquareRoot,
    /// Stationary `1/sqrt` branch point.
    InverseSquareRoot,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Singularity {
    pub z: C64,
    pub fluid: u8,
    pub kind: SingularityKind,
}

/// Finite singularities of the Schwarz function (the dots of the figures).
pub fn singularities(shape: &Shape) -> Vec<Singularity> {
    let (a, b) = (shape.a(), shape.b());
    let s = |re: f64, im: f64, fluid: u8, kind| Singularity {
        z: C64::new(re, im),
        fluid,
        kind,
    };
    match shape.family() {
        Family::Circle => vec![s(0.0, 0.0, 2, SingularityKind::Pole)],
        Family::Ellipse => {
            let d = shape.focal_half_distance();
            vec![
                s(d, 0.0, 2, SingularityKind::SquareRoot),
                s(-d, 0.0, 2, SingularityKind::SquareRoot),
            ]
        }
        Family::Neumann => {
            let d = shape.focal_half_distance();
            let c = a * b / d;
            vec![
                s(d / 2.0, 0.0, 2, SingularityKind::Pole),
                s(-d / 2.0, 0.0, 2, SingularityKind::Pole),
                s(0.0, c, 1, SingularityKind::SquareRoot),
                s(0.0, -c, 1, SingularityKind::SquareRoot),
            ]
        }
        Family::Cassini => {
            let c = (a.powi(4) - b.powi(4)).sqrt() / b;
            vec![
                s(b, 0.0, 2, SingularityKind::InverseSquareRoot),
                s(-b, 0.0, 2, SingularityKind::InverseSquareRoot),
                s(0.0, c, 1, SingularityKind::SquareRoot),
                s(0.0, -c, 1, SingularityKind::SquareRoot),
            ]
        }
    }
}

/// Moving square-root singularity `z_a` with `S = Φ sqrt(z - z_a) + Ψ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MovingSingularity {
    pub z: C64,
    pub z_dot: C64,
    /// `Φ(z_a)` for one choice of `sqrt(z - z_a)`.
    pub phi: C64,
    pub fluid: u8,
}

/// Moving branch points and their `Φ`, `dz_a/dt`. Zero rates are replaced by
/// unit growth (the cut directions depend only on the geometry).
pub fn moving_singularities(shape: &Shape, rates: ShapeRates) -> Vec<MovingSingularity> {
    let (a, b) = (shape.a(), shape.b());
    let rates = if rates.is_zero() {
        shape.admissible_rates(1.0)
    } else {
        rates
    };
    let (ad, bd) = (rates.a_dot, rates.b_dot);
    let i = C64::i();
    match shape.family() {
        Family::Circle => vec![],
        Family::Ellipse => {
            let d = shape.focal_half_distance();
            let d_dot = (a * ad - b * bd) / d;
            // sqrt(z^2-d^2) = sqrt(z-d) sqrt(z+d)
            let phi_right = -2.0 * a * b * C64::new(2.0 * d, 0.0).sqrt() / (d * d);
            let phi_left = -2.0 * a * b * C64::new(-2.0 * d, 0.0).sqrt() / (d * d);
            vec![
                MovingSingularity {
                    z: C64::new(d, 0.0),
                    z_dot: C64::new(d_dot, 0.0),
                    phi: phi_right,
                    fluid: 2,
                },
                MovingSingularity {
                    z: C64::new(-d, 0.0),
                    z_dot: C64::new(-d_dot, 0.0),
                    phi: phi_left,
                    fluid: 2,
                },
            ]
        }
        Family::Neumann => {
            let d = shape.focal_half_distance();
            let c = a * b / d;
            let d_dot = (a * ad - b * bd) / d;
            let c_dot = (ad * b + a * bd) / d - a * b * d_dot / (d * d);
            // sqrt(d^2 z^2 + a^2 b^2) = d sqrt(z - ic) sqrt(z + ic)
            let at = |za: C64| {
                let other = (2.0 * za).sqrt();
                2.0 * za * d * other / (4.0 * za * za - d * d)
            };
            let upper = i * c;
            vec![
                MovingSingularity {
                    z: upper,
                    z_dot: i * c_dot,
                    phi: at(upper),
                    fluid: 1,
                },
                MovingSingularity {
                    z: -upper,
                    z_dot: -i * c_dot,
                    phi: at(-upper),
                    fluid: 1,
                },
            ]
        }
        Family::Cassini => {
            let root = (a.powi(4) - b.powi(4)).sqrt();
            let c = root / b;
            let c_dot = 2.0 * a.powi(3) * ad / (b * root) - bd * (a.powi(4) + b.powi(4)) / (b * b * root);
            // sqrt(b^2 z^2 + a^4 - b^4) = b sqrt(z - ic) sqrt(z + ic)
            let at = |za: C64| {
                b * (2.0 * za).sqrt() / crate::curves::sqrt_with_segment_cut(za, b)
            };
            let upper = i * c;
            vec![
                MovingSingularity {
                    z: upper,
                    z_dot: i * c_dot,
                    phi: at(upper),
                    fluid: 1,
                },
                MovingSingularity {
                    z: -upper,
                    z_dot: -i * c_dot,
                    phi: at(-upper),
                    fluid: 1,
                },
            ]
        }
    }
}

/// Stationary `1/sqrt` singularities `z0` with `dΦ/dt` at `z0`, where
/// `S = Φ / sqrt(z - z0)` (Cassini's interior points `±b`).
pub fn stationary_inverse_sqrt_points(shape: &Shape, rates: ShapeRates) -> Vec<(C64, C64)> {
    if shape.family() != Family::Cassini {
        return vec![];
    }
    let (a, b) = (shape.a(), shape.b());
    let a_dot = if rates.is_zero() { 1.0 } else { rates.a_dot };
    // Φ = P / sqrt(z ± b); P(±b) = a^2, dP/dt = 2 a^3 a_dot / P
    let p_dot = 2.0 * a * a_dot;
    let right = C64::new(p_dot, 0.0) / C64::new(2.0 * b, 0.0).sqrt();
    let left = C64::new(p_dot, 0.0) / C64::new(-2.0 * b, 0.0).sqrt();
    vec![(C64::new(b, 0.0), right), (C64::new(-b, 0.0), left)]
}

/// Normalizes an angle to `(-π, π]`.
pub fn normalize_angle(phi: f64) -> f64 {
    let mut r = phi.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// Cut direction at a moving square-root singularity:
/// `π - 2 (arg Φ(z_a) + arg ż_a)`.
pub fn cut_direction_moving(phi_at_za: C64, za_dot: C64) -> Result<f64> {
    if za_dot.norm() == 0.0 {
        return Err(MuskatError::StationaryPoint);
    }
    if phi_at_za.norm() == 0.0 {
        return Err(MuskatError::Degenerate("Φ vanishes at the singularity".into()));
    }
    Ok(normalize_angle(PI - 2.0 * (phi_at_za.arg() + za_dot.arg())))
}

/// The three admissible cut directions at a stationary square-root
/// singularity, `φ_k = 2/3 (πk - θ0 + ν0)`, `k = 0, 1, 2`.
pub fn cut_directions_stationary_sqrt(
    r0: f64,
    theta0: f64,
    r0_dot: f64,
    theta0_dot: f64,
) -> Result<[f64; 3]> {
    let norm = r0_dot.hypot(r0 * theta0_dot);
    if norm == 0.0 || !norm.is_finite() {
        return Err(MuskatError::Degenerate(
            "Φ is stationary at the singularity".into(),
        ));
    }
    let nu0 = (r0_dot / norm).asin();
    Ok([0.0, 1.0, 2.0].map(|k| normalize_angle(2.0 / 3.0 * (PI * k - theta0 + nu0))))
}

/// Cut direction at a stationary `1/sqrt` singularity: `π - 2 arg ċ0`.
pub fn cut_direction_stationary_inverse_sqrt(c0_dot: C64) -> Result<f64> {
    if c0_dot.norm() == 0.0 {
        return Err(MuskatError::Degenerate("dΦ/dt vanishes".into()));
    }
    Ok(normalize_angle(PI - 2.0 * c0_dot.arg()))
}

fn orientation_for(fluid: u8, a_dot: f64) -> f64 {
    let grows = a_dot >= 0.0;
    match (fluid, grows) {
        (2, true) | (1, false) => 1.0,
        _ => -1.0,
    }
}

fn concentrated(support: CutSupport, fluid: u8, log_coefficient: f64, k: f64) -> WeightedSupport {
    // p ~ c ln r near a point source of strength m: m = -2πk c; at infinity
    // the outward flux is reversed
    let signed_flux = match support {
        CutSupport::PointAtInfinity => 2.0 * PI * k * log_coefficient,
        _ => -2.0 * PI * k * log_coefficient,
    };
    WeightedSupport {
        support,
        fluid,
        density: Density::Concentrated { log_coefficient, k },
        orientation: if signed_flux < 0.0 { -1.0 } else { 1.0 },
        signed_flux: signed_flux + 0.0,
    }
}

fn line(support: CutSupport, fluid: u8, density: Density, a_dot: f64) -> Result<WeightedSupport> {
    let mut part = WeightedSupport {
        support,
        fluid,
        density,
        orientation: orientation_for(fluid, a_dot),
        signed_flux: 0.0,
    };
    part.signed_flux = part.orientation * flux(&part)?;
    Ok(part)
}

/// Builds the mother body of `shape` for admissible `rates`.
pub fn build_mother_body(shape: &Shape, rates: ShapeRates, mob: Mobility) -> Result<MotherBody> {
    shape.check_admissible(rates)?;
    let (a, b) = (shape.a(), shape.b());
    let (ad, bd) = (rates.a_dot, rates.b_dot);
    let (k1, k2) = (mob.k1, mob.k2);
    let origin = C64::new(0.0, 0.0);
    let parts = match shape.family() {
        Family::Circle => vec![
            concentrated(CutSupport::PointSink { z: origin }, 2, -a * ad / k2, k2),
            concentrated(CutSupport::PointAtInfinity, 1, -a * ad / k1, k1),
        ],
        Family::Ellipse => {
            let d = shape.focal_half_distance();
            let ab_dot = ad * b + a * bd;
            vec![
                line(
                    CutSupport::Segment {
                        z1: C64::new(-d, 0.0),
                        z2: C64::new(d, 0.0),
                    },
                    2,
                    Density::EllipseSegment { a, b, a_dot: ad, b_dot: bd, k: k2 },
                    ad,
                )?,
                concentrated(CutSupport::PointAtInfinity, 1, -ab_dot / (2.0 * k1), k1),
            ]
        }
        Family::Neumann => {
            let d = shape.focal_half_distance();
            let c = a * b / d;
            let density = Density::NeumannRay { a, b, a_dot: ad, b_dot: bd, k: k1 };
            vec![
                concentrated(CutSupport::PointSink { z: C64::new(d / 2.0, 0.0) }, 2, -a * ad / (2.0 * k2), k2),
                concentrated(CutSupport::PointSink { z: C64::new(-d / 2.0, 0.0) }, 2, -a * ad / (2.0 * k2), k2),
                line(
                    CutSupport::Ray { origin: C64::new(0.0, c), direction: FRAC_PI_2 },
                    1,
                    density,
                    ad,
                )?,
                line(
                    CutSupport::Ray { origin: C64::new(0.0, -c), direction: -FRAC_PI_2 },
                    1,
                    density,
                    ad,
                )?,
                concentrated(CutSupport::PointAtInfinity, 1, -a * ad / (2.0 * k1), k1),
            ]
        }
        Family::Cassini => {
            let c = (a.powi(4) - b.powi(4)).sqrt() / b;
            let ray = Density::CassiniRay { a, b, a_dot: ad, k: k1 };
            vec![
                line(
                    CutSupport::Segment {
                        z1: C64::new(-b, 0.0),
                        z2: C64::new(b, 0.0),
                    },
                    2,
                    Density::CassiniSegment { a, b, a_dot: ad, k: k2 },
                    ad,
                )?,
                line(
                    CutSupport::Ray { origin: C64::new(0.0, c), direction: FRAC_PI_2 },
                    1,
                    ray,
                    ad,
                )?,
                line(
                    CutSupport::Ray { origin: C64::new(0.0, -c), direction: -FRAC_PI_2 },
                    1,
                    ray,
                    ad,
                )?,
            ]
        }
    };
    Ok(MotherBody { parts })
}

/// Density magnitude at arclength `s` from the start of a line support
/// (the ray origin or the segment's first endpoint).
pub fn density_at(part: &WeightedSupport, s: f64) -> Result<f64> {
    let length = part.support.length();
    if !part.support.is_line() {
        return Err(MuskatError::Endpoint { s, length: 0.0 });
    }
    if !(s > 0.0 && s < length) {
        return Err(MuskatError::Endpoint { s, length });
    }
    Ok(part.density.line_value(s, length - s))
}

/// Unsigned flux `k ∫ μ` through a part. Point parts return the strength
/// read off their logarithmic coefficient.
pub fn flux(part: &WeightedSupport) -> Result<f64> {
    let tol = Tolerance {
        abs: 1e-15,
        rel: 1e-13,
    };
    let k = part.density.mobility();
    let density = part.density;
    match part.support {
        CutSupport::PointSink { .. } | CutSupport::PointAtInfinity => Ok(part.signed_flux.abs()),
        CutSupport::Segment { z1, z2 } => {
            let length = (z2 - z1).norm();
            let integral = quadrature::integrate_sqrt_endpoints(
                |u, w| density.line_value(u, w),
                0.0,
                length,
                tol,
            )?;
            Ok(k * integral)
        }
        CutSupport::Ray { origin, .. } => {
            let cut = RAY_TRUNCATION * origin.norm().max(1e-300);
            let near = quadrature::integrate_sqrt_lower(|u| density.line_value(u, f64::INFINITY), cut, tol)?;
            let tail = quadrature::integrate_tail(|u| density.line_value(u, f64::INFINITY), cut, tol)?;
            Ok(k * (near + tail))
        }
    }
}

/// Largest violation of the two volume balances: interior parts must inject
/// `dA/dt` into fluid 2 and exterior parts must remove it from fluid 1.
pub fn flux_balance(mb: &MotherBody, shape: &Shape, rates: ShapeRates) -> f64 {
    let a_dot_area = area_rate(shape, rates);
    let interior = (mb.net_flux(2) - a_dot_area).abs();
    let exterior = (mb.net_flux(1) + a_dot_area).abs();
    interior.max(exterior)
}

/// Closed-form `dA/dt` under admissible rates.
pub fn area_rate(shape: &Shape, rates: ShapeRates) -> f64 {
    let (a, b) = (shape.a(), shape.b());
    let (ad, bd) = (rates.a_dot, rates.b_dot);
    match shape.family() {
        Family::Circle => 2.0 * PI * a * ad,
        Family::Ellipse => PI * (ad * b + a * bd),
        Family::Neumann => PI * (a * ad + b * bd),
        Family::Cassini => {
            let x = (b / a).powi(4);
            2.0 * PI * a * ad * specfun::hyp2f1_half(x).unwrap_or(f64::NAN)
        }
    }
}

/// Signed density of the constant-area ellipse,
/// `ab ∂t(d^2) (2x^2 - d^2) / (k2 d^4 sqrt(d^2 - x^2))`, where
/// `b_dot = -b a_dot / a`.
pub fn constant_area_density(shape: &Shape, a_dot: f64, mob: Mobility, x: f64) -> Result<f64> {
    let Shape::Ellipse { a, b } = *shape else {
        return Err(MuskatError::Family(format!(
            "constant-area variant needs an ellipse, got {}",
            shape.family().name()
        )));
    };
    let d2 = a * a - b * b;
    if !(x * x < d2) {
        return Err(MuskatError::Endpoint {
            s: x + d2.sqrt(),
            length: 2.0 * d2.sqrt(),
        });
    }
    let b_dot = -b * a_dot / a;
    let d2_dot = 2.0 * a * a_dot - 2.0 * b * b_dot;
    Ok(a * b * d2_dot * (2.0 * x * x - d2) / (mob.k2 * d2 * d2 * (d2 - x * x).sqrt()))
}

/// `k2 ∫ μ` of the signed constant-area density over `[-d, d]`.
pub fn constant_area_net_flux(shape: &Shape, a_dot: f64, mob: Mobility) -> Result<f64> {
    let d = shape.focal_half_distance();
    // evaluate the smooth part through x = d sin θ
    let Shape::Ellipse { a, b } = *shape else {
        return constant_area_density(shape, a_dot, mob, 0.0);
    };
    let d2 = d * d;
    let b_dot = -b * a_dot / a;
    let d2_dot = 2.0 * a * a_dot - 2.0 * b * b_dot;
    let coeff = a * b * d2_dot / (d2 * d2);
    let integral = quadrature::integrate(
        |theta: f64| {
            let x = d * theta.sin();
            2.0 * x * x - d2
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        Tolerance::default(),
    )?;
    Ok(coeff * integral)
}

/// Complete integral `K` of the Cassini modulus `b^2/a^2` (helper for the
/// closed-form segment flux `4 a a_dot K`).
pub fn cassini_segment_flux_closed_form(shape: &Shape, a_dot: f64) -> Result<f64> {
    let (a, b) = (shape.a(), shape.b());
    let modulus = EllipticModulus::new(b * b / (a * a))?;
    Ok(4.0 * a * a_dot * specfun::ellip_k(modulus))
}
