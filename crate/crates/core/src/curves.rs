//! Interface families, their implicit equations and Schwarz functions.
//!
//! Each Schwarz function is written in terms of at most two square-root
//! radicals ([`Radicals`]). The default branches put every cut on the
//! support of the mother body:
//!
//! * ellipse: `sqrt(z^2 - d^2) = z sqrt(1 - d^2/z^2)`, cut on `[-d, d]`;
//! * Neumann: `sqrt(d^2 z^2 + a^2 b^2)` principal, cut on the imaginary axis
//!   beyond `±i ab/d`;
//! * Cassini: `sqrt(b^2 z^2 + a^4 - b^4)` principal (cuts on the imaginary
//!   axis beyond `±i sqrt(a^4-b^4)/b`) over `sqrt(z^2 - b^2)` cut on `[-b, b]`.
//!
//! All of them are real and positive on the real axis far to the right, so
//! `S(conj z) = conj S(z)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{MuskatError, Result};
use crate::C64;

/// Relative boundary tolerance; multiplied by the shape scale `a`.
pub const TOL_BOUNDARY: f64 = 1e-9;
const RATE_TOLERANCE: f64 = 1e-9;

/// Interface shape at one instant. `a > b > 0` for the two-parameter
/// families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Shape {
    Circle { a: f64 },
    Ellipse { a: f64, b: f64 },
    #[serde(rename = "neumann")]
    NeumannOval { a: f64, b: f64 },
    #[serde(rename = "cassini")]
    CassiniOval { a: f64, b: f64 },
}

/// Family tag without parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Circle,
    Ellipse,
    Neumann,
    Cassini,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Circle,
        Family::Ellipse,
        Family::Neumann,
        Family::Cassini,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Circle => "circle",
            Family::Ellipse => "ellipse",
            Family::Neumann => "neumann",
            Family::Cassini => "cassini",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = MuskatError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circle" => Ok(Family::Circle),
            "ellipse" => Ok(Family::Ellipse),
            "neumann" => Ok(Family::Neumann),
            "cassini" => Ok(Family::Cassini),
            other => Err(MuskatError::Config(format!(
                "family: unknown family '{other}' (expected circle|ellipse|neumann|cassini)"
            ))),
        }
    }
}

/// Time derivatives of the shape parameters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ShapeRates {
    pub a_dot: f64,
    pub b_dot: f64,
}

impl ShapeRates {
    pub fn new(a_dot: f64, b_dot: f64) -> Self {
        Self { a_dot, b_dot }
    }

    pub fn is_zero(&self) -> bool {
        self.a_dot == 0.0 && self.b_dot == 0.0
    }
}

/// Darcy mobilities `k_j = h^2 / (12 nu_j)` of the exterior (1) and
/// interior (2) fluids.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mobility {
    pub k1: f64,
    pub k2: f64,
}

impl Mobility {
    pub fn new(k1: f64, k2: f64) -> Result<Self> {
        if !(k1 > 0.0 && k1.is_finite() && k2 > 0.0 && k2.is_finite()) {
            return Err(MuskatError::Config(format!(
                "mobilities must be positive, got k1={k1}, k2={k2}"
            )));
        }
        Ok(Self { k1, k2 })
    }

    /// Mobility from the cell gap and the two viscosities.
    pub fn from_gap(h: f64, nu1: f64, nu2: f64) -> Result<Self> {
        Self::new(h * h / (12.0 * nu1), h * h / (12.0 * nu2))
    }

    pub fn of(&self, fluid: u8) -> f64 {
        if fluid == 1 {
            self.k1
        } else {
            self.k2
        }
    }
}

impl Default for Mobility {
    fn default() -> Self {
        Self { k1: 1.0, k2: 1.0 }
    }
}

/// Values of the square-root radicals entering a Schwarz function.
///
/// Ellipse: `first = sqrt(z^2 - d^2)`. Neumann: `first = sqrt(d^2 z^2 + a^2 b^2)`.
/// Cassini: `first = sqrt(b^2 z^2 + a^4 - b^4)`, `second = sqrt(z^2 - b^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Radicals {
    pub first: C64,
    pub second: C64,
}

/// `sqrt(z^2 - h^2)` with its cut on `[-h, h]`, asymptotic to `z`.
pub fn sqrt_with_segment_cut(z: C64, h: f64) -> C64 {
    if z.norm() == 0.0 {
        return C64::new(0.0, h);
    }
    z * (1.0 - h * h / (z * z)).sqrt()
}

fn close(lhs: f64, rhs: f64, scale: f64) -> bool {
    (lhs - rhs).abs() <= RATE_TOLERANCE * scale
}

impl Shape {
    pub fn circle(a: f64) -> Result<Self> {
        Shape::Circle { a }.validated()
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        Shape::Ellipse { a, b }.validated()
    }

    pub fn neumann(a: f64, b: f64) -> Result<Self> {
        Shape::NeumannOval { a, b }.validated()
    }

    pub fn cassini(a: f64, b: f64) -> Result<Self> {
        Shape::CassiniOval { a, b }.validated()
    }

    /// Builds a shape of the given family; `b` is ignored for circles.
    pub fn from_family(family: Family, a: f64, b: f64) -> Result<Self> {
        match family {
            Family::Circle => Self::circle(a),
            Family::Ellipse => Self::ellipse(a, b),
            Family::Neumann => Self::neumann(a, b),
            Family::Cassini => Self::cassini(a, b),
        }
    }

    /// Checks the family invariants.
    pub fn validated(self) -> Result<Self> {
        let finite = |v: f64| v.is_finite();
        match self {
            Shape::Circle { a } if finite(a) && a > 0.0 => Ok(self),
            Shape::Circle { a } => Err(MuskatError::InvalidShape(format!(
                "circle radius must be positive, got {a}"
            ))),
            Shape::Ellipse { a, b }
            | Shape::NeumannOval { a, b }
            | Shape::CassiniOval { a, b } => {
                if finite(a) && finite(b) && a > b && b > 0.0 {
                    Ok(self)
                } else {
                    Err(MuskatError::InvalidShape(format!(
                        "{} requires a > b > 0, got a={a}, b={b}",
                        self.family().name()
                    )))
                }
            }
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Shape::Circle { .. } => Family::Circle,
            Shape::Ellipse { .. } => Family::Ellipse,
            Shape::NeumannOval { .. } => Family::Neumann,
            Shape::CassiniOval { .. } => Family::Cassini,
        }
    }

    pub fn a(&self) -> f64 {
        match *self {
            Shape::Circle { a }
            | Shape::Ellipse { a, .. }
            | Shape::NeumannOval { a, .. }
            | Shape::CassiniOval { a, .. } => a,
        }
    }

    /// Second parameter; equals `a` for a circle.
    pub fn b(&self) -> f64 {
        match *self {
            Shape::Circle { a } => a,
            Shape::Ellipse { b, .. } | Shape::NeumannOval { b, .. } | Shape::CassiniOval { b, .. } => b,
        }
    }

    /// Characteristic length.
    pub fn scale(&self) -> f64 {
        self.a()
    }

    /// Same family with new parameters (no validation).
    pub fn with_params(&self, a: f64, b: f64) -> Shape {
        match self {
            Shape::Circle { .. } => Shape::Circle { a },
            Shape::Ellipse { .. } => Shape::Ellipse { a, b },
            Shape::NeumannOval { .. } => Shape::NeumannOval { a, b },
            Shape::CassiniOval { .. } => Shape::CassiniOval { a, b },
        }
    }

    /// Parameters advanced linearly by `h` along `rates`.
    pub fn advanced(&self, rates: ShapeRates, h: f64) -> Shape {
        match self {
            Shape::Circle { a } => Shape::Circle { a: a + h * rates.a_dot },
            _ => self.with_params(self.a() + h * rates.a_dot, self.b() + h * rates.b_dot),
        }
    }

    /// Half the inter-focal distance (ellipse) or `sqrt(a^2 - b^2)` (Neumann).
    pub fn focal_half_distance(&self) -> f64 {
        let (a, b) = (self.a(), self.b());
        (a * a - b * b).max(0.0).sqrt()
    }

    /// Implicit equation `g(x, y)`: zero on the interface, negative inside.
    pub fn implicit_eval(&self, x: f64, y: f64) -> f64 {
        let r2 = x * x + y * y;
        match *self {
            Shape::Circle { a } => r2 - a * a,
            Shape::Ellipse { a, b } => x * x / (a * a) + y * y / (b * b) - 1.0,
            Shape::NeumannOval { a, b } => r2 * r2 - a * a * x * x - b * b * y * y,
            Shape::CassiniOval { a, b } => {
                r2 * r2 - 2.0 * b * b * (x * x - y * y) - (a.powi(4) - b.powi(4))
            }
        }
    }

    /// Spatial gradient of `g`.
    pub fn implicit_grad(&self, x: f64, y: f64) -> (f64, f64) {
        let r2 = x * x + y * y;
        match *self {
            Shape::Circle { .. } => (2.0 * x, 2.0 * y),
            Shape::Ellipse { a, b } => (2.0 * x / (a * a), 2.0 * y / (b * b)),
            Shape::NeumannOval { a, b } => (
                4.0 * r2 * x - 2.0 * a * a * x,
                4.0 * r2 * y - 2.0 * b * b * y,
            ),
            Shape::CassiniOval { b, .. } => (
                4.0 * r2 * x - 4.0 * b * b * x,
                4.0 * r2 * y + 4.0 * b * b * y,
            ),
        }
    }

    /// `∂g/∂t` at a fixed point under the parameter motion `rates`.
    pub fn implicit_dt(&self, rates: ShapeRates, x: f64, y: f64) -> f64 {
        let (ad, bd) = (rates.a_dot, rates.b_dot);
        match *self {
            Shape::Circle { a } => -2.0 * a * ad,
            Shape::Ellipse { a, b } => -2.0 * x * x / a.powi(3) * ad - 2.0 * y * y / b.powi(3) * bd,
            Shape::NeumannOval { a, b } => -2.0 * a * x * x * ad - 2.0 * b * y * y * bd,
            Shape::CassiniOval { a, b } => {
                -4.0 * a.powi(3) * ad + (4.0 * b.powi(3) - 4.0 * b * (x * x - y * y)) * bd
            }
        }
    }

    /// First-order distance estimate `|g| / |∇g|` to the interface.
    pub fn boundary_distance(&self, z: C64) -> f64 {
        let g = self.implicit_eval(z.re, z.im);
        let (gx, gy) = self.implicit_grad(z.re, z.im);
        let norm = gx.hypot(gy);
        if norm == 0.0 {
            return if g == 0.0 { f64::INFINITY } else { g.abs() / norm };
        }
        g.abs() / norm
    }

    pub fn is_on_boundary(&self, z: C64) -> bool {
        self.boundary_distance(z) <= TOL_BOUNDARY * self.scale()
    }

    /// True strictly inside the interior domain.
    pub fn contains(&self, z: C64) -> bool {
        match *self {
            Shape::NeumannOval { a, b } => {
                // the origin is an isolated zero of g; use the polar form
                let r2 = z.norm_sqr();
                if r2 == 0.0 {
                    return true;
                }
                r2 * r2 < a * a * z.re * z.re + b * b * z.im * z.im
            }
            _ => self.implicit_eval(z.re, z.im) < 0.0,
        }
    }

    /// Outward unit normal at (or near) the interface.
    pub fn outward_normal(&self, z: C64) -> C64 {
        let (gx, gy) = self.implicit_grad(z.re, z.im);
        let n = C64::new(gx, gy);
        n / n.norm()
    }

    /// Validates `rates` against the family constraint that keeps the
    /// pressure singularities at most logarithmic.
    pub fn check_admissible(&self, rates: ShapeRates) -> Result<()> {
        let (ad, bd) = (rates.a_dot, rates.b_dot);
        let ok = match *self {
            Shape::Circle { .. } => close(bd, 0.0, ad.abs()),
            Shape::Ellipse { a, b } => close(bd * a, ad * b, (ad * b).abs() + (bd * a).abs()),
            Shape::NeumannOval { a, b } => close(a * ad, b * bd, (a * ad).abs() + (b * bd).abs()),
            Shape::CassiniOval { .. } => close(bd, 0.0, ad.abs()),
        };
        if ok {
            Ok(())
        } else {
            let rule = match self.family() {
                Family::Circle => "b_dot must be 0",
                Family::Ellipse => "b_dot a = a_dot b (constant eccentricity)",
                Family::Neumann => "a a_dot = b b_dot (constant d)",
                Family::Cassini => "b_dot must be 0",
            };
            Err(MuskatError::Admissibility(format!(
                "{}: {rule}; got a_dot={ad}, b_dot={bd}",
                self.family().name()
            )))
        }
    }

    /// Admissible rates with the given `a_dot`.
    pub fn admissible_rates(&self, a_dot: f64) -> ShapeRates {
        let (a, b) = (self.a(), self.b());
        let b_dot = match self.family() {
            Family::Circle | Family::Cassini => 0.0,
            Family::Ellipse => a_dot * b / a,
            Family::Neumann => a * a_dot / b,
        };
        ShapeRates { a_dot, b_dot }
    }

    /// Rates keeping `ab` fixed (constant-area ellipse).
    pub fn constant_area_rates(&self, a_dot: f64) -> ShapeRates {
        ShapeRates {
            a_dot,
            b_dot: -self.b() * a_dot / self.a(),
        }
    }

    /// Radicands of [`Radicals::first`] and [`Radicals::second`].
    pub fn radicands(&self, z: C64) -> (C64, C64) {
        let (a, b) = (self.a(), self.b());
        match self.family() {
            Family::Circle => (C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
            Family::Ellipse => (z * z - (a * a - b * b), C64::new(0.0, 0.0)),
            Family::Neumann => ((a * a - b * b) * z * z + a * a * b * b, C64::new(0.0, 0.0)),
            Family::Cassini => (b * b * z * z + a.powi(4) - b.powi(4), z * z - b * b),
        }
    }

    /// Radicals on the default branches; errors on cuts and at poles.
    pub fn radicals(&self, z: C64) -> Result<Radicals> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(MuskatError::Domain(format!("non-finite point {z}")));
        }
        let b = self.b();
        let tiny = 1e-14 * self.scale();
        match self.family() {
            Family::Circle => {
                if z.norm() <= tiny {
                    return Err(MuskatError::Pole(z));
                }
                Ok(Radicals::default())
            }
            Family::Ellipse => {
                let d = self.focal_half_distance();
                if z.im == 0.0 && z.re.abs() <= d {
                    return Err(MuskatError::BranchCut(z));
                }
                Ok(Radicals {
                    first: sqrt_with_segment_cut(z, d),
                    second: C64::default(),
                })
            }
            Family::Neumann => {
                let d = self.focal_half_distance();
                if (4.0 * z * z - d * d).norm() <= tiny * self.scale() {
                    return Err(MuskatError::Pole(z));
                }
                let (rad, _) = self.radicands(z);
                if rad.im == 0.0 && rad.re <= 0.0 {
                    return Err(MuskatError::BranchCut(z));
                }
                Ok(Radicals {
                    first: rad.sqrt(),
                    second: C64::default(),
                })
            }
            Family::Cassini => {
                let (rad, _) = self.radicands(z);
                if rad.im == 0.0 && rad.re <= 0.0 {
                    return Err(MuskatError::BranchCut(z));
                }
                if z.im == 0.0 && z.re.abs() <= b {
                    return Err(MuskatError::BranchCut(z));
                }
                Ok(Radicals {
                    first: rad.sqrt(),
                    second: sqrt_with_segment_cut(z, b),
                })
            }
        }
    }

    /// `S(z)` for explicitly supplied radical values.
    pub fn schwarz_with(&self, z: C64, r: Radicals) -> C64 {
        let (a, b) = (self.a(), self.b());
        match self.family() {
            Family::Circle => a * a / z,
            Family::Ellipse => {
                let d2 = a * a - b * b;
                ((a * a + b * b) * z - 2.0 * a * b * r.first) / d2
            }
            Family::Neumann => {
                let d2 = a * a - b * b;
                z * (a * a + b * b + 2.0 * r.first) / (4.0 * z * z - d2)
            }
            Family::Cassini => r.first / r.second,
        }
    }

    /// `∂S/∂z` for explicitly supplied radical values.
    pub fn schwarz_dz_with(&self, z: C64, r: Radicals) -> C64 {
        let (a, b) = (self.a(), self.b());
        match self.family() {
            Family::Circle => -a * a / (z * z),
            Family::Ellipse => {
                let d2 = a * a - b * b;
                ((a * a + b * b) - 2.0 * a * b * z / r.first) / d2
            }
            Family::Neumann => {
                let d2 = a * a - b * b;
                let num = a * a + b * b + 2.0 * r.first;
                let den = 4.0 * z * z - d2;
                num / den + 2.0 * d2 * z * z / (r.first * den) - 8.0 * z * z * num / (den * den)
            }
            Family::Cassini => {
                let (p, q) = (r.first, r.second);
                b * b * z / (p * q) - p * z / (q * q * q)
            }
        }
    }

    /// `∂S/∂t` at fixed `z` for arbitrary parameter rates and explicitly
    /// supplied radical values.
    pub fn schwarz_dot_with(&self, rates: ShapeRates, z: C64, r: Radicals) -> C64 {
        let (a, b) = (self.a(), self.b());
        let (ad, bd) = (rates.a_dot, rates.b_dot);
        match self.family() {
            Family::Circle => 2.0 * a * ad / z,
            Family::Ellipse => {
                let d2 = a * a - b * b;
                let d2_dot = 2.0 * a * ad - 2.0 * b * bd;
                let ab_dot = ad * b + a * bd;
                let rr = r.first;
                let rr_dot = -d2_dot / (2.0 * rr);
                let s = ((a * a + b * b) * z - 2.0 * a * b * rr) / d2;
                ((2.0 * a * ad + 2.0 * b * bd) * z - 2.0 * ab_dot * rr - 2.0 * a * b * rr_dot)
                    / d2
                    - s * d2_dot / d2
            }
            Family::Neumann => {
                let d2 = a * a - b * b;
                let d2_dot = 2.0 * a * ad - 2.0 * b * bd;
                let a2b2_dot = 2.0 * a * ad * b * b + 2.0 * a * a * b * bd;
                let q = r.first;
                let q_dot = (z * z * d2_dot + a2b2_dot) / (2.0 * q);
                let num = a * a + b * b + 2.0 * q;
                let num_dot = 2.0 * a * ad + 2.0 * b * bd + 2.0 * q_dot;
                let den = 4.0 * z * z - d2;
                z * num_dot / den + z * num * d2_dot / (den * den)
            }
            Family::Cassini => {
                let (p, q) = (r.first, r.second);
                let p_dot = (2.0 * b * bd * z * z + 4.0 * a.powi(3) * ad - 4.0 * b.powi(3) * bd)
                    / (2.0 * p);
                let q_dot = -b * bd / q;
                p_dot / q - p * q_dot / (q * q)
            }
        }
    }

    /// Schwarz function `S(z)` with `S = conj(z)` on the interface.
    pub fn schwarz(&self, z: C64) -> Result<C64> {
        let r = self.radicals(z)?;
        Ok(self.schwarz_with(z, r))
    }

    /// Exact `∂S/∂z` on the default branch.
    pub fn schwarz_dz(&self, z: C64) -> Result<C64> {
        let r = self.radicals(z)?;
        Ok(self.schwarz_dz_with(z, r))
    }

    /// `∂S/∂t` under admissible rates.
    pub fn schwarz_dot(&self, rates: ShapeRates, z: C64) -> Result<C64> {
        self.check_admissible(rates)?;
        self.schwarz_dot_unconstrained(rates, z)
    }

    /// `∂S/∂t` for arbitrary rates (the curve stays in its family for any
    /// parameter motion; only the pressure requires admissibility).
    pub fn schwarz_dot_unconstrained(&self, rates: ShapeRates, z: C64) -> Result<C64> {
        let r = self.radicals(z)?;
        Ok(self.schwarz_dot_with(rates, z, r))
    }

    /// Normal velocity of the interface, `v_n = -i Ṡ / sqrt(4 ∂S/∂z)`,
    /// positive along the outward normal.
    ///
    /// The root of `∂S/∂z` is the conjugate unit tangent of the
    /// counterclockwise interface.
    pub fn normal_velocity(&self, rates: ShapeRates, z: C64) -> Result<f64> {
        self.check_admissible(rates)?;
        self.normal_velocity_unconstrained(rates, z)
    }

    pub fn normal_velocity_unconstrained(&self, rates: ShapeRates, z: C64) -> Result<f64> {
        let distance = self.boundary_distance(z);
        if !(distance <= TOL_BOUNDARY * self.scale()) {
            return Err(MuskatError::NotOnBoundary { z, distance });
        }
        let r = self.radicals(z)?;
        let s_dot = self.schwarz_dot_with(rates, z, r);
        let s_z = self.schwarz_dz_with(z, r);
        let tangent = C64::i() * self.outward_normal(z);
        let mut root = s_z.sqrt();
        if (root * tangent).re < 0.0 {
            root = -root;
        }
        Ok((-C64::i() * s_dot / (2.0 * root)).re)
    }

    /// Interface point at parameter `theta` and its derivative `dz/dtheta`.
    pub fn boundary_param(&self, theta: f64) -> (C64, C64) {
        let (a, b) = (self.a(), self.b());
        let (s, c) = theta.sin_cos();
        let e = C64::new(c, s);
        match self.family() {
            Family::Circle => (a * e, C64::new(0.0, a) * e),
            Family::Ellipse => (C64::new(a * c, b * s), C64::new(-a * s, b * c)),
            Family::Neumann => {
                let r2 = a * a * c * c + b * b * s * s;
                let r2p = (b * b - a * a) * (2.0 * theta).sin();
                Self::polar(r2, r2p, e)
            }
            Family::Cassini => {
                let (s2, c2) = (2.0 * theta).sin_cos();
                let b4 = b.powi(4);
                let root = (b4 * c2 * c2 + a.powi(4) - b4).sqrt();
                let r2 = b * b * c2 + root;
                let r2p = -2.0 * b * b * s2 - 2.0 * b4 * c2 * s2 / root;
                Self::polar(r2, r2p, e)
            }
        }
    }

    fn polar(r2: f64, r2p: f64, e: C64) -> (C64, C64) {
        let r = r2.sqrt();
        let rp = r2p / (2.0 * r);
        (r * e, C64::new(rp, r) * e)
    }

    /// `n` interface points, counterclockwise, at equally spaced parameter
    /// values starting from `theta = 0`.
    pub fn boundary_points(&self, n: usize) -> Result<Vec<C64>> {
        self.boundary_points_with_phase(n, 0.0)
    }

    /// As [`Shape::boundary_points`] with the parameter grid shifted by
    /// `phase` radians.
    pub fn boundary_points_with_phase(&self, n: usize, phase: f64) -> Result<Vec<C64>> {
        if n < 3 {
            return Err(MuskatError::InvalidCount(n));
        }
        Ok((0..n)
            .map(|k| self.boundary_param(phase + 2.0 * PI * k as f64 / n as f64).0)
            .collect())
    }

    /// Area by trapezoidal Green's-theorem quadrature,
    /// `1/2 ∮ (x dy - y dx)`, over `n` parameter nodes.
    pub fn green_area(&self, n: usize) -> f64 {
        let h = 2.0 * PI / n as f64;
        let sum: f64 = (0..n)
            .map(|k| {
                let (z, dz) = self.boundary_param(k as f64 * h);
                (z.conj() * dz).im
            })
            .sum();
        0.5 * sum * h
    }

    /// Green's-theorem area refined until successive node doublings agree
    /// to `1e-14` relative.
    pub fn green_area_converged(&self) -> f64 {
        let mut n = 256;
        let mut prev = self.green_area(n);
        while n < 1 << 22 {
            n *= 2;
            let next = self.green_area(n);
            if (next - prev).abs() <= 1e-14 * next.abs() {
                return next;
            }
            prev = next;
        }
        prev
    }

    /// Area of the interior domain.
    pub fn area(&self) -> f64 {
        let (a, b) = (self.a(), self.b());
        match self.family() {
            Family::Circle => PI * a * a,
            Family::Ellipse => PI * a * b,
            Family::Neumann => PI * (a * a + b * b) / 2.0,
            Family::Cassini => self.green_area_converged(),
        }
    }
}
