//! Pressures and velocities of both fluids.
//!
//! All families use the zero gauge `p_j = 0` on the interface. The complex
//! potentials satisfy `∂z W_j = -Ṡ / (2 k_j)`, so the Darcy velocity
//! `-k_j ∇p_j = conj(Ṡ) / 2` is the same expression on both sides of the
//! interface.

use serde::{Deserialize, Serialize};

use crate::curves::{sqrt_with_segment_cut, Family, Mobility, Shape, ShapeRates, TOL_BOUNDARY};
use crate::error::{MuskatError, Result};
use crate::motherbody::{self, CutSupport, MotherBody};
use crate::specfun::{self, EllipticModulus};
use crate::C64;

/// Pressure and velocity at one point of one fluid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub z: C64,
    pub fluid: u8,
    pub pressure: f64,
    pub velocity: (f64, f64),
}

/// Elliptic coordinate `α` of the confocal ellipse through a point,
/// `α^2 = (x^2 - y^2 - d^2 + sqrt((x^2 - y^2 - d^2)^2 + 4 x^2 y^2)) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticCoordinate {
    pub alpha_sq: f64,
}

impl EllipticCoordinate {
    pub fn new(x: f64, y: f64, d: f64) -> Self {
        let u = x * x - y * y - d * d;
        Self {
            alpha_sq: 0.5 * (u + (u * u + 4.0 * x * x * y * y).sqrt()),
        }
    }

    /// `α` with the sign of `x`; equals `Re sqrt(z^2 - d^2)`.
    pub fn signed_alpha(&self, x: f64) -> f64 {
        self.alpha_sq.sqrt().copysign(x)
    }
}

/// Pressure model: the zero-surface-tension solutions, the circle with
/// surface tension, or the constant-area ellipse with linear far field.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Variant {
    #[default]
    Standard,
    SurfaceTension { gamma: f64 },
    ConstantArea,
}

/// Fluid occupying `z`: 2 inside (and on) the interface, 1 outside.
pub fn fluid_of(shape: &Shape, z: C64) -> u8 {
    if shape.contains(z) || shape.is_on_boundary(z) {
        2
    } else {
        1
    }
}

fn check_side(shape: &Shape, fluid: u8, z: C64) -> Result<()> {
    if fluid != 1 && fluid != 2 {
        return Err(MuskatError::WrongSide { z, fluid });
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(MuskatError::Domain(format!("non-finite point {z}")));
    }
    if shape.is_on_boundary(z) {
        return Ok(());
    }
    let inside = shape.contains(z);
    if (fluid == 2) != inside {
        return Err(MuskatError::WrongSide { z, fluid });
    }
    Ok(())
}

/// Point supports where the pressure is logarithmically infinite.
fn check_point_supports(shape: &Shape, z: C64) -> Result<()> {
    let tol = 1e-12 * shape.scale();
    let points: Vec<C64> = match shape.family() {
        Family::Circle => vec![C64::new(0.0, 0.0)],
        Family::Neumann => {
            let d = shape.focal_half_distance();
            vec![C64::new(d / 2.0, 0.0), C64::new(-d / 2.0, 0.0)]
        }
        _ => vec![],
    };
    if points.iter().any(|p| (z - p).norm() <= tol) {
        return Err(MuskatError::OnSupport(z));
    }
    Ok(())
}

/// Real part of `F(arccos(b/z), k)`, `k = sqrt(a^4 - b^4)/a^2`, continued
/// from the right half plane and reflected so the result is even in `x`
/// and `y`. Equals 0 on `[-b, b]`, `K/2` on the oval and tends to `K`.
pub fn cassini_re_g(a: f64, b: f64, z: C64) -> Result<f64> {
    let scale = a;
    let mut w = C64::new(z.re.abs(), z.im.abs());
    if w.im == 0.0 && w.re < b {
        // on the segment sqrt(z^2 - b^2) is imaginary and the integral too
        return Ok(0.0);
    }
    if w.re == 0.0 {
        w.re = 1e-300 * scale;
    }
    let r = sqrt_with_segment_cut(w, b);
    let p2 = b * b * w * w + a.powi(4) - b.powi(4);
    let rf = specfun::carlson_rf(
        C64::new(b * b, 0.0),
        b * b * p2 / a.powi(4),
        w * w,
    )?;
    Ok((r * rf).re)
}

fn complete_cassini_k(a: f64, b: f64) -> Result<f64> {
    let modulus = EllipticModulus::cassini(a, b)?;
    Ok(specfun::ellip_k(modulus))
}

/// Pressure `p_fluid(z)` for admissible `rates`, zero on the interface.
pub fn pressure(shape: &Shape, rates: ShapeRates, mob: Mobility, fluid: u8, z: C64) -> Result<f64> {
    shape.check_admissible(rates)?;
    check_side(shape, fluid, z)?;
    check_point_supports(shape, z)?;
    let k = mob.of(fluid);
    let (a, b) = (shape.a(), shape.b());
    let (ad, bd) = (rates.a_dot, rates.b_dot);
    let p = match shape.family() {
        Family::Circle => -(a * ad / (2.0 * k)) * (z.norm_sqr() / (a * a)).ln(),
        Family::Ellipse => {
            let d = shape.focal_half_distance();
            let ab_dot = ad * b + a * bd;
            let w = z + sqrt_with_segment_cut(z, d);
            -(ab_dot / (2.0 * k)) * (w.norm().ln() - (a + b).ln())
        }
        Family::Neumann => {
            let d2 = a * a - b * b;
            let q = (d2 * z * z + a * a * b * b).sqrt();
            let ratio = (a * a + b * b + 2.0 * q).norm() / (4.0 * z * z - d2).norm();
            a * ad / (2.0 * k) * ratio.ln()
        }
        Family::Cassini => {
            let big_k = complete_cassini_k(a, b)?;
            -(a * ad / k) * (cassini_re_g(a, b, z)? - 0.5 * big_k)
        }
    };
    Ok(p + 0.0)
}

/// Circle pressures with surface tension: `p_1` gains `γ/a`, so
/// `p_1 - p_2 = γ κ` on the interface.
pub fn pressure_circle_surface_tension(
    shape: &Shape,
    a_dot: f64,
    gamma: f64,
    mob: Mobility,
    fluid: u8,
    z: C64,
) -> Result<f64> {
    let Shape::Circle { a } = *shape else {
        return Err(MuskatError::Family(format!(
            "surface tension is only available for the circle, got {}",
            shape.family().name()
        )));
    };
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(MuskatError::Domain(format!("surface tension must be >= 0, got {gamma}")));
    }
    let p = pressure(shape, ShapeRates::new(a_dot, 0.0), mob, fluid, z)?;
    Ok(if fluid == 1 { p + gamma / a } else { p })
}

struct ConstantArea {
    a: f64,
    b: f64,
    a_dot: f64,
    /// `∂t((a^2 + b^2)/d^2)`
    ratio_dot: f64,
    /// `∂t(1/d^2)`
    inv_d2_dot: f64,
    d: f64,
}

impl ConstantArea {
    fn new(shape: &Shape, a_dot: f64) -> Result<Self> {
        let Shape::Ellipse { a, b } = *shape else {
            return Err(MuskatError::Family(format!(
                "constant-area variant needs an ellipse, got {}",
                shape.family().name()
            )));
        };
        let b_dot = -b * a_dot / a;
        let d2 = a * a - b * b;
        let d2_dot = 2.0 * a * a_dot - 2.0 * b * b_dot;
        let s_dot = 2.0 * a * a_dot + 2.0 * b * b_dot;
        Ok(Self {
            a,
            b,
            a_dot,
            ratio_dot: (s_dot * d2 - (a * a + b * b) * d2_dot) / (d2 * d2),
            inv_d2_dot: -d2_dot / (d2 * d2),
            d: d2.sqrt(),
        })
    }

    fn omega(&self, z: C64) -> C64 {
        let r = sqrt_with_segment_cut(z, self.d);
        -z * z * self.ratio_dot / 4.0 + self.a * self.b * z * r * self.inv_d2_dot / 2.0
    }

    fn omega_dz(&self, z: C64) -> C64 {
        let r = sqrt_with_segment_cut(z, self.d);
        -z * self.ratio_dot / 2.0 + self.a * self.b * self.inv_d2_dot / 2.0 * (r + z * z / r)
    }

    fn offset(&self) -> f64 {
        self.b * self.b * self.a * self.a_dot / (self.d * self.d)
    }
}

/// Pressures of the constant-area ellipse (`ab` fixed, linear far field).
/// Both fluids use `p_j = (Re Ω - b^2 a ȧ / d^2) / k_j`, which vanishes on
/// the interface.
pub fn pressure_ellipse_constant_area(
    shape: &Shape,
    a_dot: f64,
    mob: Mobility,
    fluid: u8,
    z: C64,
) -> Result<f64> {
    let model = ConstantArea::new(shape, a_dot)?;
    check_side(shape, fluid, z)?;
    Ok((model.omega(z).re - model.offset()) / mob.of(fluid) + 0.0)
}

/// Velocity of the constant-area variant, `-k ∇p = -conj(Ω')`.
pub fn velocity_ellipse_constant_area(
    shape: &Shape,
    a_dot: f64,
    _mob: Mobility,
    fluid: u8,
    z: C64,
) -> Result<(f64, f64)> {
    let model = ConstantArea::new(shape, a_dot)?;
    check_side(shape, fluid, z)?;
    let d = model.d;
    if z.im == 0.0 && z.re.abs() <= d {
        return Err(MuskatError::OnSupport(z));
    }
    let v = -model.omega_dz(z).conj();
    Ok((v.re, v.im))
}

/// Darcy velocity `-k_j ∇p_j` from the analytic derivative of the
/// potential. The product does not depend on the mobilities.
pub fn velocity(
    shape: &Shape,
    rates: ShapeRates,
    _mob: Mobility,
    fluid: u8,
    z: C64,
) -> Result<(f64, f64)> {
    shape.check_admissible(rates)?;
    check_side(shape, fluid, z)?;
    check_point_supports(shape, z)?;
    let s_dot = match shape.schwarz_dot(rates, z) {
        Ok(v) => v,
        Err(MuskatError::BranchCut(_)) | Err(MuskatError::Pole(_)) => {
            return Err(MuskatError::OnSupport(z))
        }
        Err(e) => return Err(e),
    };
    let v = s_dot.conj() / 2.0;
    Ok((v.re, v.im))
}

/// Coefficient `c` of `ln|z|` in the far-field expansion of `p_1`.
pub fn far_field_log_coefficient(shape: &Shape, rates: ShapeRates, mob: Mobility) -> f64 {
    let (a, b) = (shape.a(), shape.b());
    let (ad, bd) = (rates.a_dot, rates.b_dot);
    match shape.family() {
        Family::Circle => -a * ad / mob.k1,
        Family::Ellipse => -(ad * b + a * bd) / (2.0 * mob.k1),
        Family::Neumann => -a * ad / (2.0 * mob.k1),
        Family::Cassini => 0.0,
    }
}

/// Complete field description used by the CLI and the verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Field {
    pub shape: Shape,
    pub rates: ShapeRates,
    pub mobility: Mobility,
    pub variant: Variant,
}

impl Field {
    /// Standard field with admissible rates derived from `a_dot`.
    pub fn new(shape: Shape, a_dot: f64, mobility: Mobility) -> Self {
        Self {
            shape,
            rates: shape.admissible_rates(a_dot),
            mobility,
            variant: Variant::Standard,
        }
    }

    pub fn with_variant(shape: Shape, a_dot: f64, mobility: Mobility, variant: Variant) -> Result<Self> {
        let rates = match variant {
            Variant::Standard => shape.admissible_rates(a_dot),
            Variant::SurfaceTension { .. } => {
                if shape.family() != Family::Circle {
                    return Err(MuskatError::Family(
                        "surface tension is only available for the circle".into(),
                    ));
                }
                shape.admissible_rates(a_dot)
            }
            Variant::ConstantArea => {
                if shape.family() != Family::Ellipse {
                    return Err(MuskatError::Family(
                        "constant-area variant needs an ellipse".into(),
                    ));
                }
                shape.constant_area_rates(a_dot)
            }
        };
        Ok(Self {
            shape,
            rates,
            mobility,
            variant,
        })
    }

    pub fn pressure(&self, fluid: u8, z: C64) -> Result<f64> {
        match self.variant {
            Variant::Standard => pressure(&self.shape, self.rates, self.mobility, fluid, z),
            Variant::SurfaceTension { gamma } => pressure_circle_surface_tension(
                &self.shape,
                self.rates.a_dot,
                gamma,
                self.mobility,
                fluid,
                z,
            ),
            Variant::ConstantArea => pressure_ellipse_constant_area(
                &self.shape,
                self.rates.a_dot,
                self.mobility,
                fluid,
                z,
            ),
        }
    }

    pub fn velocity(&self, fluid: u8, z: C64) -> Result<(f64, f64)> {
        match self.variant {
            Variant::ConstantArea => velocity_ellipse_constant_area(
                &self.shape,
                self.rates.a_dot,
                self.mobility,
                fluid,
                z,
            ),
            _ => velocity(&self.shape, self.rates, self.mobility, fluid, z),
        }
    }

    /// Pressure and velocity at `z` in the fluid that occupies it.
    pub fn sample(&self, z: C64) -> Result<FieldSample> {
        let fluid = fluid_of(&self.shape, z);
        Ok(FieldSample {
            z,
            fluid,
            pressure: self.pressure(fluid, z)?,
            velocity: self.velocity(fluid, z)?,
        })
    }

    /// Interface normal velocity (outward positive).
    pub fn normal_velocity(&self, z: C64) -> Result<f64> {
        match self.variant {
            Variant::ConstantArea => self.shape.normal_velocity_unconstrained(self.rates, z),
            _ => self.shape.normal_velocity(self.rates, z),
        }
    }

    /// Mother body, for the variants that have one.
    pub fn mother_body(&self) -> Result<MotherBody> {
        match self.variant {
            Variant::ConstantArea => {
                let d = self.shape.focal_half_distance();
                // signed density, not a mother body in the strict sense
                let density = crate::motherbody::Density::EllipseSegment {
                    a: self.shape.a(),
                    b: self.shape.b(),
                    a_dot: self.rates.a_dot,
                    b_dot: self.rates.b_dot,
                    k: self.mobility.k2,
                };
                Ok(MotherBody {
                    parts: vec![crate::motherbody::WeightedSupport {
                        support: CutSupport::Segment {
                            z1: C64::new(-d, 0.0),
                            z2: C64::new(d, 0.0),
                        },
                        fluid: 2,
                        density,
                        orientation: 1.0,
                        signed_flux: motherbody::constant_area_net_flux(
                            &self.shape,
                            self.rates.a_dot,
                            self.mobility,
                        )?,
                    }],
                })
            }
            _ => motherbody::build_mother_body(&self.shape, self.rates, self.mobility),
        }
    }

    /// Distance from `z` to the nearest finite support of the singular
    /// part of the field.
    pub fn support_distance(&self, z: C64) -> Result<f64> {
        Ok(self.mother_body()?.distance(z))
    }

    /// Pressure at points sharing the interface within tolerance is taken
    /// from the requested side.
    pub fn boundary_tolerance(&self) -> f64 {
        TOL_BOUNDARY * self.shape.scale()
    }
}
