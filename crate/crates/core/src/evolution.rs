//! Time integration of the shape parameters under a prescribed total flux
//! into the interior fluid.
//!
//! Each family keeps one quantity fixed (ellipse `b/a`, Neumann `d`,
//! Cassini `b`), so the state is the single parameter `a`; `b` is rebuilt
//! from the invariant after every stage. Steps are classical RK4, split at
//! schedule nodes, and terminal events are localized by bisection on the
//! step length.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curves::{Family, Mobility, Shape, ShapeRates};
use crate::error::{MuskatError, Result};
use crate::motherbody;
use crate::specfun;

/// Relative tolerance for terminal events, scaled by the shape size.
pub const TOL_EVENT: f64 = 1e-9;
const BISECTION_STEPS: usize = 60;

/// Prescribed total flux `Q(t)` into the interior fluid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FluxSchedule {
    Constant { q: f64 },
    /// `values[i]` holds on `[breakpoints[i-1], breakpoints[i])`, with
    /// `values.len() == breakpoints.len() + 1`.
    PiecewiseConstant { breakpoints: Vec<f64>, values: Vec<f64> },
    /// Linear interpolation between samples, constant beyond the ends.
    Table { times: Vec<f64>, values: Vec<f64> },
}

impl FluxSchedule {
    pub fn validate(&self) -> Result<()> {
        let increasing = |ts: &[f64]| ts.windows(2).all(|w| w[0] < w[1]) && ts.iter().all(|t| t.is_finite());
        let finite = |vs: &[f64]| vs.iter().all(|v| v.is_finite());
        match self {
            FluxSchedule::Constant { q } if q.is_finite() => Ok(()),
            FluxSchedule::Constant { q } => Err(MuskatError::Config(format!("flux: non-finite rate {q}"))),
            FluxSchedule::PiecewiseConstant { breakpoints, values } => {
                if values.len() != breakpoints.len() + 1 || !increasing(breakpoints) || !finite(values) {
                    return Err(MuskatError::Config(
                        "flux: piecewise schedule needs increasing breakpoints and one more value".into(),
                    ));
                }
                Ok(())
            }
            FluxSchedule::Table { times, values } => {
                if times.is_empty() || times.len() != values.len() || !increasing(times) || !finite(values) {
                    return Err(MuskatError::Config(
                        "flux: table needs matching, increasing, non-empty columns".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// `Q(t)`, right-continuous at breakpoints.
    pub fn q_at(&self, t: f64) -> f64 {
        match self {
            FluxSchedule::Constant { q } => *q,
            FluxSchedule::PiecewiseConstant { breakpoints, values } => {
                let i = breakpoints.partition_point(|&b| b <= t);
                values[i]
            }
            FluxSchedule::Table { times, values } => {
                let i = times.partition_point(|&s| s <= t);
                if i == 0 {
                    values[0]
                } else if i == times.len() {
                    values[times.len() - 1]
                } else {
                    let (t0, t1) = (times[i - 1], times[i]);
                    let w = (t - t0) / (t1 - t0);
                    values[i - 1] * (1.0 - w) + values[i] * w
                }
            }
        }
    }

    /// Schedule nodes strictly inside `(t0, t1)`; steps are split there.
    pub fn nodes_between(&self, t0: f64, t1: f64) -> Vec<f64> {
        let nodes: &[f64] = match self {
            FluxSchedule::Constant { .. } => &[],
            FluxSchedule::PiecewiseConstant { breakpoints, .. } => breakpoints,
            FluxSchedule::Table { times, .. } => times,
        };
        nodes.iter().copied().filter(|&s| s > t0 && s < t1).collect()
    }

    /// Exact `∫_t0^t1 Q dt` for `t0 <= t1`.
    pub fn integral(&self, t0: f64, t1: f64) -> f64 {
        let mut cuts = vec![t0];
        cuts.extend(self.nodes_between(t0, t1));
        cuts.push(t1);
        cuts.windows(2)
            .map(|w| {
                let (lo, hi) = (w[0], w[1]);
                match self {
                    // linear on each piece: midpoint rule is exact
                    FluxSchedule::Table { .. } => 0.5 * (self.q_at(lo) + self.q_at(hi)) * (hi - lo),
                    _ => self.q_at(lo) * (hi - lo),
                }
            })
            .sum()
    }
}

/// Limiting configurations where a family stops being a single smooth
/// closed curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalEvent {
    NeumannSplit,
    CassiniLemniscate,
    CircleVanish,
    EllipseVanish,
    TimeEnd,
}

impl TerminalEvent {
    pub fn name(&self) -> &'static str {
        match self {
            TerminalEvent::NeumannSplit => "neumann_split",
            TerminalEvent::CassiniLemniscate => "cassini_lemniscate",
            TerminalEvent::CircleVanish => "circle_vanish",
            TerminalEvent::EllipseVanish => "ellipse_vanish",
            TerminalEvent::TimeEnd => "time_end",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub a: f64,
    pub b: f64,
}

/// Flux through one mother-body part at a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartFlux {
    pub support_kind: String,
    pub fluid: u8,
    pub flux: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub params: Params,
    pub rates: ShapeRates,
    pub area: f64,
    pub fluxes: Vec<PartFlux>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub family: Family,
    pub mobility: Mobility,
    pub schedule: FluxSchedule,
    pub dt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Terminal {
    pub kind: TerminalEvent,
    pub t: f64,
}

/// Time series produced by [`evolve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub meta: TrajectoryMeta,
    pub samples: Vec<Sample>,
    pub terminal: Terminal,
}

impl Trajectory {
    pub fn shape_at(&self, i: usize) -> Result<Shape> {
        let p = self.samples[i].params;
        Shape::from_family(self.meta.family, p.a, p.b)
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectories hold at least one sample")
    }
}

/// Quantity held fixed along a trajectory, and the shape it implies for a
/// given `a`.
#[derive(Debug, Clone, Copy)]
enum Invariant {
    Circle,
    EllipseRatio(f64),
    NeumannD2(f64),
    CassiniB(f64),
}

impl Invariant {
    fn of(shape: &Shape) -> Self {
        let (a, b) = (shape.a(), shape.b());
        match shape.family() {
            Family::Circle => Invariant::Circle,
            Family::Ellipse => Invariant::EllipseRatio(b / a),
            Family::Neumann => Invariant::NeumannD2(a * a - b * b),
            Family::Cassini => Invariant::CassiniB(b),
        }
    }

    fn b(&self, a: f64) -> f64 {
        match *self {
            Invariant::Circle => a,
            Invariant::EllipseRatio(c) => c * a,
            Invariant::NeumannD2(d2) => (a * a - d2).max(0.0).sqrt(),
            Invariant::CassiniB(b) => b,
        }
    }

    /// `da/dt` for total flux `q`; `None` where the family degenerates.
    fn a_dot(&self, a: f64, q: f64) -> Option<f64> {
        if !(a > 0.0) || !a.is_finite() {
            return None;
        }
        let v = self.s_dot(a * a, q)? / (2.0 * a);
        v.is_finite().then_some(v)
    }

    /// `d(a^2)/dt`, which stays finite as circles and ellipses vanish.
    fn s_dot(&self, s: f64, q: f64) -> Option<f64> {
        if !(s > 0.0) || !s.is_finite() {
            return None;
        }
        let v = match *self {
            Invariant::Circle | Invariant::NeumannD2(_) => q / PI,
            Invariant::EllipseRatio(c) => q / (PI * c),
            Invariant::CassiniB(b) => {
                if !(s > b * b) {
                    return None;
                }
                q / (PI * specfun::hyp2f1_half((b * b / s).powi(2)).ok()?)
            }
        };
        v.is_finite().then_some(v)
    }

    /// Signed distance to the terminal manifold, relative to `scale`.
    fn event_value(&self, s: f64, scale: f64) -> f64 {
        match *self {
            Invariant::Circle | Invariant::EllipseRatio(_) => s / (scale * scale),
            Invariant::NeumannD2(d2) => (s - d2) / (scale * scale),
            Invariant::CassiniB(b) => (s.max(0.0).sqrt() - b) / scale,
        }
    }

    /// Area of the limiting configuration.
    fn terminal_area(&self) -> f64 {
        match *self {
            Invariant::Circle | Invariant::EllipseRatio(_) => 0.0,
            Invariant::NeumannD2(d2) => PI * d2 / 2.0,
            Invariant::CassiniB(b) => 2.0 * b * b,
        }
    }

    /// Smallest admissible `a^2`.
    fn terminal_s(&self) -> f64 {
        match *self {
            Invariant::Circle | Invariant::EllipseRatio(_) => 0.0,
            Invariant::NeumannD2(d2) => d2,
            Invariant::CassiniB(b) => b * b,
        }
    }

    fn event(&self) -> TerminalEvent {
        match self {
            Invariant::Circle => TerminalEvent::CircleVanish,
            Invariant::EllipseRatio(_) => TerminalEvent::EllipseVanish,
            Invariant::NeumannD2(_) => TerminalEvent::NeumannSplit,
            Invariant::CassiniB(_) => TerminalEvent::CassiniLemniscate,
        }
    }
}

/// Admissible rates producing `dA/dt = q`.
pub fn rate_from_flux(shape: &Shape, q: f64) -> Result<ShapeRates> {
    if let Some(event) = detect_terminal(shape) {
        return Err(MuskatError::DegenerateShape(format!(
            "{} is at the {} limit",
            shape.family().name(),
            event.name()
        )));
    }
    let a = shape.a();
    let a_dot = Invariant::of(shape)
        .a_dot(a, q)
        .ok_or_else(|| MuskatError::DegenerateShape(format!("no finite rate at a={a}")))?;
    Ok(shape.admissible_rates(a_dot))
}

/// Terminal event when `shape` lies within `TOL_EVENT * a` of a limiting
/// configuration.
pub fn detect_terminal(shape: &Shape) -> Option<TerminalEvent> {
    let (a, b) = (shape.a(), shape.b());
    let tol = TOL_EVENT * a;
    match shape.family() {
        Family::Circle => (a <= tol).then_some(TerminalEvent::CircleVanish),
        Family::Ellipse => (b <= tol).then_some(TerminalEvent::EllipseVanish),
        Family::Neumann => (b <= tol).then_some(TerminalEvent::NeumannSplit),
        Family::Cassini => (a - b <= tol).then_some(TerminalEvent::CassiniLemniscate),
    }
}

/// One RK4 step of `s = a^2` from `t` with length `h`; `None` if a stage
/// leaves the family.
fn rk4(inv: &Invariant, schedule: &FluxSchedule, t: f64, s: f64, h: f64) -> Option<f64> {
    // stages sample Q inside the step, where it is continuous
    let q = |tt: f64| schedule.q_at(tt.min(t + h * (1.0 - 1e-12)).max(t));
    let k1 = inv.s_dot(s, q(t))?;
    let k2 = inv.s_dot(s + 0.5 * h * k1, q(t + 0.5 * h))?;
    let k3 = inv.s_dot(s + 0.5 * h * k2, q(t + 0.5 * h))?;
    let k4 = inv.s_dot(s + h * k3, q(t + h))?;
    let next = s + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    (next.is_finite() && next > 0.0).then_some(next)
}

fn sample(shape: &Shape, t: f64, schedule: &FluxSchedule, mob: Mobility) -> Result<Sample> {
    let q = schedule.q_at(t);
    let rates = match rate_from_flux(shape, q) {
        Ok(r) => r,
        // at the terminal point the rates blow up; record the raw a_dot
        Err(_) => ShapeRates::default(),
    };
    let fluxes = if rates.is_zero() && q != 0.0 {
        vec![]
    } else {
        motherbody::build_mother_body(shape, rates, mob)?
            .parts
            .iter()
            .map(|p| PartFlux {
                support_kind: p.support.kind().to_string(),
                fluid: p.fluid,
                flux: p.signed_flux,
            })
            .collect()
    };
    Ok(Sample {
        t,
        params: Params {
            a: shape.a(),
            b: shape.b(),
        },
        rates,
        area: shape.area(),
        fluxes,
    })
}

/// Shape of the family with area `target`, by bisection on `a^2` upward
/// from `s_lo`.
fn shape_with_area<F: Fn(f64) -> Shape>(shape_of: &F, s_lo: f64, s_guess: f64, target: f64) -> Shape {
    let mut lo = s_lo;
    let mut hi = s_guess.max(s_lo);
    while shape_of(hi).area() < target {
        hi = 2.0 * hi + f64::MIN_POSITIVE;
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if shape_of(mid).area() < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    shape_of(hi)
}

/// Integrates the shape from `t = 0` to `t_end` (or a terminal event) with
/// step `dt`.
pub fn evolve(
    shape0: Shape,
    schedule: &FluxSchedule,
    t_end: f64,
    dt: f64,
    mob: Mobility,
) -> Result<Trajectory> {
    let shape0 = shape0.validated()?;
    schedule.validate()?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(MuskatError::Config(format!("dt must be positive, got {dt}")));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(MuskatError::Config(format!("t_end must be >= 0, got {t_end}")));
    }
    let meta = TrajectoryMeta {
        family: shape0.family(),
        mobility: mob,
        schedule: schedule.clone(),
        dt,
    };
    let inv = Invariant::of(&shape0);
    let scale = shape0.scale();
    let shape_of = |s: f64| {
        let a = s.sqrt();
        shape0.with_params(a, inv.b(a))
    };

    let area0 = shape0.area();
    let a_term = inv.terminal_area();
    let margin = TOL_EVENT * scale * scale;
    let area_at = |tau: f64| area0 + schedule.integral(0.0, tau);

    let mut samples = vec![sample(&shape0, 0.0, schedule, mob)?];
    if let Some(kind) = detect_terminal(&shape0) {
        return Ok(Trajectory {
            meta,
            samples,
            terminal: Terminal { kind, t: 0.0 },
        });
    }

    let mut t = 0.0_f64;
    let mut s2 = shape0.a().powi(2);
    let steps = (t_end / dt).round().max(0.0) as u64;
    let mut step = 0_u64;
    while t < t_end {
        step += 1;
        // land exactly on multiples of dt to avoid accumulated drift
        let target = if step >= steps { t_end } else { (step as f64 * dt).min(t_end) };
        let mut stops = schedule.nodes_between(t, target);
        stops.push(target);
        for stop in stops {
            // a step is usable if every stage stays in the family and the
            // result is still short of the terminal manifold
            let usable = |t: f64, s: f64, hh: f64| {
                rk4(&inv, schedule, t, s, hh).filter(|&next| inv.event_value(next, scale) > TOL_EVENT)
            };
            while t < stop {
                // the area follows the schedule exactly, which fixes the
                // event time independently of the integrator
                if area_at(stop) - a_term <= margin {
                    let (mut lo, mut hi) = (t, stop);
                    if area_at(t) - a_term <= margin {
                        hi = t;
                    } else {
                        for _ in 0..BISECTION_STEPS {
                            let mid = 0.5 * (lo + hi);
                            if area_at(mid) - a_term <= margin {
                                hi = mid;
                            } else {
                                lo = mid;
                            }
                        }
                    }
                    let shape = shape_with_area(&shape_of, inv.terminal_s(), s2, area_at(lo));
                    samples.push(sample(&shape, lo, schedule, mob)?);
                    return Ok(Trajectory {
                        meta,
                        samples,
                        terminal: Terminal { kind: inv.event(), t: hi },
                    });
                }
                let h = stop - t;
                if let Some(next) = usable(t, s2, h) {
                    s2 = next;
                    t = stop;
                    continue;
                }
                // largest usable sub-step; repeated until it collapses at the event
                let (mut lo, mut hi) = (0.0, h);
                for _ in 0..BISECTION_STEPS {
                    let mid = 0.5 * (lo + hi);
                    if usable(t, s2, mid).is_some() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                if lo <= 1e-15 * t.abs().max(1.0) {
                    let shape = shape_of(s2).validated().unwrap_or(shape_of(s2.max(0.0)));
                    samples.push(sample(&shape, t, schedule, mob)?);
                    return Ok(Trajectory {
                        meta,
                        samples,
                        terminal: Terminal { kind: inv.event(), t: t + hi },
                    });
                }
                s2 = usable(t, s2, lo).expect("bisection keeps a usable step");
                t += lo;
            }
        }
        let shape = shape_of(s2).validated()?;
        samples.push(sample(&shape, t, schedule, mob)?);
    }
    Ok(Trajectory {
        meta,
        samples,
        terminal: Terminal {
            kind: TerminalEvent::TimeEnd,
            t,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_examples() {
        let unit = Shape::circle(1.0).unwrap();
        let r = rate_from_flux(&unit, 2.0 * PI).unwrap();
        assert!((r.a_dot - 1.0).abs() < 1e-15);
        assert!(rate_from_flux(&unit, 0.0).unwrap().is_zero());
        let neumann = Shape::neumann(2.5, 5f64.sqrt() / 2.0).unwrap();
        let r = rate_from_flux(&neumann, 2.0 * PI).unwrap();
        assert!((r.a_dot - 0.4).abs() < 1e-15);
        assert!((r.b_dot - 0.894427190999916).abs() < 1e-12);
    }

    #[test]
    fn terminal_detection() {
        assert_eq!(
            detect_terminal(&Shape::neumann(2.5, 1e-9).unwrap()),
            Some(TerminalEvent::NeumannSplit)
        );
        assert_eq!(
            detect_terminal(&Shape::cassini(2.0 + 1e-9, 2.0).unwrap()),
            Some(TerminalEvent::CassiniLemniscate)
        );
        assert_eq!(detect_terminal(&Shape::ellipse(2.0, 1.0).unwrap()), None);
    }

    #[test]
    fn circle_closed_form() {
        let traj = evolve(
            Shape::circle(1.0).unwrap(),
            &FluxSchedule::Constant { q: 2.0 * PI },
            1.5,
            1e-3,
            Mobility::default(),
        )
        .unwrap();
        assert_eq!(traj.terminal.kind, TerminalEvent::TimeEnd);
        assert!((traj.last().params.a - 2.0).abs() < 1e-10);
        assert!((traj.last().t - 1.5).abs() < 1e-15);
    }

    #[test]
    fn neumann_split_time() {
        let traj = evolve(
            Shape::neumann(2.5, 5f64.sqrt() / 2.0).unwrap(),
            &FluxSchedule::Constant { q: -PI },
            5.0,
            1e-2,
            Mobility::default(),
        )
        .unwrap();
        assert_eq!(traj.terminal.kind, TerminalEvent::NeumannSplit);
        assert!((traj.terminal.t - 1.25).abs() < 1e-6, "{}", traj.terminal.t);
    }

    #[test]
    fn schedules() {
        let pw = FluxSchedule::PiecewiseConstant {
            breakpoints: vec![1.0],
            values: vec![1.0, -2.0],
        };
        assert_eq!(pw.q_at(0.5), 1.0);
        assert_eq!(pw.q_at(1.0), -2.0);
        assert!((pw.integral(0.0, 2.0) + 1.0).abs() < 1e-15);
        let table = FluxSchedule::Table {
            times: vec![0.0, 1.0],
            values: vec![0.0, 2.0],
        };
        assert!((table.q_at(0.25) - 0.5).abs() < 1e-15);
        assert!((table.integral(0.0, 1.0) - 1.0).abs() < 1e-15);
        assert!(FluxSchedule::Table { times: vec![], values: vec![] }.validate().is_err());
    }
}
