//! Command-line front end of the `muskat` binary.
//!
//! Exit codes: 0 success, 1 failed verification, 2 configuration or input
//! error, 3 runtime error.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{Family, Mobility, Shape, ShapeRates};
use crate::error::MuskatError;
use crate::evolution::{self, FluxSchedule, Trajectory};
use crate::fields::{Field, Variant};
use crate::motherbody::{self, CutSupport, MotherBody};
use crate::verify::{self, SuiteConfig, ALL_CHECKS};
use crate::C64;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) | CliError::Io { .. } => EXIT_RUNTIME,
        }
    }
}

impl From<MuskatError> for CliError {
    fn from(e: MuskatError) -> Self {
        match e {
            MuskatError::Config(_)
            | MuskatError::InvalidShape(_)
            | MuskatError::Family(_)
            | MuskatError::Region(_)
            | MuskatError::InvalidCount(_) => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "muskat", version, about = "Exact two-phase Hele-Shaw flows with algebraic interfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the shape parameters under a flux schedule (JSON).
    Simulate(Options),
    /// Sample pressure and velocity on a grid (CSV).
    Field(Options),
    /// Run the verification suite (JSON report).
    Verify(Options),
    /// Draw interfaces, point supports and cuts (SVG).
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Default, Args)]
#[command(allow_negative_numbers = true)]
pub struct Options {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub a0: Option<f64>,
    #[arg(long)]
    pub b0: Option<f64>,
    #[arg(long)]
    pub k1: Option<f64>,
    #[arg(long)]
    pub k2: Option<f64>,
    /// `const:<q>` or `table:<path>` (two columns `t q`).
    #[arg(long)]
    pub flux: Option<String>,
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// `x0,x1,y0,y1,nx,ny`
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub variant: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    /// Trajectory JSON or field CSV; without it the configured shape is drawn.
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub options: Options,
}

/// Contents of a `--config` file. Every key is optional; flags win.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub family: Option<String>,
    pub a0: Option<f64>,
    pub b0: Option<f64>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub flux: Option<String>,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub grid: Option<String>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub gamma: Option<f64>,
    pub variant: Option<String>,
    /// Rate `da/dt` for `field` and `verify`; defaults to the one implied by
    /// the flux at `t = 0`.
    pub a_dot: Option<f64>,
    /// Checks run by `verify`; all of them by default.
    pub checks: Option<Vec<String>>,
    /// Multiplies the closed-form densities in the density-jump check.
    pub density_scale: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("config: {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("config: {}: {e}", path.display())))
    }

    /// Applies command-line overrides.
    pub fn merged(mut self, o: &Options) -> Self {
        macro_rules! over {
            ($($f:ident),*) => { $( if o.$f.is_some() { self.$f = o.$f.clone(); } )* };
        }
        over!(family, a0, b0, k1, k2, flux, t_end, dt, grid, out, seed, gamma, variant);
        self
    }
}

/// Sampling lattice of `field`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
}

impl FromStr for Grid {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let bad = || CliError::Config(format!("grid: expected x0,x1,y0,y1,nx,ny, got '{s}'"));
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(bad());
        }
        let f = |i: usize| parts[i].parse::<f64>().map_err(|_| bad());
        let n = |i: usize| parts[i].parse::<usize>().map_err(|_| bad());
        let g = Grid { x0: f(0)?, x1: f(1)?, y0: f(2)?, y1: f(3)?, nx: n(4)?, ny: n(5)? };
        let finite = [g.x0, g.x1, g.y0, g.y1].iter().all(|v| v.is_finite());
        if !finite || g.x0 >= g.x1 || g.y0 >= g.y1 {
            return Err(CliError::Config(format!("grid: bounds must be finite and increasing, got '{s}'")));
        }
        if g.nx < 2 || g.ny < 2 {
            return Err(CliError::Config(format!("grid: resolution must be at least 2x2, got '{s}'")));
        }
        Ok(g)
    }
}

impl Grid {
    pub fn points(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.nx * self.ny);
        for j in 0..self.ny {
            let y = self.y0 + (self.y1 - self.y0) * j as f64 / (self.ny - 1) as f64;
            for i in 0..self.nx {
                let x = self.x0 + (self.x1 - self.x0) * i as f64 / (self.nx - 1) as f64;
                out.push(C64::new(x, y));
            }
        }
        out
    }
}

/// Parses `const:<q>` or `table:<path>`.
pub fn parse_flux(spec: &str) -> CliResult<FluxSchedule> {
    let schedule = if let Some(q) = spec.strip_prefix("const:") {
        let q = q
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::Config(format!("flux: bad rate in '{spec}'")))?;
        FluxSchedule::Constant { q }
    } else if let Some(path) = spec.strip_prefix("table:") {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("flux: {path}: {e}")))?;
        let (mut times, mut values) = (vec![], vec![]);
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|c| !c.is_empty()).collect();
            let parsed: Option<Vec<f64>> = cols.iter().map(|c| c.parse().ok()).collect();
            match parsed.as_deref() {
                Some([t, q]) => {
                    times.push(*t);
                    values.push(*q);
                }
                _ => return Err(CliError::Config(format!("flux: {path}:{}: expected 't q'", no + 1))),
            }
        }
        FluxSchedule::Table { times, values }
    } else {
        return Err(CliError::Config(format!(
            "flux: expected 'const:<q>' or 'table:<path>', got '{spec}'"
        )));
    };
    schedule.validate()?;
    Ok(schedule)
}

/// A configuration with defaults filled in and values validated.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub shape: Shape,
    pub mobility: Mobility,
    pub schedule: FluxSchedule,
    pub t_end: f64,
    pub dt: f64,
    pub grid: Grid,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub variant: Variant,
    pub a_dot: Option<f64>,
    pub checks: Vec<String>,
    pub density_scale: f64,
}

fn default_params(family: Family) -> (f64, f64) {
    match family {
        Family::Circle => (1.0, 1.0),
        Family::Ellipse => (2.0, 1.0),
        Family::Neumann => (2.5, 5f64.sqrt() / 2.0),
        Family::Cassini => (2.0, 1.0),
    }
}

impl Resolved {
    pub fn from_config(c: &RunConfig) -> CliResult<Self> {
        let family = match &c.family {
            Some(name) => Family::from_str(name)?,
            None => Family::Circle,
        };
        let (da, db) = default_params(family);
        let a = c.a0.unwrap_or(da);
        let b = c.b0.unwrap_or(if c.a0.is_some() && family == Family::Circle { a } else { db });
        let shape = Shape::from_family(family, a, b).map_err(|e| CliError::Config(format!("a0/b0: {e}")))?;
        let mobility = Mobility::new(c.k1.unwrap_or(1.0), c.k2.unwrap_or(1.0))?;
        let schedule = parse_flux(c.flux.as_deref().unwrap_or("const:1"))?;
        let t_end = c.t_end.unwrap_or(1.0);
        if !(t_end.is_finite() && t_end >= 0.0) {
            return Err(CliError::Config(format!("t_end: must be finite and >= 0, got {t_end}")));
        }
        let dt = c.dt.unwrap_or(1e-3);
        if !(dt.is_finite() && dt > 0.0) {
            return Err(CliError::Config(format!("dt: must be positive, got {dt}")));
        }
        let grid = match &c.grid {
            Some(g) => g.parse()?,
            None => {
                let w = 1.6 * shape.scale();
                Grid { x0: -w, x1: w, y0: -w, y1: w, nx: 41, ny: 41 }
            }
        };
        let variant = match (c.variant.as_deref(), c.gamma) {
            (Some("constant-area"), None) => Variant::ConstantArea,
            (Some("constant-area"), Some(_)) => {
                return Err(CliError::Config("gamma: not available with the constant-area variant".into()))
            }
            (Some("standard") | None, Some(gamma)) => {
                if !(gamma.is_finite() && gamma >= 0.0) {
                    return Err(CliError::Config(format!("gamma: must be finite and >= 0, got {gamma}")));
                }
                Variant::SurfaceTension { gamma }
            }
            (Some("standard") | None, None) => Variant::Standard,
            (Some(other), _) => {
                return Err(CliError::Config(format!(
                    "variant: unknown variant '{other}' (expected 'constant-area')"
                )))
            }
        };
        match variant {
            Variant::SurfaceTension { .. } if family != Family::Circle => {
                return Err(CliError::Config("gamma: surface tension needs the circle family".into()))
            }
            Variant::ConstantArea if family != Family::Ellipse => {
                return Err(CliError::Config("variant: constant-area needs the ellipse family".into()))
            }
            _ => {}
        }
        if let Some(ad) = c.a_dot {
            if !ad.is_finite() {
                return Err(CliError::Config(format!("a_dot: must be finite, got {ad}")));
            }
        }
        let checks = c.checks.clone().unwrap_or_else(|| ALL_CHECKS.iter().map(|s| s.to_string()).collect());
        let density_scale = c.density_scale.unwrap_or(1.0);
        if !density_scale.is_finite() {
            return Err(CliError::Config("density_scale: must be finite".into()));
        }
        Ok(Self {
            shape,
            mobility,
            schedule,
            t_end,
            dt,
            grid,
            out: c.out.clone(),
            seed: c.seed.unwrap_or(0),
            variant,
            a_dot: c.a_dot,
            checks,
            density_scale,
        })
    }

    pub fn from_options(o: &Options) -> CliResult<Self> {
        let base = match &o.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        Self::from_config(&base.merged(o))
    }

    /// Field at `t = 0`.
    pub fn field(&self) -> CliResult<Field> {
        let a_dot = match self.a_dot {
            Some(ad) => ad,
            None => evolution::rate_from_flux(&self.shape, self.schedule.q_at(0.0))?.a_dot,
        };
        Ok(Field::with_variant(self.shape, a_dot, self.mobility, self.variant)?)
    }
}

/// JSON formatter printing every float with 17 significant digits.
struct SignificantDigits;

impl serde_json::ser::Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        // adding zero folds -0 into +0
        write!(writer, "{:.16e}", value + 0.0)
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes `value` as JSON with 17 significant digits per float.
pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SignificantDigits);
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::Runtime(format!("serialization: {e}")))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

pub fn cmd_simulate(r: &Resolved) -> CliResult<Trajectory> {
    if r.variant == Variant::ConstantArea {
        return Err(CliError::Config(
            "variant: simulate integrates the standard model only".into(),
        ));
    }
    let traj = evolution::evolve(r.shape, &r.schedule, r.t_end, r.dt, r.mobility)?;
    emit(r.out.as_deref(), &to_json(&traj)?)?;
    Ok(traj)
}

fn cell(v: f64) -> String {
    format!("{:.16e}", v + 0.0)
}

/// CSV text of the field on the grid; points inside the support tube get
/// empty pressure and velocity cells.
pub fn field_csv(field: &Field, grid: &Grid) -> CliResult<String> {
    let tube = 1e-9 * field.shape.scale();
    let mb = field.mother_body()?;
    let mut out = String::from("x,y,fluid,pressure,vx,vy\n");
    for z in grid.points() {
        let fluid = crate::fields::fluid_of(&field.shape, z);
        let sample = if mb.distance(z) <= tube { None } else { field.sample(z).ok() };
        match sample {
            Some(s) => writeln!(
                out,
                "{},{},{},{},{},{}",
                cell(z.re),
                cell(z.im),
                fluid,
                cell(s.pressure),
                cell(s.velocity.0),
                cell(s.velocity.1)
            ),
            None => writeln!(out, "{},{},{},,,", cell(z.re), cell(z.im), fluid),
        }
        .expect("writing to a String");
    }
    Ok(out)
}

pub fn cmd_field(r: &Resolved) -> CliResult<String> {
    let text = field_csv(&r.field()?, &r.grid)?;
    emit(r.out.as_deref(), &text)?;
    Ok(text)
}

/// Runs the suite; returns the report and whether it passed.
pub fn cmd_verify(r: &Resolved) -> CliResult<verify::VerificationReport> {
    let field = r.field()?;
    let config = SuiteConfig {
        checks: r.checks.clone(),
        seed: r.seed,
        density_scale: r.density_scale,
    };
    let report = verify::run_suite(&field, &config)?;
    emit(r.out.as_deref(), &to_json(&report)?)?;
    Ok(report)
}

/// Shape and mother body drawn in a figure.
struct Scene {
    interfaces: Vec<Vec<C64>>,
    body: Option<MotherBody>,
}

fn mother_body_for_plot(shape: &Shape, rates: ShapeRates, mob: Mobility) -> CliResult<MotherBody> {
    // static shapes still have a mother body up to the sign of the flux
    let rates = if rates.is_zero() { shape.admissible_rates(1.0) } else { rates };
    Ok(motherbody::build_mother_body(shape, rates, mob)?)
}

fn trajectory_scene(traj: &Trajectory) -> CliResult<Scene> {
    if traj.samples.is_empty() {
        return Err(CliError::Config("input: trajectory has no samples".into()));
    }
    let n = traj.samples.len();
    let mut picks: Vec<usize> = (0..5).map(|i| i * (n - 1) / 4).collect();
    picks.dedup();
    let mut interfaces = vec![];
    for &i in &picks {
        let shape = traj.shape_at(i).map_err(|e| CliError::Config(format!("input: sample {i}: {e}")))?;
        interfaces.push(shape.boundary_points(720)?);
    }
    let last = traj.shape_at(n - 1).map_err(|e| CliError::Config(format!("input: {e}")))?;
    let body = mother_body_for_plot(&last, traj.last().rates, traj.meta.mobility).ok();
    Ok(Scene { interfaces, body })
}

const SIZE: f64 = 480.0;

fn view_half_width(scene: &Scene) -> f64 {
    let mut m = 0.0_f64;
    for z in scene.interfaces.iter().flatten() {
        m = m.max(z.re.abs()).max(z.im.abs());
    }
    if let Some(body) = &scene.body {
        for part in &body.parts {
            match part.support {
                CutSupport::PointSink { z } => m = m.max(z.norm()),
                CutSupport::Ray { origin, .. } => m = m.max(origin.norm()),
                CutSupport::Segment { z1, z2 } => m = m.max(z1.norm()).max(z2.norm()),
                CutSupport::PointAtInfinity => {}
            }
        }
    }
    1.25 * m.max(1e-12)
}

/// Clips the ray `origin + s·dir`, `s >= 0`, to the square `[-w, w]^2`.
fn clip_ray(origin: C64, dir: C64, w: f64) -> Option<(C64, C64)> {
    let (mut lo, mut hi) = (0.0_f64, f64::INFINITY);
    for (o, d) in [(origin.re, dir.re), (origin.im, dir.im)] {
        if d.abs() < 1e-15 {
            if o.abs() > w {
                return None;
            }
        } else {
            let (t1, t2) = ((-w - o) / d, (w - o) / d);
            lo = lo.max(t1.min(t2));
            hi = hi.min(t1.max(t2));
        }
    }
    (lo < hi).then(|| (origin + lo * dir, origin + hi * dir))
}

/// SVG rendering of interfaces, point supports and cuts.
fn render_svg(scene: &Scene, title: &str) -> String {
    let w = view_half_width(scene);
    let px = |z: C64| ((z.re + w) / (2.0 * w) * SIZE, (w - z.im) / (2.0 * w) * SIZE);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let (ox, oy) = px(C64::new(0.0, 0.0));
    let _ = writeln!(
        s,
        r##"<g stroke="#bbbbbb" stroke-width="0.5"><line x1="0" y1="{oy:.2}" x2="{SIZE}" y2="{oy:.2}"/><line x1="{ox:.2}" y1="0" x2="{ox:.2}" y2="{SIZE}"/></g>"##
    );
    let _ = writeln!(s, r#"<g class="interfaces" fill="none" stroke="black" stroke-width="1.5">"#);
    for curve in &scene.interfaces {
        let mut d = String::new();
        for (i, &z) in curve.iter().enumerate() {
            let (x, y) = px(z);
            let _ = write!(d, "{}{x:.2},{y:.2}", if i == 0 { "M" } else { " L" });
        }
        let _ = writeln!(s, r#"<path d="{d} Z"/>"#);
    }
    let _ = writeln!(s, "</g>");
    if let Some(body) = &scene.body {
        let _ = writeln!(s, r#"<g class="cuts" fill="none" stroke="black" stroke-width="1.2" stroke-dasharray="6,4">"#);
        for part in &body.parts {
            let ends = match part.support {
                CutSupport::Segment { z1, z2 } => Some((z1, z2)),
                CutSupport::Ray { origin, direction } => clip_ray(origin, C64::from_polar(1.0, direction), w),
                _ => None,
            };
            if let Some((z1, z2)) = ends {
                let ((x1, y1), (x2, y2)) = (px(z1), px(z2));
                let _ = writeln!(s, r#"<path d="M{x1:.2},{y1:.2} L{x2:.2},{y2:.2}"/>"#);
            }
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, r#"<g class="points" fill="black">"#);
        for part in &body.parts {
            if let CutSupport::PointSink { z } = part.support {
                let (x, y) = px(z);
                let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4"/>"#);
            }
        }
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(
        s,
        r##"<g class="legend" font-family="sans-serif" font-size="12"><rect x="8" y="8" width="132" height="66" fill="white" stroke="#888888"/><path d="M16,24 L44,24" stroke="black" stroke-width="1.5"/><text x="52" y="28">interface</text><path d="M16,44 L44,44" stroke="black" stroke-width="1.2" stroke-dasharray="6,4"/><text x="52" y="48">cut</text><circle cx="30" cy="62" r="4" fill="black"/><text x="52" y="66">point support</text></g>"##
    );
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Grey-scale pressure map of a field CSV (`fluid` 2 cells outlined).
fn render_field_svg(text: &str) -> CliResult<String> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("x,y,fluid,pressure,vx,vy") {
        return Err(CliError::Config("input: not a field CSV".into()));
    }
    let mut rows = vec![];
    for (no, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 6 {
            return Err(CliError::Config(format!("input: line {}: expected 6 columns", no + 2)));
        }
        let num = |c: &str| c.parse::<f64>().map_err(|_| CliError::Config(format!("input: line {}: bad number '{c}'", no + 2)));
        let (x, y) = (num(cols[0])?, num(cols[1])?);
        let fluid: u8 = cols[2].parse().map_err(|_| CliError::Config(format!("input: line {}: bad fluid", no + 2)))?;
        let p = if cols[3].is_empty() { None } else { Some(num(cols[3])?) };
        rows.push((x, y, fluid, p));
    }
    if rows.is_empty() {
        return Err(CliError::Config("input: field has no rows".into()));
    }
    let mut xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let mut ys: Vec<f64> = rows.iter().map(|r| r.1).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    let (nx, ny) = (xs.len().max(2), ys.len().max(2));
    let (x0, x1, y0, y1) = (xs[0], *xs.last().unwrap(), ys[0], *ys.last().unwrap());
    let (sx, sy) = ((x1 - x0).max(1e-300), (y1 - y0).max(1e-300));
    let (lo, hi) = rows
        .iter()
        .filter_map(|r| r.3)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p), hi.max(p)));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let (cw, ch) = (SIZE / nx as f64, SIZE / ny as f64);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<g class="pressure" stroke="none">"#);
    for (x, y, fluid, p) in rows {
        let cx = (x - x0) / sx * (SIZE - cw);
        let cy = (y1 - y) / sy * (SIZE - ch);
        let fill = match p {
            Some(p) => {
                let g = (40.0 + 200.0 * (p - lo) / span).round() as u8;
                format!("#{g:02x}{g:02x}{g:02x}")
            }
            None => "#ff0000".into(),
        };
        let outline = if fluid == 2 { r##" stroke="#3060c0" stroke-width="0.3""## } else { "" };
        let _ = writeln!(
            s,
            r#"<rect x="{cx:.2}" y="{cy:.2}" width="{cw:.2}" height="{ch:.2}" fill="{fill}"{outline}/>"#
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<g class="legend" font-family="sans-serif" font-size="12"><rect x="8" y="8" width="170" height="24" fill="white"/><text x="14" y="25">pressure {lo:.4e} .. {hi:.4e}</text></g>"#
    );
    s.push_str("</svg>\n");
    Ok(s)
}

/// SVG of the configured shape with the mother body of its `t = 0` flow.
pub fn shape_svg(r: &Resolved) -> CliResult<String> {
    let field = r.field()?;
    let shape = r.shape;
    let body = if r.variant == Variant::Standard {
        Some(mother_body_for_plot(&shape, field.rates, r.mobility)?)
    } else {
        Some(field.mother_body()?)
    };
    let scene = Scene { interfaces: vec![shape.boundary_points(720)?], body };
    Ok(render_svg(&scene, &format!("{} a={} b={}", shape.family().name(), shape.a(), shape.b())))
}

pub fn cmd_plot(input: Option<&Path>, r: &Resolved) -> CliResult<String> {
    let svg = match input {
        None => shape_svg(r)?,
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("input: {}: {e}", path.display())))?;
            if text.trim_start().starts_with('{') {
                let traj: Trajectory = serde_json::from_str(&text)
                    .map_err(|e| CliError::Config(format!("input: {}: {e}", path.display())))?;
                let scene = trajectory_scene(&traj)?;
                render_svg(&scene, &format!("{} trajectory", traj.meta.family.name()))
            } else {
                render_field_svg(&text)?
            }
        }
    };
    emit(r.out.as_deref(), &svg)?;
    Ok(svg)
}

fn dispatch(cli: &Cli) -> CliResult<i32> {
    match &cli.command {
        Command::Simulate(o) => cmd_simulate(&Resolved::from_options(o)?).map(|_| EXIT_OK),
        Command::Field(o) => cmd_field(&Resolved::from_options(o)?).map(|_| EXIT_OK),
        Command::Verify(o) => {
            let report = cmd_verify(&Resolved::from_options(o)?)?;
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("check {} failed: residual {:e} vs tolerance {:e}", c.name, c.residual, c.tolerance);
            }
            Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Plot(p) => cmd_plot(p.input.as_deref(), &Resolved::from_options(&p.options)?).map(|_| EXIT_OK),
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("muskat: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_parsing() {
        let g: Grid = "-1,1,-2,2,3,4".parse().unwrap();
        assert_eq!((g.nx, g.ny), (3, 4));
        assert_eq!(g.points().len(), 12);
        assert!("0,1,0,1,1,4".parse::<Grid>().is_err());
        assert!("1,0,0,1,2,2".parse::<Grid>().is_err());
    }

    #[test]
    fn flux_grammar() {
        assert_eq!(parse_flux("const:2.5").unwrap(), FluxSchedule::Constant { q: 2.5 });
        assert!(matches!(parse_flux("linear:1"), Err(CliError::Config(_))));
    }

    #[test]
    fn json_uses_17_digits() {
        assert_eq!(to_json(&0.1).unwrap(), "1.0000000000000001e-1\n");
        let back: f64 = serde_json::from_str(&to_json(&(PI / 3.0)).unwrap()).unwrap();
        assert_eq!(back, PI / 3.0);
    }

    #[test]
    fn unknown_family_names_the_field() {
        let c = RunConfig { family: Some("square".into()), ..RunConfig::default() };
        match Resolved::from_config(&c) {
            Err(CliError::Config(msg)) => assert!(msg.contains("family"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ray_clipping() {
        let (a, b) = clip_ray(C64::new(0.0, 1.0), C64::new(0.0, 1.0), 3.0).unwrap();
        assert_eq!((a, b), (C64::new(0.0, 1.0), C64::new(0.0, 3.0)));
        assert!(clip_ray(C64::new(0.0, 4.0), C64::new(0.0, 1.0), 3.0).is_none());
    }
}
