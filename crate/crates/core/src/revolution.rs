//! Riemannian metrics of revolution on the 2-sphere.
//!
//! The metric is `dx² + ρ(x)² dθ²` for `x ∈ [0, L]`, `θ ∈ ℝ/2πℤ`. Along a unit
//! speed geodesic making angle `φ` with the meridian, Clairaut's constant
//! `c = ρ sin φ` is conserved; it is the moment map of the rotation action on
//! the unit tangent bundle. A geodesic at level `0 < c < max ρ` oscillates
//! between the turning latitudes `ρ(x±) = c`, advancing in longitude by
//!
//! ```text
//! Δθ(c) = 2 ∫ c / (ρ √(ρ² − c²)) dx      ℓ(c) = 2 ∫ ρ / √(ρ² − c²) dx
//! ```
//!
//! per oscillation, and it closes exactly when `Δθ/2π = p/q`, with length
//! `q·ℓ(c)`. The equator and the meridians are the remaining closed
//! geodesics. Only unimodal `ρ` are supported, so there is one equator.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::branch::{BranchFunction, Side};
use crate::error::{Error, Result};
use crate::measures::{Clause, InequalityReport, EQUALITY_REL_TOL};
use crate::ode::{Crossing, Dopri5};
use crate::orbits::rational_approx;
use crate::quad::{gauss_kronrod, gauss_kronrod_capped, gauss_legendre};
use crate::roots::bisect;

pub const REVMETRIC_FORMAT: &str = "systolica-revmetric/1";

const POLE_TOL: f64 = 1e-10;
const LEVEL_GRID: usize = 96;
const CLAIRAUT_TOL: f64 = 2.5e-10;

/// The warping function `ρ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Rho {
    /// `Σ a_j sin((2j+1)πx/L)`, symmetric about `L/2`.
    SineSeries { coefficients: Vec<f64> },
    /// Any piecewise polynomial or Hermite spline on `[0, L]`.
    Spline { function: BranchFunction },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RevolutionMetric {
    length: f64,
    rho: Rho,
}

#[derive(Serialize, Deserialize)]
struct MetricFile {
    format: String,
    length: f64,
    rho: Rho,
}

impl RevolutionMetric {
    /// Unvalidated metric; see [`RevolutionMetric::validate`].
    pub fn new(length: f64, rho: Rho) -> Self {
        Self { length, rho }
    }

    pub fn round_sphere() -> Self {
        Self::new(PI, Rho::SineSeries { coefficients: vec![1.0] })
    }

    /// `ρ(x) = sin x + ε sin³x` on `[0, π]`.
    pub fn perturbed_sphere(eps: f64) -> Self {
        Self::new(
            PI,
            Rho::SineSeries {
                coefficients: vec![1.0 + 0.75 * eps, -0.25 * eps],
            },
        )
    }

    /// Sine series rescaled so that `ρ′(0) = 1`.
    pub fn normalized_sine_series(length: f64, coefficients: &[f64]) -> Result<Self> {
        let slope: f64 = coefficients
            .iter()
            .enumerate()
            .map(|(j, a)| a * (2 * j + 1) as f64 * PI / length)
            .sum();
        if !(slope > 0.0) {
            return Err(Error::Construction(format!("sine series has pole slope {slope}")));
        }
        let metric = Self::new(
            length,
            Rho::SineSeries {
                coefficients: coefficients.iter().map(|a| a / slope).collect(),
            },
        );
        metric.validate()?;
        Ok(metric)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn rho_repr(&self) -> &Rho {
        &self.rho
    }

    pub fn rho(&self, x: f64) -> f64 {
        match &self.rho {
            Rho::SineSeries { coefficients } => coefficients
                .iter()
                .enumerate()
                .map(|(j, a)| a * ((2 * j + 1) as f64 * PI * x / self.length).sin())
                .sum(),
            Rho::Spline { function } => function.value(x).unwrap_or(f64::NAN),
        }
    }

    pub fn rho_prime(&self, x: f64) -> f64 {
        match &self.rho {
            Rho::SineSeries { coefficients } => coefficients
                .iter()
                .enumerate()
                .map(|(j, a)| {
                    let w = (2 * j + 1) as f64 * PI / self.length;
                    a * w * (w * x).cos()
                })
                .sum(),
            Rho::Spline { function } => function
                .derivative(x, Side::TwoSided)
                .or_else(|_| function.derivative(x, Side::Right))
                .unwrap_or(f64::NAN),
        }
    }

    /// `c·ρ(x/c)` on `[0, cL]`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let rho = match &self.rho {
            Rho::SineSeries { coefficients } => Rho::SineSeries {
                coefficients: coefficients.iter().map(|a| c * a).collect(),
            },
            Rho::Spline { function } => Rho::Spline {
                function: function.scaled(c)?,
            },
        };
        Ok(Self::new(c * self.length, rho))
    }

    /// Smooth closing at the poles, positivity and unimodality.
    pub fn validate(&self) -> Result<()> {
        let fail = |what: String| Err(Error::Validation(what));
        if !(self.length > 0.0 && self.length.is_finite()) {
            return fail(format!("meridian length {} is not positive", self.length));
        }
        if let Rho::Spline { function } = &self.rho {
            let (lo, hi) = function.domain();
            if lo != 0.0 || hi != self.length {
                return fail(format!("spline covers [{lo}, {hi}], expected [0, {}]", self.length));
            }
        }
        let l = self.length;
        for (name, value, expected) in [
            ("rho(0)", self.rho(0.0), 0.0),
            ("rho(L)", self.rho(l), 0.0),
            ("rho'(0)", self.rho_prime(0.0), 1.0),
            ("rho'(L)", self.rho_prime(l), -1.0),
        ] {
            if !((value - expected).abs() <= POLE_TOL * l.max(1.0)) {
                return fail(format!("pole condition {name} = {value}, expected {expected}"));
            }
        }
        let n = 2048;
        let mut sign_changes = 0;
        let mut last = 1.0;
        for i in 1..n {
            let x = l * i as f64 / n as f64;
            if !(self.rho(x) > 0.0) {
                return fail(format!("rho is not positive at x = {x}"));
            }
            let d = self.rho_prime(x);
            if d != 0.0 && (d > 0.0) != (last > 0.0) {
                sign_changes += 1;
                last = d;
            }
        }
        if sign_changes != 1 {
            return fail(format!("rho has {sign_changes} monotonicity changes, expected a single maximum"));
        }
        Ok(())
    }

    /// Location and value of the maximum of `ρ`.
    pub fn equator(&self) -> (f64, f64) {
        let x = bisect(|x| self.rho_prime(x), 0.0, self.length, self.rho_prime(0.0), 1e-15 * self.length);
        (x, self.rho(x))
    }

    /// Area `2π∫ρ dx`.
    pub fn area(&self) -> Result<f64> {
        let (v, _) = gauss_kronrod(|x| self.rho(x), 0.0, self.length, 1e-14, 1e-14)?;
        Ok(2.0 * PI * v)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&MetricFile {
            format: REVMETRIC_FORMAT.into(),
            length: self.length,
            rho: self.rho.clone(),
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MetricFile = serde_json::from_str(text)?;
        if file.format != REVMETRIC_FORMAT {
            return Err(Error::Parse(format!("unknown format tag {:?}", file.format)));
        }
        Ok(Self::new(file.length, file.rho))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClairautData {
    pub c: f64,
    pub x_minus: f64,
    pub x_plus: f64,
    pub delta_theta: f64,
    pub arc_length: f64,
}

/// Turning points and per-oscillation longitude advance and length at
/// Clairaut level `c`.
pub fn clairaut_data(metric: &RevolutionMetric, c: f64) -> Result<ClairautData> {
    let (xm, rho_max) = metric.equator();
    let a = c.abs();
    if !(a > 0.0 && a < rho_max) {
        return Err(Error::Domain { x: c, lo: 0.0, hi: rho_max });
    }
    let x_tol = 1e-15 * metric.length;
    let x_minus = bisect(|x| metric.rho(x) - a, 0.0, xm, -a, x_tol);
    let x_plus = bisect(|x| metric.rho(x) - a, xm, metric.length, rho_max - a, x_tol);
    for x in [x_minus, x_plus] {
        if metric.rho_prime(x).abs() < 1e-12 {
            return Err(Error::Numeric(format!("level {c} is singular: rho' vanishes at x = {x}")));
        }
    }

    let (gl_nodes, gl_weights) = gauss_legendre(8);
    let mut theta = 0.0;
    let mut arc = 0.0;
    for (anchor, dir) in [(x_minus, 1.0), (x_plus, -1.0)] {
        let span = (xm - anchor).abs().sqrt();
        // ρ − c measured from the computed turning point itself, as an
        // integral of ρ′ so it stays accurate where it is tiny.
        let level = metric.rho(anchor);
        let excess = |u: f64| -> (f64, f64) {
            let h = dir * u * u;
            let x = anchor + h;
            let d = if h.abs() < 0.05 * metric.length {
                0.5 * h * gl_nodes.iter().zip(&gl_weights).map(|(z, w)| w * metric.rho_prime(anchor + 0.5 * h * (1.0 + z))).sum::<f64>()
            } else {
                metric.rho(x) - level
            };
            (metric.rho(x), d)
        };
        let integrate = |f: &dyn Fn(f64) -> f64| -> Result<f64> {
            let (v, err) = gauss_kronrod_capped(f, 0.0, span, 1e-13, 1e-13, 400)?;
            if err > CLAIRAUT_TOL {
                return Err(Error::Integration(format!("Clairaut quadrature at c = {c} stalled at error {err:e}")));
            }
            Ok(v)
        };
        let t = integrate(&|u| {
            let (rho, d) = excess(u);
            2.0 * u * level / (rho * (d * (rho + level)).sqrt())
        })?;
        let s = integrate(&|u| {
            let (rho, d) = excess(u);
            2.0 * u * rho / (d * (rho + level)).sqrt()
        })?;
        theta += t;
        arc += s;
    }
    Ok(ClairautData {
        c,
        x_minus,
        x_plus,
        delta_theta: 2.0 * theta * c.signum(),
        arc_length: 2.0 * arc,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeodesicKind {
    Level,
    Equator,
    Meridian,
}

impl fmt::Display for GeodesicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeodesicKind::Level => "level",
            GeodesicKind::Equator => "equator",
            GeodesicKind::Meridian => "meridian",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedGeodesic {
    pub c: f64,
    pub p: i64,
    pub q: u64,
    pub length: f64,
    pub kind: GeodesicKind,
    /// Every level in a neighbourhood closes with the same `p/q`.
    pub plateau: bool,
}

/// Clairaut levels clustered toward both ends of `(0, max ρ)`.
fn level_grid(rho_max: f64) -> Vec<f64> {
    (1..LEVEL_GRID).map(|i| 0.5 * rho_max * (1.0 - (PI * i as f64 / LEVEL_GRID as f64).cos())).collect()
}

struct LevelScan {
    data: Vec<ClairautData>,
}

impl LevelScan {
    fn new(metric: &RevolutionMetric) -> Result<Self> {
        let (_, rho_max) = metric.equator();
        let data = level_grid(rho_max)
            .into_iter()
            .map(|c| clairaut_data(metric, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { data })
    }

    fn ratios(&self) -> Vec<f64> {
        self.data.iter().map(|d| d.delta_theta / (2.0 * PI)).collect()
    }

    fn min_arc(&self) -> f64 {
        self.data.iter().map(|d| d.arc_length).fold(f64::INFINITY, f64::min)
    }

    /// Constant rational `Δθ/2π` over the whole scan.
    fn plateau(&self) -> Option<(i64, u64)> {
        let r = self.ratios();
        let spread = r.iter().map(|x| (x - r[0]).abs()).fold(0.0, f64::max);
        (spread <= 1e-9).then(|| rational_approx(r[0], 1000, 1e-9)).flatten()
    }
}

/// Closed geodesics: level orbits with `q ≤ q_max`, the equator and the
/// meridian family. Sorted by length.
pub fn closed_geodesics(metric: &RevolutionMetric, q_max: u64) -> Result<Vec<ClosedGeodesic>> {
    metric.validate()?;
    closed_geodesics_with(metric, q_max, &LevelScan::new(metric)?)
}

fn closed_geodesics_with(metric: &RevolutionMetric, q_max: u64, scan: &LevelScan) -> Result<Vec<ClosedGeodesic>> {
    let (_, rho_max) = metric.equator();
    let mut out = vec![
        ClosedGeodesic {
            c: rho_max,
            p: 0,
            q: 1,
            length: 2.0 * PI * rho_max,
            kind: GeodesicKind::Equator,
            plateau: false,
        },
        ClosedGeodesic {
            c: 0.0,
            p: 0,
            q: 1,
            length: 2.0 * metric.length,
            kind: GeodesicKind::Meridian,
            plateau: false,
        },
    ];

    if let Some((p, q)) = scan.plateau() {
        if q <= q_max {
            let mid = &scan.data[scan.data.len() / 2];
            out.push(ClosedGeodesic {
                c: mid.c,
                p,
                q,
                length: q as f64 * mid.arc_length,
                kind: GeodesicKind::Level,
                plateau: true,
            });
        }
    } else {
        let ratios = scan.ratios();
        let cs: Vec<f64> = scan.data.iter().map(|d| d.c).collect();
        let ratio_at = |c: f64| clairaut_data(metric, c).map(|d| d.delta_theta / (2.0 * PI)).unwrap_or(f64::NAN);
        for i in 0..cs.len() - 1 {
            let (a, b) = (ratios[i], ratios[i + 1]);
            let (lo, hi) = (a.min(b), a.max(b));
            for q in 1..=q_max {
                let qf = q as f64;
                for m in (lo * qf).floor() as i64..=(hi * qf).ceil() as i64 {
                    let target = m as f64 / qf;
                    if !(target >= lo && target < hi) || gcd(m.unsigned_abs(), q) != 1 {
                        continue;
                    }
                    let c = if a == target {
                        cs[i]
                    } else {
                        bisect(|c| ratio_at(c) - target, cs[i], cs[i + 1], a - target, 1e-14 * rho_max)
                    };
                    let d = clairaut_data(metric, c)?;
                    out.push(ClosedGeodesic {
                        c,
                        p: m,
                        q,
                        length: q as f64 * d.arc_length,
                        kind: GeodesicKind::Level,
                        plateau: false,
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| a.length.total_cmp(&b.length));
    Ok(out)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicState {
    pub arclength: f64,
    pub x: f64,
    pub theta: f64,
    pub phi: f64,
}

fn geodesic_field(metric: &RevolutionMetric) -> impl Fn(f64, &[f64; 3]) -> [f64; 3] + '_ {
    move |_, y: &[f64; 3]| {
        let rho = metric.rho(y[0]);
        let (sin, cos) = y[2].sin_cos();
        [cos, sin / rho, -metric.rho_prime(y[0]) * sin / rho]
    }
}

/// Meridian through the poles, handled in closed form: at each pole the
/// geodesic reappears on the opposite meridian.
fn meridian(metric: &RevolutionMetric, start: GeodesicState, duration: f64, samples: usize) -> Vec<GeodesicState> {
    let l = metric.length;
    let dir = start.phi.cos().signum();
    (0..=samples)
        .map(|i| {
            let s = duration * i as f64 / samples.max(1) as f64;
            // Unfold onto a line; each multiple of L passed is a pole.
            let v = start.x + dir * s;
            let passes = (v / l).floor().abs();
            let w = v.rem_euclid(2.0 * l);
            let heading = if passes % 2.0 == 0.0 { dir } else { -dir };
            GeodesicState {
                arclength: s,
                x: if w <= l { w } else { 2.0 * l - w },
                theta: start.theta + PI * passes,
                phi: if heading > 0.0 { 0.0 } else { PI },
            }
        })
        .collect()
}

/// Unit-speed geodesic from `(x, θ, φ)` for arclength `duration`; one state
/// per accepted step.
pub fn integrate_geodesic(metric: &RevolutionMetric, start: GeodesicState, duration: f64, rtol: f64) -> Result<Vec<GeodesicState>> {
    if start.phi.sin() == 0.0 {
        return Ok(meridian(metric, start, duration, 256));
    }
    let c = metric.rho(start.x) * start.phi.sin();
    if c.abs() < 1e-6 * metric.equator().1 {
        return Err(Error::Integration(format!(
            "Clairaut level {c} is too close to the poles for direct integration"
        )));
    }
    let mut out = vec![start];
    Dopri5::with_tolerances(rtol, rtol * 1e-2).integrate(
        geodesic_field(metric),
        0.0,
        [start.x, start.theta, start.phi],
        duration,
        |s, y| {
            out.push(GeodesicState {
                arclength: s,
                x: y[0],
                theta: y[1],
                phi: y[2],
            })
        },
    )?;
    Ok(out)
}

/// `sup |ρ(x) sin φ − c|` along a trajectory, with `c` from the first state.
pub fn clairaut_drift(metric: &RevolutionMetric, trajectory: &[GeodesicState]) -> f64 {
    let c = |g: &GeodesicState| metric.rho(g.x) * g.phi.sin();
    let c0 = c(&trajectory[0]);
    trajectory.iter().map(|g| (c(g) - c0).abs()).fold(0.0, f64::max)
}

pub fn write_geodesic_csv<W: Write>(trajectory: &[GeodesicState], mut out: W) -> Result<()> {
    writeln!(out, "arclength,x,theta,phi")?;
    for g in trajectory {
        writeln!(out, "{},{},{},{}", g.arclength, g.x, g.theta, g.phi)?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotOscillations {
    pub c: f64,
    pub oscillations: u64,
    pub delta_theta: f64,
    pub arc_length: f64,
}

/// Shoots from the equator at Clairaut level `c` and integrates through
/// `oscillations` full latitude oscillations, returning the total longitude
/// advance and arclength.
pub fn shoot_oscillations(metric: &RevolutionMetric, c: f64, oscillations: u64, rtol: f64) -> Result<ShotOscillations> {
    let (xm, rho_max) = metric.equator();
    if !(c > 0.0 && c < rho_max) {
        return Err(Error::Domain { x: c, lo: 0.0, hi: rho_max });
    }
    let solver = Dopri5 {
        event_tol: 1e-13,
        ..Dopri5::with_tolerances(rtol, rtol * 1e-2)
    };
    let mut s = 0.0;
    let mut y = [xm, 0.0, (c / rho_max).asin()];
    for _ in 0..oscillations {
        let hit = solver.integrate_to_event(geodesic_field(metric), s, y, s + 1e3 * metric.length, |_, y| y[0] - xm, Crossing::Rising, 0.0)?;
        s = hit.t;
        y = hit.y;
    }
    Ok(ShotOscillations {
        c,
        oscillations,
        delta_theta: y[1],
        arc_length: s,
    })
}

/// Arclength of one turn along the equator by direct integration.
pub fn shoot_equator(metric: &RevolutionMetric, rtol: f64) -> Result<f64> {
    let (xm, rho_max) = metric.equator();
    let hit = Dopri5::with_tolerances(rtol, rtol * 1e-2).integrate_to_event(
        geodesic_field(metric),
        0.0,
        [xm, 0.0, 0.5 * PI],
        10.0 * PI * rho_max,
        |_, y| y[1] - 2.0 * PI,
        Crossing::Rising,
        0.0,
    )?;
    Ok(hit.t)
}

/// `max |Δθ/2π − 1|` over `n` Gauss–Legendre levels in `(0, max ρ)`.
pub fn zoll_defect(metric: &RevolutionMetric, n: usize) -> Result<f64> {
    let (_, rho_max) = metric.equator();
    let (nodes, _) = gauss_legendre(n);
    let mut worst: f64 = 0.0;
    for x in nodes {
        let d = clairaut_data(metric, 0.5 * rho_max * (1.0 + x))?;
        worst = worst.max((d.delta_theta / (2.0 * PI) - 1.0).abs());
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RevolutionReport {
    pub systole: f64,
    pub witness: ClosedGeodesic,
    pub q_max_used: u64,
    pub certification_bound: f64,
    pub area: f64,
    /// `sys² / (π·area)`.
    pub ratio: f64,
    pub bound: f64,
    pub margin: f64,
    pub equality_flag: bool,
    /// The same data read as a contact form on the unit tangent bundle:
    /// `Vol = 2π·area`, Euler number 2.
    pub contact: InequalityReport,
    pub geodesics: Vec<ClosedGeodesic>,
}

/// Certified systole of the metric checked against `sys² ≤ π·area`.
pub fn finsler_corollary_check(metric: &RevolutionMetric, q_max: u64) -> Result<RevolutionReport> {
    metric.validate()?;
    let scan = LevelScan::new(metric)?;
    let arc_min = 0.99 * scan.min_arc();
    let mut q = q_max.max(1);
    let (geodesics, bound) = loop {
        let geodesics = closed_geodesics_with(metric, q, &scan)?;
        let bound = q as f64 * arc_min;
        if geodesics[0].length <= bound {
            break (geodesics, bound);
        }
        if q >= 1 << 12 {
            return Err(Error::Search(format!("closed geodesic search not certified at q = {q}")));
        }
        q *= 2;
    };
    let witness = geodesics[0];
    let systole = witness.length;
    let area = metric.area()?;
    let ratio = systole * systole / (PI * area);
    let margin = 1.0 - ratio;
    Ok(RevolutionReport {
        systole,
        witness,
        q_max_used: q,
        certification_bound: bound,
        area,
        ratio,
        bound: 1.0,
        margin,
        equality_flag: margin.abs() <= EQUALITY_REL_TOL,
        contact: InequalityReport::new(2, systole, 2.0 * PI * area, Clause::EulerTwo.bound(2), Clause::EulerTwo),
        geodesics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pole_conditions() {
        assert!(RevolutionMetric::round_sphere().validate().is_ok());
        assert!(RevolutionMetric::perturbed_sphere(0.1).validate().is_ok());
        let bad = RevolutionMetric::new(PI, Rho::SineSeries { coefficients: vec![1.2] });
        assert!(matches!(bad.validate(), Err(Error::Validation(_))));
        let m = RevolutionMetric::normalized_sine_series(PI, &[0.9, 0.1]).unwrap();
        assert!((m.rho_prime(0.0) - 1.0).abs() < 1e-14);
        // Two bumps: not unimodal.
        let bumpy = RevolutionMetric::normalized_sine_series(PI, &[1.0, 0.0, 0.6]);
        assert!(bumpy.is_err());
    }

    #[test]
    fn round_sphere_levels() {
        let m = RevolutionMetric::round_sphere();
        let d = clairaut_data(&m, 0.7f64.sin()).unwrap();
        assert!((d.delta_theta - 2.0 * PI).abs() < 1e-8, "{}", d.delta_theta);
        assert!((d.arc_length - 2.0 * PI).abs() < 1e-8);
        assert!((d.x_minus - 0.7).abs() < 1e-12);
        let near_equator = clairaut_data(&m, 1.0 - 1e-9).unwrap();
        assert!((near_equator.arc_length - 2.0 * PI).abs() < 1e-6);
        assert!(clairaut_data(&m, 1.0).is_err());
        assert!((m.area().unwrap() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn round_sphere_is_zoll() {
        let m = RevolutionMetric::round_sphere();
        let geodesics = closed_geodesics(&m, 4).unwrap();
        assert!(geodesics.iter().all(|g| (g.length - 2.0 * PI).abs() < 1e-8));
        let level = geodesics.iter().find(|g| g.kind == GeodesicKind::Level).unwrap();
        assert!(level.plateau && (level.p, level.q) == (1, 1));
        let report = finsler_corollary_check(&m, 4).unwrap();
        assert!(report.equality_flag && report.contact.equality_flag);
        assert!(zoll_defect(&m, 16).unwrap() < 1e-8);
    }

    #[test]
    fn perturbed_sphere_is_strict() {
        let m = RevolutionMetric::perturbed_sphere(0.1);
        let r = finsler_corollary_check(&m, 4).unwrap();
        assert!(r.ratio < 1.0 - 1e-4, "{}", r.ratio);
        assert!(r.systole <= r.certification_bound);
        // Scaling leaves the ratio unchanged.
        let r2 = finsler_corollary_check(&m.scaled(2.5).unwrap(), 4).unwrap();
        assert!((r2.ratio - r.ratio).abs() < 1e-10);
    }

    #[test]
    fn quadrature_matches_shooting() {
        let m = RevolutionMetric::perturbed_sphere(0.1);
        let (_, rho_max) = m.equator();
        for frac in [0.2, 0.5, 0.9] {
            let d = clairaut_data(&m, frac * rho_max).unwrap();
            let shot = shoot_oscillations(&m, frac * rho_max, 1, 1e-11).unwrap();
            assert!((shot.delta_theta - d.delta_theta).abs() < 1e-7 * d.delta_theta, "{frac}");
            assert!((shot.arc_length - d.arc_length).abs() < 1e-7 * d.arc_length);
        }
        assert!((shoot_equator(&m, 1e-11).unwrap() - 2.0 * PI * rho_max).abs() < 1e-8);
    }

    #[test]
    fn clairaut_is_conserved() {
        let m = RevolutionMetric::round_sphere();
        let start = GeodesicState { arclength: 0.0, x: 0.5 * PI, theta: 0.0, phi: 0.3 };
        let traj = integrate_geodesic(&m, start, 20.0, 1e-10).unwrap();
        assert!(clairaut_drift(&m, &traj) < 1e-9);
    }

    #[test]
    fn meridians_flip_at_poles() {
        let m = RevolutionMetric::round_sphere();
        let start = GeodesicState { arclength: 0.0, x: 1.0, theta: 0.0, phi: 0.0 };
        let traj = integrate_geodesic(&m, start, 2.0 * PI, 1e-10).unwrap();
        let end = traj.last().unwrap();
        assert!((end.x - 1.0).abs() < 1e-12);
        assert!((end.theta - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn json_roundtrip() {
        let m = RevolutionMetric::perturbed_sphere(0.2);
        let back = RevolutionMetric::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(m, back);
        let bad = m.to_json().unwrap().replace(REVMETRIC_FORMAT, "other");
        assert!(matches!(RevolutionMetric::from_json(&bad), Err(Error::Parse(_))));
    }
}
