//! Explicit contact form on two glued solid tori, rebuilt from a potential.
//!
//! Each chart `T±` has coordinates `(r, s, t)` with `s, t ∈ ℝ/ℤ`, or the
//! Cartesian triple `(x, y, t)` with `x + iy = r·e^{2πis}`. The moment map is
//! `k = k_plus − r²` on `T₊` and `k = k_minus + r²` on `T₋`, so each core
//! circle is a critical level. On either chart the form is
//!
//! ```text
//! α = k dt + Q(k) ds
//! Q₊(k) = J(k) − e·min(k, 0)        Q₋(k) = −J(k) − e·max(k, 0)
//! ```
//!
//! and the charts are glued over `k ∈ (−δ, δ)` by
//! `(r₊, s, t) ↦ (√(k − k_minus), −s, t − e·s)`. Both `Q±` are `C¹` across
//! `k = 0` exactly because `J′` jumps by `−e` there.
//!
//! Writing `α = A·dX` in Cartesian coordinates, the Reeb field is
//! `curl A / (A·curl A)` and `α∧dα = (A·curl A) dx∧dy∧dt`. Solving
//! `ι_R α = 1, ι_R dα = 0` by hand gives radial rate `0`, section rate
//! `±1/τ(k)` and fiber rate `−J′(k)/τ(k)` in the chart that owns `k`; the
//! numerical routines below never use these closed forms and only compare
//! against them.

use std::f64::consts::PI;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::branch::Side;
use crate::error::{Error, Result};
use crate::ode::{Crossing, Dopri5};
use crate::profile::Profile;
use crate::quad::{gauss_kronrod, gauss_legendre};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chart {
    Plus,
    Minus,
}

impl Chart {
    /// `dk/d(r²)`.
    fn sigma(self) -> f64 {
        match self {
            Chart::Plus => -1.0,
            Chart::Minus => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReebRates {
    pub radial: f64,
    /// `ds/dλ` in the owning chart.
    pub section: f64,
    /// `dt/dλ` in the owning chart.
    pub fiber: f64,
}

#[derive(Clone, Debug)]
pub struct ChartContactForm {
    profile: Profile,
    delta: f64,
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Cartesian point from polar chart coordinates.
pub fn cartesian(r: f64, s: f64, t: f64) -> [f64; 3] {
    let (sin, cos) = (2.0 * PI * s).sin_cos();
    [r * cos, r * sin, t]
}

/// Cartesian images of `∂r, ∂s, ∂t` at `(r, s)`.
fn polar_frame(r: f64, s: f64) -> [[f64; 3]; 3] {
    let (sin, cos) = (2.0 * PI * s).sin_cos();
    [[cos, sin, 0.0], [-2.0 * PI * r * sin, 2.0 * PI * r * cos, 0.0], [0.0, 0.0, 1.0]]
}

/// Builds the two-chart form; `delta` is the half-width of the overlap in `k`.
pub fn build_chart_form(profile: &Profile, delta: f64) -> Result<ChartContactForm> {
    if !(delta > 0.0 && delta < 0.5 * profile.k_min()) {
        return Err(Error::Construction(format!(
            "overlap half-width {delta} must lie in (0, {})",
            0.5 * profile.k_min()
        )));
    }
    let form = ChartContactForm {
        profile: profile.clone(),
        delta,
    };
    for chart in [Chart::Plus, Chart::Minus] {
        let (lo, hi) = form.k_range(chart);
        for k in profile.grid(512).into_iter().filter(|&k| k > lo && k < hi) {
            let u = form.u_of(chart, k);
            if u <= 0.0 {
                continue;
            }
            let density = form.contact_density(chart, cartesian(u.sqrt(), 0.0, 0.0))?;
            if !(density > 0.0) {
                return Err(Error::Construction(format!(
                    "contact condition fails on chart {chart:?} at k = {k} (α∧dα = {density})"
                )));
            }
        }
    }
    profile.ensure_valid(512)?;
    Ok(form)
}

impl ChartContactForm {
    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Range of moment-map levels covered by a chart, core included.
    pub fn k_range(&self, chart: Chart) -> (f64, f64) {
        match chart {
            Chart::Plus => (-self.delta, self.profile.k_plus()),
            Chart::Minus => (self.profile.k_minus(), self.delta),
        }
    }

    /// Chart used to integrate from level `k`.
    pub fn owner(&self, k: f64) -> Chart {
        if k >= 0.0 {
            Chart::Plus
        } else {
            Chart::Minus
        }
    }

    pub fn k_of(&self, chart: Chart, u: f64) -> f64 {
        match chart {
            Chart::Plus => self.profile.k_plus() - u,
            Chart::Minus => self.profile.k_minus() + u,
        }
    }

    /// `r²` of level `k` in `chart`.
    pub fn u_of(&self, chart: Chart, k: f64) -> f64 {
        match chart {
            Chart::Plus => self.profile.k_plus() - k,
            Chart::Minus => k - self.profile.k_minus(),
        }
    }

    fn slope(&self, chart: Chart, k: f64) -> Result<f64> {
        let side = if k == 0.0 {
            match chart {
                Chart::Plus => Side::Right,
                Chart::Minus => Side::Left,
            }
        } else if k >= self.profile.k_plus() {
            Side::Left
        } else {
            Side::Right
        };
        self.profile.derivative(k, side)
    }

    /// Coefficient of `ds`.
    pub fn q(&self, chart: Chart, k: f64) -> Result<f64> {
        let j = self.profile.evaluate(k)?;
        let e = self.profile.e() as f64;
        Ok(match chart {
            Chart::Plus => j - e * k.min(0.0),
            Chart::Minus => -j - e * k.max(0.0),
        })
    }

    /// `dQ/dk`.
    pub fn q_slope(&self, chart: Chart, k: f64) -> Result<f64> {
        let dj = self.slope(chart, k)?;
        let e = self.profile.e() as f64;
        Ok(match chart {
            Chart::Plus => dj - if k < 0.0 { e } else { 0.0 },
            Chart::Minus => -dj - if k > 0.0 { e } else { 0.0 },
        })
    }

    /// Vector potential `A` with `α = A·(dx, dy, dt)`.
    pub fn potential(&self, chart: Chart, p: [f64; 3]) -> Result<[f64; 3]> {
        let u = p[0] * p[0] + p[1] * p[1];
        let k = self.k_of(chart, u);
        let q = self.q(chart, k)? / (2.0 * PI * u);
        Ok([-p[1] * q, p[0] * q, k])
    }

    pub fn curl(&self, chart: Chart, p: [f64; 3]) -> Result<[f64; 3]> {
        let u = p[0] * p[0] + p[1] * p[1];
        let k = self.k_of(chart, u);
        let sigma = chart.sigma();
        Ok([2.0 * p[1] * sigma, -2.0 * p[0] * sigma, sigma * self.q_slope(chart, k)? / PI])
    }

    /// `A·curl A`, the coefficient of `dx∧dy∧dt` in `α∧dα`.
    pub fn contact_density(&self, chart: Chart, p: [f64; 3]) -> Result<f64> {
        Ok(dot(self.potential(chart, p)?, self.curl(chart, p)?))
    }

    pub fn reeb(&self, chart: Chart, p: [f64; 3]) -> Result<[f64; 3]> {
        let a = self.potential(chart, p)?;
        let c = self.curl(chart, p)?;
        let d = dot(a, c);
        Ok([c[0] / d, c[1] / d, c[2] / d])
    }

    /// Reeb components from the hand-solved chart equations.
    pub fn analytic_reeb_rates(&self, k: f64) -> Result<ReebRates> {
        let tau = self.profile.return_time(k, if k == 0.0 { Side::Right } else { Side::TwoSided })?;
        let chart = self.owner(k);
        let dj = self.slope(chart, k)?;
        Ok(ReebRates {
            radial: 0.0,
            section: -chart.sigma() / tau,
            fiber: -dj / tau,
        })
    }

    /// Periods of the two core circles: `α(∂t) = k` at the critical levels.
    pub fn core_periods(&self) -> (f64, f64) {
        (self.k_of(Chart::Minus, 0.0).abs(), self.k_of(Chart::Plus, 0.0).abs())
    }

    /// Largest deviation between `α₊` and the pullback of `α₋` under the
    /// gluing map, over `n` random overlap points evaluated on `∂r, ∂s, ∂t`.
    pub fn overlap_agreement(&self, n: usize, seed: u64) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = self.profile.e() as f64;
        let mut worst: f64 = 0.0;
        for _ in 0..n {
            let k = rng.gen_range(-self.delta..self.delta);
            let s = rng.gen_range(0.0..1.0);
            let t = rng.gen_range(0.0..1.0);
            let r_plus = self.u_of(Chart::Plus, k).sqrt();
            let r_minus = self.u_of(Chart::Minus, k).sqrt();
            let (s_minus, t_minus) = (-s, t - e * s);
            if (self.k_of(Chart::Minus, r_minus * r_minus) - self.k_of(Chart::Plus, r_plus * r_plus)).abs() > 1e-12 {
                return Err(Error::Construction(format!("gluing does not preserve the level k = {k}")));
            }

            let a_plus = self.potential(Chart::Plus, cartesian(r_plus, s, t))?;
            let a_minus = self.potential(Chart::Minus, cartesian(r_minus, s_minus, t_minus))?;
            let fp = polar_frame(r_plus, s);
            let fm = polar_frame(r_minus, s_minus);
            // Push-forward of ∂r₊, ∂s₊, ∂t₊ in T₋ polar components.
            let dr = -r_plus / r_minus;
            let pushed = [[dr, 0.0, 0.0], [0.0, -1.0, -e], [0.0, 0.0, 1.0]];
            for (i, v) in pushed.iter().enumerate() {
                let lhs = dot(a_plus, fp[i]);
                let image = [0, 1, 2].map(|c| v[0] * fm[0][c] + v[1] * fm[1][c] + v[2] * fm[2][c]);
                let rhs = dot(a_minus, image);
                worst = worst.max((lhs - rhs).abs());
            }
        }
        Ok(worst)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ReturnControls {
    pub rtol: f64,
    pub atol: f64,
    pub event_tol: f64,
    /// Minimal distance in `k` from a chart core.
    pub core_margin: f64,
    pub max_time: f64,
}

impl Default for ReturnControls {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            event_tol: 1e-12,
            core_margin: 1e-6,
            max_time: 1e6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReebSample {
    pub chart: Chart,
    pub k: f64,
    pub r: f64,
    pub s0: f64,
    pub t0: f64,
    pub return_time: f64,
    /// Fiber advance `Δt` per return.
    pub rotation: f64,
    pub steps: usize,
}

fn solver(controls: &ReturnControls) -> Dopri5 {
    Dopri5 {
        event_tol: controls.event_tol,
        ..Dopri5::with_tolerances(controls.rtol, controls.atol)
    }
}

fn checked_start(form: &ChartContactForm, k: f64, controls: &ReturnControls) -> Result<(Chart, f64)> {
    let p = &form.profile;
    if !(k > p.k_minus() && k < p.k_plus()) || k == 0.0 {
        return Err(Error::Domain {
            x: k,
            lo: p.k_minus(),
            hi: p.k_plus(),
        });
    }
    let chart = form.owner(k);
    let u = form.u_of(chart, k);
    if u < controls.core_margin {
        return Err(Error::Unsupported(format!("level {k} is within {} of a core circle", controls.core_margin)));
    }
    Ok((chart, u.sqrt()))
}

/// Integrates the Reeb flow from `(r(k), 0, 0)` until the first return to
/// the half-plane `{s = 0}`.
pub fn integrate_return(form: &ChartContactForm, k: f64, controls: &ReturnControls) -> Result<ReebSample> {
    let (chart, r) = checked_start(form, k, controls)?;
    let field = |_: f64, p: &[f64; 3]| form.reeb(chart, *p).unwrap_or([f64::NAN; 3]);
    let crossing = match chart {
        Chart::Plus => Crossing::Rising,
        Chart::Minus => Crossing::Falling,
    };
    let event = |_: f64, p: &[f64; 3]| if p[0] > 0.0 { p[1] } else { f64::NAN };
    let hit = solver(controls).integrate_to_event(field, 0.0, [r, 0.0, 0.0], controls.max_time, event, crossing, 0.0)?;
    Ok(ReebSample {
        chart,
        k,
        r,
        s0: 0.0,
        t0: 0.0,
        return_time: hit.t,
        rotation: hit.y[2],
        steps: hit.steps,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub lambda: f64,
    pub r: f64,
    pub s: f64,
    pub t: f64,
}

/// Trajectory from `(r(k), 0, 0)` for Reeb time `duration`, one point per
/// accepted step.
pub fn trace_orbit(form: &ChartContactForm, k: f64, duration: f64, controls: &ReturnControls) -> Result<Vec<TracePoint>> {
    let (chart, r) = checked_start(form, k, controls)?;
    let field = |_: f64, p: &[f64; 3]| form.reeb(chart, *p).unwrap_or([f64::NAN; 3]);
    let point = |lambda: f64, p: &[f64; 3]| TracePoint {
        lambda,
        r: p[0].hypot(p[1]),
        s: p[1].atan2(p[0]).rem_euclid(2.0 * PI) / (2.0 * PI),
        t: p[2],
    };
    let start = [r, 0.0, 0.0];
    let mut out = vec![point(0.0, &start)];
    solver(controls).integrate(field, 0.0, start, duration, |lambda, p| out.push(point(lambda, p)))?;
    Ok(out)
}

pub fn write_trace_csv<W: Write>(trace: &[TracePoint], mut out: W) -> Result<()> {
    writeln!(out, "lambda,r,s,t")?;
    for p in trace {
        writeln!(out, "{},{},{},{}", p.lambda, p.r, p.s, p.t)?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundtripSample {
    pub k: f64,
    pub return_time: f64,
    pub expected_return_time: f64,
    pub rotation: f64,
    pub expected_rotation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundtripReport {
    pub samples: Vec<RoundtripSample>,
    /// Relative to `τ(k)`.
    pub max_return_time_error: f64,
    /// Relative to `max(|w(k)|, 1)`.
    pub max_rotation_error: f64,
    pub max_relative_error: f64,
    /// Sup-norm gap at breakpoints between `J` and `∫_k^{k_plus} w_measured`.
    pub reconstruction_error: f64,
    /// Measured `w(h) − w(−h)` at `h = 10⁻³` and `2h`, Richardson-extrapolated to `h → 0`.
    pub rotation_jump: f64,
    pub jump_error: f64,
}

impl RoundtripReport {
    pub fn passed(&self, rel_tol: f64, jump_tol: f64) -> bool {
        self.max_relative_error <= rel_tol && self.reconstruction_error <= rel_tol && self.jump_error <= jump_tol
    }
}

pub const JUMP_PROBE: f64 = 1e-3;

/// Compares measured return times and rotations with the potential
/// calculus at `sample_count` evenly spread levels, rebuilds `J` from
/// measured rotations by three-point Gauss–Legendre per piece, and measures
/// the rotation jump across `k = 0`.
pub fn roundtrip_audit(profile: &Profile, sample_count: usize) -> Result<RoundtripReport> {
    let form = build_chart_form(profile, 0.25 * profile.k_min())?;
    let controls = ReturnControls::default();
    let (km, kp) = (profile.k_minus(), profile.k_plus());

    let mut samples = Vec::with_capacity(sample_count);
    for i in 0..sample_count {
        let mut k = km + (kp - km) * (i as f64 + 0.5) / sample_count as f64;
        if k.abs() < 1e-9 * profile.scale() {
            k += 0.25 * (kp - km) / sample_count as f64;
        }
        let measured = integrate_return(&form, k, &controls)?;
        samples.push(RoundtripSample {
            k,
            return_time: measured.return_time,
            expected_return_time: profile.return_time(k, Side::Right)?,
            rotation: measured.rotation,
            expected_rotation: profile.rotation(k, Side::Right)?,
        });
    }
    let max_return_time_error = samples
        .iter()
        .map(|s| (s.return_time - s.expected_return_time).abs() / s.expected_return_time)
        .fold(0.0, f64::max);
    let max_rotation_error = samples
        .iter()
        .map(|s| (s.rotation - s.expected_rotation).abs() / s.expected_rotation.abs().max(1.0))
        .fold(0.0, f64::max);

    let (nodes, weights) = gauss_legendre(3);
    let mut reconstruction_error: f64 = 0.0;
    let mut j = 0.0;
    let mut cuts: Vec<f64> = profile.breakpoints();
    cuts.reverse();
    for pair in cuts.windows(2) {
        let (hi, lo) = (pair[0], pair[1]);
        let (mid, half) = (0.5 * (hi + lo), 0.5 * (hi - lo));
        for (x, w) in nodes.iter().zip(&weights) {
            j += w * half * integrate_return(&form, mid + half * x, &controls)?.rotation;
        }
        reconstruction_error = reconstruction_error.max((j - profile.evaluate(lo)?).abs());
    }

    let probe = |h: f64| -> Result<f64> {
        Ok(integrate_return(&form, h, &controls)?.rotation - integrate_return(&form, -h, &controls)?.rotation)
    };
    let jump = 2.0 * probe(JUMP_PROBE)? - probe(2.0 * JUMP_PROBE)?;

    Ok(RoundtripReport {
        samples,
        max_return_time_error,
        max_rotation_error,
        max_relative_error: max_return_time_error.max(max_rotation_error),
        reconstruction_error,
        rotation_jump: jump,
        jump_error: (jump - profile.e() as f64).abs(),
    })
}

/// Volume `∫ α∧dα` of the chart form: Gauss–Legendre in the two angles,
/// adaptive Gauss–Kronrod in the radius, with a `C¹` partition of unity
/// across the overlap.
pub fn chart_volume(form: &ChartContactForm, tol: f64) -> Result<f64> {
    let delta = form.delta;
    let weight_plus = |k: f64| {
        let x = ((k + delta) / (2.0 * delta)).clamp(0.0, 1.0);
        x * x * (3.0 - 2.0 * x)
    };
    let (angle_nodes, angle_weights) = gauss_legendre(6);
    let (fiber_nodes, fiber_weights) = gauss_legendre(2);

    let mut total = 0.0;
    for chart in [Chart::Plus, Chart::Minus] {
        let (lo, hi) = form.k_range(chart);
        let mut radii: Vec<f64> = form
            .profile
            .breakpoints()
            .into_iter()
            .chain([lo, hi, delta, -delta, 0.0])
            .filter(|&k| k >= lo && k <= hi)
            .map(|k| form.u_of(chart, k).max(0.0).sqrt())
            .collect();
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        let partition = |k: f64| match chart {
            Chart::Plus => weight_plus(k),
            Chart::Minus => 1.0 - weight_plus(k),
        };
        let shell = |rho: f64| -> f64 {
            let k = form.k_of(chart, rho * rho);
            let mut sum = 0.0;
            for (a, wa) in angle_nodes.iter().zip(&angle_weights) {
                let s = 0.5 * (a + 1.0);
                for (b, wb) in fiber_nodes.iter().zip(&fiber_weights) {
                    let t = 0.5 * (b + 1.0);
                    let density = form.contact_density(chart, cartesian(rho, s, t)).unwrap_or(f64::NAN);
                    // dθ = 2π ds; both angle rules live on [−1, 1].
                    sum += 0.25 * wa * wb * 2.0 * PI * density;
                }
            }
            sum * rho * partition(k)
        };
        for pair in radii.windows(2) {
            let (lo_r, hi_r) = (pair[0].max(1e-300), pair[1]);
            let (v, _) = gauss_kronrod(shell, lo_r, hi_r, tol, tol)?;
            total += v;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::*;
    use crate::measures::contact_volume;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn contact_condition_and_rates() {
        let z = zoll_profile(2, 1.0).unwrap();
        let form = build_chart_form(&z, 0.2).unwrap();
        let plus = form.analytic_reeb_rates(0.3).unwrap();
        let minus = form.analytic_reeb_rates(-0.3).unwrap();
        assert_eq!((plus.section, plus.fiber), (1.0, 1.0));
        assert_eq!((minus.section, minus.fiber), (-1.0, -1.0));
        // Numeric Reeb field agrees with the hand-solved rates.
        let k: f64 = 0.3;
        let p = cartesian((1.0 - k).sqrt(), 0.1, 0.4);
        let r = form.reeb(Chart::Plus, p).unwrap();
        assert!((r[2] - plus.fiber).abs() < 1e-14);
        assert!((r[0] * p[0] + r[1] * p[1]).abs() < 1e-14);
    }

    #[test]
    fn delta_is_bounded() {
        let z = zoll_profile(2, 1.0).unwrap();
        assert!(matches!(build_chart_form(&z, 0.6), Err(Error::Construction(_))));
        assert!(build_chart_form(&z, 0.0).is_err());
    }

    #[test]
    fn nonpositive_return_time_breaks_contact_condition() {
        let z = zoll_profile(2, 1.0).unwrap();
        let bad = Profile::new(
            z.euler(),
            z.k_minus(),
            z.k_plus(),
            z.negative().clone(),
            crate::BranchFunction::piecewise_polynomial(vec![0.0, 1.0], vec![vec![1.0, -3.0, 2.0]]).unwrap(),
        )
        .unwrap();
        assert!(matches!(build_chart_form(&bad, 0.1), Err(Error::Construction(_))));
    }

    #[test]
    fn core_periods_of_eta_family() {
        let p = eta_family_profile(&EtaFamilyParams::new(3, 0.05).unwrap()).unwrap();
        let (a, b) = build_chart_form(&p, 0.1).unwrap().core_periods();
        assert!((a - 0.425).abs() < 1e-12 && (b - 0.425).abs() < 1e-12);
    }

    #[test]
    fn overlap_forms_agree() {
        for p in [ellipsoid_profile(1.0, 2.0).unwrap(), besse_quotient_profile(5, 1.0).unwrap()] {
            let form = build_chart_form(&p, 0.25 * p.k_min()).unwrap();
            assert!(form.overlap_agreement(100, 7).unwrap() < 1e-12);
        }
    }

    #[test]
    fn return_map_examples() {
        let controls = ReturnControls::default();
        let el = ellipsoid_profile(1.0, 2.0).unwrap();
        let s = integrate_return(&build_chart_form(&el, 0.2).unwrap(), 0.5, &controls).unwrap();
        assert!((s.return_time - 2.0 / 3.0).abs() < 1e-6);
        assert!((s.rotation - 2.0 / 3.0).abs() < 1e-6);

        let z = zoll_profile(2, 1.0).unwrap();
        let s = integrate_return(&build_chart_form(&z, 0.2).unwrap(), -0.4, &controls).unwrap();
        assert!((s.return_time - 1.0).abs() < 1e-6);
        assert!((s.rotation + 1.0).abs() < 1e-6);

        let eta = eta_family_profile(&EtaFamilyParams::new(3, 0.05).unwrap()).unwrap();
        let s = integrate_return(&build_chart_form(&eta, 0.05).unwrap(), 0.02, &controls).unwrap();
        assert!((s.rotation - 1.5).abs() < 1e-6);
    }

    #[test]
    fn start_levels_are_checked() {
        let z = zoll_profile(2, 1.0).unwrap();
        let form = build_chart_form(&z, 0.2).unwrap();
        let c = ReturnControls::default();
        assert!(integrate_return(&form, 0.0, &c).is_err());
        assert!(integrate_return(&form, 1.0 - 1e-9, &c).is_err());
        assert!(integrate_return(&form, 1.5, &c).is_err());
    }

    #[test]
    fn roundtrip_on_zoll() {
        let report = roundtrip_audit(&zoll_profile(1, 1.0).unwrap(), 20).unwrap();
        assert!(report.passed(1e-6, 5e-3), "{report:?}");
        assert!(rel(report.rotation_jump, 1.0) < 1e-6);
    }

    #[test]
    fn volume_matches_potential() {
        let p = ellipsoid_profile(1.0, 2.0).unwrap();
        let form = build_chart_form(&p, 0.2).unwrap();
        let v = chart_volume(&form, 1e-11).unwrap();
        assert!(rel(v, contact_volume(&p, 1e-12).unwrap()) < 1e-8, "{v}");
    }

    #[test]
    fn trace_stays_on_level() {
        let p = ellipsoid_profile(1.0, 2.0).unwrap();
        let form = build_chart_form(&p, 0.2).unwrap();
        let trace = trace_orbit(&form, 0.5, 3.0, &ReturnControls::default()).unwrap();
        assert!(trace.len() > 3);
        for point in &trace {
            assert!((point.r - 0.5f64.sqrt()).abs() < 1e-9);
        }
        let mut buf = Vec::new();
        write_trace_csv(&trace, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("lambda,r,s,t\n"));
    }
}
