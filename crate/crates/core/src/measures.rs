//! Contact volume, systolic ratios and the sharp systolic inequality.
//!
//! The volume of the contact form is `2∫J dk` over `[k_minus, k_plus]`. For
//! positive Euler number the inequality reads `sys² ≤ Vol/|e|` when
//! `e ∈ {1, 2}` (equality exactly for Zoll forms) and `sys² < Vol/2` when
//! `e > 2`. The proof goes through the functions `g(k) = J(k) + c|k|` with
//! `c = 1` (or `c = ½` when `e = 1`), which are bounded below by
//! `c·max(|k|, sys)` on `[−K_min, K_min]`; [`certificate_check`] verifies that
//! bound pointwise and re-derives the volume estimate from it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbits::{classify, systole_with_grid, Classification};
use crate::profile::Profile;
use crate::quad::simpson_over;
use crate::DEFAULT_GRID;

/// Absolute quadrature tolerance used for volumes unless given.
pub const VOLUME_TOL: f64 = 1e-12;

/// Relative width of the equality band `|margin| ≤ EQUALITY_REL_TOL·bound`.
pub const EQUALITY_REL_TOL: f64 = 1e-8;

/// Margins below `−MARGIN_TOL` are reported as violations.
pub const MARGIN_TOL: f64 = 1e-9;

/// `2∫J dk`, split at zero and at every breakpoint.
pub fn contact_volume(profile: &Profile, tol: f64) -> Result<f64> {
    let cuts = profile.breakpoints();
    let integral = simpson_over(|k| profile.evaluate(k).unwrap_or(f64::NAN), &cuts, 0.5 * tol)?;
    if !integral.is_finite() {
        return Err(Error::Numeric("volume integral is not finite".into()));
    }
    Ok(2.0 * integral)
}

/// `sys² / Vol`.
pub fn systolic_ratio(profile: &Profile) -> Result<f64> {
    let sys = systole_with_grid(profile, DEFAULT_GRID)?.value;
    Ok(sys * sys / contact_volume(profile, VOLUME_TOL)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clause {
    /// `e = 1`: `sys² ≤ Vol`.
    EulerOne,
    /// `e = 2`: `sys² ≤ Vol/2`.
    EulerTwo,
    /// `e > 2`: `sys² < Vol/2`.
    EulerAboveTwo,
    /// `e < 0`: `sys² ≤ Vol/|e|`.
    NegativeEuler,
}

impl Clause {
    pub fn for_euler(e: i64) -> Self {
        match e {
            i64::MIN..=-1 => Clause::NegativeEuler,
            1 => Clause::EulerOne,
            2 => Clause::EulerTwo,
            _ => Clause::EulerAboveTwo,
        }
    }

    pub fn bound(self, e: i64) -> f64 {
        match self {
            Clause::EulerAboveTwo => 0.5,
            _ => 1.0 / e.unsigned_abs() as f64,
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::EulerOne => "e=1",
            Clause::EulerTwo => "e=2",
            Clause::EulerAboveTwo => "e>2",
            Clause::NegativeEuler => "e<0",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub e: i64,
    pub systole: f64,
    pub volume: f64,
    pub ratio: f64,
    pub bound: f64,
    pub margin: f64,
    pub equality_flag: bool,
    pub branch: Clause,
}

impl InequalityReport {
    pub fn new(e: i64, systole: f64, volume: f64, bound: f64, branch: Clause) -> Self {
        let ratio = systole * systole / volume;
        let margin = bound - ratio;
        Self {
            e,
            systole,
            volume,
            ratio,
            bound,
            margin,
            equality_flag: margin.abs() <= EQUALITY_REL_TOL * bound,
            branch,
        }
    }

    pub const CSV_HEADER: &'static str = "e,systole,volume,ratio,bound,margin,equality,branch";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.e, self.systole, self.volume, self.ratio, self.bound, self.margin, self.equality_flag, self.branch
        )
    }
}

/// Evaluates the inequality for a positive-Euler profile. Errors when the
/// margin is negative, when it is not strictly positive for `e > 2`, or when
/// equality is detected for a form that is not Zoll.
pub fn theorem_check(profile: &Profile) -> Result<InequalityReport> {
    theorem_check_with_grid(profile, DEFAULT_GRID)
}

pub fn theorem_check_with_grid(profile: &Profile, grid_density: usize) -> Result<InequalityReport> {
    let e = profile.e();
    if e < 1 {
        return Err(Error::Unsupported(format!("theorem check needs e > 0, got {e}")));
    }
    let sys = systole_with_grid(profile, grid_density)?.value;
    let volume = contact_volume(profile, VOLUME_TOL)?;
    let branch = Clause::for_euler(e);
    let report = InequalityReport::new(e, sys, volume, branch.bound(e), branch);
    let violation = Error::TheoremViolation {
        ratio: report.ratio,
        bound: report.bound,
        margin: report.margin,
    };
    if report.margin < -MARGIN_TOL || (branch == Clause::EulerAboveTwo && report.margin <= MARGIN_TOL) {
        return Err(violation);
    }
    if report.equality_flag && branch != Clause::EulerAboveTwo && classify(profile)? != Classification::Zoll {
        return Err(violation);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub e: i64,
    pub systole: f64,
    /// Weight `c` of `|k|` in `g(k) = J(k) + c|k|`.
    pub weight: f64,
    pub worst_margin: f64,
    pub worst_at: f64,
    pub points_checked: usize,
    /// `∫g − c·K_min²` over `[−K_min, K_min]`, i.e. `∫J` there.
    pub core_integral: f64,
    pub volume: f64,
    /// Volume lower bound `2·core_integral`.
    pub reconstructed_bound: f64,
    /// `2·sys²` for `e ≥ 2`, `sys²` for `e = 1`.
    pub inequality_bound: f64,
    pub chain_holds: bool,
}

/// Verifies `g(k) ≥ c·max(|k|, sys)` on the grid and breakpoints of
/// `[−K_min, K_min]`, then re-derives the volume bound by quadrature.
pub fn certificate_check(profile: &Profile, grid_density: usize) -> Result<CertificateReport> {
    let e = profile.e();
    if e < 1 {
        return Err(Error::Unsupported(format!("certificate needs e ≥ 1, got {e}")));
    }
    let sys = systole_with_grid(profile, grid_density)?.value;
    let weight = if e == 1 { 0.5 } else { 1.0 };
    let k_min = profile.k_min();
    let g = |k: f64| -> Result<f64> { Ok(profile.evaluate(k)? + weight * k.abs()) };

    let mut points: Vec<f64> = profile.grid(grid_density).into_iter().filter(|k| k.abs() <= k_min).collect();
    points.extend([-k_min, k_min]);
    points.sort_by(f64::total_cmp);
    points.dedup();

    let mut worst_margin = f64::INFINITY;
    let mut worst_at = 0.0;
    for &k in &points {
        let margin = g(k)? - weight * k.abs().max(sys);
        if margin < worst_margin {
            worst_margin = margin;
            worst_at = k;
        }
    }
    if worst_margin < -MARGIN_TOL {
        return Err(Error::Certificate { k: worst_at, margin: worst_margin });
    }

    let mut cuts: Vec<f64> = profile.breakpoints().into_iter().filter(|k| k.abs() < k_min).collect();
    cuts.extend([-k_min, k_min]);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let g_integral = simpson_over(|k| g(k).unwrap_or(f64::NAN), &cuts, VOLUME_TOL)?;
    let core_integral = g_integral - weight * k_min * k_min;
    let volume = contact_volume(profile, VOLUME_TOL)?;
    let reconstructed_bound = 2.0 * core_integral;
    let inequality_bound = if e == 1 { sys * sys } else { 2.0 * sys * sys };
    let slack = 1e-9 * volume.max(1.0);
    let chain_holds = volume >= reconstructed_bound - slack && reconstructed_bound >= inequality_bound - slack;

    Ok(CertificateReport {
        e,
        systole: sys,
        weight,
        worst_margin,
        worst_at,
        points_checked: points.len(),
        core_integral,
        volume,
        reconstructed_bound,
        inequality_bound,
        chain_holds,
    })
}

/// Inequality for negative Euler number from a sampled moment map: the
/// volume is `Σ wᵢ Kᵢ²` and every `|Kᵢ|` bounds the systole from above. The
/// weights are the volume of the background Zoll form and must sum to `|e|`.
pub fn negative_euler_check(e: i64, samples: &[f64], weights: &[f64]) -> Result<InequalityReport> {
    if e >= 0 {
        return Err(Error::Unsupported(format!("negative Euler check needs e < 0, got {e}")));
    }
    if samples.is_empty() || samples.len() != weights.len() {
        return Err(Error::Unsupported(format!(
            "{} samples with {} weights",
            samples.len(),
            weights.len()
        )));
    }
    if let Some(index) = samples.iter().position(|&k| k == 0.0 || !k.is_finite()) {
        return Err(Error::Transversality { index });
    }
    let expected = e.unsigned_abs() as f64;
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|&w| !(w >= 0.0)) || (sum - expected).abs() > 1e-9 * expected {
        return Err(Error::Normalization { sum, expected });
    }

    let volume: f64 = samples.iter().zip(weights).map(|(k, w)| w * k * k).sum();
    let abs_min = samples.iter().map(|k| k.abs()).fold(f64::INFINITY, f64::min);
    let abs_max = samples.iter().map(|k| k.abs()).fold(0.0, f64::max);
    let branch = Clause::NegativeEuler;
    let mut report = InequalityReport::new(e, abs_min, volume, branch.bound(e), branch);
    report.equality_flag = abs_max - abs_min <= 1e-9 * abs_max;
    Ok(report)
}
