//! The potential function `J` of a circle-invariant contact form.
//!
//! On the single invariant cylinder of a moment map with two critical values
//! `k_minus < 0 < k_plus`, the potential determines the whole Reeb dynamics:
//! the first-return time at level `k` is `τ(k) = J(k) − k·J′(k)`, the fiber
//! rotation per return is `w(k) = −J′(k)`, and the contact volume is
//! `2∫J dk`. `J` is smooth on each side of `0` and its slope jumps by `−e`
//! there, so it is stored as two [`BranchFunction`]s meeting at `k = 0`.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use crate::branch::{BranchFunction, BranchKind, Side};
use crate::error::{Error, Result};

pub const PROFILE_FORMAT: &str = "systolica-profile/1";

/// Tolerance for equality-style invariants (continuity, closure, jump).
pub const EQUALITY_TOL: f64 = 1e-12;

/// Euler number of the circle bundle; never zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct EulerNumber(i64);

impl EulerNumber {
    pub fn new(value: i64) -> Result<Self> {
        if value == 0 {
            return Err(Error::Unsupported("the Euler number must be nonzero".into()));
        }
        Ok(Self(value))
    }

    pub fn get(self) -> i64 {
        self.0
    }

    pub fn abs(self) -> u64 {
        self.0.unsigned_abs()
    }
}

impl TryFrom<i64> for EulerNumber {
    type Error = Error;
    fn try_from(v: i64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<EulerNumber> for i64 {
    fn from(e: EulerNumber) -> i64 {
        e.0
    }
}

impl fmt::Display for EulerNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The potential `J` on `[k_minus, k_plus]` together with the Euler number.
///
/// Construction only checks the representation (domains line up at `0`);
/// the dynamical admissibility conditions are checked by
/// [`Profile::validate`], so broken inputs can still be loaded and reported.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileFile", into = "ProfileFile")]
pub struct Profile {
    euler: EulerNumber,
    k_minus: f64,
    k_plus: f64,
    negative: BranchFunction,
    positive: BranchFunction,
}

#[derive(Serialize, Deserialize)]
struct ProfileFile {
    format: String,
    euler: i64,
    k_minus: f64,
    k_plus: f64,
    negative: BranchFunction,
    positive: BranchFunction,
}

impl TryFrom<ProfileFile> for Profile {
    type Error = Error;
    fn try_from(f: ProfileFile) -> Result<Self> {
        if f.format != PROFILE_FORMAT {
            return Err(Error::Parse(format!(
                "expected format tag {PROFILE_FORMAT:?}, found {:?}",
                f.format
            )));
        }
        let e = EulerNumber::new(f.euler).map_err(|_| Error::Parse("euler must be nonzero".into()))?;
        Profile::new(e, f.k_minus, f.k_plus, f.negative, f.positive)
    }
}

impl From<Profile> for ProfileFile {
    fn from(p: Profile) -> Self {
        ProfileFile {
            format: PROFILE_FORMAT.to_string(),
            euler: p.euler.get(),
            k_minus: p.k_minus,
            k_plus: p.k_plus,
            negative: p.negative,
            positive: p.positive,
        }
    }
}

impl Profile {
    pub fn new(
        euler: EulerNumber,
        k_minus: f64,
        k_plus: f64,
        negative: BranchFunction,
        positive: BranchFunction,
    ) -> Result<Self> {
        if !(k_minus < 0.0 && k_plus > 0.0 && k_minus.is_finite() && k_plus.is_finite()) {
            return Err(Error::Representation(format!(
                "need k_minus < 0 < k_plus, got [{k_minus}, {k_plus}]"
            )));
        }
        if negative.domain() != (k_minus, 0.0) {
            return Err(Error::Representation(format!(
                "negative branch must cover [{k_minus}, 0], covers {:?}",
                negative.domain()
            )));
        }
        if positive.domain() != (0.0, k_plus) {
            return Err(Error::Representation(format!(
                "positive branch must cover [0, {k_plus}], covers {:?}",
                positive.domain()
            )));
        }
        Ok(Self {
            euler,
            k_minus,
            k_plus,
            negative,
            positive,
        })
    }

    pub fn euler(&self) -> EulerNumber {
        self.euler
    }

    pub fn e(&self) -> i64 {
        self.euler.get()
    }

    pub fn k_minus(&self) -> f64 {
        self.k_minus
    }

    pub fn k_plus(&self) -> f64 {
        self.k_plus
    }

    /// `min(|k_minus|, k_plus)`: the smaller endpoint-fiber period.
    pub fn k_min(&self) -> f64 {
        self.k_plus.min(-self.k_minus)
    }

    pub fn negative(&self) -> &BranchFunction {
        &self.negative
    }

    pub fn positive(&self) -> &BranchFunction {
        &self.positive
    }

    /// Characteristic size of the profile, used to make tolerances relative.
    pub fn scale(&self) -> f64 {
        self.k_plus.max(-self.k_minus)
    }

    fn check_domain(&self, k: f64) -> Result<()> {
        if k.is_nan() || k < self.k_minus || k > self.k_plus {
            return Err(Error::Domain {
                x: k,
                lo: self.k_minus,
                hi: self.k_plus,
            });
        }
        Ok(())
    }

    /// The branch that owns `k` for the given side; `0` belongs to the
    /// negative branch from the left and the positive branch otherwise.
    fn branch_for(&self, k: f64, side: Side) -> &BranchFunction {
        if k < 0.0 || (k == 0.0 && side == Side::Left) {
            &self.negative
        } else {
            &self.positive
        }
    }

    /// `J(k)`.
    pub fn evaluate(&self, k: f64) -> Result<f64> {
        self.check_domain(k)?;
        self.branch_for(k, Side::Right).value(k)
    }

    /// `J′(k)`, one-sided or two-sided. Two-sided requests at `0` (or at a
    /// breakpoint where the slope jumps) fail with [`Error::Kink`].
    pub fn derivative(&self, k: f64, side: Side) -> Result<f64> {
        self.check_domain(k)?;
        if k == 0.0 && side == Side::TwoSided {
            return Err(Error::Kink(0.0));
        }
        if (k == self.k_minus && side == Side::Left) || (k == self.k_plus && side == Side::Right) {
            return Err(Error::Domain {
                x: k,
                lo: self.k_minus,
                hi: self.k_plus,
            });
        }
        self.branch_for(k, side).derivative(k, side)
    }

    pub fn second_derivative(&self, k: f64, side: Side) -> Result<f64> {
        self.check_domain(k)?;
        self.branch_for(k, side).second_derivative(k, side)
    }

    /// Return time `τ(k) = J(k) − k·J′(k)` of the first-return map at level `k`.
    pub fn return_time(&self, k: f64, side: Side) -> Result<f64> {
        let tau = self.return_time_unchecked(k, side)?;
        if !(tau > 0.0) {
            return Err(Error::Admissibility(format!(
                "return time {tau} at k = {k} is not positive"
            )));
        }
        Ok(tau)
    }

    pub(crate) fn return_time_unchecked(&self, k: f64, side: Side) -> Result<f64> {
        let side = resolve_side(k, side);
        let j = self.branch_for(k, side).value_from(k, side)?;
        let dj = self.derivative(k, side)?;
        Ok(j - k * dj)
    }

    /// Fiber rotation per return `w(k) = −J′(k)`.
    pub fn rotation(&self, k: f64, side: Side) -> Result<f64> {
        Ok(-self.derivative(k, side)?)
    }

    /// Profile of the contact form `c·α`: `J_c(k) = c·J(k/c)` on
    /// `[c·k_minus, c·k_plus]`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Unsupported(format!("scale factor must be positive, got {c}")));
        }
        Profile::new(
            self.euler,
            c * self.k_minus,
            c * self.k_plus,
            self.negative.scaled(c)?,
            self.positive.scaled(c)?,
        )
    }

    /// All representation breakpoints of both branches, sorted, including
    /// `k_minus`, `0` and `k_plus`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .negative
            .breakpoints()
            .iter()
            .chain(self.positive.breakpoints())
            .copied()
            .collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Uniform grid of `density` points per branch merged with every
    /// breakpoint. Endpoints included.
    pub fn grid(&self, density: usize) -> Vec<f64> {
        let density = density.max(2);
        let mut v = self.breakpoints();
        for (lo, hi) in [(self.k_minus, 0.0), (0.0, self.k_plus)] {
            for i in 0..density {
                v.push(lo + (hi - lo) * i as f64 / (density - 1) as f64);
            }
        }
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    pub fn validate(&self, grid_density: usize) -> ValidationReport {
        validate(self, grid_density)
    }

    /// Validate and turn failures into an error.
    pub fn ensure_valid(&self, grid_density: usize) -> Result<()> {
        let report = self.validate(grid_density);
        if report.all_passed() {
            Ok(())
        } else {
            let names: Vec<_> = report.failures().map(|c| c.name.as_str()).collect();
            Err(Error::Validation(format!("failed invariants: {}", names.join(", "))))
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

/// At `0` and at the domain ends a bare value makes sense but a slope needs
/// a side; pick the inward one when the caller asked for two-sided.
fn resolve_side(k: f64, side: Side) -> Side {
    if side == Side::TwoSided && k == 0.0 {
        Side::Right
    } else {
        side
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// `worst_margin` is the largest deviation; passes when within tolerance.
    Equality,
    /// `worst_margin` is the smallest value; passes when strictly positive.
    Positivity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantCheck {
    pub name: String,
    pub kind: CheckKind,
    pub passed: bool,
    pub worst_margin: f64,
    /// Level at which the worst margin occurred, when meaningful.
    pub at: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<InvariantCheck>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InvariantCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&InvariantCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let at = c.at.map(|k| format!(" at k = {k:.6e}")).unwrap_or_default();
            writeln!(
                f,
                "{:<28} {}  worst {:.6e}{}",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                c.worst_margin,
                at
            )?;
        }
        Ok(())
    }
}

fn equality(name: &str, deviation: f64, tol: f64, at: Option<f64>) -> InvariantCheck {
    InvariantCheck {
        name: name.to_string(),
        kind: CheckKind::Equality,
        passed: deviation.is_finite() && deviation <= tol,
        worst_margin: deviation,
        at,
    }
}

fn positivity(name: &str, worst: f64, at: Option<f64>) -> InvariantCheck {
    InvariantCheck {
        name: name.to_string(),
        kind: CheckKind::Positivity,
        passed: worst.is_finite() && worst > 0.0,
        worst_margin: worst,
        at,
    }
}

fn validate(p: &Profile, grid_density: usize) -> ValidationReport {
    let scale = p.scale();
    let tol = EQUALITY_TOL * scale.max(1.0);
    let mut checks = Vec::new();

    let jn0 = p.negative.value(0.0).unwrap_or(f64::NAN);
    let jp0 = p.positive.value(0.0).unwrap_or(f64::NAN);
    checks.push(equality("continuity-at-zero", (jn0 - jp0).abs(), tol, Some(0.0)));

    let jm = p.negative.value(p.k_minus).unwrap_or(f64::NAN).abs();
    let jp = p.positive.value(p.k_plus).unwrap_or(f64::NAN).abs();
    let (closure, closure_at) = if jm >= jp { (jm, p.k_minus) } else { (jp, p.k_plus) };
    checks.push(equality("closure", closure, tol, Some(closure_at)));

    let (vn, dn) = p.negative.continuity_defects();
    let (vp, dp) = p.positive.continuity_defects();
    checks.push(equality("c1-continuity", vn.max(vp).max(dn).max(dp), tol, None));

    let right0 = p.positive.derivative(0.0, Side::Right).unwrap_or(f64::NAN);
    let left0 = p.negative.derivative(0.0, Side::Left).unwrap_or(f64::NAN);
    let jump_dev = (right0 - left0 + p.e() as f64).abs();
    checks.push(equality(
        "derivative-jump",
        jump_dev,
        EQUALITY_TOL * (p.e().abs() as f64).max(1.0),
        Some(0.0),
    ));

    let ends = [
        p.negative.derivative(p.k_minus, Side::Right),
        p.negative.derivative(0.0, Side::Left),
        p.positive.derivative(0.0, Side::Right),
        p.positive.derivative(p.k_plus, Side::Left),
    ];
    let worst_end = ends
        .iter()
        .map(|d| d.as_ref().map(|v| v.abs()).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    checks.push(InvariantCheck {
        name: "finite-endpoint-derivatives".into(),
        kind: CheckKind::Equality,
        passed: worst_end.is_finite(),
        worst_margin: worst_end,
        at: None,
    });

    let grid = p.grid(grid_density);
    let mut min_j = (f64::INFINITY, None);
    let mut min_tau = (f64::INFINITY, None);
    for &k in &grid {
        let interior = k > p.k_minus && k < p.k_plus;
        let sides: &[Side] = if k == 0.0 || p.breakpoints().binary_search_by(|b| b.total_cmp(&k)).is_ok() {
            &[Side::Left, Side::Right]
        } else {
            &[Side::Right]
        };
        if interior {
            let j = p.evaluate(k).unwrap_or(f64::NAN);
            if !(j >= min_j.0) {
                min_j = (j, Some(k));
            }
        }
        for &side in sides {
            if (k == p.k_minus && side == Side::Left) || (k == p.k_plus && side == Side::Right) {
                continue;
            }
            let side = if k == p.k_plus { Side::Left } else { side };
            let tau = p.return_time_unchecked(k, side).unwrap_or(f64::NAN);
            if !(tau >= min_tau.0) {
                min_tau = (tau, Some(k));
            }
        }
    }
    checks.push(positivity("positivity", min_j.0, min_j.1));
    checks.push(positivity("return-time-positivity", min_tau.0, min_tau.1));

    ValidationReport { checks }
}
