//! Closed Reeb orbits, systoles and action spectra from a potential.
//!
//! Off the two exceptional fibers every Reeb orbit meets the invariant
//! surface of section. At level `k` the first-return map rotates the fiber
//! circle by `w(k) = −J′(k)` after time `τ(k) = J(k) − k·J′(k)`, so the orbit
//! closes exactly when `w(k) = p/q` is rational, with minimal period
//! `q·τ(k)`. The exceptional fibers over the two critical points of the
//! moment map are closed with periods `|k_minus|` and `k_plus`.
//!
//! Every section orbit with denominator above `q` has period at least
//! `(q + 1)·min τ`, which gives a termination bound for the systole search.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::branch::{BranchFunction, Side};
use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::roots::bisect;
use crate::DEFAULT_GRID;

/// Relative tolerance used to merge periods in spectra and to break ties.
pub const PERIOD_MERGE_TOL: f64 = 1e-9;

/// Safety factor applied to the sampled minimum return time.
pub const TAU_SAFETY: f64 = 0.99;

const MAX_Q: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitKind {
    Section,
    EndpointFiber,
}

impl fmt::Display for OrbitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitKind::Section => "section",
            OrbitKind::EndpointFiber => "endpoint_fiber",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedOrbit {
    /// Moment-map level of the orbit.
    pub k: f64,
    /// Reduced rotation `p/q = w(k)`; `0/1` for endpoint fibers.
    pub p: i64,
    pub q: u64,
    pub period: f64,
    pub contractible_period: f64,
    pub kind: OrbitKind,
    /// Interval of levels on which `w` is constantly `p/q`, when the orbit
    /// stands for such a family.
    pub plateau: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystoleResult {
    pub value: f64,
    pub witness: ClosedOrbit,
    pub q_max_used: u64,
    /// `q_max_used · τ_min`: every orbit not enumerated is at least this long.
    pub certification_bound: f64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Denominator of the lift of an orbit with rotation `p/q` to the
/// degree-`|e|` fiberwise cover on which it becomes contractible.
pub fn contractible_multiplier(p: i64, q: u64, e: i64) -> u64 {
    let e = e.unsigned_abs();
    q * e / gcd(p.unsigned_abs(), e)
}

/// Smallest-denominator fraction within `tol` of `x` with `q ≤ q_max`.
pub fn rational_approx(x: f64, q_max: u64, tol: f64) -> Option<(i64, u64)> {
    (1..=q_max).find_map(|q| {
        let m = (x * q as f64).round();
        ((x - m / q as f64).abs() <= tol).then_some((m as i64, q))
    })
}

struct BranchView<'a> {
    f: &'a BranchFunction,
    lo: f64,
    hi: f64,
    /// The end that is a critical level of the moment map.
    outer: f64,
    zero_side: Side,
}

impl BranchView<'_> {
    fn rotation(&self, k: f64) -> f64 {
        -self
            .f
            .derivative(k, Side::TwoSided)
            .or_else(|_| self.f.derivative(k, Side::Right))
            .unwrap_or(f64::NAN)
    }

    fn side_at(&self, k: f64) -> Side {
        if k == 0.0 {
            self.zero_side
        } else {
            Side::TwoSided
        }
    }

    /// Maximal intervals on which `w` is constant (affine pieces of `J`).
    fn plateaus(&self) -> Vec<(f64, f64, f64)> {
        let mut out: Vec<(f64, f64, f64)> = Vec::new();
        for seg in self.f.segments().filter(|s| s.is_affine()) {
            let w = -seg.coefficients.get(1).copied().unwrap_or(0.0);
            match out.last_mut() {
                Some(last) if last.1 == seg.lo && (last.2 - w).abs() <= 1e-12 => last.1 = seg.hi,
                _ => out.push((seg.lo, seg.hi, w)),
            }
        }
        out
    }
}

fn branch_views(profile: &Profile) -> [BranchView<'_>; 2] {
    [
        BranchView {
            f: profile.negative(),
            lo: profile.k_minus(),
            hi: 0.0,
            outer: profile.k_minus(),
            zero_side: Side::Left,
        },
        BranchView {
            f: profile.positive(),
            lo: 0.0,
            hi: profile.k_plus(),
            outer: profile.k_plus(),
            zero_side: Side::Right,
        },
    ]
}

fn endpoint_orbits(profile: &Profile) -> [ClosedOrbit; 2] {
    let e = profile.e().unsigned_abs() as f64;
    [profile.k_minus(), profile.k_plus()].map(|k| ClosedOrbit {
        k,
        p: 0,
        q: 1,
        period: k.abs(),
        contractible_period: e * k.abs(),
        kind: OrbitKind::EndpointFiber,
        plateau: None,
    })
}

fn section_orbit(profile: &Profile, view: &BranchView<'_>, k: f64, p: i64, q: u64, plateau: Option<(f64, f64)>) -> Result<ClosedOrbit> {
    let tau = profile.return_time(k, view.side_at(k))?;
    let period = q as f64 * tau;
    Ok(ClosedOrbit {
        k,
        p,
        q,
        period,
        contractible_period: contractible_multiplier(p, q, profile.e()) as f64 * tau,
        kind: OrbitKind::Section,
        plateau,
    })
}

/// Closed Reeb orbits with rotation denominator at most `q_max`: both
/// exceptional fibers plus every grid-bracketed level where `w(k) = p/q`.
/// Levels where `w` is constantly rational are reported once per plateau.
pub fn enumerate_closed_orbits(profile: &Profile, q_max: u64, grid_density: usize) -> Result<Vec<ClosedOrbit>> {
    profile.ensure_valid(grid_density)?;
    enumerate_unchecked(profile, q_max, grid_density)
}

fn enumerate_unchecked(profile: &Profile, q_max: u64, grid_density: usize) -> Result<Vec<ClosedOrbit>> {
    if q_max == 0 {
        return Err(Error::Unsupported("q_max must be positive".into()));
    }
    let scale = profile.scale();
    let k_tol = 1e-12 * scale.max(1.0);
    let grid = profile.grid(grid_density);
    let views = branch_views(profile);
    let all_plateaus: Vec<Vec<(f64, f64, f64)>> = views.iter().map(|v| v.plateaus()).collect();
    let zero_in_plateau = all_plateaus.iter().flatten().any(|&(lo, hi, _)| lo <= 0.0 && 0.0 <= hi);

    let mut orbits: Vec<ClosedOrbit> = endpoint_orbits(profile).to_vec();
    for (view, plateaus) in views.iter().zip(&all_plateaus) {
        for &(lo, hi, w) in plateaus {
            if let Some((p, q)) = rational_approx(w, q_max, 1e-10) {
                let mid = 0.5 * (lo + hi);
                orbits.push(section_orbit(profile, view, mid, p, q, Some((lo, hi)))?);
            }
        }
        let in_plateau = |k: f64| plateaus.iter().any(|&(lo, hi, _)| lo - k_tol <= k && k <= hi + k_tol);

        let xs: Vec<f64> = grid.iter().copied().filter(|&k| k >= view.lo && k <= view.hi).collect();
        let ws: Vec<f64> = xs.iter().map(|&k| view.rotation(k)).collect();
        let mut roots: Vec<(f64, i64, u64)> = Vec::new();

        for i in 0..xs.len() {
            // Exact hits at grid points.
            for q in 1..=q_max {
                let m = (ws[i] * q as f64).round();
                if m / q as f64 == ws[i] && gcd(m.abs() as u64, q) == 1 {
                    roots.push((xs[i], m as i64, q));
                }
            }
            if i + 1 == xs.len() {
                continue;
            }
            let (a, b) = (ws[i], ws[i + 1]);
            let (lo_w, hi_w) = if a < b { (a, b) } else { (b, a) };
            if !(hi_w > lo_w) {
                continue;
            }
            for q in 1..=q_max {
                let qf = q as f64;
                let m_lo = (lo_w * qf).floor() as i64;
                let m_hi = (hi_w * qf).ceil() as i64;
                for m in m_lo..=m_hi {
                    let target = m as f64 / qf;
                    if !(target > lo_w && target < hi_w) || gcd(m.unsigned_abs(), q) != 1 {
                        continue;
                    }
                    let f = |k: f64| view.rotation(k) - target;
                    let root = bisect(f, xs[i], xs[i + 1], a - target, k_tol);
                    roots.push((root, m, q));
                }
            }
        }

        for (k, p, q) in roots {
            if (k - view.outer).abs() <= k_tol || in_plateau(k) {
                continue;
            }
            if k == 0.0 && (zero_in_plateau || view.zero_side == Side::Left) {
                continue;
            }
            orbits.push(section_orbit(profile, view, k, p, q, None)?);
        }
    }

    orbits.sort_by(|a, b| {
        a.kind
            .cmp(&b.kind)
            .reverse()
            .then(a.q.cmp(&b.q))
            .then(a.k.total_cmp(&b.k))
            .then(a.p.cmp(&b.p))
    });
    orbits.dedup_by(|b, a| a.kind == b.kind && a.p == b.p && a.q == b.q && (a.k - b.k).abs() <= 1e3 * k_tol);
    Ok(orbits)
}

/// Smallest return time over the grid (both sides at breakpoints), times the
/// safety factor.
fn certified_tau_min(profile: &Profile, grid_density: usize) -> Result<f64> {
    let breakpoints = profile.breakpoints();
    let mut tau_min = f64::INFINITY;
    for k in profile.grid(grid_density) {
        let sides: &[Side] = if k == profile.k_minus() {
            &[Side::Right]
        } else if k == profile.k_plus() {
            &[Side::Left]
        } else if breakpoints.binary_search_by(|b| b.total_cmp(&k)).is_ok() {
            &[Side::Left, Side::Right]
        } else {
            &[Side::TwoSided]
        };
        for &side in sides {
            tau_min = tau_min.min(profile.return_time_unchecked(k, side)?);
        }
    }
    if !(tau_min > 0.0) {
        return Err(Error::Admissibility(format!("minimum return time {tau_min} is not positive")));
    }
    Ok(TAU_SAFETY * tau_min)
}

/// Minimum of `key` over the orbits; endpoint fibers win ties.
fn pick_min<'a>(orbits: &'a [ClosedOrbit], key: impl Fn(&ClosedOrbit) -> f64) -> &'a ClosedOrbit {
    let min = orbits.iter().map(&key).fold(f64::INFINITY, f64::min);
    orbits
        .iter()
        .filter(|o| key(o) <= min * (1.0 + PERIOD_MERGE_TOL))
        .max_by(|a, b| a.kind.cmp(&b.kind).then(key(b).total_cmp(&key(a))))
        .unwrap()
}

fn certified_min(profile: &Profile, grid_density: usize, key: impl Fn(&ClosedOrbit) -> f64) -> Result<SystoleResult> {
    profile.ensure_valid(grid_density)?;
    let tau_min = certified_tau_min(profile, grid_density)?;
    let mut q_max = 1;
    loop {
        let orbits = enumerate_unchecked(profile, q_max, grid_density)?;
        let witness = pick_min(&orbits, &key);
        let value = key(witness);
        let bound = q_max as f64 * tau_min;
        if value <= bound {
            return Ok(SystoleResult {
                value,
                witness: witness.clone(),
                q_max_used: q_max,
                certification_bound: bound,
            });
        }
        if q_max >= MAX_Q {
            return Err(Error::Search(format!(
                "no certificate up to q = {q_max}: current minimum {value}, bound {bound}"
            )));
        }
        q_max *= 2;
    }
}

/// Shortest period of a closed Reeb orbit, with a witness and the
/// denominator bound that certifies it.
pub fn systole(profile: &Profile) -> Result<SystoleResult> {
    systole_with_grid(profile, DEFAULT_GRID)
}

pub fn systole_with_grid(profile: &Profile, grid_density: usize) -> Result<SystoleResult> {
    certified_min(profile, grid_density, |o| o.period)
}

/// Shortest period of a contractible closed Reeb orbit. An orbit with
/// rotation `p/q` first becomes contractible after
/// `|e|/gcd(p, e)` traversals; an exceptional fiber after `|e|`.
pub fn contractible_systole(profile: &Profile) -> Result<SystoleResult> {
    contractible_systole_with_grid(profile, DEFAULT_GRID)
}

pub fn contractible_systole_with_grid(profile: &Profile, grid_density: usize) -> Result<SystoleResult> {
    certified_min(profile, grid_density, |o| o.contractible_period)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitClass {
    pub p: i64,
    pub q: u64,
    pub kind: OrbitKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumLine {
    pub period: f64,
    /// Distinct `(p, q, kind)` classes realising this period.
    pub classes: Vec<OrbitClass>,
}

/// Sorted prime periods of closed orbits up to denominator `q_max`, merged
/// at relative tolerance [`PERIOD_MERGE_TOL`].
pub fn action_spectrum(profile: &Profile, q_max: u64, grid_density: usize) -> Result<Vec<SpectrumLine>> {
    let mut orbits = enumerate_closed_orbits(profile, q_max, grid_density)?;
    orbits.sort_by(|a, b| a.period.total_cmp(&b.period));
    let mut lines: Vec<SpectrumLine> = Vec::new();
    for o in orbits {
        let class = OrbitClass {
            p: o.p,
            q: o.q,
            kind: o.kind,
        };
        match lines.last_mut() {
            Some(line) if (o.period - line.period).abs() <= PERIOD_MERGE_TOL * line.period => {
                if !line.classes.contains(&class) {
                    line.classes.push(class);
                }
            }
            _ => lines.push(SpectrumLine {
                period: o.period,
                classes: vec![class],
            }),
        }
    }
    Ok(lines)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// Every orbit closed with one common minimal period.
    Zoll,
    /// Every orbit closed; the regular orbits share one period and the two
    /// exceptional fibers share a different one.
    BesseTwoSingularEqual,
    /// Every orbit closed, with some other period pattern.
    BesseOther,
    /// Some orbit is not closed.
    NonBesse,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Zoll => "Zoll",
            Classification::BesseTwoSingularEqual => "Besse-two-singular-equal",
            Classification::BesseOther => "Besse-other",
            Classification::NonBesse => "non-Besse",
        })
    }
}

const CLASSIFY_Q: u64 = 10_000;

/// Zoll/Besse detection: all orbits are closed exactly when `w` is a
/// rational constant on each branch. Read off the representation (every
/// piece affine with a common slope) and confirmed on a grid.
pub fn classify(profile: &Profile) -> Result<Classification> {
    profile.ensure_valid(DEFAULT_GRID)?;
    let mut section_periods = Vec::new();
    for view in branch_views(profile) {
        let plateaus = view.plateaus();
        let [(lo, hi, w)] = plateaus[..] else {
            return Ok(Classification::NonBesse);
        };
        if lo != view.lo || hi != view.hi {
            return Ok(Classification::NonBesse);
        }
        let n = 256;
        let constant = (0..=n).all(|i| {
            let k = view.lo + (view.hi - view.lo) * i as f64 / n as f64;
            (view.rotation(k) - w).abs() <= 1e-10
        });
        if !constant {
            return Ok(Classification::NonBesse);
        }
        let Some((_, q)) = rational_approx(w, CLASSIFY_Q, 1e-10) else {
            return Ok(Classification::NonBesse);
        };
        let mid = 0.5 * (view.lo + view.hi);
        section_periods.push(q as f64 * profile.return_time(mid, Side::TwoSided)?);
    }
    let same = |a: f64, b: f64| (a - b).abs() <= PERIOD_MERGE_TOL * a.abs().max(b.abs());
    let (s0, s1) = (section_periods[0], section_periods[1]);
    let (e0, e1) = (-profile.k_minus(), profile.k_plus());
    Ok(if same(s0, s1) && same(s0, e0) && same(s0, e1) {
        Classification::Zoll
    } else if same(s0, s1) && same(e0, e1) && !same(s0, e0) {
        Classification::BesseTwoSingularEqual
    } else {
        Classification::BesseOther
    })
}

/// Orbit table as CSV with columns `k,p,q,period,contractible_period,kind`.
pub fn write_orbits_csv<W: Write>(orbits: &[ClosedOrbit], mut out: W) -> Result<()> {
    writeln!(out, "k,p,q,period,contractible_period,kind")?;
    for o in orbits {
        writeln!(out, "{},{},{},{},{},{}", o.k, o.p, o.q, o.period, o.contractible_period, o.kind)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn lift_rule() {
        assert_eq!(contractible_multiplier(1, 1, 2), 2);
        assert_eq!(contractible_multiplier(-5, 2, 5), 2);
        assert_eq!(contractible_multiplier(2, 3, 1), 3);
        assert_eq!(contractible_multiplier(0, 1, 4), 1);
        // p is defined up to multiples of e·q by the choice of branch.
        assert_eq!(contractible_multiplier(3, 2, 3), contractible_multiplier(3 - 6, 2, 3));
    }

    #[test]
    fn rational_detection() {
        assert_eq!(rational_approx(2.0 / 3.0, 10, 1e-12), Some((2, 3)));
        assert_eq!(rational_approx(-2.5, 10, 1e-12), Some((-5, 2)));
        assert_eq!(rational_approx(std::f64::consts::SQRT_2, 50, 1e-10), None);
    }

    #[test]
    fn zoll_two_orbits() {
        let p = zoll_profile(2, 1.0).unwrap();
        let orbits = enumerate_closed_orbits(&p, 3, 512).unwrap();
        for o in &orbits {
            assert!(close(o.period, 1.0, 1e-12), "{o:?}");
            if o.kind == OrbitKind::Section {
                assert_eq!((o.p.abs(), o.q), (1, 1));
                assert!(o.plateau.is_some());
            }
        }
        assert_eq!(orbits.iter().filter(|o| o.kind == OrbitKind::Section).count(), 2);
    }

    #[test]
    fn ellipsoid_orbits() {
        let p = ellipsoid_profile(1.0, 2.0).unwrap();
        let orbits = enumerate_closed_orbits(&p, 3, 512).unwrap();
        let sections: Vec<_> = orbits.iter().filter(|o| o.kind == OrbitKind::Section).collect();
        assert_eq!(sections.len(), 2);
        for o in sections {
            let expected = if o.k > 0.0 { (2, 3) } else { (-1, 3) };
            assert_eq!((o.p, o.q), expected);
            assert!(close(o.period, 2.0, 1e-12));
        }
        let ends: Vec<f64> = orbits.iter().filter(|o| o.kind == OrbitKind::EndpointFiber).map(|o| o.period).collect();
        assert_eq!(ends, vec![2.0, 1.0]);
        // q_max below 3 sees only the fibers.
        assert_eq!(enumerate_closed_orbits(&p, 2, 512).unwrap().len(), 2);
    }

    #[test]
    fn besse_five_orbits() {
        let p = besse_quotient_profile(5, 1.0).unwrap();
        let orbits = enumerate_closed_orbits(&p, 2, 512).unwrap();
        let mut pq: Vec<_> = orbits.iter().filter(|o| o.kind == OrbitKind::Section).map(|o| (o.p, o.q)).collect();
        pq.sort();
        assert_eq!(pq, vec![(-5, 2), (5, 2)]);
        for o in &orbits {
            let expected = if o.kind == OrbitKind::Section { 1.0 } else { 0.2 };
            assert!(close(o.period, expected, 1e-12));
        }
    }

    #[test]
    fn systoles_of_model_forms() {
        let eta = eta_family_profile(&EtaFamilyParams::new(3, 0.05).unwrap()).unwrap();
        let s = systole(&eta).unwrap();
        assert!(close(s.value, 0.425, 1e-12));
        assert_eq!(s.witness.kind, OrbitKind::EndpointFiber);
        assert!(s.value <= s.certification_bound);

        assert!(close(systole(&zoll_profile(1, 1.0).unwrap()).unwrap().value, 1.0, 1e-12));
        assert!(close(systole(&ellipsoid_profile(1.0, 2.0).unwrap()).unwrap().value, 1.0, 1e-12));
    }

    #[test]
    fn contractible_systoles() {
        let b = contractible_systole(&besse_quotient_profile(5, 1.0).unwrap()).unwrap();
        assert!(close(b.value, 1.0, 1e-12));
        let z = contractible_systole(&zoll_profile(2, 1.0).unwrap()).unwrap();
        assert!(close(z.value, 2.0, 1e-12));
        let el = ellipsoid_profile(1.0, 2.0).unwrap();
        assert_eq!(contractible_systole(&el).unwrap().value, systole(&el).unwrap().value);
    }

    #[test]
    fn spectra() {
        let periods = |p: &Profile, q| -> Vec<f64> { action_spectrum(p, q, 512).unwrap().iter().map(|l| l.period).collect() };
        let s5 = periods(&besse_quotient_profile(5, 1.0).unwrap(), 6);
        assert_eq!(s5.len(), 2);
        assert!(close(s5[0], 0.2, 1e-12) && close(s5[1], 1.0, 1e-12));
        let s4 = periods(&besse_quotient_profile(4, 1.0).unwrap(), 6);
        assert_eq!(s4.len(), 2);
        assert!(close(s4[0], 0.25, 1e-12) && close(s4[1], 0.5, 1e-12));
        let z = periods(&zoll_profile(2, 1.0).unwrap(), 6);
        assert_eq!(z.len(), 1);
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&zoll_profile(1, 1.0).unwrap()).unwrap(), Classification::Zoll);
        assert_eq!(classify(&zoll_profile(2, 3.0).unwrap()).unwrap(), Classification::Zoll);
        assert_eq!(classify(&ellipsoid_profile(3.0, 3.0).unwrap()).unwrap(), Classification::Zoll);
        assert_eq!(
            classify(&besse_quotient_profile(7, 1.0).unwrap()).unwrap(),
            Classification::BesseTwoSingularEqual
        );
        assert_eq!(classify(&ellipsoid_profile(1.0, 2.0).unwrap()).unwrap(), Classification::BesseOther);
        let r = random_admissible_profile(&RandomProfileParams::new(3, 1).unwrap()).unwrap();
        assert_eq!(classify(&r).unwrap(), Classification::NonBesse);
        let eta = eta_family_profile(&EtaFamilyParams::new(3, 0.05).unwrap()).unwrap();
        assert_eq!(classify(&eta).unwrap(), Classification::NonBesse);
    }

    #[test]
    fn csv_columns() {
        let p = besse_quotient_profile(5, 1.0).unwrap();
        let mut buf = Vec::new();
        write_orbits_csv(&enumerate_closed_orbits(&p, 2, 64).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "k,p,q,period,contractible_period,kind");
        assert_eq!(lines.count(), 4);
    }

    #[test]
    fn invalid_profile_is_rejected() {
        let p = zoll_profile(2, 1.0).unwrap();
        let broken = Profile::new(
            crate::EulerNumber::new(3).unwrap(),
            p.k_minus(),
            p.k_plus(),
            p.negative().clone(),
            p.positive().clone(),
        )
        .unwrap();
        assert!(matches!(enumerate_closed_orbits(&broken, 2, 64), Err(Error::Validation(_))));
        assert!(matches!(systole(&broken), Err(Error::Validation(_))));
    }
}
