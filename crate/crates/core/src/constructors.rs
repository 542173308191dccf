//! Explicit families of potentials: Zoll forms, Besse quotients, the
//! near-maximizing η-family for `e > 2`, boundaries of ellipsoids, and a
//! seeded generator of random admissible potentials for audits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::branch::{hermite_cubic, BranchFunction, Side};
use crate::error::{Error, Result};
use crate::measures::contact_volume;
use crate::profile::{EulerNumber, Profile};

const CONSTRUCTION_GRID: usize = 512;

fn euler(e: i64) -> Result<EulerNumber> {
    EulerNumber::new(e)
}

fn positive_param(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Tent potential `J(k) = height − slope·|k|` on `[−height/slope, height/slope]`.
fn tent(e: i64, height: f64, slope: f64) -> Result<Profile> {
    let k = height / slope;
    let neg = BranchFunction::affine(-k, 0.0, 0.0, slope)?;
    let pos = BranchFunction::affine(0.0, k, height, -slope)?;
    Profile::new(euler(e)?, -k, k, neg, pos)
}

/// Zoll form with common period `period`: `J = T − |k|` for `e = 2`,
/// `J = (T − |k|)/2` for `e = 1`. No positive Zoll form exists for `e > 2`.
pub fn zoll_profile(e: i64, period: f64) -> Result<Profile> {
    positive_param("period", period)?;
    match e {
        2 => tent(2, period, 1.0),
        1 => tent(1, 0.5 * period, 0.5),
        _ => Err(Error::Unsupported(format!(
            "Zoll profiles exist only for e in {{1, 2}}, got e = {e}"
        ))),
    }
}

/// Quotient of a Zoll form by the cyclic group of order `e`:
/// `J = scale/2 − (e/2)|k|` on `[−scale/e, scale/e]`. The two exceptional
/// fibers have period `scale/e`; regular orbits have period `scale` for odd
/// `e` and `scale/2` for even `e`.
pub fn besse_quotient_profile(e: i64, scale: f64) -> Result<Profile> {
    if e < 1 {
        return Err(Error::Unsupported(format!("Besse quotients need e >= 1, got {e}")));
    }
    positive_param("scale", scale)?;
    tent(e, 0.5 * scale, 0.5 * e as f64)
}

/// How the two linear pieces of the η-family are joined on `[η/2, η]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothing {
    /// The C¹ cubic matching values and slopes at `η/2` and `η`.
    #[default]
    HermiteCubic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaFamilyParams {
    pub e: i64,
    pub eta: f64,
    #[serde(default)]
    pub smoothing: Smoothing,
}

impl EtaFamilyParams {
    pub fn new(e: i64, eta: f64) -> Result<Self> {
        let p = Self {
            e,
            eta,
            smoothing: Smoothing::HermiteCubic,
        };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        if self.e <= 2 {
            return Err(Error::Unsupported(format!("the η-family needs e > 2, got {}", self.e)));
        }
        let upper = 1.0 / (2.0 + self.e as f64);
        if !(self.eta > 0.0 && self.eta < upper) {
            return Err(Error::Unsupported(format!(
                "η must lie in (0, {upper}), got {}",
                self.eta
            )));
        }
        Ok(())
    }

    /// `a = 1/2 − eη/2`: the endpoint level and the systole.
    pub fn a(&self) -> f64 {
        0.5 - 0.5 * self.e as f64 * self.eta
    }
}

/// The η-family: `J(k) = f(|k|)` on `[−a, a]` with `f(r) = 1/2 − (e/2)r` on
/// `[0, η/2]`, `f(r) = a − r` on `[η, a]`, and a cubic join in between.
///
/// The two lines meet at `r = eη/(e−2) > η`, so no convex join exists on
/// `[η/2, η]`; the Hermite cubic there is concave then convex. What the
/// period bound needs is that the tangent intercept `f − r·f′` stays at least
/// `a` on the window, which holds because `f″` changes sign once and the
/// intercept equals `1/2` and `a` at the window ends. That bound is checked
/// here and construction fails if it does not hold.
pub fn eta_family_profile(params: &EtaFamilyParams) -> Result<Profile> {
    params.check()?;
    let e = params.e as f64;
    let eta = params.eta;
    let a = params.a();
    let half = 0.5 * eta;
    let f_half = 0.5 - 0.5 * e * half;
    let f_eta = a - eta;
    let Smoothing::HermiteCubic = params.smoothing;

    let join = hermite_cubic(half, f_half, f_eta, -0.5 * e, -1.0);
    let pos = BranchFunction::piecewise_polynomial(
        vec![0.0, half, eta, a],
        vec![vec![0.5, -0.5 * e], join.to_vec(), vec![f_eta, -1.0]],
    )?;
    let mirrored = hermite_cubic(half, f_eta, f_half, 1.0, 0.5 * e);
    let neg = BranchFunction::piecewise_polynomial(
        vec![-a, -eta, -half, 0.0],
        vec![vec![0.0, 1.0], mirrored.to_vec(), vec![f_half, 0.5 * e]],
    )?;
    let profile = Profile::new(euler(params.e)?, -a, a, neg, pos)?;

    for i in 0..=CONSTRUCTION_GRID {
        let r = half + (eta - half) * i as f64 / CONSTRUCTION_GRID as f64;
        let intercept = profile.return_time_unchecked(r, Side::Right)?;
        if intercept < a - 1e-12 {
            return Err(Error::Construction(format!(
                "smoothing breaks the period bound: f − r f′ = {intercept} < a = {a} at r = {r}"
            )));
        }
    }
    profile.ensure_valid(CONSTRUCTION_GRID)?;
    Ok(profile)
}

/// Boundary of the ellipsoid `E(a1, a2)` with the anti-diagonal circle
/// action (Euler number 1). Both branches are linear with the same return
/// time `a1·a2/(a1 + a2)`; rotations are `a2/(a1 + a2)` for `k > 0` and
/// `−a1/(a1 + a2)` for `k < 0`.
pub fn ellipsoid_profile(a1: f64, a2: f64) -> Result<Profile> {
    positive_param("a1", a1)?;
    positive_param("a2", a2)?;
    let s = a1 + a2;
    let neg = BranchFunction::affine(-a2, 0.0, 0.0, a1 / s)?;
    let pos = BranchFunction::affine(0.0, a1, a1 * a2 / s, -a2 / s)?;
    let profile = Profile::new(euler(1)?, -a2, a1, neg, pos)?;

    // The derivation is checked, not trusted: volume a1·a2 and slope jump −1.
    let vol = contact_volume(&profile, 1e-12)?;
    if (vol - a1 * a2).abs() > 1e-9 * a1 * a2 {
        return Err(Error::Construction(format!(
            "ellipsoid volume {vol} differs from a1·a2 = {}",
            a1 * a2
        )));
    }
    profile.ensure_valid(CONSTRUCTION_GRID)?;
    Ok(profile)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomProfileParams {
    pub e: EulerNumber,
    pub seed: u64,
    /// Range from which `k_minus` is drawn; both ends negative.
    pub k_minus_range: (f64, f64),
    /// Range from which `k_plus` is drawn; both ends positive.
    pub k_plus_range: (f64, f64),
    /// Relative amplitude of the random part of the rotation function.
    pub roughness: f64,
    /// Number of rotation nodes per branch.
    pub nodes: usize,
    /// Rejection budget.
    pub max_attempts: usize,
}

impl RandomProfileParams {
    pub fn new(e: i64, seed: u64) -> Result<Self> {
        Ok(Self {
            e: EulerNumber::new(e)?,
            seed,
            k_minus_range: (-2.0, -0.5),
            k_plus_range: (0.5, 2.0),
            roughness: 0.4,
            nodes: 6,
            max_attempts: 1000,
        })
    }
}

/// Random admissible potential, deterministic in the seed.
///
/// Samples the rotation `w = −J′` rather than `J`: a constant pair
/// `(w₋, w₊)` with `w₊ − w₋ = e`, plus a continuous piecewise-linear
/// perturbation, shifted by a constant so that `∫ w dk = 0` over
/// `[k_minus, k_plus]`. Then `J(k) = ∫_k^{k_plus} w` vanishes at both ends and
/// has the prescribed slope jump. Candidates failing validation are
/// rejected and redrawn.
pub fn random_admissible_profile(params: &RandomProfileParams) -> Result<Profile> {
    let e = params.e.get();
    if e < 1 {
        return Err(Error::Unsupported(format!(
            "random profiles model the Legendrian case e >= 1, got e = {e}"
        )));
    }
    let (m0, m1) = params.k_minus_range;
    let (p0, p1) = params.k_plus_range;
    if !(m0 <= m1 && m1 < 0.0 && 0.0 < p0 && p0 <= p1) {
        return Err(Error::Unsupported("need k_minus range < 0 < k_plus range".into()));
    }
    if params.nodes < 2 || !(params.roughness >= 0.0) {
        return Err(Error::Unsupported("need at least two nodes and nonnegative roughness".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..params.max_attempts {
        let k_minus = if m0 == m1 { m0 } else { rng.gen_range(m0..m1) };
        let k_plus = if p0 == p1 { p0 } else { rng.gen_range(p0..p1) };
        let candidate = sample_candidate(&mut rng, e, k_minus, k_plus, params)?;
        if let Some(p) = candidate {
            if p.validate(CONSTRUCTION_GRID).all_passed() {
                return Ok(p);
            }
        }
    }
    Err(Error::Generation {
        seed: params.seed,
        attempts: params.max_attempts,
    })
}

fn sample_candidate(
    rng: &mut ChaCha8Rng,
    e: i64,
    k_minus: f64,
    k_plus: f64,
    params: &RandomProfileParams,
) -> Result<Option<Profile>> {
    let ef = e as f64;
    let w_plus = ef * (-k_minus) / (k_plus - k_minus);
    let w_minus = w_plus - ef;
    let amplitude = params.roughness * w_plus.abs().max(w_minus.abs());
    let n = params.nodes;

    let neg_x: Vec<f64> = (0..=n).map(|i| k_minus * (1.0 - i as f64 / n as f64)).collect();
    let mut pos_x: Vec<f64> = (0..=n).map(|i| k_plus * i as f64 / n as f64).collect();
    pos_x[n] = k_plus;
    let mut bump = |_: usize| amplitude * rng.gen_range(-1.0..1.0);
    let shared = bump(0);
    let mut neg_w: Vec<f64> = (0..n).map(|i| w_minus + bump(i)).collect();
    neg_w.push(w_minus + shared);
    let mut pos_w = vec![w_plus + shared];
    pos_w.extend((1..=n).map(|i| w_plus + bump(i)));

    let integral = |xs: &[f64], ws: &[f64]| -> f64 {
        xs.windows(2)
            .zip(ws.windows(2))
            .map(|(x, w)| 0.5 * (x[1] - x[0]) * (w[0] + w[1]))
            .sum()
    };
    let shift = -(integral(&neg_x, &neg_w) + integral(&pos_x, &pos_w)) / (k_plus - k_minus);
    neg_w.iter_mut().chain(pos_w.iter_mut()).for_each(|w| *w += shift);

    // J at nodes, integrating w from the right end.
    let mut pos_j = vec![0.0; n + 1];
    for i in (0..n).rev() {
        pos_j[i] = pos_j[i + 1] + 0.5 * (pos_x[i + 1] - pos_x[i]) * (pos_w[i] + pos_w[i + 1]);
    }
    let mut neg_j = vec![0.0; n + 1];
    neg_j[n] = pos_j[0];
    for i in (0..n).rev() {
        neg_j[i] = neg_j[i + 1] + 0.5 * (neg_x[i + 1] - neg_x[i]) * (neg_w[i] + neg_w[i + 1]);
    }
    if neg_j[0].abs() > 1e-13 * k_plus.max(-k_minus) {
        return Ok(None);
    }
    neg_j[0] = 0.0;

    let pieces = |xs: &[f64], js: &[f64], ws: &[f64]| -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| {
                let h = xs[i + 1] - xs[i];
                vec![js[i], -ws[i], -(ws[i + 1] - ws[i]) / (2.0 * h)]
            })
            .collect()
    };
    let neg = BranchFunction::piecewise_polynomial(neg_x.clone(), pieces(&neg_x, &neg_j, &neg_w))?;
    let pos = BranchFunction::piecewise_polynomial(pos_x.clone(), pieces(&pos_x, &pos_j, &pos_w))?;
    Ok(Some(Profile::new(EulerNumber::new(e)?, k_minus, k_plus, neg, pos)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zoll_values() {
        let p = zoll_profile(2, 1.0).unwrap();
        assert_eq!(p.evaluate(0.0).unwrap(), 1.0);
        assert_eq!(p.derivative(0.5, Side::TwoSided).unwrap(), -1.0);
        assert!((p.return_time(0.3, Side::TwoSided).unwrap() - 1.0).abs() < 1e-15);
        let p1 = zoll_profile(1, 1.0).unwrap();
        assert_eq!(p1.rotation(0.2, Side::TwoSided).unwrap(), 0.5);
        assert!(matches!(zoll_profile(3, 1.0), Err(Error::Unsupported(_))));
        assert!(zoll_profile(2, -1.0).is_err());
    }

    #[test]
    fn besse_values() {
        let p = besse_quotient_profile(5, 1.0).unwrap();
        assert!((p.return_time(0.1, Side::TwoSided).unwrap() - 0.5).abs() < 1e-15);
        assert!((p.k_plus() - 0.2).abs() < 1e-15);
        let p4 = besse_quotient_profile(4, 1.0).unwrap();
        assert_eq!(p4.rotation(-0.1, Side::TwoSided).unwrap(), -2.0);
        assert!(besse_quotient_profile(0, 1.0).is_err());
    }

    #[test]
    fn besse_two_is_zoll_two_at_half_scale() {
        let b = besse_quotient_profile(2, 1.0).unwrap();
        let z = zoll_profile(2, 0.5).unwrap();
        for k in [-0.5, -0.3, 0.0, 0.1, 0.49, 0.5] {
            assert!((b.evaluate(k).unwrap() - z.evaluate(k).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn ellipsoid_values() {
        let p = ellipsoid_profile(1.0, 2.0).unwrap();
        assert!((p.evaluate(0.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((p.derivative(0.1, Side::TwoSided).unwrap() + 2.0 / 3.0).abs() < 1e-15);
        for k in [-1.9, -0.5, 0.2, 0.9] {
            assert!((p.return_time(k, Side::TwoSided).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        }
        // E(a, a) is the Zoll e = 1 form of period a.
        let b = ellipsoid_profile(1.5, 1.5).unwrap();
        let z = zoll_profile(1, 1.5).unwrap();
        for k in [-1.5, -0.4, 0.0, 0.7, 1.5] {
            assert!((b.evaluate(k).unwrap() - z.evaluate(k).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn eta_family_shape() {
        let params = EtaFamilyParams::new(3, 0.05).unwrap();
        assert!((params.a() - 0.425).abs() < 1e-15);
        let p = eta_family_profile(&params).unwrap();
        assert_eq!(p.k_plus(), 0.425);
        assert!((p.rotation(0.02, Side::TwoSided).unwrap() - 1.5).abs() < 1e-14);
        assert!((p.rotation(0.3, Side::TwoSided).unwrap() - 1.0).abs() < 1e-14);
        assert!((p.rotation(-0.3, Side::TwoSided).unwrap() + 1.0).abs() < 1e-14);
        assert!((p.return_time(0.02, Side::TwoSided).unwrap() - 0.5).abs() < 1e-14);
        let jump = p.derivative(0.0, Side::Right).unwrap() - p.derivative(0.0, Side::Left).unwrap();
        assert!((jump + 3.0).abs() < 1e-14);
        // J is even.
        for k in [0.01, 0.03, 0.04, 0.07, 0.2] {
            assert!((p.evaluate(k).unwrap() - p.evaluate(-k).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn eta_family_parameter_domain() {
        assert!(EtaFamilyParams::new(2, 0.05).is_err());
        assert!(EtaFamilyParams::new(3, 0.2).is_err()); // 1/(2+e) = 0.2 excluded
        assert!(EtaFamilyParams::new(3, 0.0).is_err());
        assert!(EtaFamilyParams::new(10, 0.08).is_ok());
    }

    #[test]
    fn random_profiles_are_valid_and_deterministic() {
        for e in [1, 2, 3, 5, 8] {
            for seed in 0..10 {
                let params = RandomProfileParams::new(e, seed).unwrap();
                let p = random_admissible_profile(&params).unwrap();
                assert!(p.validate(1024).all_passed(), "e = {e}, seed = {seed}");
                assert_eq!(p, random_admissible_profile(&params).unwrap());
            }
        }
        let a = random_admissible_profile(&RandomProfileParams::new(2, 0).unwrap()).unwrap();
        let b = random_admissible_profile(&RandomProfileParams::new(2, 1).unwrap()).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn random_rejects_negative_euler() {
        let params = RandomProfileParams::new(-1, 0).unwrap();
        assert!(matches!(random_admissible_profile(&params), Err(Error::Unsupported(_))));
    }
}
