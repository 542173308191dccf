//! Piecewise-polynomial functions of one real variable with exact value and
//! derivative evaluation.
//!
//! A [`BranchFunction`] stores one polynomial per segment in the local
//! variable `x - x_i`, so evaluation and differentiation are exact for the
//! stored representation. Cubic Hermite splines are converted to that form on
//! construction while keeping their nodal data for serialization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which one-sided limit to take at a breakpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
    TwoSided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchKind {
    PiecewisePolynomial,
    CubicHermiteSpline,
}

#[derive(Clone, Debug, PartialEq)]
struct HermiteData {
    values: Vec<f64>,
    derivatives: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BranchRepr", into = "BranchRepr")]
pub struct BranchFunction {
    kind: BranchKind,
    breakpoints: Vec<f64>,
    pieces: Vec<Vec<f64>>,
    hermite: Option<HermiteData>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum BranchRepr {
    PiecewisePolynomial {
        breakpoints: Vec<f64>,
        coefficients: Vec<Vec<f64>>,
    },
    CubicHermiteSpline {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
        derivatives: Vec<f64>,
    },
}

impl TryFrom<BranchRepr> for BranchFunction {
    type Error = Error;

    fn try_from(repr: BranchRepr) -> Result<Self> {
        match repr {
            BranchRepr::PiecewisePolynomial {
                breakpoints,
                coefficients,
            } => BranchFunction::piecewise_polynomial(breakpoints, coefficients),
            BranchRepr::CubicHermiteSpline {
                breakpoints,
                values,
                derivatives,
            } => BranchFunction::cubic_hermite(breakpoints, values, derivatives),
        }
    }
}

impl From<BranchFunction> for BranchRepr {
    fn from(f: BranchFunction) -> Self {
        match f.hermite {
            Some(h) => BranchRepr::CubicHermiteSpline {
                breakpoints: f.breakpoints,
                values: h.values,
                derivatives: h.derivatives,
            },
            None => BranchRepr::PiecewisePolynomial {
                breakpoints: f.breakpoints,
                coefficients: f.pieces,
            },
        }
    }
}

/// Local monomial coefficients `[c0, c1, c2, c3]` of the cubic on `[0, h]`
/// with values `y0, y1` and slopes `d0, d1` at its ends.
pub fn hermite_cubic(h: f64, y0: f64, y1: f64, d0: f64, d1: f64) -> [f64; 4] {
    let s = (y1 - y0) / h;
    [
        y0,
        d0,
        (3.0 * s - 2.0 * d0 - d1) / h,
        (d0 + d1 - 2.0 * s) / (h * h),
    ]
}

fn check_breakpoints(bp: &[f64]) -> Result<()> {
    if bp.len() < 2 {
        return Err(Error::Representation(
            "a branch needs at least two breakpoints".into(),
        ));
    }
    if bp.iter().any(|x| !x.is_finite()) {
        return Err(Error::Representation("non-finite breakpoint".into()));
    }
    if bp.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Representation(
            "breakpoints must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn horner(coeffs: &[f64], dx: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * dx + c)
}

fn horner_derivative(coeffs: &[f64], dx: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (n, &c)| acc * dx + n as f64 * c)
}

fn horner_second(coeffs: &[f64], dx: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(2)
        .rev()
        .fold(0.0, |acc, (n, &c)| acc * dx + (n * (n - 1)) as f64 * c)
}

/// A view of one polynomial piece.
#[derive(Clone, Copy, Debug)]
pub struct Segment<'a> {
    pub lo: f64,
    pub hi: f64,
    pub coefficients: &'a [f64],
}

impl Segment<'_> {
    pub fn value(&self, x: f64) -> f64 {
        horner(self.coefficients, x - self.lo)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        horner_derivative(self.coefficients, x - self.lo)
    }

    /// True when the piece is a polynomial of degree at most one.
    pub fn is_affine(&self) -> bool {
        self.coefficients.iter().skip(2).all(|&c| c == 0.0)
    }
}

impl BranchFunction {
    pub fn piecewise_polynomial(breakpoints: Vec<f64>, coefficients: Vec<Vec<f64>>) -> Result<Self> {
        check_breakpoints(&breakpoints)?;
        if coefficients.len() != breakpoints.len() - 1 {
            return Err(Error::Representation(format!(
                "{} breakpoints need {} coefficient rows, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                coefficients.len()
            )));
        }
        if coefficients.iter().any(|row| row.is_empty()) {
            return Err(Error::Representation("empty coefficient row".into()));
        }
        if coefficients.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::Representation("non-finite coefficient".into()));
        }
        Ok(Self {
            kind: BranchKind::PiecewisePolynomial,
            breakpoints,
            pieces: coefficients,
            hermite: None,
        })
    }

    pub fn cubic_hermite(breakpoints: Vec<f64>, values: Vec<f64>, derivatives: Vec<f64>) -> Result<Self> {
        check_breakpoints(&breakpoints)?;
        if values.len() != breakpoints.len() || derivatives.len() != breakpoints.len() {
            return Err(Error::Representation(
                "hermite values and derivatives must match the breakpoints".into(),
            ));
        }
        if values.iter().chain(&derivatives).any(|v| !v.is_finite()) {
            return Err(Error::Representation("non-finite hermite data".into()));
        }
        let pieces = (0..breakpoints.len() - 1)
            .map(|i| {
                let h = breakpoints[i + 1] - breakpoints[i];
                hermite_cubic(h, values[i], values[i + 1], derivatives[i], derivatives[i + 1]).to_vec()
            })
            .collect();
        Ok(Self {
            kind: BranchKind::CubicHermiteSpline,
            breakpoints,
            pieces,
            hermite: Some(HermiteData { values, derivatives }),
        })
    }

    /// Single affine piece `value_at_lo + slope * (x - lo)` on `[lo, hi]`.
    pub fn affine(lo: f64, hi: f64, value_at_lo: f64, slope: f64) -> Result<Self> {
        Self::piecewise_polynomial(vec![lo, hi], vec![vec![value_at_lo, slope]])
    }

    pub fn kind(&self) -> BranchKind {
        self.kind
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment<'_>> {
        self.pieces.iter().enumerate().map(move |(i, c)| Segment {
            lo: self.breakpoints[i],
            hi: self.breakpoints[i + 1],
            coefficients: c,
        })
    }

    fn segment_index(&self, x: f64, side: Side) -> usize {
        let n = self.pieces.len();
        let i = match side {
            Side::Left => self.breakpoints.partition_point(|&b| b < x),
            Side::Right | Side::TwoSided => self.breakpoints.partition_point(|&b| b <= x),
        };
        i.saturating_sub(1).min(n - 1)
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        let slack = 1e-14 * (hi - lo).abs().max(lo.abs()).max(hi.abs());
        if x.is_nan() || x < lo - slack || x > hi + slack {
            return Err(Error::Domain { x, lo, hi });
        }
        Ok(())
    }

    fn is_interior_breakpoint(&self, x: f64) -> bool {
        let n = self.breakpoints.len();
        self.breakpoints[1..n - 1].binary_search_by(|b| b.total_cmp(&x)).is_ok()
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        let i = self.segment_index(x, Side::Right);
        Ok(horner(&self.pieces[i], x - self.breakpoints[i]))
    }

    /// One-sided value; differs from [`value`](Self::value) only at a
    /// breakpoint where the representation is discontinuous.
    pub fn value_from(&self, x: f64, side: Side) -> Result<f64> {
        self.check_domain(x)?;
        let i = self.segment_index(x, side);
        Ok(horner(&self.pieces[i], x - self.breakpoints[i]))
    }

    pub fn derivative(&self, x: f64, side: Side) -> Result<f64> {
        self.check_domain(x)?;
        if side == Side::TwoSided && self.is_interior_breakpoint(x) {
            let l = self.derivative(x, Side::Left)?;
            let r = self.derivative(x, Side::Right)?;
            if (l - r).abs() > 1e-12 * l.abs().max(r.abs()).max(1.0) {
                return Err(Error::Kink(x));
            }
            return Ok(0.5 * (l + r));
        }
        let i = self.segment_index(x, side);
        Ok(horner_derivative(&self.pieces[i], x - self.breakpoints[i]))
    }

    pub fn second_derivative(&self, x: f64, side: Side) -> Result<f64> {
        self.check_domain(x)?;
        let i = self.segment_index(x, side);
        Ok(horner_second(&self.pieces[i], x - self.breakpoints[i]))
    }

    /// Largest jump in value and in first derivative across interior
    /// breakpoints.
    pub fn continuity_defects(&self) -> (f64, f64) {
        let mut value_jump: f64 = 0.0;
        let mut slope_jump: f64 = 0.0;
        for (i, w) in self.pieces.windows(2).enumerate() {
            let h = self.breakpoints[i + 1] - self.breakpoints[i];
            value_jump = value_jump.max((horner(&w[0], h) - w[1][0]).abs());
            let d1 = w[1].get(1).copied().unwrap_or(0.0);
            slope_jump = slope_jump.max((horner_derivative(&w[0], h) - d1).abs());
        }
        (value_jump, slope_jump)
    }

    /// The function `x ↦ c·f(x / c)`: abscissae and values scale by `c`,
    /// slopes are unchanged.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let breakpoints: Vec<f64> = self.breakpoints.iter().map(|x| x * c).collect();
        match &self.hermite {
            Some(h) => Self::cubic_hermite(
                breakpoints,
                h.values.iter().map(|v| v * c).collect(),
                h.derivatives.clone(),
            ),
            None => {
                let pieces = self
                    .pieces
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .map(|(n, a)| a * c.powi(1 - n as i32))
                            .collect()
                    })
                    .collect();
                Self::piecewise_polynomial(breakpoints, pieces)
            }
        }
    }

    /// Overwrite the value at the right end by adding a constant to the last
    /// piece (piecewise-polynomial) or last node (hermite). Used to build
    /// deliberately broken inputs.
    pub fn with_right_value_shift(&self, shift: f64) -> Result<Self> {
        let mut out = self.clone();
        match &mut out.hermite {
            Some(h) => {
                *h.values.last_mut().unwrap() += shift;
                Self::cubic_hermite(out.breakpoints, h.values.clone(), h.derivatives.clone())
            }
            None => {
                let n = out.pieces.len();
                let h = out.breakpoints[n] - out.breakpoints[n - 1];
                let last = &mut out.pieces[n - 1];
                // Add shift * ((x - lo)/h)^2 so only the far end moves.
                while last.len() < 3 {
                    last.push(0.0);
                }
                last[2] += shift / (h * h);
                Ok(out)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_reproduces_nodal_data() {
        let f = BranchFunction::cubic_hermite(
            vec![0.0, 0.5, 2.0],
            vec![1.0, -0.25, 3.0],
            vec![0.3, 2.0, -1.0],
        )
        .unwrap();
        for (i, &x) in [0.0, 0.5, 2.0].iter().enumerate() {
            let v = [1.0, -0.25, 3.0][i];
            let d = [0.3, 2.0, -1.0][i];
            assert!((f.value(x).unwrap() - v).abs() < 1e-14);
            assert!((f.derivative(x, Side::Left).unwrap() - d).abs() < 1e-13);
            assert!((f.derivative(x, Side::Right).unwrap() - d).abs() < 1e-13);
        }
        let (vj, dj) = f.continuity_defects();
        assert!(vj < 1e-14 && dj < 1e-13);
    }

    #[test]
    fn polynomial_derivatives_match_closed_form() {
        // 1 + 2x - x^2 + 0.5x^3 on [1, 3], local variable x - 1
        let f = BranchFunction::piecewise_polynomial(vec![1.0, 3.0], vec![vec![2.5, 1.5, 0.5, 0.5]]).unwrap();
        let p = |x: f64| 1.0 + 2.0 * x - x * x + 0.5 * x.powi(3);
        let dp = |x: f64| 2.0 - 2.0 * x + 1.5 * x * x;
        for x in [1.0, 1.3, 2.0, 2.9, 3.0] {
            assert!((f.value(x).unwrap() - p(x)).abs() < 1e-13);
            assert!((f.derivative(x, Side::TwoSided).unwrap() - dp(x)).abs() < 1e-13);
        }
        assert!((f.second_derivative(2.0, Side::Right).unwrap() - (-2.0 + 6.0)).abs() < 1e-13);
    }

    #[test]
    fn kink_needs_a_side() {
        let f = BranchFunction::piecewise_polynomial(vec![0.0, 1.0, 2.0], vec![vec![0.0, 1.0], vec![1.0, -1.0]]).unwrap();
        assert!(matches!(f.derivative(1.0, Side::TwoSided), Err(Error::Kink(_))));
        assert_eq!(f.derivative(1.0, Side::Left).unwrap(), 1.0);
        assert_eq!(f.derivative(1.0, Side::Right).unwrap(), -1.0);
    }

    #[test]
    fn out_of_domain_is_rejected() {
        let f = BranchFunction::affine(0.0, 1.0, 1.0, -1.0).unwrap();
        assert!(matches!(f.value(1.5), Err(Error::Domain { .. })));
        assert!(matches!(f.value(f64::NAN), Err(Error::Domain { .. })));
    }

    #[test]
    fn rejects_bad_breakpoints() {
        assert!(BranchFunction::affine(1.0, 1.0, 0.0, 0.0).is_err());
        assert!(BranchFunction::piecewise_polynomial(vec![0.0, 1.0], vec![]).is_err());
    }

    #[test]
    fn scaling_matches_definition() {
        let f = BranchFunction::piecewise_polynomial(vec![0.0, 1.0, 2.0], vec![vec![1.0, 0.5, -0.25], vec![1.25, 0.0, 0.1]]).unwrap();
        let c = 2.5;
        let g = f.scaled(c).unwrap();
        for x in [0.0, 0.7, 1.0, 1.9] {
            assert!((g.value(c * x).unwrap() - c * f.value(x).unwrap()).abs() < 1e-13);
            assert!((g.derivative(c * x, Side::Right).unwrap() - f.derivative(x, Side::Right).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn serde_keeps_the_representation() {
        let f = BranchFunction::cubic_hermite(vec![0.0, 1.0], vec![0.1, 0.2], vec![0.3, 0.4]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("cubic-hermite-spline"));
        let g: BranchFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }
}
