//! Dormand–Prince 5(4) integrator with sign-change event isolation.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Direction in which an event function must cross zero to count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Crossing {
    Rising,
    Falling,
    Either,
}

impl Crossing {
    fn matches(self, before: f64, after: f64) -> bool {
        match self {
            Crossing::Rising => before < 0.0 && after >= 0.0,
            Crossing::Falling => before > 0.0 && after <= 0.0,
            Crossing::Either => (before < 0.0 && after >= 0.0) || (before > 0.0 && after <= 0.0),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
    /// Width of the time bracket at which event bisection stops.
    pub event_tol: f64,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            h_init: 1e-3,
            h_max: f64::INFINITY,
            max_steps: 1_000_000,
            event_tol: 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EventHit<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub steps: usize,
}

impl Dopri5 {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            ..Self::default()
        }
    }

    /// One trial step: fifth-order solution and embedded error estimate.
    pub fn step<F, const N: usize>(&self, f: &F, t: f64, y: &[f64; N], h: f64) -> ([f64; N], [f64; N])
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        let mut k = [[0.0; N]; 7];
        for s in 0..7 {
            let mut ys = *y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            k[s] = f(t + C[s] * h, &ys);
        }
        let mut y5 = *y;
        let mut err = [0.0; N];
        for s in 0..7 {
            for i in 0..N {
                y5[i] += h * B5[s] * k[s][i];
                err[i] += h * (B5[s] - B4[s]) * k[s][i];
            }
        }
        (y5, err)
    }

    fn error_norm<const N: usize>(&self, y: &[f64; N], y1: &[f64; N], err: &[f64; N]) -> f64 {
        (0..N)
            .map(|i| err[i].abs() / (self.atol + self.rtol * y[i].abs().max(y1[i].abs())))
            .fold(0.0, f64::max)
    }

    /// Adaptive stepping; `visit` sees every accepted step and returns
    /// `false` to stop early. Returns the final `(t, y, steps)`.
    fn drive<F, V, const N: usize>(&self, f: &F, t0: f64, y0: [f64; N], t_end: f64, mut visit: V) -> Result<(f64, [f64; N], usize)>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
        V: FnMut(f64, &[f64; N], f64, &[f64; N], f64) -> Result<bool>,
    {
        let mut t = t0;
        let mut y = y0;
        let mut h = self.h_init.min(self.h_max).min(t_end - t0);
        let mut steps = 0;
        while t < t_end {
            if steps >= self.max_steps {
                return Err(Error::Integration(format!(
                    "step budget of {} exhausted at t = {t}",
                    self.max_steps
                )));
            }
            h = h.min(t_end - t);
            if h <= 1e-14 * t.abs().max(1.0) {
                return Err(Error::Integration(format!("step size underflow (h = {h:e}) at t = {t}, y = {y:?}")));
            }
            let (y1, err) = self.step(f, t, &y, h);
            let norm = self.error_norm(&y, &y1, &err);
            if !norm.is_finite() {
                h *= 0.2;
                continue;
            }
            let factor = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
            if norm <= 1.0 {
                steps += 1;
                let keep_going = visit(t, &y, t + h, &y1, h)?;
                t += h;
                y = y1;
                if !keep_going {
                    break;
                }
                h = (h * factor).min(self.h_max);
            } else {
                h *= factor;
            }
        }
        Ok((t, y, steps))
    }

    /// Integrate to `t_end`, calling `observer` after every accepted step.
    pub fn integrate<F, O, const N: usize>(&self, f: F, t0: f64, y0: [f64; N], t_end: f64, mut observer: O) -> Result<[f64; N]>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
        O: FnMut(f64, &[f64; N]),
    {
        let (_, y, _) = self.drive(&f, t0, y0, t_end, |_, _, t1, y1, _| {
            observer(t1, y1);
            Ok(true)
        })?;
        Ok(y)
    }

    /// Integrate until `event(t, y)` crosses zero in the given direction,
    /// ignoring crossings before `t0 + min_time`. The crossing time is
    /// isolated by bisection on the step length to `event_tol`.
    pub fn integrate_to_event<F, G, const N: usize>(
        &self,
        f: F,
        t0: f64,
        y0: [f64; N],
        t_max: f64,
        event: G,
        crossing: Crossing,
        min_time: f64,
    ) -> Result<EventHit<N>>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
        G: Fn(f64, &[f64; N]) -> f64,
    {
        let mut hit: Option<(f64, [f64; N])> = None;
        let (_, _, steps) = self.drive(&f, t0, y0, t_max, |t, y, t1, y1, h| {
            let g0 = event(t, y);
            let g1 = event(t1, y1);
            if t1 < t0 + min_time || !crossing.matches(g0, g1) {
                return Ok(true);
            }
            let (mut lo, mut hi) = (0.0, h);
            let mut y_hi = *y1;
            let mut iterations = 0;
            while hi - lo > self.event_tol {
                iterations += 1;
                if iterations > 200 {
                    return Err(Error::Integration(format!(
                        "event isolation did not converge near t = {t}"
                    )));
                }
                let mid = 0.5 * (lo + hi);
                let (ym, _) = self.step(&f, t, y, mid);
                if crossing.matches(g0, event(t + mid, &ym)) {
                    hi = mid;
                    y_hi = ym;
                } else {
                    lo = mid;
                }
            }
            hit = Some((t + hi, y_hi));
            Ok(false)
        })?;
        match hit {
            Some((t, y)) => Ok(EventHit { t, y, steps }),
            None => Err(Error::Integration(format!(
                "no event before t = {t_max}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn harmonic_oscillator_period() {
        // x'' = −x from (1, 0): y crosses zero upward at t = 2π.
        let solver = Dopri5::with_tolerances(1e-11, 1e-13);
        let hit = solver
            .integrate_to_event(
                |_, y: &[f64; 2]| [y[1], -y[0]],
                0.0,
                [1.0, 0.0],
                10.0,
                |_, y| -y[1],
                Crossing::Rising,
                1.0,
            )
            .unwrap();
        // −y[1] = sin t rises through zero at t = 2π.
        assert!((hit.t - 2.0 * PI).abs() < 1e-9, "{}", hit.t);
        assert!((hit.y[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exponential_growth() {
        let solver = Dopri5::with_tolerances(1e-12, 1e-14);
        let y = solver.integrate(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], 2.0, |_, _| {}).unwrap();
        assert!((y[0] - 2f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn missing_event_is_an_error() {
        let solver = Dopri5::default();
        let r = solver.integrate_to_event(|_, _: &[f64; 1]| [1.0], 0.0, [0.0], 1.0, |_, y| y[0] - 5.0, Crossing::Rising, 0.0);
        assert!(matches!(r, Err(Error::Integration(_))));
    }
}
