/// Bisection on a sign-changing bracket `[a, b]` until the bracket is
/// narrower than `x_tol`. `fa` and `fb` are the endpoint values.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, mut fa: f64, x_tol: f64) -> f64 {
    for _ in 0..200 {
        if (b - a).abs() <= x_tol {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Roots of `values[i] = f(xs[i])` bracketed by consecutive sign changes,
/// refined by bisection. Exact zeros at grid points are reported as is.
pub fn bracketed_roots<F: Fn(f64) -> f64>(f: F, xs: &[f64], values: &[f64], x_tol: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    for i in 0..xs.len() {
        if values[i] == 0.0 {
            roots.push(xs[i]);
            continue;
        }
        if i + 1 < xs.len() && values[i + 1] != 0.0 && (values[i] < 0.0) != (values[i + 1] < 0.0) {
            roots.push(bisect(&f, xs[i], xs[i + 1], values[i], x_tol));
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_all_sign_changes() {
        let xs: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        let f = |x: f64| x.sin();
        let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let r = bracketed_roots(f, &xs, &vals, 1e-13);
        assert_eq!(r.len(), 4); // 0, π, 2π, 3π
        for (i, x) in r.iter().enumerate() {
            assert!((x - i as f64 * std::f64::consts::PI).abs() < 1e-12);
        }
    }
}
