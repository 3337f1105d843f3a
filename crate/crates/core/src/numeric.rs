//! Small one-dimensional numerical kernels: golden-section search, multi-start
//! minimization over a sampled window, adaptive Simpson quadrature and grids.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[a, b]`.
///
/// Stops when the bracket is narrower than `tol`. Returns `(x, f(x))`.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iter = 0;
    while (b - a) > tol && iter < 200 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iter += 1;
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Global minimum estimate of `f` on `[a, b]`.
///
/// Samples `samples` equispaced points, then refines every sampled local minimum by
/// golden-section search down to `tol`. Endpoint minima are kept as candidates.
/// Non-finite samples are treated as `+inf`.
pub fn multistart_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, samples: usize, tol: f64) -> (f64, f64) {
    let eval = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    if b <= a || samples < 2 {
        let fa = eval(a);
        return (a, fa);
    }
    let n = samples;
    let h = (b - a) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| if i == n - 1 { b } else { a + h * i as f64 }).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| eval(x)).collect();

    let mut best = (xs[0], ys[0]);
    for i in 0..n {
        if ys[i] < best.1 {
            best = (xs[i], ys[i]);
        }
    }
    for i in 0..n {
        let left = if i == 0 { f64::INFINITY } else { ys[i - 1] };
        let right = if i == n - 1 { f64::INFINITY } else { ys[i + 1] };
        if ys[i].is_finite() && ys[i] <= left && ys[i] <= right {
            let lo = xs[i.saturating_sub(1)];
            let hi = xs[(i + 1).min(n - 1)];
            let cand = golden_min(eval, lo, hi, tol);
            if cand.1 < best.1 {
                best = cand;
            }
        }
    }
    best
}

/// Outcome of an adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub evaluations: usize,
    /// False when the evaluation cap or recursion limit stopped refinement.
    pub converged: bool,
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` with absolute tolerance `tol`
/// and a hard cap of `max_evals` function evaluations.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, max_evals: usize) -> Quadrature {
    if a == b {
        return Quadrature { value: 0.0, evaluations: 0, converged: true };
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut state = SimpsonState { evals: 3, max_evals, converged: true };
    let value = simpson_step(&f, a, b, fa, fm, fb, whole, tol, 60, &mut state);
    Quadrature { value, evaluations: state.evals, converged: state.converged }
}

struct SimpsonState {
    evals: usize,
    max_evals: usize,
    converged: bool,
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    state: &mut SimpsonState,
) -> f64 {
    if state.evals + 2 > state.max_evals {
        state.converged = false;
        return whole;
    }
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    state.evals += 2;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 {
        state.converged = false;
        return left + right + delta / 15.0;
    }
    if delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, state)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, state)
}

/// `n` logarithmically spaced points from `lo` to `hi` inclusive (`0 < lo < hi`).
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2, "log_grid needs 0 < lo < hi and n >= 2");
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Grid in `(0, 1)` accumulating at `1`: the points `1 - d` for `d` log-spaced from
/// `d_hi` down to `d_lo`.
pub fn grid_toward_one(d_lo: f64, d_hi: f64, n: usize) -> Vec<f64> {
    let mut ds = log_grid(d_lo, d_hi, n);
    ds.reverse();
    ds.into_iter().map(|d| 1.0 - d).collect()
}

/// `log⁺ x = max(log x, 0)`, with `log⁺ 0 = 0`.
pub fn log_plus(x: f64) -> f64 {
    if x > 1.0 {
        x.ln()
    } else {
        0.0
    }
}

/// `n · log⁺ n` for a count.
pub fn n_log_plus_n(n: u64) -> f64 {
    let x = n as f64;
    x * log_plus(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_min(|x| (x - 0.3).powi(2) + 1.0, -2.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((fx - 1.0).abs() < 1e-12);
    }

    #[test]
    fn multistart_escapes_local_minimum() {
        // Two wells; the deeper one sits at x = 2.
        let f = |x: f64| ((x + 1.0).powi(2) - 0.5).min((x - 2.0).powi(2) - 1.0);
        let (x, fx) = multistart_min(f, -3.0, 4.0, 64, 1e-12);
        assert!((x - 2.0).abs() < 1e-6);
        assert!((fx + 1.0).abs() < 1e-10);
    }

    #[test]
    fn simpson_integrates_reciprocal() {
        let q = adaptive_simpson(|x| 1.0 / x, 1f64.exp(), 2f64.exp(), 1e-12, 1_000_000);
        assert!(q.converged);
        assert!((q.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn simpson_respects_eval_cap() {
        let q = adaptive_simpson(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, 1e-14, 1000);
        assert!(!q.converged);
        assert!(q.evaluations <= 1000);
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1.0, 100.0, 3);
        assert_eq!(g[0], 1.0);
        assert!((g[1] - 10.0).abs() < 1e-12);
        assert_eq!(g[2], 100.0);
        let u = grid_toward_one(1e-6, 0.5, 4);
        assert_eq!(u[0], 0.5);
        assert!((u[3] - (1.0 - 1e-6)).abs() < 1e-15);
    }

    #[test]
    fn log_plus_clamps() {
        assert_eq!(log_plus(0.5), 0.0);
        assert_eq!(n_log_plus_n(0), 0.0);
        assert!((n_log_plus_n(3) - 3.0 * 3f64.ln()).abs() < 1e-15);
    }
}
