//! Numeric oracles shared by the test suites.
//!
//! These routines deliberately know nothing about the physics: they operate
//! on plain closures so the tests can cross-check closed-form results against
//! independent numerical procedures (minimization, sign-change bisection,
//! finite differences).

/// Golden-section minimization of a unimodal function on `[a, b]`.
///
/// Shrinks the bracket until its width is below `tol`, then returns the
/// midpoint and the function value there.
pub fn golden_section_min(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
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
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Bisection on a sign change of `f` over `[lo, hi]`.
///
/// Returns `None` when `f(lo)` and `f(hi)` do not straddle zero. Exact zeros
/// at an endpoint count as that endpoint being the root.
pub fn bisect_sign_change(f: impl Fn(f64) -> f64, lo: f64, hi: f64, iters: usize) -> Option<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Central first derivative, Richardson-extrapolated (steps `h` and `h/2`).
pub fn central_derivative(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let (d1, d2) = (d(h), d(0.5 * h));
    (4.0 * d2 - d1) / 3.0
}

/// Central second derivative, Richardson-extrapolated (steps `h` and `h/2`).
///
/// The plain second difference carries a rounding floor of roughly
/// `eps * |f| / h^2`; extrapolation lets a moderately large `h` (1e-2..1e-3)
/// reach ~1e-9 relative accuracy on smooth O(1) functions.
pub fn second_derivative_fd(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    let (d1, d2) = (d(h), d(0.5 * h));
    (4.0 * d2 - d1) / 3.0
}

/// One-sided curvature probe at a boundary point `x0` of an even landscape:
/// `f` is evaluated at `x0` and `x0 + h` only. Richardson-extrapolated.
///
/// Intended for curvature sign scans at `gamma = 0`, where the landscape is
/// even in `gamma` so `f(x0 - h)` would be redundant.
pub fn boundary_curvature_fd(f: impl Fn(f64) -> f64, x0: f64, h: f64) -> f64 {
    let f0 = f(x0);
    let d = |h: f64| 2.0 * (f(x0 + h) - f0) / (h * h);
    let (d1, d2) = (d(h), d(0.5 * h));
    (4.0 * d2 - d1) / 3.0
}
