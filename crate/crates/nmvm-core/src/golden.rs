//! Derivative-free 1-D minimization: golden-section search plus a doubling
//! bracket finder. Objectives may return +inf (extended-real convention);
//! comparisons treat +inf as worse than any finite value.

const INVPHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy)]
pub struct GoldenResult {
    pub x: f64,
    pub value: f64,
}

/// Golden-section minimize `f` on `[lo, hi]`. Stops when the bracket width
/// drops below `tol_x`.
pub fn minimize(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol_x: f64) -> GoldenResult {
    assert!(lo <= hi);
    let mut a = lo;
    let mut b = hi;
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..400 {
        if (b - a).abs() <= tol_x {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        GoldenResult { x: x1, value: f1 }
    } else {
        GoldenResult { x: x2, value: f2 }
    }
}

/// Expand a bracket around `center` by step doubling until the middle of the
/// triple is no worse than both ends. Intended for convex objectives whose
/// minimum may lie far from `center`; `f(center)` must be finite.
pub fn bracket_minimum(f: impl Fn(f64) -> f64, center: f64, step0: f64) -> (f64, f64) {
    let mut step = step0.abs().max(1e-12);
    let mut a = center - step;
    let mut b = center;
    let mut c = center + step;
    let mut fa = f(a);
    let mut fb = f(b);
    let mut fc = f(c);
    debug_assert!(fb.is_finite(), "bracket center must have a finite value");
    for _ in 0..300 {
        if fb <= fa && fb <= fc {
            return (a, c);
        }
        step *= 2.0;
        if fa < fb {
            c = b;
            fc = fb;
            b = a;
            fb = fa;
            a = b - step;
            fa = f(a);
        } else {
            a = b;
            fa = fb;
            b = c;
            fb = fc;
            c = b + step;
            fc = f(c);
        }
    }
    (a, c)
}
