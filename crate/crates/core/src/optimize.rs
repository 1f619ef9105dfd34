//! Scalar search helpers.

/// 1/φ
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
///
/// Returns `(x, f(x))`. Assumes `f` is unimodal on the bracket; otherwise a
/// local maximum is returned.
pub fn golden_section_max<F>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > xtol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Coarse scan on `n + 1` evenly spaced points followed by golden-section
/// refinement around the best point. Endpoints are always evaluated.
pub fn scan_then_refine<F>(f: F, lo: f64, hi: f64, n: usize, xtol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let step = (hi - lo) / n as f64;
    let (mut best_i, mut best_f) = (0usize, f64::NEG_INFINITY);
    for i in 0..=n {
        let x = if i == n { hi } else { lo + i as f64 * step };
        let v = f(x);
        if v > best_f {
            best_i = i;
            best_f = v;
        }
    }
    let best_x = if best_i == n { hi } else { lo + best_i as f64 * step };
    let a = lo + best_i.saturating_sub(1) as f64 * step;
    let b = (lo + (best_i + 1) as f64 * step).min(hi);
    let (x, v) = golden_section_max(&f, a, b, xtol);
    if v > best_f {
        (x, v)
    } else {
        (best_x, best_f)
    }
}

/// Bisection for a sign change of `f` on `[a, b]`; `f(a)` and `f(b)` must
/// have opposite signs (or one of them vanish).
pub fn bisect<F>(f: F, mut a: f64, mut b: f64, xtol: f64, max_iter: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    for _ in 0..max_iter {
        if (b - a).abs() <= xtol {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
