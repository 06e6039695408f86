//! One-dimensional maximization helpers: grid pre-scan plus golden-section
//! refinement. The pre-scan guards against multiple local maxima, so the
//! golden-section step only needs local unimodality around the best cell.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of `f` on `[a, b]`.
///
/// Returns `(x_max, f_max)` once the bracket is narrower than `tol`.
pub(crate) fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);

    while (b - a).abs() > tol {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }

    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximize `f` over `[lo, hi]`: scan `grid_n + 1` equispaced points, then
/// refine around the best cell with golden-section search down to `tol`.
///
/// Endpoints are always candidates, so boundary maxima are found exactly.
pub(crate) fn grid_then_golden_max(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    grid_n: usize,
    tol: f64,
) -> (f64, f64) {
    debug_assert!(grid_n >= 2 && hi >= lo);
    if hi <= lo {
        return (lo, f(lo));
    }
    let step = (hi - lo) / grid_n as f64;
    let mut best_i = 0usize;
    let mut best_x = lo;
    let mut best_f = f(lo);
    for i in 1..=grid_n {
        let x = if i == grid_n { hi } else { lo + i as f64 * step };
        let fx = f(x);
        if fx > best_f {
            best_f = fx;
            best_x = x;
            best_i = i;
        }
    }

    let a = if best_i == 0 { lo } else { lo + (best_i - 1) as f64 * step };
    let b = if best_i >= grid_n { hi } else { lo + (best_i + 1) as f64 * step };
    let (x, fx) = golden_section_max(&f, a, b, tol);
    if fx > best_f {
        (x, fx)
    } else {
        (best_x, best_f)
    }
}
