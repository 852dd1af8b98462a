//! Bounded maximization on intervals and rectangles: a uniform grid locates
//! the best bracket, golden-section search refines it.
//!
//! Ties go to the smallest argument (lexicographic in 2-D); a refined point
//! replaces the grid winner only if it is strictly better.

/// Grid points for 1-D inner problems.
pub const GRID_1D: usize = 1024;
/// Grid points per axis for 2-D inner problems.
pub const GRID_2D: usize = 256;
/// Absolute tolerance of the golden-section refinement.
pub const GOLDEN_TOL: f64 = 1e-10;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`.
pub fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
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

/// `i`-th of `n` uniform points on `[lo, hi]`, hitting both ends exactly.
pub fn grid_point(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if n <= 1 || i == 0 {
        lo
    } else if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * (i as f64) / ((n - 1) as f64)
    }
}

/// Maximizes `f` on `[lo, hi]` with an `n`-point grid followed by golden
/// refinement of the winning bracket.
pub fn maximize_1d_with(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize, tol: f64) -> (f64, f64) {
    if !(hi > lo) {
        return (lo, f(lo));
    }
    let n = n.max(2);
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..n {
        let v = f(grid_point(lo, hi, n, i));
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let x_best = grid_point(lo, hi, n, best_i);
    let a = grid_point(lo, hi, n, best_i.saturating_sub(1));
    let b = grid_point(lo, hi, n, (best_i + 1).min(n - 1));
    let (xg, fg) = golden_max(&f, a, b, tol);
    if fg > best {
        (xg, fg)
    } else {
        (x_best, best)
    }
}

/// [`maximize_1d_with`] at the default resolution.
pub fn maximize_1d(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    maximize_1d_with(f, lo, hi, GRID_1D, GOLDEN_TOL)
}

/// Minimizes `f` on `[lo, hi]`; returns `(argmin, min)`.
pub fn minimize_1d(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let (x, v) = maximize_1d(|x| -f(x), lo, hi);
    (x, -v)
}

/// Maximum of `f` over the two endpoints; ties go to `lo`.
pub fn endpoint_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let (fl, fh) = (f(lo), f(hi));
    if fh > fl {
        (hi, fh)
    } else {
        (lo, fl)
    }
}

/// Maximizes `f(x, y)` on a rectangle with an `n × n` grid followed by
/// alternating golden refinements inside the winning cell's neighbourhood.
pub fn maximize_2d_with(
    f: impl Fn(f64, f64) -> f64,
    (xlo, xhi): (f64, f64),
    (ylo, yhi): (f64, f64),
    n: usize,
    tol: f64,
) -> ((f64, f64), f64) {
    let nx = if xhi > xlo { n.max(2) } else { 1 };
    let ny = if yhi > ylo { n.max(2) } else { 1 };
    let mut best = f64::NEG_INFINITY;
    let (mut bi, mut bj) = (0, 0);
    for i in 0..nx {
        let x = grid_point(xlo, xhi, nx, i);
        for j in 0..ny {
            let v = f(x, grid_point(ylo, yhi, ny, j));
            if v > best {
                best = v;
                bi = i;
                bj = j;
            }
        }
    }
    let grid_best = (
        (grid_point(xlo, xhi, nx, bi), grid_point(ylo, yhi, ny, bj)),
        best,
    );
    let xa = grid_point(xlo, xhi, nx, bi.saturating_sub(1));
    let xb = grid_point(xlo, xhi, nx, (bi + 1).min(nx - 1));
    let ya = grid_point(ylo, yhi, ny, bj.saturating_sub(1));
    let yb = grid_point(ylo, yhi, ny, (bj + 1).min(ny - 1));
    let (mut x, mut y) = grid_best.0;
    let mut fv = best;
    for _ in 0..60 {
        let prev = (x, y);
        if xb > xa {
            let (nx_, v) = golden_max(|t| f(t, y), xa, xb, tol);
            if v > fv {
                x = nx_;
                fv = v;
            }
        }
        if yb > ya {
            let (ny_, v) = golden_max(|t| f(x, t), ya, yb, tol);
            if v > fv {
                y = ny_;
                fv = v;
            }
        }
        if (x - prev.0).abs() <= tol && (y - prev.1).abs() <= tol {
            break;
        }
    }
    if fv > grid_best.1 {
        ((x, y), fv)
    } else {
        grid_best
    }
}

/// [`maximize_2d_with`] at the default resolution.
pub fn maximize_2d(
    f: impl Fn(f64, f64) -> f64,
    xr: (f64, f64),
    yr: (f64, f64),
) -> ((f64, f64), f64) {
    maximize_2d_with(f, xr, yr, GRID_2D, GOLDEN_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn grid_points_include_both_ends() {
        assert_eq!(grid_point(-5.0, 5.0, 11, 0), -5.0);
        assert_eq!(grid_point(-5.0, 5.0, 11, 10), 5.0);
        assert_eq!(grid_point(-5.0, 5.0, 11, 5), 0.0);
    }

    #[test]
    fn maximize_1d_handles_boundary_maximum() {
        let (x, v) = maximize_1d(|x| x, 0.82, 0.93);
        assert_eq!(x, 0.93);
        assert_eq!(v, 0.93);
    }

    #[test]
    fn maximize_1d_breaks_ties_toward_smallest() {
        let (x, _) = maximize_1d(|_| 0.0, 0.82, 0.93);
        assert_eq!(x, 0.82);
    }

    #[test]
    fn maximize_1d_degenerate_interval() {
        assert_eq!(maximize_1d(|x| x * x, 0.5, 0.5), (0.5, 0.25));
    }

    #[test]
    fn maximize_1d_interior_peak_beats_grid() {
        let f = |x: f64| -(x - 0.123_456_789).powi(2);
        let (x, _) = maximize_1d(f, 0.0, 1.0);
        assert!((x - 0.123_456_789).abs() < 1e-5);
    }

    #[test]
    fn minimize_1d_flips_sign() {
        let (x, v) = minimize_1d(|x| (x - 2.0).powi(2) + 1.0, 0.0, 5.0);
        assert!((x - 2.0).abs() < 1e-5);
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn endpoint_max_prefers_lo_on_ties() {
        assert_eq!(endpoint_max(|x| x * x, -1.0, 1.0).0, -1.0);
        assert_eq!(endpoint_max(|x| x, -1.0, 1.0).0, 1.0);
    }

    #[test]
    fn maximize_2d_interior_peak() {
        let f = |x: f64, y: f64| -(x - 0.31).powi(2) - 2.0 * (y + 0.47).powi(2) + 0.2 * x * y;
        let ((x, y), v) = maximize_2d(f, (0.0, 1.0), (-1.0, 0.0));
        // Stationary point: x = 0.31 + 0.1y, y = −0.47 + 0.05x.
        let ys = (-0.47 + 0.05 * 0.31) / (1.0 - 0.005);
        let xs = 0.31 + 0.1 * ys;
        assert!((x - xs).abs() < 1e-5, "{x} vs {xs}");
        assert!((y - ys).abs() < 1e-5, "{y} vs {ys}");
        assert!(v >= f(xs, ys) - 1e-12);
    }

    #[test]
    fn maximize_2d_corner_and_degenerate_axis() {
        let ((x, y), _) = maximize_2d(|x, y| x + y, (0.0, 1.0), (2.0, 3.0));
        assert_eq!((x, y), (1.0, 3.0));
        let ((x, y), _) = maximize_2d(|x, y| -(x - 0.5).powi(2) + y, (0.0, 1.0), (2.0, 2.0));
        assert!((x - 0.5).abs() < 1e-6);
        assert_eq!(y, 2.0);
    }
}
