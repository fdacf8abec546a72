//! Derivative-free scalar and box-constrained 2-D minimization.

use rayon::prelude::*;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`.
///
/// Both endpoints are also evaluated, so a minimum sitting on the boundary
/// is returned exactly rather than approached to within `tol`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > tol {
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
    }
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Result of a search over the unit square.
#[derive(Debug, Clone, Copy)]
pub struct BoxMinimum {
    pub u: f64,
    pub v: f64,
    pub value: f64,
    /// Smallest value seen on the coarse grid; `value <= grid_value`.
    pub grid_value: f64,
}

/// Minimizes `f(u, v)` over `[0, 1]²`: a `points × points` tensor grid
/// localizes the basin, then alternating golden-section line searches
/// inside the neighbouring grid cells refine it to `tol` in each coordinate.
pub fn grid_then_refine<F>(f: F, points: usize, tol: f64) -> BoxMinimum
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let points = points.max(2);
    let step = 1.0 / (points - 1) as f64;
    let values: Vec<(usize, usize, f64)> = (0..points * points)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / points, idx % points);
            (i, j, f(i as f64 * step, j as f64 * step))
        })
        .collect();
    let &(bi, bj, grid_value) = values
        .iter()
        .min_by(|a, b| a.2.total_cmp(&b.2))
        .expect("non-empty grid");
    let (mut u, mut v) = (bi as f64 * step, bj as f64 * step);
    let mut value = grid_value;
    for _ in 0..32 {
        let (u0, v0) = (u, v);
        let (nu, fu) = golden_section(|x| f(x, v), (u - step).max(0.0), (u + step).min(1.0), tol);
        if fu < value {
            u = nu;
            value = fu;
        }
        let (nv, fv) = golden_section(|y| f(u, y), (v - step).max(0.0), (v + step).min(1.0), tol);
        if fv < value {
            v = nv;
            value = fv;
        }
        if (u - u0).abs() <= tol && (v - v0).abs() <= tol {
            break;
        }
    }
    BoxMinimum {
        u,
        v,
        value,
        grid_value,
    }
}
