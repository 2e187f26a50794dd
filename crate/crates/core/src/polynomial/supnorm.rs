use alloc::vec::Vec;
use core::f64::consts::PI;

use super::ComplexPoly;
use crate::error::{Error, Result};

/// Default modulus tolerance for [`SupNormEstimate::near_extreme_points`].
pub const NEAR_EXTREME_TOL: f64 = 1e-8;

const MIN_GRID: usize = 1024;
const GRID_PER_DEGREE: usize = 32;
const GOLDEN_ITERS: usize = 200;

/// Estimate of `max_{x in [-1,1]} |p(x)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupNormEstimate {
    pub value: f64,
    pub argmax: f64,
    /// Refined local maxima (endpoints included) with `|p| >= value - tol`, increasing.
    pub near_extreme_points: Vec<f64>,
}

/// [`sup_norm_interval_with_tol`] with [`NEAR_EXTREME_TOL`].
pub fn sup_norm_interval(p: &ComplexPoly) -> Result<SupNormEstimate> {
    sup_norm_interval_with_tol(p, NEAR_EXTREME_TOL)
}

/// Sup-norm of `p` on `[-1, 1]`.
///
/// `|p|^2` is sampled on `max(1024, 32 deg)` Chebyshev-Lobatto points; every
/// grid-local maximum (endpoints included) is refined by golden-section search
/// over its two neighbouring cells.
pub fn sup_norm_interval_with_tol(p: &ComplexPoly, tol: f64) -> Result<SupNormEstimate> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = MIN_GRID.max(GRID_PER_DEGREE * p.degree());
    let grid: Vec<f64> = (0..n)
        .map(|k| match k {
            0 => -1.0,
            k if k == n - 1 => 1.0,
            k => -libm::cos(k as f64 * PI / (n - 1) as f64),
        })
        .collect();
    let sq = |x: f64| p.eval_real(x).norm_sqr();
    let vals: Vec<f64> = grid.iter().map(|&x| sq(x)).collect();

    // (x, |p(x)|^2) candidates
    let mut cands: Vec<(f64, f64)> = Vec::new();
    cands.push((-1.0, vals[0]));
    cands.push((1.0, vals[n - 1]));
    for k in 0..n {
        let left_ok = k == 0 || vals[k] >= vals[k - 1];
        let right_ok = k == n - 1 || vals[k] >= vals[k + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        let lo = grid[k.saturating_sub(1)];
        let hi = grid[(k + 1).min(n - 1)];
        let (x, v) = golden_max(&sq, lo, hi);
        cands.push((x, v));
    }
    cands.sort_by(|a, b| a.0.total_cmp(&b.0));

    let (argmax, best_sq) = cands
        .iter()
        .copied()
        .fold((0.0, f64::NEG_INFINITY), |acc, c| if c.1 > acc.1 { c } else { acc });
    let value = libm::sqrt(best_sq);

    // Peaks closer than the finest grid cell are not resolved separately.
    let merge = grid[1] - grid[0];
    let mut near: Vec<(f64, f64)> = Vec::new();
    for (x, v) in cands {
        if libm::sqrt(v) < value - tol {
            continue;
        }
        match near.last_mut() {
            Some(last) if x - last.0 < merge => {
                if v > last.1 {
                    *last = (x, v);
                }
            }
            _ => near.push((x, v)),
        }
    }

    Ok(SupNormEstimate {
        value,
        argmax,
        near_extreme_points: near.into_iter().map(|(x, _)| x).collect(),
    })
}

// Golden-section maximisation of a unimodal function on [lo, hi]; the
// bracket ends are kept as candidates so boundary maxima are found.
fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (f_lo, f_hi) = (f(lo), f(hi));
    let mut best = if f_lo >= f_hi { (lo, f_lo) } else { (hi, f_hi) };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..GOLDEN_ITERS {
        if hi - lo <= 1e-15 {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    for c in [(x1, f1), (x2, f2)] {
        if c.1 > best.1 {
            best = c;
        }
    }
    best
}
