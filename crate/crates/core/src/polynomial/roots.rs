use alloc::vec::Vec;

use super::ComplexPoly;
use crate::error::{Error, Result};

const MAX_IMAG: f64 = 1e-13;
const ROOT_WIDTH: f64 = 1e-14;

/// One root of a real-valued `p` inside each `(lo, hi)` bracket, by bisection.
///
/// Each bracket must show a strict sign change (an exact zero at either end is
/// accepted as the root). The returned roots are strictly increasing.
pub fn real_roots_bracketed(p: &ComplexPoly, brackets: &[(f64, f64)]) -> Result<Vec<f64>> {
    let max_imag = p.max_imag_coeff();
    if max_imag > MAX_IMAG {
        return Err(Error::NotRealValued { max_imag });
    }
    let f = |x: f64| p.eval_real(x).re;
    let mut roots = Vec::with_capacity(brackets.len());
    for (index, &(a, b)) in brackets.iter().enumerate() {
        let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
        let (mut f_lo, f_hi) = (f(lo), f(hi));
        if f_lo == 0.0 {
            roots.push(lo);
            continue;
        }
        if f_hi == 0.0 {
            roots.push(hi);
            continue;
        }
        if !(f_lo * f_hi < 0.0) {
            return Err(Error::NoSignChange { index, lo, hi });
        }
        let root = loop {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= ROOT_WIDTH || mid <= lo || mid >= hi {
                break mid;
            }
            let f_mid = f(mid);
            if f_mid == 0.0 {
                break mid;
            }
            if (f_mid < 0.0) == (f_lo < 0.0) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        };
        roots.push(root);
    }
    roots.sort_by(f64::total_cmp);
    if roots.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnorderedRoots);
    }
    Ok(roots)
}
