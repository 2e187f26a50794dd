//! Closed-form optimal designs at purely imaginary points `z0 = a i`.
//!
//! For `a > 0` the polynomials
//!
//! ```text
//! Q_1 = -(a z + i) / s,   Q_2 = (-(a + s) z^2 - i z + s) / s,
//! R_0 = a / s,            R_1 = (a + s) z / s,          s = sqrt(a^2 + 1),
//! ```
//!
//! continued by the Chebyshev recurrence `P_{k+1} = 2 z P_k - P_{k-1}`,
//! satisfy `|Q_n(x)|^2 - (x^2 - 1) R_{n-1}(x)^2 = 1` on the real line. Hence
//! `|Q_n| <= 1` on `[-1, 1]` with equality at `±1` and the zeros of
//! `R_{n-1}`, which together carry the optimal prediction measure, and
//! `Q_n = -(i^n) P_n^{mu0, ai}` is of extremal growth at `a i`.
//! Negative `a` is handled by the reflection `x -> -x`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::chebyshev::{cheb_t, chebyshev_extrema, Degree};
use crate::design::Design;
use crate::error::{Error, Result};
use crate::polynomial::{real_roots_bracketed, ComplexPoly, NodeSet};

/// Exterior point `a i` (`a != 0`) together with a degree `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImaginaryParams {
    n: Degree,
    a: f64,
}

impl ImaginaryParams {
    pub fn new(n: usize, a: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("degree must be at least 1"));
        }
        if a == 0.0 || !a.is_finite() {
            return Err(Error::InvalidParameter("a must be a nonzero finite real"));
        }
        Ok(Self {
            n: Degree::new(n)?,
            a,
        })
    }

    #[inline]
    pub fn n(&self) -> Degree {
        self.n
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn z0(&self) -> Complex64 {
        Complex64::new(0.0, self.a)
    }
}

fn check_positive(a: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter("a must be positive; reflect for a < 0"));
    }
    Ok(libm::sqrt(a * a + 1.0))
}

fn recur_from(mut prev: ComplexPoly, mut cur: ComplexPoly, steps: usize) -> ComplexPoly {
    let two = Complex64::new(2.0, 0.0);
    for _ in 0..steps {
        let next = &cur.mul_x().scale(two) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `Q_n` for `a > 0`, `n >= 1`, built by the recurrence in Chebyshev coefficients.
pub fn q_poly(n: usize, a: f64) -> Result<ComplexPoly> {
    let s = check_positive(a)?;
    if n == 0 {
        return Err(Error::InvalidParameter("Q_n is defined for n >= 1"));
    }
    Degree::new(n)?;
    let i = Complex64::new(0.0, 1.0);
    let re = |v: f64| Complex64::new(v, 0.0);
    let q1 = ComplexPoly::new(alloc::vec![-i / s, re(-a / s)]);
    // z^2 = (T_0 + T_2) / 2
    let q2 = ComplexPoly::new(alloc::vec![
        re((s - 0.5 * (a + s)) / s),
        -i / s,
        re(-0.5 * (a + s) / s),
    ]);
    Ok(match n {
        1 => q1,
        n => recur_from(q1, q2, n - 2),
    })
}

/// `R_n` for `a > 0`, `n >= 0` (real coefficients).
pub fn r_poly(n: usize, a: f64) -> Result<ComplexPoly> {
    let s = check_positive(a)?;
    Degree::new(n)?;
    let r0 = ComplexPoly::from_real(&[a / s]);
    let r1 = ComplexPoly::from_real(&[0.0, (a + s) / s]);
    Ok(match n {
        0 => r0,
        n => recur_from(r0, r1, n - 1),
    })
}

/// `||Q_n(x)|^2 - (x^2 - 1) R_{n-1}(x)^2 - 1|`.
pub fn pell_residual(n: usize, a: f64, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("Q_n is defined for n >= 1"));
    }
    let q = q_poly(n, a)?.eval_real(x).norm_sqr();
    let r = r_poly(n - 1, a)?.eval_real(x).re;
    Ok((q - (x * x - 1.0) * r * r - 1.0).abs())
}

/// Support `{-1} ∪ zeros(R_{n-1}) ∪ {+1}` for `|a|`, reflected when `a < 0`.
pub fn imaginary_support(params: &ImaginaryParams) -> Result<NodeSet> {
    let n = params.n.get();
    let a = params.a.abs();
    let m = n - 1;
    let mut xs = Vec::with_capacity(n + 1);
    xs.push(-1.0);
    if m >= 1 {
        // zeros of R_m interlace the extrema cos(k pi / m) of T_m
        let ext = chebyshev_extrema(m);
        let brackets: Vec<(f64, f64)> = ext.windows(2).map(|w| (w[0], w[1])).collect();
        xs.extend(real_roots_bracketed(&r_poly(m, a)?, &brackets)?);
    }
    xs.push(1.0);
    let nodes = NodeSet::new(xs)?;
    Ok(if params.a < 0.0 { nodes.reflect() } else { nodes })
}

/// The optimal design at `a i`: closed-form support with Hoel-Levine weights.
pub fn imaginary_design(params: &ImaginaryParams) -> Result<Design> {
    Design::from_nodes(imaginary_support(params)?, params.z0())
}

/// `max |p(a i)|` over `||p||_[-1,1] <= 1`, i.e. `s (|a| + s)^(n-1)`.
pub fn growth_value(params: &ImaginaryParams) -> f64 {
    let a = params.a.abs();
    let s = libm::sqrt(a * a + 1.0);
    s * libm::pow(a + s, (params.n.get() - 1) as f64)
}

/// `K_n^{mu0}(a i, a i)` of the optimal design, the square of [`growth_value`].
pub fn optimal_k_value(params: &ImaginaryParams) -> f64 {
    let g = growth_value(params);
    g * g
}

/// Both sides of
/// `growth_value - |T_n(a i)| = (sqrt(a^2 + 1) - |a|) |T_{n-1}(a i)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthGap {
    pub lhs: f64,
    pub rhs: f64,
}

impl GrowthGap {
    /// `|lhs - rhs| / max(1, rhs)`.
    pub fn defect(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.rhs.max(1.0)
    }
}

pub fn growth_gap(params: &ImaginaryParams) -> GrowthGap {
    let a = params.a.abs();
    let s = libm::sqrt(a * a + 1.0);
    let n = params.n;
    let prev = Degree::new(n.get() - 1).expect("n - 1 is a valid degree");
    GrowthGap {
        lhs: growth_value(params) - cheb_t(n, params.z0()).norm(),
        rhs: (s - a) * cheb_t(prev, params.z0()).norm(),
    }
}
