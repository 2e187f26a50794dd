//! Complex polynomials in the Chebyshev basis, Lagrange interpolation over
//! node sets, sup-norm estimation on `[-1, 1]` and bracketed real roots.

mod nodes;
mod roots;
mod supnorm;

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

pub use nodes::{from_lagrange_combination, lagrange_basis_at, lagrange_eval, NodeSet};
pub use roots::real_roots_bracketed;
pub use supnorm::{sup_norm_interval, sup_norm_interval_with_tol, SupNormEstimate, NEAR_EXTREME_TOL};

use crate::chebyshev::Degree;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `sum_k coeffs[k] * T_k(z)` with complex coefficients.
///
/// Trailing zero coefficients are stripped on construction; the zero
/// polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == ZERO) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The Chebyshev polynomial `T_n` itself.
    pub fn chebyshev_t(n: Degree) -> Self {
        let mut coeffs = vec![ZERO; n.get() + 1];
        coeffs[n.get()] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    /// The polynomial `z`.
    pub fn identity() -> Self {
        Self::from_real(&[0.0, 1.0])
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Clenshaw evaluation at a complex point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut b1 = ZERO;
        let mut b2 = ZERO;
        let two_z = z * 2.0;
        for c in self.coeffs.iter().skip(1).rev() {
            let b0 = c + two_z * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        match self.coeffs.first() {
            Some(c0) => c0 + z * b1 - b2,
            None => ZERO,
        }
    }

    #[inline]
    pub fn eval_real(&self, x: f64) -> Complex64 {
        self.eval(Complex64::new(x, 0.0))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiplication by `z`, using `z T_k = (T_{k+1} + T_{k-1}) / 2`.
    pub fn mul_x(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + 1];
        out[1] += self.coeffs[0];
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            out[k + 1] += c * 0.5;
            out[k - 1] += c * 0.5;
        }
        Self::new(out)
    }

    /// `p'`, from `c'_{k-1} = c'_{k+1} + 2 k c_k` (with `c'_0` halved).
    pub fn derivative(&self) -> Self {
        let n = self.coeffs.len();
        if n <= 1 {
            return Self::zero();
        }
        let mut d = vec![ZERO; n + 1];
        for k in (1..n).rev() {
            d[k - 1] = d[k + 1] + self.coeffs[k] * (2 * k) as f64;
        }
        d[0] *= 0.5;
        d.truncate(n - 1);
        Self::new(d)
    }

    /// `p(-z)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| if k % 2 == 1 { -c } else { c })
                .collect(),
        )
    }

    /// Coefficients conjugated: `conj(p(conj z))`.
    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Largest coefficient modulus.
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest `|Im c_k|`.
    pub fn max_imag_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    /// Coefficientwise max distance, padding the shorter one with zeros.
    pub fn max_coeff_distance(&self, other: &Self) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or(ZERO);
                let b = other.coeffs.get(k).copied().unwrap_or(ZERO);
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Drops trailing coefficients with modulus `<= rel_tol * max_coeff_norm()`.
    pub fn trimmed(&self, rel_tol: f64) -> Self {
        let cut = rel_tol * self.max_coeff_norm();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= cut) {
            coeffs.pop();
        }
        Self { coeffs }
    }
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;

    fn add(self, rhs: Self) -> ComplexPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new(
            (0..len)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(ZERO)
                        + rhs.coeffs.get(k).copied().unwrap_or(ZERO)
                })
                .collect(),
        )
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;

    fn sub(self, rhs: Self) -> ComplexPoly {
        self + &(-rhs)
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;

    fn neg(self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul<Complex64> for &ComplexPoly {
    type Output = ComplexPoly;

    fn mul(self, rhs: Complex64) -> ComplexPoly {
        self.scale(rhs)
    }
}
