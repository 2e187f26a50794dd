//! Chebyshev polynomials of the first and second kind at complex arguments.
//!
//! Everything is evaluated by the forward three-term recurrence
//! `P_{k+1} = 2 z P_k - P_{k-1}`, so real and complex arguments share one
//! code path. The recurrence is well behaved for `|z| = O(1)` at the degrees
//! used here; degrees above [`MAX_DEGREE`] are rejected.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest degree accepted by [`Degree::new`].
pub const MAX_DEGREE: usize = 512;

/// Polynomial degree, `0 <= n <= MAX_DEGREE`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Degree(usize);

impl Degree {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_DEGREE {
            return Err(Error::DegreeTooLarge {
                degree: n,
                max: MAX_DEGREE,
            });
        }
        Ok(Self(n))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Dimension of the polynomial space of this degree.
    #[inline]
    pub fn dim(self) -> usize {
        self.0 + 1
    }
}

impl TryFrom<usize> for Degree {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        Self::new(n)
    }
}

impl core::fmt::Display for Degree {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        self.0.fmt(f)
    }
}

// Runs the shared recurrence from (P_{-1}, P_0) = (prev, cur) up to P_n.
#[inline]
fn recur(n: usize, z: Complex64, mut prev: Complex64, mut cur: Complex64) -> Complex64 {
    let two_z = z * 2.0;
    for _ in 0..n {
        let next = two_z * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `T_n(z)`.
pub fn cheb_t(n: Degree, z: Complex64) -> Complex64 {
    // T_{-1} = z makes T_1 = 2z*1 - z = z.
    recur(n.get(), z, z, Complex64::new(1.0, 0.0))
}

/// `T_n(x)` for real `x`.
pub fn cheb_t_real(n: Degree, x: f64) -> f64 {
    let (mut prev, mut cur) = (x, 1.0);
    for _ in 0..n.get() {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `U_n(z)` for `n >= -1`, with the convention `U_{-1} = 0`.
pub fn cheb_u(n: i64, z: Complex64) -> Result<Complex64> {
    if n < -1 {
        return Err(Error::IndexBelowMinusOne(n));
    }
    if n == -1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let deg = Degree::new(n as usize)?;
    Ok(recur(deg.get(), z, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)))
}

/// `U_n(x)` for real `x` and `n >= -1`.
pub fn cheb_u_real(n: i64, x: f64) -> Result<f64> {
    cheb_u(n, Complex64::new(x, 0.0)).map(|v| v.re)
}

fn pell_terms(n: Degree, z: Complex64) -> (Complex64, Complex64) {
    let t = cheb_t(n, z);
    let u = match n.get() {
        0 => Complex64::new(0.0, 0.0),
        m => recur(m - 1, z, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
    };
    (t * t, (z * z - 1.0) * u * u)
}

/// `|T_n(z)^2 - (z^2 - 1) U_{n-1}(z)^2 - 1|`.
pub fn cheb_pell_residual(n: Degree, z: Complex64) -> f64 {
    let (t2, u2) = pell_terms(n, z);
    (t2 - u2 - 1.0).norm()
}

/// The Pell residual divided by `max(1, |T_n^2|, |(z^2 - 1) U_{n-1}^2|)`.
///
/// Off the interval both squares grow like `|z + sqrt(z^2 - 1)|^{2n}` and the
/// absolute residual is dominated by cancellation; this is the quantity that
/// stays at rounding level everywhere.
pub fn cheb_pell_residual_relative(n: Degree, z: Complex64) -> f64 {
    let (t2, u2) = pell_terms(n, z);
    (t2 - u2 - 1.0).norm() / t2.norm().max(u2.norm()).max(1.0)
}

/// Extreme points `cos(k pi / n)` of `T_n` on `[-1, 1]`, in increasing order.
///
/// For `n = 0` the single point `1` is returned.
pub fn chebyshev_extrema(n: usize) -> Vec<f64> {
    if n == 0 {
        return alloc::vec![1.0];
    }
    let mut pts: Vec<f64> = (0..=n)
        .map(|k| {
            // exact endpoints and midpoint
            if k == 0 {
                1.0
            } else if k == n {
                -1.0
            } else if 2 * k == n {
                0.0
            } else {
                libm::cos(k as f64 * PI / n as f64)
            }
        })
        .collect();
    pts.reverse();
    pts
}
