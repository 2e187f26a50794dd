use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::ComplexPoly;
use crate::error::{Error, Result};

/// Strictly increasing nodes in `[-1, 1]`, at least two of them.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet(Vec<f64>);

impl NodeSet {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidNodes("need at least two nodes"));
        }
        if nodes.iter().any(|x| !x.is_finite() || !(-1.0..=1.0).contains(x)) {
            return Err(Error::InvalidNodes("nodes must lie in [-1, 1]"));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidNodes("nodes must be strictly increasing"));
        }
        Ok(Self(nodes))
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; a node set has at least two points.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Image under `x -> -x`, re-sorted.
    pub fn reflect(&self) -> Self {
        Self(self.0.iter().rev().map(|x| -x).collect())
    }

    /// Whether both `-1` and `+1` are nodes.
    pub fn has_endpoints(&self) -> bool {
        self.0[0] == -1.0 && self.0[self.0.len() - 1] == 1.0
    }

    /// Index of a node within `tol` of `z`, if any.
    pub fn node_near(&self, z: Complex64, tol: f64) -> Option<usize> {
        if z.im.abs() > tol {
            return None;
        }
        self.0.iter().position(|&x| (z - x).norm() <= tol)
    }
}

/// `l_i(z) = prod_{j != i} (z - x_j) / (x_i - x_j)`.
pub fn lagrange_eval(nodes: &NodeSet, i: usize, z: Complex64) -> Result<Complex64> {
    let xs = nodes.as_slice();
    if i >= xs.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: xs.len(),
        });
    }
    Ok(lagrange_unchecked(xs, i, z))
}

fn lagrange_unchecked(xs: &[f64], i: usize, z: Complex64) -> Complex64 {
    let xi = xs[i];
    xs.iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .fold(Complex64::new(1.0, 0.0), |acc, (_, &xj)| acc * (z - xj) / (xi - xj))
}

/// All fundamental Lagrange polynomials evaluated at `z`.
pub fn lagrange_basis_at(nodes: &NodeSet, z: Complex64) -> Vec<Complex64> {
    let xs = nodes.as_slice();
    (0..xs.len()).map(|i| lagrange_unchecked(xs, i, z)).collect()
}

/// `sum_i coefficients[i] * l_i(z)` as a [`ComplexPoly`].
///
/// The combination is sampled at `m = len(nodes)` Chebyshev-Gauss points and
/// converted to Chebyshev coefficients by the discrete cosine transform,
/// which is exact for degree `<= m - 1`. Trailing coefficients at rounding
/// level are dropped.
pub fn from_lagrange_combination(
    nodes: &NodeSet,
    coefficients: &[Complex64],
) -> Result<ComplexPoly> {
    let m = nodes.len();
    if coefficients.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            found: coefficients.len(),
        });
    }
    let xs = nodes.as_slice();
    let angles: Vec<f64> = (0..m).map(|k| PI * (k as f64 + 0.5) / m as f64).collect();
    let samples: Vec<Complex64> = angles
        .iter()
        .map(|&theta| {
            let y = Complex64::new(libm::cos(theta), 0.0);
            coefficients
                .iter()
                .enumerate()
                .map(|(i, &ci)| ci * lagrange_unchecked(xs, i, y))
                .sum()
        })
        .collect();
    let mut coeffs: Vec<Complex64> = (0..m)
        .map(|j| {
            let s: Complex64 = samples
                .iter()
                .zip(&angles)
                .map(|(f, &theta)| f * libm::cos(j as f64 * theta))
                .sum();
            s * (2.0 / m as f64)
        })
        .collect();
    coeffs[0] *= 0.5;
    Ok(ComplexPoly::new(coeffs).trimmed(TRIM_REL))
}

const TRIM_REL: f64 = 64.0 * f64::EPSILON;
