//! Optimal prediction designs on `[-1, 1]`.
//!
//! For a fixed support `-1 = x_0 < ... < x_n = 1` the best weights are
//! `w_i ∝ |l_i(z0)|` (Hoel-Levine), giving `K = Λ(z0)^2` where `Λ` is the
//! Lebesgue function, and the normalized kernel polynomial becomes the signed
//! Lagrange combination `sum_i sgn(l_i(z0)) l_i` with `sgn(z) = conj(z)/|z|`.
//! The support is optimal exactly when that polynomial has sup-norm one on
//! `[-1, 1]`; [`certify`] checks this numerically.

mod optimize;
pub mod simplex;

use alloc::vec::Vec;

use num_complex::Complex64;

pub use optimize::{
    gaps_to_nodes, local_search, nodes_to_gaps, optimize_support, optimize_support_with, start_points,
    LocalResult, OptimizerOptions, Sequential, StartRunner,
};

use crate::chebyshev::Degree;
use crate::error::{Error, Result};
use crate::measure::{christoffel, DiscreteMeasure};
use crate::polynomial::{from_lagrange_combination, lagrange_basis_at, sup_norm_interval, ComplexPoly, NodeSet};

/// Threshold on both `max_violation` and `duality_gap` for certification.
pub const CERTIFY_TOL: f64 = 1e-8;

/// Points with `|Im z| < EXTERIOR_TOL` and `Re z` in `[-1, 1]` count as on the interval.
pub const EXTERIOR_TOL: f64 = 1e-12;

/// Numerical evidence that a design is optimal.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    /// `max_{[-1,1]} |P|`.
    pub sup_norm: f64,
    /// `max(0, sup_norm - 1)`.
    pub max_violation: f64,
    /// `(integral |P|^2 dmu)^(1/2)`, which is 1 for any kernel polynomial.
    pub l2_mu_norm: f64,
    /// `|P(x_i)|` at each support node.
    pub on_support_moduli: Vec<f64>,
    /// `|K - |P(z0)|^2| / K`.
    pub duality_gap: f64,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.max_violation <= CERTIFY_TOL && self.duality_gap <= CERTIFY_TOL
    }
}

/// A candidate optimal prediction measure for `z0` with its extremal polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub measure: DiscreteMeasure,
    pub z0: Complex64,
    pub n: Degree,
    /// `K_n^mu(z0, z0)` from the Gram matrix.
    pub k_value: f64,
    pub extremal_poly: ComplexPoly,
    pub certificate: Certificate,
}

impl Design {
    /// Hoel-Levine design on `nodes` (which must contain both endpoints).
    pub fn from_nodes(nodes: NodeSet, z0: Complex64) -> Result<Self> {
        if !nodes.has_endpoints() {
            return Err(Error::InvalidNodes("design support must contain -1 and +1"));
        }
        let n = Degree::new(nodes.len() - 1)?;
        let weights = hoel_levine_weights(&nodes, z0)?;
        let extremal_poly = extremal_signed_poly(&nodes, z0)?;
        let measure = DiscreteMeasure::normalized(nodes, &weights)?;
        let k_value = christoffel(&measure, n, z0)?.value;
        Self::assemble(measure, z0, n, k_value, extremal_poly)
    }

    /// Builds a design from stored parts and recomputes its certificate.
    /// A `k_value` that disagrees with the measure beyond [`CERTIFY_TOL`] is rejected.
    pub fn assemble(
        measure: DiscreteMeasure,
        z0: Complex64,
        n: Degree,
        k_value: f64,
        extremal_poly: ComplexPoly,
    ) -> Result<Self> {
        if measure.support_size() != n.dim() {
            return Err(Error::LengthMismatch {
                expected: n.dim(),
                found: measure.support_size(),
            });
        }
        if !measure.nodes().has_endpoints() {
            return Err(Error::InvalidNodes("design support must contain -1 and +1"));
        }
        let k_measure = christoffel(&measure, n, z0)?.value;
        if !((k_value - k_measure).abs() <= CERTIFY_TOL * k_measure) {
            return Err(Error::InvalidParameter("K_value does not match the measure"));
        }
        let mut design = Self {
            measure,
            z0,
            n,
            k_value,
            extremal_poly,
            certificate: Certificate {
                sup_norm: f64::NAN,
                max_violation: f64::NAN,
                l2_mu_norm: f64::NAN,
                on_support_moduli: Vec::new(),
                duality_gap: f64::NAN,
            },
        };
        design.certificate = certify(&design)?;
        Ok(design)
    }

    #[inline]
    pub fn nodes(&self) -> &[f64] {
        self.measure.nodes().as_slice()
    }

    /// The `n - 1` nodes strictly inside `(-1, 1)`.
    pub fn interior_nodes(&self) -> &[f64] {
        let xs = self.nodes();
        &xs[1..xs.len() - 1]
    }

    #[inline]
    pub fn weights(&self) -> &[f64] {
        self.measure.weights()
    }

    #[inline]
    pub fn is_certified(&self) -> bool {
        self.certificate.is_certified()
    }

    /// `Λ(z0)` of the support.
    pub fn lebesgue(&self) -> f64 {
        lebesgue_at(self.measure.nodes(), self.z0)
    }
}

/// Rejects points on `[-1, 1]` (within [`EXTERIOR_TOL`] of the real axis).
pub fn ensure_exterior(z0: Complex64) -> Result<()> {
    let on_interval = z0.im.abs() < EXTERIOR_TOL && (-1.0..=1.0).contains(&z0.re);
    if on_interval || !z0.re.is_finite() || !z0.im.is_finite() {
        return Err(Error::NotExterior {
            re: z0.re,
            im: z0.im,
        });
    }
    Ok(())
}

fn signed_moduli(nodes: &NodeSet, z0: Complex64) -> Result<Vec<Complex64>> {
    if let Some(index) = nodes.node_near(z0, 0.0) {
        return Err(Error::PointOnNode { index });
    }
    let ls = lagrange_basis_at(nodes, z0);
    if let Some(index) = ls.iter().position(|l| !(l.norm() > 0.0)) {
        return Err(Error::PointOnNode { index });
    }
    Ok(ls)
}

/// `w_i = |l_i(z0)| / sum_j |l_j(z0)|`.
pub fn hoel_levine_weights(nodes: &NodeSet, z0: Complex64) -> Result<Vec<f64>> {
    let ls = signed_moduli(nodes, z0)?;
    let total: f64 = ls.iter().map(|l| l.norm()).sum();
    Ok(ls.iter().map(|l| l.norm() / total).collect())
}

/// Lebesgue function `Λ(z0) = sum_i |l_i(z0)|`.
pub fn lebesgue_at(nodes: &NodeSet, z0: Complex64) -> f64 {
    lagrange_basis_at(nodes, z0).iter().map(|l| l.norm()).sum()
}

/// `sum_i sgn(l_i(z0)) l_i(z)` with `sgn(z) = conj(z) / |z|`.
pub fn extremal_signed_poly(nodes: &NodeSet, z0: Complex64) -> Result<ComplexPoly> {
    let signs: Vec<Complex64> = signed_moduli(nodes, z0)?
        .iter()
        .map(|l| l.conj() / l.norm())
        .collect();
    from_lagrange_combination(nodes, &signs)
}

/// Sup-norm, `L^2(mu)` norm, on-support moduli and duality gap of a design.
pub fn certify(design: &Design) -> Result<Certificate> {
    let p = &design.extremal_poly;
    let sup_norm = sup_norm_interval(p)?.value;
    let on_support_moduli = design.nodes().iter().map(|&x| p.eval_real(x).norm()).collect();
    let at_z0 = p.eval(design.z0).norm_sqr();
    // K from the measure itself, so the gap certifies the weights too
    let k = christoffel(&design.measure, design.n, design.z0)?.value;
    Ok(Certificate {
        sup_norm,
        max_violation: (sup_norm - 1.0).max(0.0),
        l2_mu_norm: libm::sqrt(design.measure.l2_norm_sqr(p)),
        on_support_moduli,
        duality_gap: (k - at_z0).abs() / k,
    })
}
