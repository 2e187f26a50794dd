//! Discrete probability measures on `[-1, 1]`, their Gram matrices in the
//! Chebyshev basis, and the reproducing kernel `K_n^mu(z0, z0)`.
//!
//! The kernel follows the convention `K(w, z) = sum_k conj(q_k(w)) q_k(z)`
//! over a `mu`-orthonormal basis, so the normalized kernel polynomial
//! `P(z) = K(z0, z) / sqrt(K(z0, z0))` is real and positive at `z0`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::chebyshev::Degree;
use crate::error::{Error, Result};
use crate::polynomial::{lagrange_basis_at, ComplexPoly, NodeSet};

/// Weights must sum to one within this.
pub const WEIGHT_SUM_TOL: f64 = 1e-14;

/// Cholesky pivots below this mark the Gram matrix as rank deficient.
pub const PIVOT_MIN: f64 = 1e-13;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `sum_i w_i delta_{x_i}` with `w_i > 0`, `sum w_i = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    nodes: NodeSet,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(nodes: NodeSet, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != nodes.len() {
            return Err(Error::LengthMismatch {
                expected: nodes.len(),
                found: weights.len(),
            });
        }
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::InvalidWeights("weights must be positive and finite"));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidWeights("weights must sum to 1"));
        }
        Ok(Self { nodes, weights })
    }

    /// Divides `raw` by its sum before validating.
    pub fn normalized(nodes: NodeSet, raw: &[f64]) -> Result<Self> {
        let sum: f64 = raw.iter().sum();
        if !(sum.is_finite() && sum > 0.0) {
            return Err(Error::InvalidWeights("weights must be positive and finite"));
        }
        Self::new(nodes, raw.iter().map(|w| w / sum).collect())
    }

    pub fn uniform(nodes: NodeSet) -> Self {
        let w = 1.0 / nodes.len() as f64;
        let weights = vec![w; nodes.len()];
        Self { nodes, weights }
    }

    #[inline]
    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    #[inline]
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    /// `integral |p|^2 dmu`.
    pub fn l2_norm_sqr(&self, p: &ComplexPoly) -> f64 {
        self.nodes
            .as_slice()
            .iter()
            .zip(&self.weights)
            .map(|(&x, w)| w * p.eval_real(x).norm_sqr())
            .sum()
    }

    /// `t delta_a + (1 - t) mu`, for `a` in `[-1, 1]` and `0 <= t < 1`.
    pub fn blend_point(&self, a: f64, t: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&t) {
            return Err(Error::InvalidParameter("blend fraction must lie in [0, 1)"));
        }
        if !(-1.0..=1.0).contains(&a) {
            return Err(Error::InvalidParameter("blend point must lie in [-1, 1]"));
        }
        let mut pairs: Vec<(f64, f64)> = self
            .nodes
            .as_slice()
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| (x, (1.0 - t) * w))
            .collect();
        match pairs.iter_mut().find(|(x, _)| *x == a) {
            Some(p) => p.1 += t,
            None if t > 0.0 => {
                pairs.push((a, t));
                pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
            }
            None => {}
        }
        let (xs, ws): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        Self::normalized(NodeSet::new(xs)?, &ws)
    }

    /// Pushforward under `x -> -x`.
    pub fn reflect(&self) -> Self {
        Self {
            nodes: self.nodes.reflect(),
            weights: self.weights.iter().rev().copied().collect(),
        }
    }
}

/// Hermitian moment matrix `G[i][j] = integral T_i conj(T_j) dmu`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    entries: Vec<Complex64>,
    basis_degree: Degree,
}

impl GramMatrix {
    #[inline]
    pub fn size(&self) -> usize {
        self.basis_degree.dim()
    }

    #[inline]
    pub fn basis_degree(&self) -> Degree {
        self.basis_degree
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.size() + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// `max |G[i][j] - conj(G[j][i])|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.size();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Lower-triangular `L` with `G = L L*`.
    pub fn cholesky(&self) -> Result<Cholesky> {
        let n = self.size();
        let mut l = vec![ZERO; n * n];
        for j in 0..n {
            let mut d = self.get(j, j).re;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if !(d >= PIVOT_MIN) {
                return Err(Error::RankDeficient {
                    column: j,
                    pivot: d,
                });
            }
            let d = libm::sqrt(d);
            l[j * n + j] = Complex64::new(d, 0.0);
            for i in (j + 1)..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / d;
            }
        }
        Ok(Cholesky { n, l })
    }
}

/// Cholesky factor of a Hermitian positive definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    l: Vec<Complex64>,
}

impl Cholesky {
    /// Solves `L y = b`.
    pub fn forward(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.l[i * n + k] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        y
    }

    /// Solves `L* x = y`.
    pub fn backward(&self, y: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x = y.to_vec();
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in (i + 1)..n {
                s -= self.l[k * n + i].conj() * x[k];
            }
            x[i] = s / self.l[i * n + i];
        }
        x
    }

    /// Solves `G x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        self.backward(&self.forward(b))
    }
}

/// `K_n^mu(z0, z0)` together with the degree and point it was evaluated for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: f64,
    pub degree: Degree,
    pub z0: Complex64,
}

/// `(T_0(z), ..., T_n(z))`.
pub fn chebyshev_vector(n: Degree, z: Complex64) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(n.dim());
    v.push(Complex64::new(1.0, 0.0));
    if n.get() >= 1 {
        v.push(z);
    }
    for k in 2..=n.get() {
        let next = z * 2.0 * v[k - 1] - v[k - 2];
        v.push(next);
    }
    v
}

pub fn gram(mu: &DiscreteMeasure, n: Degree) -> GramMatrix {
    let dim = n.dim();
    let mut entries = vec![ZERO; dim * dim];
    for (&x, &w) in mu.nodes.as_slice().iter().zip(&mu.weights) {
        let p = chebyshev_vector(n, Complex64::new(x, 0.0));
        for i in 0..dim {
            for j in 0..dim {
                entries[i * dim + j] += p[i] * p[j].conj() * w;
            }
        }
    }
    GramMatrix {
        entries,
        basis_degree: n,
    }
}

fn factor(mu: &DiscreteMeasure, n: Degree) -> Result<Cholesky> {
    if mu.support_size() < n.dim() {
        return Err(Error::InsufficientSupport {
            support: mu.support_size(),
            needed: n.dim(),
        });
    }
    gram(mu, n).cholesky()
}

/// `p*(z0) G^{-1} p(z0)` through the Cholesky factor of the Gram matrix.
pub fn christoffel(mu: &DiscreteMeasure, n: Degree, z0: Complex64) -> Result<KernelValue> {
    let chol = factor(mu, n)?;
    let y = chol.forward(&chebyshev_vector(n, z0));
    Ok(KernelValue {
        value: y.iter().map(|c| c.norm_sqr()).sum(),
        degree: n,
        z0,
    })
}

/// `sum_i |l_i(z0)|^2 / w_i`, valid when the degree is `support_size - 1`.
pub fn christoffel_lagrange(mu: &DiscreteMeasure, z0: Complex64) -> f64 {
    lagrange_basis_at(&mu.nodes, z0)
        .iter()
        .zip(&mu.weights)
        .map(|(l, w)| l.norm_sqr() / w)
        .sum()
}

/// `P_n^{mu,z0}(z) = K_n^mu(z0, z) / sqrt(K_n^mu(z0, z0))`.
pub fn kernel_poly(mu: &DiscreteMeasure, n: Degree, z0: Complex64) -> Result<ComplexPoly> {
    let chol = factor(mu, n)?;
    let v = chol.solve(&chebyshev_vector(n, z0));
    // p*(z0) G^{-1} p(z) = sum_j conj(v_j) T_j(z) since G^{-1} is Hermitian.
    let k: f64 = chebyshev_vector(n, z0)
        .iter()
        .zip(&v)
        .map(|(p, v)| (p.conj() * v).re)
        .sum();
    let scale = 1.0 / libm::sqrt(k);
    Ok(ComplexPoly::new(v.iter().map(|c| c.conj() * scale).collect()))
}

/// `K_n^{mu_t}(z0, z0)` for `mu_t = t delta_a + (1 - t) mu0`.
///
/// `t` may be slightly negative (a signed measure) as long as the Gram matrix
/// `(1 - t) G(mu0) + t p(a) p(a)*` stays positive definite, which is what a
/// central difference in `t` at 0 needs.
pub fn christoffel_along_segment(
    mu0: &DiscreteMeasure,
    a: f64,
    t: f64,
    n: Degree,
    z0: Complex64,
) -> Result<f64> {
    if mu0.support_size() < n.dim() {
        return Err(Error::InsufficientSupport {
            support: mu0.support_size(),
            needed: n.dim(),
        });
    }
    let mut g = gram(mu0, n);
    let pa = chebyshev_vector(n, Complex64::new(a, 0.0));
    let dim = n.dim();
    for i in 0..dim {
        for j in 0..dim {
            let e = &mut g.entries[i * dim + j];
            *e = *e * (1.0 - t) + pa[i] * pa[j].conj() * t;
        }
    }
    let y = g.cholesky()?.forward(&chebyshev_vector(n, z0));
    Ok(y.iter().map(|c| c.norm_sqr()).sum())
}

/// Derivative at `t = 0` of `t -> K_n^{mu_t}(z0, z0)` along
/// `mu_t = t delta_a + (1 - t) mu0`, i.e. `K (1 - |P(a)|^2)`.
pub fn directional_derivative_k(
    mu0: &DiscreteMeasure,
    a: f64,
    n: Degree,
    z0: Complex64,
) -> Result<f64> {
    let chol = factor(mu0, n)?;
    let y0 = chol.forward(&chebyshev_vector(n, z0));
    let ya = chol.forward(&chebyshev_vector(n, Complex64::new(a, 0.0)));
    let k: f64 = y0.iter().map(|c| c.norm_sqr()).sum();
    // P(a) sqrt(K) = p*(z0) G^{-1} p(a) = <L^{-1} p(a), L^{-1} p(z0)>
    let cross: Complex64 = ya.iter().zip(&y0).map(|(a, z)| z.conj() * a).sum();
    Ok(k - cross.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn deg(n: usize) -> Degree {
        Degree::new(n).unwrap()
    }

    fn nodes(xs: &[f64]) -> NodeSet {
        NodeSet::new(xs.to_vec()).unwrap()
    }

    fn three_uniform() -> DiscreteMeasure {
        DiscreteMeasure::uniform(nodes(&[-1.0, 0.0, 1.0]))
    }

    #[test]
    fn measure_validation() {
        let s = nodes(&[-1.0, 1.0]);
        assert!(DiscreteMeasure::new(s.clone(), vec![0.5]).is_err());
        assert!(DiscreteMeasure::new(s.clone(), vec![1.5, -0.5]).is_err());
        assert!(DiscreteMeasure::new(s.clone(), vec![0.5, 0.4]).is_err());
        assert!(DiscreteMeasure::new(s.clone(), vec![0.5, 0.5]).is_ok());
        let m = DiscreteMeasure::normalized(s, &[1.0, 3.0]).unwrap();
        assert_eq!(m.weights(), &[0.25, 0.75]);
    }

    #[test]
    fn gram_examples() {
        let two = DiscreteMeasure::uniform(nodes(&[-1.0, 1.0]));
        let g = gram(&two, deg(1));
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g.get(i, j) - c(want, 0.0)).norm() < 1e-15);
            }
        }
        let g = gram(&three_uniform(), deg(2));
        assert!((g.get(0, 2).re - 1.0 / 3.0).abs() < 1e-15);
        assert!(g.hermitian_defect() < 1e-14);
        let g0 = gram(&three_uniform(), deg(0));
        assert_eq!(g0.size(), 1);
        assert!((g0.get(0, 0).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn christoffel_examples() {
        let z0 = c(2.0, 0.0);
        let hl = DiscreteMeasure::new(
            nodes(&[-1.0, 0.0, 1.0]),
            vec![1.0 / 7.0, 3.0 / 7.0, 3.0 / 7.0],
        )
        .unwrap();
        let k = christoffel(&hl, deg(2), z0).unwrap().value;
        assert!((k - 49.0).abs() / 49.0 < 1e-12);
        assert!((christoffel_lagrange(&hl, z0) - 49.0).abs() / 49.0 < 1e-12);

        let k = christoffel(&three_uniform(), deg(2), z0).unwrap().value;
        assert!((k - 57.0).abs() / 57.0 < 1e-12);

        // at a support node, K = 1 / w_i
        for (i, &x) in hl.nodes().as_slice().iter().enumerate() {
            let k = christoffel(&hl, deg(2), c(x, 0.0)).unwrap().value;
            assert!((k - 1.0 / hl.weights()[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_deficiency_is_reported() {
        assert!(matches!(
            christoffel(&three_uniform(), deg(3), c(2.0, 0.0)),
            Err(Error::InsufficientSupport {
                support: 3,
                needed: 4
            })
        ));
        // nearly coincident nodes make the Gram matrix numerically singular
        let m = DiscreteMeasure::uniform(nodes(&[-1.0, 0.0, 1e-12, 1.0]));
        assert!(matches!(
            christoffel(&m, deg(3), c(2.0, 0.0)),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn kernel_poly_two_point_imaginary() {
        let two = DiscreteMeasure::uniform(nodes(&[-1.0, 1.0]));
        for &a in &[0.3, 1.0, 4.0] {
            let p = kernel_poly(&two, deg(1), c(0.0, a)).unwrap();
            let s = libm::sqrt(a * a + 1.0);
            let want = ComplexPoly::new(vec![c(1.0 / s, 0.0), c(0.0, -a / s)]);
            assert!(p.max_coeff_distance(&want) < 1e-14);
            assert!((two.l2_norm_sqr(&p) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn kernel_poly_hoel_levine_two_point_real() {
        // weights |l_i(2)| = (1/2, 3/2) -> (1/4, 3/4)
        let m = DiscreteMeasure::new(nodes(&[-1.0, 1.0]), vec![0.25, 0.75]).unwrap();
        let p = kernel_poly(&m, deg(1), c(2.0, 0.0)).unwrap();
        assert!(p.max_coeff_distance(&ComplexPoly::identity()) < 1e-14);
    }

    #[test]
    fn blend_point_inserts_or_accumulates() {
        let m = three_uniform();
        let b = m.blend_point(0.5, 0.25).unwrap();
        assert_eq!(b.nodes().as_slice(), &[-1.0, 0.0, 0.5, 1.0]);
        assert!((b.weights()[2] - 0.25).abs() < 1e-15);
        let b = m.blend_point(0.0, 0.25).unwrap();
        assert_eq!(b.support_size(), 3);
        assert!((b.weights()[1] - (0.25 + 0.75 / 3.0)).abs() < 1e-15);
        assert_eq!(m.blend_point(0.3, 0.0).unwrap(), m);
        assert!(m.blend_point(0.3, 1.0).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let mu = three_uniform();
        let z0 = c(2.0, 0.0);
        let n = deg(2);
        let h = 1e-6;
        let d = directional_derivative_k(&mu, 0.5, n, z0).unwrap();
        let k_plus = christoffel_along_segment(&mu, 0.5, h, n, z0).unwrap();
        let k_minus = christoffel_along_segment(&mu, 0.5, -h, n, z0).unwrap();
        let k_blend = christoffel(&mu.blend_point(0.5, h).unwrap(), n, z0).unwrap().value;
        assert!((k_plus - k_blend).abs() / k_blend < 1e-13);
        let fd = (k_plus - k_minus) / (2.0 * h);
        assert!((d - fd).abs() / fd.abs() < 1e-5, "{d} vs {fd}");
    }
}
