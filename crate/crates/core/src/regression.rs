//! Monte Carlo check of the prediction variance of least-squares polynomial
//! regression.
//!
//! Observations `y_k = p_theta(x_k) + eps_k` with `eps_k ~ N(0, sigma^2)` are
//! fitted by least squares in the Chebyshev basis; the fitted polynomial at
//! `z0` has variance `sigma^2 / m * K_n^{mu_X}(z0, z0)` where `mu_X` is the
//! empirical measure of the `m` sample points. For complex `z0` the variance
//! of the complex statistic is taken as `E|v - E v|^2`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::chebyshev::Degree;
use crate::error::{Error, Result};
use crate::measure::{chebyshev_vector, christoffel, DiscreteMeasure};

/// Generator used for the noise; recorded in simulation output.
pub const GENERATOR: &str = "ChaCha8Rng(seed_from_u64(seed), stream = replicate index) + StandardNormal";

/// Convention for complex prediction points; recorded in simulation output.
pub const COMPLEX_VARIANCE_CONVENTION: &str = "var(v) = E|v - E v|^2 (real noise, complex evaluation point)";

pub const MIN_REPLICATES: usize = 1000;

const RANK_TOL: f64 = 1e-12;

/// Dense real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `A^T A`, row-major `cols x cols`.
    pub fn gram(&self) -> Vec<f64> {
        let c = self.cols;
        let mut g = vec![0.0; c * c];
        for i in 0..self.rows {
            let r = self.row(i);
            for a in 0..c {
                for b in 0..c {
                    g[a * c + b] += r[a] * r[b];
                }
            }
        }
        g
    }
}

/// Rows `(T_0(x_k), ..., T_n(x_k))`, one per sample point.
pub fn vandermonde(points: &[f64], n: Degree) -> Result<Matrix> {
    let mut distinct = points.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < n.dim() {
        return Err(Error::InsufficientSupport {
            support: distinct.len(),
            needed: n.dim(),
        });
    }
    let mut data = Vec::with_capacity(points.len() * n.dim());
    for &x in points {
        data.extend(chebyshev_vector(n, Complex64::new(x, 0.0)).iter().map(|c| c.re));
    }
    Matrix::new(points.len(), n.dim(), data)
}

/// Householder QR of a tall matrix.
#[derive(Debug, Clone)]
pub struct Qr {
    rows: usize,
    cols: usize,
    // reflector vectors (column k stored from row k), then R above the diagonal
    a: Vec<f64>,
    diag: Vec<f64>,
}

impl Qr {
    pub fn new(m: &Matrix) -> Result<Self> {
        let (rows, cols) = (m.rows, m.cols);
        if rows < cols {
            return Err(Error::InsufficientSupport {
                support: rows,
                needed: cols,
            });
        }
        // column-major working copy
        let mut a = vec![0.0; rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                a[j * rows + i] = m.get(i, j);
            }
        }
        let mut diag = vec![0.0; cols];
        for k in 0..cols {
            let col = &mut a[k * rows..(k + 1) * rows];
            let norm = libm::sqrt(col[k..].iter().map(|v| v * v).sum::<f64>());
            let alpha = if col[k] > 0.0 { -norm } else { norm };
            col[k] -= alpha;
            let vnorm = libm::sqrt(col[k..].iter().map(|v| v * v).sum::<f64>());
            if vnorm > 0.0 {
                col[k..].iter_mut().for_each(|v| *v /= vnorm);
            }
            diag[k] = alpha;
            let (head, tail) = a.split_at_mut((k + 1) * rows);
            let v = &head[k * rows + k..(k + 1) * rows];
            for j in 0..(cols - k - 1) {
                let cj = &mut tail[j * rows + k..(j + 1) * rows];
                let dot: f64 = v.iter().zip(cj.iter()).map(|(a, b)| a * b).sum();
                cj.iter_mut().zip(v).for_each(|(c, v)| *c -= 2.0 * dot * v);
            }
        }
        let scale = diag.iter().map(|d| d.abs()).fold(0.0, f64::max);
        if let Some(column) = diag.iter().position(|d| !(d.abs() > RANK_TOL * scale)) {
            return Err(Error::RankDeficient {
                column,
                pivot: diag[column],
            });
        }
        Ok(Self {
            rows,
            cols,
            a,
            diag,
        })
    }

    /// Minimizer of `|y - A x|_2`.
    pub fn solve(&self, y: &[f64]) -> Vec<f64> {
        let (rows, cols) = (self.rows, self.cols);
        let mut b = y.to_vec();
        for k in 0..cols {
            let v = &self.a[k * rows + k..(k + 1) * rows];
            let dot: f64 = v.iter().zip(&b[k..]).map(|(a, b)| a * b).sum();
            b[k..].iter_mut().zip(v).for_each(|(b, v)| *b -= 2.0 * dot * v);
        }
        let mut x = vec![0.0; cols];
        for k in (0..cols).rev() {
            let mut s = b[k];
            for j in (k + 1)..cols {
                s -= self.a[j * rows + k] * x[j];
            }
            x[k] = s / self.diag[k];
        }
        x
    }
}

/// Least-squares coefficients through Householder QR (no normal equations).
pub fn least_squares_fit(v: &Matrix, y: &[f64]) -> Result<Vec<f64>> {
    if y.len() != v.rows {
        return Err(Error::LengthMismatch {
            expected: v.rows,
            found: y.len(),
        });
    }
    Ok(Qr::new(v)?.solve(y))
}

/// Integer replication of a design for a simulated regression experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionPlan {
    design: DiscreteMeasure,
    m: usize,
    counts: Vec<usize>,
    sigma: f64,
    theta: Vec<f64>,
}

impl RegressionPlan {
    /// Replicates `design` to `m` observations by largest-remainder rounding
    /// (ties to the lower index).
    pub fn new(design: DiscreteMeasure, m: usize, sigma: f64, theta: Vec<f64>) -> Result<Self> {
        let raw: Vec<f64> = design.weights().iter().map(|w| w * m as f64).collect();
        let mut counts: Vec<usize> = raw.iter().map(|r| libm::floor(*r) as usize).collect();
        let assigned: usize = counts.iter().sum();
        let mut order: Vec<usize> = (0..counts.len()).collect();
        order.sort_by(|&i, &j| {
            let (ri, rj) = (raw[i] - libm::floor(raw[i]), raw[j] - libm::floor(raw[j]));
            rj.total_cmp(&ri).then(i.cmp(&j))
        });
        for &i in order.iter().take(m.saturating_sub(assigned)) {
            counts[i] += 1;
        }
        Self::with_counts(design, counts, sigma, theta)
    }

    /// Uses explicit counts, which must be within `1` of `m * w_i` each.
    pub fn with_counts(
        design: DiscreteMeasure,
        counts: Vec<usize>,
        sigma: f64,
        theta: Vec<f64>,
    ) -> Result<Self> {
        if counts.len() != design.support_size() {
            return Err(Error::LengthMismatch {
                expected: design.support_size(),
                found: counts.len(),
            });
        }
        if counts.contains(&0) {
            return Err(Error::InvalidParameter("every node needs at least one observation"));
        }
        let m: usize = counts.iter().sum();
        let off = counts
            .iter()
            .zip(design.weights())
            .any(|(&c, w)| (c as f64 - w * m as f64).abs() > 1.0 + 1e-9);
        if off {
            return Err(Error::InvalidParameter("counts deviate from weights by more than 1/m"));
        }
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter("sigma must be finite and non-negative"));
        }
        if theta.is_empty() || theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter("theta must be a non-empty finite vector"));
        }
        Degree::new(theta.len() - 1)?;
        if theta.len() > design.support_size() {
            return Err(Error::InsufficientSupport {
                support: design.support_size(),
                needed: theta.len(),
            });
        }
        Ok(Self {
            design,
            m,
            counts,
            sigma,
            theta,
        })
    }

    pub fn design(&self) -> &DiscreteMeasure {
        &self.design
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn degree(&self) -> Degree {
        Degree::new(self.theta.len() - 1).expect("validated on construction")
    }

    /// Sample points, each node repeated by its count.
    pub fn sample_points(&self) -> Vec<f64> {
        self.design
            .nodes()
            .as_slice()
            .iter()
            .zip(&self.counts)
            .flat_map(|(&x, &c)| core::iter::repeat_n(x, c))
            .collect()
    }

    /// Empirical measure `mu_X` with weights `count_i / m`.
    pub fn realized_measure(&self) -> DiscreteMeasure {
        let raw: Vec<f64> = self.counts.iter().map(|&c| c as f64).collect();
        DiscreteMeasure::normalized(self.design.nodes().clone(), &raw)
            .expect("counts are positive")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceEstimate {
    /// Sample variance `sum |v_r - mean|^2 / (R - 1)`.
    pub empirical: f64,
    /// `sigma^2 / m * K_n^{mu_X}(z0, z0)`.
    pub predicted: f64,
    pub replicates: usize,
    /// `|empirical - predicted| / predicted` (0 when both vanish).
    pub rel_error: f64,
    /// Approximate 95% half-width of `empirical`.
    pub half_width: f64,
}

/// Everything a replicate needs, factored once.
#[derive(Debug, Clone)]
pub struct Simulation {
    qr: Qr,
    mean: Vec<f64>,
    basis_z0: Vec<Complex64>,
    sigma: f64,
    seed: u64,
    predicted: f64,
}

impl Simulation {
    pub fn new(plan: &RegressionPlan, z0: Complex64, seed: u64) -> Result<Self> {
        let n = plan.degree();
        let v = vandermonde(&plan.sample_points(), n)?;
        let qr = Qr::new(&v)?;
        let k = christoffel(&plan.realized_measure(), n, z0)?.value;
        Ok(Self {
            qr,
            mean: v.mul_vec(&plan.theta),
            basis_z0: chebyshev_vector(n, z0),
            sigma: plan.sigma,
            seed,
            predicted: plan.sigma * plan.sigma / plan.m as f64 * k,
        })
    }

    pub fn predicted(&self) -> f64 {
        self.predicted
    }

    /// Fitted polynomial at `z0` for replicate `r`; depends only on `(seed, r)`.
    pub fn replicate(&self, r: u64) -> Complex64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(r);
        let y: Vec<f64> = self
            .mean
            .iter()
            .map(|mu| {
                let e: f64 = StandardNormal.sample(&mut rng);
                mu + self.sigma * e
            })
            .collect();
        let theta = self.qr.solve(&y);
        theta.iter().zip(&self.basis_z0).map(|(t, p)| p * *t).sum()
    }

    /// Reduces replicate values (in replicate order) to an estimate.
    pub fn summarize(&self, values: &[Complex64]) -> VarianceEstimate {
        let r = values.len() as f64;
        // shift by the first value so identical replicates give exactly zero
        let shift = values.first().copied().unwrap_or_default();
        let mean: Complex64 = values.iter().map(|v| v - shift).sum::<Complex64>() / r;
        let (s2, s4) = values.iter().fold((0.0, 0.0), |(s2, s4), v| {
            let d = (v - shift - mean).norm_sqr();
            (s2 + d, s4 + d * d)
        });
        let empirical = s2 / (r - 1.0);
        let m2 = s2 / r;
        let half_width = 1.96 * libm::sqrt(((s4 / r) - m2 * m2).max(0.0) / r);
        let rel_error = if self.predicted > 0.0 {
            (empirical - self.predicted).abs() / self.predicted
        } else if empirical == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        VarianceEstimate {
            empirical,
            predicted: self.predicted,
            replicates: values.len(),
            rel_error,
            half_width,
        }
    }
}

/// Sequential Monte Carlo estimate of the predictor variance at `z0`.
pub fn mc_predictor_variance(
    plan: &RegressionPlan,
    z0: Complex64,
    replicates: usize,
    seed: u64,
) -> Result<VarianceEstimate> {
    if replicates < MIN_REPLICATES {
        return Err(Error::InvalidParameter("at least 1000 replicates are required"));
    }
    let sim = Simulation::new(plan, z0, seed)?;
    let values: Vec<Complex64> = (0..replicates as u64).map(|r| sim.replicate(r)).collect();
    Ok(sim.summarize(&values))
}
