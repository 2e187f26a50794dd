//! Multi-start search for the support minimizing `Λ(z0)`.
//!
//! Endpoints stay pinned at `±1`. The `n - 1` interior nodes are encoded as
//! `n - 1` log-gaps `u_k = ln(h_k / h_{n-1})` of the `n` consecutive spacings,
//! which keeps every simplex vertex a valid, strictly increasing node set.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::simplex::{nelder_mead, NelderMeadOptions};
use super::{ensure_exterior, extremal_signed_poly, Design};
use crate::chebyshev::{chebyshev_extrema, Degree};
use crate::error::{Error, Result};
use crate::polynomial::NodeSet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    pub seed: u64,
    /// Starts per round: the Chebyshev extrema plus `starts - 1` dithered copies.
    pub starts: usize,
    /// Half-width of the uniform dither applied to each interior node.
    pub dither: f64,
    /// Evaluation budget per start.
    pub max_evals: usize,
    /// Simplex diameter (in log-gap coordinates) that counts as converged.
    pub xtol: f64,
    pub initial_step: f64,
    /// Extra rounds of dithered starts tried while no design certifies.
    pub max_restarts: usize,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            starts: 8,
            dither: 0.05,
            max_evals: 20_000,
            xtol: 1e-12,
            initial_step: 0.25,
            max_restarts: 2,
        }
    }
}

/// Outcome of one local search.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalResult {
    pub interior: Vec<f64>,
    pub lebesgue: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Executes the local searches of one round. Implementations must return
/// results in the order of `starts`.
pub trait StartRunner {
    fn run<F>(&self, starts: &[Vec<f64>], search: F) -> Vec<LocalResult>
    where
        F: Fn(&[f64]) -> LocalResult + Sync + Send;
}

/// Runs starts one after another.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl StartRunner for Sequential {
    fn run<F>(&self, starts: &[Vec<f64>], search: F) -> Vec<LocalResult>
    where
        F: Fn(&[f64]) -> LocalResult + Sync + Send,
    {
        starts.iter().map(|s| search(s)).collect()
    }
}

/// Full node vector `[-1, ..., 1]` from log-gap coordinates.
pub fn gaps_to_nodes(u: &[f64]) -> Vec<f64> {
    let gaps: Vec<f64> = u.iter().map(|&v| libm::exp(v)).chain(core::iter::once(1.0)).collect();
    let total: f64 = gaps.iter().sum();
    let mut nodes = Vec::with_capacity(gaps.len() + 1);
    nodes.push(-1.0);
    let mut acc = 0.0;
    for g in &gaps[..gaps.len() - 1] {
        acc += g;
        nodes.push(-1.0 + 2.0 * acc / total);
    }
    nodes.push(1.0);
    nodes
}

/// Inverse of [`gaps_to_nodes`] for strictly increasing interior nodes.
pub fn nodes_to_gaps(interior: &[f64]) -> Vec<f64> {
    let mut full = Vec::with_capacity(interior.len() + 2);
    full.push(-1.0);
    full.extend_from_slice(interior);
    full.push(1.0);
    let h: Vec<f64> = full.windows(2).map(|w| w[1] - w[0]).collect();
    let last = h[h.len() - 1];
    h[..h.len() - 1].iter().map(|g| libm::log(g / last)).collect()
}

// Λ(z0) on an unvalidated node vector; +inf when nodes collide.
fn lebesgue_raw(xs: &[f64], z0: Complex64) -> f64 {
    let dist: Vec<f64> = xs.iter().map(|&x| (z0 - x).norm()).collect();
    let mut total = 0.0;
    for (i, &xi) in xs.iter().enumerate() {
        let mut prod = 1.0;
        for (j, &xj) in xs.iter().enumerate() {
            if j != i {
                prod *= dist[j] / (xi - xj).abs();
            }
        }
        total += prod;
    }
    if total.is_finite() {
        total
    } else {
        f64::INFINITY
    }
}

const MIN_START_GAP: f64 = 1e-6;
const DITHER_TRIES: usize = 64;

/// Interior starting nodes for round `round`.
///
/// Round 0 begins with the interior Chebyshev extrema; every other start is a
/// copy dithered by `U(-d, d)` per node, with `d = dither * (round + 1)`,
/// drawn from its own ChaCha8 stream of `seed`.
pub fn start_points(n: Degree, opts: &OptimizerOptions, round: usize) -> Vec<Vec<f64>> {
    let cheb = chebyshev_extrema(n.get());
    let base: Vec<f64> = cheb[1..cheb.len() - 1].to_vec();
    let scale = opts.dither * (round + 1) as f64;
    (0..opts.starts.max(1))
        .map(|i| {
            if round == 0 && i == 0 {
                return base.clone();
            }
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream((round * opts.starts.max(1) + i) as u64);
            for _ in 0..DITHER_TRIES {
                let mut x: Vec<f64> = base
                    .iter()
                    .map(|b| b + scale * rng.random_range(-1.0..1.0))
                    .collect();
                x.sort_by(f64::total_cmp);
                let ok = core::iter::once(-1.0)
                    .chain(x.iter().copied())
                    .chain(core::iter::once(1.0))
                    .collect::<Vec<f64>>()
                    .windows(2)
                    .all(|w| w[1] - w[0] >= MIN_START_GAP);
                if ok {
                    return x;
                }
            }
            base.clone()
        })
        .collect()
}

/// Nelder-Mead from `start`, restarted from its own minimum with a smaller
/// simplex until the value stops improving or the budget runs out.
pub fn local_search(z0: Complex64, start: &[f64], opts: &OptimizerOptions) -> LocalResult {
    let objective = |u: &[f64]| lebesgue_raw(&gaps_to_nodes(u), z0);
    let mut u = nodes_to_gaps(start);
    let mut step = opts.initial_step;
    let mut used = 0;
    let mut best = f64::INFINITY;
    let mut converged = false;
    while used < opts.max_evals {
        let nm = NelderMeadOptions {
            initial_step: step,
            xtol: opts.xtol,
            max_evals: opts.max_evals - used,
        };
        let m = nelder_mead(objective, &u, &nm);
        used += m.evals;
        converged = m.converged;
        let improved = m.fx < best;
        if improved {
            best = m.fx;
            u = m.x;
        }
        if !improved || !converged || u.is_empty() {
            break;
        }
        step *= 0.1;
        if step < 1e3 * opts.xtol {
            break;
        }
    }
    let nodes = gaps_to_nodes(&u);
    let (interior, lebesgue) = if best.is_finite() {
        polish(z0, &nodes[1..nodes.len() - 1], best)
    } else {
        (nodes[1..nodes.len() - 1].to_vec(), best)
    };
    LocalResult {
        interior,
        lebesgue,
        evaluations: used,
        converged,
    }
}

const POLISH_ITERS: usize = 10;
const POLISH_FD_STEP: f64 = 1e-7;
const POLISH_SLACK: f64 = 1e-13;

// Slopes of |P|^2 at the interior nodes, P the signed polynomial of `interior`.
fn stationarity(interior: &[f64], z0: Complex64) -> Option<Vec<f64>> {
    let mut xs = Vec::with_capacity(interior.len() + 2);
    xs.push(-1.0);
    xs.extend_from_slice(interior);
    xs.push(1.0);
    let nodes = NodeSet::new(xs).ok()?;
    let p = extremal_signed_poly(&nodes, z0).ok()?;
    let dp = p.derivative();
    Some(
        interior
            .iter()
            .map(|&x| (p.eval_real(x).conj() * dp.eval_real(x)).re)
            .collect(),
    )
}

// Solves `a x = b` in place by Gaussian elimination with partial pivoting.
fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let m = b.len();
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col] == 0.0 || !a[piv][col].is_finite() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..m {
            let f = a[row][col] / a[col][col];
            for k in col..m {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = alloc::vec![0.0; m];
    for row in (0..m).rev() {
        let tail: f64 = (row + 1..m).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Newton steps on the stationarity of `|P|^2` at the interior nodes, which
/// sharpens a simplex minimum (accurate only to about `sqrt(eps)` on the flat
/// valley of `Λ`) to near machine precision. Steps that break the node order
/// or raise `Λ` are rejected.
pub fn polish(z0: Complex64, interior: &[f64], lebesgue: f64) -> (Vec<f64>, f64) {
    let mut x = interior.to_vec();
    let mut lam = lebesgue;
    for _ in 0..POLISH_ITERS {
        let Some(f) = stationarity(&x, z0) else { break };
        let m = x.len();
        let mut jac = alloc::vec![alloc::vec![0.0; m]; m];
        let mut ok = true;
        for j in 0..m {
            let (mut lo, mut hi) = (x.clone(), x.clone());
            lo[j] -= POLISH_FD_STEP;
            hi[j] += POLISH_FD_STEP;
            match (stationarity(&lo, z0), stationarity(&hi, z0)) {
                (Some(fl), Some(fh)) => {
                    for i in 0..m {
                        jac[i][j] = (fh[i] - fl[i]) / (2.0 * POLISH_FD_STEP);
                    }
                }
                _ => ok = false,
            }
        }
        if !ok {
            break;
        }
        let mut rhs = f.clone();
        let Some(step) = solve_dense(&mut jac, &mut rhs) else { break };
        let next: Vec<f64> = x.iter().zip(&step).map(|(a, d)| a - d).collect();
        let ordered = core::iter::once(-1.0)
            .chain(next.iter().copied())
            .chain(core::iter::once(1.0))
            .collect::<Vec<f64>>()
            .windows(2)
            .all(|w| w[1] > w[0]);
        if !ordered {
            break;
        }
        let mut full = Vec::with_capacity(m + 2);
        full.push(-1.0);
        full.extend_from_slice(&next);
        full.push(1.0);
        let next_lam = lebesgue_raw(&full, z0);
        if !(next_lam <= lam * (1.0 + POLISH_SLACK)) {
            break;
        }
        let size = step.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
        x = next;
        lam = next_lam.min(lam);
        if size <= 1e-15 {
            break;
        }
    }
    (x, lam)
}

/// [`optimize_support_with`] running starts sequentially.
pub fn optimize_support(n: Degree, z0: Complex64, opts: &OptimizerOptions) -> Result<Design> {
    optimize_support_with(n, z0, opts, &Sequential)
}

/// Minimizes `Λ(z0)` over supports `-1 < x_1 < ... < x_{n-1} < 1` with
/// endpoints pinned and returns the Hoel-Levine design of the best one.
///
/// Among all local results the smallest `Λ` whose design certifies wins;
/// without any certified design, the smallest `Λ` overall. Further rounds of
/// starts (up to `max_restarts`) run only while nothing certifies. If no local
/// search converged either, the best design is returned inside
/// [`Error::NotConverged`].
///
/// For `z0 = a i` with `a < 0` the search runs at `-z0` and the support is
/// reflected; the returned design is rebuilt and certified at `z0` itself.
pub fn optimize_support_with<R: StartRunner>(
    n: Degree,
    z0: Complex64,
    opts: &OptimizerOptions,
    runner: &R,
) -> Result<Design> {
    ensure_exterior(z0)?;
    if n.get() == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1"));
    }
    let reflect = z0.re == 0.0 && z0.im < 0.0;
    let work_z = if reflect { -z0 } else { z0 };

    let finish = |interior: &[f64]| -> Result<Design> {
        let mut xs = Vec::with_capacity(interior.len() + 2);
        xs.push(-1.0);
        xs.extend_from_slice(interior);
        xs.push(1.0);
        let mut nodes = NodeSet::new(xs)?;
        if reflect {
            nodes = nodes.reflect();
        }
        Design::from_nodes(nodes, z0)
    };

    if n.get() == 1 {
        return finish(&[]);
    }

    let mut results: Vec<LocalResult> = Vec::new();
    let mut chosen: Option<(Design, f64)> = None;
    for round in 0..=opts.max_restarts {
        let starts = start_points(n, opts, round);
        results.extend(runner.run(&starts, |s| local_search(work_z, s, opts)));

        chosen = None;
        let mut fallback: Option<(Design, f64)> = None;
        for r in &results {
            let Ok(d) = finish(&r.interior) else { continue };
            let lam = r.lebesgue;
            if d.is_certified() {
                if chosen.as_ref().is_none_or(|(_, l)| lam < *l) {
                    chosen = Some((d, lam));
                }
            } else if fallback.as_ref().is_none_or(|(_, l)| lam < *l) {
                fallback = Some((d, lam));
            }
        }
        if chosen.is_some() {
            break;
        }
        chosen = fallback;
    }

    let Some((design, _)) = chosen else {
        return Err(Error::InvalidParameter("no admissible support found"));
    };
    if !design.is_certified() && !results.iter().any(|r| r.converged) {
        return Err(Error::NotConverged(Box::new(design)));
    }
    Ok(design)
}
