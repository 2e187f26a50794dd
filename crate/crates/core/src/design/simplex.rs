//! Nelder-Mead downhill simplex.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub initial_step: f64,
    /// Stop once every vertex is within this (max-norm) of the best one.
    pub xtol: f64,
    pub max_evals: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evals: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` starting from an axis-aligned simplex around `x0`.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    let mut evals = 1;
    let f0 = f(x0);
    if dim == 0 {
        return Minimum {
            x: Vec::new(),
            fx: f0,
            evals,
            converged: true,
        };
    }

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), f0));
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        let fv = f(&v);
        evals += 1;
        simplex.push((v, fv));
    }

    let mut converged = false;
    let mut centroid = vec![0.0; dim];
    let point = |c: &[f64], towards: &[f64], t: f64| -> Vec<f64> {
        c.iter().zip(towards).map(|(c, w)| c + t * (w - c)).collect()
    };

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].0.clone();
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(&best).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if diameter < opts.xtol {
            converged = true;
            break;
        }
        if evals >= opts.max_evals {
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for (v, _) in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / dim as f64;
            }
        }
        let (worst, f_worst) = simplex[dim].clone();
        let f_best = simplex[0].1;
        let f_second = simplex[dim - 1].1;

        let xr = point(&centroid, &worst, -REFLECT);
        let fr = f(&xr);
        evals += 1;

        if fr < f_best {
            let xe = point(&centroid, &xr, EXPAND);
            let fe = f(&xe);
            evals += 1;
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < f_second {
            simplex[dim] = (xr, fr);
            continue;
        }
        let (xc, fc, accept) = if fr < f_worst {
            let xc = point(&centroid, &xr, CONTRACT);
            let fc = f(&xc);
            (xc, fc, fc <= fr)
        } else {
            let xc = point(&centroid, &worst, CONTRACT);
            let fc = f(&xc);
            (xc, fc, fc < f_worst)
        };
        evals += 1;
        if accept {
            simplex[dim] = (xc, fc);
            continue;
        }
        for (v, fv) in simplex[1..].iter_mut() {
            for (x, b) in v.iter_mut().zip(&best) {
                *x = b + SHRINK * (*x - b);
            }
            *fv = f(v);
            evals += 1;
        }
    }

    let (x, fx) = simplex.swap_remove(0);
    Minimum {
        x,
        fx,
        evals,
        converged,
    }
}
