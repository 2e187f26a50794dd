//! Rayon-backed runners. Results are gathered in input order, so every
//! parallel entry point returns exactly what its sequential counterpart does.

use std::env;

use optpred_core::chebyshev::Degree;
use optpred_core::design::{optimize_support_with, Design, LocalResult, OptimizerOptions, StartRunner};
use optpred_core::regression::{RegressionPlan, Simulation, VarianceEstimate, MIN_REPLICATES};
use optpred_core::{Complex64, Error, Result};
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "OPTPRED_THREADS";

/// Worker count from `OPTPRED_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

fn pool(threads: Option<usize>) -> ThreadPool {
    let mut b = ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    b.build().expect("thread pool")
}

/// Runs the starts of a round on a thread pool.
pub struct Parallel {
    pool: ThreadPool,
}

impl Parallel {
    /// Pool sized by `OPTPRED_THREADS`, or rayon's default.
    pub fn from_env() -> Self {
        Self::with_threads(thread_cap())
    }

    pub fn with_threads(threads: Option<usize>) -> Self {
        Self {
            pool: pool(threads),
        }
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Monte Carlo predictor variance; identical to the sequential
    /// `mc_predictor_variance` for the same seed.
    pub fn mc_predictor_variance(
        &self,
        plan: &RegressionPlan,
        z0: Complex64,
        replicates: usize,
        seed: u64,
    ) -> Result<VarianceEstimate> {
        if replicates < MIN_REPLICATES {
            return Err(Error::InvalidParameter("at least 1000 replicates are required"));
        }
        let sim = Simulation::new(plan, z0, seed)?;
        let values: Vec<Complex64> = self.pool.install(|| {
            (0..replicates as u64)
                .into_par_iter()
                .map(|r| sim.replicate(r))
                .collect()
        });
        Ok(sim.summarize(&values))
    }

    pub fn optimize_support(
        &self,
        n: Degree,
        z0: Complex64,
        opts: &OptimizerOptions,
    ) -> Result<Design> {
        optimize_support_with(n, z0, opts, self)
    }
}

impl Default for Parallel {
    fn default() -> Self {
        Self::from_env()
    }
}

impl StartRunner for Parallel {
    fn run<F>(&self, starts: &[Vec<f64>], search: F) -> Vec<LocalResult>
    where
        F: Fn(&[f64]) -> LocalResult + Sync + Send,
    {
        self.pool
            .install(|| starts.par_iter().map(|s| search(s)).collect())
    }
}
