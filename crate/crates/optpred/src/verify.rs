//! Self-checks runnable from the command line.

use std::fmt;

use optpred_core::chebyshev::{cheb_t_real, Degree};
use optpred_core::design::OptimizerOptions;
use optpred_core::imaginary::{imaginary_support, optimal_k_value, pell_residual, ImaginaryParams};
use optpred_core::measure::directional_derivative_k;
use optpred_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::parallel::Parallel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Pell,
    Equivalence,
    Duality,
    All,
}

/// Worst observed value of one quantity against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            worst: 0.0,
            tolerance,
        }
    }

    fn record(&mut self, v: f64) {
        // NaN must fail the check
        if v.is_nan() || v > self.worst {
            self.worst = if v.is_nan() { f64::INFINITY } else { v };
        }
    }

    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub cases: usize,
    pub checks: Vec<Check>,
    /// Anything that stopped a case from being checked at all.
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} cases)", self.suite, self.cases)?;
        for c in &self.checks {
            let mark = if c.passed() { "ok" } else { "FAIL" };
            write!(f, "\n  {mark:4} {:<28} worst {:.3e}  (tol {:.0e})", c.name, c.worst, c.tolerance)?;
        }
        for e in &self.failures {
            write!(f, "\n  FAIL {e}")?;
        }
        Ok(())
    }
}

/// Imaginary-axis Pell identity at 10^4 random `(n <= 20, a in (0, 10], x in [-1, 1])`.
pub fn pell(seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut check = Check::new("|Q|^2 - (x^2-1) R^2 - 1", 1e-9);
    let mut failures = Vec::new();
    let cases = 10_000;
    for _ in 0..cases {
        let n = rng.random_range(1..=20);
        let a = 10.0 * (1.0 - rng.random::<f64>());
        let x = rng.random_range(-1.0..=1.0);
        match pell_residual(n, a, x) {
            Ok(r) => check.record(r),
            Err(e) => failures.push(format!("n={n} a={a} x={x}: {e}")),
        }
    }
    SuiteReport {
        suite: "pell",
        cases,
        checks: vec![check],
        failures,
    }
}

/// Optimizer against the closed forms: imaginary points `a i` and the
/// Chebyshev extrema at real points.
pub fn equivalence(seed: u64, runner: &Parallel) -> SuiteReport {
    let opts = OptimizerOptions {
        seed,
        ..OptimizerOptions::default()
    };
    let mut nodes = Check::new("node distance", 1e-6);
    let mut k_rel = Check::new("relative K error", 1e-8);
    let mut failures = Vec::new();
    let mut cases = 0;
    let mut compare = |n: usize, z0: Complex64, expected: Vec<f64>, k: f64| {
        cases += 1;
        match runner.optimize_support(Degree::new(n).unwrap(), z0, &opts) {
            Ok(d) => {
                let dist = d
                    .nodes()
                    .iter()
                    .zip(&expected)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max);
                nodes.record(dist);
                k_rel.record((d.k_value - k).abs() / k);
            }
            Err(e) => failures.push(format!("n={n} z0={z0}: {e}")),
        }
    };
    for &a in &[0.25, 1.0, 4.0] {
        for n in 1..=8 {
            let p = ImaginaryParams::new(n, a).unwrap();
            let support = imaginary_support(&p).expect("closed-form support").into_vec();
            compare(n, p.z0(), support, optimal_k_value(&p));
        }
    }
    for &x in &[1.5, 2.0, -3.0] {
        for n in 1..=8 {
            let ext = optpred_core::chebyshev::chebyshev_extrema(n);
            let t = cheb_t_real(Degree::new(n).unwrap(), x);
            compare(n, Complex64::new(x, 0.0), ext, t * t);
        }
    }
    SuiteReport {
        suite: "equivalence",
        cases,
        checks: vec![nodes, k_rel],
        failures,
    }
}

/// Minimax duality and first-order optimality on certified designs at
/// random exterior points.
pub fn duality(seed: u64, runner: &Parallel) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = OptimizerOptions {
        seed,
        ..OptimizerOptions::default()
    };
    let mut gap = Check::new("|K - |P(z0)|^2| / K", 1e-8);
    let mut l2 = Check::new("| ||P||_mu - 1 |", 1e-10);
    let mut deriv = Check::new("-min directional derivative", 1e-9);
    let mut failures = Vec::new();
    let cases = 24;
    let mut certified = 0;
    for _ in 0..cases {
        let z0 = loop {
            let z = Complex64::new(rng.random_range(-2.5..2.5), rng.random_range(-2.5..2.5));
            if z.im.abs() > 0.1 || z.re.abs() > 1.1 {
                break z;
            }
        };
        let n = rng.random_range(1..=7);
        let d = match runner.optimize_support(Degree::new(n).unwrap(), z0, &opts) {
            Ok(d) => d,
            Err(e) => {
                failures.push(format!("n={n} z0={z0}: {e}"));
                continue;
            }
        };
        if !d.is_certified() {
            // duality is only claimed for certified designs
            continue;
        }
        certified += 1;
        gap.record((d.k_value - d.extremal_poly.eval(z0).norm_sqr()).abs() / d.k_value);
        l2.record((d.certificate.l2_mu_norm - 1.0).abs());
        for _ in 0..100 {
            let a = rng.random_range(-1.0..=1.0);
            match directional_derivative_k(&d.measure, a, d.n, z0) {
                Ok(v) => deriv.record(-v),
                Err(e) => failures.push(format!("derivative at n={n} z0={z0}: {e}")),
            }
        }
    }
    if certified == 0 {
        failures.push("no design certified".into());
    }
    SuiteReport {
        suite: "duality",
        cases,
        checks: vec![gap, l2, deriv],
        failures,
    }
}

pub fn run(suite: Suite, seed: u64, runner: &Parallel) -> Vec<SuiteReport> {
    match suite {
        Suite::Pell => vec![pell(seed)],
        Suite::Equivalence => vec![equivalence(seed, runner)],
        Suite::Duality => vec![duality(seed, runner)],
        Suite::All => vec![pell(seed), equivalence(seed, runner), duality(seed, runner)],
    }
}
