//! Command-line surface.
//!
//! Exit codes: 0 certified / passed, 1 rejected input, 2 numerical failure
//! (including a design that does not certify or a simulation outside 5%).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use optpred_core::chebyshev::Degree;
use optpred_core::design::{Design, OptimizerOptions};
use optpred_core::imaginary::{q_poly, ImaginaryParams};
use optpred_core::measure::{gram, DiscreteMeasure};
use optpred_core::regression::RegressionPlan;
use optpred_core::{Complex64, Error as CoreError};

use crate::error::{CliError, Result};
use crate::format::{
    from_json, to_json, CertificateJson, DesignJson, GrowthJson, MeasureJson, PlanJson,
    SimulationJson,
};
use crate::parallel::Parallel;
use crate::verify::{self, Suite};

/// Simulations pass when the empirical variance is this close to the prediction.
pub const SIMULATION_TOL: f64 = 0.05;

#[derive(Debug, Parser)]
#[command(name = "optpred", version, about = "Optimal prediction measures and polynomials of extremal growth")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal support and weights for degree n at an exterior point z0.
    Design {
        #[arg(long)]
        n: usize,
        #[arg(long, required = true, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
        z0: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Multi-start count per round.
        #[arg(long, default_value_t = OptimizerOptions::default().starts)]
        starts: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Closed-form extremal growth at a i.
    Growth {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Run built-in verification suites.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo predictor variance for a regression plan file.
    Simulate {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long, required = true, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
        z0: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        replicates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Reload a design file and recompute its certificate.
    Certify {
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gram matrix of a measure file, as CSV.
    Gram {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn point(z0: &[f64]) -> Complex64 {
    // clap guarantees exactly two values
    Complex64::new(z0[0], z0[1])
}

fn design_output(design: &Design, output: &Output) -> Result<()> {
    let text = match output.format {
        Format::Json => to_json(&DesignJson::from(design))?,
        Format::Csv => crate::csv::poly_samples(&design.extremal_poly),
    };
    emit(output.out.as_deref(), &text)
}

pub fn cmd_design(n: usize, z0: Complex64, seed: u64, starts: usize, output: &Output) -> Result<u8> {
    let opts = OptimizerOptions {
        seed,
        starts,
        ..OptimizerOptions::default()
    };
    match Parallel::from_env().optimize_support(Degree::new(n)?, z0, &opts) {
        Ok(design) => {
            design_output(&design, output)?;
            if design.is_certified() {
                Ok(0)
            } else {
                eprintln!(
                    "design did not certify: max_violation {:.3e}, duality_gap {:.3e}",
                    design.certificate.max_violation, design.certificate.duality_gap
                );
                Ok(2)
            }
        }
        Err(CoreError::NotConverged(best)) => {
            design_output(&best, output)?;
            eprintln!("optimizer did not converge; best iterate written");
            Ok(2)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn cmd_growth(n: usize, a: f64, output: &Output) -> Result<u8> {
    let params = ImaginaryParams::new(n, a)?;
    let report = GrowthJson::compute(&params)?;
    let text = match output.format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let q = q_poly(n, a.abs())?;
            crate::csv::poly_samples(&if a < 0.0 { q.reflect() } else { q })
        }
    };
    emit(output.out.as_deref(), &text)?;
    Ok(0)
}

pub fn cmd_verify(suite: Suite, seed: u64) -> Result<u8> {
    let runner = Parallel::from_env();
    let reports = verify::run(suite, seed, &runner);
    let mut stdout = io::stdout().lock();
    for r in &reports {
        writeln!(stdout, "{r}")?;
    }
    Ok(if reports.iter().all(|r| r.passed()) { 0 } else { 2 })
}

pub fn cmd_simulate(
    plan_path: &Path,
    z0: Complex64,
    replicates: usize,
    seed: u64,
    output: &Output,
) -> Result<u8> {
    let plan_json: PlanJson = from_json(&read(plan_path)?)?;
    let plan = RegressionPlan::try_from(&plan_json)?;
    let est = Parallel::from_env().mc_predictor_variance(&plan, z0, replicates, seed)?;
    let text = match output.format {
        Format::Json => to_json(&SimulationJson::new(&plan, z0, seed, &est))?,
        Format::Csv => format!(
            "replicates,seed,empirical,predicted,rel_error,half_width\n{},{},{},{},{},{}\n",
            est.replicates, seed, est.empirical, est.predicted, est.rel_error, est.half_width
        ),
    };
    emit(output.out.as_deref(), &text)?;
    if est.rel_error <= SIMULATION_TOL {
        Ok(0)
    } else {
        eprintln!("empirical variance is {:.2}% off the prediction", 100.0 * est.rel_error);
        Ok(2)
    }
}

pub fn cmd_certify(path: &Path, out: Option<&Path>) -> Result<u8> {
    let stored: DesignJson = from_json(&read(path)?)?;
    let design = Design::try_from(&stored)?;
    emit(out, &to_json(&CertificateJson::from(&design.certificate))?)?;
    Ok(if design.is_certified() { 0 } else { 2 })
}

pub fn cmd_gram(path: &Path, n: usize, out: Option<&Path>) -> Result<u8> {
    let m: MeasureJson = from_json(&read(path)?)?;
    let mu = DiscreteMeasure::try_from(&m)?;
    emit(out, &crate::csv::gram_entries(&gram(&mu, Degree::new(n)?)))?;
    Ok(0)
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    let result = match cli.command {
        Command::Design {
            n,
            z0,
            seed,
            starts,
            output,
        } => cmd_design(n, point(&z0), seed, starts, &output),
        Command::Growth { n, a, output } => cmd_growth(n, a, &output),
        Command::Verify { suite, seed } => cmd_verify(suite, seed),
        Command::Simulate {
            plan,
            z0,
            replicates,
            seed,
            output,
        } => cmd_simulate(&plan, point(&z0), replicates, seed, &output),
        Command::Certify { design, out } => cmd_certify(&design, out.as_deref()),
        Command::Gram { measure, n, out } => cmd_gram(&measure, n, out.as_deref()),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    })
}
