//! JSON wire formats.
//!
//! Every type here is a plain mirror of a core value. Conversions into core
//! types re-run the core validation, so a file that parses is not trusted
//! until it has been rebuilt.

use optpred_core::chebyshev::Degree;
use optpred_core::design::{Certificate, Design};
use optpred_core::imaginary::{growth_gap, growth_value, q_poly, ImaginaryParams};
use optpred_core::measure::DiscreteMeasure;
use optpred_core::polynomial::{ComplexPoly, NodeSet};
use optpred_core::regression::{
    RegressionPlan, VarianceEstimate, COMPLEX_VARIANCE_CONVENTION, GENERATOR,
};
use optpred_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn complex([re, im]: [f64; 2]) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub basis: String,
    pub coeffs: Vec<[f64; 2]>,
}

impl From<&ComplexPoly> for PolyJson {
    fn from(p: &ComplexPoly) -> Self {
        Self {
            basis: "chebyshev".into(),
            coeffs: p.coeffs().iter().map(|&c| pair(c)).collect(),
        }
    }
}

impl TryFrom<&PolyJson> for ComplexPoly {
    type Error = CliError;

    fn try_from(p: &PolyJson) -> Result<Self> {
        if p.basis != "chebyshev" {
            return Err(CliError::Input(format!("unsupported polynomial basis {:?}", p.basis)));
        }
        Ok(ComplexPoly::new(p.coeffs.iter().map(|&c| complex(c)).collect()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureJson {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl From<&DiscreteMeasure> for MeasureJson {
    fn from(mu: &DiscreteMeasure) -> Self {
        Self {
            nodes: mu.nodes().as_slice().to_vec(),
            weights: mu.weights().to_vec(),
        }
    }
}

impl TryFrom<&MeasureJson> for DiscreteMeasure {
    type Error = CliError;

    fn try_from(m: &MeasureJson) -> Result<Self> {
        Ok(DiscreteMeasure::new(NodeSet::new(m.nodes.clone())?, m.weights.clone())?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub certified: bool,
    pub sup_norm: f64,
    pub max_violation: f64,
    pub l2_mu_norm: f64,
    pub on_support_moduli: Vec<f64>,
    pub duality_gap: f64,
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        Self {
            certified: c.is_certified(),
            sup_norm: c.sup_norm,
            max_violation: c.max_violation,
            l2_mu_norm: c.l2_mu_norm,
            on_support_moduli: c.on_support_moduli.clone(),
            duality_gap: c.duality_gap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignJson {
    pub n: usize,
    pub z0: [f64; 2],
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    #[serde(rename = "K_value")]
    pub k_value: f64,
    pub poly: PolyJson,
    pub certificate: CertificateJson,
}

impl From<&Design> for DesignJson {
    fn from(d: &Design) -> Self {
        Self {
            n: d.n.get(),
            z0: pair(d.z0),
            nodes: d.nodes().to_vec(),
            weights: d.weights().to_vec(),
            k_value: d.k_value,
            poly: (&d.extremal_poly).into(),
            certificate: (&d.certificate).into(),
        }
    }
}

impl TryFrom<&DesignJson> for Design {
    type Error = CliError;

    /// Rebuilds the design and recomputes its certificate; the stored
    /// certificate is ignored.
    fn try_from(d: &DesignJson) -> Result<Self> {
        let measure = DiscreteMeasure::new(NodeSet::new(d.nodes.clone())?, d.weights.clone())?;
        let poly = ComplexPoly::try_from(&d.poly)?;
        Ok(Design::assemble(
            measure,
            complex(d.z0),
            Degree::new(d.n)?,
            d.k_value,
            poly,
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapJson {
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthJson {
    pub n: usize,
    pub a: f64,
    pub growth_value: f64,
    pub q_poly: PolyJson,
    pub gap: GapJson,
}

impl GrowthJson {
    pub fn compute(params: &ImaginaryParams) -> Result<Self> {
        let n = params.n().get();
        let a = params.a();
        // Q_n is built for a > 0; reflect x -> -x for the lower half plane
        let q = q_poly(n, a.abs())?;
        let q = if a < 0.0 { q.reflect() } else { q };
        let gap = growth_gap(params);
        Ok(Self {
            n,
            a,
            growth_value: growth_value(params),
            q_poly: (&q).into(),
            gap: GapJson {
                lhs: gap.lhs,
                rhs: gap.rhs,
            },
        })
    }
}

/// Regression plan file: a design measure replicated to `m` observations.
///
/// `counts` is optional; when absent the weights are rounded by largest
/// remainder. Weights are normalized on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanJson {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub m: usize,
    pub sigma: f64,
    pub theta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<usize>>,
}

impl From<&RegressionPlan> for PlanJson {
    fn from(p: &RegressionPlan) -> Self {
        Self {
            nodes: p.design().nodes().as_slice().to_vec(),
            weights: p.design().weights().to_vec(),
            m: p.m(),
            sigma: p.sigma(),
            theta: p.theta().to_vec(),
            counts: Some(p.counts().to_vec()),
        }
    }
}

impl TryFrom<&PlanJson> for RegressionPlan {
    type Error = CliError;

    fn try_from(p: &PlanJson) -> Result<Self> {
        let mu = DiscreteMeasure::normalized(NodeSet::new(p.nodes.clone())?, &p.weights)?;
        let plan = match &p.counts {
            Some(counts) => {
                let plan = RegressionPlan::with_counts(mu, counts.clone(), p.sigma, p.theta.clone())?;
                if plan.m() != p.m {
                    return Err(CliError::Input(format!(
                        "counts sum to {} but m = {}",
                        plan.m(),
                        p.m
                    )));
                }
                plan
            }
            None => RegressionPlan::new(mu, p.m, p.sigma, p.theta.clone())?,
        };
        Ok(plan)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationMeta {
    pub generator: String,
    pub complex_variance_convention: String,
    /// Half-width of the 95% interval for the empirical variance.
    pub half_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationJson {
    pub plan: PlanJson,
    pub z0: [f64; 2],
    pub replicates: usize,
    pub seed: u64,
    pub empirical: f64,
    pub predicted: f64,
    pub rel_error: f64,
    pub metadata: SimulationMeta,
}

impl SimulationJson {
    pub fn new(plan: &RegressionPlan, z0: Complex64, seed: u64, est: &VarianceEstimate) -> Self {
        Self {
            plan: plan.into(),
            z0: pair(z0),
            replicates: est.replicates,
            seed,
            empirical: est.empirical,
            predicted: est.predicted,
            rel_error: est.rel_error,
            metadata: SimulationMeta {
                generator: GENERATOR.into(),
                complex_variance_convention: COMPLEX_VARIANCE_CONVENTION.into(),
                half_width: est.half_width,
            },
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}
