//! Serializable views of the analysis results.

use opdyn_core::graph::{AgentClassification, AgentStatus};
use opdyn_core::mat::Matrix;
use opdyn_core::spectra::{SpectralReport, Verdict, VerdictKind};
use serde::Serialize;

fn nested(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn status_name(s: AgentStatus) -> &'static str {
    match s {
        AgentStatus::TotallyStubborn => "totally_stubborn",
        AgentStatus::Stubborn => "stubborn",
        AgentStatus::InfluencedByStubborn => "influenced_by_stubborn",
        AgentStatus::Oblivious => "oblivious",
    }
}

#[derive(Debug, Serialize)]
pub struct ClassificationDto {
    pub status: Vec<&'static str>,
    pub permutation: Vec<usize>,
    pub n_prime: usize,
    pub block_sizes: [usize; 2],
}

impl ClassificationDto {
    pub fn new(cls: &AgentClassification) -> Self {
        let n = cls.status.len();
        ClassificationDto {
            status: cls.status.iter().map(|&s| status_name(s)).collect(),
            permutation: cls.permutation.clone(),
            n_prime: cls.n_prime,
            block_sizes: [cls.n_prime, n - cls.n_prime],
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SpectralDto {
    pub rho_lw: f64,
    pub rho_c: f64,
    pub stable: bool,
    pub regular_c: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regular_w22: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fully_regular_w22: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_star: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w22_star: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_star: Option<Vec<Vec<f64>>>,
}

impl SpectralDto {
    pub fn new(report: &SpectralReport) -> Self {
        SpectralDto {
            rho_lw: report.rho_lw,
            rho_c: report.rho_c,
            stable: report.stable,
            regular_c: report.regular_c,
            regular_w22: report.regular_w22,
            fully_regular_w22: report.fully_regular_w22,
            c_star: report.c_star.as_ref().map(nested),
            w22_star: report.w22_star.as_ref().map(nested),
            a_star: report.a_star.as_ref().map(nested),
        }
    }
}

pub fn verdict_name(kind: VerdictKind) -> &'static str {
    match kind {
        VerdictKind::Stable => "stable",
        VerdictKind::Convergent => "convergent",
        VerdictKind::Divergent => "divergent",
    }
}

#[derive(Debug, Serialize)]
pub struct AnalysisDto {
    pub classification: ClassificationDto,
    pub spectral: SpectralDto,
    pub verdict: &'static str,
    pub clause: &'static str,
}

impl AnalysisDto {
    pub fn new(cls: &AgentClassification, report: &SpectralReport, verdict: &Verdict) -> Self {
        AnalysisDto {
            classification: ClassificationDto::new(cls),
            spectral: SpectralDto::new(report),
            verdict: verdict_name(verdict.kind),
            clause: verdict.clause,
        }
    }
}
