//! Classification outcomes with explicit certainty levels.

use serde::{Deserialize, Serialize};

use crate::json;
use crate::matrix::{ComplexMatrix, ComplexVector};
use crate::separability::SeparableDecomposition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    CertifiedYes,
    CertifiedNo,
    NumericYes,
    NumericNo,
    Inconclusive,
}

impl Status {
    pub fn is_yes(self) -> bool {
        matches!(self, Status::CertifiedYes | Status::NumericYes)
    }

    pub fn is_no(self) -> bool {
        matches!(self, Status::CertifiedNo | Status::NumericNo)
    }

    pub fn is_certified(self) -> bool {
        matches!(self, Status::CertifiedYes | Status::CertifiedNo)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::CertifiedYes => "certified_yes",
            Status::CertifiedNo => "certified_no",
            Status::NumericYes => "numeric_yes",
            Status::NumericNo => "numeric_no",
            Status::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Evidence backing a verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Smallest eigenvalue of the tested matrix, with its eigenvector when
    /// that eigenvalue is negative.
    Spectrum {
        min_eigenvalue: f64,
        #[serde(with = "json::opt_vector", default, skip_serializing_if = "Option::is_none")]
        eigenvector: Option<ComplexVector>,
    },
    /// Both a matrix and its partial transpose were found PSD.
    PptSpectra { min_eigenvalue: f64, partial_transpose_min_eigenvalue: f64 },
    /// Hermitian operator `w` with `w ≥ 0`, `(id⊗t)w ≥ 0` and `Tr(x w) = value < 0`.
    ConeWitness {
        #[serde(with = "json::square")]
        witness: ComplexMatrix,
        value: f64,
    },
    /// `x = P + (id⊗t)Q` with `P, Q ≥ 0`.
    DecomposableSplit {
        #[serde(with = "json::square")]
        p: ComplexMatrix,
        #[serde(with = "json::square")]
        q: ComplexMatrix,
        residual: f64,
    },
    /// Product vector `x ⊗ y` with `<x⊗y, G x⊗y> = value`.
    ProductWitness {
        #[serde(with = "json::vector")]
        x: ComplexVector,
        #[serde(with = "json::vector")]
        y: ComplexVector,
        value: f64,
    },
    /// Block matrix on which a functional evaluates negative.
    BlockWitness {
        #[serde(with = "json::square")]
        blocks: ComplexMatrix,
        value: f64,
    },
    /// PPT holds in a dimension pair where PPT is equivalent to separability.
    PptExactness {
        d1: usize,
        d2: usize,
        min_eigenvalue: f64,
        partial_transpose_min_eigenvalue: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        decomposition: Option<SeparableDecomposition>,
    },
    /// Trace norm of the realigned matrix exceeds one.
    Realignment { value: f64 },
    /// Explicit convex decomposition into product states.
    Separable { decomposition: SeparableDecomposition, distance: f64 },
    /// Entanglement-breaking form: rank-one Kraus operators `V_k = v_k ⊗ w̄_k`.
    RankOneKraus {
        #[serde(with = "json::square_list")]
        kraus: Vec<ComplexMatrix>,
        reconstruction_error: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        decomposition: Option<SeparableDecomposition>,
    },
    /// Several certificates that jointly justify the verdict.
    Composite { parts: Vec<Certificate> },
}

impl Certificate {
    /// The serialized `kind` tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Spectrum { .. } => "spectrum",
            Certificate::PptSpectra { .. } => "ppt_spectra",
            Certificate::ConeWitness { .. } => "cone_witness",
            Certificate::DecomposableSplit { .. } => "decomposable_split",
            Certificate::ProductWitness { .. } => "product_witness",
            Certificate::BlockWitness { .. } => "block_witness",
            Certificate::PptExactness { .. } => "ppt_exactness",
            Certificate::Realignment { .. } => "realignment",
            Certificate::Separable { .. } => "separable",
            Certificate::RankOneKraus { .. } => "rank_one_kraus",
            Certificate::Composite { .. } => "composite",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    /// Scalar evidence: a minimum eigenvalue, a distance, a witness value.
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn finite(residual: f64) -> f64 {
    if residual.is_finite() {
        residual
    } else if residual.is_nan() {
        0.0
    } else {
        residual.signum() * f64::MAX
    }
}

impl Verdict {
    pub fn certified_yes(residual: f64, certificate: Certificate) -> Self {
        Self { status: Status::CertifiedYes, residual: finite(residual), certificate: Some(certificate), note: None }
    }

    pub fn certified_no(residual: f64, certificate: Certificate) -> Self {
        Self { status: Status::CertifiedNo, residual: finite(residual), certificate: Some(certificate), note: None }
    }

    pub fn numeric(status: Status, residual: f64, certificate: Option<Certificate>) -> Self {
        debug_assert!(!status.is_certified());
        Self { status, residual: finite(residual), certificate, note: None }
    }

    pub fn inconclusive(residual: f64) -> Self {
        Self::numeric(Status::Inconclusive, residual, None)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_yes(&self) -> bool {
        self.status.is_yes()
    }

    pub fn is_no(&self) -> bool {
        self.status.is_no()
    }

    /// Certified statuses carry a certificate and every residual is finite.
    pub fn is_well_formed(&self) -> bool {
        self.residual.is_finite() && (!self.status.is_certified() || self.certificate.is_some())
    }
}
