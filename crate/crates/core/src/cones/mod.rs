//! The five tensor cones in `B(H) ⊗ B(H)`, their separating pairing, and
//! the selection functional that ties cones to classes of maps.
//!
//! Inclusions: `C_p ⊆ C_d ⊆ C_cp ⊆ C_PPT ⊆ C_i`.
//! Dual pairs under [`dual_pairing`]: `C_p ↔ C_i`, `C_d ↔ C_PPT`, `C_cp ↔ C_cp`.
//!
//! The pairing `<Σ A_n⊗ρ_n, Σ B_m⊗σ_m> = Σ Tr(A_n σ_m) Tr(ρ_n B_m)` equals
//! `Tr(u · F v F)` with `F` the swap. The selection functional
//! `T̃(Σ a_i⊗b_i) = Σ Tr(T(a_i) b_iᵀ)` equals `<x, choi(T)ᵀ>`
//! (full transpose), see [`selection_via_pairing`].

mod sampling;
mod selfdual;

pub use sampling::{cd_accepts, sample, sample_cd, sample_cp_element, sample_positive_choi, SamplerStats};
pub use selfdual::{abelian_coefficient_diagnostic, blockwise_selfduality_check, AbelianReport, SelfDualityReport};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::LinearMap;
use crate::error::{Error, Result};
use crate::json;
use crate::matrix::{self, hermitian_deviation, kron, matrix_unit, ComplexMatrix, C64, PSD_TOL, ZERO};
use crate::random::stream;
use crate::separability::{self, product_opt, OptMode, ProductOptions, SeparabilityPolicy};
use crate::spectrahedron::{self, SdpParams};
use crate::verdict::{Certificate, Status, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConeId {
    #[serde(rename = "C_p")]
    Cp,
    #[serde(rename = "C_d")]
    Cd,
    #[serde(rename = "C_cp")]
    Ccp,
    #[serde(rename = "C_PPT")]
    Cppt,
    #[serde(rename = "C_i")]
    Ci,
}

impl ConeId {
    /// Smallest to largest.
    pub const INCLUSION_ORDER: [ConeId; 5] = [ConeId::Cp, ConeId::Cd, ConeId::Ccp, ConeId::Cppt, ConeId::Ci];

    pub fn name(self) -> &'static str {
        match self {
            ConeId::Cp => "C_p",
            ConeId::Cd => "C_d",
            ConeId::Ccp => "C_cp",
            ConeId::Cppt => "C_PPT",
            ConeId::Ci => "C_i",
        }
    }

    pub fn parse(s: &str) -> Option<ConeId> {
        Self::INCLUSION_ORDER.into_iter().find(|c| c.name().eq_ignore_ascii_case(s))
    }

    /// Position in the inclusion chain.
    pub fn rank(self) -> usize {
        Self::INCLUSION_ORDER.iter().position(|&c| c == self).expect("listed")
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(self, other: ConeId) -> bool {
        self.rank() <= other.rank()
    }

    pub fn dual(self) -> ConeId {
        match self {
            ConeId::Cp => ConeId::Ci,
            ConeId::Ci => ConeId::Cp,
            ConeId::Cd => ConeId::Cppt,
            ConeId::Cppt => ConeId::Cd,
            ConeId::Ccp => ConeId::Ccp,
        }
    }

    /// Class of maps `T` with `T̃ ≥ 0` on this cone.
    pub fn map_class(self) -> &'static str {
        match self {
            ConeId::Cp => "positive",
            ConeId::Cd => "decomposable",
            ConeId::Ccp => "completely positive",
            ConeId::Cppt => "PPT",
            ConeId::Ci => "entanglement breaking",
        }
    }
}

impl std::fmt::Display for ConeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `Σ_i a_i ⊗ b_i` kept in factored form.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorElement {
    d: usize,
    factors: Vec<(ComplexMatrix, ComplexMatrix)>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    #[serde(with = "json::square")]
    a: ComplexMatrix,
    #[serde(with = "json::square")]
    b: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    d: usize,
    terms: Vec<TermJson>,
}

impl TensorElement {
    pub fn new(d: usize, factors: Vec<(ComplexMatrix, ComplexMatrix)>) -> Result<Self> {
        for (i, (a, b)) in factors.iter().enumerate() {
            for m in [a, b] {
                if m.nrows() != d || m.ncols() != d {
                    return Err(Error::DimensionMismatch(format!("term {i}: expected {d}x{d} factors")));
                }
            }
        }
        Ok(Self { d, factors })
    }

    pub fn product(a: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        let d = a.nrows();
        Self::new(d, vec![(a, b)])
    }

    /// `m = Σ_kl A_kl ⊗ e_kl` with the blocks of the `d ⊗ d` factorisation.
    pub fn from_assembled(m: &ComplexMatrix, d: usize) -> Result<Self> {
        matrix::ensure_factorization(m, d, d)?;
        let mut factors = Vec::new();
        for k in 0..d {
            for l in 0..d {
                let blk = ComplexMatrix::from_fn(d, d, |i, j| m[(i * d + k, j * d + l)]);
                if matrix::max_abs(&blk) > 0.0 {
                    factors.push((blk, matrix_unit(d, k, l)));
                }
            }
        }
        if factors.is_empty() {
            factors.push((ComplexMatrix::zeros(d, d), ComplexMatrix::zeros(d, d)));
        }
        Ok(Self { d, factors })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn factors(&self) -> &[(ComplexMatrix, ComplexMatrix)] {
        &self.factors
    }

    pub fn assemble(&self) -> ComplexMatrix {
        let n = self.d * self.d;
        let mut out = ComplexMatrix::zeros(n, n);
        for (a, b) in &self.factors {
            out += kron(a, b);
        }
        out
    }

    pub fn to_json(&self) -> String {
        let raw = ElementJson {
            d: self.d,
            terms: self.factors.iter().map(|(a, b)| TermJson { a: a.clone(), b: b.clone() }).collect(),
        };
        serde_json::to_string(&raw).expect("finite matrices serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: ElementJson = serde_json::from_str(s)?;
        Self::new(raw.d, raw.terms.into_iter().map(|t| (t.a, t.b)).collect())
    }
}

fn check_same_dim(u: &TensorElement, v: &TensorElement) -> Result<()> {
    if u.d != v.d {
        return Err(Error::DimensionMismatch(format!("pairing of d={} with d={}", u.d, v.d)));
    }
    Ok(())
}

/// `Σ_n Σ_m Tr(A_n σ_m) · Tr(ρ_n B_m)` for `u = Σ A_n⊗ρ_n`, `v = Σ B_m⊗σ_m`.
pub fn dual_pairing(u: &TensorElement, v: &TensorElement) -> Result<C64> {
    check_same_dim(u, v)?;
    let mut acc = ZERO;
    for (a_n, rho_n) in &u.factors {
        for (b_m, sigma_m) in &v.factors {
            acc += matrix::trace_product(a_n, sigma_m) * matrix::trace_product(rho_n, b_m);
        }
    }
    Ok(acc)
}

/// The pairing on assembled operators: `Tr(u · F v F)`.
pub fn dual_pairing_assembled(u: &ComplexMatrix, v: &ComplexMatrix, d: usize) -> Result<C64> {
    matrix::ensure_factorization(u, d, d)?;
    let swapped = matrix::swap_factors(v, d, d)?;
    Ok(matrix::trace_product(u, &swapped))
}

/// `T̃(Σ a_i⊗b_i) = Σ Tr(T(a_i) b_iᵀ)`.
pub fn selection_functional(map: &dyn LinearMap, x: &TensorElement) -> Result<C64> {
    if map.dim() != x.d {
        return Err(Error::DimensionMismatch(format!("map on d={} applied to element with d={}", map.dim(), x.d)));
    }
    let mut acc = ZERO;
    for (a, b) in &x.factors {
        acc += matrix::trace_product(&map.image(a), &b.transpose());
    }
    Ok(acc)
}

/// The same value routed through the pairing: `<x, choi(T)ᵀ>`.
pub fn selection_via_pairing(map: &dyn LinearMap, x: &TensorElement) -> Result<C64> {
    let ct = map.choi().into_matrix().transpose();
    let y = TensorElement::from_assembled(&ct, map.dim())?;
    dual_pairing(x, &y)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct MembershipParams {
    pub psd_tol: f64,
    pub sdp: SdpParams,
    pub separability: SeparabilityPolicy,
    pub product: ProductOptions,
    /// Product minima below `-product_tol · (1 + max|x_ij|)` are violations.
    pub product_tol: f64,
}

impl MembershipParams {
    pub fn standard() -> Self {
        Self {
            psd_tol: PSD_TOL,
            sdp: SdpParams::default(),
            separability: SeparabilityPolicy::default(),
            product: ProductOptions { multistarts: 16, iters: 100, seed: 0 },
            product_tol: 1e-9,
        }
    }
}

fn spectrum(m: &ComplexMatrix, tol: f64) -> (bool, Certificate, f64) {
    let eig = matrix::hermitian_eigen(m);
    let rep = matrix::psd_report_from(&eig, tol);
    let vec = (!rep.is_psd).then(|| eig.vector(0));
    (rep.is_psd, Certificate::Spectrum { min_eigenvalue: rep.min_eigenvalue, eigenvector: vec }, rep.min_eigenvalue)
}

/// Membership of a Hermitian assembled operator on `C^d ⊗ C^d`.
pub fn cone_membership(x: &ComplexMatrix, d: usize, cone: ConeId, params: &MembershipParams) -> Result<Verdict> {
    matrix::ensure_factorization(x, d, d)?;
    let dev = hermitian_deviation(x);
    if dev > 1e-10 * (1.0 + matrix::max_abs(x)) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let tol = if params.psd_tol > 0.0 { params.psd_tol } else { PSD_TOL };
    Ok(match cone {
        ConeId::Ccp => {
            let (ok, cert, min) = spectrum(x, tol);
            if ok {
                Verdict::certified_yes(min, cert)
            } else {
                Verdict::certified_no(min, cert)
            }
        }
        ConeId::Cd => {
            let (ok, cert, min) = spectrum(x, tol);
            if !ok {
                return Ok(Verdict::certified_no(min, cert));
            }
            let (ok_pt, cert_pt, min_pt) = spectrum(&matrix::pt_unchecked(x, d, d), tol);
            if !ok_pt {
                return Ok(Verdict::certified_no(min_pt, cert_pt));
            }
            Verdict::certified_yes(
                min.min(min_pt),
                Certificate::PptSpectra { min_eigenvalue: min, partial_transpose_min_eigenvalue: min_pt },
            )
        }
        ConeId::Cppt => spectrahedron::decomposable_verdict(x, d, d, &params.sdp)?,
        ConeId::Cp => {
            let (ok, cert, min) = spectrum(x, tol);
            if !ok {
                return Ok(Verdict::certified_no(min, cert));
            }
            if matrix::trace(x).re <= 0.0 {
                return Ok(Verdict::certified_yes(
                    0.0,
                    Certificate::Separable {
                        decomposition: separability::SeparableDecomposition { d1: d, d2: d, terms: vec![] },
                        distance: 0.0,
                    },
                ));
            }
            separability::is_separable(x, d, d, &params.separability)?
        }
        ConeId::Ci => {
            let opt = product_opt(x, d, d, OptMode::Min, params.product)?;
            let threshold = params.product_tol * (1.0 + matrix::max_abs(x));
            let cert = Certificate::ProductWitness { x: opt.x, y: opt.y, value: opt.value };
            if opt.value < -threshold {
                Verdict::certified_no(opt.value, cert)
            } else {
                Verdict::numeric(Status::NumericYes, opt.value, Some(cert))
            }
        }
    })
}

/// [`cone_membership`] of the assembled element.
pub fn element_membership(x: &TensorElement, cone: ConeId, params: &MembershipParams) -> Result<Verdict> {
    cone_membership(&x.assemble(), x.d, cone, params)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpotcheckReport {
    pub alpha: ConeId,
    pub beta: ConeId,
    pub d: usize,
    pub n_samples: usize,
    pub seed: u64,
    /// Whether `beta` is the dual of `alpha`, so non-negativity is claimed.
    pub claimed_dual: bool,
    pub min_pairing: f64,
    pub max_imaginary: f64,
    /// Pairings below `-tol`.
    pub violations: usize,
    pub tol: f64,
}

impl SpotcheckReport {
    pub fn passed(&self) -> bool {
        !self.claimed_dual || self.violations == 0
    }
}

/// Samples `x ∈ alpha`, `y ∈ beta` and records the minimum pairing.
pub fn dual_cone_spotcheck(
    alpha: ConeId,
    beta: ConeId,
    d: usize,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> SpotcheckReport {
    let values: Vec<C64> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i as u64);
            let x = sample(alpha, d, &mut rng);
            let y = sample(beta, d, &mut rng);
            dual_pairing_assembled(&x, &y, d).expect("sampled dims agree")
        })
        .collect();
    let min_pairing = values.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let max_imaginary = values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let violations = values.iter().filter(|z| z.re < -tol).count();
    SpotcheckReport {
        alpha,
        beta,
        d,
        n_samples,
        seed,
        claimed_dual: alpha.dual() == beta,
        min_pairing: if n_samples == 0 { 0.0 } else { min_pairing },
        max_imaginary,
        violations,
        tol,
    }
}

/// `(T ⊗ id)(x)` for an assembled operator.
pub fn apply_to_element(map: &dyn LinearMap, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    crate::channels::apply_first_factor(map, x)
}
