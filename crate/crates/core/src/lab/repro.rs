//! Reproductions of the worked examples: the conjugate-pair channel, the
//! two-term element with non-commuting blocks, and the 2×2 block analysis.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blockpos::{
    m1_m2_split, psd_equivalence_report, random_block_matrix, tomiyama_statistics, two_dim_cd_eq_cp_experiment,
    BlockMatrix2, CdCpReport, TomiyamaReport,
};
use crate::channels::library::{
    conjugate_pair_channel, conjugate_pair_expansion, conjugate_pair_unital_vector, transpose_map,
};
use crate::channels::{
    compose_maps, is_entanglement_breaking, is_ppt_map, max_map_difference, ChoiBlockMatrix, KrausChannel, LinearMap,
};
use crate::cones::{abelian_coefficient_diagnostic, sample_cd, AbelianReport, TensorElement};
use crate::error::{Error, Result};
use crate::json;
use crate::matrix::{
    self, c, commutator, conj_j, frobenius, identity, matrix_unit, operator_rank, ComplexMatrix, ComplexVector,
    PINV_CUTOFF, PSD_TOL,
};
use crate::random::{random_psd, random_unit_vector, stream};
use crate::separability::SeparabilityPolicy;

use super::{checks_outcome, Check, ExperimentConfig, HasOutcome, Outcome, Report, StageVerdict};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjugatePairSummary {
    #[serde(with = "json::vector")]
    pub v: ComplexVector,
    pub channel: KrausChannel,
    /// `T(1)`.
    #[serde(with = "json::square")]
    pub identity_image: ComplexMatrix,
    /// `s` with `T(1) = s·1`, when `T(1)` is scalar.
    pub unital_scale: Option<f64>,
    pub ppt: StageVerdict,
    pub entanglement_breaking: StageVerdict,
    pub passed: bool,
}

impl HasOutcome for ConjugatePairSummary {
    fn outcome(&self) -> Outcome {
        if self.passed {
            Outcome::Ran
        } else {
            Outcome::InvariantViolation
        }
    }
}

const EXACT_TOL: f64 = 1e-13;
const UNITAL_TOL: f64 = 1e-14;

/// Checks the conjugate-pair channel `V_1 = [v, Jv]`, `V_2 = [Jv, v]` (columns)
/// for a non-real `v ∈ C^2`; `v` defaults to the unital vector `(1, i)/2`.
pub fn conjugate_pair_report(
    config: &ExperimentConfig,
    v: Option<ComplexVector>,
) -> Result<Report<ConjugatePairSummary, Check>> {
    let v = v.unwrap_or_else(conjugate_pair_unital_vector);
    if v.len() != 2 {
        return Err(Error::DimensionMismatch(format!("v must lie in C^2, got length {}", v.len())));
    }
    let norm = v.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::Invalid("v must be a nonzero finite vector".into()));
    }
    if (&conj_j(&v) - &v).norm() <= 1e-12 * norm {
        return Err(Error::Invalid("v must not be a real vector (Jv = v)".into()));
    }
    let t = conjugate_pair_channel(&v)?;
    let mut checks = Vec::new();

    let mut expansion: f64 = 0.0;
    for k in 0..2 {
        for l in 0..2 {
            let e = matrix_unit(2, k, l);
            expansion = expansion.max(matrix::max_abs_diff(&t.image(&e), &conjugate_pair_expansion(&v, &e)));
        }
    }
    checks.push(Check::at_most("expansion_matches", expansion, EXACT_TOL));

    let transposed = compose_maps(&transpose_map(2), &t)?;
    checks.push(Check::at_most("transpose_invariant", max_map_difference(&transposed, &t), EXACT_TOL));

    for (i, op) in t.kraus_ops().iter().enumerate() {
        checks.push(Check::equals(&format!("rank_V{}", i + 1), operator_rank(op, 1e-10), 2));
    }
    for (i, a) in t.kraus_ops().iter().enumerate() {
        for (j, b) in t.kraus_ops().iter().enumerate() {
            checks.push(Check::equals(&format!("rank_V{}V{}", i + 1, j + 1), operator_rank(&(a * b), 1e-10), 2));
        }
    }

    let unital = conjugate_pair_channel(&conjugate_pair_unital_vector())?;
    checks.push(Check::at_most(
        "unital_instance",
        matrix::max_abs_diff(&unital.image(&identity(2)), &identity(2)),
        UNITAL_TOL,
    ));

    let ppt = is_ppt_map(&t);
    checks.push(Check::flag("ppt_certified", ppt.status == crate::verdict::Status::CertifiedYes));
    let policy = SeparabilityPolicy {
        decompose_exact: true,
        gilbert: crate::separability::GilbertOptions { seed: config.seed, ..Default::default() },
        ..SeparabilityPolicy::default()
    };
    let eb = is_entanglement_breaking(&t, &policy);
    checks.push(Check::flag("entanglement_breaking_certified", eb.status == crate::verdict::Status::CertifiedYes));

    let identity_image = t.image(&identity(2));
    let s = identity_image[(0, 0)].re;
    let unital_scale =
        (matrix::max_abs_diff(&identity_image, &(identity(2) * c(s, 0.0))) <= 1e-12 * (1.0 + s.abs())).then_some(s);
    let passed = checks.iter().all(|c| c.passed);
    Ok(Report {
        config: config.clone(),
        summary: ConjugatePairSummary {
            v,
            channel: t,
            identity_image,
            unital_scale,
            ppt: (&ppt).into(),
            entanglement_breaking: (&eb).into(),
            passed,
        },
        records: checks,
    })
}

/// Vectors `d, f, g, h` of a two-term element.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Quadruple {
    #[serde(with = "json::vector")]
    pub d: ComplexVector,
    #[serde(with = "json::vector")]
    pub f: ComplexVector,
    #[serde(with = "json::vector")]
    pub g: ComplexVector,
    #[serde(with = "json::vector")]
    pub h: ComplexVector,
}

/// `dd* ⊗ gg* + ff* ⊗ hh*` and `‖[A_11, A_12]‖_F` of its block grid.
pub fn quadruple_element(q: &Quadruple) -> Result<(TensorElement, f64)> {
    let x = TensorElement::new(
        q.d.len(),
        vec![(&q.d * q.d.adjoint(), &q.g * q.g.adjoint()), (&q.f * q.f.adjoint(), &q.h * q.h.adjoint())],
    )?;
    let blocks = ChoiBlockMatrix::new(x.assemble(), x.dim())?;
    let norm = frobenius(&commutator(&blocks.block(0, 0), &blocks.block(0, 1)));
    Ok((x, norm))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadrupleSummary {
    pub dim: usize,
    pub attempts: usize,
    pub found: bool,
    pub quadruple: Option<Quadruple>,
    pub block_grid_min_eigenvalue: f64,
    pub transposed_block_grid_min_eigenvalue: f64,
    pub commutator: f64,
    pub abelian: Option<AbelianReport>,
    pub passed: bool,
}

impl HasOutcome for QuadrupleSummary {
    fn outcome(&self) -> Outcome {
        if self.passed {
            Outcome::Ran
        } else {
            Outcome::InvariantViolation
        }
    }
}

/// Retry budget for [`noncommuting_quadruple_search`].
pub const QUADRUPLE_MAX_ATTEMPTS: usize = 100;

/// Searches for linearly independent `d, f, g, h` whose element
/// `dd* ⊗ gg* + ff* ⊗ hh*` has PSD `[A_ij]` and `[A_ji]` but
/// `‖[A_11, A_12]‖ > 1e-6`.
pub fn noncommuting_quadruple_search(config: &ExperimentConfig) -> Result<Report<QuadrupleSummary, Check>> {
    config.validate(4..=usize::MAX)?;
    let n = config.dim;
    let psd_floor = -config.tol("psd", 1e-10);
    let min_commutator = config.tol("commutator", 1e-6);
    let mut attempts = 0;
    let mut best = None;
    while attempts < QUADRUPLE_MAX_ATTEMPTS {
        let mut rng = stream(config.seed, attempts as u64);
        attempts += 1;
        let q = Quadruple {
            d: random_unit_vector(n, &mut rng),
            f: random_unit_vector(n, &mut rng),
            g: random_unit_vector(n, &mut rng),
            h: random_unit_vector(n, &mut rng),
        };
        let frame = ComplexMatrix::from_columns(&[q.d.clone(), q.f.clone(), q.g.clone(), q.h.clone()]);
        if operator_rank(&frame, 1e-8) < 4 {
            continue;
        }
        let (x, norm) = quadruple_element(&q)?;
        let blocks = ChoiBlockMatrix::new(x.assemble(), n)?;
        let grid = matrix::is_psd(&blocks.block_grid(), 0.0).min_eigenvalue;
        let transposed = matrix::is_psd(&blocks.transposed_block_grid(), 0.0).min_eigenvalue;
        if grid >= psd_floor && transposed >= psd_floor && norm > min_commutator {
            best = Some((q, x, grid, transposed, norm));
            break;
        }
    }
    let (summary, checks) = match best {
        Some((q, x, grid, transposed, norm)) => {
            let abelian = abelian_coefficient_diagnostic(&x)?;
            let checks = vec![
                Check::at_most("attempts", attempts as f64, QUADRUPLE_MAX_ATTEMPTS as f64),
                Check::at_least("block_grid_psd", grid, psd_floor),
                Check::at_least("transposed_block_grid_psd", transposed, psd_floor),
                Check::above("noncommuting_blocks", norm, min_commutator),
                Check::at_most("per_term_blocks_commute", abelian.per_term_max, 1e-12 * (1.0 + abelian.assembled_max)),
            ];
            let passed = checks.iter().all(|c| c.passed);
            let summary = QuadrupleSummary {
                dim: n,
                attempts,
                found: true,
                quadruple: Some(q),
                block_grid_min_eigenvalue: grid,
                transposed_block_grid_min_eigenvalue: transposed,
                commutator: norm,
                abelian: Some(abelian),
                passed,
            };
            (summary, checks)
        }
        None => {
            let summary = QuadrupleSummary {
                dim: n,
                attempts,
                found: false,
                quadruple: None,
                block_grid_min_eigenvalue: f64::NAN,
                transposed_block_grid_min_eigenvalue: f64::NAN,
                commutator: 0.0,
                abelian: None,
                passed: false,
            };
            (summary, vec![Check::flag("quadruple_found", false)])
        }
    };
    Ok(Report { config: config.clone(), summary, records: checks })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquivalenceSummary {
    pub n: usize,
    pub psd: usize,
    pub schur_evaluated: usize,
    pub disagreements: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplitSummary {
    pub n: usize,
    pub max_reassembly_error: f64,
    pub min_eigenvalue_m1: f64,
    pub min_eigenvalue_m2: f64,
    pub range_failures: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwoDimensionalSummary {
    pub equivalence: EquivalenceSummary,
    pub split: SplitSummary,
    /// `C_d` samples whose Hermitian-reduced block matrices are both PSD.
    pub hermitian_reduction_holds: usize,
    pub tomiyama: TomiyamaReport,
    pub cd_equals_cp: CdCpReport,
    pub passed: bool,
}

impl HasOutcome for TwoDimensionalSummary {
    fn outcome(&self) -> Outcome {
        if self.passed {
            Outcome::Ran
        } else {
            Outcome::InvariantViolation
        }
    }
}

/// The 2×2 block analysis at `d = 2`, each part on `n_trials` samples:
/// agreement of the four positivity conditions, the Schur split, the
/// Hermitian reduction on `C_d`, commutator statistics and `C_d = C_p`.
pub fn two_dimensional_block_report(config: &ExperimentConfig) -> Result<Report<TwoDimensionalSummary, Check>> {
    config.validate(2..=2)?;
    let n = config.n_trials;
    let seed = config.seed;

    let mut equivalence = EquivalenceSummary { n, psd: 0, schur_evaluated: 0, disagreements: 0 };
    for i in 0..n {
        let mut rng = stream(seed, i as u64);
        let m = random_block_matrix(2, &mut rng);
        let r = psd_equivalence_report(&m, 16, rng.random());
        equivalence.psd += r.direct as usize;
        equivalence.schur_evaluated += r.schur.is_some() as usize;
        equivalence.disagreements += (!r.agree) as usize;
    }

    let mut split = SplitSummary {
        n,
        max_reassembly_error: 0.0,
        min_eigenvalue_m1: f64::INFINITY,
        min_eigenvalue_m2: f64::INFINITY,
        range_failures: 0,
    };
    for i in 0..n {
        let mut rng = stream(seed ^ 0x5eed_0001, i as u64);
        let m = BlockMatrix2::from_assembled(&random_psd(4, 4, &mut rng))?;
        let s = m1_m2_split(&m, PINV_CUTOFF)?;
        split.max_reassembly_error = split.max_reassembly_error.max(s.reassembly_error);
        split.min_eigenvalue_m1 = split.min_eigenvalue_m1.min(matrix::is_psd(&s.m1.assemble(), 0.0).min_eigenvalue);
        split.min_eigenvalue_m2 = split.min_eigenvalue_m2.min(matrix::is_psd(&s.m2.assemble(), 0.0).min_eigenvalue);
        split.range_failures += (!s.range_ok) as usize;
    }
    if n == 0 {
        split.min_eigenvalue_m1 = 0.0;
        split.min_eigenvalue_m2 = 0.0;
    }

    let mut hermitian_reduction_holds = 0;
    for i in 0..n {
        let mut rng = stream(seed ^ 0x5eed_0002, i as u64);
        let (x, _) = sample_cd(2, &mut rng);
        let (re, im) = BlockMatrix2::from_tensor(&x)?.hermitian_reductions();
        if matrix::is_psd(&re.assemble(), PSD_TOL).is_psd && matrix::is_psd(&im.assemble(), PSD_TOL).is_psd {
            hermitian_reduction_holds += 1;
        }
    }

    let tomiyama = tomiyama_statistics(n, seed);
    let cd_equals_cp = two_dim_cd_eq_cp_experiment(n, seed);

    let checks = vec![
        Check::equals("equivalence_disagreements", equivalence.disagreements, 0),
        Check::at_most("split_reassembly", split.max_reassembly_error, 1e-13),
        Check::at_least("split_m1_psd", split.min_eigenvalue_m1, -1e-10),
        Check::at_least("split_m2_psd", split.min_eigenvalue_m2, -1e-10),
        Check::equals("hermitian_reduction_on_cd", hermitian_reduction_holds, n),
        Check::at_most("cd_equals_cp_max_distance", cd_equals_cp.max_distance, crate::blockpos::CD_CP_DISTANCE_TOL),
        Check::flag("cd_sampler_rejects_entangled", cd_equals_cp.sampler_rejects_entangled),
    ];
    let passed = checks_outcome(&checks) == Outcome::Ran;
    Ok(Report {
        config: config.clone(),
        summary: TwoDimensionalSummary {
            equivalence,
            split,
            hermitian_reduction_holds,
            tomiyama,
            cd_equals_cp,
            passed,
        },
        records: checks,
    })
}
