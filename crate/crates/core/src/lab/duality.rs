//! Sampled cone duality and images of `C_i` under duals of PPT channels.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::library::{depolarizing, identity_channel};
use crate::channels::sampling::{random_ppt_sample, PptSamplerOptions};
use crate::channels::{apply_first_factor, dual_map, KrausChannel};
use crate::cones::{cone_membership, dual_cone_spotcheck, sample, ConeId, MembershipParams, SpotcheckReport};
use crate::error::Result;
use crate::json;
use crate::matrix::{self, ComplexMatrix};
use crate::random::stream;
use crate::verdict::Verdict;

use super::{
    matrix_fingerprint, stage_row, CsvRecord, ExperimentConfig, HasOutcome, Outcome, Report, StageVerdict, StatusCounts,
};

/// Dual pairs whose pairing is non-negative.
pub const DUAL_PAIRS: [(ConeId, ConeId); 3] =
    [(ConeId::Cp, ConeId::Ci), (ConeId::Cd, ConeId::Cppt), (ConeId::Ccp, ConeId::Ccp)];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DualityCandidate {
    pub t2: KrausChannel,
    #[serde(with = "json::square")]
    pub element: ComplexMatrix,
    #[serde(with = "json::square")]
    pub image: ComplexMatrix,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DualityRecord {
    pub trial: usize,
    pub t2: String,
    pub element: String,
    pub membership: StageVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<DualityCandidate>,
}

impl CsvRecord for DualityRecord {
    fn header() -> Vec<&'static str> {
        vec!["trial", "t2", "element", "status", "residual", "candidate"]
    }
    fn row(&self) -> Vec<String> {
        let mut row = vec![self.trial.to_string(), self.t2.clone(), self.element.clone()];
        row.extend(stage_row(&self.membership));
        row.push(self.candidate.is_some().to_string());
        row
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DualitySummary {
    pub dim: usize,
    /// `ppt` (default), `identity` or `depolarizing`.
    pub mode: String,
    pub spotchecks: Vec<SpotcheckReport>,
    pub min_pairing: f64,
    /// Membership of `(T_2^d ⊗ id)(y)` in `C_PPT`.
    pub images: StatusCounts,
    pub skipped: Vec<usize>,
    pub invariant_violations: Vec<String>,
    pub candidates: usize,
}

impl HasOutcome for DualitySummary {
    fn outcome(&self) -> Outcome {
        Outcome::from_counts(self.invariant_violations.len(), self.candidates)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Ppt,
    Identity,
    Depolarizing,
}

fn run_trial(config: &ExperimentConfig, mode: Mode, trial: usize) -> Result<Option<DualityRecord>> {
    let d = config.dim;
    let mut rng = stream(config.seed ^ 0xd0a1, trial as u64);
    let sub_seed: u64 = rng.random();
    let t2 = match mode {
        Mode::Identity => identity_channel(d),
        Mode::Depolarizing => depolarizing(d),
        Mode::Ppt => match random_ppt_sample(d, &mut rng, &PptSamplerOptions::default())? {
            Some(s) => s.channel,
            None => return Ok(None),
        },
    };
    let source = if mode == Mode::Identity { ConeId::Cppt } else { ConeId::Ci };
    let y = sample(source, d, &mut rng);
    let z = matrix::hermitian_part(&apply_first_factor(&dual_map(&t2), &y)?);
    let mut params = MembershipParams::standard();
    params.psd_tol = config.tol("psd", matrix::PSD_TOL);
    params.product.seed = sub_seed;
    let verdict = cone_membership(&z, d, ConeId::Cppt, &params)?;
    let candidate = (mode == Mode::Ppt && verdict.is_no()).then(|| DualityCandidate {
        t2: t2.clone(),
        element: y.clone(),
        image: z.clone(),
        verdict: verdict.clone(),
    });
    Ok(Some(DualityRecord {
        trial,
        t2: super::fingerprint(&t2.to_json()),
        element: matrix_fingerprint(&y),
        membership: (&verdict).into(),
        candidate,
    }))
}

/// Spot-checks the dual pairs `(C_p, C_i)`, `(C_d, C_PPT)`, `(C_cp, C_cp)` on
/// `n_trials` sampled pairs each, then tests `(T_2^d ⊗ id)(y) ∈ C_PPT` for
/// sampled PPT channels `T_2` and `y ∈ C_i`.
///
/// Modes `identity` (`T_2 = id`, `y ∈ C_PPT`) and `depolarizing` are controls
/// that must pass. Tolerances: `pairing`, `psd`.
pub fn duality_check(config: &ExperimentConfig) -> Result<Report<DualitySummary, DualityRecord>> {
    config.validate(2..=4)?;
    config.check_mode(&["ppt", "identity", "depolarizing"])?;
    let mode = match config.mode.as_deref() {
        Some("identity") => Mode::Identity,
        Some("depolarizing") => Mode::Depolarizing,
        _ => Mode::Ppt,
    };
    let tol = config.tol("pairing", 1e-10);
    let spotchecks: Vec<SpotcheckReport> = DUAL_PAIRS
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| {
            dual_cone_spotcheck(a, b, config.dim, config.n_trials, config.seed.wrapping_add(k as u64), tol)
        })
        .collect();
    let mut violations: Vec<String> = spotchecks
        .iter()
        .filter(|s| !s.passed())
        .map(|s| format!("pairing of {} with {} reached {:.3e}", s.alpha, s.beta, s.min_pairing))
        .collect();

    let trials: Vec<Result<Option<DualityRecord>>> =
        (0..config.n_trials).into_par_iter().map(|i| run_trial(config, mode, i)).collect();
    let mut images = StatusCounts::default();
    let mut skipped = Vec::new();
    let mut records = Vec::new();
    for (i, t) in trials.into_iter().enumerate() {
        match t? {
            None => skipped.push(i),
            Some(r) => {
                images.add(r.membership.status);
                if mode != Mode::Ppt && !r.membership.status.is_yes() {
                    violations.push(format!("trial {i}: control image tested {}", r.membership.status));
                }
                records.push(r);
            }
        }
    }
    let candidates = records.iter().filter(|r| r.candidate.is_some()).count();
    let min_pairing = spotchecks.iter().map(|s| s.min_pairing).fold(f64::INFINITY, f64::min);
    let summary = DualitySummary {
        dim: config.dim,
        mode: match mode {
            Mode::Ppt => "ppt",
            Mode::Identity => "identity",
            Mode::Depolarizing => "depolarizing",
        }
        .into(),
        spotchecks,
        min_pairing,
        images,
        skipped,
        invariant_violations: violations,
        candidates,
    };
    Ok(Report { config: config.clone(), summary, records })
}

impl DualitySummary {
    pub fn certified_images(&self) -> usize {
        self.images.certified_yes
    }
}
