//! Images of `C_d` under `T_2 ⊗ id` for PPT channels `T_2`, tested for
//! membership in `C_p`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::library::depolarizing;
use crate::channels::sampling::{random_ppt_sample, PptSamplerOptions};
use crate::channels::{apply_first_factor, is_ppt_map, KrausChannel};
use crate::cones::{cone_membership, sample_cd, ConeId, MembershipParams};
use crate::error::Result;
use crate::json;
use crate::matrix::{self, ComplexMatrix};
use crate::random::stream;
use crate::separability::GilbertOptions;
use crate::spectrahedron::DykstraOptions;
use crate::verdict::{Status, Verdict};

use super::{
    matrix_fingerprint, stage_row, CsvRecord, ExperimentConfig, HasOutcome, Outcome, Report, StageVerdict, StatusCounts,
};

/// A `certified_no` image with everything needed to recompute it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ImageCandidate {
    pub t2: KrausChannel,
    #[serde(with = "json::square")]
    pub element: ComplexMatrix,
    #[serde(with = "json::square")]
    pub image: ComplexMatrix,
    pub verdict: Verdict,
    /// Verdict under tightened tolerances.
    pub retightened: Verdict,
    pub confirmed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ImageRecord {
    pub trial: usize,
    pub t2: String,
    pub element: String,
    pub t2_check: StageVerdict,
    pub membership: StageVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<ImageCandidate>,
}

impl CsvRecord for ImageRecord {
    fn header() -> Vec<&'static str> {
        vec!["trial", "t2", "element", "t2_status", "t2_residual", "status", "residual", "candidate"]
    }
    fn row(&self) -> Vec<String> {
        let mut row = vec![self.trial.to_string(), self.t2.clone(), self.element.clone()];
        row.extend(stage_row(&self.t2_check));
        row.extend(stage_row(&self.membership));
        row.push(self.candidate.is_some().to_string());
        row
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ImageSummary {
    pub dim: usize,
    /// `ppt` (random PPT channels) or `depolarizing` (control).
    pub mode: String,
    pub trials: usize,
    pub completed: usize,
    pub skipped: Vec<usize>,
    pub valid_inputs: usize,
    pub membership: StatusCounts,
    pub invariant_violations: Vec<String>,
    pub candidates: usize,
    pub confirmed_candidates: usize,
}

impl HasOutcome for ImageSummary {
    fn outcome(&self) -> Outcome {
        Outcome::from_counts(self.invariant_violations.len(), self.confirmed_candidates)
    }
}

fn membership_params(config: &ExperimentConfig, seed: u64, tighten: f64) -> MembershipParams {
    let mut p = MembershipParams::standard();
    p.psd_tol = config.tol("psd", matrix::PSD_TOL) * tighten;
    p.separability.psd_tol = p.psd_tol;
    p.separability.realignment_tol = config.tol("realignment", 1e-9) * tighten;
    p.separability.distance_tol = config.tol("distance", 1e-6);
    p.separability.gilbert = GilbertOptions { seed, ..p.separability.gilbert };
    p.product.seed = seed;
    p
}

/// A completed trial with its invariant violations, or `None` when skipped.
type TrialResult = Result<Option<(ImageRecord, Vec<String>)>>;

fn run_trial(config: &ExperimentConfig, control: bool, trial: usize) -> TrialResult {
    let d = config.dim;
    let mut rng = stream(config.seed, trial as u64);
    let sub_seed: u64 = rng.random();
    let t2 = if control {
        depolarizing(d)
    } else {
        let opts = PptSamplerOptions {
            dykstra: DykstraOptions { tol: config.tol("dykstra", 1e-10), ..DykstraOptions::default() },
            interior_mix: config.tol("interior", 1e-6),
            kraus_tol: config.tol("kraus", 1e-12),
        };
        match random_ppt_sample(d, &mut rng, &opts)? {
            Some(s) => s.channel,
            None => return Ok(None),
        }
    };
    let (a, _) = sample_cd(d, &mut rng);
    let image = matrix::hermitian_part(&apply_first_factor(&t2, &a)?);
    let mut violations = Vec::new();
    let t2_check = is_ppt_map(&t2);
    if t2_check.status != Status::CertifiedYes {
        violations.push(format!("trial {trial}: sampled channel is not certified PPT ({})", t2_check.status));
    }
    let verdict = cone_membership(&image, d, ConeId::Cp, &membership_params(config, sub_seed, 1.0))?;
    if !verdict.is_well_formed() {
        violations.push(format!("trial {trial}: malformed membership verdict"));
    }
    if control && !verdict.is_yes() {
        violations.push(format!("trial {trial}: depolarized image tested {}", verdict.status));
    }
    let candidate = if verdict.status == Status::CertifiedNo {
        let retightened = cone_membership(&image, d, ConeId::Cp, &membership_params(config, sub_seed, 1e-3))?;
        let confirmed = retightened.status == Status::CertifiedNo;
        Some(ImageCandidate {
            t2: t2.clone(),
            element: a.clone(),
            image: image.clone(),
            verdict: verdict.clone(),
            retightened,
            confirmed,
        })
    } else {
        None
    };
    let record = ImageRecord {
        trial,
        t2: super::fingerprint(&t2.to_json()),
        element: matrix_fingerprint(&a),
        t2_check: (&t2_check).into(),
        membership: (&verdict).into(),
        candidate,
    };
    Ok(Some((record, violations)))
}

/// Samples PPT channels `T_2` and `a ∈ C_d` at `dim ∈ {2, 3}` and tests
/// `(T_2 ⊗ id)(a) ∈ C_p`. A `certified_no` is re-tested with tolerances
/// tightened a thousandfold and reported as a candidate when it persists.
///
/// Mode `depolarizing` replaces `T_2` by the depolarizing channel as a control.
/// Tolerances: `psd`, `realignment`, `distance`, `dykstra`, `interior`, `kraus`.
pub fn image_experiment(config: &ExperimentConfig) -> Result<Report<ImageSummary, ImageRecord>> {
    config.validate(2..=3)?;
    config.check_mode(&["ppt", "depolarizing"])?;
    let control = config.mode.as_deref() == Some("depolarizing");
    let trials: Vec<TrialResult> =
        (0..config.n_trials).into_par_iter().map(|i| run_trial(config, control, i)).collect();
    let mut summary = ImageSummary {
        dim: config.dim,
        mode: if control { "depolarizing" } else { "ppt" }.into(),
        trials: config.n_trials,
        completed: 0,
        skipped: Vec::new(),
        valid_inputs: 0,
        membership: StatusCounts::default(),
        invariant_violations: Vec::new(),
        candidates: 0,
        confirmed_candidates: 0,
    };
    let mut records = Vec::new();
    for (i, t) in trials.into_iter().enumerate() {
        match t? {
            None => summary.skipped.push(i),
            Some((record, violations)) => {
                summary.completed += 1;
                summary.valid_inputs += (record.t2_check.status == Status::CertifiedYes) as usize;
                summary.membership.add(record.membership.status);
                if let Some(c) = &record.candidate {
                    summary.candidates += 1;
                    summary.confirmed_candidates += c.confirmed as usize;
                }
                summary.invariant_violations.extend(violations);
                records.push(record);
            }
        }
    }
    Ok(Report { config: config.clone(), summary, records })
}
