//! Fuzzing compositions of PPT channels.
//!
//! Primal mode composes two random PPT channels and tests the composition for
//! entanglement breaking. Dual mode composes a labelled positive map with a
//! PPT channel and tests decomposability. Control mode composes two
//! entanglement-breaking channels, whose composition must stay entanglement
//! breaking.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::sampling::{random_eb_channel, random_positive_map, random_ppt_sample, PptSamplerOptions};
use crate::channels::{
    compose, compose_maps, is_decomposable, is_entanglement_breaking, is_entanglement_breaking_kraus, is_positive_map,
    is_ppt_map, KrausChannel, PositivityParams,
};
use crate::error::Result;
use crate::random::stream;
use crate::separability::{GilbertOptions, SeparabilityPolicy};
use crate::spectrahedron::{DykstraOptions, SdpParams};
use crate::verdict::{Status, Verdict};

use super::{
    fingerprint, stage_row, CsvRecord, ExperimentConfig, HasOutcome, LoadedMap, MapFile, Outcome, Report, StageVerdict,
    StatusCounts,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FuzzMode {
    Primal,
    Dual,
    Control,
}

impl FuzzMode {
    fn from_config(config: &ExperimentConfig) -> Self {
        match config.mode.as_deref() {
            Some("dual") => FuzzMode::Dual,
            Some("control") => FuzzMode::Control,
            _ => FuzzMode::Primal,
        }
    }

    fn tests(self) -> (&'static str, &'static str, &'static str) {
        match self {
            FuzzMode::Primal => ("ppt", "ppt", "entanglement_breaking"),
            FuzzMode::Dual => ("positive", "ppt", "decomposable"),
            FuzzMode::Control => ("ppt", "ppt", "entanglement_breaking"),
        }
    }
}

/// Both maps of a trial in full, with the verdict to reproduce.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FuzzCandidate {
    pub mode: FuzzMode,
    pub t1: MapFile,
    pub t2: MapFile,
    pub verdict: Verdict,
    /// Reloading both maps and recomputing gave the same status.
    pub reverified: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FuzzResiduals {
    pub t1_projection: Option<f64>,
    pub t2_projection: Option<f64>,
    pub conjecture: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FuzzRecord {
    pub trial: usize,
    /// SHA-256 of the JSON encoding of each map.
    pub t1: String,
    pub t2: String,
    pub t1_check: StageVerdict,
    pub t2_check: StageVerdict,
    pub conjecture: StageVerdict,
    pub residuals: FuzzResiduals,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<FuzzCandidate>,
}

impl CsvRecord for FuzzRecord {
    fn header() -> Vec<&'static str> {
        vec![
            "trial",
            "t1",
            "t2",
            "t1_status",
            "t1_residual",
            "t2_status",
            "t2_residual",
            "status",
            "residual",
            "candidate",
        ]
    }
    fn row(&self) -> Vec<String> {
        let mut row = vec![self.trial.to_string(), self.t1.clone(), self.t2.clone()];
        row.extend(stage_row(&self.t1_check));
        row.extend(stage_row(&self.t2_check));
        row.extend(stage_row(&self.conjecture));
        row.push(self.candidate.is_some().to_string());
        row
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub mode: FuzzMode,
    pub dim: usize,
    pub trials: usize,
    pub completed: usize,
    /// Trials dropped because a projection did not converge.
    pub skipped: Vec<usize>,
    pub t1_test: String,
    pub t2_test: String,
    pub conjecture_test: String,
    /// Sampled inputs whose check returned the expected verdict.
    pub valid_inputs: usize,
    pub conjecture: StatusCounts,
    pub invariant_violations: Vec<String>,
    pub candidates: usize,
}

impl HasOutcome for FuzzSummary {
    fn outcome(&self) -> Outcome {
        Outcome::from_counts(self.invariant_violations.len(), self.candidates)
    }
}

#[derive(Clone, Copy)]
struct FuzzParams {
    sampler: PptSamplerOptions,
    policy: SeparabilityPolicy,
    sdp: SdpParams,
}

impl FuzzParams {
    fn from_config(config: &ExperimentConfig) -> Self {
        let sampler = PptSamplerOptions {
            dykstra: DykstraOptions { tol: config.tol("dykstra", 1e-10), ..DykstraOptions::default() },
            interior_mix: config.tol("interior", 1e-6),
            kraus_tol: config.tol("kraus", 1e-12),
        };
        let policy = SeparabilityPolicy {
            psd_tol: config.tol("psd", crate::matrix::PSD_TOL),
            distance_tol: config.tol("distance", 1e-6),
            ..SeparabilityPolicy::default()
        };
        let sdp = SdpParams { tol: config.tol("sdp", 1e-9), ..SdpParams::default() };
        Self { sampler, policy, sdp }
    }

    fn seeded(&self, seed: u64) -> Self {
        let mut p = *self;
        p.policy.gilbert = GilbertOptions { seed, ..p.policy.gilbert };
        p
    }
}

fn conjecture_verdict(mode: FuzzMode, t1: &LoadedMap, t2: &KrausChannel, params: &FuzzParams) -> Result<Verdict> {
    Ok(match (mode, t1) {
        (FuzzMode::Dual, _) => is_decomposable(&compose_maps(t1, t2)?, &params.sdp),
        (_, LoadedMap::Kraus(k1)) => is_entanglement_breaking_kraus(&compose(k1, t2)?, &params.policy),
        (_, LoadedMap::Choi(m)) => is_entanglement_breaking(&compose_maps(m, t2)?, &params.policy),
    })
}

/// Recomputes the conjecture verdict of a serialized candidate.
pub fn recheck_fuzz_candidate(
    candidate: &FuzzCandidate,
    config: &ExperimentConfig,
    gilbert_seed: u64,
) -> Result<Verdict> {
    let t1 = candidate.t1.clone().into_map()?;
    let LoadedMap::Kraus(t2) = candidate.t2.clone().into_map()? else {
        return Err(crate::Error::Invalid("t2 must be given by Kraus operators".into()));
    };
    let params = FuzzParams::from_config(config).seeded(gilbert_seed);
    conjecture_verdict(candidate.mode, &t1, &t2, &params)
}

enum Trial {
    Skipped,
    Done(Box<FuzzRecord>, Vec<String>),
}

fn run_trial(mode: FuzzMode, config: &ExperimentConfig, base: &FuzzParams, trial: usize) -> Result<Trial> {
    let d = config.dim;
    let mut rng = stream(config.seed, trial as u64);
    let gilbert_seed: u64 = rng.random();
    let params = base.seeded(gilbert_seed);
    let mut violations = Vec::new();

    let (t1, t1_projection): (LoadedMap, Option<f64>) = match mode {
        FuzzMode::Primal => match random_ppt_sample(d, &mut rng, &params.sampler)? {
            Some(s) => (LoadedMap::Kraus(s.channel), Some(s.projection_residual)),
            None => return Ok(Trial::Skipped),
        },
        FuzzMode::Dual => (LoadedMap::Choi(random_positive_map(d, &mut rng).map), None),
        FuzzMode::Control => {
            let k = rng.random_range(1..=d * d);
            (LoadedMap::Kraus(random_eb_channel(d, k, &mut rng)), None)
        }
    };
    let (t2, t2_projection) = match mode {
        FuzzMode::Control => {
            let k = rng.random_range(1..=d * d);
            (random_eb_channel(d, k, &mut rng), None)
        }
        _ => match random_ppt_sample(d, &mut rng, &params.sampler)? {
            Some(s) => (s.channel, Some(s.projection_residual)),
            None => return Ok(Trial::Skipped),
        },
    };

    let t1_check = match mode {
        FuzzMode::Dual => {
            let positivity = PositivityParams { seed: gilbert_seed, ..PositivityParams::default() };
            let v = is_positive_map(&t1, &positivity);
            if !v.is_yes() {
                violations.push(format!("trial {trial}: sampled positive map tested {}", v.status));
            }
            v
        }
        _ => {
            let v = is_ppt_map(&t1);
            if v.status != Status::CertifiedYes {
                violations.push(format!("trial {trial}: sampled t1 is not certified PPT ({})", v.status));
            }
            v
        }
    };
    let t2_check = is_ppt_map(&t2);
    if t2_check.status != Status::CertifiedYes {
        violations.push(format!("trial {trial}: sampled t2 is not certified PPT ({})", t2_check.status));
    }

    let conjecture = conjecture_verdict(mode, &t1, &t2, &params)?;
    for (name, v) in [("t1", &t1_check), ("t2", &t2_check), ("conjecture", &conjecture)] {
        if !v.is_well_formed() {
            violations.push(format!("trial {trial}: malformed {name} verdict"));
        }
    }
    if mode == FuzzMode::Control && !conjecture.is_yes() {
        violations
            .push(format!("trial {trial}: composition of entanglement-breaking channels tested {}", conjecture.status));
    }

    let t1_file = t1.to_file();
    let t2_file = MapFile::Kraus { dim: d, kraus: t2.kraus_ops().to_vec() };
    let candidate = if mode != FuzzMode::Control && conjecture.is_no() {
        let mut c = FuzzCandidate {
            mode,
            t1: t1_file.clone(),
            t2: t2_file.clone(),
            verdict: conjecture.clone(),
            reverified: false,
        };
        let text = serde_json::to_string(&c)?;
        let reloaded: FuzzCandidate = serde_json::from_str(&text)?;
        c.reverified = recheck_fuzz_candidate(&reloaded, config, gilbert_seed)?.status == conjecture.status;
        Some(c)
    } else {
        None
    };

    let record = FuzzRecord {
        trial,
        t1: fingerprint(&serde_json::to_string(&t1_file)?),
        t2: fingerprint(&serde_json::to_string(&t2_file)?),
        t1_check: (&t1_check).into(),
        t2_check: (&t2_check).into(),
        conjecture: (&conjecture).into(),
        residuals: FuzzResiduals { t1_projection, t2_projection, conjecture: conjecture.residual },
        candidate,
    };
    Ok(Trial::Done(Box::new(record), violations))
}

/// Runs `n_trials` independent trials at `dim ∈ {2, 3, 4}`; the mode is
/// `primal` (default), `dual` or `control`.
///
/// Tolerances: `dykstra`, `interior`, `kraus` (sampler), `psd`, `distance`
/// (separability), `sdp` (decomposability).
pub fn fuzz_ppt2(config: &ExperimentConfig) -> Result<Report<FuzzSummary, FuzzRecord>> {
    config.validate(2..=4)?;
    config.check_mode(&["primal", "dual", "control"])?;
    let mode = FuzzMode::from_config(config);
    let params = FuzzParams::from_config(config);
    let trials: Vec<Result<Trial>> =
        (0..config.n_trials).into_par_iter().map(|i| run_trial(mode, config, &params, i)).collect();

    let (t1_test, t2_test, conjecture_test) = mode.tests();
    let mut summary = FuzzSummary {
        mode,
        dim: config.dim,
        trials: config.n_trials,
        completed: 0,
        skipped: Vec::new(),
        t1_test: t1_test.into(),
        t2_test: t2_test.into(),
        conjecture_test: conjecture_test.into(),
        valid_inputs: 0,
        conjecture: StatusCounts::default(),
        invariant_violations: Vec::new(),
        candidates: 0,
    };
    let mut records = Vec::new();
    for (i, t) in trials.into_iter().enumerate() {
        match t? {
            Trial::Skipped => summary.skipped.push(i),
            Trial::Done(record, violations) => {
                summary.completed += 1;
                let t1_ok = if mode == FuzzMode::Dual {
                    record.t1_check.status.is_yes()
                } else {
                    record.t1_check.status == Status::CertifiedYes
                };
                summary.valid_inputs += t1_ok as usize + (record.t2_check.status == Status::CertifiedYes) as usize;
                summary.conjecture.add(record.conjecture.status);
                summary.candidates += record.candidate.is_some() as usize;
                summary.invariant_violations.extend(violations);
                records.push(*record);
            }
        }
    }
    Ok(Report { config: config.clone(), summary, records })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primal_d2_all_certified() {
        let r = fuzz_ppt2(&ExperimentConfig::new(2, 30, 11)).unwrap();
        assert_eq!(r.summary.completed + r.summary.skipped.len(), 30);
        assert_eq!(r.summary.conjecture.certified_yes, r.summary.completed);
        assert_eq!(r.summary.valid_inputs, 2 * r.summary.completed);
        assert_eq!(r.outcome(), Outcome::Ran);
    }

    #[test]
    fn control_and_dual_modes() {
        let r = fuzz_ppt2(&ExperimentConfig::new(2, 10, 12).with_mode("control")).unwrap();
        assert_eq!(r.summary.conjecture.yes(), 10);
        assert!(r.summary.invariant_violations.is_empty());
        let r = fuzz_ppt2(&ExperimentConfig::new(2, 10, 13).with_mode("dual")).unwrap();
        assert_eq!(r.summary.conjecture.yes(), r.summary.completed);
        assert_eq!(r.outcome(), Outcome::Ran);
        assert!(fuzz_ppt2(&ExperimentConfig::new(2, 10, 13).with_mode("other")).is_err());
        assert!(fuzz_ppt2(&ExperimentConfig::new(5, 10, 13)).is_err());
    }

    #[test]
    fn candidate_recheck_round_trip() {
        let t = crate::channels::library::identity_channel(2);
        let file = MapFile::Kraus { dim: 2, kraus: t.kraus_ops().to_vec() };
        let c = FuzzCandidate {
            mode: FuzzMode::Primal,
            t1: file.clone(),
            t2: file,
            verdict: Verdict::inconclusive(0.0),
            reverified: false,
        };
        let v = recheck_fuzz_candidate(&c, &ExperimentConfig::new(2, 1, 0), 0).unwrap();
        assert_eq!(v.status, Status::CertifiedNo);
    }
}
