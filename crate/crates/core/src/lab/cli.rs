//! `posmap-lab` argument parsing and dispatch.
//!
//! Exit codes: 0 ran, 1 usage or input error, 2 invariant violation,
//! 3 counterexample candidate.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::channels::{classify, compose, compose_maps, is_decomposable, ClassifyParams, LinearMap};
use crate::error::{Error, Result};
use crate::matrix::{c, ComplexVector};
use crate::separability::{is_separable, SeparabilityPolicy};
use crate::spectrahedron::SdpParams;
use crate::verdict::Verdict;

use super::{
    conjugate_pair_report, duality_check, fuzz_ppt2, image_experiment, load_map, load_state,
    noncommuting_quadruple_search, two_dimensional_block_report, verdict_table, CsvRecord, ExperimentConfig,
    HasOutcome, LoadedMap, MapFile, Report,
};

#[derive(Debug, Parser)]
#[command(name = "posmap-lab", version, about = "Positive maps, tensor cones and PPT-square experiments")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Local dimension d (maps act on d×d matrices).
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Number of trials or samples.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Master seed; trial i draws from the stream (seed, i).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Named tolerance override, repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE", value_parser = parse_tolerance, global = true)]
    tol: Vec<(String, f64)>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Experiment variant.
    #[arg(long, global = true)]
    mode: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Positivity, CP, CCP, PPT, decomposability and entanglement breaking of a map.
    Classify { map: PathBuf },
    /// Choi matrix of a map, as a reloadable map file.
    Choi { map: PathBuf },
    /// The composition `first ∘ second`.
    Compose { first: PathBuf, second: PathBuf },
    /// Separability of a bipartite state file.
    Separable { state: PathBuf },
    /// Decomposability of a map.
    Decomposable { map: PathBuf },
    /// Reproduce a worked example.
    Repro {
        #[arg(value_enum)]
        example: Example,
        /// Vector for ex3.1 as `re,im,re,im`.
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
    },
    /// Membership of `(T_2 ⊗ id)(C_d)` in `C_p` for random PPT `T_2` (modes ppt, depolarizing).
    ImageExp,
    /// Entanglement breaking of compositions of random PPT channels (modes primal, dual, control).
    FuzzPpt2,
    /// Sampled cone duality and `T_2^d C_i ⊆ C_PPT` (modes ppt, identity, depolarizing).
    Duality,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Example {
    #[value(name = "ex3.1")]
    ConjugatePair,
    #[value(name = "ex4.4")]
    Quadruple,
    #[value(name = "ex4.7")]
    TwoDimensional,
}

fn parse_tolerance(s: &str) -> std::result::Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let value: f64 = value.trim().parse().map_err(|e| format!("tolerance {name}: {e}"))?;
    if name.trim().is_empty() {
        return Err("empty tolerance name".into());
    }
    Ok((name.trim().to_string(), value))
}

fn parse_vector(s: &str) -> Result<ComplexVector> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| Error::Invalid(format!("--v entry {p:?}: {e}"))))
        .collect::<Result<_>>()?;
    if !parts.len().is_multiple_of(2) || parts.is_empty() {
        return Err(Error::Invalid("--v expects re,im pairs".into()));
    }
    Ok(ComplexVector::from_iterator(parts.len() / 2, parts.chunks(2).map(|p| c(p[0], p[1]))))
}

impl Global {
    fn config(&self, default_dim: usize, default_trials: usize) -> ExperimentConfig {
        let mut cfg =
            ExperimentConfig::new(self.dim.unwrap_or(default_dim), self.trials.unwrap_or(default_trials), self.seed);
        for (name, value) in &self.tol {
            cfg = cfg.with_tolerance(name, *value);
        }
        cfg.mode = self.mode.clone();
        cfg.output_path = self.out.as_ref().map(|p| p.display().to_string());
        cfg
    }

    fn tol(&self, name: &str, default: f64) -> f64 {
        self.tol.iter().rev().find(|(n, _)| n == name).map_or(default, |(_, v)| *v)
    }

    fn emit(&self, text: &str, stdout: &mut dyn Write) -> Result<()> {
        match &self.out {
            Some(path) => {
                std::fs::write(path, text)?;
                writeln!(stdout, "wrote {}", path.display())?;
            }
            None => stdout.write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn emit_report<S: Serialize + HasOutcome, R: Serialize + CsvRecord>(
        &self,
        report: &Report<S, R>,
        stdout: &mut dyn Write,
    ) -> Result<i32> {
        let text = match self.format {
            Format::Json => report.to_json(),
            Format::Csv => report.to_csv(),
        };
        self.emit(&text, stdout)?;
        Ok(report.outcome().exit_code())
    }

    fn emit_json<T: Serialize>(&self, value: &T, stdout: &mut dyn Write) -> Result<i32> {
        if self.format == Format::Csv {
            return Err(Error::Invalid("this command only writes json".into()));
        }
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.emit(&text, stdout)?;
        Ok(0)
    }

    fn emit_verdicts(&self, rows: &[(&str, &Verdict)], json: String, stdout: &mut dyn Write) -> Result<i32> {
        match self.format {
            Format::Json => {
                let mut text = verdict_table(rows);
                text.push_str(&json);
                text.push('\n');
                self.emit(&text, stdout)?;
            }
            Format::Csv => {
                let records: Vec<VerdictRow> = rows.iter().map(|(n, v)| VerdictRow { name: n, verdict: v }).collect();
                self.emit(&super::to_csv(&records), stdout)?;
            }
        }
        Ok(0)
    }
}

struct VerdictRow<'a> {
    name: &'a str,
    verdict: &'a Verdict,
}

impl CsvRecord for VerdictRow<'_> {
    fn header() -> Vec<&'static str> {
        vec!["property", "status", "residual", "certificate"]
    }
    fn row(&self) -> Vec<String> {
        vec![
            self.name.to_string(),
            self.verdict.status.to_string(),
            self.verdict.residual.to_string(),
            self.verdict.certificate.as_ref().map_or("", |c| c.kind()).to_string(),
        ]
    }
}

fn separability_policy(g: &Global) -> SeparabilityPolicy {
    let mut p = SeparabilityPolicy::default();
    p.psd_tol = g.tol("psd", p.psd_tol);
    p.distance_tol = g.tol("distance", p.distance_tol);
    p.realignment_tol = g.tol("realignment", p.realignment_tol);
    p.gilbert.seed = g.seed;
    p
}

fn sdp_params(g: &Global) -> SdpParams {
    let mut p = SdpParams::default();
    p.tol = g.tol("sdp", p.tol);
    p.psd_tol = g.tol("psd", p.psd_tol);
    p
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    match &cli.command {
        Command::Classify { map } => {
            let map = load_map(map)?;
            let mut params =
                ClassifyParams { sdp: sdp_params(g), separability: separability_policy(g), ..Default::default() };
            params.positivity.seed = g.seed;
            let result = classify(&map, &params);
            g.emit_verdicts(&result.rows(), serde_json::to_string_pretty(&result)?, stdout)
        }
        Command::Choi { map } => g.emit_json(&MapFile::from_choi(&load_map(map)?), stdout),
        Command::Compose { first, second } => {
            let (t1, t2) = (load_map(first)?, load_map(second)?);
            let file = match (&t1, &t2) {
                (LoadedMap::Kraus(a), LoadedMap::Kraus(b)) => LoadedMap::Kraus(compose(a, b)?).to_file(),
                _ => MapFile::from_choi(&compose_maps(&t1, &t2)?),
            };
            g.emit_json(&file, stdout)
        }
        Command::Separable { state } => {
            let s = load_state(state)?;
            let v = is_separable(&s.rho, s.d1, s.d2, &separability_policy(g))?;
            g.emit_verdicts(&[("separable", &v)], serde_json::to_string_pretty(&v)?, stdout)
        }
        Command::Decomposable { map } => {
            let map = load_map(map)?;
            let v = is_decomposable(&map as &dyn LinearMap, &sdp_params(g));
            g.emit_verdicts(&[("decomposable", &v)], serde_json::to_string_pretty(&v)?, stdout)
        }
        Command::Repro { example, v } => match example {
            Example::ConjugatePair => {
                let v = v.as_deref().map(parse_vector).transpose()?;
                g.emit_report(&conjugate_pair_report(&g.config(2, 1), v)?, stdout)
            }
            Example::Quadruple => g.emit_report(&noncommuting_quadruple_search(&g.config(4, 1))?, stdout),
            Example::TwoDimensional => g.emit_report(&two_dimensional_block_report(&g.config(2, 1000))?, stdout),
        },
        Command::ImageExp => g.emit_report(&image_experiment(&g.config(2, 500))?, stdout),
        Command::FuzzPpt2 => g.emit_report(&fuzz_ppt2(&g.config(2, 1000))?, stdout),
        Command::Duality => g.emit_report(&duality_check(&g.config(2, 1000))?, stdout),
    }
}

/// Runs the command line `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}
