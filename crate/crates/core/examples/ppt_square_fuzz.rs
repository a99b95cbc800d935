//! Compositions of random PPT channels tested for entanglement breaking.

use posmap::lab::{fuzz_ppt2, ExperimentConfig, HasOutcome};

fn main() -> posmap::Result<()> {
    for (dim, trials, mode) in [(2, 200, "primal"), (3, 20, "primal"), (2, 50, "dual"), (3, 20, "control")] {
        let report = fuzz_ppt2(&ExperimentConfig::new(dim, trials, 1).with_mode(mode))?;
        let s = &report.summary;
        println!(
            "{mode:<8} d={dim} completed {}/{} verdicts {:?} outcome {:?}",
            s.completed,
            s.trials,
            s.conjecture,
            report.outcome()
        );
    }
    Ok(())
}
