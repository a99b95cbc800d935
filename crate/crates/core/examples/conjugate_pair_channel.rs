//! The conjugate-pair channel built from `v` and `Jv`: PPT, entanglement
//! breaking, invariant under composition with the transpose.

use posmap::lab::{conjugate_pair_report, ExperimentConfig};
use posmap::matrix::{c, ComplexVector};

fn main() -> posmap::Result<()> {
    let config = ExperimentConfig::new(2, 1, 0);
    for v in [None, Some(ComplexVector::from_vec(vec![c(0.6, 0.1), c(0.0, 0.8)]))] {
        let report = conjugate_pair_report(&config, v)?;
        println!("v = {:?}", report.summary.v.as_slice());
        for check in &report.records {
            println!("  {:<32} {:<5} value {:.3e}", check.name, check.passed, check.value);
        }
        println!("  unital scale {:?}", report.summary.unital_scale);
    }
    Ok(())
}
