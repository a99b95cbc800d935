//! Searches vectors `d, f, g, h` such that `dd*⊗gg* + ff*⊗hh*` has PSD block
//! grid and PSD transposed block grid but noncommuting blocks.

use posmap::lab::{noncommuting_quadruple_search, ExperimentConfig};

fn main() -> posmap::Result<()> {
    let report = noncommuting_quadruple_search(&ExperimentConfig::new(4, 1, 7))?;
    let s = &report.summary;
    println!("found after {} attempts: {}", s.attempts, s.found);
    println!("block grid min eigenvalue {:.3e}", s.block_grid_min_eigenvalue);
    println!("transposed block grid min eigenvalue {:.3e}", s.transposed_block_grid_min_eigenvalue);
    println!("‖[A00, A01]‖ = {:.3e}", s.commutator);
    Ok(())
}
