//! Positivity of 2×2 block matrices: direct, Cauchy–Schwarz and Schur
//! criteria, the M1 + M2 split, and the commutator statistics of `A^{1/2}`
//! against `A^{-1/2} X`.

use posmap::blockpos::{m1_m2_split, psd_equivalence_report, random_block_matrix, tomiyama_statistics, BlockMatrix2};
use posmap::matrix::{identity, PINV_CUTOFF};
use posmap::random::seeded;

fn main() -> posmap::Result<()> {
    let id = identity(2);
    let m = BlockMatrix2::new(id.clone(), id.clone(), id.clone() * posmap::matrix::c(2.0, 0.0))?;
    let r = psd_equivalence_report(&m, 16, 0);
    println!(
        "[[I, 2I], [2I, I]]: direct {} cauchy-schwarz {} schur {:?} agree {}",
        r.direct, r.cauchy_schwarz, r.schur, r.agree
    );

    let mut rng = seeded(3);
    let mut agree = 0;
    for i in 0..200 {
        agree += psd_equivalence_report(&random_block_matrix(3, &mut rng), 16, i).agree as usize;
    }
    println!("criteria agree on {agree}/200 random block matrices");

    let m = BlockMatrix2::from_assembled(&posmap::random::random_psd(4, 4, &mut rng))?;
    let split = m1_m2_split(&m, PINV_CUTOFF)?;
    println!("split: range residual {:.2e}, reassembly error {:.2e}", split.range_residual, split.reassembly_error);

    let t = tomiyama_statistics(500, 11);
    println!(
        "relative commutator over {} C_d samples: min {:.3e} median {:.3e} max {:.3e}, noncommuting {}",
        t.n, t.relative.min, t.relative.median, t.relative.max, t.noncommuting
    );
    Ok(())
}
