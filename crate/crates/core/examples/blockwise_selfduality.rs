//! Blockwise self-duality of `C_cp`: the functional `Tr(R·A)` tested on
//! Gram and rank-one probes against direct PSD testing of `R`.

use posmap::cones::blockwise_selfduality_check;
use posmap::matrix::{c, identity, ComplexMatrix};
use posmap::random::{random_psd, seeded};

fn main() -> posmap::Result<()> {
    let psd = random_psd(6, 6, &mut seeded(1));
    let r = blockwise_selfduality_check(&psd, 2, 64, 1)?;
    println!("PSD input: direct {} verdict {} agree {}", r.direct_psd, r.verdict.status.as_str(), r.agrees);

    let mut shifted: ComplexMatrix = psd.clone();
    let lowest = posmap::matrix::eigenvalues_hermitian(&psd)[0];
    shifted -= identity(6) * c(lowest + 1e-3, 0.0);
    let r = blockwise_selfduality_check(&shifted, 2, 64, 1)?;
    println!(
        "shifted input: min eigenvalue {:.2e}, verdict {} via probe value {:?}, agree {}",
        r.direct_min_eigenvalue,
        r.verdict.status.as_str(),
        r.targeted_value,
        r.agrees
    );
    Ok(())
}
