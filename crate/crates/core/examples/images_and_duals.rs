//! `C_d` images under PPT channels tested in `C_p`, and `C_i` images under
//! dual PPT channels tested in `C_PPT`.

use posmap::lab::{duality_check, image_experiment, ExperimentConfig};

fn main() -> posmap::Result<()> {
    for dim in [2, 3] {
        let r = image_experiment(&ExperimentConfig::new(dim, 40, 3))?;
        println!("image d={dim}: {:?}, candidates {}", r.summary.membership, r.summary.candidates);
        let r = duality_check(&ExperimentConfig::new(dim, 100, 3))?;
        println!("duality d={dim}: min pairing {:.3e}, images {:?}", r.summary.min_pairing, r.summary.images);
    }
    Ok(())
}
