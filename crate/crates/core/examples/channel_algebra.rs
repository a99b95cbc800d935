//! Kraus and Choi representations, composition, duals and the transpose.

use posmap::channels::library::{depolarizing, transpose_map};
use posmap::channels::sampling::random_cp_channel;
use posmap::channels::{compose, compose_maps, dual_map, kraus_from_choi, max_map_difference, LinearMap};
use posmap::matrix::{eigenvalues_hermitian, max_abs_diff};
use posmap::random::seeded;

fn main() -> posmap::Result<()> {
    let mut rng = seeded(1);
    let t = random_cp_channel(3, 2, &mut rng);
    let choi = t.choi();
    println!("Choi spectrum of a random Kraus-rank-2 channel: {:.4?}", eigenvalues_hermitian(choi.matrix()));

    let back = kraus_from_choi(&choi, 1e-12)?;
    println!("Kraus operators recovered: {}", back.kraus_ops().len());
    println!("Choi round-trip error: {:.2e}", max_abs_diff(back.choi().matrix(), choi.matrix()));

    let tt = compose_maps(&transpose_map(3), &transpose_map(3))?;
    println!(
        "t∘t versus identity: {:.2e}",
        max_abs_diff(tt.choi().matrix(), &posmap::channels::library::identity_channel(3).choi().into_matrix())
    );

    let s = depolarizing(3);
    let st = compose(&s, &t)?;
    println!("depolarizing∘T has {} Kraus operators", st.kraus_ops().len());
    println!("dual of the dual equals T: {:.2e}", max_map_difference(&dual_map(&dual_map(&t)), &t));
    Ok(())
}
