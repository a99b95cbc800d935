//! In 2⊗2 the decomposable and completely positive cones coincide: sampled
//! `C_d` elements reach the separable hull.

use posmap::blockpos::two_dim_cd_eq_cp_experiment;

fn main() {
    let r = two_dim_cd_eq_cp_experiment(200, 5);
    println!("samples {} max distance {:.3e} failures {}", r.n, r.max_distance, r.failures.len());
    println!("Gilbert iterations: mean {:.1} max {}", r.iterations.mean, r.iterations.max);
    for (w, count) in r.histogram.edges.windows(2).zip(&r.histogram.counts) {
        println!("  [{:.0e}, {:.0e}) {count}", w[0], w[1]);
    }
}
