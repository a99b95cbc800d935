//! The separability ladder on a family of isotropic states and a random
//! separable state in 3⊗3, where PPT does not decide separability.

use posmap::matrix::{c, identity, max_entangled_projector};
use posmap::random::seeded;
use posmap::separability::{
    is_separable, random_separable_state, separable_approx, GilbertOptions, SeparabilityPolicy,
};

fn main() -> posmap::Result<()> {
    let policy = SeparabilityPolicy::default();
    for d in [2usize, 3] {
        for p in [0.1, 0.2, 0.3, 0.4, 0.9] {
            let n = d * d;
            let rho = max_entangled_projector(d) * c(p / d as f64, 0.0) + identity(n) * c((1.0 - p) / n as f64, 0.0);
            let v = is_separable(&rho, d, d, &policy)?;
            println!("d={d} p={p:.1}: {:<14} residual {:+.3e}", v.status.as_str(), v.residual);
        }
    }
    let rho = random_separable_state(3, 3, 6, &mut seeded(4));
    let approx = separable_approx(&rho, 3, 3, GilbertOptions::default())?;
    println!(
        "random separable 3⊗3: distance {:.2e} after {} iterations with {} product terms",
        approx.distance,
        approx.iterations,
        approx.decomposition.terms.len()
    );
    Ok(())
}
