//! Tensor cones, their membership tests and sampled dual pairings.

use posmap::cones::{cone_membership, dual_cone_spotcheck, sample, ConeId, MembershipParams};
use posmap::matrix::max_entangled_projector;
use posmap::random::seeded;

fn main() -> posmap::Result<()> {
    let params = MembershipParams::standard();
    let bell = max_entangled_projector(2);
    for cone in [ConeId::Cp, ConeId::Cd, ConeId::Ccp, ConeId::Cppt, ConeId::Ci] {
        let v = cone_membership(&bell, 2, cone, &params)?;
        println!("maximally entangled projector in {:<6} {}", cone.name(), v.status.as_str());
    }
    let mut rng = seeded(2);
    let x = sample(ConeId::Cd, 3, &mut rng);
    println!("sampled C_d element at d=3 in C_p: {}", cone_membership(&x, 3, ConeId::Cp, &params)?.status.as_str());
    for (a, b) in [(ConeId::Cp, ConeId::Ci), (ConeId::Cd, ConeId::Cppt), (ConeId::Ccp, ConeId::Ccp)] {
        let r = dual_cone_spotcheck(a, b, 3, 200, 7, 1e-10);
        println!(
            "<{}, {}>: min pairing {:.3e} over {} samples, passed {}",
            r.alpha,
            r.beta,
            r.min_pairing,
            r.n_samples,
            r.passed()
        );
    }
    Ok(())
}
