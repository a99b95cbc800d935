//! Random PPT channels by alternating projection of a random Choi matrix
//! onto the PSD and partial-transpose-PSD cones.

use posmap::channels::sampling::{random_ppt_sample, PptSamplerOptions};
use posmap::channels::{is_ppt_map, LinearMap};
use posmap::random::stream;

fn main() -> posmap::Result<()> {
    for d in 2..=4 {
        let mut done = 0;
        for i in 0..5 {
            if let Some(s) = random_ppt_sample(d, &mut stream(9, i), &PptSamplerOptions::default())? {
                let v = is_ppt_map(&s.channel);
                println!(
                    "d={d} trial {i}: {} Kraus ops, {} iterations, residual {:.1e}, {}",
                    s.channel.kraus_ops().len(),
                    s.projection_iterations,
                    s.projection_residual,
                    v.status.as_str()
                );
                assert_eq!(s.channel.dim(), d);
                done += 1;
            }
        }
        println!("d={d}: {done}/5 projections converged");
    }
    Ok(())
}
