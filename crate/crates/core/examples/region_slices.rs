//! Slices of the CuMS2 region at guaranteed r1 levels, time-shared with the
//! corollary points.

use cogrates::achievable::{compute_region, SamplingSpec};
use cogrates::corollary::corollary_points;
use cogrates::model::{ChannelConfig, Scheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ChannelConfig::default();
    let mut spec = SamplingSpec::new(5000, 3);
    spec.smart = true;
    let mut cloud = compute_region(&cfg, Scheme::Cums2, &spec)?;
    for id in 1..=4 {
        cloud.merge(corollary_points(id, &cfg, 51)?.into_iter().map(|p| p.to_cloud_point()));
    }
    for c in [0.0, 1.0, 1.5] {
        let poly = cloud.slice(0, c)?;
        println!("r1 >= {c}: {} hull points (r2, r3)", poly.len());
        for p in poly {
            println!("  {:.4} {:.4}", p[0], p[1]);
        }
    }
    Ok(())
}
