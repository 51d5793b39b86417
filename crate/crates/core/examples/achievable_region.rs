//! Samples the achievable region of each Gaussian scheme and prints the
//! r1 versus r2 + r3 boundary.
//!
//! cargo run --release --example achievable_region -- 5000

use cogrates::achievable::{compute_region, SamplingSpec};
use cogrates::model::{ChannelConfig, Scheme};
use cogrates::region3::View;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let samples = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(2000);
    let cfg = ChannelConfig::default();
    for scheme in Scheme::GAUSSIAN {
        let cloud = compute_region(&cfg, scheme, &SamplingSpec::new(samples, 7))?;
        let d = &cloud.diagnostics;
        println!("{scheme}: {} of {} draws feasible", d.feasible, d.draws);
        for p in cloud.view(View::R1VsR23)? {
            println!("  {:.4} {:.4}", p[0], p[1]);
        }
    }
    Ok(())
}
