//! Outer bound of each scheme: caps, the cooperative MIMO cap and the
//! r1 versus r2 + r3 boundary.

use cogrates::model::{ChannelConfig, Scheme};
use cogrates::outer::{cooperation_pair, mimo_p2p_capacity, outer_region, DEFAULT_RESOLUTION};
use cogrates::region3::View;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ChannelConfig::default();
    for scheme in Scheme::GAUSSIAN {
        let region = outer_region(scheme, &cfg, DEFAULT_RESOLUTION)?;
        println!("{scheme}: {} of {} broadcast points within the caps", region.retained.len(), region.cloud.len());
        for cap in &region.caps {
            println!("  {} <= {:.6}", cap.name, cap.value);
        }
        let ((i, j), h, total) = cooperation_pair(scheme, &cfg)?;
        let wf = mimo_p2p_capacity(&h, total, cfg.noise[i].min(cfg.noise[j]))?;
        println!("  senders {} and {} cooperating: powers {:?}", i + 1, j + 1, wf.powers);
        for p in region.view(View::R1VsR23) {
            println!("  {:.4} {:.4}", p[0], p[1]);
        }
    }
    Ok(())
}
