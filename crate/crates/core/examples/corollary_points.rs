//! Closed-form corollary points at the default channel, with the swept ones
//! at both ends of their range.

use cogrates::corollary::{corollary_at, is_swept, scheme_of, sweep_max, IDS};
use cogrates::model::ChannelConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ChannelConfig::default();
    for id in IDS {
        let levels = match sweep_max(id, &cfg)? {
            Some(max) => vec![Some(0.0), Some(max)],
            None => vec![None],
        };
        println!("corollary {id} ({}{})", scheme_of(id)?, if is_swept(id) { ", swept" } else { "" });
        for r in levels {
            for p in corollary_at(id, &cfg, r)? {
                let [a, b, c] = p.rate;
                match r {
                    Some(r) => println!("  r = {r:.4}: ({a:.4}, {b:.4}, {c:.4})"),
                    None => println!("  ({a:.4}, {b:.4}, {c:.4})"),
                }
            }
        }
    }
    Ok(())
}
