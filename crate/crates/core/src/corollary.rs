//! Closed-form achievable points where cognitive senders relay or stay
//! silent, and their time-sharing with a sampled region.

use crate::achievable::{CloudPoint, Provenance, RegionCloud};
use crate::error::{Error, Result};
use crate::model::{ChannelConfig, RatePoint, Scheme};
use crate::region3::Region3;

/// Default number of sweep values per swept corollary.
pub const DEFAULT_SWEEP_POINTS: usize = 101;

pub const IDS: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorollaryPoint {
    pub id: u8,
    /// Guaranteed rate `r` for swept corollaries.
    pub sweep: Option<f64>,
    pub rate: RatePoint,
}

impl CorollaryPoint {
    pub fn to_cloud_point(self) -> CloudPoint {
        CloudPoint { rate: self.rate, source: Provenance::Corollary(self.id) }
    }
}

fn check_id(id: u8) -> Result<()> {
    if IDS.contains(&id) {
        Ok(())
    } else {
        Err(Error::Param(format!("no corollary {id}; valid ids are 1..=9")))
    }
}

/// Scheme whose region the corollary extends.
pub fn scheme_of(id: u8) -> Result<Scheme> {
    check_id(id)?;
    Ok(match id {
        1..=4 => Scheme::Cums2,
        5..=7 => Scheme::Prms2,
        _ => Scheme::Coms,
    })
}

pub fn is_swept(id: u8) -> bool {
    matches!(id, 2 | 3 | 6 | 7 | 9)
}

fn hl(x: f64) -> f64 {
    0.5 * (1.0 + x).log2()
}

fn sq(x: f64) -> f64 {
    x * x
}

/// Largest guaranteed rate of a swept corollary, reached when the helper
/// power is exhausted.
pub fn sweep_max(id: u8, cfg: &ChannelConfig) -> Result<Option<f64>> {
    check_id(id)?;
    let [_, p2, p3] = cfg.powers;
    let [_, q2, q3] = cfg.noise;
    let g = &cfg.gains;
    Ok(match id {
        2 | 9 => Some(hl(p3 / q3)),
        3 | 7 => Some(hl(p2 / (q2 + sq(g.a23) * p3))),
        6 => Some(hl(p3 / (q3 + sq(g.a32) * p2))),
        _ => None,
    })
}

/// Points of corollary `id`; swept corollaries need the guaranteed rate `r`.
pub fn corollary_at(id: u8, cfg: &ChannelConfig, r: Option<f64>) -> Result<Vec<CorollaryPoint>> {
    check_id(id)?;
    let [p1, p2, p3] = cfg.powers;
    let [q1, q2, q3] = cfg.noise;
    let g = &cfg.gains;
    let (a12, a13, a21, a23, a32) = (g.a12.abs(), g.a13.abs(), g.a21.abs(), g.a23.abs(), g.a32.abs());
    let r = match (sweep_max(id, cfg)?, r) {
        (Some(max), Some(r)) => {
            if !(r >= 0.0 && r <= max * (1.0 + 1e-12)) {
                return Err(Error::SweepRange { value: r, max });
            }
            r.min(max)
        }
        (Some(_), None) => return Err(Error::Param(format!("corollary {id} needs a guaranteed rate"))),
        (None, Some(_)) => return Err(Error::Param(format!("corollary {id} takes no sweep value"))),
        (None, None) => 0.0,
    };
    // power a helper must spend to carry rate r over effective noise n
    let spend = |n: f64| (2f64.powf(2.0 * r) - 1.0) * n;
    let rest = |total: f64, used: f64| (total - used).max(0.0);

    let full_r1 = hl(sq(p1.sqrt() + a12 * p2.sqrt() + a13 * p3.sqrt()) / q1);
    let rates: Vec<RatePoint> = match id {
        1 => vec![[full_r1, 0.0, 0.0], [0.0, hl(p2 / (q2 + sq(a23) * p3)), hl(p3 / q3)]],
        2 => {
            let own = spend(q3);
            let help = rest(p3, own);
            let r1 = hl(sq(p1.sqrt() + a12 * p2.sqrt() + a13 * help.sqrt()) / (q1 + sq(a13) * own));
            let r2 = hl(sq(p2.sqrt() + a23 * help.sqrt()) / (q2 + sq(a23) * own));
            vec![[r1, 0.0, r], [0.0, r2, r]]
        }
        3 => {
            let own = spend(q2 + sq(a23) * p3);
            let help = rest(p2, own);
            let r1 = hl(sq(p1.sqrt() + a12 * help.sqrt() + a13 * p3.sqrt()) / (q1 + sq(a12) * own));
            vec![[r1, r, 0.0], [0.0, r, hl(p3 / q3)]]
        }
        4 => vec![[0.0, hl(sq(p2.sqrt() + a23 * p3.sqrt()) / q2), 0.0], [0.0, 0.0, hl(p3 / q3)]],
        5 => vec![[full_r1, 0.0, 0.0], [0.0, hl(p2 / (q2 + sq(a23) * p3)), hl(p3 / (q3 + sq(a32) * p2))]],
        6 => {
            let own = spend(q3 + sq(a32) * p2);
            let help = rest(p3, own);
            let r1 = hl(sq(p1.sqrt() + a12 * p2.sqrt() + a13 * help.sqrt()) / (q1 + sq(a13) * own));
            vec![[r1, 0.0, r], [0.0, hl(p2 / (q2 + sq(a23) * p3)), r]]
        }
        7 => {
            let own = spend(q2 + sq(a23) * p3);
            let help = rest(p2, own);
            let r1 = hl(sq(p1.sqrt() + a12 * help.sqrt() + a13 * p3.sqrt()) / (q1 + sq(a12) * own));
            vec![[r1, r, 0.0], [0.0, r, hl(p3 / (q3 + sq(a32) * p2))]]
        }
        8 => vec![
            [hl(sq(p1.sqrt() + a13 * p3.sqrt()) / (q1 + sq(a12) * p2)), 0.0, 0.0],
            [0.0, hl(sq(p2.sqrt() + a23 * p3.sqrt()) / (q2 + sq(a21) * p1)), 0.0],
            [0.0, 0.0, hl(p3 / q3)],
        ],
        9 => {
            let own = spend(q3);
            let help = rest(p3, own);
            let r1 = hl(sq(p1.sqrt() + a13 * help.sqrt()) / (q1 + sq(a12) * p2 + sq(a13) * own));
            // sender 3's help towards receiver 2 is weighted by a13, as stated
            let r2 = hl(sq(p2.sqrt() + a13 * help.sqrt()) / (q2 + sq(a21) * p1 + sq(a13) * own));
            vec![[r1, 0.0, r], [0.0, r2, r], [0.0, 0.0, r]]
        }
        _ => unreachable!(),
    };
    let sweep = if is_swept(id) { Some(r) } else { None };
    Ok(rates.into_iter().map(|rate| CorollaryPoint { id, sweep, rate }).collect())
}

/// All points of corollary `id`, sweeping `r` over `points` evenly spaced
/// values in its feasible interval.
pub fn corollary_points(id: u8, cfg: &ChannelConfig, points: usize) -> Result<Vec<CorollaryPoint>> {
    match sweep_max(id, cfg)? {
        None => corollary_at(id, cfg, None),
        Some(max) => {
            if points < 2 {
                return Err(Error::Param(format!("sweep needs at least 2 points, got {points}")));
            }
            let mut out = Vec::new();
            for k in 0..points {
                let r = max * k as f64 / (points - 1) as f64;
                out.extend(corollary_at(id, cfg, Some(r))?);
            }
            Ok(out)
        }
    }
}

/// Convex hull of a sampled region together with corollary points.
pub fn time_share_hull(cloud: &RegionCloud, points: &[CorollaryPoint]) -> Result<Region3> {
    let mut all = cloud.rates();
    all.extend(points.iter().map(|p| p.rate));
    Region3::down_closed_hull(&all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn fixed_points_at_defaults() {
        let cfg = ChannelConfig::default();
        let c1 = corollary_at(1, &cfg, None).unwrap();
        assert_eq!(c1.len(), 2);
        assert!(close(c1[0].rate[0], 2.747528, 1e-6));
        assert!(close(c1[1].rate[1], 0.5 * (1.0 + 10.0 / 4.025f64).log2(), 1e-12));
        assert!(close(c1[1].rate[1], 0.900470, 1e-6));
        assert!(close(c1[1].rate[2], 0.5 * 11f64.log2(), 1e-15));
        let c4 = corollary_at(4, &cfg, None).unwrap();
        assert!(close(c4[0].rate[1], 0.5 * 25.025f64.log2(), 1e-12));
        let c5 = corollary_at(5, &cfg, None).unwrap();
        assert!(close(c5[1].rate[2], c1[1].rate[1], 1e-12));
        assert_eq!(corollary_at(8, &cfg, None).unwrap().len(), 3);
    }

    #[test]
    fn zero_power_gives_origin() {
        let cfg = ChannelConfig { powers: [0.0; 3], ..Default::default() };
        for id in IDS {
            for p in corollary_points(id, &cfg, 5).unwrap() {
                assert_eq!(p.rate, [0.0; 3], "corollary {id}");
            }
        }
    }

    #[test]
    fn sweep_ends() {
        let cfg = ChannelConfig::default();
        let pts = corollary_points(2, &cfg, 101).unwrap();
        assert_eq!(pts.len(), 202);
        let first = &pts[..2];
        assert!(close(first[0].rate[0], 2.747528, 1e-6));
        assert!(close(first[1].rate[1], 2.322649, 1e-6));
        let last = &pts[200..];
        assert!(close(last[0].rate[0], 1.400478, 1e-5));
        assert!(close(last[1].rate[1], 0.900470, 1e-6));
        assert!(close(last[0].rate[2], 1.729716, 1e-6));
    }

    #[test]
    fn out_of_range_sweep_reports_max() {
        let cfg = ChannelConfig::default();
        match corollary_at(3, &cfg, Some(5.0)) {
            Err(Error::SweepRange { value, max }) => {
                assert_eq!(value, 5.0);
                assert!(close(max, 0.900470, 1e-6));
            }
            other => panic!("{other:?}"),
        }
        assert!(corollary_at(3, &cfg, Some(-0.1)).is_err());
        assert!(corollary_at(3, &cfg, None).is_err());
        assert!(corollary_at(1, &cfg, Some(0.1)).is_err());
        assert!(corollary_at(10, &cfg, None).is_err());
    }

    #[test]
    fn sweeps_are_continuous() {
        let cfg = ChannelConfig::default();
        for id in [2u8, 6, 9] {
            let max = sweep_max(id, &cfg).unwrap().unwrap();
            let n = (max / 0.01).ceil() as usize + 1;
            let pts = corollary_points(id, &cfg, n).unwrap();
            let k = pts.len() / n;
            for w in 0..n - 1 {
                for j in 0..k {
                    let a = pts[w * k + j].rate;
                    let b = pts[(w + 1) * k + j].rate;
                    let jump = (0..3).map(|x| (a[x] - b[x]).abs()).fold(0.0, f64::max);
                    // generous Lipschitz bound away from the power-exhaustion end
                    assert!(jump < 0.2, "corollary {id} step {w}: {jump}");
                }
            }
        }
    }

    #[test]
    fn schemes() {
        assert_eq!(scheme_of(3).unwrap(), Scheme::Cums2);
        assert_eq!(scheme_of(6).unwrap(), Scheme::Prms2);
        assert_eq!(scheme_of(9).unwrap(), Scheme::Coms);
    }
}
