//! Outer bounds: the broadcast region of full transmitter cooperation (via
//! the dual MAC), individual rate caps, and a pairwise cooperative MIMO cap.

use nalgebra::{DMatrix, Matrix3, Vector3};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{ChannelConfig, RatePoint, Scheme, Sharing};
use crate::polytope::Point2;
use crate::region3::{Halfspace, Region3, View};

/// Default points per simplex edge for the power-split grid.
pub const DEFAULT_RESOLUTION: usize = 101;

/// The six decoding orders, first-decoded user first.
pub const ORDERS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Receiver rows `[1,a12,a13]`, `[a21,1,a23]`, `[a31,a32,1]`.
pub fn channel_rows(cfg: &ChannelConfig) -> [[f64; 3]; 3] {
    cfg.gains.matrix()
}

fn check_split(split: &[f64; 3]) -> Result<()> {
    if split.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite("power split"));
    }
    if split.iter().any(|&p| p < 0.0) {
        return Err(Error::Param(format!("negative power in split {split:?}")));
    }
    Ok(())
}

fn gram(rows: &[[f64; 3]; 3], split: &[f64; 3], users: &[usize], noise: f64) -> Matrix3<f64> {
    let mut m = Matrix3::identity();
    for &i in users {
        let h = Vector3::from(rows[i]);
        m += h * h.transpose() * (split[i] / noise);
    }
    m
}

/// `½ log2 det(I + Σ_{i∈users} P_i hᵢᵀhᵢ / noise)`.
pub fn mac_set_rate(rows: &[[f64; 3]; 3], split: &[f64; 3], users: &[usize], noise: f64) -> Result<f64> {
    check_split(split)?;
    if !(noise > 0.0) {
        return Err(Error::Param(format!("noise {noise} must be positive")));
    }
    Ok(0.5 * gram(rows, split, users, noise).determinant().log2())
}

/// Successive-decoding rates of the dual MAC for one split and order.
pub fn mac_rate_vector(
    rows: &[[f64; 3]; 3],
    split: &[f64; 3],
    order: &[usize; 3],
    noise: f64,
) -> Result<RatePoint> {
    let mut seen = [false; 3];
    for &i in order {
        if i >= 3 || seen[i] {
            return Err(Error::Param(format!("{order:?} is not a permutation of 0..3")));
        }
        seen[i] = true;
    }
    let mut out = [0.0; 3];
    for pos in 0..3 {
        let with = mac_set_rate(rows, split, &order[pos..], noise)?;
        let without = mac_set_rate(rows, split, &order[pos + 1..], noise)?;
        out[order[pos]] = (with - without).max(0.0);
    }
    Ok(out)
}

/// Power splits `P·(i,j,k)/(res-1)` with `i+j+k = res-1`.
pub fn simplex_grid(total: f64, resolution: usize) -> Result<Vec<[f64; 3]>> {
    if resolution < 2 {
        return Err(Error::Param(format!("grid resolution {resolution} must be at least 2")));
    }
    let n = resolution - 1;
    let mut out = Vec::with_capacity((n + 1) * (n + 2) / 2);
    for i in 0..=n {
        for j in 0..=n - i {
            let k = n - i - j;
            out.push([i, j, k].map(|x| total * x as f64 / n as f64));
        }
    }
    Ok(out)
}

/// MAC corner points of every split and decoding order, with the total
/// power of the three senders shared freely.
pub fn bc_outer_cloud(cfg: &ChannelConfig, resolution: usize, noise: f64) -> Result<Vec<RatePoint>> {
    let rows = channel_rows(cfg);
    let splits = simplex_grid(cfg.total_power(), resolution)?;
    let per: Vec<Vec<RatePoint>> = splits
        .par_iter()
        .map(|s| ORDERS.iter().map(|o| mac_rate_vector(&rows, s, o, noise)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

fn half_log(x: f64) -> f64 {
    0.5 * (1.0 + x).log2()
}

/// Result of water-filling over parallel channels.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterFill {
    /// Squared singular values, in input order.
    pub gains: Vec<f64>,
    pub powers: Vec<f64>,
    /// Water level; `None` when no mode receives power.
    pub level: Option<f64>,
    pub capacity: f64,
}

impl WaterFill {
    /// Worst violation among: total power, common level on active modes,
    /// and inactive floors lying at or above the level.
    pub fn kkt_residual(&self, total: f64, noise: f64) -> f64 {
        let sum: f64 = self.powers.iter().sum();
        let mut worst = (sum - total).abs();
        if let Some(w) = self.level {
            for (&g, &p) in self.gains.iter().zip(&self.powers) {
                if g <= 0.0 {
                    continue;
                }
                let floor = noise / g;
                if p > 0.0 {
                    worst = worst.max((p + floor - w).abs());
                } else {
                    worst = worst.max((w - floor).max(0.0));
                }
            }
        }
        worst
    }
}

/// Water-filling of `total` power over modes with squared gains `gains`.
pub fn water_fill(gains: &[f64], total: f64, noise: f64) -> Result<WaterFill> {
    if !(total >= 0.0) || !(noise > 0.0) || gains.iter().any(|g| !(*g >= 0.0)) {
        return Err(Error::Param("water-filling needs total >= 0, noise > 0 and nonnegative gains".into()));
    }
    let mut powers = vec![0.0; gains.len()];
    let mut idx: Vec<usize> = (0..gains.len()).filter(|&i| gains[i] > 0.0).collect();
    if idx.is_empty() || total == 0.0 {
        return Ok(WaterFill { gains: gains.to_vec(), powers, level: None, capacity: 0.0 });
    }
    idx.sort_by(|&a, &b| gains[b].total_cmp(&gains[a]));
    let floors: Vec<f64> = idx.iter().map(|&i| noise / gains[i]).collect();
    let mut level = 0.0;
    let mut active = 0;
    let mut acc = 0.0;
    for k in 0..idx.len() {
        acc += floors[k];
        let w = (total + acc) / (k + 1) as f64;
        if w > floors[k] {
            level = w;
            active = k + 1;
        } else {
            break;
        }
    }
    for k in 0..active {
        powers[idx[k]] = level - floors[k];
    }
    let capacity = idx.iter().map(|&i| half_log(powers[i] * gains[i] / noise)).sum();
    Ok(WaterFill { gains: gains.to_vec(), powers, level: Some(level), capacity })
}

/// Capacity of a point-to-point MIMO channel under a total power budget.
pub fn mimo_p2p_capacity(h: &DMatrix<f64>, total: f64, noise: f64) -> Result<WaterFill> {
    if h.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("channel matrix"));
    }
    let sv = h.clone().svd(false, false).singular_values;
    let gains: Vec<f64> = sv.iter().map(|s| s * s).collect();
    water_fill(&gains, total, noise)
}

/// One cap of an outer region.
#[derive(Debug, Clone, PartialEq)]
pub struct Cap {
    pub name: String,
    pub halfspace: Halfspace,
    pub value: f64,
}

fn cap(name: &str, normal: [f64; 3], value: f64) -> Cap {
    Cap { name: name.into(), halfspace: Halfspace::new(normal, value), value }
}

/// Pairwise cooperative matrix and its power for the sum-rate cap.
pub fn cooperation_pair(scheme: Scheme, cfg: &ChannelConfig) -> Result<((usize, usize), DMatrix<f64>, f64)> {
    let g = &cfg.gains;
    let [p1, p2, p3] = cfg.powers;
    match scheme.sharing() {
        Sharing::CognitiveOnly => Ok(((0, 1), DMatrix::from_row_slice(2, 2, &[1.0, g.a12, g.a21, 1.0]), p1 + p2)),
        _ if scheme.has_gaussian_form() => {
            Ok(((1, 2), DMatrix::from_row_slice(2, 2, &[1.0, g.a23, g.a32, 1.0]), p2 + p3))
        }
        _ => Err(Error::NoGaussianForm(scheme.to_string())),
    }
}

/// Single-rate caps and the cooperative pair cap of a scheme.
pub fn individual_caps(scheme: Scheme, cfg: &ChannelConfig) -> Result<Vec<Cap>> {
    if !scheme.has_gaussian_form() {
        return Err(Error::NoGaussianForm(scheme.to_string()));
    }
    let g = &cfg.gains;
    let [p1, p2, p3] = cfg.powers;
    let [q1, q2, q3] = cfg.noise;
    let coherent = |own: f64, helpers: &[(f64, f64)]| {
        let amp = own.sqrt() + helpers.iter().map(|(a, p)| a.abs() * p.sqrt()).sum::<f64>();
        amp * amp
    };
    let r1 = match scheme.sharing() {
        Sharing::CognitiveOnly => half_log(coherent(p1, &[(g.a13, p3)]) / q1),
        _ => half_log(coherent(p1, &[(g.a12, p2), (g.a13, p3)]) / q1),
    };
    let r2 = match scheme.sharing() {
        Sharing::PrimaryOnly => half_log(p2 / q2),
        _ => half_log(coherent(p2, &[(g.a23, p3)]) / q2),
    };
    let r3 = half_log(p3 / q3);
    let ((i, j), h, power) = cooperation_pair(scheme, cfg)?;
    let mimo = mimo_p2p_capacity(&h, power, cfg.noise[i].min(cfg.noise[j]))?.capacity;
    let mut pair = [0.0; 3];
    pair[i] = 1.0;
    pair[j] = 1.0;
    let pair_name = format!("r{}+r{}", i + 1, j + 1);
    Ok(vec![
        cap("r1", [1.0, 0.0, 0.0], r1),
        cap("r2", [0.0, 1.0, 0.0], r2),
        cap("r3", [0.0, 0.0, 1.0], r3),
        cap(&pair_name, pair, mimo),
    ])
}

#[derive(Debug, Clone)]
pub struct OuterRegion {
    pub scheme: Scheme,
    /// Raw broadcast-region corner points.
    pub cloud: Vec<RatePoint>,
    /// Cloud points satisfying every cap.
    pub retained: Vec<RatePoint>,
    pub caps: Vec<Cap>,
    pub region: Region3,
}

impl OuterRegion {
    pub fn view(&self, view: View) -> Vec<Point2> {
        self.region.view(view)
    }

    pub fn slice(&self, axis: usize, c: f64) -> Result<Vec<Point2>> {
        self.region.slice(axis, c)
    }

    pub fn contains(&self, x: RatePoint, tol: f64) -> bool {
        self.region.contains(x, tol)
    }

    pub fn boundary_gap(&self, x: RatePoint) -> f64 {
        self.region.boundary_gap(x)
    }
}

/// Broadcast region intersected with the scheme's caps. The dual MAC uses
/// receiver 1's noise for every user.
pub fn outer_region(scheme: Scheme, cfg: &ChannelConfig, resolution: usize) -> Result<OuterRegion> {
    outer_region_with(scheme, cfg, resolution, cfg.noise[0])
}

/// [`outer_region`] with an explicit dual-MAC noise level.
pub fn outer_region_with(scheme: Scheme, cfg: &ChannelConfig, resolution: usize, mac_noise: f64) -> Result<OuterRegion> {
    let caps = individual_caps(scheme, cfg)?;
    let cloud = bc_outer_cloud(cfg, resolution, mac_noise)?;
    let retained = cloud
        .iter()
        .copied()
        .filter(|&p| caps.iter().all(|c| c.halfspace.value(p) <= 1e-9))
        .collect();
    let cuts: Vec<Halfspace> = caps.iter().map(|c| c.halfspace).collect();
    let region = Region3::with_cuts(&cloud, &cuts)?;
    Ok(OuterRegion { scheme, cloud, retained, caps, region })
}
