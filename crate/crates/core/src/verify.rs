//! Cross-module consistency checks, runnable on any channel configuration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::achievable::{compute_region, sample_params, SamplingSpec};
use crate::constraints::build_system;
use crate::corollary::{corollary_at, corollary_points, scheme_of, sweep_max, IDS};
use crate::dmc::gaussian_mi_mc_terms;
use crate::error::Result;
use crate::gauss::{assemble_covariance, conditional_mi, Var};
use crate::model::{ChannelConfig, Scheme};
use crate::outer::{individual_caps, mac_rate_vector, mac_set_rate, outer_region_with, water_fill, ORDERS};
use crate::polytope::{convex_hull_2d, enumerate_vertices, polygon_contains, HalfspaceSystem};
use crate::region3::Region3;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub cfg: ChannelConfig,
    pub seed: u64,
    /// Samples per scheme for the containment check.
    pub samples: usize,
    pub resolution: usize,
    /// Dual-MAC noise; receiver 1's noise when unset.
    pub mac_noise: Option<f64>,
    /// Monte Carlo sample size per MI estimate.
    pub mc_samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            cfg: ChannelConfig::default(),
            seed: 1,
            samples: 300,
            resolution: 101,
            mac_noise: None,
            mc_samples: 100_000,
        }
    }
}

fn check(name: &'static str, r: Result<(bool, String)>) -> CheckResult {
    match r {
        Ok((passed, detail)) => CheckResult { name, passed, detail },
        Err(e) => CheckResult { name, passed: false, detail: format!("error: {e}") },
    }
}

pub fn run_all(opts: &VerifyOptions) -> Vec<CheckResult> {
    vec![
        check("constraint-counts", constraint_counts()),
        check("corollary-closed-form", corollary_closed_form(&opts.cfg)),
        check("containment", containment(opts)),
        check("corner-coincidence", corner_coincidence(opts)),
        check("mi-oracle", mi_oracle(opts)),
        check("water-filling-kkt", water_filling(opts.seed)),
        check("mac-consistency", mac_consistency(&opts.cfg, opts.seed)),
        check("polytope-grid-oracle", polytope_oracle(opts.seed, 20)),
    ]
}

fn constraint_counts() -> Result<(bool, String)> {
    let counts: Vec<usize> = Scheme::ALL.iter().map(|&s| build_system(s).len()).collect();
    let want = [36, 10, 36, 10, 7];
    Ok((counts == want, format!("{counts:?}")))
}

fn corollary_closed_form(cfg: &ChannelConfig) -> Result<(bool, String)> {
    let c1 = corollary_at(1, cfg, None)?;
    let c4 = corollary_at(4, cfg, None)?;
    let caps = individual_caps(Scheme::Cums2, cfg)?;
    let free = cfg.interference_free();
    let errs = [
        (c1[0].rate[0] - caps[0].value).abs(),
        (c4[0].rate[1] - caps[1].value).abs(),
        (c1[1].rate[2] - free[2]).abs(),
    ];
    let worst = errs.iter().fold(0.0f64, |m, &e| m.max(e));
    Ok((
        worst < 1e-12,
        format!("R1*={:.6} R2*={:.6} R3*={:.6} C4 R2*={:.6}", c1[0].rate[0], c1[1].rate[1], c1[1].rate[2], c4[0].rate[1]),
    ))
}

fn containment(opts: &VerifyOptions) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for s in Scheme::GAUSSIAN {
        let cloud = compute_region(&opts.cfg, s, &SamplingSpec::new(opts.samples, opts.seed))?;
        let outer = outer_region_with(s, &opts.cfg, opts.resolution, opts.mac_noise.unwrap_or(opts.cfg.noise[0]))?;
        let outside = cloud.points.iter().filter(|p| !outer.contains(p.rate, 1e-6)).count();
        let inner_r1 = cloud.points.iter().map(|p| p.rate[0]).fold(0.0, f64::max);
        let gap = outer.region.support([1.0, 0.0, 0.0]) - inner_r1;
        ok &= outside == 0 && gap <= 2.0;
        parts.push(format!("{s}: {outside} outside, r1 gap {gap:.4}"));
    }
    let cor_out: usize = IDS
        .iter()
        .map(|&id| -> Result<usize> {
            let outer = outer_region_with(scheme_of(id)?, &opts.cfg, opts.resolution, opts.mac_noise.unwrap_or(opts.cfg.noise[0]))?;
            Ok(corollary_points(id, &opts.cfg, 11)?.iter().filter(|p| !outer.contains(p.rate, 1e-6)).count())
        })
        .sum::<Result<usize>>()?;
    ok &= cor_out == 0;
    parts.push(format!("corollary points outside: {cor_out}"));
    Ok((ok, parts.join("; ")))
}

fn corner_coincidence(opts: &VerifyOptions) -> Result<(bool, String)> {
    let outer = outer_region_with(Scheme::Cums2, &opts.cfg, opts.resolution, opts.mac_noise.unwrap_or(opts.cfg.noise[0]))?;
    let max = sweep_max(2, &opts.cfg)?.unwrap_or(0.0);
    let mut worst = 0.0f64;
    for r in [0.0, max] {
        for p in corollary_at(2, &opts.cfg, Some(r))? {
            let gap = outer.boundary_gap(p.rate);
            worst = worst.max(gap.abs());
        }
    }
    Ok((worst <= 1e-3, format!("largest distance to the outer boundary {worst:.2e}")))
}

fn mi_oracle(opts: &VerifyOptions) -> Result<(bool, String)> {
    let terms = distinct_terms(Scheme::Cums2);
    let spec = SamplingSpec::new(5, opts.seed ^ 0x5eed);
    let mut fails = 0;
    let mut total = 0;
    for i in 0..5 {
        let table = assemble_covariance(&opts.cfg, &sample_params(&spec, i), Scheme::Cums2)?;
        let picked: Vec<_> = (0..3).map(|k| terms[(3 * i + k) % terms.len()].clone()).collect();
        let exact: Vec<Option<f64>> = picked.iter().map(|(a, b, c)| conditional_mi(&table, a, b, c).ok()).collect();
        let Ok(est) = gaussian_mi_mc_terms(&table, &picked, opts.mc_samples, opts.seed + i as u64) else {
            continue;
        };
        for (e, x) in est.iter().zip(&exact) {
            if let Some(x) = x {
                total += 1;
                if !e.agrees(*x, 3.0) {
                    fails += 1;
                }
            }
        }
    }
    Ok((total > 0 && fails <= 1, format!("{fails} of {total} estimates outside 3 standard errors")))
}

/// Distinct `I(a;b|c)` terms of a scheme with `Q` removed.
pub fn distinct_terms(scheme: Scheme) -> Vec<(Vec<Var>, Vec<Var>, Vec<Var>)> {
    let mut out: Vec<(Vec<Var>, Vec<Var>, Vec<Var>)> = Vec::new();
    for row in &build_system(scheme).rows {
        for t in &row.rhs {
            let c: Vec<Var> = t.c.iter().copied().filter(|&v| v != Var::Q).collect();
            let key = (t.a.clone(), t.b.clone(), c);
            if !out.contains(&key) {
                out.push(key);
            }
        }
    }
    out
}

fn water_filling(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut monotone = true;
    for _ in 0..20 {
        let k = rng.gen_range(1..6);
        let gains: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..4.0)).collect();
        let p = rng.gen_range(0.0..50.0);
        let wf = water_fill(&gains, p, 1.0)?;
        worst = worst.max(wf.kkt_residual(p, 1.0));
        monotone &= water_fill(&gains, p + 1.0, 1.0)?.capacity >= wf.capacity;
    }
    Ok((worst <= 1e-9 && monotone, format!("largest KKT residual {worst:.2e}")))
}

fn mac_consistency(cfg: &ChannelConfig, seed: u64) -> Result<(bool, String)> {
    let rows = cfg.gains.matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = cfg.total_power();
    let mut order_err = 0.0f64;
    let mut submod = f64::INFINITY;
    for _ in 0..20 {
        let w: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
        let s: f64 = w.iter().sum();
        let split = w.map(|x| total * x / s);
        let sums: Vec<f64> = ORDERS
            .iter()
            .map(|o| mac_rate_vector(&rows, &split, o, 1.0).map(|r| r.iter().sum()))
            .collect::<Result<_>>()?;
        for x in &sums {
            order_err = order_err.max((x - sums[0]).abs());
        }
        submod = submod.min(submodularity_margin(&rows, &split)?);
    }
    Ok((
        order_err <= 1e-9 && submod >= -1e-9,
        format!("order spread {order_err:.2e}, least submodularity margin {submod:.2e}"),
    ))
}

/// Smallest `f(S) + f(T) - f(S∪T) - f(S∩T)` over all subset pairs.
pub fn submodularity_margin(rows: &[[f64; 3]; 3], split: &[f64; 3]) -> Result<f64> {
    let set = |m: usize| (0..3).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>();
    let mut f = [0.0; 8];
    for (m, v) in f.iter_mut().enumerate() {
        *v = mac_set_rate(rows, split, &set(m), 1.0)?;
    }
    let mut least = f64::INFINITY;
    for s in 0..8 {
        for t in 0..8 {
            least = least.min(f[s] + f[t] - f[s | t] - f[s & t]);
        }
    }
    Ok(least)
}

/// Random bounded down-closed system with small integer coefficients.
pub fn random_system(rng: &mut impl Rng, dim: usize) -> Result<HalfspaceSystem> {
    // smaller boxes in 3D keep grid scans cheap
    let top = if dim == 2 { 8 } else { 4 };
    let mut a = Vec::new();
    let mut b = Vec::new();
    for k in 0..dim {
        let mut row = vec![0.0; dim];
        row[k] = 1.0;
        a.push(row);
        b.push(rng.gen_range(0..=top) as f64 * 0.25);
    }
    for _ in 0..rng.gen_range(1..5) {
        a.push((0..dim).map(|_| rng.gen_range(0..=3) as f64).collect());
        b.push(rng.gen_range(0..=top + top / 2) as f64 * 0.25);
    }
    HalfspaceSystem::new(dim, a, b)
}

/// Compares vertex enumeration against a feasibility scan at `step`:
/// returns how far feasible grid points reach outside the hull of the
/// vertices (in 2D just 1 or 0) and the largest constraint violation of
/// any vertex.
pub fn grid_oracle(sys: &HalfspaceSystem, step: f64) -> Result<(f64, f64)> {
    let verts = enumerate_vertices(sys)?;
    let mut worst_violation = 0.0f64;
    for v in &verts {
        for (row, rhs) in sys.rows() {
            let lhs: f64 = row.iter().zip(v).map(|(a, x)| a * x).sum();
            worst_violation = worst_violation.max(lhs - rhs);
        }
        worst_violation = worst_violation.max(v.iter().fold(0.0f64, |m, &x| m.max(-x)));
    }
    let dim = sys.dim();
    let ub: Vec<f64> = (0..dim)
        .map(|k| verts.iter().map(|v| v[k]).fold(0.0, f64::max) + 2.0 * step)
        .collect();
    let steps: Vec<usize> = ub.iter().map(|u| (u / step).ceil() as usize).collect();
    let mut outside = 0.0f64;
    if dim == 2 {
        let hull = convex_hull_2d(&verts.iter().map(|v| [v[0], v[1]]).collect::<Vec<_>>())?;
        for i in 0..=steps[0] {
            for j in 0..=steps[1] {
                let p = [i as f64 * step, j as f64 * step];
                if sys.contains(&p, 0.0) && !polygon_contains(&hull, p, 1e-6) {
                    outside = outside.max(1.0);
                }
            }
        }
    } else {
        // the systems are down-closed, so the hull of the vertices is too
        let hull = Region3::down_closed_hull(&verts.iter().map(|v| [v[0], v[1], v[2]]).collect::<Vec<_>>())?;
        for i in 0..=steps[0] {
            for j in 0..=steps[1] {
                for k in 0..=steps[2] {
                    let p = [i as f64 * step, j as f64 * step, k as f64 * step];
                    if sys.contains(&p, 0.0) && !hull.contains(p, 1e-6) {
                        outside = outside.max(hull.boundary_gap(p).abs());
                    }
                }
            }
        }
    }
    Ok((outside, worst_violation))
}

fn polytope_oracle(seed: u64, n: usize) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = (0.0f64, 0.0f64);
    for i in 0..n {
        let sys = random_system(&mut rng, 2 + i % 2)?;
        let (o, v) = grid_oracle(&sys, if i % 2 == 0 { 0.01 } else { 0.05 })?;
        worst = (worst.0.max(o), worst.1.max(v));
    }
    Ok((worst.0 <= 1e-6 && worst.1 <= 1e-7, format!("grid outside {:.1e}, vertex violation {:.1e}", worst.0, worst.1)))
}
