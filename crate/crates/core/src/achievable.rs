//! Achievable regions as unions of per-sample polytopes over random Gaussian
//! codebook parameters.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::constraints::{build_system, evaluate_system, ConstraintSystem};
use crate::error::{Error, Result};
use crate::gauss::assemble_covariance;
use crate::model::{ChannelConfig, GpParams, RatePoint, Scheme};
use crate::polytope::{convex_hull_2d, drop_axis, enumerate_vertices, project, slice_min_rate, HalfspaceSystem, Point2};
use crate::region3::{Region3, View};

/// Fixed values for some of the codebook parameters.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ParamOverride {
    pub tau: Option<f64>,
    pub kappa: Option<f64>,
    pub alpha: Option<[f64; 4]>,
    pub beta: Option<[f64; 2]>,
}

impl ParamOverride {
    /// Forces all dirty-paper coefficients to zero.
    pub fn no_binning() -> Self {
        ParamOverride { alpha: Some([0.0; 4]), beta: Some([0.0; 2]), ..Default::default() }
    }

    fn apply(&self, p: &mut GpParams) {
        if let Some(t) = self.tau {
            p.tau = t;
        }
        if let Some(k) = self.kappa {
            p.kappa = k;
        }
        if let Some(a) = self.alpha {
            p.alpha = a;
        }
        if let Some(b) = self.beta {
            p.beta = b;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingSpec {
    pub samples: usize,
    pub seed: u64,
    pub overrides: ParamOverride,
    /// Also evaluate one Costa-style draw per random draw.
    pub smart: bool,
}

impl SamplingSpec {
    pub fn new(samples: usize, seed: u64) -> Self {
        SamplingSpec { samples, seed, overrides: ParamOverride::default(), smart: false }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Config { field: "samples".into(), reason: "must be at least 1".into() });
        }
        let o = &self.overrides;
        let probe = GpParams {
            tau: o.tau.unwrap_or(0.5),
            kappa: o.kappa.unwrap_or(0.5),
            alpha: o.alpha.unwrap_or([0.0; 4]),
            beta: o.beta.unwrap_or([0.0; 2]),
        };
        probe.validate()
    }

    /// Total number of parameter draws evaluated.
    pub fn draws(&self) -> usize {
        if self.smart {
            2 * self.samples
        } else {
            self.samples
        }
    }
}

fn rng_for(seed: u64, i: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

/// Random draw `i`: split fractions uniform on [0,1], coefficients N(0,1).
/// Depends only on `(spec.seed, i)`.
pub fn sample_params(spec: &SamplingSpec, i: usize) -> GpParams {
    let mut rng = rng_for(spec.seed, i);
    let tau = rng.gen::<f64>();
    let kappa = rng.gen::<f64>();
    let mut alpha = [0.0; 4];
    for a in &mut alpha {
        *a = rng.sample(StandardNormal);
    }
    let beta = [rng.sample(StandardNormal), rng.sample(StandardNormal)];
    let mut p = GpParams { tau, kappa, alpha, beta };
    spec.overrides.apply(&mut p);
    p
}

/// Costa-style coefficients for given split fractions: each auxiliary is
/// scaled to the known interference at its own receiver by
/// signal / (signal + everything else).
pub fn costa_params(cfg: &ChannelConfig, scheme: Scheme, tau: f64, kappa: f64) -> GpParams {
    let [_, p2, p3] = cfg.powers;
    let [_, q2, q3] = cfg.noise;
    let g = &cfg.gains;
    let w = |s: f64, rest: f64| if s + rest > 0.0 { s / (s + rest) } else { 0.0 };
    let (s21, s22) = match scheme {
        Scheme::Coms => (p2, 0.0),
        _ => (tau * p2, (1.0 - tau) * p2),
    };
    let other2 = q2 + g.a23 * g.a23 * p3;
    let (s31, s33) = (kappa * p3, (1.0 - kappa) * p3);
    let w21 = w(s21, s22 + other2);
    let w22 = w(s22, s21 + other2);
    let w31 = w(s31, s33 + q3);
    let w33 = w(s33, s31 + q3);
    GpParams {
        tau,
        kappa,
        alpha: [g.a21 * w21, g.a21 * w22, g.a31 * w31, g.a31 * w33],
        beta: [g.a32 * w31, g.a32 * w33],
    }
}

/// Parameters of draw `i` in the full (possibly smart) draw sequence.
pub fn draw_params(cfg: &ChannelConfig, scheme: Scheme, spec: &SamplingSpec, i: usize) -> GpParams {
    if i < spec.samples {
        return sample_params(spec, i);
    }
    let base = sample_params(spec, i - spec.samples);
    let mut p = costa_params(cfg, scheme, base.tau, base.kappa);
    spec.overrides.apply(&mut p);
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    Origin,
    Sample(usize),
    Corollary(u8),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloudPoint {
    pub rate: RatePoint,
    pub source: Provenance,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    pub draws: usize,
    pub feasible: usize,
    pub infeasible: usize,
    /// Vertex count of each feasible draw, in draw order.
    pub vertex_counts: Vec<usize>,
}

impl Diagnostics {
    pub fn feasible_fraction(&self) -> f64 {
        if self.draws == 0 {
            0.0
        } else {
            self.feasible as f64 / self.draws as f64
        }
    }
}

#[derive(Debug, Clone)]
pub struct RegionCloud {
    pub scheme: Scheme,
    pub points: Vec<CloudPoint>,
    /// Split-rate polytope of each feasible draw, keyed by draw index.
    pub systems: Vec<(usize, HalfspaceSystem)>,
    pub diagnostics: Diagnostics,
}

struct DrawResult {
    index: usize,
    system: Option<HalfspaceSystem>,
    rates: Vec<RatePoint>,
}

fn evaluate_draw(
    cfg: &ChannelConfig,
    scheme: Scheme,
    sys: &ConstraintSystem,
    map: &[Vec<f64>],
    params: &GpParams,
    index: usize,
) -> Result<DrawResult> {
    let table = assemble_covariance(cfg, params, scheme)?;
    let num = evaluate_system(sys, &table)?;
    if !num.feasible {
        return Ok(DrawResult { index, system: None, rates: vec![] });
    }
    let hs = num.halfspaces()?;
    let verts = enumerate_vertices(&hs)?;
    if verts.is_empty() {
        return Ok(DrawResult { index, system: None, rates: vec![] });
    }
    let mut rates: Vec<RatePoint> = project(&verts, map)?.into_iter().map(|r| [r[0], r[1], r[2]]).collect();
    rates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    rates.dedup();
    Ok(DrawResult { index, system: Some(hs), rates })
}

/// Union over sampled parameters of the projected per-draw polytopes.
pub fn compute_region(cfg: &ChannelConfig, scheme: Scheme, spec: &SamplingSpec) -> Result<RegionCloud> {
    if !scheme.has_gaussian_form() {
        return Err(Error::NoGaussianForm(scheme.to_string()));
    }
    spec.validate()?;
    let sys = build_system(scheme);
    let map = scheme.projection();
    let results: Vec<DrawResult> = (0..spec.draws())
        .into_par_iter()
        .map(|i| evaluate_draw(cfg, scheme, &sys, &map, &draw_params(cfg, scheme, spec, i), i))
        .collect::<Result<_>>()?;

    let mut points = vec![CloudPoint { rate: [0.0; 3], source: Provenance::Origin }];
    let mut systems = Vec::new();
    let mut diag = Diagnostics { draws: spec.draws(), ..Default::default() };
    for r in results {
        match r.system {
            Some(hs) => {
                diag.feasible += 1;
                diag.vertex_counts.push(r.rates.len());
                points.extend(r.rates.iter().map(|&rate| CloudPoint { rate, source: Provenance::Sample(r.index) }));
                systems.push((r.index, hs));
            }
            None => diag.infeasible += 1,
        }
    }
    Ok(RegionCloud { scheme, points, systems, diagnostics: diag })
}

impl RegionCloud {
    pub fn rates(&self) -> Vec<RatePoint> {
        self.points.iter().map(|p| p.rate).collect()
    }

    /// The convex hull of the cloud, which is also its down-closure.
    pub fn region(&self) -> Result<Region3> {
        Region3::down_closed_hull(&self.rates())
    }

    /// Closed ccw hull polygon of the cloud under a 2D view.
    pub fn view(&self, view: View) -> Result<Vec<Point2>> {
        let pts: Vec<Point2> = self.points.iter().map(|p| view.apply(p.rate)).collect();
        convex_hull_2d(&pts)
    }

    /// Adds extra points (e.g. corollary points) to the cloud.
    pub fn merge(&mut self, extra: impl IntoIterator<Item = CloudPoint>) {
        self.points.extend(extra);
    }

    /// Region of rates with `r_axis >= c`, seen in the other two rates.
    /// Each draw's polytope is sliced before the union so that slice points
    /// are exact rather than filtered cloud points.
    pub fn slice(&self, axis: usize, c: f64) -> Result<Vec<Point2>> {
        if axis >= 3 {
            return Err(Error::Param(format!("axis {axis} out of range")));
        }
        if !(c >= 0.0) {
            return Err(Error::Param(format!("slice value {c} must be nonnegative")));
        }
        let mut pts: Vec<Point2> = Vec::new();
        if c == 0.0 {
            pts.extend(self.points.iter().map(|p| drop_axis(&p.rate, axis)));
        } else {
            let map = self.scheme.projection();
            let mut reach: HashMap<usize, f64> = HashMap::new();
            for p in &self.points {
                if let Provenance::Sample(i) = p.source {
                    let m = reach.entry(i).or_insert(0.0);
                    *m = m.max(p.rate[axis]);
                }
            }
            let mut per: Vec<Vec<Point2>> = self
                .systems
                .par_iter()
                .map(|(i, hs)| {
                    if reach.get(i).copied().unwrap_or(0.0) < c {
                        return Ok(vec![]);
                    }
                    slice_min_rate(hs, &map, axis, c)
                })
                .collect::<Result<_>>()?;
            for p in &mut per {
                pts.append(p);
            }
            // merged non-sample points are single rate tuples
            pts.extend(
                self.points
                    .iter()
                    .filter(|p| matches!(p.source, Provenance::Corollary(_)) && p.rate[axis] >= c)
                    .map(|p| drop_axis(&p.rate, axis)),
            );
        }
        if pts.is_empty() {
            return Ok(vec![]);
        }
        convex_hull_2d(&pts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ChannelGains;
    use crate::polytope::polygon_contains;

    #[test]
    fn draws_are_pure_functions_of_seed_and_index() {
        let spec = SamplingSpec::new(10, 42);
        assert_eq!(sample_params(&spec, 3), sample_params(&spec, 3));
        assert_ne!(sample_params(&spec, 0), sample_params(&spec, 1));
        let other = SamplingSpec::new(10, 43);
        assert_ne!(sample_params(&spec, 0), sample_params(&other, 0));
    }

    #[test]
    fn split_fraction_mean() {
        let spec = SamplingSpec::new(100_000, 1);
        let mean = (0..100_000).map(|i| sample_params(&spec, i).tau).sum::<f64>() / 1e5;
        assert!((mean - 0.5).abs() < 0.005, "{mean}");
    }

    #[test]
    fn overrides_win() {
        let mut spec = SamplingSpec::new(5, 9);
        spec.overrides = ParamOverride { tau: Some(0.25), ..ParamOverride::no_binning() };
        let p = sample_params(&spec, 2);
        assert_eq!(p.tau, 0.25);
        assert_eq!(p.alpha, [0.0; 4]);
        assert_eq!(p.beta, [0.0; 2]);
    }

    #[test]
    fn zero_samples_rejected() {
        let r = compute_region(&ChannelConfig::default(), Scheme::Cums2, &SamplingSpec::new(0, 1));
        assert!(matches!(r, Err(Error::Config { .. })));
        let r = compute_region(&ChannelConfig::default(), Scheme::Cums1, &SamplingSpec::new(1, 1));
        assert!(matches!(r, Err(Error::NoGaussianForm(_))));
    }

    #[test]
    fn single_zero_draw_contains_origin() {
        let mut spec = SamplingSpec::new(1, 0);
        spec.overrides = ParamOverride { tau: Some(0.5), kappa: Some(0.5), ..ParamOverride::no_binning() };
        for s in Scheme::GAUSSIAN {
            let cloud = compute_region(&ChannelConfig::default(), s, &spec).unwrap();
            assert_eq!(cloud.diagnostics.feasible, 1, "{s}");
            assert!(cloud.points.len() > 1);
            assert_eq!(cloud.points[0].rate, [0.0; 3]);
            assert!(cloud.points.iter().all(|p| p.rate.iter().all(|&x| x >= 0.0)));
        }
    }

    #[test]
    fn decoupled_channel_axis_maxima() {
        let cfg = ChannelConfig { gains: ChannelGains::zero(), ..Default::default() };
        let mut spec = SamplingSpec::new(20, 5);
        spec.overrides = ParamOverride::no_binning();
        let c = cfg.interference_free();
        for s in Scheme::GAUSSIAN {
            let region = compute_region(&cfg, s, &spec).unwrap().region().unwrap();
            for k in 0..3 {
                let mut e = [0.0; 3];
                e[k] = 1.0;
                assert!((region.support(e) - c[k]).abs() < 1e-6, "{s} axis {k}");
            }
            assert!(region.vertices().iter().all(|v| (0..3).all(|k| v[k] <= c[k] + 1e-9)));
        }
    }

    #[test]
    fn decoupled_channel_without_common_parts_is_a_box() {
        let cfg = ChannelConfig { gains: ChannelGains::zero(), ..Default::default() };
        let mut spec = SamplingSpec::new(3, 5);
        spec.overrides = ParamOverride { tau: Some(0.0), kappa: Some(0.0), ..ParamOverride::no_binning() };
        let cloud = compute_region(&cfg, Scheme::Cums2, &spec).unwrap();
        let c = cfg.interference_free();
        let region = cloud.region().unwrap();
        assert_eq!(region.vertices().len(), 8);
        assert!(region.contains(c, 1e-9));
        // slicing one rate leaves the other two untouched
        let s = cloud.slice(0, c[0] / 2.0).unwrap();
        assert!(polygon_contains(&s, [c[1], c[2]], 1e-6));
        assert_eq!(s.len(), 4);
        assert!(cloud.slice(0, c[0] + 0.01).unwrap().is_empty());
    }

    #[test]
    fn zero_slice_is_projection() {
        let cloud = compute_region(&ChannelConfig::default(), Scheme::Cums2, &SamplingSpec::new(30, 3)).unwrap();
        let s = cloud.slice(0, 0.0).unwrap();
        let v = cloud.view(View::R2R3).unwrap();
        assert_eq!(s, v);
    }

    #[test]
    fn deterministic_and_monotone_in_samples() {
        let cfg = ChannelConfig::default();
        let a = compute_region(&cfg, Scheme::Prms2, &SamplingSpec::new(40, 7)).unwrap();
        let b = compute_region(&cfg, Scheme::Prms2, &SamplingSpec::new(40, 7)).unwrap();
        assert_eq!(a.points, b.points);
        let small = compute_region(&cfg, Scheme::Prms2, &SamplingSpec::new(20, 7)).unwrap();
        let big = a.region().unwrap();
        for p in &small.points {
            assert!(big.contains(p.rate, 1e-9));
        }
    }

    #[test]
    fn smart_mode_adds_draws() {
        let mut spec = SamplingSpec::new(10, 2);
        spec.smart = true;
        let cloud = compute_region(&ChannelConfig::default(), Scheme::Cums2, &spec).unwrap();
        assert_eq!(cloud.diagnostics.draws, 20);
        assert!(cloud.points.iter().any(|p| matches!(p.source, Provenance::Sample(i) if i >= 10)));
    }
}
