//! End-to-end acceptance checks. Each test prints one PASS/FAIL line.

use std::io::Write;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cogrates::achievable::{compute_region, ParamOverride, SamplingSpec};
use cogrates::constraints::build_system;
use cogrates::corollary::{corollary_at, corollary_points, sweep_max};
use cogrates::dmc::gaussian_mi_mc_terms;
use cogrates::gauss::{assemble_covariance, conditional_mi};
use cogrates::model::{ChannelConfig, ChannelGains, GpParams, Scheme};
use cogrates::outer::{mac_rate_vector, mimo_p2p_capacity, outer_region, ORDERS};
use cogrates::polytope::polygon_contains;
use cogrates::verify::{distinct_terms, grid_oracle, random_system, submodularity_margin};

const COROLLARY_TOL: f64 = 1e-4;
const CONTAINMENT_TOL: f64 = 1e-6;
const MAX_R1_GAP_BITS: f64 = 2.0;
const CORNER_TOL: f64 = 1e-3;
const BOX_TOL: f64 = 1e-6;
const MC_SAMPLES: usize = 1_000_000;
const MC_STD_ERRS: f64 = 3.0;
const MC_DRAWS: usize = 50;
const MC_MAX_FAILING_DRAWS: usize = 2;
const GRID_STEP: f64 = 0.01;
const GRID_OUTSIDE_TOL: f64 = 1e-6;
const VERTEX_INFEASIBLE_TOL: f64 = 1e-7;
const WATER_FILL_TOL: f64 = 1e-9;
const MAC_TOL: f64 = 1e-9;
const NESTING_TOL: f64 = 1e-6;

fn report(id: u32, name: &str, ok: bool, detail: String) {
    // straight to the handle so the line shows without --nocapture
    let _ = writeln!(std::io::stdout().lock(), "{} criterion {id} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} {name}: {detail}");
}

fn hl(x: f64) -> f64 {
    0.5 * (1.0 + x).log2()
}

#[test]
fn criterion_01_corollary_points() {
    let start = Instant::now();
    let cfg = ChannelConfig::default();
    let c1 = corollary_at(1, &cfg, None).unwrap();
    let c4 = corollary_at(4, &cfg, None).unwrap();
    let c5 = corollary_at(5, &cfg, None).unwrap();
    let r1 = hl((10f64.sqrt() * 2.1).powi(2));
    let r2 = hl(10.0 / (1.0 + 0.3025 * 10.0));
    let r3 = hl(10.0);
    let r2_relay = hl(24.025);
    let pairs = [
        (c1[0].rate[0], r1),
        (c1[1].rate[1], r2),
        (c1[1].rate[2], r3),
        (c4[0].rate[1], r2_relay),
        (c4[1].rate[2], r3),
        (c5[1].rate[2], r2),
    ];
    let worst = pairs.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    report(1, "corollary points", worst <= COROLLARY_TOL && secs < 1.0, format!("max error {worst:.2e} in {secs:.3}s"));
}

#[test]
fn criterion_02_containment() {
    let start = Instant::now();
    let cfg = ChannelConfig::default();
    let mut detail = Vec::new();
    let mut ok = true;
    for s in Scheme::GAUSSIAN {
        let cloud = compute_region(&cfg, s, &SamplingSpec::new(10_000, 2)).unwrap();
        let outer = outer_region(s, &cfg, 101).unwrap();
        let outside = cloud.points.iter().filter(|p| !outer.contains(p.rate, CONTAINMENT_TOL)).count();
        let inner = cloud.points.iter().map(|p| p.rate[0]).fold(0.0, f64::max);
        let gap = outer.region.support([1.0, 0.0, 0.0]) - inner;
        ok &= outside == 0 && gap <= MAX_R1_GAP_BITS;
        detail.push(format!("{s} outside {outside} gap {gap:.3}"));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 120.0;
    report(2, "containment", ok, format!("{} in {secs:.1}s", detail.join(", ")));
}

#[test]
fn criterion_03_corner_coincidence() {
    let cfg = ChannelConfig::default();
    let outer = outer_region(Scheme::Cums2, &cfg, 101).unwrap();
    let max = sweep_max(2, &cfg).unwrap().unwrap();
    let mut worst = 0.0f64;
    for r in [0.0, max] {
        for p in corollary_at(2, &cfg, Some(r)).unwrap() {
            worst = worst.max(outer.boundary_gap(p.rate).abs());
        }
    }
    report(3, "corner coincidence", worst <= CORNER_TOL, format!("max boundary distance {worst:.2e}"));
}

#[test]
fn criterion_04_decoupled_channel() {
    let cfg = ChannelConfig { gains: ChannelGains::zero(), ..Default::default() };
    let cap = cfg.interference_free();
    let mut detail = Vec::new();
    let mut ok = true;
    for s in [Scheme::Cums2, Scheme::Prms2] {
        let mut spec = SamplingSpec::new(300, 4);
        spec.overrides = ParamOverride::no_binning();
        let region = compute_region(&cfg, s, &spec).unwrap().region().unwrap();
        let axis_err = (0..3)
            .map(|k| {
                let mut d = [0.0; 3];
                d[k] = 1.0;
                (region.support(d) - cap[k]).abs()
            })
            .fold(0.0, f64::max);
        let inside = region.vertices().iter().all(|v| (0..3).all(|k| v[k] <= cap[k] + BOX_TOL));

        spec.overrides.tau = Some(0.0);
        spec.overrides.kappa = Some(0.0);
        let full = compute_region(&cfg, s, &spec).unwrap().region().unwrap();
        let corner_gap = full.boundary_gap(cap).abs();
        let box_inside = full.vertices().iter().all(|v| (0..3).all(|k| v[k] <= cap[k] + BOX_TOL));
        let part_ok = axis_err <= BOX_TOL && inside && corner_gap <= BOX_TOL && box_inside;
        ok &= part_ok;
        detail.push(format!("{s} axis error {axis_err:.1e}, corner gap {corner_gap:.1e}"));
    }
    report(4, "decoupled channel", ok, detail.join(", "));
}

#[test]
fn criterion_05_gaussian_mi_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failing = 0;
    let mut checked = 0;
    for draw in 0..MC_DRAWS {
        let scheme = Scheme::GAUSSIAN[draw % 3];
        let cfg = ChannelConfig {
            powers: [rng.gen_range(1.0..20.0), rng.gen_range(1.0..20.0), rng.gen_range(1.0..20.0)],
            gains: ChannelGains::from_array([(); 6].map(|_| rng.gen_range(0.0..1.0))),
            ..Default::default()
        };
        let terms = distinct_terms(scheme);
        let (table, picked) = loop {
            let p = GpParams {
                tau: rng.gen(),
                kappa: rng.gen(),
                alpha: [(); 4].map(|_| rng.gen_range(-1.0..1.0)),
                beta: [(); 2].map(|_| rng.gen_range(-1.0..1.0)),
            };
            let table = assemble_covariance(&cfg, &p, scheme).unwrap();
            let picked: Vec<_> = (0..3).map(|_| terms[rng.gen_range(0..terms.len())].clone()).collect();
            if picked.iter().all(|(a, b, c)| conditional_mi(&table, a, b, c).is_ok()) {
                break (table, picked);
            }
        };
        let est = gaussian_mi_mc_terms(&table, &picked, MC_SAMPLES, 100 + draw as u64).unwrap();
        let bad = picked
            .iter()
            .zip(&est)
            .any(|((a, b, c), e)| !e.agrees(conditional_mi(&table, a, b, c).unwrap(), MC_STD_ERRS));
        failing += bad as usize;
        checked += 1;
    }
    report(
        5,
        "gaussian mi oracle",
        failing <= MC_MAX_FAILING_DRAWS,
        format!("{failing} of {checked} draws outside {MC_STD_ERRS} standard errors"),
    );
}

#[test]
fn criterion_06_polytope_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut outside, mut violation) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let sys = random_system(&mut rng, 2 + i % 2).unwrap();
        let (o, v) = grid_oracle(&sys, GRID_STEP).unwrap();
        outside = outside.max(o);
        violation = violation.max(v);
    }
    report(
        6,
        "polytope oracle",
        outside <= GRID_OUTSIDE_TOL && violation <= VERTEX_INFEASIBLE_TOL,
        format!("grid outside {outside:.1e}, vertex infeasibility {violation:.1e}"),
    );
}

#[test]
fn criterion_07_water_filling() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut monotone = true;
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let h = nalgebra::DMatrix::from_fn(n, n, |_, _| rng.gen_range(-2.0..2.0));
        let total = rng.gen_range(0.0..40.0);
        let wf = mimo_p2p_capacity(&h, total, 1.0).unwrap();
        worst = worst.max(wf.kkt_residual(total, 1.0));
        monotone &= mimo_p2p_capacity(&h, total * 1.1 + 0.1, 1.0).unwrap().capacity >= wf.capacity;
    }
    report(7, "water filling", worst <= WATER_FILL_TOL && monotone, format!("KKT residual {worst:.1e}, monotone {monotone}"));
}

#[test]
fn criterion_08_mac_consistency() {
    let cfg = ChannelConfig::default();
    let rows = cfg.gains.matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut spread, mut margin) = (0.0f64, f64::INFINITY);
    for _ in 0..200 {
        let split = [(); 3].map(|_| rng.gen_range(0.0..15.0));
        let sums: Vec<f64> =
            ORDERS.iter().map(|o| mac_rate_vector(&rows, &split, o, 1.0).unwrap().iter().sum()).collect();
        spread = sums.iter().map(|s| (s - sums[0]).abs()).fold(spread, f64::max);
        margin = margin.min(submodularity_margin(&rows, &split).unwrap());
    }
    report(
        8,
        "mac consistency",
        spread <= MAC_TOL && margin >= -MAC_TOL,
        format!("sum-rate spread {spread:.1e}, submodularity margin {margin:.1e}"),
    );
}

#[test]
fn criterion_09_golden_dumps() {
    let counts: Vec<usize> =
        [Scheme::Cums2, Scheme::Prms2, Scheme::Cums1, Scheme::Prms1, Scheme::Coms].map(|s| build_system(s).len()).to_vec();
    let want = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/cums2.txt")).unwrap();
    let same = build_system(Scheme::Cums2).dump() == want;
    report(9, "golden dumps", counts == [10, 10, 36, 36, 7] && same, format!("counts {counts:?}, CuMS2 dump matches {same}"));
}

#[test]
fn criterion_10_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_cogrates"))
            .args(["region", "--samples", "2000", "--seed", "42", "--threads", threads, "--out"])
            .arg(&out)
            .output()
            .unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        let mut files: Vec<_> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().path()).collect();
        files.sort();
        files.into_iter().map(|p| (p.file_name().unwrap().to_owned(), std::fs::read(p).unwrap())).collect::<Vec<_>>()
    };
    let a = run("a", "1");
    let b = run("b", "1");
    let c = run("c", "3");
    let ok = a == b && a == c && a.len() >= 2;
    report(10, "determinism", ok, format!("{} files, identical across runs and thread counts {ok}", a.len()));
}

#[test]
fn criterion_11_slice_nesting() {
    let cfg = ChannelConfig::default();
    // random draws alone rarely reach r1 = 1.5; add Costa-style draws and
    // time-share with the corollary points as the plots do
    let mut spec = SamplingSpec::new(10_000, 11);
    spec.smart = true;
    let mut cloud = compute_region(&cfg, Scheme::Cums2, &spec).unwrap();
    for id in 1..=4 {
        cloud.merge(corollary_points(id, &cfg, 101).unwrap().into_iter().map(|p| p.to_cloud_point()));
    }
    let cs = [0.0, 1.0, 1.5];
    let slices: Vec<_> = cs.iter().map(|&c| cloud.slice(0, c).unwrap()).collect();
    let mut ok = slices.iter().all(|s| !s.is_empty());
    for hi in 1..cs.len() {
        for lo in 0..hi {
            ok &= slices[hi].iter().all(|&p| polygon_contains(&slices[lo], p, NESTING_TOL));
        }
    }
    let sizes: Vec<usize> = slices.iter().map(Vec::len).collect();
    report(11, "slice nesting", ok, format!("hull sizes {sizes:?}"));
}
