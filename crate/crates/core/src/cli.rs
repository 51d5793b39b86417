//! Command-line front end behind the `cogrates` binary.
//!
//! Settings come from a flat `key = value` file (`--config`), then `--set`
//! pairs, then dedicated flags; later sources win. Every run writes its
//! files only after all computation succeeded.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::achievable::{compute_region, Provenance, SamplingSpec};
use crate::corollary::{corollary_points, scheme_of, CorollaryPoint, DEFAULT_SWEEP_POINTS, IDS};
use crate::error::Error;
use crate::model::{ChannelConfig, RawConfig, Scheme, PRESET_POWER_DB};
use crate::outer::{cooperation_pair, mimo_p2p_capacity, outer_region_with, DEFAULT_RESOLUTION};
use crate::polytope::Point2;
use crate::region3::{axis_name, parse_axis, View};
use crate::verify::{run_all, VerifyOptions};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "COGRATES_THREADS";

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_VERIFY_SAMPLES: usize = 300;

/// Keys accepted in config files and `--set`.
pub const KEYS: &[&str] = &[
    "p1", "p2", "p3", "p1_db", "p2_db", "p3_db", "power_db", "q1", "q2", "q3", "noise", "gain", "a12", "a13", "a21",
    "a23", "a31", "a32", "preset", "scheme", "samples", "seed", "smart", "resolution", "sweep_points", "mac_noise",
    "threads",
];

#[derive(Parser, Debug)]
#[command(name = "cogrates", version, about = "Rate regions of three-user cognitive interference channels")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct GlobalArgs {
    /// Flat key = value settings file.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Override one setting, e.g. `--set a13=0.3`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Power of every sender in dB.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub power_db: Option<f64>,
    /// Every cross gain.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gain: Option<f64>,
    /// Every receiver's noise variance.
    #[arg(long, global = true)]
    pub noise: Option<f64>,
    /// Worker threads; defaults to $COGRATES_THREADS, then all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample an achievable region and write its cloud and hull.
    Region(RegionArgs),
    /// Slice an achievable region at minimum rates on one axis.
    Slice(SliceArgs),
    /// Outer bound of a scheme: hull views and caps.
    Outer(OuterArgs),
    /// Closed-form corollary points.
    Corollary(CorollaryArgs),
    /// Run the consistency checks.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct SamplingArgs {
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Add Costa-style coefficient draws.
    #[arg(long)]
    pub smart: bool,
}

#[derive(Args, Debug)]
pub struct RegionArgs {
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Hull view; repeat for several.
    #[arg(long, default_values_t = vec!["r1-vs-r23".to_string()])]
    pub view: Vec<String>,
    /// Merge the scheme's corollary points into the cloud.
    #[arg(long)]
    pub with_corollaries: bool,
    #[arg(long)]
    pub sweep_points: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SliceArgs {
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[arg(long, default_value = "r1")]
    pub axis: String,
    /// Minimum rates, comma separated or repeated.
    #[arg(long = "c", required = true, num_args = 1.., value_delimiter = ',')]
    pub c: Vec<f64>,
    /// Also write slices of the outer bound.
    #[arg(long)]
    pub with_outer: bool,
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long)]
    pub mac_noise: Option<f64>,
}

#[derive(Args, Debug)]
pub struct OuterArgs {
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long, default_values_t = vec!["r1-vs-r23".to_string()])]
    pub view: Vec<String>,
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long)]
    pub mac_noise: Option<f64>,
}

#[derive(Args, Debug)]
pub struct CorollaryArgs {
    /// Corollary id; repeat for several, all when omitted.
    #[arg(long = "id")]
    pub ids: Vec<u8>,
    #[arg(long)]
    pub sweep_points: Option<usize>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long)]
    pub mac_noise: Option<f64>,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or settings; exit code 2.
    Usage(String),
    /// Anything failing after the settings were accepted; exit code 1.
    Run(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Run(m) => f.write_str(m),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Run(_) => 1,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Run(e.to_string()),
        }
    }
}

/// Ordered key/value settings.
pub type Settings = BTreeMap<String, String>;

/// Parses the config file format: `key = value` lines, `#` comments.
pub fn parse_settings(text: &str) -> Result<Settings, CliError> {
    let mut out = Settings::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key = value", n + 1)))?;
        insert_setting(&mut out, k.trim(), v.trim())?;
    }
    Ok(out)
}

fn insert_setting(s: &mut Settings, key: &str, value: &str) -> Result<(), CliError> {
    if !KEYS.contains(&key) {
        return Err(usage(format!("unknown setting {key}")));
    }
    s.insert(key.to_string(), value.to_string());
    Ok(())
}

fn get<T: std::str::FromStr>(s: &Settings, key: &str) -> Result<Option<T>, CliError> {
    s.get(key)
        .map(|v| v.parse::<T>().map_err(|_| usage(format!("setting {key}: cannot parse {v:?}"))))
        .transpose()
}

/// Channel configuration from settings. Specific keys beat the broad ones
/// (`p1_db` over `power_db`, `a13` over `gain`, `q2` over `noise`).
pub fn channel_from_settings(s: &Settings) -> Result<ChannelConfig, CliError> {
    let mut raw = RawConfig::default();
    let power_db: Option<f64> = get(s, "power_db")?;
    let preset_db = match s.get("preset").map(String::as_str) {
        None | Some("default") => None,
        Some("low-power") => Some(PRESET_POWER_DB),
        Some(other) => return Err(usage(format!("setting preset: unknown preset {other:?}"))),
    };
    let noise: Option<f64> = get(s, "noise")?;
    let gain: Option<f64> = get(s, "gain")?;
    for k in 0..3 {
        raw.p[k] = get(s, &format!("p{}", k + 1))?;
        raw.p_db[k] = get(s, &format!("p{}_db", k + 1))?;
        if raw.p[k].is_none() && raw.p_db[k].is_none() {
            raw.p_db[k] = power_db.or(preset_db);
        }
        raw.q[k] = get::<f64>(s, &format!("q{}", k + 1))?.or(noise);
    }
    for (i, name) in crate::model::ChannelGains::NAMES.iter().enumerate() {
        raw.gains[i] = get::<f64>(s, name)?.or(gain);
    }
    Ok(crate::model::validate_config(&raw)?)
}

fn scheme_setting(s: &Settings) -> Result<Scheme, CliError> {
    let scheme: Scheme = s.get("scheme").map_or(Ok(Scheme::Cums2), |v| v.parse()).map_err(usage)?;
    if !scheme.has_gaussian_form() {
        return Err(usage(Error::NoGaussianForm(scheme.to_string())));
    }
    Ok(scheme)
}

fn positive(s: &Settings, key: &str, default: usize, min: usize) -> Result<usize, CliError> {
    let v = get::<usize>(s, key)?.unwrap_or(default);
    if v < min {
        return Err(usage(format!("setting {key}: must be at least {min}, got {v}")));
    }
    Ok(v)
}

fn bool_setting(s: &Settings, key: &str) -> Result<bool, CliError> {
    Ok(get::<bool>(s, key)?.unwrap_or(false))
}

struct Output {
    dir: PathBuf,
    files: Vec<(String, String)>,
}

impl Output {
    fn new(dir: &Path) -> Self {
        Output { dir: dir.to_path_buf(), files: Vec::new() }
    }

    fn add(&mut self, name: String, body: String) {
        self.files.push((name, body));
    }

    /// Writes every file; on failure removes the ones already written.
    fn commit(self) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(&self.dir).map_err(|e| CliError::Run(format!("{}: {e}", self.dir.display())))?;
        let mut written = Vec::new();
        for (name, body) in &self.files {
            let path = self.dir.join(name);
            if let Err(e) = std::fs::write(&path, body) {
                for p in &written {
                    let _ = std::fs::remove_file(p);
                }
                let _ = std::fs::remove_file(&path);
                return Err(CliError::Run(format!("{}: {e}", path.display())));
            }
            written.push(path);
        }
        Ok(written)
    }
}

fn polygon_csv(header: [&str; 2], poly: &[Point2]) -> String {
    let mut s = format!("{},{}\n", header[0], header[1]);
    for p in poly.iter().chain(poly.first()) {
        let _ = writeln!(s, "{},{}", p[0], p[1]);
    }
    s
}

fn metadata(command: &str, cfg: &ChannelConfig, extra: &[(&str, String)]) -> String {
    let mut s = format!("command = {command}\n");
    for k in 0..3 {
        let _ = writeln!(s, "p{} = {}", k + 1, cfg.powers[k]);
    }
    for k in 0..3 {
        let _ = writeln!(s, "q{} = {}", k + 1, cfg.noise[k]);
    }
    for (name, v) in crate::model::ChannelGains::NAMES.iter().zip(cfg.gains.as_array()) {
        let _ = writeln!(s, "{name} = {v}");
    }
    for (k, v) in extra {
        let _ = writeln!(s, "{k} = {v}");
    }
    s
}

fn parse_views(names: &[String]) -> Result<Vec<View>, CliError> {
    names.iter().map(|v| v.parse::<View>().map_err(usage)).collect()
}

fn sampling_settings(s: &mut Settings, a: &SamplingArgs) {
    if let Some(v) = &a.scheme {
        s.insert("scheme".into(), v.clone());
    }
    if let Some(v) = a.samples {
        s.insert("samples".into(), v.to_string());
    }
    if let Some(v) = a.seed {
        s.insert("seed".into(), v.to_string());
    }
    if a.smart {
        s.insert("smart".into(), "true".into());
    }
}

fn put<T: ToString>(s: &mut Settings, key: &str, v: Option<T>) {
    if let Some(v) = v {
        s.insert(key.into(), v.to_string());
    }
}

fn sampling_spec(s: &Settings) -> Result<SamplingSpec, CliError> {
    let mut spec = SamplingSpec::new(positive(s, "samples", DEFAULT_SAMPLES, 1)?, get(s, "seed")?.unwrap_or(DEFAULT_SEED));
    spec.smart = bool_setting(s, "smart")?;
    Ok(spec)
}

fn mac_noise(s: &Settings, cfg: &ChannelConfig) -> Result<f64, CliError> {
    let v = get::<f64>(s, "mac_noise")?.unwrap_or(cfg.noise[0]);
    if !(v.is_finite() && v > 0.0) {
        return Err(usage(format!("setting mac_noise: must be positive, got {v}")));
    }
    Ok(v)
}

fn fmt_c(c: f64) -> String {
    format!("{c}")
}

fn run_region(s: &Settings, cfg: &ChannelConfig, a: &RegionArgs, out: &mut Output) -> Result<(), CliError> {
    let scheme = scheme_setting(s)?;
    let spec = sampling_spec(s)?;
    let views = parse_views(&a.view)?;
    let sweep = positive(s, "sweep_points", DEFAULT_SWEEP_POINTS, 2)?;
    let mut cloud = compute_region(cfg, scheme, &spec)?;
    if a.with_corollaries {
        let mut extra = Vec::new();
        for id in IDS {
            if scheme_of(id)? == scheme {
                extra.extend(corollary_points(id, cfg, sweep)?.into_iter().map(CorollaryPoint::to_cloud_point));
            }
        }
        cloud.merge(extra);
    }
    let tag = scheme.name().to_lowercase();
    let mut csv = String::from("sample_id,r1,r2,r3\n");
    for p in &cloud.points {
        let id = match p.source {
            Provenance::Origin => "origin".to_string(),
            Provenance::Sample(i) => i.to_string(),
            Provenance::Corollary(k) => format!("corollary-{k}"),
        };
        let _ = writeln!(csv, "{id},{},{},{}", p.rate[0], p.rate[1], p.rate[2]);
    }
    out.add(format!("region_{tag}_cloud.csv"), csv);
    for v in views {
        out.add(format!("region_{tag}_hull_{}.csv", v.name()), polygon_csv(v.axis_names(), &cloud.view(v)?));
    }
    let d = &cloud.diagnostics;
    out.add(
        format!("region_{tag}_meta.txt"),
        metadata(
            "region",
            cfg,
            &[
                ("scheme", scheme.name().into()),
                ("samples", spec.samples.to_string()),
                ("seed", spec.seed.to_string()),
                ("smart", spec.smart.to_string()),
                ("with_corollaries", a.with_corollaries.to_string()),
                ("sweep_points", sweep.to_string()),
                ("draws", d.draws.to_string()),
                ("feasible", d.feasible.to_string()),
                ("infeasible", d.infeasible.to_string()),
            ],
        ),
    );
    Ok(())
}

fn run_slice(s: &Settings, cfg: &ChannelConfig, a: &SliceArgs, out: &mut Output) -> Result<(), CliError> {
    let scheme = scheme_setting(s)?;
    let spec = sampling_spec(s)?;
    let axis = parse_axis(&a.axis).map_err(usage)?;
    if let Some(c) = a.c.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
        return Err(usage(format!("slice value {c} must be nonnegative")));
    }
    let cloud = compute_region(cfg, scheme, &spec)?;
    let outer = if a.with_outer {
        let res = positive(s, "resolution", DEFAULT_RESOLUTION, 2)?;
        Some(outer_region_with(scheme, cfg, res, mac_noise(s, cfg)?)?)
    } else {
        None
    };
    let tag = scheme.name().to_lowercase();
    let others: Vec<&str> = (0..3).filter(|&k| k != axis).map(axis_name).collect();
    let header = [others[0], others[1]];
    let an = axis_name(axis);
    for &c in &a.c {
        out.add(format!("slice_{tag}_{an}_c{}.csv", fmt_c(c)), polygon_csv(header, &cloud.slice(axis, c)?));
        if let Some(o) = &outer {
            out.add(format!("outer_slice_{tag}_{an}_c{}.csv", fmt_c(c)), polygon_csv(header, &o.slice(axis, c)?));
        }
    }
    let cs: Vec<String> = a.c.iter().map(|&c| fmt_c(c)).collect();
    out.add(
        format!("slice_{tag}_{an}_meta.txt"),
        metadata(
            "slice",
            cfg,
            &[
                ("scheme", scheme.name().into()),
                ("samples", spec.samples.to_string()),
                ("seed", spec.seed.to_string()),
                ("smart", spec.smart.to_string()),
                ("axis", an.into()),
                ("c", cs.join(",")),
                ("with_outer", a.with_outer.to_string()),
            ],
        ),
    );
    Ok(())
}

fn run_outer(s: &Settings, cfg: &ChannelConfig, a: &OuterArgs, out: &mut Output) -> Result<(), CliError> {
    let scheme = scheme_setting(s)?;
    let views = parse_views(&a.view)?;
    let res = positive(s, "resolution", DEFAULT_RESOLUTION, 2)?;
    let noise = mac_noise(s, cfg)?;
    let region = outer_region_with(scheme, cfg, res, noise)?;
    let tag = scheme.name().to_lowercase();
    for v in views {
        out.add(format!("outer_{tag}_hull_{}.csv", v.name()), polygon_csv(v.axis_names(), &region.view(v)));
    }
    let mut caps = String::from("cap,value\n");
    for c in &region.caps {
        let _ = writeln!(caps, "{},{}", c.name, c.value);
    }
    out.add(format!("outer_{tag}_caps.csv"), caps);
    let ((i, j), h, total) = cooperation_pair(scheme, cfg)?;
    let pair_noise = cfg.noise[i].min(cfg.noise[j]);
    let mimo = mimo_p2p_capacity(&h, total, pair_noise)?;
    let mut extra = vec![
        ("scheme", scheme.name().to_string()),
        ("resolution", res.to_string()),
        ("mac_noise", noise.to_string()),
        ("cooperating_pair", format!("{},{}", i + 1, j + 1)),
        ("pair_matrix", format!("[[{},{}],[{},{}]]", h[(0, 0)], h[(0, 1)], h[(1, 0)], h[(1, 1)])),
        ("pair_noise", pair_noise.to_string()),
        ("c_mimo", mimo.capacity.to_string()),
    ];
    for c in &region.caps {
        extra.push(("cap", format!("{} <= {}", c.name, c.value)));
    }
    out.add(format!("outer_{tag}_meta.txt"), metadata("outer", cfg, &extra));
    Ok(())
}

fn run_corollary(s: &Settings, cfg: &ChannelConfig, a: &CorollaryArgs, out: &mut Output) -> Result<(), CliError> {
    let sweep = positive(s, "sweep_points", DEFAULT_SWEEP_POINTS, 2)?;
    let ids: Vec<u8> = if a.ids.is_empty() { IDS.to_vec() } else { a.ids.clone() };
    for &id in &ids {
        scheme_of(id).map_err(usage)?;
    }
    let mut csv = String::from("corollary_id,sweep_value,r1,r2,r3\n");
    for &id in &ids {
        for p in corollary_points(id, cfg, sweep)? {
            let sv = p.sweep.map(|v| v.to_string()).unwrap_or_default();
            let _ = writeln!(csv, "{id},{sv},{},{},{}", p.rate[0], p.rate[1], p.rate[2]);
        }
    }
    out.add("corollary.csv".into(), csv);
    let list: Vec<String> = ids.iter().map(u8::to_string).collect();
    out.add(
        "corollary_meta.txt".into(),
        metadata("corollary", cfg, &[("ids", list.join(",")), ("sweep_points", sweep.to_string())]),
    );
    Ok(())
}

fn run_verify(s: &Settings, cfg: &ChannelConfig) -> Result<bool, CliError> {
    let opts = VerifyOptions {
        cfg: *cfg,
        seed: get(s, "seed")?.unwrap_or(DEFAULT_SEED),
        samples: positive(s, "samples", DEFAULT_VERIFY_SAMPLES, 1)?,
        resolution: positive(s, "resolution", DEFAULT_RESOLUTION, 2)?,
        mac_noise: Some(mac_noise(s, cfg)?),
        ..VerifyOptions::default()
    };
    let results = run_all(&opts);
    for r in &results {
        println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
    }
    Ok(results.iter().all(|r| r.passed))
}

fn thread_count(flag: Option<usize>, s: &Settings) -> Result<Option<usize>, CliError> {
    if let Some(t) = flag.or(get(s, "threads")?) {
        return Ok(Some(t));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| usage(format!("{THREADS_ENV}: cannot parse {v:?}"))),
        Err(_) => Ok(None),
    }
}

/// Resolves settings from the file, `--set` pairs and flags.
pub fn resolve_settings(cli: &Cli) -> Result<Settings, CliError> {
    let g = &cli.global;
    let mut s = match &g.config {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| usage(format!("config {}: {e}", path.display())))?;
            parse_settings(&text)?
        }
        None => Settings::new(),
    };
    for kv in &g.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| usage(format!("--set {kv}: expected KEY=VALUE")))?;
        insert_setting(&mut s, k.trim(), v.trim())?;
    }
    put(&mut s, "power_db", g.power_db);
    put(&mut s, "gain", g.gain);
    put(&mut s, "noise", g.noise);
    match &cli.command {
        Command::Region(a) => {
            sampling_settings(&mut s, &a.sampling);
            put(&mut s, "sweep_points", a.sweep_points);
        }
        Command::Slice(a) => {
            sampling_settings(&mut s, &a.sampling);
            put(&mut s, "resolution", a.resolution);
            put(&mut s, "mac_noise", a.mac_noise);
        }
        Command::Outer(a) => {
            put(&mut s, "scheme", a.scheme.clone());
            put(&mut s, "resolution", a.resolution);
            put(&mut s, "mac_noise", a.mac_noise);
        }
        Command::Corollary(a) => put(&mut s, "sweep_points", a.sweep_points),
        Command::Verify(a) => {
            put(&mut s, "samples", a.samples);
            put(&mut s, "seed", a.seed);
            put(&mut s, "resolution", a.resolution);
            put(&mut s, "mac_noise", a.mac_noise);
        }
    }
    Ok(s)
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    let s = resolve_settings(&cli)?;
    let cfg = channel_from_settings(&s)?;
    let threads = thread_count(cli.global.threads, &s)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(usage("threads must be at least 1"));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError::Run(e.to_string()))?;
    let mut out = Output::new(&cli.global.out);
    let ok = pool.install(|| -> Result<bool, CliError> {
        match &cli.command {
            Command::Region(a) => run_region(&s, &cfg, a, &mut out)?,
            Command::Slice(a) => run_slice(&s, &cfg, a, &mut out)?,
            Command::Outer(a) => run_outer(&s, &cfg, a, &mut out)?,
            Command::Corollary(a) => run_corollary(&s, &cfg, a, &mut out)?,
            Command::Verify(_) => return run_verify(&s, &cfg),
        }
        Ok(true)
    })?;
    for p in out.commit()? {
        println!("{}", p.display());
    }
    Ok(if ok { 0 } else { 1 })
}

pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn main_from_env() -> i32 {
    main_from(std::env::args_os())
}
