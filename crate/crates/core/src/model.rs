//! Channel instances, message-sharing schemes, coding parameters and rate
//! vectors shared by the rest of the crate.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A rate triple `(r1, r2, r3)` in bits per channel use.
pub type RatePoint = [f64; 3];

pub fn db_to_linear(x_db: f64) -> Result<f64> {
    if !x_db.is_finite() {
        return Err(Error::NonFinite("decibel value"));
    }
    Ok(10f64.powf(x_db / 10.0))
}

pub fn linear_to_db(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Param(format!("linear value {x} has no dB form")));
    }
    Ok(10.0 * x.log10())
}

/// Cross gains of the standard-form channel. Direct gains are 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelGains {
    pub a12: f64,
    pub a13: f64,
    pub a21: f64,
    pub a23: f64,
    pub a31: f64,
    pub a32: f64,
}

impl ChannelGains {
    pub const NAMES: [&'static str; 6] = ["a12", "a13", "a21", "a23", "a31", "a32"];

    pub fn uniform(a: f64) -> Self {
        ChannelGains { a12: a, a13: a, a21: a, a23: a, a31: a, a32: a }
    }

    pub fn zero() -> Self {
        Self::uniform(0.0)
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.a12, self.a13, self.a21, self.a23, self.a31, self.a32]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        ChannelGains { a12: a[0], a13: a[1], a21: a[2], a23: a[3], a31: a[4], a32: a[5] }
    }

    /// Row `k` holds the gains seen at receiver `k` from senders 1..3.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        [
            [1.0, self.a12, self.a13],
            [self.a21, 1.0, self.a23],
            [self.a31, self.a32, 1.0],
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    /// Transmit powers, linear.
    pub powers: [f64; 3],
    /// Receiver noise variances, linear.
    pub noise: [f64; 3],
    pub gains: ChannelGains,
}

pub const DEFAULT_POWER_DB: f64 = 10.0;
pub const PRESET_POWER_DB: f64 = 7.8;
pub const DEFAULT_GAIN: f64 = 0.55;

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            powers: [10.0; 3],
            noise: [1.0; 3],
            gains: ChannelGains::uniform(DEFAULT_GAIN),
        }
    }
}

impl ChannelConfig {
    /// The lower power preset (7.8 dB on every sender).
    pub fn low_power_preset() -> Self {
        let p = 10f64.powf(PRESET_POWER_DB / 10.0);
        ChannelConfig { powers: [p; 3], ..Default::default() }
    }

    pub fn total_power(&self) -> f64 {
        self.powers.iter().sum()
    }

    /// Point-to-point capacity of each link with no interference.
    pub fn interference_free(&self) -> [f64; 3] {
        std::array::from_fn(|k| 0.5 * (1.0 + self.powers[k] / self.noise[k]).log2())
    }
}

/// Unvalidated configuration as read from flags or a config file.
/// Missing fields fall back to the default simulation setup.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    pub p: [Option<f64>; 3],
    pub p_db: [Option<f64>; 3],
    pub q: [Option<f64>; 3],
    pub gains: [Option<f64>; 6],
}

pub fn validate_config(raw: &RawConfig) -> Result<ChannelConfig> {
    let bad = |field: String, reason: &str| Error::Config { field, reason: reason.to_string() };
    let mut cfg = ChannelConfig::default();
    for k in 0..3 {
        let lin = match (raw.p[k], raw.p_db[k]) {
            (Some(_), Some(_)) => {
                return Err(bad(format!("p{}", k + 1), "given both linear and dB"));
            }
            (Some(p), None) => p,
            (None, Some(db)) => {
                db_to_linear(db).map_err(|_| bad(format!("p{}_db", k + 1), "must be finite"))?
            }
            (None, None) => cfg.powers[k],
        };
        if !lin.is_finite() {
            return Err(bad(format!("p{}", k + 1), "power must be finite"));
        }
        if lin < 0.0 {
            return Err(bad(format!("p{}", k + 1), "power must be nonnegative"));
        }
        cfg.powers[k] = lin;
        if let Some(q) = raw.q[k] {
            if !(q.is_finite() && q > 0.0) {
                return Err(bad(format!("q{}", k + 1), "noise variance must be positive"));
            }
            cfg.noise[k] = q;
        }
    }
    let mut g = cfg.gains.as_array();
    for (i, v) in raw.gains.iter().enumerate() {
        if let Some(a) = *v {
            if !a.is_finite() {
                return Err(bad(ChannelGains::NAMES[i].to_string(), "gain must be finite"));
            }
            g[i] = a;
        }
    }
    cfg.gains = ChannelGains::from_array(g);
    Ok(cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Cums1,
    Cums2,
    Prms1,
    Prms2,
    Coms,
}

/// Which sender knows which messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sharing {
    Cumulative,
    PrimaryOnly,
    CognitiveOnly,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [Scheme::Cums1, Scheme::Cums2, Scheme::Prms1, Scheme::Prms2, Scheme::Coms];
    pub const GAUSSIAN: [Scheme; 3] = [Scheme::Cums2, Scheme::Prms2, Scheme::Coms];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Cums1 => "CuMS1",
            Scheme::Cums2 => "CuMS2",
            Scheme::Prms1 => "PrMS1",
            Scheme::Prms2 => "PrMS2",
            Scheme::Coms => "CoMS",
        }
    }

    pub fn sharing(self) -> Sharing {
        match self {
            Scheme::Cums1 | Scheme::Cums2 => Sharing::Cumulative,
            Scheme::Prms1 | Scheme::Prms2 => Sharing::PrimaryOnly,
            Scheme::Coms => Sharing::CognitiveOnly,
        }
    }

    pub fn has_gaussian_form(self) -> bool {
        matches!(self, Scheme::Cums2 | Scheme::Prms2 | Scheme::Coms)
    }

    /// Split-rate variables in canonical order.
    pub fn rate_vars(self) -> &'static [RateVar] {
        use RateVar::*;
        match self {
            Scheme::Cums2 | Scheme::Prms2 => &[R11, R21, R22, R31, R33],
            Scheme::Cums1 | Scheme::Prms1 => &[R10, R11, R20, R22, R30, R33],
            Scheme::Coms => &[R1, R2, R31, R33],
        }
    }

    pub fn dim(self) -> usize {
        self.rate_vars().len()
    }

    /// Rows of the linear map from split rates to `(r1, r2, r3)`.
    pub fn projection(self) -> Vec<Vec<f64>> {
        let vars = self.rate_vars();
        (0..3)
            .map(|u| vars.iter().map(|v| if v.user() == u { 1.0 } else { 0.0 }).collect())
            .collect()
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Param(format!("unknown scheme {s}")))
    }
}

/// A split-rate variable. `R1`/`R2` are the unsplit rates used by CoMS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RateVar {
    R10,
    R11,
    R20,
    R21,
    R22,
    R30,
    R31,
    R33,
    R1,
    R2,
}

impl RateVar {
    /// Index (0-based) of the user whose total rate this variable feeds.
    pub fn user(self) -> usize {
        use RateVar::*;
        match self {
            R10 | R11 | R1 => 0,
            R20 | R21 | R22 | R2 => 1,
            R30 | R31 | R33 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        use RateVar::*;
        match self {
            R10 => "R10",
            R11 => "R11",
            R20 => "R20",
            R21 => "R21",
            R22 => "R22",
            R30 => "R30",
            R31 => "R31",
            R33 => "R33",
            R1 => "R1",
            R2 => "R2",
        }
    }
}

impl fmt::Display for RateVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitRates {
    /// `(r11, r21, r22, r31, r33)`
    Scheme2([f64; 5]),
    /// `(r10, r11, r20, r22, r30, r33)`
    Scheme1([f64; 6]),
    /// `(r1, r2, r31, r33)`
    Coms([f64; 4]),
}

impl SplitRates {
    fn layout(&self) -> &'static str {
        match self {
            SplitRates::Scheme2(_) => "scheme-2",
            SplitRates::Scheme1(_) => "scheme-1",
            SplitRates::Coms(_) => "CoMS",
        }
    }

    pub fn values(&self) -> &[f64] {
        match self {
            SplitRates::Scheme2(v) => v,
            SplitRates::Scheme1(v) => v,
            SplitRates::Coms(v) => v,
        }
    }
}

pub fn project_split_rates(s: &SplitRates, scheme: Scheme) -> Result<RatePoint> {
    let ok = matches!(
        (s, scheme),
        (SplitRates::Scheme2(_), Scheme::Cums2 | Scheme::Prms2)
            | (SplitRates::Scheme1(_), Scheme::Cums1 | Scheme::Prms1)
            | (SplitRates::Coms(_), Scheme::Coms)
    );
    if !ok {
        return Err(Error::SplitLayout { layout: s.layout(), scheme: scheme.to_string() });
    }
    let mut out = [0.0; 3];
    for (v, x) in scheme.rate_vars().iter().zip(s.values()) {
        out[v.user()] += x;
    }
    Ok(out)
}

/// Power-split fractions and dirty-paper coefficients of one Gaussian
/// codebook construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpParams {
    pub tau: f64,
    pub kappa: f64,
    pub alpha: [f64; 4],
    pub beta: [f64; 2],
}

impl GpParams {
    pub fn zero_coding(tau: f64, kappa: f64) -> Self {
        GpParams { tau, kappa, alpha: [0.0; 4], beta: [0.0; 2] }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("tau", self.tau), ("kappa", self.kappa)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Param(format!("{name} = {v} outside [0, 1]")));
            }
        }
        if self.alpha.iter().chain(&self.beta).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("dirty-paper coefficient"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_conversions() {
        assert_eq!(db_to_linear(10.0).unwrap(), 10.0);
        assert_eq!(db_to_linear(0.0).unwrap(), 1.0);
        assert!((db_to_linear(7.8).unwrap() - 10f64.powf(0.78)).abs() < 1e-12);
        assert!((db_to_linear(7.8).unwrap() - 6.0256).abs() < 1e-4);
        assert!(db_to_linear(f64::NAN).is_err());
        assert!(db_to_linear(f64::INFINITY).is_err());
    }

    #[test]
    fn projections() {
        let s = SplitRates::Scheme2([1.0, 0.5, 0.25, 0.3, 0.2]);
        assert_eq!(project_split_rates(&s, Scheme::Cums2).unwrap(), [1.0, 0.75, 0.5]);
        let z = SplitRates::Scheme2([0.0; 5]);
        assert_eq!(project_split_rates(&z, Scheme::Prms2).unwrap(), [0.0; 3]);
        let c = SplitRates::Coms([0.8, 0.6, 0.1, 0.4]);
        assert_eq!(project_split_rates(&c, Scheme::Coms).unwrap(), [0.8, 0.6, 0.5]);
        let one = SplitRates::Scheme1([0.1, 0.2, 0.3, 0.4, 0.5, 0.6]);
        let p = project_split_rates(&one, Scheme::Cums1).unwrap();
        assert!((p[0] - 0.3).abs() < 1e-15 && (p[1] - 0.7).abs() < 1e-15 && (p[2] - 1.1).abs() < 1e-15);
        assert!(project_split_rates(&c, Scheme::Cums2).is_err());
        assert!(project_split_rates(&s, Scheme::Cums1).is_err());
    }

    #[test]
    fn projection_matrix_matches_function() {
        let m = Scheme::Cums1.projection();
        assert_eq!(m[0], vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(m[2], vec![0.0, 0.0, 0.0, 0.0, 1.0, 1.0]);
        assert_eq!(Scheme::Coms.projection()[2], vec![0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn config_defaults_and_errors() {
        let cfg = validate_config(&RawConfig::default()).unwrap();
        assert_eq!(cfg, ChannelConfig::default());
        assert_eq!(cfg.gains.as_array(), [0.55; 6]);
        assert_eq!(cfg.noise, [1.0; 3]);
        assert_eq!(cfg.powers, [10.0; 3]);

        let mut raw = RawConfig::default();
        raw.q[0] = Some(0.0);
        let err = validate_config(&raw).unwrap_err().to_string();
        assert!(err.contains("q1") && err.contains("noise variance must be positive"), "{err}");

        let mut raw = RawConfig::default();
        raw.p_db[0] = Some(7.8);
        let cfg = validate_config(&raw).unwrap();
        assert!((cfg.powers[0] - 6.0256).abs() < 1e-4);

        let mut raw = RawConfig::default();
        raw.p[2] = Some(-1.0);
        assert!(validate_config(&raw).unwrap_err().to_string().contains("p3"));

        let mut raw = RawConfig::default();
        raw.gains[3] = Some(f64::NAN);
        assert!(validate_config(&raw).unwrap_err().to_string().contains("a23"));

        let mut raw = RawConfig::default();
        raw.p[1] = Some(3.0);
        raw.p_db[1] = Some(3.0);
        assert!(validate_config(&raw).is_err());
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.name().parse::<Scheme>().unwrap(), s);
            assert_eq!(s.name().to_lowercase().parse::<Scheme>().unwrap(), s);
        }
        assert!("CuMS3".parse::<Scheme>().is_err());
    }

    #[test]
    fn params_validation() {
        assert!(GpParams::zero_coding(0.5, 0.5).validate().is_ok());
        assert!(GpParams::zero_coding(1.5, 0.5).validate().is_err());
        let mut p = GpParams::zero_coding(0.5, 0.5);
        p.beta[1] = f64::INFINITY;
        assert!(p.validate().is_err());
    }
}
