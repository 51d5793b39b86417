//! Symbolic rate-constraint systems of the five schemes and their numeric
//! evaluation against a covariance table or any other MI source.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gauss::{conditional_mi, CovarianceTable, Var};
use crate::model::{RateVar, Scheme};
use crate::polytope::HalfspaceSystem;

/// Slack below zero tolerated on a right-hand side before the sample is
/// declared infeasible.
pub const NEG_RHS_TOL: f64 = 1e-12;

/// One signed `I(a; b | c)` term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MiTerm {
    pub sign: i8,
    pub a: Vec<Var>,
    pub b: Vec<Var>,
    pub c: Vec<Var>,
}

impl MiTerm {
    /// Canonical key with each label set sorted and the conditioning set
    /// optionally stripped of `Q`.
    fn key(&self, drop_q: bool) -> (Vec<Var>, Vec<Var>, Vec<Var>) {
        let sorted = |s: &[Var]| {
            let mut v = s.to_vec();
            v.sort();
            v
        };
        let c: Vec<Var> = self.c.iter().copied().filter(|&v| !(drop_q && v == Var::Q)).collect();
        (sorted(&self.a), sorted(&self.b), sorted(&c))
    }
}

impl fmt::Display for MiTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &[Var]| s.iter().map(|v| v.name()).collect::<Vec<_>>().join(",");
        write!(f, "I({};{}", join(&self.a), join(&self.b))?;
        if !self.c.is_empty() {
            write!(f, "|{}", join(&self.c))?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateInequality {
    /// 0/1 coefficient per split-rate variable of the scheme.
    pub coeffs: Vec<u8>,
    pub rhs: Vec<MiTerm>,
    /// Reading applied to a misprinted source line.
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    pub scheme: Scheme,
    pub rows: Vec<RateInequality>,
}

impl ConstraintSystem {
    pub fn vars(&self) -> &'static [RateVar] {
        self.scheme.rate_vars()
    }

    pub fn dim(&self) -> usize {
        self.vars().len()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Every label referenced by some term.
    pub fn labels(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self
            .rows
            .iter()
            .flat_map(|r| &r.rhs)
            .flat_map(|t| t.a.iter().chain(&t.b).chain(&t.c).copied())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Human-readable dump, one inequality per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&self.format_row(row));
            out.push('\n');
        }
        out
    }

    fn format_row(&self, row: &RateInequality) -> String {
        let lhs: Vec<&str> = self
            .vars()
            .iter()
            .zip(&row.coeffs)
            .filter(|(_, &c)| c == 1)
            .map(|(v, _)| v.name())
            .collect();
        let mut s = format!("{} <=", lhs.join(" + "));
        for (i, t) in row.rhs.iter().enumerate() {
            match (i, t.sign) {
                (0, 1) => s.push_str(&format!(" {t}")),
                (0, _) => s.push_str(&format!(" - {t}")),
                (_, 1) => s.push_str(&format!(" + {t}")),
                _ => s.push_str(&format!(" - {t}")),
            }
        }
        if let Some(n) = &row.note {
            s.push_str("  # ");
            s.push_str(n);
        }
        s
    }
}

fn parse_set(s: &str) -> Result<Vec<Var>> {
    s.split(',').map(|t| t.trim().parse::<Var>()).collect()
}

fn parse_term(body: &str, sign: i8) -> Result<MiTerm> {
    let (ab, c) = match body.split_once('|') {
        Some((ab, c)) => (ab, parse_set(c)?),
        None => (body, vec![]),
    };
    let (a, b) = ab
        .split_once(';')
        .ok_or_else(|| Error::Param(format!("term I({body}) lacks ';'")))?;
    Ok(MiTerm { sign, a: parse_set(a)?, b: parse_set(b)?, c })
}

/// Parses `R10 + R20 <= I(..) + I(..) - I(..)  # note`.
pub fn parse_inequality(scheme: Scheme, line: &str) -> Result<RateInequality> {
    let (body, note) = match line.split_once('#') {
        Some((b, n)) => (b, Some(n.trim().to_string())),
        None => (line, None),
    };
    let (lhs, rhs) = body
        .split_once("<=")
        .ok_or_else(|| Error::Param(format!("no '<=' in {line}")))?;
    let vars = scheme.rate_vars();
    let mut coeffs = vec![0u8; vars.len()];
    for name in lhs.split('+') {
        let name = name.trim();
        let k = vars
            .iter()
            .position(|v| v.name() == name)
            .ok_or_else(|| Error::Param(format!("{name} is not a rate of {scheme}")))?;
        coeffs[k] = 1;
    }
    let mut terms = Vec::new();
    let mut rest = rhs.trim();
    let mut sign = 1i8;
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('+') {
            sign = 1;
            rest = r.trim_start();
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r.trim_start();
        } else if let Some(r) = rest.strip_prefix("I(") {
            let end = r.find(')').ok_or_else(|| Error::Param(format!("unclosed term in {line}")))?;
            terms.push(parse_term(&r[..end], sign)?);
            sign = 1;
            rest = r[end + 1..].trim_start();
        } else {
            return Err(Error::Param(format!("cannot parse '{rest}' in {line}")));
        }
    }
    if terms.is_empty() || coeffs.iter().all(|&c| c == 0) {
        return Err(Error::Param(format!("empty side in {line}")));
    }
    for t in &terms {
        if t.a.is_empty() || t.b.is_empty() || t.a.iter().any(|v| t.b.contains(v)) {
            return Err(Error::Param(format!("bad term {t} in {line}")));
        }
    }
    Ok(RateInequality { coeffs, rhs: terms, note })
}

const CUMS2: &str = "\
R11 <= I(W;U1,V1,Y1|Q)
R11 + R21 <= I(W,U1;V1,Y1|Q)
R11 + R31 <= I(W,V1;U1,Y1|Q) + I(W;V1|Q) - I(W,U1,U2;V1|Q)
R11 + R21 + R31 <= I(W,U1,V1;Y1|Q) + I(W,U1;V1|Q) - I(W,U1,U2;V1|Q) # one printed copy drops the + before I(W,U1;V1|Q)
R21 <= I(U1;U2,Y2|Q) - I(W;U1|Q)
R22 <= I(U2;U1,Y2|Q) - I(W;U2|Q)
R21 + R22 <= I(U1,U2;Y2|Q) + I(U1;U2|Q) - I(W;U1|Q) - I(W;U2|Q)
R31 <= I(V1;V3,Y3|Q) - I(W,U1,U2;V1|Q)
R33 <= I(V3;V1,Y3|Q) - I(W,U1,U2;V3|Q)
R31 + R33 <= I(V1,V3;Y3|Q) + I(V1;V3|Q) - I(W,U1,U2;V3|Q) - I(W,U1,U2;V1|Q)
";

const PRMS2: &str = "\
R11 <= I(W;U1,V1,Y1|Q)
R11 + R21 <= I(W,U1;V1,Y1|Q)
R11 + R31 <= I(W,V1;U1,Y1|Q)
R11 + R21 + R31 <= I(W,U1,V1;Y1|Q) + I(W,U1;V1|Q) - I(W;V1|Q)
R21 <= I(U1;U2,Y2|Q) - I(W;U1|Q)
R22 <= I(U2;U1,Y2|Q) - I(W;U2|Q)
R21 + R22 <= I(U1,U2;Y2|Q) + I(U1;U2|Q) - I(W;U1|Q) - I(W;U2|Q)
R31 <= I(V1;V3,Y3|Q) - I(W;V1|Q)
R33 <= I(V3;V1,Y3|Q) - I(W;V3|Q)
R31 + R33 <= I(V1,V3;Y3|Q) + I(V1;V3|Q) - I(W;V3|Q) - I(W;V1|Q)
";

const COMS: &str = "\
R1 <= I(W;V0,Y1|Q)
R1 + R31 <= I(W,V0;Y1|Q) + I(W;V0|Q) - I(W,U;V0|Q)
R2 <= I(U;V0,Y2|Q)
R2 + R31 <= I(U,V0;Y2|Q) + I(U;V0|Q) - I(W,U;V0|Q)
R31 <= I(V0;V3,Y3|Q) - I(W,U;V0|Q)
R33 <= I(V3;V0,Y3|Q) - I(W,U;V3|Q)
R31 + R33 <= I(V0,V3;Y3|Q) + I(V0;V3|Q) - I(W,U;V0|Q) - I(W,U;V3|Q)
";

// `{V0}` and `{V3}` stand for the binning penalty of sender 3's codewords,
// which differs between the two scheme-1 variants.
const SCHEME1: &str = "\
R10 <= I(W0;W1,U0,V0,Y1|Q)
R11 <= I(W1;W0,U0,V0,Y1|Q)
R10 + R11 <= I(W0,W1;U0,V0,Y1|Q) + I(W0;W1|Q)  {Q_NOTE}
R10 + R20 <= I(W0,U0;W1,V0,Y1|Q) + I(W0;U0|Q) - I(W0,W1;U0|Q)
R10 + R30 <= I(W0,V0;W1,U0,Y1|Q) + I(W0;V0|Q) - {V0}
R11 + R20 <= I(W1,U0;W0,V0,Y1|Q) + I(W1;U0|Q) - I(W0,W1;U0|Q)
R11 + R30 <= I(W1,V0;W0,U0,Y1|Q) + I(W1;V0|Q) - {V0}
R10 + R11 + R20 <= I(W0,W1,U0;V0,Y1|Q) + I(W0,W1;U0|Q) + I(W0;W1|Q) - I(W0,W1;U0|Q)
R10 + R11 + R30 <= I(W0,W1,V0;U0,Y1|Q) + I(W0,W1;V0|Q) + I(W0;W1|Q) - {V0}
R10 + R20 + R30 <= I(W0,U0,V0;W1,Y1|Q) + I(W0,U0;V0|Q) + I(W0;U0|Q) - I(W0,W1;U0|Q) - {V0}
R11 + R20 + R30 <= I(W1,U0,V0;W0,Y1|Q) + I(W1,U0;V0|Q) + I(W1;U0|Q) - I(W0,W1;U0|Q) - {V0}
R10 + R11 + R20 + R30 <= I(W0,W1,U0,V0;Y1|Q) + I(W0,W1,U0;V0|Q) + I(W0,W1;U0|Q) + I(W0;W1|Q) - I(W0,W1;U0|Q) - {V0}  # printed as I(W0,W1|Q); read as I(W0;W1|Q)
R20 <= I(U0;W0,U2,V0,Y2|Q) - I(W0,W1;U0|Q)
R22 <= I(U2;W0,U0,V0,Y2|Q) - I(W0,W1;U2|Q)
R20 + R22 <= I(U0,U2;W0,V0,Y2|Q) + I(U0;U2|Q) - I(W0,W1;U0|Q) - I(W0,W1;U2|Q)
R10 + R20 <= I(W0,U0;U2,V0,Y2|Q) + I(W0;U0|Q) - I(W0,W1;U0|Q)
R10 + R22 <= I(W0,U2;U0,V0,Y2|Q) + I(W0;U2|Q) - I(W0,W1;U2|Q)
R20 + R30 <= I(U0,V0;W0,U2,Y2|Q) + I(U0;V0|Q) - I(W0,W1;U0|Q) - {V0}
R22 + R30 <= I(U2,V0;W0,U0,Y2|Q) + I(U2;V0|Q) - I(W0,W1;U2|Q) - {V0}
R10 + R20 + R22 <= I(W0,U0,U2;V0,Y2|Q) + I(W0,U0;U2|Q) + I(W0;U0|Q) - I(W0,W1;U0|Q) - I(W0,W1;U2|Q)
R10 + R20 + R30 <= I(W0,U0,V0;U2,Y2|Q) + I(W0,U0;V0|Q) + I(W0;U0|Q) - I(W0,W1;U0|Q) - {V0}
R10 + R22 + R30 <= I(W0,U2,V0;U0,Y2|Q) + I(W0,U2;V0|Q) + I(W0;U2|Q) - I(W0,W1;U2|Q) - {V0}
R20 + R22 + R30 <= I(U0,U2,V0;W0,Y2|Q) + I(U0,U2;V0|Q) + I(U0;U2|Q) - I(W0,W1;U0|Q) - I(W0,W1;U2|Q) - {V0}
R10 + R20 + R22 + R30 <= I(W0,U0,U2,V0;Y2|Q) + I(W0,U0,U2;V0|Q) + I(W0,U0;U2|Q) + I(W0;U0|Q) - I(W0,W1;U0|Q) - I(W0,W1;U2|Q) - {V0}  # printed as +I(W0,U0|Q) - -I(W0,W1;U0|Q); read as +I(W0;U0|Q) - I(W0,W1;U0|Q)
R30 <= I(V0;W0,U0,V3,Y3|Q) - {V0}
R33 <= I(V3;W0,U0,V0,Y3|Q) - {V3}
R30 + R33 <= I(V0,V3;W0,U0,Y3|Q) + I(V0;V3|Q) - {V0} - {V3}
R10 + R30 <= I(W0,V0;U0,V3,Y3|Q) + I(W0;V0|Q) - {V0}
R10 + R33 <= I(W0,V3;U0,V0,Y3|Q) + I(W0;V3|Q) - {V3}
R20 + R30 <= I(U0,V0;W0,V3,Y3|Q) + I(U0;V0|Q) - I(W0,W1;U0|Q) - {V0}
R20 + R33 <= I(U0,V3;W0,V0,Y3|Q) + I(U0;V3|Q) - I(W0,W1;U0|Q) - {V3}  {R20_NOTE}
R10 + R20 + R30 <= I(W0,U0,V0;V3,Y3|Q) + I(W0,U0;V0|Q) + I(W0;U0|Q) - I(W0,W1;U0|Q) - {V0}
R10 + R20 + R33 <= I(W0,U0,V3;V0,Y3|Q) + I(W0,U0;V3|Q) + I(W0;U0|Q) - I(W0,W1;U0|Q) - {V3}
R10 + R30 + R33 <= I(W0,V0,V3;U0,Y3|Q) + I(W0,V0;V3|Q) + I(W0;V0|Q) - {V0} - {V3}
R20 + R30 + R33 <= I(U0,V0,V3;W0,Y3|Q) + I(U0,V0;V3|Q) + I(U0;V0|Q) - I(W0,W1;U0|Q) - {V0} - {V3}
R10 + R20 + R30 + R33 <= I(W0,U0,V0,V3;Y3|Q) + I(W0,U0,V0;V3|Q) + I(W0,U0;V0|Q) + I(W0;U0|Q) - I(W0,W1;U0|Q) - {V0} - {V3}
";

fn scheme1_text(cumulative: bool) -> String {
    let (v0, v3) = if cumulative {
        ("I(W0,W1,U0,U2;V0|Q)", "I(W0,W1,U0,U2;V3|Q)")
    } else {
        ("I(W0,W1;V0|Q)", "I(W0,W1;V3|Q)")
    };
    let q_note = if cumulative { "# printed as I(W0;W1) without Q; conditioned on Q like its neighbours" } else { "" };
    let r20_note = if cumulative { "# printed with the leading R of R20 missing" } else { "" };
    SCHEME1
        .replace("{V0}", v0)
        .replace("{V3}", v3)
        .replace("{Q_NOTE}", q_note)
        .replace("{R20_NOTE}", r20_note)
}

pub fn build_system(scheme: Scheme) -> ConstraintSystem {
    let text = match scheme {
        Scheme::Cums2 => CUMS2.to_string(),
        Scheme::Prms2 => PRMS2.to_string(),
        Scheme::Coms => COMS.to_string(),
        Scheme::Cums1 => scheme1_text(true),
        Scheme::Prms1 => scheme1_text(false),
    };
    let rows = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse_inequality(scheme, l.trim_end()).expect("built-in transcription parses"))
        .collect();
    ConstraintSystem { scheme, rows }
}

/// Numeric image of a constraint system: `A x <= b`, `x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericSystem {
    pub scheme: Scheme,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub feasible: bool,
}

impl NumericSystem {
    pub fn halfspaces(&self) -> Result<HalfspaceSystem> {
        if !self.feasible {
            return Err(Error::Param("infeasible system has no polytope".into()));
        }
        HalfspaceSystem::new(self.scheme.dim(), self.a.clone(), self.b.clone())
    }
}

/// Evaluates every right-hand side with `mi`, reusing repeated terms.
/// `Error::Degenerate` from `mi` makes that right-hand side `-inf`.
pub fn evaluate_with(
    sys: &ConstraintSystem,
    drop_q: bool,
    mut mi: impl FnMut(&[Var], &[Var], &[Var]) -> Result<f64>,
) -> Result<NumericSystem> {
    let mut cache: HashMap<(Vec<Var>, Vec<Var>, Vec<Var>), f64> = HashMap::new();
    let mut a = Vec::with_capacity(sys.len());
    let mut b = Vec::with_capacity(sys.len());
    let mut feasible = true;
    for row in &sys.rows {
        let mut rhs = 0.0;
        for t in &row.rhs {
            let key = t.key(drop_q);
            let v = match cache.get(&key) {
                Some(&v) => v,
                None => {
                    let v = match mi(&key.0, &key.1, &key.2) {
                        Ok(v) => v,
                        Err(Error::Degenerate) => f64::INFINITY,
                        Err(e) => return Err(e),
                    };
                    cache.insert(key, v);
                    v
                }
            };
            rhs += if t.sign > 0 { v } else { -v };
        }
        if !rhs.is_finite() {
            // a degenerate term makes the bound meaningless
            rhs = f64::NEG_INFINITY;
            feasible = false;
        } else if rhs < 0.0 {
            if rhs < -NEG_RHS_TOL {
                feasible = false;
            } else {
                rhs = 0.0;
            }
        }
        a.push(row.coeffs.iter().map(|&c| c as f64).collect());
        b.push(rhs);
    }
    Ok(NumericSystem { scheme: sys.scheme, a, b, feasible })
}

/// Gaussian evaluation. The time-sharing variable is a constant here, so it
/// is dropped from every conditioning set.
pub fn evaluate_system(sys: &ConstraintSystem, table: &CovarianceTable) -> Result<NumericSystem> {
    if !sys.scheme.has_gaussian_form() {
        return Err(Error::NoGaussianForm(sys.scheme.to_string()));
    }
    for v in sys.labels() {
        if v != Var::Q {
            table.index(v)?;
        }
    }
    evaluate_with(sys, true, |a, b, c| conditional_mi(table, a, b, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::assemble_covariance;
    use crate::model::{ChannelConfig, ChannelGains, GpParams};

    #[test]
    fn counts() {
        let want = [(Scheme::Cums1, 36), (Scheme::Cums2, 10), (Scheme::Prms1, 36), (Scheme::Prms2, 10), (Scheme::Coms, 7)];
        for (s, n) in want {
            let sys = build_system(s);
            assert_eq!(sys.len(), n, "{s}");
            assert_eq!(sys.dim(), s.dim());
        }
    }

    #[test]
    fn dump_round_trips() {
        for s in Scheme::ALL {
            let sys = build_system(s);
            let again: Vec<RateInequality> =
                sys.dump().lines().map(|l| parse_inequality(s, l).unwrap()).collect();
            assert_eq!(again, sys.rows, "{s}");
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_inequality(Scheme::Cums2, "R11 <= ").is_err());
        assert!(parse_inequality(Scheme::Cums2, "R10 <= I(W;Y1)").is_err());
        assert!(parse_inequality(Scheme::Cums2, "R11 <= I(W;W)").is_err());
        assert!(parse_inequality(Scheme::Cums2, "R11 <= I(W,Y1)").is_err());
        assert!(parse_inequality(Scheme::Cums2, "R11 <= I(W;Z9)").is_err());
    }

    #[test]
    fn decoupled_r11_bound_is_point_to_point() {
        let cfg = ChannelConfig { gains: ChannelGains::zero(), ..Default::default() };
        let t = assemble_covariance(&cfg, &GpParams::zero_coding(0.5, 0.5), Scheme::Cums2).unwrap();
        let n = evaluate_system(&build_system(Scheme::Cums2), &t).unwrap();
        assert!(n.feasible);
        assert!((n.b[0] - 0.5 * 11f64.log2()).abs() < 1e-12);
        assert!((n.b[0] - 1.7297).abs() < 1e-4);
    }

    #[test]
    fn strong_dirty_paper_coefficient_is_infeasible() {
        let cfg = ChannelConfig::default();
        let mut p = GpParams::zero_coding(0.5, 0.5);
        p.alpha[0] = 5.0;
        let t = assemble_covariance(&cfg, &p, Scheme::Cums2).unwrap();
        let w_u1 = conditional_mi(&t, &[Var::W], &[Var::U1], &[]).unwrap();
        let dec = conditional_mi(&t, &[Var::U1], &[Var::U2, Var::Y2], &[]).unwrap();
        assert!(w_u1 > dec);
        let n = evaluate_system(&build_system(Scheme::Cums2), &t).unwrap();
        assert!(!n.feasible);
    }

    #[test]
    fn zero_power_gives_origin() {
        let cfg = ChannelConfig { powers: [0.0; 3], ..Default::default() };
        for s in Scheme::GAUSSIAN {
            let t = assemble_covariance(&cfg, &GpParams::zero_coding(0.5, 0.5), s).unwrap();
            let n = evaluate_system(&build_system(s), &t).unwrap();
            assert!(n.feasible);
            assert!(n.b.iter().all(|&b| b == 0.0), "{s}: {:?}", n.b);
            let v = crate::polytope::enumerate_vertices(&n.halfspaces().unwrap()).unwrap();
            assert_eq!(v, vec![vec![0.0; s.dim()]]);
        }
    }

    #[test]
    fn scheme1_is_rejected_for_gaussian_tables() {
        let t = assemble_covariance(&ChannelConfig::default(), &GpParams::zero_coding(0.5, 0.5), Scheme::Cums2).unwrap();
        assert!(matches!(evaluate_system(&build_system(Scheme::Cums1), &t), Err(Error::NoGaussianForm(_))));
        // CoMS labels are absent from a scheme-2 table
        assert!(matches!(evaluate_system(&build_system(Scheme::Coms), &t), Err(Error::UnknownLabel(_))));
    }
}
