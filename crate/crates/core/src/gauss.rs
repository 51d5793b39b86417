//! Joint covariance of the channel and auxiliary Gaussian variables, and the
//! entropy / mutual-information functionals evaluated from it.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{ChannelConfig, GpParams, Scheme};

/// Labels of random variables that appear in constraint systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Q,
    W,
    W0,
    W1,
    U,
    U0,
    U1,
    U2,
    V0,
    V1,
    V3,
    X1,
    X2,
    X3,
    Y1,
    Y2,
    Y3,
}

impl Var {
    pub const ALL: [Var; 17] = [
        Var::Q,
        Var::W,
        Var::W0,
        Var::W1,
        Var::U,
        Var::U0,
        Var::U1,
        Var::U2,
        Var::V0,
        Var::V1,
        Var::V3,
        Var::X1,
        Var::X2,
        Var::X3,
        Var::Y1,
        Var::Y2,
        Var::Y3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Var::Q => "Q",
            Var::W => "W",
            Var::W0 => "W0",
            Var::W1 => "W1",
            Var::U => "U",
            Var::U0 => "U0",
            Var::U1 => "U1",
            Var::U2 => "U2",
            Var::V0 => "V0",
            Var::V1 => "V1",
            Var::V3 => "V3",
            Var::X1 => "X1",
            Var::X2 => "X2",
            Var::X3 => "X3",
            Var::Y1 => "Y1",
            Var::Y2 => "Y2",
            Var::Y3 => "Y3",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Var {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Var::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

/// Relative determinant floor on the correlation matrix of a label set.
/// Below it the set is treated as linearly dependent.
pub const CORR_DET_FLOOR: f64 = 1e-10;
/// Variances at or below this are treated as constants.
pub const CONSTANT_VAR: f64 = 1e-300;
/// Tolerance for clamping small negative MI values.
pub const MI_CLAMP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceTable {
    labels: Vec<Var>,
    cov: DMatrix<f64>,
}

impl CovarianceTable {
    pub fn new(labels: Vec<Var>, cov: DMatrix<f64>) -> Result<Self> {
        let n = labels.len();
        if cov.nrows() != n || cov.ncols() != n {
            return Err(Error::Dimension { expected: n, got: cov.nrows() });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.to_string()));
            }
        }
        if cov.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("covariance entry"));
        }
        let scale = cov.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        for i in 0..n {
            for j in 0..i {
                if (cov[(i, j)] - cov[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::Param(format!("covariance not symmetric at ({i}, {j})")));
                }
            }
        }
        let trace = cov.trace();
        if n > 0 {
            let min_eig = cov.clone().symmetric_eigen().eigenvalues.min();
            if min_eig < -1e-9 * trace.max(f64::MIN_POSITIVE) {
                return Err(Error::NotPsd(min_eig));
            }
        }
        Ok(CovarianceTable { labels, cov })
    }

    pub fn labels(&self) -> &[Var] {
        &self.labels
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn index(&self, v: Var) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == v)
            .ok_or_else(|| Error::UnknownLabel(v.to_string()))
    }

    pub fn get(&self, a: Var, b: Var) -> Result<f64> {
        Ok(self.cov[(self.index(a)?, self.index(b)?)])
    }

    pub fn submatrix(&self, vars: &[Var]) -> Result<DMatrix<f64>> {
        let idx = vars.iter().map(|&v| self.index(v)).collect::<Result<Vec<_>>>()?;
        Ok(DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.cov[(idx[i], idx[j])]))
    }

    fn is_constant(&self, v: Var) -> Result<bool> {
        let i = self.index(v)?;
        Ok(self.cov[(i, i)] <= CONSTANT_VAR)
    }
}

// Independent sources: W~, U1~, U2~, V1~ (or V0~), V3~, Z1, Z2, Z3.
const N_SRC: usize = 8;
type Comb = [f64; N_SRC];

fn unit(i: usize) -> Comb {
    let mut c = [0.0; N_SRC];
    c[i] = 1.0;
    c
}

fn lin(terms: &[(f64, &Comb)]) -> Comb {
    let mut out = [0.0; N_SRC];
    for (w, c) in terms {
        for (o, x) in out.iter_mut().zip(c.iter()) {
            *o += w * x;
        }
    }
    out
}

pub fn assemble_covariance(
    cfg: &ChannelConfig,
    params: &GpParams,
    scheme: Scheme,
) -> Result<CovarianceTable> {
    if !scheme.has_gaussian_form() {
        return Err(Error::NoGaussianForm(scheme.to_string()));
    }
    params.validate()?;
    let [p1, p2, p3] = cfg.powers;
    let [q1, q2, q3] = cfg.noise;
    let GpParams { tau, kappa, alpha, beta } = *params;
    let g = &cfg.gains;

    // Sender 2 splits its power only when it carries two codewords.
    let (u1_pow, u2_pow) = match scheme {
        Scheme::Coms => (p2, 0.0),
        _ => (tau * p2, (1.0 - tau) * p2),
    };
    let var: Comb = [p1, u1_pow, u2_pow, kappa * p3, (1.0 - kappa) * p3, q1, q2, q3];
    let beta = if scheme == Scheme::Prms2 { [0.0; 2] } else { beta };

    let x1 = unit(0);
    let x2 = lin(&[(1.0, &unit(1)), (1.0, &unit(2))]);
    let x3 = lin(&[(1.0, &unit(3)), (1.0, &unit(4))]);
    let y1 = lin(&[(1.0, &x1), (g.a12, &x2), (g.a13, &x3), (1.0, &unit(5))]);
    let y2 = lin(&[(g.a21, &x1), (1.0, &x2), (g.a23, &x3), (1.0, &unit(6))]);
    let y3 = lin(&[(g.a31, &x1), (g.a32, &x2), (1.0, &x3), (1.0, &unit(7))]);
    let v_first = lin(&[(1.0, &unit(3)), (alpha[2], &x1), (beta[0], &x2)]);
    let v3 = lin(&[(1.0, &unit(4)), (alpha[3], &x1), (beta[1], &x2)]);

    let mut vars: Vec<(Var, Comb)> = vec![(Var::Y1, y1), (Var::Y2, y2), (Var::Y3, y3), (Var::W, x1)];
    match scheme {
        Scheme::Coms => {
            vars.push((Var::U, x2));
            vars.push((Var::V0, v_first));
        }
        _ => {
            vars.push((Var::U1, lin(&[(1.0, &unit(1)), (alpha[0], &x1)])));
            vars.push((Var::U2, lin(&[(1.0, &unit(2)), (alpha[1], &x1)])));
            vars.push((Var::V1, v_first));
        }
    }
    vars.push((Var::V3, v3));

    let n = vars.len();
    let cov = DMatrix::from_fn(n, n, |i, j| {
        (0..N_SRC).map(|s| vars[i].1[s] * vars[j].1[s] * var[s]).sum()
    });
    CovarianceTable::new(vars.into_iter().map(|(v, _)| v).collect(), cov)
}

fn check_distinct(vars: &[Var]) -> Result<()> {
    for (i, v) in vars.iter().enumerate() {
        if vars[..i].contains(v) {
            return Err(Error::DuplicateLabel(v.to_string()));
        }
    }
    Ok(())
}

/// `log2 det` of a covariance matrix, or `None` when its correlation
/// determinant falls below [`CORR_DET_FLOOR`].
fn log2_det(m: &DMatrix<f64>) -> Result<Option<f64>> {
    let k = m.nrows();
    let d: Vec<f64> = (0..k).map(|i| m[(i, i)]).collect();
    if d.iter().any(|&x| x <= 0.0) {
        return Ok(None);
    }
    // Cholesky of the correlation matrix, by hand so pivots are visible.
    let mut l = DMatrix::<f64>::zeros(k, k);
    let mut log_det_r = 0.0;
    for j in 0..k {
        let mut s = m[(j, j)] / d[j];
        for p in 0..j {
            s -= l[(j, p)] * l[(j, p)];
        }
        if s < -MI_CLAMP {
            return Err(Error::NotPsd(s));
        }
        if s <= 0.0 {
            return Ok(None);
        }
        log_det_r += s.ln();
        let piv = s.sqrt();
        l[(j, j)] = piv;
        for i in j + 1..k {
            let mut t = m[(i, j)] / (d[i] * d[j]).sqrt();
            for p in 0..j {
                t -= l[(i, p)] * l[(j, p)];
            }
            l[(i, j)] = t / piv;
        }
    }
    if log_det_r <= CORR_DET_FLOOR.ln() {
        return Ok(None);
    }
    let log_d: f64 = d.iter().map(|x| x.ln()).sum();
    Ok(Some((log_det_r + log_d) / std::f64::consts::LN_2))
}

/// Differential entropy in bits. Returns `-inf` for a degenerate set.
pub fn differential_entropy(table: &CovarianceTable, vars: &[Var]) -> Result<f64> {
    check_distinct(vars)?;
    if vars.is_empty() {
        return Ok(0.0);
    }
    let sub = table.submatrix(vars)?;
    let k = vars.len() as f64;
    let c = (2.0 * std::f64::consts::PI * std::f64::consts::E).log2();
    Ok(match log2_det(&sub)? {
        Some(ld) => 0.5 * (k * c + ld),
        None => f64::NEG_INFINITY,
    })
}

fn union(sets: &[&[Var]]) -> Vec<Var> {
    let mut out = Vec::new();
    for s in sets {
        for &v in *s {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

/// `I(a; b | c)` in bits. Constant variables carry no information and are
/// dropped; a degenerate (collinear) set gives `Error::Degenerate`.
pub fn conditional_mi(table: &CovarianceTable, a: &[Var], b: &[Var], c: &[Var]) -> Result<f64> {
    for v in a {
        if b.contains(v) {
            return Err(Error::Overlap(v.to_string()));
        }
    }
    for v in a.iter().chain(b).chain(c) {
        table.index(*v)?;
    }
    let keep = |s: &[Var]| -> Result<Vec<Var>> {
        let mut out = Vec::new();
        for &v in s {
            if !table.is_constant(v)? && !out.contains(&v) {
                out.push(v);
            }
        }
        Ok(out)
    };
    let (a, b, c) = (keep(a)?, keep(b)?, keep(c)?);
    let a: Vec<Var> = a.into_iter().filter(|v| !c.contains(v)).collect();
    let b: Vec<Var> = b.into_iter().filter(|v| !c.contains(v)).collect();
    if a.is_empty() || b.is_empty() {
        return Ok(0.0);
    }
    let h = |s: Vec<Var>| differential_entropy(table, &s);
    let hac = h(union(&[&a, &c]))?;
    let hbc = h(union(&[&b, &c]))?;
    let habc = h(union(&[&a, &b, &c]))?;
    let hc = h(c.clone())?;
    if [hac, hbc, habc, hc].iter().any(|x| x.is_infinite()) {
        return Err(Error::Degenerate);
    }
    let mi = hac + hbc - habc - hc;
    if mi < 0.0 && mi >= -MI_CLAMP {
        return Ok(0.0);
    }
    Ok(mi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ChannelGains;

    fn table(labels: &[Var], m: &[f64]) -> CovarianceTable {
        let n = labels.len();
        CovarianceTable::new(labels.to_vec(), DMatrix::from_row_slice(n, n, m)).unwrap()
    }

    fn half_log2_2pie() -> f64 {
        0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).log2()
    }

    #[test]
    fn entropy_values() {
        let t = table(&[Var::X1, Var::X2], &[1.0, 0.0, 0.0, 1.0]);
        let h1 = differential_entropy(&t, &[Var::X1]).unwrap();
        assert!((h1 - half_log2_2pie()).abs() < 1e-12);
        assert!((h1 - 2.047096).abs() < 1e-6);
        let h2 = differential_entropy(&t, &[Var::X1, Var::X2]).unwrap();
        assert!((h2 - 2.0 * half_log2_2pie()).abs() < 1e-12);
        assert!((h2 - 4.094192).abs() < 1e-6);
        let t4 = table(&[Var::X1], &[4.0]);
        let h4 = differential_entropy(&t4, &[Var::X1]).unwrap();
        assert!((h4 - half_log2_2pie() - 1.0).abs() < 1e-12);
        assert_eq!(differential_entropy(&t, &[]).unwrap(), 0.0);
        assert!(differential_entropy(&t, &[Var::Y1]).is_err());
    }

    #[test]
    fn degenerate_entropy_is_neg_inf() {
        let t = table(&[Var::X1, Var::X2], &[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(differential_entropy(&t, &[Var::X1, Var::X2]).unwrap(), f64::NEG_INFINITY);
        assert_eq!(conditional_mi(&t, &[Var::X1], &[Var::X2], &[]), Err(Error::Degenerate));
    }

    #[test]
    fn mi_values() {
        let t = table(&[Var::X1, Var::X2], &[1.0, 0.5, 0.5, 1.0]);
        let mi = conditional_mi(&t, &[Var::X1], &[Var::X2], &[]).unwrap();
        assert!((mi + 0.5 * (0.75f64).log2()).abs() < 1e-12);
        assert!((mi - 0.2075).abs() < 1e-4);
        let ind = table(&[Var::X1, Var::X2], &[2.0, 0.0, 0.0, 3.0]);
        assert_eq!(conditional_mi(&ind, &[Var::X1], &[Var::X2], &[]).unwrap(), 0.0);
        // conditioning on A itself leaves nothing to learn
        let t3 = table(&[Var::X1, Var::X2, Var::X3], &[1.0, 0.3, 0.2, 0.3, 1.0, 0.1, 0.2, 0.1, 1.0]);
        let m = conditional_mi(&t3, &[Var::X1], &[Var::X2], &[Var::X1]).unwrap();
        assert_eq!(m, 0.0);
        assert!(conditional_mi(&t3, &[Var::X1], &[Var::X1, Var::X2], &[]).is_err());
    }

    #[test]
    fn conditional_mi_matches_schur_complement() {
        // I(A;B|C) from the partial correlation of (A,B) given C.
        let m = [1.0, 0.6, 0.5, 0.6, 2.0, 0.4, 0.5, 0.4, 1.5];
        let t = table(&[Var::X1, Var::X2, Var::X3], &m);
        let got = conditional_mi(&t, &[Var::X1], &[Var::X2], &[Var::X3]).unwrap();
        let saa = m[0] - m[2] * m[6] / m[8];
        let sbb = m[4] - m[5] * m[7] / m[8];
        let sab = m[1] - m[2] * m[7] / m[8];
        let rho2 = sab * sab / (saa * sbb);
        assert!((got + 0.5 * (1.0 - rho2).log2()).abs() < 1e-12);
    }

    #[test]
    fn covariance_entries() {
        let cfg = ChannelConfig::default();
        let mut p = GpParams::zero_coding(0.5, 0.5);
        p.alpha[0] = 1.0;
        let t = assemble_covariance(&cfg, &p, Scheme::Cums2).unwrap();
        assert!((t.get(Var::U1, Var::W).unwrap() - 10.0).abs() < 1e-12);
        assert!((t.get(Var::Y1, Var::Y1).unwrap() - 17.05).abs() < 1e-12);
        assert_eq!(
            t.labels(),
            &[Var::Y1, Var::Y2, Var::Y3, Var::W, Var::U1, Var::U2, Var::V1, Var::V3]
        );

        let dec = ChannelConfig { powers: [1.0; 3], noise: [1.0; 3], gains: ChannelGains::zero() };
        let t = assemble_covariance(&dec, &GpParams::zero_coding(0.5, 0.5), Scheme::Cums2).unwrap();
        assert_eq!(t.get(Var::Y1, Var::Y1).unwrap(), 2.0);
        assert_eq!(t.get(Var::Y1, Var::Y2).unwrap(), 0.0);

        assert!(matches!(
            assemble_covariance(&cfg, &p, Scheme::Cums1),
            Err(Error::NoGaussianForm(_))
        ));
    }

    #[test]
    fn prms2_ignores_beta_and_coms_labels() {
        let cfg = ChannelConfig::default();
        let mut p = GpParams::zero_coding(0.3, 0.6);
        p.beta = [2.0, -1.0];
        let t = assemble_covariance(&cfg, &p, Scheme::Prms2).unwrap();
        assert_eq!(t.get(Var::V1, Var::U1).unwrap(), 0.0);
        let c = assemble_covariance(&cfg, &p, Scheme::Coms).unwrap();
        assert_eq!(c.labels(), &[Var::Y1, Var::Y2, Var::Y3, Var::W, Var::U, Var::V0, Var::V3]);
        assert!((c.get(Var::V0, Var::U).unwrap() - 2.0 * 10.0).abs() < 1e-12);
        assert!((c.get(Var::U, Var::U).unwrap() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn constants_are_dropped() {
        // tau = 0 with no dirty-paper term makes U1 identically zero.
        let cfg = ChannelConfig::default();
        let t = assemble_covariance(&cfg, &GpParams::zero_coding(0.0, 0.5), Scheme::Cums2).unwrap();
        assert_eq!(conditional_mi(&t, &[Var::U1], &[Var::U2, Var::Y2], &[]).unwrap(), 0.0);
        assert!(differential_entropy(&t, &[Var::U1]).unwrap().is_infinite());
    }

    #[test]
    fn rejects_bad_tables() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(CovarianceTable::new(vec![Var::X1, Var::X2], m), Err(Error::NotPsd(_))));
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        assert!(CovarianceTable::new(vec![Var::X1, Var::X1], m).is_err());
    }
}
