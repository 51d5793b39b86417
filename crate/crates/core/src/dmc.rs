//! Finite-alphabet joint distributions: exact mutual information by
//! summation, factorization checks, exact scheme evaluation, and a Monte
//! Carlo estimate of Gaussian MI.

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::constraints::{build_system, evaluate_with, NumericSystem};
use crate::error::{Error, Result};
use crate::gauss::{CovarianceTable, Var, CONSTANT_VAR};
use crate::model::Scheme;

pub const DEFAULT_CELL_CAP: u128 = 10_000_000;
const SUM_TOL: f64 = 1e-12;
const PARSE_SUM_TOL: f64 = 1e-9;

/// Joint pmf over labelled finite alphabets, stored row-major with the
/// last label varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    labels: Vec<Var>,
    sizes: Vec<usize>,
    probs: Vec<f64>,
}

fn cell_count(sizes: &[usize]) -> u128 {
    sizes.iter().map(|&s| s as u128).product()
}

impl JointPmf {
    pub fn new(labels: Vec<Var>, sizes: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        Self::with_cap(labels, sizes, probs, DEFAULT_CELL_CAP)
    }

    pub fn with_cap(labels: Vec<Var>, sizes: Vec<usize>, probs: Vec<f64>, cap: u128) -> Result<Self> {
        if labels.len() != sizes.len() {
            return Err(Error::Dimension { expected: labels.len(), got: sizes.len() });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.to_string()));
            }
        }
        if sizes.contains(&0) {
            return Err(Error::Pmf("alphabet sizes must be positive".into()));
        }
        let cells = cell_count(&sizes);
        if cells > cap {
            return Err(Error::CellCap { cells, cap });
        }
        if probs.len() as u128 != cells {
            return Err(Error::Dimension { expected: cells as usize, got: probs.len() });
        }
        if probs.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(Error::Pmf("probabilities must be finite and nonnegative".into()));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::Pmf(format!("probabilities sum to {sum}")));
        }
        Ok(JointPmf { labels, sizes, probs })
    }

    /// Independent product of marginals.
    pub fn product(parts: &[(Var, Vec<f64>)]) -> Result<Self> {
        let labels = parts.iter().map(|(v, _)| *v).collect();
        let sizes: Vec<usize> = parts.iter().map(|(_, p)| p.len()).collect();
        let mut probs = vec![1.0];
        for (_, m) in parts {
            probs = probs.iter().flat_map(|&p| m.iter().map(move |&q| p * q)).collect();
        }
        Self::new(labels, sizes, probs)
    }

    pub fn labels(&self) -> &[Var] {
        &self.labels
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn size_of(&self, v: Var) -> Result<usize> {
        Ok(self.sizes[self.index(v)?])
    }

    fn index(&self, v: Var) -> Result<usize> {
        self.labels.iter().position(|&l| l == v).ok_or_else(|| Error::UnknownLabel(v.to_string()))
    }

    /// Decodes a flat cell index into one symbol per label.
    pub fn decode(&self, mut cell: usize) -> Vec<usize> {
        let mut out = vec![0; self.sizes.len()];
        for k in (0..self.sizes.len()).rev() {
            out[k] = cell % self.sizes[k];
            cell /= self.sizes[k];
        }
        out
    }

    fn encode(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.sizes).fold(0, |acc, (&i, &s)| acc * s + i)
    }

    /// Marginal over `vars` (in the given order), row-major.
    pub fn marginal(&self, vars: &[Var]) -> Result<Vec<f64>> {
        let pos: Vec<usize> = vars.iter().map(|&v| self.index(v)).collect::<Result<_>>()?;
        let sub_sizes: Vec<usize> = pos.iter().map(|&p| self.sizes[p]).collect();
        let mut out = vec![0.0; sub_sizes.iter().product()];
        for (cell, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let idx = self.decode(cell);
            let k = pos.iter().zip(&sub_sizes).fold(0, |acc, (&q, &s)| acc * s + idx[q]);
            out[k] += p;
        }
        Ok(out)
    }

    /// Entropy in bits of the marginal over `vars`.
    pub fn entropy(&self, vars: &[Var]) -> Result<f64> {
        Ok(self.marginal(vars)?.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum())
    }

    /// Plain-text form: a header of `label:size` tokens, then one row per
    /// nonzero cell with its symbol indices and probability.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let head: Vec<String> = self.labels.iter().zip(&self.sizes).map(|(l, n)| format!("{l}:{n}")).collect();
        s.push_str(&head.join(" "));
        s.push('\n');
        for (cell, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for i in self.decode(cell) {
                let _ = write!(s, "{i} ");
            }
            let _ = writeln!(s, "{p}");
        }
        s
    }

    /// Parses [`JointPmf::to_text`] output. Blank lines and `#` comments are
    /// ignored, missing cells are zero, and a total within 1e-9 of one is
    /// renormalized.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::PmfParse { line: 0, reason: "empty input".into() })?;
        let mut labels = Vec::new();
        let mut sizes = Vec::new();
        for tok in header.split_whitespace() {
            let (l, n) = tok
                .split_once(':')
                .ok_or_else(|| Error::PmfParse { line: hline, reason: format!("expected label:size, got {tok}") })?;
            labels.push(l.parse::<Var>().map_err(|e| Error::PmfParse { line: hline, reason: e.to_string() })?);
            sizes.push(n.parse::<usize>().map_err(|e| Error::PmfParse { line: hline, reason: e.to_string() })?);
        }
        let cells = cell_count(&sizes);
        if cells > DEFAULT_CELL_CAP {
            return Err(Error::CellCap { cells, cap: DEFAULT_CELL_CAP });
        }
        let shell = JointPmf { labels: labels.clone(), sizes: sizes.clone(), probs: vec![] };
        let mut probs = vec![0.0; cells as usize];
        let mut seen = vec![false; cells as usize];
        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != sizes.len() + 1 {
                return Err(Error::PmfParse { line: ln, reason: format!("expected {} fields", sizes.len() + 1) });
            }
            let mut idx = Vec::with_capacity(sizes.len());
            for (t, &n) in toks.iter().zip(&sizes) {
                let i: usize = t.parse().map_err(|_| Error::PmfParse { line: ln, reason: format!("bad index {t}") })?;
                if i >= n {
                    return Err(Error::PmfParse { line: ln, reason: format!("index {i} outside alphabet of size {n}") });
                }
                idx.push(i);
            }
            let p: f64 = toks[sizes.len()]
                .parse()
                .map_err(|_| Error::PmfParse { line: ln, reason: format!("bad probability {}", toks[sizes.len()]) })?;
            let cell = shell.encode(&idx);
            if seen[cell] {
                return Err(Error::PmfParse { line: ln, reason: "repeated cell".into() });
            }
            seen[cell] = true;
            probs[cell] = p;
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PARSE_SUM_TOL {
            return Err(Error::Pmf(format!("probabilities sum to {sum}")));
        }
        for p in &mut probs {
            *p /= sum;
        }
        Self::new(labels, sizes, probs)
    }
}

fn prepare(a: &[Var], b: &[Var], c: &[Var]) -> Result<(Vec<Var>, Vec<Var>)> {
    if let Some(v) = a.iter().find(|v| b.contains(v)) {
        return Err(Error::Overlap(v.to_string()));
    }
    let strip = |s: &[Var]| s.iter().copied().filter(|v| !c.contains(v)).collect::<Vec<_>>();
    Ok((strip(a), strip(b)))
}

/// `I(a; b | c)` in bits by direct summation over the joint.
pub fn mi_discrete(pmf: &JointPmf, a: &[Var], b: &[Var], c: &[Var]) -> Result<f64> {
    MiCache::new(pmf).mi(a, b, c)
}

/// Entropy memo for repeated MI queries on one pmf.
pub struct MiCache<'a> {
    pmf: &'a JointPmf,
    entropies: HashMap<Vec<Var>, f64>,
}

impl<'a> MiCache<'a> {
    pub fn new(pmf: &'a JointPmf) -> Self {
        MiCache { pmf, entropies: HashMap::new() }
    }

    fn h(&mut self, vars: Vec<Var>) -> Result<f64> {
        let mut key = vars;
        key.sort();
        key.dedup();
        if let Some(&h) = self.entropies.get(&key) {
            return Ok(h);
        }
        let h = self.pmf.entropy(&key)?;
        self.entropies.insert(key, h);
        Ok(h)
    }

    pub fn mi(&mut self, a: &[Var], b: &[Var], c: &[Var]) -> Result<f64> {
        for v in a.iter().chain(b).chain(c) {
            self.pmf.index(*v)?;
        }
        let (a, b) = prepare(a, b, c)?;
        if a.is_empty() || b.is_empty() {
            return Ok(0.0);
        }
        let cat = |x: &[Var], y: &[Var]| [x, y].concat();
        let v = self.h(cat(&a, c))? + self.h(cat(&b, c))? - self.h([&a[..], &b, c].concat())? - self.h(c.to_vec())?;
        Ok(if v < 0.0 && v > -1e-12 { 0.0 } else { v })
    }
}

/// One conditional factor `p(targets | given)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub targets: Vec<Var>,
    pub given: Vec<Var>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationSpec {
    pub factors: Vec<Factor>,
}

fn f(targets: &[Var], given: &[Var]) -> Factor {
    Factor { targets: targets.to_vec(), given: given.to_vec() }
}

impl FactorizationSpec {
    /// Chain rule of the scheme's input distribution and the channel.
    pub fn for_scheme(scheme: Scheme) -> Self {
        use Var::*;
        let ch = f(&[Y1, Y2, Y3], &[X1, X2, X3]);
        let factors = match scheme {
            Scheme::Cums1 => vec![
                f(&[Q], &[]),
                f(&[W0, W1, X1], &[Q]),
                f(&[U0], &[W0, W1, Q]),
                f(&[U2], &[W0, W1, Q]),
                f(&[X2], &[U0, U2, W0, W1, Q]),
                f(&[V0], &[U0, U2, W0, W1, Q]),
                f(&[V3], &[U0, U2, W0, W1, Q]),
                f(&[X3], &[V0, V3, U0, U2, W0, W1, Q]),
                ch,
            ],
            Scheme::Cums2 => vec![
                f(&[Q], &[]),
                f(&[W, X1], &[Q]),
                f(&[U1], &[W, Q]),
                f(&[U2], &[W, Q]),
                f(&[X2], &[U1, U2, W, Q]),
                f(&[V1], &[U1, U2, W, Q]),
                f(&[V3], &[U1, U2, W, Q]),
                f(&[X3], &[V1, V3, U1, U2, W, Q]),
                ch,
            ],
            Scheme::Prms1 => vec![
                f(&[Q], &[]),
                f(&[W0, W1, X1], &[Q]),
                f(&[U0], &[W0, W1, Q]),
                f(&[U2], &[W0, W1, Q]),
                f(&[X2], &[U0, U2, W0, W1, Q]),
                f(&[V0], &[W0, W1, Q]),
                f(&[V3], &[W0, W1, Q]),
                f(&[X3], &[V0, V3, W0, W1, Q]),
                ch,
            ],
            Scheme::Prms2 => vec![
                f(&[Q], &[]),
                f(&[W, X1], &[Q]),
                f(&[U1], &[W, Q]),
                f(&[U2], &[W, Q]),
                f(&[X2], &[U1, U2, W, Q]),
                f(&[V1], &[W, Q]),
                f(&[V3], &[W, Q]),
                f(&[X3], &[V1, V3, W, Q]),
                ch,
            ],
            Scheme::Coms => vec![
                f(&[Q], &[]),
                f(&[W, X1], &[Q]),
                f(&[U, X2], &[Q]),
                f(&[V0], &[W, U, Q]),
                f(&[V3], &[W, U, Q]),
                f(&[X3], &[V0, V3, U, W, Q]),
                ch,
            ],
        };
        FactorizationSpec { factors }
    }

    pub fn labels(&self) -> Vec<Var> {
        self.factors.iter().flat_map(|f| f.targets.iter().copied()).collect()
    }

    /// Every label is a target exactly once and conditions only on earlier
    /// targets.
    pub fn validate(&self) -> Result<()> {
        let mut seen: Vec<Var> = Vec::new();
        for fac in &self.factors {
            for g in &fac.given {
                if !seen.contains(g) {
                    return Err(Error::Pmf(format!("{g} is conditioned on before it is generated")));
                }
            }
            for t in &fac.targets {
                if seen.contains(t) {
                    return Err(Error::DuplicateLabel(t.to_string()));
                }
                seen.push(*t);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorCheck {
    pub holds: bool,
    pub max_deviation: f64,
}

fn same_label_set(pmf: &JointPmf, spec: &FactorizationSpec) -> Result<()> {
    let mut a = pmf.labels().to_vec();
    let mut b = spec.labels();
    a.sort();
    b.sort();
    if a != b {
        return Err(Error::Pmf("factorization labels differ from pmf labels".into()));
    }
    Ok(())
}

/// Rebuilds the joint from its own conditionals along `spec` and reports
/// the largest deviation on the support. Conditionals on zero-probability
/// cells are taken as uniform.
pub fn check_factorization(pmf: &JointPmf, spec: &FactorizationSpec) -> Result<FactorCheck> {
    spec.validate()?;
    same_label_set(pmf, spec)?;
    struct Tab {
        joint: Vec<f64>,
        given: Vec<f64>,
        jpos: Vec<usize>,
        jsizes: Vec<usize>,
        gpos: Vec<usize>,
        gsizes: Vec<usize>,
        targets: usize,
    }
    let mut tabs = Vec::new();
    for fac in &spec.factors {
        let jv: Vec<Var> = [&fac.given[..], &fac.targets].concat();
        let jpos: Vec<usize> = jv.iter().map(|&v| pmf.index(v)).collect::<Result<_>>()?;
        let gpos: Vec<usize> = fac.given.iter().map(|&v| pmf.index(v)).collect::<Result<_>>()?;
        tabs.push(Tab {
            joint: pmf.marginal(&jv)?,
            given: pmf.marginal(&fac.given)?,
            jsizes: jpos.iter().map(|&p| pmf.sizes[p]).collect(),
            gsizes: gpos.iter().map(|&p| pmf.sizes[p]).collect(),
            jpos,
            gpos,
            targets: fac.targets.iter().map(|&v| pmf.size_of(v)).product::<Result<usize>>()?,
        });
    }
    let flat = |pos: &[usize], sizes: &[usize], idx: &[usize]| {
        pos.iter().zip(sizes).fold(0, |acc, (&q, &s)| acc * s + idx[q])
    };
    let mut worst = 0.0f64;
    for (cell, &p) in pmf.probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let idx = pmf.decode(cell);
        let mut q = 1.0;
        for t in &tabs {
            let g = t.given[flat(&t.gpos, &t.gsizes, &idx)];
            q *= if g > 0.0 { t.joint[flat(&t.jpos, &t.jsizes, &idx)] / g } else { 1.0 / t.targets as f64 };
        }
        worst = worst.max((p - q).abs());
    }
    Ok(FactorCheck { holds: worst <= 1e-9, max_deviation: worst })
}

/// Builds a joint by multiplying conditionals along `spec`. `cond(k, idx)`
/// returns the distribution of factor `k`'s targets (row-major) given the
/// symbols already fixed in `idx` (indexed like `labels`).
pub fn build_from_chain(
    labels: &[(Var, usize)],
    spec: &FactorizationSpec,
    mut cond: impl FnMut(usize, &[usize]) -> Vec<f64>,
) -> Result<JointPmf> {
    spec.validate()?;
    let shell = JointPmf {
        labels: labels.iter().map(|l| l.0).collect(),
        sizes: labels.iter().map(|l| l.1).collect(),
        probs: vec![],
    };
    same_label_set(&shell, spec)?;
    let cells = cell_count(&shell.sizes);
    if cells > DEFAULT_CELL_CAP {
        return Err(Error::CellCap { cells, cap: DEFAULT_CELL_CAP });
    }
    let tpos: Vec<Vec<usize>> = spec
        .factors
        .iter()
        .map(|f| f.targets.iter().map(|&v| shell.index(v)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut probs = vec![0.0; cells as usize];
    for (cell, slot) in probs.iter_mut().enumerate() {
        let idx = shell.decode(cell);
        let mut p = 1.0;
        for (k, pos) in tpos.iter().enumerate() {
            let dist = cond(k, &idx);
            let sizes: Vec<usize> = pos.iter().map(|&q| shell.sizes[q]).collect();
            if dist.len() != sizes.iter().product::<usize>() {
                return Err(Error::Dimension { expected: sizes.iter().product(), got: dist.len() });
            }
            let t = pos.iter().zip(&sizes).fold(0, |acc, (&q, &s)| acc * s + idx[q]);
            p *= dist[t];
            if p == 0.0 {
                break;
            }
        }
        *slot = p;
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::Pmf(format!("chain conditionals do not normalize (sum {sum})")));
    }
    for p in &mut probs {
        *p /= sum;
    }
    JointPmf::new(shell.labels, shell.sizes, probs)
}

/// A pmf following `spec` with every conditional drawn at random.
pub fn random_chain_pmf(labels: &[(Var, usize)], spec: &FactorizationSpec, seed: u64) -> Result<JointPmf> {
    let sizes: HashMap<Var, usize> = labels.iter().copied().collect();
    let mut tables: Vec<HashMap<Vec<usize>, Vec<f64>>> = vec![HashMap::new(); spec.factors.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pos: HashMap<Var, usize> = labels.iter().enumerate().map(|(i, l)| (l.0, i)).collect();
    build_from_chain(labels, spec, |k, idx| {
        let fac = &spec.factors[k];
        let key: Vec<usize> = fac.given.iter().map(|v| idx[pos[v]]).collect();
        let n: usize = fac.targets.iter().map(|v| sizes[v]).product();
        tables[k]
            .entry(key)
            .or_insert_with(|| {
                let w: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 0.05).collect();
                let s: f64 = w.iter().sum();
                w.into_iter().map(|x| x / s).collect()
            })
            .clone()
    })
}

/// Exact constraint system of any scheme on a discrete pmf. `Q` is kept in
/// the conditioning sets.
pub fn evaluate_scheme_discrete(pmf: &JointPmf, scheme: Scheme) -> Result<NumericSystem> {
    let sys = build_system(scheme);
    for v in sys.labels() {
        pmf.index(v)?;
    }
    let mut cache = MiCache::new(pmf);
    evaluate_with(&sys, false, |a, b, c| cache.mi(a, b, c))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiEstimate {
    pub mean: f64,
    pub std_err: f64,
}

impl MiEstimate {
    /// Whether `value` is within `k` standard errors of the estimate.
    pub fn agrees(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.std_err
    }
}

/// Lower-triangular Cholesky factor, or `None` if not positive definite.
fn cholesky(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    m.clone().cholesky().map(|c| c.l())
}

/// Quadratic form `xᵀ Σ⁻¹ x` on a subset of coordinates.
struct Precision {
    pos: Vec<usize>,
    inv: Vec<f64>,
}

impl Precision {
    fn new(cov: &DMatrix<f64>, pos: Vec<usize>) -> Result<Self> {
        let k = pos.len();
        let sub = DMatrix::from_fn(k, k, |i, j| cov[(pos[i], pos[j])]);
        let inv = sub.try_inverse().ok_or(Error::Degenerate)?;
        Ok(Precision { pos, inv: inv.iter().copied().collect() })
    }

    fn quad(&self, x: &[f64]) -> f64 {
        let k = self.pos.len();
        let mut s = 0.0;
        for j in 0..k {
            let xj = x[self.pos[j]];
            for i in 0..k {
                // column-major storage
                s += x[self.pos[i]] * self.inv[j * k + i] * xj;
            }
        }
        s
    }
}

/// Monte Carlo estimates of several `I(a; b | c)` from one set of joint
/// Gaussian samples.
pub fn gaussian_mi_mc_terms(
    table: &CovarianceTable,
    terms: &[(Vec<Var>, Vec<Var>, Vec<Var>)],
    n: usize,
    seed: u64,
) -> Result<Vec<MiEstimate>> {
    if n < 1000 {
        return Err(Error::Param(format!("Monte Carlo needs at least 1000 samples, got {n}")));
    }
    // reduce every term, then gather the labels actually used
    let mut reduced = Vec::new();
    let mut used: Vec<Var> = Vec::new();
    for (a, b, c) in terms {
        for v in a.iter().chain(b).chain(c) {
            table.index(*v)?;
        }
        let live = |s: &[Var]| -> Result<Vec<Var>> {
            let mut out = Vec::new();
            for &v in s {
                if table.get(v, v)? > CONSTANT_VAR {
                    out.push(v);
                }
            }
            Ok(out)
        };
        let (a, b) = prepare(&live(a)?, &live(b)?, c)?;
        let c = live(c)?;
        for v in a.iter().chain(&b).chain(&c) {
            if !used.contains(v) {
                used.push(*v);
            }
        }
        reduced.push((a, b, c));
    }
    let cov = table.submatrix(&used)?;
    let l = cholesky(&cov).ok_or(Error::Degenerate)?;
    let d = used.len();
    let at = |s: &[Var]| s.iter().map(|v| used.iter().position(|u| u == v).unwrap()).collect::<Vec<_>>();

    struct Term {
        skip: bool,
        forms: [Option<Precision>; 4],
        offset: f64,
    }
    let mut prepared = Vec::new();
    for (a, b, c) in &reduced {
        if a.is_empty() || b.is_empty() {
            prepared.push(Term { skip: true, forms: [None, None, None, None], offset: 0.0 });
            continue;
        }
        let sets = [[&a[..], c].concat(), [&b[..], c].concat(), [&a[..], &b, c].concat(), c.clone()];
        let mut forms: [Option<Precision>; 4] = [None, None, None, None];
        let mut logdet = [0.0; 4];
        for (k, s) in sets.iter().enumerate() {
            if s.is_empty() {
                continue;
            }
            let p = at(s);
            let sub = DMatrix::from_fn(p.len(), p.len(), |i, j| cov[(p[i], p[j])]);
            let ch = cholesky(&sub).ok_or(Error::Degenerate)?;
            logdet[k] = 2.0 * ch.diagonal().iter().map(|x| x.ln()).sum::<f64>();
            forms[k] = Some(Precision::new(&cov, p)?);
        }
        // ln f(abc) + ln f(c) - ln f(ac) - ln f(bc), the 2π terms cancel
        let offset = 0.5 * (logdet[0] + logdet[1] - logdet[2] - logdet[3]);
        prepared.push(Term { skip: false, forms, offset });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = vec![0.0; d];
    let mut x = vec![0.0; d];
    let mut sum = vec![0.0; terms.len()];
    let mut sum2 = vec![0.0; terms.len()];
    for _ in 0..n {
        for zi in z.iter_mut() {
            *zi = rng.sample(StandardNormal);
        }
        for i in 0..d {
            x[i] = (0..=i).map(|j| l[(i, j)] * z[j]).sum();
        }
        for (t, term) in prepared.iter().enumerate() {
            if term.skip {
                continue;
            }
            let q = |k: usize| term.forms[k].as_ref().map_or(0.0, |p| p.quad(&x));
            let ln = term.offset + 0.5 * (q(0) + q(1) - q(2) - q(3));
            let v = ln / std::f64::consts::LN_2;
            sum[t] += v;
            sum2[t] += v * v;
        }
    }
    let nf = n as f64;
    Ok((0..terms.len())
        .map(|t| {
            let mean = sum[t] / nf;
            let var = (sum2[t] / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
            MiEstimate { mean, std_err: (var / nf).sqrt() }
        })
        .collect())
}

pub fn gaussian_mi_mc(
    table: &CovarianceTable,
    a: &[Var],
    b: &[Var],
    c: &[Var],
    n: usize,
    seed: u64,
) -> Result<MiEstimate> {
    Ok(gaussian_mi_mc_terms(table, &[(a.to_vec(), b.to_vec(), c.to_vec())], n, seed)?[0])
}
