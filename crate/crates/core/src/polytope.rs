//! Small-dimension polytope kernel: vertex enumeration by subset solving,
//! linear projection, planar hulls and minimum-rate slices.

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 6;
pub const MAX_ROWS: usize = 64;
/// Feasibility slack for enumerated vertices.
pub const FEAS_TOL: f64 = 1e-7;
/// Euclidean distance under which two vertices are the same.
pub const DEDUP_TOL: f64 = 1e-9;
/// Subsets whose pivot ratio exceeds this are treated as singular.
pub const MAX_COND: f64 = 1e12;

/// `{x >= 0 : A x <= b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfspaceSystem {
    dim: usize,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl HalfspaceSystem {
    pub fn new(dim: usize, a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Param(format!("dimension {dim} outside 1..={MAX_DIM}")));
        }
        if a.len() != b.len() {
            return Err(Error::Dimension { expected: a.len(), got: b.len() });
        }
        if a.len() + 1 > MAX_ROWS {
            return Err(Error::Param(format!("{} rows exceed the limit of {MAX_ROWS}", a.len())));
        }
        for row in &a {
            if row.len() != dim {
                return Err(Error::Dimension { expected: dim, got: row.len() });
            }
        }
        if a.iter().flatten().chain(&b).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("halfspace coefficient"));
        }
        Ok(HalfspaceSystem { dim, a, b })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.a.iter().map(|r| r.as_slice()).zip(self.b.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Adds `row · x <= rhs`.
    pub fn with_row(&self, row: Vec<f64>, rhs: f64) -> Result<Self> {
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        a.push(row);
        b.push(rhs);
        HalfspaceSystem::new(self.dim, a, b)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.iter().all(|&v| v >= -tol)
            && self.rows().all(|(r, b)| dot(r, x) <= b + tol * (1.0 + b.abs()))
    }

    fn check_bounded(&self) -> Result<()> {
        for i in 0..self.dim {
            let capped = self
                .a
                .iter()
                .any(|r| r[i] > 0.0 && r.iter().enumerate().all(|(j, &v)| j == i || v >= 0.0));
            if !capped {
                return Err(Error::Unbounded(i));
            }
        }
        Ok(())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves the `d x d` system in place by Gaussian elimination with partial
/// pivoting. Rows are `[a_0 .. a_{d-1}, rhs]`. Returns `None` when the pivot
/// ratio signals a (near) singular subset.
fn solve_small(m: &mut [[f64; MAX_DIM + 1]; MAX_DIM], d: usize) -> Option<[f64; MAX_DIM]> {
    for row in m.iter_mut().take(d) {
        let norm = row[..d].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return None;
        }
        for v in row.iter_mut().take(d + 1) {
            *v /= norm;
        }
    }
    let (mut pmax, mut pmin) = (0.0f64, f64::INFINITY);
    for col in 0..d {
        let mut best = col;
        for r in col + 1..d {
            if m[r][col].abs() > m[best][col].abs() {
                best = r;
            }
        }
        m.swap(col, best);
        let p = m[col][col];
        pmax = pmax.max(p.abs());
        pmin = pmin.min(p.abs());
        if p == 0.0 || pmax > MAX_COND * pmin {
            return None;
        }
        for r in col + 1..d {
            let f = m[r][col] / p;
            if f != 0.0 {
                for c in col..=d {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    let mut x = [0.0; MAX_DIM];
    for r in (0..d).rev() {
        let mut s = m[r][d];
        for c in r + 1..d {
            s -= m[r][c] * x[c];
        }
        x[r] = s / m[r][r];
    }
    Some(x)
}

/// Visits every `k`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Removes near-duplicates (within `tol`) and sorts lexicographically.
pub fn dedup_points(points: Vec<Vec<f64>>, tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points {
        let dup = out.iter().any(|q| {
            q.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt() <= tol
        });
        if !dup {
            out.push(p);
        }
    }
    out.sort_by(|a, b| lex_cmp(a, b));
    out
}

/// All vertices of a bounded system, deduplicated and sorted.
pub fn enumerate_vertices(sys: &HalfspaceSystem) -> Result<Vec<Vec<f64>>> {
    sys.check_bounded()?;
    let d = sys.dim;
    let m = sys.len();
    let n = m + d;
    let row = |k: usize, out: &mut [f64; MAX_DIM + 1]| {
        if k < m {
            out[..d].copy_from_slice(&sys.a[k]);
            out[d] = sys.b[k];
        } else {
            out[..=d].fill(0.0);
            out[k - m] = -1.0;
        }
    };
    let mut found = Vec::new();
    let mut mat = [[0.0; MAX_DIM + 1]; MAX_DIM];
    for_each_subset(n, d, |subset| {
        for (r, &k) in subset.iter().enumerate() {
            row(k, &mut mat[r]);
        }
        let Some(x) = solve_small(&mut mat, d) else { return };
        let x = &x[..d];
        if x.iter().any(|&v| v < -FEAS_TOL || !v.is_finite()) {
            return;
        }
        for k in 0..m {
            let b = sys.b[k];
            if dot(&sys.a[k], x) > b + FEAS_TOL * (1.0 + b.abs()) {
                return;
            }
        }
        found.push(x.iter().map(|&v| if v <= 0.0 { 0.0 } else { v }).collect::<Vec<_>>());
    });
    Ok(dedup_points(found, DEDUP_TOL))
}

/// Applies a `k x d` linear map (given by rows) to each point.
pub fn project(points: &[Vec<f64>], map: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let d = map.first().map_or(0, |r| r.len());
    if map.iter().any(|r| r.len() != d) {
        return Err(Error::Param("ragged projection map".into()));
    }
    if map.len() > d {
        return Err(Error::Dimension { expected: d, got: map.len() });
    }
    points
        .iter()
        .map(|p| {
            if p.len() != d {
                return Err(Error::Dimension { expected: d, got: p.len() });
            }
            Ok(map.iter().map(|r| dot(r, p)).collect())
        })
        .collect()
}

pub type Point2 = [f64; 2];

fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counterclockwise hull by monotone chain. Collinear boundary points are
/// dropped; all-collinear input yields the two endpoints.
pub fn convex_hull_2d(points: &[Point2]) -> Result<Vec<Point2>> {
    if points.is_empty() {
        return Err(Error::Param("convex hull of an empty set".into()));
    }
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| lex_cmp(a, b));
    pts.dedup();
    if pts.len() <= 2 {
        return Ok(pts);
    }
    let scale = pts.iter().fold(1.0f64, |m, p| m.max(p[0].abs()).max(p[1].abs()));
    let eps = 1e-14 * scale * scale;
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 2 {
        // every point collinear and coincident after tolerance
        return Ok(vec![pts[0], *pts.last().unwrap()]);
    }
    Ok(hull)
}

/// Whether `p` lies in the ccw polygon `hull`, allowing distance `tol`
/// outside its boundary.
pub fn polygon_contains(hull: &[Point2], p: Point2, tol: f64) -> bool {
    match hull.len() {
        0 => false,
        1 => dist(hull[0], p) <= tol,
        2 => seg_dist(hull[0], hull[1], p) <= tol,
        n => (0..n).all(|i| {
            let a = hull[i];
            let b = hull[(i + 1) % n];
            let len = dist(a, b);
            len == 0.0 || cross(a, b, p) / len >= -tol
        }),
    }
}

fn dist(a: Point2, b: Point2) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn seg_dist(a: Point2, b: Point2, p: Point2) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return dist(a, p);
    }
    let t = (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0);
    dist([a[0] + t * ab[0], a[1] + t * ab[1]], p)
}

/// Intersects the system with `{(map x)[axis] >= c}`, enumerates vertices,
/// maps them to rate space and drops `axis`. Empty when `c` is out of reach.
pub fn slice_min_rate(
    sys: &HalfspaceSystem,
    map: &[Vec<f64>],
    axis: usize,
    c: f64,
) -> Result<Vec<Point2>> {
    if map.len() != 3 || axis >= 3 {
        return Err(Error::Param("slices need a map to three rates and an axis in 0..3".into()));
    }
    if !(c >= 0.0) {
        return Err(Error::Param(format!("slice value {c} must be nonnegative")));
    }
    let row: Vec<f64> = map[axis].iter().map(|v| -v).collect();
    let cut = sys.with_row(row, -c)?;
    let verts = enumerate_vertices(&cut)?;
    let rates = project(&verts, map)?;
    Ok(rates.iter().map(|r| drop_axis(r, axis)).collect())
}

pub fn drop_axis(r: &[f64], axis: usize) -> Point2 {
    let mut out = [0.0; 2];
    let mut j = 0;
    for (i, &v) in r.iter().enumerate().take(3) {
        if i != axis {
            out[j] = v;
            j += 1;
        }
    }
    out
}
