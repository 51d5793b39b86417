//! Down-closed convex regions in rate space, stored with both a facet
//! description and a boundary complex so they can be clipped exactly.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::hull3d::{convex_hull_3d, cross3, dot3, norm3, sub, P3};
use crate::polytope::{convex_hull_2d, dedup_points, Point2};

/// `normal · x <= offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Halfspace {
    pub normal: P3,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: P3, offset: f64) -> Self {
        Halfspace { normal, offset }
    }

    /// `x_axis >= c`
    pub fn at_least(axis: usize, c: f64) -> Self {
        let mut n = [0.0; 3];
        n[axis] = -1.0;
        Halfspace { normal: n, offset: -c }
    }

    /// `x_axis <= c`
    pub fn at_most(axis: usize, c: f64) -> Self {
        let mut n = [0.0; 3];
        n[axis] = 1.0;
        Halfspace { normal: n, offset: c }
    }

    pub fn value(&self, x: P3) -> f64 {
        dot3(self.normal, x) - self.offset
    }

    fn holds(&self, x: P3, tol: f64) -> bool {
        self.value(x) <= tol * (1.0 + self.offset.abs())
    }

    /// Constraints bounding rates from above (some positive coefficient).
    pub fn is_upper(&self) -> bool {
        self.normal.iter().any(|&v| v > 1e-12)
    }
}

/// Two-dimensional views of rate space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum View {
    /// `r1` against `r2 + r3`
    R1VsR23,
    /// `r1 + r2` against `r3`
    R12VsR3,
    R1R2,
    R1R3,
    R2R3,
}

impl View {
    pub const ALL: [View; 5] = [View::R1VsR23, View::R12VsR3, View::R1R2, View::R1R3, View::R2R3];

    pub fn name(self) -> &'static str {
        match self {
            View::R1VsR23 => "r1-vs-r23",
            View::R12VsR3 => "r12-vs-r3",
            View::R1R2 => "r1-r2",
            View::R1R3 => "r1-r3",
            View::R2R3 => "r2-r3",
        }
    }

    pub fn axis_names(self) -> [&'static str; 2] {
        match self {
            View::R1VsR23 => ["r1", "r2_plus_r3"],
            View::R12VsR3 => ["r1_plus_r2", "r3"],
            View::R1R2 => ["r1", "r2"],
            View::R1R3 => ["r1", "r3"],
            View::R2R3 => ["r2", "r3"],
        }
    }

    pub fn map(self) -> [P3; 2] {
        match self {
            View::R1VsR23 => [[1.0, 0.0, 0.0], [0.0, 1.0, 1.0]],
            View::R12VsR3 => [[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            View::R1R2 => [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            View::R1R3 => [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]],
            View::R2R3 => [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    pub fn apply(self, r: P3) -> Point2 {
        let m = self.map();
        [dot3(m[0], r), dot3(m[1], r)]
    }
}

impl fmt::Display for View {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for View {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        View::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Param(format!("unknown view {s}")))
    }
}

pub fn axis_name(axis: usize) -> &'static str {
    ["r1", "r2", "r3"][axis]
}

pub fn parse_axis(s: &str) -> Result<usize> {
    match s {
        "r1" => Ok(0),
        "r2" => Ok(1),
        "r3" => Ok(2),
        _ => Err(Error::Param(format!("unknown axis {s}"))),
    }
}

/// The down-closure of the convex hull of a set of nonnegative rate points,
/// optionally cut by extra halfspaces.
#[derive(Debug, Clone)]
pub struct Region3 {
    scale: f64,
    // boundary complex of the uncut down-closed hull
    points: Vec<P3>,
    edges: Vec<(usize, usize)>,
    triangles: Vec<[usize; 3]>,
    hull: Vec<Halfspace>,
    cuts: Vec<Halfspace>,
    vertices: Vec<P3>,
}

const REL_TOL: f64 = 1e-9;

impl Region3 {
    pub fn down_closed_hull(points: &[P3]) -> Result<Self> {
        Self::with_cuts(points, &[])
    }

    pub fn with_cuts(points: &[P3], cuts: &[Halfspace]) -> Result<Self> {
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("rate point"));
        }
        if cuts.iter().any(|h| !h.offset.is_finite() || h.normal.iter().any(|x| !x.is_finite())) {
            return Err(Error::NonFinite("halfspace"));
        }
        let pts: Vec<P3> = points.iter().map(|p| p.map(|x| x.max(0.0))).collect();
        let mut axis_max = [0.0f64; 3];
        for p in &pts {
            for k in 0..3 {
                axis_max[k] = axis_max[k].max(p[k]);
            }
        }
        let scale = axis_max.iter().fold(0.0f64, |m, &x| m.max(x));
        let active: Vec<usize> = (0..3).filter(|&k| axis_max[k] > 1e-12 * scale.max(1e-300)).collect();

        let mut region = match active.len() {
            3 => Self::full(&pts, axis_max)?,
            2 => Self::planar(&pts, axis_max, [active[0], active[1]])?,
            1 => Self::segment(active[0], axis_max[active[0]]),
            _ => Self::segment(0, 0.0),
        };
        region.scale = scale.max(1.0);
        region.cuts = cuts.to_vec();
        region.vertices = region.clip(cuts);
        Ok(region)
    }

    fn full(pts: &[P3], axis_max: [f64; 3]) -> Result<Self> {
        let mut aug: Vec<P3> = vec![[0.0; 3]];
        for k in 0..3 {
            let mut e = [0.0; 3];
            e[k] = axis_max[k];
            aug.push(e);
        }
        // projections onto each coordinate plane, reduced to their planar hull
        for k in 0..3 {
            let (i, j) = [(1, 2), (0, 2), (0, 1)][k];
            let mut flat: Vec<Point2> = pts.iter().map(|p| [p[i], p[j]]).collect();
            flat.push([0.0, 0.0]);
            flat.push([axis_max[i], 0.0]);
            flat.push([0.0, axis_max[j]]);
            for q in convex_hull_2d(&flat)? {
                let mut r = [0.0; 3];
                r[i] = q[0];
                r[j] = q[1];
                aug.push(r);
            }
        }
        aug.extend_from_slice(pts);
        let hull = convex_hull_3d(&aug)?;
        let idx = hull.vertex_indices();
        let mut remap = vec![usize::MAX; aug.len()];
        for (n, &i) in idx.iter().enumerate() {
            remap[i] = n;
        }
        let points: Vec<P3> = idx.iter().map(|&i| aug[i]).collect();
        let triangles: Vec<[usize; 3]> = hull.facets.iter().map(|f| f.v.map(|i| remap[i])).collect();
        let edges = hull.edges().into_iter().map(|(a, b)| (remap[a], remap[b])).collect();
        let halfspaces = hull.facets.iter().map(|f| Halfspace::new(f.normal, f.offset)).collect();
        Ok(Region3 {
            scale: 1.0,
            points,
            edges,
            triangles,
            hull: halfspaces,
            cuts: vec![],
            vertices: vec![],
        })
    }

    fn planar(pts: &[P3], axis_max: [f64; 3], axes: [usize; 2]) -> Result<Self> {
        let [i, j] = axes;
        let off = 3 - i - j;
        let mut flat: Vec<Point2> = pts.iter().map(|p| [p[i], p[j]]).collect();
        flat.push([0.0, 0.0]);
        flat.push([axis_max[i], 0.0]);
        flat.push([0.0, axis_max[j]]);
        let poly = convex_hull_2d(&flat)?;
        let lift = |q: Point2| {
            let mut r = [0.0; 3];
            r[i] = q[0];
            r[j] = q[1];
            r
        };
        let points: Vec<P3> = poly.iter().map(|&q| lift(q)).collect();
        let n = points.len();
        let edges = (0..n).map(|k| (k, (k + 1) % n)).collect();
        let triangles = (1..n.saturating_sub(1)).map(|k| [0, k, k + 1]).collect();
        let mut hull: Vec<Halfspace> = (0..n)
            .map(|k| {
                let a = poly[k];
                let b = poly[(k + 1) % n];
                let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
                let len = (dx * dx + dy * dy).sqrt();
                let nrm = lift([dy / len, -dx / len]);
                Halfspace::new(nrm, dot3(nrm, lift(a)))
            })
            .collect();
        hull.push(Halfspace::at_most(off, 0.0));
        hull.push(Halfspace::at_least(off, 0.0));
        Ok(Region3 { scale: 1.0, points, edges, triangles, hull, cuts: vec![], vertices: vec![] })
    }

    fn segment(axis: usize, len: f64) -> Self {
        let mut end = [0.0; 3];
        end[axis] = len;
        let mut hull = vec![Halfspace::at_most(axis, len), Halfspace::at_least(axis, 0.0)];
        for k in (0..3).filter(|&k| k != axis) {
            hull.push(Halfspace::at_most(k, 0.0));
            hull.push(Halfspace::at_least(k, 0.0));
        }
        let (points, edges) = if len > 0.0 { (vec![[0.0; 3], end], vec![(0, 1)]) } else { (vec![[0.0; 3]], vec![]) };
        Region3 { scale: 1.0, points, edges, triangles: vec![], hull, cuts: vec![], vertices: vec![] }
    }

    fn tol(&self) -> f64 {
        REL_TOL * self.scale
    }

    /// Vertices of the uncut region intersected with `extra`.
    fn clip(&self, extra: &[Halfspace]) -> Vec<P3> {
        let tol = self.tol();
        let inside_all = |x: P3| {
            self.hull.iter().all(|h| h.value(x) <= tol) && extra.iter().all(|h| h.holds(x, tol))
        };
        let mut cand: Vec<P3> = self.points.clone();
        for h in extra {
            for &(a, b) in &self.edges {
                let (pa, pb) = (self.points[a], self.points[b]);
                let (va, vb) = (h.value(pa), h.value(pb));
                if (va < 0.0 && vb > 0.0) || (va > 0.0 && vb < 0.0) {
                    let t = va / (va - vb);
                    cand.push([0, 1, 2].map(|k| pa[k] + t * (pb[k] - pa[k])));
                }
            }
        }
        for (x, h1) in extra.iter().enumerate() {
            for h2 in &extra[x + 1..] {
                for t in &self.triangles {
                    let [a, b, c] = t.map(|i| self.points[i]);
                    let n = cross3(sub(b, a), sub(c, a));
                    if norm3(n) == 0.0 {
                        continue;
                    }
                    let Some(p) = solve3([n, h1.normal, h2.normal], [dot3(n, a), h1.offset, h2.offset]) else {
                        continue;
                    };
                    if in_triangle(p, a, b, c, n, tol) {
                        cand.push(p);
                    }
                }
            }
        }
        for x in 0..extra.len() {
            for y in x + 1..extra.len() {
                for z in y + 1..extra.len() {
                    let (h1, h2, h3) = (extra[x], extra[y], extra[z]);
                    if let Some(p) =
                        solve3([h1.normal, h2.normal, h3.normal], [h1.offset, h2.offset, h3.offset])
                    {
                        cand.push(p);
                    }
                }
            }
        }
        let kept: Vec<Vec<f64>> = cand
            .into_iter()
            .filter(|&p| inside_all(p))
            .map(|p| p.iter().map(|&v| if v.abs() < tol { 0.0 } else { v }).collect())
            .collect();
        dedup_points(kept, tol)
            .into_iter()
            .map(|v| [v[0], v[1], v[2]])
            .filter(|&p| self.is_extreme(p, extra, tol))
            .collect()
    }

    /// True when the constraints tight at `p` pin it down in all three axes.
    fn is_extreme(&self, p: P3, extra: &[Halfspace], tol: f64) -> bool {
        let tight: Vec<P3> = self
            .hull
            .iter()
            .chain(extra)
            .filter(|h| h.value(p).abs() <= tol)
            .map(|h| h.normal)
            .collect();
        for x in 0..tight.len() {
            for y in x + 1..tight.len() {
                let c = cross3(tight[x], tight[y]);
                if norm3(c) < 1e-9 {
                    continue;
                }
                if tight[y + 1..].iter().any(|&n| dot3(c, n).abs() > 1e-9) {
                    return true;
                }
            }
        }
        false
    }

    /// Extreme points of the region (after cuts).
    pub fn vertices(&self) -> &[P3] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Facets of the uncut hull followed by the cuts.
    pub fn halfspaces(&self) -> impl Iterator<Item = &Halfspace> {
        self.hull.iter().chain(&self.cuts)
    }

    pub fn contains(&self, x: P3, tol: f64) -> bool {
        x.iter().all(|&v| v >= -tol)
            && self.hull.iter().all(|h| h.value(x) <= tol)
            && self.cuts.iter().all(|h| h.holds(x, tol))
    }

    /// Distance from `x` to the nearest upper face plane; negative when `x`
    /// violates an upper face.
    pub fn boundary_gap(&self, x: P3) -> f64 {
        self.halfspaces()
            .filter(|h| h.is_upper())
            .map(|h| -h.value(x) / norm3(h.normal))
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest value of `dir · x` over the region.
    pub fn support(&self, dir: P3) -> f64 {
        self.vertices.iter().map(|&v| dot3(dir, v)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Closed ccw hull of the region under a 2D view.
    pub fn view(&self, view: View) -> Vec<Point2> {
        let pts: Vec<Point2> = self.vertices.iter().map(|&v| view.apply(v)).collect();
        if pts.is_empty() {
            return vec![];
        }
        convex_hull_2d(&pts).unwrap_or_default()
    }

    /// The part with `x_axis >= c`, seen in the remaining two coordinates.
    pub fn slice(&self, axis: usize, c: f64) -> Result<Vec<Point2>> {
        if axis >= 3 {
            return Err(Error::Param(format!("axis {axis} out of range")));
        }
        if !(c >= 0.0) {
            return Err(Error::Param(format!("slice value {c} must be nonnegative")));
        }
        let mut extra = self.cuts.clone();
        extra.push(Halfspace::at_least(axis, c));
        let verts = self.clip(&extra);
        if verts.is_empty() {
            return Ok(vec![]);
        }
        let pts: Vec<Point2> = verts.iter().map(|v| crate::polytope::drop_axis(v, axis)).collect();
        convex_hull_2d(&pts)
    }
}

fn solve3(rows: [P3; 3], rhs: [f64; 3]) -> Option<P3> {
    let m = Matrix3::from_rows(&rows.map(|r| Vector3::from(r).transpose()));
    let scale = rows.iter().map(|&r| norm3(r)).product::<f64>();
    let det = m.determinant();
    if scale == 0.0 || det.abs() <= 1e-12 * scale {
        return None;
    }
    let x = m.lu().solve(&Vector3::from(rhs))?;
    Some([x[0], x[1], x[2]])
}

fn in_triangle(p: P3, a: P3, b: P3, c: P3, n: P3, tol: f64) -> bool {
    let nn = norm3(n);
    [(a, b), (b, c), (c, a)]
        .iter()
        .all(|&(u, v)| dot3(cross3(sub(v, u), sub(p, u)), n) / nn >= -tol * norm3(sub(v, u)).max(1.0))
}
