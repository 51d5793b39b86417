//! Quickhull in three dimensions.

use std::collections::HashMap;

use crate::error::{Error, Result};

pub type P3 = [f64; 3];

pub fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn dot3(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross3(a: P3, b: P3) -> P3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn norm3(a: P3) -> f64 {
    dot3(a, a).sqrt()
}

/// Triangle with outward unit normal; inside is `normal · x <= offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Facet {
    pub v: [usize; 3],
    pub normal: P3,
    pub offset: f64,
}

#[derive(Debug, Clone)]
pub struct Hull3 {
    pub points: Vec<P3>,
    pub facets: Vec<Facet>,
}

impl Hull3 {
    /// Indices of points referenced by some facet, sorted.
    pub fn vertex_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.facets.iter().flat_map(|f| f.v).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Undirected edges of the triangulated boundary.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .facets
            .iter()
            .flat_map(|f| [(f.v[0], f.v[1]), (f.v[1], f.v[2]), (f.v[2], f.v[0])])
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    pub fn contains(&self, x: P3, tol: f64) -> bool {
        self.facets.iter().all(|f| dot3(f.normal, x) <= f.offset + tol)
    }
}

struct Work {
    facet: Facet,
    alive: bool,
    outside: Vec<usize>,
}

fn make_facet(pts: &[P3], v: [usize; 3]) -> Facet {
    let n = cross3(sub(pts[v[1]], pts[v[0]]), sub(pts[v[2]], pts[v[0]]));
    let len = norm3(n);
    let normal = if len > 0.0 { [n[0] / len, n[1] / len, n[2] / len] } else { [0.0; 3] };
    Facet { v, normal, offset: dot3(normal, pts[v[0]]) }
}

fn dist(f: &Facet, p: P3) -> f64 {
    dot3(f.normal, p) - f.offset
}

/// Convex hull of a full-dimensional point set. Points within `eps` of the
/// current hull are treated as inside. Lower-dimensional input is an error.
pub fn convex_hull_3d(points: &[P3]) -> Result<Hull3> {
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("hull point"));
    }
    if points.len() < 4 {
        return Err(Error::Param("3d hull needs at least four points".into()));
    }
    let pts = points.to_vec();
    let scale = pts.iter().flatten().fold(1e-300f64, |m, x| m.max(x.abs()));
    let eps = 1e-11 * scale;

    // initial tetrahedron from extreme points
    let mut ext = [0usize; 6];
    for (i, p) in pts.iter().enumerate() {
        for k in 0..3 {
            if p[k] < pts[ext[2 * k]][k] {
                ext[2 * k] = i;
            }
            if p[k] > pts[ext[2 * k + 1]][k] {
                ext[2 * k + 1] = i;
            }
        }
    }
    let (mut i0, mut i1, mut best) = (0, 0, -1.0);
    for &a in &ext {
        for &b in &ext {
            let d = norm3(sub(pts[a], pts[b]));
            if d > best {
                best = d;
                i0 = a;
                i1 = b;
            }
        }
    }
    if best <= eps {
        return Err(Error::Param("degenerate point set (all points coincide)".into()));
    }
    let dir = sub(pts[i1], pts[i0]);
    let (mut i2, mut best) = (0, -1.0);
    for (i, p) in pts.iter().enumerate() {
        let d = norm3(cross3(dir, sub(*p, pts[i0]))) / norm3(dir);
        if d > best {
            best = d;
            i2 = i;
        }
    }
    if best <= eps {
        return Err(Error::Param("degenerate point set (collinear)".into()));
    }
    let base = make_facet(&pts, [i0, i1, i2]);
    let (mut i3, mut best) = (0, -1.0);
    for (i, p) in pts.iter().enumerate() {
        let d = dist(&base, *p).abs();
        if d > best {
            best = d;
            i3 = i;
        }
    }
    if best <= eps {
        return Err(Error::Param("degenerate point set (coplanar)".into()));
    }

    let mut work: Vec<Work> = Vec::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    let add = |work: &mut Vec<Work>, edges: &mut HashMap<(usize, usize), usize>, v: [usize; 3]| {
        let id = work.len();
        work.push(Work { facet: make_facet(&pts, v), alive: true, outside: Vec::new() });
        edges.insert((v[0], v[1]), id);
        edges.insert((v[1], v[2]), id);
        edges.insert((v[2], v[0]), id);
        id
    };
    let tet = if dist(&base, pts[i3]) > 0.0 {
        [[i0, i2, i1], [i0, i1, i3], [i1, i2, i3], [i2, i0, i3]]
    } else {
        [[i0, i1, i2], [i0, i3, i1], [i1, i3, i2], [i2, i3, i0]]
    };
    for v in tet {
        add(&mut work, &mut edges, v);
    }

    let used = [i0, i1, i2, i3];
    for (i, p) in pts.iter().enumerate() {
        if used.contains(&i) {
            continue;
        }
        if let Some(f) = (0..4).find(|&f| dist(&work[f].facet, *p) > eps) {
            work[f].outside.push(i);
        }
    }

    let mut stack: Vec<usize> = (0..4).collect();
    while let Some(fid) = stack.pop() {
        if !work[fid].alive || work[fid].outside.is_empty() {
            continue;
        }
        let apex = *work[fid]
            .outside
            .iter()
            .max_by(|&&a, &&b| dist(&work[fid].facet, pts[a]).total_cmp(&dist(&work[fid].facet, pts[b])))
            .unwrap();
        let ap = pts[apex];

        // visible set by flood fill from fid
        let mut visible = vec![fid];
        let mut is_visible: HashMap<usize, bool> = HashMap::new();
        is_visible.insert(fid, true);
        let mut k = 0;
        while k < visible.len() {
            let f = visible[k];
            k += 1;
            let v = work[f].facet.v;
            for e in [(v[1], v[0]), (v[2], v[1]), (v[0], v[2])] {
                let Some(&g) = edges.get(&e) else { continue };
                if is_visible.contains_key(&g) {
                    continue;
                }
                let vis = dist(&work[g].facet, ap) > eps;
                is_visible.insert(g, vis);
                if vis {
                    visible.push(g);
                }
            }
        }

        let mut horizon = Vec::new();
        for &f in &visible {
            let v = work[f].facet.v;
            for (a, b) in [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])] {
                let across = edges.get(&(b, a)).copied();
                if across.map_or(true, |g| !is_visible[&g]) {
                    horizon.push((a, b));
                }
            }
        }

        let mut orphans = Vec::new();
        for &f in &visible {
            work[f].alive = false;
            let v = work[f].facet.v;
            for e in [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])] {
                if edges.get(&e) == Some(&f) {
                    edges.remove(&e);
                }
            }
            orphans.append(&mut work[f].outside);
        }

        let mut fresh = Vec::with_capacity(horizon.len());
        for (a, b) in horizon {
            fresh.push(add(&mut work, &mut edges, [a, b, apex]));
        }
        for p in orphans {
            if p == apex {
                continue;
            }
            if let Some(&f) = fresh.iter().find(|&&f| dist(&work[f].facet, pts[p]) > eps) {
                work[f].outside.push(p);
            }
        }
        stack.extend(fresh);
    }

    let facets = work.into_iter().filter(|w| w.alive).map(|w| w.facet).collect();
    Ok(Hull3 { points: pts, facets })
}
