//! Marching squares with bisection refinement.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Rectangle [x0, x1] x [y0, y1] sampled on an n x n node lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImplicitGrid {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub n: usize,
}

impl ImplicitGrid {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64, n: usize) -> Result<Self> {
        if n < 16 {
            return Err(Error::Domain(format!("grid resolution {n} below 16")));
        }
        if !(x1 > x0 && y1 > y0) {
            return Err(Error::Domain("empty grid rectangle".into()));
        }
        Ok(Self { x0, x1, y0, y1, n })
    }

    pub fn dx(&self) -> f64 {
        (self.x1 - self.x0) / (self.n - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y1 - self.y0) / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x0 + i as f64 * self.dx(), self.y0 + j as f64 * self.dy())
    }
}

/// Polyline of refined zero-set vertices in grid coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
}

/// Node values; NaN marks points where the condition is undefined.
pub fn sample_grid<F: Fn(f64, f64) -> f64 + Sync>(grid: &ImplicitGrid, f: &F) -> Vec<f64> {
    let n = grid.n;
    (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (x, y) = grid.node(idx % n, idx / n);
            let v = f(x, y);
            if v.is_finite() { v } else { f64::NAN }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum EdgeId {
    /// between (i, j) and (i + 1, j)
    H(usize, usize),
    /// between (i, j) and (i, j + 1)
    V(usize, usize),
}

fn refine<F: Fn(f64, f64) -> f64>(f: &F, a: (f64, f64), b: (f64, f64), fa: f64, fb: f64, tol: f64) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let (mut flo, mut fhi) = (fa, fb);
    let at = |s: f64| (a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1));
    let accept = tol.max(1e-9 * (fa.abs() + fb.abs()));
    let mut best = if fa.abs() < fb.abs() { (0.0, fa) } else { (1.0, fb) };
    for it in 0..200 {
        // Illinois-style false position, falling back to bisection every third step
        let s = if it % 3 == 2 || flo == fhi { 0.5 * (lo + hi) } else { (lo * fhi - hi * flo) / (fhi - flo) };
        let s = if s > lo && s < hi { s } else { 0.5 * (lo + hi) };
        let (x, y) = at(s);
        let v = f(x, y);
        if !v.is_finite() {
            return None;
        }
        if v.abs() < best.1.abs() {
            best = (s, v);
        }
        if v.abs() < tol {
            return Some((x, y));
        }
        if (v < 0.0) == (flo < 0.0) {
            lo = s;
            flo = v;
        } else {
            hi = s;
            fhi = v;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    if best.1.abs() < accept {
        Some(at(best.0))
    } else {
        // a sign change without a zero: a jump of the condition function
        None
    }
}

/// Zero set of f on the grid as polylines, ordered lexicographically by first vertex.
///
/// Crossing edges whose bisection ends on a jump rather than a zero are
/// dropped together with the segments touching them.
pub fn trace_zero_set<F: Fn(f64, f64) -> f64 + Sync>(grid: &ImplicitGrid, f: &F, tol: f64) -> Vec<Polyline> {
    let n = grid.n;
    let vals = sample_grid(grid, f);
    let val = |i: usize, j: usize| vals[j * n + i];
    let crosses = |a: f64, b: f64| a.is_finite() && b.is_finite() && ((a < 0.0) != (b < 0.0));

    let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();
    for j in 0..n - 1 {
        for i in 0..n - 1 {
            let c = [val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)];
            if c.iter().any(|v| !v.is_finite()) {
                continue;
            }
            // edges in cyclic order: bottom, right, top, left
            let edges = [EdgeId::H(i, j), EdgeId::V(i + 1, j), EdgeId::H(i, j + 1), EdgeId::V(i, j)];
            let hits: Vec<usize> = (0..4).filter(|&e| crosses(c[e], c[(e + 1) % 4])).collect();
            match hits.len() {
                2 => segments.push((edges[hits[0]], edges[hits[1]])),
                4 => {
                    let (cx, cy) = grid.node(i, j);
                    let centre = f(cx + 0.5 * grid.dx(), cy + 0.5 * grid.dy());
                    // pair each edge with the neighbour that shares the centre's sign region
                    if (centre < 0.0) == (c[0] < 0.0) {
                        segments.push((edges[0], edges[1]));
                        segments.push((edges[2], edges[3]));
                    } else {
                        segments.push((edges[0], edges[3]));
                        segments.push((edges[1], edges[2]));
                    }
                }
                _ => {}
            }
        }
    }

    let mut ids: Vec<EdgeId> = segments.iter().flat_map(|&(a, b)| [a, b]).collect();
    ids.sort();
    ids.dedup();
    let refined: Vec<Option<(f64, f64)>> = ids
        .par_iter()
        .map(|id| {
            let (a, b, fa, fb) = match *id {
                EdgeId::H(i, j) => (grid.node(i, j), grid.node(i + 1, j), val(i, j), val(i + 1, j)),
                EdgeId::V(i, j) => (grid.node(i, j), grid.node(i, j + 1), val(i, j), val(i, j + 1)),
            };
            refine(f, a, b, fa, fb, tol)
        })
        .collect();
    let point: HashMap<EdgeId, (f64, f64)> =
        ids.iter().zip(&refined).filter_map(|(id, p)| p.map(|p| (*id, p))).collect();

    let mut adj: HashMap<EdgeId, Vec<EdgeId>> = HashMap::new();
    for &(a, b) in &segments {
        if point.contains_key(&a) && point.contains_key(&b) {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
    }
    let mut keys: Vec<EdgeId> = adj.keys().copied().collect();
    keys.sort();
    let mut used: HashMap<EdgeId, bool> = HashMap::new();
    let mut lines = Vec::new();
    // open chains start at degree-1 vertices, then the remaining cycles
    for pass in 0..2 {
        for &start in &keys {
            if used.contains_key(&start) || (pass == 0 && adj[&start].len() != 1) {
                continue;
            }
            let mut chain = vec![start];
            used.insert(start, true);
            let mut cur = start;
            let closed;
            loop {
                let next = adj[&cur].iter().copied().find(|nb| !used.contains_key(nb));
                match next {
                    Some(nb) => {
                        used.insert(nb, true);
                        chain.push(nb);
                        cur = nb;
                    }
                    None => {
                        closed = pass == 1 && chain.len() > 2 && adj[&cur].contains(&start);
                        break;
                    }
                }
            }
            let pts: Vec<(f64, f64)> = chain.iter().map(|id| point[id]).collect();
            lines.push(canonical(pts, closed));
        }
    }
    lines.sort_by(|a, b| a.points[0].partial_cmp(&b.points[0]).unwrap());
    lines
}

/// Deterministic orientation: open chains start at the smaller endpoint,
/// cycles at their smallest vertex heading toward the smaller neighbour.
fn canonical(mut pts: Vec<(f64, f64)>, closed: bool) -> Polyline {
    let lt = |a: &(f64, f64), b: &(f64, f64)| a.partial_cmp(b) == Some(std::cmp::Ordering::Less);
    if closed {
        let m = (0..pts.len()).min_by(|&a, &b| pts[a].partial_cmp(&pts[b]).unwrap()).unwrap();
        pts.rotate_left(m);
        let len = pts.len();
        if len > 2 && lt(&pts[len - 1], &pts[1]) {
            pts[1..].reverse();
        }
    } else if pts.len() > 1 && lt(&pts[pts.len() - 1], &pts[0]) {
        pts.reverse();
    }
    Polyline { points: pts, closed }
}

/// Drops vertices closer than `min_gap` (in cell units) to the previously kept vertex.
pub fn thin_polyline(line: &Polyline, grid: &ImplicitGrid, min_gap: f64) -> Polyline {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(line.points.len());
    for &p in &line.points {
        if let Some(&q) = out.last() {
            let d = (((p.0 - q.0) / grid.dx()).powi(2) + ((p.1 - q.1) / grid.dy()).powi(2)).sqrt();
            if d < min_gap {
                continue;
            }
        }
        out.push(p);
    }
    if line.closed && out.len() > 2 {
        let (p, q) = (out[out.len() - 1], out[0]);
        let d = (((p.0 - q.0) / grid.dx()).powi(2) + ((p.1 - q.1) / grid.dy()).powi(2)).sqrt();
        if d < min_gap {
            out.pop();
        }
    }
    Polyline { points: out, closed: line.closed }
}

/// Inserts a midpoint between consecutive vertices, projected back onto the zero
/// set along the local normal, `levels` times. Midpoints whose normal segment
/// holds no zero (or only a jump) are left out.
pub fn densify<F: Fn(f64, f64) -> f64 + Sync>(line: &Polyline, grid: &ImplicitGrid, f: &F, levels: usize, tol: f64) -> Polyline {
    let (sx, sy) = (grid.dx(), grid.dy());
    let mut pts = line.points.clone();
    for _ in 0..levels {
        let n = pts.len();
        let pairs = if line.closed { n } else { n.saturating_sub(1) };
        let mids: Vec<Option<(f64, f64)>> = (0..pairs)
            .into_par_iter()
            .map(|i| {
                let a = pts[i];
                let b = pts[(i + 1) % n];
                // work in cell units so the normal is isotropic
                let (ux, uy) = ((b.0 - a.0) / sx, (b.1 - a.1) / sy);
                let len = ux.hypot(uy);
                if len == 0.0 {
                    return None;
                }
                let m = (0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1));
                let half = 0.5 * len;
                let (nx, ny) = (-uy / len * half * sx, ux / len * half * sy);
                let p = (m.0 - nx, m.1 - ny);
                let q = (m.0 + nx, m.1 + ny);
                let (fp, fq) = (f(p.0, p.1), f(q.0, q.1));
                if !(fp.is_finite() && fq.is_finite()) || (fp < 0.0) == (fq < 0.0) {
                    return None;
                }
                refine(f, p, q, fp, fq, tol)
            })
            .collect();
        let mut out = Vec::with_capacity(n + pairs);
        for i in 0..n {
            out.push(pts[i]);
            if i < pairs {
                if let Some(m) = mids[i] {
                    out.push(m);
                }
            }
        }
        pts = out;
    }
    Polyline { points: pts, closed: line.closed }
}

/// Extra densification of the first and last `segments` segments of an open
/// line, where traces stop at the edge of the admissible domain and tangents
/// come from one-sided stencils.
pub fn densify_ends<F: Fn(f64, f64) -> f64 + Sync>(
    line: &Polyline,
    grid: &ImplicitGrid,
    f: &F,
    segments: usize,
    levels: usize,
    tol: f64,
) -> Polyline {
    let n = line.points.len();
    if line.closed || n < 2 * segments + 2 {
        return line.clone();
    }
    let part = |pts: &[(f64, f64)]| densify(&Polyline { points: pts.to_vec(), closed: false }, grid, f, levels, tol).points;
    let head = part(&line.points[..=segments]);
    let tail = part(&line.points[n - 1 - segments..]);
    let mut points = head;
    points.extend_from_slice(&line.points[segments + 1..n - 1 - segments]);
    points.extend(tail);
    Polyline { points, closed: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_circle() {
        let g = ImplicitGrid::new(-2.0, 2.0, -2.0, 2.0, 64).unwrap();
        let lines = trace_zero_set(&g, &|x, y| x * x + y * y - 1.0, 1e-12);
        assert_eq!(lines.len(), 1);
        assert!(lines[0].closed);
        let diag = g.dx().hypot(g.dy());
        for &(x, y) in &lines[0].points {
            assert!((x.hypot(y) - 1.0).abs() < diag);
        }
    }

    #[test]
    fn horizontal_axis() {
        let g = ImplicitGrid::new(-1.0, 1.0, -1.3, 0.9, 33).unwrap();
        let lines = trace_zero_set(&g, &|_, y| y, 1e-12);
        assert_eq!(lines.len(), 1);
        assert!(!lines[0].closed);
        assert!(lines[0].points.iter().all(|p| p.1.abs() < 1e-12));
        assert!(lines[0].points[0].0 < lines[0].points[1].0);
    }

    #[test]
    fn jump_is_not_a_zero() {
        let g = ImplicitGrid::new(-1.0, 1.0, -1.0, 1.0, 16).unwrap();
        let lines = trace_zero_set(&g, &|x, _| if x < 0.03 { -1.0 } else { 1.0 }, 1e-10);
        assert!(lines.is_empty());
    }

    #[test]
    fn densified_circle_stays_on_circle() {
        let g = ImplicitGrid::new(-2.0, 2.0, -2.0, 2.0, 32).unwrap();
        let f = |x: f64, y: f64| x * x + y * y - 1.0;
        let line = &trace_zero_set(&g, &f, 1e-13)[0];
        let dense = densify(line, &g, &f, 2, 1e-13);
        assert!(dense.points.len() > 3 * line.points.len());
        assert!(dense.points.iter().all(|&(x, y)| (x.hypot(y) - 1.0).abs() < 1e-12));
    }

    #[test]
    fn small_grid_rejected() {
        assert!(ImplicitGrid::new(0.0, 1.0, 0.0, 1.0, 8).is_err());
    }
}
