//! Chess-board colorings of ℝX ∖ (ℝC ∪ ℝD₁) on a cell grid of the chart.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::algebra::linalg::{dot4, normalize4, proj_dist, sym_eigen, Matrix};
use crate::error::{invalid, Error, Result};
use crate::quadric::{plane_basis, Chart, Quadric, QuadricKind, RealLine};

/// A real plane section D split as D = 2D₀ + D₁. On the cone a tangent
/// plane cuts a double generator (D₀ = L, D₁ = 0); otherwise D₁ = D.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneSection {
    /// Unit plane coefficients in normalized coordinates.
    pub plane: [f64; 4],
    /// Real points of D₁ as closed polylines of unit vectors (normalized
    /// coordinates).
    pub d1: Vec<Vec<[f64; 4]>>,
    /// The line of D₀ in normalized coordinates.
    pub d0: Option<RealLine>,
}

impl PlaneSection {
    pub fn new(q: &Quadric, plane: &[f64; 4], samples: usize) -> Result<Self> {
        let plane = normalize4(plane);
        let basis = plane_basis(&plane)?;
        let diag = q.kind.normal_diagonal();
        let mut a = Matrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                a[(i, j)] = (0..4).map(|k| basis[i][k] * diag[k] * basis[j][k]).sum();
            }
        }
        let (vals, vecs) = sym_eigen(&a);
        let lmax = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let zero: Vec<usize> = (0..3).filter(|&i| vals[i].abs() <= 1e-10 * lmax).collect();
        if zero.len() == 2 {
            let embed = |k: usize| {
                let mut y = [0.0; 4];
                for (i, b) in basis.iter().enumerate() {
                    for m in 0..4 {
                        y[m] += vecs[(i, k)] * b[m];
                    }
                }
                y
            };
            let line = RealLine::new(embed(zero[0]), embed(zero[1]));
            return Ok(PlaneSection { plane, d1: Vec::new(), d0: Some(line) });
        }
        let mut original = [0.0; 4];
        for j in 0..4 {
            original[j] = (0..4).map(|i| plane[i] * q.normalizer[i][j]).sum();
        }
        let d1 = q
            .plane_section(&original, samples)?
            .into_iter()
            .map(|poly| poly.iter().map(|x| normalize4(&q.to_normalized(x))).collect())
            .collect();
        Ok(PlaneSection { plane, d1, d0: None })
    }

    /// λ(y) for the plane.
    pub fn value(&self, y: &[f64; 4]) -> f64 {
        dot4(&self.plane, y)
    }

    /// Whether the plane passes through the apex of the cone.
    pub fn through_apex(&self, kind: QuadricKind) -> bool {
        kind == QuadricKind::Cone && self.plane[3].abs() < 1e-9
    }

    /// The chess-board coloring of ℝX ∖ (ℝC ∪ ℝD₁) for a traced locus.
    pub fn coloring(&self, loops: &[Vec<[f64; 4]>], kind: QuadricKind, resolution: usize) -> Result<Coloring> {
        let mut arcs = loops.to_vec();
        arcs.extend(self.d1.iter().cloned());
        chessboard_coloring(kind, &arcs, &ColoringOptions { resolution, apex_flip: self.through_apex(kind) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringOptions {
    /// Grid cells per π.
    pub resolution: usize,
    /// On the cone: whether the colors swap through the apex, which happens
    /// when D passes through it (the sign of K·λ changes there along every
    /// generator).
    pub apex_flip: bool,
}

impl Default for ColoringOptions {
    fn default() -> Self {
        ColoringOptions { resolution: 180, apex_flip: false }
    }
}

/// Cell grid of the chart domain with a region decomposition and a
/// 2-coloring of the regions.
#[derive(Debug, Clone, PartialEq)]
pub struct Coloring {
    pub kind: QuadricKind,
    pub nu: usize,
    pub nv: usize,
    v0: f64,
    hu: f64,
    hv: f64,
    /// Region id of each cell, index i + nu·j.
    pub region: Vec<u32>,
    /// Color of each region.
    pub color: Vec<bool>,
    /// Dual edges examined, and those crossed by an arc.
    pub edges: usize,
    pub crossed_edges: usize,
}

impl Coloring {
    pub fn n_regions(&self) -> usize {
        self.color.len()
    }

    pub fn cell_size(&self) -> (f64, f64) {
        (self.hu, self.hv)
    }

    pub fn cell_at(&self, u: f64, v: f64) -> usize {
        let i = ((wrap_2pi(u) / self.hu) as usize).min(self.nu - 1);
        let v = if self.kind == QuadricKind::Hyperboloid { wrap_2pi(v) } else { v };
        let j = (((v - self.v0) / self.hv).max(0.0) as usize).min(self.nv - 1);
        i + self.nu * j
    }

    pub fn color_at(&self, u: f64, v: f64) -> bool {
        self.color[self.region[self.cell_at(u, v)] as usize]
    }

    /// Color at a point of ℝX given in normalized coordinates.
    pub fn color_of(&self, y: &[f64; 4]) -> bool {
        let (u, v) = Chart::new(self.kind).inverse(y);
        self.color_at(u, v)
    }

    /// The opposite coloring.
    pub fn reversed(&self) -> Self {
        Coloring { color: self.color.iter().map(|c| !c).collect(), ..self.clone() }
    }
}

const SHIFT: (f64, f64) = (1.234_567e-3, -2.718_281e-3);

/// A chart segment p → p + d, with p.u in [0, 2π).
#[derive(Debug, Clone, Copy)]
struct Seg {
    p: (f64, f64),
    d: (f64, f64),
}

fn wrap_2pi(x: f64) -> f64 {
    x - TAU * (x / TAU).floor()
}

fn wrap_pi(x: f64) -> f64 {
    let y = wrap_2pi(x);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

struct Grid {
    kind: QuadricKind,
    chart: Chart,
    nu: usize,
    nv: usize,
    v0: f64,
    hu: f64,
    hv: f64,
}

impl Grid {
    fn dv(&self, a: f64, b: f64) -> f64 {
        if self.kind == QuadricKind::Hyperboloid {
            wrap_pi(b - a)
        } else {
            b - a
        }
    }

    /// Chart segments of a closed polyline of unit vectors, refined until
    /// each segment spans at most half a cell.
    fn segments(&self, poly: &[[f64; 4]], out: &mut Vec<Seg>) -> Result<()> {
        let n = poly.len();
        for k in 0..n {
            let a = poly[k];
            let b = poly[(k + 1) % n];
            let b = if dot4(&a, &b) < 0.0 { b.map(|x| -x) } else { b };
            self.refine(&a, &b, 0, out)?;
        }
        Ok(())
    }

    fn refine(&self, a: &[f64; 4], b: &[f64; 4], depth: usize, out: &mut Vec<Seg>) -> Result<()> {
        let pa = self.chart.inverse(a);
        let pb = self.chart.inverse(b);
        let d = (wrap_pi(pb.0 - pa.0), self.dv(pa.1, pb.1));
        if (d.0.abs() <= 0.5 * self.hu && d.1.abs() <= 0.5 * self.hv) || depth >= 24 {
            if depth >= 24 && (d.0.abs() > PI / 2.0 || d.1.abs() > PI / 2.0) {
                return Err(Error::Tangency("arc passes through a chart singularity".into()));
            }
            // a generic sub-cell shift keeps arcs such as chart diagonals off
            // the cell centers
            out.push(Seg { p: (pa.0 + SHIFT.0 * self.hu, pa.1 + SHIFT.1 * self.hv), d });
            return Ok(());
        }
        let m = normalize4(&[0, 1, 2, 3].map(|i| a[i] + b[i]));
        self.refine(a, &m, depth + 1, out)?;
        self.refine(&m, b, depth + 1, out)
    }

    fn center(&self, c: usize) -> (f64, f64) {
        let (i, j) = (c % self.nu, c / self.nu);
        ((i as f64 + 0.5) * self.hu, self.v0 + (j as f64 + 0.5) * self.hv)
    }

    /// Cells whose index box meets the segment's bounding box.
    fn cells_of(&self, s: &Seg) -> Vec<usize> {
        let (u0, u1) = (s.p.0.min(s.p.0 + s.d.0), s.p.0.max(s.p.0 + s.d.0));
        let (v0, v1) = (s.p.1.min(s.p.1 + s.d.1), s.p.1.max(s.p.1 + s.d.1));
        let i0 = (u0 / self.hu).floor() as i64;
        let i1 = (u1 / self.hu).floor() as i64;
        let j0 = ((v0 - self.v0) / self.hv).floor() as i64;
        let j1 = ((v1 - self.v0) / self.hv).floor() as i64;
        let mut out = Vec::new();
        for i in i0..=i1 {
            for j in j0..=j1 {
                let j = if self.kind == QuadricKind::Hyperboloid {
                    j.rem_euclid(self.nv as i64)
                } else if j < 0 || j >= self.nv as i64 {
                    continue;
                } else {
                    j
                };
                out.push(i.rem_euclid(self.nu as i64) as usize + self.nu * j as usize);
            }
        }
        out
    }
}

/// Whether segments a→a+da and b→b+db cross.
fn crosses(a: (f64, f64), da: (f64, f64), b: (f64, f64), db: (f64, f64)) -> bool {
    let den = da.0 * db.1 - da.1 * db.0;
    if den == 0.0 {
        return false;
    }
    let w = (b.0 - a.0, b.1 - a.1);
    let t = (w.0 * db.1 - w.1 * db.0) / den;
    let s = (w.0 * da.1 - w.1 * da.0) / den;
    (0.0..1.0).contains(&t) && (0.0..1.0).contains(&s)
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

/// Chess-board coloring of the complement of the given closed arcs (unit
/// vectors in normalized coordinates) on a grid of the chart. Cells are joined into regions across dual edges no arc crosses; colors
/// alternate with the parity of the crossings and are checked on every dual
/// edge. Arcs must stay two cells away from the chart poles of the ellipsoid
/// and from the apex of the cone.
pub fn chessboard_coloring(kind: QuadricKind, arcs: &[Vec<[f64; 4]>], opts: &ColoringOptions) -> Result<Coloring> {
    let resolution = opts.resolution;
    if resolution < 8 {
        return Err(invalid("coloring resolution must be at least 8"));
    }
    let chart = Chart::new(kind);
    let (v0, v1) = chart.v_range();
    let nu = 2 * resolution;
    let nv = ((v1 - v0) / PI * resolution as f64).round() as usize;
    let g = Grid { kind, chart, nu, nv, v0, hu: TAU / nu as f64, hv: (v1 - v0) / nv as f64 };
    let margin = 2.0 * g.hv;
    let singular: Vec<[f64; 4]> = match kind {
        QuadricKind::Ellipsoid => vec![chart.map(0.0, 0.0), chart.map(0.0, PI)],
        QuadricKind::Cone => vec![[0.0, 0.0, 0.0, 1.0]],
        QuadricKind::Hyperboloid => Vec::new(),
    };
    let mut segs = Vec::new();
    for poly in arcs {
        if poly.len() < 3 {
            return Err(invalid("an arc needs at least three samples"));
        }
        if poly.iter().any(|y| singular.iter().any(|s| proj_dist(y, s) < margin)) {
            return Err(Error::Tangency("arc too close to a chart singularity".into()));
        }
        g.segments(poly, &mut segs)?;
    }
    let ncell = nu * nv;
    let mut bucket: Vec<Vec<u32>> = vec![Vec::new(); ncell];
    for (k, s) in segs.iter().enumerate() {
        for c in g.cells_of(s) {
            bucket[c].push(k as u32);
        }
    }
    // crossings on the dual edge a → b, where b is the neighbour in
    // direction (du, dv) in chart units
    let count = |a: usize, b: usize, step: (f64, f64)| -> usize {
        let pa = g.center(a);
        let mut ids: Vec<u32> = bucket[a].iter().chain(&bucket[b]).copied().collect();
        ids.sort_unstable();
        ids.dedup();
        ids.iter()
            .filter(|&&k| {
                let s = segs[k as usize];
                // move the segment next to the edge
                let mid = (s.p.0 + 0.5 * s.d.0, s.p.1 + 0.5 * s.d.1);
                let e = (pa.0 + 0.5 * step.0, pa.1 + 0.5 * step.1);
                let su = TAU * ((e.0 - mid.0) / TAU).round();
                let sv = if kind == QuadricKind::Hyperboloid { TAU * ((e.1 - mid.1) / TAU).round() } else { 0.0 };
                crosses(pa, step, (s.p.0 + su, s.p.1 + sv), s.d)
            })
            .count()
    };
    let mut neighbours: Vec<(usize, usize, bool)> = Vec::with_capacity(2 * ncell);
    let mut parent: Vec<u32> = (0..ncell as u32).collect();
    let mut crossed_edges = 0;
    for j in 0..nv {
        for i in 0..nu {
            let a = i + nu * j;
            let mut edges = vec![((i + 1) % nu + nu * j, (g.hu, 0.0))];
            if j + 1 < nv {
                edges.push((i + nu * (j + 1), (0.0, g.hv)));
            } else if kind == QuadricKind::Hyperboloid {
                edges.push((i, (0.0, g.hv)));
            }
            for (b, step) in edges {
                let n = count(a, b, step);
                if n == 0 {
                    let (ra, rb) = (find(&mut parent, a as u32), find(&mut parent, b as u32));
                    parent[ra as usize] = rb;
                } else {
                    crossed_edges += 1;
                }
                neighbours.push((a, b, n % 2 == 1));
            }
            // the two ends of a generator meet at the apex, off the arcs
            if kind == QuadricKind::Cone && j + 1 == nv {
                let b = i;
                if !opts.apex_flip {
                    let (ra, rb) = (find(&mut parent, a as u32), find(&mut parent, b as u32));
                    parent[ra as usize] = rb;
                }
                neighbours.push((a, b, opts.apex_flip));
            }
        }
    }
    // 2-coloring by propagation along the dual graph
    let mut adj: Vec<Vec<(u32, bool)>> = vec![Vec::new(); ncell];
    for &(a, b, odd) in &neighbours {
        adj[a].push((b as u32, odd));
        adj[b].push((a as u32, odd));
    }
    let mut cell_color: Vec<Option<bool>> = vec![None; ncell];
    let mut stack = Vec::new();
    for start in 0..ncell {
        if cell_color[start].is_some() {
            continue;
        }
        cell_color[start] = Some(false);
        stack.push(start);
        while let Some(a) = stack.pop() {
            let ca = cell_color[a].unwrap_or(false);
            for &(b, odd) in &adj[a] {
                let want = ca ^ odd;
                match cell_color[b as usize] {
                    None => {
                        cell_color[b as usize] = Some(want);
                        stack.push(b as usize);
                    }
                    Some(cb) if cb != want => {
                        let (u, v) = g.center(a);
                        return Err(Error::NotColorable(format!(
                            "parity conflict near chart point ({u:.3}, {v:.3}); the arcs have a nonzero mod-2 class"
                        )));
                    }
                    _ => {}
                }
            }
        }
    }
    let mut ids: Vec<Option<u32>> = vec![None; ncell];
    let mut region = vec![0u32; ncell];
    let mut color = Vec::new();
    for c in 0..ncell {
        let root = find(&mut parent, c as u32) as usize;
        let id = *ids[root].get_or_insert_with(|| {
            color.push(cell_color[root].unwrap_or(false));
            (color.len() - 1) as u32
        });
        if color[id as usize] != cell_color[c].unwrap_or(false) {
            return Err(Error::NotColorable("a region received both colors".into()));
        }
        region[c] = id;
    }
    Ok(Coloring { kind, nu, nv, v0, hu: g.hu, hv: g.hv, region, color, edges: neighbours.len(), crossed_edges })
}
