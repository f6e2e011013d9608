//! Non-returning walks on the directed 1-skeleton: exact counting by
//! dynamic programming, the walk-count bound check, the admissible-arc
//! construction, and the stationary edge-weight solve.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use crate::complex::{Face, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::girth::{girth, graph_girth, GirthValue, SearchParams};

/// The directed 1-skeleton: both orientations of every edge, plus a
/// membership oracle for the triangles of the source complex.
#[derive(Clone, Debug)]
pub struct WalkDigraph {
    vertices: Vec<VertexId>,
    /// Sorted out-neighbor lists over dense indices.
    adj: Vec<Vec<usize>>,
    edges: HashSet<u64>,
    triangles: HashSet<u64>,
}

/// Builds the walk digraph of a complex.
pub fn directed_skeleton(c: &SimplicialComplex) -> WalkDigraph {
    let n = c.vertex_count();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut m = c.neighbors_mask(v);
            let mut out = Vec::new();
            while m != 0 {
                out.push(m.trailing_zeros() as usize);
                m &= m - 1;
            }
            out
        })
        .collect();
    let edges = c
        .by_card()
        .get(2)
        .map(|l| l.iter().copied().collect())
        .unwrap_or_default();
    let triangles = c
        .by_card()
        .get(3)
        .map(|l| l.iter().copied().collect())
        .unwrap_or_default();
    WalkDigraph {
        vertices: c.vertices().to_vec(),
        adj,
        edges,
        triangles,
    }
}

impl WalkDigraph {
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn arc_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    fn dense(&self, v: VertexId) -> Result<usize> {
        self.vertices
            .binary_search(&v)
            .map_err(|_| Error::domain(format!("vertex {v} is not in the complex")))
    }

    pub fn is_arc(&self, u: VertexId, v: VertexId) -> bool {
        match (self.dense(u), self.dense(v)) {
            (Ok(a), Ok(b)) => self.edges.contains(&((1u64 << a) | (1u64 << b))),
            _ => false,
        }
    }

    fn is_triangle_dense(&self, a: usize, b: usize, c: usize) -> bool {
        let m = (1u64 << a) | (1u64 << b) | (1u64 << c);
        match m.count_ones() {
            3 => self.triangles.contains(&m),
            2 => self.edges.contains(&m),
            _ => true, // a degenerate triple collapses to a vertex, always a face
        }
    }
}

/// True iff `v_i ≠ v_{i+2}` and `{v_i, v_{i+1}, v_{i+2}}` is not a face,
/// at every interior index. Steps must be edges.
pub fn is_non_returning(c: &SimplicialComplex, walk: &[VertexId]) -> Result<bool> {
    let g = directed_skeleton(c);
    let dense: Vec<usize> = walk.iter().map(|&v| g.dense(v)).collect::<Result<_>>()?;
    for w in dense.windows(2) {
        if w[0] == w[1] || !g.edges.contains(&((1u64 << w[0]) | (1u64 << w[1]))) {
            return Err(Error::domain(format!(
                "walk step {}-{} is not an edge",
                g.vertices[w[0]], g.vertices[w[1]]
            )));
        }
    }
    Ok(dense
        .windows(3)
        .all(|w| w[0] != w[2] && !g.is_triangle_dense(w[0], w[1], w[2])))
}

/// Exact number of non-returning walks of length `k` from `u` to `v`,
/// by dynamic programming with the last arc as state.
pub fn count_non_returning_walks(
    c: &SimplicialComplex,
    u: VertexId,
    v: VertexId,
    k: usize,
) -> Result<u64> {
    if k < 1 {
        return Err(Error::domain("walk length must be at least 1"));
    }
    let g = directed_skeleton(c);
    let src = g.dense(u)?;
    let dst = g.dense(v)?;
    let counts = walk_counts_from_vertex(&g, src, k);
    Ok(g.adj[dst]
        .iter()
        .map(|&w| counts[w * g.vertices.len() + dst])
        .sum())
}

/// Arc-indexed counts of non-returning walks of length `k` starting at
/// `src`. Index `a * n + b` holds walks whose last arc is `a -> b`.
fn walk_counts_from_vertex(g: &WalkDigraph, src: usize, k: usize) -> Vec<u64> {
    let n = g.vertices.len();
    let mut cur = vec![0u64; n * n];
    for &w in &g.adj[src] {
        cur[src * n + w] = 1;
    }
    advance_walks(g, &mut cur, k - 1);
    cur
}

fn advance_walks(g: &WalkDigraph, cur: &mut Vec<u64>, steps: usize) {
    let n = g.vertices.len();
    for _ in 0..steps {
        let mut next = vec![0u64; n * n];
        for a in 0..n {
            for &b in &g.adj[a] {
                let count = cur[a * n + b];
                if count == 0 {
                    continue;
                }
                for &c in &g.adj[b] {
                    if c != a && !g.is_triangle_dense(a, b, c) {
                        next[b * n + c] += count;
                    }
                }
            }
        }
        *cur = next;
    }
}

/// Endpoints reachable by non-returning walks of length `k` whose first
/// arc is `u -> v`.
fn endpoints_from_arc(g: &WalkDigraph, u: usize, v: usize, k: usize) -> BTreeSet<usize> {
    let n = g.vertices.len();
    let mut cur = vec![0u64; n * n];
    cur[u * n + v] = 1;
    advance_walks(g, &mut cur, k - 1);
    let mut out = BTreeSet::new();
    for a in 0..n {
        for &b in &g.adj[a] {
            if cur[a * n + b] > 0 {
                out.insert(b);
            }
        }
    }
    out
}

/// Result of the walk-count bound check.
#[derive(Clone, Debug, Serialize)]
pub struct TreeLemmaReport {
    pub r: usize,
    pub bound: u64,
    pub max_count: u64,
    pub pass: bool,
    /// For girth > 2r+1: whether length-(r+1) walks seeded with the two
    /// orientations of each edge always have disjoint endpoint sets.
    /// `None` when the girth hypothesis for the clause does not hold.
    pub odd_clause_pass: Option<bool>,
}

/// Checks that no ordered vertex pair admits more than `(d-1)^(r-1)`
/// non-returning walks of length `r`. Requires `gr_1 > 2r`.
pub fn tree_lemma_check(
    c: &SimplicialComplex,
    r: usize,
    params: &SearchParams,
) -> Result<TreeLemmaReport> {
    if r < 1 {
        return Err(Error::domain("r must be at least 1"));
    }
    let gr1 = if c.dim() <= 1 {
        graph_girth(c)?
    } else {
        girth(c, 1, params)?.value
    };
    let required = GirthValue::Finite(2 * r as u32);
    if gr1 <= required {
        return Err(Error::domain(format!(
            "tree lemma needs gr_1 > {}, complex has gr_1 = {gr1}",
            2 * r
        )));
    }
    let g = directed_skeleton(c);
    let n = g.vertices.len();
    let d = (c.dim() + 1).max(0) as u64;
    let bound = if r == 1 {
        1
    } else {
        d.saturating_sub(1).pow(r as u32 - 1)
    };

    let mut max_count = 0u64;
    for src in 0..n {
        let counts = walk_counts_from_vertex(&g, src, r);
        for dst in 0..n {
            let total: u64 = g.adj[dst].iter().map(|&w| counts[w * n + dst]).sum();
            max_count = max_count.max(total);
        }
    }

    let odd_clause_pass = if gr1 > GirthValue::Finite(2 * r as u32 + 1) {
        let mut ok = true;
        'outer: for a in 0..n {
            for &b in &g.adj[a] {
                if a < b {
                    let fwd = endpoints_from_arc(&g, a, b, r + 1);
                    let bwd = endpoints_from_arc(&g, b, a, r + 1);
                    if fwd.intersection(&bwd).next().is_some() {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        Some(ok)
    } else {
        None
    };

    Ok(TreeLemmaReport {
        r,
        bound,
        max_count,
        pass: max_count <= bound,
        odd_clause_pass,
    })
}

/// Arc weights for the stationary non-returning walk: the admissible arc
/// set `E` and, once solved, positive weights `z` on it.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeWeightSystem {
    pub alpha: f64,
    /// Admissible arcs, symmetric: `(u, v)` present iff `(v, u)` is.
    pub arcs: BTreeSet<(VertexId, VertexId)>,
    /// Weight per arc; empty until `stable_weights` runs.
    pub weights: BTreeMap<(VertexId, VertexId), f64>,
}

/// Classifies arcs by relative codegree: an arc `uv` is banned when
/// `f_0(lk(uv)) >= alpha * f_0(lk(u))` or symmetrically in `v`; then any
/// vertex carrying more than `(4/3) deg(v)` banned incident arcs (both
/// orientations counted) has all its arcs banned, to a fixpoint. `E` is
/// everything that survives.
pub fn admissible_arcs(c: &SimplicialComplex, alpha: f64) -> Result<EdgeWeightSystem> {
    if c.f(1) == 0 {
        return Err(Error::domain("admissible_arcs needs at least one edge"));
    }
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::domain("alpha must lie in (0, 1)"));
    }
    let n = c.vertex_count();
    let nbr: Vec<u64> = (0..n).map(|v| c.neighbors_mask(v)).collect();
    let deg = |v: usize| nbr[v].count_ones() as f64;
    let codegree = |u: usize, v: usize| -> f64 {
        // vertices of lk(uv): w with {u,v,w} a face
        let e = (1u64 << u) | (1u64 << v);
        c.by_card()
            .get(3)
            .map(|tris| tris.iter().filter(|&&t| t & e == e).count())
            .unwrap_or(0) as f64
    };

    let mut banned: HashSet<(usize, usize)> = HashSet::new();
    for (u, &nbr_u) in nbr.iter().enumerate() {
        let mut m = nbr_u;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            if u < v {
                let co = codegree(u, v);
                if co >= alpha * deg(u) || co >= alpha * deg(v) {
                    banned.insert((u, v));
                    banned.insert((v, u));
                }
            }
        }
    }
    loop {
        let mut grew = false;
        for (v, &nbr_v) in nbr.iter().enumerate() {
            let mut incident_banned = 0usize;
            let mut m = nbr_v;
            let mut all_banned = true;
            while m != 0 {
                let u = m.trailing_zeros() as usize;
                m &= m - 1;
                incident_banned += banned.contains(&(u, v)) as usize;
                incident_banned += banned.contains(&(v, u)) as usize;
                all_banned &= banned.contains(&(u, v)) && banned.contains(&(v, u));
            }
            if !all_banned && incident_banned as f64 > (4.0 / 3.0) * deg(v) {
                let mut m = nbr_v;
                while m != 0 {
                    let u = m.trailing_zeros() as usize;
                    m &= m - 1;
                    banned.insert((u, v));
                    banned.insert((v, u));
                }
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    let mut arcs = BTreeSet::new();
    for (u, &nbr_u) in nbr.iter().enumerate() {
        let mut m = nbr_u;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            if !banned.contains(&(u, v)) {
                arcs.insert((c.vertices()[u], c.vertices()[v]));
            }
        }
    }
    Ok(EdgeWeightSystem {
        alpha,
        arcs,
        weights: BTreeMap::new(),
    })
}

/// Per-tail-vertex view of the admissible system, over dense indices.
struct VertexSystem {
    tail: VertexId,
    /// Out-neighbors through admissible arcs, ascending.
    targets: Vec<VertexId>,
    /// `allowed[x]` = indices into `targets` reachable after arriving
    /// from `targets[x]` (i.e. `T_u(v)` for `u = targets[x]`).
    allowed: Vec<Vec<usize>>,
}

fn vertex_systems(c: &SimplicialComplex, ews: &EdgeWeightSystem) -> Result<Vec<VertexSystem>> {
    let mut out = Vec::new();
    let mut by_tail: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for &(u, v) in &ews.arcs {
        by_tail.entry(u).or_default().push(v);
    }
    for (&tail, targets) in &by_tail {
        let targets = targets.clone();
        let mut allowed = Vec::with_capacity(targets.len());
        for &u in &targets {
            let list: Vec<usize> = targets
                .iter()
                .enumerate()
                .filter(|(_, &w)| {
                    w != u && !c.is_face(&Face::new(vec![u, w]).expect("distinct vertices"))
                })
                .map(|(i, _)| i)
                .collect();
            if list.is_empty() {
                return Err(Error::domain(format!(
                    "arc {u}->{tail} has no onward non-returning arc; \
                     the admissible set does not support stationary walks"
                )));
            }
            allowed.push(list);
        }
        out.push(VertexSystem {
            tail,
            targets,
            allowed,
        });
    }
    Ok(out)
}

/// `(xP)` restricted to arcs out of one vertex, times `|E|`: entry `w`
/// is `sum over u with w in T_u(v) of z_w / sum_{w' in T_u(v)} z_{w'}`.
/// Stationarity of the uniform distribution means every entry equals 1.
fn scaled_flow(sys: &VertexSystem, z: &[f64]) -> Vec<f64> {
    let t = sys.targets.len();
    let denom: Vec<f64> = sys
        .allowed
        .iter()
        .map(|list| list.iter().map(|&i| z[i]).sum::<f64>())
        .collect();
    let mut s = vec![0.0; t];
    for (u, list) in sys.allowed.iter().enumerate() {
        for &w in list {
            s[w] += z[w] / denom[u];
        }
    }
    s
}

/// Solves `xP = x` per tail vertex by the maximal-arc adjustment: pick
/// the arc with the largest stationarity excess, shrink its weight (or
/// solve it to target exactly, whichever is larger), rescale so weights
/// sum to the out-degree, and repeat until the residual meets `tol`.
pub fn stable_weights(
    c: &SimplicialComplex,
    ews: &EdgeWeightSystem,
    tol: f64,
    max_iters: u64,
) -> Result<EdgeWeightSystem> {
    if ews.arcs.is_empty() {
        return Err(Error::domain("the admissible arc set is empty"));
    }
    let e_size = ews.arcs.len() as f64;
    let systems = vertex_systems(c, ews)?;
    let mut solved = ews.clone();
    for sys in &systems {
        let z = solve_vertex(sys, e_size, tol, max_iters)?;
        for (i, &w) in sys.targets.iter().enumerate() {
            solved.weights.insert((sys.tail, w), z[i]);
        }
    }
    Ok(solved)
}

fn solve_vertex(sys: &VertexSystem, e_size: f64, tol: f64, max_iters: u64) -> Result<Vec<f64>> {
    let t = sys.targets.len();
    let mut z = vec![1.0f64; t];
    // |(xP)_vw - 1/|E|| <= tol  <=>  |s_w - 1| <= tol * |E|
    let scaled_tol = tol * e_size;
    for _ in 0..max_iters {
        let s = scaled_flow(sys, &z);
        let residual = s.iter().map(|v| (v - 1.0).abs()).fold(0.0f64, f64::max);
        if residual <= scaled_tol {
            return Ok(z);
        }
        let d: f64 = s.iter().map(|v| (v - 1.0).abs()).sum();
        // arc with maximal flow; ties go to the lexicographically lowest
        let (w_star, _) =
            s.iter().enumerate().fold(
                (0usize, f64::MIN),
                |(bi, bv), (i, &v)| {
                    if v > bv {
                        (i, v)
                    } else {
                        (bi, bv)
                    }
                },
            );
        let case1 = z[w_star] - d / (2.0 * t as f64);
        let case2 = solve_exact_target(sys, &z, w_star);
        let new = case1.max(case2);
        z[w_star] = new.max(f64::MIN_POSITIVE);
        let sum: f64 = z.iter().sum();
        let scale = t as f64 / sum;
        for v in z.iter_mut() {
            *v *= scale;
        }
    }
    let s = scaled_flow(sys, &z);
    let residual = s.iter().map(|v| (v - 1.0).abs()).fold(0.0f64, f64::max) / e_size;
    Err(Error::Convergence {
        residual,
        iterations: max_iters,
    })
}

/// The weight for arc `w` making its scaled flow exactly 1, holding the
/// other weights fixed: bisection on a monotone function.
fn solve_exact_target(sys: &VertexSystem, z: &[f64], w: usize) -> f64 {
    // constants: for each u with w in T_u(v), the sum of other weights
    let consts: Vec<f64> = sys
        .allowed
        .iter()
        .filter(|list| list.contains(&w))
        .map(|list| list.iter().filter(|&&i| i != w).map(|&i| z[i]).sum::<f64>())
        .collect();
    if consts.is_empty() {
        return z[w];
    }
    let flow = |x: f64| -> f64 { consts.iter().map(|&c| x / (c + x)).sum() };
    let (mut lo, mut hi) = (0.0f64, z[w].max(1.0));
    while flow(hi) < 1.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return hi;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if flow(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Max over arcs of `|(xP)_e - 1/|E||` for the uniform distribution.
pub fn stationarity_residual(c: &SimplicialComplex, ews: &EdgeWeightSystem) -> Result<f64> {
    if ews.arcs.is_empty() {
        return Err(Error::domain("the admissible arc set is empty"));
    }
    let e_size = ews.arcs.len() as f64;
    let systems = vertex_systems(c, ews)?;
    let mut worst = 0.0f64;
    for sys in &systems {
        let z: Vec<f64> = sys
            .targets
            .iter()
            .map(|&w| ews.weights.get(&(sys.tail, w)).copied().unwrap_or(1.0))
            .collect();
        for s in scaled_flow(sys, &z) {
            worst = worst.max((s - 1.0).abs() / e_size);
        }
    }
    Ok(worst)
}
