//! Deterministic and seeded-random constructions: cycles, simplex and
//! cross-polytope boundaries, balanced Turán-type flag complexes, and the
//! randomized high-girth constructions with their deterministic purge and
//! sparsification passes.
//!
//! Randomness comes from ChaCha8 seeded with a 64-bit value; candidate
//! top faces are visited in lexicographic order with one uniform `f64`
//! draw each, so a seed pins the output complex exactly.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{Face, SimplicialComplex, VertexId};
use crate::error::{Error, Result};

/// Reproducibility seed for the random constructions.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

/// A partition of a vertex set into disjoint parts.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Partition {
    parts: Vec<Vec<VertexId>>,
}

impl Partition {
    pub fn new(parts: Vec<Vec<VertexId>>) -> Result<Self> {
        let mut seen = HashSet::new();
        for part in &parts {
            for v in part {
                if !seen.insert(*v) {
                    return Err(Error::domain(format!("vertex {v} appears in two parts")));
                }
            }
        }
        let mut parts = parts;
        for part in &mut parts {
            part.sort_unstable();
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[Vec<VertexId>] {
        &self.parts
    }

    /// Contiguous blocks `1..=m, m+1..=2m, ...` of `p` parts of size `m`.
    pub fn blocks(m: usize, p: usize) -> Self {
        let parts = (0..p)
            .map(|i| {
                ((i * m + 1)..=(i + 1) * m)
                    .map(|v| VertexId(v as u32))
                    .collect()
            })
            .collect();
        Partition { parts }
    }

    fn covers(&self, c: &SimplicialComplex) -> bool {
        let mut all: Vec<VertexId> = self.parts.iter().flatten().copied().collect();
        all.sort_unstable();
        all == c.vertices()
    }

    /// True iff every face of `c` has at most one vertex per part.
    pub fn is_balanced(&self, c: &SimplicialComplex) -> bool {
        c.faces().all(|f| {
            self.parts
                .iter()
                .all(|part| f.vertices().iter().filter(|v| part.contains(v)).count() <= 1)
        })
    }
}

fn face(ids: &[u32]) -> Face {
    Face::from_ids(ids).expect("generator faces have distinct vertices")
}

/// The cycle graph `C_n` on vertices `1..=n`.
pub fn cycle_complex(n: u32) -> Result<SimplicialComplex> {
    if n < 3 {
        return Err(Error::domain("a cycle needs at least 3 vertices"));
    }
    let facets: Vec<Face> = (1..=n)
        .map(|i| face(&[i, if i == n { 1 } else { i + 1 }]))
        .collect();
    SimplicialComplex::from_facets(&facets, &[])
}

/// The complete graph `K_n` (a 1-dimensional complex).
pub fn complete_graph(n: u32) -> Result<SimplicialComplex> {
    if n < 1 {
        return Err(Error::domain("a complete graph needs a vertex"));
    }
    if n == 1 {
        return SimplicialComplex::from_facets(&[], &[VertexId(1)]);
    }
    let mut facets = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            facets.push(face(&[a, b]));
        }
    }
    SimplicialComplex::from_facets(&facets, &[])
}

/// The full simplex on `p + 1` vertices.
pub fn full_simplex(p: u32) -> Result<SimplicialComplex> {
    let ids: Vec<u32> = (1..=p + 1).collect();
    SimplicialComplex::from_facets(&[face(&ids)], &[])
}

/// The boundary of the `p`-simplex: all proper subsets of `p+1` vertices.
pub fn simplex_boundary(p: u32) -> Result<SimplicialComplex> {
    if p < 1 {
        return Err(Error::domain("simplex boundary needs p >= 1"));
    }
    let ids: Vec<u32> = (1..=p + 1).collect();
    let facets: Vec<Face> = ids
        .iter()
        .map(|skip| {
            face(
                &ids.iter()
                    .copied()
                    .filter(|v| v != skip)
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    SimplicialComplex::from_facets(&facets, &[])
}

/// The cone over `c` with a fresh apex: faces `F` and `F ∪ {apex}`.
pub fn cone(c: &SimplicialComplex, apex: VertexId) -> Result<SimplicialComplex> {
    if c.contains_vertex(apex) {
        return Err(Error::domain(format!("apex {apex} already in the complex")));
    }
    let mut faces = Vec::with_capacity(2 * c.face_count());
    for f in c.faces() {
        faces.push(f.clone());
        let mut vs = f.vertices().to_vec();
        vs.push(apex);
        faces.push(Face::new(vs).expect("fresh apex cannot collide"));
    }
    SimplicialComplex::from_closed_face_list(faces)
}

/// The boundary of the `p`-dimensional cross-polytope: `p` antipodal
/// pairs `(2i-1, 2i)`, faces all sets with at most one vertex per pair.
pub fn cross_polytope_boundary(p: u32) -> Result<SimplicialComplex> {
    if p < 1 {
        return Err(Error::domain("cross-polytope boundary needs p >= 1"));
    }
    let mut facets = Vec::new();
    let mut choice = vec![0u32; p as usize];
    loop {
        let ids: Vec<u32> = choice
            .iter()
            .enumerate()
            .map(|(i, &c)| 2 * i as u32 + 1 + c)
            .collect();
        facets.push(face(&ids));
        let mut i = 0usize;
        loop {
            if i == p as usize {
                return SimplicialComplex::from_facets(&facets, &[]);
            }
            if choice[i] == 0 {
                choice[i] = 1;
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// The balanced Turán-type flag complex: `n` vertices split into `d`
/// parts as evenly as possible, faces all transversal subsets.
pub fn turan_flag(n: u32, d: u32) -> Result<SimplicialComplex> {
    if d < 1 || d > n {
        return Err(Error::domain("turan_flag needs 1 <= d <= n"));
    }
    let base = n / d;
    let extra = (n % d) as usize;
    let mut parts: Vec<Vec<u32>> = Vec::new();
    let mut next = 1u32;
    for i in 0..d as usize {
        let size = base + if i < extra { 1 } else { 0 };
        parts.push((next..next + size).collect());
        next += size;
    }
    let mut facets = Vec::new();
    let mut pick = vec![0usize; d as usize];
    loop {
        let ids: Vec<u32> = parts.iter().zip(&pick).map(|(part, &k)| part[k]).collect();
        facets.push(face(&ids));
        let mut i = 0usize;
        loop {
            if i == d as usize {
                return SimplicialComplex::from_facets(&facets, &[]);
            }
            if pick[i] + 1 < parts[i].len() {
                pick[i] += 1;
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// All transversal `p`-subsets (one vertex per part) in lexicographic
/// order of their id sequences.
fn transversal_top_sets(part: &Partition) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    let parts = part.parts();
    let mut pick = vec![0usize; parts.len()];
    if parts.iter().any(|p| p.is_empty()) {
        return out;
    }
    loop {
        out.push(parts.iter().zip(&pick).map(|(p, &k)| p[k]).collect());
        let mut i = parts.len();
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            if pick[i] + 1 < parts[i].len() {
                pick[i] += 1;
                for later in pick.iter_mut().skip(i + 1) {
                    *later = 0;
                }
                break;
            }
        }
    }
}

/// The balanced random complex: `p` parts of size `m`; every transversal
/// set of fewer than `p` vertices is a face, and each transversal `p`-set
/// appears independently with probability `a`.
pub fn random_balanced(
    m: usize,
    p: usize,
    a: f64,
    seed: Seed,
) -> Result<(SimplicialComplex, Partition)> {
    if p < 2 || m < 1 {
        return Err(Error::domain("random_balanced needs p >= 2 and m >= 1"));
    }
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::domain("probability must lie in [0, 1]"));
    }
    let partition = Partition::blocks(m, p);
    let mut rng = seed.rng();
    let mut facets: Vec<Face> = Vec::new();

    // All transversal (p-1)-subsets are faces: drop one part at a time.
    for skip in 0..p {
        let sub = Partition {
            parts: partition
                .parts()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, p)| p.clone())
                .collect(),
        };
        for t in transversal_top_sets(&sub) {
            facets.push(Face::new(t).expect("transversal sets are duplicate-free"));
        }
    }
    for t in transversal_top_sets(&partition) {
        if rng.random::<f64>() < a {
            facets.push(Face::new(t).expect("transversal sets are duplicate-free"));
        }
    }
    let isolated: Vec<VertexId> = partition.parts().iter().flatten().copied().collect();
    let c = SimplicialComplex::from_facets(&facets, &isolated)?;
    Ok((c, partition))
}

/// All vertex sets `W` choosing two vertices per part such that every one
/// of the `2^p` transversal top sets inside `W` is a face. Each such `W`
/// induces the boundary of a `p`-dimensional cross-polytope.
pub fn find_cross_polytope_boundaries(
    c: &SimplicialComplex,
    part: &Partition,
) -> Result<Vec<Vec<VertexId>>> {
    if !part.covers(c) || !part.is_balanced(c) {
        return Err(Error::domain("partition does not balance the complex"));
    }
    let mut witnesses = Vec::new();
    let pair_lists: Vec<Vec<(VertexId, VertexId)>> = part
        .parts()
        .iter()
        .map(|p| {
            let mut pairs = Vec::new();
            for i in 0..p.len() {
                for j in i + 1..p.len() {
                    pairs.push((p[i], p[j]));
                }
            }
            pairs
        })
        .collect();
    if pair_lists.iter().any(|l| l.is_empty()) {
        return Ok(witnesses);
    }
    let mut pick = vec![0usize; pair_lists.len()];
    loop {
        let pairs: Vec<(VertexId, VertexId)> =
            pair_lists.iter().zip(&pick).map(|(l, &k)| l[k]).collect();
        if all_top_faces_present(c, &pairs) {
            let mut w: Vec<VertexId> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
            w.sort_unstable();
            witnesses.push(w);
        }
        let mut i = pair_lists.len();
        loop {
            if i == 0 {
                witnesses.sort();
                return Ok(witnesses);
            }
            i -= 1;
            if pick[i] + 1 < pair_lists[i].len() {
                pick[i] += 1;
                for later in pick.iter_mut().skip(i + 1) {
                    *later = 0;
                }
                break;
            }
        }
    }
}

fn all_top_faces_present(c: &SimplicialComplex, pairs: &[(VertexId, VertexId)]) -> bool {
    transversal_faces_of_pairs(pairs)
        .iter()
        .all(|f| c.is_face(f))
}

fn transversal_faces_of_pairs(pairs: &[(VertexId, VertexId)]) -> Vec<Face> {
    let p = pairs.len();
    let mut out = Vec::with_capacity(1 << p);
    for bits in 0..(1u32 << p) {
        let ids: Vec<VertexId> = pairs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| if bits >> i & 1 == 0 { a } else { b })
            .collect();
        out.push(Face::new(ids).expect("pair choices are duplicate-free"));
    }
    out.sort();
    out
}

/// Removes one top face from every complete cross-polytope boundary, in
/// deterministic order, leaving `gr_{p-1} > 2p`.
pub fn purge_cross_polytopes(c: &SimplicialComplex, part: &Partition) -> Result<SimplicialComplex> {
    let witnesses = find_cross_polytope_boundaries(c, part)?;
    let mut masks: HashSet<u64> = c.faces().map(|f| c.mask_of(&f).unwrap()).collect();
    for w in witnesses {
        let pairs: Vec<(VertexId, VertexId)> = part
            .parts()
            .iter()
            .map(|p| {
                let chosen: Vec<VertexId> = p
                    .iter()
                    .copied()
                    .filter(|v| w.binary_search(v).is_ok())
                    .collect();
                (chosen[0], chosen[1])
            })
            .collect();
        let tops = transversal_faces_of_pairs(&pairs);
        if tops.iter().all(|f| masks.contains(&c.mask_of(f).unwrap())) {
            let least = &tops[0]; // lexicographically least top face
            masks.remove(&c.mask_of(least).unwrap());
        }
    }
    Ok(c.rebuilt_from_masks(&masks))
}

/// The probabilistic high-girth construction: a balanced random complex
/// with top-face density `a` (default `n^{-p/(2^p-1)}`), purged of
/// cross-polytope boundaries so that `gr_{p-1} > 2p`.
pub fn high_girth_pdim(
    m: usize,
    p: usize,
    seed: Seed,
    a: Option<f64>,
) -> Result<SimplicialComplex> {
    let n = (m * p) as f64;
    let a = a.unwrap_or_else(|| {
        let exponent = -(p as f64) / ((1u64 << p) as f64 - 1.0);
        n.powf(exponent).min(1.0)
    });
    let (c, part) = random_balanced(m, p, a, seed)?;
    purge_cross_polytopes(&c, &part)
}

/// The tripartite 2-dimensional random complex: parts `X, Y, Z` of size
/// `m`, every cross edge present, each transversal triangle filled with
/// probability `a`.
pub fn random_tripartite_2d(
    m: usize,
    a: f64,
    seed: Seed,
) -> Result<(SimplicialComplex, Partition)> {
    if m < 1 {
        return Err(Error::domain("random_tripartite_2d needs m >= 1"));
    }
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::domain("probability must lie in [0, 1]"));
    }
    let partition = Partition::blocks(m, 3);
    let mut rng = seed.rng();
    let mut facets: Vec<Face> = Vec::new();
    let parts = partition.parts();
    for i in 0..3 {
        for j in i + 1..3 {
            for &x in &parts[i] {
                for &y in &parts[j] {
                    facets.push(Face::new(vec![x, y]).expect("distinct parts"));
                }
            }
        }
    }
    for t in transversal_top_sets(&partition) {
        if rng.random::<f64>() < a {
            facets.push(Face::new(t).expect("transversal sets are duplicate-free"));
        }
    }
    let c = SimplicialComplex::from_facets(&facets, &[])?;
    Ok((c, partition))
}

/// Enforces the density condition `f_2(c[W]) < 2|W| - 4` for every
/// vertex set with `3 <= |W| <= k` by deleting, in deterministic order,
/// the lexicographically least 2-face inside each violating `W`. By the
/// minimal-support bound this forces `gr_2 > k`.
pub fn sparsify_for_gr2(
    c: &SimplicialComplex,
    k: usize,
    part: &Partition,
) -> Result<SimplicialComplex> {
    if c.dim() > 2 {
        return Err(Error::domain(
            "sparsify_for_gr2 needs a 2-dimensional complex",
        ));
    }
    if !part.covers(c) || !part.is_balanced(c) {
        return Err(Error::domain("partition does not balance the complex"));
    }
    if k > c.vertex_count() {
        return Err(Error::domain("k exceeds the vertex count"));
    }
    let mut masks: HashSet<u64> = c.faces().map(|f| c.mask_of(&f).unwrap()).collect();
    let n = c.vertex_count();
    let dense: Vec<usize> = (0..n).collect();
    for size in 3..=k {
        let mut combos = combination_masks(&dense, size);
        while let Some(w) = combos.pop_front() {
            // 2|W|-4 >= 2 here, so a violating W always has a face to drop.
            loop {
                let mut inside: Vec<u64> = masks
                    .iter()
                    .copied()
                    .filter(|&m| m.count_ones() == 3 && m & !w == 0)
                    .collect();
                if inside.len() < 2 * size - 4 {
                    break;
                }
                crate::complex::sort_masks_lex(&mut inside);
                masks.remove(&inside[0]);
            }
        }
    }
    Ok(c.rebuilt_from_masks(&masks))
}

fn combination_masks(items: &[usize], k: usize) -> std::collections::VecDeque<u64> {
    let mut out = std::collections::VecDeque::new();
    if k > items.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push_back(idx.iter().fold(0u64, |m, &i| m | (1u64 << items[i])));
        let n = items.len();
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}
