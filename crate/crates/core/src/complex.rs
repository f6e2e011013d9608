//! Finite simplicial complexes stored as their complete, downward-closed
//! face set, together with the structural operations (link, induced
//! subcomplex, skeleton, flag tests, suspension) everything else builds on.
//!
//! Vertices carry arbitrary `u32` ids. Internally each complex maps its
//! vertex set onto dense bit positions and stores every face as a `u64`
//! bitmask, which caps a single complex at 64 vertices (plenty for the
//! exhaustive searches this crate performs) and makes subset queries cheap.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex label. Ids need not be contiguous; they are preserved by
/// parsing and generation.
#[derive(
    Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for VertexId {
    fn from(id: u32) -> Self {
        VertexId(id)
    }
}

/// A face: a strictly increasing sequence of vertex ids. The empty
/// sequence is the empty face, present in every complex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Face {
    vertices: Vec<VertexId>,
}

impl Face {
    /// Builds a face from ids in any order; duplicates are rejected.
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("face contains a duplicate vertex"));
        }
        Ok(Face { vertices })
    }

    pub fn from_ids(ids: &[u32]) -> Result<Self> {
        Face::new(ids.iter().copied().map(VertexId).collect())
    }

    pub fn empty() -> Self {
        Face {
            vertices: Vec::new(),
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Number of vertices.
    pub fn card(&self) -> usize {
        self.vertices.len()
    }

    /// Geometric dimension: `card - 1`, so the empty face has dimension -1.
    pub fn dim(&self) -> isize {
        self.vertices.len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

impl std::fmt::Display for Face {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// The face-count vector `f_0 .. f_{d-1}`; empty for the `{∅}` complex.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FVector(pub Vec<usize>);

impl FVector {
    /// `f_i`, with `f_{-1} = 1` and zero outside the stored range.
    pub fn f(&self, i: isize) -> usize {
        if i == -1 {
            1
        } else if i >= 0 && (i as usize) < self.0.len() {
            self.0[i as usize]
        } else {
            0
        }
    }
}

/// A finite simplicial complex: the full downward-closed face set over a
/// fixed vertex set. Immutable after construction.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    /// Sorted vertex ids; position = dense bit index.
    vertices: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    /// `by_card[k]` holds the masks of all faces with `k` vertices, in
    /// lexicographic order of their vertex sequences. `by_card[0] = [0]`.
    by_card: Vec<Vec<u64>>,
    face_set: HashSet<u64>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.by_card == other.by_card
    }
}

impl Eq for SimplicialComplex {}

/// Complexes store every face, so closures of enormous facets are
/// rejected before they exhaust memory.
const MAX_FACES: usize = 1 << 22;

/// Sorts masks of equal cardinality into lexicographic order of the
/// underlying increasing vertex sequences.
pub(crate) fn sort_masks_lex(masks: &mut [u64]) {
    masks.sort_unstable_by_key(|m| std::cmp::Reverse(m.reverse_bits()));
}

/// Enumerates the submasks of `m`, including `0` and `m` itself.
pub(crate) fn submasks(m: u64) -> impl Iterator<Item = u64> {
    let mut sub = m;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = sub;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & m;
        }
        Some(cur)
    })
}

impl SimplicialComplex {
    /// The minimal complex `{∅}`: no vertices, one (empty) face.
    pub fn empty() -> Self {
        SimplicialComplex {
            vertices: Vec::new(),
            index: HashMap::new(),
            by_card: vec![vec![0]],
            face_set: HashSet::from([0]),
        }
    }

    /// Downward closure of `facets`, plus isolated vertices. Idempotent
    /// when fed its own facets back.
    pub fn from_facets(facets: &[Face], isolated: &[VertexId]) -> Result<Self> {
        let mut vertices: Vec<VertexId> = facets
            .iter()
            .flat_map(|f| f.vertices().iter().copied())
            .chain(isolated.iter().copied())
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        if vertices.len() > 64 {
            return Err(Error::domain(format!(
                "complex has {} vertices; at most 64 are supported",
                vertices.len()
            )));
        }
        let index: HashMap<VertexId, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();

        let mut face_set: HashSet<u64> = HashSet::from([0]);
        for v in isolated {
            face_set.insert(1u64 << index[v]);
        }
        for facet in facets {
            let mask = facet
                .vertices()
                .iter()
                .fold(0u64, |m, v| m | (1u64 << index[v]));
            if facet.card() >= 22 && (1usize << facet.card()) > MAX_FACES {
                return Err(Error::domain(format!(
                    "facet with {} vertices closes to more than {MAX_FACES} faces",
                    facet.card()
                )));
            }
            for sub in submasks(mask) {
                face_set.insert(sub);
            }
            if face_set.len() > MAX_FACES {
                return Err(Error::domain(format!(
                    "complex exceeds the {MAX_FACES}-face storage budget"
                )));
            }
        }
        Ok(Self::from_parts(vertices, index, face_set))
    }

    fn from_parts(
        vertices: Vec<VertexId>,
        index: HashMap<VertexId, usize>,
        face_set: HashSet<u64>,
    ) -> Self {
        let max_card = face_set
            .iter()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0);
        let mut by_card: Vec<Vec<u64>> = vec![Vec::new(); max_card + 1];
        for &m in &face_set {
            by_card[m.count_ones() as usize].push(m);
        }
        for level in &mut by_card {
            sort_masks_lex(level);
        }
        SimplicialComplex {
            vertices,
            index,
            by_card,
            face_set,
        }
    }

    /// Builds a complex from an already downward-closed set of faces
    /// given by vertex ids. Closure is checked in debug builds.
    pub(crate) fn from_closed_face_list(faces: Vec<Face>) -> Result<Self> {
        let mut vertices: Vec<VertexId> = faces
            .iter()
            .flat_map(|f| f.vertices().iter().copied())
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        if vertices.len() > 64 {
            return Err(Error::domain(format!(
                "complex has {} vertices; at most 64 are supported",
                vertices.len()
            )));
        }
        let index: HashMap<VertexId, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut face_set: HashSet<u64> = HashSet::from([0]);
        for f in &faces {
            let mask = f
                .vertices()
                .iter()
                .fold(0u64, |m, v| m | (1u64 << index[v]));
            face_set.insert(mask);
        }
        debug_assert!(
            face_set.iter().all(|&m| {
                (0..64)
                    .filter(|b| m >> b & 1 == 1)
                    .all(|b| face_set.contains(&(m & !(1 << b))))
            }),
            "face list is not downward closed"
        );
        Ok(Self::from_parts(vertices, index, face_set))
    }

    /// Rebuilds a complex over the same universe from a subset of this
    /// complex's face masks (which must be downward closed). Vertices not
    /// appearing as singleton faces are dropped.
    pub(crate) fn rebuilt_from_masks(&self, masks: &HashSet<u64>) -> Self {
        let faces: Vec<Face> = masks.iter().map(|&m| self.face_from_mask(m)).collect();
        Self::from_closed_face_list(faces).expect("vertex count can only shrink")
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.index.contains_key(&v)
    }

    /// Dimension: -1 for the `{∅}` complex.
    pub fn dim(&self) -> isize {
        self.by_card.len() as isize - 2
    }

    pub fn face_count(&self) -> usize {
        self.face_set.len()
    }

    pub fn f_vector(&self) -> FVector {
        FVector(self.by_card.iter().skip(1).map(|l| l.len()).collect())
    }

    /// `f_i` with the reduced convention `f_{-1} = 1`.
    pub fn f(&self, i: isize) -> usize {
        let card = i + 1;
        if card < 0 || card as usize >= self.by_card.len() {
            0
        } else {
            self.by_card[card as usize].len()
        }
    }

    pub(crate) fn by_card(&self) -> &[Vec<u64>] {
        &self.by_card
    }

    pub(crate) fn contains_mask(&self, m: u64) -> bool {
        self.face_set.contains(&m)
    }

    pub(crate) fn mask_of(&self, f: &Face) -> Option<u64> {
        let mut m = 0u64;
        for v in f.vertices() {
            m |= 1u64 << *self.index.get(v)?;
        }
        Some(m)
    }

    pub(crate) fn face_from_mask(&self, mut m: u64) -> Face {
        let mut vs = Vec::with_capacity(m.count_ones() as usize);
        while m != 0 {
            let b = m.trailing_zeros() as usize;
            vs.push(self.vertices[b]);
            m &= m - 1;
        }
        Face { vertices: vs }
    }

    pub(crate) fn ids_from_mask(&self, m: u64) -> Vec<VertexId> {
        self.face_from_mask(m).vertices.clone()
    }

    pub fn is_face(&self, f: &Face) -> bool {
        match self.mask_of(f) {
            Some(m) => self.face_set.contains(&m),
            None => false,
        }
    }

    /// All faces, ascending by cardinality then lexicographically.
    pub fn faces(&self) -> impl Iterator<Item = Face> + '_ {
        self.by_card
            .iter()
            .flatten()
            .map(|&m| self.face_from_mask(m))
    }

    /// Inclusion-maximal faces, ascending by cardinality then lex.
    pub fn facets(&self) -> Vec<Face> {
        let mut covered: HashSet<u64> = HashSet::new();
        for &m in self.face_set.iter() {
            let mut rest = m;
            while rest != 0 {
                let b = rest.trailing_zeros();
                covered.insert(m & !(1u64 << b));
                rest &= rest - 1;
            }
        }
        self.by_card
            .iter()
            .flatten()
            .filter(|&&m| !covered.contains(&m))
            .map(|&m| self.face_from_mask(m))
            .collect()
    }

    /// Number of edges containing `v`.
    pub fn degree(&self, v: VertexId) -> Result<usize> {
        let &b = self
            .index
            .get(&v)
            .ok_or_else(|| Error::domain(format!("vertex {v} is not in the complex")))?;
        let bit = 1u64 << b;
        Ok(self
            .by_card
            .get(2)
            .map(|edges| edges.iter().filter(|&&e| e & bit != 0).count())
            .unwrap_or(0))
    }

    /// Neighbor bitmask of a dense vertex index in the 1-skeleton.
    pub(crate) fn neighbors_mask(&self, dense: usize) -> u64 {
        let bit = 1u64 << dense;
        let mut m = 0u64;
        if let Some(edges) = self.by_card.get(2) {
            for &e in edges {
                if e & bit != 0 {
                    m |= e & !bit;
                }
            }
        }
        m
    }

    /// The link of `f`: faces `{G - f : f ⊆ G ∈ Γ}` on the vertices that
    /// actually cobound with `f`. `link(c, ∅) = c`.
    pub fn link(&self, f: &Face) -> Result<SimplicialComplex> {
        let fm = self
            .mask_of(f)
            .filter(|m| self.face_set.contains(m))
            .ok_or_else(|| Error::domain(format!("face {f} is not in the complex")))?;
        if fm == 0 {
            return Ok(self.clone());
        }
        let faces: Vec<Face> = self
            .face_set
            .iter()
            .filter(|&&g| g & fm == fm)
            .map(|&g| self.face_from_mask(g & !fm))
            .collect();
        SimplicialComplex::from_closed_face_list(faces)
    }

    /// The induced subcomplex on `w ⊆ V`: all faces contained in `w`.
    pub fn induced(&self, w: &[VertexId]) -> Result<SimplicialComplex> {
        let mut wm = 0u64;
        for v in w {
            let &b = self
                .index
                .get(v)
                .ok_or_else(|| Error::domain(format!("vertex {v} is not in the complex")))?;
            wm |= 1u64 << b;
        }
        let faces: Vec<Face> = self
            .face_set
            .iter()
            .filter(|&&g| g & !wm == 0)
            .map(|&g| self.face_from_mask(g))
            .collect();
        SimplicialComplex::from_closed_face_list(faces)
    }

    /// The `i`-skeleton: faces with at most `i + 1` vertices.
    pub fn skeleton(&self, i: usize) -> SimplicialComplex {
        let faces: Vec<Face> = self
            .by_card
            .iter()
            .take(i + 2)
            .flatten()
            .map(|&m| self.face_from_mask(m))
            .collect();
        SimplicialComplex::from_closed_face_list(faces).expect("skeleton cannot add vertices")
    }

    /// True iff every clique of the 1-skeleton is a face; equivalently,
    /// every minimal non-face has two vertices.
    pub fn is_flag(&self) -> bool {
        let n = self.vertices.len();
        let adj: Vec<u64> = (0..n).map(|v| self.neighbors_mask(v)).collect();
        // Grow cliques one vertex at a time, in increasing dense order.
        // Every minimal non-face is reached through its face prefixes, so
        // the first clique that is not a face witnesses non-flagness.
        let mut stack: Vec<(u64, u64)> = vec![(0u64, (1u64 << n).wrapping_sub(1))];
        while let Some((clique, cand)) = stack.pop() {
            let mut rest = cand;
            while rest != 0 {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let next = clique | (1u64 << b);
                if !self.face_set.contains(&next) {
                    return false;
                }
                let higher = !((1u64 << (b + 1)) - 1);
                stack.push((next, cand & adj[b] & higher));
            }
        }
        true
    }

    /// Adjoins two fresh cone points `u`, `v`: faces are `F`, `F ∪ {u}`,
    /// and `F ∪ {v}` for every face `F`; no face contains both.
    pub fn suspension(&self, u: VertexId, v: VertexId) -> Result<SimplicialComplex> {
        if u == v {
            return Err(Error::domain("suspension points must be distinct"));
        }
        for w in [u, v] {
            if self.contains_vertex(w) {
                return Err(Error::domain(format!("vertex {w} already present")));
            }
        }
        let mut faces = Vec::with_capacity(3 * self.face_set.len());
        for f in self.faces() {
            for apex in [None, Some(u), Some(v)] {
                let mut vs = f.vertices().to_vec();
                if let Some(a) = apex {
                    vs.push(a);
                }
                faces.push(Face::new(vs).expect("fresh apex cannot collide"));
            }
        }
        SimplicialComplex::from_closed_face_list(faces)
    }
}

/// The clique (flag) completion of a graph: every clique becomes a face.
pub fn flag_completion(g: &SimplicialComplex) -> Result<SimplicialComplex> {
    if g.dim() > 1 {
        return Err(Error::domain(format!(
            "flag completion takes a graph; input has dimension {}",
            g.dim()
        )));
    }
    let n = g.vertex_count();
    let adj: Vec<u64> = (0..n).map(|v| g.neighbors_mask(v)).collect();
    let mut cliques: Vec<Face> = Vec::new();
    let mut stack: Vec<(u64, u64)> = vec![(0u64, (1u64 << n).wrapping_sub(1))];
    while let Some((clique, cand)) = stack.pop() {
        cliques.push(g.face_from_mask(clique));
        let mut rest = cand;
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let higher = !((1u64 << (b + 1)) - 1);
            stack.push((clique | (1u64 << b), cand & adj[b] & higher));
        }
    }
    SimplicialComplex::from_closed_face_list(cliques)
}
