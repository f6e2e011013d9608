//! Generalized girth: the fewest vertices `|W|` such that some link
//! `lk(F)` has an induced subcomplex on `W` with nonvanishing reduced
//! homology in a fixed degree. For graphs and degree 1 this is the usual
//! girth. Searches ascend by `|W|` and return certifying witnesses.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize, Serializer};

use crate::complex::{sort_masks_lex, Face, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::homology::{betti_q_masks, PrimeField};

/// A girth-type minimum: a positive integer or infinity.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GirthValue {
    Finite(u32),
    Infinite,
}

impl GirthValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, GirthValue::Finite(_))
    }

    pub fn finite(&self) -> Option<u32> {
        match self {
            GirthValue::Finite(v) => Some(*v),
            GirthValue::Infinite => None,
        }
    }
}

impl PartialOrd for GirthValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GirthValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use GirthValue::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinite) => std::cmp::Ordering::Less,
            (Infinite, Finite(_)) => std::cmp::Ordering::Greater,
            (Infinite, Infinite) => std::cmp::Ordering::Equal,
        }
    }
}

impl std::fmt::Display for GirthValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GirthValue::Finite(v) => write!(f, "{v}"),
            GirthValue::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for GirthValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GirthValue::Finite(v) => s.serialize_u32(*v),
            GirthValue::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for GirthValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(|x| GirthValue::Finite(x as u32))
                .ok_or_else(|| DeError::custom("girth must be a non-negative integer")),
            serde_json::Value::String(s) if s == "inf" => Ok(GirthValue::Infinite),
            _ => Err(DeError::custom("girth must be an integer or \"inf\"")),
        }
    }
}

/// A girth value with its certificate: the face `F` and vertex set `W`
/// with `H̃_{p-1}(lk(F)[W]) ≠ 0` over the recorded field. For infinite
/// girth both are empty.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct GirthWitness {
    #[serde(rename = "p_minus_1")]
    pub degree: usize,
    #[serde(rename = "girth")]
    pub value: GirthValue,
    #[serde(rename = "F", serialize_with = "serialize_face")]
    pub witness_face: Face,
    #[serde(rename = "W")]
    pub witness_set: Vec<VertexId>,
    #[serde(serialize_with = "serialize_field")]
    pub field: PrimeField,
}

fn serialize_face<S: Serializer>(f: &Face, s: S) -> std::result::Result<S::Ok, S::Error> {
    f.vertices().serialize(s)
}

fn serialize_field<S: Serializer>(f: &PrimeField, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(f.modulus())
}

/// Knobs shared by every homology-driven search.
#[derive(Clone, Debug)]
pub struct SearchParams {
    pub field: PrimeField,
    /// Maximum number of induced-subcomplex homology evaluations.
    pub budget: u64,
    /// Worker threads per search level; 1 means fully serial. Results are
    /// identical for any thread count.
    pub threads: usize,
    /// Vertex cap for the full-subset Hochster sweep.
    pub hochster_max_n: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            field: PrimeField::GF2,
            budget: 1_000_000,
            threads: 1,
            hochster_max_n: 20,
        }
    }
}

impl SearchParams {
    pub fn with_field(field: PrimeField) -> Self {
        SearchParams {
            field,
            ..Default::default()
        }
    }
}

/// Evaluations are charged in blocks so serial and threaded runs consume
/// the budget identically.
const EVAL_BLOCK: usize = 256;

pub(crate) struct Countdown {
    remaining: AtomicU64,
    initial: u64,
}

impl Countdown {
    pub(crate) fn new(budget: u64) -> Self {
        Countdown {
            remaining: AtomicU64::new(budget),
            initial: budget,
        }
    }

    fn try_take(&self, k: u64) -> bool {
        self.remaining
            .fetch_update(Ordering::SeqCst, Ordering::SeqCst, |cur| cur.checked_sub(k))
            .is_ok()
    }

    fn exhausted_error(&self, certified_above: Option<u32>) -> Error {
        Error::Infeasible {
            budget: self.initial,
            certified_above,
        }
    }
}

/// Per-face link data in the parent complex's coordinates.
struct LinkData {
    face: Face,
    /// Dense indices of the link's vertices, ascending.
    vlist: Vec<usize>,
    /// Link faces by cardinality (masks in parent coordinates), capped at
    /// the cardinalities homology in the search degree consults.
    by_card: Vec<Vec<u64>>,
}

struct Search<'a> {
    complex: &'a SimplicialComplex,
    degree: usize,
    field: PrimeField,
    threads: usize,
    links: Vec<LinkData>,
    countdown: Countdown,
    cache: Mutex<HashMap<Vec<u64>, bool>>,
}

impl<'a> Search<'a> {
    fn new(
        complex: &'a SimplicialComplex,
        degree: usize,
        params: &SearchParams,
        empty_face_only: bool,
    ) -> Self {
        let card_cap = degree + 2;
        let mut links = Vec::new();
        let face_masks: Vec<u64> = if empty_face_only {
            vec![0]
        } else {
            complex.by_card().iter().flatten().copied().collect()
        };
        for fm in face_masks {
            let fcard = fm.count_ones() as usize;
            let mut by_card: Vec<Vec<u64>> = vec![Vec::new(); card_cap + 1];
            for (card, level) in complex.by_card().iter().enumerate() {
                if card < fcard || card - fcard > card_cap {
                    continue;
                }
                for &g in level {
                    if g & fm == fm {
                        by_card[card - fcard].push(g & !fm);
                    }
                }
            }
            for level in &mut by_card {
                sort_masks_lex(level);
            }
            let vlist: Vec<usize> = by_card
                .get(1)
                .map(|singles| {
                    singles
                        .iter()
                        .map(|m| m.trailing_zeros() as usize)
                        .collect()
                })
                .unwrap_or_default();
            let mut vlist = vlist;
            vlist.sort_unstable();
            links.push(LinkData {
                face: complex.face_from_mask(fm),
                vlist,
                by_card,
            });
        }
        Search {
            complex,
            degree,
            field: params.field,
            threads: params.threads.max(1),
            links,
            countdown: Countdown::new(params.budget),
            cache: Mutex::new(HashMap::new()),
        }
    }

    fn evaluate(&self, link: &LinkData, wmask: u64) -> bool {
        let key = cache_key(&link.by_card, wmask, self.degree);
        if let Some(&hit) = self.cache.lock().unwrap().get(&key) {
            return hit;
        }
        let nonzero = betti_q_masks(
            &link.by_card,
            wmask,
            self.degree as isize,
            self.field.modulus(),
        ) > 0;
        self.cache.lock().unwrap().insert(key, nonzero);
        nonzero
    }

    /// Scans one link at one level; returns the lexicographically least
    /// hitting `W` mask, if any.
    fn scan_link(&self, link: &LinkData, w_size: usize) -> Result<Option<u64>> {
        let mut combos = Combinations::new(&link.vlist, w_size);
        let mut block: Vec<u64> = Vec::with_capacity(EVAL_BLOCK);
        loop {
            block.clear();
            while block.len() < EVAL_BLOCK {
                match combos.next_mask() {
                    Some(m) => block.push(m),
                    None => break,
                }
            }
            if block.is_empty() {
                return Ok(None);
            }
            if !self.countdown.try_take(block.len() as u64) {
                return Err(self.countdown.exhausted_error(Some(w_size as u32 - 1)));
            }
            let hit = if self.threads <= 1 || block.len() < 2 * self.threads {
                block.iter().position(|&m| self.evaluate(link, m))
            } else {
                self.scan_block_threaded(link, &block)
            };
            if let Some(i) = hit {
                return Ok(Some(block[i]));
            }
        }
    }

    fn scan_block_threaded(&self, link: &LinkData, block: &[u64]) -> Option<usize> {
        let best = AtomicU64::new(u64::MAX);
        std::thread::scope(|scope| {
            for t in 0..self.threads {
                let best = &best;
                scope.spawn(move || {
                    for (i, &m) in block.iter().enumerate().skip(t).step_by(self.threads) {
                        if (i as u64) >= best.load(Ordering::Relaxed) {
                            break;
                        }
                        if self.evaluate(link, m) {
                            best.fetch_min(i as u64, Ordering::SeqCst);
                            break;
                        }
                    }
                });
            }
        });
        match best.load(Ordering::SeqCst) {
            u64::MAX => None,
            i => Some(i as usize),
        }
    }

    /// Full ascending search up to supports of size `max_w`.
    fn run(&self, max_w: usize) -> Result<Option<(usize, u64, usize)>> {
        let floor = self.degree + 2;
        for w_size in floor..=max_w {
            let mut any_candidate = false;
            for (idx, link) in self.links.iter().enumerate() {
                if link.vlist.len() < w_size {
                    continue;
                }
                any_candidate = true;
                if let Some(wmask) = self.scan_link(link, w_size)? {
                    return Ok(Some((idx, wmask, w_size)));
                }
            }
            if !any_candidate {
                break;
            }
        }
        Ok(None)
    }

    fn witness(&self, hit: Option<(usize, u64, usize)>) -> GirthWitness {
        match hit {
            Some((idx, wmask, w_size)) => GirthWitness {
                degree: self.degree,
                value: GirthValue::Finite(w_size as u32),
                witness_face: self.links[idx].face.clone(),
                witness_set: self.complex.ids_from_mask(wmask),
                field: self.field,
            },
            None => GirthWitness {
                degree: self.degree,
                value: GirthValue::Infinite,
                witness_face: Face::empty(),
                witness_set: Vec::new(),
                field: self.field,
            },
        }
    }
}

fn cache_key(by_card: &[Vec<u64>], within: u64, degree: usize) -> Vec<u64> {
    let lo = degree.max(1);
    let mut key = Vec::new();
    for card in lo..=degree + 2 {
        if let Some(level) = by_card.get(card) {
            for &m in level {
                if m & !within == 0 {
                    key.push(m);
                }
            }
        }
        key.push(u64::MAX); // level separator
    }
    key
}

/// Lexicographic k-combinations of a sorted dense-index list, as masks.
struct Combinations<'a> {
    items: &'a [usize],
    idx: Vec<usize>,
    done: bool,
}

impl<'a> Combinations<'a> {
    fn new(items: &'a [usize], k: usize) -> Self {
        let done = k > items.len();
        Combinations {
            items,
            idx: (0..k).collect(),
            done,
        }
    }

    fn next_mask(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        let mask = self
            .idx
            .iter()
            .fold(0u64, |m, &i| m | (1u64 << self.items[i]));
        // advance to the next combination
        let k = self.idx.len();
        let n = self.items.len();
        if k == 0 {
            self.done = true;
            return Some(mask);
        }
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] != i + n - k {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(mask)
    }
}

/// `gr_{p-1}`: minimal `|W|` over faces `F` (including ∅) and vertex sets
/// `W ⊆ V(lk(F))` with `H̃_{p-1}(lk(F)[W]) ≠ 0`; infinite when none
/// exists. The search ascends by `|W|` and returns the first hit, faces
/// ordered by cardinality then lexicographically, `W` lexicographically.
pub fn girth(c: &SimplicialComplex, degree: usize, params: &SearchParams) -> Result<GirthWitness> {
    if no_support_possible(c, degree) {
        return Ok(infinite_witness(degree, params.field));
    }
    // Flag complexes admit a minimal witness with F = ∅, so the face loop
    // collapses to the empty face.
    let empty_only = c.is_flag();
    let search = Search::new(c, degree, params, empty_only);
    let hit = search.run(c.vertex_count())?;
    Ok(search.witness(hit))
}

/// Degree-q homology needs a q-face somewhere, so a complex without any
/// cannot have finite girth in that degree.
fn no_support_possible(c: &SimplicialComplex, degree: usize) -> bool {
    c.f(degree as isize) == 0
}

fn infinite_witness(degree: usize, field: PrimeField) -> GirthWitness {
    GirthWitness {
        degree,
        value: GirthValue::Infinite,
        witness_face: Face::empty(),
        witness_set: Vec::new(),
        field,
    }
}

/// Girth of a flag complex, searching only `F = ∅`.
pub fn girth_flag_fast(
    c: &SimplicialComplex,
    degree: usize,
    params: &SearchParams,
) -> Result<GirthWitness> {
    if !c.is_flag() {
        return Err(Error::domain("girth_flag_fast requires a flag complex"));
    }
    if no_support_possible(c, degree) {
        return Ok(infinite_witness(degree, params.field));
    }
    let search = Search::new(c, degree, params, true);
    let hit = search.run(c.vertex_count())?;
    Ok(search.witness(hit))
}

/// Whether `gr_{p-1}(c) > k`: drains every support size up to `k`.
pub fn girth_exceeds(
    c: &SimplicialComplex,
    degree: usize,
    k: usize,
    params: &SearchParams,
) -> Result<bool> {
    if no_support_possible(c, degree) {
        return Ok(true);
    }
    let search = Search::new(c, degree, params, c.is_flag());
    Ok(search.run(k.min(c.vertex_count()))?.is_none())
}

/// Per-degree girths for `p-1 = 0 .. dim`, re-verifying the descending
/// chain `gr_{p-j} ≤ gr_p − j` before returning.
pub fn girth_all(c: &SimplicialComplex, params: &SearchParams) -> Result<Vec<GirthWitness>> {
    let mut out = Vec::new();
    for degree in 0..=c.dim().max(0) as usize {
        if c.dim() < 0 {
            break;
        }
        out.push(girth(c, degree, params)?);
    }
    for (q, w) in out.iter().enumerate() {
        if let GirthValue::Finite(g) = w.value {
            for j in 1..=q {
                match out[q - j].value {
                    GirthValue::Finite(h) if h + j as u32 <= g => {}
                    other => {
                        return Err(Error::Inconsistency(format!(
                            "girth chain violated: gr_{} = {g} but gr_{} = {other}",
                            q,
                            q - j
                        )));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Minimal `|W|` with `H̃_q(c[W]) ≠ 0` and a witness: the `F = ∅` slice
/// of the girth search.
pub fn minimal_homology_support(
    c: &SimplicialComplex,
    degree: usize,
    params: &SearchParams,
) -> Result<(GirthValue, Option<Vec<VertexId>>)> {
    if no_support_possible(c, degree) {
        return Ok((GirthValue::Infinite, None));
    }
    let search = Search::new(c, degree, params, true);
    match search.run(c.vertex_count())? {
        Some((_, wmask, w_size)) => Ok((
            GirthValue::Finite(w_size as u32),
            Some(c.ids_from_mask(wmask)),
        )),
        None => Ok((GirthValue::Infinite, None)),
    }
}

/// Classical graph girth via breadth-first search from every vertex.
pub fn graph_girth(g: &SimplicialComplex) -> Result<GirthValue> {
    if g.dim() > 1 {
        return Err(Error::domain(format!(
            "graph girth requires dimension <= 1, got {}",
            g.dim()
        )));
    }
    let n = g.vertex_count();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut m = g.neighbors_mask(v);
            let mut out = Vec::new();
            while m != 0 {
                out.push(m.trailing_zeros() as usize);
                m &= m - 1;
            }
            out
        })
        .collect();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for src in 0..n {
        dist.fill(usize::MAX);
        parent.fill(usize::MAX);
        queue.clear();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(x) = queue.pop_front() {
            if best != usize::MAX && 2 * dist[x] + 1 >= best {
                continue;
            }
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if parent[x] != y {
                    best = best.min(dist[x] + dist[y] + 1);
                }
            }
        }
        if best == 3 {
            break;
        }
    }
    Ok(if best == usize::MAX {
        GirthValue::Infinite
    } else {
        GirthValue::Finite(best as u32)
    })
}

/// The cycle-shortcut test: given a closed walk `v_1 .. v_r` whose cyclic
/// consecutive pairs are edges, returns true iff at most one index `i`
/// has `{v_{i-1}, v_i, v_{i+1}}` a face. When true, `gr_1(c) ≤ r`.
pub fn check_cycle_hypothesis(c: &SimplicialComplex, walk: &[VertexId]) -> Result<bool> {
    let r = walk.len();
    if r < 3 {
        return Err(Error::domain("a closed walk needs at least three vertices"));
    }
    for i in 0..r {
        let (a, b) = (walk[i], walk[(i + 1) % r]);
        let edge = Face::new(vec![a, b])
            .map_err(|_| Error::domain(format!("repeated vertex {a} makes no edge")))?;
        if !c.is_face(&edge) {
            return Err(Error::domain(format!("walk step {a}-{b} is not an edge")));
        }
    }
    let mut filled = 0usize;
    for i in 0..r {
        let triple: std::collections::BTreeSet<VertexId> =
            [walk[(i + r - 1) % r], walk[i], walk[(i + 1) % r]]
                .into_iter()
                .collect();
        let f = Face::new(triple.into_iter().collect()).expect("set has no duplicates");
        if c.is_face(&f) {
            filled += 1;
        }
    }
    Ok(filled <= 1)
}

/// Re-checks a witness against its complex: membership, disjointness,
/// support size, and nonvanishing homology over the recorded field.
pub fn verify_witness(c: &SimplicialComplex, w: &GirthWitness) -> Result<bool> {
    match w.value {
        GirthValue::Infinite => Ok(w.witness_set.is_empty()),
        GirthValue::Finite(v) => {
            if w.witness_set.len() != v as usize || !c.is_face(&w.witness_face) {
                return Ok(false);
            }
            if w.witness_set.iter().any(|x| w.witness_face.contains(*x)) {
                return Ok(false);
            }
            let link = c.link(&w.witness_face)?;
            if w.witness_set.iter().any(|x| !link.contains_vertex(*x)) {
                return Ok(false);
            }
            let induced = link.induced(&w.witness_set)?;
            Ok(crate::homology::reduced_betti(&induced, w.degree as isize, w.field) > 0)
        }
    }
}
