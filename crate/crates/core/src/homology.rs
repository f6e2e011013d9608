//! Exact reduced simplicial homology over prime fields, computed from
//! boundary-matrix ranks of the augmented chain complex.
//!
//! `dim H̃_q = f_q − rank ∂_q − rank ∂_{q+1}`, with `f_{-1} = 1` and the
//! augmentation `∂_0` sending every vertex to the empty face. That makes
//! `H̃_{-1}` one-dimensional exactly for the `{∅}` complex, the convention
//! Hochster-style bookkeeping needs. Ranks come from dense Gaussian
//! elimination: a bit-packed kernel over GF(2) and a generic one mod `p`.

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// A prime field GF(p).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2
            || (2..p)
                .take_while(|d| d * d <= p)
                .any(|d| p.is_multiple_of(d))
        {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::domain("field characteristic too large"));
        }
        Ok(PrimeField { p })
    }

    pub const GF2: PrimeField = PrimeField { p: 2 };
    pub const GF3: PrimeField = PrimeField { p: 3 };
    pub const GF5: PrimeField = PrimeField { p: 5 };

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl std::fmt::Display for PrimeField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

/// The matrix of `∂_i` in the bases of `(i-1)`- and `i`-faces (increasing
/// vertex order), stored column-sparse as `(row, ±1)` entries.
#[derive(Clone, Debug)]
pub struct BoundaryMatrix {
    pub rows: usize,
    pub cols: usize,
    pub field: PrimeField,
    cols_entries: Vec<Vec<(usize, i8)>>,
}

impl BoundaryMatrix {
    pub fn entries_of_column(&self, col: usize) -> &[(usize, i8)] {
        &self.cols_entries[col]
    }

    /// Entry as a field element in `0..p`.
    pub fn entry(&self, row: usize, col: usize) -> u64 {
        for &(r, s) in &self.cols_entries[col] {
            if r == row {
                return signed_to_field(s, self.field.p);
            }
        }
        0
    }
}

fn signed_to_field(s: i8, p: u64) -> u64 {
    if s >= 0 {
        s as u64 % p
    } else {
        (p - ((-s) as u64 % p)) % p
    }
}

/// Builds `∂_i` for a complex: columns are the `i`-faces, rows the
/// `(i-1)`-faces, with the empty face as the single row at `i = 0`.
pub fn boundary_matrix(
    c: &SimplicialComplex,
    i: usize,
    field: PrimeField,
) -> Result<BoundaryMatrix> {
    if i as isize > c.dim() {
        return Err(Error::domain(format!(
            "boundary index {i} exceeds dimension {}",
            c.dim()
        )));
    }
    let cols_masks = &c.by_card()[i + 1];
    let rows_masks = &c.by_card()[i];
    let row_index: std::collections::HashMap<u64, usize> = rows_masks
        .iter()
        .enumerate()
        .map(|(k, &m)| (m, k))
        .collect();
    let cols_entries = cols_masks
        .iter()
        .map(|&m| column_of(m, &row_index))
        .collect();
    Ok(BoundaryMatrix {
        rows: rows_masks.len(),
        cols: cols_masks.len(),
        field,
        cols_entries,
    })
}

/// Boundary column of a face mask: removing the k-th smallest vertex
/// carries the sign (−1)^k.
fn column_of(mask: u64, row_index: &std::collections::HashMap<u64, usize>) -> Vec<(usize, i8)> {
    let mut entries = Vec::with_capacity(mask.count_ones() as usize);
    let mut rest = mask;
    let mut k = 0u32;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        let sub = mask & !bit;
        let row = row_index[&sub];
        entries.push((row, if k.is_multiple_of(2) { 1 } else { -1 }));
        rest &= rest - 1;
        k += 1;
    }
    entries
}

/// Rank over the matrix's field; 0 for an empty matrix.
pub fn rank(m: &BoundaryMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    if m.field.p == 2 {
        let words = m.rows.div_ceil(64);
        let mut rows: Vec<Vec<u64>> = (0..m.cols).map(|_| vec![0u64; words]).collect();
        for (col, entries) in m.cols_entries.iter().enumerate() {
            for &(r, _) in entries {
                rows[col][r / 64] ^= 1u64 << (r % 64);
            }
        }
        rank_gf2(rows)
    } else {
        let mut rows: Vec<Vec<u64>> = (0..m.cols).map(|_| vec![0u64; m.rows]).collect();
        for (col, entries) in m.cols_entries.iter().enumerate() {
            for &(r, s) in entries {
                rows[col][r] = signed_to_field(s, m.field.p);
            }
        }
        rank_modp(rows, m.field.p)
    }
}

/// Row-echelon rank of bit rows over GF(2). The elimination treats each
/// input row as a vector; transposition does not change rank.
pub(crate) fn rank_gf2(mut rows: Vec<Vec<u64>>) -> usize {
    let words = rows.first().map(Vec::len).unwrap_or(0);
    let mut rank = 0;
    for word in 0..words {
        for bit in 0..64 {
            let mask = 1u64 << bit;
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][word] & mask != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let (pivot_row, rest) = {
                let (a, b) = rows.split_at_mut(rank + 1);
                (&a[rank], b)
            };
            for row in rest.iter_mut() {
                if row[word] & mask != 0 {
                    for w in word..words {
                        row[w] ^= pivot_row[w];
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                return rank;
            }
        }
    }
    rank
}

/// Gaussian elimination rank mod an odd prime.
pub(crate) fn rank_modp(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let width = rows.first().map(Vec::len).unwrap_or(0);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = mod_inverse(rows[rank][col] % p, p);
        for v in rows[rank].iter_mut().skip(col) {
            *v = *v * inv % p;
        }
        let (pivot_row, rest) = {
            let (a, b) = rows.split_at_mut(rank + 1);
            (a[rank].clone(), b)
        };
        for row in rest.iter_mut() {
            let factor = row[col] % p;
            if factor != 0 {
                for w in col..width {
                    row[w] = (row[w] + (p - factor) * pivot_row[w]) % p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            return rank;
        }
    }
    rank
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p-2) = a^{-1}.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Reduced Betti numbers `dim H̃_{-1} .. dim H̃_{d-1}` over one field.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct BettiVector {
    pub field: PrimeField,
    /// Index 0 holds `dim H̃_{-1}`.
    dims: Vec<usize>,
}

impl BettiVector {
    pub fn dim(&self, q: isize) -> usize {
        let idx = q + 1;
        if idx < 0 || idx as usize >= self.dims.len() {
            0
        } else {
            self.dims[idx as usize]
        }
    }

    /// Pairs `(q, dim H̃_q)` for q = -1 .. d-1.
    pub fn entries(&self) -> impl Iterator<Item = (isize, usize)> + '_ {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &d)| (i as isize - 1, d))
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }
}

// ---------------------------------------------------------------------
// Fast mask-level kernels shared by the search modules. They operate on
// per-cardinality face mask lists filtered by a vertex mask, avoiding
// intermediate complex construction.
// ---------------------------------------------------------------------

/// Rank of the boundary map from faces of cardinality `card` (those in
/// `cols`, restricted to `within`) down to cardinality `card - 1`.
pub(crate) fn rank_boundary_masks(
    cols: &[u64],
    rows: &[u64],
    within: u64,
    card: usize,
    p: u64,
) -> usize {
    if card == 0 {
        return 0;
    }
    let filtered_cols: Vec<u64> = cols.iter().copied().filter(|&m| m & !within == 0).collect();
    if filtered_cols.is_empty() {
        return 0;
    }
    if card == 1 {
        // Augmentation: a single all-ones row has rank one.
        return 1;
    }
    let filtered_rows: Vec<u64> = rows.iter().copied().filter(|&m| m & !within == 0).collect();
    let row_index: std::collections::HashMap<u64, usize> = filtered_rows
        .iter()
        .enumerate()
        .map(|(k, &m)| (m, k))
        .collect();

    if p == 2 {
        let words = filtered_rows.len().div_ceil(64);
        let mut bit_rows: Vec<Vec<u64>> = Vec::with_capacity(filtered_cols.len());
        for &m in &filtered_cols {
            let mut row = vec![0u64; words];
            let mut rest = m;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                let r = row_index[&(m & !bit)];
                row[r / 64] ^= 1u64 << (r % 64);
                rest &= rest - 1;
            }
            bit_rows.push(row);
        }
        rank_gf2(bit_rows)
    } else {
        let mut dense: Vec<Vec<u64>> = Vec::with_capacity(filtered_cols.len());
        for &m in &filtered_cols {
            let mut row = vec![0u64; filtered_rows.len()];
            let mut rest = m;
            let mut k = 0u32;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                let r = row_index[&(m & !bit)];
                row[r] = if k.is_multiple_of(2) { 1 } else { p - 1 };
                rest &= rest - 1;
                k += 1;
            }
            dense.push(row);
        }
        rank_modp(dense, p)
    }
}

/// `dim H̃_q` of the subcomplex of `by_card` induced on the vertex mask
/// `within`. `by_card` must be downward closed; only cardinalities
/// `q .. q+2` are consulted for `q >= 1`.
pub(crate) fn betti_q_masks(by_card: &[Vec<u64>], within: u64, q: isize, p: u64) -> usize {
    let f = |card: isize| -> usize {
        if card < 0 || card as usize >= by_card.len() {
            0
        } else {
            by_card[card as usize]
                .iter()
                .filter(|&&m| m & !within == 0)
                .count()
        }
    };
    if q < -1 {
        return 0;
    }
    if q == -1 {
        return if f(1) == 0 { 1 } else { 0 };
    }
    if q == 0 {
        let vertices: Vec<u64> = by_card
            .get(1)
            .map(|l| l.iter().copied().filter(|&m| m & !within == 0).collect())
            .unwrap_or_default();
        if vertices.is_empty() {
            return 0;
        }
        let comps = component_count(
            &vertices,
            by_card.get(2).map(Vec::as_slice).unwrap_or(&[]),
            within,
        );
        return comps - 1;
    }
    let q = q as usize;
    let fq = f(q as isize + 1);
    if fq == 0 {
        return 0;
    }
    let empty: Vec<u64> = Vec::new();
    let level = |card: usize| -> &[u64] { by_card.get(card).map(Vec::as_slice).unwrap_or(&empty) };
    let rank_q = rank_boundary_masks(level(q + 1), level(q), within, q + 1, p);
    let rank_q1 = rank_boundary_masks(level(q + 2), level(q + 1), within, q + 2, p);
    fq - rank_q - rank_q1
}

fn component_count(vertex_masks: &[u64], edge_masks: &[u64], within: u64) -> usize {
    let mut parent: std::collections::HashMap<u64, u64> =
        vertex_masks.iter().map(|&m| (m, m)).collect();
    fn find(parent: &mut std::collections::HashMap<u64, u64>, mut x: u64) -> u64 {
        while parent[&x] != x {
            let up = parent[&parent[&x]];
            parent.insert(x, up);
            x = up;
        }
        x
    }
    for &e in edge_masks {
        if e & !within != 0 {
            continue;
        }
        let a = e & e.wrapping_neg();
        let b = e & !a;
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent.insert(ra, rb);
        }
    }
    let mut roots = std::collections::HashSet::new();
    for &v in vertex_masks {
        let r = find(&mut parent, v);
        roots.insert(r);
    }
    roots.len()
}

/// Full reduced Betti vector (q = -1 .. d-1) of the subcomplex induced on
/// `within`, computing each boundary rank once.
pub(crate) fn betti_vector_masks(by_card: &[Vec<u64>], within: u64, p: u64) -> Vec<usize> {
    let filtered: Vec<Vec<u64>> = by_card
        .iter()
        .map(|level| {
            level
                .iter()
                .copied()
                .filter(|&m| m & !within == 0)
                .collect()
        })
        .collect();
    let top = filtered.iter().rposition(|l| !l.is_empty()).unwrap_or(0);
    // ranks[i] = rank ∂_i for i = 0..=top-1 (maps C_i -> C_{i-1})
    let mut ranks = vec![0usize; top + 2];
    for card in 1..=top {
        let empty: Vec<u64> = Vec::new();
        let rows = filtered.get(card - 1).unwrap_or(&empty);
        ranks[card] = rank_boundary_masks(&filtered[card], rows, within, card, p);
    }
    let mut dims = Vec::with_capacity(top + 1);
    for card in 0..=top {
        let f = filtered[card].len();
        let below = ranks[card];
        let above = ranks.get(card + 1).copied().unwrap_or(0);
        dims.push(f - below - above);
    }
    dims
}

/// `dim H̃_q(c; GF(p))`. Accepts `q = -1`; returns 0 above the dimension.
pub fn reduced_betti(c: &SimplicialComplex, q: isize, field: PrimeField) -> usize {
    let within = u64::MAX;
    betti_q_masks(c.by_card(), within, q, field.modulus())
}

/// All reduced Betti numbers of `c` for q = -1 .. d-1.
pub fn betti_vector(c: &SimplicialComplex, field: PrimeField) -> BettiVector {
    BettiVector {
        field,
        dims: betti_vector_masks(c.by_card(), u64::MAX, field.modulus()),
    }
}
