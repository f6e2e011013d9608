//! Shared fixtures for the integration suites: named complexes, random
//! downward closures, and independent oracles (BFS girth lives in the
//! library; the brute-force searches here are test-only).

#![allow(dead_code)]

use girthlab::generators::{
    complete_graph, cone, cross_polytope_boundary, cycle_complex, full_simplex, simplex_boundary,
    turan_flag,
};
use girthlab::homology::reduced_betti;
use girthlab::walks::is_non_returning;
use girthlab::{Face, GirthValue, PrimeField, SimplicialComplex, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn face(ids: &[u32]) -> Face {
    Face::from_ids(ids).unwrap()
}

pub fn complex_of(facets: &[&[u32]]) -> SimplicialComplex {
    let fs: Vec<Face> = facets.iter().map(|f| face(f)).collect();
    SimplicialComplex::from_facets(&fs, &[]).unwrap()
}

pub fn octahedron() -> SimplicialComplex {
    cross_polytope_boundary(3).unwrap()
}

pub fn petersen() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0..5u32 {
        facets.push(face(&[i + 1, (i + 1) % 5 + 1]));
        facets.push(face(&[i + 6, (i + 2) % 5 + 6]));
        facets.push(face(&[i + 1, i + 6]));
    }
    SimplicialComplex::from_facets(&facets, &[]).unwrap()
}

/// The Heawood graph from its LCF code [5, -5]^7.
pub fn heawood() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0..14u32 {
        facets.push(face(&[i + 1, (i + 1) % 14 + 1]));
        if i % 2 == 0 {
            facets.push(face(&[i + 1, (i + 5) % 14 + 1]));
        }
    }
    SimplicialComplex::from_facets(&facets, &[]).unwrap()
}

/// The minimal 6-vertex triangulation of the projective plane; its top
/// homology lives only in characteristic 2.
pub fn projective_plane() -> SimplicialComplex {
    let facets: Vec<Face> = [
        [1, 2, 5],
        [1, 2, 6],
        [1, 3, 4],
        [1, 3, 6],
        [1, 4, 5],
        [2, 3, 4],
        [2, 3, 5],
        [2, 4, 6],
        [3, 5, 6],
        [4, 5, 6],
    ]
    .iter()
    .map(|ids| face(ids))
    .collect();
    SimplicialComplex::from_facets(&facets, &[]).unwrap()
}

/// The 7-vertex (Möbius–Kantor) torus: facets {i, i+1, i+3} and
/// {i, i+2, i+3} mod 7.
pub fn torus_7() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0..7u32 {
        facets.push(face(&[i + 1, (i + 1) % 7 + 1, (i + 3) % 7 + 1]));
        facets.push(face(&[i + 1, (i + 2) % 7 + 1, (i + 3) % 7 + 1]));
    }
    SimplicialComplex::from_facets(&facets, &[]).unwrap()
}

pub fn k33() -> SimplicialComplex {
    let mut facets = Vec::new();
    for a in 1..=3u32 {
        for b in 4..=6u32 {
            facets.push(face(&[a, b]));
        }
    }
    SimplicialComplex::from_facets(&facets, &[]).unwrap()
}

pub fn tree() -> SimplicialComplex {
    complex_of(&[&[1, 2], &[2, 3], &[2, 4], &[4, 5], &[4, 6]])
}

pub fn two_squares() -> SimplicialComplex {
    complex_of(&[
        &[1, 2],
        &[2, 3],
        &[3, 4],
        &[1, 4],
        &[5, 6],
        &[6, 7],
        &[7, 8],
        &[5, 8],
    ])
}

/// The named complexes every "whole corpus" property quantifies over.
pub fn corpus() -> Vec<(&'static str, SimplicialComplex)> {
    let mut out: Vec<(&'static str, SimplicialComplex)> = vec![
        (
            "point",
            SimplicialComplex::from_facets(&[], &[VertexId(1)]).unwrap(),
        ),
        (
            "two-points",
            SimplicialComplex::from_facets(&[], &[VertexId(1), VertexId(2)]).unwrap(),
        ),
        ("edge", complex_of(&[&[1, 2]])),
        ("tree", tree()),
        ("k4-graph", complete_graph(4).unwrap()),
        ("k33", k33()),
        ("square", cross_polytope_boundary(2).unwrap()),
        ("two-squares", two_squares()),
        ("triangle-boundary", simplex_boundary(2).unwrap()),
        ("tetrahedron-boundary", simplex_boundary(3).unwrap()),
        ("solid-tetrahedron", full_simplex(3).unwrap()),
        ("octahedron", octahedron()),
        (
            "cone-k4",
            cone(&complete_graph(4).unwrap(), VertexId(9)).unwrap(),
        ),
        ("turan-9-3", turan_flag(9, 3).unwrap()),
        ("projective-plane", projective_plane()),
        ("torus-7", torus_7()),
        ("petersen", petersen()),
        ("heawood", heawood()),
    ];
    for n in 3..=8u32 {
        out.push((
            match n {
                3 => "c3",
                4 => "c4",
                5 => "c5",
                6 => "c6",
                7 => "c7",
                _ => "c8",
            },
            cycle_complex(n).unwrap(),
        ));
    }
    out
}

pub fn corpus_graphs() -> Vec<(&'static str, SimplicialComplex)> {
    corpus().into_iter().filter(|(_, c)| c.dim() <= 1).collect()
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Downward closure of a random facet set on at most `n_max` vertices.
pub fn random_closure(rng: &mut ChaCha8Rng, n_max: u32, max_facets: usize) -> SimplicialComplex {
    let n = rng.random_range(1..=n_max);
    let k = rng.random_range(0..=max_facets);
    let facets: Vec<Face> = (0..k)
        .map(|_| {
            let mut ids: Vec<u32> = (1..=n).filter(|_| rng.random_bool(0.45)).collect();
            if ids.is_empty() {
                ids.push(rng.random_range(1..=n));
            }
            face(&ids)
        })
        .collect();
    let isolated: Vec<VertexId> = (1..=n).map(VertexId).collect();
    SimplicialComplex::from_facets(&facets, &isolated).unwrap()
}

/// Test oracle: exhaustive (F, W) girth search straight from the
/// definition, with no pruning, rerouting, or memoization.
pub fn brute_force_girth(c: &SimplicialComplex, degree: usize, field: PrimeField) -> GirthValue {
    let mut best: Option<usize> = None;
    for f in c.faces() {
        let link = c.link(&f).unwrap();
        let verts = link.vertices().to_vec();
        for bits in 0u64..(1 << verts.len()) {
            let size = bits.count_ones() as usize;
            if best.map(|b| size >= b).unwrap_or(false) {
                continue;
            }
            let w: Vec<VertexId> = verts
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            let induced = link.induced(&w).unwrap();
            if reduced_betti(&induced, degree as isize, field) > 0 {
                best = Some(size);
            }
        }
    }
    best.map(|b| GirthValue::Finite(b as u32))
        .unwrap_or(GirthValue::Infinite)
}

/// Test oracle: recursive enumeration of non-returning walks.
pub fn brute_force_walk_count(c: &SimplicialComplex, u: VertexId, v: VertexId, k: usize) -> u64 {
    fn extend(
        c: &SimplicialComplex,
        walk: &mut Vec<VertexId>,
        target: VertexId,
        left: usize,
        found: &mut u64,
    ) {
        if left == 0 {
            if *walk.last().unwrap() == target && is_non_returning(c, walk).unwrap_or(false) {
                *found += 1;
            }
            return;
        }
        let last = *walk.last().unwrap();
        for w in c.vertices().to_vec() {
            if w != last && c.is_face(&Face::new(vec![last, w]).unwrap()) {
                walk.push(w);
                extend(c, walk, target, left - 1, found);
                walk.pop();
            }
        }
    }
    let mut found = 0;
    let mut walk = vec![u];
    extend(c, &mut walk, v, k, &mut found);
    found
}

/// One criterion of the acceptance gate: collects failures, prints one
/// PASS/FAIL line, and panics with the details on failure.
pub struct Criterion {
    number: usize,
    desc: &'static str,
    failures: Vec<String>,
    started: std::time::Instant,
}

impl Criterion {
    pub fn new(number: usize, desc: &'static str) -> Self {
        Criterion {
            number,
            desc,
            failures: Vec::new(),
            started: std::time::Instant::now(),
        }
    }

    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(msg());
        }
    }

    pub fn finish(self) {
        let verdict = if self.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!(
            "criterion {:2} {verdict} ({:.2?}) — {}",
            self.number,
            self.started.elapsed(),
            self.desc
        );
        assert!(
            self.failures.is_empty(),
            "criterion {} failed:\n{}",
            self.number,
            self.failures.join("\n")
        );
    }
}
