//! The acceptance gate: one test per criterion, each printing a PASS or
//! FAIL line (run with `--nocapture` to see them all).

mod common;

use common::*;
use girthlab::bounds::{a_exponent, moore_check, multiplicity_bound, ExponentTable};
use girthlab::generators::{
    complete_graph, cycle_complex, high_girth_pdim, random_tripartite_2d, simplex_boundary,
    sparsify_for_gr2, Seed,
};
use girthlab::homology::{betti_vector, boundary_matrix, reduced_betti};
use girthlab::stanley_reisner::{betti_table, check_girth_link};
use girthlab::walks::{admissible_arcs, stable_weights, stationarity_residual, tree_lemma_check};
use girthlab::{
    girth, girth_all, girth_exceeds, graph_girth, Error, GirthValue, PrimeField, SearchParams,
    VertexId,
};
use num_traits::ToPrimitive;

fn params() -> SearchParams {
    SearchParams::default()
}

#[test]
fn criterion_01_girth_ground_truth() {
    let mut cr = Criterion::new(1, "girth ground truth on cycles, trees, K4, octahedron");
    for n in 3..=8u32 {
        let c = cycle_complex(n).unwrap();
        let w = girth(&c, 1, &params()).unwrap();
        cr.check(w.value == GirthValue::Finite(n), || {
            format!("girth(C_{n}) = {}", w.value)
        });
        let bfs = graph_girth(&c).unwrap();
        cr.check(bfs == GirthValue::Finite(n), || {
            format!("BFS girth(C_{n}) = {bfs}")
        });
    }
    let t = tree();
    cr.check(
        girth(&t, 1, &params()).unwrap().value == GirthValue::Infinite,
        || "tree girth should be infinite".into(),
    );
    let k4 = complete_graph(4).unwrap();
    cr.check(
        girth(&k4, 1, &params()).unwrap().value == GirthValue::Finite(3),
        || "K4 girth should be 3".into(),
    );
    let oct = octahedron();
    for (degree, expected) in [(0usize, 2u32), (1, 4), (2, 6)] {
        let w = girth(&oct, degree, &params()).unwrap();
        cr.check(w.value == GirthValue::Finite(expected), || {
            format!("octahedron gr_{degree} = {}", w.value)
        });
        let oracle = brute_force_girth(&oct, degree, PrimeField::GF2);
        cr.check(oracle == GirthValue::Finite(expected), || {
            format!("brute-force octahedron gr_{degree} = {oracle}")
        });
    }
    cr.finish();
}

#[test]
fn criterion_02_flag_iff_girth_at_least_four() {
    let mut cr = Criterion::new(
        2,
        "flag <=> gr_1 >= 4 on 600 random closures and the corpus",
    );
    let mut rng = seeded_rng(202);
    for trial in 0..600 {
        let c = random_closure(&mut rng, 5, 4);
        let flag = c.is_flag();
        let g = girth(&c, 1, &params()).unwrap().value;
        let ge4 = g >= GirthValue::Finite(4);
        cr.check(flag == ge4, || {
            format!("trial {trial}: is_flag = {flag} but gr_1 = {g}")
        });
    }
    for (name, c) in corpus() {
        let flag = c.is_flag();
        let g = girth(&c, 1, &params()).unwrap().value;
        cr.check(flag == (g >= GirthValue::Finite(4)), || {
            format!("{name}: is_flag = {flag} but gr_1 = {g}")
        });
    }
    cr.finish();
}

#[test]
fn criterion_03_girth_monotonicity_and_increasing_chain() {
    let mut cr = Criterion::new(
        3,
        "girth monotone under induced subcomplexes and links; descending chain",
    );
    let mut rng = seeded_rng(303);
    for trial in 0..200 {
        let c = random_closure(&mut rng, 7, 5);
        // girth_all re-verifies the chain gr_{p-j} <= gr_p - j internally
        let gs = match girth_all(&c, &params()) {
            Ok(gs) => gs,
            Err(e) => {
                cr.check(false, || format!("trial {trial}: girth_all failed: {e}"));
                continue;
            }
        };
        for (q, w) in gs.iter().enumerate() {
            if let GirthValue::Finite(g) = w.value {
                for j in 1..=q {
                    let lower = gs[q - j].value;
                    cr.check(lower <= GirthValue::Finite(g - j as u32), || {
                        format!("trial {trial}: gr_{q} = {g} but gr_{} = {lower}", q - j)
                    });
                }
            }
        }
        // all W: induced subcomplexes can only increase each girth
        let verts = c.vertices().to_vec();
        for bits in 0u64..(1 << verts.len()) {
            let w: Vec<VertexId> = verts
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            let sub = c.induced(&w).unwrap();
            let sub_gs = girth_all(&sub, &params()).unwrap();
            for (q, sw) in sub_gs.iter().enumerate() {
                if q < gs.len() {
                    cr.check(gs[q].value <= sw.value, || {
                        format!(
                            "trial {trial}: gr_{q} = {} > gr_{q}(c[{w:?}]) = {}",
                            gs[q].value, sw.value
                        )
                    });
                }
            }
        }
        // all F: links can only increase each girth
        for f in c.faces() {
            let link = c.link(&f).unwrap();
            let link_gs = girth_all(&link, &params()).unwrap();
            for (q, lw) in link_gs.iter().enumerate() {
                if q < gs.len() {
                    cr.check(gs[q].value <= lw.value, || {
                        format!(
                            "trial {trial}: gr_{q} = {} > gr_{q}(lk({f})) = {}",
                            gs[q].value, lw.value
                        )
                    });
                }
            }
        }
    }
    cr.finish();
}

#[test]
fn criterion_04_tree_lemma() {
    let mut cr = Criterion::new(
        4,
        "non-returning walk counts obey (d-1)^(r-1); DP = brute force",
    );
    let cases = [
        ("c7", cycle_complex(7).unwrap(), 3usize),
        ("petersen", petersen(), 2),
        ("heawood", heawood(), 2),
    ];
    for (name, c, r) in &cases {
        let report = tree_lemma_check(c, *r, &params()).unwrap();
        cr.check(report.bound == 1, || {
            format!("{name}: bound = {}", report.bound)
        });
        cr.check(report.pass, || {
            format!(
                "{name}: max count {} exceeds bound {}",
                report.max_count, report.bound
            )
        });
        if *name == "heawood" {
            // girth 6 > 2r+1 = 5: the endpoint-disjointness clause applies
            cr.check(report.odd_clause_pass == Some(true), || {
                format!("heawood odd clause = {:?}", report.odd_clause_pass)
            });
        }
        // DP equals enumeration on a sample of pairs at the checked radius
        let verts = c.vertices().to_vec();
        for &u in verts.iter().take(4) {
            for &v in verts.iter().take(4) {
                let dp = girthlab::walks::count_non_returning_walks(c, u, v, *r).unwrap();
                let brute = brute_force_walk_count(c, u, v, *r);
                cr.check(dp == brute, || {
                    format!("{name}: DP {dp} != enumeration {brute} for ({u},{v})")
                });
            }
        }
    }
    cr.finish();
}

#[test]
fn criterion_05_moore_bound_tightness() {
    let mut cr = Criterion::new(
        5,
        "Moore bound: Petersen and Heawood tight, corpus consistent",
    );
    let pet = moore_check(&petersen()).unwrap();
    cr.check(
        pet.pass && pet.bound_value == 10.0 && pet.measured_value == 10.0,
        || {
            format!(
                "petersen: bound {} measured {}",
                pet.bound_value, pet.measured_value
            )
        },
    );
    let hea = moore_check(&heawood()).unwrap();
    cr.check(
        hea.pass && hea.bound_value == 14.0 && hea.measured_value == 14.0,
        || {
            format!(
                "heawood: bound {} measured {}",
                hea.bound_value, hea.measured_value
            )
        },
    );
    for (name, g) in corpus_graphs() {
        let rep = moore_check(&g).unwrap();
        cr.check(rep.pass, || {
            format!(
                "{name}: n = {} below Moore bound {}",
                rep.measured_value, rep.bound_value
            )
        });
    }
    cr.finish();
}

#[test]
fn criterion_06_stable_weights() {
    let mut cr = Criterion::new(
        6,
        "stationary weights: residual <= 1e-8, positive, sums exact",
    );
    let irregular = complex_of(&[
        &[1, 2],
        &[2, 3],
        &[3, 4],
        &[4, 5],
        &[1, 5],
        &[1, 6],
        &[3, 6],
    ]);
    for (name, c) in [
        ("c6", cycle_complex(6).unwrap()),
        ("petersen", petersen()),
        ("irregular", irregular),
    ] {
        let arcs = admissible_arcs(&c, 0.5).unwrap();
        let solved = stable_weights(&c, &arcs, 1e-10, 100_000).unwrap();
        let residual = stationarity_residual(&c, &solved).unwrap();
        cr.check(residual <= 1e-8, || {
            format!("{name}: residual {residual:e}")
        });
        cr.check(solved.weights.values().all(|&z| z > 0.0), || {
            format!("{name}: nonpositive weight")
        });
        // per-tail sums equal the admissible out-degree
        let mut by_tail: std::collections::BTreeMap<VertexId, (f64, usize)> = Default::default();
        for (&(u, _), &z) in &solved.weights {
            let e = by_tail.entry(u).or_insert((0.0, 0));
            e.0 += z;
            e.1 += 1;
        }
        for (v, (sum, t)) in by_tail {
            cr.check((sum - t as f64).abs() <= 1e-12, || {
                format!("{name}: vertex {v} weight sum {sum} != {t}")
            });
        }
    }
    cr.finish();
}

#[test]
fn criterion_07_generators_certified() {
    let mut cr = Criterion::new(7, "high-girth generators certified by exhaustive search");
    // p = 2 on 12 vertices: purge leaves graph girth at least 5
    let g = high_girth_pdim(6, 2, Seed(1207), None).unwrap();
    let girth_g = graph_girth(&g).unwrap();
    cr.check(girth_g >= GirthValue::Finite(5), || {
        format!("p=2 girth {girth_g}")
    });
    let again = high_girth_pdim(6, 2, Seed(1207), None).unwrap();
    cr.check(g == again, || "p=2 generation is not reproducible".into());

    // p = 3 on 12 vertices: gr_2 > 6
    let c3 = high_girth_pdim(4, 3, Seed(7331), None).unwrap();
    cr.check(girth_exceeds(&c3, 2, 6, &params()).unwrap(), || {
        "p=3 construction has gr_2 <= 6".into()
    });
    let c3_again = high_girth_pdim(4, 3, Seed(7331), None).unwrap();
    cr.check(c3 == c3_again, || {
        "p=3 generation is not reproducible".into()
    });

    // sparsified tripartite complex on 15 vertices: density and gr_2 > 6
    let (raw, part) = random_tripartite_2d(5, 0.3, Seed(99)).unwrap();
    let sparse = sparsify_for_gr2(&raw, 6, &part).unwrap();
    cr.check(girth_exceeds(&sparse, 2, 6, &params()).unwrap(), || {
        "sparsified complex has gr_2 <= 6".into()
    });
    let verts = sparse.vertices().to_vec();
    for bits in 0u64..(1 << verts.len()) {
        let size = bits.count_ones() as usize;
        if !(3..=6).contains(&size) {
            continue;
        }
        let w: Vec<VertexId> = verts
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        let f2 = sparse.induced(&w).unwrap().f(2);
        cr.check(f2 < 2 * size - 4, || {
            format!("density violated on W = {w:?}: f_2 = {f2}")
        });
    }
    let (raw2, part2) = random_tripartite_2d(5, 0.3, Seed(99)).unwrap();
    cr.check(
        sparsify_for_gr2(&raw2, 6, &part2).unwrap() == sparse,
        || "sparsify is not reproducible".into(),
    );
    cr.finish();
}

#[test]
fn criterion_08_hochster_and_girth_link() {
    let mut cr = Criterion::new(8, "g-tilde = min{n-d+p+1, gr} and gr = g' across fields");
    let named: Vec<(String, girthlab::SimplicialComplex)> = vec![
        ("c5".into(), cycle_complex(5).unwrap()),
        ("triangle-boundary".into(), simplex_boundary(2).unwrap()),
        ("tetrahedron-boundary".into(), simplex_boundary(3).unwrap()),
        ("octahedron".into(), octahedron()),
        (
            "cone-k4".into(),
            girthlab::generators::cone(&complete_graph(4).unwrap(), VertexId(9)).unwrap(),
        ),
    ];
    let mut rng = seeded_rng(808);
    let mut cases = named;
    for trial in 0..50 {
        cases.push((format!("random-{trial}"), random_closure(&mut rng, 8, 5)));
    }
    for field in [PrimeField::GF2, PrimeField::GF3] {
        let p = SearchParams {
            field,
            ..Default::default()
        };
        for (name, c) in &cases {
            if c.vertex_count() == 0 {
                continue;
            }
            match check_girth_link(c, &p) {
                Ok(report) => cr.check(report.pass, || {
                    format!("{name} over {field}: {:?}", report.rows)
                }),
                Err(e) => cr.check(false, || format!("{name} over {field}: {e}")),
            }
        }
    }
    // exact C_5 table
    let t = betti_table(&cycle_complex(5).unwrap(), &params()).unwrap();
    for ((i, j), expected) in [((1, 2), 5u64), ((2, 3), 5), ((3, 5), 1)] {
        cr.check(t.entry(i, j) == expected, || {
            format!("C5 beta_{{{i},{j}}} = {}", t.entry(i, j))
        });
    }
    let spurious: u64 = t
        .entries()
        .filter(|&(i, j, _)| i >= 1 && !matches!((i, j), (1, 2) | (2, 3) | (3, 5)))
        .map(|(_, _, v)| v)
        .sum();
    cr.check(spurious == 0, || {
        format!("C5 has {spurious} unexpected table entries")
    });
    cr.finish();
}

#[test]
fn criterion_09_multiplicity_inequality() {
    let mut cr = Criterion::new(
        9,
        "multiplicity bound holds corpus-wide, tight on three cases",
    );
    for (name, c) in corpus() {
        if c.vertex_count() == 0 {
            continue;
        }
        let rep = multiplicity_bound(&c, &params()).unwrap();
        cr.check(rep.pass, || {
            format!(
                "{name}: f = {} > bound {}",
                rep.measured_value, rep.bound_value
            )
        });
    }
    for (name, c, expected) in [
        ("c5", cycle_complex(5).unwrap(), 5.0),
        ("triangle-boundary", simplex_boundary(2).unwrap(), 3.0),
        ("octahedron", octahedron(), 8.0),
    ] {
        let rep = multiplicity_bound(&c, &params()).unwrap();
        cr.check(
            rep.bound_value == expected && rep.measured_value == expected,
            || {
                format!(
                    "{name}: bound {} measured {}",
                    rep.bound_value, rep.measured_value
                )
            },
        );
    }
    cr.finish();
}

#[test]
fn criterion_10_exponent_table() {
    let mut cr = Criterion::new(
        10,
        "exponent recursion: inequalities, bound, convergence, a_{p,2,p}",
    );
    let table = ExponentTable::build(6, 6, 12).unwrap();
    for p in 2..=6u32 {
        for r in 2..=6u32 {
            let limit = ExponentTable::limit(p, r);
            for i in p..=12u32 {
                let a = table.get(p, r, i).unwrap();
                if p >= 3 {
                    let below = table.get(p - 1, r, i).unwrap();
                    cr.check(a > below, || {
                        format!("a_{{{p},{r},{i}}} <= a_{{{},{r},{i}}}", p - 1)
                    });
                }
                let prev = table.get(p, r, i - 1).unwrap();
                cr.check(a > prev, || {
                    format!("a_{{{p},{r},{i}}} <= a_{{{p},{r},{}}}", i - 1)
                });
                if r < 6 {
                    let wider = table.get(p, r + 1, i).unwrap();
                    cr.check(a > wider, || {
                        format!("a_{{{p},{r},{i}}} <= a_{{{p},{},{i}}}", r + 1)
                    });
                }
                cr.check(a < &limit, || format!("a_{{{p},{r},{i}}} >= limit"));
            }
            let gap_start = &limit - table.get(p, r, p).unwrap();
            let gap_end = &limit - table.get(p, r, 12).unwrap();
            cr.check(gap_end < gap_start, || {
                format!("no convergence trend for p={p}, r={r}")
            });
        }
    }
    for p in 2..=6u32 {
        let a = a_exponent(p, 2, p).unwrap();
        let expected = p as f64 - 1.0 / f64::powi(2.0, p as i32 - 1);
        cr.check((a.to_f64().unwrap() - expected).abs() < 1e-15, || {
            format!("a_{{{p},2,{p}}} = {a}")
        });
    }
    cr.finish();
}

#[test]
fn criterion_11_homology_kernel() {
    let mut cr = Criterion::new(11, "dd = 0, Euler-Poincare, suspension shift");
    let fields = [PrimeField::GF2, PrimeField::GF3, PrimeField::GF5];
    for (name, c) in corpus() {
        for field in fields {
            // composite of consecutive boundary maps vanishes
            for i in 1..=c.dim().max(0) as usize {
                if (i as isize) > c.dim() {
                    continue;
                }
                let low = boundary_matrix(&c, i - 1, field).unwrap();
                let high = boundary_matrix(&c, i, field).unwrap();
                let p = field.modulus();
                for col in 0..high.cols {
                    let mut acc = vec![0u64; low.rows];
                    for &(mid, s2) in high.entries_of_column(col) {
                        let f2 = if s2 >= 0 { 1 } else { p - 1 };
                        for &(row, s1) in low.entries_of_column(mid) {
                            let f1 = if s1 >= 0 { 1 } else { p - 1 };
                            acc[row] = (acc[row] + f1 * f2) % p;
                        }
                    }
                    cr.check(acc.iter().all(|&v| v == 0), || {
                        format!("{name}: dd != 0 over {field} at index {i}")
                    });
                }
            }
            // reduced Euler-Poincare identity
            let b = betti_vector(&c, field);
            let lhs: i64 = b
                .entries()
                .map(|(q, d)| {
                    if (q + 1) % 2 == 0 {
                        d as i64
                    } else {
                        -(d as i64)
                    }
                })
                .sum();
            let rhs: i64 = (-1..=c.dim())
                .map(|i| {
                    let f = c.f(i) as i64;
                    if (i + 1) % 2 == 0 {
                        f
                    } else {
                        -f
                    }
                })
                .sum();
            cr.check(lhs == rhs, || {
                format!("{name}: Euler-Poincare {lhs} != {rhs} over {field}")
            });
        }
    }
    // suspension shifts reduced homology up by one degree
    let mut rng = seeded_rng(1111);
    for trial in 0..100 {
        let c = random_closure(&mut rng, 6, 4);
        let apex_a = VertexId(100);
        let apex_b = VertexId(101);
        let s = c.suspension(apex_a, apex_b).unwrap();
        for field in fields {
            for q in -1..=c.dim() {
                let got = reduced_betti(&s, q + 1, field);
                let expected = reduced_betti(&c, q, field);
                cr.check(got == expected, || {
                    format!("trial {trial}: suspension shift failed at q={q} over {field}")
                });
            }
            cr.check(reduced_betti(&s, 0, field) == 0, || {
                format!("trial {trial}: suspension disconnected over {field}")
            });
        }
    }
    cr.finish();
}

#[test]
fn budget_errors_carry_certified_lower_bounds() {
    // not a numbered criterion, but the gate relies on honest infeasible
    // results: a tiny budget must fail loudly with a usable bound
    let oct = octahedron();
    let tight = SearchParams {
        budget: 2,
        ..Default::default()
    };
    match girth(&oct, 1, &tight) {
        Err(Error::Infeasible {
            certified_above: Some(k),
            ..
        }) => assert!(k >= 2),
        other => panic!("expected certified infeasible, got {other:?}"),
    }
}
