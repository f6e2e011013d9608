//! girthlab command line: parse `.scx` complexes, run the girth, walk,
//! weight, and Hochster computations, generate example complexes, and
//! verify the bound suite. JSON reports go to stdout (or `-o`); timing
//! goes to stderr so payloads stay byte-deterministic.
//!
//! Exit codes: 0 success, 1 usage, 2 parse error, 3 budget or
//! convergence failure, 4 verification failure.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use girthlab::bounds::{bound_reports_csv, moore_check, multiplicity_bound, BoundReport};
use girthlab::generators::{self, Seed};
use girthlab::scx;
use girthlab::stanley_reisner::{betti_table, check_girth_link, shift_profile};
use girthlab::walks::{admissible_arcs, stable_weights, stationarity_residual, tree_lemma_check};
use girthlab::{
    betti_vector, girth, girth_all, verify_witness, Error, PrimeField, SearchParams,
    SimplicialComplex,
};

#[derive(Parser)]
#[command(
    name = "girthlab",
    version,
    about = "girth invariants of simplicial complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report (or generated complex) here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    /// Homology evaluation budget (default 1000000, env GIRTHLAB_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Worker threads for the level searches and subset sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Compute gr_{p-1} with a certifying witness.
    Girth {
        input: PathBuf,
        /// Homology degree plus one: p = 2 is classical graph girth.
        #[arg(long, default_value_t = 2)]
        p: usize,
        /// Report all degrees 0..=dim instead of a single one.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 2)]
        field: u64,
    },
    /// Reduced Betti numbers over a prime field.
    Betti {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        field: u64,
    },
    /// Algebraic Betti table, maximal shifts, and the g-tilde profile.
    Hochster {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        field: u64,
        /// Vertex cap for the full subset sweep.
        #[arg(long, default_value_t = 20)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Non-returning walk-count bound check at radius r.
    Walks {
        input: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 2)]
        field: u64,
    },
    /// Admissible arcs and the stationary edge weights.
    Weights {
        input: PathBuf,
        #[arg(long, default_value_t = 0.25)]
        alpha: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iters: u64,
    },
    /// Generate a named complex as .scx text.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Run girths, the multiplicity and Moore bounds, and the shift
    /// cross-check; fails (exit 4) if any expected property does not hold.
    Verify {
        input: PathBuf,
        /// Restrict to one bound family.
        #[arg(long, value_enum, default_value_t = BoundChoice::All)]
        bounds: BoundChoice,
        #[arg(long, default_value_t = 2)]
        field: u64,
        #[arg(long, default_value_t = 20)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundChoice {
    Mult,
    Moore,
    All,
}

#[derive(Subcommand)]
enum GenKind {
    /// Cycle graph C_n.
    Cycle { n: u32 },
    /// Complete graph K_n.
    Complete { n: u32 },
    /// Boundary of the p-simplex.
    SimplexBoundary { p: u32 },
    /// Boundary of the p-dimensional cross-polytope.
    Crosspoly { p: u32 },
    /// Cone over the complete graph K_{n-1} (apex gets id n).
    ConeComplete { n: u32 },
    /// Balanced Turan-type flag complex on n vertices in d parts.
    Turan { n: u32, d: u32 },
    /// Balanced random complex: p parts of size m, top faces with
    /// probability --prob.
    RandomBalanced {
        m: usize,
        p: usize,
        #[command(flatten)]
        rand: RandArgs,
    },
    /// Purged high-girth complex with gr_{p-1} > 2p.
    HighGirth {
        m: usize,
        p: usize,
        #[arg(long)]
        seed: u64,
        /// Top-face probability; defaults to n^(-p/(2^p-1)).
        #[arg(long)]
        prob: Option<f64>,
    },
    /// Tripartite 2-dimensional random complex.
    Tripartite {
        m: usize,
        #[command(flatten)]
        rand: RandArgs,
    },
    /// Tripartite random complex sparsified so gr_2 > k.
    Sparse2d {
        m: usize,
        k: usize,
        #[command(flatten)]
        rand: RandArgs,
    },
}

#[derive(Args)]
struct RandArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    prob: f64,
}

fn main() {
    std::process::exit(run(std::env::args().collect()));
}

fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own help/version output is a success path
            if e.use_stderr() {
                eprint!("{e}");
                return 1;
            }
            print!("{e}");
            return 0;
        }
    };
    let started = Instant::now();
    let outcome = dispatch(&cli, &argv);
    let code = match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("girthlab: {e}");
            exit_code_for(&e)
        }
    };
    eprintln!("girthlab: finished in {:.3?}", started.elapsed());
    code
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 2,
        Error::Domain(_) => 1,
        Error::Infeasible { .. } | Error::Convergence { .. } => 3,
        Error::Inconsistency(_) => 4,
    }
}

fn params_from(cli: &Cli, field: u64, max_n: usize) -> Result<SearchParams, Error> {
    let budget = cli
        .budget
        .or_else(|| {
            std::env::var("GIRTHLAB_BUDGET")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1_000_000);
    Ok(SearchParams {
        field: PrimeField::new(field)?,
        budget,
        threads: cli.threads.max(1),
        hochster_max_n: max_n,
    })
}

fn load(path: &std::path::Path) -> Result<SimplicialComplex, Error> {
    scx::parse_scx_file(path).map(|(c, _)| c)
}

fn dispatch(cli: &Cli, argv: &[String]) -> Result<i32, Error> {
    match &cli.command {
        Command::Girth {
            input,
            p,
            all,
            field,
        } => {
            if *p < 1 {
                return Err(Error::domain("--p must be at least 1"));
            }
            let c = load(input)?;
            let params = params_from(cli, *field, 20)?;
            let results = if *all {
                serde_json::json!({ "girths": girth_all(&c, &params)? })
            } else {
                serde_json::to_value(girth(&c, p - 1, &params)?).expect("witness serializes")
            };
            emit(cli, argv, results, None)?;
            Ok(0)
        }
        Command::Betti { input, field } => {
            let c = load(input)?;
            let field = PrimeField::new(*field)?;
            let b = betti_vector(&c, field);
            let results = serde_json::json!({
                "field": field.modulus(),
                "reduced_betti": b.entries().map(|(q, d)| serde_json::json!([q, d])).collect::<Vec<_>>(),
            });
            emit(cli, argv, results, None)?;
            Ok(0)
        }
        Command::Hochster {
            input,
            field,
            max_n,
            format,
        } => {
            let c = load(input)?;
            let params = params_from(cli, *field, *max_n)?;
            let table = betti_table(&c, &params)?;
            let profile = shift_profile(&table)?;
            if *format == Format::Csv {
                write_text(cli, table.to_csv())?;
                return Ok(0);
            }
            let results = serde_json::json!({
                "betti_table": table.to_json(),
                "shift_profile": profile,
            });
            emit(cli, argv, results, None)?;
            Ok(0)
        }
        Command::Walks { input, r, field } => {
            let c = load(input)?;
            let params = params_from(cli, *field, 20)?;
            let report = tree_lemma_check(&c, *r, &params)?;
            emit(
                cli,
                argv,
                serde_json::to_value(&report).expect("report serializes"),
                None,
            )?;
            Ok(0)
        }
        Command::Weights {
            input,
            alpha,
            tol,
            max_iters,
        } => {
            let c = load(input)?;
            let arcs = admissible_arcs(&c, *alpha)?;
            let solved = stable_weights(&c, &arcs, *tol, *max_iters)?;
            let residual = stationarity_residual(&c, &solved)?;
            let weights: Vec<serde_json::Value> = solved
                .weights
                .iter()
                .map(|(&(u, v), &z)| serde_json::json!([u.0, v.0, z]))
                .collect();
            let results = serde_json::json!({
                "alpha": alpha,
                "arc_count": solved.arcs.len(),
                "residual": residual,
                "weights": weights,
            });
            emit(cli, argv, results, None)?;
            Ok(0)
        }
        Command::Gen { kind } => {
            let (c, provenance, seed) = generate(kind)?;
            let text = scx::emit_scx(&c, &[provenance]);
            match (&cli.output, seed) {
                (Some(path), _) => std::fs::write(path, text)
                    .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))?,
                (None, _) => print!("{text}"),
            }
            Ok(0)
        }
        Command::Verify {
            input,
            bounds,
            field,
            max_n,
            format,
        } => {
            let c = load(input)?;
            let params = params_from(cli, *field, *max_n)?;
            verify(cli, argv, &c, &params, *bounds, *format)
        }
    }
}

fn generate(kind: &GenKind) -> Result<(SimplicialComplex, String, Option<u64>), Error> {
    let version = env!("CARGO_PKG_VERSION");
    let (c, desc, seed): (SimplicialComplex, serde_json::Value, Option<u64>) = match kind {
        GenKind::Cycle { n } => (
            generators::cycle_complex(*n)?,
            serde_json::json!({"kind": "cycle", "n": n}),
            None,
        ),
        GenKind::Complete { n } => (
            generators::complete_graph(*n)?,
            serde_json::json!({"kind": "complete", "n": n}),
            None,
        ),
        GenKind::SimplexBoundary { p } => (
            generators::simplex_boundary(*p)?,
            serde_json::json!({"kind": "simplex-boundary", "p": p}),
            None,
        ),
        GenKind::Crosspoly { p } => (
            generators::cross_polytope_boundary(*p)?,
            serde_json::json!({"kind": "crosspoly", "p": p}),
            None,
        ),
        GenKind::ConeComplete { n } => {
            if *n < 2 {
                return Err(Error::domain("cone-complete needs n >= 2"));
            }
            let base = generators::complete_graph(n - 1)?;
            (
                generators::cone(&base, girthlab::VertexId(*n))?,
                serde_json::json!({"kind": "cone-complete", "n": n}),
                None,
            )
        }
        GenKind::Turan { n, d } => (
            generators::turan_flag(*n, *d)?,
            serde_json::json!({"kind": "turan", "n": n, "d": d}),
            None,
        ),
        GenKind::RandomBalanced { m, p, rand } => {
            let (c, _) = generators::random_balanced(*m, *p, rand.prob, Seed(rand.seed))?;
            (
                c,
                serde_json::json!({"kind": "random-balanced", "m": m, "p": p, "prob": rand.prob, "seed": rand.seed, "rng": "chacha8"}),
                Some(rand.seed),
            )
        }
        GenKind::HighGirth { m, p, seed, prob } => (
            generators::high_girth_pdim(*m, *p, Seed(*seed), *prob)?,
            serde_json::json!({"kind": "high-girth", "m": m, "p": p, "prob": prob, "seed": seed, "rng": "chacha8"}),
            Some(*seed),
        ),
        GenKind::Tripartite { m, rand } => {
            let (c, _) = generators::random_tripartite_2d(*m, rand.prob, Seed(rand.seed))?;
            (
                c,
                serde_json::json!({"kind": "tripartite", "m": m, "prob": rand.prob, "seed": rand.seed, "rng": "chacha8"}),
                Some(rand.seed),
            )
        }
        GenKind::Sparse2d { m, k, rand } => {
            let (c, part) = generators::random_tripartite_2d(*m, rand.prob, Seed(rand.seed))?;
            let sparse = generators::sparsify_for_gr2(&c, *k, &part)?;
            (
                sparse,
                serde_json::json!({"kind": "sparse2d", "m": m, "k": k, "prob": rand.prob, "seed": rand.seed, "rng": "chacha8"}),
                Some(rand.seed),
            )
        }
    };
    let provenance = format!(
        "girthlab gen {}",
        serde_json::json!({"generator": desc, "version": version})
    );
    Ok((c, provenance, seed))
}

fn verify(
    cli: &Cli,
    argv: &[String],
    c: &SimplicialComplex,
    params: &SearchParams,
    bounds: BoundChoice,
    format: Format,
) -> Result<i32, Error> {
    let witnesses = girth_all(c, params)?;
    for w in &witnesses {
        if !verify_witness(c, w)? {
            return Err(Error::Inconsistency(format!(
                "girth witness failed re-verification at degree {}",
                w.degree
            )));
        }
    }
    let mut reports: Vec<BoundReport> = Vec::new();
    let mut results = serde_json::Map::new();
    results.insert(
        "girths".into(),
        serde_json::to_value(&witnesses).expect("witnesses serialize"),
    );

    if matches!(bounds, BoundChoice::Mult | BoundChoice::All) {
        let rep = multiplicity_bound(c, params)?;
        results.insert(
            "multiplicity".into(),
            serde_json::to_value(&rep).expect("report"),
        );
        reports.push(rep);
    }
    if matches!(bounds, BoundChoice::Moore | BoundChoice::All) && c.dim() <= 1 {
        let rep = moore_check(c)?;
        results.insert("moore".into(), serde_json::to_value(&rep).expect("report"));
        reports.push(rep);
    }
    if matches!(bounds, BoundChoice::All) && c.vertex_count() <= params.hochster_max_n {
        let link_report = check_girth_link(c, params)?;
        results.insert(
            "girth_link".into(),
            serde_json::to_value(&link_report).expect("report"),
        );
        if !link_report.pass {
            results.insert("pass".into(), serde_json::json!(false));
            emit(cli, argv, serde_json::Value::Object(results), None)?;
            return Ok(4);
        }
    }
    let pass = reports.iter().all(|r| r.pass);
    results.insert("pass".into(), serde_json::json!(pass));
    if format == Format::Csv {
        write_text(cli, bound_reports_csv(&reports))?;
    } else {
        emit(cli, argv, serde_json::Value::Object(results), None)?;
    }
    Ok(if pass { 0 } else { 4 })
}

fn emit(
    cli: &Cli,
    argv: &[String],
    results: serde_json::Value,
    seed: Option<u64>,
) -> Result<(), Error> {
    let report = serde_json::json!({
        "schema_version": 1,
        "tool": "girthlab",
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": argv[1..],
        "seed": seed,
        "results": results,
    });
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    write_text(cli, text + "\n")
}

fn write_text(cli: &Cli, text: String) -> Result<(), Error> {
    match &cli.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
