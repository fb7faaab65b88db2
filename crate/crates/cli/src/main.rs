use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use building_homology::complexes::{Building, Complex};
use building_homology::cycles::{apartment_cycle, d1_basis, default_u, dn1_basis, gamma_u};
use building_homology::exterior::binomial;
use building_homology::formulas::{default_points, formula_grid, q_identity_checks, DimReport};
use building_homology::homology::{lusztig_system, ConstantSystem, TwistedChain, TwistedComplex};
use building_homology::mincycle::{min_support_cycle, SearchOptions, DEFAULT_BUDGET};
use building_homology::verify::{run_all, VerifyConfig};
use building_homology::{Elem, Field, Matrix, Subspace};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

const THREADS_VAR: &str = "BUILDING_HOMOLOGY_THREADS";

#[derive(Parser)]
#[command(
    name = "building-homology",
    version,
    about = "Twisted homology of the spherical building of GL(n, F_q)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Space {
    /// Rank of the ambient space F_q^n.
    #[arg(long)]
    n: usize,
    /// Field size, a prime power.
    #[arg(long)]
    q: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced homology dimensions of X_V with coefficients in ∧^k g.
    Dims {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        k: usize,
    },
    /// Explicit cycle families and the rank they span.
    Basis {
        which: Which,
        #[command(flatten)]
        space: Space,
        /// Omit the chains themselves.
        #[arg(long)]
        summary: bool,
    },
    /// Minimum support of a nonzero cycle; untwisted when --k is absent.
    MinSupport {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        k: Option<usize>,
        /// Defaults to the only nonvanishing degree.
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<isize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include the minimizing cycle.
        #[arg(long)]
        witness: bool,
    },
    /// Closed-form dimension grid.
    Formulas {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
        q: Vec<u64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Every check on the desk-scale grid.
    VerifyAll {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Simplices of X_V in one degree.
    ExportComplex {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        degree: isize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    D1,
    Dn1,
    Apartment,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Usage and input errors; failed checks are reported through `Ok(false)`.
enum Failure {
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn building(space: Space) -> Result<Building, Failure> {
    if space.n < 2 {
        return Err(usage("--n must be at least 2"));
    }
    Ok(Building::new(&Field::new(space.q)?, space.n))
}

fn check_k(n: usize, k: usize) -> Result<(), Failure> {
    if (1..n).contains(&k) {
        Ok(())
    } else {
        Err(usage(format!("--k must lie in 1..={}", n - 1)))
    }
}

fn emit(value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn factorial(m: usize) -> usize {
    (1..=m).product()
}

fn chain_json(x: &Building, chain: &TwistedChain, grade: usize) -> Value {
    json!({ "degree": chain.degree(), "weight": chain.weight(), "terms": chain.to_record(x, grade) })
}

fn grade_of(x: &Building, chain: &TwistedChain) -> usize {
    (0..=x.n())
        .find(|&g| binomial(x.n(), g) == chain.coeff_dim())
        .unwrap_or(0)
}

fn standard_frame(f: &Field, n: usize) -> Vec<Subspace> {
    (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            Subspace::span(f, n, &[e])
        })
        .collect()
}

fn span_rank(
    tc: &TwistedComplex,
    degree: isize,
    chains: &[TwistedChain],
) -> Result<usize, Failure> {
    let rows = chains
        .iter()
        .map(|c| tc.coords_of_chain(c))
        .collect::<Result<Vec<Vec<Elem>>, _>>()?;
    Ok(Matrix::from_rows(tc.chain_dim(degree), &rows).rank(tc.field()))
}

fn cmd_dims(space: Space, k: usize) -> Outcome {
    let x = building(space)?;
    check_k(space.n, k)?;
    let n = space.n;
    let tc = TwistedComplex::lusztig(&x, &lusztig_system(&x, k), true);
    let all = tc.homology_dims()?;
    let live = (n - k) as isize - 1;
    let vanishing = all.iter().all(|(&d, &h)| d == live || h == 0);
    let degrees: BTreeMap<String, usize> = (0..=n as isize - 2)
        .map(|d| (d.to_string(), all.get(&d).copied().unwrap_or(0)))
        .collect();
    let report = DimReport::new(n, k, space.q).with_rank(all.get(&live).copied().unwrap_or(0));
    let ok = vanishing && report.all_agree();
    emit(&json!({
        "n": n,
        "q": space.q,
        "k": k,
        "degrees": degrees,
        "theorem": "Lusztig-Dupont vanishing and the dimension of D^k",
        "exhaustive": true,
        "theorem4_ok": vanishing,
        "product_sum": report.product_sum.to_string(),
        "alternating_sum": report.alternating_sum.to_string(),
        "formula_ok": report.all_agree(),
    }))?;
    Ok(ok)
}

fn cmd_basis(which: Which, space: Space, summary: bool) -> Outcome {
    let x = building(space)?;
    let f = x.field().clone();
    let (n, q) = (space.n, space.q as usize);
    let (theorem, k, labelled): (&str, usize, Vec<(Value, TwistedChain)>) = match which {
        Which::D1 => {
            let basis = d1_basis(&x)?;
            let rows = basis
                .into_iter()
                .map(|(v, c)| (json!({ "v": v.vectors() }), c))
                .collect();
            ("basis of D^1 by pushed-forward octahedral cycles", 1, rows)
        }
        Which::Dn1 => {
            let rows = dn1_basis(&x)
                .into_iter()
                .map(|(u, i, z)| (json!({ "u": u, "i": i }), z))
                .collect();
            ("basis of D^(n-1) by z_(u,i)", n - 1, rows)
        }
        Which::Apartment => {
            let frame = standard_frame(&f, n);
            let z = apartment_cycle(&x, &frame)?;
            let serials: Vec<String> = frame.iter().map(|l| l.serial(f.q())).collect();
            (
                "apartment class of the standard frame",
                0,
                vec![(json!({ "frame": serials }), z)],
            )
        }
    };
    let (tc, degree, expected) = match which {
        Which::Apartment => (
            TwistedComplex::new(&f, &x, &ConstantSystem::scalars(), true),
            n as isize - 2,
            1,
        ),
        Which::D1 => {
            let want = (1..n).map(|i| q.pow(i as u32) - 1).product();
            (
                TwistedComplex::lusztig(&x, &lusztig_system(&x, k), true),
                n as isize - 2,
                want,
            )
        }
        Which::Dn1 => {
            let want = (2..=n).map(|i| q.pow(i as u32 - 1) - 1).sum();
            (
                TwistedComplex::lusztig(&x, &lusztig_system(&x, k), true),
                0,
                want,
            )
        }
    };
    let chains: Vec<TwistedChain> = labelled.iter().map(|(_, c)| c.clone()).collect();
    let cycles_ok = chains.iter().all(|c| c.is_cycle(&f));
    let rank = span_rank(&tc, degree, &chains)?;
    let ok = cycles_ok && rank == expected;
    let mut report = json!({
        "n": n,
        "q": space.q,
        "k": k,
        "degree": degree,
        "theorem": theorem,
        "exhaustive": true,
        "count": chains.len(),
        "rank": rank,
        "expected_rank": expected,
        "cycles_ok": cycles_ok,
        "passed": ok,
    });
    if !summary {
        let grade = if matches!(which, Which::Apartment) {
            0
        } else {
            k
        };
        report["elements"] = labelled
            .iter()
            .map(|(label, c)| json!({ "label": label, "chain": chain_json(&x, c, grade) }))
            .collect();
    }
    emit(&report)?;
    Ok(ok)
}

struct MinSupportArgs {
    space: Space,
    k: Option<usize>,
    degree: Option<isize>,
    budget: u64,
    seed: u64,
    witness: bool,
}

fn cmd_min_support(a: MinSupportArgs) -> Outcome {
    let x = building(a.space)?;
    let f = x.field().clone();
    let n = a.space.n;
    let (tc, live, hint, expected, theorem) = match a.k {
        Some(k) => {
            check_k(n, k)?;
            let tc = TwistedComplex::lusztig(&x, &lusztig_system(&x, k), true);
            let hint = gamma_u(&x, &default_u(&f, n, k), k)?;
            let live = (n - k) as isize - 1;
            (
                tc,
                live,
                hint,
                factorial(n - k + 2) / 2,
                "minimal twisted cycle support (n-k+2)!/2",
            )
        }
        None => {
            let tc = TwistedComplex::new(&f, &x, &ConstantSystem::scalars(), true);
            let frame = standard_frame(&f, n);
            let hint = apartment_cycle(&x, &frame)?;
            (
                tc,
                n as isize - 2,
                hint,
                factorial(n),
                "Smith-Yoshiara: minimal untwisted cycle support n!",
            )
        }
    };
    let degree = a.degree.unwrap_or(live);
    if degree < tc.min_degree() || degree > tc.top_degree() {
        return Err(usage(format!(
            "--degree must lie in {}..={}",
            tc.min_degree(),
            tc.top_degree()
        )));
    }
    let opts = SearchOptions {
        budget: a.budget,
        seed: a.seed,
        hints: vec![hint],
        ..SearchOptions::default()
    };
    let r = min_support_cycle(&tc, degree, &opts)?;
    let expected = (degree == live).then_some(expected);
    // Only a completed search can refute the bound.
    let ok = match (expected, r.min_weight) {
        (Some(e), Some(w)) => w <= e && (!r.exhaustive || w == e),
        (Some(_), None) => false,
        (None, _) => true,
    };
    let mut report = json!({
        "n": n,
        "q": a.space.q,
        "k": a.k,
        "degree": degree,
        "theorem": theorem,
        "cycle_space_dim": r.cycle_space_dim,
        "min_weight": r.min_weight,
        "expected_min_weight": expected,
        "exhaustive": r.exhaustive,
        "classes_examined": r.classes_examined.to_string(),
        "budget": a.budget,
        "seed": a.seed,
        "passed": ok,
    });
    if a.witness {
        report["witness"] = match &r.witness {
            Some(w) => chain_json(&x, w, grade_of(&x, w)),
            None => Value::Null,
        };
    }
    emit(&report)?;
    Ok(ok)
}

fn cmd_formulas(max_n: usize, qs: &[u64], format: Format) -> Outcome {
    if max_n < 2 {
        return Err(usage("--max-n must be at least 2"));
    }
    for &q in qs {
        Field::new(q)?;
    }
    let grid = formula_grid(max_n, qs);
    let identities = (1..=max_n)
        .flat_map(|n| qs.iter().map(move |&q| (n, q)))
        .map(|(n, q)| q_identity_checks(n, q, &default_points(n)))
        .collect::<Result<Vec<bool>, _>>()?;
    let ok = grid.iter().all(DimReport::formulas_agree) && identities.iter().all(|&b| b);
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(["n", "k", "q", "product_sum", "alternating_sum", "agree"])?;
            for r in &grid {
                w.write_record([
                    r.n.to_string(),
                    r.k.to_string(),
                    r.q.to_string(),
                    r.product_sum.to_string(),
                    r.alternating_sum.to_string(),
                    r.formulas_agree().to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<Value> = grid
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n, "k": r.k, "q": r.q,
                        "product_sum": r.product_sum.to_string(),
                        "alternating_sum": r.alternating_sum.to_string(),
                        "agree": r.formulas_agree(),
                    })
                })
                .collect();
            emit(&json!({
                "theorem": "dimension formula: product sum = alternating sum",
                "exhaustive": true,
                "q_identities_ok": identities.iter().all(|&b| b),
                "grid": rows,
                "passed": ok,
            }))?;
        }
    }
    Ok(ok)
}

fn cmd_verify_all(cfg: VerifyConfig) -> Outcome {
    if cfg.max_n < 2 {
        return Err(usage("--max-n must be at least 2"));
    }
    if let Some(q) = cfg.q {
        Field::new(q)?;
    }
    let results = run_all(&cfg);
    let ok = results.iter().all(|r| r.passed);
    let checks: Vec<Value> = results
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "theorem": r.theorem,
                "passed": r.passed,
                "exhaustive": r.exhaustive,
                "detail": r.detail,
            })
        })
        .collect();
    emit(&json!({
        "max_n": cfg.max_n,
        "q": cfg.q,
        "seed": cfg.seed,
        "budget": cfg.budget,
        "checks": checks,
        "failed": results.iter().filter(|r| !r.passed).count(),
        "passed": ok,
    }))?;
    Ok(ok)
}

fn cmd_export_complex(space: Space, degree: isize) -> Outcome {
    let x = building(space)?;
    let q = x.field().q();
    let simplices: Vec<Vec<String>> = x
        .simplices(degree)
        .iter()
        .map(|s| s.iter().map(|&v| x.vertex(v).serial(q)).collect())
        .collect();
    emit(&json!({ "n": space.n, "q": space.q, "degree": degree, "simplices": simplices }))?;
    Ok(true)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| usage(format!("{THREADS_VAR} must be a positive integer")))?;
    if threads == 0 {
        return Err(usage(format!("{THREADS_VAR} must be a positive integer")));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()?;
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    match cli.command {
        Command::Dims { space, k } => cmd_dims(space, k),
        Command::Basis {
            which,
            space,
            summary,
        } => cmd_basis(which, space, summary),
        Command::MinSupport {
            space,
            k,
            degree,
            budget,
            seed,
            witness,
        } => cmd_min_support(MinSupportArgs {
            space,
            k,
            degree,
            budget,
            seed,
            witness,
        }),
        Command::Formulas { max_n, q, format } => cmd_formulas(max_n, &q, format),
        Command::VerifyAll {
            max_n,
            q,
            seed,
            budget,
        } => cmd_verify_all(VerifyConfig {
            max_n,
            q,
            seed,
            budget,
        }),
        Command::ExportComplex { space, degree } => cmd_export_complex(space, degree),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = run(cli);
    let _ = std::io::stdout().flush();
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
