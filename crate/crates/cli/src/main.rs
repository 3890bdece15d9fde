use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use metacover::algebra::factor::factor_modp;
use metacover::algebra::integer::is_prime;
use metacover::bounds::{bound_report, determinant_bound_suite};
use metacover::covers::{cover_homology, fox_cyclic_invariants, Budget, CoverKind};
use metacover::derham::{reps_at_prime, verify_rep};
use metacover::fox::check_props;
use metacover::knot::Knot;
use metacover::lowindex::{minimal_noncyclic_degree, DEFAULT_CAP};
use metacover::report::{
    compute_table, diff_cells, diff_failed, render_csv, render_row_table, table_cell, DiffOutcome, Golden,
    TableCell, TABLE_KNOTS, TABLE_PRIMES,
};
use metacover::stratification::{fibered_shortcut_check, hironaka_betti};
use metacover::Error;

/// Metabelian representations of knot groups and the homology of their covers.
///
/// The knot table can be replaced by pointing METACOVER_KNOT_TABLE at a JSON file.
#[derive(Parser)]
#[command(name = "metacover", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "paper-table")]
    format: Format,
    /// Largest cover degree to compute; larger covers are skipped.
    #[arg(long, global = true, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    PaperTable,
}

#[derive(Subcommand)]
enum Cmd {
    /// Alexander polynomial, or its factorization mod p.
    Alexander {
        knot: String,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Representations from the roots of Δ mod p, verified.
    Rep {
        knot: String,
        #[arg(long = "mod")]
        modulus: u64,
    },
    /// Homology of the kernel, preimage and cyclic covers at p.
    Cover {
        knot: String,
        #[arg(long = "mod")]
        modulus: u64,
    },
    /// Homology of the n-fold cyclic cover, checked against the closed form.
    Cyclic {
        knot: String,
        #[arg(short)]
        n: u64,
    },
    /// First Betti number of the kernel cover from character strata.
    Stratify {
        knot: String,
        #[arg(long = "mod")]
        modulus: u64,
    },
    /// Index bounds and the achieved index at the good prime (JSON).
    Bounds { knot: String },
    /// Homology table over knots and primes.
    Table {
        /// Comma-separated knot names.
        #[arg(long, value_delimiter = ',')]
        knots: Option<Vec<String>>,
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        /// Compare with stored values; exits 1 on a mismatch.
        #[arg(long)]
        diff: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Smallest degree of a non-cyclic cover.
    Minimal {
        knot: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Quick consistency checks.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownKnot(_)
            | Error::InvalidParameters(_)
            | Error::NotPrime(_)
            | Error::CapExceeded { .. }
            | Error::ZeroIndex
            | Error::Parse(_)
            | Error::Io(_)
            | Error::KnotTable(_) => Failure::Usage(e.to_string()),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn check(ok: bool, what: &str) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification(what.to_string()))
    }
}

fn prime(p: u64) -> Result<u64, Failure> {
    if is_prime(p) {
        Ok(p)
    } else {
        Err(Error::NotPrime(p).into())
    }
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn alexander(cli: &Cli, name: &str, modulus: Option<u64>) -> Outcome {
    let k = Knot::builtin(name)?;
    let props = check_props(&k.delta, k.c_k().max(1));
    let primes: Vec<u64> = match modulus {
        Some(p) => vec![prime(p)?],
        None => TABLE_PRIMES.to_vec(),
    };
    let facts = primes
        .iter()
        .map(|&p| factor_modp(&k.delta.reduce_mod(p)).map(|f| (p, f.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    if cli.format == Format::Json {
        print_json(&json!({ "knot": k.name, "delta": k.delta.to_string(), "factorizations": facts, "props": props }));
    } else if modulus.is_some() {
        println!("{}", facts[0].1);
    } else {
        println!("{}", k.delta);
    }
    check(k.name == "unknot" || props.passed(), "Alexander polynomial properties")
}

fn rep(cli: &Cli, name: &str, p: u64) -> Outcome {
    let k = Knot::builtin(name)?;
    let mut all_ok = true;
    let mut out = Vec::new();
    for (root, r) in reps_at_prime(&k.working, &k.delta, prime(p)?)? {
        let report = verify_rep(&r, &k.working, None);
        all_ok &= report.passed();
        if cli.format == Format::Json {
            out.push(json!({ "factor": root.factor.to_string(), "rep": r.to_json(), "check": report }));
        } else {
            println!(
                "{}: d={} n={} image order {} {}",
                root.factor,
                r.d(),
                r.order_alpha,
                r.image_order(),
                if report.passed() { "verified" } else { "FAILED" }
            );
        }
    }
    if cli.format == Format::Json {
        print_json(&out);
    }
    check(all_ok, "representation verification")
}

fn cover(cli: &Cli, name: &str, p: u64) -> Outcome {
    let k = Knot::builtin(name)?;
    let budget = Budget::with_degree(cli.budget as usize);
    let cell = table_cell(&k, prime(p)?, &budget)?;
    let mut preimages = Vec::new();
    if let Ok(reps) = reps_at_prime(&k.working, &k.delta, p) {
        for (root, r) in reps {
            let y = match cover_homology(&k.working, Some(&r), CoverKind::PreimageAlpha, &budget) {
                Ok(h) => Some(h),
                Err(Error::BudgetExceeded(_)) => None,
                Err(e) => return Err(e.into()),
            };
            preimages.push((root.factor.to_string(), y));
        }
    }
    let ok = cell.computed().iter().all(|c| c.passed());
    if cli.format == Format::Json {
        print_json(&json!({ "cell": cell, "preimage_alpha": preimages }));
    } else {
        println!("X_rho: {}\nX_n:   {}", cell.upper_text(), cell.lower_text());
        for (f, y) in &preimages {
            match y {
                Some(h) => println!("Y_rho ({f}): {} (degree {})", h.h1, h.degree),
                None => println!("Y_rho ({f}): skipped"),
            }
        }
        for c in cell.computed() {
            println!(
                "{}: boundary tori {} of {}, Betti bounds [{}, {}], torsion ratio {:?}",
                c.factor, c.upper.boundary_components, c.field_order, c.sandwich.lower, c.sandwich.upper_crossings, c.torsion
            );
        }
    }
    check(ok, "cover bounds")
}

fn cyclic(cli: &Cli, name: &str, n: u64) -> Outcome {
    let k = Knot::builtin(name)?;
    let h = cover_homology(&k.working, None, CoverKind::Cyclic(n), &Budget::with_degree(cli.budget as usize))?;
    let (betti, torsion) = fox_cyclic_invariants(&k.delta, n)?;
    let agree = h.h1.betti() == betti && h.h1.torsion_order() == torsion;
    if cli.format == Format::Json {
        print_json(&json!({ "h1": h.h1.to_string(), "closed_form": { "betti": betti, "torsion_order": torsion.to_string() }, "agree": agree }));
    } else {
        println!("{} (closed form: betti {betti}, torsion order {torsion})", h.h1);
    }
    check(agree, "closed form disagrees with the cover computation")
}

fn stratify(cli: &Cli, name: &str, p: u64) -> Outcome {
    let k = Knot::builtin(name)?;
    let budget = Budget::with_degree(cli.budget as usize);
    let mut ok = true;
    let mut out = Vec::new();
    for (root, r) in reps_at_prime(&k.working, &k.delta, prime(p)?)? {
        let res = hironaka_betti(&k, &r, &budget)?;
        let fib = fibered_shortcut_check(&k, &r, &res);
        ok &= fib.passed();
        if cli.format == Format::Json {
            out.push(json!({ "factor": root.factor.to_string(), "result": res, "fibered": fib }));
        } else {
            println!("{}: betti {} (cyclic part {}, {} character classes)", root.factor, res.betti, res.beta_n, res.terms.len());
        }
    }
    if cli.format == Format::Json {
        print_json(&out);
    }
    check(ok, "fibered bounds")
}

fn bounds(name: &str) -> Outcome {
    let r = bound_report(&Knot::builtin(name)?)?;
    print_json(&r);
    check(r.passed(), "achieved index exceeds a bound")
}

fn table(cli: &Cli, knots: &Option<Vec<String>>, primes: &Option<Vec<u64>>, diff: &Option<PathBuf>, workers: usize) -> Outcome {
    let names: Vec<String> = knots.clone().unwrap_or_else(|| TABLE_KNOTS.iter().map(|s| s.to_string()).collect());
    let primes: Vec<u64> = primes.clone().unwrap_or_else(|| TABLE_PRIMES.to_vec());
    for &p in &primes {
        prime(p)?;
    }
    let ks = names.iter().map(|n| Knot::builtin(n)).collect::<Result<Vec<_>, _>>()?;
    let cells: Vec<TableCell> = compute_table(&ks, &primes, &Budget::with_degree(cli.budget as usize), workers)?;
    let bounds_ok = cells.iter().all(|c| c.computed().iter().all(|x| x.passed()));
    match cli.format {
        Format::Json => print_json(&cells),
        Format::Csv => print!("{}", render_csv(&cells)),
        Format::PaperTable => print!("{}", render_row_table(&cells, &primes)),
    }
    if let Some(path) = diff {
        let golden = Golden::load(path)?;
        let diffs = diff_cells(&cells, &golden)?;
        for d in &diffs {
            let tag = match d.outcome {
                DiffOutcome::Match => "match",
                DiffOutcome::Mismatch if d.reproducible => "MISMATCH",
                DiffOutcome::Mismatch => "differs (not asserted)",
                DiffOutcome::Skipped => "skipped",
                DiffOutcome::Unlisted => continue,
            };
            match &d.expected {
                Some((u, l)) if d.outcome == DiffOutcome::Mismatch => {
                    eprintln!("{} p={}: {tag}: expected {u} / {l}, got {} / {}", d.knot, d.p, d.got.0, d.got.1)
                }
                _ => eprintln!("{} p={}: {tag}", d.knot, d.p),
            }
        }
        check(!diff_failed(&diffs), "table differs from stored values")?;
    }
    check(bounds_ok, "cover bounds")
}

fn minimal(cli: &Cli, name: &str, cap: usize) -> Outcome {
    let r = minimal_noncyclic_degree(&Knot::builtin(name)?, cap)?;
    if cli.format == Format::Json {
        print_json(&json!({ "report": r, "line": r.line() }));
    } else {
        println!("{}", r.line());
    }
    Ok(())
}

fn selftest(seed: u64) -> Outcome {
    let mut failures = Vec::new();
    let mut step = |name: &str, ok: Result<bool, Error>| {
        let ok = ok.unwrap_or(false);
        println!("{} {name}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failures.push(name.to_string());
        }
    };
    step("alexander 4_1", Knot::builtin("4_1").map(|k| k.delta.to_string() == "t^2 - 3*t + 1"));
    step("alexander 3_1", Knot::builtin("3_1").map(|k| k.delta.to_string() == "t^2 - t + 1"));
    step(
        "small table cells",
        (|| {
            let golden = Golden::builtin()?;
            let cells = [("3_1", 2), ("3_1", 3), ("4_1", 2), ("5_2", 2), ("6_1", 3)]
                .iter()
                .map(|(k, p)| table_cell(&Knot::builtin(k)?, *p, &Budget::default()))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(diff_cells(&cells, &golden)?.iter().all(|d| d.outcome == DiffOutcome::Match))
        })(),
    );
    step(
        "minimal degree 3_1",
        minimal_noncyclic_degree(&Knot::builtin("3_1").unwrap(), 3).map(|r| r.line() == "3_1, 3: Yes, ((t + 1)^2, 3)"),
    );
    step("determinant bound", determinant_bound_suite(seed, 200, 6).map(|v| v == 0));
    step("bounds 4_1", Knot::builtin("4_1").and_then(|k| bound_report(&k)).map(|r| r.passed()));
    check(failures.is_empty(), &failures.join(", "))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.cmd {
        Cmd::Alexander { knot, modulus } => alexander(cli, knot, *modulus),
        Cmd::Rep { knot, modulus } => rep(cli, knot, *modulus),
        Cmd::Cover { knot, modulus } => cover(cli, knot, *modulus),
        Cmd::Cyclic { knot, n } => cyclic(cli, knot, *n),
        Cmd::Stratify { knot, modulus } => stratify(cli, knot, *modulus),
        Cmd::Bounds { knot } => bounds(knot),
        Cmd::Table { knots, primes, diff, workers } => table(cli, knots, primes, diff, *workers),
        Cmd::Minimal { knot, cap } => minimal(cli, knot, *cap),
        Cmd::Selftest { seed } => selftest(*seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
