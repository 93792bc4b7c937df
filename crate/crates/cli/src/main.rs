//! Command-line frontend: builds factorizable groups and bismash
//! products, runs the character/indicator/decomposition pipeline, and
//! serializes everything as text, JSON or CSV with deterministic output.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hopfbrauer::bismash::{hopf_check, Bismash};
use hopfbrauer::brauer::{cartan, decomposition_matrix, group_modular_data, IntMatrix};
use hopfbrauer::chartable::character_table;
use hopfbrauer::error::AlgebraError;
use hopfbrauer::factored::{
    parse_group_file_with_cap, parse_single_group_file_with_cap, sn_family, FactoredGroup,
};
use hopfbrauer::ffield::LiftMetadata;
use hopfbrauer::hreps::{
    char0_report, char0_simples, char_zero_context, h_decomposition, modular_context,
    modular_report, modular_simples,
};
use hopfbrauer::perm::PermGroup;
use hopfbrauer::thompson::{run_corpus, CorpusSpec, Verdict};

#[derive(Parser)]
#[command(
    name = "hopfbrauer",
    about = "Exact characters, Brauer characters and Frobenius-Schur indicators \
             of bismash product Hopf algebras",
    version
)]
struct Cli {
    /// Random seed for the module-splitting searches (HOPFBRAUER_SEED
    /// overrides this flag)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on group element enumeration
    #[arg(long, global = true, default_value_t = 1_000_000)]
    cap: usize,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

/// Source of a factorizable group: a three-block generator file or a
/// member of the built-in symmetric group family H_n = E^{C_n} # E S_{n-1}.
#[derive(Args)]
struct GroupSource {
    /// Generator file (three blank-line-separated blocks: Q, F, G)
    #[arg(long, conflicts_with = "sn")]
    group: Option<PathBuf>,
    /// Built-in family member (n >= 2)
    #[arg(long)]
    sn: Option<usize>,
}

/// Source of a plain permutation group for the group-level subcommands:
/// a one-block generator file, or --sn N for the symmetric group S_N.
#[derive(Args)]
struct SingleGroupSource {
    /// Generator file (one block)
    #[arg(long, conflicts_with = "sn")]
    group: Option<PathBuf>,
    /// The symmetric group S_n
    #[arg(long)]
    sn: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CharSelector {
    /// characteristic 0
    #[value(name = "0")]
    Zero,
    /// odd characteristic p (requires --p)
    #[value(name = "p")]
    P,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a factorizable group: orders, orbits, stabilizers
    Group(GroupSource),
    /// Run the Hopf axiom battery and print one line per axiom
    HopfCheck(GroupSource),
    /// Ordinary character table of a permutation group
    Chartable(SingleGroupSource),
    /// Group-level decomposition and Cartan matrices at an odd prime
    Decomp {
        #[command(flatten)]
        source: SingleGroupSource,
        #[arg(long)]
        p: u64,
    },
    /// Characters of the simple H-modules
    Chars {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long = "char", value_enum)]
        characteristic: CharSelector,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Frobenius-Schur indicators of the simple H-modules
    Indicators {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long = "char", value_enum)]
        characteristic: CharSelector,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Brauer characters of the simple H-modules at an odd prime
    Brauer {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long)]
        p: u64,
    },
    /// H-level decomposition matrix, Cartan matrix and determinant
    /// certificate
    Hdecomp {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long)]
        p: u64,
    },
    /// Verify indicator lifting and orthogonality descent over a corpus
    Thompson {
        /// Corpus file (JSON); defaults to the built-in family n = 3..5
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Override the corpus primes (comma separated, all odd)
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<u64>>,
    },
    /// Run the full invariant battery on the built-in corpus
    Selftest,
}

/// Metadata block embedded in every JSON report.
#[derive(Serialize)]
struct Meta {
    schema: u32,
    composition: &'static str,
    coproduct: &'static str,
    seed: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    lifts: Vec<LiftMetadata>,
}

impl Meta {
    fn new(seed: u64, lifts: Vec<LiftMetadata>) -> Self {
        Meta {
            schema: hopfbrauer::SCHEMA_VERSION,
            composition: hopfbrauer::COMPOSITION_CONVENTION,
            coproduct: hopfbrauer::COPRODUCT_VARIANT,
            seed,
            lifts,
        }
    }
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    meta: Meta,
    report: T,
}

fn main() -> ExitCode {
    // die quietly when a downstream pipe closes
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let seed = std::env::var("HOPFBRAUER_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(cli.seed);
    match run(&cli, seed) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if e.downcast_ref::<AlgebraError>().is_some() {
                eprintln!("theorem violation or computation failure: {e}");
                ExitCode::from(1)
            } else {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        }
    }
}

fn load_factored(src: &GroupSource, cap: usize) -> Result<FactoredGroup> {
    match (&src.group, src.sn) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            Ok(parse_group_file_with_cap(&text, cap)?)
        }
        (None, Some(n)) => {
            if n < 2 {
                bail!("--sn must be at least 2");
            }
            Ok(sn_family(n, cap)?)
        }
        _ => bail!("exactly one of --group / --sn is required"),
    }
}

fn load_single(src: &SingleGroupSource, cap: usize) -> Result<PermGroup> {
    match (&src.group, src.sn) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            Ok(parse_single_group_file_with_cap(&text, cap)?)
        }
        (None, Some(n)) => {
            if n < 2 {
                bail!("--sn must be at least 2");
            }
            Ok(sn_family(n, cap)?.q().clone())
        }
        _ => bail!("exactly one of --group / --sn is required"),
    }
}

fn require_odd_prime(p: u64) -> Result<u64> {
    if p == 2 {
        bail!("p = 2 is excluded: the theory assumes odd characteristic");
    }
    if !hopfbrauer::ffield::is_prime(p) {
        bail!("{p} is not prime");
    }
    Ok(p)
}

fn emit_json<T: Serialize>(meta: Meta, report: T) -> Result<()> {
    let wrapped = Report { meta, report };
    println!("{}", serde_json::to_string_pretty(&wrapped)?);
    Ok(())
}

fn matrix_csv(label: &str, m: &IntMatrix, out: &mut String) {
    let _ = writeln!(out, "# {label} ({}x{})", m.rows, m.cols);
    for row in &m.entries {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
}

/// Returns Ok(true) when the run succeeded and all verdicts passed.
fn run(cli: &Cli, seed: u64) -> Result<bool> {
    let cap = cli.cap;
    match &cli.command {
        Command::Group(src) => {
            let fg = load_factored(src, cap)?;
            let report = fg.summary();
            match cli.format {
                Format::Json => emit_json(Meta::new(seed, vec![]), &report)?,
                _ => {
                    println!(
                        "{}: |Q| = {}, |F| = {}, |G| = {}, degree {}",
                        report.name, report.order_q, report.order_f, report.order_g, report.degree
                    );
                    for o in &report.orbits {
                        println!(
                            "orbit of {}: size {}, stabilizer order {}",
                            o.representative, o.size, o.stabilizer_order
                        );
                    }
                }
            }
            Ok(true)
        }
        Command::HopfCheck(src) => {
            let fg = load_factored(src, cap)?;
            let report = hopf_check(&fg)?;
            match cli.format {
                Format::Json => emit_json(Meta::new(seed, vec![]), &report)?,
                _ => {
                    println!(
                        "{}: dim H = {}, |B'| = {}",
                        report.name, report.dimension, report.bprime_size
                    );
                    for a in &report.axioms {
                        println!("{:<34} {}", a.axiom, if a.passed { "PASS" } else { "FAIL" });
                    }
                }
            }
            Ok(report.all_passed)
        }
        Command::Chartable(src) => {
            let group = load_single(src, cap)?;
            let table = character_table(&group)?;
            let report = table.summary();
            match cli.format {
                Format::Json => emit_json(Meta::new(seed, vec![]), &report)?,
                Format::Csv => {
                    let mut out = String::new();
                    let header: Vec<String> = std::iter::once("degree".to_string())
                        .chain(report.class_representatives.iter().cloned())
                        .collect();
                    let _ = writeln!(out, "{}", header.join(","));
                    for (d, row) in report.degrees.iter().zip(&report.values) {
                        let cells: Vec<String> = std::iter::once(d.to_string())
                            .chain(row.iter().map(|v| format!("\"{v}\"")))
                            .collect();
                        let _ = writeln!(out, "{}", cells.join(","));
                    }
                    print!("{out}");
                }
                Format::Text => {
                    println!(
                        "character table of {} (order {}, exponent {})",
                        report.group, report.order, report.exponent
                    );
                    println!("classes: {}", report.class_representatives.join("  "));
                    println!("sizes:   {:?}", report.class_sizes);
                    for row in &report.values {
                        println!("{}", row.join("  "));
                    }
                }
            }
            Ok(true)
        }
        Command::Decomp { source, p } => {
            let p = require_odd_prime(*p)?;
            let group = load_single(source, cap)?;
            let table = character_table(&group)?;
            let data = group_modular_data(&group, p, seed)?;
            let d = decomposition_matrix(&table, &data)?;
            let c = cartan(&d, p);
            #[derive(Serialize)]
            struct DecompReport {
                group: String,
                p: u64,
                decomposition: IntMatrix,
                cartan: hopfbrauer::brauer::CartanData,
            }
            let report = DecompReport {
                group: group.name().to_string(),
                p,
                decomposition: d,
                cartan: c,
            };
            let ok = report.cartan.p_power_exponent.is_some();
            match cli.format {
                Format::Json => emit_json(Meta::new(seed, vec![data.lift.metadata()]), &report)?,
                Format::Csv => {
                    let mut out = String::new();
                    matrix_csv("decomposition", &report.decomposition, &mut out);
                    matrix_csv("cartan", &report.cartan.cartan, &mut out);
                    let _ = writeln!(out, "# det = {}", report.cartan.det);
                    print!("{out}");
                }
                Format::Text => {
                    println!("{} at p = {p}", report.group);
                    println!("decomposition matrix (rows = ordinary, cols = Brauer):");
                    for row in &report.decomposition.entries {
                        println!("  {row:?}");
                    }
                    println!("cartan matrix:");
                    for row in &report.cartan.cartan.entries {
                        println!("  {row:?}");
                    }
                    match report.cartan.p_power_exponent {
                        Some(e) => println!("det(C) = {} = {p}^{e}", report.cartan.det),
                        None => println!("det(C) = {} (NOT a power of {p})", report.cartan.det),
                    }
                }
            }
            Ok(ok)
        }
        Command::Chars {
            source,
            characteristic,
            p,
        }
        | Command::Indicators {
            source,
            characteristic,
            p,
        } => {
            let with_indicators = matches!(cli.command, Command::Indicators { .. });
            let fg = load_factored(source, cap)?;
            let h = Bismash::new(fg)?;
            let (records, lifts) = match characteristic {
                CharSelector::Zero => {
                    let ctx = char_zero_context(&h)?;
                    let simples = char0_simples(&h, &ctx)?;
                    (
                        char0_report(&h, &ctx, &simples, with_indicators)?,
                        vec![ctx.lift.metadata()],
                    )
                }
                CharSelector::P => {
                    let p = require_odd_prime(p.ok_or_else(|| anyhow!("--char p requires --p"))?)?;
                    let ctx = modular_context(&h, p, seed)?;
                    let simples = modular_simples(&h, &ctx)?;
                    (
                        modular_report(&h, &ctx, &simples, with_indicators)?,
                        vec![ctx.lift.metadata()],
                    )
                }
            };
            match cli.format {
                Format::Json => emit_json(Meta::new(seed, lifts), &records)?,
                _ => {
                    for r in &records {
                        let nu = r
                            .indicator
                            .map(|v| format!(", indicator {v:+}"))
                            .unwrap_or_default();
                        println!(
                            "orbit {} (stabilizer order {}): dim {}{}{}",
                            r.orbit_rep,
                            r.stabilizer_order,
                            r.dim,
                            nu,
                            if r.self_dual { ", self-dual" } else { "" }
                        );
                        for (k, v) in &r.character {
                            println!("    {k} -> {v}");
                        }
                    }
                }
            }
            Ok(true)
        }
        Command::Brauer { source, p } => {
            let p = require_odd_prime(*p)?;
            let fg = load_factored(source, cap)?;
            let h = Bismash::new(fg)?;
            let ctx = modular_context(&h, p, seed)?;
            let simples = modular_simples(&h, &ctx)?;
            let records = modular_report(&h, &ctx, &simples, false)?;
            match cli.format {
                Format::Json => emit_json(Meta::new(seed, vec![ctx.lift.metadata()]), &records)?,
                _ => {
                    for r in &records {
                        println!(
                            "orbit {} (stabilizer order {}): dim {}",
                            r.orbit_rep, r.stabilizer_order, r.dim
                        );
                        for (k, v) in &r.character {
                            println!("    {k} -> {v}");
                        }
                    }
                }
            }
            Ok(true)
        }
        Command::Hdecomp { source, p } => {
            let p = require_odd_prime(*p)?;
            let fg = load_factored(source, cap)?;
            let h = Bismash::new(fg)?;
            let ctx0 = char_zero_context(&h)?;
            let ordinary = char0_simples(&h, &ctx0)?;
            let ctx = modular_context(&h, p, seed)?;
            let modular = modular_simples(&h, &ctx)?;
            let data = h_decomposition(&h, &ctx, &ordinary, &modular)?;
            let ok = data.cartan.p_power_exponent.is_some();
            match cli.format {
                Format::Json => emit_json(
                    Meta::new(seed, vec![ctx0.lift.metadata(), ctx.lift.metadata()]),
                    &data,
                )?,
                Format::Csv => {
                    let mut out = String::new();
                    matrix_csv("decomposition", &data.dhat, &mut out);
                    matrix_csv("cartan", &data.cartan.cartan, &mut out);
                    let _ = writeln!(out, "# det = {}", data.cartan.det);
                    print!("{out}");
                }
                Format::Text => {
                    println!("H-level decomposition at p = {p} (block-diagonal by orbit)");
                    println!("rows (orbit, ordinary): {:?}", data.row_labels);
                    println!("cols (orbit, Brauer):   {:?}", data.col_labels);
                    for row in &data.dhat.entries {
                        println!("  {row:?}");
                    }
                    match data.cartan.p_power_exponent {
                        Some(e) => println!("det(Cartan) = {} = {p}^{e}", data.cartan.det),
                        None => {
                            println!("det(Cartan) = {} (NOT a power of {p})", data.cartan.det)
                        }
                    }
                }
            }
            Ok(ok)
        }
        Command::Thompson { corpus, p } => {
            let mut spec = match corpus {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str::<CorpusSpec>(&text)
                        .with_context(|| "parsing the corpus file")?
                }
                None => CorpusSpec::default_corpus(),
            };
            if let Some(primes) = p {
                spec.primes = primes.clone();
            }
            for &q in &spec.primes {
                require_odd_prime(q)?;
            }
            let reports = run_corpus(&spec, seed)?;
            let all_pass = reports.iter().all(|r| r.pass);
            match cli.format {
                Format::Json => emit_json(Meta::new(seed, vec![]), &reports)?,
                _ => {
                    println!(
                        "{:<28} {:>3}  {:<6} {:<9} {:<9} {:<9} det(C)",
                        "group", "p", "lift", "orth(1)", "orth(2)", "orth(3)"
                    );
                    for r in &reports {
                        let lift = if r.lifts.iter().all(|l| l.verdict == Verdict::Pass) {
                            "PASS"
                        } else {
                            "FAIL"
                        };
                        let v = |x: &Verdict| match x {
                            Verdict::Pass => "PASS",
                            Verdict::Fail => "FAIL",
                            Verdict::Vacuous => "VACUOUS",
                        };
                        println!(
                            "{:<28} {:>3}  {:<6} {:<9} {:<9} {:<9} {}",
                            r.name,
                            r.p,
                            lift,
                            v(&r.orth.clause1),
                            v(&r.orth.clause2),
                            v(&r.orth.clause3),
                            r.cartan_det
                        );
                    }
                    println!("overall: {}", if all_pass { "PASS" } else { "FAIL" });
                    if !all_pass {
                        println!(
                            "note: FAIL indicates a defect in this artifact \
                             (conventions or axioms), not a refutation of the \
                             underlying mathematics"
                        );
                    }
                }
            }
            Ok(all_pass)
        }
        Command::Selftest => {
            // deterministic end-to-end battery on the small family
            let mut spec = CorpusSpec::default_corpus();
            spec.entries.truncate(2); // n = 3, 4
            spec.primes = vec![3, 5];
            let reports = run_corpus(&spec, seed)?;
            let all_pass = reports.iter().all(|r| r.pass);
            #[derive(Serialize)]
            struct SelfTest {
                corpus: CorpusSpec,
                reports: Vec<hopfbrauer::thompson::ThompsonReport>,
                pass: bool,
            }
            let body = SelfTest {
                corpus: spec,
                reports,
                pass: all_pass,
            };
            match cli.format {
                Format::Text => {
                    for r in &body.reports {
                        println!(
                            "{} p={}: {}",
                            r.name,
                            r.p,
                            if r.pass { "PASS" } else { "FAIL" }
                        );
                    }
                    println!("selftest: {}", if all_pass { "PASS" } else { "FAIL" });
                }
                _ => emit_json(Meta::new(seed, vec![]), &body)?,
            }
            Ok(all_pass)
        }
    }
}
