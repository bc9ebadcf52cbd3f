//! The `symlie` command line.
//!
//! [`run`] parses arguments, runs one verb and writes to the given streams;
//! the return value is the process exit code: 0 when every requested check
//! passes, 1 on a failed check or a prime collision, 2 on a usage error.

use std::ffi::OsString;
use std::io::Write;

use clap::parser::ValueSource;
use clap::{ArgGroup, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::Serialize;

use symlie::lie_closure::{g_lambda_report, theorem_a_verify_with, g_prime_dim_with, ClosureReport};
use symlie::modp::{FieldMode, DEFAULT_PRIME};
use symlie::{Error, Partition};

pub mod report;

use report::*;

/// Largest `n` for closures without `--allow-large`.
pub const MAX_CLOSURE_N: usize = 7;
/// Largest `n` for closures with `--allow-large` (prime field only).
pub const MAX_LARGE_CLOSURE_N: usize = 8;
pub const MAX_LIST_N: usize = 40;
pub const MAX_REP_N: usize = 10;
pub const MAX_HECKE_N: usize = 7;
pub const MAX_HULL_N: usize = 60;
pub const MAX_ENUMERATE: u64 = 1_000_000;

#[derive(Parser, Debug)]
#[command(name = "symlie", version, about = "Transposition Lie algebras of the symmetric groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Print JSON to stdout.
    #[arg(long, global = true)]
    pub json: bool,

    /// Print CSV to stdout (tabular verbs only).
    #[arg(long, global = true, conflicts_with = "json")]
    pub csv: bool,

    /// Seed for randomized checks.
    #[arg(long, global = true, env = "SYMLIE_SEED", default_value_t = 1)]
    pub seed: u64,

    /// Field for closures: `Q`, `Fp` (with `--prime`) or `Fp:<p>`.
    #[arg(long, global = true, env = "SYMLIE_MODE")]
    pub mode: Option<String>,

    /// Prime used by `--mode Fp`.
    #[arg(long, global = true, env = "SYMLIE_PRIME")]
    pub prime: Option<u64>,

    /// Truncation order K of the power series in h.
    #[arg(long, global = true, env = "SYMLIE_ORDER", default_value_t = 8)]
    pub order: usize,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "SYMLIE_JOBS")]
    pub jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// All partitions of n with dimension, class and transposition character.
    PartitionsList { n: usize },

    /// Standard tableaux of a shape.
    #[command(group(ArgGroup::new("what").required(true).args(["count", "enumerate"])))]
    Syt {
        shape: Partition,
        #[arg(long)]
        count: bool,
        #[arg(long)]
        enumerate: bool,
    },

    /// Seminormal matrices of a shape, or checks on them.
    #[command(group(ArgGroup::new("what").required(true).args(["matrices", "verify"])))]
    Rep {
        shape: Partition,
        #[arg(long)]
        matrices: bool,
        #[arg(long)]
        verify: bool,
    },

    /// Lie closure on one shape, or on all factors of g'_n with `--all n`.
    #[command(group(ArgGroup::new("target").required(true).args(["shape", "all"])))]
    Closure {
        shape: Option<Partition>,
        #[arg(long, value_name = "N")]
        all: Option<usize>,
        /// Permit n = 8 (prime field only).
        #[arg(long)]
        allow_large: bool,
    },

    /// Joint closure, per-shape dimensions and exact containment checks.
    TheoremA {
        n: usize,
        /// Permit n = 8 (prime field only).
        #[arg(long)]
        allow_large: bool,
    },

    /// Algebraic hull of the braid image on every proper shape of n.
    HullTable { n: usize },

    /// Quadratic relation, determinant law and even-word certificates.
    HeckeCheck {
        n: usize,
        /// Random even words per shape.
        #[arg(long, default_value_t = 5)]
        trials: usize,
    },

    /// Membership of sample tuples in G_n(q).
    GnqCheck { n: usize },
}

/// Failure of a verb, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::InvalidPartition(_)
            | Error::Parse(_)
            | Error::EmptyPartition
            | Error::NotADescent { .. }
            | Error::NotSelfConjugate(_)
            | Error::IsHook(_)
            | Error::OutOfRange { .. }
            | Error::NotPrime(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure { code: 1, message: e.to_string() }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Failure {
        Failure { code: 1, message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Failure {
        Failure { code: 1, message: e.to_string() }
    }
}

/// Settings after resolving flags, environment and defaults.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub mode: FieldMode,
    pub order: usize,
    pub seed: u64,
    pub jobs: usize,
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

fn from_flag(m: &clap::ArgMatches, id: &str) -> bool {
    m.value_source(id) == Some(ValueSource::CommandLine)
}

/// Flags beat environment variables, which beat defaults. A mode naming its
/// own prime conflicts with a different `--prime` given at the same level.
pub fn resolve(cli: &Cli, matches: &clap::ArgMatches) -> Result<Config, Failure> {
    let (_, sub) = matches.subcommand().expect("subcommand is required");
    let source = |id: &str| if from_flag(sub, id) || from_flag(matches, id) { 2 } else { 1 };
    let mode = match cli.mode.as_deref() {
        None | Some("Q") => FieldMode::ExactRational,
        Some("Fp") => FieldMode::prime(cli.prime.unwrap_or(DEFAULT_PRIME)).map_err(|e| usage(e.to_string()))?,
        Some(text) => {
            let mode: FieldMode = text.parse().map_err(|e: Error| usage(e.to_string()))?;
            if let (FieldMode::PrimeField(p), Some(q)) = (mode, cli.prime) {
                if p != q && source("mode") == source("prime") {
                    return Err(usage(format!("--mode {text} conflicts with --prime {q}")));
                }
                if p != q && source("prime") > source("mode") {
                    FieldMode::prime(q).map_err(|e| usage(e.to_string()))?
                } else {
                    mode
                }
            } else {
                mode
            }
        }
    };
    if cli.order == 0 {
        return Err(usage("--order must be at least 1"));
    }
    let jobs = match cli.jobs {
        Some(0) => return Err(usage("--jobs must be at least 1")),
        Some(j) => j,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    };
    Ok(Config { mode, order: cli.order, seed: cli.seed, jobs, format })
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return 2;
        }
    };
    let result = resolve(&cli, &matches).and_then(|cfg| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Failure { code: 1, message: e.to_string() })?;
        let mut buf = Vec::new();
        let verdict = pool.install(|| dispatch(&cli.command, &cfg, &mut buf))?;
        out.write_all(&buf)?;
        Ok(verdict)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn check_range(what: &str, n: usize, lo: usize, hi: usize) -> Result<(), Failure> {
    if n < lo || n > hi {
        return Err(usage(format!("{what} = {n} is outside the supported range {lo}..={hi}")));
    }
    Ok(())
}

fn closure_range(n: usize, allow_large: bool, mode: FieldMode) -> Result<(), Failure> {
    if allow_large {
        if n > MAX_CLOSURE_N && mode == FieldMode::ExactRational {
            return Err(usage(format!("n = {n} needs a prime field (--mode Fp)")));
        }
        check_range("n", n, 3, MAX_LARGE_CLOSURE_N)
    } else {
        check_range("n", n, 3, MAX_CLOSURE_N)
    }
}

fn no_csv(cfg: &Config) -> Result<(), Failure> {
    if cfg.format == Format::Csv {
        return Err(usage("--csv is only available for partitions-list and hull-table"));
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn dispatch(cmd: &Command, cfg: &Config, out: &mut Vec<u8>) -> Result<bool, Failure> {
    match cmd {
        Command::PartitionsList { n } => {
            check_range("n", *n, 1, MAX_LIST_N)?;
            let rows = partitions_list(*n);
            match cfg.format {
                Format::Json => emit_json(out, &PartitionsListReport { schema: 1, n: *n, rows })?,
                Format::Csv => {
                    let flat: Vec<PartitionCsvRow> = rows.iter().map(PartitionCsvRow::from).collect();
                    write_csv(out, &flat)?;
                }
                Format::Text => {
                    writeln!(out, "{:<24} {:>12} {:<6} {:<24} {:>12}", "shape", "dim", "class", "conjugate", "gamma")?;
                    for r in &rows {
                        writeln!(
                            out,
                            "{:<24} {:>12} {:<6} {:<24} {:>12}",
                            r.shape.to_string(),
                            r.dim,
                            r.class,
                            r.conjugate.to_string(),
                            r.gamma
                        )?;
                    }
                }
            }
            Ok(true)
        }
        Command::Syt { shape, count, enumerate } => {
            no_csv(cfg)?;
            syt(shape, *count && !*enumerate, cfg, out)?;
            Ok(true)
        }
        Command::Rep { shape, matrices, verify } => {
            no_csv(cfg)?;
            check_range("n", shape.size(), 1, MAX_REP_N)?;
            if *matrices && !*verify {
                rep_matrices(shape, cfg, out)?;
                Ok(true)
            } else {
                let r = rep_verify(shape)?;
                match cfg.format {
                    Format::Json => emit_json(out, &r)?,
                    _ => {
                        let c = &r.coxeter;
                        writeln!(out, "shape {}  dim {}", r.shape, r.dim)?;
                        writeln!(out, "coxeter relations   {} ({} checked)", ok(c.first_violation.is_none()), c.relations_checked)?;
                        if let Some(v) = &c.first_violation {
                            writeln!(out, "  first violation: {v}")?;
                        }
                        writeln!(out, "gram invariance     {}", ok(r.gram_invariant))?;
                        writeln!(out, "transposition sum   {} (scalar {})", ok(r.transposition_scalar_ok), r.transposition_scalar)?;
                        if let Some(b) = r.bilinear_twisted {
                            writeln!(out, "bilinear form       {}", ok(b))?;
                        }
                    }
                }
                Ok(r.pass)
            }
        }
        Command::Closure { shape, all, allow_large } => {
            no_csv(cfg)?;
            let progress = |round: usize, rank: usize| eprintln!("round {round}: rank {rank}");
            let report = match (shape, all) {
                (Some(l), _) => {
                    closure_range(l.size(), *allow_large, cfg.mode)?;
                    g_lambda_report(l, cfg.mode, Some(&progress))?
                }
                (None, Some(n)) => {
                    closure_range(*n, *allow_large, cfg.mode)?;
                    g_prime_dim_with(*n, cfg.mode, Some(&progress))?
                }
                (None, None) => return Err(usage("give a shape or --all n")),
            };
            print_closure(&report, cfg, out)?;
            Ok(report.pass)
        }
        Command::TheoremA { n, allow_large } => {
            no_csv(cfg)?;
            closure_range(*n, *allow_large, cfg.mode)?;
            let progress = |round: usize, rank: usize| eprintln!("round {round}: rank {rank}");
            let report = theorem_a_verify_with(*n, cfg.mode, Some(&progress))?;
            print_closure(&report, cfg, out)?;
            Ok(report.pass)
        }
        Command::HullTable { n } => {
            check_range("n", *n, 3, MAX_HULL_N)?;
            let rows = symlie::hecke::hull_table(*n)?;
            match cfg.format {
                Format::Json => emit_json(out, &HullTableReport { schema: 1, n: *n, rows })?,
                Format::Csv => {
                    let flat: Vec<HullRow> = rows.iter().map(HullRow::from).collect();
                    write_csv(out, &flat)?;
                }
                Format::Text => {
                    writeln!(out, "{:<28} {:>14} {:>10} {:>4} {:<11} {:<4} {:<9}", "shape", "dim", "gamma", "eta", "form", "G", "Gtilde")?;
                    for r in rows.iter().map(HullRow::from) {
                        writeln!(
                            out,
                            "{:<28} {:>14} {:>10} {:>4} {:<11} {:<4} {:<9}",
                            r.shape, r.dim, r.gamma, r.eta, r.form, r.g, r.gtilde
                        )?;
                    }
                }
            }
            Ok(true)
        }
        Command::HeckeCheck { n, trials } => {
            no_csv(cfg)?;
            check_range("n", *n, 3, MAX_HECKE_N)?;
            let r = hecke_check(*n, cfg.order, *trials, cfg.seed)?;
            match cfg.format {
                Format::Json => emit_json(out, &r)?,
                _ => {
                    writeln!(out, "n = {}, K = {}, seed {}", r.n, r.order, r.seed)?;
                    writeln!(out, "{:<20} {:<10} {:<12}", "shape", "quadratic", "determinant")?;
                    for s in &r.shapes {
                        writeln!(out, "{:<20} {:<10} {:<12}", s.shape.to_string(), ok(s.quadratic), ok(s.determinant))?;
                    }
                    let t = &r.table1;
                    let failed = t.certificates.iter().filter(|c| !c.ok).count();
                    writeln!(out, "even-word certificates: {} checked, {} failed", t.certificates.len(), failed)?;
                    writeln!(out, "{}", if r.pass { "PASS" } else { "FAIL" })?;
                }
            }
            Ok(r.pass)
        }
        Command::GnqCheck { n } => {
            no_csv(cfg)?;
            check_range("n", *n, 3, MAX_HECKE_N)?;
            let r = gnq_check(*n, cfg.order, cfg.seed)?;
            match cfg.format {
                Format::Json => emit_json(out, &r)?,
                _ => {
                    writeln!(out, "n = {}, K = {}, seed {}", r.n, r.order, r.seed)?;
                    for c in &r.cases {
                        let conds: Vec<String> =
                            c.report.conditions.iter().map(|k| format!("{}:{}", &k.name[..1], ok(k.ok))).collect();
                        writeln!(
                            out,
                            "{:<28} {}  expected {:<22} {}",
                            c.name,
                            conds.join(" "),
                            c.expected,
                            if c.as_expected { "ok" } else { "UNEXPECTED" }
                        )?;
                        for f in &c.report.failures {
                            writeln!(out, "    {f}")?;
                        }
                    }
                }
            }
            Ok(r.pass)
        }
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

fn write_csv<T: Serialize>(out: &mut dyn Write, rows: &[T]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn syt(shape: &Partition, count_only: bool, cfg: &Config, out: &mut dyn Write) -> Result<(), Failure> {
    let count = shape.dimension();
    if count_only {
        match cfg.format {
            Format::Json => emit_json(out, &SytCount { schema: 1, shape: shape.clone(), count: count.to_string() })?,
            _ => writeln!(out, "{count}")?,
        }
        return Ok(());
    }
    if count > MAX_ENUMERATE.into() {
        return Err(usage(format!("{shape} has {count} tableaux; --enumerate is limited to {MAX_ENUMERATE}")));
    }
    let list = symlie::tableaux::enumerate_syt(shape);
    match cfg.format {
        Format::Json => {
            let tableaux = list.iter().map(|t| t.to_json()).collect();
            emit_json(out, &SytList { schema: 1, shape: shape.clone(), tableaux })?
        }
        _ => {
            for (i, t) in list.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                writeln!(out, "{t}")?;
            }
        }
    }
    Ok(())
}

fn rep_matrices(shape: &Partition, cfg: &Config, out: &mut dyn Write) -> Result<(), Failure> {
    let h = symlie::seminormal::RepHandle::new(shape);
    match cfg.format {
        Format::Json => {
            let dumps: Vec<symlie::MatrixDump> = h
                .gens()
                .iter()
                .enumerate()
                .map(|(i, m)| symlie::MatrixDump::new(shape.clone(), i + 1, m))
                .collect();
            emit_json(out, &RepMatrices { schema: 1, shape: shape.clone(), generators: dumps })?
        }
        _ => {
            for (i, m) in h.gens().iter().enumerate() {
                writeln!(out, "s_{} =\n{m}", i + 1)?;
            }
        }
    }
    Ok(())
}

fn print_closure(r: &ClosureReport, cfg: &Config, out: &mut dyn Write) -> Result<(), Failure> {
    if cfg.format == Format::Json {
        return emit_json(out, r);
    }
    writeln!(out, "n = {}, mode {}, {} rounds, {} ms", r.n, r.mode, r.rounds, r.elapsed_ms)?;
    writeln!(out, "{:<20} {:>8} {:>10} {:<9}", "block", "dim", "predicted", "class")?;
    for b in &r.blocks {
        let class = serde_json::to_value(b.class)?;
        writeln!(out, "{:<20} {:>8} {:>10} {:<9}", b.shape.to_string(), b.dim, b.predicted, class.as_str().unwrap_or(""))?;
    }
    writeln!(out, "total {} (predicted {})", r.total, r.predicted_total)?;
    for c in &r.containment_checks {
        writeln!(out, "  {:<36} {}", c.name, ok(c.ok))?;
    }
    writeln!(out, "{}", if r.pass { "PASS" } else { "FAIL" })?;
    Ok(())
}
