//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 domain error, 3 refutation
//! found by `check-embed`.

pub mod parse;

use std::cmp::Ordering;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{self, BenchConfig, Rep};
use crate::brw::Fuel;
use crate::cnf::{self, Cnf, CnfClass, CnfError};
use crate::embed::{self, ctob, EmbedError};
use crate::finord::{self, FinOrd};
use crate::hierarchy;

pub use parse::{eval_cnf, parse, parse_cnf, OrdExpr, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_REFUTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ordinals",
    version,
    about = "Ordinal arithmetic below epsilon-zero"
)]
struct Args {
    /// Probe horizon for Brouwer-tree comparisons.
    #[arg(long, global = true, default_value_t = 64)]
    fuel: u64,
    /// Step budget for hierarchy evaluation.
    #[arg(long, global = true, default_value_t = 100_000_000)]
    budget: u64,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RepArg {
    Cnf,
    Brw,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare two ordinals: LT, EQ or GT.
    Cmp { a: String, b: String },
    /// Ordinal sum A + B.
    Add { a: String, b: String },
    /// Ordinal product A * B.
    Mul { a: String, b: String },
    /// A - B, defined when B <= A.
    Sub { a: String, b: String },
    /// Quotient and remainder of A by B.
    Divmod { a: String, b: String },
    /// zero, succ <pred> or limit.
    Classify { a: String },
    /// First K elements of the fundamental sequence of a limit.
    Fundseq { a: String, k: u64 },
    /// Hardy function H_A(N).
    Hardy {
        #[arg(long, value_enum, default_value = "cnf")]
        rep: RepArg,
        a: String,
        n: u64,
    },
    /// Check that the embedding into Brouwer trees preserves order and arithmetic.
    CheckEmbed {
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Time H_{w^n}(1) and write CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "cnf,brw")]
        reps: Vec<Rep>,
        #[arg(long, value_delimiter = ',', default_value = "500,1000,1500,2000")]
        ns: Vec<u64>,
        #[arg(long, default_value_t = 5)]
        samples: u32,
        #[arg(long, default_value_t = 1)]
        warmup: u32,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check whether a finite order is an ordinal.
    FinordCheck { file: PathBuf },
    /// Find the simulation between two finite ordinals.
    FinordSim { file1: PathBuf, file2: PathBuf },
}

/// A failed command: message and exit code.
struct Failure(i32, String);

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        Failure(EXIT_PARSE, e.to_string())
    }
}

impl From<CnfError> for Failure {
    fn from(e: CnfError) -> Failure {
        Failure(EXIT_DOMAIN, e.to_string())
    }
}

impl From<EmbedError> for Failure {
    fn from(e: EmbedError) -> Failure {
        Failure(EXIT_DOMAIN, e.to_string())
    }
}

impl From<hierarchy::HierarchyError> for Failure {
    fn from(e: hierarchy::HierarchyError) -> Failure {
        Failure(EXIT_DOMAIN, e.to_string())
    }
}

impl From<finord::FinOrdError> for Failure {
    fn from(e: finord::FinOrdError) -> Failure {
        let code = match e {
            finord::FinOrdError::Parse(_) => EXIT_PARSE,
            finord::FinOrdError::InvalidOrder => EXIT_DOMAIN,
        };
        Failure(code, e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure(EXIT_DOMAIN, format!("IoError: {e}"))
    }
}

/// Runs the command line against the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// Runs the command line, writing results to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_OK,
                _ => EXIT_PARSE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(&args, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "{msg}");
            code
        }
    }
}

fn dispatch(args: &Args, out: &mut dyn Write) -> Result<i32, Failure> {
    let fuel = Fuel(args.fuel);
    match &args.cmd {
        Command::Cmp { a, b } => {
            let word = match cnf::compare(&parse_cnf(a)?, &parse_cnf(b)?) {
                Ordering::Less => "LT",
                Ordering::Equal => "EQ",
                Ordering::Greater => "GT",
            };
            writeln!(out, "{word}")?;
        }
        Command::Add { a, b } => writeln!(out, "{}", cnf::add(&parse_cnf(a)?, &parse_cnf(b)?))?,
        Command::Mul { a, b } => writeln!(out, "{}", cnf::mul(&parse_cnf(a)?, &parse_cnf(b)?))?,
        Command::Sub { a, b } => writeln!(out, "{}", cnf::sub(&parse_cnf(a)?, &parse_cnf(b)?)?)?,
        Command::Divmod { a, b } => {
            let (q, r) = cnf::divmod(&parse_cnf(a)?, &parse_cnf(b)?)?;
            writeln!(out, "q={q} r={r}")?;
        }
        Command::Classify { a } => match cnf::classify(&parse_cnf(a)?) {
            CnfClass::Zero => writeln!(out, "zero")?,
            CnfClass::Succ(p) => writeln!(out, "succ {p}")?,
            CnfClass::Lim(_) => writeln!(out, "limit")?,
        },
        Command::Fundseq { a, k } => {
            let a = parse_cnf(a)?;
            let CnfClass::Lim(f) = cnf::classify(&a) else {
                return Err(EmbedError::NotALimit(a).into());
            };
            let items: Vec<String> = (0..*k).map(|i| f.at(i).to_string()).collect();
            writeln!(out, "{}", items.join(", "))?;
        }
        Command::Hardy { rep, a, n } => {
            let a = parse_cnf(a)?;
            let budget = Some(args.budget);
            let r = match rep {
                RepArg::Cnf => hierarchy::hardy_cnf_budget(&a, *n, budget)?,
                RepArg::Brw => hierarchy::hardy_brw_budget(&ctob(&a), *n, budget)?,
            };
            writeln!(out, "{}", r.value)?;
        }
        Command::CheckEmbed { bound } => {
            if *bound > cnf::DEFAULT_ENUM_BOUND {
                return Err(CnfError::BoundTooLarge {
                    requested: *bound,
                    bound: cnf::DEFAULT_ENUM_BOUND,
                }
                .into());
            }
            let mut report = embed::check_order_preservation(*bound, fuel);
            report.merge(embed::check_arith_preservation(*bound, fuel));
            writeln!(out, "{report}")?;
            if report.refutations > 0 {
                return Ok(EXIT_REFUTED);
            }
        }
        Command::Bench {
            reps,
            ns,
            samples,
            warmup,
            out: path,
        } => {
            let cfg = BenchConfig {
                reps: reps.clone(),
                ns: ns.clone(),
                warmup: *warmup,
                samples: *samples,
                budget: Some(args.budget),
            };
            let (rows, failure) = match bench::run_bench(&cfg) {
                Ok(rows) => (rows, None),
                Err(e) => {
                    let msg = e.to_string();
                    (e.rows, Some(Failure(EXIT_DOMAIN, msg)))
                }
            };
            match path {
                Some(p) => bench::write_csv(BufWriter::new(File::create(p)?), &rows)?,
                None => bench::write_csv(&mut *out, &rows)?,
            }
            if let Some(f) = failure {
                return Err(f);
            }
        }
        Command::FinordCheck { file } => {
            let a = read_finord(file)?;
            if a.is_ordinal() {
                writeln!(out, "ordinal rank={}", finord::rank(&a))?;
            } else {
                writeln!(
                    out,
                    "not-ordinal transitive={} extensional={} wellfounded={}",
                    a.check_transitive(),
                    a.check_extensional(),
                    a.check_wellfounded()
                )?;
            }
        }
        Command::FinordSim { file1, file2 } => {
            let (a, b) = (read_finord(file1)?, read_finord(file2)?);
            match finord::find_simulation(&a, &b)? {
                None => writeln!(out, "none")?,
                Some(w) => {
                    let map: Vec<String> = w.map.iter().map(usize::to_string).collect();
                    match w.bounded {
                        Some(y) => writeln!(out, "map=[{}] bounded={y}", map.join(","))?,
                        None => writeln!(out, "map=[{}] bounded=none", map.join(","))?,
                    }
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn read_finord(path: &Path) -> Result<FinOrd, Failure> {
    let text = std::fs::read_to_string(path)?;
    Ok(text.parse::<FinOrd>()?)
}

/// Text that parses back to `a`.
pub fn print(a: &Cnf) -> String {
    a.to_string()
}
