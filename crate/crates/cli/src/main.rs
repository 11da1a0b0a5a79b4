//! `census`: counts groups of a given order and checks the counts against
//! brute-force oracles.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or unsupported
//! input, 3 resource cap.

mod render;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use census_core::cayley::group_tables;
use census_core::gl::enumerate_gl;
use census_core::gl::subgroups::count_subgroup_classes;
use census_core::verify::{self, Suite, VerifyOptions};
use census_core::{count_groups, CensusError, GroupCount, Limits};

use render::Format;

#[derive(Parser)]
#[command(name = "census", version, about = "Exact counts of groups of order n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Lift the oracle caps (GL(3,5), Cayley orders up to 20).
    /// CENSUS_HEAVY_LIMIT overrides the matrix group cap.
    #[arg(long, global = true)]
    allow_heavy: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Number of groups of order N.
    Count {
        n: u64,
        /// Print each summand of the formula.
        #[arg(long)]
        explain: bool,
    },
    /// Counts for every order in [A, B].
    Range(RangeArgs),
    /// Same as `range --format csv`.
    Table(RangeArgs),
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
    },
    /// Run a brute-force oracle directly.
    Oracle {
        #[command(subcommand)]
        kind: OracleKind,
    },
}

#[derive(Args)]
struct RangeArgs {
    a: u64,
    b: u64,
    /// Omit orders outside the supported shapes instead of listing them.
    #[arg(long)]
    skip_unsupported: bool,
}

#[derive(Subcommand)]
enum OracleKind {
    /// Conjugacy classes of subgroups of order R in GL(D, P).
    Gl {
        #[arg(short)]
        d: u32,
        #[arg(short)]
        p: u64,
        #[arg(short)]
        r: u64,
        /// Print one subgroup per class.
        #[arg(long)]
        witnesses: bool,
    },
    /// Isomorphism classes of groups of order N by Cayley-table search.
    Cayley {
        #[arg(short)]
        n: u32,
        /// Print one multiplication table per class.
        #[arg(long)]
        witnesses: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    PaperValues,
    GlGrid,
    Cayley,
    Identity,
    Integrality,
    Squarefree,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::PaperValues => Suite::PaperValues,
            SuiteArg::GlGrid => Suite::GlGrid,
            SuiteArg::Cayley => Suite::Cayley,
            SuiteArg::Identity => Suite::Identity,
            SuiteArg::Integrality => Suite::Integrality,
            SuiteArg::Squarefree => Suite::Squarefree,
            SuiteArg::All => Suite::All,
        }
    }
}

enum Failure {
    Verification,
    Usage(String),
    Census(CensusError),
    Io(io::Error),
}

impl From<CensusError> for Failure {
    fn from(e: CensusError) -> Self {
        Failure::Census(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Census(e)) => {
            eprintln!("error: {e}");
            match e {
                CensusError::ResourceCap { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let format = if cli.json { Format::Json } else { cli.format };
    let limits = if cli.allow_heavy {
        Limits::heavy_from_env()
    } else {
        Limits::default()
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Count { n, explain } => {
            let g = count_groups(*n)?;
            render::count(&mut out, &g, format, *explain)?;
        }
        Command::Range(args) => range(&mut out, args, format)?,
        Command::Table(args) => range(&mut out, args, Format::Csv)?,
        Command::Verify { suite } => {
            let opts = VerifyOptions {
                heavy: cli.allow_heavy,
                limits,
                ..VerifyOptions::default()
            };
            let suite = Suite::from(*suite);
            let reports = verify::run(suite, &opts)?;
            render::reports(&mut out, &reports, format, suite == Suite::All)?;
            if reports.iter().any(|r| !r.passed()) {
                out.flush()?;
                return Err(Failure::Verification);
            }
        }
        Command::Oracle {
            kind: OracleKind::Gl { d, p, r, witnesses },
        } => {
            let g = enumerate_gl(*d, *p, &limits)?;
            let s = count_subgroup_classes(&g, *r)?;
            render::gl_oracle(&mut out, &g, &s, format, *witnesses)?;
        }
        Command::Oracle {
            kind: OracleKind::Cayley { n, witnesses },
        } => {
            let tables = group_tables(*n, &limits)?;
            render::cayley_oracle(&mut out, *n, &tables, format, *witnesses)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn range(out: &mut impl Write, args: &RangeArgs, format: Format) -> Result<(), Failure> {
    if args.a == 0 || args.a > args.b {
        return Err(Failure::Usage(format!(
            "invalid range [{}, {}]: need 1 <= a <= b",
            args.a, args.b
        )));
    }
    let results: Vec<(u64, Result<GroupCount, CensusError>)> = (args.a..=args.b)
        .into_par_iter()
        .map(|n| (n, count_groups(n)))
        .collect();
    let mut rows = Vec::new();
    let mut unsupported = Vec::new();
    for (n, r) in results {
        match r {
            Ok(g) => rows.push(g),
            Err(CensusError::Unsupported { exponents }) => unsupported.push((n, exponents)),
            Err(e) => return Err(e.into()),
        }
    }
    render::rows(out, &rows, format)?;
    if !args.skip_unsupported && !unsupported.is_empty() {
        out.flush()?;
        let mut err = io::stderr().lock();
        for (n, exponents) in unsupported {
            writeln!(err, "unsupported: {n} (exponents {exponents:?})")?;
        }
    }
    Ok(())
}
