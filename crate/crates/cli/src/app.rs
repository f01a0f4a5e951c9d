//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use polyalg::metrics;
use polyalg::rel::{eval, parse_query, Query, Schema};
use polyalg::{Gf2, Integer, Real, Ring};

use crate::bench;
use crate::catalog::{self, Catalog, RingKind};
use crate::failure::{Failure, Outcome};
use crate::render::{self, Format, Stats};

#[derive(Parser, Debug)]
#[command(name = "polyalg", version, about = "Relational queries over polysets")]
struct Cli {
    /// Catalog directory.
    #[arg(long, global = true, env = "POLYALG_CATALOG", default_value = ".polyalg")]
    catalog: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load a CSV file into the catalog as a named relation.
    Load {
        csv: PathBuf,
        #[arg(long = "as", value_name = "NAME")]
        name: String,
        /// Attribute declaration, e.g. `A:str,B:int`.
        #[arg(long)]
        schema: String,
        /// Coefficient ring; fixed by the first load into a catalog.
        #[arg(long, value_enum)]
        ring: Option<RingKind>,
        /// Overwrite an existing relation of the same name.
        #[arg(long)]
        replace: bool,
    },
    /// Evaluate an s-expression query.
    Query {
        expr: String,
        /// Append operation counts and wall time.
        #[arg(long)]
        stats: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print a stored relation.
    Show {
        name: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Run a benchmark.
    Bench {
        #[command(subcommand)]
        which: BenchCommand,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BenchFormat {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
enum BenchCommand {
    /// Triangle query on full-bipartite instances.
    Triangle {
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        /// Also run the naive distributive expansion, for sizes up to --naive-max.
        #[arg(long)]
        with_naive: bool,
        #[arg(long, default_value_t = 16)]
        naive_max: usize,
        #[arg(long, value_enum, default_value_t = BenchFormat::Table)]
        format: BenchFormat,
    },
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match dispatch(cli, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.exit_code()
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome<()> {
    match cli.command {
        Command::Load { csv, name, schema, ring, replace } => {
            let schema = Schema::parse(&schema).map_err(|e| Failure::usage(format!("bad --schema: {e}")))?;
            let mut cat = Catalog::open(&cli.catalog)?;
            let rows = cat.add(&name, &schema, &csv, ring, replace)?;
            writeln!(out, "loaded {name} ({schema}) over {}: {rows} distinct rows", cat.ring().name())?;
        }
        Command::Query { expr, stats, format } => {
            let q = parse_query(&expr)?;
            let cat = Catalog::open(&cli.catalog)?;
            let (text, st) = execute(&cat, &q, format, stats)?;
            out.write_all(text.as_bytes())?;
            if let (Some(st), Format::Csv) = (st, format) {
                err.write_all(render::stats_table(&st).as_bytes())?;
            }
        }
        Command::Show { name, format } => {
            let cat = Catalog::open(&cli.catalog)?;
            if cat.entry(&name).is_none() {
                return Err(Failure::data(format!("unknown relation `{name}`")));
            }
            let (text, _) = execute(&cat, &Query::Load(name), format, false)?;
            out.write_all(text.as_bytes())?;
        }
        Command::Bench { which: BenchCommand::Triangle { sizes, repeats, with_naive, naive_max, format } } => {
            let report = bench::triangle(&sizes, repeats, with_naive.then_some(naive_max))?;
            match format {
                BenchFormat::Table => out.write_all(report.to_table().as_bytes())?,
                BenchFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
            }
        }
    }
    Ok(())
}

/// Evaluates `q` over the catalog's ring and renders the result.
pub fn execute(cat: &Catalog, q: &Query, format: Format, stats: bool) -> Outcome<(String, Option<Stats>)> {
    match cat.ring() {
        RingKind::Z => execute_in::<Integer>(cat, q, format, stats),
        RingKind::Gf2 => execute_in::<Gf2>(cat, q, format, stats),
        RingKind::Real => execute_in::<Real>(cat, q, format, stats),
    }
}

fn execute_in<K: Ring>(cat: &Catalog, q: &Query, format: Format, stats: bool) -> Outcome<(String, Option<Stats>)> {
    let rels = cat.load_all::<K>(&catalog::referenced(q))?;
    let start = Instant::now();
    let (result, m) = metrics::measure(|| eval(q, &rels));
    let st = Stats { metrics: m, elapsed: start.elapsed() };
    let result = result?;
    let shown = stats.then_some(st);
    let inline = if format == Format::Csv { None } else { shown.as_ref() };
    Ok((render::render(&result, format, inline)?, shown))
}
