//! `ramsey33`: command-line access to the minimal (3,3)-Ramsey graph search.
//!
//! Graphs travel as graph6 lines on stdin/stdout or through `--in`/`--out`.
//! Exit status: 0 on success, 2 when a cost guard refuses a run, 1 on bad input.

use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use ramsey_core::arrowing::{arrows_33, is_minimal_ramsey, multiplicity};
use ramsey_core::bits::set_of;
use ramsey_core::extension::{is_marked_set, DEFAULT_COLORING_CAP};
use ramsey_core::generator::{GenSpec, Generator};
use ramsey_core::graph6::{read_graph6_lines, to_graph6};
use ramsey_core::pipeline::{
    report_properties, run_algorithm1, run_algorithm2, run_algorithm3, run_alpha2_census,
    PipelineError, RunManifest, RunOptions, RunResult,
};
use ramsey_core::Graph;

#[derive(Parser, Debug)]
#[command(
    name = "ramsey33",
    version,
    about = "Search for minimal (3,3)-Ramsey graphs"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Input file of graph6 lines (default: stdin)
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Output file (default: stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write a JSON run report here
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Allow the extended-scale runs
    #[arg(long, global = true)]
    extended: bool,
    /// Lift every cost guard
    #[arg(long, global = true)]
    force: bool,
    /// Skip extension hosts with more (3,3)-free colourings than this
    #[arg(long, global = true, default_value_t = DEFAULT_COLORING_CAP)]
    coloring_cap: usize,
    /// Emit streamed graphs in a deterministic order (single worker)
    #[arg(long, global = true)]
    strict_order: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate non-isomorphic graphs under degree, clique, chromatic and independence bounds
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        min_degree: Option<usize>,
        /// Exclusive clique bound: output has ω < q
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        min_chromatic: Option<usize>,
        #[arg(long)]
        alpha_max: Option<usize>,
    },
    /// Print whether each input graph arrows (3,3)
    Arrow,
    /// Print whether each input graph is a minimal (3,3)-Ramsey graph
    Minimal,
    /// Print whether a vertex set is marked in each input host
    Marked {
        /// Comma-separated vertices (default: every vertex)
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
    },
    /// Generate-and-filter search for n-vertex minimal graphs
    Pipeline {
        #[arg(long)]
        n: usize,
    },
    /// Extension search from k-vertex hosts with ω < q
    Extend {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 6)]
        q: usize,
        /// Only build n-vertex graphs
        #[arg(long)]
        n: Option<usize>,
    },
    /// Minimal graphs of order n with independence number 2
    Alpha2 {
        #[arg(long)]
        n: usize,
    },
    /// CSV histograms of |E|, δ, Δ, α, χ and |Aut| over the input graphs
    Props,
    /// Minimum number of monochromatic triangles for each input graph
    Multiplicity,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Pipeline(e) if e.is_guard() => 2,
            _ => 1,
        }
    }
}

impl From<ramsey_core::generator::GenError> for CliError {
    fn from(e: ramsey_core::generator::GenError) -> Self {
        CliError::Pipeline(e.into())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ramsey33: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let jobs = if cli.common.strict_order {
        Some(1)
    } else {
        cli.common.jobs
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(CliError::Input("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(j);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(&cli))
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let c = &cli.common;
    let opts = RunOptions {
        extended: c.extended,
        force: c.force,
        coloring_cap: c.coloring_cap,
    };
    match &cli.command {
        Command::Gen {
            n,
            min_degree,
            q,
            min_chromatic,
            alpha_max,
        } => {
            let spec = GenSpec {
                n: *n,
                min_degree: *min_degree,
                max_clique: *q,
                min_chromatic: *min_chromatic,
                alpha_max: *alpha_max,
            };
            let gen = Generator::new(spec, c.force)?;
            let out = Mutex::new(output(c)?);
            let failed = Mutex::new(None);
            let emit = |g: Graph| {
                let mut w = out.lock().expect("output lock");
                if let Err(e) = writeln!(w, "{}", to_graph6(&g)) {
                    failed.lock().expect("error lock").get_or_insert(e);
                }
            };
            if c.strict_order {
                gen.for_each_sequential(emit);
            } else {
                gen.for_each_parallel(emit);
            }
            if let Some(e) = failed.into_inner().expect("error lock") {
                return Err(e.into());
            }
            out.into_inner().expect("output lock").flush()?;
            Ok(())
        }
        Command::Arrow => per_line(c, |g| Ok(arrows_33(g).to_string())),
        Command::Minimal => per_line(c, |g| Ok(is_minimal_ramsey(g).to_string())),
        Command::Multiplicity => per_line(c, |g| Ok(multiplicity(g).value.to_string())),
        Command::Marked { set } => per_line(c, |g| {
            let m = match set {
                Some(vs) => {
                    if let Some(&v) = vs.iter().find(|&&v| v >= g.order()) {
                        return Err(CliError::Input(format!(
                            "vertex {v} is outside the {}-vertex host {}",
                            g.order(),
                            to_graph6(g)
                        )));
                    }
                    set_of(vs.iter().copied())
                }
                None => g.vertex_set(),
            };
            let marked = is_marked_set(g, m).map_err(|e| CliError::Input(e.to_string()))?;
            Ok(marked.to_string())
        }),
        Command::Props => {
            let graphs = read_input(c)?;
            let table = report_properties(&graphs)?;
            let mut w = output(c)?;
            w.write_all(table.to_csv().as_bytes())?;
            w.flush()?;
            Ok(())
        }
        Command::Pipeline { n } => finish(c, run_algorithm1(*n, &opts)?),
        Command::Extend { k, q, n } => {
            let r = match n {
                Some(n) => run_algorithm3(*n, *k, *q, &opts)?,
                None => run_algorithm2(*k, *q, &opts)?,
            };
            finish(c, r)
        }
        Command::Alpha2 { n } => finish(c, run_alpha2_census(*n, &opts)?),
    }
}

fn output(c: &Common) -> Result<Box<dyn Write + Send>, CliError> {
    Ok(match &c.out {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn input(c: &Common) -> Result<Box<dyn BufRead>, CliError> {
    Ok(match &c.input {
        Some(p) => Box::new(BufReader::new(
            fs::File::open(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufReader::new(io::stdin())),
    })
}

fn read_input(c: &Common) -> Result<Vec<Graph>, CliError> {
    read_graph6_lines(input(c)?)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Input(e.to_string()))
}

/// One output line per input graph, in input order.
fn per_line<F>(c: &Common, f: F) -> Result<(), CliError>
where
    F: Fn(&Graph) -> Result<String, CliError> + Sync + Send,
{
    let graphs = read_input(c)?;
    let lines: Vec<String> = graphs.par_iter().map(f).collect::<Result<_, _>>()?;
    let mut w = output(c)?;
    for l in lines {
        writeln!(w, "{l}")?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the result set, the report, and a manifest beside the output file.
fn finish(c: &Common, mut r: RunResult) -> Result<(), CliError> {
    let mut outputs = Vec::new();
    match &c.out {
        Some(p) => {
            ramsey_core::pipeline::write_graph_set(p, &r.graphs)?;
            outputs.push(p.clone());
        }
        None => {
            let mut w = BufWriter::new(io::stdout());
            for g in &r.graphs {
                writeln!(w, "{}", to_graph6(g))?;
            }
            w.flush()?;
        }
    }
    r.report.outputs = outputs.iter().map(|p| p.display().to_string()).collect();
    if let Some(path) = &c.report {
        r.report.write(path)?;
    }
    if let Some(out) = outputs.first() {
        let manifest = RunManifest::new(&r.report, &[], &outputs)?;
        manifest.write(&manifest_path(out))?;
    }
    for s in &r.report.stages {
        log::info!("{}: {}", s.name, s.count);
    }
    Ok(())
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}
