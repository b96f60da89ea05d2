use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperdense::io::report::{
    factor_reports, write_trace, EigenReport, MatrixDump, OracleReport, Report, SubgraphReport,
    VerifyReport,
};
use hyperdense::io::{
    generate_random, parse_hypergraph, serialize_hypergraph, FormatError, GeneratorParams, Parsed,
};
use hyperdense::oracle::{
    brute_force_densest, brute_force_dm, brute_force_spectral, OracleError, OracleLimits,
};
use hyperdense::{
    dm_decompose, optimal_support_matrix, solve, spectral_decompose, transport_dual,
    SolverConfig, SweepMode, WeightedHypergraph,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "hyperdense", version, about = "Densest subhypergraphs and their decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a densest subgraph and certify it
    Solve {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write one JSON line per sweep
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the final support matrix as JSON
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Spectral decomposition into factors of decreasing density
    Decompose {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Print the dual hypergraph in file format
    Dual {
        file: PathBuf,
        #[arg(long)]
        strip_degenerate: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Dulmage-Mendelsohn decomposition (unit weights only)
    Dm {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Exhaustive results for small instances
    Oracle {
        file: PathBuf,
        #[arg(long)]
        strip_degenerate: bool,
    },
    /// Compare solver results with the exhaustive oracles
    Verify {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Write a random instance
    Gen(GenArgs),
    /// Compare the Gram eigenvalue of an optimal support matrix with the density
    Eigen {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_sweeps: u64,
    #[arg(long, default_value_t = 1e-10)]
    stop_gap: f64,
    /// Sweep with K worker threads
    #[arg(long, value_name = "K", value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Drop empty edges and isolated vertices instead of rejecting them
    #[arg(long)]
    strip_degenerate: bool,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            max_sweeps: self.max_sweeps as usize,
            stop_gap: self.stop_gap,
            mode: match self.threads {
                Some(k) => SweepMode::Parallel { workers: k as usize },
                None => SweepMode::Sequential,
            },
            ..SolverConfig::default()
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    min_size: usize,
    #[arg(long, default_value_t = 4)]
    max_size: usize,
    #[arg(long, default_value_t = 1)]
    min_weight: u64,
    #[arg(long, default_value_t = 1)]
    max_weight: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Error reported as JSON on stderr.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
    line: Option<usize>,
}

impl Failure {
    fn new(kind: &'static str, message: impl ToString) -> Self {
        Failure {
            code: 1,
            kind,
            message: message.to_string(),
            line: None,
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure {
            line: e.line(),
            ..Failure::new("parse", e)
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::new("oracle", e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new("io", e)
    }
}

type Outcome = Result<(), Failure>;

fn load(path: &Path, strip_degenerate: bool) -> Result<Parsed, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))?;
    Ok(parse_hypergraph(&text, strip_degenerate)?)
}

fn emit(report: &Report) -> Outcome {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, report).map_err(|e| Failure::new("io", e))?;
    writeln!(out)?;
    Ok(())
}

fn base_report(command: &str, parsed: &Parsed) -> Report {
    let mut report = Report::new(command, &parsed.hypergraph);
    let s = &parsed.stripped;
    if !s.removed_edges.is_empty() || !s.removed_vertices.is_empty() {
        report.stripped = Some(s.clone());
    }
    report
}

fn write_file(path: &Path, write: impl FnOnce(&mut BufWriter<fs::File>) -> io::Result<()>) -> Outcome {
    let file = fs::File::create(path)
        .map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))?;
    let mut out = BufWriter::new(file);
    write(&mut out)?;
    out.flush()?;
    Ok(())
}

fn cmd_solve(file: &Path, args: &SolverArgs, trace: Option<&Path>, matrix: Option<&Path>) -> Outcome {
    let parsed = load(file, args.strip_degenerate)?;
    let out = solve(&parsed.hypergraph, &args.config()).map_err(|e| Failure::new("solver", e))?;
    if let Some(path) = trace {
        write_file(path, |w| write_trace(&out.trace.records, w))?;
    }
    if let Some(path) = matrix {
        write_file(path, |w| {
            serde_json::to_writer(&mut *w, &MatrixDump::of(&out.matrix))?;
            writeln!(w)
        })?;
    }
    emit(&base_report("solve", &parsed).with_solve(&out))
}

fn cmd_decompose(file: &Path, args: &SolverArgs) -> Outcome {
    let parsed = load(file, args.strip_degenerate)?;
    let dec = spectral_decompose(&parsed.hypergraph, &args.config())
        .map_err(|e| Failure::new("solver", e))?;
    let mut report = base_report("decompose", &parsed);
    report.decomposition = Some(factor_reports(&dec));
    emit(&report)
}

fn cmd_dual(file: &Path, strip_degenerate: bool, output: Option<&Path>) -> Outcome {
    let parsed = load(file, strip_degenerate)?;
    let text = serialize_hypergraph(&parsed.hypergraph.dual());
    match output {
        Some(path) => write_file(path, |w| w.write_all(text.as_bytes())),
        None => Ok(io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn cmd_dm(file: &Path, args: &SolverArgs) -> Outcome {
    let parsed = load(file, args.strip_degenerate)?;
    let dm = dm_decompose(&parsed.hypergraph, &args.config())
        .map_err(|e| Failure::new("invalid_input", e))?;
    let mut report = base_report("dm", &parsed);
    report.dm = Some(dm);
    emit(&report)
}

/// Runs every oracle whose limits and preconditions the instance meets.
fn run_oracles(h: &WeightedHypergraph) -> Result<OracleReport, Failure> {
    let lim = OracleLimits::default();
    let mut report = OracleReport::default();
    let (density, sel) = brute_force_densest(h, &lim)?;
    report.densest = Some(SubgraphReport::new(density.to_f64(), Some(density), &sel));
    report.decomposition = Some(factor_reports(&brute_force_spectral(h, &lim)?));
    match brute_force_dm(h, &lim) {
        Ok(dm) => report.dm = Some(dm),
        Err(e) => report.skipped.push(format!("dm: {e}")),
    }
    Ok(report)
}

fn cmd_oracle(file: &Path, strip_degenerate: bool) -> Outcome {
    let parsed = load(file, strip_degenerate)?;
    let mut report = base_report("oracle", &parsed);
    report.oracle = Some(run_oracles(&parsed.hypergraph)?);
    emit(&report)
}

fn cmd_verify(file: &Path, args: &SolverArgs) -> Outcome {
    let parsed = load(file, args.strip_degenerate)?;
    let h = &parsed.hypergraph;
    let lim = OracleLimits::default();
    let config = args.config();
    let mut mismatches = Vec::new();

    let (alpha, maximal) = brute_force_densest(h, &lim)?;
    let out = solve(h, &config).map_err(|e| Failure::new("solver", e))?;
    let c = &out.certificate;
    if !c.optimal {
        mismatches.push(format!("solver did not certify optimality (gap {:e})", c.gap));
    }
    if c.exact_density != Some(alpha) {
        mismatches.push(format!(
            "densest: solver {} vs oracle {alpha}",
            c.exact_density.map_or(c.density.to_string(), |r| r.to_string())
        ));
    }
    if !c.selection.vertices.iter().all(|v| maximal.vertices.contains(v)) {
        mismatches.push("densest: selection is not inside the maximal densest subgraph".into());
    }

    let dec = spectral_decompose(h, &config).map_err(|e| Failure::new("solver", e))?;
    if !dec.equivalent(&brute_force_spectral(h, &lim)?) {
        mismatches.push("spectral decomposition differs from the oracle".into());
    }
    let dual = h.dual();
    match brute_force_spectral(&dual, &lim) {
        Ok(want) if !transport_dual(&dec).equivalent(&want) => {
            mismatches.push("dual decomposition differs from the oracle".into())
        }
        _ => {}
    }
    if h.has_unit_weights() && h.n() + h.m() <= lim.max_incidence {
        let dm = dm_decompose(h, &config).map_err(|e| Failure::new("solver", e))?;
        if dm != brute_force_dm(h, &lim)? {
            mismatches.push("Dulmage-Mendelsohn decomposition differs from the oracle".into());
        }
    }

    let ok = mismatches.is_empty();
    let mut report = base_report("verify", &parsed).with_solve(&out);
    report.decomposition = Some(factor_reports(&dec));
    report.verify = Some(VerifyReport {
        matches: ok,
        mismatches,
    });
    emit(&report)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::new("verification", "solver and oracle disagree"))
    }
}

fn cmd_gen(args: &GenArgs) -> Outcome {
    let h = generate_random(&GeneratorParams {
        n: args.n,
        m: args.m,
        edge_size: (args.min_size, args.max_size),
        weights: (args.min_weight, args.max_weight),
        seed: args.seed,
    })
    .map_err(|e| Failure::new("invalid_input", e))?;
    let text = serialize_hypergraph(&h);
    match &args.output {
        Some(path) => write_file(path, |w| w.write_all(text.as_bytes())),
        None => Ok(io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn cmd_eigen(file: &Path, args: &SolverArgs) -> Outcome {
    let parsed = load(file, args.strip_degenerate)?;
    let h = &parsed.hypergraph;
    let config = args.config();
    let out = solve(h, &config).map_err(|e| Failure::new("solver", e))?;
    let dec = spectral_decompose(h, &config).map_err(|e| Failure::new("solver", e))?;
    let a = optimal_support_matrix(h, &dec, 1e-13, config.max_sweeps)
        .map_err(|e| Failure::new("solver", e))?;
    let e = a.gram_dominant_eigenvalue(1e-12, 100_000);
    let mut report = base_report("eigen", &parsed).with_solve(&out);
    report.eigen = Some(EigenReport::new(&e, dec.factors[0].density));
    emit(&report)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Solve {
            file,
            solver,
            trace,
            matrix,
        } => cmd_solve(&file, &solver, trace.as_deref(), matrix.as_deref()),
        Command::Decompose { file, solver } => cmd_decompose(&file, &solver),
        Command::Dual {
            file,
            strip_degenerate,
            output,
        } => cmd_dual(&file, strip_degenerate, output.as_deref()),
        Command::Dm { file, solver } => cmd_dm(&file, &solver),
        Command::Oracle {
            file,
            strip_degenerate,
        } => cmd_oracle(&file, strip_degenerate),
        Command::Verify { file, solver } => cmd_verify(&file, &solver),
        Command::Gen(args) => cmd_gen(&args),
        Command::Eigen { file, solver } => cmd_eigen(&file, &solver),
    }
}

fn report_failure(f: &Failure) {
    let body = json!({
        "error": {
            "kind": f.kind,
            "message": f.message,
            "line": f.line,
        }
    });
    eprintln!("{body}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report_failure(&Failure {
                code: 2,
                kind: "usage",
                message: e.render().to_string().trim_end().to_string(),
                line: None,
            });
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            report_failure(&f);
            ExitCode::from(f.code)
        }
    }
}
