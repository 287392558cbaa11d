//! `qdrh`: command-line driver for the q-de Rham experiments.

mod config;
mod dump;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::Value;

use config::{embed_config, expand, parse_list_str, Job, RawConfig};
use qdrh_core::qderham::{
    cartier_boundary_check, cartier_check, compare_framings_invariants, eta_koszul_check,
    framing_chain_map_search, gm_h1, koszul_vs_qderham, p1_cohomology, taylor_comparison,
};
use qdrh_core::{qconn_report, CoeffRingSpec, ExperimentReport, Verdict};

#[derive(Parser)]
#[command(
    name = "qdrh",
    version,
    about = "Exact experiments with q-de Rham complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// H^1 of the multiplicative group against the q-integer torsion formula.
    GmH1(RunArgs),
    /// Cohomology invariants of Z[x] under two framings.
    CompareFramings(RunArgs),
    /// Search for a chain map between two framings that is the identity mod (q-1).
    ChainmapSearch(RunArgs),
    /// The q-de Rham complex modulo the p-th cyclotomic polynomial.
    Cartier(RunArgs),
    /// The Bockstein boundary in the Cartier isomorphism.
    CartierBoundary(RunArgs),
    /// Multiplication by (q-1)^i from q-de Rham to the Koszul complex.
    Koszul(RunArgs),
    /// The décalage of the Koszul complex against q-de Rham over F_p[q].
    EtaKoszul(RunArgs),
    /// Taylor expansion of the Jackson derivative over Q[[q-1]].
    Taylor(RunArgs),
    /// Čech cohomology of the projective line.
    P1(RunArgs),
    /// Modules with q-connection.
    Qconn(RunArgs),
    /// Print tables of q-integers, q-binomials and operator images.
    Dump(DumpArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    GmH1,
    CompareFramings,
    ChainmapSearch,
    Cartier,
    CartierBoundary,
    Koszul,
    EtaKoszul,
    Taylor,
    P1,
    Qconn,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::GmH1 => "gm-h1",
            Experiment::CompareFramings => "compare-framings",
            Experiment::ChainmapSearch => "chainmap-search",
            Experiment::Cartier => "cartier",
            Experiment::CartierBoundary => "cartier-boundary",
            Experiment::Koszul => "koszul",
            Experiment::EtaKoszul => "eta-koszul",
            Experiment::Taylor => "taylor",
            Experiment::P1 => "p1",
            Experiment::Qconn => "qconn",
        }
    }
}

/// Integer parameters accept comma-separated lists, which are swept.
#[derive(Args, Clone, Debug, Default)]
struct RunArgs {
    /// Prime.
    #[arg(long)]
    p: Option<String>,
    /// p-adic precision: coefficients in Z/p^M.
    #[arg(long = "M")]
    m: Option<String>,
    /// (q-1)-adic precision.
    #[arg(long = "N")]
    n: Option<String>,
    /// Monomial window (maximal degree for taylor).
    #[arg(long = "D")]
    d: Option<String>,
    /// Commutation buffer, below D.
    #[arg(long = "B")]
    b: Option<String>,
    /// Window for gm-h1, cartier, koszul and eta-koszul.
    #[arg(long = "W")]
    w: Option<String>,
    /// Values of a for the γ_a checks.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Number of variables.
    #[arg(long = "d")]
    dim: Option<String>,
    /// Framing as JSON, e.g. '{"d":1,"vars":[{"kind":"poly","shift":1}]}'; give it twice to compare.
    #[arg(long)]
    framing: Vec<String>,
    /// Number of random samples in sampled checks.
    #[arg(long)]
    samples: Option<i64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Report file; a directory when the parameters describe a sweep.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long)]
    jobs: Option<usize>,
    /// JSON file with default values for any of the flags.
    #[arg(long)]
    config: Option<std::path::PathBuf>,
    /// Record wall-clock time in runtime_ms (reports are otherwise reproducible byte for byte).
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Clone, Debug)]
struct DumpArgs {
    /// qarith, framed or all.
    #[arg(long, default_value = "all")]
    domain: String,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

impl RunArgs {
    fn raw(&self) -> Result<RawConfig, String> {
        let list = |v: &Option<String>| v.as_deref().map(parse_list_str).transpose();
        let framing = if self.framing.is_empty() {
            None
        } else {
            Some(
                self.framing
                    .iter()
                    .map(|s| {
                        serde_json::from_str::<Value>(s).map_err(|e| format!("--framing: {e}"))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            )
        };
        let flags = RawConfig {
            p: list(&self.p)?,
            m: list(&self.m)?,
            n: list(&self.n)?,
            d: list(&self.d)?,
            b: list(&self.b)?,
            w: list(&self.w)?,
            a: list(&self.a)?,
            dim: list(&self.dim)?,
            framing,
            samples: self.samples,
            seed: self.seed,
            out: self.out.clone(),
            jobs: self.jobs,
            domain: None,
        };
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                let v: Value =
                    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
                RawConfig::from_json(&v)?
            }
            None => RawConfig::default(),
        };
        Ok(file.overridden_by(flags))
    }
}

fn run_job(exp: Experiment, job: &Job) -> Result<ExperimentReport, String> {
    let e = |x: qdrh_core::Error| x.to_string();
    let dim = job.dim;
    match exp {
        Experiment::GmH1 => gm_h1(&job.params()?, job.w).map_err(e),
        Experiment::CompareFramings => {
            compare_framings_invariants(&job.framings[0], &job.framings[1], &job.params()?)
                .map_err(e)
        }
        Experiment::ChainmapSearch => {
            framing_chain_map_search(&job.framings[0], &job.framings[1], &job.params()?).map_err(e)
        }
        Experiment::Cartier => cartier_check(dim, &job.params()?, job.w).map_err(e),
        Experiment::CartierBoundary => {
            cartier_boundary_check(dim, &job.params()?, job.w, job.samples, job.seed).map_err(e)
        }
        Experiment::Koszul => koszul_vs_qderham(dim, &job.params()?, job.w).map_err(e),
        Experiment::EtaKoszul => eta_koszul_check(dim, &job.params()?, job.w).map_err(e),
        Experiment::Taylor => {
            taylor_comparison(&job.framings[0], job.n, job.d, CoeffRingSpec::Rat).map_err(e)
        }
        Experiment::P1 => p1_cohomology(&job.params()?, &job.a).map_err(e),
        Experiment::Qconn => {
            qconn_report(&job.params()?, dim, job.a[0], job.samples, job.seed).map_err(e)
        }
    }
}

/// Writes through a temporary file in the same directory, then renames.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), String> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp =
        tempfile::NamedTempFile::new_in(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    tmp.write_all(contents).map_err(|e| e.to_string())?;
    tmp.persist(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(())
}

enum Outcome {
    Report(Verdict),
    Failed,
}

fn exit_code(outcomes: &[Outcome]) -> u8 {
    if outcomes.iter().any(|o| matches!(o, Outcome::Failed)) {
        1
    } else if outcomes
        .iter()
        .any(|o| matches!(o, Outcome::Report(Verdict::RefutedAtTruncation)))
    {
        2
    } else if outcomes
        .iter()
        .any(|o| matches!(o, Outcome::Report(Verdict::Inconclusive)))
    {
        3
    } else {
        0
    }
}

fn run(exp: Experiment, args: &RunArgs) -> Result<u8, String> {
    let raw = args.raw()?;
    let jobs = expand(exp, &raw)?;
    let sweep = jobs.len() > 1;
    if let (true, Some(dir)) = (sweep, &raw.out) {
        std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    let work = |job: &Job| -> (Result<Value, String>, Option<Verdict>) {
        let start = Instant::now();
        match run_job(exp, job) {
            Ok(mut report) => {
                if args.timing {
                    report.runtime_ms = start.elapsed().as_millis() as u64;
                }
                let verdict = report.verdict;
                (Ok(embed_config(report.to_json(), job)), Some(verdict))
            }
            Err(e) => (Err(e), None),
        }
    };
    let results: Vec<(Result<Value, String>, Option<Verdict>)> = {
        let threads = raw.jobs.unwrap_or(0);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())?;
        pool.install(|| jobs.par_iter().map(work).collect())
    };
    let mut outcomes = Vec::new();
    for (job, (res, verdict)) in jobs.iter().zip(results) {
        match res {
            Ok(v) => {
                let text = if sweep {
                    serde_json::to_string(&v)
                } else {
                    serde_json::to_string_pretty(&v)
                }
                .expect("report serializes");
                match &raw.out {
                    Some(out) => {
                        let path = if sweep {
                            out.join(job.file_name())
                        } else {
                            out.clone()
                        };
                        write_atomic(&path, format!("{text}\n").as_bytes())?;
                    }
                    None => emit(&text),
                }
                outcomes.push(Outcome::Report(verdict.expect("verdict of a report")));
            }
            Err(e) => {
                eprintln!(
                    "error in {}: {e}",
                    job.file_name().trim_end_matches(".json")
                );
                outcomes.push(Outcome::Failed);
            }
        }
    }
    Ok(exit_code(&outcomes))
}

/// Writes to stdout, exiting quietly when the reader has gone away.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{text}").is_err() {
        std::process::exit(0);
    }
}

fn run_dump(args: &DumpArgs) -> Result<u8, String> {
    let v = dump::dump(&args.domain)?;
    let text = serde_json::to_string_pretty(&v).expect("tables serialize");
    match &args.out {
        Some(path) => write_atomic(path, format!("{text}\n").as_bytes())?,
        None => emit(&text),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::GmH1(a) => run(Experiment::GmH1, a),
        Command::CompareFramings(a) => run(Experiment::CompareFramings, a),
        Command::ChainmapSearch(a) => run(Experiment::ChainmapSearch, a),
        Command::Cartier(a) => run(Experiment::Cartier, a),
        Command::CartierBoundary(a) => run(Experiment::CartierBoundary, a),
        Command::Koszul(a) => run(Experiment::Koszul, a),
        Command::EtaKoszul(a) => run(Experiment::EtaKoszul, a),
        Command::Taylor(a) => run(Experiment::Taylor, a),
        Command::P1(a) => run(Experiment::P1, a),
        Command::Qconn(a) => run(Experiment::Qconn, a),
        Command::Dump(a) => run_dump(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("qdrh: {e}");
            ExitCode::from(1)
        }
    }
}
