use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use stability_core::cliques::{count_cliques, joint_size};
use stability_core::dichotomy::{
    analyze_with_trace, check_certificate, parse_rational, sweep, Certificate, InconclusiveReason,
    Mode, Overrides, Params,
};
use stability_core::graph::{
    complete_multipartite, planted_turan, random_graph, turan_graph, Graph,
};
use stability_core::multipartite::{SizeProfile, DEFAULT_SEARCH_BUDGET};
use stability_core::oracle;

/// Exit status of `analyze` when the certificate is inconclusive.
const EXIT_INCONCLUSIVE: u8 = 3;
/// Exit status of `analyze` when the parameter gate rejects the input.
const EXIT_REJECTED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "stability",
    version,
    about = "Stability certificates for near-Turán graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Turan,
    Multipartite,
    Random,
    Planted,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Paper,
    Relaxed,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleOp {
    Kcliques,
    Js,
    Editdist,
    Findkpartite,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph in edge-list format.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        /// Edge count (random).
        #[arg(long)]
        m: Option<usize>,
        /// Class sizes (multipartite), e.g. `3,3,2`.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        /// Toggled vertex pairs (planted).
        #[arg(long)]
        flips: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the pipeline and write a certificate.
    Analyze {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        c: f64,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Joint-size threshold, `p/q` or decimal (relaxed only).
        #[arg(long)]
        threshold: Option<String>,
        /// Witness profile `s,..,s,t` with r + 1 classes (relaxed only).
        #[arg(long)]
        profile: Option<String>,
        /// Multiplier on the edit bound (relaxed only).
        #[arg(long)]
        bound: Option<f64>,
        /// Class size of the trimmed core (relaxed only).
        #[arg(long)]
        trim: Option<usize>,
        /// Node budget of the exact witness search.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
        /// Also write the removal trace as `u v count` lines.
        #[arg(long)]
        trace_log: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-check a certificate against a graph; exit status 0 iff valid.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Brute-force reference computations (small graphs only).
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        op: OracleOp,
        /// Clique order (kcliques, js) or part count (editdist).
        #[arg(long)]
        r: Option<usize>,
        /// Class sizes (findkpartite), e.g. `2,2,3`.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
    },
    /// Analyze random graphs over a grid of orders and densities, as CSV.
    Sweep {
        #[arg(long)]
        r: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        density_list: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, default_value_t = 0.01)]
        c: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn need<T>(value: Option<T>, flag: &str, kind: &str) -> Result<T> {
    value.with_context(|| format!("--{flag} is required for {kind}"))
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Graph::parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn generate(
    kind: Kind,
    n: Option<usize>,
    r: Option<usize>,
    m: Option<usize>,
    sizes: Option<Vec<usize>>,
    flips: Option<usize>,
    seed: u64,
) -> Result<Graph> {
    let g = match kind {
        Kind::Turan => turan_graph(need(n, "n", "turan")?, need(r, "r", "turan")?)?,
        Kind::Multipartite => {
            let sizes = need(sizes, "sizes", "multipartite")?;
            let total: usize = sizes.iter().sum();
            if let Some(n) = n.filter(|&n| n != total) {
                bail!("--n {n} does not match the class sizes (total {total})");
            }
            complete_multipartite(&sizes)?
        }
        Kind::Random => random_graph(need(n, "n", "random")?, need(m, "m", "random")?, seed)?,
        Kind::Planted => planted_turan(
            need(n, "n", "planted")?,
            need(r, "r", "planted")?,
            need(flips, "flips", "planted")?,
            seed,
        )?,
    };
    Ok(g)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen {
            kind,
            n,
            r,
            m,
            sizes,
            flips,
            seed,
            out,
        } => {
            let g = generate(kind, n, r, m, sizes, flips, seed)?;
            write(&out, &g.to_edge_list())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze {
            graph,
            r,
            eps,
            c,
            mode,
            threshold,
            profile,
            bound,
            trim,
            budget,
            trace_log,
            out,
        } => {
            let g = read_graph(&graph)?;
            let mode = match mode {
                ModeArg::Paper => Mode::Paper,
                ModeArg::Relaxed => Mode::Relaxed,
            };
            let overrides = Overrides {
                threshold: threshold.as_deref().map(parse_rational).transpose()?,
                profile: profile.as_deref().map(SizeProfile::parse).transpose()?,
                bound_multiplier: bound,
                trim_target: trim,
            };
            let mut params = Params::new(r, eps, c, mode).with_overrides(overrides);
            params.search_budget = budget;
            let (cert, trace) = analyze_with_trace(&g, &params);
            write(&out, &cert.to_json())?;
            if let (Some(path), Some(trace)) = (trace_log, trace) {
                write(&path, &trace.to_log())?;
            }
            println!("{}", cert.outcome);
            Ok(match cert.reason() {
                None => ExitCode::SUCCESS,
                Some(InconclusiveReason::ParametersRejected) => ExitCode::from(EXIT_REJECTED),
                Some(reason) => {
                    eprintln!("inconclusive: {reason}");
                    ExitCode::from(EXIT_INCONCLUSIVE)
                }
            })
        }
        Command::Verify { graph, cert } => {
            let g = read_graph(&graph)?;
            let text =
                fs::read_to_string(&cert).with_context(|| format!("reading {}", cert.display()))?;
            let cert = match Certificate::from_json(&text) {
                Ok(c) => c,
                Err(e) => {
                    println!("invalid: malformed certificate: {e}");
                    return Ok(ExitCode::FAILURE);
                }
            };
            Ok(match check_certificate(&g, &cert) {
                Ok(()) => {
                    println!("valid");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    println!("invalid: {e}");
                    ExitCode::FAILURE
                }
            })
        }
        Command::Oracle {
            graph,
            op,
            r,
            sizes,
        } => {
            let g = read_graph(&graph)?;
            let result = match op {
                OracleOp::Kcliques => {
                    let r = need(r, "r", "kcliques")?;
                    let brute = oracle::count_cliques(&g, r);
                    json!({ "op": "kcliques", "r": r, "count": brute, "engine": count_cliques(&g, r)? })
                }
                OracleOp::Js => {
                    let r = need(r, "r", "js")?;
                    let (size, edge) = oracle::joint_size(&g, r);
                    let engine = joint_size(&g, r)?;
                    json!({ "op": "js", "r": r, "size": size, "edge": edge, "engine": engine.size })
                }
                OracleOp::Editdist => {
                    let r = need(r, "r", "editdist")?;
                    match oracle::edit_distance(&g, r) {
                        Some(d) => json!({ "op": "editdist", "r": r, "distance": d }),
                        None => bail!("r^n exceeds the enumeration limit; use a smaller graph"),
                    }
                }
                OracleOp::Findkpartite => {
                    let sizes = need(sizes, "sizes", "findkpartite")?;
                    let found = oracle::find_multipartite(&g, &sizes);
                    json!({ "op": "findkpartite", "sizes": sizes, "parts": found })
                }
            };
            println!("{result}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            r,
            n_list,
            density_list,
            seed,
            eps,
            c,
            out,
        } => {
            let rows = sweep(&Params::relaxed(r, eps, c), &n_list, &density_list, seed)?;
            let mut w = csv::Writer::from_path(&out)
                .with_context(|| format!("writing {}", out.display()))?;
            for row in &rows {
                w.serialize(row)?;
            }
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
