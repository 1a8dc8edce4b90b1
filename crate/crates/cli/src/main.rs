//! `semisym`: construct and analyze the incidence graphs Γ_{n,q}(K).
//!
//! Exit codes: 0 when every verdict passes, 2 when the analysis ran but an
//! expected-value check failed, 1 on operational errors.

mod build;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use build::FamilyParams;
use semisym::graph6::{self, ReadError};
use semisym::graphalg::{self, DEFAULT_CEILING};
use semisym::pg::{self, StabilizerOptions, DEFAULT_BUDGET};
use semisym::{linrep, pointsets, Graph, IncidenceGraph};

#[derive(Parser, Debug)]
#[command(name = "semisym", version, about = "Semisymmetric incidence graphs from point sets at infinity")]
struct Cli {
    /// Worker threads for the parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Expect {
    None,
    /// Compare against the recorded structural claims and group orders.
    #[value(alias = "paper")]
    Recorded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CompareExpect {
    Isomorphic,
    NonIsomorphic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a graph6 file plus its JSON sidecar.
    Construct {
        #[command(flatten)]
        params: FamilyParams,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Analyze a graph6 file (with sidecar) and print a JSON report.
    Analyze {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "none")]
        expect: Expect,
        /// Candidate budget for the brute-force stabilizer.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        /// Vertex ceiling for the automorphism search.
        #[arg(long, default_value_t = DEFAULT_CEILING)]
        ceiling: usize,
        /// Leave automorphism generators out of the report.
        #[arg(long)]
        no_generators: bool,
    },
    /// Decide isomorphism of two graph6 files by canonical forms.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum)]
        expect: Option<CompareExpect>,
    },
    /// List the point-set families and their recorded group orders.
    Catalog,
    /// Brute-force stabilizer of K in PΓL(n+1,q).
    Stabilizer {
        #[command(flatten)]
        params: FamilyParams,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        /// Restrict to PGL(n+1,q).
        #[arg(long)]
        no_frobenius: bool,
    },
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(v)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn read_incidence(path: &std::path::Path) -> Result<IncidenceGraph> {
    graph6::read_files(path).map_err(anyhow::Error::from)
}

/// The sidecar is optional for `compare`.
fn read_any(path: &std::path::Path) -> Result<(Graph, Option<IncidenceGraph>)> {
    match graph6::read_files(path) {
        Ok(ig) => Ok((ig.graph().clone(), Some(ig))),
        Err(ReadError::Io { .. }) if !graph6::sidecar_path(path).exists() => {
            let text = std::fs::read_to_string(path).with_context(|| path.display().to_string())?;
            let g = graph6::decode(&text).with_context(|| path.display().to_string())?;
            Ok((g, None))
        }
        Err(e) => Err(e.into()),
    }
}

/// When one side is Λ_{n,q} and the other Γ_{n,q}(NRC−pt), the explicit
/// vertex map, checked edge by edge.
fn lambda_witness(a: &Option<IncidenceGraph>, b: &Option<IncidenceGraph>) -> Result<Option<Vec<u32>>> {
    let (Some(a), Some(b)) = (a, b) else { return Ok(None) };
    let (ma, mb) = (a.meta(), b.meta());
    if ma.family != "lambda" || mb.family != "nrc_minus_point" || ma.n != mb.n || ma.q != mb.q {
        return Ok(None);
    }
    let map = linrep::lambda_to_gamma_map(ma.n, ma.q as u64)?;
    let ok = a.graph().edges().all(|(x, y)| b.graph().has_edge(map[x as usize], map[y as usize]))
        && a.graph().num_edges() == b.graph().num_edges();
    Ok(ok.then_some(map))
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    match cli.command {
        Command::Construct { params, out } => {
            let ig = build::graph(&params)?;
            graph6::write_files(&out, &ig).with_context(|| format!("writing {}", out.display()))?;
            eprintln!(
                "wrote {} ({} vertices) and {}",
                out.display(),
                ig.graph().n(),
                graph6::sidecar_path(&out).display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze { input, expect, budget, ceiling, no_generators } => {
            let ig = read_incidence(&input)?;
            let opts = report::AnalyzeOptions { expect: expect == Expect::Recorded, budget, ceiling, generators: !no_generators };
            let r = report::analyze(&ig, &input.display().to_string(), &opts)?;
            print_json(&r)?;
            Ok(if r.expectations_failed() { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }
        Command::Compare { a, b, expect } => {
            let (ga, ia) = read_any(&a)?;
            let (gb, ib) = read_any(&b)?;
            let (fa, fb) = rayon::join(|| graphalg::canonical_form_graph(&ga), || graphalg::canonical_form_graph(&gb));
            let isomorphic = fa == fb;
            let witness = if isomorphic {
                match lambda_witness(&ia, &ib)? {
                    Some(m) => Some(m),
                    None => lambda_witness(&ib, &ia)?,
                }
            } else {
                None
            };
            print_json(&json!({
                "a": a.display().to_string(),
                "b": b.display().to_string(),
                "vertices": [ga.n(), gb.n()],
                "edges": [ga.num_edges(), gb.num_edges()],
                "isomorphic": isomorphic,
                "witness": witness,
            }))?;
            let pass = match expect {
                Some(CompareExpect::Isomorphic) => isomorphic,
                Some(CompareExpect::NonIsomorphic) => !isomorphic,
                None => true,
            };
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Catalog => {
            print_json(&pointsets::catalog())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Stabilizer { params, budget, no_frobenius } => {
            if params.family == build::FamilyArg::Lambda {
                bail!("lambda has no point set; use analyze for its automorphisms");
            }
            let k = build::point_set(&params)?;
            let opts = StabilizerOptions { with_frobenius: !no_frobenius, budget, ..StabilizerOptions::default() };
            let r = pg::stabilizer_order_bruteforce(k.space(), k.points(), &opts)?;
            let (n, q) = (k.n() as u32, k.q() as u128);
            let persp = q.pow(n + 1) * (q - 1);
            print_json(&json!({
                "family": k.family(),
                "n": k.n(),
                "q": k.q(),
                "points": k.points(),
                "group": if no_frobenius { "PGL" } else { "PΓL" },
                "stabilizer": r,
                "persp_order": persp.to_string(),
                "geometric_order": (persp * r.order).to_string(),
            }))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
