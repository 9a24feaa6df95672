//! `jsr`: certified joint spectral radius bounds from the command line.
//!
//! Exit codes:
//! - 0: success (for `check`, the graph is path-complete)
//! - 1: malformed input or any other error
//! - 2: no feasible scaling found while bracketing
//! - 3: an enumeration, subset or solver budget was exceeded
//! - 4: the graph is not path-complete
//! - 5: path-completeness undecided within the subset budget
//! - 6: `reproduce` finished but some value missed its reference

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jsr_core::engine::{compare, upper_bound, BoundOptions, NamedGraph};
use jsr_core::families::FamilySpec;
use jsr_core::graph::{is_path_complete, LabeledGraph};
use jsr_core::io::read_matrix_set;
use jsr_core::linalg::MatrixAlphabet;
use jsr_core::lmi::LyapunovTemplate;
use jsr_core::reports::{reproduce, EXAMPLES};
use jsr_core::JsrError;
use serde_json::json;

#[derive(Parser)]
#[command(name = "jsr", version, about = "Certified bounds on the joint spectral radius")]
struct Cli {
    /// Print exactly one JSON document on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Upper bound from graph Lyapunov functions on one graph.
    Bound {
        #[arg(long)]
        matrices: PathBuf,
        /// Family spec (h1, h2:t=2, g1, debruijn:k=2, ...) or file:<path>.
        #[arg(long)]
        graph: String,
        /// quadratic or sos:<even degree>.
        #[arg(long, default_value = "quadratic")]
        template: LyapunovTemplate,
        /// Relative bisection tolerance.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Replace each matrix by (A + eps I)/(1 + eps) first.
        #[arg(long)]
        perturb: Option<f64>,
    },
    /// Decide path-completeness of a graph.
    Check {
        #[arg(long)]
        graph: String,
        /// Alphabet size for family specs.
        #[arg(long, default_value_t = 2)]
        m: usize,
    },
    /// Bounds for several graphs with the expected relations checked.
    Compare {
        #[arg(long)]
        matrices: PathBuf,
        /// Comma-separated family specs or file:<path> entries.
        #[arg(long, value_delimiter = ',')]
        graphs: Vec<String>,
        #[arg(long, default_value = "quadratic")]
        template: LyapunovTemplate,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Run a bundled example and compare against its reference values.
    Reproduce {
        /// One of ex4.1, ex5.2, ex5.3.
        name: String,
    },
}

fn exit_code(e: &JsrError) -> u8 {
    match e {
        JsrError::BracketFailure { .. } => 2,
        JsrError::BudgetExceeded(_) | JsrError::StateBudgetExceeded { .. } => 3,
        JsrError::GraphNotPathComplete { .. } => 4,
        _ => 1,
    }
}

fn load_graph(arg: &str, m: usize) -> Result<NamedGraph, JsrError> {
    if let Some(path) = arg.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| JsrError::Parse(format!("{path}: {e}")))?;
        let g = LabeledGraph::from_json(&text)?;
        Ok(NamedGraph::custom(path, g))
    } else {
        NamedGraph::family(arg.parse::<FamilySpec>()?, m)
    }
}

fn load_matrices(path: &Path, perturb: Option<f64>) -> Result<MatrixAlphabet, JsrError> {
    let a = read_matrix_set(path)?;
    match perturb {
        Some(eps) => a.perturbed(eps),
        None => Ok(a),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn run(cli: Cli) -> Result<u8, JsrError> {
    match cli.command {
        Command::Bound {
            matrices,
            graph,
            template,
            tol,
            perturb,
        } => {
            let a = load_matrices(&matrices, perturb)?;
            let g = load_graph(&graph, a.m())?;
            let opts = BoundOptions {
                tol,
                ..BoundOptions::default()
            };
            let r = upper_bound(&g, &a, template, &opts)?;
            if cli.json {
                println!("{}", to_json(&r));
            } else {
                println!("graph:        {}", r.graph_name);
                println!("template:     {}", r.template);
                println!("rho_hat:      {:.6}", r.rho_hat);
                println!("gamma_star:   {:.9}", r.gamma_star);
                println!("lower bound:  {:.6}", r.lower_bound);
                match r.guarantee_factor {
                    Some(c) => println!("guarantee:    {c:.4} (rho >= {:.6})", r.rho_hat / c),
                    None => println!("guarantee:    unknown"),
                }
                println!("margin:       {:.3e}", r.certificate.margin);
                println!("probes:       {}", r.bisection_trace.len());
            }
            Ok(0)
        }
        Command::Check { graph, m } => {
            let g = load_graph(&graph, m)?;
            let (verdict, code, witness, explored) = match is_path_complete(&g.graph) {
                Ok(res) if res.is_complete => ("path-complete", 0, None, Some(res.subsets_explored)),
                Ok(res) => ("not path-complete", 4, res.witness, Some(res.subsets_explored)),
                Err(JsrError::StateBudgetExceeded { .. }) => ("undecided", 5, None, None),
                Err(e) => return Err(e),
            };
            if cli.json {
                let doc = json!({
                    "graph": g.name,
                    "verdict": verdict,
                    "witness": witness,
                    "subsets_explored": explored,
                });
                println!("{}", to_json(&doc));
            } else {
                match &witness {
                    Some(w) => println!("{}: {verdict}, witness {w}", g.name),
                    None if code == 5 => println!("{}: undecided within the subset budget", g.name),
                    None => println!("{}: {verdict}", g.name),
                }
            }
            Ok(code)
        }
        Command::Compare {
            matrices,
            graphs,
            template,
            tol,
        } => {
            let a = load_matrices(&matrices, None)?;
            let gs = graphs
                .iter()
                .map(|s| load_graph(s.trim(), a.m()))
                .collect::<Result<Vec<_>, _>>()?;
            let opts = BoundOptions {
                tol,
                ..BoundOptions::default()
            };
            let table = compare(&gs, &a, template, &opts)?;
            if cli.json {
                println!("{}", to_json(&table));
            } else {
                print!("{}", table.render_text());
            }
            Ok(0)
        }
        Command::Reproduce { name } => {
            if !EXAMPLES.contains(&name.as_str()) {
                return Err(JsrError::InvalidInput(format!(
                    "unknown example {name:?}; expected one of {}",
                    EXAMPLES.join(", ")
                )));
            }
            let r = reproduce(&name, &BoundOptions::default())?;
            if cli.json {
                println!("{}", to_json(&r));
            } else {
                print!("{}", r.render_text());
            }
            Ok(if r.passed { 0 } else { 6 })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
