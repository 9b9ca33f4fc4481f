//! Command-line front end: batch analysis, fidelity curves, the tree
//! census, and classical return probabilities.
//!
//! Exit codes: 0 success, 2 input error, 3 precondition violation
//! (disconnected input, dirty resume file), 4 exact/oracle disagreement.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;

use specwalk::census::{run_census, CensusError};
use specwalk::graphs::{parse_edge_list, parse_graph6, Bipartition};
use specwalk::oracle::{fidelity_scan, verify_certificate, write_csv, Certificate};
use specwalk::spectra::{
    are_strongly_cospectral, cospectral_classes, graph_spectrum, rw_return_probabilities,
    SignedSupport,
};
use specwalk::transfer::{decide_periodic, decide_pst, PeriodicityOutcome, PstOutcome};
use specwalk::{Graph, Rational};

/// Residual above which an exact certificate and the numeric oracle are
/// declared in disagreement.
const RESIDUAL_BOUND: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "specwalk",
    version,
    about = "Exact quantum-walk analysis on the normalized Laplacian"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Graph6,
    Edges,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full spectral and transfer report for one connected graph.
    Analyze {
        /// Graph: a file path, a literal graph6/edge-list string, or "-" for standard input.
        input: String,
        /// Input format; default auto-detects (graph6 never contains whitespace).
        #[arg(long)]
        format: Option<Format>,
        /// Emit one JSON document instead of the human report.
        #[arg(long)]
        json: bool,
    },
    /// Sample |U(t)_{a,b}|^2 on a uniform grid and write CSV.
    Fidelity {
        input: String,
        a: usize,
        b: usize,
        #[arg(long)]
        format: Option<Format>,
        /// End of the time grid.
        #[arg(long, default_value_t = 2.0 * std::f64::consts::PI)]
        tmax: f64,
        /// Grid points including both endpoints.
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// CSV destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Survey all free trees with n_min..n_max vertices (inclusive).
    Census {
        /// Vertex range, e.g. 2..16.
        range: String,
        /// JSONL output path; also the resume point for interrupted runs.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads for screening; default uses all cores.
        #[arg(long)]
        workers: Option<usize>,
        /// Discard unfinished records after the last aggregate and resume.
        #[arg(long)]
        truncate: bool,
    },
    /// Classical return probabilities of the random walk at one vertex.
    Rw {
        input: String,
        vertex: usize,
        #[arg(long)]
        format: Option<Format>,
        /// Largest step count; default n-1.
        #[arg(long)]
        kmax: Option<usize>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn precondition(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }

    fn crosscheck(message: impl Into<String>) -> Self {
        Failure {
            code: 4,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Analyze {
            input,
            format,
            json,
        } => cmd_analyze(&input, format, json),
        Cmd::Fidelity {
            input,
            a,
            b,
            format,
            tmax,
            steps,
            out,
        } => cmd_fidelity(&input, a, b, format, tmax, steps, out.as_deref()),
        Cmd::Census {
            range,
            out,
            workers,
            truncate,
        } => cmd_census(&range, &out, workers, truncate),
        Cmd::Rw {
            input,
            vertex,
            format,
            kmax,
        } => cmd_rw(&input, vertex, format, kmax),
    }
}

fn read_input(input: &str) -> Result<String, Failure> {
    if input == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::input(format!("standard input: {e}")))?;
        return Ok(text);
    }
    let path = std::path::Path::new(input);
    if path.exists() {
        return std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{input}: {e}")));
    }
    Ok(input.to_string())
}

fn load_graph(input: &str, format: Option<Format>) -> Result<Graph, Failure> {
    let text = read_input(input)?;
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Failure::input("empty graph input"));
    }
    let format = format.unwrap_or_else(|| {
        // graph6 is a single token; edge lists always contain whitespace.
        if trimmed.contains(char::is_whitespace) {
            Format::Edges
        } else {
            Format::Graph6
        }
    });
    match format {
        Format::Graph6 => parse_graph6(trimmed).map_err(|e| Failure::input(e.to_string())),
        Format::Edges => parse_edge_list(&text).map_err(|e| Failure::input(e.to_string())),
    }
}

fn components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn require_connected(g: &Graph) -> Result<(), Failure> {
    if g.is_connected() {
        return Ok(());
    }
    let parts: Vec<String> = components(g)
        .iter()
        .map(|c| {
            let members: Vec<String> = c.iter().map(usize::to_string).collect();
            format!("{{{}}}", members.join(","))
        })
        .collect();
    Err(Failure::precondition(format!(
        "graph is disconnected: components {}",
        parts.join(" ")
    )))
}

fn pi_time(coeff: &Rational) -> TimeJson {
    TimeJson {
        pi_coeff: coeff.to_string(),
        approx: coeff.to_f64().expect("modest certificate times") * std::f64::consts::PI,
    }
}

fn fmt_pi(t: &TimeJson) -> String {
    format!("{}·π ({:.6})", t.pi_coeff, t.approx)
}

fn support_strings(s: &SignedSupport) -> Vec<String> {
    s.rational.iter().map(Rational::to_string).collect()
}

#[derive(Serialize)]
struct GraphSummary {
    n: usize,
    edges: usize,
    connected: bool,
    bipartite: bool,
}

#[derive(Serialize)]
struct RootJson {
    value: String,
    multiplicity: usize,
}

#[derive(Serialize)]
struct SpectrumJson {
    rational: Vec<RootJson>,
    irrational_degree: usize,
}

#[derive(Serialize)]
struct ScJson {
    a: usize,
    b: usize,
    s_plus: Vec<String>,
    s_plus_irrational_degree: usize,
    s_minus: Vec<String>,
    s_minus_irrational_degree: usize,
}

#[derive(Serialize)]
struct TimeJson {
    pi_coeff: String,
    approx: f64,
}

#[derive(Serialize)]
struct PeriodicJson {
    vertex: usize,
    tau: TimeJson,
    oracle_residual: f64,
}

#[derive(Serialize)]
struct PstJson {
    a: usize,
    b: usize,
    tau: TimeJson,
    oracle_residual: f64,
}

#[derive(Serialize)]
struct AnalysisJson {
    graph: GraphSummary,
    spectrum: SpectrumJson,
    cospectral_classes: Vec<Vec<usize>>,
    strongly_cospectral_pairs: Vec<ScJson>,
    periodic_vertices: Vec<PeriodicJson>,
    pst_pairs: Vec<PstJson>,
}

fn cmd_analyze(input: &str, format: Option<Format>, json: bool) -> Result<(), Failure> {
    let g = load_graph(input, format)?;
    require_connected(&g)?;
    let n = g.n();

    let bipartite = matches!(g.bipartition(), Bipartition::Classes(_));
    let (roots, remainder) = graph_spectrum(&g).expect("connected graph");
    let spectrum = SpectrumJson {
        rational: roots
            .iter()
            .map(|(r, &m)| RootJson {
                value: r.to_string(),
                multiplicity: m,
            })
            .collect(),
        irrational_degree: remainder.degree().unwrap_or(0),
    };

    let classes = cospectral_classes(&g);

    let mut sc_pairs = Vec::new();
    let mut pst_pairs = Vec::new();
    for class in &classes {
        for (i, &a) in class.iter().enumerate() {
            for &b in &class[i + 1..] {
                let Some(cls) = are_strongly_cospectral(&g, a, b).expect("checked inputs") else {
                    continue;
                };
                sc_pairs.push(ScJson {
                    a,
                    b,
                    s_plus: support_strings(&cls.s_plus),
                    s_plus_irrational_degree: cls.s_plus.irrational.degree().unwrap_or(0),
                    s_minus: support_strings(&cls.s_minus),
                    s_minus_irrational_degree: cls.s_minus.irrational.degree().unwrap_or(0),
                });
                let verdict = decide_pst(&g, a, b).expect("checked inputs");
                if let PstOutcome::Pst(cert) = &verdict.outcome {
                    let tau = pi_time(&cert.tau_pi);
                    let residual = verify_certificate(&g, Certificate::Pst(&verdict))
                        .expect("oracle accepts positive verdicts");
                    if residual.abs() >= RESIDUAL_BOUND {
                        return Err(Failure::crosscheck(format!(
                            "exact transfer certificate ({a},{b}) at {} disagrees with the \
                             oracle: residual {residual:e} (bound {RESIDUAL_BOUND:e})",
                            fmt_pi(&tau),
                        )));
                    }
                    pst_pairs.push(PstJson {
                        a,
                        b,
                        tau,
                        oracle_residual: residual,
                    });
                }
            }
        }
    }

    let mut periodic = Vec::new();
    for v in 0..n {
        let verdict = decide_periodic(&g, v).expect("checked inputs");
        if let PeriodicityOutcome::Periodic(cert) = &verdict.outcome {
            let tau = pi_time(&cert.tau_pi);
            let residual = verify_certificate(&g, Certificate::Periodicity(&verdict))
                .expect("oracle accepts positive verdicts");
            if residual.abs() >= RESIDUAL_BOUND {
                return Err(Failure::crosscheck(format!(
                    "exact periodicity certificate for vertex {v} at {} disagrees with the \
                     oracle: residual {residual:e} (bound {RESIDUAL_BOUND:e})",
                    fmt_pi(&tau),
                )));
            }
            periodic.push(PeriodicJson {
                vertex: v,
                tau,
                oracle_residual: residual,
            });
        }
    }

    let report = AnalysisJson {
        graph: GraphSummary {
            n,
            edges: g.edge_count(),
            connected: true,
            bipartite,
        },
        spectrum,
        cospectral_classes: classes,
        strongly_cospectral_pairs: sc_pairs,
        periodic_vertices: periodic,
        pst_pairs,
    };

    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("plain data")
        );
    } else {
        print_human(&report);
    }
    Ok(())
}

fn print_human(r: &AnalysisJson) {
    println!(
        "graph: n={}, edges={}, {}, {}",
        r.graph.n,
        r.graph.edges,
        if r.graph.connected {
            "connected"
        } else {
            "disconnected"
        },
        if r.graph.bipartite {
            "bipartite"
        } else {
            "not bipartite"
        },
    );
    let roots: Vec<String> = r
        .spectrum
        .rational
        .iter()
        .map(|root| {
            if root.multiplicity == 1 {
                root.value.clone()
            } else {
                format!("{} (x{})", root.value, root.multiplicity)
            }
        })
        .collect();
    println!(
        "spectrum: rational roots {}; irrational part degree {}",
        if roots.is_empty() {
            "none".to_string()
        } else {
            roots.join(", ")
        },
        r.spectrum.irrational_degree
    );
    let classes: Vec<String> = r
        .cospectral_classes
        .iter()
        .map(|c| {
            let members: Vec<String> = c.iter().map(usize::to_string).collect();
            format!("{{{}}}", members.join(","))
        })
        .collect();
    println!("cospectral classes: {}", classes.join(" "));
    if r.strongly_cospectral_pairs.is_empty() {
        println!("strongly cospectral pairs: none");
    } else {
        println!("strongly cospectral pairs:");
        for p in &r.strongly_cospectral_pairs {
            let extra = |d: usize| {
                if d == 0 {
                    String::new()
                } else {
                    format!(" plus irrational degree {d}")
                }
            };
            println!(
                "  ({},{}): S+ = {{{}}}{}, S- = {{{}}}{}",
                p.a,
                p.b,
                p.s_plus.join(","),
                extra(p.s_plus_irrational_degree),
                p.s_minus.join(","),
                extra(p.s_minus_irrational_degree),
            );
        }
    }
    if r.periodic_vertices.is_empty() {
        println!("periodic vertices: none");
    } else {
        println!("periodic vertices:");
        for p in &r.periodic_vertices {
            println!(
                "  {}: τ = {}, oracle residual {:.1e}",
                p.vertex,
                fmt_pi(&p.tau),
                p.oracle_residual
            );
        }
    }
    if r.pst_pairs.is_empty() {
        println!("pst pairs: none");
    } else {
        println!("pst pairs:");
        for p in &r.pst_pairs {
            println!(
                "  ({},{}): τ = {}, oracle residual {:.1e}",
                p.a,
                p.b,
                fmt_pi(&p.tau),
                p.oracle_residual
            );
        }
    }
}

fn cmd_fidelity(
    input: &str,
    a: usize,
    b: usize,
    format: Option<Format>,
    tmax: f64,
    steps: usize,
    out: Option<&std::path::Path>,
) -> Result<(), Failure> {
    let g = load_graph(input, format)?;
    if a >= g.n() || b >= g.n() {
        return Err(Failure::input(format!(
            "vertex pair ({a},{b}) out of range for n={}",
            g.n()
        )));
    }
    if steps < 2 {
        return Err(Failure::input("need at least 2 grid points"));
    }
    if !(tmax > 0.0) {
        return Err(Failure::input("tmax must be positive"));
    }
    let curve =
        fidelity_scan(&g, a, b, tmax, steps).map_err(|e| Failure::precondition(e.to_string()))?;
    match out {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            write_csv(&curve, &mut file)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            println!("max {:.6e} at t={:.6}", curve.max, curve.argmax);
        }
        None => {
            let stdout = std::io::stdout();
            write_csv(&curve, &mut stdout.lock()).map_err(|e| Failure::input(e.to_string()))?;
            eprintln!("max {:.6e} at t={:.6}", curve.max, curve.argmax);
        }
    }
    Ok(())
}

fn parse_range(range: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::input(format!("range \"{range}\" is not of the form MIN..MAX"));
    let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi
        .trim()
        .strip_prefix('=')
        .unwrap_or(hi.trim())
        .trim()
        .parse()
        .map_err(|_| bad())?;
    Ok((lo, hi))
}

fn cmd_census(
    range: &str,
    out: &std::path::Path,
    workers: Option<usize>,
    truncate: bool,
) -> Result<(), Failure> {
    let (n_min, n_max) = parse_range(range)?;
    let report = run_census(n_min, n_max, out, workers, truncate).map_err(|e| match e {
        CensusError::InvalidRange { .. } | CensusError::NoWorkers => Failure::input(e.to_string()),
        CensusError::TrailingData { .. } | CensusError::Corrupt { .. } => {
            Failure::precondition(e.to_string())
        }
        other => Failure::input(other.to_string()),
    })?;
    println!(
        "{:>3} {:>8} {:>9} {:>9} {:>10} {:>11}",
        "n", "trees", "screened", "sc_pairs", "pst_pairs", "violations"
    );
    for agg in &report.aggregates {
        println!(
            "{:>3} {:>8} {:>9} {:>9} {:>10} {:>11}",
            agg.n,
            agg.trees,
            agg.screened_trees,
            agg.sc_pair_total,
            agg.pst_pair_total,
            agg.violations.len()
        );
    }
    Ok(())
}

fn cmd_rw(
    input: &str,
    vertex: usize,
    format: Option<Format>,
    kmax: Option<usize>,
) -> Result<(), Failure> {
    let g = load_graph(input, format)?;
    if vertex >= g.n() {
        return Err(Failure::input(format!(
            "vertex {vertex} out of range for n={}",
            g.n()
        )));
    }
    require_connected(&g)?;
    let kmax = kmax.unwrap_or(g.n().saturating_sub(1));
    let probs = rw_return_probabilities(&g, vertex, kmax);
    println!("return probabilities at vertex {vertex}:");
    for (k, p) in probs.iter().enumerate() {
        println!("  k={k}: {p}");
    }
    let classes: Vec<String> = cospectral_classes(&g)
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| {
            let members: Vec<String> = c.iter().map(usize::to_string).collect();
            format!("{{{}}}", members.join(","))
        })
        .collect();
    if classes.is_empty() {
        println!("cospectral vertex pairs: none");
    } else {
        println!("cospectral vertex classes: {}", classes.join(" "));
    }
    Ok(())
}
