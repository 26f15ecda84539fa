//! `musep` — mu-separation queries and weak-equivalence analysis of
//! directed mixed graphs from the command line.
//!
//! Data goes to stdout, diagnostics to stderr. Exit codes: 0 for success
//! (and "separated"/"equivalent" verdicts), 1 for the negative verdict of
//! `sep` and `equiv`, 2 for any error.

use clap::{Parser, Subcommand, ValueEnum};
use musep::equivalence::{dmeg, greatest_element, hierarchy, least_element};
use musep::graph::Dmg;
use musep::independence::{
    general_weak_equivalent, signature, weak_equivalent, ConditioningFamily,
};
use musep::io::{
    dmeg_to_dot, forest_to_dot, graph_to_dot, parse_triples, DmegDocument, FamilyDocument,
    ForestDocument, GraphDocument, Labels, SeparationsDocument, SignatureDocument,
};
use musep::learning::{graph_oracle, learn_maximal, CountingOracle};
use musep::projection::{connectivity, latent_project};
use musep::reduce::{
    build_dense, build_sparse, parse_3dnf, witness_conditioning_set, ReductionVariant,
};
use musep::separation::{mu_separated_sets, witness_walk};
use musep::walk::Walk;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "musep", version, about = "mu-separation toolkit for directed mixed graphs")]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores). Results do
    /// not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Dense,
    Sparse,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether B is mu-separated from A given C.
    Sep {
        graph: PathBuf,
        /// Source labels (comma separated).
        #[arg(long)]
        from: String,
        /// Target labels (comma separated).
        #[arg(long)]
        to: String,
        /// Conditioning labels (comma separated).
        #[arg(long, default_value = "")]
        given: String,
        /// Print a mu-connecting walk when connected.
        #[arg(long)]
        witness: bool,
    },
    /// Decide weak equivalence of two graphs.
    Equiv {
        g1: PathBuf,
        g2: PathBuf,
        /// Compare on all conditioning sets of size at most K.
        #[arg(long, short)]
        k: Option<usize>,
        /// Compare on an explicit conditioning family (JSON file).
        #[arg(long, conflicts_with = "k")]
        family: Option<PathBuf>,
        /// Compare on explicit set-valued triples (JSON file).
        #[arg(long, conflicts_with_all = ["k", "family"])]
        triples: Option<PathBuf>,
    },
    /// Greatest element of the weak equivalence class.
    Greatest {
        graph: PathBuf,
        #[arg(long, short)]
        k: Option<usize>,
        #[arg(long, conflicts_with = "k")]
        family: Option<PathBuf>,
        /// Also write a DOT rendering to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// DMEG: the greatest element with solid/dashed edge classification.
    Dmeg {
        graph: PathBuf,
        #[arg(long, short)]
        k: Option<usize>,
        #[arg(long, conflicts_with = "k")]
        family: Option<PathBuf>,
        /// Treat loops as fixed: exempt from the deletion sweep.
        #[arg(long)]
        fix_loops: bool,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Least element of the class, when one exists.
    Least {
        graph: PathBuf,
        #[arg(long, short)]
        k: Option<usize>,
        #[arg(long, conflicts_with = "k")]
        family: Option<PathBuf>,
        #[arg(long)]
        fix_loops: bool,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Latent projection onto a subset of nodes.
    Project {
        graph: PathBuf,
        /// Labels to keep (comma separated).
        #[arg(long)]
        keep: String,
    },
    /// Learn the maximal weakly-equivalent graph from an oracle.
    Learn {
        /// Graph file backing a separation oracle.
        #[arg(long)]
        oracle: Option<PathBuf>,
        /// Separation-list file backing the oracle instead.
        #[arg(long, conflicts_with = "oracle")]
        seps: Option<PathBuf>,
        #[arg(long, short)]
        k: usize,
    },
    /// Enumerate the k-weak hierarchy forest over n nodes.
    Hierarchy {
        #[arg(long, short)]
        n: usize,
        /// Fix all loops present (permits n = 4).
        #[arg(long)]
        fix_loops: bool,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Separability-based node connectivity.
    Connectivity {
        graph: PathBuf,
        /// Also report whether the graph is m-sparse for this m.
        #[arg(long, short)]
        m: Option<usize>,
    },
    /// Generate a tautology-reduction instance from a 3DNF formula.
    Reduce {
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum)]
        variant: Variant,
        /// Falsifying assignment (e.g. "010" for x1=0, x2=1, x3=0) to emit
        /// the witness conditioning set.
        #[arg(long)]
        witness_for: Option<String>,
    },
    /// Signature dump of the separations over a conditioning family.
    Signature {
        graph: PathBuf,
        #[arg(long, short)]
        k: Option<usize>,
        #[arg(long, conflicts_with = "k")]
        family: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[derive(Debug)]
enum CliError {
    Musep(musep::Error),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Musep(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<musep::Error> for CliError {
    fn from(e: musep::Error) -> Self {
        CliError::Musep(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_file(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &PathBuf, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_graph(path: &PathBuf) -> CliResult<(Dmg, Labels)> {
    Ok(GraphDocument::parse(&read_file(path)?)?.to_dmg()?)
}

fn load_family(
    k: Option<usize>,
    family: Option<&PathBuf>,
    labels: &Labels,
) -> CliResult<ConditioningFamily> {
    match (k, family) {
        (Some(k), None) => Ok(ConditioningFamily::SizeBound(k)),
        (None, Some(path)) => Ok(FamilyDocument::parse(&read_file(path)?)?.to_family(labels)?),
        (None, None) => Err(CliError::Io("pass --k or --family".into())),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    }
}

fn show_walk(w: &Walk, labels: &Labels) -> String {
    let mut out = labels.name(w.start).to_string();
    for s in &w.steps {
        let arrow = match (&s.edge, s.marks()) {
            (musep::graph::Edge::Bidirected { .. }, _) => "<->",
            (_, (musep::walk::Mark::Tail, _)) => "->",
            _ => "<-",
        };
        out.push_str(&format!(" {} {}", arrow, labels.name(s.nodes().1)));
    }
    out
}

fn show_triple(
    w: &musep::independence::DistinguishingTriple,
    l1: &Labels,
) -> String {
    format!(
        "({}, {}, {{{}}})",
        l1.name(w.from),
        l1.name(w.to),
        l1.set_to_labels(&w.conditioning).join(",")
    )
}

fn emit_graph(g: &Dmg, labels: &Labels, dot: Option<&PathBuf>) -> CliResult<()> {
    println!("{}", GraphDocument::from_dmg(g, labels).to_json());
    if let Some(path) = dot {
        write_file(path, &graph_to_dot(g, labels))?;
    }
    Ok(())
}

fn run(command: Command) -> CliResult<ExitCode> {
    match command {
        Command::Sep { graph, from, to, given, witness } => {
            let (g, labels) = load_graph(&graph)?;
            let a = labels.resolve_list(&from)?;
            let b = labels.resolve_list(&to)?;
            let c = labels.resolve_list(&given)?;
            if mu_separated_sets(&g, &a, &b, &c)? {
                println!("separated");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("connected");
                if witness {
                    'outer: for alpha in a.iter() {
                        for beta in b.iter() {
                            if let Some(w) = witness_walk(&g, alpha, beta, &c)? {
                                println!("{}", show_walk(&w, &labels));
                                break 'outer;
                            }
                        }
                    }
                }
                Ok(ExitCode::from(1))
            }
        }
        Command::Equiv { g1, g2, k, family, triples } => {
            let (graph1, labels1) = load_graph(&g1)?;
            let (graph2, labels2) = load_graph(&g2)?;
            if labels1 != labels2 {
                return Err(CliError::Io("graphs must share the same node labels".into()));
            }
            if let Some(path) = triples {
                let js = parse_triples(&read_file(&path)?, &labels1)?;
                let (eq, witness) = general_weak_equivalent(&graph1, &graph2, &js)?;
                if eq {
                    println!("equivalent");
                    return Ok(ExitCode::SUCCESS);
                }
                let w = witness.expect("inequivalent pairs carry a witness");
                println!("not equivalent");
                println!(
                    "witness: ({{{}}}, {{{}}}, {{{}}})",
                    labels1.set_to_labels(&w.from).join(","),
                    labels1.set_to_labels(&w.to).join(","),
                    labels1.set_to_labels(&w.conditioning).join(",")
                );
                return Ok(ExitCode::from(1));
            }
            let fam = load_family(k, family.as_ref(), &labels1)?;
            let (eq, witness) = weak_equivalent(&graph1, &graph2, &fam)?;
            if eq {
                println!("equivalent");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("not equivalent");
                println!("witness: {}", show_triple(&witness.unwrap(), &labels1));
                Ok(ExitCode::from(1))
            }
        }
        Command::Greatest { graph, k, family, dot } => {
            let (g, labels) = load_graph(&graph)?;
            let fam = load_family(k, family.as_ref(), &labels)?;
            let top = greatest_element(&g, &fam)?;
            emit_graph(&top, &labels, dot.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Dmeg { graph, k, family, fix_loops, dot } => {
            let (g, labels) = load_graph(&graph)?;
            let fam = load_family(k, family.as_ref(), &labels)?;
            let d = dmeg(&g, &fam, fix_loops)?;
            let doc = DmegDocument::from_dmeg(&d, &labels);
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializes"));
            if let Some(path) = dot {
                write_file(&path, &dmeg_to_dot(&d, &labels))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Least { graph, k, family, fix_loops, dot } => {
            let (g, labels) = load_graph(&graph)?;
            let fam = load_family(k, family.as_ref(), &labels)?;
            match least_element(&g, &fam, fix_loops)? {
                Some(least) => {
                    emit_graph(&least, &labels, dot.as_ref())?;
                }
                None => {
                    println!("null");
                    eprintln!("the class has no least element");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Project { graph, keep } => {
            let (g, labels) = load_graph(&graph)?;
            let o = labels.resolve_list(&keep)?;
            let p = latent_project(&g, &o)?;
            let kept: Vec<String> = o.iter().map(|v| labels.name(v).to_string()).collect();
            let new_labels = Labels::new(kept)?;
            emit_graph(&p.graph, &new_labels, None)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Learn { oracle, seps, k } => {
            let fam = ConditioningFamily::SizeBound(k);
            let (learned, labels, queries) = match (oracle, seps) {
                (Some(path), None) => {
                    let (g, labels) = load_graph(&path)?;
                    let counting = CountingOracle::new(graph_oracle(&g));
                    let learned = learn_maximal(&counting, &fam)?;
                    (learned, labels, counting.query_count())
                }
                (None, Some(path)) => {
                    let doc = SeparationsDocument::parse(&read_file(&path)?)?;
                    let (oracle, labels) = doc.to_oracle()?;
                    let counting = CountingOracle::new(oracle);
                    let learned = learn_maximal(&counting, &fam)?;
                    (learned, labels, counting.query_count())
                }
                _ => return Err(CliError::Io("pass --oracle or --seps".into())),
            };
            eprintln!("queries: {queries}");
            emit_graph(&learned, &labels, None)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Hierarchy { n, fix_loops, dot } => {
            let f = hierarchy(n, fix_loops)?;
            let doc = ForestDocument::from_forest(&f);
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializes"));
            if let Some(path) = dot {
                write_file(&path, &forest_to_dot(&f))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Connectivity { graph, m } => {
            let (g, labels) = load_graph(&graph)?;
            let mut rows = Vec::new();
            let mut max = 0usize;
            for beta in 0..g.n() {
                let c = connectivity(&g, beta)?;
                max = max.max(c.con);
                rows.push(serde_json::json!({
                    "node": labels.name(beta),
                    "con_in": c.con_in,
                    "con_out": c.con_out,
                    "con": c.con,
                }));
            }
            let mut out = serde_json::json!({
                "nodes": rows,
                "max_connectivity": max,
            });
            if let Some(m) = m {
                out["m"] = serde_json::json!(m);
                out["m_sparse"] = serde_json::json!(max <= m);
            }
            println!("{}", serde_json::to_string_pretty(&out).expect("serializes"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce { formula, variant, witness_for } => {
            let h = parse_3dnf(&formula)?;
            let inst = match variant {
                Variant::Dense => build_dense(&h),
                Variant::Sparse => build_sparse(&h),
            };
            let labels = Labels::new(inst.labels.clone())?;
            let mut out = serde_json::json!({
                "variant": match inst.variant {
                    ReductionVariant::Dense => "dense",
                    ReductionVariant::Sparse => "sparse",
                },
                "alpha": labels.name(inst.alpha),
                "beta": labels.name(inst.beta),
                "g": GraphDocument::from_dmg(&inst.g, &labels),
                "g1": GraphDocument::from_dmg(&inst.g1, &labels),
                "g2": GraphDocument::from_dmg(&inst.g2, &labels),
            });
            eprintln!(
                "nodes: {}, edges: {}, max non-loop degree: {}",
                inst.node_count(),
                inst.edge_count(),
                inst.max_nonloop_degree()
            );
            if let Some(bits) = witness_for {
                let assignment: Vec<bool> = bits
                    .chars()
                    .map(|ch| match ch {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(CliError::Io(format!(
                            "assignment must be 0/1 characters, found {other:?}"
                        ))),
                    })
                    .collect::<CliResult<_>>()?;
                let c = witness_conditioning_set(&inst, &assignment)?;
                out["witness_c"] = serde_json::json!(labels.set_to_labels(&c));
            }
            println!("{}", serde_json::to_string_pretty(&out).expect("serializes"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Signature { graph, k, family } => {
            let (g, labels) = load_graph(&graph)?;
            let fam = load_family(k, family.as_ref(), &labels)?;
            let sig = signature(&g, &fam)?;
            let doc = SignatureDocument::from_signature(&sig, &labels);
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializes"));
            Ok(ExitCode::SUCCESS)
        }
    }
}
