use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use cyclesieve::baselines::{brute_force_cycle_counts, brute_force_path_counts, johnson_capped};
use cyclesieve::bench::{
    advise_for_graph, fit_delta_eff, gen_er, prune_by_multiplicity, signed_split,
    sweep_p_critical_with, Algorithm, EllPolicy, SweepConfig,
};
use cyclesieve::io::{load_graph, load_labels, write_edge_list, Format};
use cyclesieve::labeled::{labeled_cycle_sequences, labeled_path_sequences, LabelSequenceCounts};
use cyclesieve::sieve::{count_cycles_through_with, count_cycles_with, count_paths_with};
use cyclesieve::{count_connected_induced, CountVector, Error, Graph, SieveOptions};

#[derive(Parser)]
#[command(
    name = "cyclesieve",
    version,
    about = "Count simple cycles and paths of bounded length"
)]
struct Cli {
    /// Write a machine-readable record to this file.
    #[arg(long, global = true)]
    json: Option<PathBuf>,

    /// Leave timings out of the JSON record so reruns are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// Edge list or KONECT file.
    graph: PathBuf,

    /// Treat edges as arcs.
    #[arg(long)]
    directed: bool,

    /// Use the weight column; without this flag every edge has weight 1.
    #[arg(long)]
    weights: bool,

    /// edge-list or konect.
    #[arg(long, default_value = "edge-list")]
    format: Format,
}

impl GraphArgs {
    fn load(&self) -> cyclesieve::Result<Graph> {
        let g = load_graph(&self.graph, self.format, self.directed)?;
        Ok(if self.weights {
            g
        } else {
            g.with_unit_weights()
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Simple cycles per length with the subgraph sieve.
    Cycles {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        ell: usize,
        /// Only cycles through this vertex.
        #[arg(long)]
        root: Option<String>,
        /// Skip removal of vertices that lie on no cycle.
        #[arg(long)]
        no_preprocess: bool,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Simple paths between two vertices per length.
    Paths {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Simple cycles per cyclic label sequence.
    LabeledCycles {
        #[command(flatten)]
        graph: GraphArgs,
        /// "vertex label" per line.
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        ell: usize,
    },
    /// Simple paths between two vertices per label sequence.
    LabeledPaths {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        ell: usize,
    },
    /// Enumerate simple cycles with the length-capped Johnson search.
    Enumerate {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        ell: usize,
        /// Print every cycle as space-separated vertex names.
        #[arg(long)]
        print: bool,
    },
    /// Brute-force cycle (or path) counts for small graphs.
    Oracle {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        ell: usize,
        #[arg(long, requires = "to")]
        from: Option<String>,
        #[arg(long, requires = "from")]
        to: Option<String>,
    },
    /// Write an Erdős–Rényi graph as an edge list.
    GenEr {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        directed: bool,
        /// Output file; standard output when absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Locate the edge probability where the sieve overtakes enumeration.
    SweepPc {
        #[arg(long, value_delimiter = ',', default_value = "10,14,18")]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        #[arg(long, default_value_t = 0.01)]
        p_step: f64,
        /// Fixed length bound; every cycle (ℓ = N) when absent.
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Consecutive sieve wins that confirm a crossover.
        #[arg(long, default_value_t = 3)]
        wins: usize,
        /// Write every timing cell as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Time the sieve for each length bound and fit τ_k = a·Δ_eff^k + b.
    DeltaEff {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 3)]
        reps: usize,
    },
    /// Positive and negative cycles of a ±1-weighted graph.
    SignedSplit {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        ell: usize,
    },
    /// Instances obtained by removing edges of growing multiplicity.
    Prune {
        /// KONECT file with parallel edges.
        graph: PathBuf,
        #[arg(long)]
        directed: bool,
        #[arg(long, default_value_t = 80)]
        min_removed: usize,
        /// Write each instance as an edge list into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Evaluate the sieve-versus-enumeration predicate on a graph.
    Advise {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        ell: usize,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse { .. } => 2,
                Error::Contract(_) => 3,
                Error::Consistency(_) => 4,
                Error::Io(_) => 5,
            })
        }
    }
}

fn vertex(g: &Graph, name: &str) -> cyclesieve::Result<usize> {
    g.find_vertex(name)
        .ok_or_else(|| Error::Contract(format!("unknown vertex '{name}'")))
}

fn graph_summary(g: &Graph) -> Value {
    json!({
        "n": g.n_vertices(),
        "m": g.n_edges(),
        "directed": g.is_directed(),
        "max_degree": g.max_degree(),
    })
}

fn print_counts(header: &str, counts: &CountVector) {
    println!("{:>4}  {header}", "k");
    for (k, c) in counts.to_strings().iter().enumerate() {
        println!("{:>4}  {c}", k + 1);
    }
    if let CountVector::Approximate { condition, .. } = counts {
        let worst = condition.iter().copied().fold(1.0, f64::max);
        println!("floating-point result, worst condition estimate {worst:e}");
    }
}

fn counts_json(counts: &CountVector) -> Value {
    match counts {
        CountVector::Exact(_) => json!({ "exact": true, "values": counts.to_strings() }),
        CountVector::Approximate { values, condition } => {
            json!({ "exact": false, "values": values, "condition": condition })
        }
    }
}

fn labeled_json(s: &LabelSequenceCounts) -> Value {
    let per_length: Vec<Value> = s
        .per_length
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let seqs: Vec<Value> = m
                .iter()
                .map(|(seq, c)| json!({ "sequence": seq.0, "count": c.to_string() }))
                .collect();
            json!({ "k": i + 1, "sequences": seqs })
        })
        .collect();
    json!({ "ell": s.ell, "per_length": per_length })
}

fn print_labeled(s: &LabelSequenceCounts) {
    println!("{:>4}  {:<24} count", "k", "sequence");
    for (i, m) in s.per_length.iter().enumerate() {
        for (seq, c) in m {
            println!("{:>4}  {:<24} {c}", i + 1, seq.to_string());
        }
    }
}

fn run(cli: &Cli) -> cyclesieve::Result<()> {
    let mut record = json!({});
    let start = Instant::now();
    match &cli.command {
        Command::Cycles {
            graph,
            ell,
            root,
            no_preprocess,
            threads,
        } => {
            let g = graph.load()?;
            let opts = SieveOptions {
                threads: *threads,
                ..SieveOptions::default()
            };
            let root_id = root.as_deref().map(|r| vertex(&g, r)).transpose()?;
            let (work, ids) = if *no_preprocess {
                (g.clone(), (0..g.n_vertices()).collect())
            } else {
                let p = g.preprocess();
                (p.graph, p.original_ids)
            };
            let counts = match root_id {
                None => count_cycles_with(&work, *ell, opts)?.counts,
                Some(r) => match ids.iter().position(|&v| v == r) {
                    Some(local) => count_cycles_through_with(&work, local, *ell, opts)?.counts,
                    None => {
                        log::info!("root lies on no cycle");
                        CountVector::Exact(vec![Default::default(); *ell])
                    }
                },
            };
            print_counts("cycles", &counts);
            record = json!({
                "command": "cycles",
                "graph": graph_summary(&g),
                "preprocessed_n": work.n_vertices(),
                "ell": ell,
                "root": root,
                "counts": counts_json(&counts),
            });
        }
        Command::Paths {
            graph,
            from,
            to,
            ell,
            threads,
        } => {
            let g = graph.load()?;
            let (i, j) = (vertex(&g, from)?, vertex(&g, to)?);
            let opts = SieveOptions {
                threads: *threads,
                ..SieveOptions::default()
            };
            let counts = count_paths_with(&g, i, j, *ell, opts)?.counts;
            print_counts("paths", &counts);
            record = json!({
                "command": "paths",
                "graph": graph_summary(&g),
                "from": from,
                "to": to,
                "ell": ell,
                "counts": counts_json(&counts),
            });
        }
        Command::LabeledCycles { graph, labels, ell } => {
            let g = load_labels(graph.load()?, labels)?;
            let s = labeled_cycle_sequences(&g, *ell)?;
            print_labeled(&s);
            record = json!({
                "command": "labeled-cycles",
                "graph": graph_summary(&g),
                "sequences": labeled_json(&s),
            });
        }
        Command::LabeledPaths {
            graph,
            labels,
            from,
            to,
            ell,
        } => {
            let g = load_labels(graph.load()?, labels)?;
            let s = labeled_path_sequences(&g, vertex(&g, from)?, vertex(&g, to)?, *ell)?;
            print_labeled(&s);
            record = json!({
                "command": "labeled-paths",
                "graph": graph_summary(&g),
                "from": from,
                "to": to,
                "sequences": labeled_json(&s),
            });
        }
        Command::Enumerate { graph, ell, print } => {
            let g = graph.load()?;
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            let mut failure = None;
            let mut emit = |c: &[usize]| {
                let line: Vec<String> = c.iter().map(|&v| g.vertex_name(v)).collect();
                if let Err(e) = writeln!(out, "{}", line.join(" ")) {
                    failure.get_or_insert(e);
                }
            };
            let counts = if *print {
                johnson_capped(&g, *ell, Some(&mut emit))?
            } else {
                johnson_capped(&g, *ell, None)?
            };
            if let Some(e) = failure {
                return Err(e.into());
            }
            drop(out);
            if !print {
                print_counts("cycles", &counts.counts);
            }
            record = json!({
                "command": "enumerate",
                "graph": graph_summary(&g),
                "ell": ell,
                "counts": counts_json(&counts.counts),
            });
        }
        Command::Oracle {
            graph,
            ell,
            from,
            to,
        } => {
            let g = graph.load()?;
            let counts = match (from, to) {
                (Some(f), Some(t)) => {
                    brute_force_path_counts(&g, vertex(&g, f)?, vertex(&g, t)?, *ell)?.counts
                }
                _ => brute_force_cycle_counts(&g, *ell)?.counts,
            };
            print_counts(if from.is_some() { "paths" } else { "cycles" }, &counts);
            record = json!({
                "command": "oracle",
                "graph": graph_summary(&g),
                "ell": ell,
                "counts": counts_json(&counts),
            });
        }
        Command::GenEr {
            n,
            p,
            seed,
            directed,
            output,
        } => {
            let g = gen_er(*n, *p, *seed, *directed)?;
            match output {
                Some(path) => write_edge_list(&g, BufWriter::new(File::create(path)?))?,
                None => write_edge_list(&g, BufWriter::new(io::stdout().lock()))?,
            }
            record = json!({
                "command": "gen-er",
                "graph": graph_summary(&g),
                "p": p,
                "seed": seed,
            });
        }
        Command::SweepPc {
            n_list,
            reps,
            p_step,
            ell,
            seed,
            wins,
            csv,
        } => {
            let config = SweepConfig {
                n_list: n_list.clone(),
                p_step: *p_step,
                reps: *reps,
                ell: ell.map_or(EllPolicy::All, EllPolicy::Fixed),
                seed: *seed,
                consecutive_wins: *wins,
            };
            let report = sweep_p_critical_with(&config, |c| {
                log::info!(
                    "N={} p={:.3} sieve {:.3e}s johnson {:.3e}s",
                    c.n,
                    c.p,
                    c.sieve_mean,
                    c.johnson_mean
                );
            })?;
            println!("{:>5}  crossover p", "N");
            for c in &report.crossovers {
                match c.p {
                    Some(p) => println!("{:>5}  {p:.3}", c.n),
                    None => println!("{:>5}  inconclusive", c.n),
                }
            }
            match &report.fit {
                Some(f) => println!(
                    "p_critical(N) = {:.4} + {:.4}/N  (residual {:.2e})",
                    f.parameter("a").unwrap_or(f64::NAN),
                    f.parameter("b").unwrap_or(f64::NAN),
                    f.residual
                ),
                None => println!("fewer than two conclusive sizes: no fit"),
            }
            if let Some(path) = csv {
                let mut w = BufWriter::new(File::create(path)?);
                writeln!(w, "n,p,sieve_mean,sieve_median,johnson_mean,johnson_median")?;
                for c in &report.cells {
                    writeln!(
                        w,
                        "{},{},{},{},{},{}",
                        c.n, c.p, c.sieve_mean, c.sieve_median, c.johnson_mean, c.johnson_median
                    )?;
                }
            }
            let mut value = serde_json::to_value(&report).expect("report serializes");
            if cli.no_timing {
                value.as_object_mut().expect("object").remove("cells");
            }
            record = json!({ "command": "sweep-pc", "config": config, "report": value });
        }
        Command::DeltaEff { graph, ell, reps } => {
            let g = graph.load()?.preprocess().graph;
            let mut taus = Vec::with_capacity(*ell);
            for k in 1..=*ell {
                let mut best = f64::INFINITY;
                for _ in 0..(*reps).max(1) {
                    best = best.min(Algorithm::Sieve.timed_count(&g, k)?.1);
                }
                println!("{k:>4}  {best:.6e} s");
                taus.push((k, best));
            }
            let fit = fit_delta_eff(&taus)?;
            println!(
                "delta_eff = {:.4}  (residual {:.2e}{})",
                fit.parameter("delta_eff").unwrap_or(f64::NAN),
                fit.residual,
                if fit.large_residual { ", poor fit" } else { "" }
            );
            record = json!({
                "command": "delta-eff",
                "graph": graph_summary(&g),
                "timings": if cli.no_timing { Value::Null } else { json!(taus) },
                "fit": if cli.no_timing { Value::Null } else { json!(fit) },
            });
        }
        Command::SignedSplit { graph, ell } => {
            let g = load_graph(&graph.graph, graph.format, graph.directed)?;
            let s = signed_split(&g, *ell)?;
            println!(
                "{:>4}  {:>12}  {:>12}  {:>12}",
                "k", "positive", "negative", "total"
            );
            for k in 0..s.ell {
                println!(
                    "{:>4}  {:>12}  {:>12}  {:>12}",
                    k + 1,
                    s.positive[k],
                    s.negative[k],
                    s.total[k]
                );
            }
            let strings =
                |v: &[num_bigint::BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
            record = json!({
                "command": "signed-split",
                "graph": graph_summary(&g),
                "ell": ell,
                "positive": strings(&s.positive),
                "negative": strings(&s.negative),
                "total": strings(&s.total),
            });
        }
        Command::Prune {
            graph,
            directed,
            min_removed,
            out_dir,
        } => {
            let g = load_graph(graph, Format::Konect, *directed)?;
            let seq = prune_by_multiplicity(&g, *min_removed);
            println!(
                "{:>9}  {:>8}  {:>8}  {:>8}",
                "threshold", "N", "M", "removed"
            );
            let mut rows = Vec::new();
            for (i, inst) in seq.iter().enumerate() {
                let reduced = inst.graph.preprocess().graph;
                println!(
                    "{:>9}  {:>8}  {:>8}  {:>8}",
                    inst.threshold,
                    reduced.n_vertices(),
                    reduced.n_edges(),
                    inst.removed_since_previous
                );
                if let Some(dir) = out_dir {
                    fs::create_dir_all(dir)?;
                    let path = dir.join(format!("instance_{i:02}.txt"));
                    write_edge_list(&reduced, BufWriter::new(File::create(path)?))?;
                }
                rows.push(json!({
                    "threshold": inst.threshold,
                    "removed": inst.removed_since_previous,
                    "n": reduced.n_vertices(),
                    "m": reduced.n_edges(),
                }));
            }
            record = json!({ "command": "prune", "instances": rows });
        }
        Command::Advise { graph, ell } => {
            let g = graph.load()?;
            let advice = advise_for_graph(&g, *ell)?;
            let sizes = count_connected_induced(&g, *ell);
            println!("|S_l| = {}", sizes.iter().sum::<u64>());
            println!("sieve side       {:.6e}", advice.sieve_side);
            println!("enumeration side {:.6e}", advice.enumeration_side);
            println!("recommendation   {:?}", advice.recommendation);
            record = json!({
                "command": "advise",
                "graph": graph_summary(&g),
                "ell": ell,
                "subgraphs_per_size": sizes,
                "advice": advice,
            });
        }
    }
    if let Some(path) = &cli.json {
        if !cli.no_timing {
            record["seconds"] = json!(start.elapsed().as_secs_f64());
        }
        write_json(path, &record)?;
    }
    Ok(())
}

fn write_json(path: &Path, value: &Value) -> cyclesieve::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value).map_err(io::Error::from)?;
    writeln!(w)?;
    Ok(())
}
