use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use coopnet::analysis::{verify_constants, VerifyOptions};
use coopnet::experiment::{
    graph_metrics, sweep, Experiment, ExperimentConfig, SweepSpec, Verdict,
};
use coopnet::graph::{generate, Graph, GraphFamily};

/// Simulator for cooperative online learning on communication graphs.
#[derive(Parser)]
#[command(name = "coopnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its report.
    Run {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Also write the per-round trace of replicate 0.
        #[arg(long)]
        trace: bool,
    },
    /// Repeat an experiment over horizons or graphs and fit the log-log slope.
    Sweep {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Comma-separated horizons; overrides the config's sweep entry.
        #[arg(long, value_delimiter = ',')]
        horizons: Vec<usize>,
    },
    /// Print structural measurements of a graph.
    Graph {
        /// `star:N`, `cycle:N`, `complete:N`, `edgeless:N`, `path:N`,
        /// `gnp:N:P[:SEED]`, `cliques:COUNT:SIZE`, or an edge-list file.
        spec: String,
        #[arg(long)]
        heuristic: bool,
    },
    /// Check the combinatorial and probabilistic constants on a random corpus.
    Verify {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Replace the exact independence number by the greedy cover size on
    /// graphs too large to search.
    #[arg(long)]
    heuristic: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Run { config, common, trace } => cmd_run(&config, &common, trace),
        Command::Sweep { config, common, horizons } => cmd_sweep(&config, &common, horizons),
        Command::Graph { spec, heuristic } => cmd_graph(&spec, heuristic),
        Command::Verify { seed, out_dir, inject_fault } => cmd_verify(seed, out_dir, inject_fault),
    }
}

fn load(path: &Path, common: &Common) -> Result<(ExperimentConfig, PathBuf, PathBuf)> {
    let mut config = ExperimentConfig::load(path)?;
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(r) = common.replicates {
        config.replicates = r;
    }
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let out = match (&common.out_dir, &config.out_dir) {
        (Some(d), _) => d.clone(),
        (None, Some(d)) => base.join(d),
        (None, None) => PathBuf::from("out"),
    };
    Ok((config, base, out))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn cmd_run(path: &Path, common: &Common, trace: bool) -> Result<ExitCode> {
    let (config, base, out) = load(path, common)?;
    let snapshot = config.to_toml()?;
    let exp = Experiment::prepare(config, &base, common.heuristic)?;
    let start = Instant::now();
    let report = exp.run()?;
    write(&out, "report.csv", &report.to_csv())?;
    write(&out, "replicates.csv", &report.replicates_csv())?;
    write(&out, "config.toml", &snapshot)?;
    if trace {
        write(&out, "trace.csv", &exp.trace(0)?.to_csv())?;
    }

    let s = &report.summary;
    println!("config {}  seed {}  T {}  N {}", report.config_hash, s.master_seed, report.horizon, report.n);
    println!(
        "alpha {} ({})  cover {}  eta {}",
        report.alpha.value,
        report.alpha.label(),
        report.cover_size,
        report.eta
    );
    if let Some(q) = report.q_constant {
        println!("Q {q}");
    }
    println!(
        "regret mean {} ± {} (min {}, max {}, {} replicates, {:.2?})",
        s.mean,
        s.std_error,
        s.min,
        s.max,
        s.runs.len(),
        start.elapsed()
    );
    println!(
        "bounds: alpha {}  cover {}",
        report.bound_alpha, report.bound_cover
    );
    match report.theory_bound {
        Some(b) => println!(
            "applicable bound ({}) {b}: {}",
            report.bound_kind.as_str(),
            report.verdict.as_str()
        ),
        None => println!("no guarantee applies to this configuration"),
    }
    println!("wrote {}", out.display());
    Ok(if report.verdict == Verdict::Fail {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_sweep(path: &Path, common: &Common, horizons: Vec<usize>) -> Result<ExitCode> {
    let (config, base, out) = load(path, common)?;
    let axis = (!horizons.is_empty()).then_some(SweepSpec::Horizons(horizons));
    let table = sweep(&config, axis.as_ref(), &base, common.heuristic)?;
    write(&out, "sweep.csv", &table.to_csv())?;
    println!("{:>10} {:>14} {:>12} {:>14}  verdict", table.axis, "mean", "se", "bound");
    let mut failed = false;
    for p in &table.points {
        let r = &p.report;
        failed |= r.verdict == Verdict::Fail;
        println!(
            "{:>10} {:>14.4} {:>12.4} {:>14}  {}",
            p.x,
            r.summary.mean,
            r.summary.std_error,
            r.theory_bound.map(|b| format!("{b:.4}")).unwrap_or_else(|| "-".into()),
            r.verdict.as_str()
        );
    }
    println!("slope {:.4} (intercept {:.4})", table.slope, table.intercept);
    println!("wrote {}", out.join("sweep.csv").display());
    Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn parse_graph(spec: &str) -> Result<Graph> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |i: usize| -> Result<usize> {
        parts
            .get(i)
            .with_context(|| format!("graph spec {spec:?} is missing a field"))?
            .parse()
            .with_context(|| format!("graph spec {spec:?}: bad integer"))
    };
    let family = match parts[0] {
        "star" => GraphFamily::Star { n: num(1)? },
        "cycle" => GraphFamily::Cycle { n: num(1)? },
        "complete" => GraphFamily::Complete { n: num(1)? },
        "edgeless" => GraphFamily::Edgeless { n: num(1)? },
        "path" => GraphFamily::Path { n: num(1)? },
        "cliques" => GraphFamily::Cliques { count: num(1)?, size: num(2)? },
        "gnp" => {
            let p = parts
                .get(2)
                .context("gnp needs gnp:N:P")?
                .parse()
                .context("gnp: bad probability")?;
            let seed = if parts.len() > 3 { num(3)? as u64 } else { 0 };
            return Ok(generate(&GraphFamily::Gnp { n: num(1)?, p }, seed)?);
        }
        _ => return Ok(Graph::read_edge_list(Path::new(spec))?),
    };
    Ok(generate(&family, 0)?)
}

fn cmd_graph(spec: &str, heuristic: bool) -> Result<ExitCode> {
    let g = parse_graph(spec)?;
    print!("{}", graph_metrics(&g, heuristic)?.render());
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(seed: Option<u64>, out_dir: Option<PathBuf>, inject_fault: bool) -> Result<ExitCode> {
    let mut opts = VerifyOptions { inject_fault, ..VerifyOptions::default() };
    if let Some(s) = seed {
        opts.seed = s;
    }
    let start = Instant::now();
    let report = verify_constants(&opts)?;
    let out = out_dir.unwrap_or_else(|| PathBuf::from("out"));
    write(&out, "verification.csv", &report.to_csv())?;
    print!("{}", report.summary());
    println!("{} entries in {:.2?}; wrote {}", report.entries.len(), start.elapsed(), out.join("verification.csv").display());
    if report.all_passed() {
        return Ok(ExitCode::SUCCESS);
    }
    let first = report.failures().next().expect("a failure exists");
    eprintln!(
        "counterexample: {} sample {}: value {} vs bound {}; {}",
        first.check.as_str(),
        first.sample,
        first.value,
        first.bound,
        first.counterexample.as_deref().unwrap_or("")
    );
    Ok(ExitCode::from(1))
}
