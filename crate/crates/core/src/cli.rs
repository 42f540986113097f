//! Command-line front end. `run` returns the process exit code:
//! `0` success, `1` usage/IO/parse error, `2` acyclic input under
//! `--require-cycle`, `3` modulus run that did not converge.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::graph::{generate, generate_with_meta, load_graph, save_graph, GraphFormat, GraphSpec, WeightedGraph};
use crate::modulus::{compute_modulus, ModulusConfig, ModulusResult};
use crate::mwc::{find_mwc, DiscardRule, MwcOptions, RootOrder};
use crate::oracles::{f_factor_simulation, full_constraint_modulus, rooted_girth, ENUMERATION_LIMIT};
use crate::prune::PruneConfig;
use crate::report::{fmt_num, fmt_sig, RunReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NO_CYCLE: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "loopmod", version, about = "Minimum weight cycles and loop modulus of weighted graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimum weight cycle length
    Girth(GirthArgs),
    /// Loop modulus (p = 2) by constraint generation
    Modulus(ModulusArgs),
    /// Write a generated graph
    Gen(GenArgs),
    /// Run a benchmark suite and write CSVs
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Graph file (edge list, or JSON by `.json` extension); `-` reads stdin
    #[arg(conflicts_with = "gen")]
    input: Option<PathBuf>,
    /// Inline generator spec, e.g. `grid:5` or `er:100:0.05:seed=3`
    #[arg(long, value_name = "SPEC")]
    gen: Option<String>,
    /// Input format, overriding the extension
    #[arg(long, value_name = "edge-list|json")]
    format: Option<String>,
    /// Reject randomized specs without an explicit seed
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, Args)]
struct PruneArgs {
    /// Restrict searches to hop balls around recent cycles
    #[arg(long, overrides_with = "no_prune")]
    prune: bool,
    #[arg(long, overrides_with = "prune")]
    no_prune: bool,
    /// Ball radius in hops
    #[arg(long, value_name = "HOPS")]
    prune_dist: Option<usize>,
    /// Searches served by one view before a full-graph search
    #[arg(long, value_name = "N")]
    prune_interval: Option<usize>,
    /// Views smaller than this fraction of the graph are rejected
    #[arg(long, value_name = "FRACTION")]
    prune_min_frac: Option<f64>,
}

impl PruneArgs {
    fn config(&self, enabled_by_default: bool) -> Result<PruneConfig> {
        let d = PruneConfig::default();
        let cfg = PruneConfig {
            enabled: if self.prune {
                true
            } else if self.no_prune {
                false
            } else {
                enabled_by_default
            },
            reset_interval: self.prune_interval.unwrap_or(d.reset_interval),
            distance_threshold: self.prune_dist.unwrap_or(d.distance_threshold),
            min_fraction: self.prune_min_frac.unwrap_or(d.min_fraction),
        };
        if cfg.reset_interval == 0 {
            bail!("--prune-interval must be at least 1");
        }
        if !(cfg.min_fraction > 0.0 && cfg.min_fraction <= 1.0) {
            bail!("--prune-min-frac must lie in (0, 1]");
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct GirthArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Disable vertex discarding
    #[arg(long)]
    no_discard: bool,
    /// certified | literal
    #[arg(long, default_value = "certified")]
    discard_rule: String,
    #[command(flatten)]
    prune: PruneArgs,
    /// Root order: ascending | degree-desc
    #[arg(long, default_value = "ascending")]
    order: String,
    /// Print a minimum cycle
    #[arg(long)]
    witness: bool,
    /// Also run a baseline: `rooted`
    #[arg(long, value_name = "METHOD")]
    compare: Option<String>,
    /// Exit with code 2 when the graph has no cycle
    #[arg(long)]
    require_cycle: bool,
    /// JSON report path
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ModulusArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Violation tolerance ε
    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,
    /// Iteration cap (default 10|V|)
    #[arg(long)]
    max_iters: Option<usize>,
    /// Initial constraint count (default min(|E|/3, 50))
    #[arg(long)]
    init_target: Option<usize>,
    /// Violated cycles added per iteration
    #[arg(long, default_value_t = 5)]
    k_add: usize,
    #[command(flatten)]
    prune: PruneArgs,
    #[arg(long, default_value_t = 1e-8)]
    qp_tol: f64,
    /// Also solve over all enumerated cycles (at most 14 vertices)
    #[arg(long)]
    oracle: bool,
    /// JSON report path
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Generator spec
    spec: String,
    /// Output path; stdout when absent
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_name = "edge-list|json")]
    format: Option<String>,
    /// Generator metadata path (default `<output>.meta.json` when there is any)
    #[arg(long, value_name = "PATH")]
    meta: Option<PathBuf>,
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// grids | ffactor | light-tree | modulus | all
    suite: String,
    /// Output directory
    #[arg(short, long, default_value = ".")]
    out: PathBuf,
    /// Seeds for randomized suites
    #[arg(long, default_value_t = 10)]
    seeds: u64,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let outcome = match cli.command {
        Command::Girth(a) => cmd_girth(&a, &echo, out),
        Command::Modulus(a) => cmd_modulus(&a, &echo, out),
        Command::Gen(a) => cmd_gen(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn parse_spec(text: &str, strict: bool) -> Result<GraphSpec> {
    let spec: GraphSpec = text.parse().with_context(|| format!("bad generator spec {text:?}"))?;
    if strict && spec.is_random() && spec.seed.is_none() {
        bail!("randomized spec {text:?} has no seed= (required by --strict)");
    }
    Ok(spec)
}

fn load_input(args: &InputArgs) -> Result<(WeightedGraph, String)> {
    if let Some(text) = &args.gen {
        let spec = parse_spec(text, args.strict)?;
        return Ok((generate(&spec)?, spec.to_string()));
    }
    let Some(path) = &args.input else {
        bail!("give an input file or --gen SPEC");
    };
    let format = match &args.format {
        Some(f) => f.parse()?,
        None => GraphFormat::from_path(path),
    };
    let graph = if path.as_os_str() == "-" {
        load_graph(io::stdin().lock(), format)?
    } else {
        let file = fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
        load_graph(io::BufReader::new(file), format).with_context(|| format!("cannot load {}", path.display()))?
    };
    Ok((graph, path.display().to_string()))
}

fn write_report(path: &Path, report: &RunReport) -> Result<()> {
    fs::write(path, report.to_json()).with_context(|| format!("cannot write {}", path.display()))
}

fn labels(graph: &WeightedGraph, vertices: &[usize]) -> String {
    vertices.iter().map(|&v| graph.label(v)).collect::<Vec<_>>().join(" ")
}

fn cmd_girth(args: &GirthArgs, echo: &[String], out: &mut dyn Write) -> Result<i32> {
    let (graph, input) = load_input(&args.input)?;
    let prune = args.prune.config(false)?;
    let options = MwcOptions {
        discarding: !args.no_discard,
        discard_rule: args.discard_rule.parse::<DiscardRule>().map_err(anyhow::Error::msg)?,
        pruning: prune.enabled.then_some(prune),
        collect_witness: true,
        order: args.order.parse::<RootOrder>().map_err(anyhow::Error::msg)?,
    };
    if let Some(m) = &args.compare {
        if m != "rooted" {
            bail!("unknown comparison method {m:?} (expected `rooted`)");
        }
    }

    let started = Instant::now();
    let result = find_mwc(&graph, &options);
    let baseline = args.compare.as_ref().map(|_| rooted_girth(&graph));
    let wall = started.elapsed().as_secs_f64();

    writeln!(out, "gamma = {}", fmt_num(result.gamma))?;
    if args.witness {
        match &result.witness {
            Some(c) => writeln!(out, "cycle = {}", labels(&graph, &c.vertices))?,
            None => writeln!(out, "cycle = none")?,
        }
    }
    let mut compare = Value::Null;
    if let Some(b) = &baseline {
        let ratio = result.stats.extractions as f64 / b.stats.extractions.max(1) as f64;
        writeln!(out, "rooted gamma = {}", fmt_num(b.gamma))?;
        writeln!(out, "ops alg1 = {}", result.stats.extractions)?;
        writeln!(out, "ops rooted = {}", b.stats.extractions)?;
        writeln!(out, "ops ratio = {ratio:.6}")?;
        if b.gamma != result.gamma {
            bail!("methods disagree: {} vs {}", result.gamma, b.gamma);
        }
        compare = json!({
            "method": "rooted",
            "gamma": serde_json::to_value(b)?["gamma"],
            "stats": b.stats,
            "ops_ratio": ratio,
        });
    }

    if let Some(path) = &args.report {
        let report = RunReport {
            command: echo.to_vec(),
            input,
            config: serde_json::to_value(options)?,
            wall_time_s: wall,
            stats: serde_json::to_value(result.stats)?,
            result: json!({
                "mwc": result,
                "compare": compare,
                "vertices": graph.vertex_count(),
                "edges": graph.edge_count(),
            }),
        };
        write_report(path, &report)?;
    }
    if args.require_cycle && result.witness.is_none() && result.gamma == f64::INFINITY {
        return Ok(EXIT_NO_CYCLE);
    }
    Ok(EXIT_OK)
}

fn cmd_modulus(args: &ModulusArgs, echo: &[String], out: &mut dyn Write) -> Result<i32> {
    let (graph, input) = load_input(&args.input)?;
    if !(args.epsilon > 0.0 && args.epsilon < 1.0) {
        bail!("--epsilon must lie in (0, 1)");
    }
    if args.k_add == 0 {
        bail!("--k-add must be at least 1");
    }
    if !(args.qp_tol > 0.0) {
        bail!("--qp-tol must be positive");
    }
    let config = ModulusConfig {
        epsilon: args.epsilon,
        max_iters: args.max_iters,
        init_target: args.init_target,
        cycles_per_iter: args.k_add,
        prune: args.prune.config(true)?,
        qp_tolerance: args.qp_tol,
        qp_max_passes: 0,
    };
    let started = Instant::now();
    let result = compute_modulus(&graph, &config);
    let wall = started.elapsed().as_secs_f64();
    print_table(out, &result)?;

    let oracle = if args.oracle {
        if graph.vertex_count() > ENUMERATION_LIMIT {
            bail!("--oracle needs at most {ENUMERATION_LIMIT} vertices");
        }
        let m = full_constraint_modulus(&graph, 1e-9)?;
        writeln!(out, "oracle modulus = {}", fmt_sig(m, 12))?;
        json!(m)
    } else {
        Value::Null
    };

    if let Some(path) = &args.report {
        let mut payload = result.to_json(&graph);
        payload["oracle_modulus"] = oracle;
        payload["vertices"] = json!(graph.vertex_count());
        payload["edges"] = json!(graph.edge_count());
        let report = RunReport {
            command: echo.to_vec(),
            input,
            config: json!({
                "epsilon": config.epsilon,
                "max_iters": config.effective_max_iters(&graph),
                "init_target": config.effective_init_target(&graph),
                "cycles_per_iter": config.cycles_per_iter,
                "prune": config.prune,
                "qp_tolerance": config.qp_tolerance,
            }),
            wall_time_s: wall,
            stats: serde_json::to_value(result.search_stats)?,
            result: payload,
        };
        write_report(path, &report)?;
    }
    Ok(if result.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

fn print_table(out: &mut dyn Write, r: &ModulusResult) -> Result<()> {
    writeln!(out, "modulus = {}", fmt_sig(r.modulus, 12))?;
    writeln!(out, "constraints = {}", r.constraints.len())?;
    writeln!(out, "qp_solves = {}", r.qp_solves)?;
    writeln!(out, "iterations = {}", r.iterations)?;
    writeln!(out, "time_s = {:.3}", r.elapsed_s)?;
    writeln!(out, "converged = {}", r.converged)?;
    if !r.qp_converged {
        writeln!(out, "warning: a QP solve stopped at its pass limit")?;
    }
    Ok(())
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = parse_spec(&args.spec, args.strict)?;
    let (graph, meta) = generate_with_meta(&spec)?;
    let format = match (&args.format, &args.output) {
        (Some(f), _) => f.parse()?,
        (None, Some(p)) => GraphFormat::from_path(p),
        (None, None) => GraphFormat::EdgeList,
    };
    match &args.output {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            let mut w = io::BufWriter::new(file);
            save_graph(&graph, &mut w, format)?;
            w.flush()?;
        }
        None => save_graph(&graph, &mut *out, format)?,
    }
    let meta_path = args.meta.clone().or_else(|| {
        let has_meta = meta != Default::default();
        args.output
            .as_ref()
            .filter(|_| has_meta)
            .map(|p| PathBuf::from(format!("{}.meta.json", p.display())))
    });
    if let Some(path) = meta_path {
        let text = serde_json::to_string_pretty(&json!({ "spec": spec.to_string(), "meta": meta }))?;
        fs::write(&path, text + "\n").with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(EXIT_OK)
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let suites: &[&str] = match args.suite.as_str() {
        "all" => &["grids", "ffactor", "light-tree", "modulus"],
        "grids" => &["grids"],
        "ffactor" => &["ffactor"],
        "light-tree" => &["light-tree"],
        "modulus" => &["modulus"],
        other => bail!("unknown suite {other:?} (grids, ffactor, light-tree, modulus, all)"),
    };
    fs::create_dir_all(&args.out).with_context(|| format!("cannot create {}", args.out.display()))?;
    for suite in suites {
        let files = match *suite {
            "grids" => bench::grids(&args.out)?,
            "ffactor" => bench::ffactor(&args.out)?,
            "light-tree" => bench::light_tree(&args.out, args.seeds)?,
            _ => bench::modulus(&args.out)?,
        };
        for f in files {
            writeln!(out, "wrote {}", f.display())?;
        }
    }
    Ok(EXIT_OK)
}

pub mod bench {
    //! Benchmark suites behind `loopmod bench`, each writing CSV files.

    use std::path::{Path, PathBuf};

    use anyhow::Result;

    use super::*;

    /// `grids.csv`: `d,gamma,ops_alg1,ops_rooted,ratio` for `d = 3..=12`.
    pub fn grids(dir: &Path) -> Result<Vec<PathBuf>> {
        let path = dir.join("grids.csv");
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["d", "gamma", "ops_alg1", "ops_rooted", "ratio"])?;
        for d in 3..=12 {
            let g = generate(&format!("grid:{d}").parse()?)?;
            let a = find_mwc(&g, &MwcOptions::default());
            let b = rooted_girth(&g);
            let ratio = a.stats.extractions as f64 / b.stats.extractions as f64;
            w.write_record([
                d.to_string(),
                fmt_num(a.gamma),
                a.stats.extractions.to_string(),
                b.stats.extractions.to_string(),
                format!("{ratio:.6}"),
            ])?;
        }
        w.flush()?;
        Ok(vec![path])
    }

    pub const FFACTOR_MODELS: [(&str, &str); 4] = [
        ("er", "er:100:0.06:seed=1"),
        ("ba", "ba:100:3:seed=1"),
        ("ws", "ws:100:6:0.1:seed=1"),
        ("k", "complete:20"),
    ];

    /// `ffactor_<model>.csv` with `k,fraction` for each model.
    pub fn ffactor(dir: &Path) -> Result<Vec<PathBuf>> {
        let mut files = Vec::new();
        for (name, spec) in FFACTOR_MODELS {
            let g = generate(&spec.parse()?)?;
            let path = dir.join(format!("ffactor_{name}.csv"));
            f_factor_simulation(&g).write_csv(fs::File::create(&path)?)?;
            files.push(path);
        }
        Ok(files)
    }

    /// `light_tree.csv`: `seed,n,gamma,ops_alg1,ops_rooted` on `light-tree:60`.
    pub fn light_tree(dir: &Path, seeds: u64) -> Result<Vec<PathBuf>> {
        let path = dir.join("light_tree.csv");
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["seed", "n", "gamma", "ops_alg1", "ops_rooted"])?;
        for seed in 1..=seeds {
            let g = generate(&format!("light-tree:60:seed={seed}").parse()?)?;
            let a = find_mwc(&g, &MwcOptions::default());
            let b = rooted_girth(&g);
            w.write_record([
                seed.to_string(),
                g.vertex_count().to_string(),
                fmt_num(a.gamma),
                a.stats.extractions.to_string(),
                b.stats.extractions.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(vec![path])
    }

    pub const MODULUS_SPEC: &str = "proximity:324:941:seed=1";

    /// `modulus.csv`: `run,qp_solves,iterations,constraints,modulus,time_s`
    /// for the default pipeline and the one-cycle, no-pruning baseline.
    pub fn modulus(dir: &Path) -> Result<Vec<PathBuf>> {
        let g = generate(&MODULUS_SPEC.parse()?)?;
        let path = dir.join("modulus.csv");
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["run", "qp_solves", "iterations", "constraints", "modulus", "time_s", "converged"])?;
        for (name, cfg) in [("optimized", ModulusConfig::default()), ("baseline", ModulusConfig::baseline())] {
            let r = compute_modulus(&g, &cfg);
            w.write_record([
                name.to_string(),
                r.qp_solves.to_string(),
                r.iterations.to_string(),
                r.constraints.len().to_string(),
                format!("{:.10}", r.modulus),
                format!("{:.3}", r.elapsed_s),
                r.converged.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(vec![path])
    }
}
