use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use relax_cli::compare::compare;
use relax_cli::descriptor::{Engine, ExperimentDescriptor};
use relax_cli::output::write_outputs;
use relax_cli::run::{run, RunSettings, DEFAULT_SEED};
use relax_core::automaton::{build_gate_set, enumerate_krylov, ImpurityKind, ImpuritySpec, ModelId, DEFAULT_BUDGET, DEFAULT_STATE_CAP};
use relax_core::continuum::{asymptotic_law, catalogue, ContinuumParams, ImpurityClass, Quantity, Regime, RegimeSpec, Symmetry};
use relax_core::series::CorrelationSeries;
use relax_core::studies::{evaluate, StudyOptions};

#[derive(Parser)]
#[command(name = "relax", version, about = "Relaxation experiments near impurities in constrained chains")]
struct Cli {
    /// Overrides every descriptor seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "RELAX_WORKERS")]
    workers: Option<usize>,
    /// Cap on `t_max * L * samples` for sampler runs.
    #[arg(long, global = true, env = "RELAX_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one descriptor.
    Run {
        descriptor: PathBuf,
        /// Output root; files go to `<out>/<id>/` unless the descriptor sets `output`.
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Run every descriptor in a directory, then evaluate the criteria they name.
    RunAll {
        #[arg(long, default_value = "descriptors")]
        dir: PathBuf,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Skip the acceptance evaluation after the runs.
        #[arg(long)]
        no_criteria: bool,
    },
    /// Compare two series files point by point.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 4.0)]
        sigmas: f64,
        #[arg(long, default_value_t = 0.99)]
        fraction: f64,
        /// Also compare power-law exponents over `lo,hi`.
        #[arg(long, value_parser = parse_window)]
        fit: Option<(f64, f64)>,
    },
    /// Evaluate a catalogue law against the continuum solution.
    Predict(PredictArgs),
    /// Count Krylov sectors of a model.
    Enumerate {
        #[arg(long)]
        model: ModelId,
        #[arg(long)]
        l: usize,
        /// `kind@sites`, e.g. `resample@5` or `swap@1,2`.
        #[arg(long, value_parser = parse_impurity)]
        impurity: Option<ImpuritySpec>,
    },
}

#[derive(Args)]
struct PredictArgs {
    /// Print the whole catalogue and exit.
    #[arg(long)]
    list: bool,
    #[arg(long, value_parser = parse_snake::<Symmetry>, required_unless_present = "list")]
    symmetry: Option<Symmetry>,
    #[arg(long, value_parser = parse_snake::<ImpurityClass>, required_unless_present = "list")]
    impurity: Option<ImpurityClass>,
    #[arg(long, value_parser = parse_snake::<Regime>, required_unless_present = "list")]
    regime: Option<Regime>,
    #[arg(long, value_parser = parse_snake::<Quantity>, required_unless_present = "list")]
    quantity: Option<Quantity>,
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    #[arg(long, default_value_t = 1.0)]
    g: f64,
    #[arg(long, default_value_t = 0.0)]
    x: f64,
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    #[arg(long, default_value_t = 0.0)]
    xs: f64,
    #[arg(long, default_value_t = 100.0)]
    t: f64,
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected lo,hi")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if !(lo > 0.0 && hi > lo) {
        return Err("need 0 < lo < hi".into());
    }
    Ok((lo, hi))
}

fn parse_impurity(s: &str) -> Result<ImpuritySpec, String> {
    let (kind, sites) = s.split_once('@').ok_or("expected kind@sites")?;
    let kind: ImpurityKind = kind.parse().map_err(|e| format!("{e}"))?;
    let sites = sites
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|e| format!("{e}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ImpuritySpec::new(kind, &sites))
}

fn parse_snake<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn run_one(path: &Path, out: &Path, settings: &RunSettings) -> anyhow::Result<ExperimentDescriptor> {
    let desc = ExperimentDescriptor::load(path).with_context(|| format!("loading {}", path.display()))?;
    let start = Instant::now();
    let files = run(&desc, settings).with_context(|| format!("running {}", desc.id))?;
    let dir = desc.output.clone().unwrap_or_else(|| out.join(&desc.id));
    let seed = (desc.engine == Engine::Automaton).then(|| settings.seed.or(desc.seed).unwrap_or(DEFAULT_SEED));
    let sidecar = write_outputs(&dir, &desc, seed, &files, start.elapsed().as_secs_f64())?;
    println!("{}: {} file(s), sidecar {}", desc.id, files.len(), sidecar.display());
    Ok(desc)
}

/// Prints to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> anyhow::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn load_series(path: &Path) -> anyhow::Result<CorrelationSeries> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(CorrelationSeries::from_csv(&text, 0)?)
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> anyhow::Result<bool> {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let settings = RunSettings { seed: cli.seed, budget: cli.budget };
    match cli.command {
        Command::Run { descriptor, out } => {
            run_one(&descriptor, &out, &settings)?;
            Ok(true)
        }
        Command::RunAll { dir, out, no_criteria } => {
            let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
                .with_context(|| format!("reading {}", dir.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "toml"))
                .collect();
            paths.sort();
            if paths.is_empty() {
                bail!("no descriptors in {}", dir.display());
            }
            let mut criteria = Vec::new();
            for p in &paths {
                let desc = run_one(p, &out, &settings)?;
                criteria.extend(desc.criterion);
            }
            if no_criteria {
                return Ok(true);
            }
            criteria.sort_unstable();
            criteria.dedup();
            let mut opts = StudyOptions { budget: settings.budget, ..StudyOptions::default() };
            if let Some(s) = settings.seed {
                opts.seed = s;
            }
            let mut all = true;
            for id in criteria {
                let report = evaluate(id, &opts)?;
                println!("{}", report.line());
                all &= report.passed();
            }
            Ok(all)
        }
        Command::Compare { a, b, sigmas, fraction, fit } => {
            let report = compare(&load_series(&a)?, &load_series(&b)?, sigmas, fraction, fit)?;
            emit(&serde_json::to_string_pretty(&report)?)?;
            Ok(report.pass)
        }
        Command::Predict(args) => {
            if args.list {
                emit(&serde_json::to_string_pretty(&catalogue())?)?;
                return Ok(true);
            }
            let (Some(symmetry), Some(impurity), Some(regime), Some(quantity)) =
                (args.symmetry, args.impurity, args.regime, args.quantity)
            else {
                bail!("--symmetry, --impurity, --regime and --quantity are required");
            };
            let law = asymptotic_law(&RegimeSpec::new(symmetry, impurity, regime, quantity))?;
            let p = ContinuumParams { d: args.d, g: args.g, x: args.x, x0: args.x0, xs: args.xs, t: args.t };
            let exact = law.exact(&p)?;
            let predicted = law.predict(&p);
            let report = serde_json::json!({
                "law": law,
                "params": p,
                "scaling_variable": law.variable(&p),
                "predicted": predicted,
                "exact": exact,
                "relative_deviation": ((predicted - exact) / exact).abs(),
            });
            emit(&serde_json::to_string_pretty(&report)?)?;
            Ok(true)
        }
        Command::Enumerate { model, l, impurity } => {
            let gs = build_gate_set(model, l, impurity.as_ref())?;
            let report = enumerate_krylov(&gs, DEFAULT_STATE_CAP)?;
            let out = serde_json::json!({
                "model": model.to_string(),
                "l": l,
                "impurity": ImpuritySpec::describe(impurity.as_ref()),
                "subspace_count": report.subspace_count,
                "size_histogram": report.size_histogram,
            });
            emit(&serde_json::to_string_pretty(&out)?)?;
            Ok(true)
        }
    }
}
