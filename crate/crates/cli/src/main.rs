//! `typed-kge`: prepare, train, evaluate, grid and synth.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use typed_kge::models::ModelKind;
use typed_kge::pipeline::{self, parse_kv, GridSpec, Regime, RunConfig};
use typed_kge::synth::SyntheticSpec;

#[derive(Parser)]
#[command(name = "typed-kge", version, about = "Link prediction with type-constrained knowledge-graph embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split the triples, resolve relation semantics and persist them
    Prepare(RunArgs),
    /// Train on a prepared run directory
    Train(RunArgs),
    /// Score the holdout split of a trained run
    Evaluate(RunArgs),
    /// Run prepare, train and evaluate over models x regimes x dims
    Grid(GridArgs),
    /// Generate a synthetic typed knowledge graph
    Synth(SynthArgs),
}

/// Hyper-parameter flags shared by the run commands and `grid`.
#[derive(Args, Default)]
struct HyperFlags {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    batch: Option<usize>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long = "lambda-a")]
    lambda_a: Option<f64>,
    #[arg(long = "lambda-r")]
    lambda_r: Option<f64>,
    #[arg(long)]
    corruptions: Option<usize>,
    #[arg(long)]
    dropconnect: Option<f64>,
    #[arg(long)]
    l1: Option<f64>,
    #[arg(long)]
    l2: Option<f64>,
    #[arg(long = "init-std")]
    init_std: Option<f64>,
}

impl HyperFlags {
    fn pairs(&self) -> Vec<(String, String)> {
        fn put<T: ToString>(out: &mut Vec<(String, String)>, key: &str, v: &Option<T>) {
            if let Some(v) = v {
                out.push((key.to_owned(), v.to_string()));
            }
        }
        let mut out = Vec::new();
        put(&mut out, "seed", &self.seed);
        put(&mut out, "epochs", &self.epochs);
        put(&mut out, "lr", &self.lr);
        put(&mut out, "batch", &self.batch);
        put(&mut out, "gamma", &self.gamma);
        put(&mut out, "lambda_a", &self.lambda_a);
        put(&mut out, "lambda_r", &self.lambda_r);
        put(&mut out, "corruptions", &self.corruptions);
        put(&mut out, "dropconnect", &self.dropconnect);
        put(&mut out, "l1", &self.l1);
        put(&mut out, "l2", &self.l2);
        put(&mut out, "init_std", &self.init_std);
        out
    }
}

#[derive(Args)]
struct RunArgs {
    /// Flat key=value config file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<ModelKind>,
    #[arg(long)]
    regime: Option<Regime>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    triples: Option<PathBuf>,
    #[arg(long)]
    types: Option<PathBuf>,
    #[arg(long)]
    constraints: Option<PathBuf>,
    /// Run directory
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    hyper: HyperFlags,
}

impl RunArgs {
    fn config(&self) -> typed_kge::Result<RunConfig> {
        let mut pairs = match &self.config {
            Some(path) => parse_kv(&std::fs::read_to_string(path).map_err(|source| typed_kge::Error::File {
                path: path.clone(),
                source,
            })?)?,
            None => Vec::new(),
        };
        let path = |p: &PathBuf| p.display().to_string();
        let flags = [
            ("model", self.model.map(|m| m.to_string())),
            ("regime", self.regime.map(|r| r.to_string())),
            ("dim", self.dim.map(|d| d.to_string())),
            ("triples", self.triples.as_ref().map(path)),
            ("types", self.types.as_ref().map(path)),
            ("constraints", self.constraints.as_ref().map(path)),
            ("out", self.out.as_ref().map(path)),
        ];
        pairs.extend(flags.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_owned(), v))));
        pairs.extend(self.hyper.pairs());
        RunConfig::from_pairs(pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())))
    }
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    triples: PathBuf,
    #[arg(long)]
    types: Option<PathBuf>,
    #[arg(long)]
    constraints: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated models
    #[arg(long = "model", value_delimiter = ',', default_value = "rescal,transe,mwnn")]
    models: Vec<ModelKind>,
    /// Comma-separated regimes
    #[arg(long = "regime", value_delimiter = ',', default_value = "none,schema,lcwa")]
    regimes: Vec<Regime>,
    /// Comma-separated embedding lengths
    #[arg(long = "dim", value_delimiter = ',', default_value = "10")]
    dims: Vec<usize>,
    /// Concurrent cells; 0 uses every core
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[command(flatten)]
    hyper: HyperFlags,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 3)]
    classes: usize,
    #[arg(long, default_value_t = 50)]
    entities_per_class: usize,
    #[arg(long, default_value_t = 6)]
    relations: usize,
    #[arg(long, default_value_t = 500)]
    triples_per_relation: usize,
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    /// Communities per class (default: chosen by the generator)
    #[arg(long)]
    communities: Option<usize>,
    /// Range communities linked from each domain community
    #[arg(long)]
    links: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn run(cli: Cli) -> typed_kge::Result<()> {
    match cli.command {
        Command::Prepare(args) => {
            let cfg = args.config()?;
            let prepared = pipeline::cmd_prepare(&cfg)?;
            let s = &prepared.split;
            println!(
                "prepared {}: train {} / validation {} / holdout {} triples, {} holdout negatives",
                cfg.out.display(),
                s.train.len(),
                s.validation.len(),
                s.holdout.len(),
                s.holdout_negatives.len()
            );
        }
        Command::Train(args) => {
            let cfg = args.config()?;
            let (_, log) = pipeline::cmd_train(&cfg)?;
            let best = log.records.iter().find(|r| r.epoch == log.best_epoch);
            println!(
                "trained {} for {} epochs; best epoch {} (probe AUPRC {})",
                cfg.model,
                log.records.len(),
                log.best_epoch,
                best.map_or("n/a".into(), |r| format!("{:.4}", r.probe_auprc))
            );
        }
        Command::Evaluate(args) => {
            let cfg = args.config()?;
            let report = pipeline::cmd_evaluate(&cfg)?;
            println!("{}", summary_line(&report));
        }
        Command::Grid(args) => {
            let spec = GridSpec {
                triples: args.triples,
                types: args.types,
                constraints: args.constraints,
                out: args.out,
                models: args.models,
                regimes: args.regimes,
                dims: args.dims,
                overrides: args.hyper.pairs(),
                workers: args.workers,
            };
            let outcome = pipeline::cmd_grid(&spec)?;
            print!("{}", std::fs::read_to_string(spec.out.join("grid.md"))?);
            for f in &outcome.failures {
                eprintln!("cell {} failed: {}", f.cell.dir_name(), f.message);
            }
        }
        Command::Synth(args) => {
            let mut spec = SyntheticSpec::new(
                args.classes,
                args.entities_per_class,
                args.relations,
                args.triples_per_relation,
                args.noise,
                args.seed,
            );
            if let Some(c) = args.communities {
                spec.communities = c;
            }
            if let Some(l) = args.links {
                spec.links = l;
            }
            let files = pipeline::cmd_synth(&spec, &args.out)?;
            println!(
                "wrote {}, {} and {}",
                files.triples.display(),
                files.types.display(),
                files.constraints.display()
            );
        }
    }
    Ok(())
}

fn summary_line(report: &typed_kge::eval::EvalReport) -> String {
    format!(
        "auprc {:.4}  auroc {:.4}  ({} {} d={} seed={}, {} positives / {} negatives)",
        report.auprc, report.auroc, report.model, report.regime, report.dim, report.seed, report.n_pos, report.n_neg
    )
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
