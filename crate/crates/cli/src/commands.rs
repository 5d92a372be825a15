use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::{Context, Result};
use rcd_core::dataset::{load_manifest, scan_market_layout, Manifest};
use rcd_core::ensemble::{analyze, component_error, ensemble_error, sweep, write_sweep_csv, SweepConfig, VoteMatrix};
use rcd_core::eval::{evaluate, EvalOptions};
use rcd_core::features::load_features;
use rcd_core::losses::{id_loss, mine_hard_triplets, triplet_loss, triplet_loss_literal};
use rcd_core::pipeline::{augment_corpus, firing_rates, write_augment_manifest, write_stats_csv, CorpusOptions};
use rcd_core::sampler::{sample_batch, BatchSpec};
use rcd_core::{load_image, ImageBuffer, RngStream};
use serde_json::json;

use crate::cli::{AugmentArgs, BatchArgs, Command, EnsembleArgs, EvalArgs, LossArgs, StatsArgs, SweepArgs};

/// A flag value that parsed but makes no sense.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::error::Error for UsageError {}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub const THREADS_ENV: &str = "RCD_THREADS";

/// Caps the global rayon pool at `RCD_THREADS` when set.
pub fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| UsageError(format!("{THREADS_ENV}={value:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("cannot configure thread pool")
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Augment(a) => augment(a),
        Command::Batch(a) => batch(a),
        Command::Loss(a) => loss(a),
        Command::Eval(a) => eval(a),
        Command::Ensemble(a) => ensemble(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::Stats(a) => stats(a),
    }
}

fn read_corpus(input_dir: Option<&std::path::Path>, manifest: Option<&std::path::Path>) -> Result<Manifest> {
    match (input_dir, manifest) {
        (Some(dir), _) => {
            let report = scan_market_layout(dir)?;
            for p in &report.skipped {
                eprintln!("skipped {}", p.display());
            }
            Ok(report.manifest)
        }
        (None, Some(path)) => Ok(load_manifest(path)?),
        (None, None) => Err(UsageError("need --input-dir or --manifest".into()).into()),
    }
}

fn augment(args: AugmentArgs) -> Result<()> {
    let cfg = args.transform.config();
    cfg.validate()?;
    let manifest = read_corpus(args.input_dir.as_deref(), args.manifest.as_deref())?;
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))?;
    let opts = CorpusOptions {
        out_dir: args.out_dir.clone(),
        per_batch: args.per_batch.then_some(args.batch_size),
    };
    let records = augment_corpus(&manifest, &cfg, &opts)?;

    let manifest_path = args.out_dir.join("manifest.jsonl");
    let file = File::create(&manifest_path).with_context(|| format!("cannot write {}", manifest_path.display()))?;
    let mut w = BufWriter::new(file);
    write_augment_manifest(&records, &mut w)?;
    w.flush()?;

    let applied = records.iter().filter(|r| r.applied).count();
    eprintln!(
        "{} images, {} transformed, manifest at {}",
        records.len(),
        applied,
        manifest_path.display()
    );
    Ok(())
}

fn batch(args: BatchArgs) -> Result<()> {
    let manifest = load_manifest(&args.manifest)?;
    let spec = BatchSpec::new(args.k, args.m, args.seed)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for i in 0..args.count {
        let mut rng = RngStream::with_stream(args.seed, i as u64);
        let b = sample_batch(&manifest, &spec, &mut rng)?;
        serde_json::to_writer(&mut out, &json!({ "batch": i, "entries": b.entries }))?;
        writeln!(out)?;
    }
    Ok(())
}

fn loss(args: LossArgs) -> Result<()> {
    let batch = load_features(&args.features)?;
    let selections = mine_hard_triplets(&batch)?;
    let triplet = triplet_loss(&selections, args.margin)?;
    let id = if batch.iter().all(|r| r.probs.is_some()) {
        Some(id_loss(&batch)?)
    } else {
        None
    };
    let mut report = json!({
        "triplet": triplet,
        "id": id,
        "total": id.map(|id| triplet + id),
    });
    if args.paper_literal {
        report["triplet_literal"] = json!(triplet_loss_literal(&selections, args.margin)?);
    }
    println!("{report}");
    Ok(())
}

fn eval(args: EvalArgs) -> Result<()> {
    let queries = load_features(&args.query).with_context(|| format!("reading {}", args.query.display()))?;
    let gallery = load_features(&args.gallery).with_context(|| format!("reading {}", args.gallery.display()))?;
    let opts = EvalOptions {
        max_rank: args.max_rank,
        cam_filter: !args.no_cam_filter,
    };
    let result = evaluate(&queries, &gallery, &opts)?;
    println!("{}", serde_json::to_string(&result)?);
    Ok(())
}

fn parse_votes(text: &str) -> Result<Vec<i8>> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<i8>()
                .map_err(|_| UsageError(format!("vote {t:?} is not an integer")).into())
        })
        .collect()
}

fn ensemble(args: EnsembleArgs) -> Result<()> {
    let file = File::open(&args.votes).with_context(|| format!("cannot open {}", args.votes.display()))?;
    let f = VoteMatrix::read_from(file)?;
    let report = match (args.swap, args.with.as_deref()) {
        (Some(k), Some(with)) => serde_json::to_value(analyze(&f, k, &parse_votes(with)?)?)?,
        _ => json!({
            "component_errors": (0..f.components()).map(|i| component_error(&f, i)).collect::<Result<Vec<_>, _>>()?,
            "sum_votes": f.sums(),
            "ensemble_error": ensemble_error(&f),
        }),
    };
    println!("{report}");
    Ok(())
}

fn sweep_cmd(args: SweepArgs) -> Result<()> {
    let cfg = SweepConfig {
        components: args.components,
        instances: args.instances,
        deviated_rates: args.dev_rates.unwrap_or_else(|| args.rates.clone()),
        base_rates: args.rates,
        trials: args.trials,
        seed: args.seed,
    };
    let rows = sweep(&cfg)?;
    match args.out {
        Some(path) => {
            let file = File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
            write_sweep_csv(&rows, BufWriter::new(file))?;
        }
        None => write_sweep_csv(&rows, io::stdout().lock())?,
    }
    Ok(())
}

fn stats(args: StatsArgs) -> Result<()> {
    let cfg = args.transform.config();
    cfg.validate()?;
    let images = match &args.manifest {
        Some(path) => load_manifest(path)?
            .records()
            .iter()
            .map(|r| load_image(&r.path))
            .collect::<Result<Vec<_>, _>>()?,
        None => {
            if args.width == 0 || args.height == 0 {
                return Err(UsageError("synthetic image needs width and height >= 1".into()).into());
            }
            let mut rng = RngStream::with_stream(cfg.seed, u64::MAX);
            let raw: Vec<u8> = (0..args.width * args.height * 3).map(|_| rng.below(256) as u8).collect();
            vec![ImageBuffer::from_raw(args.width, args.height, &raw)?]
        }
    };
    let rows = firing_rates(&images, &cfg, args.trials)?;
    write_stats_csv(&rows, io::stdout().lock())?;
    Ok(())
}
