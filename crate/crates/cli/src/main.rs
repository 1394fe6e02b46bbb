mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use siegel_bn::bn::{FrechetConfig, DEFAULT_MOMENTUM};
use siegel_bn::formats::{BnStateFile, DatasetFile, FeatureRecord, FeaturesFile};
use siegel_bn::radar::{
    bn_normalize_features, generate_dataset, initial_states, knn_run, represent_all, DatasetSpec,
    Split, TimeSeries,
};
use siegel_bn::verify::{run_suites, RunReport, VerifyOptions};

#[derive(Parser)]
#[command(name = "siegel-bn", version, about = "Batch normalization on Siegel domains and synthetic radar clutter")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic clutter dataset.
    Simulate(SimulateArgs),
    /// Compute Burg features of every series in a dataset.
    Represent(RepresentArgs),
    /// Batch-normalize the disk components of a features file.
    Bn(BnArgs),
    /// Classify test features by their nearest training features.
    Knn(KnnArgs),
    /// Run numerical verification suites.
    Verify(VerifyArgs),
}

#[derive(clap::Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    classes: usize,
    #[arg(long, default_value_t = 5)]
    dim: usize,
    #[arg(long, default_value_t = 50)]
    length: usize,
    #[arg(long, default_value_t = 3)]
    order: usize,
    /// Training series per class.
    #[arg(long, default_value_t = 40)]
    per_class: usize,
    /// Test series per class, drawn from the same class recipes.
    #[arg(long, default_value_t = 0)]
    test_per_class: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SplitArg {
    Train,
    Test,
    All,
}

#[derive(clap::Args)]
struct RepresentArgs {
    #[arg(long)]
    input: PathBuf,
    /// Representation order; defaults to the dataset's.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, value_enum, default_value_t = SplitArg::All)]
    split: SplitArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BnMode {
    Fit,
    Apply,
}

#[derive(clap::Args)]
struct BnArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    mode: BnMode,
    /// State file: written in fit mode, read in apply mode.
    #[arg(long)]
    state: PathBuf,
    /// Continue fitting from an existing state file.
    #[arg(long)]
    resume: bool,
    #[arg(long, default_value_t = DEFAULT_MOMENTUM)]
    momentum: f64,
    /// Fréchet mean iterations per batch.
    #[arg(long, default_value_t = 5)]
    iters: usize,
    /// Samples per batch; the whole file by default.
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct KnnArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    /// Fixed neighbour count.
    #[arg(long, conflicts_with = "cv")]
    k: Option<usize>,
    /// Cross-validation folds used to pick k from {1, 3, 5, 7, 9}.
    #[arg(long)]
    cv: Option<usize>,
    /// Shuffle the training labels first (chance-level control).
    #[arg(long)]
    permute_labels: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV accuracy report.
    #[arg(long)]
    out: PathBuf,
    /// CSV confusion counts, one row per true class.
    #[arg(long)]
    confusion: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Suite to run; repeatable. `all` runs every suite.
    #[arg(long = "suite", default_value = "all")]
    suites: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random samples per randomized check.
    #[arg(long)]
    trials: Option<usize>,
    /// JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Negative control: perturb the Kähler distance.
    #[arg(long, hide = true)]
    perturb_distance: bool,
}

/// Exit status of a finished command.
enum Outcome {
    Ok,
    ChecksFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Represent(a) => represent(a),
        Command::Bn(a) => bn(a),
        Command::Knn(a) => knn(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.chain().find_map(|c| c.downcast_ref::<siegel_bn::Error>()) {
        Some(err) if err.is_numerical() => 3,
        _ => 2,
    }
}

fn simulate(a: SimulateArgs) -> Result<Outcome> {
    let spec = DatasetSpec {
        classes: a.classes,
        per_class: a.per_class,
        test_per_class: a.test_per_class,
        dim: a.dim,
        length: a.length,
        order: a.order,
        seed: a.seed,
    };
    let ds = generate_dataset::<f64>(&spec)?;
    io::write_json(&a.out, &DatasetFile::from_dataset(&ds))?;
    eprintln!("wrote {} series to {}", ds.records.len(), a.out.display());
    Ok(Outcome::Ok)
}

fn keep(split: SplitArg, s: Split) -> bool {
    match split {
        SplitArg::All => true,
        SplitArg::Train => s == Split::Train,
        SplitArg::Test => s == Split::Test,
    }
}

fn represent(a: RepresentArgs) -> Result<Outcome> {
    let file: DatasetFile = io::read_json(&a.input)?;
    let ds = file.to_dataset()?;
    let order = a.order.unwrap_or(ds.spec.order);
    let records: Vec<_> = ds.records.iter().filter(|r| keep(a.split, r.split)).collect();
    let series: Vec<&TimeSeries<f64>> = records.iter().map(|r| &r.series).collect();
    let projections = represent_all(&series, order)?;
    let features: Vec<FeatureRecord> = records
        .iter()
        .zip(&projections)
        .map(|(r, p)| FeatureRecord::from_projection(r.label, r.index, r.split, p))
        .collect();
    let invalid = features.iter().filter(|f| !f.valid).count();
    let clamped: usize = features.iter().map(|f| f.clamped_eigenvalues).sum();
    let rescaled: usize = features.iter().map(|f| f.rescaled).sum();
    let out = FeaturesFile::new(ds.spec.seed, ds.spec.classes, ds.spec.dim, order, features);
    io::write_json(&a.out, &out)?;
    eprintln!(
        "wrote {} features to {} ({invalid} invalid, {clamped} clamped eigenvalues, {rescaled} rescaled coefficients)",
        out.features.len(),
        a.out.display()
    );
    Ok(Outcome::Ok)
}

fn bn(a: BnArgs) -> Result<Outcome> {
    let file: FeaturesFile = io::read_json(&a.input)?;
    let (features, _) = file.features()?;
    let cfg = FrechetConfig::with_iterations(a.iters);
    let mut states = match (a.mode, a.resume) {
        (BnMode::Fit, false) => initial_states(file.dim, file.order, a.momentum)?,
        _ => {
            let st: BnStateFile = io::read_json(&a.state)?;
            if st.dim != file.dim || st.slots.len() + 1 != file.order {
                bail!(siegel_bn::Error::Shape(format!(
                    "state of size {} with {} slots does not match features of size {} and order {}",
                    st.dim,
                    st.slots.len(),
                    file.dim,
                    file.order
                )));
            }
            let mut states = st.to_states()?;
            if a.mode == BnMode::Fit {
                for s in &mut states {
                    s.momentum = a.momentum;
                }
            }
            states
        }
    };
    let batch = a.batch_size.unwrap_or(features.len()).max(1);
    let mut normalized = Vec::with_capacity(features.len());
    for chunk in features.chunks(batch) {
        let (out, next) = bn_normalize_features(chunk, &states, a.mode == BnMode::Fit, &cfg)?;
        normalized.extend(out);
        states = next;
    }
    let records = file
        .features
        .iter()
        .zip(&normalized)
        .map(|(r, f)| {
            let mut rec = FeatureRecord::from_feature(r.label, r.index, r.split.into(), f);
            rec.clamped_eigenvalues = r.clamped_eigenvalues;
            rec.rescaled = r.rescaled;
            rec
        })
        .collect();
    let out = FeaturesFile::new(file.seed, file.classes, file.dim, file.order, records);
    io::write_json(&a.out, &out)?;
    if a.mode == BnMode::Fit {
        let momentum = states.first().map_or(a.momentum, |s| s.momentum);
        io::write_json(&a.state, &BnStateFile::from_states(file.seed, file.dim, momentum, &states))?;
    }
    Ok(Outcome::Ok)
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().replace(',', "_"))
        .unwrap_or_else(|| "dataset".into())
}

fn knn(a: KnnArgs) -> Result<Outcome> {
    let train: FeaturesFile = io::read_json(&a.train)?;
    let test: FeaturesFile = io::read_json(&a.test)?;
    if (train.dim, train.order) != (test.dim, test.order) {
        bail!(siegel_bn::Error::Shape("train and test features differ in size or order".into()));
    }
    let (tr, mut trl) = train.features()?;
    let (te, tel) = test.features()?;
    if a.permute_labels {
        trl.shuffle(&mut ChaCha8Rng::seed_from_u64(a.seed));
    }
    let classes = train.classes.max(test.classes);
    let folds = a.cv.unwrap_or(10);
    let run = knn_run(&tr, &trl, &te, &tel, classes, a.k, folds, a.seed)
        .context("kNN evaluation failed")?;
    let ev = &run.evaluation;
    let method = if a.permute_labels { "knn-kahler-permuted" } else { "knn-kahler" };
    let csv = format!(
        "dataset,method,k,accuracy,seed\n{},{method},{},{:.4},{}\n",
        dataset_name(&a.test),
        ev.k,
        ev.accuracy,
        a.seed
    );
    io::write_atomic(&a.out, csv.as_bytes())?;
    if let Some(path) = &a.confusion {
        let mut text = String::from("class");
        for c in 0..classes {
            text.push_str(&format!(",predicted_{c}"));
        }
        text.push('\n');
        for (c, row) in ev.confusion.iter().enumerate() {
            text.push_str(&c.to_string());
            for v in row {
                text.push_str(&format!(",{v}"));
            }
            text.push('\n');
        }
        io::write_atomic(path, text.as_bytes())?;
    }
    if let Some(cv) = &run.cv {
        for (k, s) in &cv.scores {
            eprintln!("cv k={k}: {s:.4}");
        }
    }
    eprintln!("k={} accuracy={:.4}", ev.k, ev.accuracy);
    Ok(Outcome::Ok)
}

fn verify(a: VerifyArgs) -> Result<Outcome> {
    let start = Instant::now();
    let opts = VerifyOptions {
        seed: a.seed,
        trials: a.trials,
        perturb_distance: a.perturb_distance,
    };
    let checks = run_suites(&a.suites, &opts)?;
    let config = json!({
        "suites": a.suites,
        "trials": a.trials,
        "perturb_distance": a.perturb_distance,
    });
    let report = RunReport::new("verify", config, checks, start.elapsed().as_millis() as u64, a.seed);
    println!("{}", report.text());
    if let Some(path) = &a.out {
        io::write_json(path, &report)?;
    }
    Ok(if report.passed { Outcome::Ok } else { Outcome::ChecksFailed })
}
