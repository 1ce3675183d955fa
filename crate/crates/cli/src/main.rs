use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qboost::analysis::{count_regions, region_upper_bound, required_bits, ArrangementSpec};
use qboost::classifier::StrongClassifier;
use qboost::data::{generate, load_csv, save_csv, SyntheticConfig};
use qboost::dataset::Dataset;
use qboost::objective::{build_qubo, ResponseTable};
use qboost::pipeline::{
    benchmark_sweep, cross_validate_lambda, train, write_bench_csv, AnnealSettings, BenchConfig,
    Method, SolverSettings, SplitSpec, TabuSettings, TrainSpec,
};
use qboost::stumps::{build_dictionary, ScaleMode};

#[derive(Parser, Serialize)]
#[command(name = "qboost", version, about = "Sparse boosting of decision stumps by binary optimization")]
struct Cli {
    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Where to write the provenance record. Defaults to
    /// `<output>.provenance.json`, or stderr for commands without an output file.
    #[arg(long, global = true)]
    provenance: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Draw a synthetic two-Gaussian data set.
    GenData(GenDataArgs),
    /// Train a classifier: λ by cross-validation, solve, fit T, test.
    Train(TrainArgs),
    /// Evaluate a saved model on a data set.
    Eval(EvalArgs),
    /// Cross-validate the λ grid on a data set.
    Cv(CvArgs),
    /// Synthetic benchmark sweep over overlap, f, method and seed.
    Bench(BenchArgs),
    /// Bit precision needed for S samples and N weak classifiers.
    AnalyzeBits(AnalyzeBitsArgs),
    /// Count the regions of a diagonal hyperplane arrangement.
    AnalyzeRegions(AnalyzeRegionsArgs),
    /// Write the QUBO for a data set in sparse text form.
    ExportQubo(ExportQuboArgs),
}

#[derive(Args, Serialize)]
struct GenDataArgs {
    #[arg(long, default_value_t = 30)]
    dimension: usize,
    #[arg(long, default_value_t = 0.7)]
    overlap: f64,
    #[arg(long, default_value_t = 1.0)]
    variance_pos: f64,
    #[arg(long, default_value_t = 2.0)]
    variance_neg: f64,
    #[arg(long, default_value_t = 1000)]
    num_samples: usize,
    #[arg(long, default_value_t = 6.0)]
    separation_scale: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV; the generator configuration goes to `<out>.config.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Serialize, Clone)]
struct DataArgs {
    /// CSV with a header, feature columns and a final -1/1 label column.
    #[arg(long)]
    data: PathBuf,
    /// Keep rows as read instead of scaling them to unit 2-norm.
    #[arg(long)]
    no_normalize: bool,
}

#[derive(Args, Serialize, Clone)]
struct SolverArgs {
    #[arg(long, default_value_t = 32)]
    tabu_starts: usize,
    /// Tabu tenure; defaults to max(8, V/10).
    #[arg(long)]
    tabu_tenure: Option<usize>,
    #[arg(long, default_value_t = 500)]
    tabu_iters_per_var: usize,
    #[arg(long)]
    no_aspiration: bool,
    /// Initial annealing temperature; defaults to the training-set size.
    #[arg(long)]
    anneal_t_initial: Option<f64>,
    #[arg(long, default_value_t = 0.97)]
    anneal_cooling: f64,
    /// Proposals per temperature level, in units of the variable count.
    #[arg(long, default_value_t = 20.0)]
    anneal_sweeps: f64,
    #[arg(long, default_value_t = 1e-3)]
    anneal_t_final: f64,
    /// Auxiliary-bit penalty for bits > 1; defaults to 10·(λ + max|Q_ii|).
    #[arg(long)]
    kappa: Option<f64>,
}

impl SolverArgs {
    fn settings(&self) -> SolverSettings {
        SolverSettings {
            tabu: TabuSettings {
                num_starts: self.tabu_starts,
                tenure: self.tabu_tenure,
                iterations_per_var: self.tabu_iters_per_var,
                aspiration: !self.no_aspiration,
            },
            anneal: AnnealSettings {
                t_initial: self.anneal_t_initial,
                cooling_factor: self.anneal_cooling,
                sweeps_per_temperature: self.anneal_sweeps,
                t_final: self.anneal_t_final,
            },
            kappa: self.kappa,
        }
    }
}

#[derive(Args, Serialize, Clone)]
struct ModelArgs {
    /// qp, zero_one or adaboost.
    #[arg(long, value_parser = parse_method)]
    method: Method,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    order: u8,
    #[arg(long, default_value_t = 1)]
    bits: u32,
    /// Comma-separated λ values; defaults to multiples of the loss scale.
    #[arg(long, value_delimiter = ',')]
    lambda_grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 30)]
    cv_folds: usize,
    /// Upper limit on AdaBoost rounds.
    #[arg(long, default_value_t = 100)]
    max_rounds: usize,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    train_frac: f64,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    validation_frac: f64,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    test_frac: f64,
}

impl ModelArgs {
    fn spec(&self) -> TrainSpec {
        TrainSpec {
            method: self.method,
            order: self.order,
            bit_depth: self.bits,
            lambda_grid: self.lambda_grid.clone(),
            cv_folds: self.cv_folds,
            max_rounds: self.max_rounds,
            solver: self.solver.settings(),
            seed: self.seed,
            split: SplitSpec {
                train: self.train_frac,
                validation: self.validation_frac,
                test: self.test_frac,
            },
        }
    }
}

#[derive(Args, Serialize)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    model: ModelArgs,
    /// Model JSON output.
    #[arg(long)]
    out: PathBuf,
    /// Evaluation report output; defaults to `<out>.report.json`.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    data: DataArgs,
    /// Optional JSON output with the error count and rate.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct CvArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    model: ModelArgs,
    /// CV report JSON output.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Serialize)]
struct BenchArgs {
    #[arg(long, default_value_t = 30)]
    dimension: usize,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    order: u8,
    #[arg(long, default_value_t = 1)]
    bits: u32,
    #[arg(long, value_delimiter = ',', default_value = "0.7,0.8,0.9,1.0")]
    overlaps: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "qp,zero_one,adaboost", value_parser = parse_method)]
    methods: Vec<Method>,
    #[arg(long, value_delimiter = ',', default_value = "1,8")]
    f_values: Vec<f64>,
    /// First seed; the sweep uses seeds `seed .. seed + num_seeds`.
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    num_seeds: u64,
    #[arg(long, default_value_t = 2000)]
    test_size: usize,
    #[arg(long, default_value_t = 1.0)]
    variance_pos: f64,
    #[arg(long, default_value_t = 2.0)]
    variance_neg: f64,
    #[arg(long, default_value_t = 6.0)]
    separation_scale: f64,
    #[arg(long, default_value_t = 30)]
    cv_folds: usize,
    #[arg(long, value_delimiter = ',')]
    lambda_grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 100)]
    max_rounds: usize,
    #[command(flatten)]
    solver: SolverArgs,
    /// Results CSV output.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Serialize)]
struct AnalyzeBitsArgs {
    #[arg(long)]
    samples: u64,
    #[arg(long)]
    classifiers: u64,
}

#[derive(Args, Serialize)]
struct AnalyzeRegionsArgs {
    #[arg(long)]
    dim: usize,
    /// Use all 2^(N-1) diagonal hyperplanes.
    #[arg(long, conflicts_with = "hyperplanes")]
    all_hyperplanes: bool,
    /// CSV of hyperplane coefficient rows (-1/1, no header).
    #[arg(long)]
    hyperplanes: Option<PathBuf>,
    /// Also write the table `dim,hyperplanes,regions,bound` as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ExportQuboArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    order: u8,
    #[arg(long, default_value_t = 1)]
    bits: u32,
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

fn parse_method(s: &str) -> Result<Method, String> {
    Method::parse(s).ok_or_else(|| format!("unknown method `{s}` (expected qp, zero_one or adaboost)"))
}

enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<qboost::Error> for Failure {
    fn from(e: qboost::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

fn require_file(path: &Path) -> Result<(), Failure> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("input file not found: {}", path.display())))
    }
}

fn load(args: &DataArgs) -> Result<Dataset, Failure> {
    require_file(&args.data)?;
    Ok(load_csv(&args.data, !args.no_normalize)?)
}

#[derive(Serialize)]
struct Provenance<'a> {
    tool: &'static str,
    version: &'static str,
    #[serde(flatten)]
    invocation: &'a Cli,
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_provenance(cli: &Cli, output: Option<&Path>) -> anyhow::Result<()> {
    let record = Provenance {
        tool: "qboost",
        version: env!("CARGO_PKG_VERSION"),
        invocation: cli,
    };
    match (&cli.provenance, output) {
        (Some(p), _) => write_json(p, &record),
        (None, Some(out)) => write_json(&with_suffix(out, ".provenance.json"), &record),
        (None, None) => {
            eprintln!("{}", serde_json::to_string(&record)?);
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let output: Option<PathBuf> = match &cli.command {
        Command::GenData(a) => {
            let config = SyntheticConfig {
                dimension: a.dimension,
                overlap: a.overlap,
                variance_pos: a.variance_pos,
                variance_neg: a.variance_neg,
                num_samples: a.num_samples,
                seed: a.seed,
                separation_scale: a.separation_scale,
            };
            config.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let data = generate(&config)?;
            save_csv(&data, &a.out)?;
            config.write_sidecar(&with_suffix(&a.out, ".config.json"))?;
            let (neg, pos) = data.class_counts();
            println!(
                "wrote {} samples ({pos} positive, {neg} negative) to {}",
                data.len(),
                a.out.display()
            );
            Some(a.out.clone())
        }
        Command::Train(a) => {
            let data = load(&a.data)?;
            let spec = a.model.spec();
            spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let outcome = train(&data, &spec)?;
            outcome.classifier.save(&a.out)?;
            let report_path = a.report.clone().unwrap_or_else(|| with_suffix(&a.out, ".report.json"));
            write_json(&report_path, &outcome.report)?;
            let r = &outcome.report;
            println!("method: {}", r.method);
            if let Some(l) = r.lambda {
                println!("lambda: {l}");
            }
            println!("threshold T: {}", r.threshold);
            println!(
                "test error: {:.4} ({}/{})",
                r.test_error_rate, r.test_errors, r.test_size
            );
            println!("active weak classifiers: {} of {}", r.num_active_weak_classifiers, r.dictionary_size);
            println!("runtime: {:.2?}", outcome.runtime);
            Some(a.out.clone())
        }
        Command::Eval(a) => {
            require_file(&a.model)?;
            let model = StrongClassifier::load(&a.model)?;
            let data = load(&a.data)?;
            let errors = model.count_errors(&data)?;
            let summary = EvalSummary {
                errors,
                total: data.len(),
                error_rate: errors as f64 / data.len() as f64,
                active_weak_classifiers: model.active_count(),
            };
            println!("error rate: {:.4} ({errors}/{})", summary.error_rate, summary.total);
            println!("active weak classifiers: {}", summary.active_weak_classifiers);
            if let Some(out) = &a.out {
                write_json(out, &summary)?;
            }
            a.out.clone()
        }
        Command::Cv(a) => {
            let data = load(&a.data)?;
            let spec = a.model.spec();
            spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            if spec.method == Method::Adaboost {
                return Err(Failure::Usage("cv needs --method qp or zero_one".into()));
            }
            let folds = spec.cv_folds.min(data.len());
            let target = data.len() - data.len().div_ceil(folds);
            let report = cross_validate_lambda(&data, &spec, target)?;
            for s in &report.scores {
                println!(
                    "lambda {:<12} error {:.4}  active {:.2}{}",
                    s.lambda,
                    s.mean_error_rate,
                    s.mean_active,
                    if s.admissible { "" } else { "  (over N/2)" }
                );
            }
            println!("chosen lambda: {}", report.chosen_lambda);
            write_json(&a.out, &report)?;
            Some(a.out.clone())
        }
        Command::Bench(a) => {
            let config = BenchConfig {
                dimension: a.dimension,
                order: a.order,
                bit_depth: a.bits,
                overlaps: a.overlaps.clone(),
                methods: a.methods.clone(),
                f_values: a.f_values.clone(),
                seeds: (a.seed..a.seed + a.num_seeds).collect(),
                test_size: a.test_size,
                variance_pos: a.variance_pos,
                variance_neg: a.variance_neg,
                separation_scale: a.separation_scale,
                cv_folds: a.cv_folds,
                lambda_grid: a.lambda_grid.clone(),
                max_rounds: a.max_rounds,
                solver: a.solver.settings(),
            };
            config.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let rows = benchmark_sweep(&config)?;
            let file = fs::File::create(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
            write_bench_csv(&rows, std::io::BufWriter::new(file))?;
            println!("wrote {} rows to {}", rows.len(), a.out.display());
            Some(a.out.clone())
        }
        Command::AnalyzeBits(a) => {
            if a.samples == 0 || a.classifiers == 0 {
                return Err(Failure::Usage("--samples and --classifiers must be positive".into()));
            }
            println!("{}", required_bits(a.samples, a.classifiers));
            None
        }
        Command::AnalyzeRegions(a) => {
            let spec = if a.all_hyperplanes {
                ArrangementSpec::all_diagonal(a.dim)
            } else if let Some(path) = &a.hyperplanes {
                require_file(path)?;
                read_hyperplanes(path, a.dim)
            } else {
                return Err(Failure::Usage("give --all-hyperplanes or --hyperplanes FILE".into()));
            }
            .map_err(|e| Failure::Usage(e.to_string()))?;
            let regions = count_regions(&spec)?;
            println!("{regions}");
            if let Some(out) = &a.out {
                let bound = region_upper_bound(spec.dim() as u64, spec.len() as u64);
                let text = format!("dim,hyperplanes,regions,bound\n{},{},{regions},{bound}\n", spec.dim(), spec.len());
                fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
            }
            a.out.clone()
        }
        Command::ExportQubo(a) => {
            let data = load(&a.data)?;
            let dict = build_dictionary(&data, a.order, ScaleMode::OneOverN)?;
            let table = ResponseTable::new(&dict, &data)?;
            let problem = build_qubo(&table, a.lambda, a.bits, a.kappa)?;
            let file = fs::File::create(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
            problem.write_sparse(std::io::BufWriter::new(file))?;
            println!("wrote {} variables to {}", problem.num_vars(), a.out.display());
            Some(a.out.clone())
        }
    };
    write_provenance(cli, output.as_deref())?;
    Ok(())
}

#[derive(Serialize)]
struct EvalSummary {
    errors: usize,
    total: usize,
    error_rate: f64,
    active_weak_classifiers: usize,
}

fn read_hyperplanes(path: &Path, dim: usize) -> qboost::Result<ArrangementSpec> {
    let text = fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| f.trim().parse::<i8>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| qboost::Error::Parse {
                line: k + 1,
                message: e.to_string(),
            })?;
        rows.push(row);
    }
    ArrangementSpec::new(dim, rows)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help and version exit 0, usage errors 2
            e.exit();
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
