//! `murmur` — command-line pipeline over elliptic-curve a_p data:
//! ingest a curve database into a binary cache, slice it by rank and
//! conductor, then average, fit, histogram, train, project, or score.

mod svg;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use murmuration::curve_arith::PrimeTable;
use murmuration::dataset::{
    self, isogeny_representatives, load_cache, parse_allcurves, parse_lmfdb_csv, save_cache,
    ApMatrix, CurveRecord, DatasetSlice,
};
use murmuration::fitkit::{self, FitConfig};
use murmuration::mlcore::{
    self, balanced_sample, evaluate, heuristic_preset, pca_fit, pca_transform, sigmoid_score,
    stratified_split, train_logistic, train_softmax, TrainConfig,
};
use murmuration::murmur::{self, average_by_index, average_by_prime, geometric_mean_series};

#[derive(Parser)]
#[command(name = "murmur", version, about = "Elliptic-curve a_p statistics pipeline")]
struct Cli {
    /// RNG seed recorded in every output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for batch point counting and the fit grid.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output format for plotable artifacts.
    #[arg(long, global = true, value_parser = ["csv", "svg"], default_value = "csv")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CacheArg {
    /// Path to an `.apmx` cache produced by `ingest`.
    #[arg(long)]
    cache: PathBuf,
}

#[derive(Args)]
struct SliceArgs {
    /// Rank(s) to select; repeat for several series.
    #[arg(long, required = true)]
    rank: Vec<u32>,
    /// Lower conductor bound (inclusive).
    #[arg(long)]
    min: u32,
    /// Upper conductor bound (inclusive).
    #[arg(long)]
    max: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a curve database, keep isogeny-class representatives, compute
    /// a_p vectors, and write the `.apmx` cache.
    Ingest {
        /// Input file(s): Cremona allcurves text, or LMFDB CSV with --lmfdb.
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
        /// Treat inputs as LMFDB CSV exports.
        #[arg(long)]
        lmfdb: bool,
        /// Number of primes M per curve.
        #[arg(long, default_value_t = 1000)]
        num_primes: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Show the members of a rank/conductor slice.
    Slice {
        #[command(flatten)]
        cache: CacheArg,
        #[command(flatten)]
        slice: SliceArgs,
        /// Optional CSV of member labels.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Murmuration averages f_r(n) (or g_r(p) with --by-prime).
    Average {
        #[command(flatten)]
        cache: CacheArg,
        #[command(flatten)]
        slice: SliceArgs,
        /// Index the series by the prime p instead of its position n.
        #[arg(long)]
        by_prime: bool,
        /// Average a_p^k instead of a_p.
        #[arg(long, default_value_t = 1)]
        power: u32,
        /// Geometric mean of |a_p| (zeros excluded) instead of arithmetic.
        #[arg(long)]
        geometric: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit y = A x^alpha sin(B x^beta) to g_r(p) per selected rank.
    Fit {
        #[command(flatten)]
        cache: CacheArg,
        #[command(flatten)]
        slice: SliceArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Histogram of Hasse-normalized a_p at one prime.
    Histogram {
        #[command(flatten)]
        cache: CacheArg,
        #[command(flatten)]
        slice: SliceArgs,
        /// The prime at which to sample a_p; must be among the cached primes.
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 40)]
        bins: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a logistic (or softmax) rank classifier on a balanced sample.
    Train {
        #[command(flatten)]
        cache: CacheArg,
        #[command(flatten)]
        slice: SliceArgs,
        /// Curves sampled per rank.
        #[arg(long, default_value_t = 2000)]
        per_class: usize,
        #[arg(long, default_value_t = 0.1)]
        learning_rate: f64,
        #[arg(long, default_value_t = 500)]
        epochs: usize,
        #[arg(long, default_value_t = 0.0)]
        l2: f64,
        /// Evaluation report CSV.
        #[arg(long)]
        out: PathBuf,
        /// Optional serialized model.
        #[arg(long)]
        model_out: Option<PathBuf>,
    },
    /// Project a balanced sample onto principal components.
    Pca {
        #[command(flatten)]
        cache: CacheArg,
        #[command(flatten)]
        slice: SliceArgs,
        #[arg(long, default_value_t = 2000)]
        per_class: usize,
        #[arg(long, default_value_t = 2)]
        components: usize,
        /// Scores output (label, rank, PC columns).
        #[arg(long)]
        out: PathBuf,
        /// Optional CSV of component weights c_n.
        #[arg(long)]
        components_out: Option<PathBuf>,
    },
    /// Score a 10-dimensional (a_2..a_29) vector with a published preset.
    Score {
        /// Preset name: cond-10k-20k or cond-1-10k.
        #[arg(long)]
        preset: String,
        /// Comma-separated a_p values, e.g. 1,1,1,1,-1,1,2,-4,-4,6.
        #[arg(long)]
        ap: String,
    },
    /// Summarize an `.apmx` cache.
    CacheInfo {
        #[command(flatten)]
        cache: CacheArg,
    },
}

enum CliError {
    Usage(String),
    Data(String),
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<dataset::ParseError> for CliError {
    fn from(e: dataset::ParseError) -> Self {
        CliError::Data(e.to_string())
    }
}
impl From<dataset::CacheError> for CliError {
    fn from(e: dataset::CacheError) -> Self {
        CliError::Data(e.to_string())
    }
}
impl From<dataset::SliceError> for CliError {
    fn from(e: dataset::SliceError) -> Self {
        CliError::Usage(e.to_string())
    }
}
impl From<murmur::MurmurError> for CliError {
    fn from(e: murmur::MurmurError) -> Self {
        match e {
            murmur::MurmurError::BadRange { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}
impl From<fitkit::FitError> for CliError {
    fn from(e: fitkit::FitError) -> Self {
        CliError::Numeric(e.to_string())
    }
}
impl From<mlcore::MlError> for CliError {
    fn from(e: mlcore::MlError) -> Self {
        match e {
            mlcore::MlError::Diverged { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}
impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are not failures.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let workers = cli.workers.unwrap_or_else(|| {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    });
    match run(&cli, workers) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

/// `#`-comment header embedding the full parameter set; identical inputs
/// reproduce identical files.
fn header(cli: &Cli, workers: usize, command: &str, params: &str) -> String {
    format!(
        "# murmur {command} {params} seed={} workers={workers} format={}\n",
        cli.seed, cli.format
    )
}

fn load(cache: &CacheArg) -> Result<ApMatrix, CliError> {
    Ok(load_cache(&cache.cache)?)
}

fn make_slice(m: &ApMatrix, rank: u32, min: u32, max: u32) -> Result<DatasetSlice, CliError> {
    let s = dataset::slice(&m.curves, rank, min, max)?;
    if s.is_empty() {
        return Err(CliError::Data(format!("empty slice r={rank}, [{min},{max}]")));
    }
    Ok(s)
}

fn rows_as_features(m: &ApMatrix, s: &DatasetSlice) -> Vec<Vec<f64>> {
    s.members
        .iter()
        .map(|label| {
            m.row_by_label(label)
                .expect("slice members come from the matrix")
                .iter()
                .map(|&v| v as f64)
                .collect()
        })
        .collect()
}

fn run(cli: &Cli, workers: usize) -> Result<(), CliError> {
    match &cli.command {
        Command::Ingest { input, lmfdb, num_primes, out } => {
            cmd_ingest(cli, workers, input, *lmfdb, *num_primes, out)
        }
        Command::Slice { cache, slice, out } => cmd_slice(cli, workers, cache, slice, out.as_deref()),
        Command::Average { cache, slice, by_prime, power, geometric, out } => {
            cmd_average(cli, workers, cache, slice, *by_prime, *power, *geometric, out)
        }
        Command::Fit { cache, slice, out } => cmd_fit(cli, workers, cache, slice, out),
        Command::Histogram { cache, slice, prime, bins, out } => {
            cmd_histogram(cli, workers, cache, slice, *prime, *bins, out)
        }
        Command::Train {
            cache,
            slice,
            per_class,
            learning_rate,
            epochs,
            l2,
            out,
            model_out,
        } => cmd_train(
            cli,
            workers,
            cache,
            slice,
            *per_class,
            *learning_rate,
            *epochs,
            *l2,
            out,
            model_out.as_deref(),
        ),
        Command::Pca { cache, slice, per_class, components, out, components_out } => cmd_pca(
            cli,
            workers,
            cache,
            slice,
            *per_class,
            *components,
            out,
            components_out.as_deref(),
        ),
        Command::Score { preset, ap } => cmd_score(preset, ap),
        Command::CacheInfo { cache } => cmd_cache_info(cache),
    }
}

fn cmd_ingest(
    _cli: &Cli,
    workers: usize,
    inputs: &[PathBuf],
    lmfdb: bool,
    num_primes: usize,
    out: &Path,
) -> Result<(), CliError> {
    if num_primes == 0 {
        return Err(CliError::Usage("--num-primes must be positive".into()));
    }
    let started = Instant::now();
    let mut records: Vec<CurveRecord> = Vec::new();
    for path in inputs {
        let file = std::fs::File::open(path)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        let reader = std::io::BufReader::new(file);
        let mut parsed = if lmfdb {
            parse_lmfdb_csv(reader)
        } else {
            parse_allcurves(reader)
        }
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        records.append(&mut parsed);
    }
    let total = records.len();
    let reps = isogeny_representatives(&records);
    let table = PrimeTable::new(num_primes);
    let matrix = ApMatrix::build(&reps, &table, workers);
    if let Err(e) = save_cache(&matrix, out) {
        let _ = std::fs::remove_file(out); // no partial caches
        return Err(e.into());
    }
    println!(
        "ingested {total} curves ({} isogeny classes), M={num_primes}, wrote {} in {:.2}s",
        reps.len(),
        out.display(),
        started.elapsed().as_secs_f64()
    );
    Ok(())
}

fn cmd_slice(
    cli: &Cli,
    workers: usize,
    cache: &CacheArg,
    args: &SliceArgs,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let m = load(cache)?;
    let mut csv = String::new();
    for &rank in &args.rank {
        let s = make_slice(&m, rank, args.min, args.max)?;
        println!("rank {rank}, [{},{}]: {} curves", args.min, args.max, s.len());
        let _ = writeln!(csv, "# rank={rank} N1={} N2={} count={}", args.min, args.max, s.len());
        csv.push_str("label\n");
        for label in &s.members {
            csv.push_str(label);
            csv.push('\n');
        }
    }
    if let Some(path) = out {
        let params = format!(
            "--cache {} --rank {:?} --min {} --max {}",
            cache.cache.display(),
            args.rank,
            args.min,
            args.max
        );
        std::fs::write(path, header(cli, workers, "slice", &params) + &csv)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_average(
    cli: &Cli,
    workers: usize,
    cache: &CacheArg,
    args: &SliceArgs,
    by_prime: bool,
    power: u32,
    geometric: bool,
    out: &Path,
) -> Result<(), CliError> {
    let m = load(cache)?;
    let table = PrimeTable::new(m.num_primes as usize);
    let mut body = String::new();
    let mut charts: Vec<svg::Series> = Vec::new();
    for &rank in &args.rank {
        let s = make_slice(&m, rank, args.min, args.max)?;
        let series = if geometric {
            geometric_mean_series(&m, &s)?
        } else if by_prime {
            average_by_prime(&m, &s, &table, power)?
        } else {
            average_by_index(&m, &s, power)?
        };
        body.push_str(&series.to_csv(&table));
        charts.push(svg::Series {
            name: format!("rank {rank}"),
            color: svg::rank_color(rank),
            points: series.points.iter().map(|&(x, y)| (x as f64, y)).collect(),
            polyline: false,
        });
    }
    let params = format!(
        "--cache {} --rank {:?} --min {} --max {} --by-prime {by_prime} --power {power} --geometric {geometric}",
        cache.cache.display(),
        args.rank,
        args.min,
        args.max
    );
    if cli.format == "svg" {
        let title = format!(
            "{} mean of a_p^{power}, conductor [{},{}]",
            if geometric { "geometric" } else { "arithmetic" },
            args.min,
            args.max
        );
        std::fs::write(out, svg::chart(&title, &charts))?;
    } else {
        std::fs::write(out, header(cli, workers, "average", &params) + &body)?;
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn cmd_fit(
    cli: &Cli,
    workers: usize,
    cache: &CacheArg,
    args: &SliceArgs,
    out: &Path,
) -> Result<(), CliError> {
    let m = load(cache)?;
    let table = PrimeTable::new(m.num_primes as usize);
    let cfg = FitConfig { seed: cli.seed, workers, ..Default::default() };
    let mut body = String::from("rank,N1,N2,A,alpha,B,beta,mse,iterations,converged\n");
    for &rank in &args.rank {
        let s = make_slice(&m, rank, args.min, args.max)?;
        let series = average_by_prime(&m, &s, &table, 1)?;
        let points: Vec<(f64, f64)> =
            series.points.iter().map(|&(p, y)| (p as f64, y)).collect();
        let fitted = fitkit::fit(&points, &cfg)?;
        body.push_str(&fitted.to_csv_row(rank, args.min, args.max));
        body.push('\n');
        println!(
            "rank {rank}: A={:.4} alpha={:.4} B={:.4} beta={:.4} mse={:.4}",
            fitted.a, fitted.alpha, fitted.b, fitted.beta, fitted.mse
        );
    }
    let params = format!(
        "--cache {} --rank {:?} --min {} --max {}",
        cache.cache.display(),
        args.rank,
        args.min,
        args.max
    );
    std::fs::write(out, header(cli, workers, "fit", &params) + &body)?;
    println!("wrote {}", out.display());
    Ok(())
}

fn cmd_histogram(
    cli: &Cli,
    workers: usize,
    cache: &CacheArg,
    args: &SliceArgs,
    prime: u64,
    bins: usize,
    out: &Path,
) -> Result<(), CliError> {
    if bins == 0 {
        return Err(CliError::Usage("--bins must be positive".into()));
    }
    let m = load(cache)?;
    let table = PrimeTable::new(m.num_primes as usize);
    let col = table
        .primes()
        .iter()
        .position(|&p| p == prime)
        .ok_or_else(|| {
            CliError::Usage(format!("prime {prime} is not among the {} cached primes", m.num_primes))
        })?;
    let mut body = String::new();
    let mut chart = String::new();
    for &rank in &args.rank {
        let s = make_slice(&m, rank, args.min, args.max)?;
        let values: Result<Vec<f64>, _> = s
            .members
            .iter()
            .map(|label| {
                let a = m.row_by_label(label).unwrap()[col] as i64;
                murmur::normalize(a, prime)
            })
            .collect();
        let h = murmur::histogram(&values?, bins, -1.0, 1.0)?;
        let _ = writeln!(body, "# rank={rank} N1={} N2={} p={prime}", args.min, args.max);
        body.push_str(&h.to_csv());
        if cli.format == "svg" {
            chart = svg::histogram_chart(
                &format!("normalized a_{prime}, rank {rank}, conductor [{},{}]", args.min, args.max),
                &h.bin_edges,
                &h.counts,
                svg::rank_color(rank),
            );
        }
    }
    let params = format!(
        "--cache {} --rank {:?} --min {} --max {} --prime {prime} --bins {bins}",
        cache.cache.display(),
        args.rank,
        args.min,
        args.max
    );
    if cli.format == "svg" {
        std::fs::write(out, chart)?;
    } else {
        std::fs::write(out, header(cli, workers, "histogram", &params) + &body)?;
    }
    println!("wrote {}", out.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_train(
    cli: &Cli,
    workers: usize,
    cache: &CacheArg,
    args: &SliceArgs,
    per_class: usize,
    learning_rate: f64,
    epochs: usize,
    l2: f64,
    out: &Path,
    model_out: Option<&Path>,
) -> Result<(), CliError> {
    if args.rank.len() < 2 {
        return Err(CliError::Usage("train needs at least two --rank values".into()));
    }
    let m = load(cache)?;
    let mut x: Vec<Vec<f64>> = Vec::new();
    let mut y: Vec<u32> = Vec::new();
    for &rank in &args.rank {
        let s = make_slice(&m, rank, args.min, args.max)?;
        for row in rows_as_features(&m, &s) {
            x.push(row);
            y.push(rank);
        }
    }
    // Balance classes, then stratified 80/20 split; everything seeded.
    let selected = balanced_sample(&y, per_class, cli.seed);
    let xs: Vec<Vec<f64>> = selected.iter().map(|&i| x[i].clone()).collect();
    let ys: Vec<u32> = selected.iter().map(|&i| y[i]).collect();
    let (train_idx, test_idx) = stratified_split(&ys, 0.2, cli.seed.wrapping_add(1));
    let take = |idx: &[usize]| -> (Vec<Vec<f64>>, Vec<u32>) {
        (
            idx.iter().map(|&i| xs[i].clone()).collect(),
            idx.iter().map(|&i| ys[i]).collect(),
        )
    };
    let (x_train, y_train) = take(&train_idx);
    let (x_test, y_test) = take(&test_idx);

    let cfg = TrainConfig {
        learning_rate,
        epochs,
        l2,
        seed: cli.seed,
        standardize: true,
        ..Default::default()
    };
    let model = if args.rank.len() == 2 {
        train_logistic(&x_train, &y_train, &cfg)?
    } else {
        train_softmax(&x_train, &y_train, &cfg)?
    };
    let report = evaluate(&model, &x_test, &y_test)?;
    println!(
        "test precision {:.4}, accuracy {:.4}, mcc {:.4} on {} curves",
        report.precision,
        report.accuracy,
        report.mcc,
        report.total()
    );
    let params = format!(
        "--cache {} --rank {:?} --min {} --max {} --per-class {per_class} --learning-rate {learning_rate} --epochs {epochs} --l2 {l2} split=80/20",
        cache.cache.display(),
        args.rank,
        args.min,
        args.max
    );
    std::fs::write(out, header(cli, workers, "train", &params) + &report.to_csv())?;
    if let Some(path) = model_out {
        std::fs::write(path, model.to_text())?;
    }
    println!("wrote {}", out.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_pca(
    cli: &Cli,
    workers: usize,
    cache: &CacheArg,
    args: &SliceArgs,
    per_class: usize,
    components: usize,
    out: &Path,
    components_out: Option<&Path>,
) -> Result<(), CliError> {
    let m = load(cache)?;
    let mut x: Vec<Vec<f64>> = Vec::new();
    let mut y: Vec<u32> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    for &rank in &args.rank {
        let s = make_slice(&m, rank, args.min, args.max)?;
        for (row, label) in rows_as_features(&m, &s).into_iter().zip(&s.members) {
            x.push(row);
            y.push(rank);
            labels.push(label.clone());
        }
    }
    let selected = balanced_sample(&y, per_class, cli.seed);
    let xs: Vec<Vec<f64>> = selected.iter().map(|&i| x[i].clone()).collect();
    let model = pca_fit(&xs, components)?;
    let scores = pca_transform(&model, &xs)?;

    let params = format!(
        "--cache {} --rank {:?} --min {} --max {} --per-class {per_class} --components {components}",
        cache.cache.display(),
        args.rank,
        args.min,
        args.max
    );
    if cli.format == "svg" && components >= 2 {
        let mut series: Vec<svg::Series> = Vec::new();
        for &rank in &args.rank {
            let points: Vec<(f64, f64)> = selected
                .iter()
                .zip(&scores)
                .filter(|(&i, _)| y[i] == rank)
                .map(|(_, s)| (s[0], s[1]))
                .collect();
            series.push(svg::Series {
                name: format!("rank {rank}"),
                color: svg::rank_color(rank),
                points,
                polyline: false,
            });
        }
        let title = format!("PC1 vs PC2, conductor [{},{}]", args.min, args.max);
        std::fs::write(out, svg::chart(&title, &series))?;
    } else {
        let mut body = String::from("label,rank");
        for c in 1..=components {
            let _ = write!(body, ",pc{c}");
        }
        body.push('\n');
        for (&i, score) in selected.iter().zip(&scores) {
            let _ = write!(body, "{},{}", labels[i], y[i]);
            for v in score {
                let _ = write!(body, ",{v}");
            }
            body.push('\n');
        }
        std::fs::write(out, header(cli, workers, "pca", &params) + &body)?;
    }
    if let Some(path) = components_out {
        let mut body = String::from("n,component,weight,explained_variance\n");
        for (c, (row, var)) in model
            .components
            .iter()
            .zip(&model.explained_variance)
            .enumerate()
        {
            for (j, w) in row.iter().enumerate() {
                let _ = writeln!(body, "{},{},{w},{var}", j + 1, c + 1);
            }
        }
        std::fs::write(path, header(cli, workers, "pca", &params) + &body)?;
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn cmd_score(preset: &str, ap: &str) -> Result<(), CliError> {
    let model = heuristic_preset(preset).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown preset {preset:?}; available: cond-10k-20k, cond-1-10k"
        ))
    })?;
    let values: Result<Vec<f64>, _> = ap.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let values = values.map_err(|_| CliError::Usage(format!("bad --ap list {ap:?}")))?;
    let score = sigmoid_score(&values, &model)?;
    let label = if score > 0.5 { "rank>=2" } else { "rank<2" };
    println!("{score:.5} {label}");
    Ok(())
}

fn cmd_cache_info(cache: &CacheArg) -> Result<(), CliError> {
    let m = load(cache)?;
    let mut ranks: Vec<(u32, usize)> = Vec::new();
    let mut min_cond = u32::MAX;
    let mut max_cond = 0u32;
    for c in &m.curves {
        min_cond = min_cond.min(c.conductor);
        max_cond = max_cond.max(c.conductor);
        match ranks.iter_mut().find(|(r, _)| *r == c.rank) {
            Some((_, n)) => *n += 1,
            None => ranks.push((c.rank, 1)),
        }
    }
    ranks.sort_unstable();
    println!("curves: {}", m.num_curves());
    println!("primes per curve: {}", m.num_primes);
    if m.num_curves() > 0 {
        println!("conductor range: [{min_cond},{max_cond}]");
        for (r, n) in ranks {
            println!("rank {r}: {n}");
        }
    }
    Ok(())
}
