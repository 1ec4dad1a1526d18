//! `abba`: symbolize, reconstruct and benchmark time series from the shell.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags or parameter
//! values), 2 for data errors (unreadable or malformed input files).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use abba::baselines::{onedsax_symbolize, sax_symbolize, OneDSaxConfig, SaxConfig};
use abba::digitization::{parse_scl, DEFAULT_MAX_K, DEFAULT_S};
use abba::harness::{
    bundled_mini_corpus, ingest, profile_csv, run_comparison, write_csv, ErrorMatrix, ExperimentConfig, InputFormat,
    LabeledSeries,
};
use abba::preprocessing::{denormalize, normalize, normalize_with};
use abba::tarzan::{abba_symbol_pair, tarzan_scores, AnomalyScoreSeries};
use abba::{
    compress, digitize, reconstruct, tolerance_for_pieces, CompressionConfig, DigitizationConfig, DistanceKind,
    ModelSidecar, SymbolicSeries,
};
use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "abba",
    version,
    about = "Adaptive Brownian bridge-based symbolic aggregation of time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compress and digitize one series; writes the symbol string and a JSON model sidecar.
    Symbolize(SymbolizeArgs),
    /// Rebuild a series from a model sidecar (optionally with a different symbol string).
    Reconstruct(ReconstructArgs),
    /// Compare ABBA, SAX and 1d-SAX reconstruction errors over a corpus; writes the error matrix CSV.
    Compare(CompareArgs),
    /// Turn an error matrix into performance-profile curves (CSV).
    Profile(ProfileArgs),
    /// Score a test series against a reference with TARZAN; writes per-sample scores (CSV).
    Tarzan(TarzanArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Input file format.
    #[arg(long, value_parser = parse_format, default_value = "csv")]
    format: InputFormat,
    /// Which series of a multi-series (UCR) file to use, counting from 0.
    #[arg(long, default_value_t = 0)]
    row: usize,
}

#[derive(Args, Debug)]
struct AbbaArgs {
    /// Compression tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Length weight in the clustering: 0 (increments only), positive, or "inf" (lengths only).
    #[arg(long, value_parser = parse_scl, default_value = "0")]
    scl: f64,
    /// Standard-deviation multiplier in the digitization tolerance.
    #[arg(long, default_value_t = DEFAULT_S)]
    s: f64,
    /// Upper bound on the number of symbols (default 100; `tarzan` uses --k).
    #[arg(long = "max-k")]
    max_k: Option<usize>,
    /// Upper bound on the length of a compressed piece.
    #[arg(long = "max-len")]
    max_len: Option<usize>,
    /// Seed of the 2-D clustering initialization.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SymbolizeArgs {
    input: PathBuf,
    #[command(flatten)]
    input_args: InputArgs,
    #[command(flatten)]
    abba: AbbaArgs,
    /// Skip z-normalization.
    #[arg(long)]
    raw: bool,
    /// Where to write the JSON model sidecar (default: next to the symbols on stdout).
    #[arg(long, short = 'm')]
    model: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReconstructArgs {
    /// JSON model sidecar written by `symbolize`.
    model: PathBuf,
    /// Symbol string to decode instead of the one stored in the sidecar.
    #[arg(long)]
    symbols: Option<String>,
    /// Keep the normalized scale instead of restoring the original units.
    #[arg(long)]
    normalized: bool,
    /// Output CSV path (default: stdout).
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Corpus file; omit and pass --mini to use the bundled 20-series corpus.
    #[arg(required_unless_present = "mini", conflicts_with = "mini")]
    input: Option<PathBuf>,
    /// Use the bundled synthetic mini-corpus.
    #[arg(long)]
    mini: bool,
    /// Input file format.
    #[arg(long, value_parser = parse_format, default_value = "ucr")]
    format: InputFormat,
    /// Alphabet size shared by all three methods.
    #[arg(long, default_value_t = 9)]
    k: usize,
    /// ABBA length weight: 0, positive, or "inf".
    #[arg(long, value_parser = parse_scl, default_value = "0")]
    scl: f64,
    #[arg(long, default_value_t = DEFAULT_S)]
    s: f64,
    #[arg(long = "max-len")]
    max_len: Option<usize>,
    /// Distance measures to record (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = DistanceKind::ALL.to_vec())]
    distance: Vec<DistanceKind>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path (default: stdout).
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// Error matrix CSV written by `compare`.
    matrix: PathBuf,
    /// Distance whose errors are profiled (default: the first in the matrix).
    #[arg(long)]
    distance: Option<DistanceKind>,
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Abba,
    Sax,
    #[value(name = "1dsax")]
    OneDSax,
}

#[derive(Args, Debug)]
struct TarzanArgs {
    reference: PathBuf,
    test: PathBuf,
    #[command(flatten)]
    input_args: InputArgs,
    #[arg(long, value_enum, default_value_t = Method::Abba)]
    method: Method,
    /// Substring (window) length.
    #[arg(long, default_value_t = 3)]
    window: usize,
    /// Flag samples whose absolute score exceeds this value.
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    /// SAX/1d-SAX segment length; ABBA tunes its tolerance to the same string length when --tol is absent.
    #[arg(long, default_value_t = 5)]
    segment: usize,
    /// Alphabet size for SAX and 1d-SAX (1d-SAX needs a square number); also caps the ABBA alphabet unless --max-k is given.
    #[arg(long, default_value_t = 9)]
    k: usize,
    #[command(flatten)]
    abba: AbbaArgs,
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

fn parse_format(s: &str) -> Result<InputFormat, String> {
    s.parse().map_err(|e: abba::AbbaError| e.to_string())
}

/// Usage errors exit with 1, data errors with 2.
enum Failure {
    Usage(anyhow::Error),
    Data(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

impl From<abba::AbbaError> for Failure {
    fn from(e: abba::AbbaError) -> Self {
        Failure::Data(e.into())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(anyhow!(msg.into()))
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Symbolize(a) => symbolize(a),
        Command::Reconstruct(a) => reconstruct_cmd(a),
        Command::Compare(a) => compare(a),
        Command::Profile(a) => profile(a),
        Command::Tarzan(a) => tarzan(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(output: Option<&Path>, text: &str) -> Outcome {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .context("writing to stdout")?,
    }
    Ok(())
}

fn load_series(path: &Path, input: &InputArgs) -> Result<LabeledSeries, Failure> {
    let mut all = ingest(path, input.format).with_context(|| format!("reading {}", path.display()))?;
    if input.row >= all.len() {
        return Err(Failure::Data(anyhow!(
            "{} holds {} series, no row {}",
            path.display(),
            all.len(),
            input.row
        )));
    }
    Ok(all.swap_remove(input.row))
}

impl AbbaArgs {
    fn compression(&self, tol: f64) -> Result<CompressionConfig, Failure> {
        let mut cfg = CompressionConfig::new(tol).map_err(|e| usage(e.to_string()))?;
        if let Some(m) = self.max_len {
            cfg = cfg.with_max_len(m).map_err(|e| usage(e.to_string()))?;
        }
        Ok(cfg)
    }

    fn digitization(&self, default_max_k: usize) -> Result<DigitizationConfig, Failure> {
        let cfg = DigitizationConfig {
            scl: self.scl,
            s: self.s,
            min_k: 1,
            max_k: self.max_k.unwrap_or(default_max_k),
            seed: self.seed,
        };
        cfg.validate().map_err(|e| usage(e.to_string()))?;
        Ok(cfg)
    }
}

fn symbolize(args: SymbolizeArgs) -> Outcome {
    let tol = args.abba.tol.ok_or_else(|| usage("symbolize needs --tol"))?;
    let compression = args.abba.compression(tol)?;
    let digitization = args.abba.digitization(DEFAULT_MAX_K)?;
    let item = load_series(&args.input, &args.input_args)?;

    let (series, stats) = if args.raw {
        (item.series, None)
    } else {
        let n = normalize(&item.series);
        (n.series, Some((n.mean, n.std)))
    };
    let pieces = compress(&series, &compression);
    let symbolic = digitize(&pieces, &digitization, tol)?;
    let mut sidecar = symbolic.to_sidecar();
    if let Some((mean, std)) = stats {
        sidecar.mean = Some(mean);
        sidecar.std = Some(std);
    }
    match &args.model {
        Some(path) => {
            sidecar
                .write(path)
                .with_context(|| format!("writing {}", path.display()))?;
            emit(None, &format!("{}\n", symbolic.symbols))
        }
        None => emit(None, &format!("{}\n{}\n", symbolic.symbols, sidecar.to_json()?)),
    }
}

fn reconstruct_cmd(args: ReconstructArgs) -> Outcome {
    let text = fs::read_to_string(&args.model).with_context(|| format!("reading {}", args.model.display()))?;
    // Accept the combined `symbolize` stdout (symbols line, then JSON) too.
    let json = text.find('{').map(|i| &text[i..]).unwrap_or(&text);
    let mut sidecar = ModelSidecar::from_json(json).with_context(|| format!("parsing {}", args.model.display()))?;
    if let Some(symbols) = args.symbols {
        sidecar.symbols = symbols;
    }
    let symbolic = SymbolicSeries::from_sidecar(&sidecar)?;
    let rec = reconstruct(&symbolic)?;
    let values = match (args.normalized, sidecar.mean, sidecar.std) {
        (false, Some(mean), Some(std)) => denormalize(rec.values(), mean, std),
        _ => rec.into_values(),
    };
    emit(args.output.as_deref(), &write_csv(&values))
}

fn compare(args: CompareArgs) -> Outcome {
    if args.k < 4 {
        return Err(usage("--k must be at least 4 (1d-SAX needs 2 mean and 2 slope levels)"));
    }
    if args.distance.is_empty() {
        return Err(usage("--distance needs at least one measure"));
    }
    DigitizationConfig {
        scl: args.scl,
        s: args.s,
        min_k: 1,
        max_k: args.k,
        seed: args.seed,
    }
    .validate()
    .map_err(|e| usage(e.to_string()))?;
    if args.max_len == Some(0) {
        return Err(usage("--max-len must be at least 1"));
    }
    let corpus = match &args.input {
        Some(path) => ingest(path, args.format).with_context(|| format!("reading {}", path.display()))?,
        None => bundled_mini_corpus(),
    };
    let config = ExperimentConfig {
        k: args.k,
        scl: args.scl,
        s: args.s,
        max_len: args.max_len,
        distances: args.distance,
        seed: args.seed,
        ..ExperimentConfig::default()
    };
    let matrix = run_comparison(&corpus, &config)?;
    for (id, reason) in &matrix.excluded {
        eprintln!("excluded {id}: {reason}");
    }
    for (id, message) in &matrix.failures {
        eprintln!("failed {id}: {message}");
    }
    eprintln!(
        "{} included, {} excluded, {} failed",
        matrix.rows.len(),
        matrix.excluded.len(),
        matrix.failures.len()
    );
    emit(args.output.as_deref(), &matrix.to_csv()?)
}

fn profile(args: ProfileArgs) -> Outcome {
    let text = fs::read_to_string(&args.matrix).with_context(|| format!("reading {}", args.matrix.display()))?;
    let matrix = ErrorMatrix::from_csv(&text).with_context(|| format!("parsing {}", args.matrix.display()))?;
    let kind = match args.distance {
        Some(k) => k,
        None => *matrix
            .distances
            .first()
            .ok_or_else(|| Failure::Data(anyhow!("{} holds no rows", args.matrix.display())))?,
    };
    let curves = matrix.profile(kind)?;
    emit(args.output.as_deref(), &profile_csv(&curves))
}

fn tarzan(args: TarzanArgs) -> Outcome {
    if args.window == 0 {
        return Err(usage("--window must be at least 1"));
    }
    if args.segment == 0 {
        return Err(usage("--segment must be at least 1"));
    }
    if args.threshold.is_nan() || args.threshold < 0.0 {
        return Err(usage("--threshold must be non-negative"));
    }
    let sax = SaxConfig::new(args.segment, args.k).map_err(|e| usage(e.to_string()))?;
    let root = (args.k as f64).sqrt().round() as usize;
    if args.method == Method::OneDSax && root * root != args.k {
        return Err(usage("1d-SAX needs a square --k (mean and slope levels)"));
    }
    let digitization = args.abba.digitization(args.k)?;
    if let Some(tol) = args.abba.tol {
        args.abba.compression(tol)?;
    }

    let reference = load_series(&args.reference, &args.input_args)?.series;
    let test = load_series(&args.test, &args.input_args)?.series;
    let stats = normalize(&reference);
    let r = stats.series.clone();
    let x = normalize_with(&test, stats.mean, stats.std);
    if x.len() < args.segment || r.len() < args.segment {
        return Err(Failure::Data(anyhow!(
            "series are shorter than --segment {}",
            args.segment
        )));
    }
    let covered = x.len() / args.segment * args.segment;

    let scores: AnomalyScoreSeries = match args.method {
        Method::Sax => {
            let rs = sax_symbolize(r.values(), &sax)?;
            let xs = sax_symbolize(&x.values()[..covered], &sax)?;
            tarzan_scores(&rs, &xs, args.window, &vec![args.segment; xs.chars().count()])?
        }
        Method::OneDSax => {
            let cfg = OneDSaxConfig::new(args.segment, root, root).map_err(|e| usage(e.to_string()))?;
            let rs = onedsax_symbolize(r.values(), &cfg)?;
            let xs = onedsax_symbolize(&x.values()[..covered], &cfg)?;
            tarzan_scores(&rs, &xs, args.window, &vec![args.segment; xs.chars().count()])?
        }
        Method::Abba => {
            let tol = match args.abba.tol {
                Some(t) => t,
                None => tolerance_for_pieces(&x, covered / args.segment, 10.0, args.abba.max_len)?,
            };
            let pair = abba_symbol_pair(&r, &x, &args.abba.compression(tol)?, &digitization)?;
            eprintln!(
                "abba: tol={tol}, k={}, {} reference and {} test symbols",
                pair.joint.model.k,
                pair.reference.chars().count(),
                pair.test.chars().count()
            );
            tarzan_scores(&pair.reference, &pair.test, args.window, &pair.test_spans)?
        }
    };

    for (start, end) in scores.exceedances(args.threshold) {
        eprintln!("exceedance {start} {end}");
    }
    let mut out = String::from("index,score\n");
    for (i, s) in scores.sample_scores.iter().enumerate() {
        out.push_str(&format!("{i},{s}\n"));
    }
    emit(args.output.as_deref(), &out)
}
