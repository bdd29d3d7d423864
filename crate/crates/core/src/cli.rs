//! The `edwsax` command-line tool.
//!
//! Series files hold one series per line, values separated by whitespace or
//! commas. Word files hold one rendered word per line.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};

use crate::bench::{
    discover_datasets, emit_report, parse_ucr, run_reconstruction_experiment, run_tlb_experiment, ConfigEcho, Dataset,
    Delimiter, ExperimentConfig, ExperimentReport, Method, Normalization, ReportFormat, SkippedDataset,
};
use crate::density::{BandwidthRule, Kernel};
use crate::distance::{euclidean, mindist};
use crate::error::Error;
use crate::symbolizer::{encode, reconstruct, train, EstimateOn, Provenance, SymbolWord, SymbolizerModel, TrainConfig};
use crate::timeseries::{znormalize, TimeSeries, WordLength};

#[derive(Debug, Parser)]
#[command(
    name = "edwsax",
    version,
    about = "Density-driven symbolic time-series representation"
)]
pub struct Cli {
    /// Log progress (-v) or debug detail (-vv) to stderr.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a symbolizer to training series and write the model file.
    Train(TrainArgs),
    /// Turn each input series into a symbolic word.
    Encode(EncodeArgs),
    /// Reconstruct series from symbolic words.
    Decode(DecodeArgs),
    /// MINDIST, Euclidean distance and their ratio for two series or words.
    Dist(DistArgs),
    /// Run the lower-bound and/or reconstruction experiments on UCR data.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct WordArgs {
    /// Number of PAA segments per series.
    #[arg(short = 'w', long, conflicts_with = "segment_size")]
    pub word_length: Option<usize>,
    /// Points per PAA segment, giving max(1, n / s) segments [default: 2].
    #[arg(long)]
    pub segment_size: Option<usize>,
}

impl WordArgs {
    pub fn resolve(&self) -> WordLength {
        match (self.word_length, self.segment_size) {
            (Some(w), _) => WordLength::Fixed(w),
            (None, s) => WordLength::SegmentSize(s.unwrap_or(2)),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[arg(long, default_value = "epanechnikov")]
    pub kernel: Kernel,
    /// silverman, scott, isj or fixed:<h>.
    #[arg(long, default_value = "isj")]
    pub bandwidth: BandwidthRule,
    /// Estimate the density from raw points or from PAA means.
    #[arg(long, default_value = "raw")]
    pub estimate_on: EstimateOn,
}

impl DensityArgs {
    fn train_config(&self, word_length: WordLength) -> TrainConfig {
        TrainConfig {
            kernel: self.kernel,
            bandwidth: self.bandwidth,
            estimate_on: self.estimate_on,
            word_length,
            ..TrainConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    /// Training series file.
    #[arg(long)]
    pub input: PathBuf,
    /// Where to write the model.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(short = 'a', long, default_value_t = 4)]
    pub alphabet: usize,
    /// edwsax fits the density; sax writes plain Gaussian breakpoints.
    #[arg(long, default_value = "edwsax")]
    pub method: Method,
    /// Input lines start with a class label (UCR format).
    #[arg(long)]
    pub ucr: bool,
    /// Accepted for uniformity; training itself draws no random numbers.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub density: DensityArgs,
    #[command(flatten)]
    pub word: WordArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EncodeArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Series file; standard input when omitted.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub ucr: bool,
    /// Skip z-normalization.
    #[arg(long)]
    pub raw: bool,
    #[command(flatten)]
    pub word: WordArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DecodeArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Word file; standard input when omitted.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Length of each reconstructed series.
    #[arg(short = 'n', long)]
    pub length: usize,
}

#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// File holding exactly two series (or two words with --words).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Inputs are words; only MINDIST is reported.
    #[arg(long, requires = "length")]
    pub words: bool,
    /// Original series length, needed with --words.
    #[arg(short = 'n', long)]
    pub length: Option<usize>,
    #[arg(long)]
    pub raw: bool,
    #[command(flatten)]
    pub word: WordArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Tlb,
    Reconstruction,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Plot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    PerSeries,
    PerDataset,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// A dataset directory, or a directory of them.
    #[arg(long, alias = "dataset")]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "5,10,20,30,40,50,60,70,80,90,100")]
    pub alphabets: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Experiment::Both)]
    pub experiment: Experiment,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Methods to evaluate [default: edwsax for tlb, sax,edwsax for reconstruction].
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<Method>>,
    #[arg(long, default_value_t = 10_000)]
    pub max_pairs: usize,
    #[arg(long, value_enum, default_value_t = NormalizationArg::PerSeries)]
    pub normalization: NormalizationArg,
    #[arg(long, default_value = "auto")]
    pub delimiter: Delimiter,
    #[command(flatten)]
    pub density: DensityArgs,
    #[command(flatten)]
    pub word: WordArgs,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Error,
    },
    #[error(transparent)]
    Core(#[from] Error),
}

type CliResult<T> = std::result::Result<T, CliError>;

trait Context<T> {
    fn context(self, what: impl FnOnce() -> String) -> CliResult<T>;
}

impl<T> Context<T> for crate::Result<T> {
    fn context(self, what: impl FnOnce() -> String) -> CliResult<T> {
        self.map_err(|source| CliError::Context {
            context: what(),
            source,
        })
    }
}

/// How a command finished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    /// Results were written but some datasets were skipped.
    Partial,
}

/// Parse `args` (program name first), run the command and return the process
/// exit code: 0 on success, 2 on partial results, 1 on errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    match execute(&cli.command) {
        Ok(Outcome::Complete) => 0,
        Ok(Outcome::Partial) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn execute(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Train(a) => cmd_train(a),
        Command::Encode(a) => cmd_encode(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Dist(a) => cmd_dist(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

/// `x` with 12 significant digits, trailing zeros dropped.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i32;
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..12).contains(&exp) {
        trim(format!("{:.*}", (11 - exp).max(0) as usize, x))
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, e) = s.split_once('e').expect("exponent present");
        format!("{}e{e}", trim(mantissa.to_string()))
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(|&v| format_sig12(v)).collect::<Vec<_>>().join(" ")
}

fn require_file(path: &Path, flag: &str) -> CliResult<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{flag} {}: no such file", path.display())))
    }
}

fn require_output_dir(path: &Path) -> CliResult<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => Err(CliError::Usage(format!(
            "--output {}: directory {} does not exist",
            path.display(),
            dir.display()
        ))),
        _ => Ok(()),
    }
}

fn read_text(path: Option<&Path>) -> CliResult<(String, String)> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            Ok((text, p.display().to_string()))
        }
        None => {
            let mut text = String::new();
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Error::io("<stdin>", e))?;
            Ok((text, "<stdin>".into()))
        }
    }
}

fn write_text(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e).into()),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e).into()),
    }
}

/// One series per non-blank line; whitespace or commas separate values.
pub fn parse_series_lines(text: &str) -> crate::Result<Vec<TimeSeries>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|f| !f.is_empty())
            .collect();
        if fields.is_empty() {
            continue;
        }
        let values = fields
            .iter()
            .enumerate()
            .map(|(col, f)| match f.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::Parse {
                    line: idx + 1,
                    column: col + 1,
                    message: format!("'{f}' is not a finite number"),
                }),
            })
            .collect::<crate::Result<Vec<f64>>>()?;
        out.push(TimeSeries::new(values)?);
    }
    Ok(out)
}

fn read_series(path: Option<&Path>, ucr: bool) -> CliResult<Vec<TimeSeries>> {
    let (text, name) = read_text(path)?;
    let parsed = if ucr {
        parse_ucr(&text, Delimiter::Auto).map(|r| r.into_iter().map(|l| l.series).collect())
    } else {
        parse_series_lines(&text)
    };
    parsed.context(|| name)
}

fn load_model(path: &Path) -> CliResult<SymbolizerModel> {
    require_file(path, "--model")?;
    SymbolizerModel::load(path).context(|| format!("model {}", path.display()))
}

fn prepare(series: TimeSeries, raw: bool) -> TimeSeries {
    if raw {
        series
    } else {
        znormalize(&series).series
    }
}

fn cmd_train(args: &TrainArgs) -> CliResult<Outcome> {
    require_file(&args.input, "--input")?;
    require_output_dir(&args.output)?;
    let word_length = args.word.resolve();
    let model = match args.method {
        Method::Sax => SymbolizerModel::gaussian(args.alphabet)?,
        Method::EdwSax => {
            let series = read_series(Some(&args.input), args.ucr)?;
            if series.is_empty() {
                return Err(Error::EmptyFile(args.input.clone()).into());
            }
            train(&series, args.alphabet, &args.density.train_config(word_length))
                .context(|| format!("training on {}", args.input.display()))?
        }
    };
    model.save(&args.output)?;
    let mut summary = format!("alphabet size: {}\n", model.alphabet_size());
    match model.provenance() {
        Provenance::Kde(s) => summary.push_str(&format!(
            "density: {} kernel, {} bandwidth h = {} from {} values ({})\n",
            s.kernel,
            s.rule,
            format_sig12(s.bandwidth),
            s.sample_count,
            s.estimate_on.name()
        )),
        Provenance::Gaussian => summary.push_str("density: standard normal\n"),
        Provenance::Custom => summary.push_str("density: custom\n"),
    }
    summary.push_str(&format!("breakpoints: {}\n", join(model.breakpoints().interior())));
    summary.push_str(&format!("centroids: {}\n", join(model.centroids().values())));
    write_text(None, &summary)?;
    Ok(Outcome::Complete)
}

fn cmd_encode(args: &EncodeArgs) -> CliResult<Outcome> {
    let model = load_model(&args.model)?;
    if let Some(p) = &args.input {
        require_file(p, "--input")?;
    }
    if let Some(p) = &args.output {
        require_output_dir(p)?;
    }
    let word_length = args.word.resolve();
    let mut out = String::new();
    for (k, series) in read_series(args.input.as_deref(), args.ucr)?.into_iter().enumerate() {
        let s = prepare(series, args.raw);
        let word = word_length
            .resolve(s.len())
            .and_then(|w| encode(&model, &s, w))
            .context(|| format!("series {}", k + 1))?;
        out.push_str(&word.to_string());
        out.push('\n');
    }
    write_text(args.output.as_deref(), &out)?;
    Ok(Outcome::Complete)
}

fn read_words(path: Option<&Path>, alphabet_size: usize) -> CliResult<Vec<SymbolWord>> {
    let (text, name) = read_text(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(idx, line)| {
            SymbolWord::parse(line, alphabet_size).map_err(|e| match e {
                Error::Parse { column, message, .. } => Error::Parse {
                    line: idx + 1,
                    column,
                    message,
                },
                other => other,
            })
        })
        .collect::<crate::Result<Vec<_>>>()
        .context(|| name)
}

fn cmd_decode(args: &DecodeArgs) -> CliResult<Outcome> {
    let model = load_model(&args.model)?;
    if let Some(p) = &args.input {
        require_file(p, "--input")?;
    }
    let mut out = String::new();
    for (k, word) in read_words(args.input.as_deref(), model.alphabet_size())?
        .iter()
        .enumerate()
    {
        let series = reconstruct(&model, word, args.length).context(|| format!("word {}", k + 1))?;
        out.push_str(&join(series.values()));
        out.push('\n');
    }
    write_text(args.output.as_deref(), &out)?;
    Ok(Outcome::Complete)
}

fn cmd_dist(args: &DistArgs) -> CliResult<Outcome> {
    let model = load_model(&args.model)?;
    if let Some(p) = &args.input {
        require_file(p, "--input")?;
    }
    let two = |count: usize| {
        if count == 2 {
            Ok(())
        } else {
            Err(CliError::Usage(format!("dist needs exactly two inputs, found {count}")))
        }
    };
    let mut out = String::new();
    if args.words {
        let words = read_words(args.input.as_deref(), model.alphabet_size())?;
        two(words.len())?;
        let n = args.length.expect("clap enforces --length with --words");
        let d = mindist(&words[0], &words[1], model.lookup(), n)?;
        out.push_str(&format!("mindist {}\n", format_sig12(d)));
    } else {
        let series: Vec<TimeSeries> = read_series(args.input.as_deref(), false)?
            .into_iter()
            .map(|s| prepare(s, args.raw))
            .collect();
        two(series.len())?;
        let (q, c) = (&series[0], &series[1]);
        let ed = euclidean(q, c)?;
        let w = args.word.resolve().resolve(q.len())?;
        let d = mindist(&encode(&model, q, w)?, &encode(&model, c, w)?, model.lookup(), q.len())?;
        out.push_str(&format!("mindist {}\n", format_sig12(d)));
        out.push_str(&format!("euclidean {}\n", format_sig12(ed)));
        if ed > 0.0 {
            out.push_str(&format!("tlb {}\n", format_sig12(d / ed)));
        } else {
            out.push_str("tlb undefined\n");
        }
    }
    write_text(None, &out)?;
    Ok(Outcome::Complete)
}

fn load_datasets(root: &Path, delimiter: Delimiter) -> CliResult<(Vec<Dataset>, Vec<SkippedDataset>)> {
    if !root.is_dir() {
        return Err(CliError::Usage(format!("--input {}: not a directory", root.display())));
    }
    let dirs = discover_datasets(root)?;
    if dirs.is_empty() {
        return Err(CliError::Usage(format!(
            "--input {}: no <Name>/<Name>_TRAIN files found",
            root.display()
        )));
    }
    let mut loaded = Vec::new();
    let mut skipped = Vec::new();
    for dir in dirs {
        match Dataset::load_dir(&dir, delimiter) {
            Ok(d) => {
                info!("loaded {} ({} train, {} test)", d.name, d.train.len(), d.test.len());
                loaded.push(d);
            }
            Err(e) => {
                let name = dir
                    .file_name()
                    .map_or_else(|| dir.display().to_string(), |n| n.to_string_lossy().into());
                warn!("skipping dataset {name}: {e}");
                skipped.push(SkippedDataset {
                    name,
                    reason: e.to_string(),
                });
            }
        }
    }
    Ok((loaded, skipped))
}

fn cmd_bench(args: &BenchArgs) -> CliResult<Outcome> {
    if let Some(p) = &args.output {
        require_output_dir(p)?;
    }
    let word_length = args.word.resolve();
    let base = ExperimentConfig {
        train: args.density.train_config(word_length),
        word_length,
        normalization: match args.normalization {
            NormalizationArg::PerSeries => Normalization::PerSeries,
            NormalizationArg::PerDataset => Normalization::PerDataset,
        },
        methods: Vec::new(),
        seed: args.seed,
        max_pairs: args.max_pairs,
    };
    let with_methods = |default: &[Method]| ExperimentConfig {
        methods: args.methods.clone().unwrap_or_else(|| default.to_vec()),
        ..base.clone()
    };
    let (datasets, load_failures) = load_datasets(&args.input, args.delimiter)?;
    let echo = ConfigEcho {
        kernel: base.train.kernel,
        bandwidth: base.train.bandwidth,
        estimate_on: base.train.estimate_on,
        word_length,
        normalization: base.normalization,
        seed: base.seed,
        max_pairs: base.max_pairs,
    };
    let mut report = ExperimentReport::new(echo, Vec::new(), Vec::new(), load_failures);
    if !datasets.is_empty() {
        if matches!(args.experiment, Experiment::Tlb | Experiment::Both) {
            report = report.merge(run_tlb_experiment(
                &datasets,
                &args.alphabets,
                &with_methods(&[Method::EdwSax]),
            )?);
        }
        if matches!(args.experiment, Experiment::Reconstruction | Experiment::Both) {
            let cfg = with_methods(&[Method::Sax, Method::EdwSax]);
            report = report.merge(run_reconstruction_experiment(&datasets, &args.alphabets, &cfg)?);
        }
    }
    let format = match args.format {
        FormatArg::Csv => ReportFormat::Csv,
        FormatArg::Plot => ReportFormat::Plot,
    };
    if format == ReportFormat::Csv {
        for line in report.config.lines() {
            eprintln!("# {line}");
        }
    }
    for c in &report.comparisons {
        let p = c.p_value.map_or("n/a".to_string(), format_sig12);
        eprintln!(
            "# {} a={} {}: edwsax lower on {}/{} series, signed-rank p = {p}",
            c.dataset, c.alphabet_size, c.metric, c.candidate_wins, c.n
        );
    }
    for s in &report.skipped_datasets {
        eprintln!("# skipped {}: {}", s.name, s.reason);
    }
    let mut buf = Vec::new();
    emit_report(&report, format, &mut buf)?;
    write_text(args.output.as_deref(), &String::from_utf8_lossy(&buf))?;
    Ok(if report.is_partial() {
        Outcome::Partial
    } else {
        Outcome::Complete
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig12(0.0), "0");
        assert_eq!(format_sig12(0.64), "0.64");
        assert_eq!(format_sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig12(-2.0 / 3.0 * 1000.0), "-666.666666667");
        assert_eq!(format_sig12(1.5e-9), "1.5e-9");
        assert_eq!(format_sig12(123456789012345.0), "1.23456789012e14");
    }

    #[test]
    fn series_lines() {
        let s = parse_series_lines("1 2,3\n\n 4\t5 \n").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].values(), &[1.0, 2.0, 3.0]);
        match parse_series_lines("1 2\n3 x 4\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 2)),
            other => panic!("{other:?}"),
        }
        assert!(parse_series_lines("").unwrap().is_empty());
    }

    #[test]
    fn flag_parsing() {
        let cli = Cli::try_parse_from([
            "edwsax",
            "bench",
            "--input",
            "d",
            "--alphabets",
            "5,10",
            "--bandwidth",
            "fixed:0.3",
        ])
        .unwrap();
        let Command::Bench(b) = cli.command else { panic!() };
        assert_eq!(b.alphabets, vec![5, 10]);
        assert_eq!(b.density.bandwidth, BandwidthRule::Fixed(0.3));
        assert_eq!(b.word.resolve(), WordLength::SegmentSize(2));
        assert!(Cli::try_parse_from(["edwsax", "bench", "--input", "d", "--experiment", "nope"]).is_err());
        assert!(Cli::try_parse_from(["edwsax", "encode", "--model", "m", "-w", "4", "--segment-size", "2"]).is_err());
        assert!(Cli::try_parse_from(["edwsax", "dist", "--model", "m", "--words"]).is_err());
    }
}
