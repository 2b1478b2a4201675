use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use lexnet::corpus::{Corpus, TokenizeConfig, DEFAULT_DELIMITERS};
use lexnet::distributions::{sentence_length_histogram_series, write_histogram_csv, write_long_csv, LabelledSeries};
use lexnet::error::{Error, Result, Stage, StageExt};
use lexnet::metrics::{write_node_metrics_csv, DistanceEstimator, NetworkAnalysis, NetworkSummary};
use lexnet::report::{
    self, analyze_network, compare_series, trend_verdicts, ExperimentConfig, SeriesComparison, TrendVerdicts,
};
use lexnet::shuffle::{self, ShuffleMode, ShuffleSeed};
use lexnet::CooccurrenceNetwork;

/// Word co-occurrence networks and shuffled null models.
#[derive(Parser)]
#[command(name = "lexnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tokenize plain text into the line-oriented corpus format.
    Ingest {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        text: TextArgs,
        /// Corpus output (default: stdout).
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Write corpus statistics as JSON.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Produce a shuffled copy of a corpus.
    Shuffle {
        corpus: PathBuf,
        #[arg(long, value_parser = parse_mode)]
        mode: ShuffleMode,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build the co-occurrence network and write its edge list.
    Build {
        corpus: PathBuf,
        #[arg(long, default_value_t = 1)]
        window: usize,
        /// Edge list output (default: stdout).
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Also write a Graphviz rendering.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Summary measures (N, K, L, D, C, omega) and optional per-node metrics.
    Measure {
        corpus: PathBuf,
        #[arg(long, default_value_t = 1)]
        window: usize,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Summary JSON output (default: stdout).
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Per-node metrics CSV.
        #[arg(long)]
        nodes: Option<PathBuf>,
    },
    /// Rank distributions and the sentence-length histogram as CSV.
    Dist {
        corpus: PathBuf,
        #[arg(long, default_value_t = 1)]
        window: usize,
        #[arg(long, default_value = "corpus")]
        label: String,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Compare an original corpus with a shuffled one.
    Compare {
        original: PathBuf,
        shuffled: PathBuf,
        #[arg(long, default_value_t = 1)]
        window: usize,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Run the full original-versus-shuffled experiment.
    Pipeline {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        text: TextArgs,
        #[arg(long)]
        label: Option<String>,
        #[arg(long, default_value_t = 1)]
        window: usize,
        /// Comma-separated shuffle seeds.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
        seeds: Vec<u64>,
        /// Shuffle modes to run (repeatable).
        #[arg(long = "mode", value_parser = parse_mode, default_values = ["sentence", "text"])]
        modes: Vec<ShuffleMode>,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct TextArgs {
    /// Sentence delimiter characters.
    #[arg(long, default_value_t = DEFAULT_DELIMITERS.iter().collect::<String>())]
    delimiters: String,
    /// Keep the original letter case.
    #[arg(long)]
    no_case_fold: bool,
}

impl TextArgs {
    fn config(&self) -> TokenizeConfig {
        TokenizeConfig {
            delimiters: self.delimiters.chars().collect(),
            case_fold: !self.no_case_fold,
        }
    }
}

#[derive(Args)]
struct SamplingArgs {
    /// Estimate distances from this many random BFS sources instead of all nodes.
    #[arg(long)]
    sample_sources: Option<usize>,
    #[arg(long, default_value_t = 0)]
    sample_seed: u64,
}

impl SamplingArgs {
    fn estimator(&self) -> DistanceEstimator {
        match self.sample_sources {
            Some(sources) => DistanceEstimator::Sampled {
                sources,
                seed: self.sample_seed,
            },
            None => DistanceEstimator::Exact,
        }
    }
}

fn parse_mode(s: &str) -> std::result::Result<ShuffleMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("lexnet: error {err}");
            let mut source = std::error::Error::source(&err);
            while let Some(cause) = source {
                // Stage wrappers already print their inner message.
                if !matches!(err, Error::Stage { .. }) {
                    eprintln!("  caused by: {cause}");
                }
                source = cause.source();
            }
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Ingest {
            inputs,
            text,
            out,
            stats,
        } => {
            let (corpus, seg) = report::load_corpus(&inputs, &text.config()).stage(Stage::Ingest)?;
            eprintln!(
                "ingested {} sentences ({} empty segments dropped)",
                seg.sentences, seg.dropped_empty_segments
            );
            emit(out.as_deref(), |w| corpus.write_lines(w)).stage(Stage::Ingest)?;
            if let Some(path) = stats {
                write_json(&path, &corpus.stats()).stage(Stage::Ingest)?;
            }
        }
        Command::Shuffle {
            corpus,
            mode,
            seed,
            out,
        } => {
            let corpus = read_corpus(&corpus).stage(Stage::Ingest)?;
            let shuffled = shuffle::shuffle(&corpus, mode, ShuffleSeed(seed)).stage(Stage::Shuffle)?;
            emit(out.as_deref(), |w| shuffled.write_lines(w)).stage(Stage::Shuffle)?;
        }
        Command::Build {
            corpus,
            window,
            out,
            dot,
        } => {
            let corpus = read_corpus(&corpus).stage(Stage::Ingest)?;
            let net = CooccurrenceNetwork::build(&corpus, window).stage(Stage::Build)?;
            emit(out.as_deref(), |w| net.write_edge_list(w)).stage(Stage::Build)?;
            if let Some(path) = dot {
                fs::write(&path, net.export_dot())
                    .map_err(|e| io_err(&path, e))
                    .stage(Stage::Build)?;
            }
        }
        Command::Measure {
            corpus,
            window,
            sampling,
            summary,
            nodes,
        } => {
            let corpus = read_corpus(&corpus).stage(Stage::Ingest)?;
            let net = CooccurrenceNetwork::build(&corpus, window).stage(Stage::Build)?;
            let analysis = NetworkAnalysis::new(&net);
            let (result, metrics) = analysis.profile(sampling.estimator()).stage(Stage::Measure)?;
            match summary {
                Some(path) => write_json(&path, &result).stage(Stage::Measure)?,
                None => print_json(&result).stage(Stage::Measure)?,
            }
            if let Some(path) = nodes {
                let file = fs::File::create(&path)
                    .map_err(|e| io_err(&path, e))
                    .stage(Stage::Measure)?;
                write_node_metrics_csv(&net, &metrics, io::BufWriter::new(file)).stage(Stage::Measure)?;
            }
        }
        Command::Dist {
            corpus,
            window,
            label,
            out_dir,
        } => {
            let corpus = read_corpus(&corpus).stage(Stage::Ingest)?;
            let net = CooccurrenceNetwork::build(&corpus, window).stage(Stage::Build)?;
            let metrics = NetworkAnalysis::new(&net).all_node_metrics();
            write_distributions(&out_dir, &label, &corpus, &metrics).stage(Stage::Distributions)?;
        }
        Command::Compare {
            original,
            shuffled,
            window,
            sampling,
        } => {
            let estimator = sampling.estimator();
            let mut analyses = Vec::new();
            for path in [&original, &shuffled] {
                let corpus = read_corpus(path).stage(Stage::Ingest)?;
                let net = CooccurrenceNetwork::build(&corpus, window).stage(Stage::Build)?;
                analyses.push(analyze_network(&net, estimator).stage(Stage::Measure)?);
            }
            let series = compare_series(&analyses[0].series, &analyses[1].series).stage(Stage::Distributions)?;
            #[derive(Serialize)]
            struct Comparison {
                original: NetworkSummary,
                shuffled: NetworkSummary,
                verdicts: TrendVerdicts,
                series: SeriesComparison,
            }
            let out = Comparison {
                original: analyses[0].summary,
                shuffled: analyses[1].summary,
                verdicts: trend_verdicts(&analyses[0].summary, &analyses[1].summary),
                series,
            };
            print_json(&out).stage(Stage::Report)?;
        }
        Command::Pipeline {
            inputs,
            text,
            label,
            window,
            seeds,
            modes,
            sampling,
            out_dir,
        } => {
            let label = label.unwrap_or_else(|| {
                inputs[0]
                    .file_stem()
                    .map_or_else(|| "corpus".into(), |s| s.to_string_lossy().into_owned())
            });
            let config = ExperimentConfig {
                inputs,
                label,
                tokenize: text.config(),
                window,
                seeds,
                modes,
                estimator: sampling.estimator(),
                out_dir: Some(out_dir),
            };
            let report = report::run_experiment(&config)?;
            print!("{}", report.render_text());
        }
    }
    Ok(())
}

fn io_err(path: &Path, e: io::Error) -> Error {
    Error::Io {
        path: path.to_owned(),
        source: e,
    }
}

fn read_corpus(path: &Path) -> Result<Corpus> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Error::Decode {
        offset: e.valid_up_to(),
    })?;
    Ok(Corpus::parse_lines(text))
}

fn emit(path: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    let target = path.unwrap_or(Path::new("<stdout>"));
    let result = match path {
        Some(path) => fs::File::create(path).and_then(|f| {
            let mut w = io::BufWriter::new(f);
            body(&mut w)?;
            w.flush()
        }),
        None => {
            let stdout = io::stdout();
            let mut w = io::BufWriter::new(stdout.lock());
            body(&mut w).and_then(|_| w.flush())
        }
    };
    result.map_err(|e| io_err(target, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut json = serde_json::to_vec_pretty(value)?;
    json.push(b'\n');
    fs::write(path, json).map_err(|e| io_err(path, e))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn write_distributions(dir: &Path, label: &str, corpus: &Corpus, metrics: &[lexnet::NodeMetrics]) -> Result<()> {
    use lexnet::distributions::{degree_rank, selectivity_rank, strength_rank, Direction};

    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut all = Vec::new();
    for direction in [Direction::In, Direction::Out] {
        all.push(degree_rank(metrics, direction));
        all.push(strength_rank(metrics, direction));
        all.push(selectivity_rank(metrics, direction));
    }
    for series in &all {
        let path = dir.join(format!("{label}_{}.csv", series.label));
        let file = fs::File::create(&path).map_err(|e| io_err(&path, e))?;
        series.write_csv(io::BufWriter::new(file))?;
    }
    let path = dir.join(format!("{label}_all.csv"));
    let file = fs::File::create(&path).map_err(|e| io_err(&path, e))?;
    write_long_csv(
        all.iter().map(|s| LabelledSeries {
            corpus: label,
            series: s,
        }),
        io::BufWriter::new(file),
    )?;

    let path = dir.join(format!("{label}_sentence-lengths.csv"));
    let file = fs::File::create(&path).map_err(|e| io_err(&path, e))?;
    write_histogram_csv(
        &sentence_length_histogram_series(&corpus.stats()),
        io::BufWriter::new(file),
    )?;
    Ok(())
}
