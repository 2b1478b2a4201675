//! End-to-end comparison of an original corpus against its shuffled
//! variants: summaries, rank-series comparisons, preservation checks and
//! trend verdicts, plus the files that record them.
//!
//! Output directory layout:
//!
//! ```text
//! report.json  report.txt
//! summaries/<variant>.json
//! series/<variant>_<series>.csv  series/all.csv
//! networks/<variant>.edgelist
//! ```
//!
//! Variants are named `original`, `<mode>-s<seed>`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::corpus::{self, Corpus, CorpusStats, SegmentReport, Token, TokenizeConfig};
use crate::distributions::{
    degree_rank, selectivity_rank, sentence_length_histogram_series, series_compare, series_compare_top, strength_rank,
    write_histogram_csv, write_long_csv, Direction, DominanceReport, LabelledSeries, RankSeries,
};
use crate::error::{Error, Result, Stage, StageExt};
use crate::metrics::{DistanceEstimator, NetworkAnalysis, NetworkSummary};
use crate::network::{CooccurrenceNetwork, DEFAULT_WINDOW};
use crate::shuffle::{preservation_check, shuffle, PreservationReport, ShuffleMode, ShuffleSeed};

/// Leading share of ranks compared for selectivity dominance.
pub const SELECTIVITY_TOP_FRACTION: f64 = 0.1;
/// Leading ranks compared for degree and strength preservation.
pub const PRESERVATION_TOP_RANKS: usize = 100;

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub inputs: Vec<PathBuf>,
    /// Name used for the original corpus in outputs.
    pub label: String,
    pub tokenize: TokenizeConfig,
    pub window: usize,
    pub seeds: Vec<u64>,
    pub modes: Vec<ShuffleMode>,
    pub estimator: DistanceEstimator,
    pub out_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            inputs: Vec::new(),
            label: "corpus".into(),
            tokenize: TokenizeConfig::default(),
            window: DEFAULT_WINDOW,
            seeds: vec![1],
            modes: vec![ShuffleMode::SentenceLevel, ShuffleMode::TextLevel],
            estimator: DistanceEstimator::Exact,
            out_dir: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::InvalidParameter("at least one shuffle seed is required".into()));
        }
        if self.window == 0 {
            return Err(Error::InvalidParameter(
                "co-occurrence window must be at least 1".into(),
            ));
        }
        if self.modes.is_empty() {
            return Err(Error::InvalidParameter("at least one shuffle mode is required".into()));
        }
        Ok(())
    }
}

/// Reads and concatenates the input files into one corpus. A sentence never
/// spans two files.
pub fn load_corpus(inputs: &[PathBuf], config: &TokenizeConfig) -> Result<(Corpus, SegmentReport)> {
    if inputs.is_empty() {
        return Err(Error::InvalidParameter("no input files given".into()));
    }
    let boundary = Token::Delimiter(config.delimiters.first().copied().unwrap_or('.'));
    let mut tokens = Vec::new();
    let mut boundaries = 0;
    for path in inputs {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let file_tokens = corpus::tokenize_bytes(&bytes, config).map_err(|e| match e {
            Error::Decode { offset } => {
                Error::InvalidInput(format!("{}: not valid UTF-8 at byte offset {offset}", path.display()))
            }
            other => other,
        })?;
        if !tokens.is_empty() {
            tokens.push(boundary.clone());
            boundaries += 1;
        }
        tokens.extend(file_tokens);
    }
    let (corpus, mut report) = corpus::segment_with_report(&tokens);
    // Synthetic file boundaries that fell next to a real delimiter are not
    // worth reporting.
    report.dropped_empty_segments = report.dropped_empty_segments.saturating_sub(boundaries);
    Ok((corpus, report))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesSet {
    pub degree_in: RankSeries,
    pub degree_out: RankSeries,
    pub strength_in: RankSeries,
    pub strength_out: RankSeries,
    pub selectivity_in: RankSeries,
    pub selectivity_out: RankSeries,
}

impl SeriesSet {
    pub fn iter(&self) -> impl Iterator<Item = &RankSeries> {
        [
            &self.degree_in,
            &self.degree_out,
            &self.strength_in,
            &self.strength_out,
            &self.selectivity_in,
            &self.selectivity_out,
        ]
        .into_iter()
    }
}

/// Everything measured on one network.
#[derive(Debug, Clone)]
pub struct VariantAnalysis {
    pub summary: NetworkSummary,
    pub series: SeriesSet,
}

pub fn analyze_network(net: &CooccurrenceNetwork, estimator: DistanceEstimator) -> Result<VariantAnalysis> {
    let analysis = NetworkAnalysis::new(net);
    let (summary, metrics) = analysis.profile(estimator)?;
    let series = SeriesSet {
        degree_in: degree_rank(&metrics, Direction::In),
        degree_out: degree_rank(&metrics, Direction::Out),
        strength_in: strength_rank(&metrics, Direction::In),
        strength_out: strength_rank(&metrics, Direction::Out),
        selectivity_in: selectivity_rank(&metrics, Direction::In),
        selectivity_out: selectivity_rank(&metrics, Direction::Out),
    };
    Ok(VariantAnalysis { summary, series })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InOut<T> {
    #[serde(rename = "in")]
    pub incoming: T,
    #[serde(rename = "out")]
    pub outgoing: T,
}

impl<T> InOut<T> {
    fn both(self) -> [T; 2] {
        [self.incoming, self.outgoing]
    }
}

/// How a shuffled network's rank curves sit against the original's.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesComparison {
    /// Top 10% of ranks; `dominance` is the share where the original is higher.
    pub selectivity: InOut<DominanceReport>,
    /// Top 100 ranks.
    pub degree: InOut<DominanceReport>,
    /// Top 100 ranks.
    pub strength: InOut<DominanceReport>,
}

pub fn compare_series(original: &SeriesSet, shuffled: &SeriesSet) -> Result<SeriesComparison> {
    let sel = |a, b| series_compare(a, b, SELECTIVITY_TOP_FRACTION);
    let top = |a, b| series_compare_top(a, b, PRESERVATION_TOP_RANKS);
    Ok(SeriesComparison {
        selectivity: InOut {
            incoming: sel(&original.selectivity_in, &shuffled.selectivity_in)?,
            outgoing: sel(&original.selectivity_out, &shuffled.selectivity_out)?,
        },
        degree: InOut {
            incoming: top(&original.degree_in, &shuffled.degree_in)?,
            outgoing: top(&original.degree_out, &shuffled.degree_out)?,
        },
        strength: InOut {
            incoming: top(&original.strength_in, &shuffled.strength_in)?,
            outgoing: top(&original.strength_out, &shuffled.strength_out)?,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendPoint {
    pub l: f64,
    pub d: f64,
    pub c: f64,
}

impl From<&NetworkSummary> for TrendPoint {
    fn from(s: &NetworkSummary) -> Self {
        Self {
            l: s.l,
            d: f64::from(s.d),
            c: s.c,
        }
    }
}

impl From<&MedianSummary> for TrendPoint {
    fn from(s: &MedianSummary) -> Self {
        Self { l: s.l, d: s.d, c: s.c }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub original: f64,
    pub shuffled: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendVerdicts {
    /// L_shuffled < L_original
    pub l_decreased: Verdict,
    /// D_shuffled <= D_original
    pub d_not_increased: Verdict,
    /// C_shuffled > C_original
    pub c_increased: Verdict,
}

impl TrendVerdicts {
    pub fn all_hold(&self) -> bool {
        self.l_decreased.holds && self.d_not_increased.holds && self.c_increased.holds
    }
}

pub fn trend_verdicts(original: impl Into<TrendPoint>, shuffled: impl Into<TrendPoint>) -> TrendVerdicts {
    let (o, s) = (original.into(), shuffled.into());
    let verdict = |holds, original, shuffled| Verdict {
        holds,
        original,
        shuffled,
    };
    TrendVerdicts {
        l_decreased: verdict(s.l < o.l, o.l, s.l),
        d_not_increased: verdict(s.d <= o.d, o.d, s.d),
        c_increased: verdict(s.c > o.c, o.c, s.c),
    }
}

/// Per-field medians over seeds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MedianSummary {
    #[serde(rename = "N")]
    pub n: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub omega: f64,
}

impl MedianSummary {
    pub fn of(summaries: &[NetworkSummary]) -> Self {
        let m = |f: fn(&NetworkSummary) -> f64| median(summaries.iter().map(f));
        Self {
            n: m(|s| s.n as f64),
            k: m(|s| s.k as f64),
            l: m(|s| s.l),
            d: m(|s| f64::from(s.d)),
            c: m(|s| s.c),
            omega: m(|s| s.omega as f64),
        }
    }
}

/// Median, averaging the two middle values for even counts. NaN for no input.
pub fn median(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.into_iter().collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spread {
    pub median: f64,
    pub worst: f64,
}

impl Spread {
    fn of_deviation(values: &[f64]) -> Self {
        Self {
            median: median(values.iter().copied()),
            worst: values.iter().copied().fold(0.0, f64::max),
        }
    }

    fn of_dominance(values: &[f64]) -> Self {
        Self {
            median: median(values.iter().copied()),
            worst: values.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedRun {
    pub seed: u64,
    pub variant: String,
    pub stats: CorpusStats,
    pub summary: NetworkSummary,
    pub preservation: PreservationReport,
    pub verdicts: TrendVerdicts,
    pub series: SeriesComparison,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeReport {
    pub mode: ShuffleMode,
    pub runs: Vec<SeedRun>,
    pub median: MedianSummary,
    /// Median summary against the original.
    pub verdicts: TrendVerdicts,
    pub selectivity_dominance: InOut<Spread>,
    pub degree_max_deviation: InOut<Spread>,
    pub strength_max_deviation: InOut<Spread>,
}

impl ModeReport {
    fn aggregate(mode: ShuffleMode, original: &NetworkSummary, runs: Vec<SeedRun>) -> Self {
        let summaries: Vec<NetworkSummary> = runs.iter().map(|r| r.summary).collect();
        let median = MedianSummary::of(&summaries);
        let collect = |pick: fn(&SeriesComparison) -> InOut<DominanceReport>, field: fn(&DominanceReport) -> f64| {
            let values: Vec<[f64; 2]> = runs.iter().map(|r| pick(&r.series).both().map(|d| field(&d))).collect();
            let (ins, outs): (Vec<f64>, Vec<f64>) = values.iter().map(|[a, b]| (*a, *b)).unzip();
            (ins, outs)
        };
        let (sel_in, sel_out) = collect(|s| s.selectivity, |d| d.dominance);
        let (deg_in, deg_out) = collect(|s| s.degree, |d| d.max_relative_deviation);
        let (str_in, str_out) = collect(|s| s.strength, |d| d.max_relative_deviation);
        Self {
            mode,
            verdicts: trend_verdicts(original, &median),
            median,
            selectivity_dominance: InOut {
                incoming: Spread::of_dominance(&sel_in),
                outgoing: Spread::of_dominance(&sel_out),
            },
            degree_max_deviation: InOut {
                incoming: Spread::of_deviation(&deg_in),
                outgoing: Spread::of_deviation(&deg_out),
            },
            strength_max_deviation: InOut {
                incoming: Spread::of_deviation(&str_in),
                outgoing: Spread::of_deviation(&str_out),
            },
            runs,
        }
    }

    pub fn preservation_passed(&self) -> bool {
        self.runs.iter().all(|r| r.preservation.all_passed())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub corpus: String,
    pub window: usize,
    pub estimator: DistanceEstimator,
    pub seeds: Vec<u64>,
    pub segmentation: SegmentReport,
    pub stats: CorpusStats,
    pub original: NetworkSummary,
    pub modes: Vec<ModeReport>,
}

impl ComparisonReport {
    pub fn mode(&self, mode: ShuffleMode) -> Option<&ModeReport> {
        self.modes.iter().find(|m| m.mode == mode)
    }

    /// Table-style plain text rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "corpus: {}", self.corpus);
        let _ = writeln!(
            out,
            "words: {}  unique: {}  sentences: {}  window: {}  distances: {}",
            self.stats.total_words, self.stats.unique_words, self.stats.sentence_count, self.window, self.estimator
        );
        let seeds: Vec<String> = self.seeds.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "seeds: {} (shuffled columns are medians)", seeds.join(", "));
        out.push('\n');

        let mut header = format!("{:<8}{:>14}", "", "original");
        for m in &self.modes {
            let _ = write!(header, "{:>18}", m.mode.name());
        }
        let _ = writeln!(out, "{}", header.trim_end());
        let o = &self.original;
        type Row<'a> = (&'a str, String, Box<dyn Fn(&MedianSummary) -> String>);
        let rows: Vec<Row> = vec![
            ("N", o.n.to_string(), Box::new(|m| format!("{}", m.n))),
            ("K", o.k.to_string(), Box::new(|m| format!("{}", m.k))),
            ("L", format!("{:.3}", o.l), Box::new(|m| format!("{:.3}", m.l))),
            ("D", o.d.to_string(), Box::new(|m| format!("{}", m.d))),
            ("C", format!("{:.3}", o.c), Box::new(|m| format!("{:.3}", m.c))),
            ("omega", o.omega.to_string(), Box::new(|m| format!("{}", m.omega))),
        ];
        for (name, orig, cell) in rows {
            let mut line = format!("{name:<8}{orig:>14}");
            for m in &self.modes {
                let _ = write!(line, "{:>18}", cell(&m.median));
            }
            let _ = writeln!(out, "{line}");
        }

        for m in &self.modes {
            let v = &m.verdicts;
            let yes = |b: bool| if b { "yes" } else { "no" };
            out.push('\n');
            let _ = writeln!(out, "[{}]", m.mode.name());
            let _ = writeln!(
                out,
                "  L decreased:      {:<3} ({:.4} -> {:.4})",
                yes(v.l_decreased.holds),
                v.l_decreased.original,
                v.l_decreased.shuffled
            );
            let _ = writeln!(
                out,
                "  D not increased:  {:<3} ({} -> {})",
                yes(v.d_not_increased.holds),
                v.d_not_increased.original,
                v.d_not_increased.shuffled
            );
            let _ = writeln!(
                out,
                "  C increased:      {:<3} ({:.4} -> {:.4})",
                yes(v.c_increased.holds),
                v.c_increased.original,
                v.c_increased.shuffled
            );
            let _ = writeln!(
                out,
                "  selectivity dominance, top {:.0}% of ranks (median/worst): in {:.3}/{:.3}  out {:.3}/{:.3}",
                SELECTIVITY_TOP_FRACTION * 100.0,
                m.selectivity_dominance.incoming.median,
                m.selectivity_dominance.incoming.worst,
                m.selectivity_dominance.outgoing.median,
                m.selectivity_dominance.outgoing.worst
            );
            for (name, dev) in [
                ("degree", &m.degree_max_deviation),
                ("strength", &m.strength_max_deviation),
            ] {
                let _ = writeln!(
                    out,
                    "  {name} max rel. deviation, top {PRESERVATION_TOP_RANKS} ranks (median/worst): in {:.3}/{:.3}  out {:.3}/{:.3}",
                    dev.incoming.median, dev.incoming.worst, dev.outgoing.median, dev.outgoing.worst
                );
            }
            let _ = writeln!(
                out,
                "  preservation checks: {}",
                if m.preservation_passed() { "pass" } else { "FAIL" }
            );
        }
        out
    }
}

/// Runs the whole comparison and, when `out_dir` is set, writes every
/// artifact. Identical inputs and config give byte-identical files.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ComparisonReport> {
    config.validate().stage(Stage::Report)?;
    let (corpus, segmentation) = load_corpus(&config.inputs, &config.tokenize).stage(Stage::Ingest)?;
    run_on_corpus(&corpus, segmentation, config)
}

/// Same as [`run_experiment`] for a corpus that is already in memory;
/// `config.inputs` is ignored.
pub fn run_on_corpus(
    corpus: &Corpus,
    segmentation: SegmentReport,
    config: &ExperimentConfig,
) -> Result<ComparisonReport> {
    config.validate().stage(Stage::Report)?;
    let sink = config
        .out_dir
        .as_deref()
        .map(ArtifactSink::create)
        .transpose()
        .stage(Stage::Report)?;
    let mut long_series: Vec<(String, SeriesSet)> = Vec::new();

    let original_net = CooccurrenceNetwork::build(corpus, config.window).stage(Stage::Build)?;
    let original = analyze_network(&original_net, config.estimator).stage(Stage::Measure)?;
    if let Some(sink) = &sink {
        sink.variant("original", &original_net, &original, &corpus.stats())
            .stage(Stage::Report)?;
    }
    drop(original_net);

    let mut modes = Vec::new();
    for &mode in &config.modes {
        let mut runs = Vec::new();
        for &seed in &config.seeds {
            let variant = format!("{}-s{seed}", mode.name());
            let shuffled = shuffle(corpus, mode, ShuffleSeed(seed)).stage(Stage::Shuffle)?;
            let preservation = preservation_check(corpus, &shuffled, mode);
            let net = CooccurrenceNetwork::build(&shuffled, config.window).stage(Stage::Build)?;
            let analysis = analyze_network(&net, config.estimator).stage(Stage::Measure)?;
            let series = compare_series(&original.series, &analysis.series).stage(Stage::Distributions)?;
            let stats = shuffled.stats();
            if let Some(sink) = &sink {
                sink.variant(&variant, &net, &analysis, &stats).stage(Stage::Report)?;
            }
            runs.push(SeedRun {
                seed,
                variant: variant.clone(),
                stats,
                summary: analysis.summary,
                preservation,
                verdicts: trend_verdicts(&original.summary, &analysis.summary),
                series,
            });
            long_series.push((variant, analysis.series));
        }
        modes.push(ModeReport::aggregate(mode, &original.summary, runs));
    }

    let report = ComparisonReport {
        corpus: config.label.clone(),
        window: config.window,
        estimator: config.estimator,
        seeds: config.seeds.clone(),
        segmentation,
        stats: corpus.stats(),
        original: original.summary,
        modes,
    };

    if let Some(sink) = &sink {
        long_series.insert(0, ("original".into(), original.series));
        sink.finish(&report, &long_series).stage(Stage::Report)?;
    }
    Ok(report)
}

struct ArtifactSink {
    root: PathBuf,
}

impl ArtifactSink {
    fn create(root: &Path) -> Result<Self> {
        for sub in ["summaries", "series", "networks"] {
            let dir = root.join(sub);
            fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        }
        Ok(Self { root: root.to_owned() })
    }

    fn write(&self, rel: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
        let path = self.root.join(rel);
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))
    }

    fn variant(
        &self,
        name: &str,
        net: &CooccurrenceNetwork,
        analysis: &VariantAnalysis,
        stats: &CorpusStats,
    ) -> Result<()> {
        let mut summary = serde_json::to_vec_pretty(&analysis.summary)?;
        summary.push(b'\n');
        self.write(format!("summaries/{name}.json"), &summary)?;

        for series in analysis.series.iter() {
            let mut buf = Vec::new();
            series.write_csv(&mut buf)?;
            self.write(format!("series/{name}_{}.csv", series.label), &buf)?;
        }
        let mut buf = Vec::new();
        write_histogram_csv(&sentence_length_histogram_series(stats), &mut buf)?;
        self.write(format!("series/{name}_sentence-lengths.csv"), &buf)?;

        let mut buf = Vec::new();
        net.write_edge_list(&mut buf).map_err(|e| Error::io("<edge list>", e))?;
        self.write(format!("networks/{name}.edgelist"), &buf)
    }

    fn finish(&self, report: &ComparisonReport, series: &[(String, SeriesSet)]) -> Result<()> {
        let mut json = serde_json::to_vec_pretty(report)?;
        json.push(b'\n');
        self.write("report.json", &json)?;
        self.write("report.txt", report.render_text().as_bytes())?;

        let rows = series.iter().flat_map(|(corpus, set)| {
            set.iter().map(move |s| LabelledSeries {
                corpus: corpus.as_str(),
                series: s,
            })
        });
        let mut buf = Vec::new();
        write_long_csv(rows, &mut buf)?;
        self.write("series/all.csv", &buf)
    }
}
