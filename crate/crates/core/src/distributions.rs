//! Rank distributions (values sorted in descending order against their
//! rank) and sentence-length histograms, as plot-ready tables.

use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::corpus::CorpusStats;
use crate::error::{Error, Result};
use crate::metrics::NodeMetrics;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    In,
    Out,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::In => "in",
            Direction::Out => "out",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankSeries {
    pub label: String,
    /// `(rank, value)` with ranks 1..=M and non-increasing values.
    pub points: Vec<(usize, f64)>,
}

impl RankSeries {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|&(_, v)| v)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["rank", "value"])?;
        for &(rank, value) in &self.points {
            writer.write_record([rank.to_string(), value.to_string()])?;
        }
        writer.flush().map_err(|e| Error::io("<rank series>", e))?;
        Ok(())
    }
}

/// Sorts `values` in descending order. Equal values keep their input order
/// and receive consecutive ranks.
pub fn rank_series(values: impl IntoIterator<Item = f64>, label: impl Into<String>) -> RankSeries {
    let mut values: Vec<f64> = values.into_iter().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    RankSeries {
        label: label.into(),
        points: values.into_iter().enumerate().map(|(i, v)| (i + 1, v)).collect(),
    }
}

pub fn degree_rank(metrics: &[NodeMetrics], direction: Direction) -> RankSeries {
    let values = metrics.iter().map(|m| match direction {
        Direction::In => m.in_degree as f64,
        Direction::Out => m.out_degree as f64,
    });
    rank_series(values, format!("{direction}-degree"))
}

pub fn strength_rank(metrics: &[NodeMetrics], direction: Direction) -> RankSeries {
    let values = metrics.iter().map(|m| match direction {
        Direction::In => m.in_strength as f64,
        Direction::Out => m.out_strength as f64,
    });
    rank_series(values, format!("{direction}-strength"))
}

/// Nodes without links in `direction` have no selectivity and are left out.
pub fn selectivity_rank(metrics: &[NodeMetrics], direction: Direction) -> RankSeries {
    let values = metrics.iter().filter_map(|m| {
        match direction {
            Direction::In => m.in_selectivity,
            Direction::Out => m.out_selectivity,
        }
        .map(|s| s.value())
    });
    rank_series(values, format!("{direction}-selectivity"))
}

/// `(length, frequency)` rows in ascending length order.
pub fn sentence_length_histogram_series(stats: &CorpusStats) -> Vec<(usize, usize)> {
    stats
        .sentence_length_histogram
        .iter()
        .map(|(&len, &freq)| (len, freq))
        .collect()
}

pub fn write_histogram_csv<W: Write>(rows: &[(usize, usize)], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["length", "frequency"])?;
    for (len, freq) in rows {
        writer.write_record([len.to_string(), freq.to_string()])?;
    }
    writer.flush().map_err(|e| Error::io("<histogram>", e))?;
    Ok(())
}

/// One row group of the long-format table.
pub struct LabelledSeries<'a> {
    pub corpus: &'a str,
    pub series: &'a RankSeries,
}

/// Long format for plotting many curves at once:
/// `corpus_label,series,rank,value`.
pub fn write_long_csv<'a, W: Write>(rows: impl IntoIterator<Item = LabelledSeries<'a>>, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["corpus_label", "series", "rank", "value"])?;
    for LabelledSeries { corpus, series } in rows {
        for &(rank, value) in &series.points {
            writer.write_record([corpus, series.label.as_str(), &rank.to_string(), &value.to_string()])?;
        }
    }
    writer.flush().map_err(|e| Error::io("<long series>", e))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominanceReport {
    /// Number of leading ranks compared.
    pub positions: usize,
    /// Share of compared ranks where the first series is strictly larger.
    pub dominance: f64,
    /// max |a - b| / a over the compared ranks.
    pub max_relative_deviation: f64,
    pub mean_relative_deviation: f64,
}

/// Compares the first ⌈top_fraction · min(|a|, |b|)⌉ ranks of two series.
pub fn series_compare(a: &RankSeries, b: &RankSeries, top_fraction: f64) -> Result<DominanceReport> {
    if !(top_fraction > 0.0 && top_fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "top fraction must lie in (0, 1], got {top_fraction}"
        )));
    }
    check_non_empty(a, b)?;
    let shorter = a.len().min(b.len());
    let positions = ((top_fraction * shorter as f64).ceil() as usize).clamp(1, shorter);
    compare_prefix(a, b, positions)
}

/// Like [`series_compare`] but over a fixed number of leading ranks,
/// capped at the shorter series.
pub fn series_compare_top(a: &RankSeries, b: &RankSeries, ranks: usize) -> Result<DominanceReport> {
    if ranks == 0 {
        return Err(Error::InvalidParameter("rank count must be positive".into()));
    }
    check_non_empty(a, b)?;
    compare_prefix(a, b, ranks.min(a.len()).min(b.len()))
}

fn check_non_empty(a: &RankSeries, b: &RankSeries) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput("cannot compare an empty rank series".into()));
    }
    Ok(())
}

fn compare_prefix(a: &RankSeries, b: &RankSeries, positions: usize) -> Result<DominanceReport> {
    let mut above = 0usize;
    let mut max_dev = 0.0f64;
    let mut sum_dev = 0.0f64;
    for (x, y) in a.values().zip(b.values()).take(positions) {
        if x > y {
            above += 1;
        }
        let dev = if x == y { 0.0 } else { (x - y).abs() / x.abs() };
        max_dev = max_dev.max(dev);
        sum_dev += dev;
    }
    Ok(DominanceReport {
        positions,
        dominance: above as f64 / positions as f64,
        max_relative_deviation: max_dev,
        mean_relative_deviation: sum_dev / positions as f64,
    })
}
