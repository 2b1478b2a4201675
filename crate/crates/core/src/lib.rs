//! Word co-occurrence networks from plain text, shuffled null-model corpora
//! and the network measures used to tell the two apart.
//!
//! The usual flow is [`corpus::ingest`] → [`shuffle::shuffle`] →
//! [`network::CooccurrenceNetwork::build`] → [`metrics::NetworkAnalysis`] →
//! [`distributions`], with [`report::run_experiment`] driving the whole
//! comparison.

#![forbid(unsafe_code)]

pub mod corpus;
pub mod distributions;
pub mod error;
pub mod metrics;
pub mod network;
pub mod report;
pub mod shuffle;

pub use corpus::{Corpus, CorpusStats, Lexicon, Sentence, Token, TokenizeConfig, WordId};
pub use error::{Error, Result, Stage};
pub use metrics::{DistanceEstimator, NetworkAnalysis, NetworkSummary, NodeMetrics};
pub use network::CooccurrenceNetwork;
pub use shuffle::{ShuffleMode, ShuffleSeed};
