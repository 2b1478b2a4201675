//! Null-model corpora built by permuting word order.
//!
//! Every mode keeps the word-occurrence multiset and the lexicon intact and
//! is a pure function of `(corpus, seed)`. Randomness comes from ChaCha8
//! seeded with the 64-bit seed, which gives the same stream on every
//! platform.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::{Corpus, Sentence, WordId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShuffleMode {
    /// All words permuted across the text; sentence lengths and order fixed.
    SentenceLevel,
    /// All words permuted and sentence boundaries redrawn; only the sentence
    /// count is kept.
    TextLevel,
    /// Words permuted only inside their own sentence.
    WithinSentence,
}

impl ShuffleMode {
    pub fn name(self) -> &'static str {
        match self {
            ShuffleMode::SentenceLevel => "sentence",
            ShuffleMode::TextLevel => "text",
            ShuffleMode::WithinSentence => "within-sentence",
        }
    }
}

impl fmt::Display for ShuffleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ShuffleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sentence" => Ok(ShuffleMode::SentenceLevel),
            "text" => Ok(ShuffleMode::TextLevel),
            "within-sentence" => Ok(ShuffleMode::WithinSentence),
            other => Err(Error::InvalidParameter(format!(
                "unknown shuffle mode {other:?} (expected sentence, text or within-sentence)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ShuffleSeed(pub u64);

impl ShuffleSeed {
    fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

pub fn shuffle(corpus: &Corpus, mode: ShuffleMode, seed: ShuffleSeed) -> Result<Corpus> {
    match mode {
        ShuffleMode::SentenceLevel => Ok(shuffle_sentence_level(corpus, seed)),
        ShuffleMode::TextLevel => shuffle_text_level(corpus, seed),
        ShuffleMode::WithinSentence => Ok(shuffle_within_sentence(corpus, seed)),
    }
}

/// Permutes every word occurrence uniformly and deals the result back into
/// the original sentence slots, so sentence `i` keeps its length.
pub fn shuffle_sentence_level(corpus: &Corpus, seed: ShuffleSeed) -> Corpus {
    let mut rng = seed.rng();
    let mut words: Vec<WordId> = corpus.words().collect();
    words.shuffle(&mut rng);
    let sentences = deal(&words, corpus.sentence_lengths());
    Corpus::from_parts_unchecked(corpus.lexicon().clone(), sentences)
}

/// Permutes every word occurrence uniformly and cuts the sequence into the
/// original number of sentences at uniformly chosen boundaries, i.e. a
/// uniform random composition of the word count into positive parts.
pub fn shuffle_text_level(corpus: &Corpus, seed: ShuffleSeed) -> Result<Corpus> {
    let total = corpus.word_count();
    let count = corpus.sentence_count();
    let mut rng = seed.rng();
    let lengths = random_composition(total, count, &mut rng)?;
    let mut words: Vec<WordId> = corpus.words().collect();
    words.shuffle(&mut rng);
    let sentences = deal(&words, lengths);
    Ok(Corpus::from_parts_unchecked(corpus.lexicon().clone(), sentences))
}

pub fn shuffle_within_sentence(corpus: &Corpus, seed: ShuffleSeed) -> Corpus {
    let mut rng = seed.rng();
    let sentences = corpus
        .sentences()
        .iter()
        .map(|s| {
            let mut words = s.words().to_vec();
            words.shuffle(&mut rng);
            Sentence::new(words).expect("permutation keeps the sentence non-empty")
        })
        .collect();
    Corpus::from_parts_unchecked(corpus.lexicon().clone(), sentences)
}

/// Draws `parts` positive integers summing to `total`, uniformly over all
/// such ordered compositions: `parts - 1` distinct cut points are sampled
/// from the `total - 1` gaps between consecutive words.
pub fn random_composition(total: usize, parts: usize, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    if parts == 0 {
        return if total == 0 {
            Ok(Vec::new())
        } else {
            Err(Error::InfeasibleComposition {
                words: total,
                sentences: parts,
            })
        };
    }
    if total < parts {
        return Err(Error::InfeasibleComposition {
            words: total,
            sentences: parts,
        });
    }
    let mut cuts: Vec<usize> = index::sample(rng, total - 1, parts - 1)
        .into_iter()
        .map(|gap| gap + 1)
        .collect();
    cuts.sort_unstable();
    cuts.push(total);

    let mut lengths = Vec::with_capacity(parts);
    let mut start = 0;
    for cut in cuts {
        lengths.push(cut - start);
        start = cut;
    }
    Ok(lengths)
}

fn deal(words: &[WordId], lengths: Vec<usize>) -> Vec<Sentence> {
    let mut rest = words;
    let sentences = lengths
        .into_iter()
        .map(|len| {
            let (head, tail) = rest.split_at(len);
            rest = tail;
            Sentence::new(head.to_vec()).expect("sentence lengths are positive")
        })
        .collect();
    debug_assert!(rest.is_empty());
    sentences
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreservationCheck {
    pub name: &'static str,
    pub passed: bool,
    /// A few differing entries when the check fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diff_sample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    pub mode: ShuffleMode,
    pub checks: Vec<PreservationCheck>,
}

impl PreservationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&PreservationCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

const DIFF_SAMPLE_LEN: usize = 5;

/// Compares a shuffled corpus against its source by lexeme, so the two
/// corpora need not share a lexicon.
pub fn preservation_check(original: &Corpus, shuffled: &Corpus, mode: ShuffleMode) -> PreservationReport {
    let counts_a = occurrence_counts(original);
    let counts_b = occurrence_counts(shuffled);

    let mut multiset_diff = Vec::new();
    for key in counts_a
        .keys()
        .chain(counts_b.keys().filter(|k| !counts_a.contains_key(*k)))
    {
        let (a, b) = (
            counts_a.get(key).copied().unwrap_or(0),
            counts_b.get(key).copied().unwrap_or(0),
        );
        if a != b {
            multiset_diff.push(format!("{key}: {a} vs {b}"));
        }
    }

    let vocab_diff: Vec<String> = counts_a
        .keys()
        .filter(|k| !counts_b.contains_key(*k))
        .map(|k| format!("-{k}"))
        .chain(
            counts_b
                .keys()
                .filter(|k| !counts_a.contains_key(*k))
                .map(|k| format!("+{k}")),
        )
        .collect();

    let mut checks = vec![
        make_check("word_multiset", multiset_diff),
        make_check("vocabulary", vocab_diff),
        make_check(
            "sentence_count",
            mismatch(original.sentence_count(), shuffled.sentence_count()),
        ),
    ];

    if matches!(mode, ShuffleMode::SentenceLevel | ShuffleMode::WithinSentence) {
        let a = original.sentence_lengths();
        let b = shuffled.sentence_lengths();
        let mut diff: Vec<String> = a
            .iter()
            .zip(&b)
            .enumerate()
            .filter(|(_, (x, y))| x != y)
            .map(|(i, (x, y))| format!("sentence {i}: {x} vs {y}"))
            .collect();
        if a.len() != b.len() {
            diff.push(format!("{} vs {} sentences", a.len(), b.len()));
        }
        checks.push(make_check("sentence_lengths", diff));
    }

    PreservationReport { mode, checks }
}

fn occurrence_counts(corpus: &Corpus) -> BTreeMap<&str, usize> {
    let lexicon = corpus.lexicon();
    let mut counts = BTreeMap::new();
    for word in corpus.words() {
        *counts.entry(lexicon.lexeme(word)).or_insert(0) += 1;
    }
    counts
}

fn mismatch(a: usize, b: usize) -> Vec<String> {
    if a == b {
        Vec::new()
    } else {
        vec![format!("{a} vs {b}")]
    }
}

fn make_check(name: &'static str, diffs: Vec<String>) -> PreservationCheck {
    let passed = diffs.is_empty();
    let diff_sample = (!passed).then(|| {
        let mut sample = diffs[..diffs.len().min(DIFF_SAMPLE_LEN)].join("; ");
        if diffs.len() > DIFF_SAMPLE_LEN {
            sample.push_str(&format!("; ... {} more", diffs.len() - DIFF_SAMPLE_LEN));
        }
        sample
    });
    PreservationCheck {
        name,
        passed,
        diff_sample,
    }
}
