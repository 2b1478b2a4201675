//! Text ingestion: tokenization, sentence segmentation, word interning and
//! corpus statistics.
//!
//! A [`Corpus`] is an ordered list of non-empty sentences over a shared
//! [`Lexicon`]. It is the unit every other stage consumes. Its on-disk form
//! is line oriented: one sentence per line, lexemes separated by a single
//! space.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Sentence delimiters used when none are configured.
pub const DEFAULT_DELIMITERS: [char; 3] = ['.', '!', '?'];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Word(String),
    Delimiter(char),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizeConfig {
    pub delimiters: Vec<char>,
    pub case_fold: bool,
}

impl Default for TokenizeConfig {
    fn default() -> Self {
        Self {
            delimiters: DEFAULT_DELIMITERS.to_vec(),
            case_fold: true,
        }
    }
}

impl TokenizeConfig {
    fn is_delimiter(&self, c: char) -> bool {
        self.delimiters.contains(&c)
    }
}

/// Splits `text` into words and sentence delimiters.
///
/// Alphanumeric runs form words. An apostrophe or hyphen is kept inside a
/// word only when it sits between two word characters (`don't`,
/// `well-known`); every other non-delimiter character (whitespace, commas,
/// quotes, brackets, dashes) separates words and is dropped.
pub fn tokenize(text: &str, config: &TokenizeConfig) -> Vec<Token> {
    let is_word_char = |c: char| c.is_alphanumeric() && !config.is_delimiter(c);

    let mut tokens = Vec::new();
    let mut word = String::new();
    let mut chars = text.chars().peekable();

    let flush = |word: &mut String, tokens: &mut Vec<Token>| {
        if !word.is_empty() {
            tokens.push(Token::Word(std::mem::take(word)));
        }
    };

    while let Some(c) = chars.next() {
        if config.is_delimiter(c) {
            flush(&mut word, &mut tokens);
            tokens.push(Token::Delimiter(c));
        } else if is_word_char(c) {
            if config.case_fold {
                word.extend(c.to_lowercase());
            } else {
                word.push(c);
            }
        } else if matches!(c, '\'' | '\u{2019}' | '-')
            && !word.is_empty()
            && chars.peek().is_some_and(|&next| is_word_char(next))
        {
            word.push(c);
        } else {
            flush(&mut word, &mut tokens);
        }
    }
    flush(&mut word, &mut tokens);
    tokens
}

/// Like [`tokenize`], but starts from raw bytes and reports where decoding
/// failed.
pub fn tokenize_bytes(bytes: &[u8], config: &TokenizeConfig) -> Result<Vec<Token>> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Decode {
        offset: e.valid_up_to(),
    })?;
    Ok(tokenize(text, config))
}

/// Dense identifier of an interned word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct WordId(pub u32);

impl WordId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for WordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Bidirectional lexeme <-> [`WordId`] map. Ids are assigned densely from 0
/// in interning order.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    words: Vec<String>,
    ids: HashMap<String, WordId>,
}

impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.words == other.words
    }
}

impl Eq for Lexicon {}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns every lexeme in order; repeats map to their first id.
    pub fn from_lexemes<I, S>(lexemes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut lexicon = Self::new();
        for lexeme in lexemes {
            lexicon.intern(lexeme.as_ref());
        }
        lexicon
    }

    pub fn intern(&mut self, lexeme: &str) -> WordId {
        if let Some(&id) = self.ids.get(lexeme) {
            return id;
        }
        let id = WordId(u32::try_from(self.words.len()).expect("lexicon exceeds u32 ids"));
        self.words.push(lexeme.to_owned());
        self.ids.insert(lexeme.to_owned(), id);
        id
    }

    pub fn id(&self, lexeme: &str) -> Option<WordId> {
        self.ids.get(lexeme).copied()
    }

    /// Panics if `id` was not issued by this lexicon.
    pub fn lexeme(&self, id: WordId) -> &str {
        &self.words[id.index()]
    }

    pub fn get(&self, id: WordId) -> Option<&str> {
        self.words.get(id.index()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (WordId, &str)> {
        self.words
            .iter()
            .enumerate()
            .map(|(i, w)| (WordId(i as u32), w.as_str()))
    }
}

/// A non-empty run of words between two sentence delimiters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sentence(Vec<WordId>);

impl Sentence {
    pub fn new(words: Vec<WordId>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::InvalidInput("sentences must contain at least one word".into()));
        }
        Ok(Self(words))
    }

    pub fn words(&self) -> &[WordId] {
        &self.0
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }
}

/// What segmentation discarded along the way.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SegmentReport {
    pub sentences: usize,
    pub dropped_empty_segments: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    lexicon: Arc<Lexicon>,
    sentences: Vec<Sentence>,
}

impl Corpus {
    /// Validates both corpus invariants: every id is known to the lexicon
    /// and every lexicon entry occurs somewhere.
    pub fn from_sentences(lexicon: Arc<Lexicon>, sentences: Vec<Sentence>) -> Result<Self> {
        let mut seen = vec![false; lexicon.len()];
        for word in sentences.iter().flat_map(|s| s.words()) {
            match seen.get_mut(word.index()) {
                Some(slot) => *slot = true,
                None => return Err(Error::InvalidInput(format!("word id {word} is not in the lexicon"))),
            }
        }
        if let Some(unused) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidInput(format!(
                "lexicon entry {:?} does not occur in any sentence",
                lexicon.lexeme(WordId(unused as u32))
            )));
        }
        Ok(Self { lexicon, sentences })
    }

    /// Caller guarantees the invariants, e.g. when permuting the words of an
    /// existing corpus.
    pub(crate) fn from_parts_unchecked(lexicon: Arc<Lexicon>, sentences: Vec<Sentence>) -> Self {
        Self { lexicon, sentences }
    }

    /// Builds a corpus from lists of lexemes. Empty lists are skipped.
    pub fn from_word_lists<I, S, W>(sentences: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = W>,
        W: AsRef<str>,
    {
        let mut lexicon = Lexicon::new();
        let sentences = sentences
            .into_iter()
            .filter_map(|s| {
                let words: Vec<WordId> = s.into_iter().map(|w| lexicon.intern(w.as_ref())).collect();
                Sentence::new(words).ok()
            })
            .collect();
        Self {
            lexicon: Arc::new(lexicon),
            sentences,
        }
    }

    /// Reads the line-oriented corpus format: each non-blank line is a
    /// sentence, lexemes separated by whitespace.
    pub fn parse_lines(text: &str) -> Self {
        Self::from_word_lists(text.lines().map(str::split_whitespace))
    }

    pub fn write_lines<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for sentence in &self.sentences {
            let mut first = true;
            for &word in sentence.words() {
                if !first {
                    out.write_all(b" ")?;
                }
                out.write_all(self.lexicon.lexeme(word).as_bytes())?;
                first = false;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_lines(&self) -> String {
        let mut buf = Vec::new();
        self.write_lines(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("lexemes are UTF-8")
    }

    pub fn lexicon(&self) -> &Arc<Lexicon> {
        &self.lexicon
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn sentence_count(&self) -> usize {
        self.sentences.len()
    }

    pub fn word_count(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }

    pub fn sentence_lengths(&self) -> Vec<usize> {
        self.sentences.iter().map(Sentence::len).collect()
    }

    /// Every word occurrence in text order.
    pub fn words(&self) -> impl Iterator<Item = WordId> + '_ {
        self.sentences.iter().flat_map(|s| s.words().iter().copied())
    }

    pub fn stats(&self) -> CorpusStats {
        let mut histogram = BTreeMap::new();
        let mut seen = vec![false; self.lexicon.len()];
        let mut unique_words = 0;
        for sentence in &self.sentences {
            *histogram.entry(sentence.len()).or_insert(0) += 1;
            for word in sentence.words() {
                if !std::mem::replace(&mut seen[word.index()], true) {
                    unique_words += 1;
                }
            }
        }
        CorpusStats {
            total_words: self.word_count(),
            unique_words,
            sentence_count: self.sentences.len(),
            sentence_length_histogram: histogram,
        }
    }
}

/// Groups the words between delimiters into sentences. The lexicon is built
/// in first-occurrence order.
pub fn segment(tokens: &[Token]) -> Corpus {
    segment_with_report(tokens).0
}

pub fn segment_with_report(tokens: &[Token]) -> (Corpus, SegmentReport) {
    let mut lexicon = Lexicon::new();
    let mut sentences = Vec::new();
    let mut current = Vec::new();
    let mut report = SegmentReport::default();

    for token in tokens {
        match token {
            Token::Word(lexeme) => current.push(lexicon.intern(lexeme)),
            Token::Delimiter(_) => {
                if current.is_empty() {
                    report.dropped_empty_segments += 1;
                } else {
                    sentences.push(Sentence(std::mem::take(&mut current)));
                }
            }
        }
    }
    if !current.is_empty() {
        sentences.push(Sentence(current));
    }
    report.sentences = sentences.len();

    let corpus = Corpus {
        lexicon: Arc::new(lexicon),
        sentences,
    };
    (corpus, report)
}

/// Tokenizes and segments raw bytes in one step.
pub fn ingest(bytes: &[u8], config: &TokenizeConfig) -> Result<(Corpus, SegmentReport)> {
    let tokens = tokenize_bytes(bytes, config)?;
    Ok(segment_with_report(&tokens))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusStats {
    pub total_words: usize,
    pub unique_words: usize,
    pub sentence_count: usize,
    #[serde(rename = "histogram", serialize_with = "histogram_pairs")]
    pub sentence_length_histogram: BTreeMap<usize, usize>,
}

fn histogram_pairs<S: Serializer>(
    histogram: &BTreeMap<usize, usize>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_seq(histogram.iter().map(|(&len, &freq)| [len, freq]))
}
