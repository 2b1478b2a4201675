//! Directed weighted word co-occurrence networks.
//!
//! Nodes are the words that take part in at least one link. An edge
//! `a -> b` carries the number of times `b` followed `a` within the
//! co-occurrence window inside one sentence. Links never cross sentence
//! boundaries, so one-word sentences contribute nothing.

use std::collections::HashMap;
use std::io::Write;
use std::sync::Arc;

use crate::corpus::{Corpus, Lexicon, WordId};
use crate::error::{Error, Result};

pub const DEFAULT_WINDOW: usize = 1;

const NO_NODE: u32 = u32::MAX;

/// Compressed sparse rows: neighbors of node `i` are
/// `targets[offsets[i]..offsets[i + 1]]`, sorted by node index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<u64>,
}

impl Adjacency {
    /// `edges` must be sorted by (row, column) with no duplicates.
    fn from_sorted(rows: usize, edges: impl Iterator<Item = (u32, u32, u64)>) -> Self {
        let mut offsets = vec![0usize; rows + 1];
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        for (row, col, w) in edges {
            offsets[row as usize + 1] += 1;
            targets.push(col);
            weights.push(w);
        }
        for i in 0..rows {
            offsets[i + 1] += offsets[i];
        }
        Self {
            offsets,
            targets,
            weights,
        }
    }

    #[inline]
    pub(crate) fn row(&self, i: usize) -> (&[u32], &[u64]) {
        let range = self.offsets[i]..self.offsets[i + 1];
        (&self.targets[range.clone()], &self.weights[range])
    }

    #[inline]
    pub(crate) fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }
}

#[derive(Debug, Clone)]
pub struct CooccurrenceNetwork {
    lexicon: Arc<Lexicon>,
    window: usize,
    /// Node index -> word, ascending by word id.
    nodes: Vec<WordId>,
    /// Word id -> node index, `NO_NODE` for words without links.
    index: Vec<u32>,
    out: Adjacency,
    inc: Adjacency,
}

impl PartialEq for CooccurrenceNetwork {
    fn eq(&self, other: &Self) -> bool {
        self.lexicon == other.lexicon
            && self.window == other.window
            && self.nodes == other.nodes
            && self.out == other.out
    }
}

impl CooccurrenceNetwork {
    /// Links each word to the next `window` words of its sentence.
    pub fn build(corpus: &Corpus, window: usize) -> Result<Self> {
        if window == 0 {
            return Err(Error::InvalidParameter(
                "co-occurrence window must be at least 1".into(),
            ));
        }
        let mut counts: HashMap<(WordId, WordId), u64> = HashMap::new();
        for sentence in corpus.sentences() {
            let words = sentence.words();
            for (p, &source) in words.iter().enumerate() {
                for &target in words.iter().skip(p + 1).take(window) {
                    *counts.entry((source, target)).or_insert(0) += 1;
                }
            }
        }
        Ok(Self::from_counts(corpus.lexicon().clone(), window, counts))
    }

    /// Builds a network from explicit weighted edges. Repeated pairs are
    /// merged by summing their weights.
    pub fn from_weighted_edges<I>(lexicon: Arc<Lexicon>, window: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (WordId, WordId, u64)>,
    {
        if window == 0 {
            return Err(Error::InvalidParameter(
                "co-occurrence window must be at least 1".into(),
            ));
        }
        let mut counts: HashMap<(WordId, WordId), u64> = HashMap::new();
        for (a, b, w) in edges {
            if w == 0 {
                return Err(Error::InvalidInput(format!("edge {a} -> {b} has zero weight")));
            }
            for id in [a, b] {
                if lexicon.get(id).is_none() {
                    return Err(Error::InvalidInput(format!("word id {id} is not in the lexicon")));
                }
            }
            *counts.entry((a, b)).or_insert(0) += w;
        }
        Ok(Self::from_counts(lexicon, window, counts))
    }

    fn from_counts(lexicon: Arc<Lexicon>, window: usize, counts: HashMap<(WordId, WordId), u64>) -> Self {
        let mut index = vec![NO_NODE; lexicon.len()];
        for &(a, b) in counts.keys() {
            index[a.index()] = 0;
            index[b.index()] = 0;
        }
        let mut nodes = Vec::new();
        for (id, slot) in index.iter_mut().enumerate() {
            if *slot != NO_NODE {
                *slot = nodes.len() as u32;
                nodes.push(WordId(id as u32));
            }
        }

        let mut edges: Vec<(u32, u32, u64)> = counts
            .into_iter()
            .map(|((a, b), w)| (index[a.index()], index[b.index()], w))
            .collect();
        edges.sort_unstable();
        let out = Adjacency::from_sorted(nodes.len(), edges.iter().copied());

        edges.sort_unstable_by_key(|&(a, b, _)| (b, a));
        let inc = Adjacency::from_sorted(nodes.len(), edges.iter().map(|&(a, b, w)| (b, a, w)));

        Self {
            lexicon,
            window,
            nodes,
            index,
            out,
            inc,
        }
    }

    pub fn lexicon(&self) -> &Arc<Lexicon> {
        &self.lexicon
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// N
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// K, the number of distinct directed links.
    pub fn edge_count(&self) -> usize {
        self.out.targets.len()
    }

    pub fn total_weight(&self) -> u64 {
        self.out.weights.iter().sum()
    }

    pub fn max_weight(&self) -> Option<u64> {
        self.out.weights.iter().copied().max()
    }

    /// Nodes in ascending word-id order.
    pub fn nodes(&self) -> &[WordId] {
        &self.nodes
    }

    pub fn contains(&self, word: WordId) -> bool {
        self.node_index(word).is_some()
    }

    pub fn node_index(&self, word: WordId) -> Option<usize> {
        match self.index.get(word.index()) {
            Some(&ix) if ix != NO_NODE => Some(ix as usize),
            _ => None,
        }
    }

    pub fn lexeme(&self, word: WordId) -> &str {
        self.lexicon.lexeme(word)
    }

    pub fn out_edges(&self, word: WordId) -> impl Iterator<Item = (WordId, u64)> + '_ {
        self.neighbors(&self.out, word)
    }

    pub fn in_edges(&self, word: WordId) -> impl Iterator<Item = (WordId, u64)> + '_ {
        self.neighbors(&self.inc, word)
    }

    fn neighbors<'a>(&'a self, adj: &'a Adjacency, word: WordId) -> impl Iterator<Item = (WordId, u64)> + 'a {
        let (targets, weights) = match self.node_index(word) {
            Some(i) => adj.row(i),
            None => (&[][..], &[][..]),
        };
        targets.iter().zip(weights).map(|(&t, &w)| (self.nodes[t as usize], w))
    }

    pub fn weight(&self, source: WordId, target: WordId) -> Option<u64> {
        let (s, t) = (self.node_index(source)?, self.node_index(target)? as u32);
        let (targets, weights) = self.out.row(s);
        targets.binary_search(&t).ok().map(|pos| weights[pos])
    }

    /// All edges ordered by (source id, target id).
    pub fn edges(&self) -> impl Iterator<Item = (WordId, WordId, u64)> + '_ {
        (0..self.nodes.len()).flat_map(move |i| {
            let (targets, weights) = self.out.row(i);
            targets
                .iter()
                .zip(weights)
                .map(move |(&t, &w)| (self.nodes[i], self.nodes[t as usize], w))
        })
    }

    pub(crate) fn out_adjacency(&self) -> &Adjacency {
        &self.out
    }

    pub(crate) fn in_adjacency(&self) -> &Adjacency {
        &self.inc
    }

    /// Writes `source<TAB>target<TAB>weight` lines sorted by lexeme pair.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut rows: Vec<(&str, &str, u64)> = self
            .edges()
            .map(|(a, b, w)| (self.lexeme(a), self.lexeme(b), w))
            .collect();
        rows.sort_unstable();
        for (a, b, w) in rows {
            writeln!(out, "{a}\t{b}\t{w}")?;
        }
        Ok(())
    }

    pub fn export_edge_list(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("lexemes are UTF-8")
    }

    /// Graphviz rendering for small networks. Only weights above 1 are
    /// labelled.
    pub fn export_dot(&self) -> String {
        let quote = |s: &str| format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
        let mut dot = String::from("digraph cooccurrence {\n");
        let mut names: Vec<&str> = self.nodes.iter().map(|&w| self.lexeme(w)).collect();
        names.sort_unstable();
        for name in names {
            dot.push_str(&format!("  {};\n", quote(name)));
        }
        let mut rows: Vec<(&str, &str, u64)> = self
            .edges()
            .map(|(a, b, w)| (self.lexeme(a), self.lexeme(b), w))
            .collect();
        rows.sort_unstable();
        for (a, b, w) in rows {
            if w > 1 {
                dot.push_str(&format!("  {} -> {} [label={w}];\n", quote(a), quote(b)));
            } else {
                dot.push_str(&format!("  {} -> {};\n", quote(a), quote(b)));
            }
        }
        dot.push_str("}\n");
        dot
    }
}
