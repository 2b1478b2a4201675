//! Generators and brute-force reference implementations shared by the
//! integration tests. Nothing here calls into the library's metric code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::Arc;

use lexnet::{Corpus, Lexicon, WordId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Edge = (WordId, WordId, u64);

pub fn pride_and_prejudice() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/pride-and-prejudice.txt")
}

/// Random directed graph with 2..=max_nodes words. Every ordered pair,
/// loops included, gets an edge with one probability drawn from [0.1, 0.5],
/// with weight 1..=5.
pub fn random_digraph(seed: u64, max_nodes: usize) -> (Arc<Lexicon>, Vec<Edge>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_nodes);
    let p = rng.gen_range(0.1..=0.5);
    let lexicon = Arc::new(Lexicon::from_lexemes((0..n).map(|i| format!("w{i}"))));
    let mut edges = Vec::new();
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            if rng.gen_bool(p) {
                edges.push((WordId(a), WordId(b), rng.gen_range(1..=5)));
            }
        }
    }
    if edges.is_empty() {
        edges.push((WordId(0), WordId(1), 1));
    }
    (lexicon, edges)
}

/// Small corpus over a vocabulary of at most 12 words.
pub fn random_corpus(rng: &mut ChaCha8Rng) -> Corpus {
    let vocab = rng.gen_range(1..=12);
    let sentences = rng.gen_range(1..=15);
    let lists: Vec<Vec<String>> = (0..sentences)
        .map(|_| {
            let len = rng.gen_range(1..=8);
            (0..len).map(|_| format!("w{}", rng.gen_range(0..vocab))).collect()
        })
        .collect();
    Corpus::from_word_lists(lists)
}

pub fn lexeme_counts(corpus: &Corpus) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for word in corpus.words() {
        *counts.entry(corpus.lexicon().lexeme(word).to_owned()).or_insert(0) += 1;
    }
    counts
}

/// Every composition of `total` into `parts` positive integers.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Window-n co-occurrence counts straight from the definition.
pub fn cooccurrence_counts(corpus: &Corpus, window: usize) -> BTreeMap<(WordId, WordId), u64> {
    let mut counts = BTreeMap::new();
    for sentence in corpus.sentences() {
        let words = sentence.words();
        for p in 0..words.len() {
            for q in p + 1..=(p + window).min(words.len() - 1) {
                *counts.entry((words[p], words[q])).or_insert(0) += 1;
            }
        }
    }
    counts
}

const INF: u32 = u32::MAX;

/// Reference measures computed from a plain edge list with maps and
/// Floyd–Warshall.
pub struct Oracle {
    pub nodes: Vec<WordId>,
    directed: BTreeMap<(WordId, WordId), u64>,
    undirected: BTreeMap<(WordId, WordId), u64>,
}

impl Oracle {
    pub fn new(edges: &[Edge]) -> Self {
        let mut directed = BTreeMap::new();
        for &(a, b, w) in edges {
            *directed.entry((a, b)).or_insert(0) += w;
        }
        let mut undirected = BTreeMap::new();
        let mut nodes = BTreeSet::new();
        for (&(a, b), &w) in &directed {
            nodes.insert(a);
            nodes.insert(b);
            if a != b {
                *undirected.entry((a.min(b), a.max(b))).or_insert(0) += w;
            }
        }
        Self {
            nodes: nodes.into_iter().collect(),
            directed,
            undirected,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.directed.len()
    }

    pub fn total_weight(&self) -> u64 {
        self.directed.values().sum()
    }

    pub fn out_degree(&self, v: WordId) -> u64 {
        self.directed.keys().filter(|&&(a, _)| a == v).count() as u64
    }

    pub fn in_degree(&self, v: WordId) -> u64 {
        self.directed.keys().filter(|&&(_, b)| b == v).count() as u64
    }

    pub fn out_strength(&self, v: WordId) -> u64 {
        self.directed.iter().filter(|(&(a, _), _)| a == v).map(|(_, w)| w).sum()
    }

    pub fn in_strength(&self, v: WordId) -> u64 {
        self.directed.iter().filter(|(&(_, b), _)| b == v).map(|(_, w)| w).sum()
    }

    fn uw(&self, a: WordId, b: WordId) -> Option<u64> {
        self.undirected.get(&(a.min(b), a.max(b))).copied()
    }

    fn neighbors(&self, v: WordId) -> Vec<WordId> {
        self.nodes
            .iter()
            .copied()
            .filter(|&u| u != v && self.uw(u, v).is_some())
            .collect()
    }

    /// Largest weakly connected component: most nodes, then most directed
    /// edges (loops included), then the smallest word id.
    pub fn largest_component(&self) -> Vec<WordId> {
        let mut parent: BTreeMap<WordId, WordId> = self.nodes.iter().map(|&v| (v, v)).collect();
        fn find(parent: &mut BTreeMap<WordId, WordId>, v: WordId) -> WordId {
            let p = parent[&v];
            if p == v {
                return v;
            }
            let root = find(parent, p);
            parent.insert(v, root);
            root
        }
        for &(a, b) in self.undirected.keys() {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent.insert(ra.max(rb), ra.min(rb));
            }
        }
        let mut groups: BTreeMap<WordId, Vec<WordId>> = BTreeMap::new();
        for &v in &self.nodes {
            groups.entry(find(&mut parent, v)).or_default().push(v);
        }
        groups
            .into_values()
            .max_by(|x, y| {
                let edges = |g: &Vec<WordId>| self.directed.keys().filter(|(a, _)| g.contains(a)).count();
                x.len()
                    .cmp(&y.len())
                    .then(edges(x).cmp(&edges(y)))
                    .then(y[0].cmp(&x[0]))
            })
            .unwrap_or_default()
    }

    /// Hop distances between members of the largest component.
    pub fn all_pairs(&self) -> (Vec<WordId>, Vec<Vec<u32>>) {
        let members = self.largest_component();
        let n = members.len();
        let mut d = vec![vec![INF; n]; n];
        for i in 0..n {
            d[i][i] = 0;
            for j in 0..n {
                if i != j && self.uw(members[i], members[j]).is_some() {
                    d[i][j] = 1;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] != INF && d[k][j] != INF && d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        (members, d)
    }

    /// (Σ d_ij over ordered pairs, N(N-1), max d_ij, max_i Σ_j d_ij)
    pub fn hop_totals(&self) -> (u64, u64, u32, u64) {
        let (members, d) = self.all_pairs();
        let n = members.len() as u64;
        let rows: Vec<u64> = d.iter().map(|r| r.iter().map(|&x| x as u64).sum()).collect();
        let diameter = d.iter().flatten().copied().max().unwrap_or(0);
        (
            rows.iter().sum(),
            n * n.saturating_sub(1),
            diameter,
            rows.into_iter().max().unwrap_or(0),
        )
    }

    /// Weighted clustering evaluated term by term over ordered neighbor pairs.
    pub fn clustering(&self, v: WordId) -> f64 {
        let nb = self.neighbors(v);
        let k = nb.len();
        if k < 2 {
            return 0.0;
        }
        let max = *self.undirected.values().max().unwrap() as f64;
        let mut sum = 0.0;
        for &j in &nb {
            for &m in &nb {
                if j == m {
                    continue;
                }
                if let Some(w_jm) = self.uw(j, m) {
                    let w_ij = self.uw(v, j).unwrap() as f64 / max;
                    let w_im = self.uw(v, m).unwrap() as f64 / max;
                    sum += (w_ij * w_im * (w_jm as f64 / max)).powf(1.0 / 3.0);
                }
            }
        }
        sum / (k * (k - 1)) as f64
    }

    /// Unweighted clustering: closed triangles over possible ones.
    pub fn triangle_clustering(&self, v: WordId) -> f64 {
        let nb = self.neighbors(v);
        let k = nb.len();
        if k < 2 {
            return 0.0;
        }
        let mut triangles = 0usize;
        for (x, &j) in nb.iter().enumerate() {
            for &m in &nb[x + 1..] {
                if self.uw(j, m).is_some() {
                    triangles += 1;
                }
            }
        }
        2.0 * triangles as f64 / (k * (k - 1)) as f64
    }

    pub fn average_clustering(&self) -> f64 {
        let members = self.largest_component();
        members.iter().map(|&v| self.clustering(v)).sum::<f64>() / members.len() as f64
    }
}

/// Builds the library network for `edges` and lists every disagreement
/// with [`Oracle`]: node and edge counts, per-node degrees, strengths,
/// selectivities and clustering, and exact L, D and max d_i.
pub fn oracle_mismatches(lexicon: Arc<Lexicon>, edges: &[Edge]) -> Vec<String> {
    use lexnet::metrics::DistanceEstimator;
    use lexnet::{CooccurrenceNetwork, NetworkAnalysis};

    let oracle = Oracle::new(edges);
    let net = match CooccurrenceNetwork::from_weighted_edges(lexicon, 1, edges.iter().copied()) {
        Ok(net) => net,
        Err(e) => return vec![format!("build failed: {e}")],
    };
    let mut bad = Vec::new();
    let mut expect = |ok: bool, what: String| {
        if !ok {
            bad.push(what);
        }
    };
    expect(net.nodes() == oracle.nodes.as_slice(), "node set".into());
    expect(
        net.edge_count() == oracle.edge_count(),
        format!("K {} vs {}", net.edge_count(), oracle.edge_count()),
    );
    expect(net.total_weight() == oracle.total_weight(), "total weight".into());

    let analysis = NetworkAnalysis::new(&net);
    for m in analysis.all_node_metrics() {
        let v = m.word;
        let (k_in, k_out) = (oracle.in_degree(v), oracle.out_degree(v));
        let (s_in, s_out) = (oracle.in_strength(v), oracle.out_strength(v));
        expect(
            (m.in_degree as u64, m.out_degree as u64, m.in_strength, m.out_strength) == (k_in, k_out, s_in, s_out),
            format!("degree/strength of {v}"),
        );
        // e = s / k compared as fractions by cross-multiplication.
        for (sel, s, k, dir) in [
            (m.in_selectivity, s_in, k_in, "in"),
            (m.out_selectivity, s_out, k_out, "out"),
        ] {
            let ok = match sel {
                None => k == 0,
                Some(e) => k > 0 && e.strength * k == s * e.degree,
            };
            expect(ok, format!("{dir}-selectivity of {v}"));
        }
        let c = oracle.clustering(v);
        expect(
            (m.clustering - c).abs() <= 1e-12,
            format!("c of {v}: {} vs {c}", m.clustering),
        );
    }

    let (hops, pairs, diameter, max_row) = oracle.hop_totals();
    let distances = analysis.distances(DistanceEstimator::Exact);
    if pairs == 0 {
        expect(
            distances.average_path_length().is_err(),
            "L defined on a single node".into(),
        );
        return bad;
    }
    let n = oracle.largest_component().len() as f64;
    expect(
        (distances.total_hops(), distances.ordered_pairs()) == (hops, pairs),
        format!(
            "hop sum {}/{} vs {hops}/{pairs}",
            distances.total_hops(),
            distances.ordered_pairs()
        ),
    );
    expect(
        distances.average_path_length().ok() == Some(hops as f64 / pairs as f64),
        "L".into(),
    );
    expect(distances.diameter().ok() == Some(diameter), format!("D vs {diameter}"));
    expect(
        distances.max_average_distance().ok() == Some(max_row as f64 / n),
        "max d_i".into(),
    );
    match analysis.average_clustering() {
        Ok(c) => expect((c - oracle.average_clustering()).abs() <= 1e-12, "C".into()),
        Err(e) => expect(false, format!("C: {e}")),
    }
    bad
}
