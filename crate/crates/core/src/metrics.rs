//! Network measures: components, hop distances, weighted clustering,
//! degree, strength and selectivity.
//!
//! Distance and clustering measures work on the undirected projection of
//! the network, where the weights of `a -> b` and `b -> a` are summed and
//! self-loops are dropped. Averaged measures are taken over the largest
//! weakly connected component.

use std::fmt;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::corpus::WordId;
use crate::error::{Error, Result};
use crate::network::CooccurrenceNetwork;

/// Default number of BFS sources for the sampled estimator.
pub const DEFAULT_SAMPLE_SOURCES: usize = 1000;

/// Undirected, loop-free view of a network with antiparallel weights summed.
#[derive(Debug, Clone)]
pub struct UndirectedProjection {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    weights: Vec<u64>,
}

impl UndirectedProjection {
    pub fn new(net: &CooccurrenceNetwork) -> Self {
        let n = net.node_count();
        let (out, inc) = (net.out_adjacency(), net.in_adjacency());
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for i in 0..n {
            merge_rows(i as u32, out.row(i), inc.row(i), &mut neighbors, &mut weights);
            offsets.push(neighbors.len());
        }
        Self {
            offsets,
            neighbors,
            weights,
        }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    fn row(&self, i: usize) -> (&[u32], &[u64]) {
        let range = self.offsets[i]..self.offsets[i + 1];
        (&self.neighbors[range.clone()], &self.weights[range])
    }

    /// Number of distinct neighbors of node index `i`, ignoring direction.
    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn max_weight(&self) -> Option<u64> {
        self.weights.iter().copied().max()
    }
}

/// Merges two sorted neighbor rows, summing shared entries and skipping `me`.
fn merge_rows(me: u32, a: (&[u32], &[u64]), b: (&[u32], &[u64]), nb: &mut Vec<u32>, wt: &mut Vec<u64>) {
    let (mut i, mut j) = (0, 0);
    let ((at, aw), (bt, bw)) = (a, b);
    loop {
        let (node, w) = match (at.get(i), bt.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                (x, aw[i - 1] + bw[j - 1])
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                (x, aw[i - 1])
            }
            (Some(&x), None) => {
                i += 1;
                (x, aw[i - 1])
            }
            (_, Some(&y)) => {
                j += 1;
                (y, bw[j - 1])
            }
            (None, None) => break,
        };
        if node != me {
            nb.push(node);
            wt.push(w);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComponentInfo {
    pub nodes: usize,
    /// Directed edges with both ends in the component.
    pub edges: usize,
    /// Smallest word id in the component.
    pub first: WordId,
}

/// Weakly connected components. Component ids follow the order of each
/// component's smallest word id.
#[derive(Debug, Clone)]
pub struct Components {
    membership: Vec<u32>,
    info: Vec<ComponentInfo>,
    largest: Option<usize>,
}

impl Components {
    fn new(net: &CooccurrenceNetwork, proj: &UndirectedProjection) -> Self {
        let n = proj.node_count();
        let mut membership = vec![u32::MAX; n];
        let mut info = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n {
            if membership[start] != u32::MAX {
                continue;
            }
            let id = info.len() as u32;
            membership[start] = id;
            stack.push(start as u32);
            let mut nodes = 0;
            let mut edges = 0;
            while let Some(u) = stack.pop() {
                nodes += 1;
                edges += net.out_adjacency().degree(u as usize);
                for &v in proj.row(u as usize).0 {
                    if membership[v as usize] == u32::MAX {
                        membership[v as usize] = id;
                        stack.push(v);
                    }
                }
            }
            info.push(ComponentInfo {
                nodes,
                edges,
                first: net.nodes()[start],
            });
        }
        // Ties on size go to the component with more edges, then to the one
        // holding the smallest word id.
        let largest = info
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| {
                a.nodes
                    .cmp(&b.nodes)
                    .then(a.edges.cmp(&b.edges))
                    .then(b.first.cmp(&a.first))
            })
            .map(|(i, _)| i);
        Self {
            membership,
            info,
            largest,
        }
    }

    /// ω
    pub fn count(&self) -> usize {
        self.info.len()
    }

    pub fn info(&self) -> &[ComponentInfo] {
        &self.info
    }

    pub fn largest(&self) -> Option<usize> {
        self.largest
    }

    pub fn largest_info(&self) -> Option<&ComponentInfo> {
        self.largest.map(|i| &self.info[i])
    }

    /// Component id of each node index.
    pub fn membership(&self) -> &[u32] {
        &self.membership
    }

    fn largest_members(&self) -> Vec<u32> {
        match self.largest {
            Some(id) => (0..self.membership.len() as u32)
                .filter(|&i| self.membership[i as usize] == id as u32)
                .collect(),
            None => Vec::new(),
        }
    }
}

/// How all-pairs hop distances are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceEstimator {
    /// One BFS per node of the largest component.
    #[default]
    Exact,
    /// BFS from `sources` uniformly drawn nodes. The path-length estimate
    /// uses only those sources; the diameter additionally takes two
    /// farthest-node sweeps, which can only raise its lower bound.
    Sampled { sources: usize, seed: u64 },
}

impl fmt::Display for DistanceEstimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceEstimator::Exact => f.write_str("exact"),
            DistanceEstimator::Sampled { sources, seed } => write!(f, "sampled({sources} sources, seed {seed})"),
        }
    }
}

impl Serialize for DistanceEstimator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SourceDistances {
    pub node: WordId,
    /// Σ_j d_ij over the component.
    pub hop_sum: u64,
    pub eccentricity: u32,
    pub reached: usize,
}

/// Breadth-first hop distances inside the largest component of the
/// undirected projection.
#[derive(Debug, Clone)]
pub struct DistanceResult {
    component_nodes: usize,
    sources: Vec<SourceDistances>,
    sweeps: Vec<SourceDistances>,
    estimator: DistanceEstimator,
    exact: bool,
}

impl DistanceResult {
    /// N of the component the distances were taken in.
    pub fn component_nodes(&self) -> usize {
        self.component_nodes
    }

    /// Uniformly chosen sources (every node when exact).
    pub fn sources(&self) -> &[SourceDistances] {
        &self.sources
    }

    pub fn estimator(&self) -> DistanceEstimator {
        self.estimator
    }

    /// Whether every node of the component was used as a source.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// d_i = Σ_j d_ij / N, with N the component size.
    pub fn average_distance(&self, word: WordId) -> Option<f64> {
        self.sources
            .iter()
            .chain(&self.sweeps)
            .find(|s| s.node == word)
            .map(|s| s.hop_sum as f64 / self.component_nodes as f64)
    }

    /// Σ d_ij over the ordered pairs visited from the uniform sources.
    pub fn total_hops(&self) -> u64 {
        self.sources.iter().map(|s| s.hop_sum).sum()
    }

    /// Number of ordered pairs `i != j` behind [`Self::total_hops`].
    pub fn ordered_pairs(&self) -> u64 {
        self.sources.len() as u64 * (self.component_nodes as u64).saturating_sub(1)
    }

    /// L = Σ_{i,j} d_ij / (N(N-1)).
    pub fn average_path_length(&self) -> Result<f64> {
        self.require_pairs()?;
        Ok(self.total_hops() as f64 / self.ordered_pairs() as f64)
    }

    /// D, the largest hop distance seen.
    pub fn diameter(&self) -> Result<u32> {
        self.require_pairs()?;
        Ok(self
            .sources
            .iter()
            .chain(&self.sweeps)
            .map(|s| s.eccentricity)
            .max()
            .unwrap_or(0))
    }

    /// max_i d_i: the largest per-node average distance.
    pub fn max_average_distance(&self) -> Result<f64> {
        self.require_pairs()?;
        let max_sum = self.sources.iter().map(|s| s.hop_sum).max().unwrap_or(0);
        Ok(max_sum as f64 / self.component_nodes as f64)
    }

    fn require_pairs(&self) -> Result<()> {
        if self.component_nodes < 2 || self.sources.is_empty() {
            return Err(Error::UndefinedMeasure(format!(
                "path lengths need at least 2 connected nodes, largest component has {}",
                self.component_nodes
            )));
        }
        Ok(())
    }
}

struct Bfs {
    dist: Vec<u32>,
    queue: Vec<u32>,
}

struct BfsOutcome {
    hop_sum: u64,
    eccentricity: u32,
    reached: usize,
    farthest: u32,
}

impl Bfs {
    fn new(n: usize) -> Self {
        Self {
            dist: vec![u32::MAX; n],
            queue: Vec::with_capacity(n),
        }
    }

    fn run(&mut self, proj: &UndirectedProjection, source: u32) -> BfsOutcome {
        self.queue.clear();
        self.queue.push(source);
        self.dist[source as usize] = 0;
        let mut head = 0;
        let mut hop_sum = 0u64;
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            let du = self.dist[u as usize];
            hop_sum += du as u64;
            for &v in proj.row(u as usize).0 {
                let slot = &mut self.dist[v as usize];
                if *slot == u32::MAX {
                    *slot = du + 1;
                    self.queue.push(v);
                }
            }
        }
        let farthest = *self.queue.last().expect("queue holds the source");
        let outcome = BfsOutcome {
            hop_sum,
            eccentricity: self.dist[farthest as usize],
            reached: self.queue.len(),
            farthest,
        };
        for &v in &self.queue {
            self.dist[v as usize] = u32::MAX;
        }
        outcome
    }
}

/// Caches the projection and components so several measures can share them.
pub struct NetworkAnalysis<'a> {
    net: &'a CooccurrenceNetwork,
    projection: UndirectedProjection,
    components: Components,
}

impl<'a> NetworkAnalysis<'a> {
    pub fn new(net: &'a CooccurrenceNetwork) -> Self {
        let projection = UndirectedProjection::new(net);
        let components = Components::new(net, &projection);
        Self {
            net,
            projection,
            components,
        }
    }

    pub fn network(&self) -> &CooccurrenceNetwork {
        self.net
    }

    pub fn projection(&self) -> &UndirectedProjection {
        &self.projection
    }

    pub fn components(&self) -> &Components {
        &self.components
    }

    pub fn distances(&self, estimator: DistanceEstimator) -> DistanceResult {
        let members = self.components.largest_members();
        let n = members.len();
        let (sources, exact) = match estimator {
            DistanceEstimator::Sampled { sources, seed } if sources < n => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut picked: Vec<u32> = index::sample(&mut rng, n, sources)
                    .into_iter()
                    .map(|i| members[i])
                    .collect();
                picked.sort_unstable();
                (picked, false)
            }
            _ => (members, true),
        };

        let outcomes: Vec<(u32, BfsOutcome)> = sources
            .par_iter()
            .map_init(
                || Bfs::new(self.projection.node_count()),
                |bfs, &s| (s, bfs.run(&self.projection, s)),
            )
            .collect();

        let mut sweeps = Vec::new();
        if !exact {
            if let Some((_, start)) = outcomes
                .iter()
                .max_by_key(|(s, o)| (o.eccentricity, std::cmp::Reverse(*s)))
            {
                let mut bfs = Bfs::new(self.projection.node_count());
                let mut next = start.farthest;
                for _ in 0..2 {
                    let outcome = bfs.run(&self.projection, next);
                    let following = outcome.farthest;
                    sweeps.push(self.source_distances(next, &outcome));
                    next = following;
                }
            }
        }

        DistanceResult {
            component_nodes: n,
            sources: outcomes.iter().map(|(s, o)| self.source_distances(*s, o)).collect(),
            sweeps,
            estimator,
            exact,
        }
    }

    fn source_distances(&self, node: u32, o: &BfsOutcome) -> SourceDistances {
        SourceDistances {
            node: self.net.nodes()[node as usize],
            hop_sum: o.hop_sum,
            eccentricity: o.eccentricity,
            reached: o.reached,
        }
    }

    /// Hop distance from `source` to every node it reaches, in BFS order.
    pub fn hop_distances(&self, source: WordId) -> Result<Vec<(WordId, u32)>> {
        let s = self.node_ix(source)?;
        let mut dist = vec![u32::MAX; self.projection.node_count()];
        let mut order = vec![s as u32];
        dist[s] = 0;
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &v in self.projection.row(u as usize).0 {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = dist[u as usize] + 1;
                    order.push(v);
                }
            }
        }
        Ok(order
            .into_iter()
            .map(|v| (self.net.nodes()[v as usize], dist[v as usize]))
            .collect())
    }

    /// Weighted clustering of every node, indexed like
    /// [`CooccurrenceNetwork::nodes`].
    ///
    /// c_i = 1/(k_i(k_i-1)) Σ_{j,k} (ŵ_ij ŵ_ik ŵ_jk)^(1/3) over ordered
    /// neighbor pairs, with ŵ = w / max(w) and c_i = 0 when k_i < 2.
    pub fn clustering_all(&self) -> Vec<f64> {
        let proj = &self.projection;
        let Some(max) = proj.max_weight() else {
            return vec![0.0; proj.node_count()];
        };
        let max = max as f64;
        (0..proj.node_count())
            .into_par_iter()
            .map_init(
                || vec![0.0f64; proj.node_count()],
                |marks, i| clustering_at(proj, i, max, marks),
            )
            .collect()
    }

    pub fn clustering(&self, word: WordId) -> Result<f64> {
        let i = self.node_ix(word)?;
        let proj = &self.projection;
        Ok(match proj.max_weight() {
            Some(max) => clustering_at(proj, i, max as f64, &mut vec![0.0; proj.node_count()]),
            None => 0.0,
        })
    }

    /// C, the mean clustering over the largest component.
    pub fn average_clustering(&self) -> Result<f64> {
        let members = self.components.largest_members();
        if members.is_empty() {
            return Err(Error::UndefinedMeasure("average clustering of an empty network".into()));
        }
        let all = self.clustering_all();
        Ok(mean_over(&all, &members))
    }

    pub fn node_metrics(&self, word: WordId) -> Result<NodeMetrics> {
        let i = self.node_ix(word)?;
        let clustering = self.clustering(word)?;
        Ok(self.metrics_at(i, clustering))
    }

    /// Metrics for every node in ascending word-id order.
    pub fn all_node_metrics(&self) -> Vec<NodeMetrics> {
        self.clustering_all()
            .into_iter()
            .enumerate()
            .map(|(i, c)| self.metrics_at(i, c))
            .collect()
    }

    fn metrics_at(&self, i: usize, clustering: f64) -> NodeMetrics {
        let (out, inc) = (self.net.out_adjacency(), self.net.in_adjacency());
        let out_strength: u64 = out.row(i).1.iter().sum();
        let in_strength: u64 = inc.row(i).1.iter().sum();
        let (out_degree, in_degree) = (out.degree(i), inc.degree(i));
        NodeMetrics {
            word: self.net.nodes()[i],
            in_degree,
            out_degree,
            in_strength,
            out_strength,
            in_selectivity: Selectivity::new(in_strength, in_degree),
            out_selectivity: Selectivity::new(out_strength, out_degree),
            clustering,
        }
    }

    pub fn summarize(&self, estimator: DistanceEstimator) -> Result<NetworkSummary> {
        Ok(self.profile(estimator)?.0)
    }

    /// Summary and per-node metrics together, sharing one clustering pass.
    pub fn profile(&self, estimator: DistanceEstimator) -> Result<(NetworkSummary, Vec<NodeMetrics>)> {
        let members = self.components.largest_members();
        if members.is_empty() {
            return Err(Error::UndefinedMeasure("the network has no nodes".into()));
        }
        let clustering_all = self.clustering_all();
        let clustering = mean_over(&clustering_all, &members);
        let distances = self.distances(estimator);
        let summary = NetworkSummary {
            n: self.net.node_count(),
            k: self.net.edge_count(),
            l: distances.average_path_length()?,
            d: distances.diameter()?,
            c: clustering,
            omega: self.components.count(),
            max_average_distance: distances.max_average_distance()?,
            estimator,
            exact_distances: distances.is_exact(),
        };
        let metrics = clustering_all
            .into_iter()
            .enumerate()
            .map(|(i, c)| self.metrics_at(i, c))
            .collect();
        Ok((summary, metrics))
    }

    fn node_ix(&self, word: WordId) -> Result<usize> {
        self.net.node_index(word).ok_or_else(|| {
            Error::NodeNotFound(
                self.net
                    .lexicon()
                    .get(word)
                    .map_or_else(|| word.to_string(), str::to_owned),
            )
        })
    }
}

fn clustering_at(proj: &UndirectedProjection, i: usize, max: f64, marks: &mut [f64]) -> f64 {
    let (nbrs, wts) = proj.row(i);
    let k = nbrs.len();
    if k < 2 {
        return 0.0;
    }
    for (&j, &w) in nbrs.iter().zip(wts) {
        marks[j as usize] = w as f64 / max;
    }
    let mut sum = 0.0;
    for (&j, &w_ij) in nbrs.iter().zip(wts) {
        let w_ij = w_ij as f64 / max;
        let (second, second_w) = proj.row(j as usize);
        for (&m, &w_jm) in second.iter().zip(second_w) {
            let w_im = marks[m as usize];
            if w_im > 0.0 {
                sum += (w_ij * w_im * (w_jm as f64 / max)).cbrt();
            }
        }
    }
    for &j in nbrs {
        marks[j as usize] = 0.0;
    }
    sum / (k * (k - 1)) as f64
}

fn mean_over(values: &[f64], members: &[u32]) -> f64 {
    members.iter().map(|&i| values[i as usize]).sum::<f64>() / members.len() as f64
}

/// Strength over degree, kept as the exact ratio of two integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selectivity {
    pub strength: u64,
    pub degree: u64,
}

impl Selectivity {
    /// `None` when the degree is zero.
    pub fn new(strength: u64, degree: usize) -> Option<Self> {
        (degree > 0).then_some(Self {
            strength,
            degree: degree as u64,
        })
    }

    pub fn value(self) -> f64 {
        self.strength as f64 / self.degree as f64
    }
}

impl Serialize for Selectivity {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.value())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodeMetrics {
    pub word: WordId,
    pub in_degree: usize,
    pub out_degree: usize,
    pub in_strength: u64,
    pub out_strength: u64,
    pub in_selectivity: Option<Selectivity>,
    pub out_selectivity: Option<Selectivity>,
    pub clustering: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetworkSummary {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "D")]
    pub d: u32,
    #[serde(rename = "C")]
    pub c: f64,
    pub omega: usize,
    /// max_i d_i, the largest per-node average distance.
    pub max_average_distance: f64,
    pub estimator: DistanceEstimator,
    pub exact_distances: bool,
}

pub fn components(net: &CooccurrenceNetwork) -> Components {
    NetworkAnalysis::new(net).components
}

pub fn distances(net: &CooccurrenceNetwork, estimator: DistanceEstimator) -> DistanceResult {
    NetworkAnalysis::new(net).distances(estimator)
}

pub fn average_path_length(net: &CooccurrenceNetwork) -> Result<f64> {
    distances(net, DistanceEstimator::Exact).average_path_length()
}

pub fn diameter(net: &CooccurrenceNetwork) -> Result<u32> {
    distances(net, DistanceEstimator::Exact).diameter()
}

pub fn clustering_coefficient(net: &CooccurrenceNetwork, word: WordId) -> Result<f64> {
    NetworkAnalysis::new(net).clustering(word)
}

pub fn average_clustering(net: &CooccurrenceNetwork) -> Result<f64> {
    NetworkAnalysis::new(net).average_clustering()
}

pub fn node_metrics(net: &CooccurrenceNetwork, word: WordId) -> Result<NodeMetrics> {
    NetworkAnalysis::new(net).node_metrics(word)
}

pub fn summarize(net: &CooccurrenceNetwork, estimator: DistanceEstimator) -> Result<NetworkSummary> {
    NetworkAnalysis::new(net).summarize(estimator)
}

/// Per-node CSV: `word,k_in,k_out,s_in,s_out,e_in,e_out,c`. Undefined
/// selectivities are left empty.
pub fn write_node_metrics_csv<W: std::io::Write>(
    net: &CooccurrenceNetwork,
    metrics: &[NodeMetrics],
    out: W,
) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["word", "k_in", "k_out", "s_in", "s_out", "e_in", "e_out", "c"])?;
    let fmt_sel = |s: Option<Selectivity>| s.map(|s| s.value().to_string()).unwrap_or_default();
    for m in metrics {
        writer.write_record([
            net.lexeme(m.word).to_owned(),
            m.in_degree.to_string(),
            m.out_degree.to_string(),
            m.in_strength.to_string(),
            m.out_strength.to_string(),
            fmt_sel(m.in_selectivity),
            fmt_sel(m.out_selectivity),
            m.clustering.to_string(),
        ])?;
    }
    writer.flush().map_err(|e| Error::io("<node metrics>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::corpus::{Corpus, Lexicon};

    /// Directed network over words "0".."n-1" from (source, target, weight).
    fn graph(n: usize, edges: &[(u32, u32, u64)]) -> CooccurrenceNetwork {
        let lexicon = Arc::new(Lexicon::from_lexemes((0..n).map(|i| i.to_string())));
        CooccurrenceNetwork::from_weighted_edges(lexicon, 1, edges.iter().map(|&(a, b, w)| (WordId(a), WordId(b), w)))
            .unwrap()
    }

    fn cycle(n: u32) -> CooccurrenceNetwork {
        graph(n as usize, &(0..n).map(|i| (i, (i + 1) % n, 1)).collect::<Vec<_>>())
    }

    #[test]
    fn component_counts() {
        assert_eq!(components(&graph(4, &[(0, 1, 1), (2, 3, 1)])).count(), 2);
        assert_eq!(components(&graph(3, &[(0, 1, 1), (1, 2, 1)])).count(), 1);
    }

    #[test]
    fn largest_component_tie_breaks() {
        // Two 2-node components; the second has more edges.
        let comps = components(&graph(4, &[(0, 1, 1), (2, 3, 1), (3, 2, 1)]));
        assert_eq!(comps.largest_info().unwrap().first, WordId(2));
        // Equal size and edges: the smallest word id wins.
        let comps = components(&graph(4, &[(2, 3, 1), (0, 1, 1)]));
        assert_eq!(comps.largest_info().unwrap().first, WordId(0));
    }

    #[test]
    fn five_cycle_distances() {
        let net = cycle(5);
        let d = distances(&net, DistanceEstimator::Exact);
        for i in 0..5 {
            assert_eq!(d.average_distance(WordId(i)), Some(1.2));
        }
        assert_eq!(d.average_path_length().unwrap(), 1.5);
        assert_eq!(d.diameter().unwrap(), 2);
    }

    #[test]
    fn star_center_average_distance() {
        let net = graph(4, &[(0, 1, 1), (2, 0, 1), (0, 3, 1)]);
        let d = distances(&net, DistanceEstimator::Exact);
        assert_eq!(d.average_distance(WordId(0)), Some(0.75));
    }

    #[test]
    fn single_edge_average_distance() {
        let d = distances(&graph(2, &[(0, 1, 1)]), DistanceEstimator::Exact);
        assert_eq!(d.average_distance(WordId(0)), Some(0.5));
    }

    #[test]
    fn path_and_complete_graph_lengths() {
        let path = graph(3, &[(0, 1, 1), (1, 2, 1)]);
        assert_eq!(average_path_length(&path).unwrap(), 4.0 / 3.0);
        assert_eq!(diameter(&path).unwrap(), 2);

        let k4: Vec<_> = (0..4)
            .flat_map(|a| (0..4).filter(move |&b| b != a).map(move |b| (a, b, 1)))
            .collect();
        assert_eq!(average_path_length(&graph(4, &k4)).unwrap(), 1.0);
    }

    #[test]
    fn path_lengths_need_two_nodes() {
        let empty = graph(1, &[]);
        assert!(matches!(average_path_length(&empty), Err(Error::UndefinedMeasure(_))));
        assert!(diameter(&empty).is_err());
        let loop_only = graph(1, &[(0, 0, 3)]);
        assert!(average_path_length(&loop_only).is_err());
    }

    #[test]
    fn sampling_all_nodes_is_exact() {
        let net = cycle(7);
        let d = distances(&net, DistanceEstimator::Sampled { sources: 50, seed: 1 });
        assert!(d.is_exact());
        assert_eq!(d.total_hops(), distances(&net, DistanceEstimator::Exact).total_hops());
    }

    #[test]
    fn sampled_diameter_is_lower_bound() {
        let net = cycle(41);
        let d = distances(&net, DistanceEstimator::Sampled { sources: 3, seed: 7 });
        assert!(!d.is_exact());
        assert_eq!(d.sources().len(), 3);
        assert_eq!(d.diameter().unwrap(), 20);
        assert_eq!(d.average_path_length().unwrap(), average_path_length(&net).unwrap());
    }

    #[test]
    fn triangle_of_max_weights() {
        let net = graph(3, &[(0, 1, 2), (1, 2, 2), (2, 0, 2)]);
        for i in 0..3 {
            assert_eq!(clustering_coefficient(&net, WordId(i)).unwrap(), 1.0);
        }
        assert_eq!(average_clustering(&net).unwrap(), 1.0);
    }

    #[test]
    fn path_has_no_clustering() {
        let net = graph(3, &[(0, 1, 1), (1, 2, 1)]);
        assert_eq!(clustering_coefficient(&net, WordId(1)).unwrap(), 0.0);
        assert_eq!(average_clustering(&net).unwrap(), 0.0);
    }

    #[test]
    fn weighted_triangle() {
        // Undirected weights ij = 1, ik = 2 (1 + 1 antiparallel), jk = 4.
        let net = graph(3, &[(0, 1, 1), (0, 2, 1), (2, 0, 1), (1, 2, 4)]);
        let c = clustering_coefficient(&net, WordId(0)).unwrap();
        assert!((c - 0.5).abs() < 1e-15, "{c}");
    }

    #[test]
    fn self_loops_do_not_count_for_clustering() {
        let net = graph(3, &[(0, 0, 9), (0, 1, 1), (1, 0, 1)]);
        assert_eq!(clustering_coefficient(&net, WordId(0)).unwrap(), 0.0);
        assert_eq!(NetworkAnalysis::new(&net).projection().degree(0), 1);
    }

    #[test]
    fn empty_network_has_no_average_clustering() {
        assert!(average_clustering(&graph(2, &[])).is_err());
    }

    #[test]
    fn selectivity_examples() {
        let net = graph(4, &[(0, 1, 3), (0, 2, 1), (3, 1, 5)]);
        let m = node_metrics(&net, WordId(0)).unwrap();
        assert_eq!((m.out_degree, m.out_strength), (2, 4));
        assert_eq!(m.out_selectivity.unwrap().value(), 2.0);
        assert!(m.in_selectivity.is_none());
        let m = node_metrics(&net, WordId(3)).unwrap();
        assert_eq!(m.out_selectivity.unwrap().value(), 5.0);
        let m = node_metrics(&net, WordId(2)).unwrap();
        assert_eq!(m.in_selectivity.unwrap().value(), 1.0);
    }

    #[test]
    fn unknown_node_is_not_found() {
        let corpus = Corpus::from_word_lists([vec!["a"], vec!["b", "c"]]);
        let net = CooccurrenceNetwork::build(&corpus, 1).unwrap();
        let a = net.lexicon().id("a").unwrap();
        assert!(matches!(node_metrics(&net, a), Err(Error::NodeNotFound(w)) if w == "a"));
    }

    #[test]
    fn triangle_summary() {
        let net = graph(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]);
        let s = summarize(&net, DistanceEstimator::Exact).unwrap();
        assert_eq!((s.n, s.k, s.d, s.omega), (3, 3, 1, 1));
        assert_eq!((s.l, s.c), (1.0, 1.0));
    }

    #[test]
    fn disjoint_edges_summary() {
        let net = graph(4, &[(0, 1, 1), (2, 3, 1)]);
        let s = summarize(&net, DistanceEstimator::Exact).unwrap();
        assert_eq!((s.n, s.k, s.omega, s.d), (4, 2, 2, 1));
        assert_eq!(s.l, 1.0);
        let json = serde_json::to_value(s).unwrap();
        for key in ["N", "K", "L", "D", "C", "omega"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn hop_distances_from_source() {
        let net = graph(4, &[(0, 1, 1), (2, 1, 1), (2, 3, 1)]);
        let hops = NetworkAnalysis::new(&net).hop_distances(WordId(0)).unwrap();
        assert_eq!(hops, [(WordId(0), 0), (WordId(1), 1), (WordId(2), 2), (WordId(3), 3)]);
    }

    #[test]
    fn node_csv() {
        let corpus = Corpus::from_word_lists([vec!["a", "b", "a"]]);
        let net = CooccurrenceNetwork::build(&corpus, 1).unwrap();
        let metrics = NetworkAnalysis::new(&net).all_node_metrics();
        let mut buf = Vec::new();
        write_node_metrics_csv(&net, &metrics, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "word,k_in,k_out,s_in,s_out,e_in,e_out,c\na,1,1,1,1,1,1,0\nb,1,1,1,1,1,1,0\n"
        );
    }
}
