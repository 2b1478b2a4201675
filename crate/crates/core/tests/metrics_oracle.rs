mod common;

use std::sync::Arc;

use common::{oracle_mismatches, random_digraph, Oracle};
use lexnet::metrics::DistanceEstimator;
use lexnet::{CooccurrenceNetwork, Lexicon, NetworkAnalysis, WordId};

#[test]
fn random_graphs_match_brute_force() {
    for seed in 1000..1300 {
        let (lexicon, edges) = random_digraph(seed, 40);
        let bad = oracle_mismatches(lexicon, &edges);
        assert!(bad.is_empty(), "seed {seed}: {bad:?}");
    }
}

#[test]
fn sparse_graphs_with_several_components() {
    // Tiny edge probabilities leave many components and single-node loops.
    for seed in 0..200u64 {
        let (lexicon, edges) = random_digraph(seed, 12);
        let sparse: Vec<_> = edges.into_iter().step_by(3).collect();
        let bad = oracle_mismatches(lexicon, &sparse);
        assert!(bad.is_empty(), "seed {seed}: {bad:?}");
    }
}

#[test]
fn equal_weights_reduce_to_triangle_clustering() {
    for seed in 0..100 {
        let (lexicon, edges) = random_digraph(seed, 40);
        // Antiparallel pairs would sum to a larger undirected weight, so keep
        // one direction per pair.
        let one_way: Vec<_> = edges
            .iter()
            .filter(|&&(a, b, _)| a < b)
            .map(|&(a, b, _)| (a, b, 2))
            .collect();
        if one_way.is_empty() {
            continue;
        }
        let oracle = Oracle::new(&one_way);
        let net = CooccurrenceNetwork::from_weighted_edges(lexicon, 1, one_way).unwrap();
        let analysis = NetworkAnalysis::new(&net);
        for m in analysis.all_node_metrics() {
            let expected = oracle.triangle_clustering(m.word);
            assert!((m.clustering - expected).abs() < 1e-12, "seed {seed} node {}", m.word);
        }
    }
}

#[test]
fn scaling_weights_keeps_clustering_and_scales_strength() {
    for seed in 0..60 {
        let (lexicon, edges) = random_digraph(seed, 30);
        let scaled: Vec<_> = edges.iter().map(|&(a, b, w)| (a, b, w * 7)).collect();
        let base = CooccurrenceNetwork::from_weighted_edges(lexicon.clone(), 1, edges).unwrap();
        let big = CooccurrenceNetwork::from_weighted_edges(lexicon, 1, scaled).unwrap();
        let (m1, m2) = (
            NetworkAnalysis::new(&base).all_node_metrics(),
            NetworkAnalysis::new(&big).all_node_metrics(),
        );
        for (a, b) in m1.iter().zip(&m2) {
            assert!((a.clustering - b.clustering).abs() < 1e-12);
            assert_eq!(a.out_strength * 7, b.out_strength);
            assert_eq!(a.in_strength * 7, b.in_strength);
            assert_eq!((a.in_degree, a.out_degree), (b.in_degree, b.out_degree));
            if let (Some(x), Some(y)) = (a.out_selectivity, b.out_selectivity) {
                assert_eq!(x.strength * 7 * y.degree, y.strength * x.degree);
            }
        }
    }
}

#[test]
fn sampling_every_node_is_exact() {
    let (lexicon, edges) = random_digraph(7, 40);
    let net = CooccurrenceNetwork::from_weighted_edges(lexicon, 1, edges).unwrap();
    let analysis = NetworkAnalysis::new(&net);
    let exact = analysis.distances(DistanceEstimator::Exact);
    let sampled = analysis.distances(DistanceEstimator::Sampled { sources: 1000, seed: 3 });
    assert!(sampled.is_exact());
    assert_eq!(sampled.total_hops(), exact.total_hops());
    assert_eq!(sampled.diameter().unwrap(), exact.diameter().unwrap());
}

#[test]
fn sampled_estimate_on_vertex_transitive_graph() {
    // Every node of a cycle has the same distance sum, so any sample gives
    // the exact L, and the double sweep finds the exact D.
    let n = 400u32;
    let lexicon = Arc::new(Lexicon::from_lexemes((0..n).map(|i| format!("w{i}"))));
    let edges = (0..n).map(|i| (WordId(i), WordId((i + 1) % n), 1));
    let net = CooccurrenceNetwork::from_weighted_edges(lexicon, 1, edges).unwrap();
    let analysis = NetworkAnalysis::new(&net);
    let exact = analysis.distances(DistanceEstimator::Exact);
    let sampled = analysis.distances(DistanceEstimator::Sampled { sources: 37, seed: 5 });
    assert!(!sampled.is_exact());
    assert_eq!(sampled.sources().len(), 37);
    assert_eq!(
        sampled.average_path_length().unwrap(),
        exact.average_path_length().unwrap()
    );
    assert_eq!(sampled.diameter().unwrap(), 200);
    assert_eq!(exact.diameter().unwrap(), 200);
}

#[test]
fn component_ties_prefer_more_edges_then_smaller_ids() {
    let lexicon = Arc::new(Lexicon::from_lexemes(["a", "b", "c", "d", "e", "f"]));
    let w = WordId;
    // {a,b} and {c,d}: equal size and edge count, so {a,b} wins on id.
    let net = CooccurrenceNetwork::from_weighted_edges(lexicon.clone(), 1, [(w(2), w(3), 1), (w(0), w(1), 1)]).unwrap();
    assert_eq!(
        NetworkAnalysis::new(&net).components().largest_info().unwrap().first,
        w(0)
    );
    // {c,d} carries an extra antiparallel edge.
    let net = CooccurrenceNetwork::from_weighted_edges(lexicon, 1, [(w(0), w(1), 1), (w(2), w(3), 1), (w(3), w(2), 1)])
        .unwrap();
    let components = NetworkAnalysis::new(&net).components().clone();
    assert_eq!(components.largest_info().unwrap().first, w(2));
    assert_eq!(components.count(), 2);
}
