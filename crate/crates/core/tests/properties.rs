use std::collections::BTreeSet;

use hyperlab::combinatorics::{binomial_u64, ln_biguint, rank_subset, unrank_subset, TheoryParams};
use hyperlab::enumeration::{expected_cs_lower_reference, expected_rs_upper, predicted_l1};
use hyperlab::experiments::{run_experiment, ExperimentConfig};
use hyperlab::hypergraph::{j_components, sample_hypergraph};
use hyperlab::processes::{search_component, search_component_shuffled, Kind, SearchTrace};
use hyperlab::Hypergraph;
use proptest::prelude::*;

fn subset_strategy() -> impl Strategy<Value = (usize, Vec<u32>)> {
    (1usize..=40).prop_flat_map(|n| {
        (
            Just(n),
            proptest::sample::subsequence((1..=n as u32).collect::<Vec<_>>(), 0..=n.min(8)),
        )
    })
}

proptest! {
    #[test]
    fn rank_then_unrank_is_identity((n, s) in subset_strategy()) {
        let r = rank_subset(&s, n).unwrap();
        prop_assert!(r < binomial_u64(n as u64, s.len() as u64).unwrap());
        prop_assert_eq!(unrank_subset(r, s.len(), n).unwrap(), s);
    }

    #[test]
    fn unrank_then_rank_is_identity(n in 1usize..=30, size in 0usize..=5, x in any::<u64>()) {
        let size = size.min(n);
        let total = binomial_u64(n as u64, size as u64).unwrap();
        let r = x % total;
        let s = unrank_subset(r, size, n).unwrap();
        prop_assert_eq!(rank_subset(&s, n).unwrap(), r);
    }
}

fn labels(trace: &SearchTrace, kind: Kind) -> BTreeSet<Vec<u32>> {
    trace
        .discovered
        .iter()
        .filter(|d| d.kind == kind)
        .map(|d| d.label.clone())
        .collect()
}

fn component_edges(h: &Hypergraph, edges: &[usize]) -> BTreeSet<Vec<u32>> {
    edges.iter().map(|&e| h.edge(e).to_vec()).collect()
}

#[test]
fn search_agrees_with_union_find() {
    let params = TheoryParams::new(40, 3, 2, 0.3).unwrap();
    let mut checked = 0;
    for seed in 0..100 {
        let h = sample_hypergraph(&params, seed).unwrap();
        let d = j_components(&h, 2).unwrap();
        for c in &d.components {
            let start = h.edge(c.edges[0])[..2].to_vec();
            let trace = search_component(&h, 2, &start).unwrap();
            assert_eq!(trace.size, c.size);
            assert_eq!(trace.order, c.order);
            assert_eq!(labels(&trace, Kind::K), component_edges(&h, &c.edges));
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn search_result_ignores_scan_order() {
    let params = TheoryParams::new(30, 4, 2, 0.1).unwrap();
    for seed in 0..40 {
        let h = sample_hypergraph(&params, seed).unwrap();
        if h.is_empty() {
            continue;
        }
        let start = h.edge(0)[..2].to_vec();
        let plain = search_component(&h, 2, &start).unwrap();
        let shuffled = search_component_shuffled(&h, 2, &start, seed + 7).unwrap();
        assert_eq!(labels(&plain, Kind::J), labels(&shuffled, Kind::J));
        assert_eq!(labels(&plain, Kind::K), labels(&shuffled, Kind::K));
    }
}

#[test]
fn largest_component_shrinks_as_epsilon_grows() {
    let medians: Vec<f64> = [0.2, 0.3, 0.4]
        .iter()
        .map(|&epsilon| {
            let cfg = ExperimentConfig {
                n: 250,
                k: 3,
                j: 2,
                epsilon,
                trials: 100,
                base_seed: 11,
                ..ExperimentConfig::default()
            };
            run_experiment(&cfg, 1).unwrap().1.median_l1()
        })
        .collect();
    assert!(medians.windows(2).all(|w| w[0] > w[1]), "{medians:?}");
}

#[test]
fn tree_count_expectation_decays_past_its_mode() {
    let params = TheoryParams::new(200, 3, 2, 0.3).unwrap();
    let values: Vec<f64> = (1..=200).map(|s| expected_rs_upper(&params, s)).collect();
    let mode = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0;
    assert!(values[mode..].windows(2).all(|w| w[1] < w[0]));
    assert!(values[199] < 1e-3 * values[mode]);
}

#[test]
fn hypertree_reference_scale_at_predicted_size() {
    let params = TheoryParams::new(250, 3, 2, 0.3).unwrap();
    let s = predicted_l1(&params).unwrap().round() as u64;
    let value = expected_cs_lower_reference(&params, s);
    let shape = ln_biguint(&params.jset_count()).exp()
        * (-(s as f64) * params.delta).exp()
        * (s as f64).powf(-1.5);
    let ratio = value / shape;
    assert!((1e-2..=1e2).contains(&ratio), "ratio {ratio}");
}
