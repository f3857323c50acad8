use std::f64::consts::PI;

use num_bigint::BigUint;
use qprune::adversary::{cross_provider_merge, effort, extract_graph, ExtractionReport};
use qprune::circuit::{build_qaoa, serialize, transpile, CouplingMap, ParamVector};
use qprune::obfuscation::{make_split_plan, SplitPlan};
use qprune::sim::BackendProfile;
use qprune::{BenchmarkId, Edge, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_params(rng: &mut ChaCha8Rng, p: usize) -> ParamVector {
    ParamVector::new(
        (0..p).map(|_| rng.gen_range(0.0..PI)).collect(),
        (0..p).map(|_| rng.gen_range(0.0..PI / 2.0)).collect(),
    )
    .unwrap()
}

fn wire(g: &Graph, params: &ParamVector, map: Option<&CouplingMap>) -> String {
    let c = build_qaoa(g, params).unwrap();
    match map {
        None => serialize(&c),
        Some(m) => {
            let placement: Vec<usize> = (0..g.n()).collect();
            serialize(&transpile(&c, m, &placement).unwrap().circuit)
        }
    }
}

#[test]
fn every_benchmark_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut graphs: Vec<Graph> = BenchmarkId::TABLE.iter().map(|id| id.graph().unwrap()).collect();
    graphs.push(Graph::complete(6).unwrap());
    for g in &graphs {
        let line = CouplingMap::line(g.n());
        for p in 1..=3 {
            for _ in 0..5 {
                let params = random_params(&mut rng, p);
                for map in [None, Some(&line)] {
                    let r = extract_graph(&wire(g, &params, map)).unwrap();
                    assert_eq!(&r.recovered_graph(), g);
                    assert_eq!(r.unmatched_gates, 0);
                    if map.is_none() {
                        assert_eq!(r.swap_count, 0);
                    }
                }
            }
        }
    }
}

#[test]
fn flavors_only_leak_their_own_edges() {
    let backends = [BackendProfile::ideal("a", 1), BackendProfile::ideal("b", 2)];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for id in BenchmarkId::TABLE {
        let g = id.graph().unwrap();
        for seed in 0..10 {
            let plan = make_split_plan(&g, 2, 1, &backends, seed).unwrap();
            let params = random_params(&mut rng, 2);
            let reports: Vec<ExtractionReport> = plan
                .flavors
                .iter()
                .map(|f| {
                    let visible = f.visible_graph(&g).unwrap();
                    let r = extract_graph(&wire(&visible, &params, Some(&CouplingMap::line(g.n())))).unwrap();
                    assert_eq!(r.recovered_graph(), visible);
                    assert!(r.edges.len() < g.num_edges());
                    assert!(f.removed_edges.iter().all(|e| !r.edges.contains(e)));
                    r
                })
                .collect();
            assert_eq!(cross_provider_merge(&reports).unwrap(), g);
        }
    }
}

#[test]
fn three_flavors_of_graph6_merge_back() {
    let g = BenchmarkId::Graph6.graph().unwrap();
    let backends: Vec<_> = (0..3).map(|i| BackendProfile::ideal(format!("b{i}"), i)).collect();
    let sets = [vec![g.edges()[0]], vec![g.edges()[1]], vec![g.edges()[2]]];
    let plan = SplitPlan::from_removed_sets(&g, &sets, &backends).unwrap();
    let params = ParamVector::new(vec![0.5], vec![0.3]).unwrap();
    let reports: Vec<_> = plan
        .flavors
        .iter()
        .map(|f| extract_graph(&wire(&f.visible_graph(&g).unwrap(), &params, None)).unwrap())
        .collect();
    assert!(reports.iter().all(|r| r.edges.len() == g.num_edges() - 1));
    assert_eq!(cross_provider_merge(&reports).unwrap(), g);
}

#[test]
fn merge_of_mismatched_reports_fails() {
    let a = extract_graph(&wire(&Graph::cycle(4).unwrap(), &ParamVector::new(vec![0.1], vec![0.2]).unwrap(), None)).unwrap();
    let b = extract_graph(&wire(&Graph::cycle(5).unwrap(), &ParamVector::new(vec![0.1], vec![0.2]).unwrap(), None)).unwrap();
    assert!(cross_provider_merge(&[a, b]).is_err());
}

#[test]
fn effort_identity_for_small_graphs() {
    for n in 1..=16usize {
        let universe = n * (n - 1) / 2;
        for observed in 0..=universe {
            let e = effort(n, observed).unwrap();
            assert_eq!(e.candidate_edges + observed, universe);
            assert_eq!(e.worst_case_trials, BigUint::from(2u8).pow(e.candidate_edges as u32));
            if e.candidate_edges == 1 {
                assert_eq!(e.min_guesses, 1);
            }
        }
        assert!(effort(n, universe + 1).is_err());
    }
}

#[test]
fn effort_is_exact_up_to_32_nodes() {
    let e = effort(32, 0).unwrap();
    assert_eq!(e.candidate_edges, 496);
    assert_eq!(e.worst_case_trials.bits(), 497);
    assert_eq!(e.worst_case_trials.count_ones(), 1);
}

#[test]
fn swap_blocks_take_priority_over_zz_blocks() {
    // a SWAP followed by a ZZ block that reuses its first CX pair
    let text = "qubits 3\ncx 0 1\ncx 1 0\ncx 0 1\ncx 0 1\nrz 1 0.5\ncx 0 1\nmeasure\n";
    let r = extract_graph(text).unwrap();
    assert_eq!(r.swap_count, 1);
    assert_eq!(r.edges, vec![Edge::new(0, 1)]);
    assert_eq!(r.final_mapping, vec![1, 0, 2]);
    assert_eq!(r.unmatched_gates, 0);
}
