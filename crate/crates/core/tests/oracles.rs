//! Independent re-implementations checked against the library.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qprune::circuit::{build_qaoa, transpile, CouplingMap, ParamVector};
use qprune::sim::run_statevector;
use qprune::{max_cut_bruteforce, BenchmarkId, Edge, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Gray-code walk over all 2^n assignments, updating the cut one flip at a time.
fn maxcut_gray(n: usize, edges: &[Edge]) -> u32 {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut side = vec![false; n];
    let mut cut: i64 = 0;
    let mut best = 0;
    for k in 1u64..(1u64 << n) {
        let q = k.trailing_zeros() as usize;
        for &w in &adj[q] {
            cut += if side[q] == side[w] { 1 } else { -1 };
        }
        side[q] = !side[q];
        best = best.max(cut);
    }
    best as u32
}

fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(2..=12);
    let density = rng.gen_range(0.1..0.9);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

#[test]
fn bruteforce_agrees_with_gray_walk() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut graphs: Vec<Graph> = (0..100).map(|_| random_graph(&mut rng)).collect();
    graphs.extend(BenchmarkId::TABLE.iter().map(|id| id.graph().unwrap()));
    for g in graphs {
        let (cmax, witness) = max_cut_bruteforce(&g).unwrap();
        assert_eq!(cmax, maxcut_gray(g.n(), g.edges()), "{g}");
        assert_eq!(qprune::cut_value(&g, &witness).unwrap(), cmax);
    }
}

#[test]
fn benchmark_cmax_values() {
    let expected = [2, 4, 4, 5, 7];
    for (id, want) in BenchmarkId::TABLE.iter().zip(expected) {
        let g = id.graph().unwrap();
        assert_eq!(max_cut_bruteforce(&g).unwrap().0, want, "{id}");
        if g.is_bipartite() {
            assert_eq!(want as usize, g.num_edges());
        }
    }
}

proptest! {
    #[test]
    fn bruteforce_matches_gray_walk(
        n in 2usize..=9,
        mask in any::<u64>(),
    ) {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, p)| *p);
        let g = Graph::new(n, edges).unwrap();
        prop_assert_eq!(max_cut_bruteforce(&g).unwrap().0, maxcut_gray(n, g.edges()));
    }

    #[test]
    fn even_rings_cut_every_edge(n in 2usize..=12) {
        let g = Graph::cycle(2 * n).unwrap();
        prop_assert!(g.is_bipartite());
        prop_assert_eq!(max_cut_bruteforce(&g).unwrap().0 as usize, g.num_edges());
    }
}

/// QAOA state built from the diagonal cost phase and a per-qubit mixer,
/// without going through the gate decomposition.
fn qaoa_oracle(g: &Graph, gammas: &[f64], betas: &[f64]) -> Vec<Complex64> {
    let n = g.n();
    let size = 1usize << n;
    let mut psi = vec![Complex64::new(1.0 / (size as f64).sqrt(), 0.0); size];
    for (&gamma, &beta) in gammas.iter().zip(betas) {
        for (z, a) in psi.iter_mut().enumerate() {
            let zz: f64 = g
                .edges()
                .iter()
                .map(|e| if (z >> e.u & 1) == (z >> e.v & 1) { 1.0 } else { -1.0 })
                .sum();
            *a *= Complex64::from_polar(1.0, -gamma * zz);
        }
        let (c, s) = (beta.cos(), beta.sin());
        for q in 0..n {
            let mut next = psi.clone();
            for z in 0..size {
                let flipped = psi[z ^ (1 << q)];
                next[z] = psi[z] * c + Complex64::new(0.0, -s) * flipped;
            }
            psi = next;
        }
    }
    psi
}

fn oracle_ar(g: &Graph, cmax: u32, gammas: &[f64], betas: &[f64]) -> f64 {
    let psi = qaoa_oracle(g, gammas, betas);
    let e: f64 = psi
        .iter()
        .enumerate()
        .map(|(z, a)| {
            let cut = g.edges().iter().filter(|e| (z >> e.u & 1) != (z >> e.v & 1)).count();
            a.norm_sqr() * cut as f64
        })
        .sum();
    e / cmax as f64
}

fn simulated_ar(g: &Graph, cmax: u32, gammas: &[f64], betas: &[f64]) -> f64 {
    let c = build_qaoa(g, &ParamVector::new(gammas.to_vec(), betas.to_vec()).unwrap()).unwrap();
    let probs = run_statevector(&c).unwrap().probabilities();
    let e: f64 = probs
        .iter()
        .enumerate()
        .map(|(z, p)| p * g.edges().iter().filter(|e| (z >> e.u & 1) != (z >> e.v & 1)).count() as f64)
        .sum();
    e / cmax as f64
}

#[test]
fn gate_level_qaoa_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for id in BenchmarkId::TABLE {
        let g = id.graph().unwrap();
        for p in 1..=3 {
            let gammas: Vec<f64> = (0..p).map(|_| rng.gen_range(0.0..PI)).collect();
            let betas: Vec<f64> = (0..p).map(|_| rng.gen_range(0.0..PI)).collect();
            let c = build_qaoa(&g, &ParamVector::new(gammas.clone(), betas.clone()).unwrap()).unwrap();
            let sv = run_statevector(&c).unwrap();
            let want = qaoa_oracle(&g, &gammas, &betas);
            // equal up to a global phase
            let phase = want[0] / sv.amplitudes()[0];
            for (a, b) in sv.amplitudes().iter().zip(&want) {
                assert!((a * phase - b).norm() < 1e-10, "{id} p={p}");
            }
        }
    }
}

#[test]
fn ring_grid_search_peak() {
    let g = Graph::cycle(4).unwrap();
    let grid: Vec<f64> = (0..50).map(|i| i as f64 * PI / 50.0).collect();
    let mut best: f64 = 0.0;
    for &gamma in &grid {
        for &beta in &grid {
            best = best.max(oracle_ar(&g, 4, &[gamma], &[beta]));
        }
    }
    assert!((best - 0.75).abs() <= 0.01, "{best}");
    for &gamma in grid.iter().step_by(7) {
        for &beta in grid.iter().step_by(5) {
            let (a, b) = (oracle_ar(&g, 4, &[gamma], &[beta]), simulated_ar(&g, 4, &[gamma], &[beta]));
            assert!((a - b).abs() < 1e-12);
        }
    }
}

/// Logical basis index `z` lives at physical index `sum_q bit_q(z) << layout[q]`.
fn to_physical(z: usize, layout: &[usize]) -> usize {
    layout.iter().enumerate().map(|(q, &p)| (z >> q & 1) << p).sum()
}

#[test]
fn routing_preserves_the_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for id in BenchmarkId::TABLE {
        let g = id.graph().unwrap();
        let n = g.n();
        let maps = [CouplingMap::line(n), CouplingMap::line(n + 2)];
        for map in &maps {
            for _ in 0..5 {
                let p = rng.gen_range(1..=2);
                let params = ParamVector::new(
                    (0..p).map(|_| rng.gen_range(0.0..PI)).collect(),
                    (0..p).map(|_| rng.gen_range(0.0..PI)).collect(),
                )
                .unwrap();
                let c = build_qaoa(&g, &params).unwrap();
                let placement: Vec<usize> = (0..n).collect();
                let t = transpile(&c, map, &placement).unwrap();
                assert!(map.conforms(&t.circuit));
                let before = run_statevector(&c).unwrap();
                let after = run_statevector(&t.circuit).unwrap();
                for (z, a) in before.amplitudes().iter().enumerate() {
                    let b = after.amplitudes()[to_physical(z, &t.final_layout)];
                    assert!((a - b).norm() < 1e-10, "{id}");
                }
            }
        }
    }
}

#[test]
fn routing_on_a_grid_with_shuffled_placement() {
    let g = BenchmarkId::Graph6.graph().unwrap();
    let params = ParamVector::new(vec![0.4, 1.1], vec![0.3, 0.9]).unwrap();
    let c = build_qaoa(&g, &params).unwrap();
    let map = CouplingMap::grid(2, 3);
    let placement = [5, 0, 3, 1, 4, 2];
    let t = transpile(&c, &map, &placement).unwrap();
    assert!(t.swaps_added > 0);
    let before = run_statevector(&c).unwrap();
    let after = run_statevector(&t.circuit).unwrap();
    for (z, a) in before.amplitudes().iter().enumerate() {
        assert!((a - after.amplitudes()[to_physical(z, &t.final_layout)]).norm() < 1e-10);
    }
}
