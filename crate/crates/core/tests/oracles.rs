//! Sweeps that compare solvers against independent brute-force oracles.

use num_rational::Ratio;

use ssbve::approx::{exact_from_atmost, les_trim, trivial_ksubset};
use ssbve::exact::{exact_ssbve, exact_ssbve_atmost};
use ssbve::gen::gen_random_bipartite;
use ssbve::rng::derive_seed;
use ssbve::ssve::{sse_solve, SseOracle};
use ssbve::{BipartiteGraph, SsbveInstance, UndirectedGraph};

/// Smallest `|N(S)|` over `k`-subsets by bitmask enumeration.
fn brute_min_union(g: &BipartiteGraph, k: usize) -> usize {
    let n = g.n();
    let rows: Vec<u64> = (0..n).map(|u| g.left_neighbors(u).iter().fold(0u64, |m, &v| m | 1 << v)).collect();
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|u| m >> u & 1 == 1).fold(0u64, |acc, u| acc | rows[u]).count_ones() as usize)
        .min()
        .unwrap()
}

fn instance(seed: u64) -> SsbveInstance {
    let n = 2 + (seed % 11) as usize;
    let s = 1 + (seed / 11 % 9) as usize;
    let k = 1 + (seed as usize * 3) % n;
    let p = [0.15, 0.3, 0.5][(seed % 3) as usize];
    SsbveInstance::new(gen_random_bipartite(n, s, p, derive_seed(seed, 11)).unwrap(), k).unwrap()
}

#[test]
fn exact_solver_matches_bitmask_enumeration() {
    for seed in 0..300 {
        let inst = instance(seed);
        let sol = exact_ssbve(&inst).unwrap();
        assert_eq!(sol.neighborhood_size, brute_min_union(&inst.graph, inst.k), "seed {seed}");
        assert_eq!(sol.chosen.len(), inst.k);
    }
}

#[test]
fn exact_k_conversions_are_feasible_and_bounded_below() {
    let mut worst: f64 = 1.0;
    for seed in 0..300 {
        let inst = instance(seed);
        let opt = exact_ssbve(&inst).unwrap().neighborhood_size;
        for sol in [
            exact_from_atmost(&inst, exact_ssbve_atmost).unwrap(),
            les_trim(&inst).unwrap(),
            trivial_ksubset(&inst),
        ] {
            assert_eq!(sol.chosen.len(), inst.k, "seed {seed}");
            assert!(sol.is_consistent(&inst.graph));
            assert!(sol.neighborhood_size >= opt);
            if opt > 0 {
                worst = worst.max(sol.neighborhood_size as f64 / opt as f64);
            }
        }
    }
    eprintln!("largest ratio to optimum over the sweep: {worst:.3}");
}

#[test]
fn sweep_oracle_is_never_better_than_bruteforce() {
    for seed in 0..200u64 {
        let n = 2 + (seed % 13) as usize;
        let g = gen_random_bipartite(n, n, 0.3, derive_seed(seed, 12)).unwrap();
        // symmetrize the random relation into a simple graph
        let mut edges: Vec<(usize, usize)> = g.edges().filter(|&(a, b)| a < b).collect();
        edges.sort_unstable();
        edges.dedup();
        let u = UndirectedGraph::from_edges(n, &edges).unwrap();
        let k = 1 + (seed as usize) % n;
        let (_, exact) = sse_solve(&u, k, &SseOracle::bruteforce()).unwrap();
        let (set, sweep) = sse_solve(&u, k, &SseOracle::sweep()).unwrap();
        assert!(sweep >= exact, "seed {seed}");
        assert_eq!(sweep, Ratio::new(u.cut_size(&set) as u64, set.len() as u64));
    }
}
