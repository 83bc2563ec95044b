//! Seeded instance generators: uniform random bipartite graphs, the planted
//! log-density model, random r-uniform hypergraphs with an optional planted
//! dense part, and the random family used for the integrality-gap certificates.

use std::collections::HashSet;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Hypergraph, SsbveInstance};
use crate::io::PlantedSidecar;
use crate::rng::{bernoulli, derive_seed, rng_from_seed, sample_subset, SeededRng};

/// Largest number of candidate hyperedges accepted when `r_edge > 4`.
pub const HYPEREDGE_BUDGET: u128 = 1 << 40;

/// `round(n^x)`, at least 1.
pub fn round_pow(n: usize, x: f64) -> usize {
    ((n as f64).powf(x).round() as usize).max(1)
}

pub fn gen_random_bipartite(n: usize, s: usize, p: f64, seed: u64) -> Result<BipartiteGraph> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    let mut rng = rng_from_seed(seed);
    let adj = (0..n)
        .map(|_| (0..s).filter(|_| bernoulli(&mut rng, p)).collect())
        .collect();
    Ok(BipartiteGraph::from_sorted_left(n, s, adj))
}

/// The `(n, s, d_l/s)` random family behind both gap certificates.
pub fn gen_gap_instance(n: usize, s: usize, d_l: f64, seed: u64) -> Result<BipartiteGraph> {
    if s == 0 {
        return Err(Error::ProbabilityOutOfRange(f64::INFINITY));
    }
    gen_random_bipartite(n, s, d_l / s as f64, seed)
}

/// Planted model parameters and, after generation, its hidden sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedSpec {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub r_degree: usize,
    pub seed: u64,
    pub planted_s: Vec<usize>,
    pub planted_t: Vec<usize>,
}

impl PlantedSpec {
    pub fn new(n: usize, alpha: f64, beta: f64, gamma: f64, r_degree: usize, seed: u64) -> Self {
        Self { n, alpha, beta, gamma, r_degree, seed, planted_s: Vec::new(), planted_t: Vec::new() }
    }

    pub fn n_right(&self) -> usize {
        round_pow(self.n, self.beta)
    }

    pub fn k(&self) -> usize {
        round_pow(self.n, 1.0 - self.alpha)
    }

    pub fn t_size(&self) -> usize {
        round_pow(self.n, self.gamma)
    }

    pub fn sidecar(&self) -> PlantedSidecar {
        PlantedSidecar {
            planted_s: self.planted_s.clone(),
            planted_t: self.planted_t.clone(),
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
        }
    }
}

fn draw_neighbors(rng: &mut SeededRng, pool: &[usize], r: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (0..r).map(|_| pool[rng.random_range(0..pool.len())]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Every vertex outside the hidden set `S` draws `r` neighbors from all of `V`,
/// every vertex of `S` draws them from the hidden target `T`. Draws repeat and
/// are then deduplicated.
pub fn gen_planted(spec: &PlantedSpec) -> Result<(SsbveInstance, PlantedSpec)> {
    for (name, x) in [("alpha", spec.alpha), ("beta", spec.beta), ("gamma", spec.gamma)] {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::InvalidExponents(format!("{name}={x} not in (0, 1)")));
        }
    }
    if spec.gamma >= spec.beta {
        return Err(Error::InvalidExponents(format!(
            "gamma={} must be below beta={}",
            spec.gamma, spec.beta
        )));
    }
    if spec.r_degree == 0 {
        return Err(Error::InvalidExponents("r_degree must be positive".into()));
    }
    let (n, nr, k, t) = (spec.n, spec.n_right(), spec.k(), spec.t_size());
    if k > n || t > nr {
        return Err(Error::InvalidExponents(format!("sizes k={k}, |T|={t} exceed n={n}, |V|={nr}")));
    }
    let mut rng = rng_from_seed(spec.seed);
    let planted_s = sample_subset(&mut rng, n, k);
    let planted_t = sample_subset(&mut rng, nr, t);
    let everything: Vec<usize> = (0..nr).collect();
    let mut in_s = vec![false; n];
    for &u in &planted_s {
        in_s[u] = true;
    }
    let adj = (0..n)
        .map(|u| {
            let pool = if in_s[u] { &planted_t } else { &everything };
            draw_neighbors(&mut rng, pool, spec.r_degree)
        })
        .collect();
    let g = BipartiteGraph::from_sorted_left(n, nr, adj);
    let mut out = spec.clone();
    out.planted_s = planted_s;
    out.planted_t = planted_t;
    Ok((SsbveInstance::new(g, k)?, out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HdvrMode {
    Random,
    Planted,
}

/// Dense-vs-random hypergraph parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HdvrSpec {
    pub n: usize,
    pub r_edge: usize,
    pub alpha: f64,
    pub beta: f64,
    pub k_planted: usize,
    pub mode: HdvrMode,
    pub seed: u64,
}

impl HdvrSpec {
    /// Ambient edge probability `n^{α-(r-1)}`, clamped to 1.
    pub fn edge_probability(&self) -> f64 {
        (self.n as f64).powf(self.alpha - (self.r_edge as f64 - 1.0)).min(1.0)
    }

    /// Planted edge probability `k^{β-(r-1)}`, clamped to 1.
    pub fn planted_probability(&self) -> f64 {
        (self.k_planted as f64).powf(self.beta - (self.r_edge as f64 - 1.0)).min(1.0)
    }
}

pub fn binomial_coeff(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Unranks `idx` in the colexicographic order of `r`-subsets.
fn unrank_colex(mut idx: u128, r: usize) -> Vec<usize> {
    let mut out = vec![0; r];
    for slot in (0..r).rev() {
        let want = slot + 1;
        let mut c = slot;
        while binomial_coeff(c + 1, want) <= idx {
            c += 1;
        }
        idx -= binomial_coeff(c, want);
        out[slot] = c;
    }
    out
}

fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let r = comb.len();
    for i in (0..r).rev() {
        if comb[i] < n - r + i {
            comb[i] += 1;
            for j in i + 1..r {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Each `r`-subset of `0..n` independently with probability `p`, returned sorted.
fn sample_r_subsets(rng: &mut SeededRng, n: usize, r: usize, p: f64) -> Result<Vec<Vec<usize>>> {
    let total = binomial_coeff(n, r);
    if total == 0 || p <= 0.0 {
        return Ok(Vec::new());
    }
    if total > u64::MAX as u128 {
        return Err(Error::ArityTooLarge(r));
    }
    let count = Binomial::new(total as u64, p.min(1.0))
        .map_err(|_| Error::ProbabilityOutOfRange(p))?
        .sample(rng) as u128;
    let mut out = Vec::new();
    if 2 * count >= total {
        let mut comb: Vec<usize> = (0..r).collect();
        loop {
            if bernoulli(rng, p) {
                out.push(comb.clone());
            }
            if !next_combination(&mut comb, n) {
                break;
            }
        }
        return Ok(out);
    }
    let mut seen = HashSet::new();
    while (seen.len() as u128) < count {
        let idx = rng.random_range(0..total);
        if seen.insert(idx) {
            out.push(unrank_colex(idx, r));
        }
    }
    out.sort();
    Ok(out)
}

pub fn gen_hdvr(spec: &HdvrSpec) -> Result<Hypergraph> {
    let r = spec.r_edge;
    if r < 2 {
        return Err(Error::InvalidExponents(format!("r_edge={r} must be at least 2")));
    }
    if spec.k_planted > spec.n {
        return Err(Error::InvalidExponents("k_planted exceeds n".into()));
    }
    if r > 4 {
        let needed = binomial_coeff(spec.n, r);
        if needed > HYPEREDGE_BUDGET {
            return Err(Error::ArityTooLarge(r));
        }
    }
    let mut rng = rng_from_seed(spec.seed);
    let mut edges = sample_r_subsets(&mut rng, spec.n, r, spec.edge_probability())?;
    if spec.mode == HdvrMode::Planted {
        let mut prng = rng_from_seed(derive_seed(spec.seed, 1));
        let hidden = sample_subset(&mut prng, spec.n, spec.k_planted);
        let inner = sample_r_subsets(&mut prng, hidden.len(), r, spec.planted_probability())?;
        let mut present: HashSet<Vec<usize>> = edges.iter().cloned().collect();
        for e in inner {
            let mapped: Vec<usize> = e.iter().map(|&i| hidden[i]).collect();
            if present.insert(mapped.clone()) {
                edges.push(mapped);
            }
        }
    }
    Hypergraph::new(spec.n, edges)
}

/// Hidden set of a planted hypergraph for the given spec (regenerated from the seed).
pub fn hdvr_planted_set(spec: &HdvrSpec) -> Vec<usize> {
    let mut prng = rng_from_seed(derive_seed(spec.seed, 1));
    sample_subset(&mut prng, spec.n, spec.k_planted)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_probabilities() {
        assert_eq!(gen_random_bipartite(5, 4, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(gen_random_bipartite(5, 4, 1.0, 1).unwrap().edge_count(), 20);
        assert!(gen_random_bipartite(5, 4, 1.5, 1).is_err());
        assert!(gen_gap_instance(5, 4, 8.0, 1).is_err());
    }

    #[test]
    fn edge_count_concentrates() {
        let g = gen_random_bipartite(200, 20, 0.1, 42).unwrap();
        let sd = (4000.0f64 * 0.1 * 0.9).sqrt();
        assert!((g.edge_count() as f64 - 400.0).abs() <= 4.0 * sd);
    }

    #[test]
    fn same_seed_same_graph() {
        let a = gen_random_bipartite(30, 10, 0.3, 9).unwrap();
        let b = gen_random_bipartite(30, 10, 0.3, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn planted_containment() {
        let spec = PlantedSpec::new(400, 0.5, 0.7, 0.3, 6, 5);
        let (inst, truth) = gen_planted(&spec).unwrap();
        inst.graph.validate().unwrap();
        let ns = inst.graph.neighborhood(&truth.planted_s);
        assert!(ns.iter().all(|v| truth.planted_t.binary_search(v).is_ok()));
        assert_eq!(inst.k, truth.planted_s.len());
        assert_eq!(truth.planted_s.len(), 20);
        let bad = PlantedSpec::new(400, 0.5, 0.3, 0.3, 6, 5);
        assert!(matches!(gen_planted(&bad), Err(Error::InvalidExponents(_))));
    }

    #[test]
    fn tight_case_sizes() {
        let spec = PlantedSpec::new(4096, 0.5, 0.5, 0.2, 12, 1);
        assert_eq!(spec.k(), 64);
        assert_eq!(spec.n_right(), 64);
    }

    #[test]
    fn back_degree_into_planted_set() {
        let spec = PlantedSpec::new(4096, 0.5, 0.5, 0.4, 12, 3);
        let (inst, truth) = gen_planted(&spec).unwrap();
        let g = &inst.graph;
        let mut in_s = vec![false; g.n()];
        for &u in &truth.planted_s {
            in_s[u] = true;
        }
        let back: usize = truth
            .planted_t
            .iter()
            .map(|&v| g.right_neighbors(v).iter().filter(|&&u| in_s[u]).count())
            .sum();
        let avg = back as f64 / truth.planted_t.len() as f64;
        let expect = 12.0 * truth.planted_s.len() as f64 / truth.planted_t.len() as f64;
        assert!(avg >= expect / 2.0 && avg <= expect * 2.0, "avg {avg}, expected {expect}");
    }

    #[test]
    fn unrank_matches_enumeration() {
        let mut comb: Vec<usize> = (0..3).collect();
        let mut all = vec![comb.clone()];
        while next_combination(&mut comb, 7) {
            all.push(comb.clone());
        }
        let mut via_rank: Vec<Vec<usize>> = (0..35).map(|i| unrank_colex(i, 3)).collect();
        via_rank.sort();
        assert_eq!(all, via_rank);
    }

    #[test]
    fn complete_hypergraph_at_boundary_exponent() {
        let spec = HdvrSpec { n: 10, r_edge: 3, alpha: 2.0, beta: 1.0, k_planted: 3, mode: HdvrMode::Random, seed: 1 };
        assert_eq!(spec.edge_probability(), 1.0);
        assert_eq!(gen_hdvr(&spec).unwrap().m(), 120);
    }

    #[test]
    fn hdvr_edge_count_concentrates() {
        let spec = HdvrSpec { n: 64, r_edge: 3, alpha: 1.0, beta: 0.5, k_planted: 8, mode: HdvrMode::Random, seed: 11 };
        let h = gen_hdvr(&spec).unwrap();
        let total = binomial_coeff(64, 3) as f64;
        let p = 1.0 / 64.0;
        let sd = (total * p * (1.0 - p)).sqrt();
        assert!((h.m() as f64 - total * p).abs() <= 4.0 * sd);
        let mut sorted = h.sets().to_vec();
        sorted.dedup();
        assert_eq!(sorted.len(), h.m());
    }

    #[test]
    fn hdvr_planted_density() {
        // graph case: expected planted edges C(k,2) k^{β-1} ≈ k^{1+β}/2
        let spec = HdvrSpec { n: 2000, r_edge: 2, alpha: 0.2, beta: 0.6, k_planted: 100, mode: HdvrMode::Planted, seed: 4 };
        let h = gen_hdvr(&spec).unwrap();
        let hidden = hdvr_planted_set(&spec);
        let inside = h.sets().iter().filter(|e| e.iter().all(|x| hidden.binary_search(x).is_ok())).count() as f64;
        let scale = (100f64).powf(1.6) / 2.0;
        assert!(inside >= scale / 2.0 && inside <= scale * 2.0, "{inside} vs {scale}");
    }

    #[test]
    fn large_arity_rejected() {
        let spec = HdvrSpec { n: 1000, r_edge: 8, alpha: 1.0, beta: 0.5, k_planted: 5, mode: HdvrMode::Random, seed: 1 };
        assert!(matches!(gen_hdvr(&spec), Err(Error::ArityTooLarge(8))));
    }
}
