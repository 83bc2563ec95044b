use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, SsbveInstance};
use crate::rng::{bernoulli, derive_seed, rng_from_seed};

use super::schedule::snap_alpha;

/// One degree bucket, padded to left-regular.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bucket {
    pub graph: BipartiteGraph,
    /// Original left index of every bucket vertex.
    pub origin: Vec<usize>,
    pub r: usize,
    pub k: usize,
    /// Right vertices `n_right_original..graph.n_right()` are padding.
    pub n_right_original: usize,
    pub pad_edges: usize,
}

/// Left-regular candidate with the guessed optimum size and derived constants.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PreprocessedInstance {
    pub graph: BipartiteGraph,
    pub origin: Vec<usize>,
    pub r: usize,
    pub k: usize,
    pub t_guess: usize,
    pub d: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub p: u32,
    pub q: u32,
    pub eps: f64,
    pub c: f64,
    pub cap_d: f64,
    pub v_d: Vec<usize>,
    /// `k^{cε} < 2`: the step thresholds carry no information at this size.
    pub degenerate: bool,
}

impl PreprocessedInstance {
    /// `k^{cε}`
    pub fn k_ce(&self) -> f64 {
        (self.k as f64).powf(self.c * self.eps)
    }

    /// Expansion threshold `r / k^{cε}`, floored at 1.
    pub fn threshold(&self) -> f64 {
        (self.r as f64 / self.k_ce()).max(1.0)
    }

    pub fn v_d_mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.graph.n_right()];
        for &v in &self.v_d {
            m[v] = true;
        }
        m
    }

    /// `V_D` recomputed from degrees.
    pub fn recompute_v_d(&self) -> Vec<usize> {
        (0..self.graph.n_right())
            .filter(|&v| self.graph.right_degree(v) as f64 >= self.cap_d)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreprocessConfig {
    pub eps: f64,
    pub q_max: u32,
    pub seed: u64,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self { eps: 0.1, q_max: 3, seed: 0 }
    }
}

fn bucket_index(deg: usize) -> u32 {
    // ceil(log2 deg): bucket i holds degrees in (2^{i-1}, 2^i]
    usize::BITS - (deg - 1).leading_zeros()
}

/// Splits the left side by `ceil(log2 deg)` and pads each bucket to left-regular.
///
/// The pad target `r` is the largest degree in the bucket. Vertex `u` is joined
/// to pad vertices `0..r-deg(u)`, so any set `S` gains at most
/// `max_{u∈S}(r - deg u) < min_{u∈S} deg u ≤ |N(S)|` neighbors: expansion grows
/// by less than a factor 2. Degree-0 vertices are left to the baselines.
pub fn bucket_and_regularize(inst: &SsbveInstance) -> Vec<Bucket> {
    let g = &inst.graph;
    let mut groups: std::collections::BTreeMap<u32, Vec<usize>> = Default::default();
    for u in 0..g.n() {
        let d = g.left_degree(u);
        if d > 0 {
            groups.entry(bucket_index(d)).or_default().push(u);
        }
    }
    groups
        .into_values()
        .map(|members| {
            let r = members.iter().map(|&u| g.left_degree(u)).max().unwrap();
            let min = members.iter().map(|&u| g.left_degree(u)).min().unwrap();
            let pad = r - min;
            let nr = g.n_right();
            let mut pad_edges = 0;
            let adj = members
                .iter()
                .map(|&u| {
                    let mut list = g.left_neighbors(u).to_vec();
                    let def = r - g.left_degree(u);
                    pad_edges += def;
                    list.extend(nr..nr + def);
                    list
                })
                .collect();
            let graph = BipartiteGraph::from_sorted_left(members.len(), nr + pad, adj);
            Bucket { k: inst.k.min(members.len()), graph, origin: members, r, n_right_original: nr, pad_edges }
        })
        .collect()
}

fn log_k_gamma(k: f64, n: f64, gamma: f64) -> f64 {
    k.ln() - gamma * n.ln()
}

/// `γ ∈ [0, log_n d]` with `d n^{-γ} = (k n^{-γ})^{α/(1-γ)+ε}`, by bisection.
///
/// Returns 0 when `d <= k^{α+ε}`.
pub fn solve_gamma(d: f64, n: usize, k: usize, alpha: f64, eps: f64) -> Result<f64> {
    let (nf, kf) = (n as f64, k as f64);
    if d <= kf.powf(alpha + eps) {
        return Ok(0.0);
    }
    if nf <= 1.0 {
        return Err(Error::NoRoot("n must exceed 1".into()));
    }
    // ln LHS - ln RHS
    let f = |g: f64| d.ln() - g * nf.ln() - (alpha / (1.0 - g) + eps) * log_k_gamma(kf, nf, g);
    let mut lo = 0.0;
    let mut hi = d.ln() / nf.ln();
    if hi >= 1.0 {
        return Err(Error::NoRoot(format!("log_n d = {hi} is not below 1")));
    }
    if f(lo) <= 0.0 || f(hi) > 0.0 {
        return Err(Error::NoRoot(format!("no sign change: f(0)={}, f(log_n d)={}", f(lo), f(hi))));
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Keeps each left vertex independently with probability `n^{-γ}`.
///
/// The probability is raised to `1/n` when smaller, so at least one survivor
/// is expected. Returns the subgraph and the kept original indices.
pub fn subsample_left(g: &BipartiteGraph, gamma: f64, seed: u64) -> (BipartiteGraph, Vec<usize>) {
    let n = g.n().max(1) as f64;
    let p = n.powf(-gamma.max(0.0)).max(1.0 / n);
    if p >= 1.0 {
        return (g.clone(), (0..g.n()).collect());
    }
    let mut rng = rng_from_seed(seed);
    let kept: Vec<usize> = (0..g.n()).filter(|_| bernoulli(&mut rng, p)).collect();
    (g.induced_left(&kept), kept)
}

/// `0.9 · min{1/(q²ε), 1/2, q/(p+2q-2)}`
pub fn pruning_constant(p: u32, q: u32, eps: f64) -> f64 {
    let (pf, qf) = (p as f64, q as f64);
    0.9 * (1.0 / (qf * qf * eps)).min(0.5).min(qf / (pf + 2.0 * qf - 2.0))
}

fn log_density(n: usize, k: usize) -> f64 {
    if n <= 1 || k == 0 {
        return 0.5;
    }
    (1.0 - (k as f64).ln() / (n as f64).ln()).clamp(0.0, 1.0)
}

/// All candidates: buckets × geometric guesses `t ∈ {r·2^j} ∩ [r, |V|]`.
pub fn preprocess(inst: &SsbveInstance, cfg: &PreprocessConfig) -> Vec<PreprocessedInstance> {
    let mut out = Vec::new();
    for (bi, bucket) in bucket_and_regularize(inst).into_iter().enumerate() {
        let nr = bucket.graph.n_right();
        let mut grid = Vec::new();
        let mut t = bucket.r;
        while t <= nr {
            grid.push(t);
            t *= 2;
        }
        if grid.is_empty() {
            grid.push(nr.max(1));
        }
        for (ti, &t_guess) in grid.iter().enumerate() {
            let n0 = bucket.graph.n();
            let k0 = bucket.k;
            let alpha0 = log_density(n0, k0);
            let d0 = k0 as f64 * bucket.r as f64 / t_guess as f64;
            let gamma = solve_gamma(d0, n0, k0, alpha0, cfg.eps).unwrap_or(0.0);
            let (graph, origin, k, d) = if gamma > 0.0 {
                let seed = derive_seed(cfg.seed, ((bi as u64) << 32) | ti as u64);
                let (sub, kept) = subsample_left(&bucket.graph, gamma, seed);
                if kept.is_empty() {
                    continue;
                }
                let scale = (n0 as f64).powf(-gamma);
                let k = ((k0 as f64 * scale).round() as usize).clamp(1, kept.len());
                let origin = kept.iter().map(|&i| bucket.origin[i]).collect();
                (sub, origin, k, d0 * scale)
            } else {
                (bucket.graph.clone(), bucket.origin.clone(), k0, d0)
            };
            let n = graph.n();
            let alpha = log_density(n, k);
            let (p, q) = snap_alpha(alpha, cfg.q_max);
            let c = pruning_constant(p, q, cfg.eps);
            let cap_d = n as f64 / (k as f64).powf(1.0 - c * cfg.eps);
            let v_d = (0..graph.n_right()).filter(|&v| graph.right_degree(v) as f64 >= cap_d).collect();
            let degenerate = (k as f64).powf(c * cfg.eps) < 2.0;
            out.push(PreprocessedInstance {
                graph,
                origin,
                r: bucket.r,
                k,
                t_guess,
                d,
                gamma,
                alpha,
                p,
                q,
                eps: cfg.eps,
                c,
                cap_d,
                v_d,
                degenerate,
            });
        }
    }
    out
}
