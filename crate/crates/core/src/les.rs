//! Exact least expanding set via Dinkelbach iteration over parametric minimum cuts.
//!
//! For a parameter `λ = a/b`, the network is
//! `source → u` (capacity `a`), `u → v` (effectively infinite) for every edge,
//! `v → sink` (capacity `b`). A cut with source-side left set `S` has value
//! `a(|U| - |S|) + b|N(S)|`, so a minimum cut minimizes `|N(S)| - λ|S|`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::{BipartiteGraph, Expansion, Solution};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSelection {
    pub lambda: Ratio<i64>,
    pub chosen: Vec<usize>,
    /// `|N(S)| - λ|S|`
    pub objective: Ratio<i64>,
    /// Maximum flow value in the scaled network.
    pub flow_value: i64,
}

/// Minimizer of `|N(S)| - λ|S|`; the largest one when several exist.
pub fn min_cut_select(g: &BipartiteGraph, lambda: Ratio<i64>) -> Result<CutSelection> {
    if lambda < Ratio::from_integer(0) {
        return Err(Error::NegativeLambda);
    }
    let (n, nr) = (g.n(), g.n_right());
    let (a, b) = (*lambda.numer(), *lambda.denom());
    let ceil = lambda.ceil().to_integer().max(1);
    let inf = (nr as i64 + 1) * ceil * b;
    let (src, sink) = (n + nr, n + nr + 1);
    let mut net = FlowNetwork::new(n + nr + 2);
    for u in 0..n {
        net.add_edge(src, u, a);
        for &v in g.left_neighbors(u) {
            net.add_edge(u, n + v, inf);
        }
    }
    for v in 0..nr {
        net.add_edge(n + v, sink, b);
    }
    let flow_value = net.max_flow(src, sink);
    let reach = net.can_reach(sink);
    let chosen: Vec<usize> = (0..n).filter(|&u| !reach[u]).collect();
    let objective = Ratio::from_integer(g.neighborhood_size(&chosen) as i64)
        - lambda * Ratio::from_integer(chosen.len() as i64);
    Ok(CutSelection { lambda, chosen, objective, flow_value })
}

/// Result of a Dinkelbach run together with its parameter sequence.
#[derive(Debug, Clone)]
pub struct LesRun {
    pub solution: Solution,
    pub lambdas: Vec<Ratio<i64>>,
}

fn ratio_of(e: &Expansion) -> Ratio<i64> {
    Ratio::new(e.neighbors as i64, e.size as i64)
}

/// Nonempty left set of exactly minimal expansion.
///
/// Isolated left vertices short-circuit: all of them are returned (ratio 0).
pub fn least_expanding_set(g: &BipartiteGraph) -> Result<Solution> {
    Ok(least_expanding_set_traced(g)?.solution)
}

pub fn least_expanding_set_traced(g: &BipartiteGraph) -> Result<LesRun> {
    if g.n() == 0 {
        return Err(Error::EmptyLeftSide);
    }
    let isolated: Vec<usize> = (0..g.n()).filter(|&u| g.left_degree(u) == 0).collect();
    if !isolated.is_empty() {
        return Ok(LesRun { solution: Solution::evaluate(g, isolated)?, lambdas: vec![Ratio::from_integer(0)] });
    }
    let mut current: Vec<usize> = (0..g.n()).collect();
    let mut lambdas = Vec::new();
    loop {
        let lambda = ratio_of(&g.expansion(&current)?);
        if let Some(prev) = lambdas.last() {
            assert!(lambda < *prev, "Dinkelbach parameter failed to decrease");
        }
        lambdas.push(lambda);
        let sel = min_cut_select(g, lambda)?;
        if sel.objective >= Ratio::from_integer(0) || sel.chosen.is_empty() {
            return Ok(LesRun { solution: Solution::evaluate(g, current)?, lambdas });
        }
        current = sel.chosen;
    }
}

/// Least expanding `S ⊆ allowed`, ignoring right vertices in `forbidden_right`.
///
/// The returned [`Solution`] uses original left indices and reports the masked
/// neighborhood size.
pub fn least_expanding_subset(
    g: &BipartiteGraph,
    allowed: &[usize],
    forbidden_right: &[usize],
) -> Result<Solution> {
    if allowed.is_empty() {
        return Err(Error::EmptyLeftSide);
    }
    let mut masked = vec![false; g.n_right()];
    for &v in forbidden_right {
        masked[v] = true;
    }
    least_expanding_subset_masked(g, allowed, &masked)
}

/// As [`least_expanding_subset`] with the forbidden set given as a flag vector.
pub fn least_expanding_subset_masked(
    g: &BipartiteGraph,
    allowed: &[usize],
    masked: &[bool],
) -> Result<Solution> {
    if allowed.is_empty() {
        return Err(Error::EmptyLeftSide);
    }
    let mut allowed = allowed.to_vec();
    allowed.sort_unstable();
    allowed.dedup();
    // compact the right side to vertices actually touched
    let mut relabel = vec![usize::MAX; g.n_right()];
    let mut width = 0;
    let adj: Vec<Vec<usize>> = allowed
        .iter()
        .map(|&u| {
            g.left_neighbors(u)
                .iter()
                .filter(|&&v| !masked[v])
                .map(|&v| {
                    if relabel[v] == usize::MAX {
                        relabel[v] = width;
                        width += 1;
                    }
                    relabel[v]
                })
                .collect::<Vec<_>>()
        })
        .map(|mut l| {
            l.sort_unstable();
            l
        })
        .collect();
    let local = BipartiteGraph::from_sorted_left(allowed.len(), width, adj);
    let sol = least_expanding_set(&local)?;
    let chosen: Vec<usize> = sol.chosen.iter().map(|&i| allowed[i]).collect();
    Ok(Solution { chosen, neighborhood_size: sol.neighborhood_size, expansion: sol.expansion })
}

/// Smallest `|N(S)| - λ|S|` over all subsets by enumeration (test oracle, `n <= 20`).
pub fn brute_min_objective(g: &BipartiteGraph, lambda: Ratio<i64>) -> Ratio<i64> {
    assert!(g.n() <= 20);
    let mut best = Ratio::from_integer(0);
    for mask in 1u32..(1 << g.n()) {
        let s: Vec<usize> = (0..g.n()).filter(|&u| mask >> u & 1 == 1).collect();
        let val = Ratio::from_integer(g.neighborhood_size(&s) as i64) - lambda * Ratio::from_integer(s.len() as i64);
        if val < best {
            best = val;
        }
    }
    best
}

/// Scaled min-cut value predicted by the subset optimum: `b·(λ|U| + min_S(|N(S)| - λ|S|))`.
pub fn predicted_cut_value(g: &BipartiteGraph, lambda: Ratio<i64>) -> i64 {
    let m = brute_min_objective(g, lambda);
    let total = lambda * Ratio::from_integer(g.n() as i64) + m;
    let scaled = total * Ratio::from_integer(*lambda.denom());
    debug_assert!(scaled.is_integer());
    scaled.to_integer()
}
