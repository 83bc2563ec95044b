//! Brute-force oracles. Exponential by design; every approximate routine and
//! certificate claim in the crate is checked against these at small scale.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::gen::binomial_coeff;
use crate::graph::{BipartiteGraph, Expansion, Solution, SsbveInstance, UndirectedGraph};

pub const DEFAULT_ENUMERATION_BUDGET: u128 = 10_000_000;
pub const EXACT_LES_MAX_N: usize = 20;
pub const EXACT_SSVE_MAX_N: usize = 16;

fn words(bits: usize) -> usize {
    bits.div_ceil(64).max(1)
}

fn row_masks(rows: impl Iterator<Item = Vec<usize>>, width: usize) -> Vec<Vec<u64>> {
    rows.map(|list| {
        let mut m = vec![0u64; words(width)];
        for x in list {
            m[x / 64] |= 1 << (x % 64);
        }
        m
    })
    .collect()
}

fn popcount(m: &[u64]) -> usize {
    m.iter().map(|w| w.count_ones() as usize).sum()
}

/// Depth-first enumeration of subsets of `0..masks.len()` of size `lo..=hi`
/// in lexicographic order, handing each subset and its OR-ed mask to `visit`.
fn enumerate(masks: &[Vec<u64>], lo: usize, hi: usize, visit: &mut dyn FnMut(&[usize], &[u64])) {
    let w = masks.first().map_or(1, Vec::len);
    let mut stack_sets = vec![vec![0u64; w]; hi + 1];
    let mut chosen = Vec::with_capacity(hi);
    fn rec(
        masks: &[Vec<u64>],
        start: usize,
        lo: usize,
        hi: usize,
        chosen: &mut Vec<usize>,
        acc: &mut [Vec<u64>],
        visit: &mut dyn FnMut(&[usize], &[u64]),
    ) {
        let depth = chosen.len();
        if depth >= lo && depth > 0 {
            visit(chosen, &acc[depth]);
        }
        if depth == hi {
            return;
        }
        let n = masks.len();
        // keep enough room to reach size lo
        let need = lo.saturating_sub(depth + 1);
        for i in start..n.saturating_sub(need) {
            let (head, tail) = acc.split_at_mut(depth + 1);
            for (t, (a, b)) in tail[0].iter_mut().zip(head[depth].iter().zip(&masks[i])) {
                *t = a | b;
            }
            chosen.push(i);
            rec(masks, i + 1, lo, hi, chosen, acc, visit);
            chosen.pop();
        }
    }
    rec(masks, 0, lo, hi, &mut chosen, &mut stack_sets, visit);
}

/// Lexicographically smallest `k`-subset minimizing `|N(S)|`.
pub fn exact_ssbve(inst: &SsbveInstance) -> Result<Solution> {
    exact_ssbve_with_budget(inst, DEFAULT_ENUMERATION_BUDGET)
}

pub fn exact_ssbve_with_budget(inst: &SsbveInstance, budget: u128) -> Result<Solution> {
    let g = &inst.graph;
    let needed = binomial_coeff(g.n(), inst.k);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let masks = row_masks((0..g.n()).map(|u| g.left_neighbors(u).to_vec()), g.n_right());
    let mut best: Option<(usize, Vec<usize>)> = None;
    enumerate(&masks, inst.k, inst.k, &mut |s, m| {
        let c = popcount(m);
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, s.to_vec()));
        }
    });
    let (_, s) = best.expect("k <= n guarantees a subset");
    Solution::evaluate(g, s)
}

/// True when `(ratio, set)` beats `best` under: smaller ratio, then smaller set, then lexicographic.
fn better(ratio: Expansion, set: &[usize], best: &Option<(Expansion, Vec<usize>)>) -> bool {
    match best {
        None => true,
        Some((br, bs)) => ratio
            .cmp(br)
            .then(set.len().cmp(&bs.len()))
            .then_with(|| set.cmp(bs))
            .is_lt(),
    }
}

/// Nonempty left set of minimum expansion.
pub fn exact_les(g: &BipartiteGraph) -> Result<Solution> {
    if g.n() > EXACT_LES_MAX_N {
        return Err(Error::TooLarge(format!("exact_les needs n <= {EXACT_LES_MAX_N}, got {}", g.n())));
    }
    if g.n() == 0 {
        return Err(Error::EmptyLeftSide);
    }
    exact_min_ratio_atmost(g, g.n())
}

/// Nonempty left set of size at most `k` with minimum expansion (same tie-breaks as [`exact_les`]).
pub fn exact_min_ratio_atmost(g: &BipartiteGraph, k: usize) -> Result<Solution> {
    if g.n() > EXACT_LES_MAX_N {
        return Err(Error::TooLarge(format!("needs n <= {EXACT_LES_MAX_N}, got {}", g.n())));
    }
    if g.n() == 0 || k == 0 {
        return Err(Error::EmptyLeftSide);
    }
    let masks = row_masks((0..g.n()).map(|u| g.left_neighbors(u).to_vec()), g.n_right());
    let mut best: Option<(Expansion, Vec<usize>)> = None;
    enumerate(&masks, 1, k.min(g.n()), &mut |s, m| {
        let e = Expansion::new(popcount(m), s.len());
        if better(e, s, &best) {
            best = Some((e, s.to_vec()));
        }
    });
    Solution::evaluate(g, best.expect("nonempty").1)
}

/// `S` with `|S| <= k` minimizing `|N(S) \ S| / |S|`.
pub fn exact_ssve(g: &UndirectedGraph, k: usize) -> Result<(Vec<usize>, Ratio<u64>)> {
    if g.n() > EXACT_SSVE_MAX_N {
        return Err(Error::TooLarge(format!("exact_ssve needs |V| <= {EXACT_SSVE_MAX_N}, got {}", g.n())));
    }
    if g.n() == 0 || k == 0 {
        return Err(Error::InvalidBudget { k, max: g.n() });
    }
    let masks = row_masks((0..g.n()).map(|v| g.neighbors(v).to_vec()), g.n());
    let mut best: Option<(Expansion, Vec<usize>)> = None;
    enumerate(&masks, 1, k.min(g.n()), &mut |s, m| {
        let mut outside = m.to_vec();
        for &v in s {
            outside[v / 64] &= !(1 << (v % 64));
        }
        let e = Expansion::new(popcount(&outside), s.len());
        if better(e, s, &best) {
            best = Some((e, s.to_vec()));
        }
    });
    let (e, s) = best.expect("nonempty");
    Ok((s, e.as_ratio()))
}

/// Union-neighborhood variant: `S` with `|S| <= k` minimizing `|N(S)| / |S|`,
/// where `N(S)` includes members of `S` only when they are adjacent to `S`.
pub fn exact_ssveu(g: &UndirectedGraph, k: usize) -> Result<(Vec<usize>, Ratio<u64>)> {
    if g.n() == 0 || k == 0 {
        return Err(Error::InvalidBudget { k, max: g.n() });
    }
    let needed: u128 = (1..=k.min(g.n())).map(|j| binomial_coeff(g.n(), j)).sum();
    if needed > DEFAULT_ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded { needed, budget: DEFAULT_ENUMERATION_BUDGET });
    }
    let masks = row_masks((0..g.n()).map(|v| g.neighbors(v).to_vec()), g.n());
    let mut best: Option<(Expansion, Vec<usize>)> = None;
    enumerate(&masks, 1, k.min(g.n()), &mut |s, m| {
        let e = Expansion::new(popcount(m), s.len());
        if better(e, s, &best) {
            best = Some((e, s.to_vec()));
        }
    });
    let (e, s) = best.expect("nonempty");
    Ok((s, e.as_ratio()))
}

/// Bipartite counterpart of [`exact_ssveu`]: minimum expansion over `1 <= |S| <= k`.
pub fn exact_ssbve_atmost(inst: &SsbveInstance) -> Result<Solution> {
    let g = &inst.graph;
    let needed: u128 = (1..=inst.k).map(|j| binomial_coeff(g.n(), j)).sum();
    if needed > DEFAULT_ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded { needed, budget: DEFAULT_ENUMERATION_BUDGET });
    }
    let masks = row_masks((0..g.n()).map(|u| g.left_neighbors(u).to_vec()), g.n_right());
    let mut best: Option<(Expansion, Vec<usize>)> = None;
    enumerate(&masks, 1, inst.k, &mut |s, m| {
        let e = Expansion::new(popcount(m), s.len());
        if better(e, s, &best) {
            best = Some((e, s.to_vec()));
        }
    });
    Solution::evaluate(g, best.expect("nonempty").1)
}
