use crate::error::{Error, Result};
use crate::graph::{Solution, SsbveInstance};
use crate::les::least_expanding_set;

/// The `k` left vertices of smallest degree (ties by index).
pub fn trivial_ksubset(inst: &SsbveInstance) -> Solution {
    let g = &inst.graph;
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&u| (g.left_degree(u), u));
    order.truncate(inst.k);
    Solution::evaluate(g, order).expect("k >= 1")
}

/// Keeps the `k` smallest indices of a sorted set.
pub fn trim_lex(mut set: Vec<usize>, k: usize) -> Vec<usize> {
    set.sort_unstable();
    set.truncate(k);
    set
}

/// Repeatedly asks `atmost` for a small-expansion set on the residual instance
/// (chosen left vertices removed, already covered right vertices free) until
/// exactly `k` vertices are collected. The final batch is trimmed lexicographically.
///
/// `atmost` receives the residual instance in local indices and returns a
/// solution in the same indices.
pub fn exact_from_atmost<F>(inst: &SsbveInstance, mut atmost: F) -> Result<Solution>
where
    F: FnMut(&SsbveInstance) -> Result<Solution>,
{
    exact_from_atmost_seeded(inst, Vec::new(), &mut atmost)
}

/// As [`exact_from_atmost`] with `start` taken as the first batch.
pub(crate) fn exact_from_atmost_seeded(
    inst: &SsbveInstance,
    start: Vec<usize>,
    atmost: &mut dyn FnMut(&SsbveInstance) -> Result<Solution>,
) -> Result<Solution> {
    let g = &inst.graph;
    let mut chosen = trim_lex(start, inst.k);
    chosen.dedup();
    while chosen.len() < inst.k {
        let mut taken = vec![false; g.n()];
        for &u in &chosen {
            taken[u] = true;
        }
        let remaining: Vec<usize> = (0..g.n()).filter(|&u| !taken[u]).collect();
        let mut covered = vec![false; g.n_right()];
        for v in g.neighborhood(&chosen) {
            covered[v] = true;
        }
        let residual = g.induced_left(&remaining).mask_right(&covered);
        let budget = inst.k - chosen.len();
        let sub = SsbveInstance::new(residual, budget)?;
        let batch = atmost(&sub)?;
        if batch.chosen.is_empty() {
            return Err(Error::SolverStalled);
        }
        let batch = trim_lex(batch.chosen, budget);
        chosen.extend(batch.into_iter().map(|i| remaining[i]));
    }
    Solution::evaluate(g, chosen)
}

/// Exact-`k` conversion driven by the least expanding set.
pub fn les_trim(inst: &SsbveInstance) -> Result<Solution> {
    exact_from_atmost(inst, |sub| least_expanding_set(&sub.graph))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_les;
    use crate::gen::gen_random_bipartite;
    use crate::graph::BipartiteGraph;

    #[test]
    fn trivial_cases() {
        let g = BipartiteGraph::from_edges(4, 2, &[(0, 0), (1, 1), (1, 0)]).unwrap();
        let s = trivial_ksubset(&SsbveInstance::new(g.clone(), 4).unwrap());
        assert_eq!(s.chosen, vec![0, 1, 2, 3]);
        let s = trivial_ksubset(&SsbveInstance::new(g, 2).unwrap());
        assert_eq!((s.chosen, s.neighborhood_size), (vec![2, 3], 0));
    }

    #[test]
    fn trivial_union_bound() {
        let g = gen_random_bipartite(30, 10, 0.3, 8).unwrap();
        let s = trivial_ksubset(&SsbveInstance::new(g.clone(), 5).unwrap());
        let mut degs: Vec<usize> = (0..30).map(|u| g.left_degree(u)).collect();
        degs.sort_unstable();
        assert!(s.neighborhood_size <= degs[..5].iter().sum());
    }

    #[test]
    fn matching_with_exact_les() {
        let g = BipartiteGraph::from_edges(5, 5, &[(0, 0), (1, 1), (2, 2), (3, 3), (4, 4)]).unwrap();
        let inst = SsbveInstance::new(g, 3).unwrap();
        let s = exact_from_atmost(&inst, |sub| exact_les(&sub.graph)).unwrap();
        assert_eq!((s.chosen.len(), s.neighborhood_size), (3, 3));
    }

    #[test]
    fn isolated_first() {
        let g = BipartiteGraph::from_edges(4, 2, &[(0, 0), (1, 1)]).unwrap();
        let inst = SsbveInstance::new(g, 3).unwrap();
        let s = les_trim(&inst).unwrap();
        assert!(s.chosen.contains(&2) && s.chosen.contains(&3));
        assert_eq!(s.neighborhood_size, 1);
    }

    #[test]
    fn stalled_solver() {
        let g = BipartiteGraph::from_edges(2, 1, &[(0, 0)]).unwrap();
        let inst = SsbveInstance::new(g.clone(), 1).unwrap();
        let empty = Solution { chosen: vec![], neighborhood_size: 0, expansion: crate::graph::Expansion::new(0, 1) };
        let r = exact_from_atmost(&inst, |_| Ok(empty.clone()));
        assert_eq!(r, Err(Error::SolverStalled));
    }
}
