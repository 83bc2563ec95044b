use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Solution, SsbveInstance};
use crate::les::least_expanding_set;
use crate::rng::{derive_seed, rng_from_seed, shuffle};

use super::baseline::{exact_from_atmost_seeded, les_trim, trivial_ksubset};
use super::preprocess::{preprocess, PreprocessConfig, PreprocessedInstance};
use super::schedule::{caterpillar_schedule, CaterpillarSchedule, Step};
use super::steps::{backbone_step, final_step, first_step, hair_step, BranchState, StepOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorstCaseConfig {
    pub eps: f64,
    pub q_max: u32,
    pub branch_cap: usize,
    pub seed: u64,
}

impl Default for WorstCaseConfig {
    fn default() -> Self {
        Self { eps: 0.1, q_max: 3, branch_cap: 256, seed: 0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WorstCaseReport {
    pub solution: Solution,
    /// Which candidate family produced the answer: `pipeline`, `trivial` or `les`.
    pub winner: String,
    pub candidates: usize,
    pub degenerate_candidates: usize,
    pub branches_explored: usize,
    pub branches_dropped: usize,
    /// Best at-most set found by the step pipeline, by expansion.
    pub atmost_best: Option<Solution>,
}

/// Heap entry; ordered by (largest child index on the path, candidate, path).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Entry {
    max_child: usize,
    cand: usize,
    path: Vec<usize>,
    state: BranchState,
}

fn path_seed(seed: u64, cand: usize, path: &[usize]) -> u64 {
    path.iter().fold(derive_seed(seed, cand as u64 + 1), |acc, &i| derive_seed(acc, i as u64 + 1))
}

/// Output of the at-most step pipeline.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    /// Every distinct Done / final set, in original indices, evaluated on the input graph.
    pub solutions: Vec<Solution>,
    pub candidates: usize,
    pub degenerate_candidates: usize,
    pub explored: usize,
    pub dropped: usize,
}

fn run_step(
    pre: &PreprocessedInstance,
    sched: &CaterpillarSchedule,
    st: &BranchState,
    seed: u64,
) -> Result<StepOutcome> {
    match sched.steps[st.step_index.min(sched.steps.len() - 1)] {
        Step::First => first_step(pre),
        Step::Hair => hair_step(pre, st),
        Step::Backbone => backbone_step(pre, st, seed),
        Step::Final => final_step(pre, st).map(StepOutcome::Done),
    }
}

/// Explores the step pipeline over every preprocessed candidate.
///
/// States are expanded best-first by the key (largest child index along the
/// path, candidate, path), children being indexed after a seeded shuffle. The
/// expansion order does not depend on `branch_cap`, so a larger cap explores a
/// superset of states.
pub fn atmost_pipeline(inst: &SsbveInstance, cfg: &WorstCaseConfig) -> Result<PipelineOutput> {
    let pcfg = PreprocessConfig { eps: cfg.eps, q_max: cfg.q_max, seed: derive_seed(cfg.seed, 0xB0C) };
    let pres = preprocess(inst, &pcfg);
    let scheds = pres
        .iter()
        .map(|p| caterpillar_schedule(p.p, p.q))
        .collect::<Result<Vec<_>>>()?;
    let mut heap = BinaryHeap::new();
    for (cand, pre) in pres.iter().enumerate() {
        let root = BranchState { current: (0..pre.graph.n()).collect(), guesses: vec![], step_index: 0 };
        heap.push(Reverse(Entry { max_child: 0, cand, path: vec![], state: root }));
    }
    let mut seen = BTreeSet::new();
    let mut solutions = Vec::new();
    let (mut explored, mut dropped) = (0, 0);
    while explored < cfg.branch_cap {
        let Some(Reverse(e)) = heap.pop() else { break };
        explored += 1;
        let pre = &pres[e.cand];
        let seed = path_seed(cfg.seed, e.cand, &e.path);
        match run_step(pre, &scheds[e.cand], &e.state, seed) {
            Ok(StepOutcome::Done(sol)) => {
                let chosen: Vec<usize> = sol.chosen.iter().map(|&i| pre.origin[i]).collect();
                let sol = Solution::evaluate(&inst.graph, chosen)?;
                if seen.insert(sol.chosen.clone()) {
                    solutions.push(sol);
                }
            }
            Ok(StepOutcome::Branches(mut children)) => {
                let mut rng = rng_from_seed(derive_seed(seed, 0x5EED));
                shuffle(&mut rng, &mut children);
                for (i, state) in children.into_iter().enumerate() {
                    let mut path = e.path.clone();
                    path.push(i);
                    heap.push(Reverse(Entry { max_child: e.max_child.max(i), cand: e.cand, path, state }));
                }
            }
            Err(Error::PreconditionViolated(_)) | Err(Error::EmptyLeftSide) => dropped += 1,
            Err(other) => return Err(other),
        }
    }
    Ok(PipelineOutput {
        solutions,
        candidates: pres.len(),
        degenerate_candidates: pres.iter().filter(|p| p.degenerate).count(),
        explored,
        dropped,
    })
}

fn beats(a: &Solution, b: &Solution) -> bool {
    (a.neighborhood_size, &a.chosen) < (b.neighborhood_size, &b.chosen)
}

/// Best exactly-`k` set over: every pipeline set completed to `k` vertices by
/// repeated least-expanding-set batches on the residual instance, the
/// smallest-degree baseline, and least-expanding-set batches from scratch.
pub fn solve_worst_case_report(inst: &SsbveInstance, cfg: &WorstCaseConfig) -> Result<WorstCaseReport> {
    let out = atmost_pipeline(inst, cfg)?;
    let mut continuation = |sub: &SsbveInstance| least_expanding_set(&sub.graph);
    let mut best = (trivial_ksubset(inst), "trivial");
    let les = les_trim(inst)?;
    if beats(&les, &best.0) {
        best = (les, "les");
    }
    for sol in &out.solutions {
        let full = exact_from_atmost_seeded(inst, sol.chosen.clone(), &mut continuation)?;
        if beats(&full, &best.0) {
            best = (full, "pipeline");
        }
    }
    let atmost_best = out
        .solutions
        .iter()
        .min_by(|a, b| {
            a.expansion
                .cmp(&b.expansion)
                .then(b.chosen.len().cmp(&a.chosen.len()))
                .then_with(|| a.chosen.cmp(&b.chosen))
        })
        .cloned();
    Ok(WorstCaseReport {
        solution: best.0,
        winner: best.1.to_string(),
        candidates: out.candidates,
        degenerate_candidates: out.degenerate_candidates,
        branches_explored: out.explored,
        branches_dropped: out.dropped,
        atmost_best,
    })
}

pub fn solve_worst_case(inst: &SsbveInstance, cfg: &WorstCaseConfig) -> Result<Solution> {
    Ok(solve_worst_case_report(inst, cfg)?.solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_ssbve;
    use crate::gen::gen_random_bipartite;
    use crate::graph::BipartiteGraph;

    #[test]
    fn complete_bipartite() {
        let edges: Vec<(usize, usize)> = (0..6).flat_map(|u| (0..4).map(move |v| (u, v))).collect();
        let g = BipartiteGraph::from_edges(6, 4, &edges).unwrap();
        let s = solve_worst_case(&SsbveInstance::new(g, 3).unwrap(), &WorstCaseConfig::default()).unwrap();
        assert_eq!((s.chosen.len(), s.neighborhood_size), (3, 4));
    }

    #[test]
    fn feasible_and_not_better_than_exact() {
        for seed in 0..20 {
            let g = gen_random_bipartite(10, 7, 0.3, seed).unwrap();
            let inst = SsbveInstance::new(g, 4).unwrap();
            let s = solve_worst_case(&inst, &WorstCaseConfig { seed, ..Default::default() }).unwrap();
            assert_eq!(s.chosen.len(), 4);
            assert!(s.is_consistent(&inst.graph));
            assert!(s.neighborhood_size >= exact_ssbve(&inst).unwrap().neighborhood_size);
        }
    }

    #[test]
    fn raising_the_cap_never_hurts() {
        let g = gen_random_bipartite(40, 24, 0.15, 77).unwrap();
        let inst = SsbveInstance::new(g, 8).unwrap();
        let mut last = usize::MAX;
        for cap in [1, 4, 16, 64, 256] {
            let s = solve_worst_case(&inst, &WorstCaseConfig { branch_cap: cap, seed: 5, ..Default::default() }).unwrap();
            assert!(s.neighborhood_size <= last);
            last = s.neighborhood_size;
        }
    }
}
