use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

/// A vertex on either side of a bipartite graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Vertex {
    U(usize),
    V(usize),
}

const INF: u32 = u32::MAX / 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Group {
    Single(usize),
    Nbr(usize),
}

/// Minimum cover costs on a fixed graph.
///
/// Trees are searched in the projection of `G` onto `U` (two left vertices
/// are adjacent when they share a right neighbour); right vertices on a tree
/// are free, so a tree's weight is its number of left vertices.
#[derive(Debug, Clone)]
pub struct CoverOracle {
    graph: BipartiteGraph,
    words: usize,
    /// Left vertices adjacent to `v`.
    nbr: Vec<u64>,
    /// Projection neighbourhood of each left vertex.
    prow: Vec<u64>,
    /// Left vertices within projection distance one of `N(v)`.
    nbr_ball: Vec<u64>,
}

fn set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

fn ones(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(w, &word)| {
        let mut x = word;
        std::iter::from_fn(move || {
            if x == 0 {
                return None;
            }
            let b = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(w * 64 + b)
        })
    })
}

impl CoverOracle {
    pub fn new(g: &BipartiteGraph) -> Self {
        let (n, s) = (g.n(), g.n_right());
        let words = n.div_ceil(64).max(1);
        let mut nbr = vec![0u64; s * words];
        for v in 0..s {
            for &u in g.right_neighbors(v) {
                set(&mut nbr[v * words..(v + 1) * words], u);
            }
        }
        let mut prow = vec![0u64; n * words];
        for u in 0..n {
            for &v in g.left_neighbors(u) {
                for w in 0..words {
                    prow[u * words + w] |= nbr[v * words + w];
                }
            }
        }
        let mut nbr_ball = vec![0u64; s * words];
        for v in 0..s {
            for &u in g.right_neighbors(v) {
                for w in 0..words {
                    nbr_ball[v * words + w] |= prow[u * words + w];
                }
            }
        }
        Self { graph: g.clone(), words, nbr, prow, nbr_ball }
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    fn prow(&self, u: usize) -> &[u64] {
        &self.prow[u * self.words..(u + 1) * self.words]
    }

    fn bits(&self, g: Group) -> Vec<u64> {
        match g {
            Group::Single(u) => {
                let mut b = vec![0u64; self.words];
                set(&mut b, u);
                b
            }
            Group::Nbr(v) => self.nbr[v * self.words..(v + 1) * self.words].to_vec(),
        }
    }

    fn ball1(&self, g: Group) -> Vec<u64> {
        match g {
            Group::Single(u) => {
                let mut b = self.prow(u).to_vec();
                set(&mut b, u);
                b
            }
            Group::Nbr(v) => {
                let mut b = self.nbr_ball[v * self.words..(v + 1) * self.words].to_vec();
                for (x, y) in b.iter_mut().zip(&self.nbr[v * self.words..(v + 1) * self.words]) {
                    *x |= y;
                }
                b
            }
        }
    }

    /// Projection distance from every left vertex to the group.
    fn distances(&self, g: Group) -> Vec<u32> {
        let n = self.graph.n();
        let mut dist = vec![INF; n];
        let mut visited = self.bits(g);
        let mut frontier: Vec<usize> = ones(&visited).collect();
        for &u in &frontier {
            dist[u] = 0;
        }
        let mut d = 0;
        while !frontier.is_empty() {
            d += 1;
            let mut next = vec![0u64; self.words];
            for &u in &frontier {
                for (x, y) in next.iter_mut().zip(self.prow(u)) {
                    *x |= y;
                }
            }
            for (x, y) in next.iter_mut().zip(&visited) {
                *x &= !y;
            }
            frontier = ones(&next).collect();
            for &u in &frontier {
                dist[u] = d;
                set(&mut visited, u);
            }
        }
        dist
    }

    /// Projection distance between two groups.
    fn group_distance(&self, a: Group, b: Group) -> u32 {
        let bb = self.bits(b);
        if intersects(&self.bits(a), &bb) {
            return 0;
        }
        if intersects(&self.ball1(a), &bb) {
            return 1;
        }
        let da = self.distances(a);
        ones(&bb).map(|u| da[u]).min().unwrap_or(INF)
    }

    /// Fewest left vertices in a connected projection subgraph meeting every group.
    fn steiner(&self, groups: &[Group]) -> u32 {
        match groups.len() {
            0 => 0,
            1 => {
                if ones(&self.bits(groups[0])).next().is_some() {
                    1
                } else {
                    INF
                }
            }
            2 => self.group_distance(groups[0], groups[1]).saturating_add(1).min(INF),
            3 => {
                let ds: Vec<Vec<u32>> = groups.iter().map(|&g| self.distances(g)).collect();
                (0..self.graph.n())
                    .map(|c| ds.iter().map(|d| d[c]).fold(1u32, |a, b| a.saturating_add(b)))
                    .min()
                    .unwrap_or(INF)
                    .min(INF)
            }
            _ => self.dreyfus_wagner(groups),
        }
    }

    fn dreyfus_wagner(&self, groups: &[Group]) -> u32 {
        let n = self.graph.n();
        let g = groups.len();
        let full = (1usize << g) - 1;
        let mut dp = vec![vec![INF; n]; full + 1];
        for (i, &grp) in groups.iter().enumerate() {
            dp[1 << i] = self.distances(grp).into_iter().map(|d| d.saturating_add(1).min(INF)).collect();
        }
        for mask in 1..=full {
            if mask.count_ones() < 2 {
                continue;
            }
            let low = mask & mask.wrapping_neg();
            let mut cur = vec![INF; n];
            let mut sub = (mask - 1) & mask;
            while sub > 0 {
                if sub & low != 0 {
                    let other = mask ^ sub;
                    for x in 0..n {
                        let v = dp[sub][x].saturating_add(dp[other][x]).saturating_sub(1);
                        if v < cur[x] {
                            cur[x] = v;
                        }
                    }
                }
                sub = (sub - 1) & mask;
            }
            // move the root along the projection, paying one per new left vertex
            let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); n + 2];
            for x in 0..n {
                if cur[x] < INF {
                    buckets[(cur[x] as usize).min(n + 1)].push(x);
                }
            }
            let mut b = 0;
            while b < buckets.len() {
                while let Some(x) = buckets[b].pop() {
                    if cur[x] as usize != b {
                        continue;
                    }
                    for y in ones(self.prow(x)) {
                        if cur[x] + 1 < cur[y] {
                            cur[y] = cur[x] + 1;
                            buckets[(cur[y] as usize).min(n + 1)].push(y);
                        }
                    }
                }
                b += 1;
            }
            dp[mask] = cur;
        }
        dp[full].iter().copied().min().unwrap_or(INF)
    }

    /// `S_U` and `S_V = (S ∩ V) \ N(S_U)` as sorted index lists.
    pub fn split(&self, subset: &[Vertex]) -> (Vec<usize>, Vec<usize>) {
        let mut su: Vec<usize> = subset.iter().filter_map(|w| if let Vertex::U(u) = w { Some(*u) } else { None }).collect();
        su.sort_unstable();
        su.dedup();
        let mut sv: Vec<usize> = subset
            .iter()
            .filter_map(|w| if let Vertex::V(v) = w { Some(*v) } else { None })
            .filter(|&v| !su.iter().any(|&u| self.graph.has_edge(u, v)))
            .collect();
        sv.sort_unstable();
        sv.dedup();
        (su, sv)
    }

    /// Minimum cost of a cover `(T, S')` of `subset`: left vertices of the tree,
    /// plus `|S'|`, plus one when the tree is nonempty.
    pub fn cost(&self, subset: &[Vertex]) -> Result<u32> {
        let (su, sv) = self.split(subset);
        let mut best = INF;
        for mask in 0u32..(1 << sv.len()) {
            let primes = mask.count_ones();
            let mut groups: Vec<Group> = su.iter().map(|&u| Group::Single(u)).collect();
            groups.extend(sv.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 0).map(|(_, &v)| Group::Nbr(v)));
            if groups.is_empty() {
                best = best.min(primes);
                continue;
            }
            if primes + 2 >= best {
                continue;
            }
            let tree = self.steiner(&groups);
            if tree < INF {
                best = best.min(primes + 1 + tree);
            }
        }
        if best >= INF {
            return Err(Error::NoCover(format!("left vertices {su:?} are not connected")));
        }
        Ok(best)
    }
}

/// One-shot cover cost; build a [`CoverOracle`] for repeated queries.
pub fn cover_cost(g: &BipartiteGraph, subset: &[Vertex]) -> Result<u32> {
    CoverOracle::new(g).cost(subset)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::gen::gen_random_bipartite;
    use proptest::prelude::*;

    /// Enumerates every left set that is connected through right vertices and
    /// every `S'`, keeping covers that account for all of `S_U ∪ S_V`.
    pub(crate) fn brute_cost(g: &BipartiteGraph, subset: &[Vertex]) -> Option<u32> {
        let o = CoverOracle::new(g);
        let (su, sv) = o.split(subset);
        let n = g.n();
        let mut best: Option<u32> = None;
        for mask in 0u32..(1 << sv.len()) {
            let primes = mask.count_ones();
            let rest: Vec<usize> = sv.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 0).map(|(_, &v)| v).collect();
            if su.is_empty() && rest.is_empty() {
                best = Some(best.map_or(primes, |b| b.min(primes)));
                continue;
            }
            for t in 1u32..(1 << n) {
                let members: Vec<usize> = (0..n).filter(|&u| t >> u & 1 == 1).collect();
                if !su.iter().all(|&u| t >> u & 1 == 1) {
                    continue;
                }
                if !rest.iter().all(|&v| g.right_neighbors(v).iter().any(|&u| t >> u & 1 == 1)) {
                    continue;
                }
                // connectivity through shared right neighbours
                let mut seen = 1u32 << members[0];
                let mut stack = vec![members[0]];
                while let Some(x) = stack.pop() {
                    for &v in g.left_neighbors(x) {
                        for &y in g.right_neighbors(v) {
                            if t >> y & 1 == 1 && seen >> y & 1 == 0 {
                                seen |= 1 << y;
                                stack.push(y);
                            }
                        }
                    }
                }
                if seen != t {
                    continue;
                }
                let c = members.len() as u32 + primes + 1;
                best = Some(best.map_or(c, |b| b.min(c)));
            }
        }
        best
    }

    #[test]
    fn base_values() {
        let g = BipartiteGraph::from_edges(3, 2, &[(0, 0), (1, 0), (1, 1), (2, 1)]).unwrap();
        assert_eq!(cover_cost(&g, &[]).unwrap(), 0);
        assert_eq!(cover_cost(&g, &[Vertex::V(1)]).unwrap(), 1);
        assert_eq!(cover_cost(&g, &[Vertex::U(2)]).unwrap(), 2);
        // forced neighbour adds nothing
        assert_eq!(cover_cost(&g, &[Vertex::U(2), Vertex::V(1)]).unwrap(), 2);
        // path 0 - v0 - 1 - v1 - 2 uses three left vertices
        assert_eq!(cover_cost(&g, &[Vertex::U(0), Vertex::U(2)]).unwrap(), 4);
    }

    #[test]
    fn disconnected_has_no_cover() {
        let g = BipartiteGraph::from_edges(2, 2, &[(0, 0), (1, 1)]).unwrap();
        assert!(matches!(cover_cost(&g, &[Vertex::U(0), Vertex::U(1)]), Err(Error::NoCover(_))));
        assert_eq!(cover_cost(&g, &[Vertex::V(0), Vertex::V(1)]).unwrap(), 2);
    }

    fn arb_case() -> impl Strategy<Value = (u64, Vec<(bool, usize)>)> {
        (any::<u64>(), prop::collection::vec((any::<bool>(), 0usize..7), 0..6))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn matches_brute_force((seed, picks) in arb_case()) {
            let g = gen_random_bipartite(7, 5, 0.35, seed).unwrap();
            let subset: Vec<Vertex> = picks
                .into_iter()
                .map(|(left, i)| if left { Vertex::U(i % 7) } else { Vertex::V(i % 5) })
                .collect();
            let fast = cover_cost(&g, &subset).ok();
            prop_assert_eq!(fast, brute_cost(&g, &subset));
        }

        #[test]
        fn monotone_under_superset((seed, picks) in arb_case(), extra in (any::<bool>(), 0usize..7)) {
            let g = gen_random_bipartite(7, 5, 0.5, seed).unwrap();
            let mut subset: Vec<Vertex> = picks
                .into_iter()
                .map(|(left, i)| if left { Vertex::U(i % 7) } else { Vertex::V(i % 5) })
                .collect();
            let small = cover_cost(&g, &subset);
            subset.push(if extra.0 { Vertex::U(extra.1 % 7) } else { Vertex::V(extra.1 % 5) });
            if let (Ok(a), Ok(b)) = (small, cover_cost(&g, &subset)) {
                prop_assert!(a <= b);
            }
        }
    }
}
