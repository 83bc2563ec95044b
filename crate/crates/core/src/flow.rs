//! Dinic's maximum flow on integer capacities.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
}

/// Flow network with paired forward/backward arcs (`id ^ 1` is the reverse arc).
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    head: Vec<Vec<usize>>,
    original: Vec<i64>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        Self {
            arcs: Vec::new(),
            head: vec![Vec::new(); nodes],
            original: Vec::new(),
            level: vec![0; nodes],
            iter: vec![0; nodes],
        }
    }

    pub fn node_count(&self) -> usize {
        self.head.len()
    }

    /// Adds a directed edge and returns its id.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64) -> usize {
        assert!(cap >= 0, "negative capacity");
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap });
        self.arcs.push(Arc { to: from, cap: 0 });
        self.original.push(cap);
        self.original.push(0);
        self.head[from].push(id);
        self.head[to].push(id + 1);
        id
    }

    /// Flow currently routed through edge `id`.
    pub fn flow(&self, id: usize) -> i64 {
        self.original[id] - self.arcs[id].cap
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut q = VecDeque::new();
        self.level[s] = 0;
        q.push_back(s);
        while let Some(v) = q.pop_front() {
            for &id in &self.head[v] {
                let a = &self.arcs[id];
                if a.cap > 0 && self.level[a.to] < 0 {
                    self.level[a.to] = self.level[v] + 1;
                    q.push_back(a.to);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, limit: i64) -> i64 {
        if v == t {
            return limit;
        }
        while self.iter[v] < self.head[v].len() {
            let id = self.head[v][self.iter[v]];
            let (to, cap) = (self.arcs[id].to, self.arcs[id].cap);
            if cap > 0 && self.level[v] < self.level[to] {
                let d = self.dfs(to, t, limit.min(cap));
                if d > 0 {
                    self.arcs[id].cap -= d;
                    self.arcs[id ^ 1].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return total;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
    }

    /// Nodes that can still reach `t` in the residual graph.
    ///
    /// After a maximum flow, the complement of this set is the largest
    /// source side over all minimum cuts.
    pub fn can_reach(&self, t: usize) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        let mut q = VecDeque::from([t]);
        seen[t] = true;
        while let Some(v) = q.pop_front() {
            // residual arc w -> v exists iff the paired arc v -> w has flow to return,
            // i.e. arcs[id ^ 1].cap > 0 for an arc id leaving v
            for &id in &self.head[v] {
                let w = self.arcs[id].to;
                if !seen[w] && self.arcs[id ^ 1].cap > 0 {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
        seen
    }
}
