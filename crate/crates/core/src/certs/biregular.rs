use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::BipartiteGraph;

/// Drops edges (highest right index first) until left degrees are at most
/// `cap_l` and right degrees at most `cap_r`.
pub fn cap_degrees(g: &BipartiteGraph, cap_l: usize, cap_r: usize) -> BipartiteGraph {
    let mut adj: Vec<Vec<usize>> = (0..g.n()).map(|u| g.left_neighbors(u).to_vec()).collect();
    for list in adj.iter_mut() {
        list.truncate(cap_l);
    }
    let mut right_deg = vec![0usize; g.n_right()];
    for list in adj.iter_mut() {
        list.retain(|&v| {
            if right_deg[v] < cap_r {
                right_deg[v] += 1;
                true
            } else {
                false
            }
        });
    }
    BipartiteGraph::from_sorted_left(g.n(), g.n_right(), adj)
}

/// Adds edges until every left vertex has degree `d_l` and every right
/// vertex degree `d_r`.
///
/// Greedy pass: the left vertex with the largest deficiency is joined to the
/// non-adjacent right vertex with the largest deficiency. If the greedy gets
/// stuck the completion is recomputed from the input as a max-flow over
/// non-edges, which finds one whenever any edge-adding completion exists.
pub fn biregularize(g: &BipartiteGraph, d_l: usize, d_r: usize) -> Result<BipartiteGraph> {
    let (n, s) = (g.n(), g.n_right());
    if n * d_l != s * d_r {
        return Err(Error::Infeasible(format!("{n}*{d_l} != {s}*{d_r}")));
    }
    if let Some(u) = (0..n).find(|&u| g.left_degree(u) > d_l) {
        return Err(Error::Infeasible(format!("left vertex {u} has degree above {d_l}")));
    }
    if let Some(v) = (0..s).find(|&v| g.right_degree(v) > d_r) {
        return Err(Error::Infeasible(format!("right vertex {v} has degree above {d_r}")));
    }
    if let Some(out) = greedy(g, d_l, d_r) {
        return Ok(out);
    }
    flow_completion(g, d_l, d_r)
}

fn greedy(g: &BipartiteGraph, d_l: usize, d_r: usize) -> Option<BipartiteGraph> {
    let mut adj: Vec<Vec<usize>> = (0..g.n()).map(|u| g.left_neighbors(u).to_vec()).collect();
    let mut def_l: Vec<usize> = (0..g.n()).map(|u| d_l - g.left_degree(u)).collect();
    let mut def_r: Vec<usize> = (0..g.n_right()).map(|v| d_r - g.right_degree(v)).collect();
    loop {
        let u = (0..g.n()).max_by_key(|&u| (def_l[u], std::cmp::Reverse(u)))?;
        if def_l[u] == 0 {
            break;
        }
        let v = (0..g.n_right())
            .filter(|&v| def_r[v] > 0 && adj[u].binary_search(&v).is_err())
            .max_by_key(|&v| (def_r[v], std::cmp::Reverse(v)))?;
        let pos = adj[u].binary_search(&v).unwrap_err();
        adj[u].insert(pos, v);
        def_l[u] -= 1;
        def_r[v] -= 1;
    }
    Some(BipartiteGraph::from_sorted_left(g.n(), g.n_right(), adj))
}

fn flow_completion(g: &BipartiteGraph, d_l: usize, d_r: usize) -> Result<BipartiteGraph> {
    let (n, s) = (g.n(), g.n_right());
    let (src, sink) = (n + s, n + s + 1);
    let mut net = FlowNetwork::new(n + s + 2);
    let mut need = 0i64;
    for u in 0..n {
        let d = (d_l - g.left_degree(u)) as i64;
        need += d;
        net.add_edge(src, u, d);
    }
    for v in 0..s {
        net.add_edge(n + v, sink, (d_r - g.right_degree(v)) as i64);
    }
    let mut candidates = Vec::new();
    for u in 0..n {
        if g.left_degree(u) == d_l {
            continue;
        }
        for v in 0..s {
            if g.right_degree(v) < d_r && !g.has_edge(u, v) {
                candidates.push((net.add_edge(u, n + v, 1), u, v));
            }
        }
    }
    let got = net.max_flow(src, sink);
    if got != need {
        return Err(Error::Stalled(format!("only {got} of {need} missing edges can be placed")));
    }
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    edges.extend(candidates.into_iter().filter(|(id, _, _)| net.flow(*id) == 1).map(|(_, u, v)| (u, v)));
    BipartiteGraph::from_edges(n, s, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::gen_gap_instance;

    fn is_biregular(g: &BipartiteGraph, d_l: usize, d_r: usize) -> bool {
        (0..g.n()).all(|u| g.left_degree(u) == d_l) && (0..g.n_right()).all(|v| g.right_degree(v) == d_r)
    }

    #[test]
    fn identity_on_biregular() {
        let g = BipartiteGraph::from_edges(2, 2, &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(biregularize(&g, 1, 1).unwrap(), g);
    }

    #[test]
    fn empty_to_matching() {
        let out = biregularize(&BipartiteGraph::empty(2, 2), 1, 1).unwrap();
        assert!(is_biregular(&out, 1, 1));
    }

    #[test]
    fn infeasible_sums() {
        assert!(matches!(biregularize(&BipartiteGraph::empty(3, 2), 1, 1), Err(Error::Infeasible(_))));
    }

    #[test]
    fn flow_completion_matches_greedy_and_detects_dead_ends() {
        let g = BipartiteGraph::from_edges(2, 2, &[(1, 0)]).unwrap();
        let out = flow_completion(&g, 1, 1).unwrap();
        assert!(is_biregular(&out, 1, 1) && out.has_edge(0, 1));
        // the only deficient pair is already adjacent
        let blocked = BipartiteGraph::from_edges(3, 3, &[(0, 0), (1, 1), (1, 2), (2, 1), (2, 2)]).unwrap();
        assert!(greedy(&blocked, 2, 2).is_none());
        assert!(matches!(biregularize(&blocked, 2, 2), Err(Error::Stalled(_))));
    }

    #[test]
    fn gap_instance_degree_audit() {
        for (n, s, d_l) in [(512usize, 64usize, 8usize), (512, 23, 23)] {
            let d_r = n * d_l / s;
            for seed in 0..3 {
                let g = gen_gap_instance(n, s, d_l as f64 * 2.0 / 3.0, seed).unwrap();
                let capped = cap_degrees(&g, d_l, d_r);
                let out = biregularize(&capped, d_l, d_r).unwrap();
                assert!(is_biregular(&out, d_l, d_r));
                assert!(capped.edges().all(|(u, v)| out.has_edge(u, v)));
            }
        }
    }
}
