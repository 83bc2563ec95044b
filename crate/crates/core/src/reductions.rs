//! Problem equivalences: set systems vs bipartite graphs, and the two
//! reductions between the undirected union-neighborhood variant and SSBVE.

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Hypergraph, SsbveInstance, UndirectedGraph};

/// Membership graph: one left vertex per set, one right vertex per element.
pub fn mku_to_ssbve(h: &Hypergraph, k: usize) -> Result<SsbveInstance> {
    if k == 0 || k > h.m() {
        return Err(Error::InvalidBudget { k, max: h.m() });
    }
    let g = BipartiteGraph::from_sorted_left(h.m(), h.n_elements(), h.sets().to_vec());
    SsbveInstance::new(g, k)
}

pub fn ssbve_to_mku(inst: &SsbveInstance) -> (Hypergraph, usize) {
    let g = &inst.graph;
    let sets = (0..g.n()).map(|u| g.left_neighbors(u).to_vec()).collect();
    let h = Hypergraph::new(g.n_right(), sets).expect("adjacency lists are valid sets");
    (h, inst.k)
}

/// Double cover: left and right copies of the vertex set, `(u, v)` iff `{u, v}` is an edge.
pub fn ssveu_to_ssbve(g: &UndirectedGraph, k: usize) -> Result<SsbveInstance> {
    let adj = (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect();
    let b = BipartiteGraph::from_sorted_left(g.n(), g.n(), adj);
    SsbveInstance::new(b, k)
}

/// Default clique size for [`ssbve_to_ssveu`]: `n + n' + 1`.
pub fn default_clique_size(inst: &SsbveInstance) -> usize {
    inst.graph.n() + inst.graph.n_right() + 1
}

/// Vertex layout of the output: `U` first, then `V`, then the clique.
///
/// Every right vertex is joined to every clique vertex, so picking a clique
/// vertex costs more neighbors than the whole of `U ∪ V` can.
pub fn ssbve_to_ssveu(inst: &SsbveInstance, clique_size: usize) -> Result<UndirectedGraph> {
    let g = &inst.graph;
    let (n, nr) = (g.n(), g.n_right());
    if clique_size <= n + nr {
        return Err(Error::CliqueTooSmall { given: clique_size, required: n + nr });
    }
    let c0 = n + nr;
    let mut edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (u, n + v)).collect();
    for v in 0..nr {
        for c in 0..clique_size {
            edges.push((n + v, c0 + c));
        }
    }
    for a in 0..clique_size {
        for b in a + 1..clique_size {
            edges.push((c0 + a, c0 + b));
        }
    }
    UndirectedGraph::from_edges(c0 + clique_size, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_sets_example() {
        let h = Hypergraph::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let inst = mku_to_ssbve(&h, 1).unwrap();
        assert_eq!((inst.graph.n(), inst.graph.n_right()), (2, 3));
        assert_eq!(inst.graph.neighborhood_size(&[0]), h.union_size(&[0]));
        assert_eq!(inst.graph.neighborhood_size(&[0, 1]), 3);
        assert!(mku_to_ssbve(&h, 3).is_err());
    }

    #[test]
    fn round_trip_with_empty_set() {
        let h = Hypergraph::new(4, vec![vec![3, 0], vec![], vec![1, 2, 3]]).unwrap();
        let inst = mku_to_ssbve(&h, 2).unwrap();
        let (back, k) = ssbve_to_mku(&inst);
        assert_eq!(back, h);
        assert_eq!(k, 2);
        assert!(back.sets()[1].is_empty());
    }

    #[test]
    fn triangle_double_cover() {
        let t = UndirectedGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let inst = ssveu_to_ssbve(&t, 1).unwrap();
        assert_eq!(inst.graph.neighborhood_size(&[0]), t.neighborhood(&[0]).len());
        assert_eq!(inst.graph.neighborhood_size(&[0]), 2);
    }

    #[test]
    fn clique_size_checked() {
        let g = BipartiteGraph::from_edges(2, 1, &[(0, 0), (1, 0)]).unwrap();
        let inst = SsbveInstance::new(g, 2).unwrap();
        assert!(matches!(ssbve_to_ssveu(&inst, 3), Err(Error::CliqueTooSmall { .. })));
        let u = ssbve_to_ssveu(&inst, default_clique_size(&inst)).unwrap();
        assert_eq!(u.n(), 2 + 1 + 4);
        assert_eq!(u.degree(2), 2 + 4);
    }
}
