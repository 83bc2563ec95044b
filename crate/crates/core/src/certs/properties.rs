use serde::{Deserialize, Serialize};

use crate::exact::exact_ssbve_with_budget;
use crate::gen::binomial_coeff;
use crate::graph::{BipartiteGraph, SsbveInstance};
use crate::rng::{rng_from_seed, sample_subset};

use super::{Family, VerifyReport};

const EXACT_BUDGET: u128 = 1_000_000;

/// Outcome of the three random-instance property checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertiesReport {
    pub report: VerifyReport,
    /// Smallest neighbourhood of a `k`-subset found (exact when `min_union_exact`).
    pub min_union: usize,
    pub min_union_exact: bool,
    pub lower_bound: f64,
    pub item1: bool,
    pub degree_violations: usize,
    pub item2: bool,
    /// The path property is only claimed when `s^2 <= n`; it is measured regardless.
    pub item3_applicable: bool,
    pub path_pairs: usize,
    pub path_found: usize,
    pub item3: bool,
}

fn bitset_rows(g: &BipartiteGraph) -> (usize, Vec<u64>) {
    let words = g.n().div_ceil(64).max(1);
    let mut rows = vec![0u64; g.n_right() * words];
    for v in 0..g.n_right() {
        for &u in g.right_neighbors(v) {
            rows[v * words + u / 64] |= 1 << (u % 64);
        }
    }
    (words, rows)
}

/// Whether `a` and `b` are joined by a path `a - v1 - w - v2 - b` on distinct vertices.
fn has_path4(g: &BipartiteGraph, words: usize, rows: &[u64], a: usize, b: usize) -> bool {
    for &v1 in g.left_neighbors(a) {
        for &v2 in g.left_neighbors(b) {
            if v1 == v2 {
                continue;
            }
            for w in 0..words {
                let mut x = rows[v1 * words + w] & rows[v2 * words + w];
                for end in [a, b] {
                    if end / 64 == w {
                        x &= !(1 << (end % 64));
                    }
                }
                if x != 0 {
                    return true;
                }
            }
        }
    }
    false
}

/// Checks a gap instance for: every `k`-subset has at least `min(k, s)/2`
/// neighbours (exact when `C(n, k)` is small, else over `samples` random
/// subsets); all degrees lie within half and three halves of their expected
/// values `d_l` and `n d_l / s`; and `samples` random left pairs are joined by
/// a path of length four.
pub fn check_instance_properties(g: &BipartiteGraph, k: usize, d_l: f64, samples: usize, seed: u64) -> PropertiesReport {
    let (n, s) = (g.n(), g.n_right());
    let k = k.clamp(1, n.max(1));
    let mut rng = rng_from_seed(seed);

    let (min_union, exact) = match SsbveInstance::new(g.clone(), k) {
        Ok(inst) if binomial_coeff(n, k) <= EXACT_BUDGET => match exact_ssbve_with_budget(&inst, EXACT_BUDGET) {
            Ok(sol) => (sol.neighborhood_size, true),
            Err(_) => (usize::MAX, false),
        },
        _ => {
            let m = (0..samples)
                .map(|_| g.neighborhood_size(&sample_subset(&mut rng, n, k)))
                .min()
                .unwrap_or(usize::MAX);
            (m, false)
        }
    };
    let bound = k.min(s);
    let item1 = 2 * min_union >= bound;
    let mut f1 = Family::new("k_subset_union_lower_bound");
    f1.ge_f64(min_union as f64, bound as f64 / 2.0);

    let d_r = n as f64 * d_l / s.max(1) as f64;
    let within = |deg: usize, d: f64| deg as f64 >= d / 2.0 && deg as f64 <= 1.5 * d;
    let violations = (0..n).filter(|&u| !within(g.left_degree(u), d_l)).count()
        + (0..s).filter(|&v| !within(g.right_degree(v), d_r)).count();
    let item2 = violations == 0;
    let mut f2 = Family::new("degree_bounds");
    f2.ge_f64(0.0, violations as f64);

    let (words, rows) = bitset_rows(g);
    let mut found = 0;
    let pairs = if n >= 2 { samples } else { 0 };
    for _ in 0..pairs {
        let p = sample_subset(&mut rng, n, 2);
        if has_path4(g, words, &rows, p[0], p[1]) {
            found += 1;
        }
    }
    let applicable = s * s <= n;
    let item3 = found == pairs;
    let mut checks = vec![f1.finish(), f2.finish()];
    if applicable {
        let mut f3 = Family::new("length_four_paths");
        f3.ge_f64(found as f64, pairs as f64);
        checks.push(f3.finish());
    }
    PropertiesReport {
        report: VerifyReport::new(checks),
        min_union,
        min_union_exact: exact,
        lower_bound: bound as f64 / 2.0,
        item1,
        degree_violations: violations,
        item2,
        item3_applicable: applicable,
        path_pairs: pairs,
        path_found: found,
        item3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::gen_gap_instance;

    #[test]
    fn complete_graph() {
        let edges: Vec<(usize, usize)> = (0..9).flat_map(|u| (0..3).map(move |v| (u, v))).collect();
        let g = BipartiteGraph::from_edges(9, 3, &edges).unwrap();
        let rep = check_instance_properties(&g, 4, 3.0, 50, 0);
        assert!(rep.min_union_exact);
        assert_eq!(rep.min_union, 3);
        assert!(rep.item1 && rep.item2 && rep.item3);
        assert!(rep.item3_applicable);
        assert!(rep.report.passed);
    }

    #[test]
    fn path_detection() {
        // 0 - v0 - 1 - v1 - 2 is the only route between 0 and 2
        let g = BipartiteGraph::from_edges(3, 2, &[(0, 0), (1, 0), (1, 1), (2, 1)]).unwrap();
        let (w, rows) = bitset_rows(&g);
        assert!(has_path4(&g, w, &rows, 0, 2));
        assert!(!has_path4(&g, w, &rows, 0, 1));
    }

    #[test]
    fn degree_audit_flags_outliers() {
        let g = BipartiteGraph::from_edges(4, 2, &[(0, 0), (0, 1), (1, 0), (2, 1)]).unwrap();
        let rep = check_instance_properties(&g, 2, 1.0, 10, 0);
        // left degrees 2 and 0 fall outside [1/2, 3/2]
        assert_eq!(rep.degree_violations, 2);
        assert!(!rep.item2 && !rep.report.passed);
    }

    #[test]
    fn small_gap_instance_sweep() {
        let n = 256;
        let d_l = 20.0 * (n as f64).ln();
        let mut ok = 0;
        for seed in 0..20 {
            // d_L = 20 ln n exceeds s, so the family saturates at the complete graph
            let g = gen_gap_instance(n, 16, d_l.min(16.0), seed).unwrap();
            let rep = check_instance_properties(&g, 16, d_l.min(16.0), 100, seed);
            ok += usize::from(rep.item1 && rep.item3);
        }
        assert_eq!(ok, 20);
    }
}
