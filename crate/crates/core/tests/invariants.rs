//! Cross-module properties over random inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use ssbve::approx::{solve_worst_case, WorstCaseConfig};
use ssbve::certs::{hardness_gap_calculator, GapRegime};
use ssbve::exact::exact_ssbve;
use ssbve::gen::gen_random_bipartite;
use ssbve::io::{parse_mku, parse_ssbve, parse_ssve, write_mku, write_ssbve, write_ssve};
use ssbve::reductions::{mku_to_ssbve, ssbve_to_mku};
use ssbve::{SsbveInstance, UndirectedGraph};

fn small_instance() -> impl Strategy<Value = SsbveInstance> {
    (1usize..10, 1usize..8, 0.0f64..0.8, any::<u64>()).prop_flat_map(|(n, s, p, seed)| {
        (1..=n).prop_map(move |k| SsbveInstance::new(gen_random_bipartite(n, s, p, seed).unwrap(), k).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ssbve_text_round_trip(inst in small_instance()) {
        prop_assert_eq!(parse_ssbve(&write_ssbve(&inst)).unwrap(), inst);
    }

    #[test]
    fn mku_text_and_reduction_round_trip(inst in small_instance()) {
        let (h, k) = ssbve_to_mku(&inst);
        let (h2, k2) = parse_mku(&write_mku(&h, k)).unwrap();
        prop_assert_eq!(mku_to_ssbve(&h2, k2).unwrap(), inst);
    }

    #[test]
    fn ssve_text_round_trip(n in 1usize..12, seed in any::<u64>(), k in 1usize..5) {
        let g = gen_random_bipartite(n, n, 0.4, seed).unwrap();
        let edges: Vec<(usize, usize)> = g.edges().filter(|&(a, b)| a < b).collect();
        let u = UndirectedGraph::from_edges(n, &edges).unwrap();
        let (back, k2) = parse_ssve(&write_ssve(&u, k)).unwrap();
        prop_assert_eq!(back, u);
        prop_assert_eq!(k2, k);
    }

    #[test]
    fn worst_case_is_feasible(inst in small_instance(), seed in any::<u64>()) {
        let sol = solve_worst_case(&inst, &WorstCaseConfig { seed, ..WorstCaseConfig::default() }).unwrap();
        prop_assert_eq!(sol.chosen.len(), inst.k);
        prop_assert!(sol.is_consistent(&inst.graph));
        prop_assert!(sol.neighborhood_size >= exact_ssbve(&inst).unwrap().neighborhood_size);
    }

    #[test]
    fn by_m_exponents_sum(r in 2usize..40, num in 0i64..1000) {
        // eps = num / (1000 r) stays below 1/r
        let eps = BigRational::new(BigInt::from(num), BigInt::from(1000 * r as i64));
        let rep = hardness_gap_calculator(r, &eps, GapRegime::ByM).unwrap();
        let one = BigRational::from_integer(BigInt::from(1));
        let two = BigRational::from_integer(BigInt::from(2));
        let sum = rep.k_exponent.rational.unwrap() + rep.gap_exponent.rational.unwrap();
        prop_assert_eq!(sum, &one / (&two - &eps) - BigRational::new(BigInt::from(1), BigInt::from(2 * r as i64)));
    }
}
