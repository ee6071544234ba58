mod common;

use std::collections::BTreeSet;

use common::{random_type_a, random_vector, resolution_f1, F1};
use orbitres::rep::rng;
use orbitres::resolution::Engine;
use orbitres::typea::{
    enumerate_b, f1_factors, is_relevant_combinatorial, minor_generators, non_simple_roots, rank_conditions,
    relevance_certificates,
};
use orbitres::Quiver;
use proptest::prelude::*;

fn spec(seed: u64, max_n: usize, max_entry: usize) -> (Quiver, Vec<usize>, Vec<usize>) {
    let r = &mut rng(seed);
    let q = random_type_a(r, max_n);
    let n = q.vertex_count();
    (q, random_vector(r, n, max_entry), random_vector(r, n, max_entry))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn first_syzygies_match_the_minor_families(seed in any::<u64>()) {
        let (q, beta, gamma) = spec(seed, 5, 2);
        let ours: F1 = f1_factors(&q, &beta, &gamma).unwrap();
        prop_assert_eq!(resolution_f1(&mut Engine::new(), &q, &beta, &gamma), ours);
    }

    #[test]
    fn family_shapes_match_their_bounds(seed in any::<u64>()) {
        let (q, beta, gamma) = spec(seed, 6, 3);
        let conditions = rank_conditions(&q, &beta, &gamma).unwrap();
        let families = minor_generators(&q, &beta, &gamma).unwrap();
        for f in &families {
            let c = conditions.iter().find(|c| c.root == f.root).unwrap();
            prop_assert_eq!(f.column_counts.iter().sum::<usize>(), c.bound + 1);
            prop_assert_eq!(f.row_counts.iter().sum::<usize>(), c.bound + 1);
            prop_assert_eq!(f.size, c.bound + 1);
        }
        let with_family: BTreeSet<_> = families.iter().map(|f| f.root).collect();
        let with_condition: BTreeSet<_> = conditions.iter().map(|c| c.root).collect();
        prop_assert_eq!(with_family, with_condition);
    }

    #[test]
    fn relevance_is_a_nonempty_b_set(seed in any::<u64>()) {
        let (q, beta, gamma) = spec(seed, 6, 3);
        for root in non_simple_roots(q.vertex_count()) {
            prop_assert_eq!(
                is_relevant_combinatorial(&q, &beta, &gamma, root).unwrap(),
                !enumerate_b(&q, &beta, &gamma, root).unwrap().is_empty()
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn relevant_roots_pass_the_hom_ext_conditions(seed in any::<u64>()) {
        let (q, beta, gamma) = spec(seed, 5, 2);
        for cert in relevance_certificates(&q, &beta, &gamma, seed).unwrap() {
            if cert.combinatorial {
                prop_assert!(cert.representation_theoretic && cert.inequalities, "{cert:?}");
            }
        }
    }
}
