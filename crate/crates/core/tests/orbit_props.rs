mod common;

use common::{random_type_a, random_vector};
use orbitres::minors::{check_family, MinorCheck, DEFAULT_MINOR_CAP};
use orbitres::orbit::{
    degeneration_sample, from_summands, generic_extension, hom_criterion, membership, orbit_sample,
    random_interval_decomposition, scheme_intersection_generators, z_p_subrep, RankInvariant,
};
use orbitres::rep::{random_representation, rng};
use orbitres::typea::{block_matrix, rank_conditions, RankCondition};
use orbitres::{Quiver, Representation};
use proptest::prelude::*;
use rand::Rng;

/// A random point of `Rep(Q, α)`: generic, a conjugated interval sum, or a degeneration of one.
fn random_point(q: &Quiver, alpha: &[usize], r: &mut impl Rng) -> Representation {
    match r.gen_range(0..4) {
        0 => random_representation(q, alpha, r.gen()).unwrap(),
        1 => degeneration_sample(&from_summands(q, &random_interval_decomposition(q, alpha, r)).unwrap(), r),
        _ => orbit_sample(&from_summands(q, &random_interval_decomposition(q, alpha, r)).unwrap(), r),
    }
}

fn satisfies(x: &RankInvariant, conditions: &[RankCondition]) -> bool {
    conditions.iter().all(|c| x.get(c.root).unwrap() <= c.bound)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn hom_criterion_describes_the_closure(seed in any::<u64>()) {
        let r = &mut rng(seed);
        let q = random_type_a(r, 4);
        let n = q.vertex_count();
        let (beta, gamma) = (random_vector(r, n, 2), random_vector(r, n, 2));
        let alpha: Vec<usize> = beta.iter().zip(&gamma).map(|(b, g)| b + g).collect();
        let w = generic_extension(&q, &beta, &gamma, seed).unwrap();
        let w_ranks = RankInvariant::of(&w.generic_extension_rep).unwrap();
        for _ in 0..100 {
            let x = random_point(&q, &alpha, r);
            let inside = membership(&RankInvariant::of(&x).unwrap(), &w_ranks).unwrap();
            prop_assert_eq!(inside, hom_criterion(&x, &beta, &gamma).unwrap());
        }
    }

    #[test]
    fn scheme_intersection_of_a_one_step_closure_is_itself(seed in any::<u64>()) {
        let r = &mut rng(seed);
        let q = random_type_a(r, 4);
        let n = q.vertex_count();
        let (beta, gamma) = (random_vector(r, n, 2), random_vector(r, n, 2));
        let alpha: Vec<usize> = beta.iter().zip(&gamma).map(|(b, g)| b + g).collect();
        let w = generic_extension(&q, &beta, &gamma, seed).unwrap();
        let direct = rank_conditions(&q, &beta, &gamma).unwrap();
        let combined = scheme_intersection_generators(&w.generic_extension_rep, seed).unwrap();
        let w_ranks = RankInvariant::of(&w.generic_extension_rep).unwrap();
        for _ in 0..40 {
            let x = RankInvariant::of(&random_point(&q, &alpha, r)).unwrap();
            let expected = membership(&x, &w_ranks).unwrap();
            prop_assert_eq!(satisfies(&x, &direct), expected);
            prop_assert_eq!(satisfies(&x, &combined.rank_conditions), expected);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn z_p_is_a_subrepresentation(seed in any::<u64>()) {
        let r = &mut rng(seed);
        let q = random_type_a(r, 5);
        let n = q.vertex_count();
        let alpha = random_vector(r, n, 4);
        let y = random_point(&q, &alpha, r);
        for p in 1..n {
            let z = z_p_subrep(&y, p).unwrap();
            for (x, &a) in alpha.iter().enumerate() {
                prop_assert!(z.beta[x] <= a);
                prop_assert_eq!(z.bases[x].cols(), z.beta[x]);
                prop_assert_eq!(z.bases[x].rank(), z.beta[x]);
            }
            for (a, &(t, h)) in q.arrows().iter().enumerate() {
                let pushed = y.map(a).mul(&z.bases[t - 1]);
                prop_assert_eq!(pushed, z.bases[h - 1].mul(z.rep.map(a)));
            }
        }
    }

    #[test]
    fn scheme_intersection_keeps_every_rank(seed in any::<u64>()) {
        let r = &mut rng(seed);
        let q = random_type_a(r, 4);
        let n = q.vertex_count();
        let alpha = random_vector(r, n, 3);
        let y = random_point(&q, &alpha, r);
        let result = scheme_intersection_generators(&y, seed).unwrap();
        let y_ranks = RankInvariant::of(&y).unwrap();
        prop_assert!(satisfies(&y_ranks, &result.rank_conditions));
        for f in &result.families {
            let spec = block_matrix(&q, f.root).unwrap();
            prop_assert_eq!(check_family(&spec, f, &y, DEFAULT_MINOR_CAP).unwrap(), MinorCheck::Vanishes);
        }
    }
}
