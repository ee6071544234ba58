use orbitres::rep::{
    coker_dim_in, ext_dim, ext_dim_in, hom_dim, hom_dim_in, hom_map, orbit_codim, random_representation_bounded, rng,
};
use orbitres::{DynkinType, Field, GroupElement, Quiver, QuiverClass};
use proptest::prelude::*;

const PRIME: u64 = (1 << 61) - 1;

/// A random oriented tree on up to four vertices, with some arrows doubled.
fn quiver() -> impl Strategy<Value = Quiver> {
    (2usize..=4)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((any::<prop::sample::Index>(), any::<bool>()), n - 1),
                prop::collection::vec(any::<prop::sample::Index>(), 0..=2),
            )
        })
        .prop_map(|(n, tree, extra)| {
            let mut arrows: Vec<(usize, usize)> = tree
                .into_iter()
                .enumerate()
                .map(|(k, (parent, right))| {
                    let (i, j) = (parent.index(k + 1) + 1, k + 2);
                    if right {
                        (i, j)
                    } else {
                        (j, i)
                    }
                })
                .collect();
            let copies: Vec<(usize, usize)> = extra.iter().map(|e| arrows[e.index(arrows.len())]).collect();
            arrows.extend(copies);
            Quiver::new(n, arrows).unwrap()
        })
}

fn setup() -> impl Strategy<Value = (Quiver, Vec<usize>, Vec<usize>, u64)> {
    quiver().prop_flat_map(|q| {
        let n = q.vertex_count();
        (Just(q), prop::collection::vec(0usize..=3, n), prop::collection::vec(0usize..=3, n), any::<u64>())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hom_minus_ext_is_the_euler_product((q, a, b, seed) in setup()) {
        let v = random_representation_bounded(&q, &a, seed, 1).unwrap();
        let w = random_representation_bounded(&q, &b, seed ^ 1, 1).unwrap();
        let hom = hom_dim(&v, &w).unwrap() as i64;
        let ext = ext_dim(&v, &w).unwrap() as i64;
        prop_assert_eq!(hom - ext, q.euler_product(&a, &b).unwrap());
        let m = hom_map(&v, &w).unwrap();
        prop_assert_eq!(hom as usize, m.cols() - m.rank());
        prop_assert_eq!(ext as usize, coker_dim_in(&v, &w, Field::Rational).unwrap());
    }

    #[test]
    fn prime_field_agrees((q, a, b, seed) in setup()) {
        let v = random_representation_bounded(&q, &a, seed, 2).unwrap();
        let w = random_representation_bounded(&q, &b, seed ^ 7, 2).unwrap();
        prop_assert_eq!(hom_dim(&v, &w).unwrap(), hom_dim_in(&v, &w, Field::Prime(PRIME)).unwrap());
        prop_assert_eq!(ext_dim(&v, &w).unwrap(), ext_dim_in(&v, &w, Field::Prime(PRIME)).unwrap());
    }

    #[test]
    fn hom_is_additive((q, a, b, seed) in setup(), c in prop::collection::vec(0usize..=2, 4)) {
        let c = &c[..q.vertex_count()];
        let v = random_representation_bounded(&q, &a, seed, 1).unwrap();
        let v2 = random_representation_bounded(&q, c, seed ^ 3, 1).unwrap();
        let w = random_representation_bounded(&q, &b, seed ^ 5, 1).unwrap();
        let sum = v.direct_sum(&v2).unwrap();
        prop_assert_eq!(hom_dim(&sum, &w).unwrap(), hom_dim(&v, &w).unwrap() + hom_dim(&v2, &w).unwrap());
        prop_assert_eq!(hom_dim(&w, &sum).unwrap(), hom_dim(&w, &v).unwrap() + hom_dim(&w, &v2).unwrap());
    }

    #[test]
    fn orbit_codim_is_conjugation_invariant((q, a, _b, seed) in setup()) {
        let v = random_representation_bounded(&q, &a, seed, 1).unwrap();
        let g = GroupElement::random_unimodular(&a, &mut rng(seed));
        let moved = g.act(&v).unwrap();
        prop_assert_eq!(orbit_codim(&moved).unwrap(), orbit_codim(&v).unwrap());
    }
}

fn branched(n: usize, branch_at: usize) -> Quiver {
    let mut arrows: Vec<(usize, usize)> = (1..n - 1).map(|i| (i, i + 1)).collect();
    arrows.push((n, branch_at));
    Quiver::new(n, arrows).unwrap()
}

fn all_vectors(n: usize, max: usize) -> impl Iterator<Item = Vec<usize>> {
    let base = max + 1;
    (0..base.pow(n as u32)).map(move |mut c| {
        (0..n)
            .map(|_| {
                let d = c % base;
                c /= base;
                d
            })
            .collect()
    })
}

#[test]
fn dynkin_euler_forms_are_positive_definite() {
    let quivers = [
        (Quiver::type_a(&[true, false, false, true, true, false, true]), DynkinType::A(8)),
        (branched(8, 6), DynkinType::D(8)),
        (branched(6, 3), DynkinType::E(6)),
        (branched(7, 3), DynkinType::E(7)),
        (branched(8, 3), DynkinType::E(8)),
        (branched(5, 3), DynkinType::D(5)),
    ];
    for (q, ty) in quivers {
        assert_eq!(q.class(), QuiverClass::Dynkin(ty));
        let n = q.vertex_count();
        for a in all_vectors(n, 3).skip(1) {
            assert!(q.euler_form(&a).unwrap() >= 1, "{ty} {a:?}");
        }
    }
}

#[test]
fn extended_dynkin_forms_have_isotropic_vectors() {
    let d4 = Quiver::new(5, vec![(1, 5), (2, 5), (3, 5), (4, 5)]).unwrap();
    assert_eq!(d4.class(), QuiverClass::ExtendedDynkin);
    assert_eq!(d4.euler_form(&[1, 1, 1, 1, 2]).unwrap(), 0);
    let kronecker = Quiver::new(2, vec![(1, 2), (1, 2)]).unwrap();
    assert_eq!(kronecker.class(), QuiverClass::ExtendedDynkin);
    assert_eq!(kronecker.euler_form(&[1, 1]).unwrap(), 0);
    let wild = Quiver::new(2, vec![(1, 2), (1, 2), (1, 2)]).unwrap();
    assert_eq!(wild.class(), QuiverClass::Wild);
    assert!(wild.euler_form(&[1, 1]).unwrap() < 0);
}
