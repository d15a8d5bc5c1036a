mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use orbitlab::actions::{
    growth_profile, is_t_dense, lemma_equivalence_check, orbits, restriction_fullness_witness,
    same_orbits, stirling2,
};
use orbitlab::categories::{closed_form_count, compose, endomorphism_group, factorize, hom_set};
use orbitlab::{CategoryKind, FiniteAction, InjectionMorphism, OrbitMode, Permutation};

use common::{partition_counts, random_action, random_subgroup, raw_hom_set};

fn kind_strategy() -> impl Strategy<Value = CategoryKind> {
    prop::sample::select(CategoryKind::ALL.to_vec())
}

#[test]
fn hom_sets_match_raw_filtering() {
    for kind in CategoryKind::ALL {
        for n in 0..=5 {
            for m in 0..=n {
                let listed: Vec<Vec<usize>> = hom_set(kind, m, n)
                    .unwrap()
                    .iter()
                    .map(|f| f.image().to_vec())
                    .collect();
                assert_eq!(listed, raw_hom_set(kind, m, n), "{kind} {m}->{n}");
                assert_eq!(listed.len() as u128, closed_form_count(kind, m, n));
            }
        }
    }
}

#[test]
fn endomorphism_groups_have_the_expected_shape() {
    for n in 0..=6 {
        let count = |k| endomorphism_group(k, n).unwrap().len();
        assert_eq!(count(CategoryKind::Oi), 1);
        assert_eq!(count(CategoryKind::Fi), (1..=n).product::<usize>());
        if n >= 2 {
            assert_eq!(count(CategoryKind::Bi), 2);
        }
        if n >= 1 {
            assert_eq!(count(CategoryKind::Ci), n);
        }
        if n >= 4 {
            assert_eq!(count(CategoryKind::Si), 2 * n);
        }
    }
}

#[test]
fn stirling_numbers_count_partitions() {
    for n in 0..=9 {
        let counts = partition_counts(n);
        for (k, &c) in counts.iter().enumerate() {
            assert_eq!(stirling2(n, k), c, "S({n},{k})");
        }
    }
}

#[test]
fn morphism_text_round_trip() {
    for kind in CategoryKind::ALL {
        for f in hom_set(kind, 2, 4).unwrap() {
            let back: InjectionMorphism = f.to_string().parse().unwrap();
            assert_eq!(back, f);
        }
    }
    assert!("CI 3->4 : [2,2,1]".parse::<InjectionMorphism>().is_err());
    assert!("OI 2->4 : [3,1]".parse::<InjectionMorphism>().is_err());
}

fn pick(homs: &[InjectionMorphism], i: usize) -> InjectionMorphism {
    homs[i % homs.len()].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn composition_is_associative_and_unital(
        kind in kind_strategy(),
        a in 0usize..=2, b in 0usize..=1, c in 0usize..=1, d in 0usize..=1,
        i in any::<usize>(), j in any::<usize>(), k in any::<usize>(),
    ) {
        let (n1, n2, n3) = (a + b, a + b + c, a + b + c + d);
        let f = pick(&hom_set(kind, a, n1).unwrap(), i);
        let g = pick(&hom_set(kind, n1, n2).unwrap(), j);
        let h = pick(&hom_set(kind, n2, n3).unwrap(), k);
        let left = compose(&compose(&f, &g).unwrap(), &h).unwrap();
        let right = compose(&f, &compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert!(hom_set(kind, a, n3).unwrap().contains(&left));
        prop_assert_eq!(compose(&InjectionMorphism::identity(kind, a), &f).unwrap(), f.clone());
        prop_assert_eq!(compose(&f, &InjectionMorphism::identity(kind, n1)).unwrap(), f);
    }

    #[test]
    fn factorization_recomposes(kind in kind_strategy(), m in 0usize..=5, extra in 0usize..=2, i in any::<usize>()) {
        let f = pick(&hom_set(kind, m, m + extra).unwrap(), i);
        let fac = factorize(&f).unwrap();
        prop_assert!(fac.increasing.image().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(endomorphism_group(kind, m).unwrap().contains(&fac.automorphism));
        prop_assert_eq!(compose(&fac.automorphism, &fac.increasing).unwrap(), f);
    }

    #[test]
    fn orbit_sizes_partition_the_space(seed in any::<u64>(), degree in 1usize..=5, n in 0usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_action(&mut rng, degree);
        let order = g.order().unwrap();
        let n = n.min(degree);
        let fall: usize = (0..n).map(|i| degree - i).product();
        let choose = fall / (1..=n).product::<usize>();
        for (mode, total) in [
            (OrbitMode::Power, degree.pow(n as u32)),
            (OrbitMode::Injective, fall),
            (OrbitMode::Subsets, choose),
        ] {
            let os = orbits(&g, n, mode).unwrap();
            prop_assert_eq!(os.iter().map(|o| o.size).sum::<usize>(), total);
            prop_assert!(os.iter().all(|o| order % o.size == 0));
        }
    }

    #[test]
    fn growth_profiles_are_consistent(seed in any::<u64>(), degree in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_action(&mut rng, degree);
        let p = growth_profile(&g, degree.min(4)).unwrap();
        prop_assert!(p.violations(degree).is_empty(), "{:?}", p.violations(degree));
    }

    #[test]
    fn shared_orbit_conditions_agree(seed in any::<u64>(), degree in 2usize..=6, n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_action(&mut rng, degree);
        let h = random_subgroup(&mut rng, &g);
        let n = n.min(degree);
        let report = lemma_equivalence_check(&g, &h, n).unwrap();
        prop_assert!(report.consistent, "{:?}", report);
        let injective_all = (0..=n).all(|s| same_orbits(&g, &h, s, OrbitMode::Injective).unwrap());
        prop_assert_eq!(same_orbits(&g, &h, n, OrbitMode::Injective).unwrap(), injective_all);
        prop_assert_eq!(is_t_dense(&h, &g, n).unwrap(), injective_all);
    }

    #[test]
    fn fullness_witness_iff_product_is_proper(seed in any::<u64>(), degree in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_action(&mut rng, degree);
        let h = random_subgroup(&mut rng, &g);
        let k = random_subgroup(&mut rng, &g);
        let product: HashSet<Permutation> = h
            .elements()
            .unwrap()
            .iter()
            .flat_map(|x| k.elements().unwrap().iter().map(move |y| x.compose(y)))
            .collect();
        let witness = restriction_fullness_witness(&g, &h, &k).unwrap();
        prop_assert_eq!(witness.is_some(), product.len() != g.order().unwrap());
        if let Some(w) = witness {
            prop_assert!(product.contains(&w.g0));
            prop_assert!(!product.contains(&w.g1));
            prop_assert_eq!(w.g.compose(&w.g0), w.g1);
        }
    }
}

#[test]
fn sym8_growth_is_bell() {
    let p = growth_profile(&FiniteAction::symmetric(8), 4).unwrap();
    assert_eq!(p.f, [1, 1, 1, 1]);
    assert_eq!(p.big_f, [1, 1, 1, 1]);
    assert_eq!(p.f_star, [1, 2, 5, 15]);
}
