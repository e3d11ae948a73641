use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toricfan::classes::{curve_class_space, divisor_class, divisor_class_group, picard_rank};
use toricfan::corpus::{
    blowup_chain, random_finite_morphism, random_singular_fan, random_surface_fan,
    random_unimodular, smooth_complete_corpus,
};
use toricfan::exactla::rational::i64_to_rational_vec;
use toricfan::exactla::smith::rows_saturated;
use toricfan::exactla::{hermite_normal_form, kernel_basis, smith_normal_form, IntMatrix};
use toricfan::fan::{
    hirzebruch_fan, product_fan, projective_space_fan, resolve, star_subdivision, validate_fan,
    Fan,
};
use toricfan::io::{parse_fan, serialize_fan};
use toricfan::morphism::{
    check_compatibility, j_of, j_of_by_rank_formula, j_of_by_target_rays, ToricMorphism,
};
use toricfan::recognize::{fan_isomorphism, is_product, is_projective_space};

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-9i64..=9, r * c)
            .prop_map(move |v| IntMatrix::from_rows(c, &v.chunks(c).collect::<Vec<_>>()))
    })
}

fn seeded() -> impl Strategy<Value = ChaCha8Rng> {
    any::<u64>().prop_map(ChaCha8Rng::seed_from_u64)
}

/// A small fan from a fixed menu, possibly incomplete or singular.
fn menu_fan(i: usize) -> Fan {
    match i % 6 {
        0 => projective_space_fan(1).unwrap(),
        1 => projective_space_fan(2).unwrap(),
        2 => hirzebruch_fan(2).unwrap(),
        3 => Fan::new(1, vec![vec![1]], vec![vec![0]]).unwrap(),
        4 => Fan::new(2, vec![vec![1, 0], vec![1, 2]], vec![vec![0, 1]]).unwrap(),
        _ => Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -2]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_a_valid_decomposition(a in small_matrix()) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(&(&snf.left * &a) * &snf.right, snf.diagonal.clone());
        prop_assert!(snf.left.determinant().abs().is_one());
        prop_assert!(snf.right.determinant().abs().is_one());
        let d = snf.invariant_factors();
        prop_assert_eq!(d.len(), a.rank());
        for w in d.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(d.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn kernel_basis_is_saturated_and_complete(a in small_matrix()) {
        let k = kernel_basis(&a);
        prop_assert_eq!(k.len() + a.rank(), a.cols());
        for v in &k {
            prop_assert!(a.apply(v).iter().all(Zero::is_zero));
        }
        if !k.is_empty() {
            let km = IntMatrix::from_rows(a.cols(), &k);
            prop_assert!(rows_saturated(&km));
            prop_assert_eq!(hermite_normal_form(&km), km);
        }
    }

    #[test]
    fn hermite_form_ignores_row_operations(a in small_matrix(), mut rng in seeded()) {
        let u = random_unimodular(&mut rng, a.rows(), 6);
        prop_assert_eq!(hermite_normal_form(&(&u * &a)), hermite_normal_form(&a));
    }

    #[test]
    fn constructor_outputs_validate(mut rng in seeded(), steps in 0usize..4) {
        for f in [
            blowup_chain(&mut rng, &projective_space_fan(3).unwrap(), steps).pop().unwrap(),
            random_surface_fan(&mut rng, 6, 4),
            random_singular_fan(&mut rng, 3),
        ] {
            prop_assert!(validate_fan(&f).is_valid(), "{:?}", f);
            prop_assert!(f.completeness_report(7).consistent());
        }
    }

    #[test]
    fn product_predicates_factor(i in 0usize..6, j in 0usize..6) {
        let (a, b) = (menu_fan(i), menu_fan(j));
        let p = product_fan(&a, &b).unwrap();
        prop_assert!(validate_fan(&p).is_valid());
        prop_assert_eq!(p.is_complete(), a.is_complete() && b.is_complete());
        prop_assert_eq!(p.is_smooth(), a.is_smooth() && b.is_smooth());
    }

    #[test]
    fn subdividing_at_an_existing_ray_changes_nothing(mut rng in seeded()) {
        let f = blowup_chain(&mut rng, &hirzebruch_fan(1).unwrap(), 2).pop().unwrap();
        for r in f.rays() {
            prop_assert_eq!(&star_subdivision(&f, r).unwrap(), &f);
        }
    }

    #[test]
    fn resolution_refines_and_keeps_support(mut rng in seeded(), dim in 2usize..=3) {
        let f = random_singular_fan(&mut rng, dim);
        let r = resolve(&f);
        prop_assert!(r.is_smooth());
        prop_assert!(check_compatibility(&ToricMorphism::identity_between(&r, &f)).compatible);
        for v in r.rays() {
            prop_assert!(f.in_support(&i64_to_rational_vec(v)));
        }
        prop_assert_eq!(r.is_complete(), f.is_complete());
    }

    #[test]
    fn class_group_is_invariant_under_change_of_basis(mut rng in seeded(), pick in 0usize..31) {
        let corpus = smooth_complete_corpus(&mut rng);
        let f = &corpus[pick % corpus.len()].1;
        let t = random_unimodular(&mut rng, f.dim(), 6);
        let g = f.transformed(&t).unwrap();
        prop_assert_eq!(divisor_class_group(f).unwrap(), divisor_class_group(&g).unwrap());
        prop_assert_eq!(picard_rank(f).unwrap(), picard_rank(&g).unwrap());
        prop_assert_eq!(is_projective_space(f).is_some(), is_projective_space(&g).is_some());
    }

    #[test]
    fn singular_class_groups_are_invariant(mut rng in seeded()) {
        let f = random_singular_fan(&mut rng, 2);
        let t = random_unimodular(&mut rng, 2, 6);
        let g = f.transformed(&t).unwrap();
        prop_assert_eq!(divisor_class_group(&f).unwrap(), divisor_class_group(&g).unwrap());
    }

    #[test]
    fn anticanonical_pairing(mut rng in seeded()) {
        let f = blowup_chain(&mut rng, &projective_space_fan(3).unwrap(), 3).pop().unwrap();
        let ones = vec![BigInt::one(); f.num_rays()];
        let k = divisor_class(&f, &ones).unwrap();
        let sums: Vec<BigInt> = curve_class_space(&f)
            .iter()
            .map(|z| z.intersections.iter().sum())
            .collect();
        prop_assert_eq!(k.free, sums);
    }

    #[test]
    fn fast_path_for_j_matches_rank_formula(mut rng in seeded()) {
        let m = random_finite_morphism(&mut rng, 3);
        prop_assert_eq!(j_of_by_target_rays(&m).unwrap(), j_of_by_rank_formula(&m).unwrap());
    }

    #[test]
    fn identity_and_composition(mut rng in seeded()) {
        let chain = blowup_chain(&mut rng, &projective_space_fan(2).unwrap(), 3);
        let id = ToricMorphism::identity(&chain[3]);
        prop_assert_eq!(j_of(&id).unwrap(), (0..chain[3].num_rays()).collect::<BTreeSet<_>>());
        let a = ToricMorphism::identity_between(&chain[3], &chain[1]);
        let b = ToricMorphism::identity_between(&chain[1], &chain[0]);
        prop_assert!(check_compatibility(&a).compatible && check_compatibility(&b).compatible);
        prop_assert!(check_compatibility(&a.then(&b).unwrap()).compatible);
    }

    #[test]
    fn products_are_recognised(i in 0usize..3, j in 0usize..3) {
        let menu = [
            projective_space_fan(1).unwrap(),
            projective_space_fan(2).unwrap(),
            hirzebruch_fan(1).unwrap(),
        ];
        let (a, b) = (&menu[i], &menu[j]);
        let s = is_product(&product_fan(a, b).unwrap()).unwrap().expect("product");
        let (x, y) = (&s.first_fan, &s.second_fan);
        let direct = fan_isomorphism(x, a).unwrap().is_some() && fan_isomorphism(y, b).unwrap().is_some();
        let swapped = fan_isomorphism(x, b).unwrap().is_some() && fan_isomorphism(y, a).unwrap().is_some();
        prop_assert!(direct || swapped);
    }

    #[test]
    fn documents_round_trip(mut rng in seeded()) {
        for (_, f) in smooth_complete_corpus(&mut rng) {
            let text = serialize_fan(&f);
            prop_assert_eq!(parse_fan(&text).unwrap(), f);
        }
    }
}
