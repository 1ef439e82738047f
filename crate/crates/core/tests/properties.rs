use nctspin::spin_cover::{deformed_cover, embed_cover, SpinStructure};
use nctspin::splitting::kappa;
use nctspin::{Monomial, ThetaMatrix, TorusElement};
use num_complex::Complex64;
use proptest::prelude::*;

fn theta_strategy(n: usize) -> impl Strategy<Value = ThetaMatrix> {
    prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |v| ThetaMatrix::from_lower(n, |k, l| v[k * n + l]))
}

fn element_strategy(theta: ThetaMatrix) -> impl Strategy<Value = TorusElement> {
    let n = theta.dim();
    prop::collection::vec(
        (prop::collection::vec(-4i64..=4, n), -1.0f64..1.0, -1.0f64..1.0),
        1..6,
    )
    .prop_map(move |terms| {
        TorusElement::from_terms(
            theta.clone(),
            terms.into_iter().map(|(m, re, im)| (Monomial(m), Complex64::new(re, im))),
        )
        .unwrap()
    })
}

fn triple(n: usize) -> impl Strategy<Value = (TorusElement, TorusElement, TorusElement)> {
    theta_strategy(n).prop_flat_map(|th| {
        (
            element_strategy(th.clone()),
            element_strategy(th.clone()),
            element_strategy(th),
        )
    })
}

proptest! {
    #[test]
    fn star_product_is_associative((a, b, c) in (2usize..=4).prop_flat_map(triple)) {
        let left = a.star_product(&b).unwrap().star_product(&c).unwrap();
        let right = a.star_product(&b.star_product(&c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right).unwrap() <= 1e-12);
    }

    #[test]
    fn involution_reverses_products((a, b, _) in (2usize..=4).prop_flat_map(triple)) {
        let lhs = a.star_product(&b).unwrap().involution();
        let rhs = b.involution().star_product(&a.involution()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12);
        prop_assert!(a.involution().involution().max_abs_diff(&a).unwrap() <= 1e-15);
    }

    #[test]
    fn embedding_is_a_star_homomorphism(
        (a, b, _) in triple(2),
        j1 in 0u8..=1,
        j2 in 0u8..=1,
    ) {
        let spin = SpinStructure::pair(j1, j2).unwrap();
        let alg = deformed_cover(a.theta(), &spin).unwrap();
        let prod = embed_cover(&alg, &a.star_product(&b).unwrap()).unwrap();
        let ea = embed_cover(&alg, &a).unwrap();
        let eb = embed_cover(&alg, &b).unwrap();
        prop_assert!(prod.max_abs_diff(&ea.star_product(&eb).unwrap()).unwrap() <= 1e-12);
        prop_assert!(embed_cover(&alg, &a.involution()).unwrap().max_abs_diff(&ea.involution()).unwrap() <= 1e-15);
        prop_assert!(alg.contains(&ea));
    }

    #[test]
    fn kappa_is_multiplicative((a, b, _) in (2usize..=3).prop_flat_map(triple)) {
        let lhs = kappa(&a.star_product(&b).unwrap());
        let rhs = kappa(&a).product(&kappa(&b)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12);
        prop_assert!(lhs.is_invariant());
    }

    #[test]
    fn json_round_trip((a, _, _) in (2usize..=3).prop_flat_map(triple)) {
        let back = TorusElement::from_json(&a.to_json()).unwrap();
        prop_assert_eq!(back, a);
    }
}
