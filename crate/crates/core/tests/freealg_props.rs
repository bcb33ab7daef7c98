use std::collections::BTreeMap;

use liekit::freealg::{
    cyclic_canonical_form, eval_poly, multihomogeneous_components, multilinearize, parse_poly,
    GaussRat, Limits, NcPoly, Word,
};
use liekit::qmatrix::QMatrix;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = GaussRat> {
    (-6i64..=6, -6i64..=6, 1i64..=4).prop_map(|(a, b, d)| {
        &GaussRat::int(a, b) * &GaussRat::ratio(1, d)
    })
}

fn poly(vars: u8, max_len: usize, max_terms: usize) -> impl Strategy<Value = NcPoly> {
    prop::collection::vec(
        (prop::collection::vec(1..=vars, 0..=max_len), coeff()),
        0..=max_terms,
    )
    .prop_map(|ts| NcPoly::from_terms(ts.into_iter().map(|(w, c)| (Word::from_slice(&w), c))))
}

fn small_matrix(n: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec((-3i64..=3, -3i64..=3), n * n)
        .prop_map(move |v| QMatrix::from_vec(n, v.into_iter().map(|(a, b)| GaussRat::int(a, b)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_then_parse_is_identity(f in poly(4, 4, 6)) {
        let back = parse_poly(&f.to_string()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn bracket_bilinear_antisymmetric_jacobi(
        f in poly(3, 2, 3), g in poly(3, 2, 3), h in poly(3, 2, 3), c in coeff()
    ) {
        prop_assert_eq!(f.bracket(&(&g + &h)), &f.bracket(&g) + &f.bracket(&h));
        prop_assert_eq!(f.scale(&c).bracket(&g), f.bracket(&g).scale(&c));
        prop_assert_eq!(f.bracket(&g), -&g.bracket(&f));
        let jacobi = &(&f.bracket(&g.bracket(&h)) + &g.bracket(&h.bracket(&f))) + &h.bracket(&f.bracket(&g));
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn cyclic_form_ignores_added_commutators(
        f in poly(3, 5, 5), g in poly(3, 2, 3), h in poly(3, 3, 3)
    ) {
        let shifted = &f + &g.bracket(&h);
        prop_assert_eq!(cyclic_canonical_form(&shifted), cyclic_canonical_form(&f));
    }

    #[test]
    fn components_sum_back(f in poly(3, 4, 8)) {
        let parts = multihomogeneous_components(&f);
        let total = parts.iter().fold(NcPoly::zero(), |acc, (_, p)| &acc + p);
        prop_assert_eq!(total, f);
        prop_assert!(parts.iter().all(|(_, p)| p.is_multihomogeneous()));
    }

    #[test]
    fn multilinearize_then_collapse(f in poly(3, 5, 6)) {
        for (_, comp) in multihomogeneous_components(&f) {
            if comp.is_constant() {
                continue;
            }
            let m = multilinearize(&comp).unwrap();
            prop_assert!(m.poly.is_multilinear());
            prop_assert_eq!(m.poly.degree(), comp.degree());
            let inv = m.factor.inv().unwrap();
            prop_assert_eq!(m.collapse().scale(&inv), comp);
        }
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        f in poly(2, 3, 4), g in poly(2, 3, 4), a in small_matrix(2), b in small_matrix(2)
    ) {
        let vals = BTreeMap::from([(1, a), (2, b)]);
        let ev = |p: &NcPoly| eval_poly(p, &vals).unwrap();
        prop_assert_eq!(ev(&(&f * &g)), ev(&f).mul(&ev(&g)));
        prop_assert_eq!(ev(&(&f + &g)), ev(&f).add(&ev(&g)));
    }
}

#[test]
fn degree_guard_is_configurable() {
    assert!(parse_poly("x1^13").is_err());
    assert!(liekit::freealg::parse_poly_with("x1^13", &Limits { max_degree: 13, max_vars: 10 }).is_ok());
    assert!(parse_poly("x11").is_ok());
    let eleven: Vec<String> = (1..=11).map(|i| format!("x{i}")).collect();
    assert!(parse_poly(&eleven.join(" + ")).is_err());
}
