mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn gcd_modular_matches_subresultant(a in poly(0, 5), b in poly(0, 5), h in poly(0, 4)) {
        gcd_routes_agree(&a, &b, &h)?;
    }

    #[test]
    fn factor_product_reconstructs(a in int_poly(1, 4, 9), b in int_poly(1, 4, 9), c in int_poly(0, 3, 9)) {
        factor_reconstructs(&(&(&a * &b) * &c))?;
        factor_reconstructs(&(&a * &a))?;
    }

    #[test]
    fn jet_composition_matches_expansion(f in poly(1, 4), g in poly(1, 3), a in rational(), k in 1usize..8) {
        jets_compose(&f, &g, &a, k)?;
    }

    #[test]
    fn iterate_is_a_homomorphism(f in poly(2, 3), m in 0usize..3, n in 0usize..3) {
        iterate_homomorphism(&f, m, n)?;
    }

    #[test]
    fn canonical_height_is_functorial(f in int_poly(2, 3, 4), x in rational()) {
        height_functorial(&f, &x, 12)?;
    }

    #[test]
    fn valuation_is_additive(p in poly(0, 4), q in poly(0, 4), a in rational(), e in (0usize..4, 0usize..4)) {
        v_additive(&p, &q, &a, e)?;
    }

    #[test]
    fn eval_matches_horner_rule(f in poly(0, 6), x in rational()) {
        common::eval_matches_horner(&f, &x)?;
    }
}
