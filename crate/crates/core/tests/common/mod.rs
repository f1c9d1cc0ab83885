//! Strategies and property checks shared by the property suite and the
//! acceptance run.
#![allow(dead_code)]

use itergcd::heights::canonical_height;
use itergcd::multiplicity::mult_of_factor;
use itergcd::numfield::{jet_at, jet_compose, nf_eval};
use itergcd::poly::{factor_irreducible, gcd, gcd_subresultant, is_irreducible, iterate};
use itergcd::{NumberField, Poly, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const CASES: u32 = 256;

pub fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

pub fn poly(min_deg: usize, max_deg: usize) -> impl Strategy<Value = Poly> {
    (min_deg..=max_deg)
        .prop_flat_map(|d| (prop::collection::vec(rational(), d), rational()))
        .prop_map(|(mut cs, lead)| {
            let lead = if lead == Rational::from_integer(0.into()) {
                Rational::from_integer(1.into())
            } else {
                lead
            };
            cs.push(lead);
            Poly::new(cs)
        })
}

pub fn int_poly(min_deg: usize, max_deg: usize, bound: i64) -> impl Strategy<Value = Poly> {
    (min_deg..=max_deg)
        .prop_flat_map(move |d| (prop::collection::vec(-bound..=bound, d), 1..=bound))
        .prop_map(|(mut cs, lead)| {
            cs.push(lead);
            Poly::from_ints(&cs)
        })
}

/// The modular and subresultant routes agree on inputs with a planted common factor.
pub fn gcd_routes_agree(a: &Poly, b: &Poly, h: &Poly) -> Result<(), TestCaseError> {
    let f = a * h;
    let g = b * h;
    let m = gcd(&f, &g);
    let s = gcd_subresultant(&f, &g);
    prop_assert_eq!(&m, &s);
    prop_assert!(m.divides(&f) && m.divides(&g));
    prop_assert!(h.monic().divides(&m) || h.is_constant());
    Ok(())
}

/// Factoring and multiplying back gives the input, with irreducible monic factors.
pub fn factor_reconstructs(p: &Poly) -> Result<(), TestCaseError> {
    let fl = factor_irreducible(p).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&fl.expand(), p);
    for (q, e) in &fl.factors {
        prop_assert!(*e >= 1);
        prop_assert!(q.is_monic());
        prop_assert!(is_irreducible(q).unwrap());
    }
    Ok(())
}

/// Composing jets equals the jet of the composition, over Q(√2) and over Q.
pub fn jets_compose(f: &Poly, g: &Poly, a: &Rational, order: usize) -> Result<(), TestCaseError> {
    let k = NumberField::new(&Poly::from_ints(&[-2, 0, 1])).unwrap();
    let lam = &k.generator() + &k.from_rational(a.clone());
    let inner = jet_at(g, &lam, order);
    let outer = jet_at(f, &nf_eval(g, &lam), order);
    let got = jet_compose(&outer, &inner).unwrap();
    prop_assert_eq!(got, jet_at(&f.compose(g), &lam, order));
    let q = NumberField::rational_point(a).generator();
    let inner = jet_at(g, &q, order);
    let outer = jet_at(f, inner.value(), order);
    prop_assert_eq!(jet_compose(&outer, &inner).unwrap(), jet_at(&f.compose(g), &q, order));
    Ok(())
}

/// `f^(m+n) = f^m ∘ f^n`.
pub fn iterate_homomorphism(f: &Poly, m: usize, n: usize) -> Result<(), TestCaseError> {
    let lhs = iterate(f, m + n).unwrap();
    let rhs = iterate(f, m).unwrap().compose(&iterate(f, n).unwrap());
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

/// `ĥ(f(x)) = d ĥ(x)` within the reported error bounds.
pub fn height_functorial(f: &Poly, x: &Rational, steps: usize) -> Result<(), TestCaseError> {
    let d = f.deg() as f64;
    let pt = NumberField::rational_point(x).generator();
    let img = nf_eval(f, &pt);
    let img = NumberField::rational_point(&img.as_rational().unwrap()).generator();
    let h0 = canonical_height(f, &pt, steps).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let h1 = canonical_height(f, &img, steps).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let gap = (h1.value - d * h0.value).abs();
    let allowed = h1.error_bound + d * h0.error_bound + 1e-12;
    prop_assert!(gap <= allowed, "gap {} > {} for {} at {}", gap, allowed, f, x);
    Ok(())
}

/// `v(PQ) = v(P) + v(Q)`, by exact division and by jets.
pub fn v_additive(p: &Poly, q: &Poly, a: &Rational, extra: (usize, usize)) -> Result<(), TestCaseError> {
    let root = Poly::linear_root(a);
    let p = p * &root.pow(extra.0);
    let q = q * &root.pow(extra.1);
    let pq = &p * &q;
    let v = |f: &Poly| mult_of_factor(f, &root);
    prop_assert_eq!(v(&pq), v(&p) + v(&q));
    let lam = NumberField::rational_point(a).generator();
    let jet_v = jet_at(&pq, &lam, pq.deg() + 1).valuation().unwrap();
    prop_assert_eq!(jet_v, v(&pq));
    Ok(())
}

/// Homogeneous evaluation agrees with Horner's rule in reduced form.
pub fn eval_matches_horner(f: &Poly, x: &Rational) -> Result<(), TestCaseError> {
    let mut acc = Rational::from_integer(0.into());
    for c in f.coeffs().iter().rev() {
        acc = acc * x + c;
    }
    prop_assert_eq!(f.eval(x), acc);
    Ok(())
}
