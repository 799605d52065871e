mod common;

use std::collections::BTreeSet;

use common::path_oracle::{self, letter_from_index};
use common::{a, abar};
use mall_goi::algebra::*;
use proptest::prelude::*;

fn pw(s: &str) -> PathWord {
    s.parse().unwrap()
}

fn lit(l: Literal) -> Poly {
    Poly::literal(l)
}

fn term(c: Poly, w: &str) -> AlgElem {
    AlgElem::term(c, pw(w))
}

// -- polynomials -------------------------------------------------------------

#[test]
fn poly_characteristic_two() {
    let x = lit(a(1));
    assert!(x.add(&x).is_zero());
    let s = lit(a(1)).add(&lit(abar(1)));
    let sq = s.mul(&s);
    let expected = Poly::from_monomials([Monomial::power(a(1), 2), Monomial::power(abar(1), 2)]);
    assert_eq!(sq, expected);
    let prod = lit(a(1)).mul(&lit(abar(1)));
    assert!(!prod.is_zero());
    assert!(!ReductionMode::raw().reduce_poly(&prod).is_zero());
}

#[test]
fn monomial_rendering() {
    let m = Monomial::from_powers([(a(1), 2), (abar(3), 1)]);
    assert_eq!(m.to_string(), "a1^2.ā3");
    assert_eq!(Monomial::one().to_string(), "1");
}

// -- paths -------------------------------------------------------------------

#[test]
fn path_relations() {
    assert!(PathWord::p_star().mul(&PathWord::p()).is_one());
    assert!(PathWord::q_star().mul(&PathWord::q()).is_one());
    assert!(PathWord::q_star().mul(&PathWord::p()).is_zero());
    assert!(PathWord::p_star().mul(&PathWord::q()).is_zero());
    assert_eq!(pw("pq*").mul(&pw("qp*")), pw("pp*"));
    assert_eq!(pw("ppq*p*").to_string(), "ppq*p*");
    assert_eq!(pw("pq*").star(), pw("qp*"));
}

#[test]
fn path_product_matches_oracle_on_hand_example() {
    use path_oracle::Letter::*;
    let word = [Up(Gen::P), Down(Gen::Q), Up(Gen::Q), Down(Gen::P)];
    let forms = path_oracle::normal_forms(&word);
    assert_eq!(forms.len(), 1);
    assert_eq!(path_oracle::to_path(forms.iter().next().unwrap()), pw("pp*"));
}

// -- the algebra -------------------------------------------------------------

fn swap_pair_element() -> AlgElem {
    term(lit(a(1)), "pq*").add(&term(lit(a(2)), "qp*"))
}

#[test]
fn square_of_example_element() {
    let x = swap_pair_element();
    let ab = Poly::monomial(Monomial::from_powers([(a(1), 1), (a(2), 1)]));
    let expected = term(ab.clone(), "pp*").add(&term(ab, "qq*"));
    assert_eq!(x.pow(2), expected);
    let mode = ReductionMode::raw().with_annihilated(a(1), a(2)).unwrap();
    assert!(mode.is_zero(&x.pow(2)));
}

#[test]
fn cube_of_example_element() {
    let x = swap_pair_element();
    let a2b = Poly::monomial(Monomial::from_powers([(a(1), 2), (a(2), 1)]));
    let ab2 = Poly::monomial(Monomial::from_powers([(a(1), 1), (a(2), 2)]));
    assert_eq!(x.pow(3), term(a2b, "pq*").add(&term(ab2, "qp*")));
    let mode = ReductionMode::raw().with_idempotent(a(1)).with_idempotent(a(2));
    let ab = Poly::monomial(Monomial::from_powers([(a(1), 1), (a(2), 1)]));
    assert_eq!(mode.reduce_elem(&x.pow(3)), term(ab.clone(), "pq*").add(&term(ab, "qp*")));
}

#[test]
fn cube_of_unweighted_element() {
    let x = AlgElem::path(pw("pq*")).add(&AlgElem::path(pw("qp*")));
    assert_eq!(x.pow(3), x);
}

#[test]
fn rendering_of_elements() {
    let x = term(lit(a(1)), "p").add(&term(lit(abar(1)), "q"));
    assert_eq!(x.to_string(), "a1·p + ā1·q");
    assert_eq!(AlgElem::one().to_string(), "1");
    assert_eq!(AlgElem::zero().to_string(), "0");
    assert_eq!(x.components().len(), 2);
}

// -- reduction modes ---------------------------------------------------------

#[test]
fn complement_elimination() {
    let m = ReductionMode::cplus();
    assert!(m.reduce_poly(&lit(a(1)).add(&lit(abar(1)))).is_one());
    let prod = lit(a(1)).mul(&lit(abar(1)));
    assert!(!m.reduce_poly(&prod).is_zero());
    assert!(m.clone().with_idempotent(a(1)).reduce_poly(&prod).is_zero());
    assert!(ReductionMode::cplustimes().reduce_poly(&prod).is_zero());
}

#[test]
fn zero_tests() {
    assert!(ReductionMode::raw().is_zero(&AlgElem::zero()));
    let aab = AlgElem::term(lit(a(1)).mul(&lit(abar(1))), pw("pq*"));
    assert!(!ReductionMode::raw().is_zero(&aab));
    let m = Lang::from_words([vec![a(1)], vec![abar(1)]]);
    assert!(ReductionMode::from_lang(&m).is_zero(&aab));
}

#[test]
fn modes_from_languages() {
    let both = Lang::from_words([vec![a(1)], vec![abar(1)]]);
    assert_eq!(ReductionMode::from_lang(&both), ReductionMode::cplus().with_idempotent(a(1)));
    let one_side = Lang::letter(a(1));
    assert_eq!(ReductionMode::from_lang(&one_side), ReductionMode::cplus());
    assert_eq!(ReductionMode::from_lang(&Lang::empty()), ReductionMode::cplus());
}

#[test]
fn unsupported_annihilation_is_rejected() {
    assert!(ReductionMode::cplus().with_annihilated(abar(1), a(2)).is_err());
    assert_eq!(
        ReductionMode::cplus().with_annihilated(a(1), abar(1)).unwrap(),
        ReductionMode::cplus().with_idempotent(a(1))
    );
}

// -- languages ---------------------------------------------------------------

#[test]
fn language_norm_and_ops() {
    let both = Lang::from_words([vec![a(1)], vec![abar(1)]]);
    assert_eq!(both.norm(), BTreeSet::from([a(1), abar(1)]));
    let skewed = Lang::from_words([vec![a(1), a(2)], vec![abar(1)]]);
    assert_eq!(skewed.norm(), BTreeSet::from([a(1), abar(1)]));
    assert_eq!(Lang::epsilon().concat(&both), both);
    assert_eq!(Lang::empty().concat(&both), Lang::empty());
    assert_eq!(both.to_string(), "{a1, ā1}");
}

// -- homomorphisms -----------------------------------------------------------

#[test]
fn hom_examples() {
    let d = RingHom::identity().with(a(1), abar(2)).with(abar(1), a(2));
    let x = lit(a(1)).add(&lit(abar(1)));
    assert_eq!(d.apply(&x), lit(abar(2)).add(&lit(a(2))));

    let p = lit(a(5)).mul(&lit(abar(3)));
    assert_eq!(RingHom::identity().apply(&p), p);

    let valuation = RingHom::identity().with(a(1), Poly::one()).with(abar(1), Poly::zero());
    let y = term(lit(a(1)), "pq*").add(&term(lit(abar(1)), "qp*"));
    assert_eq!(valuation.apply_elem(&y), AlgElem::path(pw("pq*")));
}

#[test]
fn hom_union_conflict() {
    let d1 = RingHom::identity().with(a(1), Poly::one());
    let d2 = RingHom::identity().with(a(1), Poly::zero());
    assert!(matches!(d1.union(&d2), Err(AlgebraError::DomainOverlapConflict(_))));
    let d3 = RingHom::identity().with(a(2), Poly::zero());
    assert_eq!(d1.union(&d3).unwrap().domain().len(), 2);
}

#[test]
fn hom_composition_and_extension() {
    let d1 = RingHom::identity().with(a(1), lit(a(2)));
    let d2 = RingHom::identity().with(a(2), lit(a(3)));
    let c = d2.compose(&d1);
    assert_eq!(c.image(a(1)), lit(a(3)));
    assert_eq!(c.image(a(2)), lit(a(3)));
    let e = d1.extend_identity([a(4)]);
    assert_eq!(e.image(a(4)), lit(a(4)));
    assert!(e.domain().contains(&a(4)));
}

#[test]
fn collapse_forgets_path() {
    let m = Monomial::from_powers([(a(1), 2), (a(2), 1)]);
    assert_eq!(collapse_w(&(m.clone(), pw("pq*"))), m);
    assert_eq!(collapse_w(&(Monomial::literal(a(1)), pw("qp*"))), Monomial::literal(a(1)));
}

// -- properties --------------------------------------------------------------

fn arb_literal() -> impl Strategy<Value = Literal> {
    (1u32..=3, any::<bool>()).prop_map(|(w, pos)| if pos { a(w) } else { abar(w) })
}

fn arb_monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec((arb_literal(), 1u32..=3), 0..3).prop_map(Monomial::from_powers)
}

fn arb_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(arb_monomial(), 0..4).prop_map(Poly::from_monomials)
}

fn arb_path() -> impl Strategy<Value = PathWord> {
    (prop::collection::vec(any::<bool>(), 0..3), prop::collection::vec(any::<bool>(), 0..3)).prop_map(|(u, d)| {
        let g = |b: bool| if b { Gen::P } else { Gen::Q };
        PathWord::new(u.into_iter().map(g).collect(), d.into_iter().map(g).collect())
    })
}

fn arb_elem() -> impl Strategy<Value = AlgElem> {
    prop::collection::vec((arb_poly(), arb_path()), 0..4)
        .prop_map(|ts| ts.into_iter().fold(AlgElem::zero(), |acc, (c, w)| acc.add(&AlgElem::term(c, w))))
}

fn arb_mode() -> impl Strategy<Value = ReductionMode> {
    (0usize..5, arb_literal(), arb_literal()).prop_map(|(k, x, y)| match k {
        0 => ReductionMode::raw(),
        1 => ReductionMode::cplus(),
        2 => ReductionMode::cplustimes(),
        3 => ReductionMode::cplus().with_idempotent(x),
        _ => ReductionMode::raw().with_idempotent(x).with_annihilated(x, y).unwrap_or_else(|_| ReductionMode::raw()),
    })
}

proptest! {
    #[test]
    fn path_rewriting_is_confluent(word in prop::collection::vec(0u8..4, 0..=12)) {
        let letters: Vec<_> = word.into_iter().map(letter_from_index).collect();
        let forms = path_oracle::normal_forms(&letters);
        prop_assert_eq!(forms.len(), 1);
        let nf = path_oracle::to_path(forms.iter().next().unwrap());
        prop_assert_eq!(nf, path_oracle::library_product(&letters));
    }

    #[test]
    fn star_laws(x in arb_elem(), y in arb_elem()) {
        prop_assert_eq!(x.mul(&y).star(), y.star().mul(&x.star()));
        prop_assert_eq!(x.star().star(), x.clone());
        prop_assert_eq!(AlgElem::one().star(), AlgElem::one());
    }

    #[test]
    fn product_is_associative(x in arb_elem(), y in arb_elem(), z in arb_elem()) {
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
    }

    #[test]
    fn reduction_is_idempotent_ring_map(m in arb_mode(), x in arb_poly(), y in arb_poly()) {
        let r = |p: &Poly| m.reduce_poly(p);
        prop_assert_eq!(r(&r(&x)), r(&x));
        prop_assert_eq!(r(&x.add(&y)), r(&r(&x).add(&r(&y))));
        prop_assert_eq!(r(&x.mul(&y)), r(&r(&x).mul(&r(&y))));
    }

    #[test]
    fn elem_reduction_respects_products(m in arb_mode(), x in arb_elem(), y in arb_elem()) {
        let lhs = m.reduce_elem(&x.mul(&y));
        let rhs = m.reduce_elem(&m.reduce_elem(&x).mul(&m.reduce_elem(&y)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn boolean_quotient_is_idempotent(x in arb_poly()) {
        let m = ReductionMode::cplustimes();
        let r = m.reduce_poly(&x);
        prop_assert_eq!(m.reduce_poly(&r.mul(&r)), r);
    }

    #[test]
    fn norm_is_monotone(ws in prop::collection::vec(prop::collection::vec(arb_literal(), 0..3), 0..5), extra in prop::collection::vec(prop::collection::vec(arb_literal(), 0..3), 0..3)) {
        let u = Lang::from_words(ws.clone());
        let v = Lang::from_words(ws.into_iter().chain(extra));
        prop_assert!(u.norm().is_subset(&v.norm()));
    }

    #[test]
    fn hom_is_ring_map(x in arb_poly(), y in arb_poly(), imgs in prop::collection::vec((arb_literal(), arb_poly()), 0..3)) {
        let d = RingHom::from_map(imgs);
        prop_assert_eq!(d.apply(&x.add(&y)), d.apply(&x).add(&d.apply(&y)));
        prop_assert_eq!(d.apply(&x.mul(&y)), d.apply(&x).mul(&d.apply(&y)));
        prop_assert!(d.apply(&Poly::one()).is_one());
        prop_assert!(d.apply(&Poly::zero()).is_zero());
    }
}
