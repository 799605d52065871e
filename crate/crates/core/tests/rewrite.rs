mod common;

use std::collections::BTreeMap;

use common::instances::superpose_case;
use common::{a, abar, fixture};
use mall_goi::algebra::{AlgElem, EigenweightId, Poly, ReductionMode, RingHom};
use mall_goi::exec::{pair_nilpotency, sigma, DEFAULT_BOUND};
use mall_goi::gen::{seed_from_env, ProofGen};
use mall_goi::mall::{parse_proof, print_proof, OccId, Proof};
use mall_goi::matrix::{dg, interpret, measure, FMatrix, Index};
use mall_goi::rewrite::{
    embeds_mod_zero, normalize, reduce_step, superposition_instance, verify_invariance_autonomous,
    verify_invariance_external, CommuteMode, RedexOrder, RewriteError, StepKind, Strategy, DEFAULT_STEP_BOUND,
};

const STRATEGIES: [Strategy; 4] = [
    Strategy { redex: RedexOrder::Leftmost, commute: CommuteMode::Duplicating },
    Strategy { redex: RedexOrder::Rightmost, commute: CommuteMode::Duplicating },
    Strategy { redex: RedexOrder::Leftmost, commute: CommuteMode::Superposed },
    Strategy { redex: RedexOrder::Rightmost, commute: CommuteMode::Superposed },
];

fn kinds(p: &Proof, s: Strategy) -> Vec<StepKind> {
    normalize(p, s, DEFAULT_STEP_BOUND).unwrap().steps.iter().map(|(_, st)| st.kind).collect()
}

#[test]
fn both_with_proofs_reach_the_same_normal_form() {
    let normal = fixture("w-normal");
    for name in ["w1", "w2"] {
        let t = normalize(&fixture(name), Strategy::default(), DEFAULT_STEP_BOUND).unwrap();
        assert!(t.normal_form().is_cut_free());
        assert_eq!(t.normal_form(), &normal, "{name}");
        assert_eq!(t.composite, RingHom::identity(), "{name}");
    }
    assert_eq!(kinds(&fixture("w2"), Strategy::default()), [StepKind::AxCut, StepKind::AxCut]);
    assert_eq!(kinds(&fixture("w1"), Strategy::default()), [StepKind::Unsuperpose, StepKind::AxCut, StepKind::AxCut]);
}

#[test]
fn additive_key_case_selects_the_left_slice() {
    let t = normalize(&fixture("case2"), Strategy::default(), DEFAULT_STEP_BOUND).unwrap();
    let (_, first) = &t.steps[0];
    assert_eq!(first.kind, StepKind::KeyWithPlus);
    assert_eq!(first.hom.image(a(1)), Poly::one());
    assert_eq!(first.hom.image(abar(1)), Poly::zero());
    assert_eq!(t.normal_form(), &parse_proof("ax X").unwrap());
}

#[test]
fn duplicating_commutation_superposes_the_copies() {
    let p = fixture("case3");
    let (next, st) = reduce_step(&p, Strategy::default()).unwrap().unwrap();
    assert_eq!(st.kind, StepKind::CommuteWithDuplicating);
    assert!(matches!(next, Proof::With { .. }));
    assert_eq!(next.count_cuts(), 2);
    // The cut formula's weight splits into itself and a fresh copy, under the
    // weight of the commuted with.
    let before: Vec<EigenweightId> = p.weights();
    let after: Vec<EigenweightId> = next.weights();
    let fresh: Vec<EigenweightId> = after.iter().filter(|w| !before.contains(w)).copied().collect();
    assert_eq!(fresh.len(), 1);
    let (cut_w, with_w) = (EigenweightId(1), EigenweightId(2));
    let want = Poly::literal(with_w.pos())
        .mul(&Poly::literal(cut_w.pos()))
        .add(&Poly::literal(with_w.neg()).mul(&Poly::literal(fresh[0].pos())));
    assert_eq!(st.hom.image(cut_w.pos()), want);
}

#[test]
fn superposed_commutation_has_identity_hom() {
    let s = Strategy { commute: CommuteMode::Superposed, ..Strategy::default() };
    let (next, st) = reduce_step(&fixture("case3"), s).unwrap().unwrap();
    assert_eq!(st.kind, StepKind::CommuteWithSuperposed);
    assert_eq!(st.hom, RingHom::identity());
    assert!(matches!(&next, Proof::With { superpose, .. } if superpose.len() == 1));
    let t = normalize(&fixture("case3"), s, DEFAULT_STEP_BOUND).unwrap();
    assert!(verify_invariance_external(&t, DEFAULT_BOUND).unwrap().passed());
}

#[test]
fn cut_free_proofs_have_empty_traces() {
    for name in ["ax", "w-normal", "tau", "eta"] {
        let p = fixture(name);
        assert!(reduce_step(&p, Strategy::default()).unwrap().is_none());
        let t = normalize(&p, Strategy::default(), DEFAULT_STEP_BOUND).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.normal_form(), &p);
        assert_eq!(t.composite, RingHom::identity());
    }
}

#[test]
fn step_bound_is_reported() {
    let r = normalize(&fixture("w2"), Strategy::default(), 1);
    assert!(matches!(r, Err(RewriteError::StepBoundExceeded(1))), "{r:?}");
}

#[test]
fn trace_json_lists_steps() {
    let t = normalize(&fixture("case2"), Strategy::default(), DEFAULT_STEP_BOUND).unwrap();
    let j = t.to_json();
    let steps = j["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 2);
    assert_eq!(steps[0]["kind"], "key-with-plus");
    assert_eq!(j["initial"], print_proof(&fixture("case2")));
}

#[test]
fn fixtures_pass_both_invariance_checks() {
    for name in ["w1", "w2", "fig1", "case2", "case3", "cut-tau-tau"] {
        for s in STRATEGIES {
            let t = normalize(&fixture(name), s, DEFAULT_STEP_BOUND).unwrap();
            let ext = verify_invariance_external(&t, DEFAULT_BOUND).unwrap();
            assert!(ext.passed(), "{name} {s:?}: {ext:?}");
            let aut = verify_invariance_autonomous(&t, DEFAULT_BOUND).unwrap();
            assert!(aut.passed(), "{name} {s:?}: {aut:?}");
        }
    }
}

#[test]
fn external_invariance_on_generated_proofs() {
    let mut g = ProofGen::new(seed_from_env(41));
    for _ in 0..100 {
        let p = g.proof();
        for s in [STRATEGIES[0], STRATEGIES[3]] {
            let t = normalize(&p, s, DEFAULT_STEP_BOUND).unwrap();
            let r = verify_invariance_external(&t, DEFAULT_BOUND).unwrap();
            assert!(r.passed(), "{} {s:?}: {r:?}", print_proof(&p));
        }
    }
}

#[test]
fn autonomous_invariance_on_generated_proofs() {
    let mut g = ProofGen::new(seed_from_env(42));
    for _ in 0..60 {
        let p = g.proof();
        for s in [STRATEGIES[0], STRATEGIES[3]] {
            let t = normalize(&p, s, DEFAULT_STEP_BOUND).unwrap();
            let r = verify_invariance_autonomous(&t, DEFAULT_BOUND).unwrap();
            assert!(r.passed(), "{} {s:?}: {r:?}", print_proof(&p));
        }
    }
}

#[test]
fn strategies_agree_on_normal_forms() {
    let mut g = ProofGen::new(seed_from_env(43));
    for _ in 0..100 {
        let p = g.proof();
        let forms: Vec<Proof> = STRATEGIES
            .iter()
            .map(|s| normalize(&p, *s, DEFAULT_STEP_BOUND).unwrap().normal_form().erase_weights())
            .collect();
        assert!(forms.iter().all(|f| *f == forms[0]), "{}", print_proof(&p));
    }
}

#[test]
fn nilpotency_is_preserved_along_traces() {
    let mut g = ProofGen::new(seed_from_env(44));
    for _ in 0..60 {
        let p = g.proof();
        let t = normalize(&p, Strategy::default(), DEFAULT_STEP_BOUND).unwrap();
        for tp in t.proofs() {
            let (_, u) = interpret(&tp.proof).unwrap();
            let (_, m) = measure(&tp.proof).unwrap();
            let n = pair_nilpotency(&sigma(&u.index), &u, &m, DEFAULT_BOUND).unwrap();
            assert!(n.index().is_some(), "{}", print_proof(&tp.proof));
        }
    }
}

fn o(i: u32) -> OccId {
    OccId(i)
}

#[test]
fn embedding_modulo_zero_blocks() {
    let cpx = ReductionMode::cplustimes();
    let n = FMatrix::from_entries(Index::new(vec![], vec![o(1), o(2)]), [(o(1), o(2), AlgElem::one())]);
    let z = FMatrix::zero(Index::new(vec![], vec![o(3), o(4)]));
    let m = dg(&[&n, &z]);
    assert!(embeds_mod_zero(&m, &n, &cpx));
    assert!(embeds_mod_zero(&n, &n, &cpx));
    let mut stray = m.clone();
    stray.set(o(3), o(1), AlgElem::one());
    assert!(!embeds_mod_zero(&stray, &n, &cpx));
    assert!(!embeds_mod_zero(&n, &m, &cpx));
}

#[test]
fn superposition_identity_on_zero_matrices() {
    let f = FMatrix::zero(Index::new(vec![[o(0), o(1)]], vec![o(10), o(20)]));
    let g = FMatrix::zero(Index::new(vec![[o(0), o(1)]], vec![o(10), o(21)]));
    let copy: BTreeMap<OccId, OccId> = [(o(0), o(100)), (o(1), o(101))].into_iter().collect();
    let fresh = [(EigenweightId(1), EigenweightId(11))].into_iter().collect();
    assert!(
        superposition_instance(&f, &g, o(20), o(21), o(22), EigenweightId(9), &copy, &fresh, DEFAULT_BOUND).unwrap()
    );
}

#[test]
fn superposition_identity_on_random_instances() {
    let base = seed_from_env(45);
    for k in 0..200 {
        let c = superpose_case(base.wrapping_add(k));
        let ok = superposition_instance(&c.f, &c.g, c.a1, c.a2, c.target, c.weight, &c.copy, &c.fresh, DEFAULT_BOUND)
            .unwrap();
        assert!(ok, "instance {k}");
    }
}
