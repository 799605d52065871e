//! The acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always print. `GOI_SEED`
//! replaces every generator seed.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::instances::superpose_case;
use common::path_oracle::{self, letter_from_index};
use common::{a, abar, concl, elem, fixture};
use mall_goi::algebra::{AlgElem, EigenweightId, Lang, Literal, Monomial, PathWord, Poly, ReductionMode, RingHom};
use mall_goi::equations::{check_solution, partition_check, proof_system, solve, MonEq};
use mall_goi::exec::{
    check_assoc, check_assoc_hom, pair_nilpotency, qexec, qexec_lang, qexec_measure, sigma, slice_nilpotency,
    ExecOptions, Nilpotency, PartialSymmetry, DEFAULT_BOUND,
};
use mall_goi::gen::{seed_from_env, ProofGen};
use mall_goi::mall::{check_proof, parse_formula, print_proof, CheckedProof, OccId, Proof, Sequent, Side};
use mall_goi::matrix::{interpret, measure, FMatrix, Index};
use mall_goi::nets::{check_net, translate, AxiomLink, Linking, LinkingSet, NetCaps, Witness};
use mall_goi::rewrite::{
    normalize, superposition_instance, verify_invariance_autonomous, verify_invariance_external, Strategy,
    DEFAULT_STEP_BOUND,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

type Criterion = (&'static str, fn() -> Verdict);

const CRITERIA: [Criterion; 12] = [
    ("scalar identities on the swap-pair element", scalar_identities),
    ("both with-proofs execute to the cut-free matrix", with_proofs_execute),
    ("measure matrices and language execution", measures),
    ("fig1 paired nilpotency and its legal cycle", fig1_nilpotency),
    ("equational system of cut(tau, tau)", tau_system),
    ("paired nilpotency on 500 generated proofs", paired_suite),
    ("slice nilpotency on 500 generated proofs", slice_suite),
    ("external invariance on 200 generated proofs", external_suite),
    ("autonomous invariance on 100 generated proofs", autonomous_suite),
    ("net criteria on translations and mutants", nets_suite),
    ("confluence of path words against the brute-force oracle", confluence_suite),
    ("instance suites for associativity, homs, superposition, partition", instance_suites),
];

fn main() -> ExitCode {
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn pw(s: &str) -> PathWord {
    s.parse().unwrap()
}

fn term(lits: &[Literal], w: &str) -> AlgElem {
    elem(&[(lits, pw(w))])
}

fn lang(words: &[&[Literal]]) -> Lang {
    Lang::from_words(words.iter().map(|w| w.to_vec()))
}

/// The first `n` proofs of the shared generator with the default bounds.
fn generated(n: usize) -> Vec<Proof> {
    let mut g = ProofGen::new(seed_from_env(600));
    (0..n).map(|_| g.proof()).collect()
}

// -- 1 ----------------------------------------------------------------------

fn scalar_identities() -> Verdict {
    let x = term(&[a(1)], "pq*").add(&term(&[a(2)], "qp*"));
    let annihilate = ReductionMode::raw().with_annihilated(a(1), a(2)).map_err(|e| e.to_string())?;
    ensure!(annihilate.is_zero(&x.pow(2)), "square is {} modulo a1·a2 = 0", annihilate.reduce_elem(&x.pow(2)));
    let idempotent = ReductionMode::raw().with_idempotent(a(1)).with_idempotent(a(2));
    let want = term(&[a(1), a(2)], "pq*").add(&term(&[a(1), a(2)], "qp*"));
    let cube = idempotent.reduce_elem(&x.pow(3));
    ensure!(cube == want, "cube is {cube}, want {want}");
    let y = AlgElem::path(pw("pq*")).add(&AlgElem::path(pw("qp*")));
    ensure!(y.pow(3) == y, "raw cube of pq* + qp* is {}", y.pow(3));
    Ok("square vanishes, cube idempotent-reduces, raw cube is the element".into())
}

// -- 2 ----------------------------------------------------------------------

/// Moves a conclusion-indexed matrix of `from` onto the conclusions of `to`,
/// matching occurrences by formula.
fn onto(m: &FMatrix, from: &CheckedProof, to: &CheckedProof) -> FMatrix {
    let map: BTreeMap<OccId, OccId> = from
        .sequent
        .conclusion
        .iter()
        .map(|o| (*o, concl(&to.sequent, &from.sequent.formula(*o).to_string())[0]))
        .collect();
    m.relabel(|o| map[&o], Index::new(vec![], to.sequent.conclusion.clone()))
}

fn with_proofs_execute() -> Verdict {
    let (cn, normal) = interpret(&fixture("w-normal")).unwrap();
    let cpx = ReductionMode::cplustimes();
    for name in ["w1", "w2"] {
        let (c, u) = interpret(&fixture(name)).unwrap();
        let r = qexec(&sigma(&u.index), &u, &cpx, ExecOptions::default()).unwrap();
        ensure!(r.nilpotency.index().is_some(), "{name}: {:?}", r.nilpotency);
        ensure!(onto(&r.matrix, &c, &cn).equal_mod(&normal, &cpx), "{name}: qexec differs from w-normal");
    }
    let (c, u) = interpret(&fixture("w2")).unwrap();
    let raw = qexec(&sigma(&u.index), &u, &ReductionMode::raw(), ExecOptions::default()).unwrap();
    let (x, amp) = (concl(&c.sequent, "X")[0], concl(&c.sequent, "~X & ~X")[0]);
    let want = term(&[a(1), a(1)], "p").add(&term(&[abar(1), abar(1)], "q"));
    let got = raw.matrix.get(amp, x);
    ensure!(got == want, "raw w2 entry is {got}, want {want}");
    Ok(format!("w1, w2 equal w-normal in cplustimes; raw w2 entry {got}"))
}

// -- 3 ----------------------------------------------------------------------

fn measures() -> Verdict {
    let both = lang(&[&[a(1)], &[abar(1)]]);
    let (c, l) = measure(&fixture("w1")).unwrap();
    let s = &c.sequent;
    let [cx, cy] = s.cuts[0];
    let (x, amp) = (concl(s, "X")[0], concl(s, "~X & ~X")[0]);
    let want = [(cx, amp, Lang::epsilon()), (amp, cx, Lang::epsilon()), (cy, x, both.clone()), (x, cy, both.clone())];
    ensure!(l.entries().count() == 4, "w1 measure has {} entries", l.entries().count());
    for (r, k, v) in want {
        ensure!(l.get(r, k) == v, "w1 measure ({}, {}) = {}", s.render(r), s.render(k), l.get(r, k));
    }

    let (c, l) = measure(&fixture("w2")).unwrap();
    let s = &c.sequent;
    let (x, amp) = (concl(s, "X")[0], concl(s, "~X & ~X")[0]);
    let [[c1, c1d], [c2, c2d]] = [s.cuts[0], s.cuts[1]];
    let want = [
        (c1d, x, lang(&[&[a(1)]])),
        (c2d, x, lang(&[&[abar(1)]])),
        (amp, c1, Lang::epsilon()),
        (amp, c2, Lang::epsilon()),
    ];
    for (r, k, v) in want {
        ensure!(l.get(r, k) == v, "w2 measure ({}, {}) = {}", s.render(r), s.render(k), l.get(r, k));
        ensure!(l.get(k, r) == v, "w2 measure is not symmetric at ({}, {})", s.render(k), s.render(r));
    }
    ensure!(l.entries().count() == 8, "w2 measure has {} entries", l.entries().count());

    for name in ["w1", "w2"] {
        let (c, u) = interpret(&fixture(name)).unwrap();
        let (_, m) = measure(&fixture(name)).unwrap();
        let s = &c.sequent;
        let (x, amp) = (concl(s, "X")[0], concl(s, "~X & ~X")[0]);
        let paired = qexec_measure(&sigma(&m.index), &u, &m, ExecOptions::default()).unwrap();
        ensure!(paired.matrix.get(amp, x) == both, "{name}: qexec entry {}", paired.matrix.get(amp, x));
        let plain = qexec_lang(&sigma(&m.index), &m, ExecOptions::default()).unwrap();
        ensure!(plain.matrix.get(amp, x) == both, "{name}: language-only entry {}", plain.matrix.get(amp, x));
    }
    Ok("w1/w2 measures as expected; (~X & ~X, X) executes to {a1, ā1} for both".into())
}

// -- 4 ----------------------------------------------------------------------

fn fig1_nilpotency() -> Verdict {
    let (_, u) = interpret(&fixture("fig1")).unwrap();
    let (_, m) = measure(&fixture("fig1")).unwrap();
    let s = sigma(&u.index);
    let n = pair_nilpotency(&s, &u, &m, DEFAULT_BOUND).unwrap();
    ensure!(n == Nilpotency::Index(2), "pair nilpotency {n:?}");

    let delta = u.index.delta();
    let lp = s.grid::<AlgElem>().mul(&u.block(&delta, &delta));
    let sq = lp.mul(&lp);
    let lm = s.grid::<Lang>().mul(&m.block(&delta, &delta));
    let sqm = lm.mul(&lm);
    let mixed = term(&[a(1), abar(1)], "1");
    let hits: Vec<_> = sq.entries().filter(|(_, _, v)| ReductionMode::raw().equal(v, &mixed)).collect();
    ensure!(!hits.is_empty(), "no a1·ā1 entry in the squared cut block");
    let lits: BTreeSet<Literal> = [a(1), abar(1)].into();
    for (r, c, _) in &hits {
        ensure!(sqm.get(*r, *c).norm() == lits, "measure of a1·ā1 entry is {}", sqm.get(*r, *c));
    }
    ensure!(sq.entries().any(|(_, _, v)| !ReductionMode::cplus().is_zero(v)), "square vanishes under cplus");
    ensure!(sq.entries().all(|(_, _, v)| ReductionMode::cplustimes().is_zero(v)), "square survives cplustimes");
    Ok(format!("n = 2; {} squared-block entries a1·ā1 : {{a1, ā1}}; nonzero under cplus", hits.len()))
}

// -- 5 ----------------------------------------------------------------------

fn lit_eq(x: Literal, y: Literal) -> MonEq {
    MonEq::new(Monomial::from_powers([(x, 1)]), Monomial::from_powers([(y, 1)]))
}

fn tau_system() -> Verdict {
    let c = check_proof(&fixture("cut-tau-tau")).unwrap();
    let sys = proof_system(&c).unwrap();
    let want: BTreeSet<MonEq> = [lit_eq(a(1), abar(2)), lit_eq(abar(1), a(2))].into();
    ensure!(sys.equations == want, "system is {}", sys.render().replace('\n', "; "));
    let d = RingHom::identity().with(a(1), Poly::literal(abar(2))).with(abar(1), Poly::literal(a(2)));
    check_solution(&sys, &d).map_err(|e| format!("hom fails on {e}"))?;
    Ok(format!("{{{}}}, solved by {d}", sys.render().trim_end().replace('\n', ", ")))
}

// -- 6, 7 -------------------------------------------------------------------

fn paired_suite() -> Verdict {
    let mut max = 0;
    for p in generated(500) {
        let (_, u) = interpret(&p).unwrap();
        let (_, m) = measure(&p).unwrap();
        match pair_nilpotency(&sigma(&u.index), &u, &m, DEFAULT_BOUND).unwrap() {
            Nilpotency::Index(n) => max = max.max(n),
            d => return Err(format!("{d:?} on {}", print_proof(&p))),
        }
    }
    Ok(format!("500/500 nilpotent within {DEFAULT_BOUND}, largest index {max}"))
}

fn slice_suite() -> Verdict {
    let mut max = 0;
    for p in generated(500) {
        let (_, u) = interpret(&p).unwrap();
        match slice_nilpotency(&sigma(&u.index), &u, DEFAULT_BOUND).unwrap() {
            Nilpotency::Index(n) => max = max.max(n),
            d => return Err(format!("{d:?} on {}", print_proof(&p))),
        }
    }
    Ok(format!("500/500 slice-nilpotent within {DEFAULT_BOUND}, largest index {max}"))
}

// -- 8, 9 -------------------------------------------------------------------

fn external_suite() -> Verdict {
    let mut steps = 0;
    for p in generated(200) {
        let t = normalize(&p, Strategy::default(), DEFAULT_STEP_BOUND).unwrap();
        let r = verify_invariance_external(&t, DEFAULT_BOUND).unwrap();
        ensure!(r.passed(), "{}: {r:?}", print_proof(&p));
        ensure!(r.end_to_end.is_none(), "end-to-end mismatch on {}", print_proof(&p));
        steps += r.steps.len();
    }
    Ok(format!("200 proofs, {steps} steps, all equal; composites match normal forms"))
}

fn autonomous_suite() -> Verdict {
    let mut steps = 0;
    for p in generated(100) {
        let c = check_proof(&p).unwrap();
        let sys = proof_system(&c).unwrap();
        let s = solve(&p).map_err(|e| format!("{e} on {}", print_proof(&p)))?;
        check_solution(&sys, &s.hom).map_err(|e| format!("solution fails {e} on {}", print_proof(&p)))?;
        let t = normalize(&p, Strategy::default(), DEFAULT_STEP_BOUND).unwrap();
        let r = verify_invariance_autonomous(&t, DEFAULT_BOUND).unwrap();
        ensure!(r.passed(), "{}: {r:?}", print_proof(&p));
        steps += r.steps.len();
    }
    Ok(format!("100 proofs solved and checked; {steps} steps invariant"))
}

// -- 10 ---------------------------------------------------------------------

fn link(x: u32, y: u32) -> AxiomLink {
    AxiomLink::new(OccId(x), OccId(y))
}

fn linking(links: &[(u32, u32)], resolution: &[(u32, Side)], cuts: &[usize]) -> Linking {
    Linking {
        links: links.iter().map(|(x, y)| link(*x, *y)).collect(),
        resolution: resolution.iter().map(|(k, s)| (OccId(*k), *s)).collect(),
        cuts: cuts.iter().copied().collect(),
    }
}

fn sequent(concl: &[&str]) -> Sequent {
    let concl: Vec<_> = concl.iter().map(|t| parse_formula(t).unwrap()).collect();
    Sequent::from_shape(&[], &concl)
}

fn translated(name: &str) -> LinkingSet {
    translate(&fixture(name)).unwrap()
}

fn without_slice(name: &str) -> LinkingSet {
    let mut t = translated(name);
    t.linkings.remove(1);
    t
}

/// Hand-built mutants, each with the criterion it must break.
fn mutants() -> Vec<(&'static str, &'static str, LinkingSet)> {
    let mut out = vec![
        ("w1 without its ā slice", "P1", without_slice("w1")),
        ("fig1 without its ā slice", "P1", without_slice("fig1")),
        ("tau without its ā slice", "P1", without_slice("tau")),
    ];
    let (tau, eta) = (translated("tau"), translated("eta"));
    out.push((
        "tau and eta slices together",
        "P1",
        LinkingSet::new(tau.sequent.clone(), tau.linkings.iter().chain(&eta.linkings).cloned()),
    ));

    let mut moved = translated("fig1");
    let l = &mut moved.linkings[1];
    l.resolution.insert(OccId(8), Side::Left);
    l.links.remove(&link(0, 10));
    l.links.insert(link(0, 9));
    out.push(("fig1 ā slice flipped onto the left of the with", "P1", moved));

    // eta is ⊢ X + X, ~X & ~X; send its second slice to the left of the &.
    let mut flipped = translated("eta");
    flipped.linkings[1] = linking(&[(2, 4)], &[(0, Side::Right), (3, Side::Left)], &[]);
    out.push(("eta with both slices on the left of the with", "P1", flipped));

    let w1 = translated("w1");
    out.push((
        "w1 slices linked around the cut",
        "P0",
        LinkingSet::new(
            w1.sequent.clone(),
            [linking(&[(3, 5)], &[(2, Side::Left)], &[]), linking(&[(4, 5)], &[(2, Side::Right)], &[])],
        ),
    ));
    out.push((
        "two axioms side by side",
        "P2",
        LinkingSet::new(sequent(&["X", "~X", "X", "~X"]), [linking(&[(0, 1), (2, 3)], &[], &[])]),
    ));
    out.push((
        "tensor arguments linked to each other",
        "P2",
        LinkingSet::new(sequent(&["X * ~X", "~X", "X"]), [linking(&[(1, 2), (3, 4)], &[], &[])]),
    ));
    let path = format!("{}/../../fixtures/toggling-failure.json", env!("CARGO_MANIFEST_DIR"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    out.push(("slices splitting a tensor differently", "P3", LinkingSet::from_json(&v).unwrap()));
    out
}

fn criterion_of(w: &Witness) -> &'static str {
    match w {
        Witness::P0 { .. } => "P0",
        Witness::P1 { .. } => "P1",
        Witness::P2 { .. } => "P2",
        Witness::P3 { .. } => "P3",
    }
}

fn nets_suite() -> Verdict {
    let caps = NetCaps::default();
    let mut largest = 0;
    for p in generated(500) {
        let t = translate(&p).unwrap();
        largest = largest.max(t.len());
        let r = check_net(&t, &caps).map_err(|e| format!("{e} on {}", print_proof(&p)))?;
        ensure!(r.passed(), "{}: {r:?}", print_proof(&p));
    }
    let ms = mutants();
    for (what, want, set) in &ms {
        set.validate().map_err(|e| format!("{what}: {e}"))?;
        let r = check_net(set, &caps).map_err(|e| format!("{what}: {e}"))?;
        let broken: Vec<&str> = r.verdicts().iter().filter_map(|(_, v)| v.witness().map(criterion_of)).collect();
        ensure!(broken.contains(want), "{what}: expected a {want} witness, got {broken:?}");
    }
    Ok(format!(
        "500 translations pass P0-P3 (at most {largest} linkings); {} mutants each fail with a witness",
        ms.len()
    ))
}

// -- 11 ---------------------------------------------------------------------

fn confluence_suite() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env(1100));
    for k in 0..10_000 {
        let len = rng.gen_range(0..=12);
        let word: Vec<_> = (0..len).map(|_| letter_from_index(rng.gen_range(0..4))).collect();
        let forms = path_oracle::normal_forms(&word);
        ensure!(forms.len() == 1, "word {k} {word:?} has {} normal forms", forms.len());
        let nf = path_oracle::to_path(forms.iter().next().unwrap());
        let lib = path_oracle::library_product(&word);
        ensure!(nf == lib, "word {k} {word:?}: oracle {nf}, library {lib}");
    }
    Ok("10000 words, one normal form each, equal to the library product".into())
}

// -- 12 ---------------------------------------------------------------------

/// Generated proofs whose cut list splits into two non-empty halves.
fn split_instances(n: usize) -> Vec<(CheckedProof, FMatrix, PartialSymmetry, PartialSymmetry)> {
    let mut g = ProofGen::new(seed_from_env(1200));
    let mut out = Vec::new();
    while out.len() < n {
        let p = g.proof_with_cuts(2);
        let (c, u) = interpret(&p).unwrap();
        if u.index.cuts.len() < 2 {
            continue;
        }
        let k = u.index.cuts.len() / 2;
        let s1 = PartialSymmetry::new(u.index.cuts[..k].to_vec());
        let s2 = PartialSymmetry::new(u.index.cuts[k..].to_vec());
        out.push((c, u, s1, s2));
    }
    out
}

fn weights_of(s: &Sequent, cuts: &PartialSymmetry) -> BTreeSet<EigenweightId> {
    cuts.delta().into_iter().flat_map(|o| s.literals_of(o)).map(|l| l.weight).collect()
}

/// A polynomial over `targets`; in `ℂ₊ₓ` every element is idempotent, so
/// `a ↦ P, ā ↦ 1 + P` respects both complement relations.
fn random_image(rng: &mut ChaCha8Rng, targets: &[Literal]) -> Poly {
    let pick = |rng: &mut ChaCha8Rng| targets.choose(rng).map_or_else(Poly::one, |l| Poly::literal(*l));
    match rng.gen_range(0..5) {
        0 => Poly::zero(),
        1 => Poly::one(),
        2 => pick(rng),
        3 => pick(rng).mul(&pick(rng)),
        _ => pick(rng).add(&pick(rng)),
    }
}

fn random_hom(rng: &mut ChaCha8Rng, domain: &BTreeSet<EigenweightId>, targets: &BTreeSet<Literal>) -> RingHom {
    let targets: Vec<Literal> = targets.iter().copied().collect();
    domain.iter().fold(RingHom::identity(), |d, w| {
        let img = random_image(rng, &targets);
        d.with(w.pos(), img.clone()).with(w.neg(), Poly::one().add(&img))
    })
}

fn instance_suites() -> Verdict {
    let cpx = ReductionMode::cplustimes();
    let instances = split_instances(200);
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env(1201));
    for (k, (c, u, s1, s2)) in instances.iter().enumerate() {
        ensure!(check_assoc(s1, s2, u, &cpx, DEFAULT_BOUND).unwrap(), "associativity fails on instance {k}");
        ensure!(partition_check(s1, s2, u), "partition fails on instance {k}");

        let gamma = c.sequent.conclusion_literals();
        let w1 = weights_of(&c.sequent, s1);
        let w2 = weights_of(&c.sequent, s2);
        let lits1: BTreeSet<Literal> = w1.iter().flat_map(|w| w.literals()).collect();
        let d1 = random_hom(&mut rng, &w1, &gamma);
        let d2_res = random_hom(&mut rng, &w2, &gamma);
        let r = check_assoc_hom(&d1, &d2_res, s1, s2, u, &cpx, DEFAULT_BOUND).unwrap();
        ensure!(r.res && r.ind, "hom associativity {r:?} on instance {k} with d1 = {d1}, d2 = {d2_res}");
        let d2_ind = random_hom(&mut rng, &w2, &lits1.union(&gamma).copied().collect());
        let r = check_assoc_hom(&d1, &d2_ind, s1, s2, u, &cpx, DEFAULT_BOUND).unwrap();
        ensure!(r.ind, "induced hom associativity fails on instance {k} with d1 = {d1}, d2 = {d2_ind}");
    }
    let base = seed_from_env(1202);
    for k in 0..200 {
        let c = superpose_case(base.wrapping_add(k));
        let ok = superposition_instance(&c.f, &c.g, c.a1, c.a2, c.target, c.weight, &c.copy, &c.fresh, DEFAULT_BOUND)
            .unwrap();
        ensure!(ok, "superposition fails on instance {k}");
    }
    Ok("200 instances each: associativity, Res and Ind hom identities, superposition, partition".into())
}
