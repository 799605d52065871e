//! Random well-formed proofs for property tests.
//!
//! Proofs are assembled from identity expansions, unary rules, tensors and
//! cuts against expansions of the dual formula. A with rule joins a proof
//! `P` of `⊢ Γ, B` with either a copy of `P` or `cut(P, E)` where `E` proves
//! `⊢ B⊥, C`; a random subset of the cuts of `P` is superposed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mall::{assign_eigenweights, shape, Atom, Formula, Proof, Side};

#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub max_depth: usize,
    pub max_with: usize,
    pub max_cuts: usize,
    /// Maximum size of formulas introduced by `plus`.
    pub max_formula: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_depth: 6, max_with: 4, max_cuts: 4, max_formula: 3 }
    }
}

pub struct ProofGen {
    rng: ChaCha8Rng,
    cfg: GenConfig,
}

/// Seed for property runs: `GOI_SEED` if set, otherwise `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var("GOI_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(default)
}

impl ProofGen {
    pub fn new(seed: u64) -> Self {
        ProofGen { rng: ChaCha8Rng::seed_from_u64(seed), cfg: GenConfig::default() }
    }

    pub fn with_config(seed: u64, cfg: GenConfig) -> Self {
        ProofGen { rng: ChaCha8Rng::seed_from_u64(seed), cfg }
    }

    /// A checked proof within the configured bounds, with eigenweights.
    pub fn proof(&mut self) -> Proof {
        loop {
            let budget = self.cfg.max_depth;
            let p = self.any(budget);
            if p.depth() <= self.cfg.max_depth
                && p.count_with() <= self.cfg.max_with
                && p.count_cuts() <= self.cfg.max_cuts
            {
                return assign_eigenweights(&p).expect("generated proofs check");
            }
        }
    }

    /// A proof with at least `n` cut rules.
    pub fn proof_with_cuts(&mut self, n: usize) -> Proof {
        loop {
            let p = self.proof();
            if p.count_cuts() >= n {
                return p;
            }
        }
    }

    pub fn atom(&mut self) -> Atom {
        let name = if self.rng.gen_bool(0.7) { "X" } else { "Y" };
        let a = Atom::new(name);
        if self.rng.gen_bool(0.5) {
            a
        } else {
            a.dual()
        }
    }

    pub fn formula(&mut self, size: usize) -> Formula {
        if size <= 1 || self.rng.gen_bool(0.4) {
            return Formula::Atom(self.atom());
        }
        let left = self.rng.gen_range(1..size);
        let l = self.formula(left);
        let r = self.formula(size - left);
        match self.rng.gen_range(0..4) {
            0 => Formula::tensor(l, r),
            1 => Formula::par(l, r),
            2 => Formula::with(l, r),
            _ => Formula::plus(l, r),
        }
    }

    fn concl(p: &Proof) -> Vec<Formula> {
        shape(p).expect("generated proofs check").conclusion
    }

    fn any(&mut self, budget: usize) -> Proof {
        if budget <= 1 {
            return Proof::Ax { atom: self.atom() };
        }
        match self.rng.gen_range(0..100) {
            0..=14 => Proof::Ax { atom: self.atom() },
            15..=26 => {
                let f = self.formula(3);
                eta(&f)
            }
            27..=40 => {
                let p = self.any(budget - 1);
                self.par(p)
            }
            41..=54 => {
                let p = self.any(budget - 1);
                self.plus(p)
            }
            55..=68 => {
                let p = self.any(budget - 1);
                let q = self.any(budget - 1);
                self.tensor(p, q)
            }
            69..=84 => {
                let p = self.any(budget - 1);
                self.cut(p, budget - 1)
            }
            _ => {
                let p = self.any(budget - 1);
                self.with(p)
            }
        }
    }

    fn par(&mut self, p: Proof) -> Proof {
        let c = Self::concl(&p);
        if c.len() < 2 {
            return p;
        }
        let mut idx: Vec<usize> = (0..c.len()).collect();
        idx.shuffle(&mut self.rng);
        let (i, j) = (idx[0], idx[1]);
        Proof::Par { a: c[i].clone(), b: c[j].clone(), premise: Box::new(p), at: [i, j] }
    }

    fn plus(&mut self, p: Proof) -> Proof {
        let c = Self::concl(&p);
        let i = self.rng.gen_range(0..c.len());
        let size = self.rng.gen_range(1..=self.cfg.max_formula);
        let other = self.formula(size);
        let side = if self.rng.gen_bool(0.5) { Side::Left } else { Side::Right };
        let (a, b) = match side {
            Side::Left => (c[i].clone(), other),
            Side::Right => (other, c[i].clone()),
        };
        Proof::Plus { premise: Box::new(p), side, a, b, at: i }
    }

    fn tensor(&mut self, p: Proof, q: Proof) -> Proof {
        let (cp, cq) = (Self::concl(&p), Self::concl(&q));
        let i = self.rng.gen_range(0..cp.len());
        let j = self.rng.gen_range(0..cq.len());
        Proof::Tensor { a: cp[i].clone(), b: cq[j].clone(), left: Box::new(p), right: Box::new(q), at: [i, j] }
    }

    /// Cuts a formula of `p` against a proof of its dual.
    fn cut(&mut self, p: Proof, budget: usize) -> Proof {
        let c = Self::concl(&p);
        let i = self.rng.gen_range(0..c.len());
        let a = c[i].clone();
        let mut q = eta(&a);
        let dual = position(&q, &a.negate());
        // q proves A⊥ and A; sometimes dress up the A side.
        if budget > 1 && self.rng.gen_bool(0.4) {
            q = if self.rng.gen_bool(0.5) {
                self.plus_at(q, 1 - dual)
            } else {
                let r = self.any(budget - 1);
                let cr = Self::concl(&r);
                let j = self.rng.gen_range(0..cr.len());
                Proof::Tensor {
                    a: a.clone(),
                    b: cr[j].clone(),
                    left: Box::new(q),
                    right: Box::new(r),
                    at: [1 - dual, j],
                }
            };
        }
        // Tensor keeps the left principal's position; plus rewrites in place.
        let (left, right, formula, at) =
            if self.rng.gen_bool(0.5) { (p, q, a, [i, dual]) } else { (q, p, a.negate(), [dual, i]) };
        Proof::Cut { left: Box::new(left), right: Box::new(right), formula, at }
    }

    fn plus_at(&mut self, p: Proof, i: usize) -> Proof {
        let c = Self::concl(&p);
        let other = self.formula(1);
        if self.rng.gen_bool(0.5) {
            Proof::Plus { premise: Box::new(p), side: Side::Left, a: c[i].clone(), b: other, at: i }
        } else {
            Proof::Plus { premise: Box::new(p), side: Side::Right, a: other, b: c[i].clone(), at: i }
        }
    }

    fn with(&mut self, p: Proof) -> Proof {
        let sp = shape(&p).expect("generated proofs check");
        let i = self.rng.gen_range(0..sp.conclusion.len());
        let b = sp.conclusion[i].clone();
        let (q, c, j) = if self.rng.gen_bool(0.5) {
            (p.clone(), b.clone(), i)
        } else {
            // E proves ⊢ B⊥, C.
            let mut e = eta(&b);
            let dual = position(&e, &b.negate());
            if self.rng.gen_bool(0.5) {
                e = self.plus_at(e, 1 - dual);
            }
            let ce = Self::concl(&e);
            let q = Proof::Cut { left: Box::new(p.clone()), right: Box::new(e), formula: b.clone(), at: [i, dual] };
            let cq = Self::concl(&q);
            let j = cq.len() - 1;
            (q, ce[1 - dual].clone(), j)
        };
        let cq = Self::concl(&q);
        let context = crate::mall::parse::default_context(&sp.conclusion, &cq, [i, j]);
        let superpose: Vec<[usize; 2]> =
            (0..sp.cuts.len()).filter(|_| self.rng.gen_bool(0.5)).map(|k| [k, k]).collect();
        let (left, right, a, bb, at, context, superpose) = if self.rng.gen_bool(0.5) {
            (p, q, b, c, [i, j], context, superpose)
        } else {
            let context = crate::mall::parse::default_context(&cq, &sp.conclusion, [j, i]);
            (q, p, c, b, [j, i], context, superpose)
        };
        Proof::With { left: Box::new(left), right: Box::new(right), a, b: bb, at, context, superpose, weight: None }
    }
}

fn position(p: &Proof, f: &Formula) -> usize {
    let c = shape(p).expect("generated proofs check").conclusion;
    c.iter().position(|g| g == f).expect("formula in conclusion")
}

/// Identity expansion: a cut-free proof whose conclusion is `F, F⊥` in some
/// order.
pub fn eta(f: &Formula) -> Proof {
    match f {
        Formula::Atom(a) => Proof::Ax { atom: a.clone() },
        Formula::Tensor(l, r) => {
            // ⊢ L, L⊥ and ⊢ R, R⊥ give ⊢ L*R, L⊥, R⊥, then ⊢ L*R, L⊥|R⊥.
            let (el, er) = (eta(l), eta(r));
            let (il, ir) = (position(&el, l), position(&er, r));
            let t = Proof::Tensor {
                left: Box::new(el),
                right: Box::new(er),
                a: (**l).clone(),
                b: (**r).clone(),
                at: [il, ir],
            };
            Proof::Par { premise: Box::new(t), a: l.negate(), b: r.negate(), at: [1 - il, 2] }
        }
        Formula::With(l, r) => {
            let (el, er) = (eta(l), eta(r));
            let (il, ir) = (position(&el, l), position(&er, r));
            let pl = Proof::Plus { premise: Box::new(el), side: Side::Left, a: l.negate(), b: r.negate(), at: 1 - il };
            let pr = Proof::Plus { premise: Box::new(er), side: Side::Right, a: l.negate(), b: r.negate(), at: 1 - ir };
            Proof::With {
                left: Box::new(pl),
                right: Box::new(pr),
                a: (**l).clone(),
                b: (**r).clone(),
                at: [il, ir],
                context: vec![1 - ir],
                superpose: vec![],
                weight: None,
            }
        }
        Formula::Par(..) | Formula::Plus(..) => eta(&f.negate()),
    }
}
