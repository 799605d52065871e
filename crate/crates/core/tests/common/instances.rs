//! Random inputs for the superposition identity of `superposition_instance`.

use std::collections::BTreeMap;

use mall_goi::algebra::{AlgElem, EigenweightId, Monomial, PathWord, Poly};
use mall_goi::mall::OccId;
use mall_goi::matrix::{FMatrix, Index};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct SuperposeCase {
    pub f: FMatrix,
    pub g: FMatrix,
    pub a1: OccId,
    pub a2: OccId,
    pub target: OccId,
    pub weight: EigenweightId,
    pub copy: BTreeMap<OccId, OccId>,
    pub fresh: BTreeMap<EigenweightId, EigenweightId>,
}

/// Cut weights 1 and 2 (renamed to 11 and 12 in the copy), conclusion
/// weights 3 and 4, superposition weight 9.
const CUT_WEIGHTS: [u32; 2] = [1, 2];
const OTHER_WEIGHTS: [u32; 2] = [3, 4];

fn random_elem(rng: &mut ChaCha8Rng, density: f64) -> AlgElem {
    let mut x = AlgElem::zero();
    if !rng.gen_bool(density) {
        return x;
    }
    let paths = [PathWord::one(), PathWord::p(), PathWord::q(), PathWord::p_star(), PathWord::q_star()];
    for _ in 0..rng.gen_range(1..=2) {
        let mut m = Monomial::one();
        for _ in 0..rng.gen_range(0..=2) {
            let ws: Vec<u32> = CUT_WEIGHTS.iter().chain(&OTHER_WEIGHTS).copied().collect();
            let w = EigenweightId(ws[rng.gen_range(0..ws.len())]);
            let l = if rng.gen_bool(0.5) { w.pos() } else { w.neg() };
            m = m.mul(&Monomial::from_powers([(l, 1)]));
        }
        let mut path = paths[rng.gen_range(0..paths.len())].clone();
        if rng.gen_bool(0.3) {
            path = path.mul(&paths[rng.gen_range(0..paths.len())]);
        }
        if !path.is_zero() {
            x = x.add(&AlgElem::term(Poly::monomial(m), path));
        }
    }
    x
}

/// A matrix whose feedback `σ·U_ΔΔ` is strictly upper triangular in the
/// order of `delta`, hence nilpotent.
fn random_matrix(rng: &mut ChaCha8Rng, pairs: &[[OccId; 2]], concl: &[OccId]) -> FMatrix {
    let delta: Vec<OccId> = pairs.iter().flatten().copied().collect();
    let partner = |d: OccId| {
        pairs.iter().find_map(|[x, y]| {
            if *x == d {
                Some(*y)
            } else if *y == d {
                Some(*x)
            } else {
                None
            }
        })
    };
    let pos = |d: OccId| delta.iter().position(|x| *x == d);
    let all: Vec<OccId> = delta.iter().chain(concl).copied().collect();
    let mut entries = Vec::new();
    for &r in &all {
        for &c in &all {
            if let (Some(pr), Some(pc)) = (partner(r).and_then(pos), pos(c)) {
                if pr >= pc {
                    continue;
                }
            }
            entries.push((r, c, random_elem(rng, 0.4)));
        }
    }
    FMatrix::from_entries(Index::new(pairs.to_vec(), concl.to_vec()), entries)
}

pub fn superpose_case(seed: u64) -> SuperposeCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_pairs = rng.gen_range(0..=2);
    let pairs: Vec<[OccId; 2]> = (0..n_pairs).map(|k| [OccId(2 * k), OccId(2 * k + 1)]).collect();
    let gamma: Vec<OccId> = (0..rng.gen_range(0..=2)).map(|k| OccId(10 + k)).collect();
    let (a1, a2, target) = (OccId(20), OccId(21), OccId(22));
    let f_concl: Vec<OccId> = gamma.iter().copied().chain([a1]).collect();
    let g_concl: Vec<OccId> = gamma.iter().copied().chain([a2]).collect();
    let f = random_matrix(&mut rng, &pairs, &f_concl);
    let g = random_matrix(&mut rng, &pairs, &g_concl);
    let copy = pairs.iter().flatten().map(|o| (*o, OccId(100 + o.0))).collect();
    let fresh = CUT_WEIGHTS.iter().map(|w| (EigenweightId(*w), EigenweightId(10 + w))).collect();
    SuperposeCase { f, g, a1, a2, target, weight: EigenweightId(9), copy, fresh }
}
