//! Brute-force rewriting of raw words over `p, q, p*, q*`.
//!
//! Explores every order of applying `x*x → 1` and `x*y → 0` (x ≠ y) and
//! collects all normal forms reached. Independent of the library's
//! boundary-cancellation routine.

use std::collections::{BTreeSet, HashMap};

use mall_goi::algebra::{Gen, PathWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Up(Gen),
    Down(Gen),
}

/// `None` stands for the zero word.
pub type RawNormal = Option<Vec<Letter>>;

pub fn normal_forms(word: &[Letter]) -> BTreeSet<RawNormal> {
    let mut memo = HashMap::new();
    explore(word.to_vec(), &mut memo)
}

fn explore(word: Vec<Letter>, memo: &mut HashMap<Vec<Letter>, BTreeSet<RawNormal>>) -> BTreeSet<RawNormal> {
    if let Some(r) = memo.get(&word) {
        return r.clone();
    }
    let mut out = BTreeSet::new();
    let mut any = false;
    for i in 0..word.len().saturating_sub(1) {
        if let (Letter::Down(x), Letter::Up(y)) = (word[i], word[i + 1]) {
            any = true;
            if x == y {
                let mut next = word.clone();
                next.drain(i..i + 2);
                out.extend(explore(next, memo));
            } else {
                out.insert(None);
            }
        }
    }
    if !any {
        out.insert(Some(word.clone()));
    }
    memo.insert(word, out.clone());
    out
}

/// Converts an irreducible raw word to the library's representation.
pub fn to_path(n: &RawNormal) -> PathWord {
    match n {
        None => PathWord::Zero,
        Some(w) => {
            let ups = w.iter().filter_map(|l| if let Letter::Up(g) = l { Some(*g) } else { None }).collect();
            let downs = w.iter().filter_map(|l| if let Letter::Down(g) = l { Some(*g) } else { None }).collect();
            PathWord::new(ups, downs)
        }
    }
}

/// The library's product of the letters taken one at a time.
pub fn library_product(word: &[Letter]) -> PathWord {
    word.iter().fold(PathWord::one(), |acc, l| {
        let w = match l {
            Letter::Up(g) => PathWord::up(*g),
            Letter::Down(g) => PathWord::down(*g),
        };
        acc.mul(&w)
    })
}

pub fn letter_from_index(i: u8) -> Letter {
    match i % 4 {
        0 => Letter::Up(Gen::P),
        1 => Letter::Up(Gen::Q),
        2 => Letter::Down(Gen::P),
        _ => Letter::Down(Gen::Q),
    }
}
