//! Finite formal languages over literals: the semiring `(2^W(L), ∪, ·, ∅, {ε})`.

use std::collections::BTreeSet;
use std::fmt;

use super::literal::Literal;

pub type Word = Vec<Literal>;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lang {
    words: BTreeSet<Word>,
}

impl Lang {
    /// The empty language, zero of the semiring.
    pub fn empty() -> Self {
        Self::default()
    }

    /// `{ε}`, unit of the semiring.
    pub fn epsilon() -> Self {
        Lang { words: BTreeSet::from([Vec::new()]) }
    }

    pub fn letter(l: Literal) -> Self {
        Lang { words: BTreeSet::from([vec![l]]) }
    }

    pub fn from_words(it: impl IntoIterator<Item = Word>) -> Self {
        Lang { words: it.into_iter().collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_epsilon(&self) -> bool {
        self.words.len() == 1 && self.words.iter().next().is_some_and(Vec::is_empty)
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn contains(&self, w: &[Literal]) -> bool {
        self.words.contains(w)
    }

    pub fn is_subset(&self, other: &Lang) -> bool {
        self.words.is_subset(&other.words)
    }

    pub fn union(&self, other: &Lang) -> Lang {
        Lang { words: self.words.union(&other.words).cloned().collect() }
    }

    pub fn concat(&self, other: &Lang) -> Lang {
        let mut words = BTreeSet::new();
        for u in &self.words {
            for v in &other.words {
                let mut w = u.clone();
                w.extend_from_slice(v);
                words.insert(w);
            }
        }
        Lang { words }
    }

    /// All literals occurring in some word.
    pub fn letters(&self) -> BTreeSet<Literal> {
        self.words.iter().flatten().copied().collect()
    }

    /// `‖v‖`: the literals `a`, `ā` whose weight is witnessed with both
    /// polarities somewhere in the language (not necessarily in one word).
    pub fn norm(&self) -> BTreeSet<Literal> {
        let letters = self.letters();
        letters.iter().copied().filter(|l| letters.contains(&l.complement())).collect()
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.words.is_empty() {
            return f.write_str("∅");
        }
        f.write_str("{")?;
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if w.is_empty() {
                f.write_str("ε")?;
            }
            for (j, l) in w.iter().enumerate() {
                if j > 0 {
                    f.write_str(".")?;
                }
                write!(f, "{l}")?;
            }
        }
        f.write_str("}")
    }
}
