//! Words over the partial isometries `p`, `q` in normal form.
//!
//! Every nonzero product of generators and their adjoints reduces to an
//! ascending word over `{p, q}` followed by a descending word over `{p*, q*}`:
//! at the single boundary `x*y` either cancels (`x = y`) or kills the word.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    P,
    Q,
}

impl Gen {
    fn symbol(self) -> char {
        match self {
            Gen::P => 'p',
            Gen::Q => 'q',
        }
    }
}

/// A normal-form word `u·v*`; `downs` lists the bases of the starred suffix in
/// reading order, so `pq*p*` is `ups = [p]`, `downs = [q, p]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathWord {
    Zero,
    Word { ups: Vec<Gen>, downs: Vec<Gen> },
}

impl PathWord {
    pub fn one() -> Self {
        PathWord::Word { ups: Vec::new(), downs: Vec::new() }
    }

    pub fn p() -> Self {
        Self::up(Gen::P)
    }

    pub fn q() -> Self {
        Self::up(Gen::Q)
    }

    pub fn p_star() -> Self {
        Self::down(Gen::P)
    }

    pub fn q_star() -> Self {
        Self::down(Gen::Q)
    }

    pub fn up(g: Gen) -> Self {
        PathWord::Word { ups: vec![g], downs: Vec::new() }
    }

    pub fn down(g: Gen) -> Self {
        PathWord::Word { ups: Vec::new(), downs: vec![g] }
    }

    pub fn new(ups: Vec<Gen>, downs: Vec<Gen>) -> Self {
        PathWord::Word { ups, downs }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, PathWord::Zero)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, PathWord::Word { ups, downs } if ups.is_empty() && downs.is_empty())
    }

    pub fn len(&self) -> usize {
        match self {
            PathWord::Zero => 0,
            PathWord::Word { ups, downs } => ups.len() + downs.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mul(&self, other: &PathWord) -> PathWord {
        let (PathWord::Word { ups: u1, downs: d1 }, PathWord::Word { ups: u2, downs: d2 }) = (self, other) else {
            return PathWord::Zero;
        };
        // The boundary is d1 (read right to left) against u2 (left to right).
        let common = d1.len().min(u2.len());
        for i in 0..common {
            if d1[d1.len() - 1 - i] != u2[i] {
                return PathWord::Zero;
            }
        }
        let mut ups = u1.clone();
        let mut downs = Vec::new();
        if d1.len() > common {
            downs.extend_from_slice(&d1[..d1.len() - common]);
        } else {
            ups.extend_from_slice(&u2[common..]);
        }
        downs.extend_from_slice(d2);
        PathWord::Word { ups, downs }
    }

    /// `(u v*)* = v u*`.
    pub fn star(&self) -> PathWord {
        match self {
            PathWord::Zero => PathWord::Zero,
            PathWord::Word { ups, downs } => PathWord::Word {
                ups: downs.iter().rev().copied().collect(),
                downs: ups.iter().rev().copied().collect(),
            },
        }
    }
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathWord::Zero => f.write_str("0"),
            PathWord::Word { ups, downs } if ups.is_empty() && downs.is_empty() => f.write_str("1"),
            PathWord::Word { ups, downs } => {
                for g in ups {
                    write!(f, "{}", g.symbol())?;
                }
                for g in downs {
                    write!(f, "{}*", g.symbol())?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `1`, `0`, or a normal-form word such as `ppq*p*`.
impl std::str::FromStr for PathWord {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "0" => return Ok(PathWord::Zero),
            "1" => return Ok(PathWord::one()),
            _ => {}
        }
        let mut out = PathWord::one();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            let g = match c {
                'p' => Gen::P,
                'q' => Gen::Q,
                _ => return Err(format!("bad path word {s:?}")),
            };
            let letter = if chars.peek() == Some(&'*') {
                chars.next();
                PathWord::down(g)
            } else {
                PathWord::up(g)
            };
            out = out.mul(&letter);
        }
        Ok(out)
    }
}
