use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of the eigenweight attached to one `&` occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EigenweightId(pub u32);

impl EigenweightId {
    pub fn pos(self) -> Literal {
        Literal { weight: self, polarity: Polarity::Pos }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Literal {
        Literal { weight: self, polarity: Polarity::Neg }
    }

    /// Both literals, positive first.
    pub fn literals(self) -> [Literal; 2] {
        [self.pos(), self.neg()]
    }
}

impl fmt::Display for EigenweightId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarity {
    /// `a`: the `&` resolved to its left argument.
    Pos,
    /// `ā`: the `&` resolved to its right argument.
    Neg,
}

/// A literal `a` or `ā`. The two are independent indeterminates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub weight: EigenweightId,
    pub polarity: Polarity,
}

impl Literal {
    pub fn complement(self) -> Literal {
        let polarity = match self.polarity {
            Polarity::Pos => Polarity::Neg,
            Polarity::Neg => Polarity::Pos,
        };
        Literal { weight: self.weight, polarity }
    }

    pub fn is_pos(self) -> bool {
        self.polarity == Polarity::Pos
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Pos => write!(f, "a{}", self.weight.0),
            Polarity::Neg => write!(f, "ā{}", self.weight.0),
        }
    }
}

/// Parses `a3`, `ā3` or the ASCII form `~a3`.
impl std::str::FromStr for Literal {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (polarity, rest) = if let Some(r) = s.strip_prefix('ā') {
            (Polarity::Neg, r)
        } else if let Some(r) = s.strip_prefix("~a") {
            (Polarity::Neg, r)
        } else if let Some(r) = s.strip_prefix('a') {
            (Polarity::Pos, r)
        } else {
            return Err(format!("not a literal: {s:?}"));
        };
        let id = rest.parse::<u32>().map_err(|_| format!("not a literal: {s:?}"))?;
        Ok(Literal { weight: EigenweightId(id), polarity })
    }
}
