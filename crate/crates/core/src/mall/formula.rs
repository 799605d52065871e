use std::fmt;

use serde::{Deserialize, Serialize};

/// A propositional variable or its negation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub name: String,
    pub positive: bool,
}

impl Atom {
    pub fn new(name: impl Into<String>) -> Self {
        Atom { name: name.into(), positive: true }
    }

    pub fn dual(&self) -> Atom {
        Atom { name: self.name.clone(), positive: !self.positive }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            f.write_str(&self.name)
        } else {
            write!(f, "~{}", self.name)
        }
    }
}

/// A MALL formula. Eigenweights are not part of the formula: they belong to
/// `&` occurrences in a checked sequent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    Atom(Atom),
    Tensor(Box<Formula>, Box<Formula>),
    Par(Box<Formula>, Box<Formula>),
    With(Box<Formula>, Box<Formula>),
    Plus(Box<Formula>, Box<Formula>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Connective {
    Tensor,
    Par,
    With,
    Plus,
}

impl Connective {
    pub fn symbol(self) -> &'static str {
        match self {
            Connective::Tensor => "*",
            Connective::Par => "|",
            Connective::With => "&",
            Connective::Plus => "+",
        }
    }

    pub fn dual(self) -> Connective {
        match self {
            Connective::Tensor => Connective::Par,
            Connective::Par => Connective::Tensor,
            Connective::With => Connective::Plus,
            Connective::Plus => Connective::With,
        }
    }
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Atom::new(name))
    }

    pub fn neg_atom(name: &str) -> Formula {
        Formula::Atom(Atom::new(name).dual())
    }

    pub fn binary(c: Connective, l: Formula, r: Formula) -> Formula {
        let (l, r) = (Box::new(l), Box::new(r));
        match c {
            Connective::Tensor => Formula::Tensor(l, r),
            Connective::Par => Formula::Par(l, r),
            Connective::With => Formula::With(l, r),
            Connective::Plus => Formula::Plus(l, r),
        }
    }

    pub fn tensor(l: Formula, r: Formula) -> Formula {
        Self::binary(Connective::Tensor, l, r)
    }

    pub fn par(l: Formula, r: Formula) -> Formula {
        Self::binary(Connective::Par, l, r)
    }

    pub fn with(l: Formula, r: Formula) -> Formula {
        Self::binary(Connective::With, l, r)
    }

    pub fn plus(l: Formula, r: Formula) -> Formula {
        Self::binary(Connective::Plus, l, r)
    }

    /// The top connective and arguments, or `None` for an atom.
    pub fn split(&self) -> Option<(Connective, &Formula, &Formula)> {
        match self {
            Formula::Atom(_) => None,
            Formula::Tensor(l, r) => Some((Connective::Tensor, l, r)),
            Formula::Par(l, r) => Some((Connective::Par, l, r)),
            Formula::With(l, r) => Some((Connective::With, l, r)),
            Formula::Plus(l, r) => Some((Connective::Plus, l, r)),
        }
    }

    pub fn connective(&self) -> Option<Connective> {
        self.split().map(|(c, _, _)| c)
    }

    /// De Morgan dual; argument order is preserved.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(a.dual()),
            _ => {
                let (c, l, r) = self.split().expect("non-atom");
                Formula::binary(c.dual(), l.negate(), r.negate())
            }
        }
    }

    pub fn size(&self) -> usize {
        match self.split() {
            None => 1,
            Some((_, l, r)) => 1 + l.size() + r.size(),
        }
    }

    pub fn count_with(&self) -> usize {
        match self.split() {
            None => 0,
            Some((c, l, r)) => usize::from(c == Connective::With) + l.count_with() + r.count_with(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f, true)
    }
}

impl Formula {
    fn render(&self, f: &mut fmt::Formatter<'_>, top: bool) -> fmt::Result {
        match self.split() {
            None => {
                let Formula::Atom(a) = self else { unreachable!() };
                write!(f, "{a}")
            }
            Some((c, l, r)) => {
                if !top {
                    f.write_str("(")?;
                }
                l.render(f, false)?;
                write!(f, " {} ", c.symbol())?;
                r.render(f, false)?;
                if !top {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}
