//! Text syntax for proofs.
//!
//! ```text
//! ax X
//! cut(P1, P2 ; A)
//! tensor(P1, P2 ; A, B)      par(P ; A, B)
//! plus1(P ; A, B)            plus2(P ; A, B)
//! with(P1, P2 ; A, B ; superpose = [0, 1:2])
//! ```
//!
//! Optional trailing clauses, separated by `;`:
//! - `at = [i, j]` (or `at = i` for `plus`): positions of the principal
//!   formulas in the premises' conclusions. Default: first match.
//! - `context = [..]` (`with` only): for each non-principal position of the
//!   left premise, the matching position in the right one. Default: the k-th
//!   occurrence of a formula on the left matches its k-th occurrence on the
//!   right.
//! - `weight = aN` (`with` only).
//!
//! In `superpose`, `i` abbreviates `i:i`. `#` starts a comment. `*` and `&`
//! bind tighter than `|` and `+`; all binary connectives associate to the left.

use std::fmt;

use super::check::{shape, CheckError};
use super::formula::{Atom, Formula};
use super::proof::{Proof, Side};
use crate::algebra::EigenweightId;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{col}: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
    #[error("{line}:{col}: {source}")]
    Rule {
        line: usize,
        col: usize,
        #[source]
        source: CheckError,
    },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, col, .. } | ParseError::Rule { line, col, .. } => (*line, *col),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(usize),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Lexed>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
        } else if c == '#' {
            while chars.peek().is_some_and(|c| *c != '\n') {
                bump(&mut chars);
            }
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                s.push(bump(&mut chars));
            }
            let n =
                s.parse().map_err(|_| ParseError::Syntax { line: l0, col: c0, expected: "a small number".into() })?;
            out.push(Lexed { tok: Tok::Num(n), line: l0, col: c0 });
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_alphanumeric() || *c == '_' || *c == '\'') {
                s.push(bump(&mut chars));
            }
            out.push(Lexed { tok: Tok::Ident(s), line: l0, col: c0 });
        } else if "(),;=[]:~*|&+".contains(c) {
            bump(&mut chars);
            out.push(Lexed { tok: Tok::Sym(c), line: l0, col: c0 });
        } else {
            return Err(ParseError::Syntax { line: l0, col: c0, expected: format!("a token, found `{c}`") });
        }
    }
    out.push(Lexed { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
}

#[derive(Default)]
struct Clauses {
    at: Option<Vec<usize>>,
    context: Option<Vec<usize>>,
    superpose: Option<Vec<[usize; 2]>>,
    weight: Option<EigenweightId>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        (self.toks[self.pos].line, self.toks[self.pos].col)
    }

    fn err<T>(&self, expected: &str) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError::Syntax { line, col, expected: format!("{expected}, found {}", self.peek()) })
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("`{c}`"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(what),
        }
    }

    fn num(&mut self) -> Result<usize, ParseError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("a number"),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.formula_tight()?;
        loop {
            if self.eat('|') {
                f = Formula::par(f, self.formula_tight()?);
            } else if self.eat('+') {
                f = Formula::plus(f, self.formula_tight()?);
            } else {
                return Ok(f);
            }
        }
    }

    fn formula_tight(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.formula_atom()?;
        loop {
            if self.eat('*') {
                f = Formula::tensor(f, self.formula_atom()?);
            } else if self.eat('&') {
                f = Formula::with(f, self.formula_atom()?);
            } else {
                return Ok(f);
            }
        }
    }

    fn formula_atom(&mut self) -> Result<Formula, ParseError> {
        if self.eat('(') {
            let f = self.formula()?;
            self.expect(')')?;
            Ok(f)
        } else if self.eat('~') {
            Ok(self.formula_atom()?.negate())
        } else {
            let name = self.ident("a formula")?;
            Ok(Formula::Atom(Atom::new(name)))
        }
    }

    fn num_list(&mut self) -> Result<Vec<usize>, ParseError> {
        self.expect('[')?;
        let mut out = Vec::new();
        if !self.eat(']') {
            loop {
                out.push(self.num()?);
                if self.eat(']') {
                    break;
                }
                self.expect(',')?;
            }
        }
        Ok(out)
    }

    fn pair_list(&mut self) -> Result<Vec<[usize; 2]>, ParseError> {
        self.expect('[')?;
        let mut out = Vec::new();
        if !self.eat(']') {
            loop {
                let i = self.num()?;
                let j = if self.eat(':') { self.num()? } else { i };
                out.push([i, j]);
                if self.eat(']') {
                    break;
                }
                self.expect(',')?;
            }
        }
        Ok(out)
    }

    fn clauses(&mut self, allowed: &[&str]) -> Result<Clauses, ParseError> {
        let mut c = Clauses::default();
        while self.eat(';') {
            let start = self.pos;
            let key = self.ident(&format!("one of {}", allowed.join(", ")))?;
            if !allowed.contains(&key.as_str()) {
                self.pos = start;
                return self.err(&format!("one of {}", allowed.join(", ")));
            }
            self.expect('=')?;
            match key.as_str() {
                "at" => {
                    c.at = Some(if matches!(self.peek(), Tok::Num(_)) { vec![self.num()?] } else { self.num_list()? });
                }
                "context" => c.context = Some(self.num_list()?),
                "superpose" => c.superpose = Some(self.pair_list()?),
                "weight" => {
                    let w = self.ident("an eigenweight such as a1")?;
                    match w.strip_prefix('a').and_then(|n| n.parse::<u32>().ok()) {
                        Some(n) => c.weight = Some(EigenweightId(n)),
                        None => {
                            self.pos -= 1;
                            return self.err("an eigenweight such as a1");
                        }
                    }
                }
                _ => unreachable!(),
            }
        }
        Ok(c)
    }

    fn proof(&mut self) -> Result<Proof, ParseError> {
        let (line, col) = self.here();
        let head = self.ident("a rule name")?;
        let rule_err = |source| ParseError::Rule { line, col, source };
        if head == "ax" {
            let f = self.formula_atom()?;
            return match f {
                Formula::Atom(atom) => Ok(Proof::Ax { atom }),
                _ => Err(ParseError::Syntax { line, col, expected: "an atom after `ax`".into() }),
            };
        }
        let binary = match head.as_str() {
            "cut" | "tensor" | "with" => true,
            "par" | "plus1" | "plus2" => false,
            _ => {
                self.pos -= 1;
                return self.err("a rule name (ax, cut, tensor, par, plus1, plus2, with)");
            }
        };
        self.expect('(')?;
        let left = self.proof()?;
        let right = if binary {
            self.expect(',')?;
            Some(self.proof()?)
        } else {
            None
        };
        self.expect(';')?;
        let a = self.formula()?;
        let b = if head == "cut" {
            None
        } else {
            self.expect(',')?;
            Some(self.formula()?)
        };
        let allowed: &[&str] = if head == "with" { &["superpose", "at", "context", "weight"] } else { &["at"] };
        let cl = self.clauses(allowed)?;
        self.expect(')')?;
        let lshape = shape(&left).map_err(rule_err)?;
        let rshape = match &right {
            Some(r) => Some(shape(r).map_err(rule_err)?),
            None => None,
        };
        let find = |fs: &[Formula], f: &Formula, skip: Option<usize>| {
            fs.iter().enumerate().position(|(k, g)| Some(k) != skip && g == f).unwrap_or(fs.len())
        };
        let at2 = |cl: &Clauses, d: [usize; 2]| -> Result<[usize; 2], ParseError> {
            match &cl.at {
                None => Ok(d),
                Some(v) if v.len() == 2 => Ok([v[0], v[1]]),
                Some(_) => Err(ParseError::Syntax { line, col, expected: "`at = [i, j]`".into() }),
            }
        };
        let lc = &lshape.conclusion;
        let p = match head.as_str() {
            "cut" => {
                let rc = &rshape.as_ref().unwrap().conclusion;
                let d = [find(lc, &a, None), find(rc, &a.negate(), None)];
                let at = at2(&cl, d)?;
                Proof::Cut { left: Box::new(left), right: Box::new(right.unwrap()), formula: a, at }
            }
            "tensor" => {
                let rc = &rshape.as_ref().unwrap().conclusion;
                let b = b.unwrap();
                let at = at2(&cl, [find(lc, &a, None), find(rc, &b, None)])?;
                Proof::Tensor { left: Box::new(left), right: Box::new(right.unwrap()), a, b, at }
            }
            "par" => {
                let b = b.unwrap();
                let i = find(lc, &a, None);
                let at = at2(&cl, [i, find(lc, &b, Some(i))])?;
                Proof::Par { premise: Box::new(left), a, b, at }
            }
            "plus1" | "plus2" => {
                let side = if head == "plus1" { Side::Left } else { Side::Right };
                let b = b.unwrap();
                let arg = if side == Side::Left { &a } else { &b };
                let at = match &cl.at {
                    None => find(lc, arg, None),
                    Some(v) if v.len() == 1 => v[0],
                    Some(_) => return Err(ParseError::Syntax { line, col, expected: "`at = i`".into() }),
                };
                Proof::Plus { premise: Box::new(left), side, a, b, at }
            }
            "with" => {
                let rc = &rshape.as_ref().unwrap().conclusion;
                let b = b.unwrap();
                let at = at2(&cl, [find(lc, &a, None), find(rc, &b, None)])?;
                let context = match cl.context {
                    Some(c) => c,
                    None => default_context(lc, rc, at),
                };
                Proof::With {
                    left: Box::new(left),
                    right: Box::new(right.unwrap()),
                    a,
                    b,
                    at,
                    context,
                    superpose: cl.superpose.unwrap_or_default(),
                    weight: cl.weight,
                }
            }
            _ => unreachable!(),
        };
        shape(&p).map_err(rule_err)?;
        Ok(p)
    }
}

/// The k-th occurrence of a formula among the left premise's context matches
/// the k-th occurrence of the same formula among the right one's.
pub(crate) fn default_context(lc: &[Formula], rc: &[Formula], at: [usize; 2]) -> Vec<usize> {
    let mut used = vec![false; rc.len()];
    if at[1] < used.len() {
        used[at[1]] = true;
    }
    let mut out = Vec::new();
    for (k, f) in lc.iter().enumerate() {
        if k == at[0] {
            continue;
        }
        match (0..rc.len()).find(|j| !used[*j] && rc[*j] == *f) {
            Some(j) => {
                used[j] = true;
                out.push(j);
            }
            None => out.push(rc.len()),
        }
    }
    out
}

/// Default principal positions, as chosen by the parser when `at` is absent.
pub(crate) fn default_at(p: &Proof) -> Option<Vec<usize>> {
    let prem = p.premises();
    let concl = |k: usize| shape(prem[k]).ok().map(|s| s.conclusion);
    let find = |fs: &[Formula], f: &Formula, skip: Option<usize>| {
        fs.iter().enumerate().position(|(k, g)| Some(k) != skip && g == f).unwrap_or(fs.len())
    };
    Some(match p {
        Proof::Ax { .. } => vec![],
        Proof::Cut { formula, .. } => vec![find(&concl(0)?, formula, None), find(&concl(1)?, &formula.negate(), None)],
        Proof::Tensor { a, b, .. } | Proof::With { a, b, .. } => {
            vec![find(&concl(0)?, a, None), find(&concl(1)?, b, None)]
        }
        Proof::Par { a, b, .. } => {
            let c = concl(0)?;
            let i = find(&c, a, None);
            vec![i, find(&c, b, Some(i))]
        }
        Proof::Plus { side, a, b, .. } => {
            let arg = if *side == Side::Left { a } else { b };
            vec![find(&concl(0)?, arg, None)]
        }
    })
}

/// Parses one proof expression.
pub fn parse_proof(src: &str) -> Result<Proof, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let proof = p.proof()?;
    if *p.peek() != Tok::Eof {
        return p.err("end of input");
    }
    Ok(proof)
}

/// Parses a formula.
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.err("end of input");
    }
    Ok(f)
}

/// Renders a proof in the syntax accepted by [`parse_proof`]. Positional
/// clauses are emitted only where they differ from the parser's defaults.
pub fn print_proof(p: &Proof) -> String {
    let mut out = String::new();
    write_proof(p, &mut out);
    out
}

fn write_list(out: &mut String, v: &[usize]) {
    out.push('[');
    out.push_str(&v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));
    out.push(']');
}

fn write_proof(p: &Proof, out: &mut String) {
    let name = match p {
        Proof::Ax { atom } => {
            out.push_str(&format!("ax {atom}"));
            return;
        }
        Proof::Cut { .. } => "cut",
        Proof::Tensor { .. } => "tensor",
        Proof::Par { .. } => "par",
        Proof::Plus { side: Side::Left, .. } => "plus1",
        Proof::Plus { side: Side::Right, .. } => "plus2",
        Proof::With { .. } => "with",
    };
    out.push_str(name);
    out.push('(');
    for (k, q) in p.premises().into_iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        write_proof(q, out);
    }
    out.push_str(" ; ");
    let at: Vec<usize> = match p {
        Proof::Cut { formula, at, .. } => {
            out.push_str(&formula.to_string());
            at.to_vec()
        }
        Proof::Tensor { a, b, at, .. } | Proof::Par { a, b, at, .. } | Proof::With { a, b, at, .. } => {
            out.push_str(&format!("{a}, {b}"));
            at.to_vec()
        }
        Proof::Plus { a, b, at, .. } => {
            out.push_str(&format!("{a}, {b}"));
            vec![*at]
        }
        Proof::Ax { .. } => unreachable!(),
    };
    if let Proof::With { superpose, .. } = p {
        out.push_str(" ; superpose = [");
        let items: Vec<String> =
            superpose.iter().map(|[i, j]| if i == j { i.to_string() } else { format!("{i}:{j}") }).collect();
        out.push_str(&items.join(", "));
        out.push(']');
    }
    if default_at(p).as_ref() != Some(&at) {
        out.push_str(" ; at = ");
        if at.len() == 1 {
            out.push_str(&at[0].to_string());
        } else {
            write_list(out, &at);
        }
    }
    if let Proof::With { left, right, context, weight, at, .. } = p {
        let default = match (shape(left), shape(right)) {
            (Ok(l), Ok(r)) => Some(default_context(&l.conclusion, &r.conclusion, *at)),
            _ => None,
        };
        if default.as_ref() != Some(context) {
            out.push_str(" ; context = ");
            write_list(out, context);
        }
        if let Some(w) = weight {
            out.push_str(&format!(" ; weight = {w}"));
        }
    }
    out.push(')');
}
