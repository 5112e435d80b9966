//! Modular expression trees and their text syntax.
//!
//! Grammar (documented in the repository README):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := '-'? power
//! power    := primary ('^' exponent)?
//! exponent := integer | '(' rational ')'
//! primary  := integer | atom | '(' expr ')'
//! atom     := 'eta' '(' rational ')' | 'E2' | 'E4' | 'E6'
//!           | 'E4' '(' rational ')' | 'E6' '(' rational ')'
//!           | 'jdil' '(' integer ')' | 'q' '^' exponent
//! ```
//!
//! `jdil(a)` is sugar for Klein's j at a*tau and desugars to
//! `E4(a)^3 / eta(a)^24`.  Rationals written `p/q` parse as divisions,
//! which evaluate to the same constant.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::series_core::Rat;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum AtomKind {
    Eta,
    E2,
    E4,
    E6,
}

#[derive(Clone, PartialEq, Debug)]
pub enum ModularExpr {
    Const(Rat),
    /// q^r; only expandable under upper-triangular transformations.
    QPow(Rat),
    Atom { kind: AtomKind, dilation: Rat },
    Add(Box<ModularExpr>, Box<ModularExpr>),
    Sub(Box<ModularExpr>, Box<ModularExpr>),
    Mul(Box<ModularExpr>, Box<ModularExpr>),
    Div(Box<ModularExpr>, Box<ModularExpr>),
    Pow(Box<ModularExpr>, Rat),
    Neg(Box<ModularExpr>),
}

impl ModularExpr {
    pub fn atom(kind: AtomKind, dilation: Rat) -> Self {
        assert!(dilation > Rat::zero());
        ModularExpr::Atom { kind, dilation }
    }

    pub fn jdil(a: i64) -> Self {
        let e4 = ModularExpr::atom(AtomKind::E4, Rat::from_integer(a));
        let eta = ModularExpr::atom(AtomKind::Eta, Rat::from_integer(a));
        ModularExpr::Div(
            Box::new(ModularExpr::Pow(Box::new(e4), Rat::from_integer(3))),
            Box::new(ModularExpr::Pow(Box::new(eta), Rat::from_integer(24))),
        )
    }

    /// Modular weight; weights combine additively under mul/div/pow and must
    /// agree across add/sub.
    pub fn weight(&self) -> Result<Rat> {
        match self {
            ModularExpr::Const(_) | ModularExpr::QPow(_) => Ok(Rat::zero()),
            ModularExpr::Atom { kind, .. } => Ok(match kind {
                AtomKind::Eta => Rat::new(1, 2),
                AtomKind::E2 => Rat::from_integer(2),
                AtomKind::E4 => Rat::from_integer(4),
                AtomKind::E6 => Rat::from_integer(6),
            }),
            ModularExpr::Add(a, b) | ModularExpr::Sub(a, b) => {
                let (wa, wb) = (a.weight()?, b.weight()?);
                if wa != wb {
                    return Err(Error::Other(format!(
                        "weight mismatch in sum: {} vs {}",
                        wa, wb
                    )));
                }
                Ok(wa)
            }
            ModularExpr::Mul(a, b) => Ok(a.weight()? + b.weight()?),
            ModularExpr::Div(a, b) => Ok(a.weight()? - b.weight()?),
            ModularExpr::Pow(a, r) => Ok(a.weight()? * *r),
            ModularExpr::Neg(a) => a.weight(),
        }
    }

    pub fn contains_e2(&self) -> bool {
        match self {
            ModularExpr::Atom { kind, .. } => *kind == AtomKind::E2,
            ModularExpr::Const(_) | ModularExpr::QPow(_) => false,
            ModularExpr::Add(a, b)
            | ModularExpr::Sub(a, b)
            | ModularExpr::Mul(a, b)
            | ModularExpr::Div(a, b) => a.contains_e2() || b.contains_e2(),
            ModularExpr::Pow(a, _) | ModularExpr::Neg(a) => a.contains_e2(),
        }
    }
}

/// Eta-quotient data: dilation/exponent pairs plus an additive constant.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaQuotient {
    pub factors: Vec<(i64, i64)>,
    pub constant: Rat,
}

impl EtaQuotient {
    /// Total weight is (sum b_i)/2.
    pub fn weight(&self) -> Rat {
        Rat::new(self.factors.iter().map(|(_, b)| *b).sum::<i64>(), 2)
    }

    pub fn to_expr(&self) -> ModularExpr {
        let mut acc: Option<ModularExpr> = None;
        for (a, b) in &self.factors {
            let atom = ModularExpr::atom(AtomKind::Eta, Rat::from_integer(*a));
            let p = ModularExpr::Pow(Box::new(atom), Rat::from_integer(*b));
            acc = Some(match acc {
                None => p,
                Some(e) => ModularExpr::Mul(Box::new(e), Box::new(p)),
            });
        }
        let base = acc.unwrap_or(ModularExpr::Const(Rat::one()));
        if self.constant.is_zero() {
            base
        } else {
            ModularExpr::Add(Box::new(base), Box::new(ModularExpr::Const(self.constant)))
        }
    }

    /// Recognize an expression of the shape (eta product) + constant.
    pub fn from_expr(e: &ModularExpr) -> Option<EtaQuotient> {
        let (prod, constant) = match e {
            ModularExpr::Add(a, b) => {
                if let ModularExpr::Const(c) = **b {
                    (&**a, c)
                } else if let ModularExpr::Const(c) = **a {
                    (&**b, c)
                } else {
                    return None;
                }
            }
            other => (other, Rat::zero()),
        };
        let mut factors: Vec<(i64, i64)> = Vec::new();
        collect_eta_product(prod, 1, &mut factors)?;
        factors.sort();
        // merge duplicates
        let mut merged: Vec<(i64, i64)> = Vec::new();
        for (a, b) in factors {
            match merged.last_mut() {
                Some((la, lb)) if *la == a => *lb += b,
                _ => merged.push((a, b)),
            }
        }
        merged.retain(|(_, b)| *b != 0);
        Some(EtaQuotient { factors: merged, constant })
    }
}

fn collect_eta_product(e: &ModularExpr, sign: i64, out: &mut Vec<(i64, i64)>) -> Option<()> {
    match e {
        ModularExpr::Atom { kind: AtomKind::Eta, dilation } => {
            if !dilation.is_integer() {
                return None;
            }
            out.push((dilation.to_integer(), sign));
            Some(())
        }
        ModularExpr::Pow(base, r) => {
            if !r.is_integer() {
                return None;
            }
            let k = r.to_integer();
            if let ModularExpr::Atom { kind: AtomKind::Eta, dilation } = &**base {
                if !dilation.is_integer() {
                    return None;
                }
                out.push((dilation.to_integer(), sign * k));
                Some(())
            } else {
                None
            }
        }
        ModularExpr::Mul(a, b) => {
            collect_eta_product(a, sign, out)?;
            collect_eta_product(b, sign, out)
        }
        ModularExpr::Div(a, b) => {
            collect_eta_product(a, sign, out)?;
            collect_eta_product(b, -sign, out)
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// parser

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer { chars: s.chars().peekable(), pos: 0 }
    }

    fn next_tok(&mut self) -> Result<Tok> {
        while let Some(c) = self.chars.peek() {
            if c.is_whitespace() {
                self.chars.next();
                self.pos += 1;
            } else {
                break;
            }
        }
        let c = match self.chars.peek() {
            None => return Ok(Tok::End),
            Some(c) => *c,
        };
        if c.is_ascii_digit() {
            let mut n: i64 = 0;
            while let Some(d) = self.chars.peek().and_then(|c| c.to_digit(10)) {
                n = n
                    .checked_mul(10)
                    .and_then(|x| x.checked_add(d as i64))
                    .ok_or_else(|| Error::ExprParse("integer literal overflow".into()))?;
                self.chars.next();
                self.pos += 1;
            }
            return Ok(Tok::Int(n));
        }
        if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(c) = self.chars.peek() {
                if c.is_ascii_alphanumeric() {
                    s.push(*c);
                    self.chars.next();
                    self.pos += 1;
                } else {
                    break;
                }
            }
            return Ok(Tok::Ident(s));
        }
        self.chars.next();
        self.pos += 1;
        Ok(match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => return Err(Error::ExprParse(format!("unexpected character '{}'", other))),
        })
    }
}

struct Parser {
    toks: Vec<Tok>,
    idx: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        self.toks.get(self.idx).unwrap_or(&Tok::End)
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek().clone();
        self.idx += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        let got = self.bump();
        if got == t {
            Ok(())
        } else {
            Err(Error::ExprParse(format!("expected {:?}, found {:?}", t, got)))
        }
    }

    fn expr(&mut self) -> Result<ModularExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = ModularExpr::Add(Box::new(lhs), Box::new(rhs));
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = ModularExpr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ModularExpr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = ModularExpr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = ModularExpr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<ModularExpr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let inner = self.factor()?;
            return Ok(ModularExpr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ModularExpr> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let e = self.exponent()?;
            return Ok(ModularExpr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Rat> {
        match self.bump() {
            Tok::Int(n) => Ok(Rat::from_integer(n)),
            Tok::Minus => match self.bump() {
                Tok::Int(n) => Ok(Rat::from_integer(-n)),
                t => Err(Error::ExprParse(format!("bad exponent after '-': {:?}", t))),
            },
            Tok::LParen => {
                let r = self.rational()?;
                self.expect(Tok::RParen)?;
                Ok(r)
            }
            t => Err(Error::ExprParse(format!("bad exponent: {:?}", t))),
        }
    }

    fn rational(&mut self) -> Result<Rat> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let n = match self.bump() {
            Tok::Int(n) => n,
            t => return Err(Error::ExprParse(format!("expected number, found {:?}", t))),
        };
        let mut r = Rat::from_integer(n);
        if *self.peek() == Tok::Slash {
            self.bump();
            match self.bump() {
                Tok::Int(d) if d != 0 => r = Rat::new(n, d),
                t => return Err(Error::ExprParse(format!("bad denominator: {:?}", t))),
            }
        }
        Ok(if neg { -r } else { r })
    }

    fn primary(&mut self) -> Result<ModularExpr> {
        match self.bump() {
            Tok::Int(n) => Ok(ModularExpr::Const(Rat::from_integer(n))),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "eta" => {
                    self.expect(Tok::LParen)?;
                    let a = self.rational()?;
                    self.expect(Tok::RParen)?;
                    if a <= Rat::zero() {
                        return Err(Error::ExprParse("eta dilation must be positive".into()));
                    }
                    Ok(ModularExpr::atom(AtomKind::Eta, a))
                }
                "E2" | "E4" | "E6" => {
                    let kind = match name.as_str() {
                        "E2" => AtomKind::E2,
                        "E4" => AtomKind::E4,
                        _ => AtomKind::E6,
                    };
                    if *self.peek() == Tok::LParen {
                        self.bump();
                        let a = self.rational()?;
                        self.expect(Tok::RParen)?;
                        if a <= Rat::zero() {
                            return Err(Error::ExprParse("dilation must be positive".into()));
                        }
                        Ok(ModularExpr::atom(kind, a))
                    } else {
                        Ok(ModularExpr::atom(kind, Rat::one()))
                    }
                }
                "jdil" => {
                    self.expect(Tok::LParen)?;
                    let a = self.rational()?;
                    self.expect(Tok::RParen)?;
                    if !a.is_integer() || a <= Rat::zero() {
                        return Err(Error::ExprParse("jdil dilation must be a positive integer".into()));
                    }
                    Ok(ModularExpr::jdil(a.to_integer()))
                }
                "q" => {
                    self.expect(Tok::Caret)?;
                    let r = self.exponent()?;
                    Ok(ModularExpr::QPow(r))
                }
                other => Err(Error::ExprParse(format!("unknown atom '{}'", other))),
            },
            t => Err(Error::ExprParse(format!("unexpected token {:?}", t))),
        }
    }
}

/// Parse the catalog expression syntax.
pub fn parse_expr(s: &str) -> Result<ModularExpr> {
    let mut lexer = Lexer::new(s);
    let mut toks = Vec::new();
    loop {
        let t = lexer.next_tok()?;
        let end = t == Tok::End;
        toks.push(t);
        if end {
            break;
        }
    }
    let mut p = Parser { toks, idx: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(Error::ExprParse(format!("trailing input: {:?}", p.peek())));
    }
    Ok(e)
}
