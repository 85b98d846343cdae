//! Text form of polynomials.
//!
//! Grammar: terms joined by `+`/`-`; factors are rational constants (`3`,
//! `2/5`), variables with an optional `^e`, or parenthesized expressions.
//! `*` may be omitted (`3x^2y`). Runs of letters are split into known names
//! when the split is unique.

use num_bigint::BigInt;

use super::{Monomial, MonomialOrder, Polynomial};
use crate::error::{Error, Result};
use crate::field::Field;

/// Variable names of a ring. `x1..xN` are always accepted as aliases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarNames {
    names: Vec<String>,
}

impl VarNames {
    pub fn canonical(n: usize) -> Self {
        VarNames {
            names: (1..=n).map(|i| format!("x{i}")).collect(),
        }
    }

    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        VarNames {
            names: names.into_iter().map(Into::into).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_canonical(&self) -> bool {
        *self == Self::canonical(self.len())
    }

    fn lookup(&self, s: &str) -> Option<usize> {
        if let Some(i) = self.names.iter().position(|n| n == s) {
            return Some(i);
        }
        let i: usize = s.strip_prefix('x')?.parse().ok()?;
        if s.starts_with("x0") || i == 0 || i > self.len() {
            return None;
        }
        Some(i - 1)
    }

    /// Splits an identifier into variable indices.
    fn segment(&self, ident: &str) -> Result<Vec<usize>> {
        if let Some(i) = self.lookup(ident) {
            return Ok(vec![i]);
        }
        // ways[k] counts splits of ident[k..] (capped at 2), next[k] records one
        let bytes = ident.len();
        let mut ways = vec![0u8; bytes + 1];
        let mut next = vec![(0usize, 0usize); bytes + 1];
        ways[bytes] = 1;
        for start in (0..bytes).rev() {
            if !ident.is_char_boundary(start) {
                continue;
            }
            for end in start + 1..=bytes {
                if !ident.is_char_boundary(end) || ways[end] == 0 {
                    continue;
                }
                if let Some(v) = self.lookup(&ident[start..end]) {
                    if ways[start] == 0 {
                        next[start] = (end, v);
                    }
                    ways[start] = (ways[start] + ways[end]).min(2);
                }
            }
        }
        match ways[0] {
            0 => Err(Error::Parse(format!("unknown variable `{ident}`"))),
            1 => {
                let mut out = Vec::new();
                let mut k = 0;
                while k < bytes {
                    let (end, v) = next[k];
                    out.push(v);
                    k = end;
                }
                Ok(out)
            }
            _ => Err(Error::Parse(format!(
                "ambiguous product `{ident}`; separate the variables with `*`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => {
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Tok::Num(digits.parse().expect("digits")));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            _ => {
                out.push(match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => return Err(Error::Parse(format!("unexpected character `{c}`"))),
                });
                i += 1;
            }
        }
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    toks: Vec<Tok>,
    pos: usize,
    field: &'a F,
    names: &'a VarNames,
}

impl<F: Field> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn zero(&self) -> Polynomial<F> {
        Polynomial::zero(self.field.clone(), self.names.len())
    }

    fn expr(&mut self) -> Result<Polynomial<F>> {
        let mut acc = self.zero();
        let mut first = true;
        loop {
            let negative = match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    false
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let t = self.term()?;
            acc = if negative { &acc - &t } else { &acc + &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial<F>> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(Tok::Num(_) | Tok::Ident(_) | Tok::LParen) => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(1);
        }
        self.pos += 1;
        match self.toks.get(self.pos) {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                u32::try_from(n)
                    .ok()
                    .filter(|&e| e <= u16::MAX as u32)
                    .ok_or_else(|| Error::Parse(format!("exponent {n} is too large")))
            }
            _ => Err(Error::Parse("expected a nonnegative integer after `^`".into())),
        }
    }

    fn factor(&mut self) -> Result<Polynomial<F>> {
        let n = self.names.len();
        let base = match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(a)) => {
                self.pos += 1;
                let mut den = BigInt::from(1);
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.toks.get(self.pos) {
                        Some(Tok::Num(b)) => {
                            den = b.clone();
                            self.pos += 1;
                        }
                        _ => return Err(Error::Parse("expected an integer after `/`".into())),
                    }
                }
                let c = self.field.from_ratio(&a, &den).ok_or_else(|| {
                    Error::Parse(format!("denominator {den} vanishes in the coefficient field"))
                })?;
                Polynomial::constant(self.field.clone(), n, c)
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                let vars = self.names.segment(&s)?;
                // in a run like `xy^2` the exponent binds to the last name only
                let e = self.exponent()?;
                let mut m = Monomial::one(n);
                for (k, &v) in vars.iter().enumerate() {
                    let add = if k + 1 == vars.len() { e } else { 1 };
                    let slot = &mut m.exponents_mut()[v];
                    *slot = u16::try_from(*slot as u32 + add)
                        .map_err(|_| Error::Parse("exponent overflow".into()))?;
                }
                return Ok(Polynomial::monomial(self.field.clone(), n, m, self.field.one()));
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(Error::Parse("missing `)`".into()));
                }
                self.pos += 1;
                inner
            }
            Some(t) => return Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => return Err(Error::Parse("unexpected end of input".into())),
        };
        let e = self.exponent()?;
        Ok(base.pow(e))
    }
}

impl<F: Field> Polynomial<F> {
    /// Parses a polynomial in the ring with the given variable names.
    pub fn parse(field: F, names: &VarNames, s: &str) -> Result<Self> {
        let toks = tokenize(s)?;
        if toks.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut p = Parser {
            toks,
            pos: 0,
            field: &field,
            names,
        };
        let out = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!(
                "trailing input after position {} in `{s}`",
                p.pos
            )));
        }
        Ok(out)
    }

    /// Canonical text: grevlex-descending terms, `*` between factors.
    pub fn format_with(&self, names: &VarNames) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.sorted_terms(MonomialOrder::Grevlex).into_iter().enumerate() {
            let text = self.field.format(c);
            let (neg, abs) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if abs != "1" || m.is_one() {
                factors.push(abs);
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names.names[i].clone()),
                    _ => factors.push(format!("{}^{e}", names.names[i])),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}
