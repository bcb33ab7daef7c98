//! Text syntax for polynomials.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary ("*"? unary)*
//! unary  := "-" unary | factor
//! factor := atom ("^" uint)?
//! atom   := var | number | "i" | "(" expr ")" | "[" expr "," expr "]"
//!         | "s(" uint ")" | "pi(" uint ")"
//! var    := "x" uint        (index >= 1)
//! number := uint ("/" uint)?
//! ```
//!
//! Juxtaposition multiplies, so `2x1x2`, `1/2i` and `(1+2i)*x1` all parse.
//! Unary minus is only recognised at the start of a term or after `*`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gauss::fmt_rational;
use super::poly::{nested_commutator_poly, standard_poly, Limits, NcPoly, Var};
use super::GaussRat;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Var(u64),
    Num(BigRational),
    I,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Std,
    Pi,
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
    let digits = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBrack,
            b']' => Tok::RBrack,
            b',' => Tok::Comma,
            b'i' => Tok::I,
            b's' => Tok::Std,
            b'p' if bytes.get(i + 1) == Some(&b'i') => {
                i += 1;
                Tok::Pi
            }
            b'x' => {
                let end = digits(i + 1);
                if end == i + 1 {
                    return Err(err(start, "expected variable index after 'x'"));
                }
                let idx: u64 = text[i + 1..end]
                    .parse()
                    .map_err(|_| err(start, "variable index too large"))?;
                if idx == 0 {
                    return Err(err(start, "variable index must be at least 1"));
                }
                i = end;
                out.push((start, Tok::Var(idx)));
                continue;
            }
            b'0'..=b'9' => {
                let end = digits(i);
                let num: BigInt = text[i..end].parse().expect("digits");
                let mut value = BigRational::from_integer(num);
                i = end;
                // skip whitespace to find an optional "/den"
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                    j += 1;
                }
                if j < bytes.len() && bytes[j] == b'/' {
                    let mut k = j + 1;
                    while k < bytes.len() && bytes[k].is_ascii_whitespace() {
                        k += 1;
                    }
                    let dend = digits(k);
                    if dend == k {
                        return Err(err(j, "expected denominator after '/'"));
                    }
                    let den: BigInt = text[k..dend].parse().expect("digits");
                    if den.is_zero() {
                        return Err(err(k, "zero denominator"));
                    }
                    value /= BigRational::from_integer(den);
                    i = dend;
                }
                out.push((start, Tok::Num(value)));
                continue;
            }
            _ => return Err(err(start, &format!("unexpected character {:?}", c as char))),
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    limits: &'a Limits,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn here(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.here(), msg: msg.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn uint(&mut self) -> Result<u64> {
        match self.peek().clone() {
            Tok::Num(r) if r.is_integer() => {
                let pos = self.here();
                self.bump();
                u64::try_from(r.numer()).map_err(|_| Error::Parse {
                    pos,
                    msg: "integer too large".into(),
                })
            }
            Tok::Minus => self.fail("exponent and builtin arguments must be nonnegative"),
            _ => self.fail("expected a nonnegative integer"),
        }
    }

    fn expr(&mut self) -> Result<NcPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(t: &Tok) -> bool {
        matches!(
            t,
            Tok::Var(_) | Tok::Num(_) | Tok::I | Tok::LParen | Tok::LBrack | Tok::Std | Tok::Pi
        )
    }

    fn term(&mut self) -> Result<NcPoly> {
        let mut acc = self.unary()?;
        loop {
            if *self.peek() == Tok::Star {
                self.bump();
                let rhs = self.unary()?;
                acc = self.checked_mul(&acc, &rhs)?;
            } else if Self::starts_factor(self.peek()) {
                let rhs = self.factor()?;
                acc = self.checked_mul(&acc, &rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn checked_mul(&self, a: &NcPoly, b: &NcPoly) -> Result<NcPoly> {
        if a.degree() + b.degree() > self.limits.max_degree {
            return self.fail(format!("degree exceeds limit {}", self.limits.max_degree));
        }
        Ok(a.mul_poly(b))
    }

    fn unary(&mut self) -> Result<NcPoly> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-&self.unary()?);
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<NcPoly> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let e = self.uint()?;
        if (base.degree() as u128) * (e as u128) > self.limits.max_degree as u128 {
            return self.fail(format!("degree exceeds limit {}", self.limits.max_degree));
        }
        if !base.is_constant() || e <= 64 {
            return Ok(base.pow(e as u32));
        }
        self.fail("exponent too large for a constant")
    }

    fn builtin(&mut self, pos: usize, is_std: bool) -> Result<NcPoly> {
        self.expect(Tok::LParen, "'(' after builtin name")?;
        let k = self.uint()?;
        self.expect(Tok::RParen, "')'")?;
        let bad = |msg: String| Err(Error::Parse { pos, msg });
        if k == 0 {
            return bad("builtin index must be at least 1".into());
        }
        let (degree, vars) = if is_std {
            (k as u128, k as u128)
        } else if k < 64 {
            (1u128 << k, 1u128 << k)
        } else {
            (u128::MAX, u128::MAX)
        };
        if degree > self.limits.max_degree as u128 || vars > self.limits.max_vars as u128 {
            let name = if is_std { "s" } else { "pi" };
            return bad(format!("{name}({k}) exceeds limits {:?}", self.limits));
        }
        if is_std {
            standard_poly(k as usize)
        } else {
            nested_commutator_poly(k as usize)
        }
    }

    fn atom(&mut self) -> Result<NcPoly> {
        let pos = self.here();
        match self.bump() {
            Tok::Var(v) => {
                if v > Var::MAX as u64 {
                    return Err(Error::Parse {
                        pos,
                        msg: format!("variable index must be at most {}", Var::MAX),
                    });
                }
                Ok(NcPoly::var(v as Var))
            }
            Tok::Num(r) => Ok(NcPoly::constant(GaussRat::from(r))),
            Tok::I => Ok(NcPoly::constant(GaussRat::I)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::LBrack => {
                let a = self.expr()?;
                self.expect(Tok::Comma, "','")?;
                let b = self.expr()?;
                self.expect(Tok::RBrack, "']'")?;
                if a.degree() + b.degree() > self.limits.max_degree {
                    return Err(Error::Parse {
                        pos,
                        msg: format!("degree exceeds limit {}", self.limits.max_degree),
                    });
                }
                Ok(a.bracket(&b))
            }
            Tok::Std => self.builtin(pos, true),
            Tok::Pi => self.builtin(pos, false),
            Tok::End => Err(Error::Parse { pos, msg: "unexpected end of input".into() }),
            other => Err(Error::Parse { pos, msg: format!("unexpected token {other:?}") }),
        }
    }
}

/// Parses with the default [`Limits`].
pub fn parse_poly(text: &str) -> Result<NcPoly> {
    parse_poly_with(text, &Limits::default())
}

pub fn parse_poly_with(text: &str, limits: &Limits) -> Result<NcPoly> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, limits };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("trailing input");
    }
    limits.check(&out)?;
    Ok(out)
}

fn fmt_word(f: &mut fmt::Formatter<'_>, letters: &[Var]) -> fmt::Result {
    let mut i = 0;
    let mut first = true;
    while i < letters.len() {
        let v = letters[i];
        let mut run = 1;
        while i + run < letters.len() && letters[i + run] == v {
            run += 1;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if run == 1 {
            write!(f, "x{v}")?;
        } else {
            write!(f, "x{v}^{run}")?;
        }
        i += run;
    }
    Ok(())
}

/// Canonical printer; its output re-parses to the same polynomial.
impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (word, c)) in self.terms().enumerate() {
            let (re, im) = (c.re(), c.im());
            // (negative?, magnitude text, needs "*" before the word)
            let (neg, mag): (bool, Option<String>) = if im.is_zero() {
                let m = re.abs();
                (re.is_negative(), (!m.is_one() || word.is_empty()).then(|| fmt_rational(&m)))
            } else if re.is_zero() {
                let m = im.abs();
                let txt = if m.is_one() { "i".to_string() } else { format!("{}i", fmt_rational(&m)) };
                (im.is_negative(), Some(txt))
            } else {
                (false, Some(format!("({c})")))
            };
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if let Some(m) = &mag {
                write!(f, "{m}")?;
                if !word.is_empty() {
                    write!(f, "*")?;
                }
            }
            fmt_word(f, word.letters())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::poly::Word;

    fn w(l: &[Var]) -> Word {
        Word::from_slice(l)
    }

    #[test]
    fn bracket_sugar() {
        let p = parse_poly("[x1,x2]").unwrap();
        assert_eq!(p.coeff(&w(&[1, 2])), GaussRat::ONE);
        assert_eq!(p.coeff(&w(&[2, 1])), GaussRat::from(-1));
        assert_eq!(p.num_terms(), 2);
        assert_eq!(parse_poly("s(2)").unwrap(), p);
        assert_eq!(parse_poly("pi(1)").unwrap(), p);
    }

    #[test]
    fn expansion() {
        let p = parse_poly("x1^2 - x1*x2").unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&w(&[1, 1])), GaussRat::ONE);
        assert_eq!(p.coeff(&w(&[1, 2])), GaussRat::from(-1));
    }

    #[test]
    fn complex_constants() {
        let p = parse_poly("(1/2 + 3i) x1 - 2i").unwrap();
        assert_eq!(p.coeff(&w(&[1])), GaussRat::from_str_pair("1/2", "3").unwrap());
        assert_eq!(p.constant_term(), GaussRat::int(0, -2));
        let q = parse_poly("1/2i*x1").unwrap();
        assert_eq!(q.coeff(&w(&[1])), GaussRat::from_str_pair("0", "1/2").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly("x1 + x0") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_poly("x1^-2"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_poly("x1 +"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("[x1, x2"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("x1 $"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_poly("s(0)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("1/0"), Err(Error::Parse { .. })));
    }

    #[test]
    fn limits_guard_builtins() {
        assert!(parse_poly("s(13)").is_err());
        assert!(parse_poly("pi(4)").is_err());
        let wide = Limits { max_degree: 16, max_vars: 16 };
        assert_eq!(parse_poly_with("pi(4)", &wide).unwrap().degree(), 16);
        assert!(parse_poly("x1^13").is_err());
    }

    #[test]
    fn printer_examples() {
        assert_eq!(parse_poly("x1*x2 - x2*x1").unwrap().to_string(), "x1*x2 - x2*x1");
        assert_eq!(parse_poly("-x1 + 3").unwrap().to_string(), "3 - x1");
        assert_eq!(parse_poly("x1 x1 x2").unwrap().to_string(), "x1^2*x2");
        assert_eq!(parse_poly("(1-i) x2 - 1/3 i").unwrap().to_string(), "-1/3i + (1-1i)*x2");
        assert_eq!(parse_poly("x1 - x1").unwrap().to_string(), "0");
    }
}
