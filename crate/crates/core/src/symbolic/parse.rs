//! Text grammar for operator and phase-space polynomials.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := atom ('^' integer)?
//! atom    := literal | 'i' | 'r2' | name '[' integer ']' | '(' expr ')'
//! literal := digits ('.' digits)? (('e'|'E') sign? digits)? ('/' digits)? ('r2i' | 'r2' | 'i')?
//! name    := 'a' | 'ad' | 'phi' | 'pi' | 'y' | 'z'
//! ```
//!
//! `ad[j]`/`a[j]` are a_j⁺/a_j. In operator context `phi[j]`/`pi[j]` stand
//! for the field operators Φ_j/Π_j and `y[j]`/`z[j]` for a_j⁺/a_j. In
//! phase-space context `phi`/`pi` are the classical variables, `y`/`z`
//! the complex chart, and ladder generators are rejected.
//!
//! A literal's suffix applies to the whole literal: `1/2r2` is √2/2, so the
//! canonical printed forms parse back to themselves. Decimals are read as
//! exact rationals (`0.1` is 1/10).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::coeff::{Exact, QSqrt2};
use super::operator::{normal_product, Generator, OperatorPolynomial, Word, WordPolynomial};
use super::phipi::{PhiPiPolynomial, Variable};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Literal(Exact),
    Name(String),
    Int(u32),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
}

#[derive(Clone, Debug)]
struct Spanned {
    token: Token,
    pos: usize,
}

fn parse_err(pos: usize, message: impl Into<String>) -> Error {
    Error::Parse { column: pos + 1, message: message.into() }
}

fn lex(input: &str) -> Result<Vec<Spanned>> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let simple = match c {
            '+' => Some(Token::Plus),
            '-' => Some(Token::Minus),
            '*' => Some(Token::Star),
            '/' => Some(Token::Slash),
            '^' => Some(Token::Caret),
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            '[' => Some(Token::LBracket),
            ']' => Some(Token::RBracket),
            _ => None,
        };
        if let Some(token) = simple {
            out.push(Spanned { token, pos: start });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let (lit, next) = lex_literal(input, start)?;
            out.push(Spanned { token: lit, pos: start });
            i = next;
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Spanned { token: Token::Name(input[start..i].to_string()), pos: start });
            continue;
        }
        return Err(parse_err(start, format!("unexpected character '{c}'")));
    }
    Ok(out)
}

fn digits_end(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    i
}

/// Lex a numeric literal starting at `start`. Returns an `Int` token when
/// the literal is a bare nonnegative integer (usable as an index or
/// exponent), otherwise an exact `Literal`.
fn lex_literal(input: &str, start: usize) -> Result<(Token, usize)> {
    let bytes = input.as_bytes();
    let int_end = digits_end(bytes, start);
    let mut i = int_end;
    let mut value = BigRational::from_integer(BigInt::parse_bytes(&bytes[start..int_end], 10).unwrap());
    let mut plain_int = true;
    if i < bytes.len() && bytes[i] == b'.' {
        let frac_end = digits_end(bytes, i + 1);
        if frac_end == i + 1 {
            return Err(parse_err(i, "expected digits after '.'"));
        }
        let frac = &input[i + 1..frac_end];
        let num = BigInt::parse_bytes(frac.as_bytes(), 10).unwrap();
        let den = BigInt::from(10).pow(frac.len() as u32);
        value += BigRational::new(num, den);
        i = frac_end;
        plain_int = false;
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        let mut negative = false;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            negative = bytes[j] == b'-';
            j += 1;
        }
        let exp_end = digits_end(bytes, j);
        if exp_end == j {
            return Err(parse_err(i, "expected exponent digits"));
        }
        let exp: u32 = input[j..exp_end].parse().map_err(|_| parse_err(j, "exponent too large"))?;
        let scale = BigRational::from_integer(BigInt::from(10).pow(exp));
        value = if negative { value / scale } else { value * scale };
        i = exp_end;
        plain_int = false;
    }
    if i + 1 < bytes.len() && bytes[i] == b'/' && bytes[i + 1].is_ascii_digit() {
        let den_end = digits_end(bytes, i + 1);
        let den = BigInt::parse_bytes(&bytes[i + 1..den_end], 10).unwrap();
        if den.is_zero() {
            return Err(parse_err(i + 1, "zero denominator"));
        }
        value /= BigRational::from_integer(den);
        i = den_end;
        plain_int = false;
    }
    let rest = &input[i..];
    let (suffix_len, scalar) = if rest.starts_with("r2i") {
        (3, Exact { re: QSqrt2::zero(), im: QSqrt2::new(BigRational::zero(), BigRational::one()) })
    } else if rest.starts_with("r2") {
        (2, Exact::sqrt2())
    } else if rest.starts_with('i') && !rest[1..].starts_with(|c: char| c.is_ascii_alphanumeric()) {
        (1, Exact::i())
    } else {
        (0, Exact::one())
    };
    if suffix_len > 0 {
        plain_int = false;
    }
    i += suffix_len;
    if i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
        return Err(parse_err(i, "unexpected characters after number"));
    }
    if plain_int {
        if let Ok(n) = input[start..int_end].parse::<u32>() {
            return Ok((Token::Int(n), i));
        }
    }
    Ok((Token::Literal(&Exact::from_rational(value) * &scalar), i))
}

#[derive(Clone, Debug)]
enum Expr {
    Scalar(Exact),
    Symbol { name: String, index: usize, pos: usize },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser {
    tokens: Vec<Spanned>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|s| &s.token)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.at).map(|s| s.pos).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.at).map(|s| s.token.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<()> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(parse_err(pos, format!("expected {what}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Token::Slash) => {
                    self.bump();
                    let pos = self.pos();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Token::Minus) => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Token::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Token::Int(n)) => Ok(Expr::Pow(Box::new(base), n)),
                _ => Err(parse_err(pos, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Some(Token::Literal(x)) => Ok(Expr::Scalar(x)),
            Some(Token::Int(n)) => Ok(Expr::Scalar(Exact::from_integer(n as i64))),
            Some(Token::LParen) => {
                let e = self.expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(e)
            }
            Some(Token::Name(name)) => match name.as_str() {
                "i" => Ok(Expr::Scalar(Exact::i())),
                "r2" => Ok(Expr::Scalar(Exact::sqrt2())),
                "a" | "ad" | "phi" | "pi" | "y" | "z" => {
                    self.expect(Token::LBracket, "'[' after generator name")?;
                    let ipos = self.pos();
                    let index = match self.bump() {
                        Some(Token::Int(n)) if n >= 1 => n as usize,
                        _ => return Err(parse_err(ipos, "expected a mode index ≥ 1")),
                    };
                    self.expect(Token::RBracket, "']'")?;
                    Ok(Expr::Symbol { name, index, pos })
                }
                other => Err(parse_err(pos, format!("unknown name '{other}'"))),
            },
            Some(_) => Err(parse_err(pos, "expected a number, symbol or '('")),
            None => Err(parse_err(pos, "unexpected end of input")),
        }
    }
}

fn parse_expr(input: &str) -> Result<Expr> {
    let tokens = lex(input)?;
    let mut p = Parser { tokens, at: 0, end: input.len() };
    if p.peek().is_none() {
        return Err(parse_err(0, "empty expression"));
    }
    let e = p.expr()?;
    if p.at < p.tokens.len() {
        return Err(parse_err(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}

fn max_mode(e: &Expr) -> usize {
    match e {
        Expr::Scalar(_) => 0,
        Expr::Symbol { index, .. } => *index,
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => max_mode(a).max(max_mode(b)),
        Expr::Neg(a) | Expr::Pow(a, _) => max_mode(a),
    }
}

fn resolve_modes(e: &Expr, modes: Option<usize>) -> Result<usize> {
    let used = max_mode(e);
    match modes {
        Some(n) if used > n => Err(Error::ModeOutOfRange { mode: used, modes: n }),
        Some(n) => Ok(n),
        None => Ok(used.max(1)),
    }
}

/// Parse an operator expression into a word polynomial (product order kept).
pub fn parse_words(input: &str, modes: Option<usize>) -> Result<WordPolynomial> {
    let e = parse_expr(input)?;
    let n = resolve_modes(&e, modes)?;
    eval_words(&e, n)
}

/// Parse an expression already in canonical normal-ordered form.
///
/// Fails if any word is not normal ordered; use
/// [`super::rewrite_to_normal_form`] on [`parse_words`] for arbitrary input.
pub fn parse_operator(input: &str, modes: Option<usize>) -> Result<OperatorPolynomial> {
    let w = parse_words(input, modes)?;
    if let Some((word, _)) = w.terms().find(|(word, _)| !word.is_normal_ordered()) {
        return Err(Error::Parse {
            column: 1,
            message: format!("word {} is not normal ordered", WordPolynomial::from_word(w.modes(), word.clone(), Exact::one())),
        });
    }
    Ok(normal_product(&w))
}

fn eval_words(e: &Expr, n: usize) -> Result<WordPolynomial> {
    Ok(match e {
        Expr::Scalar(x) => WordPolynomial::scalar(n, x.clone()),
        Expr::Symbol { name, index, .. } => {
            let j = *index;
            match name.as_str() {
                "a" | "z" => WordPolynomial::generator(n, Generator::annihilate(j)),
                "ad" | "y" => WordPolynomial::generator(n, Generator::create(j)),
                "phi" => WordPolynomial::from(&OperatorPolynomial::field_phi(n, j)),
                "pi" => WordPolynomial::from(&OperatorPolynomial::field_pi(n, j)),
                _ => unreachable!("lexer only admits known names"),
            }
        }
        Expr::Add(a, b) => eval_words(a, n)?.add(&eval_words(b, n)?),
        Expr::Sub(a, b) => eval_words(a, n)?.sub(&eval_words(b, n)?),
        Expr::Mul(a, b) => eval_words(a, n)?.mul(&eval_words(b, n)?),
        Expr::Neg(a) => eval_words(a, n)?.neg(),
        Expr::Pow(a, k) => eval_words(a, n)?.pow(*k),
        Expr::Div(a, b, pos) => {
            let den = eval_words(b, n)?;
            let scalar = as_scalar_words(&den).ok_or_else(|| parse_err(*pos, "can only divide by a scalar"))?;
            let inv = scalar.inverse().ok_or_else(|| parse_err(*pos, "division by zero"))?;
            eval_words(a, n)?.scale(&inv)
        }
    })
}

fn as_scalar_words(p: &WordPolynomial) -> Option<Exact> {
    if p.is_empty() {
        return Some(Exact::zero());
    }
    if p.len() == 1 {
        let (w, c) = p.terms().next()?;
        if w.is_empty() {
            return Some(c.clone());
        }
    }
    None
}

/// Parse a phase-space polynomial in `phi[j]`, `pi[j]` (and `y[j]`, `z[j]`).
pub fn parse_phipi(input: &str, modes: Option<usize>) -> Result<PhiPiPolynomial> {
    let e = parse_expr(input)?;
    let n = resolve_modes(&e, modes)?;
    eval_phipi(&e, n)
}

fn eval_phipi(e: &Expr, n: usize) -> Result<PhiPiPolynomial> {
    Ok(match e {
        Expr::Scalar(x) => PhiPiPolynomial::constant(n, x.clone()),
        Expr::Symbol { name, index, pos } => {
            let j = *index;
            let v = match name.as_str() {
                "phi" => Variable::Phi(j),
                "pi" => Variable::Pi(j),
                "y" => Variable::Y(j),
                "z" => Variable::Z(j),
                other => {
                    return Err(parse_err(*pos, format!("ladder generator '{other}' is not allowed in a phase-space polynomial")))
                }
            };
            PhiPiPolynomial::variable(n, v)
        }
        Expr::Add(a, b) => eval_phipi(a, n)?.add(&eval_phipi(b, n)?),
        Expr::Sub(a, b) => eval_phipi(a, n)?.sub(&eval_phipi(b, n)?),
        Expr::Mul(a, b) => eval_phipi(a, n)?.mul(&eval_phipi(b, n)?),
        Expr::Neg(a) => eval_phipi(a, n)?.scale(&Exact::from_integer(-1)),
        Expr::Pow(a, k) => eval_phipi(a, n)?.pow(*k),
        Expr::Div(a, b, pos) => {
            let den = eval_phipi(b, n)?;
            let scalar = if den.is_zero() {
                Some(Exact::zero())
            } else if den.degree() == 0 {
                den.terms().next().map(|(_, c)| c.clone())
            } else {
                None
            };
            let scalar = scalar.ok_or_else(|| parse_err(*pos, "can only divide by a scalar"))?;
            let inv = scalar.inverse().ok_or_else(|| parse_err(*pos, "division by zero"))?;
            eval_phipi(a, n)?.scale(&inv)
        }
    })
}

/// Parse a single generator word such as `a[1]*ad[2]*ad[1]`.
pub fn parse_word(input: &str) -> Result<Word> {
    let p = parse_words(input, None)?;
    let word = match p.terms().next() {
        Some((w, c)) if p.len() == 1 && *c == Exact::one() => Some(w.clone()),
        _ => None,
    };
    word.ok_or_else(|| parse_err(0, "expected a single word with unit coefficient"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::rewrite_to_normal_form;

    #[test]
    fn canonical_forms_round_trip() {
        for text in [
            "(1+0i)*ad[1]*ad[2]*a[1]*a[2] + (1+0i)*ad[1]*ad[2]*ad[3]*a[1]*a[2]*a[3]",
            "(0+1/2r2+0i)*ad[1] + (0+1/2r2+0i)*a[1]",
            "(-3/4+1/2i-1r2i)",
            "0",
        ] {
            let parsed = if text == "0" {
                OperatorPolynomial::zero(1)
            } else {
                parse_operator(text, None).unwrap()
            };
            assert_eq!(parsed.to_string(), text);
        }
    }

    #[test]
    fn decimals_are_exact() {
        let p = parse_phipi("0.1*phi[1]^4", None).unwrap();
        assert_eq!(p, PhiPiPolynomial::phi(1, 1).pow(4).scale(&Exact::ratio(1, 10)));
        let q = parse_phipi("1e-1*phi[1]", None).unwrap();
        assert_eq!(q, PhiPiPolynomial::phi(1, 1).scale(&Exact::ratio(1, 10)));
    }

    #[test]
    fn field_operators_in_operator_context() {
        let p = parse_words("phi[1]*phi[1] + pi[1]*pi[1]", None).unwrap();
        assert_eq!(rewrite_to_normal_form(&p).to_string(), "(1+0i) + (2+0i)*ad[1]*a[1]");
    }

    #[test]
    fn errors_carry_positions() {
        match parse_words("a[1]*+", None) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 7),
            other => panic!("{other:?}"),
        }
        match parse_phipi("phi[1] * a[1]", None) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 10),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_words("foo[1]", None), Err(Error::Parse { column: 1, .. })));
        assert!(matches!(parse_words("a[0]", None), Err(Error::Parse { .. })));
        assert!(matches!(parse_words("a[1]/a[1]", None), Err(Error::Parse { .. })));
        assert!(matches!(parse_words("a[3]", Some(2)), Err(Error::ModeOutOfRange { .. })));
    }

    #[test]
    fn division_by_scalars() {
        let p = parse_phipi("(phi[1]^2 + pi[1]^2)/2", None).unwrap();
        assert_eq!(p, PhiPiPolynomial::harmonic(1));
        let q = parse_phipi("phi[1]/r2", None).unwrap();
        assert_eq!(q, PhiPiPolynomial::phi(1, 1).scale(&Exact::inv_sqrt2()));
    }

    #[test]
    fn not_normal_ordered_is_rejected() {
        assert!(parse_operator("a[1]*ad[1]", None).is_err());
    }
}
