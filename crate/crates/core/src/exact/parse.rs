//! Parsers for the canonical text forms produced by `Display` on
//! polynomials: `-1/2 + D1*D2 + 2*D1^3` and `3*x^(1,-2) + x^(0,0)`.

use num::One;

use super::{ExpVec, ExponentDomain, Poly, PolyH, LaurentPoly, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Var(usize),
    X(ExpVec),
    Star,
    Caret,
    Plus,
    Minus,
}

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn read_int(chars: &[char], pos: &mut usize) -> Option<i64> {
    let start = *pos;
    if *pos < chars.len() && chars[*pos] == '-' {
        *pos += 1;
    }
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    let s: String = chars[start..*pos].iter().collect();
    s.parse().ok()
}

fn tokenize(s: &str, dim: usize) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0;
    let mut out = Vec::new();
    while pos < chars.len() {
        let ch = chars[pos];
        match ch {
            ' ' | '\t' | '\n' => pos += 1,
            '*' => {
                out.push(Tok::Star);
                pos += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                pos += 1;
            }
            '+' => {
                out.push(Tok::Plus);
                pos += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                pos += 1;
            }
            'D' => {
                pos += 1;
                let i = read_int(&chars, &mut pos).ok_or_else(|| err(format!("bad variable in {s:?}")))?;
                if i < 1 || i as usize > dim {
                    return Err(err(format!("variable D{i} out of range for dimension {dim}")));
                }
                out.push(Tok::Var(i as usize - 1));
            }
            'x' => {
                pos += 1;
                if chars.get(pos) != Some(&'^') || chars.get(pos + 1) != Some(&'(') {
                    return Err(err(format!("expected x^( in {s:?}")));
                }
                pos += 2;
                let mut entries = Vec::new();
                loop {
                    while chars.get(pos) == Some(&' ') {
                        pos += 1;
                    }
                    let e = read_int(&chars, &mut pos).ok_or_else(|| err(format!("bad exponent in {s:?}")))?;
                    entries.push(e);
                    while chars.get(pos) == Some(&' ') {
                        pos += 1;
                    }
                    match chars.get(pos) {
                        Some(',') => pos += 1,
                        Some(')') => {
                            pos += 1;
                            break;
                        }
                        _ => return Err(err(format!("unterminated exponent in {s:?}"))),
                    }
                }
                if entries.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: entries.len() });
                }
                out.push(Tok::X(ExpVec::new(&entries)));
            }
            c if c.is_ascii_digit() => {
                let start = pos;
                while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '/') {
                    pos += 1;
                }
                let text: String = chars[start..pos].iter().collect();
                out.push(Tok::Num(super::parse_rational(&text)?));
            }
            other => return Err(err(format!("unexpected character {other:?} in {s:?}"))),
        }
    }
    Ok(out)
}

fn parse_generic<K: ExponentDomain>(dim: usize, s: &str) -> Result<Poly<K>> {
    let toks = tokenize(s, dim)?;
    let mut pos = 0;
    let mut out = Poly::<K>::zero(dim);
    let mut first = true;
    while pos < toks.len() || first {
        let mut sign = Rational::one();
        match toks.get(pos) {
            Some(Tok::Plus) => pos += 1,
            Some(Tok::Minus) => {
                sign = -sign;
                pos += 1;
            }
            _ if !first => return Err(err(format!("expected + or - in {s:?}"))),
            _ => {}
        }
        first = false;
        let mut coeff = sign;
        let mut exp = ExpVec::zero(dim);
        loop {
            match toks.get(pos) {
                Some(Tok::Num(c)) => {
                    coeff *= c;
                    pos += 1;
                }
                Some(Tok::Var(_)) if K::LAURENT => {
                    return Err(err(format!("D variables not allowed in a Laurent polynomial: {s:?}")))
                }
                Some(Tok::X(_)) if !K::LAURENT => {
                    return Err(err(format!("x monomials not allowed here: {s:?}")))
                }
                Some(Tok::Var(i)) => {
                    let i = *i;
                    pos += 1;
                    let mut k = 1;
                    if toks.get(pos) == Some(&Tok::Caret) {
                        pos += 1;
                        match toks.get(pos) {
                            Some(Tok::Num(c)) if c.is_integer() => {
                                k = i64::try_from(c.to_integer()).map_err(|_| err("exponent too large"))?;
                                pos += 1;
                            }
                            _ => return Err(err(format!("bad power in {s:?}"))),
                        }
                    }
                    exp = exp.add(&ExpVec::unit(dim, i).scale(k));
                }
                Some(Tok::X(e)) => {
                    exp = exp.add(e);
                    pos += 1;
                }
                _ => return Err(err(format!("expected a factor in {s:?}"))),
            }
            if toks.get(pos) == Some(&Tok::Star) {
                pos += 1;
            } else {
                break;
            }
        }
        if !K::admits(&exp) {
            return Err(err(format!("exponent {exp} not allowed in {s:?}")));
        }
        out.add_term(exp, coeff);
    }
    Ok(out)
}

/// Parse a polynomial in `D1..Dd`.
pub fn parse_poly_h(dim: usize, s: &str) -> Result<PolyH> {
    parse_generic(dim, s)
}

/// Parse a Laurent polynomial written with `x^(..)` monomials.
pub fn parse_laurent(dim: usize, s: &str) -> Result<LaurentPoly> {
    parse_generic(dim, s)
}
