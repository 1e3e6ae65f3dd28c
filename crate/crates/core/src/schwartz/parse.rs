//! Parser for the test-function expression language.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := '-'? factor (('*' | '/') factor)*
//! factor := number | 'i' | 'pi' | 'sqrt2' | 't' ('^' integer)?
//!         | 'exp' '(' expr ')' | '(' expr ')'
//! ```
//!
//! The argument of `exp` must reduce to `-q * t^2` with `q > 0`; the stored
//! Gaussian scale is `q / pi`, so `exp(-pi*t^2/2)` has scale `1/2`. Divisors
//! must be constants. Every term of the result must carry a Gaussian factor.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::GaussPoly;
use crate::error::{Error, Result};

const MAX_DEPTH: usize = 128;
const MAX_DEGREE: u32 = 512;
const MAX_MONOMIALS: usize = 4096;

/// A parsed expression together with its source text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParsedExpr {
    pub source: String,
    pub value: GaussPoly,
}

/// Parses `expr` into an exact-structure [`GaussPoly`] with float coefficients.
pub fn parse(expr: &str) -> Result<ParsedExpr> {
    let mut p = Parser { src: expr, pos: 0, depth: 0 };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos < expr.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(ParsedExpr { source: expr.to_string(), value: into_gauss(poly, expr.len())? })
}

#[derive(Debug, Clone, Copy)]
struct Mono {
    coef: Complex64,
    pi: i32,
    t: u32,
    /// 0 when the monomial has no Gaussian factor.
    scale: f64,
}

impl Mono {
    fn constant(coef: Complex64) -> Self {
        Mono { coef, pi: 0, t: 0, scale: 0.0 }
    }

    fn key(&self) -> (i32, u32, u64) {
        (self.pi, self.t, self.scale.to_bits())
    }
}

type Poly = Vec<Mono>;

fn normalize(poly: Poly) -> Poly {
    let mut merged: BTreeMap<(i32, u32, u64), Mono> = BTreeMap::new();
    for m in poly {
        merged.entry(m.key()).and_modify(|e| e.coef += m.coef).or_insert(m);
    }
    merged.into_values().filter(|m| m.coef != Complex64::new(0.0, 0.0)).collect()
}

fn into_gauss(poly: Poly, end: usize) -> Result<GaussPoly> {
    let mut by_scale: BTreeMap<u64, Vec<Complex64>> = BTreeMap::new();
    for m in normalize(poly) {
        if m.scale == 0.0 {
            return Err(Error::NotSchwartz(format!("term t^{} has no Gaussian factor (polynomial-only input)", m.t)));
        }
        let c = m.coef * std::f64::consts::PI.powi(m.pi);
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::Parse { offset: end, message: "coefficient overflows".into() });
        }
        let coeffs = by_scale.entry(m.scale.to_bits()).or_default();
        if coeffs.len() <= m.t as usize {
            coeffs.resize(m.t as usize + 1, Complex64::new(0.0, 0.0));
        }
        coeffs[m.t as usize] += c;
    }
    GaussPoly::from_terms(by_scale.into_iter().map(|(bits, c)| (f64::from_bits(bits), c)))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { offset: self.pos, message: message.into() }
    }

    fn error_at(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Parse { offset, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", b as char)))
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("expression nested too deeply"));
        }
        let mut acc = self.term()?;
        loop {
            let negate = match self.peek() {
                Some(b'+') => false,
                Some(b'-') => true,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            acc.extend(rhs.into_iter().map(|mut m| {
                if negate {
                    m.coef = -m.coef;
                }
                m
            }));
            acc = normalize(acc);
            if acc.len() > MAX_MONOMIALS {
                return Err(self.error("expression too large"));
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let negate = self.eat(b'-');
        let mut acc = self.factor()?;
        loop {
            let divide = match self.peek() {
                Some(b'*') => false,
                Some(b'/') => true,
                _ => break,
            };
            self.pos += 1;
            let at = self.pos;
            let rhs = self.factor()?;
            acc = if divide { self.divide(acc, rhs, at)? } else { self.multiply(acc, rhs)? };
        }
        if negate {
            for m in &mut acc {
                m.coef = -m.coef;
            }
        }
        Ok(acc)
    }

    fn multiply(&self, a: Poly, b: Poly) -> Result<Poly> {
        if a.len().saturating_mul(b.len()) > MAX_MONOMIALS * 4 {
            return Err(self.error("expression too large"));
        }
        let mut out = Vec::with_capacity(a.len() * b.len());
        for x in &a {
            for y in &b {
                let t = x.t + y.t;
                if t > MAX_DEGREE {
                    return Err(self.error(format!("polynomial degree exceeds {MAX_DEGREE}")));
                }
                out.push(Mono { coef: x.coef * y.coef, pi: x.pi + y.pi, t, scale: x.scale + y.scale });
            }
        }
        let out = normalize(out);
        if out.len() > MAX_MONOMIALS {
            return Err(self.error("expression too large"));
        }
        Ok(out)
    }

    fn divide(&self, a: Poly, b: Poly, at: usize) -> Result<Poly> {
        let b = normalize(b);
        match b.as_slice() {
            [d] if d.t == 0 && d.scale == 0.0 => {
                Ok(a.into_iter().map(|m| Mono { coef: m.coef / d.coef, pi: m.pi - d.pi, ..m }).collect())
            }
            [] => Err(self.error_at(at, "division by zero")),
            _ => Err(self.error_at(at, "divisor must be a nonzero constant")),
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let start = match self.peek() {
            None => return Err(self.error("unexpected end of input")),
            Some(_) => self.pos,
        };
        let c = self.src.as_bytes()[start];
        if c.is_ascii_digit() || c == b'.' {
            let v = self.number()?;
            return Ok(vec![Mono::constant(Complex64::new(v, 0.0))]);
        }
        if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            self.expect(b')')?;
            return Ok(inner);
        }
        if c.is_ascii_alphabetic() {
            let ident = self.ident();
            return match ident {
                "i" => Ok(vec![Mono::constant(Complex64::i())]),
                "pi" => Ok(vec![Mono { pi: 1, ..Mono::constant(Complex64::new(1.0, 0.0)) }]),
                "sqrt2" => Ok(vec![Mono::constant(Complex64::new(std::f64::consts::SQRT_2, 0.0))]),
                "t" => {
                    let mut power = 1;
                    if self.eat(b'^') {
                        let at = self.pos;
                        let _ = self.peek();
                        let v = self.number()?;
                        if v.fract() != 0.0 || v < 0.0 || v > MAX_DEGREE as f64 {
                            return Err(self.error_at(at, "exponent must be a small nonnegative integer"));
                        }
                        power = v as u32;
                    }
                    Ok(vec![Mono { t: power, ..Mono::constant(Complex64::new(1.0, 0.0)) }])
                }
                "exp" => self.exp(start),
                other => Err(self.error_at(start, format!("unknown identifier '{other}'"))),
            };
        }
        Err(self.error(format!("unexpected character '{}'", self.src[start..].chars().next().unwrap_or('?'))))
    }

    fn exp(&mut self, start: usize) -> Result<Poly> {
        self.expect(b'(')?;
        let inner = normalize(self.expr()?);
        self.expect(b')')?;
        let m = match inner.as_slice() {
            [m] if m.t == 2 && m.scale == 0.0 && m.coef.im == 0.0 => *m,
            _ => return Err(self.error_at(start, "exp argument must have the form -q*t^2")),
        };
        let scale = -m.coef.re * std::f64::consts::PI.powi(m.pi - 1);
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::NonPositiveScale(format!("{scale} (at byte {start})")));
        }
        Ok(vec![Mono { scale, ..Mono::constant(Complex64::new(1.0, 0.0)) }])
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_') {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<f64> {
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let digits = |p: &mut usize| {
            let s = *p;
            while *p < bytes.len() && bytes[*p].is_ascii_digit() {
                *p += 1;
            }
            *p > s
        };
        let mut p = self.pos;
        let int = digits(&mut p);
        let mut frac = false;
        if p < bytes.len() && bytes[p] == b'.' {
            p += 1;
            frac = digits(&mut p);
        }
        if !int && !frac {
            return Err(self.error_at(start, "expected a number"));
        }
        if p < bytes.len() && (bytes[p] == b'e' || bytes[p] == b'E') {
            let mut q = p + 1;
            if q < bytes.len() && (bytes[q] == b'+' || bytes[q] == b'-') {
                q += 1;
            }
            if digits(&mut q) {
                p = q;
            }
        }
        self.pos = p;
        let v: f64 = self.src[start..p].parse().map_err(|_| self.error_at(start, "malformed number"))?;
        if !v.is_finite() {
            return Err(self.error_at(start, "number out of range"));
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn single_term() {
        let p = parse("t*exp(-pi*t^2)").unwrap().value;
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.terms()[0].scale, 1.0);
        assert_eq!(p.terms()[0].coeffs, vec![c(0.0), c(1.0)]);
    }

    #[test]
    fn scaled_cubic() {
        let p = parse("(t^3-2*t)*exp(-pi*t^2/2)").unwrap().value;
        assert_eq!(p.terms()[0].scale, 0.5);
        assert_eq!(p.terms()[0].coeffs, vec![c(0.0), c(-2.0), c(0.0), c(1.0)]);
    }

    #[test]
    fn positive_exponent_rejected() {
        assert!(matches!(parse("exp(pi*t^2)"), Err(Error::NonPositiveScale(_))));
        assert!(matches!(parse("exp(0*t^2)"), Err(Error::Parse { .. }) | Err(Error::NonPositiveScale(_))));
    }

    #[test]
    fn polynomial_only_rejected() {
        assert!(matches!(parse("t^2 + 1"), Err(Error::NotSchwartz(_))));
        assert!(matches!(parse("t*exp(-pi*t^2) + 1"), Err(Error::NotSchwartz(_))));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse("t*exp(-pi*t^2) + ") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 17),
            other => panic!("{other:?}"),
        }
        match parse("t * foo") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("(t*exp(-pi*t^2)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("exp(-pi*t^3)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("t/t*exp(-pi*t^2)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("t^1.5*exp(-pi*t^2)"), Err(Error::Parse { .. })));
    }

    #[test]
    fn constants_and_products() {
        let p = parse("2*sqrt2*i*t*exp(-pi*t^2/2)").unwrap().value;
        let coeff = p.terms()[0].coeffs[1];
        assert!((coeff - Complex64::new(0.0, 2.0 * 2f64.sqrt())).norm() < 1e-15);
        // exp(-pi t^2) * exp(-pi t^2) = exp(-2 pi t^2)
        let q = parse("exp(-pi*t^2)*exp(-pi*t^2)").unwrap().value;
        assert_eq!(q.terms()[0].scale, 2.0);
        // exp(-t^2) has scale 1/pi
        let r = parse("exp(-t^2)").unwrap().value;
        assert!((r.terms()[0].scale - 1.0 / std::f64::consts::PI).abs() < 1e-16);
    }

    #[test]
    fn zero_is_the_empty_function() {
        assert!(parse("0").unwrap().value.is_zero());
        assert!(parse("t*exp(-pi*t^2) - t*exp(-pi*t^2)").unwrap().value.is_zero());
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let s = "(".repeat(10_000) + "t" + &")".repeat(10_000);
        assert!(matches!(parse(&s), Err(Error::Parse { .. })));
    }

    #[test]
    fn whitespace_insignificant() {
        let a = parse(" t * exp ( - pi * t ^ 2 / 2 ) ").unwrap().value;
        let b = parse("t*exp(-pi*t^2/2)").unwrap().value;
        assert_eq!(a, b);
    }
}
