//! Test functions of the form `sum_a p_a(t) exp(-pi a t^2)`.
//!
//! The family is closed under differentiation, multiplication by `t`,
//! reflection and the Fourier transform
//! `f^(xi) = int f(x) exp(-2 pi i x xi) dx`, all of which are computed
//! symbolically. Coefficients are either complex doubles ([`GaussPoly`]) or
//! exact Laurent polynomials in pi over the Gaussian rationals
//! ([`ExactGaussPoly`]).

mod coefficient;
mod exact;
mod parse;

use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use coefficient::Coefficient;
pub use exact::PiLaurent;
pub use parse::{parse, ParsedExpr};

use crate::error::{Error, Result};

/// One Gaussian scale together with its polynomial, ascending powers of `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct GaussTerm<C: Coefficient> {
    pub scale: C::Scale,
    pub coeffs: Vec<C>,
}

/// A finite sum of polynomial-times-Gaussian terms with pairwise distinct,
/// positive scales. Terms are kept sorted by scale and polynomials carry no
/// trailing zeros; the zero function has no terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct GaussPoly<C: Coefficient = Complex64> {
    terms: Vec<GaussTerm<C>>,
}

/// Exact-mode test function.
pub type ExactGaussPoly = GaussPoly<PiLaurent>;

impl<C: Coefficient> Default for GaussPoly<C> {
    fn default() -> Self {
        GaussPoly { terms: Vec::new() }
    }
}

impl<C: Coefficient> GaussPoly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a function from `(scale, coefficients)` pairs, merging equal
    /// scales. Every scale must be positive.
    pub fn from_terms(terms: impl IntoIterator<Item = (C::Scale, Vec<C>)>) -> Result<Self> {
        let mut out = Self::zero();
        for (scale, coeffs) in terms {
            if !C::scale_is_positive(&scale) {
                return Err(Error::NonPositiveScale(format!("{scale:?}")));
            }
            out.add_term(scale, coeffs);
        }
        Ok(out)
    }

    /// `t^power * exp(-pi scale t^2)` times `coeff`.
    pub fn monomial(coeff: C, power: usize, scale: C::Scale) -> Result<Self> {
        let mut coeffs = vec![C::zero(); power + 1];
        coeffs[power] = coeff;
        Self::from_terms([(scale, coeffs)])
    }

    /// `exp(-pi scale t^2)`.
    pub fn gaussian(scale: C::Scale) -> Result<Self> {
        Self::monomial(C::from_i64(1), 0, scale)
    }

    pub fn terms(&self) -> &[GaussTerm<C>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest power of `t` over all terms.
    pub fn degree(&self) -> usize {
        self.terms.iter().map(|t| t.coeffs.len().saturating_sub(1)).max().unwrap_or(0)
    }

    fn add_term(&mut self, scale: C::Scale, coeffs: Vec<C>) {
        match self.terms.iter().position(|t| C::scale_cmp(&t.scale, &scale).is_ge()) {
            Some(i) if C::scale_cmp(&self.terms[i].scale, &scale).is_eq() => {
                let existing = &mut self.terms[i].coeffs;
                if existing.len() < coeffs.len() {
                    existing.resize(coeffs.len(), C::zero());
                }
                for (e, c) in existing.iter_mut().zip(coeffs) {
                    *e = e.clone() + c;
                }
                if trim(existing) {
                    self.terms.remove(i);
                }
            }
            pos => {
                let mut coeffs = coeffs;
                if !trim(&mut coeffs) {
                    self.terms.insert(pos.unwrap_or(self.terms.len()), GaussTerm { scale, coeffs });
                }
            }
        }
    }

    fn map_terms(&self, mut f: impl FnMut(&GaussTerm<C>) -> Vec<C>) -> Self {
        let mut out = Self::zero();
        for t in &self.terms {
            out.add_term(t.scale.clone(), f(t));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for t in &other.terms {
            out.add_term(t.scale.clone(), t.coeffs.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_by(&-C::from_i64(1)))
    }

    pub fn scale_by(&self, c: &C) -> Self {
        self.map_terms(|t| t.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// `t * f(t)`.
    pub fn mul_t(&self) -> Self {
        self.map_terms(|t| std::iter::once(C::zero()).chain(t.coeffs.iter().cloned()).collect())
    }

    /// `f(-t)`.
    pub fn reflect(&self) -> Self {
        self.map_terms(|t| {
            t.coeffs.iter().enumerate().map(|(m, c)| if m % 2 == 1 { -c.clone() } else { c.clone() }).collect()
        })
    }

    /// `f(t) - f(-t)`: even powers dropped, odd powers doubled.
    pub fn odd_part(&self) -> Self {
        let two = C::from_i64(2);
        self.map_terms(|t| {
            t.coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| if m % 2 == 1 { c.clone() * two.clone() } else { C::zero() })
                .collect()
        })
    }

    /// True when every even-power coefficient vanishes exactly.
    pub fn is_odd(&self) -> bool {
        self.terms.iter().all(|t| t.coeffs.iter().step_by(2).all(Zero::is_zero))
    }

    /// True when every odd-power coefficient vanishes exactly.
    pub fn is_even(&self) -> bool {
        self.terms.iter().all(|t| t.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero))
    }

    /// The `order`-th derivative.
    pub fn derivative(&self, order: usize) -> Self {
        let mut f = self.clone();
        for _ in 0..order {
            f = f.map_terms(|t| derivative_coeffs(&t.coeffs, &t.scale));
        }
        f
    }

    /// Derivatives of orders `0..=max_order`.
    pub fn derivatives(&self, max_order: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(max_order + 1);
        out.push(self.clone());
        for j in 1..=max_order {
            let next = out[j - 1].map_terms(|t| derivative_coeffs(&t.coeffs, &t.scale));
            out.push(next);
        }
        out
    }

    /// Fourier transform, using `FT[exp(-pi a t^2)] = a^{-1/2} exp(-pi xi^2 / a)`
    /// and `FT[t f] = (i / 2 pi) d/dxi FT[f]`.
    pub fn fourier(&self) -> Result<Self> {
        let i = C::imag();
        let inv_two_pi = C::from_ratio(1, 2) * C::inv_pi();
        let mut out = Self::zero();
        for term in &self.terms {
            let b = C::scale_recip(&term.scale);
            let b_coeff = C::from_scale(&b);
            let mut h = vec![C::inv_sqrt_scale(&term.scale)?];
            let mut acc: Vec<C> = Vec::new();
            for (m, c) in term.coeffs.iter().enumerate() {
                if m > 0 {
                    // h <- i (h' / 2 pi - b xi h)
                    let mut next = vec![C::zero(); h.len() + 1];
                    for (p, hp) in h.iter().enumerate() {
                        if p > 0 {
                            next[p - 1] = next[p - 1].clone() + hp.clone() * C::from_i64(p as i64) * inv_two_pi.clone();
                        }
                        next[p + 1] = next[p + 1].clone() - hp.clone() * b_coeff.clone();
                    }
                    h = next.into_iter().map(|x| x * i.clone()).collect();
                }
                if c.is_zero() {
                    continue;
                }
                if acc.len() < h.len() {
                    acc.resize(h.len(), C::zero());
                }
                for (a, hp) in acc.iter_mut().zip(&h) {
                    *a = a.clone() + c.clone() * hp.clone();
                }
            }
            out.add_term(b, acc);
        }
        Ok(out)
    }

    /// Returns `g` with `f(t) = t g(t)`; every polynomial must have a zero
    /// constant term.
    pub fn hadamard_divide(&self) -> Result<Self> {
        if let Some(t) = self.terms.iter().find(|t| !t.coeffs[0].is_zero()) {
            return Err(Error::NonzeroConstantTerm(format!("{:?}", t.coeffs[0])));
        }
        Ok(self.map_terms(|t| t.coeffs[1..].to_vec()))
    }
}

fn trim<C: Coefficient>(coeffs: &mut Vec<C>) -> bool {
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    coeffs.is_empty()
}

fn derivative_coeffs<C: Coefficient>(coeffs: &[C], scale: &C::Scale) -> Vec<C> {
    // d/dt [p e^{-pi a t^2}] = (p' - 2 pi a t p) e^{-pi a t^2}
    let two_pi_a = C::from_i64(2) * C::pi() * C::from_scale(scale);
    let mut out = vec![C::zero(); coeffs.len() + 1];
    for (m, c) in coeffs.iter().enumerate() {
        if m > 0 {
            out[m - 1] = out[m - 1].clone() + c.clone() * C::from_i64(m as i64);
        }
        out[m + 1] = out[m + 1].clone() - c.clone() * two_pi_a.clone();
    }
    out
}

impl GaussPoly<Complex64> {
    /// Value at a real point.
    pub fn eval(&self, t: f64) -> Complex64 {
        let t2 = t * t;
        self.terms
            .iter()
            .map(|term| {
                let p = term.coeffs.iter().rev().fold(Complex64::zero(), |acc, c| acc * t + c);
                p * (-std::f64::consts::PI * term.scale * t2).exp()
            })
            .sum()
    }

    /// Upper bound for `|f(t)|` of the form `sum_a sum_m |c_m| |t|^m exp(-pi a t^2)`.
    pub fn envelope(&self, t: f64) -> f64 {
        let at = t.abs();
        self.terms
            .iter()
            .map(|term| {
                let p = term.coeffs.iter().rev().fold(0.0, |acc, c| acc * at + c.norm());
                p * (-std::f64::consts::PI * term.scale * t * t).exp()
            })
            .sum()
    }

    /// Largest coefficient magnitude, used to scale parity tolerances.
    pub fn coeff_scale(&self) -> f64 {
        self.terms.iter().flat_map(|t| t.coeffs.iter()).map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl GaussPoly<PiLaurent> {
    /// Rounds every exact coefficient to a complex double.
    pub fn to_float(&self) -> GaussPoly<Complex64> {
        let mut out = GaussPoly::zero();
        for t in &self.terms {
            let scale = num_traits::ToPrimitive::to_f64(&t.scale).unwrap_or(f64::NAN);
            out.add_term(scale, t.coeffs.iter().map(PiLaurent::to_complex64).collect());
        }
        out
    }
}

impl fmt::Display for GaussPoly<Complex64> {
    /// Prints in the expression grammar accepted by [`parse`]; the output
    /// parses back to an identical value.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, term) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "(")?;
            let mut first = true;
            for (m, c) in term.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({:?} + {:?}*i)", c.re, c.im)?;
                match m {
                    0 => {}
                    1 => write!(f, "*t")?,
                    _ => write!(f, "*t^{m}")?,
                }
            }
            write!(f, ")*exp(-pi*{:?}*t^2)", term.scale)?;
        }
        Ok(())
    }
}
