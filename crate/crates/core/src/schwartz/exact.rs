use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::coefficient::{inexact, Coefficient};
use crate::coeffs::ScaledRational;
use crate::error::Result;

type GaussRational = Complex<BigRational>;

/// A finite sum `sum_p c_p pi^p` with `c_p` Gaussian rationals and `p` any
/// integer. Zero entries are never stored, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PiLaurent {
    terms: BTreeMap<i32, GaussRational>,
}

impl PiLaurent {
    pub fn from_parts(pi_power: i32, re: BigRational, im: BigRational) -> Self {
        let mut out = PiLaurent::default();
        out.insert(pi_power, Complex::new(re, im));
        out
    }

    pub fn rational(q: BigRational) -> Self {
        Self::from_parts(0, q, BigRational::zero())
    }

    /// Coefficient of `pi^p`.
    pub fn coefficient(&self, pi_power: i32) -> GaussRational {
        self.terms.get(&pi_power).cloned().unwrap_or_else(|| Complex::new(BigRational::zero(), BigRational::zero()))
    }

    pub fn pi_powers(&self) -> impl Iterator<Item = i32> + '_ {
        self.terms.keys().copied()
    }

    fn insert(&mut self, p: i32, c: GaussRational) {
        let entry = self.terms.entry(p).or_insert_with(|| Complex::new(BigRational::zero(), BigRational::zero()));
        *entry = &*entry + &c;
        if entry.re.is_zero() && entry.im.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn to_complex64(&self) -> Complex64 {
        let mut re = crate::numeric::NeumaierSum::new();
        let mut im = crate::numeric::NeumaierSum::new();
        for (p, c) in &self.terms {
            re.add(ScaledRational::new(c.re.clone(), *p).to_f64());
            im.add(ScaledRational::new(c.im.clone(), *p).to_f64());
        }
        Complex64::new(re.value(), im.value())
    }
}

impl Zero for PiLaurent {
    fn zero() -> Self {
        PiLaurent::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Add for PiLaurent {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (p, c) in rhs.terms {
            self.insert(p, c);
        }
        self
    }
}

impl Neg for PiLaurent {
    type Output = Self;
    fn neg(self) -> Self {
        PiLaurent { terms: self.terms.into_iter().map(|(p, c)| (p, -c)).collect() }
    }
}

impl Sub for PiLaurent {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for PiLaurent {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = PiLaurent::default();
        for (p, a) in &self.terms {
            for (q, b) in &rhs.terms {
                out.insert(p + q, a * b);
            }
        }
        out
    }
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

impl Coefficient for PiLaurent {
    type Scale = BigRational;

    fn from_i64(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(num.into(), den.into()))
    }
    fn imag() -> Self {
        Self::from_parts(0, BigRational::zero(), BigRational::one())
    }
    fn pi() -> Self {
        Self::from_parts(1, BigRational::one(), BigRational::zero())
    }
    fn inv_pi() -> Self {
        Self::from_parts(-1, BigRational::one(), BigRational::zero())
    }
    fn from_scale(a: &BigRational) -> Self {
        Self::rational(a.clone())
    }
    fn scale_recip(a: &BigRational) -> BigRational {
        a.recip()
    }
    fn scale_cmp(a: &BigRational, b: &BigRational) -> Ordering {
        a.cmp(b)
    }
    fn scale_is_positive(a: &BigRational) -> bool {
        a.is_positive()
    }
    fn inv_sqrt_scale(a: &BigRational) -> Result<Self> {
        match (exact_sqrt(a.numer()), exact_sqrt(a.denom())) {
            (Some(n), Some(d)) => Ok(Self::rational(BigRational::new(d, n))),
            _ => Err(inexact(format!("sqrt of scale {a} is irrational; use float mode"))),
        }
    }
}
