use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, giving roughly 106
/// bits of significand. Only the operations the sphere-transform routes
/// need are provided.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };
    pub const PI: DoubleDouble = DoubleDouble { hi: std::f64::consts::PI, lo: 1.2246467991473532e-16 };
    pub const TAU: DoubleDouble = DoubleDouble { hi: std::f64::consts::TAU, lo: 2.4492935982947064e-16 };
    pub const FRAC_PI_2: DoubleDouble = DoubleDouble { hi: std::f64::consts::FRAC_PI_2, lo: 6.123233995736766e-17 };

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        DoubleDouble { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        DoubleDouble { hi, lo }
    }

    pub fn recip(self) -> Self {
        DoubleDouble::ONE / self
    }

    pub fn powi(self, mut n: i32) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut base = self;
        let mut acc = DoubleDouble::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return DoubleDouble::ZERO;
        }
        // One Newton step from the double-precision root.
        let x = self.hi.sqrt();
        let (p, e) = two_prod(x, x);
        let diff = (self - DoubleDouble { hi: p, lo: e }).to_f64();
        DoubleDouble::new(x, diff / (2.0 * x))
    }

    /// Nearest double-double to an exact rational.
    pub fn from_rational(q: &BigRational) -> Self {
        big_to_dd(q.numer()) / big_to_dd(q.denom())
    }

    /// `(sin x, cos x)` accurate to a few units in the last double-double place
    /// for moderate `|x|`.
    pub fn sin_cos(self) -> (Self, Self) {
        let q = (self.to_f64() / std::f64::consts::FRAC_PI_2).round();
        let r = self - DoubleDouble::FRAC_PI_2.mul_f64(q) - DoubleDouble::new(-1.4973849048591698e-33, 0.0).mul_f64(q);
        let (s, c) = taylor_sin_cos(r);
        match (q as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

fn big_to_dd(n: &BigInt) -> DoubleDouble {
    let hi = n.to_f64().unwrap_or(f64::INFINITY);
    if !hi.is_finite() || hi == 0.0 {
        return DoubleDouble { hi, lo: 0.0 };
    }
    // The remainder is exact as a BigInt because `hi` is an integer here
    // whenever |n| >= 2^53; below that `hi == n` exactly.
    let rest = n - BigInt::from_f64_exact(hi);
    let lo = rest.to_f64().unwrap_or(0.0);
    DoubleDouble::new(hi, lo)
}

trait FromF64Exact {
    fn from_f64_exact(x: f64) -> BigInt;
}

impl FromF64Exact for BigInt {
    fn from_f64_exact(x: f64) -> BigInt {
        num_traits::FromPrimitive::from_f64(x).unwrap_or_else(BigInt::zero)
    }
}

fn taylor_sin_cos(r: DoubleDouble) -> (DoubleDouble, DoubleDouble) {
    let r2 = r * r;
    let mut sin = r;
    let mut cos = DoubleDouble::ONE;
    let mut term_s = r;
    let mut term_c = DoubleDouble::ONE;
    let mut n = 1u32;
    loop {
        term_s = -(term_s * r2) / DoubleDouble::from(((2 * n) * (2 * n + 1)) as f64);
        term_c = -(term_c * r2) / DoubleDouble::from(((2 * n - 1) * (2 * n)) as f64);
        sin = sin + term_s;
        cos = cos + term_c;
        if term_s.abs().hi < 1e-36 && term_c.abs().hi < 1e-36 {
            break;
        }
        n += 1;
        if n > 60 {
            break;
        }
    }
    (sin, cos)
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        DoubleDouble { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::from(q3)
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        DoubleDouble::ZERO
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl num_traits::One for DoubleDouble {
    fn one() -> Self {
        DoubleDouble::ONE
    }
}

impl std::ops::Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, b: Self) -> Self {
        let q = (self / b).to_f64().trunc();
        self - b.mul_f64(q)
    }
}

impl num_traits::Num for DoubleDouble {
    type FromStrRadixErr = std::num::ParseFloatError;
    fn from_str_radix(s: &str, _radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        s.parse::<f64>().map(DoubleDouble::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference digits from a 40-digit evaluation.
    const SIN_0_1: (f64, f64) = (0.09983341664682815, 3.08001512929492e-18);

    fn close(a: DoubleDouble, hi: f64, lo: f64, tol: f64) -> bool {
        ((a - DoubleDouble::new(hi, lo)).abs().to_f64()) <= tol * hi.abs().max(1e-300)
    }

    #[test]
    fn sin_beyond_double_precision() {
        let (s, _) = DoubleDouble::from(0.1).sin_cos();
        assert!(close(s, SIN_0_1.0, SIN_0_1.1, 1e-30), "{s:?}");
    }

    #[test]
    fn pythagorean_identity() {
        for i in 1..200 {
            let x = DoubleDouble::from(i as f64 * 0.6283);
            let (s, c) = x.sin_cos();
            let one = s * s + c * c;
            assert!((one - DoubleDouble::ONE).abs().to_f64() < 1e-30, "x = {}", x.to_f64());
        }
    }

    #[test]
    fn sin_at_pi_is_tiny() {
        let (s, c) = DoubleDouble::PI.sin_cos();
        assert!(s.abs().to_f64() < 1e-32);
        assert!((c + DoubleDouble::ONE).abs().to_f64() < 1e-31);
    }

    #[test]
    fn division_and_sqrt_round_trip() {
        let x = DoubleDouble::from(2.0).sqrt();
        let back = x * x;
        assert!((back - DoubleDouble::from(2.0)).abs().to_f64() < 1e-31);
        let third = DoubleDouble::ONE / DoubleDouble::from(3.0);
        assert!((third.mul_f64(3.0) - DoubleDouble::ONE).abs().to_f64() < 1e-31);
    }

    #[test]
    fn rational_conversion() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(3));
        let d = DoubleDouble::from_rational(&q);
        assert!((d.mul_f64(3.0) - DoubleDouble::ONE).abs().to_f64() < 1e-31);
        let big = BigRational::from_integer(BigInt::from(1u64 << 60) + 1u32);
        let d = DoubleDouble::from_rational(&big);
        assert_eq!((d.hi(), d.lo()), ((1u64 << 60) as f64, 1.0));
    }
}
