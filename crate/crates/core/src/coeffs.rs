//! Exact coefficients of the summation formulas.
//!
//! Both `alpha_k` and `beta_{j,k}` are rational multiples of
//! `pi^{-(k-3)/2}`, so they are held as [`ScaledRational`] values and never
//! rounded until a caller asks for a float.

use std::fmt;
use std::ops::{Mul, Neg};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_odd_k, Error, Result};
use crate::numeric::DoubleDouble;

const PI_50_DIGITS: &str = "31415926535897932384626433832795028841971693993751";

fn pi_rational() -> &'static BigRational {
    static PI: OnceLock<BigRational> = OnceLock::new();
    PI.get_or_init(|| {
        let digits: BigInt = PI_50_DIGITS.parse().expect("pi digits");
        BigRational::new(digits, BigInt::from(10u32).pow(49))
    })
}

/// The exact value `(num/den) * pi^pi_power`, kept in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScaledRational {
    value: BigRational,
    pi_power: i32,
}

impl ScaledRational {
    pub fn new(value: BigRational, pi_power: i32) -> Self {
        let pi_power = if value.is_zero() { 0 } else { pi_power };
        ScaledRational { value, pi_power }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::new(BigRational::from_integer(n.into()), 0)
    }

    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self::new(BigRational::new(num.into(), den.into()), 0)
    }

    /// `pi^p`.
    pub fn pi_pow(p: i32) -> Self {
        Self::new(BigRational::one(), p)
    }

    pub fn num(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn den(&self) -> &BigInt {
        self.value.denom()
    }

    pub fn rational(&self) -> &BigRational {
        &self.value
    }

    pub fn pi_power(&self) -> i32 {
        self.pi_power
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.value.is_zero() {
            0
        } else if self.value.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Sum of two values with the same power of pi (or where one is zero).
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        (self.pi_power == other.pi_power).then(|| Self::new(&self.value + &other.value, self.pi_power))
    }

    pub fn recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::new(self.value.recip(), -self.pi_power))
    }

    /// Correctly rounded conversion, using a 50-digit rational value of pi.
    pub fn to_f64(&self) -> f64 {
        let pi = pi_rational();
        let scale = if self.pi_power >= 0 {
            num_traits::pow(pi.clone(), self.pi_power as usize)
        } else {
            num_traits::pow(pi.recip(), (-self.pi_power) as usize)
        };
        (&self.value * scale).to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_dd(&self) -> DoubleDouble {
        DoubleDouble::from_rational(&self.value) * DoubleDouble::PI.powi(self.pi_power)
    }
}

impl Mul for &ScaledRational {
    type Output = ScaledRational;
    fn mul(self, rhs: &ScaledRational) -> ScaledRational {
        ScaledRational::new(&self.value * &rhs.value, self.pi_power + rhs.pi_power)
    }
}

impl Mul for ScaledRational {
    type Output = ScaledRational;
    fn mul(self, rhs: ScaledRational) -> ScaledRational {
        &self * &rhs
    }
}

impl Neg for ScaledRational {
    type Output = ScaledRational;
    fn neg(self) -> ScaledRational {
        ScaledRational::new(-self.value, self.pi_power)
    }
}

impl fmt::Display for ScaledRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)?;
        if self.pi_power != 0 {
            write!(f, "·π^{}", self.pi_power)?;
        }
        Ok(())
    }
}

/// `n!!` with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> Result<BigUint> {
    if n < -1 {
        return Err(Error::OutOfRange(format!("double factorial of {n}")));
    }
    let mut acc = BigUint::one();
    let mut m = n;
    while m > 1 {
        acc *= m as u64;
        m -= 2;
    }
    Ok(acc)
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, m| acc * m)
}

fn signed(sign_odd: bool, q: BigRational) -> BigRational {
    if sign_odd {
        -q
    } else {
        q
    }
}

/// `(2 pi)^{-(k-3)/2}` folded into a rational times a power of pi.
fn half_shift(k: u32) -> ScaledRational {
    let h = (k - 3) / 2;
    ScaledRational::new(BigRational::new(BigInt::one(), BigInt::from(2u32).pow(h)), -(h as i32))
}

/// `alpha_k = (-1)^{(k-3)/2} / (k-2)!! * (2 pi)^{-(k-3)/2}` for odd `k >= 3`.
pub fn alpha(k: u32) -> Result<ScaledRational> {
    check_odd_k(k)?;
    let df = double_factorial(k as i64 - 2)?;
    let q = signed(((k - 3) / 2) % 2 == 1, BigRational::new(BigInt::one(), df.into()));
    Ok(&ScaledRational::new(q, 0) * &half_shift(k))
}

/// `beta_{j,k} = (-1)^j (k-j-3)! / (j! (k-2j-3)!!) * (2 pi)^{-(k-3)/2}`,
/// `0 <= j <= (k-3)/2`.
pub fn beta(j: u32, k: u32) -> Result<ScaledRational> {
    check_odd_k(k)?;
    if j > (k - 3) / 2 {
        return Err(Error::OutOfRange(format!("beta index j = {j} exceeds (k-3)/2 = {}", (k - 3) / 2)));
    }
    let num = factorial((k - j - 3) as u64);
    let den = factorial(j as u64) * double_factorial(k as i64 - 2 * j as i64 - 3)?;
    let q = signed(j % 2 == 1, BigRational::new(num.into(), den.into()));
    Ok(&ScaledRational::new(q, 0) * &half_shift(k))
}

/// All `beta_{j,k}` for `j = 0..=(k-3)/2`.
pub fn betas(k: u32) -> Result<Vec<ScaledRational>> {
    check_odd_k(k)?;
    (0..=(k - 3) / 2).map(|j| beta(j, k)).collect()
}

/// A Bessel polynomial `theta_n` with integer coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BesselPoly {
    pub n: u32,
    pub coeffs: Vec<BigUint>,
}

/// `theta_0 = 1`, `theta_1 = z + 1`, `theta_n = (2n-1) theta_{n-1} + z^2 theta_{n-2}`.
pub fn bessel_poly(n: u32) -> BesselPoly {
    let mut prev: Vec<BigUint> = vec![BigUint::one()];
    if n == 0 {
        return BesselPoly { n, coeffs: prev };
    }
    let mut cur: Vec<BigUint> = vec![BigUint::one(), BigUint::one()];
    for m in 2..=n {
        let mut next: Vec<BigUint> = cur.iter().map(|c| c * (2 * m - 1)).collect();
        next.resize(m as usize + 1, BigUint::zero());
        for (i, c) in prev.iter().enumerate() {
            next[i + 2] += c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    BesselPoly { n, coeffs: cur }
}

/// Checks `theta_n(z) = (2 pi)^n sum_j beta_{j,2n+3} (-z)^j` coefficientwise in
/// exact arithmetic.
pub fn beta_bessel_crosscheck(n: u32) -> bool {
    let k = 2 * n + 3;
    let theta = bessel_poly(n);
    let two_pi_n = ScaledRational::new(BigRational::from_integer(BigInt::from(2u32).pow(n)), n as i32);
    let Ok(bs) = betas(k) else { return false };
    if bs.len() != theta.coeffs.len() {
        return false;
    }
    bs.iter().zip(&theta.coeffs).enumerate().all(|(j, (b, c))| {
        let mut term = &two_pi_n * b;
        if j % 2 == 1 {
            term = -term;
        }
        term.pi_power() == 0 && term.rational() == &BigRational::from_integer(BigInt::from(c.clone()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sr(num: i64, den: i64, p: i32) -> ScaledRational {
        ScaledRational::new(BigRational::new(num.into(), den.into()), p)
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial(-1).unwrap(), BigUint::one());
        assert_eq!(double_factorial(0).unwrap(), BigUint::one());
        assert_eq!(double_factorial(5).unwrap(), BigUint::from(15u32));
        assert_eq!(double_factorial(7).unwrap(), BigUint::from(105u32));
        assert!(double_factorial(-2).is_err());
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(3).unwrap(), sr(1, 1, 0));
        assert_eq!(alpha(5).unwrap(), sr(-1, 6, -1));
        assert_eq!(alpha(7).unwrap(), sr(1, 60, -2));
        assert_eq!(alpha(9).unwrap(), sr(-1, 840, -3));
        assert!(alpha(4).is_err());
        assert!(alpha(1).is_err());
    }

    #[test]
    fn beta_values() {
        assert_eq!(beta(0, 3).unwrap(), sr(1, 1, 0));
        assert_eq!(beta(0, 5).unwrap(), sr(1, 2, -1));
        assert_eq!(beta(1, 5).unwrap(), sr(-1, 2, -1));
        assert_eq!(beta(0, 7).unwrap(), sr(3, 4, -2));
        assert_eq!(beta(1, 7).unwrap(), sr(-3, 4, -2));
        assert_eq!(beta(2, 7).unwrap(), sr(1, 4, -2));
        assert!(beta(2, 5).is_err());
    }

    #[test]
    fn sign_pattern() {
        for k in (3..=21).step_by(2) {
            for j in 0..=(k - 3) / 2 {
                let expected = if j % 2 == 0 { 1 } else { -1 };
                assert_eq!(beta(j, k).unwrap().signum(), expected, "j={j} k={k}");
            }
        }
    }

    #[test]
    fn bessel_polys() {
        let c = |n| bessel_poly(n).coeffs.iter().map(|x| x.to_u64().unwrap()).collect::<Vec<_>>();
        assert_eq!(c(0), vec![1]);
        assert_eq!(c(1), vec![1, 1]);
        assert_eq!(c(2), vec![3, 3, 1]);
        assert_eq!(c(3), vec![15, 15, 6, 1]);
        for n in 0..12 {
            let p = bessel_poly(n);
            assert_eq!(p.coeffs[n as usize], BigUint::one());
            assert_eq!(p.coeffs[0], double_factorial(2 * n as i64 - 1).unwrap());
        }
    }

    #[test]
    fn crosscheck_holds() {
        for n in 0..=8 {
            assert!(beta_bessel_crosscheck(n), "n = {n}");
        }
    }

    #[test]
    fn float_conversion() {
        // Reference values from 40-digit evaluations.
        assert_eq!(alpha(9).unwrap().to_f64(), -3.839468384904701e-05);
        assert_eq!(beta(0, 7).unwrap().to_f64(), 0.07599088773175333);
        assert_eq!(sr(16, 15, 3).to_f64(), 33.07336179231981);
    }

    #[test]
    fn arithmetic() {
        let a = sr(1, 2, -1);
        let b = sr(3, 4, -1);
        assert_eq!(a.checked_add(&b).unwrap(), sr(5, 4, -1));
        assert!(a.checked_add(&sr(1, 1, 0)).is_none());
        assert_eq!(&a * &b, sr(3, 8, -2));
        assert_eq!(a.recip().unwrap(), sr(2, 1, 1));
        assert_eq!(format!("{}", sr(1, 60, -2)), "1/60·π^-2");
    }
}
