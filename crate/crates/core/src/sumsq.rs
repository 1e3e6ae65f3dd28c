//! The sum-of-squares function `r_k(n) = #{m in Z^k : |m|^2 = n}`.
//!
//! Tables are built exactly by convolving the one-dimensional table `k`
//! times; [`rk_bruteforce`] enumerates lattice points directly and serves as
//! the independent oracle.

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::WorkLimits;

/// Exact counts `r_k(n)` for `0 <= n <= max_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepTable {
    k: u32,
    max_n: u64,
    counts: Vec<BigUint>,
}

impl RepTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn max_n(&self) -> u64 {
        self.max_n
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// `r_k(n)`; panics if `n > max_n`.
    pub fn get(&self, n: u64) -> &BigUint {
        &self.counts[n as usize]
    }

    /// `r_k(n)` as a float, for use as a weight. Exact whenever the count is
    /// below 2^53.
    pub fn get_f64(&self, n: u64) -> f64 {
        self.counts[n as usize].to_f64().unwrap_or(f64::INFINITY)
    }

    /// Number of lattice points in the closed ball of radius `sqrt(max_n)`.
    pub fn ball_count(&self) -> BigUint {
        self.counts.iter().sum()
    }
}

fn is_square(n: u64) -> bool {
    let s = n.sqrt();
    s * s == n
}

fn one_dim(max_n: u64) -> Vec<BigUint> {
    (0..=max_n)
        .map(|n| match n {
            0 => BigUint::from(1u32),
            n if is_square(n) => BigUint::from(2u32),
            _ => BigUint::zero(),
        })
        .collect()
}

/// Truncated convolution `c[n] = sum_{j<=n} a[j] b[n-j]` of two count
/// sequences, up to the shorter length.
pub fn convolve(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let len = a.len().min(b.len());
    (0..len)
        .map(|n| (0..=n).filter(|&j| !a[j].is_zero() && !b[n - j].is_zero()).map(|j| &a[j] * &b[n - j]).sum())
        .collect()
}

/// Table of `r_k(n)`, `0 <= n <= max_n`, with the default work limits.
pub fn rk_table(k: u32, max_n: u64) -> Result<RepTable> {
    rk_table_with(k, max_n, &WorkLimits::default())
}

pub fn rk_table_with(k: u32, max_n: u64, limits: &WorkLimits) -> Result<RepTable> {
    if k == 0 {
        return Err(Error::InvalidDimension { k: 0, reason: "must be positive" });
    }
    if max_n > limits.table_max_n {
        return Err(Error::WorkCap {
            what: "r_k table entries",
            needed: max_n as f64 + 1.0,
            cap: limits.table_max_n as f64 + 1.0,
        });
    }
    let roots: Vec<u64> = (1..).take_while(|s: &u64| s * s <= max_n).collect();
    let mut counts = one_dim(max_n);
    for _ in 1..k {
        // Multiply by the theta series of Z: 1 + 2 sum_{s>=1} q^{s^2}.
        let prev = counts;
        counts = (0..=max_n as usize)
            .map(|n| {
                let mut acc = prev[n].clone();
                for &s in roots.iter().take_while(|&&s| (s * s) as usize <= n) {
                    let c = &prev[n - (s * s) as usize];
                    if !c.is_zero() {
                        acc += c << 1u32;
                    }
                }
                acc
            })
            .collect();
    }
    Ok(RepTable { k, max_n, counts })
}

/// `r_k(n)` by exhaustive enumeration of the box `[-floor(sqrt n), floor(sqrt n)]^k`
/// (with partial-sum pruning), using the default work limits.
pub fn rk_bruteforce(k: u32, n: u64) -> Result<u64> {
    rk_bruteforce_with(k, n, &WorkLimits::default())
}

pub fn rk_bruteforce_with(k: u32, n: u64, limits: &WorkLimits) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidDimension { k: 0, reason: "must be positive" });
    }
    let s = n.sqrt();
    let work = k as f64 * ((2 * s + 1) as f64).powi(k as i32);
    if work > limits.oracle_box_points {
        return Err(Error::WorkCap { what: "brute-force box", needed: work, cap: limits.oracle_box_points });
    }
    fn count(dims_left: u32, remaining: u64, bound: i64) -> u64 {
        if dims_left == 0 {
            return (remaining == 0) as u64;
        }
        let mut total = 0;
        for m in -bound..=bound {
            let sq = (m * m) as u64;
            if sq <= remaining {
                total += count(dims_left - 1, remaining - sq, bound);
            }
        }
        total
    }
    Ok(count(k, n, s as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn as_u64(t: &RepTable) -> Vec<u64> {
        t.counts().iter().map(|c| c.to_u64().unwrap()).collect()
    }

    #[test]
    fn one_dimensional_table() {
        assert_eq!(as_u64(&rk_table(1, 4).unwrap()), vec![1, 2, 0, 0, 2]);
    }

    #[test]
    fn three_squares() {
        // Frozen from rk_bruteforce.
        let t = as_u64(&rk_table(3, 8).unwrap());
        assert_eq!(t, vec![1, 6, 12, 8, 6, 24, 24, 0, 12]);
        assert_eq!(t[7], 0);
    }

    #[test]
    fn five_squares() {
        let t = as_u64(&rk_table(5, 2).unwrap());
        assert_eq!(&t[1..], &[10, 40]);
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(rk_bruteforce(3, 9).unwrap(), 30);
        assert_eq!(rk_bruteforce(2, 1).unwrap(), 4);
        assert_eq!(rk_bruteforce(7, 0).unwrap(), 1);
    }

    #[test]
    fn rejects_zero_dimension() {
        assert!(matches!(rk_table(0, 3), Err(Error::InvalidDimension { .. })));
        assert!(matches!(rk_bruteforce(0, 3), Err(Error::InvalidDimension { .. })));
    }

    #[test]
    fn table_cap() {
        let limits = WorkLimits { table_max_n: 100, ..WorkLimits::default() };
        assert!(matches!(rk_table_with(3, 101, &limits), Err(Error::WorkCap { .. })));
        assert!(rk_table_with(3, 100, &limits).is_ok());
    }

    #[test]
    fn oracle_cap() {
        assert!(matches!(rk_bruteforce(12, 10_000), Err(Error::WorkCap { .. })));
    }

    #[test]
    fn perfect_square_test_near_2_pow_53() {
        let big = (1u64 << 26) + 1;
        assert!(is_square(big * big));
        assert!(!is_square(big * big - 1));
        assert!(!is_square(big * big + 1));
    }

    #[test]
    fn table_invariants() {
        for k in 1..=6 {
            let t = rk_table(k, 60).unwrap();
            assert_eq!(t.get(0), &BigUint::from(1u32));
            for n in 1..=60 {
                assert!(t.get(n) % 2u32 == BigUint::zero(), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn ball_count_matches_enumeration() {
        let t = rk_table(3, 10).unwrap();
        let mut direct = 0u64;
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                for c in -3i64..=3 {
                    if a * a + b * b + c * c <= 10 {
                        direct += 1;
                    }
                }
            }
        }
        assert_eq!(t.ball_count(), BigUint::from(direct));
    }

    #[test]
    fn convolution_identity_small() {
        let a = rk_table(2, 40).unwrap();
        let b = rk_table(3, 40).unwrap();
        let c = rk_table(5, 40).unwrap();
        assert_eq!(convolve(a.counts(), b.counts()), c.counts());
    }
}
