//! Certified bounds for the discarded part of the truncated series.
//!
//! Every bound is a sum of pieces `c * n^e * exp(-rate * n)` over `n >= X`,
//! using `r_k(n) <= (2 sqrt(n) + 1)^k <= 3^k n^{k/2}` for `n >= 1`. For
//! `rate * X > e` the piece is decreasing on `[X, inf)` and
//! `sum_{n>=X} h(n) <= h(X) + int_X^inf h <= h(X) (1 + 1/(rate - e/X))`.

use std::f64::consts::PI;

use crate::coeffs::betas;
use crate::error::{check_odd_k, Result};
use crate::schwartz::GaussPoly;

/// Values below this are reported as zero.
pub const TAIL_FLOOR: f64 = 1e-300;

/// Explicit terms summed before switching to the integral comparison.
const MAX_EXPLICIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy)]
struct Piece {
    coef: f64,
    exponent: f64,
    rate: f64,
}

impl Piece {
    fn ln_at(&self, x: f64) -> f64 {
        self.coef.ln() + self.exponent * x.ln() - self.rate * x
    }

    fn tail(&self, start: u64) -> f64 {
        let start = start.max(1);
        let mut total = 0.0;
        let mut x = start;
        // Walk to the decreasing region one term at a time.
        while self.rate * (x as f64) <= self.exponent {
            if x - start > MAX_EXPLICIT {
                return f64::INFINITY;
            }
            total += self.ln_at(x as f64).exp();
            x += 1;
        }
        let xf = x as f64;
        let ln = self.ln_at(xf) + (1.0 / (self.rate - self.exponent / xf)).ln_1p();
        total + ln.exp()
    }
}

fn pieces(f: &GaussPoly, coef: f64, shift: f64, out: &mut Vec<Piece>) {
    for term in f.terms() {
        for (i, c) in term.coeffs.iter().enumerate() {
            let c = c.norm();
            if c > 0.0 {
                out.push(Piece { coef: coef * c, exponent: i as f64 / 2.0 + shift, rate: PI * term.scale });
            }
        }
    }
}

fn finish(pieces: &[Piece], max_n: u64) -> f64 {
    let total: f64 = pieces.iter().map(|p| p.tail(max_n + 1)).sum();
    if total < TAIL_FLOOR {
        0.0
    } else {
        total
    }
}

/// Bound on `sum_{n > N} r_k(n) n^{-1/2} |f(sqrt n)|`, the discarded part of
/// the node-side sum. Nonincreasing in `N`.
pub fn tail_bound(k: u32, f: &GaussPoly, max_n: u64) -> Result<f64> {
    check_odd_k(k)?;
    let mut ps = Vec::new();
    pieces(f, 3f64.powi(k as i32), (k as f64 - 1.0) / 2.0, &mut ps);
    Ok(finish(&ps, max_n))
}

/// Bound on `sum_{n > N} r_k(n) n^{-(k-2)/2} sum_j |beta_j| n^{j/2} |psi^{(j)}(sqrt n)|`,
/// the discarded part of the transform-side sum.
pub fn tail_bound_transform(k: u32, psi: &GaussPoly, max_n: u64) -> Result<f64> {
    check_odd_k(k)?;
    let bs = betas(k)?;
    let derivs = psi.derivatives(bs.len());
    let mut ps = Vec::new();
    for (j, b) in bs.iter().enumerate() {
        pieces(&derivs[j], 3f64.powi(k as i32) * b.to_f64().abs(), (j as f64 + 2.0) / 2.0, &mut ps);
    }
    Ok(finish(&ps, max_n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schwartz::parse;

    fn f(s: &str) -> GaussPoly {
        parse(s).unwrap().value
    }

    #[test]
    fn underflows_for_fast_gaussian() {
        assert_eq!(tail_bound(3, &f("t*exp(-pi*t^2)"), 400).unwrap(), 0.0);
    }

    #[test]
    fn finite_and_small_for_wide_gaussian() {
        let b = tail_bound(9, &f("t*exp(-pi*t^2/4)"), 400).unwrap();
        assert!(b > 0.0 && b < 1e-100, "{b}");
    }

    #[test]
    fn monotone_in_truncation() {
        let g = f("(t^5 - t)*exp(-pi*t^2/40)");
        let mut prev = f64::INFINITY;
        for n in [0, 1, 5, 20, 100, 200, 400] {
            let b = tail_bound(11, &g, n).unwrap();
            assert!(b <= prev, "n={n}");
            prev = b;
        }
    }

    #[test]
    fn dominates_actual_tail() {
        use crate::sumsq::rk_table;
        let g = f("t^3*exp(-pi*t^2/8)");
        let table = rk_table(5, 600).unwrap();
        let actual: f64 =
            (31..=600).map(|n| table.get_f64(n) / (n as f64).sqrt() * g.eval((n as f64).sqrt()).norm()).sum();
        let bound = tail_bound(5, &g, 30).unwrap();
        assert!(actual <= bound && bound.is_finite(), "{actual} {bound}");
    }

    #[test]
    fn transform_bound_dominates() {
        use crate::sumsq::rk_table;
        let psi = f("t*exp(-pi*t^2/3)");
        let table = rk_table(7, 300).unwrap();
        let bs: Vec<f64> = betas(7).unwrap().iter().map(|b| b.to_f64()).collect();
        let d = psi.derivatives(3);
        let actual: f64 = (11..=300)
            .map(|n| {
                let r = (n as f64).sqrt();
                let inner: f64 = (0..3).map(|j| bs[j].abs() * r.powi(j as i32) * d[j].eval(r).norm()).sum();
                table.get_f64(n) / r.powi(5) * inner
            })
            .sum();
        assert!(actual <= tail_bound_transform(7, &psi, 10).unwrap());
    }
}
