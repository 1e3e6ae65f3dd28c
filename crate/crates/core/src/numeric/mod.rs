//! Floating-point helpers: compensated summation, exact-phase complex
//! exponentials and a small double-double type.

mod dd;
mod sum;

pub use dd::DoubleDouble;
pub use sum::{ComplexSum, NeumaierSum};

use num_complex::Complex64;

/// `exp(2 pi i x)` with `x` reduced modulo one before any rounding, so that
/// quarter turns come out exact (`cis_turns(0.5) == -1 + 0i`).
pub fn cis_turns(x: f64) -> Complex64 {
    let r = x - x.floor();
    // r in [0, 1); split into quadrant and residual in [-1/8, 1/8].
    let q = (r * 4.0).round();
    let residual = r - q * 0.25;
    let angle = residual * std::f64::consts::TAU;
    let (s, c) = if residual == 0.0 { (0.0, 1.0) } else { angle.sin_cos() };
    match (q as i64).rem_euclid(4) {
        0 => Complex64::new(c, s),
        1 => Complex64::new(-s, c),
        2 => Complex64::new(-c, -s),
        _ => Complex64::new(s, -c),
    }
}

/// `n^(e/2)` for a positive integer `n`, computed as an integer power times
/// at most one square root so that equal inputs give bit-identical results.
pub fn half_power(n: u64, e: u32) -> f64 {
    let nf = n as f64;
    let mut v = nf.powi((e / 2) as i32);
    if e % 2 == 1 {
        v *= nf.sqrt();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cis_turns_exact_at_quarters() {
        assert_eq!(cis_turns(0.0), Complex64::new(1.0, 0.0));
        assert_eq!(cis_turns(0.25), Complex64::new(0.0, 1.0));
        assert_eq!(cis_turns(0.5), Complex64::new(-1.0, 0.0));
        assert_eq!(cis_turns(-1.5), Complex64::new(-1.0, 0.0));
        assert_eq!(cis_turns(7.75), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn cis_turns_matches_exp() {
        for i in -50..50 {
            let x = i as f64 * 0.137;
            let z = cis_turns(x);
            let w = Complex64::new(0.0, std::f64::consts::TAU * x).exp();
            assert!((z - w).norm() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn half_power_values() {
        assert_eq!(half_power(4, 1), 2.0);
        assert_eq!(half_power(9, 3), 27.0);
        assert_eq!(half_power(7, 0), 1.0);
        assert_eq!(half_power(2, 1), 2f64.sqrt());
    }
}
