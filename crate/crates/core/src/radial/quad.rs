//! Adaptive Gauss-Kronrod (7, 15) quadrature for complex integrands.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::ComplexSum;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Panels processed before giving up.
pub const MAX_PANELS: usize = 50_000;

fn gk15(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        kron += s * WGK[i];
        if i % 2 == 1 {
            gauss += s * WG[i / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

/// Integral over `[a, b]` split first into `initial` equal panels, then
/// bisected until each panel's Kronrod-Gauss gap is within its share of
/// `tol`. Returns the value and the summed error estimate.
pub fn integrate(f: impl Fn(f64) -> Complex64, a: f64, b: f64, initial: usize, tol: f64) -> Result<(Complex64, f64)> {
    let len = b - a;
    let initial = initial.max(1);
    let mut stack: Vec<(f64, f64)> = (0..initial)
        .rev()
        .map(|i| (a + len * i as f64 / initial as f64, a + len * (i + 1) as f64 / initial as f64))
        .collect();
    let mut total = ComplexSum::new();
    let mut err = 0.0;
    let mut panels = 0;
    while let Some((lo, hi)) = stack.pop() {
        panels += 1;
        if panels > MAX_PANELS {
            return Err(Error::Quadrature { tol, estimate: err, panels });
        }
        let (v, e) = gk15(&f, lo, hi);
        let share = tol * (hi - lo) / len;
        let mid = 0.5 * (lo + hi);
        if e <= share || mid <= lo || mid >= hi {
            total.add(v);
            err += e;
        } else {
            stack.push((mid, hi));
            stack.push((lo, mid));
        }
    }
    if err > tol {
        return Err(Error::Quadrature { tol, estimate: err, panels });
    }
    Ok((total.value(), err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let (v, e) = integrate(|x| Complex64::new(x.powi(5), 0.0), 0.0, 2.0, 1, 1e-12).unwrap();
        assert!((v.re - 64.0 / 6.0).abs() < 1e-13 && e < 1e-12);
    }

    #[test]
    fn oscillatory() {
        let (v, _) = integrate(|x| Complex64::new(0.0, (20.0 * x).sin()), 0.0, 3.0, 4, 1e-12).unwrap();
        assert!((v.im - (1.0 - 60f64.cos()) / 20.0).abs() < 1e-12);
    }

    #[test]
    fn gives_up_on_divergent_integral() {
        let r = integrate(|x| Complex64::new(1.0 / x.abs(), 0.0), -1.0, 1.0, 2, 1e-10);
        assert!(matches!(r, Err(Error::Quadrature { .. })), "{r:?}");
    }
}
