//! Radial Fourier transforms in odd dimensions.
//!
//! For an even Schwartz profile `f` on the line, `F_k(x) = f(|x|)` on `R^k`
//! has a radial transform `B_k f(|xi|)`. In odd dimension it is a finite
//! combination of derivatives of the one-dimensional transform:
//!
//! ```text
//! B_k f(t) = -1/(2 pi t^{k-1}) sum_j beta_{j,k} t^{j+1} f_hat^{(j+1)}(t),   t != 0,
//! B_k f(0) = -(alpha_k / 2 pi) f_hat^{(k-1)}(0).
//! ```

mod quad;
mod sphere;

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

pub use quad::{integrate, MAX_PANELS};
pub use sphere::{
    sphere_area, sphere_ft, sphere_ft_bessel, sphere_ft_besselpoly, sphere_ft_closed, sphere_ft_recurrence,
    SphereFTValue, SphereMethod,
};

use crate::coeffs::{alpha, betas};
use crate::error::{check_odd_k, Error, Result};
use crate::numeric::{ComplexSum, DoubleDouble};
use crate::schwartz::GaussPoly;

/// Below this value of `2 pi r t` the quadrature kernel uses the power series.
const SERIES_CUTOFF: f64 = 4.0;

fn require_even(f: &GaussPoly) -> Result<()> {
    if f.is_even() {
        Ok(())
    } else {
        Err(Error::Parity { expected: "even" })
    }
}

/// `B_k f(t)` for `t != 0`. Also accepts `k = 1`, where it is `f_hat(t)`.
pub fn radial_ft_closed(f: &GaussPoly, k: u32, t: f64) -> Result<Complex64> {
    if k != 1 {
        check_odd_k(k)?;
    }
    require_even(f)?;
    if t == 0.0 {
        return Err(Error::ZeroArgument("t (use radial_ft_zero)"));
    }
    let fh = f.fourier()?;
    if k == 1 {
        return Ok(fh.eval(t));
    }
    let bs = betas(k)?;
    let d = fh.derivatives(bs.len());
    let t = t.abs();
    let mut acc = ComplexSum::new();
    let mut tj = t;
    for (j, b) in bs.iter().enumerate() {
        acc.add(d[j + 1].eval(t) * (b.to_f64() * tj));
        tj *= t;
    }
    Ok(acc.value() * (-1.0 / (2.0 * PI * t.powi(k as i32 - 1))))
}

/// `B_k f(0) = -(alpha_k / 2 pi) f_hat^{(k-1)}(0)`.
pub fn radial_ft_zero(f: &GaussPoly, k: u32) -> Result<Complex64> {
    check_odd_k(k)?;
    require_even(f)?;
    let fh = f.fourier()?;
    Ok(fh.derivative(k as usize - 1).eval(0.0) * (-alpha(k)?.to_f64() / (2.0 * PI)))
}

/// `s_k` as a quadrature kernel: series near the origin, closed form elsewhere.
struct Kernel {
    k: u32,
    coeffs: Vec<DoubleDouble>,
}

impl Kernel {
    fn new(k: u32) -> Result<Self> {
        Ok(Kernel { k, coeffs: sphere::closed_coeffs(k)? })
    }

    fn eval(&self, t: f64) -> f64 {
        if 2.0 * PI * t.abs() < SERIES_CUTOFF {
            sphere::sphere_ft_series(self.k, t)
        } else {
            sphere::closed_with(&self.coeffs, self.k, DoubleDouble::from(t.abs())).to_f64()
        }
    }
}

/// `B_k f(t) = int_0^inf f(r) s_k(r t) r^{k-1} dr` by adaptive quadrature,
/// truncated where the Gaussian envelope times the sphere area drops below
/// `tol * 1e-3`. Panels start no wider than a quarter period of `sin(2 pi r t)`.
pub fn radial_ft_quadrature(f: &GaussPoly, k: u32, t: f64, tol: f64) -> Result<Complex64> {
    check_odd_k(k)?;
    require_even(f)?;
    if tol.is_nan() || tol < 1e-12 {
        return Err(Error::OutOfRange(format!("quadrature tolerance must be at least 1e-12, got {tol}")));
    }
    if t.is_nan() || t < 0.0 || t.is_infinite() {
        return Err(Error::OutOfRange(format!("t must be finite and nonnegative, got {t}")));
    }
    let area = sphere_area(k)?.to_f64();
    let bound = |r: f64| f.envelope(r) * area * r.powi(k as i32 - 1);
    let mut cut = 1.0;
    while !(bound(cut) < tol * 1e-3 && bound(cut + 0.5) <= bound(cut)) {
        cut += 0.25;
        if cut > 1e4 {
            return Err(Error::OutOfRange("test function decays too slowly for quadrature".into()));
        }
    }
    let kernel = Kernel::new(k)?;
    let width = if t > 0.0 { (0.25 / t).min(cut / 4.0) } else { cut / 4.0 };
    let panels = (cut / width).ceil() as usize;
    let (v, _) = integrate(|r| f.eval(r) * (kernel.eval(r * t) * r.powi(k as i32 - 1)), 0.0, cut, panels, tol)?;
    Ok(v)
}

/// Absolute gap in `B_k f = ((k-4)/(2 pi t^2)) B_{k-2} f - (1/t^2) B_{k-4}(t^2 f)`,
/// with `B_1 f = f_hat`. Needs odd `k >= 5` and `t != 0`.
pub fn bk_recurrence_check(f: &GaussPoly, k: u32, t: f64) -> Result<f64> {
    check_odd_k(k)?;
    if k < 5 {
        return Err(Error::InvalidDimension { k: k as i64, reason: "recurrence needs k >= 5" });
    }
    let lhs = radial_ft_closed(f, k, t)?;
    let t2f = f.mul_t().mul_t();
    let t2 = t * t;
    let rhs =
        radial_ft_closed(f, k - 2, t)? * ((k as f64 - 4.0) / (2.0 * PI * t2)) - radial_ft_closed(&t2f, k - 4, t)? / t2;
    Ok((lhs - rhs).norm())
}

/// Evaluates every `(k, t, method)` combination in that nesting order.
pub fn sphere_grid(ks: &[u32], ts: &[f64], methods: &[SphereMethod]) -> Result<Vec<SphereFTValue>> {
    let mut out = Vec::with_capacity(ks.len() * ts.len() * methods.len());
    for &k in ks {
        for &t in ts {
            for &m in methods {
                out.push(sphere_ft(k, t, m)?);
            }
        }
    }
    Ok(out)
}

/// CSV with header `k,t,method,value`.
pub fn sphere_grid_csv(rows: &[SphereFTValue]) -> String {
    let mut s = String::from("k,t,method,value\n");
    for r in rows {
        let _ = writeln!(s, "{},{:e},{},{:e}", r.k, r.t, r.method, r.value);
    }
    s
}

/// Largest number of points a `--t-grid` may expand to.
pub const MAX_GRID_POINTS: usize = 1_000_000;

/// Parses `a:b:step` into `a, a + step, ...` up to `b` inclusive (with a
/// relative slack of `1e-9` steps for the endpoint).
pub fn parse_t_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |message: &str, offset: usize| Error::Parse { offset, message: message.to_string() };
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad("t-grid must have the form a:b:step", 0));
    }
    let mut values = [0.0; 3];
    let mut offset = 0;
    for (slot, part) in values.iter_mut().zip(&parts) {
        *slot = part.trim().parse::<f64>().map_err(|_| bad("expected a number", offset))?;
        if !slot.is_finite() {
            return Err(bad("expected a finite number", offset));
        }
        offset += part.len() + 1;
    }
    let [a, b, step] = values;
    if step <= 0.0 {
        return Err(bad("step must be positive", spec.len() - parts[2].len()));
    }
    if b < a {
        return Err(bad("grid end precedes its start", parts[0].len() + 1));
    }
    let count = ((b - a) / step + 1e-9).floor() + 1.0;
    if count > MAX_GRID_POINTS as f64 {
        return Err(bad("grid has too many points", 0));
    }
    Ok((0..count as usize).map(|i| a + i as f64 * step).collect())
}
