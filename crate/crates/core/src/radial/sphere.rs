//! Fourier transform `s_k` of the surface measure of the unit sphere in
//! `R^k`, by four independent routes. Every route runs in double-double
//! arithmetic and rounds once at the end, which keeps the cancellation in
//! the small-`t`, high-`k` corner well below double precision.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::coeffs::{bessel_poly, betas, double_factorial, ScaledRational};
use crate::error::{check_odd_k, Error, Result};
use crate::numeric::DoubleDouble as Dd;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SphereMethod {
    Closed,
    Bessel,
    Recurrence,
    BesselPoly,
}

impl SphereMethod {
    pub const ALL: [SphereMethod; 4] =
        [SphereMethod::Closed, SphereMethod::Bessel, SphereMethod::Recurrence, SphereMethod::BesselPoly];

    pub fn name(self) -> &'static str {
        match self {
            SphereMethod::Closed => "closed",
            SphereMethod::Bessel => "bessel",
            SphereMethod::Recurrence => "recurrence",
            SphereMethod::BesselPoly => "besselpoly",
        }
    }
}

impl fmt::Display for SphereMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SphereMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SphereMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::OutOfRange(format!("unknown sphere method {s:?}")))
    }
}

/// One evaluation of `s_k(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereFTValue {
    pub k: u32,
    pub t: f64,
    pub value: f64,
    pub method: SphereMethod,
}

fn check_t(t: f64) -> Result<Dd> {
    if t == 0.0 {
        return Err(Error::ZeroArgument("t"));
    }
    if !t.is_finite() {
        return Err(Error::OutOfRange(format!("t must be finite, got {t}")));
    }
    Ok(Dd::from(t.abs()))
}

fn check_odd_any(k: u32) -> Result<()> {
    if k.is_multiple_of(2) {
        return Err(Error::InvalidDimension { k: k as i64, reason: "must be odd" });
    }
    Ok(())
}

/// `2 (2 pi)^{(k-1)/2} / (k-2)!!`, the area of the unit sphere in `R^k`.
pub fn sphere_area(k: u32) -> Result<ScaledRational> {
    check_odd_k(k)?;
    let h = (k - 1) / 2;
    let num = BigInt::from(2u32) * BigInt::from(2u32).pow(h);
    let den = BigInt::from(double_factorial(k as i64 - 2)?);
    Ok(ScaledRational::new(BigRational::new(num, den), h as i32))
}

/// Precomputed `beta_{j,k} (2 pi)^j` in double-double.
pub(crate) fn closed_coeffs(k: u32) -> Result<Vec<Dd>> {
    check_odd_k(k)?;
    Ok(betas(k)?
        .iter()
        .enumerate()
        .map(|(j, b)| {
            let two_pi_j = ScaledRational::new(BigRational::from_integer(BigInt::from(2u32).pow(j as u32)), j as i32);
            (b * &two_pi_j).to_dd()
        })
        .collect())
}

/// `(2 / t^{k-2}) sum_j beta_j (2 pi t)^j sin(2 pi t + j pi/2)` with
/// coefficients from [`closed_coeffs`].
pub(crate) fn closed_with(coeffs: &[Dd], k: u32, t: Dd) -> Dd {
    let (s, c) = (Dd::TAU * t).sin_cos();
    let mut acc = Dd::ZERO;
    let mut tj = Dd::ONE;
    for (j, b) in coeffs.iter().enumerate() {
        let trig = match j % 4 {
            0 => s,
            1 => c,
            2 => -s,
            _ => -c,
        };
        acc = acc + *b * tj * trig;
        tj = tj * t;
    }
    acc.mul_f64(2.0) / t.powi(k as i32 - 2)
}

/// `s_k(t)` from the finite closed form.
pub fn sphere_ft_closed(k: u32, t: f64) -> Result<f64> {
    let td = check_t(t)?;
    Ok(closed_with(&closed_coeffs(k)?, k, td).to_f64())
}

/// `2 pi t^{-nu} J_nu(2 pi t)` with `nu = (k-2)/2`, using the closed forms
/// of `J_{-1/2}` and `J_{1/2}` and the upward recurrence in the order.
pub fn sphere_ft_bessel(k: u32, t: f64) -> Result<f64> {
    check_odd_any(k)?;
    let td = check_t(t)?;
    let z = Dd::TAU * td;
    let (s, c) = z.sin_cos();
    let norm = (Dd::from(2.0) / (Dd::PI * z)).sqrt();
    let mut j_prev = norm * c; // J_{-1/2}
    let mut j_cur = norm * s; // J_{1/2}
    let target = k as i32 - 2; // twice the order
    let value_j = if target == -1 {
        j_prev
    } else {
        let mut two_nu = 1;
        while two_nu < target {
            let next = Dd::from(two_nu as f64) / z * j_cur - j_prev;
            j_prev = j_cur;
            j_cur = next;
            two_nu += 2;
        }
        j_cur
    };
    let t_pow = td.sqrt().powi(-target);
    Ok((Dd::TAU * t_pow * value_j).to_f64())
}

/// `s_k = ((k-4) s_{k-2} - 2 pi s_{k-4}) / (2 pi t^2)` from `s_1 = 2 cos(2 pi t)`
/// and `s_3 = 2 sin(2 pi t)/t`.
pub fn sphere_ft_recurrence(k: u32, t: f64) -> Result<f64> {
    check_odd_any(k)?;
    let td = check_t(t)?;
    let (s, c) = (Dd::TAU * td).sin_cos();
    let s1 = c.mul_f64(2.0);
    let s3 = s.mul_f64(2.0) / td;
    if k == 1 {
        return Ok(s1.to_f64());
    }
    let denom = Dd::TAU * td * td;
    let (mut a, mut b) = (s1, s3);
    let mut kk = 3;
    while kk < k {
        kk += 2;
        let next = (Dd::from(kk as f64 - 4.0) * b - Dd::TAU * a) / denom;
        a = b;
        b = next;
    }
    Ok(b.to_f64())
}

/// `(2 / t^{k-2}) Im{theta_n(-2 pi i t) / (2 pi)^n e^{2 pi i t}}`, `n = (k-3)/2`.
pub fn sphere_ft_besselpoly(k: u32, t: f64) -> Result<f64> {
    check_odd_k(k)?;
    let td = check_t(t)?;
    let n = (k - 3) / 2;
    let theta = bessel_poly(n);
    let x = Dd::TAU * td;
    let (mut re, mut im) = (Dd::ZERO, Dd::ZERO);
    let mut xm = Dd::ONE;
    for (m, c) in theta.coeffs.iter().enumerate() {
        let term = Dd::from_rational(&BigRational::from_integer(BigInt::from(c.clone()))) * xm;
        // (-i)^m
        match m % 4 {
            0 => re = re + term,
            1 => im = im - term,
            2 => re = re - term,
            _ => im = im + term,
        }
        xm = xm * x;
    }
    let scale = Dd::TAU.powi(n as i32).recip();
    let (s, c) = x.sin_cos();
    let imag = (re * s + im * c) * scale;
    Ok((imag.mul_f64(2.0) / td.powi(k as i32 - 2)).to_f64())
}

pub fn sphere_ft(k: u32, t: f64, method: SphereMethod) -> Result<SphereFTValue> {
    let value = match method {
        SphereMethod::Closed => sphere_ft_closed(k, t)?,
        SphereMethod::Bessel => sphere_ft_bessel(k, t)?,
        SphereMethod::Recurrence => sphere_ft_recurrence(k, t)?,
        SphereMethod::BesselPoly => sphere_ft_besselpoly(k, t)?,
    };
    Ok(SphereFTValue { k, t, value, method })
}

/// Power series `2 pi^{nu+1} sum_m (-1)^m (pi t)^{2m} / (m! Gamma(m+nu+1))`,
/// accurate for small `2 pi t` where the closed form cancels.
pub(crate) fn sphere_ft_series(k: u32, t: f64) -> f64 {
    let nu1 = k as f64 / 2.0;
    // Gamma(k/2) for odd k.
    let mut gamma = std::f64::consts::PI.sqrt();
    let mut x = 0.5;
    while x < nu1 - 0.25 {
        gamma *= x;
        x += 1.0;
    }
    let pt2 = (std::f64::consts::PI * t).powi(2);
    let mut term = 2.0 * std::f64::consts::PI.powf(nu1) / gamma;
    let mut sum = term;
    for m in 0..400 {
        let mf = m as f64;
        term *= -pt2 / ((mf + 1.0) * (mf + nu1));
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}
