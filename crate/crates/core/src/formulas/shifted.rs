//! Summation over a shifted lattice `Z^k + eta` twisted by a character `xi`.
//!
//! The node side is the measure `sum_m e^{2 pi i <m, xi>} delta_{m + eta}`.
//! By Poisson summation its transform is
//! `e^{-2 pi i <eta, xi>} sum_p e^{-2 pi i <p, eta>} delta_{p + xi}`, so both
//! sides are radial projections of explicit point measures.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{rel_residual, Identity, VerificationReport};
use crate::atoms::{pair, project_ft, project_measure, PointAtom, PointMeasure, Truncation};
use crate::coeffs::betas;
use crate::error::{check_odd_k, Error, Result};
use crate::limits::WorkLimits;
use crate::numeric::{cis_turns, ComplexSum};
use crate::schwartz::GaussPoly;

/// A lattice point `m` with its distance `|m + eta|` from the origin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftedNode {
    pub m: Vec<i64>,
    pub node: f64,
}

fn check_shift(k: u32, v: &[f64], what: &'static str) -> Result<()> {
    if v.len() != k as usize {
        return Err(Error::OutOfRange(format!("{what} has {} components, expected {k}", v.len())));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::OutOfRange(format!("{what} has a non-finite component")));
    }
    if v.iter().all(|x| (x - x.round()).abs() <= 1e-12) {
        return Err(Error::IntegralShift(what));
    }
    Ok(())
}

/// Volume of the `k`-ball of radius `r`.
pub(crate) fn ball_volume(k: u32, r: f64) -> f64 {
    // Gamma(k/2 + 1) by the half-integer recursion.
    let mut gamma = if k.is_multiple_of(2) { 1.0 } else { PI.sqrt() / 2.0 };
    let mut x = if k.is_multiple_of(2) { 1.0 } else { 1.5 };
    while x < k as f64 / 2.0 + 0.75 {
        gamma *= x;
        x += 1.0;
    }
    PI.powf(k as f64 / 2.0) * r.powi(k as i32) / gamma
}

/// Upper estimate for the number of points of `Z^k + eta` within radius `r`:
/// the unit cubes around them fit in the ball of radius `r + sqrt(k)/2`.
fn point_estimate(k: u32, r: f64) -> f64 {
    ball_volume(k, r + (k as f64).sqrt() / 2.0)
}

/// All `m` with `|m + eta| <= R`, in lexicographic order of `m`.
pub fn shifted_nodes(k: u32, eta: &[f64], radius: f64) -> Result<Vec<ShiftedNode>> {
    shifted_nodes_with(k, eta, radius, &WorkLimits::default())
}

pub fn shifted_nodes_with(k: u32, eta: &[f64], radius: f64, limits: &WorkLimits) -> Result<Vec<ShiftedNode>> {
    check_odd_k(k)?;
    check_shift(k, eta, "eta")?;
    if radius.is_nan() || radius <= 0.0 || radius.is_infinite() {
        return Err(Error::OutOfRange(format!("radius must be positive and finite, got {radius}")));
    }
    if k >= 7 && radius > limits.high_dim_radius {
        return Err(Error::WorkCap {
            what: "shifted-lattice radius for k >= 7",
            needed: radius,
            cap: limits.high_dim_radius,
        });
    }
    let estimate = point_estimate(k, radius);
    if estimate > limits.lattice_points {
        return Err(Error::WorkCap { what: "shifted-lattice points", needed: estimate, cap: limits.lattice_points });
    }
    let mut out = Vec::new();
    let mut m = Vec::with_capacity(k as usize);
    scan(eta, radius * radius, 0.0, &mut m, &mut out);
    Ok(out)
}

fn scan(eta: &[f64], r2: f64, acc: f64, m: &mut Vec<i64>, out: &mut Vec<ShiftedNode>) {
    let i = m.len();
    if i == eta.len() {
        out.push(ShiftedNode { m: m.clone(), node: acc.sqrt() });
        return;
    }
    let reach = (r2 - acc).max(0.0).sqrt();
    let lo = (-eta[i] - reach).ceil() as i64;
    let hi = (-eta[i] + reach).floor() as i64;
    for mi in lo..=hi {
        let d = mi as f64 + eta[i];
        let s = acc + d * d;
        if s <= r2 {
            m.push(mi);
            scan(eta, r2, s, m, out);
            m.pop();
        }
    }
}

fn dot_turns(m: &[i64], v: &[f64]) -> f64 {
    m.iter().zip(v).map(|(&a, &b)| a as f64 * b).sum()
}

fn shifted_points(nodes: &[ShiftedNode], shift: &[f64]) -> Vec<f64> {
    nodes.iter().flat_map(|n| n.m.iter().zip(shift).map(|(&a, &b)| a as f64 + b)).collect()
}

fn measure(k: u32, nodes: &[ShiftedNode], shift: &[f64], phase: impl Fn(&[i64]) -> f64) -> Result<PointMeasure> {
    let coords = shifted_points(nodes, shift);
    let atoms = nodes
        .iter()
        .zip(coords.chunks(k as usize))
        .map(|(n, p)| PointAtom { point: p.to_vec(), weight: cis_turns(phase(&n.m)) })
        .collect();
    PointMeasure::new(k, atoms)
}

/// Direct evaluation of `sum_{|m+eta| <= R} e^{2 pi i <m, xi>} / |m+eta| (phi(|m+eta|) - phi(-|m+eta|))`
/// point by point, without grouping into shells.
pub fn shifted_lhs_brute(k: u32, eta: &[f64], xi: &[f64], phi: &GaussPoly, radius: f64) -> Result<Complex64> {
    check_shift(k, xi, "xi")?;
    let nodes = shifted_nodes(k, eta, radius)?;
    let mut acc = ComplexSum::new();
    for n in &nodes {
        let w = cis_turns(dot_turns(&n.m, xi)) / n.node;
        acc.add(w * (phi.eval(n.node) - phi.eval(-n.node)));
    }
    Ok(acc.value())
}

/// Bound on a radial sum `sum_{|x| > R} g(|x|)` over a shifted lattice, where
/// `g(r) <= bound(lo, hi)` on `[lo, hi]`. Unit-width annuli are visited
/// until their contribution is negligible.
fn lattice_tail(k: u32, radius: f64, bound: impl Fn(f64, f64) -> f64) -> f64 {
    let mut total = 0.0;
    let start = radius.floor() as u64;
    for i in start..start + 100_000 {
        let lo = (i as f64).max(radius);
        let hi = i as f64 + 1.0;
        let term = point_estimate(k, hi) * bound(lo, hi);
        total += term;
        if hi > radius + 2.0 && term <= total * 1e-17 + 1e-300 {
            break;
        }
    }
    if total < super::TAIL_FLOOR {
        0.0
    } else {
        total
    }
}

/// `sup_{lo <= |t| <= hi} |f(t)|` bounded termwise.
fn envelope_on(f: &GaussPoly, lo: f64, hi: f64) -> f64 {
    f.terms()
        .iter()
        .map(|t| {
            let p = t.coeffs.iter().rev().fold(0.0, |acc, c| acc * hi + c.norm());
            p * (-PI * t.scale * lo * lo).exp()
        })
        .sum()
}

pub fn verify_shifted(
    k: u32,
    eta: &[f64],
    xi: &[f64],
    phi: &GaussPoly,
    r_time: f64,
    r_freq: f64,
    tol: f64,
) -> Result<VerificationReport> {
    verify_shifted_with(k, eta, xi, phi, r_time, r_freq, tol, &WorkLimits::default())
}

/// Both sides of the shifted-lattice identity.
///
/// The node side is `<sigma, phi>` for the projection `sigma` of the twisted
/// lattice measure. The transform side is `-<sigma_hat, psi>` with
/// `psi = phi_hat`, since `<sigma, phi> = <sigma_hat, phi_hat_hat>` and
/// `phi_hat_hat = -phi` for odd `phi`.
#[allow(clippy::too_many_arguments)]
pub fn verify_shifted_with(
    k: u32,
    eta: &[f64],
    xi: &[f64],
    phi: &GaussPoly,
    r_time: f64,
    r_freq: f64,
    tol: f64,
    limits: &WorkLimits,
) -> Result<VerificationReport> {
    check_odd_k(k)?;
    check_shift(k, eta, "eta")?;
    check_shift(k, xi, "xi")?;
    if !phi.is_odd() {
        return Err(Error::Parity { expected: "odd" });
    }
    let psi = phi.fourier()?;

    let time_nodes = shifted_nodes_with(k, eta, r_time, limits)?;
    let mu = measure(k, &time_nodes, eta, |m| dot_turns(m, xi))?;
    let lhs = pair(&project_measure(&mu)?, phi);

    let freq_nodes = shifted_nodes_with(k, xi, r_freq, limits)?;
    let eta_xi: f64 = eta.iter().zip(xi).map(|(a, b)| a * b).sum();
    let mu_hat = measure(k, &freq_nodes, xi, |p| -(eta_xi + dot_turns(p, eta)))?;
    let rhs = -pair(&project_ft(&mu_hat, k)?, &psi);

    let tail_lhs = lattice_tail(k, r_time, |lo, hi| 2.0 * envelope_on(phi, lo, hi) / lo);
    let bs: Vec<f64> = betas(k)?.iter().map(|b| b.to_f64().abs()).collect();
    let dpsi = psi.derivatives(bs.len());
    let tail_rhs = lattice_tail(k, r_freq, |lo, hi| {
        bs.iter()
            .enumerate()
            .map(|(j, b)| 2.0 * b * lo.powi(j as i32 + 2 - k as i32) * envelope_on(&dpsi[j], lo, hi))
            .sum()
    });

    let (abs_residual, rel) = rel_residual(lhs, rhs);
    Ok(VerificationReport {
        identity: Identity::Shifted,
        k,
        lhs,
        rhs,
        abs_residual,
        rel_residual: rel,
        tail_bound_lhs: tail_lhs,
        tail_bound_rhs: tail_rhs,
        terms_used: (time_nodes.len() + freq_nodes.len()) as u64,
        truncation: Truncation::Radii { time: r_time, freq: r_freq },
        specialized_rel_diff: None,
        tol,
        passed: rel <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schwartz::parse;

    fn phi() -> GaussPoly {
        parse("t*exp(-pi*t^2)").unwrap().value
    }

    #[test]
    fn corner_counts() {
        let nodes = shifted_nodes(3, &[0.5; 3], 1.0).unwrap();
        assert_eq!(nodes.len(), 8);
        assert!(nodes.iter().all(|n| n.node == 3f64.sqrt() / 2.0));
        assert!(nodes.iter().all(|n| n.m.iter().all(|&x| x == 0 || x == -1)));
        let nodes = shifted_nodes(3, &[0.5, 0.0, 0.0], 0.6).unwrap();
        let ms: Vec<Vec<i64>> = nodes.iter().map(|n| n.m.clone()).collect();
        assert_eq!(ms, vec![vec![-1, 0, 0], vec![0, 0, 0]]);
        assert!(nodes.iter().all(|n| n.node == 0.5));
        let nodes = shifted_nodes(5, &[0.5; 5], 1.2).unwrap();
        assert_eq!(nodes.len(), 32);
        assert!(nodes.iter().all(|n| n.node == 5f64.sqrt() / 2.0));
    }

    #[test]
    fn integral_shift_rejected() {
        assert_eq!(shifted_nodes(3, &[1.0, 0.0, 0.0], 2.0), Err(Error::IntegralShift("eta")));
        assert!(verify_shifted(3, &[0.5, 0.0, 0.0], &[2.0, -1.0, 0.0], &phi(), 3.0, 3.0, 1e-8).is_err());
        assert!(shifted_nodes(3, &[0.5, 0.0], 2.0).is_err());
    }

    #[test]
    fn work_caps() {
        assert!(matches!(shifted_nodes(7, &[0.5; 7], 6.5), Err(Error::WorkCap { .. })));
        let tight = WorkLimits { lattice_points: 10.0, ..WorkLimits::default() };
        assert!(matches!(shifted_nodes_with(3, &[0.5; 3], 3.0, &tight), Err(Error::WorkCap { .. })));
    }

    #[test]
    fn ball_volumes() {
        assert!((ball_volume(3, 1.0) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((ball_volume(5, 2.0) - 8.0 * PI * PI / 15.0 * 32.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_shift_vanishes_on_both_sides() {
        let r = verify_shifted(3, &[0.5; 3], &[0.5; 3], &phi(), 6.0, 6.0, 1e-8).unwrap();
        assert!(r.lhs.norm() <= 1e-12 && r.rhs.norm() <= 1e-12, "{r:?}");
        assert!(r.rel_residual <= 1e-8);
    }

    #[test]
    fn nondegenerate_k3() {
        let r = verify_shifted(3, &[0.25, 0.0, 0.0], &[0.0, 1.0 / 3.0, 0.1], &phi(), 6.0, 6.0, 1e-8).unwrap();
        assert!(r.lhs.norm() > 1e-3);
        assert!(r.rel_residual <= 1e-10, "{r:?}");
    }

    #[test]
    fn grouped_matches_brute() {
        let eta = [0.25, 0.0, 0.1];
        let xi = [0.0, 1.0 / 3.0, 0.0];
        let g = parse("(t^3 - t)*exp(-pi*t^2/2)").unwrap().value;
        let r = verify_shifted(3, &eta, &xi, &g, 5.0, 5.0, 1e-8).unwrap();
        let brute = shifted_lhs_brute(3, &eta, &xi, &g, 5.0).unwrap();
        assert!((r.lhs - brute).norm() <= 1e-13 * brute.norm().max(1.0));
    }
}
