//! Finite combs of derivative-delta atoms.
//!
//! An atom `weight * delta_x^{(j)}` acts on a test function by
//! `<delta_x^{(j)}, f> = (-1)^j f^{(j)}(x)`. Combs represent truncations of
//! the distributions `sigma_k` and their Fourier transforms, and of the
//! one-dimensional distributions obtained by projecting a point measure on
//! `R^k` onto radii.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coeffs::{alpha, betas, ScaledRational};
use crate::error::{check_odd_k, Error, Result};
use crate::numeric::{half_power, ComplexSum};
use crate::schwartz::GaussPoly;
use crate::sumsq::rk_table;

/// Largest derivative order accepted in a comb.
pub const MAX_ORDER: u32 = 64;

/// A single term `weight * delta^{(order)}_{location}`. When the location is
/// `±sqrt(n)` for an integer `n`, `n` is carried so shells compare exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub n: Option<u64>,
    pub location: f64,
    pub order: u32,
    pub weight: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
    #[default]
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Truncation {
    /// Shells `n <= N`.
    Shells(u64),
    /// Nodes of modulus at most `R`.
    Radius(f64),
    /// Separate radii for the time-side and frequency-side combs.
    Radii { time: f64, freq: f64 },
    #[default]
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CombMeta {
    pub k: Option<u32>,
    pub truncation: Truncation,
    pub parity: Parity,
}

/// Atoms sorted by `(location, order)` with no repeated pair.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AtomComb {
    atoms: Vec<Atom>,
    pub meta: CombMeta,
}

impl AtomComb {
    /// Sorts and merges atoms sharing `(location, order)`. Rejects
    /// non-finite data, orders above [`MAX_ORDER`], and integer tags that
    /// disagree with the location.
    pub fn new(atoms: Vec<Atom>, meta: CombMeta) -> Result<Self> {
        for a in &atoms {
            if !a.location.is_finite() || !a.weight.re.is_finite() || !a.weight.im.is_finite() {
                return Err(Error::OutOfRange(format!("non-finite atom {a:?}")));
            }
            if a.order > MAX_ORDER {
                return Err(Error::OutOfRange(format!("derivative order {} exceeds {MAX_ORDER}", a.order)));
            }
            if let Some(n) = a.n {
                if (n as f64).sqrt() != a.location.abs() {
                    return Err(Error::OutOfRange(format!("atom tagged n = {n} sits at {}", a.location)));
                }
            }
        }
        let mut atoms = atoms;
        atoms.sort_by(|a, b| a.location.total_cmp(&b.location).then(a.order.cmp(&b.order)));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if last.location == a.location && last.order == a.order => {
                    last.weight += a.weight;
                    last.n = last.n.or(a.n);
                }
                _ => merged.push(a),
            }
        }
        Ok(AtomComb { atoms: merged, meta })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn max_order(&self) -> u32 {
        self.atoms.iter().map(|a| a.order).max().unwrap_or(0)
    }

    /// `c * comb`.
    pub fn scaled(&self, c: Complex64) -> AtomComb {
        AtomComb { atoms: self.atoms.iter().map(|a| Atom { weight: a.weight * c, ..*a }).collect(), meta: self.meta }
    }

    /// Sum of `|weight|` over all atoms.
    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight.norm()).sum()
    }

    /// JSON array of `{n, location, order, weight: [re, im]}` objects.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.atoms).expect("atoms serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let atoms: Vec<Atom> = serde_json::from_str(text).map_err(|e| Error::Serde(e.to_string()))?;
        Self::new(atoms, CombMeta::default())
    }
}

/// `<comb, f> = sum weight (-1)^order f^{(order)}(location)`, accumulated in
/// ascending `(location, order)` with compensated summation.
pub fn pair(comb: &AtomComb, f: &GaussPoly) -> Complex64 {
    let derivs = f.derivatives(comb.max_order() as usize);
    let mut acc = ComplexSum::new();
    for a in comb.atoms() {
        let v = derivs[a.order as usize].eval(a.location);
        acc.add(if a.order % 2 == 1 { -a.weight * v } else { a.weight * v });
    }
    acc.value()
}

/// A sphere `|x| = radius` of a point measure together with its total mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Shell {
    pub n: Option<u64>,
    pub radius: f64,
    pub weight: Complex64,
}

impl Shell {
    fn exact(n: u64, weight: Complex64) -> Self {
        Shell { n: Some(n), radius: (n as f64).sqrt(), weight }
    }
}

/// `-2 a0 delta'_0 + sum_shells w / r (delta_r - delta_{-r})`.
pub(crate) fn comb_from_shells(origin: Complex64, shells: &[Shell], meta: CombMeta) -> Result<AtomComb> {
    let mut atoms = Vec::with_capacity(2 * shells.len() + 1);
    if !origin.is_zero() {
        atoms.push(Atom { n: Some(0), location: 0.0, order: 1, weight: origin * -2.0 });
    }
    for s in shells {
        let w = s.weight / s.radius;
        atoms.push(Atom { n: s.n, location: s.radius, order: 0, weight: w });
        atoms.push(Atom { n: s.n, location: -s.radius, order: 0, weight: -w });
    }
    AtomComb::new(atoms, meta)
}

fn exact_integer(w: Complex64) -> Option<BigInt> {
    (w.im == 0.0 && w.re.fract() == 0.0 && w.re.abs() < 9.007_199_254_740_992e15).then(|| BigInt::from(w.re as i64))
}

/// `2i b0 alpha_k delta^{(k-2)}_0 - i sum_shells w/r^{k-2} sum_j beta_j r^j
/// ((-1)^j delta^{(j)}_r - delta^{(j)}_{-r})`.
pub(crate) fn ft_comb_from_shells(k: u32, origin: Complex64, shells: &[Shell], meta: CombMeta) -> Result<AtomComb> {
    check_odd_k(k)?;
    let bs = betas(k)?;
    let bs_f64: Vec<f64> = bs.iter().map(ScaledRational::to_f64).collect();
    let mut atoms = Vec::with_capacity(shells.len() * bs.len() * 2 + 1);
    if !origin.is_zero() {
        let a = alpha(k)?.to_f64();
        atoms.push(Atom { n: Some(0), location: 0.0, order: k - 2, weight: Complex64::new(0.0, 2.0) * origin * a });
    }
    for s in shells {
        for (j, (b, bf)) in bs.iter().zip(&bs_f64).enumerate() {
            let j = j as u32;
            let e = k - 2 - j;
            // w = weight * beta_j * r^{j-(k-2)}
            let w = match (s.n, exact_integer(s.weight)) {
                (Some(n), Some(int)) => {
                    let c = (&ScaledRational::new(BigRational::from_integer(int), 0) * b).to_f64();
                    Complex64::new(c / half_power(n, e), 0.0)
                }
                (Some(n), None) => s.weight * *bf / half_power(n, e),
                (None, _) => s.weight * *bf / s.radius.powi(e as i32),
            };
            let plus = if j.is_multiple_of(2) { mul_minus_i(w) } else { -mul_minus_i(w) };
            atoms.push(Atom { n: s.n, location: s.radius, order: j, weight: plus });
            atoms.push(Atom { n: s.n, location: -s.radius, order: j, weight: -mul_minus_i(w) });
        }
    }
    AtomComb::new(atoms, meta)
}

fn mul_minus_i(w: Complex64) -> Complex64 {
    Complex64::new(w.im, -w.re)
}

fn lattice_shells(k: u32, max_n: u64) -> Result<Vec<Shell>> {
    let table = rk_table(k, max_n)?;
    Ok((1..=max_n)
        .filter(|&n| !table.get(n).is_zero())
        .map(|n| Shell::exact(n, Complex64::new(table.get_f64(n), 0.0)))
        .collect())
}

/// `sigma_k = -2 delta'_0 + sum_{n<=N} r_k(n)/sqrt(n) (delta_{sqrt n} - delta_{-sqrt n})`.
pub fn sigma_k(k: u32, max_n: u64) -> Result<AtomComb> {
    check_odd_k(k)?;
    let meta = CombMeta { k: Some(k), truncation: Truncation::Shells(max_n), parity: Parity::Odd };
    comb_from_shells(Complex64::new(1.0, 0.0), &lattice_shells(k, max_n)?, meta)
}

/// The Fourier transform of `sigma_k`, truncated to shells `n <= N`.
pub fn sigma_k_hat(k: u32, max_n: u64) -> Result<AtomComb> {
    check_odd_k(k)?;
    let meta = CombMeta { k: Some(k), truncation: Truncation::Shells(max_n), parity: Parity::Odd };
    ft_comb_from_shells(k, Complex64::new(1.0, 0.0), &lattice_shells(k, max_n)?, meta)
}

/// One weighted point of a [`PointMeasure`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointAtom {
    pub point: Vec<f64>,
    pub weight: Complex64,
}

/// A finite pure point measure `sum a(lambda) delta_lambda` on `R^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointMeasure {
    dimension: u32,
    atoms: Vec<PointAtom>,
}

impl PointMeasure {
    /// Rejects points of the wrong length, non-finite data and repeated points.
    pub fn new(dimension: u32, atoms: Vec<PointAtom>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for a in &atoms {
            if a.point.len() != dimension as usize {
                return Err(Error::OutOfRange(format!("point of length {} in dimension {dimension}", a.point.len())));
            }
            if a.point.iter().any(|x| !x.is_finite()) || !a.weight.re.is_finite() || !a.weight.im.is_finite() {
                return Err(Error::OutOfRange("non-finite point measure data".into()));
            }
            let key: Vec<u64> = a.point.iter().map(|x| (x + 0.0).to_bits()).collect();
            if !seen.insert(key) {
                return Err(Error::OutOfRange(format!("duplicate point {:?}", a.point)));
            }
        }
        Ok(PointMeasure { dimension, atoms })
    }

    /// Unit masses on the integer points of the closed ball of radius `sqrt(max_n)`.
    pub fn lattice_ball(dimension: u32, max_n: u64) -> Result<Self> {
        let r = (max_n as f64).sqrt().floor() as i64;
        let mut atoms = Vec::new();
        let mut m = vec![-r; dimension as usize];
        loop {
            let sq: i64 = m.iter().map(|x| x * x).sum();
            if sq as u64 <= max_n {
                atoms
                    .push(PointAtom { point: m.iter().map(|&x| x as f64).collect(), weight: Complex64::new(1.0, 0.0) });
            }
            let mut i = 0;
            loop {
                if i == m.len() {
                    return PointMeasure::new(dimension, atoms);
                }
                if m[i] < r {
                    m[i] += 1;
                    break;
                }
                m[i] = -r;
                i += 1;
            }
        }
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn atoms(&self) -> &[PointAtom] {
        &self.atoms
    }

    /// Groups atoms into spheres about the origin. The origin's mass is
    /// returned separately. Integer points are grouped by their exact
    /// squared norm.
    fn shells(&self) -> (Complex64, Vec<Shell>) {
        #[derive(PartialEq, Eq, PartialOrd, Ord)]
        enum Key {
            Exact(u64),
            Float(u64),
        }
        let mut origin = Complex64::zero();
        let mut groups: BTreeMap<Key, (f64, ComplexSum)> = BTreeMap::new();
        for a in &self.atoms {
            let integral = a.point.iter().all(|x| x.fract() == 0.0 && x.abs() < 1e8);
            let sq: f64 = a.point.iter().map(|x| x * x).sum();
            if sq == 0.0 {
                origin += a.weight;
                continue;
            }
            let key = if integral { Key::Exact(sq as u64) } else { Key::Float(sq.to_bits()) };
            groups.entry(key).or_insert_with(|| (sq, ComplexSum::new())).1.add(a.weight);
        }
        let mut shells: Vec<Shell> = groups
            .into_iter()
            .map(|(key, (sq, w))| match key {
                Key::Exact(n) => Shell::exact(n, w.value()),
                Key::Float(_) => Shell { n: None, radius: sq.sqrt(), weight: w.value() },
            })
            .collect();
        shells.sort_by(|a, b| a.radius.total_cmp(&b.radius));
        (origin, shells)
    }
}

/// `sigma = -2 a(0) delta'_0 + sum_{lambda != 0} a(lambda)/|lambda| (delta_{|lambda|} - delta_{-|lambda|})`.
pub fn project_measure(mu: &PointMeasure) -> Result<AtomComb> {
    check_odd_k(mu.dimension)?;
    let (origin, shells) = mu.shells();
    let radius = shells.last().map(|s| s.radius).unwrap_or(0.0);
    let meta = CombMeta { k: Some(mu.dimension), truncation: Truncation::Radius(radius), parity: Parity::Odd };
    comb_from_shells(origin, &shells, meta)
}

/// The Fourier-side comb built from the transform `mu_hat = sum b(s) delta_s`.
pub fn project_ft(mu_hat: &PointMeasure, k: u32) -> Result<AtomComb> {
    check_odd_k(k)?;
    if mu_hat.dimension != k {
        return Err(Error::InvalidDimension { k: k as i64, reason: "does not match the measure's dimension" });
    }
    let (origin, shells) = mu_hat.shells();
    let radius = shells.last().map(|s| s.radius).unwrap_or(0.0);
    let meta = CombMeta { k: Some(k), truncation: Truncation::Radius(radius), parity: Parity::Odd };
    ft_comb_from_shells(k, origin, &shells, meta)
}
