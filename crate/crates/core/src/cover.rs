//! Hyperplane covers of `C ∩ Zⁿ` built from the successive minima of the
//! polar body.
//!
//! Take independent `w_1, …, w_k ∈ μ_i C⁰ ∩ Zⁿ` (`k = n - m + 1`), numbers
//! `ν_i >= μ_i`, and the digit box `D⁺_α = {Σ a_i w_i : 0 <= a_i <= α/ν_i}`
//! of size `f(α)`. For `u ∈ C ∩ Zⁿ` the products `u·v`, `v ∈ D⁺_α`, are
//! integers of absolute value at most `kα`; once `f(α) > 2kα + 1` two of them
//! coincide and their difference (an element of `D_α`) is orthogonal to `u`.
//! The hyperplanes orthogonal to the nonzero elements of `D_α` therefore
//! cover `C ∩ Zⁿ`.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genpos::min_term;
use crate::geometry::{Body, GaugeValue};
use crate::lattice::{enumerate_points, successive_minima, Budget, MinimaProfile};
use crate::linalg;
use crate::rational::{int, nth_root_enclosure, ser_rational, to_f64, Enclosure, Rational, DEFAULT_ROOT_BITS};

/// A hyperplane through the origin, `{x : normal·x = 0}`, with a primitive
/// normal whose first nonzero coordinate is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hyperplane {
    normal: Vec<i64>,
}

impl Hyperplane {
    pub fn from_normal(v: &[i64]) -> Result<Hyperplane> {
        linalg::canonical_primitive(v).map(|normal| Hyperplane { normal }).ok_or(Error::ZeroVector)
    }

    pub(crate) fn from_wide(v: &[i128]) -> Option<Hyperplane> {
        linalg::canonical_primitive_i128(v).map(|normal| Hyperplane { normal })
    }

    /// The hyperplane spanned by `n - 1` independent points, if they are.
    pub fn spanned_by(points: &[&[i64]]) -> Option<Hyperplane> {
        Hyperplane::from_wide(&linalg::generalized_cross(points))
    }

    pub fn normal(&self) -> &[i64] {
        &self.normal
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        linalg::dot(&self.normal, x) == 0
    }
}

/// Successive minima `μ_i` of the polar body with witnesses `w_i`,
/// `support(C, w_i) = μ_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarMinimaProfile {
    pub mu: Vec<GaugeValue>,
    pub witnesses: Vec<Vec<i64>>,
}

pub fn polar_minima(body: &Body) -> Result<PolarMinimaProfile> {
    let polar = body.polar()?;
    let MinimaProfile { minima, witnesses } = successive_minima(&polar)?;
    Ok(PolarMinimaProfile { mu: minima, witnesses })
}

/// `ν_i = μ̂_i (1 + i·2^-16)` with `μ̂_i` the exact value or the upper end of
/// its enclosure, then forced strictly increasing.
pub fn nu_from_mu(mu: &[GaugeValue]) -> Vec<Rational> {
    let eps = Rational::new(BigInt::one(), BigInt::from(1u64 << 16));
    let mut nu: Vec<Rational> = Vec::with_capacity(mu.len());
    for (i, m) in mu.iter().enumerate() {
        let mut v = m.upper_rational() * (Rational::one() + &eps * int(i as i64 + 1));
        if let Some(prev) = nu.last() {
            if v <= *prev {
                v = prev * (Rational::one() + &eps);
            }
        }
        nu.push(v);
    }
    nu
}

/// `f(α) = ∏ (⌊α/ν_i⌋ + 1)`.
pub fn f_of(alpha: &Rational, nu: &[Rational]) -> u128 {
    nu.iter()
        .map(|v| (alpha / v).floor().to_integer().to_u128().expect("digit count fits u128") + 1)
        .product()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaChoice {
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    pub f_alpha: u128,
    /// `16 k^(k/(k-1)) (ν_1⋯ν_k)^(1/(k-1))` with `k = n - m + 1`.
    pub threshold: Enclosure,
}

/// The smallest jump point `α` of `f` with `f(α)` at least the threshold,
/// judged against the upper end of the threshold's enclosure.
pub fn choose_alpha(nu: &[Rational], m: usize, n: usize) -> Result<AlphaChoice> {
    if m == 0 || m >= n {
        return Err(Error::InvalidNu(format!("m = {m} must satisfy 0 < m < n = {n}")));
    }
    let k = n - m + 1;
    if nu.len() != k {
        return Err(Error::InvalidNu(format!("expected {k} values, got {}", nu.len())));
    }
    if !nu[0].is_positive() || nu.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidNu("values must be positive and strictly increasing".into()));
    }
    let kq = int(k as i64);
    let prod: Rational = nu.iter().product();
    let radicand = num_traits::pow(kq.clone(), k) * &prod;
    let threshold = nth_root_enclosure(&radicand, (k - 1) as u32, DEFAULT_ROOT_BITS).scale(&int(16));

    // merge the arithmetic progressions a·ν_i in increasing order
    let mut counts = vec![0u128; k];
    let mut next: Vec<Rational> = nu.to_vec();
    let (alpha, f) = loop {
        let alpha = next.iter().min().unwrap().clone();
        for i in 0..k {
            if next[i] == alpha {
                counts[i] += 1;
                next[i] += &nu[i];
            }
        }
        let f: u128 = counts.iter().map(|c| c + 1).product();
        if Rational::from_integer(BigInt::from(f)) >= threshold.hi {
            break (alpha, f);
        }
    };
    let fq = Rational::from_integer(BigInt::from(f));
    let checks = [
        (fq > &kq * int(2) * &alpha + int(1), "f(α) > 2(n-m+1)α + 1"),
        (&kq * int(4) * &alpha <= fq, "4(n-m+1)α <= f(α)"),
        (fq >= int(32), "32 <= f(α)"),
    ];
    if let Some((_, what)) = checks.iter().find(|(ok, _)| !ok) {
        return Err(Error::ThresholdViolated(format!("{what} fails at α = {alpha}, f(α) = {f}")));
    }
    Ok(AlphaChoice { alpha, f_alpha: f, threshold })
}

fn digit_bounds(nu: &[Rational], alpha: &Rational) -> Vec<i64> {
    nu.iter().map(|v| (alpha / v).floor().to_integer().to_i64().expect("digit bound fits i64")).collect()
}

fn digit_box(witnesses: &[Vec<i64>], ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let n = witnesses.first().map(Vec::len).unwrap_or(0);
    ranges
        .iter()
        .map(|&(lo, hi)| lo..=hi)
        .multi_cartesian_product()
        .map(|a| {
            (0..n)
                .map(|c| a.iter().zip(witnesses).map(|(&ai, w)| ai * w[c]).sum())
                .collect()
        })
        .collect()
}

/// `D⁺_α`: combinations with digits `0 <= a_i <= α/ν_i`, in digit-lex order.
pub fn build_d_alpha_plus(witnesses: &[Vec<i64>], nu: &[Rational], alpha: &Rational) -> Vec<Vec<i64>> {
    let ranges: Vec<(i64, i64)> = digit_bounds(nu, alpha).into_iter().map(|a| (0, a)).collect();
    digit_box(witnesses, &ranges)
}

/// `D_α`: combinations with digits `|a_i| <= α/ν_i`, in digit-lex order.
pub fn build_d_alpha(witnesses: &[Vec<i64>], nu: &[Rational], alpha: &Rational) -> Vec<Vec<i64>> {
    let ranges: Vec<(i64, i64)> = digit_bounds(nu, alpha).into_iter().map(|a| (-a, a)).collect();
    digit_box(witnesses, &ranges)
}

/// Two distinct elements of `D⁺_α` with equal product against `u`; their
/// difference is a nonzero element of `D_α` orthogonal to `u`.
pub fn pigeonhole_pair(u: &[i64], d_plus: &[Vec<i64>]) -> Option<(usize, usize)> {
    let mut seen: HashMap<i128, usize> = HashMap::with_capacity(d_plus.len());
    for (i, v) in d_plus.iter().enumerate() {
        if let Some(&j) = seen.get(&linalg::dot(u, v)) {
            return Some((j, i));
        }
        seen.insert(linalg::dot(u, v), i);
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MChoice {
    Fixed(usize),
    /// Try every `m` and keep the smallest family (smaller `m` on ties).
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverFamily {
    pub hyperplanes: Vec<Hyperplane>,
    pub m: usize,
    #[serde(serialize_with = "ser_rationals")]
    pub nu: Vec<Rational>,
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    pub witnesses: Vec<Vec<i64>>,
    pub f_alpha: u128,
    /// `|D_α| = ∏(2⌊α/ν_i⌋ + 1)`, counted with the zero vector.
    pub d_alpha_size: u128,
    /// Number of lattice points of the body that were checked.
    pub points_checked: usize,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

impl CoverFamily {
    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn k(&self) -> usize {
        self.nu.len()
    }

    /// `2^(n-m+1) · f(α)`.
    pub fn size_bound(&self) -> u128 {
        (1u128 << self.k()) * self.f_alpha
    }

    /// Index of a hyperplane containing `x`.
    pub fn covering(&self, x: &[i64]) -> Option<usize> {
        self.hyperplanes.iter().position(|h| h.contains(x))
    }
}

/// First nonzero point (in input order) that lies on none of `hyperplanes`.
pub fn find_uncovered(points: &[Vec<i64>], hyperplanes: &[Hyperplane]) -> Option<Vec<i64>> {
    points
        .par_iter()
        .filter(|u| u.iter().any(|&c| c != 0))
        .find_first(|u| !hyperplanes.iter().any(|h| h.contains(u)))
        .cloned()
}

pub fn build_cover(body: &Body, m: MChoice) -> Result<CoverFamily> {
    let n = body.dim();
    let profile = successive_minima(body)?;
    let lambda_n = profile.last().ok_or(Error::MinimaNotComputed)?;
    if lambda_n.square() > Rational::one() {
        return Err(Error::LambdaExceedsOne(lambda_n.to_string()));
    }
    let polar = polar_minima(body)?;
    let points = enumerate_points(body, &Rational::one())?;
    let ms: Vec<usize> = match m {
        MChoice::Fixed(m) => {
            if m == 0 || m >= n {
                return Err(Error::InvalidNu(format!("m = {m} must satisfy 0 < m < n = {n}")));
            }
            vec![m]
        }
        MChoice::Auto => (1..n).collect(),
    };
    let mut best: Option<CoverFamily> = None;
    for m in ms {
        let family = cover_for_m(&polar, &points, n, m)?;
        if best.as_ref().is_none_or(|b| family.len() < b.len()) {
            best = Some(family);
        }
    }
    Ok(best.unwrap())
}

fn cover_for_m(polar: &PolarMinimaProfile, points: &[Vec<i64>], n: usize, m: usize) -> Result<CoverFamily> {
    let k = n - m + 1;
    let nu = nu_from_mu(&polar.mu[..k]);
    let AlphaChoice { alpha, f_alpha, .. } = choose_alpha(&nu, m, n)?;
    let witnesses = polar.witnesses[..k].to_vec();
    let d_alpha_size: u128 = digit_bounds(&nu, &alpha).iter().map(|&a| 2 * a as u128 + 1).product();
    Budget::from_env().check(d_alpha_size)?;
    let normals: BTreeSet<Hyperplane> = build_d_alpha(&witnesses, &nu, &alpha)
        .iter()
        .filter_map(|d| Hyperplane::from_normal(d).ok())
        .collect();
    let hyperplanes: Vec<Hyperplane> = normals.into_iter().collect();
    if let Some(u) = find_uncovered(points, &hyperplanes) {
        return Err(Error::CoverageVerificationFailed(u));
    }
    Ok(CoverFamily {
        hyperplanes,
        m,
        nu,
        alpha,
        witnesses,
        f_alpha,
        d_alpha_size,
        points_checked: points.len(),
    })
}

/// The minima-based upper-bound expression `c 2ⁿ n² log n · min_term`; the
/// absolute constant `c` is unknown, so this is a diagnostic only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimaBoundReport {
    pub m_star: usize,
    pub min_term: Enclosure,
    pub c: f64,
    pub value: f64,
}

pub fn minima_size_bound(profile: &MinimaProfile, c: f64) -> Result<MinimaBoundReport> {
    let lambda_n = profile.last().ok_or(Error::MinimaNotComputed)?;
    if lambda_n.square() > Rational::one() {
        return Err(Error::LambdaExceedsOne(lambda_n.to_string()));
    }
    let (m_star, term) = min_term(profile)?;
    let n = profile.dim() as f64;
    let value = c * 2f64.powf(n) * n * n * n.ln() * to_f64(&term.hi);
    Ok(MinimaBoundReport { m_star, min_term: term, c, value })
}
