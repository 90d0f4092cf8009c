//! Large general-position subsets of `C ∩ Zⁿ` from the discrete moment curve.
//!
//! The points `(1, i, i², …, i^(n-1))` for `0 <= i < p`, together with `e_n`,
//! are `n`-wise independent over `F_p`. Each is replaced by `j·v + p·w ∈ C`
//! for some `1 <= j < p` and `w ∈ Zⁿ`; scaling by a unit mod `p` and adding
//! multiples of `p` keep independence mod `p`, hence over the rationals.

use itertools::Itertools;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Body, GaugeValue};
use crate::lattice::{successive_minima, MinimaProfile};
use crate::linalg;
use crate::primes::{is_prime, prev_prime};
use crate::rational::{int, nth_root_enclosure, Enclosure, Rational, DEFAULT_ROOT_BITS};

/// The minimum over `0 < m < n` of `(λ_m ⋯ λ_n)^(-1/(n-m))`, with the
/// minimizing `m` (smallest on ties).
pub fn min_term(profile: &MinimaProfile) -> Result<(usize, Enclosure)> {
    let n = profile.dim();
    if n < 2 || profile.witnesses.len() != n {
        return Err(Error::MinimaNotComputed);
    }
    let mut best: Option<(usize, Enclosure)> = None;
    for m in 1..n {
        // λ_i are 1-based; the product squared is rational
        let prod_sq: Rational = profile.minima[m - 1..].iter().map(GaugeValue::square).product();
        if prod_sq.is_zero() {
            return Err(Error::MinimaNotComputed);
        }
        let term = nth_root_enclosure(&prod_sq.recip(), 2 * (n - m) as u32, DEFAULT_ROOT_BITS);
        best = Some(match best {
            None => (m, term),
            Some((bm, b)) => {
                if term.lo < b.lo {
                    (m, term.min(&b))
                } else {
                    (bm, b.min(&term))
                }
            }
        });
    }
    Ok(best.unwrap())
}

/// Evaluated lower bound on the size of a general-position set, and the
/// admissibility bound for the lifting prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBoundReport {
    pub n: usize,
    pub m_star: usize,
    pub min_term: Enclosure,
    /// `(1 - λ_n) / (16 n²) · min_term`.
    pub bound: Enclosure,
    /// `(1 - λ_n) / (8 n²) · min_term`; admissible primes lie strictly below.
    pub p_bound: Enclosure,
}

pub fn lower_bound(profile: &MinimaProfile) -> Result<LowerBoundReport> {
    let (m_star, term) = min_term(profile)?;
    let n = profile.dim();
    let lambda_n = profile.last().ok_or(Error::MinimaNotComputed)?;
    if lambda_n.square() > Rational::one() {
        return Err(Error::LambdaExceedsOne(lambda_n.to_string()));
    }
    let slack = lambda_n.enclosure().one_minus().clamp_nonnegative();
    let base = slack.mul(&term);
    let nn = int((n * n) as i64);
    Ok(LowerBoundReport {
        n,
        m_star,
        min_term: term,
        bound: base.scale(&(int(16) * &nn).recip()),
        p_bound: base.scale(&(int(8) * &nn).recip()),
    })
}

/// The largest prime `p` with `1 < p < p_bound`, judged against the lower
/// end of the enclosure so an inadmissible prime is never chosen.
pub fn largest_admissible_prime(report: &LowerBoundReport) -> Option<u64> {
    largest_prime_below(&report.p_bound.lo)
}

pub fn largest_prime_below(bound: &Rational) -> Option<u64> {
    if bound <= &int(2) {
        return None;
    }
    let floor = bound.floor();
    let below = if &floor == bound { floor - Rational::one() } else { floor };
    prev_prime(below.to_integer().to_u64().unwrap_or(u64::MAX))
}

/// `v_i = (1, i, …, i^(n-1))` for `0 <= i < p`, followed by `v_∞ = e_n`.
pub fn moment_curve(p: u64, n: usize) -> Result<Vec<Vec<i64>>> {
    let mut pts = Vec::with_capacity(p as usize + 1);
    for i in 0..p {
        let i = i64::try_from(i).map_err(|_| Error::Overflow("moment curve"))?;
        let row = (0..n as u32)
            .map(|k| i.checked_pow(k).ok_or(Error::Overflow("moment curve")))
            .collect::<Result<Vec<_>>>()?;
        pts.push(row);
    }
    let mut inf = vec![0; n];
    inf[n - 1] = 1;
    pts.push(inf);
    Ok(pts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lift {
    /// Index on the moment curve; `None` is the point at infinity `e_n`.
    pub curve_index: Option<u64>,
    pub j: u64,
    pub w: Vec<i64>,
    pub point: Vec<i64>,
}

/// First `(j, w)` in `(j, lex w)` order with `j·v + p·w ∈ C`.
pub fn lemma_lift(body: &Body, v: &[i64], p: u64) -> Result<Lift> {
    let n = body.dim();
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v.len() });
    }
    if p < 2 {
        return Err(Error::NotPrime(p));
    }
    let one = Rational::one();
    let bounds = body.bounding_box(&one).bounds;
    let dilate = body.dilate(&one);
    let pi = p as i128;
    // work with v mod p; the reachable set j·v + pZⁿ is the same
    let vr: Vec<i128> = v.iter().map(|&x| (x as i128).rem_euclid(pi)).collect();
    let mut point = vec![0i64; n];
    for j in 1..p {
        let c: Vec<i128> = vr.iter().map(|&x| j as i128 * x).collect();
        let ranges: Vec<(i128, i128)> = c
            .iter()
            .zip(&bounds)
            .map(|(&ck, &m)| {
                let m = m as i128;
                ((-m - ck).div_euclid(pi) + ((-m - ck).rem_euclid(pi) != 0) as i128, (m - ck).div_euclid(pi))
            })
            .collect();
        if ranges.iter().any(|(lo, hi)| lo > hi) {
            continue;
        }
        let mut w: Vec<i128> = ranges.iter().map(|r| r.0).collect();
        loop {
            for k in 0..n {
                point[k] = (c[k] + pi * w[k]) as i64;
            }
            if dilate.contains(&point) {
                let w = point
                    .iter()
                    .zip(v)
                    .map(|(&x, &vk)| {
                        let num = x as i128 - j as i128 * vk as i128;
                        debug_assert_eq!(num % pi, 0);
                        i64::try_from(num / pi).map_err(|_| Error::Overflow("lift shift"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                return Ok(Lift { curve_index: None, j, w, point: point.clone() });
            }
            let mut k = n;
            let advanced = loop {
                if k == 0 {
                    break false;
                }
                k -= 1;
                if w[k] < ranges[k].1 {
                    w[k] += 1;
                    break true;
                }
                w[k] = ranges[k].0;
            };
            if !advanced {
                break;
            }
        }
    }
    Err(Error::NoLiftFound { v: v.to_vec(), p })
}

/// `p + 1` lattice points of a body, `n`-wise linearly independent, with the
/// lifting data that proves it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenPosCertificate {
    pub p: u64,
    pub body: Body,
    pub lifts: Vec<Lift>,
}

impl GenPosCertificate {
    pub fn points(&self) -> Vec<Vec<i64>> {
        self.lifts.iter().map(|l| l.point.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.lifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lifts.is_empty()
    }

    /// Re-checks every invariant from scratch.
    pub fn verify(&self) -> Result<()> {
        let n = self.body.dim();
        let curve = moment_curve(self.p, n)?;
        let fail = |msg: String| Err(Error::CertificateInvalid(msg));
        if self.lifts.len() != curve.len() {
            return fail(format!("{} lifts for {} curve points", self.lifts.len(), curve.len()));
        }
        for (idx, lift) in self.lifts.iter().enumerate() {
            let expected_index = (idx < self.p as usize).then_some(idx as u64);
            if lift.curve_index != expected_index {
                return fail(format!("lift {idx} has curve index {:?}", lift.curve_index));
            }
            if lift.j == 0 || lift.j >= self.p {
                return fail(format!("multiplier {} out of range", lift.j));
            }
            let v = &curve[idx];
            let ok = (0..n).all(|k| {
                lift.point[k] as i128 == lift.j as i128 * v[k] as i128 + self.p as i128 * lift.w[k] as i128
            });
            if !ok {
                return fail(format!("point {:?} is not j·v + p·w", lift.point));
            }
            if !self.body.gauge_int(&lift.point)?.le_rational(&Rational::one()) {
                return fail(format!("point {:?} lies outside the body", lift.point));
            }
        }
        if !verify_general_position(&self.points(), n) {
            return fail("points are not in general position".into());
        }
        Ok(())
    }
}

/// Lifts the moment curve for the largest admissible prime.
pub fn build_general_position(body: &Body) -> Result<GenPosCertificate> {
    let profile = successive_minima(body)?;
    let lambda_n = profile.last().ok_or(Error::MinimaNotComputed)?;
    if lambda_n.square() >= Rational::one() {
        return Err(Error::NoAdmissiblePrime(format!("0 (λ_n = {lambda_n})")));
    }
    let report = lower_bound(&profile)?;
    let p = largest_admissible_prime(&report).ok_or_else(|| Error::NoAdmissiblePrime(report.p_bound.to_string()))?;
    build_general_position_with_prime(body, p)
}

/// Lifts the moment curve for a caller-chosen prime. Fails with
/// `NoLiftFound` if some point has no lift, which cannot happen for an
/// admissible prime.
pub fn build_general_position_with_prime(body: &Body, p: u64) -> Result<GenPosCertificate> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let curve = moment_curve(p, body.dim())?;
    let lifts = curve
        .par_iter()
        .enumerate()
        .map(|(i, v)| {
            let mut lift = lemma_lift(body, v, p)?;
            lift.curve_index = (i < p as usize).then_some(i as u64);
            Ok(lift)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GenPosCertificate { p, body: body.clone(), lifts })
}

const CHECK_PRIME: u64 = (1 << 61) - 1;

fn independent(rows: &[&[i64]]) -> bool {
    linalg::det_mod(rows, CHECK_PRIME) != 0 || !linalg::det(rows).is_zero()
}

/// Whether every `n`-subset of `points` is linearly independent. A nonzero
/// determinant mod a large prime settles a subset; otherwise the exact
/// determinant decides.
pub fn verify_general_position(points: &[Vec<i64>], n: usize) -> bool {
    if points.iter().any(|p| p.len() != n) {
        return false;
    }
    let k = points.len();
    if k < n {
        return true;
    }
    if points.iter().any(|p| p.iter().all(|&x| x == 0)) {
        return false;
    }
    (0..k).into_par_iter().all(|i| {
        (i + 1..k).combinations(n - 1).all(|rest| {
            let rows: Vec<&[i64]> =
                std::iter::once(points[i].as_slice()).chain(rest.iter().map(|&r| points[r].as_slice())).collect();
            independent(&rows)
        })
    })
}

impl LowerBoundReport {
    /// Whether a certificate of `size` points beats the evaluated bound.
    pub fn exceeded_by(&self, size: usize) -> bool {
        int(size as i64) > self.bound.hi
    }
}
