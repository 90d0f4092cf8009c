//! Hyperplanes through the origin spanned by lattice points of `rBⁿ`, their
//! average lattice-point load, and `λ_1` statistics of the lattices `L(v)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, ToPrimitive};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cover::Hyperplane;
use crate::error::{Error, Result};
use crate::geometry::{Body, GaugeValue};
use crate::lattice::{enumerate_points, minima_of_sublattice, orthogonal_lattice, Budget};
use crate::linalg;
use crate::rational::{int, ser_rational, to_decimal, to_f64, Rational};

const MAX_DIM: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusReport {
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub r: Rational,
    pub h_count: u64,
    pub point_count: u64,
    #[serde(serialize_with = "ser_rational")]
    pub s_r: Rational,
    /// `h_count / r^(n(n-1))`.
    pub ratio: f64,
}

fn check_args(n: usize, r: &Rational) -> Result<()> {
    if !(2..=MAX_DIM).contains(&n) {
        return Err(Error::DimensionOutOfRange(n));
    }
    if *r < Rational::one() {
        return Err(Error::InvalidBody(format!("radius {r} < 1")));
    }
    Ok(())
}

/// Lattice points of `rBⁿ`, origin included, in lexicographic order.
pub fn ball_points(n: usize, r: &Rational) -> Result<Vec<Vec<i64>>> {
    enumerate_points(&Body::ball(n, r.clone())?, &Rational::one())
}

/// A primitive direction up to sign together with the number of nonzero
/// ball points on its line, `2⌊r/|d|⌋`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Direction {
    d: Vec<i64>,
    weight: u64,
}

fn directions(points: &[Vec<i64>], r: &Rational) -> Vec<Direction> {
    let r2 = r * r;
    let dirs: BTreeSet<Vec<i64>> = points.iter().filter_map(|p| linalg::canonical_primitive(p)).collect();
    dirs.into_iter()
        .map(|d| {
            let q = (&r2 / Rational::from_integer(BigInt::from(linalg::norm_sq(&d)))).floor().to_integer();
            let j = q.sqrt().to_u64().expect("multiplicity fits u64");
            Direction { d, weight: 2 * j }
        })
        .collect()
}

fn direction_refs(dirs: &[Direction]) -> Vec<&[i64]> {
    dirs.iter().map(|d| d.d.as_slice()).collect()
}

pub(crate) fn combinations_count(n: u128, k: u32) -> u128 {
    (0..k as u128).fold(1u128, |acc, i| acc.saturating_mul(n.saturating_sub(i)) / (i + 1))
}

/// Every hyperplane of `H_r` with the number of lattice points of `rBⁿ` it
/// contains (origin included), sorted by normal.
fn hyperplane_loads(n: usize, r: &Rational, points: &[Vec<i64>], budget: &Budget) -> Result<Vec<(Hyperplane, u64)>> {
    let dirs = directions(points, r);
    match n {
        2 => Ok(dirs
            .iter()
            .map(|dir| {
                let h = Hyperplane::spanned_by(&[dir.d.as_slice()]).expect("nonzero direction");
                (h, 1 + dir.weight)
            })
            .collect::<BTreeMap<_, _>>()
            .into_iter()
            .collect()),
        3 => {
            budget.check(combinations_count(dirs.len() as u128, 2))?;
            // per hyperplane: number of direction pairs and the sum of their weights
            let bins: HashMap<Hyperplane, (u64, u64)> = (0..dirs.len())
                .into_par_iter()
                .fold(HashMap::new, |mut acc: HashMap<Hyperplane, (u64, u64)>, i| {
                    for j in i + 1..dirs.len() {
                        let h = Hyperplane::spanned_by(&[&dirs[i].d, &dirs[j].d]).expect("distinct directions");
                        let e = acc.entry(h).or_default();
                        e.0 += 1;
                        e.1 += dirs[i].weight + dirs[j].weight;
                    }
                    acc
                })
                .reduce(HashMap::new, |a, b| if a.len() < b.len() { merge_bins(b, a) } else { merge_bins(a, b) });
            let mut out: Vec<(Hyperplane, u64)> = bins
                .into_iter()
                .map(|(h, (pairs, weights))| {
                    // pairs = k(k-1)/2 for the k directions on h; each weight appears k-1 times
                    let k = (1 + 8 * pairs).sqrt().div_ceil(2);
                    debug_assert_eq!(k * (k - 1) / 2, pairs);
                    (h, 1 + weights / (k - 1))
                })
                .collect();
            out.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
            Ok(out)
        }
        _ => {
            budget.check(combinations_count(dirs.len() as u128, (n - 1) as u32))?;
            let hyperplanes = spanned_hyperplanes(&direction_refs(&dirs), n);
            Ok(loads_by_scan(&hyperplanes, points))
        }
    }
}

fn merge_bins(mut a: HashMap<Hyperplane, (u64, u64)>, b: HashMap<Hyperplane, (u64, u64)>) -> HashMap<Hyperplane, (u64, u64)> {
    for (h, (c, w)) in b {
        let e = a.entry(h).or_default();
        e.0 += c;
        e.1 += w;
    }
    a
}

/// Hyperplanes spanned by `n - 1` independent vectors among `dirs`, any `n`,
/// sorted by normal.
pub(crate) fn spanned_hyperplanes(dirs: &[&[i64]], n: usize) -> Vec<Hyperplane> {
    let found: BTreeSet<Hyperplane> = (0..dirs.len())
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut local = BTreeSet::new();
            let mut idx: Vec<usize> = (first..first + n - 1).collect();
            if idx[n - 2] < dirs.len() {
                loop {
                    let rows: Vec<&[i64]> = idx.iter().map(|&i| dirs[i]).collect();
                    if let Some(h) = Hyperplane::spanned_by(&rows) {
                        local.insert(h);
                    }
                    // advance indices 1.. in lex order, first index fixed
                    let mut pos = n - 2;
                    while pos > 0 && idx[pos] == dirs.len() - (n - 1 - pos) {
                        pos -= 1;
                    }
                    if pos == 0 {
                        break;
                    }
                    idx[pos] += 1;
                    for q in pos + 1..n - 1 {
                        idx[q] = idx[q - 1] + 1;
                    }
                }
            }
            local
        })
        .collect();
    found.into_iter().collect()
}

/// Load of each hyperplane counted directly against the point list.
fn loads_by_scan(hyperplanes: &[Hyperplane], points: &[Vec<i64>]) -> Vec<(Hyperplane, u64)> {
    hyperplanes
        .par_iter()
        .map(|h| (h.clone(), points.iter().filter(|p| h.contains(p)).count() as u64))
        .collect()
}

/// `H_r`, sorted by normal.
pub fn enumerate_hyperplanes(n: usize, r: &Rational) -> Result<Vec<Hyperplane>> {
    check_args(n, r)?;
    let points = ball_points(n, r)?;
    Ok(hyperplane_loads(n, r, &points, &Budget::from_env())?.into_iter().map(|(h, _)| h).collect())
}

/// `H_r` found by trying every `(n-1)`-subset of directions, with loads
/// counted by scanning the points. Slow; used to cross-check [`census`].
pub fn census_by_scan(n: usize, r: &Rational) -> Result<CensusReport> {
    check_args(n, r)?;
    let points = ball_points(n, r)?;
    let dirs = directions(&points, r);
    Budget::from_env().check(combinations_count(dirs.len() as u128, (n - 1) as u32))?;
    let loads = loads_by_scan(&spanned_hyperplanes(&direction_refs(&dirs), n), &points);
    Ok(report(n, r, points.len(), &loads))
}

pub fn census(n: usize, r: &Rational) -> Result<CensusReport> {
    census_with(n, r, &Budget::from_env())
}

pub fn census_with(n: usize, r: &Rational, budget: &Budget) -> Result<CensusReport> {
    check_args(n, r)?;
    let points = ball_points(n, r)?;
    let loads = hyperplane_loads(n, r, &points, budget)?;
    Ok(report(n, r, points.len(), &loads))
}

fn report(n: usize, r: &Rational, point_count: usize, loads: &[(Hyperplane, u64)]) -> CensusReport {
    let h_count = loads.len() as u64;
    let total: u64 = loads.iter().map(|(_, l)| l).sum();
    let s_r = if h_count == 0 { int(0) } else { Rational::new(total.into(), h_count.into()) };
    let ratio = h_count as f64 / to_f64(r).powi((n * (n - 1)) as i32);
    CensusReport { n, r: r.clone(), h_count, point_count: point_count as u64, s_r, ratio }
}

/// Both sides of `Σ_H |H ∩ rBⁿ ∩ Zⁿ| = |H_r| + Σ_{v≠0} #{H ∈ H_r : v ∈ H}`,
/// the left summed hyperplane by hyperplane, the right point by point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub lhs: u64,
    pub h_count: u64,
    pub incidences: u64,
    pub rhs: u64,
}

impl Decomposition {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn decomposition(n: usize, r: &Rational) -> Result<Decomposition> {
    let hyperplanes = enumerate_hyperplanes(n, r)?;
    let points = ball_points(n, r)?;
    let lhs: u64 = hyperplanes
        .par_iter()
        .map(|h| points.iter().filter(|p| h.contains(p)).count() as u64)
        .sum();
    let incidences: u64 = points
        .par_iter()
        .filter(|p| p.iter().any(|&c| c != 0))
        .map(|p| hyperplanes.iter().filter(|h| h.contains(p)).count() as u64)
        .sum();
    let h_count = hyperplanes.len() as u64;
    Ok(Decomposition { lhs, h_count, incidences, rhs: h_count + incidences })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Smallest accepted ratio between the largest and smallest radius.
pub const MIN_SPAN: f64 = 2.0;

/// Least-squares line through `(ln x, ln y)`. Needs at least 4 samples with
/// `max x >= MIN_SPAN · min x`.
pub fn fit_loglog(samples: &[(f64, f64)]) -> Result<LogLogFit> {
    if samples.len() < 4 {
        return Err(Error::InsufficientData(format!("{} samples, need 4", samples.len())));
    }
    let lo = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    if !(lo > 0.0 && hi >= MIN_SPAN * lo) {
        return Err(Error::InsufficientData(format!("radii span [{lo}, {hi}] is less than a factor {MIN_SPAN}")));
    }
    if samples.iter().any(|s| s.1 <= 0.0) {
        return Err(Error::InsufficientData("nonpositive count".into()));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    Ok(LogLogFit { slope, intercept: my - slope * mx })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub n: usize,
    pub reports: Vec<CensusReport>,
    pub fit: LogLogFit,
    /// The exponent `n(n-1)`.
    pub expected_slope: usize,
}

pub fn scaling_fit(n: usize, radii: &[Rational]) -> Result<ScalingReport> {
    let samples: Vec<(f64, f64)> = radii.iter().map(|r| (to_f64(r), 1.0)).collect();
    fit_loglog(&samples)?;
    let reports = radii.iter().map(|r| census(n, r)).collect::<Result<Vec<_>>>()?;
    let samples: Vec<(f64, f64)> = reports.iter().map(|c| (to_f64(&c.r), c.h_count as f64)).collect();
    Ok(ScalingReport { n, fit: fit_loglog(&samples)?, reports, expected_slope: n * (n - 1) })
}

/// `ω_n`, the volume of the unit ball, enclosed by rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitBallVolume {
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub lo: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub hi: Rational,
    pub decimal: String,
}

const PI_DIGITS: &str = "314159265358979323846264338327950288419716939937510";

fn pi_bounds() -> (Rational, Rational) {
    let scale = num_traits::pow(BigInt::from(10), PI_DIGITS.len() - 1);
    let num: BigInt = PI_DIGITS.parse().unwrap();
    (Rational::new(num.clone(), scale.clone()), Rational::new(num + 1, scale))
}

fn factorial(k: usize) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

fn omega_at(n: usize, pi: &Rational) -> Rational {
    let k = n / 2;
    if n.is_multiple_of(2) {
        num_traits::pow(pi.clone(), k) / Rational::from_integer(factorial(k))
    } else {
        num_traits::pow(pi * int(4), k) * Rational::from_integer(factorial(k) * 2) / Rational::from_integer(factorial(2 * k + 1))
    }
}

pub fn unit_ball_volume(n: usize) -> UnitBallVolume {
    let (pi_lo, pi_hi) = pi_bounds();
    let lo = omega_at(n, &pi_lo);
    let hi = omega_at(n, &pi_hi);
    UnitBallVolume { n, decimal: to_decimal(&lo, 36), lo, hi }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimSample {
    pub v: Vec<i64>,
    #[serde(serialize_with = "ser_rational")]
    pub lambda1_sq: Rational,
    /// `λ_1(v)² ⋯ λ_(n-1)(v)²`.
    #[serde(serialize_with = "ser_rational")]
    pub product_sq: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quantiles {
    #[serde(serialize_with = "ser_rational")]
    pub min: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub q1: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub median: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub q3: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub max: Rational,
}

impl Quantiles {
    /// Nearest-rank quantiles of a sorted nonempty slice.
    fn of_sorted(v: &[Rational]) -> Quantiles {
        let at = |p: usize| v[((p * v.len()).div_ceil(100)).max(1) - 1].clone();
        Quantiles { min: v[0].clone(), q1: at(25), median: at(50), q3: at(75), max: v[v.len() - 1].clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimStats {
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub rho: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub t: Rational,
    /// Primitive `v` with `|v| <= ρ`, one per sign pair.
    pub population: usize,
    pub seed: Option<u64>,
    pub samples: Vec<ClaimSample>,
    pub quantiles: Quantiles,
    /// Samples with `λ_1(v) >= t`.
    pub exceed_count: usize,
    /// Samples violating `λ_1(v)⋯λ_(n-1)(v) ω_(n-1) <= 2^(n-1) |v|`.
    pub minkowski_violations: Vec<Vec<i64>>,
}

/// Primitive vectors of norm at most `ρ` with first nonzero coordinate
/// positive, in lexicographic order.
pub fn primitive_vectors(n: usize, rho: &Rational) -> Result<Vec<Vec<i64>>> {
    Ok(ball_points(n, rho)?
        .into_iter()
        .filter(|v| linalg::gcd_all(v) == 1 && linalg::canonical_primitive(v).as_ref() == Some(v))
        .collect())
}

pub fn claim_sample(v: &[i64]) -> Result<ClaimSample> {
    let minima = minima_of_sublattice(&orthogonal_lattice(v)?)?;
    Ok(ClaimSample {
        v: v.to_vec(),
        lambda1_sq: minima[0].square(),
        product_sq: minima.iter().map(GaugeValue::square).product(),
    })
}

/// Minkowski's bound on `L(v)`, squared and checked with the upper end of
/// `ω_(n-1)`: `∏λ_i² · ω² <= 4^(n-1) |v|²`.
pub fn minkowski_holds(sample: &ClaimSample, omega_hi: &Rational) -> bool {
    let n = sample.v.len();
    let rhs = Rational::from_integer(num_traits::pow(BigInt::from(4), n - 1) * BigInt::from(linalg::norm_sq(&sample.v)));
    &sample.product_sq * omega_hi * omega_hi <= rhs
}

/// `λ_1(v)` statistics over primitive `|v| <= ρ`, or over `count` of them
/// drawn without replacement when `sample = Some((count, seed))`.
pub fn claim_stats(n: usize, rho: &Rational, t: &Rational, sample_spec: Option<(usize, u64)>) -> Result<ClaimStats> {
    check_args(n, rho)?;
    let population = primitive_vectors(n, rho)?;
    let chosen: Vec<&Vec<i64>> = match sample_spec {
        Some((count, seed)) if count < population.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut idx = sample(&mut rng, population.len(), count).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| &population[i]).collect()
        }
        _ => population.iter().collect(),
    };
    let samples = chosen.par_iter().map(|v| claim_sample(v)).collect::<Result<Vec<_>>>()?;
    let mut values: Vec<Rational> = samples.iter().map(|s| s.lambda1_sq.clone()).collect();
    values.sort();
    let t_sq = t * t;
    let omega_hi = unit_ball_volume(n - 1).hi;
    let minkowski_violations = samples.iter().filter(|s| !minkowski_holds(s, &omega_hi)).map(|s| s.v.clone()).collect();
    Ok(ClaimStats {
        n,
        rho: rho.clone(),
        t: t.clone(),
        population: population.len(),
        seed: sample_spec.map(|s| s.1),
        exceed_count: values.iter().filter(|x| **x >= t_sq).count(),
        quantiles: Quantiles::of_sorted(&values),
        samples,
        minkowski_violations,
    })
}
