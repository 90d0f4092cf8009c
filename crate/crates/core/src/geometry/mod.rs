//! Origin-symmetric convex bodies with exact gauge and support functions.

mod descriptor;
mod gauge_value;

pub use descriptor::BodyDescriptor;
pub use gauge_value::GaugeValue;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{int, Rational};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Ball,
    Ellipsoid,
    Box,
    CrossPolytope,
    HPolytope,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Ball => "ball",
            Family::Ellipsoid => "ellipsoid",
            Family::Box => "box",
            Family::CrossPolytope => "crosspolytope",
            Family::HPolytope => "hpolytope",
        }
    }

    pub fn is_polyhedral(self) -> bool {
        matches!(self, Family::Box | Family::CrossPolytope | Family::HPolytope)
    }
}

/// One slab `|a·x| <= b` of an H-polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slab {
    pub normal: Vec<Rational>,
    pub bound: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Ball { radius: Rational },
    /// `{x : xᵀAx <= 1}`; the inverse is cached for the support function.
    Ellipsoid { matrix: Vec<Vec<Rational>>, inverse: Vec<Vec<Rational>> },
    Box { half_widths: Vec<Rational> },
    CrossPolytope { scales: Vec<Rational> },
    HPolytope { slabs: Vec<Slab> },
}

/// A compact convex body, symmetric about the origin with the origin in its
/// interior. Immutable once constructed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "BodyDescriptor", try_from = "BodyDescriptor")]
pub struct Body {
    dim: usize,
    shape: Shape,
}

fn check_dim(dim: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange(dim))
    }
}

fn check_positive(what: &str, values: &[Rational]) -> Result<()> {
    match values.iter().find(|q| !q.is_positive()) {
        Some(q) => Err(Error::InvalidBody(format!("{what} must be positive, got {q}"))),
        None => Ok(()),
    }
}

impl Body {
    pub fn ball(dim: usize, radius: Rational) -> Result<Body> {
        check_dim(dim)?;
        check_positive("radius", std::slice::from_ref(&radius))?;
        Ok(Body { dim, shape: Shape::Ball { radius } })
    }

    /// `{x : xᵀAx <= 1}` for a symmetric positive-definite rational `A`.
    pub fn ellipsoid(matrix: Vec<Vec<Rational>>) -> Result<Body> {
        let dim = matrix.len();
        check_dim(dim)?;
        if matrix.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidBody("ellipsoid matrix must be square".into()));
        }
        for i in 0..dim {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::InvalidBody("ellipsoid matrix must be symmetric".into()));
                }
            }
        }
        // Sylvester's criterion on leading principal minors
        for k in 1..=dim {
            let lead: Vec<Vec<Rational>> = matrix[..k].iter().map(|r| r[..k].to_vec()).collect();
            if !linalg::det_rational(&lead).is_positive() {
                return Err(Error::InvalidBody("ellipsoid matrix must be positive definite".into()));
            }
        }
        let inverse = linalg::invert_rational(&matrix).expect("positive definite matrix is invertible");
        Ok(Body { dim, shape: Shape::Ellipsoid { matrix, inverse } })
    }

    pub fn ellipsoid_from_ints(matrix: &[Vec<i64>]) -> Result<Body> {
        Body::ellipsoid(matrix.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    /// The box `∏ [-h_i, h_i]`.
    pub fn axis_box(half_widths: Vec<Rational>) -> Result<Body> {
        let dim = half_widths.len();
        check_dim(dim)?;
        check_positive("half-widths", &half_widths)?;
        Ok(Body { dim, shape: Shape::Box { half_widths } })
    }

    /// `conv{±s_i e_i}`.
    pub fn cross_polytope(scales: Vec<Rational>) -> Result<Body> {
        let dim = scales.len();
        check_dim(dim)?;
        check_positive("scales", &scales)?;
        Ok(Body { dim, shape: Shape::CrossPolytope { scales } })
    }

    /// `{x : |a_i·x| <= b_i for all i}`; the normals must span the space so
    /// that the body is bounded.
    pub fn h_polytope(slabs: Vec<Slab>) -> Result<Body> {
        let dim = slabs.first().map(|s| s.normal.len()).unwrap_or(0);
        check_dim(dim)?;
        if slabs.iter().any(|s| s.normal.len() != dim) {
            return Err(Error::InvalidBody("slab normals must share one dimension".into()));
        }
        check_positive("slab bounds", &slabs.iter().map(|s| s.bound.clone()).collect::<Vec<_>>())?;
        let scaled: Vec<Vec<i64>> = slabs
            .iter()
            .map(|s| scale_to_integers(&s.normal).ok_or(Error::Overflow("slab normal")))
            .collect::<Result<_>>()?;
        if linalg::rank(&scaled) < dim {
            return Err(Error::InvalidBody("slab normals do not span; body is unbounded".into()));
        }
        Ok(Body { dim, shape: Shape::HPolytope { slabs } })
    }

    /// `[-x, x]^(n-1) × [-1, 1]`.
    pub fn flat_box(dim: usize, x: Rational) -> Result<Body> {
        let mut h = vec![x; dim.saturating_sub(1)];
        h.push(Rational::one());
        Body::axis_box(h)
    }

    /// `conv{±x e_i (i < n), ±e_n}`.
    pub fn flat_cross(dim: usize, x: Rational) -> Result<Body> {
        let mut s = vec![x; dim.saturating_sub(1)];
        s.push(Rational::one());
        Body::cross_polytope(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn family(&self) -> Family {
        match self.shape {
            Shape::Ball { .. } => Family::Ball,
            Shape::Ellipsoid { .. } => Family::Ellipsoid,
            Shape::Box { .. } => Family::Box,
            Shape::CrossPolytope { .. } => Family::CrossPolytope,
            Shape::HPolytope { .. } => Family::HPolytope,
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim, got: len })
        }
    }

    /// The Minkowski functional: `x ∈ tC` iff `gauge(x) <= t`.
    pub fn gauge(&self, x: &[Rational]) -> Result<GaugeValue> {
        self.check_len(x.len())?;
        Ok(match &self.shape {
            Shape::Ball { radius } => GaugeValue::SqrtRational(sum_sq(x) / (radius * radius)),
            Shape::Ellipsoid { matrix, .. } => GaugeValue::SqrtRational(quad_form(matrix, x)),
            Shape::Box { half_widths } => {
                GaugeValue::Rational(x.iter().zip(half_widths).map(|(xi, h)| xi.abs() / h).max().unwrap())
            }
            Shape::CrossPolytope { scales } => {
                GaugeValue::Rational(x.iter().zip(scales).map(|(xi, s)| xi.abs() / s).sum())
            }
            Shape::HPolytope { slabs } => GaugeValue::Rational(
                slabs.iter().map(|s| dot_q(&s.normal, x).abs() / &s.bound).max().unwrap(),
            ),
        })
    }

    pub fn gauge_int(&self, x: &[i64]) -> Result<GaugeValue> {
        self.gauge(&to_rationals(x))
    }

    /// The support function `max_{u ∈ C} u·x`, i.e. the gauge of the polar
    /// body. Not available for H-polytopes.
    pub fn support(&self, x: &[Rational]) -> Result<GaugeValue> {
        self.check_len(x.len())?;
        Ok(match &self.shape {
            Shape::Ball { radius } => GaugeValue::SqrtRational(sum_sq(x) * radius * radius),
            Shape::Ellipsoid { inverse, .. } => GaugeValue::SqrtRational(quad_form(inverse, x)),
            Shape::Box { half_widths } => GaugeValue::Rational(x.iter().zip(half_widths).map(|(xi, h)| xi.abs() * h).sum()),
            Shape::CrossPolytope { scales } => {
                GaugeValue::Rational(x.iter().zip(scales).map(|(xi, s)| xi.abs() * s).max().unwrap())
            }
            Shape::HPolytope { .. } => return Err(Error::UnsupportedFamily("hpolytope")),
        })
    }

    pub fn support_int(&self, x: &[i64]) -> Result<GaugeValue> {
        self.support(&to_rationals(x))
    }

    /// The polar body `C⁰ = {x : u·x <= 1 ∀u ∈ C}`, when it lies in a
    /// representable family.
    pub fn polar(&self) -> Result<Body> {
        let recip = |v: &[Rational]| v.iter().map(|q| q.recip()).collect::<Vec<_>>();
        match &self.shape {
            Shape::Ball { radius } => Body::ball(self.dim, radius.recip()),
            Shape::Ellipsoid { inverse, .. } => Body::ellipsoid(inverse.clone()),
            Shape::Box { half_widths } => Body::cross_polytope(recip(half_widths)),
            Shape::CrossPolytope { scales } => Body::axis_box(recip(scales)),
            Shape::HPolytope { .. } => Err(Error::UnsupportedFamily("hpolytope")),
        }
    }

    /// Per-axis integer bounds `M_i` with `tC ∩ Zⁿ ⊆ ∏[-M_i, M_i]`.
    pub fn bounding_box(&self, t: &Rational) -> IntBox {
        assert!(t.is_positive(), "dilation factor must be positive");
        let floor = |q: Rational| q.floor().to_integer().to_i64().unwrap_or(i64::MAX);
        let bounds = match &self.shape {
            Shape::Ball { radius } => vec![floor(t * radius); self.dim],
            Shape::Box { half_widths } => half_widths.iter().map(|h| floor(t * h)).collect(),
            Shape::CrossPolytope { scales } => scales.iter().map(|s| floor(t * s)).collect(),
            Shape::Ellipsoid { inverse, .. } => (0..self.dim)
                .map(|i| {
                    // max x_i over xᵀAx <= t² is t·sqrt((A⁻¹)_ii); floor(√q) = isqrt(⌊q⌋)
                    let q = (t * t * &inverse[i][i]).floor().to_integer();
                    q.sqrt().to_i64().unwrap_or(i64::MAX)
                })
                .collect(),
            Shape::HPolytope { slabs } => hpolytope_box(self.dim, slabs)
                .into_iter()
                .map(|m| floor(t * m))
                .collect(),
        };
        IntBox { bounds }
    }

    /// The body `{y : Uy ∈ C}` for a unimodular integer matrix `U`. Lattice
    /// invariants (successive minima, g, h) are unchanged.
    pub fn transform(&self, u: &[Vec<i64>]) -> Result<Body> {
        let n = self.dim;
        if u.len() != n || u.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: u.len() });
        }
        let refs: Vec<&[i64]> = u.iter().map(|r| r.as_slice()).collect();
        let d = linalg::det(&refs);
        if d.abs() != BigInt::one() {
            return Err(Error::NonUnimodular(d.to_string()));
        }
        let uq: Vec<Vec<Rational>> = u.iter().map(|r| to_rationals(r)).collect();
        // UᵀMU
        let congruence = |m: &dyn Fn(usize, usize) -> Rational| -> Vec<Vec<Rational>> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let mut acc = Rational::zero();
                            for k in 0..n {
                                for l in 0..n {
                                    acc += &uq[k][i] * m(k, l) * &uq[l][j];
                                }
                            }
                            acc
                        })
                        .collect()
                })
                .collect()
        };
        // a·(Uy) = (Uᵀa)·y
        let pull_back = |a: &[Rational]| -> Vec<Rational> {
            (0..n).map(|j| (0..n).map(|k| &a[k] * &uq[k][j]).sum()).collect()
        };
        match &self.shape {
            Shape::Ball { radius } => {
                let s = (radius * radius).recip();
                Body::ellipsoid(congruence(&|k, l| if k == l { s.clone() } else { Rational::zero() }))
            }
            Shape::Ellipsoid { matrix, .. } => Body::ellipsoid(congruence(&|k, l| matrix[k][l].clone())),
            Shape::Box { half_widths } => Body::h_polytope(
                half_widths
                    .iter()
                    .enumerate()
                    .map(|(i, h)| Slab { normal: pull_back(&unit(n, i)), bound: h.clone() })
                    .collect(),
            ),
            Shape::CrossPolytope { scales } => {
                // Σ|x_i|/s_i = max over sign patterns σ (σ_1 = +1) of Σ σ_i x_i / s_i
                let slabs = (0..n - 1)
                    .map(|_| [1i64, -1])
                    .multi_cartesian_product()
                    .map(|signs| {
                        let mut a = vec![scales[0].recip()];
                        a.extend(signs.iter().zip(&scales[1..]).map(|(&s, sc)| int(s) / sc));
                        Slab { normal: pull_back(&a), bound: Rational::one() }
                    })
                    .collect();
                Body::h_polytope(slabs)
            }
            Shape::HPolytope { slabs } => Body::h_polytope(
                slabs.iter().map(|s| Slab { normal: pull_back(&s.normal), bound: s.bound.clone() }).collect(),
            ),
        }
    }

    /// Membership test for integer points in `tC`, using integer arithmetic
    /// where the parameters allow it.
    pub fn dilate(&self, t: &Rational) -> Dilate<'_> {
        Dilate { body: self, t: t.clone(), test: IntTest::build(self, t) }
    }
}

/// Symmetric integer box `∏[-M_i, M_i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntBox {
    pub bounds: Vec<i64>,
}

impl IntBox {
    /// Number of grid points, saturating.
    pub fn volume(&self) -> u128 {
        self.bounds
            .iter()
            .fold(1u128, |acc, &m| acc.saturating_mul(2 * m.max(0) as u128 + 1))
    }
}

pub struct Dilate<'a> {
    body: &'a Body,
    t: Rational,
    test: Option<IntTest>,
}

impl Dilate<'_> {
    pub fn contains(&self, x: &[i64]) -> bool {
        if let Some(test) = &self.test {
            if let Some(inside) = test.contains(x) {
                return inside;
            }
        }
        self.body.gauge_int(x).map(|g| g.le_rational(&self.t)).unwrap_or(false)
    }
}

/// Integer form of `gauge(x) <= t`; each variant is the original inequality
/// multiplied through by a positive common denominator and floored.
enum IntTest {
    SumSquares(i128),
    Quadratic(Vec<Vec<i128>>, i128),
    Linf(Vec<i128>),
    L1(Vec<i128>, i128),
    Slabs(Vec<(Vec<i128>, i128)>),
}

fn floor_i128(q: &Rational) -> Option<i128> {
    q.floor().to_integer().to_i128()
}

fn lcm_denoms<'a>(qs: impl Iterator<Item = &'a Rational>) -> BigInt {
    qs.fold(BigInt::one(), |l, q| l.lcm(q.denom()))
}

impl IntTest {
    fn build(body: &Body, t: &Rational) -> Option<IntTest> {
        Some(match &body.shape {
            Shape::Ball { radius } => IntTest::SumSquares(floor_i128(&(t * t * radius * radius))?),
            Shape::Ellipsoid { matrix, .. } => {
                let d = Rational::from_integer(lcm_denoms(matrix.iter().flatten()));
                let m = matrix
                    .iter()
                    .map(|r| r.iter().map(|q| (q * &d).to_integer().to_i128()).collect::<Option<Vec<_>>>())
                    .collect::<Option<Vec<_>>>()?;
                IntTest::Quadratic(m, floor_i128(&(t * t * d))?)
            }
            Shape::Box { half_widths } => {
                IntTest::Linf(half_widths.iter().map(|h| floor_i128(&(t * h))).collect::<Option<_>>()?)
            }
            Shape::CrossPolytope { scales } => {
                // Σ|x_i|/s_i <= t  ⇔  Σ|x_i|·(L/s_i) <= tL with L = lcm of numerators
                let l = scales.iter().fold(BigInt::one(), |l, s| l.lcm(s.numer()));
                let lq = Rational::from_integer(l);
                let w = scales
                    .iter()
                    .map(|s| (&lq / s).to_integer().to_i128())
                    .collect::<Option<Vec<_>>>()?;
                IntTest::L1(w, floor_i128(&(t * lq))?)
            }
            Shape::HPolytope { slabs } => IntTest::Slabs(
                slabs
                    .iter()
                    .map(|s| {
                        let d = Rational::from_integer(lcm_denoms(s.normal.iter()));
                        let a = s.normal.iter().map(|q| (q * &d).to_integer().to_i128()).collect::<Option<Vec<_>>>()?;
                        Some((a, floor_i128(&(t * &s.bound * d))?))
                    })
                    .collect::<Option<_>>()?,
            ),
        })
    }

    /// `None` when the integer evaluation overflows.
    fn contains(&self, x: &[i64]) -> Option<bool> {
        match self {
            IntTest::SumSquares(bound) => {
                let mut acc = 0i128;
                for &xi in x {
                    acc = acc.checked_add((xi as i128).checked_mul(xi as i128)?)?;
                }
                Some(acc <= *bound)
            }
            IntTest::Quadratic(m, bound) => {
                let mut acc = 0i128;
                for (i, row) in m.iter().enumerate() {
                    if x[i] == 0 {
                        continue;
                    }
                    let mut r = 0i128;
                    for (a, &xj) in row.iter().zip(x) {
                        r = r.checked_add(a.checked_mul(xj as i128)?)?;
                    }
                    acc = acc.checked_add(r.checked_mul(x[i] as i128)?)?;
                }
                Some(acc <= *bound)
            }
            IntTest::Linf(bounds) => Some(x.iter().zip(bounds).all(|(&xi, &b)| (xi as i128).abs() <= b)),
            IntTest::L1(w, bound) => {
                let mut acc = 0i128;
                for (&xi, wi) in x.iter().zip(w) {
                    acc = acc.checked_add((xi as i128).abs().checked_mul(*wi)?)?;
                }
                Some(acc <= *bound)
            }
            IntTest::Slabs(rows) => {
                for (a, b) in rows {
                    let mut acc = 0i128;
                    for (ai, &xi) in a.iter().zip(x) {
                        acc = acc.checked_add(ai.checked_mul(xi as i128)?)?;
                    }
                    if acc.abs() > *b {
                        return Some(false);
                    }
                }
                Some(true)
            }
        }
    }
}

/// Per-axis extents of an H-polytope at t = 1. Any n independent slabs
/// `|A_S x| <= b_S` give `|x_i| <= Σ_j |(A_S⁻¹)_ij| b_j`; the minimum over
/// subsets is taken when there are few of them.
fn hpolytope_box(dim: usize, slabs: &[Slab]) -> Vec<Rational> {
    const MAX_SUBSETS: usize = 512;
    let subset_count = binomial(slabs.len(), dim);
    let subsets: Vec<Vec<usize>> = if subset_count <= MAX_SUBSETS {
        (0..slabs.len()).combinations(dim).collect()
    } else {
        let ints: Vec<Vec<i64>> = slabs.iter().map(|s| scale_to_integers(&s.normal).unwrap()).collect();
        let mut basis = linalg::IncrementalBasis::new(dim);
        vec![(0..slabs.len()).filter(|&i| basis.insert(&ints[i])).collect()]
    };
    let mut best: Option<Vec<Rational>> = None;
    for s in subsets {
        let a: Vec<Vec<Rational>> = s.iter().map(|&i| slabs[i].normal.clone()).collect();
        let Some(inv) = linalg::invert_rational(&a) else { continue };
        let ext: Vec<Rational> = (0..dim)
            .map(|i| (0..dim).map(|j| inv[i][j].abs() * &slabs[s[j]].bound).sum())
            .collect();
        best = Some(match best {
            None => ext,
            Some(b) => b.into_iter().zip(ext).map(|(x, y)| x.min(y)).collect(),
        });
    }
    best.expect("slab normals span the space")
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()
}

fn scale_to_integers(v: &[Rational]) -> Option<Vec<i64>> {
    let d = Rational::from_integer(lcm_denoms(v.iter()));
    v.iter().map(|q| (q * &d).to_integer().to_i64()).collect()
}

pub fn to_rationals(x: &[i64]) -> Vec<Rational> {
    x.iter().map(|&v| int(v)).collect()
}

fn sum_sq(x: &[Rational]) -> Rational {
    x.iter().map(|v| v * v).sum()
}

fn dot_q(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn quad_form(m: &[Vec<Rational>], x: &[Rational]) -> Rational {
    m.iter().zip(x).map(|(row, xi)| dot_q(row, x) * xi).sum()
}

#[cfg(test)]
mod tests;
