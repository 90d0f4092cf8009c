//! Lattice-point enumeration in dilates of a body, successive minima with
//! witnesses, and orthogonal sublattices `Zⁿ ∩ v^⊥`.

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Body, GaugeValue};
use crate::linalg::{self, IncrementalBasis};
use crate::rational::{int, Rational};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const BUDGET_ENV: &str = "LATTICE_COVER_BUDGET";

/// Cap on the number of grid points a single enumeration may scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_grid_points: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_grid_points: DEFAULT_BUDGET }
    }
}

impl Budget {
    pub fn new(max_grid_points: u64) -> Self {
        Budget { max_grid_points }
    }

    /// The default budget, overridden by `LATTICE_COVER_BUDGET` when set.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Budget::new)
            .unwrap_or_default()
    }

    pub fn check(&self, requested: u128) -> Result<()> {
        if requested > self.max_grid_points as u128 {
            Err(Error::EnumerationBudgetExceeded { requested, cap: self.max_grid_points })
        } else {
            Ok(())
        }
    }
}

/// All `x ∈ Zⁿ` with `gauge(x) <= t`, in lexicographic order.
pub fn enumerate_points(body: &Body, t: &Rational) -> Result<Vec<Vec<i64>>> {
    enumerate_points_with(body, t, &Budget::from_env())
}

pub fn enumerate_points_with(body: &Body, t: &Rational, budget: &Budget) -> Result<Vec<Vec<i64>>> {
    assert!(t.is_positive(), "dilation factor must be positive");
    let bbox = body.bounding_box(t);
    budget.check(bbox.volume())?;
    let dilate = body.dilate(t);
    let m = &bbox.bounds;
    let n = m.len();
    // partition on the first coordinate; rayon's ordered collect keeps the
    // lexicographic order independent of the thread count
    let slices: Vec<Vec<Vec<i64>>> = (-m[0]..=m[0])
        .into_par_iter()
        .map(|x0| {
            let mut out = Vec::new();
            let mut x: Vec<i64> = std::iter::once(x0).chain(m[1..].iter().map(|&b| -b)).collect();
            loop {
                if dilate.contains(&x) {
                    out.push(x.clone());
                }
                // odometer over coordinates 1..n
                let mut k = n - 1;
                loop {
                    if k == 0 {
                        return out;
                    }
                    if x[k] < m[k] {
                        x[k] += 1;
                        break;
                    }
                    x[k] = -m[k];
                    k -= 1;
                }
            }
        })
        .collect();
    Ok(slices.into_iter().flatten().collect())
}

/// Successive minima `λ_1 <= … <= λ_n` together with linearly independent
/// integer witnesses `v_i` with `gauge(v_i) = λ_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimaProfile {
    #[serde(rename = "lambda")]
    pub minima: Vec<GaugeValue>,
    pub witnesses: Vec<Vec<i64>>,
}

impl MinimaProfile {
    pub fn dim(&self) -> usize {
        self.minima.len()
    }

    pub fn last(&self) -> Option<&GaugeValue> {
        self.minima.last()
    }
}

pub fn successive_minima(body: &Body) -> Result<MinimaProfile> {
    successive_minima_with(body, &Budget::from_env())
}

/// Enumerates growing dilates `tC` (t doubling from the smallest unit-vector
/// gauge) and greedily extends an independent set in order of exact gauge.
/// Once the points of `tC` have full rank, every point with gauge at most
/// `λ_n` has been seen, so the greedy choice is exact.
pub fn successive_minima_with(body: &Body, budget: &Budget) -> Result<MinimaProfile> {
    let n = body.dim();
    let unit_gauges: Vec<GaugeValue> = (0..n)
        .map(|i| {
            let mut e = vec![0i64; n];
            e[i] = 1;
            body.gauge_int(&e)
        })
        .collect::<Result<_>>()?;
    // at t = max gauge(e_i) the unit vectors alone have full rank
    let t_max = unit_gauges.iter().max().unwrap().upper_rational();
    let mut t = unit_gauges.iter().min().unwrap().upper_rational();
    loop {
        let points = enumerate_points_with(body, &t, budget)?;
        let mut scored: Vec<(GaugeValue, Vec<i64>)> = points
            .into_iter()
            .filter(|x| x.iter().any(|&c| c != 0))
            .map(|x| Ok((body.gauge_int(&x)?, x)))
            .collect::<Result<_>>()?;
        scored.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        let mut basis = IncrementalBasis::new(n);
        let mut profile = MinimaProfile { minima: Vec::with_capacity(n), witnesses: Vec::with_capacity(n) };
        for (g, x) in scored {
            if basis.insert(&x) {
                profile.minima.push(g);
                profile.witnesses.push(x);
                if basis.is_full() {
                    return Ok(profile);
                }
            }
        }
        if t >= t_max {
            unreachable!("unit vectors lie in the dilate at t = max gauge(e_i)");
        }
        t = (&t * int(2)).min(t_max.clone());
    }
}

/// Whether the gcd of the coordinates is 1.
pub fn is_primitive(v: &[i64]) -> Result<bool> {
    match linalg::gcd_all(v) {
        0 => Err(Error::ZeroVector),
        g => Ok(g == 1),
    }
}

/// The `(n-1)`-dimensional lattice `Zⁿ ∩ v^⊥` of a primitive `v`, with an
/// LLL-reduced basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalLattice {
    pub v: Vec<i64>,
    pub basis: Vec<Vec<i64>>,
    /// Squared determinant, equal to `|v|²`.
    pub det_sq: i128,
}

impl OrthogonalLattice {
    pub fn gram(&self) -> Vec<Vec<i64>> {
        linalg::gram(&self.basis)
    }

    pub fn gram_det(&self) -> BigInt {
        let g = self.gram();
        let refs: Vec<&[i64]> = g.iter().map(|r| r.as_slice()).collect();
        linalg::det(&refs)
    }
}

pub fn orthogonal_lattice(v: &[i64]) -> Result<OrthogonalLattice> {
    if !is_primitive(v)? {
        return Err(Error::NotPrimitive(v.to_vec()));
    }
    let kernel = linalg::kernel_of_primitive(v)?;
    let basis = linalg::lll_reduce(&kernel);
    let lat = OrthogonalLattice { v: v.to_vec(), basis, det_sq: linalg::norm_sq(v) };
    debug_assert_eq!(lat.gram_det(), BigInt::from(lat.det_sq));
    Ok(lat)
}

/// Euclidean successive minima of `L(v)`, computed as the minima of the
/// quadratic form `yᵀGy` on `Z^(n-1)` where `G` is the Gram matrix.
pub fn minima_of_sublattice(lat: &OrthogonalLattice) -> Result<Vec<GaugeValue>> {
    Ok(sublattice_profile(lat)?.minima)
}

/// Like [`minima_of_sublattice`], with witnesses mapped back into `Zⁿ`.
pub fn sublattice_profile(lat: &OrthogonalLattice) -> Result<MinimaProfile> {
    if lat.basis.len() == 1 {
        let b = lat.basis[0].clone();
        return Ok(MinimaProfile {
            minima: vec![GaugeValue::SqrtRational(Rational::from_integer(linalg::norm_sq(&b).into()))],
            witnesses: vec![b],
        });
    }
    let form = Body::ellipsoid_from_ints(&lat.gram())?;
    let profile = successive_minima(&form)?;
    let n = lat.v.len();
    let witnesses = profile
        .witnesses
        .iter()
        .map(|y| {
            (0..n)
                .map(|k| y.iter().zip(&lat.basis).map(|(&c, b)| c * b[k]).sum())
                .collect()
        })
        .collect();
    Ok(MinimaProfile { minima: profile.minima, witnesses })
}
