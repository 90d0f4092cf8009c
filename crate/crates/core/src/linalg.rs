//! Integer and rational linear algebra on small dense matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

pub fn norm_sq(a: &[i64]) -> i128 {
    dot(a, a)
}

pub fn gcd_all(v: &[i64]) -> u64 {
    v.iter().fold(0u64, |g, &x| g.gcd(&x.unsigned_abs()))
}

/// Divides out the content and makes the first nonzero entry positive.
/// Returns `None` for the zero vector.
pub fn canonical_primitive(v: &[i64]) -> Option<Vec<i64>> {
    let g = gcd_all(v) as i64;
    if g == 0 {
        return None;
    }
    let sign = if v.iter().find(|&&x| x != 0).copied().unwrap_or(0) < 0 { -1 } else { 1 };
    Some(v.iter().map(|&x| sign * (x / g)).collect())
}

pub(crate) fn canonical_primitive_i128(v: &[i128]) -> Option<Vec<i64>> {
    let g = v.iter().fold(0u128, |g, &x| g.gcd(&x.unsigned_abs()));
    if g == 0 {
        return None;
    }
    let g = g as i128;
    let sign = if v.iter().find(|&&x| x != 0).copied().unwrap_or(0) < 0 { -1 } else { 1 };
    v.iter().map(|&x| i64::try_from(sign * (x / g)).ok()).collect()
}

/// Fraction-free (Bareiss) determinant in `i128`; `None` on overflow.
pub fn det_i128(rows: &[&[i64]]) -> Option<i128> {
    let n = rows.len();
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let swap = (k + 1..n).find(|&i| m[i][k] != 0)?;
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].checked_mul(m[k][k])?.checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                m[i][j] = num / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    Some(sign * m[n - 1][n - 1])
}

pub fn det_big(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = rows.to_vec();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(s) => {
                    m.swap(k, s);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Exact determinant of a square integer matrix.
pub fn det(rows: &[&[i64]]) -> BigInt {
    if rows.is_empty() {
        return BigInt::one();
    }
    // the i128 Bareiss path can hit a zero pivot only through a singular
    // leading block, in which case it reports `None` and we fall back
    if let Some(d) = det_i128(rows) {
        return BigInt::from(d);
    }
    let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    det_big(&big)
}

/// Determinant modulo a prime `p < 2^63`.
pub fn det_mod(rows: &[&[i64]], p: u64) -> u64 {
    let n = rows.len();
    let pm = p as i128;
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| (x as i128).rem_euclid(pm) as u64).collect())
        .collect();
    let mut det: u64 = 1;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| m[i][k] != 0) else {
            return 0;
        };
        if piv != k {
            m.swap(piv, k);
            det = (p - det) % p;
        }
        det = mulmod(det, m[k][k], p);
        let inv = powmod(m[k][k], p - 2, p);
        for i in k + 1..n {
            if m[i][k] == 0 {
                continue;
            }
            let f = mulmod(m[i][k], inv, p);
            for j in k..n {
                let sub = mulmod(f, m[k][j], p);
                m[i][j] = (m[i][j] + p - sub) % p;
            }
        }
    }
    det
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

/// Rank of a set of integer vectors over the rationals.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let mut basis = IncrementalBasis::new(first.len());
    rows.iter().filter(|r| basis.insert(r)).count()
}

/// Row-echelon basis grown one vector at a time; answers "is this vector
/// independent of everything inserted so far".
#[derive(Clone, Debug)]
pub struct IncrementalBasis {
    dim: usize,
    // (pivot column, row) sorted by pivot
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl IncrementalBasis {
    pub fn new(dim: usize) -> Self {
        IncrementalBasis { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    fn reduce(&self, v: &[i64]) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let a = row[*pivot].clone();
            let b = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x = &a * &*x - &b * r;
            }
            let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                v.iter_mut().for_each(|x| *x /= &g);
            }
        }
        v
    }

    pub fn is_independent(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().any(|x| !x.is_zero())
    }

    /// Inserts `v` if it is independent; returns whether it was inserted.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.dim);
        if self.is_full() {
            return false;
        }
        let r = self.reduce(v);
        match r.iter().position(|x| !x.is_zero()) {
            Some(pivot) => {
                let at = self.rows.partition_point(|(p, _)| *p < pivot);
                self.rows.insert(at, (pivot, r));
                true
            }
            None => false,
        }
    }
}

/// Normal vector of the span of `n - 1` vectors in dimension `n`, given by
/// signed maximal minors. Zero iff the vectors are dependent.
pub fn generalized_cross(rows: &[&[i64]]) -> Vec<i128> {
    let n = rows.len() + 1;
    assert!(rows.iter().all(|r| r.len() == n));
    if n == 2 {
        return vec![-(rows[0][1] as i128), rows[0][0] as i128];
    }
    if n == 3 {
        let (a, b) = (rows[0], rows[1]);
        let m = |x: i64, y: i64, z: i64, w: i64| x as i128 * y as i128 - z as i128 * w as i128;
        return vec![m(a[1], b[2], a[2], b[1]), m(a[2], b[0], a[0], b[2]), m(a[0], b[1], a[1], b[0])];
    }
    (0..n)
        .map(|col| {
            let minor: Vec<Vec<i64>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, &x)| x).collect())
                .collect();
            let refs: Vec<&[i64]> = minor.iter().map(|r| r.as_slice()).collect();
            let d = det(&refs).to_i128().expect("minor fits in i128");
            if (col + n - 1).is_multiple_of(2) {
                d
            } else {
                -d
            }
        })
        .collect()
}

/// Basis of the integer kernel of the row vector `v` (`v` primitive): a
/// unimodular column transformation sends `v` to `±e_1`, and the remaining
/// columns span `Z^n ∩ v^⊥`.
pub fn kernel_of_primitive(v: &[i64]) -> Result<Vec<Vec<i64>>> {
    let n = v.len();
    if v.iter().all(|&x| x == 0) {
        return Err(Error::ZeroVector);
    }
    if gcd_all(v) != 1 {
        return Err(Error::NotPrimitive(v.to_vec()));
    }
    let mut a: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    // columns of the unimodular transform
    let mut cols: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    // move a nonzero entry to position 0
    if a[0] == 0 {
        let k = a.iter().position(|&x| x != 0).unwrap();
        a.swap(0, k);
        cols.swap(0, k);
    }
    for i in 1..n {
        if a[i] == 0 {
            continue;
        }
        let e = a[0].extended_gcd(&a[i]);
        let (g, x, y) = (e.gcd, e.x, e.y);
        let (p, q) = (a[i] / g, a[0] / g);
        let c0: Vec<i128> = cols[0].iter().zip(&cols[i]).map(|(&u, &w)| x * u + y * w).collect();
        let ci: Vec<i128> = cols[0].iter().zip(&cols[i]).map(|(&u, &w)| -p * u + q * w).collect();
        cols[0] = c0;
        cols[i] = ci;
        a[0] = g;
        a[i] = 0;
    }
    cols[1..]
        .iter()
        .map(|c| c.iter().map(|&x| i64::try_from(x).map_err(|_| Error::Overflow("kernel basis"))).collect())
        .collect()
}

pub fn gram(basis: &[Vec<i64>]) -> Vec<Vec<i64>> {
    basis
        .iter()
        .map(|a| basis.iter().map(|b| dot(a, b) as i64).collect())
        .collect()
}

/// Exact LLL reduction (δ = 3/4) of linearly independent integer vectors.
pub fn lll_reduce(basis: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let k = basis.len();
    if k <= 1 {
        return basis.to_vec();
    }
    let mut b: Vec<Vec<BigInt>> = basis.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let to_q = |x: &BigInt| BigRational::from_integer(x.clone());
    let gso = |b: &[Vec<BigInt>]| -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
        let k = b.len();
        let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(k);
        let mut mu = vec![vec![BigRational::zero(); k]; k];
        let mut norms = Vec::with_capacity(k);
        for i in 0..k {
            let mut v: Vec<BigRational> = b[i].iter().map(to_q).collect();
            for j in 0..i {
                let num: BigRational = b[i].iter().zip(&star[j]).map(|(a, s)| to_q(a) * s).sum();
                mu[i][j] = num / &norms[j];
                for (x, s) in v.iter_mut().zip(&star[j]) {
                    *x -= &mu[i][j] * s;
                }
            }
            let nn: BigRational = v.iter().map(|x| x * x).sum();
            norms.push(nn);
            star.push(v);
        }
        (mu, norms)
    };
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let (mut mu, mut norms) = gso(&b);
    let mut i = 1;
    while i < k {
        for j in (0..i).rev() {
            let r = mu[i][j].round();
            if !r.is_zero() {
                let r = r.to_integer();
                let bj = b[j].clone();
                for (x, y) in b[i].iter_mut().zip(&bj) {
                    *x -= &r * y;
                }
                let rq = to_q(&r);
                for l in 0..j {
                    let t = &rq * &mu[j][l];
                    mu[i][l] -= t;
                }
                mu[i][j] -= &rq;
            }
        }
        let lhs = &norms[i];
        let rhs = (&delta - &mu[i][i - 1] * &mu[i][i - 1]) * &norms[i - 1];
        if *lhs >= rhs {
            i += 1;
        } else {
            b.swap(i, i - 1);
            let fresh = gso(&b);
            mu = fresh.0;
            norms = fresh.1;
            i = (i - 1).max(1);
        }
    }
    b.into_iter()
        .map(|v| v.into_iter().map(|x| x.to_i64().expect("reduced basis fits i64")).collect())
        .collect()
}

/// Solves the square rational system via Gauss–Jordan; `None` if singular.
pub fn invert_rational(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, piv);
        let inv = a[c][c].recip();
        a[c].iter_mut().for_each(|x| *x *= &inv);
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot_row = a[c].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn det_rational(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if piv != c {
            a.swap(c, piv);
            d = -d;
        }
        d *= &a[c][c];
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &a[c][c];
            let pivot_row = a[c].clone();
            for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_det(m: &[Vec<i64>]) -> i128 {
        // Leibniz expansion over permutations; independent of elimination.
        let n = m.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0i128;
        permute(&mut perm, 0, &mut |p| {
            let mut inv = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if p[i] > p[j] {
                        inv += 1;
                    }
                }
            }
            let prod: i128 = (0..n).map(|i| m[i][p[i]] as i128).product();
            total += if inv % 2 == 0 { prod } else { -prod };
        });
        total
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn determinant_matches_leibniz() {
        let cases = vec![
            vec![vec![1, 2], vec![3, 4]],
            vec![vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]],
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]],
            vec![vec![2, 4, 6], vec![1, 2, 3], vec![0, 1, 5]],
            vec![vec![3, -1, 4, 1], vec![5, 9, -2, 6], vec![5, 3, 5, -8], vec![9, 7, 9, 3]],
        ];
        for m in cases {
            let refs: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
            assert_eq!(det(&refs), BigInt::from(brute_det(&m)), "{m:?}");
            let p = 1_000_000_007u64;
            assert_eq!(det_mod(&refs, p) as i128, brute_det(&m).rem_euclid(p as i128));
        }
    }

    #[test]
    fn incremental_rank() {
        assert_eq!(rank(&[vec![1, 0, 0], vec![2, 0, 0], vec![0, 1, 0], vec![1, 1, 0]]), 2);
        assert_eq!(rank(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]), 3);
        assert_eq!(rank(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]), 2);
    }

    #[test]
    fn kernel_is_unimodular_complement() {
        for v in [vec![3, 5], vec![1, 1, 1], vec![0, 0, 1], vec![6, 10, 15], vec![2, -3, 0, 7]] {
            let k = kernel_of_primitive(&v).unwrap();
            assert_eq!(k.len(), v.len() - 1);
            for b in &k {
                assert_eq!(dot(b, &v), 0);
            }
            let g = gram(&k);
            let refs: Vec<&[i64]> = g.iter().map(|r| r.as_slice()).collect();
            assert_eq!(det(&refs), BigInt::from(norm_sq(&v)));
        }
        assert!(matches!(kernel_of_primitive(&[2, 4]), Err(Error::NotPrimitive(_))));
    }

    #[test]
    fn cross_product_is_orthogonal() {
        let rows = [vec![1, 2, 3, 4], vec![0, 1, -1, 2], vec![5, 0, 1, 1]];
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let n = generalized_cross(&refs);
        for r in &rows {
            let d: i128 = r.iter().zip(&n).map(|(&a, &b)| a as i128 * b).sum();
            assert_eq!(d, 0);
        }
        assert!(n.iter().any(|&x| x != 0));
        let dep = [vec![1, 2, 3], vec![2, 4, 6]];
        let refs: Vec<&[i64]> = dep.iter().map(|r| r.as_slice()).collect();
        assert!(generalized_cross(&refs).iter().all(|&x| x == 0));
    }

    #[test]
    fn lll_preserves_lattice() {
        let b = vec![vec![1, 0, 0, 1345], vec![0, 1, 0, 35], vec![0, 0, 1, 154]];
        let r = lll_reduce(&b);
        let g0 = gram(&b);
        let g1 = gram(&r);
        let d = |g: &Vec<Vec<i64>>| det(&g.iter().map(|x| x.as_slice()).collect::<Vec<_>>());
        assert_eq!(d(&g0), d(&g1));
        assert!(r.iter().map(|v| norm_sq(v)).max() < b.iter().map(|v| norm_sq(v)).max());
    }
}
