//! Exact linear algebra: small dense integer and rational matrices, sparse
//! integral reduction, and modular arithmetic.

pub mod fp;
pub mod snf;
pub mod sparse;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use snf::{smith_normal_form, Smith};

/// Leading principal minors of `m` by fraction-free elimination.
///
/// Stops early (returning a shorter list ending in zero) when a minor vanishes.
pub fn leading_minors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|v| BigInt::from(*v)).collect())
        .collect();
    let mut out = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        out.push(pivot.clone());
        if pivot.is_zero() {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &pivot - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = pivot;
    }
    out
}

/// Determinant by fraction-free elimination with row pivoting.
pub fn det_bareiss(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|v| BigInt::from(*v)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|r| !a[*r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Inverse of a nonsingular integer matrix over the rationals.
pub fn rational_inverse(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let r = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v: Vec<BigRational> = row.iter().map(|x| r(*x)).collect();
            v.extend((0..n).map(|j| if i == j { r(1) } else { r(0) }));
            v
        })
        .collect();
    for k in 0..n {
        let p = (k..n)
            .find(|i| !a[*i][k].is_zero())
            .expect("matrix is singular");
        a.swap(k, p);
        let inv = a[k][k].recip();
        for v in a[k].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in 0..2 * n {
                    let t = &a[k][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Exact integer square root: largest `r` with `r*r <= x`.
pub fn isqrt(x: &BigInt) -> BigInt {
    if !x.is_positive() {
        return BigInt::zero();
    }
    x.sqrt()
}

/// Ceiling of a rational number.
pub fn ceil(q: &BigRational) -> BigInt {
    q.ceil().to_integer()
}

/// Floor of a rational number.
pub fn floor(q: &BigRational) -> BigInt {
    q.floor().to_integer()
}
