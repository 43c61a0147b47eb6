//! Dense Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `U * A * V = D` with `D` diagonal, `d_1 | d_2 | ...`, entries `>= 0`.
///
/// Only the left transform and its inverse are kept; the discriminant
/// group and class projections need nothing else.
#[derive(Debug, Clone)]
pub struct Smith {
    pub diagonal: Vec<BigInt>,
    pub left: Vec<Vec<BigInt>>,
    pub left_inv: Vec<Vec<BigInt>>,
}

pub fn smith_normal_form(a: &[Vec<BigInt>]) -> Smith {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<BigInt>> = a.to_vec();
    let ident = |k: usize| -> Vec<Vec<BigInt>> {
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect()
    };
    let mut u = ident(m);
    let mut uinv = ident(m);

    // row_i += c * row_j, mirrored on the transforms
    fn row_add(
        a: &mut [Vec<BigInt>],
        u: &mut [Vec<BigInt>],
        uinv: &mut [Vec<BigInt>],
        i: usize,
        j: usize,
        c: &BigInt,
    ) {
        if c.is_zero() {
            return;
        }
        for k in 0..a[0].len() {
            let t = &a[j][k] * c;
            a[i][k] += t;
        }
        for k in 0..u[0].len() {
            let t = &u[j][k] * c;
            u[i][k] += t;
        }
        for row in uinv.iter_mut() {
            let t = &row[i] * c;
            row[j] -= t;
        }
    }
    fn row_swap(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], uinv: &mut [Vec<BigInt>], i: usize, j: usize) {
        a.swap(i, j);
        u.swap(i, j);
        for row in uinv.iter_mut() {
            row.swap(i, j);
        }
    }
    fn row_neg(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], uinv: &mut [Vec<BigInt>], i: usize) {
        for v in a[i].iter_mut() {
            *v = -&*v;
        }
        for v in u[i].iter_mut() {
            *v = -&*v;
        }
        for row in uinv.iter_mut() {
            row[i] = -&row[i];
        }
    }
    fn col_add(a: &mut [Vec<BigInt>], i: usize, j: usize, c: &BigInt) {
        for row in a.iter_mut() {
            let t = &row[j] * c;
            row[i] += t;
        }
    }

    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry in the remaining block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                break;
            };
            if bi != t {
                row_swap(&mut a, &mut u, &mut uinv, bi, t);
            }
            if bj != t {
                for row in a.iter_mut() {
                    row.swap(bj, t);
                }
            }
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&p);
                    row_add(&mut a, &mut u, &mut uinv, i, t, &-q);
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&p);
                    col_add(&mut a, j, t, &-q);
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let mut fix = None;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if !(&a[i][j] % &p).is_zero() {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => row_add(&mut a, &mut u, &mut uinv, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a[t][t].is_zero() {
            break;
        }
        if a[t][t].is_negative() {
            row_neg(&mut a, &mut u, &mut uinv, t);
        }
        diag.push(a[t][t].clone());
    }
    Smith {
        diagonal: diag,
        left: u,
        left_inv: uinv,
    }
}
