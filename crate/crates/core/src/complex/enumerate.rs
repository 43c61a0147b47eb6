//! Lattice points of sublevel sets of `chi_h` in the first quadrant.
//!
//! `chi(l) <= n` cuts out an ellipsoid with center `x0 = G^{-1} kappa / 2`
//! and radius `2n + x0^T G x0`. Box bounds are exact; the point search uses
//! a floating Fincke-Pohst recursion with slack followed by an exact check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::lattice::{rat, Weight};
use crate::linalg::{isqrt, rational_inverse};

fn ceil_sqrt(m: &BigInt) -> BigInt {
    let r = isqrt(m);
    if &r * &r < *m {
        r + 1
    } else {
        r
    }
}

/// Coordinatewise upper bounds for `{l >= 0 : chi(l) <= n}`; `None` when the
/// set is empty.
pub fn certified_box(w: &Weight, n: i64) -> Option<Vec<i64>> {
    let s = w.rank();
    let neg: Vec<Vec<i64>> = w.g.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
    // rational_inverse works for any nonsingular matrix; G^{-1} = -(-G)^{-1}
    let ginv: Vec<Vec<BigRational>> = rational_inverse(&neg)
        .into_iter()
        .map(|r| r.into_iter().map(|v| -v).collect())
        .collect();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let x0: Vec<BigRational> = (0..s)
        .map(|i| {
            (0..s).fold(BigRational::zero(), |acc, j| acc + &ginv[i][j] * rat(w.kappa[j])) * &half
        })
        .collect();
    let mut q = BigRational::zero();
    for i in 0..s {
        for j in 0..s {
            if w.g[i][j] != 0 {
                q += &x0[i] * &x0[j] * rat(w.g[i][j]);
            }
        }
    }
    let radius = rat(2 * n) + q;
    if radius.is_negative() {
        return None;
    }
    const K: i64 = 1 << 20;
    let mut out = Vec::with_capacity(s);
    for i in 0..s {
        let t = &radius * &ginv[i][i] * rat(K * K);
        let u = BigRational::new(ceil_sqrt(&t.ceil().to_integer()), BigInt::from(K));
        let b = (&x0[i] + u).floor().to_integer().to_i64()?;
        if b < 0 {
            return None;
        }
        out.push(b);
    }
    Some(out)
}

/// All `l` with `0 <= l <= rect` and `chi(l) <= n`, with their weights, in
/// lexicographic order.
pub fn sublevel_points(w: &Weight, n: i64, rect: &[i64]) -> Vec<(Vec<i64>, i64)> {
    let s = w.rank();
    if s == 0 {
        return vec![(Vec::new(), 0)];
    }
    let gf: Vec<Vec<f64>> = w.g.iter().map(|r| r.iter().map(|v| *v as f64).collect()).collect();
    // lower Cholesky G = L L^T; R = L^T
    let mut l = vec![vec![0f64; s]; s];
    for i in 0..s {
        for j in 0..=i {
            let mut sum = gf[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                l[i][j] = sum.max(0.0).sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    let r = |i: usize, j: usize| l[j][i];
    let kappa: Vec<f64> = w.kappa.iter().map(|v| *v as f64).collect();
    // x0 = G^{-1} kappa / 2 by two triangular solves
    let mut z = vec![0f64; s];
    for i in 0..s {
        let mut v = kappa[i] / 2.0;
        for k in 0..i {
            v -= l[i][k] * z[k];
        }
        z[i] = v / l[i][i];
    }
    let mut x0 = vec![0f64; s];
    for i in (0..s).rev() {
        let mut v = z[i];
        for k in i + 1..s {
            v -= l[k][i] * x0[k];
        }
        x0[i] = v / l[i][i];
    }
    let q0: f64 = (0..s)
        .map(|i| (0..s).map(|j| x0[i] * gf[i][j] * x0[j]).sum::<f64>())
        .sum();
    let radius = 2.0 * n as f64 + q0;
    if radius < -1e-6 {
        return Vec::new();
    }
    let radius = radius.max(0.0) * (1.0 + 1e-9) + 1e-6;

    let mut out = Vec::new();
    let mut cur = vec![0i64; s];
    let mut y = vec![0f64; s];
    fn rec(
        i: usize,
        rem: f64,
        cur: &mut [i64],
        y: &mut [f64],
        ctx: &(&dyn Fn(usize, usize) -> f64, &[f64], &[i64], &Weight, i64),
        out: &mut Vec<(Vec<i64>, i64)>,
    ) {
        let (r, x0, rect, w, n) = *ctx;
        let s = cur.len();
        let rii = r(i, i);
        let mut c = 0.0;
        for j in i + 1..s {
            c -= r(i, j) * y[j];
        }
        c /= rii;
        let half = (rem.max(0.0)).sqrt() / rii;
        let slack = 1e-7 * (1.0 + half.abs() + c.abs() + x0[i].abs());
        let lo = ((x0[i] + c - half - slack).ceil() as i64).max(0);
        let hi = ((x0[i] + c + half + slack).floor() as i64).min(rect[i]);
        for v in lo..=hi {
            cur[i] = v;
            y[i] = v as f64 - x0[i];
            let t = rii * (y[i] - c);
            let nrem = rem - t * t;
            if nrem < -1e-6 * (1.0 + rem.abs()) {
                continue;
            }
            if i == 0 {
                let chi = w.chi(cur);
                if chi <= n {
                    out.push((cur.to_vec(), chi));
                }
            } else {
                rec(i - 1, nrem, cur, y, ctx, out);
            }
        }
        cur[i] = 0;
    }
    let rf = &r as &dyn Fn(usize, usize) -> f64;
    rec(s - 1, radius, &mut cur, &mut y, &(rf, &x0, rect, w, n), &mut out);
    out.sort();
    out
}

/// All points of the rectangle `0 <= l <= rect`, lexicographic, with weights.
pub fn rect_points(w: &Weight, rect: &[i64]) -> Vec<(Vec<i64>, i64)> {
    let s = rect.len();
    let mut out = Vec::new();
    let mut cur = vec![0i64; s];
    loop {
        out.push((cur.clone(), w.chi(&cur)));
        let mut k = s;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] < rect[k] {
                cur[k] += 1;
                for v in cur.iter_mut().skip(k + 1) {
                    *v = 0;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2(kappa: Vec<i64>) -> Weight {
        Weight {
            g: vec![vec![2, -1], vec![-1, 2]],
            kappa,
        }
    }

    #[test]
    fn fincke_pohst_matches_brute_force() {
        for kappa in [vec![0, 0], vec![-2, 0], vec![0, -2], vec![2, 0]] {
            let w = a2(kappa);
            for n in -2..12 {
                let bx = certified_box(&w, n);
                let rect = [30, 30];
                let brute: Vec<(Vec<i64>, i64)> = rect_points(&w, &rect)
                    .into_iter()
                    .filter(|(_, c)| *c <= n)
                    .collect();
                let fast = sublevel_points(&w, n, &rect);
                assert_eq!(brute, fast, "n = {n}");
                if let Some(b) = bx {
                    assert!(brute.iter().all(|(p, _)| p[0] <= b[0] && p[1] <= b[1]));
                } else {
                    assert!(brute.is_empty());
                }
            }
        }
    }
}
