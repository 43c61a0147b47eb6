//! The topological series `Z(t)`, its class components and the motivic lift.
//!
//! Elements of `L'` are handled in `E^*`-coordinates `a`; their
//! `E`-coordinates are `-M^{-1} a`, stored scaled by `D = |det M|`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::poincare::{cube_polynomial, cube_terms};
use super::{Series, SeriesError};
use crate::complex::enumerate::rect_points;
use crate::complex::{euler_characteristic, Barcode, SublevelModel};
use crate::lattice::{HClass, LatticeContext};
use crate::linalg::fp::{Field, P31};
use crate::linalg::rational_inverse;
use crate::specseq::Filtration;

/// Integer form of the intersection pairing on `L'` in `E^*`-coordinates.
#[derive(Debug, Clone)]
pub struct DualForm {
    /// `|det M|`.
    pub d: i64,
    /// `d * M^{-1}`; `(x, y) = a^T p b / d`.
    pub p: Vec<Vec<i64>>,
    /// `E^*`-coordinates of `Z_K`.
    pub z: Vec<i64>,
    pub m: Vec<Vec<i64>>,
}

impl DualForm {
    pub fn new(ctx: &LatticeContext) -> Self {
        let d = ctx.determinant().abs().to_i64().expect("determinant fits in i64");
        let inv = rational_inverse(ctx.matrix());
        let p = inv
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| {
                        let x = v * BigRational::from_integer(BigInt::from(d));
                        assert!(x.is_integer());
                        x.to_integer().to_i64().unwrap()
                    })
                    .collect()
            })
            .collect();
        let z = (0..ctx.rank()).map(|i| -(ctx.graph().euler(i) + 2)).collect();
        DualForm {
            d,
            p,
            z,
            m: ctx.matrix().to_vec(),
        }
    }

    pub fn rank(&self) -> usize {
        self.z.len()
    }

    /// `d * (x, y)`.
    pub fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut acc = 0i64;
        for (i, row) in self.p.iter().enumerate() {
            if a[i] != 0 {
                acc += a[i] * row.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
            }
        }
        acc
    }

    /// `2 d chi(x)` with `chi(x) = -(x, x - Z_K)/2`.
    pub fn chi2d(&self, a: &[i64]) -> i64 {
        let y: Vec<i64> = a.iter().zip(&self.z).map(|(x, z)| x - z).collect();
        -self.pair(a, &y)
    }

    /// `d` times the `E`-coordinates.
    pub fn e_coords(&self, a: &[i64]) -> Vec<i64> {
        self.p
            .iter()
            .map(|row| -row.iter().zip(a).map(|(x, y)| x * y).sum::<i64>())
            .collect()
    }

    /// `E^*`-coordinates of `x + E_J` for the bitmask `j`.
    pub fn add_e(&self, a: &[i64], j: usize) -> Vec<i64> {
        let mut out = a.to_vec();
        for (k, row) in self.m.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                if j >> i & 1 == 1 {
                    out[k] -= v;
                }
            }
        }
        out
    }

    /// `E^*`-coordinates of an integral cycle.
    pub fn of_cycle(&self, l: &[i64]) -> Vec<i64> {
        self.m
            .iter()
            .map(|row| -row.iter().zip(l).map(|(x, y)| x * y).sum::<i64>())
            .collect()
    }
}

/// `C(n, k)` for `0 <= k <= n`.
fn choose(n: i64, k: i64) -> i64 {
    let k = k.min(n - k);
    let mut c = 1i128;
    for i in 0..k {
        c = c * (n - i) as i128 / (i + 1) as i128;
    }
    i64::try_from(c).expect("binomial coefficient overflows i64")
}

/// Coefficient of `u^k` in `(1 - u)^m`.
pub fn binomial_power(m: i64, k: i64) -> i64 {
    if k < 0 {
        return 0;
    }
    if m >= 0 {
        if k > m {
            return 0;
        }
        let c = choose(m, k);
        if k % 2 == 0 {
            c
        } else {
            -c
        }
    } else {
        choose(k - m - 1, k)
    }
}

/// `zeta(sum a_i E_i^*)`.
pub fn zeta(ctx: &LatticeContext, a: &[i64]) -> i64 {
    a.iter()
        .enumerate()
        .map(|(i, k)| binomial_power(ctx.graph().valency(i) as i64 - 2, *k))
        .product()
}

/// All `a >= 0` whose scaled `E`-coordinates stay within `bound`, with
/// `zeta(a) != 0`. `cols[j]` are the scaled coordinates of `E_j^*`.
fn enumerate_cone(
    ctx: &LatticeContext,
    cols: &[Vec<i64>],
    fits: &dyn Fn(&[i64]) -> bool,
    out: &mut Vec<(Vec<i64>, Vec<i64>)>,
) {
    let n = ctx.rank();
    let caps: Vec<Option<i64>> = (0..n)
        .map(|i| {
            let m = ctx.graph().valency(i) as i64 - 2;
            if m >= 0 {
                Some(m)
            } else {
                None
            }
        })
        .collect();
    fn rec(
        j: usize,
        a: &mut Vec<i64>,
        x: &mut Vec<i64>,
        cols: &[Vec<i64>],
        caps: &[Option<i64>],
        fits: &dyn Fn(&[i64]) -> bool,
        out: &mut Vec<(Vec<i64>, Vec<i64>)>,
    ) {
        if j == a.len() {
            out.push((a.clone(), x.clone()));
            return;
        }
        let mut k = 0;
        loop {
            if caps[j].is_some_and(|c| k > c) || !fits(x) {
                break;
            }
            rec(j + 1, a, x, cols, caps, fits, out);
            k += 1;
            a[j] += 1;
            for (xi, c) in x.iter_mut().zip(&cols[j]) {
                *xi += c;
            }
        }
        for (xi, c) in x.iter_mut().zip(&cols[j]) {
            *xi -= c * k;
        }
        a[j] = 0;
    }
    let mut a = vec![0i64; n];
    let mut x = vec![0i64; cols[0].len()];
    rec(0, &mut a, &mut x, cols, &caps, fits, out);
}

fn dual_columns(form: &DualForm) -> Vec<Vec<i64>> {
    let n = form.rank();
    (0..n)
        .map(|j| {
            let mut e = vec![0i64; n];
            e[j] = 1;
            form.e_coords(&e)
        })
        .collect()
}

fn scaled_bound(form: &DualForm, bound: &[BigRational]) -> Vec<i64> {
    bound
        .iter()
        .map(|b| {
            (b * BigRational::from_integer(BigInt::from(form.d)))
                .floor()
                .to_integer()
                .to_i64()
                .expect("window fits in i64")
        })
        .collect()
}

fn t_series(ctx: &LatticeContext, form: &DualForm) -> Series {
    let names: Vec<String> = (0..ctx.rank()).map(|i| format!("t{}", i + 1)).collect();
    let refs: Vec<&str> = names.iter().map(|v| v.as_str()).collect();
    let mut s = Series::new(&refs);
    s.denominators = vec![form.d; ctx.rank()];
    s
}

/// `Z(t)` on the window `l' <= bound` (`E`-coordinates).
pub fn z_series(ctx: &LatticeContext, bound: &[BigRational]) -> Series {
    z_filtered(ctx, bound, None)
}

/// `Z_h(t)`: the terms of `Z` whose exponent lies in class `h`.
pub fn z_h_component(ctx: &LatticeContext, h: &HClass, bound: &[BigRational]) -> Series {
    z_filtered(ctx, bound, Some(h))
}

fn z_filtered(ctx: &LatticeContext, bound: &[BigRational], h: Option<&HClass>) -> Series {
    let form = DualForm::new(ctx);
    let b = scaled_bound(&form, bound);
    let cols = dual_columns(&form);
    let mut pts = Vec::new();
    let bb = b.clone();
    enumerate_cone(ctx, &cols, &move |x: &[i64]| x.iter().zip(&bb).all(|(v, w)| v <= w), &mut pts);
    let mut s = t_series(ctx, &form);
    for (i, w) in b.iter().enumerate() {
        s = s.with_window(i, *w);
    }
    for (a, x) in pts {
        if h.is_none_or(|h| ctx.class_of_dual(&a) == *h) {
            s.add_term(x, zeta(ctx, &a));
        }
    }
    s
}

/// `Z` (or `Z_h`) with `t_v = t` and every other variable set to 1, for
/// exponents `<= tmax`.
pub fn reduce_to_vertex(ctx: &LatticeContext, v: usize, tmax: &BigRational, h: Option<&HClass>) -> Series {
    let form = DualForm::new(ctx);
    let cols: Vec<Vec<i64>> = dual_columns(&form).into_iter().map(|c| vec![c[v]]).collect();
    let b = scaled_bound(&form, std::slice::from_ref(tmax))[0];
    let mut pts = Vec::new();
    enumerate_cone(ctx, &cols, &move |x: &[i64]| x[0] <= b, &mut pts);
    let mut s = Series::new(&["t"]).with_denominator(0, form.d).with_window(0, b);
    for (a, x) in pts {
        if h.is_none_or(|h| ctx.class_of_dual(&a) == *h) {
            s.add_term(x, zeta(ctx, &a));
        }
    }
    s
}

/// The motivic lift `Z^m_h(t, q)`.
#[derive(Debug, Clone)]
pub struct Motivic {
    /// `sum_l sum_I (-1)^{|I|} q^{w_h(l,I)} t^{l + s_h}` over the included `l`.
    pub numerator: Series,
    /// `numerator / (1 - q)` on the `q` window.
    pub series: Series,
}

impl Motivic {
    /// `q -> 1` limit of the numerator over `1 - q`: `-P_l'(1)` per monomial.
    pub fn q_limit(&self) -> Series {
        let qv = self.numerator.vars.len() - 1;
        let mut out = Series {
            vars: self.numerator.vars[..qv].to_vec(),
            denominators: self.numerator.denominators[..qv].to_vec(),
            window: self.numerator.window[..qv].to_vec(),
            terms: BTreeMap::new(),
        };
        for (k, c) in &self.numerator.terms {
            out.add_term(k[..qv].to_vec(), -c * k[qv]);
        }
        out
    }
}

/// `Z^m_h(t,q)`. With `lbound` the lattice points `0 <= l <= lbound` are
/// all included (exact `t` window, exact `q -> 1` limit); with `qmax` the
/// points of `chi_h <= qmax` are included (exact `q` window).
pub fn z_motivic(
    ctx: &LatticeContext,
    h: &HClass,
    lbound: Option<&[i64]>,
    qmax: Option<i64>,
) -> Result<Motivic, SeriesError> {
    let form = DualForm::new(ctx);
    let w = ctx.weight(h);
    let sh = ctx.class_data(h).s_h_dual;
    let sh_scaled = form.e_coords(&sh);
    let terms: Vec<(Vec<i64>, BTreeMap<i64, i64>)> = match (lbound, qmax) {
        (_, Some(n)) => cube_terms(ctx, h, n)
            .into_iter()
            .filter(|(l, _)| lbound.is_none_or(|b| l.iter().zip(b).all(|(x, y)| x <= y)))
            .collect(),
        (Some(b), None) => rect_points(&w, b)
            .into_iter()
            .map(|(l, _)| {
                let p = cube_polynomial(&w, &l);
                (l, p)
            })
            .filter(|(_, p)| !p.is_empty())
            .collect(),
        (None, None) => return Err(SeriesError::Window("z_motivic needs a t or q window".into())),
    };
    let r = ctx.rank();
    let mut names: Vec<String> = (0..r).map(|i| format!("t{}", i + 1)).collect();
    names.push("q".into());
    let refs: Vec<&str> = names.iter().map(|v| v.as_str()).collect();
    let mut num = Series::new(&refs);
    for i in 0..r {
        num.denominators[i] = form.d;
    }
    if let Some(b) = lbound {
        for i in 0..r {
            num = num.with_window(i, b[i] * form.d + sh_scaled[i]);
        }
    }
    if let Some(n) = qmax {
        num = num.with_window(r, n);
    }
    let mut qtop = qmax.unwrap_or(i64::MIN);
    for (l, p) in &terms {
        let mut key: Vec<i64> = l.iter().zip(&sh_scaled).map(|(x, s)| x * form.d + s).collect();
        key.push(0);
        for (e, c) in p {
            key[r] = *e;
            num.add_term(key.clone(), *c);
            if qmax.is_none() {
                qtop = qtop.max(*e);
            }
        }
    }
    let series = num.clone().with_window(r, qtop).geometric(r);
    Ok(Motivic {
        numerator: num,
        series,
    })
}

/// `Z^m_h(t,q) t^{-s_h}` under `t_i -> T_i^{n_i}` on `Supp(s)`, `t_i -> 1`
/// elsewhere, `q -> Q`. Needs a motivic series with a `q` window.
pub fn ep_substitution(
    ctx: &LatticeContext,
    h: &HClass,
    mot: &Motivic,
    filt: &Filtration,
) -> Result<Series, SeriesError> {
    let form = DualForm::new(ctx);
    let r = ctx.rank();
    let qtop = mot.numerator.window[r]
        .ok_or_else(|| SeriesError::Window("substitution needs a q window".into()))?;
    let sh_scaled = form.e_coords(&ctx.class_data(h).s_h_dual);
    let mut names: Vec<String> = filt.support.iter().map(|i| format!("T{}", i + 1)).collect();
    names.push("Q".into());
    let refs: Vec<&str> = names.iter().map(|v| v.as_str()).collect();
    let k = filt.support.len();
    let mut out = Series::new(&refs).with_window(k, qtop);
    for (key, c) in &mot.numerator.terms {
        let l: Vec<i64> = (0..r)
            .map(|i| {
                let v = key[i] - sh_scaled[i];
                assert_eq!(v % form.d, 0, "exponent off the class");
                v / form.d
            })
            .collect();
        let mut nk: Vec<i64> = filt.support.iter().map(|i| filt.coeffs[*i] * l[*i]).collect();
        nk.push(key[r]);
        out.add_term(nk, *c);
    }
    Ok(out.geometric(k))
}

/// One sampled instance of `sum_{x not >= l} zeta(x + s_h) = chi_h(l) + eu`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EuSample {
    pub l: Vec<i64>,
    pub lhs: i64,
    pub chi: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct EuIdentity {
    pub eu: i64,
    pub samples: Vec<EuSample>,
}

impl EuIdentity {
    pub fn holds(&self) -> bool {
        !self.samples.is_empty() && self.samples.iter().all(|s| s.holds)
    }
}

/// Checks the identity on the first `count` points `l` with
/// `l + s_h - Z_K` in the Lipman cone, ordered by total `E^*`-degree.
pub fn eu_identity(ctx: &LatticeContext, h: &HClass, count: usize, budget: u128) -> Result<EuIdentity, SeriesError> {
    let form = DualForm::new(ctx);
    let n = ctx.rank();
    let w = ctx.weight(h);
    let rect: Vec<i64> = ctx
        .z_k()
        .iter()
        .map(|v| v.floor().to_integer().to_i64().unwrap().max(0))
        .collect();
    let model = SublevelModel::rectangle(&w, &rect, budget)?;
    let bars = Barcode::of_model(&model, &Field::new(P31));
    let eu = euler_characteristic(&model, &bars)?.eu;

    let sh = ctx.class_data(h).s_h_dual;
    let sh_scaled = form.e_coords(&sh);
    let cols = dual_columns(&form);
    let mut samples = Vec::new();
    let mut total = 0i64;
    while samples.len() < count {
        let mut found = Vec::new();
        compositions(n, total, &mut vec![0; n], 0, &mut found);
        for b in found {
            let a: Vec<i64> = (0..n).map(|i| form.z[i] - sh[i] + b[i]).collect();
            if !ctx.class_of_dual(&a).is_zero() {
                continue;
            }
            let lx = form.e_coords(&a);
            let l: Vec<i64> = lx.iter().map(|v| v / form.d).collect();
            let target: Vec<i64> = (0..n).map(|i| l[i] * form.d + sh_scaled[i]).collect();
            let mut pts = Vec::new();
            let t2 = target.clone();
            enumerate_cone(ctx, &cols, &move |x: &[i64]| x.iter().zip(&t2).any(|(v, t)| v < t), &mut pts);
            let lhs: i64 = pts
                .iter()
                .filter(|(a, x)| x.iter().zip(&target).any(|(v, t)| v < t) && ctx.class_of_dual(a) == *h)
                .map(|(a, _)| zeta(ctx, a))
                .sum();
            let chi = w.chi(&l);
            samples.push(EuSample {
                holds: lhs == chi + eu,
                l,
                lhs,
                chi,
            });
            if samples.len() == count {
                break;
            }
        }
        total += 1;
    }
    Ok(EuIdentity { eu, samples })
}

fn compositions(n: usize, total: i64, cur: &mut Vec<i64>, i: usize, out: &mut Vec<Vec<i64>>) {
    if i == n - 1 {
        cur[i] = total;
        out.push(cur.clone());
        return;
    }
    for v in (0..=total).rev() {
        cur[i] = v;
        compositions(n, total - v, cur, i + 1, out);
    }
    cur[i] = 0;
}
