//! The periodic regime of `PE_infty(T, Q, h)` for large degrees.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;

use super::poincare::pe_series;
use super::zeta::DualForm;
use super::{Series, SeriesError};
use crate::complex::SublevelModel;
use crate::lattice::{HClass, LatticeContext};
use crate::specseq::{Filtration, Page, SpectralTable};

/// `N`, `s~ = N s`, `e = gcd n_i` and the period `p` with `e p = -(s, s~)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Period {
    pub n: i64,
    pub s_tilde: Vec<i64>,
    pub e: i64,
    pub p: i64,
}

pub fn period(ctx: &LatticeContext, s: &[i64]) -> Period {
    let form = DualForm::new(ctx);
    let x = form.e_coords(s);
    let g = x.iter().fold(form.d, |a, b| a.gcd(b));
    let n = form.d / g;
    let s_tilde: Vec<i64> = x.iter().map(|v| v * n / form.d).collect();
    let e = s.iter().fold(0i64, |a, b| a.gcd(b));
    // -(s, s~) = -N (s, s)
    let ss = form.pair(s, s);
    let num = -n * ss;
    assert_eq!(num % (form.d * e), 0, "-(s, s~) is a multiple of e");
    Period {
        n,
        s_tilde,
        e,
        p: num / (form.d * e),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TailReport {
    pub period: Period,
    pub k0: i64,
    /// `d_0 = e (k_0 p - 1)`.
    pub d0: i64,
    pub min_d0: i64,
    /// Realizers of `min(e(k_0 p + q))`, `q = 0 .. p-1`.
    pub l_q: Vec<Vec<i64>>,
    pub chi_l_q: Vec<i64>,
    /// `min(e((k_0+m)p+q)) = chi_h(l_q + m s~)` on the window.
    pub shifts_realize_min: bool,
    /// The quadratic formula for `chi_h(l_q + m s~) - chi_h(l_q)`.
    pub quadratic_ok: bool,
    /// Every `q` has at least two periods inside the window.
    pub two_periods: bool,
    /// The tail of `PE_infty` equals the closed form on the window.
    pub closed_form_matches: bool,
    /// First level after which `PE_infty(1, Q, h)` has coefficient `1`.
    pub fin_n0: Option<i64>,
    pub fin_certified: bool,
    pub cap: i64,
}

impl TailReport {
    pub fn holds(&self) -> bool {
        self.shifts_realize_min && self.quadratic_ok && self.closed_form_matches && self.fin_certified
    }
}

/// Searches the smallest `k_0` for which the tail of `PE_infty` has the
/// periodic closed form, using a quadrant model for `min(d)`.
pub fn pe_infty_tail(
    ctx: &LatticeContext,
    h: &HClass,
    s: &[i64],
    model: &SublevelModel,
    table: &SpectralTable,
) -> Result<TailReport, SeriesError> {
    let cap = model
        .cap()
        .ok_or_else(|| SeriesError::Hypothesis("tail analysis needs a quadrant model".into()))?;
    let filt = Filtration::new(ctx, s)?;
    let per = period(ctx, s);
    let form = DualForm::new(ctx);
    let w = ctx.weight(h);
    let pe = pe_series(table, Page::Infinity)?;
    let top = pe.window[1].unwrap().min(cap);

    // exact-degree minima, then suffix minima
    let mut at: BTreeMap<i64, (i64, i64, Vec<i64>)> = BTreeMap::new();
    for idx in 0..model.num_points() as u32 {
        let l = model.point(idx);
        let (d, c) = (filt.degree(l), model.point_weight(idx));
        let cand = (c, d, l.to_vec());
        at.entry(d)
            .and_modify(|v| {
                if cand < *v {
                    *v = cand.clone()
                }
            })
            .or_insert(cand);
    }
    // best realizer over degrees >= d: (chi, degree, l)
    let realize = |d: i64| -> Option<(i64, i64, Vec<i64>)> { at.range(d..).map(|(_, v)| v.clone()).min() };
    let min_of = |d: i64| realize(d).map(|v| v.0).filter(|c| *c <= cap);

    let Period { e, p, .. } = per.clone();
    let s_tilde = per.s_tilde.clone();
    let sh = ctx.class_data(h).s_h_dual;
    let st_dual = form.of_cycle(&s_tilde);

    let mut k0 = 1i64;
    loop {
        let d0 = e * (k0 * p - 1);
        let Some(min_d0) = min_of(d0) else {
            return Err(SeriesError::Window(format!(
                "no periodic regime found below level {cap}"
            )));
        };
        let mut l_q = Vec::new();
        let mut chi_l_q = Vec::new();
        let mut ok = true;
        for q in 0..p {
            match realize(e * (k0 * p + q)).filter(|v| v.0 <= cap) {
                Some((c, _, l)) => {
                    l_q.push(l);
                    chi_l_q.push(c);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let mut formula = Series::new(&["T", "Q", "h"]).with_window(1, top);
            formula.add_term(vec![d0, min_d0, 0], 1);
            let mut shifts_ok = true;
            let mut quad_ok = true;
            let mut two = true;
            for q in 0..p as usize {
                let lq = &l_q[q];
                let lq_dual = form.of_cycle(lq);
                let mut m = 0i64;
                loop {
                    let x: Vec<i64> = lq.iter().zip(&s_tilde).map(|(a, b)| a + m * b).collect();
                    let c = w.chi(&x);
                    if c > top {
                        if m < 2 {
                            two = false;
                        }
                        break;
                    }
                    let deg = e * ((k0 + m) * p + q as i64);
                    if min_of(deg) != Some(c) {
                        shifts_ok = false;
                    }
                    let ms: Vec<i64> = st_dual.iter().map(|v| m * v).collect();
                    let y: Vec<i64> = (0..ms.len())
                        .map(|i| ms[i] - form.z[i] + 2 * sh[i] + 2 * lq_dual[i])
                        .collect();
                    let num = -form.pair(&ms, &y);
                    if num != 2 * form.d * (c - chi_l_q[q]) {
                        quad_ok = false;
                    }
                    formula.add_term(vec![deg, c, 0], 1);
                    formula.add_term(vec![deg - e, c, 0], -1);
                    m += 1;
                }
            }
            let formula = formula.geometric(1);
            let mut tail = pe.clone().with_window(1, top);
            tail.terms.retain(|k, _| k[0] >= d0);
            let matches = tail.agrees_with(&formula);
            if matches && shifts_ok && quad_ok {
                let (fin_n0, fin_certified) = finite_tail(&pe, top, table.rows[0].level);
                return Ok(TailReport {
                    period: per,
                    k0,
                    d0,
                    min_d0,
                    l_q,
                    chi_l_q,
                    shifts_realize_min: shifts_ok,
                    quadratic_ok: quad_ok,
                    two_periods: two,
                    closed_form_matches: matches,
                    fin_n0,
                    fin_certified,
                    cap: top,
                });
            }
        }
        k0 += 1;
    }
}

/// Smallest `n0` with `PE_infty(1, Q, h)` equal to `Q^n` for `n0 <= n <= top`.
fn finite_tail(pe: &Series, top: i64, lo: i64) -> (Option<i64>, bool) {
    let t1 = pe.substitute(0, 1);
    let mut n0 = None;
    for n in (lo..=top).rev() {
        let col: Vec<(&Vec<i64>, &i64)> = t1.terms.iter().filter(|(k, _)| k[0] == n).collect();
        if col.len() == 1 && *col[0].0 == vec![n, 0] && *col[0].1 == 1 {
            n0 = Some(n);
        } else {
            break;
        }
    }
    let certified = n0.is_some_and(|n| n <= top - (top - lo) / 4);
    (n0, certified)
}
