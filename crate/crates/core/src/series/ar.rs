//! Series of an almost rational graph with a single bad vertex carrying the
//! curve, read from the reduced weight sequence.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::poincare::pe_series;
use super::zeta::{reduce_to_vertex, DualForm};
use super::{Series, SeriesError};
use crate::lattice::LatticeContext;
use crate::specseq::{Page, SpectralTable};

#[derive(Debug, Clone, Serialize)]
pub struct ArReport {
    pub wbar: Vec<i64>,
    /// `wbar(l+1) - wbar(l)`.
    pub increments: Vec<i64>,
    /// `sum_{increment >= 0} T^l (Q^{wbar(l)} - Q^{wbar(l+1)})/(1-Q)`.
    pub pe: Series,
    pub pe1_matches: Option<bool>,
    pub pe_infty_matches: Option<bool>,
    /// `Z_0` with `t_0 = t`, other variables 1.
    pub z00: Series,
    /// `Z_{0,0}` has coefficients `max(0, increment)`.
    pub z00_matches_increments: bool,
    pub z_minus: Series,
    pub z_plus: Series,
    pub z_plus_at_1: i64,
    pub rational: bool,
    /// `m = -(E_0^*, E_0^*)`.
    pub m_phi: String,
    /// `[E_0^*] != 0`: the curve series is read from the full `Z`.
    pub full_series_used: bool,
    pub p_c: Option<Series>,
    pub semigroup: Option<Vec<String>>,
    pub p_c_is_semigroup: Option<bool>,
}

/// `wbar` must be given for `0..=L` with `wbar(L)` its strict maximum, so
/// that the window `Q < wbar(L)` is exact.
pub fn ar_series(
    ctx: &LatticeContext,
    vertex: usize,
    wbar: &[i64],
    table: Option<&SpectralTable>,
) -> Result<ArReport, SeriesError> {
    let len = wbar.len();
    if len < 2 {
        return Err(SeriesError::Window("need at least two values of wbar".into()));
    }
    let last = wbar[len - 1];
    if wbar[..len - 1].iter().any(|v| *v >= last) {
        return Err(SeriesError::Window("the last wbar value must be the strict maximum".into()));
    }
    let qtop = last - 1;
    let increments: Vec<i64> = wbar.windows(2).map(|p| p[1] - p[0]).collect();

    let mut num = Series::new(&["T", "Q", "h"]).with_window(1, qtop);
    for (l, d) in increments.iter().enumerate() {
        if *d >= 0 {
            num.add_term(vec![l as i64, wbar[l], 0], 1);
            num.add_term(vec![l as i64, wbar[l + 1], 0], -1);
        }
    }
    let pe = num.geometric(1);
    let (pe1_matches, pe_infty_matches) = match table {
        Some(t) => (
            Some(pe_series(t, Page::Finite(1))?.agrees_with(&pe)),
            Some(pe_series(t, Page::Infinity)?.agrees_with(&pe)),
        ),
        None => (None, None),
    };

    let tmax = BigRational::from_integer(BigInt::from(len as i64 - 2));
    let zero = ctx.zero_class();
    let z00 = reduce_to_vertex(ctx, vertex, &tmax, Some(&zero));
    let dz = z00.denominators[0];
    let mut expected = Series::new(&["t"]).with_denominator(0, dz).with_window(0, z00.window[0].unwrap());
    let mut z_minus = Series::new(&["t"]).with_window(0, len as i64 - 2);
    let mut z_plus = Series::new(&["t"]).with_window(0, len as i64 - 2);
    for (l, d) in increments.iter().enumerate() {
        expected.add_term(vec![l as i64 * dz], (*d).max(0));
        z_minus.add_term(vec![l as i64], *d);
        z_plus.add_term(vec![l as i64], (-*d).max(0));
    }
    let z00_matches_increments = z00.agrees_with(&expected);
    let z_plus_at_1 = z_plus.terms.values().sum();
    let rational = increments.iter().all(|d| *d >= 0);

    let form = DualForm::new(ctx);
    let mut e0 = vec![0i64; ctx.rank()];
    e0[vertex] = 1;
    let m_scaled = -form.pair(&e0, &e0);
    let m_phi = BigRational::new(BigInt::from(m_scaled), BigInt::from(form.d));
    let full_series_used = !ctx.class_of_dual(&e0).is_zero();

    let (mut p_c, mut semigroup, mut p_c_is_semigroup) = (None, None, None);
    if rational {
        let z = if full_series_used {
            reduce_to_vertex(ctx, vertex, &tmax, None)
        } else {
            z00.clone()
        };
        let pc = z.times_one_minus(0, m_scaled * z.denominators[0] / form.d);
        let exps: BTreeSet<i64> = pc.terms.keys().map(|k| k[0]).collect();
        let top = pc.window[0].unwrap();
        let closed = exps.contains(&0)
            && exps
                .iter()
                .all(|a| exps.iter().all(|b| a + b > top || exps.contains(&(a + b))));
        let ok = closed && pc.terms.values().all(|c| *c == 1);
        semigroup = Some(exps.iter().map(|k| pc.exponent(&[*k], 0).to_string()).collect());
        p_c_is_semigroup = Some(ok);
        p_c = Some(pc);
    }

    Ok(ArReport {
        wbar: wbar.to_vec(),
        increments,
        pe,
        pe1_matches,
        pe_infty_matches,
        z00,
        z00_matches_increments,
        z_minus,
        z_plus,
        z_plus_at_1,
        rational,
        m_phi: m_phi.to_string(),
        full_series_used,
        p_c,
        semigroup,
        p_c_is_semigroup,
    })
}
