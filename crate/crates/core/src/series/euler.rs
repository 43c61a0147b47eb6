//! `PE_infty(1, Q, h)`, the topological Euler characteristics of the levels
//! and the Seiberg-Witten polynomial.

use serde::Serialize;

use super::poincare::pe_series;
use super::{Series, SeriesError};
use crate::complex::{euler_characteristic, Barcode, ModelKind, SublevelModel};
use crate::linalg::fp::{Field, P31};
use crate::specseq::{Page, SpectralTable};

#[derive(Debug, Clone, Serialize)]
pub struct SwReport {
    /// `PE_infty(1, Q, h)`.
    pub pe_infty_t1: Series,
    /// `sum chi_top(S_n) Q^n` from the limit page.
    pub chi_top_homological: Series,
    /// `(1/(1-Q)) sum (-1)^q Q^{w(cube)}` over the model.
    pub chi_top_cubes: Series,
    /// `PE_infty(1, Q, -1) - 1/(1-Q)`.
    pub pol_sw: Series,
    /// The tail of `pol_sw` vanishes on the last quarter of the window.
    pub certified: bool,
    pub pol_sw_at_1: i64,
    /// Normalized Seiberg-Witten invariant from the model barcode, when
    /// the model is a rectangle.
    pub eu: Option<i64>,
}

impl SwReport {
    pub fn consistent(&self) -> bool {
        self.chi_top_homological.agrees_with(&self.chi_top_cubes)
            && self.certified
            && self.eu.is_none_or(|e| e == self.pol_sw_at_1)
    }
}

pub fn euler_and_sw(model: &SublevelModel, table: &SpectralTable) -> Result<SwReport, SeriesError> {
    let pe = pe_series(table, Page::Infinity)?;
    let pe_t1 = pe.substitute(0, 1);
    let hom = pe_t1.substitute(1, -1);
    let top = hom.window[0].unwrap();
    let lo = table.rows[0].level;

    let mut cubes = Series::new(&["Q"]).with_window(0, top);
    for c in model.cells() {
        if c.weight <= top {
            cubes.add_term(vec![c.weight], if c.dim() % 2 == 0 { 1 } else { -1 });
        }
    }
    let cubes = cubes.geometric(0);

    let mut geo = Series::new(&["Q"]).with_window(0, top);
    geo.add_term(vec![0], 1);
    let pol = hom.sub(&geo.geometric(0));
    let span = top - lo;
    let tail_start = top - span / 4;
    let certified = span >= 4 && pol.terms.keys().all(|k| k[0] < tail_start);
    let pol_sw_at_1 = pol.terms.values().sum();

    let eu = if model.kind() == ModelKind::Rectangle {
        let bars = Barcode::of_model(model, &Field::new(P31));
        Some(euler_characteristic(model, &bars)?.eu)
    } else {
        None
    };
    Ok(SwReport {
        pe_infty_t1: pe_t1,
        chi_top_homological: hom,
        chi_top_cubes: cubes,
        pol_sw: pol,
        certified,
        pol_sw_at_1,
        eu,
    })
}
