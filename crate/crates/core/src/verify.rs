//! A battery of identities that must hold for every graph, class and
//! semigroup element; each check compares two independent computations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{euler_characteristic, Barcode, ComplexError, SublevelModel};
use crate::lattice::{HClass, LatticeContext};
use crate::linalg::fp::{Field, P31};
use crate::series::{
    collapse_t, default_delta, ep_substitution, eu_identity, euler_and_sw, multigraded_pe1, pe1_cube_formula,
    pe_levels, pe_series, theta_check, z_motivic, SeriesError,
};
use crate::specseq::{Filtration, Page, SpecError, SpectralTable};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyOptions {
    /// Levels above the minimum weight covered by the series windows.
    pub window: i64,
    /// Sample points for the zeta identity.
    pub samples: usize,
    /// `chi` bound for the uniform maximizer pass.
    pub theta_bound: i64,
    pub budget: u128,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            window: 16,
            samples: 5,
            theta_bound: 4,
            budget: crate::complex::DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub class: Option<String>,
    pub s: Option<Vec<i64>>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

fn check(name: &'static str, class: Option<&HClass>, s: Option<&[i64]>, passed: bool, detail: String) -> Check {
    Check {
        name,
        class: class.map(|h| h.to_string()),
        s: s.map(|v| v.to_vec()),
        passed,
        detail,
    }
}

/// Runs every identity for each class and each element of `elements`.
pub fn verify(
    ctx: &LatticeContext,
    classes: &[HClass],
    elements: &[Vec<i64>],
    opts: &VerifyOptions,
) -> Result<VerifyReport, VerifyError> {
    let field = Field::new(P31);
    let mut checks = Vec::new();
    let rect: Vec<i64> = ctx
        .z_k()
        .iter()
        .map(|v| v.floor().to_integer().to_i64().unwrap_or(i64::MAX).max(0))
        .collect();
    for h in classes {
        let w = ctx.weight(h);
        let rmodel = SublevelModel::rectangle(&w, &rect, opts.budget)?;
        let rbars = Barcode::of_model(&rmodel, &field);
        let (eu, min_w) = match euler_characteristic(&rmodel, &rbars) {
            Ok(r) => {
                checks.push(check("eu", Some(h), None, true, format!("eu = {} = cube sum", r.eu)));
                (r.eu, r.min_weight)
            }
            Err(e) => {
                checks.push(check("eu", Some(h), None, false, e.to_string()));
                continue;
            }
        };
        let hat: i64 = rbars
            .hat_table()
            .iter()
            .map(|((_, b), r)| if b % 2 == 0 { *r as i64 } else { -(*r as i64) })
            .sum();
        checks.push(check("hat_euler", Some(h), None, hat == 1, format!("alternating hat sum = {hat}")));

        let id = eu_identity(ctx, h, opts.samples, opts.budget)?;
        let bad: Vec<String> = id
            .samples
            .iter()
            .filter(|s| !s.holds)
            .map(|s| format!("{:?}: {} vs {} + {}", s.l, s.lhs, s.chi, id.eu))
            .collect();
        checks.push(check(
            "zeta_sum",
            Some(h),
            None,
            id.holds(),
            format!("{} samples, failing: {:?}", id.samples.len(), bad),
        ));

        let cap = min_w + opts.window;
        let model = SublevelModel::quadrant(&w, cap, opts.budget)?;
        let levels = pe_levels(&model, cap);
        for s in elements {
            let filt = Filtration::new(ctx, s)?;
            let table = SpectralTable::build(&model, &filt, &levels)?;

            let pages = table.pages();
            let euler = pe_series(&table, pages[0])?.substitute(2, -1).substitute(0, 1);
            let mut same = true;
            for p in &pages[1..] {
                same &= pe_series(&table, *p)?.substitute(2, -1).substitute(0, 1).agrees_with(&euler);
            }
            checks.push(check(
                "page_euler",
                Some(h),
                Some(s),
                same,
                format!("{} pages, window Q <= {cap}", pages.len()),
            ));

            let pe1 = pe_series(&table, Page::Finite(1))?;
            let multi = multigraded_pe1(&model, &filt, &levels)?;
            let cube = pe1_cube_formula(ctx, h, s, cap)?;
            let k = filt.support.len();
            let coarse = collapse_t(&multi).agrees_with(&pe1);
            let cubes = cube.agrees_with(&pe1.substitute(2, -1));
            checks.push(check(
                "betti",
                Some(h),
                Some(s),
                coarse && cubes,
                format!("multigraded = coarse: {coarse}, cube formula: {cubes}"),
            ));

            let mot = z_motivic(ctx, h, None, Some(cap))?;
            let ep = ep_substitution(ctx, h, &mot, &filt)?;
            let ok = ep.agrees_with(&multi.substitute(k + 1, -1));
            checks.push(check("ep", Some(h), Some(s), ok, format!("window Q <= {cap}")));

            let sw = euler_and_sw(&model, &table)?;
            let ok = sw.consistent() && sw.pol_sw_at_1 == eu;
            checks.push(check(
                "pol_sw",
                Some(h),
                Some(s),
                ok,
                format!("Pol_SW(1) = {}, eu = {eu}, certified = {}", sw.pol_sw_at_1, sw.certified),
            ));
        }
    }
    let bound = BigRational::from_integer(BigInt::from(opts.theta_bound));
    let delta = default_delta(ctx);
    for s in elements {
        let r = theta_check(ctx, s, delta, &bound, opts.budget)?;
        checks.push(check(
            "uniform_maximizers",
            None,
            Some(s),
            r.holds(),
            format!(
                "delta = {delta}, {} blocks, {} points, classes {:?}",
                r.blocks, r.points, r.classes
            ),
        ));
    }
    Ok(VerifyReport { checks })
}
