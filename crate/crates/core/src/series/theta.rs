//! Block decomposition of the Lipman cone and the uniform cube maximizers;
//! the combined series over all classes in theta form.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::poincare::{pe_levels, pe_series};
use super::zeta::DualForm;
use super::{Series, SeriesError};
use crate::complex::enumerate::{certified_box, sublevel_points};
use crate::complex::SublevelModel;
use crate::lattice::LatticeContext;
use crate::specseq::{Filtration, Page, SpectralTable};

#[derive(Debug, Clone, Serialize)]
pub struct ThetaReport {
    pub delta: i64,
    /// Distinct blocks `(K, a^K)` met inside the window.
    pub blocks: usize,
    pub points: usize,
    pub cubes: usize,
    /// The maximizer chosen at the root is a maximizer at every point.
    pub uniform_maximizers: bool,
    /// `chi(r + A + E_J) = chi(r + E_J) + chi(A) - (A, r + E_J)`.
    pub exponent_identity: bool,
    /// Per class: the shifted `PE_{h,1}(T, Q, -1)` equals the theta-form sum
    /// times `1/(1-Q)`.
    pub classes: BTreeMap<String, bool>,
    /// Unified `Q` window, in units of `1/(2 |det|)`.
    pub window: i64,
    pub denominator: i64,
}

impl ThetaReport {
    pub fn holds(&self) -> bool {
        self.uniform_maximizers && self.exponent_identity && self.classes.values().all(|v| *v)
    }
}

/// Default block size: `max(1, max_i (valency_i - 1))`.
pub fn default_delta(ctx: &LatticeContext) -> i64 {
    (0..ctx.rank())
        .map(|i| ctx.graph().valency(i) as i64 - 1)
        .max()
        .unwrap_or(0)
        .max(1)
}

/// Checks the uniform maximizer lemma and the combined identity for all
/// points of `L'` in the Lipman cone with `chi <= bound`.
pub fn theta_check(
    ctx: &LatticeContext,
    s: &[i64],
    delta: i64,
    bound: &BigRational,
    budget: u128,
) -> Result<ThetaReport, SeriesError> {
    if delta < default_delta(ctx) {
        return Err(SeriesError::Hypothesis(format!(
            "block size {delta} is below max(valency - 1)"
        )));
    }
    let filt = Filtration::new(ctx, s)?;
    let form = DualForm::new(ctx);
    let r = ctx.rank();
    let d2 = 2 * form.d;
    let qwin = (bound * BigRational::from_integer(BigInt::from(d2)))
        .floor()
        .to_integer()
        .to_i64()
        .unwrap();
    let mut blocks: BTreeSet<(Vec<usize>, Vec<i64>)> = BTreeSet::new();
    let mut roots: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    let (mut points, mut cubes) = (0usize, 0usize);
    let (mut uniform, mut expo) = (true, true);
    let mut classes = BTreeMap::new();

    for h in ctx.classes() {
        let data = ctx.class_data(&h);
        let sh = data.s_h_dual.clone();
        let chi_sh = form.chi2d(&sh);
        // levels n with 2d n + chi(s_h) <= qwin
        let cap = (qwin - chi_sh).div_euclid(d2);
        let w = ctx.weight(&h);
        let tshift = -form.pair(s, &sh);

        let model = SublevelModel::quadrant(&w, cap, budget)?;
        let table = SpectralTable::build(&model, &filt, &pe_levels(&model, cap))?;
        let pe1 = pe_series(&table, Page::Finite(1))?.substitute(2, -1);
        let mut lhs = Series::new(&["T", "Q"]).with_denominator(0, form.d).with_denominator(1, d2);
        lhs = lhs.with_window(1, qwin);
        for (k, c) in &pe1.terms {
            lhs.add_term(vec![form.d * k[0] + tshift, d2 * k[1] + chi_sh], *c);
        }

        let mut rhs = Series::new(&["T", "Q"]).with_denominator(0, form.d).with_denominator(1, d2);
        rhs = rhs.with_window(1, qwin);
        let pts = match certified_box(&w, cap) {
            Some(rect) => sublevel_points(&w, cap, &rect),
            None => Vec::new(),
        };
        for (l, _) in pts {
            points += 1;
            let a: Vec<i64> = form.of_cycle(&l).iter().zip(&sh).map(|(x, y)| x + y).collect();
            let k: Vec<usize> = (0..r).filter(|i| a[*i] >= delta).collect();
            let root: Vec<i64> = (0..r).map(|i| if a[i] >= delta { delta } else { a[i] }).collect();
            blocks.insert((k.clone(), (0..r).filter(|i| a[*i] < delta).map(|i| a[i]).collect()));
            let kmask: usize = k.iter().map(|i| 1usize << i).sum();
            let choice = roots
                .entry(root.clone())
                .or_insert_with(|| root_maximizers(&form, &root, kmask))
                .clone();
            let big_a: Vec<i64> = a.iter().zip(&root).map(|(x, y)| x - y).collect();
            let chi_a = form.chi2d(&big_a);
            let vertex: Vec<i64> = (0..1usize << r).map(|j| form.chi2d(&form.add_e(&a, j))).collect();
            let deg = -form.pair(s, &a);
            for i in 0..1usize << r {
                cubes += 1;
                let direct = subsets(i).map(|j| vertex[j]).max().unwrap();
                let j = choice[i];
                let uni = vertex[j];
                if uni != direct {
                    uniform = false;
                }
                let rj = form.add_e(&root, j);
                if form.chi2d(&rj) + chi_a - 2 * form.pair(&big_a, &rj) != uni {
                    expo = false;
                }
                let sign = if i.count_ones() % 2 == 0 { 1 } else { -1 };
                rhs.add_term(vec![deg, uni], sign);
            }
        }
        let rhs = rhs.geometric(1);
        classes.insert(h.to_string(), lhs.agrees_with(&rhs));
    }
    Ok(ThetaReport {
        delta,
        blocks: blocks.len(),
        points,
        cubes,
        uniform_maximizers: uniform,
        exponent_identity: expo,
        classes,
        window: qwin,
        denominator: d2,
    })
}

fn subsets(i: usize) -> impl Iterator<Item = usize> {
    let mut j = i;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = j;
        if j == 0 {
            done = true;
        } else {
            j = (j - 1) & i;
        }
        Some(out)
    })
}

/// For each `I`, a maximizer `J` of `chi(r + E_J)` among `K cap I <= J <= I`.
fn root_maximizers(form: &DualForm, root: &[i64], kmask: usize) -> Vec<usize> {
    let r = root.len();
    let vals: Vec<i64> = (0..1usize << r).map(|j| form.chi2d(&form.add_e(root, j))).collect();
    (0..1usize << r)
        .map(|i| {
            let forced = i & kmask;
            subsets(i)
                .filter(|j| j & forced == forced)
                .max_by_key(|j| (vals[*j], std::cmp::Reverse(*j)))
                .unwrap()
        })
        .collect()
}
