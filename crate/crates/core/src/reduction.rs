//! Bad vertex sets: rationality, universal cycles and reduced models.
//!
//! For a set of bad vertices `V'` and `lbar >= 0` on `V'`, the universal
//! cycle `x_h(lbar)` is the smallest cycle with `V'`-coordinates `lbar` and
//! `(x + s_h, E_i) <= 0` off `V'`. Its weight `wbar_h(lbar) = chi_h(x_h(lbar))`
//! defines a lattice complex of rank `|V'|`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::RwLock;

use serde::Serialize;
use thiserror::Error;

use crate::complex::enumerate::certified_box;
use crate::complex::{ComplexError, ModelKind, SublevelModel};
use crate::graph::PlumbingGraph;
use crate::lattice::{HClass, LatticeContext, Weight};
use crate::specseq::{Filtration, SpecError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("bad vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("bad vertex set is empty")]
    Empty,
    #[error("support of s is not contained in the bad vertex set; reduce with a set containing it or use the full lattice")]
    SupportNotBad,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

/// Output of the Laufer algorithm for the fundamental cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalityCertificate {
    pub z_min: Vec<i64>,
    pub chi: i64,
    pub rational: bool,
    /// Vertex index added at each step of the ascent.
    pub transcript: Vec<usize>,
}

/// `chi(x) = (-(x, x) + sum x_i (e_i + 2)) / 2` for an integral cycle.
fn chi_int(m: &[Vec<i64>], x: &[i64]) -> i64 {
    let mut q = 0i64;
    let mut lin = 0i64;
    for (i, row) in m.iter().enumerate() {
        let t: i64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
        q += x[i] * t;
        lin += x[i] * (m[i][i] + 2);
    }
    (lin - q) / 2
}

/// Laufer's algorithm; the graph is rational iff `chi(Z_min) = 1`.
pub fn is_rational(g: &PlumbingGraph) -> RationalityCertificate {
    let m = g.intersection_matrix();
    let n = m.len();
    let mut x = vec![1i64; n];
    let mut mx: Vec<i64> = m.iter().map(|r| r.iter().sum()).collect();
    let mut transcript = Vec::new();
    while let Some(i) = (0..n).find(|i| mx[*i] > 0) {
        x[i] += 1;
        for (k, row) in m.iter().enumerate() {
            mx[k] += row[i];
        }
        transcript.push(i);
    }
    let chi = chi_int(&m, &x);
    RationalityCertificate {
        z_min: x,
        chi,
        rational: chi == 1,
        transcript,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SrVerdict {
    /// The graph becomes rational once the bad Euler numbers drop by `delta`.
    Confirmed { delta: i64, certificate: RationalityCertificate },
    Inconclusive { delta_max: i64 },
}

impl SrVerdict {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, SrVerdict::Confirmed { .. })
    }
}

pub const DEFAULT_DELTA_MAX: i64 = 10;

/// Lowers the Euler numbers of `bad` by `delta = 1..=delta_max` and stops at
/// the first rational graph.
pub fn check_sr_set(g: &PlumbingGraph, bad: &[usize], delta_max: i64) -> Result<SrVerdict, ReductionError> {
    check_bad(g.len(), bad)?;
    for delta in 1..=delta_max {
        let eulers: Vec<i64> = (0..g.len())
            .map(|i| if bad.contains(&i) { g.euler(i) - delta } else { g.euler(i) })
            .collect();
        let lowered = g.with_eulers(&eulers).expect("lowering Euler numbers keeps definiteness");
        let certificate = is_rational(&lowered);
        if certificate.rational {
            return Ok(SrVerdict::Confirmed { delta, certificate });
        }
    }
    Ok(SrVerdict::Inconclusive { delta_max })
}

fn check_bad(n: usize, bad: &[usize]) -> Result<(), ReductionError> {
    if bad.is_empty() {
        return Err(ReductionError::Empty);
    }
    if let Some(i) = bad.iter().find(|i| **i >= n) {
        return Err(ReductionError::VertexOutOfRange(*i));
    }
    Ok(())
}

/// Universal cycles and reduced weights for one class and bad set.
pub struct ReducedContext<'a> {
    ctx: &'a LatticeContext,
    class: HClass,
    bad: Vec<usize>,
    is_bad: Vec<bool>,
    s_dual: Vec<i64>,
    weight: Weight,
    cache: RwLock<HashMap<Vec<i64>, Vec<i64>>>,
}

impl<'a> ReducedContext<'a> {
    /// `bad` is sorted and deduplicated; reduced coordinates follow it.
    pub fn new(ctx: &'a LatticeContext, h: &HClass, bad: &[usize]) -> Result<Self, ReductionError> {
        check_bad(ctx.rank(), bad)?;
        let mut bad = bad.to_vec();
        bad.sort_unstable();
        bad.dedup();
        let mut is_bad = vec![false; ctx.rank()];
        for i in &bad {
            is_bad[*i] = true;
        }
        Ok(ReducedContext {
            ctx,
            class: h.clone(),
            bad,
            is_bad,
            s_dual: ctx.class_data(h).s_h_dual,
            weight: ctx.weight(h),
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn lattice(&self) -> &LatticeContext {
        self.ctx
    }

    pub fn class(&self) -> &HClass {
        &self.class
    }

    pub fn bad(&self) -> &[usize] {
        &self.bad
    }

    pub fn rank(&self) -> usize {
        self.bad.len()
    }

    /// `V'`-coordinates of a cycle.
    pub fn project(&self, l: &[i64]) -> Vec<i64> {
        self.bad.iter().map(|i| l[*i]).collect()
    }

    /// `x_h(lbar)`.
    pub fn universal_cycle(&self, lbar: &[i64]) -> Vec<i64> {
        assert_eq!(lbar.len(), self.bad.len(), "wrong reduced rank");
        if let Some(x) = self.cache.read().unwrap().get(lbar) {
            return x.clone();
        }
        let n = self.ctx.rank();
        // x(lbar - e_j) <= x(lbar), so their max is a valid start
        let mut x = vec![0i64; n];
        for j in 0..lbar.len() {
            if lbar[j] == 0 {
                continue;
            }
            let mut lower = lbar.to_vec();
            lower[j] -= 1;
            let cached = self.cache.read().unwrap().get(&lower).cloned();
            if let Some(y) = cached {
                for (a, b) in x.iter_mut().zip(&y) {
                    *a = (*a).max(*b);
                }
            }
        }
        for (k, i) in self.bad.iter().enumerate() {
            x[*i] = lbar[k];
        }
        let g = &self.weight.g;
        let mut gx = self.weight.gl(&x);
        // G = -M, so (x + s_h, E_i) = -(Gx)_i - a_i with s_h = sum a_i E_i^*
        while let Some(i) = (0..n).find(|i| !self.is_bad[*i] && -gx[*i] - self.s_dual[*i] > 0) {
            x[i] += 1;
            for (k, row) in g.iter().enumerate() {
                gx[k] += row[i];
            }
        }
        self.cache.write().unwrap().insert(lbar.to_vec(), x.clone());
        x
    }

    /// `wbar_h(lbar) = chi_h(x_h(lbar))`.
    pub fn wbar(&self, lbar: &[i64]) -> i64 {
        self.weight.chi(&self.universal_cycle(lbar))
    }

    /// `max(floor(Z_K), 0)` restricted to the bad coordinates.
    pub fn default_rect(&self) -> Vec<i64> {
        let zk = self.ctx.z_k();
        self.bad
            .iter()
            .map(|i| {
                let f = zk[*i].floor().to_integer();
                i64::try_from(f).unwrap_or(i64::MAX).max(0)
            })
            .collect()
    }

    /// All points of `R(0, rect)` with their reduced weights, in
    /// lexicographic order.
    pub fn points(&self, rect: &[i64]) -> Vec<(Vec<i64>, i64)> {
        let mut out = Vec::new();
        let mut p = vec![0i64; rect.len()];
        loop {
            out.push((p.clone(), self.wbar(&p)));
            let mut k = rect.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if p[k] < rect[k] {
                    p[k] += 1;
                    break;
                }
                p[k] = 0;
            }
        }
    }

    /// Every cube of the reduced rectangle `R(0, rect)`.
    pub fn rectangle_model(&self, rect: &[i64], budget: u128) -> Result<SublevelModel, ReductionError> {
        let need = crate::complex::rectangle_cells(rect);
        if need > budget {
            return Err(ComplexError::Budget { needed: need, budget }.into());
        }
        let pts = self.points(rect);
        Ok(SublevelModel::from_points(rect.to_vec(), None, ModelKind::Rectangle, pts, budget)?)
    }

    /// Cubes of reduced weight `<= cap`, exact for levels `<= cap`.
    ///
    /// `x_h(lbar) >= 0` carries `lbar` on the bad coordinates, so the box of
    /// the full sublevel set bounds the reduced one.
    pub fn quadrant_model(&self, cap: i64, budget: u128) -> Result<SublevelModel, ReductionError> {
        let rect = match certified_box(&self.weight, cap) {
            Some(b) => self.project(&b),
            None => vec![0; self.rank()],
        };
        let need: u128 = rect.iter().map(|c| *c as u128 + 1).product();
        if need > budget {
            return Err(ComplexError::Budget { needed: need, budget }.into());
        }
        let pts = self.points(&rect);
        Ok(SublevelModel::from_points(rect, Some(cap), ModelKind::Quadrant, pts, budget)?)
    }

    /// Filtration by `s` in reduced coordinates; `Supp(s)` must be bad.
    pub fn filtration(&self, s: &[i64]) -> Result<Filtration, ReductionError> {
        if s.len() != self.ctx.rank() {
            return Err(SpecError::Length {
                expected: self.ctx.rank(),
                got: s.len(),
            }
            .into());
        }
        Filtration::restricted(s, &self.bad).map_err(|e| match e {
            SpecError::SupportNotBad => ReductionError::SupportNotBad,
            e => e.into(),
        })
    }

    pub fn table(&self, rect: &[i64]) -> WbarTable {
        WbarTable {
            bad: self.bad.clone(),
            class: self.class.0.clone(),
            rect: rect.to_vec(),
            values: self.points(rect),
        }
    }
}

/// Reduced weights on a rectangle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WbarTable {
    pub bad: Vec<usize>,
    pub class: Vec<i64>,
    pub rect: Vec<i64>,
    pub values: Vec<(Vec<i64>, i64)>,
}

impl WbarTable {
    /// Rank 1: one line. Rank 2: one line per value of the second
    /// coordinate, the first coordinate running along the line. Higher
    /// ranks: one `point value` line per point.
    pub fn to_grid(&self) -> String {
        let width = self
            .values
            .iter()
            .map(|(_, v)| v.to_string().len())
            .max()
            .unwrap_or(1);
        let mut out = String::new();
        match self.rect.len() {
            1 => {
                let row: Vec<String> = self.values.iter().map(|(_, v)| format!("{v:>width$}")).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
            2 => {
                let lookup: HashMap<&[i64], i64> =
                    self.values.iter().map(|(p, v)| (p.as_slice(), *v)).collect();
                for b in 0..=self.rect[1] {
                    let row: Vec<String> = (0..=self.rect[0])
                        .map(|a| format!("{:>width$}", lookup[&[a, b][..]]))
                        .collect();
                    out.push_str(&row.join(" "));
                    out.push('\n');
                }
            }
            _ => {
                for (p, v) in &self.values {
                    let _ = writeln!(out, "{p:?} {v}");
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_is_rational() {
        let g = PlumbingGraph::parse("vertex 1 -5\n").unwrap();
        let c = is_rational(&g);
        assert!(c.rational);
        assert_eq!(c.z_min, vec![1]);
    }

    #[test]
    fn zero_lbar_gives_zero_cycle() {
        let g = PlumbingGraph::parse("vertex 1 -2\nvertex 2 -2\nedge 1 2\n").unwrap();
        let ctx = LatticeContext::new(&g);
        let rc = ReducedContext::new(&ctx, &ctx.zero_class(), &[0]).unwrap();
        assert_eq!(rc.universal_cycle(&[0]), vec![0, 0]);
        assert_eq!(rc.universal_cycle(&[2]), vec![2, 1]);
    }
}
