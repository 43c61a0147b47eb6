//! Pages of the spectral sequence at one level, from a single reduction.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{Filtration, SpecError};
use crate::complex::persistence::reduce;
use crate::complex::{HomologyGroup, SublevelModel};
use crate::linalg::fp::{Field, P31};
use crate::linalg::sparse::invariant_factors;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Page {
    Finite(usize),
    Infinity,
}

/// `d^g` kills the class of the cell of degree `source` and dimension
/// `dim + 1` against the cell of degree `target = source + g` and dimension
/// `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SpectralPair {
    pub target: i64,
    pub source: i64,
    pub dim: usize,
}

impl SpectralPair {
    pub fn gap(&self) -> usize {
        (self.target - self.source) as usize
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Differential {
    /// `(d, q)` of the source entry.
    pub from: (i64, i64),
    pub to: (i64, i64),
    pub rank: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralRow {
    pub level: i64,
    pub pairs: Vec<SpectralPair>,
    /// `(d, dim)` of surviving cells.
    pub essential: Vec<(i64, usize)>,
    /// First page equal to the limit.
    pub degeneration: usize,
    pub cells: usize,
}

impl SpectralRow {
    pub fn rank(&self, page: Page, d: i64, q: i64) -> usize {
        let dim = q - d;
        if dim < 0 {
            return 0;
        }
        let dim = dim as usize;
        let ess = self.essential.iter().filter(|e| **e == (d, dim)).count();
        match page {
            Page::Infinity => ess,
            Page::Finite(k) => {
                ess + self
                    .pairs
                    .iter()
                    .filter(|p| p.gap() >= k)
                    .map(|p| {
                        usize::from(p.target == d && p.dim == dim)
                            + usize::from(p.source == d && p.dim + 1 == dim)
                    })
                    .sum::<usize>()
            }
        }
    }

    /// Nonzero entries `(d, q) -> rank` of a page.
    pub fn entries(&self, page: Page) -> BTreeMap<(i64, i64), usize> {
        let mut m = BTreeMap::new();
        for (d, dim) in &self.essential {
            *m.entry((*d, *d + *dim as i64)).or_insert(0) += 1;
        }
        if let Page::Finite(k) = page {
            for p in self.pairs.iter().filter(|p| p.gap() >= k) {
                *m.entry((p.target, p.target + p.dim as i64)).or_insert(0) += 1;
                *m.entry((p.source, p.source + p.dim as i64 + 1)).or_insert(0) += 1;
            }
        }
        m
    }

    /// Nonzero components of `d^k`.
    pub fn differentials(&self, k: usize) -> Vec<Differential> {
        let mut m: BTreeMap<((i64, i64), (i64, i64)), usize> = BTreeMap::new();
        for p in self.pairs.iter().filter(|p| p.gap() == k) {
            let from = (p.source, p.source + p.dim as i64 + 1);
            let to = (p.target, p.target + p.dim as i64);
            *m.entry((from, to)).or_insert(0) += 1;
        }
        m.into_iter()
            .map(|((from, to), rank)| Differential { from, to, rank })
            .collect()
    }

    /// Rank of `H_b(S_n)` recovered from the limit page.
    pub fn total_rank(&self, b: usize) -> usize {
        self.essential.iter().filter(|e| e.1 == b).count()
    }

    pub fn max_gap(&self) -> usize {
        self.pairs.iter().map(|p| p.gap()).max().unwrap_or(0)
    }
}

/// Degree of every cell of the model.
pub fn cell_degrees(model: &SublevelModel, filt: &Filtration) -> Vec<i64> {
    model
        .cells()
        .iter()
        .map(|c| filt.degree(model.point(c.point)))
        .collect()
}

/// Runs the spectral sequence of `S_n` filtered by degree.
pub fn spectral_row(model: &SublevelModel, filt: &Filtration, n: i64) -> Result<SpectralRow, SpecError> {
    if !model.covers(n) {
        return Err(SpecError::NotCovered(n));
    }
    let deg = cell_degrees(model, filt);
    Ok(spectral_row_with(model, &deg, n, &|_| true))
}

/// Spectral sequence of the cells of `S_n` accepted by `keep`; `keep` must
/// select a union of components.
pub fn spectral_row_with(
    model: &SublevelModel,
    deg: &[i64],
    n: i64,
    keep: &dyn Fn(u32) -> bool,
) -> SpectralRow {
    let mut order: Vec<u32> = (0..model.cells().len() as u32)
        .filter(|c| model.cell(*c).weight <= n && keep(*c))
        .collect();
    order.sort_by_key(|&c| (-deg[c as usize], model.cell(c).dim(), c));
    let mut pos = vec![u32::MAX; model.cells().len()];
    for (k, c) in order.iter().enumerate() {
        pos[*c as usize] = k as u32;
    }
    let dims: Vec<usize> = order.iter().map(|c| model.cell(*c).dim()).collect();
    let red = reduce(&Field::new(P31), &dims, |j| {
        model
            .boundary(order[j])
            .into_iter()
            .map(|(f, s)| (pos[f as usize] as usize, s))
            .collect()
    });
    let d = |j: usize| deg[order[j] as usize];
    let mut pairs: Vec<SpectralPair> = red
        .pairs
        .iter()
        .filter(|(b, t)| d(*b) > d(*t))
        .map(|(b, t)| SpectralPair {
            target: d(*b),
            source: d(*t),
            dim: dims[*b],
        })
        .collect();
    pairs.sort();
    let mut essential: Vec<(i64, usize)> = red.essential.iter().map(|j| (d(*j), dims[*j])).collect();
    essential.sort();
    let max_gap = pairs.iter().map(|p| p.gap()).max().unwrap_or(0);
    SpectralRow {
        level: n,
        pairs,
        essential,
        degeneration: if max_gap == 0 { 1 } else { max_gap + 1 },
        cells: order.len(),
    }
}

/// Rows for a window of levels.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralTable {
    pub filtration: Filtration,
    pub rows: Vec<SpectralRow>,
}

impl SpectralTable {
    pub fn build(model: &SublevelModel, filt: &Filtration, levels: &[i64]) -> Result<Self, SpecError> {
        if let Some(n) = levels.iter().find(|n| !model.covers(**n)) {
            return Err(SpecError::NotCovered(*n));
        }
        let deg = cell_degrees(model, filt);
        let rows = levels
            .par_iter()
            .map(|n| spectral_row_with(model, &deg, *n, &|_| true))
            .collect();
        Ok(SpectralTable {
            filtration: filt.clone(),
            rows,
        })
    }

    /// `max_n k(n)` over the window.
    pub fn degeneration(&self) -> usize {
        self.rows.iter().map(|r| r.degeneration).max().unwrap_or(1)
    }

    pub fn row(&self, n: i64) -> Option<&SpectralRow> {
        self.rows.iter().find(|r| r.level == n)
    }

    /// Pages needed to describe every row.
    pub fn pages(&self) -> Vec<Page> {
        let mut v: Vec<Page> = (1..=self.degeneration()).map(Page::Finite).collect();
        v.push(Page::Infinity);
        v
    }
}

/// `E^1` over the integers: homology of the cells of `S_n` of each degree.
pub fn e1_integral(
    model: &SublevelModel,
    filt: &Filtration,
    n: i64,
) -> Result<BTreeMap<(i64, i64), HomologyGroup>, SpecError> {
    if !model.covers(n) {
        return Err(SpecError::NotCovered(n));
    }
    let deg = cell_degrees(model, filt);
    let mut by_deg: BTreeMap<i64, Vec<Vec<u32>>> = BTreeMap::new();
    for (c, cell) in model.cells().iter().enumerate() {
        if cell.weight <= n {
            let v = by_deg.entry(deg[c]).or_insert_with(|| vec![Vec::new(); model.max_dim() + 1]);
            v[cell.dim()].push(c as u32);
        }
    }
    let field = Field::new(P31);
    let mut out = BTreeMap::new();
    let mut local = vec![u32::MAX; model.cells().len()];
    for (d, cells) in by_deg {
        for v in &cells {
            for (k, c) in v.iter().enumerate() {
                local[*c as usize] = k as u32;
            }
        }
        let maxd = cells.len() - 1;
        let mut rank = vec![0usize; maxd + 2];
        let mut tors: Vec<Vec<u64>> = vec![Vec::new(); maxd + 2];
        let mut integral = true;
        for q in 1..=maxd {
            let cols: Vec<Vec<(u32, i64)>> = cells[q]
                .iter()
                .map(|c| {
                    model
                        .boundary(*c)
                        .into_iter()
                        .filter(|(f, _)| deg[*f as usize] == d && model.cell(*f).weight <= n)
                        .map(|(f, s)| (local[f as usize], s))
                        .collect()
                })
                .collect();
            match invariant_factors(cells[q - 1].len(), &cols) {
                Some(r) => {
                    rank[q] = r.rank;
                    tors[q - 1] = r.torsion.iter().map(|t| num_traits::ToPrimitive::to_u64(t).unwrap_or(u64::MAX)).collect();
                }
                None => {
                    integral = false;
                    let fcols = cols.into_iter().map(|c| {
                        let mut v: Vec<(u32, u64)> =
                            c.into_iter().map(|(r, s)| (r, field.from_i64(s))).collect();
                        v.sort_unstable();
                        v
                    });
                    rank[q] = crate::linalg::fp::sparse_rank(&field, cells[q - 1].len(), fcols);
                }
            }
        }
        for q in 0..=maxd {
            let r = cells[q].len() - rank[q] - rank[q + 1];
            if r > 0 || !tors[q].is_empty() {
                out.insert(
                    (d, d + q as i64),
                    HomologyGroup {
                        rank: r,
                        torsion: tors[q].clone(),
                        integral,
                    },
                );
            }
        }
    }
    Ok(out)
}
