//! The filtration `F_{-d} H_b(S_n) = im(H_b(S_n cap X_{-d}) -> H_b(S_n))`,
//! computed from ranks alone, independently of the pages.
//!
//! With `A = S_n cap X_{-d}` and `X = S_n`:
//! `rank im = dim C_b(A) - rank d_b^A - rank d_{b+1}^X + rank d_{b+1}^{(X,A)}`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::pages::cell_degrees;
use super::{Filtration, SpecError};
use crate::complex::SublevelModel;
use crate::linalg::fp::{lowest_pivots, Field, SparseVec, P31};

#[derive(Debug, Clone, Serialize)]
pub struct AbutmentRow {
    pub level: i64,
    /// For each `b`: `(d, rank F_{-d} H_b)` at every degree where cells start.
    pub ladders: BTreeMap<usize, Vec<(i64, usize)>>,
    /// Graded pieces `(d, q) -> rank`, `q = b + d`.
    pub graded: BTreeMap<(i64, i64), usize>,
}

impl AbutmentRow {
    /// Largest `d` with a nonzero graded piece in homological degree `b`.
    pub fn max_degree(&self, b: usize) -> Option<i64> {
        self.graded
            .iter()
            .filter(|((d, q), r)| (q - d) as usize == b && **r > 0)
            .map(|((d, _), _)| *d)
            .max()
    }
}

pub fn abutment_row(model: &SublevelModel, filt: &Filtration, n: i64) -> Result<AbutmentRow, SpecError> {
    if !model.covers(n) {
        return Err(SpecError::NotCovered(n));
    }
    let deg = cell_degrees(model, filt);
    let field = Field::new(P31);
    let maxd = model.max_dim();
    // local indices per dimension
    let mut local = vec![u32::MAX; model.cells().len()];
    let mut by_dim: Vec<Vec<u32>> = vec![Vec::new(); maxd + 2];
    for q in 0..=maxd {
        for c in model.dim_range(q) {
            if model.cells()[c].weight <= n {
                local[c] = by_dim[q].len() as u32;
                by_dim[q].push(c as u32);
            }
        }
    }
    let mut degrees: Vec<i64> = by_dim.iter().flatten().map(|c| deg[*c as usize]).collect();
    degrees.sort_unstable();
    degrees.dedup();
    // rows of dimension b listed by decreasing degree
    let mut row_pos = vec![u32::MAX; model.cells().len()];
    let mut by_deg_desc: Vec<Vec<u32>> = by_dim.clone();
    for v in by_deg_desc.iter_mut() {
        v.sort_by_key(|c| (-deg[*c as usize], *c));
        for (k, c) in v.iter().enumerate() {
            row_pos[*c as usize] = k as u32;
        }
    }
    let column = |c: u32| -> SparseVec {
        let mut v: Vec<(u32, u64)> = model
            .boundary(c)
            .into_iter()
            .map(|(f, s)| (row_pos[f as usize], field.from_i64(s)))
            .collect();
        v.sort_unstable();
        v
    };
    // degrees of pivot columns of d_b taken in decreasing degree, and
    // degrees of pivot rows of d_b taken in increasing degree
    let mut col_piv: Vec<Vec<i64>> = vec![Vec::new(); maxd + 2];
    let mut row_piv: Vec<Vec<i64>> = vec![Vec::new(); maxd + 2];
    for b in 1..=maxd {
        let desc = &by_deg_desc[b];
        let nrows = by_dim[b - 1].len();
        let piv = lowest_pivots(&field, nrows, desc.iter().map(|c| column(*c)));
        col_piv[b] = desc.iter().zip(&piv).filter(|(_, p)| p.is_some()).map(|(c, _)| deg[*c as usize]).collect();
        let piv = lowest_pivots(&field, nrows, desc.iter().rev().map(|c| column(*c)));
        row_piv[b] = piv.iter().flatten().map(|r| deg[by_deg_desc[b - 1][*r as usize] as usize]).collect();
    }
    let rank_x: Vec<usize> = (0..=maxd + 1).map(|b| col_piv[b].len()).collect();
    let per_degree: Vec<Result<Vec<usize>, SpecError>> = degrees
        .iter()
        .rev()
        .map(|&d| {
            (0..=maxd)
                .map(|b| {
                    let n_a = by_dim[b].iter().filter(|c| deg[**c as usize] >= d).count();
                    let rk_a = col_piv[b].iter().filter(|e| **e >= d).count();
                    let rk_rel = row_piv[b + 1].iter().filter(|e| **e < d).count();
                    let im = (n_a + rk_rel) as i64 - (rk_a + rank_x[b + 1]) as i64;
                    usize::try_from(im).map_err(|_| SpecError::Mismatch(format!("negative image rank at d = {d}")))
                })
                .collect()
        })
        .collect();
    let mut ladders: BTreeMap<usize, Vec<(i64, usize)>> = BTreeMap::new();
    for (&d, ims) in degrees.iter().rev().zip(per_degree) {
        for (b, im) in ims?.into_iter().enumerate() {
            ladders.entry(b).or_default().push((d, im));
        }
    }
    let mut graded = BTreeMap::new();
    for (b, ladder) in &ladders {
        // ladder is ordered by decreasing d
        let mut above = 0usize;
        for (d, r) in ladder {
            if *r < above {
                return Err(SpecError::Mismatch(format!("abutment ladder not monotone at d = {d}")));
            }
            if *r > above {
                graded.insert((*d, *d + *b as i64), *r - above);
            }
            above = *r;
        }
    }
    for ladder in ladders.values_mut() {
        ladder.reverse();
    }
    Ok(AbutmentRow {
        level: n,
        ladders,
        graded,
    })
}
