//! Integral elimination of sparse boundary matrices.
//!
//! Unit pivots are removed first (Markowitz order); what remains goes to the
//! dense Smith form when small enough.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::snf::smith_normal_form;

/// Rank and non-unit invariant factors of an integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralRank {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Largest leftover block (rows times columns) handed to the dense Smith form.
pub const DENSE_LIMIT: usize = 90_000;

/// Invariant factors of the matrix with the given sparse columns.
///
/// Returns `None` when an entry overflows or the non-unit remainder is too
/// large for the dense step.
pub fn invariant_factors(nrows: usize, cols: &[Vec<(u32, i64)>]) -> Option<IntegralRank> {
    let mut col: Vec<BTreeMap<u32, i64>> = cols
        .iter()
        .map(|c| c.iter().filter(|e| e.1 != 0).copied().collect())
        .collect();
    let mut row: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); nrows];
    for (j, c) in col.iter().enumerate() {
        for &r in c.keys() {
            row[r as usize].insert(j as u32);
        }
    }
    let mut alive = vec![true; col.len()];
    let mut rank = 0usize;

    loop {
        let mut order: Vec<usize> = (0..col.len()).filter(|j| alive[*j] && !col[*j].is_empty()).collect();
        order.sort_by_key(|j| col[*j].len());
        let mut progress = false;
        for j in order {
            if !alive[j] {
                continue;
            }
            let pick = col[j]
                .iter()
                .filter(|(_, v)| v.abs() == 1)
                .min_by_key(|(r, _)| row[**r as usize].len())
                .map(|(r, v)| (*r, *v));
            let Some((r, pv)) = pick else {
                continue;
            };
            let pivot_col = std::mem::take(&mut col[j]);
            for &rr in pivot_col.keys() {
                row[rr as usize].remove(&(j as u32));
            }
            let others: Vec<u32> = row[r as usize].iter().copied().collect();
            for k in others {
                let k = k as usize;
                let factor = col[k][&r] * pv;
                for (&rr, &v) in &pivot_col {
                    let cur = col[k].get(&rr).copied().unwrap_or(0);
                    let nv = cur.checked_sub(factor.checked_mul(v)?)?;
                    if nv == 0 {
                        col[k].remove(&rr);
                        row[rr as usize].remove(&(k as u32));
                    } else {
                        if cur == 0 {
                            row[rr as usize].insert(k as u32);
                        }
                        col[k].insert(rr, nv);
                    }
                }
            }
            debug_assert!(row[r as usize].is_empty());
            alive[j] = false;
            rank += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }

    let rest_cols: Vec<usize> = (0..col.len()).filter(|j| alive[*j] && !col[*j].is_empty()).collect();
    if rest_cols.is_empty() {
        return Some(IntegralRank {
            rank,
            torsion: Vec::new(),
        });
    }
    let rest_rows: Vec<u32> = {
        let s: BTreeSet<u32> = rest_cols.iter().flat_map(|j| col[*j].keys().copied()).collect();
        s.into_iter().collect()
    };
    if rest_rows.len() * rest_cols.len() > DENSE_LIMIT {
        return None;
    }
    let index: BTreeMap<u32, usize> = rest_rows.iter().enumerate().map(|(i, r)| (*r, i)).collect();
    let mut dense = vec![vec![BigInt::zero(); rest_cols.len()]; rest_rows.len()];
    for (jj, j) in rest_cols.iter().enumerate() {
        for (r, v) in &col[*j] {
            dense[index[r]][jj] = BigInt::from(*v);
        }
    }
    let smith = smith_normal_form(&dense);
    let mut torsion = Vec::new();
    for d in smith.diagonal {
        rank += 1;
        if !d.is_one() {
            torsion.push(d);
        }
    }
    Some(IntegralRank { rank, torsion })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_plane_like() {
        // a single column 2 gives Z/2
        let r = invariant_factors(1, &[vec![(0, 2)]]).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn unit_elimination_matches_dense() {
        let cols = vec![
            vec![(0, 1), (1, -1)],
            vec![(1, 1), (2, -1)],
            vec![(0, 1), (2, -1)],
            vec![(2, 3)],
        ];
        let r = invariant_factors(3, &cols).unwrap();
        assert_eq!(r.rank, 3);
        assert_eq!(r.torsion, vec![BigInt::from(3)]);
        let cols = vec![vec![(0, 2), (1, 4)], vec![(0, 6), (1, 8)]];
        let r = invariant_factors(2, &cols).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.torsion, vec![BigInt::from(2), BigInt::from(4)]);
    }
}
