//! Column reduction of filtered boundary matrices over a prime field.

use crate::linalg::fp::{axpy, Field, SparseVec};

/// Result of reducing a filtered complex. Positions refer to the filtration
/// order passed in.
#[derive(Debug, Clone, Default)]
pub struct Reduction {
    /// `(birth, death)` position pairs.
    pub pairs: Vec<(usize, usize)>,
    /// Positions of cells that never get paired.
    pub essential: Vec<usize>,
}

/// Reduces a filtered complex given in filtration order.
///
/// `dims[j]` is the dimension of the cell at position `j`; `boundary(j)`
/// lists faces by position (faces outside the complex already dropped) with
/// integer coefficients. Uses clearing, high dimensions first.
pub fn reduce<F>(field: &Field, dims: &[usize], boundary: F) -> Reduction
where
    F: Fn(usize) -> Vec<(usize, i64)>,
{
    let n = dims.len();
    let max_dim = dims.iter().copied().max().unwrap_or(0);
    let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); max_dim + 1];
    for (j, d) in dims.iter().enumerate() {
        by_dim[*d].push(j);
    }
    let mut cleared = vec![false; n];
    let mut paired = vec![false; n];
    let mut pivot_of: Vec<Option<SparseVec>> = vec![None; n];
    let mut pairs = Vec::new();
    for q in (1..=max_dim).rev() {
        for &j in &by_dim[q] {
            if cleared[j] {
                continue;
            }
            let mut col: SparseVec = {
                let mut b: Vec<(u32, u64)> = boundary(j)
                    .into_iter()
                    .map(|(p, c)| (p as u32, field.from_i64(c)))
                    .filter(|e| e.1 != 0)
                    .collect();
                b.sort_unstable_by_key(|e| e.0);
                // merge repeated faces
                let mut m: Vec<(u32, u64)> = Vec::with_capacity(b.len());
                for (p, c) in b {
                    match m.last_mut() {
                        Some(last) if last.0 == p => last.1 = field.add(last.1, c),
                        _ => m.push((p, c)),
                    }
                }
                m.retain(|e| e.1 != 0);
                m
            };
            while let Some(&(low, val)) = col.last() {
                match &pivot_of[low as usize] {
                    Some(u) => {
                        let c = field.neg(field.mul(val, field.inv(u.last().unwrap().1)));
                        col = axpy(field, &col, c, u);
                    }
                    None => break,
                }
            }
            if let Some(&(low, _)) = col.last() {
                let low = low as usize;
                pairs.push((low, j));
                paired[low] = true;
                paired[j] = true;
                cleared[low] = true;
                pivot_of[low] = Some(col);
            }
        }
    }
    let essential = (0..n).filter(|j| !paired[*j]).collect();
    pairs.sort_unstable();
    Reduction { pairs, essential }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::fp::P31;

    #[test]
    fn circle_then_disk() {
        // vertices 0,1,2; edges 3=(0,1), 4=(1,2), 5=(0,2); triangle 6
        let dims = [0, 0, 0, 1, 1, 1, 2];
        let bd = |j: usize| -> Vec<(usize, i64)> {
            match j {
                3 => vec![(1, 1), (0, -1)],
                4 => vec![(2, 1), (1, -1)],
                5 => vec![(2, 1), (0, -1)],
                6 => vec![(3, 1), (4, 1), (5, -1)],
                _ => vec![],
            }
        };
        let r = reduce(&Field::new(P31), &dims, bd);
        assert_eq!(r.pairs, vec![(1, 3), (2, 4), (5, 6)]);
        assert_eq!(r.essential, vec![0]);
    }
}
