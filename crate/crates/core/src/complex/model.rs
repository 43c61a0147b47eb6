//! Cubical complexes of lattice cubes with max-of-vertices weights.

use std::collections::HashMap;

use serde::Serialize;

use super::enumerate::{certified_box, rect_points, sublevel_points};
use super::ComplexError;
use crate::lattice::Weight;

/// A cube `(l, I)`: base point index, direction bitmask, weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub point: u32,
    pub mask: u32,
    pub weight: i64,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.mask.count_ones() as usize
    }
}

/// How the point set of a model was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModelKind {
    /// Every cube of the rectangle `R(0, c)`.
    Rectangle,
    /// Cubes of weight `<= cap` inside a rectangle containing the whole
    /// quadrant sublevel set, so `S_n` is exact for `n <= cap`.
    Quadrant,
}

/// Weighted cubes over a rectangle `0 <= l <= rect`, optionally capped.
#[derive(Debug, Clone)]
pub struct SublevelModel {
    rank: usize,
    rect: Vec<i64>,
    cap: Option<i64>,
    kind: ModelKind,
    coords: Vec<i64>,
    point_weight: Vec<i64>,
    radix: Vec<u128>,
    point_index: HashMap<u128, u32>,
    cells: Vec<Cell>,
    cell_index: HashMap<u64, u32>,
    dim_start: Vec<usize>,
}

/// Number of cubes in `R(0, c)`.
pub fn rectangle_cells(rect: &[i64]) -> u128 {
    rect.iter().map(|c| 2 * (*c as u128) + 1).product()
}

impl SublevelModel {
    /// All cubes of `R(0, rect)`.
    pub fn rectangle(w: &Weight, rect: &[i64], budget: u128) -> Result<Self, ComplexError> {
        let need = rectangle_cells(rect);
        if need > budget {
            return Err(ComplexError::Budget { needed: need, budget });
        }
        let pts = rect_points(w, rect);
        Self::from_points(rect.to_vec(), None, ModelKind::Rectangle, pts, budget)
    }

    /// Cubes of weight `<= cap` of the quadrant; exact for `S_n`, `n <= cap`.
    pub fn quadrant(w: &Weight, cap: i64, budget: u128) -> Result<Self, ComplexError> {
        let Some(rect) = certified_box(w, cap) else {
            return Ok(Self::empty(w.rank(), cap));
        };
        let pts = sublevel_points(w, cap, &rect);
        Self::from_points(rect, Some(cap), ModelKind::Quadrant, pts, budget)
    }

    fn empty(rank: usize, cap: i64) -> Self {
        SublevelModel {
            rank,
            rect: vec![0; rank],
            cap: Some(cap),
            kind: ModelKind::Quadrant,
            coords: Vec::new(),
            point_weight: Vec::new(),
            radix: vec![1; rank],
            point_index: HashMap::new(),
            cells: Vec::new(),
            cell_index: HashMap::new(),
            dim_start: vec![0, 0],
        }
    }

    /// Builds the complex spanned by weighted points.
    ///
    /// A cube is present when all its vertices are; its weight is the max of
    /// the vertex weights. With a cap, points above it are dropped.
    pub fn from_points(
        rect: Vec<i64>,
        cap: Option<i64>,
        kind: ModelKind,
        points: Vec<(Vec<i64>, i64)>,
        budget: u128,
    ) -> Result<Self, ComplexError> {
        let rank = rect.len();
        assert!(rank <= 32, "at most 32 coordinates are supported");
        let mut radix = vec![1u128; rank];
        for i in (0..rank.saturating_sub(1)).rev() {
            radix[i] = radix[i + 1] * (rect[i + 1] as u128 + 1);
        }
        let mut m = SublevelModel {
            rank,
            rect,
            cap,
            kind,
            coords: Vec::new(),
            point_weight: Vec::new(),
            radix,
            point_index: HashMap::new(),
            cells: Vec::new(),
            cell_index: HashMap::new(),
            dim_start: vec![0],
        };
        for (p, wt) in points {
            if cap.is_some_and(|c| wt > c) {
                continue;
            }
            let idx = m.point_weight.len() as u32;
            let key = m.key(&p);
            m.coords.extend_from_slice(&p);
            m.point_weight.push(wt);
            m.point_index.insert(key, idx);
            m.push_cell(Cell { point: idx, mask: 0, weight: wt }, budget)?;
        }
        m.dim_start.push(m.cells.len());
        for q in 0..rank {
            let (lo, hi) = (m.dim_start[q], m.dim_start[q + 1]);
            for c in lo..hi {
                let cell = m.cells[c];
                let top = if cell.mask == 0 { 0 } else { 32 - cell.mask.leading_zeros() as usize };
                for i in top..rank {
                    let Some(np) = m.shift(cell.point, i) else {
                        continue;
                    };
                    let Some(&other) = m.cell_index.get(&cell_key(np, cell.mask)) else {
                        continue;
                    };
                    let weight = cell.weight.max(m.cells[other as usize].weight);
                    m.push_cell(
                        Cell {
                            point: cell.point,
                            mask: cell.mask | (1 << i),
                            weight,
                        },
                        budget,
                    )?;
                }
            }
            m.dim_start.push(m.cells.len());
            if m.dim_start[q + 2] == m.dim_start[q + 1] {
                break;
            }
        }
        Ok(m)
    }

    fn push_cell(&mut self, c: Cell, budget: u128) -> Result<(), ComplexError> {
        if self.cells.len() as u128 >= budget {
            return Err(ComplexError::Budget {
                needed: self.cells.len() as u128 + 1,
                budget,
            });
        }
        self.cell_index
            .insert(cell_key(c.point, c.mask), self.cells.len() as u32);
        self.cells.push(c);
        Ok(())
    }

    fn key(&self, p: &[i64]) -> u128 {
        p.iter().zip(&self.radix).map(|(v, r)| *v as u128 * r).sum()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rect(&self) -> &[i64] {
        &self.rect
    }

    pub fn cap(&self) -> Option<i64> {
        self.cap
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    /// Whether `S_n` of the model is the sublevel set of the whole quadrant
    /// (or rectangle, for rectangle models).
    pub fn covers(&self, n: i64) -> bool {
        self.cap.is_none_or(|c| n <= c)
    }

    pub fn num_points(&self) -> usize {
        self.point_weight.len()
    }

    pub fn point(&self, idx: u32) -> &[i64] {
        let s = idx as usize * self.rank;
        &self.coords[s..s + self.rank]
    }

    pub fn point_weight(&self, idx: u32) -> i64 {
        self.point_weight[idx as usize]
    }

    pub fn point_of(&self, p: &[i64]) -> Option<u32> {
        if p.iter().zip(&self.rect).any(|(v, c)| *v < 0 || v > c) {
            return None;
        }
        self.point_index.get(&self.key(p)).copied()
    }

    /// Index of `point + E_i` if present.
    pub fn shift(&self, point: u32, i: usize) -> Option<u32> {
        let v = self.coords[point as usize * self.rank + i];
        if v >= self.rect[i] {
            return None;
        }
        let key = self.key(self.point(point)) + self.radix[i];
        self.point_index.get(&key).copied()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, idx: u32) -> Cell {
        self.cells[idx as usize]
    }

    pub fn cell_of(&self, point: u32, mask: u32) -> Option<u32> {
        self.cell_index.get(&cell_key(point, mask)).copied()
    }

    pub fn max_dim(&self) -> usize {
        self.dim_start.len().saturating_sub(2)
    }

    /// Indices of the cells of dimension `q`.
    pub fn dim_range(&self, q: usize) -> std::ops::Range<usize> {
        if q + 1 >= self.dim_start.len() {
            return 0..0;
        }
        self.dim_start[q]..self.dim_start[q + 1]
    }

    pub fn min_weight(&self) -> Option<i64> {
        self.point_weight.iter().min().copied()
    }

    pub fn max_weight(&self) -> Option<i64> {
        self.cells.iter().map(|c| c.weight).max()
    }

    /// Boundary `sum_k (-1)^k [(l + E_{i_k}, I - i_k) - (l, I - i_k)]`.
    pub fn boundary(&self, idx: u32) -> Vec<(u32, i64)> {
        let c = self.cells[idx as usize];
        let mut out = Vec::with_capacity(2 * c.dim());
        let mut k = 0;
        for i in 0..self.rank {
            if c.mask & (1 << i) == 0 {
                continue;
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let face = c.mask & !(1 << i);
            let up = self.shift(c.point, i).expect("cube vertices are present");
            out.push((self.cell_of(up, face).expect("faces are present"), sign));
            out.push((self.cell_of(c.point, face).expect("faces are present"), -sign));
            k += 1;
        }
        out
    }

    /// Vertices `l + E_J`, `J` a subset of the cell's directions.
    pub fn cell_vertices(&self, idx: u32) -> Vec<u32> {
        let c = self.cells[idx as usize];
        let mut out = vec![c.point];
        for i in 0..self.rank {
            if c.mask & (1 << i) != 0 {
                let n = out.len();
                for k in 0..n {
                    out.push(self.shift(out[k], i).expect("cube vertices are present"));
                }
            }
        }
        out
    }
}

fn cell_key(point: u32, mask: u32) -> u64 {
    (point as u64) << 32 | mask as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_of_a2() {
        let w = Weight {
            g: vec![vec![2, -1], vec![-1, 2]],
            kappa: vec![0, 0],
        };
        let m = SublevelModel::rectangle(&w, &[1, 1], 1000).unwrap();
        let mut zero: Vec<i64> = m.dim_range(0).map(|c| m.cells()[c].weight).collect();
        zero.sort();
        assert_eq!(zero, vec![0, 1, 1, 1]);
        let two: Vec<i64> = m.dim_range(2).map(|c| m.cells()[c].weight).collect();
        assert_eq!(two, vec![1]);
        assert_eq!(m.cells().len(), 9);
        // boundary of boundary vanishes
        for c in m.dim_range(2) {
            let mut acc: HashMap<u32, i64> = HashMap::new();
            for (f, s) in m.boundary(c as u32) {
                for (g, t) in m.boundary(f) {
                    *acc.entry(g).or_default() += s * t;
                }
            }
            assert!(acc.values().all(|v| *v == 0));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let w = Weight {
            g: vec![vec![2]],
            kappa: vec![0],
        };
        assert!(matches!(
            SublevelModel::rectangle(&w, &[10], 5),
            Err(ComplexError::Budget { .. })
        ));
    }
}
