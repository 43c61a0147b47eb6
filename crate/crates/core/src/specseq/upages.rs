//! Explicit pages over a prime field and the map `U` between consecutive
//! levels.
//!
//! With `F_p` spanned by cells of degree `>= -p`,
//! `Z^r_p = {x in F_p : dx in F_{p-r}}` and
//! `E^r_p = Z^r_p / (Z^{r-1}_{p-1} + d Z^{r-1}_{p+r-1})`.
//! `U` is induced by the inclusion `S_n -> S_{n+1}`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::pages::cell_degrees;
use super::{Filtration, SpecError};
use crate::complex::SublevelModel;
use crate::linalg::fp::{kernel, Field, Quotient, Subspace, P31};

/// Largest `S_{n+1}` handled by the dense construction.
pub const PAGE_LIMIT: usize = 4000;

#[derive(Debug, Clone, Serialize)]
pub struct PageMaps {
    pub level: i64,
    pub page: usize,
    /// `(d, q) -> rank` of `E^r` at levels `n` and `n + 1`.
    pub ranks_n: BTreeMap<(i64, i64), usize>,
    pub ranks_next: BTreeMap<(i64, i64), usize>,
    /// Matrix of `U` on each `(d, q)` entry (rows: level `n + 1`).
    pub maps: BTreeMap<(i64, i64), Vec<Vec<u64>>>,
    /// `U d^r = d^r U` on every entry.
    pub commutes: bool,
}

impl PageMaps {
    pub fn u_rank(&self, d: i64, q: i64) -> usize {
        let f = Field::new(P31);
        self.maps
            .get(&(d, q))
            .map_or(0, |m| crate::linalg::fp::dense_rank(&f, m))
    }
}

struct Pages<'a> {
    f: Field,
    cells: Vec<Vec<u32>>,
    deg: &'a [i64],
    /// dense boundary `b -> (b-1)` as columns over local indices
    bd: Vec<Vec<Vec<(usize, u64)>>>,
}

impl Pages<'_> {
    fn ambient(&self, b: usize) -> usize {
        self.cells.get(b).map_or(0, |v| v.len())
    }

    /// Cells of dimension `b` in `S_m` with degree `>= d`.
    fn filtered(&self, model: &SublevelModel, m: i64, b: usize, d: i64) -> Vec<usize> {
        (0..self.ambient(b))
            .filter(|k| {
                let c = self.cells[b][*k];
                model.cell(c).weight <= m && self.deg[c as usize] >= d
            })
            .collect()
    }

    /// `Z^r` at degree `d` in dimension `b` for level `m`.
    fn z(&self, model: &SublevelModel, m: i64, b: usize, d: i64, r: usize) -> Subspace {
        let n = self.ambient(b);
        let vars = self.filtered(model, m, b, d);
        if b == 0 || r == 0 {
            return Subspace::span(
                &self.f,
                n,
                vars.iter().map(|k| {
                    let mut v = vec![0u64; n];
                    v[*k] = 1;
                    v
                }),
            );
        }
        let bound = d + r as i64;
        let nrows = self.ambient(b - 1);
        let mut rows = vec![vec![0u64; vars.len()]; nrows];
        for (j, k) in vars.iter().enumerate() {
            for (row, v) in &self.bd[b][*k] {
                rows[*row][j] = *v;
            }
        }
        let constrained: Vec<Vec<u64>> = (0..nrows)
            .filter(|row| self.deg[self.cells[b - 1][*row] as usize] < bound)
            .map(|row| rows[row].clone())
            .filter(|r| r.iter().any(|x| *x != 0))
            .collect();
        let ker = kernel(&self.f, &constrained, vars.len());
        Subspace::span(
            &self.f,
            n,
            ker.into_iter().map(|kv| {
                let mut v = vec![0u64; n];
                for (j, k) in vars.iter().enumerate() {
                    v[*k] = kv[j];
                }
                v
            }),
        )
    }

    fn boundary(&self, b: usize, x: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.ambient(b - 1)];
        for (k, c) in x.iter().enumerate() {
            if *c != 0 {
                for (row, v) in &self.bd[b][k] {
                    out[*row] = self.f.add(out[*row], self.f.mul(*c, *v));
                }
            }
        }
        out
    }

    fn page(&self, model: &SublevelModel, m: i64, b: usize, d: i64, r: usize) -> Quotient {
        let z = self.z(model, m, b, d, r);
        let mut den = self.z(model, m, b, d + 1, r - 1);
        if b + 1 < self.cells.len() {
            let zz = self.z(model, m, b + 1, d - r as i64 + 1, r - 1);
            for v in &zz.basis {
                den.insert(&self.f, self.boundary(b + 1, v));
            }
        }
        Quotient::new(&self.f, &z, &den)
    }
}

/// Pages `E^r` at levels `n` and `n + 1` with the map `U` between them.
pub fn u_on_pages(model: &SublevelModel, filt: &Filtration, n: i64, r: usize) -> Result<PageMaps, SpecError> {
    assert!(r >= 1, "pages start at 1");
    if !model.covers(n + 1) {
        return Err(SpecError::NotCovered(n + 1));
    }
    let deg = cell_degrees(model, filt);
    let maxd = model.max_dim();
    let mut cells: Vec<Vec<u32>> = vec![Vec::new(); maxd + 1];
    let mut local = vec![usize::MAX; model.cells().len()];
    let mut total = 0;
    for (q, v) in cells.iter_mut().enumerate() {
        for c in model.dim_range(q) {
            if model.cells()[c].weight <= n + 1 {
                local[c] = v.len();
                v.push(c as u32);
                total += 1;
            }
        }
    }
    if total > PAGE_LIMIT {
        return Err(SpecError::TooLarge(total));
    }
    let f = Field::new(P31);
    let bd: Vec<Vec<Vec<(usize, u64)>>> = (0..=maxd)
        .map(|b| {
            cells[b]
                .iter()
                .map(|c| {
                    if b == 0 {
                        return Vec::new();
                    }
                    model
                        .boundary(*c)
                        .into_iter()
                        .map(|(g, s)| (local[g as usize], f.from_i64(s)))
                        .collect()
                })
                .collect()
        })
        .collect();
    let pages = Pages {
        f,
        cells,
        deg: &deg,
        bd,
    };
    let mut degrees: Vec<i64> = pages.cells.iter().flatten().map(|c| deg[*c as usize]).collect();
    degrees.sort_unstable();
    degrees.dedup();

    let mut out = PageMaps {
        level: n,
        page: r,
        ranks_n: BTreeMap::new(),
        ranks_next: BTreeMap::new(),
        maps: BTreeMap::new(),
        commutes: true,
    };
    let mut quot: BTreeMap<(i64, usize, i64), Quotient> = BTreeMap::new();
    for &d in &degrees {
        for b in 0..=maxd {
            for m in [n, n + 1] {
                let q = pages.page(model, m, b, d, r);
                if q.dim() > 0 {
                    let key = (d, d + b as i64);
                    if m == n {
                        out.ranks_n.insert(key, q.dim());
                    } else {
                        out.ranks_next.insert(key, q.dim());
                    }
                }
                quot.insert((d, b, m), q);
            }
        }
    }
    let empty = |f: &Field, amb: usize| Quotient::new(f, &Subspace::zero(amb), &Subspace::zero(amb));
    for &d in &degrees {
        for b in 0..=maxd {
            let src = &quot[&(d, b, n)];
            let dst = &quot[&(d, b, n + 1)];
            if src.dim() == 0 && dst.dim() == 0 {
                continue;
            }
            // columns: images of source representatives
            let cols: Vec<Vec<u64>> = src
                .reps
                .iter()
                .map(|x| dst.coords(&f, x).expect("U preserves cycles"))
                .collect();
            let matrix: Vec<Vec<u64>> = (0..dst.dim())
                .map(|i| cols.iter().map(|c| c[i]).collect())
                .collect();
            if b > 0 {
                let td = d + r as i64;
                let e1 = empty(&f, pages.ambient(b - 1));
                let tgt_n = quot.get(&(td, b - 1, n)).unwrap_or(&e1);
                let tgt_next = quot.get(&(td, b - 1, n + 1)).unwrap_or(&e1);
                let tmap: Vec<Vec<u64>> = tgt_n
                    .reps
                    .iter()
                    .map(|x| tgt_next.coords(&f, x).expect("U preserves cycles"))
                    .collect();
                for (x, ux) in src.reps.iter().zip(&cols) {
                    let dx = pages.boundary(b, x);
                    let left = tgt_n.coords(&f, &dx).map(|c| {
                        let mut acc = vec![0u64; tgt_next.dim()];
                        for (k, ck) in c.iter().enumerate() {
                            for (i, v) in tmap[k].iter().enumerate() {
                                acc[i] = f.add(acc[i], f.mul(*ck, *v));
                            }
                        }
                        acc
                    });
                    // d^r(Ux) using the image representative combination
                    let mut y = vec![0u64; pages.ambient(b)];
                    for (k, ck) in ux.iter().enumerate() {
                        for (i, v) in dst.reps[k].iter().enumerate() {
                            y[i] = f.add(y[i], f.mul(*ck, *v));
                        }
                    }
                    let right = tgt_next.coords(&f, &pages.boundary(b, &y));
                    if left.is_none() || right.is_none() || left != right {
                        out.commutes = false;
                    }
                }
            }
            if !matrix.is_empty() && !matrix[0].is_empty() {
                out.maps.insert((d, d + b as i64), matrix);
            } else if src.dim() > 0 || dst.dim() > 0 {
                out.maps
                    .insert((d, d + b as i64), vec![vec![0; src.dim()]; dst.dim()]);
            }
        }
    }
    Ok(out)
}

/// Outcome of the nilpotency check of `U` on `(E^1)_n`.
#[derive(Debug, Clone, Serialize)]
pub struct TorsionCheck {
    pub level: i64,
    /// `max_{l in S_n} w(l + E_i) - n`.
    pub delta: i64,
    /// Longest run of `U` on `(E^1)_n` before a class dies.
    pub longest: i64,
    pub holds: bool,
}

/// Checks `U^delta(n) = 0` on `(E^1)_n` using the `Z[U]`-structure of `E^1`.
///
/// `vertex` is a model coordinate; `n + delta(n)` must not exceed the cap.
pub fn torsion_check(
    model: &SublevelModel,
    filt: &Filtration,
    w: &crate::lattice::Weight,
    n: i64,
    vertex: usize,
) -> Result<TorsionCheck, SpecError> {
    let mut delta = i64::MIN;
    for p in 0..model.num_points() as u32 {
        if model.point_weight(p) <= n {
            let mut l = model.point(p).to_vec();
            l[vertex] += 1;
            delta = delta.max(w.chi(&l) - n);
        }
    }
    if delta == i64::MIN {
        return Ok(TorsionCheck {
            level: n,
            delta: 0,
            longest: 0,
            holds: true,
        });
    }
    if !model.covers(n + delta) {
        return Err(SpecError::NotCovered(n + delta));
    }
    let modules = super::multigraded::e1_zu_modules(model, filt);
    let mut longest = 0;
    let mut holds = true;
    for m in modules.values() {
        for &a in &m.towers {
            if -a / 2 <= n {
                holds = false;
            }
        }
        for &(a, len) in m.blocks.keys() {
            let birth = -a / 2;
            if birth <= n && n < birth + len {
                longest = longest.max(birth + len - n);
            }
        }
    }
    Ok(TorsionCheck {
        level: n,
        delta,
        longest,
        holds: holds && longest <= delta,
    })
}
