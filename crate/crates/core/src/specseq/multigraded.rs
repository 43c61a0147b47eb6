//! Refinements of `E^1`: the `Z[U]`-module structure across levels, the
//! splitting by the support coordinates of the base point, and the
//! splitting by connected components of `S_n`.

use std::collections::{BTreeMap, HashMap};

use super::pages::{cell_degrees, spectral_row_with, SpectralRow};
use super::{Filtration, SpecError};
use crate::complex::persistence::reduce;
use crate::complex::{Bar, Barcode, SublevelModel, ZUModule};
use crate::linalg::fp::{sparse_rank, Field, P31};

/// `E^1_{-d,q}` as `Z[U]`-modules, from the weight persistence of the cells
/// of degree exactly `d`. Valid up to the model cap.
pub fn e1_zu_modules(model: &SublevelModel, filt: &Filtration) -> BTreeMap<(i64, i64), ZUModule> {
    let deg = cell_degrees(model, filt);
    let mut by_deg: BTreeMap<i64, Vec<u32>> = BTreeMap::new();
    for c in 0..model.cells().len() {
        by_deg.entry(deg[c]).or_default().push(c as u32);
    }
    let field = Field::new(P31);
    let mut out = BTreeMap::new();
    let mut pos = vec![u32::MAX; model.cells().len()];
    for (d, mut cells) in by_deg {
        cells.sort_by_key(|&c| (model.cell(c).weight, model.cell(c).dim(), c));
        for (k, c) in cells.iter().enumerate() {
            pos[*c as usize] = k as u32;
        }
        let dims: Vec<usize> = cells.iter().map(|c| model.cell(*c).dim()).collect();
        let red = reduce(&field, &dims, |j| {
            model
                .boundary(cells[j])
                .into_iter()
                .filter(|(f, _)| deg[*f as usize] == d)
                .map(|(f, s)| (pos[f as usize] as usize, s))
                .collect()
        });
        let w = |j: usize| model.cell(cells[j]).weight;
        let mut bars: Vec<Bar> = red
            .pairs
            .iter()
            .filter(|(b, t)| w(*b) < w(*t))
            .map(|(b, t)| Bar {
                dim: dims[*b],
                birth: w(*b),
                death: Some(w(*t)),
            })
            .collect();
        bars.extend(red.essential.iter().map(|j| Bar {
            dim: dims[*j],
            birth: w(*j),
            death: None,
        }));
        bars.sort();
        let code = Barcode {
            bars,
            cap: model.cap(),
            modulus: field.p,
        };
        for b in 0..=code.max_dim() {
            let m = code.zu_module(b);
            if !m.is_zero() {
                out.insert((d, d + b as i64), m);
            }
        }
    }
    out
}

/// `(E^1_{-l~, q})_n` for the support projections `l~` of base points:
/// `(l~, b) -> rank`, where `b = q - d` is the homological degree.
pub fn multigraded_e1(
    model: &SublevelModel,
    filt: &Filtration,
    n: i64,
) -> Result<BTreeMap<(Vec<i64>, usize), usize>, SpecError> {
    if !model.covers(n) {
        return Err(SpecError::NotCovered(n));
    }
    let proj = |c: u32| -> Vec<i64> {
        let p = model.point(model.cell(c).point);
        filt.support.iter().map(|i| p[*i]).collect()
    };
    let mut groups: BTreeMap<Vec<i64>, Vec<Vec<u32>>> = BTreeMap::new();
    for (c, cell) in model.cells().iter().enumerate() {
        if cell.weight <= n {
            let g = groups
                .entry(proj(c as u32))
                .or_insert_with(|| vec![Vec::new(); model.max_dim() + 1]);
            g[cell.dim()].push(c as u32);
        }
    }
    let field = Field::new(P31);
    let mut local: HashMap<u32, u32> = HashMap::new();
    let mut out = BTreeMap::new();
    for (key, cells) in groups {
        local.clear();
        for v in &cells {
            for (k, c) in v.iter().enumerate() {
                local.insert(*c, k as u32);
            }
        }
        let maxd = cells.len() - 1;
        let mut rank = vec![0usize; maxd + 2];
        for q in 1..=maxd {
            let cols = cells[q].iter().map(|c| {
                let mut v: Vec<(u32, u64)> = model
                    .boundary(*c)
                    .into_iter()
                    .filter_map(|(f, s)| {
                        let cell = model.cell(f);
                        if cell.weight > n || cell.dim() + 1 != q {
                            return None;
                        }
                        if proj(f) != key {
                            return None;
                        }
                        local.get(&f).map(|r| (*r, field.from_i64(s)))
                    })
                    .collect();
                v.sort_unstable();
                v
            });
            rank[q] = sparse_rank(&field, cells[q - 1].len(), cols);
        }
        for q in 0..=maxd {
            let r = cells[q].len() - rank[q] - rank[q + 1];
            if r > 0 {
                out.insert((key.clone(), q), r);
            }
        }
    }
    Ok(out)
}

/// The spectral sequence of each connected component of `S_n`, keyed by the
/// component's oldest vertex.
pub fn component_split(
    model: &SublevelModel,
    filt: &Filtration,
    n: i64,
) -> Result<Vec<(u32, SpectralRow)>, SpecError> {
    if !model.covers(n) {
        return Err(SpecError::NotCovered(n));
    }
    let np = model.num_points();
    let mut parent: Vec<u32> = (0..np as u32).collect();
    fn find(p: &mut [u32], mut x: u32) -> u32 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    for c in model.dim_range(1) {
        let cell = model.cells()[c];
        if cell.weight > n {
            continue;
        }
        let i = cell.mask.trailing_zeros() as usize;
        let a = find(&mut parent, cell.point);
        let b = find(&mut parent, model.shift(cell.point, i).unwrap());
        if a != b {
            parent[a.max(b) as usize] = a.min(b);
        }
    }
    let mut comp = vec![0u32; np];
    let mut reps: BTreeMap<(i64, u32), u32> = BTreeMap::new();
    for p in 0..np as u32 {
        comp[p as usize] = find(&mut parent, p);
    }
    let mut oldest: HashMap<u32, (i64, u32)> = HashMap::new();
    for p in 0..np as u32 {
        if model.point_weight(p) > n {
            continue;
        }
        let key = (model.point_weight(p), p);
        let e = oldest.entry(comp[p as usize]).or_insert(key);
        if key < *e {
            *e = key;
        }
    }
    for (root, key) in &oldest {
        reps.insert(*key, *root);
    }
    let deg = cell_degrees(model, filt);
    Ok(reps
        .into_iter()
        .map(|((_, rep), root)| {
            let keep = |c: u32| comp[model.cell(c).point as usize] == root;
            (rep, spectral_row_with(model, &deg, n, &keep))
        })
        .collect())
}
