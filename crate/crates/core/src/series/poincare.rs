//! Poincare series of the pages and the cube-sum formulas for them.

use std::collections::BTreeMap;

use super::{Series, SeriesError};
use crate::complex::enumerate::{certified_box, sublevel_points};
use crate::complex::SublevelModel;
use crate::lattice::{HClass, LatticeContext, Weight};
use crate::specseq::{multigraded_e1, Filtration, Page, SpectralTable};

/// Levels `min_weight - 1 ..= cap` needed for a complete series window.
pub fn pe_levels(model: &SublevelModel, top: i64) -> Vec<i64> {
    let lo = model.min_weight().unwrap_or(0) - 1;
    (lo..=top).collect()
}

fn check_levels(table: &SpectralTable) -> Result<i64, SeriesError> {
    let rows = &table.rows;
    let Some(first) = rows.first() else {
        return Err(SeriesError::Window("empty table".into()));
    };
    if first.cells != 0 {
        return Err(SeriesError::Window(format!(
            "lowest level {} is not below the minimal weight",
            first.level
        )));
    }
    for w in rows.windows(2) {
        if w[1].level != w[0].level + 1 {
            return Err(SeriesError::Window(format!(
                "levels {} and {} are not consecutive",
                w[0].level, w[1].level
            )));
        }
    }
    Ok(rows.last().unwrap().level)
}

/// `PE_k(T, Q, h) = sum rank (E^k_{-d,q})_n T^d Q^n h^{-d+q}`.
pub fn pe_series(table: &SpectralTable, page: Page) -> Result<Series, SeriesError> {
    let top = check_levels(table)?;
    let mut s = Series::new(&["T", "Q", "h"]).with_window(1, top);
    for row in &table.rows {
        for ((d, q), r) in row.entries(page) {
            s.add_term(vec![d, row.level, q - d], r as i64);
        }
    }
    Ok(s)
}

/// Multivariable `PE_1` in `T_i` (`i` in the support), `Q` and `h`.
pub fn multigraded_pe1(
    model: &SublevelModel,
    filt: &Filtration,
    levels: &[i64],
) -> Result<Series, SeriesError> {
    let mut names: Vec<String> = filt.support.iter().map(|i| format!("T{}", i + 1)).collect();
    names.push("Q".into());
    names.push("h".into());
    let refs: Vec<&str> = names.iter().map(|v| v.as_str()).collect();
    let k = filt.support.len();
    let top = *levels.iter().max().ok_or_else(|| SeriesError::Window("no levels".into()))?;
    let mut s = Series::new(&refs).with_window(k, top);
    for &n in levels {
        for ((lt, b), r) in multigraded_e1(model, filt, n)? {
            let mut key: Vec<i64> = lt
                .iter()
                .zip(&filt.support)
                .map(|(l, i)| l * filt.coeffs[*i])
                .collect();
            key.push(n);
            key.push(b as i64);
            s.add_term(key, r as i64);
        }
    }
    Ok(s)
}

/// Weights `w(l, I)` of all cubes at `l`, indexed by the bitmask of `I`.
pub fn cube_weights(w: &Weight, l: &[i64]) -> Vec<i64> {
    let r = w.rank();
    let mut chi = vec![0i64; 1 << r];
    chi[0] = w.chi(l);
    let mut v = l.to_vec();
    for mask in 1usize..1 << r {
        let i = mask.trailing_zeros() as usize;
        let prev = mask & (mask - 1);
        // chi(l + E_J) from chi(l + E_{J - i}) by one step
        for (k, x) in v.iter_mut().enumerate() {
            *x = l[k] + i64::from(prev >> k & 1 == 1);
        }
        let gl = w.gl(&v);
        chi[mask] = chi[prev] + w.step(&gl, i);
    }
    let mut best = chi;
    for i in 0..r {
        for mask in 0usize..1 << r {
            if mask >> i & 1 == 1 {
                let m = best[mask ^ (1 << i)];
                if m > best[mask] {
                    best[mask] = m;
                }
            }
        }
    }
    best
}

/// `sum_I (-1)^{|I|} Q^{w(l,I)}` as a sparse polynomial `exponent -> coeff`.
pub fn cube_polynomial(w: &Weight, l: &[i64]) -> BTreeMap<i64, i64> {
    let mut out = BTreeMap::new();
    for (mask, wt) in cube_weights(w, l).into_iter().enumerate() {
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        *out.entry(wt).or_insert(0) += sign;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Lattice points `l >= 0` with `chi_h(l) <= n` and their cube polynomials.
/// Points outside this set contribute nothing below `Q^{n+1}`.
pub fn cube_terms(ctx: &LatticeContext, h: &HClass, n: i64) -> Vec<(Vec<i64>, BTreeMap<i64, i64>)> {
    let w = ctx.weight(h);
    let Some(rect) = certified_box(&w, n) else {
        return Vec::new();
    };
    sublevel_points(&w, n, &rect)
        .into_iter()
        .map(|(l, _)| {
            let p = cube_polynomial(&w, &l);
            (l, p)
        })
        .filter(|(_, p)| !p.is_empty())
        .collect()
}

/// `(1/(1-Q)) sum_{l >= 0} T^{d(l)} sum_I (-1)^{|I|} Q^{w_h(l,I)}` for `Q <= nmax`.
pub fn pe1_cube_formula(ctx: &LatticeContext, h: &HClass, s: &[i64], nmax: i64) -> Result<Series, SeriesError> {
    let filt = Filtration::new(ctx, s)?;
    let mut num = Series::new(&["T", "Q"]).with_window(1, nmax);
    for (l, p) in cube_terms(ctx, h, nmax) {
        let d = filt.degree(&l);
        for (e, c) in p {
            num.add_term(vec![d, e], c);
        }
    }
    Ok(num.geometric(1))
}

/// Quotient of a series in `(Q, h)` by `h + 1`, if exact with nonnegative
/// coefficients.
pub fn divide_by_hbar_plus_one(s: &Series) -> Option<Series> {
    let hv = s.var("h")?;
    let mut by_rest: BTreeMap<Vec<i64>, BTreeMap<i64, i64>> = BTreeMap::new();
    for (k, v) in &s.terms {
        let mut rest = k.clone();
        let b = rest.remove(hv);
        by_rest.entry(rest).or_default().insert(b, *v);
    }
    let mut out = Series {
        vars: s.vars.clone(),
        denominators: s.denominators.clone(),
        window: s.window.clone(),
        terms: BTreeMap::new(),
    };
    for (rest, poly) in by_rest {
        let lo = *poly.keys().next().unwrap();
        let hi = *poly.keys().last().unwrap();
        let mut carry = 0i64;
        for b in lo..=hi {
            let r = poly.get(&b).copied().unwrap_or(0) - carry;
            if r < 0 {
                return None;
            }
            if b == hi && r != 0 {
                return None;
            }
            if b < hi {
                let mut key = rest.clone();
                key.insert(hv, b);
                out.add_term(key, r);
            }
            carry = r;
        }
    }
    Some(out)
}

/// Sum of `T_i` exponents into a single `T`.
pub fn collapse_t(s: &Series) -> Series {
    let tvars: Vec<usize> = (0..s.vars.len()).filter(|i| s.vars[*i].starts_with('T')).collect();
    let mut vars = vec!["T".to_string()];
    let mut window = vec![None];
    let mut dens = vec![1];
    for i in 0..s.vars.len() {
        if !tvars.contains(&i) {
            vars.push(s.vars[i].clone());
            window.push(s.window[i]);
            dens.push(s.denominators[i]);
        }
    }
    let mut out = Series {
        vars,
        denominators: dens,
        window,
        terms: BTreeMap::new(),
    };
    for (k, v) in &s.terms {
        let mut key = vec![tvars.iter().map(|i| k[*i]).sum()];
        key.extend((0..k.len()).filter(|i| !tvars.contains(i)).map(|i| k[i]));
        out.add_term(key, *v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_weights_single_vertex() {
        let w = Weight {
            g: vec![vec![2]],
            kappa: vec![0],
        };
        // chi(l) = l^2 - 0, w(l,{0}) = chi(l+1)
        assert_eq!(cube_weights(&w, &[2]), vec![4, 9]);
        let p = cube_polynomial(&w, &[0]);
        assert_eq!(p, BTreeMap::from([(0, 1), (1, -1)]));
    }

    #[test]
    fn divide_simple() {
        let mut s = Series::new(&["Q", "h"]);
        s.add_term(vec![3, 0], 2);
        s.add_term(vec![3, 1], 3);
        s.add_term(vec![3, 2], 1);
        let q = divide_by_hbar_plus_one(&s).unwrap();
        assert_eq!(q.coeff(&[3, 0]), 2);
        assert_eq!(q.coeff(&[3, 1]), 1);
        s.add_term(vec![4, 0], 1);
        assert!(divide_by_hbar_plus_one(&s).is_none());
    }
}
