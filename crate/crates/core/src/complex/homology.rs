//! Homology of the level spaces `S_n` read off the weight filtration.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::model::SublevelModel;
use super::persistence::reduce;
use super::ComplexError;
use crate::linalg::fp::Field;
use crate::linalg::sparse::invariant_factors;

/// A persistence interval of the weight filtration. `death == None` means
/// the class survives to the end of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Bar {
    pub dim: usize,
    pub birth: i64,
    pub death: Option<i64>,
}

impl Bar {
    pub fn alive_at(&self, n: i64) -> bool {
        self.birth <= n && self.death.is_none_or(|d| n < d)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Barcode {
    pub bars: Vec<Bar>,
    /// Levels above the cap are not represented.
    pub cap: Option<i64>,
    pub modulus: u64,
}

/// Cells sorted by `(weight, dim, index)`.
pub fn weight_order(model: &SublevelModel) -> Vec<u32> {
    let mut order: Vec<u32> = (0..model.cells().len() as u32).collect();
    order.sort_by_key(|&c| {
        let cell = model.cell(c);
        (cell.weight, cell.dim(), c)
    });
    order
}

impl Barcode {
    pub fn of_model(model: &SublevelModel, field: &Field) -> Barcode {
        let order = weight_order(model);
        let mut pos = vec![0usize; model.cells().len()];
        for (k, c) in order.iter().enumerate() {
            pos[*c as usize] = k;
        }
        let dims: Vec<usize> = order.iter().map(|c| model.cell(*c).dim()).collect();
        let red = reduce(field, &dims, |j| {
            model
                .boundary(order[j])
                .into_iter()
                .map(|(f, s)| (pos[f as usize], s))
                .collect()
        });
        let weight = |j: usize| model.cell(order[j]).weight;
        let mut bars: Vec<Bar> = red
            .pairs
            .iter()
            .filter(|(b, d)| weight(*b) < weight(*d))
            .map(|(b, d)| Bar {
                dim: dims[*b],
                birth: weight(*b),
                death: Some(weight(*d)),
            })
            .collect();
        bars.extend(red.essential.iter().map(|j| Bar {
            dim: dims[*j],
            birth: weight(*j),
            death: None,
        }));
        bars.sort();
        Barcode {
            bars,
            cap: model.cap(),
            modulus: field.p,
        }
    }

    pub fn max_dim(&self) -> usize {
        self.bars.iter().map(|b| b.dim).max().unwrap_or(0)
    }

    pub fn betti(&self, n: i64, q: usize) -> usize {
        self.bars.iter().filter(|b| b.dim == q && b.alive_at(n)).count()
    }

    pub fn bettis(&self, n: i64) -> Vec<usize> {
        (0..=self.max_dim()).map(|q| self.betti(n, q)).collect()
    }

    /// Rank of `H_q(S_n) -> H_q(S_{n+1})`.
    pub fn u_rank(&self, n: i64, q: usize) -> usize {
        self.bars
            .iter()
            .filter(|b| b.dim == q && b.alive_at(n) && b.alive_at(n + 1))
            .count()
    }

    /// `rank H_b(S_n, S_{n-1})`.
    pub fn hat(&self, n: i64, b: usize) -> usize {
        let born = self.bars.iter().filter(|x| x.dim == b && x.birth == n).count();
        let died = if b == 0 {
            0
        } else {
            self.bars
                .iter()
                .filter(|x| x.dim == b - 1 && x.death == Some(n))
                .count()
        };
        born + died
    }

    /// Nonzero entries of the hat-homology table.
    pub fn hat_table(&self) -> BTreeMap<(i64, usize), usize> {
        let mut t = BTreeMap::new();
        for x in &self.bars {
            *t.entry((x.birth, x.dim)).or_insert(0) += 1;
            if let Some(d) = x.death {
                *t.entry((d, x.dim + 1)).or_insert(0) += 1;
            }
        }
        t
    }

    pub fn chi_top(&self, n: i64) -> i64 {
        self.bettis(n)
            .iter()
            .enumerate()
            .map(|(q, b)| if q % 2 == 0 { *b as i64 } else { -(*b as i64) })
            .sum()
    }

    pub fn min_level(&self) -> Option<i64> {
        self.bars.iter().map(|b| b.birth).min()
    }

    /// Last level where any bar starts or ends.
    pub fn last_event(&self) -> Option<i64> {
        self.bars
            .iter()
            .flat_map(|b| std::iter::once(b.birth).chain(b.death))
            .max()
    }

    /// The `Z[U]`-module in degree `q`.
    pub fn zu_module(&self, q: usize) -> ZUModule {
        let mut m = ZUModule {
            degree: q,
            towers: Vec::new(),
            blocks: BTreeMap::new(),
            window: self.cap,
        };
        for b in self.bars.iter().filter(|b| b.dim == q) {
            match b.death {
                Some(d) => *m.blocks.entry((-2 * b.birth, d - b.birth)).or_insert(0) += 1,
                None => m.towers.push(-2 * b.birth),
            }
        }
        m.towers.sort_unstable_by(|a, b| b.cmp(a));
        m
    }

    /// Same multiset of intervals.
    pub fn same_bars(&self, other: &Barcode) -> bool {
        self.bars == other.bars
    }
}

/// Direct sum of `T^-_a` towers and `T_a(m)` blocks.
///
/// For capped models the towers are classes still alive at the cap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZUModule {
    pub degree: usize,
    pub towers: Vec<i64>,
    /// `(a, m) -> multiplicity`.
    #[serde(serialize_with = "blocks_as_list")]
    pub blocks: BTreeMap<(i64, i64), usize>,
    pub window: Option<i64>,
}

/// Serializes `(a, m) -> k` as `[a, m, k]` triples.
fn blocks_as_list<S: serde::Serializer>(b: &BTreeMap<(i64, i64), usize>, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(b.iter().map(|((a, m), k)| (a, m, k)))
}

impl ZUModule {
    pub fn is_zero(&self) -> bool {
        self.towers.is_empty() && self.blocks.is_empty()
    }

    /// Blocks ordered by decreasing grading, then length.
    pub fn sorted_blocks(&self) -> Vec<((i64, i64), usize)> {
        let mut v: Vec<((i64, i64), usize)> = self.blocks.iter().map(|(k, c)| (*k, *c)).collect();
        v.sort_by(|a, b| b.0 .0.cmp(&a.0 .0).then(a.0 .1.cmp(&b.0 .1)));
        v
    }
}

impl fmt::Display for ZUModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.towers.iter().map(|a| format!("T^-_{a}")).collect();
        for ((a, m), c) in self.sorted_blocks() {
            if c == 1 {
                parts.push(format!("T_{a}({m})"));
            } else {
                parts.push(format!("T_{a}({m})^{c}"));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// One homology group `Z^rank + torsion`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
    /// False when the integral computation was skipped or too large.
    pub integral: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelHomology {
    pub level: i64,
    pub groups: Vec<HomologyGroup>,
}

/// Cell count above which the integral check is skipped.
pub const INTEGRAL_LIMIT: usize = 400_000;

/// Homology of `S_n`: ranks from the barcode, torsion from integral
/// elimination when the level is small enough.
pub fn level_homology(model: &SublevelModel, bars: &Barcode, n: i64) -> LevelHomology {
    let ranks = bars.bettis(n);
    let integral = integral_homology(model, n);
    let groups = ranks
        .iter()
        .enumerate()
        .map(|(q, r)| match &integral {
            Some(g) => {
                let g = g.get(q).cloned().unwrap_or(HomologyGroup {
                    rank: 0,
                    torsion: Vec::new(),
                    integral: true,
                });
                debug_assert_eq!(g.rank, *r);
                g
            }
            None => HomologyGroup {
                rank: *r,
                torsion: Vec::new(),
                integral: false,
            },
        })
        .collect();
    LevelHomology { level: n, groups }
}

/// Integral homology of `S_n` by sparse elimination.
pub fn integral_homology(model: &SublevelModel, n: i64) -> Option<Vec<HomologyGroup>> {
    let maxd = model.max_dim();
    let mut local: Vec<Vec<u32>> = vec![Vec::new(); maxd + 1];
    let mut index = vec![u32::MAX; model.cells().len()];
    let mut total = 0;
    for (q, cells) in local.iter_mut().enumerate() {
        for c in model.dim_range(q) {
            if model.cells()[c].weight <= n {
                index[c] = cells.len() as u32;
                cells.push(c as u32);
                total += 1;
            }
        }
    }
    if total > INTEGRAL_LIMIT {
        return None;
    }
    let mut rank = vec![0usize; maxd + 2];
    let mut tors: Vec<Vec<u64>> = vec![Vec::new(); maxd + 2];
    for q in 1..=maxd {
        let cols: Vec<Vec<(u32, i64)>> = local[q]
            .iter()
            .map(|c| {
                model
                    .boundary(*c)
                    .into_iter()
                    .map(|(f, s)| (index[f as usize], s))
                    .collect()
            })
            .collect();
        let r = invariant_factors(local[q - 1].len(), &cols)?;
        rank[q] = r.rank;
        tors[q - 1] = r.torsion.iter().map(|t| t.to_u64().unwrap_or(u64::MAX)).collect();
    }
    Some(
        (0..=maxd)
            .map(|q| HomologyGroup {
                rank: local[q].len() - rank[q] - rank[q + 1],
                torsion: tors[q].clone(),
                integral: true,
            })
            .collect(),
    )
}

/// `eu` from the barcode and from the cube sum over the rectangle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EulerReport {
    pub eu: i64,
    pub cube_sum: i64,
    pub min_weight: i64,
}

pub fn euler_characteristic(model: &SublevelModel, bars: &Barcode) -> Result<EulerReport, ComplexError> {
    if model.cap().is_some() {
        return Err(ComplexError::Inconsistent(
            "the Euler characteristic needs an uncapped rectangle model".into(),
        ));
    }
    let essential: Vec<&Bar> = bars.bars.iter().filter(|b| b.death.is_none()).collect();
    if essential.len() != 1 || essential[0].dim != 0 {
        return Err(ComplexError::Inconsistent(format!(
            "rectangle is not contractible: {} essential classes",
            essential.len()
        )));
    }
    let m_w = essential[0].birth;
    let mut eu = -m_w;
    for b in &bars.bars {
        if let Some(d) = b.death {
            let len = d - b.birth;
            eu += if b.dim % 2 == 0 { len } else { -len };
        }
    }
    let cube_sum: i64 = model
        .cells()
        .iter()
        .map(|c| if c.dim() % 2 == 1 { c.weight } else { -c.weight })
        .sum();
    if eu != cube_sum {
        return Err(ComplexError::Inconsistent(format!(
            "eu {eu} differs from the cube sum {cube_sum}"
        )));
    }
    Ok(EulerReport {
        eu,
        cube_sum,
        min_weight: m_w,
    })
}

/// Matrix of `H_q(S_n) -> H_q(S_{n+1})` in the interval basis: rows are the
/// bars alive at `n + 1`, columns those alive at `n`, both in barcode order.
pub fn u_map_bars(bars: &Barcode, n: i64, q: usize) -> Vec<Vec<i64>> {
    let src: Vec<&Bar> = bars.bars.iter().filter(|b| b.dim == q && b.alive_at(n)).collect();
    let dst: Vec<&Bar> = bars
        .bars
        .iter()
        .filter(|b| b.dim == q && b.alive_at(n + 1))
        .collect();
    dst.iter()
        .map(|d| src.iter().map(|s| i64::from(std::ptr::eq(*s, *d))).collect())
        .collect()
}
