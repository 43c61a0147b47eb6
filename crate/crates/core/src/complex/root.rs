//! Graded roots: connected components of the tower `S_n`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::Serialize;

use super::model::SublevelModel;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootNode {
    pub level: i64,
    /// Oldest vertex of the component (by weight, then index).
    pub representative: u32,
    /// Index of the component containing this one one level up.
    pub parent: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedRoot {
    pub nodes: Vec<RootNode>,
    /// First level with a single component that persists to the top.
    pub stable_level: i64,
    /// Last level represented.
    pub top: i64,
}

struct UnionFind {
    parent: Vec<u32>,
    key: Vec<(i64, u32)>,
}

impl UnionFind {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }
}

impl GradedRoot {
    /// Components of `S_n` for `min_weight <= n <= top`, where `top` is the
    /// cap of the model or one past the last merge.
    pub fn of_model(model: &SublevelModel) -> GradedRoot {
        let mut events: Vec<(i64, usize, u32)> = Vec::new();
        for c in model.dim_range(0).chain(model.dim_range(1)) {
            let cell = model.cells()[c];
            events.push((cell.weight, cell.dim(), c as u32));
        }
        events.sort_unstable();
        let np = model.num_points();
        let mut uf = UnionFind {
            parent: (0..np as u32).collect(),
            key: (0..np as u32).map(|p| (model.point_weight(p), p)).collect(),
        };
        let Some(&(first, _, _)) = events.first() else {
            return GradedRoot {
                nodes: Vec::new(),
                stable_level: 0,
                top: 0,
            };
        };
        let end = model.cap().unwrap_or_else(|| events.last().unwrap().0);
        let mut roots: BTreeSet<(i64, u32)> = BTreeSet::new();
        let mut nodes: Vec<RootNode> = Vec::new();
        let mut prev: Vec<usize> = Vec::new();
        let mut k = 0;
        let mut n = first;
        let mut stable_level = first;
        let mut top;
        loop {
            while k < events.len() && events[k].0 == n {
                let (_, dim, c) = events[k];
                let cell = model.cell(c);
                if dim == 0 {
                    roots.insert(uf.key[cell.point as usize]);
                } else {
                    let i = cell.mask.trailing_zeros() as usize;
                    let a = uf.find(cell.point);
                    let b = uf.find(model.shift(cell.point, i).unwrap());
                    if a != b {
                        let (ka, kb) = (uf.key[a as usize], uf.key[b as usize]);
                        let (old, young) = if ka < kb { (a, b) } else { (b, a) };
                        roots.remove(&uf.key[young as usize]);
                        uf.parent[young as usize] = old;
                    }
                }
                k += 1;
            }
            let mut level_nodes: BTreeMap<u32, usize> = BTreeMap::new();
            for &(_, rep) in &roots {
                level_nodes.insert(rep, nodes.len());
                nodes.push(RootNode {
                    level: n,
                    representative: rep,
                    parent: None,
                });
            }
            for p in prev {
                let rep = nodes[p].representative;
                let r = uf.find(rep);
                let key = uf.key[r as usize].1;
                nodes[p].parent = level_nodes.get(&key).copied();
            }
            prev = level_nodes.values().copied().collect();
            if roots.len() != 1 {
                stable_level = n + 1;
            }
            top = n;
            if n >= end {
                break;
            }
            n += 1;
        }
        if model.cap().is_none() && top > stable_level + 1 {
            top = stable_level + 1;
            nodes.retain(|x| x.level <= top);
            for x in nodes.iter_mut() {
                if x.level == top {
                    x.parent = None;
                }
            }
        }
        GradedRoot {
            nodes,
            stable_level,
            top,
        }
    }

    pub fn levels(&self) -> Vec<i64> {
        let s: BTreeSet<i64> = self.nodes.iter().map(|n| n.level).collect();
        s.into_iter().collect()
    }

    pub fn components_at(&self, n: i64) -> usize {
        self.nodes.iter().filter(|x| x.level == n).count()
    }

    /// `H_0(S_n) -> H_0(S_{n+1})` in the component bases.
    pub fn u_map(&self, n: i64) -> Vec<Vec<i64>> {
        let src: Vec<usize> = (0..self.nodes.len()).filter(|i| self.nodes[*i].level == n).collect();
        let dst: Vec<usize> = (0..self.nodes.len())
            .filter(|i| self.nodes[*i].level == n + 1)
            .collect();
        dst.iter()
            .map(|d| {
                src.iter()
                    .map(|s| i64::from(self.nodes[*s].parent == Some(*d)))
                    .collect()
            })
            .collect()
    }

    /// DOT rendering: one node per component, one rank per level.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph root {\n  rankdir=BT;\n  node [shape=circle, label=\"\"];\n");
        for level in self.levels() {
            let _ = write!(out, "  {{ rank=same;");
            for (i, x) in self.nodes.iter().enumerate() {
                if x.level == level {
                    let _ = write!(out, " v{i};");
                }
            }
            out.push_str(" }\n");
        }
        for (i, x) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [xlabel=\"{}\"];", x.level);
        }
        for (i, x) in self.nodes.iter().enumerate() {
            if let Some(p) = x.parent {
                let _ = writeln!(out, "  v{i} -> v{p};");
            }
        }
        out.push_str("}\n");
        out
    }
}
