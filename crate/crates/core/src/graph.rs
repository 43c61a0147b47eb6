//! Plumbing graphs with arrowheads.
//!
//! Text format, one item per line, `#` starts a comment:
//!
//! ```text
//! vertex <id> <euler>
//! edge <id> <id>
//! arrow <id> [b]
//! ```
//!
//! Vertex ids are positive integers. Internal indices follow declaration
//! order, and that order fixes cube orientations everywhere downstream.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("graph is not a tree: {0}")]
    NotTree(String),
    #[error("intersection form is not negative definite (leading minor {0} has the wrong sign)")]
    NotNegativeDefinite(usize),
    #[error("arrow references unknown vertex {0}")]
    DanglingArrow(u32),
    #[error("invalid blow-up center: {0}")]
    InvalidCenter(String),
}

impl GraphError {
    /// True for errors detected while reading the text, before any validation.
    pub fn is_syntax(&self) -> bool {
        matches!(self, GraphError::Syntax { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub id: u32,
    pub euler: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arrow {
    /// Index of the supporting vertex.
    pub vertex: usize,
    /// Number of base-point blow-ups still to be performed.
    pub decoration: u32,
}

/// A validated negative definite plumbing tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlumbingGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    arrows: Vec<Arrow>,
}

/// Center of a blow-up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlowUpCenter {
    /// A generic point of the vertex's curve.
    Vertex(u32),
    /// The intersection point of two adjacent curves.
    Edge(u32, u32),
    /// The base point of the arrow with this index.
    Arrow(usize),
}

impl BlowUpCenter {
    pub fn is_base_point(&self) -> bool {
        matches!(self, BlowUpCenter::Arrow(_))
    }
}

/// Cohomological pullback `psi^*` in `E`-coordinates.
///
/// `matrix[i][j]` is the `E_i` coefficient of `psi^*(E_j)`. Every old
/// dual generator pulls back to the dual generator of the same vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PullbackMap {
    pub matrix: Vec<Vec<i64>>,
}

impl PullbackMap {
    pub fn identity(n: usize) -> Self {
        let mut matrix = vec![vec![0; n]; n];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = 1;
        }
        PullbackMap { matrix }
    }

    pub fn old_len(&self) -> usize {
        self.matrix.first().map_or(0, |r| r.len())
    }

    pub fn new_len(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, x: &[BigRational]) -> Vec<BigRational> {
        self.matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .filter(|(m, _)| **m != 0)
                    .fold(BigRational::zero(), |acc, (m, v)| {
                        acc + v * BigRational::from_integer(BigInt::from(*m))
                    })
            })
            .collect()
    }

    pub fn apply_integral(&self, x: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(x).map(|(m, v)| m * v).sum())
            .collect()
    }

    /// Pullback along `self` followed by `next`.
    pub fn then(&self, next: &PullbackMap) -> PullbackMap {
        let n = next.new_len();
        let k = self.old_len();
        let mut matrix = vec![vec![0i64; k]; n];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, out) in row.iter_mut().enumerate() {
                *out = (0..self.new_len())
                    .map(|t| next.matrix[i][t] * self.matrix[t][j])
                    .sum();
            }
        }
        PullbackMap { matrix }
    }
}

/// A semigroup element `s = sum n_i E_i^*` given by its dual coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SemigroupElement {
    pub coeffs: Vec<i64>,
}

impl SemigroupElement {
    pub fn new(coeffs: Vec<i64>) -> Self {
        SemigroupElement { coeffs }
    }

    pub fn dual(n: usize, i: usize) -> Self {
        let mut coeffs = vec![0; n];
        coeffs[i] = 1;
        SemigroupElement { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }

    /// Indices `i` with `(s, E_i) < 0`.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|i| self.coeffs[*i] != 0)
            .collect()
    }

    /// Greatest common divisor of the coefficients.
    pub fn step(&self) -> i64 {
        self.coeffs
            .iter()
            .fold(0i64, |g, c| num_integer::gcd(g, *c))
    }
}

impl PlumbingGraph {
    /// Builds and validates a graph; edges and arrows refer to vertex ids.
    pub fn new(
        vertices: Vec<(u32, i64)>,
        edges: Vec<(u32, u32)>,
        arrows: Vec<(u32, u32)>,
    ) -> Result<Self, GraphError> {
        let mut index = HashMap::new();
        for (k, (id, _)) in vertices.iter().enumerate() {
            if *id == 0 {
                return Err(GraphError::NotTree("vertex id 0 is not allowed".into()));
            }
            if index.insert(*id, k).is_some() {
                return Err(GraphError::NotTree(format!("duplicate vertex {id}")));
            }
        }
        let mut e = Vec::new();
        for (a, b) in edges {
            let (Some(&i), Some(&j)) = (index.get(&a), index.get(&b)) else {
                return Err(GraphError::NotTree(format!("edge {a} {b} has an unknown end")));
            };
            e.push((i, j));
        }
        let mut arr = Vec::new();
        for (v, b) in arrows {
            let Some(&i) = index.get(&v) else {
                return Err(GraphError::DanglingArrow(v));
            };
            arr.push(Arrow {
                vertex: i,
                decoration: b,
            });
        }
        let g = PlumbingGraph {
            vertices: vertices
                .into_iter()
                .map(|(id, euler)| Vertex { id, euler })
                .collect(),
            edges: e,
            arrows: arr,
        };
        g.validate()?;
        Ok(g)
    }

    /// Parses the line-oriented text format.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut arrows = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut col = 0;
            for piece in line.split(char::is_whitespace) {
                if !piece.is_empty() {
                    tokens.push((col + 1, piece));
                }
                col += piece.len() + 1;
            }
            let Some(&(c0, kw)) = tokens.first() else {
                continue;
            };
            let err = |column: usize, message: String| GraphError::Syntax {
                line: ln + 1,
                column,
                message,
            };
            let int = |k: usize| -> Result<i64, GraphError> {
                let (c, t) = tokens[k];
                t.parse::<i64>()
                    .map_err(|_| err(c, format!("expected an integer, found `{t}`")))
            };
            let id = |k: usize| -> Result<u32, GraphError> {
                let (c, t) = tokens[k];
                match t.parse::<u32>() {
                    Ok(v) if v > 0 => Ok(v),
                    _ => Err(err(c, format!("expected a positive vertex id, found `{t}`"))),
                }
            };
            let arity = |lo: usize, hi: usize| -> Result<(), GraphError> {
                let n = tokens.len() - 1;
                if n < lo || n > hi {
                    let c = tokens.get(hi + 1).map_or(c0, |t| t.0);
                    Err(err(c, format!("`{kw}` takes {lo}..={hi} arguments, found {n}")))
                } else {
                    Ok(())
                }
            };
            match kw {
                "vertex" => {
                    arity(2, 2)?;
                    vertices.push((id(1)?, int(2)?));
                }
                "edge" => {
                    arity(2, 2)?;
                    edges.push((id(1)?, id(2)?));
                }
                "arrow" => {
                    arity(1, 2)?;
                    let b = if tokens.len() == 3 {
                        let v = int(2)?;
                        if v < 0 {
                            return Err(err(tokens[2].0, "decoration must be >= 0".into()));
                        }
                        v as u32
                    } else {
                        0
                    };
                    arrows.push((id(1)?, b));
                }
                other => return Err(err(c0, format!("unknown keyword `{other}`"))),
            }
        }
        PlumbingGraph::new(vertices, edges, arrows)
    }

    /// Serializes back to the text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str(&format!("vertex {} {}\n", v.id, v.euler));
        }
        for (i, j) in &self.edges {
            out.push_str(&format!(
                "edge {} {}\n",
                self.vertices[*i].id, self.vertices[*j].id
            ));
        }
        for a in &self.arrows {
            if a.decoration == 0 {
                out.push_str(&format!("arrow {}\n", self.vertices[a.vertex].id));
            } else {
                out.push_str(&format!(
                    "arrow {} {}\n",
                    self.vertices[a.vertex].id, a.decoration
                ));
            }
        }
        out
    }

    /// Graphviz rendering with Euler numbers as labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph plumbing {\n");
        for v in &self.vertices {
            out.push_str(&format!("  v{} [label=\"{}\"];\n", v.id, v.euler));
        }
        for (i, j) in &self.edges {
            out.push_str(&format!(
                "  v{} -- v{};\n",
                self.vertices[*i].id, self.vertices[*j].id
            ));
        }
        for (k, a) in self.arrows.iter().enumerate() {
            out.push_str(&format!(
                "  a{k} [shape=point];\n  v{} -- a{k} [label=\"{}\"];\n",
                self.vertices[a.vertex].id, a.decoration
            ));
        }
        out.push_str("}\n");
        out
    }

    fn validate(&self) -> Result<(), GraphError> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(GraphError::NotTree("no vertices".into()));
        }
        if self.edges.len() != n - 1 {
            return Err(GraphError::NotTree(format!(
                "{} vertices but {} edges",
                n,
                self.edges.len()
            )));
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(i, j) in &self.edges {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a == b {
                return Err(GraphError::NotTree("contains a cycle or a loop".into()));
            }
            parent[a] = b;
        }
        let m = self.intersection_matrix();
        if let Some(k) = first_bad_minor(&m) {
            return Err(GraphError::NotNegativeDefinite(k));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn euler(&self, i: usize) -> i64 {
        self.vertices[i].euler
    }

    pub fn index_of(&self, id: u32) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn ids(&self) -> Vec<u32> {
        self.vertices.iter().map(|v| v.id).collect()
    }

    pub fn valency(&self, i: usize) -> usize {
        self.edges
            .iter()
            .filter(|(a, b)| *a == i || *b == i)
            .count()
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Euler numbers on the diagonal, 1 for each edge.
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.vertices.len();
        let mut m = vec![vec![0i64; n]; n];
        for (i, v) in self.vertices.iter().enumerate() {
            m[i][i] = v.euler;
        }
        for &(i, j) in &self.edges {
            m[i][j] = 1;
            m[j][i] = 1;
        }
        m
    }

    pub fn determinant(&self) -> BigInt {
        crate::linalg::det_bareiss(&self.intersection_matrix())
    }

    /// Same graph with different Euler numbers; fails if not negative definite.
    pub fn with_eulers(&self, eulers: &[i64]) -> Result<Self, GraphError> {
        let mut g = self.clone();
        for (v, e) in g.vertices.iter_mut().zip(eulers) {
            v.euler = *e;
        }
        g.validate()?;
        Ok(g)
    }

    /// Same graph without arrowheads.
    pub fn without_arrows(&self) -> Self {
        let mut g = self.clone();
        g.arrows.clear();
        g
    }

    /// Replaces the arrows, keeping everything else.
    pub fn with_arrows(&self, arrows: Vec<Arrow>) -> Result<Self, GraphError> {
        if let Some(a) = arrows.iter().find(|a| a.vertex >= self.len()) {
            return Err(GraphError::DanglingArrow(a.vertex as u32));
        }
        let mut g = self.clone();
        g.arrows = arrows;
        Ok(g)
    }

    /// Blows up `center`; the new `(-1)` vertex is appended last.
    pub fn blow_up(&self, center: BlowUpCenter) -> Result<(PlumbingGraph, PullbackMap), GraphError> {
        let n = self.len();
        let new_id = self.vertices.iter().map(|v| v.id).max().unwrap_or(0) + 1;
        let mut g = self.clone();
        g.vertices.push(Vertex {
            id: new_id,
            euler: -1,
        });
        let mut mult = vec![0i64; n];
        match center {
            BlowUpCenter::Vertex(id) => {
                let i = self
                    .index_of(id)
                    .ok_or_else(|| GraphError::InvalidCenter(format!("no vertex {id}")))?;
                g.vertices[i].euler -= 1;
                g.edges.push((i, n));
                mult[i] = 1;
            }
            BlowUpCenter::Edge(a, b) => {
                let (i, j) = match (self.index_of(a), self.index_of(b)) {
                    (Some(i), Some(j)) => (i, j),
                    _ => return Err(GraphError::InvalidCenter(format!("no edge {a} {b}"))),
                };
                let pos = g
                    .edges
                    .iter()
                    .position(|&(x, y)| (x, y) == (i, j) || (x, y) == (j, i))
                    .ok_or_else(|| GraphError::InvalidCenter(format!("no edge {a} {b}")))?;
                g.edges.remove(pos);
                g.vertices[i].euler -= 1;
                g.vertices[j].euler -= 1;
                g.edges.push((i, n));
                g.edges.push((j, n));
                mult[i] = 1;
                mult[j] = 1;
            }
            BlowUpCenter::Arrow(k) => {
                let a = self
                    .arrows
                    .get(k)
                    .ok_or_else(|| GraphError::InvalidCenter(format!("no arrow {k}")))?;
                let i = a.vertex;
                g.vertices[i].euler -= 1;
                g.edges.push((i, n));
                g.arrows[k].vertex = n;
                g.arrows[k].decoration = a.decoration.saturating_sub(1);
                mult[i] = 1;
            }
        }
        let mut matrix = vec![vec![0i64; n]; n + 1];
        for (i, row) in matrix.iter_mut().take(n).enumerate() {
            row[i] = 1;
        }
        matrix[n] = mult;
        g.validate()?;
        Ok((g, PullbackMap { matrix }))
    }

    /// Semigroup element `sum_a E^*_{i(a)}` of the current arrows.
    pub fn arrow_element(&self) -> SemigroupElement {
        let mut coeffs = vec![0; self.len()];
        for a in &self.arrows {
            coeffs[a.vertex] += 1;
        }
        SemigroupElement { coeffs }
    }

    /// Performs all pending base-point blow-ups.
    pub fn apply_decorations(&self) -> (PlumbingGraph, SemigroupElement) {
        let mut g = self.clone();
        while let Some(k) = g.arrows.iter().position(|a| a.decoration > 0) {
            g = g
                .blow_up(BlowUpCenter::Arrow(k))
                .expect("blow-ups preserve validity")
                .0;
        }
        let s = g.arrow_element();
        (g, s)
    }
}

impl fmt::Display for PlumbingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Index (1-based) of the first leading principal minor with the wrong sign
/// for negative definiteness, if any.
fn first_bad_minor(m: &[Vec<i64>]) -> Option<usize> {
    let minors = crate::linalg::leading_minors(m);
    for (k, d) in minors.iter().enumerate() {
        let expected_negative = k % 2 == 0;
        let ok = if expected_negative {
            d.is_negative()
        } else {
            d.is_positive()
        };
        if !ok {
            return Some(k + 1);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_round_trip() {
        let g = PlumbingGraph::parse("vertex 1 -2\nvertex 2 -2 # tail\nedge 1 2\narrow 2 3\n").unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.arrows()[0].decoration, 3);
        assert_eq!(PlumbingGraph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn syntax_error_position() {
        let e = PlumbingGraph::parse("vertex 1 -2\nvertex 2 x\n").unwrap_err();
        assert_eq!(
            e,
            GraphError::Syntax {
                line: 2,
                column: 10,
                message: "expected an integer, found `x`".into()
            }
        );
        assert!(PlumbingGraph::parse("vertx 1 -2").unwrap_err().is_syntax());
    }

    #[test]
    fn rejects_non_tree_and_indefinite() {
        assert!(matches!(
            PlumbingGraph::parse("vertex 1 -2\nvertex 2 -2\n"),
            Err(GraphError::NotTree(_))
        ));
        assert!(matches!(
            PlumbingGraph::parse("vertex 1 -1\nvertex 2 -1\nedge 1 2\n"),
            Err(GraphError::NotNegativeDefinite(2))
        ));
        assert!(matches!(
            PlumbingGraph::parse("vertex 1 -2\narrow 5\n"),
            Err(GraphError::DanglingArrow(5))
        ));
    }

    #[test]
    fn blow_up_shapes() {
        let g = PlumbingGraph::parse("vertex 1 -2\narrow 1 1\n").unwrap();
        let (g1, _) = g.blow_up(BlowUpCenter::Arrow(0)).unwrap();
        assert_eq!(g1.vertices()[0].euler, -3);
        assert_eq!(g1.vertices()[1].euler, -1);
        assert_eq!(g1.arrows()[0].vertex, 1);
        assert_eq!(g1.arrows()[0].decoration, 0);
        let (g2, _) = g.blow_up(BlowUpCenter::Vertex(1)).unwrap();
        assert_eq!(g2.arrows()[0].vertex, 0);
        assert_eq!(g2.vertices()[0].euler, -3);
        let a2 = PlumbingGraph::parse("vertex 1 -2\nvertex 2 -2\nedge 1 2\n").unwrap();
        let (g3, p) = a2.blow_up(BlowUpCenter::Edge(1, 2)).unwrap();
        assert_eq!(g3.len(), 3);
        assert_eq!(g3.valency(2), 2);
        assert_eq!(p.matrix[2], vec![1, 1]);
    }

    #[test]
    fn decorations() {
        let g = PlumbingGraph::parse("vertex 1 -2\narrow 1 1\n").unwrap();
        let (h, s) = g.apply_decorations();
        assert_eq!(s.coeffs, vec![0, 1]);
        assert_eq!(h.apply_decorations(), (h.clone(), s));
        let two = PlumbingGraph::parse("vertex 1 -2\narrow 1\narrow 1\n").unwrap();
        let (_, s) = two.apply_decorations();
        assert_eq!(s.coeffs, vec![2]);
        assert_eq!(s.support().len(), 1);
    }
}
