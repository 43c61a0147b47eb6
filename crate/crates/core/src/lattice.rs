//! Lattice data of a plumbing graph: dual lattice, discriminant group,
//! canonical cycle, minimal Lipman cone representatives and weights.
//!
//! Cycles are coordinate vectors in the basis `{E_i}`. Elements of the dual
//! lattice have rational coordinates; their `E^*`-coordinates `a = -M x` are
//! integral.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::graph::PlumbingGraph;
use crate::linalg::{rational_inverse, smith_normal_form, Smith};

/// Rational cycle in `E`-coordinates.
pub type Cycle = Vec<BigRational>;

/// Element of `H = L'/L` in invariant-factor coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HClass(pub Vec<i64>);

impl HClass {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| *v == 0)
    }
}

impl fmt::Display for HClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Per-class data: `s_h`, its pairings and the integer pairings of `k_h`.
#[derive(Debug, Clone, Serialize)]
pub struct ClassData {
    pub class: HClass,
    #[serde(serialize_with = "ser_cycle")]
    pub s_h: Cycle,
    /// `E^*`-coordinates of `s_h`, i.e. `-(s_h, E_i)`.
    pub s_h_dual: Vec<i64>,
    /// `(k_h, E_i)`.
    pub kappa: Vec<i64>,
}

fn ser_cycle<S: serde::Serializer>(c: &Cycle, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(c.len()))?;
    for v in c {
        seq.serialize_element(&v.to_string())?;
    }
    seq.end()
}

/// Formats a cycle as `(a,b,c)` with exact rationals.
pub fn format_cycle(c: &[BigRational]) -> String {
    let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub struct LatticeContext {
    graph: PlumbingGraph,
    m: Vec<Vec<i64>>,
    g: Vec<Vec<i64>>,
    dual: Vec<Cycle>,
    det: BigInt,
    smith: Smith,
    /// Positions in the Smith diagonal with factor `> 1`.
    torsion_pos: Vec<usize>,
    factors: Vec<i64>,
    z_k: Cycle,
    cache: Mutex<HashMap<HClass, ClassData>>,
}

impl fmt::Debug for LatticeContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticeContext")
            .field("graph", &self.graph)
            .field("det", &self.det)
            .field("factors", &self.factors)
            .finish()
    }
}

impl LatticeContext {
    pub fn new(graph: &PlumbingGraph) -> Self {
        let m = graph.intersection_matrix();
        let n = m.len();
        let g: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
        let inv = rational_inverse(&m);
        let dual: Vec<Cycle> = (0..n)
            .map(|i| (0..n).map(|r| -inv[r][i].clone()).collect())
            .collect();
        let det = graph.determinant();
        let big: Vec<Vec<BigInt>> = m
            .iter()
            .map(|r| r.iter().map(|v| BigInt::from(*v)).collect())
            .collect();
        let smith = smith_normal_form(&big);
        let mut torsion_pos = Vec::new();
        let mut factors = Vec::new();
        for (k, d) in smith.diagonal.iter().enumerate() {
            if !d.is_one() {
                torsion_pos.push(k);
                factors.push(d.to_i64().expect("discriminant factor fits in i64"));
            }
        }
        // (Z_K, E_i) = e_i + 2, so Z_K = -sum (e_i + 2) E_i^*
        let mut z_k = vec![BigRational::zero(); n];
        for i in 0..n {
            let c = rat(-(graph.euler(i) + 2));
            for (z, d) in z_k.iter_mut().zip(&dual[i]) {
                *z += &c * d;
            }
        }
        LatticeContext {
            graph: graph.clone(),
            m,
            g,
            dual,
            det,
            smith,
            torsion_pos,
            factors,
            z_k,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn graph(&self) -> &PlumbingGraph {
        &self.graph
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.m
    }

    /// The positive definite form `G = -M`.
    pub fn gram(&self) -> &[Vec<i64>] {
        &self.g
    }

    pub fn determinant(&self) -> &BigInt {
        &self.det
    }

    /// Non-unit invariant factors of `H`.
    pub fn h_factors(&self) -> &[i64] {
        &self.factors
    }

    pub fn h_order(&self) -> i64 {
        self.factors.iter().product()
    }

    pub fn dual(&self, i: usize) -> &Cycle {
        &self.dual[i]
    }

    pub fn z_k(&self) -> &Cycle {
        &self.z_k
    }

    /// `(x, y)` for rational cycles.
    pub fn pair(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, row) in self.m.iter().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            let mut t = BigRational::zero();
            for (j, v) in row.iter().enumerate() {
                if *v != 0 && !y[j].is_zero() {
                    t += &y[j] * rat(*v);
                }
            }
            acc += &x[i] * t;
        }
        acc
    }

    /// `(x, E_i)` for every `i`.
    pub fn pairings(&self, x: &[BigRational]) -> Vec<BigRational> {
        self.m
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .filter(|(v, _)| **v != 0)
                    .fold(BigRational::zero(), |acc, (v, c)| acc + c * rat(*v))
            })
            .collect()
    }

    /// Integral pairings of an integral cycle with all `E_i`.
    pub fn pairings_int(&self, l: &[i64]) -> Vec<i64> {
        self.m
            .iter()
            .map(|row| row.iter().zip(l).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `E^*`-coordinates `a` with `x = sum a_i E_i^*`; `None` off `L'`.
    pub fn to_dual_coords(&self, x: &[BigRational]) -> Option<Vec<i64>> {
        self.pairings(x)
            .into_iter()
            .map(|v| {
                if v.is_integer() {
                    (-v.to_integer()).to_i64()
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn from_dual_coords(&self, a: &[i64]) -> Cycle {
        let n = self.rank();
        let mut x = vec![BigRational::zero(); n];
        for (i, c) in a.iter().enumerate() {
            if *c != 0 {
                let c = rat(*c);
                for (xr, d) in x.iter_mut().zip(&self.dual[i]) {
                    *xr += &c * d;
                }
            }
        }
        x
    }

    /// Class of `x` in `H`; `None` when `x` is not in `L'`.
    pub fn class_of(&self, x: &[BigRational]) -> Option<HClass> {
        self.to_dual_coords(x).map(|a| self.class_of_dual(&a))
    }

    /// Class of `sum a_i E_i^*`.
    pub fn class_of_dual(&self, a: &[i64]) -> HClass {
        let h = self
            .torsion_pos
            .iter()
            .zip(&self.factors)
            .map(|(&k, &d)| {
                let v: BigInt = self.smith.left[k]
                    .iter()
                    .zip(a)
                    .map(|(u, x)| u * BigInt::from(*x))
                    .sum();
                let r = v.to_i64().map(|v| v.rem_euclid(d));
                r.unwrap_or_else(|| {
                    let d = BigInt::from(d);
                    (((v % &d) + &d) % &d).to_i64().unwrap()
                })
            })
            .collect();
        HClass(h)
    }

    /// Normalizes user-supplied class coordinates modulo the factors.
    pub fn normalize_class(&self, h: &[i64]) -> Option<HClass> {
        if h.len() != self.factors.len() {
            return None;
        }
        Some(HClass(
            h.iter().zip(&self.factors).map(|(v, d)| v.rem_euclid(*d)).collect(),
        ))
    }

    pub fn zero_class(&self) -> HClass {
        HClass(vec![0; self.factors.len()])
    }

    /// All classes in lexicographic order.
    pub fn classes(&self) -> Vec<HClass> {
        let mut out = vec![Vec::new()];
        for &d in &self.factors {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..d).map(move |v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        out.into_iter().map(HClass).collect()
    }

    /// Some representative of `h` in `L'`.
    pub fn representative(&self, h: &HClass) -> Cycle {
        let n = self.rank();
        let mut y = vec![BigInt::zero(); n];
        for (&k, v) in self.torsion_pos.iter().zip(&h.0) {
            y[k] = BigInt::from(*v);
        }
        let a: Vec<i64> = (0..n)
            .map(|i| {
                self.smith.left_inv[i]
                    .iter()
                    .zip(&y)
                    .map(|(u, v)| u * v)
                    .sum::<BigInt>()
                    .to_i64()
                    .expect("representative coordinates fit in i64")
            })
            .collect();
        self.from_dual_coords(&a)
    }

    pub fn in_lipman_cone(&self, x: &[BigRational]) -> bool {
        self.pairings(x).iter().all(|v| !v.is_positive())
    }

    /// Minimal element of the Lipman cone in class `h`.
    pub fn s_h(&self, h: &HClass) -> Cycle {
        self.class_data(h).s_h
    }

    pub fn class_data(&self, h: &HClass) -> ClassData {
        if let Some(d) = self.cache.lock().unwrap().get(h) {
            return d.clone();
        }
        let d = self.compute_class_data(h);
        self.cache.lock().unwrap().insert(h.clone(), d.clone());
        d
    }

    fn compute_class_data(&self, h: &HClass) -> ClassData {
        let n = self.rank();
        let rep = self.representative(h);
        // fractional part in E-coordinates lies below s_h
        let mut x: Cycle = rep.iter().map(|v| v - v.floor()).collect();
        let mut p = self.pairings(&x);
        while let Some(i) = (0..n).find(|i| p[*i].is_positive()) {
            x[i] += BigRational::one();
            for (j, v) in self.m[i].iter().enumerate() {
                if *v != 0 {
                    p[j] += rat(*v);
                }
            }
        }
        let s_h_dual: Vec<i64> = p.iter().map(|v| (-v.to_integer()).to_i64().unwrap()).collect();
        let kappa = (0..n)
            .map(|i| -(self.graph.euler(i) + 2) - 2 * s_h_dual[i])
            .collect();
        ClassData {
            class: h.clone(),
            s_h: x,
            s_h_dual,
            kappa,
        }
    }

    /// `k_h = -Z_K + 2 s_h`.
    pub fn k_h(&self, h: &HClass) -> Cycle {
        let s = self.s_h(h);
        s.iter()
            .zip(&self.z_k)
            .map(|(a, z)| a * rat(2) - z)
            .collect()
    }

    /// Weight evaluator for class `h`.
    pub fn weight(&self, h: &HClass) -> Weight {
        Weight {
            g: self.g.clone(),
            kappa: self.class_data(h).kappa,
        }
    }

    /// `chi(x) = -(x, x - Z_K)/2` for any rational cycle.
    pub fn chi_rational(&self, x: &[BigRational]) -> BigRational {
        let y: Cycle = x.iter().zip(&self.z_k).map(|(a, z)| a - z).collect();
        -self.pair(x, &y) / rat(2)
    }

    /// `chi_h(l)` for an integral cycle.
    pub fn chi(&self, h: &HClass, l: &[i64]) -> i64 {
        self.weight(h).chi(l)
    }
}

/// Integer evaluator of `chi_h(l) = (l^T G l - sum kappa_i l_i)/2`.
#[derive(Debug, Clone)]
pub struct Weight {
    pub g: Vec<Vec<i64>>,
    pub kappa: Vec<i64>,
}

impl Weight {
    pub fn rank(&self) -> usize {
        self.kappa.len()
    }

    pub fn chi(&self, l: &[i64]) -> i64 {
        let mut q = 0i64;
        for (i, row) in self.g.iter().enumerate() {
            if l[i] == 0 {
                continue;
            }
            let t: i64 = row.iter().zip(l).map(|(a, b)| a * b).sum();
            q += l[i] * t;
        }
        let lin: i64 = self.kappa.iter().zip(l).map(|(a, b)| a * b).sum();
        (q - lin) / 2
    }

    /// `chi(l + E_i) - chi(l)` given `Gl`.
    #[inline]
    pub fn step(&self, gl: &[i64], i: usize) -> i64 {
        (2 * gl[i] + self.g[i][i] - self.kappa[i]) / 2
    }

    pub fn gl(&self, l: &[i64]) -> Vec<i64> {
        self.g
            .iter()
            .map(|row| row.iter().zip(l).map(|(a, b)| a * b).sum())
            .collect()
    }
}
