//! Generating series: Poincare series of the pages, the topological and
//! motivic lattice series, and the identities relating them.
//!
//! Every [`Series`] carries a truncation window; comparisons are made on the
//! intersection of windows only.

pub mod ar;
pub mod euler;
pub mod poincare;
pub mod tail;
pub mod theta;
pub mod zeta;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::SerializeStruct;
use serde::Serialize;
use thiserror::Error;

pub use ar::{ar_series, ArReport};
pub use euler::{euler_and_sw, SwReport};
pub use poincare::{collapse_t, divide_by_hbar_plus_one, multigraded_pe1, pe1_cube_formula, pe_levels, pe_series};
pub use tail::{pe_infty_tail, period, Period, TailReport};
pub use theta::{default_delta, theta_check, ThetaReport};
pub use zeta::{
    ep_substitution, eu_identity, reduce_to_vertex, z_h_component, z_motivic, z_series, DualForm, EuIdentity, Motivic,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("window too small: {0}")]
    Window(String),
    #[error("hypotheses not met: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Complex(#[from] crate::complex::ComplexError),
    #[error(transparent)]
    Spec(#[from] crate::specseq::SpecError),
}

/// Truncated Laurent series with integer coefficients.
///
/// The exponent of variable `k` is `key[k] / denominators[k]`. A term is
/// kept only if every exponent is at most the window bound of its variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    pub vars: Vec<String>,
    pub denominators: Vec<i64>,
    /// Inclusive upper bound per variable, in units of `1/denominator`.
    pub window: Vec<Option<i64>>,
    pub terms: BTreeMap<Vec<i64>, i64>,
}

impl Series {
    pub fn new(vars: &[&str]) -> Self {
        Series {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            denominators: vec![1; vars.len()],
            window: vec![None; vars.len()],
            terms: BTreeMap::new(),
        }
    }

    pub fn with_window(mut self, var: usize, bound: i64) -> Self {
        self.window[var] = Some(bound);
        self.terms.retain(|k, _| k[var] <= bound);
        self
    }

    pub fn with_denominator(mut self, var: usize, d: i64) -> Self {
        self.denominators[var] = d;
        self
    }

    pub fn var(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn in_window(&self, key: &[i64]) -> bool {
        key.iter().zip(&self.window).all(|(e, w)| w.is_none_or(|b| *e <= b))
    }

    pub fn add_term(&mut self, key: Vec<i64>, c: i64) {
        if c == 0 || !self.in_window(&key) {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, key: &[i64]) -> i64 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Restricts both series to the common window and compares.
    pub fn agrees_with(&self, other: &Series) -> bool {
        if self.vars != other.vars || self.denominators != other.denominators {
            return false;
        }
        let window: Vec<Option<i64>> = self
            .window
            .iter()
            .zip(&other.window)
            .map(|(a, b)| match (a, b) {
                (Some(x), Some(y)) => Some(*x.min(y)),
                (Some(x), None) | (None, Some(x)) => Some(*x),
                (None, None) => None,
            })
            .collect();
        let cut = |s: &Series| -> BTreeMap<Vec<i64>, i64> {
            s.terms
                .iter()
                .filter(|(k, _)| k.iter().zip(&window).all(|(e, w)| w.is_none_or(|b| *e <= b)))
                .map(|(k, v)| (k.clone(), *v))
                .collect()
        };
        cut(self) == cut(other)
    }

    /// Difference `self - other`, windowed to the tighter bounds.
    pub fn sub(&self, other: &Series) -> Series {
        let mut out = self.clone();
        for (w, o) in out.window.iter_mut().zip(&other.window) {
            *w = match (*w, *o) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, None) => x,
                (None, y) => y,
            };
        }
        let keys: Vec<Vec<i64>> = out.terms.keys().cloned().collect();
        for k in keys {
            if !out.in_window(&k) {
                out.terms.remove(&k);
            }
        }
        for (k, v) in &other.terms {
            out.add_term(k.clone(), -v);
        }
        out
    }

    /// Substitutes `var = value`, removing the variable.
    pub fn substitute(&self, var: usize, value: i64) -> Series {
        let mut out = Series {
            vars: self.vars.clone(),
            denominators: self.denominators.clone(),
            window: self.window.clone(),
            terms: BTreeMap::new(),
        };
        out.vars.remove(var);
        out.denominators.remove(var);
        out.window.remove(var);
        for (k, v) in &self.terms {
            let mut key = k.clone();
            let e = key.remove(var);
            let f = if value == 1 {
                1
            } else {
                assert!(value == -1, "only +-1 substitutions");
                if e.rem_euclid(2) == 0 { 1 } else { -1 }
            };
            out.add_term(key, v * f);
        }
        out
    }

    /// Multiplies by `1/(1 - x)` for variable `x = var`; needs a finite window.
    pub fn geometric(&self, var: usize) -> Series {
        let top = self.window[var].expect("geometric expansion needs a window");
        let mut out = Series {
            vars: self.vars.clone(),
            denominators: self.denominators.clone(),
            window: self.window.clone(),
            terms: BTreeMap::new(),
        };
        for (k, v) in &self.terms {
            let mut key = k.clone();
            while key[var] <= top {
                out.add_term(key.clone(), *v);
                key[var] += self.denominators[var];
            }
        }
        out
    }

    /// Multiplies by `(1 - x^e)` where `e` is in units of `1/denominator`.
    pub fn times_one_minus(&self, var: usize, e: i64) -> Series {
        let mut out = self.clone();
        for (k, v) in &self.terms {
            let mut key = k.clone();
            key[var] += e;
            out.add_term(key, -v);
        }
        out
    }

    /// Every coefficient is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|v| *v > 0)
    }

    /// Exponent of variable `k` in a key, as an exact rational.
    pub fn exponent(&self, key: &[i64], k: usize) -> BigRational {
        BigRational::new(BigInt::from(key[k]), BigInt::from(self.denominators[k]))
    }

    fn format_exponent(&self, key: &[i64], k: usize) -> String {
        let e = self.exponent(key, k);
        if e.is_integer() {
            e.to_integer().to_string()
        } else {
            format!("({e})")
        }
    }

    /// Sorted text form, one term per line: `coeff * X^a * Y^b`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.terms {
            out.push_str(&v.to_string());
            for (i, name) in self.vars.iter().enumerate() {
                if k[i] != 0 {
                    out.push_str(&format!(" {name}^{}", self.format_exponent(k, i)));
                }
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, v)| {
                let mons: Vec<String> = self
                    .vars
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| k[*i] != 0)
                    .map(|(i, n)| format!("{n}^{}", self.format_exponent(k, i)))
                    .collect();
                match (mons.is_empty(), *v) {
                    (true, c) => c.to_string(),
                    (false, 1) => mons.join("*"),
                    (false, -1) => format!("-{}", mons.join("*")),
                    (false, c) => format!("{c}*{}", mons.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

impl Serialize for Series {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<(Vec<String>, i64)> = self
            .terms
            .iter()
            .map(|(k, v)| {
                (
                    (0..k.len()).map(|i| self.exponent(k, i).to_string()).collect(),
                    *v,
                )
            })
            .collect();
        let window: Vec<Option<String>> = self
            .window
            .iter()
            .enumerate()
            .map(|(i, w)| {
                w.map(|b| BigRational::new(BigInt::from(b), BigInt::from(self.denominators[i])).to_string())
            })
            .collect();
        let mut st = s.serialize_struct("Series", 3)?;
        st.serialize_field("vars", &self.vars)?;
        st.serialize_field("window", &window)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}
