//! The filtration induced by a semigroup element and its spectral sequence.
//!
//! For a level `n` the cells of `S_n` are filtered by the degree
//! `d(l) = -(s, l)` of their base point. Reducing the boundary matrix in
//! order of decreasing degree pairs cells; a pair whose degrees differ by
//! `g >= 1` contributes to `E^1 .. E^g` at both ends and is killed by `d^g`,
//! unpaired cells survive to `E^infinity`. Table entries use the bidegree
//! `(-d, q)` with `q = dim + d`.

pub mod abutment;
pub mod multigraded;
pub mod pages;
pub mod upages;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::LatticeContext;

pub use abutment::{abutment_row, AbutmentRow};
pub use multigraded::{component_split, e1_zu_modules, multigraded_e1};
pub use pages::{e1_integral, spectral_row, Page, SpectralRow, SpectralTable};
pub use upages::{torsion_check, u_on_pages, PageMaps, TorsionCheck};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("semigroup element is zero")]
    Zero,
    #[error("semigroup element has a negative E^* coefficient at vertex index {0}")]
    NotInLipmanCone(usize),
    #[error("support of s is not contained in the bad vertex set")]
    SupportNotBad,
    #[error("level {0} is not covered by the model")]
    NotCovered(i64),
    #[error("expected {expected} coefficients, got {got}")]
    Length { expected: usize, got: usize },
    #[error("complex with {0} cells is too large for explicit pages")]
    TooLarge(usize),
    #[error("cross-check failed: {0}")]
    Mismatch(String),
}

/// Degree function `d(l) = sum_i n_i l_i` of `s = sum_i n_i E_i^*`,
/// expressed in the coordinates of a model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Filtration {
    /// Coefficient of each model coordinate.
    pub coeffs: Vec<i64>,
    /// `E^*`-coefficients of `s` on the full graph.
    pub s: Vec<i64>,
    /// Model coordinate indices with nonzero coefficient.
    pub support: Vec<usize>,
    /// gcd of the coefficients.
    pub step: i64,
}

impl Filtration {
    /// Filtration on the full lattice.
    pub fn new(ctx: &LatticeContext, s: &[i64]) -> Result<Self, SpecError> {
        if s.len() != ctx.rank() {
            return Err(SpecError::Length {
                expected: ctx.rank(),
                got: s.len(),
            });
        }
        Self::from_coeffs(s.to_vec(), s.to_vec())
    }

    /// Filtration on the coordinates `coords` of a reduced lattice; all of
    /// `Supp(s)` must be among them.
    pub fn restricted(s: &[i64], coords: &[usize]) -> Result<Self, SpecError> {
        if s
            .iter()
            .enumerate()
            .any(|(i, v)| *v != 0 && !coords.contains(&i))
        {
            return Err(SpecError::SupportNotBad);
        }
        Self::from_coeffs(coords.iter().map(|i| s[*i]).collect(), s.to_vec())
    }

    fn from_coeffs(coeffs: Vec<i64>, s: Vec<i64>) -> Result<Self, SpecError> {
        if let Some(i) = s.iter().position(|v| *v < 0) {
            return Err(SpecError::NotInLipmanCone(i));
        }
        if s.iter().all(|v| *v == 0) {
            return Err(SpecError::Zero);
        }
        let support: Vec<usize> = (0..coeffs.len()).filter(|i| coeffs[*i] != 0).collect();
        let step = coeffs.iter().fold(0i64, |a, b| a.gcd(b));
        Ok(Filtration {
            coeffs,
            s,
            support,
            step,
        })
    }

    pub fn degree(&self, l: &[i64]) -> i64 {
        self.coeffs.iter().zip(l).map(|(a, b)| a * b).sum()
    }
}
