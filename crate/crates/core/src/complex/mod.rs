//! Cubical sublevel complexes of the weight function and their homology.

pub mod enumerate;
pub mod homology;
pub mod model;
pub mod persistence;
pub mod root;

use thiserror::Error;

pub use homology::{
    euler_characteristic, integral_homology, level_homology, u_map_bars, Bar, Barcode, EulerReport,
    HomologyGroup, LevelHomology, ZUModule,
};
pub use model::{rectangle_cells, Cell, ModelKind, SublevelModel};
pub use root::{GradedRoot, RootNode};

/// Default limit on materialized cubes.
pub const DEFAULT_BUDGET: u128 = 50_000_000;

/// Budget from `LATCOH_BUDGET`, else the default.
pub fn default_budget() -> u128 {
    std::env::var("LATCOH_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .map(|v| v as u128)
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("budget exceeded: {needed} cubes needed, budget is {budget} (a reduction with --bad may fit)")]
    Budget { needed: u128, budget: u128 },
    #[error("rectangle {0:?} lies below max(floor(Z_K), 0)")]
    RectTooSmall(Vec<i64>),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}
