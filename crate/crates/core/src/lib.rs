//! Lattice homology of negative definite plumbing graphs, the spectral
//! sequence of the filtration induced by a curve, and the associated
//! Poincare series.

#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod complex;
pub mod graph;
pub mod lattice;
pub mod linalg;
pub mod reduction;
pub mod series;
pub mod specseq;
pub mod verify;

pub use graph::{BlowUpCenter, GraphError, PlumbingGraph, PullbackMap, SemigroupElement};
pub use lattice::{ClassData, Cycle, HClass, LatticeContext, Weight};
pub use reduction::{ReducedContext, ReductionError};
pub use series::{Series, SeriesError};
pub use specseq::{Filtration, SpecError};
