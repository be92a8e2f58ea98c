//! Numerical toolkit for star-triangular face models.
//!
//! A face model is a finite oriented graph with complex weights on its faces;
//! the weights define an operator on length-2 paths. This crate checks the
//! braid relation, builds the Lyubashenko double, computes the Drinfeld
//! operators and ribbon operators on the edge space, generates the Jimbo and
//! SOS families, and evaluates link invariants of braid closures.

pub mod catalog;
pub mod drinfeld;
pub mod error;
pub mod invariants;
pub mod io;
pub mod model;
pub mod numerics;
pub mod operator;
pub mod ribbon;
pub mod sparse;
pub mod verify;

pub use error::{Error, Result};
pub use model::{Face, FaceModel, Graph, Path, PathSpace, C64};
pub use operator::{BlockOperator, EdgeOperator};
