//! Algebraic invariants of defects in multidimensional subshifts of finite type.

pub mod automaton;
pub mod cli;
pub mod cocycles;
pub mod complexes;
pub mod defects;
pub mod error;
pub mod fixtures;
pub mod groups;
pub mod lattice;
pub mod project;
pub mod symbolic;

pub use error::{Error, Result};
