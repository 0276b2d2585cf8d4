//! Exact computations with conformal (super)algebras and their modules.

pub mod algebra;
pub mod arith;
pub mod classifier;
pub mod element;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod module;
pub mod modes;
pub mod parse;
pub mod report;
pub mod spec;

pub use error::{Error, Result};
