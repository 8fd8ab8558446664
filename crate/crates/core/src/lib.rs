//! Decision trees turned into argumentation graphs that classify the same
//! way, then compacted by rewriting supports into DNF.

pub mod adg;
pub mod af;
pub mod dataset;
pub mod dnf;
pub mod dtree;
pub mod error;
pub mod experiment;
pub mod export;
pub mod inference;
pub mod predicate;
pub mod region;
pub mod xadg;

pub use error::{Error, Result};
