//! Exact chain complexes, CSS codes and their lifts from Z2 to Z4 and Z.

#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod chain;
pub mod css;
pub mod error;
pub mod io;
pub mod lift;
pub mod linalg;
pub mod local;
pub mod topo;

pub use error::{Error, Result};
