//! Exact computation in degenerate Ringel–Hall algebras of quivers with
//! relations, with structure constants obtained from point counts over
//! prime fields and polynomial interpolation at `q = 1`.

pub mod countkit;
pub mod error;
pub mod gfarith;
pub mod hallalg;
pub mod hallpoly;
pub mod quiverlab;
pub mod repcore;

pub use error::{Error, ErrorKind, Result};
