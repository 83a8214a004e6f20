//! Exact arithmetic substrate: prime fields, dense matrices over them,
//! canonical subspace enumeration and rational interpolation of point counts.

mod field;
mod matrix;
mod poly;
mod subspace;

pub use field::{is_prime, next_prime, primes_from, PrimeField, MAX_PRIME};
pub use matrix::{rref, FMatrix, Rref};
pub use poly::{interpolate, Interpolation, QPolynomial};
pub use subspace::{enumerate_subspaces, subspace_count};
pub(crate) use subspace::advance;
