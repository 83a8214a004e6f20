//! The class-symbol algebra, its Lie subalgebra of indecomposables, the
//! comultiplication and the verification suites.

mod algebra;
mod element;
mod suites;
mod validate;

pub use algebra::{HallAlgebra, TripleTerm};
pub use element::{HallElement, TensorElement};
pub use suites::{ConstantsTable, Status, SuiteReport};
pub use validate::validate_conventions;
