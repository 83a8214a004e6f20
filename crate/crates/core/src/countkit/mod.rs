//! Counting kernels over `F_p`: submodules, filtrations with prescribed
//! subquotients, extension cocycles with prescribed middle term, the
//! factorization search and the pushout/pullback splice.
//!
//! Convention: in a two-step filtration the first class is the submodule
//! and the second the quotient.

mod ext;
mod factor;
mod splice;
mod submodules;

pub use ext::{
    count_ext_with_middle, ext_cocycle_spaces, ext_middle_histogram, ext_middle_histogram_full, middle_dim, CocycleSpace,
};
pub use factor::{factorization_dim, factorization_exists};
pub use splice::{splice_pushout_pullback, Splice, SpliceInput};
pub use submodules::{count_filtrations, submodules, SubmodulePoint};
