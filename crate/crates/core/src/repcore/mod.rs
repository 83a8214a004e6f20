//! Modules over `F_p` as quiver representations: Hom spaces, Fitting
//! splitting, Krull–Schmidt decomposition against a catalog of
//! indecomposables, and automorphism counts.

mod catalog;
mod decompose;
mod hom;
mod isoclass;
mod rep;

pub use catalog::{
    catalog_indecomposables, exhaustive_cost, CatalogMethod, CatalogOptions, Fingerprint, IndecInfo, IndecTable,
    PrimeCatalog,
};
pub use decompose::{
    decompose, exhaustive_split, fitting_split, is_indecomposable, is_isomorphic, iso_to_indecomposable, sweep_split,
};
pub use hom::{aut_order, hom_dim, hom_space};
pub(crate) use hom::combine;
pub use hom::enumeration_size;
pub use isoclass::IsoClass;
pub use rep::{arrow_stable, direct_sum, span_basis, GradedMap, GradedSubspace, Rep};
