//! Numerical verification engine for polar actions with a fixed point on
//! (locally) symmetric spaces.
//!
//! The pipeline: build a symmetric pair (Cartan data at the base point),
//! restrict its isotropy representation to a closed subgroup's algebra,
//! decide linear polarity of that slice representation at a regular point,
//! and certify the candidate section as a Lie triple system. All randomness
//! is seeded; every verdict carries the residuals it was decided on.

pub use nalgebra;

pub mod catalog;
pub mod liealg;
pub mod linalg;
pub mod polarity;
pub mod symspace;

pub use catalog::{run_catalog, CatalogEntry, CatalogSummary, SubgroupSpec};
pub use liealg::{LieAlgebra, Representation};
pub use linalg::{Subspace, Tolerances};
pub use polarity::{
    check_fixed_point_polar, check_product_splitting, is_polar_rep, PolarityReport, Verdict,
};
pub use symspace::{make_pair, SpaceFamily, SymmetricPair};
