//! Block designs, group divisible designs, resolvable designs and orthogonal
//! arrays, together with the duality transforms that connect them.
//!
//! All point, group and symbol indices are 1-based.

mod catalog;
mod design;
mod duality;
mod gdd;
mod oa;
mod resolvable;

pub use catalog::{catalog_design, catalog_oa, catalog_resolvable, CATALOG_DESIGNS};
pub use design::{check_divisibility, complete_design, verify_t_design, Design, DesignTag, TDesignReport};
pub use duality::{dual_of_resolvable, gdd_to_resolvable, oa_to_resolvable, resolvable_to_oa};
pub use gdd::{transversal_gdd, verify_gdd, GddReport, GddTag, GroupDivisibleDesign, Point};
pub use oa::{linear_oa, parity_oa, trivial_oa, verify_oa, OaReport, OrthogonalArray};
pub use resolvable::{verify_cross, CrossReport, ResolvableDesign};

/// Largest point count accepted by the exhaustive verifiers and constructors.
pub const MAX_POINTS: u32 = 24;
/// Largest `q^s` accepted by the orthogonal-array constructors.
pub const MAX_OA_ROWS: u128 = 1 << 20;
