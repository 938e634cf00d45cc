//! Multiaccess coded caching from `t`-designs and `t`-group divisible designs.
//!
//! * [`combinatorics`]: block designs, GDDs, resolvable designs, orthogonal
//!   arrays, their verifiers and the duality transforms.
//! * [`pda`]: placement delivery arrays and their verifier.
//! * [`scheme`]: the node-placement, user-retrieve and user-delivery arrays of
//!   both scheme families, with closed-form loads.
//! * [`simulator`]: byte-level placement, XOR and GF(2^16) delivery, decoding.
//! * [`tables`]: comparison tables and curve data as CSV.
//! * [`io`]: JSON interchange.

pub mod combinatorics;
pub mod error;
pub mod gf;
pub mod grid;
pub mod io;
pub mod math;
pub mod pda;
pub mod scheme;
pub mod simulator;
pub mod tables;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/pda.md")]
    mod pda {}
    #[doc = include_str!("../../../book/src/designs.md")]
    mod designs {}
    #[doc = include_str!("../../../book/src/tdesign-scheme.md")]
    mod tdesign_scheme {}
    #[doc = include_str!("../../../book/src/gdd-scheme.md")]
    mod gdd_scheme {}
    #[doc = include_str!("../../../book/src/mds.md")]
    mod mds {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/tables.md")]
    mod tables {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
