//! Multiaccess coded caching schemes.
//!
//! A scheme is described by three arrays sharing the same `F` rows (packets):
//! the node-placement array `C` (which packets each cache-node stores), the
//! user-retrieve array `U` (which packets each user can read from the nodes
//! it accesses) and the user-delivery array `Q`, a PDA whose stars coincide
//! with those of `U`.

pub mod gdd;
pub mod tdesign;

use crate::grid::StarGrid;
use crate::math::Rational;
use crate::pda::{Entry, Pda};

pub use gdd::{
    build_gdd_node_placement, build_gdd_user_delivery, build_gdd_user_retrieve, GddRowLabel, VectorLabel,
    corollary2_shared_link, mr_comparison, theorem2_load, Corollary2, GddCachingScheme, GddSchemeParams, MrComparison,
    SCount, Theorem2Point,
};
pub use tdesign::{
    build_node_placement, build_user_delivery, build_user_retrieve, DeliveryCount, RowLabel,
    corollary1_shared_link, known_messages, redundancy_count, theorem1_load, CachingScheme, SchemeParams, SubsetLabel,
};

/// What the simulator needs from a scheme.
pub trait MaccScheme {
    /// `F × Γ` node placement.
    fn node_placement(&self) -> &StarGrid;
    /// `F × K` user retrieval.
    fn user_retrieve(&self) -> &StarGrid;
    /// User delivery with ids numbered `1..=S`.
    fn delivery(&self) -> &Pda<u32>;
    /// 0-based cache-nodes accessed by a 0-based user.
    fn user_nodes(&self, user: usize) -> Vec<usize>;
    /// Number of multicast messages every user is guaranteed to know (`λS′`).
    fn mds_redundancy(&self) -> usize {
        0
    }
    /// The load the construction claims for plain delivery, if any.
    fn claimed_load(&self) -> Option<Rational> {
        None
    }

    fn subpacketization(&self) -> usize {
        self.delivery().num_rows()
    }

    fn num_users(&self) -> usize {
        self.delivery().num_cols()
    }

    fn num_nodes(&self) -> usize {
        self.node_placement().num_cols()
    }
}

/// A shared-link scheme read off a PDA: user `k` owns cache-node `k`, which
/// stores the starred packets of column `k`.
#[derive(Debug, Clone)]
pub struct SharedLinkScheme {
    placement: StarGrid,
    delivery: Pda<u32>,
}

impl SharedLinkScheme {
    pub fn from_pda(pda: &Pda<u32>) -> Self {
        let (delivery, _) = pda.canonicalize();
        Self {
            placement: StarGrid::from_fn(pda.num_rows(), pda.num_cols(), |j, k| pda.get(j, k) == &Entry::Star),
            delivery,
        }
    }
}

impl MaccScheme for SharedLinkScheme {
    fn node_placement(&self) -> &StarGrid {
        &self.placement
    }

    fn user_retrieve(&self) -> &StarGrid {
        &self.placement
    }

    fn delivery(&self) -> &Pda<u32> {
        &self.delivery
    }

    fn user_nodes(&self, user: usize) -> Vec<usize> {
        vec![user]
    }
}
