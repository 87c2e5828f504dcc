//! Symmetric pairs, Cartan subspaces, restricted roots, chambers and sphere
//! charts.

pub mod cartan;
pub mod chamber;
pub mod chart;
pub mod connection;
pub mod pair;
pub mod roots;
pub mod schema;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use chamber::{chamber_geometry, ChamberData};
pub use chart::{sample_points, ChartKind, SphereChart};
pub use connection::{adjoint_action, adjoint_matrix, connection_bilinear};
pub use pair::{build_pair, build_pair_scaled, catalog, Involution, SpaceId, SymmetricPair};
pub use roots::{restricted_root_decomposition, PositiveRoot, RestrictedRootData};

use crate::error::Result;

/// A fully decomposed catalog space.
#[derive(Clone, Debug)]
pub struct SymmetricSpace {
    pub id: SpaceId,
    pub seed: u64,
    pub pair: SymmetricPair,
    pub roots: RestrictedRootData,
    pub chamber: ChamberData,
}

impl SymmetricSpace {
    /// Builds the pair, Cartan subspace, roots and chamber with the catalog
    /// trace coefficient.
    pub fn build(id: SpaceId, seed: u64) -> Result<Self> {
        Self::from_pair(build_pair(id)?, seed)
    }

    /// Same as [`SymmetricSpace::build`] with an explicit trace coefficient.
    pub fn build_scaled(id: SpaceId, trace_coefficient: f64, seed: u64) -> Result<Self> {
        Self::from_pair(build_pair_scaled(id, trace_coefficient)?, seed)
    }

    pub fn from_pair(pair: SymmetricPair, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = cartan::cartan_subspace(&pair, &mut rng, cartan::CARTAN_ATTEMPTS)?;
        let roots = restricted_root_decomposition(&pair, &a, &mut rng)?;
        let chamber = chamber_geometry(&roots)?;
        Ok(Self {
            id: pair.space,
            seed,
            pair,
            roots,
            chamber,
        })
    }

    pub fn rank(&self) -> usize {
        self.roots.rank()
    }
}
