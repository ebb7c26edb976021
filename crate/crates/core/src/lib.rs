//! Lattice, period-domain and stability-charge computations for Mukai
//! lattices of K3 surfaces.

pub mod charges;
pub mod cusp;
pub mod error;
pub mod exact_json;
pub mod geodesic;
pub mod intmat;
pub mod lattice;
pub mod period;
pub mod short_vectors;

pub use error::{Error, Result};
pub use lattice::{HyperbolicSplitting, Isometry, LatVec, Lattice, QuotientLattice};
