//! Branching Brownian motion, its reflection through the origin, and the
//! statistics read off a population: extremes, clusters, common ancestry and
//! barrier counts.

mod barrier;
mod paths;
mod simulate;
mod snapshot;
mod tree;

pub use barrier::{barrier_census, barrier_census_default, BarrierCount, BarrierSpec};
pub use paths::reflected_survival_mc;
pub use simulate::{simulate_bbm, simulate_nested, DEFAULT_GUARD};
pub use snapshot::{cluster_members, extremes, reflect_population, Particle, PopulationSnapshot};
pub use tree::{Genealogy, LineageNode, SnapshotRecord};
