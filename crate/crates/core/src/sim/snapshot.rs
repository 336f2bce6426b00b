use std::sync::Arc;

use super::tree::{Genealogy, SnapshotRecord};
use crate::error::{domain, Error, Result};
use crate::FRONT_SPEED;

/// A particle alive at the snapshot horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle {
    pub id: usize,
    pub position: f64,
}

/// Population observed at a fixed horizon, with a handle to its genealogy.
///
/// Nested snapshots taken from one run share the same genealogy; reflection
/// makes a private copy.
#[derive(Debug, Clone)]
pub struct PopulationSnapshot {
    horizon: f64,
    particles: Vec<Particle>,
    genealogy: Arc<Genealogy>,
    reflected: bool,
}

impl PopulationSnapshot {
    pub(crate) fn new(horizon: f64, particles: Vec<Particle>, genealogy: Arc<Genealogy>) -> Self {
        debug_assert!(!particles.is_empty());
        Self {
            horizon,
            particles,
            genealogy,
            reflected: false,
        }
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        self.particles.iter().map(|p| p.position)
    }

    pub fn genealogy(&self) -> &Genealogy {
        &self.genealogy
    }

    pub fn is_reflected(&self) -> bool {
        self.reflected
    }

    /// Number of particles with position in `[lo, hi]`.
    pub fn count_in(&self, lo: f64, hi: f64) -> usize {
        self.positions().filter(|&x| x >= lo && x <= hi).count()
    }

    /// `Q_t(u, v)` for two particles alive in this snapshot.
    pub fn mrca_time(&self, u: usize, v: usize) -> Result<f64> {
        for id in [u, v] {
            if !self.particles.iter().any(|p| p.id == id) {
                return Err(Error::UnknownId(id));
            }
        }
        if u == v {
            return Ok(self.horizon);
        }
        self.genealogy.mrca_time(u, v)
    }

    /// Export rows for every lineage segment born before the horizon.
    pub fn records(&self, replicate_id: u64) -> Vec<SnapshotRecord> {
        self.genealogy
            .nodes()
            .iter()
            .filter(|n| n.birth_time < self.horizon || n.parent.is_none())
            .map(|n| SnapshotRecord {
                replicate_id,
                particle_id: n.id,
                parent_id: n.parent,
                birth_time: n.birth_time,
                split_time: n.split_time,
                endpoint_position: n.endpoint_position,
            })
            .collect()
    }
}

/// Replace every stored position by its absolute value.
pub fn reflect_population(snap: &PopulationSnapshot) -> Result<PopulationSnapshot> {
    if snap.reflected {
        return Err(Error::Contract("snapshot is already reflected".into()));
    }
    let particles = snap
        .particles
        .iter()
        .map(|p| Particle {
            id: p.id,
            position: p.position.abs(),
        })
        .collect();
    Ok(PopulationSnapshot {
        horizon: snap.horizon,
        particles,
        genealogy: Arc::new(snap.genealogy.reflected()),
        reflected: true,
    })
}

/// `(max, min)` of the endpoint positions.
pub fn extremes(snap: &PopulationSnapshot) -> (f64, f64) {
    snap.positions()
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), x| (hi.max(x), lo.min(x)))
}

/// Ids of particles in the window `[a t - f(t), a t + f(t)]`, sorted.
///
/// Requires `|a| <= sqrt 2`; at the edge speed the window half-width must
/// reach `log(t) / (2 sqrt 2)` for the cluster to be non-empty with high
/// probability (smaller widths are accepted, they are just usually empty).
pub fn cluster_members<F: Fn(f64) -> f64>(
    snap: &PopulationSnapshot,
    a: f64,
    f: F,
) -> Result<Vec<usize>> {
    if !(a.abs() <= FRONT_SPEED + 1e-12) {
        return domain(format!("cluster velocity must satisfy |a| <= sqrt 2, got {a}"));
    }
    let t = snap.horizon;
    let width = f(t);
    if !(width >= 0.0) {
        return domain(format!("cluster width must be >= 0, got {width}"));
    }
    let (lo, hi) = (a * t - width, a * t + width);
    let mut ids: Vec<usize> = snap
        .particles
        .iter()
        .filter(|p| p.position >= lo && p.position <= hi)
        .map(|p| p.id)
        .collect();
    ids.sort_unstable();
    Ok(ids)
}
