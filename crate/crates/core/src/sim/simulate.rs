use std::sync::Arc;

use super::snapshot::{Particle, PopulationSnapshot};
use super::tree::Genealogy;
use crate::error::{domain, Error, Result};
use crate::stochastic::RngStream;

/// Default cap on the number of particles alive at any observation horizon.
pub const DEFAULT_GUARD: usize = 5_000_000;

/// Binary branching Brownian motion at rate 1 from a single particle at the
/// origin, observed at horizon `t`.
///
/// Uses the exact embedded chain: each particle lives an Exp(1) time and its
/// displacement is drawn only at its split time or at the horizon, so no
/// path discretization enters the endpoint law.
pub fn simulate_bbm(t: f64, stream: &mut RngStream, guard: usize) -> Result<PopulationSnapshot> {
    if t == 0.0 {
        let mut g = Genealogy::with_capacity(1);
        let id = g.push(None, 0.0, 0.0, 0.0, 0.0);
        return Ok(PopulationSnapshot::new(
            0.0,
            vec![Particle { id, position: 0.0 }],
            Arc::new(g),
        ));
    }
    Ok(simulate_nested(&[t], stream, guard)?.pop().expect("one horizon"))
}

/// One run observed at several increasing horizons.
///
/// A particle alive at an intermediate horizon gets its position drawn there
/// and continues as a fresh segment (valid by the memoryless lifetime), so
/// every snapshot is an exact sample and all snapshots share one genealogy.
pub fn simulate_nested(
    horizons: &[f64],
    stream: &mut RngStream,
    guard: usize,
) -> Result<Vec<PopulationSnapshot>> {
    if horizons.is_empty() {
        return domain("at least one horizon is required");
    }
    if !(horizons[0] > 0.0) || horizons.iter().any(|h| !h.is_finite()) {
        return domain(format!("horizons must be finite and > 0, got {horizons:?}"));
    }
    if horizons.windows(2).any(|w| w[1] <= w[0]) {
        return domain(format!("horizons must be strictly increasing, got {horizons:?}"));
    }
    if guard == 0 {
        return domain("guard must be > 0");
    }

    let expected = horizons.last().unwrap().exp();
    let mut genealogy = Genealogy::with_capacity((2.5 * expected).min(4.0 * guard as f64) as usize);
    let mut observed: Vec<Vec<Particle>> = horizons
        .iter()
        .map(|h| Vec::with_capacity(h.exp() as usize + 1))
        .collect();

    struct Pending {
        parent: Option<usize>,
        time: f64,
        position: f64,
        next_obs: usize,
    }
    let mut stack = vec![Pending {
        parent: None,
        time: 0.0,
        position: 0.0,
        next_obs: 0,
    }];

    while let Some(p) = stack.pop() {
        let life = stream.standard_exponential();
        let obs_time = horizons[p.next_obs];
        let split = p.time + life;
        if split < obs_time {
            let end = p.position + life.sqrt() * stream.standard_normal();
            let id = genealogy.push(p.parent, p.time, p.position, split, end);
            for _ in 0..2 {
                stack.push(Pending {
                    parent: Some(id),
                    time: split,
                    position: end,
                    next_obs: p.next_obs,
                });
            }
        } else {
            let end = p.position + (obs_time - p.time).sqrt() * stream.standard_normal();
            let id = genealogy.push(p.parent, p.time, p.position, obs_time, end);
            let bucket = &mut observed[p.next_obs];
            bucket.push(Particle { id, position: end });
            if bucket.len() > guard {
                return Err(Error::Guard { guard });
            }
            if p.next_obs + 1 < horizons.len() {
                stack.push(Pending {
                    parent: Some(id),
                    time: obs_time,
                    position: end,
                    next_obs: p.next_obs + 1,
                });
            }
        }
    }

    let genealogy = Arc::new(genealogy);
    Ok(horizons
        .iter()
        .zip(observed)
        .map(|(&h, mut particles)| {
            particles.sort_unstable_by_key(|p| p.id);
            PopulationSnapshot::new(h, particles, Arc::clone(&genealogy))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{cluster_members, extremes, reflect_population};
    use crate::Error;

    #[test]
    fn zero_horizon_is_the_initial_particle() {
        let mut s = RngStream::new(1, 1);
        let snap = simulate_bbm(0.0, &mut s, 10).unwrap();
        assert_eq!(snap.len(), 1);
        assert_eq!(extremes(&snap), (0.0, 0.0));
    }

    #[test]
    fn bad_horizons_are_rejected() {
        let mut s = RngStream::new(1, 1);
        assert!(simulate_nested(&[], &mut s, 10).is_err());
        assert!(simulate_nested(&[2.0, 1.0], &mut s, 10).is_err());
        assert!(simulate_nested(&[-1.0], &mut s, 10).is_err());
        assert!(simulate_bbm(1.0, &mut s, 0).is_err());
    }

    #[test]
    fn guard_breach_is_an_error_not_a_truncation() {
        let mut s = RngStream::new(2, 0);
        let r = simulate_bbm(10.0, &mut s, 50);
        assert_eq!(r.unwrap_err(), Error::Guard { guard: 50 });
    }

    #[test]
    fn same_stream_same_population() {
        let a = simulate_bbm(4.0, &mut RngStream::new(9, 4), DEFAULT_GUARD).unwrap();
        let b = simulate_bbm(4.0, &mut RngStream::new(9, 4), DEFAULT_GUARD).unwrap();
        assert_eq!(a.particles(), b.particles());
    }

    #[test]
    fn genealogy_is_continuous() {
        let snap = simulate_bbm(5.0, &mut RngStream::new(3, 3), DEFAULT_GUARD).unwrap();
        let g = snap.genealogy();
        let root = g.node(0).unwrap();
        assert_eq!((root.birth_time, root.birth_position, root.parent), (0.0, 0.0, None));
        for n in g.nodes() {
            assert!(n.birth_time < n.split_time && n.split_time <= 5.0);
            if let Some(p) = n.parent {
                let parent = g.node(p).unwrap();
                assert_eq!(n.birth_time, parent.split_time);
                assert_eq!(n.birth_position, parent.endpoint_position);
            }
        }
        for p in snap.particles() {
            let node = g.node(p.id).unwrap();
            assert_eq!(node.split_time, 5.0);
            assert_eq!(node.endpoint_position, p.position);
        }
    }

    #[test]
    fn mrca_is_symmetric_and_bounded() {
        let snap = simulate_bbm(4.0, &mut RngStream::new(5, 1), DEFAULT_GUARD).unwrap();
        let ids: Vec<usize> = snap.particles().iter().map(|p| p.id).take(20).collect();
        for &u in &ids {
            for &v in &ids {
                let q = snap.mrca_time(u, v).unwrap();
                assert_eq!(q, snap.mrca_time(v, u).unwrap());
                assert!((0.0..=4.0).contains(&q));
                if u != v {
                    assert!(q < 4.0);
                }
            }
        }
        assert_eq!(snap.mrca_time(ids[0], ids[0]).unwrap(), 4.0);
        assert!(snap.mrca_time(ids[0], usize::MAX).is_err());
        // the root segment is not alive at the horizon
        assert!(snap.mrca_time(0, ids[0]).is_err());
    }

    #[test]
    fn nested_snapshots_share_a_consistent_tree() {
        let snaps = simulate_nested(&[1.0, 2.5, 4.0], &mut RngStream::new(8, 0), DEFAULT_GUARD)
            .unwrap();
        assert_eq!(snaps.len(), 3);
        let g = snaps[2].genealogy();
        for (k, snap) in snaps.iter().enumerate() {
            assert_eq!(snap.horizon(), [1.0, 2.5, 4.0][k]);
            for p in snap.particles() {
                assert_eq!(g.node(p.id).unwrap().split_time, snap.horizon());
            }
        }
        // every particle at 4.0 descends from exactly one particle at 2.5
        let mid: std::collections::HashSet<usize> =
            snaps[1].particles().iter().map(|p| p.id).collect();
        for p in snaps[2].particles() {
            let anc = g.ancestry(p.id).unwrap();
            assert_eq!(anc.iter().filter(|a| mid.contains(a)).count(), 1);
        }
    }

    #[test]
    fn reflection() {
        let snap = simulate_bbm(3.0, &mut RngStream::new(12, 0), DEFAULT_GUARD).unwrap();
        let r = reflect_population(&snap).unwrap();
        assert!(r.is_reflected());
        assert!(r.positions().all(|x| x >= 0.0));
        let (m, lo) = extremes(&snap);
        assert_eq!(extremes(&r).0, m.max(-lo));
        assert_eq!(r.genealogy().len(), snap.genealogy().len());
        for (a, b) in snap.genealogy().nodes().iter().zip(r.genealogy().nodes()) {
            assert_eq!(a.parent, b.parent);
            assert_eq!(a.endpoint_position.abs(), b.endpoint_position);
        }
        assert!(matches!(reflect_population(&r), Err(Error::Contract(_))));
    }

    #[test]
    fn reflection_of_hand_built_snapshot() {
        let mut g = Genealogy::default();
        let r = g.push(None, 0.0, 0.0, 0.5, 0.1);
        let a = g.push(Some(r), 0.5, 0.1, 1.0, -1.2);
        let b = g.push(Some(r), 0.5, 0.1, 1.0, 0.4);
        let snap = PopulationSnapshot::new(
            1.0,
            vec![
                Particle { id: a, position: -1.2 },
                Particle { id: b, position: 0.4 },
            ],
            Arc::new(g),
        );
        let refl = reflect_population(&snap).unwrap();
        assert_eq!(refl.positions().collect::<Vec<_>>(), vec![1.2, 0.4]);
        assert_eq!(extremes(&snap), (0.4, -1.2));

        // an all-positive population is unchanged
        let mut g = Genealogy::default();
        let r = g.push(None, 0.0, 0.0, 1.0, 0.3);
        let snap = PopulationSnapshot::new(1.0, vec![Particle { id: r, position: 0.3 }], Arc::new(g));
        assert_eq!(reflect_population(&snap).unwrap().particles(), snap.particles());
    }

    #[test]
    fn coupled_reflection_dominates() {
        for rep in 0..200 {
            let snap = simulate_bbm(3.0, &mut RngStream::new(77, rep), DEFAULT_GUARD).unwrap();
            let r = reflect_population(&snap).unwrap();
            assert!(extremes(&r).0 >= extremes(&snap).0);
        }
    }

    #[test]
    fn clusters() {
        let snap = simulate_bbm(3.0, &mut RngStream::new(4, 2), DEFAULT_GUARD).unwrap();
        let all = cluster_members(&snap, 0.0, |t: f64| t.powf(0.9) + 10.0).unwrap();
        assert_eq!(all.len(), snap.len());
        let left = cluster_members(&snap, -std::f64::consts::SQRT_2, f64::ln).unwrap();
        let right = cluster_members(&snap, std::f64::consts::SQRT_2, f64::ln).unwrap();
        assert!(left.iter().all(|id| !right.contains(id)));
        assert!(cluster_members(&snap, 1.5, f64::ln).is_err());
    }
}
