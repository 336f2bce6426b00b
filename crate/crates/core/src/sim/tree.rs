use crate::error::{Error, Result};

/// One segment of a particle's life: from its birth to its split (or to the
/// observation horizon at which it was recorded).
#[derive(Debug, Clone, PartialEq)]
pub struct LineageNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub birth_time: f64,
    pub birth_position: f64,
    pub split_time: f64,
    /// Signed position at `split_time` (absolute value after reflection).
    pub endpoint_position: f64,
}

/// Columnar export row for offline analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotRecord {
    pub replicate_id: u64,
    pub particle_id: usize,
    pub parent_id: Option<usize>,
    pub birth_time: f64,
    pub split_time: f64,
    pub endpoint_position: f64,
}

/// Forest of lineage segments, indexed by node id.
#[derive(Debug, Clone, Default)]
pub struct Genealogy {
    nodes: Vec<LineageNode>,
    depth: Vec<u32>,
}

impl Genealogy {
    pub(crate) fn with_capacity(n: usize) -> Self {
        Self {
            nodes: Vec::with_capacity(n),
            depth: Vec::with_capacity(n),
        }
    }

    pub(crate) fn push(
        &mut self,
        parent: Option<usize>,
        birth_time: f64,
        birth_position: f64,
        split_time: f64,
        endpoint_position: f64,
    ) -> usize {
        let id = self.nodes.len();
        let depth = parent.map_or(0, |p| self.depth[p] + 1);
        self.nodes.push(LineageNode {
            id,
            parent,
            birth_time,
            birth_position,
            split_time,
            endpoint_position,
        });
        self.depth.push(depth);
        id
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[LineageNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> Result<&LineageNode> {
        self.nodes.get(id).ok_or(Error::UnknownId(id))
    }

    /// Ancestor chain from `id` (inclusive) up to the root.
    pub fn ancestry(&self, id: usize) -> Result<Vec<usize>> {
        let mut chain = vec![];
        let mut cur = Some(self.node(id)?.id);
        while let Some(c) = cur {
            chain.push(c);
            cur = self.nodes[c].parent;
        }
        Ok(chain)
    }

    /// Time of the deepest common ancestor of `u` and `v`: the split time of
    /// the segment where their ancestral lines separate. For `u == v` this is
    /// the node's own end time (the observation horizon for a live particle).
    pub fn mrca_time(&self, u: usize, v: usize) -> Result<f64> {
        self.node(u)?;
        self.node(v)?;
        let (mut a, mut b) = (u, v);
        while self.depth[a] > self.depth[b] {
            a = self.nodes[a].parent.expect("depth > 0 has a parent");
        }
        while self.depth[b] > self.depth[a] {
            b = self.nodes[b].parent.expect("depth > 0 has a parent");
        }
        while a != b {
            match (self.nodes[a].parent, self.nodes[b].parent) {
                (Some(pa), Some(pb)) => {
                    a = pa;
                    b = pb;
                }
                _ => return Err(Error::Contract(format!("nodes {u} and {v} share no root"))),
            }
        }
        Ok(self.nodes[a].split_time)
    }

    pub(crate) fn reflected(&self) -> Self {
        let nodes = self
            .nodes
            .iter()
            .map(|n| LineageNode {
                birth_position: n.birth_position.abs(),
                endpoint_position: n.endpoint_position.abs(),
                ..n.clone()
            })
            .collect();
        Self {
            nodes,
            depth: self.depth.clone(),
        }
    }
}
