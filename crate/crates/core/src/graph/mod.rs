//! Interference graphs over a bounded ID space `[1, N]`.
//!
//! A [`Graph`] is immutable once built. Node records are kept sorted by ID so
//! two graphs with the same nodes and edges compare equal regardless of how
//! they were assembled.

mod edgelist;
mod generate;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub use edgelist::{load_edge_list, save_edge_list};
pub use generate::{gen_gnp, gen_stars, gen_udg, random_id_injection};

/// Node identifier, 1-based, drawn from `[1, N]`.
pub type NodeId = u64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    id_space: u64,
    ids: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from explicit node IDs and an edge list.
    ///
    /// Every edge endpoint must also appear in `nodes`. Duplicate edges (in
    /// either orientation) and self-loops are rejected.
    pub fn from_parts(
        id_space: u64,
        nodes: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self> {
        let mut ids: Vec<NodeId> = nodes.into_iter().collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("duplicate node id {}", w[0])));
        }
        if let Some(&bad) = ids.iter().find(|&&x| x == 0 || x > id_space) {
            return Err(invalid(format!("node id {bad} outside [1, {id_space}]")));
        }
        let index: HashMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for (a, b) in edges {
            if a == b {
                return Err(invalid(format!("self-loop on {a}")));
            }
            let ia = *index.get(&a).ok_or(Error::NotFound(a))?;
            let ib = *index.get(&b).ok_or(Error::NotFound(b))?;
            adj[ia].push(ib);
            adj[ib].push(ia);
        }
        for (i, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(invalid(format!("duplicate edge {} {}", ids[i], ids[w[0]])));
            }
        }
        let g = Graph {
            id_space,
            ids,
            index,
            adj,
        };
        g.debug_check();
        Ok(g)
    }

    /// Builds a graph whose node set is exactly the edge endpoints.
    pub fn from_edges(id_space: u64, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut nodes: Vec<NodeId> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        Self::from_parts(id_space, nodes, edges.iter().copied())
    }

    fn debug_check(&self) {
        debug_assert!(self.ids.len() as u64 <= self.id_space || self.ids.is_empty());
        for (i, list) in self.adj.iter().enumerate() {
            debug_assert!(list.len() < self.ids.len());
            for &j in list {
                debug_assert_ne!(i, j);
                debug_assert!(self.adj[j].binary_search(&i).is_ok());
            }
        }
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.ids.len()
    }

    /// Size `N` of the ID space.
    pub fn id_space(&self) -> u64 {
        self.id_space
    }

    /// Node IDs in ascending order.
    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index.contains_key(&id)
    }

    fn idx(&self, id: NodeId) -> Result<usize> {
        self.index.get(&id).copied().ok_or(Error::NotFound(id))
    }

    pub fn neighbors(&self, id: NodeId) -> Result<impl Iterator<Item = NodeId> + '_> {
        let i = self.idx(id)?;
        Ok(self.adj[i].iter().map(move |&j| self.ids[j]))
    }

    pub fn degree(&self, id: NodeId) -> Result<usize> {
        Ok(self.adj[self.idx(id)?].len())
    }

    /// Maximum degree; zero for an empty or edgeless graph.
    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(smaller id, larger id)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj.iter().enumerate().flat_map(move |(i, list)| {
            list.iter()
                .filter(move |&&j| j > i)
                .map(move |&j| (self.ids[i], self.ids[j]))
        })
    }

    /// The one-hop view `(x_v, Γ_v)` of node `id`.
    pub fn view_of(&self, id: NodeId) -> Result<OneHopView> {
        let i = self.idx(id)?;
        Ok(OneHopView {
            id,
            neighbors: self.adj[i].iter().map(|&j| self.ids[j]).collect(),
        })
    }

    /// Drops edges so that no node exceeds degree `cap`.
    ///
    /// Edges are scanned in [`Graph::edges`] order and kept only while both
    /// endpoints are still below the cap, so the result is deterministic.
    pub fn cap_degree(&self, cap: usize) -> Graph {
        let mut deg = vec![0usize; self.n()];
        let mut kept = Vec::new();
        for (i, list) in self.adj.iter().enumerate() {
            for &j in list.iter().filter(|&&j| j > i) {
                if deg[i] < cap && deg[j] < cap {
                    deg[i] += 1;
                    deg[j] += 1;
                    kept.push((self.ids[i], self.ids[j]));
                }
            }
        }
        Graph::from_parts(self.id_space, self.ids.iter().copied(), kept)
            .expect("subgraph of a valid graph is valid")
    }
}

/// A node's ID together with the IDs of its neighbors.
///
/// This pair is the entire input of a deterministic one-shot node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OneHopView {
    pub id: NodeId,
    /// Sorted, without duplicates, never containing `id`.
    pub neighbors: Vec<NodeId>,
}

impl OneHopView {
    pub fn new(id: NodeId, neighbors: impl IntoIterator<Item = NodeId>) -> Result<Self> {
        let mut neighbors: Vec<NodeId> = neighbors.into_iter().collect();
        neighbors.sort_unstable();
        neighbors.dedup();
        if neighbors.binary_search(&id).is_ok() {
            return Err(invalid(format!("view of {id} lists itself as a neighbor")));
        }
        Ok(OneHopView { id, neighbors })
    }

    pub fn degree(&self) -> usize {
        self.neighbors.len()
    }

    /// Largest ID mentioned by the view.
    pub fn max_id(&self) -> NodeId {
        self.neighbors.last().copied().unwrap_or(0).max(self.id)
    }

    pub(crate) fn check_ids(&self, id_space: u64) -> Result<()> {
        if self.id == 0 || self.neighbors.first() == Some(&0) || self.max_id() > id_space {
            return Err(invalid(format!(
                "view of {} has ids outside [1, {id_space}]",
                self.id
            )));
        }
        Ok(())
    }
}

impl fmt::Display for OneHopView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {{", self.id)?;
        for (i, y) in self.neighbors.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{y}")?;
        }
        write!(f, "}})")
    }
}
