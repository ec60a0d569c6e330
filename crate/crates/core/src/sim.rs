//! One-round synchronous message passing.
//!
//! Every node runs the same three steps: draw local random bits, broadcast
//! `(id, bits)` to its neighbors, then compute its color set from its own
//! envelope and the envelopes it received. Node code only ever sees those
//! envelopes; it has no handle on the [`Graph`].

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{ColorSet, Epsilon, Multicoloring, RunParams};
use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, NodeId, OneHopView};

/// What a node broadcasts: its ID and its random bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodeEnvelope {
    pub id: NodeId,
    /// Empty for deterministic algorithms.
    pub bits: Vec<u8>,
}

impl NodeEnvelope {
    pub fn deterministic(id: NodeId) -> Self {
        NodeEnvelope {
            id,
            bits: Vec::new(),
        }
    }

    /// Wire size: eight bytes of ID plus the bits.
    pub fn payload_bytes(&self) -> usize {
        8 + self.bits.len()
    }
}

/// Global knowledge every node starts with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharedConfig {
    /// Upper bound on the number of nodes.
    pub n: usize,
    /// Size of the ID space.
    pub id_space: u64,
    /// Upper bound on the maximum degree.
    pub max_degree: usize,
}

impl SharedConfig {
    pub fn for_graph(g: &Graph) -> Self {
        SharedConfig {
            n: g.n(),
            id_space: g.id_space(),
            max_degree: g.max_degree(),
        }
    }
}

/// A one-shot node computation.
pub trait NodeAlgorithm: Sync {
    fn name(&self) -> &'static str;

    fn config(&self) -> SharedConfig;

    fn palette_size(&self) -> u64;

    fn epsilon(&self) -> Option<Epsilon> {
        None
    }

    fn is_deterministic(&self) -> bool {
        true
    }

    /// Step 1: local random bits, keyed by `(seed, id)`.
    fn generate_bits(&self, _id: NodeId, _seed: u64) -> Vec<u8> {
        Vec::new()
    }

    /// Step 3: the color set, from the node's own envelope and those of its
    /// neighbors.
    fn compute(&self, own: &NodeEnvelope, received: &[&NodeEnvelope]) -> Result<ColorSet>;

    /// Colors a node of this degree is promised (deterministically, or w.h.p.
    /// for randomized algorithms).
    fn guaranteed_colors(&self, degree: usize) -> u64;

    /// Algorithm-specific settings recorded in the run metadata.
    fn details(&self) -> serde_json::Value {
        serde_json::Value::Null
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeTrace {
    pub id: NodeId,
    pub sent_bytes: usize,
    /// Senders of the envelopes this node received, ascending.
    pub received_from: Vec<NodeId>,
    pub received_bytes: usize,
    pub colors: usize,
}

/// Message statistics of one round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub algorithm: String,
    pub nodes: Vec<NodeTrace>,
    /// Directed deliveries: `2|E|`.
    pub message_count: usize,
    pub max_payload_bytes: usize,
}

impl RoundTrace {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn check_envelope<A: NodeAlgorithm + ?Sized>(algo: &A, env: &NodeEnvelope) -> Result<()> {
    if algo.is_deterministic() && !env.bits.is_empty() {
        return Err(Error::ContractViolation(format!(
            "deterministic algorithm {} got {} random bytes from node {}",
            algo.name(),
            env.bits.len(),
            env.id
        )));
    }
    Ok(())
}

/// Runs one synchronous round of `algo` on `g`.
pub fn run_one_shot<A: NodeAlgorithm + ?Sized>(
    g: &Graph,
    algo: &A,
    seed: u64,
) -> Result<(Multicoloring, RoundTrace)> {
    let cfg = algo.config();
    if g.max_degree() > cfg.max_degree {
        return Err(invalid(format!(
            "graph has degree {} but {} was configured for {}",
            g.max_degree(),
            algo.name(),
            cfg.max_degree
        )));
    }
    if g.id_space() > cfg.id_space || g.n() > cfg.n {
        return Err(invalid(format!(
            "graph (n = {}, N = {}) exceeds configuration (n = {}, N = {})",
            g.n(),
            g.id_space(),
            cfg.n,
            cfg.id_space
        )));
    }

    // Step 1.
    let envelopes: Vec<NodeEnvelope> = g
        .ids()
        .par_iter()
        .map(|&id| NodeEnvelope {
            id,
            bits: algo.generate_bits(id, seed),
        })
        .collect();
    for env in &envelopes {
        check_envelope(algo, env)?;
    }

    // Step 2. Envelopes are immutable from here on.
    let position: BTreeMap<NodeId, usize> =
        g.ids().iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let inboxes: Vec<Vec<&NodeEnvelope>> = g
        .ids()
        .iter()
        .map(|&id| {
            g.neighbors(id)
                .expect("id from graph")
                .map(|u| &envelopes[position[&u]])
                .collect()
        })
        .collect();

    // Step 3.
    let outputs: Vec<ColorSet> = envelopes
        .par_iter()
        .zip(inboxes.par_iter())
        .map(|(own, inbox)| algo.compute(own, inbox))
        .collect::<Result<_>>()?;

    let nodes: Vec<NodeTrace> = envelopes
        .iter()
        .zip(&inboxes)
        .zip(&outputs)
        .map(|((own, inbox), colors)| NodeTrace {
            id: own.id,
            sent_bytes: own.payload_bytes(),
            received_from: inbox.iter().map(|e| e.id).collect(),
            received_bytes: inbox.iter().map(|e| e.payload_bytes()).sum(),
            colors: colors.len(),
        })
        .collect();
    let trace = RoundTrace {
        algorithm: algo.name().to_string(),
        message_count: nodes.iter().map(|t| t.received_from.len()).sum(),
        max_payload_bytes: envelopes
            .iter()
            .map(NodeEnvelope::payload_bytes)
            .max()
            .unwrap_or(0),
        nodes,
    };

    let coloring = Multicoloring {
        palette_size: algo.palette_size(),
        assignment: g.ids().iter().copied().zip(outputs).collect(),
        params: RunParams {
            algorithm: algo.name().to_string(),
            epsilon: algo.epsilon().map(Epsilon::value),
            seed,
            max_degree: cfg.max_degree,
            id_space: cfg.id_space,
            n: cfg.n,
            details: algo.details(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
    };
    Ok((coloring, trace))
}

/// Step 3 for a single node, outside any graph.
///
/// `received` must carry exactly the IDs in `view.neighbors`.
pub fn replay_view<A: NodeAlgorithm + ?Sized>(
    view: &OneHopView,
    own_bits: &[u8],
    received: &[NodeEnvelope],
    algo: &A,
) -> Result<ColorSet> {
    let mut ids: Vec<NodeId> = received.iter().map(|e| e.id).collect();
    ids.sort_unstable();
    if ids != view.neighbors {
        return Err(invalid(format!(
            "envelopes from {ids:?} do not match the neighbors of {view}"
        )));
    }
    let own = NodeEnvelope {
        id: view.id,
        bits: own_bits.to_vec(),
    };
    check_envelope(algo, &own)?;
    for env in received {
        check_envelope(algo, env)?;
    }
    let refs: Vec<&NodeEnvelope> = received.iter().collect();
    algo.compute(&own, &refs)
}

/// Evaluates a deterministic algorithm on a bare view.
pub fn evaluate_view<A: NodeAlgorithm + ?Sized>(view: &OneHopView, algo: &A) -> Result<ColorSet> {
    let received: Vec<NodeEnvelope> = view
        .neighbors
        .iter()
        .map(|&y| NodeEnvelope::deterministic(y))
        .collect();
    replay_view(view, &[], &received, algo)
}

/// Rebuilds the one-hop view carried by a set of envelopes.
pub(crate) fn view_from(own: &NodeEnvelope, received: &[&NodeEnvelope]) -> Result<OneHopView> {
    OneHopView::new(own.id, received.iter().map(|e| e.id))
}
