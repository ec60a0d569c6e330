//! TDMA frames from multicolorings: color `i` becomes time slot `i` of a
//! frame of `k` slots, and a node transmits in the slots of its colors.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::coloring::Multicoloring;
use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, NodeId};
use crate::verify::verify;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSlots {
    pub id: NodeId,
    /// Strictly increasing, within `[1, frame_length]`.
    pub slots: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleMeta {
    pub algorithm: String,
    pub epsilon: Option<f64>,
    pub seed: u64,
    pub params: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TdmaSchedule {
    pub frame_length: u64,
    pub nodes: Vec<NodeSlots>,
    pub meta: ScheduleMeta,
}

/// Converts a coloring of `g` into a schedule, refusing colorings that fail
/// verification.
pub fn to_schedule(g: &Graph, m: &Multicoloring) -> Result<TdmaSchedule> {
    let report = verify(g, m, 0.0)?;
    if !report.valid {
        return Err(Error::RefusedInvalid {
            violations: report.violation_count,
        });
    }
    Ok(TdmaSchedule {
        frame_length: m.palette_size,
        nodes: m
            .assignment
            .iter()
            .map(|(&id, set)| NodeSlots {
                id,
                slots: set.as_slice().to_vec(),
            })
            .collect(),
        meta: ScheduleMeta {
            algorithm: m.params.algorithm.clone(),
            epsilon: m.params.epsilon,
            seed: m.params.seed,
            params: serde_json::json!({
                "details": m.params.details,
                "max_degree": m.params.max_degree,
                "id_space": m.params.id_space,
                "n": m.params.n,
                "version": m.params.version,
            }),
        },
    })
}

impl TdmaSchedule {
    pub fn slots_of(&self, id: NodeId) -> Option<&[u64]> {
        self.nodes
            .iter()
            .find(|n| n.id == id)
            .map(|n| n.slots.as_slice())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: TdmaSchedule = serde_json::from_str(text)?;
        for n in &s.nodes {
            let ordered = n.slots.windows(2).all(|w| w[0] < w[1]);
            let in_range = n.slots.iter().all(|&t| (1..=s.frame_length).contains(&t));
            if !ordered || !in_range {
                return Err(invalid(format!(
                    "slots of node {} are not a sorted subset of the frame",
                    n.id
                )));
            }
        }
        Ok(s)
    }

    /// One `node,slot` row per transmission, with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node,slot\n");
        for n in &self.nodes {
            for s in &n.slots {
                writeln!(out, "{},{}", n.id, s).unwrap();
            }
        }
        out
    }

    /// Slots shared by two adjacent nodes of `g`, as `(u, v, slot)`.
    pub fn conflicts(&self, g: &Graph) -> Vec<(NodeId, NodeId, u64)> {
        let mut out = Vec::new();
        for (u, v) in g.edges() {
            let (Some(a), Some(b)) = (self.slots_of(u), self.slots_of(v)) else {
                continue;
            };
            out.extend(
                a.iter()
                    .filter(|s| b.binary_search(s).is_ok())
                    .map(|&s| (u, v, s)),
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeUtilization {
    pub id: NodeId,
    pub degree: usize,
    /// `|slots| / k`.
    pub duty_cycle: f64,
    /// Transmissions per frame relative to a single-slot schedule: `|slots|`.
    pub speedup: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Utilization {
    pub frame_length: u64,
    pub nodes: Vec<NodeUtilization>,
    pub mean_duty_cycle: f64,
    /// Duty cycle of classic TDMA with one slot per node: `1/k`.
    pub baseline_duty_cycle: f64,
}

pub fn utilization(s: &TdmaSchedule, g: &Graph) -> Result<Utilization> {
    let k = s.frame_length.max(1) as f64;
    let mut nodes = Vec::with_capacity(g.n());
    for &id in g.ids() {
        let slots = s.slots_of(id).ok_or(Error::Incomplete(id))?;
        nodes.push(NodeUtilization {
            id,
            degree: g.degree(id)?,
            duty_cycle: slots.len() as f64 / k,
            speedup: slots.len() as u64,
        });
    }
    let mean = if nodes.is_empty() {
        0.0
    } else {
        nodes.iter().map(|n| n.duty_cycle).sum::<f64>() / nodes.len() as f64
    };
    Ok(Utilization {
        frame_length: s.frame_length,
        nodes,
        mean_duty_cycle: mean,
        baseline_duty_cycle: 1.0 / k,
    })
}
