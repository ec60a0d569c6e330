//! Checks a multicoloring against its graph: adjacent color sets must be
//! disjoint, and each node of degree δ should hold at least a
//! `(1-ε)/(δ+1)` share of the palette.
//!
//! Pass/fail decisions use integer arithmetic only; the floating-point
//! fractions in the report are for display.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{Color, Epsilon, Multicoloring};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Violations kept in a report; the total is always counted.
pub const VIOLATION_CAP: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    Overlap { u: NodeId, v: NodeId, shared: usize },
    OutOfPalette { node: NodeId, color: Color },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeShare {
    pub id: NodeId,
    pub degree: usize,
    pub colors: u64,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeClass {
    pub degree: usize,
    pub nodes: usize,
    pub min_colors: u64,
    pub required: u64,
    /// Measured `min |S_v|·(δ+1)/k` over the class.
    pub rho: f64,
    pub meets_target: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Disjointness and palette range; equivalent to `violation_count == 0`.
    pub valid: bool,
    pub palette_size: u64,
    pub epsilon: f64,
    pub nodes: Vec<NodeShare>,
    /// `min_v (|S_v|/k)·(δ_v+1)`.
    pub worst_ratio: f64,
    pub worst_node: Option<NodeId>,
    pub degree_classes: Vec<DegreeClass>,
    /// Every node reaches `⌈(1-ε)k/(δ+1)⌉` colors.
    pub meets_target: bool,
    pub shortfall_count: usize,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn class(&self, degree: usize) -> Option<&DegreeClass> {
        self.degree_classes.iter().find(|c| c.degree == degree)
    }
}

pub fn verify(g: &Graph, m: &Multicoloring, eps: f64) -> Result<VerificationReport> {
    let eps = Epsilon::new(eps)?;
    let k = m.palette_size;
    for &id in g.ids() {
        if !m.assignment.contains_key(&id) {
            return Err(Error::Incomplete(id));
        }
    }

    let mut violations: Vec<Violation> = Vec::new();
    let mut violation_count = 0;
    for &id in g.ids() {
        let set = &m.assignment[&id];
        for c in set.iter().filter(|&c| c == 0 || c > k) {
            violation_count += 1;
            if violations.len() < VIOLATION_CAP {
                violations.push(Violation::OutOfPalette { node: id, color: c });
            }
        }
    }
    let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    let overlaps: Vec<Violation> = edges
        .par_iter()
        .filter_map(|&(u, v)| {
            let shared = m.assignment[&u].intersection_len(&m.assignment[&v]);
            (shared > 0).then_some(Violation::Overlap { u, v, shared })
        })
        .collect();
    violation_count += overlaps.len();
    violations.extend(
        overlaps
            .into_iter()
            .take(VIOLATION_CAP - violations.len().min(VIOLATION_CAP)),
    );

    let mut nodes = Vec::with_capacity(g.n());
    let mut classes: BTreeMap<usize, (usize, u64)> = BTreeMap::new();
    let mut worst: Option<(u128, NodeId)> = None;
    let mut shortfall_count = 0;
    for &id in g.ids() {
        let degree = g.degree(id)?;
        let colors = m.assignment[&id].len() as u64;
        nodes.push(NodeShare {
            id,
            degree,
            colors,
            fraction: if k == 0 {
                0.0
            } else {
                colors as f64 / k as f64
            },
        });
        let entry = classes.entry(degree).or_insert((0, u64::MAX));
        entry.0 += 1;
        entry.1 = entry.1.min(colors);
        let score = colors as u128 * (degree as u128 + 1);
        if worst.is_none_or(|(s, _)| score < s) {
            worst = Some((score, id));
        }
        if !eps.meets(colors, k, degree) {
            shortfall_count += 1;
        }
    }
    let degree_classes = classes
        .into_iter()
        .map(|(degree, (count, min_colors))| {
            let required = eps.min_colors(k, degree);
            DegreeClass {
                degree,
                nodes: count,
                min_colors,
                required,
                rho: ratio(min_colors, degree, k),
                meets_target: min_colors >= required,
            }
        })
        .collect();
    let worst_ratio = worst.map_or(0.0, |(s, _)| if k == 0 { 0.0 } else { s as f64 / k as f64 });

    Ok(VerificationReport {
        valid: violation_count == 0,
        palette_size: k,
        epsilon: eps.value(),
        nodes,
        worst_ratio,
        worst_node: worst.map(|(_, id)| id),
        degree_classes,
        meets_target: shortfall_count == 0,
        shortfall_count,
        violation_count,
        violations,
    })
}

fn ratio(colors: u64, degree: usize, k: u64) -> f64 {
    if k == 0 {
        0.0
    } else {
        colors as f64 * (degree as f64 + 1.0) / k as f64
    }
}
