//! The neighborhood graph: one vertex per possible one-hop view, with an
//! edge wherever two views can belong to adjacent nodes of some labeled
//! graph. A one-shot algorithm is exactly a (multi)coloring of it, which
//! makes it the place to certify an algorithm exhaustively at small `N`.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{for_each_subset, view_count};
use crate::error::{invalid, Error, Result};
use crate::graph::{NodeId, OneHopView};
use crate::sim::{evaluate_view, NodeAlgorithm};

pub const VERTEX_BUDGET: u128 = 1_000_000;
pub const CHROMATIC_BUDGET: usize = 10_000;
pub const EDGE_LIST_BUDGET: u128 = 20_000_000;

/// The adjacency rule between two views: distinct IDs, each listed by the
/// other, and neither listing itself in the other's position.
pub fn views_adjacent(u: &OneHopView, v: &OneHopView) -> bool {
    let has = |view: &OneHopView, id: NodeId| view.neighbors.binary_search(&id).is_ok();
    u.id != v.id && has(v, u.id) && !has(u, u.id) && has(u, v.id) && !has(v, v.id)
}

#[derive(Debug, Clone)]
pub struct NeighborhoodGraph {
    id_space: u64,
    max_degree: usize,
    vertices: Vec<OneHopView>,
    /// `(x, y)` → vertices with ID `x` whose neighbor set contains `y`.
    containing: HashMap<(NodeId, NodeId), Vec<u32>>,
}

/// Enumerates every view `(x, Γ)` over `[1, N]` with `1 <= |Γ| <= Δ`.
pub fn build_nbr_graph(id_space: u64, max_degree: usize) -> Result<NeighborhoodGraph> {
    if id_space < 1 {
        return Err(invalid("N must be at least 1"));
    }
    let count = view_count(id_space, 1, max_degree);
    if count > VERTEX_BUDGET {
        return Err(Error::TooLarge {
            what: "neighborhood graph vertices",
            count,
            limit: VERTEX_BUDGET,
        });
    }
    let mut vertices = Vec::with_capacity(count as usize);
    for x in 1..=id_space {
        let pool: Vec<NodeId> = (1..=id_space).filter(|&y| y != x).collect();
        for d in 1..=max_degree {
            for_each_subset(&pool, d, |g| {
                vertices.push(OneHopView {
                    id: x,
                    neighbors: g.to_vec(),
                })
            });
        }
    }
    let mut containing: HashMap<(NodeId, NodeId), Vec<u32>> = HashMap::new();
    for (i, v) in vertices.iter().enumerate() {
        for &y in &v.neighbors {
            containing.entry((v.id, y)).or_default().push(i as u32);
        }
    }
    Ok(NeighborhoodGraph {
        id_space,
        max_degree,
        vertices,
        containing,
    })
}

impl NeighborhoodGraph {
    pub fn id_space(&self) -> u64 {
        self.id_space
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn vertices(&self) -> &[OneHopView] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    fn group(&self, x: NodeId, y: NodeId) -> &[u32] {
        self.containing.get(&(x, y)).map_or(&[], Vec::as_slice)
    }

    /// Unordered ID pairs `(x, y)` with `x < y`.
    fn id_pairs(&self) -> Vec<(NodeId, NodeId)> {
        (1..=self.id_space)
            .flat_map(|x| (x + 1..=self.id_space).map(move |y| (x, y)))
            .collect()
    }

    /// Every edge joins a view of `x` listing `y` with a view of `y` listing
    /// `x`, and every such pair is an edge.
    pub fn edge_count(&self) -> u128 {
        self.id_pairs()
            .iter()
            .map(|&(x, y)| self.group(x, y).len() as u128 * self.group(y, x).len() as u128)
            .sum()
    }

    /// Calls `f` on every edge as a pair of vertex indices.
    pub fn for_each_edge(&self, mut f: impl FnMut(usize, usize)) {
        for (x, y) in self.id_pairs() {
            for &a in self.group(x, y) {
                for &b in self.group(y, x) {
                    f(a as usize, b as usize);
                }
            }
        }
    }

    pub fn edge_list(&self) -> Result<Vec<(usize, usize)>> {
        let count = self.edge_count();
        if count > EDGE_LIST_BUDGET {
            return Err(Error::TooLarge {
                what: "neighborhood graph edges",
                count,
                limit: EDGE_LIST_BUDGET,
            });
        }
        let mut out = Vec::with_capacity(count as usize);
        self.for_each_edge(|a, b| out.push((a, b)));
        Ok(out)
    }

    /// Neighbors of vertex `i`.
    pub fn adjacent(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let v = &self.vertices[i];
        v.neighbors
            .iter()
            .flat_map(move |&y| self.group(y, v.id).iter().map(|&j| j as usize))
    }

    pub fn index_of(&self, view: &OneHopView) -> Option<usize> {
        let first = view.neighbors.first()?;
        self.group(view.id, *first)
            .iter()
            .map(|&i| i as usize)
            .find(|&i| &self.vertices[i] == view)
    }
}

/// Exact chromatic number by DSATUR branch and bound, seeded with a greedy
/// clique (lower bound) and a greedy DSATUR coloring (upper bound).
pub fn chromatic_number(ng: &NeighborhoodGraph) -> Result<usize> {
    let n = ng.vertex_count();
    if n > CHROMATIC_BUDGET {
        return Err(Error::TooLarge {
            what: "vertices for exact coloring",
            count: n as u128,
            limit: CHROMATIC_BUDGET as u128,
        });
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|i| ng.adjacent(i).collect()).collect();
    Ok(exact_chromatic(&adj))
}

/// Exact chromatic number of a graph given by adjacency lists.
pub fn exact_chromatic(adj: &[Vec<usize>]) -> usize {
    let n = adj.len();
    if n == 0 {
        return 0;
    }
    let lower = greedy_clique(adj);
    let greedy = dsatur_greedy(adj);
    let mut solver = Dsatur::new(adj, greedy);
    if lower < greedy {
        solver.search(lower);
    }
    solver.best
}

fn greedy_clique(adj: &[Vec<usize>]) -> usize {
    let n = adj.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].len()));
    let mut mark = vec![false; n];
    let mut best = 1;
    for &start in &order {
        if adj[start].len() < best {
            break;
        }
        let mut clique = vec![start];
        let mut cands: Vec<usize> = adj[start].clone();
        cands.sort_by_key(|&v| std::cmp::Reverse(adj[v].len()));
        for &c in &cands {
            for &w in &adj[c] {
                mark[w] = true;
            }
            if clique.iter().all(|&m| mark[m]) {
                clique.push(c);
            }
            for &w in &adj[c] {
                mark[w] = false;
            }
        }
        best = best.max(clique.len());
    }
    best
}

fn dsatur_greedy(adj: &[Vec<usize>]) -> usize {
    let mut s = Dsatur::new(adj, usize::MAX);
    let mut used = 0;
    for _ in 0..adj.len() {
        let v = s.pick();
        let c = (0..).find(|&c| s.count[v * s.width + c] == 0).unwrap();
        s.assign(v, c);
        used = used.max(c + 1);
    }
    used
}

struct Dsatur<'a> {
    adj: &'a [Vec<usize>],
    color: Vec<Option<usize>>,
    /// `count[v * width + c]`: colored neighbors of `v` with color `c`.
    count: Vec<u32>,
    saturation: Vec<usize>,
    width: usize,
    best: usize,
    colored: usize,
}

impl<'a> Dsatur<'a> {
    fn new(adj: &'a [Vec<usize>], best: usize) -> Self {
        let n = adj.len();
        let width = if best == usize::MAX { n + 1 } else { best + 1 };
        Dsatur {
            adj,
            color: vec![None; n],
            count: vec![0; n * width],
            saturation: vec![0; n],
            width,
            best,
            colored: 0,
        }
    }

    fn pick(&self) -> usize {
        (0..self.adj.len())
            .filter(|&v| self.color[v].is_none())
            .max_by_key(|&v| (self.saturation[v], self.adj[v].len(), std::cmp::Reverse(v)))
            .unwrap()
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.color[v] = Some(c);
        self.colored += 1;
        for &w in &self.adj[v] {
            let slot = &mut self.count[w * self.width + c];
            if *slot == 0 {
                self.saturation[w] += 1;
            }
            *slot += 1;
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.color[v] = None;
        self.colored -= 1;
        for &w in &self.adj[v] {
            let slot = &mut self.count[w * self.width + c];
            *slot -= 1;
            if *slot == 0 {
                self.saturation[w] -= 1;
            }
        }
    }

    /// Returns `true` once a coloring with `lower` colors is found.
    fn search(&mut self, lower: usize) -> bool {
        self.extend(0, lower)
    }

    fn extend(&mut self, used: usize, lower: usize) -> bool {
        if self.colored == self.adj.len() {
            self.best = used;
            return used <= lower;
        }
        let v = self.pick();
        let limit = (used + 1).min(self.best - 1);
        for c in 0..limit {
            if self.count[v * self.width + c] != 0 {
                continue;
            }
            self.assign(v, c);
            let done = self.extend(used.max(c + 1), lower);
            self.unassign(v, c);
            if done {
                return true;
            }
            if used.max(c + 1) >= self.best {
                break;
            }
        }
        false
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeSummary {
    pub degree: usize,
    pub views: u64,
    pub min_colors: u64,
    pub required: u64,
}

/// Result of evaluating an algorithm on every view and every edge of a
/// neighborhood graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbrCertificate {
    pub algorithm: String,
    pub id_space: u64,
    pub max_degree: usize,
    pub palette_size: u64,
    pub views: usize,
    pub edges_checked: u128,
    pub intersecting_edges: u128,
    /// First few intersecting edges, as view pairs.
    pub examples: Vec<(OneHopView, OneHopView)>,
    pub fraction_failures: u64,
    pub per_degree: Vec<DegreeSummary>,
}

impl NbrCertificate {
    pub fn disjoint(&self) -> bool {
        self.intersecting_edges == 0
    }

    pub fn fractions_ok(&self) -> bool {
        self.fraction_failures == 0
    }

    pub fn passed(&self) -> bool {
        self.disjoint() && self.fractions_ok()
    }
}

/// Runs a deterministic algorithm on every vertex of `ng`, then checks
/// disjointness across every edge and the algorithm's own per-degree
/// guarantee on every vertex.
pub fn check_algo_on_nbr_graph<A: NodeAlgorithm + ?Sized>(
    algo: &A,
    ng: &NeighborhoodGraph,
) -> Result<NbrCertificate> {
    if !algo.is_deterministic() {
        return Err(invalid(format!(
            "{} is randomized; only deterministic algorithms color the neighborhood graph",
            algo.name()
        )));
    }
    let cfg = algo.config();
    if cfg.id_space < ng.id_space || cfg.max_degree < ng.max_degree {
        return Err(invalid(format!(
            "{} is configured for N = {}, Δ = {} but the graph needs N = {}, Δ = {}",
            algo.name(),
            cfg.id_space,
            cfg.max_degree,
            ng.id_space,
            ng.max_degree
        )));
    }
    let k = algo.palette_size();
    let sets: Vec<FixedBitSet> = ng
        .vertices
        .par_iter()
        .map(|view| {
            let colors = evaluate_view(view, algo)?;
            let mut bits = FixedBitSet::with_capacity(k as usize + 1);
            for c in colors.iter() {
                if c == 0 || c > k {
                    return Err(Error::ContractViolation(format!(
                        "{} produced color {c} outside [1, {k}]",
                        algo.name()
                    )));
                }
                bits.insert(c as usize);
            }
            Ok(bits)
        })
        .collect::<Result<_>>()?;

    let mut per_degree: Vec<DegreeSummary> = (1..=ng.max_degree)
        .map(|d| DegreeSummary {
            degree: d,
            views: 0,
            min_colors: u64::MAX,
            required: algo.guaranteed_colors(d),
        })
        .collect();
    let mut fraction_failures = 0;
    for (view, bits) in ng.vertices.iter().zip(&sets) {
        let s = &mut per_degree[view.degree() - 1];
        let colors = bits.count_ones(..) as u64;
        s.views += 1;
        s.min_colors = s.min_colors.min(colors);
        if colors < s.required {
            fraction_failures += 1;
        }
    }

    let pairs = ng.id_pairs();
    let (edges_checked, intersecting, mut examples) = pairs
        .par_iter()
        .map(|&(x, y)| {
            let mut checked = 0u128;
            let mut bad = 0u128;
            let mut ex = Vec::new();
            for &a in ng.group(x, y) {
                for &b in ng.group(y, x) {
                    checked += 1;
                    if !sets[a as usize].is_disjoint(&sets[b as usize]) {
                        bad += 1;
                        if ex.len() < 10 {
                            ex.push((a, b));
                        }
                    }
                }
            }
            (checked, bad, ex)
        })
        .reduce(
            || (0, 0, Vec::new()),
            |mut l, r| {
                l.0 += r.0;
                l.1 += r.1;
                l.2.extend(r.2);
                l
            },
        );
    examples.sort_unstable();
    examples.truncate(10);

    Ok(NbrCertificate {
        algorithm: algo.name().to_string(),
        id_space: ng.id_space,
        max_degree: ng.max_degree,
        palette_size: k,
        views: ng.vertex_count(),
        edges_checked,
        intersecting_edges: intersecting,
        examples: examples
            .into_iter()
            .map(|(a, b)| {
                (
                    ng.vertices[a as usize].clone(),
                    ng.vertices[b as usize].clone(),
                )
            })
            .collect(),
        fraction_failures,
        per_degree,
    })
}
