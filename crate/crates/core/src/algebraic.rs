//! Explicit deterministic multicoloring from polynomials over prime fields.
//!
//! The basic construction assigns each ID a polynomial of degree at most
//! `d_0` over `GF(q_0)`. A color is a point `α_0` together with the value
//! there; a node keeps the point when its value differs from every
//! neighbor's. With depth `ℓ > 0` the value at level `i-1` is itself encoded
//! as a polynomial over `GF(q_i)` and the test is repeated, shrinking the
//! palette's dependence on `N`.
//!
//! The weighted construction runs one basic instance per degree class
//! `2^i` and repeats each instance's colors `ω_i` times so that low-degree
//! nodes end up with a larger share of the combined palette.

use serde::{Deserialize, Serialize};

use crate::coloring::{ColorSet, Epsilon};
use crate::error::{invalid, Error, Result};
use crate::field::{encode_poly, next_prime, poly_count, Poly, PrimeField};
use crate::graph::OneHopView;
use crate::sim::{view_from, NodeAlgorithm, NodeEnvelope, SharedConfig};

/// One level of the polynomial tower.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub q: u64,
    pub d: usize,
    pub f: f64,
}

/// Parameters of the basic construction for IDs in `[1, N]` and degree at
/// most `Δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "ParamsJson", try_from = "ParamsJson")]
pub struct AlgebraicParams {
    id_space: u64,
    max_degree: usize,
    levels: Vec<Level>,
    fields: Vec<PrimeField>,
}

#[derive(Serialize, Deserialize)]
struct ParamsJson {
    id_space: u64,
    max_degree: usize,
    depth: usize,
    q: Vec<u64>,
    d: Vec<usize>,
    f: Vec<f64>,
    palette_size: u64,
}

impl From<AlgebraicParams> for ParamsJson {
    fn from(p: AlgebraicParams) -> Self {
        ParamsJson {
            id_space: p.id_space,
            max_degree: p.max_degree,
            depth: p.depth(),
            q: p.levels.iter().map(|l| l.q).collect(),
            d: p.levels.iter().map(|l| l.d).collect(),
            f: p.levels.iter().map(|l| l.f).collect(),
            palette_size: p.palette_size(),
        }
    }
}

impl TryFrom<ParamsJson> for AlgebraicParams {
    type Error = Error;
    fn try_from(j: ParamsJson) -> Result<Self> {
        if j.q.len() != j.d.len() || j.q.len() != j.f.len() || j.q.len() != j.depth + 1 {
            return Err(invalid("q, d and f must each have depth + 1 entries"));
        }
        let levels =
            j.q.iter()
                .zip(&j.d)
                .zip(&j.f)
                .map(|((&q, &d), &f)| Level { q, d, f })
                .collect();
        let p = AlgebraicParams::new(j.id_space, j.max_degree, levels)?;
        if p.palette_size() != j.palette_size {
            return Err(invalid("palette size does not match q"));
        }
        Ok(p)
    }
}

impl AlgebraicParams {
    /// Validates the injectivity chain and the slack condition on each level.
    pub fn new(id_space: u64, max_degree: usize, levels: Vec<Level>) -> Result<Self> {
        if levels.is_empty() {
            return Err(invalid("at least one level is required"));
        }
        if id_space < 1 {
            return Err(invalid("id space must be non-empty"));
        }
        let mut fields = Vec::with_capacity(levels.len());
        let mut domain = id_space as u128;
        for (i, l) in levels.iter().enumerate() {
            fields.push(PrimeField::new(l.q)?);
            if l.d < 1 {
                return Err(invalid(format!("level {i}: degree bound must be >= 1")));
            }
            if l.f.is_nan() || l.f <= 1.0 {
                return Err(invalid(format!("level {i}: slack {} must exceed 1", l.f)));
            }
            if poly_count(l.q, l.d) < domain {
                return Err(invalid(format!(
                    "level {i}: {}^{} < {domain}, encoding is not injective",
                    l.q,
                    l.d + 1
                )));
            }
            if (l.q as f64) < l.f * max_degree as f64 * l.d as f64 - 1e-9 {
                return Err(invalid(format!(
                    "level {i}: q = {} < f·Δ·d = {}",
                    l.q,
                    l.f * max_degree as f64 * l.d as f64
                )));
            }
            domain = l.q as u128;
        }
        Ok(AlgebraicParams {
            id_space,
            max_degree,
            levels,
            fields,
        })
    }

    pub fn id_space(&self) -> u64 {
        self.id_space
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Recursion depth `ℓ`.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    fn last_q(&self) -> u64 {
        self.levels.last().unwrap().q
    }

    /// Number of α-tuples, `∏ q_i`.
    pub fn tuple_count(&self) -> u64 {
        self.levels.iter().map(|l| l.q).product()
    }

    /// `q_ℓ · ∏ q_i`.
    pub fn palette_size(&self) -> u64 {
        self.last_q() * self.tuple_count()
    }

    /// Colors every view of degree at most `degree` receives:
    /// `∏ (q_i - degree·d_i)`.
    pub fn guaranteed_for_degree(&self, degree: usize) -> u64 {
        self.levels
            .iter()
            .map(|l| l.q.saturating_sub((degree * l.d) as u64))
            .product()
    }

    /// `∏ (q_i - Δ·d_i)`.
    pub fn guaranteed_count(&self) -> u64 {
        self.guaranteed_for_degree(self.max_degree)
    }

    /// `λ = ∏ (1 - 1/f_i)`.
    pub fn lambda(&self) -> f64 {
        self.levels.iter().map(|l| 1.0 - 1.0 / l.f).product()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("params serialize")
    }
}

fn iterated_ln(x: f64, times: usize) -> f64 {
    (0..times).fold(x, |acc, _| acc.ln())
}

/// Largest `ℓ` with `ln^(ℓ) N > max(e, Δ)`, or `None` if even `ℓ = 0` fails.
pub fn max_depth(id_space: u64, max_degree: usize) -> Option<usize> {
    let floor = std::f64::consts::E.max(max_degree as f64);
    let mut depth = None;
    let mut v = id_space as f64;
    let mut l = 0;
    while v > floor {
        depth = Some(l);
        v = v.ln();
        l += 1;
    }
    debug_assert!(depth.is_none_or(|d| iterated_ln(id_space as f64, d) > floor));
    depth
}

/// Smallest `q` with `q^(d+1) >= domain`.
fn int_root_ceil(domain: u128, d: usize) -> u64 {
    let guess = (domain as f64)
        .powf(1.0 / (d as f64 + 1.0))
        .floor()
        .max(1.0) as u64;
    let mut q = guess.saturating_sub(2).max(1);
    while poly_count(q, d) < domain {
        q += 1;
    }
    q
}

fn best_level(domain: u128, max_degree: usize, f: f64) -> Result<Level> {
    let max_d = (domain.max(2) as f64).log2().ceil().max(1.0) as usize;
    let mut best: Option<Level> = None;
    for d in 1..=max_d {
        let slack = (f * max_degree as f64 * d as f64 - 1e-9).ceil().max(2.0) as u64;
        let q = next_prime(slack.max(int_root_ceil(domain, d)));
        if best.is_none_or(|b| q < b.q) {
            best = Some(Level { q, d, f });
        }
    }
    best.ok_or_else(|| Error::Infeasible(format!("no (d, q) for domain {domain}")))
}

/// Picks `(q_i, d_i)` level by level, minimizing `q_i` over `d_i` subject to
/// `q_i >= f_i·Δ·d_i` and `q_i^(d_i+1) >=` the previous domain.
///
/// `depth` is clamped to [`max_depth`]. `slack` gives `f_i` per level; the
/// last entry is reused for deeper levels.
pub fn choose_params(
    id_space: u64,
    max_degree: usize,
    depth: usize,
    slack: &[f64],
) -> Result<AlgebraicParams> {
    if id_space < 2 {
        return Err(invalid(format!("N must be at least 2, got {id_space}")));
    }
    if max_degree < 1 {
        return Err(invalid("Δ must be at least 1"));
    }
    if slack.is_empty() || slack.iter().any(|&f| f.is_nan() || f <= 1.0) {
        return Err(invalid("slack factors must all exceed 1"));
    }
    let depth = depth.min(max_depth(id_space, max_degree).unwrap_or(0));
    let mut levels = Vec::with_capacity(depth + 1);
    let mut domain = id_space as u128;
    for i in 0..=depth {
        let f = slack[i.min(slack.len() - 1)];
        let level = best_level(domain, max_degree, f)?;
        domain = level.q as u128;
        levels.push(level);
    }
    AlgebraicParams::new(id_space, max_degree, levels)
}

/// A color of the basic construction: the α-tuple and the final value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TupleColor {
    pub alphas: Vec<u64>,
    pub beta: u64,
}

impl TupleColor {
    /// 0-based index in `[0, palette_size)`, mixed radix over `(α_0, …, α_ℓ, β)`.
    pub fn index(&self, params: &AlgebraicParams) -> u64 {
        let a = self
            .alphas
            .iter()
            .zip(params.levels())
            .fold(0u64, |acc, (&a, l)| acc * l.q + a);
        a * params.last_q() + self.beta
    }

    pub fn from_index(index: u64, params: &AlgebraicParams) -> Self {
        let beta = index % params.last_q();
        let mut rest = index / params.last_q();
        let mut alphas = vec![0; params.levels().len()];
        for (slot, l) in alphas.iter_mut().zip(params.levels()).rev() {
            *slot = rest % l.q;
            rest /= l.q;
        }
        TupleColor { alphas, beta }
    }
}

fn check_view(view: &OneHopView, params: &AlgebraicParams) -> Result<()> {
    view.check_ids(params.id_space)?;
    if view.degree() > params.max_degree {
        return Err(invalid(format!(
            "view {view} has degree {} above Δ = {}",
            view.degree(),
            params.max_degree
        )));
    }
    Ok(())
}

struct Search<'a> {
    params: &'a AlgebraicParams,
    alphas: Vec<u64>,
    out: Vec<TupleColor>,
}

impl Search<'_> {
    fn encode(&self, level: usize, value: u64) -> Poly {
        let l = &self.params.levels[level];
        encode_poly(value as u128, self.params.fields[level], l.d)
            .expect("value lies in the injectivity domain")
    }

    /// `own` and `others` are the values from the previous level (IDs minus
    /// one at level 0). Neighbors whose value already equals ours stay equal
    /// at every later level, so any collision prunes the whole subtree.
    fn descend(&mut self, level: usize, own: u64, others: &[u64]) {
        let q = self.params.levels[level].q;
        let own_poly = self.encode(level, own);
        let other_polys: Vec<Poly> = others.iter().map(|&v| self.encode(level, v)).collect();
        let last = level == self.params.depth();
        let mut next = vec![0u64; others.len()];
        for alpha in 0..q {
            let b = own_poly.eval_unchecked(alpha);
            let mut clash = false;
            for (slot, p) in next.iter_mut().zip(&other_polys) {
                *slot = p.eval_unchecked(alpha);
                clash |= *slot == b;
            }
            if clash {
                continue;
            }
            self.alphas.push(alpha);
            if last {
                self.out.push(TupleColor {
                    alphas: self.alphas.clone(),
                    beta: b,
                });
            } else {
                let snapshot = next.clone();
                self.descend(level + 1, b, &snapshot);
            }
            self.alphas.pop();
        }
    }
}

/// The basic construction on one view, in increasing palette order.
pub fn basic_colors(view: &OneHopView, params: &AlgebraicParams) -> Result<Vec<TupleColor>> {
    check_view(view, params)?;
    let others: Vec<u64> = view.neighbors.iter().map(|&y| y - 1).collect();
    let mut search = Search {
        params,
        alphas: Vec::with_capacity(params.levels.len()),
        out: Vec::new(),
    };
    search.descend(0, view.id - 1, &others);
    Ok(search.out)
}

/// A color of the weighted construction: basic color `color` of instance
/// `instance`, copy `copy` of `ω_instance`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightedColor {
    pub color: TupleColor,
    pub instance: usize,
    pub copy: u64,
}

/// `⌈log₂ x⌉` for `x >= 1`.
fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Instances `1..=L` for degree classes `2^i`, with weights `ω_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedParams {
    pub max_degree: usize,
    pub epsilon: f64,
    /// `instances[i-1]` serves degrees up to `2^i`.
    pub instances: Vec<AlgebraicParams>,
    pub weights: Vec<u64>,
    pub palette_size: u64,
}

impl WeightedParams {
    /// Number of instances, `max(1, ⌈log₂ Δ⌉)`.
    pub fn instance_count(max_degree: usize) -> usize {
        ceil_log2(max_degree).max(1)
    }

    pub fn new(instances: Vec<AlgebraicParams>, max_degree: usize, eps: f64) -> Result<Self> {
        let eps_v = Epsilon::new(eps)?.value();
        if max_degree < 1 {
            return Err(invalid("Δ must be at least 1"));
        }
        let count = Self::instance_count(max_degree);
        if instances.len() != count {
            return Err(invalid(format!(
                "Δ = {max_degree} needs {count} instances, got {}",
                instances.len()
            )));
        }
        let id_space = instances[0].id_space();
        for (pos, inst) in instances.iter().enumerate() {
            let want = 1usize << (pos + 1);
            if inst.max_degree() != want || inst.id_space() != id_space {
                return Err(invalid(format!(
                    "instance {} must be built for Δ' = {want}, N = {id_space}",
                    pos + 1
                )));
            }
        }
        let top = instances[count - 1].palette_size() as f64;
        let weights: Vec<u64> = instances
            .iter()
            .enumerate()
            .map(|(pos, inst)| {
                let scale = (max_degree as f64 / (1u64 << pos) as f64).powf(eps_v);
                let w = scale * top / inst.palette_size() as f64;
                (w - 1e-9 * w).ceil().max(1.0) as u64
            })
            .collect();
        let palette_size = instances
            .iter()
            .zip(&weights)
            .map(|(inst, &w)| w * inst.palette_size())
            .sum();
        Ok(WeightedParams {
            max_degree,
            epsilon: eps_v,
            instances,
            weights,
            palette_size,
        })
    }

    /// Builds every instance with [`choose_params`].
    pub fn build(
        id_space: u64,
        max_degree: usize,
        depth: usize,
        slack: &[f64],
        eps: f64,
    ) -> Result<Self> {
        let instances = (1..=Self::instance_count(max_degree))
            .map(|i| choose_params(id_space, 1 << i, depth, slack))
            .collect::<Result<_>>()?;
        Self::new(instances, max_degree, eps)
    }

    pub fn id_space(&self) -> u64 {
        self.instances[0].id_space()
    }

    /// First instance a node of this degree uses: `max(1, ⌈log₂ δ⌉)`.
    pub fn first_instance(degree: usize) -> usize {
        ceil_log2(degree).max(1)
    }

    fn offset(&self, instance: usize) -> u64 {
        self.instances[..instance - 1]
            .iter()
            .zip(&self.weights)
            .map(|(inst, &w)| w * inst.palette_size())
            .sum()
    }

    /// 0-based palette index.
    pub fn index(&self, c: &WeightedColor) -> u64 {
        let inst = &self.instances[c.instance - 1];
        self.offset(c.instance) + (c.copy - 1) * inst.palette_size() + c.color.index(inst)
    }

    /// Colors promised to every view of this degree.
    pub fn guaranteed_for_degree(&self, degree: usize) -> u64 {
        (Self::first_instance(degree)..=self.instances.len())
            .map(|i| self.weights[i - 1] * self.instances[i - 1].guaranteed_count())
            .sum()
    }
}

/// The weighted construction on one view.
pub fn weighted_colors(view: &OneHopView, params: &WeightedParams) -> Result<Vec<WeightedColor>> {
    view.check_ids(params.id_space())?;
    if view.degree() > params.max_degree {
        return Err(invalid(format!(
            "view {view} has degree {} above Δ = {}",
            view.degree(),
            params.max_degree
        )));
    }
    let mut out = Vec::new();
    for i in WeightedParams::first_instance(view.degree())..=params.instances.len() {
        let basic = basic_colors(view, &params.instances[i - 1])?;
        for copy in 1..=params.weights[i - 1] {
            out.extend(basic.iter().map(|c| WeightedColor {
                color: c.clone(),
                instance: i,
                copy,
            }));
        }
    }
    Ok(out)
}

fn deterministic_config(id_space: u64, max_degree: usize) -> SharedConfig {
    SharedConfig {
        n: usize::try_from(id_space).unwrap_or(usize::MAX),
        id_space,
        max_degree,
    }
}

/// The basic construction as a one-shot node algorithm. Isolated nodes take
/// the whole palette.
#[derive(Debug, Clone)]
pub struct AlgebraicBasic {
    params: AlgebraicParams,
}

impl AlgebraicBasic {
    pub fn new(params: AlgebraicParams) -> Self {
        AlgebraicBasic { params }
    }

    pub fn params(&self) -> &AlgebraicParams {
        &self.params
    }
}

impl NodeAlgorithm for AlgebraicBasic {
    fn name(&self) -> &'static str {
        "algebraic-basic"
    }

    fn config(&self) -> SharedConfig {
        deterministic_config(self.params.id_space, self.params.max_degree)
    }

    fn palette_size(&self) -> u64 {
        self.params.palette_size()
    }

    fn compute(&self, own: &NodeEnvelope, received: &[&NodeEnvelope]) -> Result<ColorSet> {
        let view = view_from(own, received)?;
        if view.neighbors.is_empty() {
            view.check_ids(self.params.id_space)?;
            return Ok(ColorSet::full(self.palette_size()));
        }
        Ok(basic_colors(&view, &self.params)?
            .iter()
            .map(|c| c.index(&self.params) + 1)
            .collect())
    }

    fn guaranteed_colors(&self, degree: usize) -> u64 {
        if degree == 0 {
            self.palette_size()
        } else {
            self.params.guaranteed_count()
        }
    }

    fn details(&self) -> serde_json::Value {
        self.params.to_json()
    }
}

/// The weighted construction as a one-shot node algorithm. Isolated nodes
/// take the whole palette.
#[derive(Debug, Clone)]
pub struct AlgebraicWeighted {
    params: WeightedParams,
}

impl AlgebraicWeighted {
    pub fn new(params: WeightedParams) -> Self {
        AlgebraicWeighted { params }
    }

    pub fn params(&self) -> &WeightedParams {
        &self.params
    }
}

impl NodeAlgorithm for AlgebraicWeighted {
    fn name(&self) -> &'static str {
        "algebraic-weighted"
    }

    fn config(&self) -> SharedConfig {
        deterministic_config(self.params.id_space(), self.params.max_degree)
    }

    fn palette_size(&self) -> u64 {
        self.params.palette_size
    }

    fn epsilon(&self) -> Option<Epsilon> {
        Epsilon::new(self.params.epsilon).ok()
    }

    fn compute(&self, own: &NodeEnvelope, received: &[&NodeEnvelope]) -> Result<ColorSet> {
        let view = view_from(own, received)?;
        if view.neighbors.is_empty() {
            view.check_ids(self.params.id_space())?;
            return Ok(ColorSet::full(self.palette_size()));
        }
        Ok(weighted_colors(&view, &self.params)?
            .iter()
            .map(|c| self.params.index(c) + 1)
            .collect())
    }

    fn guaranteed_colors(&self, degree: usize) -> u64 {
        if degree == 0 {
            self.palette_size()
        } else {
            self.params.guaranteed_for_degree(degree)
        }
    }

    fn details(&self) -> serde_json::Value {
        serde_json::to_value(&self.params).expect("params serialize")
    }
}
