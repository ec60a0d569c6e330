//! Order-based multicoloring.
//!
//! Both algorithms give node `v` color `i` when `v` comes first among its
//! closed neighborhood in the `i`-th order. In the randomized algorithm the
//! orders are induced by per-node random draws; in the shared-order algorithm
//! they are `k` fixed total orders on the ID space known to every node.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{ColorSet, Epsilon, Multicoloring};
use crate::combinatorics::{for_each_subset, view_count};
use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, NodeId, OneHopView};
use crate::sim::{run_one_shot, view_from, NodeAlgorithm, NodeEnvelope, SharedConfig};

fn ceil_palette(x: f64) -> u64 {
    // Absorb rounding noise so that exact integers are not bumped up.
    (x - 1e-9 * x.abs().max(1.0)).ceil().max(0.0) as u64
}

pub(crate) fn randomized_palette(ln_n: f64, max_degree: usize, eps: Epsilon) -> u64 {
    let e = eps.value();
    ceil_palette(6.0 * (max_degree as f64 + 1.0) * ln_n / (e * e))
}

pub(crate) fn shared_palette(ln_id_space: f64, max_degree: usize, eps: Epsilon) -> u64 {
    let e = eps.value();
    let d1 = max_degree as f64 + 1.0;
    ceil_palette(2.0 * d1 * d1 * ln_id_space / (e * e))
}

/// Palette size `⌈6(Δ+1)·ln(n)/ε²⌉` of the randomized algorithm.
pub fn rand_k(n: usize, max_degree: usize, eps: f64) -> Result<u64> {
    let eps = Epsilon::positive(eps)?;
    if n < 2 {
        return Err(invalid(format!("randomized palette needs n >= 2, got {n}")));
    }
    Ok(randomized_palette((n as f64).ln(), max_degree, eps))
}

/// Number of global orders `c·⌈2(Δ+1)²·ln(N)/ε²⌉`; `c` is the optional
/// inflation factor.
pub fn shared_k(id_space: u64, max_degree: usize, eps: f64, factor: u64) -> Result<u64> {
    let eps = Epsilon::positive(eps)?;
    if id_space < 2 {
        return Err(invalid(format!(
            "shared palette needs N >= 2, got {id_space}"
        )));
    }
    if factor == 0 {
        return Err(invalid("inflation factor must be at least 1"));
    }
    Ok(factor * shared_palette((id_space as f64).ln(), max_degree, eps))
}

/// Per-color upper tail of the Chernoff bound, `exp(-ε²·E[X]/2)` with
/// `E[X] = k/(δ+1)`.
pub fn chernoff_bound(k: u64, degree: usize, eps: f64) -> f64 {
    let mean = k as f64 / (degree as f64 + 1.0);
    (-eps * eps * mean / 2.0).exp()
}

/// How nodes with equal draws for a color are resolved.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// Strict inequality: a tie loses the color on both sides.
    #[default]
    Strict,
    /// Ties go to the smaller ID.
    SmallerId,
}

/// The `k` random numbers a node draws, each uniform in `[1, k·n⁴]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandDraws {
    pub id: NodeId,
    pub draws: Vec<u128>,
}

impl RandDraws {
    pub fn to_bytes(&self) -> Vec<u8> {
        self.draws.iter().flat_map(|d| d.to_le_bytes()).collect()
    }

    pub fn from_bytes(id: NodeId, bytes: &[u8]) -> Result<Self> {
        if !bytes.len().is_multiple_of(16) {
            return Err(invalid(format!(
                "random payload of node {id} is {} bytes, not a multiple of 16",
                bytes.len()
            )));
        }
        let draws = bytes
            .chunks_exact(16)
            .map(|c| u128::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(RandDraws { id, draws })
    }
}

/// Upper end of the draw range, `k·n⁴`, saturating.
pub fn draw_range(k: u64, n: usize) -> u128 {
    let n = n as u128;
    (k as u128)
        .saturating_mul(n)
        .saturating_mul(n)
        .saturating_mul(n)
        .saturating_mul(n)
        .max(1)
}

/// Node `id`'s draws; the stream is keyed by `(seed, id)`.
pub fn rand_draws(id: NodeId, k: u64, n: usize, seed: u64) -> RandDraws {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    let hi = draw_range(k, n);
    RandDraws {
        id,
        draws: (0..k).map(|_| rng.gen_range(1..=hi)).collect(),
    }
}

/// Colors `i` (1-based) for which `own` beats every neighbor's `i`-th draw.
pub fn rand_select(own: &RandDraws, neighbors: &[RandDraws]) -> Result<ColorSet> {
    let refs: Vec<&RandDraws> = neighbors.iter().collect();
    rand_select_with(own, &refs, TieBreak::Strict)
}

pub fn rand_select_with(
    own: &RandDraws,
    neighbors: &[&RandDraws],
    tie: TieBreak,
) -> Result<ColorSet> {
    let k = own.draws.len();
    if let Some(bad) = neighbors.iter().find(|u| u.draws.len() != k) {
        return Err(invalid(format!(
            "node {} drew {} values but neighbor {} drew {}",
            own.id,
            k,
            bad.id,
            bad.draws.len()
        )));
    }
    let wins = |i: usize| {
        let mine = own.draws[i];
        neighbors.iter().all(|u| {
            let theirs = u.draws[i];
            match tie {
                TieBreak::Strict => mine < theirs,
                TieBreak::SmallerId => (mine, own.id) < (theirs, u.id),
            }
        })
    };
    Ok((0..k).filter(|&i| wins(i)).map(|i| i as u64 + 1).collect())
}

/// The randomized one-shot algorithm with palette `rand_k(n, Δ, ε)`.
#[derive(Debug, Clone)]
pub struct Randomized {
    config: SharedConfig,
    eps: Epsilon,
    k: u64,
    tie: TieBreak,
}

impl Randomized {
    pub fn new(config: SharedConfig, eps: f64, tie: TieBreak) -> Result<Self> {
        let k = rand_k(config.n.max(2), config.max_degree, eps)?;
        Ok(Randomized {
            config,
            eps: Epsilon::positive(eps)?,
            k,
            tie,
        })
    }

    /// Overrides the palette size, keeping everything else.
    pub fn with_palette(mut self, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(invalid("palette must be non-empty"));
        }
        self.k = k;
        Ok(self)
    }

    pub fn k(&self) -> u64 {
        self.k
    }
}

impl NodeAlgorithm for Randomized {
    fn name(&self) -> &'static str {
        "randomized"
    }

    fn config(&self) -> SharedConfig {
        self.config
    }

    fn palette_size(&self) -> u64 {
        self.k
    }

    fn epsilon(&self) -> Option<Epsilon> {
        Some(self.eps)
    }

    fn is_deterministic(&self) -> bool {
        false
    }

    fn generate_bits(&self, id: NodeId, seed: u64) -> Vec<u8> {
        rand_draws(id, self.k, self.config.n.max(2), seed).to_bytes()
    }

    fn compute(&self, own: &NodeEnvelope, received: &[&NodeEnvelope]) -> Result<ColorSet> {
        let mine = RandDraws::from_bytes(own.id, &own.bits)?;
        if mine.draws.len() as u64 != self.k {
            return Err(invalid(format!(
                "node {} carries {} draws, expected {}",
                own.id,
                mine.draws.len(),
                self.k
            )));
        }
        let theirs: Vec<RandDraws> = received
            .iter()
            .map(|e| RandDraws::from_bytes(e.id, &e.bits))
            .collect::<Result<_>>()?;
        let refs: Vec<&RandDraws> = theirs.iter().collect();
        rand_select_with(&mine, &refs, self.tie)
    }

    fn guaranteed_colors(&self, degree: usize) -> u64 {
        self.eps.min_colors(self.k, degree)
    }

    fn details(&self) -> serde_json::Value {
        serde_json::json!({ "k": self.k, "tie_break": self.tie })
    }
}

/// Runs the randomized algorithm on `g` with `n` and `Δ` taken from `g`.
pub fn run_randomized(g: &Graph, eps: f64, seed: u64) -> Result<Multicoloring> {
    let algo = Randomized::new(SharedConfig::for_graph(g), eps, TieBreak::Strict)?;
    Ok(run_one_shot(g, &algo, seed)?.0)
}

/// `k` total orders on `[1, N]`, stored as rank functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationFamily {
    k: u64,
    id_space: u64,
    seed: u64,
    ranks: Vec<u32>,
}

/// Cap on `k·N` rank entries held in memory.
pub const FAMILY_BUDGET: u128 = 1 << 31;

impl PermutationFamily {
    /// Draws `k` independent uniform orders; order `i` comes from the stream
    /// keyed by `(seed, i)`.
    pub fn generate(k: u64, id_space: u64, seed: u64) -> Result<Self> {
        if k == 0 || id_space == 0 {
            return Err(invalid("a permutation family needs k >= 1 and N >= 1"));
        }
        let cells = k as u128 * id_space as u128;
        if cells > FAMILY_BUDGET || id_space > u32::MAX as u64 {
            return Err(Error::TooLarge {
                what: "permutation family entries",
                count: cells,
                limit: FAMILY_BUDGET,
            });
        }
        let n = id_space as usize;
        let mut ranks = vec![0u32; k as usize * n];
        ranks.par_chunks_mut(n).enumerate().for_each(|(i, order)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            for (r, slot) in order.iter_mut().enumerate() {
                *slot = r as u32;
            }
            // Fisher–Yates.
            for r in (1..n).rev() {
                let j = rng.gen_range(0..=r);
                order.swap(r, j);
            }
        });
        Ok(PermutationFamily {
            k,
            id_space,
            seed,
            ranks,
        })
    }

    /// Builds a family from explicit rank tables, one per order.
    pub fn from_ranks(id_space: u64, orders: Vec<Vec<u32>>) -> Result<Self> {
        let n = id_space as usize;
        let mut ranks = Vec::with_capacity(orders.len() * n);
        for order in &orders {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted.len() != n || sorted.iter().enumerate().any(|(i, &r)| r as usize != i) {
                return Err(invalid("rank table is not a bijection onto [0, N)"));
            }
            ranks.extend_from_slice(order);
        }
        if orders.is_empty() {
            return Err(invalid("a permutation family needs k >= 1"));
        }
        Ok(PermutationFamily {
            k: orders.len() as u64,
            id_space,
            seed: 0,
            ranks,
        })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn id_space(&self) -> u64 {
        self.id_space
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Rank of `id` in order `i` (0-based order index, 1-based ID).
    pub fn rank(&self, i: usize, id: NodeId) -> u32 {
        self.ranks[i * self.id_space as usize + (id - 1) as usize]
    }

    fn order(&self, i: usize) -> &[u32] {
        let n = self.id_space as usize;
        &self.ranks[i * n..(i + 1) * n]
    }
}

/// Colors `i` for which the view's own ID precedes every neighbor in order `i`.
pub fn shared_select(view: &OneHopView, fam: &PermutationFamily) -> Result<ColorSet> {
    view.check_ids(fam.id_space)?;
    let x = (view.id - 1) as usize;
    let ys: Vec<usize> = view.neighbors.iter().map(|&y| (y - 1) as usize).collect();
    Ok((0..fam.k as usize)
        .filter(|&i| {
            let order = fam.order(i);
            let rx = order[x];
            ys.iter().all(|&y| rx < order[y])
        })
        .map(|i| i as u64 + 1)
        .collect())
}

/// The shared-order algorithm over a fixed family.
#[derive(Debug, Clone)]
pub struct SharedOrder {
    config: SharedConfig,
    eps: Epsilon,
    family: PermutationFamily,
}

impl SharedOrder {
    pub fn new(config: SharedConfig, eps: f64, family: PermutationFamily) -> Result<Self> {
        if family.id_space != config.id_space {
            return Err(invalid(format!(
                "family is over [1, {}] but N = {}",
                family.id_space, config.id_space
            )));
        }
        Ok(SharedOrder {
            config,
            eps: Epsilon::positive(eps)?,
            family,
        })
    }

    /// Generates a fresh family of `shared_k(N, Δ, ε, factor)` orders.
    pub fn generate(config: SharedConfig, eps: f64, factor: u64, seed: u64) -> Result<Self> {
        let k = shared_k(config.id_space.max(2), config.max_degree, eps, factor)?;
        let family = PermutationFamily::generate(k, config.id_space, seed)?;
        Self::new(config, eps, family)
    }

    pub fn family(&self) -> &PermutationFamily {
        &self.family
    }
}

impl NodeAlgorithm for SharedOrder {
    fn name(&self) -> &'static str {
        "shared-order"
    }

    fn config(&self) -> SharedConfig {
        self.config
    }

    fn palette_size(&self) -> u64 {
        self.family.k
    }

    fn epsilon(&self) -> Option<Epsilon> {
        Some(self.eps)
    }

    fn compute(&self, own: &NodeEnvelope, received: &[&NodeEnvelope]) -> Result<ColorSet> {
        shared_select(&view_from(own, received)?, &self.family)
    }

    fn guaranteed_colors(&self, degree: usize) -> u64 {
        self.eps.min_colors(self.family.k, degree)
    }

    fn details(&self) -> serde_json::Value {
        serde_json::json!({ "k": self.family.k, "family_seed": self.family.seed })
    }
}

/// Cap on the number of views [`certify_family`] will enumerate.
pub const CERTIFY_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstView {
    pub view: OneHopView,
    pub colors: u64,
    pub required: u64,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub passed: bool,
    pub k: u64,
    pub id_space: u64,
    pub max_degree: usize,
    pub epsilon: f64,
    pub views_checked: u128,
    pub failing_views: u128,
    /// View with the smallest `colors·(δ+1)`.
    pub worst: Option<WorstView>,
}

/// Checks every view `(x, Γ)` with `1 <= |Γ| <= Δ` over the family's ID space
/// for at least `⌈(1-ε)k/(δ+1)⌉` colors.
pub fn certify_family(
    fam: &PermutationFamily,
    max_degree: usize,
    eps: f64,
) -> Result<CertificationReport> {
    let eps_exact = Epsilon::positive(eps)?;
    let n = fam.id_space;
    let total = view_count(n, 1, max_degree);
    if total > CERTIFY_BUDGET {
        return Err(Error::TooLarge {
            what: "one-hop views",
            count: total,
            limit: CERTIFY_BUDGET,
        });
    }
    let k = fam.k as usize;
    let words = k.div_ceil(64);

    // Per x: beats[y] has bit i set iff x precedes y in order i.
    let per_x = (1..=n).into_par_iter().map(|x| {
        let mut beats = vec![0u64; n as usize * words];
        for i in 0..k {
            let order = fam.order(i);
            let rx = order[(x - 1) as usize];
            for (y, &ry) in order.iter().enumerate() {
                if rx < ry {
                    beats[y * words + i / 64] |= 1 << (i % 64);
                }
            }
        }
        let pool: Vec<u64> = (1..=n).filter(|&y| y != x).collect();
        let mut checked: u128 = 0;
        let mut failing: u128 = 0;
        let mut worst: Option<(u64, Vec<u64>, u64)> = None;
        let mut acc = vec![0u64; words];
        for degree in 1..=max_degree.min(pool.len()) {
            let required = eps_exact.min_colors(fam.k, degree);
            for_each_subset(&pool, degree, |gamma| {
                acc.iter_mut().for_each(|w| *w = u64::MAX);
                for &y in gamma {
                    let row = &beats[(y - 1) as usize * words..][..words];
                    acc.iter_mut().zip(row).for_each(|(a, b)| *a &= b);
                }
                let colors: u64 = acc.iter().map(|w| w.count_ones() as u64).sum();
                checked += 1;
                if colors < required {
                    failing += 1;
                }
                let score = colors * (degree as u64 + 1);
                if worst.as_ref().is_none_or(|(s, _, _)| score < *s) {
                    worst = Some((score, gamma.to_vec(), colors));
                }
            });
        }
        (x, checked, failing, worst)
    });
    let results: Vec<_> = per_x.collect();

    let mut checked = 0;
    let mut failing = 0;
    let mut worst: Option<(u64, OneHopView, u64)> = None;
    for (x, c, f, w) in results {
        checked += c;
        failing += f;
        if let Some((score, gamma, colors)) = w {
            if worst.as_ref().is_none_or(|(s, _, _)| score < *s) {
                worst = Some((score, OneHopView::new(x, gamma)?, colors));
            }
        }
    }
    let worst = worst.map(|(_, view, colors)| {
        let required = eps_exact.min_colors(fam.k, view.degree());
        WorstView {
            fraction: colors as f64 / fam.k as f64,
            view,
            colors,
            required,
        }
    });
    Ok(CertificationReport {
        passed: failing == 0,
        k: fam.k,
        id_space: n,
        max_degree,
        epsilon: eps_exact.value(),
        views_checked: checked,
        failing_views: failing,
        worst,
    })
}

#[derive(Debug, Clone)]
pub struct CertifiedFamily {
    pub family: PermutationFamily,
    pub report: CertificationReport,
    /// Seeds tried, in order; the last one produced `family`.
    pub seeds_tried: Vec<u64>,
}

/// Draws families with seeds `seed, seed+1, …` until one certifies or
/// `retries` resamples have been spent. The last family is returned either
/// way; check `report.passed`.
pub fn certify_with_retries(
    k: u64,
    id_space: u64,
    max_degree: usize,
    eps: f64,
    seed: u64,
    retries: u32,
) -> Result<CertifiedFamily> {
    let mut seeds_tried = Vec::new();
    let mut attempt = 0u32;
    loop {
        let s = seed.wrapping_add(attempt as u64);
        seeds_tried.push(s);
        let family = PermutationFamily::generate(k, id_space, s)?;
        let report = certify_family(&family, max_degree, eps)?;
        if report.passed || attempt >= retries {
            return Ok(CertifiedFamily {
                family,
                report,
                seeds_tried,
            });
        }
        attempt += 1;
    }
}
