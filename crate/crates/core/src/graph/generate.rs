use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, NodeId};
use crate::error::{invalid, Result};

/// Draws `n` distinct IDs from `[1, id_space]` with a partial Fisher–Yates
/// shuffle. Only the swapped positions are stored, so memory is `O(n)`.
pub fn random_id_injection(n: usize, id_space: u64, rng: &mut impl Rng) -> Result<Vec<NodeId>> {
    if (n as u64) > id_space {
        return Err(invalid(format!(
            "{n} nodes do not fit in an id space of {id_space}"
        )));
    }
    let mut swapped: HashMap<u64, u64> = HashMap::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    for i in 0..n as u64 {
        let j = rng.gen_range(i..id_space);
        let at_j = *swapped.get(&j).unwrap_or(&j);
        let at_i = *swapped.get(&i).unwrap_or(&i);
        swapped.insert(j, at_i);
        out.push(at_j + 1);
    }
    Ok(out)
}

/// Erdős–Rényi `G(n, p)` with IDs drawn injectively from `[1, id_space]`.
pub fn gen_gnp(n: usize, p: f64, id_space: u64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("edge probability {p} not in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids = random_id_injection(n, id_space, &mut rng)?;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((ids[i], ids[j]));
            }
        }
    }
    Graph::from_parts(id_space, ids.iter().copied(), edges)
}

/// Disjoint union of `count` stars, each a center with `degree` leaves.
pub fn gen_stars(count: usize, degree: usize, id_space: u64, seed: u64) -> Result<Graph> {
    let total = count
        .checked_mul(degree + 1)
        .ok_or_else(|| invalid("star count overflows"))?;
    if total as u64 > id_space {
        return Err(invalid(format!(
            "{count} stars of degree {degree} need {total} ids but N = {id_space}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids = random_id_injection(total, id_space, &mut rng)?;
    let edges = ids.chunks(degree + 1).flat_map(|star| {
        let center = star[0];
        star[1..].iter().map(move |&leaf| (center, leaf))
    });
    Graph::from_parts(id_space, ids.iter().copied(), edges)
}

/// Unit-disk graph: `n` points uniform in the unit square, adjacent iff their
/// Euclidean distance is at most `radius`.
pub fn gen_udg(n: usize, radius: f64, id_space: u64, seed: u64) -> Result<Graph> {
    if radius.is_nan() || radius < 0.0 {
        return Err(invalid(format!("radius {radius} must be non-negative")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids = random_id_injection(n, id_space, &mut rng)?;
    let points: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    let r2 = radius * radius;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let dx = points[i].0 - points[j].0;
            let dy = points[i].1 - points[j].1;
            if dx * dx + dy * dy <= r2 {
                edges.push((ids[i], ids[j]));
            }
        }
    }
    Graph::from_parts(id_space, ids.iter().copied(), edges)
}
