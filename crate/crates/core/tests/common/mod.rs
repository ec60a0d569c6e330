#![allow(dead_code)]

use oneshot_core::algebraic::{choose_params, AlgebraicBasic, AlgebraicWeighted, WeightedParams};
use oneshot_core::graph::{gen_gnp, gen_stars, gen_udg};
use oneshot_core::perm::{Randomized, SharedOrder, TieBreak};
use oneshot_core::sim::{NodeAlgorithm, SharedConfig};
use oneshot_core::Graph;

pub const ALGORITHMS: [&str; 4] = [
    "randomized",
    "shared-order",
    "algebraic-basic",
    "algebraic-weighted",
];

/// Builds one of the four algorithms for graphs within `config`.
pub fn build(name: &str, config: SharedConfig, eps: f64, seed: u64) -> Box<dyn NodeAlgorithm> {
    match name {
        "randomized" => Box::new(Randomized::new(config, eps, TieBreak::Strict).unwrap()),
        "shared-order" => Box::new(SharedOrder::generate(config, eps, 1, seed).unwrap()),
        "algebraic-basic" => Box::new(AlgebraicBasic::new(
            choose_params(config.id_space, config.max_degree.max(1), 0, &[2.0]).unwrap(),
        )),
        "algebraic-weighted" => Box::new(AlgebraicWeighted::new(
            WeightedParams::build(config.id_space, config.max_degree.max(1), 0, &[2.0], eps)
                .unwrap(),
        )),
        other => panic!("unknown algorithm {other}"),
    }
}

/// The `i`-th graph of a fixed mix of G(n,p), unit-disk and star graphs,
/// all with n <= 256, IDs in [1, 512] and degree at most 8.
pub fn mixed_graph(i: u64) -> Graph {
    let seed = 1000 + i;
    let g = match i % 3 {
        0 => gen_gnp(
            40 + (i as usize * 7) % 217,
            0.02 + (i % 5) as f64 * 0.01,
            512,
            seed,
        )
        .unwrap(),
        1 => gen_udg(
            30 + (i as usize * 11) % 227,
            0.06 + (i % 4) as f64 * 0.02,
            512,
            seed,
        )
        .unwrap(),
        _ => {
            let degree = 1 + (i as usize % 8);
            gen_stars(
                (256 / (degree + 1)).min(12 + i as usize % 10),
                degree,
                512,
                seed,
            )
            .unwrap()
        }
    };
    g.cap_degree(8)
}

pub const MIX_CONFIG: SharedConfig = SharedConfig {
    n: 256,
    id_space: 512,
    max_degree: 8,
};
