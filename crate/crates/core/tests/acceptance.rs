//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use oneshot_core::algebraic::{
    basic_colors, choose_params, weighted_colors, AlgebraicBasic, AlgebraicParams, WeightedParams,
};
use oneshot_core::graph::gen_gnp;
use oneshot_core::nbr::{build_nbr_graph, check_algo_on_nbr_graph, chromatic_number};
use oneshot_core::perm::{
    certify_with_retries, rand_k, shared_select, PermutationFamily, Randomized, SharedOrder,
    TieBreak,
};
use oneshot_core::sim::{replay_view, run_one_shot, NodeEnvelope, SharedConfig};
use oneshot_core::verify::verify;
use oneshot_core::{Graph, NodeId, OneHopView};
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{build, mixed_graph, ALGORITHMS, MIX_CONFIG};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed.as_secs_f64() < limit_secs as f64
}

fn disjointness_on_mixed_graphs() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for name in ALGORITHMS {
        let algo = build(name, MIX_CONFIG, 0.5, 7);
        for i in 0..100 {
            let g = mixed_graph(i);
            let (m, _) = run_one_shot(&g, algo.as_ref(), i).unwrap();
            let r = verify(&g, &m, 0.5).unwrap();
            if !r.valid || r.violation_count != 0 {
                failures.push(format!("{name}#{i}"));
            }
        }
    }
    let t = start.elapsed();
    outcome(
        failures.is_empty() && within(t, 60),
        format!("400 runs, invalid: {failures:?}, {:.1}s", t.as_secs_f64()),
    )
}

fn randomized_guarantee() -> Outcome {
    let start = Instant::now();
    let g = gen_gnp(200, 0.03, 200, 11).unwrap().cap_degree(8);
    let k = rand_k(200, 8, 0.5).unwrap();
    let algo = Randomized::new(
        SharedConfig {
            n: 200,
            id_space: 200,
            max_degree: 8,
        },
        0.5,
        TieBreak::Strict,
    )
    .unwrap();
    let mut good = 0;
    let mut worst = f64::INFINITY;
    for seed in 0..20 {
        let (m, _) = run_one_shot(&g, &algo, seed).unwrap();
        let r = verify(&g, &m, 0.5).unwrap();
        worst = worst.min(r.worst_ratio);
        if r.valid && r.meets_target {
            good += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        k == 1145 && algo.k() == k && good >= 19 && within(t, 30),
        format!(
            "k={k}, max degree {}, {good}/20 runs meet target, worst ratio {worst:.3}, {:.1}s",
            g.max_degree(),
            t.as_secs_f64()
        ),
    )
}

fn shared_order_certificate() -> Outcome {
    let start = Instant::now();
    let cf = certify_with_retries(436, 30, 3, 0.5, 1, 2).unwrap();
    if !cf.report.passed {
        return outcome(
            false,
            format!("no certified family in seeds {:?}", cf.seeds_tried),
        );
    }
    let cfg = SharedConfig {
        n: 30,
        id_space: 30,
        max_degree: 3,
    };
    let algo = SharedOrder::new(cfg, 0.5, cf.family).unwrap();
    let ng = build_nbr_graph(30, 3).unwrap();
    let cert = check_algo_on_nbr_graph(&algo, &ng).unwrap();
    let t = start.elapsed();
    outcome(
        cf.report.views_checked == 122_670 && cert.passed() && within(t, 300),
        format!(
            "seeds {:?}, {} views, worst {:?} colors, {} edges, {} intersecting, {:.1}s",
            cf.seeds_tried,
            cf.report.views_checked,
            cf.report.worst.as_ref().map(|w| (w.colors, w.required)),
            cert.edges_checked,
            cert.intersecting_edges,
            t.as_secs_f64()
        ),
    )
}

/// Colors of `view` computed straight from the definition: the points α where
/// the owner's polynomial differs from every neighbor's.
fn single_level_oracle(view: &OneHopView, q: u64, d: usize) -> BTreeSet<(u64, u64)> {
    let poly = |x: NodeId| -> Vec<u64> {
        let mut v = x - 1;
        (0..=d)
            .map(|_| {
                let c = v % q;
                v /= q;
                c
            })
            .collect()
    };
    let eval = |c: &[u64], a: u64| c.iter().rev().fold(0u64, |acc, &ci| (acc * a + ci) % q);
    let own = poly(view.id);
    let others: Vec<Vec<u64>> = view.neighbors.iter().map(|&y| poly(y)).collect();
    (0..q)
        .filter(|&a| others.iter().all(|o| eval(o, a) != eval(&own, a)))
        .map(|a| (a, eval(&own, a)))
        .collect()
}

fn random_view(rng: &mut ChaCha8Rng, id_space: u64, degree: usize) -> OneHopView {
    let ids: Vec<u64> = sample(rng, id_space as usize, degree + 1)
        .iter()
        .map(|i| i as u64 + 1)
        .collect();
    OneHopView::new(ids[0], ids[1..].iter().copied()).unwrap()
}

fn algebraic_count_bound() -> Outcome {
    let start = Instant::now();
    let params = choose_params(1_000_000, 8, 0, &[2.0]).unwrap();
    let level = params.levels()[0];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut min = u64::MAX;
    let mut mismatches = 0;
    for _ in 0..10_000 {
        let degree = rng.gen_range(1..=8);
        let view = random_view(&mut rng, 1_000_000, degree);
        let got: BTreeSet<(u64, u64)> = basic_colors(&view, &params)
            .unwrap()
            .into_iter()
            .map(|c| (c.alphas[0], c.beta))
            .collect();
        if got != single_level_oracle(&view, level.q, level.d) {
            mismatches += 1;
        }
        min = min.min(got.len() as u64);
    }
    let t = start.elapsed();
    outcome(
        level.d == 3 && level.q == 53 && params.palette_size() == 2809 && min >= 29 && mismatches == 0 && within(t, 30),
        format!("d={} q={} palette {}, min colors {min} (need 29), oracle mismatches {mismatches}, {:.1}s", level.d, level.q, params.palette_size(), t.as_secs_f64()),
    )
}

fn algebraic_certificate() -> Outcome {
    let start = Instant::now();
    let params: AlgebraicParams = choose_params(12, 3, 0, &[2.0]).unwrap();
    let ng = build_nbr_graph(12, 3).unwrap();
    let cert = check_algo_on_nbr_graph(&AlgebraicBasic::new(params), &ng).unwrap();
    let t = start.elapsed();
    outcome(
        cert.passed() && cert.edges_checked == ng.edge_count() && within(t, 120),
        format!(
            "{} views, {} edges, {} intersecting, {:.1}s",
            cert.views,
            cert.edges_checked,
            cert.intersecting_edges,
            t.as_secs_f64()
        ),
    )
}

fn weighted_adaptivity() -> Outcome {
    let params = WeightedParams::build(10_000, 8, 0, &[2.0], 0.5).unwrap();
    let k = params.palette_size as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut min_fraction = |degree: usize| {
        (0..2000)
            .map(|_| {
                weighted_colors(&random_view(&mut rng, 10_000, degree), &params)
                    .unwrap()
                    .len() as f64
                    / k
            })
            .fold(f64::INFINITY, f64::min)
    };
    let low = min_fraction(1);
    let high = min_fraction(8);
    let need = 8f64.powf(0.5) / 4.0;
    outcome(
        low / high >= need,
        format!(
            "palette {}, fraction δ=1 {low:.4}, δ=8 {high:.4}, ratio {:.3} (need {need:.3})",
            params.palette_size,
            low / high
        ),
    )
}

fn binomial(n: u64, r: u64) -> u128 {
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn neighborhood_ground_truths() -> Outcome {
    let small = build_nbr_graph(3, 1).unwrap();
    let small_chi = chromatic_number(&small).unwrap();
    let mut ok = small.vertex_count() == 6 && small.edge_count() == 3 && small_chi == 2;
    let mut lower_bound_misses = Vec::new();
    let grid: [(usize, &[u64]); 4] = [
        (1, &[2, 3, 4, 5, 6]),
        (2, &[3, 4, 5, 6, 7]),
        (3, &[4, 5, 6]),
        (4, &[5, 6]),
    ];
    for (d, ns) in grid {
        for &n in ns {
            let ng = build_nbr_graph(n, d).unwrap();
            let expect: u128 = (1..=d as u64).map(|s| n as u128 * binomial(n - 1, s)).sum();
            ok &= ng.vertex_count() as u128 == expect;
            if chromatic_number(&ng).unwrap() < d + 1 {
                lower_bound_misses.push((n, d));
            }
        }
    }
    let big = build_nbr_graph(30, 3).unwrap();
    ok &= big.vertex_count() == 122_670 && lower_bound_misses.is_empty();
    outcome(
        ok,
        format!("N1(3,1): {} vertices, {} edges, chi {small_chi}; N1(30,3): {} vertices; chi < Δ+1 at {lower_bound_misses:?}", small.vertex_count(), small.edge_count(), big.vertex_count()),
    )
}

/// A host graph on IDs in `[1, id_space]` in which `view.id` has exactly
/// `view.neighbors` and every degree stays at most `cap`.
fn host_for(view: &OneHopView, rng: &mut ChaCha8Rng, id_space: u64, cap: usize) -> Graph {
    let extra = rng.gen_range(0..60);
    let mut nodes: BTreeSet<NodeId> = view.neighbors.iter().copied().chain([view.id]).collect();
    while nodes.len() < view.degree() + 1 + extra {
        nodes.insert(rng.gen_range(1..=id_space));
    }
    let others: Vec<NodeId> = nodes.iter().copied().filter(|&v| v != view.id).collect();
    let mut degree: std::collections::HashMap<NodeId, usize> =
        nodes.iter().map(|&v| (v, 0)).collect();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    for &y in &view.neighbors {
        edges.push((view.id, y));
        *degree.get_mut(&y).unwrap() += 1;
    }
    let mut seen: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    for _ in 0..others.len() * 2 {
        let (a, b) = (*others.choose(rng).unwrap(), *others.choose(rng).unwrap());
        let key = (a.min(b), a.max(b));
        if a != b && degree[&a] < cap && degree[&b] < cap && seen.insert(key) {
            edges.push(key);
            *degree.get_mut(&a).unwrap() += 1;
            *degree.get_mut(&b).unwrap() += 1;
        }
    }
    Graph::from_parts(id_space, nodes, edges).unwrap()
}

fn locality() -> Outcome {
    let algos: Vec<_> = ALGORITHMS
        .iter()
        .map(|n| build(n, MIX_CONFIG, 0.5, 3))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut mismatches = 0;
    for pair in 0..1000u64 {
        let degree = rng.gen_range(0..=8);
        let view = random_view(&mut rng, 512, degree);
        let host = host_for(&view, &mut rng, 512, 8);
        let algo = algos[pair as usize % algos.len()].as_ref();
        let seed = rng.gen();
        let (m, _) = run_one_shot(&host, algo, seed).unwrap();
        let received: Vec<NodeEnvelope> = view
            .neighbors
            .iter()
            .map(|&y| NodeEnvelope {
                id: y,
                bits: algo.generate_bits(y, seed),
            })
            .collect();
        let replayed =
            replay_view(&view, &algo.generate_bits(view.id, seed), &received, algo).unwrap();
        let full = serde_json::to_vec(&m.assignment[&view.id]).unwrap();
        if serde_json::to_vec(&replayed).unwrap() != full || host.view_of(view.id).unwrap() != view
        {
            mismatches += 1;
        }
    }
    outcome(
        mismatches == 0,
        format!("1000 pairs across 4 algorithms, {mismatches} mismatches"),
    )
}

fn expectation() -> Outcome {
    let fam = PermutationFamily::generate(10_000, 30, 99).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ok = true;
    let mut parts = Vec::new();
    for degree in [1usize, 2, 4] {
        let view = random_view(&mut rng, 30, degree);
        let freq = shared_select(&view, &fam).unwrap().len() as f64 / 10_000.0;
        let target = 1.0 / (degree + 1) as f64;
        let rel = (freq - target).abs() / target;
        ok &= rel <= 0.05;
        parts.push(format!(
            "δ={degree}: {freq:.4} vs {target:.4} ({:.1}%)",
            rel * 100.0
        ));
    }
    outcome(ok, parts.join(", "))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "disjointness on 100 mixed graphs, all algorithms",
            disjointness_on_mixed_graphs,
        ),
        (
            "randomized per-degree guarantee on G(200, 0.03)",
            randomized_guarantee,
        ),
        (
            "shared-order exhaustive certificate N=30 Δ=3",
            shared_order_certificate,
        ),
        ("algebraic count bound N=1e6 Δ=8", algebraic_count_bound),
        (
            "algebraic exhaustive certificate N=12 Δ=3",
            algebraic_certificate,
        ),
        ("weighted degree adaptivity N=1e4 Δ=8", weighted_adaptivity),
        (
            "neighborhood graph ground truths",
            neighborhood_ground_truths,
        ),
        ("one-shot locality over 1000 view/host pairs", locality),
        ("selection frequency 1/(δ+1)", expectation),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        println!(
            "{} [{}] {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
        if !o.passed {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
