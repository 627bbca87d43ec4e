//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Run with `cargo test -p lowdeg-cli --test acceptance`.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use lowdeg_core::bench::run_bench;
use lowdeg_core::generators::{gen_family, gen_random_2ec, Family};
use lowdeg_core::oracle::{enumerate_spanning_trees, exhaustive_small_sweep, graph_from_mask};
use lowdeg_core::verify::in_degree_chain_violations;
use lowdeg_core::{
    build_spanning_tree, check_degree_bound, compute_edge_dfs, find_bridges, is_two_edge_connected,
    orientation_stats, validate_edge_dfs, validate_spanning_tree, DegreeReport, EdgeId, Graph,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 exhaustive sweep, n <= 5", exhaustive_sweep),
        ("2 existence oracle on swept graphs", existence_oracle),
        ("3 randomized property suite", randomized_suite),
        ("4 in-degree chain on random instances", in_degree_chain),
        ("5 linear scaling", linear_scaling),
        ("6 bridge oracle vs brute force", bridge_oracle),
        ("7 tightness witness on cycles", tightness_on_cycles),
        ("8 precondition rejection by solve", precondition_rejection),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({secs:.2}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} ({secs:.2}s)");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 8 criteria failed");
        ExitCode::FAILURE
    }
}

fn within(limit: Duration, started: Instant, what: &str) -> Result<(), String> {
    let took = started.elapsed();
    if took > limit {
        return Err(format!("{what} took {took:.2?}, limit {limit:?}"));
    }
    Ok(())
}

/// Known number of labeled 2-edge-connected simple graphs on `n` vertices
/// (a single vertex has no edges to cover and does not count).
fn labeled_two_edge_connected(n: usize) -> u64 {
    match n {
        1 => 0,
        2 => 0,
        3 => 1,
        4 => 10,
        5 => 253,
        _ => unreachable!(),
    }
}

fn exhaustive_sweep() -> Outcome {
    let started = Instant::now();
    let summary = exhaustive_small_sweep(5).map_err(|e| e.to_string())?;
    within(Duration::from_secs(10), started, "sweep")?;
    for &(n, count) in &summary.per_vertex_count {
        if count != labeled_two_edge_connected(n) {
            return Err(format!("{count} graphs on {n} vertices"));
        }
    }
    Ok(format!(
        "{} graphs examined, {} 2-edge-connected, {} start/root runs, 0 failures",
        summary.graphs_examined, summary.graphs_processed, summary.runs
    ))
}

fn best_worst_slack(g: &Graph) -> Result<(u64, Option<i64>), String> {
    let mut best: Option<i64> = None;
    let mut degree = vec![0; g.vertex_count()];
    let trees = enumerate_spanning_trees(g, |edges: &[EdgeId]| {
        degree.iter_mut().for_each(|d| *d = 0);
        for &e in edges {
            let (u, v) = g.endpoints(e);
            degree[u] += 1;
            degree[v] += 1;
        }
        let worst = DegreeReport::from_degrees(g, &degree).worst_slack;
        best = best.max(worst);
    })
    .map_err(|e| e.to_string())?;
    Ok((trees, best))
}

fn existence_oracle() -> Outcome {
    let mut graphs = 0;
    let mut trees = 0;
    for n in 1..=5usize {
        for mask in 0..1u32 << (n * (n - 1) / 2) {
            let g = graph_from_mask(n, mask);
            if !is_two_edge_connected(&g) {
                continue;
            }
            graphs += 1;
            let (count, best) = best_worst_slack(&g)?;
            trees += count;
            match best {
                Some(s) if s >= 0 => {}
                Some(_) => return Err(format!("no tree within the bound:\n{}", g.serialize())),
                None => return Err(format!("no spanning tree:\n{}", g.serialize())),
            }
        }
    }
    Ok(format!(
        "{graphs} graphs, {trees} spanning trees enumerated, 0 exceptions"
    ))
}

/// The fixed instance set shared by criteria 3 and 4: `(n, extra, seed)`.
fn random_instances() -> Vec<(usize, usize, u64)> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut out = vec![(3, 0, 1), (3, 9, 2), (200, 0, 3), (200, 600, 4)];
    while out.len() < 1000 {
        let n = rng.gen_range(3..=200);
        let extra = rng.gen_range(0..=3 * n);
        out.push((n, extra, rng.gen()));
    }
    out
}

fn randomized_suite() -> Outcome {
    let started = Instant::now();
    let mut edges = 0;
    let mut runs = 0;
    for (n, extra, seed) in random_instances() {
        let g = gen_random_2ec(n, extra, seed).map_err(|e| e.to_string())?;
        let m = g.edge_count();
        let fail = |what: String| format!("n={n} extra={extra} seed={seed}: {what}");
        let start = (seed as usize) % n;
        let traversal = compute_edge_dfs(&g, start).map_err(|e| fail(e.to_string()))?;
        validate_edge_dfs(&g, &traversal).map_err(|v| fail(v.to_string()))?;
        let stats = orientation_stats(&g, &traversal).map_err(|v| fail(v.to_string()))?;
        if !stats.all_balanced() {
            return Err(fail("unbalanced vertex".into()));
        }
        for root in [start, (start + n / 2) % n] {
            let (tree, trace) = build_spanning_tree(&g, &traversal, root, false)
                .map_err(|e| fail(e.to_string()))?;
            validate_spanning_tree(&g, &tree).map_err(|d| fail(d.to_string()))?;
            let report = check_degree_bound(&g, &tree).map_err(|d| fail(d.to_string()))?;
            if !report.ok {
                return Err(fail(format!("root {root}: bound exceeded")));
            }
            if trace.enqueue_count != 2 * m {
                return Err(fail(format!(
                    "root {root}: {} enqueues for m={m}",
                    trace.enqueue_count
                )));
            }
            runs += 1;
        }
        edges += m;
    }
    within(Duration::from_secs(30), started, "suite")?;
    Ok(format!(
        "1000 instances, {runs} builds, {edges} edges, 0 violations"
    ))
}

fn in_degree_chain() -> Outcome {
    let mut vertices = 0;
    for (n, extra, seed) in random_instances() {
        let g = gen_random_2ec(n, extra, seed).map_err(|e| e.to_string())?;
        let start = (seed as usize) % n;
        let traversal = compute_edge_dfs(&g, start).map_err(|e| e.to_string())?;
        let stats = orientation_stats(&g, &traversal).map_err(|v| v.to_string())?;
        let (tree, _) =
            build_spanning_tree(&g, &traversal, start, false).map_err(|e| e.to_string())?;
        let broken = in_degree_chain_violations(&g, &tree, &stats);
        if !broken.is_empty() {
            return Err(format!(
                "n={n} extra={extra} seed={seed}: vertices {broken:?}"
            ));
        }
        for u in 0..n {
            let deg = g.degree(u);
            if stats.in_count[u] > deg.div_ceil(2) || tree.degree[u] > stats.in_count[u] + 1 {
                return Err(format!("n={n} extra={extra} seed={seed}: vertex {u}"));
            }
        }
        vertices += n;
    }
    Ok(format!("{vertices} vertices checked, 0 violations"))
}

fn linear_scaling() -> Outcome {
    let started = Instant::now();
    let sizes: Vec<usize> = (17..=22).map(|e| 1usize << e).collect();
    let report = run_bench(&sizes, 7, 5);
    within(Duration::from_secs(120), started, "bench")?;
    for (size, row) in sizes.iter().zip(&report.rows) {
        match row {
            Ok(r) if r.enqueues != 2 * r.m => {
                return Err(format!("m={}: {} enqueues", r.m, r.enqueues))
            }
            Ok(_) => {}
            Err(e) => return Err(format!("size {size}: {e}")),
        }
    }
    let slope = report.slope.ok_or("no slope")?;
    let ratios = report.adjacent_ratios();
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    let detail = format!(
        "slope {slope:.3} (<= 1.15), ratios [{}] (<= 2.5)",
        shown.join(", ")
    );
    if slope <= 1.15 && ratios.iter().all(|&r| r <= 2.5) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn brute_bridges(g: &Graph) -> Vec<EdgeId> {
    let base = g.component_count();
    (0..g.edge_count())
        .filter(|&skip| {
            let rest: Vec<_> = g
                .edges()
                .iter()
                .enumerate()
                .filter(|&(e, _)| e != skip)
                .map(|(_, &uv)| uv)
                .collect();
            Graph::from_edges(g.vertex_count(), rest)
                .unwrap()
                .component_count()
                > base
        })
        .collect()
}

fn bridge_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xb1d6e);
    let (mut bridged, mut bridgeless) = (0, 0);
    for i in 0..200 {
        let g = if i % 2 == 0 {
            let n = rng.gen_range(3..=8);
            gen_random_2ec(n, rng.gen_range(0..=20 - n), rng.gen()).map_err(|e| e.to_string())?
        } else {
            let n = rng.gen_range(2..=12);
            let m = rng.gen_range(1..=20);
            let edges = (0..m)
                .map(|_| {
                    let u = rng.gen_range(0..n);
                    let v = (u + rng.gen_range(1..n)) % n;
                    (u, v)
                })
                .collect();
            Graph::from_edges(n, edges).unwrap()
        };
        let fast = find_bridges(&g);
        let slow = brute_bridges(&g);
        if fast != slow {
            return Err(format!("{fast:?} vs {slow:?} on\n{}", g.serialize()));
        }
        if fast.is_empty() {
            bridgeless += 1;
        } else {
            bridged += 1;
        }
    }
    if bridged == 0 || bridgeless == 0 {
        return Err(format!(
            "unmixed sample: {bridged} bridged, {bridgeless} bridgeless"
        ));
    }
    Ok(format!(
        "200 graphs ({bridged} bridged, {bridgeless} bridgeless), 0 disagreements"
    ))
}

fn tightness_on_cycles() -> Outcome {
    let mut total = 0;
    for n in 3..=8 {
        let g = gen_family(&Family::Cycle { n }).map_err(|e| e.to_string())?;
        let mut degree = vec![0; n];
        let mut bad = None;
        let trees = enumerate_spanning_trees(&g, |edges: &[EdgeId]| {
            degree.iter_mut().for_each(|d| *d = 0);
            for &e in edges {
                let (u, v) = g.endpoints(e);
                degree[u] += 1;
                degree[v] += 1;
            }
            let worst = DegreeReport::from_degrees(&g, &degree).worst_slack;
            if worst != Some(0) && bad.is_none() {
                bad = Some((edges.to_vec(), worst));
            }
        })
        .map_err(|e| e.to_string())?;
        if trees != n as u64 {
            return Err(format!("C_{n}: {trees} trees"));
        }
        if let Some((edges, worst)) = bad {
            return Err(format!("C_{n}: tree {edges:?} has minimum slack {worst:?}"));
        }
        total += trees;
    }
    Ok(format!(
        "{total} trees over C_3..C_8, every minimum slack is 0"
    ))
}

fn negative_corpus() -> Vec<(&'static str, Graph)> {
    let g = |n: usize, edges: &[(usize, usize)]| Graph::from_edges(n, edges.to_vec()).unwrap();
    vec![
        ("single edge", g(2, &[(0, 1)])),
        ("path P3", g(3, &[(0, 1), (1, 2)])),
        ("path P6", g(6, &[(3, 4), (0, 1), (1, 2), (4, 5), (2, 3)])),
        ("star K1,4", g(5, &[(0, 1), (0, 2), (0, 3), (0, 4)])),
        (
            "tree",
            g(7, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]),
        ),
        (
            "triangle with pendant",
            g(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]),
        ),
        (
            "two triangles joined by an edge",
            g(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]),
        ),
        (
            "cycle with a tail",
            g(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5)]),
        ),
        (
            "two squares joined by a path",
            g(
                10,
                &[
                    (0, 1),
                    (1, 2),
                    (2, 3),
                    (3, 0),
                    (3, 8),
                    (8, 9),
                    (9, 4),
                    (4, 5),
                    (5, 6),
                    (6, 7),
                    (7, 4),
                ],
            ),
        ),
        (
            "K4 with pendant",
            g(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 1)]),
        ),
        ("double edge plus bridge", g(3, &[(0, 1), (1, 0), (1, 2)])),
    ]
}

fn precondition_rejection() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let corpus = negative_corpus();
    for (i, (name, g)) in corpus.iter().enumerate() {
        let bridges = find_bridges(g);
        if bridges.is_empty() || bridges != brute_bridges(g) {
            return Err(format!("corpus entry {name} is not a bridged graph"));
        }
        let path = dir.path().join(format!("neg{i}.graph"));
        std::fs::write(&path, g.serialize()).map_err(|e| e.to_string())?;
        let out = Command::new(env!("CARGO_BIN_EXE_lowdeg"))
            .args(["solve", "--input"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        let stderr = String::from_utf8_lossy(&out.stderr);
        if out.status.code() != Some(3) {
            return Err(format!(
                "{name}: exit {:?}, stderr {stderr}",
                out.status.code()
            ));
        }
        if !out.stdout.is_empty() {
            return Err(format!("{name}: wrote a tree despite rejection"));
        }
        for &e in &bridges {
            let (u, v) = g.endpoints(e);
            let named = format!("e{e}={{{u},{v}}}");
            if !stderr.contains(&named) {
                return Err(format!("{name}: bridge {named} not named in: {stderr}"));
            }
        }
        let named: BTreeSet<usize> = stderr
            .match_indices("e")
            .filter_map(|(at, _)| {
                let digits: String = stderr[at + 1..]
                    .chars()
                    .take_while(|c| c.is_ascii_digit())
                    .collect();
                let rest = &stderr[at + 1 + digits.len()..];
                (!digits.is_empty() && rest.starts_with('=')).then(|| digits.parse().unwrap())
            })
            .collect();
        if named != bridges.iter().copied().collect() {
            return Err(format!("{name}: named {named:?}, bridges {bridges:?}"));
        }
    }
    Ok(format!(
        "{} bridged graphs rejected with exit 3, bridges named",
        corpus.len()
    ))
}
