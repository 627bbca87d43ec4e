//! Brute-force ground truth for small graphs: exhaustive spanning-tree
//! enumeration, Kirchhoff counting, and a sweep over every labeled simple
//! graph on a handful of vertices.

use std::collections::HashSet;
use std::io::{self, Write};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::builder::{build_spanning_tree, SpanningTree};
use crate::dsu::Dsu;
use crate::edge_dfs::{classify_steps, compute_edge_dfs, StepKind};
use crate::graph::{ceiling_bound, EdgeId, Graph};
use crate::num::{bareiss_determinant, ExactInt};
use crate::verify::{
    check_degree_bound, check_partition_cut, in_degree_chain_violations, is_two_edge_connected,
    orientation_stats, validate_spanning_tree,
};
use crate::TreeCount;

/// Largest graph the enumerator accepts.
pub const MAX_ENUM_VERTICES: usize = 12;
/// Largest spanning-tree count the enumerator accepts.
pub const MAX_ENUM_TREES: u64 = 10_000_000;
/// Largest graph [`count_spanning_trees`] accepts.
pub const MAX_COUNT_VERTICES: usize = 64;
/// Largest vertex count for [`exhaustive_small_sweep`].
pub const MAX_SWEEP_VERTICES: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{n} vertices exceeds the limit of {limit}")]
    TooManyVertices { n: usize, limit: usize },
    #[error("graph has {count} spanning trees, more than the enumeration limit {MAX_ENUM_TREES}")]
    TooManyTrees { count: String },
    #[error("spanning-tree count overflows the integer type")]
    Overflow,
    #[error("claim refuted on graph {graph_id}: {reason}")]
    Refuted { graph_id: String, reason: String },
}

/// Kirchhoff count: determinant of the Laplacian with its last row and column
/// removed. Parallel edges add multiplicity.
pub fn count_spanning_trees<T: ExactInt>(g: &Graph) -> Result<T, OracleError> {
    let n = g.vertex_count();
    if n > MAX_COUNT_VERTICES {
        return Err(OracleError::TooManyVertices {
            n,
            limit: MAX_COUNT_VERTICES,
        });
    }
    if n == 0 {
        return Ok(T::zero());
    }
    let mut lap = vec![vec![0i64; n]; n];
    for &(u, v) in g.edges() {
        lap[u][u] += 1;
        lap[v][v] += 1;
        lap[u][v] -= 1;
        lap[v][u] -= 1;
    }
    let reduced = lap[..n - 1]
        .iter()
        .map(|row| {
            row[..n - 1]
                .iter()
                .map(|&x| T::from_i64(x).ok_or(OracleError::Overflow))
                .collect::<Result<Vec<T>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    bareiss_determinant(reduced).ok_or(OracleError::Overflow)
}

/// Calls `visit` once per spanning tree with its edge ids in ascending order.
/// Returns the number of trees.
///
/// Edges are decided in id order: an edge is included if it joins two
/// components of the partial forest, and excluded only if the forest can still
/// be completed from the remaining edges, so every branch ends in a tree.
pub fn enumerate_spanning_trees<F>(g: &Graph, mut visit: F) -> Result<u64, OracleError>
where
    F: FnMut(&[EdgeId]),
{
    let n = g.vertex_count();
    if n > MAX_ENUM_VERTICES {
        return Err(OracleError::TooManyVertices {
            n,
            limit: MAX_ENUM_VERTICES,
        });
    }
    let count: TreeCount = count_spanning_trees(g)?;
    if count > MAX_ENUM_TREES as TreeCount {
        return Err(OracleError::TooManyTrees {
            count: count.to_string(),
        });
    }
    if n == 0 {
        return Ok(0);
    }

    struct Search<'a, F> {
        g: &'a Graph,
        target: usize,
        dsu: Dsu,
        chosen: Vec<EdgeId>,
        visit: F,
        found: u64,
    }

    impl<F: FnMut(&[EdgeId])> Search<'_, F> {
        fn completable(&self, from: usize) -> bool {
            let mut d = self.dsu.clone();
            for &(u, v) in &self.g.edges()[from..] {
                d.union(u, v);
                if d.sets() == 1 {
                    return true;
                }
            }
            d.sets() == 1
        }

        fn run(&mut self, next: usize) {
            if self.chosen.len() == self.target {
                (self.visit)(&self.chosen);
                self.found += 1;
                return;
            }
            if next == self.g.edge_count() {
                return;
            }
            let (u, v) = self.g.endpoints(next);
            if !self.dsu.same(u, v) {
                self.dsu.union(u, v);
                self.chosen.push(next);
                self.run(next + 1);
                self.chosen.pop();
                self.dsu.rollback();
            }
            if self.completable(next + 1) {
                self.run(next + 1);
            }
        }
    }

    let mut search = Search {
        g,
        target: n - 1,
        dsu: Dsu::new(n),
        chosen: Vec::with_capacity(n - 1),
        visit: &mut visit,
        found: 0,
    };
    if search.completable(0) {
        search.run(0);
    }
    Ok(search.found)
}

/// Short hex digest of the graph's serialization.
pub fn graph_id(g: &Graph) -> String {
    let digest = Sha256::digest(g.serialize().as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn worst_slack(g: &Graph, tree_edges: &[EdgeId], degree: &mut [usize]) -> i64 {
    degree.iter_mut().for_each(|d| *d = 0);
    for &e in tree_edges {
        let (u, v) = g.endpoints(e);
        degree[u] += 1;
        degree[v] += 1;
    }
    degree
        .iter()
        .enumerate()
        .map(|(v, &d)| ceiling_bound(g.degree(v)) as i64 - d as i64)
        .min()
        .unwrap_or(0)
}

/// Enumeration summary for one graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub graph_id: String,
    pub trees_enumerated: u64,
    /// Best achievable minimum slack over all spanning trees.
    pub best_worst_slack: Option<i64>,
    /// Minimum slack of the algorithm's tree(s); `None` when it was not run.
    pub algorithm_worst_slack: Option<i64>,
    /// Some spanning tree meets every vertex bound.
    pub theorem_holds: bool,
    /// Every tree the algorithm returned was among the enumerated ones.
    pub algorithm_tree_enumerated: bool,
    pub two_edge_connected: bool,
}

impl OracleVerdict {
    pub const CSV_HEADER: &'static str =
        "graph_hash,trees,best_worst_slack,alg_worst_slack,theorem_holds";

    /// `graph_hash,trees,best_worst_slack,alg_worst_slack,theorem_holds`, with
    /// absent values left empty and the flag as `1`/`0`.
    pub fn csv_row(&self) -> String {
        let opt = |x: Option<i64>| x.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{}",
            self.graph_id,
            self.trees_enumerated,
            opt(self.best_worst_slack),
            opt(self.algorithm_worst_slack),
            u8::from(self.theorem_holds)
        )
    }
}

pub fn write_verdicts_csv<W: Write>(mut out: W, verdicts: &[OracleVerdict]) -> io::Result<()> {
    writeln!(out, "{}", OracleVerdict::CSV_HEADER)?;
    for v in verdicts {
        writeln!(out, "{}", v.csv_row())?;
    }
    Ok(())
}

/// Enumerates every spanning tree of `g`; returns the trees as sorted edge
/// lists and the verdict skeleton (no algorithm fields filled).
fn enumerate_with_slack(g: &Graph) -> Result<(HashSet<Vec<EdgeId>>, OracleVerdict), OracleError> {
    let mut trees = HashSet::new();
    let mut best: Option<i64> = None;
    let mut degree = vec![0; g.vertex_count()];
    let count = enumerate_spanning_trees(g, |edges| {
        let s = worst_slack(g, edges, &mut degree);
        best = Some(best.map_or(s, |b| b.max(s)));
        trees.insert(edges.to_vec());
    })?;
    let verdict = OracleVerdict {
        graph_id: graph_id(g),
        trees_enumerated: count,
        best_worst_slack: best,
        algorithm_worst_slack: None,
        theorem_holds: best.is_some_and(|b| b >= 0),
        algorithm_tree_enumerated: false,
        two_edge_connected: is_two_edge_connected(g),
    };
    Ok((trees, verdict))
}

fn refuted(g: &Graph, reason: String) -> OracleError {
    OracleError::Refuted {
        graph_id: graph_id(g),
        reason,
    }
}

/// Enumerates all spanning trees, runs the algorithm from vertex 0, and
/// checks both against the degree bound. Graphs that are not 2-edge-connected
/// still get a verdict; nothing is asserted for them.
pub fn oracle_check(g: &Graph) -> Result<OracleVerdict, OracleError> {
    let (trees, mut verdict) = enumerate_with_slack(g)?;
    if !verdict.two_edge_connected {
        return Ok(verdict);
    }
    if !verdict.theorem_holds {
        return Err(refuted(g, "no spanning tree meets the degree bound".into()));
    }
    let traversal = compute_edge_dfs(g, 0).map_err(|e| refuted(g, e.to_string()))?;
    let (tree, _) =
        build_spanning_tree(g, &traversal, 0, true).map_err(|e| refuted(g, e.to_string()))?;
    let report = check_degree_bound(g, &tree).map_err(|e| refuted(g, e.to_string()))?;
    verdict.algorithm_worst_slack = report.worst_slack;
    verdict.algorithm_tree_enumerated = trees.contains(&sorted(&tree));
    if !report.ok {
        return Err(refuted(g, "algorithm tree exceeds the degree bound".into()));
    }
    if !verdict.algorithm_tree_enumerated {
        return Err(refuted(
            g,
            "algorithm tree not among enumerated trees".into(),
        ));
    }
    Ok(verdict)
}

fn sorted(t: &SpanningTree) -> Vec<EdgeId> {
    let mut e = t.edges.clone();
    e.sort_unstable();
    e
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSummary {
    pub max_n: usize,
    /// Edge subsets examined, over all vertex counts.
    pub graphs_examined: u64,
    /// 2-edge-connected graphs among them.
    pub graphs_processed: u64,
    /// `(n, processed graphs on exactly n vertices)` for `n = 1..=max_n`.
    pub per_vertex_count: Vec<(usize, u64)>,
    /// (start, root) combinations run through the algorithm.
    pub runs: u64,
    pub verdicts: Vec<OracleVerdict>,
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("max_n {0} exceeds {MAX_SWEEP_VERTICES}")]
    TooLarge(usize),
    #[error("sweep failed: {reason}\n{graph}")]
    Failure { graph: String, reason: String },
}

/// Simple graph on `n` vertices whose edges are the set bits of `mask` over
/// the pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn graph_from_mask(n: usize, mask: u32) -> Graph {
    let edges = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .enumerate()
        .filter(|&(bit, _)| mask >> bit & 1 == 1)
        .map(|(_, e)| e)
        .collect();
    Graph::from_edges(n, edges).expect("simple graph")
}

/// Runs every check in this crate on every 2-edge-connected simple graph with
/// at most `max_n` vertices, from every start vertex and every root.
/// Stops at the first failure with the offending graph serialized.
pub fn exhaustive_small_sweep(max_n: usize) -> Result<SweepSummary, SweepError> {
    if max_n > MAX_SWEEP_VERTICES {
        return Err(SweepError::TooLarge(max_n));
    }
    let mut summary = SweepSummary {
        max_n,
        graphs_examined: 0,
        graphs_processed: 0,
        per_vertex_count: Vec::new(),
        runs: 0,
        verdicts: Vec::new(),
    };
    for n in 1..=max_n {
        let pairs = n * (n - 1) / 2;
        let mut processed = 0;
        for mask in 0..1u32 << pairs {
            summary.graphs_examined += 1;
            let g = graph_from_mask(n, mask);
            if !is_two_edge_connected(&g) {
                continue;
            }
            let fail = |reason: String| SweepError::Failure {
                graph: g.serialize(),
                reason,
            };
            let verdict = sweep_one(&g, &mut summary.runs).map_err(fail)?;
            summary.verdicts.push(verdict);
            processed += 1;
        }
        summary.graphs_processed += processed;
        summary.per_vertex_count.push((n, processed));
    }
    Ok(summary)
}

fn sweep_one(g: &Graph, runs: &mut u64) -> Result<OracleVerdict, String> {
    let n = g.vertex_count();
    let m = g.edge_count();

    // Every proper vertex subset is crossed by at least two edges.
    for subset in 1..(1u32 << n) - 1 {
        let side: Vec<usize> = (0..n).filter(|&v| subset >> v & 1 == 1).collect();
        let cut = check_partition_cut(g, &side).map_err(|e| e.to_string())?;
        if cut < 2 {
            return Err(format!("cut {side:?} crossed by {cut} edges"));
        }
    }

    let (trees, mut verdict) = enumerate_with_slack(g).map_err(|e| e.to_string())?;
    if !verdict.theorem_holds {
        return Err("no spanning tree meets the degree bound".into());
    }
    let count: TreeCount = count_spanning_trees(g).map_err(|e| e.to_string())?;
    if count != verdict.trees_enumerated as TreeCount {
        return Err(format!(
            "Kirchhoff count {count} != enumerated {}",
            verdict.trees_enumerated
        ));
    }

    let mut alg_worst = i64::MAX;
    for start in 0..n {
        let traversal = compute_edge_dfs(g, start).map_err(|e| e.to_string())?;
        let steps = classify_steps(g, &traversal).map_err(|v| format!("start {start}: {v}"))?;
        for (i, kind) in steps.kinds.iter().enumerate() {
            let items = traversal.items();
            let crosses = items[i].head == items[i + 1].tail;
            if crosses != (*kind == StepKind::Cross) {
                return Err(format!("start {start}: step {i} misclassified"));
            }
        }
        let stats = orientation_stats(g, &traversal).map_err(|v| v.to_string())?;
        if !stats.all_balanced() {
            return Err(format!("start {start}: orientation not balanced"));
        }
        if stats.in_count.iter().sum::<usize>() != m || stats.out_count.iter().sum::<usize>() != m {
            return Err(format!("start {start}: in/out totals differ from m"));
        }
        for root in 0..n {
            *runs += 1;
            let (tree, trace) = build_spanning_tree(g, &traversal, root, true)
                .map_err(|e| format!("start {start} root {root}: {e}"))?;
            validate_spanning_tree(g, &tree)
                .map_err(|d| format!("start {start} root {root}: {d}"))?;
            if trace.enqueue_count != 2 * m {
                return Err(format!("start {start} root {root}: enqueue count"));
            }
            let report = check_degree_bound(g, &tree).map_err(|d| d.to_string())?;
            if !report.ok {
                return Err(format!("start {start} root {root}: degree bound exceeded"));
            }
            if !in_degree_chain_violations(g, &tree, &stats).is_empty() {
                return Err(format!("start {start} root {root}: in-degree chain broken"));
            }
            if !trees.contains(&sorted(&tree)) {
                return Err(format!("start {start} root {root}: tree not enumerated"));
            }
            alg_worst = alg_worst.min(report.worst_slack.unwrap_or(0));
        }
    }
    verdict.algorithm_worst_slack = Some(alg_worst);
    verdict.algorithm_tree_enumerated = true;
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_family, Family};
    use crate::BigTreeCount;

    fn trees_of(g: &Graph) -> Vec<Vec<EdgeId>> {
        let mut out = Vec::new();
        enumerate_spanning_trees(g, |t| out.push(t.to_vec())).unwrap();
        out
    }

    #[test]
    fn enumeration_examples() {
        let tri = gen_family(&Family::Cycle { n: 3 }).unwrap();
        assert_eq!(trees_of(&tri), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(
            trees_of(&gen_family(&Family::Cycle { n: 4 }).unwrap()).len(),
            4
        );
        let k4 = gen_family(&Family::Complete { n: 4 }).unwrap();
        let trees = trees_of(&k4);
        assert_eq!(trees.len(), 16);
        assert_eq!(trees.iter().collect::<HashSet<_>>().len(), 16);
        let par = Graph::from_edges(2, vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(trees_of(&par), vec![vec![0], vec![1]]);
        assert_eq!(
            trees_of(&Graph::from_edges(1, vec![]).unwrap()),
            vec![Vec::<EdgeId>::new()]
        );
        let split = Graph::from_edges(4, vec![(0, 1), (2, 3)]).unwrap();
        assert!(trees_of(&split).is_empty());
    }

    #[test]
    fn enumeration_matches_brute_subsets() {
        // Every (n-1)-subset that is acyclic, checked by plain DSU.
        for g in [
            gen_family(&Family::Wheel { rim: 4 }).unwrap(),
            gen_family(&Family::Theta { paths: 3, len: 2 }).unwrap(),
            Graph::from_edges(3, vec![(0, 1), (0, 1), (1, 2), (2, 0)]).unwrap(),
        ] {
            let n = g.vertex_count();
            let m = g.edge_count();
            let mut brute = Vec::new();
            for mask in 0u32..1 << m {
                if mask.count_ones() as usize != n - 1 {
                    continue;
                }
                let mut d = Dsu::new(n);
                let edges: Vec<EdgeId> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
                if edges.iter().all(|&e| {
                    let (u, v) = g.endpoints(e);
                    d.union(u, v)
                }) {
                    brute.push(edges);
                }
            }
            brute.sort();
            let mut ours = trees_of(&g);
            ours.sort();
            assert_eq!(ours, brute);
        }
    }

    #[test]
    fn kirchhoff_examples() {
        let tri = gen_family(&Family::Cycle { n: 3 }).unwrap();
        assert_eq!(count_spanning_trees::<TreeCount>(&tri), Ok(3));
        let k4 = gen_family(&Family::Complete { n: 4 }).unwrap();
        assert_eq!(count_spanning_trees::<TreeCount>(&k4), Ok(16));
        let par = Graph::from_edges(2, vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(count_spanning_trees::<i64>(&par), Ok(2));
        // Cayley: K_n has n^(n-2) trees.
        let k9 = gen_family(&Family::Complete { n: 9 }).unwrap();
        assert_eq!(count_spanning_trees::<TreeCount>(&k9), Ok(9i128.pow(7)));
    }

    #[test]
    fn kirchhoff_overflow_is_reported() {
        // K_40 has 40^38 trees, far beyond i64 and i128.
        let k40 = gen_family(&Family::Complete { n: 40 }).unwrap();
        assert_eq!(
            count_spanning_trees::<i64>(&k40),
            Err(OracleError::Overflow)
        );
        assert_eq!(
            count_spanning_trees::<BigTreeCount>(&k40),
            Ok(BigTreeCount::from(40).pow(38))
        );
        let big = gen_family(&Family::Cycle { n: 65 }).unwrap();
        assert!(matches!(
            count_spanning_trees::<TreeCount>(&big),
            Err(OracleError::TooManyVertices { .. })
        ));
    }

    #[test]
    fn enumeration_guards() {
        let c13 = gen_family(&Family::Cycle { n: 13 }).unwrap();
        assert!(matches!(
            enumerate_spanning_trees(&c13, |_| {}),
            Err(OracleError::TooManyVertices { n: 13, .. })
        ));
        // K_12 has 12^10 trees.
        let k12 = gen_family(&Family::Complete { n: 12 }).unwrap();
        assert!(matches!(
            enumerate_spanning_trees(&k12, |_| {}),
            Err(OracleError::TooManyTrees { .. })
        ));
    }

    #[test]
    fn oracle_examples() {
        let c5 = gen_family(&Family::Cycle { n: 5 }).unwrap();
        let v = oracle_check(&c5).unwrap();
        assert!(v.theorem_holds);
        assert_eq!(v.trees_enumerated, 5);
        assert_eq!(v.best_worst_slack, Some(0));

        let w5 = gen_family(&Family::Wheel { rim: 5 }).unwrap();
        let v = oracle_check(&w5).unwrap();
        assert!(v.theorem_holds);
        assert!(v.algorithm_worst_slack.unwrap() >= 0);
        assert!(v.algorithm_tree_enumerated);

        let k4 = gen_family(&Family::Complete { n: 4 }).unwrap();
        let v = oracle_check(&k4).unwrap();
        assert_eq!(v.trees_enumerated, 16);
        assert!(v.theorem_holds);

        let p3 = Graph::from_edges(3, vec![(0, 1), (1, 2)]).unwrap();
        let v = oracle_check(&p3).unwrap();
        assert!(!v.two_edge_connected);
        assert_eq!(v.algorithm_worst_slack, None);
        assert_eq!(v.trees_enumerated, 1);
    }

    #[test]
    fn verdict_csv() {
        let v = oracle_check(&gen_family(&Family::Cycle { n: 3 }).unwrap()).unwrap();
        let row = v.csv_row();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 5);
        assert_eq!(fields[0].len(), 16);
        assert_eq!(&fields[1..], &["3", "0", "0", "1"]);
    }

    /// Connected with no edge whose removal disconnects, by brute force.
    fn brute_two_edge_connected(g: &Graph) -> bool {
        if g.vertex_count() < 2 || !g.is_connected() {
            return false;
        }
        (0..g.edge_count()).all(|skip| {
            let rest = g
                .edges()
                .iter()
                .enumerate()
                .filter(|&(e, _)| e != skip)
                .map(|(_, &uv)| uv)
                .collect();
            Graph::from_edges(g.vertex_count(), rest)
                .unwrap()
                .is_connected()
        })
    }

    #[test]
    fn sweep_small_cases() {
        let s = exhaustive_small_sweep(2).unwrap();
        assert_eq!(s.graphs_processed, 0);
        let s = exhaustive_small_sweep(3).unwrap();
        assert_eq!(s.graphs_processed, 1);
        assert_eq!(s.per_vertex_count, vec![(1, 0), (2, 0), (3, 1)]);

        let s = exhaustive_small_sweep(4).unwrap();
        let mut brute = 0;
        for n in 1..=4 {
            for mask in 0..1u32 << (n * (n - 1) / 2) {
                brute += u64::from(brute_two_edge_connected(&graph_from_mask(n, mask)));
            }
        }
        assert_eq!(s.graphs_processed, brute);
        // C3; three labeled 4-cycles, six diamonds and K4 on four vertices.
        assert_eq!(s.graphs_processed, 11);
        assert!(s.verdicts.iter().all(|v| v.theorem_holds));
        assert!(matches!(
            exhaustive_small_sweep(7),
            Err(SweepError::TooLarge(7))
        ));
    }
}
