//! Independent certification of inputs and outputs: bridges and
//! 2-edge-connectivity, cut sizes, spanning-tree validity, the in/out balance
//! of an edge traversal and the per-vertex degree report.

use std::io::{self, Write};

use thiserror::Error;

use crate::builder::SpanningTree;
use crate::dsu::Dsu;
use crate::edge_dfs::{validate_edge_dfs, DfsViolation, EdgeDfsList};
use crate::graph::{ceiling_bound, EdgeId, Graph, VertexId};

/// All bridges of `g`, ascending by edge id.
///
/// Low-link DFS that skips only the edge id used to enter a vertex, so one of
/// two parallel edges never counts as a bridge.
pub fn find_bridges(g: &Graph) -> Vec<EdgeId> {
    const UNSEEN: usize = usize::MAX;
    let n = g.vertex_count();
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut bridges = Vec::new();
    // (vertex, entering edge, next adjacency position)
    let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = Vec::new();

    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        stack.push((root, None, 0));

        while let Some(frame) = stack.last_mut() {
            let (v, entered_by, pos) = *frame;
            if let Some(inc) = g.adjacency(v).get(pos) {
                frame.2 += 1;
                if Some(inc.edge) == entered_by {
                    continue;
                }
                let w = inc.neighbor;
                if disc[w] == UNSEEN {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, Some(inc.edge), 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let (Some(&(parent, _, _)), Some(e)) = (stack.last(), entered_by) {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        bridges.push(e);
                    }
                }
            }
        }
    }
    bridges.sort_unstable();
    bridges
}

/// Connected, at least two vertices, and bridgeless.
pub fn is_two_edge_connected(g: &Graph) -> bool {
    g.vertex_count() >= 2 && g.is_connected() && find_bridges(g).is_empty()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("vertex {0} out of range")]
    OutOfRange(VertexId),
    #[error("subset must be non-empty")]
    Empty,
    #[error("subset must not contain every vertex")]
    Full,
}

/// Number of edges with exactly one endpoint in `side`.
pub fn check_partition_cut(g: &Graph, side: &[VertexId]) -> Result<usize, PartitionError> {
    let n = g.vertex_count();
    let mut inside = vec![false; n];
    let mut distinct = 0;
    for &v in side {
        if v >= n {
            return Err(PartitionError::OutOfRange(v));
        }
        if !inside[v] {
            inside[v] = true;
            distinct += 1;
        }
    }
    if distinct == 0 {
        return Err(PartitionError::Empty);
    }
    if distinct == n {
        return Err(PartitionError::Full);
    }
    Ok(g.edges()
        .iter()
        .filter(|&&(u, v)| inside[u] != inside[v])
        .count())
}

/// Why a candidate is not a spanning tree.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TreeDefect {
    #[error("root {0} out of range")]
    RootOutOfRange(VertexId),
    #[error("edge id {0} out of range")]
    UnknownEdge(EdgeId),
    #[error("edge {0} listed twice")]
    DuplicateEdge(EdgeId),
    #[error("edge {0} closes a cycle")]
    Cycle(EdgeId),
    #[error("edges leave {components} components")]
    Disconnected { components: usize },
    #[error("{found} edges, expected {expected}")]
    WrongCardinality { found: usize, expected: usize },
    #[error("recorded degree of vertex {vertex} is {recorded}, actual {actual}")]
    DegreeMismatch {
        vertex: VertexId,
        recorded: usize,
        actual: usize,
    },
    #[error("parent link of vertex {0} is inconsistent with the tree edges")]
    ParentMismatch(VertexId),
    #[error("per-vertex records cover {found} vertices, graph has {expected}")]
    RecordLength { found: usize, expected: usize },
}

pub fn validate_spanning_tree(g: &Graph, t: &SpanningTree) -> Result<(), TreeDefect> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if t.root >= n {
        return Err(TreeDefect::RootOutOfRange(t.root));
    }
    let mut used = vec![false; m];
    let mut dsu = Dsu::new(n);
    let mut degree = vec![0usize; n];
    for &e in &t.edges {
        if e >= m {
            return Err(TreeDefect::UnknownEdge(e));
        }
        if std::mem::replace(&mut used[e], true) {
            return Err(TreeDefect::DuplicateEdge(e));
        }
        let (u, v) = g.endpoints(e);
        if !dsu.union(u, v) {
            return Err(TreeDefect::Cycle(e));
        }
        degree[u] += 1;
        degree[v] += 1;
    }
    if dsu.sets() != 1 {
        return Err(TreeDefect::Disconnected {
            components: dsu.sets(),
        });
    }
    if t.edges.len() != n - 1 {
        return Err(TreeDefect::WrongCardinality {
            found: t.edges.len(),
            expected: n - 1,
        });
    }
    for found in [t.degree.len(), t.parent.len()] {
        if found != n {
            return Err(TreeDefect::RecordLength { found, expected: n });
        }
    }
    for (v, (&recorded, &actual)) in t.degree.iter().zip(&degree).enumerate() {
        if recorded != actual {
            return Err(TreeDefect::DegreeMismatch {
                vertex: v,
                recorded,
                actual,
            });
        }
    }
    for v in 0..n {
        let consistent = match t.parent[v] {
            None => v == t.root,
            Some((p, e)) => {
                v != t.root && e < m && used[e] && {
                    let (a, b) = g.endpoints(e);
                    (a, b) == (p, v) || (a, b) == (v, p)
                }
            }
        };
        if !consistent {
            return Err(TreeDefect::ParentMismatch(v));
        }
    }
    Ok(())
}

/// Per-vertex counts of incoming (`head == u`) and outgoing (`tail == u`) items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientationStats {
    pub in_count: Vec<usize>,
    pub out_count: Vec<usize>,
    pub balanced_ok: Vec<bool>,
}

impl OrientationStats {
    pub fn all_balanced(&self) -> bool {
        self.balanced_ok.iter().all(|&b| b)
    }
}

/// In/out counts of a valid traversal, with the parity-dependent balance
/// check `in <= out` (even degree) or `in <= out + 1` (odd degree).
pub fn orientation_stats(g: &Graph, list: &EdgeDfsList) -> Result<OrientationStats, DfsViolation> {
    validate_edge_dfs(g, list)?;
    let n = g.vertex_count();
    let mut in_count = vec![0; n];
    let mut out_count = vec![0; n];
    for a in list.items() {
        out_count[a.tail] += 1;
        in_count[a.head] += 1;
    }
    let balanced_ok = (0..n)
        .map(|u| {
            let allowance = g.degree(u) % 2;
            in_count[u] <= out_count[u] + allowance
        })
        .collect();
    Ok(OrientationStats {
        in_count,
        out_count,
        balanced_ok,
    })
}

/// Whether the orientation induced by the traversal (each item an arc
/// tail -> head) is strongly connected. Not needed for the degree bound;
/// exposed as an experimental check.
pub fn orientation_strongly_connected(g: &Graph, list: &EdgeDfsList) -> bool {
    let n = g.vertex_count();
    if n == 0 {
        return true;
    }
    let mut forward = vec![Vec::new(); n];
    let mut backward = vec![Vec::new(); n];
    for a in list.items() {
        forward[a.tail].push(a.head);
        backward[a.head].push(a.tail);
    }
    let reaches_all = |arcs: &[Vec<VertexId>]| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &arcs[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    };
    reaches_all(&forward) && reaches_all(&backward)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeRow {
    pub vertex: VertexId,
    pub graph_degree: usize,
    pub tree_degree: usize,
    pub bound: usize,
    pub slack: i64,
}

/// Per-vertex comparison of tree degree against `⌈deg_G/2⌉ + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    pub rows: Vec<DegreeRow>,
    /// Minimum slack; `None` for the empty graph.
    pub worst_slack: Option<i64>,
    pub ok: bool,
}

impl DegreeReport {
    pub fn from_degrees(g: &Graph, tree_degree: &[usize]) -> Self {
        let rows: Vec<DegreeRow> = g
            .degrees()
            .zip(tree_degree)
            .enumerate()
            .map(|(vertex, (graph_degree, &tree_degree))| {
                let bound = ceiling_bound(graph_degree);
                DegreeRow {
                    vertex,
                    graph_degree,
                    tree_degree,
                    bound,
                    slack: bound as i64 - tree_degree as i64,
                }
            })
            .collect();
        let worst_slack = rows.iter().map(|r| r.slack).min();
        DegreeReport {
            ok: worst_slack.is_none_or(|s| s >= 0),
            worst_slack,
            rows,
        }
    }

    /// CSV with header `v,deg_g,deg_t,bound,slack`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "v,deg_g,deg_t,bound,slack")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{}",
                r.vertex, r.graph_degree, r.tree_degree, r.bound, r.slack
            )?;
        }
        Ok(())
    }
}

pub fn check_degree_bound(g: &Graph, t: &SpanningTree) -> Result<DegreeReport, TreeDefect> {
    validate_spanning_tree(g, t)?;
    Ok(DegreeReport::from_degrees(g, &t.degree))
}

/// Vertices breaking `deg_T(u) <= in(u) + 1 <= ⌈deg_G(u)/2⌉ + 1`.
pub fn in_degree_chain_violations(
    g: &Graph,
    t: &SpanningTree,
    stats: &OrientationStats,
) -> Vec<VertexId> {
    (0..g.vertex_count())
        .filter(|&u| {
            let in_count = stats.in_count[u];
            !(t.degree[u] <= in_count + 1 && in_count < ceiling_bound(g.degree(u)))
        })
        .collect()
}
