//! Spanning-tree construction from an edge DFS.
//!
//! Starting from a single root, the tree repeatedly absorbs an edge whose
//! traversal item `(u, v)` points *into* the tree: `u` outside, `v` inside.
//! Candidates come from a FIFO queue seeded with every item touching the root;
//! whenever a vertex joins, every item touching it is appended. Each vertex
//! enqueues its items once, so the queue sees exactly `2m` items and the whole
//! build is linear.
//!
//! A vertex can only join through an item it is the tail of, and only once, so
//! each vertex keeps at most one outgoing tree edge. Combined with the in/out
//! balance of the traversal this gives `deg_T(v) <= ⌈deg_G(v)/2⌉ + 1`.

use std::collections::VecDeque;
use std::io::{self, Write};

use bytemuck::Zeroable;
use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::dsu::Dsu;
use crate::edge_dfs::{
    compute_edge_dfs, validate_edge_dfs, EdgeDfsError, EdgeDfsList, TraversalItem,
};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::mem::{large_zeroed_vec, prefetch};
use crate::verify::{check_degree_bound, find_bridges, DegreeReport, TreeDefect};

/// A rooted spanning tree (or a candidate for one).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: VertexId,
    /// Tree edges in the order they were added.
    pub edges: Vec<EdgeId>,
    /// `(parent, via edge)` for every vertex except the root.
    pub parent: Vec<Option<(VertexId, EdgeId)>>,
    pub degree: Vec<usize>,
}

impl SpanningTree {
    /// Derives parent links and degrees from a bare edge list. Edges that are
    /// out of range or unreachable from `root` leave the affected records
    /// unset, so [`validate_spanning_tree`](crate::verify::validate_spanning_tree)
    /// reports them.
    pub fn from_edges(g: &Graph, root: VertexId, edges: Vec<EdgeId>) -> Self {
        let n = g.vertex_count();
        let m = g.edge_count();
        let mut degree = vec![0; n];
        let mut incident: Vec<Vec<(VertexId, EdgeId)>> = vec![Vec::new(); n];
        for &e in edges.iter().filter(|&&e| e < m) {
            let (u, v) = g.endpoints(e);
            degree[u] += 1;
            degree[v] += 1;
            incident[u].push((v, e));
            incident[v].push((u, e));
        }
        let mut parent = vec![None; n];
        if root < n {
            let mut seen = vec![false; n];
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &(w, e) in &incident[v] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some((v, e));
                        queue.push_back(w);
                    }
                }
            }
        }
        SpanningTree {
            root,
            edges,
            parent,
            degree,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.degree.len()
    }
}

/// One tree extension: item `item` of the traversal brought `vertex` in
/// through `edge`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Addition {
    pub item: usize,
    pub edge: EdgeId,
    pub vertex: VertexId,
}

/// Queue accounting for one build.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuilderTrace {
    pub additions: Vec<Addition>,
    pub enqueue_count: usize,
    pub dequeue_count: usize,
    /// In checked mode: every discarded item with the number of additions made
    /// before it was discarded. Empty otherwise.
    pub discards: Vec<(usize, usize)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("root {root} out of range for {n} vertices")]
    RootOutOfRange { root: VertexId, n: usize },
    #[error("traversal has {found} items but the graph has {expected} edges")]
    ListLength { found: usize, expected: usize },
    #[error("traversal item {0} does not match the graph")]
    BadItem(usize),
    #[error("candidate queue ran dry with {spanned} of {n} vertices in the tree; the graph is not 2-edge-connected or the traversal is invalid")]
    QueueExhausted { spanned: usize, n: usize },
    #[error("graph with {n} vertices and {m} edges exceeds the 32-bit working arrays")]
    TooLarge { n: usize, m: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Builds the spanning tree by FIFO candidate selection.
///
/// With `checked`, every addition is checked for acyclicity, every discard is
/// recorded in the trace, and the one-outgoing-edge rule is asserted; failures
/// surface as [`BuildError::Invariant`].
pub fn build_spanning_tree(
    g: &Graph,
    list: &EdgeDfsList,
    root: VertexId,
    checked: bool,
) -> Result<(SpanningTree, BuilderTrace), BuildError> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if root >= n {
        return Err(BuildError::RootOutOfRange { root, n });
    }
    let items = list.items();
    if items.len() != m {
        return Err(BuildError::ListLength {
            found: items.len(),
            expected: m,
        });
    }

    if n > u32::MAX as usize || 2 * m > u32::MAX as usize {
        return Err(BuildError::TooLarge { n, m });
    }

    let offsets: Vec<u32> = g.offsets().iter().map(|&o| o as u32).collect();
    let touching = group_by_vertex(items, &offsets)?;
    let joining = |v: usize| &touching[offsets[v] as usize..offsets[v + 1] as usize];

    let mut in_tree = FixedBitSet::with_capacity(n);
    let mut trace = BuilderTrace {
        additions: Vec::with_capacity(n.saturating_sub(1)),
        ..BuilderTrace::default()
    };
    // Head of each addition's item, parallel to `trace.additions`.
    let mut heads: Vec<u32> = Vec::with_capacity(n.saturating_sub(1));
    // The candidate queue is the concatenation of Z(u) over joined vertices
    // in join order, so it is kept as the list of joined vertices plus a read
    // position inside the block currently being drained.
    let mut joined: Vec<u32> = Vec::with_capacity(n);
    let mut block = 0;
    let mut block_items: &[Touch] = joining(root);
    let mut next_in_block = 0;
    let mut dsu = checked.then(|| Dsu::new(n));
    let enqueued = |joined: &[u32]| {
        joining(root).len()
            + joined
                .iter()
                .map(|&u| joining(u as usize).len())
                .sum::<usize>()
    };

    in_tree.insert(root);
    let mut spanned = 1;

    while spanned < n {
        while next_in_block == block_items.len() {
            let Some(&u) = joined.get(block) else {
                trace.enqueue_count = enqueued(&joined);
                return Err(BuildError::QueueExhausted { spanned, n });
            };
            if let Some(&ahead) = joined.get(block + BLOCK_PREFETCH) {
                let z = joining(ahead as usize);
                if let (Some(first), Some(last)) = (z.first(), z.last()) {
                    prefetch(first);
                    prefetch(last);
                }
            }
            if let Some(&ahead) = joined.get(block + 2 * BLOCK_PREFETCH) {
                prefetch(&offsets[ahead as usize]);
            }
            block += 1;
            block_items = joining(u as usize);
            next_in_block = 0;
        }
        let t = block_items[next_in_block];
        next_in_block += 1;
        trace.dequeue_count += 1;
        let (i, u, v) = (t.item as usize, t.tail as usize, t.head as usize);
        if in_tree.contains(u) || !in_tree.contains(v) {
            if checked {
                // Everything in the queue touches a tree vertex, so a
                // discarded item always has its tail inside already.
                if !in_tree.contains(u) {
                    return Err(BuildError::Invariant(format!(
                        "item {i} discarded with neither endpoint in the tree"
                    )));
                }
                trace.discards.push((i, trace.additions.len()));
            }
            continue;
        }

        let edge = t.edge as usize;
        if let Some(dsu) = dsu.as_mut() {
            if !dsu.union(u, v) {
                return Err(BuildError::Invariant(format!(
                    "adding edge {edge} would close a cycle"
                )));
            }
        }
        in_tree.insert(u);
        spanned += 1;
        trace.additions.push(Addition {
            item: i,
            edge,
            vertex: u,
        });
        heads.push(t.head);
        joined.push(u as u32);
    }
    trace.enqueue_count = enqueued(&joined);

    let (parent, degree) = tree_records(n, &trace.additions, &heads);
    let tree_edges = trace.additions.iter().map(|a| a.edge).collect();

    let tree = SpanningTree {
        root,
        edges: tree_edges,
        parent,
        degree,
    };
    if checked {
        check_trace(list, &tree, &trace)?;
    }
    Ok((tree, trace))
}

/// Items touching each vertex, in list order, stored contiguously: Z(v) is
/// `touching[offsets[v]..offsets[v + 1]]`. A traversal covers every edge
/// once, so Z(v) has deg(v) entries and the graph's offsets delimit the
/// blocks; an item that would overfill a block is reported as bad.
///
/// Entries are first streamed into buckets of consecutive vertices, then
/// placed within each bucket, so neither pass scatters across the whole
/// array.
fn group_by_vertex(items: &[TraversalItem], offsets: &[u32]) -> Result<Vec<Touch>, BuildError> {
    let n = offsets.len() - 1;
    let total = offsets[n] as usize;
    let (shift, buckets) = bucket_geometry(n);
    let bucket_start = |b: usize| offsets[(b << shift).min(n)];

    // Staged entries mark in the top bit of `item` whether they were filed
    // under the head rather than the tail.
    let mut staged: Vec<Touch> = large_zeroed_vec(total);
    let mut bucket_fill: Vec<u32> = (0..buckets).map(bucket_start).collect();
    for (i, a) in items.iter().enumerate() {
        if a.tail >= n || a.head >= n || a.tail == a.head {
            return Err(BuildError::BadItem(i));
        }
        let t = Touch {
            item: i as u32,
            tail: a.tail as u32,
            head: a.head as u32,
            edge: a.edge as u32,
        };
        for (v, side) in [(a.tail, 0), (a.head, FILED_UNDER_HEAD)] {
            let b = v >> shift;
            if bucket_fill[b] == bucket_start(b + 1) {
                return Err(BuildError::BadItem(i));
            }
            staged[bucket_fill[b] as usize] = Touch {
                item: t.item | side,
                ..t
            };
            bucket_fill[b] += 1;
        }
    }

    drop(bucket_fill);
    let mut touching: Vec<Touch> = large_zeroed_vec(total);
    let mut fill = offsets[..n].to_vec();
    for &s in &staged {
        let t = Touch {
            item: s.item & !FILED_UNDER_HEAD,
            ..s
        };
        let v = if s.item & FILED_UNDER_HEAD != 0 {
            t.head
        } else {
            t.tail
        } as usize;
        if fill[v] == offsets[v + 1] {
            return Err(BuildError::BadItem(t.item as usize));
        }
        touching[fill[v] as usize] = t;
        fill[v] += 1;
    }
    Ok(touching)
}

/// Buckets of `2^shift` consecutive vertices, about 512 of them.
fn bucket_geometry(n: usize) -> (u32, usize) {
    const BUCKET_BITS: u32 = 9;
    let shift = (usize::BITS - n.leading_zeros()).saturating_sub(BUCKET_BITS);
    (shift, ((n >> shift) + 1).min(n.max(1)))
}

/// Parent links and tree degrees from the additions, written bucket by
/// bucket. The items added while one block is drained all have that block's
/// vertex as head, so each head shows up as a single run in `heads`.
fn tree_records(
    n: usize,
    additions: &[Addition],
    heads: &[u32],
) -> (Vec<Option<(VertexId, EdgeId)>>, Vec<usize>) {
    let (shift, buckets) = bucket_geometry(n);
    let runs = || {
        heads
            .chunk_by(|a, b| a == b)
            .map(|r| (r[0], r.len() as u32))
    };

    let mut start = vec![0u32; buckets + 1];
    for a in additions {
        start[(a.vertex >> shift) + 1] += 1;
    }
    for (v, _) in runs() {
        start[(v as usize >> shift) + 1] += 1;
    }
    for b in 0..buckets {
        start[b + 1] += start[b];
    }

    let mut staged: Vec<Record> = large_zeroed_vec(start[buckets] as usize);
    let mut fill = start;
    let mut file = |v: usize, r: Record| {
        let slot = &mut fill[v >> shift];
        staged[*slot as usize] = r;
        *slot += 1;
    };
    for (a, &v) in additions.iter().zip(heads) {
        file(
            a.vertex,
            Record {
                vertex: a.vertex as u32,
                other: v,
                edge: a.edge as u32,
            },
        );
    }
    for (v, len) in runs() {
        file(
            v as usize,
            Record {
                vertex: v,
                other: len,
                edge: CHILD_COUNT,
            },
        );
    }

    let mut parent = vec![None; n];
    let mut degree = vec![0usize; n];
    for r in &staged {
        let u = r.vertex as usize;
        if r.edge == CHILD_COUNT {
            degree[u] += r.other as usize;
        } else {
            parent[u] = Some((r.other as usize, r.edge as usize));
            degree[u] += 1;
        }
    }
    (parent, degree)
}

/// Staged tree record: a parent link, or a child count when `edge` is
/// `CHILD_COUNT`.
#[derive(Clone, Copy, Default, Zeroable)]
struct Record {
    vertex: u32,
    other: u32,
    edge: u32,
}

const CHILD_COUNT: u32 = u32::MAX;

/// Item indices stay below 2^31, leaving the top bit free.
const FILED_UNDER_HEAD: u32 = 1 << 31;

/// How many blocks ahead of the read position the queue prefetches.
const BLOCK_PREFETCH: usize = 16;

#[derive(Clone, Copy, Default, Zeroable)]
struct Touch {
    item: u32,
    tail: u32,
    head: u32,
    edge: u32,
}

/// Replays a trace against its traversal: each added vertex joins once,
/// through an item it is the tail of, and every recorded discard had its tail
/// in the tree at discard time.
pub fn check_trace(
    list: &EdgeDfsList,
    tree: &SpanningTree,
    trace: &BuilderTrace,
) -> Result<(), BuildError> {
    let n = tree.vertex_count();
    let items = list.items();
    // joined_at[v] = number of additions after which v is in the tree.
    let mut joined_at = vec![usize::MAX; n];
    joined_at[tree.root] = 0;
    for (k, add) in trace.additions.iter().enumerate() {
        let a = items[add.item];
        if a.tail != add.vertex || a.edge != add.edge {
            return Err(BuildError::Invariant(format!(
                "addition {k} does not match item {}",
                add.item
            )));
        }
        if joined_at[add.vertex] != usize::MAX {
            return Err(BuildError::Invariant(format!(
                "vertex {} joined twice",
                add.vertex
            )));
        }
        if joined_at[a.head] > k {
            return Err(BuildError::Invariant(format!(
                "addition {k} attached to vertex {} before it joined",
                a.head
            )));
        }
        joined_at[add.vertex] = k + 1;
    }
    for &(i, made) in &trace.discards {
        if joined_at[items[i].tail] > made {
            return Err(BuildError::Invariant(format!(
                "item {i} discarded although its tail was outside the tree"
            )));
        }
    }
    if trace.dequeue_count > trace.enqueue_count {
        return Err(BuildError::Invariant("more dequeues than enqueues".into()));
    }
    Ok(())
}

/// Options for [`low_degree_spanning_tree`].
#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Start vertex of the edge DFS (default 0).
    pub start: VertexId,
    /// Tree root; defaults to `start`.
    pub root: Option<VertexId>,
    /// Skip the 2-edge-connectivity check.
    pub force: bool,
    /// Run per-step invariant checks and certify the result.
    pub checked: bool,
}

#[derive(Debug)]
pub struct Solution {
    pub tree: SpanningTree,
    pub report: DegreeReport,
    /// `None` only for the single-vertex graph, which has nothing to traverse.
    pub traversal: Option<EdgeDfsList>,
    pub trace: BuilderTrace,
    /// The input had one vertex and the tree is just the root.
    pub trivial: bool,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("graph is not 2-edge-connected: {}", describe_defect(.bridges, *.components))]
    NotTwoEdgeConnected {
        /// Bridges as `(edge, u, v)`.
        bridges: Vec<(EdgeId, VertexId, VertexId)>,
        components: usize,
    },
    #[error(transparent)]
    Traversal(#[from] EdgeDfsError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("result failed certification: {0}")]
    Certification(String),
}

impl SolveError {
    /// Failures caused by the input rather than by this crate.
    pub fn is_precondition(&self) -> bool {
        !matches!(
            self,
            SolveError::Build(BuildError::Invariant(_)) | SolveError::Certification(_)
        )
    }
}

fn describe_defect(bridges: &[(EdgeId, VertexId, VertexId)], components: usize) -> String {
    let mut parts = Vec::new();
    if components > 1 {
        parts.push(format!("{components} connected components"));
    }
    if !bridges.is_empty() {
        let listed: Vec<String> = bridges
            .iter()
            .map(|(e, u, v)| format!("e{e}={{{u},{v}}}"))
            .collect();
        parts.push(format!("bridges {}", listed.join(", ")));
    }
    if parts.is_empty() {
        parts.push("fewer than two vertices".into());
    }
    parts.join("; ")
}

/// Finds a spanning tree with `deg_T(v) <= ⌈deg_G(v)/2⌉ + 1` for every vertex
/// of a 2-edge-connected graph, in `O(n + m)` time.
pub fn low_degree_spanning_tree(g: &Graph, opts: SolveOptions) -> Result<Solution, SolveError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(SolveError::Empty);
    }
    let root = opts.root.unwrap_or(opts.start);
    for vertex in [opts.start, root] {
        if vertex >= n {
            return Err(SolveError::VertexOutOfRange { vertex, n });
        }
    }
    if n == 1 {
        let tree = SpanningTree::from_edges(g, 0, Vec::new());
        let report = DegreeReport::from_degrees(g, &tree.degree);
        return Ok(Solution {
            tree,
            report,
            traversal: None,
            trace: BuilderTrace::default(),
            trivial: true,
        });
    }

    if !opts.force {
        let components = g.component_count();
        let bridges = find_bridges(g);
        if components > 1 || !bridges.is_empty() {
            return Err(SolveError::NotTwoEdgeConnected {
                bridges: bridges
                    .into_iter()
                    .map(|e| {
                        let (u, v) = g.endpoints(e);
                        (e, u, v)
                    })
                    .collect(),
                components,
            });
        }
    }

    let traversal = compute_edge_dfs(g, opts.start)?;
    if opts.checked {
        validate_edge_dfs(g, &traversal)
            .map_err(|v| SolveError::Certification(format!("edge DFS: {v}")))?;
    }
    let (tree, trace) = build_spanning_tree(g, &traversal, root, opts.checked)?;

    let report = if opts.checked {
        check_degree_bound(g, &tree)
            .map_err(|d: TreeDefect| SolveError::Certification(format!("spanning tree: {d}")))?
    } else {
        DegreeReport::from_degrees(g, &tree.degree)
    };
    if opts.checked && trace.enqueue_count != 2 * g.edge_count() {
        return Err(SolveError::Certification(format!(
            "{} items enqueued, expected {}",
            trace.enqueue_count,
            2 * g.edge_count()
        )));
    }
    if !report.ok {
        return Err(SolveError::Certification(format!(
            "degree bound exceeded (worst slack {})",
            report.worst_slack.unwrap_or(0)
        )));
    }
    Ok(Solution {
        tree,
        report,
        traversal: Some(traversal),
        trace,
        trivial: false,
    })
}

/// Tree file: `t <root> <n>`, one `e <u> <v> <edge>` line per addition
/// (`u` the joining vertex), then `c degrees:` and `d <v> <deg_T> <bound>`.
pub fn write_tree<W: Write>(
    mut out: W,
    g: &Graph,
    tree: &SpanningTree,
    report: &DegreeReport,
) -> io::Result<()> {
    writeln!(out, "t {} {}", tree.root, g.vertex_count())?;
    for &e in &tree.edges {
        let (a, b) = g.endpoints(e);
        // Orient as (joining vertex, tree vertex) when parent links say so.
        let (u, v) = match tree.parent.get(a) {
            Some(Some((p, pe))) if *pe == e && *p == b => (a, b),
            _ => (b, a),
        };
        writeln!(out, "e {u} {v} {e}")?;
    }
    writeln!(out, "c degrees:")?;
    for r in &report.rows {
        writeln!(out, "d {} {} {}", r.vertex, r.tree_degree, r.bound)?;
    }
    Ok(())
}

#[derive(Debug, Error)]
pub enum TreeParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("missing `t <root> <n>` header")]
    MissingHeader,
    #[error("tree file is for {found} vertices, graph has {expected}")]
    VertexCount { found: usize, expected: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Reads the format produced by [`write_tree`]. `d` lines are syntax-checked
/// only; degrees are always recomputed from the edges.
pub fn read_tree<R: io::BufRead>(reader: R, g: &Graph) -> Result<SpanningTree, TreeParseError> {
    let mut root = None;
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let malformed = |msg: String| TreeParseError::Malformed { line: lineno, msg };
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.is_empty() || line == "c" || line.starts_with("c ") {
            continue;
        }
        let mut fields = line.split_ascii_whitespace();
        let tag = fields.next().unwrap_or("");
        let nums = fields
            .map(|f| {
                f.parse::<usize>()
                    .map_err(|_| malformed(format!("`{f}` is not an integer")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        match (tag, nums.as_slice(), root) {
            ("t", &[r, n], None) => {
                if n != g.vertex_count() {
                    return Err(TreeParseError::VertexCount {
                        found: n,
                        expected: g.vertex_count(),
                    });
                }
                root = Some(r);
            }
            ("t", _, Some(_)) => return Err(malformed("duplicate header".into())),
            ("e" | "d", _, None) => return Err(TreeParseError::MissingHeader),
            ("e", &[u, v, e], Some(_)) => {
                if e < g.edge_count() {
                    let (a, b) = g.endpoints(e);
                    if (u, v) != (a, b) && (u, v) != (b, a) {
                        return Err(malformed(format!("edge {e} does not join {u} and {v}")));
                    }
                }
                edges.push(e);
            }
            ("d", &[_, _, _], Some(_)) => {}
            _ => return Err(malformed(format!("unexpected line `{line}`"))),
        }
    }
    let root = root.ok_or(TreeParseError::MissingHeader)?;
    Ok(SpanningTree::from_edges(g, root, edges))
}
