//! Edge depth-first traversal: an ordering of *all* edges as directed items
//! in which the walk continues from the vertex it just reached whenever that
//! vertex still has untraversed edges, and otherwise resumes at the most
//! recently reached vertex that does.
//!
//! The start vertex counts as reached before the first item, so a walk may
//! resume there. On bridgeless graphs this never happens before the walk
//! re-enters the start vertex, which makes the extension invisible.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{self, Write};

use thiserror::Error;

use crate::graph::{EdgeId, Graph, VertexId};
use crate::mem::{large_vec, prefetch};

/// One directed traversal of an edge, from `tail` to `head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TraversalItem {
    pub tail: VertexId,
    pub head: VertexId,
    pub edge: EdgeId,
}

impl TraversalItem {
    pub fn new(tail: VertexId, head: VertexId, edge: EdgeId) -> Self {
        TraversalItem { tail, head, edge }
    }

    pub fn touches(&self, v: VertexId) -> bool {
        self.tail == v || self.head == v
    }
}

/// An ordered edge traversal. Construct with [`compute_edge_dfs`] or
/// [`EdgeDfsList::from_items`] (unchecked; see [`validate_edge_dfs`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDfsList {
    items: Vec<TraversalItem>,
}

impl EdgeDfsList {
    pub fn from_items(items: Vec<TraversalItem>) -> Self {
        EdgeDfsList { items }
    }

    pub fn items(&self) -> &[TraversalItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn start_vertex(&self) -> Option<VertexId> {
        self.items.first().map(|a| a.tail)
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "l {}", self.items.len())?;
        for a in &self.items {
            writeln!(out, "{} {} {}", a.tail, a.head, a.edge)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EdgeDfsError {
    #[error("graph has no edges")]
    NoEdges,
    #[error("start vertex {start} out of range for {n} vertices")]
    StartOutOfRange { start: VertexId, n: usize },
    #[error("graph is disconnected: only {reached} of {m} edges reachable from the start vertex")]
    Disconnected { reached: usize, m: usize },
    #[error("graph with {n} vertices and {m} edges exceeds the 32-bit working arrays")]
    TooLarge { n: usize, m: usize },
}

/// Work counters from one run of [`compute_edge_dfs_counted`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DfsWork {
    pub cursor_advances: usize,
    pub stack_pops: usize,
}

impl DfsWork {
    pub fn total(&self) -> usize {
        self.cursor_advances + self.stack_pops
    }
}

/// Computes the edge DFS starting at `start`, always taking the untraversed
/// incident edge with the lowest adjacency position.
pub fn compute_edge_dfs(g: &Graph, start: VertexId) -> Result<EdgeDfsList, EdgeDfsError> {
    compute_edge_dfs_counted(g, start).map(|(list, _)| list)
}

pub fn compute_edge_dfs_counted(
    g: &Graph,
    start: VertexId,
) -> Result<(EdgeDfsList, DfsWork), EdgeDfsError> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if m == 0 {
        return Err(EdgeDfsError::NoEdges);
    }
    if start >= n {
        return Err(EdgeDfsError::StartOutOfRange { start, n });
    }
    if n + 2 * m >= USED as usize {
        return Err(EdgeDfsError::TooLarge { n, m });
    }

    // Working copy of the adjacency in one flat array of cells. Vertex `v`
    // owns a header cell at `v + offsets[v]` followed by one slot cell per
    // incidence, so a vertex's cursor sits next to the slots it scans. The
    // traversed flag of an edge lives in both of its slots.
    let (incidences, twins) = g.incidences_with_twins();
    let offsets = g.offsets();
    let header: Vec<u32> = (0..n).map(|v| (v + offsets[v]) as u32).collect();
    let mut cells: Vec<Cell> = large_vec(n + 2 * m);
    for v in 0..n {
        let h = header[v];
        let deg = (offsets[v + 1] - offsets[v]) as u32;
        cells.push([h + 1, h + 1 + deg, v as u32, 0]);
        for p in offsets[v]..offsets[v + 1] {
            if let Some(ahead) = incidences.get(p + PREFETCH_DISTANCE) {
                prefetch(&header[ahead.neighbor]);
            }
            let w = incidences[p].neighbor;
            cells.push([
                header[w],
                w as u32,
                incidences[p].edge as u32,
                (w + twins[p] + 1) as u32,
            ]);
        }
    }

    let mut work = DfsWork::default();
    // Header cells in arrival order; a vertex appears once per arrival.
    let mut stack: Vec<u32> = large_vec(m + 1);
    let mut items = large_vec(m);

    // Cell of the first untraversed slot after header `h`, advancing the
    // cursor stored in the header.
    let next_slot = |h: usize, cells: &mut [Cell], work: &mut DfsWork| {
        let [mut pos, end, ..] = cells[h];
        while pos < end && cells[pos as usize][TWIN] & USED != 0 {
            pos += 1;
            work.cursor_advances += 1;
        }
        cells[h][0] = pos;
        (pos < end).then_some(pos as usize)
    };

    let mut current = header[start] as usize;
    stack.push(current as u32);
    loop {
        if let Some(p) = next_slot(current, &mut cells, &mut work) {
            let [next, next_vertex, edge, twin] = cells[p];
            cells[p][TWIN] |= USED;
            cells[twin as usize][TWIN] |= USED;
            let tail = cells[current][VERTEX] as usize;
            items.push(TraversalItem::new(
                tail,
                next_vertex as usize,
                edge as usize,
            ));
            stack.push(next);
            current = next as usize;
            continue;
        }

        // `current` is exhausted: resume at the latest arrival with work left.
        // Popped vertices are exhausted and stay exhausted.
        stack.pop();
        work.stack_pops += 1;
        let resumed = loop {
            let Some(&top) = stack.last() else {
                break None;
            };
            if next_slot(top as usize, &mut cells, &mut work).is_some() {
                break Some(top as usize);
            }
            stack.pop();
            work.stack_pops += 1;
        };
        match resumed {
            Some(h) => current = h,
            None => break,
        }
    }

    if items.len() != m {
        return Err(EdgeDfsError::Disconnected {
            reached: items.len(),
            m,
        });
    }
    Ok((EdgeDfsList { items }, work))
}

/// Header cell: `[cursor, end, vertex, 0]`. Slot cell: `[neighbor header,
/// neighbor, edge, twin slot | USED]`.
type Cell = [u32; 4];

const VERTEX: usize = 2;
const PREFETCH_DISTANCE: usize = 16;
const TWIN: usize = 3;
/// Traversed flag, kept in the top bit of a slot's twin field.
const USED: u32 = 1 << 31;

/// The edge-DFS condition an item breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// Item endpoints do not match its edge.
    Endpoints,
    /// An edge is repeated or missing.
    Coverage,
    /// The item does not continue from the vertex the traversal must resume at.
    Continuation,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Endpoints => "(i) endpoints",
            Condition::Coverage => "(ii) coverage",
            Condition::Continuation => "(iii) continuation",
        })
    }
}

/// First violation found by [`validate_edge_dfs`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("item {index}: condition {condition} violated: {detail}")]
pub struct DfsViolation {
    /// 0-based position of the offending item (for a missing edge, the list length).
    pub index: usize,
    pub condition: Condition,
    pub detail: String,
}

/// Checks an arbitrary candidate list against the three edge-DFS conditions.
/// Tie-break agnostic: any untraversed edge at the required vertex is accepted.
pub fn validate_edge_dfs(g: &Graph, list: &EdgeDfsList) -> Result<(), DfsViolation> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut seen = vec![false; m];
    // Untraversed incident edges per vertex after the current prefix.
    let mut remaining: Vec<usize> = g.degrees().collect();
    let items = list.items();

    for (j, a) in items.iter().enumerate() {
        let violation = |condition, detail: String| DfsViolation {
            index: j,
            condition,
            detail,
        };
        if a.edge >= m || a.tail >= n || a.head >= n {
            return Err(violation(
                Condition::Endpoints,
                format!("({}, {}, e{}) is out of range", a.tail, a.head, a.edge),
            ));
        }
        let (x, y) = g.endpoints(a.edge);
        if !((a.tail, a.head) == (x, y) || (a.tail, a.head) == (y, x)) {
            return Err(violation(
                Condition::Endpoints,
                format!(
                    "({}, {}) is not edge e{} = {{{x}, {y}}}",
                    a.tail, a.head, a.edge
                ),
            ));
        }
        if seen[a.edge] {
            return Err(violation(
                Condition::Coverage,
                format!("edge e{} traversed twice", a.edge),
            ));
        }

        if j > 0 {
            match required_tail(items, j, &remaining) {
                Some(v) if v == a.tail => {}
                Some(v) => {
                    return Err(violation(
                        Condition::Continuation,
                        format!("traversal must continue from vertex {v}, not {}", a.tail),
                    ))
                }
                None => {
                    return Err(violation(
                        Condition::Continuation,
                        "no reached vertex has untraversed edges".into(),
                    ))
                }
            }
        }

        seen[a.edge] = true;
        remaining[a.tail] -= 1;
        remaining[a.head] -= 1;
    }

    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(DfsViolation {
            index: items.len(),
            condition: Condition::Coverage,
            detail: format!("edge e{missing} never traversed"),
        });
    }
    Ok(())
}

/// Vertex the item at `j` must leave from, given `remaining` counts for the
/// prefix of length `j`. The item's own edge is untraversed and incident to
/// its tail by the checks that precede this one.
fn required_tail(items: &[TraversalItem], j: usize, remaining: &[usize]) -> Option<VertexId> {
    let last_head = items[j - 1].head;
    if remaining[last_head] > 0 {
        return Some(last_head);
    }
    items[..j - 1]
        .iter()
        .rev()
        .map(|a| a.head)
        .chain(std::iter::once(items[0].tail))
        .find(|&v| remaining[v] > 0)
}

/// How consecutive items are related.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    /// The next item leaves from the head of this one.
    Cross,
    /// The next item resumes at an earlier vertex.
    Backtrack,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepClassification {
    /// `kinds[i]` relates item `i` to item `i + 1`.
    pub kinds: Vec<StepKind>,
    /// Heads of items followed by a backtrack, plus the head of the last item.
    pub finals: BTreeSet<VertexId>,
}

pub fn classify_steps(g: &Graph, list: &EdgeDfsList) -> Result<StepClassification, DfsViolation> {
    validate_edge_dfs(g, list)?;
    let items = list.items();
    let mut kinds = Vec::with_capacity(items.len().saturating_sub(1));
    let mut finals = BTreeSet::new();
    for pair in items.windows(2) {
        if pair[0].head == pair[1].tail {
            kinds.push(StepKind::Cross);
        } else {
            kinds.push(StepKind::Backtrack);
            finals.insert(pair[0].head);
        }
    }
    if let Some(last) = items.last() {
        finals.insert(last.head);
    }
    Ok(StepClassification { kinds, finals })
}
