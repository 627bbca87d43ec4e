//! Undirected multigraph with stable edge identities, plus the plain-text
//! edge-list format used by every tool in this crate.
//!
//! ```text
//! c optional comment
//! p <n> <m>
//! e <u> <v>      (exactly m lines, 0 <= u, v < n, u != v)
//! ```

use std::fmt;
use std::io::{self, BufRead, Write};

use thiserror::Error;

/// Dense vertex identifier in `0..n`.
pub type VertexId = usize;
/// Position of an edge in the graph's edge list, in `0..m`.
pub type EdgeId = usize;

/// One entry of an adjacency list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Incidence {
    pub neighbor: VertexId,
    pub edge: EdgeId,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} references vertex {vertex}, but the graph has {n} vertices")]
    VertexOutOfRange {
        edge: EdgeId,
        vertex: VertexId,
        n: usize,
    },
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    NoSuchVertex { vertex: VertexId, n: usize },
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error("missing `p <n> <m>` header")]
    MissingHeader,
    #[error("expected {expected} edge lines, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Immutable undirected multigraph.
///
/// Adjacency is stored in compressed form: the incidences of vertex `v` are
/// `incidences[offsets[v]..offsets[v + 1]]`, in edge-list order.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    offsets: Vec<usize>,
    incidences: Vec<Incidence>,
    /// `twin[p]` is the position of the other incidence of the same edge.
    twin: Vec<usize>,
}

impl Graph {
    /// Builds a graph from an edge list. Parallel edges are kept; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Self, GraphError> {
        let mut degree = vec![0usize; n];
        for (edge, &(u, v)) in edges.iter().enumerate() {
            for vertex in [u, v] {
                if vertex >= n {
                    return Err(GraphError::VertexOutOfRange { edge, vertex, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { edge, vertex: u });
            }
            degree[u] += 1;
            degree[v] += 1;
        }

        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut incidences = vec![
            Incidence {
                neighbor: 0,
                edge: 0
            };
            2 * edges.len()
        ];
        let mut twin = vec![0; 2 * edges.len()];
        for (edge, &(u, v)) in edges.iter().enumerate() {
            let (pu, pv) = (fill[u], fill[v]);
            incidences[pu] = Incidence { neighbor: v, edge };
            incidences[pv] = Incidence { neighbor: u, edge };
            twin[pu] = pv;
            twin[pv] = pu;
            fill[u] += 1;
            fill[v] += 1;
        }

        Ok(Graph {
            n,
            edges,
            offsets,
            incidences,
            twin,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    /// Endpoints of edge `e` in the order they were given.
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// Incident edges of `v` in insertion order.
    pub fn adjacency(&self, v: VertexId) -> &[Incidence] {
        &self.incidences[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Start of `v`'s incidences in the flat incidence array.
    pub(crate) fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Flat incidence array with, for each position, the position of the
    /// same edge's other incidence.
    pub(crate) fn incidences_with_twins(&self) -> (&[Incidence], &[usize]) {
        (&self.incidences, &self.twin)
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency(v).iter().map(|inc| inc.neighbor)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.offsets.windows(2).map(|w| w[1] - w[0])
    }

    /// Number of connected components (isolated vertices count as one each).
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut stack = Vec::new();
        let mut components = 0;
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            components += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// `⌈deg(v)/2⌉ + 1`, the per-vertex tree degree this crate guarantees.
    pub fn degree_ceiling_bound(&self, v: VertexId) -> Result<usize, GraphError> {
        if v >= self.n {
            return Err(GraphError::NoSuchVertex {
                vertex: v,
                n: self.n,
            });
        }
        Ok(ceiling_bound(self.degree(v)))
    }

    /// Parses the edge-list format. Errors carry 1-based line numbers.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self, ParseError> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();

        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.is_empty() || line == "c" || line.starts_with("c ") {
                continue;
            }
            let malformed = |msg: &str| ParseError::Malformed {
                line: lineno,
                msg: msg.to_string(),
            };
            let mut fields = line.split_ascii_whitespace();
            let tag = fields.next().unwrap_or("");
            let a = parse_field(fields.next(), lineno)?;
            let b = parse_field(fields.next(), lineno)?;
            if fields.next().is_some() {
                return Err(malformed("trailing fields"));
            }
            match (tag, header) {
                ("p", None) => {
                    header = Some((a, b));
                    edges.reserve(b.min(1 << 20));
                }
                ("p", Some(_)) => return Err(malformed("duplicate header")),
                ("e", None) => return Err(ParseError::MissingHeader),
                ("e", Some((n, m))) => {
                    if edges.len() == m {
                        return Err(malformed("more edge lines than announced in header"));
                    }
                    let edge = edges.len();
                    for vertex in [a, b] {
                        if vertex >= n {
                            return Err(ParseError::Invalid {
                                line: lineno,
                                source: GraphError::VertexOutOfRange { edge, vertex, n },
                            });
                        }
                    }
                    if a == b {
                        return Err(ParseError::Invalid {
                            line: lineno,
                            source: GraphError::SelfLoop { edge, vertex: a },
                        });
                    }
                    edges.push((a, b));
                }
                _ => return Err(malformed(&format!("unknown line type `{tag}`"))),
            }
        }

        let (n, m) = header.ok_or(ParseError::MissingHeader)?;
        if edges.len() != m {
            return Err(ParseError::EdgeCount {
                expected: m,
                found: edges.len(),
            });
        }
        // Every edge was checked above.
        Ok(Graph::from_edges(n, edges).expect("validated while parsing"))
    }

    pub fn parse_str(text: &str) -> Result<Self, ParseError> {
        Self::parse(text.as_bytes())
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "p {} {}", self.n, self.edges.len())?;
        for &(u, v) in &self.edges {
            writeln!(out, "e {u} {v}")?;
        }
        Ok(())
    }

    pub fn serialize(&self) -> String {
        let mut buf = Vec::with_capacity(16 * (self.edges.len() + 1));
        self.write_to(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ASCII output")
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

/// `⌈degree/2⌉ + 1` in integer arithmetic.
pub fn ceiling_bound(degree: usize) -> usize {
    degree.div_ceil(2) + 1
}

fn parse_field(field: Option<&str>, line: usize) -> Result<usize, ParseError> {
    let field = field.ok_or_else(|| ParseError::Malformed {
        line,
        msg: "expected two integer fields".into(),
    })?;
    field.parse().map_err(|_| ParseError::Malformed {
        line,
        msg: format!("`{field}` is not a non-negative integer"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_triangle() {
        let g = Graph::parse_str("p 3 3\ne 0 1\ne 1 2\ne 2 0\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(
            g.adjacency(0),
            &[
                Incidence {
                    neighbor: 1,
                    edge: 0
                },
                Incidence {
                    neighbor: 2,
                    edge: 2
                }
            ]
        );
    }

    #[test]
    fn parses_parallel_edges() {
        let g = Graph::parse_str("p 2 2\ne 0 1\ne 0 1\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 1)]);
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.degree(1), 2);
    }

    #[test]
    fn rejects_self_loop_with_line_number() {
        let err = Graph::parse_str("p 2 1\ne 0 0\n").unwrap_err();
        assert!(matches!(
            err,
            ParseError::Invalid {
                line: 2,
                source: GraphError::SelfLoop { vertex: 0, .. }
            }
        ));
    }

    #[test]
    fn reports_parse_errors() {
        assert!(matches!(
            Graph::parse_str("e 0 1\n"),
            Err(ParseError::MissingHeader)
        ));
        assert!(matches!(
            Graph::parse_str(""),
            Err(ParseError::MissingHeader)
        ));
        assert!(matches!(
            Graph::parse_str("p 2 1\ne 0 2\n"),
            Err(ParseError::Invalid { line: 2, .. })
        ));
        assert!(matches!(
            Graph::parse_str("p 2 1\nc note\ne 0 x\n"),
            Err(ParseError::Malformed { line: 3, .. })
        ));
        assert!(matches!(
            Graph::parse_str("p 3 2\ne 0 1\n"),
            Err(ParseError::EdgeCount {
                expected: 2,
                found: 1
            })
        ));
        assert!(matches!(
            Graph::parse_str("p 3 1\ne 0 1\ne 1 2\n"),
            Err(ParseError::Malformed { line: 3, .. })
        ));
    }

    #[test]
    fn comments_anywhere_and_missing_trailing_newline() {
        let g = Graph::parse_str("c hi\np 3 2\nc mid\ne 0 1\ne 1 2").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn serializes() {
        let tri = Graph::from_edges(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(tri.serialize(), "p 3 3\ne 0 1\ne 1 2\ne 2 0\n");
        assert_eq!(Graph::from_edges(0, vec![]).unwrap().serialize(), "p 0 0\n");
        assert_eq!(Graph::from_edges(1, vec![]).unwrap().serialize(), "p 1 0\n");
    }

    #[test]
    fn ceiling_bounds() {
        assert_eq!(ceiling_bound(2), 2);
        assert_eq!(ceiling_bound(5), 4);
        assert_eq!(ceiling_bound(3), 3);
        let g = Graph::from_edges(2, vec![(0, 1)]).unwrap();
        assert_eq!(g.degree_ceiling_bound(0).unwrap(), 2);
        assert!(g.degree_ceiling_bound(2).is_err());
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (2usize..12).prop_flat_map(|n| {
            prop::collection::vec((0..n, 1..n), 0..40).prop_map(move |pairs| {
                let edges = pairs.into_iter().map(|(u, d)| (u, (u + d) % n)).collect();
                Graph::from_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn serialize_parse_roundtrip(g in arb_graph()) {
            let back = Graph::parse_str(&g.serialize()).unwrap();
            prop_assert_eq!(back, g);
        }

        #[test]
        fn degree_sum_is_twice_edge_count(g in arb_graph()) {
            prop_assert_eq!(g.degrees().sum::<usize>(), 2 * g.edge_count());
            for v in 0..g.vertex_count() {
                prop_assert_eq!(g.degree(v), g.adjacency(v).len());
                if g.degree(v) >= 1 {
                    prop_assert!(g.degree_ceiling_bound(v).unwrap() >= 2);
                }
                for inc in g.adjacency(v) {
                    let (a, b) = g.endpoints(inc.edge);
                    prop_assert!((a, b) == (v, inc.neighbor) || (b, a) == (v, inc.neighbor));
                }
            }
        }
    }
}
