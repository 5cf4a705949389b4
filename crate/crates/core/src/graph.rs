//! Simple-graph loading and indexing.
//!
//! Every graph, directed or not, carries an undirected view (`adj`) in which
//! reciprocal arcs collapse into one edge. Frame sampling and degree tables
//! run on that view; directed arcs are only consulted when a sampled vertex
//! set is classified.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::canon::pair_order;

/// Dense vertex index in `[0, n_vertices)`.
pub type VertexId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: expected two vertex labels, found {found} token(s)")]
    Malformed { line: usize, found: usize },
    #[error("edge list contains no edges")]
    Empty,
    #[error("vertex {0} is out of range")]
    OutOfRange(VertexId),
    #[error("vertex {0} appears more than once")]
    RepeatedVertex(VertexId),
    #[error("induced codes are defined for 3 or 4 vertices, got {0}")]
    UnsupportedSize(usize),
}

/// What normalization did to the raw edge list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub lines: usize,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
    pub vertices: usize,
    pub edges: usize,
    pub arcs: usize,
}

/// Neighbor lists stored back to back: the list of `v` is
/// `targets[offsets[v]..offsets[v + 1]]`.
#[derive(Clone, Debug, Default)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
}

impl Csr {
    /// From pairs sorted by `(source, target)` with no repeats.
    fn from_sorted(n: usize, pairs: &[(VertexId, VertexId)]) -> Self {
        let mut offsets = vec![0; n + 1];
        for &(u, _) in pairs {
            offsets[u + 1] += 1;
        }
        for v in 0..n {
            offsets[v + 1] += offsets[v];
        }
        Self {
            offsets,
            targets: pairs.iter().map(|&(_, v)| v).collect(),
        }
    }

    #[inline]
    fn list(&self, v: VertexId) -> &[VertexId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    fn n_vertices(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    directed: bool,
    /// Sorted neighbor lists of the undirected view.
    adj: Csr,
    /// Sorted out-neighbor lists; empty for undirected graphs.
    out: Csr,
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    n_edges: usize,
    n_arcs: usize,
    report: LoadReport,
}

impl Graph {
    /// Builds a graph over `n` vertices labelled `0..n` from index pairs.
    /// Self-loops and repeated pairs are dropped as in [`load_graph`].
    pub fn from_edges(n: usize, directed: bool, edges: &[(VertexId, VertexId)]) -> Self {
        let labels = (0..n).map(|v| v.to_string()).collect();
        let mut report = LoadReport {
            lines: edges.len(),
            ..LoadReport::default()
        };
        let pairs: Vec<_> = edges
            .iter()
            .copied()
            .filter(|&(u, v)| {
                assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} vertices");
                if u == v {
                    report.self_loops_dropped += 1;
                }
                u != v
            })
            .collect();
        Self::build(labels, directed, pairs, report)
    }

    fn build(
        labels: Vec<String>,
        directed: bool,
        mut pairs: Vec<(VertexId, VertexId)>,
        mut report: LoadReport,
    ) -> Self {
        let n = labels.len();
        if !directed {
            for p in pairs.iter_mut() {
                if p.0 > p.1 {
                    *p = (p.1, p.0);
                }
            }
        }
        let before = pairs.len();
        pairs.sort_unstable();
        pairs.dedup();
        report.duplicates_dropped += before - pairs.len();

        let out = if directed {
            Csr::from_sorted(n, &pairs)
        } else {
            Csr::default()
        };
        let mut both: Vec<(VertexId, VertexId)> =
            pairs.iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect();
        both.sort_unstable();
        both.dedup();
        let adj = Csr::from_sorted(n, &both);
        let n_edges = both.len() / 2;
        let n_arcs = if directed { pairs.len() } else { 0 };
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        report.vertices = n;
        report.edges = n_edges;
        report.arcs = n_arcs;
        Self {
            directed,
            adj,
            out,
            labels,
            index,
            n_edges,
            n_arcs,
            report,
        }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn n_vertices(&self) -> usize {
        self.adj.n_vertices()
    }

    /// Edge count of the undirected view.
    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    /// Arc count; zero for undirected graphs.
    pub fn n_arcs(&self) -> usize {
        self.n_arcs
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.offsets[v + 1] - self.adj.offsets[v]
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        self.adj.list(v)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.list(u).binary_search(&v).is_ok()
    }

    /// Arc membership for directed graphs, edge membership otherwise.
    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        if self.directed {
            self.out.list(u).binary_search(&v).is_ok()
        } else {
            self.has_edge(u, v)
        }
    }

    /// Undirected edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n_vertices()).flat_map(move |u| {
            self.adj.list(u).iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn vertex_id(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn load_report(&self) -> &LoadReport {
        &self.report
    }

    /// Writes the graph back out as an edge list using the original labels.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        if self.directed {
            for u in 0..self.n_vertices() {
                for &v in self.out.list(u) {
                    let _ = writeln!(s, "{} {}", self.labels[u], self.labels[v]);
                }
            }
        } else {
            for (u, v) in self.edges() {
                let _ = writeln!(s, "{} {}", self.labels[u], self.labels[v]);
            }
        }
        s
    }

    /// Adjacency bitmask of the subgraph induced on `vertices`, in the
    /// order given.
    ///
    /// Bit `b` corresponds to the `b`-th entry of
    /// [`pair_order`](crate::canon::pair_order): unordered pairs `(i, j)`,
    /// `i < j`, for undirected graphs and ordered pairs `(i, j)`, `i != j`,
    /// for directed ones, both listed lexicographically. Bit 0 is the
    /// least significant.
    pub fn induced_subgraph_code(&self, vertices: &[VertexId]) -> Result<u16, GraphError> {
        if !(3..=4).contains(&vertices.len()) {
            return Err(GraphError::UnsupportedSize(vertices.len()));
        }
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.n_vertices() {
                return Err(GraphError::OutOfRange(v));
            }
            if vertices[..i].contains(&v) {
                return Err(GraphError::RepeatedVertex(v));
            }
        }
        Ok(self.induced_code_unchecked(vertices))
    }

    /// As [`Graph::induced_subgraph_code`] without validating the input.
    pub(crate) fn induced_code_unchecked(&self, vertices: &[VertexId]) -> u16 {
        let mut code = 0u16;
        for (bit, &(i, j)) in pair_order(vertices.len(), self.directed)
            .iter()
            .enumerate()
        {
            if self.has_arc(vertices[i], vertices[j]) {
                code |= 1 << bit;
            }
        }
        code
    }
}

/// Parses a whitespace-separated edge list. Lines starting with `#` and
/// blank lines are skipped; labels are arbitrary tokens remapped to dense
/// ids in order of first appearance.
pub fn load_graph(source: &str, directed: bool) -> Result<Graph, GraphError> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<&str, VertexId> = HashMap::new();
    let mut pairs = Vec::new();
    let mut report = LoadReport::default();

    for (lineno, line) in source.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(GraphError::Malformed {
                line: lineno + 1,
                found: tokens.len(),
            });
        }
        report.lines += 1;
        let mut ids = [0; 2];
        for (slot, &tok) in ids.iter_mut().zip(&tokens) {
            *slot = *index.entry(tok).or_insert_with(|| {
                labels.push(tok.to_string());
                labels.len() - 1
            });
        }
        let [u, v] = ids;
        if u == v {
            report.self_loops_dropped += 1;
            continue;
        }
        pairs.push((u, v));
    }
    if report.lines == 0 {
        return Err(GraphError::Empty);
    }
    Ok(Graph::build(labels, directed, pairs, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_loads() {
        let g = load_graph("0 1\n1 2\n2 0", false).unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.n_edges(), 3);
        assert!((0..3).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn duplicates_collapse() {
        let g = load_graph("0 1\n0 1\n1 0", false).unwrap();
        assert_eq!(g.n_vertices(), 2);
        assert_eq!(g.n_edges(), 1);
        assert_eq!(g.load_report().duplicates_dropped, 2);
    }

    #[test]
    fn reciprocal_arcs_share_one_edge() {
        let g = load_graph("0 1\n1 0", true).unwrap();
        assert_eq!(g.n_vertices(), 2);
        assert_eq!(g.n_arcs(), 2);
        assert_eq!(g.n_edges(), 1);
        assert_eq!((g.degree(0), g.degree(1)), (1, 1));
        assert_eq!(g.load_report().duplicates_dropped, 0);
    }

    #[test]
    fn self_loops_dropped_and_reported() {
        let g = load_graph("# comment\na a\na b\n\nb c\n", false).unwrap();
        assert_eq!(g.load_report().self_loops_dropped, 1);
        assert_eq!(g.n_edges(), 2);
        assert_eq!(g.vertex_id("c"), Some(2));
        assert_eq!(g.label(1), "b");
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = load_graph("0 1\n1 2 3\n", false).unwrap_err();
        assert_eq!(err, GraphError::Malformed { line: 2, found: 3 });
        let err = load_graph("# only\n7\n", false).unwrap_err();
        assert_eq!(err, GraphError::Malformed { line: 2, found: 1 });
    }

    #[test]
    fn empty_input_rejected() {
        assert_eq!(load_graph("", false).unwrap_err(), GraphError::Empty);
        assert_eq!(load_graph("# c\n\n", true).unwrap_err(), GraphError::Empty);
    }

    #[test]
    fn induced_codes() {
        let tri = Graph::from_edges(3, false, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(tri.induced_subgraph_code(&[0, 1, 2]).unwrap(), 0b111);
        let empty = Graph::from_edges(3, false, &[]);
        assert_eq!(empty.induced_subgraph_code(&[0, 1, 2]).unwrap(), 0b000);
        // pairs (0,1), (0,2), (1,2): edges 0-1 and 1-2 set bits 0 and 2
        let path = Graph::from_edges(3, false, &[(0, 1), (1, 2)]);
        assert_eq!(path.induced_subgraph_code(&[0, 1, 2]).unwrap(), 0b101);
    }

    #[test]
    fn directed_code_bit_order() {
        // ordered pairs (0,1) (0,2) (1,0) (1,2) (2,0) (2,1)
        let g = Graph::from_edges(3, true, &[(0, 1), (2, 1)]);
        assert_eq!(g.induced_subgraph_code(&[0, 1, 2]).unwrap(), 0b100001);
    }

    #[test]
    fn induced_code_errors() {
        let g = Graph::from_edges(4, false, &[(0, 1)]);
        assert_eq!(
            g.induced_subgraph_code(&[0, 1, 1]),
            Err(GraphError::RepeatedVertex(1))
        );
        assert_eq!(
            g.induced_subgraph_code(&[0, 1, 9]),
            Err(GraphError::OutOfRange(9))
        );
        assert_eq!(
            g.induced_subgraph_code(&[0, 1]),
            Err(GraphError::UnsupportedSize(2))
        );
    }

    #[test]
    fn directed_degree_counts_distinct_neighbors() {
        let g = Graph::from_edges(3, true, &[(0, 1), (1, 0), (0, 2)]);
        assert_eq!(g.degree(0), 2);
        assert!(g.has_arc(0, 1) && g.has_arc(1, 0) && !g.has_arc(2, 0));
    }
}
