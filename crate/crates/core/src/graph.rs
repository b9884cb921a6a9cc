//! Sparse undirected graphs with 0-indexed vertex labels.
//!
//! Graphs are the input to the whole pipeline: they are parsed from a plain
//! edge-list text format, queried for degrees, and lowered to dense adjacency
//! matrices at desk scale for the verification oracles.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use thiserror::Error;

/// Default cap on the number of vertices for dense adjacency construction.
pub const DEFAULT_DENSE_CAP: usize = 4096;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: vertex {v} out of range (graph has {n} vertices)")]
    VertexOutOfRange { line: usize, v: usize, n: usize },
    #[error("line {line}: self-loop at vertex {v}")]
    SelfLoop { line: usize, v: usize },
    #[error("line {line}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("dense adjacency refused: {n} vertices exceeds cap of {cap}")]
    DenseCapExceeded { n: usize, cap: usize },
}

/// Simple undirected graph. Edges are stored normalized as `(u, v)` with
/// `u < v`; no self-loops, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_vertices: usize,
    edges: BTreeSet<(usize, usize)>,
}

/// Per-vertex degrees along with their maximum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub degrees: Vec<usize>,
    pub max_degree: usize,
}

/// Dense symmetric 0/1 adjacency matrix of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix(DMatrix<f64>);

impl AdjacencyMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }
}

impl Graph {
    /// Builds a graph from an edge list, normalizing endpoint order.
    pub fn new(
        num_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        if num_vertices == 0 {
            return Err(GraphError::Invalid("graph must have at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::Invalid(format!("self-loop at vertex {a}")));
            }
            let (u, v) = (a.min(b), a.max(b));
            if v >= num_vertices {
                return Err(GraphError::Invalid(format!(
                    "vertex {v} out of range (graph has {num_vertices} vertices)"
                )));
            }
            if !set.insert((u, v)) {
                return Err(GraphError::Invalid(format!("duplicate edge {{{u}, {v}}}")));
            }
        }
        Ok(Graph { num_vertices, edges: set })
    }

    /// Parses the plain text edge-list format.
    ///
    /// Lines starting with `#` and blank lines are skipped. The first data
    /// line is a header `N M`; exactly `M` lines `u v` (0-indexed endpoints)
    /// must follow. Errors carry 1-based line numbers.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut data_lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = data_lines
            .next()
            .ok_or(GraphError::Malformed { line: 1, msg: "missing `N M` header".into() })?;
        let mut parts = header.split_whitespace();
        let n: usize = parse_field(&mut parts, header_line, "vertex count N")?;
        let m: usize = parse_field(&mut parts, header_line, "edge count M")?;
        if parts.next().is_some() {
            return Err(GraphError::Malformed {
                line: header_line,
                msg: "header must be exactly `N M`".into(),
            });
        }
        if n == 0 {
            return Err(GraphError::Malformed {
                line: header_line,
                msg: "vertex count must be positive".into(),
            });
        }

        let mut edges = BTreeSet::new();
        for _ in 0..m {
            let (line, text) = data_lines.next().ok_or_else(|| GraphError::Malformed {
                line: header_line,
                msg: format!("expected {m} edge lines, found {}", edges.len()),
            })?;
            let mut parts = text.split_whitespace();
            let a: usize = parse_field(&mut parts, line, "edge endpoint")?;
            let b: usize = parse_field(&mut parts, line, "edge endpoint")?;
            if parts.next().is_some() {
                return Err(GraphError::Malformed {
                    line,
                    msg: "edge line must be exactly `u v`".into(),
                });
            }
            if a == b {
                return Err(GraphError::SelfLoop { line, v: a });
            }
            let (u, v) = (a.min(b), a.max(b));
            if v >= n {
                return Err(GraphError::VertexOutOfRange { line, v, n });
            }
            if !edges.insert((u, v)) {
                return Err(GraphError::DuplicateEdge { line, u, v });
            }
        }
        if let Some((line, _)) = data_lines.next() {
            return Err(GraphError::Malformed {
                line,
                msg: format!("unexpected data after {m} edges"),
            });
        }
        Ok(Graph { num_vertices: n, edges })
    }

    /// Serializes back to the edge-list format (header plus sorted edges).
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.num_vertices, self.edges.len());
        for (u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges in sorted order, each as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Sorted adjacency lists for all vertices.
    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_vertices];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        // BTreeSet iteration inserts v-neighbors in increasing u order already,
        // but u-neighbors arrive out of order; sort both for determinism.
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let mut degrees = vec![0usize; self.num_vertices];
        for &(u, v) in &self.edges {
            degrees[u] += 1;
            degrees[v] += 1;
        }
        let max_degree = degrees.iter().copied().max().unwrap_or(0);
        DegreeProfile { degrees, max_degree }
    }

    /// Number of qubits needed to address all vertex labels (at least one).
    pub fn working_qubits(&self) -> usize {
        width_for_labels(self.num_vertices)
    }

    pub fn adjacency_matrix(&self) -> Result<AdjacencyMatrix, GraphError> {
        self.adjacency_matrix_with_cap(DEFAULT_DENSE_CAP)
    }

    pub fn adjacency_matrix_with_cap(&self, cap: usize) -> Result<AdjacencyMatrix, GraphError> {
        if self.num_vertices > cap {
            return Err(GraphError::DenseCapExceeded { n: self.num_vertices, cap });
        }
        let mut m = DMatrix::zeros(self.num_vertices, self.num_vertices);
        for &(u, v) in &self.edges {
            m[(u, v)] = 1.0;
            m[(v, u)] = 1.0;
        }
        Ok(AdjacencyMatrix(m))
    }

    /// Adjacency matrix zero-padded to the full `2^n` qubit space.
    pub fn padded_adjacency(&self, cap: usize) -> Result<DMatrix<f64>, GraphError> {
        let n = self.working_qubits();
        let dim = 1usize << n;
        if dim > cap {
            return Err(GraphError::DenseCapExceeded { n: dim, cap });
        }
        let mut m = DMatrix::zeros(dim, dim);
        for &(u, v) in &self.edges {
            m[(u, v)] = 1.0;
            m[(v, u)] = 1.0;
        }
        Ok(m)
    }
}

/// Qubits needed to address labels `0..n_labels` (minimum one qubit).
pub fn width_for_labels(n_labels: usize) -> usize {
    let mut bits = usize::BITS as usize - n_labels.saturating_sub(1).leading_zeros() as usize;
    if bits == 0 {
        bits = 1;
    }
    bits
}

fn parse_field<'a>(
    parts: &mut impl Iterator<Item = &'a str>,
    line: usize,
    what: &str,
) -> Result<usize, GraphError> {
    let tok = parts.next().ok_or_else(|| GraphError::Malformed {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| GraphError::Malformed {
        line,
        msg: format!("cannot parse {what} from `{tok}`"),
    })
}
