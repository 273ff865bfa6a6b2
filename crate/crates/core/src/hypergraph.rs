//! Hypergraph data model, the edge-list text format, cycle orders and the
//! OA / OMP / OML classification of Greechie diagrams.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while building or parsing a [`Hypergraph`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("line {line}: malformed token `{token}`")]
    MalformedToken { line: usize, token: String },
    #[error("line {line}: vertex id must be positive")]
    NonPositiveId { line: usize },
    #[error("line {line}: vertex {vertex} repeated inside one edge")]
    RepeatedVertex { line: usize, vertex: usize },
    #[error("line {line}: edge duplicates the edge on line {first}")]
    DuplicateEdge { line: usize, first: usize },
    #[error("edge {edge} is empty")]
    EmptyEdge { edge: usize },
    #[error("edge {edge} mentions vertex {vertex} outside 1..={n}")]
    VertexOutOfRange {
        edge: usize,
        vertex: usize,
        n: usize,
    },
    #[error("vertex {vertex} is not covered by any edge")]
    UncoveredVertex { vertex: usize },
    #[error("diagram has no edges")]
    NoEdges,
    #[error("vertex {vertex} out of range 1..={n}")]
    InvalidVertex { vertex: usize, n: usize },
}

/// A finite hypergraph on the vertex set `1..=n` whose edges cover every
/// vertex. Edge members are kept sorted; edge order is the insertion order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph, checking that edges are nonempty, pairwise
    /// distinct, within range, and that their union is the whole vertex set.
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        let mut sorted = Vec::with_capacity(edges.len());
        let mut seen: HashSet<Vec<usize>> = HashSet::with_capacity(edges.len());
        let mut covered = vec![false; n + 1];
        for (idx, mut edge) in edges.into_iter().enumerate() {
            if edge.is_empty() {
                return Err(HypergraphError::EmptyEdge { edge: idx + 1 });
            }
            edge.sort_unstable();
            for w in edge.windows(2) {
                if w[0] == w[1] {
                    return Err(HypergraphError::RepeatedVertex {
                        line: idx + 1,
                        vertex: w[0],
                    });
                }
            }
            for &v in &edge {
                if v == 0 || v > n {
                    return Err(HypergraphError::VertexOutOfRange {
                        edge: idx + 1,
                        vertex: v,
                        n,
                    });
                }
                covered[v] = true;
            }
            if !seen.insert(edge.clone()) {
                let first = sorted.iter().position(|e| *e == edge).unwrap_or(0) + 1;
                return Err(HypergraphError::DuplicateEdge {
                    line: idx + 1,
                    first,
                });
            }
            sorted.push(edge);
        }
        if sorted.is_empty() {
            return Err(HypergraphError::NoEdges);
        }
        if let Some(vertex) = (1..=n).find(|&v| !covered[v]) {
            return Err(HypergraphError::UncoveredVertex { vertex });
        }
        Ok(Self { n, edges: sorted })
    }

    /// Builds a hypergraph whose vertex count is the largest id mentioned.
    pub fn from_edges(edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        let n = edges.iter().flatten().copied().max().unwrap_or(0);
        Self::new(n, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        1..=self.n
    }

    /// True when every edge has exactly `k` vertices.
    pub fn is_uniform(&self, k: usize) -> bool {
        self.edges.iter().all(|e| e.len() == k)
    }

    fn check_vertex(&self, v: usize) -> Result<(), HypergraphError> {
        if v == 0 || v > self.n {
            Err(HypergraphError::InvalidVertex {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// Number of edges containing `v`.
    pub fn degree(&self, v: usize) -> Result<usize, HypergraphError> {
        self.check_vertex(v)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| e.binary_search(&v).is_ok())
            .count())
    }

    /// Degrees of all vertices, indexed by `id - 1`.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                deg[v - 1] += 1;
            }
        }
        deg
    }

    /// Vertices other than `v` sharing an edge with `v`.
    pub fn adjacency(&self, v: usize) -> Result<BTreeSet<usize>, HypergraphError> {
        self.check_vertex(v)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| e.binary_search(&v).is_ok())
            .flatten()
            .copied()
            .filter(|&u| u != v)
            .collect())
    }

    /// Incidence lists: for each vertex (0-based) the indices of edges through it.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v - 1].push(i);
            }
        }
        inc
    }

    /// True when the edges form a single connected component.
    pub fn is_connected(&self) -> bool {
        let inc = self.incidence();
        let mut seen_v = vec![false; self.n];
        let mut seen_e = vec![false; self.edges.len()];
        let mut queue = VecDeque::from([0usize]);
        seen_e[0] = true;
        while let Some(e) = queue.pop_front() {
            for &v in &self.edges[e] {
                if seen_v[v - 1] {
                    continue;
                }
                seen_v[v - 1] = true;
                for &f in &inc[v - 1] {
                    if !seen_e[f] {
                        seen_e[f] = true;
                        queue.push_back(f);
                    }
                }
            }
        }
        seen_v.iter().all(|&s| s)
    }

    /// Renames every vertex `v` to `perm[v - 1]` (a permutation of `1..=n`),
    /// keeping the edge order.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length mismatch");
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let mut r: Vec<usize> = e.iter().map(|&v| perm[v - 1]).collect();
                r.sort_unstable();
                r
            })
            .collect();
        Self { n: self.n, edges }
    }

    /// Smallest order of a cycle, or `None` when the hypergraph is acyclic.
    ///
    /// A cycle of order `k` in the hypergraph is a cycle of length `2k` in
    /// the bipartite vertex/edge incidence graph, so this is half the girth
    /// of that graph, found by a BFS from every node.
    pub fn min_cycle_order(&self) -> Option<usize> {
        // incidence graph nodes: vertices 0..n, edges n..n+m
        let n = self.n;
        let total = n + self.edges.len();
        let mut adj = vec![Vec::new(); total];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                adj[v - 1].push(n + i);
                adj[n + i].push(v - 1);
            }
        }
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; total];
        let mut parent = vec![usize::MAX; total];
        for src in 0..total {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[src] = 0;
            parent[src] = usize::MAX;
            let mut queue = VecDeque::from([src]);
            'bfs: while let Some(u) = queue.pop_front() {
                if 2 * dist[u] + 1 >= best {
                    break;
                }
                for &w in &adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        best = best.min(dist[u] + dist[w] + 1);
                        if best == 4 {
                            break 'bfs;
                        }
                    }
                }
            }
            if best == 4 {
                break;
            }
        }
        (best != usize::MAX).then_some(best / 2)
    }

    /// Checks the two Greechie conditions on every pair of distinct edges.
    pub fn greechie_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for i in 0..self.edges.len() {
            for j in i + 1..self.edges.len() {
                let (e, f) = (&self.edges[i], &self.edges[j]);
                let common = intersection_size(e, f);
                if e.len() - common < 2 || f.len() - common < 2 {
                    out.push(Violation {
                        first: i + 1,
                        second: j + 1,
                        condition: Condition::Difference,
                    });
                }
                if common > 1 {
                    out.push(Violation {
                        first: i + 1,
                        second: j + 1,
                        condition: Condition::Intersection,
                    });
                }
            }
        }
        out
    }

    /// `(true, [])` when the hypergraph is a Greechie diagram.
    pub fn is_greechie(&self) -> (bool, Vec<Violation>) {
        let v = self.greechie_violations();
        (v.is_empty(), v)
    }

    pub fn classify(&self) -> Classification {
        let violations = self.greechie_violations();
        let min_cycle_order = self.min_cycle_order();
        let kind = if !violations.is_empty() {
            DiagramKind::NotGreechie
        } else {
            match min_cycle_order {
                None => DiagramKind::Oml,
                Some(k) if k >= 5 => DiagramKind::Oml,
                Some(4) => DiagramKind::Omp,
                Some(_) => DiagramKind::Oa,
            }
        };
        Classification {
            kind,
            violations,
            min_cycle_order,
        }
    }

    /// Serializes in the edge-list text format: one edge per line, members
    /// ascending, no comments.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Hypergraph {
    type Err = HypergraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_diagram(s)
    }
}

pub(crate) fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Reads edge lines without building a hypergraph: `#` comments and blank
/// lines are skipped; returns each edge with its source line number.
pub fn parse_edge_lines(text: &str) -> Result<Vec<(usize, Vec<usize>)>, HypergraphError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let mut edge = Vec::new();
        for token in body.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| HypergraphError::MalformedToken {
                line: line_no,
                token: token.to_string(),
            })?;
            if value <= 0 {
                return Err(HypergraphError::NonPositiveId { line: line_no });
            }
            edge.push(value as usize);
        }
        out.push((line_no, edge));
    }
    Ok(out)
}

/// Parses the edge-list format: `#` comments, blank lines ignored, one edge
/// per line as whitespace-separated positive ids.
pub fn parse_diagram(text: &str) -> Result<Hypergraph, HypergraphError> {
    let (lines, edges): (Vec<usize>, Vec<Vec<usize>>) = parse_edge_lines(text)?.into_iter().unzip();
    let n = edges.iter().flatten().copied().max().unwrap_or(0);
    // map edge indices back to source line numbers in error reports
    Hypergraph::new(n, edges).map_err(|err| match err {
        HypergraphError::DuplicateEdge { line, first } => HypergraphError::DuplicateEdge {
            line: lines[line - 1],
            first: lines[first - 1],
        },
        HypergraphError::RepeatedVertex { line, vertex } => HypergraphError::RepeatedVertex {
            line: lines[line - 1],
            vertex,
        },
        other => other,
    })
}

/// Inverse of [`parse_diagram`].
pub fn serialize_diagram(h: &Hypergraph) -> String {
    h.to_text()
}

/// Which Greechie condition a pair of edges fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `|e \ f| >= 2` fails for one of the two orderings.
    Difference,
    /// `|e ∩ f| <= 1` fails.
    Intersection,
}

/// A failing pair of edges (1-based edge indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub first: usize,
    pub second: usize,
    pub condition: Condition,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.condition {
            Condition::Difference => write!(
                f,
                "edges {} and {}: condition (1) |e \\ f| >= 2 fails",
                self.first, self.second
            ),
            Condition::Intersection => write!(
                f,
                "edges {} and {}: condition (2) |e ∩ f| <= 1 fails",
                self.first, self.second
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DiagramKind {
    NotGreechie,
    #[serde(rename = "OA")]
    Oa,
    #[serde(rename = "OMP")]
    Omp,
    #[serde(rename = "OML")]
    Oml,
}

impl DiagramKind {
    /// Smallest cycle order permitted for this kind.
    pub fn required_cycle_order(self) -> usize {
        match self {
            DiagramKind::NotGreechie => 2,
            DiagramKind::Oa => 3,
            DiagramKind::Omp => 4,
            DiagramKind::Oml => 5,
        }
    }

    /// Whether a Greechie diagram with the given minimum cycle order belongs
    /// to this class (every OML is an OMP, every OMP an OA).
    pub fn admits(self, min_cycle_order: Option<usize>) -> bool {
        min_cycle_order.is_none_or(|k| k >= self.required_cycle_order())
    }
}

impl fmt::Display for DiagramKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagramKind::NotGreechie => "NotGreechie",
            DiagramKind::Oa => "OA",
            DiagramKind::Omp => "OMP",
            DiagramKind::Oml => "OML",
        })
    }
}

impl FromStr for DiagramKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "oa" => Ok(DiagramKind::Oa),
            "omp" => Ok(DiagramKind::Omp),
            "oml" => Ok(DiagramKind::Oml),
            other => Err(format!("unknown class `{other}` (expected oa, omp or oml)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: DiagramKind,
    pub violations: Vec<Violation>,
    pub min_cycle_order: Option<usize>,
}
