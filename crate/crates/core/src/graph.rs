//! Undirected simple graphs over dense vertex indices `0..n`.
//!
//! A [`Graph`] is immutable once built. Ingestion accepts an adjacency
//! matrix, an edge list or a small JSON object; non-numeric (or out of range)
//! edge-list labels are remapped to dense indices and the label table is kept
//! alongside the graph.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::seeded;

/// Resampling cap for connected `G(n, m)` graphs.
pub const GNM_MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("entry ({row}, {col}) is {value}, expected 0 or 1")]
    NonBinary { row: usize, col: usize, value: i64 },
    #[error("diagonal entry ({index}, {index}) is nonzero")]
    NonzeroDiagonal { index: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    Asymmetric { row: usize, col: usize },
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("edge count {m} outside [{min}, {max}] for n = {n}")]
    EdgeCountOutOfRange { n: usize, m: usize, min: usize, max: usize },
    #[error("no connected G({n}, {m}) sample after {attempts} attempts")]
    RetryBudgetExhausted { n: usize, m: usize, attempts: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("{distinct} distinct labels but only {n} vertices declared")]
    TooManyLabels { distinct: usize, n: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid graph spec '{0}': expected kind:n[:m] with kind in path|star|complete|tree|gnm")]
    BadSpec(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = GraphError> = std::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphStats {
    pub n: usize,
    pub edge_count: usize,
    pub max_degree: usize,
    pub density: f64,
}

impl Graph {
    /// Builds a graph on `n` vertices. Duplicate pairs (in either
    /// orientation) collapse to a single edge.
    pub fn from_edge_list(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut edges = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop { vertex: a });
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            adj,
            edges,
            labels: None,
        })
    }

    /// Builds a graph from a square 0/1 matrix. Rejects the first violation
    /// found in row-major order.
    pub fn from_adjacency_matrix<T>(rows: &[T]) -> Result<Self>
    where
        T: AsRef<[i64]>,
    {
        let n = rows.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        for (row, r) in rows.iter().enumerate() {
            let len = r.as_ref().len();
            if len != n {
                return Err(GraphError::NotSquare { row, len, expected: n });
            }
        }
        let mut pairs = Vec::new();
        for (row, r) in rows.iter().enumerate() {
            for (col, &value) in r.as_ref().iter().enumerate() {
                if value != 0 && value != 1 {
                    return Err(GraphError::NonBinary { row, col, value });
                }
                if row == col {
                    if value != 0 {
                        return Err(GraphError::NonzeroDiagonal { index: row });
                    }
                    continue;
                }
                if rows[col].as_ref()[row] != value {
                    return Err(GraphError::Asymmetric { row, col });
                }
                if value == 1 && row < col {
                    pairs.push((row, col));
                }
            }
        }
        Graph::from_edge_list(n, &pairs)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        debug_assert_eq!(labels.len(), self.n());
        self.labels = Some(labels);
        self
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Edges as `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Sorted neighbours of `v`. Panics if `v` is out of range.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn neighborhood(&self, v: usize) -> Result<&[usize]> {
        self.adj
            .get(v)
            .map(Vec::as_slice)
            .ok_or(GraphError::VertexOutOfRange { vertex: v, n: self.n() })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n() && self.adj[a].binary_search(&b).is_ok()
    }

    pub fn matrix_view(&self) -> Vec<Vec<i64>> {
        let n = self.n();
        let mut m = vec![vec![0; n]; n];
        for &(a, b) in &self.edges {
            m[a][b] = 1;
            m[b][a] = 1;
        }
        m
    }

    pub fn stats(&self) -> GraphStats {
        let n = self.n();
        let edge_count = self.edge_count();
        let density = if n < 2 {
            0.0
        } else {
            2.0 * edge_count as f64 / (n as f64 * (n as f64 - 1.0))
        };
        GraphStats {
            n,
            edge_count,
            max_degree: self.max_degree(),
            density,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Connected components, each sorted ascending, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = GraphJson {
            n: self.n(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            labels: self.labels.clone(),
        };
        serde_json::to_string(&doc).expect("graph json")
    }

    pub fn to_edge_list_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n(), self.edge_count());
        for &(a, b) in &self.edges {
            s.push_str(&format!("{a} {b}\n"));
        }
        s
    }

    pub fn to_matrix_text(&self) -> String {
        let mut s = String::new();
        for row in self.matrix_view() {
            let line: Vec<String> = row.iter().map(i64::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str, format: GraphFormat) -> Result<Self> {
        match format {
            GraphFormat::AdjacencyMatrix => parse_matrix(text),
            GraphFormat::EdgeList => parse_edge_list(text),
            GraphFormat::Json => parse_json(text),
        }
    }

    /// Reads a graph file, picking the format from the extension and
    /// falling back to content sniffing.
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| GraphError::Io(format!("{}: {e}", path.display())))?;
        let format = GraphFormat::from_path(path).unwrap_or_else(|| GraphFormat::sniff(&text));
        Graph::parse(&text, format)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    AdjacencyMatrix,
    EdgeList,
    Json,
}

impl GraphFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "json" => Some(GraphFormat::Json),
            "adj" | "mat" | "matrix" => Some(GraphFormat::AdjacencyMatrix),
            "edges" | "edgelist" | "el" => Some(GraphFormat::EdgeList),
            _ => None,
        }
    }

    /// JSON if the text opens with `{`; a matrix if the first line is all
    /// 0/1 with as many tokens as there are content lines; otherwise an edge
    /// list.
    pub fn sniff(text: &str) -> Self {
        if text.trim_start().starts_with('{') {
            return GraphFormat::Json;
        }
        let lines: Vec<&str> = content_lines(text).map(|(_, l)| l).collect();
        let Some(first) = lines.first() else {
            return GraphFormat::EdgeList;
        };
        let binary = first.split_whitespace().all(|t| t == "0" || t == "1");
        if binary && first.split_whitespace().count() == lines.len() {
            GraphFormat::AdjacencyMatrix
        } else {
            GraphFormat::EdgeList
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_matrix(text: &str) -> Result<Graph> {
    let mut rows = Vec::new();
    for (line, l) in content_lines(text) {
        let row = l
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i64>().map_err(|_| GraphError::Parse {
                    line,
                    message: format!("'{tok}' is not an integer"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Graph::from_adjacency_matrix(&rows)
}

fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(GraphError::Parse {
        line: 1,
        message: "missing 'n m' header".into(),
    })?;
    let head: Vec<&str> = header.split_whitespace().collect();
    let parse_count = |tok: &str| {
        tok.parse::<usize>().map_err(|_| GraphError::Parse {
            line: hline,
            message: format!("'{tok}' is not a count"),
        })
    };
    if head.len() != 2 {
        return Err(GraphError::Parse {
            line: hline,
            message: "header must be 'n m'".into(),
        });
    }
    let n = parse_count(head[0])?;
    let m = parse_count(head[1])?;

    let mut raw = Vec::with_capacity(m);
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(GraphError::Parse {
                line,
                message: "edge line must be 'a b'".into(),
            });
        }
        raw.push((toks[0], toks[1]));
    }
    if raw.len() != m {
        return Err(GraphError::Parse {
            line: hline,
            message: format!("header declares {m} edges, found {}", raw.len()),
        });
    }

    let numeric = raw.iter().all(|(a, b)| {
        [a, b]
            .iter()
            .all(|t| t.parse::<usize>().map(|v| v < n).unwrap_or(false))
    });
    if numeric {
        let pairs: Vec<(usize, usize)> = raw
            .iter()
            .map(|(a, b)| (a.parse().unwrap(), b.parse().unwrap()))
            .collect();
        return Graph::from_edge_list(n, &pairs);
    }

    // Labels mode: dense indices in order of first appearance.
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut pairs = Vec::with_capacity(raw.len());
    for &(a, b) in &raw {
        let mut ids = [0; 2];
        for (slot, tok) in ids.iter_mut().zip([a, b]) {
            *slot = *index.entry(tok).or_insert_with(|| {
                labels.push(tok.to_string());
                labels.len() - 1
            });
        }
        pairs.push((ids[0], ids[1]));
    }
    if labels.len() > n {
        return Err(GraphError::TooManyLabels {
            distinct: labels.len(),
            n,
        });
    }
    while labels.len() < n {
        labels.push(format!("#{}", labels.len()));
    }
    Ok(Graph::from_edge_list(n, &pairs)?.with_labels(labels))
}

fn parse_json(text: &str) -> Result<Graph> {
    let doc: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let pairs: Vec<(usize, usize)> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
    let g = Graph::from_edge_list(doc.n, &pairs)?;
    match doc.labels {
        Some(labels) if labels.len() != doc.n => Err(GraphError::Parse {
            line: 1,
            message: format!("{} labels for {} vertices", labels.len(), doc.n),
        }),
        Some(labels) => Ok(g.with_labels(labels)),
        None => Ok(g),
    }
}

/// Test-family generator request, written `kind:n[:m]` on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    Path(usize),
    /// Vertex 0 is the hub.
    Star(usize),
    Complete(usize),
    /// Uniform labelled tree.
    RandomTree(usize),
    /// Uniform `G(n, m)`, resampled until connected.
    Gnm {
        n: usize,
        m: usize,
    },
}

impl GraphSpec {
    pub fn n(&self) -> usize {
        match *self {
            GraphSpec::Path(n)
            | GraphSpec::Star(n)
            | GraphSpec::Complete(n)
            | GraphSpec::RandomTree(n)
            | GraphSpec::Gnm { n, .. } => n,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GraphSpec::Path(_) => "path",
            GraphSpec::Star(_) => "star",
            GraphSpec::Complete(_) => "complete",
            GraphSpec::RandomTree(_) => "tree",
            GraphSpec::Gnm { .. } => "gnm",
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Gnm { n, m } => write!(f, "gnm:{n}:{m}"),
            other => write!(f, "{}:{}", other.kind(), other.n()),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || GraphError::BadSpec(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<usize> { parts.get(i).ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let spec = match (parts[0], parts.len()) {
            ("path", 2) => GraphSpec::Path(num(1)?),
            ("star", 2) => GraphSpec::Star(num(1)?),
            ("complete", 2) => GraphSpec::Complete(num(1)?),
            ("tree" | "random_tree", 2) => GraphSpec::RandomTree(num(1)?),
            ("gnm", 3) => GraphSpec::Gnm { n: num(1)?, m: num(2)? },
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

/// Builds a member of a test family. Deterministic for a fixed seed.
pub fn generate(spec: GraphSpec, seed: u64) -> Result<Graph> {
    let n = spec.n();
    if n == 0 {
        return Err(GraphError::Empty);
    }
    match spec {
        GraphSpec::Path(n) => {
            let pairs: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
            Graph::from_edge_list(n, &pairs)
        }
        GraphSpec::Star(n) => {
            let pairs: Vec<_> = (1..n).map(|v| (0, v)).collect();
            Graph::from_edge_list(n, &pairs)
        }
        GraphSpec::Complete(n) => {
            let pairs: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
            Graph::from_edge_list(n, &pairs)
        }
        GraphSpec::RandomTree(n) => random_tree(n, &mut seeded(seed)),
        GraphSpec::Gnm { n, m } => connected_gnm(n, m, seed),
    }
}

/// Decodes a Prüfer sequence drawn uniformly at random.
fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Result<Graph> {
    if n <= 2 {
        let pairs: Vec<_> = (1..n).map(|v| (0, v)).collect();
        return Graph::from_edge_list(n, &pairs);
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(std::cmp::Reverse).collect();
    let mut pairs = Vec::with_capacity(n - 1);
    for &c in &code {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("leaf available");
        pairs.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.push(std::cmp::Reverse(c));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().expect("two leaves remain");
    let std::cmp::Reverse(b) = leaves.pop().expect("two leaves remain");
    pairs.push((a, b));
    Graph::from_edge_list(n, &pairs)
}

/// Maps an index in `0..n(n-1)/2` onto the pair `(a, b)`, `a < b`, in
/// lexicographic order.
fn pair_from_index(n: usize, k: usize) -> (usize, usize) {
    // Row `a` starts at offset a(2n - a - 1)/2.
    let offset = |a: usize| a * (2 * n - a - 1) / 2;
    let (mut lo, mut hi) = (0usize, n - 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if offset(mid) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = lo;
    (a, a + 1 + (k - offset(a)))
}

fn connected_gnm(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let max = n * (n - 1) / 2;
    let min = n - 1;
    if m < min || m > max {
        return Err(GraphError::EdgeCountOutOfRange { n, m, min, max });
    }
    let mut rng = seeded(seed);
    if m == n - 1 {
        // Connected graphs with n - 1 edges are exactly the spanning trees of
        // K_n, so the conditional distribution is the uniform labelled tree.
        return random_tree(n, &mut rng);
    }
    for _ in 0..GNM_MAX_ATTEMPTS {
        let pairs: Vec<_> = sample(&mut rng, max, m)
            .into_iter()
            .map(|k| pair_from_index(n, k))
            .collect();
        let g = Graph::from_edge_list(n, &pairs)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(GraphError::RetryBudgetExhausted {
        n,
        m,
        attempts: GNM_MAX_ATTEMPTS,
    })
}
