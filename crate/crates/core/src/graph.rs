//! Simple undirected connected graphs, vertex/edge sets and the closed
//! neighborhood algebra every solver builds on.
//!
//! Vertices are dense ids `0..n`. A [`Graph`] can only be built through
//! [`Graph::new`] or [`Graph::parse`], both of which reject self-loops,
//! duplicate edges, out-of-range ids and disconnected inputs, so every other
//! module may assume a simple connected graph.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected edge stored canonically with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "(usize, usize)", try_from = "(usize, usize)")]
pub struct Edge {
    u: usize,
    v: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::input(format!("self-loop on vertex {a}")));
        }
        Ok(Edge {
            u: a.min(b),
            v: a.max(b),
        })
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn endpoints(&self) -> [usize; 2] {
        [self.u, self.v]
    }
}

impl From<Edge> for (usize, usize) {
    fn from(e: Edge) -> Self {
        (e.u, e.v)
    }
}

impl TryFrom<(usize, usize)> for Edge {
    type Error = Error;

    fn try_from((a, b): (usize, usize)) -> Result<Self> {
        Edge::new(a, b)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// Sorted, deduplicated list of vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(mut ids: Vec<usize>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        VertexSet(ids)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl Deref for VertexSet {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter.into_iter().collect())
    }
}

/// Sorted, deduplicated list of canonical edges.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeSet(Vec<Edge>);

impl EdgeSet {
    pub fn new(mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        EdgeSet(edges)
    }

    pub fn empty() -> Self {
        EdgeSet(Vec::new())
    }

    /// Endpoints `V(E')` of the edge set.
    pub fn endpoints(&self) -> VertexSet {
        self.0.iter().flat_map(|e| e.endpoints()).collect()
    }

    pub fn into_vec(self) -> Vec<Edge> {
        self.0
    }
}

impl Deref for EdgeSet {
    type Target = [Edge];

    fn deref(&self) -> &[Edge] {
        &self.0
    }
}

impl FromIterator<Edge> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        EdgeSet::new(iter.into_iter().collect())
    }
}

/// A simple, undirected, connected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph, rejecting loops, multi-edges, bad ids and disconnected
    /// inputs.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("graph must have at least one vertex"));
        }
        let mut canon = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::input(format!(
                    "edge ({a}, {b}) references a vertex outside 0..{n}"
                )));
            }
            canon.push(Edge::new(a, b)?);
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::input(format!("duplicate edge {}", w[0])));
        }
        let mut adjacency = vec![Vec::new(); n];
        for e in &canon {
            adjacency[e.u].push(e.v);
            adjacency[e.v].push(e.u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let g = Graph {
            adjacency,
            edges: canon,
        };
        let components = g.component_count();
        if components > 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(g)
    }

    /// Parses the text instance format: a `p <n> <m>` header followed by `m`
    /// lines `<u> <v>`. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            match header {
                None => {
                    if fields.len() != 3 || fields[0] != "p" {
                        return Err(parse_err(format!("expected `p <n> <m>`, found `{line}`")));
                    }
                    let n = parse_num(fields[1]).map_err(&parse_err)?;
                    let m = parse_num(fields[2]).map_err(&parse_err)?;
                    header = Some((n, m));
                }
                Some((_, m)) => {
                    if fields.len() != 2 {
                        return Err(parse_err(format!("expected `<u> <v>`, found `{line}`")));
                    }
                    if edges.len() == m {
                        return Err(parse_err(format!("more than the declared {m} edges")));
                    }
                    let u = parse_num(fields[0]).map_err(&parse_err)?;
                    let v = parse_num(fields[1]).map_err(&parse_err)?;
                    edges.push((u, v));
                }
            }
        }
        let (n, m) = header.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing `p <n> <m>` header".into(),
        })?;
        if edges.len() != m {
            return Err(Error::Parse {
                line: 0,
                message: format!("declared {m} edges but found {}", edges.len()),
            });
        }
        Graph::new(n, edges)
    }

    /// Renders the canonical instance text (edges in lexicographic order).
    pub fn to_instance_string(&self) -> String {
        let mut out = format!("p {} {}\n", self.n(), self.m());
        for e in &self.edges {
            out.push_str(&format!("{} {}\n", e.u, e.v));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges in canonical lexicographic order; position is the edge index.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n() && self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n()
    }

    fn check_vertices(&self, s: &[usize]) -> Result<()> {
        match s.iter().find(|&&v| v >= self.n()) {
            Some(v) => Err(Error::input(format!(
                "vertex {v} is outside 0..{}",
                self.n()
            ))),
            None => Ok(()),
        }
    }

    fn check_edges(&self, es: &[Edge]) -> Result<()> {
        match es.iter().find(|e| self.edge_index(**e).is_none()) {
            Some(e) => Err(Error::input(format!("edge {e} is not in the graph"))),
            None => Ok(()),
        }
    }

    /// `N[S]`: the members of `s` together with all their neighbors.
    pub fn closed_neighborhood(&self, s: &[usize]) -> Result<VertexSet> {
        self.check_vertices(s)?;
        let mut mark = vec![false; self.n()];
        for &v in s {
            mark[v] = true;
            for &u in &self.adjacency[v] {
                mark[u] = true;
            }
        }
        Ok(collect_marked(&mark))
    }

    /// `|N[S]|` without materializing the set.
    pub fn dominated_count(&self, s: &[usize]) -> Result<usize> {
        Ok(self.closed_neighborhood(s)?.len())
    }

    /// `N[e]` for a single edge.
    pub fn edge_neighborhood(&self, e: Edge) -> Result<VertexSet> {
        self.edge_set_neighborhood(&[e])
    }

    /// `N[E'] = N[V(E')]`.
    pub fn edge_set_neighborhood(&self, es: &[Edge]) -> Result<VertexSet> {
        self.check_edges(es)?;
        let ends: Vec<usize> = es.iter().flat_map(|e| e.endpoints()).collect();
        self.closed_neighborhood(&ends)
    }

    /// Whether `s` induces a connected subgraph. The empty set is rejected
    /// since its connectivity is undefined.
    pub fn is_connected_induced(&self, s: &[usize]) -> Result<bool> {
        self.check_vertices(s)?;
        if s.is_empty() {
            return Err(Error::input("connectivity of the empty set is undefined"));
        }
        let mut member = vec![false; self.n()];
        for &v in s {
            member[v] = true;
        }
        let reached = self.bfs_within(s[0], &member).len();
        let distinct = member.iter().filter(|&&b| b).count();
        Ok(reached == distinct)
    }

    /// BFS spanning tree of the subgraph induced by `s`, rooted at its
    /// smallest member with neighbors visited in ascending order.
    pub fn induced_spanning_tree(&self, s: &[usize]) -> Result<EdgeSet> {
        if !self.is_connected_induced(s)? {
            return Err(Error::input("vertex set does not induce a connected subgraph"));
        }
        let mut member = vec![false; self.n()];
        for &v in s {
            member[v] = true;
        }
        let root = *s.iter().min().expect("nonempty");
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        let mut tree = Vec::new();
        while let Some(v) = queue.pop_front() {
            for &u in &self.adjacency[v] {
                if member[u] && !seen[u] {
                    seen[u] = true;
                    tree.push(Edge::new(v, u)?);
                    queue.push_back(u);
                }
            }
        }
        Ok(EdgeSet::new(tree))
    }

    /// BFS order from `start`, restricted to vertices with `allowed[v]`.
    fn bfs_within(&self, start: usize, allowed: &[bool]) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        let mut order = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &u in &self.adjacency[v] {
                if allowed[u] && !seen[u] {
                    seen[u] = true;
                    order.push(u);
                }
            }
        }
        order
    }

    fn component_count(&self) -> usize {
        let allowed = vec![true; self.n()];
        let mut seen = vec![false; self.n()];
        let mut count = 0;
        for v in 0..self.n() {
            if !seen[v] {
                count += 1;
                for u in self.bfs_within(v, &allowed) {
                    seen[u] = true;
                }
            }
        }
        count
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Graph::parse(s)
    }
}

fn parse_num(tok: &str) -> std::result::Result<usize, String> {
    tok.parse::<usize>()
        .map_err(|_| format!("`{tok}` is not a nonnegative integer"))
}

fn collect_marked(mark: &[bool]) -> VertexSet {
    VertexSet(
        mark.iter()
            .enumerate()
            .filter_map(|(v, &m)| m.then_some(v))
            .collect(),
    )
}
