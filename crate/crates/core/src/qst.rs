//! Quota Steiner Tree with unit edge costs.
//!
//! Two backends share one contract: [`qst_exact`] is a branch-and-bound over
//! connected vertex subsets and returns a minimum-edge tree, while
//! [`qst_heuristic`] grows a tree greedily by profit per added edge and
//! carries no approximation guarantee.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeSet, Graph, VertexSet};

/// Largest graph the exact backend accepts unless told otherwise.
pub const DEFAULT_EXACT_CAP: usize = 16;

/// Which QST backend a pipeline should call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QstBackend {
    #[default]
    Exact,
    Heuristic,
}

impl std::str::FromStr for QstBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(QstBackend::Exact),
            "heuristic" => Ok(QstBackend::Heuristic),
            other => Err(Error::input(format!("unknown QST backend `{other}`"))),
        }
    }
}

/// A QST instance on a borrowed graph. Edge costs are all 1.
#[derive(Debug, Clone)]
pub struct QstInstance<'g> {
    graph: &'g Graph,
    profit: Vec<u64>,
    quota: u64,
}

impl<'g> QstInstance<'g> {
    pub fn new(graph: &'g Graph, profit: Vec<u64>, quota: u64) -> Result<Self> {
        if profit.len() != graph.n() {
            return Err(Error::input(format!(
                "profit vector has {} entries for {} vertices",
                profit.len(),
                graph.n()
            )));
        }
        Ok(QstInstance {
            graph,
            profit,
            quota,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn profit(&self) -> &[u64] {
        &self.profit
    }

    pub fn quota(&self) -> u64 {
        self.quota
    }

    pub fn total_profit(&self) -> u64 {
        self.profit.iter().sum()
    }

    fn check_feasible(&self) -> Result<()> {
        let total = self.total_profit();
        if self.quota > total {
            return Err(Error::infeasible(format!(
                "quota {} exceeds total profit {total}",
                self.quota
            )));
        }
        Ok(())
    }
}

/// A tree given by its vertices and edges, with the profit it collects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SteinerTree {
    pub vertices: VertexSet,
    pub edges: EdgeSet,
    pub total_profit: u64,
}

impl SteinerTree {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Structural check: nonempty, `|E| = |V| - 1`, edges inside the vertex
    /// set and connected.
    pub fn is_tree(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 || self.edges.len() != n - 1 {
            return false;
        }
        let pos = |v: usize| self.vertices.binary_search(&v).ok();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in self.edges.iter() {
            let (Some(a), Some(b)) = (pos(e.u()), pos(e.v())) else {
                return false;
            };
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// Full check against a host graph and profit function.
    pub fn validate(&self, g: &Graph, profit: &[u64]) -> Result<()> {
        if !self.is_tree() {
            return Err(Error::input("vertex/edge lists do not form a tree"));
        }
        if let Some(e) = self.edges.iter().find(|e| g.edge_index(**e).is_none()) {
            return Err(Error::input(format!("tree edge {e} is not in the graph")));
        }
        let sum: u64 = self.vertices.iter().map(|&v| profit[v]).sum();
        if sum != self.total_profit {
            return Err(Error::input(format!(
                "recorded profit {} but vertices carry {sum}",
                self.total_profit
            )));
        }
        Ok(())
    }

    pub(crate) fn spanning(g: &Graph, vertices: VertexSet, profit: &[u64]) -> Result<Self> {
        let edges = if vertices.len() > 1 {
            g.induced_spanning_tree(&vertices)?
        } else {
            EdgeSet::empty()
        };
        let total_profit = vertices.iter().map(|&v| profit[v]).sum();
        Ok(SteinerTree {
            vertices,
            edges,
            total_profit,
        })
    }
}

/// Exact QST with the default size cap.
pub fn qst_exact(inst: &QstInstance<'_>) -> Result<SteinerTree> {
    qst_exact_capped(inst, DEFAULT_EXACT_CAP)
}

/// Minimum-edge tree meeting the quota; among optima, the lexicographically
/// smallest vertex set. Searches sizes in increasing order, enumerating
/// connected sets by their minimum vertex and pruning any branch whose
/// optimistic profit cannot reach the quota.
pub fn qst_exact_capped(inst: &QstInstance<'_>, cap: usize) -> Result<SteinerTree> {
    let g = inst.graph;
    let n = g.n();
    if n > cap || n > 64 {
        return Err(Error::capacity(format!(
            "exact QST handles at most {} vertices, graph has {n}",
            cap.min(64)
        )));
    }
    inst.check_feasible()?;
    if inst.quota == 0 {
        return SteinerTree::spanning(g, VertexSet::new(vec![0]), &inst.profit);
    }

    let search = ExactSearch::new(inst);
    for size in 1..=n {
        for min_vertex in 0..n {
            if let Some(mask) = search.lex_min_feasible(min_vertex, size) {
                let verts = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                let tree = SteinerTree::spanning(g, verts, &inst.profit)?;
                debug_assert!(tree.is_tree() && tree.total_profit >= inst.quota);
                return Ok(tree);
            }
        }
    }
    unreachable!("the whole connected graph meets any feasible quota")
}

struct ExactSearch<'a> {
    profit: &'a [u64],
    quota: u64,
    closed: Vec<u64>,
    open: Vec<u64>,
    /// `best_above[v][j]`: sum of the `j` largest profits among ids `>= v`.
    best_above: Vec<Vec<u64>>,
}

struct Frontier {
    set: u64,
    reach: u64,
    profit: u64,
    size: usize,
}

impl<'a> ExactSearch<'a> {
    fn new(inst: &'a QstInstance<'_>) -> Self {
        let g = inst.graph;
        let n = g.n();
        let open: Vec<u64> = (0..n)
            .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
            .collect();
        let closed = (0..n).map(|v| open[v] | 1 << v).collect();
        let best_above = (0..n)
            .map(|v| {
                let mut ps: Vec<u64> = inst.profit[v..].to_vec();
                ps.sort_unstable_by(|a, b| b.cmp(a));
                let mut prefix = vec![0];
                for p in ps {
                    prefix.push(prefix.last().unwrap() + p);
                }
                prefix
            })
            .collect();
        ExactSearch {
            profit: &inst.profit,
            quota: inst.quota,
            closed,
            open,
            best_above,
        }
    }

    fn lex_min_feasible(&self, v: usize, size: usize) -> Option<u64> {
        let prefix = &self.best_above[v];
        if prefix[size.min(prefix.len() - 1)] < self.quota {
            return None;
        }
        let above = !0u64 << v;
        let start = Frontier {
            set: 1 << v,
            reach: self.closed[v],
            profit: self.profit[v],
            size: 1,
        };
        let mut best = None;
        self.extend(&start, self.open[v] & above, above, size, &mut best);
        best
    }

    fn extend(&self, cur: &Frontier, mut ext: u64, above: u64, size: usize, best: &mut Option<u64>) {
        if cur.size == size {
            if cur.profit >= self.quota && best.is_none_or(|b| lex_less(cur.set, b)) {
                *best = Some(cur.set);
            }
            return;
        }
        let v = above.trailing_zeros() as usize;
        let prefix = &self.best_above[v];
        let optimistic = cur.profit + prefix[(size - cur.size).min(prefix.len() - 1)];
        if optimistic < self.quota {
            return;
        }
        while ext != 0 {
            let w = ext.trailing_zeros() as usize;
            ext &= ext - 1;
            let fresh = self.open[w] & !cur.reach & above;
            let next = Frontier {
                set: cur.set | 1 << w,
                reach: cur.reach | self.closed[w],
                profit: cur.profit + self.profit[w],
                size: cur.size + 1,
            };
            self.extend(&next, ext | fresh, above, size, best);
        }
    }
}

/// For equal-size sets, `a` precedes `b` in sorted-list lexicographic order
/// iff the smallest element of `a ^ b` belongs to `a`.
fn lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    diff != 0 && a & (diff & diff.wrapping_neg()) != 0
}

/// Guarantee-free greedy tree growth.
///
/// Starts at the highest-profit vertex and repeatedly attaches the shortest
/// path to the outside vertex whose path adds the most profit per new edge
/// (ties to the smallest id), until the quota is met.
pub fn qst_heuristic(inst: &QstInstance<'_>) -> Result<SteinerTree> {
    inst.check_feasible()?;
    let g = inst.graph;
    let n = g.n();
    let profit = &inst.profit;
    if inst.quota == 0 {
        return SteinerTree::spanning(g, VertexSet::new(vec![0]), profit);
    }

    let start = (0..n).rev().max_by_key(|&v| profit[v]).expect("n >= 1");
    let mut in_tree = vec![false; n];
    in_tree[start] = true;
    let mut collected = profit[start];
    let mut edges = Vec::new();

    while collected < inst.quota {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut path_profit = vec![0u64; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| in_tree[v]).collect();
        for &v in &queue {
            dist[v] = 0;
        }
        while let Some(v) = queue.pop_front() {
            for &u in g.neighbors(v) {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    parent[u] = v;
                    path_profit[u] = path_profit[v] + profit[u];
                    queue.push_back(u);
                }
            }
        }
        // Best ratio path_profit / dist, compared by cross-multiplication.
        let mut best: Option<usize> = None;
        for v in (0..n).filter(|&v| !in_tree[v] && path_profit[v] > 0) {
            let better = match best {
                None => true,
                Some(b) => {
                    (path_profit[v] as u128) * (dist[b] as u128)
                        > (path_profit[b] as u128) * (dist[v] as u128)
                }
            };
            if better {
                best = Some(v);
            }
        }
        let mut v = best.expect("feasible quota leaves a profitable vertex outside the tree");
        while !in_tree[v] {
            in_tree[v] = true;
            collected += profit[v];
            edges.push(Edge::new(v, parent[v])?);
            v = parent[v];
        }
    }

    let tree = SteinerTree {
        vertices: (0..n).filter(|&v| in_tree[v]).collect(),
        edges: EdgeSet::new(edges),
        total_profit: collected,
    };
    debug_assert!(tree.is_tree());
    Ok(tree)
}

/// Dispatch on a backend choice.
pub fn solve_qst(inst: &QstInstance<'_>, backend: QstBackend) -> Result<SteinerTree> {
    match backend {
        QstBackend::Exact => qst_exact(inst),
        QstBackend::Heuristic => qst_heuristic(inst),
    }
}
