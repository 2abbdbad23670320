//! Rooted-tree machinery: eligible subtrees and the decomposition built from
//! them, the centroid two-way split, and the best-profit bounded-size
//! subtree dynamic program.
//!
//! Trees keep the original vertex ids of their host graph. Internally each
//! vertex gets a local index in ascending id order, and the root is always
//! the smallest id.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeSet, Graph, VertexSet};
use crate::qst::SteinerTree;

/// A tree oriented away from its smallest vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    ids: Vec<usize>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    subtree_size: Vec<usize>,
    profit: Vec<u64>,
}

impl RootedTree {
    /// Builds a rooted tree from vertex ids, tree edges and a profit
    /// function over the original ids.
    pub fn new(vertices: &[usize], edges: &[Edge], profit: impl Fn(usize) -> u64) -> Result<Self> {
        let ids = VertexSet::new(vertices.to_vec()).into_vec();
        if ids.is_empty() {
            return Err(Error::input("a tree needs at least one vertex"));
        }
        if ids.len() != vertices.len() {
            return Err(Error::input("tree vertex list contains duplicates"));
        }
        if edges.len() + 1 != ids.len() {
            return Err(Error::input(format!(
                "{} vertices need {} tree edges, got {}",
                ids.len(),
                ids.len() - 1,
                edges.len()
            )));
        }
        let local = |v: usize| {
            ids.binary_search(&v)
                .map_err(|_| Error::input(format!("edge endpoint {v} is not a tree vertex")))
        };
        let mut adj = vec![Vec::new(); ids.len()];
        for e in edges {
            let (a, b) = (local(e.u())?, local(e.v())?);
            adj[a].push(b);
            adj[b].push(a);
        }
        let n = ids.len();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        let mut order = vec![0];
        seen[0] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            adj[v].sort_unstable();
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(v);
                    children[v].push(u);
                    order.push(u);
                }
            }
        }
        if order.len() != n {
            return Err(Error::input("edges do not connect the tree vertices"));
        }
        let mut subtree_size = vec![1; n];
        for &v in order.iter().rev() {
            if let Some(p) = parent[v] {
                subtree_size[p] += subtree_size[v];
            }
        }
        let profit = ids.iter().map(|&v| profit(v)).collect();
        Ok(RootedTree {
            ids,
            parent,
            children,
            subtree_size,
            profit,
        })
    }

    /// A graph that is itself a tree (`m = n - 1`).
    pub fn from_graph(g: &Graph, profit: impl Fn(usize) -> u64) -> Result<Self> {
        let vertices: Vec<usize> = g.vertices().collect();
        RootedTree::new(&vertices, g.edges(), profit)
    }

    pub fn from_steiner(tree: &SteinerTree, profit: impl Fn(usize) -> u64) -> Result<Self> {
        RootedTree::new(&tree.vertices, &tree.edges, profit)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn root(&self) -> usize {
        self.ids[0]
    }

    pub fn vertices(&self) -> &[usize] {
        &self.ids
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[self.local(v)?].map(|p| self.ids[p])
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        self.local(v)
            .map(|l| self.children[l].iter().map(|&c| self.ids[c]).collect())
            .unwrap_or_default()
    }

    pub fn subtree_size(&self, v: usize) -> Option<usize> {
        self.local(v).map(|l| self.subtree_size[l])
    }

    pub fn profit(&self, v: usize) -> Option<u64> {
        self.local(v).map(|l| self.profit[l])
    }

    pub fn total_profit(&self) -> u64 {
        self.profit.iter().sum()
    }

    /// Tree edges as (parent, child) pairs in canonical form.
    pub fn edges(&self) -> Vec<Edge> {
        let mut edges: Vec<Edge> = (0..self.len())
            .filter_map(|c| {
                self.parent[c].map(|p| Edge::new(self.ids[p], self.ids[c]).expect("distinct"))
            })
            .collect();
        edges.sort_unstable();
        edges
    }

    fn local(&self, v: usize) -> Option<usize> {
        self.ids.binary_search(&v).ok()
    }

    fn to_set(&self, locals: impl IntoIterator<Item = usize>) -> VertexSet {
        locals.into_iter().map(|l| self.ids[l]).collect()
    }

    fn preorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        order
    }

    /// Subtree sizes counting only `alive` vertices. The root must be alive
    /// and the alive set must be closed under taking parents.
    fn alive_sizes(&self, alive: &[bool]) -> Vec<usize> {
        let mut size = vec![0; self.len()];
        for v in self.preorder().into_iter().rev() {
            if alive[v] {
                size[v] = 1 + self.alive_children(v, alive).map(|c| size[c]).sum::<usize>();
            }
        }
        size
    }

    fn alive_children<'a>(&'a self, v: usize, alive: &'a [bool]) -> impl Iterator<Item = usize> + 'a {
        self.children[v].iter().copied().filter(move |&c| alive[c])
    }

    fn collect_subtree(&self, v: usize, alive: &[bool], out: &mut Vec<usize>) {
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            out.push(x);
            stack.extend(self.alive_children(x, alive));
        }
    }

    /// Eligible subtree of the alive part with `floor(p/2) <= size <= p`.
    /// Returns `(root, members)` in local indices.
    fn eligible_local(&self, alive: &[bool], p: usize) -> (usize, Vec<usize>) {
        let size = self.alive_sizes(alive);
        let mut i = 0;
        while let Some(c) = self.alive_children(i, alive).find(|&c| size[c] >= p) {
            i = c;
        }
        let mut kids: Vec<usize> = self.alive_children(i, alive).collect();
        kids.sort_by(|&a, &b| size[b].cmp(&size[a]).then(a.cmp(&b)));
        let half = p / 2;
        let mut members = vec![i];
        match kids.first() {
            None => {}
            Some(&largest) if size[largest] >= half => {
                self.collect_subtree(largest, alive, &mut members);
            }
            Some(_) => {
                let mut total = 1;
                for &c in &kids {
                    self.collect_subtree(c, alive, &mut members);
                    total += size[c];
                    if total > half {
                        break;
                    }
                }
            }
        }
        (i, members)
    }
}

/// Vertex set of an eligible subtree with `floor(p/2) <= |T'| <= p`.
///
/// Descends from the root to a vertex whose subtree has at least `p`
/// vertices while every child subtree has fewer, then takes that vertex with
/// its largest child subtree if that child alone reaches `floor(p/2)`, and
/// otherwise accumulates children by decreasing size. For `p = |T|` the
/// whole tree is returned.
pub fn find_eligible_subtree(t: &RootedTree, p: usize) -> Result<VertexSet> {
    if p == 0 || p > t.len() {
        return Err(Error::input(format!(
            "eligible subtree size {p} outside 1..={}",
            t.len()
        )));
    }
    if p == t.len() {
        return Ok(t.ids.iter().copied().collect());
    }
    let alive = vec![true; t.len()];
    let (_, members) = t.eligible_local(&alive, p);
    Ok(t.to_set(members))
}

/// Pieces produced by repeatedly removing eligible subtrees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub pieces: Vec<VertexSet>,
    /// Roots of removed pieces, which stay behind in the remaining tree.
    pub replicated: Vec<usize>,
}

impl Decomposition {
    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }
}

/// Removes eligible subtrees with `p = k` (keeping each removed root in the
/// remainder) until at most `k` vertices are left.
///
/// `k = 1` cannot make progress on a tree with an edge, since a one-vertex
/// piece removes nothing; that case is an input error.
pub fn decompose_eligible(t: &RootedTree, k: usize) -> Result<Decomposition> {
    if k == 0 {
        return Err(Error::input("piece size bound k must be at least 1"));
    }
    if t.len() <= k {
        return Ok(Decomposition {
            pieces: vec![t.ids.iter().copied().collect()],
            replicated: Vec::new(),
        });
    }
    if k == 1 {
        return Err(Error::input(
            "k = 1 cannot decompose a tree with edges into edge-disjoint pieces",
        ));
    }
    let mut alive = vec![true; t.len()];
    let mut remaining = t.len();
    let mut pieces = Vec::new();
    let mut replicated = Vec::new();
    while remaining > k {
        let (root, members) = t.eligible_local(&alive, k);
        for &v in &members {
            if v != root {
                alive[v] = false;
                remaining -= 1;
            }
        }
        replicated.push(t.ids[root]);
        pieces.push(t.to_set(members));
    }
    pieces.push(t.to_set((0..t.len()).filter(|&v| alive[v])));
    replicated.sort_unstable();
    replicated.dedup();
    Ok(Decomposition { pieces, replicated })
}

/// Splits a tree at a centroid into two subtrees sharing only the centroid,
/// returned smaller first: the smaller has at most `ceil(n/2)` vertices and
/// the larger at most `ceil(2n/3)`.
pub fn split_folklore(t: &RootedTree) -> Result<(VertexSet, VertexSet)> {
    let n = t.len();
    if n < 2 {
        return Err(Error::input("cannot split a single-vertex tree"));
    }
    let heaviest = |v: usize| {
        let below = t.children[v].iter().map(|&c| t.subtree_size[c]).max().unwrap_or(0);
        below.max(n - t.subtree_size[v])
    };
    let centroid = (0..n).min_by_key(|&v| (heaviest(v), v)).expect("n >= 2");

    let all = vec![true; n];
    let mut components: Vec<Vec<usize>> = t.children[centroid]
        .iter()
        .map(|&c| {
            let mut out = Vec::new();
            t.collect_subtree(c, &all, &mut out);
            out
        })
        .collect();
    if t.parent[centroid].is_some() {
        let mut below = Vec::new();
        t.collect_subtree(centroid, &all, &mut below);
        let mut in_below = vec![false; n];
        for v in below {
            in_below[v] = true;
        }
        components.push((0..n).filter(|&v| !in_below[v]).collect());
    }
    for comp in &mut components {
        comp.sort_unstable();
    }
    components.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));

    let mut first = vec![centroid];
    let mut second = vec![centroid];
    let mut taken = 0;
    for comp in components {
        if 3 * taken < n - 1 {
            taken += comp.len();
            first.extend(comp);
        } else {
            second.extend(comp);
        }
    }
    let (a, b) = (t.to_set(first), t.to_set(second));
    Ok(if a.len() <= b.len() { (a, b) } else { (b, a) })
}

/// Per-vertex knapsack tables for the bounded-size subtree DP.
struct BestTable<'t> {
    tree: &'t RootedTree,
    /// `best[v][j]`: max profit of a subtree topped at `v` with exactly `j`
    /// vertices inside `v`'s rooted subtree.
    best: Vec<Vec<Option<u64>>>,
    /// `alloc[c][j]`: vertices handed to child `c` when its parent's merged
    /// table (up to and including `c`) reaches size `j`.
    alloc: Vec<Vec<usize>>,
}

impl<'t> BestTable<'t> {
    fn build(tree: &'t RootedTree, k: usize) -> Self {
        let n = tree.len();
        let mut best = vec![Vec::new(); n];
        let mut alloc = vec![Vec::new(); n];
        for v in tree.preorder().into_iter().rev() {
            let mut f = vec![None; k + 1];
            f[1] = Some(tree.profit[v]);
            for &c in &tree.children[v] {
                let fc = &best[c];
                let mut merged = f.clone();
                let mut take = vec![0; k + 1];
                for (a, fa) in f.iter().enumerate().skip(1) {
                    let Some(fa) = fa else { continue };
                    for b in 1..=k - a {
                        if let Some(fb) = fc[b] {
                            if merged[a + b].is_none_or(|m| fa + fb > m) {
                                merged[a + b] = Some(fa + fb);
                                take[a + b] = b;
                            }
                        }
                    }
                }
                f = merged;
                alloc[c] = take;
            }
            best[v] = f;
        }
        BestTable { tree, best, alloc }
    }

    /// Best subtree with at most `j` vertices: ties go to the smallest top
    /// vertex id, then the fewest vertices.
    fn best_within(&self, j: usize) -> SteinerTree {
        let mut choice: Option<(usize, usize, u64)> = None;
        for v in 0..self.tree.len() {
            for size in 1..=j {
                if let Some(p) = self.best[v][size] {
                    if choice.is_none_or(|(_, _, bp)| p > bp) {
                        choice = Some((v, size, p));
                    }
                }
            }
        }
        let (top, size, profit) = choice.expect("single vertices are always feasible");
        let mut members = Vec::new();
        self.unfold(top, size, &mut members);
        let vertices = self.tree.to_set(members.iter().copied());
        let edges = members
            .iter()
            .filter(|&&v| v != top)
            .map(|&v| {
                let p = self.tree.parent[v].expect("non-top member has a parent");
                Edge::new(self.tree.ids[p], self.tree.ids[v]).expect("distinct")
            })
            .collect();
        SteinerTree {
            vertices,
            edges: EdgeSet::new(edges),
            total_profit: profit,
        }
    }

    fn unfold(&self, v: usize, mut size: usize, out: &mut Vec<usize>) {
        out.push(v);
        for &c in self.tree.children[v].iter().rev() {
            let given = self.alloc[c][size];
            if given > 0 {
                self.unfold(c, given, out);
                size -= given;
            }
        }
        debug_assert_eq!(size, 1);
    }
}

/// Maximum-profit connected subtree with at most `k` vertices.
pub fn best_k_subtree(t: &RootedTree, k: usize) -> Result<SteinerTree> {
    if k == 0 {
        return Err(Error::input("subtree budget k must be at least 1"));
    }
    let k = k.min(t.len());
    Ok(BestTable::build(t, k).best_within(k))
}

/// `Best_j` for every `j` in `1..=k` from a single DP run; entry `j - 1`
/// holds the best subtree with at most `j` vertices.
pub fn best_subtrees_up_to(t: &RootedTree, k: usize) -> Result<Vec<SteinerTree>> {
    if k == 0 {
        return Err(Error::input("subtree budget k must be at least 1"));
    }
    let cap = k.min(t.len());
    let table = BestTable::build(t, cap);
    Ok((1..=k).map(|j| table.best_within(j.min(cap))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_tree(n: usize, profit: &[u64]) -> RootedTree {
        let edges: Vec<Edge> = (1..n).map(|i| Edge::new(i - 1, i).unwrap()).collect();
        let verts: Vec<usize> = (0..n).collect();
        RootedTree::new(&verts, &edges, |v| profit.get(v).copied().unwrap_or(1)).unwrap()
    }

    fn star_tree(leaves: usize) -> RootedTree {
        let edges: Vec<Edge> = (1..=leaves).map(|i| Edge::new(0, i).unwrap()).collect();
        let verts: Vec<usize> = (0..=leaves).collect();
        RootedTree::new(&verts, &edges, |_| 1).unwrap()
    }

    #[test]
    fn construction_and_accessors() {
        let t = path_tree(4, &[]);
        assert_eq!(t.root(), 0);
        assert_eq!(t.subtree_size(0), Some(4));
        assert_eq!(t.subtree_size(2), Some(2));
        assert_eq!(t.parent(3), Some(2));
        assert_eq!(t.children(1), vec![2]);
        assert_eq!(t.edges().len(), 3);
        let bad = RootedTree::new(&[0, 1, 2], &[Edge::new(0, 1).unwrap()], |_| 0);
        assert!(bad.is_err());
        let cyc = RootedTree::new(
            &[0, 1, 2, 3],
            &[
                Edge::new(0, 1).unwrap(),
                Edge::new(1, 2).unwrap(),
                Edge::new(0, 2).unwrap(),
            ],
            |_| 0,
        );
        assert!(cyc.is_err());
    }

    #[test]
    fn eligible_examples() {
        let p7 = path_tree(7, &[]);
        assert_eq!(find_eligible_subtree(&p7, 7).unwrap().len(), 7);
        let s = find_eligible_subtree(&p7, 4).unwrap();
        assert!((2..=4).contains(&s.len()));
        // Descent stops at vertex 3 (subtree {3..6}); its child 4 has 3 >= 2
        // vertices, so the piece is {3,4,5,6}.
        assert_eq!(&*s, &[3, 4, 5, 6]);

        // Each leaf subtree has size 1 = floor(3/2), so the first branch
        // applies: center plus the smallest-id leaf.
        let star = star_tree(5);
        assert_eq!(&*find_eligible_subtree(&star, 3).unwrap(), &[0, 1]);
        // With p = 5, floor(5/2) = 2 exceeds every leaf, so leaves accumulate
        // until the piece has 3 vertices.
        assert_eq!(&*find_eligible_subtree(&star, 5).unwrap(), &[0, 1, 2]);
        assert!(find_eligible_subtree(&star, 0).is_err());
        assert!(find_eligible_subtree(&star, 7).is_err());
    }

    #[test]
    fn decomposition_small() {
        let t = path_tree(5, &[]);
        let d = decompose_eligible(&t, 5).unwrap();
        assert_eq!(d.pieces.len(), 1);
        assert!(d.replicated.is_empty());
        let d = decompose_eligible(&t, 2).unwrap();
        assert!(d.pieces.iter().all(|p| p.len() <= 2));
        assert_eq!(d.pieces.len(), 4);
        assert!(decompose_eligible(&t, 1).is_err());
        assert!(decompose_eligible(&t, 0).is_err());
        let single = path_tree(1, &[]);
        assert_eq!(decompose_eligible(&single, 1).unwrap().pieces.len(), 1);
    }

    #[test]
    fn folklore_examples() {
        let (a, b) = split_folklore(&path_tree(3, &[])).unwrap();
        assert_eq!((&*a, &*b), (&[0, 1][..], &[1, 2][..]));
        let (a, b) = split_folklore(&path_tree(9, &[])).unwrap();
        assert!(a.len() <= 5 && b.len() <= 6);
        assert!(split_folklore(&path_tree(1, &[])).is_err());
        let (a, b) = split_folklore(&path_tree(2, &[])).unwrap();
        assert_eq!(a.len() + b.len(), 3);
    }

    #[test]
    fn best_k_examples() {
        let t = path_tree(3, &[5, 1, 5]);
        let one = best_k_subtree(&t, 1).unwrap();
        assert_eq!((one.total_profit, &*one.vertices), (5, &[0][..]));
        let two = best_k_subtree(&t, 2).unwrap();
        assert_eq!(two.total_profit, 6);
        assert!(two.is_tree());
        let all = best_k_subtree(&t, 10).unwrap();
        assert_eq!(all.total_profit, 11);
        assert_eq!(all.vertices.len(), 3);
        assert!(best_k_subtree(&t, 0).is_err());

        let by_budget = best_subtrees_up_to(&t, 4).unwrap();
        let profits: Vec<u64> = by_budget.iter().map(|s| s.total_profit).collect();
        assert_eq!(profits, vec![5, 6, 11, 11]);
    }
}
