//! Brute-force exact solvers used as ground truth.
//!
//! Nothing here calls into the solvers it validates: vertex sets are `u128`
//! bitmasks, neighborhoods are recomputed from adjacency, and connectivity is
//! a mask flood fill.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeSet, Graph, VertexSet};
use crate::qst::QstInstance;
use crate::tree::RootedTree;

type Mask = u128;
const MASK_BITS: usize = 128;

/// Enumeration limits. Acceptance tests pin these explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    /// Largest graph for connected-subset enumeration (BCDS).
    pub max_vertices: usize,
    /// Largest graph for the exhaustive QST oracle.
    pub max_qst_vertices: usize,
    /// Largest tree for the bounded-subtree oracle.
    pub max_tree_vertices: usize,
    /// Most edge subsets the BEVD/PEVD oracles may enumerate.
    pub max_subsets: u128,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_vertices: 16,
            max_qst_vertices: 10,
            max_tree_vertices: 14,
            max_subsets: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Vertices(VertexSet),
    Edges(EdgeSet),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub optimum_value: u64,
    pub witness: Witness,
    pub enumerated_count: u64,
}

struct Masks {
    closed: Vec<Mask>,
    open: Vec<Mask>,
}

impl Masks {
    fn of(g: &Graph) -> Result<Self> {
        if g.n() > MASK_BITS {
            return Err(Error::capacity(format!(
                "oracles handle at most {MASK_BITS} vertices"
            )));
        }
        let open: Vec<Mask> = g
            .vertices()
            .map(|v| g.neighbors(v).iter().fold(0, |m, &u| m | 1 << u))
            .collect();
        let closed = open.iter().enumerate().map(|(v, &m)| m | 1 << v).collect();
        Ok(Masks { closed, open })
    }

    fn dominated(&self, set: Mask) -> Mask {
        bits(set).fold(0, |acc, v| acc | self.closed[v])
    }

    fn connected(&self, set: Mask) -> bool {
        if set == 0 {
            return false;
        }
        let mut reached: Mask = set & set.wrapping_neg();
        loop {
            let grown = bits(reached).fold(reached, |acc, v| acc | (self.open[v] & set));
            if grown == reached {
                return reached == set;
            }
            reached = grown;
        }
    }
}

fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            v
        })
    })
}

fn mask_to_set(m: Mask) -> VertexSet {
    bits(m).collect()
}

/// Order used to pick one witness among ties: fewer members first, then the
/// lexicographically smaller sorted list.
fn witness_precedes(a: Mask, b: Mask) -> bool {
    let (ca, cb) = (a.count_ones(), b.count_ones());
    if ca != cb {
        return ca < cb;
    }
    let diff = a ^ b;
    diff != 0 && a & (diff & diff.wrapping_neg()) != 0
}

/// Calls `visit` once for every connected vertex subset with at most
/// `max_size` members, growing each set from its minimum vertex through
/// neighbors with larger ids (the classic ESU scheme, so no duplicates).
fn for_each_connected_subset(masks: &Masks, n: usize, max_size: usize, visit: &mut impl FnMut(Mask)) {
    fn grow(
        masks: &Masks,
        set: Mask,
        reach: Mask,
        mut ext: Mask,
        above: Mask,
        left: usize,
        visit: &mut impl FnMut(Mask),
    ) {
        visit(set);
        if left == 0 {
            return;
        }
        while ext != 0 {
            let w = ext.trailing_zeros() as usize;
            ext &= ext - 1;
            let fresh = masks.open[w] & !reach & above;
            grow(masks, set | 1 << w, reach | masks.closed[w], ext | fresh, above, left - 1, visit);
        }
    }
    if max_size == 0 {
        return;
    }
    for v in 0..n {
        let above: Mask = !0 << v;
        grow(masks, 1 << v, masks.closed[v], masks.open[v] & above, above, max_size - 1, visit);
    }
}

fn check_bcds_caps(g: &Graph, k: usize, caps: &OracleCaps) -> Result<()> {
    if g.n() > caps.max_vertices {
        return Err(Error::capacity(format!(
            "BCDS oracle handles at most {} vertices, graph has {}",
            caps.max_vertices,
            g.n()
        )));
    }
    if k > caps.max_vertices {
        return Err(Error::capacity(format!(
            "BCDS oracle handles budgets up to {}",
            caps.max_vertices
        )));
    }
    Ok(())
}

/// Exact BCDS: the largest `|N[S]|` over connected `S` with `|S| <= k`.
pub fn oracle_bcds(g: &Graph, k: usize, caps: &OracleCaps) -> Result<OracleResult> {
    check_bcds_caps(g, k, caps)?;
    let masks = Masks::of(g)?;
    let mut best: Option<(u32, Mask)> = None;
    let mut count = 0u64;
    for_each_connected_subset(&masks, g.n(), k.min(g.n()), &mut |set| {
        count += 1;
        let value = masks.dominated(set).count_ones();
        let better = match best {
            None => true,
            Some((bv, bs)) => value > bv || (value == bv && witness_precedes(set, bs)),
        };
        if better {
            best = Some((value, set));
        }
    });
    let (value, set) = best.unwrap_or((0, 0));
    Ok(OracleResult {
        optimum_value: value as u64,
        witness: Witness::Vertices(mask_to_set(set)),
        enumerated_count: count,
    })
}

/// Every connected `S` with `|S| <= k` that attains the BCDS optimum.
pub fn optimal_bcds_solutions(g: &Graph, k: usize, caps: &OracleCaps) -> Result<(u64, Vec<VertexSet>)> {
    check_bcds_caps(g, k, caps)?;
    let masks = Masks::of(g)?;
    let mut best = 0u32;
    let mut sets: Vec<Mask> = Vec::new();
    for_each_connected_subset(&masks, g.n(), k.min(g.n()), &mut |set| {
        let value = masks.dominated(set).count_ones();
        if value > best {
            best = value;
            sets.clear();
        }
        if value == best {
            sets.push(set);
        }
    });
    sets.sort_by(|&a, &b| {
        if a == b {
            std::cmp::Ordering::Equal
        } else if witness_precedes(a, b) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    Ok((best as u64, sets.into_iter().map(mask_to_set).collect()))
}

fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

fn edge_masks(g: &Graph, masks: &Masks) -> Vec<Mask> {
    g.edges()
        .iter()
        .map(|e| masks.closed[e.u()] | masks.closed[e.v()])
        .collect()
}

fn edges_of(g: &Graph, idx: &[usize]) -> EdgeSet {
    idx.iter().map(|&i| g.edges()[i]).collect()
}

/// Exact BEVD: the largest `|N[E']|` over all edge sets with `|E'| <= k`.
pub fn oracle_bevd(g: &Graph, k: usize, caps: &OracleCaps) -> Result<OracleResult> {
    let masks = Masks::of(g)?;
    let m = g.m();
    let em = edge_masks(g, &masks);
    if k >= m {
        let all = em.iter().fold(0, |a, &b| a | b);
        return Ok(OracleResult {
            optimum_value: all.count_ones() as u64,
            witness: Witness::Edges(g.edges().iter().copied().collect()),
            enumerated_count: 1,
        });
    }
    let total: u128 = (0..=k).map(|s| binomial(m, s)).fold(0, u128::saturating_add);
    if total > caps.max_subsets {
        return Err(Error::capacity(format!(
            "BEVD oracle would enumerate {total} edge subsets (cap {})",
            caps.max_subsets
        )));
    }
    let mut best: (u32, Vec<usize>) = (0, Vec::new());
    let mut count = 1u64;
    for size in 1..=k {
        for combo in (0..m).combinations(size) {
            count += 1;
            let value = combo.iter().fold(0, |a, &i| a | em[i]).count_ones();
            if value > best.0 {
                best = (value, combo);
            }
        }
    }
    Ok(OracleResult {
        optimum_value: best.0 as u64,
        witness: Witness::Edges(edges_of(g, &best.1)),
        enumerated_count: count,
    })
}

/// Exact PEVD: the fewest edges with `|N[E']| >= quota`, searching sizes in
/// increasing order.
pub fn oracle_pevd(g: &Graph, quota: usize, caps: &OracleCaps) -> Result<OracleResult> {
    let masks = Masks::of(g)?;
    let m = g.m();
    let em = edge_masks(g, &masks);
    let reachable = em.iter().fold(0, |a, &b| a | b).count_ones() as usize;
    if quota > reachable {
        return Err(Error::infeasible(format!(
            "no edge set dominates {quota} vertices (maximum {reachable})"
        )));
    }
    let mut count = 1u64;
    if quota == 0 {
        return Ok(OracleResult {
            optimum_value: 0,
            witness: Witness::Edges(EdgeSet::empty()),
            enumerated_count: count,
        });
    }
    let mut budget: u128 = 1;
    for size in 1..=m {
        budget = budget.saturating_add(binomial(m, size));
        if budget > caps.max_subsets {
            return Err(Error::capacity(format!(
                "PEVD oracle exceeded {} edge subsets before size {size}",
                caps.max_subsets
            )));
        }
        for combo in (0..m).combinations(size) {
            count += 1;
            let value = combo.iter().fold(0, |a, &i| a | em[i]).count_ones() as usize;
            if value >= quota {
                return Ok(OracleResult {
                    optimum_value: size as u64,
                    witness: Witness::Edges(edges_of(g, &combo)),
                    enumerated_count: count,
                });
            }
        }
    }
    unreachable!("the full edge set reaches every feasible quota")
}

/// Exact QST by checking all `2^n` vertex subsets; the optimum is the edge
/// count `|S| - 1` of the smallest connected `S` meeting the quota.
pub fn oracle_qst(inst: &QstInstance<'_>, caps: &OracleCaps) -> Result<OracleResult> {
    let g = inst.graph();
    let n = g.n();
    if n > caps.max_qst_vertices {
        return Err(Error::capacity(format!(
            "QST oracle handles at most {} vertices, graph has {n}",
            caps.max_qst_vertices
        )));
    }
    let total: u64 = inst.profit().iter().sum();
    if inst.quota() > total {
        return Err(Error::infeasible(format!(
            "quota {} exceeds total profit {total}",
            inst.quota()
        )));
    }
    let masks = Masks::of(g)?;
    let mut best: Option<Mask> = None;
    let mut count = 0u64;
    for set in 1..(1 as Mask) << n {
        count += 1;
        let profit: u64 = bits(set).map(|v| inst.profit()[v]).sum();
        if profit >= inst.quota()
            && masks.connected(set)
            && best.is_none_or(|b| witness_precedes(set, b))
        {
            best = Some(set);
        }
    }
    let set = best.expect("the whole graph is connected and meets the quota");
    Ok(OracleResult {
        optimum_value: set.count_ones() as u64 - 1,
        witness: Witness::Vertices(mask_to_set(set)),
        enumerated_count: count,
    })
}

/// Exact best bounded subtree: max profit over connected vertex subsets of
/// the tree with at most `k` members.
pub fn oracle_best_k(t: &RootedTree, k: usize, caps: &OracleCaps) -> Result<OracleResult> {
    let n = t.len();
    if n > caps.max_tree_vertices {
        return Err(Error::capacity(format!(
            "bounded-subtree oracle handles at most {} vertices, tree has {n}",
            caps.max_tree_vertices
        )));
    }
    if k == 0 {
        return Err(Error::input("subtree budget k must be at least 1"));
    }
    let ids = t.vertices();
    let local = |v: usize| ids.binary_search(&v).expect("tree vertex");
    let edges: Vec<(usize, usize)> = t.edges().iter().map(|e: &Edge| (local(e.u()), local(e.v()))).collect();
    let profit: Vec<u64> = ids.iter().map(|&v| t.profit(v).expect("tree vertex")).collect();
    let mut best: Option<(u64, Mask)> = None;
    let mut count = 0u64;
    for set in 1..(1 as Mask) << n {
        let size = set.count_ones() as usize;
        if size > k {
            continue;
        }
        count += 1;
        let inside = edges
            .iter()
            .filter(|&&(a, b)| set >> a & 1 == 1 && set >> b & 1 == 1)
            .count();
        // A vertex subset of a tree is connected iff it spans |S| - 1 edges.
        if inside + 1 != size {
            continue;
        }
        let value: u64 = bits(set).map(|v| profit[v]).sum();
        let better = match best {
            None => true,
            Some((bv, bs)) => value > bv || (value == bv && witness_precedes(set, bs)),
        };
        if better {
            best = Some((value, set));
        }
    }
    let (value, set) = best.expect("single vertices are connected");
    Ok(OracleResult {
        optimum_value: value,
        witness: Witness::Vertices(bits(set).map(|l| ids[l]).collect()),
        enumerated_count: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{complete, path, star};

    fn caps() -> OracleCaps {
        OracleCaps::default()
    }

    #[test]
    fn bcds_examples() {
        assert_eq!(oracle_bcds(&star(4), 1, &caps()).unwrap().optimum_value, 5);
        let r = oracle_bcds(&path(5), 2, &caps()).unwrap();
        assert_eq!(r.optimum_value, 4);
        assert_eq!(r.witness, Witness::Vertices(VertexSet::new(vec![1, 2])));
        assert_eq!(oracle_bcds(&path(5), 9, &caps()).unwrap().optimum_value, 5);
        // A path on 5 vertices has 15 connected subsets (its subpaths).
        assert_eq!(oracle_bcds(&path(5), 5, &caps()).unwrap().enumerated_count, 15);
        assert!(matches!(oracle_bcds(&path(17), 2, &caps()), Err(Error::Capacity(_))));
    }

    #[test]
    fn connected_subsets_of_complete_graph() {
        // Every nonempty subset of K_5 is connected: 2^5 - 1.
        let r = oracle_bcds(&complete(5), 5, &caps()).unwrap();
        assert_eq!(r.enumerated_count, 31);
    }

    #[test]
    fn all_optimal_bcds_sets() {
        let (opt, sets) = optimal_bcds_solutions(&path(5), 2, &caps()).unwrap();
        assert_eq!(opt, 4);
        let as_vecs: Vec<Vec<usize>> = sets.into_iter().map(VertexSet::into_vec).collect();
        assert_eq!(as_vecs, vec![vec![1, 2], vec![2, 3]]);
    }

    #[test]
    fn bevd_examples() {
        assert_eq!(oracle_bevd(&star(4), 1, &caps()).unwrap().optimum_value, 5);
        assert_eq!(oracle_bevd(&path(5), 1, &caps()).unwrap().optimum_value, 4);
        assert_eq!(oracle_bevd(&path(5), 4, &caps()).unwrap().optimum_value, 5);
        let tight = OracleCaps {
            max_subsets: 3,
            ..caps()
        };
        assert!(matches!(oracle_bevd(&path(5), 2, &tight), Err(Error::Capacity(_))));
    }

    #[test]
    fn pevd_examples() {
        assert_eq!(oracle_pevd(&path(5), 5, &caps()).unwrap().optimum_value, 2);
        assert_eq!(oracle_pevd(&path(5), 1, &caps()).unwrap().optimum_value, 1);
        assert_eq!(oracle_pevd(&star(4), 5, &caps()).unwrap().optimum_value, 1);
        assert_eq!(oracle_pevd(&path(5), 0, &caps()).unwrap().optimum_value, 0);
        assert!(matches!(oracle_pevd(&path(5), 6, &caps()), Err(Error::Infeasible(_))));
    }

    #[test]
    fn qst_examples() {
        let g = path(3);
        let zero = QstInstance::new(&g, vec![1; 3], 0).unwrap();
        assert_eq!(oracle_qst(&zero, &caps()).unwrap().optimum_value, 0);
        let full = QstInstance::new(&g, vec![1; 3], 3).unwrap();
        assert_eq!(oracle_qst(&full, &caps()).unwrap().optimum_value, 2);
        let over = QstInstance::new(&g, vec![1; 3], 4).unwrap();
        assert!(matches!(oracle_qst(&over, &caps()), Err(Error::Infeasible(_))));
    }

    #[test]
    fn best_k_examples() {
        let g = path(4);
        let t = RootedTree::from_graph(&g, |v| [4, 0, 7, 1][v]).unwrap();
        assert_eq!(oracle_best_k(&t, 1, &caps()).unwrap().optimum_value, 7);
        assert_eq!(oracle_best_k(&t, 4, &caps()).unwrap().optimum_value, 12);
        assert_eq!(oracle_best_k(&t, 3, &caps()).unwrap().optimum_value, 11);
    }

    #[test]
    fn mask_connectivity() {
        let g = path(4);
        let masks = Masks::of(&g).unwrap();
        assert!(masks.connected(0b0110));
        assert!(!masks.connected(0b1001));
        assert!(!masks.connected(0));
    }
}
