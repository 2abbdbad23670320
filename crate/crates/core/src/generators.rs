//! Instance builders: the max-coverage gap-reduction graphs and seeded
//! random families.
//!
//! All randomness comes from a `ChaCha8Rng` seeded with the caller's `u64`,
//! so a seed pins the instance on every platform.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::greedy::SetSystem;

/// What a vertex of a reduction graph stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum Role {
    /// The hub `v_0` of the edge-vertex reduction.
    Root,
    /// The vertex for set `index` (0-based).
    Set { index: usize },
    /// Copy `copy` (0-based) of universe element `element`.
    Element { element: usize, copy: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionGraph {
    #[serde(skip)]
    pub graph: Graph,
    /// `roles[v]` describes vertex `v`.
    pub roles: Vec<Role>,
}

impl ReductionGraph {
    pub fn set_vertex(&self, index: usize) -> Option<usize> {
        self.roles.iter().position(|r| *r == Role::Set { index })
    }

    pub fn root(&self) -> Option<usize> {
        self.roles.iter().position(|r| *r == Role::Root)
    }
}

/// Lays out optional root, set vertices, then `q` copies of each covered
/// element in `(element, copy)` order, and returns the membership edges.
type Layout = (Vec<Role>, Vec<(usize, usize)>);

fn reduction_layout(sys: &SetSystem, q: usize, with_root: bool) -> Result<Layout> {
    if sys.is_empty() {
        return Err(Error::input("set system has no sets"));
    }
    if q == 0 {
        return Err(Error::input("multiplicity q must be at least 1"));
    }
    let mut roles = Vec::new();
    if with_root {
        roles.push(Role::Root);
    }
    let set_base = roles.len();
    roles.extend((0..sys.len()).map(|index| Role::Set { index }));
    let mut first_copy = vec![usize::MAX; sys.universe_size()];
    for element in sys.union() {
        first_copy[element] = roles.len();
        roles.extend((0..q).map(|copy| Role::Element { element, copy }));
    }
    let mut edges = Vec::new();
    for (i, set) in sys.sets().iter().enumerate() {
        for &x in set {
            edges.extend((0..q).map(|z| (set_base + i, first_copy[x] + z)));
        }
    }
    Ok((roles, edges))
}

/// Max-coverage to BCDS: the set vertices form a clique and each set vertex
/// is joined to all `q` copies of its elements. `|V| = m + q |U|` where `U`
/// is the union of the sets.
pub fn gen_mc_to_bcds(sys: &SetSystem, q: usize) -> Result<ReductionGraph> {
    let (roles, mut edges) = reduction_layout(sys, q, false)?;
    let m = sys.len();
    edges.extend((0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))));
    Ok(ReductionGraph {
        graph: Graph::new(roles.len(), edges)?,
        roles,
    })
}

/// Max-coverage to BEVD: a root `v_0` joined to every set vertex, plus the
/// same membership edges. `|V| = m + 1 + q |U|`.
pub fn gen_mc_to_bevd(sys: &SetSystem, q: usize) -> Result<ReductionGraph> {
    let (roles, mut edges) = reduction_layout(sys, q, true)?;
    edges.extend((1..=sys.len()).map(|s| (0, s)));
    Ok(ReductionGraph {
        graph: Graph::new(roles.len(), edges)?,
        roles,
    })
}

/// Default multiplicity `q = m^2`.
pub fn default_multiplicity(sys: &SetSystem) -> usize {
    (sys.len() * sys.len()).max(1)
}

/// Connected `G(n, p)`-style sample: a uniformly random recursive spanning
/// tree over a shuffled vertex order, plus every other pair independently
/// with probability `p`.
pub fn gen_random_connected(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::input("n must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut tree = HashSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (order[i], order[j]);
        tree.insert((a.min(b), a.max(b)));
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if tree.contains(&(a, b)) || rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::new(n, edges)
}

/// Random recursive tree on `n` vertices with shuffled labels.
pub fn gen_random_tree(n: usize, seed: u64) -> Result<Graph> {
    gen_random_connected(n, 0.0, seed)
}

/// Random set system with `m` sets over `0..n`; each membership is drawn
/// with probability `density`, and every set gets at least one element.
pub fn gen_random_set_system(n: usize, m: usize, density: f64, seed: u64) -> Result<SetSystem> {
    if n == 0 || m == 0 {
        return Err(Error::input("set systems need n >= 1 and m >= 1"));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::input(format!("density {density} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets = (0..m)
        .map(|_| {
            let mut s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(density)).collect();
            if s.is_empty() {
                s.push(rng.gen_range(0..n));
            }
            s
        })
        .collect();
    SetSystem::new(n, sets)
}
