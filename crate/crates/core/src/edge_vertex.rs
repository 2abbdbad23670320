//! Edge-vertex domination: an edge dominates both endpoints and all their
//! neighbors.
//!
//! Budgeted and partial variants reduce to max-k-cover and partial cover
//! over the set system `{N[e] : e in E}`, with edges indexed in canonical
//! lexicographic order. The connected variant is interchangeable with BCDS
//! through [`bcds_to_bevdc`] and [`bevdc_to_bcds`].

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeSet, Graph, VertexSet};
use crate::greedy::{greedy_max_k_cover, greedy_partial_cover, harmonic, SetSystem};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeSolution {
    pub edges: EdgeSet,
    pub dominated: usize,
}

/// Set system with one set `N[e]` per edge, in edge-index order.
pub fn edge_neighborhood_system(g: &Graph) -> SetSystem {
    let sets = g
        .edges()
        .iter()
        .map(|&e| g.edge_neighborhood(e).expect("graph edge").into_vec())
        .collect();
    SetSystem::new(g.n(), sets).expect("neighborhoods stay inside the vertex range")
}

fn pick_edges(g: &Graph, indices: &[usize]) -> Result<EdgeSolution> {
    let edges: EdgeSet = indices.iter().map(|&i| g.edges()[i]).collect();
    let dominated = g.edge_set_neighborhood(&edges)?.len();
    Ok(EdgeSolution { edges, dominated })
}

/// Greedy max-k-cover on the edge neighborhoods.
pub fn solve_bevd(g: &Graph, k: usize) -> Result<EdgeSolution> {
    if k == 0 {
        return Err(Error::input("budget k must be at least 1"));
    }
    if g.m() == 0 {
        return Ok(EdgeSolution {
            edges: EdgeSet::empty(),
            dominated: 0,
        });
    }
    let choice = greedy_max_k_cover(&edge_neighborhood_system(g), k)?;
    let sol = pick_edges(g, &choice.indices)?;
    debug_assert_eq!(sol.dominated, choice.covered);
    Ok(sol)
}

/// Greedy partial cover: fewest edges (greedily) dominating at least
/// `quota` vertices.
pub fn solve_pevd(g: &Graph, quota: usize) -> Result<EdgeSolution> {
    if quota > g.n() {
        return Err(Error::input(format!(
            "quota {quota} exceeds the {} vertices",
            g.n()
        )));
    }
    let choice = greedy_partial_cover(&edge_neighborhood_system(g), quota)?;
    pick_edges(g, &choice.indices)
}

/// `min{H(n'), H(2 Delta)}`, the greedy's guarantee for PEVD.
pub fn pevd_bound(g: &Graph, quota: usize) -> Result<BigRational> {
    let a = harmonic(quota as u64)?;
    let b = harmonic((2 * g.max_degree()).max(1) as u64)?;
    Ok(a.min(b))
}

/// Spanning tree of a connected vertex set: `|S| - 1` edges with the same
/// closed neighborhood.
pub fn bcds_to_bevdc(g: &Graph, s: &[usize]) -> Result<EdgeSet> {
    if VertexSet::new(s.to_vec()).len() < 2 {
        return Err(Error::input("need at least two vertices to span an edge set"));
    }
    g.induced_spanning_tree(s)
}

/// Endpoints of a connected edge set; at most `|E'| + 1` vertices with the
/// same closed neighborhood.
pub fn bevdc_to_bcds(g: &Graph, es: &[Edge]) -> Result<VertexSet> {
    if es.is_empty() {
        return Err(Error::input("edge set is empty"));
    }
    if let Some(e) = es.iter().find(|e| g.edge_index(**e).is_none()) {
        return Err(Error::input(format!("edge {e} is not in the graph")));
    }
    let verts: VertexSet = es.iter().flat_map(|e| e.endpoints()).collect();
    // Connectivity of the edge set itself, not of the induced subgraph.
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let pos = |v: usize| verts.binary_search(&v).expect("endpoint");
    for e in es {
        let (a, b) = (root(&mut parent, pos(e.u())), root(&mut parent, pos(e.v())));
        parent[a] = b;
    }
    let r0 = root(&mut parent, 0);
    if (1..verts.len()).any(|i| root(&mut parent, i) != r0) {
        return Err(Error::input("edge set is not connected"));
    }
    Ok(verts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{complete, path, star};

    fn edge(a: usize, b: usize) -> Edge {
        Edge::new(a, b).unwrap()
    }

    #[test]
    fn bevd_examples() {
        let s = solve_bevd(&star(4), 1).unwrap();
        assert_eq!((s.edges.len(), s.dominated), (1, 5));
        let p = solve_bevd(&path(5), 1).unwrap();
        assert_eq!(p.dominated, 4);
        assert!(p.edges[0] == edge(1, 2) || p.edges[0] == edge(2, 3));
        let single = Graph::new(1, []).unwrap();
        assert_eq!(solve_bevd(&single, 2).unwrap().dominated, 0);
        assert!(solve_bevd(&path(3), 0).is_err());
    }

    #[test]
    fn pevd_examples() {
        let p = path(5);
        let four = solve_pevd(&p, 4).unwrap();
        assert_eq!(four.edges.len(), 1);
        assert_eq!(&*four.edges, &[edge(1, 2)]);
        assert_eq!(solve_pevd(&p, 5).unwrap().edges.len(), 2);
        assert_eq!(solve_pevd(&p, 1).unwrap().edges.len(), 1);
        assert!(matches!(solve_pevd(&p, 6), Err(Error::Input(_))));
        let single = Graph::new(1, []).unwrap();
        assert!(matches!(solve_pevd(&single, 1), Err(Error::Infeasible(_))));
    }

    #[test]
    fn pevd_bound_takes_minimum() {
        // Path: max degree 2 so H(4) = 25/12 caps H(5) = 137/60.
        let b = pevd_bound(&path(5), 5).unwrap();
        assert_eq!(b, harmonic(4).unwrap());
        assert_eq!(pevd_bound(&path(5), 2).unwrap(), harmonic(2).unwrap());
    }

    #[test]
    fn transforms() {
        let p = path(3);
        assert_eq!(&*bcds_to_bevdc(&p, &[0, 1, 2]).unwrap(), &[edge(0, 1), edge(1, 2)]);
        let k3 = complete(3);
        let t = bcds_to_bevdc(&k3, &[0, 1, 2]).unwrap();
        assert_eq!(t.len(), 2);
        assert!(bcds_to_bevdc(&p, &[0, 2]).is_err());
        assert!(bcds_to_bevdc(&p, &[1]).is_err());

        assert_eq!(&*bevdc_to_bcds(&p, &[edge(0, 1)]).unwrap(), &[0, 1]);
        assert_eq!(&*bevdc_to_bcds(&p, &[edge(0, 1), edge(1, 2)]).unwrap(), &[0, 1, 2]);
        let p4 = path(4);
        assert!(bevdc_to_bcds(&p4, &[edge(0, 1), edge(2, 3)]).is_err());
        assert!(bevdc_to_bcds(&p4, &[]).is_err());
        assert!(bevdc_to_bcds(&p4, &[edge(0, 3)]).is_err());
    }
}
