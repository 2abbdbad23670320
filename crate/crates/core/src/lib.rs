//! Approximation algorithms for budgeted connected domination and
//! edge-vertex domination, with exhaustive oracles for checking them.
//!
//! The main entry points are [`solve_bcds`], [`solve_bevd`] and
//! [`solve_pevd`]. Everything is deterministic: ties break toward smaller
//! vertex ids and random generators take an explicit seed.

pub mod bcds;
pub mod edge_vertex;
pub mod error;
pub mod generators;
pub mod graph;
pub mod greedy;
pub mod oracles;
pub mod qst;
pub mod sweep;
pub mod tree;

pub use bcds::{bicriteria_stage, recurrence_check, solve_bcds, BcdsConfig, BcdsSolution, OptSearch};
pub use edge_vertex::{bcds_to_bevdc, bevdc_to_bcds, solve_bevd, solve_pevd, EdgeSolution};
pub use error::{Error, Result};
pub use graph::{Edge, EdgeSet, Graph, VertexSet};
pub use greedy::{greedy_dominating_set, ProfitLabeling, SetSystem};
pub use oracles::OracleCaps;
pub use qst::{solve_qst, QstBackend, QstInstance, SteinerTree};
pub use tree::RootedTree;
