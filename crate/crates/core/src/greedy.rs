//! Greedy engines: the profit-labelling greedy dominating set, greedy
//! max-k-cover and greedy partial cover.
//!
//! All cores run on exact integers and break ties toward the smallest
//! vertex id or set index.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Dominating set `D` with the per-vertex profit assigned when each member
/// was picked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfitLabeling {
    dominating_set: VertexSet,
    profit: Vec<u64>,
    pick_order: Vec<usize>,
}

impl ProfitLabeling {
    pub fn dominating_set(&self) -> &VertexSet {
        &self.dominating_set
    }

    pub fn profit(&self, v: usize) -> u64 {
        self.profit[v]
    }

    pub fn profits(&self) -> &[u64] {
        &self.profit
    }

    /// Members of `D` in the order the greedy picked them.
    pub fn pick_order(&self) -> &[usize] {
        &self.pick_order
    }

    pub fn total_profit(&self, s: &[usize]) -> u64 {
        s.iter().map(|&v| self.profit[v]).sum()
    }
}

/// Greedy dominating set with profit labels.
///
/// Each round picks the unpicked vertex whose closed neighborhood holds the
/// most still-undominated vertices, labels it with that count and marks
/// those vertices dominated. Profits therefore partition `V`.
pub fn greedy_dominating_set(g: &Graph) -> ProfitLabeling {
    let n = g.n();
    let mut undominated = vec![true; n];
    let mut remaining = n;
    let mut picked = vec![false; n];
    let mut profit = vec![0u64; n];
    let mut pick_order = Vec::new();

    while remaining > 0 {
        let gain = |v: usize| {
            std::iter::once(v)
                .chain(g.neighbors(v).iter().copied())
                .filter(|&u| undominated[u])
                .count()
        };
        let mut best: Option<(usize, usize)> = None;
        for v in (0..n).filter(|&v| !picked[v]) {
            let gv = gain(v);
            if best.is_none_or(|(_, bg)| gv > bg) {
                best = Some((v, gv));
            }
        }
        let (w, gw) = best.expect("an undominated vertex always leaves a candidate");
        // On a connected graph some undominated vertex has an unpicked
        // neighbor (or is unpicked itself), so the gain is positive.
        debug_assert!(gw > 0);
        picked[w] = true;
        profit[w] = gw as u64;
        pick_order.push(w);
        for u in std::iter::once(w).chain(g.neighbors(w).iter().copied()) {
            if undominated[u] {
                undominated[u] = false;
                remaining -= 1;
            }
        }
    }

    ProfitLabeling {
        dominating_set: pick_order.iter().copied().collect(),
        profit,
        pick_order,
    }
}

/// Universe `0..n` plus a collection of (possibly overlapping) subsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetSystem {
    n: usize,
    sets: Vec<Vec<usize>>,
}

impl SetSystem {
    pub fn new(n: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(sets.len());
        for (i, mut s) in sets.into_iter().enumerate() {
            if let Some(x) = s.iter().find(|&&x| x >= n) {
                return Err(Error::input(format!(
                    "set {i} contains element {x} outside universe 0..{n}"
                )));
            }
            s.sort_unstable();
            s.dedup();
            normalized.push(s);
        }
        Ok(SetSystem {
            n,
            sets: normalized,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            sets: Vec<Vec<usize>>,
        }
        let raw: Raw =
            serde_json::from_str(text).map_err(|e| Error::input(format!("set system JSON: {e}")))?;
        SetSystem::new(raw.n, raw.sets)
    }

    pub fn universe_size(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Elements covered by at least one set, ascending.
    pub fn union(&self) -> Vec<usize> {
        let mut mark = vec![false; self.n];
        for s in &self.sets {
            for &x in s {
                mark[x] = true;
            }
        }
        (0..self.n).filter(|&x| mark[x]).collect()
    }

    pub fn covered_by(&self, indices: &[usize]) -> usize {
        let mut mark = vec![false; self.n];
        indices
            .iter()
            .flat_map(|&i| self.sets[i].iter())
            .filter(|&&x| !std::mem::replace(&mut mark[x], true))
            .count()
    }

    pub fn max_set_size(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Indices chosen by a cover greedy (pick order) and the number of
/// elements they cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverChoice {
    pub indices: Vec<usize>,
    pub covered: usize,
}

struct CoverState<'a> {
    sys: &'a SetSystem,
    covered: Vec<bool>,
    chosen: Vec<bool>,
    choice: CoverChoice,
}

impl<'a> CoverState<'a> {
    fn new(sys: &'a SetSystem) -> Self {
        CoverState {
            sys,
            covered: vec![false; sys.n],
            chosen: vec![false; sys.sets.len()],
            choice: CoverChoice {
                indices: Vec::new(),
                covered: 0,
            },
        }
    }

    /// Unchosen set with the largest marginal gain, smallest index on ties.
    fn best(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (i, s) in self.sys.sets.iter().enumerate() {
            if self.chosen[i] {
                continue;
            }
            let gain = s.iter().filter(|&&x| !self.covered[x]).count();
            if best.is_none_or(|(_, bg)| gain > bg) {
                best = Some((i, gain));
            }
        }
        best
    }

    fn take(&mut self, i: usize) {
        self.chosen[i] = true;
        for &x in &self.sys.sets[i] {
            if !self.covered[x] {
                self.covered[x] = true;
                self.choice.covered += 1;
            }
        }
        self.choice.indices.push(i);
    }
}

/// Greedy max-k-cover: up to `k` picks of the set covering the most
/// uncovered elements, stopping early once no set adds anything.
pub fn greedy_max_k_cover(sys: &SetSystem, k: usize) -> Result<CoverChoice> {
    if sys.is_empty() {
        return Err(Error::input("set system has no sets"));
    }
    if k == 0 {
        return Err(Error::input("budget k must be at least 1"));
    }
    let mut state = CoverState::new(sys);
    while state.choice.indices.len() < k {
        match state.best() {
            Some((i, gain)) if gain > 0 => state.take(i),
            _ => break,
        }
    }
    Ok(state.choice)
}

/// Greedy partial cover: largest marginal gain until at least `quota`
/// elements are covered.
pub fn greedy_partial_cover(sys: &SetSystem, quota: usize) -> Result<CoverChoice> {
    let coverable = sys.union().len();
    if quota > coverable {
        return Err(Error::infeasible(format!(
            "quota {quota} exceeds the {coverable} coverable elements"
        )));
    }
    let mut state = CoverState::new(sys);
    while state.choice.covered < quota {
        let (i, _) = state.best().expect("quota is coverable");
        state.take(i);
    }
    Ok(state.choice)
}

/// Harmonic number `H(x) = 1 + 1/2 + ... + 1/x` as an exact rational.
pub fn harmonic(x: u64) -> Result<BigRational> {
    if x == 0 {
        return Err(Error::input("harmonic number needs x >= 1"));
    }
    let mut sum = BigRational::from_integer(BigInt::from(0));
    for i in 1..=x {
        sum += BigRational::new(BigInt::from(1), BigInt::from(i));
    }
    Ok(sum)
}
