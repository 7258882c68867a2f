//! Exact packing and covering of nonzero `A`-paths in a gadget graph, and
//! the dual value `p(Y, B₀, B₁)` of a valid triple.
//!
//! The search enumerates *minimal* nonzero `A`-paths only. Internal nodes
//! never lie in `A`, since a nonzero path through an `A`-node splits into
//! two `A`-paths, one of which is nonzero. A path also never closes a chord
//! `x_i y` that would reach `y` with the same label over fewer nodes. Every
//! nonzero `A`-path contains the node set of one of these, so packing and
//! covering over them is exact.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gadget::GadgetGraph;
use crate::graph::{EdgeId, VertexId};
use crate::search;
use crate::trail::Trail;

/// Node masks are `u128`.
pub const HARD_NODE_LIMIT: usize = 128;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ApathBudget {
    pub max_nodes: usize,
}

impl Default for ApathBudget {
    fn default() -> Self {
        ApathBudget { max_nodes: 40 }
    }
}

impl ApathBudget {
    pub fn nodes(max_nodes: usize) -> Self {
        ApathBudget { max_nodes }
    }

    fn check(&self, gg: &GadgetGraph) -> Result<()> {
        let cap = self.max_nodes.min(HARD_NODE_LIMIT);
        if gg.node_count() > cap {
            return Err(Error::BudgetExceeded { what: "gadget nodes", size: gg.node_count(), cap });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum APathOutcome {
    /// `requested_k` vertex-disjoint nonzero `A`-paths.
    Packing { paths: Vec<Trail>, requested_k: usize },
    /// A minimum node set meeting every nonzero `A`-path; at most `2k - 2`.
    Cover { nodes: BTreeSet<VertexId>, requested_k: usize },
}

struct Enumerator<'a> {
    gg: &'a GadgetGraph,
    nodes: Vec<VertexId>,
    edges: Vec<EdgeId>,
    /// Label of the prefix ending at `nodes[i]`.
    labels: Vec<u8>,
    on: Vec<bool>,
    found: Vec<(u128, Trail)>,
}

impl Enumerator<'_> {
    fn extend(&mut self) {
        let h = self.gg.h();
        let at = *self.nodes.last().expect("a path has a start");
        let m = self.nodes.len() - 1;
        for &(f, y) in h.incident(at) {
            if self.on[y.0] {
                continue;
            }
            let label = self.labels[m] ^ h.sign(f);
            let shortcut = h.incident(y).iter().any(|&(c, x)| {
                x != at && self.on[x.0] && {
                    let i = self.nodes.iter().position(|&n| n == x).expect("x is on the path");
                    self.labels[i] ^ h.sign(c) == label
                }
            });
            if shortcut {
                continue;
            }
            if self.gg.a_set().contains(&y) {
                // only record each path from its smaller end
                if label == 1 && y > self.nodes[0] {
                    let mut vertices = self.nodes.clone();
                    vertices.push(y);
                    let mut edges = self.edges.clone();
                    edges.push(f);
                    let mask = vertices.iter().fold(0u128, |a, n| a | 1 << n.0);
                    let p = Trail::from_parts(vertices, edges).expect("lengths agree");
                    self.found.push((mask, p));
                }
                continue;
            }
            self.on[y.0] = true;
            self.nodes.push(y);
            self.edges.push(f);
            self.labels.push(label);
            self.extend();
            self.labels.pop();
            self.edges.pop();
            self.nodes.pop();
            self.on[y.0] = false;
        }
    }
}

/// Inclusion-minimal nonzero `A`-paths with their node masks.
pub fn minimal_nonzero_apaths(gg: &GadgetGraph, budget: &ApathBudget) -> Result<Vec<(u128, Trail)>> {
    budget.check(gg)?;
    let mut en = Enumerator {
        gg,
        nodes: Vec::new(),
        edges: Vec::new(),
        labels: Vec::new(),
        on: vec![false; gg.node_count()],
        found: Vec::new(),
    };
    for &a in gg.a_set() {
        en.on[a.0] = true;
        en.nodes.push(a);
        en.labels.push(0);
        en.extend();
        en.labels.pop();
        en.nodes.pop();
        en.on[a.0] = false;
    }
    Ok(search::minimal_masks(en.found))
}

/// `ν(H, A, γ)`.
pub fn nu_apaths(gg: &GadgetGraph, budget: &ApathBudget) -> Result<usize> {
    let paths = minimal_nonzero_apaths(gg, budget)?;
    let masks: Vec<u128> = paths.iter().map(|(m, _)| *m).collect();
    Ok(search::max_disjoint(&masks, usize::MAX).len())
}

/// `k` vertex-disjoint nonzero `A`-paths, or a minimum node cover of them.
pub fn solve_apaths(gg: &GadgetGraph, k: usize, budget: &ApathBudget) -> Result<APathOutcome> {
    let paths = minimal_nonzero_apaths(gg, budget)?;
    let masks: Vec<u128> = paths.iter().map(|(m, _)| *m).collect();
    let packed = search::max_disjoint(&masks, k);
    if packed.len() == k {
        let paths = packed.into_iter().map(|i| paths[i].1.clone()).collect();
        return Ok(APathOutcome::Packing { paths, requested_k: k });
    }
    // ν < k, so a cover of size 2k - 2 exists.
    let bound = 2 * k - 2;
    let hit = search::min_hitting_set(&masks, bound).ok_or_else(|| {
        Error::Internal(format!("no node cover of size {bound} although fewer than {k} paths pack"))
    })?;
    let nodes = (0..gg.node_count()).filter(|&i| hit >> i & 1 == 1).map(VertexId).collect();
    Ok(APathOutcome::Cover { nodes, requested_k: k })
}

/// Does deleting `nodes` leave no nonzero `A`-path?
pub fn covers_all(gg: &GadgetGraph, nodes: &BTreeSet<VertexId>, budget: &ApathBudget) -> Result<bool> {
    let mask = nodes.iter().fold(0u128, |a, n| a | 1 << n.0);
    Ok(minimal_nonzero_apaths(gg, budget)?.iter().all(|(m, _)| m & mask != 0))
}

/// `(Y, B₀, B₁)` with `[s] − Y ⊆ B₀` and the three sets disjoint.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidTriple {
    pub y: BTreeSet<VertexId>,
    pub b0: BTreeSet<VertexId>,
    pub b1: BTreeSet<VertexId>,
}

impl ValidTriple {
    pub fn validate(&self, gg: &GadgetGraph) -> Result<()> {
        let n = gg.node_count();
        if let Some(x) = self.y.iter().chain(&self.b0).chain(&self.b1).find(|x| x.0 >= n) {
            return Err(Error::InvalidTriple(format!("{x:?} is not a gadget node")));
        }
        if !self.y.is_disjoint(&self.b0) || !self.y.is_disjoint(&self.b1) || !self.b0.is_disjoint(&self.b1) {
            return Err(Error::InvalidTriple("Y, B0, B1 overlap".into()));
        }
        if let Some(a) = gg.a_set().iter().find(|a| !self.y.contains(a) && !self.b0.contains(a)) {
            return Err(Error::InvalidTriple(format!("A-node {a:?} is in neither Y nor B0")));
        }
        Ok(())
    }
}

/// `p(Y, B₀, B₁) = |Y| + Σ_K ⌊|(B₀ ∪ B₁) ∩ K| / 2⌋`, over the components `K`
/// of `H − Y` after switching at `B₁` and deleting every 0-labelled edge
/// with both ends in `B₀ ∪ B₁`.
pub fn eval_triple(gg: &GadgetGraph, t: &ValidTriple) -> Result<usize> {
    t.validate(gg)?;
    let h = gg.h();
    let b: BTreeSet<VertexId> = t.b0.union(&t.b1).copied().collect();
    let dropped = h
        .edges()
        .filter(|(_, e)| {
            let switched = e.sign() ^ t.b1.contains(&e.u) as u8 ^ t.b1.contains(&e.v) as u8;
            b.contains(&e.u) && b.contains(&e.v) && switched == 0
        })
        .map(|(id, _)| id)
        .collect();
    let rest = h.without_edges(&dropped);
    let p = t.y.len()
        + rest.components(&t.y).iter().map(|k| k.iter().filter(|x| b.contains(x)).count() / 2).sum::<usize>();
    Ok(p)
}

/// `Σ⌊rᵢ/2⌋ ≥ ⌊(Σrᵢ − (q−1))/2⌋` for `q = r.len() ≥ 2`.
pub fn floor_inequality_check(r: &[u64]) -> bool {
    assert!(r.len() >= 2, "needs at least two terms");
    let lhs: i64 = r.iter().map(|&x| (x / 2) as i64).sum();
    let total: i64 = r.iter().map(|&x| x as i64).sum();
    lhs >= (total - (r.len() as i64 - 1)).div_euclid(2)
}
