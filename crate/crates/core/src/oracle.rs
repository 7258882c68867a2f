//! Brute-force ground truth for odd trails: existence, `ν`, `τ`.
//!
//! Nothing here uses the solver modules. Every odd `(u,v)`-trail contains,
//! as an edge set, a *minimal* one: a trail that never revisits a
//! `(vertex, parity)` state (otherwise an even closed piece can be cut out)
//! and stops the first time it reaches `v` with odd parity. Those are
//! enumerated by DFS and reduced to their inclusion-minimal edge sets, which
//! is all that matters for both packing (any packing can be shrunk onto
//! minimal trails) and covering (hitting the minimal sets hits everything).
//!
//! The same enumeration works for `u = v` and for terminal sets `(C, D)`.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeSet, Multigraph, VertexId};
use crate::search;
use crate::trail::Trail;

/// Edge masks are `u128`; nothing larger is ever searched.
pub const HARD_EDGE_LIMIT: usize = 128;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_edges: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_edges: 20 }
    }
}

impl OracleBudget {
    pub fn edges(max_edges: usize) -> Self {
        OracleBudget { max_edges }
    }

    fn check(&self, g: &Multigraph) -> Result<()> {
        let cap = self.max_edges.min(HARD_EDGE_LIMIT);
        if g.edge_count() > cap {
            return Err(Error::BudgetExceeded { what: "oracle edges", size: g.edge_count(), cap });
        }
        Ok(())
    }
}

/// Inclusion-minimal odd trails between two vertex sets.
#[derive(Clone, Debug)]
pub struct MinimalTrails {
    /// Bit `i` of a mask is `edges[i]`.
    pub edges: Vec<EdgeId>,
    pub masks: Vec<u128>,
    trails: Vec<Trail>,
}

impl MinimalTrails {
    pub fn trails(&self) -> &[Trail] {
        &self.trails
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    fn to_edge_set(&self, mask: u128) -> EdgeSet {
        (0..self.edges.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.edges[i]).collect()
    }
}

struct Search<'a> {
    g: &'a Multigraph,
    bit: HashMap<EdgeId, usize>,
    targets: &'a BTreeSet<VertexId>,
    visited: Vec<[bool; 2]>,
    edges: Vec<EdgeId>,
    found: Vec<(u128, VertexId, Vec<EdgeId>)>,
}

impl Search<'_> {
    fn dfs(&mut self, start: VertexId, at: VertexId, parity: u8, used: u128) {
        for &(e, y) in self.g.incident(at) {
            let b = self.bit[&e];
            if used >> b & 1 == 1 {
                continue;
            }
            let np = parity ^ self.g.sign(e);
            if self.visited[y.0][np as usize] {
                continue;
            }
            self.edges.push(e);
            if np == 1 && self.targets.contains(&y) {
                self.found.push((used | 1 << b, start, self.edges.clone()));
            } else {
                self.visited[y.0][np as usize] = true;
                self.dfs(start, y, np, used | 1 << b);
                self.visited[y.0][np as usize] = false;
            }
            self.edges.pop();
        }
    }
}

/// Minimal odd trails from any vertex of `sources` to any vertex of `targets`.
pub fn minimal_odd_trails(
    g: &Multigraph,
    sources: &BTreeSet<VertexId>,
    targets: &BTreeSet<VertexId>,
    budget: &OracleBudget,
) -> Result<MinimalTrails> {
    budget.check(g)?;
    for &x in sources.iter().chain(targets) {
        g.check_vertex(x)?;
    }
    let edges: Vec<EdgeId> = g.edge_ids().collect();
    let bit = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut walker = Search {
        g,
        bit,
        targets,
        visited: vec![[false; 2]; g.vertex_count()],
        edges: Vec::new(),
        found: Vec::new(),
    };
    // An even prefix ending in another source can be cut off, so sources at
    // parity zero are never re-entered.
    for &c in sources {
        walker.visited[c.0][0] = true;
    }
    for &c in sources {
        walker.dfs(c, c, 0, 0);
    }
    let found = search::minimal_masks(walker.found.into_iter().map(|(m, s, es)| (m, (s, es))).collect());
    let mut masks = Vec::with_capacity(found.len());
    let mut trails = Vec::with_capacity(found.len());
    for (m, (start, es)) in found {
        masks.push(m);
        trails.push(Trail::walk(g, start, &es)?);
    }
    Ok(MinimalTrails { edges, masks, trails })
}

fn pair(u: VertexId, v: VertexId) -> (BTreeSet<VertexId>, BTreeSet<VertexId>) {
    (BTreeSet::from([u]), BTreeSet::from([v]))
}

/// Is there an odd `(u,v)`-trail? `u = v` asks for a closed odd trail.
pub fn odd_trail_exists(g: &Multigraph, u: VertexId, v: VertexId) -> Result<bool> {
    odd_trail_exists_with(g, u, v, &OracleBudget::default())
}

pub fn odd_trail_exists_with(g: &Multigraph, u: VertexId, v: VertexId, budget: &OracleBudget) -> Result<bool> {
    let (c, d) = pair(u, v);
    odd_trail_exists_between(g, &c, &d, budget)
}

pub fn odd_trail_exists_between(
    g: &Multigraph,
    c: &BTreeSet<VertexId>,
    d: &BTreeSet<VertexId>,
    budget: &OracleBudget,
) -> Result<bool> {
    // Same search as the enumeration, stopping at the first hit.
    budget.check(g)?;
    for &x in c.iter().chain(d) {
        g.check_vertex(x)?;
    }
    let edges: Vec<EdgeId> = g.edge_ids().collect();
    let bit: HashMap<EdgeId, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut visited = vec![[false; 2]; g.vertex_count()];
    for &s in c {
        visited[s.0][0] = true;
    }
    fn go(
        g: &Multigraph,
        bit: &HashMap<EdgeId, usize>,
        d: &BTreeSet<VertexId>,
        visited: &mut [[bool; 2]],
        at: VertexId,
        parity: u8,
        used: u128,
    ) -> bool {
        for &(e, y) in g.incident(at) {
            let b = bit[&e];
            if used >> b & 1 == 1 {
                continue;
            }
            let np = parity ^ g.sign(e);
            if visited[y.0][np as usize] {
                continue;
            }
            if np == 1 && d.contains(&y) {
                return true;
            }
            visited[y.0][np as usize] = true;
            let hit = go(g, bit, d, visited, y, np, used | 1 << b);
            visited[y.0][np as usize] = false;
            if hit {
                return true;
            }
        }
        false
    }
    Ok(c.iter().any(|&s| go(g, &bit, d, &mut visited, s, 0, 0)))
}

/// `ν(u,v)`: maximum number of edge-disjoint odd `(u,v)`-trails.
pub fn nu_exact(g: &Multigraph, u: VertexId, v: VertexId) -> Result<usize> {
    Ok(nu_witness(g, u, v, &OracleBudget::default())?.len())
}

/// A maximum packing of odd `(u,v)`-trails.
pub fn nu_witness(g: &Multigraph, u: VertexId, v: VertexId, budget: &OracleBudget) -> Result<Vec<Trail>> {
    let (c, d) = pair(u, v);
    nu_witness_between(g, &c, &d, budget)
}

pub fn nu_witness_between(
    g: &Multigraph,
    c: &BTreeSet<VertexId>,
    d: &BTreeSet<VertexId>,
    budget: &OracleBudget,
) -> Result<Vec<Trail>> {
    let fam = minimal_odd_trails(g, c, d, budget)?;
    Ok(search::max_disjoint(&fam.masks, usize::MAX).into_iter().map(|i| fam.trails[i].clone()).collect())
}

/// `τ(u,v)` and a minimum cover.
pub fn tau_exact(g: &Multigraph, u: VertexId, v: VertexId) -> Result<(usize, EdgeSet)> {
    tau_exact_with(g, u, v, &OracleBudget::default())
}

pub fn tau_exact_with(g: &Multigraph, u: VertexId, v: VertexId, budget: &OracleBudget) -> Result<(usize, EdgeSet)> {
    let (c, d) = pair(u, v);
    tau_exact_between(g, &c, &d, budget)
}

pub fn tau_exact_between(
    g: &Multigraph,
    c: &BTreeSet<VertexId>,
    d: &BTreeSet<VertexId>,
    budget: &OracleBudget,
) -> Result<(usize, EdgeSet)> {
    let fam = minimal_odd_trails(g, c, d, budget)?;
    let cover = fam.to_edge_set(search::min_hitting_set(&fam.masks, usize::MAX).expect("all edges hit everything"));
    debug_assert!(!odd_trail_exists_between(&g.without_edges(&cover), c, d, budget)?);
    Ok((cover.len(), cover))
}

/// Does deleting `cover` leave no odd `(u,v)`-trail?
pub fn is_cover(g: &Multigraph, u: VertexId, v: VertexId, cover: &EdgeSet, budget: &OracleBudget) -> Result<bool> {
    let (c, d) = pair(u, v);
    is_cover_between(g, &c, &d, cover, budget)
}

pub fn is_cover_between(
    g: &Multigraph,
    c: &BTreeSet<VertexId>,
    d: &BTreeSet<VertexId>,
    cover: &EdgeSet,
    budget: &OracleBudget,
) -> Result<bool> {
    for e in cover.iter() {
        if !g.contains_edge(e) {
            return Err(Error::UnknownEdge(e));
        }
    }
    Ok(!odd_trail_exists_between(&g.without_edges(cover), c, d, budget)?)
}
