//! Unit-capacity `(u,v)`-flow: edge connectivity, minimum cuts and
//! edge-disjoint path families.
//!
//! Augmenting paths are found by BFS over adjacency lists sorted by edge id,
//! so every result is a deterministic function of the graph.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeSet, Multigraph, VertexId};
use crate::trail::Trail;

/// Pairwise edge-disjoint simple `(u,v)`-paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathFamily {
    pub u: VertexId,
    pub v: VertexId,
    pub paths: Vec<Trail>,
}

impl PathFamily {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// Flow on each edge slot: +1 means from `edge.u` to `edge.v`, -1 the reverse.
struct UnitFlow<'g> {
    g: &'g Multigraph,
    flow: Vec<i8>,
    value: usize,
}

impl<'g> UnitFlow<'g> {
    fn run(g: &'g Multigraph, s: VertexId, t: VertexId, limit: usize) -> Self {
        let mut f = UnitFlow { g, flow: vec![0; g.edge_bound()], value: 0 };
        while f.value < limit && f.augment(s, t) {
            f.value += 1;
        }
        f
    }

    /// Flow currently sent from `x` along `e`.
    fn out_flow(&self, e: EdgeId, x: VertexId) -> i8 {
        let edge = self.g.edge(e).expect("flow runs on present edges");
        if edge.u == x {
            self.flow[e.0]
        } else {
            -self.flow[e.0]
        }
    }

    fn push(&mut self, e: EdgeId, x: VertexId) {
        let edge = self.g.edge(e).expect("flow runs on present edges");
        self.flow[e.0] += if edge.u == x { 1 } else { -1 };
    }

    fn augment(&mut self, s: VertexId, t: VertexId) -> bool {
        let n = self.g.vertex_count();
        let mut pred: Vec<Option<(EdgeId, VertexId)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s.0] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if x == t {
                break;
            }
            for &(e, y) in self.g.incident(x) {
                if !seen[y.0] && self.out_flow(e, x) < 1 {
                    seen[y.0] = true;
                    pred[y.0] = Some((e, x));
                    queue.push_back(y);
                }
            }
        }
        if !seen[t.0] {
            return false;
        }
        let mut at = t;
        while let Some((e, x)) = pred[at.0] {
            self.push(e, x);
            at = x;
        }
        true
    }

    fn residual_reach(&self, s: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.g.vertex_count()];
        seen[s.0] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &(e, y) in self.g.incident(x) {
                if !seen[y.0] && self.out_flow(e, x) < 1 {
                    seen[y.0] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Splits the flow into `value` simple paths, discarding cycles.
    fn decompose(mut self, s: VertexId, t: VertexId) -> Vec<Trail> {
        let g = self.g;
        let mut paths = Vec::with_capacity(self.value);
        for _ in 0..self.value {
            let mut vertices = vec![s];
            let mut edges: Vec<EdgeId> = Vec::new();
            let mut pos = vec![usize::MAX; g.vertex_count()];
            pos[s.0] = 0;
            let mut at = s;
            while at != t {
                let &(e, y) = g
                    .incident(at)
                    .iter()
                    .find(|&&(e, _)| self.out_flow(e, at) == 1)
                    .expect("flow conservation leaves an outgoing unit");
                // consume the unit
                self.push(e, y);
                if pos[y.0] != usize::MAX {
                    // cycle back to y: drop it
                    let cut = pos[y.0];
                    for x in &vertices[cut + 1..] {
                        pos[x.0] = usize::MAX;
                    }
                    vertices.truncate(cut + 1);
                    edges.truncate(cut);
                } else {
                    pos[y.0] = vertices.len();
                    vertices.push(y);
                    edges.push(e);
                }
                at = y;
            }
            paths.push(Trail::from_parts(vertices, edges).expect("lengths agree"));
        }
        paths
    }
}

fn check_terminals(g: &Multigraph, u: VertexId, v: VertexId) -> Result<()> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(Error::SameVertex(u));
    }
    Ok(())
}

/// λ(u,v): the maximum number of edge-disjoint `(u,v)`-paths.
pub fn lambda(g: &Multigraph, u: VertexId, v: VertexId) -> Result<usize> {
    check_terminals(g, u, v)?;
    Ok(UnitFlow::run(g, u, v, usize::MAX).value)
}

/// A minimum `(u,v)`-cut: edges leaving the residual-reachable side of `u`.
pub fn min_cut(g: &Multigraph, u: VertexId, v: VertexId) -> Result<EdgeSet> {
    check_terminals(g, u, v)?;
    let f = UnitFlow::run(g, u, v, usize::MAX);
    let side = f.residual_reach(u);
    Ok(g.edges()
        .filter(|(_, e)| side[e.u.0] != side[e.v.0])
        .map(|(id, _)| id)
        .collect())
}

/// Exactly `count` pairwise edge-disjoint simple `(u,v)`-paths.
pub fn disjoint_paths(g: &Multigraph, u: VertexId, v: VertexId, count: usize) -> Result<PathFamily> {
    check_terminals(g, u, v)?;
    let f = UnitFlow::run(g, u, v, count);
    if f.value < count {
        return Err(Error::InsufficientConnectivity { requested: count, available: f.value });
    }
    Ok(PathFamily { u, v, paths: f.decompose(u, v) })
}
