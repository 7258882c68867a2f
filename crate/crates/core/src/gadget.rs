//! The `Z₂`-labelled gadget graph: odd `(s,s)`-trails of `G` as nonzero
//! `A`-paths of `H`.
//!
//! Every vertex `x` of `G` becomes a clique `[x]` with one node per edge
//! incident to `x`. Every edge `e = xy` becomes a *link* between its node in
//! `[x]` and its node in `[y]`. Clique edges get label 0 and a link gets
//! label `σ(e)`, which is 1 for all edges of an unsigned graph. `A = [s]`.
//!
//! Vertex-disjoint `A`-paths map to edge-disjoint `(s,s)`-trails with the
//! same parity, and a node set meeting every nonzero `A`-path maps to an
//! edge set meeting every odd `(s,s)`-trail.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, EdgeSet, Multigraph, VertexId};
use crate::trail::{check_chain, Trail};

#[derive(Clone, Debug)]
pub struct GadgetGraph {
    g: Multigraph,
    s: VertexId,
    /// Labels are stored as the sign bit: `h.sign(e)` is `γ_e`.
    h: Multigraph,
    a_set: BTreeSet<VertexId>,
    node: BTreeMap<(EdgeId, VertexId), VertexId>,
    /// For each node: its `G`-edge and the `G`-vertex whose clique holds it.
    owner: Vec<(EdgeId, VertexId)>,
    /// `H`-edge to `G`-edge, for links only.
    link_of: Vec<Option<EdgeId>>,
    link_for: HashMap<EdgeId, EdgeId>,
}

/// Builds `H` for `(G, s)`. Nodes are numbered by vertex, then incident edge id.
pub fn build_gadget(g: &Multigraph, s: VertexId) -> Result<GadgetGraph> {
    g.check_vertex(s)?;
    let mut node = BTreeMap::new();
    let mut owner = Vec::new();
    for x in g.vertices() {
        for &(e, _) in g.incident(x) {
            node.insert((e, x), VertexId(owner.len()));
            owner.push((e, x));
        }
    }
    let mut slots = Vec::new();
    let mut link_of = Vec::new();
    let mut link_for = HashMap::new();
    for (e, edge) in g.edges() {
        let a = node[&(e, edge.u)];
        let b = node[&(e, edge.v)];
        link_for.insert(e, EdgeId(slots.len()));
        slots.push(Some(Edge { u: a, v: b, signed: edge.signed }));
        link_of.push(Some(e));
    }
    for x in g.vertices() {
        let clique: Vec<VertexId> = g.incident(x).iter().map(|&(e, _)| node[&(e, x)]).collect();
        for (i, &a) in clique.iter().enumerate() {
            for &b in &clique[i + 1..] {
                slots.push(Some(Edge { u: a, v: b, signed: false }));
                link_of.push(None);
            }
        }
    }
    let h = Multigraph::from_slots(owner.len(), slots)?;
    let a_set = g.incident(s).iter().map(|&(e, _)| node[&(e, s)]).collect();
    Ok(GadgetGraph { g: g.clone(), s, h, a_set, node, owner, link_of, link_for })
}

impl GadgetGraph {
    pub fn g(&self) -> &Multigraph {
        &self.g
    }

    pub fn s(&self) -> VertexId {
        self.s
    }

    pub fn h(&self) -> &Multigraph {
        &self.h
    }

    pub fn a_set(&self) -> &BTreeSet<VertexId> {
        &self.a_set
    }

    pub fn node_count(&self) -> usize {
        self.owner.len()
    }

    /// The node of `[x]` standing for edge `e`.
    pub fn node(&self, e: EdgeId, x: VertexId) -> Option<VertexId> {
        self.node.get(&(e, x)).copied()
    }

    pub fn owner(&self, n: VertexId) -> (EdgeId, VertexId) {
        self.owner[n.0]
    }

    pub fn label(&self, h_edge: EdgeId) -> u8 {
        self.h.sign(h_edge)
    }

    /// The `G`-edge a link stands for; `None` for clique edges.
    pub fn g_edge_of(&self, h_edge: EdgeId) -> Option<EdgeId> {
        self.link_of.get(h_edge.0).copied().flatten()
    }

    pub fn link_of_g_edge(&self, e: EdgeId) -> Option<EdgeId> {
        self.link_for.get(&e).copied()
    }

    /// `γ(P)` for a walk in `H`.
    pub fn gamma(&self, p: &Trail) -> u8 {
        self.h.parity(p.edges().iter().copied())
    }

    /// `π`: the `(s,s)`-trail formed by the links of an `A`-path, in order.
    pub fn path_to_trail(&self, p: &Trail) -> Result<Trail> {
        check_chain(&self.h, p).map_err(|v| Error::NotAPath(v.to_string()))?;
        if p.is_trivial() || !p.is_path() {
            return Err(Error::NotAPath(format!("{p} is not a path with at least one edge")));
        }
        if !self.a_set.contains(&p.start()) || !self.a_set.contains(&p.end()) {
            return Err(Error::EndpointsNotInA);
        }
        let links: Vec<EdgeId> = p.edges().iter().filter_map(|&e| self.g_edge_of(e)).collect();
        let t = Trail::walk(&self.g, self.s, &links)?;
        if t.end() != self.s {
            return Err(Error::Internal(format!("image of {p} ends at {:?}", t.end())));
        }
        Ok(t)
    }

    /// `σ`: the `A`-path through the nodes of `t`'s edges.
    pub fn trail_to_path(&self, t: &Trail) -> Result<Trail> {
        if t.is_trivial() {
            return Err(Error::EmptyTrail);
        }
        check_chain(&self.g, t).map_err(Error::InvalidTrail)?;
        if t.start() != self.s || t.end() != self.s {
            return Err(Error::BadParameter(format!("{t} is not an (s,s)-trail")));
        }
        let mut vertices = Vec::with_capacity(2 * t.len());
        let mut edges = Vec::with_capacity(2 * t.len() - 1);
        let vs = t.vertices();
        for (i, &e) in t.edges().iter().enumerate() {
            let (a, b) = (self.node[&(e, vs[i])], self.node[&(e, vs[i + 1])]);
            if let Some(&prev) = vertices.last() {
                edges.push(self.clique_edge(prev, a));
            }
            vertices.push(a);
            edges.push(self.link_for[&e]);
            vertices.push(b);
        }
        Trail::from_parts(vertices, edges)
    }

    fn clique_edge(&self, a: VertexId, b: VertexId) -> EdgeId {
        self.h
            .incident(a)
            .iter()
            .find(|&&(e, y)| y == b && self.g_edge_of(e).is_none())
            .map(|&(e, _)| e)
            .expect("consecutive trail edges share a clique")
    }

    /// Edges of `G` whose nodes appear in `cover`.
    pub fn vertex_cover_to_edge_cover(&self, cover: &BTreeSet<VertexId>) -> EdgeSet {
        cover.iter().filter(|n| n.0 < self.owner.len()).map(|&n| self.owner[n.0].0).collect()
    }

    /// Graphviz rendering: 0-labelled edges dashed, 1-labelled solid, `A` boxed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph gadget {\n");
        for n in self.h.vertices() {
            let (e, x) = self.owner[n.0];
            let shape = if self.a_set.contains(&n) { ", shape=box" } else { "" };
            let _ = writeln!(out, "  {} [label=\"{}@{}\"{}];", n.0, e.0, x.0, shape);
        }
        for (_, e) in self.h.edges() {
            let style = if e.signed { "solid" } else { "dashed" };
            let _ = writeln!(out, "  {} -- {} [style={}];", e.u.0, e.v.0, style);
        }
        out.push_str("}\n");
        out
    }
}
