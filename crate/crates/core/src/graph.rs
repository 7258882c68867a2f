//! Loop-free undirected multigraphs with stable edge identities.
//!
//! Every edge has a dense [`EdgeId`] that never changes: deleting edges
//! leaves an empty slot instead of renumbering, so trails, covers and cuts
//! computed on derived graphs can be compared directly with the original.
//!
//! Each edge also carries a sign bit. A set of edges is *odd* when it holds
//! an odd number of signed edges; with every edge signed (the default) this
//! is plain edge-count parity.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Debug for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    /// Membership in the signed set; only signed edges count toward parity.
    pub signed: bool,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        Edge { u, v, signed: true }
    }

    /// The endpoint opposite `x`. `x` must be an endpoint.
    #[inline]
    pub fn other(&self, x: VertexId) -> VertexId {
        debug_assert!(x == self.u || x == self.v);
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    #[inline]
    pub fn joins(&self, a: VertexId, b: VertexId) -> bool {
        (self.u == a && self.v == b) || (self.u == b && self.v == a)
    }

    #[inline]
    pub fn sign(&self) -> u8 {
        self.signed as u8
    }
}

/// A set of edge identities, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeSet(BTreeSet<EdgeId>);

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet(BTreeSet::new())
    }

    pub fn insert(&mut self, e: EdgeId) -> bool {
        self.0.insert(e)
    }

    pub fn remove(&mut self, e: EdgeId) -> bool {
        self.0.remove(&e)
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.contains(&e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.union(&other.0).copied().collect())
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn first(&self) -> Option<EdgeId> {
        self.0.first().copied()
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        EdgeSet(iter.into_iter().collect())
    }
}

impl Extend<EdgeId> for EdgeSet {
    fn extend<I: IntoIterator<Item = EdgeId>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl<'a> IntoIterator for &'a EdgeSet {
    type Item = EdgeId;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, EdgeId>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// An immutable loop-free multigraph.
///
/// Edge slots are indexed by [`EdgeId`]; an empty slot is an edge that was
/// masked out. Adjacency lists are sorted by edge id, which is the global
/// tie-break order used throughout the crate.
#[derive(Clone, PartialEq, Eq)]
pub struct Multigraph {
    vertex_count: usize,
    slots: Vec<Option<Edge>>,
    adjacency: Vec<Vec<(EdgeId, VertexId)>>,
}

impl fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (id, e) in self.edges() {
            m.entry(&id, &(e.u, e.v, e.signed));
        }
        m.finish()
    }
}

impl Multigraph {
    /// Builds a graph from edge slots; slot `i` becomes `EdgeId(i)`.
    pub fn from_slots(vertex_count: usize, slots: Vec<Option<Edge>>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (i, slot) in slots.iter().enumerate() {
            let Some(e) = slot else { continue };
            for x in [e.u, e.v] {
                if x.0 >= vertex_count {
                    return Err(Error::VertexOutOfRange { vertex: x, count: vertex_count });
                }
            }
            if e.u == e.v {
                return Err(Error::LoopWouldForm { edge: EdgeId(i), at: e.u });
            }
            adjacency[e.u.0].push((EdgeId(i), e.v));
            adjacency[e.v.0].push((EdgeId(i), e.u));
        }
        Ok(Multigraph { vertex_count, slots, adjacency })
    }

    /// Unsigned convenience constructor: every edge is signed.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let slots = edges
            .into_iter()
            .map(|(u, v)| Some(Edge::new(VertexId(u), VertexId(v))))
            .collect();
        Self::from_slots(vertex_count, slots)
    }

    pub fn from_signed_edges<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, bool)>,
    {
        let slots = edges
            .into_iter()
            .map(|(u, v, signed)| Some(Edge { u: VertexId(u), v: VertexId(v), signed }))
            .collect();
        Self::from_slots(vertex_count, slots)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// One past the largest edge id (present or masked).
    #[inline]
    pub fn edge_bound(&self) -> usize {
        self.slots.len()
    }

    /// Number of present edges.
    pub fn edge_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count).map(VertexId)
    }

    #[inline]
    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.slots.get(id.0).and_then(Option::as_ref)
    }

    pub fn contains_edge(&self, id: EdgeId) -> bool {
        self.edge(id).is_some()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.as_ref().map(|e| (EdgeId(i), e)))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges().map(|(id, _)| id)
    }

    pub fn slots(&self) -> &[Option<Edge>] {
        &self.slots
    }

    /// `(edge, neighbour)` pairs at `x`, sorted by edge id.
    #[inline]
    pub fn incident(&self, x: VertexId) -> &[(EdgeId, VertexId)] {
        &self.adjacency[x.0]
    }

    pub fn degree(&self, x: VertexId) -> usize {
        self.adjacency[x.0].len()
    }

    pub fn check_vertex(&self, x: VertexId) -> Result<()> {
        if x.0 < self.vertex_count {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: x, count: self.vertex_count })
        }
    }

    /// Sign bit of a present edge (0 for masked ids).
    #[inline]
    pub fn sign(&self, id: EdgeId) -> u8 {
        self.edge(id).map_or(0, Edge::sign)
    }

    pub fn sigma(&self) -> EdgeSet {
        self.edges().filter(|(_, e)| e.signed).map(|(id, _)| id).collect()
    }

    /// `|F ∩ Σ| mod 2`.
    pub fn parity<I: IntoIterator<Item = EdgeId>>(&self, edges: I) -> u8 {
        edges.into_iter().fold(0, |acc, e| acc ^ self.sign(e))
    }

    /// Edges joining `a` and `b` (the parallel class), ascending.
    pub fn edges_between(&self, a: VertexId, b: VertexId) -> EdgeSet {
        self.incident(a).iter().filter(|&&(_, y)| y == b).map(|&(e, _)| e).collect()
    }

    /// Same graph with the given edges masked out.
    pub fn without_edges(&self, removed: &EdgeSet) -> Multigraph {
        let slots = self
            .slots
            .iter()
            .enumerate()
            .map(|(i, s)| if removed.contains(EdgeId(i)) { None } else { *s })
            .collect();
        Multigraph::from_slots(self.vertex_count, slots).expect("masking keeps a graph valid")
    }

    /// Same edges with the signed set replaced by `sigma`.
    pub fn with_sigma(&self, sigma: &EdgeSet) -> Multigraph {
        let slots = self
            .slots
            .iter()
            .enumerate()
            .map(|(i, s)| s.map(|e| Edge { signed: sigma.contains(EdgeId(i)), ..e }))
            .collect();
        Multigraph::from_slots(self.vertex_count, slots).expect("re-signing keeps a graph valid")
    }

    /// Merges `u` and `v` into a single vertex `s`.
    ///
    /// Vertices other than `v` keep their relative order; `v` disappears and
    /// is mapped onto `s`, which sits at `u`'s position in the new numbering.
    /// Edge ids are unchanged.
    pub fn identify_vertices(&self, u: VertexId, v: VertexId) -> Result<Identification> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SameVertex(u));
        }
        if let Some(e) = self.edges_between(u, v).first() {
            return Err(Error::LoopWouldForm { edge: e, at: u });
        }
        let shift = |x: VertexId| if x.0 > v.0 { VertexId(x.0 - 1) } else { x };
        let vertex_map: Vec<VertexId> = self
            .vertices()
            .map(|x| if x == v { shift(u) } else { shift(x) })
            .collect();
        let slots = self
            .slots
            .iter()
            .map(|s| {
                s.map(|e| Edge { u: vertex_map[e.u.0], v: vertex_map[e.v.0], signed: e.signed })
            })
            .collect();
        let graph = Multigraph::from_slots(self.vertex_count - 1, slots)?;
        Ok(Identification { graph, vertex_map, s: shift(u) })
    }

    /// Connected components of `G - removed`, each sorted, listed by smallest vertex.
    pub fn components(&self, removed: &BTreeSet<VertexId>) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.vertex_count];
        for x in removed {
            if x.0 < self.vertex_count {
                seen[x.0] = true;
            }
        }
        let mut out = Vec::new();
        for root in self.vertices() {
            if seen[root.0] {
                continue;
            }
            seen[root.0] = true;
            let mut comp = vec![root];
            let mut stack = vec![root];
            while let Some(x) = stack.pop() {
                for &(_, y) in self.incident(x) {
                    if !seen[y.0] {
                        seen[y.0] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    /// `E(S)` together with `E(S, C)` for every component `C` of `G - S`.
    pub fn boundary_and_induced(&self, s: &BTreeSet<VertexId>) -> Boundary {
        let comps = self.components(s);
        let mut comp_of = vec![usize::MAX; self.vertex_count];
        for (i, c) in comps.iter().enumerate() {
            for x in c {
                comp_of[x.0] = i;
            }
        }
        let mut induced = EdgeSet::new();
        let mut cuts = vec![EdgeSet::new(); comps.len()];
        for (id, e) in self.edges() {
            match (s.contains(&e.u), s.contains(&e.v)) {
                (true, true) => {
                    induced.insert(id);
                }
                (true, false) => {
                    cuts[comp_of[e.v.0]].insert(id);
                }
                (false, true) => {
                    cuts[comp_of[e.u.0]].insert(id);
                }
                (false, false) => {}
            }
        }
        Boundary { induced, components: comps.into_iter().zip(cuts).collect() }
    }

    /// `δ(X)`: edges with exactly one end in `x`.
    pub fn cut(&self, x: &BTreeSet<VertexId>) -> EdgeSet {
        self.edges()
            .filter(|(_, e)| x.contains(&e.u) != x.contains(&e.v))
            .map(|(id, _)| id)
            .collect()
    }

    /// Is `b` reachable from `a`?
    pub fn reachable(&self, a: VertexId, b: VertexId) -> bool {
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![a];
        seen[a.0] = true;
        while let Some(x) = stack.pop() {
            if x == b {
                return true;
            }
            for &(_, y) in self.incident(x) {
                if !seen[y.0] {
                    seen[y.0] = true;
                    stack.push(y);
                }
            }
        }
        false
    }

    /// Graphviz rendering; unsigned edges are drawn dashed.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph {name} {{");
        for x in self.vertices() {
            let _ = writeln!(out, "  {};", x.0);
        }
        for (id, e) in self.edges() {
            let style = if e.signed { "" } else { ", style=dashed" };
            let _ = writeln!(out, "  {} -- {} [label=\"e{}\"{}];", e.u.0, e.v.0, id.0, style);
        }
        out.push_str("}\n");
        out
    }
}

/// Result of [`Multigraph::identify_vertices`].
#[derive(Clone, Debug)]
pub struct Identification {
    pub graph: Multigraph,
    /// Old vertex index to new vertex.
    pub vertex_map: Vec<VertexId>,
    /// The merged vertex.
    pub s: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Boundary {
    /// `E(S)`.
    pub induced: EdgeSet,
    /// Each component of `G - S` with its edge set `E(S, C)`.
    pub components: Vec<(Vec<VertexId>, EdgeSet)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> BTreeSet<VertexId> {
        xs.iter().map(|&x| VertexId(x)).collect()
    }

    fn eset(xs: &[usize]) -> EdgeSet {
        xs.iter().map(|&x| EdgeId(x)).collect()
    }

    #[test]
    fn loops_are_rejected() {
        let err = Multigraph::from_edges(2, [(0, 1), (1, 1)]).unwrap_err();
        assert_eq!(err, Error::LoopWouldForm { edge: EdgeId(1), at: VertexId(1) });
    }

    #[test]
    fn identify_path_gives_parallel_pair() {
        // u=0, a=1, v=2
        let g = Multigraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let id = g.identify_vertices(VertexId(0), VertexId(2)).unwrap();
        assert_eq!(id.graph.vertex_count(), 2);
        assert_eq!(id.s, VertexId(0));
        assert_eq!(id.graph.edges_between(VertexId(0), VertexId(1)), eset(&[0, 1]));
    }

    #[test]
    fn identify_rejects_uv_edge_and_same_vertex() {
        let g = Multigraph::from_edges(2, [(0, 1)]).unwrap();
        assert!(matches!(
            g.identify_vertices(VertexId(0), VertexId(1)),
            Err(Error::LoopWouldForm { .. })
        ));
        assert_eq!(
            g.identify_vertices(VertexId(0), VertexId(0)).unwrap_err(),
            Error::SameVertex(VertexId(0))
        );
    }

    #[test]
    fn identify_preserves_edge_ids_and_parity() {
        let g = Multigraph::from_signed_edges(4, [(0, 2, true), (2, 1, false), (1, 3, true), (3, 0, true)])
            .unwrap();
        let id = g.identify_vertices(VertexId(0), VertexId(1)).unwrap();
        assert_eq!(id.graph.edge_count(), g.edge_count());
        for (e, edge) in g.edges() {
            let h = id.graph.edge(e).unwrap();
            assert_eq!(h.signed, edge.signed);
            assert_eq!(h.u, id.vertex_map[edge.u.0]);
        }
        let f = eset(&[0, 1, 3]);
        assert_eq!(g.parity(f.iter()), id.graph.parity(f.iter()));
    }

    #[test]
    fn triangle_components_and_boundary() {
        // s=0, a=1, b=2
        let g = Multigraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(g.components(&set(&[0])), vec![vec![VertexId(1), VertexId(2)]]);
        let b = g.boundary_and_induced(&set(&[0]));
        assert!(b.induced.is_empty());
        assert_eq!(b.components.len(), 1);
        assert_eq!(b.components[0].1, eset(&[0, 2]));

        let all = g.boundary_and_induced(&set(&[0, 1, 2]));
        assert_eq!(all.induced.len(), 3);
        assert!(all.components.is_empty());

        assert_eq!(g.components(&BTreeSet::new()).len(), 1);
    }

    #[test]
    fn isolated_vertices_are_singletons() {
        let g = Multigraph::from_edges(4, [(0, 1)]).unwrap();
        let comps = g.components(&BTreeSet::new());
        assert_eq!(comps.len(), 3);
        assert_eq!(comps[1], vec![VertexId(2)]);
    }

    #[test]
    fn parity_respects_sigma() {
        let g = Multigraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(g.parity(std::iter::empty()), 0);
        assert_eq!(g.parity(eset(&[0, 1, 2]).iter()), 1);
        let unsigned = g.with_sigma(&EdgeSet::new());
        assert_eq!(unsigned.parity(eset(&[0, 1, 2]).iter()), 0);
    }

    #[test]
    fn masked_edges_keep_ids() {
        let g = Multigraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let h = g.without_edges(&eset(&[1]));
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.edge_bound(), 3);
        assert!(h.edge(EdgeId(1)).is_none());
        assert_eq!(h.incident(VertexId(2)), &[(EdgeId(2), VertexId(0))]);
    }

    #[test]
    fn dot_marks_unsigned_dashed() {
        let g = Multigraph::from_signed_edges(2, [(0, 1, false)]).unwrap();
        assert!(g.to_dot("g").contains("style=dashed"));
    }
}
