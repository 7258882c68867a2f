//! Trails, their verification, and contacts between a path and a trail.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeSet, Multigraph, VertexId};

/// An alternating vertex/edge sequence with no repeated edge.
///
/// `vertices.len() == edges.len() + 1`; a trivial trail is a single vertex.
/// Incidence against a particular graph is checked by [`verify_trail`], not
/// at construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TrailDoc", into = "TrailDoc")]
pub struct Trail {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

#[derive(Serialize, Deserialize)]
struct TrailDoc {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl TryFrom<TrailDoc> for Trail {
    type Error = Error;

    fn try_from(doc: TrailDoc) -> Result<Self> {
        Trail::from_parts(doc.vertices, doc.edges)
    }
}

impl From<Trail> for TrailDoc {
    fn from(t: Trail) -> Self {
        TrailDoc { vertices: t.vertices, edges: t.edges }
    }
}

impl Trail {
    pub fn trivial(x: VertexId) -> Self {
        Trail { vertices: vec![x], edges: Vec::new() }
    }

    pub fn from_parts(vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Result<Self> {
        if vertices.len() != edges.len() + 1 {
            return Err(Error::MalformedTrail(format!(
                "{} vertices for {} edges",
                vertices.len(),
                edges.len()
            )));
        }
        Ok(Trail { vertices, edges })
    }

    /// Walks `edges` in `g` starting from `start`, deriving the vertex sequence.
    pub fn walk(g: &Multigraph, start: VertexId, edges: &[EdgeId]) -> Result<Self> {
        let mut vertices = Vec::with_capacity(edges.len() + 1);
        vertices.push(start);
        let mut at = start;
        for (i, &e) in edges.iter().enumerate() {
            let edge = g.edge(e).ok_or(Error::UnknownEdge(e))?;
            if edge.u != at && edge.v != at {
                return Err(Error::MalformedTrail(format!("edge {e:?} at step {i} misses {at:?}")));
            }
            at = edge.other(at);
            vertices.push(at);
        }
        Ok(Trail { vertices, edges: edges.to_vec() })
    }

    #[inline]
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    #[inline]
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    #[inline]
    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    #[inline]
    pub fn end(&self) -> VertexId {
        *self.vertices.last().expect("a trail has at least one vertex")
    }

    #[inline]
    // a trail is never empty: even a trivial one has its vertex
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn parity(&self, g: &Multigraph) -> u8 {
        g.parity(self.edges.iter().copied())
    }

    pub fn is_odd(&self, g: &Multigraph) -> bool {
        self.parity(g) == 1
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().copied().collect()
    }

    pub fn reverse(&self) -> Trail {
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        vertices.reverse();
        edges.reverse();
        Trail { vertices, edges }
    }

    /// `self + other`; `other` must start where `self` ends and share no edge.
    pub fn concat(&self, other: &Trail) -> Result<Trail> {
        if self.end() != other.start() {
            return Err(Error::EndpointMismatch { end: self.end(), start: other.start() });
        }
        let mine: BTreeSet<EdgeId> = self.edges.iter().copied().collect();
        if let Some(&e) = other.edges.iter().find(|e| mine.contains(e)) {
            return Err(Error::EdgeOverlap(e));
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(Trail { vertices, edges })
    }

    /// Splits at vertex occurrence `position` (an index into [`Trail::vertices`]).
    pub fn split_at(&self, position: usize) -> Result<(Trail, Trail)> {
        if position >= self.vertices.len() {
            return Err(Error::BadPosition { position, len: self.vertices.len() });
        }
        let head = Trail {
            vertices: self.vertices[..=position].to_vec(),
            edges: self.edges[..position].to_vec(),
        };
        let tail = Trail {
            vertices: self.vertices[position..].to_vec(),
            edges: self.edges[position..].to_vec(),
        };
        Ok((head, tail))
    }

    /// Sub-trail between vertex occurrences `from..=to`.
    pub fn segment(&self, from: usize, to: usize) -> Trail {
        Trail {
            vertices: self.vertices[from..=to].to_vec(),
            edges: self.edges[from..to].to_vec(),
        }
    }

    /// Is the vertex sequence repetition-free?
    pub fn is_path(&self) -> bool {
        let distinct: BTreeSet<_> = self.vertices.iter().collect();
        distinct.len() == self.vertices.len()
    }
}

impl fmt::Display for Trail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.vertices[0].0)?;
        for (e, x) in self.edges.iter().zip(&self.vertices[1..]) {
            write!(f, " -e{}- {}", e.0, x.0)?;
        }
        Ok(())
    }
}

/// Why a trail failed verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    RepeatedEdge { edge: EdgeId },
    BrokenChain { position: usize },
    WrongEndpoints { expected: (VertexId, VertexId), found: (VertexId, VertexId) },
    WrongParity { expected: u8, found: u8 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RepeatedEdge { edge } => write!(f, "edge {edge:?} is used twice"),
            Violation::BrokenChain { position } => {
                write!(f, "edge at position {position} does not join its neighbouring vertices")
            }
            Violation::WrongEndpoints { expected, found } => {
                write!(f, "endpoints {found:?}, expected {expected:?}")
            }
            Violation::WrongParity { expected, found } => {
                write!(f, "parity {found}, expected {expected}")
            }
        }
    }
}

/// Checks incidence, edge distinctness, endpoints and parity.
///
/// Endpoints are unordered: a `(p,q)`-trail read backwards is accepted as
/// a `(p,q)`-trail too.
pub fn verify_trail(
    g: &Multigraph,
    t: &Trail,
    endpoints: (VertexId, VertexId),
    want_odd: bool,
) -> std::result::Result<(), Violation> {
    check_chain(g, t)?;
    let (a, b) = endpoints;
    let (s, e) = (t.start(), t.end());
    if !((s == a && e == b) || (s == b && e == a)) {
        return Err(Violation::WrongEndpoints { expected: endpoints, found: (s, e) });
    }
    let found = t.parity(g);
    let expected = want_odd as u8;
    if found != expected {
        return Err(Violation::WrongParity { expected, found });
    }
    Ok(())
}

/// Incidence and edge-distinctness only.
pub fn check_chain(g: &Multigraph, t: &Trail) -> std::result::Result<(), Violation> {
    let mut seen = BTreeSet::new();
    for (i, &e) in t.edges.iter().enumerate() {
        let ok = g.edge(e).is_some_and(|edge| edge.joins(t.vertices[i], t.vertices[i + 1]));
        if !ok {
            return Err(Violation::BrokenChain { position: i });
        }
        if !seen.insert(e) {
            return Err(Violation::RepeatedEdge { edge: e });
        }
    }
    Ok(())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Orientation {
    Forward,
    Reverse,
}

/// A maximal run of consecutive path edges that is also a contiguous
/// segment of the trail.
///
/// Both ranges index edge positions. With `Reverse` orientation the trail
/// traverses the segment against the path's direction, so path position
/// `p_range.start` pairs with trail position `t_range.end - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contact {
    pub p_range: Range<usize>,
    pub t_range: Range<usize>,
    pub orientation: Orientation,
}

impl Contact {
    pub fn len(&self) -> usize {
        self.p_range.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_range.is_empty()
    }

    /// Vertex occurrence in the trail of the path's first contact vertex.
    pub fn entry_occurrence(&self) -> usize {
        match self.orientation {
            Orientation::Forward => self.t_range.start,
            Orientation::Reverse => self.t_range.end,
        }
    }

    /// Vertex occurrence in the trail of the path's last contact vertex.
    pub fn exit_occurrence(&self) -> usize {
        match self.orientation {
            Orientation::Forward => self.t_range.end,
            Orientation::Reverse => self.t_range.start,
        }
    }
}

/// All contacts between path `p` and trail `t`, ordered along `p`.
pub fn contacts(p: &Trail, t: &Trail) -> Vec<Contact> {
    let position: HashMap<EdgeId, usize> =
        t.edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    // Orientation of a single shared edge relative to p.
    let orient = |i: usize, q: usize| {
        if t.vertices[q] == p.vertices[i] {
            Orientation::Forward
        } else {
            Orientation::Reverse
        }
    };
    let mut out: Vec<Contact> = Vec::new();
    let mut open: Option<(usize, usize, usize, Orientation)> = None; // p start, t first, t last, orientation
    for (i, e) in p.edges.iter().enumerate() {
        let here = position.get(e).map(|&q| (q, orient(i, q)));
        if let (Some((ps, tf, tl, o)), Some((q, oq))) = (open, here) {
            let continues = oq == o
                && match o {
                    Orientation::Forward => q == tl + 1,
                    Orientation::Reverse => q + 1 == tl,
                };
            if continues {
                open = Some((ps, tf, q, o));
                continue;
            }
        }
        if let Some(run) = open.take() {
            out.push(close_run(run, i));
        }
        if let Some((q, oq)) = here {
            open = Some((i, q, q, oq));
        }
    }
    if let Some(run) = open {
        out.push(close_run(run, p.edges.len()));
    }
    out
}

fn close_run((ps, tf, tl, o): (usize, usize, usize, Orientation), p_end: usize) -> Contact {
    let t_range = match o {
        Orientation::Forward => tf..tl + 1,
        Orientation::Reverse => tl..tf + 1,
    };
    Contact { p_range: ps..p_end, t_range, orientation: o }
}

/// Which terminal pair a trail of a collection joins.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TrailClass {
    #[serde(rename = "uu")]
    Uu,
    #[serde(rename = "vv")]
    Vv,
    #[serde(rename = "uv")]
    Uv,
}

/// Pairwise edge-disjoint odd trails with both ends in `{u, v}`.
///
/// `(u,v)`-trails are stored oriented from `u` to `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrailCollection {
    u: VertexId,
    v: VertexId,
    trails: Vec<Trail>,
    classes: Vec<TrailClass>,
}

impl TrailCollection {
    pub fn new(g: &Multigraph, u: VertexId, v: VertexId, trails: Vec<Trail>) -> Result<Self> {
        if u == v {
            return Err(Error::SameVertex(u));
        }
        let mut used = BTreeSet::new();
        let mut stored = Vec::with_capacity(trails.len());
        let mut classes = Vec::with_capacity(trails.len());
        for (i, t) in trails.into_iter().enumerate() {
            check_chain(g, &t).map_err(Error::InvalidTrail)?;
            if !t.is_odd(g) {
                return Err(Error::InvalidCollection(format!("trail {i} is not odd")));
            }
            for &e in t.edges() {
                if !used.insert(e) {
                    return Err(Error::InvalidCollection(format!(
                        "edge {e:?} of trail {i} is shared with an earlier trail"
                    )));
                }
            }
            let (a, b) = (t.start(), t.end());
            let (class, t) = match (a == u || a == v, b == u || b == v) {
                (true, true) if a == u && b == u => (TrailClass::Uu, t),
                (true, true) if a == v && b == v => (TrailClass::Vv, t),
                (true, true) if a == u => (TrailClass::Uv, t),
                (true, true) => (TrailClass::Uv, t.reverse()),
                _ => {
                    return Err(Error::InvalidCollection(format!(
                        "trail {i} runs {a:?}..{b:?}, outside the terminals"
                    )))
                }
            };
            stored.push(t);
            classes.push(class);
        }
        Ok(TrailCollection { u, v, trails: stored, classes })
    }

    pub fn u(&self) -> VertexId {
        self.u
    }

    pub fn v(&self) -> VertexId {
        self.v
    }

    pub fn trails(&self) -> &[Trail] {
        &self.trails
    }

    pub fn into_trails(self) -> Vec<Trail> {
        self.trails
    }

    pub fn classes(&self) -> &[TrailClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.trails.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trails.is_empty()
    }

    pub fn count(&self, class: TrailClass) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }

    pub fn k_uu(&self) -> usize {
        self.count(TrailClass::Uu)
    }

    pub fn k_vv(&self) -> usize {
        self.count(TrailClass::Vv)
    }

    pub fn k_uv(&self) -> usize {
        self.count(TrailClass::Uv)
    }
}

/// `C(𝒫, 𝒯)` with the per-pair counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactTally {
    pub total: usize,
    /// `matrix[p][t]` is `C(P_p, T_t)`.
    pub matrix: Vec<Vec<usize>>,
}

pub fn total_contacts(paths: &[Trail], trails: &[Trail]) -> ContactTally {
    let matrix: Vec<Vec<usize>> = paths
        .iter()
        .map(|p| trails.iter().map(|t| contacts(p, t).len()).collect())
        .collect();
    let total = matrix.iter().flatten().sum();
    ContactTally { total, matrix }
}
