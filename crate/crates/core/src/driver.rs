//! Top-level solvers: `k` odd trails or a small cover, for `(s,s)`, `(u,v)`
//! and terminal sets `(C,D)`.
//!
//! `(u,v)` pipeline:
//!
//! 1. If `λ(u,v) < 2k`, a minimum cut (at most `2k − 1` edges) is a cover.
//! 2. Odd `u–v` edges are trails on their own; if there are `k` of them, done.
//! 3. Otherwise delete every `u–v` edge, merge `u` and `v` into `s` and ask
//!    for the remaining `k'` odd `(s,s)`-trails.
//! 4. A cover for those plus the odd `u–v` edges is a cover of size at most
//!    `2k − 2`. Even `u–v` edges never need covering: they close even loops
//!    at `s`.
//! 5. Otherwise each `(s,s)`-trail lifts to pieces with ends in `{u,v}`, one
//!    of which is odd. Together with the odd `u–v` edges that gives `k` odd
//!    trails with ends in `{u,v}`, which [`untangle`](crate::untangle) turns
//!    into `(u,v)`-trails.
//!
//! Covers are re-checked by the brute-force oracle whenever the instance
//! fits its budget.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::apath::{solve_apaths, APathOutcome, ApathBudget};
use crate::error::{Error, Result};
use crate::flow;
use crate::gadget::build_gadget;
use crate::graph::{Edge, EdgeId, EdgeSet, Multigraph, VertexId};
use crate::oracle::{self, OracleBudget};
use crate::trail::{check_chain, verify_trail, Trail, TrailCollection};
use crate::untangle::{untangle, UntangleStep};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SolveConfig {
    pub apath: ApathBudget,
    pub oracle: OracleBudget,
    /// Re-check covers with the oracle when the graph fits its budget.
    pub verify_covers: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig { apath: ApathBudget::default(), oracle: OracleBudget::default(), verify_covers: true }
    }
}

/// Which step produced the answer.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// `k = 0`.
    Trivial,
    MinCut,
    DirectParallelEdges,
    SstrailsPacking,
    SstrailsCover,
    UntangledPacking,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum Outcome<T> {
    Packing { trails: Vec<T> },
    Cover { cover: EdgeSet },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOutcome<T = Trail> {
    pub k: usize,
    pub provenance: Provenance,
    #[serde(flatten)]
    pub result: Outcome<T>,
    /// The oracle confirmed the cover.
    #[serde(default)]
    pub oracle_checked: bool,
    #[serde(skip)]
    pub trace: Vec<UntangleStep>,
}

impl<T> SolveOutcome<T> {
    fn packing(k: usize, provenance: Provenance, trails: Vec<T>) -> Self {
        SolveOutcome { k, provenance, result: Outcome::Packing { trails }, oracle_checked: false, trace: Vec::new() }
    }

    fn cover(k: usize, provenance: Provenance, cover: EdgeSet, oracle_checked: bool) -> Self {
        SolveOutcome { k, provenance, result: Outcome::Cover { cover }, oracle_checked, trace: Vec::new() }
    }

    pub fn is_packing(&self) -> bool {
        matches!(self.result, Outcome::Packing { .. })
    }

    pub fn trails(&self) -> Option<&[T]> {
        match &self.result {
            Outcome::Packing { trails } => Some(trails),
            Outcome::Cover { .. } => None,
        }
    }

    pub fn cover_set(&self) -> Option<&EdgeSet> {
        match &self.result {
            Outcome::Cover { cover } => Some(cover),
            Outcome::Packing { .. } => None,
        }
    }
}

/// `Ok(true)` if the oracle confirmed the cover, `Ok(false)` if the check
/// was skipped.
fn confirm_cover(
    g: &Multigraph,
    c: &BTreeSet<VertexId>,
    d: &BTreeSet<VertexId>,
    cover: &EdgeSet,
    cfg: &SolveConfig,
) -> Result<bool> {
    if !cfg.verify_covers {
        return Ok(false);
    }
    match oracle::is_cover_between(g, c, d, cover, &cfg.oracle) {
        Ok(true) => Ok(true),
        Ok(false) => Err(Error::Internal(format!("returned cover {cover:?} misses an odd trail"))),
        Err(Error::BudgetExceeded { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

fn check_disjoint<'a>(trails: impl IntoIterator<Item = &'a Trail>) -> Result<()> {
    let mut used = EdgeSet::new();
    for t in trails {
        for &e in t.edges() {
            if !used.insert(e) {
                return Err(Error::Internal(format!("edge {e:?} used by two returned trails")));
            }
        }
    }
    Ok(())
}

/// `k` edge-disjoint odd `(s,s)`-trails, or a cover of at most `2k − 2` edges.
pub fn solve_ss(g: &Multigraph, s: VertexId, k: usize, cfg: &SolveConfig) -> Result<SolveOutcome> {
    g.check_vertex(s)?;
    if k == 0 {
        return Ok(SolveOutcome::packing(0, Provenance::Trivial, Vec::new()));
    }
    let gg = build_gadget(g, s)?;
    match solve_apaths(&gg, k, &cfg.apath)? {
        APathOutcome::Packing { paths, .. } => {
            let trails = paths.iter().map(|p| gg.path_to_trail(p)).collect::<Result<Vec<_>>>()?;
            for t in &trails {
                verify_trail(g, t, (s, s), true)
                    .map_err(|v| Error::Internal(format!("lifted path is not an odd (s,s)-trail: {v}")))?;
            }
            check_disjoint(&trails)?;
            Ok(SolveOutcome::packing(k, Provenance::SstrailsPacking, trails))
        }
        APathOutcome::Cover { nodes, .. } => {
            let cover = gg.vertex_cover_to_edge_cover(&nodes);
            if cover.len() > 2 * k - 2 {
                return Err(Error::Internal(format!("cover of {} edges exceeds 2k - 2", cover.len())));
            }
            let one = BTreeSet::from([s]);
            let checked = confirm_cover(g, &one, &one, &cover, cfg)?;
            Ok(SolveOutcome::cover(k, Provenance::SstrailsCover, cover, checked))
        }
    }
}

/// Splits an edge sequence that is a trail after merging `u` and `v` into
/// pieces that are trails of `g`, breaking wherever the walk jumps between
/// `u` and `v`.
fn split_at_terminals(g: &Multigraph, u: VertexId, v: VertexId, edges: &[EdgeId]) -> Result<Vec<Trail>> {
    let edge = |e: EdgeId| g.edge(e).copied().ok_or(Error::UnknownEdge(e));
    let first = edge(edges[0])?;
    let mut at = if first.u == u || first.u == v { first.u } else { first.v };
    let mut pieces = Vec::new();
    let mut vertices = vec![at];
    let mut piece: Vec<EdgeId> = Vec::new();
    for &e in edges {
        let ed = edge(e)?;
        if ed.u != at && ed.v != at {
            let jump = if at == u { v } else { u };
            if (at != u && at != v) || (ed.u != jump && ed.v != jump) {
                return Err(Error::Internal(format!("edge {e:?} does not continue the lifted trail")));
            }
            pieces.push(Trail::from_parts(std::mem::replace(&mut vertices, vec![jump]), std::mem::take(&mut piece))?);
            at = jump;
        }
        at = ed.other(at);
        vertices.push(at);
        piece.push(e);
    }
    pieces.push(Trail::from_parts(vertices, piece)?);
    Ok(pieces)
}

/// `k` edge-disjoint odd `(u,v)`-trails, or a cover of at most `2k − 1` edges.
pub fn solve_uv(g: &Multigraph, u: VertexId, v: VertexId, k: usize, cfg: &SolveConfig) -> Result<SolveOutcome> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return solve_ss(g, u, k, cfg);
    }
    if k == 0 {
        return Ok(SolveOutcome::packing(0, Provenance::Trivial, Vec::new()));
    }
    let (cu, cv) = (BTreeSet::from([u]), BTreeSet::from([v]));

    let lambda = flow::lambda(g, u, v)?;
    if lambda < 2 * k {
        let cut = flow::min_cut(g, u, v)?;
        let checked = confirm_cover(g, &cu, &cv, &cut, cfg)?;
        return Ok(SolveOutcome::cover(k, Provenance::MinCut, cut, checked));
    }

    let between = g.edges_between(u, v);
    let odd: Vec<EdgeId> = between.iter().filter(|&e| g.sign(e) == 1).collect();
    if odd.len() >= k {
        let trails = odd[..k].iter().map(|&e| Trail::walk(g, u, &[e])).collect::<Result<Vec<_>>>()?;
        return Ok(SolveOutcome::packing(k, Provenance::DirectParallelEdges, trails));
    }

    let merged = g.without_edges(&between).identify_vertices(u, v)?;
    let inner = solve_ss(&merged.graph, merged.s, k - odd.len(), cfg)?;
    match inner.result {
        Outcome::Cover { cover } => {
            let cover = cover.union(&odd.iter().copied().collect());
            let checked = confirm_cover(g, &cu, &cv, &cover, cfg)?;
            Ok(SolveOutcome::cover(k, Provenance::SstrailsCover, cover, checked))
        }
        Outcome::Packing { trails } => {
            let mut lifted = Vec::with_capacity(k);
            for t in &trails {
                let piece = split_at_terminals(g, u, v, t.edges())?
                    .into_iter()
                    .find(|p| p.is_odd(g))
                    .ok_or_else(|| Error::Internal(format!("lift of {t} has no odd piece")))?;
                lifted.push(piece);
            }
            for &e in &odd {
                lifted.push(Trail::walk(g, u, &[e])?);
            }
            let coll = TrailCollection::new(g, u, v, lifted)?;
            let out = untangle(g, coll)?;
            for t in &out.trails {
                verify_trail(g, t, (u, v), true)
                    .map_err(|e| Error::Internal(format!("untangled trail fails verification: {e}")))?;
            }
            check_disjoint(&out.trails)?;
            let mut res = SolveOutcome::packing(k, Provenance::UntangledPacking, out.trails);
            res.trace = out.steps;
            Ok(res)
        }
    }
}

/// An odd trail through the graph with `C` and `D` each shrunk to a point,
/// read back in `G`: trails of `G` whose consecutive ends meet inside the
/// same terminal set. A single segment is an ordinary `(C,D)`-trail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalTrail {
    pub segments: Vec<Trail>,
}

impl TerminalTrail {
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.segments.iter().flat_map(|s| s.edges().iter().copied())
    }

    pub fn parity(&self, g: &Multigraph) -> u8 {
        g.parity(self.edges())
    }

    pub fn verify(&self, g: &Multigraph, c: &BTreeSet<VertexId>, d: &BTreeSet<VertexId>) -> Result<()> {
        let bad = |why: String| Err(Error::InvalidCollection(why));
        let (Some(first), Some(last)) = (self.segments.first(), self.segments.last()) else {
            return bad("terminal trail without segments".into());
        };
        let mut used = EdgeSet::new();
        for s in &self.segments {
            check_chain(g, s).map_err(Error::InvalidTrail)?;
            if s.is_trivial() {
                return bad("empty segment".into());
            }
            for e in s.edges() {
                if !used.insert(*e) {
                    return bad(format!("edge {e:?} repeats"));
                }
            }
        }
        if !c.contains(&first.start()) || !d.contains(&last.end()) {
            return bad(format!("runs {:?}..{:?}, not from C to D", first.start(), last.end()));
        }
        for w in self.segments.windows(2) {
            let (a, b) = (w[0].end(), w[1].start());
            if !(c.contains(&a) && c.contains(&b) || d.contains(&a) && d.contains(&b)) {
                return bad(format!("junction {a:?}/{b:?} is not inside one terminal set"));
            }
        }
        if self.parity(g) != 1 {
            return bad("terminal trail is even".into());
        }
        Ok(())
    }
}

/// `g` with `C` merged into `u = 0` and `D` into `v = 1`. Edges inside a
/// terminal set are subdivided so that they survive as closed 2-edge walks:
/// the half at the edge's `u`-end keeps the id and sign, the other half is
/// new and unsigned.
struct Contraction {
    graph: Multigraph,
    /// New edge id to the original it is half of.
    half_of: Vec<(EdgeId, EdgeId)>,
    terminal: Vec<u8>,
}

fn contract(g: &Multigraph, c: &BTreeSet<VertexId>, d: &BTreeSet<VertexId>) -> Contraction {
    let mut map = vec![VertexId(0); g.vertex_count()];
    let mut terminal = vec![0u8; g.vertex_count()];
    let mut next = 2;
    for x in g.vertices() {
        map[x.0] = if c.contains(&x) {
            terminal[x.0] = 1;
            VertexId(0)
        } else if d.contains(&x) {
            terminal[x.0] = 2;
            VertexId(1)
        } else {
            next += 1;
            VertexId(next - 1)
        };
    }
    let mut slots: Vec<Option<Edge>> = Vec::with_capacity(g.edge_bound());
    let mut extra = Vec::new();
    let mut half_of = Vec::new();
    for (i, slot) in g.slots().iter().enumerate() {
        let Some(e) = slot else {
            slots.push(None);
            continue;
        };
        let (a, b) = (map[e.u.0], map[e.v.0]);
        if a == b {
            let mid = VertexId(next);
            next += 1;
            slots.push(Some(Edge { u: a, v: mid, signed: e.signed }));
            half_of.push((EdgeId(g.edge_bound() + extra.len()), EdgeId(i)));
            extra.push(Some(Edge { u: mid, v: b, signed: false }));
        } else {
            slots.push(Some(Edge { u: a, v: b, signed: e.signed }));
        }
    }
    slots.extend(extra);
    let graph = Multigraph::from_slots(next, slots).expect("contraction leaves no loops");
    Contraction { graph, half_of, terminal }
}

impl Contraction {
    fn original(&self, e: EdgeId) -> EdgeId {
        self.half_of.iter().find(|(h, _)| *h == e).map_or(e, |&(_, o)| o)
    }

    /// Reads a `(u,v)`-trail of the contracted graph back in `g`.
    fn lift(&self, g: &Multigraph, t: &Trail) -> Result<TerminalTrail> {
        // (edge, from, to) in g
        let mut steps: Vec<(EdgeId, VertexId, VertexId)> = Vec::new();
        let edges = t.edges();
        let mut i = 0;
        while i < edges.len() {
            let e = self.original(edges[i]);
            let ge = *g.edge(e).ok_or(Error::UnknownEdge(e))?;
            if self.terminal[ge.u.0] != 0 && self.terminal[ge.u.0] == self.terminal[ge.v.0] {
                // both halves appear back to back; the kept half sits at ge.u
                let kept_first = edges[i] == e;
                steps.push(if kept_first { (e, ge.u, ge.v) } else { (e, ge.v, ge.u) });
                i += 2;
            } else {
                let from_here = t.vertices()[i];
                let from = if self.image(ge.u) == from_here { ge.u } else { ge.v };
                steps.push((e, from, ge.other(from)));
                i += 1;
            }
        }
        let mut segments = Vec::new();
        let mut vertices = vec![steps[0].1];
        let mut seg = Vec::new();
        for (e, from, to) in steps {
            if *vertices.last().expect("non-empty") != from {
                segments.push(Trail::from_parts(std::mem::replace(&mut vertices, vec![from]), std::mem::take(&mut seg))?);
            }
            seg.push(e);
            vertices.push(to);
        }
        segments.push(Trail::from_parts(vertices, seg)?);
        Ok(TerminalTrail { segments })
    }

    fn image(&self, x: VertexId) -> VertexId {
        match self.terminal[x.0] {
            1 => VertexId(0),
            2 => VertexId(1),
            _ => {
                let before = self.terminal[..x.0].iter().filter(|&&t| t == 0).count();
                VertexId(2 + before)
            }
        }
    }
}

/// `k` edge-disjoint odd `(C,D)`-trails through the contracted graph, or a
/// cover of at most `2k − 1` edges meeting all of them.
pub fn solve_cd(
    g: &Multigraph,
    c: &BTreeSet<VertexId>,
    d: &BTreeSet<VertexId>,
    k: usize,
    cfg: &SolveConfig,
) -> Result<SolveOutcome<TerminalTrail>> {
    for &x in c.iter().chain(d) {
        g.check_vertex(x)?;
    }
    if c.is_empty() || d.is_empty() || !c.is_disjoint(d) {
        return Err(Error::OverlappingTerminalSets);
    }
    let wrap = |out: SolveOutcome, lift: &dyn Fn(&Trail) -> Result<TerminalTrail>| -> Result<_> {
        let result = match out.result {
            Outcome::Packing { trails } => {
                Outcome::Packing { trails: trails.iter().map(lift).collect::<Result<Vec<_>>>()? }
            }
            Outcome::Cover { cover } => Outcome::Cover { cover },
        };
        Ok(SolveOutcome { k: out.k, provenance: out.provenance, result, oracle_checked: out.oracle_checked, trace: out.trace })
    };
    if c.len() == 1 && d.len() == 1 {
        let (u, v) = (*c.first().expect("one"), *d.first().expect("one"));
        let out = solve_uv(g, u, v, k, cfg)?;
        return wrap(out, &|t| Ok(TerminalTrail { segments: vec![t.clone()] }));
    }
    let con = contract(g, c, d);
    let out = solve_uv(&con.graph, VertexId(0), VertexId(1), k, cfg)?;
    let mut out = wrap(out, &|t| con.lift(g, t))?;
    match &mut out.result {
        Outcome::Packing { trails } => {
            let mut used = EdgeSet::new();
            for t in trails.iter() {
                t.verify(g, c, d)?;
                for e in t.edges() {
                    if !used.insert(e) {
                        return Err(Error::Internal(format!("edge {e:?} used by two lifted trails")));
                    }
                }
            }
        }
        Outcome::Cover { cover } => {
            *cover = cover.iter().map(|e| con.original(e)).collect();
            out.oracle_checked &= confirm_cover(g, c, d, cover, cfg)?;
        }
    }
    Ok(out)
}
