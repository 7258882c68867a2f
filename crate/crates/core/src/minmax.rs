//! The min-max formula for odd `(s,s)`-trails, evaluated by enumeration.
//!
//! `ν(s,s) = min |E(S) − F| + Σ_{C ∈ comp(G−S)} ⌊|E(S,C)|/2⌋` over subgraphs
//! `(S, F)` with `s ∈ S` in which every cycle is even. Choosing sides
//! `S = S₀ ⊔ S₁` fixes the best such `F`: all edges of `E(S)` whose parity
//! agrees with the side change, which for an unsigned graph is `E(S₀, S₁)`.
//! So it is enough to enumerate one of three states per vertex.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Multigraph, VertexId};
use crate::trail::{check_chain, Trail};

pub const DEFAULT_VERTEX_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartiteCertificate {
    #[serde(skip)]
    pub s: VertexId,
    #[serde(rename = "S0")]
    pub s0: BTreeSet<VertexId>,
    #[serde(rename = "S1")]
    pub s1: BTreeSet<VertexId>,
    #[serde(skip)]
    pub f: EdgeSet,
    pub value: usize,
}

impl BipartiteCertificate {
    pub fn s_set(&self) -> BTreeSet<VertexId> {
        self.s0.union(&self.s1).copied().collect()
    }
}

/// Side of each vertex: `None` outside `S`, else `Some(bit)`.
fn evaluate(g: &Multigraph, side: &[Option<u8>]) -> (usize, EdgeSet) {
    let mut f = EdgeSet::new();
    let mut broken = 0;
    // union-find over vertices outside S
    let mut parent: Vec<usize> = (0..side.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut x = x;
        while p[x] != r {
            let next = p[x];
            p[x] = r;
            x = next;
        }
        r
    }
    for (_, e) in g.edges() {
        if let (None, None) = (side[e.u.0], side[e.v.0]) {
            let (a, b) = (find(&mut parent, e.u.0), find(&mut parent, e.v.0));
            parent[a] = b;
        }
    }
    let mut degree = vec![0usize; side.len()];
    for (id, e) in g.edges() {
        match (side[e.u.0], side[e.v.0]) {
            (Some(a), Some(b)) => {
                if a ^ b == e.sign() {
                    f.insert(id);
                } else {
                    broken += 1;
                }
            }
            (Some(_), None) => degree[find(&mut parent, e.v.0)] += 1,
            (None, Some(_)) => degree[find(&mut parent, e.u.0)] += 1,
            (None, None) => {}
        }
    }
    (broken + degree.iter().map(|d| d / 2).sum::<usize>(), f)
}

/// Recomputes the value of the certificate given by sides `S₀`, `S₁`.
pub fn certificate_value(g: &Multigraph, s0: &BTreeSet<VertexId>, s1: &BTreeSet<VertexId>) -> Result<usize> {
    if !s0.is_disjoint(s1) {
        return Err(Error::InvalidCertificate("S0 and S1 overlap".into()));
    }
    let mut side = vec![None; g.vertex_count()];
    for (set, bit) in [(s0, 0u8), (s1, 1u8)] {
        for &x in set {
            g.check_vertex(x)?;
            side[x.0] = Some(bit);
        }
    }
    Ok(evaluate(g, &side).0)
}

/// The minimising certificate; ties go to the smallest `S`, then the
/// lexicographically first assignment (vertex 0 first, out < S₀ < S₁).
pub fn minmax_rhs(g: &Multigraph, s: VertexId) -> Result<BipartiteCertificate> {
    minmax_rhs_with(g, s, DEFAULT_VERTEX_CAP)
}

pub fn minmax_rhs_with(g: &Multigraph, s: VertexId, cap: usize) -> Result<BipartiteCertificate> {
    g.check_vertex(s)?;
    // Isolated vertices never matter; keep them out of S.
    let free: Vec<usize> = g.vertices().filter(|&x| x != s && g.degree(x) > 0).map(|x| x.0).collect();
    if free.len() + 1 > cap {
        return Err(Error::BudgetExceeded { what: "minmax vertices", size: free.len() + 1, cap });
    }
    let mut side: Vec<Option<u8>> = vec![None; g.vertex_count()];
    side[s.0] = Some(0);
    let mut digits = vec![0u8; free.len()];
    let mut best: Option<(usize, usize, Vec<Option<u8>>, EdgeSet)> = None;
    loop {
        for (&x, &d) in free.iter().zip(&digits) {
            side[x] = if d == 0 { None } else { Some(d - 1) };
        }
        let (value, f) = evaluate(g, &side);
        let size = side.iter().filter(|x| x.is_some()).count();
        if best.as_ref().is_none_or(|(v, n, _, _)| (value, size) < (*v, *n)) {
            best = Some((value, size, side.clone(), f));
        }
        // odometer, last free vertex varies fastest
        let mut i = digits.len();
        loop {
            if i == 0 {
                let (value, _, side, f) = best.expect("one assignment was scored");
                let pick = |b: u8| {
                    side.iter().enumerate().filter(|(_, x)| **x == Some(b)).map(|(i, _)| VertexId(i)).collect()
                };
                return Ok(BipartiteCertificate { s, s0: pick(0), s1: pick(1), f, value });
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < 3 {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// `E(S) − F` plus all but the lowest-id edge of each `E(S, C)`.
pub fn cover_from_certificate(g: &Multigraph, cert: &BipartiteCertificate) -> EdgeSet {
    let s = cert.s_set();
    let boundary = g.boundary_and_induced(&s);
    let mut cover: EdgeSet = boundary.induced.iter().filter(|e| !cert.f.contains(*e)).collect();
    for (_, cut) in &boundary.components {
        cover.extend(cut.iter().skip(1));
    }
    cover
}

/// Checks the certificate against `g` and that `trails`, a claimed packing
/// of odd `(s,s)`-trails, is no larger than its value.
pub fn verify_certificate_upper_bound(
    g: &Multigraph,
    s: VertexId,
    cert: &BipartiteCertificate,
    trails: &[Trail],
) -> Result<bool> {
    if !cert.s0.contains(&s) && !cert.s1.contains(&s) {
        return Err(Error::InvalidCertificate(format!("{s:?} is not in S")));
    }
    if certificate_value(g, &cert.s0, &cert.s1)? != cert.value {
        return Err(Error::InvalidCertificate("recorded value does not match the sides".into()));
    }
    let mut used = EdgeSet::new();
    for t in trails {
        check_chain(g, t).map_err(Error::InvalidTrail)?;
        if t.start() != s || t.end() != s || !t.is_odd(g) {
            return Err(Error::InvalidCollection(format!("{t} is not an odd (s,s)-trail")));
        }
        for &e in t.edges() {
            if !used.insert(e) {
                return Err(Error::InvalidCollection(format!("edge {e:?} is used twice")));
            }
        }
    }
    Ok(trails.len() <= cert.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeId;
    use crate::oracle;

    #[test]
    fn triangle() {
        let g = Multigraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let cert = minmax_rhs(&g, VertexId(0)).unwrap();
        assert_eq!(cert.value, 1);
        assert_eq!(cert.s_set(), BTreeSet::from([VertexId(0)]));
        let cover = cover_from_certificate(&g, &cert);
        assert_eq!(cover, EdgeSet::from_iter([EdgeId(2)]));
        let ob = oracle::OracleBudget::default();
        assert!(oracle::is_cover(&g, VertexId(0), VertexId(0), &cover, &ob).unwrap());
    }

    #[test]
    fn single_edge_is_zero() {
        let g = Multigraph::from_edges(2, [(0, 1)]).unwrap();
        let cert = minmax_rhs(&g, VertexId(0)).unwrap();
        assert_eq!(cert.value, 0);
        assert!(cover_from_certificate(&g, &cert).is_empty());
    }

    #[test]
    fn json_shape() {
        let g = Multigraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let cert = minmax_rhs(&g, VertexId(0)).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        assert_eq!(json, r#"{"S0":[0],"S1":[],"value":1}"#);
    }

    #[test]
    fn upper_bound_checks() {
        let g = Multigraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let cert = minmax_rhs(&g, VertexId(0)).unwrap();
        assert!(verify_certificate_upper_bound(&g, VertexId(0), &cert, &[]).unwrap());
        let t = Trail::walk(&g, VertexId(0), &[EdgeId(0), EdgeId(1), EdgeId(2)]).unwrap();
        assert!(verify_certificate_upper_bound(&g, VertexId(0), &cert, std::slice::from_ref(&t)).unwrap());
        assert!(verify_certificate_upper_bound(&g, VertexId(0), &cert, &[t.clone(), t]).is_err());
        let mut bad = cert.clone();
        bad.value = 0;
        assert!(matches!(
            verify_certificate_upper_bound(&g, VertexId(0), &bad, &[]),
            Err(Error::InvalidCertificate(_))
        ));
    }

    #[test]
    fn budget() {
        let edges: Vec<(usize, usize)> = (1..17).map(|i| (0, i)).collect();
        let g = Multigraph::from_edges(17, edges).unwrap();
        assert!(matches!(minmax_rhs(&g, VertexId(0)), Err(Error::BudgetExceeded { .. })));
    }
}
