//! Tight example families with their known `ν`, `τ`, `λ`, and seeded random
//! multigraphs.
//!
//! Numbering is canonical: `u = 0`, `v = 1`, then each block's vertices in
//! the order listed by the generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, Multigraph, VertexId};
use crate::trail::Trail;

/// Values the construction is known to have. `None` when not pinned down.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct Golden {
    pub nu: Option<usize>,
    pub tau: Option<usize>,
    pub lambda: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub graph: Multigraph,
    pub u: VertexId,
    /// Equal to `u` for the `(s,s)` families.
    pub v: VertexId,
    pub golden: Golden,
    /// Odd trails with ends in `{u, v}` that come with the construction.
    pub trails: Vec<Trail>,
}

const U: usize = 0;
const V: usize = 1;

fn need(k: usize, name: &str) -> Result<()> {
    if k == 0 {
        return Err(Error::BadParameter(format!("{name} needs k >= 1")));
    }
    Ok(())
}

/// `ν = k`, `τ = 2k + 1`, `λ = 2k + 1`: `k` blocks of eight vertices
/// `a..h` plus a vertex `w` adjacent to both terminals.
pub fn fig2(k: usize) -> Result<Fixture> {
    need(k, "fig2")?;
    let mut edges = Vec::with_capacity(15 * k + 2);
    for i in 0..k {
        let [a, b, c, d, e, f, g, h]: [usize; 8] = std::array::from_fn(|j| 2 + 8 * i + j);
        edges.extend([
            (U, a),
            (U, b),
            (a, b),
            (a, c),
            (b, c),
            (c, d),
            (c, e),
            (d, e),
            (d, f),
            (e, f),
            (f, g),
            (f, h),
            (g, V),
            (h, V),
            (g, h),
        ]);
    }
    let w = 2 + 8 * k;
    edges.extend([(U, w), (V, w)]);
    Ok(Fixture {
        name: format!("fig2-k{k}"),
        graph: Multigraph::from_edges(w + 1, edges)?,
        u: VertexId(U),
        v: VertexId(V),
        golden: Golden { nu: Some(k), tau: Some(2 * k + 1), lambda: Some(2 * k + 1) },
        trails: Vec::new(),
    })
}

/// `λ = 2k + 1` but only `k` disjoint odd `(u,v)`-trails, while `k + 1`
/// disjoint odd trails with ends in `{u,v}` exist (carried in `trails`).
pub fn fig6(k: usize) -> Result<Fixture> {
    need(k, "fig6")?;
    let mut edges = Vec::new();
    let mut paths: Vec<Vec<usize>> = Vec::new();
    for i in 0..k - 1 {
        let (x, y) = (2 + 2 * i, 3 + 2 * i);
        let base = edges.len();
        edges.extend([(U, x), (U, y), (V, x), (V, y), (x, y)]);
        // u -(u,x)- x -(x,y)- y -(v,y)- v
        paths.push(vec![base, base + 4, base + 3]);
    }
    let z = 2 + 2 * (k - 1);
    let [z1, z2, z3, z4, z5, z6]: [usize; 6] = std::array::from_fn(|j| z + j);
    let base = edges.len();
    edges.extend([
        (U, z1),
        (U, z2),
        (z1, z2),
        (z1, z3),
        (z2, z4),
        (z3, z5),
        (z4, z6),
        (z5, z6),
        (z5, V),
        (z6, V),
    ]);
    let w = z + 6;
    edges.extend([(U, w), (V, w)]);
    let graph = Multigraph::from_edges(w + 1, edges)?;
    let mut trails = Vec::with_capacity(k + 1);
    for p in paths {
        trails.push(Trail::walk(&graph, VertexId(U), &p.into_iter().map(EdgeId).collect::<Vec<_>>())?);
    }
    trails.push(Trail::walk(&graph, VertexId(U), &[base, base + 2, base + 1].map(EdgeId))?);
    trails.push(Trail::walk(&graph, VertexId(V), &[base + 8, base + 7, base + 9].map(EdgeId))?);
    Ok(Fixture {
        name: format!("fig6-k{k}"),
        graph,
        u: VertexId(U),
        v: VertexId(V),
        golden: Golden { nu: Some(k), tau: None, lambda: Some(2 * k + 1) },
        trails,
    })
}

/// `ν = k`, `τ = 2k`: `k` branches `u = x = y = z - v` of doubled edges with a
/// triangle hanging off each of `x, y, z`, plus `m` paths `u - w_j - v`.
pub fn hk(k: usize, m: usize) -> Result<Fixture> {
    need(k, "hk")?;
    if m == 0 {
        return Err(Error::BadParameter("hk needs m >= 1".into()));
    }
    let mut edges = Vec::new();
    for i in 0..k {
        let [x, y, z, a, b, c, d, e, f]: [usize; 9] = std::array::from_fn(|j| 2 + 9 * i + j);
        edges.extend([(U, x), (U, x), (x, y), (x, y), (y, z), (y, z), (z, V)]);
        edges.extend([(x, a), (a, b), (b, x), (y, c), (c, d), (d, y), (z, e), (e, f), (f, z)]);
    }
    let first_w = 2 + 9 * k;
    for j in 0..m {
        edges.extend([(U, first_w + j), (first_w + j, V)]);
    }
    Ok(Fixture {
        name: format!("hk-k{k}-m{m}"),
        graph: Multigraph::from_edges(first_w + m, edges)?,
        u: VertexId(U),
        v: VertexId(V),
        golden: Golden { nu: Some(k), tau: Some(2 * k), lambda: Some(k + m) },
        trails: Vec::new(),
    })
}

/// [`hk`] with `u` and `v` merged into `s`: `ν(s,s) = k`, `τ(s,s) = 2k`.
pub fn fig8(k: usize, m: usize) -> Result<Fixture> {
    let base = hk(k, m)?;
    let id = base.graph.identify_vertices(base.u, base.v)?;
    Ok(Fixture {
        name: format!("fig8-k{k}-m{m}"),
        graph: id.graph,
        u: id.s,
        v: id.s,
        golden: Golden { nu: Some(k), tau: Some(2 * k), lambda: None },
        trails: Vec::new(),
    })
}

/// `m` edges on `n` vertices. With probability `parallel_prob` an edge
/// copies the endpoints of an earlier one; each edge is signed with
/// probability `sigma_prob`.
pub fn random_multigraph(seed: u64, n: usize, m: usize, parallel_prob: f64, sigma_prob: f64) -> Result<Multigraph> {
    if n < 2 {
        return Err(Error::BadParameter("random graphs need at least two vertices".into()));
    }
    for (name, p) in [("parallel_prob", parallel_prob), ("sigma_prob", sigma_prob)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::BadParameter(format!("{name} = {p} is not a probability")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slots: Vec<Option<Edge>> = Vec::with_capacity(m);
    for _ in 0..m {
        let (a, b) = match slots.last() {
            Some(_) if rng.gen_bool(parallel_prob) => {
                let e = slots[rng.gen_range(0..slots.len())].expect("all slots filled");
                (e.u, e.v)
            }
            _ => {
                let a = rng.gen_range(0..n);
                let b = (a + rng.gen_range(1..n)) % n;
                (VertexId(a), VertexId(b))
            }
        };
        slots.push(Some(Edge { u: a, v: b, signed: rng.gen_bool(sigma_prob) }));
    }
    Multigraph::from_slots(n, slots)
}
