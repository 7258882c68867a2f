//! One test per acceptance criterion. Each prints a single `PASS`/`FAIL`
//! line straight to stdout (bypassing the test harness capture, so the lines
//! show up in a plain `cargo test` log) and then asserts.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oddtrail::apath::{eval_triple, floor_inequality_check, nu_apaths, ApathBudget, ValidTriple};
use oddtrail::driver::{solve_ss, solve_uv, SolveConfig};
use oddtrail::fixtures::{self, Fixture};
use oddtrail::gadget::build_gadget;
use oddtrail::minmax::minmax_rhs;
use oddtrail::oracle::{self, OracleBudget};
use oddtrail::trail::{verify_trail, TrailCollection};
use oddtrail::untangle::untangle;
use oddtrail::{flow, EdgeId, EdgeSet, Error, Multigraph, Trail, VertexId};

const U: VertexId = VertexId(0);
const V: VertexId = VertexId(1);

fn report(n: usize, title: &str, started: Instant, limit: Duration, outcome: Result<String, String>) {
    let elapsed = started.elapsed();
    let outcome = outcome.and_then(|detail| {
        if elapsed > limit {
            Err(format!("{detail}; took {elapsed:.1?}, limit {limit:?}"))
        } else {
            Ok(detail)
        }
    });
    let line = match &outcome {
        Ok(detail) => format!("criterion {n} ({title}): PASS in {elapsed:.2?} -- {detail}\n"),
        Err(why) => format!("criterion {n} ({title}): FAIL in {elapsed:.2?} -- {why}\n"),
    };
    let _ = std::io::stdout().write_all(line.as_bytes());
    if let Err(why) = outcome {
        panic!("criterion {n} failed: {why}");
    }
}

fn check(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

/// Seeded graphs on at most `max_n` vertices and at most 14 edges, with the
/// signed fraction varying across the corpus.
fn corpus(count: u64, max_n: usize) -> Vec<Multigraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x00dd_7a11);
    (0..count)
        .map(|seed| {
            let n = rng.gen_range(2..=max_n);
            let m = rng.gen_range(1..=14);
            let sigma = [0.3, 0.5, 0.7, 1.0][rng.gen_range(0..4)];
            fixtures::random_multigraph(seed, n, m, 0.2, sigma).unwrap()
        })
        .collect()
}

fn disjoint_odd_uv(g: &Multigraph, u: VertexId, v: VertexId, trails: &[Trail]) -> Result<(), String> {
    let mut used = EdgeSet::new();
    for t in trails {
        verify_trail(g, t, (u, v), true).map_err(|e| format!("{t}: {e}"))?;
        for &e in t.edges() {
            check(used.insert(e), || format!("edge {e:?} shared"))?;
        }
    }
    Ok(())
}

#[test]
fn criterion_1_fig2_tightness() {
    let started = Instant::now();
    let budget = OracleBudget::edges(32);
    let outcome = (|| {
        let mut seen = Vec::new();
        for k in 1..=2 {
            let t0 = Instant::now();
            let f = fixtures::fig2(k).unwrap();
            let nu = oracle::nu_witness(&f.graph, f.u, f.v, &budget).map_err(|e| e.to_string())?.len();
            let (tau, _) = oracle::tau_exact_with(&f.graph, f.u, f.v, &budget).map_err(|e| e.to_string())?;
            check(nu == k && tau == 2 * k + 1, || format!("k={k}: nu={nu}, tau={tau}"))?;
            check(t0.elapsed() < Duration::from_secs(60), || format!("k={k} took {:?}", t0.elapsed()))?;
            seen.push(format!("k={k}: nu={nu} tau={tau}"));
        }
        Ok(seen.join(", "))
    })();
    report(1, "fig2 nu = k, tau = 2k+1", started, Duration::from_secs(120), outcome);
}

#[test]
fn criterion_2_solve_uv_contract() {
    let started = Instant::now();
    let cfg = SolveConfig::default();
    let budget = OracleBudget::default();
    let outcome = (|| {
        let (mut packings, mut covers) = (0, 0);
        for (i, g) in corpus(200, 8).iter().enumerate() {
            for k in 1..=4 {
                let ctx = |why: String| format!("graph {i}, k={k}: {why}");
                let out = solve_uv(g, U, V, k, &cfg).map_err(|e| ctx(e.to_string()))?;
                if let Some(trails) = out.trails() {
                    check(trails.len() == k, || ctx(format!("{} trails", trails.len())))?;
                    disjoint_odd_uv(g, U, V, trails).map_err(ctx)?;
                    packings += 1;
                } else {
                    let cover = out.cover_set().unwrap();
                    check(cover.len() < 2 * k, || ctx(format!("cover of {}", cover.len())))?;
                    let ok = oracle::is_cover(g, U, V, cover, &budget).map_err(|e| ctx(e.to_string()))?;
                    check(ok, || ctx(format!("{cover:?} misses an odd trail")))?;
                    covers += 1;
                }
            }
        }
        Ok(format!("{packings} packings, {covers} covers, all verified"))
    })();
    report(2, "solve_uv packing-or-cover contract", started, Duration::from_secs(600), outcome);
}

#[test]
fn criterion_3_tau_at_most_2nu_plus_1() {
    let started = Instant::now();
    let outcome = (|| {
        let mut tight = 0;
        for (i, g) in corpus(200, 8).iter().enumerate() {
            let nu = oracle::nu_exact(g, U, V).map_err(|e| e.to_string())?;
            let (tau, _) = oracle::tau_exact(g, U, V).map_err(|e| e.to_string())?;
            check(tau <= 2 * nu + 1, || format!("graph {i}: tau={tau} > 2*{nu}+1"))?;
            tight += (tau == 2 * nu + 1) as usize;
        }
        let f = fixtures::fig2(1).unwrap();
        let nu = oracle::nu_exact(&f.graph, f.u, f.v).map_err(|e| e.to_string())?;
        let (tau, _) = oracle::tau_exact(&f.graph, f.u, f.v).map_err(|e| e.to_string())?;
        check(tau == 2 * nu + 1, || format!("fig2 k=1: tau={tau}, nu={nu}"))?;
        Ok(format!("0 violations on 200 graphs ({tight} tight), fig2 k=1 attains tau={tau}=2*{nu}+1"))
    })();
    report(3, "tau <= 2 nu + 1", started, Duration::from_secs(300), outcome);
}

#[test]
fn criterion_4_minmax_equals_nu() {
    let started = Instant::now();
    let outcome = (|| {
        let mut graphs: Vec<(String, Multigraph, VertexId)> =
            corpus(200, 7).into_iter().enumerate().map(|(i, g)| (format!("graph {i}"), g, U)).collect();
        let f = fixtures::fig8(1, 2).unwrap();
        graphs.push((f.name, f.graph, f.u));
        for (name, g, s) in &graphs {
            let value = minmax_rhs(g, *s).map_err(|e| format!("{name}: {e}"))?.value;
            let nu = oracle::nu_exact(g, *s, *s).map_err(|e| format!("{name}: {e}"))?;
            check(value == nu, || format!("{name}: min-max {value} != nu {nu}"))?;
        }
        Ok(format!("exact equality on {} graphs", graphs.len()))
    })();
    report(4, "min-max value = nu(s,s)", started, Duration::from_secs(300), outcome);
}

/// Greedy disjoint odd trails with both ends in `{u, v}`, at most `cap`.
fn greedy_collection(g: &Multigraph, u: VertexId, v: VertexId, cap: usize) -> Vec<Trail> {
    let ends = BTreeSet::from([u, v]);
    let found = oracle::minimal_odd_trails(g, &ends, &ends, &OracleBudget::edges(32)).unwrap();
    let mut used = EdgeSet::new();
    let mut picked = Vec::new();
    for t in found.trails() {
        if picked.len() == cap {
            break;
        }
        if t.edges().iter().all(|e| !used.contains(*e)) {
            used.extend(t.edges().iter().copied());
            picked.push(t.clone());
        }
    }
    picked
}

#[test]
fn criterion_5_untangle() {
    let started = Instant::now();
    let outcome = (|| {
        let f = fixtures::fig6(2).unwrap();
        let two = TrailCollection::new(&f.graph, f.u, f.v, f.trails[1..].to_vec()).map_err(|e| e.to_string())?;
        let out = untangle(&f.graph, two).map_err(|e| format!("|T|=2: {e}"))?;
        check(out.trails.len() == 2, || format!("{} trails", out.trails.len()))?;
        disjoint_odd_uv(&f.graph, f.u, f.v, &out.trails)?;
        let three = TrailCollection::new(&f.graph, f.u, f.v, f.trails.clone()).map_err(|e| e.to_string())?;
        match untangle(&f.graph, three) {
            Err(Error::ConnectivityTooLow { lambda: 5, trails: 3 }) => {}
            other => return Err(format!("|T|=3 gave {other:?}")),
        }

        let mut instances: Vec<(String, Multigraph, VertexId, VertexId)> =
            corpus(200, 8).into_iter().enumerate().map(|(i, g)| (format!("graph {i}"), g, U, V)).collect();
        for f in [fixtures::fig6(1), fixtures::fig6(2), fixtures::fig6(3), fixtures::fig2(1), fixtures::hk(1, 2)] {
            let f = f.unwrap();
            instances.push((f.name, f.graph, f.u, f.v));
        }
        let (mut runs, mut steps, mut worst) = (0, 0, 0.0f64);
        for (name, g, u, v) in &instances {
            let lambda = flow::lambda(g, *u, *v).unwrap();
            let trails = greedy_collection(g, *u, *v, lambda / 2);
            if trails.is_empty() {
                continue;
            }
            let k = trails.len();
            let coll = TrailCollection::new(g, *u, *v, trails).map_err(|e| format!("{name}: {e}"))?;
            let out = untangle(g, coll).map_err(|e| format!("{name}: {e}"))?;
            check(out.trails.len() == k, || format!("{name}: {} of {k} trails", out.trails.len()))?;
            disjoint_odd_uv(g, *u, *v, &out.trails).map_err(|e| format!("{name}: {e}"))?;
            check(out.steps.len() <= out.bound, || format!("{name}: {} steps > {}", out.steps.len(), out.bound))?;
            // the final rewrite completes the collection and may add contacts
            let last = out.steps.len().saturating_sub(1);
            for s in &out.steps[..last] {
                check(s.after.value < s.before.value, || {
                    format!("{name}: step {} ({}) phi {} -> {}", s.iteration, s.case, s.before.value, s.after.value)
                })?;
            }
            runs += 1;
            steps += out.steps.len();
            worst = worst.max(out.steps.len() as f64 / out.bound as f64);
        }
        Ok(format!(
            "fig6 k=2 ok, |T|=3 refused; {runs} fuzz runs, {steps} steps, max steps/bound {worst:.2}, phi always fell"
        ))
    })();
    report(5, "untangling", started, Duration::from_secs(300), outcome);
}

/// Calls `visit` on every nonempty closed trail at `s`, stopping at the
/// first error.
fn each_closed_trail(
    g: &Multigraph,
    s: VertexId,
    visit: &mut dyn FnMut(Trail) -> Result<(), String>,
) -> Result<(), String> {
    fn go(
        g: &Multigraph,
        s: VertexId,
        at: VertexId,
        used: &mut Vec<EdgeId>,
        visit: &mut dyn FnMut(Trail) -> Result<(), String>,
    ) -> Result<(), String> {
        if at == s && !used.is_empty() {
            visit(Trail::walk(g, s, used).unwrap())?;
        }
        for &(e, y) in g.incident(at) {
            if !used.contains(&e) {
                used.push(e);
                go(g, s, y, used, visit)?;
                used.pop();
            }
        }
        Ok(())
    }
    go(g, s, s, &mut Vec::new(), visit)
}

const TRAIL_CAP: usize = 2_000_000;

#[test]
fn criterion_6_gadget_correspondence() {
    let started = Instant::now();
    let budget = ApathBudget::default();
    let outcome = (|| {
        let mut cases: Vec<Fixture> = Vec::new();
        let f = fixtures::fig6(1).unwrap();
        cases.push(Fixture { name: "fig6-k1 at v".into(), u: f.v, v: f.v, ..f.clone() });
        cases.push(Fixture { name: "fig6-k1 at u".into(), v: f.u, ..f });
        let mut skipped = 0;
        for seed in 0..40 {
            let g = fixtures::random_multigraph(1000 + seed, 4 + seed as usize % 5, 6 + seed as usize % 9, 0.05, 0.6)
                .unwrap();
            // the fixed families are enumerated in full; random extras only
            // when their closed-trail count is desk-sized
            let mut count = 0usize;
            if each_closed_trail(&g, U, &mut |_| {
                count += 1;
                if count > TRAIL_CAP { Err(String::new()) } else { Ok(()) }
            })
            .is_err()
            {
                skipped += 1;
                continue;
            }
            cases.push(Fixture {
                name: format!("random {seed}"),
                graph: g,
                u: U,
                v: U,
                golden: Default::default(),
                trails: Vec::new(),
            });
        }
        let cases: Vec<Fixture> = cases.into_iter().filter(|f| f.graph.edge_count() <= 14).collect();
        let mut trails = 0;
        for f in &cases {
            let (g, s) = (&f.graph, f.u);
            let gg = build_gadget(g, s).map_err(|e| format!("{}: {e}", f.name))?;
            each_closed_trail(g, s, &mut |t| {
                let p = gg.trail_to_path(&t).map_err(|e| format!("{}: {t}: {e}", f.name))?;
                check(p.is_path() && gg.a_set().contains(&p.start()) && gg.a_set().contains(&p.end()), || {
                    format!("{}: image of {t} is not an A-path", f.name)
                })?;
                let back = gg.path_to_trail(&p).map_err(|e| format!("{}: {e}", f.name))?;
                check(back.edges() == t.edges(), || format!("{}: {t} came back as {back}", f.name))?;
                check(gg.gamma(&p) == t.parity(g), || format!("{}: parity of {t} changed", f.name))?;
                trails += 1;
                Ok(())
            })?;
            let nu = oracle::nu_exact(g, s, s).map_err(|e| format!("{}: {e}", f.name))?;
            let nu_h = nu_apaths(&gg, &budget).map_err(|e| format!("{}: {e}", f.name))?;
            check(nu == nu_h, || format!("{}: nu(s,s)={nu}, nu_apaths={nu_h}", f.name))?;
        }
        Ok(format!(
            "{trails} trails round-tripped over {} graphs ({skipped} random graphs over {TRAIL_CAP} trails skipped); nu matches on all",
            cases.len()
        ))
    })();
    report(6, "gadget round trip and nu", started, Duration::from_secs(300), outcome);
}

#[test]
fn criterion_7_fig8_ss() {
    let started = Instant::now();
    let outcome = (|| {
        let f = fixtures::fig8(1, 2).unwrap();
        let cfg = SolveConfig::default();
        let one = solve_ss(&f.graph, f.u, 1, &cfg).map_err(|e| e.to_string())?;
        check(one.is_packing(), || "k=1 did not pack".into())?;
        let two = solve_ss(&f.graph, f.u, 2, &cfg).map_err(|e| e.to_string())?;
        let cover = two.cover_set().ok_or("k=2 packed")?;
        check(cover.len() <= 2, || format!("k=2 cover of {}", cover.len()))?;
        let ok = oracle::is_cover(&f.graph, f.u, f.u, cover, &OracleBudget::default()).map_err(|e| e.to_string())?;
        check(ok, || "k=2 cover misses a trail".into())?;
        let (tau, _) = oracle::tau_exact(&f.graph, f.u, f.u).map_err(|e| e.to_string())?;
        check(tau == 2, || format!("tau(s,s) = {tau}"))?;
        Ok(format!("k=1 packs, k=2 cover {:?}, tau(s,s)=2", cover.iter().map(|e| e.0).collect::<Vec<_>>()))
    })();
    report(7, "fig8 (s,s) tightness", started, Duration::from_secs(60), outcome);
}

/// `min |δ(X) ∪ (E(X) − F)|` over `X ⊇ {u, v}` and `F ⊆ E(X)` with
/// `(X, F)` balanced and `u, v` on the same side. Any such `F` lies inside
/// the agreeing edge set of some 2-colouring of `X` with `u, v` together, so
/// enumerating colourings (out / side 0 / side 1 per vertex) is exhaustive.
fn min_restricted_cover(g: &Multigraph, u: VertexId, v: VertexId) -> (usize, u64) {
    let free: Vec<usize> = g.vertices().filter(|&x| x != u && x != v).map(|x| x.0).collect();
    let mut side: Vec<Option<u8>> = vec![None; g.vertex_count()];
    side[u.0] = Some(0);
    side[v.0] = Some(0);
    let mut best = usize::MAX;
    let mut seen = 0u64;
    let total = 3u64.pow(free.len() as u32);
    for mut code in 0..total {
        for &x in &free {
            side[x] = match code % 3 {
                0 => None,
                d => Some(d as u8 - 1),
            };
            code /= 3;
        }
        let size = g
            .edges()
            .filter(|(_, e)| match (side[e.u.0], side[e.v.0]) {
                (Some(a), Some(b)) => a ^ b != e.sign(),
                (None, None) => false,
                _ => true,
            })
            .count();
        best = best.min(size);
        seen += 1;
    }
    (best, seen)
}

#[test]
fn criterion_8_restricted_cover_separation() {
    let started = Instant::now();
    let outcome = (|| {
        let f = fixtures::hk(1, 2).unwrap();
        let (best, seen) = min_restricted_cover(&f.graph, f.u, f.v);
        check(best >= 3, || format!("a restricted cover of size {best} exists"))?;
        let (tau, _) = oracle::tau_exact(&f.graph, f.u, f.v).map_err(|e| e.to_string())?;
        check(tau == 2, || format!("tau = {tau}"))?;
        Ok(format!("min restricted cover {best} over {seen} colourings, tau = {tau}"))
    })();
    report(8, "restricted covers of H_1 need 3 edges", started, Duration::from_secs(300), outcome);
}

#[test]
fn criterion_9_triples_and_floor_inequality() {
    let started = Instant::now();
    let budget = ApathBudget::default();
    let outcome = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut triples = 0;
        let mut graph_seed = 5000;
        while triples < 1000 {
            graph_seed += 1;
            let n = rng.gen_range(2..=6);
            let m = rng.gen_range(1..=8);
            let g = fixtures::random_multigraph(graph_seed, n, m, 0.25, 0.7).unwrap();
            let gg = build_gadget(&g, U).unwrap();
            check(gg.node_count() <= 16, || format!("gadget with {} nodes", gg.node_count()))?;
            let nu = nu_apaths(&gg, &budget).map_err(|e| e.to_string())?;
            for _ in 0..20 {
                let mut t = ValidTriple::default();
                for x in (0..gg.node_count()).map(VertexId) {
                    let roll = rng.gen_range(0..4);
                    let roll = if gg.a_set().contains(&x) { roll % 2 } else { roll };
                    match roll {
                        0 => t.y.insert(x),
                        1 => t.b0.insert(x),
                        2 => t.b1.insert(x),
                        _ => false,
                    };
                }
                let p = eval_triple(&gg, &t).map_err(|e| e.to_string())?;
                check(p >= nu, || format!("graph seed {graph_seed}: p={p} < nu={nu} for {t:?}"))?;
                triples += 1;
            }
        }
        for i in 0..10_000 {
            let q = rng.gen_range(2..=10);
            let r: Vec<u64> = (0..q).map(|_| rng.gen_range(0..=40)).collect();
            check(floor_inequality_check(&r), || format!("vector {i}: {r:?}"))?;
        }
        Ok(format!("{triples} triples satisfy p >= nu; 10000 vectors satisfy the floor inequality"))
    })();
    report(9, "weak duality of triples", started, Duration::from_secs(300), outcome);
}
