//! Handling for endpoints of degree 2, where no split leaves both roots with
//! two same-side neighbours.
//!
//! With `d >= 3` this forces one endpoint, say `a`, to degree exactly 2. The
//! constructions: if removing `a` breaks 2-connectivity, an endblock of the
//! remainder carries a same-degree recursion; if the endpoints are close
//! together and both of degree 2, the recursion moves to the graph without
//! them; otherwise the split leaves `a` a single side-neighbour `a'` and the
//! interaction-digraph machinery runs on the limbs of `a'` and `b`, with the
//! endpoint's cross partner as a forced exit.

use super::assemble::{chain_segments, view_bfs};
use super::context::{cross_partner, DigraphVariant, SplitContext};
use super::rules::Engine;
use super::{ab_path_inner, target_bound, Ctx, Mode};
use crate::host::CubeVertex;
use crate::menger::disjoint_paths;
use crate::split::{split_candidates, SplitOutcome};
use crate::subgraph::SubgraphView;
use crate::{Error, Result};
use std::collections::HashSet;

pub(crate) fn low_degree_engine(
    g: &SubgraphView,
    a: &CubeVertex,
    b: &CubeVertex,
    d: u32,
    mode: Mode,
    ctx: &mut Ctx,
) -> Result<Vec<CubeVertex>> {
    let mut last = Error::ConstructionGap("no low-degree rule applied".into());
    for (x, y, mirrored) in [(a, b, false), (b, a, true)] {
        match oriented(g, x, y, d, mode, ctx) {
            Ok(mut path) => {
                if mirrored {
                    path.reverse();
                }
                // validated against the (symmetric) target by the builder
                return Ok(path);
            }
            Err(e) => {
                ctx.note(format!("low-degree orientation: {e}"));
                last = e;
            }
        }
    }
    Err(last)
}

/// Builds a path from the constrained endpoint `a` to `b`.
fn oriented(
    g: &SubgraphView,
    a: &CubeVertex,
    b: &CubeVertex,
    d: u32,
    mode: Mode,
    ctx: &mut Ctx,
) -> Result<Vec<CubeVertex>> {
    let target = target_bound(g, a, b, d, mode);
    let ai = g.index_of(a).unwrap();
    let bi = g.index_of(b).unwrap();
    if g.degree(ai) != 2 {
        return Err(Error::ConstructionGap(
            "constrained endpoint does not have degree 2".into(),
        ));
    }
    // removing the endpoint must keep 2-connectivity, else an endblock of the
    // remainder carries the whole bound
    let ga = g.subview(&g.complement_indices(&[ai]));
    if !ga.is_biconnected() {
        return detached_endpoint(g, &ga, a, b, d, mode, target, ctx);
    }
    if g.degree(bi) == 2 && g.host().hamming(a, b) <= 2 {
        match close_pair(g, a, b, d, mode, target, ctx) {
            Ok(p) => return Ok(p),
            Err(e) => ctx.note(format!("close-pair: {e}")),
        }
    }
    // a split where `a` keeps one neighbour and `b` keeps two
    let mut split: Option<SplitOutcome> = None;
    for cand in split_candidates(g, a, b)? {
        if cand.root_degrees.0 == 1 && cand.root_degrees.1 >= 2 {
            split = Some(cand);
            break;
        }
    }
    let split =
        split.ok_or_else(|| Error::ConstructionGap("no usable one-sided split".into()))?;
    let a_prime = {
        let sa = &split.side_a;
        let a_in = sa.index_of(a).unwrap();
        sa.vertex(sa.neighbors(a_in)[0]).clone()
    };
    let v = cross_partner_of(g, &split, a)
        .ok_or_else(|| Error::ConstructionGap("constrained endpoint has no cross edge".into()))?;
    if &v == b {
        // enter the far side directly: recurse without the endpoint
        let inner = ab_path_inner(&ga, &a_prime, b, d, mode, ctx)?;
        let path = chain_segments(g, &[vec![a.clone()], inner])?;
        if (path.len() as u64) <= target {
            return Err(Error::ConstructionGap("direct-entry path too short".into()));
        }
        ctx.rule("degree1-direct-entry");
        return Ok(path);
    }
    let sc = SplitContext::from_split(
        g,
        a,
        b,
        (a_prime.clone(), b.clone()),
        split,
        d,
        mode,
        DigraphVariant::Degree1,
    )?;
    // the cross partner must sit inside an endblock of the far side;
    // otherwise two endblock paths thread through distinct endblocks
    let v_idx = sc.sides[1].view.index_of(&v);
    let v_in_interior = v_idx.map_or(false, |vi| {
        sc.sides[1]
            .endblocks
            .iter()
            .any(|e| e.cutv.is_some() && e.interior.contains(&vi))
    });
    let mut eng = Engine {
        sc,
        ctx,
        target,
        d,
        mode,
    };
    if !v_in_interior {
        match partner_outside_interiors(&mut eng, a, &v) {
            Ok(p) => return Ok(p),
            Err(e) => eng.ctx.note(format!("partner-outside: {e}")),
        }
    }
    eng.run_from_digraph()
}

fn cross_partner_of(g: &SubgraphView, split: &SplitOutcome, a: &CubeVertex) -> Option<CubeVertex> {
    let gi = g.index_of(a)?;
    g.neighbors(gi)
        .iter()
        .map(|&w| g.vertex(w).clone())
        .find(|w| split.side_b.contains(w))
}

/// Removing the constrained endpoint leaves cutvertices: recurse at full
/// degree inside an endblock of the remainder whose interior holds one of the
/// endpoint's two neighbours.
#[allow(clippy::too_many_arguments)]
fn detached_endpoint(
    g: &SubgraphView,
    ga: &SubgraphView,
    a: &CubeVertex,
    b: &CubeVertex,
    d: u32,
    mode: Mode,
    target: u64,
    ctx: &mut Ctx,
) -> Result<Vec<CubeVertex>> {
    let forest = crate::decompose::block_cut_tree(ga);
    let b_in = ga.index_of(b).unwrap();
    let a_in_g = g.index_of(a).unwrap();
    let nbrs: Vec<CubeVertex> = g
        .neighbors(a_in_g)
        .iter()
        .map(|&w| g.vertex(w).clone())
        .collect();
    for e in forest.endblocks() {
        let Some(cutv) = e.cutv else { continue };
        let interior = forest.interior(&e);
        if interior.contains(&b_in) {
            continue;
        }
        let Some(w) = nbrs.iter().find(|n| {
            ga.index_of(n)
                .map_or(false, |ni| interior.binary_search(&ni).is_ok())
        }) else {
            continue;
        };
        let e_view = ga.subview(&forest.blocks[e.block].verts);
        let cutv_l = ga.vertex(cutv).clone();
        let inner = match ab_path_inner(&e_view, w, &cutv_l, d, mode, ctx) {
            Ok(p) => p,
            Err(err) => {
                ctx.note(format!("detached-endpoint recursion: {err}"));
                continue;
            }
        };
        let avoid: HashSet<CubeVertex> = interior
            .iter()
            .map(|&i| ga.vertex(i).clone())
            .filter(|l| l != &cutv_l)
            .collect();
        let tail = view_bfs(ga, &cutv_l, b, &avoid)?;
        let path = chain_segments(g, &[vec![a.clone()], inner, tail])?;
        if (path.len() as u64) > target {
            ctx.rule("degree1-detached-endblock");
            return Ok(path);
        }
        ctx.note("detached-endblock path too short");
    }
    Err(Error::ConstructionGap(
        "no endblock of the remainder carried the bound".into(),
    ))
}

/// Both endpoints have degree 2 and sit within distance 2: drop them both and
/// recurse between their private neighbours, re-attaching by the two pendant
/// edges.
fn close_pair(
    g: &SubgraphView,
    a: &CubeVertex,
    b: &CubeVertex,
    d: u32,
    mode: Mode,
    target: u64,
    ctx: &mut Ctx,
) -> Result<Vec<CubeVertex>> {
    let ai = g.index_of(a).unwrap();
    let bi = g.index_of(b).unwrap();
    let (a1, b1): (CubeVertex, CubeVertex) = if g.has_edge(ai, bi) {
        // adjacent: each has one other neighbour
        let an = g
            .neighbors(ai)
            .iter()
            .find(|&&w| w != bi)
            .map(|&w| g.vertex(w).clone())
            .ok_or_else(|| Error::ConstructionGap("no private neighbour".into()))?;
        let bn = g
            .neighbors(bi)
            .iter()
            .find(|&&w| w != ai)
            .map(|&w| g.vertex(w).clone())
            .ok_or_else(|| Error::ConstructionGap("no private neighbour".into()))?;
        (an, bn)
    } else {
        // distance two with shared neighbours: both must see the same pair
        let na: Vec<usize> = g.neighbors(ai).to_vec();
        let nb: Vec<usize> = g.neighbors(bi).to_vec();
        if na != nb {
            return Err(Error::ConstructionGap(
                "endpoints do not share both neighbours".into(),
            ));
        }
        (g.vertex(na[0]).clone(), g.vertex(na[1]).clone())
    };
    if a1 == b1 {
        return Err(Error::ConstructionGap("private neighbours coincide".into()));
    }
    let keep = g.complement_indices(&[ai, bi]);
    let g2 = g.subview(&keep);
    let inner = if g2.is_biconnected() {
        ab_path_inner(&g2, &a1, &b1, d, mode, ctx)?
    } else {
        // the private neighbours sit in the interiors of two endblocks;
        // same-degree recursions in both, joined across the block tree
        let forest = crate::decompose::block_cut_tree(&g2);
        let a1i = g2.index_of(&a1).unwrap();
        let b1i = g2.index_of(&b1).unwrap();
        let mut home = None;
        let mut dest = None;
        for e in forest.endblocks() {
            if e.cutv.is_none() {
                continue;
            }
            let interior = forest.interior(&e);
            if interior.binary_search(&a1i).is_ok() {
                home = Some(e.clone());
            } else if interior.binary_search(&b1i).is_ok() {
                dest = Some(e.clone());
            }
        }
        let (home, dest) = match (home, dest) {
            (Some(h), Some(t)) => (h, t),
            _ => {
                return Err(Error::ConstructionGap(
                    "private neighbours not in distinct endblock interiors".into(),
                ))
            }
        };
        let hv = g2.subview(&forest.blocks[home.block].verts);
        let tv = g2.subview(&forest.blocks[dest.block].verts);
        let hc = g2.vertex(home.cutv.unwrap()).clone();
        let tc = g2.vertex(dest.cutv.unwrap()).clone();
        let p1 = ab_path_inner(&hv, &a1, &hc, d, mode, ctx)?;
        let p2 = ab_path_inner(&tv, &tc, &b1, d, mode, ctx)?;
        let avoid: HashSet<CubeVertex> = forest
            .interior(&home)
            .into_iter()
            .chain(forest.interior(&dest))
            .map(|i| g2.vertex(i).clone())
            .filter(|l| l != &hc && l != &tc)
            .collect();
        let mid = view_bfs(&g2, &hc, &tc, &avoid)?;
        chain_segments(g, &[p1, mid, p2])?
    };
    let path = chain_segments(g, &[vec![a.clone()], inner, vec![b.clone()]])?;
    if (path.len() as u64) <= target {
        return Err(Error::ConstructionGap("close-pair path too short".into()));
    }
    ctx.rule("degree1-close-pair");
    Ok(path)
}

/// The endpoint's cross partner is not interior to any far-side endblock:
/// two vertex-disjoint far-side paths reach two distinct endblocks, whose
/// exit paths thread back through the near side.
fn partner_outside_interiors(
    eng: &mut Engine,
    a: &CubeVertex,
    v: &CubeVertex,
) -> Result<Vec<CubeVertex>> {
    let d = eng.d;
    let side_b = &eng.sc.sides[1];
    let b = eng.sc.b.clone();
    let endblocks = side_b.endblocks.clone();
    let b_idx = side_b.root_idx;
    let view_b = side_b.view.clone();
    let view_a = eng.sc.sides[0].view.clone();
    let a_prime = eng.sc.sides[0].root.clone();
    let mut pairs = Vec::new();
    for (i, e1) in endblocks.iter().enumerate() {
        for (j, e2) in endblocks.iter().enumerate() {
            if i == j || e1.cutv.is_none() || e2.cutv.is_none() {
                continue;
            }
            if e1.interior.contains(&b_idx) || e2.interior.contains(&b_idx) {
                continue;
            }
            pairs.push((i, j));
        }
    }
    for (i, j) in pairs {
        let e1 = endblocks[i].clone();
        let e2 = endblocks[j].clone();
        // pick exits whose partners live on the near side, off a and a'
        let good = |x: &super::context::ExitInfo| x.partner != *a && x.partner != a_prime;
        let elig = |x: &&super::context::ExitInfo| {
            eng.mode != Mode::Tight || x.eligible
        };
        let Some(x1) = e1.exits.iter().filter(elig).find(|x| good(x)) else { continue };
        let Some(x2) = e2.exits.iter().filter(elig).find(|x| good(x) && x.partner != x1.partner)
        else {
            continue;
        };
        let c1 = view_b.vertex(e1.cutv.unwrap()).clone();
        let c2 = view_b.vertex(e2.cutv.unwrap()).clone();
        // two disjoint far-side paths {v, b} -> {cutv(E1), cutv(E2)} avoiding
        // both interiors
        let keep: Vec<usize> = (0..view_b.n())
            .filter(|i| !e1.interior.contains(i) && !e2.interior.contains(i))
            .collect();
        let bv = view_b.subview(&keep);
        let fg = super::rules::flow_of_view(&bv);
        let src: Vec<usize> = [v, &b]
            .iter()
            .map(|l| {
                bv.index_of(l)
                    .ok_or_else(|| Error::ConstructionGap(format!("{l} outside trimmed side")))
            })
            .collect::<Result<_>>()?;
        let snk: Vec<usize> = [&c1, &c2]
            .iter()
            .map(|l| {
                bv.index_of(l)
                    .ok_or_else(|| Error::ConstructionGap(format!("{l} outside trimmed side")))
            })
            .collect::<Result<_>>()?;
        let Some(paths) = disjoint_paths(&fg, &src, &snk, 2, &[]) else { continue };
        let lab = |p: &[usize]| -> Vec<CubeVertex> {
            p.iter().map(|&i| bv.vertex(i).clone()).collect()
        };
        let p_from_v = paths.iter().find(|p| p.first() == Some(&src[0]));
        let p_from_b = paths.iter().find(|p| p.first() == Some(&src[1]));
        let (Some(pv), Some(pb)) = (p_from_v, p_from_b) else { continue };
        let (pv, pb) = (lab(pv), lab(pb));
        // orient the endblocks to the pairing
        let v_hits_e1 = pv.last() == Some(&c1);
        let (first_eb, first_exit, second_eb, second_exit) = if v_hits_e1 {
            (e1.clone(), x1.clone(), e2.clone(), x2.clone())
        } else {
            (e2.clone(), x2.clone(), e1.clone(), x1.clone())
        };
        let fc = view_b.vertex(first_eb.cutv.unwrap()).clone();
        let sc2 = view_b.vertex(second_eb.cutv.unwrap()).clone();
        let fe_view = view_b.subview(&first_eb.verts);
        let se_view = view_b.subview(&second_eb.verts);
        let p2 = match ab_path_inner(&fe_view, &fc, &first_exit.x_label, d - 1, eng.mode, eng.ctx)
        {
            Ok(p) => p,
            Err(_) => continue,
        };
        let p4 = match ab_path_inner(&se_view, &second_exit.x_label, &sc2, d - 1, eng.mode, eng.ctx)
        {
            Ok(p) => p,
            Err(_) => continue,
        };
        // near-side bridge between the two partners, avoiding the endpoint
        let avoid: HashSet<CubeVertex> = [a.clone()].into_iter().collect();
        let p3 = match view_bfs(&view_a, &first_exit.partner, &second_exit.partner, &avoid) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let mut pb_rev = pb;
        pb_rev.reverse();
        let segs = vec![vec![a.clone()], pv, p2, p3, p4, pb_rev];
        match eng.finish_rule("degree1-two-endblocks", segs) {
            Ok(p) => return Ok(p),
            Err(e) => eng.ctx.note(format!("two-endblocks: {e}")),
        }
    }
    Err(Error::ConstructionGap(
        "no two-endblock assembly for the outside partner".into(),
    ))
}
