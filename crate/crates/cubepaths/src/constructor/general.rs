//! The generalized split-system bound: hosts whose two-sided partitions cost
//! each vertex up to `k` neighbours carry `a`-`b` paths of length at least
//! `2^(d/(k+2))` in 2-connected subgraphs of minimum degree `d` off the
//! endpoints.
//!
//! For `d < k + 4` the bound is below 4 and follows from 2-connectivity
//! alone. Otherwise the split is seeded at neighbours of the endpoints, and
//! the construction threads an interior-to-interior path of one far endblock
//! between two disjoint cross edges, a second endblock recursion, and three
//! connecting paths.

use super::assemble::{chain_segments, search_path_meeting, view_bfs};
use super::rules::{base_d2, flow_of_view};
use super::{ab_path_inner, ceil_pow2_ratio, Ctx, Error, Mode, Result};
use crate::decompose::{block_cut_tree, BlockForest, Endblock};
use crate::host::{CubeVertex, HostKind};
use crate::menger::disjoint_paths;
use crate::oracle;
use crate::subgraph::SubgraphView;
use std::collections::HashSet;

pub(crate) fn general_path(
    g: &SubgraphView,
    a: &CubeVertex,
    b: &CubeVertex,
    d: u32,
    k: u32,
    ctx: &mut Ctx,
) -> Result<Vec<CubeVertex>> {
    let ai = g.index_of(a).unwrap();
    let bi = g.index_of(b).unwrap();
    if let Some(min) = g.min_degree_excluding(&[ai, bi]) {
        if (min as u32) < d {
            return Err(Error::Precondition(format!(
                "a vertex off the endpoints has degree {min} < d = {d}"
            )));
        }
    }
    if !g.is_biconnected() {
        return Err(Error::Precondition("graph is not 2-connected".into()));
    }
    let target = ceil_pow2_ratio(d as u64, (k + 2) as u64);
    if g.n() <= ctx.opts.oracle_threshold {
        let r = oracle::longest_path_between(g, a, b, ctx.opts.oracle_budget)?;
        if (r.length as u64) >= target {
            ctx.rule("oracle-delegate");
            return Ok(r.witness);
        }
        if r.exact {
            return Err(Error::Precondition(format!(
                "exact optimum {} below the bound {target}",
                r.length
            )));
        }
    }
    let attempt = if d < k + 4 {
        // the bound is at most 3 here; 2-connectivity carries it
        base_d2(g, ai, bi, target, ctx)
    } else {
        split_construction(g, a, b, d, k, target, ctx)
    };
    match attempt {
        Ok(p) => Ok(p),
        Err(primary) => {
            ctx.note(format!("general rules exhausted: {primary}"));
            match search_path_meeting(g, ai, bi, target as usize, ctx.opts.fallback_budget) {
                Some(p) => {
                    ctx.fallback_used = true;
                    ctx.rule("fallback-search");
                    Ok(p.into_iter().map(|i| g.vertex(i).clone()).collect())
                }
                None => Err(primary),
            }
        }
    }
}

/// Halfspace membership for the generalized split, seeded at `x` and `y`.
fn on_x_half(kind: &HostKind, axis: usize, x: &CubeVertex, y: &CubeVertex, v: &CubeVertex) -> bool {
    let xv = x.coord(axis);
    let yv = y.coord(axis);
    let c = v.coord(axis);
    match kind {
        HostKind::Hypercube { .. } => c == xv,
        HostKind::Grid { .. } => {
            if xv > yv {
                c >= xv
            } else {
                c <= xv
            }
        }
        HostKind::Torus { sizes } => {
            let kk = sizes[axis] as i64;
            (c - xv).rem_euclid(kk) < (yv - xv).rem_euclid(kk)
        }
        HostKind::Product { .. } => c == xv,
    }
}

struct GenSplit {
    side_a: SubgraphView,
    side_b: SubgraphView,
}

/// Splits `g` by a direction separating a neighbour of `a` from a neighbour
/// of `b`, forcing `a` and `b` onto their own sides, with the usual
/// connectivity repair. Each vertex other than the endpoints loses at most
/// `k + 1` neighbours.
fn seeded_split(g: &SubgraphView, a: &CubeVertex, b: &CubeVertex) -> Result<GenSplit> {
    let ai = g.index_of(a).unwrap();
    let bi = g.index_of(b).unwrap();
    let kind = g.host().kind().clone();
    for &an in g.neighbors(ai) {
        if an == bi {
            continue;
        }
        for &bn in g.neighbors(bi) {
            if bn == ai || bn == an {
                continue;
            }
            let x = g.vertex(an).clone();
            let y = g.vertex(bn).clone();
            for axis in g.host().differing_axes(&x, &y) {
                let in_x: Vec<bool> = (0..g.n())
                    .map(|i| {
                        if i == ai {
                            true
                        } else if i == bi {
                            false
                        } else {
                            on_x_half(&kind, axis, &x, &y, g.vertex(i))
                        }
                    })
                    .collect();
                // repair: C_a = component of the X half holding a
                let x_half: Vec<usize> = (0..g.n()).filter(|&i| in_x[i]).collect();
                let xv = g.subview(&x_half);
                let a_in = xv.index_of(a).unwrap();
                let mut c_a: HashSet<usize> = HashSet::new();
                for comp in xv.components() {
                    if comp.contains(&a_in) {
                        for i in comp {
                            c_a.insert(g.index_of(xv.vertex(i)).unwrap());
                        }
                        break;
                    }
                }
                let rest: Vec<usize> = (0..g.n()).filter(|i| !c_a.contains(i)).collect();
                let rv = g.subview(&rest);
                let Some(b_in) = rv.index_of(b) else { continue };
                let mut side_b_idx: Vec<usize> = Vec::new();
                for comp in rv.components() {
                    if comp.contains(&b_in) {
                        side_b_idx = comp
                            .into_iter()
                            .map(|i| g.index_of(rv.vertex(i)).unwrap())
                            .collect();
                        break;
                    }
                }
                let side_b_set: HashSet<usize> = side_b_idx.iter().copied().collect();
                let side_a_idx: Vec<usize> =
                    (0..g.n()).filter(|i| !side_b_set.contains(i)).collect();
                if side_a_idx.len() < 2 || side_b_idx.len() < 2 {
                    continue;
                }
                return Ok(GenSplit {
                    side_a: g.subview(&side_a_idx),
                    side_b: g.subview(&side_b_idx),
                });
            }
        }
    }
    Err(Error::ConstructionGap(
        "no seeded split separates the endpoints".into(),
    ))
}

/// Cross edges from the interior of an endblock to the far side, as
/// (interior label, far label) pairs.
fn interior_cross_edges(
    g: &SubgraphView,
    side: &SubgraphView,
    other: &SubgraphView,
    forest: &BlockForest,
    e: &Endblock,
) -> Vec<(CubeVertex, CubeVertex)> {
    let mut out = Vec::new();
    for &v in &forest.interior(e) {
        let label = side.vertex(v);
        let gi = g.index_of(label).unwrap();
        for &w in g.neighbors(gi) {
            let wl = g.vertex(w);
            if other.contains(wl) {
                out.push((label.clone(), wl.clone()));
            }
        }
    }
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn split_construction(
    g: &SubgraphView,
    a: &CubeVertex,
    b: &CubeVertex,
    d: u32,
    k: u32,
    target: u64,
    ctx: &mut Ctx,
) -> Result<Vec<CubeVertex>> {
    let gs = seeded_split(g, a, b)?;
    let mode = Mode::General { k };
    let d_side = d.saturating_sub(k + 1);
    let d_inner = d.saturating_sub(k + 2);
    // both orientations: (near side holding `a`) and mirrored
    for (near, far, na, nb, mirrored) in [
        (&gs.side_a, &gs.side_b, a, b, false),
        (&gs.side_b, &gs.side_a, b, a, true),
    ] {
        let forest = block_cut_tree(near);
        let na_idx = near.index_of(na).unwrap();
        // 2-connected near side: pair a far-endblock path with a near-side
        // recursion through any cross edge off the roots
        if forest.is_biconnected() {
            match biconnected_side(g, near, far, na, nb, d_side, mode, ctx) {
                Ok(mut p) => {
                    if mirrored {
                        p.reverse();
                    }
                    ctx.rule("general-2connected-side");
                    return finish_general(g, a, b, target, p, ctx);
                }
                Err(e) => {
                    ctx.note(format!("general 2connected side: {e}"));
                    continue;
                }
            }
        }
        // an endblock avoiding the root, as deep as possible in the block tree
        let Some(e) = farthest_endblock(&forest, na_idx) else {
            continue;
        };
        let cross = interior_cross_edges(g, near, far, &forest, &e);
        if cross.is_empty() {
            return Err(Error::Precondition(
                "endblock interior without cross edges in a 2-connected graph".into(),
            ));
        }
        let xs: HashSet<&CubeVertex> = cross.iter().map(|(x, _)| x).collect();
        let ys: HashSet<&CubeVertex> = cross.iter().map(|(_, y)| y).collect();
        let e_view = near.subview(&forest.blocks[e.block].verts);
        let cutv_label = e.cutv.map(|c| near.vertex(c).clone());
        if xs.len() == 1 {
            // single exit vertex: the rest of the endblock keeps full degree
            let x = (*xs.iter().next().unwrap()).clone();
            let y = cross[0].1.clone();
            let cutv = cutv_label
                .clone()
                .ok_or_else(|| Error::ConstructionGap("whole-side endblock".into()))?;
            let inner = ab_path_inner(&e_view, &cutv, &x, d, mode, ctx)?;
            let head = view_bfs(near, na, &cutv, &interior_set(near, &forest, &e))?;
            let tail = view_bfs(far, &y, nb, &HashSet::new())?;
            let mut p = chain_segments(g, &[head, inner, tail])?;
            if mirrored {
                p.reverse();
            }
            ctx.rule("general-single-exit");
            return finish_general(g, a, b, target, p, ctx);
        }
        if ys.len() == 1 {
            // all interior cross edges hit one far vertex: adjoin it
            let y = (*ys.iter().next().unwrap()).clone();
            let cutv = cutv_label
                .clone()
                .ok_or_else(|| Error::ConstructionGap("whole-side endblock".into()))?;
            let mut verts: Vec<CubeVertex> =
                e_view.vertices().to_vec();
            verts.push(y.clone());
            let gv = g.subview_labels(&verts);
            let inner = ab_path_inner(&gv, &cutv, &y, d, mode, ctx)?;
            let head = view_bfs(near, na, &cutv, &interior_set(near, &forest, &e))?;
            let tail = view_bfs(far, &y, nb, &HashSet::new())?;
            let mut p = chain_segments(g, &[head, inner, tail])?;
            if mirrored {
                p.reverse();
            }
            ctx.rule("general-single-entry");
            return finish_general(g, a, b, target, p, ctx);
        }
        match five_path_assembly(
            g, near, far, &forest, &e, &cross, na, nb, d, k, d_side, d_inner, mode, ctx,
        ) {
            Ok(mut p) => {
                if mirrored {
                    p.reverse();
                }
                ctx.rule("general-five-paths");
                return finish_general(g, a, b, target, p, ctx);
            }
            Err(e) => ctx.note(format!("general five paths: {e}")),
        }
    }
    Err(Error::ConstructionGap(
        "generalized split construction found no assembly".into(),
    ))
}

fn interior_set(
    side: &SubgraphView,
    forest: &BlockForest,
    e: &Endblock,
) -> HashSet<CubeVertex> {
    forest
        .interior(e)
        .into_iter()
        .map(|i| side.vertex(i).clone())
        .collect()
}

fn farthest_endblock(forest: &BlockForest, root_idx: usize) -> Option<Endblock> {
    // BFS over the block-cut incidence structure from a block holding the root
    let start = *forest.blocks_of_vertex[root_idx].first()?;
    let nb = forest.blocks.len();
    let mut dist = vec![usize::MAX; nb];
    dist[start] = 0;
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &c in &forest.blocks[u].verts {
            if !forest.is_cutvertex[c] {
                continue;
            }
            for &w in &forest.blocks_of_vertex[c] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    forest
        .endblocks()
        .into_iter()
        .filter(|e| {
            !forest.blocks[e.block].verts.contains(&root_idx)
        })
        .max_by_key(|e| (dist[e.block], std::cmp::Reverse(e.block)))
}

/// The near side is 2-connected: recurse on it to a partner of a far cross
/// vertex, and pair with a far-side endblock recursion.
#[allow(clippy::too_many_arguments)]
fn biconnected_side(
    g: &SubgraphView,
    near: &SubgraphView,
    far: &SubgraphView,
    na: &CubeVertex,
    nb: &CubeVertex,
    d_side: u32,
    mode: Mode,
    ctx: &mut Ctx,
) -> Result<Vec<CubeVertex>> {
    let far_forest = block_cut_tree(far);
    for e in far_forest.endblocks() {
        let interior = far_forest.interior(&e);
        let nb_idx = far.index_of(nb).unwrap();
        if interior.binary_search(&nb_idx).is_ok() {
            continue;
        }
        let cross = interior_cross_edges(g, far, near, &far_forest, &e);
        for (x, p) in cross {
            if &p == na || &x == nb {
                continue;
            }
            let head = match ab_path_inner(near, na, &p, d_side, mode, ctx) {
                Ok(h) => h,
                Err(_) => continue,
            };
            let e_view = far.subview(&far_forest.blocks[e.block].verts);
            let exit_target = match e.cutv {
                Some(c) => far.vertex(c).clone(),
                None => nb.clone(),
            };
            if exit_target == x {
                continue;
            }
            let inner = match ab_path_inner(&e_view, &x, &exit_target, d_side, mode, ctx) {
                Ok(i) => i,
                Err(_) => continue,
            };
            let tail = match e.cutv {
                Some(_) => view_bfs(far, &exit_target, nb, &interior_set(far, &far_forest, &e))?,
                None => vec![nb.clone()],
            };
            return chain_segments(g, &[head, inner, tail]);
        }
    }
    Err(Error::ConstructionGap(
        "no cross pairing for the 2-connected side".into(),
    ))
}

/// Interior-to-interior path inside an endblock: recurse on the endblock
/// minus its cutvertex, splitting across its own block structure if needed.
#[allow(clippy::too_many_arguments)]
fn endblock_interior_path(
    g: &SubgraphView,
    e_view: &SubgraphView,
    cutv: &CubeVertex,
    u: &CubeVertex,
    v: &CubeVertex,
    d_inner: u32,
    mode: Mode,
    ctx: &mut Ctx,
) -> Result<Vec<CubeVertex>> {
    let keep: Vec<usize> = (0..e_view.n())
        .filter(|&i| e_view.vertex(i) != cutv)
        .collect();
    let gp = e_view.subview(&keep);
    if gp.is_biconnected() {
        return ab_path_inner(&gp, u, v, d_inner, mode, ctx);
    }
    let forest = block_cut_tree(&gp);
    let ui = gp.index_of(u).unwrap();
    let vi = gp.index_of(v).unwrap();
    let ends = forest.endblocks();
    let find_home = |idx: usize| {
        ends.iter().find(|e| {
            e.cutv.is_some() && forest.interior(e).binary_search(&idx).is_ok()
        })
    };
    if let (Some(fu), Some(fv)) = (find_home(ui), find_home(vi)) {
        if fu.block != fv.block {
            let fuv = gp.subview(&forest.blocks[fu.block].verts);
            let fvv = gp.subview(&forest.blocks[fv.block].verts);
            let cu = gp.vertex(fu.cutv.unwrap()).clone();
            let cv = gp.vertex(fv.cutv.unwrap()).clone();
            let p1 = ab_path_inner(&fuv, u, &cu, d_inner, mode, ctx)?;
            let p2 = ab_path_inner(&fvv, &cv, v, d_inner, mode, ctx)?;
            let mut avoid = interior_set(&gp, &forest, fu);
            avoid.extend(interior_set(&gp, &forest, fv));
            let mid = view_bfs(&gp, &cu, &cv, &avoid)?;
            return chain_segments(g, &[p1, mid, p2]);
        }
    }
    // a free endblock avoiding both targets: contract its interior and use
    // two disjoint paths in the whole endblock
    for fe in &ends {
        if fe.cutv.is_none() {
            continue;
        }
        let interior = forest.interior(fe);
        if interior.binary_search(&ui).is_ok() || interior.binary_search(&vi).is_ok() {
            continue;
        }
        let interior_labels: HashSet<CubeVertex> =
            interior.iter().map(|&i| gp.vertex(i).clone()).collect();
        let fcut = gp.vertex(fe.cutv.unwrap()).clone();
        // flow graph over e_view minus the free interior, plus a contracted
        // node for it
        let keep2: Vec<usize> = (0..e_view.n())
            .filter(|&i| !interior_labels.contains(e_view.vertex(i)))
            .collect();
        let base = e_view.subview(&keep2);
        let contracted = base.n();
        let mut fg = flow_of_view(&base);
        fg.adj.push(Vec::new());
        for i in 0..base.n() {
            let gi = e_view.index_of(base.vertex(i)).unwrap();
            if e_view
                .neighbors(gi)
                .iter()
                .any(|&w| interior_labels.contains(e_view.vertex(w)))
            {
                fg.add_edge(i, contracted);
            }
        }
        let (Some(su), Some(sv)) = (base.index_of(u), base.index_of(v)) else { continue };
        let (Some(sc), ) = (base.index_of(&fcut),) else { continue };
        let Some(paths) = disjoint_paths(&fg, &[su, sv], &[sc, contracted], 2, &[]) else {
            continue;
        };
        let decode = |p: &[usize]| -> (Vec<CubeVertex>, bool) {
            let hit = *p.last().unwrap() == contracted;
            (
                p.iter()
                    .filter(|&&i| i != contracted)
                    .map(|&i| base.vertex(i).clone())
                    .collect(),
                hit,
            )
        };
        let pu = paths.iter().find(|p| p.first() == Some(&su));
        let pv = paths.iter().find(|p| p.first() == Some(&sv));
        let (Some(pu), Some(pv)) = (pu, pv) else { continue };
        let (pu_l, pu_hit) = decode(pu);
        let (pv_l, pv_hit) = decode(pv);
        if pu_hit == pv_hit {
            continue;
        }
        let fv_view = gp.subview(&forest.blocks[fe.block].verts);
        let (f_path, c_path) = if pu_hit { (&pu_l, &pv_l) } else { (&pv_l, &pu_l) };
        let pre = f_path.last().unwrap();
        let pre_i = e_view.index_of(pre).unwrap();
        let w = e_view
            .neighbors(pre_i)
            .iter()
            .map(|&i| e_view.vertex(i).clone())
            .find(|l| interior_labels.contains(l))
            .ok_or_else(|| Error::ConstructionGap("no interior entry".into()))?;
        let inner = ab_path_inner(&fv_view, &w, &fcut, d_inner, mode, ctx)?;
        let segs = if pu_hit {
            let mut cp = c_path.clone();
            cp.reverse();
            vec![pu_l.clone(), inner, cp]
        } else {
            let mut inner_rev = inner;
            inner_rev.reverse();
            let mut pv_rev = pv_l.clone();
            pv_rev.reverse();
            vec![pu_l.clone(), inner_rev, pv_rev]
        };
        return chain_segments(g, &segs);
    }
    Err(Error::ConstructionGap(
        "no interior-to-interior assembly in the endblock".into(),
    ))
}

/// The main assembly: `a` to a far-endblock entry, through it, across to the
/// near endblock's interior path between two disjoint cross edges, and home.
#[allow(clippy::too_many_arguments)]
fn five_path_assembly(
    g: &SubgraphView,
    near: &SubgraphView,
    far: &SubgraphView,
    forest: &BlockForest,
    e: &Endblock,
    cross: &[(CubeVertex, CubeVertex)],
    na: &CubeVertex,
    nb: &CubeVertex,
    _d: u32,
    _k: u32,
    d_side: u32,
    d_inner: u32,
    mode: Mode,
    ctx: &mut Ctx,
) -> Result<Vec<CubeVertex>> {
    // two disjoint cross edges out of the endblock interior
    let mut pair: Option<((CubeVertex, CubeVertex), (CubeVertex, CubeVertex))> = None;
    'outer: for (i, e1) in cross.iter().enumerate() {
        for e2 in cross.iter().skip(i + 1) {
            if e1.0 != e2.0 && e1.1 != e2.1 {
                pair = Some((e1.clone(), e2.clone()));
                break 'outer;
            }
        }
    }
    let ((x1, y1), (x2, y2)) =
        pair.ok_or_else(|| Error::ConstructionGap("no two disjoint cross edges".into()))?;
    let far_forest = block_cut_tree(far);
    let nb_idx = far.index_of(nb).unwrap();
    let e_view = near.subview(&forest.blocks[e.block].verts);
    let e_cut = near.vertex(e.cutv.ok_or_else(|| {
        Error::ConstructionGap("five-path assembly needs a proper endblock".into())
    })?);
    // interiors of all near-side endblocks, for the Prop-style preference
    let mut near_interiors: HashSet<usize> = HashSet::new();
    for ne in forest.endblocks() {
        if ne.cutv.is_some() {
            near_interiors.extend(forest.interior(&ne));
        }
    }
    for f in far_forest.endblocks() {
        let Some(f_cut) = f.cutv else { continue };
        if far_forest.blocks[f.block].verts.contains(&nb_idx) {
            continue;
        }
        let f_interior: HashSet<usize> = far_forest.interior(&f).into_iter().collect();
        if [&y1, &y2]
            .iter()
            .any(|y| far.index_of(y).map_or(false, |i| f_interior.contains(&i)))
        {
            continue; // the interior pairing rule would apply instead
        }
        // P3, P5: disjoint far-side paths {y1, y2} -> {cutv(F), b} off int(F)
        let keep: Vec<usize> = (0..far.n()).filter(|i| !f_interior.contains(i)).collect();
        let fv = far.subview(&keep);
        let fg = flow_of_view(&fv);
        let f_cut_label = far.vertex(f_cut).clone();
        let srcs = [fv.index_of(&y1), fv.index_of(&y2)];
        let snks = [fv.index_of(&f_cut_label), fv.index_of(nb)];
        let (Some(s1), Some(s2), Some(t1), Some(t2)) = (srcs[0], srcs[1], snks[0], snks[1])
        else {
            continue;
        };
        let Some(paths) = disjoint_paths(&fg, &[s1, s2], &[t1, t2], 2, &[]) else {
            continue;
        };
        let lab = |p: &[usize]| -> Vec<CubeVertex> {
            p.iter().map(|&i| fv.vertex(i).clone()).collect()
        };
        let path_cut = paths.iter().find(|p| p.last() == Some(&t1)).map(|p| lab(p));
        let path_b = paths.iter().find(|p| p.last() == Some(&t2)).map(|p| lab(p));
        let (Some(path_cut), Some(path_b)) = (path_cut, path_b) else { continue };
        // pair the cross edges to the paths by their sources
        let pick_x = |y: &CubeVertex| -> CubeVertex {
            if *y == y1 {
                x1.clone()
            } else {
                x2.clone()
            }
        };
        let y_cut = path_cut.first().unwrap().clone();
        let y_b = path_b.first().unwrap().clone();
        let x_cut = pick_x(&y_cut);
        let x_b = pick_x(&y_b);
        if x_cut == x_b {
            continue;
        }
        // an interior vertex of F with a near-side neighbour off cutv(E),
        // preferably off every near endblock interior
        let f_cross = interior_cross_edges(g, far, near, &far_forest, &f);
        let mut ranked: Vec<(u8, CubeVertex, CubeVertex)> = Vec::new();
        for (u, v) in &f_cross {
            if v == e_cut || e_view.contains(v) {
                continue;
            }
            let in_interior = near
                .index_of(v)
                .map_or(true, |vi| near_interiors.contains(&vi));
            ranked.push((u8::from(in_interior), u.clone(), v.clone()));
        }
        ranked.sort();
        for (_, u, v) in ranked {
            // P1: a -> v in the near side avoiding the endblock E entirely
            let e_all: HashSet<CubeVertex> = forest.blocks[e.block]
                .verts
                .iter()
                .map(|&i| near.vertex(i).clone())
                .collect();
            let Ok(p1) = view_bfs(near, na, &v, &e_all) else { continue };
            // P2: u -> cutv(F) inside F
            let f_view = far.subview(&far_forest.blocks[f.block].verts);
            let Ok(p2) = ab_path_inner(&f_view, &u, &f_cut_label, d_side, mode, ctx) else {
                continue;
            };
            // P4: between the two cross exits inside E
            let Ok(p4) = endblock_interior_path(g, &e_view, e_cut, &x_cut, &x_b, d_inner, mode, ctx)
            else {
                continue;
            };
            let mut p3 = path_cut.clone();
            p3.reverse(); // cutv(F) -> y_cut
            let segs = vec![p1, p2, p3, p4, path_b.clone()];
            match chain_segments(g, &segs) {
                Ok(p) => return Ok(p),
                Err(err) => {
                    ctx.note(format!("five-path chain: {err}"));
                    continue;
                }
            }
        }
    }
    Err(Error::ConstructionGap("five-path assembly failed".into()))
}

fn finish_general(
    g: &SubgraphView,
    a: &CubeVertex,
    b: &CubeVertex,
    target: u64,
    path: Vec<CubeVertex>,
    _ctx: &mut Ctx,
) -> Result<Vec<CubeVertex>> {
    let checked = chain_segments(g, &[path])?;
    if checked.first() != Some(a) || checked.last() != Some(b) {
        return Err(Error::ConstructionGap("general path endpoints wrong".into()));
    }
    if (checked.len() as u64) < target + 1 {
        return Err(Error::ConstructionGap(format!(
            "general path length {} misses target {target}",
            checked.len() - 1
        )));
    }
    Ok(checked)
}
