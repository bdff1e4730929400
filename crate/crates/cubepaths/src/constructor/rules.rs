//! The ordered rule engine behind `find_ab_path` for the weak and tight
//! bounds once a split with both root degrees at least 2 is available.
//!
//! Each rule detects a configuration that the minimal-counterexample proofs
//! show cannot occur, and builds the long path those proofs would extract
//! from it. Rules fire in proof order, first match wins, every assembled path
//! is validated against the target before it is accepted, and a rule whose
//! assembly falls short simply yields to the next one.

use super::assemble::{chain_segments, mirror_segments, view_bfs};
use super::context::{
    build_interaction_digraph, component_vertices, cross_partner, extract_j, DigraphVariant,
    EndblockInfo, HArc, HNodeKind, InteractionDigraph, JExtraction, SideInfo, SplitContext,
};
use super::{ab_path_inner, target_bound, Ctx, Mode};
use crate::host::CubeVertex;
use crate::menger::{disjoint_paths, two_fan, FlowGraph};
use crate::split::SplitOutcome;
use crate::subgraph::SubgraphView;
use crate::{Error, Result};
use std::collections::HashSet;

/// Cap on candidate attempts per rule, to bound work on dense detections.
const CAND_CAP: usize = 16;

pub(crate) fn flow_of_view(view: &SubgraphView) -> FlowGraph {
    let mut fg = FlowGraph::new(view.n());
    for (i, j) in view.edges() {
        fg.add_edge(i, j);
    }
    fg
}

fn labels(view: &SubgraphView, idxs: &[usize]) -> Vec<CubeVertex> {
    idxs.iter().map(|&i| view.vertex(i).clone()).collect()
}

/// Base case `d = 2` for graphs above the oracle threshold: the longer of two
/// internally-disjoint paths, or a detour through a vertex off the common
/// 4-cycle.
pub(crate) fn base_d2(
    g: &SubgraphView,
    ai: usize,
    bi: usize,
    target: u64,
    ctx: &mut Ctx,
) -> Result<Vec<CubeVertex>> {
    let fg = flow_of_view(g);
    let (p, q) = two_fan(&fg, ai, bi)
        .ok_or_else(|| Error::Precondition("no two disjoint paths: not 2-connected".into()))?;
    let best = if p.len() >= q.len() { &p } else { &q };
    if best.len() as u64 - 1 >= target {
        ctx.rule("base-degree2");
        return Ok(labels(g, best));
    }
    let used: HashSet<usize> = p.iter().chain(q.iter()).copied().collect();
    for w in 0..g.n() {
        if used.contains(&w) {
            continue;
        }
        if let Some(paths) = disjoint_paths(&fg, &[w], &[ai, bi], 2, &[w]) {
            let to_a = paths.iter().find(|pp| pp.last() == Some(&ai));
            let to_b = paths.iter().find(|pp| pp.last() == Some(&bi));
            if let (Some(pa), Some(pb)) = (to_a, to_b) {
                let mut full: Vec<usize> = pa.iter().rev().copied().collect();
                full.extend(pb.iter().skip(1));
                if full.len() as u64 - 1 >= target {
                    let path = labels(g, &full);
                    chain_segments(g, &[path.clone()])?;
                    ctx.rule("base-degree2-detour");
                    return Ok(path);
                }
            }
        }
    }
    Err(Error::ConstructionGap(
        "degree-2 base case found no path meeting the bound".into(),
    ))
}

pub(crate) fn main_engine(
    g: &SubgraphView,
    a: &CubeVertex,
    b: &CubeVertex,
    d: u32,
    mode: Mode,
    split: SplitOutcome,
    ctx: &mut Ctx,
) -> Result<Vec<CubeVertex>> {
    let variant = match mode {
        Mode::Weak => DigraphVariant::Weak,
        Mode::Tight => DigraphVariant::Tight,
        Mode::General { .. } => unreachable!("general mode has its own engine"),
    };
    let sc = SplitContext::from_split(g, a, b, (a.clone(), b.clone()), split, d, mode, variant)?;
    let target = target_bound(g, a, b, d, mode);
    let mut eng = Engine {
        sc,
        ctx,
        target,
        d,
        mode,
    };
    eng.run()
}

pub(crate) struct Engine<'a, 'b> {
    pub sc: SplitContext,
    pub ctx: &'a mut Ctx<'b>,
    pub target: u64,
    pub d: u32,
    pub mode: Mode,
}

/// How a path piece enters or leaves a limb.
#[derive(Clone, Debug)]
enum LimbEnd {
    /// A chosen exit vertex of an endblock of the limb (endblock index is
    /// side-local).
    Exit { endblock: usize, x: CubeVertex },
    /// A plain vertex (joint, or a partner landed from the other side).
    At(CubeVertex),
}

impl<'a, 'b> Engine<'a, 'b> {
    pub(crate) fn run(&mut self) -> Result<Vec<CubeVertex>> {
        macro_rules! attempt {
            ($name:literal, $call:expr) => {
                match $call {
                    Ok(Some(path)) => return Ok(path),
                    Ok(None) => {}
                    Err(e) => self.ctx.note(format!(concat!($name, ": {}"), e)),
                }
            };
        }
        attempt!("endblock-single-exit", self.rule_single_exit());
        attempt!("side-2connected", self.rule_side_biconnected());
        attempt!("root-in-endblock-interior", self.rule_root_interior());
        attempt!("exit-partner-in-interior", self.rule_partner_interior());
        self.run_from_digraph()
    }

    /// The digraph-based stage alone (entered directly by the degree-1
    /// engine, whose preamble replaces the first four rules).
    pub(crate) fn run_from_digraph(&mut self) -> Result<Vec<CubeVertex>> {
        macro_rules! attempt {
            ($name:literal, $call:expr) => {
                match $call {
                    Ok(Some(path)) => return Ok(path),
                    Ok(None) => {}
                    Err(e) => self.ctx.note(format!(concat!($name, ": {}"), e)),
                }
            };
        }
        match build_interaction_digraph(&self.sc, self.sc.variant) {
            Ok(h) => {
                attempt!("h-path-3", self.rule_h_path3(&h));
                attempt!("h-two-side-component", self.rule_two_side_component(&h));
                attempt!("inductive-step", self.rule_inductive(&h));
            }
            Err(e) => self.ctx.note(format!("interaction digraph: {e}")),
        }
        Err(Error::ConstructionGap(
            "no construction rule produced a path meeting the bound".into(),
        ))
    }

    /// Validated assembly entry for sibling engines.
    pub(crate) fn finish_rule(
        &mut self,
        rule: &str,
        segments: Vec<Vec<CubeVertex>>,
    ) -> Result<Vec<CubeVertex>> {
        self.finish(rule, segments)
    }

    fn side(&self, s: usize) -> &SideInfo {
        &self.sc.sides[s]
    }

    fn endpoint(&self, s: usize) -> CubeVertex {
        self.sc.endpoint(s).clone()
    }

    fn recurse(
        &mut self,
        view: &SubgraphView,
        from: &CubeVertex,
        to: &CubeVertex,
        d: u32,
    ) -> Result<Vec<CubeVertex>> {
        debug_assert!(view.n() < self.sc.g.n());
        ab_path_inner(view, from, to, d, self.mode, self.ctx)
    }

    /// Chains segments, checks endpoints and the target, and records the
    /// rule id.
    fn finish(&mut self, rule: &str, segments: Vec<Vec<CubeVertex>>) -> Result<Vec<CubeVertex>> {
        let path = chain_segments(&self.sc.g, &segments)?;
        if path.first() != Some(&self.sc.a) || path.last() != Some(&self.sc.b) {
            return Err(Error::ConstructionGap("assembled path endpoints wrong".into()));
        }
        if (path.len() as u64) < self.target + 1 {
            return Err(Error::ConstructionGap(format!(
                "assembled path length {} misses target {}",
                path.len() - 1,
                self.target
            )));
        }
        self.ctx.rule(rule);
        Ok(path)
    }

    fn oriented(
        &mut self,
        rule: &str,
        s: usize,
        segments: Vec<Vec<CubeVertex>>,
    ) -> Result<Vec<CubeVertex>> {
        if s == 0 {
            self.finish(rule, segments)
        } else {
            self.finish(rule, mirror_segments(segments))
        }
    }

    /// The subview of an endblock of a side.
    fn eb_view(&self, s: usize, eb: &EndblockInfo) -> SubgraphView {
        self.side(s).view.subview(&eb.verts)
    }

    fn interior_labels(&self, s: usize, eb: &EndblockInfo) -> HashSet<CubeVertex> {
        eb.interior
            .iter()
            .map(|&v| self.side(s).view.vertex(v).clone())
            .collect()
    }

    // ----------------------------------------------------------- rule C1

    /// An endblock with exactly one exit vertex: its other interior vertices
    /// keep full degree, so recursion at the same `d` runs inside it between
    /// the cutvertex and the exit, and the result is threaded from one root
    /// to the other.
    fn rule_single_exit(&mut self) -> Result<Option<Vec<CubeVertex>>> {
        for s in 0..2 {
            if self.side(s).is_biconnected() {
                continue;
            }
            let endblocks = self.side(s).endblocks.clone();
            for eb in &endblocks {
                if eb.cutv.is_none() || eb.root_in_interior {
                    continue;
                }
                if eb.exits.is_empty() {
                    return Err(Error::Precondition(
                        "endblock with no cross edges inside a 2-connected graph".into(),
                    ));
                }
                if eb.exits.len() != 1 {
                    continue;
                }
                let exit = eb.exits[0].clone();
                let cutv = self.side(s).label(eb.cutv.unwrap()).clone();
                let e_view = self.eb_view(s, eb);
                let inner = self.recurse(&e_view, &cutv, &exit.x_label, self.d)?;
                let near = view_bfs(
                    &self.side(s).view,
                    &self.endpoint(s),
                    &cutv,
                    &self.interior_labels(s, eb),
                )?;
                let far = view_bfs(
                    &self.side(1 - s).view,
                    &exit.partner,
                    &self.endpoint(1 - s),
                    &HashSet::new(),
                )?;
                return self
                    .oriented("endblock-single-exit", s, vec![near, inner, far])
                    .map(Some);
            }
        }
        Ok(None)
    }

    // ----------------------------------------------------------- rule C2

    /// One or both sides 2-connected. Candidate constructions, each of which
    /// the proofs guarantee in its sub-case, tried in order with validation:
    /// same-degree recursion when the cross contact is a single vertex or
    /// pinned to a root partner, and paired (d-1)-recursions through a good
    /// exit otherwise, with parity-aware exit preference in tight mode.
    fn rule_side_biconnected(&mut self) -> Result<Option<Vec<CubeVertex>>> {
        let bi = [self.side(0).is_biconnected(), self.side(1).is_biconnected()];
        if !bi[0] && !bi[1] {
            return Ok(None);
        }
        // single-cross-vertex and root-partner contacts first (strongest)
        for s in 0..2 {
            if !bi[s] {
                continue;
            }
            let whole = self.side(s).endblocks[0].clone();
            let cross = whole.exits.clone();
            if cross.is_empty() {
                return Err(Error::Precondition(
                    "2-connected side with no cross edges".into(),
                ));
            }
            if cross.len() == 1 {
                let x = &cross[0];
                if x.x_label == self.endpoint(s) {
                    return Err(Error::Precondition(
                        "sole cross vertex is an endpoint: cutvertex in the input".into(),
                    ));
                }
                let inner =
                    self.recurse(&self.side(s).view.clone(), &self.endpoint(s), &x.x_label, self.d);
                if let Ok(inner) = inner {
                    let far = view_bfs(
                        &self.side(1 - s).view,
                        &x.partner,
                        &self.endpoint(1 - s),
                        &HashSet::new(),
                    )?;
                    match self.oriented("side-2connected", s, vec![inner, far]) {
                        Ok(p) => return Ok(Some(p)),
                        Err(e) => self.ctx.note(format!("single-cross: {e}")),
                    }
                }
            }
            // all cross vertices pinned to {endpoint, partner-of-other-root}:
            // enter through the other root's partner edge at the same degree
            let other_root = self.endpoint(1 - s);
            if let Some(x) = cross
                .iter()
                .find(|x| x.partner == other_root && x.x_label != self.endpoint(s))
            {
                let inner = self.recurse(
                    &self.side(s).view.clone(),
                    &x.x_label,
                    &self.endpoint(s),
                    self.d,
                );
                if let Ok(inner) = inner {
                    // path: other_root -edge- x ...inner... endpoint(s)
                    let segs = vec![vec![other_root.clone()], inner];
                    match self.oriented("side-2connected", 1 - s, segs) {
                        Ok(p) => return Ok(Some(p)),
                        Err(e) => self.ctx.note(format!("root-partner entry: {e}")),
                    }
                }
            }
        }
        if bi[0] && bi[1] {
            return self.c2_both_biconnected();
        }
        let s = if bi[0] { 0 } else { 1 };
        self.c2_one_biconnected(s)
    }

    fn side_is_cube_dminus1(&self, s: usize) -> bool {
        self.side(s).endblocks.first().map_or(false, |e| e.is_cube_dminus1)
    }

    fn c2_both_biconnected(&mut self) -> Result<Option<Vec<CubeVertex>>> {
        let host = self.sc.g.host().clone();
        for (s, t) in [(1usize, 0usize), (0, 1)] {
            // exits of side s threaded to a (d-1)-recursion on each side
            let whole = self.side(s).endblocks[0].clone();
            let endpoint_s = self.endpoint(s);
            let endpoint_t = self.endpoint(t);
            let mut good: Vec<_> = whole
                .exits
                .iter()
                .filter(|x| x.x_label != endpoint_s && x.partner != endpoint_t)
                .cloned()
                .collect();
            if self.mode == Mode::Tight {
                let cube_s = self.side_is_cube_dminus1(s);
                let cube_t = self.side_is_cube_dminus1(t);
                if cube_t && !cube_s {
                    // the cube side needs an even-distance exit to gain a
                    // parity step on its side of the join
                    good.sort_by_key(|x| host.hamming(&x.x_label, &endpoint_s) % 2);
                } else if cube_s {
                    // odd-distance exits give the full spanning path
                    good.sort_by_key(|x| 1 - host.hamming(&x.x_label, &endpoint_s) % 2);
                }
            }
            for x in good.into_iter().take(CAND_CAP) {
                let ps = self.recurse(
                    &self.side(s).view.clone(),
                    &x.x_label,
                    &endpoint_s,
                    self.d - 1,
                );
                let Ok(ps) = ps else { continue };
                let pt = self.recurse(
                    &self.side(t).view.clone(),
                    &endpoint_t,
                    &x.partner,
                    self.d - 1,
                );
                let Ok(pt) = pt else { continue };
                // endpoint_t ... partner -edge- x ... endpoint_s
                let segs = vec![pt, ps];
                match self.oriented("side-2connected", t, segs) {
                    Ok(p) => return Ok(Some(p)),
                    Err(e) => self.ctx.note(format!("both-2connected: {e}")),
                }
            }
        }
        Ok(None)
    }

    fn c2_one_biconnected(&mut self, s: usize) -> Result<Option<Vec<CubeVertex>>> {
        let t = 1 - s;
        let host = self.sc.g.host().clone();
        let endpoint_s = self.endpoint(s);
        let endpoint_t = self.endpoint(t);
        let endblocks = self.side(t).endblocks.clone();
        let t_root_idx = self.side(t).root_idx;
        // candidate (endblock, exit) pairs in tight-preferred order
        let mut cands: Vec<(usize, super::context::ExitInfo)> = Vec::new();
        let mut push_exits = |cands: &mut Vec<_>, ei: usize, eb: &EndblockInfo, elig: bool| {
            for x in &eb.exits {
                if x.partner != endpoint_s && (!elig || x.eligible) {
                    cands.push((ei, x.clone()));
                }
            }
        };
        if self.mode == Mode::Tight {
            // endblocks avoiding the root entirely admit an extra edge
            for (ei, eb) in endblocks.iter().enumerate() {
                if eb.cutv.is_some() && !eb.verts.contains(&t_root_idx) {
                    push_exits(&mut cands, ei, eb, true);
                }
            }
            if self.side_is_cube_dminus1(s) {
                // hunt even-distance exits in non-cube endblocks for parity
                for (ei, eb) in endblocks.iter().enumerate() {
                    if eb.cutv.is_some() && !eb.is_cube_dminus1 && !eb.root_in_interior {
                        for x in &eb.exits {
                            if x.partner != endpoint_s
                                && host.hamming(&x.x_label, &endpoint_t) % 2 == 0
                            {
                                cands.push((ei, x.clone()));
                            }
                        }
                    }
                }
            }
            for (ei, eb) in endblocks.iter().enumerate() {
                if eb.cutv.is_some() && !eb.root_in_interior {
                    push_exits(&mut cands, ei, eb, true);
                }
            }
        }
        for (ei, eb) in endblocks.iter().enumerate() {
            if eb.cutv.is_some() && !eb.root_in_interior {
                push_exits(&mut cands, ei, eb, false);
            }
        }
        for (ei, exit) in cands.into_iter().take(2 * CAND_CAP) {
            let eb = endblocks[ei].clone();
            let cutv = self.side(t).label(eb.cutv.unwrap()).clone();
            let e_view = self.eb_view(t, &eb);
            // recursion target inside the endblock: cutvertex to exit unless
            // the root is the cutvertex, in which case straight to the root
            let pe = self.recurse(&e_view, &exit.x_label, &cutv, self.d - 1);
            let Ok(pe) = pe else {
                self.ctx.note("one-2connected: endblock recursion failed");
                continue;
            };
            let ps = self.recurse(
                &self.side(s).view.clone(),
                &endpoint_s,
                &exit.partner,
                self.d - 1,
            );
            let Ok(ps) = ps else { continue };
            let pt = match view_bfs(
                &self.side(t).view,
                &cutv,
                &endpoint_t,
                &self.interior_labels(t, &eb),
            ) {
                Ok(p) => p,
                Err(e) => {
                    self.ctx.note(format!("one-2connected tail: {e}"));
                    continue;
                }
            };
            // endpoint_s ... partner -edge- x ...pe... cutv ...pt... endpoint_t
            let segs = vec![ps, pe, pt];
            match self.oriented("side-2connected", s, segs) {
                Ok(p) => return Ok(Some(p)),
                Err(e) => self.ctx.note(format!("one-2connected: {e}")),
            }
        }
        Ok(None)
    }

    // ----------------------------------------------------------- rule C3

    /// The root sits in the interior of an endblock: recurse inside it to the
    /// cutvertex, then thread a second endblock's exit across the split.
    fn rule_root_interior(&mut self) -> Result<Option<Vec<CubeVertex>>> {
        for s in 0..2 {
            if self.side(s).is_biconnected() {
                continue;
            }
            let endblocks = self.side(s).endblocks.clone();
            let Some(home) = endblocks.iter().find(|e| e.root_in_interior).cloned() else {
                continue;
            };
            let endpoint_s = self.endpoint(s);
            let endpoint_t = self.endpoint(1 - s);
            let cutv_home = self.side(s).label(home.cutv.unwrap()).clone();
            let home_view = self.eb_view(s, &home);
            let p1 = match self.recurse(&home_view, &endpoint_s, &cutv_home, self.d - 1) {
                Ok(p) => p,
                Err(e) => {
                    self.ctx.note(format!("root-interior home recursion: {e}"));
                    continue;
                }
            };
            let mut cands: Vec<(usize, super::context::ExitInfo)> = Vec::new();
            for (ei, eb) in endblocks.iter().enumerate() {
                if eb.block == home.block || eb.cutv.is_none() || eb.root_in_interior {
                    continue;
                }
                let mut exits: Vec<_> = eb
                    .exits
                    .iter()
                    .filter(|x| x.partner != endpoint_t)
                    .cloned()
                    .collect();
                if self.mode == Mode::Tight {
                    exits.sort_by_key(|x| !x.eligible);
                }
                for x in exits {
                    cands.push((ei, x));
                }
            }
            for (ei, exit) in cands.into_iter().take(CAND_CAP) {
                let eb = endblocks[ei].clone();
                let cutv2 = self.side(s).label(eb.cutv.unwrap()).clone();
                let e2 = self.eb_view(s, &eb);
                let p3 = match self.recurse(&e2, &cutv2, &exit.x_label, self.d - 1) {
                    Ok(p) => p,
                    Err(_) => continue,
                };
                let mut avoid = self.interior_labels(s, &home);
                avoid.extend(self.interior_labels(s, &eb));
                let p2 = match view_bfs(&self.side(s).view, &cutv_home, &cutv2, &avoid) {
                    Ok(p) => p,
                    Err(_) => continue,
                };
                let p4 = match view_bfs(
                    &self.side(1 - s).view,
                    &exit.partner,
                    &endpoint_t,
                    &HashSet::new(),
                ) {
                    Ok(p) => p,
                    Err(_) => continue,
                };
                let segs = vec![p1.clone(), p2, p3, p4];
                match self.oriented("root-in-endblock-interior", s, segs) {
                    Ok(p) => return Ok(Some(p)),
                    Err(e) => self.ctx.note(format!("root-interior: {e}")),
                }
            }
        }
        Ok(None)
    }

    // ----------------------------------------------------------- rule C4

    /// A cross edge runs between two endblock interiors: two endblock
    /// recursions join through it. In tight mode this covers both the paired
    /// eligible exits and the variant where a root is not a cutvertex.
    fn rule_partner_interior(&mut self) -> Result<Option<Vec<CubeVertex>>> {
        let endpoint_a = self.endpoint(0);
        let endpoint_b = self.endpoint(1);
        let ebs0 = self.side(0).endblocks.clone();
        let ebs1 = self.side(1).endblocks.clone();
        let mut hits: Vec<(usize, super::context::ExitInfo, usize, bool)> = Vec::new();
        for (ei, eb) in ebs0.iter().enumerate() {
            if eb.cutv.is_none() || eb.root_in_interior {
                continue;
            }
            for x in &eb.exits {
                for (fi, fb) in ebs1.iter().enumerate() {
                    if fb.cutv.is_none() || fb.root_in_interior {
                        continue;
                    }
                    let p_idx = self.side(1).view.index_of(&x.partner);
                    if let Some(pi) = p_idx {
                        if fb.interior.contains(&pi) {
                            let partner_eligible = fb
                                .exits
                                .iter()
                                .any(|y| y.x_label == x.partner && y.eligible);
                            hits.push((ei, x.clone(), fi, partner_eligible));
                        }
                    }
                }
            }
        }
        if hits.is_empty() {
            return Ok(None);
        }
        if self.mode == Mode::Tight {
            // paired eligible exits first, then any eligible source
            hits.sort_by_key(|(_, x, _, pe)| (!(x.eligible && *pe), !x.eligible));
            let noncut_root = !self.side(0).limbs.root_is_cutvertex
                || !self.side(1).limbs.root_is_cutvertex;
            if !noncut_root {
                // keep only paired-eligible hits; other shapes belong to the
                // digraph stage when both roots are cutvertices
                hits.retain(|(_, x, _, pe)| x.eligible && *pe);
            }
        }
        for (ei, exit, fi, _) in hits.into_iter().take(CAND_CAP) {
            let eb = ebs0[ei].clone();
            let fb = ebs1[fi].clone();
            let cutv_e = self.side(0).label(eb.cutv.unwrap()).clone();
            let cutv_f = self.side(1).label(fb.cutv.unwrap()).clone();
            let pe = match self.recurse(&self.eb_view(0, &eb), &cutv_e, &exit.x_label, self.d - 1)
            {
                Ok(p) => p,
                Err(_) => continue,
            };
            let pf = match self.recurse(&self.eb_view(1, &fb), &exit.partner, &cutv_f, self.d - 1)
            {
                Ok(p) => p,
                Err(_) => continue,
            };
            let p1 = match view_bfs(
                &self.side(0).view,
                &endpoint_a,
                &cutv_e,
                &self.interior_labels(0, &eb),
            ) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let p4 = match view_bfs(
                &self.side(1).view,
                &cutv_f,
                &endpoint_b,
                &self.interior_labels(1, &fb),
            ) {
                Ok(p) => p,
                Err(_) => continue,
            };
            match self.finish("exit-partner-in-interior", vec![p1, pe, pf, p4]) {
                Ok(p) => return Ok(Some(p)),
                Err(e) => self.ctx.note(format!("partner-interior: {e}")),
            }
        }
        Ok(None)
    }

    // ------------------------------------------------------ limb plumbing

    /// Path across one limb between two of its access points. Exit ends run
    /// through their endblock with a full recursion; plain ends connect by
    /// BFS. The side's root never appears as an interior vertex.
    fn limb_path(
        &mut self,
        s: usize,
        limb: usize,
        from: &LimbEnd,
        to: &LimbEnd,
    ) -> Result<Vec<CubeVertex>> {
        let side = self.side(s);
        let limb_verts = side.limbs.limbs[limb].verts.clone();
        let limb_view = side.view.subview(&limb_verts);
        let root_label = side.view.vertex(side.root_idx).clone();
        let endblocks = side.endblocks.clone();
        let end_label = |e: &LimbEnd| match e {
            LimbEnd::Exit { x, .. } => x.clone(),
            LimbEnd::At(v) => v.clone(),
        };
        let from_l = end_label(from);
        let to_l = end_label(to);
        if from_l == to_l {
            return Ok(vec![from_l]);
        }
        let mut avoid: HashSet<CubeVertex> = HashSet::new();
        if root_label != from_l && root_label != to_l {
            avoid.insert(root_label.clone());
        }
        // interior of an exit's endblock is consumed by its recursion; a
        // plain end sitting inside it forces a short direct connection
        let prep = |eng: &mut Self,
                    end: &LimbEnd,
                    other_label: &CubeVertex|
         -> Result<(Vec<CubeVertex>, Option<CubeVertex>, HashSet<CubeVertex>)> {
            match end {
                LimbEnd::At(v) => Ok((vec![v.clone()], None, HashSet::new())),
                LimbEnd::Exit { endblock, x } => {
                    let eb = &endblocks[*endblock];
                    let interior = eng.interior_labels(s, eb);
                    if interior.contains(other_label) {
                        // blocked: no room for the full endblock path
                        return Ok((vec![x.clone()], None, HashSet::new()));
                    }
                    let cutv = eng.side(s).label(eb.cutv.ok_or_else(|| {
                        Error::ConstructionGap("whole-side endblock in a limb".into())
                    })?);
                    let cutv = cutv.clone();
                    let inner = eng.recurse(&eng.eb_view(s, eb), x, &cutv, eng.d - 1)?;
                    let mut used: HashSet<CubeVertex> = interior;
                    used.remove(&cutv);
                    Ok((inner, Some(cutv), used))
                }
            }
        };
        let (head, _head_join, head_avoid) = prep(self, from, &to_l)?;
        let (tail_rev, _tail_join, tail_avoid) = prep(self, to, &from_l)?;
        let mut mid_avoid = avoid;
        mid_avoid.extend(head_avoid);
        mid_avoid.extend(tail_avoid);
        for v in head.iter().chain(tail_rev.iter()) {
            if v != head.last().unwrap() && v != tail_rev.last().unwrap() {
                mid_avoid.insert(v.clone());
            }
        }
        let mid = view_bfs(
            &limb_view,
            head.last().unwrap(),
            tail_rev.last().unwrap(),
            &mid_avoid,
        )?;
        let mut tail = tail_rev;
        tail.reverse();
        chain_segments(&self.sc.g, &[head, mid, tail])
    }

    /// The Body of a side as a subview.
    fn body_view(&self, s: usize) -> SubgraphView {
        self.side(s).view.subview(&self.side(s).limbs.body)
    }

    /// Two vertex-disjoint paths in the Body between the given endpoint sets
    /// (free pairing), avoiding the given labels.
    fn body_disjoint_pair(
        &self,
        s: usize,
        sources: [&CubeVertex; 2],
        sinks: [&CubeVertex; 2],
        avoid: &HashSet<CubeVertex>,
    ) -> Result<(Vec<CubeVertex>, Vec<CubeVertex>)> {
        let body = self.body_view(s);
        let keep: Vec<usize> = (0..body.n())
            .filter(|&i| {
                let l = body.vertex(i);
                !avoid.contains(l)
                    || sources.contains(&l)
                    || sinks.contains(&l)
            })
            .collect();
        let bv = body.subview(&keep);
        let fg = flow_of_view(&bv);
        let src: Vec<usize> = sources
            .iter()
            .map(|v| {
                bv.index_of(v)
                    .ok_or_else(|| Error::ConstructionGap(format!("{v} not in body")))
            })
            .collect::<Result<_>>()?;
        let snk: Vec<usize> = sinks
            .iter()
            .map(|v| {
                bv.index_of(v)
                    .ok_or_else(|| Error::ConstructionGap(format!("{v} not in body")))
            })
            .collect::<Result<_>>()?;
        let paths = disjoint_paths(&fg, &src, &snk, 2, &[])
            .ok_or_else(|| Error::ConstructionGap("no two disjoint body paths".into()))?;
        let mut it = paths.into_iter();
        let p1 = it.next().unwrap();
        let p2 = it.next().unwrap();
        Ok((labels(&bv, &p1), labels(&bv, &p2)))
    }

    // ----------------------------------------------------------- rule C5

    /// An undirected path of three arcs in the interaction digraph: thread
    /// the endblock paths its arcs carry into one long path, gluing through
    /// the Bodies by 2-connectivity.
    fn rule_h_path3(&mut self, h: &InteractionDigraph) -> Result<Option<Vec<CubeVertex>>> {
        // adjacency between nodes (undirected)
        let n = h.nodes.len();
        let mut adj: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n];
        for arc in &h.arcs {
            adj[arc.from].insert(arc.to);
            adj[arc.to].insert(arc.from);
        }
        let mut tried = 0usize;
        for n0 in 0..n {
            for &n1 in adj[n0].clone().iter() {
                for &n2 in adj[n1].clone().iter() {
                    if n2 == n0 {
                        continue;
                    }
                    for &n3 in adj[n2].clone().iter() {
                        if n3 == n1 || n3 == n0 {
                            continue;
                        }
                        let nodes = [n0, n1, n2, n3];
                        let combos = [
                            h.arcs_between(n0, n1),
                            h.arcs_between(n1, n2),
                            h.arcs_between(n2, n3),
                        ];
                        for a0 in &combos[0] {
                            for a1 in &combos[1] {
                                for a2 in &combos[2] {
                                    if tried > 3 * CAND_CAP {
                                        return Ok(None);
                                    }
                                    tried += 1;
                                    match self.build_h3(h, nodes, [a0, a1, a2]) {
                                        Ok(p) => return Ok(Some(p)),
                                        Err(e) => {
                                            self.ctx.note(format!("h-path-3 candidate: {e}"))
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    fn build_h3(
        &mut self,
        h: &InteractionDigraph,
        nodes: [usize; 4],
        arcs: [&HArc; 3],
    ) -> Result<Vec<CubeVertex>> {
        // entry/exit labels per position
        let mut a_pt: [Option<LimbEnd>; 4] = [None, None, None, None];
        let mut b_pt: [Option<LimbEnd>; 4] = [None, None, None, None];
        for (i, arc) in arcs.iter().enumerate() {
            if arc.from == nodes[i] {
                b_pt[i] = Some(LimbEnd::Exit {
                    endblock: arc.endblock,
                    x: arc.exit.clone(),
                });
                a_pt[i + 1] = Some(LimbEnd::At(arc.partner.clone()));
            } else {
                b_pt[i] = Some(LimbEnd::At(arc.partner.clone()));
                a_pt[i + 1] = Some(LimbEnd::Exit {
                    endblock: arc.endblock,
                    x: arc.exit.clone(),
                });
            }
        }
        let joint_of = |eng: &Self, ni: usize| -> Option<CubeVertex> {
            let node = &h.nodes[ni];
            match node.kind {
                HNodeKind::Limb(li) => {
                    let s = &eng.side(node.side);
                    Some(s.view.vertex(s.limbs.limbs[li].joint).clone())
                }
                HNodeKind::Core => None,
            }
        };
        let end_label = |e: &LimbEnd| match e {
            LimbEnd::Exit { x, .. } => x.clone(),
            LimbEnd::At(v) => v.clone(),
        };
        a_pt[0] = Some(match joint_of(self, nodes[0]) {
            Some(j) => LimbEnd::At(j),
            None => LimbEnd::At(end_label(b_pt[0].as_ref().unwrap())),
        });
        b_pt[3] = Some(match joint_of(self, nodes[3]) {
            Some(j) => LimbEnd::At(j),
            None => LimbEnd::At(end_label(a_pt[3].as_ref().unwrap())),
        });
        // per-node pieces
        let mut pieces: Vec<Vec<CubeVertex>> = Vec::new();
        let mut core_interior: Option<usize> = None;
        for i in 0..4 {
            let node = &h.nodes[nodes[i]];
            let from = a_pt[i].clone().unwrap();
            let to = b_pt[i].clone().unwrap();
            match node.kind {
                HNodeKind::Limb(li) => {
                    pieces.push(self.limb_path(node.side, li, &from, &to)?);
                }
                HNodeKind::Core => {
                    let (fl, tl) = (end_label(&from), end_label(&to));
                    if fl == tl {
                        pieces.push(vec![fl]);
                    } else if i == 1 || i == 2 {
                        core_interior = Some(i);
                        pieces.push(Vec::new()); // resolved through the Body
                    } else {
                        pieces.push(vec![fl]);
                    }
                }
            }
        }
        match core_interior {
            None => {
                let mid = chain_segments(&self.sc.g, &pieces)?;
                let side_start = h.nodes[nodes[0]].side;
                self.extend_to_roots(side_start, mid)
            }
            Some(p) => self.build_h3_core_interior(h, nodes, p, &a_pt, &b_pt, pieces),
        }
    }

    /// Extends an assembled chain from its two attachment points to the
    /// roots, through each side, avoiding the chain's other vertices, then
    /// orients and validates.
    fn extend_to_roots(&mut self, side_start: usize, mid: Vec<CubeVertex>) -> Result<Vec<CubeVertex>> {
        let start = mid
            .first()
            .ok_or_else(|| Error::ConstructionGap("empty chain".into()))?
            .clone();
        let end = mid.last().unwrap().clone();
        let used: HashSet<CubeVertex> = mid.iter().cloned().collect();
        let seg_a = self.root_extension(side_start, &start, &used)?;
        let mut used_b = used;
        used_b.extend(seg_a.iter().cloned());
        let mut seg_b = self.root_extension(1 - side_start, &end, &used_b)?;
        seg_b.reverse();
        let full = chain_segments(&self.sc.g, &[seg_a, mid, seg_b])?;
        self.finish_h3(full)
    }

    /// Path from the side's endpoint to `attach`, avoiding `used` except at
    /// the attachment. Runs through the whole side (Body plus limbs) so
    /// joints reachable only around other limbs still connect.
    fn root_extension(
        &mut self,
        s: usize,
        attach: &CubeVertex,
        used: &HashSet<CubeVertex>,
    ) -> Result<Vec<CubeVertex>> {
        let endpoint = self.endpoint(s);
        if &endpoint == attach {
            return Ok(vec![endpoint]);
        }
        let mut avoid = used.clone();
        avoid.remove(attach);
        avoid.remove(&endpoint);
        view_bfs(&self.side(s).view, &endpoint, attach, &avoid)
    }

    /// Interior core node: the piece chain breaks at the core position and the
    /// two fragments are re-joined through that side's Body. When the core
    /// follows the fragment holding the same side's end limb (position 2) the
    /// two Body paths pair freely; when it precedes it (position 1) the
    /// pairing is pinned and both greedy orders are tried.
    fn build_h3_core_interior(
        &mut self,
        h: &InteractionDigraph,
        nodes: [usize; 4],
        p: usize,
        a_pt: &[Option<LimbEnd>; 4],
        b_pt: &[Option<LimbEnd>; 4],
        pieces: Vec<Vec<CubeVertex>>,
    ) -> Result<Vec<CubeVertex>> {
        let end_label = |e: &LimbEnd| match e {
            LimbEnd::Exit { x, .. } => x.clone(),
            LimbEnd::At(v) => v.clone(),
        };
        let side_p = h.nodes[nodes[p]].side;
        let entry = end_label(a_pt[p].as_ref().unwrap());
        let exit = end_label(b_pt[p].as_ref().unwrap());
        let left: Vec<Vec<CubeVertex>> = pieces[..p].to_vec();
        let right: Vec<Vec<CubeVertex>> = pieces[p + 1..].to_vec();
        let left_chain = chain_segments(&self.sc.g, &left)?;
        let right_chain = chain_segments(&self.sc.g, &right)?;
        let mut used: HashSet<CubeVertex> = left_chain.iter().cloned().collect();
        used.extend(right_chain.iter().cloned());
        let root_p = self.endpoint(side_p);
        if p == 2 {
            // left chain starts at the joint of the side_p end limb
            let start_attach = left_chain.first().unwrap().clone();
            let (m1, m2) = self.body_disjoint_pair(
                side_p,
                [&start_attach, &entry],
                [&root_p, &exit],
                &used,
            )?;
            let (to_root, mut to_exit) =
                if m1.first() == Some(&root_p) || m1.last() == Some(&root_p) {
                    (m1, m2)
                } else {
                    (m2, m1)
                };
            let mut seg_root = to_root;
            if seg_root.first() != Some(&root_p) {
                seg_root.reverse();
            }
            let mid = if seg_root.last() == Some(&start_attach) {
                // root .. start_attach, left chain forward to the core entry
                left_chain
            } else {
                // root .. entry: cross the hop edge back and walk the chain
                // in reverse to the start joint
                let mut rev = left_chain;
                rev.reverse();
                rev
            };
            // to_exit joins the remaining attachment to the core exit
            if to_exit.last() == Some(&exit) {
                // leave orientation: attachment .. exit
            } else {
                to_exit.reverse();
            }
            let full = chain_segments(&self.sc.g, &[seg_root, mid, to_exit, right_chain])?;
            let full = {
                let end = full.last().unwrap().clone();
                let used: HashSet<CubeVertex> = full.iter().cloned().collect();
                let mut ext = self.root_extension(1 - side_p, &end, &used)?;
                ext.reverse();
                chain_segments(&self.sc.g, &[full, ext])?
            };
            return self.finish_h3(full);
        }
        // p == 1: pin entry->exit inside the Body and close the right chain's
        // joint to the root, trying both greedy orders
        let far_attach = right_chain.last().unwrap().clone();
        let body = self.body_view(side_p);
        let mut avoid = used.clone();
        for v in [&entry, &exit, &far_attach, &root_p] {
            avoid.remove(v);
        }
        let plan = |eng: &Self, first_link: bool| -> Result<(Vec<CubeVertex>, Vec<CubeVertex>)> {
            let _ = eng;
            if first_link {
                let link = view_bfs(&body, &entry, &exit, &avoid)?;
                let mut avoid2 = avoid.clone();
                avoid2.extend(link.iter().cloned());
                avoid2.remove(&far_attach);
                avoid2.remove(&root_p);
                let closing = view_bfs(&body, &far_attach, &root_p, &avoid2)?;
                Ok((link, closing))
            } else {
                let closing = view_bfs(&body, &far_attach, &root_p, &avoid)?;
                let mut avoid2 = avoid.clone();
                avoid2.extend(closing.iter().cloned());
                avoid2.remove(&entry);
                avoid2.remove(&exit);
                let link = view_bfs(&body, &entry, &exit, &avoid2)?;
                Ok((link, closing))
            }
        };
        let (link, closing) = plan(self, true).or_else(|_| plan(self, false))?;
        let full = chain_segments(&self.sc.g, &[left_chain, link, right_chain, closing])?;
        // extend the free start (the other side's end limb joint) to its root
        let start = full.first().unwrap().clone();
        let used: HashSet<CubeVertex> = full.iter().cloned().collect();
        let ext = self.root_extension(1 - side_p, &start, &used)?;
        let full = chain_segments(&self.sc.g, &[ext, full])?;
        self.finish_h3(full)
    }

    fn finish_h3(&mut self, full: Vec<CubeVertex>) -> Result<Vec<CubeVertex>> {
        let segs = if full.first() == Some(&self.sc.a) {
            vec![full]
        } else {
            mirror_segments(vec![full])
        };
        self.finish("h-path-3", segs)
    }

    // ----------------------------------------------------------- rule C6

    /// A digraph component with two limbs of the same root whose Body is
    /// larger than the root alone: two spokes through the component plus one
    /// through another component, glued in both Bodies.
    fn rule_two_side_component(
        &mut self,
        h: &InteractionDigraph,
    ) -> Result<Option<Vec<CubeVertex>>> {
        let comps = h.components();
        for s in 0..2 {
            if self.side(s).limbs.body.len() <= 1 {
                continue;
            }
            for comp in &comps {
                let mine: Vec<usize> = comp
                    .iter()
                    .copied()
                    .filter(|&ni| {
                        h.nodes[ni].side == s && matches!(h.nodes[ni].kind, HNodeKind::Limb(_))
                    })
                    .collect();
                if mine.len() < 2 {
                    continue;
                }
                match self.build_two_side(h, &comps, comp, s, &mine) {
                    Ok(p) => return Ok(Some(p)),
                    Err(e) => self.ctx.note(format!("two-side component: {e}")),
                }
            }
        }
        Ok(None)
    }

    fn node_joint(&self, h: &InteractionDigraph, ni: usize) -> Result<CubeVertex> {
        match h.nodes[ni].kind {
            HNodeKind::Limb(li) => {
                let s = self.side(h.nodes[ni].side);
                Ok(s.view.vertex(s.limbs.limbs[li].joint).clone())
            }
            HNodeKind::Core => Err(Error::ConstructionGap("core node has no joint".into())),
        }
    }

    fn arc_from(&self, h: &InteractionDigraph, ni: usize) -> Result<HArc> {
        h.arcs
            .iter()
            .find(|a| a.from == ni)
            .cloned()
            .ok_or_else(|| Error::ConstructionGap("limb node without an out-arc".into()))
    }

    /// Spoke from a limb node: joint, through an endblock recursion to its
    /// chosen exit, across the partner edge; returns the path and the landing
    /// node.
    fn spoke(&mut self, h: &InteractionDigraph, ni: usize) -> Result<(Vec<CubeVertex>, HArc)> {
        let arc = self.arc_from(h, ni)?;
        let node = &h.nodes[ni];
        let HNodeKind::Limb(li) = node.kind else {
            return Err(Error::ConstructionGap("spoke from a core node".into()));
        };
        let joint = self.node_joint(h, ni)?;
        let path = self.limb_path(
            node.side,
            li,
            &LimbEnd::At(joint),
            &LimbEnd::Exit {
                endblock: arc.endblock,
                x: arc.exit.clone(),
            },
        )?;
        Ok((path, arc))
    }

    fn build_two_side(
        &mut self,
        h: &InteractionDigraph,
        comps: &[Vec<usize>],
        comp: &[usize],
        s: usize,
        mine: &[usize],
    ) -> Result<Vec<CubeVertex>> {
        let t = 1 - s;
        let root_s = self.endpoint(s);
        let root_t = self.endpoint(t);
        let (v1, v2) = (mine[0], mine[1]);
        let (sp1, arc1) = self.spoke(h, v1)?;
        let (sp2, arc2) = self.spoke(h, v2)?;
        let j1 = self.node_joint(h, v1)?;
        let j2 = self.node_joint(h, v2)?;
        // third spoke from a different component: a limb of the t-root
        let mut third: Option<(Vec<CubeVertex>, CubeVertex, CubeVertex)> = None;
        for comp2 in comps {
            if comp2 == comp {
                continue;
            }
            for &ni in comp2 {
                if h.nodes[ni].side != t || !matches!(h.nodes[ni].kind, HNodeKind::Limb(_)) {
                    continue;
                }
                let Ok((sp3, arc3)) = self.spoke(h, ni) else { continue };
                // landing side: extend to the landing node's joint or stay at
                // the partner if it landed in the core
                let (alpha, tail) = match h.nodes[arc3.to].kind {
                    HNodeKind::Core => (arc3.partner.clone(), vec![arc3.partner.clone()]),
                    HNodeKind::Limb(li) => {
                        let target = {
                            let sd = self.side(s);
                            sd.view.vertex(sd.limbs.limbs[li].joint).clone()
                        };
                        let tl = self.limb_path(
                            s,
                            li,
                            &LimbEnd::At(arc3.partner.clone()),
                            &LimbEnd::At(target.clone()),
                        )?;
                        (target, tl)
                    }
                };
                let beta = self.node_joint(h, ni)?;
                let spoke3 = chain_segments(&self.sc.g, &[sp3, tail])?;
                // spoke3 runs joint(L) = beta -> .. -> alpha in side s
                third = Some((spoke3, alpha, beta));
                break;
            }
            if third.is_some() {
                break;
            }
        }
        let (spoke3, alpha3, beta3) =
            third.ok_or_else(|| Error::ConstructionGap("no third component spoke".into()))?;
        // middle connection between the two spokes on side t
        let target_node = &h.nodes[arc1.to];
        let mut used: HashSet<CubeVertex> = sp1.iter().cloned().collect();
        used.extend(sp2.iter().cloned());
        used.extend(spoke3.iter().cloned());
        let middle = match target_node.kind {
            HNodeKind::Core => {
                // both partners sit in Body(t): connect them there
                let body = self.body_view(t);
                let mut avoid = used.clone();
                avoid.remove(&arc1.partner);
                avoid.remove(&arc2.partner);
                view_bfs(&body, &arc1.partner, &arc2.partner, &avoid)?
            }
            HNodeKind::Limb(li) => {
                if arc1.to != arc2.to {
                    return Err(Error::ConstructionGap(
                        "component spokes land in different nodes".into(),
                    ));
                }
                self.limb_path(
                    t,
                    li,
                    &LimbEnd::At(arc1.partner.clone()),
                    &LimbEnd::At(arc2.partner.clone()),
                )?
            }
        };
        // chain joint(V1) .. x1 - p1 .. p2 - x2 .. joint(V2)
        let mut sp2_rev = sp2.clone();
        sp2_rev.reverse();
        let chain = chain_segments(&self.sc.g, &[sp1.clone(), middle, sp2_rev])?;
        // glue in Body(s): two disjoint paths {root_s, alpha3} -> {j1, j2}
        let mut body_used: HashSet<CubeVertex> = chain.iter().cloned().collect();
        body_used.extend(spoke3.iter().cloned());
        let (m1, m2) =
            self.body_disjoint_pair(s, [&root_s, &alpha3], [&j1, &j2], &body_used)?;
        let (root_path, alpha_path) = if m1.first() == Some(&root_s) || m1.last() == Some(&root_s)
        {
            (m1, m2)
        } else {
            (m2, m1)
        };
        let mut rp = root_path;
        if rp.first() != Some(&root_s) {
            rp.reverse();
        }
        let chain_oriented = if rp.last() == Some(&j1) {
            chain
        } else {
            let mut c = chain;
            c.reverse();
            c
        };
        let mut ap = alpha_path;
        // alpha_path connects alpha3 with the other joint; orient joint->alpha3
        if ap.first() == Some(&alpha3) {
            ap.reverse();
        }
        let mut sp3 = spoke3;
        sp3.reverse(); // alpha3 .. joint(L) = beta3
        // final tail: beta3 -> root_t through side t
        let mut used_all: HashSet<CubeVertex> = rp.iter().cloned().collect();
        for seg in [&chain_oriented, &ap, &sp3] {
            used_all.extend(seg.iter().cloned());
        }
        let tail = {
            let mut avoid = used_all;
            avoid.remove(&beta3);
            avoid.remove(&root_t);
            view_bfs(&self.side(t).view, &beta3, &root_t, &avoid)?
        };
        let segs = vec![rp, chain_oriented, ap, sp3, tail];
        let ordered = if s == 0 { segs } else { mirror_segments(segs) };
        self.finish("h-two-side-component", ordered)
    }

    // ------------------------------------------------ rules C7/C8 (J step)

    fn rule_inductive(&mut self, h: &InteractionDigraph) -> Result<Option<Vec<CubeVertex>>> {
        let comps = h.components();
        for comp in &comps {
            if comp
                .iter()
                .any(|&ni| !matches!(h.nodes[ni].kind, HNodeKind::Limb(_)))
            {
                continue;
            }
            let jx = match extract_j(&self.sc, h, comp) {
                Ok(jx) => jx,
                Err(e) => {
                    self.ctx.note(format!("extract-j: {e}"));
                    continue;
                }
            };
            let boundary = self.boundary_edges(&jx);
            let outcome = if boundary.is_empty() {
                self.inductive_no_edge(h, comp, &jx)
            } else {
                self.inductive_with_edge(h, comp, &jx, &boundary)
            };
            match outcome {
                Ok(p) => return Ok(Some(p)),
                Err(e) => self.ctx.note(format!("inductive step: {e}")),
            }
        }
        Ok(None)
    }

    /// Edges leaving `J - {a', b'}` for the rest of the graph.
    fn boundary_edges(&self, jx: &JExtraction) -> Vec<(CubeVertex, CubeVertex)> {
        let mut out = Vec::new();
        for i in 0..jx.j.n() {
            let v = jx.j.vertex(i);
            if v == &jx.a_boundary || v == &jx.b_boundary {
                continue;
            }
            let gi = self.sc.g.index_of(v).unwrap();
            for &w in self.sc.g.neighbors(gi) {
                let wl = self.sc.g.vertex(w);
                if !jx.j.contains(wl) {
                    out.push((v.clone(), wl.clone()));
                }
            }
        }
        out.sort();
        out
    }

    /// No boundary edge: all of `J`'s interior keeps full degree, recurse on
    /// `J` and extend its boundary vertices to the roots. The tight-mode
    /// shortfall (when `J` is the exceptional subcube between the roots
    /// themselves) moves to the complement graph.
    fn inductive_no_edge(
        &mut self,
        _h: &InteractionDigraph,
        _comp: &[usize],
        jx: &JExtraction,
    ) -> Result<Vec<CubeVertex>> {
        let inner = self.recurse(&jx.j.clone(), &jx.a_boundary, &jx.b_boundary, self.d)?;
        let used: HashSet<CubeVertex> = jx
            .j
            .vertices()
            .iter()
            .filter(|v| **v != jx.a_boundary)
            .cloned()
            .collect();
        let ext_a = {
            let mut avoid = used;
            avoid.remove(&self.sc.a);
            match view_bfs(&self.side(0).view, &self.endpoint(0), &jx.a_boundary, &avoid) {
                Ok(p) => p,
                Err(e) => return Err(e),
            }
        };
        let used_b: HashSet<CubeVertex> = jx
            .j
            .vertices()
            .iter()
            .filter(|v| **v != jx.b_boundary)
            .cloned()
            .chain(ext_a.iter().cloned())
            .collect();
        let ext_b = {
            let mut avoid = used_b;
            avoid.remove(&self.sc.b);
            let mut p = view_bfs(&self.side(1).view, &self.endpoint(1), &jx.b_boundary, &avoid)?;
            p.reverse();
            p
        };
        match self.finish("inductive-recursion", vec![ext_a, inner, ext_b]) {
            Ok(p) => Ok(p),
            Err(first) => {
                // exceptional-subcube shortfall: recurse on the complement
                if jx.a_boundary == self.sc.a && jx.b_boundary == self.sc.b {
                    let keep: Vec<usize> = (0..self.sc.g.n())
                        .filter(|&i| {
                            let l = self.sc.g.vertex(i);
                            !jx.j.contains(l) || l == &self.sc.a || l == &self.sc.b
                        })
                        .collect();
                    let gprime = self.sc.g.subview(&keep);
                    if gprime.n() > 2 && gprime.is_biconnected() {
                        let a = self.sc.a.clone();
                        let b = self.sc.b.clone();
                        let inner2 = self.recurse(&gprime, &a, &b, self.d)?;
                        return self.finish("inductive-complement", vec![inner2]);
                    }
                }
                Err(first)
            }
        }
    }

    /// A boundary edge `v`-`w` exists: route a long path through `J` to `v`,
    /// jump to `w`, and continue through the structure outside the component.
    fn inductive_with_edge(
        &mut self,
        h: &InteractionDigraph,
        comp: &[usize],
        jx: &JExtraction,
        boundary: &[(CubeVertex, CubeVertex)],
    ) -> Result<Vec<CubeVertex>> {
        let comp_verts = component_vertices(&self.sc, h, comp);
        let mut last_err: Option<Error> = None;
        for (v, w) in boundary.iter().take(CAND_CAP) {
            debug_assert!(!comp_verts.contains(w));
            let sw = usize::from(!self.side(0).view.contains(w));
            for attempt in self.edge_escape_plans(h, comp, jx, v, w, sw) {
                match attempt {
                    Ok(p) => return Ok(p),
                    Err(e) => last_err = Some(e),
                }
            }
        }
        Err(last_err
            .unwrap_or_else(|| Error::ConstructionGap("no boundary-edge assembly".into())))
    }

    /// The candidate assemblies for one boundary edge, evaluated lazily.
    fn edge_escape_plans(
        &mut self,
        h: &InteractionDigraph,
        comp: &[usize],
        jx: &JExtraction,
        v: &CubeVertex,
        w: &CubeVertex,
        sw: usize,
    ) -> Vec<Result<Vec<CubeVertex>>> {
        let mut plans = Vec::new();
        let w_idx = self.side(sw).view.index_of(w);
        let Some(w_idx) = w_idx else {
            return vec![Err(Error::ConstructionGap("escape vertex off both sides".into()))];
        };
        let in_body = self.side(sw).limbs.body.binary_search(&w_idx).is_ok();
        if in_body && self.side(sw).limbs.body.len() > 1 {
            plans.push(self.plan_body_escape(h, comp, jx, v, w, sw));
            return plans;
        }
        let Some(limb) = self.side(sw).limb_of(w_idx) else {
            return vec![Err(Error::ConstructionGap("escape vertex has no limb".into()))];
        };
        // arcs out of that limb whose endblock interior avoids w
        let node_id = h
            .nodes
            .iter()
            .position(|n| n.side == sw && n.kind == HNodeKind::Limb(limb));
        let Some(node_id) = node_id else {
            return vec![Err(Error::ConstructionGap("escape limb has no node".into()))];
        };
        let arcs: Vec<HArc> = h.arcs.iter().filter(|a| a.from == node_id).cloned().collect();
        for arc in &arcs {
            let eb = &self.side(sw).endblocks[arc.endblock];
            let winside = eb.interior.contains(&w_idx);
            if !winside {
                plans.push(self.plan_limb_outside(jx, v, w, sw, limb, arc));
            }
        }
        // w inside every arc endblock: joint-route and cross-component chains
        for arc in &arcs {
            let eb = &self.side(sw).endblocks[arc.endblock];
            if eb.interior.contains(&w_idx) {
                plans.push(self.plan_limb_inside_joint(jx, v, w, sw, limb, arc));
                plans.push(self.plan_limb_inside_chain(h, jx, v, w, sw, limb, arc));
            }
        }
        if plans.is_empty() {
            plans.push(Err(Error::ConstructionGap(
                "no assembly plan for the boundary edge".into(),
            )));
        }
        plans
    }

    /// Escape into the Body: long J-path to `v`, edge to `w`, two disjoint
    /// Body paths pairing {root, joint(K2)} with {a_C, w}, and a spoke
    /// through another limb to the far root.
    fn plan_body_escape(
        &mut self,
        h: &InteractionDigraph,
        comp: &[usize],
        jx: &JExtraction,
        v: &CubeVertex,
        w: &CubeVertex,
        sw: usize,
    ) -> Result<Vec<CubeVertex>> {
        let near_bound = if sw == 0 { &jx.a_boundary } else { &jx.b_boundary };
        let far_root = self.endpoint(1 - sw);
        let near_root = self.endpoint(sw);
        let jp = self.j_path(jx, v, near_bound, &far_root)?;
        // attach the boundary to the component's joint on this side
        let a_c = self.component_joint(h, comp, sw)?;
        let mut used: HashSet<CubeVertex> = jp.iter().cloned().collect();
        let ext = {
            let mut avoid = used.clone();
            avoid.remove(near_bound);
            avoid.remove(&a_c);
            view_bfs(&self.side(sw).view, &a_c, near_bound, &avoid)?
        };
        used.extend(ext.iter().cloned());
        // a limb of this side outside the component carries the far spoke
        let mut k2 = None;
        for (ni, n) in h.nodes.iter().enumerate() {
            if n.side == sw && matches!(n.kind, HNodeKind::Limb(_)) && !comp.contains(&ni) {
                k2 = Some(ni);
                break;
            }
        }
        let k2 = k2.ok_or_else(|| {
            Error::ConstructionGap("no limb outside the component for the escape".into())
        })?;
        let (spoke, arc) = self.spoke(h, k2)?;
        used.extend(spoke.iter().cloned());
        let tail = {
            let mut avoid = used.clone();
            avoid.remove(&arc.partner);
            avoid.remove(&far_root);
            view_bfs(&self.side(1 - sw).view, &arc.partner, &far_root, &avoid)?
        };
        used.extend(tail.iter().cloned());
        let j_k2 = self.node_joint(h, k2)?;
        // core chain: a_C ..ext.. near_bound ..through J.. v -edge- w
        let mut jp_rev = jp;
        jp_rev.reverse(); // near_bound -> v
        let core = chain_segments(&self.sc.g, &[ext, jp_rev, vec![w.clone()]])?;
        let (m1, m2) = self.body_disjoint_pair(sw, [&near_root, &j_k2], [&a_c, w], &used)?;
        let (mut root_side, mut other) =
            if m1.first() == Some(&near_root) || m1.last() == Some(&near_root) {
                (m1, m2)
            } else {
                (m2, m1)
            };
        if root_side.first() != Some(&near_root) {
            root_side.reverse();
        }
        // other connects j_k2 with the attachment root_side missed; orient it
        // to end at j_k2 so the spoke continues from there
        if other.last() != Some(&j_k2) {
            other.reverse();
        }
        let core_oriented = if root_side.last() == Some(&a_c) {
            core // a_C .. w
        } else {
            let mut c = core;
            c.reverse(); // w .. a_C
            c
        };
        let segments = vec![root_side, core_oriented, other, spoke, tail];
        let ordered = if sw == 0 {
            segments
        } else {
            mirror_segments(segments)
        };
        self.finish("escape-into-body", ordered)
    }

    /// The joint at which the component's single limb on side `s` meets the
    /// Body (the root itself when the root is a cutvertex).
    fn component_joint(
        &self,
        h: &InteractionDigraph,
        comp: &[usize],
        s: usize,
    ) -> Result<CubeVertex> {
        let mut joints: Vec<CubeVertex> = comp
            .iter()
            .filter(|&&ni| h.nodes[ni].side == s)
            .filter_map(|&ni| self.node_joint(h, ni).ok())
            .collect();
        joints.sort();
        joints.dedup();
        match joints.len() {
            1 => Ok(joints.pop().unwrap()),
            _ => Err(Error::ConstructionGap(
                "component joints are not unique".into(),
            )),
        }
    }

    /// `w` outside the arc's endblock interior: route `w` through the
    /// endblock to the chosen exit and onward to the far root.
    fn plan_limb_outside(
        &mut self,
        jx: &JExtraction,
        v: &CubeVertex,
        w: &CubeVertex,
        sw: usize,
        limb: usize,
        arc: &HArc,
    ) -> Result<Vec<CubeVertex>> {
        let near_bound = if sw == 0 { &jx.a_boundary } else { &jx.b_boundary };
        let near_root = self.endpoint(sw);
        let far_root = self.endpoint(1 - sw);
        let jp = self.j_path(jx, v, near_bound, &far_root)?;
        let mut used: HashSet<CubeVertex> = jp.iter().cloned().collect();
        let ext = {
            let mut avoid = used.clone();
            avoid.remove(near_bound);
            avoid.remove(&near_root);
            view_bfs(&self.side(sw).view, &near_root, near_bound, &avoid)?
        };
        used.extend(ext.iter().cloned());
        let through = self.limb_path(
            sw,
            limb,
            &LimbEnd::At(w.clone()),
            &LimbEnd::Exit {
                endblock: arc.endblock,
                x: arc.exit.clone(),
            },
        )?;
        used.extend(through.iter().cloned());
        let tail = {
            let mut avoid = used;
            avoid.remove(&arc.partner);
            avoid.remove(&far_root);
            view_bfs(&self.side(1 - sw).view, &arc.partner, &far_root, &avoid)?
        };
        let mut jp_rev = jp;
        jp_rev.reverse();
        let segs = vec![ext, jp_rev, through, tail];
        let ordered = if sw == 0 { segs } else { mirror_segments(segs) };
        self.finish("escape-through-limb", ordered)
    }

    /// `w` inside the endblock: recurse from `w` to the cutvertex, walk to
    /// the joint, and use the far-side J-path.
    fn plan_limb_inside_joint(
        &mut self,
        jx: &JExtraction,
        v: &CubeVertex,
        w: &CubeVertex,
        sw: usize,
        limb: usize,
        arc: &HArc,
    ) -> Result<Vec<CubeVertex>> {
        let far_bound = if sw == 0 { &jx.b_boundary } else { &jx.a_boundary };
        let near_root = self.endpoint(sw);
        let far_root = self.endpoint(1 - sw);
        let jp = self.j_path(jx, v, far_bound, &near_root)?; // v .. far_bound
        let eb = self.side(sw).endblocks[arc.endblock].clone();
        let cutv = self.side(sw).label(eb.cutv.unwrap()).clone();
        let inner = self.recurse(&self.eb_view(sw, &eb), w, &cutv, self.d - 1)?;
        let joint = {
            let sd = self.side(sw);
            sd.view.vertex(sd.limbs.limbs[limb].joint).clone()
        };
        let mut used: HashSet<CubeVertex> = jp.iter().cloned().collect();
        used.extend(inner.iter().cloned());
        let walk = {
            let mut avoid = used.clone();
            for l in self.interior_labels(sw, &eb) {
                avoid.insert(l);
            }
            avoid.remove(&cutv);
            avoid.remove(&joint);
            let limb_view = self.side(sw).view.subview(&self.side(sw).limbs.limbs[limb].verts);
            view_bfs(&limb_view, &cutv, &joint, &avoid)?
        };
        used.extend(walk.iter().cloned());
        let head = {
            let mut avoid = used.clone();
            avoid.remove(&joint);
            avoid.remove(&near_root);
            view_bfs(&self.side(sw).view, &near_root, &joint, &avoid)?
        };
        used.extend(head.iter().cloned());
        let tail = {
            let mut avoid = used;
            avoid.remove(far_bound);
            avoid.remove(&far_root);
            let mut p = view_bfs(&self.side(1 - sw).view, &far_root, far_bound, &avoid)?;
            p.reverse();
            p
        };
        let mut inner_rev = inner;
        inner_rev.reverse(); // cutv -> w
        let mut walk_rev = walk;
        walk_rev.reverse(); // joint -> cutv
        let segs = vec![head, walk_rev, inner_rev, jp, tail];
        let ordered = if sw == 0 { segs } else { mirror_segments(segs) };
        self.finish("escape-inside-endblock", ordered)
    }

    /// `w` inside the endblock, chained through a neighbouring component for
    /// the extra length: enter the limb's component structure via an arc into
    /// or out of it.
    fn plan_limb_inside_chain(
        &mut self,
        h: &InteractionDigraph,
        jx: &JExtraction,
        v: &CubeVertex,
        w: &CubeVertex,
        sw: usize,
        limb: usize,
        arc: &HArc,
    ) -> Result<Vec<CubeVertex>> {
        let near_bound = if sw == 0 { &jx.a_boundary } else { &jx.b_boundary };
        let near_root = self.endpoint(sw);
        let far_root = self.endpoint(1 - sw);
        let node_id = h
            .nodes
            .iter()
            .position(|n| n.side == sw && n.kind == HNodeKind::Limb(limb))
            .ok_or_else(|| Error::ConstructionGap("limb without node".into()))?;
        // an arc into this limb from the far side gives a full endblock path
        let incoming = h
            .arcs
            .iter()
            .find(|c| c.to == node_id && c.side == 1 - sw)
            .cloned();
        let jp = self.j_path(jx, v, near_bound, &far_root)?;
        let mut used: HashSet<CubeVertex> = jp.iter().cloned().collect();
        let ext = {
            let mut avoid = used.clone();
            avoid.remove(near_bound);
            avoid.remove(&near_root);
            view_bfs(&self.side(sw).view, &near_root, near_bound, &avoid)?
        };
        used.extend(ext.iter().cloned());
        let chain = match incoming {
            Some(inc) => {
                // w .. q -edge- y ..through far endblock.. cutv .. joint(W')
                let reach = self.limb_path(
                    sw,
                    limb,
                    &LimbEnd::At(w.clone()),
                    &LimbEnd::At(inc.partner.clone()),
                )?;
                used.extend(reach.iter().cloned());
                let far_node = inc.from;
                let HNodeKind::Limb(fl) = h.nodes[far_node].kind else {
                    return Err(Error::ConstructionGap("incoming arc from core".into()));
                };
                let jl = self.node_joint(h, far_node)?;
                let through = self.limb_path(
                    1 - sw,
                    fl,
                    &LimbEnd::Exit {
                        endblock: inc.endblock,
                        x: inc.exit.clone(),
                    },
                    &LimbEnd::At(jl.clone()),
                )?;
                used.extend(through.iter().cloned());
                let tail = {
                    let mut avoid = used.clone();
                    avoid.remove(&jl);
                    avoid.remove(&far_root);
                    view_bfs(&self.side(1 - sw).view, &jl, &far_root, &avoid)?
                };
                chain_segments(&self.sc.g, &[reach, through, tail])?
            }
            None => {
                // follow this limb's own arc, then an arc of the landing
                // node's component back out
                let landing = arc.to;
                let back = h
                    .arcs
                    .iter()
                    .find(|c| c.to == landing && c.side == 1 - sw && c.from != node_id)
                    .cloned()
                    .ok_or_else(|| {
                        Error::ConstructionGap("no second arc into the landing node".into())
                    })?;
                let reach = self.limb_path(
                    sw,
                    limb,
                    &LimbEnd::At(w.clone()),
                    &LimbEnd::At(arc.exit.clone()),
                )?;
                used.extend(reach.iter().cloned());
                let HNodeKind::Limb(ll) = h.nodes[landing].kind else {
                    return Err(Error::ConstructionGap("landing node is core".into()));
                };
                let across = self.limb_path(
                    1 - sw,
                    ll,
                    &LimbEnd::At(arc.partner.clone()),
                    &LimbEnd::At(back.partner.clone()),
                )?;
                used.extend(across.iter().cloned());
                let HNodeKind::Limb(bl) = h.nodes[back.from].kind else {
                    return Err(Error::ConstructionGap("chain arc from core".into()));
                };
                let jl = self.node_joint(h, back.from)?;
                let through = self.limb_path(
                    1 - sw,
                    bl,
                    &LimbEnd::Exit {
                        endblock: back.endblock,
                        x: back.exit.clone(),
                    },
                    &LimbEnd::At(jl.clone()),
                )?;
                used.extend(through.iter().cloned());
                let tail = {
                    let mut avoid = used.clone();
                    avoid.remove(&jl);
                    avoid.remove(&far_root);
                    view_bfs(&self.side(1 - sw).view, &jl, &far_root, &avoid)?
                };
                chain_segments(&self.sc.g, &[reach, across, through, tail])?
            }
        };
        let mut jp_rev = jp;
        jp_rev.reverse();
        let segs = vec![ext, jp_rev, chain];
        let ordered = if sw == 0 { segs } else { mirror_segments(segs) };
        self.finish("escape-chained", ordered)
    }

    /// Long path inside `J` from a boundary vertex to `v`, avoiding the far
    /// root: Menger through a contracted endblock plus a recursion inside it.
    fn j_path(
        &mut self,
        jx: &JExtraction,
        v: &CubeVertex,
        toward: &CubeVertex,
        avoid_root: &CubeVertex,
    ) -> Result<Vec<CubeVertex>> {
        // candidate endblocks fully inside J
        let mut cands: Vec<(usize, EndblockInfo)> = Vec::new();
        for s in 0..2 {
            for eb in &self.side(s).endblocks {
                if eb.cutv.is_none() {
                    continue;
                }
                let all_in = eb
                    .verts
                    .iter()
                    .all(|&i| jx.j.contains(self.side(s).label(i)));
                if !all_in {
                    continue;
                }
                let verts: HashSet<CubeVertex> = eb
                    .verts
                    .iter()
                    .map(|&i| self.side(s).label(i).clone())
                    .collect();
                let interior: HashSet<CubeVertex> = self.interior_labels(s, eb);
                if verts.contains(v) || interior.contains(toward) || interior.contains(avoid_root)
                {
                    continue;
                }
                cands.push((s, eb.clone()));
            }
        }
        for (s, eb) in cands {
            match self.j_path_via(jx, v, toward, avoid_root, s, &eb) {
                Ok(p) => return Ok(p),
                Err(e) => self.ctx.note(format!("j-path candidate: {e}")),
            }
        }
        // last resort: plain path (the caller validates total length)
        let avoid: HashSet<CubeVertex> = [avoid_root.clone()].into_iter().collect();
        let mut p = view_bfs(&jx.j, toward, v, &avoid)?;
        p.reverse();
        Ok(p)
    }

    fn j_path_via(
        &mut self,
        jx: &JExtraction,
        v: &CubeVertex,
        toward: &CubeVertex,
        avoid_root: &CubeVertex,
        s: usize,
        eb: &EndblockInfo,
    ) -> Result<Vec<CubeVertex>> {
        let cutv = self.side(s).label(eb.cutv.unwrap()).clone();
        let interior: HashSet<CubeVertex> = self.interior_labels(s, eb);
        // flow graph: J with the interior contracted to one node
        let j = &jx.j;
        let mut keep: Vec<usize> = Vec::new();
        for i in 0..j.n() {
            let l = j.vertex(i);
            if interior.contains(l) || l == avoid_root && l != toward && l != v {
                continue;
            }
            keep.push(i);
        }
        let base = j.subview(&keep);
        let contracted = base.n();
        let mut fg = FlowGraph::new(contracted + 1);
        for (x, y) in base.edges() {
            fg.add_edge(x, y);
        }
        for i in 0..base.n() {
            let gi = j.index_of(base.vertex(i)).unwrap();
            if j.neighbors(gi)
                .iter()
                .any(|&wn| interior.contains(j.vertex(wn)))
            {
                fg.add_edge(i, contracted);
            }
        }
        let src = [
            base.index_of(toward)
                .ok_or_else(|| Error::ConstructionGap("toward missing".into()))?,
            base.index_of(v)
                .ok_or_else(|| Error::ConstructionGap("v missing".into()))?,
        ];
        let snk = [
            base.index_of(&cutv)
                .ok_or_else(|| Error::ConstructionGap("cutv missing".into()))?,
            contracted,
        ];
        let paths = disjoint_paths(&fg, &src, &snk, 2, &[])
            .ok_or_else(|| Error::ConstructionGap("no two disjoint paths to the endblock".into()))?;
        // identify which source reached the contracted node
        let mut toward_path = None;
        let mut v_path = None;
        for p in paths {
            if p.first() == Some(&src[0]) {
                toward_path = Some(p);
            } else {
                v_path = Some(p);
            }
        }
        let (tp, vp) = (
            toward_path.ok_or_else(|| Error::ConstructionGap("missing toward path".into()))?,
            v_path.ok_or_else(|| Error::ConstructionGap("missing v path".into()))?,
        );
        let decode = |p: &[usize]| -> (Vec<CubeVertex>, bool) {
            let hit_f = *p.last().unwrap() == contracted;
            let real: Vec<CubeVertex> = p
                .iter()
                .filter(|&&i| i != contracted)
                .map(|&i| base.vertex(i).clone())
                .collect();
            (real, hit_f)
        };
        let (tp_l, tp_f) = decode(&tp);
        let (vp_l, vp_f) = decode(&vp);
        if tp_f == vp_f {
            return Err(Error::ConstructionGap(
                "disjoint paths landed on the same endblock side".into(),
            ));
        }
        // the path hitting the contracted node enters the interior at w
        let (f_path, c_path) = if tp_f { (&tp_l, &vp_l) } else { (&vp_l, &tp_l) };
        let pre = f_path
            .last()
            .ok_or_else(|| Error::ConstructionGap("empty contract path".into()))?;
        let pre_j = j.index_of(pre).unwrap();
        let wlab = j
            .neighbors(pre_j)
            .iter()
            .map(|&i| j.vertex(i).clone())
            .find(|l| interior.contains(l))
            .ok_or_else(|| Error::ConstructionGap("no interior entry".into()))?;
        let inner = self.recurse(&self.eb_view(s, eb), &wlab, &cutv, self.d - 1)?;
        // assemble toward .. v
        let segs = if tp_f {
            // toward ..pre, w ..inner.. cutv, c_path reversed (cutv .. v)
            let mut cp = c_path.clone();
            cp.reverse();
            vec![tp_l.clone(), inner, cp]
        } else {
            // toward .. cutv, inner reversed (cutv .. w), pre .. v reversed
            let mut inner_rev = inner;
            inner_rev.reverse();
            let mut vp_rev = vp_l.clone();
            vp_rev.reverse();
            vec![tp_l.clone(), inner_rev, vp_rev]
        };
        chain_segments(&self.sc.g, &segs)
    }
}
