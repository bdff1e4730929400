//! Split state for the rule engine: per-side block forests, limb
//! decompositions and endblock exit tables, the interaction digraph between
//! the limbs of the two roots, and the extraction of the 2-connected subgraph
//! `J` that carries the inductive step.

use crate::constructor::Mode;
use crate::decompose::{block_cut_tree, BlockForest};
use crate::host::CubeVertex;
use crate::limbs::{body_core_limbs_indexed, LimbDecomposition};
use crate::span::span_with_forest;
use crate::split::SplitOutcome;
use crate::subcube::is_subcube;
use crate::subgraph::SubgraphView;
use crate::{Error, Result};
use std::collections::{BTreeSet, HashSet};

/// Which digraph construction is in play.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DigraphVariant {
    /// Exit choice only avoids the roots.
    Weak,
    /// Exits additionally carry endblock paths of length `2^(d-1) - 1`
    /// (odd-distance interior vertices in cube-shaped endblocks) and chosen
    /// exits never pair up across the split.
    Tight,
    /// Limbs of `a'` (the sole side-neighbour of a degree-2 endpoint) and of
    /// `b`; the two-vertex limb holding the endpoint is exempt from the
    /// out-degree requirement and the endpoint's partner is a forced choice.
    Degree1,
}

/// One exit vertex of an endblock with its unique cross-side partner.
#[derive(Clone, Debug)]
pub struct ExitInfo {
    /// Side-view index of the exit vertex.
    pub x: usize,
    pub x_label: CubeVertex,
    pub partner: CubeVertex,
    /// Whether the exit supports the tight-mode endblock path guarantee.
    pub eligible: bool,
}

/// An endblock of a side together with its interior and exit table.
#[derive(Clone, Debug)]
pub struct EndblockInfo {
    /// Block id in the side's forest.
    pub block: usize,
    /// Sorted side-view indices.
    pub verts: Vec<usize>,
    pub cutv: Option<usize>,
    pub interior: Vec<usize>,
    pub exits: Vec<ExitInfo>,
    pub root_in_interior: bool,
    /// The endblock is a (d-1)-dimensional subcube.
    pub is_cube_dminus1: bool,
}

/// One side of a split, fully decomposed.
pub struct SideInfo {
    pub view: SubgraphView,
    /// Decomposition root: the path endpoint, or its sole side-neighbour in
    /// the degree-1 variant.
    pub root: CubeVertex,
    pub root_idx: usize,
    pub forest: BlockForest,
    pub limbs: LimbDecomposition,
    pub endblocks: Vec<EndblockInfo>,
}

impl SideInfo {
    pub fn label(&self, i: usize) -> &CubeVertex {
        self.view.vertex(i)
    }

    pub fn is_biconnected(&self) -> bool {
        self.forest.is_biconnected()
    }

    /// The limb containing a non-root vertex, if any.
    pub fn limb_of(&self, idx: usize) -> Option<usize> {
        if idx == self.limbs.root && self.limbs.root_is_cutvertex {
            return None;
        }
        self.limbs
            .limbs
            .iter()
            .position(|l| l.verts.binary_search(&idx).is_ok())
    }
}

/// Everything the rule engine needs about one split.
pub struct SplitContext {
    pub g: SubgraphView,
    pub a: CubeVertex,
    pub b: CubeVertex,
    pub d: u32,
    pub mode: Mode,
    pub variant: DigraphVariant,
    pub sides: [SideInfo; 2],
}

impl SplitContext {
    /// Builds the context from a fresh split between `a` and `b`.
    pub fn new(
        g: &SubgraphView,
        a: &CubeVertex,
        b: &CubeVertex,
        d: u32,
        mode: Mode,
    ) -> Result<Self> {
        let split = crate::split::split(g, a, b)?;
        Self::from_split(g, a, b, (a.clone(), b.clone()), split, d, mode, DigraphVariant::Weak)
    }

    /// Builds the context from an existing split, with explicit decomposition
    /// roots (differing from the endpoints only in the degree-1 variant).
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_split(
        g: &SubgraphView,
        a: &CubeVertex,
        b: &CubeVertex,
        roots: (CubeVertex, CubeVertex),
        split: SplitOutcome,
        d: u32,
        mode: Mode,
        variant: DigraphVariant,
    ) -> Result<Self> {
        let side_a = make_side(g, split.side_a, roots.0, &split.side_b, d)?;
        let side_b = make_side(g, split.side_b, roots.1, &side_a.view, d)?;
        Ok(SplitContext {
            g: g.clone(),
            a: a.clone(),
            b: b.clone(),
            d,
            mode,
            variant,
            sides: [side_a, side_b],
        })
    }

    /// Path endpoint on a side (`a` for side 0, `b` for side 1).
    pub fn endpoint(&self, side: usize) -> &CubeVertex {
        if side == 0 {
            &self.a
        } else {
            &self.b
        }
    }

    /// In the degree-1 variant, the side-0 limb `{a, a'}`.
    pub fn endpoint_bridge_limb(&self) -> Option<usize> {
        if self.variant != DigraphVariant::Degree1 {
            return None;
        }
        let s = &self.sides[0];
        let a_idx = s.view.index_of(&self.a)?;
        s.limbs
            .limbs
            .iter()
            .position(|l| l.verts.len() == 2 && l.verts.binary_search(&a_idx).is_ok())
    }
}

fn make_side(
    g: &SubgraphView,
    view: SubgraphView,
    root: CubeVertex,
    other: &SubgraphView,
    d: u32,
) -> Result<SideInfo> {
    let root_idx = view
        .index_of(&root)
        .ok_or_else(|| Error::MissingVertex(root.to_string()))?;
    let forest = block_cut_tree(&view);
    let limbs = body_core_limbs_indexed(&view, &forest, root_idx);
    let mut endblocks = Vec::new();
    for e in forest.endblocks() {
        let verts = forest.blocks[e.block].verts.clone();
        let interior = forest.interior(&e);
        let mut exits = Vec::new();
        let eb_view = view.subview(&verts);
        let is_cube_dminus1 = d >= 1
            && is_subcube(&eb_view).map(|w| w.dim) == Some((d - 1) as usize);
        for &v in &interior {
            let label = view.vertex(v);
            let gi = g
                .index_of(label)
                .ok_or_else(|| Error::MissingVertex(label.to_string()))?;
            let partners: Vec<CubeVertex> = g
                .neighbors(gi)
                .iter()
                .map(|&w| g.vertex(w).clone())
                .filter(|w| other.contains(w))
                .collect();
            match partners.len() {
                0 => {}
                1 => {
                    let eligible = if is_cube_dminus1 {
                        match e.cutv {
                            Some(c) => {
                                g.host().hamming(label, view.vertex(c)) % 2 == 1
                            }
                            None => true,
                        }
                    } else {
                        true
                    };
                    exits.push(ExitInfo {
                        x: v,
                        x_label: label.clone(),
                        partner: partners[0].clone(),
                        eligible,
                    });
                }
                _ => {
                    return Err(Error::InvalidGraph(format!(
                        "{label} has {} cross-side neighbours; split loss exceeded",
                        partners.len()
                    )))
                }
            }
        }
        let root_in_interior = interior.contains(&root_idx) && e.cutv.is_some();
        endblocks.push(EndblockInfo {
            block: e.block,
            verts,
            cutv: e.cutv,
            interior,
            exits,
            root_in_interior,
            is_cube_dminus1,
        });
    }
    Ok(SideInfo {
        view,
        root,
        root_idx,
        forest,
        limbs,
        endblocks,
    })
}

/// A node of the interaction digraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HNode {
    pub side: usize,
    pub kind: HNodeKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HNodeKind {
    /// Index into the side's limb list.
    Limb(usize),
    Core,
}

/// A directed edge of the interaction digraph: one per endblock, carrying the
/// chosen exit vertex and its partner.
#[derive(Clone, Debug)]
pub struct HArc {
    pub from: usize,
    pub to: usize,
    /// Side holding the source endblock.
    pub side: usize,
    /// Index into that side's endblock list.
    pub endblock: usize,
    pub exit: CubeVertex,
    pub partner: CubeVertex,
}

/// The bipartite multidigraph between the limbs (and nonempty Cores) of the
/// two roots.
#[derive(Clone, Debug)]
pub struct InteractionDigraph {
    pub nodes: Vec<HNode>,
    pub arcs: Vec<HArc>,
}

impl InteractionDigraph {
    pub fn out_degree(&self, node: usize) -> usize {
        self.arcs.iter().filter(|a| a.from == node).count()
    }

    /// Undirected connected components of the digraph, as sorted node lists
    /// ordered by smallest node. Isolated nodes form their own components.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.nodes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for arc in &self.arcs {
            let (ra, rb) = (find(&mut parent, arc.from), find(&mut parent, arc.to));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut root_of: Vec<Option<usize>> = vec![None; n];
        for v in 0..n {
            let r = find(&mut parent, v);
            match root_of[r] {
                Some(ci) => comps[ci].push(v),
                None => {
                    root_of[r] = Some(comps.len());
                    comps.push(vec![v]);
                }
            }
        }
        comps
    }

    /// Arcs between two nodes, either direction.
    pub fn arcs_between(&self, u: usize, v: usize) -> Vec<&HArc> {
        self.arcs
            .iter()
            .filter(|a| (a.from == u && a.to == v) || (a.from == v && a.to == u))
            .collect()
    }
}

/// The node owning a vertex of a side: its limb, or the Core.
pub(crate) fn node_of_vertex(
    ctx: &SplitContext,
    nodes: &[HNode],
    side: usize,
    label: &CubeVertex,
) -> Option<usize> {
    let s = &ctx.sides[side];
    let idx = s.view.index_of(label)?;
    if s.limbs.core.binary_search(&idx).is_ok() {
        return nodes
            .iter()
            .position(|n| n.side == side && n.kind == HNodeKind::Core);
    }
    let li = s.limb_of(idx)?;
    nodes
        .iter()
        .position(|n| n.side == side && n.kind == HNodeKind::Limb(li))
}

/// Builds the interaction digraph for a split state. Exit choices are
/// deterministic: the smallest admissible exit per endblock, where
/// admissibility depends on the variant (partner off the roots; in tight
/// mode also the endblock-path guarantee and no two chosen exits paired by a
/// cross edge; in the degree-1 variant the endpoint's partner is forced).
pub fn build_interaction_digraph(
    ctx: &SplitContext,
    variant: DigraphVariant,
) -> Result<InteractionDigraph> {
    let mut nodes = Vec::new();
    for side in 0..2 {
        let s = &ctx.sides[side];
        for li in 0..s.limbs.limbs.len() {
            nodes.push(HNode {
                side,
                kind: HNodeKind::Limb(li),
            });
        }
        if !s.limbs.core.is_empty() {
            nodes.push(HNode {
                side,
                kind: HNodeKind::Core,
            });
        }
    }
    let bridge_limb = ctx.endpoint_bridge_limb();
    let mut arcs: Vec<HArc> = Vec::new();
    let mut chosen_exits: HashSet<CubeVertex> = HashSet::new();
    let mut chosen_partners: HashSet<CubeVertex> = HashSet::new();
    // forced choice first so later picks avoid pairing with it
    let mut forced: Vec<(usize, usize, CubeVertex, CubeVertex)> = Vec::new();
    if variant == DigraphVariant::Degree1 {
        // a's unique cross partner v lies in the interior of an endblock of
        // side 1 and must be its chosen exit
        let v = cross_partner(ctx, &ctx.a)
            .ok_or_else(|| Error::ConstructionGap("degree-1 endpoint has no cross partner".into()))?;
        let s1 = &ctx.sides[1];
        let vi = s1
            .view
            .index_of(&v)
            .ok_or_else(|| Error::ConstructionGap("cross partner not on the far side".into()))?;
        if let Some(eb) = s1
            .endblocks
            .iter()
            .position(|e| e.interior.contains(&vi) && e.cutv.is_some())
        {
            forced.push((1, eb, v.clone(), ctx.a.clone()));
            chosen_exits.insert(v);
            chosen_partners.insert(ctx.a.clone());
        }
    }
    for side in 0..2 {
        let s = &ctx.sides[side];
        for (ei, eb) in s.endblocks.iter().enumerate() {
            if eb.cutv.is_none() {
                continue; // a 2-connected side has no limbs to connect
            }
            if eb.root_in_interior {
                return Err(Error::ConstructionGap(format!(
                    "endblock {} on side {side} holds the root in its interior; \
                     no admissible exit",
                    eb.block
                )));
            }
            if let Some((fs, fe, x, p)) = forced
                .iter()
                .find(|(fs, fe, _, _)| *fs == side && *fe == ei)
                .cloned()
            {
                let from = node_of_vertex(ctx, &nodes, fs, &x).ok_or_else(|| {
                    Error::ConstructionGap("forced exit vertex has no limb".into())
                })?;
                let to = node_of_vertex(ctx, &nodes, 1 - fs, &p).ok_or_else(|| {
                    Error::ConstructionGap("forced partner has no node".into())
                })?;
                arcs.push(HArc {
                    from,
                    to,
                    side: fs,
                    endblock: fe,
                    exit: x,
                    partner: p,
                });
                continue;
            }
            if variant == DigraphVariant::Degree1 && side == 0 {
                if let Some(bl) = bridge_limb {
                    // the two-vertex limb holding the endpoint generates no arc
                    let a_idx = s.view.index_of(&ctx.a);
                    if eb.verts.len() == 2 && a_idx.map_or(false, |ai| eb.verts.contains(&ai)) {
                        let _ = bl;
                        continue;
                    }
                }
            }
            let mut forbidden: Vec<&CubeVertex> = vec![&ctx.a, &ctx.b];
            let root0 = &ctx.sides[0].root;
            if variant == DigraphVariant::Degree1 && root0 != &ctx.a {
                forbidden.push(root0);
            }
            let need_eligible = variant == DigraphVariant::Tight
                || (variant == DigraphVariant::Degree1 && ctx.mode == Mode::Tight);
            let pick = eb.exits.iter().find(|x| {
                !forbidden.contains(&&x.partner)
                    && (!need_eligible || x.eligible)
                    && !chosen_exits.contains(&x.partner)
                    && !chosen_partners.contains(&x.x_label)
            });
            let pick = match pick {
                Some(p) => p,
                None => {
                    return Err(Error::ConstructionGap(format!(
                        "endblock {} on side {side} has no admissible exit \
                         (expected at least two exits with partners off the roots)",
                        eb.block
                    )))
                }
            };
            let from = node_of_vertex(ctx, &nodes, side, &pick.x_label)
                .ok_or_else(|| Error::ConstructionGap("exit vertex has no limb".into()))?;
            let to = node_of_vertex(ctx, &nodes, 1 - side, &pick.partner)
                .ok_or_else(|| Error::ConstructionGap("partner has no node".into()))?;
            chosen_exits.insert(pick.x_label.clone());
            chosen_partners.insert(pick.partner.clone());
            arcs.push(HArc {
                from,
                to,
                side,
                endblock: ei,
                exit: pick.x_label.clone(),
                partner: pick.partner.clone(),
            });
        }
    }
    let h = InteractionDigraph { nodes, arcs };
    // invariants: limbs have out-degree >= 1 (the endpoint bridge exempt),
    // cores have none, chosen exits never pair up
    for (ni, node) in h.nodes.iter().enumerate() {
        match node.kind {
            HNodeKind::Core => {
                if h.out_degree(ni) != 0 {
                    return Err(Error::ConstructionGap(
                        "core node acquired an out-arc".into(),
                    ));
                }
            }
            HNodeKind::Limb(li) => {
                let exempt = variant == DigraphVariant::Degree1
                    && node.side == 0
                    && Some(li) == bridge_limb;
                if !exempt && h.out_degree(ni) == 0 {
                    return Err(Error::ConstructionGap(format!(
                        "limb node {ni} has no out-arc"
                    )));
                }
            }
        }
    }
    for x in &h.arcs {
        for y in &h.arcs {
            if x.side != y.side && x.partner == y.exit && y.partner == x.exit {
                return Err(Error::ConstructionGap(
                    "chosen exits pair up across the split".into(),
                ));
            }
        }
    }
    Ok(h)
}

/// The unique cross-side neighbour of a vertex, if any.
pub(crate) fn cross_partner(ctx: &SplitContext, label: &CubeVertex) -> Option<CubeVertex> {
    let gi = ctx.g.index_of(label)?;
    let my_side = usize::from(!ctx.sides[0].view.contains(label));
    let other = &ctx.sides[1 - my_side].view;
    ctx.g
        .neighbors(gi)
        .iter()
        .map(|&w| ctx.g.vertex(w).clone())
        .find(|w| other.contains(w))
}

/// Result of the inductive-subgraph extraction: a 2-connected `J` whose
/// non-boundary vertices keep degree `d - 1` and all their within-component
/// neighbours.
#[derive(Clone, Debug)]
pub struct JExtraction {
    pub j: SubgraphView,
    /// Boundary vertex on `a`'s side.
    pub a_boundary: CubeVertex,
    /// Boundary vertex on `b`'s side.
    pub b_boundary: CubeVertex,
    /// Seed sets of the span construction (labels), per side.
    pub s_set: Vec<CubeVertex>,
    pub t_set: Vec<CubeVertex>,
}

/// The vertices (labels) covered by a component of the digraph.
pub(crate) fn component_vertices(
    ctx: &SplitContext,
    h: &InteractionDigraph,
    comp: &[usize],
) -> HashSet<CubeVertex> {
    let mut out = HashSet::new();
    for &ni in comp {
        let node = &h.nodes[ni];
        let s = &ctx.sides[node.side];
        match node.kind {
            HNodeKind::Core => {
                for &v in &s.limbs.core {
                    out.insert(s.view.vertex(v).clone());
                }
            }
            HNodeKind::Limb(li) => {
                for &v in &s.limbs.limbs[li].verts {
                    out.insert(s.view.vertex(v).clone());
                }
            }
        }
    }
    out
}

/// Boundary of a vertex set within a side: members with a side-neighbour
/// outside the set. Returns (unique boundary, had_ties) picking the vertex
/// nearest the root when several qualify.
fn side_boundary(
    side: &SideInfo,
    members: &[usize],
) -> Result<(usize, bool)> {
    let mut in_set = vec![false; side.view.n()];
    for &v in members {
        in_set[v] = true;
    }
    let mut boundary: Vec<usize> = members
        .iter()
        .copied()
        .filter(|&v| side.view.neighbors(v).iter().any(|&w| !in_set[w]))
        .collect();
    boundary.sort_unstable();
    boundary.dedup();
    match boundary.len() {
        0 => Err(Error::ConstructionGap(
            "span has no boundary toward the rest of its side".into(),
        )),
        1 => Ok((boundary[0], false)),
        _ => {
            // ambiguous attachment: take the one nearest the root
            let dist = bfs_distances(&side.view, side.root_idx);
            let best = boundary
                .into_iter()
                .min_by_key(|&v| (dist[v], v))
                .unwrap();
            Ok((best, true))
        }
    }
}

fn bfs_distances(view: &SubgraphView, from: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; view.n()];
    dist[from] = 0;
    let mut q = std::collections::VecDeque::from([from]);
    while let Some(u) = q.pop_front() {
        for &w in view.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                q.push_back(w);
            }
        }
    }
    dist
}

struct JSides<'a> {
    ctx: &'a SplitContext,
    /// side index holding the single limb K
    k_side: usize,
}

impl<'a> JSides<'a> {
    fn k(&self) -> &SideInfo {
        &self.ctx.sides[self.k_side]
    }
    fn l(&self) -> &SideInfo {
        &self.ctx.sides[1 - self.k_side]
    }
}

/// Extracts the 2-connected inductive subgraph `J` from an all-limb component
/// of the digraph, with its two boundary vertices. Components mixing in Core
/// nodes or having several limbs on both sides are rejected.
pub fn extract_j(
    ctx: &SplitContext,
    h: &InteractionDigraph,
    comp: &[usize],
) -> Result<JExtraction> {
    let mut a_limbs = Vec::new();
    let mut b_limbs = Vec::new();
    for &ni in comp {
        match h.nodes[ni].kind {
            HNodeKind::Core => {
                return Err(Error::ConstructionGap(
                    "component contains a core node".into(),
                ))
            }
            HNodeKind::Limb(li) => {
                if h.nodes[ni].side == 0 {
                    a_limbs.push(li);
                } else {
                    b_limbs.push(li);
                }
            }
        }
    }
    a_limbs.sort_unstable();
    b_limbs.sort_unstable();
    let (k_side, k_limb, l_limbs) = if a_limbs.len() == 1 {
        (0usize, a_limbs[0], b_limbs.clone())
    } else if b_limbs.len() == 1 {
        (1usize, b_limbs[0], a_limbs.clone())
    } else {
        return Err(Error::ConstructionGap(
            "component has several limbs on both sides".into(),
        ));
    };
    if l_limbs.is_empty() {
        return Err(Error::ConstructionGap("component has a single node".into()));
    }
    let js = JSides { ctx, k_side };
    let ex = if l_limbs.len() == 1 {
        let (s0, t0) = seed_sets(&js, k_limb, l_limbs[0]);
        two_limb_j(&js, k_limb, l_limbs[0], s0, t0)?
    } else {
        multi_limb_j(&js, k_limb, &l_limbs)?
    };
    validate_j(ctx, h, comp, &ex)?;
    Ok(ex)
}

/// Cross-neighbour seed sets between limb K and limb L, excluding the roots.
fn seed_sets(js: &JSides, k_limb: usize, l_limb: usize) -> (Vec<usize>, Vec<usize>) {
    let k = js.k();
    let l = js.l();
    let k_verts = &k.limbs.limbs[k_limb].verts;
    let l_verts = &l.limbs.limbs[l_limb].verts;
    let l_labels: HashSet<&CubeVertex> = l_verts
        .iter()
        .filter(|&&v| v != l.root_idx)
        .map(|&v| l.view.vertex(v))
        .collect();
    let k_labels: HashSet<&CubeVertex> = k_verts
        .iter()
        .filter(|&&v| v != k.root_idx)
        .map(|&v| k.view.vertex(v))
        .collect();
    let g = &js.ctx.g;
    let mut s = Vec::new();
    for &v in k_verts {
        if v == k.root_idx {
            continue;
        }
        let gi = g.index_of(k.view.vertex(v)).unwrap();
        if g.neighbors(gi)
            .iter()
            .any(|&w| l_labels.contains(g.vertex(w)))
        {
            s.push(v);
        }
    }
    let mut t = Vec::new();
    for &v in l_verts {
        if v == l.root_idx {
            continue;
        }
        let gi = g.index_of(l.view.vertex(v)).unwrap();
        if g.neighbors(gi)
            .iter()
            .any(|&w| k_labels.contains(g.vertex(w)))
        {
            t.push(v);
        }
    }
    (s, t)
}

/// The two-limb construction: spans of the seed sets, with the root
/// adjunction fix-ups, joined into `J`.
fn two_limb_j(
    js: &JSides,
    _k_limb: usize,
    _l_limb: usize,
    mut s: Vec<usize>,
    mut t: Vec<usize>,
) -> Result<JExtraction> {
    let ctx = js.ctx;
    let k = js.k();
    let l = js.l();
    for _round in 0..4 {
        let span_s = span_with_forest(&k.view, &k.forest, &s);
        let span_t = span_with_forest(&l.view, &l.forest, &t);
        let (k_bnd, _) = side_boundary(k, &span_s)?;
        let (l_bnd, _) = side_boundary(l, &span_t)?;
        let j_labels: HashSet<CubeVertex> = span_s
            .iter()
            .map(|&v| k.view.vertex(v).clone())
            .chain(span_t.iter().map(|&v| l.view.vertex(v).clone()))
            .collect();
        // fix-up: a root inside the limb but outside J must not keep
        // neighbours in J - boundaries
        let mut changed = false;
        for (side, seeds) in [(js.k_side, &mut s), (1 - js.k_side, &mut t)] {
            let info = &ctx.sides[side];
            let root_label = info.root.clone();
            let root_idx = info.root_idx;
            if j_labels.contains(&root_label) {
                continue;
            }
            let bnd_labels = [
                k.view.vertex(k_bnd).clone(),
                l.view.vertex(l_bnd).clone(),
            ];
            let gi = ctx.g.index_of(&root_label).unwrap();
            let touches = ctx.g.neighbors(gi).iter().any(|&w| {
                let wl = ctx.g.vertex(w);
                j_labels.contains(wl) && !bnd_labels.contains(wl)
            });
            if touches && !seeds.contains(&root_idx) {
                seeds.push(root_idx);
                changed = true;
            }
        }
        if !changed {
            let j = ctx.g.subview_labels(&j_labels.into_iter().collect::<Vec<_>>());
            let (a_boundary, b_boundary) = if js.k_side == 0 {
                (k.view.vertex(k_bnd).clone(), l.view.vertex(l_bnd).clone())
            } else {
                (l.view.vertex(l_bnd).clone(), k.view.vertex(k_bnd).clone())
            };
            return Ok(JExtraction {
                j,
                a_boundary,
                b_boundary,
                s_set: s.iter().map(|&v| k.view.vertex(v).clone()).collect(),
                t_set: t.iter().map(|&v| l.view.vertex(v).clone()).collect(),
            });
        }
    }
    Err(Error::ConstructionGap(
        "root adjunction did not stabilize".into(),
    ))
}

/// The multi-limb construction: per-limb seed sets, the span-merging loop,
/// then either a reduction to the two-limb case or the union of the involved
/// limbs with the merged span.
fn multi_limb_j(js: &JSides, k_limb: usize, l_limbs: &[usize]) -> Result<JExtraction> {
    let ctx = js.ctx;
    let k = js.k();
    let l = js.l();
    let g = &ctx.g;
    // seed sets per opposite limb
    let mut s_sets: Vec<Vec<usize>> = Vec::new();
    let mut t_sets: Vec<Vec<usize>> = Vec::new();
    for &li in l_limbs {
        let (s, t) = seed_sets(js, k_limb, li);
        s_sets.push(s);
        t_sets.push(t);
    }
    // limbs with a real attachment (at least two cross vertices)
    let strong: Vec<usize> = (0..l_limbs.len())
        .filter(|&i| t_sets[i].len() >= 2)
        .collect();
    if strong.is_empty() {
        return Err(Error::ConstructionGap(
            "no opposite limb attaches at two or more vertices".into(),
        ));
    }
    // adjunction fix-ups per strong limb
    for &i in &strong {
        let span_s = span_with_forest(&k.view, &k.forest, &s_sets[i]);
        let span_t = span_with_forest(&l.view, &l.forest, &t_sets[i]);
        let c_i = side_boundary(l, &span_t).map(|(v, _)| v);
        let c_i_prime = side_boundary(k, &span_s).map(|(v, _)| v);
        // adjoin the K-side root if its cross partner enters span(T_i) - c_i
        if let (Some(p), Ok(c_i)) = (cross_partner(ctx, &k.root), c_i) {
            if let Some(pi) = l.view.index_of(&p) {
                if span_t.contains(&pi) && pi != c_i && !s_sets[i].contains(&k.root_idx) {
                    s_sets[i].push(k.root_idx);
                }
            }
        }
        if let (Some(p), Ok(cp)) = (cross_partner(ctx, &l.root), c_i_prime) {
            if let Some(pi) = k.view.index_of(&p) {
                if span_s.contains(&pi) && pi != cp && !t_sets[i].contains(&l.root_idx) {
                    t_sets[i].push(l.root_idx);
                }
            }
        }
    }
    // merging loop on the strong seed sets
    let mut groups: Vec<BTreeSet<usize>> = strong.iter().map(|&i| BTreeSet::from([i])).collect();
    let union_span = |group: &BTreeSet<usize>, sets: &[Vec<usize>]| -> Vec<usize> {
        let mut seed: Vec<usize> = group.iter().flat_map(|&i| sets[i].clone()).collect();
        seed.sort_unstable();
        seed.dedup();
        span_with_forest(&k.view, &k.forest, &seed)
    };
    loop {
        let spans: Vec<Vec<usize>> = groups.iter().map(|gr| union_span(gr, &s_sets)).collect();
        let mut merged = None;
        'outer: for i in 0..groups.len() {
            for j2 in i + 1..groups.len() {
                let overlap = spans[i]
                    .iter()
                    .filter(|v| spans[j2].binary_search(v).is_ok())
                    .count();
                if overlap >= 2 {
                    merged = Some((i, j2));
                    break 'outer;
                }
            }
        }
        match merged {
            Some((i, jj)) => {
                let moved = groups.remove(jj);
                groups[i].extend(moved);
            }
            None => break,
        }
    }
    // a group whose span attaches to the rest of the side at one vertex
    let mut chosen: Option<(BTreeSet<usize>, Vec<usize>, usize)> = None;
    for gr in &groups {
        let sp = union_span(gr, &s_sets);
        if let Ok((bnd, _)) = side_boundary(k, &sp) {
            chosen = Some((gr.clone(), sp, bnd));
            break;
        }
    }
    let (m_group, span_m, a_bnd) = chosen.ok_or_else(|| {
        Error::ConstructionGap("no merged span with a single boundary".into())
    })?;
    // weakly-attached limbs that touch the merged span join in
    let mut i_set: BTreeSet<usize> = m_group.clone();
    for (i, &li) in l_limbs.iter().enumerate() {
        if strong.contains(&i) {
            continue;
        }
        let touches = l.limbs.limbs[li].verts.iter().any(|&v| {
            if v == l.root_idx {
                return false;
            }
            let gi = g.index_of(l.view.vertex(v)).unwrap();
            g.neighbors(gi).iter().any(|&w| {
                let wl = g.vertex(w);
                k.view
                    .index_of(wl)
                    .map_or(false, |ki| ki != a_bnd && span_m.binary_search(&ki).is_ok())
            })
        });
        if touches {
            i_set.insert(i);
        }
    }
    if i_set.len() == 1 {
        let i = *i_set.iter().next().unwrap();
        return two_limb_j(js, k_limb, l_limbs[i], s_sets[i].clone(), t_sets[i].clone());
    }
    // J = the involved opposite limbs plus the merged span
    let mut seed: Vec<usize> = i_set.iter().flat_map(|&i| s_sets[i].clone()).collect();
    seed.sort_unstable();
    seed.dedup();
    let span_i = span_with_forest(&k.view, &k.forest, &seed);
    let (a_bnd, _) = side_boundary(k, &span_i)?;
    let mut labels: HashSet<CubeVertex> =
        span_i.iter().map(|&v| k.view.vertex(v).clone()).collect();
    for &i in &i_set {
        for &v in &l.limbs.limbs[l_limbs[i]].verts {
            labels.insert(l.view.vertex(v).clone());
        }
    }
    let j = g.subview_labels(&labels.into_iter().collect::<Vec<_>>());
    let (a_boundary, b_boundary) = if js.k_side == 0 {
        (k.view.vertex(a_bnd).clone(), l.root.clone())
    } else {
        (l.root.clone(), k.view.vertex(a_bnd).clone())
    };
    Ok(JExtraction {
        j,
        a_boundary,
        b_boundary,
        s_set: seed.iter().map(|&v| k.view.vertex(v).clone()).collect(),
        t_set: i_set
            .iter()
            .flat_map(|&i| t_sets[i].iter().map(|&v| l.view.vertex(v).clone()))
            .collect(),
    })
}

/// Checks the contract of the extraction: `J` is 2-connected, and every
/// vertex off the boundaries keeps degree `d - 1` and all of its neighbours
/// within the component's vertex set.
fn validate_j(
    ctx: &SplitContext,
    h: &InteractionDigraph,
    comp: &[usize],
    ex: &JExtraction,
) -> Result<()> {
    if !ex.j.is_biconnected() {
        return Err(Error::ConstructionGap("extracted J is not 2-connected".into()));
    }
    let comp_verts = component_vertices(ctx, h, comp);
    for i in 0..ex.j.n() {
        let label = ex.j.vertex(i);
        if label == &ex.a_boundary || label == &ex.b_boundary {
            continue;
        }
        if (ex.j.degree(i) as u32) + 1 < ctx.d {
            return Err(Error::ConstructionGap(format!(
                "J vertex {label} has degree {} < d - 1",
                ex.j.degree(i)
            )));
        }
        let gi = ctx.g.index_of(label).unwrap();
        for &w in ctx.g.neighbors(gi) {
            let wl = ctx.g.vertex(w);
            if comp_verts.contains(wl) && !ex.j.contains(wl) {
                return Err(Error::ConstructionGap(format!(
                    "J vertex {label} keeps a component neighbour {wl} outside J"
                )));
            }
        }
    }
    Ok(())
}
