//! Anatomy of a split side around its root vertex: Body, Core, limbs and
//! joints, plus exit vertices of endblocks.
//!
//! `Body(a)` is the intersection of all blocks of the side containing `a`;
//! `Core(a)` is the Body minus the side's cutvertices. A limb is a hanging
//! piece: for a cutvertex root, a component of `side - a` together with `a`;
//! otherwise a component of `side - Core(a)`. Each limb meets the Body in a
//! single vertex, its joint.

use crate::decompose::{block_cut_tree, BlockForest, Endblock};
use crate::host::CubeVertex;
use crate::subgraph::SubgraphView;
use crate::{Error, Result};

/// One limb of a root vertex: its vertex indices (within the side view) and
/// its joint.
#[derive(Clone, Debug)]
pub struct Limb {
    /// Sorted vertex indices in the side view.
    pub verts: Vec<usize>,
    pub joint: usize,
}

/// Body/Core/limb decomposition of a side with respect to its root.
#[derive(Clone, Debug)]
pub struct LimbDecomposition {
    pub root: usize,
    /// Sorted indices of the Body.
    pub body: Vec<usize>,
    /// Sorted indices of the Core.
    pub core: Vec<usize>,
    pub limbs: Vec<Limb>,
    pub root_is_cutvertex: bool,
    /// Set when the root is not a cutvertex but its Core is empty, in which
    /// case limbs fall back to the components of `side - Body` with joints on
    /// the Body. The standard limb definition presumes a nonempty Core.
    pub core_empty_fallback: bool,
}

impl LimbDecomposition {
    /// The limb containing a vertex, when the vertex is not the root/Core.
    pub fn limb_of(&self, v: usize) -> Option<usize> {
        self.limbs.iter().position(|l| {
            l.verts.binary_search(&v).is_ok() && (v != self.root || !self.root_is_cutvertex)
        })
    }
}

/// Computes Body, Core and limbs of `root` in `side`.
pub fn body_core_limbs(side: &SubgraphView, root: &CubeVertex) -> Result<LimbDecomposition> {
    let forest = block_cut_tree(side);
    let root = side
        .index_of(root)
        .ok_or_else(|| Error::MissingVertex(root.to_string()))?;
    Ok(body_core_limbs_indexed(side, &forest, root))
}

/// Index-based variant with a precomputed forest.
pub fn body_core_limbs_indexed(
    side: &SubgraphView,
    forest: &BlockForest,
    root: usize,
) -> LimbDecomposition {
    let root_blocks = &forest.blocks_of_vertex[root];
    let body: Vec<usize> = if root_blocks.is_empty() {
        vec![root]
    } else {
        let mut acc: Vec<usize> = forest.blocks[root_blocks[0]].verts.clone();
        for &b in &root_blocks[1..] {
            acc.retain(|v| forest.blocks[b].verts.binary_search(v).is_ok());
        }
        acc
    };
    let core: Vec<usize> = body
        .iter()
        .copied()
        .filter(|&v| !forest.is_cutvertex[v])
        .collect();
    let root_is_cutvertex = forest.is_cutvertex[root];

    let mut in_body = vec![false; side.n()];
    for &v in &body {
        in_body[v] = true;
    }

    let mut limbs = Vec::new();
    let mut core_empty_fallback = false;
    if root_is_cutvertex {
        // components of side - root, each together with root
        let rest: Vec<usize> = (0..side.n()).filter(|&v| v != root).collect();
        let rest_view = side.subview(&rest);
        for comp in rest_view.components() {
            let mut verts: Vec<usize> = comp
                .iter()
                .map(|&i| side.index_of(rest_view.vertex(i)).unwrap())
                .collect();
            verts.push(root);
            verts.sort_unstable();
            limbs.push(Limb { verts, joint: root });
        }
    } else {
        // components of side - Core (or side - Body when the Core is empty)
        let removed: Vec<usize> = if core.is_empty() {
            core_empty_fallback = !body.is_empty() && side.n() > body.len();
            body.clone()
        } else {
            core.clone()
        };
        let mut drop = vec![false; side.n()];
        for &v in &removed {
            drop[v] = true;
        }
        let rest: Vec<usize> = (0..side.n()).filter(|&v| !drop[v]).collect();
        let rest_view = side.subview(&rest);
        for comp in rest_view.components() {
            let verts: Vec<usize> = comp
                .iter()
                .map(|&i| side.index_of(rest_view.vertex(i)).unwrap())
                .collect();
            // joint: the unique vertex of the limb in the Body; in the
            // fallback the unique Body vertex adjacent to the component
            let joint = if core.is_empty() {
                let mut joints: Vec<usize> = body
                    .iter()
                    .copied()
                    .filter(|&bv| {
                        verts
                            .iter()
                            .any(|&v| side.neighbors(v).binary_search(&bv).is_ok())
                    })
                    .collect();
                joints.sort_unstable();
                joints.dedup();
                joints.first().copied().unwrap_or(root)
            } else {
                let joints: Vec<usize> =
                    verts.iter().copied().filter(|&v| in_body[v]).collect();
                debug_assert!(joints.len() <= 1);
                joints.first().copied().unwrap_or(root)
            };
            limbs.push(Limb { verts, joint });
        }
    }
    limbs.sort_by(|a, b| a.verts.cmp(&b.verts));

    LimbDecomposition {
        root,
        body,
        core,
        limbs,
        root_is_cutvertex,
        core_empty_fallback,
    }
}

/// Exit vertex of an endblock on one side of a split: an interior vertex with
/// a neighbour on the other side. The partner is unique whenever the split
/// honoured its degree-loss contract of `k = 1`.
#[derive(Clone, Debug)]
pub struct ExitVertexRecord {
    pub endblock: usize,
    /// Exit vertex (label).
    pub exit: CubeVertex,
    /// Its unique neighbour across the split (label).
    pub partner: CubeVertex,
}

/// Enumerates the exit vertices of endblock `e` of `side`, reading cross
/// edges from the full graph `g`. Errors if some interior vertex has more
/// than one cross-side neighbour (the split contract was violated).
pub fn exit_vertices(
    side: &SubgraphView,
    other_side: &SubgraphView,
    e: &Endblock,
    forest: &BlockForest,
    g: &SubgraphView,
) -> Result<Vec<ExitVertexRecord>> {
    let mut out = Vec::new();
    for &v in &forest.interior(e) {
        let label = side.vertex(v);
        let gi = g
            .index_of(label)
            .ok_or_else(|| Error::MissingVertex(label.to_string()))?;
        let partners: Vec<CubeVertex> = g
            .neighbors(gi)
            .iter()
            .map(|&w| g.vertex(w).clone())
            .filter(|w| other_side.contains(w))
            .collect();
        match partners.len() {
            0 => {}
            1 => out.push(ExitVertexRecord {
                endblock: e.block,
                exit: label.clone(),
                partner: partners[0].clone(),
            }),
            _ => {
                return Err(Error::InvalidGraph(format!(
                    "exit vertex {label} has {} cross-side neighbours; split loss exceeded",
                    partners.len()
                )))
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::host::{build_host, HostSpec};
    use crate::split::split;
    use std::sync::Arc;

    fn q(n: usize) -> Arc<crate::host::HostGraph> {
        build_host(HostSpec::hypercube(n).unwrap()).unwrap()
    }

    fn torus33() -> Arc<crate::host::HostGraph> {
        build_host(HostSpec::torus(vec![3, 3]).unwrap()).unwrap()
    }

    fn tv(x: i64, y: i64) -> CubeVertex {
        CubeVertex::Coords(vec![x, y])
    }

    #[test]
    fn single_block_side() {
        // 4-cycle containing the root: Body = the block, Core = everything
        // (no cutvertices), no limbs.
        let g = SubgraphView::induced(q(2), (0..4).map(CubeVertex::Mask).collect()).unwrap();
        let ld = body_core_limbs(&g, &CubeVertex::Mask(0)).unwrap();
        assert_eq!(ld.body.len(), 4);
        assert_eq!(ld.core.len(), 4);
        assert!(ld.limbs.is_empty());
        assert!(!ld.root_is_cutvertex);
    }

    #[test]
    fn cutvertex_root_with_two_triangles() {
        let g = SubgraphView::induced(
            torus33(),
            vec![tv(0, 0), tv(1, 0), tv(2, 0), tv(0, 1), tv(0, 2)],
        )
        .unwrap();
        let root = tv(0, 0);
        let ld = body_core_limbs(&g, &root).unwrap();
        assert!(ld.root_is_cutvertex);
        assert_eq!(ld.body, vec![g.index_of(&root).unwrap()]);
        assert!(ld.core.is_empty());
        assert_eq!(ld.limbs.len(), 2);
        for limb in &ld.limbs {
            assert_eq!(limb.verts.len(), 3);
            assert_eq!(limb.joint, g.index_of(&root).unwrap());
        }
    }

    #[test]
    fn triangle_with_pendant_path() {
        // triangle containing the root plus a pendant path leaving at u != root:
        // Body(root) = triangle, one limb rooted at joint u.
        let g = SubgraphView::induced(
            torus33(),
            vec![tv(0, 0), tv(1, 0), tv(2, 0), tv(2, 1), tv(2, 2)],
        )
        .unwrap();
        let root = tv(0, 0);
        let u = tv(2, 0);
        let ld = body_core_limbs(&g, &root).unwrap();
        assert!(!ld.root_is_cutvertex);
        assert_eq!(ld.body.len(), 3);
        assert_eq!(ld.limbs.len(), 1);
        assert_eq!(ld.limbs[0].joint, g.index_of(&u).unwrap());
        assert_eq!(ld.limbs[0].verts.len(), 3); // u plus the two path vertices
    }

    #[test]
    fn exits_of_cube_face_split() {
        // Q_3 split into two faces: every interior vertex of the whole-side
        // endblock is an exit vertex.
        let g = SubgraphView::induced(q(3), (0..8).map(CubeVertex::Mask).collect()).unwrap();
        let out = split(&g, &CubeVertex::Mask(0), &CubeVertex::Mask(7)).unwrap();
        let forest = block_cut_tree(&out.side_a);
        let ends = forest.endblocks();
        assert_eq!(ends.len(), 1);
        assert_eq!(ends[0].cutv, None);
        let exits = exit_vertices(&out.side_a, &out.side_b, &ends[0], &forest, &g).unwrap();
        assert_eq!(exits.len(), 4);
    }

    #[test]
    fn pendant_exit_with_partner() {
        // side = path a-x, other side = {b}, cross edge x-b
        let host = q(2);
        let a = CubeVertex::Mask(0b00);
        let x = CubeVertex::Mask(0b10);
        let b = CubeVertex::Mask(0b11);
        let g = SubgraphView::with_edges(
            host,
            vec![a.clone(), x.clone(), b.clone()],
            &[(a.clone(), x.clone()), (x.clone(), b.clone())],
        )
        .unwrap();
        let out = split(&g, &a, &b).unwrap();
        let (side_a, side_b) = if out.side_a.contains(&a) {
            (out.side_a, out.side_b)
        } else {
            (out.side_b, out.side_a)
        };
        let forest = block_cut_tree(&side_a);
        let ends = forest.endblocks();
        assert_eq!(ends.len(), 1);
        let exits = exit_vertices(&side_a, &side_b, &ends[0], &forest, &g).unwrap();
        assert_eq!(exits.len(), 1);
        assert_eq!(exits[0].exit, x);
        assert_eq!(exits[0].partner, b);
    }
}
