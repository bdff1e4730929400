//! Block–cutvertex decomposition.
//!
//! A block is a bridge or a maximal 2-connected subgraph; the edge sets of the
//! blocks partition the edge set of the graph, any two blocks share at most
//! one vertex, and shared vertices are exactly the cutvertices. For a
//! connected graph the block-cutvertex incidence graph is a tree whose leaves
//! are the endblocks.

use crate::host::CubeVertex;
use crate::subgraph::SubgraphView;
use std::collections::BTreeSet;

/// One block: vertex indices (into the decomposed view) plus its edges.
#[derive(Clone, Debug)]
pub struct Block {
    /// Sorted vertex indices of the block.
    pub verts: Vec<usize>,
    /// Edges of the block as index pairs `(i, j)`, `i < j`.
    pub edges: Vec<(usize, usize)>,
    pub is_bridge: bool,
}

/// Block–cutvertex decomposition of a [`SubgraphView`]. For a disconnected
/// view this is a forest, flagged by `connected`.
#[derive(Clone, Debug)]
pub struct BlockForest {
    pub blocks: Vec<Block>,
    /// Sorted cutvertex indices.
    pub cutvertices: Vec<usize>,
    pub is_cutvertex: Vec<bool>,
    /// For each vertex, the sorted list of blocks containing it.
    pub blocks_of_vertex: Vec<Vec<usize>>,
    pub connected: bool,
}

/// One endblock: a leaf of the block-cutvertex tree together with its unique
/// cutvertex. A component that is a single block has no cutvertex.
#[derive(Clone, Debug)]
pub struct Endblock {
    pub block: usize,
    pub cutv: Option<usize>,
}

impl BlockForest {
    /// Tree degree of a block: the number of cutvertices it contains.
    pub fn block_tree_degree(&self, b: usize) -> usize {
        self.blocks[b]
            .verts
            .iter()
            .filter(|&&v| self.is_cutvertex[v])
            .count()
    }

    /// Leaf blocks with their unique cutvertex, in block order. Single-block
    /// components appear with `cutv: None`.
    pub fn endblocks(&self) -> Vec<Endblock> {
        let mut out = Vec::new();
        for (b, block) in self.blocks.iter().enumerate() {
            let cuts: Vec<usize> = block
                .verts
                .iter()
                .copied()
                .filter(|&v| self.is_cutvertex[v])
                .collect();
            match cuts.len() {
                0 => out.push(Endblock {
                    block: b,
                    cutv: None,
                }),
                1 => out.push(Endblock {
                    block: b,
                    cutv: Some(cuts[0]),
                }),
                _ => {}
            }
        }
        out
    }

    /// Interior of an endblock: its vertices minus the cutvertex.
    pub fn interior(&self, e: &Endblock) -> Vec<usize> {
        self.blocks[e.block]
            .verts
            .iter()
            .copied()
            .filter(|&v| Some(v) != e.cutv)
            .collect()
    }

    /// Whether the decomposed view was 2-connected (single non-bridge block,
    /// no cutvertices).
    pub fn is_biconnected(&self) -> bool {
        self.connected
            && self.cutvertices.is_empty()
            && self.blocks.len() == 1
            && !self.blocks[0].is_bridge
    }

    /// DOT rendering of the block-cutvertex tree: blocks as boxes, cutvertices
    /// as circles.
    pub fn to_dot(&self, view: &SubgraphView) -> String {
        let mut out = String::from("graph blocktree {\n");
        for (b, block) in self.blocks.iter().enumerate() {
            let members: Vec<String> = block
                .verts
                .iter()
                .map(|&v| view.vertex(v).to_string())
                .collect();
            out.push_str(&format!(
                "  b{b} [shape=box, label=\"B{b}: {{{}}}\"];\n",
                members.join(",")
            ));
        }
        for &c in &self.cutvertices {
            out.push_str(&format!(
                "  c{c} [shape=circle, label=\"{}\"];\n",
                view.vertex(c)
            ));
        }
        for (b, block) in self.blocks.iter().enumerate() {
            for &v in &block.verts {
                if self.is_cutvertex[v] {
                    out.push_str(&format!("  b{b} -- c{v};\n"));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Computes the block–cutvertex decomposition by a single iterative DFS with
/// lowpoints. DFS roots and neighbour scans follow the view's sorted vertex
/// order, so block ids are deterministic: blocks are sorted by their smallest
/// member vertex, then lexicographically.
pub fn block_cut_tree(view: &SubgraphView) -> BlockForest {
    let n = view.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut parent = vec![usize::MAX; n];
    let mut timer = 0usize;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut raw_blocks: Vec<Vec<(usize, usize)>> = Vec::new();

    // iterative DFS: (vertex, next neighbor position)
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(&mut (u, ref mut pos)) = stack.last_mut() {
            if *pos < view.neighbors(u).len() {
                let v = view.neighbors(u)[*pos];
                *pos += 1;
                if disc[v] == usize::MAX {
                    parent[v] = u;
                    edge_stack.push((u, v));
                    disc[v] = timer;
                    low[v] = timer;
                    timer += 1;
                    stack.push((v, 0));
                } else if v != parent[u] && disc[v] < disc[u] {
                    edge_stack.push((u, v));
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        // the block hanging off tree edge (p, u) closes here:
                        // everything pushed at or after u belongs to it
                        let mut block = Vec::new();
                        while let Some(&(x, y)) = edge_stack.last() {
                            if disc[x] >= disc[u] {
                                block.push((x, y));
                                edge_stack.pop();
                            } else {
                                break;
                            }
                        }
                        if let Some(&(x, y)) = edge_stack.last() {
                            if (x, y) == (p, u) {
                                block.push((x, y));
                                edge_stack.pop();
                            }
                        }
                        if !block.is_empty() {
                            raw_blocks.push(block);
                        }
                    }
                }
            }
        }
    }

    // Normalize blocks: vertex sets, canonical edges, deterministic order.
    let mut blocks: Vec<Block> = raw_blocks
        .into_iter()
        .map(|edges| {
            let mut verts = BTreeSet::new();
            let mut es: Vec<(usize, usize)> = edges
                .into_iter()
                .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
                .collect();
            es.sort_unstable();
            es.dedup();
            for &(a, b) in &es {
                verts.insert(a);
                verts.insert(b);
            }
            let verts: Vec<usize> = verts.into_iter().collect();
            let is_bridge = es.len() == 1;
            Block {
                verts,
                edges: es,
                is_bridge,
            }
        })
        .collect();
    blocks.sort_by(|a, b| a.verts.cmp(&b.verts));

    let mut blocks_of_vertex = vec![Vec::new(); n];
    for (bi, b) in blocks.iter().enumerate() {
        for &v in &b.verts {
            blocks_of_vertex[v].push(bi);
        }
    }
    // a vertex is a cutvertex iff it lies in at least two blocks
    let is_cut: Vec<bool> = (0..n).map(|v| blocks_of_vertex[v].len() >= 2).collect();
    let cutvertices: Vec<usize> = (0..n).filter(|&v| is_cut[v]).collect();

    BlockForest {
        blocks,
        cutvertices,
        is_cutvertex: is_cut,
        blocks_of_vertex,
        connected: view.is_connected(),
    }
}

/// Label-based convenience records for callers outside the engine.
#[derive(Clone, Debug)]
pub struct BlockRecord {
    pub verts: Vec<CubeVertex>,
    pub is_bridge: bool,
}

pub fn block_records(view: &SubgraphView, forest: &BlockForest) -> Vec<BlockRecord> {
    forest
        .blocks
        .iter()
        .map(|b| BlockRecord {
            verts: b.verts.iter().map(|&i| view.vertex(i).clone()).collect(),
            is_bridge: b.is_bridge,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::host::{build_host, CubeVertex, HostSpec};
    use crate::subgraph::SubgraphView;
    use std::sync::Arc;

    fn coords(cs: &[[i64; 2]]) -> Vec<CubeVertex> {
        cs.iter().map(|c| CubeVertex::Coords(c.to_vec())).collect()
    }

    #[test]
    fn two_triangles_sharing_a_vertex() {
        // C_3^2 hosts triangles: axis moves within C_3 are all adjacent.
        let host = build_host(HostSpec::torus(vec![3, 3]).unwrap()).unwrap();
        let g = SubgraphView::induced(
            host,
            coords(&[[0, 0], [1, 0], [2, 0], [0, 1], [0, 2]]),
        )
        .unwrap();
        let f = block_cut_tree(&g);
        assert_eq!(f.blocks.len(), 2);
        assert_eq!(f.cutvertices.len(), 1);
        let shared = g.index_of(&CubeVertex::Coords(vec![0, 0])).unwrap();
        assert!(f.is_cutvertex[shared]);
        let ends = f.endblocks();
        assert_eq!(ends.len(), 2);
        assert!(ends.iter().all(|e| e.cutv == Some(shared)));
    }

    #[test]
    fn four_cycle_is_single_block() {
        let host = build_host(HostSpec::hypercube(2).unwrap()).unwrap();
        let g = SubgraphView::induced(host, (0..4).map(CubeVertex::Mask).collect()).unwrap();
        let f = block_cut_tree(&g);
        assert_eq!(f.blocks.len(), 1);
        assert!(f.cutvertices.is_empty());
        assert!(f.is_biconnected());
        assert!(g.is_biconnected());
        assert_eq!(f.endblocks().len(), 1);
        assert_eq!(f.endblocks()[0].cutv, None);
    }

    #[test]
    fn path_of_three_edges() {
        let host = build_host(HostSpec::hypercube(3).unwrap()).unwrap();
        // 000 - 001 - 011 - 111
        let g = SubgraphView::with_edges(
            host,
            vec![0, 1, 3, 7].into_iter().map(CubeVertex::Mask).collect(),
            &[
                (CubeVertex::Mask(0), CubeVertex::Mask(1)),
                (CubeVertex::Mask(1), CubeVertex::Mask(3)),
                (CubeVertex::Mask(3), CubeVertex::Mask(7)),
            ],
        )
        .unwrap();
        let f = block_cut_tree(&g);
        assert_eq!(f.blocks.len(), 3);
        assert!(f.blocks.iter().all(|b| b.is_bridge));
        assert_eq!(f.cutvertices.len(), 2);
        assert_eq!(f.endblocks().len(), 2);
    }

    #[test]
    fn edge_partition_identity() {
        let host = build_host(HostSpec::hypercube(4).unwrap()).unwrap();
        let g = SubgraphView::induced(
            host,
            vec![0, 1, 3, 2, 6, 7, 5, 4, 12, 8]
                .into_iter()
                .map(CubeVertex::Mask)
                .collect(),
        )
        .unwrap();
        let f = block_cut_tree(&g);
        let total: usize = f.blocks.iter().map(|b| b.edges.len()).sum();
        assert_eq!(total, g.edge_count());
        // pairwise edge-disjoint
        let mut all: Vec<(usize, usize)> = f.blocks.iter().flat_map(|b| b.edges.clone()).collect();
        all.sort_unstable();
        let before = all.len();
        all.dedup();
        assert_eq!(before, all.len());
    }

    #[test]
    fn dot_export_mentions_shapes() {
        let host = build_host(HostSpec::hypercube(3).unwrap()).unwrap();
        let g = SubgraphView::with_edges(
            host,
            vec![0, 1, 3].into_iter().map(CubeVertex::Mask).collect(),
            &[
                (CubeVertex::Mask(0), CubeVertex::Mask(1)),
                (CubeVertex::Mask(1), CubeVertex::Mask(3)),
            ],
        )
        .unwrap();
        let f = block_cut_tree(&g);
        let dot = f.to_dot(&g);
        assert!(dot.contains("shape=box"));
        assert!(dot.contains("shape=circle"));
    }
}
