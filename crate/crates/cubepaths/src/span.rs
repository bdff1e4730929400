//! Span of a vertex set: all vertices lying on some path between two elements
//! of the set (zero-length paths included, so the set is contained in its
//! span).
//!
//! Computed structurally on the block-cutvertex forest rather than by path
//! enumeration: a vertex lies on a path between `s` and `t` iff it belongs to
//! a block on the block-tree path between the nodes of `s` and `t`, so the
//! span is the set union of the blocks in the Steiner subtree of the
//! terminals, taken per component with at least two terminals.

use crate::decompose::{block_cut_tree, BlockForest};
use crate::subgraph::SubgraphView;

/// Span of the index set `s` within `view`. Returns sorted indices.
pub fn span(view: &SubgraphView, s: &[usize]) -> Vec<usize> {
    let forest = block_cut_tree(view);
    span_with_forest(view, &forest, s)
}

/// [`span`] with a precomputed block forest.
pub fn span_with_forest(view: &SubgraphView, forest: &BlockForest, s: &[usize]) -> Vec<usize> {
    let mut terminals: Vec<usize> = s.to_vec();
    terminals.sort_unstable();
    terminals.dedup();
    let mut result: Vec<bool> = vec![false; view.n()];
    for &t in &terminals {
        result[t] = true;
    }
    #[allow(unused_assignments)]
    if terminals.len() >= 2 {
        // block-cut incidence graph: nodes = blocks then vertices-as-cut-nodes
        let nb = forest.blocks.len();
        let n = view.n();
        let node_count = nb + n;
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); node_count];
        for (bi, b) in forest.blocks.iter().enumerate() {
            for &v in &b.verts {
                if forest.is_cutvertex[v] {
                    adj[bi].push(nb + v);
                    adj[nb + v].push(bi);
                }
            }
        }
        // terminal nodes: cutvertices map to their vertex node, other
        // vertices to their unique block
        let mut is_terminal = vec![false; node_count];
        for &t in &terminals {
            if forest.is_cutvertex[t] {
                is_terminal[nb + t] = true;
            } else if let Some(&b) = forest.blocks_of_vertex[t].first() {
                is_terminal[b] = true;
            }
            // isolated vertices have no block; they contribute themselves only
        }
        // prune non-terminal leaves repeatedly; what survives is the union of
        // Steiner subtrees of the terminal nodes (per tree component)
        let mut degree: Vec<usize> = adj.iter().map(|a| a.len()).collect();
        let mut alive = vec![true; node_count];
        // nodes with no incidence at all: single-block components
        for v in 0..node_count {
            if degree[v] == 0 && !is_terminal[v] {
                alive[v] = false;
            }
        }
        let mut queue: Vec<usize> = (0..node_count)
            .filter(|&v| alive[v] && degree[v] == 1 && !is_terminal[v])
            .collect();
        while let Some(v) = queue.pop() {
            if !alive[v] || degree[v] > 1 || is_terminal[v] {
                continue;
            }
            alive[v] = false;
            for &w in &adj[v] {
                if alive[w] {
                    degree[w] -= 1;
                    if degree[w] == 1 && !is_terminal[w] {
                        queue.push(w);
                    }
                }
            }
        }
        // components of the surviving forest that hold >= 2 terminal VERTICES
        // contribute their blocks. Count terminal vertices per component.
        let mut comp = vec![usize::MAX; node_count];
        let mut ncomp = 0;
        for start in 0..node_count {
            if !alive[start] || comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = ncomp;
            while let Some(u) = stack.pop() {
                for &w in &adj[u] {
                    if alive[w] && comp[w] == usize::MAX {
                        comp[w] = ncomp;
                        stack.push(w);
                    }
                }
            }
            ncomp += 1;
        }
        let mut term_verts_per_comp = vec![0usize; ncomp];
        for &t in &terminals {
            let node = if forest.is_cutvertex[t] {
                nb + t
            } else if let Some(&b) = forest.blocks_of_vertex[t].first() {
                b
            } else {
                continue;
            };
            if alive[node] {
                term_verts_per_comp[comp[node]] += 1;
            }
        }
        terminal_count_of_component = term_verts_per_comp;
        for (bi, b) in forest.blocks.iter().enumerate() {
            if alive[bi] && terminal_count_of_component[comp[bi]] >= 2 {
                for &v in &b.verts {
                    result[v] = true;
                }
            }
        }
    }
    (0..view.n()).filter(|&v| result[v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::host::{build_host, CubeVertex, HostSpec};
    use std::collections::BTreeSet;
    use std::sync::Arc;

    fn q(n: usize) -> Arc<crate::host::HostGraph> {
        build_host(HostSpec::hypercube(n).unwrap()).unwrap()
    }

    /// Brute-force oracle: enumerate every simple path between every pair of
    /// terminals and collect all visited vertices.
    fn span_brute(view: &SubgraphView, s: &[usize]) -> Vec<usize> {
        let mut result: BTreeSet<usize> = s.iter().copied().collect();
        for &from in s {
            for &to in s {
                if from >= to {
                    continue;
                }
                let mut stack = vec![vec![from]];
                while let Some(path) = stack.pop() {
                    let last = *path.last().unwrap();
                    if last == to {
                        result.extend(path.iter().copied());
                        continue;
                    }
                    for &nb in view.neighbors(last) {
                        if !path.contains(&nb) {
                            let mut p = path.clone();
                            p.push(nb);
                            stack.push(p);
                        }
                    }
                }
            }
        }
        result.into_iter().collect()
    }

    #[test]
    fn singleton_spans_itself() {
        let g = SubgraphView::induced(q(3), (0..8).map(CubeVertex::Mask).collect()).unwrap();
        assert_eq!(span(&g, &[3]), vec![3]);
    }

    #[test]
    fn path_endpoints_span_whole_path() {
        let host = q(3);
        let labels: Vec<CubeVertex> = vec![0, 1, 3, 7].into_iter().map(CubeVertex::Mask).collect();
        let g = SubgraphView::with_edges(
            host,
            labels.clone(),
            &[
                (labels[0].clone(), labels[1].clone()),
                (labels[1].clone(), labels[2].clone()),
                (labels[2].clone(), labels[3].clone()),
            ],
        )
        .unwrap();
        let a = g.index_of(&labels[0]).unwrap();
        let b = g.index_of(&labels[3]).unwrap();
        let sp = span(&g, &[a, b]);
        assert_eq!(sp.len(), 4);
    }

    #[test]
    fn theta_with_pendants_matches_brute_force() {
        // theta graph between 000 and 011 plus pendant branches
        let host = q(3);
        let v = |m: u64| CubeVertex::Mask(m);
        let verts = vec![
            v(0b000),
            v(0b001),
            v(0b010),
            v(0b011),
            v(0b100),
            v(0b101),
            v(0b111),
            v(0b110),
        ];
        let edges = vec![
            (v(0b000), v(0b001)),
            (v(0b001), v(0b011)),
            (v(0b000), v(0b010)),
            (v(0b010), v(0b011)),
            (v(0b000), v(0b100)),
            (v(0b100), v(0b101)),
            (v(0b101), v(0b111)),
            (v(0b111), v(0b011)),
            (v(0b100), v(0b110)), // pendant off the third branch
        ];
        let g = SubgraphView::with_edges(host, verts, &edges).unwrap();
        let tip = g.index_of(&v(0b110)).unwrap();
        let s1 = g.index_of(&v(0b001)).unwrap();
        let got = span(&g, &[tip, s1]);
        let want = span_brute(&g, &[tip, s1]);
        assert_eq!(got, want);
        // and for the two branch vertices: pendant stays out
        let s2 = g.index_of(&v(0b010)).unwrap();
        let got = span(&g, &[s1, s2]);
        let want = span_brute(&g, &[s1, s2]);
        assert_eq!(got, want);
        assert!(!got.contains(&tip));
    }

    #[test]
    fn monotone_and_idempotent_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = 4usize;
            let count = rng.gen_range(4..=12);
            let mut verts = BTreeSet::new();
            while verts.len() < count {
                verts.insert(rng.gen_range(0..(1u64 << n)));
            }
            let g = SubgraphView::induced(
                q(n),
                verts.iter().map(|&m| CubeVertex::Mask(m)).collect(),
            )
            .unwrap();
            let mut s: Vec<usize> = (0..g.n()).filter(|_| rng.gen_bool(0.3)).collect();
            if s.is_empty() {
                s.push(0);
            }
            let sp = span(&g, &s);
            // contains s
            assert!(s.iter().all(|x| sp.contains(x)));
            // monotone: bigger set, bigger span
            let mut t = s.clone();
            t.push(rng.gen_range(0..g.n()));
            let sp_t = span(&g, &t);
            assert!(sp.iter().all(|x| sp_t.contains(x)));
            // idempotent on its own output together with s
            let again = span(&g, &sp);
            assert_eq!(again, sp);
            // matches brute force on these small instances
            assert_eq!(sp, span_brute(&g, &s));
        }
    }
}
