//! Path assembly utilities: validated concatenation of segments, avoidance
//! BFS, and the bounded rescue search.

use crate::host::CubeVertex;
use crate::subgraph::SubgraphView;
use crate::{Error, Result};
use std::collections::HashSet;

/// Concatenates path segments into one simple path in `g`. Consecutive
/// segments must either share their meeting vertex (merged) or be joined by
/// an edge of `g`. Fails on any repeated vertex, missing edge, or empty
/// segment, so a rule that assembled its pieces wrongly cannot emit an
/// invalid path.
pub(crate) fn chain_segments(
    g: &SubgraphView,
    segments: &[Vec<CubeVertex>],
) -> Result<Vec<CubeVertex>> {
    let mut out: Vec<CubeVertex> = Vec::new();
    for seg in segments {
        if seg.is_empty() {
            return Err(Error::ConstructionGap("empty path segment".into()));
        }
        if out.is_empty() {
            out.extend(seg.iter().cloned());
            continue;
        }
        let last = out.last().unwrap().clone();
        if last == seg[0] {
            out.extend(seg.iter().skip(1).cloned());
        } else if g.has_edge_labels(&last, &seg[0]) {
            out.extend(seg.iter().cloned());
        } else {
            return Err(Error::ConstructionGap(format!(
                "segments do not join: {last} to {}",
                seg[0]
            )));
        }
    }
    let mut seen = HashSet::with_capacity(out.len());
    for v in &out {
        if !seen.insert(v.clone()) {
            return Err(Error::ConstructionGap(format!(
                "assembled path repeats {v}"
            )));
        }
        if !g.contains(v) {
            return Err(Error::ConstructionGap(format!(
                "assembled path leaves the graph at {v}"
            )));
        }
    }
    for w in out.windows(2) {
        if !g.has_edge_labels(&w[0], &w[1]) {
            return Err(Error::ConstructionGap(format!(
                "assembled path misses edge {}-{}",
                w[0], w[1]
            )));
        }
    }
    Ok(out)
}

/// Reverses a list of segments (each reversed, order reversed), turning a
/// `b -> a` assembly plan into an `a -> b` one.
pub(crate) fn mirror_segments(mut segments: Vec<Vec<CubeVertex>>) -> Vec<Vec<CubeVertex>> {
    for seg in segments.iter_mut() {
        seg.reverse();
    }
    segments.reverse();
    segments
}

/// BFS path in `view` between labels, avoiding `avoid` (endpoints exempt).
pub(crate) fn view_bfs(
    view: &SubgraphView,
    from: &CubeVertex,
    to: &CubeVertex,
    avoid: &HashSet<CubeVertex>,
) -> Result<Vec<CubeVertex>> {
    let fi = view
        .index_of(from)
        .ok_or_else(|| Error::ConstructionGap(format!("{from} missing from segment view")))?;
    let ti = view
        .index_of(to)
        .ok_or_else(|| Error::ConstructionGap(format!("{to} missing from segment view")))?;
    let forbidden: Vec<bool> = (0..view.n())
        .map(|i| avoid.contains(view.vertex(i)))
        .collect();
    view.bfs_path(fi, ti, &forbidden)
        .map(|p| p.into_iter().map(|i| view.vertex(i).clone()).collect())
        .ok_or_else(|| {
            Error::ConstructionGap(format!("no connecting path {from} to {to} under avoidance"))
        })
}

/// Depth-first search for a simple `a`-`b` path of length at least `target`,
/// pruned by reachability, stopping as soon as one is found or the node
/// budget runs out.
pub(crate) fn search_path_meeting(
    g: &SubgraphView,
    a: usize,
    b: usize,
    target: usize,
    budget: u64,
) -> Option<Vec<usize>> {
    struct S<'a> {
        g: &'a SubgraphView,
        b: usize,
        target: usize,
        budget: u64,
        explored: u64,
    }
    fn reach(g: &SubgraphView, from: usize, visited: &[bool], b: usize) -> (usize, bool) {
        let mut seen = vec![false; g.n()];
        seen[from] = true;
        let mut stack = vec![from];
        let mut count = 0;
        let mut hit = false;
        while let Some(u) = stack.pop() {
            count += 1;
            if u == b {
                hit = true;
            }
            for &w in g.neighbors(u) {
                if !seen[w] && !visited[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        (count, hit)
    }
    fn dfs(st: &mut S, path: &mut Vec<usize>, visited: &mut Vec<bool>) -> bool {
        if st.explored >= st.budget {
            return false;
        }
        st.explored += 1;
        let cur = *path.last().unwrap();
        if cur == st.b {
            return path.len() - 1 >= st.target;
        }
        for &w in st.g.neighbors(cur) {
            if visited[w] {
                continue;
            }
            path.push(w);
            let (r, hit) = reach(st.g, w, visited, st.b);
            visited[w] = true;
            let ub = path.len() - 1 + r - 1;
            if (hit || w == st.b) && ub >= st.target && dfs(st, path, visited) {
                return true;
            }
            visited[w] = false;
            path.pop();
        }
        false
    }
    let mut st = S {
        g,
        b,
        target,
        budget,
        explored: 0,
    };
    let mut visited = vec![false; g.n()];
    visited[a] = true;
    let mut path = vec![a];
    if dfs(&mut st, &mut path, &mut visited) {
        Some(path)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::host::{build_host, HostSpec};

    fn full_q(n: usize) -> SubgraphView {
        let host = build_host(HostSpec::hypercube(n).unwrap()).unwrap();
        SubgraphView::induced(host, (0..1u64 << n).map(CubeVertex::Mask).collect()).unwrap()
    }

    #[test]
    fn chain_merges_and_bridges() {
        let g = full_q(2);
        let m = CubeVertex::Mask;
        // merge at shared vertex
        let p = chain_segments(&g, &[vec![m(0), m(1)], vec![m(1), m(3)]]).unwrap();
        assert_eq!(p, vec![m(0), m(1), m(3)]);
        // bridge across an edge
        let p = chain_segments(&g, &[vec![m(0), m(1)], vec![m(3), m(2)]]).unwrap();
        assert_eq!(p.len(), 4);
        // reject repeats
        assert!(chain_segments(&g, &[vec![m(0), m(1)], vec![m(1), m(0)]]).is_err());
        // reject non-edges
        assert!(chain_segments(&g, &[vec![m(0)], vec![m(3)]]).is_err());
    }

    #[test]
    fn rescue_search_finds_long_path() {
        let g = full_q(3);
        let p = search_path_meeting(&g, 0, 1, 7, 1_000_000).unwrap();
        assert_eq!(p.len(), 8);
        assert_eq!(p[0], 0);
        assert_eq!(*p.last().unwrap(), 1);
    }
}
