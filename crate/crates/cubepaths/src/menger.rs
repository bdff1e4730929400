//! Vertex-disjoint paths by max-flow with unit vertex capacities.
//!
//! The constructions repeatedly invoke 2-connectivity to route two paths that
//! share no interior vertex. This module realizes those steps: each vertex is
//! split into an in/out pair of flow nodes with capacity one (endpoints may be
//! exempted), and paths are recovered from an integral max flow found by BFS
//! augmentation.

use std::collections::VecDeque;

/// A plain adjacency-list graph for flow computations. Callers build it from
/// a view, possibly after contracting or deleting vertices.
#[derive(Clone, Debug)]
pub struct FlowGraph {
    pub adj: Vec<Vec<usize>>,
}

impl FlowGraph {
    pub fn new(n: usize) -> Self {
        FlowGraph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if !self.adj[u].contains(&v) {
            self.adj[u].push(v);
            self.adj[v].push(u);
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }
}

struct Dinic {
    to: Vec<usize>,
    cap: Vec<i32>,
    head: Vec<Vec<usize>>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            to: Vec::new(),
            cap: Vec::new(),
            head: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, u: usize, v: usize, c: i32) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    /// One BFS augmenting step; returns whether a unit of flow was pushed.
    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut prev_edge = vec![usize::MAX; self.head.len()];
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        'bfs: while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                if self.cap[e] > 0 && !seen[self.to[e]] {
                    seen[self.to[e]] = true;
                    prev_edge[self.to[e]] = e;
                    if self.to[e] == t {
                        break 'bfs;
                    }
                    queue.push_back(self.to[e]);
                }
            }
        }
        if !seen[t] {
            return false;
        }
        let mut v = t;
        while v != s {
            let e = prev_edge[v];
            self.cap[e] -= 1;
            self.cap[e ^ 1] += 1;
            v = self.to[e ^ 1];
        }
        true
    }
}

/// Finds `k` pairwise vertex-disjoint paths from the source set to the sink
/// set. Vertices listed in `reusable` (typically shared endpoints) may appear
/// on several paths; all other vertices are used at most once. Sources and
/// sinks are disjoint sets of distinct vertices; each is used by at most one
/// path unless reusable. Returns the paths (each starting at a source and
/// ending at a sink) or `None` if fewer than `k` exist.
pub fn disjoint_paths(
    g: &FlowGraph,
    sources: &[usize],
    sinks: &[usize],
    k: usize,
    reusable: &[usize],
) -> Option<Vec<Vec<usize>>> {
    let n = g.n();
    if k == 0 {
        return Some(Vec::new());
    }
    // node 2v = v_in, 2v+1 = v_out, 2n = super source, 2n+1 = super sink
    let s = 2 * n;
    let t = 2 * n + 1;
    let mut net = Dinic::new(2 * n + 2);
    let kcap = k as i32;
    for v in 0..n {
        let c = if reusable.contains(&v) { kcap } else { 1 };
        net.add(2 * v, 2 * v + 1, c);
    }
    for u in 0..n {
        for &v in &g.adj[u] {
            net.add(2 * u + 1, 2 * v, kcap);
        }
    }
    for &src in sources {
        net.add(s, 2 * src, if reusable.contains(&src) { kcap } else { 1 });
    }
    for &snk in sinks {
        net.add(2 * snk + 1, t, if reusable.contains(&snk) { kcap } else { 1 });
    }
    let mut flow = 0;
    while flow < k && net.augment(s, t) {
        flow += 1;
    }
    if flow < k {
        return None;
    }
    // trace paths along saturated edges; consume flow as we walk
    let mut used = vec![false; net.to.len()];
    let mut paths = Vec::new();
    for _ in 0..k {
        // find an unconsumed saturated source edge
        let mut start = None;
        'outer: for &e in &net.head[s] {
            if e % 2 == 0 && net.cap[e ^ 1] > 0 && !used[e] {
                used[e] = true;
                net.cap[e ^ 1] -= 1;
                start = Some(net.to[e] / 2);
                break 'outer;
            }
        }
        let mut v = start?;
        let mut path = vec![v];
        loop {
            // leave v through its out node
            let out_node = 2 * v + 1;
            // reached a sink with remaining sink flow?
            let mut sink_edge = None;
            for &e in &net.head[out_node] {
                if net.to[e] == t && e % 2 == 0 && net.cap[e ^ 1] > 0 && !used[e] {
                    sink_edge = Some(e);
                    break;
                }
            }
            if let Some(e) = sink_edge {
                used[e] = true;
                net.cap[e ^ 1] -= 1;
                break;
            }
            if path.len() > g.n() {
                return None; // trace ran into a flow cycle
            }
            let mut next = None;
            for &e in &net.head[out_node] {
                let w = net.to[e];
                if w != t && e % 2 == 0 && net.cap[e ^ 1] > 0 && !used[e] && w % 2 == 0 {
                    used[e] = true;
                    net.cap[e ^ 1] -= 1;
                    next = Some(w / 2);
                    break;
                }
            }
            let w = next?;
            path.push(w);
            v = w;
        }
        paths.push(path);
    }
    Some(paths)
}

/// Two internally-disjoint paths between `a` and `b` (sharing only their
/// endpoints), as index paths including both endpoints.
pub fn two_fan(g: &FlowGraph, a: usize, b: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let paths = disjoint_paths(g, &[a], &[b], 2, &[a, b])?;
    let mut it = paths.into_iter();
    Some((it.next()?, it.next()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> FlowGraph {
        let mut g = FlowGraph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    #[test]
    fn two_fan_on_cycle() {
        let g = cycle(6);
        let (p, q) = two_fan(&g, 0, 3).unwrap();
        assert_eq!(p.first(), Some(&0));
        assert_eq!(p.last(), Some(&3));
        assert_eq!(q.first(), Some(&0));
        assert_eq!(q.last(), Some(&3));
        // interiors disjoint
        for v in &p[1..p.len() - 1] {
            assert!(!q[1..q.len() - 1].contains(v));
        }
        assert_eq!(p.len() + q.len(), 8); // 3 + 3 edges
    }

    #[test]
    fn set_to_set_disjoint_paths() {
        // two disjoint paths from {0, 2} to {3, 5} on a 6-cycle
        let g = cycle(6);
        let paths = disjoint_paths(&g, &[0, 2], &[3, 5], 2, &[]).unwrap();
        assert_eq!(paths.len(), 2);
        let mut all: Vec<usize> = paths.iter().flatten().copied().collect();
        all.sort_unstable();
        let before = all.len();
        all.dedup();
        assert_eq!(before, all.len(), "paths must be fully disjoint");
        for p in &paths {
            assert!([0, 2].contains(p.first().unwrap()));
            assert!([3, 5].contains(p.last().unwrap()));
        }
    }

    #[test]
    fn infeasible_when_cutvertex() {
        // bowtie: 0-1-2-0, 2-3-4-2; no two disjoint paths from 0 to 4
        let mut g = FlowGraph::new(5);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(2, 0);
        g.add_edge(2, 3);
        g.add_edge(3, 4);
        g.add_edge(4, 2);
        assert!(two_fan(&g, 0, 4).is_none());
        assert!(disjoint_paths(&g, &[0], &[4], 1, &[]).is_some());
    }
}
