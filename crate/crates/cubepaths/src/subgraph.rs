//! Explicit vertex/edge subgraphs of a host: the object every theorem in this
//! crate quantifies over.

use crate::host::{build_host, CubeVertex, HostGraph, HostSpec};
use crate::{Error, Result};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

/// A subgraph of a host: an ordered vertex set plus an edge set, every edge a
/// host edge between member vertices. Vertices are addressed internally by
/// index into the sorted vertex list; all public paths and records use the
/// host's [`CubeVertex`] labels.
#[derive(Clone)]
pub struct SubgraphView {
    host: Arc<HostGraph>,
    verts: Vec<CubeVertex>,
    index: HashMap<CubeVertex, usize>,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
    induced: bool,
}

impl std::fmt::Debug for SubgraphView {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SubgraphView")
            .field("n", &self.n())
            .field("m", &self.edge_count)
            .field("induced", &self.induced)
            .finish()
    }
}

impl PartialEq for SubgraphView {
    fn eq(&self, other: &Self) -> bool {
        self.host.spec() == other.host.spec()
            && self.verts == other.verts
            && self.adj == other.adj
    }
}

fn sorted_dedup(mut verts: Vec<CubeVertex>) -> Result<Vec<CubeVertex>> {
    let before = verts.len();
    verts.sort();
    verts.dedup();
    if verts.len() != before {
        return Err(Error::InvalidGraph("duplicate vertices".into()));
    }
    Ok(verts)
}

impl SubgraphView {
    /// The induced subgraph of the host on `verts`: edges are exactly the
    /// host edges inside the set.
    pub fn induced(host: Arc<HostGraph>, verts: Vec<CubeVertex>) -> Result<Self> {
        let verts = sorted_dedup(verts)?;
        for v in &verts {
            if !host.contains(v) {
                return Err(Error::InvalidGraph(format!("vertex {v} outside host")));
            }
        }
        let index: HashMap<CubeVertex, usize> = verts
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        let mut adj = vec![Vec::new(); verts.len()];
        let mut edge_count = 0;
        for (i, v) in verts.iter().enumerate() {
            for w in host.neighbors(v) {
                if let Some(&j) = index.get(&w) {
                    adj[i].push(j);
                    if i < j {
                        edge_count += 1;
                    }
                }
            }
            adj[i].sort_unstable();
            adj[i].dedup();
        }
        Ok(SubgraphView {
            host,
            verts,
            index,
            adj,
            edge_count,
            induced: true,
        })
    }

    /// A subgraph with an explicit edge list. Every edge must be a host edge
    /// between member vertices.
    pub fn with_edges(
        host: Arc<HostGraph>,
        verts: Vec<CubeVertex>,
        edges: &[(CubeVertex, CubeVertex)],
    ) -> Result<Self> {
        let verts = sorted_dedup(verts)?;
        for v in &verts {
            if !host.contains(v) {
                return Err(Error::InvalidGraph(format!("vertex {v} outside host")));
            }
        }
        let index: HashMap<CubeVertex, usize> = verts
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        let mut adj = vec![Vec::new(); verts.len()];
        let mut edge_count = 0;
        for (u, v) in edges {
            let (&i, &j) = match (index.get(u), index.get(v)) {
                (Some(i), Some(j)) => (i, j),
                _ => {
                    return Err(Error::InvalidGraph(format!(
                        "edge {u}-{v} endpoint is not a member vertex"
                    )))
                }
            };
            if !host.adjacent(u, v) {
                return Err(Error::InvalidGraph(format!("{u}-{v} is not a host edge")));
            }
            if !adj[i].contains(&j) {
                adj[i].push(j);
                adj[j].push(i);
                edge_count += 1;
            }
        }
        for row in adj.iter_mut() {
            row.sort_unstable();
        }
        let mut view = SubgraphView {
            host,
            verts,
            index,
            adj,
            edge_count,
            induced: false,
        };
        view.induced = view.compute_induced();
        Ok(view)
    }

    fn compute_induced(&self) -> bool {
        for (i, v) in self.verts.iter().enumerate() {
            for w in self.host.neighbors(v) {
                if let Some(&j) = self.index.get(&w) {
                    if !self.adj[i].contains(&j) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn host(&self) -> &Arc<HostGraph> {
        &self.host
    }

    pub fn n(&self) -> usize {
        self.verts.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_induced(&self) -> bool {
        self.induced
    }

    pub fn vertices(&self) -> &[CubeVertex] {
        &self.verts
    }

    pub fn vertex(&self, i: usize) -> &CubeVertex {
        &self.verts[i]
    }

    pub fn index_of(&self, v: &CubeVertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &CubeVertex) -> bool {
        self.index.contains_key(v)
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn neighbor_labels(&self, v: &CubeVertex) -> Vec<CubeVertex> {
        match self.index_of(v) {
            Some(i) => self.adj[i].iter().map(|&j| self.verts[j].clone()).collect(),
            None => Vec::new(),
        }
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    pub fn has_edge_labels(&self, u: &CubeVertex, v: &CubeVertex) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(i), Some(j)) => self.has_edge(i, j),
            _ => false,
        }
    }

    /// Edges as index pairs `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (i, row) in self.adj.iter().enumerate() {
            for &j in row {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The subgraph of this view on a subset of its indices, keeping the
    /// view's edges inside the subset.
    pub fn subview(&self, keep: &[usize]) -> SubgraphView {
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut old_to_new = HashMap::with_capacity(keep.len());
        for (new, &old) in keep.iter().enumerate() {
            old_to_new.insert(old, new);
        }
        let verts: Vec<CubeVertex> = keep.iter().map(|&i| self.verts[i].clone()).collect();
        let index: HashMap<CubeVertex, usize> = verts
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        let mut adj = vec![Vec::new(); keep.len()];
        let mut edge_count = 0;
        for (new, &old) in keep.iter().enumerate() {
            for &nb in &self.adj[old] {
                if let Some(&nn) = old_to_new.get(&nb) {
                    adj[new].push(nn);
                    if new < nn {
                        edge_count += 1;
                    }
                }
            }
            adj[new].sort_unstable();
        }
        let mut view = SubgraphView {
            host: self.host.clone(),
            verts,
            index,
            adj,
            edge_count,
            induced: false,
        };
        view.induced = view.compute_induced();
        view
    }

    pub fn subview_labels(&self, keep: &[CubeVertex]) -> SubgraphView {
        let idx: Vec<usize> = keep.iter().filter_map(|v| self.index_of(v)).collect();
        self.subview(&idx)
    }

    /// Indices not in `drop`.
    pub fn complement_indices(&self, drop: &[usize]) -> Vec<usize> {
        let mut flag = vec![false; self.n()];
        for &i in drop {
            flag[i] = true;
        }
        (0..self.n()).filter(|&i| !flag[i]).collect()
    }

    /// Connected components as sorted index lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// BFS shortest path between two indices avoiding `forbidden` vertices
    /// (endpoints exempt). Returns the index path including both endpoints.
    pub fn bfs_path(&self, from: usize, to: usize, forbidden: &[bool]) -> Option<Vec<usize>> {
        debug_assert!(forbidden.len() == self.n() || forbidden.is_empty());
        if from == to {
            return Some(vec![from]);
        }
        let blocked = |i: usize| !forbidden.is_empty() && forbidden[i] && i != from && i != to;
        if blocked(from) || blocked(to) {
            return None;
        }
        let mut prev = vec![usize::MAX; self.n()];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if prev[v] == usize::MAX && !blocked(v) {
                    prev[v] = u;
                    if v == to {
                        let mut path = vec![to];
                        let mut cur = to;
                        while cur != from {
                            cur = prev[cur];
                            path.push(cur);
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(v);
                }
            }
        }
        None
    }

    /// 2-connectivity: connected, no cutvertex, at least 3 vertices.
    pub fn is_biconnected(&self) -> bool {
        if self.n() < 3 || !self.is_connected() {
            return false;
        }
        crate::decompose::block_cut_tree(self).cutvertices.is_empty()
    }

    /// Exact degree statistics. Empty graph reports zero min and average.
    pub fn degree_stats(&self) -> DegreeStats {
        let degrees: Vec<(CubeVertex, usize)> = self
            .verts
            .iter()
            .cloned()
            .zip(self.adj.iter().map(|a| a.len()))
            .collect();
        let min_degree = degrees.iter().map(|(_, d)| *d).min().unwrap_or(0);
        let average = if self.n() == 0 {
            Ratio::new(0, 1)
        } else {
            Ratio::new(2 * self.edge_count as i64, self.n() as i64)
        };
        DegreeStats {
            min_degree,
            average,
            degrees,
        }
    }

    /// Minimum degree over vertices other than the given excluded ones.
    pub fn min_degree_excluding(&self, excluded: &[usize]) -> Option<usize> {
        (0..self.n())
            .filter(|i| !excluded.contains(i))
            .map(|i| self.degree(i))
            .min()
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson::from_view(self)
    }
}

/// Exact degree statistics of a [`SubgraphView`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeStats {
    pub min_degree: usize,
    /// Average degree as an exact rational.
    pub average: Ratio<i64>,
    pub degrees: Vec<(CubeVertex, usize)>,
}

/// Builds the induced subgraph of a host on a vertex set.
pub fn induced_subgraph(host: Arc<HostGraph>, verts: Vec<CubeVertex>) -> Result<SubgraphView> {
    SubgraphView::induced(host, verts)
}

/// JSON wire format for graphs: hypercube vertices serialize as unsigned
/// integers (bit `i` = coordinate `i`), other hosts as coordinate tuples.
/// `"induced": true` stands in for an explicit edge list.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub host: HostSpec,
    pub vertices: Vec<CubeVertex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(CubeVertex, CubeVertex)>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub induced: bool,
}

impl GraphJson {
    pub fn from_view(view: &SubgraphView) -> Self {
        if view.is_induced() {
            GraphJson {
                host: view.host().spec().clone(),
                vertices: view.vertices().to_vec(),
                edges: None,
                induced: true,
            }
        } else {
            let edges = view
                .edges()
                .into_iter()
                .map(|(i, j)| (view.vertex(i).clone(), view.vertex(j).clone()))
                .collect();
            GraphJson {
                host: view.host().spec().clone(),
                vertices: view.vertices().to_vec(),
                edges: Some(edges),
                induced: false,
            }
        }
    }

    pub fn into_view(self) -> Result<SubgraphView> {
        let host = build_host(self.host)?;
        match (self.edges, self.induced) {
            (None, _) => SubgraphView::induced(host, self.vertices),
            (Some(edges), false) => SubgraphView::with_edges(host, self.vertices, &edges),
            (Some(_), true) => Err(Error::InvalidGraph(
                "graph JSON cannot carry both edges and induced=true".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::host::HostSpec;

    fn q(n: usize) -> Arc<HostGraph> {
        build_host(HostSpec::hypercube(n).unwrap()).unwrap()
    }

    fn masks(ms: &[u64]) -> Vec<CubeVertex> {
        ms.iter().map(|&m| CubeVertex::Mask(m)).collect()
    }

    #[test]
    fn induced_two_subcube_is_four_cycle() {
        let g = SubgraphView::induced(q(3), masks(&[0b000, 0b001, 0b011, 0b010])).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 4);
        assert!(g.is_induced());
        assert!((0..4).all(|i| g.degree(i) == 2));
    }

    #[test]
    fn antipodal_pair_has_no_edges() {
        let g = SubgraphView::induced(q(2), masks(&[0b00, 0b11])).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn full_q4_edge_count_by_enumeration() {
        // independent count: n * 2^(n-1) host edges, checked pairwise
        let host = q(4);
        let verts = host.enumerate_vertices(100).unwrap();
        let mut brute = 0;
        for u in &verts {
            for v in &verts {
                if u < v && host.adjacent(u, v) {
                    brute += 1;
                }
            }
        }
        assert_eq!(brute, 4 * (1 << 3));
        let g = SubgraphView::induced(host, verts).unwrap();
        assert_eq!(g.edge_count(), 32);
    }

    #[test]
    fn degree_stats_q3_and_c4() {
        let g = SubgraphView::induced(q(3), (0..8).map(CubeVertex::Mask).collect()).unwrap();
        let stats = g.degree_stats();
        assert_eq!(stats.min_degree, 3);
        assert_eq!(stats.average, Ratio::new(3, 1));

        let c4 = SubgraphView::induced(q(2), masks(&[0, 1, 2, 3])).unwrap();
        let stats = c4.degree_stats();
        assert_eq!(stats.min_degree, 2);
        assert_eq!(stats.average, Ratio::new(2, 1));
    }

    #[test]
    fn empty_graph_stats_are_zero() {
        let g = SubgraphView::induced(q(2), vec![]).unwrap();
        let stats = g.degree_stats();
        assert_eq!(stats.min_degree, 0);
        assert_eq!(stats.average, Ratio::new(0, 1));
    }

    #[test]
    fn explicit_edges_validated() {
        let host = q(2);
        // 0-3 is not a host edge
        let err = SubgraphView::with_edges(
            host.clone(),
            masks(&[0, 3]),
            &[(CubeVertex::Mask(0), CubeVertex::Mask(3))],
        );
        assert!(err.is_err());
        let ok = SubgraphView::with_edges(
            host,
            masks(&[0, 1, 3]),
            &[(CubeVertex::Mask(0), CubeVertex::Mask(1))],
        )
        .unwrap();
        assert_eq!(ok.edge_count(), 1);
        assert!(!ok.is_induced());
    }

    #[test]
    fn duplicate_vertices_rejected() {
        assert!(SubgraphView::induced(q(2), masks(&[0, 0, 1])).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = SubgraphView::with_edges(
            q(3),
            masks(&[0, 1, 3, 2]),
            &[
                (CubeVertex::Mask(0), CubeVertex::Mask(1)),
                (CubeVertex::Mask(1), CubeVertex::Mask(3)),
                (CubeVertex::Mask(3), CubeVertex::Mask(2)),
            ],
        )
        .unwrap();
        let js = serde_json::to_string(&g.to_json()).unwrap();
        let back: GraphJson = serde_json::from_str(&js).unwrap();
        let h = back.into_view().unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn components_and_bfs() {
        let g = SubgraphView::induced(q(3), masks(&[0, 1, 3, 2, 7])).unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 2);
        let a = g.index_of(&CubeVertex::Mask(0)).unwrap();
        let b = g.index_of(&CubeVertex::Mask(3)).unwrap();
        let p = g.bfs_path(a, b, &[]).unwrap();
        assert_eq!(p.len(), 3);
    }
}
