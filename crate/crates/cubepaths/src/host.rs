//! Host graphs: the hypercube `Q_n`, finite grid slabs of `Z^n`, discrete tori
//! `C_k^n` and Cartesian products of explicit small graphs.
//!
//! A host is implicit: it answers adjacency and neighbour queries in `O(n)`
//! without materializing its vertex set. Subgraphs of a host are represented
//! by [`crate::subgraph::SubgraphView`].

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// A vertex of a product host. Hypercube vertices are stored as 64-bit masks
/// (bit `i` = coordinate `i`, little-endian); all other hosts use explicit
/// coordinate tuples.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CubeVertex {
    Mask(u64),
    Coords(Vec<i64>),
}

impl CubeVertex {
    pub fn mask(&self) -> Option<u64> {
        match self {
            CubeVertex::Mask(m) => Some(*m),
            CubeVertex::Coords(_) => None,
        }
    }

    /// Coordinate along `axis`, regardless of representation.
    pub fn coord(&self, axis: usize) -> i64 {
        match self {
            CubeVertex::Mask(m) => ((m >> axis) & 1) as i64,
            CubeVertex::Coords(c) => c[axis],
        }
    }
}

impl fmt::Debug for CubeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CubeVertex::Mask(m) => write!(f, "{m:#b}"),
            CubeVertex::Coords(c) => write!(f, "{c:?}"),
        }
    }
}

impl fmt::Display for CubeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CubeVertex::Mask(m) => write!(f, "{m}"),
            CubeVertex::Coords(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

/// One factor of an explicit product host, on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorGraph {
    pub n: usize,
    pub edges: Vec<(u16, u16)>,
}

impl FactorGraph {
    pub fn new(n: usize, mut edges: Vec<(u16, u16)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidHost(format!(
                "product factor must have at least 2 vertices, got {n}"
            )));
        }
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            if e.0 == e.1 || e.1 as usize >= n {
                return Err(Error::InvalidHost(format!("bad factor edge {e:?}")));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(FactorGraph { n, edges })
    }

    pub fn adjacent(&self, u: i64, v: i64) -> bool {
        if u < 0 || v < 0 {
            return false;
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.edges.contains(&(a as u16, b as u16))
    }

    pub fn neighbors(&self, u: i64) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a as i64 == u {
                    Some(b as i64)
                } else if b as i64 == u {
                    Some(a as i64)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn max_degree(&self) -> u32 {
        let mut deg = vec![0u32; self.n];
        for &(a, b) in &self.edges {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// Two-coloring if the factor is bipartite, by BFS from each component's
    /// smallest vertex.
    fn two_coloring(&self) -> Option<Vec<u8>> {
        let mut color = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u as i64) {
                    let v = v as usize;
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }
}

/// The kind of product host.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HostKind {
    /// `Q_n` on `{0,1}^n`, `n <= 64`.
    Hypercube { n: usize },
    /// A finite slab of `Z^n`: inclusive bounding box per axis.
    Grid { bounds: Vec<(i64, i64)> },
    /// `C_{k_1} x ... x C_{k_n}`, each `k_i >= 3`.
    Torus { sizes: Vec<u32> },
    /// Cartesian product of explicit small graphs.
    Product { factors: Vec<FactorGraph> },
}

/// A validated host description together with the per-vertex degree loss `k`
/// its coordinate splits are allowed to cost.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostSpec {
    #[serde(flatten)]
    pub kind: HostKind,
    pub split_loss_k: u32,
}

impl HostSpec {
    pub fn new(kind: HostKind) -> Result<Self> {
        let split_loss_k = match &kind {
            HostKind::Hypercube { n } => {
                if *n == 0 || *n > 64 {
                    return Err(Error::InvalidHost(format!(
                        "hypercube dimension must be in 1..=64, got {n}"
                    )));
                }
                1
            }
            HostKind::Grid { bounds } => {
                if bounds.is_empty() {
                    return Err(Error::InvalidHost("grid needs at least one axis".into()));
                }
                for &(lo, hi) in bounds {
                    if lo > hi {
                        return Err(Error::InvalidHost(format!("empty grid axis [{lo},{hi}]")));
                    }
                }
                1
            }
            HostKind::Torus { sizes } => {
                if sizes.is_empty() {
                    return Err(Error::InvalidHost("torus needs at least one axis".into()));
                }
                if let Some(k) = sizes.iter().find(|&&k| k < 3) {
                    return Err(Error::InvalidHost(format!("torus axis k={k} < 3")));
                }
                // Cutting C_3 into two arcs costs the singleton side both its
                // cycle neighbours; every k >= 4 loses at most one.
                if sizes.iter().any(|&k| k == 3) {
                    2
                } else {
                    1
                }
            }
            HostKind::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::InvalidHost("product needs at least one factor".into()));
                }
                for f in factors {
                    if f.n < 2 {
                        return Err(Error::InvalidHost("empty product factor".into()));
                    }
                }
                factors.iter().map(|f| f.max_degree()).max().unwrap_or(0)
            }
        };
        Ok(HostSpec { kind, split_loss_k })
    }

    pub fn hypercube(n: usize) -> Result<Self> {
        Self::new(HostKind::Hypercube { n })
    }

    pub fn grid(bounds: Vec<(i64, i64)>) -> Result<Self> {
        Self::new(HostKind::Grid { bounds })
    }

    pub fn torus(sizes: Vec<u32>) -> Result<Self> {
        Self::new(HostKind::Torus { sizes })
    }

    pub fn product(factors: Vec<FactorGraph>) -> Result<Self> {
        Self::new(HostKind::Product { factors })
    }

    /// Re-validates a spec that arrived from JSON.
    pub fn validate(&self) -> Result<()> {
        let fresh = Self::new(self.kind.clone())?;
        if fresh.split_loss_k != self.split_loss_k {
            return Err(Error::InvalidHost(format!(
                "split_loss_k {} inconsistent with host kind (expected {})",
                self.split_loss_k, fresh.split_loss_k
            )));
        }
        Ok(())
    }
}

/// Handle exposing adjacency queries over a [`HostSpec`].
#[derive(Debug, PartialEq, Eq)]
pub struct HostGraph {
    spec: HostSpec,
}

/// Builds a host graph handle, validating the spec.
pub fn build_host(spec: HostSpec) -> Result<Arc<HostGraph>> {
    spec.validate()?;
    Ok(Arc::new(HostGraph { spec }))
}

impl HostGraph {
    pub fn spec(&self) -> &HostSpec {
        &self.spec
    }

    pub fn kind(&self) -> &HostKind {
        &self.spec.kind
    }

    pub fn split_loss(&self) -> u32 {
        self.spec.split_loss_k
    }

    pub fn axes(&self) -> usize {
        match &self.spec.kind {
            HostKind::Hypercube { n } => *n,
            HostKind::Grid { bounds } => bounds.len(),
            HostKind::Torus { sizes } => sizes.len(),
            HostKind::Product { factors } => factors.len(),
        }
    }

    pub fn is_hypercube(&self) -> bool {
        matches!(self.spec.kind, HostKind::Hypercube { .. })
    }

    /// Number of host vertices, if it fits in a u64.
    pub fn vertex_count(&self) -> Option<u64> {
        match &self.spec.kind {
            HostKind::Hypercube { n } => {
                if *n >= 64 {
                    None
                } else {
                    Some(1u64 << n)
                }
            }
            HostKind::Grid { bounds } => bounds
                .iter()
                .try_fold(1u64, |acc, &(lo, hi)| acc.checked_mul((hi - lo + 1) as u64)),
            HostKind::Torus { sizes } => sizes
                .iter()
                .try_fold(1u64, |acc, &k| acc.checked_mul(k as u64)),
            HostKind::Product { factors } => factors
                .iter()
                .try_fold(1u64, |acc, f| acc.checked_mul(f.n as u64)),
        }
    }

    pub fn contains(&self, v: &CubeVertex) -> bool {
        match (&self.spec.kind, v) {
            (HostKind::Hypercube { n }, CubeVertex::Mask(m)) => {
                *n == 64 || *m < (1u64 << n)
            }
            (HostKind::Grid { bounds }, CubeVertex::Coords(c)) => {
                c.len() == bounds.len()
                    && c.iter()
                        .zip(bounds)
                        .all(|(&x, &(lo, hi))| x >= lo && x <= hi)
            }
            (HostKind::Torus { sizes }, CubeVertex::Coords(c)) => {
                c.len() == sizes.len()
                    && c.iter()
                        .zip(sizes)
                        .all(|(&x, &k)| x >= 0 && x < k as i64)
            }
            (HostKind::Product { factors }, CubeVertex::Coords(c)) => {
                c.len() == factors.len()
                    && c.iter()
                        .zip(factors)
                        .all(|(&x, f)| x >= 0 && (x as usize) < f.n)
            }
            _ => false,
        }
    }

    /// Host adjacency: differ in exactly one coordinate, the difference being
    /// an edge of that coordinate's factor.
    pub fn adjacent(&self, u: &CubeVertex, v: &CubeVertex) -> bool {
        match (&self.spec.kind, u, v) {
            (HostKind::Hypercube { .. }, CubeVertex::Mask(a), CubeVertex::Mask(b)) => {
                (a ^ b).count_ones() == 1
            }
            (_, CubeVertex::Coords(a), CubeVertex::Coords(b)) => {
                if a.len() != b.len() {
                    return false;
                }
                let mut diff = None;
                for i in 0..a.len() {
                    if a[i] != b[i] {
                        if diff.is_some() {
                            return false;
                        }
                        diff = Some(i);
                    }
                }
                match diff {
                    None => false,
                    Some(i) => self.axis_values_adjacent(i, a[i], b[i]),
                }
            }
            _ => false,
        }
    }

    /// Whether two values along `axis` are adjacent in the axis factor.
    pub fn axis_values_adjacent(&self, axis: usize, x: i64, y: i64) -> bool {
        match &self.spec.kind {
            HostKind::Hypercube { .. } => (x == 0 && y == 1) || (x == 1 && y == 0),
            HostKind::Grid { .. } => (x - y).abs() == 1,
            HostKind::Torus { sizes } => {
                let k = sizes[axis] as i64;
                let d = (x - y).rem_euclid(k);
                d == 1 || d == k - 1
            }
            HostKind::Product { factors } => factors[axis].adjacent(x, y),
        }
    }

    /// Host neighbours of `v` in deterministic order (axis-major, then value).
    pub fn neighbors(&self, v: &CubeVertex) -> Vec<CubeVertex> {
        debug_assert!(self.contains(v));
        match (&self.spec.kind, v) {
            (HostKind::Hypercube { n }, CubeVertex::Mask(m)) => {
                (0..*n).map(|i| CubeVertex::Mask(m ^ (1u64 << i))).collect()
            }
            (HostKind::Grid { bounds }, CubeVertex::Coords(c)) => {
                let mut out = Vec::new();
                for (i, &(lo, hi)) in bounds.iter().enumerate() {
                    for delta in [-1i64, 1] {
                        let x = c[i] + delta;
                        if x >= lo && x <= hi {
                            let mut nc = c.clone();
                            nc[i] = x;
                            out.push(CubeVertex::Coords(nc));
                        }
                    }
                }
                out
            }
            (HostKind::Torus { sizes }, CubeVertex::Coords(c)) => {
                let mut out = Vec::new();
                for (i, &k) in sizes.iter().enumerate() {
                    let k = k as i64;
                    let mut vals = vec![(c[i] + 1).rem_euclid(k), (c[i] - 1).rem_euclid(k)];
                    vals.sort_unstable();
                    vals.dedup();
                    for x in vals {
                        if x != c[i] {
                            let mut nc = c.clone();
                            nc[i] = x;
                            out.push(CubeVertex::Coords(nc));
                        }
                    }
                }
                out
            }
            (HostKind::Product { factors }, CubeVertex::Coords(c)) => {
                let mut out = Vec::new();
                for (i, f) in factors.iter().enumerate() {
                    for x in f.neighbors(c[i]) {
                        let mut nc = c.clone();
                        nc[i] = x;
                        out.push(CubeVertex::Coords(nc));
                    }
                }
                out
            }
            _ => Vec::new(),
        }
    }

    /// Axes on which two vertices differ.
    pub fn differing_axes(&self, u: &CubeVertex, v: &CubeVertex) -> Vec<usize> {
        match (u, v) {
            (CubeVertex::Mask(a), CubeVertex::Mask(b)) => {
                let mut x = a ^ b;
                let mut out = Vec::new();
                while x != 0 {
                    out.push(x.trailing_zeros() as usize);
                    x &= x - 1;
                }
                out
            }
            (CubeVertex::Coords(a), CubeVertex::Coords(b)) => {
                (0..a.len()).filter(|&i| a[i] != b[i]).collect()
            }
            _ => Vec::new(),
        }
    }

    /// Number of coordinates on which two vertices differ (Hamming distance
    /// for the hypercube).
    pub fn hamming(&self, u: &CubeVertex, v: &CubeVertex) -> usize {
        self.differing_axes(u, v).len()
    }

    /// Bipartition class of `v`, when the host is bipartite. Path lengths
    /// between vertices of equal class are always even.
    pub fn parity(&self, v: &CubeVertex) -> Option<u8> {
        match (&self.spec.kind, v) {
            (HostKind::Hypercube { .. }, CubeVertex::Mask(m)) => {
                Some((m.count_ones() & 1) as u8)
            }
            (HostKind::Grid { .. }, CubeVertex::Coords(c)) => {
                Some((c.iter().sum::<i64>().rem_euclid(2)) as u8)
            }
            (HostKind::Torus { sizes }, CubeVertex::Coords(c)) => {
                if sizes.iter().any(|&k| k % 2 != 0) {
                    None
                } else {
                    Some((c.iter().sum::<i64>().rem_euclid(2)) as u8)
                }
            }
            (HostKind::Product { factors }, CubeVertex::Coords(c)) => {
                let mut acc = 0u8;
                for (i, f) in factors.iter().enumerate() {
                    let coloring = f.two_coloring()?;
                    acc ^= coloring[c[i] as usize];
                }
                Some(acc)
            }
            _ => None,
        }
    }

    /// All host vertices in sorted order. Errors when the host is too large
    /// to enumerate.
    pub fn enumerate_vertices(&self, limit: u64) -> Result<Vec<CubeVertex>> {
        let count = self.vertex_count().ok_or_else(|| {
            Error::InvalidArgument("host too large to enumerate".into())
        })?;
        if count > limit {
            return Err(Error::InvalidArgument(format!(
                "host has {count} vertices, enumeration limit is {limit}"
            )));
        }
        match &self.spec.kind {
            HostKind::Hypercube { .. } => Ok((0..count).map(CubeVertex::Mask).collect()),
            _ => {
                let ranges: Vec<Vec<i64>> = match &self.spec.kind {
                    HostKind::Grid { bounds } => {
                        bounds.iter().map(|&(lo, hi)| (lo..=hi).collect()).collect()
                    }
                    HostKind::Torus { sizes } => {
                        sizes.iter().map(|&k| (0..k as i64).collect()).collect()
                    }
                    HostKind::Product { factors } => {
                        factors.iter().map(|f| (0..f.n as i64).collect()).collect()
                    }
                    HostKind::Hypercube { .. } => unreachable!(),
                };
                let mut out = Vec::with_capacity(count as usize);
                let mut cur: Vec<usize> = vec![0; ranges.len()];
                loop {
                    out.push(CubeVertex::Coords(
                        cur.iter().zip(&ranges).map(|(&i, r)| r[i]).collect(),
                    ));
                    // odometer increment, last axis fastest
                    let mut axis = ranges.len();
                    loop {
                        if axis == 0 {
                            out.sort();
                            return Ok(out);
                        }
                        axis -= 1;
                        cur[axis] += 1;
                        if cur[axis] < ranges[axis].len() {
                            break;
                        }
                        cur[axis] = 0;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(m: u64) -> CubeVertex {
        CubeVertex::Mask(m)
    }

    #[test]
    fn q3_neighbors() {
        let host = build_host(HostSpec::hypercube(3).unwrap()).unwrap();
        let mut ns = host.neighbors(&mask(0));
        ns.sort();
        assert_eq!(ns, vec![mask(1), mask(2), mask(4)]);
        assert!(host.adjacent(&mask(0), &mask(4)));
        assert!(!host.adjacent(&mask(0), &mask(3)));
    }

    #[test]
    fn c4_torus_neighbors() {
        let host = build_host(HostSpec::torus(vec![4]).unwrap()).unwrap();
        let v = CubeVertex::Coords(vec![0]);
        let mut ns = host.neighbors(&v);
        ns.sort();
        assert_eq!(
            ns,
            vec![CubeVertex::Coords(vec![1]), CubeVertex::Coords(vec![3])]
        );
        assert_eq!(host.split_loss(), 1);
    }

    #[test]
    fn k2_times_k2_is_q2() {
        let k2 = FactorGraph::new(2, vec![(0, 1)]).unwrap();
        let host = build_host(HostSpec::product(vec![k2.clone(), k2]).unwrap()).unwrap();
        let verts = host.enumerate_vertices(100).unwrap();
        assert_eq!(verts.len(), 4);
        let mut edges = 0;
        for u in &verts {
            for v in &verts {
                if u < v && host.adjacent(u, v) {
                    edges += 1;
                }
            }
        }
        assert_eq!(edges, 4);
        assert_eq!(host.split_loss(), 1);
    }

    #[test]
    fn torus_c3_split_loss_two() {
        let host = build_host(HostSpec::torus(vec![3, 3]).unwrap()).unwrap();
        assert_eq!(host.split_loss(), 2);
        // C_3 axis: each value adjacent to both others
        let v = CubeVertex::Coords(vec![0, 0]);
        assert_eq!(host.neighbors(&v).len(), 4);
        assert_eq!(host.parity(&v), None);
    }

    #[test]
    fn invalid_hosts_rejected() {
        assert!(HostSpec::torus(vec![2]).is_err());
        assert!(HostSpec::hypercube(0).is_err());
        assert!(HostSpec::grid(vec![(3, 1)]).is_err());
        assert!(FactorGraph::new(1, vec![]).is_err());
    }

    #[test]
    fn grid_parity_and_hamming() {
        let host = build_host(HostSpec::grid(vec![(-1, 2), (0, 3)]).unwrap()).unwrap();
        let u = CubeVertex::Coords(vec![-1, 0]);
        let v = CubeVertex::Coords(vec![0, 0]);
        assert!(host.adjacent(&u, &v));
        assert_ne!(host.parity(&u), host.parity(&v));
        assert_eq!(host.hamming(&u, &CubeVertex::Coords(vec![2, 3])), 2);
    }
}
