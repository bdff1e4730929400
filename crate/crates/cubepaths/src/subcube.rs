//! Subcube detection and direct path constructions inside subcubes.
//!
//! A `d`-dimensional subcube of a host is a vertex set on which `d` "free"
//! axes each take two adjacent values, all `2^d` combinations occur, every
//! other axis is fixed, and all induced edges are present. Between vertices of
//! odd Hamming distance a subcube has a Hamiltonian path (length `2^d - 1`);
//! between vertices of even distance the best possible is `2^d - 2`, and both
//! are built here by recursive halving.

use crate::host::CubeVertex;
use crate::subgraph::SubgraphView;

/// Witness that a view is a subcube: the free axes with their value pairs and
/// the base vertex (low value on every free axis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubcubeWitness {
    pub dim: usize,
    /// Free axes with their (low, high) values, sorted by axis.
    pub axes: Vec<(usize, (i64, i64))>,
    pub base: CubeVertex,
}

impl SubcubeWitness {
    /// Pattern of a member vertex: bit `t` set iff the vertex takes the high
    /// value on the `t`-th free axis.
    pub fn pattern_of(&self, v: &CubeVertex) -> Option<u64> {
        let mut pat = 0u64;
        for (t, &(axis, (lo, hi))) in self.axes.iter().enumerate() {
            let x = v.coord(axis);
            if x == hi {
                pat |= 1 << t;
            } else if x != lo {
                return None;
            }
        }
        Some(pat)
    }

    /// Member vertex for a pattern.
    pub fn vertex_of(&self, pat: u64) -> CubeVertex {
        match &self.base {
            CubeVertex::Mask(m) => {
                let mut out = *m;
                for (t, &(axis, (_, _))) in self.axes.iter().enumerate() {
                    out &= !(1u64 << axis);
                    if pat >> t & 1 == 1 {
                        out |= 1 << axis;
                    }
                }
                CubeVertex::Mask(out)
            }
            CubeVertex::Coords(c) => {
                let mut out = c.clone();
                for (t, &(axis, (lo, hi))) in self.axes.iter().enumerate() {
                    out[axis] = if pat >> t & 1 == 1 { hi } else { lo };
                }
                CubeVertex::Coords(out)
            }
        }
    }

    /// Hamming distance between two member vertices (number of free axes on
    /// which they differ).
    pub fn distance(&self, u: &CubeVertex, v: &CubeVertex) -> Option<u32> {
        Some((self.pattern_of(u)? ^ self.pattern_of(v)?).count_ones())
    }
}

/// Tests whether the view is a full subcube and returns the witness. Absence
/// of a witness is reported as `None`.
pub fn is_subcube(g: &SubgraphView) -> Option<SubcubeWitness> {
    let n = g.n();
    if n == 0 || !n.is_power_of_two() {
        return None;
    }
    let host = g.host();
    let axes_total = host.axes();
    let mut free: Vec<(usize, (i64, i64))> = Vec::new();
    for axis in 0..axes_total {
        let mut values: Vec<i64> = g.vertices().iter().map(|v| v.coord(axis)).collect();
        values.sort_unstable();
        values.dedup();
        match values.len() {
            1 => {}
            2 => {
                if !host.axis_values_adjacent(axis, values[0], values[1]) {
                    return None;
                }
                free.push((axis, (values[0], values[1])));
            }
            _ => return None,
        }
    }
    let dim = free.len();
    if n != 1usize << dim {
        return None;
    }
    // the sorted order puts the all-low vertex first, so it is the base
    let witness = SubcubeWitness {
        dim,
        axes: free,
        base: g.vertex(0).clone(),
    };
    if witness.pattern_of(&witness.base) != Some(0) {
        return None;
    }
    let mut seen = vec![false; n];
    for v in g.vertices() {
        match witness.pattern_of(v) {
            Some(p) if !seen[p as usize] => seen[p as usize] = true,
            _ => return None,
        }
    }
    // all induced edges must be present
    for (t, _) in witness.axes.iter().enumerate() {
        for pat in 0..(n as u64) {
            if pat >> t & 1 == 0 {
                let u = witness.vertex_of(pat);
                let v = witness.vertex_of(pat | (1 << t));
                if !g.has_edge_labels(&u, &v) {
                    return None;
                }
            }
        }
    }
    Some(witness)
}

/// Like [`is_subcube`], but tolerates the absence of the single edge
/// `a`–`b` (the two vertices must then be at distance 1). Returns the witness
/// and whether that edge was missing. Used by the constructor: a cube missing
/// only the `a`–`b` edge still carries a spanning `a`–`b` path.
pub fn is_subcube_except_ab(
    g: &SubgraphView,
    a: &CubeVertex,
    b: &CubeVertex,
) -> Option<(SubcubeWitness, bool)> {
    if let Some(w) = is_subcube(g) {
        return Some((w, false));
    }
    if !g.host().adjacent(a, b) || g.has_edge_labels(a, b) {
        return None;
    }
    // try again with the missing edge patched in mentally: recheck all edges
    let n = g.n();
    if n == 0 || !n.is_power_of_two() {
        return None;
    }
    let host = g.host().clone();
    let patched = SubgraphView::induced(host, g.vertices().to_vec()).ok()?;
    if patched.edge_count() != g.edge_count() + 1 {
        return None;
    }
    is_subcube(&patched).map(|w| (w, true))
}

/// Hamiltonian pattern path in a `dim`-cube from `pa` to `pb`, which must be
/// at odd Hamming distance. `axes` indexes the active free-axis positions.
fn ham_path_patterns(axes: &[usize], pa: u64, pb: u64) -> Vec<u64> {
    debug_assert!((pa ^ pb).count_ones() % 2 == 1);
    if axes.len() == 1 {
        return vec![pa, pb];
    }
    // split on the first axis where they differ
    let split = *axes
        .iter()
        .find(|&&t| (pa ^ pb) >> t & 1 == 1)
        .expect("endpoints differ");
    let rest: Vec<usize> = axes.iter().copied().filter(|&t| t != split).collect();
    // intermediate endpoint u on a's side at odd distance from pa
    let flip = rest[0];
    let u = pa ^ (1 << flip);
    let mut first = ham_path_patterns(&rest, pa, u);
    let u2 = u ^ (1 << split);
    let second = ham_path_patterns(&rest, u2, pb);
    first.extend(second);
    first
}

/// Pattern path of length `2^dim - 2` from `pa` to `pb` at even (nonzero)
/// Hamming distance, covering all but one vertex.
fn near_ham_path_patterns(axes: &[usize], pa: u64, pb: u64) -> Vec<u64> {
    let dist = (pa ^ pb).count_ones();
    debug_assert!(dist % 2 == 0 && dist > 0);
    if axes.len() == 2 {
        // opposite corners of a 4-cycle: skip one midpoint
        let mid = pa ^ (1 << axes[0]);
        debug_assert_eq!(mid ^ (1 << axes[1]), pb);
        return vec![pa, mid, pb];
    }
    let split = *axes
        .iter()
        .find(|&&t| (pa ^ pb) >> t & 1 == 1)
        .expect("endpoints differ");
    let rest: Vec<usize> = axes.iter().copied().filter(|&t| t != split).collect();
    // pick u in a's half, odd distance from pa, with u^split != pb
    let mut u = pa ^ (1 << rest[0]);
    if u ^ (1 << split) == pb {
        u = pa ^ (1 << rest[1]);
    }
    let mut first = ham_path_patterns(&rest, pa, u);
    let second = near_ham_path_patterns(&rest, u ^ (1 << split), pb);
    first.extend(second);
    first
}

/// Longest `a`–`b` path inside a subcube: Hamiltonian (length `2^d - 1`) when
/// the endpoints are at odd Hamming distance, all-but-one (length `2^d - 2`)
/// when even. For `dim >= 2` the returned path never uses the edge `a`–`b`,
/// so it is valid in a cube missing exactly that edge.
pub fn subcube_path(w: &SubcubeWitness, a: &CubeVertex, b: &CubeVertex) -> Option<Vec<CubeVertex>> {
    let pa = w.pattern_of(a)?;
    let pb = w.pattern_of(b)?;
    if pa == pb {
        return None;
    }
    let axes: Vec<usize> = (0..w.dim).collect();
    let pats = if (pa ^ pb).count_ones() % 2 == 1 {
        ham_path_patterns(&axes, pa, pb)
    } else {
        near_ham_path_patterns(&axes, pa, pb)
    };
    Some(pats.into_iter().map(|p| w.vertex_of(p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::host::{build_host, HostSpec};
    use std::sync::Arc;

    fn q(n: usize) -> Arc<crate::host::HostGraph> {
        build_host(HostSpec::hypercube(n).unwrap()).unwrap()
    }

    fn masks(ms: &[u64]) -> Vec<CubeVertex> {
        ms.iter().map(|&m| CubeVertex::Mask(m)).collect()
    }

    #[test]
    fn two_face_of_q3_is_subcube() {
        let g = SubgraphView::induced(q(3), masks(&[0b000, 0b001, 0b011, 0b010])).unwrap();
        let w = is_subcube(&g).unwrap();
        assert_eq!(w.dim, 2);
        assert_eq!(
            w.axes.iter().map(|&(a, _)| a).collect::<Vec<_>>(),
            vec![0, 1]
        );
        assert_eq!(w.base, CubeVertex::Mask(0));
    }

    #[test]
    fn missing_edge_is_not_subcube() {
        let host = q(3);
        let verts = masks(&[0b000, 0b001, 0b011, 0b010]);
        let edges = vec![
            (CubeVertex::Mask(0b001), CubeVertex::Mask(0b011)),
            (CubeVertex::Mask(0b011), CubeVertex::Mask(0b010)),
            (CubeVertex::Mask(0b010), CubeVertex::Mask(0b000)),
        ];
        let g = SubgraphView::with_edges(host, verts, &edges).unwrap();
        assert!(is_subcube(&g).is_none());
    }

    #[test]
    fn seven_vertices_is_not_subcube() {
        let g = SubgraphView::induced(q(3), (0..7).map(CubeVertex::Mask).collect()).unwrap();
        assert!(is_subcube(&g).is_none());
    }

    #[test]
    fn ham_paths_have_right_lengths() {
        for dim in 1..=6usize {
            let g = SubgraphView::induced(q(dim), (0..1u64 << dim).map(CubeVertex::Mask).collect())
                .unwrap();
            let w = is_subcube(&g).unwrap();
            assert_eq!(w.dim, dim);
            for b in 1..(1u64 << dim) {
                let a = CubeVertex::Mask(0);
                let bv = CubeVertex::Mask(b);
                let path = subcube_path(&w, &a, &bv).unwrap();
                let expected = if b.count_ones() % 2 == 1 {
                    (1usize << dim) - 1
                } else {
                    (1usize << dim) - 2
                };
                assert_eq!(path.len() - 1, expected, "dim {dim} target {b:b}");
                // simple and host-adjacent steps
                let mut seen = std::collections::HashSet::new();
                for v in &path {
                    assert!(seen.insert(v.clone()));
                }
                for win in path.windows(2) {
                    assert!(g.host().adjacent(&win[0], &win[1]));
                }
                assert_eq!(path[0], a);
                assert_eq!(path[path.len() - 1], bv);
                // never uses the a-b edge directly when dim >= 2
                if dim >= 2 && g.host().adjacent(&a, &bv) {
                    for win in path.windows(2) {
                        assert!(!(win[0] == a && win[1] == bv));
                        assert!(!(win[0] == bv && win[1] == a));
                    }
                }
            }
        }
    }

    #[test]
    fn subcube_in_torus_detected() {
        let host = build_host(HostSpec::torus(vec![4, 4]).unwrap()).unwrap();
        let verts = vec![
            CubeVertex::Coords(vec![3, 0]),
            CubeVertex::Coords(vec![0, 0]),
            CubeVertex::Coords(vec![3, 1]),
            CubeVertex::Coords(vec![0, 1]),
        ];
        let g = SubgraphView::induced(host, verts).unwrap();
        let w = is_subcube(&g);
        // wraparound pair (3,0) is adjacent in C_4
        assert!(w.is_some());
        assert_eq!(w.unwrap().dim, 2);
    }

    #[test]
    fn except_ab_variant() {
        // Q_2 minus edge 00-01
        let host = q(2);
        let edges = vec![
            (CubeVertex::Mask(0b01), CubeVertex::Mask(0b11)),
            (CubeVertex::Mask(0b11), CubeVertex::Mask(0b10)),
            (CubeVertex::Mask(0b10), CubeVertex::Mask(0b00)),
        ];
        let g = SubgraphView::with_edges(host, masks(&[0, 1, 2, 3]), &edges).unwrap();
        let (w, missing) =
            is_subcube_except_ab(&g, &CubeVertex::Mask(0), &CubeVertex::Mask(1)).unwrap();
        assert!(missing);
        assert_eq!(w.dim, 2);
        // but not if a different edge is missing
        assert!(is_subcube_except_ab(&g, &CubeVertex::Mask(0), &CubeVertex::Mask(2)).is_none());
    }

    #[test]
    fn random_embeddings_detected() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in 2..=8usize {
            for d in 0..=n.min(4) {
                // random base and axis set
                let mut axes: Vec<usize> = (0..n).collect();
                for i in (1..axes.len()).rev() {
                    let j = rng.gen_range(0..=i);
                    axes.swap(i, j);
                }
                let axes: Vec<usize> = axes.into_iter().take(d).collect();
                let base: u64 = rng.gen_range(0..(1u64 << n))
                    & !axes.iter().fold(0u64, |m, &a| m | (1 << a));
                let mut verts = Vec::new();
                for pat in 0..(1u64 << d) {
                    let mut v = base;
                    for (t, &a) in axes.iter().enumerate() {
                        if pat >> t & 1 == 1 {
                            v |= 1 << a;
                        }
                    }
                    verts.push(CubeVertex::Mask(v));
                }
                let g = SubgraphView::induced(q(n), verts).unwrap();
                let w = is_subcube(&g).unwrap();
                assert_eq!(w.dim, d, "n={n} d={d}");
            }
        }
    }
}
