/*
Copyright 2026 The cosmolab Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

use super::{LevelError, Window};
use crate::domain::{RegularDomain, Stratum};
use crate::mink::{HypPoint, MinkVec};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Grid node lifted to the level, tagged with its gradient line.
#[derive(Debug, Clone, Copy)]
pub struct MeshNode {
    pub xbar: [f64; 3],
    pub point: MinkVec,
    pub retraction: MinkVec,
    pub normal: HypPoint,
    pub stratum: Stratum,
}

/// Regular grid over a window, lifted to the exact level graph, with all
/// 8 (n = 2) or 26 (n = 3) neighbour edges.
#[derive(Debug, Clone)]
pub struct LevelMesh<'d> {
    domain: &'d RegularDomain,
    level: f64,
    window: Window,
    counts: [usize; 3],
    spacing: [f64; 3],
    nodes: Vec<MeshNode>,
}

/// Meshes the level {T = a} over `window` at spacing close to `h`, with at
/// most `max_cells` cells per side.
pub fn mesh_level<'d>(
    dom: &'d RegularDomain,
    a: f64,
    window: Window,
    h: f64,
    max_cells: usize,
) -> Result<LevelMesh<'d>, LevelError> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(LevelError::BadLevel(a));
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(LevelError::BadSpacing(h));
    }
    let n = dom.dim();
    if window.n != n {
        return Err(LevelError::EmptyMesh);
    }
    let mut counts = [1usize; 3];
    let mut spacing = [0.0; 3];
    for k in 0..n {
        let cells = ((window.side(k) / h).ceil() as usize).clamp(2, max_cells.max(2));
        counts[k] = cells + 1;
        spacing[k] = window.side(k) / cells as f64;
    }
    let total = counts[0] * counts[1] * counts[2];
    let mut nodes = Vec::with_capacity(total);
    for idx in 0..total {
        let c = unflatten(idx, &counts);
        let mut xbar = [0.0; 3];
        for k in 0..n {
            xbar[k] = window.lo[k] + c[k] as f64 * spacing[k];
        }
        let lp = dom.level_point(a, &xbar[..n]);
        nodes.push(MeshNode {
            xbar,
            point: lp.point,
            retraction: lp.retraction,
            normal: lp.normal,
            stratum: lp.stratum,
        });
    }
    Ok(LevelMesh {
        domain: dom,
        level: a,
        window,
        counts,
        spacing,
        nodes,
    })
}

fn unflatten(idx: usize, counts: &[usize; 3]) -> [usize; 3] {
    [
        idx % counts[0],
        (idx / counts[0]) % counts[1],
        idx / (counts[0] * counts[1]),
    ]
}

#[derive(Clone, Copy, PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'d> LevelMesh<'d> {
    pub fn domain(&self) -> &'d RegularDomain {
        self.domain
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn dim(&self) -> usize {
        self.window.n
    }

    pub fn nodes(&self) -> &[MeshNode] {
        &self.nodes
    }

    pub fn counts(&self) -> [usize; 3] {
        self.counts
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    /// Largest grid spacing.
    pub fn h(&self) -> f64 {
        self.spacing[..self.dim()]
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }

    pub fn index(&self, c: [usize; 3]) -> usize {
        c[0] + self.counts[0] * (c[1] + self.counts[1] * c[2])
    }

    pub fn coords(&self, idx: usize) -> [usize; 3] {
        unflatten(idx, &self.counts)
    }

    /// Whether the node lies on the window boundary.
    pub fn on_boundary(&self, idx: usize) -> bool {
        let c = self.coords(idx);
        (0..self.dim()).any(|k| c[k] == 0 || c[k] + 1 == self.counts[k])
    }

    /// Neighbours of a node with induced edge lengths.
    pub fn neighbours(&self, idx: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let c = self.coords(idx);
        let n = self.dim();
        let span = |k: usize| if k < n { -1i64..=1 } else { 0..=0 };
        let p = self.nodes[idx].point;
        let mut out = Vec::with_capacity(26);
        for dz in span(2) {
            for dy in span(1) {
                for dx in span(0) {
                    if dx == 0 && dy == 0 && dz == 0 {
                        continue;
                    }
                    let q = [c[0] as i64 + dx, c[1] as i64 + dy, c[2] as i64 + dz];
                    if (0..3).any(|k| q[k] < 0 || q[k] >= self.counts[k] as i64) {
                        continue;
                    }
                    let j = self.index([q[0] as usize, q[1] as usize, q[2] as usize]);
                    let len = (self.nodes[j].point - p).norm_sq().max(0.0).sqrt();
                    out.push((j, len));
                }
            }
        }
        out.into_iter()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        (0..self.nodes.len())
            .map(|i| self.neighbours(i).filter(|&(j, _)| j > i).count())
            .sum()
    }

    /// Grid node nearest to a base-plane point.
    pub fn nearest(&self, x: &[f64]) -> usize {
        let mut c = [0usize; 3];
        for k in 0..self.dim() {
            let f = ((x[k] - self.window.lo[k]) / self.spacing[k]).round();
            c[k] = f.clamp(0.0, (self.counts[k] - 1) as f64) as usize;
        }
        self.index(c)
    }

    /// Dijkstra shortest path between two nodes, as node indices.
    pub fn graph_path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut dist = vec![f64::INFINITY; self.nodes.len()];
        let mut prev = vec![usize::MAX; self.nodes.len()];
        let mut heap = BinaryHeap::new();
        dist[from] = 0.0;
        heap.push(Item(0.0, from));
        while let Some(Item(d, i)) = heap.pop() {
            if i == to {
                break;
            }
            if d > dist[i] {
                continue;
            }
            for (j, len) in self.neighbours(i) {
                let nd = d + len;
                if nd < dist[j] {
                    dist[j] = nd;
                    prev[j] = i;
                    heap.push(Item(nd, j));
                }
            }
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur];
            if cur == usize::MAX {
                break;
            }
            path.push(cur);
        }
        path.reverse();
        path
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamination::SpineComplex;

    fn one_edge() -> RegularDomain {
        let spine = SpineComplex::explicit(
            vec![MinkVec::new2(0.0, 0.0, 0.0), MinkVec::new2(0.0, 1.0, 0.0)],
            vec![(0, 1)],
            vec![],
        )
        .unwrap();
        RegularDomain::from_spine(spine).unwrap()
    }

    #[test]
    fn cone_mesh_is_a_hyperboloid() {
        let c = RegularDomain::cone(2);
        let w = Window::new(&[-2.0, -2.0], &[2.0, 2.0]).unwrap();
        let m = mesh_level(&c, 1.0, w, 0.1, 256).unwrap();
        assert_eq!(m.counts(), [41, 41, 1]);
        for node in m.nodes() {
            let r2 = node.xbar[0].powi(2) + node.xbar[1].powi(2);
            assert!((node.point.t - (1.0 + r2).sqrt()).abs() < 1e-14);
            let t = c.cosmological_time(&node.point).unwrap().time;
            assert!((t - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn band_nodes_are_flat() {
        let d = one_edge();
        let w = Window::new(&[0.0, -1.0], &[1.0, 1.0]).unwrap();
        let m = mesh_level(&d, 1.0, w, 0.25, 64).unwrap();
        let i = m.nearest(&[0.5, 0.0]);
        assert_eq!(m.nodes()[i].xbar[..2], [0.5, 0.0]);
        assert!((m.nodes()[i].point.t - 1.0).abs() < 1e-15);
    }

    #[test]
    fn halving_spacing_quadruples_edges() {
        let c = RegularDomain::cone(2);
        let w = Window::new(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        let e1 = mesh_level(&c, 1.0, w, 0.1, 512).unwrap().edge_count();
        let e2 = mesh_level(&c, 1.0, w, 0.05, 512).unwrap().edge_count();
        let r = e2 as f64 / e1 as f64;
        assert!((r - 4.0).abs() < 0.25, "{r}");
    }

    #[test]
    fn edges_are_spacelike() {
        let d = one_edge();
        let w = Window::new(&[-1.5, -1.5], &[2.5, 1.5]).unwrap();
        let m = mesh_level(&d, 0.3, w, 0.2, 64).unwrap();
        for i in 0..m.nodes().len() {
            for (j, _) in m.neighbours(i) {
                assert!((m.nodes()[j].point - m.nodes()[i].point).norm_sq() > 0.0);
            }
        }
    }

    #[test]
    fn three_dimensional_mesh_has_26_neighbours() {
        let c = RegularDomain::cone(3);
        let w = Window::new(&[-1.0, -1.0, -1.0], &[1.0, 1.0, 1.0]).unwrap();
        let m = mesh_level(&c, 1.0, w, 0.5, 16).unwrap();
        let centre = m.nearest(&[0.0, 0.0, 0.0]);
        assert_eq!(m.neighbours(centre).count(), 26);
        assert!(m.on_boundary(0));
        assert!(!m.on_boundary(centre));
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let c = RegularDomain::cone(2);
        let w = Window::new(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        assert!(matches!(
            mesh_level(&c, 0.0, w, 0.1, 8),
            Err(LevelError::BadLevel(_))
        ));
        assert!(matches!(
            mesh_level(&c, 1.0, w, -0.1, 8),
            Err(LevelError::BadSpacing(_))
        ));
        assert!(Window::new(&[0.0, 0.0], &[0.0, 1.0]).is_err());
    }
}
