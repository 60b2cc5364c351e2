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

//! Finite measured laminations of the hyperbolic disk and the spacelike
//! spines they generate in ℝ^{1,2}.
//!
//! Leaves are complete geodesics, given by their two ideal endpoints on the
//! boundary circle. In the Klein model they are straight chords, and in the
//! hyperboloid model each leaf is cut out by a timelike plane whose unit
//! spacelike normal `u` splits ℍ² into the two half-planes ⟨u,·⟩ ≥ 0 and
//! ⟨u,·⟩ < 0.
//!
//! The complementary regions of finitely many disjoint leaves form a tree
//! (one edge per leaf). Embedding that tree with the edge across leaf j
//! realized as the translation wⱼ·uⱼ, with uⱼ oriented away from the base
//! region, gives the spine whose future is the regular domain.

use crate::mink::MinkVec;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::f64::consts::TAU;
use thiserror::Error;

/// Two endpoints closer than this (mod 2π) are considered equal.
pub const ENDPOINT_TOL: f64 = 1e-12;

/// Samples per edge and per face used by the achronality gate.
pub const ACHRONALITY_SAMPLES: usize = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LaminationError {
    #[error("leaf {0} has coincident endpoints")]
    DegenerateLeaf(usize),
    #[error("leaf {0} has non-positive or non-finite weight {1}")]
    BadWeight(usize, f64),
    #[error("leaves {0} and {1} cross")]
    CrossingLeaves(usize, usize),
    #[error("unknown region id {0}")]
    UnknownRegion(usize),
    #[error("spine points {0} and {1} are timelike related")]
    AchronalityViolation(usize, usize),
    #[error("spine edge {0} is not spacelike")]
    NonSpacelikeEdge(usize),
    #[error("invalid spine: {0}")]
    InvalidSpine(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Leaf {
    /// Ideal endpoints, radians.
    pub endpoints: (f64, f64),
    pub weight: f64,
}

impl Leaf {
    pub fn new(theta1: f64, theta2: f64, weight: f64) -> Self {
        Self {
            endpoints: (theta1, theta2),
            weight,
        }
    }

    fn sorted_angles(&self) -> (f64, f64) {
        let a = self.endpoints.0.rem_euclid(TAU);
        let b = self.endpoints.1.rem_euclid(TAU);
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    fn ideal_points(&self) -> ([f64; 2], [f64; 2]) {
        let (a, b) = self.endpoints;
        ([a.cos(), a.sin()], [b.cos(), b.sin()])
    }

    /// Canonical unit spacelike normal of the leaf plane.
    ///
    /// The plane is spanned by the null vectors (1, e^{iθ₁}) and (1, e^{iθ₂});
    /// its Lorentz normal is J·(ℓ₁ × ℓ₂) with J = diag(−1, 1, 1).
    pub fn normal(&self) -> MinkVec {
        let (p, q) = self.ideal_points();
        let l1 = [1.0, p[0], p[1]];
        let l2 = [1.0, q[0], q[1]];
        let c = [
            l1[1] * l2[2] - l1[2] * l2[1],
            l1[2] * l2[0] - l1[0] * l2[2],
            l1[0] * l2[1] - l1[1] * l2[0],
        ];
        let u = MinkVec::new2(-c[0], c[1], c[2]);
        u * (1.0 / u.norm_sq().sqrt())
    }

    /// Side of a Klein-model point: `true` iff ⟨u, (1, k)⟩ ≥ 0.
    pub fn side(&self, k: [f64; 2]) -> bool {
        self.normal().dot(&MinkVec::new2(1.0, k[0], k[1])) >= 0.0
    }

    fn same_support(&self, other: &Leaf) -> bool {
        let (a1, b1) = self.sorted_angles();
        let (a2, b2) = other.sorted_angles();
        angle_eq(a1, a2) && angle_eq(b1, b2)
    }
}

fn angle_eq(a: f64, b: f64) -> bool {
    let d = (a - b).rem_euclid(TAU);
    d < ENDPOINT_TOL || TAU - d < ENDPOINT_TOL
}

/// Finitely many disjoint weighted geodesics. Coincident leaves are merged
/// with their weights added.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasuredLamination {
    leaves: Vec<Leaf>,
}

impl MeasuredLamination {
    pub fn new(leaves: Vec<Leaf>) -> Result<Self, LaminationError> {
        let mut merged: Vec<Leaf> = Vec::with_capacity(leaves.len());
        for (i, leaf) in leaves.into_iter().enumerate() {
            if !(leaf.weight > 0.0) || !leaf.weight.is_finite() {
                return Err(LaminationError::BadWeight(i, leaf.weight));
            }
            let (a, b) = leaf.sorted_angles();
            if !a.is_finite() || !b.is_finite() || angle_eq(a, b) {
                return Err(LaminationError::DegenerateLeaf(i));
            }
            match merged.iter_mut().find(|m| m.same_support(&leaf)) {
                Some(m) => m.weight += leaf.weight,
                None => merged.push(leaf),
            }
        }
        Ok(Self { leaves: merged })
    }

    pub fn empty() -> Self {
        Self { leaves: Vec::new() }
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }
}

/// Endpoint pairs interleave on the circle.
fn leaves_cross(a: &Leaf, b: &Leaf) -> bool {
    let (a1, a2) = a.sorted_angles();
    let (b1, b2) = b.sorted_angles();
    let strictly_inside = |x: f64| x > a1 + ENDPOINT_TOL && x < a2 - ENDPOINT_TOL;
    let on_end = |x: f64| angle_eq(x, a1) || angle_eq(x, a2);
    if on_end(b1) || on_end(b2) {
        return false;
    }
    strictly_inside(b1) != strictly_inside(b2)
}

/// Smallest angular gap between endpoints of a sampled lamination.
pub const RANDOM_ENDPOINT_GAP: f64 = 0.25;

/// `count` disjoint leaves with weights uniform in `weights`.
///
/// Endpoints are uniform on the circle, redrawn when a chord would cross an
/// earlier leaf or come within [`RANDOM_ENDPOINT_GAP`] of an endpoint.
pub fn random_lamination<R: Rng>(
    rng: &mut R,
    count: usize,
    weights: (f64, f64),
) -> Result<MeasuredLamination, LaminationError> {
    let mut leaves: Vec<Leaf> = Vec::with_capacity(count);
    let mut ends: Vec<f64> = Vec::with_capacity(2 * count);
    let far = |x: f64, ends: &[f64]| {
        ends.iter().all(|&e| {
            let d = (x - e).rem_euclid(TAU);
            d.min(TAU - d) >= RANDOM_ENDPOINT_GAP
        })
    };
    let mut draws = 0;
    while leaves.len() < count {
        draws += 1;
        if draws > 10_000 {
            return Err(LaminationError::InvalidSpine(format!(
                "could not place {count} disjoint leaves"
            )));
        }
        let a = rng.gen_range(0.0..TAU);
        let b = rng.gen_range(0.0..TAU);
        let gap = (a - b).rem_euclid(TAU);
        if gap.min(TAU - gap) < RANDOM_ENDPOINT_GAP || !far(a, &ends) || !far(b, &ends) {
            continue;
        }
        let w = rng.gen_range(weights.0..=weights.1);
        let leaf = Leaf::new(a, b, w);
        if leaves.iter().any(|l| leaves_cross(l, &leaf)) {
            continue;
        }
        ends.extend([a, b]);
        leaves.push(leaf);
    }
    MeasuredLamination::new(leaves)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub id: usize,
    /// Side of every leaf, in leaf order.
    pub sides: Vec<bool>,
    /// An interior point of the region in the Klein model.
    pub representative: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adjacency {
    pub a: usize,
    pub b: usize,
    pub leaf: usize,
}

/// Complementary regions of a lamination and their adjacency tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionGraph {
    pub regions: Vec<Region>,
    pub adjacency: Vec<Adjacency>,
    pub base_region: usize,
}

impl RegionGraph {
    pub fn with_base(mut self, base: usize) -> Result<Self, LaminationError> {
        if base >= self.regions.len() {
            return Err(LaminationError::UnknownRegion(base));
        }
        self.base_region = base;
        Ok(self)
    }

    /// Region containing a Klein-model point (points on a leaf count as the
    /// `true` side).
    pub fn region_of(&self, lam: &MeasuredLamination, k: [f64; 2]) -> Option<usize> {
        let sides: Vec<bool> = lam.leaves().iter().map(|l| l.side(k)).collect();
        self.regions.iter().position(|r| r.sides == sides)
    }

    fn neighbors(&self, r: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().filter_map(move |e| {
            if e.a == r {
                Some((e.b, e.leaf))
            } else if e.b == r {
                Some((e.a, e.leaf))
            } else {
                None
            }
        })
    }

    /// Leaves crossed on the unique path from `from` to `to`.
    pub fn path_leaves(&self, from: usize, to: usize) -> Result<Vec<usize>, LaminationError> {
        let n = self.regions.len();
        for r in [from, to] {
            if r >= n {
                return Err(LaminationError::UnknownRegion(r));
            }
        }
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(r) = queue.pop_front() {
            if r == to {
                break;
            }
            for (s, leaf) in self.neighbors(r) {
                if !seen[s] {
                    seen[s] = true;
                    parent[s] = Some((r, leaf));
                    queue.push_back(s);
                }
            }
        }
        let mut leaves = Vec::new();
        let mut cur = to;
        while cur != from {
            let (p, leaf) = parent[cur].ok_or(LaminationError::UnknownRegion(to))?;
            leaves.push(leaf);
            cur = p;
        }
        leaves.reverse();
        Ok(leaves)
    }
}

fn chord_midpoint(leaf: &Leaf) -> [f64; 2] {
    let (p, q) = leaf.ideal_points();
    [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0]
}

fn point_segment_distance(z: [f64; 2], p: [f64; 2], q: [f64; 2]) -> f64 {
    let d = [q[0] - p[0], q[1] - p[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let s = (((z[0] - p[0]) * d[0] + (z[1] - p[1]) * d[1]) / len2).clamp(0.0, 1.0);
    let c = [p[0] + s * d[0] - z[0], p[1] + s * d[1] - z[1]];
    (c[0] * c[0] + c[1] * c[1]).sqrt()
}

/// Decomposes the disk into complementary regions.
///
/// Region ids are canonical: regions are sorted by their side vectors. The
/// base region is the one containing the disk center.
pub fn validate(lam: &MeasuredLamination) -> Result<RegionGraph, LaminationError> {
    let leaves = lam.leaves();
    for i in 0..leaves.len() {
        for j in i + 1..leaves.len() {
            if leaves_cross(&leaves[i], &leaves[j]) {
                return Err(LaminationError::CrossingLeaves(i, j));
            }
        }
    }
    if leaves.is_empty() {
        return Ok(RegionGraph {
            regions: vec![Region {
                id: 0,
                sides: Vec::new(),
                representative: [0.0, 0.0],
            }],
            adjacency: Vec::new(),
            base_region: 0,
        });
    }

    // Each leaf borders exactly two regions; probe them from just off the
    // chord midpoint.
    let mut samples: Vec<(Vec<bool>, [f64; 2], usize)> = Vec::new();
    for (j, leaf) in leaves.iter().enumerate() {
        let m = chord_midpoint(leaf);
        let u = leaf.normal();
        // Euclidean direction in the Klein plane in which ⟨u,(1,k)⟩ grows.
        let g = [u.spatial()[0], u.spatial()[1]];
        let gn = (g[0] * g[0] + g[1] * g[1]).sqrt();
        let nhat = [g[0] / gn, g[1] / gn];
        let clearance = leaves
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .map(|(_, other)| {
                let (p, q) = other.ideal_points();
                point_segment_distance(m, p, q)
            })
            .fold(f64::INFINITY, f64::min);
        let mdotn = m[0] * nhat[0] + m[1] * nhat[1];
        let rest2 = 1.0 - (m[0] * m[0] + m[1] * m[1]);
        for side in [false, true] {
            let dir = if side { 1.0 } else { -1.0 };
            let md = dir * mdotn;
            let to_circle = -md + (md * md + rest2).sqrt();
            let delta = 0.45 * clearance.min(to_circle);
            let z = [m[0] + dir * delta * nhat[0], m[1] + dir * delta * nhat[1]];
            let mut sides: Vec<bool> = leaves.iter().map(|l| l.side(m)).collect();
            sides[j] = side;
            samples.push((sides, z, j));
        }
    }

    let mut keys: Vec<Vec<bool>> = samples.iter().map(|s| s.0.clone()).collect();
    keys.sort();
    keys.dedup();
    if keys.len() != leaves.len() + 1 {
        return Err(LaminationError::InvalidSpine(format!(
            "expected {} regions, found {}",
            leaves.len() + 1,
            keys.len()
        )));
    }
    let id_of = |s: &Vec<bool>| keys.binary_search(s).expect("sampled key");

    let mut regions: Vec<Region> = keys
        .iter()
        .enumerate()
        .map(|(id, sides)| Region {
            id,
            sides: sides.clone(),
            representative: [0.0, 0.0],
        })
        .collect();
    let mut counts = vec![0usize; regions.len()];
    for (sides, z, _) in &samples {
        let id = id_of(sides);
        regions[id].representative[0] += z[0];
        regions[id].representative[1] += z[1];
        counts[id] += 1;
    }
    for (r, c) in regions.iter_mut().zip(&counts) {
        r.representative[0] /= *c as f64;
        r.representative[1] /= *c as f64;
    }

    let mut adjacency = Vec::with_capacity(leaves.len());
    for j in 0..leaves.len() {
        let a = id_of(&samples[2 * j].0);
        let b = id_of(&samples[2 * j + 1].0);
        adjacency.push(Adjacency { a, b, leaf: j });
    }

    let origin_sides: Vec<bool> = leaves.iter().map(|l| l.side([0.0, 0.0])).collect();
    let base_region = keys
        .binary_search(&origin_sides)
        .map_err(|_| LaminationError::InvalidSpine("disk center not in any region".into()))?;

    Ok(RegionGraph {
        regions,
        adjacency,
        base_region,
    })
}

/// Σ wⱼ over the leaves separating two regions.
pub fn tree_distance(
    graph: &RegionGraph,
    lam: &MeasuredLamination,
    r1: usize,
    r2: usize,
) -> Result<f64, LaminationError> {
    Ok(graph
        .path_leaves(r1, r2)?
        .into_iter()
        .map(|j| lam.leaves()[j].weight)
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpineKind {
    Tree,
    Polygon,
    Points,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpineEdge {
    pub a: usize,
    pub b: usize,
    /// Generating leaf, for lamination-built spines.
    pub leaf: Option<usize>,
}

/// A compact achronal simplicial complex of spacelike vertices, edges and
/// convex planar faces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpineComplex {
    pub vertices: Vec<MinkVec>,
    pub edges: Vec<SpineEdge>,
    pub faces: Vec<Vec<usize>>,
    pub kind: SpineKind,
}

impl SpineComplex {
    /// A user-supplied spine. Face boundary edges missing from `edges` are
    /// added. The result passes the achronality gate or is rejected.
    pub fn explicit(
        vertices: Vec<MinkVec>,
        edges: Vec<(usize, usize)>,
        faces: Vec<Vec<usize>>,
    ) -> Result<Self, LaminationError> {
        if vertices.is_empty() {
            return Err(LaminationError::InvalidSpine("no vertices".into()));
        }
        let n = vertices[0].dim();
        if vertices.iter().any(|v| v.dim() != n || !v.is_finite()) {
            return Err(LaminationError::InvalidSpine(
                "vertices must be finite and share one dimension".into(),
            ));
        }
        let nv = vertices.len();
        let mut all_edges: Vec<SpineEdge> = Vec::new();
        let push_edge = |a: usize, b: usize, list: &mut Vec<SpineEdge>| {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if !list
                .iter()
                .any(|e| (e.a.min(e.b), e.a.max(e.b)) == (lo, hi))
            {
                list.push(SpineEdge { a, b, leaf: None });
            }
        };
        for &(a, b) in &edges {
            if a >= nv || b >= nv || a == b {
                return Err(LaminationError::InvalidSpine(format!(
                    "bad edge ({a}, {b})"
                )));
            }
            push_edge(a, b, &mut all_edges);
        }
        for f in &faces {
            if f.len() < 3 || f.iter().any(|&i| i >= nv) {
                return Err(LaminationError::InvalidSpine(format!("bad face {f:?}")));
            }
            for k in 0..f.len() {
                push_edge(f[k], f[(k + 1) % f.len()], &mut all_edges);
            }
        }
        let kind = if !faces.is_empty() {
            SpineKind::Polygon
        } else if !all_edges.is_empty() {
            SpineKind::Tree
        } else {
            SpineKind::Points
        };
        let spine = Self {
            vertices,
            edges: all_edges,
            faces,
            kind,
        };
        spine.check()?;
        Ok(spine)
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn edge_vector(&self, e: usize) -> MinkVec {
        let edge = &self.edges[e];
        self.vertices[edge.b] - self.vertices[edge.a]
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        self.edge_vector(e).spacelike_len()
    }

    /// Deterministic sample of points on the complex: vertices, then
    /// [`ACHRONALITY_SAMPLES`] points per edge and per face.
    pub fn sample_points(&self) -> Vec<MinkVec> {
        let mut pts = self.vertices.clone();
        let m = ACHRONALITY_SAMPLES;
        for e in &self.edges {
            let (p, q) = (self.vertices[e.a], self.vertices[e.b]);
            for k in 0..m {
                let s = (k as f64 + 0.5) / m as f64;
                pts.push(p + (q - p) * s);
            }
        }
        for f in &self.faces {
            // Fan triangulation from f[0], points spread over the triangles.
            let tris = f.len() - 2;
            for k in 0..m {
                let tri = k % tris;
                let (a, b, c) = (
                    self.vertices[f[0]],
                    self.vertices[f[tri + 1]],
                    self.vertices[f[tri + 2]],
                );
                let u = ((k * 7 + 3) % m) as f64 / m as f64;
                let v = ((k * 13 + 5) % m) as f64 / m as f64;
                let (u, v) = if u + v > 1.0 {
                    (1.0 - u, 1.0 - v)
                } else {
                    (u, v)
                };
                pts.push(a + (b - a) * u + (c - a) * v);
            }
        }
        pts
    }

    /// Structural and causal invariants.
    pub fn check(&self) -> Result<(), LaminationError> {
        for (i, _) in self.edges.iter().enumerate() {
            if self.edge_vector(i).norm_sq() <= 0.0 {
                return Err(LaminationError::NonSpacelikeEdge(i));
            }
        }
        if self.kind == SpineKind::Tree {
            let nv = self.vertices.len();
            if self.edges.len() + 1 != nv {
                return Err(LaminationError::InvalidSpine(
                    "tree spine must have #vertices − 1 edges".into(),
                ));
            }
            let mut seen = vec![false; nv];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(v) = stack.pop() {
                for e in &self.edges {
                    let w = if e.a == v {
                        e.b
                    } else if e.b == v {
                        e.a
                    } else {
                        continue;
                    };
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            if seen.iter().any(|s| !s) {
                return Err(LaminationError::InvalidSpine(
                    "tree spine is disconnected".into(),
                ));
            }
        }
        let pts = self.sample_points();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d = pts[i] - pts[j];
                let scale = 1.0 + d.max_abs() * d.max_abs();
                if d.norm_sq() < -1e-12 * scale {
                    return Err(LaminationError::AchronalityViolation(i, j));
                }
            }
        }
        Ok(())
    }
}

/// Embeds the region tree: vertex(Δ) = Σ wⱼ·uⱼ over leaves separating Δ
/// from the base, uⱼ pointing away from the base. Vertex ids equal region
/// ids; edge k is generated by leaf k.
pub fn build_spine(
    lam: &MeasuredLamination,
    graph: &RegionGraph,
) -> Result<SpineComplex, LaminationError> {
    let n = graph.regions.len();
    if n != lam.len() + 1 {
        return Err(LaminationError::InvalidSpine(
            "region graph does not match lamination".into(),
        ));
    }
    let mut vertices = vec![MinkVec::zero(2); n];
    let mut placed = vec![false; n];
    let base = graph.base_region;
    placed[base] = true;
    let mut queue = VecDeque::from([base]);
    while let Some(r) = queue.pop_front() {
        for (s, j) in graph.neighbors(r) {
            if placed[s] {
                continue;
            }
            let leaf = &lam.leaves()[j];
            let u = leaf.normal();
            let u = if graph.regions[s].sides[j] { u } else { -u };
            vertices[s] = vertices[r] + u * leaf.weight;
            placed[s] = true;
            queue.push_back(s);
        }
    }
    let mut edges: Vec<SpineEdge> = graph
        .adjacency
        .iter()
        .map(|e| SpineEdge {
            a: e.a,
            b: e.b,
            leaf: Some(e.leaf),
        })
        .collect();
    edges.sort_by_key(|e| e.leaf);
    let kind = if edges.is_empty() {
        SpineKind::Points
    } else {
        SpineKind::Tree
    };
    let spine = SpineComplex {
        vertices,
        edges,
        faces: Vec::new(),
        kind,
    };
    spine.check()?;
    Ok(spine)
}
