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

use super::mesh::{mesh_level, LevelMesh};
use super::shorten::{lift, polyline_length, shorten};
use super::{LevelError, Window};
use crate::domain::{GradientLine, RegularDomain};
use crate::mink::{HypPoint, MinkVec};
use serde::{Deserialize, Serialize};

type V3 = [f64; 3];

const MIN_SEGMENTS: usize = 8;
const MAX_SEGMENTS: usize = 128;
const WINDOW_GROWTHS: usize = 3;

/// Intrinsic distance on a level with its refinement history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceEstimate {
    /// Shortest polyline length found; an upper bound on the distance.
    pub value: f64,
    /// (vertex spacing, polyline length) per refinement.
    pub history: Vec<(f64, f64)>,
    /// Richardson extrapolation in the squared spacing.
    pub extrapolated: f64,
    pub error: f64,
    /// Final shortened polyline on the level.
    #[serde(skip)]
    pub path: Vec<MinkVec>,
}

impl DistanceEstimate {
    pub fn zero() -> Self {
        Self {
            value: 0.0,
            history: Vec::new(),
            extrapolated: 0.0,
            error: 0.0,
            path: Vec::new(),
        }
    }

    /// Same estimate with lengths multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            history: self
                .history
                .iter()
                .map(|&(h, v)| (h * factor, v * factor))
                .collect(),
            extrapolated: self.extrapolated * factor,
            error: self.error * factor,
            path: self.path.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceParams {
    /// Grid spacing of the initial mesh and target vertex spacing.
    pub h: f64,
    /// Number of shortening passes, each halving the vertex spacing.
    pub refinements: usize,
    /// Cap on mesh cells per side.
    pub max_cells: usize,
    /// Fixed window; when absent one is fitted to the footpoints.
    pub window: Option<Window>,
}

impl Default for DistanceParams {
    fn default() -> Self {
        Self {
            h: 0.05,
            refinements: 3,
            max_cells: 128,
            window: None,
        }
    }
}

fn footpoint(p: &MinkVec) -> V3 {
    let mut x = [0.0; 3];
    x[..p.dim()].copy_from_slice(p.spatial());
    x
}

fn resample(xs: &[V3], n: usize, segments: usize) -> Vec<V3> {
    let mut cum = vec![0.0];
    for w in xs.windows(2) {
        let d: f64 = (0..n)
            .map(|k| (w[1][k] - w[0][k]).powi(2))
            .sum::<f64>()
            .sqrt();
        cum.push(cum.last().unwrap() + d);
    }
    let total = *cum.last().unwrap();
    let mut out = Vec::with_capacity(segments + 1);
    let mut seg = 0;
    for i in 0..=segments {
        let s = total * i as f64 / segments as f64;
        while seg + 2 < cum.len() && cum[seg + 1] < s {
            seg += 1;
        }
        let span = cum[seg + 1] - cum[seg];
        let f = if span > 0.0 {
            ((s - cum[seg]) / span).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let mut x = [0.0; 3];
        for k in 0..n {
            x[k] = xs[seg][k] + f * (xs[seg + 1][k] - xs[seg][k]);
        }
        out.push(x);
    }
    out[0] = xs[0];
    out[segments] = *xs.last().unwrap();
    out
}

fn subdivide(xs: &[V3]) -> Vec<V3> {
    let mut out = Vec::with_capacity(2 * xs.len() - 1);
    for w in xs.windows(2) {
        out.push(w[0]);
        out.push([
            0.5 * (w[0][0] + w[1][0]),
            0.5 * (w[0][1] + w[1][1]),
            0.5 * (w[0][2] + w[1][2]),
        ]);
    }
    out.push(*xs.last().unwrap());
    out
}

/// Intrinsic distance between the points of two gradient lines on the
/// mesh's level: graph shortest path, then Newton shortening over
/// `refinements` successive halvings of the vertex spacing.
pub fn geodesic_distance(
    mesh: &LevelMesh<'_>,
    line1: &GradientLine,
    line2: &GradientLine,
    refinements: usize,
) -> Result<DistanceEstimate, LevelError> {
    if refinements < 2 {
        return Err(LevelError::TooFewRefinements {
            needed: 2,
            got: refinements,
        });
    }
    let dom = mesh.domain();
    let a = mesh.level();
    let n = mesh.dim();
    let p1 = line1.flow(a);
    let p2 = line2.flow(a);
    if (p1 - p2).max_abs() <= 1e-14 * (1.0 + p1.max_abs()) {
        return Ok(DistanceEstimate::zero());
    }
    let (x1, x2) = (footpoint(&p1), footpoint(&p2));
    let window = mesh.window();
    if window.clearance(&x1[..n]) <= 0.0 || window.clearance(&x2[..n]) <= 0.0 {
        return Err(LevelError::WindowTooSmall);
    }
    let nodes = mesh.graph_path(mesh.nearest(&x1[..n]), mesh.nearest(&x2[..n]));
    let inner = if nodes.len() > 2 {
        &nodes[1..nodes.len() - 1]
    } else {
        &[][..]
    };
    if inner.iter().any(|&i| mesh.on_boundary(i)) {
        return Err(LevelError::WindowTooSmall);
    }
    let mut xs: Vec<V3> = vec![x1];
    xs.extend(nodes.iter().map(|&i| mesh.nodes()[i].xbar));
    xs.push(x2);
    xs.dedup_by(|p, q| (0..n).all(|k| (p[k] - q[k]).abs() < 1e-12));
    if xs.len() < 2 {
        return Ok(DistanceEstimate::zero());
    }

    let rough = polyline_length(&lift(dom, a, &xs).pts);
    let target = mesh.h().min(0.25 * a);
    let segments = ((rough / target).ceil() as usize).clamp(MIN_SEGMENTS, MAX_SEGMENTS);
    xs = resample(&xs, n, segments);

    let mut history = Vec::with_capacity(refinements);
    let mut path = Vec::new();
    for level in 0..refinements {
        if level > 0 {
            xs = subdivide(&xs);
        }
        let (pts, len) = shorten(dom, a, &mut xs);
        if xs.iter().any(|x| window.clearance(&x[..n]) <= 0.0) {
            return Err(LevelError::WindowTooSmall);
        }
        history.push((len / (xs.len() - 1) as f64, len));
        path = pts;
    }
    let value = history.iter().map(|h| h.1).fold(f64::INFINITY, f64::min);
    let rich: Vec<f64> = history
        .windows(2)
        .map(|w| (4.0 * w[1].1 - w[0].1) / 3.0)
        .collect();
    let extrapolated = *rich.last().unwrap();
    let residual = if rich.len() >= 2 {
        (rich[rich.len() - 1] - rich[rich.len() - 2]).abs()
    } else {
        (value - extrapolated).abs()
    };
    Ok(DistanceEstimate {
        value,
        history,
        extrapolated,
        error: (value - extrapolated).abs() + residual,
        path,
    })
}

/// Fits a window to the two footpoints, meshes the level and measures the
/// distance, growing the window on `WindowTooSmall`.
pub fn level_distance(
    dom: &RegularDomain,
    a: f64,
    line1: &GradientLine,
    line2: &GradientLine,
    params: &DistanceParams,
) -> Result<DistanceEstimate, LevelError> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(LevelError::BadLevel(a));
    }
    let n = dom.dim();
    let p1 = line1.flow(a);
    let p2 = line2.flow(a);
    let mut window = match params.window {
        Some(w) => w,
        None => {
            let sep = (p1.spatial().iter().zip(p2.spatial()))
                .map(|(u, v)| (u - v).powi(2))
                .sum::<f64>()
                .sqrt();
            Window::around(&[p1.spatial(), p2.spatial()], 1.5 * sep + 3.0 * a)?
        }
    };
    let cells = if n == 3 {
        params.max_cells.min(48)
    } else {
        params.max_cells
    };
    let mut attempt = 0;
    loop {
        let mesh = mesh_level(dom, a, window, params.h, cells)?;
        match geodesic_distance(&mesh, line1, line2, params.refinements) {
            Err(LevelError::WindowTooSmall) if attempt < WINDOW_GROWTHS => {
                attempt += 1;
                window = window.grown(2.0);
            }
            other => return other,
        }
    }
}

/// Largest violation along a shortened path of ⟨τ, N_p⟩ ≤ 0 and
/// ⟨τ, N_q⟩ ≥ 0 over unit chord directions τ.
pub fn tangent_sign_violation(path: &[MinkVec], np: &HypPoint, nq: &HypPoint) -> f64 {
    path.windows(2)
        .map(|w| {
            let d = w[1] - w[0];
            let len = d.norm_sq().max(1e-300).sqrt();
            let t = d * (1.0 / len);
            t.dot(np.vec()).max(-t.dot(nq.vec())).max(0.0)
        })
        .fold(0.0, f64::max)
}
