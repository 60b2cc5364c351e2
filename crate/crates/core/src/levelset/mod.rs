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

//! Cosmological levels as graphs over the base plane, their intrinsic
//! distances, and the comparison checks built on them.

mod curvature;
mod geodesic;
mod mesh;
mod shorten;
mod surface;
pub(crate) mod sweep;

pub use curvature::estimate_gauss_curvature;
pub use geodesic::{
    geodesic_distance, level_distance, tangent_sign_violation, DistanceEstimate, DistanceParams,
};
pub use mesh::{mesh_level, LevelMesh, MeshNode};
pub use surface::{
    pairing_bound_check, project_curve_length, ConvexSurface, PairingReport, PairingSample,
};
pub use sweep::{
    compare_levels, extrapolate_affine, extrapolate_quadratic, future_sweep, past_sweep,
    Extrapolation, LevelComparison, LinePair, PairComparison, PastLimit, PastSweep, SweepRow,
};

use crate::domain::DomainError;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LevelError {
    #[error("level must be positive and finite, got {0}")]
    BadLevel(f64),
    #[error("window is empty or malformed")]
    EmptyMesh,
    #[error("mesh spacing must be positive, got {0}")]
    BadSpacing(f64),
    #[error("geodesic touches the window boundary")]
    WindowTooSmall,
    #[error("at least {needed} refinements are required, got {got}")]
    TooFewRefinements { needed: usize, got: usize },
    #[error("node {0} lacks a full 2-ring")]
    BoundaryNode(usize),
    #[error("curvature estimation needs n = 2, got n = {0}")]
    UnsupportedDimension(usize),
    #[error("polyline node {index} is off level {level} by {offset:e}")]
    OffLevel {
        index: usize,
        level: f64,
        offset: f64,
    },
    #[error("sweep needs at least {needed} levels, got {got}")]
    TooFewLevels { needed: usize, got: usize },
    #[error("surface sample {0:?} lies outside the domain")]
    SampleOutside(Vec<f64>),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// Axis-aligned box in the base plane ℝⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
    pub n: usize,
}

impl Window {
    pub fn new(lo: &[f64], hi: &[f64]) -> Result<Self, LevelError> {
        let n = lo.len();
        if n != hi.len() || !(2..=3).contains(&n) {
            return Err(LevelError::EmptyMesh);
        }
        let mut w = Window {
            lo: [0.0; 3],
            hi: [0.0; 3],
            n,
        };
        for k in 0..n {
            if !(hi[k] > lo[k]) || !lo[k].is_finite() || !hi[k].is_finite() {
                return Err(LevelError::EmptyMesh);
            }
            w.lo[k] = lo[k];
            w.hi[k] = hi[k];
        }
        Ok(w)
    }

    /// Bounding box of `pts` padded by `pad` on every side.
    pub fn around(pts: &[&[f64]], pad: f64) -> Result<Self, LevelError> {
        let n = pts.first().map(|p| p.len()).ok_or(LevelError::EmptyMesh)?;
        let mut lo = vec![f64::INFINITY; n];
        let mut hi = vec![f64::NEG_INFINITY; n];
        for p in pts {
            for k in 0..n {
                lo[k] = lo[k].min(p[k] - pad);
                hi[k] = hi[k].max(p[k] + pad);
            }
        }
        Self::new(&lo, &hi)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        (0..self.n).all(|k| x[k] >= self.lo[k] && x[k] <= self.hi[k])
    }

    /// Distance from `x` to the complement, negative outside.
    pub fn clearance(&self, x: &[f64]) -> f64 {
        (0..self.n)
            .map(|k| (x[k] - self.lo[k]).min(self.hi[k] - x[k]))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn grown(&self, factor: f64) -> Self {
        let mut w = *self;
        for k in 0..self.n {
            let c = 0.5 * (self.lo[k] + self.hi[k]);
            let r = 0.5 * (self.hi[k] - self.lo[k]) * factor;
            w.lo[k] = c - r;
            w.hi[k] = c + r;
        }
        w
    }

    pub fn side(&self, k: usize) -> f64 {
        self.hi[k] - self.lo[k]
    }
}
