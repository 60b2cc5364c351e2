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

use super::shorten::polyline_length;
use super::{LevelError, Window};
use crate::domain::{GradientLine, LevelPoint, RegularDomain};
use crate::mink::MinkVec;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Node tolerance for polylines handed to [`project_curve_length`].
pub const LEVEL_TOL: f64 = 1e-6;

/// A convex Cauchy surface of a domain, realized as a level of an auxiliary
/// domain and sampled over a window of the base plane.
#[derive(Debug, Clone)]
pub struct ConvexSurface {
    pub aux: RegularDomain,
    pub level: f64,
    pub window: Window,
}

impl ConvexSurface {
    pub fn new(aux: RegularDomain, level: f64, window: Window) -> Result<Self, LevelError> {
        if !(level > 0.0) || !level.is_finite() {
            return Err(LevelError::BadLevel(level));
        }
        Ok(Self { aux, level, window })
    }

    pub fn point(&self, xbar: &[f64]) -> LevelPoint {
        self.aux.level_point(self.level, xbar)
    }

    fn random_xbar<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.window.n)
            .map(|k| rng.gen_range(self.window.lo[k]..=self.window.hi[k]))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingSample {
    /// |⟨N_p, n_p⟩|.
    pub pairing: f64,
    /// Cosmological time of the main domain at p.
    pub time: f64,
    /// Main-domain time where the ray r(p) + s·n_p meets the surface again.
    pub crossing_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub samples: usize,
    pub max_pairing: f64,
    /// Sup of the time over samples and crossing points, all on the surface.
    pub sup_time: f64,
    pub inf_time: f64,
    pub bound: f64,
    pub margin: f64,
    /// min over samples of crossing_time / time − pairing.
    pub pointwise_margin: f64,
    #[serde(skip)]
    pub per_sample: Vec<PairingSample>,
}

impl PairingReport {
    /// Report for the image of the configuration under x ↦ λx. Times scale
    /// by λ; pairings, ratios and margins are unchanged.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            sup_time: self.sup_time * lambda,
            inf_time: self.inf_time * lambda,
            per_sample: self
                .per_sample
                .iter()
                .map(|s| PairingSample {
                    pairing: s.pairing,
                    time: s.time * lambda,
                    crossing_time: s.crossing_time * lambda,
                })
                .collect(),
            ..self.clone()
        }
    }

    /// Largest of the sup time and pairing × time over the samples.
    pub fn time_extent(&self) -> f64 {
        self.per_sample
            .iter()
            .map(|s| s.pairing * s.time)
            .fold(self.sup_time, f64::max)
    }
}

/// Solves T_aux(r + s·n) = level for s ≥ s_lo.
fn ray_crossing(surf: &ConvexSurface, r: &MinkVec, n: &MinkVec, s_lo: f64) -> MinkVec {
    let f = |s: f64| {
        surf.aux
            .cosmological_time(&(*r + *n * s))
            .map(|ev| ev.time)
            .unwrap_or(0.0)
            - surf.level
    };
    let mut lo = s_lo.max(0.0);
    let mut hi = (2.0 * lo).max(surf.level).max(1e-9);
    let mut guard = 0;
    while f(hi) < 0.0 && guard < 200 {
        lo = hi;
        hi *= 2.0;
        guard += 1;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    *r + *n * hi
}

/// Samples the surface and compares |⟨N, n⟩| with sup T / inf T.
pub fn pairing_bound_check<R: Rng>(
    dom: &RegularDomain,
    surf: &ConvexSurface,
    m: usize,
    rng: &mut R,
) -> Result<PairingReport, LevelError> {
    let mut per_sample = Vec::with_capacity(m);
    let (mut sup, mut inf, mut max_pairing) = (0.0f64, f64::INFINITY, 0.0f64);
    let mut pointwise = f64::INFINITY;
    for _ in 0..m {
        let xbar = surf.random_xbar(rng);
        let lp = surf.point(&xbar);
        let ev = dom
            .cosmological_time(&lp.point)
            .map_err(|_| LevelError::SampleOutside(xbar.clone()))?;
        let pairing = ev.normal.vec().dot(lp.normal.vec()).abs();
        let y = ray_crossing(surf, &ev.retraction, lp.normal.vec(), ev.time * pairing);
        let crossing_time = dom
            .cosmological_time(&y)
            .map_err(|_| LevelError::SampleOutside(y.spatial().to_vec()))?
            .time;
        sup = sup.max(ev.time).max(crossing_time);
        inf = inf.min(ev.time);
        max_pairing = max_pairing.max(pairing);
        pointwise = pointwise.min(crossing_time / ev.time - pairing);
        per_sample.push(PairingSample {
            pairing,
            time: ev.time,
            crossing_time,
        });
    }
    if m == 0 {
        return Ok(PairingReport {
            samples: 0,
            max_pairing: 0.0,
            sup_time: 0.0,
            inf_time: 0.0,
            bound: 0.0,
            margin: 0.0,
            pointwise_margin: 0.0,
            per_sample,
        });
    }
    let bound = sup / inf;
    Ok(PairingReport {
        samples: m,
        max_pairing,
        sup_time: sup,
        inf_time: inf,
        bound,
        margin: bound - max_pairing,
        pointwise_margin: pointwise,
        per_sample,
    })
}

/// Lengths of a polyline on level b and of its image on level a under the
/// gradient flow.
pub fn project_curve_length(
    dom: &RegularDomain,
    polyline: &[MinkVec],
    b: f64,
    a: f64,
) -> Result<(f64, f64), LevelError> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(LevelError::BadLevel(a));
    }
    let mut image = Vec::with_capacity(polyline.len());
    for (index, p) in polyline.iter().enumerate() {
        let ev = dom.cosmological_time(p)?;
        let offset = (ev.time - b).abs();
        if offset > LEVEL_TOL {
            return Err(LevelError::OffLevel {
                index,
                level: b,
                offset,
            });
        }
        image.push(GradientLine::through(dom, p)?.flow(a));
    }
    Ok((polyline_length(polyline), polyline_length(&image)))
}
