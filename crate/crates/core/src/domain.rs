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

//! Regular domains Ω = I⁺(Σ) over a finite spine Σ.
//!
//! For p ∈ Ω the cosmological time is the Lorentzian distance to the spine,
//!
//! ```text
//! T(p) = max { √(−⟨p−q, p−q⟩) : q ∈ Σ, p − q future causal }
//! ```
//!
//! attained at a unique retraction point r(p), and p = r(p) + T(p)·N(p) with
//! N(p) ∈ ℍⁿ. Each stratum gives a closed form: vertices directly, edges by
//! maximizing a concave quadratic in the edge parameter, faces by the
//! Lorentz-orthogonal projection onto the face plane. A maximizer on the
//! boundary of an edge or face is left to the lower-dimensional stratum.
//!
//! A domain may carry a time offset a₀, turning it into I⁺(S_{a₀}) with
//! cosmological time T − a₀; its levels are levels of the base domain.

use crate::lamination::{self, LaminationError, MeasuredLamination, RegionGraph, SpineComplex};
use crate::mink::{HypPoint, MinkError, MinkVec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Minimal −⟨p−q,p−q⟩ for q to count as chronologically below p.
pub const OUTSIDE_TOL: f64 = 1e-14;
/// Two strata whose times differ by less than this are tied.
pub const TIE_TOL: f64 = 1e-9;
/// Tied strata farther apart than this make the retraction ambiguous.
pub const TIE_SEPARATION: f64 = 1e-6;
/// Number of random pairs in the sampled convexity gate.
pub const CONVEXITY_PAIRS: usize = 1000;

const INTERIOR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("point {0:?} is outside the domain")]
    OutsideDomain(MinkVec),
    #[error("ambiguous retraction: strata {0} and {1} tie")]
    AmbiguousRetraction(String, String),
    #[error("domain failed the convexity gate: midpoint of {0:?} and {1:?} is outside")]
    NotConvex(MinkVec, MinkVec),
    #[error("face {0} is not a planar convex spacelike polygon: {1}")]
    BadFace(usize, String),
    #[error("dimension mismatch: domain has n = {0}, point has n = {1}")]
    Dimension(usize, usize),
    #[error("gradient line is not self-consistent: {0}")]
    NotAGradientLine(String),
    #[error("time offset must be non-negative, got {0}")]
    BadOffset(f64),
    #[error(transparent)]
    Lamination(#[from] LaminationError),
    #[error(transparent)]
    Mink(#[from] MinkError),
}

/// Spine stratum carrying a retraction point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stratum {
    Vertex(usize),
    /// Point `a + s·(b − a)` of edge `index`, s ∈ (0, 1).
    Edge {
        index: usize,
        s: f64,
    },
    /// Point with coordinates `coords` in the face's orthonormal frame.
    Face {
        index: usize,
        coords: [f64; 2],
    },
}

impl Stratum {
    pub fn label(&self) -> String {
        match self {
            Stratum::Vertex(k) => format!("vertex {k}"),
            Stratum::Edge { index, s } => format!("edge {index} at s = {s:.6}"),
            Stratum::Face { index, coords } => {
                format!("face {index} at ({:.6}, {:.6})", coords[0], coords[1])
            }
        }
    }
}

/// Cosmological time, retraction and normal at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CosmoEval {
    pub time: f64,
    pub retraction: MinkVec,
    pub normal: HypPoint,
    pub stratum: Stratum,
    /// Another stratum tied within [`TIE_TOL`] at a different retraction;
    /// the lowest stratum is reported.
    pub ambiguous: bool,
}

#[derive(Debug, Clone)]
struct EdgeData {
    origin: MinkVec,
    dir: MinkVec,
    len2: f64,
}

#[derive(Debug, Clone)]
struct FaceData {
    origin: MinkVec,
    frame: [MinkVec; 2],
    /// Counter-clockwise polygon in frame coordinates.
    polygon: Vec<[f64; 2]>,
}

impl FaceData {
    fn new(index: usize, pts: &[MinkVec]) -> Result<Self, DomainError> {
        let bad = |m: &str| DomainError::BadFace(index, m.to_string());
        let origin = pts[0];
        let e1 = pts[1] - origin;
        let q1 = e1.norm_sq();
        if q1 <= 0.0 {
            return Err(bad("first side is not spacelike"));
        }
        let e1 = e1 * (1.0 / q1.sqrt());
        let mut e2 = None;
        for p in &pts[2..] {
            let v = *p - origin;
            let w = v - e1 * v.dot(&e1);
            let q = w.norm_sq();
            if q > 1e-18 * (1.0 + v.max_abs().powi(2)) {
                e2 = Some(w * (1.0 / q.sqrt()));
                break;
            } else if q < -1e-12 {
                return Err(bad("face plane is not spacelike"));
            }
        }
        let e2 = e2.ok_or_else(|| bad("degenerate polygon"))?;
        let mut polygon: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
        for p in pts {
            let v = *p - origin;
            let c = [v.dot(&e1), v.dot(&e2)];
            let resid = v - e1 * c[0] - e2 * c[1];
            if resid.max_abs() > 1e-9 * (1.0 + v.max_abs()) {
                return Err(bad("vertices are not coplanar"));
            }
            polygon.push(c);
        }
        let area: f64 = (0..polygon.len())
            .map(|k| {
                let (a, b) = (polygon[k], polygon[(k + 1) % polygon.len()]);
                a[0] * b[1] - a[1] * b[0]
            })
            .sum();
        if area < 0.0 {
            polygon.reverse();
        }
        let m = polygon.len();
        for k in 0..m {
            let (a, b, c) = (polygon[k], polygon[(k + 1) % m], polygon[(k + 2) % m]);
            let cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            if cross <= 0.0 {
                return Err(bad("polygon is not strictly convex"));
            }
        }
        Ok(Self {
            origin,
            frame: [e1, e2],
            polygon,
        })
    }

    fn strictly_inside(&self, c: [f64; 2]) -> bool {
        let m = self.polygon.len();
        (0..m).all(|k| {
            let (a, b) = (self.polygon[k], self.polygon[(k + 1) % m]);
            let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            let cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
            cross > INTERIOR_TOL * len.max(1.0)
        })
    }

    fn point(&self, c: [f64; 2]) -> MinkVec {
        self.origin + self.frame[0] * c[0] + self.frame[1] * c[1]
    }
}

/// A point of a cosmological level, with its gradient line.
#[derive(Debug, Clone, Copy)]
pub struct LevelPoint {
    pub point: MinkVec,
    pub retraction: MinkVec,
    pub normal: HypPoint,
    pub stratum: Stratum,
}

impl LevelPoint {
    /// Gradient of the height function x̄ ↦ x⁰ of the level graph.
    pub fn height_gradient(&self) -> [f64; 3] {
        let n = self.normal.vec();
        let mut g = [0.0; 3];
        for (gi, c) in g.iter_mut().zip(n.spatial()) {
            *gi = c / n.t;
        }
        g
    }
}

/// Ω = I⁺(spine), optionally shifted in time.
#[derive(Debug, Clone)]
pub struct RegularDomain {
    spine: SpineComplex,
    edges: Vec<EdgeData>,
    faces: Vec<FaceData>,
    time_offset: f64,
}

impl RegularDomain {
    /// Domain of a lamination, built through its region tree.
    pub fn from_lamination(
        lam: &MeasuredLamination,
        graph: &RegionGraph,
    ) -> Result<Self, DomainError> {
        let spine = lamination::build_spine(lam, graph)?;
        Self::assemble(spine)
    }

    /// Domain of a user-supplied spine; must pass the convexity gate.
    pub fn from_spine(spine: SpineComplex) -> Result<Self, DomainError> {
        spine.check()?;
        let dom = Self::assemble(spine)?;
        dom.convexity_gate()?;
        Ok(dom)
    }

    /// The domain of the spine translated by `v`.
    pub fn translated(&self, v: &MinkVec) -> Result<Self, DomainError> {
        let mut spine = self.spine.clone();
        for q in &mut spine.vertices {
            *q += *v;
        }
        let mut dom = Self::assemble(spine)?;
        dom.time_offset = self.time_offset;
        Ok(dom)
    }

    /// Vertex lines of a lamination domain, one per region, with the region
    /// representative as normal.
    pub fn region_lines(&self, graph: &RegionGraph) -> Result<Vec<GradientLine>, DomainError> {
        graph
            .regions
            .iter()
            .map(|r| {
                let q = *self
                    .spine
                    .vertices
                    .get(r.id)
                    .ok_or(LaminationError::UnknownRegion(r.id))?;
                let n = HypPoint::from_klein(&r.representative)?;
                GradientLine::new(self, q, n)
            })
            .collect()
    }

    /// The future light cone of the origin.
    pub fn cone(n: usize) -> Self {
        let spine = SpineComplex {
            vertices: vec![MinkVec::zero(n)],
            edges: Vec::new(),
            faces: Vec::new(),
            kind: lamination::SpineKind::Points,
        };
        Self::assemble(spine).expect("cone spine")
    }

    fn assemble(spine: SpineComplex) -> Result<Self, DomainError> {
        let edges = spine
            .edges
            .iter()
            .map(|e| {
                let origin = spine.vertices[e.a];
                let dir = spine.vertices[e.b] - origin;
                EdgeData {
                    origin,
                    dir,
                    len2: dir.norm_sq(),
                }
            })
            .collect();
        let faces = spine
            .faces
            .iter()
            .enumerate()
            .map(|(k, f)| {
                let pts: Vec<MinkVec> = f.iter().map(|&i| spine.vertices[i]).collect();
                FaceData::new(k, &pts)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            spine,
            edges,
            faces,
            time_offset: 0.0,
        })
    }

    /// I⁺ of the level a₀ of this domain.
    pub fn with_time_offset(mut self, a0: f64) -> Result<Self, DomainError> {
        if !(a0 >= 0.0) || !a0.is_finite() {
            return Err(DomainError::BadOffset(a0));
        }
        self.time_offset = a0;
        Ok(self)
    }

    pub fn time_offset(&self) -> f64 {
        self.time_offset
    }

    pub fn spine(&self) -> &SpineComplex {
        &self.spine
    }

    pub fn dim(&self) -> usize {
        self.spine.dim()
    }

    fn convexity_gate(&self) -> Result<(), DomainError> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x00C0_FFEE);
        let anchors = self.spine.sample_points();
        let n = self.dim();
        let random_point = |rng: &mut ChaCha8Rng| {
            let q = anchors[rng.gen_range(0..anchors.len())];
            let eta: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
            let nrm = HypPoint::from_boost(&eta).expect("boost");
            q + *nrm.vec() * rng.gen_range(0.05..2.0)
        };
        for _ in 0..CONVEXITY_PAIRS {
            let p = random_point(&mut rng);
            let q = random_point(&mut rng);
            if !self.contains(&((p + q) * 0.5)) {
                return Err(DomainError::NotConvex(p, q));
            }
        }
        Ok(())
    }

    fn check_dim(&self, p: &MinkVec) -> Result<(), DomainError> {
        if p.dim() != self.dim() {
            return Err(DomainError::Dimension(self.dim(), p.dim()));
        }
        Ok(())
    }

    /// Cosmological time of the unshifted domain.
    fn base_time(&self, p: &MinkVec) -> Result<CosmoEval, DomainError> {
        self.check_dim(p)?;
        let mut best: Option<(f64, MinkVec, Stratum)> = None;
        let mut ambiguous = false;
        let mut consider = |t2: f64, r: MinkVec, stratum: Stratum| {
            let w = *p - r;
            if !(t2 > OUTSIDE_TOL) || w.t <= 0.0 {
                return;
            }
            let t = t2.sqrt();
            match &best {
                None => best = Some((t, r, stratum)),
                Some((bt, br, _)) => {
                    if t > bt + TIE_TOL {
                        best = Some((t, r, stratum));
                        ambiguous = false;
                    } else if (t - bt).abs() <= TIE_TOL && (r - *br).max_abs() > TIE_SEPARATION {
                        ambiguous = true;
                    }
                }
            }
        };
        for (k, v) in self.spine.vertices.iter().enumerate() {
            let w = *p - *v;
            consider(-w.norm_sq(), *v, Stratum::Vertex(k));
        }
        for (k, e) in self.edges.iter().enumerate() {
            let w = *p - e.origin;
            let s = w.dot(&e.dir) / e.len2;
            if s > INTERIOR_TOL && s < 1.0 - INTERIOR_TOL {
                let r = e.origin + e.dir * s;
                let d = *p - r;
                consider(-d.norm_sq(), r, Stratum::Edge { index: k, s });
            }
        }
        for (k, f) in self.faces.iter().enumerate() {
            let w = *p - f.origin;
            let c = [w.dot(&f.frame[0]), w.dot(&f.frame[1])];
            if f.strictly_inside(c) {
                let r = f.point(c);
                let d = *p - r;
                consider(
                    -d.norm_sq(),
                    r,
                    Stratum::Face {
                        index: k,
                        coords: c,
                    },
                );
            }
        }
        let (time, retraction, stratum) = best.ok_or(DomainError::OutsideDomain(*p))?;
        let normal = HypPoint::new_unchecked((*p - retraction) * (1.0 / time));
        Ok(CosmoEval {
            time,
            retraction,
            normal,
            stratum,
            ambiguous,
        })
    }

    /// Exact cosmological time with retraction, normal and stratum.
    pub fn cosmological_time(&self, p: &MinkVec) -> Result<CosmoEval, DomainError> {
        let mut ev = self.base_time(p)?;
        if self.time_offset > 0.0 {
            if ev.time - self.time_offset <= OUTSIDE_TOL.sqrt() {
                return Err(DomainError::OutsideDomain(*p));
            }
            ev.time -= self.time_offset;
            ev.retraction += *ev.normal.vec() * self.time_offset;
        }
        Ok(ev)
    }

    /// Like [`Self::cosmological_time`] but ties are errors.
    pub fn cosmological_time_strict(&self, p: &MinkVec) -> Result<CosmoEval, DomainError> {
        let ev = self.cosmological_time(p)?;
        if ev.ambiguous {
            let other = self.tied_stratum(p, &ev);
            return Err(DomainError::AmbiguousRetraction(ev.stratum.label(), other));
        }
        Ok(ev)
    }

    fn tied_stratum(&self, p: &MinkVec, ev: &CosmoEval) -> String {
        let base_t = ev.time + self.time_offset;
        let base_r = ev.retraction - *ev.normal.vec() * self.time_offset;
        for (k, v) in self.spine.vertices.iter().enumerate() {
            let t = (-(*p - *v).norm_sq()).max(0.0).sqrt();
            if (t - base_t).abs() <= TIE_TOL && (*v - base_r).max_abs() > TIE_SEPARATION {
                return Stratum::Vertex(k).label();
            }
        }
        "another stratum".to_string()
    }

    pub fn contains(&self, p: &MinkVec) -> bool {
        self.cosmological_time(p).is_ok()
    }

    /// Point of the level {T = a} above x̄, with its gradient line.
    ///
    /// The level is the graph of h_a(x̄) = min over q ∈ Σ of
    /// q.t + √(a² + |x̄ − q̄|²); on edges and faces the inner minimum solves a
    /// quadratic in the height.
    pub fn level_point(&self, a: f64, xbar: &[f64]) -> LevelPoint {
        debug_assert_eq!(xbar.len(), self.dim());
        debug_assert!(a > 0.0);
        let ab = a + self.time_offset;
        let a2 = ab * ab;
        let mut best_h = f64::INFINITY;
        let mut best_r = self.spine.vertices[0];
        let mut best_s = Stratum::Vertex(0);
        for (k, v) in self.spine.vertices.iter().enumerate() {
            let d2: f64 = xbar
                .iter()
                .zip(v.spatial())
                .map(|(x, q)| (x - q).powi(2))
                .sum();
            let h = v.t + (a2 + d2).sqrt();
            if h < best_h {
                best_h = h;
                best_r = *v;
                best_s = Stratum::Vertex(k);
            }
        }
        for (k, e) in self.edges.iter().enumerate() {
            let len = e.len2.sqrt();
            let unit = e.dir * (1.0 / len);
            if let Some((tau, c)) = flat_stratum_height(&e.origin, &[unit], xbar, a2) {
                let s = c[0] / len;
                if s > INTERIOR_TOL && s < 1.0 - INTERIOR_TOL {
                    let h = e.origin.t + tau;
                    if h < best_h {
                        best_h = h;
                        best_r = e.origin + e.dir * s;
                        best_s = Stratum::Edge { index: k, s };
                    }
                }
            }
        }
        for (k, f) in self.faces.iter().enumerate() {
            if let Some((tau, c)) = flat_stratum_height(&f.origin, &f.frame, xbar, a2) {
                let cc = [c[0], c[1]];
                if f.strictly_inside(cc) {
                    let h = f.origin.t + tau;
                    if h < best_h {
                        best_h = h;
                        best_r = f.point(cc);
                        best_s = Stratum::Face {
                            index: k,
                            coords: cc,
                        };
                    }
                }
            }
        }
        let point = MinkVec::from_parts(best_h, xbar);
        let normal = HypPoint::new_unchecked((point - best_r) * (1.0 / ab));
        let retraction = best_r + *normal.vec() * self.time_offset;
        LevelPoint {
            point,
            retraction,
            normal,
            stratum: best_s,
        }
    }

    /// Height h_a(x̄) of the level graph.
    pub fn level_height(&self, a: f64, xbar: &[f64]) -> f64 {
        self.level_point(a, xbar).point.t
    }

    /// Inner approximation of the boundary graph from `k` sampled null
    /// support planes: max over ω of min over vertices of q.t + ω·(x̄ − q̄).
    pub fn null_support_boundary(&self, xbar: &[f64], k: usize) -> f64 {
        let k = k.max(8);
        let dirs = sphere_directions(self.dim(), k);
        dirs.iter()
            .map(|w| {
                self.spine
                    .vertices
                    .iter()
                    .map(|q| {
                        q.t + w
                            .iter()
                            .zip(xbar.iter().zip(q.spatial()))
                            .map(|(wi, (x, qi))| wi * (x - qi))
                            .sum::<f64>()
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// The initial singularity with its intrinsic path metric.
    pub fn singular_set(&self) -> SingularSet {
        SingularSet::new(&self.spine, &self.faces)
    }

    /// Point of the spine named by a stratum.
    pub fn stratum_point(&self, s: &Stratum) -> MinkVec {
        match *s {
            Stratum::Vertex(k) => self.spine.vertices[k],
            Stratum::Edge { index, s } => self.edges[index].origin + self.edges[index].dir * s,
            Stratum::Face { index, coords } => self.faces[index].point(coords),
        }
    }
}

/// Solves T_stratum(x⁰, x̄) = a for the larger root, where the stratum is the
/// affine plane origin + span(frame) with a Lorentz-orthonormal spacelike
/// frame. Returns (x⁰ − origin.t, frame coordinates of the maximizer).
fn flat_stratum_height(
    origin: &MinkVec,
    frame: &[MinkVec],
    xbar: &[f64],
    a2: f64,
) -> Option<(f64, [f64; 3])> {
    // w = (τ, y) with y = x̄ − ō; ⟨w, e_k⟩ = α_k τ + β_k.
    let y: Vec<f64> = xbar
        .iter()
        .zip(origin.spatial())
        .map(|(x, o)| x - o)
        .collect();
    let y2: f64 = y.iter().map(|c| c * c).sum();
    let mut qa = 1.0;
    let mut qb = 0.0;
    let mut qc = -y2 - a2;
    let mut ab = [(0.0, 0.0); 3];
    for (k, e) in frame.iter().enumerate() {
        let alpha = -e.t;
        let beta: f64 = y.iter().zip(e.spatial()).map(|(a, b)| a * b).sum();
        qa += alpha * alpha;
        qb += 2.0 * alpha * beta;
        qc += beta * beta;
        ab[k] = (alpha, beta);
    }
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return None;
    }
    let tau = (-qb + disc.sqrt()) / (2.0 * qa);
    let mut c = [0.0; 3];
    for k in 0..frame.len() {
        c[k] = ab[k].0 * tau + ab[k].1;
    }
    // The maximizer must lie in the past of the level point.
    let mut w = MinkVec::from_parts(tau, &y);
    for (k, e) in frame.iter().enumerate() {
        w -= *e * c[k];
    }
    if w.t <= 0.0 {
        return None;
    }
    Some((tau, c))
}

/// `k` roughly uniform unit vectors of ℝⁿ.
fn sphere_directions(n: usize, k: usize) -> Vec<Vec<f64>> {
    if n == 2 {
        (0..k)
            .map(|i| {
                let th = std::f64::consts::TAU * i as f64 / k as f64;
                vec![th.cos(), th.sin()]
            })
            .collect()
    } else {
        // Fibonacci sphere.
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        (0..k)
            .map(|i| {
                let z = 1.0 - 2.0 * (i as f64 + 0.5) / k as f64;
                let r = (1.0 - z * z).sqrt();
                let th = golden * i as f64;
                vec![r * th.cos(), r * th.sin(), z]
            })
            .collect()
    }
}

/// A gradient line t ↦ r + t·N of the cosmological time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientLine {
    pub retraction: MinkVec,
    pub normal: HypPoint,
    pub stratum: Stratum,
}

impl GradientLine {
    /// The line through a point of the domain.
    pub fn through(dom: &RegularDomain, p: &MinkVec) -> Result<Self, DomainError> {
        let ev = dom.cosmological_time(p)?;
        Ok(Self {
            retraction: ev.retraction,
            normal: ev.normal,
            stratum: ev.stratum,
        })
    }

    /// Validates a (retraction, normal) pair: the point at unit time on the
    /// candidate line must retract back onto it.
    pub fn new(dom: &RegularDomain, r: MinkVec, normal: HypPoint) -> Result<Self, DomainError> {
        let p = r + *normal.vec();
        let ev = dom.cosmological_time(&p)?;
        let scale = 1.0 + r.max_abs();
        if (ev.retraction - r).max_abs() > 1e-8 * scale || (ev.time - 1.0).abs() > 1e-8 {
            return Err(DomainError::NotAGradientLine(format!(
                "point {p:?} retracts to {:?} at time {}",
                ev.retraction, ev.time
            )));
        }
        Ok(Self {
            retraction: ev.retraction,
            normal,
            stratum: ev.stratum,
        })
    }

    /// Point at cosmological time `a`.
    pub fn flow(&self, a: f64) -> MinkVec {
        flow(self, a)
    }
}

pub fn flow(line: &GradientLine, a: f64) -> MinkVec {
    line.retraction + *line.normal.vec() * a
}

/// Intrinsic path metric of the spine.
///
/// Tree spines use edge-weighted shortest paths with Minkowski edge lengths;
/// within one convex face, distances are straight segments. Paths between
/// different faces are routed through vertices.
#[derive(Debug, Clone)]
pub struct SingularSet {
    spine: SpineComplex,
    faces: Vec<FaceData>,
    vertex_dist: Vec<Vec<f64>>,
}

impl SingularSet {
    fn new(spine: &SpineComplex, faces: &[FaceData]) -> Self {
        let nv = spine.vertices.len();
        let mut d = vec![vec![f64::INFINITY; nv]; nv];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        for (k, e) in spine.edges.iter().enumerate() {
            let l = spine.edge_length(k);
            d[e.a][e.b] = d[e.a][e.b].min(l);
            d[e.b][e.a] = d[e.b][e.a].min(l);
        }
        for f in &spine.faces {
            for &i in f {
                for &j in f {
                    let l = (spine.vertices[i] - spine.vertices[j]).spacelike_len();
                    d[i][j] = d[i][j].min(l);
                }
            }
        }
        for k in 0..nv {
            for i in 0..nv {
                for j in 0..nv {
                    let via = d[i][k] + d[k][j];
                    if via < d[i][j] {
                        d[i][j] = via;
                    }
                }
            }
        }
        Self {
            spine: spine.clone(),
            faces: faces.to_vec(),
            vertex_dist: d,
        }
    }

    pub fn spine(&self) -> &SpineComplex {
        &self.spine
    }

    pub fn vertex_distance(&self, i: usize, j: usize) -> f64 {
        self.vertex_dist[i][j]
    }

    /// Vertices a point can leave through, with the straight distance to each.
    fn exits(&self, s: &Stratum) -> Vec<(usize, f64)> {
        match *s {
            Stratum::Vertex(k) => vec![(k, 0.0)],
            Stratum::Edge { index, s } => {
                let e = &self.spine.edges[index];
                let l = self.spine.edge_length(index);
                vec![(e.a, s * l), (e.b, (1.0 - s) * l)]
            }
            Stratum::Face { index, coords } => self.spine.faces[index]
                .iter()
                .zip(&self.faces[index].polygon_in_input_order(&self.spine, index))
                .map(|(&v, c)| {
                    (
                        v,
                        ((c[0] - coords[0]).powi(2) + (c[1] - coords[1]).powi(2)).sqrt(),
                    )
                })
                .collect(),
        }
    }

    pub fn distance(&self, a: &Stratum, b: &Stratum) -> f64 {
        match (a, b) {
            (Stratum::Edge { index: i, s: s1 }, Stratum::Edge { index: j, s: s2 }) if i == j => {
                return (s1 - s2).abs() * self.spine.edge_length(*i);
            }
            (
                Stratum::Face {
                    index: i,
                    coords: c1,
                },
                Stratum::Face {
                    index: j,
                    coords: c2,
                },
            ) if i == j => {
                return ((c1[0] - c2[0]).powi(2) + (c1[1] - c2[1]).powi(2)).sqrt();
            }
            _ => {}
        }
        let mut best = f64::INFINITY;
        for (u, du) in self.exits(a) {
            for (v, dv) in self.exits(b) {
                best = best.min(du + self.vertex_dist[u][v] + dv);
            }
        }
        best
    }
}

impl FaceData {
    fn polygon_in_input_order(&self, spine: &SpineComplex, index: usize) -> Vec<[f64; 2]> {
        spine.faces[index]
            .iter()
            .map(|&i| {
                let v = spine.vertices[i] - self.origin;
                [v.dot(&self.frame[0]), v.dot(&self.frame[1])]
            })
            .collect()
    }
}
