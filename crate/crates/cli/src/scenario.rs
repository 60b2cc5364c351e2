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

//! Scenario files: JSON with a versioned schema field.

use cosmolab_core::domain::{DomainError, GradientLine, RegularDomain, Stratum};
use cosmolab_core::lamination::{
    validate, LaminationError, Leaf, MeasuredLamination, RegionGraph, SpineComplex,
};
use cosmolab_core::levelset::{DistanceParams, LevelError, LinePair, Window};
use cosmolab_core::mink::{HypPoint, MinkError, MinkVec};
use cosmolab_core::wick::Geometry;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;
use thiserror::Error;

pub const SCHEMA: &str = "cosmolab.scenario/1";

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema {0:?}, expected {SCHEMA:?}")]
    Schema(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("lamination rejected: {0}")]
    Lamination(#[from] LaminationError),
    #[error("domain rejected: {0}")]
    Domain(#[from] DomainError),
    #[error("probe {id}: {reason}")]
    Probe { id: String, reason: String },
}

impl From<MinkError> for ScenarioError {
    fn from(e: MinkError) -> Self {
        ScenarioError::Invalid(e.to_string())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Source {
    /// Measured geodesic lamination of ℍ²; no leaves gives the cone.
    Lamination { leaves: Vec<Leaf> },
    /// Explicit spine: vertices as (t, x₁, …, xₙ).
    Spine {
        vertices: Vec<Vec<f64>>,
        #[serde(default)]
        edges: Vec<(usize, usize)>,
        #[serde(default)]
        faces: Vec<Vec<usize>>,
    },
    /// Future light cone of the origin.
    Cone,
}

/// A gradient line: either a spine vertex (a region id for laminations)
/// with a normal given by boost parameters, or the line through a point.
/// A region probe without a boost takes the region's own normal.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub id: String,
    #[serde(default, alias = "region", skip_serializing_if = "Option::is_none")]
    pub vertex: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boost: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweeps {
    #[serde(default = "default_past")]
    pub past: Vec<f64>,
    #[serde(default = "default_future")]
    pub future: Vec<f64>,
    /// Levels for single-level commands and comparisons, descending.
    #[serde(default = "default_levels")]
    pub levels: Vec<f64>,
}

fn default_past() -> Vec<f64> {
    vec![0.4, 0.2, 0.1, 0.05]
}
fn default_future() -> Vec<f64> {
    vec![5.0, 20.0, 100.0]
}
fn default_levels() -> Vec<f64> {
    vec![1.0, 0.5]
}

impl Default for Sweeps {
    fn default() -> Self {
        Self {
            past: default_past(),
            future: default_future(),
            levels: default_levels(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowSpec>,
    #[serde(default = "default_h")]
    pub h: f64,
    #[serde(default = "default_refinements")]
    pub refinements: usize,
    #[serde(default = "default_cells")]
    pub max_cells: usize,
}

fn default_h() -> f64 {
    0.05
}
fn default_refinements() -> usize {
    3
}
fn default_cells() -> usize {
    128
}

impl Default for MeshSpec {
    fn default() -> Self {
        Self {
            window: None,
            h: default_h(),
            refinements: default_refinements(),
            max_cells: default_cells(),
        }
    }
}

/// Auxiliary convex surface for the pairing check: the level `level` of the
/// domain translated by the future-timelike vector `shift`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub shift: Vec<f64>,
    pub level: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sampling {
    #[serde(default = "default_quadruples")]
    pub quadruples: usize,
    #[serde(default = "default_polylines")]
    pub polylines: usize,
    #[serde(default = "default_pairing_samples")]
    pub pairing_samples: usize,
}

fn default_quadruples() -> usize {
    1000
}
fn default_polylines() -> usize {
    100
}
fn default_pairing_samples() -> usize {
    10_000
}

impl Default for Sampling {
    fn default() -> Self {
        Self {
            quadruples: default_quadruples(),
            polylines: default_polylines(),
            pairing_samples: default_pairing_samples(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    pub name: String,
    pub dimension: usize,
    #[serde(default = "default_geometry")]
    pub geometry: Geometry,
    pub source: Source,
    #[serde(default)]
    pub probes: Vec<ProbeSpec>,
    /// Points for `eval`, as (t, x₁, …, xₙ).
    #[serde(default)]
    pub points: Vec<Vec<f64>>,
    #[serde(default)]
    pub sweeps: Sweeps,
    #[serde(default)]
    pub mesh: MeshSpec,
    #[serde(default)]
    pub surfaces: Vec<SurfaceSpec>,
    #[serde(default)]
    pub sampling: Sampling,
    #[serde(default)]
    pub seed: u64,
}

fn default_geometry() -> Geometry {
    Geometry::Flat
}

/// A validated scenario with its domain and resolved probes.
#[derive(Debug, Clone)]
pub struct Built {
    pub scenario: Scenario,
    pub domain: RegularDomain,
    pub lamination: Option<(MeasuredLamination, RegionGraph)>,
    pub probes: Vec<(String, GradientLine)>,
    pub hash: String,
}

impl Built {
    pub fn params(&self) -> DistanceParams {
        let m = &self.scenario.mesh;
        DistanceParams {
            h: m.h,
            refinements: m.refinements,
            max_cells: m.max_cells,
            window: self.window(),
        }
    }

    pub fn window(&self) -> Option<Window> {
        self.scenario
            .mesh
            .window
            .as_ref()
            .and_then(|w| Window::new(&w.lo, &w.hi).ok())
    }

    /// The fixed window, or the spine footprint padded by one unit.
    pub fn window_or_footprint(&self) -> Result<Window, LevelError> {
        if let Some(w) = self.window() {
            return Ok(w);
        }
        let pts: Vec<&[f64]> = self
            .domain
            .spine()
            .vertices
            .iter()
            .map(|v| v.spatial())
            .collect();
        Window::around(&pts, 1.0)
    }

    /// All unordered probe pairs, ids joined by ':'.
    pub fn pairs(&self) -> Vec<LinePair> {
        let p = &self.probes;
        let mut out = Vec::new();
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                out.push(LinePair {
                    id: format!("{}:{}", p[i].0, p[j].0),
                    first: p[i].1,
                    second: p[j].1,
                });
            }
        }
        out
    }
}

pub fn parse_str(text: &str) -> Result<Scenario, ScenarioError> {
    serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn load(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_str(&text)
}

fn positive_list(name: &str, xs: &[f64]) -> Result<(), ScenarioError> {
    if let Some(x) = xs.iter().find(|x| **x <= 0.0 || !x.is_finite()) {
        return Err(ScenarioError::Invalid(format!(
            "{name} contains non-positive level {x}"
        )));
    }
    Ok(())
}

fn mink(n: usize, v: &[f64], what: &str) -> Result<MinkVec, ScenarioError> {
    if v.len() != n + 1 {
        return Err(ScenarioError::Invalid(format!(
            "{what} has {} components, expected {}",
            v.len(),
            n + 1
        )));
    }
    Ok(MinkVec::new(v[0], &v[1..])?)
}

/// Validates a parsed scenario and constructs its domain and probes.
pub fn build(scenario: Scenario) -> Result<Built, ScenarioError> {
    if scenario.schema != SCHEMA {
        return Err(ScenarioError::Schema(scenario.schema));
    }
    let n = scenario.dimension;
    if !(2..=3).contains(&n) {
        return Err(ScenarioError::Invalid(format!(
            "dimension must be 2 or 3, got {n}"
        )));
    }
    if scenario.geometry != Geometry::Flat && n != 2 {
        return Err(ScenarioError::Invalid(format!(
            "{} geometry requires dimension 2, got {n}",
            scenario.geometry.label()
        )));
    }
    let sw = &scenario.sweeps;
    positive_list("sweeps.past", &sw.past)?;
    positive_list("sweeps.future", &sw.future)?;
    positive_list("sweeps.levels", &sw.levels)?;
    let m = &scenario.mesh;
    if m.h <= 0.0 || !m.h.is_finite() {
        return Err(ScenarioError::Invalid(format!(
            "mesh.h must be positive, got {}",
            m.h
        )));
    }
    if let Some(w) = &m.window {
        if w.lo.len() != n {
            return Err(ScenarioError::Invalid(
                "mesh.window has the wrong dimension".into(),
            ));
        }
        Window::new(&w.lo, &w.hi)
            .map_err(|e| ScenarioError::Invalid(format!("mesh.window: {e}")))?;
    }

    let (domain, lamination) = match &scenario.source {
        Source::Cone => (RegularDomain::cone(n), None),
        Source::Lamination { leaves } if leaves.is_empty() => (RegularDomain::cone(n), None),
        Source::Lamination { leaves } => {
            if n != 2 {
                return Err(ScenarioError::Invalid(
                    "laminations define 2+1 domains only".into(),
                ));
            }
            let lam = MeasuredLamination::new(leaves.clone())?;
            let graph = validate(&lam)?;
            let dom = RegularDomain::from_lamination(&lam, &graph)?;
            (dom, Some((lam, graph)))
        }
        Source::Spine {
            vertices,
            edges,
            faces,
        } => {
            let vs = vertices
                .iter()
                .enumerate()
                .map(|(i, v)| mink(n, v, &format!("spine vertex {i}")))
                .collect::<Result<Vec<_>, _>>()?;
            let spine = SpineComplex::explicit(vs, edges.clone(), faces.clone())?;
            (RegularDomain::from_spine(spine)?, None)
        }
    };

    let region_lines = match &lamination {
        Some((_, graph)) => domain.region_lines(graph)?,
        None => Vec::new(),
    };
    let mut probes = Vec::with_capacity(scenario.probes.len());
    for p in &scenario.probes {
        if probes.iter().any(|(id, _)| id == &p.id) || p.id.contains(':') || p.id.is_empty() {
            return Err(ScenarioError::Probe {
                id: p.id.clone(),
                reason: "ids must be unique, non-empty and free of ':'".into(),
            });
        }
        let bad = |reason: String| ScenarioError::Probe {
            id: p.id.clone(),
            reason,
        };
        let line = match (p.vertex, &p.point) {
            (Some(v), None) => {
                if v >= domain.spine().vertices.len() {
                    return Err(bad(format!("unknown vertex or region {v}")));
                }
                match (&p.boost, &lamination) {
                    // Without a boost a region probe uses the region's own normal.
                    (None, Some(_)) => region_lines[v],
                    _ => {
                        let boost = p.boost.clone().unwrap_or_else(|| vec![0.0; n]);
                        if boost.len() != n {
                            return Err(bad(format!("boost needs {n} parameters")));
                        }
                        let normal =
                            HypPoint::from_boost(&boost).map_err(|e| bad(e.to_string()))?;
                        let r = domain.stratum_point(&Stratum::Vertex(v));
                        GradientLine::new(&domain, r, normal).map_err(|e| bad(e.to_string()))?
                    }
                }
            }
            (None, Some(pt)) if p.boost.is_none() => {
                let q = mink(n, pt, "probe point").map_err(|e| bad(e.to_string()))?;
                GradientLine::through(&domain, &q).map_err(|e| bad(e.to_string()))?
            }
            _ => {
                return Err(bad(
                    "give either vertex (with optional boost) or point".into()
                ))
            }
        };
        probes.push((p.id.clone(), line));
    }
    for (i, pt) in scenario.points.iter().enumerate() {
        mink(n, pt, &format!("point {i}"))?;
    }
    for (i, s) in scenario.surfaces.iter().enumerate() {
        let v = mink(n, &s.shift, &format!("surface {i} shift"))?;
        if !(v.norm_sq() < 0.0 && v.t > 0.0) {
            return Err(ScenarioError::Invalid(format!(
                "surface {i} shift must be future timelike"
            )));
        }
        if s.level <= 0.0 || !s.level.is_finite() {
            return Err(ScenarioError::Invalid(format!(
                "surface {i} level must be positive"
            )));
        }
    }
    let hash = scenario_hash(&scenario);
    Ok(Built {
        scenario,
        domain,
        lamination,
        probes,
        hash,
    })
}

/// SHA-256 of the canonical JSON serialization.
pub fn scenario_hash(s: &Scenario) -> String {
    let canon = serde_json::to_vec(s).expect("scenario serializes");
    hex::encode(Sha256::digest(&canon))
}
