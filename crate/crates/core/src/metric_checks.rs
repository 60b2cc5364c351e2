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

//! Finite-sample testers for CAT(0), tree and bi-Lipschitz properties.
//!
//! A [`SampledMetric`] is a finite distance matrix with per-entry error bars.
//! Sources are oracles (error 0), level meshes via [`SampledMetric::from_level`]
//! and CSV files in the `id,id,distance,error` layout.

use crate::domain::{GradientLine, RegularDomain};
use crate::levelset::{
    level_distance, DistanceParams, LevelComparison, LevelError, PairComparison,
};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{Read, Write};
use thiserror::Error;

/// Triangle inequality slack, in units of the summed error bars.
pub const TRIANGLE_BARS: f64 = 3.0;
/// Quadruples with a pairwise distance below this many error bars are skipped.
pub const NOISE_BARS: f64 = 5.0;
const HINGE_SAMPLES: usize = 512;
const HINGE_TOL: f64 = 1e-12;
const HINGE_ITERS: usize = 200;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("distance matrix must be square over {0} ids")]
    Shape(usize),
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("entry ({0}, {1}) is negative or not finite")]
    BadEntry(String, String),
    #[error("diagonal entry for {0} is nonzero")]
    Diagonal(String),
    #[error("entries ({0}, {1}) and ({1}, {0}) differ")]
    Asymmetric(String, String),
    #[error("triangle {0}, {1}, {2} fails by {3:e} beyond the error bars")]
    Triangle(String, String, String, f64),
    #[error("id sets differ: {0}")]
    IdMismatch(String),
    #[error("pair ({0}, {1}) has zero reference distance")]
    ZeroReference(String, String),
    #[error("pair ({0}, {1}) missing from the CSV")]
    MissingPair(String, String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Level(#[from] LevelError),
}

/// Finite metric with error bars, validated on construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledMetric {
    ids: Vec<String>,
    d: Vec<f64>,
    err: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    id1: String,
    id2: String,
    distance: f64,
    error: f64,
}

impl SampledMetric {
    /// Row-major `d` and `err`, both n × n.
    pub fn new(ids: Vec<String>, d: Vec<f64>, err: Vec<f64>) -> Result<Self, MetricError> {
        let n = ids.len();
        if d.len() != n * n || err.len() != n * n {
            return Err(MetricError::Shape(n));
        }
        let mut seen = std::collections::BTreeSet::new();
        for id in &ids {
            if !seen.insert(id) {
                return Err(MetricError::DuplicateId(id.clone()));
            }
        }
        let m = Self { ids, d, err };
        m.validate()?;
        Ok(m)
    }

    /// Exact metric without error bars.
    pub fn exact(ids: Vec<String>, d: Vec<f64>) -> Result<Self, MetricError> {
        let n = ids.len();
        Self::new(ids, d, vec![0.0; n * n])
    }

    /// Builds the matrix from a distance function on index pairs.
    pub fn from_fn<F>(ids: Vec<String>, mut f: F) -> Result<Self, MetricError>
    where
        F: FnMut(usize, usize) -> (f64, f64),
    {
        let n = ids.len();
        let mut d = vec![0.0; n * n];
        let mut err = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let (v, e) = f(i, j);
                d[i * n + j] = v;
                d[j * n + i] = v;
                err[i * n + j] = e;
                err[j * n + i] = e;
            }
        }
        Self::new(ids, d, err)
    }

    /// Intrinsic distances on level `a` between the feet of the given lines.
    pub fn from_level(
        dom: &RegularDomain,
        a: f64,
        lines: &[(String, GradientLine)],
        params: &DistanceParams,
    ) -> Result<Self, MetricError> {
        let n = lines.len();
        let jobs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let ests: Vec<Result<(f64, f64), LevelError>> = jobs
            .par_iter()
            .map(|&(i, j)| {
                level_distance(dom, a, &lines[i].1, &lines[j].1, params).map(|e| (e.value, e.error))
            })
            .collect();
        let mut table = BTreeMap::new();
        for (job, r) in jobs.into_iter().zip(ests) {
            table.insert(job, r?);
        }
        let ids = lines.iter().map(|l| l.0.clone()).collect();
        Self::from_fn(ids, |i, j| table[&(i, j)])
    }

    fn validate(&self) -> Result<(), MetricError> {
        let n = self.len();
        for i in 0..n {
            if self.d[i * n + i] != 0.0 {
                return Err(MetricError::Diagonal(self.ids[i].clone()));
            }
            for j in 0..n {
                let (v, e) = (self.d[i * n + j], self.err[i * n + j]);
                if !(v >= 0.0) || !v.is_finite() || !(e >= 0.0) || !e.is_finite() {
                    return Err(MetricError::BadEntry(
                        self.ids[i].clone(),
                        self.ids[j].clone(),
                    ));
                }
                if v != self.d[j * n + i] || e != self.err[j * n + i] {
                    return Err(MetricError::Asymmetric(
                        self.ids[i].clone(),
                        self.ids[j].clone(),
                    ));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let excess = self.dist(i, k) - self.dist(i, j) - self.dist(j, k);
                    let bars = self.error(i, k) + self.error(i, j) + self.error(j, k);
                    if excess > TRIANGLE_BARS * bars + 1e-12 * self.dist(i, k) {
                        return Err(MetricError::Triangle(
                            self.ids[i].clone(),
                            self.ids[j].clone(),
                            self.ids[k].clone(),
                            excess,
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.len() + j]
    }

    pub fn error(&self, i: usize, j: usize) -> f64 {
        self.err[i * self.len() + j]
    }

    /// Largest distance in the sample.
    pub fn diameter(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    /// Largest error bar among the six pairs of a quadruple.
    pub fn quadruple_error(&self, q: [usize; 4]) -> f64 {
        pairs_of(q)
            .iter()
            .map(|&(i, j)| self.error(i, j))
            .fold(0.0, f64::max)
    }

    /// All distances multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            ids: self.ids.clone(),
            d: self.d.iter().map(|v| v * s).collect(),
            err: self.err.iter().map(|v| v * s).collect(),
        }
    }

    /// Reads `id,id,distance,error` rows; every unordered pair must appear.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self, MetricError> {
        let mut rd = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        let mut ids: Vec<String> = Vec::new();
        let mut entries = BTreeMap::new();
        for row in rd.deserialize() {
            let row: CsvRow = row?;
            for id in [&row.id1, &row.id2] {
                if !ids.contains(id) {
                    ids.push(id.clone());
                }
            }
            if row.id1 != row.id2 {
                let key = if row.id1 < row.id2 {
                    (row.id1, row.id2)
                } else {
                    (row.id2, row.id1)
                };
                entries.insert(key, (row.distance, row.error));
            }
        }
        let lookup = ids.clone();
        let mut missing = None;
        let m = Self::from_fn(ids, |i, j| {
            let (a, b) = (&lookup[i], &lookup[j]);
            let key = if a < b {
                (a.clone(), b.clone())
            } else {
                (b.clone(), a.clone())
            };
            match entries.get(&key) {
                Some(&v) => v,
                None => {
                    missing.get_or_insert((a.clone(), b.clone()));
                    (0.0, 0.0)
                }
            }
        });
        if let Some((a, b)) = missing {
            return Err(MetricError::MissingPair(a, b));
        }
        m
    }

    /// Writes the upper triangle as `id,id,distance,error` rows.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), MetricError> {
        let mut wr = csv::Writer::from_writer(writer);
        let n = self.len();
        for i in 0..n {
            for j in i + 1..n {
                wr.serialize(CsvRow {
                    id1: self.ids[i].clone(),
                    id2: self.ids[j].clone(),
                    distance: self.dist(i, j),
                    error: self.error(i, j),
                })?;
            }
        }
        wr.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

fn pairs_of(q: [usize; 4]) -> [(usize, usize); 6] {
    [
        (q[0], q[1]),
        (q[0], q[2]),
        (q[0], q[3]),
        (q[1], q[2]),
        (q[1], q[3]),
        (q[2], q[3]),
    ]
}

/// Distance between the apexes of triangles (x₁, x₂, y₁) and (x₁, x₂, y₂)
/// built on opposite sides of a base of length `e`. Heights clamp at zero
/// when a triangle does not close.
fn opposite_apex_distance(e: f64, a: f64, b: f64, c: f64, d: f64) -> f64 {
    if e <= 0.0 {
        return a + d;
    }
    let p1 = (a * a - b * b + e * e) / (2.0 * e);
    let p2 = (d * d - c * c + e * e) / (2.0 * e);
    let h1 = (a * a - p1 * p1).max(0.0).sqrt();
    let h2 = (d * d - p2 * p2).max(0.0).sqrt();
    (p1 - p2).hypot(h1 + h2)
}

/// Margin of the CAT(0) four-point condition for (x₁, y₁, x₂, y₂).
///
/// The sides x₁y₁, y₁x₂, x₂y₂, y₂x₁ are kept and the x-diagonal e is the
/// hinge. For each e the y-diagonal is largest with the two triangles on
/// opposite sides, giving g(e). The margin is
/// max over admissible e of min(e − d(x₁,x₂), g(e) − d(y₁,y₂)), so it is
/// nonnegative exactly when a planar comparison quadrilateral exists.
/// Quadrilaterals that cannot close use the collinear configuration at the
/// midpoint of the empty admissible interval.
pub fn cat0_four_point(m: &SampledMetric, q: [usize; 4]) -> f64 {
    let [x1, y1, x2, y2] = q;
    let (a, b, c, d) = (
        m.dist(x1, y1),
        m.dist(y1, x2),
        m.dist(x2, y2),
        m.dist(y2, x1),
    );
    let (dx, dy) = (m.dist(x1, x2), m.dist(y1, y2));
    cat0_margin_from_sides([a, b, c, d], dx, dy)
}

/// [`cat0_four_point`] on raw side lengths and diagonals.
pub fn cat0_margin_from_sides(sides: [f64; 4], dx: f64, dy: f64) -> f64 {
    let [a, b, c, d] = sides;
    let lo = (a - b).abs().max((c - d).abs());
    let hi = (a + b).min(c + d);
    let score = |e: f64| (e - dx).min(opposite_apex_distance(e, a, b, c, d) - dy);
    if hi <= lo {
        return score(0.5 * (lo + hi));
    }
    let step = (hi - lo) / HINGE_SAMPLES as f64;
    let mut best = (lo, score(lo));
    for k in 1..=HINGE_SAMPLES {
        let e = if k == HINGE_SAMPLES {
            hi
        } else {
            lo + step * k as f64
        };
        let s = score(e);
        if s > best.1 {
            best = (e, s);
        }
    }
    // Golden-section refinement on the bracket around the best sample.
    let (mut l, mut r) = ((best.0 - step).max(lo), (best.0 + step).min(hi));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut u = r - g * (r - l);
    let mut v = l + g * (r - l);
    let (mut fu, mut fv) = (score(u), score(v));
    for _ in 0..HINGE_ITERS {
        if r - l <= HINGE_TOL * hi.max(1.0) {
            break;
        }
        if fu >= fv {
            r = v;
            v = u;
            fv = fu;
            u = r - g * (r - l);
            fu = score(u);
        } else {
            l = u;
            u = v;
            fu = fv;
            v = l + g * (r - l);
            fv = score(v);
        }
    }
    best.1.max(fu).max(fv)
}

/// min over z of max(d(x,z), d(y,z)) − d(x,y)/2.
pub fn approx_midpoint_defect(m: &SampledMetric, x: usize, y: usize) -> f64 {
    let best = (0..m.len())
        .map(|z| m.dist(x, z).max(m.dist(y, z)))
        .fold(f64::INFINITY, f64::min);
    best - 0.5 * m.dist(x, y)
}

/// Largest of the three pair sums minus the second largest.
///
/// This is the labeling-free form of the four-point tree condition and is
/// zero exactly on tree metrics.
pub fn tree_four_point(m: &SampledMetric, q: [usize; 4]) -> f64 {
    let [x, y, z, w] = q;
    let mut s = [
        m.dist(x, y) + m.dist(z, w),
        m.dist(x, z) + m.dist(y, w),
        m.dist(x, w) + m.dist(y, z),
    ];
    s.sort_by(f64::total_cmp);
    (s[2] - s[1]).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioBounds {
    pub min: f64,
    pub max: f64,
    /// Pairs that entered the bounds.
    pub pairs: usize,
}

/// min and max of m₁/m₂ over shared pairs, skipping pairs where both
/// distances are below the combined error.
pub fn bilipschitz_ratio(
    m1: &SampledMetric,
    m2: &SampledMetric,
) -> Result<RatioBounds, MetricError> {
    let mut a: Vec<&String> = m1.ids.iter().collect();
    let mut b: Vec<&String> = m2.ids.iter().collect();
    a.sort();
    b.sort();
    if a != b {
        return Err(MetricError::IdMismatch(format!(
            "{} vs {} ids",
            a.len(),
            b.len()
        )));
    }
    let map: Vec<usize> = m1.ids.iter().map(|id| m2.index_of(id).unwrap()).collect();
    let (mut lo, mut hi, mut count) = (f64::INFINITY, 0.0f64, 0);
    for i in 0..m1.len() {
        for j in i + 1..m1.len() {
            let (u, v) = (m1.dist(i, j), m2.dist(map[i], map[j]));
            let tol = m1.error(i, j) + m2.error(map[i], map[j]);
            if u < tol && v < tol {
                continue;
            }
            if v <= 0.0 {
                return Err(MetricError::ZeroReference(
                    m1.ids[i].clone(),
                    m1.ids[j].clone(),
                ));
            }
            lo = lo.min(u / v);
            hi = hi.max(u / v);
            count += 1;
        }
    }
    if count == 0 {
        lo = 1.0;
        hi = 1.0;
    }
    Ok(RatioBounds {
        min: lo,
        max: hi,
        pairs: count,
    })
}

/// Checks lo·d_b ≤ d_a + tol and d_a ≤ hi·d_b + tol on every shared pair,
/// with tol the combined error bars. `labels` are the two level values.
pub fn compare_metrics(
    ma: &SampledMetric,
    mb: &SampledMetric,
    labels: (f64, f64),
    bounds: (f64, f64),
) -> Result<LevelComparison, MetricError> {
    if ma.ids != mb.ids {
        return Err(MetricError::IdMismatch(
            "metrics must share ids in order".into(),
        ));
    }
    let (lo_bound, hi_bound) = bounds;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut pairs = Vec::new();
    let mut violations = 0;
    for i in 0..ma.len() {
        for j in i + 1..ma.len() {
            let (da, db) = (ma.dist(i, j), mb.dist(i, j));
            let tol = ma.error(i, j) + mb.error(i, j);
            let lower_ok = lo_bound * db <= da + tol;
            let upper_ok = da <= hi_bound * db + tol;
            if !(lower_ok && upper_ok) {
                violations += 1;
            }
            if db > tol {
                lo = lo.min(da / db);
                hi = hi.max(da / db);
            }
            pairs.push(PairComparison {
                pair_id: format!("{}:{}", ma.ids[i], ma.ids[j]),
                d_a: da,
                d_b: db,
                tol,
                lower_ok,
                upper_ok,
            });
        }
    }
    Ok(LevelComparison {
        a: labels.0,
        b: labels.1,
        lower_bound: lo_bound,
        upper_bound: hi_bound,
        pairs,
        min_ratio: lo,
        max_ratio: hi,
        violations,
    })
}

/// Uniform quadruples of node indices, rejecting those with a pairwise
/// distance below [`NOISE_BARS`] error bars. Stops after `50 · count` draws.
pub fn sample_quadruples<R: Rng>(m: &SampledMetric, count: usize, rng: &mut R) -> Vec<[usize; 4]> {
    let n = m.len();
    let mut out = Vec::with_capacity(count);
    if n == 0 {
        return out;
    }
    let mut draws = 0;
    while out.len() < count && draws < 50 * count.max(1) {
        draws += 1;
        let q = [0; 4].map(|_| rng.gen_range(0..n));
        let noisy = pairs_of(q).iter().any(|&(i, j)| {
            let e = m.error(i, j);
            e > 0.0 && m.dist(i, j) < NOISE_BARS * e
        });
        if !noisy {
            out.push(q);
        }
    }
    out
}

/// Equal-width histogram as (lower edge, upper edge, count) rows.
pub fn histogram(values: &[f64], bins: usize) -> Vec<(f64, f64, usize)> {
    if values.is_empty() || bins == 0 {
        return Vec::new();
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo {
        (hi - lo) / bins as f64
    } else {
        1.0
    };
    let mut counts = vec![0usize; bins];
    for v in values {
        let k = (((v - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(k, c)| (lo + width * k as f64, lo + width * (k + 1) as f64, c))
        .collect()
}

/// Writes a histogram with header `lo,hi,count`.
pub fn write_histogram_csv<W: Write>(
    rows: &[(f64, f64, usize)],
    writer: W,
) -> Result<(), MetricError> {
    let mut wr = csv::Writer::from_writer(writer);
    wr.write_record(["lo", "hi", "count"])?;
    for (lo, hi, c) in rows {
        wr.serialize((lo, hi, c))?;
    }
    wr.flush().map_err(csv::Error::from)?;
    Ok(())
}
