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

use super::geodesic::{level_distance, DistanceEstimate, DistanceParams};
use super::shorten::polyline_length;
use super::LevelError;
use crate::domain::{GradientLine, RegularDomain};
use crate::mink::hyperbolic_distance;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Two gradient lines with a stable identifier.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinePair {
    pub id: String,
    pub first: GradientLine,
    pub second: GradientLine,
}

/// One CSV row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub pair_id: String,
    pub a: f64,
    pub value: f64,
    pub error: f64,
    pub oracle: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub intercept: f64,
    pub slope: f64,
    /// Largest input error plus largest fit residual.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PastLimit {
    pub pair_id: String,
    pub extrapolated: f64,
    pub error: f64,
    pub oracle: f64,
    /// |extrapolated − oracle| / max(oracle, 0.1).
    pub gap: f64,
    /// Length of the retracted shortened path at the smallest level.
    pub retracted_length: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PastSweep {
    pub rows: Vec<SweepRow>,
    pub limits: Vec<PastLimit>,
}

/// Least-squares line through (a, value) extrapolated to a = 0.
pub fn extrapolate_affine(points: &[(f64, f64, f64)]) -> Extrapolation {
    let m = points.len() as f64;
    let ma = points.iter().map(|p| p.0).sum::<f64>() / m;
    let mv = points.iter().map(|p| p.1).sum::<f64>() / m;
    let saa: f64 = points.iter().map(|p| (p.0 - ma).powi(2)).sum();
    let sav: f64 = points.iter().map(|p| (p.0 - ma) * (p.1 - mv)).sum();
    let slope = if saa > 0.0 { sav / saa } else { 0.0 };
    let intercept = mv - slope * ma;
    let resid = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).abs())
        .fold(0.0, f64::max);
    let err = points.iter().map(|p| p.2).fold(0.0, f64::max);
    Extrapolation {
        intercept,
        slope,
        error: err + resid,
    }
}

/// Least-squares quadratic through (a, value) extrapolated to a = 0. Needs
/// three distinct abscissae; falls back to the affine fit otherwise.
pub fn extrapolate_quadratic(points: &[(f64, f64, f64)]) -> Extrapolation {
    let mut m = [[0.0f64; 3]; 3];
    let mut r = [0.0f64; 3];
    for p in points {
        let basis = [1.0, p.0, p.0 * p.0];
        for i in 0..3 {
            for k in 0..3 {
                m[i][k] += basis[i] * basis[k];
            }
            r[i] += basis[i] * p.1;
        }
    }
    // Cramer's rule on the 3×3 normal equations.
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&m);
    if points.len() < 3 || !(d.abs() > 1e-14 * m[2][2].powi(3).max(1e-300)) {
        return extrapolate_affine(points);
    }
    let mut c = [0.0; 3];
    for (j, cj) in c.iter_mut().enumerate() {
        let mut mj = m;
        for i in 0..3 {
            mj[i][j] = r[i];
        }
        *cj = det(&mj) / d;
    }
    let resid = points
        .iter()
        .map(|p| (p.1 - c[0] - c[1] * p.0 - c[2] * p.0 * p.0).abs())
        .fold(0.0, f64::max);
    let err = points.iter().map(|p| p.2).fold(0.0, f64::max);
    Extrapolation {
        intercept: c[0],
        slope: c[1],
        error: err + resid,
    }
}

pub(crate) fn check_levels(levels: &[f64], needed: usize) -> Result<(), LevelError> {
    if levels.len() < needed {
        return Err(LevelError::TooFewLevels {
            needed,
            got: levels.len(),
        });
    }
    if let Some(&bad) = levels.iter().find(|a| !(**a > 0.0) || !a.is_finite()) {
        return Err(LevelError::BadLevel(bad));
    }
    Ok(())
}

/// Distances for every (pair, level) in parallel, in input order.
pub(crate) fn distance_table(
    dom: &RegularDomain,
    pairs: &[LinePair],
    levels: &[f64],
    params: &DistanceParams,
) -> Result<Vec<Vec<DistanceEstimate>>, LevelError> {
    let jobs: Vec<(usize, usize)> = (0..pairs.len())
        .flat_map(|i| (0..levels.len()).map(move |k| (i, k)))
        .collect();
    let results: Vec<Result<DistanceEstimate, LevelError>> = jobs
        .par_iter()
        .map(|&(i, k)| level_distance(dom, levels[k], &pairs[i].first, &pairs[i].second, params))
        .collect();
    let mut table: Vec<Vec<DistanceEstimate>> = vec![Vec::with_capacity(levels.len()); pairs.len()];
    for ((i, _), r) in jobs.into_iter().zip(results) {
        table[i].push(r?);
    }
    Ok(table)
}

/// Level distances as a → 0, extrapolated affinely and compared with the
/// intrinsic distance of the retraction points on the spine.
pub fn past_sweep(
    dom: &RegularDomain,
    pairs: &[LinePair],
    levels: &[f64],
    params: &DistanceParams,
) -> Result<PastSweep, LevelError> {
    check_levels(levels, 3)?;
    let sing = dom.singular_set();
    let table = distance_table(dom, pairs, levels, params)?;
    let mut rows = Vec::new();
    let mut limits = Vec::new();
    for (pair, ests) in pairs.iter().zip(&table) {
        let oracle = sing.distance(&pair.first.stratum, &pair.second.stratum);
        let scale = oracle.max(0.1);
        let mut pts = Vec::with_capacity(levels.len());
        for (&a, e) in levels.iter().zip(ests) {
            rows.push(SweepRow {
                pair_id: pair.id.clone(),
                a,
                value: e.value,
                error: e.error,
                oracle,
                gap: (e.value - oracle).abs() / scale,
            });
            pts.push((a, e.value, e.error));
        }
        let fit = extrapolate_affine(&pts);
        let smallest = levels
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(y.1))
            .map(|(k, _)| k)
            .unwrap_or(0);
        let retracted: Vec<_> = ests[smallest]
            .path
            .iter()
            .map(|p| dom.cosmological_time(p).map(|ev| ev.retraction))
            .collect::<Result<_, _>>()?;
        limits.push(PastLimit {
            pair_id: pair.id.clone(),
            extrapolated: fit.intercept,
            error: fit.error,
            oracle,
            gap: (fit.intercept - oracle).abs() / scale,
            retracted_length: Some(polyline_length(&retracted)),
        });
    }
    Ok(PastSweep { rows, limits })
}

/// Renormalized distances d_a / a against the hyperbolic distance of the
/// normals.
pub fn future_sweep(
    dom: &RegularDomain,
    pairs: &[LinePair],
    levels: &[f64],
    params: &DistanceParams,
) -> Result<Vec<SweepRow>, LevelError> {
    check_levels(levels, 3)?;
    let table = distance_table(dom, pairs, levels, params)?;
    let mut rows = Vec::new();
    for (pair, ests) in pairs.iter().zip(&table) {
        let oracle = hyperbolic_distance(&pair.first.normal, &pair.second.normal)
            .map_err(crate::domain::DomainError::from)?;
        for (&a, e) in levels.iter().zip(ests) {
            let value = e.value / a;
            rows.push(SweepRow {
                pair_id: pair.id.clone(),
                a,
                value,
                error: e.error / a,
                oracle,
                gap: (value - oracle).abs(),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairComparison {
    pub pair_id: String,
    pub d_a: f64,
    pub d_b: f64,
    pub tol: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelComparison {
    pub a: f64,
    pub b: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub pairs: Vec<PairComparison>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub violations: usize,
}

/// Checks d_b ≤ d_a ≤ (a/b)²·d_b on every pair, within the combined error
/// bars.
pub fn compare_levels(
    dom: &RegularDomain,
    a: f64,
    b: f64,
    pairs: &[LinePair],
    params: &DistanceParams,
) -> Result<LevelComparison, LevelError> {
    compare_scaled(
        dom,
        (a, b),
        (a, b),
        (1.0, 1.0),
        (1.0, (a / b).powi(2)),
        pairs,
        params,
    )
}

/// Level comparison on rescaled distances: the distance at label `a` is
/// `factors.0` times the flat distance at level `flat.0`, likewise for `b`,
/// and `lo·d_b ≤ d_a ≤ hi·d_b` is checked.
pub(crate) fn compare_scaled(
    dom: &RegularDomain,
    labels: (f64, f64),
    flat: (f64, f64),
    factors: (f64, f64),
    bounds: (f64, f64),
    pairs: &[LinePair],
    params: &DistanceParams,
) -> Result<LevelComparison, LevelError> {
    check_levels(&[flat.0, flat.1], 2)?;
    let table = distance_table(dom, pairs, &[flat.0, flat.1], params)?;
    let (lo_bound, hi_bound) = bounds;
    let mut out = Vec::with_capacity(pairs.len());
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut violations = 0;
    for (pair, ests) in pairs.iter().zip(&table) {
        let da = ests[0].scaled(factors.0);
        let db = ests[1].scaled(factors.1);
        let tol = da.error + db.error;
        let lower_ok = lo_bound * db.value <= da.value + tol;
        let upper_ok = da.value <= hi_bound * db.value + tol;
        if !(lower_ok && upper_ok) {
            violations += 1;
        }
        if db.value > tol {
            let r = da.value / db.value;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        out.push(PairComparison {
            pair_id: pair.id.clone(),
            d_a: da.value,
            d_b: db.value,
            tol,
            lower_ok,
            upper_ok,
        });
    }
    Ok(LevelComparison {
        a: labels.0,
        b: labels.1,
        lower_bound: lo_bound,
        upper_bound: hi_bound,
        pairs: out,
        min_ratio: lo,
        max_ratio: hi,
        violations,
    })
}
