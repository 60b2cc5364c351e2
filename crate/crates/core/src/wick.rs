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

//! De Sitter and anti-de Sitter rescalings of flat regular domains.
//!
//! Rotating the flat metric along the cosmological gradient turns the flat
//! time T into 𝒯 = argth T (de Sitter, T < 1) or 𝒯 = arctan T (anti-de
//! Sitter). On the orthogonal distribution the metric is scaled by
//! 1/(1 − T²) or 1/(1 + T²), so curves inside a level have their lengths
//! scaled by the square root of that factor: cosh 𝒯 and cos 𝒯.

use crate::domain::{GradientLine, RegularDomain};
use crate::levelset::sweep::{check_levels, compare_scaled, distance_table};
use crate::levelset::{
    extrapolate_quadratic, DistanceEstimate, DistanceParams, LevelComparison, LevelError, LinePair,
    PairingReport, PastLimit, PastSweep, SweepRow,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Geometry {
    #[serde(rename = "flat")]
    Flat,
    #[serde(rename = "ds")]
    DeSitter,
    #[serde(rename = "ads")]
    AntiDeSitter,
}

impl Geometry {
    pub fn label(&self) -> &'static str {
        match self {
            Geometry::Flat => "flat",
            Geometry::DeSitter => "ds",
            Geometry::AntiDeSitter => "ads",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WickError {
    #[error("flat time {0} is outside the admissible range")]
    TimeOutOfRange(f64),
    #[error("level {0} is outside the admissible range for {1:?}")]
    LevelOutOfRange(f64, Geometry),
    #[error("rescaled geometries need n = 2, got n = {0}")]
    UnsupportedDimension(usize),
    #[error("{0:?} has no Wick rescaling")]
    NotRescaled(Geometry),
    #[error("focal point: 1 + a·λ = {0} ≤ 0")]
    FocalPoint(f64),
    #[error("no closed form for {0:?}")]
    Unsupported(Geometry),
    #[error("barrier argument {0} is outside (−1, 1)")]
    BarrierDomain(f64),
    #[error("pairing {alpha} at flat time {time} has no rescaled normal")]
    DegeneratePairing { alpha: f64, time: f64 },
    #[error(transparent)]
    Level(#[from] LevelError),
}

/// 𝒯 = argth T.
pub fn ds_time(t: f64) -> Result<f64, WickError> {
    if !(t > 0.0 && t < 1.0) {
        return Err(WickError::TimeOutOfRange(t));
    }
    Ok(t.atanh())
}

/// 𝒯 = arctan T.
pub fn ads_time(t: f64) -> Result<f64, WickError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(WickError::TimeOutOfRange(t));
    }
    Ok(t.atan())
}

fn check_level(kind: Geometry, a: f64) -> Result<(), WickError> {
    let ok = match kind {
        Geometry::Flat => a > 0.0 && a.is_finite(),
        Geometry::DeSitter => a > 0.0 && a.is_finite(),
        Geometry::AntiDeSitter => a > 0.0 && a < FRAC_PI_2,
    };
    if ok {
        Ok(())
    } else {
        Err(WickError::LevelOutOfRange(a, kind))
    }
}

/// Flat level carrying the rescaled level 𝒯 = a.
pub fn flat_level(kind: Geometry, a: f64) -> Result<f64, WickError> {
    check_level(kind, a)?;
    Ok(match kind {
        Geometry::Flat => a,
        Geometry::DeSitter => a.tanh(),
        Geometry::AntiDeSitter => a.tan(),
    })
}

/// Length factor from the flat level to the rescaled level 𝒯 = a.
pub fn distance_factor(kind: Geometry, a: f64) -> Result<f64, WickError> {
    check_level(kind, a)?;
    Ok(match kind {
        Geometry::Flat => 1.0,
        Geometry::DeSitter => a.cosh(),
        Geometry::AntiDeSitter => a.cos(),
    })
}

/// A flat 2+1 domain viewed through a Wick rotation.
#[derive(Debug, Clone)]
pub struct WickGeometry {
    pub kind: Geometry,
    pub domain: RegularDomain,
}

impl WickGeometry {
    pub fn new(kind: Geometry, domain: RegularDomain) -> Result<Self, WickError> {
        if kind == Geometry::Flat {
            return Err(WickError::NotRescaled(kind));
        }
        if domain.dim() != 2 {
            return Err(WickError::UnsupportedDimension(domain.dim()));
        }
        Ok(Self { kind, domain })
    }
}

/// Intrinsic distance on the rescaled level 𝒯 = a.
pub fn wick_level_distance(
    geom: &WickGeometry,
    a: f64,
    line1: &GradientLine,
    line2: &GradientLine,
    params: &DistanceParams,
) -> Result<DistanceEstimate, WickError> {
    let flat = flat_level(geom.kind, a)?;
    let factor = distance_factor(geom.kind, a)?;
    let est = crate::levelset::level_distance(&geom.domain, flat, line1, line2, params)?;
    Ok(est.scaled(factor))
}

/// Bi-Lipschitz factors between rescaled levels a ≥ b on distances:
/// (1, (sinh a / sinh b)²) for de Sitter and
/// ((cos a / cos b)², (sin a / sin b)²) for anti-de Sitter.
pub fn wick_bilip_bounds(kind: Geometry, a: f64, b: f64) -> Result<(f64, f64), WickError> {
    check_level(kind, a)?;
    check_level(kind, b)?;
    if a < b {
        return Err(WickError::LevelOutOfRange(a, kind));
    }
    Ok(match kind {
        Geometry::Flat => (1.0, (a / b).powi(2)),
        Geometry::DeSitter => (1.0, (a.sinh() / b.sinh()).powi(2)),
        Geometry::AntiDeSitter => ((a.cos() / b.cos()).powi(2), (a.sin() / b.sin()).powi(2)),
    })
}

/// Rescaled level comparison on sampled pairs.
pub fn wick_compare_levels(
    geom: &WickGeometry,
    a: f64,
    b: f64,
    pairs: &[LinePair],
    params: &DistanceParams,
) -> Result<LevelComparison, WickError> {
    let bounds = wick_bilip_bounds(geom.kind, a, b)?;
    let flat = (flat_level(geom.kind, a)?, flat_level(geom.kind, b)?);
    let factors = (
        distance_factor(geom.kind, a)?,
        distance_factor(geom.kind, b)?,
    );
    Ok(compare_scaled(
        &geom.domain,
        (a, b),
        flat,
        factors,
        bounds,
        pairs,
        params,
    )?)
}

/// Past sweep in the rescaled time. The distance factor is even in 𝒯, so the
/// values carry a quadratic term already at leading order; the limit is a
/// least-squares quadratic in 𝒯 evaluated at 0.
pub fn wick_past_sweep(
    geom: &WickGeometry,
    pairs: &[LinePair],
    levels: &[f64],
    params: &DistanceParams,
) -> Result<PastSweep, WickError> {
    check_levels(levels, 3)?;
    let flat: Vec<f64> = levels
        .iter()
        .map(|&a| flat_level(geom.kind, a))
        .collect::<Result<_, _>>()?;
    let factors: Vec<f64> = levels
        .iter()
        .map(|&a| distance_factor(geom.kind, a))
        .collect::<Result<_, _>>()?;
    let table = distance_table(&geom.domain, pairs, &flat, params)?;
    let sing = geom.domain.singular_set();
    let mut rows = Vec::new();
    let mut limits = Vec::new();
    for (pair, ests) in pairs.iter().zip(&table) {
        let oracle = sing.distance(&pair.first.stratum, &pair.second.stratum);
        let scale = oracle.max(0.1);
        let mut pts = Vec::with_capacity(levels.len());
        for ((&a, &f), e) in levels.iter().zip(&factors).zip(ests) {
            let e = e.scaled(f);
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
        let fit = extrapolate_quadratic(&pts);
        limits.push(PastLimit {
            pair_id: pair.id.clone(),
            extrapolated: fit.intercept,
            error: fit.error,
            oracle,
            gap: (fit.intercept - oracle).abs() / scale,
            retracted_length: None,
        });
    }
    Ok(PastSweep { rows, limits })
}

/// |⟨Ñ, ñ⟩| after rescaling, from the flat pairing α at flat time T.
///
/// With the metric scaled by h along the gradient and by f across it,
/// α̃ = α / √(α² − (α² − 1)·h/f), where h/f = 1/(1 − T²) (de Sitter) or
/// 1/(1 + T²) (anti-de Sitter).
pub fn wick_pairing(kind: Geometry, alpha: f64, t: f64) -> Result<f64, WickError> {
    let ratio = match kind {
        Geometry::Flat => return Ok(alpha),
        Geometry::DeSitter => {
            ds_time(t)?;
            1.0 / (1.0 - t * t)
        }
        Geometry::AntiDeSitter => {
            ads_time(t)?;
            1.0 / (1.0 + t * t)
        }
    };
    let den = alpha * alpha - (alpha * alpha - 1.0) * ratio;
    if !(den > 0.0) {
        return Err(WickError::DegeneratePairing { alpha, time: t });
    }
    Ok(alpha / den.sqrt())
}

/// Pairing bound from the sup and inf of the flat time on the surface:
/// S/I flat, sinh(argth S)/sinh(argth I) de Sitter, tan(arctan S)/tan(arctan I)
/// anti-de Sitter.
pub fn wick_pairing_bound(kind: Geometry, sup: f64, inf: f64) -> Result<f64, WickError> {
    Ok(match kind {
        Geometry::Flat => sup / inf,
        Geometry::DeSitter => ds_time(sup)?.sinh() / ds_time(inf)?.sinh(),
        Geometry::AntiDeSitter => ads_time(sup)?.tan() / ads_time(inf)?.tan(),
    })
}

/// Rescaled pairing check over the samples of a flat pairing report.
/// Returns (max rescaled pairing, bound).
pub fn wick_pairing_check(kind: Geometry, rep: &PairingReport) -> Result<(f64, f64), WickError> {
    let mut max = 0.0f64;
    for s in &rep.per_sample {
        max = max.max(wick_pairing(kind, s.pairing, s.time)?);
    }
    let bound = wick_pairing_bound(kind, rep.sup_time, rep.inf_time)?;
    Ok((max, bound))
}

/// Gauss curvature of the level at distance a from a surface with principal
/// curvatures λ₁, λ₂.
///
/// Flat: −λ₁λ₂ / ((1 + aλ₁)(1 + aλ₂)). De Sitter uses the closed-form
/// transport −(2 − 2Hτ + τ²)/(1 − 2Hτ + 2τ²) with τ = tanh a and
/// H = −(λ₁ + λ₂)/2, which presumes an initial curvature of −2.
pub fn curvature_transport(l1: f64, l2: f64, a: f64, geometry: Geometry) -> Result<f64, WickError> {
    match geometry {
        Geometry::Flat => {
            for l in [l1, l2] {
                let f = 1.0 + a * l;
                if f <= 0.0 {
                    return Err(WickError::FocalPoint(f));
                }
            }
            Ok(-l1 * l2 / ((1.0 + a * l1) * (1.0 + a * l2)))
        }
        Geometry::DeSitter => {
            let tau = a.tanh();
            let h = -0.5 * (l1 + l2);
            Ok(-(2.0 - 2.0 * h * tau + tau * tau) / (1.0 - 2.0 * h * tau + 2.0 * tau * tau))
        }
        Geometry::AntiDeSitter => Err(WickError::Unsupported(geometry)),
    }
}

/// Barrier levels (lower, upper) of the de Sitter k-time construction.
pub fn ds_k_barrier(b: f64, h0: f64, h1: f64) -> Result<(f64, f64), WickError> {
    if !(b > 1.0) || !b.is_finite() {
        return Err(WickError::BarrierDomain(b));
    }
    let b2 = b * b;
    let up_arg = b / (b2 + 1.0).sqrt();
    let upper = up_arg.atanh();
    let lo_arg = h0 / (b2 + 2.0) + (h1 * h1 + (b2 - 1.0) * (b2 + 2.0)).sqrt() / (b2 + 2.0);
    if !(lo_arg > -1.0 && lo_arg < 1.0) {
        return Err(WickError::BarrierDomain(lo_arg));
    }
    Ok((lo_arg.atanh(), upper))
}

/// Limit of upper − lower as b → ∞: (series limit ½ ln(3 − 2H₀), quoted form
/// ½ ln(3 − H₀)).
pub fn ds_barrier_gap_limit(h0: f64) -> (f64, f64) {
    (0.5 * (3.0 - 2.0 * h0).ln(), 0.5 * (3.0 - h0).ln())
}
