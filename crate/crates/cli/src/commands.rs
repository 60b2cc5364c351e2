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

//! One function per command. Module errors become failed check records.

use crate::report::{Check, Provenance, Sidecars};
use crate::scenario::Built;
use clap::ValueEnum;
use cosmolab_core::domain::Stratum;
use cosmolab_core::levelset::{
    compare_levels, estimate_gauss_curvature, future_sweep, level_distance, mesh_level,
    pairing_bound_check, past_sweep, project_curve_length, ConvexSurface, LevelComparison,
    PastSweep, SweepRow, Window,
};
use cosmolab_core::metric_checks::{
    cat0_four_point, histogram, sample_quadruples, tree_four_point, write_histogram_csv,
    SampledMetric,
};
use cosmolab_core::mink::MinkVec;
use cosmolab_core::rng::stream_rng;
use cosmolab_core::wick::{
    distance_factor, flat_level, wick_compare_levels, wick_level_distance, wick_pairing_check,
    wick_past_sweep, Geometry, WickGeometry,
};
use rand::Rng;
use serde::Serialize;

use Provenance::{ArtifactTolerance, TheoryBound};

/// Relative past-limit tolerance against the tree oracle.
pub const PAST_TOL: f64 = 0.02;
/// Relative future tolerance against the hyperbolic distance.
pub const FUTURE_TOL: f64 = 0.05;
/// Absolute future tolerance for pairs with equal normals.
pub const FUTURE_ABS_TOL: f64 = 0.02;
pub const CAT0_BARS: f64 = 3.0;
pub const CAT0_HARD_BARS: f64 = 5.0;
pub const CAT0_FRACTION: f64 = 0.995;
pub const TREE_TOL: f64 = 0.02;
pub const PAIRING_TOL: f64 = 1e-9;
pub const IDENTITY_TOL: f64 = 1e-12;
pub const CURVATURE_REL_TOL: f64 = 0.05;
/// Local mesh resolution for curvature stencils, in cells per curvature radius.
const CURVATURE_CELLS_PER_RADIUS: f64 = 16.0;
pub const CURVATURE_ABS_TOL: f64 = 0.02;
const HISTOGRAM_BINS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Eval,
    Dist,
    SweepPast,
    SweepFuture,
    Wick,
    CheckCat0,
    CheckTree,
    CheckBilip,
    CheckProjection,
    CheckPairing,
    CheckCurvature,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Dist => "dist",
            Command::SweepPast => "sweep-past",
            Command::SweepFuture => "sweep-future",
            Command::Wick => "wick",
            Command::CheckCat0 => "check-cat0",
            Command::CheckTree => "check-tree",
            Command::CheckBilip => "check-bilip",
            Command::CheckProjection => "check-projection",
            Command::CheckPairing => "check-pairing",
            Command::CheckCurvature => "check-curvature",
        }
    }

    /// Stream index for this command's random numbers.
    fn stream(&self) -> u64 {
        *self as u64 * 1000
    }
}

pub struct Ctx<'a> {
    pub built: &'a Built,
    pub seed: u64,
    pub out: &'a mut Sidecars,
}

impl Ctx<'_> {
    fn geometry(&self) -> Geometry {
        self.built.scenario.geometry
    }

    fn wick(&self) -> Option<WickGeometry> {
        WickGeometry::new(self.geometry(), self.built.domain.clone()).ok()
    }

    /// Flat level and length factor for the scenario level `a`.
    fn flat(&self, a: f64) -> Result<(f64, f64), String> {
        let g = self.geometry();
        Ok((
            flat_level(g, a).map_err(|e| e.to_string())?,
            distance_factor(g, a).map_err(|e| e.to_string())?,
        ))
    }

    fn levels_desc(&self) -> Vec<f64> {
        let mut l = self.built.scenario.sweeps.levels.clone();
        l.sort_by(|a, b| b.total_cmp(a));
        l.dedup();
        l
    }

    /// Records a sidecar failure as a failed check.
    fn save(&mut self, checks: &mut Vec<Check>, r: Result<(), String>) {
        if let Err(e) = r {
            checks.push(Check::failed("output", e));
        }
    }
}

pub fn run(cmd: Command, ctx: &mut Ctx<'_>) -> Vec<Check> {
    let mut checks = match cmd {
        Command::Eval => eval(ctx),
        Command::Dist => dist(ctx),
        Command::SweepPast => sweep_past(ctx),
        Command::SweepFuture => sweep_future(ctx),
        Command::Wick => wick(ctx),
        Command::CheckCat0 => check_cat0(ctx, cmd),
        Command::CheckTree => check_tree(ctx),
        Command::CheckBilip => check_bilip(ctx),
        Command::CheckProjection => check_projection(ctx, cmd),
        Command::CheckPairing => check_pairing(ctx, cmd),
        Command::CheckCurvature => check_curvature(ctx),
    };
    if checks.is_empty() {
        checks.push(Check::failed(
            cmd.name(),
            "nothing to check; the scenario lacks inputs for this command",
        ));
    }
    checks
}

fn point(n: usize, v: &[f64]) -> MinkVec {
    MinkVec::from_parts(v[0], &v[1..=n])
}

fn fmt_level(a: f64) -> String {
    format!("{a}")
}

fn eval(ctx: &mut Ctx<'_>) -> Vec<Check> {
    let b = ctx.built;
    let n = b.domain.dim();
    let mut checks = Vec::new();
    let mut rows = vec![{
        let mut h = vec!["index".to_string(), "time".into(), "stratum".into()];
        h.extend((0..=n).map(|k| format!("r{k}")));
        h.extend((0..=n).map(|k| format!("n{k}")));
        h
    }];
    for (i, v) in b.scenario.points.iter().enumerate() {
        let name = format!("eval/point-{i:04}");
        match b.domain.cosmological_time(&point(n, v)) {
            Ok(ev) => {
                let mut c = Check::info(name)
                    .value("time", ev.time)
                    .message(ev.stratum.label());
                let mut row = vec![i.to_string(), ev.time.to_string(), ev.stratum.label()];
                for k in 0..=n {
                    c = c.value(&format!("r{k}"), ev.retraction.comp(k));
                    row.push(ev.retraction.comp(k).to_string());
                }
                for k in 0..=n {
                    c = c.value(&format!("n{k}"), ev.normal.vec().comp(k));
                    row.push(ev.normal.vec().comp(k).to_string());
                }
                checks.push(c);
                rows.push(row);
            }
            Err(e) => checks.push(Check::failed(name, e)),
        }
    }
    let r = ctx.out.with("eval.csv", |h| -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(h);
        for row in &rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    });
    ctx.save(&mut checks, r);
    checks
}

#[derive(Serialize)]
struct DistRow {
    geometry: &'static str,
    pair_id: String,
    a: f64,
    value: f64,
    error: f64,
    extrapolated: f64,
}

fn dist(ctx: &mut Ctx<'_>) -> Vec<Check> {
    let b = ctx.built;
    let params = b.params();
    let wick = ctx.wick();
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for pair in b.pairs() {
        for &a in &b.scenario.sweeps.levels {
            let name = format!("dist/{}/a={}", pair.id, fmt_level(a));
            let est = match &wick {
                Some(g) => wick_level_distance(g, a, &pair.first, &pair.second, &params)
                    .map_err(|e| e.to_string()),
                None => level_distance(&b.domain, a, &pair.first, &pair.second, &params)
                    .map_err(|e| e.to_string()),
            };
            match est {
                Ok(e) => {
                    checks.push(
                        Check::info(name)
                            .value("distance", e.value)
                            .value("extrapolated", e.extrapolated)
                            .bar("distance", e.error),
                    );
                    rows.push(DistRow {
                        geometry: ctx.geometry().label(),
                        pair_id: pair.id.clone(),
                        a,
                        value: e.value,
                        error: e.error,
                        extrapolated: e.extrapolated,
                    });
                }
                Err(e) => checks.push(Check::failed(name, e)),
            }
        }
    }
    let r = ctx.out.rows("dist.csv", &rows);
    ctx.save(&mut checks, r);
    checks
}

#[derive(Serialize)]
struct GeoRow<'a> {
    geometry: &'static str,
    pair_id: &'a str,
    a: f64,
    value: f64,
    error: f64,
    oracle: f64,
    gap: f64,
}

fn geo_rows<'a>(g: Geometry, rows: &'a [SweepRow]) -> Vec<GeoRow<'a>> {
    rows.iter()
        .map(|r| GeoRow {
            geometry: g.label(),
            pair_id: &r.pair_id,
            a: r.a,
            value: r.value,
            error: r.error,
            oracle: r.oracle,
            gap: r.gap,
        })
        .collect()
}

fn run_past(ctx: &Ctx<'_>) -> Result<PastSweep, String> {
    let b = ctx.built;
    let params = b.params();
    match ctx.wick() {
        Some(g) => wick_past_sweep(&g, &b.pairs(), &b.scenario.sweeps.past, &params)
            .map_err(|e| e.to_string()),
        None => past_sweep(&b.domain, &b.pairs(), &b.scenario.sweeps.past, &params)
            .map_err(|e| e.to_string()),
    }
}

fn sweep_past(ctx: &mut Ctx<'_>) -> Vec<Check> {
    let sweep = match run_past(ctx) {
        Ok(s) => s,
        Err(e) => return vec![Check::failed("sweep-past", e)],
    };
    let mut checks: Vec<Check> = sweep
        .limits
        .iter()
        .map(|l| {
            let mut c = Check::verdict(format!("sweep-past/{}", l.pair_id), l.gap <= PAST_TOL)
                .value("extrapolated", l.extrapolated)
                .value("oracle", l.oracle)
                .value("gap", l.gap)
                .bar("extrapolated", l.error)
                .threshold(
                    "|extrapolated - oracle| / max(oracle, 0.1) <= value",
                    PAST_TOL,
                    ArtifactTolerance,
                )
                .threshold("limit equals the tree distance", 0.0, TheoryBound);
            if let Some(len) = l.retracted_length {
                c = c.value("retracted_length", len);
            }
            c
        })
        .collect();
    let g = ctx.geometry();
    let r = ctx.out.rows("sweep_past.csv", &geo_rows(g, &sweep.rows));
    ctx.save(&mut checks, r);
    let r = ctx.out.rows("sweep_past_limits.csv", &sweep.limits);
    ctx.save(&mut checks, r);
    checks
}

fn sweep_future(ctx: &mut Ctx<'_>) -> Vec<Check> {
    let b = ctx.built;
    if ctx.geometry() != Geometry::Flat {
        return vec![Check::failed(
            "sweep-future",
            "future renormalization is defined for flat geometry only",
        )];
    }
    let mut levels = b.scenario.sweeps.future.clone();
    levels.sort_by(f64::total_cmp);
    let rows = match future_sweep(&b.domain, &b.pairs(), &levels, &b.params()) {
        Ok(r) => r,
        Err(e) => return vec![Check::failed("sweep-future", e)],
    };
    let mut checks = Vec::new();
    for pair in b.pairs() {
        let mine: Vec<&SweepRow> = rows.iter().filter(|r| r.pair_id == pair.id).collect();
        let Some(last) = mine.last() else { continue };
        let (tol, rule) = if last.oracle > 1e-12 {
            (
                FUTURE_TOL * last.oracle,
                "final gap <= value (5% of the hyperbolic distance)",
            )
        } else {
            (FUTURE_ABS_TOL, "final gap <= value (equal normals)")
        };
        let monotone = mine
            .windows(2)
            .all(|w| w[1].gap <= w[0].gap + w[0].error + w[1].error);
        checks.push(
            Check::verdict(
                format!("sweep-future/{}", pair.id),
                last.gap <= tol && monotone,
            )
            .value("renormalized", last.value)
            .value("oracle", last.oracle)
            .value("gap", last.gap)
            .value("monotone", if monotone { 1.0 } else { 0.0 })
            .bar("renormalized", last.error)
            .threshold(rule, tol, ArtifactTolerance)
            .threshold(
                "gap non-increasing within error bars",
                0.0,
                ArtifactTolerance,
            ),
        );
    }
    let r = ctx
        .out
        .rows("sweep_future.csv", &geo_rows(Geometry::Flat, &rows));
    ctx.save(&mut checks, r);
    checks
}

#[derive(Serialize)]
struct WickRow {
    geometry: &'static str,
    pair_id: String,
    a: f64,
    flat_level: f64,
    factor: f64,
    value: f64,
    error: f64,
}

fn comparison_check(prefix: &str, cmp: &LevelComparison) -> Check {
    Check::verdict(
        format!("{prefix}/a={}:b={}", fmt_level(cmp.a), fmt_level(cmp.b)),
        cmp.violations == 0,
    )
    .value("pairs", cmp.pairs.len() as f64)
    .value("violations", cmp.violations as f64)
    .value("min_ratio", cmp.min_ratio)
    .value("max_ratio", cmp.max_ratio)
    .threshold(
        "d_a >= lower_bound * d_b - tol",
        cmp.lower_bound,
        TheoryBound,
    )
    .threshold(
        "d_a <= upper_bound * d_b + tol",
        cmp.upper_bound,
        TheoryBound,
    )
}

fn wick(ctx: &mut Ctx<'_>) -> Vec<Check> {
    let b = ctx.built;
    let Some(g) = ctx.wick() else {
        return vec![Check::failed(
            "wick",
            "the scenario geometry must be ds or ads",
        )];
    };
    let params = b.params();
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for pair in b.pairs() {
        for &a in &b.scenario.sweeps.levels {
            let res = ctx.flat(a).and_then(|(fl, factor)| {
                let w = wick_level_distance(&g, a, &pair.first, &pair.second, &params)
                    .map_err(|e| e.to_string())?;
                let f = level_distance(&b.domain, fl, &pair.first, &pair.second, &params)
                    .map_err(|e| e.to_string())?;
                Ok((fl, factor, w, f))
            });
            match res {
                Ok((fl, factor, w, f)) => {
                    worst = worst.max((w.value - factor * f.value).abs() / (1.0 + w.value));
                    rows.push(WickRow {
                        geometry: g.kind.label(),
                        pair_id: pair.id.clone(),
                        a,
                        flat_level: fl,
                        factor,
                        value: w.value,
                        error: w.error,
                    });
                }
                Err(e) => failures.push(format!("{} at {}: {e}", pair.id, fmt_level(a))),
            }
        }
    }
    let mut id = Check::verdict(
        "wick/identity",
        failures.is_empty() && worst <= IDENTITY_TOL,
    )
    .value("max_relative_deviation", worst)
    .value("samples", rows.len() as f64)
    .threshold(
        "|d_wick - factor * d_flat| / (1 + d_wick) <= value",
        IDENTITY_TOL,
        ArtifactTolerance,
    );
    if !failures.is_empty() {
        id = id.message(failures.join("; "));
    }
    checks.push(id);
    let levels = ctx.levels_desc();
    for w in levels.windows(2) {
        match wick_compare_levels(&g, w[0], w[1], &b.pairs(), &params) {
            Ok(cmp) => checks.push(comparison_check("wick/bilip", &cmp)),
            Err(e) => checks.push(Check::failed(
                format!("wick/bilip/a={}:b={}", fmt_level(w[0]), fmt_level(w[1])),
                e,
            )),
        }
    }
    let r = ctx.out.rows("wick.csv", &rows);
    ctx.save(&mut checks, r);
    checks
}

/// Level metric over the probes at scenario level `a`, rescaled for Wick
/// geometries.
fn level_metric(ctx: &Ctx<'_>, a: f64) -> Result<SampledMetric, String> {
    let b = ctx.built;
    let (fl, factor) = ctx.flat(a)?;
    let m = SampledMetric::from_level(&b.domain, fl, &b.probes, &b.params())
        .map_err(|e| e.to_string())?;
    Ok(m.scaled(factor))
}

fn check_cat0(ctx: &mut Ctx<'_>, cmd: Command) -> Vec<Check> {
    let b = ctx.built;
    if b.probes.len() < 4 {
        return vec![Check::failed(
            "check-cat0",
            "at least four probes are needed",
        )];
    }
    let mut checks = Vec::new();
    for (l, &a) in b.scenario.sweeps.levels.iter().enumerate() {
        let name = format!("check-cat0/a={}", fmt_level(a));
        let m = match level_metric(ctx, a) {
            Ok(m) => m,
            Err(e) => {
                checks.push(Check::failed(name, e));
                continue;
            }
        };
        let mut rng = stream_rng(ctx.seed, cmd.stream() + l as u64);
        let qs = sample_quadruples(&m, b.scenario.sampling.quadruples, &mut rng);
        let (mut within, mut beyond, mut worst) = (0usize, 0usize, f64::INFINITY);
        let mut margins = Vec::with_capacity(qs.len());
        for q in &qs {
            let margin = cat0_four_point(&m, *q);
            let err = m.quadruple_error(*q);
            within += usize::from(margin >= -CAT0_BARS * err);
            beyond += usize::from(margin < -CAT0_HARD_BARS * err);
            worst = worst.min(margin);
            margins.push(margin);
        }
        let frac = if qs.is_empty() {
            0.0
        } else {
            within as f64 / qs.len() as f64
        };
        checks.push(
            Check::verdict(name, !qs.is_empty() && frac >= CAT0_FRACTION && beyond == 0)
                .value("quadruples", qs.len() as f64)
                .value("fraction_within_bars", frac)
                .value("beyond_hard_bars", beyond as f64)
                .value("min_margin", if worst.is_finite() { worst } else { 0.0 })
                .threshold("margin >= 0", 0.0, TheoryBound)
                .threshold(
                    "margin >= -3 error bars on this fraction",
                    CAT0_FRACTION,
                    ArtifactTolerance,
                )
                .threshold(
                    "no margin below -value error bars",
                    CAT0_HARD_BARS,
                    ArtifactTolerance,
                ),
        );
        let tag = fmt_level(a);
        let r = ctx
            .out
            .with(&format!("metric_a{tag}.csv"), |h| m.write_csv(h));
        ctx.save(&mut checks, r);
        let hist = histogram(&margins, HISTOGRAM_BINS);
        let r = ctx.out.with(&format!("cat0_margins_a{tag}.csv"), |h| {
            write_histogram_csv(&hist, h)
        });
        ctx.save(&mut checks, r);
    }
    checks
}

fn check_tree(ctx: &mut Ctx<'_>) -> Vec<Check> {
    let b = ctx.built;
    let n = b.probes.len();
    if n < 4 {
        return vec![Check::failed(
            "check-tree",
            "at least four probes are needed",
        )];
    }
    let sweep = match run_past(ctx) {
        Ok(s) => s,
        Err(e) => return vec![Check::failed("check-tree", e)],
    };
    let ids: Vec<String> = b.probes.iter().map(|p| p.0.clone()).collect();
    let metric = SampledMetric::from_fn(ids.clone(), |i, j| {
        let key = format!("{}:{}", ids[i.min(j)], ids[i.max(j)]);
        sweep
            .limits
            .iter()
            .find(|l| l.pair_id == key)
            .map(|l| (l.extrapolated.max(0.0), l.error))
            .unwrap_or((f64::NAN, 0.0))
    });
    let metric = match metric {
        Ok(m) => m,
        Err(e) => return vec![Check::failed("check-tree", e)],
    };
    // Same floor as the past-limit gap, so a point-like limit is not judged on noise.
    let scale = metric.diameter().max(0.1);
    let mut worst = 0.0f64;
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    worst = worst.max(tree_four_point(&metric, [i, j, k, l]) / scale);
                    count += 1;
                }
            }
        }
    }
    let mut checks = vec![Check::verdict("check-tree", worst <= TREE_TOL)
        .value("quadruples", count as f64)
        .value("max_relative_defect", worst)
        .value("diameter", scale)
        .threshold(
            "four-point defect / max(diameter, 0.1) <= value",
            TREE_TOL,
            ArtifactTolerance,
        )
        .threshold("past limit is a tree metric", 0.0, TheoryBound)];
    let r = ctx
        .out
        .with("past_limit_metric.csv", |h| metric.write_csv(h));
    ctx.save(&mut checks, r);
    checks
}

fn check_bilip(ctx: &mut Ctx<'_>) -> Vec<Check> {
    let b = ctx.built;
    let params = b.params();
    let wick = ctx.wick();
    let levels = ctx.levels_desc();
    let mut checks = Vec::new();
    for w in levels.windows(2) {
        let (a, bb) = (w[0], w[1]);
        let res = match &wick {
            Some(g) => {
                wick_compare_levels(g, a, bb, &b.pairs(), &params).map_err(|e| e.to_string())
            }
            None => {
                compare_levels(&b.domain, a, bb, &b.pairs(), &params).map_err(|e| e.to_string())
            }
        };
        match res {
            Ok(cmp) => {
                checks.push(comparison_check("check-bilip", &cmp));
                let r = ctx.out.rows(
                    &format!("bilip_a{}_b{}.csv", fmt_level(a), fmt_level(bb)),
                    &cmp.pairs,
                );
                ctx.save(&mut checks, r);
            }
            Err(e) => checks.push(Check::failed(
                format!("check-bilip/a={}:b={}", fmt_level(a), fmt_level(bb)),
                e,
            )),
        }
    }
    checks
}

#[derive(Serialize)]
struct ProjectionRow {
    index: usize,
    b: f64,
    a: f64,
    nodes: usize,
    length_b: f64,
    length_a: f64,
}

fn check_projection(ctx: &mut Ctx<'_>, cmd: Command) -> Vec<Check> {
    let b = ctx.built;
    let levels = ctx.levels_desc();
    if levels.len() < 2 {
        return vec![Check::failed(
            "check-projection",
            "two distinct levels are needed",
        )];
    }
    let window = match b.window_or_footprint() {
        Ok(w) => w,
        Err(e) => return vec![Check::failed("check-projection", e)],
    };
    let n = b.domain.dim();
    let (lo, hi) = (*levels.last().unwrap(), levels[0]);
    let tol = 2.0 * b.scenario.mesh.h;
    let mut rng = stream_rng(ctx.seed, cmd.stream());
    let mut rows = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    let mut failures = Vec::new();
    for index in 0..b.scenario.sampling.polylines {
        let lb = rng.gen_range(lo..hi);
        let la = rng.gen_range(lb..=hi);
        let nodes = rng.gen_range(2..10);
        let mut x: Vec<f64> = (0..n)
            .map(|k| rng.gen_range(window.lo[k]..window.hi[k]))
            .collect();
        let mut poly = Vec::with_capacity(nodes);
        for _ in 0..nodes {
            poly.push(b.domain.level_point(lb, &x).point);
            for xk in x.iter_mut() {
                *xk += rng.gen_range(-0.3..0.3);
            }
        }
        match project_curve_length(&b.domain, &poly, lb, la) {
            Ok((len_b, len_a)) => {
                worst = worst.max(len_b - len_a);
                rows.push(ProjectionRow {
                    index,
                    b: lb,
                    a: la,
                    nodes,
                    length_b: len_b,
                    length_a: len_a,
                });
            }
            Err(e) => failures.push(format!("polyline {index}: {e}")),
        }
    }
    let mut c = Check::verdict(
        "check-projection",
        failures.is_empty() && !rows.is_empty() && worst <= tol,
    )
    .value("polylines", rows.len() as f64)
    .value("max_excess", if worst.is_finite() { worst } else { 0.0 })
    .threshold("L_b <= L_a", 0.0, TheoryBound)
    .threshold("L_b - L_a <= value (2h)", tol, ArtifactTolerance);
    if !failures.is_empty() {
        c = c.message(failures.join("; "));
    }
    let mut checks = vec![c];
    let r = ctx.out.rows("projection.csv", &rows);
    ctx.save(&mut checks, r);
    checks
}

fn check_pairing(ctx: &mut Ctx<'_>, cmd: Command) -> Vec<Check> {
    let b = ctx.built;
    let n = b.domain.dim();
    let window = match b.window_or_footprint() {
        Ok(w) => w,
        Err(e) => return vec![Check::failed("check-pairing", e)],
    };
    let mut checks = Vec::new();
    for (j, s) in b.scenario.surfaces.iter().enumerate() {
        let name = format!("check-pairing/surface-{j:02}");
        let shift = point(n, &s.shift);
        let rep = b
            .domain
            .translated(&shift)
            .map_err(|e| e.to_string())
            .and_then(|aux| ConvexSurface::new(aux, s.level, window).map_err(|e| e.to_string()))
            .and_then(|surf| {
                let mut rng = stream_rng(ctx.seed, cmd.stream() + j as u64);
                pairing_bound_check(
                    &b.domain,
                    &surf,
                    b.scenario.sampling.pairing_samples,
                    &mut rng,
                )
                .map_err(|e| e.to_string())
            });
        let rep = match rep {
            Ok(r) => r,
            Err(e) => {
                checks.push(Check::failed(name, e));
                continue;
            }
        };
        checks.push(
            Check::verdict(name.clone(), rep.samples > 0 && rep.margin >= -PAIRING_TOL)
                .value("samples", rep.samples as f64)
                .value("max_pairing", rep.max_pairing)
                .value("sup_time", rep.sup_time)
                .value("inf_time", rep.inf_time)
                .value("bound", rep.bound)
                .value("pointwise_margin", rep.pointwise_margin)
                .threshold("max pairing <= sup T / inf T", 0.0, TheoryBound)
                .threshold("slack", PAIRING_TOL, ArtifactTolerance),
        );
        if let Some(g) = ctx.wick() {
            let wname = format!("{name}/{}", g.kind.label());
            match wick_pairing_check(g.kind, &rep) {
                Ok((max, bound)) => checks.push(
                    Check::verdict(wname, max <= bound + PAIRING_TOL)
                        .value("max_pairing", max)
                        .value("bound", bound)
                        .threshold("rescaled pairing <= rescaled time ratio", 0.0, TheoryBound)
                        .threshold("slack", PAIRING_TOL, ArtifactTolerance),
                ),
                Err(e) => checks.push(Check::failed(wname, e)),
            }
        }
        let r = ctx
            .out
            .rows(&format!("pairing_surface{j:02}.csv"), &rep.per_sample);
        ctx.save(&mut checks, r);
    }
    checks
}

fn same_stratum(a: &Stratum, b: &Stratum) -> bool {
    match (a, b) {
        (Stratum::Vertex(i), Stratum::Vertex(j)) => i == j,
        (Stratum::Edge { index: i, .. }, Stratum::Edge { index: j, .. }) => i == j,
        (Stratum::Face { index: i, .. }, Stratum::Face { index: j, .. }) => i == j,
        _ => false,
    }
}

fn check_curvature(ctx: &mut Ctx<'_>) -> Vec<Check> {
    let b = ctx.built;
    if b.domain.dim() != 2 {
        return vec![Check::failed(
            "check-curvature",
            "curvature estimation needs dimension 2",
        )];
    }
    let m = &b.scenario.mesh;
    let mut checks = Vec::new();
    for &a in &b.scenario.sweeps.levels {
        // The level has curvature radius a, so the stencil must resolve it.
        let h = m.h.min(a / CURVATURE_CELLS_PER_RADIUS);
        for (id, line) in &b.probes {
            let name = format!("check-curvature/{id}/a={}", fmt_level(a));
            let p = line.flow(a);
            let s = p.spatial();
            let half = 4.0 * h;
            let mesh = match Window::new(&[s[0] - half, s[1] - half], &[s[0] + half, s[1] + half])
                .and_then(|w| mesh_level(&b.domain, a, w, h, 8))
            {
                Ok(x) => x,
                Err(e) => {
                    checks.push(Check::failed(name, e));
                    continue;
                }
            };
            let spacing = mesh.h();
            let node = mesh.nearest(s);
            let x = mesh.nodes()[node].xbar;
            let stratum_at = |dx: f64, dy: f64| {
                let lp = b.domain.level_point(a, &[x[0] + dx, x[1] + dy]);
                b.domain.cosmological_time(&lp.point).map(|ev| ev.stratum)
            };
            let centre = match stratum_at(0.0, 0.0) {
                Ok(s) => s,
                Err(e) => {
                    checks.push(Check::failed(name, e));
                    continue;
                }
            };
            let r = 2.0 * spacing;
            let straddles = [
                (r, 0.0),
                (-r, 0.0),
                (0.0, r),
                (0.0, -r),
                (r, r),
                (-r, -r),
                (r, -r),
                (-r, r),
            ]
            .iter()
            .any(|&(dx, dy)| {
                stratum_at(dx, dy)
                    .map(|s| !same_stratum(&s, &centre))
                    .unwrap_or(true)
            });
            let k = match estimate_gauss_curvature(&mesh, node) {
                Ok(k) => k,
                Err(e) => {
                    checks.push(Check::failed(name, e));
                    continue;
                }
            };
            let expected = match centre {
                Stratum::Vertex(_) => -1.0 / (a * a),
                _ => 0.0,
            };
            let tol = if expected != 0.0 {
                CURVATURE_REL_TOL * expected.abs()
            } else {
                CURVATURE_ABS_TOL
            };
            let c = if straddles {
                Check::info(name).message("stencil straddles a stratum boundary")
            } else {
                Check::verdict(name, (k - expected).abs() <= tol).threshold(
                    "|K - K_expected| <= value",
                    tol,
                    ArtifactTolerance,
                )
            };
            checks.push(
                c.value("curvature", k)
                    .value("expected", expected)
                    .value("spacing", spacing),
            );
        }
    }
    checks
}
