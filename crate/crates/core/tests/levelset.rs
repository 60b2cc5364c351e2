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

use cosmolab_core::domain::{GradientLine, RegularDomain};
use cosmolab_core::lamination::{validate, Leaf, MeasuredLamination, SpineComplex};
use cosmolab_core::levelset::*;
use cosmolab_core::mink::{hyperbolic_distance, HypPoint, MinkVec};
use cosmolab_core::rng::stream_rng;
use std::f64::consts::PI;

fn one_edge() -> RegularDomain {
    let spine = SpineComplex::explicit(
        vec![MinkVec::new2(0.0, 0.0, 0.0), MinkVec::new2(0.0, 1.0, 0.0)],
        vec![(0, 1)],
        vec![],
    )
    .unwrap();
    RegularDomain::from_spine(spine).unwrap()
}

fn line(dom: &RegularDomain, r: MinkVec, n: HypPoint) -> GradientLine {
    GradientLine::new(dom, r, n).unwrap()
}

fn boosted(eta: f64) -> HypPoint {
    HypPoint::new(MinkVec::new2(eta.cosh(), eta.sinh(), 0.0)).unwrap()
}

/// Vertex lines through region representatives of a lamination domain.
fn region_lines(lam: &MeasuredLamination) -> (RegularDomain, Vec<GradientLine>) {
    let g = validate(lam).unwrap();
    let dom = RegularDomain::from_lamination(lam, &g).unwrap();
    let lines = g
        .regions
        .iter()
        .map(|r| {
            let n = HypPoint::from_klein(&r.representative).unwrap();
            line(&dom, dom.spine().vertices[r.id], n)
        })
        .collect();
    (dom, lines)
}

#[test]
fn cone_mesh_lies_on_the_hyperboloid() {
    let c = RegularDomain::cone(2);
    let w = Window::new(&[-2.0, -2.0], &[2.0, 2.0]).unwrap();
    let m = mesh_level(&c, 1.0, w, 0.1, 256).unwrap();
    for nd in m.nodes() {
        let r2 = nd.xbar[0] * nd.xbar[0] + nd.xbar[1] * nd.xbar[1];
        assert!((nd.point.t - (1.0 + r2).sqrt()).abs() < 1e-12);
        assert!((c.cosmological_time(&nd.point).unwrap().time - 1.0).abs() < 1e-9);
    }
    let fine = mesh_level(&c, 1.0, w, 0.05, 256).unwrap();
    let ratio = fine.edge_count() as f64 / m.edge_count() as f64;
    assert!((ratio - 4.0).abs() < 0.2, "{ratio}");
}

#[test]
fn band_mesh_is_flat_over_the_segment() {
    let d = one_edge();
    assert!((d.level_height(1.0, &[0.5, 0.0]) - 1.0).abs() < 1e-15);
}

#[test]
fn cone_and_band_distances() {
    let c = RegularDomain::cone(2);
    let p = DistanceParams::default();
    let l1 = line(&c, MinkVec::zero(2), HypPoint::origin(2));
    let l2 = line(&c, MinkVec::zero(2), boosted(1.0));
    let d = level_distance(&c, 1.0, &l1, &l2, &p).unwrap();
    assert!((d.value - 1.0).abs() < 0.01 && d.error < 0.01, "{d:?}");
    assert_eq!(level_distance(&c, 1.0, &l1, &l1, &p).unwrap().value, 0.0);

    let b = one_edge();
    let b1 = line(&b, MinkVec::zero(2), HypPoint::origin(2));
    let b2 = line(&b, MinkVec::new2(0.0, 1.0, 0.0), HypPoint::origin(2));
    for a in [0.1, 0.7, 2.0] {
        let d = level_distance(&b, a, &b1, &b2, &p).unwrap();
        assert!((d.value - 1.0).abs() < 0.005, "{a}: {d:?}");
    }
}

#[test]
fn projection_examples() {
    let b = one_edge();
    let seg = [MinkVec::new2(0.3, 0.0, 0.0), MinkVec::new2(0.3, 1.0, 0.0)];
    let (lb, la) = project_curve_length(&b, &seg, 0.3, 1.2).unwrap();
    assert!((lb - 1.0).abs() < 1e-14 && (la - 1.0).abs() < 1e-14);
}

#[test]
fn level_comparisons() {
    let p = DistanceParams::default();
    let c = RegularDomain::cone(2);
    let pairs = vec![LinePair {
        id: "cone".into(),
        first: line(&c, MinkVec::zero(2), HypPoint::origin(2)),
        second: line(&c, MinkVec::zero(2), boosted(0.8)),
    }];
    let cmp = compare_levels(&c, 1.0, 0.5, &pairs, &p).unwrap();
    assert_eq!(cmp.violations, 0);
    assert!((cmp.min_ratio - 2.0).abs() < 0.02 && (cmp.max_ratio - 2.0).abs() < 0.02);
    assert_eq!(cmp.upper_bound, 4.0);
    let same = compare_levels(&c, 0.7, 0.7, &pairs, &p).unwrap();
    assert!((same.min_ratio - 1.0).abs() < 1e-12 && (same.max_ratio - 1.0).abs() < 1e-12);

    let b = one_edge();
    let pairs = vec![LinePair {
        id: "band".into(),
        first: line(&b, MinkVec::zero(2), HypPoint::origin(2)),
        second: line(&b, MinkVec::new2(0.0, 1.0, 0.0), HypPoint::origin(2)),
    }];
    let cmp = compare_levels(&b, 1.0, 0.5, &pairs, &p).unwrap();
    assert!((cmp.min_ratio - 1.0).abs() < 0.01 && (cmp.max_ratio - 1.0).abs() < 0.01);
}

#[test]
fn pairing_on_a_shifted_hyperboloid() {
    let c = RegularDomain::cone(2);
    let eps = 0.1;
    let aux_spine =
        SpineComplex::explicit(vec![MinkVec::new2(-eps, 0.0, 0.0)], vec![], vec![]).unwrap();
    let aux = RegularDomain::from_spine(aux_spine).unwrap();
    let w = Window::new(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
    let surf = ConvexSurface::new(aux, 1.0, w).unwrap();
    let rep = pairing_bound_check(&c, &surf, 2000, &mut stream_rng(9, 0)).unwrap();
    assert!(rep.max_pairing <= rep.bound + 1e-9, "{rep:?}");
    assert!(rep.max_pairing <= (1.0 + eps) / (1.0 - eps));
}

#[test]
fn past_limits_match_the_tree() {
    let p = DistanceParams::default();
    let levels = [0.4, 0.2, 0.1, 0.05];
    let c = RegularDomain::cone(2);
    let pairs = vec![LinePair {
        id: "cone".into(),
        first: line(&c, MinkVec::zero(2), HypPoint::origin(2)),
        second: line(&c, MinkVec::zero(2), boosted(1.0)),
    }];
    let s = past_sweep(&c, &pairs, &levels, &p).unwrap();
    assert!(s.limits[0].extrapolated.abs() < 0.02 && s.limits[0].oracle == 0.0);

    let one = MeasuredLamination::new(vec![Leaf::new(PI / 2.0, -PI / 2.0, 1.0)]).unwrap();
    let (dom, lines) = region_lines(&one);
    let pairs = vec![LinePair {
        id: "one".into(),
        first: lines[0],
        second: lines[1],
    }];
    let s = past_sweep(&dom, &pairs, &levels, &p).unwrap();
    assert_eq!(s.limits[0].oracle, 1.0);
    assert!(s.limits[0].gap < 0.02, "{:?}", s.limits);

    let nested = MeasuredLamination::new(vec![
        Leaf::new(0.0, PI, 0.5),
        Leaf::new(PI / 4.0, 3.0 * PI / 4.0, 0.7),
    ])
    .unwrap();
    let g = validate(&nested).unwrap();
    let lower = g.region_of(&nested, [0.0, -0.5]).unwrap();
    let cap = g.region_of(&nested, [0.0, 0.9]).unwrap();
    let (dom, lines) = region_lines(&nested);
    let pairs = vec![LinePair {
        id: "nested".into(),
        first: lines[lower],
        second: lines[cap],
    }];
    let s = past_sweep(&dom, &pairs, &levels, &p).unwrap();
    assert!((s.limits[0].oracle - 1.2).abs() < 1e-12);
    assert!(s.limits[0].gap < 0.02, "{:?}", s.limits);
    assert_eq!(s.rows.len(), levels.len());
}

#[test]
fn future_renormalization() {
    let p = DistanceParams::default();
    let c = RegularDomain::cone(2);
    let pairs = vec![LinePair {
        id: "cone".into(),
        first: line(&c, MinkVec::zero(2), HypPoint::origin(2)),
        second: line(&c, MinkVec::zero(2), boosted(0.5)),
    }];
    for row in future_sweep(&c, &pairs, &[1.0, 3.0, 9.0], &p).unwrap() {
        assert!(row.gap < 0.01 * row.oracle, "{row:?}");
    }
    let b = one_edge();
    let pairs = vec![LinePair {
        id: "band".into(),
        first: line(&b, MinkVec::zero(2), HypPoint::origin(2)),
        second: line(&b, MinkVec::new2(0.0, 1.0, 0.0), HypPoint::origin(2)),
    }];
    let rows = future_sweep(&b, &pairs, &[5.0, 20.0, 100.0], &p).unwrap();
    assert!(rows.windows(2).all(|w| w[1].value < w[0].value));
    assert!(rows[2].value < 0.02);
    assert_eq!(
        hyperbolic_distance(&HypPoint::origin(2), &HypPoint::origin(2)).unwrap(),
        0.0
    );
}

#[test]
fn curvature_of_nested_hyperboloids() {
    let a0 = 0.5;
    let shifted = RegularDomain::cone(2).with_time_offset(a0).unwrap();
    let w = Window::new(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
    for a in [0.5, 1.0] {
        let m = mesh_level(&shifted, a, w, 0.02, 256).unwrap();
        let k = estimate_gauss_curvature(&m, m.nearest(&[0.2, 0.1])).unwrap();
        let exact = -1.0 / ((a0 + a) * (a0 + a));
        assert!(
            (k - exact).abs() < 0.05 * exact.abs(),
            "{a}: {k} vs {exact}"
        );
    }
}
