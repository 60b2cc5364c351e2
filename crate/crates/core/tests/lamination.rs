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

use cosmolab_core::lamination::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

#[test]
fn region_counts() {
    let g = validate(&MeasuredLamination::empty()).unwrap();
    assert_eq!((g.regions.len(), g.adjacency.len()), (1, 0));
    let one = MeasuredLamination::new(vec![Leaf::new(0.0, PI, 1.0)]).unwrap();
    let g = validate(&one).unwrap();
    assert_eq!((g.regions.len(), g.adjacency.len()), (2, 1));
}

#[test]
fn crossing_leaves_are_rejected() {
    let lam = MeasuredLamination::new(vec![
        Leaf::new(0.0, PI, 1.0),
        Leaf::new(FRAC_PI_2, -FRAC_PI_2, 1.0),
    ]);
    let err = lam.and_then(|l| validate(&l).map(|_| ()));
    assert_eq!(err, Err(LaminationError::CrossingLeaves(0, 1)));
}

#[test]
fn nested_leaves_form_a_path() {
    let lam = MeasuredLamination::new(vec![
        Leaf::new(0.0, PI, 0.5),
        Leaf::new(FRAC_PI_4, 3.0 * FRAC_PI_4, 0.7),
    ])
    .unwrap();
    let g = validate(&lam).unwrap();
    assert_eq!(g.regions.len(), 3);
    let lower = g.region_of(&lam, [0.0, -0.5]).unwrap();
    let middle = g.region_of(&lam, [0.0, 0.3]).unwrap();
    let cap = g.region_of(&lam, [0.0, 0.9]).unwrap();
    assert_eq!(g.path_leaves(lower, cap).unwrap().len(), 2);
    assert!((tree_distance(&g, &lam, lower, cap).unwrap() - 1.2).abs() < 1e-15);
    assert_eq!(tree_distance(&g, &lam, middle, middle).unwrap(), 0.0);

    let spine = build_spine(&lam, &g).unwrap();
    assert_eq!(spine.vertices.len(), 3);
    let mut lengths: Vec<f64> = (0..spine.edges.len())
        .map(|e| spine.edge_length(e))
        .collect();
    lengths.sort_by(f64::total_cmp);
    assert!((lengths[0] - 0.5).abs() < 1e-12 && (lengths[1] - 0.7).abs() < 1e-12);
}

#[test]
fn single_leaf_spine() {
    let lam = MeasuredLamination::new(vec![Leaf::new(FRAC_PI_2, -FRAC_PI_2, 1.0)]).unwrap();
    let g = validate(&lam).unwrap();
    let spine = build_spine(&lam, &g).unwrap();
    assert_eq!(spine.vertices.len(), 2);
    let u = spine.vertices[0] - spine.vertices[1];
    assert!((u.dot(&u) - 1.0).abs() < 1e-12);
    assert!((tree_distance(&g, &lam, 0, 1).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn empty_lamination_is_a_point() {
    let lam = MeasuredLamination::empty();
    let spine = build_spine(&lam, &validate(&lam).unwrap()).unwrap();
    assert_eq!(spine.vertices.len(), 1);
    assert_eq!(spine.vertices[0].max_abs(), 0.0);
    assert!(spine.edges.is_empty());
}
