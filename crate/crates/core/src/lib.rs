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

//! Cosmological time and level geometry of flat regular domains in
//! Minkowski space, their de Sitter and anti-de Sitter rescalings, and
//! finite-sample checks of the metric properties of their levels.

// NaN-rejecting guards are written as negated comparisons on purpose, and
// small fixed-size linear algebra reads better with index loops.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod domain;
pub mod lamination;
pub mod levelset;
pub mod metric_checks;
pub mod mink;
pub mod rng;
pub mod wick;
