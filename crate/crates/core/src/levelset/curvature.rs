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

use super::mesh::LevelMesh;
use super::LevelError;

/// Gauss curvature of the level at an interior grid node.
///
/// Fits t ≈ c + b·x + ½ xᵀHx by least squares over the 5×5 grid
/// neighbourhood and returns k = −det H / (1 − |b|²)², which is −1/a² on
/// the hyperboloid of radius a.
pub fn estimate_gauss_curvature(mesh: &LevelMesh<'_>, node: usize) -> Result<f64, LevelError> {
    if mesh.dim() != 2 {
        return Err(LevelError::UnsupportedDimension(mesh.dim()));
    }
    let c = mesh.coords(node);
    let counts = mesh.counts();
    if (0..2).any(|k| c[k] < 2 || c[k] + 2 >= counts[k]) {
        return Err(LevelError::BoundaryNode(node));
    }
    let centre = mesh.nodes()[node];
    let mut ata = [[0.0; 6]; 6];
    let mut atb = [0.0; 6];
    for dy in -2i64..=2 {
        for dx in -2i64..=2 {
            let idx = mesh.index([(c[0] as i64 + dx) as usize, (c[1] as i64 + dy) as usize, 0]);
            let nd = &mesh.nodes()[idx];
            let x = nd.xbar[0] - centre.xbar[0];
            let y = nd.xbar[1] - centre.xbar[1];
            let row = [1.0, x, y, 0.5 * x * x, x * y, 0.5 * y * y];
            let t = nd.point.t - centre.point.t;
            for i in 0..6 {
                atb[i] += row[i] * t;
                for k in 0..6 {
                    ata[i][k] += row[i] * row[k];
                }
            }
        }
    }
    let coef = solve6(ata, atb);
    let (bx, by) = (coef[1], coef[2]);
    let (hxx, hxy, hyy) = (coef[3], coef[4], coef[5]);
    let w = 1.0 - bx * bx - by * by;
    Ok(-(hxx * hyy - hxy * hxy) / (w * w))
}

fn solve6(mut m: [[f64; 6]; 6], mut r: [f64; 6]) -> [f64; 6] {
    for c in 0..6 {
        let p = (c..6)
            .max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))
            .unwrap();
        m.swap(c, p);
        r.swap(c, p);
        for i in c + 1..6 {
            let f = m[i][c] / m[c][c];
            for k in c..6 {
                m[i][k] -= f * m[c][k];
            }
            r[i] -= f * r[c];
        }
    }
    let mut x = [0.0; 6];
    for i in (0..6).rev() {
        let s: f64 = (i + 1..6).map(|k| m[i][k] * x[k]).sum();
        x[i] = (r[i] - s) / m[i][i];
    }
    x
}
