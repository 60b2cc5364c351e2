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

//! Polyline shortening on a level graph x⁰ = h(x̄).
//!
//! The interior vertices are moved in the base plane by damped Newton steps
//! on the total Minkowski length. The Hessian is block tridiagonal with n×n
//! blocks and is solved by block elimination.

use crate::domain::RegularDomain;
use crate::mink::MinkVec;

type V3 = [f64; 3];
type M3 = [[f64; 3]; 3];

const MAX_ITERS: usize = 200;
const MAX_DAMPING_TRIES: usize = 40;
const MAX_RESTARTS: usize = 6;
const STALL_GRADIENT: f64 = 1e-6;

pub(super) struct Lifted {
    pub pts: Vec<MinkVec>,
    pub grads: Vec<V3>,
}

pub(super) fn lift(dom: &RegularDomain, a: f64, xs: &[V3]) -> Lifted {
    let n = dom.dim();
    let mut pts = Vec::with_capacity(xs.len());
    let mut grads = Vec::with_capacity(xs.len());
    for x in xs {
        let lp = dom.level_point(a, &x[..n]);
        pts.push(lp.point);
        grads.push(lp.height_gradient());
    }
    Lifted { pts, grads }
}

pub(super) fn polyline_length(pts: &[MinkVec]) -> f64 {
    pts.windows(2)
        .map(|w| (w[1] - w[0]).norm_sq().max(0.0).sqrt())
        .sum()
}

fn hessian_of_height(dom: &RegularDomain, a: f64, x: &V3, n: usize, eps: f64) -> M3 {
    let mut h = [[0.0; 3]; 3];
    for k in 0..n {
        let mut xp = *x;
        let mut xm = *x;
        xp[k] += eps;
        xm[k] -= eps;
        let gp = dom.level_point(a, &xp[..n]).height_gradient();
        let gm = dom.level_point(a, &xm[..n]).height_gradient();
        for i in 0..n {
            h[i][k] = (gp[i] - gm[i]) / (2.0 * eps);
        }
    }
    for i in 0..n {
        for k in 0..i {
            let s = 0.5 * (h[i][k] + h[k][i]);
            h[i][k] = s;
            h[k][i] = s;
        }
    }
    h
}

/// Jᵀ M J' for J = [∇hᵀ; I] with M acting on (t, x̄).
fn sandwich(m: &[[f64; 4]; 4], g1: &V3, g2: &V3, n: usize) -> M3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..n {
        for k in 0..n {
            out[i][k] = g1[i] * m[0][0] * g2[k]
                + g1[i] * m[0][1 + k]
                + m[1 + i][0] * g2[k]
                + m[1 + i][1 + k];
        }
    }
    out
}

fn solve(a: &M3, b: &V3, n: usize) -> Option<V3> {
    let mut m = *a;
    let mut r = *b;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[p][c].abs() < 1e-300 {
            return None;
        }
        m.swap(c, p);
        r.swap(c, p);
        for i in c + 1..n {
            let f = m[i][c] / m[c][c];
            for k in c..n {
                m[i][k] -= f * m[c][k];
            }
            r[i] -= f * r[c];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| m[i][k] * x[k]).sum();
        x[i] = (r[i] - s) / m[i][i];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn solve_mat(a: &M3, b: &M3, n: usize) -> Option<M3> {
    let mut out = [[0.0; 3]; 3];
    for k in 0..n {
        let col = [b[0][k], b[1][k], b[2][k]];
        let x = solve(a, &col, n)?;
        for i in 0..n {
            out[i][k] = x[i];
        }
    }
    Some(out)
}

/// Solves the symmetric block tridiagonal system with diagonal `d`,
/// superdiagonal `u` and right-hand side `b`.
fn block_thomas(d: &[M3], u: &[M3], b: &[V3], n: usize) -> Option<Vec<V3>> {
    let m = d.len();
    let mut xs: Vec<M3> = Vec::with_capacity(m);
    let mut zs: Vec<V3> = Vec::with_capacity(m);
    for j in 0..m {
        let mut dj = d[j];
        let mut bj = b[j];
        if j > 0 {
            let up = &u[j - 1];
            let xp = &xs[j - 1];
            let zp = &zs[j - 1];
            for i in 0..n {
                for k in 0..n {
                    let s: f64 = (0..n).map(|l| up[l][i] * xp[l][k]).sum();
                    dj[i][k] -= s;
                }
                let s: f64 = (0..n).map(|l| up[l][i] * zp[l]).sum();
                bj[i] -= s;
            }
        }
        zs.push(solve(&dj, &bj, n)?);
        xs.push(if j + 1 < m {
            solve_mat(&dj, &u[j], n)?
        } else {
            [[0.0; 3]; 3]
        });
    }
    let mut out = vec![[0.0; 3]; m];
    for j in (0..m).rev() {
        let mut x = zs[j];
        if j + 1 < m {
            for i in 0..n {
                let s: f64 = (0..n).map(|k| xs[j][i][k] * out[j + 1][k]).sum();
                x[i] -= s;
            }
        }
        out[j] = x;
    }
    Some(out)
}

/// Moves the interior vertices so the lifted chords have equal length,
/// interpolating linearly in the base plane.
fn equidistribute(dom: &RegularDomain, a: f64, xs: &mut [V3]) {
    let n = dom.dim();
    let pts = lift(dom, a, xs).pts;
    let mut cum = vec![0.0];
    for w in pts.windows(2) {
        cum.push(cum.last().unwrap() + (w[1] - w[0]).norm_sq().max(0.0).sqrt());
    }
    let total = *cum.last().unwrap();
    if !(total > 0.0) {
        return;
    }
    let src = xs.to_vec();
    let m = xs.len() - 1;
    let mut seg = 0;
    for i in 1..m {
        let s = total * i as f64 / m as f64;
        while seg + 2 < cum.len() && cum[seg + 1] < s {
            seg += 1;
        }
        let span = cum[seg + 1] - cum[seg];
        let f = if span > 0.0 {
            ((s - cum[seg]) / span).clamp(0.0, 1.0)
        } else {
            0.0
        };
        for k in 0..n {
            xs[i][k] = src[seg][k] + f * (src[seg + 1][k] - src[seg][k]);
        }
    }
}

/// Shortens the polyline in place, keeping its endpoints. Returns the final
/// lifted vertices and length.
///
/// Newton stalls when vertices bunch up, since the length is not smooth at a
/// zero chord. A stalled pass with a large gradient is followed by
/// equidistribution and another pass; the shortest polyline seen is kept.
pub(super) fn shorten(dom: &RegularDomain, a: f64, xs: &mut [V3]) -> (Vec<MinkVec>, f64) {
    let (mut pts, mut f, mut gmax) = newton_pass(dom, a, xs);
    let mut best = xs.to_vec();
    for _ in 0..MAX_RESTARTS {
        if gmax <= STALL_GRADIENT {
            break;
        }
        let mut trial = best.clone();
        equidistribute(dom, a, &mut trial);
        let (p, ft, g) = newton_pass(dom, a, &mut trial);
        if ft >= f * (1.0 - 1e-13) {
            break;
        }
        (pts, f, gmax) = (p, ft, g);
        best = trial;
    }
    xs.copy_from_slice(&best);
    (pts, f)
}

fn newton_pass(dom: &RegularDomain, a: f64, xs: &mut [V3]) -> (Vec<MinkVec>, f64, f64) {
    let n = dom.dim();
    let mut cur = lift(dom, a, xs);
    let mut f = polyline_length(&cur.pts);
    let interior = xs.len().saturating_sub(2);
    if interior == 0 {
        return (cur.pts, f, 0.0);
    }
    let mut gmax = 0.0f64;
    let eps = 1e-5 * a.max(1e-3);
    let scale = xs
        .iter()
        .flat_map(|x| x[..n].iter())
        .fold(0.0f64, |s, v| s.max(v.abs()))
        .max(a);
    let mut mu = -1.0;
    for _ in 0..MAX_ITERS {
        // Segment data: q = Gv/ℓ and M = (G − qqᵀ)/ℓ in (t, x̄) coordinates.
        let segs: Vec<([f64; 4], [[f64; 4]; 4])> = cur
            .pts
            .windows(2)
            .map(|w| {
                let v = w[1] - w[0];
                let len = v.norm_sq().max(1e-300).sqrt();
                let mut q = [0.0; 4];
                q[0] = -v.t / len;
                for k in 0..n {
                    q[1 + k] = v.spatial()[k] / len;
                }
                let mut m = [[0.0; 4]; 4];
                for i in 0..=n {
                    let g = if i == 0 { -1.0 } else { 1.0 };
                    for k in 0..=n {
                        m[i][k] = ((if i == k { g } else { 0.0 }) - q[i] * q[k]) / len;
                    }
                }
                (q, m)
            })
            .collect();
        let mut diag = Vec::with_capacity(interior);
        let mut upper = Vec::with_capacity(interior);
        let mut rhs = Vec::with_capacity(interior);
        gmax = 0.0;
        for j in 1..=interior {
            let gj = &cur.grads[j];
            let (qa, ma) = &segs[j - 1];
            let (qb, mb) = &segs[j];
            let mut grad = [0.0; 3];
            for k in 0..n {
                let dq0 = qa[0] - qb[0];
                grad[k] = gj[k] * dq0 + qa[1 + k] - qb[1 + k];
                gmax = gmax.max(grad[k].abs());
            }
            let hh = hessian_of_height(dom, a, &xs[j], n, eps);
            let s1 = sandwich(ma, gj, gj, n);
            let s2 = sandwich(mb, gj, gj, n);
            let tq = qa[0] - qb[0];
            let mut dj = [[0.0; 3]; 3];
            for i in 0..n {
                for k in 0..n {
                    dj[i][k] = s1[i][k] + s2[i][k] + tq * hh[i][k];
                }
            }
            diag.push(dj);
            if j < interior {
                let s = sandwich(mb, gj, &cur.grads[j + 1], n);
                let mut uj = [[0.0; 3]; 3];
                for i in 0..n {
                    for k in 0..n {
                        uj[i][k] = -s[i][k];
                    }
                }
                upper.push(uj);
            }
            rhs.push([-grad[0], -grad[1], -grad[2]]);
        }
        if gmax < 1e-15 {
            break;
        }
        let dscale = diag
            .iter()
            .map(|d| (0..n).map(|i| d[i][i].abs()).sum::<f64>() / n as f64)
            .sum::<f64>()
            / interior as f64;
        if mu < 0.0 {
            mu = 1e-9 * dscale;
        }
        let mut accepted = false;
        let mut step_max = 0.0f64;
        let mut gain = 0.0;
        for _ in 0..MAX_DAMPING_TRIES {
            let damped: Vec<M3> = diag
                .iter()
                .map(|d| {
                    let mut d = *d;
                    for i in 0..n {
                        d[i][i] += mu;
                    }
                    d
                })
                .collect();
            let Some(delta) = block_thomas(&damped, &upper, &rhs, n) else {
                mu = mu * 16.0 + 1e-12 * dscale;
                continue;
            };
            let mut trial: Vec<V3> = xs.to_vec();
            step_max = 0.0;
            for j in 0..interior {
                for k in 0..n {
                    trial[j + 1][k] += delta[j][k];
                    step_max = step_max.max(delta[j][k].abs());
                }
            }
            let lifted = lift(dom, a, &trial);
            let ft = polyline_length(&lifted.pts);
            if ft < f {
                gain = f - ft;
                xs.copy_from_slice(&trial);
                cur = lifted;
                f = ft;
                mu = (mu * 0.25).max(1e-14 * dscale);
                accepted = true;
                break;
            }
            mu = mu * 16.0 + 1e-12 * dscale;
        }
        if !accepted || gain <= 1e-15 * f || step_max <= 1e-14 * scale {
            break;
        }
    }
    (cur.pts, f, gmax)
}
