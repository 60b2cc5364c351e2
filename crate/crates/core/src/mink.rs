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

//! Minkowski space ℝ^{1,n} for n ∈ {2, 3}.
//!
//! The bilinear form has signature (−, +, …, +):
//!
//! ```text
//! ⟨a, b⟩ = −a.t·b.t + Σ a.xᵢ·b.xᵢ
//! ```
//!
//! Vectors carry their spatial dimension; arithmetic between vectors of
//! different dimension is a logic error (checked in debug builds), while the
//! checked entry point [`lorentz_dot`] reports it as an error.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use thiserror::Error;

/// Absolute tolerance on ⟨v,v⟩ used by [`causal_class`].
pub const CAUSAL_TOL: f64 = 1e-12;

/// Tolerance on |⟨v,v⟩ + 1| accepted when building a [`HypPoint`].
pub const HYPERBOLOID_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MinkError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("unsupported spatial dimension {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),
    #[error("non-finite component in vector")]
    NonFinite,
    #[error("point is off the hyperboloid: <v,v> = {0}")]
    OffHyperboloid(f64),
}

/// A point or vector of ℝ^{1,n}.
///
/// Unused spatial slots (the third one when n = 2) are kept at zero so that
/// derived `PartialEq` is meaningful.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinkVec {
    pub t: f64,
    x: [f64; 3],
    n: u8,
}

impl MinkVec {
    pub fn new(t: f64, x: &[f64]) -> Result<Self, MinkError> {
        if x.len() != 2 && x.len() != 3 {
            return Err(MinkError::UnsupportedDimension(x.len()));
        }
        if !t.is_finite() || x.iter().any(|c| !c.is_finite()) {
            return Err(MinkError::NonFinite);
        }
        let mut buf = [0.0; 3];
        buf[..x.len()].copy_from_slice(x);
        Ok(Self {
            t,
            x: buf,
            n: x.len() as u8,
        })
    }

    pub fn new2(t: f64, x: f64, y: f64) -> Self {
        Self {
            t,
            x: [x, y, 0.0],
            n: 2,
        }
    }

    pub fn new3(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self {
            t,
            x: [x, y, z],
            n: 3,
        }
    }

    pub fn zero(n: usize) -> Self {
        debug_assert!(n == 2 || n == 3);
        Self {
            t: 0.0,
            x: [0.0; 3],
            n: n as u8,
        }
    }

    /// Unit future timelike vector (1, 0, …, 0).
    pub fn e0(n: usize) -> Self {
        Self {
            t: 1.0,
            ..Self::zero(n)
        }
    }

    /// Builds a vector from a time coordinate and a spatial slice whose
    /// length must equal `n` (unchecked apart from a debug assertion).
    pub fn from_parts(t: f64, x: &[f64]) -> Self {
        debug_assert!(x.len() == 2 || x.len() == 3);
        let mut buf = [0.0; 3];
        buf[..x.len()].copy_from_slice(x);
        Self {
            t,
            x: buf,
            n: x.len() as u8,
        }
    }

    /// Spatial dimension n.
    #[inline]
    pub fn dim(&self) -> usize {
        self.n as usize
    }

    /// Spatial part x̄.
    #[inline]
    pub fn spatial(&self) -> &[f64] {
        &self.x[..self.n as usize]
    }

    #[inline]
    pub fn spatial_mut(&mut self) -> &mut [f64] {
        let n = self.n as usize;
        &mut self.x[..n]
    }

    /// Component access with index 0 for time.
    #[inline]
    pub fn comp(&self, i: usize) -> f64 {
        if i == 0 {
            self.t
        } else {
            self.x[i - 1]
        }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.iter().all(|c| c.is_finite())
    }

    /// Unchecked Lorentzian product.
    #[inline]
    pub fn dot(&self, other: &MinkVec) -> f64 {
        debug_assert_eq!(self.n, other.n, "mixed dimensions");
        -self.t * other.t + self.x[0] * other.x[0] + self.x[1] * other.x[1] + self.x[2] * other.x[2]
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    /// √⟨v,v⟩ for spacelike v, zero otherwise.
    #[inline]
    pub fn spacelike_len(&self) -> f64 {
        self.norm_sq().max(0.0).sqrt()
    }

    /// √(−⟨v,v⟩) for timelike v, zero otherwise.
    #[inline]
    pub fn timelike_len(&self) -> f64 {
        (-self.norm_sq()).max(0.0).sqrt()
    }

    /// Largest absolute component; used for componentwise comparisons.
    pub fn max_abs(&self) -> f64 {
        self.x.iter().fold(self.t.abs(), |m, c| m.max(c.abs()))
    }

    /// Euclidean norm of the spatial part.
    pub fn spatial_norm(&self) -> f64 {
        self.spatial().iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

impl fmt::Debug for MinkVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.t)?;
        for c in self.spatial() {
            write!(f, ", {c}")?;
        }
        write!(f, ")")
    }
}

impl Add for MinkVec {
    type Output = MinkVec;
    #[inline]
    fn add(self, o: MinkVec) -> MinkVec {
        debug_assert_eq!(self.n, o.n, "mixed dimensions");
        MinkVec {
            t: self.t + o.t,
            x: [self.x[0] + o.x[0], self.x[1] + o.x[1], self.x[2] + o.x[2]],
            n: self.n,
        }
    }
}

impl Sub for MinkVec {
    type Output = MinkVec;
    #[inline]
    fn sub(self, o: MinkVec) -> MinkVec {
        debug_assert_eq!(self.n, o.n, "mixed dimensions");
        MinkVec {
            t: self.t - o.t,
            x: [self.x[0] - o.x[0], self.x[1] - o.x[1], self.x[2] - o.x[2]],
            n: self.n,
        }
    }
}

impl AddAssign for MinkVec {
    #[inline]
    fn add_assign(&mut self, o: MinkVec) {
        *self = *self + o;
    }
}

impl SubAssign for MinkVec {
    #[inline]
    fn sub_assign(&mut self, o: MinkVec) {
        *self = *self - o;
    }
}

impl Mul<f64> for MinkVec {
    type Output = MinkVec;
    #[inline]
    fn mul(self, s: f64) -> MinkVec {
        MinkVec {
            t: self.t * s,
            x: [self.x[0] * s, self.x[1] * s, self.x[2] * s],
            n: self.n,
        }
    }
}

impl Mul<MinkVec> for f64 {
    type Output = MinkVec;
    #[inline]
    fn mul(self, v: MinkVec) -> MinkVec {
        v * self
    }
}

impl Neg for MinkVec {
    type Output = MinkVec;
    #[inline]
    fn neg(self) -> MinkVec {
        self * -1.0
    }
}

/// Checked Lorentzian product.
pub fn lorentz_dot(a: &MinkVec, b: &MinkVec) -> Result<f64, MinkError> {
    if a.n != b.n {
        return Err(MinkError::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(a.dot(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalKind {
    Timelike,
    Lightlike,
    Spacelike,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Future,
    Past,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalClass {
    pub kind: CausalKind,
    pub orientation: Orientation,
}

pub fn causal_class(v: &MinkVec) -> CausalClass {
    if v.max_abs() == 0.0 {
        return CausalClass {
            kind: CausalKind::Zero,
            orientation: Orientation::None,
        };
    }
    let q = v.norm_sq();
    let kind = if q < -CAUSAL_TOL {
        CausalKind::Timelike
    } else if q > CAUSAL_TOL {
        CausalKind::Spacelike
    } else {
        CausalKind::Lightlike
    };
    let orientation = match kind {
        CausalKind::Timelike | CausalKind::Lightlike => {
            if v.t > 0.0 {
                Orientation::Future
            } else {
                Orientation::Past
            }
        }
        _ => Orientation::None,
    };
    CausalClass { kind, orientation }
}

/// A point of the hyperboloid model ℍⁿ = {⟨v,v⟩ = −1, v.t > 0}.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HypPoint(MinkVec);

impl HypPoint {
    pub fn new(v: MinkVec) -> Result<Self, MinkError> {
        if !v.is_finite() {
            return Err(MinkError::NonFinite);
        }
        let q = v.norm_sq();
        if (q + 1.0).abs() > HYPERBOLOID_TOL || v.t <= 0.0 {
            return Err(MinkError::OffHyperboloid(q));
        }
        Ok(Self(v))
    }

    /// Rescales a future timelike vector onto the hyperboloid.
    pub fn normalize(v: MinkVec) -> Result<Self, MinkError> {
        let q = v.norm_sq();
        if !(q < 0.0) || v.t <= 0.0 {
            return Err(MinkError::OffHyperboloid(q));
        }
        Ok(Self(v * (1.0 / (-q).sqrt())))
    }

    pub(crate) fn new_unchecked(v: MinkVec) -> Self {
        Self(v)
    }

    /// The base point (1, 0, …, 0).
    pub fn origin(n: usize) -> Self {
        Self(MinkVec::e0(n))
    }

    /// Image of the origin under the boost with rapidity vector `eta`:
    /// (cosh|η|, sinh|η|·η/|η|).
    pub fn from_boost(eta: &[f64]) -> Result<Self, MinkError> {
        if eta.len() != 2 && eta.len() != 3 {
            return Err(MinkError::UnsupportedDimension(eta.len()));
        }
        let r = eta.iter().map(|e| e * e).sum::<f64>().sqrt();
        if !r.is_finite() {
            return Err(MinkError::NonFinite);
        }
        let s = if r > 0.0 { r.sinh() / r } else { 1.0 };
        let x: Vec<f64> = eta.iter().map(|e| e * s).collect();
        Ok(Self(MinkVec::from_parts(r.cosh(), &x)))
    }

    /// Lift of a Klein-model point k (|k| < 1).
    pub fn from_klein(k: &[f64]) -> Result<Self, MinkError> {
        let r2: f64 = k.iter().map(|c| c * c).sum();
        if r2 >= 1.0 {
            return Err(MinkError::OffHyperboloid(r2));
        }
        let s = 1.0 / (1.0 - r2).sqrt();
        let x: Vec<f64> = k.iter().map(|c| c * s).collect();
        Ok(Self(MinkVec::from_parts(s, &x)))
    }

    /// Klein-model coordinates x̄ / t.
    pub fn to_klein(&self) -> Vec<f64> {
        self.0.spatial().iter().map(|c| c / self.0.t).collect()
    }

    #[inline]
    pub fn vec(&self) -> &MinkVec {
        &self.0
    }

    #[inline]
    pub fn into_vec(self) -> MinkVec {
        self.0
    }
}

impl fmt::Debug for HypPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hyp{:?}", self.0)
    }
}

/// d(u, v) = arccosh(−⟨u, v⟩), argument clamped to ≥ 1.
pub fn hyperbolic_distance(u: &HypPoint, v: &HypPoint) -> Result<f64, MinkError> {
    for p in [u, v] {
        let q = p.0.norm_sq();
        if (q + 1.0).abs() > HYPERBOLOID_TOL {
            return Err(MinkError::OffHyperboloid(q));
        }
    }
    let c = -lorentz_dot(&u.0, &v.0)?;
    if c < 2.0 {
        // Chord form keeps full relative accuracy for nearby points.
        let q = (u.0 - v.0).norm_sq().max(0.0);
        return Ok(2.0 * (0.5 * q.sqrt()).asinh());
    }
    Ok(acosh_clamped(c))
}

#[inline]
pub(crate) fn acosh_clamped(c: f64) -> f64 {
    let c = c.max(1.0);
    // Near 1 the direct formula loses half the digits.
    if c < 1.0 + 1e-4 {
        let e = c - 1.0;
        let s = (2.0 * e).sqrt();
        s * (1.0 - e / 12.0)
    } else {
        c.acosh()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dot_examples() {
        let a = MinkVec::new2(1.0, 0.0, 0.0);
        assert_eq!(lorentz_dot(&a, &a).unwrap(), -1.0);
        let b = MinkVec::new2(1.0, 1.0, 0.0);
        assert_eq!(lorentz_dot(&b, &b).unwrap(), 0.0);
        let c = MinkVec::new2(2.0, 1.0, 0.0);
        let d = MinkVec::new2(1.0, 0.0, 1.0);
        assert_eq!(lorentz_dot(&c, &d).unwrap(), -2.0);
    }

    #[test]
    fn dot_rejects_mixed_dimensions() {
        let a = MinkVec::new2(1.0, 0.0, 0.0);
        let b = MinkVec::new3(1.0, 0.0, 0.0, 0.0);
        assert_eq!(lorentz_dot(&a, &b), Err(MinkError::DimensionMismatch(2, 3)));
    }

    #[test]
    fn new_rejects_non_finite() {
        assert_eq!(
            MinkVec::new(f64::NAN, &[0.0, 0.0]),
            Err(MinkError::NonFinite)
        );
        assert!(MinkVec::new(0.0, &[1.0]).is_err());
    }

    #[test]
    fn causal_examples() {
        let c = causal_class(&MinkVec::new2(1.0, 0.0, 0.0));
        assert_eq!(
            (c.kind, c.orientation),
            (CausalKind::Timelike, Orientation::Future)
        );
        let c = causal_class(&MinkVec::new2(1.0, 1.0, 0.0));
        assert_eq!(
            (c.kind, c.orientation),
            (CausalKind::Lightlike, Orientation::Future)
        );
        let c = causal_class(&MinkVec::new2(0.0, 1.0, 0.0));
        assert_eq!(
            (c.kind, c.orientation),
            (CausalKind::Spacelike, Orientation::None)
        );
        let c = causal_class(&MinkVec::new2(-2.0, 1.0, 0.0));
        assert_eq!(
            (c.kind, c.orientation),
            (CausalKind::Timelike, Orientation::Past)
        );
        let c = causal_class(&MinkVec::zero(3));
        assert_eq!(
            (c.kind, c.orientation),
            (CausalKind::Zero, Orientation::None)
        );
    }

    #[test]
    fn hyperbolic_distance_examples() {
        let o = HypPoint::origin(2);
        assert_eq!(hyperbolic_distance(&o, &o).unwrap(), 0.0);
        let v = HypPoint::new(MinkVec::new2(1f64.cosh(), 1f64.sinh(), 0.0)).unwrap();
        assert!((hyperbolic_distance(&o, &v).unwrap() - 1.0).abs() < 1e-12);
        let w = HypPoint::new(MinkVec::new2(1f64.cosh(), -(1f64.sinh()), 0.0)).unwrap();
        assert!((hyperbolic_distance(&v, &w).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_distance_small_separation_is_accurate() {
        let o = HypPoint::origin(2);
        let v = HypPoint::from_boost(&[1e-7, 0.0]).unwrap();
        let d = hyperbolic_distance(&o, &v).unwrap();
        assert!((d - 1e-7).abs() < 1e-15, "{d}");
    }

    #[test]
    fn hyperboloid_rejects_off_points() {
        assert!(HypPoint::new(MinkVec::new2(1.0, 0.1, 0.0)).is_err());
        assert!(HypPoint::new(MinkVec::new2(-1.0, 0.0, 0.0)).is_err());
        let off = MinkVec::new2(1.0, 0.0, 0.0);
        let far = MinkVec::new2(2.0, 0.0, 0.0);
        assert!(
            hyperbolic_distance(&HypPoint::new_unchecked(off), &HypPoint::new_unchecked(far))
                .is_err()
        );
    }

    #[test]
    fn boost_and_klein_agree() {
        let h = HypPoint::from_boost(&[0.3, -0.4]).unwrap();
        let k = h.to_klein();
        let back = HypPoint::from_klein(&k).unwrap();
        assert!((back.vec().t - h.vec().t).abs() < 1e-12);
        assert!((h.vec().norm_sq() + 1.0).abs() < 1e-12);
    }

    fn random_future_timelike(rng: &mut ChaCha8Rng, n: usize) -> MinkVec {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        MinkVec::from_parts(r + rng.gen_range(0.01..3.0), &x)
    }

    fn random_hyp(rng: &mut ChaCha8Rng, n: usize) -> HypPoint {
        let eta: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        HypPoint::from_boost(&eta).unwrap()
    }

    #[test]
    fn reverse_cauchy_schwarz() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..10_000 {
            let n = 2 + i % 2;
            let a = random_future_timelike(&mut rng, n);
            let b = random_future_timelike(&mut rng, n);
            let lhs = a.dot(&b);
            let rhs = -a.timelike_len() * b.timelike_len();
            assert!(lhs <= rhs + 1e-9 * (1.0 + lhs.abs()), "{a:?} {b:?}");
        }
    }

    /// For n₁ ≠ n₂ on the hyperboloid and a unit spacelike v with
    /// ⟨v,n₁⟩ ≥ 0 ≥ ⟨v,n₂⟩: ⟨v,n₁⟩ ≤ 1/√(⟨n₁,n₂⟩² − 1).
    #[test]
    fn separating_vector_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut accepted = 0;
        while accepted < 10_000 {
            let n = 2 + accepted % 2;
            let n1 = random_hyp(&mut rng, n);
            let n2 = random_hyp(&mut rng, n);
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
            let raw = MinkVec::from_parts(rng.gen_range(-1.5..1.5), &x);
            let q = raw.norm_sq();
            if q <= 1e-3 {
                continue;
            }
            let v = raw * (1.0 / q.sqrt());
            let (a, b) = (v.dot(n1.vec()), v.dot(n2.vec()));
            if !(a >= 0.0 && b <= 0.0) {
                continue;
            }
            let c = n1.vec().dot(n2.vec());
            if c * c - 1.0 < 1e-8 {
                continue;
            }
            accepted += 1;
            let bound = (c * c - 1.0).sqrt();
            assert!(a <= bound * (1.0 + 1e-9) + 1e-12, "{a} > {bound}");
        }
    }

    #[test]
    fn hyperbolic_triangle_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for i in 0..1000 {
            let n = 2 + i % 2;
            let (u, v, w) = (
                random_hyp(&mut rng, n),
                random_hyp(&mut rng, n),
                random_hyp(&mut rng, n),
            );
            let uv = hyperbolic_distance(&u, &v).unwrap();
            let vw = hyperbolic_distance(&v, &w).unwrap();
            let uw = hyperbolic_distance(&u, &w).unwrap();
            assert!(uw <= uv + vw + 1e-9);
            assert!((uv - hyperbolic_distance(&v, &u).unwrap()).abs() < 1e-12);
        }
    }

    fn vec3() -> impl Strategy<Value = MinkVec> {
        (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64)
            .prop_map(|(t, x, y)| MinkVec::new2(t, x, y))
    }

    proptest! {
        #[test]
        fn dot_is_bilinear_and_symmetric(a in vec3(), b in vec3(), c in vec3(), s in -5.0..5.0f64) {
            prop_assert!((a.dot(&b) - b.dot(&a)).abs() < 1e-12);
            let lhs = (a + b).dot(&c);
            let rhs = a.dot(&c) + b.dot(&c);
            prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()) * 10.0);
            let lhs = (a * s).dot(&c);
            let rhs = s * a.dot(&c);
            prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()) * 10.0);
        }
    }
}
