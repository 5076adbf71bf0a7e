//! Isometries of the hyperbolic model as 4×4 matrices on vertex-basis
//! coordinates, with construction, composition, and classification.

use std::ops::Mul;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gram::GramPair;
use crate::linalg::{Mat4, Vec4};
use crate::orthoscheme::{ProjectivePlane, ProjectivePoint};
use crate::scalar::Real;

/// Tolerance for matrices built from closed-form data.
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Tolerance for products of a handful of isometries.
pub const COMPOSITION_TOL: f64 = 1e-9;
/// Tolerance for evaluated relator words.
pub const RELATION_TOL: f64 = 1e-8;

/// A matrix `M` with `Mᵀ a M = a`, acting on points by `x ↦ M x` and on plane
/// forms by `u ↦ u M⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry<T> {
    pub m: Mat4<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsometryKind {
    Identity,
    /// Elliptic, fixing a line pointwise.
    Rotation { angle: f64 },
    Parabolic,
    /// Loxodromic with no rotational part.
    Translation { length: f64 },
    /// Loxodromic with rotation about the translation axis.
    Screw { length: f64, angle: f64 },
    Reflection,
    /// Orientation-reversing with a fixed point.
    RotatoryReflection { angle: f64 },
    /// Orientation-reversing, translating along an axis.
    GlideReflection { length: f64 },
    /// Orientation-reversing with parabolic square.
    ParabolicReflection,
}

impl IsometryKind {
    pub fn name(&self) -> &'static str {
        match self {
            IsometryKind::Identity => "identity",
            IsometryKind::Rotation { .. } => "rotation",
            IsometryKind::Parabolic => "parabolic",
            IsometryKind::Translation { .. } => "translation",
            IsometryKind::Screw { .. } => "screw motion",
            IsometryKind::Reflection => "reflection",
            IsometryKind::RotatoryReflection { .. } => "rotatory reflection",
            IsometryKind::GlideReflection { .. } => "glide reflection",
            IsometryKind::ParabolicReflection => "parabolic reflection",
        }
    }

    pub fn is_orientation_preserving(&self) -> bool {
        matches!(
            self,
            IsometryKind::Identity
                | IsometryKind::Rotation { .. }
                | IsometryKind::Parabolic
                | IsometryKind::Translation { .. }
                | IsometryKind::Screw { .. }
        )
    }

    /// Fixed-point free on the interior of the model.
    pub fn is_fixed_point_free(&self) -> bool {
        matches!(
            self,
            IsometryKind::Parabolic
                | IsometryKind::Translation { .. }
                | IsometryKind::Screw { .. }
                | IsometryKind::GlideReflection { .. }
                | IsometryKind::ParabolicReflection
        )
    }
}

impl std::fmt::Display for IsometryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IsometryKind::Rotation { angle } | IsometryKind::RotatoryReflection { angle } => {
                write!(f, "{} (angle {:.5})", self.name(), angle)
            }
            IsometryKind::Translation { length } | IsometryKind::GlideReflection { length } => {
                write!(f, "{} (length {:.5})", self.name(), length)
            }
            IsometryKind::Screw { length, angle } => {
                write!(f, "{} (length {:.5}, angle {:.5})", self.name(), length, angle)
            }
            _ => f.write_str(self.name()),
        }
    }
}

impl<T: Real> Isometry<T> {
    pub fn identity() -> Self {
        Self { m: Mat4::identity() }
    }

    /// Wraps a matrix after checking it preserves the vertex form.
    pub fn from_matrix(gram: &GramPair<T>, m: Mat4<T>, tol: T) -> Result<Self> {
        let iso = Self { m };
        if iso.form_residual(gram) > tol {
            return Err(Error::GeometryMismatch(format!(
                "matrix does not preserve the form (residual {:e})",
                iso.form_residual(gram).to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(iso)
    }

    /// Reflection in a plane meeting the model.
    pub fn reflection(gram: &GramPair<T>, plane: &ProjectivePlane<T>) -> Result<Self> {
        if plane.norm <= T::zero() {
            return Err(Error::DegeneratePlane);
        }
        let n = gram.plane_normal(plane);
        let m = Mat4::identity() - Mat4::outer(&n, &plane.u).scale(T::two() / plane.norm);
        Ok(Self { m })
    }

    /// Half-turn about the geodesic through two interior points.
    pub fn half_turn(gram: &GramPair<T>, p: &ProjectivePoint<T>, q: &ProjectivePoint<T>) -> Result<Self> {
        let mut cols = [Vec4::zero(); 4];
        for (i, col) in cols.iter_mut().enumerate() {
            let e = gram.point(Vec4::unit(i));
            *col = gram.project_to_span(&e, p, q)?.x.scale(T::two()) - e.x;
        }
        Ok(Self { m: Mat4::from_cols(cols) })
    }

    pub fn apply(&self, x: &Vec4<T>) -> Vec4<T> {
        self.m * *x
    }

    pub fn apply_point(&self, gram: &GramPair<T>, p: &ProjectivePoint<T>) -> ProjectivePoint<T> {
        gram.point(self.apply(&p.x))
    }

    /// Image of a plane form, `u M⁻¹`.
    pub fn apply_plane(&self, gram: &GramPair<T>, plane: &ProjectivePlane<T>) -> ProjectivePlane<T> {
        gram.plane(self.inverse(gram).m.left_mul(&plane.u))
    }

    /// `M⁻¹ = b Mᵀ a`, exact for form-preserving matrices.
    pub fn inverse(&self, gram: &GramPair<T>) -> Self {
        Self { m: gram.b.entries * self.m.transpose() * gram.a }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self { m: self.m * other.m }
    }

    pub fn det(&self) -> T {
        self.m.det()
    }

    /// `‖Mᵀ a M − a‖∞ / ‖a‖∞`.
    pub fn form_residual(&self, gram: &GramPair<T>) -> T {
        (self.m.transpose() * gram.a * self.m - gram.a).max_abs() / gram.a.max_abs()
    }

    /// Projects back onto the isometry group by the Newton iteration
    /// `M ← (M + b M⁻ᵀ a) / 2`.
    pub fn reorthogonalize(&self, gram: &GramPair<T>) -> Self {
        let mut m = self.m;
        for _ in 0..8 {
            let Some(inv) = m.inverse() else { break };
            let next = (m + gram.b.entries * inv.transpose() * gram.a).scale(T::half());
            let done = (next - m).max_abs() <= T::epsilon() * m.max_abs();
            m = next;
            if done {
                break;
            }
        }
        Self { m }
    }

    /// `‖M − I‖∞`.
    pub fn identity_residual(&self) -> T {
        (self.m - Mat4::identity()).max_abs()
    }

    /// Residual of `self` against `target` up to positive scale; `None` when
    /// the scale is not positive.
    pub fn projective_residual(&self, target: &Self) -> Option<T> {
        projective_residual(&self.m, &target.m)
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.projective_residual(other).is_some_and(|r| r <= tol)
    }

    /// Classifies by the trace invariants of `M` (and of `M²` when
    /// orientation-reversing).
    pub fn classify(&self, tol: T) -> Result<IsometryKind> {
        let det = self.det();
        if (det.abs() - T::one()).abs() > T::lit(1e-6) {
            return Err(Error::NumericallyAmbiguous);
        }
        if det > T::zero() {
            return classify_proper(&self.m, tol);
        }
        let tr = self.m.trace();
        let sq = self.m * self.m;
        if (tr - T::two()).abs() <= tol && (sq - Mat4::identity()).max_abs() <= tol {
            return Ok(IsometryKind::Reflection);
        }
        Ok(match classify_proper(&sq, tol)? {
            IsometryKind::Identity => IsometryKind::RotatoryReflection { angle: std::f64::consts::PI },
            IsometryKind::Rotation { angle } => IsometryKind::RotatoryReflection { angle: angle / 2.0 },
            IsometryKind::Translation { length } | IsometryKind::Screw { length, .. } => {
                IsometryKind::GlideReflection { length: length / 2.0 }
            }
            IsometryKind::Parabolic => IsometryKind::ParabolicReflection,
            _ => return Err(Error::NumericallyAmbiguous),
        })
    }
}

impl<T: Real> Mul for Isometry<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

pub fn projective_residual<T: Real>(eval: &Mat4<T>, target: &Mat4<T>) -> Option<T> {
    let (i, j) = target.argmax_abs();
    let s = eval[(i, j)] / target[(i, j)];
    if !(s > T::zero()) {
        return None;
    }
    Some((eval.scale(s.recip()) - *target).max_abs())
}

fn classify_proper<T: Real>(m: &Mat4<T>, tol: T) -> Result<IsometryKind> {
    let t1 = m.trace();
    let t2 = (t1 * t1 - (*m * *m).trace()) * T::half();
    // Roots of x² − t1 x + (t2 − 2) are λ + 1/λ over reciprocal eigenvalue pairs.
    let disc = t1 * t1 - T::lit(4.0) * (t2 - T::two());
    let scale = T::one().max(t1.abs());
    if disc < -tol * scale * scale {
        return Err(Error::NumericallyAmbiguous);
    }
    let root = disc.max(T::zero()).sqrt();
    let big = (t1 + root) * T::half();
    let small = (t1 - root) * T::half();
    let two = T::two();
    let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
    let sqrt_tol = tol.sqrt();
    if big - two > sqrt_tol {
        let length = (big * T::half()).acosh();
        let angle = (small * T::half()).max(-T::one()).min(T::one()).acos();
        if angle.abs() <= sqrt_tol {
            return Ok(IsometryKind::Translation { length: f(length) });
        }
        return Ok(IsometryKind::Screw { length: f(length), angle: f(angle) });
    }
    if two - small > sqrt_tol {
        let angle = (small * T::half()).max(-T::one()).acos();
        return Ok(IsometryKind::Rotation { angle: f(angle) });
    }
    if (*m - Mat4::identity()).max_abs() <= sqrt_tol {
        Ok(IsometryKind::Identity)
    } else {
        Ok(IsometryKind::Parabolic)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::{gram_pair, SchlafliTriple};
    use crate::orthoscheme::realize;

    fn g666() -> GramPair<f64> {
        gram_pair(SchlafliTriple::new(6, 6, 6).unwrap()).unwrap()
    }

    #[test]
    fn reflection_is_involution() {
        let g = g666();
        for i in 0..4 {
            let r = Isometry::reflection(&g, &g.plane(Vec4::unit(i))).unwrap();
            assert!((r * r).identity_residual() < 1e-12);
            assert!(r.form_residual(&g) < 1e-12);
            assert!((r.det() + 1.0).abs() < 1e-12);
            assert_eq!(r.classify(1e-9).unwrap(), IsometryKind::Reflection);
        }
    }

    #[test]
    fn coxeter_products_rotate_by_dihedral_angle() {
        let g = g666();
        let r = |i| Isometry::reflection(&g, &g.plane(Vec4::unit(i))).unwrap();
        let m = r(0) * r(1);
        match m.classify(1e-9).unwrap() {
            IsometryKind::Rotation { angle } => {
                assert!((angle - std::f64::consts::PI / 3.0).abs() < 1e-9)
            }
            k => panic!("unexpected {k:?}"),
        }
        let mut p = Isometry::identity();
        for _ in 0..6 {
            p = p * m;
        }
        assert!(p.identity_residual() < 1e-10);
        // b0 and b2 are orthogonal, so their product is a half-turn.
        match (r(0) * r(2)).classify(1e-9).unwrap() {
            IsometryKind::Rotation { angle } => assert!((angle - std::f64::consts::PI).abs() < 1e-6),
            k => panic!("unexpected {k:?}"),
        }
    }

    #[test]
    fn ultraparallel_reflections_translate() {
        let g = g666();
        let t = realize::<f64>(SchlafliTriple::new(6, 6, 6).unwrap()).unwrap();
        let r1 = Isometry::reflection(&g, &t.planes[0]).unwrap();
        let r2 = Isometry::reflection(&g, &t.polar_a3).unwrap();
        // b0 passes through A3, so it meets the polar plane of A3 orthogonally.
        assert!(matches!((r1 * r2).classify(1e-9).unwrap(), IsometryKind::Rotation { .. }));
        let r0 = Isometry::reflection(&g, &t.polar_a0).unwrap();
        match (r0 * r2).classify(1e-9).unwrap() {
            IsometryKind::Translation { length } => assert!(length > 0.0),
            k => panic!("unexpected {k:?}"),
        }
        let glide = r0 * r2 * Isometry::reflection(&g, &t.planes[1]).unwrap();
        assert!(matches!(
            glide.classify(1e-9).unwrap(),
            IsometryKind::GlideReflection { .. }
        ));
    }

    #[test]
    fn half_turn_properties() {
        let t = realize::<f64>(SchlafliTriple::new(6, 6, 6).unwrap()).unwrap();
        let h = t.half_turn().unwrap();
        assert!(h.form_residual(&t.gram) < 1e-12);
        assert!((h * h).identity_residual() < 1e-10);
        match h.classify(1e-9).unwrap() {
            IsometryKind::Rotation { angle } => assert!((angle - std::f64::consts::PI).abs() < 1e-6),
            k => panic!("unexpected {k:?}"),
        }
    }

    #[test]
    fn inverse_and_reorthogonalize() {
        let g = g666();
        let r = |i| Isometry::reflection(&g, &g.plane(Vec4::unit(i))).unwrap();
        let m = r(0) * r(1) * r(2) * r(3);
        assert!((m * m.inverse(&g)).identity_residual() < 1e-10);
        let mut noisy = m;
        noisy.m[(0, 1)] += 1e-7;
        assert!(noisy.form_residual(&g) > 1e-9);
        let fixed = noisy.reorthogonalize(&g);
        assert!(fixed.form_residual(&g) < 1e-12);
        assert!((fixed.m - m.m).max_abs() < 1e-5 * m.m.max_abs());
    }

    #[test]
    fn projective_residual_scale() {
        let g = g666();
        let r = Isometry::reflection(&g, &g.plane(Vec4::unit(1))).unwrap();
        let scaled = Isometry { m: r.m.scale(3.0) };
        assert!(scaled.projective_residual(&r).unwrap() < 1e-12);
        let neg = Isometry { m: r.m.scale(-1.0) };
        assert!(neg.projective_residual(&r).is_none());
    }

    #[test]
    fn from_matrix_rejects_non_isometry() {
        let g = g666();
        let mut m = Mat4::identity();
        m[(0, 0)] = 2.0;
        assert!(Isometry::from_matrix(&g, m, 1e-12).is_err());
        assert!(Isometry::from_matrix(&g, Mat4::identity(), 1e-12).is_ok());
    }
}
