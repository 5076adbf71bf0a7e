//! Projective realization of the complete (doubly truncated) orthoscheme,
//! its special points, and the in/circum-radii of the cobweb cell.
//!
//! All coordinates live in the vertex basis `a_0..a_3`, where the scalar
//! product of points is the vertex Gram matrix `(a_ij)` and plane `b^j` is the
//! `j`-th coordinate form. Lengths use the unit `k = 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gram::{classify, gram_pair, GramPair, OrthoschemeClass, SchlafliTriple};
use crate::isometry::Isometry;
use crate::linalg::{Mat4, Vec4};
use crate::scalar::Real;

/// A point of the projective sphere, identified up to positive scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectivePoint<T> {
    pub x: Vec4<T>,
    /// `⟨x, x⟩` under the vertex Gram form.
    pub norm: T,
}

/// A plane given by its form, identified up to positive scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectivePlane<T> {
    pub u: Vec4<T>,
    /// `⟨u, u⟩` under the plane Gram form.
    pub norm: T,
}

impl<T: Real> ProjectivePoint<T> {
    pub fn is_interior(&self) -> bool {
        self.norm < T::zero()
    }

    /// Rescaled to `|⟨x,x⟩| = 1` (unchanged when the point is ideal).
    pub fn unit(&self) -> Self {
        let n = self.norm.abs();
        if n == T::zero() {
            *self
        } else {
            let s = n.sqrt().recip();
            Self { x: self.x.scale(s), norm: self.norm * s * s }
        }
    }

    /// Incidence with a plane, after unit scaling of both.
    pub fn lies_on(&self, plane: &ProjectivePlane<T>, tol: T) -> bool {
        let p = self.unit().x;
        let u = plane.unit().u;
        p.dot(&u).abs() <= tol * p.max_abs().max(T::one()) * u.max_abs().max(T::one())
    }
}

impl<T: Real> ProjectivePlane<T> {
    pub fn unit(&self) -> Self {
        let n = self.norm.abs();
        if n == T::zero() {
            *self
        } else {
            let s = n.sqrt().recip();
            Self { u: self.u.scale(s), norm: self.norm * s * s }
        }
    }

    /// The same plane with opposite orientation.
    pub fn flipped(&self) -> Self {
        Self { u: -self.u, norm: self.norm }
    }
}

impl<T: Real> GramPair<T> {
    pub fn point(&self, x: Vec4<T>) -> ProjectivePoint<T> {
        ProjectivePoint { x, norm: self.point_form(&x, &x) }
    }

    pub fn plane(&self, u: Vec4<T>) -> ProjectivePlane<T> {
        ProjectivePlane { u, norm: self.plane_form(&u, &u) }
    }

    /// Interior point rescaled so `⟨x,x⟩ = -1`.
    pub fn unit_point(&self, x: Vec4<T>) -> ProjectivePoint<T> {
        self.point(x).unit()
    }

    /// The point-space normal vector `n` of a plane form, `⟨n, x⟩ = x · u`.
    pub fn plane_normal(&self, plane: &ProjectivePlane<T>) -> Vec4<T> {
        self.b.entries * plane.u
    }

    /// The polar plane of a point: the form `x ↦ ⟨x, p⟩`.
    pub fn polar_plane(&self, p: &ProjectivePoint<T>) -> ProjectivePlane<T> {
        self.plane(self.a * p.x)
    }

    /// Hyperbolic distance between interior points.
    pub fn point_distance(&self, p: &ProjectivePoint<T>, q: &ProjectivePoint<T>) -> Result<T> {
        if !p.is_interior() || !q.is_interior() {
            return Err(Error::NonInterior);
        }
        let c = -self.point_form(&p.x, &q.x) / (p.norm * q.norm).sqrt();
        Ok(c.arcosh_clamped())
    }

    /// Distance from an interior point to a plane meeting the model.
    pub fn point_plane_distance(&self, p: &ProjectivePoint<T>, plane: &ProjectivePlane<T>) -> Result<T> {
        if !p.is_interior() {
            return Err(Error::NonInterior);
        }
        if plane.norm <= T::zero() {
            return Err(Error::DegeneratePlane);
        }
        Ok((p.x.dot(&plane.u).abs() / (-p.norm * plane.norm).sqrt()).asinh())
    }

    /// Orthogonal projection of a point onto a plane.
    pub fn project_to_plane(&self, p: &ProjectivePoint<T>, plane: &ProjectivePlane<T>) -> Result<ProjectivePoint<T>> {
        if plane.norm <= T::zero() {
            return Err(Error::DegeneratePlane);
        }
        let n = self.plane_normal(plane);
        let t = p.x.dot(&plane.u) / plane.norm;
        Ok(self.point(p.x - n.scale(t)))
    }

    /// Orthogonal projection onto the 2-dimensional span of two points.
    pub fn project_to_span(
        &self,
        p: &ProjectivePoint<T>,
        l0: &ProjectivePoint<T>,
        l1: &ProjectivePoint<T>,
    ) -> Result<ProjectivePoint<T>> {
        let g00 = self.point_form(&l0.x, &l0.x);
        let g01 = self.point_form(&l0.x, &l1.x);
        let g11 = self.point_form(&l1.x, &l1.x);
        let det = g00 * g11 - g01 * g01;
        // A line meeting the model has a Lorentzian 2-dimensional span.
        if det >= T::zero() {
            return Err(Error::DegenerateLine);
        }
        let r0 = self.point_form(&l0.x, &p.x);
        let r1 = self.point_form(&l1.x, &p.x);
        let c0 = (g11 * r0 - g01 * r1) / det;
        let c1 = (g00 * r1 - g01 * r0) / det;
        Ok(self.point(l0.x.scale(c0) + l1.x.scale(c1)))
    }

    /// Distance from an interior point to the geodesic spanned by two points.
    pub fn point_line_distance(
        &self,
        p: &ProjectivePoint<T>,
        l0: &ProjectivePoint<T>,
        l1: &ProjectivePoint<T>,
    ) -> Result<T> {
        let mut foot = self.project_to_span(p, l0, l1)?;
        if self.point_form(&foot.x, &p.x) > T::zero() {
            foot.x = -foot.x;
        }
        self.point_distance(p, &foot)
    }
}

/// The complete orthoscheme `W_uvw` with its truncating planes and the
/// special points used by the cobweb construction.
#[derive(Clone, Debug)]
pub struct TruncatedOrthoscheme<T> {
    pub symbol: SchlafliTriple,
    pub class: OrthoschemeClass,
    pub gram: GramPair<T>,
    /// `A_0..A_3`, the coordinate points `e_i`.
    pub vertices: [ProjectivePoint<T>; 4],
    /// `b^0..b^3`, oriented so the orthoscheme is on the non-negative side.
    pub planes: [ProjectivePlane<T>; 4],
    /// Polar plane of `A_0`, oriented towards the orthoscheme.
    pub polar_a0: ProjectivePlane<T>,
    /// Polar plane of `A_3`, oriented towards the orthoscheme.
    pub polar_a3: ProjectivePlane<T>,
    /// Kernel point on edge `A_2A_3` and the truncating plane of `A_3`.
    pub q: ProjectivePoint<T>,
    /// Truncation point on edge `A_0A_3`.
    pub j: ProjectivePoint<T>,
    /// Foot of the perpendicular from `Q` to `b^2` (on line `A_1A_3`).
    pub e: ProjectivePoint<T>,
    /// Midpoint of `A_1A_2`.
    pub f12: ProjectivePoint<T>,
    /// Midpoint of the truncated edge on `A_0A_3`; needs `u = w`.
    pub f03: Option<ProjectivePoint<T>>,
    /// Halving point on line `A_1A_3`; needs `u = w`.
    pub e13: Option<ProjectivePoint<T>>,
    /// Half-turn image of `E13` on line `A_0A_2`; needs `u = w`.
    pub e02: Option<ProjectivePoint<T>>,
    /// Bisector of `Q` and `h(Q)`; contains the half-turn axis. Oriented
    /// towards `Q`.
    pub halving_plane: Option<ProjectivePlane<T>>,
    /// Half-turn about `F03F12`; needs `u = w`.
    pub half_turn: Option<Isometry<T>>,
}

pub fn realize<T: Real>(symbol: SchlafliTriple) -> Result<TruncatedOrthoscheme<T>> {
    let class = classify::<T>(symbol);
    class.require_complete_truncated()?;
    let gram = gram_pair::<T>(symbol)?;
    let a = gram.a;
    let vertices = std::array::from_fn(|i| gram.point(Vec4::unit(i)));
    let planes = std::array::from_fn(|i| gram.plane(Vec4::unit(i)));
    let polar_a0 = gram.plane(-(a.row(0)));
    let polar_a3 = gram.plane(-(a.row(3)));

    let q = gram.point(Vec4::unit(2).scale(a[(3, 3)]) - Vec4::unit(3).scale(a[(2, 3)]));
    let j = gram.point(Vec4::unit(0).scale(a[(3, 3)]) - Vec4::unit(3).scale(a[(0, 3)]));
    let e = gram.project_to_plane(&q, &planes[2])?;

    let unit = |i: usize| vertices[i].unit().x;
    let f12 = gram.point(unit(1) + unit(2));

    let (f03, e13, e02, halving_plane, half_turn) = if symbol.has_half_turn() {
        let plus = gram.point(unit(0) + unit(3));
        let minus = gram.point(unit(0) - unit(3));
        let f03 = if plus.norm < T::zero() { plus } else { minus };
        let h = Isometry::half_turn(&gram, &f03, &f12)?;
        let qn = q.unit();
        let hq = gram.point(h.apply(&qn.x));
        let halving = gram.plane(a * (qn.x - hq.x));
        // E13 = line A1A3 ∩ halving plane.
        let f = halving.u;
        let mut x = Vec4::unit(1).scale(f[3]) - Vec4::unit(3).scale(f[1]);
        if x[1] < T::zero() {
            x = -x;
        }
        let e13 = gram.point(x);
        let e02 = gram.point(h.apply(&e13.x));
        (Some(f03), Some(e13), Some(e02), Some(halving), Some(h))
    } else {
        (None, None, None, None, None)
    };

    Ok(TruncatedOrthoscheme {
        symbol,
        class,
        gram,
        vertices,
        planes,
        polar_a0,
        polar_a3,
        q,
        j,
        e,
        f12,
        f03,
        e13,
        e02,
        halving_plane,
        half_turn,
    })
}

impl<T: Real> TruncatedOrthoscheme<T> {
    /// Length of edge `A_iA_j` between proper vertices.
    pub fn vertex_distance(&self, i: usize, j: usize) -> Result<T> {
        let a = &self.gram.a;
        for k in [i, j] {
            if a[(k, k)] >= T::zero() {
                return Err(Error::OuterVertex(k));
            }
        }
        if i == j {
            return Ok(T::zero());
        }
        Ok((-a[(i, j)] / (a[(i, i)] * a[(j, j)]).sqrt()).arcosh_clamped())
    }

    /// `cosh(A_iA_j)` via the vertex Gram matrix.
    pub fn vertex_cosh(&self, i: usize, j: usize) -> T {
        let a = &self.gram.a;
        -a[(i, j)] / (a[(i, i)] * a[(j, j)]).sqrt()
    }

    pub fn f03(&self) -> Result<ProjectivePoint<T>> {
        self.f03.ok_or(Error::NoHalfTurnSymmetry)
    }

    pub fn e13(&self) -> Result<ProjectivePoint<T>> {
        self.e13.ok_or(Error::NoHalfTurnSymmetry)
    }

    pub fn half_turn(&self) -> Result<Isometry<T>> {
        self.half_turn.ok_or(Error::NoHalfTurnSymmetry)
    }

    pub fn halving_plane(&self) -> Result<ProjectivePlane<T>> {
        self.halving_plane.ok_or(Error::NoHalfTurnSymmetry)
    }

    /// Height of the cobweb cell, `2·QA2`.
    pub fn height(&self) -> Result<T> {
        Ok(T::two() * self.gram.point_distance(&self.q, &self.vertices[2])?)
    }

    /// Half-space forms of the half-orthoscheme containing `Q`:
    /// `b^0..b^3`, both polar planes, and the halving plane, each `≥ 0` inside.
    pub fn half_domain_forms(&self) -> Result<Vec<ProjectivePlane<T>>> {
        let mut forms: Vec<_> = self.planes.to_vec();
        forms.push(self.polar_a3);
        forms.push(self.polar_a0);
        forms.push(self.halving_plane()?);
        Ok(forms)
    }

    /// Change of basis to an orthonormal `(+,+,+,-)` frame whose timelike
    /// axis passes through `Q`: columns are the frame vectors in the vertex
    /// basis, the last one being `Q` itself.
    pub fn frame_at_q(&self) -> Mat4<T> {
        let g = &self.gram;
        let q = self.q.unit().x;
        let axis = self.vertices[2].x;
        let toward_e = self.e.x;
        let mut basis: Vec<Vec4<T>> = Vec::new();
        let orth = |mut x: Vec4<T>, basis: &[Vec4<T>]| {
            x = x + q.scale(g.point_form(&x, &q));
            for f in basis {
                x = x - f.scale(g.point_form(&x, f));
            }
            let n = g.point_form(&x, &x);
            x.scale(n.sqrt().recip())
        };
        // Axis of the cell (towards A2) as the third spacelike direction.
        let z = orth(axis, &basis);
        basis.push(z);
        let xdir = orth(toward_e, &basis);
        basis.push(xdir);
        let mut c = Vec4::zero();
        for i in 0..4 {
            let cand = orth(Vec4::unit(i), &basis);
            if cand.0.iter().all(|v| v.is_finite()) && cand.max_abs() > T::zero() {
                c = cand;
                break;
            }
        }
        // Right-handed (x, y, z, t) frame.
        let mut m = Mat4::from_cols([xdir, c, z, q]);
        if m.det() < T::zero() {
            m = Mat4::from_cols([xdir, -c, z, q]);
        }
        m
    }
}

/// One candidate distance of a min/max radius computation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusCandidate {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusReport {
    pub value: f64,
    pub attained_by: &'static str,
    pub candidates: Vec<RadiusCandidate>,
    /// Explicit closed form for the attaining candidate.
    pub closed_form: f64,
    /// Secondary closed form, where one is printed.
    pub alternate_form: Option<f64>,
}

fn pick(candidates: Vec<RadiusCandidate>, max: bool) -> (f64, &'static str, Vec<RadiusCandidate>) {
    let best = candidates
        .iter()
        .min_by(|a, b| {
            let o = a.value.partial_cmp(&b.value).unwrap();
            if max {
                o.reverse()
            } else {
                o
            }
        })
        .unwrap();
    (best.value, best.name, candidates.clone())
}

fn f<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Radius of the largest ball about `Q` inside the cobweb cell:
/// `min{QA2, Q b², Q(F03F12)}`.
pub fn inradius<T: Real>(symbol: SchlafliTriple) -> Result<RadiusReport> {
    let t = realize::<T>(symbol)?;
    inradius_of(&t)
}

pub fn inradius_of<T: Real>(t: &TruncatedOrthoscheme<T>) -> Result<RadiusReport> {
    let g = &t.gram;
    let f03 = t.f03()?;
    let candidates = vec![
        RadiusCandidate { name: "QA2", value: f(g.point_distance(&t.q, &t.vertices[2])?) },
        RadiusCandidate { name: "QE", value: f(g.point_plane_distance(&t.q, &t.planes[2])?) },
        RadiusCandidate { name: "Q(F03F12)", value: f(g.point_line_distance(&t.q, &f03, &t.f12)?) },
    ];
    let (value, attained_by, candidates) = pick(candidates, false);
    let [au, av, aw] = t.symbol.angles::<T>();
    let (su2, cw2, cv2) = (au.sin().powi(2), aw.cos().powi(2), av.cos().powi(2));
    let explicit = (T::one() + su2 * cw2 / (cv2 - su2)).sqrt().arcosh_clamped();
    let polar = t.gram.a[(3, 3)].sqrt().recip().arcosh_clamped();
    Ok(RadiusReport {
        value,
        attained_by,
        candidates,
        closed_form: f(explicit),
        alternate_form: Some(f(polar)),
    })
}

/// Radius of the smallest ball about `Q` containing the cobweb cell:
/// `max{QF12, QF03, QE13}`.
pub fn circumradius<T: Real>(symbol: SchlafliTriple) -> Result<RadiusReport> {
    let t = realize::<T>(symbol)?;
    circumradius_of(&t)
}

pub fn circumradius_of<T: Real>(t: &TruncatedOrthoscheme<T>) -> Result<RadiusReport> {
    let g = &t.gram;
    let candidates = vec![
        RadiusCandidate { name: "QF12", value: f(g.point_distance(&t.q, &t.f12)?) },
        RadiusCandidate { name: "QF03", value: f(g.point_distance(&t.q, &t.f03()?)?) },
        RadiusCandidate { name: "QE13", value: f(g.point_distance(&t.q, &t.e13()?)?) },
    ];
    let (value, attained_by, candidates) = pick(candidates, true);
    let [au, av, _] = t.symbol.angles::<T>();
    let a = &t.gram.a;
    let denom = (T::two() * t.gram.det * a[(3, 3)] * (a[(3, 3)] + a[(0, 3)])).sqrt();
    let closed = (au.tan().recip() * av.cos() / denom).arcosh_clamped();
    Ok(RadiusReport { value, attained_by, candidates, closed_form: f(closed), alternate_form: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w666() -> TruncatedOrthoscheme<f64> {
        realize(SchlafliTriple::new(6, 6, 6).unwrap()).unwrap()
    }

    #[test]
    fn incidences_of_coordinate_simplex() {
        let t = w666();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(t.vertices[i].lies_on(&t.planes[j], 1e-12));
                }
            }
        }
    }

    #[test]
    fn q_on_polar_plane_and_interior() {
        let t = w666();
        assert!(t.q.lies_on(&t.polar_a3, 1e-12));
        assert!(t.q.is_interior());
        assert!(t.q.lies_on(&t.planes[0], 1e-12));
        assert!(t.q.lies_on(&t.planes[1], 1e-12));
    }

    #[test]
    fn e_on_line_a1a3() {
        let t = w666();
        // E lies on b0 and b2, whose intersection is line A1A3.
        assert!(t.e.lies_on(&t.planes[0], 1e-10));
        assert!(t.e.lies_on(&t.planes[2], 1e-10));
        assert!(t.e.lies_on(&t.polar_a3, 1e-10));
        assert!(t.e.x[0].abs() < 1e-12 && t.e.x[2].abs() < 1e-12);
    }

    #[test]
    fn j_on_polar_and_edge() {
        let t = w666();
        assert!(t.j.lies_on(&t.polar_a3, 1e-12));
        assert!(t.j.lies_on(&t.planes[1], 1e-12));
        assert!(t.j.lies_on(&t.planes[2], 1e-12));
    }

    #[test]
    fn f12_is_midpoint() {
        let t = w666();
        let g = &t.gram;
        let d1 = g.point_distance(&t.f12, &t.vertices[1]).unwrap();
        let d2 = g.point_distance(&t.f12, &t.vertices[2]).unwrap();
        assert!((d1 - d2).abs() < 1e-10);
    }

    #[test]
    fn a1a2_distance() {
        let t = w666();
        assert!((t.vertex_cosh(1, 2) - 2.0 * 3f64.sqrt()).abs() < 1e-12);
        let d = t.vertex_distance(1, 2).unwrap();
        assert!((d - 1.91408).abs() < 1e-5);
        assert_eq!(t.vertex_distance(1, 1).unwrap(), 0.0);
        assert!((t.vertex_distance(2, 1).unwrap() - d).abs() < 1e-15);
        assert!(matches!(t.vertex_distance(0, 1), Err(Error::OuterVertex(0))));
        let pd = t.gram.point_distance(&t.vertices[1], &t.vertices[2]).unwrap();
        assert!((pd - d).abs() < 1e-12);
    }

    #[test]
    fn point_distance_basics() {
        let t = w666();
        assert_eq!(t.gram.point_distance(&t.q, &t.q).unwrap(), 0.0);
        let qa2 = t.gram.point_distance(&t.q, &t.vertices[2]).unwrap();
        assert!((qa2 - 0.57941).abs() < 1e-5);
        assert!(matches!(
            t.gram.point_distance(&t.vertices[0], &t.q),
            Err(Error::NonInterior)
        ));
    }

    #[test]
    fn plane_distance_equals_foot_distance() {
        let t = w666();
        let g = &t.gram;
        let d = g.point_plane_distance(&t.q, &t.planes[2]).unwrap();
        let foot = g.point_distance(&t.q, &t.e).unwrap();
        assert!((d - foot).abs() < 1e-10);
        assert_eq!(g.point_plane_distance(&t.vertices[1], &t.planes[0]).unwrap(), 0.0);
        let r = inradius_of(&t).unwrap().value;
        assert!(d >= r);
    }

    #[test]
    fn line_distance_respan_invariant() {
        let t = w666();
        let g = &t.gram;
        let f03 = t.f03().unwrap();
        let d = g.point_line_distance(&t.q, &f03, &t.f12).unwrap();
        // Re-span with F03 and a different point of the same line.
        let other = g.point(f03.x.scale(0.3) + t.f12.x.scale(2.0));
        let d2 = g.point_line_distance(&t.q, &f03, &other).unwrap();
        assert!((d - d2).abs() < 1e-10);
        assert!(g.point_line_distance(&f03, &f03, &t.f12).unwrap() < 1e-7);
        assert!(d >= inradius_of(&t).unwrap().value);
    }

    #[test]
    fn degenerate_line_rejected() {
        let t = w666();
        // Two outer vertices whose span misses the model? A0A3 meets it, so
        // use a spacelike pair inside the polar plane of Q.
        let g = &t.gram;
        let polar = g.polar_plane(&t.q);
        let n = g.plane_normal(&polar);
        let _ = n;
        let p = g.point(t.j.x);
        assert!(g.point_line_distance(&t.q, &p, &p).is_err());
    }

    #[test]
    fn radii_666() {
        let t = w666();
        let r = inradius_of(&t).unwrap();
        assert_eq!(r.attained_by, "QA2");
        assert!((r.value - 0.57941).abs() < 1e-5);
        assert!((r.value - r.closed_form).abs() < 1e-10);
        assert!((r.value - r.alternate_form.unwrap()).abs() < 1e-10);
        let big = circumradius_of(&t).unwrap();
        assert_eq!(big.attained_by, "QF03");
        assert!((big.value - 1.83634).abs() < 1e-5);
        assert!((big.closed_form - 1.8365).abs() < 2e-4);
        assert!(big.value > r.value);
    }

    #[test]
    fn half_turn_swaps_vertices() {
        let t = w666();
        let h = t.half_turn().unwrap();
        for (i, j) in [(0, 3), (1, 2), (2, 1), (3, 0)] {
            let img = h.apply(&t.vertices[i].x);
            assert!((img - t.vertices[j].x).max_abs() < 1e-10);
        }
        let e02 = t.e02.unwrap();
        assert!(e02.x[1].abs() < 1e-12 && e02.x[3].abs() < 1e-12);
    }

    #[test]
    fn not_complete_truncated() {
        let s = SchlafliTriple::new(5, 3, 5).unwrap();
        assert!(matches!(realize::<f64>(s), Err(Error::NotCompleteTruncated { .. })));
        assert!(inradius::<f64>(SchlafliTriple::new(4, 4, 4).unwrap()).is_err());
    }

    #[test]
    fn no_half_turn_refuses_radii() {
        let s = SchlafliTriple::new(6, 6, 7).unwrap();
        let t = realize::<f64>(s).unwrap();
        assert!(t.f03.is_none());
        assert!(matches!(inradius_of(&t), Err(Error::NoHalfTurnSymmetry)));
        assert!(matches!(circumradius_of(&t), Err(Error::NoHalfTurnSymmetry)));
    }

    #[test]
    fn frame_is_orthonormal() {
        let t = w666();
        let m = t.frame_at_q();
        let g = m.transpose() * t.gram.a * m;
        let mut j = Mat4::identity();
        j[(3, 3)] = -1.0;
        assert!((g - j).max_abs() < 1e-10);
    }
}
