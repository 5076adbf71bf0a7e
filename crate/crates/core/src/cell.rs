//! The cobweb cell: the stabilizer of `Q`, the orbit of half-orthoschemes
//! around it, and the resulting polyhedron with faces, edges and face-pairing
//! isometries.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gram::GramPair;
use crate::isometry::Isometry;
use crate::linalg::{cross3, Mat4, Vec4};
use crate::orthoscheme::{inradius_of, ProjectivePlane, ProjectivePoint, TruncatedOrthoscheme};
use crate::scalar::Real;

/// Incidence tolerance for unit-normalized points and plane forms.
pub const INCIDENCE_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct CellFace<T> {
    /// Unit form, non-negative on the cell.
    pub plane: ProjectivePlane<T>,
    /// Boundary cycle, oriented so that `det[v0, v1, v2, n] > 0` for the
    /// inward normal `n`; starts at the smallest vertex id.
    pub vertices: Vec<usize>,
}

impl<T> CellFace<T> {
    pub fn sides(&self) -> usize {
        self.vertices.len()
    }
}

#[derive(Clone, Debug)]
pub struct CellEdge<T> {
    /// Endpoints, smaller id first.
    pub vertices: [usize; 2],
    pub faces: [usize; 2],
    /// Interior dihedral angle of the cell along the edge.
    pub dihedral: T,
}

/// One image `g(H)` of the half-orthoscheme.
#[derive(Clone, Debug)]
pub struct HalfDomainCopy<T> {
    pub placement: Isometry<T>,
    pub forms: Vec<ProjectivePlane<T>>,
    pub vertices: Vec<Vec4<T>>,
}

#[derive(Clone, Debug)]
pub struct CobwebCell<T> {
    pub orthoscheme: TruncatedOrthoscheme<T>,
    pub stabilizer: Vec<Isometry<T>>,
    pub copies: Vec<HalfDomainCopy<T>>,
    /// Unit-normalized vertices (`⟨x,x⟩ = -1`).
    pub vertices: Vec<ProjectivePoint<T>>,
    pub faces: Vec<CellFace<T>>,
    pub edges: Vec<CellEdge<T>>,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct TilingReport {
    pub copies: usize,
    /// Smallest separation of a sampled interior point of one copy from any
    /// other copy (positive means outside).
    pub min_separation: f64,
    /// Largest violation of a cell face inequality by a copy vertex.
    pub max_containment_violation: f64,
    /// Smallest distance from `Q` to a face plane.
    pub min_face_distance: f64,
    pub inradius: f64,
}

fn unit_point<T: Real>(gram: &GramPair<T>, x: Vec4<T>) -> ProjectivePoint<T> {
    gram.point(x).unit()
}

fn approx_cmp<T: Real>(a: &Vec4<T>, b: &Vec4<T>, tol: T) -> Ordering {
    for i in 0..4 {
        if (a[i] - b[i]).abs() > tol {
            return a[i].partial_cmp(&b[i]).unwrap_or(Ordering::Equal);
        }
    }
    Ordering::Equal
}

/// Vertices of `{x : x·f ≥ 0 for all f}` that lie inside or on the model,
/// each unit-normalized.
pub fn polytope_vertices<T: Real>(gram: &GramPair<T>, forms: &[ProjectivePlane<T>], tol: T) -> Vec<Vec4<T>> {
    let n = forms.len();
    let mut out: Vec<Vec4<T>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let x = cross3(&forms[i].u, &forms[j].u, &forms[k].u);
                let scale = x.max_abs();
                if scale <= tol {
                    continue;
                }
                let x = x.scale(scale.recip());
                let sign = if forms.iter().all(|f| x.dot(&f.u) >= -tol) {
                    T::one()
                } else if forms.iter().all(|f| x.dot(&f.u) <= tol) {
                    -T::one()
                } else {
                    continue;
                };
                let p = gram.point(x.scale(sign));
                if p.norm >= T::zero() {
                    continue;
                }
                let v = p.unit().x;
                if !out.iter().any(|w| (*w - v).max_abs() <= tol * T::lit(100.0)) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Closure of `{m0, m1, r_a3}`: the isometries fixing `Q`, in breadth-first
/// order from the identity.
pub fn stabilizer_of_q<T: Real>(t: &TruncatedOrthoscheme<T>) -> Result<Vec<Isometry<T>>> {
    let g = &t.gram;
    let gens = [
        Isometry::reflection(g, &t.planes[0])?,
        Isometry::reflection(g, &t.planes[1])?,
        Isometry::reflection(g, &t.polar_a3)?,
    ];
    let limit = 4 * t.symbol.u as usize;
    let elements = closure(&gens, limit)?;
    let q = t.q.unit();
    for e in &elements {
        let img = e.apply(&q.x);
        if (img - q.x).max_abs() > T::lit(1e-10) * q.x.max_abs() {
            return Err(Error::GeometryMismatch("stabilizer element moves Q".into()));
        }
    }
    Ok(elements)
}

/// Group generated by `gens`, failing once it exceeds `limit` elements.
pub fn closure<T: Real>(gens: &[Isometry<T>], limit: usize) -> Result<Vec<Isometry<T>>> {
    let tol = T::lit(1e-9);
    let mut elements = vec![Isometry::identity()];
    let mut next = 0;
    while next < elements.len() {
        let g = elements[next];
        next += 1;
        for s in gens {
            let x = *s * g;
            if !elements.iter().any(|e| (e.m - x.m).max_abs() <= tol * x.m.max_abs()) {
                elements.push(x);
                if elements.len() > limit {
                    return Err(Error::ClosureOverflow { limit });
                }
            }
        }
    }
    Ok(elements)
}

/// Orders the vertices of a planar face cyclically.
fn order_face<T: Real>(
    gram: &GramPair<T>,
    plane: &ProjectivePlane<T>,
    vertices: &[ProjectivePoint<T>],
    ids: &[usize],
) -> Vec<usize> {
    let mut centroid = Vec4::zero();
    for &i in ids {
        centroid = centroid + vertices[i].x;
    }
    let normal = gram.plane_normal(plane);
    let mut basis: Vec<Vec4<T>> = Vec::new();
    for e in 0..4 {
        let mut x = Vec4::unit(e);
        for y in [centroid, normal].iter().chain(basis.iter()) {
            x = x - y.scale(gram.point_form(&x, y) / gram.point_form(y, y));
        }
        if gram.point_form(&x, &x).abs() > T::lit(1e-8) {
            basis.push(x);
        }
        if basis.len() == 2 {
            break;
        }
    }
    let mut keyed: Vec<(T, usize)> = ids
        .iter()
        .map(|&i| {
            let v = &vertices[i].x;
            (gram.point_form(v, &basis[1]).atan2(gram.point_form(v, &basis[0])), i)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    let mut cycle: Vec<usize> = keyed.into_iter().map(|(_, i)| i).collect();
    let d = Mat4::from_cols([vertices[cycle[0]].x, vertices[cycle[1]].x, vertices[cycle[2]].x, normal]).det();
    if d < T::zero() {
        cycle.reverse();
    }
    let start = cycle.iter().enumerate().min_by_key(|(_, v)| **v).map(|(k, _)| k).unwrap();
    cycle.rotate_left(start);
    cycle
}

pub fn dihedral_angle<T: Real>(gram: &GramPair<T>, f: &ProjectivePlane<T>, g: &ProjectivePlane<T>) -> T {
    let c = -gram.plane_form(&f.u, &g.u) / (f.norm * g.norm).sqrt();
    c.max(-T::one()).min(T::one()).acos()
}

impl<T: Real> CobwebCell<T> {
    /// Glues the `4u` images of the half-orthoscheme around `Q`.
    pub fn build(t: &TruncatedOrthoscheme<T>) -> Result<Self> {
        t.symbol.cobweb_p()?;
        let gram = t.gram;
        let tol = T::lit(INCIDENCE_TOL);
        let stabilizer = stabilizer_of_q(t)?;

        let half_forms: Vec<ProjectivePlane<T>> = t.half_domain_forms()?.iter().map(|f| f.unit()).collect();
        let half_vertices = polytope_vertices(&gram, &half_forms, tol);
        let copies: Vec<HalfDomainCopy<T>> = stabilizer
            .iter()
            .map(|g| HalfDomainCopy {
                placement: *g,
                forms: half_forms.iter().map(|f| g.apply_plane(&gram, f).unit()).collect(),
                vertices: half_vertices.iter().map(|v| g.apply(v)).collect(),
            })
            .collect();

        // Outer walls of H: the faces not passing through Q.
        let q = t.q.unit();
        let walls: Vec<&ProjectivePlane<T>> = half_forms.iter().filter(|f| q.x.dot(&f.u).abs() > tol).collect();
        let mut planes: Vec<ProjectivePlane<T>> = Vec::new();
        for g in &stabilizer {
            for f in &walls {
                let img = g.apply_plane(&gram, f).unit();
                let mut merged = false;
                for (k, p) in planes.iter().enumerate() {
                    let diff = (p.u - img.u).max_abs();
                    if diff <= tol {
                        merged = true;
                        break;
                    }
                    if diff <= tol * T::lit(10.0) {
                        return Err(Error::MergeAmbiguity(k, planes.len()));
                    }
                }
                if !merged {
                    planes.push(img);
                }
            }
        }

        let mut coords = polytope_vertices(&gram, &planes, tol);
        coords.sort_by(|a, b| approx_cmp(a, b, tol));
        let vertices: Vec<ProjectivePoint<T>> = coords.iter().map(|x| unit_point(&gram, *x)).collect();

        let mut faces: Vec<CellFace<T>> = Vec::new();
        for plane in planes {
            let on: Vec<usize> = (0..vertices.len())
                .filter(|&i| vertices[i].x.dot(&plane.u).abs() <= tol * T::lit(100.0))
                .collect();
            if on.len() >= 3 {
                let cycle = order_face(&gram, &plane, &vertices, &on);
                faces.push(CellFace { plane, vertices: cycle });
            }
        }
        faces.sort_by(|a, b| b.sides().cmp(&a.sides()).then_with(|| approx_cmp(&a.plane.u, &b.plane.u, tol)));

        let mut by_edge: BTreeMap<[usize; 2], Vec<usize>> = BTreeMap::new();
        for (k, f) in faces.iter().enumerate() {
            let n = f.vertices.len();
            for i in 0..n {
                let (a, b) = (f.vertices[i], f.vertices[(i + 1) % n]);
                by_edge.entry([a.min(b), a.max(b)]).or_default().push(k);
            }
        }
        let mut edges = Vec::with_capacity(by_edge.len());
        for (key, fs) in by_edge {
            if fs.len() != 2 {
                return Err(Error::GeometryMismatch(format!(
                    "edge {:?} lies on {} faces",
                    key,
                    fs.len()
                )));
            }
            let dihedral = dihedral_angle(&gram, &faces[fs[0]].plane, &faces[fs[1]].plane);
            edges.push(CellEdge { vertices: key, faces: [fs[0], fs[1]], dihedral });
        }

        Ok(Self { orthoscheme: t.clone(), stabilizer, copies, vertices, faces, edges })
    }

    pub fn gram(&self) -> &GramPair<T> {
        &self.orthoscheme.gram
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        let key = [a.min(b), a.max(b)];
        self.edges.binary_search_by(|e| e.vertices.cmp(&key)).ok()
    }

    /// Unit outward normal vector of a face.
    pub fn outward_normal(&self, face: usize) -> Vec4<T> {
        let plane = &self.faces[face].plane;
        -self.gram().plane_normal(plane).scale(plane.norm.sqrt().recip())
    }

    /// The vertex matching a point, if any.
    pub fn find_vertex(&self, x: &Vec4<T>, tol: T) -> Option<usize> {
        let p = self.gram().point(*x);
        if p.norm >= T::zero() {
            return None;
        }
        let u = p.unit().x;
        self.vertices.iter().position(|v| (v.x - u).max_abs() <= tol)
    }

    /// Permutation of vertices induced by an isometry, if it preserves them.
    pub fn vertex_permutation(&self, g: &Isometry<T>, tol: T) -> Option<Vec<usize>> {
        self.vertices.iter().map(|v| self.find_vertex(&g.apply(&v.x), tol)).collect()
    }

    /// Permutation of faces induced by a vertex permutation.
    pub fn face_permutation(&self, vperm: &[usize]) -> Option<Vec<usize>> {
        let sets: Vec<Vec<usize>> = self
            .faces
            .iter()
            .map(|f| {
                let mut s = f.vertices.clone();
                s.sort_unstable();
                s
            })
            .collect();
        sets.iter()
            .map(|s| {
                let mut img: Vec<usize> = s.iter().map(|&v| vperm[v]).collect();
                img.sort_unstable();
                sets.iter().position(|t| *t == img)
            })
            .collect()
    }

    /// The orientation-preserving isometry sending face `from` onto face `to`
    /// with `images[i]` the image of the `i`-th boundary vertex of `from`.
    /// The cell is carried across `to`; a face mapped onto itself keeps the
    /// cell on its side.
    pub fn pairing_isometry(&self, from: usize, to: usize, images: &[usize], tol: T) -> Result<Isometry<T>> {
        let nf = self.faces.len();
        if from >= nf || to >= nf {
            return Err(Error::NoIsometry { from, to });
        }
        let src_face = &self.faces[from];
        if images.len() != src_face.sides() || self.faces[to].sides() != src_face.sides() {
            return Err(Error::NoIsometry { from, to });
        }
        let v = |i: usize| self.vertices[i].x;
        let n_from = self.outward_normal(from);
        let n_to = if from == to { self.outward_normal(to) } else { -self.outward_normal(to) };
        let src = Mat4::from_cols([v(src_face.vertices[0]), v(src_face.vertices[1]), v(src_face.vertices[2]), n_from]);
        let dst = Mat4::from_cols([v(images[0]), v(images[1]), v(images[2]), n_to]);
        let inv = src.inverse().ok_or(Error::NoIsometry { from, to })?;
        let iso = Isometry { m: dst * inv };
        if iso.form_residual(self.gram()) > tol {
            return Err(Error::NoIsometry { from, to });
        }
        for (k, &i) in src_face.vertices.iter().enumerate() {
            let diff = (iso.apply(&v(i)) - v(images[k])).max_abs();
            if diff > tol * v(i).max_abs().max(T::one()) {
                return Err(Error::NoIsometry { from, to });
            }
        }
        if iso.det() < T::zero() {
            return Err(Error::OrientationReversing { from, to });
        }
        Ok(iso)
    }

    /// Interior-disjointness of the copies, containment in the cell, and
    /// face distances from `Q`.
    pub fn tiling_report(&self) -> Result<TilingReport> {
        let gram = self.gram();
        let f64_of = |x: T| x.to_f64().unwrap_or(f64::NAN);
        let mut min_sep = T::infinity();
        for (i, c) in self.copies.iter().enumerate() {
            let mut centroid = Vec4::zero();
            for v in &c.vertices {
                centroid = centroid + *v;
            }
            let centroid = gram.point(centroid).unit().x;
            let mut samples = vec![centroid];
            for v in &c.vertices {
                samples.push(gram.point(centroid + *v).unit().x);
            }
            for (j, other) in self.copies.iter().enumerate() {
                if i == j {
                    continue;
                }
                for s in &samples {
                    let inside = other.forms.iter().map(|f| s.dot(&f.u)).fold(T::infinity(), T::min);
                    min_sep = min_sep.min(-inside);
                }
            }
        }
        let mut worst = T::zero();
        for c in &self.copies {
            for v in &c.vertices {
                let u = gram.point(*v).unit().x;
                for f in &self.faces {
                    worst = worst.max(-u.dot(&f.plane.u));
                }
            }
        }
        let q = self.orthoscheme.q;
        let mut min_face = T::infinity();
        for f in &self.faces {
            min_face = min_face.min(gram.point_plane_distance(&q, &f.plane)?);
        }
        Ok(TilingReport {
            copies: self.copies.len(),
            min_separation: f64_of(min_sep),
            max_containment_violation: f64_of(worst),
            min_face_distance: f64_of(min_face),
            inradius: inradius_of(&self.orthoscheme)?.value,
        })
    }

    /// The order-3 rotation `(m0 m1)²` about the axis of the cell.
    pub fn trigonal_rotation(&self) -> Result<Isometry<T>> {
        let t = &self.orthoscheme;
        let m = Isometry::reflection(&t.gram, &t.planes[0])? * Isometry::reflection(&t.gram, &t.planes[1])?;
        Ok(m * m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::SchlafliTriple;
    use crate::orthoscheme::realize;

    fn cell666() -> CobwebCell<f64> {
        CobwebCell::build(&realize(SchlafliTriple::new(6, 6, 6).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn stabilizer_orders() {
        let t = realize::<f64>(SchlafliTriple::new(6, 6, 6).unwrap()).unwrap();
        assert_eq!(stabilizer_of_q(&t).unwrap().len(), 24);
        let g = &t.gram;
        let dihedral =
            closure(&[Isometry::reflection(g, &t.planes[0]).unwrap(), Isometry::reflection(g, &t.planes[1]).unwrap()], 100)
                .unwrap();
        assert_eq!(dihedral.len(), 12);
        let r = Isometry::reflection(g, &t.planes[0]).unwrap();
        let tr = Isometry::reflection(g, &t.polar_a0).unwrap() * Isometry::reflection(g, &t.polar_a3).unwrap();
        assert!(matches!(closure(&[r, tr], 50), Err(Error::ClosureOverflow { limit: 50 })));
    }

    #[test]
    fn counts() {
        let c = cell666();
        assert_eq!(c.faces.len(), 32);
        assert_eq!(c.vertices.len(), 48);
        assert_eq!(c.edges.len(), 78);
        assert_eq!(c.euler_characteristic(), 2);
        let mut sizes: Vec<usize> = c.faces.iter().map(|f| f.sides()).collect();
        sizes.dedup();
        assert_eq!(sizes, vec![12, 6, 4]);
        assert_eq!(c.faces.iter().filter(|f| f.sides() == 6).count(), 6);
        assert_eq!(c.copies.len(), 24);
    }

    #[test]
    fn faces_are_planar_and_oriented() {
        let c = cell666();
        for f in &c.faces {
            for &v in &f.vertices {
                assert!(c.vertices[v].x.dot(&f.plane.u).abs() < 1e-9);
            }
            for v in &c.vertices {
                assert!(v.x.dot(&f.plane.u) > -1e-9);
            }
        }
    }

    #[test]
    fn hexagon_edges_meet_at_sixty_degrees() {
        let c = cell666();
        let hex: Vec<_> = c
            .edges
            .iter()
            .filter(|e| c.faces[e.faces[0]].sides() == 6 && c.faces[e.faces[1]].sides() == 6)
            .collect();
        assert_eq!(hex.len(), 6);
        for e in hex {
            assert!((e.dihedral - std::f64::consts::PI / 3.0).abs() < 1e-10);
        }
    }

    #[test]
    fn tiling() {
        let c = cell666();
        let rep = c.tiling_report().unwrap();
        assert!(rep.min_separation >= 1e-9);
        assert!(rep.max_containment_violation < 1e-9);
        assert!(rep.min_face_distance >= rep.inradius - 1e-9);
    }

    #[test]
    fn identity_pairing_and_orientation() {
        let c = cell666();
        let f = &c.faces[0];
        let id = c.pairing_isometry(0, 0, &f.vertices, 1e-8).unwrap();
        assert!(id.identity_residual() < 1e-9);
        // The reversed cycle of the other base face admits an orientation-preserving pairing.
        let other = &c.faces[1];
        let rev: Vec<usize> = other.vertices.iter().rev().copied().collect();
        let n = rev.len();
        let found = (0..n)
            .filter_map(|s| {
                let img: Vec<usize> = (0..n).map(|i| rev[(i + s) % n]).collect();
                c.pairing_isometry(0, 1, &img, 1e-8).ok()
            })
            .count();
        assert!(found >= 1);
        assert!(c.pairing_isometry(0, 2, &f.vertices, 1e-8).is_err());
    }

    #[test]
    fn trigonal_rotation_permutes_vertices() {
        let c = cell666();
        let rho = c.trigonal_rotation().unwrap();
        let p = c.vertex_permutation(&rho, 1e-8).unwrap();
        let fp = c.face_permutation(&p).unwrap();
        assert_eq!(fp[0], 0);
        assert_eq!(fp[1], 1);
        let fixed = (0..c.vertices.len()).filter(|&i| p[i] == i).count();
        assert_eq!(fixed, 0);
    }
}
