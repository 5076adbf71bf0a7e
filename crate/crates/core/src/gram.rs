//! Coxeter–Schläfli matrices of linear orthoscheme diagrams and their
//! inverse vertex Gram matrices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Mat4, Vec4};
use crate::scalar::Real;

/// Below this |det| the Coxeter matrix is treated as degenerate (Euclidean).
pub const DET_EPS: f64 = 1e-14;
/// Eigenvalues with |λ| below this count as zero in the signature.
pub const SIGNATURE_EPS: f64 = 1e-12;
/// Absolute tolerance for angle-sum comparisons deciding Ideal vertices.
pub const ANGLE_EPS: f64 = 1e-12;

/// Branch orders `(u, v, w)` of the linear diagram `o-u-o-v-o-w-o`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SchlafliTriple {
    pub u: u32,
    pub v: u32,
    pub w: u32,
}

impl SchlafliTriple {
    pub fn new(u: u32, v: u32, w: u32) -> Result<Self> {
        if u < 3 || v < 3 || w < 3 {
            return Err(Error::InvalidSymbol { u, v, w });
        }
        Ok(Self { u, v, w })
    }

    /// The cobweb symbol `(2p, 2p, 2p)`.
    pub fn cobweb(p: u32) -> Result<Self> {
        let n = 2 * p;
        let s = Self::new(n, n, n)?;
        s.cobweb_p()?;
        Ok(s)
    }

    /// Returns `p` when the symbol is `(2p, 2p, 2p)` with `p >= 3`.
    pub fn cobweb_p(&self) -> Result<u32> {
        let Self { u, v, w } = *self;
        if u == v && v == w && u % 2 == 0 && u >= 6 {
            Ok(u / 2)
        } else {
            Err(Error::NotCobwebSymbol { u, v, w })
        }
    }

    /// The half-turn extension exists iff `u = w`.
    pub fn has_half_turn(&self) -> bool {
        self.u == self.w
    }

    /// Essential dihedral angles `(π/u, π/v, π/w)`.
    pub fn angles<T: Real>(&self) -> [T; 3] {
        [T::pi_over(self.u), T::pi_over(self.v), T::pi_over(self.w)]
    }

    /// Dihedral angle between planes `b^i` and `b^j` (`i != j`).
    pub fn dihedral<T: Real>(&self, i: usize, j: usize) -> T {
        let [au, av, aw] = self.angles::<T>();
        match (i.min(j), i.max(j)) {
            (0, 1) => au,
            (1, 2) => av,
            (2, 3) => aw,
            _ => T::FRAC_PI_2(),
        }
    }

    pub fn reversed(&self) -> Self {
        Self { u: self.w, v: self.v, w: self.u }
    }
}

impl std::fmt::Display for SchlafliTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.u, self.v, self.w)
    }
}

/// Symmetric matrix `b^{ij} = -cos(α_ij)` with unit diagonal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoxeterMatrix<T> {
    pub symbol: SchlafliTriple,
    pub entries: Mat4<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Geometry {
    Spherical,
    Euclidean,
    Hyperbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VertexState {
    Proper,
    Ideal,
    Outer,
}

/// Counts of positive, zero and negative eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

impl Signature {
    pub fn is_lorentzian(&self) -> bool {
        self.positive == 3 && self.negative == 1 && self.zero == 0
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let signs: Vec<&str> = std::iter::repeat("+")
            .take(self.positive)
            .chain(std::iter::repeat("0").take(self.zero))
            .chain(std::iter::repeat("-").take(self.negative))
            .collect();
        write!(f, "({})", signs.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrthoschemeClass {
    pub symbol: SchlafliTriple,
    pub geometry: Geometry,
    pub signature: Signature,
    pub determinant: f64,
    pub vertex_state: [VertexState; 4],
    pub complete_truncated: bool,
}

impl OrthoschemeClass {
    pub fn require_complete_truncated(&self) -> Result<()> {
        if self.complete_truncated {
            Ok(())
        } else {
            let SchlafliTriple { u, v, w } = self.symbol;
            Err(Error::NotCompleteTruncated { u, v, w })
        }
    }
}

/// Plane Gram matrix `b`, vertex Gram matrix `a = b⁻¹`, and `B = det b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GramPair<T> {
    pub b: CoxeterMatrix<T>,
    pub a: Mat4<T>,
    pub det: T,
}

pub fn build_coxeter_matrix<T: Real>(symbol: SchlafliTriple) -> CoxeterMatrix<T> {
    let mut m = Mat4::identity();
    for (i, j) in [(0, 1), (1, 2), (2, 3)] {
        let c = -symbol.dihedral::<T>(i, j).cos();
        m[(i, j)] = c;
        m[(j, i)] = c;
    }
    CoxeterMatrix { symbol, entries: m }
}

/// `B = sin²(π/u) sin²(π/w) − cos²(π/v)`.
pub fn closed_form_det<T: Real>(symbol: SchlafliTriple) -> T {
    let [au, av, aw] = symbol.angles::<T>();
    let (su, sw, cv) = (au.sin(), aw.sin(), av.cos());
    su * su * sw * sw - cv * cv
}

impl<T: Real> CoxeterMatrix<T> {
    pub fn det(&self) -> T {
        self.entries.det()
    }

    pub fn signature(&self) -> Signature {
        let (vals, _) = self.entries.symmetric_eigen();
        let eps = T::lit(SIGNATURE_EPS);
        let mut sig = Signature { positive: 0, zero: 0, negative: 0 };
        for l in vals {
            if l > eps {
                sig.positive += 1;
            } else if l < -eps {
                sig.negative += 1;
            } else {
                sig.zero += 1;
            }
        }
        sig
    }

    pub fn numeric_inverse(&self) -> Option<Mat4<T>> {
        self.entries.inverse()
    }

    /// Leading principal minors `Δ1..Δ4`.
    pub fn leading_minors(&self) -> [T; 4] {
        let m = &self.entries;
        let d1 = m[(0, 0)];
        let d2 = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        let mut sub = Mat4::identity();
        for i in 0..3 {
            for j in 0..3 {
                sub[(i, j)] = m[(i, j)];
            }
        }
        [d1, d2, sub.det(), m.det()]
    }
}

fn vertex_state<T: Real>(symbol: SchlafliTriple, vertex: usize) -> VertexState {
    // The vertex figure at A_i is the triangle cut out by the three planes
    // b^j, j != i; its angle sum decides proper / ideal / outer.
    let others: Vec<usize> = (0..4).filter(|&j| j != vertex).collect();
    let sum = symbol.dihedral::<T>(others[0], others[1])
        + symbol.dihedral::<T>(others[0], others[2])
        + symbol.dihedral::<T>(others[1], others[2]);
    let diff = sum - T::PI();
    let eps = T::lit(ANGLE_EPS);
    if diff > eps {
        VertexState::Proper
    } else if diff < -eps {
        VertexState::Outer
    } else {
        VertexState::Ideal
    }
}

pub fn classify<T: Real>(symbol: SchlafliTriple) -> OrthoschemeClass {
    let b = build_coxeter_matrix::<T>(symbol);
    let det = closed_form_det::<T>(symbol);
    let eps = T::lit(DET_EPS);
    let geometry = if det > eps {
        Geometry::Spherical
    } else if det < -eps {
        Geometry::Hyperbolic
    } else {
        Geometry::Euclidean
    };
    let vertex_state = std::array::from_fn(|i| vertex_state::<T>(symbol, i));
    let complete_truncated = geometry == Geometry::Hyperbolic
        && vertex_state[0] == VertexState::Outer
        && vertex_state[3] == VertexState::Outer
        && vertex_state[1] == VertexState::Proper
        && vertex_state[2] == VertexState::Proper;
    OrthoschemeClass {
        symbol,
        geometry,
        signature: b.signature(),
        determinant: det.to_f64().unwrap_or(f64::NAN),
        vertex_state,
        complete_truncated,
    }
}

/// Closed-form vertex Gram matrix `(a_ij) = (b^{ij})⁻¹`.
pub fn closed_form_inverse<T: Real>(symbol: SchlafliTriple) -> Result<(Mat4<T>, T)> {
    let det = closed_form_det::<T>(symbol);
    if det.abs() < T::lit(DET_EPS) {
        return Err(Error::SingularMatrix { det: det.to_f64().unwrap_or(0.0) });
    }
    let [au, av, aw] = symbol.angles::<T>();
    let (cu, cv, cw) = (au.cos(), av.cos(), aw.cos());
    let (su2, sw2) = (au.sin().powi(2), aw.sin().powi(2));
    let cv2 = cv * cv;
    let rows = [
        [sw2 - cv2, cu * sw2, cu * cv, cu * cv * cw],
        [cu * sw2, sw2, cv, cw * cv],
        [cu * cv, cv, su2, cw * su2],
        [cu * cv * cw, cw * cv, cw * su2, su2 - cv2],
    ];
    Ok((Mat4(rows).scale(det.recip()), det))
}

pub fn invert_gram<T: Real>(b: &CoxeterMatrix<T>) -> Result<GramPair<T>> {
    let (a, det) = closed_form_inverse::<T>(b.symbol)?;
    Ok(GramPair { b: *b, a, det })
}

/// Convenience: Coxeter matrix and inverse for a symbol.
pub fn gram_pair<T: Real>(symbol: SchlafliTriple) -> Result<GramPair<T>> {
    invert_gram(&build_coxeter_matrix(symbol))
}

impl<T: Real> GramPair<T> {
    pub fn symbol(&self) -> SchlafliTriple {
        self.b.symbol
    }

    /// `⟨x, y⟩ = xᵀ a y` on point coordinates.
    pub fn point_form(&self, x: &Vec4<T>, y: &Vec4<T>) -> T {
        self.a.form(x, y)
    }

    /// `⟨u, v⟩ = u b vᵀ` on plane forms.
    pub fn plane_form(&self, u: &Vec4<T>, v: &Vec4<T>) -> T {
        self.b.entries.form(u, v)
    }

    /// Residual `‖a·b − I‖∞`.
    pub fn inverse_residual(&self) -> T {
        (self.a * self.b.entries - Mat4::identity()).max_abs()
    }
}
