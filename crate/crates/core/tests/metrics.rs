use std::f64::consts::PI;

use cobweb::cell::stabilizer_of_q;
use cobweb::{
    circumradius, classify, densities, inradius, kellerhals_volume, realize, Cell64, Geometry, IsometryKind,
    SchlafliTriple, VertexState,
};

fn w666() -> SchlafliTriple {
    SchlafliTriple::cobweb(3).unwrap()
}

/// Vertex Gram matrix of (6,6,6) from the adjugate, written out by hand.
fn vertex_gram() -> [[f64; 4]; 4] {
    // b = [[1,-c,0,0],[-c,1,-c,0],[0,-c,1,-c],[0,0,-c,1]] with c = cos(π/6).
    let c = (PI / 6.0).cos();
    let c2 = c * c;
    let det = 1.0 - 3.0 * c2 + c2 * c2;
    let adj = [
        [1.0 - 2.0 * c2, c * (1.0 - c2), c2, c * c2],
        [c * (1.0 - c2), 1.0 - c2, c, c2],
        [c2, c, 1.0 - c2, c * (1.0 - c2)],
        [c * c2, c2, c * (1.0 - c2), 1.0 - 2.0 * c2],
    ];
    adj.map(|row| row.map(|x| x / det))
}

fn form(a: &[[f64; 4]; 4], x: &[f64; 4], y: &[f64; 4]) -> f64 {
    (0..4).map(|i| (0..4).map(|j| x[i] * a[i][j] * y[j]).sum::<f64>()).sum()
}

fn distance(a: &[[f64; 4]; 4], x: &[f64; 4], y: &[f64; 4]) -> f64 {
    let c = form(a, x, y).abs() / (form(a, x, x) * form(a, y, y)).sqrt();
    c.acosh()
}

fn unit(a: &[[f64; 4]; 4], x: [f64; 4]) -> [f64; 4] {
    let n = (-form(a, &x, &x)).sqrt();
    x.map(|v| v / n)
}

#[test]
fn gram_oracle_matches_library() {
    let a = vertex_gram();
    let g = realize::<f64>(w666()).unwrap().gram;
    for i in 0..4 {
        for j in 0..4 {
            assert!((g.a[(i, j)] - a[i][j]).abs() < 1e-12);
        }
    }
    assert!((g.det - (-0.6875)).abs() < 1e-14);
}

#[test]
fn inradius_and_a1a2_against_oracle() {
    let a = vertex_gram();
    // Q = A2 + t A3 on the polar plane of A3.
    let t = -a[2][3] / a[3][3];
    let q = [0.0, 0.0, 1.0, t];
    let r_oracle = distance(&a, &q, &[0.0, 0.0, 1.0, 0.0]);
    let rep = inradius::<f64>(w666()).unwrap();
    assert_eq!(rep.attained_by, "QA2");
    assert!((rep.value - r_oracle).abs() < 1e-12);
    assert!((rep.value - 0.57941).abs() < 1e-4);
    assert!((rep.closed_form - rep.alternate_form.unwrap()).abs() < 1e-10);

    let cosh12 = a[1][2].abs() / (a[1][1] * a[2][2]).sqrt();
    assert!((cosh12 - 2.0 * 3f64.sqrt()).abs() < 1e-12);
    let w = realize::<f64>(w666()).unwrap();
    assert!((w.vertex_cosh(1, 2) - cosh12).abs() < 1e-12);
    assert!((w.vertex_distance(1, 2).unwrap() - 1.91408).abs() < 1e-4);
}

#[test]
fn circumradius_against_oracle() {
    let a = vertex_gram();
    let q = [0.0, 0.0, 1.0, -a[2][3] / a[3][3]];
    // The truncated edge A0A3 runs between the polar planes of A3 and A0.
    let x0 = unit(&a, [-a[0][3] / a[0][0], 0.0, 0.0, 1.0]);
    let x3 = unit(&a, [1.0, 0.0, 0.0, -a[0][3] / a[3][3]]);
    let f03 = [0, 1, 2, 3].map(|i| x0[i] + x3[i]);
    let oracle = distance(&a, &q, &f03);
    let rep = circumradius::<f64>(w666()).unwrap();
    assert_eq!(rep.attained_by, "QF03");
    assert!((rep.value - oracle).abs() < 1e-10);
    assert!((rep.value - 1.83634).abs() < 1e-4);
    assert!((2.0 * rep.value - 3.67268).abs() < 2e-4);
}

fn lobachevsky_quadrature(x: f64) -> f64 {
    // Composite Gauss-Legendre away from the log singularities at multiples of π.
    let r = x - PI * (x / PI).round();
    let sign = r.signum();
    let y = r.abs();
    if y == 0.0 {
        return 0.0;
    }
    // Л(y) = y - y ln(2y) - ∫₀^y ln(sin t / t) dt, with a smooth integrand.
    let nodes = [
        (-0.906_179_845_938_664, 0.236_926_885_056_189),
        (-0.538_469_310_105_683, 0.478_628_670_499_366),
        (0.0, 0.568_888_888_888_889),
        (0.538_469_310_105_683, 0.478_628_670_499_366),
        (0.906_179_845_938_664, 0.236_926_885_056_189),
    ];
    let n = 400;
    let h = y / n as f64;
    let mut integral = 0.0;
    for k in 0..n {
        let mid = (k as f64 + 0.5) * h;
        for (xi, wi) in nodes {
            let t = mid + xi * h / 2.0;
            integral += wi * h / 2.0 * (t.sin() / t).ln();
        }
    }
    sign * (y - y * (2.0 * y).ln() - integral)
}

#[test]
fn volume_against_lobachevsky_oracle() {
    let (a1, a2, a3) = (PI / 6.0, PI / 6.0, PI / 6.0);
    let theta = ((a2.cos().powi(2) - a1.sin().powi(2) * a3.sin().powi(2)).sqrt() / (a1.cos() * a3.cos())).atan();
    assert!((theta - (11f64.sqrt() / 3.0).atan()).abs() < 1e-14);
    let l = lobachevsky_quadrature;
    let vol = 0.25
        * (l(a1 + theta) - l(a1 - theta) + l(a3 + theta) - l(a3 - theta) - l(PI / 2.0 - a2 + theta)
            + l(PI / 2.0 - a2 - theta)
            + 2.0 * l(PI / 2.0 - theta));
    let lib = kellerhals_volume::<f64>(w666()).unwrap();
    assert!((lib - vol).abs() < 1e-12, "{lib} vs {vol}");
    let rep = densities(w666()).unwrap();
    assert!((rep.manifold_volume - 12.0 * vol).abs() < 1e-11);
    assert!((rep.manifold_volume - 8.29565).abs() < 1e-4);
    assert!((rep.packing_density - 0.10503).abs() < 2e-4);
    assert!((rep.covering_density - 6.05670).abs() < 2e-3);
}

#[test]
fn classification_examples() {
    let c = classify::<f64>(w666());
    assert_eq!(c.geometry, Geometry::Hyperbolic);
    assert!(c.complete_truncated);
    assert_eq!(c.vertex_state[0], VertexState::Outer);
    assert_eq!(c.vertex_state[3], VertexState::Outer);
    let c = classify::<f64>(SchlafliTriple::new(5, 3, 5).unwrap());
    assert_eq!(c.geometry, Geometry::Hyperbolic);
    assert!(c.vertex_state.iter().all(|s| *s == VertexState::Proper));
    assert_eq!(classify::<f64>(SchlafliTriple::new(3, 3, 3).unwrap()).geometry, Geometry::Spherical);
    assert_eq!(classify::<f64>(SchlafliTriple::new(4, 3, 4).unwrap()).geometry, Geometry::Euclidean);
}

#[test]
fn stabilizer_and_tiling() {
    let w = realize::<f64>(w666()).unwrap();
    let stab = stabilizer_of_q(&w).unwrap();
    assert_eq!(stab.len(), 24);
    let cell = Cell64::build(&w).unwrap();
    assert_eq!((cell.faces.len(), cell.edges.len(), cell.vertices.len()), (32, 78, 48));
    let rep = cell.tiling_report().unwrap();
    assert_eq!(rep.copies, 24);
    assert!(rep.min_separation > 0.0);
    assert!(rep.max_containment_violation < 1e-9);
    assert!(rep.min_face_distance >= rep.inradius - 1e-9);
    let rho = cell.trigonal_rotation().unwrap();
    assert!((rho * rho * rho).identity_residual() < 1e-9);
    assert!(matches!(rho.classify(1e-9).unwrap(), IsometryKind::Rotation { angle } if (angle - 2.0 * PI / 3.0).abs() < 1e-9));
}
