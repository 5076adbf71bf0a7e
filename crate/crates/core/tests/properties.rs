use std::collections::HashMap;
use std::f64::consts::PI;

use proptest::prelude::*;

use cobweb::gram::{build_coxeter_matrix, closed_form_inverse};
use cobweb::{gram_pair, lobachevsky, realize, GroupWord, Isometry, Isometry64, SchlafliTriple};

/// Tanh-sinh quadrature on `[a, b]`; tolerates logarithmic endpoint
/// singularities.
fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let h = 1.0 / 64.0;
    let d = (b - a) / 2.0;
    let mut sum = 0.0;
    for k in -(6.0 / h) as i64..=(6.0 / h) as i64 {
        let t = k as f64 * h;
        let s = PI / 2.0 * t.sinh();
        let w = PI / 2.0 * t.cosh() / s.cosh().powi(2);
        // Distance to the nearest endpoint, computed without cancellation.
        let r = d / (s.exp() * s.cosh());
        let x = if s > 0.0 { b - r } else { a + d * (1.0 + s.tanh()) };
        if x <= a || x >= b {
            continue;
        }
        sum += w * f(x);
    }
    sum * d * h
}

fn lobachevsky_oracle(x: f64) -> f64 {
    -tanh_sinh(|t| (2.0 * t.sin()).abs().ln(), 0.0, x)
}

fn grid() -> impl Iterator<Item = f64> {
    (0..1000).map(|i| -3.0 * PI + 6.0 * PI * (i as f64 + 0.5) / 1000.0)
}

#[test]
fn lobachevsky_identities_on_grid() {
    let mut worst = 0.0f64;
    for x in grid() {
        worst = worst.max((lobachevsky(-x) + lobachevsky(x)).abs());
        worst = worst.max((lobachevsky(x + PI) - lobachevsky(x)).abs());
        let dup = lobachevsky(2.0 * x) - 2.0 * lobachevsky(x) - 2.0 * lobachevsky(x + PI / 2.0);
        worst = worst.max(dup.abs());
    }
    assert!(worst < 1e-10, "worst identity residual {worst:e}");
}

#[test]
fn lobachevsky_matches_quadrature() {
    for i in 1..200 {
        let x = PI * i as f64 / 200.0;
        let (a, b) = (lobachevsky(x), lobachevsky_oracle(x));
        assert!((a - b).abs() < 1e-10, "x = {x}: {a} vs {b}");
    }
}

fn gauss_jordan(m: [[f64; 4]; 4]) -> Option<[[f64; 4]; 4]> {
    let mut a = m;
    let mut inv = [[0.0; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for c in 0..4 {
        let p = (c..4).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-300 {
            return None;
        }
        a.swap(c, p);
        inv.swap(c, p);
        let d = a[c][c];
        for k in 0..4 {
            a[c][k] /= d;
            inv[c][k] /= d;
        }
        for r in 0..4 {
            if r != c {
                let f = a[r][c];
                for k in 0..4 {
                    a[r][k] -= f * a[c][k];
                    inv[r][k] -= f * inv[c][k];
                }
            }
        }
    }
    Some(inv)
}

fn coxeter_oracle(u: u32, v: u32, w: u32) -> [[f64; 4]; 4] {
    let c = |m: u32| -(PI / m as f64).cos();
    [[1.0, c(u), 0.0, 0.0], [c(u), 1.0, c(v), 0.0], [0.0, c(v), 1.0, c(w)], [0.0, 0.0, c(w), 1.0]]
}

#[test]
fn gram_closed_form_inverse_matches_numeric() {
    let mut checked = 0;
    for u in 3..=20 {
        for v in 3..=20 {
            for w in 3..=20 {
                let s = SchlafliTriple::new(u, v, w).unwrap();
                let b = coxeter_oracle(u, v, w);
                let lib_b = build_coxeter_matrix::<f64>(s);
                let Ok((a, det)) = closed_form_inverse::<f64>(s) else { continue };
                if det.abs() <= 1e-8 {
                    continue;
                }
                let oracle = gauss_jordan(b).unwrap();
                for i in 0..4 {
                    for j in 0..4 {
                        assert!((lib_b.entries[(i, j)] - b[i][j]).abs() < 1e-15);
                        let err = (a[(i, j)] - oracle[i][j]).abs();
                        assert!(err < 1e-10, "({u},{v},{w}) a[{i}][{j}] error {err:e}");
                    }
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 5000);
}

fn word_strategy() -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((0usize..4, any::<bool>()), 0..12).prop_map(|letters| {
        let names = ["a1", "a2", "a3", "s"];
        let text: Vec<String> =
            letters.iter().map(|(g, inv)| if *inv { format!("{}^-1", names[*g]) } else { names[*g].to_string() }).collect();
        GroupWord::parse(&text.join(" ")).unwrap()
    })
}

/// Reflections in the four orthoscheme planes bound to the test alphabet.
fn reflections() -> (cobweb::Gram64, HashMap<String, Isometry64>) {
    let t = realize::<f64>(SchlafliTriple::cobweb(3).unwrap()).unwrap();
    let mut gens = HashMap::new();
    for (name, plane) in ["a1", "a2", "a3", "s"].iter().zip(t.planes.iter()) {
        gens.insert(name.to_string(), Isometry::reflection(&t.gram, plane).unwrap());
    }
    (t.gram, gens)
}

proptest! {
    #[test]
    fn lobachevsky_odd_and_periodic(x in -20.0f64..20.0) {
        prop_assert!((lobachevsky(-x) + lobachevsky(x)).abs() < 1e-10);
        prop_assert!((lobachevsky(x + PI) - lobachevsky(x)).abs() < 1e-10);
    }

    #[test]
    fn word_inverse_and_reduction(w in word_strategy()) {
        prop_assert_eq!(w.inverse().inverse(), w.clone());
        let r = w.free_reduced();
        prop_assert_eq!(r.free_reduced(), r.clone());
        prop_assert!(r.len() <= w.len());
        prop_assert!(w.concat(&w.inverse()).free_reduced().is_empty());
        prop_assert_eq!(GroupWord::parse(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn canonical_relator_invariance(w in word_strategy(), k in 0usize..12) {
        let c = w.cyclically_reduced();
        let canon = c.canonical_relator();
        if !c.is_empty() {
            prop_assert_eq!(c.rotated(k % c.len()).canonical_relator(), canon.clone());
        }
        prop_assert_eq!(c.inverse().canonical_relator(), canon);
    }

    #[test]
    fn exponent_sums_are_additive(a in word_strategy(), b in word_strategy()) {
        let gens: Vec<String> = ["a1", "a2", "a3", "s"].iter().map(|s| s.to_string()).collect();
        let sa = a.exponent_sums(&gens).unwrap();
        let sb = b.exponent_sums(&gens).unwrap();
        let sab = a.concat(&b).free_reduced().exponent_sums(&gens).unwrap();
        for i in 0..4 {
            prop_assert_eq!(sab[i], sa[i] + sb[i]);
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in word_strategy(), b in word_strategy()) {
        let (gram, gens) = reflections();
        let ga = a.evaluate(&gens, &gram).unwrap();
        let gb = b.evaluate(&gens, &gram).unwrap();
        let gab = a.concat(&b).evaluate(&gens, &gram).unwrap();
        prop_assert!(gab.approx_eq(&(ga * gb), 1e-8));
        prop_assert!(gab.form_residual(&gram) < 1e-8);
        let reduced = a.free_reduced().evaluate(&gens, &gram).unwrap();
        prop_assert!(reduced.approx_eq(&ga, 1e-8));
        let id = a.concat(&a.inverse()).evaluate(&gens, &gram).unwrap();
        prop_assert!(id.identity_residual() < 1e-8);
    }

    #[test]
    fn gram_inverse_generic_symbols(u in 3u32..40, v in 3u32..40, w in 3u32..40) {
        let s = SchlafliTriple::new(u, v, w).unwrap();
        if let Ok(g) = gram_pair::<f64>(s) {
            prop_assume!(g.det.abs() > 1e-8);
            prop_assert!(g.inverse_residual() < 1e-8);
        }
    }
}
