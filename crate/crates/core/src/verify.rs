//! End-to-end manifold verification of a face-pairing scheme against the
//! constructed cobweb cell.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use serde::Serialize;

use crate::cell::CobwebCell;
use crate::error::{Error, Result};
use crate::isometry::{Isometry, IsometryKind, COMPOSITION_TOL, CONSTRUCTION_TOL, RELATION_TOL};
use crate::manifold::{edge_cycles, euler_characteristic, presentation, vertex_classes, EdgeCycle, Presentation, PresentationForm};
use crate::relations::{check_catalogue, RelationCheck, RelationKind};
use crate::scheme::{FacePairingScheme, GeometryMatch, SchemeTopology};
use crate::word::{verify_relation, GroupWord, Letter};

/// Numerical tolerances: construction, composition drift, relation
/// acceptance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub construction: f64,
    pub composition: f64,
    pub relation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { construction: CONSTRUCTION_TOL, composition: COMPOSITION_TOL, relation: RELATION_TOL }
    }
}

impl Tolerances {
    /// Parses either one number (the relation tolerance) or three
    /// comma-separated numbers `construction,composition,relation`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Schema(format!("invalid tolerance specification `{text}`"));
        let values: Vec<f64> = text
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(bad());
        }
        match values.as_slice() {
            [r] => Ok(Self { relation: *r, ..Self::default() }),
            [c, m, r] => Ok(Self { construction: *c, composition: *m, relation: *r }),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub from: usize,
    pub to: usize,
    pub generator: String,
    pub kind: Option<IsometryKind>,
    pub form_residual: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleReport {
    /// 1-based scheme edge ids in cycle order.
    pub edges: Vec<usize>,
    pub length: usize,
    pub word: String,
    pub angle_sum: Option<f64>,
    pub transform_residual: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointReport {
    pub generators: Vec<String>,
    pub max_length: usize,
    pub words_checked: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub symbol: [u32; 3],
    pub passed: bool,
    pub checks: Vec<Check>,
    pub faces: usize,
    pub pairs: usize,
    pub edges: usize,
    pub vertices: usize,
    pub pairings: Vec<PairingReport>,
    pub edge_cycles: Vec<CycleReport>,
    /// Cycle length → number of cycles.
    pub cycle_lengths: BTreeMap<usize, usize>,
    pub vertex_class_sizes: Vec<usize>,
    pub euler_characteristic: Option<i64>,
    pub worst_angle_deviation: Option<f64>,
    pub presentation: Option<Presentation>,
    pub relations: Vec<RelationCheck>,
    pub fixed_point_free: Option<FixedPointReport>,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Longest word sampled for the fixed-point-free check.
pub const FIXED_POINT_WORD_LENGTH: usize = 4;

fn push(checks: &mut Vec<Check>, name: &str, passed: bool, detail: impl Into<String>) {
    checks.push(Check { name: name.into(), passed, detail: detail.into() });
}

/// Isometry of each pair from the scheme's vertex correspondence.
fn pair_isometries(
    cell: &CobwebCell<f64>,
    t: &SchemeTopology,
    m: &GeometryMatch,
    tol: f64,
) -> Vec<std::result::Result<Isometry<f64>, Error>> {
    let mut scheme_of = vec![usize::MAX; cell.vertices.len()];
    for (sv, &gv) in m.vertex_map.iter().enumerate() {
        scheme_of[gv] = sv;
    }
    (0..t.pair_count())
        .map(|p| {
            let (fi, ti) = t.pair_faces[p];
            let (gf, gt) = (m.face_map[fi], m.face_map[ti]);
            let vmap = &t.pair_vertex_maps[p];
            let images: Vec<usize> = cell.faces[gf]
                .vertices
                .iter()
                .map(|&gv| vmap.get(&scheme_of[gv]).map_or(usize::MAX, |&sv| m.vertex_map[sv]))
                .collect();
            if images.contains(&usize::MAX) {
                return Err(Error::NoIsometry { from: gf, to: gt });
            }
            cell.pairing_isometry(gf, gt, &images, tol)
        })
        .collect()
}

/// Binds every generator name that can be evaluated: atomic pair
/// generators directly, defined names through their definitions.
fn bind_generators(t: &SchemeTopology, isos: &[Option<Isometry<f64>>], cell: &CobwebCell<f64>) -> HashMap<String, Isometry<f64>> {
    let mut bound = HashMap::new();
    for (p, iso) in isos.iter().enumerate() {
        let w = &t.generator_words[p];
        if let (Some(g), [l]) = (iso, w.letters.as_slice()) {
            if !l.inverse {
                bound.insert(l.name.clone(), *g);
            }
        }
    }
    loop {
        let mut changed = false;
        for (name, def) in &t.definitions {
            if bound.contains_key(name) {
                continue;
            }
            if let Ok(g) = def.evaluate(&bound, cell.gram()) {
                bound.insert(name.clone(), g);
                changed = true;
            }
        }
        if !changed {
            return bound;
        }
    }
}

fn reduced_words(generators: &[String], max_len: usize) -> Vec<GroupWord> {
    let letters: Vec<Letter> =
        generators.iter().flat_map(|g| [Letter::new(g.clone(), false), Letter::new(g.clone(), true)]).collect();
    let mut out = Vec::new();
    let mut frontier = vec![GroupWord::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in &letters {
                if w.letters.last().is_some_and(|last| last.cancels(l)) {
                    continue;
                }
                let mut v = w.clone();
                v.letters.push(l.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Runs every manifold check. Errors are reserved for unusable input; a
/// scheme that loads but fails a check yields a report with `passed = false`.
pub fn verify_scheme(cell: &CobwebCell<f64>, scheme: &FacePairingScheme, tol: &Tolerances) -> Result<VerificationReport> {
    let t = scheme.validate()?;
    let mut checks = Vec::new();
    let sym = cell.orthoscheme.symbol;
    let symbol_ok = scheme.metadata.symbol == [sym.u, sym.v, sym.w];
    push(&mut checks, "symbol", symbol_ok, format!("scheme {:?}, cell {sym}", scheme.metadata.symbol));

    let geometry = t.match_geometry(cell);
    match &geometry {
        Ok(_) => push(
            &mut checks,
            "geometry match",
            true,
            format!("{} faces, {} vertices, {} edges", t.face_count(), scheme.vertex_count, t.edge_count()),
        ),
        Err(e) => push(&mut checks, "geometry match", false, e.to_string()),
    }
    let geometry = geometry.ok();

    // Pairing isometries.
    let mut pairings = Vec::new();
    let mut isos: Vec<Option<Isometry<f64>>> = vec![None; t.pair_count()];
    if let Some(m) = &geometry {
        for (p, r) in pair_isometries(cell, &t, m, tol.composition).into_iter().enumerate() {
            let sp = &scheme.pairs[p];
            let mut rep = PairingReport {
                from: sp.from,
                to: sp.to,
                generator: sp.generator.clone(),
                kind: None,
                form_residual: None,
                error: None,
            };
            match r {
                Ok(g) => {
                    rep.form_residual = Some(g.form_residual(cell.gram()));
                    rep.kind = g.classify(tol.relation).ok();
                    isos[p] = Some(g);
                }
                Err(e) => rep.error = Some(e.to_string()),
            }
            pairings.push(rep);
        }
    }
    let bad: Vec<String> = pairings
        .iter()
        .filter(|r| r.error.is_some())
        .map(|r| format!("{} -> {} ({})", r.from, r.to, r.generator))
        .collect();
    push(
        &mut checks,
        "pairing isometries",
        geometry.is_some() && bad.is_empty(),
        if geometry.is_none() {
            "geometry unavailable".to_string()
        } else if bad.is_empty() {
            format!("{} orientation-preserving pairings", t.pair_count())
        } else {
            format!("no isometry for {}", bad.join(", "))
        },
    );

    let bound = bind_generators(&t, &isos, cell);
    let gram = cell.gram();

    // Generator words and definitions.
    let mut word_failures = Vec::new();
    if geometry.is_some() {
        let unbound_defs: HashMap<String, GroupWord> =
            t.definitions.iter().filter(|(k, _)| !bound.contains_key(*k)).map(|(k, v)| (k.clone(), v.clone())).collect();
        for (p, iso) in isos.iter().enumerate() {
            let Some(iso) = iso else { continue };
            let w = &t.generator_words[p];
            let residual = w
                .substitute(&unbound_defs)
                .and_then(|w| w.evaluate(&bound, gram))
                .ok()
                .and_then(|g| g.projective_residual(iso));
            if !residual.is_some_and(|r| r <= tol.relation) {
                word_failures.push(scheme.pairs[p].generator.clone());
            }
        }
        for (name, def) in &t.definitions {
            let rel = GroupWord::generator(name.clone()).concat(&def.inverse());
            if !verify_relation(&rel, &bound, gram).is_ok_and(|r| r <= tol.relation) {
                word_failures.push(format!("{name} = {def}"));
            }
        }
    }
    push(
        &mut checks,
        "generator words",
        geometry.is_some() && word_failures.is_empty(),
        if word_failures.is_empty() {
            format!("{} pair words and {} definitions", t.pair_count(), t.definitions.len())
        } else {
            format!("mismatch: {}", word_failures.join("; "))
        },
    );

    // Edge cycles.
    let cycles = edge_cycles(&t);
    let mut cycle_reports = Vec::new();
    let mut cycle_lengths = BTreeMap::new();
    let mut worst = None;
    let mut euler = None;
    let mut pres = None;
    let mut vertex_class_sizes = Vec::new();
    match &cycles {
        Err(e) => {
            push(&mut checks, "edge cycles", false, e.to_string());
        }
        Ok(cycles) => {
            let covered: usize = cycles.iter().map(EdgeCycle::len).sum();
            push(
                &mut checks,
                "edge cycles",
                covered == t.edge_count(),
                format!("{} cycles covering {} of {} edges", cycles.len(), covered, t.edge_count()),
            );
            let symbols: HashMap<String, Isometry<f64>> =
                (0..t.pair_count()).filter_map(|p| isos[p].map(|g| (t.pair_symbol(p), g))).collect();
            let mut angle_bad = Vec::new();
            let mut transform_bad = Vec::new();
            for c in cycles {
                *cycle_lengths.entry(c.len()).or_insert(0) += 1;
                let angle_sum = geometry
                    .as_ref()
                    .map(|m| c.edges.iter().map(|&e| cell.edges[m.edge_map[e]].dihedral).sum::<f64>());
                let residual = verify_relation(&c.word, &symbols, gram).ok();
                if let Some(a) = angle_sum {
                    let dev = (a - 2.0 * PI).abs();
                    worst = Some(worst.map_or(dev, |w: f64| w.max(dev)));
                    if dev > tol.relation {
                        angle_bad.push(format!("cycle at edge {} sums to {:.10}", c.start_edge(), a));
                    }
                }
                if !residual.is_some_and(|r| r <= tol.relation) {
                    transform_bad.push(format!("cycle at edge {}", c.start_edge()));
                }
                cycle_reports.push(CycleReport {
                    edges: c.edges.iter().map(|e| e + 1).collect(),
                    length: c.len(),
                    word: c.word.to_string(),
                    angle_sum,
                    transform_residual: residual,
                });
            }
            push(
                &mut checks,
                "angle sums",
                geometry.is_some() && angle_bad.is_empty(),
                if geometry.is_none() {
                    "geometry unavailable".to_string()
                } else if angle_bad.is_empty() {
                    format!("all {} cycles sum to 2π (worst deviation {:.3e})", cycles.len(), worst.unwrap_or(0.0))
                } else {
                    angle_bad.join("; ")
                },
            );
            push(
                &mut checks,
                "cycle transformations",
                geometry.is_some() && transform_bad.is_empty(),
                if transform_bad.is_empty() {
                    "every cycle transformation is the identity".to_string()
                } else {
                    format!("non-identity: {}", transform_bad.join(", "))
                },
            );

            let classes = vertex_classes(&t);
            vertex_class_sizes = classes.iter().map(Vec::len).collect();
            let chi = euler_characteristic(classes.len(), cycles.len(), t.pair_count());
            euler = Some(chi);
            push(
                &mut checks,
                "euler characteristic",
                chi == 0,
                format!("{} - {} + {} - 1 = {}", classes.len(), cycles.len(), t.pair_count(), chi),
            );
            pres = presentation(&t, cycles, PresentationForm::FourGenerator).ok();
        }
    }

    let unbound: Vec<String> = pres
        .as_ref()
        .map(|p| p.generators.iter().filter(|g| !bound.contains_key(*g)).cloned().collect())
        .unwrap_or_default();
    let skip = if pres.is_none() {
        Some("no presentation".to_string())
    } else if !unbound.is_empty() {
        Some(format!("no isometry bound to {}", unbound.join(", ")))
    } else {
        None
    };

    // Relations.
    let mut relations = Vec::new();
    let mut rel_bad = Vec::new();
    if let (Some(p), None) = (&pres, &skip) {
        for (i, r) in p.relators.iter().enumerate() {
            let check = crate::relations::check_relation(
                &format!("cycle relator {}", i + 1),
                &format!("{r} = 1"),
                RelationKind::Identity,
                &bound,
                gram,
                tol.relation,
            );
            match check {
                Ok(c) => relations.push(c),
                Err(e) => rel_bad.push(format!("cycle relator {}: {e}", i + 1)),
            }
        }
    }
    let catalogue_names = ["s", "a1", "a2", "a3", "s1", "s2", "s3", "b1", "b2", "b3"];
    if catalogue_names.iter().all(|n| bound.contains_key(*n)) {
        if let Ok(c) = check_catalogue(&bound, gram, tol.relation) {
            relations.extend(c);
        }
    }
    rel_bad.extend(
        relations.iter().filter(|r| r.kind != RelationKind::Informational && !r.passed).map(|r| r.relation.clone()),
    );
    push(
        &mut checks,
        "relations",
        skip.is_none() && rel_bad.is_empty(),
        if let Some(reason) = &skip {
            reason.clone()
        } else if rel_bad.is_empty() {
            format!("{} relations hold", relations.iter().filter(|r| r.kind != RelationKind::Informational).count())
        } else {
            format!("failing: {}", rel_bad.join("; "))
        },
    );

    // Fixed-point-free sample.
    let mut fixed = None;
    if let (Some(p), None) = (&pres, &skip) {
        let gens = p.generators.clone();
        let mut failures = Vec::new();
        let words = reduced_words(&gens, FIXED_POINT_WORD_LENGTH);
        for w in &words {
            match w.evaluate(&bound, gram).and_then(|g| g.classify(tol.relation)) {
                Ok(k) if k.is_fixed_point_free() => {}
                Ok(k) => failures.push(format!("{w}: {}", k.name())),
                Err(e) => failures.push(format!("{w}: {e}")),
            }
        }
        push(
            &mut checks,
            "fixed-point-free",
            failures.is_empty(),
            if failures.is_empty() {
                format!("{} reduced words up to length {}", words.len(), FIXED_POINT_WORD_LENGTH)
            } else {
                format!("{} words with fixed points, first: {}", failures.len(), failures[0])
            },
        );
        fixed = Some(FixedPointReport {
            generators: gens,
            max_length: FIXED_POINT_WORD_LENGTH,
            words_checked: words.len(),
            failures,
        });
    } else {
        push(&mut checks, "fixed-point-free", false, skip.unwrap_or_default());
    }

    Ok(VerificationReport {
        symbol: scheme.metadata.symbol,
        passed: checks.iter().all(|c| c.passed),
        checks,
        faces: t.face_count(),
        pairs: t.pair_count(),
        edges: t.edge_count(),
        vertices: scheme.vertex_count,
        pairings,
        edge_cycles: cycle_reports,
        cycle_lengths,
        vertex_class_sizes,
        euler_characteristic: euler,
        worst_angle_deviation: worst,
        presentation: pres,
        relations,
        fixed_point_free: fixed,
    })
}
