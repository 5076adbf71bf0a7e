//! Reconstruction of a face pairing of the cobweb cell: a backtracking
//! search over orientation-preserving face isometries, kept invariant under
//! the trigonal rotation, followed by naming the generators.

use std::collections::{BTreeMap, HashMap};

use crate::cell::CobwebCell;
use crate::error::{Error, Result};
use crate::isometry::Isometry;
use crate::scheme::{FacePairingScheme, Orientation, SchemeFace, SchemeMetadata, SchemePair};

const MATCH_TOL: f64 = 1e-8;
const ANGLE_TOL: f64 = 1e-6;
const NAME_TOL: f64 = 1e-7;
const MAX_CYCLE: usize = 20;

/// Isometry carrying one face onto another with its vertex map.
#[derive(Clone, Debug)]
pub struct FaceMap {
    pub to: usize,
    pub vertex_map: HashMap<usize, usize>,
    pub iso: Isometry<f64>,
}

/// A complete assignment of pairing maps, indexed by face.
pub type Pairing = Vec<FaceMap>;

/// Names in the order pairs are emitted, with their defining words.
pub const GENERATOR_NAMES: [&str; 16] = [
    "s", "a1", "a2", "a3", "s1", "s2", "s3", "b1", "b2", "b3", "a1 s^-1", "a2 s^-1", "a3 s^-1", "b1 s^-1",
    "b2 s^-1", "b3 s^-1",
];

pub const DEFINITIONS: [(&str, &str); 6] = [
    ("s1", "a1 s^-1 a1"),
    ("s2", "a2 s^-1 a2"),
    ("s3", "a3 s^-1 a3"),
    ("b1", "a3^-1 s3"),
    ("b2", "a1^-1 s1"),
    ("b3", "a2^-1 s2"),
];

/// A named pairing: generator isometries and the pair each name labels.
#[derive(Clone, Debug)]
pub struct NamedPairing {
    pub pairing: Pairing,
    pub generators: BTreeMap<String, Isometry<f64>>,
    /// `(from, to, name)` with `from → to` realized by the named isometry.
    pub pairs: Vec<(usize, usize, String)>,
}

/// All candidate maps between equal-sided faces, keyed by source face.
pub fn candidate_maps(cell: &CobwebCell<f64>) -> Vec<Vec<FaceMap>> {
    let nf = cell.faces.len();
    let mut out = vec![Vec::new(); nf];
    for from in 0..nf {
        let vf = &cell.faces[from].vertices;
        let l = vf.len();
        for to in 0..nf {
            if from == to || cell.faces[to].sides() != l {
                continue;
            }
            let vt: Vec<usize> = cell.faces[to].vertices.iter().rev().copied().collect();
            for shift in 0..l {
                let images: Vec<usize> = (0..l).map(|i| vt[(i + shift) % l]).collect();
                if let Ok(iso) = cell.pairing_isometry(from, to, &images, MATCH_TOL) {
                    let vertex_map = vf.iter().copied().zip(images.iter().copied()).collect();
                    out[from].push(FaceMap { to, vertex_map, iso });
                }
            }
        }
    }
    out
}

struct Search<'a> {
    cell: &'a CobwebCell<f64>,
    options: Vec<Vec<FaceMap>>,
    rho: Isometry<f64>,
    rho_inv: Isometry<f64>,
    rho_vertices: Vec<usize>,
    rho_faces: Vec<usize>,
    face_edges: Vec<Vec<usize>>,
}

enum Trace {
    Open,
    Closed(f64, Isometry<f64>),
    Bad,
}

impl<'a> Search<'a> {
    fn new(cell: &'a CobwebCell<f64>) -> Result<Self> {
        let rho = cell.trigonal_rotation()?;
        let rho_inv = rho.inverse(cell.gram());
        let rho_vertices = cell
            .vertex_permutation(&rho, MATCH_TOL)
            .ok_or_else(|| Error::NoPairing("the trigonal rotation does not preserve the cell".into()))?;
        let rho_faces = cell
            .face_permutation(&rho_vertices)
            .ok_or_else(|| Error::NoPairing("the trigonal rotation does not permute the faces".into()))?;
        let face_edges = cell
            .faces
            .iter()
            .map(|f| {
                let n = f.vertices.len();
                (0..n).filter_map(|k| cell.edge_index(f.vertices[k], f.vertices[(k + 1) % n])).collect()
            })
            .collect();
        Ok(Self { cell, options: candidate_maps(cell), rho, rho_inv, rho_vertices, rho_faces, face_edges })
    }

    fn other_face(&self, edge: usize, face: usize) -> usize {
        let [x, y] = self.cell.edges[edge].faces;
        if x == face {
            y
        } else {
            x
        }
    }

    fn trace(&self, e0: usize, f0: usize, assign: &[Option<FaceMap>]) -> Trace {
        let (mut e, mut f) = (e0, f0);
        let mut total = 0.0;
        let mut acc = Isometry::identity();
        for _ in 0..MAX_CYCLE {
            let Some(map) = &assign[f] else { return Trace::Open };
            total += self.cell.edges[e].dihedral;
            let [a, b] = self.cell.edges[e].vertices;
            let Some(next) = self.cell.edge_index(map.vertex_map[&a], map.vertex_map[&b]) else {
                return Trace::Bad;
            };
            acc = map.iso * acc;
            e = next;
            f = self.other_face(e, map.to);
            if e == e0 {
                return if f == f0 { Trace::Closed(total, acc) } else { Trace::Bad };
            }
            if total > 2.0 * std::f64::consts::PI + ANGLE_TOL {
                return Trace::Bad;
            }
        }
        Trace::Bad
    }

    fn consistent(&self, faces: &[usize], assign: &[Option<FaceMap>]) -> bool {
        let full = 2.0 * std::f64::consts::PI;
        for &f in faces {
            for &e in &self.face_edges[f] {
                for start in self.cell.edges[e].faces {
                    match self.trace(e, start, assign) {
                        Trace::Open => {}
                        Trace::Bad => return false,
                        Trace::Closed(total, m) => {
                            if (total - full).abs() > ANGLE_TOL || m.identity_residual() > ANGLE_TOL {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    fn inverse_map(&self, from: usize, map: &FaceMap) -> FaceMap {
        FaceMap {
            to: from,
            vertex_map: map.vertex_map.iter().map(|(&x, &y)| (y, x)).collect(),
            iso: map.iso.inverse(self.cell.gram()),
        }
    }

    /// The rotated copies of a pair and their inverses.
    fn orbit(&self, from: usize, map: &FaceMap) -> Option<Vec<(usize, FaceMap)>> {
        let mut out: Vec<(usize, FaceMap)> = Vec::new();
        let (mut f, mut m) = (from, map.clone());
        for _ in 0..3 {
            for (a, am) in [(f, m.clone()), (m.to, self.inverse_map(f, &m))] {
                match out.iter().find(|(b, _)| *b == a) {
                    Some((_, bm)) => {
                        if bm.to != am.to || !bm.iso.approx_eq(&am.iso, MATCH_TOL) {
                            return None;
                        }
                    }
                    None => out.push((a, am)),
                }
            }
            let rv = &self.rho_vertices;
            m = FaceMap {
                to: self.rho_faces[m.to],
                vertex_map: m.vertex_map.iter().map(|(&x, &y)| (rv[x], rv[y])).collect(),
                iso: self.rho * m.iso * self.rho_inv,
            };
            f = self.rho_faces[f];
        }
        Some(out)
    }

    fn run(&self, assign: &mut Vec<Option<FaceMap>>, accept: &mut dyn FnMut(Pairing) -> bool) -> bool {
        let Some(f) = assign.iter().position(Option::is_none) else {
            let pairing = assign.iter().map(|m| m.clone().expect("complete assignment")).collect();
            return accept(pairing);
        };
        for map in &self.options[f] {
            if assign[map.to].is_some() {
                continue;
            }
            let Some(new) = self.orbit(f, map) else { continue };
            if new.iter().any(|(a, _)| assign[*a].is_some()) {
                continue;
            }
            let touched: Vec<usize> = new.iter().map(|(a, _)| *a).collect();
            for (a, am) in new {
                assign[a] = Some(am);
            }
            if self.consistent(&touched, assign) && self.run(assign, accept) {
                return true;
            }
            for a in touched {
                assign[a] = None;
            }
        }
        false
    }
}

/// Enumerates rotation-invariant face pairings whose edge cycles close with
/// angle sum `2π` and trivial cycle transformation, stopping when `accept`
/// returns `true`.
pub fn search_pairings(cell: &CobwebCell<f64>, accept: &mut dyn FnMut(Pairing) -> bool) -> Result<()> {
    let search = Search::new(cell)?;
    let mut assign = vec![None; cell.faces.len()];
    search.run(&mut assign, accept);
    Ok(())
}

fn find_face(pairing: &Pairing, g: &Isometry<f64>) -> Option<usize> {
    pairing.iter().position(|m| m.iso.approx_eq(g, NAME_TOL))
}

/// Tries to name a pairing with generators `s`, `a1` and their rotations.
pub fn name_pairing(cell: &CobwebCell<f64>, pairing: &Pairing) -> Result<Option<NamedPairing>> {
    let gram = cell.gram();
    let rho = cell.trigonal_rotation()?;
    let rho_inv = rho.inverse(gram);
    let inv = |g: &Isometry<f64>| g.inverse(gram);
    for (sf, s_map) in pairing.iter().enumerate() {
        if cell.faces[sf].sides() != 12 {
            continue;
        }
        for (qf, a_map) in pairing.iter().enumerate() {
            if cell.faces[qf].sides() != 4 {
                continue;
            }
            for (r, ri) in [(rho, rho_inv), (rho_inv, rho)] {
                let s = s_map.iso;
                let a1 = a_map.iso;
                let a = [a1, r * a1 * ri, ri * a1 * r];
                let si: Vec<_> = a.iter().map(|ai| *ai * inv(&s) * *ai).collect();
                if !si.iter().all(|g| find_face(pairing, g).is_some_and(|f| cell.faces[f].sides() == 6)) {
                    continue;
                }
                let b = [inv(&a[2]) * si[2], inv(&a[0]) * si[0], inv(&a[1]) * si[1]];
                let mut g: BTreeMap<String, Isometry<f64>> = BTreeMap::new();
                g.insert("s".into(), s);
                for i in 0..3 {
                    g.insert(format!("a{}", i + 1), a[i]);
                    g.insert(format!("s{}", i + 1), si[i]);
                    g.insert(format!("b{}", i + 1), b[i]);
                    g.insert(format!("a{} s^-1", i + 1), a[i] * inv(&s));
                    g.insert(format!("b{} s^-1", i + 1), b[i] * inv(&s));
                }
                let sq = |x: Isometry<f64>| x * x;
                let rel = [
                    sq(si[0]) * sq(si[1]) * sq(si[2]),
                    s * inv(&a[2]) * s * a[0] * inv(&s) * a[0] * s * inv(&a[1]),
                    s * inv(&a[0]) * s * a[1] * inv(&s) * a[1] * s * inv(&a[2]),
                    s * inv(&a[1]) * s * a[2] * inv(&s) * a[2] * s * inv(&a[0]),
                ];
                if !rel.iter().all(|m| m.approx_eq(&Isometry::identity(), NAME_TOL)) {
                    continue;
                }
                let mut pairs = Vec::new();
                let mut used = vec![false; pairing.len()];
                for name in GENERATOR_NAMES {
                    let Some(f) = find_face(pairing, &g[name]) else { break };
                    let to = pairing[f].to;
                    if used[f] || used[to] {
                        break;
                    }
                    used[f] = true;
                    used[to] = true;
                    pairs.push((f, to, name.to_string()));
                }
                if pairs.len() == GENERATOR_NAMES.len() && used.iter().all(|&u| u) {
                    return Ok(Some(NamedPairing { pairing: pairing.clone(), generators: g, pairs }));
                }
            }
        }
    }
    Ok(None)
}

/// The first rotation-invariant pairing that admits the standard naming.
pub fn reconstruct(cell: &CobwebCell<f64>) -> Result<NamedPairing> {
    let mut found = None;
    let mut failure = None;
    search_pairings(cell, &mut |p| match name_pairing(cell, &p) {
        Ok(Some(named)) => {
            found = Some(named);
            true
        }
        Ok(None) => false,
        Err(e) => {
            failure = Some(e);
            true
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    found.ok_or_else(|| Error::NoPairing("no rotation-invariant face pairing admits the generator naming".into()))
}

/// Serializes a named pairing with 1-based ids.
pub fn to_scheme(cell: &CobwebCell<f64>, named: &NamedPairing, source: &str) -> Result<FacePairingScheme> {
    let symbol = cell.orthoscheme.symbol;
    let edges: Vec<[usize; 2]> = cell.edges.iter().map(|e| [e.vertices[0] + 1, e.vertices[1] + 1]).collect();
    let mut labels = vec![String::new(); cell.faces.len()];
    for (from, to, name) in &named.pairs {
        labels[*from] = name.clone();
        labels[*to] = crate::word::GroupWord::parse(name)?.inverse().to_string();
    }
    let mut faces = Vec::with_capacity(cell.faces.len());
    for (k, f) in cell.faces.iter().enumerate() {
        let n = f.vertices.len();
        let mut boundary = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (f.vertices[i], f.vertices[(i + 1) % n]);
            let e = cell.edge_index(a, b).ok_or(Error::DegenerateLine)?;
            let id = (e + 1) as i64;
            boundary.push(if cell.edges[e].vertices == [a, b] { id } else { -id });
        }
        let u = f.plane.unit().u;
        faces.push(SchemeFace { id: k + 1, label: labels[k].clone(), plane: Some(u.0), boundary });
    }
    let mut pairs = Vec::with_capacity(named.pairs.len());
    for (from, to, name) in &named.pairs {
        let vf = &cell.faces[*from].vertices;
        let vt = &cell.faces[*to].vertices;
        let vm = &named.pairing[*from].vertex_map;
        let n = vf.len();
        let mut correspondence = Vec::with_capacity(n);
        for i in 0..n {
            let (t, h) = (vm[&vf[i]], vm[&vf[(i + 1) % n]]);
            let j = (0..n)
                .find(|&j| vt[j] == h && vt[(j + 1) % n] == t)
                .ok_or_else(|| Error::PairingMismatch(format!("edge {i} of face {} has no image", from + 1)))?;
            correspondence.push(j);
        }
        pairs.push(SchemePair {
            from: from + 1,
            to: to + 1,
            generator: name.clone(),
            correspondence,
            orientation: Orientation::Preserving,
        });
    }
    let definitions = DEFINITIONS.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    Ok(FacePairingScheme {
        metadata: SchemeMetadata { symbol: [symbol.u, symbol.v, symbol.w], source: source.into() },
        vertex_count: cell.vertices.len(),
        edges,
        faces,
        pairs,
        definitions,
    })
}
