//! Combinatorial face-pairing schemes: file format, validation, and matching
//! against a constructed cell.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::cell::CobwebCell;
use crate::error::{Error, Result};
use crate::gram::SchlafliTriple;
use crate::linalg::Vec4;
use crate::scalar::Real;
use crate::word::GroupWord;

/// The scheme for `Cw(6,6,6)` shipped with the library.
pub const CW666_JSON: &str = include_str!("../data/cw666.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeMetadata {
    pub symbol: [u32; 3],
    #[serde(default)]
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeFace {
    pub id: usize,
    #[serde(default)]
    pub label: String,
    /// Supporting plane form, unit-normalized, non-negative on the cell.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane: Option<[f64; 4]>,
    /// Signed 1-based edge ids; `-k` traverses edge `k` from end to start.
    pub boundary: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Preserving,
    Reversing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemePair {
    pub from: usize,
    pub to: usize,
    /// Word naming the isometry that carries `from` onto `to`.
    pub generator: String,
    /// `correspondence[i] = j`: boundary edge `i` of `from` goes to boundary
    /// edge `j` of `to`.
    pub correspondence: Vec<usize>,
    #[serde(default)]
    pub orientation: Orientation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FacePairingScheme {
    pub metadata: SchemeMetadata,
    pub vertex_count: usize,
    /// 1-based `[start, end]` vertex pairs.
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<SchemeFace>,
    pub pairs: Vec<SchemePair>,
    /// Derived generators expressed as words in others.
    #[serde(default)]
    pub definitions: BTreeMap<String, String>,
}

/// A boundary cycle in 0-based indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Boundary {
    pub edges: Vec<usize>,
    pub forward: Vec<bool>,
    /// `vertices[k]` is the tail of boundary edge `k`.
    pub vertices: Vec<usize>,
}

impl Boundary {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn tail(&self, k: usize) -> usize {
        self.vertices[k % self.len()]
    }

    pub fn head(&self, k: usize) -> usize {
        self.vertices[(k + 1) % self.len()]
    }
}

/// A validated scheme with index-based lookups.
#[derive(Clone, Debug)]
pub struct SchemeTopology {
    pub scheme: FacePairingScheme,
    pub boundaries: Vec<Boundary>,
    /// Face index (position in `faces`) by id.
    pub face_index: HashMap<usize, usize>,
    /// For each face: its pair and whether it is the pair's `from` face.
    pub face_pair: Vec<(usize, bool)>,
    /// Pair endpoints as face indices.
    pub pair_faces: Vec<(usize, usize)>,
    /// Per pair, the vertex map from `from` onto `to`.
    pub pair_vertex_maps: Vec<HashMap<usize, usize>>,
    pub generator_words: Vec<GroupWord>,
    pub definitions: HashMap<String, GroupWord>,
    /// For each edge, its two occurrences `(face, position)`.
    pub edge_occurrences: Vec<[(usize, usize); 2]>,
}

impl FacePairingScheme {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn bundled_cw666() -> Result<Self> {
        Self::from_json(CW666_JSON)
    }

    pub fn symbol(&self) -> Result<SchlafliTriple> {
        let [u, v, w] = self.metadata.symbol;
        SchlafliTriple::new(u, v, w)
    }

    /// Checks the schema and pairing invariants.
    pub fn validate(&self) -> Result<SchemeTopology> {
        let schema = |m: String| Err(Error::Schema(m));
        let ne = self.edges.len();
        for (k, e) in self.edges.iter().enumerate() {
            if e[0] == 0 || e[1] == 0 || e[0] > self.vertex_count || e[1] > self.vertex_count || e[0] == e[1] {
                return schema(format!("edge {} has invalid endpoints {:?}", k + 1, e));
            }
        }
        let mut face_index = HashMap::new();
        for (i, f) in self.faces.iter().enumerate() {
            if face_index.insert(f.id, i).is_some() {
                return schema(format!("duplicate face id {}", f.id));
            }
        }

        let mut boundaries = Vec::with_capacity(self.faces.len());
        let mut occurrences: Vec<Vec<(usize, usize)>> = vec![Vec::new(); ne];
        for (fi, f) in self.faces.iter().enumerate() {
            if f.boundary.len() < 3 {
                return schema(format!("face {} has fewer than three edges", f.id));
            }
            let mut edges = Vec::new();
            let mut forward = Vec::new();
            let mut tails = Vec::new();
            let mut heads = Vec::new();
            for (pos, &s) in f.boundary.iter().enumerate() {
                let k = s.unsigned_abs() as usize;
                if s == 0 || k > ne {
                    return schema(format!("face {} references unknown edge {}", f.id, s));
                }
                let [a, b] = self.edges[k - 1];
                let (t, h) = if s > 0 { (a - 1, b - 1) } else { (b - 1, a - 1) };
                edges.push(k - 1);
                forward.push(s > 0);
                tails.push(t);
                heads.push(h);
                occurrences[k - 1].push((fi, pos));
            }
            let n = edges.len();
            for pos in 0..n {
                if heads[pos] != tails[(pos + 1) % n] {
                    return schema(format!("boundary of face {} is not a closed cycle", f.id));
                }
            }
            boundaries.push(Boundary { edges, forward, vertices: tails });
        }
        let mut edge_occurrences = Vec::with_capacity(ne);
        for (k, occ) in occurrences.iter().enumerate() {
            if occ.len() != 2 {
                return schema(format!("edge {} appears on {} face boundaries (expected 2)", k + 1, occ.len()));
            }
            edge_occurrences.push([occ[0], occ[1]]);
        }

        let mut face_pair: Vec<Option<(usize, bool)>> = vec![None; self.faces.len()];
        let mut pair_faces = Vec::new();
        let mut pair_vertex_maps = Vec::new();
        let mut generator_words = Vec::new();
        for (pi, p) in self.pairs.iter().enumerate() {
            let (Some(&fi), Some(&ti)) = (face_index.get(&p.from), face_index.get(&p.to)) else {
                return schema(format!("pair {} references an unknown face", pi + 1));
            };
            if fi == ti {
                return Err(Error::PairingMismatch(format!("face {} is paired with itself", p.from)));
            }
            for (f, is_from) in [(fi, true), (ti, false)] {
                if face_pair[f].is_some() {
                    return Err(Error::PairingMismatch(format!(
                        "face {} belongs to more than one pair",
                        self.faces[f].id
                    )));
                }
                face_pair[f] = Some((pi, is_from));
            }
            let (bf, bt) = (&boundaries[fi], &boundaries[ti]);
            let n = bf.len();
            if bt.len() != n || p.correspondence.len() != n {
                return Err(Error::PairingMismatch(format!(
                    "pair {} -> {}: boundary lengths {} and {} with {} correspondences",
                    p.from,
                    p.to,
                    n,
                    bt.len(),
                    p.correspondence.len()
                )));
            }
            let c = &p.correspondence;
            let step = match p.orientation {
                Orientation::Preserving => n - 1,
                Orientation::Reversing => 1,
            };
            let cyclic = c.iter().all(|&j| j < n) && (0..n).all(|i| c[(i + 1) % n] == (c[i] + step) % n);
            if !cyclic {
                return Err(Error::PairingMismatch(format!(
                    "pair {} -> {}: correspondence does not respect the boundary cycle",
                    p.from, p.to
                )));
            }
            let mut vmap = HashMap::new();
            for i in 0..n {
                let j = c[i];
                let (t, h) = match p.orientation {
                    Orientation::Preserving => (bt.head(j), bt.tail(j)),
                    Orientation::Reversing => (bt.tail(j), bt.head(j)),
                };
                for (x, y) in [(bf.tail(i), t), (bf.head(i), h)] {
                    if *vmap.entry(x).or_insert(y) != y {
                        return Err(Error::PairingMismatch(format!(
                            "pair {} -> {}: inconsistent vertex correspondence",
                            p.from, p.to
                        )));
                    }
                }
            }
            pair_faces.push((fi, ti));
            pair_vertex_maps.push(vmap);
            generator_words.push(GroupWord::parse(&p.generator)?);
        }
        let face_pair: Vec<(usize, bool)> = face_pair
            .into_iter()
            .enumerate()
            .map(|(i, fp)| {
                fp.ok_or_else(|| Error::PairingMismatch(format!("face {} is not paired", self.faces[i].id)))
            })
            .collect::<Result<_>>()?;

        let mut definitions = HashMap::new();
        for (name, text) in &self.definitions {
            definitions.insert(name.clone(), GroupWord::parse(text)?);
        }

        Ok(SchemeTopology {
            scheme: self.clone(),
            boundaries,
            face_index,
            face_pair,
            pair_faces,
            pair_vertex_maps,
            generator_words,
            definitions,
            edge_occurrences,
        })
    }
}

/// Index maps from scheme objects to the constructed cell.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometryMatch {
    pub face_map: Vec<usize>,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

impl SchemeTopology {
    pub fn face_count(&self) -> usize {
        self.boundaries.len()
    }

    pub fn pair_count(&self) -> usize {
        self.pair_faces.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_occurrences.len()
    }

    /// Pair-generator symbol: the generator itself when it is a single
    /// name, otherwise the bracketed word.
    pub fn pair_symbol(&self, pair: usize) -> String {
        let w = &self.generator_words[pair];
        if w.len() == 1 && !w.letters[0].inverse {
            w.letters[0].name.clone()
        } else {
            format!("[{}]", self.scheme.pairs[pair].generator)
        }
    }

    /// Matches every face by plane and side count, then derives the vertex
    /// and edge correspondences.
    pub fn match_geometry<T: Real>(&self, cell: &CobwebCell<T>) -> Result<GeometryMatch> {
        let mismatch = |m: String| Err(Error::GeometryMismatch(m));
        if self.face_count() != cell.faces.len() {
            return mismatch(format!("scheme has {} faces, cell has {}", self.face_count(), cell.faces.len()));
        }
        if self.scheme.vertex_count != cell.vertices.len() {
            return mismatch(format!(
                "scheme has {} vertices, cell has {}",
                self.scheme.vertex_count,
                cell.vertices.len()
            ));
        }
        let mut face_map = Vec::with_capacity(self.face_count());
        let mut used = vec![false; cell.faces.len()];
        for (fi, f) in self.scheme.faces.iter().enumerate() {
            let Some(plane) = f.plane else {
                return mismatch(format!("face {} has no plane", f.id));
            };
            let u = Vec4::from_f64(plane);
            let g = cell.gram().plane(u).unit();
            let found = cell.faces.iter().position(|cf| (cf.plane.u - g.u).max_abs() <= T::lit(1e-6));
            match found {
                Some(k) if !used[k] && cell.faces[k].sides() == self.boundaries[fi].len() => {
                    used[k] = true;
                    face_map.push(k);
                }
                Some(k) if used[k] => return mismatch(format!("face {} duplicates another face", f.id)),
                Some(_) => return mismatch(format!("face {} has the wrong number of sides", f.id)),
                None => return mismatch(format!("face {} matches no face of the cell", f.id)),
            }
        }

        let mut faces_of_vertex: Vec<Vec<usize>> = vec![Vec::new(); self.scheme.vertex_count];
        for (fi, b) in self.boundaries.iter().enumerate() {
            for &v in &b.vertices {
                faces_of_vertex[v].push(fi);
            }
        }
        let mut vertex_map = Vec::with_capacity(self.scheme.vertex_count);
        for (v, fs) in faces_of_vertex.iter().enumerate() {
            let mut common: Option<Vec<usize>> = None;
            for &fi in fs {
                let set = &cell.faces[face_map[fi]].vertices;
                common = Some(match common {
                    None => set.clone(),
                    Some(c) => c.into_iter().filter(|x| set.contains(x)).collect(),
                });
            }
            match common.as_deref() {
                Some([g]) => vertex_map.push(*g),
                _ => return mismatch(format!("vertex {} does not match a unique cell vertex", v + 1)),
            }
        }
        let mut seen = vertex_map.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != vertex_map.len() {
            return mismatch("two scheme vertices match the same cell vertex".into());
        }

        let mut edge_map = Vec::with_capacity(self.edge_count());
        for (k, e) in self.scheme.edges.iter().enumerate() {
            match cell.edge_index(vertex_map[e[0] - 1], vertex_map[e[1] - 1]) {
                Some(g) => edge_map.push(g),
                None => return mismatch(format!("edge {} is not an edge of the cell", k + 1)),
            }
        }

        for (fi, b) in self.boundaries.iter().enumerate() {
            let geo = &cell.faces[face_map[fi]].vertices;
            let mapped: Vec<usize> = b.vertices.iter().map(|&v| vertex_map[v]).collect();
            if !same_cycle(&mapped, geo) {
                return mismatch(format!("boundary of face {} disagrees with the cell", self.scheme.faces[fi].id));
            }
        }
        Ok(GeometryMatch { face_map, vertex_map, edge_map })
    }
}

/// Equality of cyclic sequences up to rotation and reversal.
fn same_cycle(a: &[usize], b: &[usize]) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    let rev: Vec<usize> = b.iter().rev().copied().collect();
    [b, &rev[..]].iter().any(|c| (0..n).any(|s| (0..n).all(|i| a[i] == c[(i + s) % n])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_pair() -> FacePairingScheme {
        // Two squares glued along a common boundary.
        FacePairingScheme {
            metadata: SchemeMetadata { symbol: [6, 6, 6], source: "test".into() },
            vertex_count: 4,
            edges: vec![[1, 2], [2, 3], [3, 4], [4, 1]],
            faces: vec![
                SchemeFace { id: 1, label: "x^-1".into(), plane: None, boundary: vec![1, 2, 3, 4] },
                SchemeFace { id: 2, label: "x".into(), plane: None, boundary: vec![-4, -3, -2, -1] },
            ],
            pairs: vec![SchemePair {
                from: 1,
                to: 2,
                generator: "x".into(),
                correspondence: vec![3, 2, 1, 0],
                orientation: Orientation::Preserving,
            }],
            definitions: BTreeMap::new(),
        }
    }

    #[test]
    fn valid_scheme() {
        let t = square_pair().validate().unwrap();
        assert_eq!(t.face_count(), 2);
        assert_eq!(t.pair_symbol(0), "x");
        assert_eq!(t.boundaries[1].vertices, vec![0, 3, 2, 1]);
        // Edge 0 (v0 -> v1) maps onto edge 3 of face 2 (v1 -> v0) reversed.
        assert_eq!(t.pair_vertex_maps[0][&0], 0);
    }

    #[test]
    fn self_pairing_rejected() {
        let mut s = square_pair();
        s.pairs[0].to = 1;
        assert!(matches!(s.validate(), Err(Error::PairingMismatch(_))));
    }

    #[test]
    fn length_mismatch_rejected() {
        let mut s = square_pair();
        s.pairs[0].correspondence.pop();
        assert!(matches!(s.validate(), Err(Error::PairingMismatch(_))));
    }

    #[test]
    fn open_boundary_rejected() {
        let mut s = square_pair();
        s.faces[0].boundary = vec![1, 3, 2, 4];
        assert!(matches!(s.validate(), Err(Error::Schema(_))));
    }

    #[test]
    fn non_cyclic_correspondence_rejected() {
        let mut s = square_pair();
        s.pairs[0].correspondence = vec![3, 1, 2, 0];
        assert!(matches!(s.validate(), Err(Error::PairingMismatch(_))));
    }

    #[test]
    fn json_round_trip() {
        let s = square_pair();
        let text = s.to_json().unwrap();
        assert_eq!(FacePairingScheme::from_json(&text).unwrap(), s);
        assert!(FacePairingScheme::from_json("{\"faces\": 3}").is_err());
    }

    #[test]
    fn cycles_up_to_rotation_and_reversal() {
        assert!(same_cycle(&[1, 2, 3, 4], &[3, 4, 1, 2]));
        assert!(same_cycle(&[1, 2, 3, 4], &[4, 3, 2, 1]));
        assert!(!same_cycle(&[1, 2, 3, 4], &[1, 3, 2, 4]));
    }
}
