//! Combinatorics of a face-pairing scheme: edge cycles, vertex classes,
//! Euler characteristic, group presentations and first homology.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scheme::SchemeTopology;
use crate::snf::{smith_normal_form, to_bigint, AbelianGroup, Snf};
use crate::word::{GroupWord, Letter};

/// One transition of an edge cycle: leave `face` through boundary edge
/// `position` via `pair`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CycleStep {
    pub face: usize,
    pub position: usize,
    pub pair: usize,
    /// Whether the pair is used in its `from → to` direction.
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeCycle {
    pub steps: Vec<CycleStep>,
    /// Scheme edge indices (0-based) in cycle order.
    pub edges: Vec<usize>,
    /// Cycle transformation as a relator over pair symbols, `g_n ⋯ g_1`.
    pub word: GroupWord,
}

impl EdgeCycle {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// 1-based id of the first edge, used to name the cycle.
    pub fn start_edge(&self) -> usize {
        self.edges[0] + 1
    }
}

/// Partitions the edges into cycles under the pairing transitions.
pub fn edge_cycles(t: &SchemeTopology) -> Result<Vec<EdgeCycle>> {
    let ne = t.edge_count();
    let mut visited = vec![false; ne];
    let mut cycles = Vec::new();
    for e0 in 0..ne {
        if visited[e0] {
            continue;
        }
        let (f0, k0) = t.edge_occurrences[e0][0];
        let b0 = &t.boundaries[f0];
        let (tail0, head0) = (b0.tail(k0), b0.head(k0));
        let (mut tail, mut head) = (tail0, head0);
        let (mut f, mut k) = (f0, k0);
        let mut steps = Vec::new();
        let mut edges = Vec::new();
        loop {
            let e = t.boundaries[f].edges[k];
            if visited[e] || steps.len() > ne {
                return Err(Error::NonClosingCycle(e0 + 1));
            }
            visited[e] = true;
            edges.push(e);
            let (pair, is_from) = t.face_pair[f];
            let (from, to) = t.pair_faces[pair];
            let corr = &t.scheme.pairs[pair].correspondence;
            let (g, j) = if is_from {
                (to, corr[k])
            } else {
                (from, corr.iter().position(|&c| c == k).ok_or(Error::NonClosingCycle(e0 + 1))?)
            };
            steps.push(CycleStep { face: f, position: k, pair, forward: is_from });
            let vmap = &t.pair_vertex_maps[pair];
            let image = |v: usize| -> Result<usize> {
                if is_from {
                    vmap.get(&v).copied().ok_or(Error::NonClosingCycle(e0 + 1))
                } else {
                    vmap.iter().find(|(_, &y)| y == v).map(|(&x, _)| x).ok_or(Error::NonClosingCycle(e0 + 1))
                }
            };
            tail = image(tail)?;
            head = image(head)?;
            let ge = t.boundaries[g].edges[j];
            let [o1, o2] = t.edge_occurrences[ge];
            (f, k) = if o1 == (g, j) { o2 } else { o1 };
            if (f, k) == (f0, k0) {
                if (tail, head) != (tail0, head0) {
                    return Err(Error::NonClosingCycle(e0 + 1));
                }
                break;
            }
        }
        let letters = steps
            .iter()
            .rev()
            .map(|s| {
                let sym = t.pair_symbol(s.pair);
                Letter::new(sym, !s.forward)
            })
            .collect();
        cycles.push(EdgeCycle { steps, edges, word: GroupWord { letters } });
    }
    Ok(cycles)
}

/// Vertex classes (0-based scheme vertices), each sorted, ordered by their
/// smallest member.
pub fn vertex_classes(t: &SchemeTopology) -> Vec<Vec<usize>> {
    let n = t.scheme.vertex_count;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for vmap in &t.pair_vertex_maps {
        for (&x, &y) in vmap {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            if rx != ry {
                parent[rx.max(ry)] = rx.min(ry);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut index = HashMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        let i = *index.entry(r).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[i].push(v);
    }
    classes
}

/// `χ = V − E + F − 1` of the quotient complex.
pub fn euler_characteristic(vertex_classes: usize, edge_cycles: usize, face_pairs: usize) -> i64 {
    vertex_classes as i64 - edge_cycles as i64 + face_pairs as i64 - 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PresentationForm {
    /// One generator per face pair, one relator per edge cycle.
    Full,
    /// Generators `a1, a2, a3, s` after substituting the definitions.
    FourGenerator,
    /// `a3` eliminated from the four-generator form.
    ThreeGenerator,
}

impl PresentationForm {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "full" => Some(Self::Full),
            "4gen" => Some(Self::FourGenerator),
            "3gen" => Some(Self::ThreeGenerator),
            _ => None,
        }
    }
}

/// Generator removed to pass from four to three generators.
pub const ELIMINATED_GENERATOR: &str = "a3";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Presentation {
    pub form: PresentationForm,
    pub generators: Vec<String>,
    pub relators: Vec<GroupWord>,
    /// Cycles (by index) whose relator reduced to the empty word.
    pub trivial_cycles: Vec<usize>,
}

impl Presentation {
    pub fn new(form: PresentationForm, generators: Vec<String>, relators: Vec<GroupWord>) -> Self {
        Self { form, generators, relators, trivial_cycles: Vec::new() }
    }

    /// Exponent-sum matrix, one row per relator.
    pub fn abelianized(&self) -> Result<Vec<Vec<i64>>> {
        self.relators.iter().map(|r| r.exponent_sums(&self.generators)).collect()
    }

    pub fn smith_normal_form(&self) -> Result<Snf> {
        let m = self.abelianized()?;
        let big = to_bigint(&m);
        if big.is_empty() {
            // No relators: the cokernel is free on all generators.
            let n = self.generators.len();
            return Ok(Snf { rows: 0, cols: n, diagonal: Vec::new(), u: Vec::new(), v: identity(n) });
        }
        Ok(smith_normal_form(&big))
    }

    pub fn homology(&self) -> Result<AbelianGroup> {
        Ok(self.smith_normal_form()?.group())
    }

    /// Tietze elimination of `generator` using the first relator in which
    /// it occurs exactly once.
    pub fn eliminate(&self, generator: &str) -> Result<Self> {
        let (idx, r) = self
            .relators
            .iter()
            .enumerate()
            .find(|(_, r)| r.count(generator) == 1)
            .ok_or_else(|| Error::WordParse(format!("no relator contains `{generator}` exactly once")))?;
        let pos = r.letters.iter().position(|l| l.name == generator).expect("occurrence");
        let rot = r.rotated(pos);
        let rest = GroupWord { letters: rot.letters[1..].to_vec() };
        let value = if rot.letters[0].inverse { rest } else { rest.inverse() };
        let defs = HashMap::from([(generator.to_string(), value)]);
        let mut relators = Vec::new();
        for (i, r) in self.relators.iter().enumerate() {
            if i != idx {
                relators.push(r.substitute(&defs)?);
            }
        }
        let generators = self.generators.iter().filter(|g| *g != generator).cloned().collect();
        Ok(Self { form: PresentationForm::ThreeGenerator, generators, relators: dedup_relators(relators), trivial_cycles: Vec::new() })
    }

    /// The same presentation with one relator removed.
    pub fn without_relator(&self, index: usize) -> Self {
        let mut p = self.clone();
        p.relators.remove(index);
        p
    }
}

fn identity(n: usize) -> Vec<Vec<num_bigint::BigInt>> {
    (0..n).map(|i| (0..n).map(|j| num_bigint::BigInt::from((i == j) as i64)).collect()).collect()
}

/// Cyclically reduces, drops empty words, and removes duplicates up to
/// rotation and inversion, keeping first occurrences.
fn dedup_relators(words: Vec<GroupWord>) -> Vec<GroupWord> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for w in words {
        let r = w.cyclically_reduced();
        if r.is_empty() {
            continue;
        }
        if seen.insert(r.canonical_relator().to_string()) {
            out.push(r);
        }
    }
    out
}

/// Pair words expanded through the scheme definitions.
pub fn expanded_pair_words(t: &SchemeTopology) -> Result<Vec<GroupWord>> {
    t.generator_words.iter().map(|w| Ok(w.substitute(&t.definitions)?.free_reduced())).collect()
}

/// The fundamental-group presentation read off the edge cycles.
pub fn presentation(t: &SchemeTopology, cycles: &[EdgeCycle], form: PresentationForm) -> Result<Presentation> {
    if form == PresentationForm::Full {
        let generators: Vec<String> = (0..t.pair_count()).map(|p| t.pair_symbol(p)).collect();
        let mut relators = Vec::new();
        let mut trivial = Vec::new();
        for (i, c) in cycles.iter().enumerate() {
            let r = c.word.cyclically_reduced();
            if r.is_empty() {
                trivial.push(i);
            } else {
                relators.push(r);
            }
        }
        return Ok(Presentation { form, generators, relators, trivial_cycles: trivial });
    }

    let expanded = expanded_pair_words(t)?;
    let symbols: HashMap<String, GroupWord> =
        (0..t.pair_count()).map(|p| (t.pair_symbol(p), expanded[p].clone())).collect();
    let mut generators = BTreeSet::new();
    for w in &expanded {
        generators.extend(w.generators());
    }
    let mut words = Vec::new();
    let mut trivial = Vec::new();
    for (i, c) in cycles.iter().enumerate() {
        let mut letters = Vec::new();
        for l in &c.word.letters {
            let w = &symbols[&l.name];
            letters.extend(if l.inverse { w.inverse() } else { w.clone() }.letters);
        }
        let r = GroupWord { letters }.cyclically_reduced();
        if r.is_empty() {
            trivial.push(i);
        } else {
            words.push(r);
        }
    }
    let four = Presentation {
        form: PresentationForm::FourGenerator,
        generators: generators.into_iter().collect(),
        relators: dedup_relators(words),
        trivial_cycles: trivial,
    };
    match form {
        PresentationForm::ThreeGenerator => {
            let mut three = four.eliminate(ELIMINATED_GENERATOR)?;
            three.trivial_cycles = four.trivial_cycles;
            Ok(three)
        }
        _ => Ok(four),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomologyReport {
    pub form: PresentationForm,
    pub generators: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    pub invariant_factors: Vec<String>,
    pub free_rank: usize,
    pub torsion_order: String,
    pub group: String,
    pub snf_verified: bool,
}

/// First homology of a presentation via exact Smith normal form.
pub fn first_homology(p: &Presentation) -> Result<HomologyReport> {
    let matrix = p.abelianized()?;
    let snf = p.smith_normal_form()?;
    let verified = matrix.is_empty() || snf.verify(&to_bigint(&matrix));
    Ok(HomologyReport {
        form: p.form,
        generators: p.generators.clone(),
        invariant_factors: snf.invariant_factors().iter().map(|d| d.to_string()).collect(),
        free_rank: snf.free_rank(),
        torsion_order: snf.torsion_order().to_string(),
        group: snf.group().to_string(),
        snf_verified: verified,
        matrix,
    })
}
