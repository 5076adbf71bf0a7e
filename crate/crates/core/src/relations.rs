//! Catalogue of group identities among the face-pairing generators of
//! `Cw(6,6,6)`.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::Result;
use crate::gram::GramPair;
use crate::isometry::Isometry;
use crate::scalar::Real;
use crate::word::{verify_relation, GroupWord, Relation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    /// Must hold as a matrix identity.
    Identity,
    /// Must freely reduce to the empty word.
    Trivial,
    /// Evaluated and reported; not part of the pass/fail verdict.
    Informational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogueEntry {
    pub label: &'static str,
    pub text: &'static str,
    pub kind: RelationKind,
}

const fn identity(label: &'static str, text: &'static str) -> CatalogueEntry {
    CatalogueEntry { label, text, kind: RelationKind::Identity }
}

pub const CATALOGUE: &[CatalogueEntry] = &[
    identity("b2 from the first edge triple", "b2 = a1^-1 s1"),
    identity("first edge triple closes", "a1 b2 s1^-1 = 1"),
    identity("composite side pairing", "s1 a1^-1 = a1 s^-1"),
    identity("base pairing through a1 and s1", "s = a1 s1^-1 a1"),
    CatalogueEntry { label: "trivial triple via a1", text: "a1 (s1^-1 a1)(a1^-1 s1 a1^-1)", kind: RelationKind::Trivial },
    CatalogueEntry { label: "trivial triple via b1", text: "(s1^-1 b1) s^-1 (s b1^-1 s1)", kind: RelationKind::Trivial },
    identity("b3 from its edge triple", "b3 = a2^-1 s2"),
    identity("s1 in terms of a1 and s", "s1 = a1 s^-1 a1"),
    identity("s2 in terms of a2 and s", "s2 = a2 s^-1 a2"),
    identity("s3 in terms of a3 and s", "s3 = a3 s^-1 a3"),
    identity("middle edge class", "(a1 s^-1 a1)^2 (a2 s^-1 a2)^2 (a3 s^-1 a3)^2 = 1"),
    identity("side cycle through a3, a1, a2", "s a3^-1 s a1 s^-1 a1 s a2^-1 = 1"),
    identity("side cycle through a1, a2, a3", "s a1^-1 s a2 s^-1 a2 s a3^-1 = 1"),
    identity("side cycle through a2, a3, a1", "s a2^-1 s a3 s^-1 a3 s a1^-1 = 1"),
    identity(
        "side cycle with a3 eliminated",
        "s a2^-1 s (s a1 s^-1 a1 s a2^-1 s) s^-1 (s a1^-1 s a2 s^-1 a2 s) s a1^-1 = 1",
    ),
    identity(
        "18-letter relation, s2 read as s^2",
        "s a2^-1 s^2 a1 s^-1 a1 s a2^-1 s a1^-1 s a2 s^-1 a2 s^2 a1^-1 = 1",
    ),
    CatalogueEntry {
        label: "18-letter relation, s2 read as a generator",
        text: "s a2^-1 s2 a1 s^-1 a1 s a2^-1 s a1^-1 s a2 s^-1 a2 s2 a1^-1 = 1",
        kind: RelationKind::Informational,
    },
    identity("10-letter relation", "a1 a1 s^-1 a1 s a2^-1 a2^-1 s a2^-1 s^-1 = 1"),
    identity(
        "38-letter relation",
        "(a1 s^-1 a1)^2 (a2 s^-1 a2)^2 (s a1 s^-1 a1 s a2^-1 s a1^-1 s a2 s^-1 a2 s)^2 = 1",
    ),
    identity("b2 through s and a1", "b2 = s^-1 a1"),
    identity("b1 from its edge triple", "b1 = a3^-1 s3"),
    identity("b1 through s and a3", "b1 = s^-1 a3"),
    identity("a3 from the first side cycle", "a3 = s a1 s^-1 a1 s a2^-1 s"),
    identity("a3 from the second side cycle", "a3 = s a1^-1 s a2 s^-1 a2 s"),
];

/// Relators of the printed three-generator presentation on `{a1, a2, s}`.
pub const PRINTED_THREE_GENERATOR: [&str; 2] = [
    "a1 a1 s^-1 a1 s a2^-1 a2^-1 s a2^-1 s^-1",
    "(a1 s^-1 a1)^2 (a2 s^-1 a2)^2 (s a1 s^-1 a1 s a2^-1 s a1^-1 s a2 s^-1 a2 s)^2",
];

/// The 18-letter relator on `{a1, a2, s}` with `s2` read as `s^2`.
pub const EIGHTEEN_LETTER: &str = "s a2^-1 s^2 a1 s^-1 a1 s a2^-1 s a1^-1 s a2 s^-1 a2 s^2 a1^-1";

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub label: String,
    pub relation: String,
    pub kind: RelationKind,
    pub letters: usize,
    /// Matrix residual; absent for purely combinatorial checks.
    pub residual: Option<f64>,
    pub reduced: String,
    pub passed: bool,
}

/// Evaluates one relation against bound generators.
pub fn check_relation<T: Real>(
    label: &str,
    text: &str,
    kind: RelationKind,
    generators: &HashMap<String, Isometry<T>>,
    gram: &GramPair<T>,
    tol: f64,
) -> Result<RelationCheck> {
    let relator = Relation::parse(text)?.relator();
    let reduced = relator.free_reduced();
    let (residual, passed) = match kind {
        RelationKind::Trivial => (None, reduced.is_empty()),
        RelationKind::Identity | RelationKind::Informational => {
            let r = verify_relation(&relator, generators, gram)?.to_f64().unwrap_or(f64::INFINITY);
            (Some(r), r <= tol)
        }
    };
    Ok(RelationCheck {
        label: label.into(),
        relation: text.into(),
        kind,
        letters: relator.len(),
        residual,
        reduced: reduced.to_string(),
        passed,
    })
}

/// Evaluates the whole catalogue.
pub fn check_catalogue<T: Real>(
    generators: &HashMap<String, Isometry<T>>,
    gram: &GramPair<T>,
    tol: f64,
) -> Result<Vec<RelationCheck>> {
    CATALOGUE.iter().map(|e| check_relation(e.label, e.text, e.kind, generators, gram, tol)).collect()
}

/// Parses the printed three-generator relators, optionally with the
/// 18-letter relator appended.
pub fn printed_three_generator(with_eighteen: bool) -> Result<Vec<GroupWord>> {
    let mut out: Vec<GroupWord> = PRINTED_THREE_GENERATOR.iter().map(|t| GroupWord::parse(t)).collect::<Result<_>>()?;
    if with_eighteen {
        out.push(GroupWord::parse(EIGHTEEN_LETTER)?);
    }
    Ok(out)
}
