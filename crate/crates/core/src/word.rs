//! Words in a free group on named generators: parsing, free and cyclic
//! reduction, substitution, abelianization and evaluation as isometries.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gram::GramPair;
use crate::isometry::Isometry;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub name: String,
    pub inverse: bool,
}

impl Letter {
    pub fn new(name: impl Into<String>, inverse: bool) -> Self {
        Self { name: name.into(), inverse }
    }

    pub fn inverted(&self) -> Self {
        Self { name: self.name.clone(), inverse: !self.inverse }
    }

    pub fn cancels(&self, other: &Letter) -> bool {
        self.name == other.name && self.inverse != other.inverse
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

/// A product of generator letters, read left to right as matrix products.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord {
    pub letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(name: impl Into<String>) -> Self {
        Self { letters: vec![Letter::new(name, false)] }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser { chars: text.chars().collect(), pos: 0 };
        let w = p.word()?;
        p.skip_separators();
        if p.pos < p.chars.len() {
            return Err(Error::WordParse(format!(
                "unexpected `{}` at offset {} in `{}`",
                p.chars[p.pos], p.pos, text
            )));
        }
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self { letters: self.letters.iter().rev().map(Letter::inverted).collect() }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Self { letters }
    }

    pub fn pow(&self, k: i32) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Cancels adjacent `x x⁻¹` pairs.
    pub fn free_reduced(&self) -> Self {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            if stack.last().is_some_and(|top| top.cancels(l)) {
                stack.pop();
            } else {
                stack.push(l.clone());
            }
        }
        Self { letters: stack }
    }

    /// Free reduction followed by cancellation across the ends.
    pub fn cyclically_reduced(&self) -> Self {
        let mut letters = self.free_reduced().letters;
        let mut start = 0;
        let mut end = letters.len();
        while end - start > 1 && letters[start].cancels(&letters[end - 1]) {
            start += 1;
            end -= 1;
        }
        letters.truncate(end);
        letters.drain(..start);
        Self { letters }
    }

    pub fn rotated(&self, k: usize) -> Self {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let n = letters.len();
            letters.rotate_left(k % n);
        }
        Self { letters }
    }

    /// Representative of the relator up to cyclic rotation and inversion:
    /// the smallest rendering among all rotations of the word and its inverse.
    pub fn canonical_relator(&self) -> Self {
        let w = self.cyclically_reduced();
        let inv = w.inverse();
        let mut best = w.clone();
        let mut best_text = best.to_string();
        for cand in [&w, &inv] {
            for k in 0..cand.len().max(1) {
                let r = cand.rotated(k);
                let text = r.to_string();
                if text < best_text {
                    best_text = text;
                    best = r;
                }
            }
        }
        best
    }

    /// Replaces every bound generator by its definition, recursively.
    pub fn substitute(&self, definitions: &HashMap<String, GroupWord>) -> Result<Self> {
        self.substitute_depth(definitions, 0)
    }

    fn substitute_depth(&self, definitions: &HashMap<String, GroupWord>, depth: usize) -> Result<Self> {
        if depth > 32 {
            return Err(Error::WordParse("definitions are cyclic".into()));
        }
        let mut out = Self::identity();
        for l in &self.letters {
            match definitions.get(&l.name) {
                Some(def) => {
                    let expanded = def.substitute_depth(definitions, depth + 1)?;
                    out = out.concat(&if l.inverse { expanded.inverse() } else { expanded });
                }
                None => out.letters.push(l.clone()),
            }
        }
        Ok(out)
    }

    /// Exponent sum of each generator, in the given order.
    pub fn exponent_sums(&self, generators: &[String]) -> Result<Vec<i64>> {
        let index: HashMap<&str, usize> = generators.iter().enumerate().map(|(i, g)| (g.as_str(), i)).collect();
        let mut row = vec![0i64; generators.len()];
        for l in &self.letters {
            let i = *index.get(l.name.as_str()).ok_or_else(|| Error::UnboundGenerator(l.name.clone()))?;
            row[i] += if l.inverse { -1 } else { 1 };
        }
        Ok(row)
    }

    pub fn generators(&self) -> BTreeSet<String> {
        self.letters.iter().map(|l| l.name.clone()).collect()
    }

    pub fn count(&self, generator: &str) -> usize {
        self.letters.iter().filter(|l| l.name == generator).count()
    }

    /// Product of the bound isometries, left to right.
    pub fn evaluate<T: Real>(
        &self,
        generators: &HashMap<String, Isometry<T>>,
        gram: &GramPair<T>,
    ) -> Result<Isometry<T>> {
        let mut acc = Isometry::identity();
        for l in &self.letters {
            let g = generators.get(&l.name).ok_or_else(|| Error::UnboundGenerator(l.name.clone()))?;
            let g = if l.inverse { g.inverse(gram) } else { *g };
            acc = acc * g;
        }
        Ok(acc)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl serde::Serialize for GroupWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `lhs = rhs`, stored as the relator `lhs · rhs⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub lhs: GroupWord,
    pub rhs: GroupWord,
}

impl Relation {
    /// Parses `lhs = rhs`; a bare word is a relator equal to `1`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split('=').collect();
        match parts.as_slice() {
            [w] => Ok(Self { lhs: GroupWord::parse(w)?, rhs: GroupWord::identity() }),
            [l, r] => Ok(Self { lhs: GroupWord::parse(l)?, rhs: GroupWord::parse(r)? }),
            _ => Err(Error::WordParse(format!("more than one `=` in `{text}`"))),
        }
    }

    pub fn relator(&self) -> GroupWord {
        self.lhs.concat(&self.rhs.inverse())
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Residual of a relator against the identity, up to positive scale;
/// infinite when the scale comes out non-positive.
pub fn verify_relation<T: Real>(
    word: &GroupWord,
    generators: &HashMap<String, Isometry<T>>,
    gram: &GramPair<T>,
) -> Result<T> {
    let g = word.evaluate(generators, gram)?;
    Ok(g.projective_residual(&Isometry::identity()).unwrap_or_else(T::infinity))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_separators(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() || matches!(c, '·' | '*' | '⋅') {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn word(&mut self) -> Result<GroupWord> {
        let mut out = GroupWord::identity();
        loop {
            self.skip_separators();
            match self.peek() {
                None | Some(')') => return Ok(out),
                Some('1') if !self.next_is_alnum(1) => {
                    self.pos += 1;
                    let _ = self.power()?;
                }
                Some(_) => {
                    let atom = self.atom()?;
                    let k = self.power()?;
                    out = out.concat(&atom.pow(k));
                }
            }
        }
    }

    fn next_is_alnum(&self, offset: usize) -> bool {
        self.chars.get(self.pos + offset).is_some_and(|c| c.is_alphanumeric() || *c == '_')
    }

    fn atom(&mut self) -> Result<GroupWord> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                if self.peek() != Some(')') {
                    return Err(Error::WordParse("unbalanced parenthesis".into()));
                }
                self.pos += 1;
                Ok(w)
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.next_is_alnum(0) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                Ok(GroupWord::generator(name))
            }
            Some(c) => Err(Error::WordParse(format!("unexpected `{c}` at offset {}", self.pos))),
            None => Err(Error::WordParse("unexpected end of word".into())),
        }
    }

    fn power(&mut self) -> Result<i32> {
        if self.chars[self.pos..].starts_with(&['⁻', '¹']) {
            self.pos += 2;
            return Ok(-1);
        }
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        let braced = self.peek() == Some('{');
        if braced {
            self.pos += 1;
        }
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        let k = text.parse::<i32>().map_err(|_| Error::WordParse(format!("bad exponent `{text}`")))?;
        if braced {
            if self.peek() != Some('}') {
                return Err(Error::WordParse("unbalanced brace in exponent".into()));
            }
            self.pos += 1;
        }
        Ok(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> GroupWord {
        GroupWord::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("a1 s^-1 a1").to_string(), "a1 s^-1 a1");
        assert_eq!(w("(a1 s^-1 a1)^2").len(), 6);
        assert_eq!(w("s^{-1}").to_string(), "s^-1");
        assert_eq!(w("s⁻¹ a1").to_string(), "s^-1 a1");
        assert_eq!(w("s^2 a2^-2").to_string(), "s s a2^-1 a2^-1");
        assert_eq!(w("1").to_string(), "1");
        assert_eq!(w("a1·s").to_string(), "a1 s");
        assert!(GroupWord::parse("(a1 s").is_err());
        assert!(GroupWord::parse("a1 ^x").is_err());
        assert!(GroupWord::parse("a1 )").is_err());
    }

    #[test]
    fn free_reduction() {
        assert!(w("a1 (s1^-1 a1)(a1^-1 s1 a1^-1)").free_reduced().is_empty());
        assert!(w("(s1^-1 b1) s^-1 (s b1^-1 s1)").free_reduced().is_empty());
        assert_eq!(w("a s s^-1 b").free_reduced().to_string(), "a b");
        assert_eq!(w("a b a^-1").cyclically_reduced().to_string(), "b");
        assert_eq!(w("a b b^-1 a^-1").cyclically_reduced().to_string(), "1");
    }

    #[test]
    fn canonical_relator_is_rotation_and_inversion_invariant() {
        let r = w("s a3^-1 s a1 s^-1 a1 s a2^-1");
        let c = r.canonical_relator();
        assert_eq!(r.rotated(3).canonical_relator(), c);
        assert_eq!(r.inverse().canonical_relator(), c);
    }

    #[test]
    fn substitution() {
        let mut defs = HashMap::new();
        defs.insert("s1".to_string(), w("a1 s^-1 a1"));
        defs.insert("b2".to_string(), w("a1^-1 s1"));
        let e = w("b2").substitute(&defs).unwrap().free_reduced();
        assert_eq!(e.to_string(), "s^-1 a1");
        assert_eq!(w("b2^-1").substitute(&defs).unwrap().free_reduced().to_string(), "a1^-1 s");
        defs.insert("x".to_string(), w("y"));
        defs.insert("y".to_string(), w("x"));
        assert!(w("x").substitute(&defs).is_err());
    }

    #[test]
    fn exponent_sums() {
        let gens: Vec<String> = ["a1", "a2", "a3", "s"].iter().map(|s| s.to_string()).collect();
        let r = w("(a1 s^-1 a1)^2 (a2 s^-1 a2)^2 (a3 s^-1 a3)^2");
        assert_eq!(r.exponent_sums(&gens).unwrap(), vec![4, 4, 4, -6]);
        assert!(w("q").exponent_sums(&gens).is_err());
    }

    #[test]
    fn relations() {
        let r = Relation::parse("b2 = a1^-1 s1").unwrap();
        assert_eq!(r.relator().to_string(), "b2 s1^-1 a1");
        assert_eq!(Relation::parse("a b").unwrap().relator().to_string(), "a b");
        assert!(Relation::parse("a = b = c").is_err());
        assert_eq!(r.to_string(), "b2 = a1^-1 s1");
    }
}
