//! Finite relational structures with persistent extension.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use thiserror::Error;

use crate::symbol::Symbol;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("the domain of a structure must be nonempty")]
    EmptyDomain,
    #[error("invalid extension by {symbol:?}: {reason}")]
    InvalidExtension { symbol: Symbol, reason: String },
    #[error("size limit exceeded: {what} ({size} > {cap})")]
    SizeLimit { what: String, size: usize, cap: usize },
}

/// Interpretation supplied to [`Structure::extend`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Element(usize),
    Relation(BTreeSet<Vec<usize>>),
}

impl Value {
    pub fn set<I: IntoIterator<Item = usize>>(members: I) -> Value {
        Value::Relation(members.into_iter().map(|a| vec![a]).collect())
    }

    pub fn pairs<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> Value {
        Value::Relation(pairs.into_iter().map(|(a, b)| vec![a, b]).collect())
    }
}

/// A finite structure with domain `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    size: usize,
    elems: BTreeMap<Symbol, usize>,
    rels: BTreeMap<Symbol, BTreeSet<Vec<usize>>>,
}

impl Structure {
    /// The structure with domain `0..size` and empty signature.
    pub fn new(size: usize) -> Result<Structure, StructureError> {
        if size == 0 {
            return Err(StructureError::EmptyDomain);
        }
        Ok(Structure { size, elems: BTreeMap::new(), rels: BTreeMap::new() })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn domain(&self) -> Range<usize> {
        0..self.size
    }

    pub fn sig(&self) -> BTreeSet<Symbol> {
        self.elems.keys().chain(self.rels.keys()).cloned().collect()
    }

    pub fn has_symbol(&self, s: &Symbol) -> bool {
        if s.is_element() {
            self.elems.contains_key(s)
        } else {
            self.rels.contains_key(s)
        }
    }

    pub fn is_pointed(&self) -> bool {
        self.elems.contains_key(&Symbol::position())
    }

    pub fn position(&self) -> Option<usize> {
        self.elems.get(&Symbol::position()).copied()
    }

    pub fn element(&self, s: &Symbol) -> Option<usize> {
        self.elems.get(s).copied()
    }

    pub fn relation(&self, s: &Symbol) -> Option<&BTreeSet<Vec<usize>>> {
        self.rels.get(s)
    }

    /// Members of a set symbol.
    pub fn set_members(&self, s: &Symbol) -> Option<BTreeSet<usize>> {
        self.rels.get(s).map(|tuples| tuples.iter().map(|t| t[0]).collect())
    }

    /// Pairs of a binary relation symbol.
    pub fn pairs(&self, s: &Symbol) -> Option<Vec<(usize, usize)>> {
        self.rels.get(s).map(|tuples| tuples.iter().map(|t| (t[0], t[1])).collect())
    }

    pub fn elements(&self) -> impl Iterator<Item = (&Symbol, usize)> {
        self.elems.iter().map(|(s, &a)| (s, a))
    }

    pub fn relations(&self) -> impl Iterator<Item = (&Symbol, &BTreeSet<Vec<usize>>)> {
        self.rels.iter()
    }

    /// The structure `self[s ↦ value]`; `self` is left untouched.
    pub fn extend(&self, s: &Symbol, value: Value) -> Result<Structure, StructureError> {
        let mut out = self.clone();
        out.assign(s, value)?;
        Ok(out)
    }

    /// In-place form of [`Structure::extend`].
    pub fn assign(&mut self, s: &Symbol, value: Value) -> Result<(), StructureError> {
        let bad = |reason: String| StructureError::InvalidExtension { symbol: s.clone(), reason };
        match value {
            Value::Element(a) => {
                if !s.is_element() {
                    return Err(bad("an element was given for a relation symbol".into()));
                }
                if a >= self.size {
                    return Err(bad(format!("element {a} is outside the domain")));
                }
                self.elems.insert(s.clone(), a);
            }
            Value::Relation(tuples) => {
                if s.is_element() {
                    return Err(bad("a relation was given for an element symbol".into()));
                }
                let k = s.arity() as usize;
                for t in &tuples {
                    if t.len() != k {
                        return Err(bad(format!("tuple {t:?} does not have arity {k}")));
                    }
                    if let Some(a) = t.iter().find(|&&a| a >= self.size) {
                        return Err(bad(format!("element {a} is outside the domain")));
                    }
                }
                self.rels.insert(s.clone(), tuples);
            }
        }
        Ok(())
    }

    pub fn with_element(mut self, s: &Symbol, a: usize) -> Result<Structure, StructureError> {
        self.assign(s, Value::Element(a))?;
        Ok(self)
    }

    pub fn with_set<I: IntoIterator<Item = usize>>(
        mut self,
        s: &Symbol,
        members: I,
    ) -> Result<Structure, StructureError> {
        self.assign(s, Value::set(members))?;
        Ok(self)
    }

    pub fn with_pairs<I: IntoIterator<Item = (usize, usize)>>(
        mut self,
        s: &Symbol,
        pairs: I,
    ) -> Result<Structure, StructureError> {
        self.assign(s, Value::pairs(pairs))?;
        Ok(self)
    }

    pub fn with_tuples<I: IntoIterator<Item = Vec<usize>>>(
        mut self,
        s: &Symbol,
        tuples: I,
    ) -> Result<Structure, StructureError> {
        self.assign(s, Value::Relation(tuples.into_iter().collect()))?;
        Ok(self)
    }

    /// Drops a symbol from the signature.
    pub fn without(&self, s: &Symbol) -> Structure {
        let mut out = self.clone();
        out.elems.remove(s);
        out.rels.remove(s);
        out
    }

    /// Renames elements: element `a` becomes `perm[a]`. `perm` must be a
    /// permutation of the domain.
    pub fn permuted(&self, perm: &[usize]) -> Structure {
        assert_eq!(perm.len(), self.size);
        let elems = self.elems.iter().map(|(s, &a)| (s.clone(), perm[a])).collect();
        let rels = self
            .rels
            .iter()
            .map(|(s, ts)| (s.clone(), ts.iter().map(|t| t.iter().map(|&a| perm[a]).collect()).collect()))
            .collect();
        Structure { size: self.size, elems, rels }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> Symbol {
        Symbol::relation("R", 2)
    }

    #[test]
    fn extend_is_persistent() {
        let a = Structure::new(1).unwrap();
        let p = Symbol::set("P");
        let b = a.extend(&p, Value::set([0])).unwrap();
        assert!(!a.has_symbol(&p));
        assert_eq!(b.set_members(&p).unwrap(), [0].into_iter().collect());
    }

    #[test]
    fn extend_position() {
        let a = Structure::new(3).unwrap();
        let b = a.extend(&Symbol::position(), Value::Element(2)).unwrap();
        assert_eq!(b.position(), Some(2));
        assert!(b.is_pointed());
    }

    #[test]
    fn extend_overwrites_only_target() {
        let a = Structure::new(2)
            .unwrap()
            .with_pairs(&r(), [(0, 1)])
            .unwrap()
            .with_set(&Symbol::set("P"), [0])
            .unwrap();
        let b = a.extend(&Symbol::set("P"), Value::set([1])).unwrap();
        assert_eq!(a.relation(&r()), b.relation(&r()));
        assert_eq!(b.set_members(&Symbol::set("P")).unwrap(), [1].into_iter().collect());
    }

    #[test]
    fn extend_rejects_mismatches() {
        let a = Structure::new(2).unwrap();
        assert!(a.extend(&Symbol::position(), Value::Element(2)).is_err());
        assert!(a.extend(&r(), Value::set([0])).is_err());
        assert!(a.extend(&Symbol::element("q"), Value::set([0])).is_err());
        assert!(a.extend(&r(), Value::pairs([(0, 5)])).is_err());
        assert_eq!(Structure::new(0), Err(StructureError::EmptyDomain));
    }

    #[test]
    fn extend_commutes_and_is_idempotent() {
        let a = Structure::new(3).unwrap();
        let p = Symbol::set("P");
        let q = Symbol::element("q");
        let ab = a.extend(&p, Value::set([1])).unwrap().extend(&q, Value::Element(2)).unwrap();
        let ba = a.extend(&q, Value::Element(2)).unwrap().extend(&p, Value::set([1])).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(ab.extend(&p, Value::set([1])).unwrap(), ab);
    }
}
