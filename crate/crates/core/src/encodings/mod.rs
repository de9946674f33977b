//! Linear encodings between graph classes, with their translation kits
//! and image formulas.
//!
//! Every encoding maps `𝔄` to a structure whose domain is `m` copies of
//! `dom(𝔄)` followed by `n - m` extra elements. Copy `j` of element `d`
//! gets id `(j-1)·|dom| + d` and extra element `j > m` gets id
//! `m·|dom| + (j-m-1)`.

mod kits;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::classes::{validate, GraphClass};
use crate::formula::{Formula, Modality, Node};
use crate::structure::{Structure, StructureError};
use crate::symbol::Symbol;
use crate::translate::{backward_family, forward_translate, BackwardKit, ForwardKit, TranslateError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EncodingKind {
    /// Multi-relation elimination, `DIGRAPH[t,u] → DIGRAPH[t+u,1]`.
    Mu1 { t: usize, u: usize },
    /// Label elimination, `DIGRAPH[t,1] → DIGRAPH`.
    Mu2 { t: usize },
    /// Backward-modality elimination, `DIGRAPH → DIGRAPH[0,2]`.
    Mu3,
    /// Direction elimination, `DIGRAPH → GRAPH[1,1]`.
    Mu4,
    /// Global-modality elimination, `DIGRAPH → PDIGRAPH`.
    Mu5,
    /// `μ₅` without the position marker, `DIGRAPH → DIGRAPH`.
    Mu5Prime,
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodingKind::Mu1 { t, u } => write!(f, "mu1({t},{u})"),
            EncodingKind::Mu2 { t } => write!(f, "mu2({t})"),
            EncodingKind::Mu3 => f.write_str("mu3"),
            EncodingKind::Mu4 => f.write_str("mu4"),
            EncodingKind::Mu5 => f.write_str("mu5"),
            EncodingKind::Mu5Prime => f.write_str("mu5p"),
        }
    }
}

impl FromStr for EncodingKind {
    type Err = EncodingError;

    /// `mu1` (as `mu1(1,2)`), `mu1(t,u)`, `mu2` (as `mu2(1)`), `mu2(t)`,
    /// `mu3`, `mu4`, `mu5`, `mu5p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
        let unknown = || EncodingError::UnknownName(s.to_string());
        let (head, args) = match norm.find('(') {
            Some(i) if norm.ends_with(')') => (&norm[..i], Some(&norm[i + 1..norm.len() - 1])),
            Some(_) => return Err(unknown()),
            None => (norm.as_str(), None),
        };
        let nums: Vec<usize> = match args {
            Some(a) => a.split(',').map(|x| x.parse().map_err(|_| unknown())).collect::<Result<_, _>>()?,
            None => vec![],
        };
        match (head, nums.as_slice()) {
            ("mu1", []) => Ok(EncodingKind::Mu1 { t: 1, u: 2 }),
            ("mu1", [t, u]) => Ok(EncodingKind::Mu1 { t: *t, u: *u }),
            ("mu2", []) => Ok(EncodingKind::Mu2 { t: 1 }),
            ("mu2", [t]) if *t >= 1 => Ok(EncodingKind::Mu2 { t: *t }),
            ("mu3", []) => Ok(EncodingKind::Mu3),
            ("mu4", []) => Ok(EncodingKind::Mu4),
            ("mu5", []) => Ok(EncodingKind::Mu5),
            ("mu5p", []) | ("mu5'", []) => Ok(EncodingKind::Mu5Prime),
            _ => Err(unknown()),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EncodingError {
    #[error("unknown encoding `{0}`")]
    UnknownName(String),
    #[error("structure is not in {0}")]
    NotInSource(GraphClass),
    #[error("{0} has no image formula: its image is not definable with set quantifiers over H")]
    NoImage(EncodingKind),
    #[error("not a boxed sentence `[*]ψ`")]
    NotBoxed,
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
}

/// Where an element of an encoded structure comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// Copy `j` (1-based) of source element `d`.
    Copy(usize, usize),
    /// Extra element `j` with `m < j ≤ n`.
    Extra(usize),
}

/// Id layout of an encoded structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Correspondence {
    pub m: usize,
    pub n: usize,
    /// Size of the source domain.
    pub base: usize,
}

impl Correspondence {
    pub fn copy(&self, j: usize, d: usize) -> usize {
        debug_assert!(1 <= j && j <= self.m && d < self.base);
        (j - 1) * self.base + d
    }

    pub fn extra(&self, j: usize) -> usize {
        debug_assert!(self.m < j && j <= self.n);
        self.m * self.base + (j - self.m - 1)
    }

    pub fn size(&self) -> usize {
        self.m * self.base + (self.n - self.m)
    }

    pub fn origin(&self, id: usize) -> Option<Origin> {
        if id < self.m * self.base {
            Some(Origin::Copy(id / self.base + 1, id % self.base))
        } else if id < self.size() {
            Some(Origin::Extra(id - self.m * self.base + self.m + 1))
        } else {
            None
        }
    }

    /// Ids of copy `h` if `h ≤ m`, else the singleton extra element `h`.
    pub fn points(&self, h: usize) -> Vec<usize> {
        if h <= self.m {
            (0..self.base).map(|d| self.copy(h, d)).collect()
        } else {
            vec![self.extra(h)]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoded {
    pub structure: Structure,
    pub corr: Correspondence,
}

#[derive(Debug, Clone)]
pub struct LinearEncoding {
    pub kind: EncodingKind,
    pub source: GraphClass,
    pub target: GraphClass,
    pub m: usize,
    pub n: usize,
    pub forward: ForwardKit,
    pub backward: BackwardKit,
    pub image: Option<Formula>,
}

fn rel(name: &str) -> Symbol {
    Symbol::relation(name, 2)
}

impl LinearEncoding {
    pub fn new(kind: EncodingKind) -> LinearEncoding {
        kits::build(kind)
    }

    pub fn name(&self) -> String {
        self.kind.to_string()
    }

    pub fn image_formula(&self) -> Result<&Formula, EncodingError> {
        self.image.as_ref().ok_or(EncodingError::NoImage(self.kind))
    }

    pub fn encode(&self, a: &Structure) -> Result<Encoded, EncodingError> {
        if !validate(a, &self.source) {
            return Err(EncodingError::NotInSource(self.source));
        }
        let big = a.size();
        let corr = Correspondence { m: self.m, n: self.n, base: big };
        let c = |j, d| corr.copy(j, d);
        let x = |j| corr.extra(j);
        let mut e = Structure::new(corr.size())?;
        for l in self.target.labels() {
            e.assign(&l, crate::structure::Value::set([]))?;
        }
        for r in self.target.relations() {
            e.assign(&r, crate::structure::Value::pairs([]))?;
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut labels: BTreeMap<Symbol, BTreeSet<usize>> = BTreeMap::new();
        match self.kind {
            EncodingKind::Mu1 { t, u } => {
                for i in 1..=t {
                    let members = a.set_members(&self.source.label(i)).expect("validated");
                    labels.insert(self.target.label(i), members.iter().map(|&d| c(1, d)).collect());
                }
                for i in 1..=u {
                    labels.insert(self.target.label(t + i), (0..big).map(|d| c(i + 1, d)).collect());
                    for d in 0..big {
                        edges.push((c(1, d), c(i + 1, d)));
                        edges.push((c(i + 1, d), c(1, d)));
                    }
                    for (d, d2) in a.pairs(&self.source.relation(i)).expect("validated") {
                        edges.push((c(i + 1, d), c(i + 1, d2)));
                    }
                }
            }
            EncodingKind::Mu2 { t } => {
                for (d, d2) in a.pairs(&rel("R")).expect("validated") {
                    edges.push((c(1, d), c(1, d2)));
                }
                for d in 0..big {
                    edges.push((c(1, d), x(3)));
                }
                for i in 1..=t {
                    for d in a.set_members(&self.source.label(i)).expect("validated") {
                        edges.push((c(1, d), x(i + 3)));
                    }
                    edges.push((x(i + 3), x(i + 2)));
                }
                for i in 0..=t {
                    edges.push((x(i + 3), x(2)));
                }
            }
            EncodingKind::Mu3 => {
                let pairs = a.pairs(&rel("R")).expect("validated");
                e.assign(&rel("R1"), crate::structure::Value::pairs(pairs.iter().copied()))?;
                e.assign(&rel("R2"), crate::structure::Value::pairs(pairs.iter().map(|&(p, q)| (q, p))))?;
                return Ok(Encoded { structure: e, corr });
            }
            EncodingKind::Mu4 => {
                let mut g = Vec::new();
                for d in 0..big {
                    g.push((c(1, d), c(2, d)));
                    g.push((c(1, d), c(3, d)));
                    g.push((c(2, d), x(4)));
                    g.push((c(3, d), x(5)));
                }
                for (d, d2) in a.pairs(&rel("R")).expect("validated") {
                    g.push((c(2, d), c(3, d2)));
                }
                g.push((x(5), x(6)));
                for (p, q) in g {
                    edges.push((p, q));
                    edges.push((q, p));
                }
                labels.insert(Symbol::set("P"), [x(4), x(5), x(6)].into());
            }
            EncodingKind::Mu5 | EncodingKind::Mu5Prime => {
                for (d, d2) in a.pairs(&rel("R")).expect("validated") {
                    edges.push((c(1, d), c(1, d2)));
                }
                for d in 0..big {
                    edges.push((c(1, d), x(2)));
                    edges.push((x(2), c(1, d)));
                }
                edges.push((x(2), x(3)));
                if self.kind == EncodingKind::Mu5 {
                    e.assign(&Symbol::position(), crate::structure::Value::Element(x(2)))?;
                }
            }
        }
        e.assign(&rel("R"), crate::structure::Value::pairs(edges))?;
        for (l, members) in labels {
            e.assign(&l, crate::structure::Value::set(members))?;
        }
        Ok(Encoded { structure: e, corr })
    }

    /// Recovers the source structure from an encoding produced by
    /// [`LinearEncoding::encode`].
    pub fn decode(&self, enc: &Encoded) -> Result<Structure, EncodingError> {
        let corr = enc.corr;
        let e = &enc.structure;
        let base = corr.base;
        let mut a = Structure::new(base)?;
        let back = |id: usize, j: usize| match corr.origin(id) {
            Some(Origin::Copy(jj, d)) if jj == j => Some(d),
            _ => None,
        };
        let target_pairs = |r: &Symbol| e.pairs(r).unwrap_or_default();
        match self.kind {
            EncodingKind::Mu1 { t, u } => {
                for i in 1..=t {
                    let members = e.set_members(&self.target.label(i)).unwrap_or_default();
                    a = a.with_set(&self.source.label(i), members.iter().filter_map(|&id| back(id, 1)))?;
                }
                for i in 1..=u {
                    let pairs = target_pairs(&rel("R"))
                        .into_iter()
                        .filter_map(|(p, q)| Some((back(p, i + 1)?, back(q, i + 1)?)))
                        .collect::<Vec<_>>();
                    a = a.with_pairs(&self.source.relation(i), pairs)?;
                }
            }
            EncodingKind::Mu2 { t } => {
                let pairs = target_pairs(&rel("R"));
                for i in 1..=t {
                    let target = corr.extra(i + 3);
                    a = a.with_set(
                        &self.source.label(i),
                        pairs.iter().filter(|&&(_, q)| q == target).filter_map(|&(p, _)| back(p, 1)),
                    )?;
                }
                let copied: Vec<_> = pairs.iter().filter_map(|&(p, q)| Some((back(p, 1)?, back(q, 1)?))).collect();
                a = a.with_pairs(&rel("R"), copied)?;
            }
            EncodingKind::Mu3 => {
                a = a.with_pairs(&rel("R"), target_pairs(&rel("R1")))?;
            }
            EncodingKind::Mu4 => {
                let pairs: Vec<_> =
                    target_pairs(&rel("R")).into_iter().filter_map(|(p, q)| Some((back(p, 2)?, back(q, 3)?))).collect();
                a = a.with_pairs(&rel("R"), pairs)?;
            }
            EncodingKind::Mu5 | EncodingKind::Mu5Prime => {
                let pairs: Vec<_> =
                    target_pairs(&rel("R")).into_iter().filter_map(|(p, q)| Some((back(p, 1)?, back(q, 1)?))).collect();
                a = a.with_pairs(&rel("R"), pairs)?;
            }
        }
        Ok(a)
    }
}

/// The encodings shipped with the crate, in a fixed order.
pub fn all_encodings() -> Vec<LinearEncoding> {
    let mut kinds = Vec::new();
    for t in 0..=1 {
        for u in 0..=2 {
            kinds.push(EncodingKind::Mu1 { t, u });
        }
    }
    kinds.extend([EncodingKind::Mu2 { t: 1 }, EncodingKind::Mu2 { t: 2 }]);
    kinds.extend([EncodingKind::Mu3, EncodingKind::Mu4, EncodingKind::Mu5, EncodingKind::Mu5Prime]);
    kinds.into_iter().map(LinearEncoding::new).collect()
}

fn strip_global_box(f: &Formula) -> Option<&Formula> {
    let Node::Not(inner) = f.node() else { return None };
    let Node::Diamond(Modality::Global, args) = inner.node() else { return None };
    match args[0].node() {
        Node::Not(body) => Some(body),
        _ => None,
    }
}

/// `[*](ψ₂ → ψ_φ)` for a sentence `φ` over `{R}`: true on `μ₅′(𝔇)` iff
/// `𝔇 ⊨ φ`.
pub fn boxed_forward(phi: &Formula) -> Result<Formula, EncodingError> {
    let mu5 = LinearEncoding::new(EncodingKind::Mu5);
    let psi = forward_translate(&mu5.forward, phi)?;
    Ok(Formula::global_box(Formula::implies(kits::mu5_hub(), psi)))
}

/// For `[*]ψ` with `ψ` over `{@, R}`, the sentence `[*](φ¹ ∧ φ² ∧ φ³)`
/// built from the backward family of `ψ` without `φ_ini`; it holds on `𝔇`
/// iff `μ₅′(𝔇) ⊨ [*]ψ`.
pub fn boxed_backward(boxed: &Formula) -> Result<Formula, EncodingError> {
    let psi = strip_global_box(boxed).ok_or(EncodingError::NotBoxed)?;
    let mu5 = LinearEncoding::new(EncodingKind::Mu5);
    let family = backward_family(&mu5.backward, psi)?;
    Ok(Formula::global_box(Formula::big_and(family)))
}

#[cfg(test)]
mod tests;
