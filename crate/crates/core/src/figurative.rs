//! Figurative inclusion between explicitly enumerated set families, and
//! checkers for the two transfer lemmas built on it.
//!
//! `L ⊑_μ M` holds when every member `S` of `L` has some member `T` of `M`
//! with `μ(S) = T ∩ μ(C)`, where `C` is the universe of `L`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub type Id = usize;
pub type Members = BTreeSet<Id>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FigError {
    #[error("member {0:?} is not a subset of the universe")]
    MemberOutsideUniverse(Vec<Id>),
    #[error("{0} and {1} are both mapped to {2}")]
    NotInjective(Id, Id, Id),
    #[error("invalid injection: {0} is not in the source universe")]
    SourceOutside(Id),
    #[error("invalid injection: {0} is not in the target universe")]
    TargetOutside(Id),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFamily {
    pub universe: Members,
    pub members: Vec<Members>,
}

impl FiniteFamily {
    pub fn new(universe: Members, members: Vec<Members>) -> Result<FiniteFamily, FigError> {
        if let Some(m) = members.iter().find(|m| !m.is_subset(&universe)) {
            return Err(FigError::MemberOutsideUniverse(m.iter().copied().collect()));
        }
        Ok(FiniteFamily { universe, members })
    }

    pub fn contains(&self, s: &Members) -> bool {
        self.members.contains(s)
    }

    /// Member-wise containment `self ⊆ other`.
    pub fn is_subfamily(&self, other: &FiniteFamily) -> bool {
        self.members.iter().all(|m| other.contains(m))
    }

    /// Members common to both families, over the union of the universes.
    pub fn intersection(&self, other: &FiniteFamily) -> FiniteFamily {
        let mut members: Vec<Members> = Vec::new();
        for m in &self.members {
            if other.contains(m) && !members.contains(m) {
                members.push(m.clone());
            }
        }
        FiniteFamily { universe: self.universe.union(&other.universe).copied().collect(), members }
    }

    /// Whether `S ∩ T` is a member for all members `S`, `T`.
    pub fn closed_under_intersection(&self) -> bool {
        self.members
            .iter()
            .all(|s| self.members.iter().all(|t| self.contains(&s.intersection(t).copied().collect())))
    }
}

/// A finite partial injective map.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartialInjection {
    pairs: BTreeMap<Id, Id>,
}

impl PartialInjection {
    pub fn new<I: IntoIterator<Item = (Id, Id)>>(pairs: I) -> Result<PartialInjection, FigError> {
        let mut map = BTreeMap::new();
        let mut seen: BTreeMap<Id, Id> = BTreeMap::new();
        for (a, b) in pairs {
            if let Some(&old) = map.get(&a) {
                if old != b {
                    return Err(FigError::NotInjective(a, a, b));
                }
                continue;
            }
            if let Some(&other) = seen.get(&b) {
                return Err(FigError::NotInjective(other, a, b));
            }
            map.insert(a, b);
            seen.insert(b, a);
        }
        Ok(PartialInjection { pairs: map })
    }

    pub fn identity(universe: &Members) -> PartialInjection {
        PartialInjection { pairs: universe.iter().map(|&a| (a, a)).collect() }
    }

    pub fn pairs(&self) -> &BTreeMap<Id, Id> {
        &self.pairs
    }

    pub fn get(&self, a: Id) -> Option<Id> {
        self.pairs.get(&a).copied()
    }

    pub fn domain(&self) -> Members {
        self.pairs.keys().copied().collect()
    }

    pub fn range(&self) -> Members {
        self.pairs.values().copied().collect()
    }

    pub fn is_total_on(&self, universe: &Members) -> bool {
        universe.iter().all(|a| self.pairs.contains_key(a))
    }

    /// `μ(S)`: images of the elements of `S` where `μ` is defined.
    pub fn image(&self, s: &Members) -> Members {
        s.iter().filter_map(|a| self.get(*a)).collect()
    }

    pub fn inverse(&self) -> PartialInjection {
        PartialInjection { pairs: self.pairs.iter().map(|(&a, &b)| (b, a)).collect() }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PartialInjection) -> PartialInjection {
        PartialInjection { pairs: self.pairs.iter().filter_map(|(&a, &b)| other.get(b).map(|c| (a, c))).collect() }
    }

    fn check_range(&self, from: &Members, to: &Members) -> Result<(), FigError> {
        for (&a, &b) in &self.pairs {
            if !from.contains(&a) {
                return Err(FigError::SourceOutside(a));
            }
            if !to.contains(&b) {
                return Err(FigError::TargetOutside(b));
            }
        }
        Ok(())
    }
}

/// The first member of `l` without a matching member of `m`, if any.
pub fn forward_counterexample(l: &FiniteFamily, m: &FiniteFamily, mu: &PartialInjection) -> Result<Option<Members>, FigError> {
    mu.check_range(&l.universe, &m.universe)?;
    let tunnel = mu.image(&l.universe);
    Ok(l.members
        .iter()
        .find(|s| {
            let target = mu.image(s);
            !m.members.iter().any(|t| t.intersection(&tunnel).copied().collect::<Members>() == target)
        })
        .cloned())
}

/// `L ⊑_μ M`.
pub fn forward_included(l: &FiniteFamily, m: &FiniteFamily, mu: &PartialInjection) -> Result<bool, FigError> {
    Ok(forward_counterexample(l, m, mu)?.is_none())
}

/// `L ⊒_μ M`, that is `M ⊑_{μ⁻¹} L`.
pub fn backward_included(l: &FiniteFamily, m: &FiniteFamily, mu: &PartialInjection) -> Result<bool, FigError> {
    mu.check_range(&l.universe, &m.universe)?;
    forward_included(m, l, &mu.inverse())
}

/// Both [`forward_included`] and [`backward_included`].
pub fn forward_equal(l: &FiniteFamily, m: &FiniteFamily, mu: &PartialInjection) -> Result<bool, FigError> {
    Ok(forward_included(l, m, mu)? && backward_included(l, m, mu)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaVerdict {
    /// The conclusion holds; the string explains how.
    Pass(String),
    /// The hypotheses hold but the conclusion fails.
    Fail(String),
    /// Some hypothesis fails.
    Inapplicable(String),
}

impl LemmaVerdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, LemmaVerdict::Fail(_))
    }
}

impl fmt::Display for LemmaVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LemmaVerdict::Pass(s) => write!(f, "pass: {s}"),
            LemmaVerdict::Fail(s) => write!(f, "FAIL: {s}"),
            LemmaVerdict::Inapplicable(s) => write!(f, "inapplicable: {s}"),
        }
    }
}

/// Families and a map `μ: C → D`; `l1, l2` live over `C`, `m1, m2` over `D`.
#[derive(Debug, Clone)]
pub struct LemmaInstance {
    pub l1: FiniteFamily,
    pub l2: FiniteFamily,
    pub m1: FiniteFamily,
    pub m2: FiniteFamily,
    pub mu: PartialInjection,
}

fn show(s: &Members) -> String {
    let items: Vec<String> = s.iter().map(Id::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn not_subfamily_witness(a: &FiniteFamily, b: &FiniteFamily) -> Option<Members> {
    a.members.iter().find(|m| !b.contains(m)).cloned()
}

/// With `μ` total and injective, `L2 ⊑_μ M2` and `L1 ⊒_μ M1`: if `L2 ⊄ L1`
/// then `M2 ⊄ M1`.
pub fn lemma4_check(x: &LemmaInstance) -> Result<LemmaVerdict, FigError> {
    let c = x.l1.universe.union(&x.l2.universe).copied().collect::<Members>();
    let d = x.m1.universe.union(&x.m2.universe).copied().collect::<Members>();
    x.mu.check_range(&c, &d)?;
    if !x.mu.is_total_on(&c) {
        return Ok(LemmaVerdict::Inapplicable("μ is not total".into()));
    }
    let (l1, l2) = (FiniteFamily { universe: c.clone(), ..x.l1.clone() }, FiniteFamily { universe: c, ..x.l2.clone() });
    let (m1, m2) = (FiniteFamily { universe: d.clone(), ..x.m1.clone() }, FiniteFamily { universe: d, ..x.m2.clone() });
    if !forward_included(&l2, &m2, &x.mu)? {
        return Ok(LemmaVerdict::Inapplicable("L2 is not forward included in M2".into()));
    }
    if !backward_included(&l1, &m1, &x.mu)? {
        return Ok(LemmaVerdict::Inapplicable("L1 is not backward included in M1".into()));
    }
    // Checked contrapositively: M2 ⊆ M1 must force L2 ⊆ L1.
    Ok(match (not_subfamily_witness(&l2, &l1), not_subfamily_witness(&m2, &m1)) {
        (None, _) => LemmaVerdict::Pass("L2 ⊆ L1, nothing to transfer".into()),
        (Some(s), Some(t)) => LemmaVerdict::Pass(format!("{} ∈ L2 \\ L1 and {} ∈ M2 \\ M1", show(&s), show(&t))),
        (Some(s), None) => LemmaVerdict::Fail(format!("{} ∈ L2 \\ L1 but M2 ⊆ M1", show(&s))),
    })
}

/// With `μ(C)` in `M1 ∩ M2` and both `M`-families closed under
/// intersection, `L1 ⊑_μ M1` and `L2 ⊑_μ M2` give
/// `L1 ∩ L2 ⊑_μ M1 ∩ M2`.
pub fn lemma5_check(x: &LemmaInstance) -> Result<LemmaVerdict, FigError> {
    let c = x.l1.universe.union(&x.l2.universe).copied().collect::<Members>();
    let d = x.m1.universe.union(&x.m2.universe).copied().collect::<Members>();
    x.mu.check_range(&c, &d)?;
    let (l1, l2) = (FiniteFamily { universe: c.clone(), ..x.l1.clone() }, FiniteFamily { universe: c.clone(), ..x.l2.clone() });
    let (m1, m2) = (FiniteFamily { universe: d.clone(), ..x.m1.clone() }, FiniteFamily { universe: d, ..x.m2.clone() });
    let tunnel = x.mu.image(&c);
    if !m1.contains(&tunnel) || !m2.contains(&tunnel) {
        return Ok(LemmaVerdict::Inapplicable("μ(C) is not a member of both M1 and M2".into()));
    }
    if !m1.closed_under_intersection() || !m2.closed_under_intersection() {
        return Ok(LemmaVerdict::Inapplicable("M1 or M2 is not closed under intersection".into()));
    }
    if !forward_included(&l1, &m1, &x.mu)? || !forward_included(&l2, &m2, &x.mu)? {
        return Ok(LemmaVerdict::Inapplicable("L1 ⊑ M1 or L2 ⊑ M2 fails".into()));
    }
    let both = l1.intersection(&l2);
    Ok(match forward_counterexample(&both, &m1.intersection(&m2), &x.mu)? {
        None => LemmaVerdict::Pass(format!("all {} common members of L1, L2 pass", both.members.len())),
        Some(s) => LemmaVerdict::Fail(format!("{} ∈ L1 ∩ L2 has no counterpart in M1 ∩ M2", show(&s))),
    })
}

/// Text format:
///
/// ```text
/// family
/// universe 0 1 2
/// member 0 1
/// member
/// ```
pub fn parse_family(text: &str) -> Result<FiniteFamily, FigError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "family")?;
    let mut universe = None;
    let mut members = Vec::new();
    for (n, l) in lines {
        let mut words = l.split_whitespace();
        let kw = words.next().unwrap_or_default();
        let ids = words.map(|w| parse_id(w, n)).collect::<Result<Members, FigError>>()?;
        match kw {
            "universe" if universe.is_none() => universe = Some(ids),
            "member" => members.push(ids),
            _ => return Err(FigError::Syntax { line: n, message: format!("unexpected `{kw}`") }),
        }
    }
    let universe = universe.ok_or(FigError::Syntax { line: 1, message: "missing `universe` line".into() })?;
    FiniteFamily::new(universe, members)
}

pub fn print_family(f: &FiniteFamily) -> String {
    let mut out = String::from("family\n");
    let ids = |s: &Members| s.iter().map(|a| format!(" {a}")).collect::<String>();
    out.push_str(&format!("universe{}\n", ids(&f.universe)));
    for m in &f.members {
        out.push_str(&format!("member{}\n", ids(m)));
    }
    out
}

/// Text format: an `injection` header followed by `a -> b` lines.
pub fn parse_injection(text: &str) -> Result<PartialInjection, FigError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "injection")?;
    let mut pairs = Vec::new();
    for (n, l) in lines {
        let (a, b) = l.split_once("->").ok_or(FigError::Syntax { line: n, message: "expected `a -> b`".into() })?;
        pairs.push((parse_id(a.trim(), n)?, parse_id(b.trim(), n)?));
    }
    PartialInjection::new(pairs)
}

pub fn print_injection(mu: &PartialInjection) -> String {
    let mut out = String::from("injection\n");
    for (a, b) in mu.pairs() {
        out.push_str(&format!("{a} -> {b}\n"));
    }
    out
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_once('#').map_or(l, |(a, _)| a).trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn expect_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, header: &str) -> Result<(), FigError> {
    match lines.next() {
        Some((_, l)) if l == header => Ok(()),
        Some((n, _)) => Err(FigError::Syntax { line: n, message: format!("expected `{header}` header") }),
        None => Err(FigError::Syntax { line: 1, message: "empty input".into() }),
    }
}

fn parse_id(w: &str, line: usize) -> Result<Id, FigError> {
    w.parse().map_err(|_| FigError::Syntax { line, message: format!("bad id `{w}`") })
}
