//! Model checking on finite structures.
//!
//! Formulas are compiled once and evaluated on bit masks of
//! the domain, so domains are limited to 64 elements. Set quantifiers are
//! decided exactly, either by enumerating subsets or by a three-valued
//! branching search that prunes partial assignments already deciding the
//! body.

mod engine;
mod program;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::classes::GraphClass;
use crate::enumerate::enumerate_structures;
use crate::formula::Formula;
use crate::structure::{Structure, StructureError};
use crate::symbol::Symbol;

use engine::Engine;
use program::{compile, compile_with_params, Model, Program, VarId};

/// Largest domain the bit-mask evaluator handles.
pub const MAX_DOMAIN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Branch on single membership bits, pruning with partial evaluation.
    #[default]
    Propagate,
    /// Enumerate complete subsets per quantifier.
    Enumerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    pub max_domain_for_set_quant: usize,
    pub short_circuit: bool,
    pub strategy: Strategy,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { max_domain_for_set_quant: 16, short_circuit: true, strategy: Strategy::Propagate }
    }
}

impl EvalConfig {
    pub fn enumerate() -> EvalConfig {
        EvalConfig { strategy: Strategy::Enumerate, ..EvalConfig::default() }
    }

    pub fn with_cap(self, cap: usize) -> EvalConfig {
        EvalConfig { max_domain_for_set_quant: cap.max(1), ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Stats {
    /// Evaluations of a set-quantifier-free quantifier body.
    pub kernel_evals: u64,
    /// Nodes of the branching search.
    pub search_nodes: u64,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error(transparent)]
    Size(#[from] StructureError),
    #[error("free symbols {0:?} are not in the signature")]
    NotOverSignature(BTreeSet<Symbol>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub value: bool,
    /// False by stipulation: `missing` lists the free symbols outside the
    /// signature.
    pub stipulated: bool,
    pub missing: BTreeSet<Symbol>,
    pub stats: Stats,
}

impl Verdict {
    /// One-line report; stipulated verdicts are marked.
    pub fn report(&self) -> String {
        if self.stipulated {
            let names: Vec<&str> = self.missing.iter().map(Symbol::name).collect();
            format!("false (stipulated: {} not in signature)", names.join(", "))
        } else {
            self.value.to_string()
        }
    }
}

fn size_checks(a: &Structure, set_quantifiers: usize, cfg: &EvalConfig) -> Result<(), EvalError> {
    if a.size() > MAX_DOMAIN {
        return Err(StructureError::SizeLimit { what: "domain".into(), size: a.size(), cap: MAX_DOMAIN }.into());
    }
    if a.size() > cfg.max_domain_for_set_quant && set_quantifiers > 0 {
        return Err(StructureError::SizeLimit {
            what: "domain under a set quantifier".into(),
            size: a.size(),
            cap: cfg.max_domain_for_set_quant,
        }
        .into());
    }
    Ok(())
}

/// A formula compiled once for evaluation on many structures.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    prog: Program,
    free: BTreeSet<Symbol>,
    set_quantifiers: usize,
}

impl CompiledFormula {
    pub fn new(f: &Formula) -> CompiledFormula {
        CompiledFormula { prog: compile(f), free: f.free_symbols(), set_quantifiers: f.set_quantifiers() }
    }

    /// Evaluates at all points of `want`; requires `free(f) \ {@} ⊆ sig(a)`.
    fn masks(&self, a: &Structure, cfg: EvalConfig, want: u64) -> Result<(u64, Stats), EvalError> {
        size_checks(a, self.set_quantifiers, &cfg)?;
        let model = Model::new(a, &self.prog.rels);
        let mut engine = Engine::new(&self.prog, &model, a, cfg);
        let (t, _) = engine.run(want);
        Ok((t, engine.stats))
    }

    /// See [`check`].
    pub fn check(&self, a: &Structure, cfg: EvalConfig) -> Result<Verdict, EvalError> {
        let sig = a.sig();
        let missing: BTreeSet<Symbol> = self.free.difference(&sig).cloned().collect();
        if !missing.is_empty() {
            return Ok(Verdict { value: false, stipulated: true, missing, stats: Stats::default() });
        }
        let point = a.position().unwrap_or(0);
        let (t, stats) = self.masks(a, cfg, 1 << point)?;
        Ok(Verdict { value: t != 0, stipulated: false, missing, stats })
    }

    /// See [`satisfies`].
    pub fn satisfies(&self, a: &Structure, cfg: EvalConfig) -> Result<bool, EvalError> {
        Ok(self.check(a, cfg)?.value)
    }

    /// See [`satisfying_mask`].
    pub fn satisfying_mask(&self, a: &Structure, cfg: EvalConfig) -> Result<u64, EvalError> {
        let sig = a.sig();
        let missing: BTreeSet<Symbol> =
            self.free.iter().filter(|s| !s.is_position() && !sig.contains(s)).cloned().collect();
        if !missing.is_empty() {
            return Err(EvalError::NotOverSignature(missing));
        }
        Ok(self.masks(a, cfg, program::full_mask(a.size()))?.0)
    }
}

/// Model check with the stipulation and statistics reported.
pub fn check(a: &Structure, f: &Formula, cfg: EvalConfig) -> Result<Verdict, EvalError> {
    CompiledFormula::new(f).check(a, cfg)
}

/// `𝔄 ⊨ f`; false by stipulation when `f` is not a sentence over `sig(𝔄)`.
pub fn satisfies(a: &Structure, f: &Formula, cfg: EvalConfig) -> Result<bool, EvalError> {
    Ok(check(a, f, cfg)?.value)
}

/// `{a : 𝔄[@ ↦ a] ⊨ f}`.
pub fn satisfying_set(a: &Structure, f: &Formula, cfg: EvalConfig) -> Result<BTreeSet<usize>, EvalError> {
    Ok(mask_to_set(satisfying_mask(a, f, cfg)?))
}

/// Bit-mask form of [`satisfying_set`].
pub fn satisfying_mask(a: &Structure, f: &Formula, cfg: EvalConfig) -> Result<u64, EvalError> {
    CompiledFormula::new(f).satisfying_mask(a, cfg)
}

pub fn mask_to_set(m: u64) -> BTreeSet<usize> {
    (0..64).filter(|&i| m >> i & 1 == 1).collect()
}

/// A formula compiled against a structure, with extra set parameters that
/// may be assigned partially. Used by exhaustive checkers that evaluate one
/// formula under many assignments.
pub(crate) struct Prepared {
    model: Model,
    prog: Program,
    slots: Vec<VarId>,
    a: Structure,
}

impl Prepared {
    pub fn new(a: &Structure, f: &Formula, params: &[Symbol]) -> Result<Prepared, EvalError> {
        size_checks(a, f.set_quantifiers(), &EvalConfig::default().with_cap(MAX_DOMAIN))?;
        let sig = a.sig();
        let missing: BTreeSet<Symbol> = f
            .free_symbols()
            .into_iter()
            .filter(|s| !s.is_position() && !sig.contains(s) && !params.contains(s))
            .collect();
        if !missing.is_empty() {
            return Err(EvalError::NotOverSignature(missing));
        }
        let (prog, slots) = compile_with_params(f, params);
        let model = Model::new(a, &prog.rels);
        Ok(Prepared { model, prog, slots, a: a.clone() })
    }

    pub fn runner(&self) -> Runner<'_> {
        Runner { engine: Engine::new(&self.prog, &self.model, &self.a, EvalConfig::default()), slots: &self.slots }
    }
}

pub(crate) struct Runner<'a> {
    engine: Engine<'a>,
    slots: &'a [VarId],
}

impl Runner<'_> {
    /// Assigns parameter `i`: `tin` are known members, `fout` known
    /// non-members; the remaining elements stay unknown.
    pub fn set(&mut self, i: usize, tin: u64, fout: u64) {
        self.engine.set_set(self.slots[i], tin, fout);
    }

    /// Kleene masks `(t, f)` at the points of `want`.
    pub fn run(&mut self, want: u64) -> (u64, u64) {
        self.engine.run(want)
    }
}

/// Members of `enumerate_structures(class, max_size, dedup)` satisfying `f`.
pub fn defines(
    f: &Formula,
    class: GraphClass,
    max_size: usize,
    dedup: bool,
    cfg: EvalConfig,
) -> Result<Vec<Structure>, EvalError> {
    let mut out = Vec::new();
    for a in enumerate_structures(&class, max_size, dedup)? {
        if satisfies(&a, f, cfg)? {
            out.push(a);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn path() -> Structure {
        Structure::new(2)
            .unwrap()
            .with_pairs(&Symbol::relation("R", 2), [(0, 1)])
            .unwrap()
            .with_element(&Symbol::position(), 0)
            .unwrap()
    }

    fn sat(a: &Structure, text: &str) -> bool {
        let f = parse_formula(text).unwrap();
        let p = satisfies(a, &f, EvalConfig::default()).unwrap();
        let e = satisfies(a, &f, EvalConfig::enumerate()).unwrap();
        assert_eq!(p, e, "{text}");
        p
    }

    #[test]
    fn examples() {
        let a = path();
        assert!(sat(&a, "<R>true"));
        assert!(!sat(&a, "[R]false"));
        assert!(sat(&a, "EX P. P & [R]!P"));
        assert!(!sat(&a, "EX P. P & [R]P & <R>!P"));
        let v = check(&a, &parse_formula("P").unwrap(), EvalConfig::default()).unwrap();
        assert!(!v.value && v.stipulated);
        assert!(v.report().contains("stipulated"));
    }

    #[test]
    fn satisfying_sets() {
        let a = path();
        let cfg = EvalConfig::default();
        assert_eq!(satisfying_set(&a, &Formula::top(), cfg).unwrap(), [0, 1].into());
        assert_eq!(satisfying_set(&a, &Formula::bot(), cfg).unwrap(), BTreeSet::new());
        assert_eq!(satisfying_set(&a, &parse_formula("<R>true").unwrap(), cfg).unwrap(), [0].into());
        assert_eq!(satisfying_set(&a, &parse_formula("<~R>true").unwrap(), cfg).unwrap(), [1].into());
        assert!(satisfying_set(&a, &parse_formula("Q").unwrap(), cfg).is_err());
    }

    #[test]
    fn first_order_and_global() {
        let a = path();
        assert!(sat(&a, "E x. R(@, x)"));
        assert!(!sat(&a, "A x. R(@, x)"));
        assert!(sat(&a, "E @. [R]false"));
        assert!(sat(&a, "<*>[R]false & !([R]false)"));
        assert!(sat(&a, "A x. A y. R(x, y) -> !eq(x, y)"));
        assert!(sat(&a, "EX P. (A x. P(x) <-> R(@, x)) & <R>P & !P"));
    }

    #[test]
    fn polyadic_backward_reverses_tuples() {
        let s = Symbol::relation("S", 3);
        let a = Structure::new(3)
            .unwrap()
            .with_tuples(&s, [vec![0, 1, 2]])
            .unwrap()
            .with_set(&Symbol::set("P"), [1])
            .unwrap()
            .with_set(&Symbol::set("Q"), [2])
            .unwrap();
        let at = |e| a.clone().with_element(&Symbol::position(), e).unwrap();
        assert!(sat(&at(0), "<S>(P, Q)"));
        assert!(!sat(&at(0), "<S>(Q, P)"));
        // (a_2, a_1, @) ∈ S: a_1 = 1 and a_2 = 0.
        assert!(sat(&at(2), "<~S>(P, !P & !Q)"));
        assert!(!sat(&at(2), "<~S>(!P & !Q, P)"));
        assert!(sat(&at(1), "[~S](false, false)"));
    }

    #[test]
    fn size_limits() {
        let big = Structure::new(17).unwrap().with_pairs(&Symbol::relation("R", 2), []).unwrap();
        let f = parse_formula("EX P. <*>P").unwrap();
        assert!(matches!(satisfies(&big, &f, EvalConfig::default()), Err(EvalError::Size(_))));
        assert!(satisfies(&big, &f, EvalConfig::default().with_cap(17)).unwrap());
        assert!(satisfies(&big, &parse_formula("<*>true").unwrap(), EvalConfig::default()).unwrap());
        let huge = Structure::new(65).unwrap();
        assert!(satisfies(&huge, &Formula::global(Formula::top()), EvalConfig::default()).is_err());
    }

    #[test]
    fn nested_alternation() {
        // Every set containing @ has a member with no R-successor in it.
        let a = Structure::new(3)
            .unwrap()
            .with_pairs(&Symbol::relation("R", 2), [(0, 1), (1, 2)])
            .unwrap()
            .with_element(&Symbol::position(), 0)
            .unwrap();
        assert!(sat(&a, "AX P. P -> (EX Q. <*>(Q & P) & [*](Q -> [R]!P))"));
        let cyc = a.clone().with_pairs(&Symbol::relation("R", 2), [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!sat(&cyc, "AX P. P -> (EX Q. <*>(Q & P & [R]!P))"));
        assert!(sat(&cyc, "EX P. EX Q. P & [R]Q & [R][R]!P & [R][R]!Q"));
    }
}
