//! Sentence translations: the standard translation into first-order logic
//! and the kit-driven translators across linear encodings.
//!
//! A forward kit turns a sentence about `𝔄` into one about `μ(𝔄)`; a
//! backward kit goes the other way. Kits are plain formula tables with
//! placeholder set symbols (`$Y`, `$Y<i>`, `$X<i>_<j>`, `$X_<j>`), so they
//! can be printed, parsed and audited by [`check_kit`].

mod check;
mod kit_text;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::formula::{in_fragment, rename_bound_sets, substitute_point, substitute_sets, Formula, Fragment, Modality, Node, SubstError};
use crate::symbol::{
    fresh_like, fresh_symbol, placeholder_xij, placeholder_xj, placeholder_y, placeholder_yi, Symbol, SymbolKind,
};

pub use check::{check_backward_kit, check_forward_kit, check_kit, CheckError, ClauseReport, KitReport};
pub use kit_text::{parse_backward_kit, parse_forward_kit, print_backward_kit, print_forward_kit};

/// Default cap on `(n - m) · #set quantifiers` for backward translation.
pub const BLOWUP_BUDGET: usize = 12;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TranslateError {
    #[error("formula is not in {0}")]
    Fragment(Fragment),
    #[error("formula is not a sentence over the signature; free: {0:?}")]
    NotSentence(BTreeSet<Symbol>),
    #[error("set quantifier below a modality or element quantifier")]
    QuantifierInKernel,
    #[error("kit has no entry for {0}")]
    IncompleteKit(String),
    #[error("backward translation would need 2^{exponent} disjuncts (budget {budget})")]
    BlowUp { exponent: usize, budget: usize },
    #[error(transparent)]
    Subst(#[from] SubstError),
}

/// Formulas realizing forward translation from `source_fragment` on the
/// source class to `target_fragment` on the image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForwardKit {
    pub source_sig: BTreeSet<Symbol>,
    pub target_sig: BTreeSet<Symbol>,
    pub source_fragment: Fragment,
    pub target_fragment: Fragment,
    /// `ψ_P` for the element and set symbols of the source signature.
    pub psi_atom: BTreeMap<Symbol, Formula>,
    /// `ψ_R`, `ψ_{R⁻¹}`, `ψ_{T•}` over placeholders `$Y1..$Yk`.
    pub psi_rel: BTreeMap<Modality, Formula>,
    /// `ψ_ini` over placeholder `$Y`.
    pub psi_ini: Formula,
}

/// Formulas realizing backward translation with parameters `m ≤ n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackwardKit {
    pub source_sig: BTreeSet<Symbol>,
    pub target_sig: BTreeSet<Symbol>,
    pub source_fragment: Fragment,
    pub target_fragment: Fragment,
    pub m: usize,
    pub n: usize,
    /// `φ_Q^h` for element and set symbols `Q` of the target signature.
    pub phi_atom: BTreeMap<(Symbol, usize), Formula>,
    /// `φ_S^h` over placeholders `$X<i>_<j>`.
    pub phi_rel: BTreeMap<(Modality, usize), Formula>,
    /// `φ_ini` over placeholders `$X_<j>`.
    pub phi_ini: Formula,
}

/// Modalities a kit for `frag` must cover over signature `sig`.
pub fn required_modalities(sig: &BTreeSet<Symbol>, frag: Fragment) -> Vec<Modality> {
    let mut out = Vec::new();
    for r in sig.iter().filter(|s| s.arity() >= 2) {
        out.push(Modality::Rel(r.clone()));
        if frag.backward() {
            out.push(Modality::Inv(r.clone()));
        }
    }
    if frag.global() {
        out.push(Modality::Global);
    }
    out
}

/// Element and set symbols other than `@`.
pub(crate) fn atom_symbols(sig: &BTreeSet<Symbol>) -> impl Iterator<Item = &Symbol> {
    sig.iter().filter(|s| (s.is_element() || s.is_set()) && !s.is_position())
}

impl ForwardKit {
    /// Entries required by the kit's fragments that are missing.
    pub fn missing_entries(&self) -> Vec<String> {
        let mut out: Vec<String> =
            atom_symbols(&self.source_sig).filter(|s| !self.psi_atom.contains_key(s)).map(|s| format!("{s:?}")).collect();
        for m in required_modalities(&self.source_sig, self.source_fragment) {
            if !self.psi_rel.contains_key(&m) {
                out.push(format!("{m:?}"));
            }
        }
        out
    }

    fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s: BTreeSet<Symbol> = self.source_sig.union(&self.target_sig).cloned().collect();
        for f in self.psi_atom.values().chain(self.psi_rel.values()).chain([&self.psi_ini]) {
            s.extend(f.all_symbols());
        }
        s
    }
}

impl BackwardKit {
    pub fn missing_entries(&self) -> Vec<String> {
        let mut out = Vec::new();
        for h in 1..=self.n {
            for s in atom_symbols(&self.target_sig) {
                if !self.phi_atom.contains_key(&(s.clone(), h)) {
                    out.push(format!("{s:?}^{h}"));
                }
            }
            for m in required_modalities(&self.target_sig, self.target_fragment) {
                if !self.phi_rel.contains_key(&(m.clone(), h)) {
                    out.push(format!("{m:?}^{h}"));
                }
            }
        }
        out
    }

    fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s: BTreeSet<Symbol> = self.source_sig.union(&self.target_sig).cloned().collect();
        for f in self.phi_atom.values().chain(self.phi_rel.values()).chain([&self.phi_ini]) {
            s.extend(f.all_symbols());
        }
        s
    }
}

fn sentence_check(f: &Formula, sig: &BTreeSet<Symbol>) -> Result<(), TranslateError> {
    let extra: BTreeSet<Symbol> = f.free_symbols().difference(sig).cloned().collect();
    if extra.is_empty() {
        Ok(())
    } else {
        Err(TranslateError::NotSentence(extra))
    }
}

fn bound_sets(f: &Formula) -> BTreeSet<Symbol> {
    fn go(f: &Formula, out: &mut BTreeSet<Symbol>) {
        if let Node::ExistsSet(p, _) = f.node() {
            out.insert(p.clone());
        }
        for c in f.children() {
            go(c, out);
        }
    }
    let mut out = BTreeSet::new();
    go(f, &mut out);
    out
}

/// The standard translation of a HBG formula into FO. The result has the
/// same free symbols; `@` stays free wherever it was.
pub fn std_translate(f: &Formula) -> Result<Formula, TranslateError> {
    if !in_fragment(f, Fragment::HBG) {
        return Err(TranslateError::Fragment(Fragment::HBG));
    }
    let at = Symbol::position();
    fn go(f: &Formula, at: &Symbol, memo: &mut HashMap<usize, Formula>) -> Result<Formula, TranslateError> {
        if let Some(r) = memo.get(&f.id()) {
            return Ok(r.clone());
        }
        let out = match f.node() {
            Node::Nominal(q) => Formula::eq(at, q),
            Node::SetAtom(p) => Formula::set_app(p, at),
            Node::Not(a) => Formula::not(go(a, at, memo)?),
            Node::Or(a, b) => Formula::or(go(a, at, memo)?, go(b, at, memo)?),
            Node::Diamond(Modality::Global, args) => Formula::exists_elem(at, go(&args[0], at, memo)?),
            Node::Diamond(m @ (Modality::Rel(r) | Modality::Inv(r)), args) => {
                let psis: Vec<Formula> = args.iter().map(|a| go(a, at, memo)).collect::<Result<_, _>>()?;
                let mut avoid = BTreeSet::new();
                for p in &psis {
                    avoid.extend(p.free_symbols());
                }
                avoid.insert(r.clone());
                let mut xs = Vec::new();
                for _ in 0..psis.len() {
                    let x = fresh_symbol(SymbolKind::Element, &avoid);
                    avoid.insert(x.clone());
                    xs.push(x);
                }
                let mut tuple = Vec::with_capacity(xs.len() + 1);
                if matches!(m, Modality::Inv(_)) {
                    tuple.extend(xs.iter().rev().cloned());
                    tuple.push(at.clone());
                } else {
                    tuple.push(at.clone());
                    tuple.extend(xs.iter().cloned());
                }
                let mut body = Formula::rel_app(r, &tuple);
                for (p, x) in psis.iter().zip(&xs) {
                    body = Formula::and(body, substitute_point(p, x)?);
                }
                xs.iter().rev().fold(body, |acc, x| Formula::exists_elem(x, acc))
            }
            _ => unreachable!("checked to be hybrid"),
        };
        memo.insert(f.id(), out.clone());
        Ok(out)
    }
    go(f, &at, &mut HashMap::new())
}

/// Translates a sentence over the kit's source signature into one over
/// the target signature that holds on `μ(𝔄)` iff the input holds on `𝔄`.
/// Set quantifiers may only occur above the kernel.
pub fn forward_translate(kit: &ForwardKit, phi: &Formula) -> Result<Formula, TranslateError> {
    sentence_check(phi, &kit.source_sig)?;
    if !in_fragment(phi, kit.source_fragment.with_sets()) {
        return Err(TranslateError::Fragment(kit.source_fragment.with_sets()));
    }
    let phi = rename_bound_sets(phi, &kit.symbols());
    let bound = bound_sets(&phi);
    let mut t = Forward { kit, bound: &bound, memo: HashMap::new() };
    t.top(&phi)
}

struct Forward<'a> {
    kit: &'a ForwardKit,
    bound: &'a BTreeSet<Symbol>,
    memo: HashMap<usize, Formula>,
}

impl Forward<'_> {
    fn top(&mut self, f: &Formula) -> Result<Formula, TranslateError> {
        if f.set_quantifiers() == 0 {
            let k = self.kernel(f)?;
            let b = BTreeMap::from([(placeholder_y(), k)]);
            return Ok(substitute_sets(&self.kit.psi_ini, &b)?);
        }
        match f.node() {
            Node::Not(a) => Ok(Formula::not(self.top(a)?)),
            Node::Or(a, b) => Ok(Formula::or(self.top(a)?, self.top(b)?)),
            Node::ExistsSet(z, body) => Ok(Formula::exists_set(z, self.top(body)?)),
            _ => Err(TranslateError::QuantifierInKernel),
        }
    }

    fn kernel(&mut self, f: &Formula) -> Result<Formula, TranslateError> {
        if let Some(r) = self.memo.get(&f.id()) {
            return Ok(r.clone());
        }
        let atom = |s: &Symbol| {
            self.kit.psi_atom.get(s).cloned().ok_or_else(|| TranslateError::IncompleteKit(format!("{s:?}")))
        };
        let out = match f.node() {
            Node::Nominal(q) if q.is_position() => f.clone(),
            Node::SetAtom(z) if self.bound.contains(z) => f.clone(),
            Node::Nominal(q) | Node::SetAtom(q) => atom(q)?,
            Node::Not(a) => Formula::not(self.kernel(a)?),
            Node::Or(a, b) => Formula::or(self.kernel(a)?, self.kernel(b)?),
            Node::Diamond(m, args) => {
                let psi = self.kit.psi_rel.get(m).ok_or_else(|| TranslateError::IncompleteKit(format!("{m:?}")))?;
                let mut b = BTreeMap::new();
                for (i, a) in args.iter().enumerate() {
                    b.insert(placeholder_yi(i + 1), self.kernel(a)?);
                }
                substitute_sets(psi, &b)?
            }
            _ => return Err(TranslateError::Fragment(self.kit.source_fragment)),
        };
        self.memo.insert(f.id(), out.clone());
        Ok(out)
    }
}

/// Translates a sentence over the kit's target signature into one over the
/// source signature that holds on `𝔄` iff the input holds on `μ(𝔄)`.
pub fn backward_translate(kit: &BackwardKit, psi: &Formula) -> Result<Formula, TranslateError> {
    backward_translate_with_budget(kit, psi, BLOWUP_BUDGET)
}

pub fn backward_translate_with_budget(kit: &BackwardKit, psi: &Formula, budget: usize) -> Result<Formula, TranslateError> {
    let (psi, mut t) = Backward::setup(kit, psi, &kit.target_sig, budget)?;
    t.top(&psi)
}

struct Backward<'a> {
    kit: &'a BackwardKit,
    /// `Z ↦ (Z^1, .., Z^n)`.
    copies: BTreeMap<Symbol, Vec<Symbol>>,
    memo: HashMap<usize, Vec<Formula>>,
}

impl Backward<'_> {
    fn top(&mut self, f: &Formula) -> Result<Formula, TranslateError> {
        if f.set_quantifiers() == 0 {
            let family = self.family(f)?;
            let b = family.into_iter().enumerate().map(|(j, g)| (placeholder_xj(j + 1), g)).collect();
            return Ok(substitute_sets(&self.kit.phi_ini, &b)?);
        }
        match f.node() {
            Node::Not(a) => Ok(Formula::not(self.top(a)?)),
            Node::Or(a, b) => Ok(Formula::or(self.top(a)?, self.top(b)?)),
            Node::ExistsSet(z, body) => {
                let inner = self.top(body)?;
                self.expand(z, &inner)
            }
            _ => Err(TranslateError::QuantifierInKernel),
        }
    }

    fn family(&mut self, f: &Formula) -> Result<Vec<Formula>, TranslateError> {
        if let Some(r) = self.memo.get(&f.id()) {
            return Ok(r.clone());
        }
        let n = self.kit.n;
        let out = match f.node() {
            Node::Nominal(q) if q.is_position() => vec![f.clone(); n],
            Node::SetAtom(z) if self.copies.contains_key(z) => self.copies[z].iter().map(Formula::set).collect(),
            Node::Nominal(q) | Node::SetAtom(q) => (1..=n)
                .map(|h| {
                    self.kit
                        .phi_atom
                        .get(&(q.clone(), h))
                        .cloned()
                        .ok_or_else(|| TranslateError::IncompleteKit(format!("{q:?}^{h}")))
                })
                .collect::<Result<_, _>>()?,
            Node::Not(a) => self.family(a)?.into_iter().map(Formula::not).collect(),
            Node::Or(a, b) => {
                let (fa, fb) = (self.family(a)?, self.family(b)?);
                fa.into_iter().zip(fb).map(|(x, y)| Formula::or(x, y)).collect()
            }
            Node::Diamond(m, args) => {
                let families: Vec<Vec<Formula>> = args.iter().map(|a| self.family(a)).collect::<Result<_, _>>()?;
                let mut b = BTreeMap::new();
                for (i, fam) in families.iter().enumerate() {
                    for (j, g) in fam.iter().enumerate() {
                        b.insert(placeholder_xij(i + 1, j + 1), g.clone());
                    }
                }
                (1..=n)
                    .map(|h| {
                        let phi = self
                            .kit
                            .phi_rel
                            .get(&(m.clone(), h))
                            .ok_or_else(|| TranslateError::IncompleteKit(format!("{m:?}^{h}")))?;
                        Ok(substitute_sets(phi, &b)?)
                    })
                    .collect::<Result<_, TranslateError>>()?
            }
            _ => return Err(TranslateError::Fragment(self.kit.target_fragment)),
        };
        self.memo.insert(f.id(), out.clone());
        Ok(out)
    }
}

/// The translation of a sentence `ψ` with `φ_ini` skipped: the family
/// `(φ_ψ^h)` with `𝔄[@ ↦ a] ⊨ φ_ψ^h` iff `μ(𝔄)[@ ↦ b] ⊨ ψ`, where `b` is
/// `(h, a)` for `h ≤ m` and `h` otherwise. Set quantifiers are handled as in
/// [`backward_translate`], per member of the family.
pub fn backward_family(kit: &BackwardKit, psi: &Formula) -> Result<Vec<Formula>, TranslateError> {
    let mut sig = kit.target_sig.clone();
    sig.insert(Symbol::position());
    let (psi, mut t) = Backward::setup(kit, psi, &sig, BLOWUP_BUDGET)?;
    t.top_family(&psi)
}

impl<'a> Backward<'a> {
    fn setup(
        kit: &'a BackwardKit,
        psi: &Formula,
        sig: &BTreeSet<Symbol>,
        budget: usize,
    ) -> Result<(Formula, Backward<'a>), TranslateError> {
        sentence_check(psi, sig)?;
        if !in_fragment(psi, kit.target_fragment.with_sets()) {
            return Err(TranslateError::Fragment(kit.target_fragment.with_sets()));
        }
        let exponent = (kit.n - kit.m) * psi.set_quantifiers();
        if exponent > budget {
            return Err(TranslateError::BlowUp { exponent, budget });
        }
        let psi = rename_bound_sets(psi, &kit.symbols());
        let mut avoid = kit.symbols();
        avoid.extend(psi.all_symbols());
        let mut copies = BTreeMap::new();
        for z in bound_sets(&psi) {
            let names: Vec<Symbol> = (1..=kit.n)
                .map(|j| {
                    let s = fresh_like(&Symbol::set(&format!("{}_{j}", z.name())), &avoid);
                    avoid.insert(s.clone());
                    s
                })
                .collect();
            copies.insert(z, names);
        }
        Ok((psi, Backward { kit, copies, memo: HashMap::new() }))
    }

    /// `∃Z^1..Z^m ⋁_N g[Z^j ↦ N(j)]` over all `N ⊆ ]m:n]`.
    fn expand(&self, z: &Symbol, g: &Formula) -> Result<Formula, TranslateError> {
        let (m, n) = (self.kit.m, self.kit.n);
        let zs = &self.copies[z];
        let mut disjuncts = Vec::new();
        for bits in 0u64..1 << (n - m) {
            let b: BTreeMap<Symbol, Formula> = (m + 1..=n)
                .map(|j| {
                    let on = bits >> (j - m - 1) & 1 == 1;
                    (zs[j - 1].clone(), if on { Formula::top() } else { Formula::bot() })
                })
                .collect();
            disjuncts.push(substitute_sets(g, &b)?);
        }
        let body = Formula::big_or(disjuncts);
        Ok(zs[..m].iter().rev().fold(body, |acc, zj| Formula::exists_set(zj, acc)))
    }

    fn top_family(&mut self, f: &Formula) -> Result<Vec<Formula>, TranslateError> {
        if f.set_quantifiers() == 0 {
            return self.family(f);
        }
        match f.node() {
            Node::Not(a) => Ok(self.top_family(a)?.into_iter().map(Formula::not).collect()),
            Node::Or(a, b) => {
                let (fa, fb) = (self.top_family(a)?, self.top_family(b)?);
                Ok(fa.into_iter().zip(fb).map(|(x, y)| Formula::or(x, y)).collect())
            }
            Node::ExistsSet(z, body) => self.top_family(body)?.iter().map(|g| self.expand(z, g)).collect(),
            _ => Err(TranslateError::QuantifierInKernel),
        }
    }
}
