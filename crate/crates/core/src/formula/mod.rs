//! Formula syntax trees, derived operators and free symbols.
//!
//! Formulas are immutable and reference-counted, so subformulas may be
//! shared. Traversals that could revisit shared nodes memoize by node
//! address.

mod classify;
mod fragment;
mod schemas;
mod subst;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

pub use classify::{bc_sigma_level, boxed_pi_level, boxed_sigma_level, levels, pi_level, sigma_level, ClassifyError, Levels};
pub use fragment::{in_fragment, Fragment};
pub use schemas::{see1, tot1};
pub use subst::{rename_bound_sets, substitute_point, substitute_sets, SubstError};

use crate::symbol::Symbol;

/// Modality of a diamond: a relation, its inverse, or the global relation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modality {
    Rel(Symbol),
    Inv(Symbol),
    Global,
}

impl Modality {
    /// Number of diamond arguments (`arity - 1`; 1 for `Global`).
    pub fn args(&self) -> usize {
        match self {
            Modality::Rel(r) | Modality::Inv(r) => r.arity() as usize - 1,
            Modality::Global => 1,
        }
    }

    pub fn symbol(&self) -> Option<&Symbol> {
        match self {
            Modality::Rel(r) | Modality::Inv(r) => Some(r),
            Modality::Global => None,
        }
    }
}

impl fmt::Debug for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modality::Rel(r) => write!(f, "{r}"),
            Modality::Inv(r) => write!(f, "~{r}"),
            Modality::Global => write!(f, "*"),
        }
    }
}

/// Core syntax; derived operators are expressed through these nodes.
#[derive(Clone, PartialEq, Eq)]
pub enum Node {
    Nominal(Symbol),
    Eq(Symbol, Symbol),
    SetAtom(Symbol),
    SetApp(Symbol, Symbol),
    RelApp(Symbol, Vec<Symbol>),
    Not(Formula),
    Or(Formula, Formula),
    Diamond(Modality, Vec<Formula>),
    ExistsElem(Symbol, Formula),
    ExistsSet(Symbol, Formula),
}

#[derive(Clone)]
pub struct Formula(Arc<Node>);

impl PartialEq for Formula {
    fn eq(&self, other: &Formula) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Formula {}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_formula(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_formula(self))
    }
}

impl Formula {
    pub fn node(&self) -> &Node {
        &self.0
    }

    /// Address of the node, used as a memoization key.
    pub fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    fn mk(n: Node) -> Formula {
        Formula(Arc::new(n))
    }

    pub fn nominal(q: &Symbol) -> Formula {
        assert!(q.is_element(), "nominal over a non-element symbol {q:?}");
        Formula::mk(Node::Nominal(q.clone()))
    }

    /// The position atom `@`, which is also ⊤.
    pub fn position() -> Formula {
        Formula::nominal(&Symbol::position())
    }

    pub fn top() -> Formula {
        Formula::position()
    }

    pub fn bot() -> Formula {
        Formula::not(Formula::position())
    }

    pub fn eq(p: &Symbol, q: &Symbol) -> Formula {
        assert!(p.is_element() && q.is_element());
        Formula::mk(Node::Eq(p.clone(), q.clone()))
    }

    pub fn set(p: &Symbol) -> Formula {
        assert!(p.is_set(), "set atom over {p:?}");
        Formula::mk(Node::SetAtom(p.clone()))
    }

    pub fn set_app(p: &Symbol, q: &Symbol) -> Formula {
        assert!(p.is_set() && q.is_element());
        Formula::mk(Node::SetApp(p.clone(), q.clone()))
    }

    /// A unary application is a set application.
    pub fn rel_app(r: &Symbol, args: &[Symbol]) -> Formula {
        assert_eq!(r.arity() as usize, args.len(), "relation application arity");
        assert!(args.iter().all(Symbol::is_element));
        if let [q] = args {
            return Formula::set_app(r, q);
        }
        Formula::mk(Node::RelApp(r.clone(), args.to_vec()))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::mk(Node::Not(f))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::mk(Node::Or(a, b))
    }

    /// `¬(¬a ∨ ¬b)`.
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::or(Formula::not(a), Formula::not(b)))
    }

    /// `¬a ∨ b`.
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    /// `(a → b) ∧ (b → a)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    /// Panics if the argument count does not match the modality.
    pub fn diamond(m: Modality, args: Vec<Formula>) -> Formula {
        assert_eq!(m.args(), args.len(), "diamond argument count for {m:?}");
        Formula::mk(Node::Diamond(m, args))
    }

    /// `□_m(f̄) = ¬◇_m(¬f̄)`.
    pub fn boxed(m: Modality, args: Vec<Formula>) -> Formula {
        Formula::not(Formula::diamond(m, args.into_iter().map(Formula::not).collect()))
    }

    /// Unary diamond along a binary relation.
    pub fn dia(r: &Symbol, f: Formula) -> Formula {
        Formula::diamond(Modality::Rel(r.clone()), vec![f])
    }

    pub fn bx(r: &Symbol, f: Formula) -> Formula {
        Formula::boxed(Modality::Rel(r.clone()), vec![f])
    }

    pub fn inv_dia(r: &Symbol, f: Formula) -> Formula {
        Formula::diamond(Modality::Inv(r.clone()), vec![f])
    }

    pub fn inv_bx(r: &Symbol, f: Formula) -> Formula {
        Formula::boxed(Modality::Inv(r.clone()), vec![f])
    }

    pub fn global(f: Formula) -> Formula {
        Formula::diamond(Modality::Global, vec![f])
    }

    pub fn global_box(f: Formula) -> Formula {
        Formula::boxed(Modality::Global, vec![f])
    }

    pub fn exists_elem(q: &Symbol, f: Formula) -> Formula {
        assert!(q.is_element());
        Formula::mk(Node::ExistsElem(q.clone(), f))
    }

    pub fn forall_elem(q: &Symbol, f: Formula) -> Formula {
        Formula::not(Formula::exists_elem(q, Formula::not(f)))
    }

    pub fn exists_set(p: &Symbol, f: Formula) -> Formula {
        assert!(p.is_set(), "set quantifier over {p:?}");
        Formula::mk(Node::ExistsSet(p.clone(), f))
    }

    pub fn forall_set(p: &Symbol, f: Formula) -> Formula {
        Formula::not(Formula::exists_set(p, Formula::not(f)))
    }

    /// Left-nested disjunction; ⊥ when empty.
    pub fn big_or<I: IntoIterator<Item = Formula>>(fs: I) -> Formula {
        fs.into_iter().reduce(Formula::or).unwrap_or_else(Formula::bot)
    }

    /// Left-nested conjunction; ⊤ when empty.
    pub fn big_and<I: IntoIterator<Item = Formula>>(fs: I) -> Formula {
        fs.into_iter().reduce(Formula::and).unwrap_or_else(Formula::top)
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self.node() {
            Node::Not(a) | Node::ExistsElem(_, a) | Node::ExistsSet(_, a) => vec![a],
            Node::Or(a, b) => vec![a, b],
            Node::Diamond(_, args) => args.iter().collect(),
            _ => vec![],
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(
            self.node(),
            Node::Nominal(_) | Node::Eq(..) | Node::SetAtom(_) | Node::SetApp(..) | Node::RelApp(..)
        )
    }

    /// Number of distinct nodes (shared nodes counted once).
    pub fn dag_size(&self) -> usize {
        fn go(f: &Formula, seen: &mut std::collections::HashSet<usize>) {
            if seen.insert(f.id()) {
                for c in f.children() {
                    go(c, seen);
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        go(self, &mut seen);
        seen.len()
    }

    /// Maximal nesting of diamonds.
    pub fn modal_depth(&self) -> usize {
        fn go(f: &Formula, memo: &mut HashMap<usize, usize>) -> usize {
            if let Some(&d) = memo.get(&f.id()) {
                return d;
            }
            let inner = f.children().into_iter().map(|c| go(c, memo)).max().unwrap_or(0);
            let d = inner + usize::from(matches!(f.node(), Node::Diamond(..)));
            memo.insert(f.id(), d);
            d
        }
        go(self, &mut HashMap::new())
    }

    /// Number of set-quantifier nodes.
    pub fn set_quantifiers(&self) -> usize {
        fn go(f: &Formula, memo: &mut HashMap<usize, usize>) -> usize {
            if let Some(&d) = memo.get(&f.id()) {
                return d;
            }
            let inner: usize = f.children().into_iter().map(|c| go(c, memo)).sum();
            let d = inner + usize::from(matches!(f.node(), Node::ExistsSet(..)));
            memo.insert(f.id(), d);
            d
        }
        go(self, &mut HashMap::new())
    }

    pub fn free_symbols(&self) -> BTreeSet<Symbol> {
        (*FreeCache::default().get(self)).clone()
    }

    /// Whether the formula has no free symbols besides those of `sig`.
    pub fn is_sentence_over(&self, sig: &BTreeSet<Symbol>) -> bool {
        self.free_symbols().is_subset(sig)
    }

    /// Free and bound symbols.
    pub fn all_symbols(&self) -> BTreeSet<Symbol> {
        fn go(f: &Formula, seen: &mut std::collections::HashSet<usize>, out: &mut BTreeSet<Symbol>) {
            if !seen.insert(f.id()) {
                return;
            }
            match f.node() {
                Node::Nominal(q) | Node::SetAtom(q) => {
                    out.insert(q.clone());
                }
                Node::Eq(p, q) | Node::SetApp(p, q) => {
                    out.insert(p.clone());
                    out.insert(q.clone());
                }
                Node::RelApp(r, qs) => {
                    out.insert(r.clone());
                    out.extend(qs.iter().cloned());
                }
                Node::Diamond(m, _) => {
                    if let Some(r) = m.symbol() {
                        out.insert(r.clone());
                    }
                }
                Node::ExistsElem(q, _) | Node::ExistsSet(q, _) => {
                    out.insert(q.clone());
                }
                Node::Not(_) | Node::Or(..) => {}
            }
            for c in f.children() {
                go(c, seen, out);
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut std::collections::HashSet::new(), &mut out);
        out.insert(Symbol::position());
        out
    }
}

/// Memoized free-symbol computation over shared subformulas.
#[derive(Default)]
pub struct FreeCache {
    memo: HashMap<usize, (Formula, Rc<BTreeSet<Symbol>>)>,
}

impl FreeCache {
    pub fn get(&mut self, f: &Formula) -> Rc<BTreeSet<Symbol>> {
        if let Some((_, s)) = self.memo.get(&f.id()) {
            return s.clone();
        }
        let at = Symbol::position();
        let mut out = BTreeSet::new();
        match f.node() {
            Node::Nominal(q) => {
                out.insert(at);
                out.insert(q.clone());
            }
            Node::Eq(p, q) | Node::SetApp(p, q) => {
                out.insert(p.clone());
                out.insert(q.clone());
            }
            Node::SetAtom(p) => {
                out.insert(at);
                out.insert(p.clone());
            }
            Node::RelApp(r, qs) => {
                out.insert(r.clone());
                out.extend(qs.iter().cloned());
            }
            Node::Not(a) => out.extend(self.get(a).iter().cloned()),
            Node::Or(a, b) => {
                out.extend(self.get(a).iter().cloned());
                out.extend(self.get(b).iter().cloned());
            }
            Node::Diamond(m, args) => {
                for a in args {
                    out.extend(self.get(a).iter().cloned());
                }
                match m {
                    Modality::Global => {
                        out.remove(&at);
                    }
                    Modality::Rel(r) | Modality::Inv(r) => {
                        out.insert(at);
                        out.insert(r.clone());
                    }
                }
            }
            Node::ExistsElem(q, a) | Node::ExistsSet(q, a) => {
                out.extend(self.get(a).iter().cloned());
                out.remove(q);
            }
        }
        let rc = Rc::new(out);
        // Keep the formula alive so its address is not reused while cached.
        self.memo.insert(f.id(), (f.clone(), rc.clone()));
        rc
    }
}

/// Surface syntax with derived operators, as produced by the parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Surface {
    True,
    False,
    Nominal(Symbol),
    Eq(Symbol, Symbol),
    SetAtom(Symbol),
    SetApp(Symbol, Symbol),
    RelApp(Symbol, Vec<Symbol>),
    Not(Box<Surface>),
    Or(Box<Surface>, Box<Surface>),
    And(Box<Surface>, Box<Surface>),
    Implies(Box<Surface>, Box<Surface>),
    Iff(Box<Surface>, Box<Surface>),
    Diamond(Modality, Vec<Surface>),
    Box(Modality, Vec<Surface>),
    ExistsElem(Symbol, Box<Surface>),
    ForallElem(Symbol, Box<Surface>),
    ExistsSet(Symbol, Box<Surface>),
    ForallSet(Symbol, Box<Surface>),
}

/// Rewrites derived operators into core nodes.
pub fn desugar(s: &Surface) -> Formula {
    let d = |x: &Surface| desugar(x);
    match s {
        Surface::True => Formula::top(),
        Surface::False => Formula::bot(),
        Surface::Nominal(q) => Formula::nominal(q),
        Surface::Eq(p, q) => Formula::eq(p, q),
        Surface::SetAtom(p) => Formula::set(p),
        Surface::SetApp(p, q) => Formula::set_app(p, q),
        Surface::RelApp(r, qs) => Formula::rel_app(r, qs),
        Surface::Not(a) => Formula::not(d(a)),
        Surface::Or(a, b) => Formula::or(d(a), d(b)),
        Surface::And(a, b) => Formula::and(d(a), d(b)),
        Surface::Implies(a, b) => Formula::implies(d(a), d(b)),
        Surface::Iff(a, b) => Formula::iff(d(a), d(b)),
        Surface::Diamond(m, args) => Formula::diamond(m.clone(), args.iter().map(d).collect()),
        Surface::Box(m, args) => Formula::boxed(m.clone(), args.iter().map(d).collect()),
        Surface::ExistsElem(q, a) => Formula::exists_elem(q, d(a)),
        Surface::ForallElem(q, a) => Formula::forall_elem(q, d(a)),
        Surface::ExistsSet(p, a) => Formula::exists_set(p, d(a)),
        Surface::ForallSet(p, a) => Formula::forall_set(p, d(a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syms(names: &[Symbol]) -> BTreeSet<Symbol> {
        names.iter().cloned().collect()
    }

    #[test]
    fn free_symbol_rows() {
        let at = Symbol::position();
        let q = Symbol::element("q");
        let p = Symbol::set("P");
        let r = Symbol::relation("R", 2);
        assert_eq!(Formula::nominal(&q).free_symbols(), syms(&[at.clone(), q.clone()]));
        assert_eq!(Formula::global(Formula::set(&p)).free_symbols(), syms(&[p.clone()]));
        assert_eq!(Formula::exists_set(&p, Formula::set(&p)).free_symbols(), syms(&[at.clone()]));
        assert_eq!(Formula::eq(&q, &q).free_symbols(), syms(&[q.clone()]));
        assert_eq!(Formula::set_app(&p, &q).free_symbols(), syms(&[p.clone(), q.clone()]));
        let x = Symbol::element("x");
        let ra = Formula::rel_app(&r, &[at.clone(), x.clone()]);
        assert_eq!(ra.free_symbols(), syms(&[r.clone(), at.clone(), x.clone()]));
        assert_eq!(Formula::exists_elem(&x, ra.clone()).free_symbols(), syms(&[r.clone(), at.clone()]));
        assert_eq!(Formula::exists_elem(&at, ra).free_symbols(), syms(&[r.clone(), x]));
        let inv = Formula::inv_dia(&r, Formula::set(&p));
        assert_eq!(inv.free_symbols(), syms(&[at.clone(), r.clone(), p.clone()]));
        assert_eq!(Formula::not(inv.clone()).free_symbols(), inv.free_symbols());
        let tern = Symbol::relation("S", 3);
        let poly = Formula::diamond(Modality::Rel(tern.clone()), vec![Formula::top(), Formula::set(&p)]);
        assert_eq!(poly.free_symbols(), syms(&[at, tern, p]));
    }

    #[test]
    fn desugar_examples() {
        assert_eq!(desugar(&Surface::True), Formula::position());
        let p = Symbol::set("P");
        let r = Symbol::relation("R", 2);
        let boxed = desugar(&Surface::Box(Modality::Rel(r.clone()), vec![Surface::SetAtom(p.clone())]));
        assert_eq!(boxed, Formula::not(Formula::dia(&r, Formula::not(Formula::set(&p)))));
        let q = Symbol::set("Q");
        let conj = desugar(&Surface::And(Box::new(Surface::SetAtom(p.clone())), Box::new(Surface::SetAtom(q.clone()))));
        assert_eq!(conj, Formula::not(Formula::or(Formula::not(Formula::set(&p)), Formula::not(Formula::set(&q)))));
        assert_eq!(desugar(&Surface::False), Formula::not(Formula::position()));
    }

    #[test]
    fn empty_big_operators() {
        assert_eq!(Formula::big_or(vec![]), Formula::bot());
        assert_eq!(Formula::big_and(vec![]), Formula::top());
    }

    #[test]
    fn depth_and_size() {
        let r = Symbol::relation("R", 2);
        let shared = Formula::dia(&r, Formula::top());
        let f = Formula::or(shared.clone(), Formula::dia(&r, shared));
        assert_eq!(f.modal_depth(), 2);
        assert_eq!(f.dag_size(), 4);
    }
}
