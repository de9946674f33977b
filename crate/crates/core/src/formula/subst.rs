//! Capture-avoiding substitution and renaming.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use thiserror::Error;

use super::{FreeCache, Formula, Node};
use crate::symbol::{fresh_like, Symbol};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SubstError {
    #[error("cannot substitute a formula for {0:?} in an application {0:?}(..)")]
    SetApplication(Symbol),
    #[error("point substitution reached a modal operator; the input must be first-order")]
    NotFirstOrder,
}

struct SetSubst {
    free: FreeCache,
    /// Free symbols of all replacements, used to detect capture.
    repl_free: BTreeSet<Symbol>,
    avoid: BTreeSet<Symbol>,
    memo: HashMap<(usize, usize), Formula>,
    contexts: Vec<Rc<BTreeMap<Symbol, Formula>>>,
}

impl SetSubst {
    fn go(&mut self, f: &Formula, ctx: usize) -> Result<Formula, SubstError> {
        if let Some(r) = self.memo.get(&(f.id(), ctx)) {
            return Ok(r.clone());
        }
        let map = self.contexts[ctx].clone();
        let free = self.free.get(f);
        if !map.keys().any(|k| free.contains(k)) {
            return Ok(f.clone());
        }
        let out = match f.node() {
            Node::SetAtom(x) => map.get(x).cloned().unwrap_or_else(|| f.clone()),
            Node::SetApp(x, _) => {
                if map.contains_key(x) {
                    return Err(SubstError::SetApplication(x.clone()));
                }
                f.clone()
            }
            Node::Nominal(_) | Node::Eq(..) | Node::RelApp(..) => f.clone(),
            Node::Not(a) => Formula::not(self.go(a, ctx)?),
            Node::Or(a, b) => Formula::or(self.go(a, ctx)?, self.go(b, ctx)?),
            Node::Diamond(m, args) => {
                let args = args.iter().map(|a| self.go(a, ctx)).collect::<Result<_, _>>()?;
                Formula::diamond(m.clone(), args)
            }
            Node::ExistsSet(p, body) => {
                let mut inner = (*map).clone();
                inner.remove(p);
                let mut binder = p.clone();
                if self.repl_free.contains(p) {
                    binder = self.fresh(p, body);
                    inner.insert(p.clone(), Formula::set(&binder));
                }
                Formula::exists_set(&binder, self.scoped(inner, body)?)
            }
            Node::ExistsElem(q, body) => {
                let inner = (*map).clone();
                if self.repl_free.contains(q) && !q.is_position() {
                    let binder = self.fresh(q, body);
                    let renamed = rename_free_element(body, q, &binder);
                    Formula::exists_elem(&binder, self.scoped(inner, &renamed)?)
                } else {
                    Formula::exists_elem(q, self.scoped(inner, body)?)
                }
            }
        };
        self.memo.insert((f.id(), ctx), out.clone());
        Ok(out)
    }

    fn fresh(&mut self, base: &Symbol, body: &Formula) -> Symbol {
        self.avoid.extend(self.free.get(body).iter().cloned());
        let s = fresh_like(base, &self.avoid);
        self.avoid.insert(s.clone());
        s
    }

    fn scoped(&mut self, map: BTreeMap<Symbol, Formula>, body: &Formula) -> Result<Formula, SubstError> {
        self.contexts.push(Rc::new(map));
        let c = self.contexts.len() - 1;
        self.go(body, c)
    }
}

/// Renames free occurrences of element symbol `from` to `to` (which must
/// not occur in `f`).
fn rename_free_element(f: &Formula, from: &Symbol, to: &Symbol) -> Formula {
    let r = |s: &Symbol| if s == from { to.clone() } else { s.clone() };
    match f.node() {
        Node::Nominal(q) => Formula::nominal(&r(q)),
        Node::Eq(p, q) => Formula::eq(&r(p), &r(q)),
        Node::SetAtom(_) => f.clone(),
        Node::SetApp(p, q) => Formula::set_app(p, &r(q)),
        Node::RelApp(rel, qs) => Formula::rel_app(rel, &qs.iter().map(r).collect::<Vec<_>>()),
        Node::Not(a) => Formula::not(rename_free_element(a, from, to)),
        Node::Or(a, b) => Formula::or(rename_free_element(a, from, to), rename_free_element(b, from, to)),
        Node::Diamond(m, args) => {
            Formula::diamond(m.clone(), args.iter().map(|a| rename_free_element(a, from, to)).collect())
        }
        Node::ExistsElem(q, _) if q == from => f.clone(),
        Node::ExistsElem(q, body) => Formula::exists_elem(q, rename_free_element(body, from, to)),
        Node::ExistsSet(q, body) => Formula::exists_set(q, rename_free_element(body, from, to)),
    }
}

/// Simultaneously replaces free `SetAtom(X)` occurrences by `bindings[X]`,
/// renaming binders that would capture free symbols of replacements.
pub fn substitute_sets(f: &Formula, bindings: &BTreeMap<Symbol, Formula>) -> Result<Formula, SubstError> {
    let mut free = FreeCache::default();
    let mut repl_free = BTreeSet::new();
    for g in bindings.values() {
        repl_free.extend(free.get(g).iter().cloned());
    }
    let mut avoid = f.all_symbols();
    avoid.extend(repl_free.iter().cloned());
    avoid.extend(bindings.keys().cloned());
    let mut s = SetSubst { free, repl_free, avoid, memo: HashMap::new(), contexts: vec![Rc::new(bindings.clone())] };
    s.go(f, 0)
}

/// Replaces the free position symbol of a first-order formula by `x`.
/// Hybrid atoms are rewritten to their first-order form at `x`.
pub fn substitute_point(f: &Formula, x: &Symbol) -> Result<Formula, SubstError> {
    let at = Symbol::position();
    fn go(f: &Formula, x: &Symbol, at: &Symbol, memo: &mut HashMap<usize, Formula>) -> Result<Formula, SubstError> {
        if let Some(r) = memo.get(&f.id()) {
            return Ok(r.clone());
        }
        let r = |s: &Symbol| if s == at { x.clone() } else { s.clone() };
        let out = match f.node() {
            Node::Nominal(q) => Formula::eq(x, &r(q)),
            Node::Eq(p, q) => Formula::eq(&r(p), &r(q)),
            Node::SetAtom(p) => Formula::set_app(p, x),
            Node::SetApp(p, q) => Formula::set_app(p, &r(q)),
            Node::RelApp(rel, qs) => Formula::rel_app(rel, &qs.iter().map(r).collect::<Vec<_>>()),
            Node::Not(a) => Formula::not(go(a, x, at, memo)?),
            Node::Or(a, b) => Formula::or(go(a, x, at, memo)?, go(b, x, at, memo)?),
            Node::Diamond(..) => return Err(SubstError::NotFirstOrder),
            Node::ExistsElem(q, _) if q == at => f.clone(),
            Node::ExistsElem(q, body) if q == x && body.free_symbols().contains(at) => {
                let mut avoid = body.all_symbols();
                avoid.insert(x.clone());
                let fresh = fresh_like(q, &avoid);
                let renamed = rename_free_element(body, q, &fresh);
                Formula::exists_elem(&fresh, go(&renamed, x, at, &mut HashMap::new())?)
            }
            Node::ExistsElem(q, body) => Formula::exists_elem(q, go(body, x, at, memo)?),
            Node::ExistsSet(p, body) => Formula::exists_set(p, go(body, x, at, memo)?),
        };
        memo.insert(f.id(), out.clone());
        Ok(out)
    }
    go(f, x, &at, &mut HashMap::new())
}

/// Renames every bound set symbol to a fresh name avoiding `avoid`, with
/// distinct binders receiving distinct names.
pub fn rename_bound_sets(f: &Formula, avoid: &BTreeSet<Symbol>) -> Formula {
    let mut used = avoid.clone();
    used.extend(f.all_symbols());
    fn go(f: &Formula, map: &BTreeMap<Symbol, Symbol>, used: &mut BTreeSet<Symbol>) -> Formula {
        match f.node() {
            Node::SetAtom(p) => map.get(p).map(Formula::set).unwrap_or_else(|| f.clone()),
            Node::SetApp(p, q) => match map.get(p) {
                Some(p2) => Formula::set_app(p2, q),
                None => f.clone(),
            },
            Node::Nominal(_) | Node::Eq(..) | Node::RelApp(..) => f.clone(),
            Node::Not(a) => Formula::not(go(a, map, used)),
            Node::Or(a, b) => {
                let a = go(a, map, used);
                Formula::or(a, go(b, map, used))
            }
            Node::Diamond(m, args) => {
                let args = args.iter().map(|a| go(a, map, used)).collect();
                Formula::diamond(m.clone(), args)
            }
            Node::ExistsElem(q, body) => Formula::exists_elem(q, go(body, map, used)),
            Node::ExistsSet(p, body) => {
                let fresh = fresh_like(p, used);
                used.insert(fresh.clone());
                let mut inner = map.clone();
                inner.insert(p.clone(), fresh.clone());
                Formula::exists_set(&fresh, go(body, &inner, used))
            }
        }
    }
    go(f, &BTreeMap::new(), &mut used)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Symbol {
        Symbol::set("X")
    }
    fn y() -> Symbol {
        Symbol::set("Y")
    }
    fn r() -> Symbol {
        Symbol::relation("R", 2)
    }

    #[test]
    fn plain_substitution() {
        let f = Formula::or(Formula::set(&x()), Formula::dia(&r(), Formula::set(&x())));
        let p = Symbol::set("P");
        let b: BTreeMap<_, _> = [(x(), Formula::set(&p))].into_iter().collect();
        let expect = Formula::or(Formula::set(&p), Formula::dia(&r(), Formula::set(&p)));
        assert_eq!(substitute_sets(&f, &b).unwrap(), expect);
    }

    #[test]
    fn bound_occurrence_untouched() {
        let f = Formula::or(Formula::exists_set(&x(), Formula::set(&x())), Formula::set(&x()));
        let phi = Formula::dia(&r(), Formula::top());
        let b: BTreeMap<_, _> = [(x(), phi.clone())].into_iter().collect();
        let expect = Formula::or(Formula::exists_set(&x(), Formula::set(&x())), phi);
        assert_eq!(substitute_sets(&f, &b).unwrap(), expect);
    }

    #[test]
    fn capture_is_avoided() {
        let f = Formula::exists_set(&y(), Formula::set(&x()));
        let b: BTreeMap<_, _> = [(x(), Formula::set(&y()))].into_iter().collect();
        let out = substitute_sets(&f, &b).unwrap();
        let Node::ExistsSet(binder, body) = out.node() else { panic!() };
        assert_ne!(binder, &y());
        assert_eq!(*body, Formula::set(&y()));
    }

    #[test]
    fn set_application_rejected() {
        let f = Formula::set_app(&x(), &Symbol::element("q"));
        let b: BTreeMap<_, _> = [(x(), Formula::top())].into_iter().collect();
        assert_eq!(substitute_sets(&f, &b), Err(SubstError::SetApplication(x())));
    }

    #[test]
    fn point_substitution() {
        let at = Symbol::position();
        let xe = Symbol::element("x");
        let p = Symbol::set("P");
        assert_eq!(substitute_point(&Formula::set_app(&p, &at), &xe).unwrap(), Formula::set_app(&p, &xe));
        let q = Symbol::element("q");
        assert_eq!(substitute_point(&Formula::eq(&at, &q), &xe).unwrap(), Formula::eq(&xe, &q));
        let f = Formula::exists_elem(&xe, Formula::rel_app(&r(), &[at.clone(), xe.clone()]));
        let out = substitute_point(&f, &xe).unwrap();
        let xp = Symbol::element("x'");
        assert_eq!(out, Formula::exists_elem(&xp, Formula::rel_app(&r(), &[xe.clone(), xp.clone()])));
        let g = Formula::exists_elem(&at, Formula::set_app(&p, &at));
        assert_eq!(substitute_point(&g, &xe).unwrap(), g);
    }

    #[test]
    fn renaming_binders() {
        let inner = Formula::exists_set(&x(), Formula::set(&x()));
        let f = Formula::and(inner.clone(), Formula::exists_set(&x(), Formula::dia(&r(), Formula::set(&x()))));
        let avoid: BTreeSet<_> = [x()].into_iter().collect();
        let out = rename_bound_sets(&f, &avoid);
        let mut binders = Vec::new();
        fn collect(f: &Formula, out: &mut Vec<Symbol>) {
            if let Node::ExistsSet(p, _) = f.node() {
                out.push(p.clone());
            }
            for c in f.children() {
                collect(c, out);
            }
        }
        collect(&out, &mut binders);
        assert_eq!(binders.len(), 2);
        assert_ne!(binders[0], binders[1]);
        assert!(!binders.contains(&x()));
        assert!(out.free_symbols().is_subset(&f.free_symbols()));
    }
}
