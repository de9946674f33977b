//! Symbols: element symbols (arity 0) and relation symbols (arity >= 1).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Name of the position symbol.
pub const POSITION: &str = "@";

/// A symbol from the fixed supply. Set symbols are relation symbols of arity 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    name: Arc<str>,
    arity: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Element,
    Relation(u32),
}

impl SymbolKind {
    pub const SET: SymbolKind = SymbolKind::Relation(1);
}

impl Symbol {
    pub fn element(name: &str) -> Symbol {
        Symbol { name: name.into(), arity: 0 }
    }

    pub fn set(name: &str) -> Symbol {
        Symbol { name: name.into(), arity: 1 }
    }

    /// Panics if `arity` is zero.
    pub fn relation(name: &str, arity: u32) -> Symbol {
        assert!(arity >= 1, "relation symbols have arity >= 1");
        Symbol { name: name.into(), arity }
    }

    pub fn of_kind(name: &str, kind: SymbolKind) -> Symbol {
        match kind {
            SymbolKind::Element => Symbol::element(name),
            SymbolKind::Relation(k) => Symbol::relation(name, k),
        }
    }

    pub fn position() -> Symbol {
        Symbol::element(POSITION)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn kind(&self) -> SymbolKind {
        if self.arity == 0 {
            SymbolKind::Element
        } else {
            SymbolKind::Relation(self.arity)
        }
    }

    pub fn is_element(&self) -> bool {
        self.arity == 0
    }

    pub fn is_set(&self) -> bool {
        self.arity == 1
    }

    pub fn is_position(&self) -> bool {
        self.arity == 0 && &*self.name == POSITION
    }

    /// Placeholder symbols live in the `$` namespace, which the formula
    /// parser only accepts in kit files.
    pub fn is_placeholder(&self) -> bool {
        self.name.starts_with('$')
    }

    fn with_name(&self, name: String) -> Symbol {
        Symbol { name: name.into(), arity: self.arity }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity <= 1 {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}/{}", self.name, self.arity)
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Placeholder `$Y` of forward kits.
pub fn placeholder_y() -> Symbol {
    Symbol::set("$Y")
}

/// Placeholder `$Y<i>` (1-based) of forward kits.
pub fn placeholder_yi(i: usize) -> Symbol {
    Symbol::set(&format!("$Y{i}"))
}

/// Placeholder `$X<i>_<j>` of backward kits.
pub fn placeholder_xij(i: usize, j: usize) -> Symbol {
    Symbol::set(&format!("$X{i}_{j}"))
}

/// Placeholder `$X_<j>` of backward kits.
pub fn placeholder_xj(j: usize) -> Symbol {
    Symbol::set(&format!("$X_{j}"))
}

/// Appends primes to `base` until the name is unused in `avoid`.
/// The position symbol is never returned.
pub fn fresh_like(base: &Symbol, avoid: &BTreeSet<Symbol>) -> Symbol {
    let mut candidate = base.clone();
    loop {
        let clash = avoid.iter().any(|s| s.name() == candidate.name()) || candidate.is_position();
        if !clash {
            return candidate;
        }
        candidate = candidate.with_name(format!("{}'", candidate.name()));
    }
}

/// A symbol of the given kind whose name occurs nowhere in `avoid`.
///
/// Names are compared regardless of arity, so the result never shadows any
/// symbol in `avoid` in printed form either.
pub fn fresh_symbol(kind: SymbolKind, avoid: &BTreeSet<Symbol>) -> Symbol {
    let base = match kind {
        SymbolKind::Element => Symbol::element("x"),
        SymbolKind::Relation(1) => Symbol::set("X"),
        SymbolKind::Relation(k) => Symbol::relation("R", k),
    };
    fresh_like(&base, avoid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_avoids_and_is_deterministic() {
        let avoid: BTreeSet<Symbol> = [Symbol::set("X")].into_iter().collect();
        let a = fresh_symbol(SymbolKind::SET, &avoid);
        let b = fresh_symbol(SymbolKind::SET, &avoid);
        assert_eq!(a, b);
        assert!(!avoid.contains(&a));
        assert_eq!(a.name(), "X'");
    }

    #[test]
    fn fresh_element_is_not_position() {
        let e = fresh_symbol(SymbolKind::Element, &BTreeSet::new());
        assert!(e.is_element());
        assert!(!e.is_position());
    }

    #[test]
    fn placeholders_are_reserved() {
        assert!(placeholder_y().is_placeholder());
        assert_eq!(placeholder_xij(2, 3).name(), "$X2_3");
        assert!(!Symbol::set("Y").is_placeholder());
    }
}
