//! Counting schemas: exactly one successor, exactly one element.

use std::collections::BTreeSet;

use super::{Formula, Modality};
use crate::symbol::{fresh_symbol, SymbolKind};

/// `◇_ρ φ ∧ ∀X(◇_ρ(φ ∧ X) → □_ρ(φ → X))`: exactly one `ρ`-successor
/// satisfies `φ`. `X` avoids every symbol of `φ`, bound ones included.
///
/// Panics unless `ρ` takes exactly one argument.
pub fn see1(rho: &Modality, phi: &Formula) -> Formula {
    assert_eq!(rho.args(), 1, "see1 needs a unary modality");
    let mut avoid: BTreeSet<_> = phi.all_symbols();
    if let Some(r) = rho.symbol() {
        avoid.insert(r.clone());
    }
    let x = fresh_symbol(SymbolKind::SET, &avoid);
    let xf = Formula::set(&x);
    let some = Formula::diamond(rho.clone(), vec![phi.clone()]);
    let hit = Formula::diamond(rho.clone(), vec![Formula::and(phi.clone(), xf.clone())]);
    let all = Formula::boxed(rho.clone(), vec![Formula::implies(phi.clone(), xf)]);
    Formula::and(some, Formula::forall_set(&x, Formula::implies(hit, all)))
}

/// Exactly one element of the structure satisfies `φ`.
pub fn tot1(phi: &Formula) -> Formula {
    see1(&Modality::Global, phi)
}
