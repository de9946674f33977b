//! A `Π1(HBG)` sentence that holds on a two-relational digraph exactly
//! when it is a grid.

use crate::classes::relation_symbol;
use crate::formula::{tot1, Formula, Modality};
use crate::symbol::Symbol;

/// One conjunct of the characterization with a short description.
#[derive(Debug, Clone)]
pub struct GridProperty {
    pub label: char,
    pub description: &'static str,
    pub formula: Formula,
}

fn x() -> Symbol {
    Symbol::set("X")
}

fn no_pred(r: &Symbol) -> Formula {
    Formula::inv_bx(r, Formula::bot())
}

/// The six properties (a)–(f); their conjunction is [`grid_characterization`].
pub fn grid_properties() -> Vec<GridProperty> {
    let (r1, r2) = (relation_symbol(2, 1), relation_symbol(2, 2));
    let xf = Formula::set(&x());
    let rels = [&r1, &r2];

    // At most one successor and one predecessor: no singleton can
    // separate two of them.
    let functional = Formula::big_and(
        rels.iter()
            .flat_map(|r| [Modality::Rel((*r).clone()), Modality::Inv((*r).clone())])
            .map(|m| {
                Formula::forall_set(
                    &x(),
                    Formula::global_box(Formula::implies(
                        Formula::diamond(m.clone(), vec![xf.clone()]),
                        Formula::boxed(m, vec![xf.clone()]),
                    )),
                )
            }),
    );

    // Every nonempty set closed under successors contains a sink.
    let sinks = Formula::big_and(rels.iter().map(|r| {
        Formula::forall_set(
            &x(),
            Formula::implies(
                Formula::and(Formula::global(xf.clone()), Formula::global_box(Formula::implies(xf.clone(), Formula::bx(r, xf.clone())))),
                Formula::global(Formula::and(xf.clone(), Formula::bx(r, Formula::bot()))),
            ),
        )
    }));

    let corner = tot1(&Formula::and(no_pred(&r1), no_pred(&r2)));

    let column = Formula::global_box(Formula::implies(
        no_pred(&r2),
        Formula::and(Formula::inv_bx(&r1, no_pred(&r2)), Formula::bx(&r1, no_pred(&r2))),
    ));

    let top = Formula::top();
    let completion = Formula::global_box(Formula::implies(
        Formula::and(Formula::dia(&r1, top.clone()), Formula::dia(&r2, top.clone())),
        Formula::dia(&r1, Formula::dia(&r2, top)),
    ));

    let commute = Formula::forall_set(
        &x(),
        Formula::global_box(Formula::iff(
            Formula::dia(&r1, Formula::dia(&r2, xf.clone())),
            Formula::dia(&r2, Formula::dia(&r1, xf)),
        )),
    );

    vec![
        GridProperty { label: 'a', description: "R1 and R2 are partial injective functions", formula: functional },
        GridProperty { label: 'b', description: "every element reaches an R1-sink and an R2-sink", formula: sinks },
        GridProperty { label: 'c', description: "exactly one element is both an R1- and an R2-source", formula: corner },
        GridProperty { label: 'd', description: "R1-neighbours of R2-sources are R2-sources", formula: column },
        GridProperty { label: 'e', description: "an R1- and an R2-successor imply an R1R2-descendant", formula: completion },
        GridProperty { label: 'f', description: "R1 and R2 commute", formula: commute },
    ]
}

/// Conjunction of [`grid_properties`].
pub fn grid_characterization() -> Formula {
    Formula::big_and(grid_properties().into_iter().map(|p| p.formula))
}
