//! Model checking, standard translation, tiling systems and linear
//! encodings for hybrid modal logics with set quantifiers on finite
//! graphs and grids.

pub mod classes;
pub mod encodings;
pub mod enumerate;
pub mod eval;
pub mod figurative;
pub mod formula;
pub mod grid;
pub mod iso;
pub mod structure;
pub mod symbol;
pub mod syntax;
pub mod translate;

pub use classes::{grid_shape, is_grid, make_grid, validate, GraphClass};
pub use enumerate::enumerate_structures;
pub use encodings::{all_encodings, EncodingKind, LinearEncoding};
pub use eval::{check, satisfies, satisfying_set, CompiledFormula, EvalConfig, EvalError, Verdict};
pub use formula::{Formula, Fragment, Modality, Node};
pub use grid::{grid_characterization, recognizes, ts_to_sigma1_hg, TilingSystem};
pub use iso::isomorphic;
pub use structure::{Structure, StructureError, Value};
pub use symbol::{fresh_symbol, Symbol, SymbolKind};
pub use translate::{backward_translate, forward_translate, std_translate, BackwardKit, ForwardKit};
pub use syntax::{parse_formula, parse_structure, pretty_formula, print_formula, print_structure, ParseError};
