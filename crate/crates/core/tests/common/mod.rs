//! Shared test helpers: random structures and formulas, and a literal
//! reference evaluator that follows the semantics row by row.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use setmodal::formula::{Formula, Fragment, Modality, Node};
use setmodal::{Structure, Symbol, Value};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Reference model checking: `A ⊨ f`, false when `f` is not a sentence
/// over `sig(A)`.
pub fn naive_satisfies(a: &Structure, f: &Formula) -> bool {
    if !f.free_symbols().is_subset(&a.sig()) {
        return false;
    }
    holds(a, f)
}

/// `{d : A[@ ↦ d] ⊨ f}` by the reference evaluator.
pub fn naive_satisfying_set(a: &Structure, f: &Formula) -> BTreeSet<usize> {
    a.domain().filter(|&d| holds(&at(a, &Symbol::position(), d), f)).collect()
}

fn at(a: &Structure, s: &Symbol, d: usize) -> Structure {
    a.extend(s, Value::Element(d)).expect("element in domain")
}

fn holds(a: &Structure, f: &Formula) -> bool {
    let point = || a.position().expect("@ interpreted");
    let el = |q: &Symbol| a.element(q).expect("element interpreted");
    match f.node() {
        Node::Nominal(q) => point() == el(q),
        Node::Eq(p, q) => el(p) == el(q),
        Node::SetAtom(p) => a.set_members(p).expect("set").contains(&point()),
        Node::SetApp(p, q) => a.set_members(p).expect("set").contains(&el(q)),
        Node::RelApp(r, qs) => {
            let t: Vec<usize> = qs.iter().map(el).collect();
            a.relation(r).expect("relation").contains(&t)
        }
        Node::Not(g) => !holds(a, g),
        Node::Or(g, h) => holds(a, g) || holds(a, h),
        Node::Diamond(Modality::Global, args) => a.domain().any(|d| holds(&at(a, &Symbol::position(), d), &args[0])),
        Node::Diamond(m, args) => {
            let (r, inverse) = match m {
                Modality::Rel(r) => (r, false),
                Modality::Inv(r) => (r, true),
                Modality::Global => unreachable!(),
            };
            let p = point();
            a.relation(r).expect("relation").iter().any(|t| {
                let (head, rest): (usize, Vec<usize>) = if inverse {
                    (t[t.len() - 1], t[..t.len() - 1].iter().rev().copied().collect())
                } else {
                    (t[0], t[1..].to_vec())
                };
                head == p && rest.iter().zip(args).all(|(&d, g)| holds(&at(a, &Symbol::position(), d), g))
            })
        }
        Node::ExistsElem(q, g) => a.domain().any(|d| holds(&at(a, q, d), g)),
        Node::ExistsSet(p, g) => {
            let n = a.size();
            (0u64..1 << n).any(|m| {
                let members: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
                holds(&a.extend(p, Value::set(members)).expect("set"), g)
            })
        }
    }
}

/// A random structure over the given symbols; every relation tuple is
/// present with probability `density`.
pub fn random_structure(
    rng: &mut impl Rng,
    size: usize,
    sig: &BTreeSet<Symbol>,
    density: f64,
) -> Structure {
    let mut a = Structure::new(size).unwrap();
    for s in sig {
        let v = match s.arity() {
            0 => Value::Element(rng.gen_range(0..size)),
            k => {
                let mut tuples = BTreeSet::new();
                let total = size.pow(k);
                for code in 0..total {
                    if rng.gen_bool(density) {
                        let mut c = code;
                        let t: Vec<usize> = (0..k)
                            .map(|_| {
                                let d = c % size;
                                c /= size;
                                d
                            })
                            .collect();
                        tuples.insert(t);
                    }
                }
                Value::Relation(tuples)
            }
        };
        a.assign(s, v).unwrap();
    }
    a
}

/// Random formulas over a signature within a fragment.
#[derive(Clone, Debug)]
pub struct FormulaGen {
    pub sets: Vec<Symbol>,
    pub nominals: Vec<Symbol>,
    pub rels: Vec<Symbol>,
    pub frag: Fragment,
    /// Whether `@` may occur free at top level.
    pub pointed: bool,
}

impl FormulaGen {
    pub fn over(sig: &BTreeSet<Symbol>, frag: Fragment) -> FormulaGen {
        FormulaGen {
            sets: sig.iter().filter(|s| s.is_set()).cloned().collect(),
            nominals: sig.iter().filter(|s| s.is_element() && !s.is_position()).cloned().collect(),
            rels: sig.iter().filter(|s| s.arity() >= 2).cloned().collect(),
            frag,
            pointed: sig.contains(&Symbol::position()),
        }
    }

    fn atom(&self, rng: &mut impl Rng, vars: &[Symbol]) -> Formula {
        let mut pool: Vec<Formula> = vec![Formula::top(), Formula::bot()];
        pool.extend(self.sets.iter().chain(vars).map(Formula::set));
        pool.extend(self.nominals.iter().map(Formula::nominal));
        // Favour proper atoms over constants.
        if pool.len() > 2 && rng.gen_bool(0.7) {
            return pool[2..].choose(rng).unwrap().clone();
        }
        pool.choose(rng).unwrap().clone()
    }

    fn modalities(&self) -> Vec<Modality> {
        let mut out = Vec::new();
        for r in &self.rels {
            out.push(Modality::Rel(r.clone()));
            if self.frag.backward() {
                out.push(Modality::Inv(r.clone()));
            }
        }
        if self.frag.global() {
            out.push(Modality::Global);
        }
        out
    }

    /// A set-quantifier-free formula of modal depth at most `depth` that may
    /// use the bound set symbols `vars`.
    pub fn kernel(&self, rng: &mut impl Rng, depth: usize, vars: &[Symbol]) -> Formula {
        let mods = self.modalities();
        if depth == 0 || rng.gen_bool(0.25) {
            let a = self.atom(rng, vars);
            return if rng.gen_bool(0.3) { Formula::not(a) } else { a };
        }
        match rng.gen_range(0..10) {
            0..=1 => Formula::not(self.kernel(rng, depth, vars)),
            2..=3 => Formula::or(self.kernel(rng, depth - 1, vars), self.kernel(rng, depth - 1, vars)),
            4..=5 => Formula::and(self.kernel(rng, depth - 1, vars), self.kernel(rng, depth - 1, vars)),
            _ if mods.is_empty() => self.atom(rng, vars),
            k => {
                let m = mods.choose(rng).unwrap().clone();
                let args = (0..m.args()).map(|_| self.kernel(rng, depth - 1, vars)).collect();
                if k >= 8 {
                    Formula::boxed(m, args)
                } else {
                    Formula::diamond(m, args)
                }
            }
        }
    }

    /// A kernel formula that is a sentence: without a position marker, a
    /// Boolean combination of global diamonds.
    pub fn kernel_sentence(&self, rng: &mut impl Rng, depth: usize, vars: &[Symbol]) -> Formula {
        if self.pointed {
            return self.kernel(rng, depth, vars);
        }
        assert!(self.frag.global(), "unpointed sentences need the global modality");
        match rng.gen_range(0..4) {
            0 => Formula::or(self.global_body(rng, depth, vars), self.global_body(rng, depth, vars)),
            1 => Formula::and(self.global_body(rng, depth, vars), self.global_body(rng, depth, vars)),
            _ => self.global_body(rng, depth, vars),
        }
    }

    fn global_body(&self, rng: &mut impl Rng, depth: usize, vars: &[Symbol]) -> Formula {
        let inner = self.kernel(rng, depth - 1, vars);
        if rng.gen_bool(0.5) {
            Formula::global(inner)
        } else {
            Formula::global_box(inner)
        }
    }

    /// A `Σ_level` (or with `pi`, `Π_level`) sentence with `quantifiers`
    /// set quantifiers, `quantifiers ≥ level`, and modal depth at most
    /// `depth`.
    pub fn sentence(&self, rng: &mut impl Rng, level: usize, quantifiers: usize, pi: bool, depth: usize) -> Formula {
        assert!(quantifiers >= level && (level > 0 || quantifiers == 0));
        // Sizes of the `level` blocks, each nonempty.
        let mut blocks = vec![1; level];
        for _ in level..quantifiers {
            let i = rng.gen_range(0..level);
            blocks[i] += 1;
        }
        let names: Vec<Symbol> = (0..quantifiers).map(|i| Symbol::set(&format!("Z{i}"))).collect();
        // Σ_ℓ = ∃B₁ ¬∃B₂ ¬ … ∃B_ℓ K, Π_ℓ = ¬Σ_ℓ.
        let mut f = self.kernel_sentence(rng, depth, &names);
        let mut next = quantifiers;
        for (i, &b) in blocks.iter().enumerate().rev() {
            for _ in 0..b {
                next -= 1;
                f = Formula::exists_set(&names[next], f);
            }
            if i > 0 {
                f = Formula::not(f);
            }
        }
        if pi {
            Formula::not(f)
        } else {
            f
        }
    }
}

/// All subsets of a `n`-element domain as sorted vectors.
pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u64..1 << n).map(move |m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
}

/// An arbitrary formula over every node kind, with no fragment or
/// well-formedness discipline beyond arities. Used for syntax tests.
pub fn wild_formula(rng: &mut impl Rng, depth: usize) -> Formula {
    const ELEMS: [&str; 3] = ["a", "b", "x"];
    const SETS: [&str; 3] = ["P", "Q", "Z"];
    let el = |rng: &mut dyn rand::RngCore| {
        if rng.gen_bool(0.2) {
            Symbol::position()
        } else {
            Symbol::element(ELEMS[rng.gen_range(0..ELEMS.len())])
        }
    };
    let set = |rng: &mut dyn rand::RngCore| Symbol::set(SETS[rng.gen_range(0..SETS.len())]);
    let rel = |_: &mut dyn rand::RngCore, k: u32| Symbol::relation(if k == 2 { "R" } else { "T" }, k);
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..8) {
            0 => Formula::top(),
            1 => Formula::bot(),
            2 => Formula::nominal(&el(rng)),
            3 => Formula::eq(&el(rng), &el(rng)),
            4 => Formula::set(&set(rng)),
            5 => Formula::set_app(&set(rng), &el(rng)),
            6 => Formula::rel_app(&rel(rng, 2), &[el(rng), el(rng)]),
            _ => Formula::rel_app(&rel(rng, 3), &[el(rng), el(rng), el(rng)]),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..11) {
        0 => Formula::not(wild_formula(rng, d)),
        1 => Formula::or(wild_formula(rng, d), wild_formula(rng, d)),
        2 => Formula::and(wild_formula(rng, d), wild_formula(rng, d)),
        3 => Formula::implies(wild_formula(rng, d), wild_formula(rng, d)),
        4 => {
            let m = match rng.gen_range(0..4) {
                0 => Modality::Rel(rel(rng, 2)),
                1 => Modality::Inv(rel(rng, 2)),
                2 => Modality::Rel(rel(rng, 3)),
                _ => Modality::Global,
            };
            let args = (0..m.args()).map(|_| wild_formula(rng, d)).collect();
            if rng.gen_bool(0.5) {
                Formula::diamond(m, args)
            } else {
                Formula::boxed(m, args)
            }
        }
        5 => Formula::exists_elem(&Symbol::element(ELEMS[rng.gen_range(0..ELEMS.len())]), wild_formula(rng, d)),
        6 => Formula::forall_elem(&Symbol::element(ELEMS[rng.gen_range(0..ELEMS.len())]), wild_formula(rng, d)),
        7 => Formula::exists_set(&set(rng), wild_formula(rng, d)),
        8 => Formula::forall_set(&set(rng), wild_formula(rng, d)),
        9 => Formula::iff(wild_formula(rng, d), wild_formula(rng, d)),
        _ => Formula::global(wild_formula(rng, d)),
    }
}
