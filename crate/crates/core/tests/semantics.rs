mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::Rng;
use setmodal::classes::relation_symbol;
use setmodal::formula::{see1, substitute_sets, tot1};
use setmodal::*;

use common::FormulaGen;

fn hybrid_sig() -> BTreeSet<Symbol> {
    [Symbol::position(), relation_symbol(1, 1), Symbol::set("P"), Symbol::set("Q"), Symbol::element("c")]
        .into_iter()
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn evaluator_matches_reference(seed in any::<u64>(), size in 1usize..=4, depth in 0usize..=3) {
        let mut rng = common::rng(seed);
        let sig = hybrid_sig();
        let a = common::random_structure(&mut rng, size, &sig, 0.4);
        let gen = FormulaGen::over(&sig, Fragment::HBG);
        let level = rng.gen_range(0..=2);
        let q = if level == 0 { 0 } else { level };
        let pi = rng.gen_bool(0.5);
        let f = gen.sentence(&mut rng, level, q, pi, depth.max(1));
        prop_assert_eq!(satisfies(&a, &f, EvalConfig::default()).unwrap(), common::naive_satisfies(&a, &f), "{}", f);
        let k = gen.kernel(&mut rng, depth, &[]);
        prop_assert_eq!(satisfying_set(&a, &k, EvalConfig::default()).unwrap(), common::naive_satisfying_set(&a, &k));
    }

    #[test]
    fn see1_counts_witnesses(seed in any::<u64>(), size in 1usize..=4) {
        let mut rng = common::rng(seed);
        let sig = hybrid_sig();
        let a = common::random_structure(&mut rng, size, &sig, 0.4);
        let r = relation_symbol(1, 1);
        let phi = FormulaGen::over(&sig, Fragment::HBG).kernel(&mut rng, 2, &[]);
        let holds = common::naive_satisfying_set(&a, &phi);
        let p = a.position().unwrap();
        let succ = a.domain().filter(|&d| a.relation(&r).unwrap().contains(&vec![p, d]) && holds.contains(&d)).count();
        let v = satisfies(&a, &see1(&Modality::Rel(r), &phi), EvalConfig::default()).unwrap();
        prop_assert_eq!(v, succ == 1);
        prop_assert_eq!(satisfies(&a, &tot1(&phi), EvalConfig::default()).unwrap(), holds.len() == 1);
    }

    #[test]
    fn set_substitution_is_semantic(seed in any::<u64>(), size in 1usize..=3) {
        let mut rng = common::rng(seed);
        let sig = hybrid_sig();
        let a = common::random_structure(&mut rng, size, &sig, 0.4);
        let gen = FormulaGen::over(&sig, Fragment::HBG);
        let q = Symbol::set("Q");
        // Binding Q inside the target forces capture avoidance, since the
        // replacement mentions the free Q.
        let body = gen.kernel(&mut rng, 2, &[]);
        let f = match rng.gen_range(0..3) {
            0 => body,
            1 => Formula::exists_set(&q, body),
            _ => Formula::or(gen.kernel(&mut rng, 1, &[]), Formula::dia(&relation_symbol(1, 1), Formula::exists_set(&q, body))),
        };
        let psi = gen.kernel(&mut rng, 2, &[]);
        let p = Symbol::set("P");
        let g = substitute_sets(&f, &BTreeMap::from([(p.clone(), psi.clone())])).unwrap();
        let members = common::naive_satisfying_set(&a, &psi);
        let b = a.extend(&p, Value::set(members)).unwrap();
        prop_assert_eq!(common::naive_satisfies(&a, &g), common::naive_satisfies(&b, &f), "{} into {}", psi, f);
    }

    #[test]
    fn printers_round_trip(seed in any::<u64>(), depth in 0usize..=6) {
        let mut rng = common::rng(seed);
        let f = common::wild_formula(&mut rng, depth);
        prop_assert_eq!(parse_formula(&print_formula(&f)).unwrap(), f.clone());
        prop_assert_eq!(parse_formula(&pretty_formula(&f)).unwrap(), f);
    }

    #[test]
    fn standard_translation_agrees(seed in any::<u64>(), size in 1usize..=4) {
        let mut rng = common::rng(seed);
        let sig = hybrid_sig();
        let a = common::random_structure(&mut rng, size, &sig, 0.4);
        let phi = FormulaGen::over(&sig, Fragment::HBG).kernel_sentence(&mut rng, 3, &[]);
        let fo = std_translate(&phi).unwrap();
        prop_assert_eq!(satisfies(&a, &fo, EvalConfig::default()).unwrap(), common::naive_satisfies(&a, &phi));
    }
}

#[test]
fn structures_round_trip_through_text() {
    let mut rng = common::rng(11);
    let sig = hybrid_sig();
    for size in 1..=4 {
        let a = common::random_structure(&mut rng, size, &sig, 0.5);
        assert_eq!(parse_structure(&print_structure(&a)).unwrap(), a);
    }
}

#[test]
fn stipulation_on_foreign_symbols() {
    let a = Structure::new(2).unwrap();
    let v = check(&a, &Formula::set(&Symbol::set("P")), EvalConfig::default()).unwrap();
    assert!(!v.value && v.stipulated);
    assert!(v.missing.contains(&Symbol::set("P")));
}

#[test]
fn compiled_formula_reuse() {
    let mut rng = common::rng(12);
    let sig = hybrid_sig();
    let f = Formula::exists_set(&Symbol::set("Z"), Formula::global(Formula::and(Formula::set(&Symbol::set("Z")), Formula::set(&Symbol::set("P")))));
    let c = CompiledFormula::new(&f);
    for size in 1..=4 {
        let a = common::random_structure(&mut rng, size, &sig, 0.5);
        assert_eq!(c.satisfies(&a, EvalConfig::default()).unwrap(), satisfies(&a, &f, EvalConfig::default()).unwrap());
        assert_eq!(c.satisfies(&a, EvalConfig::default()).unwrap(), !a.set_members(&Symbol::set("P")).unwrap().is_empty());
    }
}
