mod common;

use proptest::prelude::*;
use rand::Rng;
use setmodal::encodings::{boxed_backward, boxed_forward, EncodingKind, Origin};
use setmodal::translate::check_kit;
use setmodal::*;

use common::FormulaGen;

#[test]
fn kits_pass_to_size_two() {
    for enc in all_encodings() {
        for report in check_kit(&enc, 2).unwrap() {
            assert!(report.passed(), "{}: {report}", enc.name());
        }
    }
}

#[test]
fn encodings_have_linear_size_and_decode() {
    for enc in all_encodings() {
        for a in enumerate_structures(&enc.source, 2, true).unwrap() {
            let e = enc.encode(&a).unwrap();
            assert_eq!(e.structure.size(), enc.m * a.size() + enc.n - enc.m, "{}", enc.name());
            assert!(validate(&e.structure, &enc.target), "{}", enc.name());
            assert!(isomorphic(&enc.decode(&e).unwrap(), &a).unwrap(), "{}", enc.name());
            for id in 0..e.structure.size() {
                assert!(matches!(e.corr.origin(id), Some(Origin::Copy(..) | Origin::Extra(_))));
            }
        }
    }
}

#[test]
fn image_formulas_hold_on_images() {
    for enc in all_encodings() {
        let Ok(img) = enc.image_formula() else {
            assert!(matches!(enc.kind, EncodingKind::Mu5 | EncodingKind::Mu5Prime));
            continue;
        };
        for a in enumerate_structures(&enc.source, 2, true).unwrap() {
            let b = enc.encode(&a).unwrap().structure;
            assert!(satisfies(&b, img, EvalConfig::default()).unwrap(), "{}", enc.name());
        }
    }
}

fn round(kind: EncodingKind, seed: u64) {
    let enc = LinearEncoding::new(kind);
    let mut rng = common::rng(seed);
    let sources: Vec<Structure> = enumerate_structures(&enc.source, 2, true).unwrap().collect();
    let level = rng.gen_range(0..=2);
    let q = if level == 0 { 0 } else { level };
    let pi = rng.gen_bool(0.5);
    let phi = FormulaGen::over(&enc.source.signature(), enc.forward.source_fragment).sentence(&mut rng, level, q, pi, 3);
    let psi = FormulaGen::over(&enc.target.signature(), enc.backward.target_fragment).sentence(&mut rng, level, q, pi, 3);
    let fwd = forward_translate(&enc.forward, &phi).unwrap();
    let bwd = backward_translate(&enc.backward, &psi).unwrap();
    let cfg = EvalConfig::default().with_cap(64);
    for a in &sources {
        let b = enc.encode(a).unwrap().structure;
        assert_eq!(satisfies(a, &phi, cfg).unwrap(), satisfies(&b, &fwd, cfg).unwrap(), "{kind} forward {phi}");
        assert_eq!(satisfies(&b, &psi, cfg).unwrap(), satisfies(a, &bwd, cfg).unwrap(), "{kind} backward {psi}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn translations_preserve_truth(seed in any::<u64>(), which in 0usize..12) {
        round(all_encodings()[which].kind, seed);
    }

    #[test]
    fn boxed_contracts(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let mu5p = LinearEncoding::new(EncodingKind::Mu5Prime);
        let sig = mu5p.source.signature();
        let pi = rng.gen_bool(0.5);
        let phi = FormulaGen::over(&sig, Fragment::HG).sentence(&mut rng, 2, 2, pi, 2);
        let mut psig = sig.clone();
        psig.insert(Symbol::position());
        let psi = Formula::global_box(FormulaGen::over(&psig, Fragment::H).sentence(&mut rng, 2, 2, true, 2));
        let (f, b) = (boxed_forward(&phi).unwrap(), boxed_backward(&psi).unwrap());
        let cfg = EvalConfig::default();
        for d in enumerate_structures(&mu5p.source, 2, true).unwrap() {
            let e = mu5p.encode(&d).unwrap().structure;
            prop_assert_eq!(satisfies(&d, &phi, cfg).unwrap(), satisfies(&e, &f, cfg).unwrap());
            prop_assert_eq!(satisfies(&e, &psi, cfg).unwrap(), satisfies(&d, &b, cfg).unwrap());
        }
    }
}
