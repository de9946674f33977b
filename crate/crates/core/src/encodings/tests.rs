use super::*;
use crate::enumerate::enumerate_structures;
use crate::translate::{check_kit, parse_backward_kit, parse_forward_kit, print_backward_kit, print_forward_kit};

#[test]
fn names_round_trip() {
    for enc in all_encodings() {
        assert_eq!(enc.name().parse::<EncodingKind>().unwrap(), enc.kind);
    }
    assert_eq!("mu1".parse::<EncodingKind>().unwrap(), EncodingKind::Mu1 { t: 1, u: 2 });
    assert_eq!("mu5'".parse::<EncodingKind>().unwrap(), EncodingKind::Mu5Prime);
    assert!("mu6".parse::<EncodingKind>().is_err());
}

#[test]
fn encode_decode_and_sizes() {
    for enc in all_encodings() {
        for a in enumerate_structures(&enc.source, 2, false).unwrap() {
            let e = enc.encode(&a).unwrap();
            assert_eq!(e.structure.size(), enc.m * a.size() + enc.n - enc.m);
            assert!(validate(&e.structure, &enc.target), "{} {:?}", enc.name(), a);
            assert_eq!(enc.decode(&e).unwrap(), a, "{}", enc.name());
        }
    }
}

#[test]
fn kits_are_complete_and_print() {
    for enc in all_encodings() {
        assert!(enc.forward.missing_entries().is_empty(), "{}: {:?}", enc.name(), enc.forward.missing_entries());
        assert!(enc.backward.missing_entries().is_empty(), "{}: {:?}", enc.name(), enc.backward.missing_entries());
        let f = print_forward_kit(&enc.forward);
        assert_eq!(parse_forward_kit(&f).unwrap(), enc.forward, "{f}");
        let b = print_backward_kit(&enc.backward);
        assert_eq!(parse_backward_kit(&b).unwrap(), enc.backward, "{b}");
    }
}

#[test]
fn kits_hold_on_small_structures() {
    for enc in all_encodings() {
        for r in check_kit(&enc, 2).unwrap() {
            assert!(r.passed(), "{r}");
        }
    }
}

#[test]
fn broken_kit_is_caught() {
    let mut enc = LinearEncoding::new(EncodingKind::Mu3);
    enc.forward.psi_rel.insert(Modality::Rel(rel("R")), Formula::dia(&rel("R2"), Formula::set(&crate::symbol::placeholder_yi(1))));
    let [f, _] = check_kit(&enc, 2).unwrap();
    assert!(!f.passed());
    assert_eq!(f.failures().count(), 1);
}
