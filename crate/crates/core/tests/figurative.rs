use std::collections::BTreeSet;

use proptest::prelude::*;
use setmodal::figurative::*;

fn set(xs: &[usize]) -> Members {
    xs.iter().copied().collect()
}

fn family(universe: &[usize], members: &[&[usize]]) -> FiniteFamily {
    FiniteFamily::new(set(universe), members.iter().map(|m| set(m)).collect()).unwrap()
}

#[test]
fn tunnel_restricts_targets() {
    // μ embeds {0,1} into {10,11,12}; 12 is outside the tunnel.
    let mu = PartialInjection::new([(0, 10), (1, 11)]).unwrap();
    let l = family(&[0, 1], &[&[0], &[]]);
    let m = family(&[10, 11, 12], &[&[10, 12], &[12]]);
    assert!(forward_included(&l, &m, &mu).unwrap());
    assert!(!backward_included(&l, &family(&[10, 11, 12], &[&[11]]), &mu).unwrap());
    assert!(forward_equal(&l, &m, &mu).unwrap());
    assert_eq!(forward_counterexample(&family(&[0, 1], &[&[1]]), &m, &mu).unwrap(), Some(set(&[1])));
}

#[test]
fn invalid_maps_are_rejected() {
    assert!(matches!(PartialInjection::new([(0, 5), (1, 5)]), Err(FigError::NotInjective(..))));
    let mu = PartialInjection::new([(7, 1)]).unwrap();
    let l = family(&[0], &[]);
    assert!(matches!(forward_included(&l, &family(&[1], &[]), &mu), Err(FigError::SourceOutside(7))));
    assert!(FiniteFamily::new(set(&[0]), vec![set(&[3])]).is_err());
}

#[test]
fn lemma4_needs_totality() {
    // With 1 outside dom μ the families differ on C but agree on D.
    let mu = PartialInjection::new([(0, 10)]).unwrap();
    let x = LemmaInstance {
        l1: family(&[0, 1], &[&[0]]),
        l2: family(&[0, 1], &[&[0, 1]]),
        m1: family(&[10], &[&[10]]),
        m2: family(&[10], &[&[10]]),
        mu,
    };
    assert!(matches!(lemma4_check(&x).unwrap(), LemmaVerdict::Inapplicable(_)));
    // Once μ is total the difference shows up in M.
    let total = LemmaInstance {
        l1: family(&[0, 1], &[&[0]]),
        l2: family(&[0, 1], &[&[0, 1]]),
        m1: family(&[10, 11], &[&[10]]),
        m2: family(&[10, 11], &[&[10, 11]]),
        mu: PartialInjection::new([(0, 10), (1, 11)]).unwrap(),
    };
    assert!(matches!(lemma4_check(&total).unwrap(), LemmaVerdict::Pass(_)));
}

#[test]
fn lemma5_checks_hypotheses() {
    let mu = PartialInjection::identity(&set(&[0, 1]));
    let l = family(&[0, 1], &[&[0]]);
    let m = family(&[0, 1], &[&[0], &[0, 1], &[]]);
    let x = LemmaInstance { l1: l.clone(), l2: l.clone(), m1: m.clone(), m2: m.clone(), mu: mu.clone() };
    assert!(matches!(lemma5_check(&x).unwrap(), LemmaVerdict::Pass(_)));
    let open = family(&[0, 1], &[&[0], &[1], &[0, 1]]);
    let y = LemmaInstance { m1: open, ..x };
    assert!(matches!(lemma5_check(&y).unwrap(), LemmaVerdict::Inapplicable(_)));
}

#[test]
fn text_formats_round_trip() {
    let f = family(&[0, 1, 2], &[&[0, 1], &[]]);
    assert_eq!(parse_family(&print_family(&f)).unwrap(), f);
    let mu = PartialInjection::new([(0, 3), (2, 4)]).unwrap();
    assert_eq!(parse_injection(&print_injection(&mu)).unwrap(), mu);
    let text = "# comment\nfamily\nuniverse 0 1\nmember 1\nmember\n";
    assert_eq!(parse_family(text).unwrap(), family(&[0, 1], &[&[1], &[]]));
    assert!(parse_family("family\nmember 0\n").is_err());
    assert!(parse_injection("injection\n0 -> x\n").is_err());
}

fn members_strategy(n: usize) -> impl Strategy<Value = Vec<Members>> {
    prop::collection::vec(prop::collection::btree_set(0..n, 0..=n), 0..5)
}

proptest! {
    #[test]
    fn identity_is_reflexive(ms in members_strategy(4)) {
        let c: BTreeSet<usize> = (0..4).collect();
        let f = FiniteFamily::new(c.clone(), ms).unwrap();
        prop_assert!(forward_equal(&f, &f, &PartialInjection::identity(&c)).unwrap());
    }

    #[test]
    fn inverse_undoes_image(pairs in prop::collection::btree_map(0usize..6, 0usize..6, 0..6), s in prop::collection::btree_set(0usize..6, 0..6)) {
        let mut seen = BTreeSet::new();
        let pairs: Vec<(usize, usize)> = pairs.into_iter().filter(|&(_, b)| seen.insert(b)).collect();
        let mu = PartialInjection::new(pairs).unwrap();
        let back = mu.inverse().image(&mu.image(&s));
        prop_assert_eq!(back, s.intersection(&mu.domain()).copied().collect::<Members>());
        prop_assert_eq!(mu.then(&mu.inverse()), PartialInjection::identity(&mu.domain()));
    }
}
