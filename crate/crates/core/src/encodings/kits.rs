//! Kit tables and image formulas of the shipped encodings.

use std::collections::BTreeMap;

use super::{rel, EncodingKind, LinearEncoding};
use crate::classes::GraphClass;
use crate::formula::{see1, tot1, Formula, Fragment, Modality};
use crate::symbol::{placeholder_xij, placeholder_xj, placeholder_y, placeholder_yi, Symbol};
use crate::translate::{BackwardKit, ForwardKit};

fn and(a: Formula, b: Formula) -> Formula {
    Formula::and(a, b)
}

fn or(a: Formula, b: Formula) -> Formula {
    Formula::or(a, b)
}

fn not(a: Formula) -> Formula {
    Formula::not(a)
}

fn dia(r: &Symbol, f: Formula) -> Formula {
    Formula::dia(r, f)
}

fn bx(r: &Symbol, f: Formula) -> Formula {
    Formula::bx(r, f)
}

fn glob(f: Formula) -> Formula {
    Formula::global(f)
}

fn gbox(f: Formula) -> Formula {
    Formula::global_box(f)
}

fn y1() -> Formula {
    Formula::set(&placeholder_yi(1))
}

fn y() -> Formula {
    Formula::set(&placeholder_y())
}

/// `$X1_<j>`: the single argument of a binary modality, copy `j`.
fn x(j: usize) -> Formula {
    Formula::set(&placeholder_xij(1, j))
}

/// `$X_<j>` of `φ_ini`.
fn xi(j: usize) -> Formula {
    Formula::set(&placeholder_xj(j))
}

fn any_x(n: usize) -> Formula {
    Formula::big_or((1..=n).map(x))
}

fn any_xi(n: usize) -> Formula {
    Formula::big_or((1..=n).map(xi))
}

struct Tables {
    forward: ForwardKit,
    backward: BackwardKit,
}

fn kits(
    source: GraphClass,
    target: GraphClass,
    (phi, psi): (Fragment, Fragment),
    m: usize,
    n: usize,
) -> Tables {
    Tables {
        forward: ForwardKit {
            source_sig: source.signature(),
            target_sig: target.signature(),
            source_fragment: phi,
            target_fragment: psi,
            psi_atom: BTreeMap::new(),
            psi_rel: BTreeMap::new(),
            psi_ini: Formula::bot(),
        },
        backward: BackwardKit {
            source_sig: source.signature(),
            target_sig: target.signature(),
            source_fragment: phi,
            target_fragment: psi,
            m,
            n,
            phi_atom: BTreeMap::new(),
            phi_rel: BTreeMap::new(),
            phi_ini: Formula::bot(),
        },
    }
}

pub(super) fn build(kind: EncodingKind) -> LinearEncoding {
    match kind {
        EncodingKind::Mu1 { t, u } => mu1(t, u),
        EncodingKind::Mu2 { t } => mu2(t),
        EncodingKind::Mu3 => mu3(),
        EncodingKind::Mu4 => mu4(),
        EncodingKind::Mu5 => mu5(false),
        EncodingKind::Mu5Prime => mu5(true),
    }
}

fn mu1(t: usize, u: usize) -> LinearEncoding {
    let source = GraphClass::Digraph { t, u };
    let target = GraphClass::Digraph { t: t + u, u: 1 };
    let n = u + 1;
    let r = rel("R");
    let mut k = kits(source, target, (Fragment::HBG, Fragment::HBG), n, n);
    // ψ_{i+1}: the R_i-ports; ψ_1: regular elements.
    let mut psi: Vec<Formula> = vec![Formula::top()];
    for i in 1..=u {
        psi.push(Formula::set(&target.label(t + i)));
    }
    psi[0] = not(Formula::big_or(psi[1..].iter().cloned()));
    let reg_y = and(psi[0].clone(), y1());

    let fw = &mut k.forward;
    for i in 1..=t {
        fw.psi_atom.insert(source.label(i), Formula::set(&target.label(i)));
    }
    for i in 1..=u {
        let ri = source.relation(i);
        let step = dia(&r, reg_y.clone());
        fw.psi_rel.insert(Modality::Rel(ri.clone()), dia(&r, and(psi[i].clone(), dia(&r, step.clone()))));
        fw.psi_rel.insert(Modality::Inv(ri), dia(&r, and(psi[i].clone(), Formula::inv_dia(&r, step))));
    }
    fw.psi_rel.insert(Modality::Global, glob(reg_y.clone()));
    fw.psi_ini = glob(and(psi[0].clone(), y()));

    let bw = &mut k.backward;
    for i in 1..=t + u {
        let p = target.label(i);
        bw.phi_atom.insert((p.clone(), 1), if i <= t { Formula::set(&source.label(i)) } else { Formula::bot() });
        for h in 1..=u {
            bw.phi_atom.insert((p.clone(), h + 1), if i == t + h { Formula::top() } else { Formula::bot() });
        }
    }
    let ports = Formula::big_or((2..=n).map(x));
    bw.phi_rel.insert((Modality::Rel(r.clone()), 1), ports.clone());
    bw.phi_rel.insert((Modality::Inv(r.clone()), 1), ports);
    for h in 1..=u {
        let rh = source.relation(h);
        bw.phi_rel.insert((Modality::Rel(r.clone()), h + 1), or(x(1), dia(&rh, x(h + 1))));
        bw.phi_rel.insert((Modality::Inv(r.clone()), h + 1), or(x(1), Formula::inv_dia(&rh, x(h + 1))));
    }
    for h in 1..=n {
        bw.phi_rel.insert((Modality::Global, h), glob(any_x(n)));
    }
    bw.phi_ini = glob(any_xi(n));

    // Image: ports are typed and unlabeled; regulars see one port of each
    // type and no regular; ports see one regular and only same-type ports;
    // links between types are symmetric.
    let mut image = Vec::new();
    for i in 1..=u {
        let others = Formula::big_or((1..=u).filter(|&j| j != i).map(|j| psi[j].clone()));
        let labelled = Formula::big_or((1..=t).map(|j| Formula::set(&target.label(j))));
        image.push(gbox(Formula::implies(psi[i].clone(), and(not(others), not(labelled)))));
    }
    let rm = Modality::Rel(r.clone());
    let regular_ok =
        Formula::big_and(std::iter::once(not(dia(&r, psi[0].clone()))).chain((1..=u).map(|i| see1(&rm, &psi[i]))));
    image.push(gbox(Formula::implies(psi[0].clone(), regular_ok)));
    for i in 1..=u {
        let others = Formula::big_or((1..=u).filter(|&j| j != i).map(|j| dia(&r, psi[j].clone())));
        image.push(gbox(Formula::implies(psi[i].clone(), and(see1(&rm, &psi[0]), not(others)))));
    }
    let xs = Symbol::set("X");
    for p in &psi {
        let xf = Formula::set(&xs);
        let back = bx(&r, Formula::implies(not(p.clone()), dia(&r, xf.clone())));
        image.push(Formula::forall_set(&xs, gbox(Formula::implies(and(p.clone(), xf), back))));
    }
    LinearEncoding {
        kind: EncodingKind::Mu1 { t, u },
        source,
        target,
        m: n,
        n,
        forward: k.forward,
        backward: k.backward,
        image: Some(Formula::big_and(image)),
    }
}

/// Gadget recognizers `ψ_2 .. ψ_{t+3}` of `μ₂`, indexed by `h - 2`.
fn mu2_gadget(t: usize, r: &Symbol) -> Vec<Formula> {
    let sink = bx(r, Formula::bot());
    let mut out = vec![sink.clone(), and(dia(r, sink.clone()), bx(r, sink.clone()))];
    for i in 1..=t {
        let prev = out[i].clone();
        let f = Formula::big_and([dia(r, sink.clone()), dia(r, prev.clone()), bx(r, or(sink.clone(), prev))]);
        out.push(f);
    }
    out
}

fn mu2(t: usize) -> LinearEncoding {
    let source = GraphClass::Digraph { t, u: 1 };
    let target = GraphClass::DIGRAPH;
    let n = t + 3;
    let r = rel("R");
    let mut k = kits(source, target, (Fragment::HBG, Fragment::HBG), 1, n);
    let gadget = mu2_gadget(t, &r);
    let g = |h: usize| gadget[h - 2].clone();
    let regular = not(Formula::big_or(gadget.iter().cloned()));

    let fw = &mut k.forward;
    for i in 1..=t {
        fw.psi_atom.insert(source.label(i), dia(&r, g(i + 3)));
    }
    fw.psi_rel.insert(Modality::Rel(r.clone()), dia(&r, and(regular.clone(), y1())));
    fw.psi_rel.insert(Modality::Inv(r.clone()), Formula::inv_dia(&r, y1()));
    fw.psi_rel.insert(Modality::Global, glob(and(regular.clone(), y1())));
    fw.psi_ini = glob(and(regular.clone(), y()));

    let bw = &mut k.backward;
    let label = |i: usize| Formula::set(&source.label(i));
    let fwd = |h: usize| match h {
        1 => Formula::big_or([dia(&r, x(1)), x(3)].into_iter().chain((1..=t).map(|i| and(label(i), x(i + 3))))),
        2 => Formula::bot(),
        3 => x(2),
        _ => or(x(2), x(h - 1)),
    };
    let inv = |h: usize| match h {
        1 => Formula::inv_dia(&r, x(1)),
        2 => Formula::big_or((0..=t).map(|i| x(i + 3))),
        3 => or(glob(x(1)), x(4)),
        _ if h < t + 3 => or(glob(and(label(h - 3), x(1))), x(h + 1)),
        _ => glob(and(label(h - 3), x(1))),
    };
    for h in 1..=n {
        bw.phi_rel.insert((Modality::Rel(r.clone()), h), fwd(h));
        bw.phi_rel.insert((Modality::Inv(r.clone()), h), inv(h));
        bw.phi_rel.insert((Modality::Global, h), glob(any_x(n)));
    }
    bw.phi_ini = glob(any_xi(n));

    let mut image = vec![glob(regular.clone())];
    image.extend(gadget.iter().map(tot1));
    image.push(gbox(Formula::implies(regular, and(dia(&r, g(3)), not(dia(&r, g(2)))))));
    LinearEncoding {
        kind: EncodingKind::Mu2 { t },
        source,
        target,
        m: 1,
        n,
        forward: k.forward,
        backward: k.backward,
        image: Some(Formula::big_and(image)),
    }
}

fn mu3() -> LinearEncoding {
    let source = GraphClass::DIGRAPH;
    let target = GraphClass::Digraph { t: 0, u: 2 };
    let (r, r1, r2) = (rel("R"), rel("R1"), rel("R2"));
    let mut k = kits(source, target, (Fragment::HBG, Fragment::HG), 1, 1);
    let fw = &mut k.forward;
    fw.psi_rel.insert(Modality::Rel(r.clone()), dia(&r1, y1()));
    fw.psi_rel.insert(Modality::Inv(r.clone()), dia(&r2, y1()));
    fw.psi_rel.insert(Modality::Global, glob(y1()));
    fw.psi_ini = glob(y());
    let bw = &mut k.backward;
    bw.phi_rel.insert((Modality::Rel(r1.clone()), 1), dia(&r, x(1)));
    bw.phi_rel.insert((Modality::Rel(r2.clone()), 1), Formula::inv_dia(&r, x(1)));
    bw.phi_rel.insert((Modality::Global, 1), glob(x(1)));
    bw.phi_ini = glob(xi(1));
    let xs = Symbol::set("X");
    let xf = Formula::set(&xs);
    let image = Formula::forall_set(
        &xs,
        gbox(Formula::implies(xf.clone(), and(bx(&r1, dia(&r2, xf.clone())), bx(&r2, dia(&r1, xf))))),
    );
    LinearEncoding {
        kind: EncodingKind::Mu3,
        source,
        target,
        m: 1,
        n: 1,
        forward: k.forward,
        backward: k.backward,
        image: Some(image),
    }
}

fn mu4() -> LinearEncoding {
    let source = GraphClass::DIGRAPH;
    let target = GraphClass::Graph { t: 1, u: 1 };
    let r = rel("R");
    let p = Formula::set(&Symbol::set("P"));
    let mut k = kits(source, target, (Fragment::HBG, Fragment::HG), 3, 6);
    let d = |f: Formula| dia(&r, f);
    let psi4 = Formula::big_and([p.clone(), not(d(p.clone())), d(not(p.clone()))]);
    let psi5 = Formula::big_and([p.clone(), d(p.clone()), d(not(p.clone()))]);
    let psi6 = Formula::big_and([p.clone(), d(p.clone()), not(d(not(p.clone())))]);
    let psi2 = d(psi4.clone());
    let psi3 = and(not(p.clone()), d(psi5.clone()));
    let psi1 = not(Formula::big_or([psi2.clone(), psi3.clone(), psi4.clone(), psi5.clone(), psi6.clone()]));
    let reg_y = and(psi1.clone(), y1());

    let fw = &mut k.forward;
    fw.psi_rel.insert(Modality::Rel(r.clone()), d(and(psi2.clone(), d(d(reg_y.clone())))));
    fw.psi_rel.insert(Modality::Inv(r.clone()), d(and(psi3.clone(), d(d(reg_y.clone())))));
    fw.psi_rel.insert(Modality::Global, glob(reg_y));
    fw.psi_ini = glob(and(psi1.clone(), y()));

    let bw = &mut k.backward;
    let pl = Symbol::set("P");
    for h in 1..=6 {
        bw.phi_atom.insert((pl.clone(), h), if h <= 3 { Formula::bot() } else { Formula::top() });
        let phi = match h {
            1 => or(x(2), x(3)),
            2 => Formula::big_or([x(1), d(x(3)), x(4)]),
            3 => Formula::big_or([x(1), Formula::inv_dia(&r, x(2)), x(5)]),
            4 => glob(x(2)),
            5 => or(glob(x(3)), x(6)),
            _ => x(5),
        };
        bw.phi_rel.insert((Modality::Rel(r.clone()), h), phi);
        bw.phi_rel.insert((Modality::Global, h), glob(any_x(6)));
    }
    bw.phi_ini = glob(any_xi(6));

    let rm = Modality::Rel(r.clone());
    let image = Formula::big_and([
        tot1(&psi4),
        tot1(&psi5),
        tot1(&psi6),
        gbox(Formula::implies(
            psi2.clone(),
            and(see1(&rm, &psi1), bx(&r, Formula::big_or([psi1.clone(), psi3.clone(), psi4.clone()]))),
        )),
        gbox(Formula::implies(
            psi3.clone(),
            and(see1(&rm, &psi1), bx(&r, Formula::big_or([psi1.clone(), psi2.clone(), psi5.clone()]))),
        )),
        gbox(Formula::implies(
            psi1.clone(),
            Formula::big_and([see1(&rm, &psi2), see1(&rm, &psi3), bx(&r, or(psi2, psi3))]),
        )),
    ]);
    LinearEncoding {
        kind: EncodingKind::Mu4,
        source,
        target,
        m: 3,
        n: 6,
        forward: k.forward,
        backward: k.backward,
        image: Some(image),
    }
}

/// `ψ₂ = ◇□⊥`, true exactly at the hub of `μ₅`.
pub(super) fn mu5_hub() -> Formula {
    let r = rel("R");
    dia(&r, bx(&r, Formula::bot()))
}

fn mu5(prime: bool) -> LinearEncoding {
    let source = GraphClass::DIGRAPH;
    let target = if prime { GraphClass::DIGRAPH } else { GraphClass::PDigraph };
    let r = rel("R");
    let psi2 = mu5_hub();
    let psi1 = dia(&r, psi2.clone());
    // Without the marker the hub has to be found globally.
    let frags = if prime { (Fragment::HG, Fragment::HG) } else { (Fragment::HG, Fragment::H) };
    let mut k = kits(source, target, frags, 1, 3);
    let fw = &mut k.forward;
    fw.psi_rel.insert(Modality::Rel(r.clone()), dia(&r, and(psi1.clone(), y1())));
    fw.psi_rel.insert(Modality::Global, dia(&r, and(psi2.clone(), dia(&r, and(psi1.clone(), y1())))));
    let reg = dia(&r, and(psi1, y()));
    fw.psi_ini = if prime { glob(and(psi2, reg)) } else { reg };
    let bw = &mut k.backward;
    for h in 1..=3 {
        let phi = match h {
            1 => or(dia(&r, x(1)), x(2)),
            2 => or(glob(x(1)), x(3)),
            _ => Formula::bot(),
        };
        bw.phi_rel.insert((Modality::Rel(r.clone()), h), phi);
        if prime {
            bw.phi_rel.insert((Modality::Global, h), glob(any_x(3)));
        }
    }
    bw.phi_ini = if prime { glob(any_xi(3)) } else { glob(xi(2)) };
    LinearEncoding {
        kind: if prime { EncodingKind::Mu5Prime } else { EncodingKind::Mu5 },
        source,
        target,
        m: 1,
        n: 3,
        forward: k.forward,
        backward: k.backward,
        image: None,
    }
}
