use std::fmt::Write;

use crate::formula::{Formula, Modality, Node};
use crate::symbol::Symbol;

fn modality(m: &Modality) -> String {
    match m {
        Modality::Rel(r) => r.name().to_string(),
        Modality::Inv(r) => format!("~{}", r.name()),
        Modality::Global => "*".into(),
    }
}

fn elements(qs: &[Symbol]) -> String {
    qs.iter().map(|q| q.name()).collect::<Vec<_>>().join(", ")
}

fn atom(f: &Formula, out: &mut String) -> bool {
    match f.node() {
        Node::Nominal(q) | Node::SetAtom(q) => out.push_str(q.name()),
        Node::Eq(p, q) => {
            let _ = write!(out, "eq({}, {})", p.name(), q.name());
        }
        Node::SetApp(p, q) => {
            let _ = write!(out, "{}({})", p.name(), q.name());
        }
        Node::RelApp(r, qs) => {
            let _ = write!(out, "{}({})", r.name(), elements(qs));
        }
        _ => return false,
    }
    true
}

/// Prints core syntax with full parenthesization; no sugar is introduced.
pub fn print_formula(f: &Formula) -> String {
    fn go(f: &Formula, out: &mut String) {
        if atom(f, out) {
            return;
        }
        match f.node() {
            Node::Not(a) => {
                out.push('!');
                go(a, out);
            }
            Node::Or(a, b) => {
                out.push('(');
                go(a, out);
                out.push_str(" | ");
                go(b, out);
                out.push(')');
            }
            Node::Diamond(m, args) => {
                let _ = write!(out, "<{}>(", modality(m));
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    go(a, out);
                }
                out.push(')');
            }
            Node::ExistsElem(q, a) => {
                let _ = write!(out, "(E {}. ", q.name());
                go(a, out);
                out.push(')');
            }
            Node::ExistsSet(p, a) => {
                let _ = write!(out, "(EX {}. ", p.name());
                go(a, out);
                out.push(')');
            }
            _ => unreachable!(),
        }
    }
    let mut out = String::new();
    go(f, &mut out);
    out
}

// Binding strength, loosest first.
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn neg(f: &Formula) -> Option<&Formula> {
    match f.node() {
        Node::Not(a) => Some(a),
        _ => None,
    }
}

fn as_implies(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f.node() {
        Node::Or(a, b) => Some((neg(a)?, b)),
        _ => None,
    }
}

fn as_and(f: &Formula) -> Option<(&Formula, &Formula)> {
    match neg(f)?.node() {
        Node::Or(a, b) => Some((neg(a)?, neg(b)?)),
        _ => None,
    }
}

fn as_iff(f: &Formula) -> Option<(&Formula, &Formula)> {
    let (l, r) = as_and(f)?;
    let (a, b) = as_implies(l)?;
    let (b2, a2) = as_implies(r)?;
    (a == a2 && b == b2).then_some((a, b))
}

fn as_box(f: &Formula) -> Option<(&Modality, Vec<&Formula>)> {
    match neg(f)?.node() {
        Node::Diamond(m, args) => Some((m, args.iter().map(neg).collect::<Option<Vec<_>>>()?)),
        _ => None,
    }
}

fn as_forall(f: &Formula) -> Option<(bool, &Symbol, &Formula)> {
    match neg(f)?.node() {
        Node::ExistsElem(q, a) => Some((false, q, neg(a)?)),
        Node::ExistsSet(p, a) => Some((true, p, neg(a)?)),
        _ => None,
    }
}

/// Prints with derived operators restored and minimal parentheses.
/// Parsing the output yields the same core formula.
pub fn pretty_formula(f: &Formula) -> String {
    fn wrap(out: &mut String, paren: bool, body: impl FnOnce(&mut String)) {
        if paren {
            out.push('(');
        }
        body(out);
        if paren {
            out.push(')');
        }
    }

    fn go(f: &Formula, ctx: u8, out: &mut String) {
        if f.node() == &Node::Nominal(Symbol::position()) {
            out.push_str("true");
            return;
        }
        if atom(f, out) {
            return;
        }
        if neg(f).is_some_and(|a| a.node() == &Node::Nominal(Symbol::position())) {
            out.push_str("false");
            return;
        }
        let binary = |out: &mut String, prec: u8, op: &str, a: &Formula, pa: u8, b: &Formula, pb: u8| {
            wrap(out, ctx > prec, |out| {
                go(a, pa, out);
                let _ = write!(out, " {op} ");
                go(b, pb, out);
            })
        };
        if let Some((a, b)) = as_iff(f) {
            return binary(out, IFF, "<->", a, IMP, b, IFF);
        }
        if let Some((a, b)) = as_and(f) {
            return binary(out, AND, "&", a, AND, b, UNARY);
        }
        if let Some((m, args)) = as_box(f) {
            return modal(out, '[', ']', m, &args);
        }
        if let Some((set, v, body)) = as_forall(f) {
            return quantifier(out, if set { "AX" } else { "A" }, v, body);
        }
        if let Some((a, b)) = as_implies(f) {
            return binary(out, IMP, "->", a, OR, b, IMP);
        }
        match f.node() {
            Node::Not(a) => {
                out.push('!');
                go(a, UNARY, out);
            }
            Node::Or(a, b) => binary(out, OR, "|", a, OR, b, AND),
            Node::Diamond(m, args) => modal(out, '<', '>', m, &args.iter().collect::<Vec<_>>()),
            Node::ExistsElem(q, a) => quantifier(out, "E", q, a),
            Node::ExistsSet(p, a) => quantifier(out, "EX", p, a),
            _ => unreachable!(),
        }
    }

    fn modal(out: &mut String, open: char, close: char, m: &Modality, args: &[&Formula]) {
        let _ = write!(out, "{open}{}{close}(", modality(m));
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            go(a, 0, out);
        }
        out.push(')');
    }

    fn quantifier(out: &mut String, kw: &str, v: &Symbol, body: &Formula) {
        let _ = write!(out, "({kw} {}. ", v.name());
        go(body, 0, out);
        out.push(')');
    }

    let mut out = String::new();
    go(f, 0, &mut out);
    out
}
