//! Concrete syntax: formulas, structures and their printers.

mod lexer;
mod parser;
mod printer;

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write;

use thiserror::Error;

pub use parser::{parse_formula, parse_formula_with, parse_surface, ParseOptions};
pub use printer::{pretty_formula, print_formula};

use crate::structure::{Structure, Value};
use crate::symbol::Symbol;

/// A diagnostic with a 1-based source position.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn at(line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError { line, col, message: message.into(), expected: Vec::new() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

/// Splits off a `#` comment.
pub(crate) fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(a, _)| a).trim()
}

fn parse_id(s: &str, size: usize, line: usize) -> Result<usize, ParseError> {
    let id: usize = s.trim().parse().map_err(|_| ParseError::at(line, 1, format!("bad element id `{}`", s.trim())))?;
    if id >= size {
        return Err(ParseError::at(line, 1, format!("element id {id} outside domain of size {size}")));
    }
    Ok(id)
}

fn braces(s: &str, line: usize) -> Result<&str, ParseError> {
    s.trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| ParseError::at(line, 1, "expected `{...}`"))
}

fn parse_tuples(body: &str, k: usize, size: usize, line: usize) -> Result<Vec<Vec<usize>>, ParseError> {
    let mut out = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        let inner;
        (inner, rest) = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| ParseError::at(line, 1, "expected `(id,...)`"))?;
        let t = inner.split(',').map(|s| parse_id(s, size, line)).collect::<Result<Vec<_>, _>>()?;
        if t.len() != k {
            return Err(ParseError::at(line, 1, format!("tuple of length {} for arity {k}", t.len())));
        }
        out.push(t);
        rest = rest.trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
        } else if !rest.is_empty() {
            return Err(ParseError::at(line, 1, "expected `,` between tuples"));
        }
    }
    Ok(out)
}

fn check_name(name: &str, set_like: bool, line: usize) -> Result<(), ParseError> {
    let mut cs = name.chars();
    let ok = if name == "@" {
        !set_like
    } else {
        let head = match cs.next() {
            Some(c) if set_like => c.is_ascii_uppercase(),
            Some(c) => c.is_ascii_lowercase() || c == '_',
            None => false,
        };
        head && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
    };
    if ok {
        Ok(())
    } else {
        Err(ParseError::at(line, 1, format!("bad symbol name `{name}`")))
    }
}

/// Parses the line-oriented structure format. `#` starts a comment.
pub fn parse_structure(text: &str) -> Result<Structure, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, strip_comment(l))).filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, "structure")) => {}
        Some((n, _)) => return Err(ParseError::at(n, 1, "expected `structure` header")),
        None => return Err(ParseError::at(1, 1, "empty input")),
    }
    let size = match lines.next() {
        Some((n, l)) => {
            let v = l.strip_prefix("domain").ok_or_else(|| ParseError::at(n, 1, "expected `domain N`"))?;
            v.trim().parse::<usize>().map_err(|_| ParseError::at(n, 8, "bad domain size"))?
        }
        None => return Err(ParseError::at(1, 1, "missing `domain N`")),
    };
    let mut a = Structure::new(size).map_err(|e| ParseError::at(2, 1, e.to_string()))?;
    let mut declared = BTreeSet::new();
    for (n, l) in lines {
        let (kw, rest) = l.split_once(char::is_whitespace).ok_or_else(|| ParseError::at(n, 1, "expected a declaration"))?;
        let (lhs, rhs) = rest.split_once('=').ok_or_else(|| ParseError::at(n, 1, "expected `=`"))?;
        let lhs = lhs.trim();
        let (sym, value) = match kw {
            "elem" => {
                check_name(lhs, false, n)?;
                let s = if lhs == "@" { Symbol::position() } else { Symbol::element(lhs) };
                (s, Value::Element(parse_id(rhs, size, n)?))
            }
            "set" => {
                check_name(lhs, true, n)?;
                let body = braces(rhs, n)?;
                let ids = body
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse_id(s, size, n))
                    .collect::<Result<Vec<_>, _>>()?;
                (Symbol::set(lhs), Value::set(ids))
            }
            "rel" => {
                let (name, k) = lhs.split_once('/').ok_or_else(|| ParseError::at(n, 1, "expected `Name/arity`"))?;
                let name = name.trim();
                check_name(name, true, n)?;
                let k: usize = k.trim().parse().map_err(|_| ParseError::at(n, 1, "bad arity"))?;
                if k == 0 {
                    return Err(ParseError::at(n, 1, "arity must be at least 1"));
                }
                let tuples = parse_tuples(braces(rhs, n)?, k, size, n)?;
                (Symbol::relation(name, k as u32), Value::Relation(tuples.into_iter().collect()))
            }
            other => return Err(ParseError::at(n, 1, format!("unknown declaration `{other}`"))),
        };
        if !declared.insert(sym.name().to_string()) {
            return Err(ParseError::at(n, 1, format!("duplicate declaration of `{}`", sym.name())));
        }
        a.assign(&sym, value).map_err(|e| ParseError::at(n, 1, e.to_string()))?;
    }
    Ok(a)
}

pub fn print_structure(a: &Structure) -> String {
    let mut out = format!("structure\ndomain {}\n", a.size());
    for (s, e) in a.elements() {
        let _ = writeln!(out, "elem {} = {e}", s.name());
    }
    for (s, tuples) in a.relations() {
        if s.arity() == 1 {
            let ids: Vec<String> = tuples.iter().map(|t| t[0].to_string()).collect();
            let _ = writeln!(out, "set {} = {{{}}}", s.name(), ids.join(","));
        } else {
            let ts: Vec<String> = tuples
                .iter()
                .map(|t| format!("({})", t.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
                .collect();
            let _ = writeln!(out, "rel {}/{} = {{{}}}", s.name(), s.arity(), ts.join(","));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Formula, Modality};

    #[test]
    fn formula_examples() {
        let p = Symbol::set("P");
        let r = Symbol::relation("R", 2);
        assert_eq!(parse_formula("<R>(P)").unwrap(), Formula::dia(&r, Formula::set(&p)));
        assert_eq!(parse_formula("<>P").unwrap(), Formula::dia(&r, Formula::set(&p)));
        assert_eq!(parse_formula("EX P. !(P)").unwrap(), Formula::exists_set(&p, Formula::not(Formula::set(&p))));
        let y = Symbol::set("Y_T");
        let r2 = Symbol::relation("R2", 2);
        let border = Formula::global_box(Formula::implies(Formula::set(&y), Formula::bx(&r2, Formula::set(&y))));
        assert_eq!(parse_formula("[*] (Y_T -> [2] Y_T)").unwrap(), border);
    }

    #[test]
    fn precedence() {
        let f = parse_formula("A | B & C -> D <-> E").unwrap();
        let g = parse_formula("(((A | (B & C)) -> D) <-> E)").unwrap();
        assert_eq!(f, g);
        let f = parse_formula("A -> B -> C").unwrap();
        assert_eq!(f, parse_formula("A -> (B -> C)").unwrap());
        let f = parse_formula("P & E x. Q(x) | x").unwrap();
        assert_eq!(f, parse_formula("P & (E x. (Q(x) | x))").unwrap());
        // Quantifier keywords without a following `v.` are ordinary names.
        assert!(parse_formula("E & A").is_ok());
    }

    #[test]
    fn polyadic_and_inverse() {
        let s = Symbol::relation("S", 3);
        let f = parse_formula("[~S](P, @)").unwrap();
        let expect = Formula::boxed(Modality::Inv(s), vec![Formula::set(&Symbol::set("P")), Formula::top()]);
        assert_eq!(f, expect);
        let at = Symbol::position();
        let g = parse_formula("R(@, x) & eq(x, y)").unwrap();
        let (x, y) = (Symbol::element("x"), Symbol::element("y"));
        assert_eq!(
            g,
            Formula::and(Formula::rel_app(&Symbol::relation("R", 2), &[at, x.clone()]), Formula::eq(&x, &y))
        );
    }

    #[test]
    fn diagnostics() {
        let e = parse_formula("P &").unwrap_err();
        assert_eq!((e.line, e.col), (1, 4));
        assert!(e.expected.contains(&"formula".to_string()));
        let e = parse_formula("P\n  & )").unwrap_err();
        assert_eq!((e.line, e.col), (2, 5));
        assert!(parse_formula("<*>(P, Q)").is_err());
        assert!(parse_formula("$Y").is_err());
        assert!(parse_formula_with("$Y & $X1_2", ParseOptions { placeholders: true }).is_ok());
        assert!(parse_formula("EX p. p").is_err());
    }

    #[test]
    fn printers_round_trip() {
        for text in [
            "<R>(P) & !Q -> [~R2](true)",
            "(A x. R(x, @) <-> eq(x, y)) | false",
            "AX P. [*](P -> <1>(P & Q & Z))",
            "!!false | !(P | Q) & (P -> Q) -> R",
            "(P <-> Q) <-> (Q <-> P)",
        ] {
            let f = parse_formula(text).unwrap();
            assert_eq!(parse_formula(&print_formula(&f)).unwrap(), f, "{text}");
            assert_eq!(parse_formula(&pretty_formula(&f)).unwrap(), f, "{}", pretty_formula(&f));
        }
        let f = parse_formula("P & Q & Z").unwrap();
        assert_eq!(pretty_formula(&f), "P & Q & Z");
        assert_eq!(pretty_formula(&parse_formula("A x. [R](x)").unwrap()), "(A x. [R](x))");
    }

    #[test]
    fn structure_round_trip() {
        let text = "structure\ndomain 3\nelem @ = 1\nelem c = 2\nset P = {0,2}\nrel R/2 = {(0,1),(2,2)}\nrel Q/1 = {}\n";
        let a = parse_structure(text).unwrap();
        assert_eq!(a.position(), Some(1));
        assert_eq!(parse_structure(&print_structure(&a)).unwrap(), a);
        let one = parse_structure("structure\ndomain 1\nrel R/2 = {}").unwrap();
        assert_eq!(one.size(), 1);
        assert!(one.has_symbol(&Symbol::relation("R", 2)));
    }

    #[test]
    fn structure_diagnostics() {
        let e = parse_structure("structure\ndomain 2\nset P = {0}\nset P = {1}").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.message.contains("duplicate"));
        assert!(parse_structure("structure\ndomain 2\nset P = {2}").is_err());
        assert!(parse_structure("structure\ndomain 2\nrel R/2 = {(0)}").is_err());
        assert!(parse_structure("domain 2").is_err());
        let ok = parse_structure("# comment\nstructure\ndomain 2 # two\nset P = { 0 , 1 }\n# trailing\n").unwrap();
        assert_eq!(ok.set_members(&Symbol::set("P")).unwrap().len(), 2);
    }
}
