//! Line-oriented text format for kits.
//!
//! ```text
//! forward kit
//! source-signature: P R/2
//! source-fragment: HBG
//! target-signature: P1 P2 R/2
//! target-fragment: HBG
//! atom P := P1
//! rel R := <R>(P2 & <R><R>(!P2 & $Y1))
//! rel ~R := ...
//! rel * := <*>(!P2 & $Y1)
//! ini := <*>(!P2 & $Y)
//! ```
//!
//! Backward kits start with `backward kit`, add `m:` and `n:` lines and
//! index entries by copy: `atom <Q> <h> := ...`, `rel <S> <h> := ...`.
//! `#` starts a comment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use super::{BackwardKit, ForwardKit};
use crate::formula::{Formula, Fragment, Modality};
use crate::symbol::Symbol;
use crate::syntax::{parse_formula_with, print_formula, strip_comment, ParseError, ParseOptions};

fn sig_text(sig: &BTreeSet<Symbol>) -> String {
    sig.iter().map(|s| format!("{s:?}")).collect::<Vec<_>>().join(" ")
}

fn modality_text(m: &Modality) -> String {
    match m {
        Modality::Rel(r) => r.name().to_string(),
        Modality::Inv(r) => format!("~{}", r.name()),
        Modality::Global => "*".into(),
    }
}

fn header(out: &mut String, kind: &str, ss: &BTreeSet<Symbol>, sf: Fragment, ts: &BTreeSet<Symbol>, tf: Fragment) {
    let _ = writeln!(out, "{kind} kit");
    let _ = writeln!(out, "source-signature: {}", sig_text(ss));
    let _ = writeln!(out, "source-fragment: {sf}");
    let _ = writeln!(out, "target-signature: {}", sig_text(ts));
    let _ = writeln!(out, "target-fragment: {tf}");
}

pub fn print_forward_kit(kit: &ForwardKit) -> String {
    let mut out = String::new();
    header(&mut out, "forward", &kit.source_sig, kit.source_fragment, &kit.target_sig, kit.target_fragment);
    for (p, f) in &kit.psi_atom {
        let _ = writeln!(out, "atom {p} := {}", print_formula(f));
    }
    for (m, f) in &kit.psi_rel {
        let _ = writeln!(out, "rel {} := {}", modality_text(m), print_formula(f));
    }
    let _ = writeln!(out, "ini := {}", print_formula(&kit.psi_ini));
    out
}

pub fn print_backward_kit(kit: &BackwardKit) -> String {
    let mut out = String::new();
    header(&mut out, "backward", &kit.source_sig, kit.source_fragment, &kit.target_sig, kit.target_fragment);
    let _ = writeln!(out, "m: {}", kit.m);
    let _ = writeln!(out, "n: {}", kit.n);
    for ((q, h), f) in &kit.phi_atom {
        let _ = writeln!(out, "atom {q} {h} := {}", print_formula(f));
    }
    for ((m, h), f) in &kit.phi_rel {
        let _ = writeln!(out, "rel {} {h} := {}", modality_text(m), print_formula(f));
    }
    let _ = writeln!(out, "ini := {}", print_formula(&kit.phi_ini));
    out
}

fn parse_sig(text: &str, line: usize) -> Result<BTreeSet<Symbol>, ParseError> {
    let mut out = BTreeSet::new();
    for tok in text.split_whitespace() {
        let s = match tok.split_once('/') {
            Some((name, k)) => {
                let k: u32 = k.parse().ok().filter(|&k| k >= 1).ok_or_else(|| ParseError::at(line, 1, "bad arity"))?;
                Symbol::relation(name, k)
            }
            None if tok == "@" => Symbol::position(),
            None if tok.starts_with(|c: char| c.is_ascii_uppercase()) => Symbol::set(tok),
            None if tok.starts_with(|c: char| c.is_ascii_lowercase()) => Symbol::element(tok),
            None => return Err(ParseError::at(line, 1, format!("bad symbol `{tok}`"))),
        };
        out.insert(s);
    }
    Ok(out)
}

fn formula(text: &str, line: usize) -> Result<Formula, ParseError> {
    parse_formula_with(text, ParseOptions { placeholders: true })
        .map_err(|e| ParseError { line, col: e.col, message: e.message, expected: e.expected })
}

fn lookup(sig: &BTreeSet<Symbol>, name: &str, line: usize) -> Result<Symbol, ParseError> {
    sig.iter()
        .find(|s| s.name() == name && !s.is_position())
        .cloned()
        .ok_or_else(|| ParseError::at(line, 1, format!("`{name}` is not in the signature")))
}

fn parse_modality(sig: &BTreeSet<Symbol>, text: &str, line: usize) -> Result<Modality, ParseError> {
    if text == "*" {
        return Ok(Modality::Global);
    }
    let (inverse, name) = match text.strip_prefix('~') {
        Some(n) => (true, n),
        None => (false, text),
    };
    let r = lookup(sig, name, line)?;
    if r.arity() < 2 {
        return Err(ParseError::at(line, 1, format!("`{name}` is not a relation of arity at least 2")));
    }
    Ok(if inverse { Modality::Inv(r) } else { Modality::Rel(r) })
}

fn parse_index(text: &str, line: usize) -> Result<usize, ParseError> {
    text.parse().ok().filter(|&h| h >= 1).ok_or_else(|| ParseError::at(line, 1, format!("bad copy index `{text}`")))
}

struct Common {
    source_sig: BTreeSet<Symbol>,
    target_sig: BTreeSet<Symbol>,
    source_fragment: Fragment,
    target_fragment: Fragment,
    m: Option<usize>,
    n: Option<usize>,
    /// `(keyword, key words, formula, line)`.
    entries: Vec<(String, Vec<String>, Formula, usize)>,
    ini: Option<Formula>,
}

fn parse_common(text: &str, kind: &str) -> Result<Common, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, strip_comment(l))).filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, l)) if l.split_whitespace().eq([kind, "kit"]) => {}
        Some((n, _)) => return Err(ParseError::at(n, 1, format!("expected `{kind} kit` header"))),
        None => return Err(ParseError::at(1, 1, "empty input")),
    }
    let mut c = Common {
        source_sig: BTreeSet::new(),
        target_sig: BTreeSet::new(),
        source_fragment: Fragment::HBG,
        target_fragment: Fragment::HBG,
        m: None,
        n: None,
        entries: Vec::new(),
        ini: None,
    };
    let mut seen = BTreeSet::new();
    for (n, l) in lines {
        if let Some((lhs, rhs)) = l.split_once(":=") {
            let words: Vec<String> = lhs.split_whitespace().map(str::to_string).collect();
            let f = formula(rhs.trim(), n)?;
            match words.first().map(String::as_str) {
                Some("ini") if words.len() == 1 => c.ini = Some(f),
                Some("atom") | Some("rel") => c.entries.push((words[0].clone(), words[1..].to_vec(), f, n)),
                _ => return Err(ParseError::at(n, 1, "expected `atom`, `rel` or `ini`")),
            }
            continue;
        }
        let (key, value) = l.split_once(':').ok_or_else(|| ParseError::at(n, 1, "expected `key: value`"))?;
        let value = value.trim();
        if !seen.insert(key.trim().to_string()) {
            return Err(ParseError::at(n, 1, format!("duplicate `{}`", key.trim())));
        }
        let frag = |v: &str| v.parse::<Fragment>().map_err(|e| ParseError::at(n, 1, e));
        let num = |v: &str| v.parse::<usize>().map_err(|_| ParseError::at(n, 1, "bad number"));
        match key.trim() {
            "source-signature" => c.source_sig = parse_sig(value, n)?,
            "target-signature" => c.target_sig = parse_sig(value, n)?,
            "source-fragment" => c.source_fragment = frag(value)?,
            "target-fragment" => c.target_fragment = frag(value)?,
            "m" if kind == "backward" => c.m = Some(num(value)?),
            "n" if kind == "backward" => c.n = Some(num(value)?),
            other => return Err(ParseError::at(n, 1, format!("unknown key `{other}`"))),
        }
    }
    if c.ini.is_none() {
        return Err(ParseError::at(1, 1, "missing `ini := ...`"));
    }
    Ok(c)
}

pub fn parse_forward_kit(text: &str) -> Result<ForwardKit, ParseError> {
    let c = parse_common(text, "forward")?;
    let mut psi_atom = BTreeMap::new();
    let mut psi_rel = BTreeMap::new();
    for (kw, words, f, n) in c.entries {
        let [name] = words.as_slice() else {
            return Err(ParseError::at(n, 1, format!("expected `{kw} <name> := ...`")));
        };
        let dup = if kw == "atom" {
            psi_atom.insert(lookup(&c.source_sig, name, n)?, f).is_some()
        } else {
            psi_rel.insert(parse_modality(&c.source_sig, name, n)?, f).is_some()
        };
        if dup {
            return Err(ParseError::at(n, 1, format!("duplicate entry for `{name}`")));
        }
    }
    Ok(ForwardKit {
        source_sig: c.source_sig,
        target_sig: c.target_sig,
        source_fragment: c.source_fragment,
        target_fragment: c.target_fragment,
        psi_atom,
        psi_rel,
        psi_ini: c.ini.expect("checked"),
    })
}

pub fn parse_backward_kit(text: &str) -> Result<BackwardKit, ParseError> {
    let c = parse_common(text, "backward")?;
    let (Some(m), Some(n)) = (c.m, c.n) else {
        return Err(ParseError::at(1, 1, "missing `m:` or `n:`"));
    };
    if m == 0 || m > n {
        return Err(ParseError::at(1, 1, "need 1 <= m <= n"));
    }
    let mut phi_atom = BTreeMap::new();
    let mut phi_rel = BTreeMap::new();
    for (kw, words, f, line) in c.entries {
        let [name, h] = words.as_slice() else {
            return Err(ParseError::at(line, 1, format!("expected `{kw} <name> <copy> := ...`")));
        };
        let h = parse_index(h, line)?;
        if h > n {
            return Err(ParseError::at(line, 1, format!("copy {h} exceeds n = {n}")));
        }
        let dup = if kw == "atom" {
            phi_atom.insert((lookup(&c.target_sig, name, line)?, h), f).is_some()
        } else {
            phi_rel.insert((parse_modality(&c.target_sig, name, line)?, h), f).is_some()
        };
        if dup {
            return Err(ParseError::at(line, 1, format!("duplicate entry for `{name}` at copy {h}")));
        }
    }
    Ok(BackwardKit {
        source_sig: c.source_sig,
        target_sig: c.target_sig,
        source_fragment: c.source_fragment,
        target_fragment: c.target_fragment,
        m,
        n,
        phi_atom,
        phi_rel,
        phi_ini: c.ini.expect("checked"),
    })
}
