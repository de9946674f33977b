//! Exhaustive verification of kits against an encoding on small structures.
//!
//! Every clause of the kit contract is checked on one representative per
//! isomorphism class of the source class, for every assignment of the
//! placeholder sets. Forward clauses quantify over all extensions of a set
//! beyond copy 1; those are decided by three-valued evaluation and, where
//! that leaves points open, by branching on the unknown bits.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{atom_symbols, required_modalities, BackwardKit, ForwardKit};
use crate::encodings::{Encoded, EncodingError, LinearEncoding};
use crate::enumerate::enumerate_structures;
use crate::eval::{EvalError, Prepared, Runner};
use crate::formula::{Formula, Modality};
use crate::structure::{Structure, StructureError};
use crate::symbol::{placeholder_xij, placeholder_xj, placeholder_y, placeholder_yi, Symbol};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseReport {
    pub name: String,
    /// Assignments checked, summed over structures.
    pub cases: u64,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KitReport {
    pub kit: String,
    pub max_size: usize,
    pub structures: u64,
    pub clauses: Vec<ClauseReport>,
}

impl KitReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.counterexample.is_none())
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClauseReport> {
        self.clauses.iter().filter(|c| c.counterexample.is_some())
    }
}

impl fmt::Display for KitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "ok" } else { "FAILED" };
        writeln!(f, "{}: {verdict} ({} structures up to size {})", self.kit, self.structures, self.max_size)?;
        for c in &self.clauses {
            match &c.counterexample {
                None => writeln!(f, "  {:<16} ok   {} cases", c.name, c.cases)?,
                Some(cx) => writeln!(f, "  {:<16} FAIL {cx}", c.name)?,
            }
        }
        Ok(())
    }
}

fn full(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn bits(m: u64) -> Vec<usize> {
    (0..64).filter(|&i| m >> i & 1 == 1).collect()
}

fn modality_name(m: &Modality) -> String {
    match m {
        Modality::Rel(r) => r.name().to_string(),
        Modality::Inv(r) => format!("~{}", r.name()),
        Modality::Global => "*".to_string(),
    }
}

fn diamond_of_placeholders(m: &Modality) -> Formula {
    Formula::diamond(m.clone(), (1..=m.args()).map(|i| Formula::set(&placeholder_yi(i))).collect())
}

struct Clauses {
    reports: Vec<ClauseReport>,
}

impl Clauses {
    fn new(names: Vec<String>) -> Clauses {
        Clauses { reports: names.into_iter().map(|name| ClauseReport { name, cases: 0, counterexample: None }).collect() }
    }

    fn open(&self, i: usize) -> bool {
        self.reports[i].counterexample.is_none()
    }

    fn fail(&mut self, i: usize, a: &Structure, detail: String) {
        let shape = crate::syntax::print_structure(a).lines().skip(1).collect::<Vec<_>>().join("; ");
        self.reports[i].counterexample = Some(format!("{detail} on [{shape}]"));
    }
}

/// Three-valued outcome of a target formula against the expected source
/// mask, resolved by branching on unknown parameter bits.
struct Resolve<'r, 'a> {
    runner: &'r mut Runner<'a>,
    tin: Vec<u64>,
    fout: Vec<u64>,
    universe: u64,
}

impl Resolve<'_, '_> {
    /// Returns the points of `want` where some completion disagrees with
    /// `expected`.
    fn mismatch(&mut self, want: u64, expected: u64) -> u64 {
        let (t, f) = self.runner.run(want);
        let bad = (t & !expected) | (f & expected);
        if bad != 0 {
            return bad;
        }
        let open = want & !(t | f);
        if open == 0 {
            return 0;
        }
        let Some((i, e)) = self.pick() else { return open };
        let (tin, fout) = (self.tin[i], self.fout[i]);
        let b = 1u64 << e;
        self.assign(i, tin, fout | b);
        let bad = self.mismatch(open, expected);
        if bad == 0 {
            self.assign(i, tin | b, fout);
            let bad = self.mismatch(open, expected);
            self.assign(i, tin, fout);
            return bad;
        }
        self.assign(i, tin, fout);
        bad
    }

    fn pick(&self) -> Option<(usize, usize)> {
        (0..self.tin.len()).find_map(|i| {
            let unknown = self.universe & !(self.tin[i] | self.fout[i]);
            (unknown != 0).then(|| (i, unknown.trailing_zeros() as usize))
        })
    }

    fn assign(&mut self, i: usize, tin: u64, fout: u64) {
        self.tin[i] = tin;
        self.fout[i] = fout;
        self.runner.set(i, tin, fout);
    }
}

/// Calls `f` with every tuple of `k` subsets of an `n`-element domain.
fn for_each_tuple(k: usize, n: usize, mut f: impl FnMut(&[u64]) -> bool) {
    let mut cur = vec![0u64; k];
    let top = full(n);
    loop {
        if !f(&cur) {
            return;
        }
        let mut i = 0;
        loop {
            if i == k {
                return;
            }
            if cur[i] < top {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

fn show_sets(names: &[String], sets: &[u64]) -> String {
    let parts: Vec<String> = names
        .iter()
        .zip(sets)
        .map(|(n, &s)| format!("{n}={{{}}}", bits(s).iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    parts.join(" ")
}

/// Checks `kit` as a forward kit for `enc` on all source structures with at
/// most `max_size` elements.
pub fn check_forward_kit(kit: &ForwardKit, enc: &LinearEncoding, max_size: usize) -> Result<KitReport, CheckError> {
    let atoms: Vec<Symbol> = atom_symbols(&kit.source_sig).cloned().collect();
    let mods = required_modalities(&kit.source_sig, kit.source_fragment);
    let mut names: Vec<String> = atoms.iter().map(|p| format!("atom {p}")).collect();
    names.extend(mods.iter().map(|m| format!("rel {}", modality_name(m))));
    names.push("ini".into());
    let mut clauses = Clauses::new(names);
    let ini_index = clauses.reports.len() - 1;
    let mut structures = 0;
    for a in enumerate_structures(&enc.source, max_size, true)? {
        structures += 1;
        let e = enc.encode(&a)?;
        let n = a.size();
        let copy1 = full(n);
        let Encoded { structure: target, .. } = &e;
        for (i, p) in atoms.iter().enumerate() {
            if !clauses.open(i) {
                continue;
            }
            clauses.reports[i].cases += 1;
            let want = match a.set_members(p) {
                Some(m) => m.iter().fold(0u64, |acc, &d| acc | 1 << d),
                None => a.element(p).map_or(0, |d| 1 << d),
            };
            let Some(psi) = kit.psi_atom.get(p) else {
                clauses.fail(i, &a, "missing entry".into());
                continue;
            };
            let got = Prepared::new(target, psi, &[])?.runner().run(copy1).0;
            if got != want {
                clauses.fail(i, &a, format!("source {:?} vs target {:?}", bits(want), bits(got)));
            }
        }
        for (mi, m) in mods.iter().enumerate() {
            let ci = atoms.len() + mi;
            if !clauses.open(ci) {
                continue;
            }
            let Some(psi) = kit.psi_rel.get(m) else {
                clauses.fail(ci, &a, "missing entry".into());
                continue;
            };
            let k = m.args();
            let params: Vec<Symbol> = (1..=k).map(placeholder_yi).collect();
            let src = Prepared::new(&a, &diamond_of_placeholders(m), &params)?;
            let tgt = Prepared::new(target, psi, &params)?;
            let mut sr = src.runner();
            let mut tr = tgt.runner();
            let universe = full(target.size());
            let names: Vec<String> = params.iter().map(|p| p.to_string()).collect();
            let mut failure = None;
            for_each_tuple(k, n, |sets| {
                clauses.reports[ci].cases += 1;
                for (i, &s) in sets.iter().enumerate() {
                    sr.set(i, s, copy1 & !s);
                }
                let expected = sr.run(copy1).0;
                let mut r = Resolve { runner: &mut tr, tin: sets.to_vec(), fout: vec![0; k], universe };
                for i in 0..k {
                    let fout = copy1 & !sets[i];
                    r.assign(i, sets[i], fout);
                }
                let bad = r.mismatch(copy1, expected);
                if bad != 0 {
                    failure = Some(format!("{} at {:?}", show_sets(&names, sets), bits(bad)));
                    return false;
                }
                true
            });
            if let Some(detail) = failure {
                clauses.fail(ci, &a, detail);
            }
        }
        if clauses.open(ini_index) {
            let y = placeholder_y();
            let pointed_source = a.is_pointed();
            let probe = if pointed_source { Formula::set(&y) } else { Formula::global(Formula::set(&y)) };
            let src = Prepared::new(&a, &probe, std::slice::from_ref(&y))?;
            let mut sr = src.runner();
            let at = target.position();
            let free_at = kit.psi_ini.free_symbols().iter().any(Symbol::is_position);
            let tgt = Prepared::new(target, &kit.psi_ini, std::slice::from_ref(&y))?;
            let mut tr = tgt.runner();
            let want = 1u64 << at.unwrap_or(0);
            let mut failure = None;
            for_each_tuple(1, n, |sets| {
                clauses.reports[ini_index].cases += 1;
                sr.set(0, sets[0], copy1 & !sets[0]);
                let point = a.position().unwrap_or(0);
                let expected = if sr.run(1 << point).0 != 0 { want } else { 0 };
                let bad = if at.is_none() && free_at {
                    expected
                } else {
                    let mut r = Resolve { runner: &mut tr, tin: vec![0], fout: vec![0], universe: full(target.size()) };
                    r.assign(0, sets[0], copy1 & !sets[0]);
                    r.mismatch(want, expected)
                };
                if bad != 0 {
                    failure = Some(format!("$Y={:?}: source {}", bits(sets[0]), expected != 0));
                    return false;
                }
                true
            });
            if let Some(detail) = failure {
                clauses.fail(ini_index, &a, detail);
            }
        }
    }
    Ok(KitReport { kit: format!("forward {}", enc.name()), max_size, structures, clauses: clauses.reports })
}

/// One backward placeholder family `$X<i>_<j>` (or `$X_<j>`) with the
/// values it ranges over: subsets of the source domain for `j ≤ m`, the
/// empty and the full set for `j > m`.
struct Slot {
    i: usize,
    j: usize,
}

/// Enumerates values of `slots` (all others stay empty); copies range over
/// `2^n` subsets and extras over `{∅, full}`.
fn for_each_backward(slots: &[Slot], m: usize, n: usize, mut f: impl FnMut(&[u64]) -> bool) {
    let top = full(n);
    let mut cur = vec![0u64; slots.len()];
    loop {
        if !f(&cur) {
            return;
        }
        let mut k = 0;
        loop {
            if k == slots.len() {
                return;
            }
            let step = if slots[k].j <= m { cur[k] + 1 } else { top };
            if cur[k] < top {
                cur[k] = step;
                break;
            }
            cur[k] = 0;
            k += 1;
        }
    }
}

/// Target ids of the parameter value `v` for copy `j`.
fn lift(e: &Encoded, j: usize, v: u64) -> u64 {
    let c = e.corr;
    if j <= c.m {
        v << ((j - 1) * c.base)
    } else if v != 0 {
        1u64 << c.extra(j)
    } else {
        0
    }
}

/// Source mask reporting the target mask `t` at the points of `h`.
fn project(e: &Encoded, h: usize, t: u64) -> u64 {
    let c = e.corr;
    if h <= c.m {
        (t >> ((h - 1) * c.base)) & full(c.base)
    } else if t >> c.extra(h) & 1 == 1 {
        full(c.base)
    } else {
        0
    }
}

fn points_mask(e: &Encoded, h: usize) -> u64 {
    e.corr.points(h).iter().fold(0, |acc, &p| acc | 1 << p)
}

/// Copies `j` whose points are reachable by one `modality` step from the
/// points of `h`.
fn reachable_copies(e: &Encoded, m: &Modality, h: usize) -> BTreeSet<usize> {
    let c = e.corr;
    let all = || (1..=c.n).collect();
    let (r, inverse) = match m {
        Modality::Global => return all(),
        Modality::Rel(r) => (r, false),
        Modality::Inv(r) => (r, true),
    };
    if r.arity() != 2 {
        return all();
    }
    let from = points_mask(e, h);
    let mut out = BTreeSet::new();
    for (p, q) in e.structure.pairs(r).unwrap_or_default() {
        let (x, y) = if inverse { (q, p) } else { (p, q) };
        if from >> x & 1 == 1 {
            match c.origin(y) {
                Some(crate::encodings::Origin::Copy(j, _)) | Some(crate::encodings::Origin::Extra(j)) => {
                    out.insert(j);
                }
                None => {}
            }
        }
    }
    out
}

/// Checks `kit` as a backward kit for `enc` on all source structures with
/// at most `max_size` elements.
pub fn check_backward_kit(kit: &BackwardKit, enc: &LinearEncoding, max_size: usize) -> Result<KitReport, CheckError> {
    let (m, n) = (kit.m, kit.n);
    let atoms: Vec<Symbol> = atom_symbols(&kit.target_sig).cloned().collect();
    let mods = required_modalities(&kit.target_sig, kit.target_fragment);
    let mut names = Vec::new();
    for p in &atoms {
        names.extend((1..=n).map(|h| format!("atom {p}^{h}")));
    }
    for md in &mods {
        names.extend((1..=n).map(|h| format!("rel {}^{h}", modality_name(md))));
    }
    names.push("ini".into());
    let mut clauses = Clauses::new(names);
    let ini_index = clauses.reports.len() - 1;
    let mut structures = 0;
    for a in enumerate_structures(&enc.source, max_size, true)? {
        structures += 1;
        let e = enc.encode(&a)?;
        if e.corr.m != m || e.corr.n != n {
            let detail = format!("kit has m={m}, n={n} but the encoding uses m={}, n={}", e.corr.m, e.corr.n);
            for i in 0..clauses.reports.len() {
                clauses.fail(i, &a, detail.clone());
            }
            break;
        }
        let base = a.size();
        let dom = full(base);
        let target = &e.structure;
        for (qi, q) in atoms.iter().enumerate() {
            let members = match target.set_members(q) {
                Some(s) => s.iter().fold(0u64, |acc, &x| acc | 1 << x),
                None => target.element(q).map_or(0, |x| 1 << x),
            };
            for h in 1..=n {
                let ci = qi * n + h - 1;
                if !clauses.open(ci) {
                    continue;
                }
                clauses.reports[ci].cases += 1;
                let Some(phi) = kit.phi_atom.get(&(q.clone(), h)) else {
                    clauses.fail(ci, &a, "missing entry".into());
                    continue;
                };
                let got = Prepared::new(&a, phi, &[])?.runner().run(dom).0;
                let want = project(&e, h, members);
                if got != want {
                    clauses.fail(ci, &a, format!("source {:?} vs target {:?}", bits(got), bits(want)));
                }
            }
        }
        for (mi, md) in mods.iter().enumerate() {
            let k = md.args();
            let ys: Vec<Symbol> = (1..=k).map(placeholder_yi).collect();
            let tgt = Prepared::new(target, &diamond_of_placeholders(md), &ys)?;
            let xs: Vec<Symbol> = (1..=k).flat_map(|i| (1..=n).map(move |j| placeholder_xij(i, j))).collect();
            for h in 1..=n {
                let ci = atoms.len() * n + mi * n + h - 1;
                if !clauses.open(ci) {
                    continue;
                }
                let Some(phi) = kit.phi_rel.get(&(md.clone(), h)) else {
                    clauses.fail(ci, &a, "missing entry".into());
                    continue;
                };
                let free = phi.free_symbols();
                let near = reachable_copies(&e, md, h);
                let slots: Vec<Slot> = (1..=k)
                    .flat_map(|i| (1..=n).map(move |j| Slot { i, j }))
                    .filter(|s| near.contains(&s.j) || free.contains(&placeholder_xij(s.i, s.j)))
                    .collect();
                let src = Prepared::new(&a, phi, &xs)?;
                let mut sr = src.runner();
                for i in 0..xs.len() {
                    sr.set(i, 0, dom);
                }
                let mut tr = tgt.runner();
                let want = points_mask(&e, h);
                let universe = full(target.size());
                let mut failure = None;
                for_each_backward(&slots, m, base, |vals| {
                    clauses.reports[ci].cases += 1;
                    let mut b = vec![0u64; k];
                    for (s, &v) in slots.iter().zip(vals) {
                        sr.set((s.i - 1) * n + s.j - 1, v, dom & !v);
                        b[s.i - 1] |= lift(&e, s.j, v);
                    }
                    for (i, &bi) in b.iter().enumerate() {
                        tr.set(i, bi, universe & !bi);
                    }
                    let got = sr.run(dom).0;
                    let expected = project(&e, h, tr.run(want).0);
                    if got != expected {
                        let names: Vec<String> =
                            slots.iter().map(|s| placeholder_xij(s.i, s.j).to_string()).collect();
                        failure = Some(format!(
                            "{}: source {:?} vs target {:?}",
                            show_sets(&names, vals),
                            bits(got),
                            bits(expected)
                        ));
                        return false;
                    }
                    true
                });
                if let Some(detail) = failure {
                    clauses.fail(ci, &a, detail);
                }
            }
        }
        if clauses.open(ini_index) {
            let y = placeholder_y();
            let probe = if target.is_pointed() { Formula::set(&y) } else { Formula::global(Formula::set(&y)) };
            let tgt = Prepared::new(target, &probe, std::slice::from_ref(&y))?;
            let mut tr = tgt.runner();
            let xs: Vec<Symbol> = (1..=n).map(placeholder_xj).collect();
            let src = Prepared::new(&a, &kit.phi_ini, &xs)?;
            let mut sr = src.runner();
            let free_at = kit.phi_ini.free_symbols().iter().any(Symbol::is_position);
            let slots: Vec<Slot> = (1..=n).map(|j| Slot { i: 1, j }).collect();
            let tpoint = 1u64 << target.position().unwrap_or(0);
            let spoint = 1u64 << a.position().unwrap_or(0);
            let universe = full(target.size());
            let mut failure = None;
            for_each_backward(&slots, m, base, |vals| {
                clauses.reports[ini_index].cases += 1;
                let mut b = 0;
                for (s, &v) in slots.iter().zip(vals) {
                    sr.set(s.j - 1, v, dom & !v);
                    b |= lift(&e, s.j, v);
                }
                tr.set(0, b, universe & !b);
                let want = tr.run(tpoint).0 != 0;
                let got = !(free_at && !a.is_pointed()) && sr.run(spoint).0 != 0;
                if got != want {
                    let names: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                    failure = Some(format!("{}: source {got} vs target {want}", show_sets(&names, vals)));
                    return false;
                }
                true
            });
            if let Some(detail) = failure {
                clauses.fail(ini_index, &a, detail);
            }
        }
    }
    Ok(KitReport { kit: format!("backward {}", enc.name()), max_size, structures, clauses: clauses.reports })
}

/// Checks both shipped kits of `enc`.
pub fn check_kit(enc: &LinearEncoding, max_size: usize) -> Result<[KitReport; 2], CheckError> {
    Ok([check_forward_kit(&enc.forward, enc, max_size)?, check_backward_kit(&enc.backward, enc, max_size)?])
}

