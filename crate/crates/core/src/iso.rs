//! Backtracking isomorphism test for small structures.

use std::collections::BTreeSet;

use crate::structure::{Structure, StructureError};
use crate::symbol::Symbol;

pub const DEFAULT_ISO_CAP: usize = 8;

/// Per-element invariant: membership of each element symbol, then the
/// number of tuples of each relation holding the element at each position.
fn invariants(a: &Structure, sig: &[Symbol]) -> Vec<Vec<usize>> {
    let mut inv = vec![Vec::new(); a.size()];
    for s in sig {
        if s.is_element() {
            let e = a.element(s).expect("same signature");
            for (x, v) in inv.iter_mut().enumerate() {
                v.push(usize::from(x == e));
            }
        } else {
            let k = s.arity() as usize;
            let base = inv[0].len();
            for v in inv.iter_mut() {
                v.extend(std::iter::repeat(0).take(k));
            }
            for t in a.relation(s).expect("same signature") {
                for (p, &x) in t.iter().enumerate() {
                    inv[x][base + p] += 1;
                }
            }
        }
    }
    inv
}

/// A signature-preserving bijection `dom(a) → dom(b)`, if one exists.
pub fn find_isomorphism(a: &Structure, b: &Structure, cap: usize) -> Result<Option<Vec<usize>>, StructureError> {
    for s in [a, b] {
        if s.size() > cap {
            return Err(StructureError::SizeLimit { what: "isomorphism test".into(), size: s.size(), cap });
        }
    }
    if a.size() != b.size() || a.sig() != b.sig() {
        return Ok(None);
    }
    let sig: Vec<Symbol> = a.sig().into_iter().collect();
    for s in &sig {
        if !s.is_element() && a.relation(s).unwrap().len() != b.relation(s).unwrap().len() {
            return Ok(None);
        }
    }
    let ia = invariants(a, &sig);
    let ib = invariants(b, &sig);
    let mut sa = ia.clone();
    let mut sb = ib.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return Ok(None);
    }
    let n = a.size();
    // Tuples of `a` become checkable once their largest element is mapped.
    let mut due: Vec<Vec<(&Symbol, &Vec<usize>)>> = vec![Vec::new(); n];
    for s in &sig {
        if let Some(ts) = a.relation(s) {
            for t in ts {
                let last = *t.iter().max().expect("arity >= 1");
                due[last].push((s, t));
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let ok = extend_map(0, a, b, &ia, &ib, &due, &mut map, &mut used);
    Ok(ok.then_some(map))
}

#[allow(clippy::too_many_arguments)]
fn extend_map(
    x: usize,
    a: &Structure,
    b: &Structure,
    ia: &[Vec<usize>],
    ib: &[Vec<usize>],
    due: &[Vec<(&Symbol, &Vec<usize>)>],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if x == a.size() {
        return true;
    }
    for y in 0..b.size() {
        if used[y] || ia[x] != ib[y] {
            continue;
        }
        map[x] = y;
        let consistent = due[x].iter().all(|(s, t)| {
            let image: Vec<usize> = t.iter().map(|&z| map[z]).collect();
            b.relation(s).unwrap().contains(&image)
        });
        if consistent {
            used[y] = true;
            if extend_map(x + 1, a, b, ia, ib, due, map, used) {
                return true;
            }
            used[y] = false;
        }
    }
    map[x] = usize::MAX;
    false
}

/// Isomorphism test with the default cap of 8 elements.
pub fn isomorphic(a: &Structure, b: &Structure) -> Result<bool, StructureError> {
    isomorphic_with_cap(a, b, DEFAULT_ISO_CAP)
}

pub fn isomorphic_with_cap(a: &Structure, b: &Structure, cap: usize) -> Result<bool, StructureError> {
    Ok(find_isomorphism(a, b, cap)?.is_some())
}

/// Cheap isomorphism-invariant fingerprint for bucketing candidates.
pub fn fingerprint(a: &Structure) -> (usize, BTreeSet<Symbol>, Vec<Vec<usize>>) {
    let sig: Vec<Symbol> = a.sig().into_iter().collect();
    let mut inv = invariants(a, &sig);
    inv.sort();
    (a.size(), sig.into_iter().collect(), inv)
}
