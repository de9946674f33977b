//! Exhaustive enumeration of class members, optionally one per
//! isomorphism class (orderly generation: a code is emitted iff it is the
//! least code in its orbit under domain permutations).

use crate::classes::{make_grid, GraphClass};
use crate::structure::{Structure, StructureError, Value};

/// Bit layout of all structures of a graph class on a fixed domain size.
#[derive(Debug, Clone)]
pub struct CodeSpace {
    class: GraphClass,
    size: usize,
    label_bits: usize,
    rel_bits: usize,
    pairs: Vec<(usize, usize)>,
    perm_maps: Vec<(Vec<usize>, Vec<u8>)>,
}

impl CodeSpace {
    /// Panics on `GRID` classes, which are enumerated by shape instead.
    pub fn new(class: &GraphClass, size: usize) -> Result<CodeSpace, StructureError> {
        assert!(!matches!(class, GraphClass::Grid { .. }), "grids are enumerated by shape");
        if size == 0 {
            return Err(StructureError::EmptyDomain);
        }
        let pairs: Vec<(usize, usize)> = match class {
            GraphClass::Graph { .. } => {
                (0..size).flat_map(|a| (a + 1..size).map(move |b| (a, b))).collect()
            }
            _ => (0..size).flat_map(|a| (0..size).map(move |b| (a, b))).collect(),
        };
        let label_bits = class.t() * size;
        let rel_bits = class.u() * pairs.len();
        let pos_bits = if class.is_pointed() { usize::BITS - (size - 1).leading_zeros() } else { 0 } as usize;
        let total = label_bits + rel_bits + pos_bits;
        if total > 62 {
            return Err(StructureError::SizeLimit { what: format!("code space of {class}"), size: total, cap: 62 });
        }
        let mut cs = CodeSpace { class: *class, size, label_bits, rel_bits, pairs, perm_maps: Vec::new() };
        let mut perm: Vec<usize> = (0..size).collect();
        loop {
            if !next_permutation(&mut perm) {
                break;
            }
            let map = cs.bit_map(&perm);
            cs.perm_maps.push((perm.clone(), map));
        }
        Ok(cs)
    }

    fn bits(&self) -> usize {
        self.label_bits + self.rel_bits
    }

    fn pair_index(&self, a: usize, b: usize) -> usize {
        match self.class {
            GraphClass::Graph { .. } => {
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                self.pairs.iter().position(|&p| p == (a, b)).expect("pair in range")
            }
            _ => a * self.size + b,
        }
    }

    fn bit_map(&self, perm: &[usize]) -> Vec<u8> {
        let d = self.size;
        let mut map = vec![0u8; self.bits()];
        for i in 0..self.class.t() {
            for a in 0..d {
                map[i * d + a] = (i * d + perm[a]) as u8;
            }
        }
        let np = self.pairs.len();
        for r in 0..self.class.u() {
            for (k, &(a, b)) in self.pairs.iter().enumerate() {
                map[self.label_bits + r * np + k] = (self.label_bits + r * np + self.pair_index(perm[a], perm[b])) as u8;
            }
        }
        map
    }

    /// Number of codes (structures) of this size.
    pub fn count(&self) -> u64 {
        let base = 1u64 << self.bits();
        if self.class.is_pointed() {
            base * self.size as u64
        } else {
            base
        }
    }

    fn permute(&self, code: u64, perm: &[usize], map: &[u8]) -> u64 {
        let n = self.bits();
        let mut bits = code & ((1u64 << n) - 1);
        let mut out = 0u64;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            out |= 1u64 << map[b];
            bits &= bits - 1;
        }
        if self.class.is_pointed() {
            let pos = (code >> n) as usize;
            out |= (perm[pos] as u64) << n;
        }
        out
    }

    /// Whether `code` is the least code of its isomorphism class.
    pub fn is_canonical(&self, code: u64) -> bool {
        self.perm_maps.iter().all(|(perm, map)| self.permute(code, perm, map) >= code)
    }

    /// The least code isomorphic to `code`.
    pub fn canonical(&self, code: u64) -> u64 {
        self.perm_maps.iter().map(|(perm, map)| self.permute(code, perm, map)).fold(code, u64::min)
    }

    pub fn decode(&self, code: u64) -> Structure {
        let d = self.size;
        let mut s = Structure::new(d).expect("nonempty");
        for i in 0..self.class.t() {
            let members = (0..d).filter(|a| code >> (i * d + a) & 1 == 1);
            s.assign(&self.class.label(i + 1), Value::set(members)).expect("in range");
        }
        let np = self.pairs.len();
        for r in 0..self.class.u() {
            let mut pairs = Vec::new();
            for (k, &(a, b)) in self.pairs.iter().enumerate() {
                if code >> (self.label_bits + r * np + k) & 1 == 1 {
                    pairs.push((a, b));
                    if matches!(self.class, GraphClass::Graph { .. }) {
                        pairs.push((b, a));
                    }
                }
            }
            s.assign(&self.class.relation(r + 1), Value::pairs(pairs)).expect("in range");
        }
        if self.class.is_pointed() {
            let pos = (code >> self.bits()) as usize;
            s.assign(&crate::symbol::Symbol::position(), Value::Element(pos)).expect("in range");
        }
        s
    }

    /// Inverse of [`CodeSpace::decode`] on class members of this size.
    pub fn encode(&self, s: &Structure) -> Option<u64> {
        if s.size() != self.size || !crate::classes::validate(s, &self.class) {
            return None;
        }
        let d = self.size;
        let mut code = 0u64;
        for i in 0..self.class.t() {
            for a in s.set_members(&self.class.label(i + 1))? {
                code |= 1 << (i * d + a);
            }
        }
        let np = self.pairs.len();
        for r in 0..self.class.u() {
            for (a, b) in s.pairs(&self.class.relation(r + 1))? {
                if matches!(self.class, GraphClass::Graph { .. }) && a > b {
                    continue;
                }
                code |= 1 << (self.label_bits + r * np + self.pair_index(a, b));
            }
        }
        if self.class.is_pointed() {
            code |= (s.position()? as u64) << self.bits();
        }
        Some(code)
    }
}

/// Lexicographic successor; false once the last permutation is reached.
pub fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Grid shapes `(m, n)` with `m·n ≤ max_cells`, by area, then by the longer
/// side, then by row count.
pub fn grid_shapes(max_cells: usize) -> Vec<(usize, usize)> {
    let mut shapes: Vec<(usize, usize)> =
        (1..=max_cells).flat_map(|m| (1..=max_cells / m).map(move |n| (m, n))).collect();
    shapes.sort_by_key(|&(m, n)| (m * n, m.max(n), m));
    shapes
}

/// All `t`-labeled grids with at most `max_cells` cells.
pub fn labeled_grids(t: usize, max_cells: usize) -> Result<Vec<Structure>, StructureError> {
    let mut out = Vec::new();
    for (m, n) in grid_shapes(max_cells) {
        let cells = m * n;
        if t * cells > 40 {
            return Err(StructureError::SizeLimit { what: "labeled grid enumeration".into(), size: t * cells, cap: 40 });
        }
        for code in 0u64..(1 << (t * cells)) {
            let labels: Vec<_> = (0..t)
                .map(|i| {
                    (0..cells)
                        .filter(|c| code >> (i * cells + c) & 1 == 1)
                        .map(|c| (c / n + 1, c % n + 1))
                        .collect()
                })
                .collect();
            out.push(make_grid(m, n, &labels)?);
        }
    }
    Ok(out)
}

/// Stream over the members of a class with `1 ≤ |dom| ≤ max_size`.
pub struct Enumeration {
    class: GraphClass,
    max_size: usize,
    dedup: bool,
    space: Option<CodeSpace>,
    code: u64,
    grids: std::vec::IntoIter<Structure>,
}

impl Iterator for Enumeration {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        if matches!(self.class, GraphClass::Grid { .. }) {
            return self.grids.next();
        }
        loop {
            let space = self.space.as_ref()?;
            if self.code >= space.count() {
                let next = space.size + 1;
                self.space = if next <= self.max_size { CodeSpace::new(&self.class, next).ok() } else { None };
                self.code = 0;
                continue;
            }
            let code = self.code;
            self.code += 1;
            if !self.dedup || space.is_canonical(code) {
                return Some(space.decode(code));
            }
        }
    }
}

/// Every structure of `class` with at most `max_size` elements; with
/// `dedup`, exactly one representative per isomorphism class.
pub fn enumerate_structures(class: &GraphClass, max_size: usize, dedup: bool) -> Result<Enumeration, StructureError> {
    let mut e = Enumeration {
        class: *class,
        max_size,
        dedup,
        space: None,
        code: 0,
        grids: Vec::new().into_iter(),
    };
    if let GraphClass::Grid { t } = class {
        e.grids = labeled_grids(*t, max_size)?.into_iter();
    } else if max_size >= 1 {
        // Fail early if the largest requested size is out of reach.
        CodeSpace::new(class, max_size)?;
        e.space = Some(CodeSpace::new(class, 1)?);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::isomorphic;

    #[test]
    fn digraph_one_vertex() {
        assert_eq!(enumerate_structures(&GraphClass::DIGRAPH, 1, false).unwrap().count(), 2);
    }

    #[test]
    fn grid_shapes_order() {
        let shapes: Vec<_> = grid_shapes(4);
        assert_eq!(shapes, vec![(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2), (1, 4), (4, 1)]);
        assert_eq!(enumerate_structures(&GraphClass::Grid { t: 0 }, 4, false).unwrap().count(), 8);
    }

    #[test]
    fn graph_classes_on_two_vertices() {
        let all: Vec<_> = enumerate_structures(&GraphClass::GRAPH, 2, true).unwrap().collect();
        assert_eq!(all.iter().filter(|s| s.size() == 2).count(), 2);
        assert_eq!(all.len(), 3);
    }

    #[test]
    fn dedup_counts_match_known_values() {
        // Digraphs with loops on n unlabeled vertices: 2, 10, 104, 3044.
        let mut counts = [0usize; 5];
        for s in enumerate_structures(&GraphClass::DIGRAPH, 4, true).unwrap() {
            counts[s.size()] += 1;
        }
        assert_eq!(counts[1..], [2, 10, 104, 3044]);
    }

    #[test]
    fn dedup_is_one_per_class() {
        let class = GraphClass::Digraph { t: 1, u: 1 };
        let reps: Vec<_> = enumerate_structures(&class, 2, true).unwrap().collect();
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                assert!(!isomorphic(a, b).unwrap());
            }
        }
        for s in enumerate_structures(&class, 2, false).unwrap() {
            assert_eq!(reps.iter().filter(|r| isomorphic(r, &s).unwrap()).count(), 1);
        }
    }

    #[test]
    fn encode_decode_round_trip() {
        for class in [GraphClass::Graph { t: 1, u: 1 }, GraphClass::PDigraph, GraphClass::Digraph { t: 2, u: 2 }] {
            let space = CodeSpace::new(&class, 2).unwrap();
            for code in 0..space.count() {
                let s = space.decode(code);
                assert!(crate::classes::validate(&s, &class));
                assert_eq!(space.encode(&s), Some(code));
            }
        }
    }
}
