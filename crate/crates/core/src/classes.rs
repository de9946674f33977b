//! Graph and grid classes, their signatures, and membership checks.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::structure::{Structure, StructureError, Value};
use crate::symbol::Symbol;

/// `DIGRAPH[t,u]`, `GRAPH[t,u]`, `GRID[t]` or `PDIGRAPH`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphClass {
    Digraph { t: usize, u: usize },
    Graph { t: usize, u: usize },
    Grid { t: usize },
    PDigraph,
}

/// Name of the `i`-th labeling set (1-based) in a class with `t` of them.
pub fn label_symbol(t: usize, i: usize) -> Symbol {
    if t == 1 {
        Symbol::set("P")
    } else {
        Symbol::set(&format!("P{i}"))
    }
}

/// Name of the `i`-th edge relation (1-based) in a class with `u` of them.
pub fn relation_symbol(u: usize, i: usize) -> Symbol {
    if u == 1 {
        Symbol::relation("R", 2)
    } else {
        Symbol::relation(&format!("R{i}"), 2)
    }
}

impl GraphClass {
    pub const DIGRAPH: GraphClass = GraphClass::Digraph { t: 0, u: 1 };
    pub const GRAPH: GraphClass = GraphClass::Graph { t: 0, u: 1 };

    pub fn t(&self) -> usize {
        match *self {
            GraphClass::Digraph { t, .. } | GraphClass::Graph { t, .. } | GraphClass::Grid { t } => t,
            GraphClass::PDigraph => 0,
        }
    }

    pub fn u(&self) -> usize {
        match *self {
            GraphClass::Digraph { u, .. } | GraphClass::Graph { u, .. } => u,
            GraphClass::Grid { .. } => 2,
            GraphClass::PDigraph => 1,
        }
    }

    pub fn label(&self, i: usize) -> Symbol {
        label_symbol(self.t(), i)
    }

    pub fn relation(&self, i: usize) -> Symbol {
        relation_symbol(self.u(), i)
    }

    pub fn labels(&self) -> Vec<Symbol> {
        (1..=self.t()).map(|i| self.label(i)).collect()
    }

    pub fn relations(&self) -> Vec<Symbol> {
        (1..=self.u()).map(|i| self.relation(i)).collect()
    }

    pub fn is_pointed(&self) -> bool {
        matches!(self, GraphClass::PDigraph)
    }

    pub fn signature(&self) -> BTreeSet<Symbol> {
        let mut sig: BTreeSet<Symbol> = self.labels().into_iter().chain(self.relations()).collect();
        if self.is_pointed() {
            sig.insert(Symbol::position());
        }
        sig
    }
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GraphClass::Digraph { t, u } => write!(f, "DIGRAPH[{t},{u}]"),
            GraphClass::Graph { t, u } => write!(f, "GRAPH[{t},{u}]"),
            GraphClass::Grid { t } => write!(f, "GRID[{t}]"),
            GraphClass::PDigraph => write!(f, "PDIGRAPH"),
        }
    }
}

impl FromStr for GraphClass {
    type Err = String;

    /// Accepts `DIGRAPH`, `DIGRAPH[t,u]`, `GRAPH`, `GRAPH[t,u]`, `GRID`,
    /// `GRID[t]` and `PDIGRAPH`, case-insensitively; parentheses may replace
    /// the brackets.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_uppercase();
        let (head, args) = match norm.find(['[', '(']) {
            Some(i) => {
                let close = norm.chars().last();
                if !matches!(close, Some(']') | Some(')')) {
                    return Err(format!("malformed class `{s}`"));
                }
                (&norm[..i], Some(&norm[i + 1..norm.len() - 1]))
            }
            None => (norm.as_str(), None),
        };
        let nums: Vec<usize> = match args {
            Some(a) => a
                .split(',')
                .map(|x| x.parse::<usize>().map_err(|_| format!("bad parameter `{x}` in `{s}`")))
                .collect::<Result<_, _>>()?,
            None => vec![],
        };
        match (head, nums.as_slice()) {
            ("DIGRAPH", []) => Ok(GraphClass::DIGRAPH),
            ("DIGRAPH", [t, u]) => Ok(GraphClass::Digraph { t: *t, u: *u }),
            ("GRAPH", []) => Ok(GraphClass::GRAPH),
            ("GRAPH", [t, u]) => Ok(GraphClass::Graph { t: *t, u: *u }),
            ("GRID", []) => Ok(GraphClass::Grid { t: 0 }),
            ("GRID", [t]) => Ok(GraphClass::Grid { t: *t }),
            ("PDIGRAPH", []) => Ok(GraphClass::PDigraph),
            _ => Err(format!("unknown graph class `{s}`")),
        }
    }
}

/// Membership of `a` in class `c`.
pub fn validate(a: &Structure, c: &GraphClass) -> bool {
    if a.sig() != c.signature() {
        return false;
    }
    match c {
        GraphClass::Graph { .. } => c.relations().iter().all(|r| {
            let tuples = a.relation(r).expect("signature checked");
            tuples.iter().all(|t| t[0] != t[1] && tuples.contains(&vec![t[1], t[0]]))
        }),
        GraphClass::Grid { .. } => is_grid(a),
        GraphClass::Digraph { .. } | GraphClass::PDigraph => true,
    }
}

/// Element id of cell `(i, j)` (1-based) in a grid with `cols` columns.
pub fn grid_cell(cols: usize, i: usize, j: usize) -> usize {
    (i - 1) * cols + (j - 1)
}

/// The `m × n` grid with labeling sets `labels[0..t]` given as sets of
/// 1-based cells.
pub fn make_grid(m: usize, n: usize, labels: &[BTreeSet<(usize, usize)>]) -> Result<Structure, StructureError> {
    let mut s = Structure::new(m * n)?;
    let class = GraphClass::Grid { t: labels.len() };
    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    for i in 1..=m {
        for j in 1..=n {
            if i < m {
                r1.push((grid_cell(n, i, j), grid_cell(n, i + 1, j)));
            }
            if j < n {
                r2.push((grid_cell(n, i, j), grid_cell(n, i, j + 1)));
            }
        }
    }
    s.assign(&class.relation(1), Value::pairs(r1))?;
    s.assign(&class.relation(2), Value::pairs(r2))?;
    for (k, cells) in labels.iter().enumerate() {
        let sym = class.label(k + 1);
        if let Some(&(i, j)) = cells.iter().find(|&&(i, j)| i == 0 || j == 0 || i > m || j > n) {
            return Err(StructureError::InvalidExtension {
                symbol: sym,
                reason: format!("cell ({i},{j}) lies outside the {m}x{n} grid"),
            });
        }
        s.assign(&sym, Value::set(cells.iter().map(|&(i, j)| grid_cell(n, i, j))))?;
    }
    Ok(s)
}

/// Shape of a structure recognised as a grid: `coords[a]` is the 1-based
/// cell of element `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridShape {
    pub rows: usize,
    pub cols: usize,
    pub coords: Vec<(usize, usize)>,
}

impl GridShape {
    pub fn element_at(&self, i: usize, j: usize) -> usize {
        self.coords.iter().position(|&c| c == (i, j)).expect("cell inside the grid")
    }
}

fn unique(v: &[usize]) -> Result<Option<usize>, ()> {
    match v {
        [] => Ok(None),
        [x] => Ok(Some(*x)),
        _ => Err(()),
    }
}

/// Structural grid recognition on the relations `R1` (vertical) and `R2`
/// (horizontal); other symbols are ignored.
pub fn grid_shape(a: &Structure) -> Option<GridShape> {
    let r1 = a.pairs(&relation_symbol(2, 1))?;
    let r2 = a.pairs(&relation_symbol(2, 2))?;
    let n = a.size();
    let adjacency = |pairs: &[(usize, usize)]| {
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for &(x, y) in pairs {
            succ[x].push(y);
            pred[y].push(x);
        }
        (succ, pred)
    };
    let (s1, p1) = adjacency(&r1);
    let (s2, p2) = adjacency(&r2);
    let mut down = vec![None; n];
    let mut right = vec![None; n];
    for x in 0..n {
        down[x] = unique(&s1[x]).ok()?;
        right[x] = unique(&s2[x]).ok()?;
        unique(&p1[x]).ok()?;
        unique(&p2[x]).ok()?;
    }
    let sources: Vec<usize> = (0..n).filter(|&x| p1[x].is_empty() && p2[x].is_empty()).collect();
    let &[corner] = sources.as_slice() else { return None };

    let walk = |start: usize, next: &[Option<usize>]| -> Option<Vec<usize>> {
        let mut path = vec![start];
        let mut cur = start;
        while let Some(y) = next[cur] {
            if path.len() >= n {
                return None;
            }
            path.push(y);
            cur = y;
        }
        Some(path)
    };
    let top = walk(corner, &right)?;
    let cols = top.len();
    let mut coords = vec![(0, 0); n];
    let mut seen = vec![false; n];
    let mut rows = None;
    for (j, &head) in top.iter().enumerate() {
        let column = walk(head, &down)?;
        if *rows.get_or_insert(column.len()) != column.len() {
            return None;
        }
        for (i, &x) in column.iter().enumerate() {
            if seen[x] {
                return None;
            }
            seen[x] = true;
            coords[x] = (i + 1, j + 1);
        }
    }
    let rows = rows?;
    if rows * cols != n {
        return None;
    }
    let exact = |pairs: &[(usize, usize)], di: usize, dj: usize, count: usize| {
        pairs.len() == count
            && pairs.iter().all(|&(x, y)| {
                let (i, j) = coords[x];
                coords[y] == (i + di, j + dj)
            })
    };
    if !exact(&r1, 1, 0, (rows - 1) * cols) || !exact(&r2, 0, 1, rows * (cols - 1)) {
        return None;
    }
    Some(GridShape { rows, cols, coords })
}

/// Whether `a` is isomorphic to an unlabeled grid via its `R1`/`R2` relations.
pub fn is_grid(a: &Structure) -> bool {
    grid_shape(a).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_edge_counts() {
        let g = make_grid(1, 1, &[]).unwrap();
        assert_eq!(g.pairs(&relation_symbol(2, 1)).unwrap().len(), 0);
        let g = make_grid(2, 2, &[]).unwrap();
        assert_eq!(g.pairs(&relation_symbol(2, 1)).unwrap().len(), 2);
        assert_eq!(g.pairs(&relation_symbol(2, 2)).unwrap().len(), 2);
        let g = make_grid(2, 3, &[]).unwrap();
        assert_eq!(g.pairs(&relation_symbol(2, 1)).unwrap().len(), 3);
        assert_eq!(g.pairs(&relation_symbol(2, 2)).unwrap().len(), 4);
    }

    #[test]
    fn grid_labels_outside_rejected() {
        let bad: BTreeSet<_> = [(3, 1)].into_iter().collect();
        assert!(make_grid(2, 2, &[bad]).is_err());
    }

    #[test]
    fn validate_examples() {
        let loop1 = Structure::new(1).unwrap().with_pairs(&relation_symbol(1, 1), [(0, 0)]).unwrap();
        assert!(!validate(&loop1, &GraphClass::GRAPH));
        assert!(validate(&make_grid(2, 2, &[]).unwrap(), &GraphClass::Grid { t: 0 }));
        let path = Structure::new(2).unwrap().with_pairs(&relation_symbol(1, 1), [(0, 1)]).unwrap();
        assert!(validate(&path, &GraphClass::DIGRAPH));
        assert!(!validate(&path, &GraphClass::GRAPH));
        assert!(!validate(&path, &GraphClass::PDigraph));
    }

    #[test]
    fn is_grid_examples() {
        assert!(is_grid(&make_grid(3, 2, &[]).unwrap()));
        let two = Structure::new(2)
            .unwrap()
            .with_pairs(&relation_symbol(2, 1), [])
            .unwrap()
            .with_pairs(&relation_symbol(2, 2), [])
            .unwrap();
        assert!(!is_grid(&two));
        let cyc = Structure::new(2)
            .unwrap()
            .with_pairs(&relation_symbol(2, 1), [(0, 1), (1, 0)])
            .unwrap()
            .with_pairs(&relation_symbol(2, 2), [])
            .unwrap();
        assert!(!is_grid(&cyc));
    }

    #[test]
    fn grid_shape_recovers_coordinates() {
        let g = make_grid(2, 3, &[]).unwrap();
        let shape = grid_shape(&g).unwrap();
        assert_eq!((shape.rows, shape.cols), (2, 3));
        for a in 0..6 {
            let (i, j) = shape.coords[a];
            assert_eq!(grid_cell(3, i, j), a);
        }
    }

    #[test]
    fn class_parsing() {
        assert_eq!("DIGRAPH[1,2]".parse::<GraphClass>(), Ok(GraphClass::Digraph { t: 1, u: 2 }));
        assert_eq!("digraph(0,2)".parse::<GraphClass>(), Ok(GraphClass::Digraph { t: 0, u: 2 }));
        assert_eq!("GRID".parse::<GraphClass>(), Ok(GraphClass::Grid { t: 0 }));
        assert_eq!("PDIGRAPH".parse::<GraphClass>(), Ok(GraphClass::PDigraph));
        assert!("TREE".parse::<GraphClass>().is_err());
        for c in [GraphClass::Graph { t: 1, u: 1 }, GraphClass::Grid { t: 2 }, GraphClass::PDigraph] {
            assert_eq!(c.to_string().parse::<GraphClass>(), Ok(c));
        }
    }
}
