//! Tiling systems over `t`-bit labeled grids.
//!
//! A tile is a 2×2 array `[c1 c2; c3 c4]` whose entries are either the
//! border symbol `#` or a pair of a letter in `{0,1}^t` and a state. Inside
//! a tile `c2` lies one `R2` step right of `c1`, `c3` one `R1` step below
//! and `c4` one `R1` then one `R2` step away.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::classes::{grid_shape, label_symbol, relation_symbol, GraphClass};
use crate::formula::Formula;
use crate::structure::Structure;
use crate::symbol::Symbol;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TilingError {
    #[error("a tiling system needs at least one state")]
    NoStates,
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("tile {tile}: {reason}")]
    BadTile { tile: usize, reason: String },
    #[error("input is not a {0}-bit labeled grid")]
    NotAGrid(usize),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// A tile entry: `None` is the border symbol.
pub type Cell = Option<(Vec<bool>, usize)>;

/// The nine border patterns a tile of a bordered grid can have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    M,
    B,
    R,
    BR,
    L,
    BL,
    T,
    TR,
    TL,
}

impl Pattern {
    pub const ALL: [Pattern; 9] =
        [Pattern::M, Pattern::B, Pattern::R, Pattern::BR, Pattern::L, Pattern::BL, Pattern::T, Pattern::TR, Pattern::TL];

    /// Which entries are `#`.
    pub fn border(self) -> [bool; 4] {
        match self {
            Pattern::M => [false, false, false, false],
            Pattern::B => [false, false, true, true],
            Pattern::R => [false, true, false, true],
            Pattern::BR => [false, true, true, true],
            Pattern::L => [true, false, true, false],
            Pattern::BL => [true, false, true, true],
            Pattern::T => [true, true, false, false],
            Pattern::TR => [true, true, false, true],
            Pattern::TL => [true, true, true, false],
        }
    }

    pub fn of(border: [bool; 4]) -> Option<Pattern> {
        Pattern::ALL.into_iter().find(|p| p.border() == border)
    }

    /// Index (1-based) of the representative entry: the least non-`#` one.
    pub fn representative(self) -> usize {
        self.border().iter().position(|&b| !b).expect("every pattern has an entry") + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tile(pub [Cell; 4]);

impl Tile {
    pub fn pattern(&self) -> Option<Pattern> {
        Pattern::of([0, 1, 2, 3].map(|i| self.0[i].is_none()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilingSystem {
    pub t: usize,
    pub states: Vec<String>,
    pub tiles: Vec<Tile>,
}

/// The tiles grouped by representative entry.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TilePartition {
    pub groups: [Vec<Tile>; 4],
}

impl TilePartition {
    pub fn of(tiles: &[Tile]) -> TilePartition {
        let mut p = TilePartition::default();
        for tile in tiles {
            if let Some(pat) = tile.pattern() {
                p.groups[pat.representative() - 1].push(tile.clone());
            }
        }
        p
    }

    /// `Θ_i`, 1-based.
    pub fn group(&self, i: usize) -> &[Tile] {
        &self.groups[i - 1]
    }
}

impl TilingSystem {
    /// Validates the system. Tiles with an illegal `#` pattern can never
    /// match a window of a bordered grid; they are dropped and reported
    /// in the returned warnings. Duplicate tiles are merged.
    pub fn new(t: usize, states: Vec<String>, tiles: Vec<Tile>) -> Result<(TilingSystem, Vec<String>), TilingError> {
        if states.is_empty() {
            return Err(TilingError::NoStates);
        }
        let mut seen = BTreeSet::new();
        for s in &states {
            if !seen.insert(s) {
                return Err(TilingError::DuplicateState(s.clone()));
            }
        }
        let mut warnings = Vec::new();
        let mut kept = BTreeSet::new();
        let mut out = Vec::new();
        for (k, tile) in tiles.into_iter().enumerate() {
            for (bits, state) in tile.0.iter().flatten() {
                if bits.len() != t {
                    return Err(TilingError::BadTile { tile: k + 1, reason: format!("letter of width {} in a {t}-bit system", bits.len()) });
                }
                if *state >= states.len() {
                    return Err(TilingError::BadTile { tile: k + 1, reason: format!("unknown state index {state}") });
                }
            }
            if tile.pattern().is_none() {
                warnings.push(format!("tile {} has an illegal border pattern and is dropped", k + 1));
                continue;
            }
            if kept.insert(tile.clone()) {
                out.push(tile);
            }
        }
        Ok((TilingSystem { t, states, tiles: out }, warnings))
    }

    pub fn partition(&self) -> TilePartition {
        TilePartition::of(&self.tiles)
    }

    fn cell_text(&self, c: &Cell) -> String {
        match c {
            None => "#".into(),
            Some((bits, s)) => {
                let b: String = bits.iter().map(|&x| if x { '1' } else { '0' }).collect();
                format!("{b}:{}", self.states[*s])
            }
        }
    }

    fn tile_text(&self, tile: &Tile) -> String {
        let c: Vec<String> = tile.0.iter().map(|c| self.cell_text(c)).collect();
        format!("{} {} / {} {}", c[0], c[1], c[2], c[3])
    }
}

impl fmt::Display for TilingSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ts t={}", self.t)?;
        writeln!(f, "states {}", self.states.join(" "))?;
        for tile in &self.tiles {
            writeln!(f, "tile {}", self.tile_text(tile))?;
        }
        Ok(())
    }
}

/// Parses the `ts t=<t>` / `states ...` / `tile c1 c2 / c3 c4` format.
/// Returns the system and the validation warnings.
pub fn parse_tiling_system(text: &str) -> Result<(TilingSystem, Vec<String>), TilingError> {
    let syntax = |line: usize, message: String| TilingError::Syntax { line, message };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let t = match lines.next() {
        Some((n, l)) => {
            let rest = l.strip_prefix("ts").map(str::trim).ok_or_else(|| syntax(n, "expected `ts t=<bits>`".into()))?;
            let v = rest.strip_prefix("t=").ok_or_else(|| syntax(n, "expected `t=<bits>`".into()))?;
            v.trim().parse::<usize>().map_err(|_| syntax(n, format!("bad bit width `{v}`")))?
        }
        None => return Err(syntax(1, "empty input".into())),
    };
    let states: Vec<String> = match lines.next() {
        Some((n, l)) => {
            let rest = l.strip_prefix("states").ok_or_else(|| syntax(n, "expected `states ...`".into()))?;
            rest.split_whitespace().map(str::to_string).collect()
        }
        None => return Err(syntax(2, "missing `states` line".into())),
    };
    let mut tiles = Vec::new();
    for (n, l) in lines {
        let rest = l.strip_prefix("tile").ok_or_else(|| syntax(n, "expected `tile ...`".into()))?;
        let toks: Vec<&str> = rest.split_whitespace().collect();
        let [c1, c2, "/", c3, c4] = toks.as_slice() else {
            return Err(syntax(n, "expected `tile <c> <c> / <c> <c>`".into()));
        };
        let mut cells: [Cell; 4] = Default::default();
        for (slot, tok) in cells.iter_mut().zip([c1, c2, c3, c4]) {
            *slot = parse_cell(tok, &states).map_err(|m| syntax(n, m))?;
        }
        tiles.push(Tile(cells));
    }
    TilingSystem::new(t, states, tiles)
}

fn parse_cell(tok: &str, states: &[String]) -> Result<Cell, String> {
    if tok == "#" {
        return Ok(None);
    }
    let (bits, state) = tok.split_once(':').ok_or_else(|| format!("bad cell `{tok}`"))?;
    let bits = bits
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(format!("bad letter `{bits}`")),
        })
        .collect::<Result<Vec<bool>, String>>()?;
    let s = states.iter().position(|s| s == state).ok_or_else(|| format!("unknown state `{state}`"))?;
    Ok(Some((bits, s)))
}

/// Letters of a labeled grid in row-major order, with its dimensions.
pub fn grid_letters(c: &Structure, t: usize) -> Result<(usize, usize, Vec<Vec<bool>>), TilingError> {
    let class = GraphClass::Grid { t };
    if c.sig() != class.signature() {
        return Err(TilingError::NotAGrid(t));
    }
    let shape = grid_shape(c).ok_or(TilingError::NotAGrid(t))?;
    let sets: Vec<BTreeSet<usize>> = (1..=t).map(|i| c.set_members(&label_symbol(t, i)).expect("signature checked")).collect();
    let mut letters = vec![Vec::new(); c.size()];
    for i in 1..=shape.rows {
        for j in 1..=shape.cols {
            let a = shape.element_at(i, j);
            letters[(i - 1) * shape.cols + (j - 1)] = sets.iter().map(|s| s.contains(&a)).collect();
        }
    }
    Ok((shape.rows, shape.cols, letters))
}

struct Search<'a> {
    ts: &'a TilingSystem,
    rows: usize,
    cols: usize,
    letters: &'a [Vec<bool>],
    states: Vec<usize>,
    /// Windows (by upper-left corner in bordered coordinates) completed
    /// by each cell.
    completes: Vec<Vec<(usize, usize)>>,
}

impl Search<'_> {
    /// Entry of the bordered grid at `(a, b)`, for cells assigned so far.
    fn entry(&self, a: usize, b: usize) -> Option<(&[bool], usize)> {
        if a == 0 || b == 0 || a > self.rows || b > self.cols {
            return None;
        }
        let k = (a - 1) * self.cols + (b - 1);
        Some((&self.letters[k], self.states[k]))
    }

    fn window_ok(&self, a: usize, b: usize) -> bool {
        let w = [self.entry(a, b), self.entry(a, b + 1), self.entry(a + 1, b), self.entry(a + 1, b + 1)];
        self.ts.tiles.iter().any(|tile| {
            tile.0.iter().zip(&w).all(|(c, e)| match (c, e) {
                (None, None) => true,
                (Some((bits, s)), Some((l, q))) => bits.as_slice() == *l && s == q,
                _ => false,
            })
        })
    }

    fn run(&mut self, k: usize) -> bool {
        if k == self.letters.len() {
            return true;
        }
        for s in 0..self.ts.states.len() {
            self.states[k] = s;
            if self.completes[k].iter().all(|&(a, b)| self.window_ok(a, b)) && self.run(k + 1) {
                return true;
            }
        }
        false
    }
}

/// States of an accepting run in row-major order, if one exists.
pub fn find_run(ts: &TilingSystem, c: &Structure) -> Result<Option<Vec<usize>>, TilingError> {
    let (rows, cols, letters) = grid_letters(c, ts.t)?;
    let mut completes = vec![Vec::new(); rows * cols];
    for a in 0..=rows {
        for b in 0..=cols {
            // The window's last real cell in row-major order.
            let (i, j) = ((a + 1).min(rows), (b + 1).min(cols));
            completes[(i - 1) * cols + (j - 1)].push((a, b));
        }
    }
    let mut search = Search { ts, rows, cols, letters: &letters, states: vec![0; rows * cols], completes };
    Ok(search.run(0).then_some(search.states))
}

/// Whether `ts` accepts the labeled grid `c`.
pub fn recognizes(ts: &TilingSystem, c: &Structure) -> Result<bool, TilingError> {
    Ok(find_run(ts, c)?.is_some())
}

/// Checks every window of a proposed run against the tiles.
pub fn check_run(ts: &TilingSystem, c: &Structure, states: &[usize]) -> Result<bool, TilingError> {
    let (rows, cols, letters) = grid_letters(c, ts.t)?;
    if states.len() != rows * cols || states.iter().any(|&s| s >= ts.states.len()) {
        return Ok(false);
    }
    let search = Search { ts, rows, cols, letters: &letters, states: states.to_vec(), completes: Vec::new() };
    Ok((0..=rows).all(|a| (0..=cols).all(|b| search.window_ok(a, b))))
}

/// Set symbol standing for state `i`.
pub fn state_symbol(i: usize) -> Symbol {
    Symbol::set(&format!("X{}", i + 1))
}

pub fn top_symbol() -> Symbol {
    Symbol::set("YT")
}

pub fn left_symbol() -> Symbol {
    Symbol::set("YL")
}

fn entry_formula(ts: &TilingSystem, bits: &[bool], state: usize) -> Formula {
    let t = ts.t;
    let mut parts: Vec<Formula> = bits
        .iter()
        .enumerate()
        .map(|(j, &b)| {
            let p = Formula::set(&label_symbol(t, j + 1));
            if b {
                p
            } else {
                Formula::not(p)
            }
        })
        .collect();
    for w in 0..ts.states.len() {
        let x = Formula::set(&state_symbol(w));
        parts.push(if w == state { x } else { Formula::not(x) });
    }
    Formula::big_and(parts)
}

/// `φ_θ`: the tile seen from its representative entry.
pub fn tile_formula(ts: &TilingSystem, tile: &Tile) -> Formula {
    let (r1, r2) = (relation_symbol(2, 1), relation_symbol(2, 2));
    let e = |i: usize| {
        let (bits, s) = tile.0[i - 1].as_ref().expect("non-border entry");
        entry_formula(ts, bits, *s)
    };
    let down = |f: Formula| Formula::dia(&r1, f);
    let right = |f: Formula| Formula::dia(&r2, f);
    let no_down = || Formula::bx(&r1, Formula::bot());
    let no_right = || Formula::bx(&r2, Formula::bot());
    let parts = match tile.pattern().expect("validated tile") {
        Pattern::M => vec![e(1), right(e(2)), down(e(3)), down(right(e(4)))],
        Pattern::B => vec![e(1), right(e(2)), no_down()],
        Pattern::R => vec![e(1), down(e(3)), no_right()],
        Pattern::BR => vec![e(1), no_down(), no_right()],
        Pattern::L => vec![e(2), down(e(4))],
        Pattern::BL => vec![e(2), no_down()],
        Pattern::T => vec![e(3), right(e(4))],
        Pattern::TR => vec![e(3), no_right()],
        Pattern::TL => vec![e(4)],
    };
    Formula::big_and(parts)
}

/// Marks the top row with `YT` and the left column with `YL`.
pub fn border_formula() -> Formula {
    let (r1, r2) = (relation_symbol(2, 1), relation_symbol(2, 2));
    let (yt, yl) = (Formula::set(&top_symbol()), Formula::set(&left_symbol()));
    Formula::big_and([
        Formula::not(Formula::global(Formula::or(Formula::dia(&r1, yt.clone()), Formula::dia(&r2, yl.clone())))),
        Formula::global(Formula::and(yt.clone(), yl.clone())),
        Formula::global_box(Formula::and(
            Formula::implies(yt.clone(), Formula::bx(&r2, yt)),
            Formula::implies(yl.clone(), Formula::bx(&r1, yl)),
        )),
    ])
}

/// The `Σ1(HG)` sentence over `GRID[t]` satisfied exactly by the grids
/// `ts` accepts.
pub fn ts_to_sigma1_hg(ts: &TilingSystem) -> Formula {
    let p = ts.partition();
    let group = |i: usize| Formula::big_or(p.group(i).iter().map(|tile| tile_formula(ts, tile)));
    let (yt, yl) = (Formula::set(&top_symbol()), Formula::set(&left_symbol()));
    let body = Formula::big_and([
        border_formula(),
        Formula::global_box(group(1)),
        Formula::global_box(Formula::implies(yl.clone(), group(2))),
        Formula::global_box(Formula::implies(yt.clone(), group(3))),
        Formula::global_box(Formula::implies(Formula::and(yt, yl), group(4))),
    ]);
    let mut bound: Vec<Symbol> = (0..ts.states.len()).map(state_symbol).collect();
    bound.push(top_symbol());
    bound.push(left_symbol());
    bound.iter().rev().fold(body, |f, x| Formula::exists_set(x, f))
}
