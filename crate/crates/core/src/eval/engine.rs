//! Three-valued evaluation of compiled programs.
//!
//! Set variables carry partial assignments (`tin`: known members, `fout`:
//! known non-members). Nodes evaluate to Kleene masks `(t, f)`; on complete
//! assignments `t | f` covers every requested point.

use super::program::{Model, NodeId, Op, Program, Term, VarId, VarInit};
use super::{EvalConfig, Stats, Strategy};
use crate::structure::Structure;

/// Search nodes granted to a nested quantifier block whose free set
/// variables are still partially assigned; past it the block is unknown.
const NESTED_BUDGET: u64 = 48;

#[derive(Debug, Clone, Copy, Default)]
struct Var {
    elem: usize,
    tin: u64,
    fout: u64,
    stamp: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Cached {
    at: u64,
    t: u64,
    f: u64,
}

pub(crate) struct Engine<'a> {
    prog: &'a Program,
    model: &'a Model,
    cfg: EvalConfig,
    vars: Vec<Var>,
    cache: Vec<Cached>,
    clock: u64,
    pub stats: Stats,
}

struct Search {
    found: u64,
    not_false: u64,
    budget: Option<u64>,
}

fn bit(e: usize) -> u64 {
    1u64 << e
}

impl<'a> Engine<'a> {
    /// `a` supplies the free symbols; `model` must be built from it.
    pub fn new(prog: &'a Program, model: &'a Model, a: &Structure, cfg: EvalConfig) -> Engine<'a> {
        let full = model.full;
        let vars = prog
            .vars
            .iter()
            .map(|v| match &v.init {
                VarInit::Free(s) if s.is_element() => {
                    Var { elem: a.element(s).expect("free symbols are checked against the signature"), ..Var::default() }
                }
                VarInit::Free(s) => {
                    let members = a.set_members(s).expect("free symbols are checked against the signature");
                    let m = members.iter().fold(0, |m, &e| m | 1 << e);
                    Var { tin: m, fout: full & !m, ..Var::default() }
                }
                VarInit::Bound => Var::default(),
            })
            .collect();
        Engine {
            prog,
            model,
            cfg,
            vars,
            cache: vec![Cached::default(); prog.nodes.len()],
            clock: 1,
            stats: Stats::default(),
        }
    }

    fn touch(&mut self, v: VarId) {
        self.clock += 1;
        self.vars[v].stamp = self.clock;
    }

    fn set_elem(&mut self, v: VarId, e: usize) {
        self.vars[v].elem = e;
        self.touch(v);
    }

    pub fn set_set(&mut self, v: VarId, tin: u64, fout: u64) {
        self.vars[v].tin = tin;
        self.vars[v].fout = fout;
        self.touch(v);
    }

    fn term_mask(&self, t: Term) -> Option<u64> {
        match t {
            Term::Point => None,
            Term::Var(v) => Some(bit(self.vars[v].elem)),
        }
    }

    fn unknown(&self, v: VarId) -> u64 {
        self.model.full & !(self.vars[v].tin | self.vars[v].fout)
    }

    /// Evaluates the root at the requested points.
    pub fn run(&mut self, want: u64) -> (u64, u64) {
        self.eval(self.prog.root, want)
    }

    fn eval(&mut self, n: NodeId, want: u64) -> (u64, u64) {
        let prog = self.prog;
        let node = &prog.nodes[n];
        if node.quantified {
            let (t, f) = self.compute(n, want);
            return (t & want, f & want);
        }
        let c = self.cache[n];
        if c.at != 0 && node.free.iter().all(|&v| self.vars[v].stamp < c.at) {
            return (c.t & want, c.f & want);
        }
        let (t, f) = self.compute(n, self.model.full);
        self.clock += 1;
        self.cache[n] = Cached { at: self.clock, t, f };
        (t & want, f & want)
    }

    fn compute(&mut self, n: NodeId, want: u64) -> (u64, u64) {
        let full = self.model.full;
        let prog = self.prog;
        match &prog.nodes[n].op {
            Op::Point => (full, 0),
            Op::Nominal(v) => {
                let b = bit(self.vars[*v].elem);
                (b, full & !b)
            }
            Op::Eq(p, q) => {
                let t = match (self.term_mask(*p), self.term_mask(*q)) {
                    (None, None) => full,
                    (Some(m), None) | (None, Some(m)) => m,
                    (Some(a), Some(b)) => {
                        if a == b {
                            full
                        } else {
                            0
                        }
                    }
                };
                (t, full & !t)
            }
            Op::SetAtom(v) => (self.vars[*v].tin, self.vars[*v].fout),
            Op::SetApp(v, q) => {
                let (tin, fout) = (self.vars[*v].tin, self.vars[*v].fout);
                match self.term_mask(*q) {
                    None => (tin, fout),
                    Some(b) => (if tin & b != 0 { full } else { 0 }, if fout & b != 0 { full } else { 0 }),
                }
            }
            Op::RelApp(r, terms) => {
                let mut t = 0;
                'tuples: for tup in &self.model.rels[*r].tuples {
                    let mut point = None;
                    for (&e, term) in tup.iter().zip(terms) {
                        match term {
                            Term::Var(v) => {
                                if self.vars[*v].elem != e {
                                    continue 'tuples;
                                }
                            }
                            Term::Point => {
                                if point.is_some_and(|p| p != e) {
                                    continue 'tuples;
                                }
                                point = Some(e);
                            }
                        }
                    }
                    t |= point.map_or(full, bit);
                }
                (t, full & !t)
            }
            Op::Not(c) => {
                let (t, f) = self.eval(*c, want);
                (f, t)
            }
            Op::Or(a, b) => {
                let (ta, fa) = self.eval(*a, want);
                let rest = want & !ta;
                if rest == 0 {
                    return (ta, 0);
                }
                let (tb, fb) = self.eval(*b, rest);
                (ta | tb, fa & fb)
            }
            Op::Dia { rel, inverse, args } => self.diamond(*rel, *inverse, args, want),
            Op::Global(c) => {
                let (t, f) = self.eval(*c, full);
                (if t != 0 { full } else { 0 }, if f == full { full } else { 0 })
            }
            Op::ExistsPoint(c) => {
                let (t, f) = self.eval(*c, full);
                (if t != 0 { full } else { 0 }, if f == full { full } else { 0 })
            }
            Op::ExistsElem(v, c) => {
                let (mut t, mut f) = (0, full);
                for e in 0..self.model.size {
                    let rest = want & !t;
                    if rest == 0 {
                        break;
                    }
                    self.set_elem(*v, e);
                    let (te, fe) = self.eval(*c, if self.cfg.short_circuit { rest } else { want });
                    t |= te;
                    f &= fe;
                }
                (t, f & !t)
            }
            Op::Block { vars, body } => self.block(n, vars, *body, want),
        }
    }

    fn diamond(&mut self, rel: usize, inverse: bool, args: &[NodeId], want: u64) -> (u64, u64) {
        let model = self.model;
        let r = &model.rels[rel];
        let full = model.full;
        if r.arity == 2 {
            let adj = if inverse { &r.pred } else { &r.succ };
            let mut reach = 0;
            for a in 0..model.size {
                if want & bit(a) != 0 {
                    reach |= adj[a];
                }
            }
            let (ta, fa) = self.eval(args[0], reach);
            let (mut t, mut f) = (0, 0);
            for a in 0..model.size {
                if want & bit(a) == 0 {
                    continue;
                }
                if adj[a] & ta != 0 {
                    t |= bit(a);
                }
                if adj[a] & !fa == 0 {
                    f |= bit(a);
                }
            }
            return (t, f);
        }
        let k = r.arity - 1;
        // Component of the tuple filling argument `i` (0-based) and the point.
        let arg_pos = |i: usize| if inverse { k - 1 - i } else { i + 1 };
        let point_pos = if inverse { k } else { 0 };
        let mut reach = vec![0u64; k];
        for tup in &r.tuples {
            if want & bit(tup[point_pos]) != 0 {
                for (i, m) in reach.iter_mut().enumerate() {
                    *m |= bit(tup[arg_pos(i)]);
                }
            }
        }
        let masks: Vec<(u64, u64)> = args.iter().zip(&reach).map(|(&c, &m)| self.eval(c, m)).collect();
        let (mut t, mut f) = (0, full);
        for tup in &r.tuples {
            let a = bit(tup[point_pos]);
            let mut all_true = true;
            let mut some_false = false;
            for (i, &(ti, fi)) in masks.iter().enumerate() {
                let b = bit(tup[arg_pos(i)]);
                all_true &= ti & b != 0;
                some_false |= fi & b != 0;
            }
            if all_true {
                t |= a;
            }
            if !some_false {
                f &= !a;
            }
        }
        (t & want, f & want)
    }

    fn block(&mut self, n: NodeId, vars: &[VarId], body: NodeId, want: u64) -> (u64, u64) {
        let full = self.model.full;
        let outer_partial = self.prog.nodes[n].free.iter().any(|&v| self.prog.vars[v].is_set && self.unknown(v) != 0);
        let kernel = !self.prog.nodes[body].quantified;
        for &v in vars {
            self.set_set(v, 0, 0);
        }
        let result = match self.cfg.strategy {
            Strategy::Enumerate if !outer_partial => {
                let t = self.enumerate(vars, body, kernel, want);
                (t, want & !t)
            }
            _ => {
                let budget = outer_partial.then_some(NESTED_BUDGET);
                let mut s = Search { found: 0, not_false: 0, budget };
                self.dfs(vars, body, kernel, want, &mut s);
                (s.found, want & !(s.found | s.not_false))
            }
        };
        for &v in vars {
            self.set_set(v, 0, full);
        }
        result
    }

    /// Subsets in increasing popcount, then increasing as binary numbers.
    fn enumerate(&mut self, vars: &[VarId], body: NodeId, kernel: bool, want: u64) -> u64 {
        let Some((&v, rest)) = vars.split_first() else {
            if kernel {
                self.stats.kernel_evals += 1;
            }
            return self.eval(body, want).0;
        };
        let d = self.model.size;
        let full = self.model.full;
        let mut found = 0;
        for k in 0..=d {
            let mut s: u64 = if k == 0 { 0 } else { (1u64 << k) - 1 };
            loop {
                self.set_set(v, s, full & !s);
                found |= self.enumerate(rest, body, kernel, want & !found);
                if self.cfg.short_circuit && found & want == want {
                    return found;
                }
                if k == 0 || k == d {
                    break;
                }
                // Next subset with the same popcount.
                let c = s & s.wrapping_neg();
                let r = s + c;
                s = (((r ^ s) >> 2) / c) | r;
                if s > full {
                    break;
                }
            }
        }
        found
    }

    fn dfs(&mut self, vars: &[VarId], body: NodeId, kernel: bool, active: u64, s: &mut Search) {
        self.stats.search_nodes += 1;
        if kernel {
            self.stats.kernel_evals += 1;
        }
        let (t, f) = self.eval(body, active);
        s.found |= t;
        let active = active & !t & !f;
        if active == 0 {
            return;
        }
        if let Some(b) = s.budget.as_mut() {
            if *b == 0 {
                s.not_false |= active;
                return;
            }
            *b -= 1;
        }
        let Some((v, e)) = self.pick(vars) else {
            // Complete here; the verdict still depends on outer unknowns.
            s.not_false |= active;
            return;
        };
        let (tin, fout) = (self.vars[v].tin, self.vars[v].fout);
        self.set_set(v, tin, fout | bit(e));
        self.dfs(vars, body, kernel, active & !s.found, s);
        let active = active & !s.found;
        if active != 0 {
            self.set_set(v, tin | bit(e), fout);
            self.dfs(vars, body, kernel, active, s);
        }
        self.set_set(v, tin, fout);
    }

    /// Element-major choice of the next undecided membership bit.
    fn pick(&self, vars: &[VarId]) -> Option<(VarId, usize)> {
        let any = vars.iter().fold(0, |m, &v| m | self.unknown(v));
        if any == 0 {
            return None;
        }
        let e = any.trailing_zeros() as usize;
        let v = *vars.iter().find(|&&v| self.unknown(v) & bit(e) != 0)?;
        Some((v, e))
    }
}
