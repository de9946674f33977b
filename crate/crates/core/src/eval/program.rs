//! Compilation of formulas into slot-addressed DAG programs.
//!
//! Every node denotes a pair of bit masks over the current point: where it
//! is definitely true and where it is definitely false. Bound variables get
//! their own slots, so a shared subformula under two different binders
//! compiles to two nodes.

use std::collections::HashMap;

use crate::formula::{FreeCache, Formula, Modality, Node};
use crate::structure::Structure;
use crate::symbol::Symbol;

pub(crate) type NodeId = usize;
pub(crate) type VarId = usize;

/// Element argument: the current point or an element variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Term {
    Point,
    Var(VarId),
}

#[derive(Debug, Clone)]
pub(crate) enum Op {
    Point,
    Nominal(VarId),
    Eq(Term, Term),
    SetAtom(VarId),
    SetApp(VarId, Term),
    RelApp(usize, Vec<Term>),
    Not(NodeId),
    Or(NodeId, NodeId),
    Dia { rel: usize, inverse: bool, args: Vec<NodeId> },
    Global(NodeId),
    ExistsElem(VarId, NodeId),
    ExistsPoint(NodeId),
    /// A maximal chain of existential set quantifiers.
    Block { vars: Vec<VarId>, body: NodeId },
}

#[derive(Debug, Clone)]
pub(crate) struct NodeData {
    pub op: Op,
    /// Free variable slots, sorted.
    pub free: Vec<VarId>,
    /// Contains a set quantifier.
    pub quantified: bool,
    /// Value at every point, when independent of the structure and all
    /// variables.
    pub constant: Option<bool>,
}

#[derive(Debug, Clone)]
pub(crate) enum VarInit {
    /// A free symbol, read from the structure.
    Free(Symbol),
    Bound,
}

#[derive(Debug, Clone)]
pub(crate) struct VarInfo {
    pub is_set: bool,
    pub init: VarInit,
}

/// Relation tables of a structure.
#[derive(Debug, Clone)]
pub(crate) struct Rel {
    pub arity: usize,
    pub tuples: Vec<Vec<usize>>,
    /// For binary relations: successor and predecessor masks.
    pub succ: Vec<u64>,
    pub pred: Vec<u64>,
}

#[derive(Debug, Clone)]
pub(crate) struct Model {
    pub size: usize,
    pub full: u64,
    pub rels: Vec<Rel>,
}

pub(crate) fn full_mask(size: usize) -> u64 {
    if size >= 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    }
}

impl Model {
    /// Tables of the relations `rels` of `a`, in that order.
    pub fn new(a: &Structure, rels: &[Symbol]) -> Model {
        let size = a.size();
        let mut out = Vec::new();
        for s in rels {
            let tuples = a.relation(s).expect("free symbols are checked against the signature");
            let arity = s.arity() as usize;
            let (mut succ, mut pred) = (Vec::new(), Vec::new());
            if arity == 2 {
                succ = vec![0u64; size];
                pred = vec![0u64; size];
                for t in tuples {
                    succ[t[0]] |= 1 << t[1];
                    pred[t[1]] |= 1 << t[0];
                }
            }
            out.push(Rel { arity, tuples: tuples.iter().cloned().collect(), succ, pred });
        }
        Model { size, full: full_mask(size), rels: out }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Program {
    pub nodes: Vec<NodeData>,
    pub vars: Vec<VarInfo>,
    /// Relation symbols in table order.
    pub rels: Vec<Symbol>,
    pub root: NodeId,
}

struct Compiler {
    rels: Vec<Symbol>,
    rel_ids: HashMap<Symbol, usize>,
    free: FreeCache,
    nodes: Vec<NodeData>,
    vars: Vec<VarInfo>,
    scope: HashMap<Symbol, Vec<VarId>>,
    memo: HashMap<(usize, Vec<VarId>), NodeId>,
    constants: [Option<NodeId>; 2],
}

impl Compiler {
    fn lookup(&mut self, s: &Symbol) -> VarId {
        if let Some(v) = self.scope.get(s).and_then(|st| st.last()) {
            return *v;
        }
        let info = VarInfo { is_set: !s.is_element(), init: VarInit::Free(s.clone()) };
        let v = self.vars.len();
        self.vars.push(info);
        self.scope.insert(s.clone(), vec![v]);
        v
    }

    fn term(&mut self, s: &Symbol) -> Term {
        if s.is_position() {
            Term::Point
        } else {
            Term::Var(self.lookup(s))
        }
    }

    fn bind(&mut self, s: &Symbol, is_set: bool) -> VarId {
        let v = self.vars.len();
        self.vars.push(VarInfo { is_set, init: VarInit::Bound });
        self.scope.entry(s.clone()).or_default().push(v);
        v
    }

    fn rel(&mut self, r: &Symbol) -> usize {
        if let Some(&i) = self.rel_ids.get(r) {
            return i;
        }
        self.rels.push(r.clone());
        self.rel_ids.insert(r.clone(), self.rels.len() - 1);
        self.rels.len() - 1
    }

    fn unbind(&mut self, s: &Symbol) {
        self.scope.get_mut(s).expect("bound").pop();
    }

    fn push(&mut self, op: Op, mut free: Vec<VarId>, quantified: bool) -> NodeId {
        free.sort_unstable();
        free.dedup();
        self.nodes.push(NodeData { op, free, quantified, constant: None });
        self.nodes.len() - 1
    }

    fn constant(&mut self, b: bool) -> NodeId {
        if let Some(n) = self.constants[b as usize] {
            return n;
        }
        let n = if b {
            self.push(Op::Point, vec![], false)
        } else {
            let t = self.constant(true);
            self.push(Op::Not(t), vec![], false)
        };
        self.nodes[n].constant = Some(b);
        self.constants[b as usize] = Some(n);
        n
    }

    fn known(&self, n: NodeId) -> Option<bool> {
        self.nodes[n].constant
    }

    fn free_of(&self, n: NodeId) -> Vec<VarId> {
        self.nodes[n].free.clone()
    }

    fn compile(&mut self, f: &Formula) -> NodeId {
        let syms = self.free.get(f);
        let mut key_vars = Vec::new();
        for s in syms.iter() {
            if s.is_element() && !s.is_position() || s.is_set() {
                key_vars.push(self.lookup(s));
            }
        }
        let key = (f.id(), key_vars);
        if let Some(&n) = self.memo.get(&key) {
            return n;
        }
        let n = self.compile_node(f);
        self.memo.insert(key, n);
        n
    }

    fn compile_node(&mut self, f: &Formula) -> NodeId {
        match f.node() {
            Node::Nominal(q) => match self.term(q) {
                Term::Point => self.constant(true),
                Term::Var(v) => self.push(Op::Nominal(v), vec![v], false),
            },
            Node::Eq(p, q) => {
                let (tp, tq) = (self.term(p), self.term(q));
                let free = [tp, tq].iter().filter_map(|t| if let Term::Var(v) = t { Some(*v) } else { None }).collect();
                self.push(Op::Eq(tp, tq), free, false)
            }
            Node::SetAtom(p) => {
                let v = self.lookup(p);
                self.push(Op::SetAtom(v), vec![v], false)
            }
            Node::SetApp(p, q) => {
                let v = self.lookup(p);
                let t = self.term(q);
                let mut free = vec![v];
                if let Term::Var(w) = t {
                    free.push(w);
                }
                self.push(Op::SetApp(v, t), free, false)
            }
            Node::RelApp(r, qs) => {
                let rel = self.rel(r);
                let terms: Vec<Term> = qs.iter().map(|q| self.term(q)).collect();
                let free = terms.iter().filter_map(|t| if let Term::Var(v) = t { Some(*v) } else { None }).collect();
                self.push(Op::RelApp(rel, terms), free, false)
            }
            Node::Not(a) => {
                let c = self.compile(a);
                if let Some(b) = self.known(c) {
                    return self.constant(!b);
                }
                if let Op::Not(d) = self.nodes[c].op {
                    return d;
                }
                let q = self.nodes[c].quantified;
                self.push(Op::Not(c), self.free_of(c), q)
            }
            Node::Or(a, b) => {
                let (x, y) = (self.compile(a), self.compile(b));
                match (self.known(x), self.known(y)) {
                    (Some(true), _) | (_, Some(true)) => return self.constant(true),
                    (Some(false), _) => return y,
                    (_, Some(false)) => return x,
                    _ if x == y => return x,
                    _ => {}
                }
                let mut free = self.free_of(x);
                free.extend(self.free_of(y));
                let q = self.nodes[x].quantified || self.nodes[y].quantified;
                self.push(Op::Or(x, y), free, q)
            }
            Node::Diamond(m, args) => {
                let cs: Vec<NodeId> = args.iter().map(|a| self.compile(a)).collect();
                if cs.iter().any(|&c| self.known(c) == Some(false)) {
                    return self.constant(false);
                }
                if let (Modality::Global, Some(b)) = (m, self.known(cs[0])) {
                    return self.constant(b);
                }
                let free = cs.iter().flat_map(|&c| self.free_of(c)).collect();
                let q = cs.iter().any(|&c| self.nodes[c].quantified);
                let op = match m {
                    Modality::Global => Op::Global(cs[0]),
                    Modality::Rel(r) => Op::Dia { rel: self.rel(r), inverse: false, args: cs },
                    Modality::Inv(r) => Op::Dia { rel: self.rel(r), inverse: true, args: cs },
                };
                self.push(op, free, q)
            }
            Node::ExistsElem(x, body) => {
                if x.is_position() {
                    let c = self.compile(body);
                    if let Some(b) = self.known(c) {
                        return self.constant(b);
                    }
                    let q = self.nodes[c].quantified;
                    return self.push(Op::ExistsPoint(c), self.free_of(c), q);
                }
                let v = self.bind(x, false);
                let c = self.compile(body);
                self.unbind(x);
                if let Some(b) = self.known(c) {
                    return self.constant(b);
                }
                let free = self.free_of(c).into_iter().filter(|&w| w != v).collect();
                let q = self.nodes[c].quantified;
                self.push(Op::ExistsElem(v, c), free, q)
            }
            Node::ExistsSet(..) => {
                let mut chain = Vec::new();
                let mut cur = f;
                while let Node::ExistsSet(p, body) = cur.node() {
                    chain.push(p.clone());
                    cur = body;
                }
                let vars: Vec<VarId> = chain.iter().map(|p| self.bind(p, true)).collect();
                let body = self.compile(cur);
                for p in chain.iter().rev() {
                    self.unbind(p);
                }
                if let Some(b) = self.known(body) {
                    return self.constant(b);
                }
                // Quantifiers over unused sets are dropped.
                let used = self.free_of(body);
                let vars: Vec<VarId> = vars.into_iter().filter(|v| used.contains(v)).collect();
                if vars.is_empty() {
                    return body;
                }
                let free = used.into_iter().filter(|w| !vars.contains(w)).collect();
                self.push(Op::Block { vars, body }, free, true)
            }
        }
    }
}

/// Compiles `f` independently of any structure.
pub(crate) fn compile(f: &Formula) -> Program {
    compile_with_params(f, &[]).0
}

/// Like [`compile`], with extra set symbols `params` that start fully
/// unknown and are assigned by the caller. Returns their slots.
pub(crate) fn compile_with_params(f: &Formula, params: &[Symbol]) -> (Program, Vec<VarId>) {
    let mut c = Compiler {
        rels: Vec::new(),
        rel_ids: HashMap::new(),
        free: FreeCache::default(),
        nodes: Vec::new(),
        vars: Vec::new(),
        scope: HashMap::new(),
        memo: HashMap::new(),
        constants: [None; 2],
    };
    let slots = params.iter().map(|p| c.bind(p, true)).collect();
    let root = c.compile(f);
    (Program { nodes: c.nodes, vars: c.vars, rels: c.rels, root }, slots)
}
