//! Formula evaluation over a [`RelStructure`].
//!
//! Formulas are compiled to an arena with one slot per bound variable.
//! Quantifier nodes memoize on the values of their free slots, existential
//! blocks are miniscoped, and atoms that every witness must satisfy restrict
//! the candidate range of a quantifier.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::structure::{RelStructure, Relation, EDGE};
use super::{and, DistCmp, Formula};
use crate::error::{Error, Result};

pub const DEFAULT_SET_CAP: usize = 22;

#[derive(Debug, Clone, Default)]
pub struct Assignment {
    pub elems: BTreeMap<String, usize>,
    pub sets: BTreeMap<String, BTreeSet<usize>>,
}

impl Assignment {
    pub fn of(pairs: &[(&str, usize)]) -> Self {
        Assignment { elems: pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect(), sets: BTreeMap::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    None,
    /// symmetric, transitive, and reflexive on every element occurring in a pair
    TransitiveSymmetric,
}

type Id = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum QKind {
    Exists,
    Forall,
    Unique,
}

#[derive(Debug, Clone)]
enum Guard {
    /// candidates `c` with `rel(c, other)`
    Into { rel: usize, other: u32 },
    /// candidates `c` with `rel(other, c)`
    From { rel: usize, other: u32 },
    Same(u32),
    Label(usize),
}

#[derive(Debug, Clone)]
enum Node {
    Const(bool),
    Rel { rel: usize, a: u32, b: u32 },
    Eq(u32, u32),
    Label { label: usize, a: u32 },
    In { a: u32, set: u32 },
    Not(Id),
    And(Vec<Id>),
    Or(Vec<Id>),
    Implies(Id, Id),
    Iff(Id, Id),
    Quant { kind: QKind, slot: u32, body: Id, guards: Vec<Guard>, memo: Option<usize> },
    SetQuant { exists: bool, slot: u32, body: Id },
    Dist { a: u32, b: u32, cmp: DistCmp, c: u32 },
    Deg { a: u32, c: u32 },
}

struct Prog<'s> {
    nodes: Vec<Node>,
    /// free element slots per memoized node
    memo_keys: Vec<Vec<u32>>,
    rels: Vec<&'s Relation>,
    labels: Vec<Vec<u32>>,
    label_bits: Vec<&'s [bool]>,
    edge: Option<&'s Relation>,
    n: usize,
    n_slots: usize,
    n_set_slots: usize,
}

struct State {
    env: Vec<u32>,
    senv: Vec<u64>,
    memo: Vec<HashMap<u128, bool>>,
    dist_rows: Vec<Option<Vec<u32>>>,
}

/// Reusable evaluator for one formula on one structure.
pub struct Evaluator<'s> {
    prog: Prog<'s>,
    st: State,
    root: Id,
    params: Vec<u32>,
    set_params: Vec<u32>,
}

enum Slot {
    Elem(u32),
    Set(u32),
}

struct Compiler<'s> {
    s: &'s RelStructure,
    nodes: Vec<Node>,
    free: Vec<BTreeSet<u32>>,
    set_free: Vec<bool>,
    memo_keys: Vec<Vec<u32>>,
    rel_names: Vec<String>,
    rels: Vec<&'s Relation>,
    label_names: Vec<String>,
    label_bits: Vec<&'s [bool]>,
    scope: Vec<(String, Slot)>,
    n_slots: u32,
    n_set_slots: u32,
    uses_edge: bool,
}

fn flatten_and(f: Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::And(a, b) => {
            flatten_and(*a, out);
            flatten_and(*b, out);
        }
        Formula::True => {}
        other => out.push(other),
    }
}

fn flatten_and_ref<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::And(a, b) => {
            flatten_and_ref(a, out);
            flatten_and_ref(b, out);
        }
        other => out.push(other),
    }
}

/// Pushes existential quantifiers inward as far as the conjunction structure allows.
pub(crate) fn miniscope(f: &Formula) -> Formula {
    use Formula as F;
    let b = |x: &Formula| Box::new(miniscope(x));
    match f {
        F::Exists(..) => {
            let mut vars: Vec<String> = Vec::new();
            let mut cur = f;
            while let F::Exists(v, inner) = cur {
                if vars.contains(v) {
                    break;
                }
                vars.push(v.clone());
                cur = inner;
            }
            let mut conj = Vec::new();
            flatten_and(miniscope(cur), &mut conj);
            build_block(&vars, conj)
        }
        F::Not(a) => F::Not(b(a)),
        F::And(x, y) => F::And(b(x), b(y)),
        F::Or(x, y) => F::Or(b(x), b(y)),
        F::Implies(x, y) => F::Implies(b(x), b(y)),
        F::Iff(x, y) => F::Iff(b(x), b(y)),
        F::Forall(v, a) => F::Forall(v.clone(), b(a)),
        F::ExistsUnique(v, a) => F::ExistsUnique(v.clone(), b(a)),
        F::ExistsSet(v, a) => F::ExistsSet(v.clone(), b(a)),
        F::ForallSet(v, a) => F::ForallSet(v.clone(), b(a)),
        other => other.clone(),
    }
}

fn build_block(vars: &[String], conj: Vec<Formula>) -> Formula {
    if vars.is_empty() {
        return and(conj);
    }
    let occurs: Vec<BTreeSet<usize>> = conj
        .iter()
        .map(|c| {
            let fv = c.free_vars();
            vars.iter().enumerate().filter(|(_, v)| fv.contains(*v)).map(|(i, _)| i).collect()
        })
        .collect();
    // union-find over block variables
    let mut parent: Vec<usize> = (0..vars.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for occ in &occurs {
        let mut it = occ.iter();
        if let Some(&first) = it.next() {
            for &o in it {
                let (a, b) = (find(&mut parent, first), find(&mut parent, o));
                parent[a] = b;
            }
        }
    }
    let mut outer = Vec::new();
    let mut groups: BTreeMap<usize, (Vec<usize>, Vec<Formula>)> = BTreeMap::new();
    for (i, _) in vars.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().0.push(i);
    }
    for (c, occ) in conj.into_iter().zip(&occurs) {
        match occ.iter().next() {
            None => outer.push(c),
            Some(&i) => {
                let r = find(&mut parent, i);
                groups.get_mut(&r).expect("group").1.push(c);
            }
        }
    }
    let mut comps: Vec<(usize, Formula)> = Vec::new();
    for (_, (idx, cs)) in groups {
        let first = idx[0];
        if cs.is_empty() {
            for &i in &idx {
                comps.push((i, Formula::Exists(vars[i].clone(), Box::new(Formula::True))));
            }
            continue;
        }
        let local: Vec<BTreeSet<usize>> = cs
            .iter()
            .map(|c| {
                let fv = c.free_vars();
                idx.iter().copied().filter(|&i| fv.contains(&vars[i])).collect()
            })
            .collect();
        let pick = idx
            .iter()
            .copied()
            .find(|&i| local.iter().any(|l| l.len() == 1 && l.contains(&i)))
            .unwrap_or(first);
        let mut level = Vec::new();
        let mut rest = Vec::new();
        for (c, l) in cs.into_iter().zip(&local) {
            if l.len() == 1 && l.contains(&pick) {
                level.push(c);
            } else {
                rest.push(c);
            }
        }
        let rest_vars: Vec<String> = idx.iter().filter(|&&i| i != pick).map(|&i| vars[i].clone()).collect();
        level.push(build_block(&rest_vars, rest));
        comps.push((first, Formula::Exists(vars[pick].clone(), Box::new(and(level)))));
    }
    comps.sort_by_key(|(i, _)| *i);
    outer.extend(comps.into_iter().map(|(_, f)| f));
    and(outer)
}

impl<'s> Compiler<'s> {
    fn push(&mut self, node: Node, free: BTreeSet<u32>, set_free: bool) -> Id {
        self.nodes.push(node);
        self.free.push(free);
        self.set_free.push(set_free);
        self.nodes.len() - 1
    }

    fn lookup(&self, v: &str) -> Result<&Slot> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == v)
            .map(|(_, s)| s)
            .ok_or_else(|| Error::UnboundVariable(v.to_string()))
    }

    fn elem(&self, v: &str) -> Result<u32> {
        match self.lookup(v)? {
            Slot::Elem(s) => Ok(*s),
            Slot::Set(_) => Err(Error::Invalid(format!("`{v}` is a set variable used as an element"))),
        }
    }

    fn rel_index(&mut self, name: &str) -> Result<usize> {
        if let Some(i) = self.rel_names.iter().position(|n| n == name) {
            return Ok(i);
        }
        let r = self.s.relation(name).ok_or_else(|| Error::UnknownRelation(name.to_string()))?;
        self.rel_names.push(name.to_string());
        self.rels.push(r);
        Ok(self.rels.len() - 1)
    }

    fn label_index(&mut self, name: &str) -> Result<usize> {
        if let Some(i) = self.label_names.iter().position(|n| n == name) {
            return Ok(i);
        }
        let l = self.s.label(name).ok_or_else(|| Error::UnknownRelation(name.to_string()))?;
        self.label_names.push(name.to_string());
        self.label_bits.push(l);
        Ok(self.label_bits.len() - 1)
    }

    fn guards(&mut self, v: &str, atoms: &[&Formula], inner_bound: &[String]) -> Vec<Guard> {
        let usable = |w: &String| w != v && !inner_bound.contains(w);
        let mut out = Vec::new();
        for a in atoms {
            let g = match a {
                Formula::Rel(r, x, y) if x == v && usable(y) => {
                    self.rel_index(r).ok().zip(self.elem(y).ok()).map(|(rel, other)| Guard::Into { rel, other })
                }
                Formula::Rel(r, x, y) if y == v && usable(x) => {
                    self.rel_index(r).ok().zip(self.elem(x).ok()).map(|(rel, other)| Guard::From { rel, other })
                }
                Formula::Eq(x, y) if x == v && usable(y) => self.elem(y).ok().map(Guard::Same),
                Formula::Eq(x, y) if y == v && usable(x) => self.elem(x).ok().map(Guard::Same),
                Formula::Label(l, x) if x == v => self.label_index(l).ok().map(Guard::Label),
                _ => None,
            };
            out.extend(g);
        }
        out
    }

    fn compile(&mut self, f: &Formula) -> Result<Id> {
        use Formula as F;
        let single = |s: u32| BTreeSet::from([s]);
        Ok(match f {
            F::True => self.push(Node::Const(true), BTreeSet::new(), false),
            F::False => self.push(Node::Const(false), BTreeSet::new(), false),
            F::Rel(r, x, y) => {
                if r == EDGE {
                    self.uses_edge = true;
                }
                let rel = self.rel_index(r)?;
                let (a, b) = (self.elem(x)?, self.elem(y)?);
                self.push(Node::Rel { rel, a, b }, BTreeSet::from([a, b]), false)
            }
            F::Eq(x, y) => {
                let (a, b) = (self.elem(x)?, self.elem(y)?);
                self.push(Node::Eq(a, b), BTreeSet::from([a, b]), false)
            }
            F::Label(l, x) => {
                let label = self.label_index(l)?;
                let a = self.elem(x)?;
                self.push(Node::Label { label, a }, single(a), false)
            }
            F::In(x, s) => {
                let a = self.elem(x)?;
                let set = match self.lookup(s)? {
                    Slot::Set(k) => *k,
                    Slot::Elem(_) => return Err(Error::Invalid(format!("`{s}` is not a set variable"))),
                };
                self.push(Node::In { a, set }, single(a), true)
            }
            F::Dist(x, y, cmp, c) => {
                self.uses_edge = true;
                let (a, b) = (self.elem(x)?, self.elem(y)?);
                self.push(Node::Dist { a, b, cmp: *cmp, c: *c }, BTreeSet::from([a, b]), false)
            }
            F::Deg(x, c) => {
                self.uses_edge = true;
                let a = self.elem(x)?;
                self.push(Node::Deg { a, c: *c }, single(a), false)
            }
            F::Not(a) => {
                let i = self.compile(a)?;
                let (fr, sf) = (self.free[i].clone(), self.set_free[i]);
                self.push(Node::Not(i), fr, sf)
            }
            F::And(..) | F::Or(..) => {
                let is_and = matches!(f, F::And(..));
                let mut parts = Vec::new();
                collect_assoc(f, is_and, &mut parts);
                let ids = parts.iter().map(|p| self.compile(p)).collect::<Result<Vec<_>>>()?;
                let fr = ids.iter().flat_map(|i| self.free[*i].iter().copied()).collect();
                let sf = ids.iter().any(|i| self.set_free[*i]);
                self.push(if is_and { Node::And(ids) } else { Node::Or(ids) }, fr, sf)
            }
            F::Implies(a, b) | F::Iff(a, b) => {
                let (x, y) = (self.compile(a)?, self.compile(b)?);
                let fr = self.free[x].union(&self.free[y]).copied().collect();
                let sf = self.set_free[x] || self.set_free[y];
                let node = if matches!(f, F::Implies(..)) { Node::Implies(x, y) } else { Node::Iff(x, y) };
                self.push(node, fr, sf)
            }
            F::Exists(v, body) | F::Forall(v, body) | F::ExistsUnique(v, body) => {
                let kind = match f {
                    F::Exists(..) => QKind::Exists,
                    F::Forall(..) => QKind::Forall,
                    _ => QKind::Unique,
                };
                // atoms every relevant candidate must satisfy, seen through nested
                // quantifiers of the same kind
                let mut inner_bound = Vec::new();
                let mut cur: &Formula = body;
                loop {
                    match (kind, cur) {
                        (QKind::Exists, F::Exists(w, b)) | (QKind::Forall, F::Forall(w, b)) => {
                            inner_bound.push(w.clone());
                            cur = b;
                        }
                        _ => break,
                    }
                }
                let mut atoms = Vec::new();
                match (kind, cur) {
                    (QKind::Forall, F::Implies(ante, _)) => flatten_and_ref(ante, &mut atoms),
                    (QKind::Forall, _) => {}
                    _ => flatten_and_ref(cur, &mut atoms),
                }
                let guards = self.guards(v, &atoms, &inner_bound);
                let slot = self.n_slots;
                self.n_slots += 1;
                self.scope.push((v.clone(), Slot::Elem(slot)));
                let b = self.compile(body);
                self.scope.pop();
                let b = b?;
                let mut fr = self.free[b].clone();
                fr.remove(&slot);
                let sf = self.set_free[b];
                let memo = (!sf && fr.len() <= 4).then(|| {
                    self.memo_keys.push(fr.iter().copied().collect());
                    self.memo_keys.len() - 1
                });
                self.push(Node::Quant { kind, slot, body: b, guards, memo }, fr, sf)
            }
            F::ExistsSet(v, body) | F::ForallSet(v, body) => {
                let slot = self.n_set_slots;
                self.n_set_slots += 1;
                self.scope.push((v.clone(), Slot::Set(slot)));
                let b = self.compile(body);
                self.scope.pop();
                let b = b?;
                let fr = self.free[b].clone();
                self.push(Node::SetQuant { exists: matches!(f, F::ExistsSet(..)), slot, body: b }, fr, true)
            }
        })
    }
}

fn collect_assoc<'a>(f: &'a Formula, is_and: bool, out: &mut Vec<&'a Formula>) {
    match (f, is_and) {
        (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
            collect_assoc(a, is_and, out);
            collect_assoc(b, is_and, out);
        }
        _ => out.push(f),
    }
}

fn pack(st: &State, slots: &[u32]) -> u128 {
    slots.iter().fold(0u128, |acc, s| acc << 32 | st.env[*s as usize] as u128)
}

fn dist(p: &Prog, st: &mut State, a: usize, b: usize) -> u32 {
    if st.dist_rows[a].is_none() {
        let edge = p.edge.expect("edge relation checked at construction");
        let mut row = vec![u32::MAX; p.n];
        let mut q = VecDeque::from([a]);
        row[a] = 0;
        while let Some(x) = q.pop_front() {
            for &y in edge.out(x) {
                if row[y as usize] == u32::MAX {
                    row[y as usize] = row[x] + 1;
                    q.push_back(y as usize);
                }
            }
        }
        st.dist_rows[a] = Some(row);
    }
    st.dist_rows[a].as_ref().expect("filled")[b]
}

fn ev(p: &Prog, st: &mut State, id: Id) -> bool {
    match &p.nodes[id] {
        Node::Const(b) => *b,
        Node::Rel { rel, a, b } => p.rels[*rel].holds(st.env[*a as usize] as usize, st.env[*b as usize] as usize),
        Node::Eq(a, b) => st.env[*a as usize] == st.env[*b as usize],
        Node::Label { label, a } => p.label_bits[*label][st.env[*a as usize] as usize],
        Node::In { a, set } => st.senv[*set as usize] >> st.env[*a as usize] & 1 == 1,
        Node::Not(x) => !ev(p, st, *x),
        Node::And(xs) => xs.iter().all(|x| ev(p, st, *x)),
        Node::Or(xs) => xs.iter().any(|x| ev(p, st, *x)),
        Node::Implies(a, b) => !ev(p, st, *a) || ev(p, st, *b),
        Node::Iff(a, b) => ev(p, st, *a) == ev(p, st, *b),
        Node::Dist { a, b, cmp, c } => {
            let d = dist(p, st, st.env[*a as usize] as usize, st.env[*b as usize] as usize);
            match cmp {
                DistCmp::Eq => d == *c,
                DistCmp::Le => d <= *c,
            }
        }
        Node::Deg { a, c } => {
            let x = st.env[*a as usize] as usize;
            p.edge.expect("edge relation").out(x).iter().filter(|&&y| y as usize != x).count() == *c as usize
        }
        Node::Quant { kind, slot, body, guards, memo } => {
            let key = memo.map(|m| (m, pack(st, &p.memo_keys[m])));
            if let Some((m, k)) = key {
                if let Some(&v) = st.memo[m].get(&k) {
                    return v;
                }
            }
            let mut best: Option<&[u32]> = None;
            let mut same: Option<u32> = None;
            for g in guards {
                let cand: &[u32] = match g {
                    Guard::Into { rel, other } => p.rels[*rel].inn(st.env[*other as usize] as usize),
                    Guard::From { rel, other } => p.rels[*rel].out(st.env[*other as usize] as usize),
                    Guard::Label(l) => &p.labels[*l],
                    Guard::Same(o) => {
                        same = Some(st.env[*o as usize]);
                        break;
                    }
                };
                if best.map_or(true, |b| cand.len() < b.len()) {
                    best = Some(cand);
                }
            }
            let s = *slot as usize;
            let mut run = |st: &mut State, c: u32| {
                st.env[s] = c;
                ev(p, st, *body)
            };
            let result = match (same, best) {
                (Some(c), _) => {
                    let holds = run(st, c);
                    match kind {
                        QKind::Exists | QKind::Unique => holds,
                        QKind::Forall => holds,
                    }
                }
                (None, Some(list)) => quant(*kind, list.iter().copied(), st, &mut run),
                (None, None) => quant(*kind, 0..p.n as u32, st, &mut run),
            };
            if let Some((m, k)) = key {
                st.memo[m].insert(k, result);
            }
            result
        }
        Node::SetQuant { exists, slot, body } => {
            let total = 1u64 << p.n;
            for mask in 0..total {
                st.senv[*slot as usize] = mask;
                let v = ev(p, st, *body);
                if v == *exists {
                    return v;
                }
            }
            !*exists
        }
    }
}

fn quant(
    kind: QKind,
    cands: impl Iterator<Item = u32>,
    st: &mut State,
    run: &mut impl FnMut(&mut State, u32) -> bool,
) -> bool {
    match kind {
        QKind::Exists => {
            for c in cands {
                if run(st, c) {
                    return true;
                }
            }
            false
        }
        QKind::Forall => {
            for c in cands {
                if !run(st, c) {
                    return false;
                }
            }
            true
        }
        QKind::Unique => {
            let mut count = 0;
            for c in cands {
                if run(st, c) {
                    count += 1;
                    if count > 1 {
                        return false;
                    }
                }
            }
            count == 1
        }
    }
}

impl<'s> Evaluator<'s> {
    /// Compiles `f` with the listed free element and set variables as parameters.
    pub fn new(s: &'s RelStructure, f: &Formula, params: &[&str], set_params: &[&str]) -> Result<Self> {
        Evaluator::with_set_cap(s, f, params, set_params, DEFAULT_SET_CAP)
    }

    pub fn with_set_cap(
        s: &'s RelStructure,
        f: &Formula,
        params: &[&str],
        set_params: &[&str],
        set_cap: usize,
    ) -> Result<Self> {
        if f.uses_sets() && s.len() > set_cap.min(63) {
            return Err(Error::SetQuantifierBudget { size: s.len(), cap: set_cap.min(63) });
        }
        let mut c = Compiler {
            s,
            nodes: Vec::new(),
            free: Vec::new(),
            set_free: Vec::new(),
            memo_keys: Vec::new(),
            rel_names: Vec::new(),
            rels: Vec::new(),
            label_names: Vec::new(),
            label_bits: Vec::new(),
            scope: Vec::new(),
            n_slots: 0,
            n_set_slots: 0,
            uses_edge: false,
        };
        let mut pslots = Vec::new();
        for p in params {
            c.scope.push((p.to_string(), Slot::Elem(c.n_slots)));
            pslots.push(c.n_slots);
            c.n_slots += 1;
        }
        let mut sslots = Vec::new();
        for p in set_params {
            c.scope.push((p.to_string(), Slot::Set(c.n_set_slots)));
            sslots.push(c.n_set_slots);
            c.n_set_slots += 1;
        }
        let root = c.compile(&miniscope(f))?;
        let edge = s.relation(EDGE);
        if c.uses_edge && edge.is_none() {
            return Err(Error::UnknownRelation(EDGE.into()));
        }
        let labels = c
            .label_bits
            .iter()
            .map(|bits| bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i as u32).collect())
            .collect();
        let n_memo = c.memo_keys.len();
        let prog = Prog {
            nodes: c.nodes,
            memo_keys: c.memo_keys,
            rels: c.rels,
            labels,
            label_bits: c.label_bits,
            edge,
            n: s.len(),
            n_slots: c.n_slots as usize,
            n_set_slots: c.n_set_slots as usize,
        };
        let st = State {
            env: vec![0; prog.n_slots],
            senv: vec![0; prog.n_set_slots],
            memo: vec![HashMap::new(); n_memo],
            dist_rows: vec![None; prog.n],
        };
        Ok(Evaluator { prog, st, root, params: pslots, set_params: sslots })
    }

    pub fn eval(&mut self, args: &[usize]) -> bool {
        self.eval_with_sets(args, &[])
    }

    pub fn eval_with_sets(&mut self, args: &[usize], sets: &[u64]) -> bool {
        assert_eq!(args.len(), self.params.len(), "argument count");
        for (slot, v) in self.params.iter().zip(args) {
            self.st.env[*slot as usize] = *v as u32;
        }
        for (slot, v) in self.set_params.iter().zip(sets) {
            self.st.senv[*slot as usize] = *v;
        }
        if !self.set_params.is_empty() {
            // memo tables assume fixed set parameters
            for m in &mut self.st.memo {
                m.clear();
            }
        }
        ev(&self.prog, &mut self.st, self.root)
    }
}

pub fn evaluate(f: &Formula, s: &RelStructure, assignment: &Assignment) -> Result<bool> {
    let free = f.free_vars();
    let mut params = Vec::new();
    let mut set_params = Vec::new();
    let mut args = Vec::new();
    let mut sets = Vec::new();
    for v in &free {
        if let Some(e) = assignment.elems.get(v) {
            if *e >= s.len() {
                return Err(Error::Invalid(format!("`{v}` assigned to a non-element")));
            }
            params.push(v.as_str());
            args.push(*e);
        } else if let Some(set) = assignment.sets.get(v) {
            if s.len() > 63 {
                return Err(Error::SetQuantifierBudget { size: s.len(), cap: 63 });
            }
            set_params.push(v.as_str());
            sets.push(set.iter().fold(0u64, |m, e| m | 1 << e));
        } else {
            return Err(Error::UnboundVariable(v.clone()));
        }
    }
    let mut e = Evaluator::new(s, f, &params, &set_params)?;
    Ok(e.eval_with_sets(&args, &sets))
}

/// Adds relation `name` holding for the pairs `(x, y)` that satisfy `base`.
pub fn with_derived_relation(
    s: &RelStructure,
    name: &str,
    base: &Formula,
    vars: (&str, &str),
    closure: Closure,
) -> Result<RelStructure> {
    let n = s.len();
    let mut pairs = Vec::new();
    {
        let mut e = Evaluator::new(s, base, &[vars.0, vars.1], &[])?;
        for a in 0..n {
            for b in 0..n {
                if e.eval(&[a, b]) {
                    pairs.push((a, b));
                }
            }
        }
    }
    if closure == Closure::TransitiveSymmetric {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        let mut support = vec![false; n];
        for &(a, b) in &pairs {
            support[a] = true;
            support[b] = true;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in (0..n).filter(|&x| support[x]) {
            let r = find(&mut parent, x);
            classes.entry(r).or_default().push(x);
        }
        pairs = classes.values().flat_map(|c| c.iter().flat_map(move |&a| c.iter().map(move |&b| (a, b)))).collect();
    }
    let mut out = s.clone();
    out.add_relation(name, pairs);
    Ok(out)
}
