//! Rank-d types, d-EF-trees and EF-homomorphisms.
//!
//! Types are hash-consed in a [`TypeInterner`]; two structures typed with the
//! same interner have equal rank-d types iff their type ids are equal. Atomic
//! types of a tuple are built one element at a time: the atomic type of `t·x`
//! is keyed by the atomic type of `t` plus the facts that mention `x`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::logic::{Relation, RelStructure};

pub const DEFAULT_TYPE_BUDGET: u64 = 50_000_000;
pub const DEFAULT_TREE_BUDGET: u64 = 1_000_000;

const FACT_BITS: usize = 256;
const NO_EQ: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeId(u32);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct ExtKey {
    parent: u32,
    label_class: u32,
    eq: u32,
    facts: [u128; 2],
}

#[derive(Debug, Clone)]
enum Node {
    Empty,
    Ext(ExtKey),
    Set(u32, Vec<u32>),
}

/// Labeled substructure induced by a tuple; element `i` of the tuple is position `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomicType {
    pub size: usize,
    /// `eq[i]` is the first position holding the same element as position `i`
    pub eq: Vec<usize>,
    pub labels: Vec<(String, usize)>,
    pub rels: Vec<(String, usize, usize)>,
}

/// Canonical rank type: an atomic type at rank 0, otherwise the set of types of one-element extensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EfType {
    Atomic(AtomicType),
    Set { rank: u32, children: Vec<Arc<EfType>> },
}

impl fmt::Display for EfType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EfType::Atomic(a) => {
                write!(f, "[{}", a.size)?;
                for (i, e) in a.eq.iter().enumerate() {
                    if *e != i {
                        write!(f, " {i}={e}")?;
                    }
                }
                for (l, i) in &a.labels {
                    write!(f, " {l}({i})")?;
                }
                for (r, i, j) in &a.rels {
                    write!(f, " {r}({i},{j})")?;
                }
                write!(f, "]")
            }
            EfType::Set { rank, children } => {
                write!(f, "{{{rank}:")?;
                for (i, c) in children.iter().enumerate() {
                    write!(f, "{}{c}", if i == 0 { "" } else { "," })?;
                }
                write!(f, "}}")
            }
        }
    }
}

#[derive(Debug, Default)]
pub struct TypeInterner {
    names: Vec<String>,
    name_ids: HashMap<String, u32>,
    rel_names: Vec<u32>,
    rel_ids: HashMap<u32, u32>,
    label_classes: HashMap<Vec<u32>, u32>,
    class_list: Vec<Vec<u32>>,
    exts: HashMap<ExtKey, u32>,
    sets: HashMap<(u32, Vec<u32>), u32>,
    nodes: Vec<Node>,
    sizes: Vec<u32>,
}

/// A structure with its names resolved against one interner.
pub struct Prepared<'s> {
    n: usize,
    rels: Vec<(u32, &'s Relation)>,
    label_class: Vec<u32>,
}

impl TypeInterner {
    pub fn new() -> Self {
        let mut t = TypeInterner::default();
        t.nodes.push(Node::Empty);
        t.sizes.push(0);
        t
    }

    fn name(&mut self, s: &str) -> u32 {
        if let Some(&i) = self.name_ids.get(s) {
            return i;
        }
        self.names.push(s.to_string());
        let i = self.names.len() as u32 - 1;
        self.name_ids.insert(s.to_string(), i);
        i
    }

    pub fn prepare<'s>(&mut self, s: &'s RelStructure) -> Prepared<'s> {
        let mut rels = Vec::new();
        for name in s.relation_names() {
            let nid = self.name(name);
            let next = self.rel_names.len() as u32;
            let gid = *self.rel_ids.entry(nid).or_insert(next);
            if gid == next {
                self.rel_names.push(nid);
            }
            rels.push((gid, s.relation(name).expect("listed relation")));
        }
        let mut per_elem: Vec<Vec<u32>> = vec![Vec::new(); s.len()];
        let label_names: Vec<String> = s.label_names().cloned().collect();
        for name in &label_names {
            let nid = self.name(name);
            for (e, on) in s.label(name).expect("listed label").iter().enumerate() {
                if *on {
                    per_elem[e].push(nid);
                }
            }
        }
        let label_class = per_elem
            .into_iter()
            .map(|mut v| {
                v.sort_unstable();
                let next = self.class_list.len() as u32;
                let id = *self.label_classes.entry(v.clone()).or_insert(next);
                if id == next {
                    self.class_list.push(v);
                }
                id
            })
            .collect();
        Prepared { n: s.len(), rels, label_class }
    }

    pub fn empty_tuple(&self) -> TypeId {
        TypeId(0)
    }

    /// Atomic type of `tuple·x` given the atomic type of `tuple`.
    fn extend(&mut self, p: &Prepared, atom: u32, tuple: &[u32], x: u32) -> Result<u32> {
        let k = tuple.len();
        let eq = tuple.iter().position(|&t| t == x).map_or(NO_EQ, |i| i as u32);
        let mut facts = [0u128; 2];
        let stride = 2 * k + 1;
        for &(g, rel) in &p.rels {
            let base = g as usize * stride;
            if base + stride > FACT_BITS {
                return Err(Error::Invalid(format!("signature too wide for tuples of length {}", k + 1)));
            }
            let mut set = |bit: usize| facts[bit / 128] |= 1u128 << (bit % 128);
            for (i, &t) in tuple.iter().enumerate() {
                if rel.holds(t as usize, x as usize) {
                    set(base + 2 * i);
                }
                if rel.holds(x as usize, t as usize) {
                    set(base + 2 * i + 1);
                }
            }
            if rel.holds(x as usize, x as usize) {
                set(base + 2 * k);
            }
        }
        let key = ExtKey { parent: atom, label_class: p.label_class[x as usize], eq, facts };
        if let Some(&id) = self.exts.get(&key) {
            return Ok(id);
        }
        let id = self.nodes.len() as u32;
        self.exts.insert(key.clone(), id);
        self.nodes.push(Node::Ext(key));
        self.sizes.push(k as u32 + 1);
        Ok(id)
    }

    fn set(&mut self, rank: u32, mut children: Vec<u32>) -> u32 {
        children.sort_unstable();
        children.dedup();
        let key = (rank, children);
        if let Some(&id) = self.sets.get(&key) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(Node::Set(key.0, key.1.clone()));
        self.sizes.push(0);
        self.sets.insert(key, id);
        id
    }

    /// Atomic type id of a tuple.
    pub fn atomic_of(&mut self, p: &Prepared, tuple: &[usize]) -> Result<TypeId> {
        let mut atom = 0;
        let mut prefix = Vec::with_capacity(tuple.len());
        for &x in tuple {
            atom = self.extend(p, atom, &prefix, x as u32)?;
            prefix.push(x as u32);
        }
        Ok(TypeId(atom))
    }

    fn rank_rec(
        &mut self,
        p: &Prepared,
        tuple: &mut Vec<u32>,
        atom: u32,
        r: u32,
        count: &mut u64,
        budget: u64,
    ) -> Result<u32> {
        if r == 0 {
            return Ok(atom);
        }
        let mut children = Vec::with_capacity(p.n);
        for x in 0..p.n as u32 {
            *count += 1;
            if *count > budget {
                return Err(Error::Budget { what: "rank type", needed: *count as u128, limit: budget as u128 });
            }
            let a = self.extend(p, atom, tuple, x)?;
            tuple.push(x);
            let c = self.rank_rec(p, tuple, a, r - 1, count, budget);
            tuple.pop();
            children.push(c?);
        }
        Ok(self.set(r, children))
    }

    pub fn rank_type_prepared(&mut self, p: &Prepared, tuple: &[usize], d: u32, budget: u64) -> Result<TypeId> {
        if let Some(&bad) = tuple.iter().find(|&&x| x >= p.n) {
            return Err(Error::Invalid(format!("tuple element {bad} outside the domain")));
        }
        let atom = self.atomic_of(p, tuple)?.0;
        let mut t: Vec<u32> = tuple.iter().map(|&x| x as u32).collect();
        let mut count = 0;
        self.rank_rec(p, &mut t, atom, d, &mut count, budget).map(TypeId)
    }

    pub fn rank_type(&mut self, s: &RelStructure, tuple: &[usize], d: u32) -> Result<TypeId> {
        let p = self.prepare(s);
        self.rank_type_prepared(&p, tuple, d, DEFAULT_TYPE_BUDGET)
    }

    pub fn atomic(&self, id: TypeId) -> Option<AtomicType> {
        let mut chain = Vec::new();
        let mut cur = id.0;
        loop {
            match &self.nodes[cur as usize] {
                Node::Empty => break,
                Node::Ext(k) => {
                    chain.push(k);
                    cur = k.parent;
                }
                Node::Set(..) => return None,
            }
        }
        chain.reverse();
        let size = chain.len();
        let mut out = AtomicType { size, eq: Vec::new(), labels: Vec::new(), rels: Vec::new() };
        for (pos, k) in chain.iter().enumerate() {
            out.eq.push(if k.eq == NO_EQ { pos } else { k.eq as usize });
            for &l in &self.class_list[k.label_class as usize] {
                out.labels.push((self.names[l as usize].clone(), pos));
            }
            let stride = 2 * pos + 1;
            for (g, &nid) in self.rel_names.iter().enumerate() {
                let base = g * stride;
                let bit = |b: usize| b < FACT_BITS && k.facts[b / 128] >> (b % 128) & 1 == 1;
                let name = &self.names[nid as usize];
                for i in 0..pos {
                    if bit(base + 2 * i) {
                        out.rels.push((name.clone(), i, pos));
                    }
                    if bit(base + 2 * i + 1) {
                        out.rels.push((name.clone(), pos, i));
                    }
                }
                if bit(base + 2 * pos) {
                    out.rels.push((name.clone(), pos, pos));
                }
            }
        }
        out.labels.sort();
        out.rels.sort();
        Some(out)
    }

    pub fn export(&self, id: TypeId) -> Arc<EfType> {
        let mut cache = HashMap::new();
        self.export_rec(id.0, &mut cache)
    }

    fn export_rec(&self, id: u32, cache: &mut HashMap<u32, Arc<EfType>>) -> Arc<EfType> {
        if let Some(t) = cache.get(&id) {
            return t.clone();
        }
        let t = match &self.nodes[id as usize] {
            Node::Set(rank, children) => {
                let mut cs: Vec<Arc<EfType>> = children.iter().map(|&c| self.export_rec(c, cache)).collect();
                cs.sort();
                cs.dedup();
                Arc::new(EfType::Set { rank: *rank, children: cs })
            }
            _ => Arc::new(EfType::Atomic(self.atomic(TypeId(id)).expect("atomic node"))),
        };
        cache.insert(id, t.clone());
        t
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Canonical rank-d type of `tuple` in `s`.
pub fn rank_type(s: &RelStructure, tuple: &[usize], d: u32) -> Result<Arc<EfType>> {
    let mut t = TypeInterner::new();
    let id = t.rank_type(s, tuple, d)?;
    Ok(t.export(id))
}

pub fn equivalent_rank_d(s1: &RelStructure, s2: &RelStructure, d: u32) -> Result<bool> {
    let mut t = TypeInterner::new();
    Ok(t.rank_type(s1, &[], d)? == t.rank_type(s2, &[], d)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfNode {
    pub parent: Option<usize>,
    /// element on the edge from the parent
    pub element: Option<usize>,
    pub children: Vec<usize>,
    /// atomic type of the element sequence on the root path
    pub atom: TypeId,
}

/// d-EF-tree; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfTree {
    pub depth: u32,
    pub nodes: Vec<EfNode>,
}

impl EfTree {
    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].children.is_empty() && self.node_depth(i) == self.depth)
    }

    pub fn node_depth(&self, mut i: usize) -> u32 {
        let mut d = 0;
        while let Some(p) = self.nodes[i].parent {
            d += 1;
            i = p;
        }
        d
    }

    /// Element sequence on the path from the root to `i`.
    pub fn path(&self, mut i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while let Some(e) = self.nodes[i].element {
            out.push(e);
            i = self.nodes[i].parent.expect("non-root has parent");
        }
        out.reverse();
        out
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

pub fn build_ef_tree(s: &RelStructure, d: u32, types: &mut TypeInterner, budget: u64) -> Result<EfTree> {
    let n = s.len() as u128;
    let leaves = n.checked_pow(d).unwrap_or(u128::MAX);
    if leaves > budget as u128 {
        return Err(Error::Budget { what: "EF-tree leaves", needed: leaves, limit: budget as u128 });
    }
    let p = types.prepare(s);
    let mut nodes = vec![EfNode { parent: None, element: None, children: Vec::new(), atom: types.empty_tuple() }];
    let mut frontier = vec![(0usize, Vec::<u32>::new())];
    for _ in 0..d {
        let mut next = Vec::new();
        for (id, tuple) in frontier {
            for x in 0..s.len() as u32 {
                let atom = types.extend(&p, nodes[id].atom.0, &tuple, x)?;
                let child = nodes.len();
                nodes.push(EfNode { parent: Some(id), element: Some(x as usize), children: Vec::new(), atom: TypeId(atom) });
                nodes[id].children.push(child);
                let mut t = tuple.clone();
                t.push(x);
                next.push((child, t));
            }
        }
        frontier = next;
    }
    Ok(EfTree { depth: d, nodes })
}

/// Deletes duplicate siblings bottom-up: leaves with the same labeled structure,
/// then subtrees that are isomorphic after their own minimization.
/// Returns the tree and, per kept node, its index in the input.
pub fn minimize_ef_tree(t: &EfTree) -> (EfTree, Vec<usize>) {
    let mut canon: Vec<u32> = vec![0; t.nodes.len()];
    let mut keep_children: Vec<Vec<usize>> = vec![Vec::new(); t.nodes.len()];
    let mut ids: HashMap<(Option<TypeId>, Vec<u32>), u32> = HashMap::new();
    // children always have larger indices than their parent
    for i in (0..t.nodes.len()).rev() {
        let node = &t.nodes[i];
        let key = if node.children.is_empty() {
            (Some(node.atom), Vec::new())
        } else {
            let mut seen = Vec::new();
            for &c in &node.children {
                if !seen.contains(&canon[c]) {
                    seen.push(canon[c]);
                    keep_children[i].push(c);
                }
            }
            seen.sort_unstable();
            (None, seen)
        };
        let next = ids.len() as u32;
        canon[i] = *ids.entry(key).or_insert(next);
    }
    let mut nodes = Vec::new();
    let mut origin = Vec::new();
    let mut stack = vec![(0usize, None::<usize>)];
    while let Some((old, parent)) = stack.pop() {
        let id = nodes.len();
        let n = &t.nodes[old];
        nodes.push(EfNode { parent, element: n.element, children: Vec::new(), atom: n.atom });
        origin.push(old);
        if let Some(p) = parent {
            let pn: &mut EfNode = &mut nodes[p];
            pn.children.push(id);
        }
        for &c in keep_children[old].iter().rev() {
            stack.push((c, Some(id)));
        }
    }
    // restore breadth order so that children follow parents and sibling order is kept
    let tree = EfTree { depth: t.depth, nodes };
    (reindex_bfs(&tree), bfs_origin(&tree, &origin))
}

fn bfs_order(t: &EfTree) -> Vec<usize> {
    let mut order = vec![0];
    let mut i = 0;
    while i < order.len() {
        order.extend(t.nodes[order[i]].children.iter().copied());
        i += 1;
    }
    order
}

fn reindex_bfs(t: &EfTree) -> EfTree {
    let order = bfs_order(t);
    let mut pos = vec![0; t.nodes.len()];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let nodes = order
        .iter()
        .map(|&old| {
            let n = &t.nodes[old];
            EfNode {
                parent: n.parent.map(|p| pos[p]),
                element: n.element,
                children: n.children.iter().map(|&c| pos[c]).collect(),
                atom: n.atom,
            }
        })
        .collect();
    EfTree { depth: t.depth, nodes }
}

fn bfs_origin(t: &EfTree, origin: &[usize]) -> Vec<usize> {
    bfs_order(t).into_iter().map(|old| origin[old]).collect()
}

/// Checks the three EF-homomorphism conditions for a node map `f` from `a` to `b`.
pub fn is_ef_homomorphism(a: &EfTree, b: &EfTree, f: &[usize]) -> bool {
    if f.len() != a.nodes.len() || a.depth != b.depth || f.iter().any(|&x| x >= b.nodes.len()) {
        return false;
    }
    for (u, node) in a.nodes.iter().enumerate() {
        for &v in &node.children {
            if b.nodes[f[v]].parent != Some(f[u]) {
                return false;
            }
        }
        if node.children.is_empty() {
            let img = &b.nodes[f[u]];
            if !img.children.is_empty() || img.atom != node.atom {
                return false;
            }
        }
    }
    true
}

/// Searches for an EF-homomorphism from `a` to `b`, mapping root to root.
pub fn find_ef_homomorphism(a: &EfTree, b: &EfTree) -> Option<Vec<usize>> {
    if a.depth != b.depth {
        return None;
    }
    let mut memo: HashMap<(usize, usize), bool> = HashMap::new();
    fn fits(a: &EfTree, b: &EfTree, u: usize, v: usize, memo: &mut HashMap<(usize, usize), bool>) -> bool {
        if let Some(&r) = memo.get(&(u, v)) {
            return r;
        }
        let (nu, nv) = (&a.nodes[u], &b.nodes[v]);
        let r = if nu.children.is_empty() {
            nv.children.is_empty() && nu.atom == nv.atom
        } else {
            nu.children.iter().all(|&c| nv.children.iter().any(|&c2| fits(a, b, c, c2, memo)))
        };
        memo.insert((u, v), r);
        r
    }
    if !fits(a, b, 0, 0, &mut memo) {
        return None;
    }
    let mut f = vec![usize::MAX; a.nodes.len()];
    f[0] = 0;
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        for &c in &a.nodes[u].children {
            let img = b.nodes[f[u]]
                .children
                .iter()
                .copied()
                .find(|&c2| fits(a, b, c, c2, &mut memo))
                .expect("fits guarantees a child image");
            f[c] = img;
            stack.push(c);
        }
    }
    Some(f)
}

/// EF-equivalence of the minimized d-EF-trees of two structures.
pub fn trees_ef_equivalent(s1: &RelStructure, s2: &RelStructure, d: u32) -> Result<bool> {
    let mut types = TypeInterner::new();
    let t1 = minimize_ef_tree(&build_ef_tree(s1, d, &mut types, DEFAULT_TREE_BUDGET)?).0;
    let t2 = minimize_ef_tree(&build_ef_tree(s2, d, &mut types, DEFAULT_TREE_BUDGET)?).0;
    let ok = |a: &EfTree, b: &EfTree| find_ef_homomorphism(a, b).is_some_and(|f| is_ef_homomorphism(a, b, &f));
    Ok(ok(&t1, &t2) && ok(&t2, &t1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Graph;

    fn clique(n: usize) -> RelStructure {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        RelStructure::from_graph(&Graph::from_edges((0..n).map(|i| i.to_string()).collect(), edges))
    }

    #[test]
    fn rank_zero_empty_tuple() {
        let t = rank_type(&clique(3), &[], 0).unwrap();
        assert_eq!(*t, EfType::Atomic(AtomicType { size: 0, eq: vec![], labels: vec![], rels: vec![] }));
        assert_eq!(t, rank_type(&RelStructure::with_size(0), &[], 0).unwrap());
    }

    #[test]
    fn cliques() {
        assert!(equivalent_rank_d(&clique(2), &clique(3), 2).unwrap());
        assert!(!equivalent_rank_d(&clique(2), &clique(3), 3).unwrap());
        assert!(!equivalent_rank_d(&clique(1), &clique(2), 2).unwrap());
    }

    #[test]
    fn atomic_decoding() {
        let mut s = RelStructure::with_size(2);
        s.add_relation("r", [(0, 1), (1, 1)]);
        s.add_label("red", [1]);
        let mut t = TypeInterner::new();
        let p = t.prepare(&s);
        let id = t.atomic_of(&p, &[1, 0, 1]).unwrap();
        let a = t.atomic(id).unwrap();
        assert_eq!(a.eq, vec![0, 1, 0]);
        assert_eq!(a.labels, vec![("red".into(), 0), ("red".into(), 2)]);
        assert_eq!(
            a.rels,
            vec![("r".into(), 0, 0), ("r".into(), 0, 2), ("r".into(), 1, 0), ("r".into(), 1, 2), ("r".into(), 2, 0), ("r".into(), 2, 2)]
        );
    }

    #[test]
    fn tree_sizes() {
        let mut t = TypeInterner::new();
        let one = build_ef_tree(&RelStructure::with_size(1), 1, &mut t, 100).unwrap();
        assert_eq!(one.nodes.len(), 2);
        let four = build_ef_tree(&RelStructure::with_size(4), 3, &mut t, 100).unwrap();
        assert_eq!(four.leaves().count(), 64);
        assert!(matches!(build_ef_tree(&RelStructure::with_size(5), 3, &mut t, 100), Err(Error::Budget { .. })));
    }

    #[test]
    fn minimization() {
        let mut t = TypeInterner::new();
        let tree = build_ef_tree(&RelStructure::with_size(3), 1, &mut t, 100).unwrap();
        assert_eq!(minimize_ef_tree(&tree).0.leaves().count(), 1);
        let k3 = build_ef_tree(&clique(3), 2, &mut t, 100).unwrap();
        let (m, origin) = minimize_ef_tree(&k3);
        assert_eq!(m.nodes[0].children.len(), 1);
        assert_eq!(m.nodes[m.nodes[0].children[0]].children.len(), 2);
        // the kept nodes embed back into the full tree
        assert!(is_ef_homomorphism(&m, &k3, &origin));
        let back = find_ef_homomorphism(&k3, &m).unwrap();
        assert!(is_ef_homomorphism(&k3, &m, &back));
    }
}
