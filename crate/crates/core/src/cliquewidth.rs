//! Clique-width expressions, the residue-ordered construction for rational
//! length sets, and the folding family with unbounded clique-width.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::interval::{dyadic_below, left_order, Graph, IntervalRep};
use crate::numerics::{
    ceil_q, coord_compare, min_positive_in, parse_rational, qi, rational_gcd, Coord, LengthSet, LengthSymbol, Q,
};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CwNode {
    Vtx { label: u32, id: String },
    Relabel { from: u32, to: u32, child: NodeId },
    Join { i: u32, j: u32, child: NodeId },
    Union { left: NodeId, right: NodeId },
}

/// Expression stored as an arena; every child precedes its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CwExpression {
    nodes: Vec<CwNode>,
    root: NodeId,
}

impl CwExpression {
    pub fn builder() -> CwBuilder {
        CwBuilder { nodes: Vec::new() }
    }

    pub fn nodes(&self) -> &[CwNode] {
        &self.nodes
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// Largest label mentioned anywhere.
    pub fn width(&self) -> u32 {
        self.nodes
            .iter()
            .map(|n| match n {
                CwNode::Vtx { label, .. } => *label,
                CwNode::Relabel { from, to, .. } => *from.max(to),
                CwNode::Join { i, j, .. } => *i.max(j),
                CwNode::Union { .. } => 0,
            })
            .max()
            .unwrap_or(0)
    }

    /// Nodes reachable from the root, children before parents.
    fn reachable(&self) -> Vec<NodeId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            if seen[x] {
                continue;
            }
            seen[x] = true;
            match &self.nodes[x] {
                CwNode::Vtx { .. } => {}
                CwNode::Relabel { child, .. } | CwNode::Join { child, .. } => stack.push(*child),
                CwNode::Union { left, right } => stack.extend([*left, *right]),
            }
        }
        (0..self.nodes.len()).filter(|&x| seen[x]).collect()
    }

    pub fn to_text(&self) -> String {
        // parent text = prefix, children texts, ")"; built bottom-up without recursion
        let mut text: Vec<Option<String>> = vec![None; self.nodes.len()];
        for x in self.reachable() {
            let s = match &self.nodes[x] {
                CwNode::Vtx { label, id } => format!("(vtx {label} {id})"),
                CwNode::Relabel { from, to, child } => {
                    format!("(relabel {from} {to} {})", text[*child].take().expect("child printed"))
                }
                CwNode::Join { i, j, child } => format!("(join {i} {j} {})", text[*child].take().expect("child printed")),
                CwNode::Union { left, right } => {
                    let l = text[*left].take().expect("child printed");
                    let r = text[*right].take().expect("child printed");
                    format!("(union {l} {r})")
                }
            };
            text[x] = Some(s);
        }
        text[self.root].take().unwrap_or_default()
    }

    pub fn parse(src: &str) -> Result<CwExpression> {
        let bad = |m: String| Error::MalformedExpression(m);
        let toks = tokenize(src);
        let mut b = CwExpression::builder();
        // frames: (operator, numeric args, child nodes)
        let mut frames: Vec<(String, Vec<String>, Vec<NodeId>)> = Vec::new();
        let mut root = None;
        let mut i = 0;
        while i < toks.len() {
            match toks[i].as_str() {
                "(" => {
                    let op = toks.get(i + 1).ok_or_else(|| bad("expression ends after `(`".into()))?;
                    frames.push((op.clone(), Vec::new(), Vec::new()));
                    i += 2;
                }
                ")" => {
                    let (op, args, kids) = frames.pop().ok_or_else(|| bad("unbalanced `)`".into()))?;
                    let num = |s: &String| s.parse::<u32>().map_err(|_| bad(format!("`{s}` is not a label")));
                    let node = match (op.as_str(), args.len(), kids.len()) {
                        ("vtx", 2, 0) => b.vtx(num(&args[0])?, &args[1]),
                        ("relabel", 2, 1) => b.relabel(num(&args[0])?, num(&args[1])?, kids[0]),
                        ("join", 2, 1) => b.join(num(&args[0])?, num(&args[1])?, kids[0]),
                        ("union", 0, 2) => b.union(kids[0], kids[1]),
                        _ => return Err(bad(format!("bad `{op}` node"))),
                    };
                    match frames.last_mut() {
                        Some(f) => f.2.push(node),
                        None if root.is_none() => root = Some(node),
                        None => return Err(bad("more than one top-level expression".into())),
                    }
                    i += 1;
                }
                tok => {
                    let f = frames.last_mut().ok_or_else(|| bad(format!("unexpected `{tok}`")))?;
                    if !f.2.is_empty() {
                        return Err(bad(format!("argument `{tok}` after a subexpression")));
                    }
                    f.1.push(tok.to_string());
                    i += 1;
                }
            }
        }
        if !frames.is_empty() {
            return Err(bad("unbalanced `(`".into()));
        }
        let root = root.ok_or_else(|| bad("empty expression".into()))?;
        Ok(b.finish(root))
    }
}

fn tokenize(src: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in src.chars() {
        if ch == '(' || ch == ')' || ch.is_whitespace() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if !ch.is_whitespace() {
                out.push(ch.to_string());
            }
        } else {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

pub struct CwBuilder {
    nodes: Vec<CwNode>,
}

impl CwBuilder {
    fn push(&mut self, n: CwNode) -> NodeId {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    pub fn vtx(&mut self, label: u32, id: &str) -> NodeId {
        self.push(CwNode::Vtx { label, id: id.to_string() })
    }

    pub fn relabel(&mut self, from: u32, to: u32, child: NodeId) -> NodeId {
        self.push(CwNode::Relabel { from, to, child })
    }

    pub fn join(&mut self, i: u32, j: u32, child: NodeId) -> NodeId {
        self.push(CwNode::Join { i, j, child })
    }

    pub fn union(&mut self, left: NodeId, right: NodeId) -> NodeId {
        self.push(CwNode::Union { left, right })
    }

    pub fn finish(self, root: NodeId) -> CwExpression {
        CwExpression { nodes: self.nodes, root }
    }
}

/// Labeled graph produced by an expression.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: Vec<u32>,
}

type Buckets = BTreeMap<u32, Vec<usize>>;

fn take_smaller_into(a: &mut Vec<usize>, mut b: Vec<usize>) {
    if b.len() > a.len() {
        std::mem::swap(a, &mut b);
    }
    a.extend(b);
}

/// Evaluates bottom-up. Vertices appear in creation order.
pub fn eval_cw_expression(e: &CwExpression) -> Result<LabeledGraph> {
    let order = e.reachable();
    let mut ids: Vec<String> = Vec::new();
    let mut seen: HashSet<&str> = HashSet::new();
    let mut vertex_of = vec![usize::MAX; e.nodes.len()];
    for &x in &order {
        if let CwNode::Vtx { label, id } = &e.nodes[x] {
            if *label == 0 {
                return Err(Error::MalformedExpression(format!("label 0 on `{id}`")));
            }
            if !seen.insert(id) {
                return Err(Error::MalformedExpression(format!("vertex `{id}` created twice")));
            }
            vertex_of[x] = ids.len();
            ids.push(id.clone());
        }
    }
    for n in &e.nodes {
        let zero = match n {
            CwNode::Relabel { from, to, .. } => *from == 0 || *to == 0,
            CwNode::Join { i, j, .. } => *i == 0 || *j == 0,
            _ => false,
        };
        if zero {
            return Err(Error::MalformedExpression("label 0".into()));
        }
    }
    let mut result: Vec<Option<Buckets>> = vec![None; e.nodes.len()];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for &x in &order {
        let take = |r: &mut Vec<Option<Buckets>>, c: NodeId| {
            r[c].take().ok_or_else(|| Error::MalformedExpression(format!("node {c} is shared")))
        };
        let b = match &e.nodes[x] {
            CwNode::Vtx { label, .. } => BTreeMap::from([(*label, vec![vertex_of[x]])]),
            CwNode::Relabel { from, to, child } => {
                let mut b = take(&mut result, *child)?;
                if from != to {
                    if let Some(moved) = b.remove(from) {
                        take_smaller_into(b.entry(*to).or_default(), moved);
                    }
                }
                b
            }
            CwNode::Join { i, j, child } => {
                let b = take(&mut result, *child)?;
                if i == j {
                    if let Some(v) = b.get(i) {
                        for (k, &x) in v.iter().enumerate() {
                            edges.extend(v[k + 1..].iter().map(|&y| (x, y)));
                        }
                    }
                } else if let (Some(u), Some(v)) = (b.get(i), b.get(j)) {
                    for &x in u {
                        edges.extend(v.iter().map(|&y| (x, y)));
                    }
                }
                b
            }
            CwNode::Union { left, right } => {
                let mut l = take(&mut result, *left)?;
                for (lab, v) in take(&mut result, *right)? {
                    take_smaller_into(l.entry(lab).or_default(), v);
                }
                l
            }
        };
        result[x] = Some(b);
    }
    let root = result[e.root].take().expect("root evaluated");
    let mut labels = vec![0; ids.len()];
    for (lab, vs) in root {
        for v in vs {
            labels[v] = lab;
        }
    }
    Ok(LabeledGraph { graph: Graph::from_edges(ids, edges), labels })
}

/// Data of the residue-ordered construction, kept for diagnostics.
#[derive(Debug, Clone)]
pub struct CwConstruction {
    pub expression: CwExpression,
    /// the common measure `a` of the lengths
    pub a: Q,
    /// span used, after the nudge
    pub d: Q,
    /// `⌈d/a⌉ + 1`
    pub bound: u32,
    /// vertex indices in insertion order
    pub order: Vec<usize>,
}

/// Rational end points shifted so that residues mod `a` are distinct and nonzero.
///
/// Shifts grow with the left-end rank, so no intersection changes.
fn residue_perturbation(lefts: &[Q], rights: &[Q], order: &[usize], a: &Q) -> Vec<Q> {
    let n = lefts.len();
    let mut pts: Vec<&Q> = lefts.iter().chain(rights).collect();
    pts.sort();
    let mut rho: Option<Q> = None;
    let mut relax = |x: Q| {
        if x.is_positive() && rho.as_ref().map_or(true, |r| x < *r) {
            rho = Some(x);
        }
    };
    for w in pts.windows(2) {
        relax(w[1] - w[0]);
    }
    let mut res: Vec<Q> = lefts.iter().map(|l| l - (l / a).floor() * a).collect();
    res.sort();
    res.dedup();
    for w in res.windows(2) {
        relax(&w[1] - &w[0]);
    }
    for r in &res {
        relax(a - r);
    }
    relax(a.clone());
    let eta = rho.expect("a is positive") / qi(2 * n as i64 + 2);
    let mut shift = vec![Q::zero(); n];
    for (rank, &v) in order.iter().enumerate() {
        shift[v] = &eta * qi(rank as i64 + 1);
    }
    shift
}

/// Builds an expression for `build_graph(rep)` by inserting vertices in order of
/// increasing residue `ℓ mod a`.
///
/// Each earlier vertex is classified by `(⌈ℓ/a⌉, ⌈r/a⌉)`; a new vertex `v` meets an
/// earlier `u` exactly when `⌈ℓ(u)/a⌉ <= ⌈r(v)/a⌉` and `⌈r(u)/a⌉ > ⌈ℓ(v)/a⌉`.
/// Classes that no later vertex can tell apart share a label.
pub fn build_cw_expression(rep: &IntervalRep, tol: f64) -> Result<CwConstruction> {
    let ls = &rep.lengths;
    if let Some(s) = ls.symbols().iter().find(|s| !s.exact) {
        return Err(Error::IrrationalLength(s.name.clone()));
    }
    rep.validate(tol)?;
    let n = rep.len();
    let lens: Vec<Q> = ls.symbols().iter().map(|s| s.value.clone()).collect();
    let a = rational_gcd(&lens).expect("lengths are positive");
    let raw_l: Vec<Q> = rep.resolved_lefts().into_iter().map(|r| r.rat).collect();
    let (origin, mut d) = match &rep.span {
        Some(s) => (Q::zero(), ls.resolve(s).rat),
        None => {
            let lo = raw_l.iter().min().cloned().unwrap_or_else(Q::zero);
            let hi = (0..n).map(|i| &raw_l[i] + &lens[rep.vertices[i].len]).max().unwrap_or_else(Q::one);
            (lo.clone(), hi - lo)
        }
    };
    if (&d / &a).is_integer() {
        d += &a / qi(2);
    }
    let bound = (ceil_q(&(&d / &a)) + 1u32).to_u32().ok_or_else(|| Error::Invalid("label bound too large".into()))?;
    let lefts: Vec<Q> = raw_l.iter().map(|l| l - &origin).collect();
    let rights: Vec<Q> = (0..n).map(|i| &lefts[i] + &lens[rep.vertices[i].len]).collect();
    let lorder = left_order(rep, tol)?;
    let shift = residue_perturbation(&lefts, &rights, &lorder, &a);
    let lefts: Vec<Q> = (0..n).map(|i| &lefts[i] + &shift[i]).collect();
    let rights: Vec<Q> = (0..n).map(|i| &rights[i] + &shift[i]).collect();
    let residue = |x: &Q| x - (x / &a).floor() * &a;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| residue(&lefts[x]).cmp(&residue(&lefts[y])).then(x.cmp(&y)));
    let cls = |x: &Q| ceil_q(&(x / &a));
    let c: Vec<_> = lefts.iter().map(cls).collect();
    let e: Vec<_> = rights.iter().map(cls).collect();
    let cl = |x: usize| c[x].to_u32().unwrap_or(u32::MAX);

    // future[p] = set of later positions a vertex at class p would be adjacent to
    let meets = |u: usize, v: usize| c[u] <= e[v] && e[u] > c[v];
    let mut b = CwExpression::builder();
    // label -> representative vertex
    let mut reps: BTreeMap<u32, usize> = BTreeMap::new();
    let mut expr: Option<NodeId> = None;
    let free_label = |reps: &BTreeMap<u32, usize>, prefer: u32, avoid: u32| -> u32 {
        if prefer >= 1 && prefer < bound && !reps.contains_key(&prefer) {
            return prefer;
        }
        (1..).find(|l| *l != avoid && !reps.contains_key(l)).expect("unbounded labels")
    };
    for (pos, &v) in order.iter().enumerate() {
        let later = &order[pos + 1..];
        let same_future = |u: usize, w: usize| later.iter().all(|&f| meets(u, f) == meets(w, f));
        let id = &rep.vertices[v].id;
        let mut node = match expr {
            None => {
                let lab = free_label(&reps, cl(v), bound);
                reps.insert(lab, v);
                expr = Some(b.vtx(lab, id));
                continue;
            }
            Some(prev) => {
                let temp = if reps.contains_key(&bound) { free_label(&reps, 0, 0) } else { bound };
                let created = b.vtx(temp, id);
                let mut node = b.union(prev, created);
                for (&lab, &u) in &reps {
                    if meets(u, v) {
                        node = b.join(temp, lab, node);
                    }
                }
                let target = reps.iter().find(|(_, &u)| same_future(u, v)).map(|(&l, _)| l);
                let lab = target.unwrap_or_else(|| free_label(&reps, cl(v), temp));
                reps.entry(lab).or_insert(v);
                b.relabel(temp, lab, node)
            }
        };
        // merge classes that the remaining vertices cannot distinguish
        let labs: Vec<u32> = reps.keys().copied().collect();
        for (k, &l1) in labs.iter().enumerate() {
            if !reps.contains_key(&l1) {
                continue;
            }
            for &l2 in &labs[k + 1..] {
                if let (Some(&u1), Some(&u2)) = (reps.get(&l1), reps.get(&l2)) {
                    if same_future(u1, u2) {
                        node = b.relabel(l2, l1, node);
                        reps.remove(&l2);
                    }
                }
            }
        }
        expr = Some(node);
    }
    let root = match expr {
        Some(r) => r,
        None => return Err(Error::TooSmall("representation has no vertices".into())),
    };
    Ok(CwConstruction { expression: b.finish(root), a, d, bound, order })
}

/// The join rule read literally: labels `⌈ℓ/a⌉` and joins to labels
/// `⌈ℓ(v)/a⌉..=⌈r(v)/a⌉`, in the same insertion order as [`build_cw_expression`].
pub fn build_cw_expression_literal(rep: &IntervalRep, tol: f64) -> Result<CwExpression> {
    let con = build_cw_expression(rep, tol)?;
    let lens: Vec<Q> = rep.lengths.symbols().iter().map(|s| s.value.clone()).collect();
    let a = &con.a;
    let n = rep.len();
    let raw_l: Vec<Q> = rep.resolved_lefts().into_iter().map(|r| r.rat).collect();
    let origin = if rep.span.is_some() { Q::zero() } else { raw_l.iter().min().cloned().unwrap_or_else(Q::zero) };
    let lefts: Vec<Q> = raw_l.iter().map(|l| l - &origin).collect();
    let rights: Vec<Q> = (0..n).map(|i| &lefts[i] + &lens[rep.vertices[i].len]).collect();
    let shift = residue_perturbation(&lefts, &rights, &left_order(rep, tol)?, a);
    let lab = |x: &Q| ceil_q(&(x / a)).to_u32().unwrap_or(u32::MAX);
    let k = con.bound;
    let mut b = CwExpression::builder();
    let mut expr: Option<NodeId> = None;
    let mut present = BTreeSet::new();
    for &v in &con.order {
        let (l, r) = (lab(&(&lefts[v] + &shift[v])), lab(&(&rights[v] + &shift[v])));
        let id = &rep.vertices[v].id;
        expr = Some(match expr {
            None => b.vtx(l, id),
            Some(prev) => {
                let created = b.vtx(k, id);
                let mut node = b.union(prev, created);
                for &j in present.range(l..=r) {
                    node = b.join(k, j, node);
                }
                b.relabel(k, l, node)
            }
        });
        present.insert(l);
    }
    Ok(b.finish(expr.ok_or_else(|| Error::TooSmall("representation has no vertices".into()))?))
}

#[derive(Debug, Clone)]
pub struct FoldingSequence {
    pub q: LengthSymbol,
    /// `q + 3`
    pub d: Coord,
    /// (value, is a q-element)
    pub terms: Vec<(Coord, bool)>,
}

/// Index of `q` in the length set of a [`hard_family`] representation.
pub const Q_SYMBOL: usize = 1;

/// Folding sequence of length `n` for `L = {1, q}`, `d = q + 3`.
pub fn folding_sequence(q_value: &str, n: usize, tol: f64) -> Result<(LengthSet, FoldingSequence)> {
    let (v, decimal) =
        parse_rational(q_value).ok_or_else(|| Error::Invalid(format!("`{q_value}` is not a number")))?;
    if v <= Q::one() {
        return Err(Error::Invalid(format!("q = {q_value} must exceed 1")));
    }
    if n < 2 {
        return Err(Error::TooSmall(format!("sequence length {n}, need at least 2")));
    }
    let sym = if decimal { LengthSymbol::approximate("q", v) } else { LengthSymbol::exact("q", v) };
    let ls = LengthSet::new(vec![LengthSymbol::exact("u", qi(1)), sym.clone()])?;
    let qc = Coord::symbol(Q_SYMBOL);
    let one = Coord::int(1);
    let d = &qc + &Coord::int(3);
    let limit = &d - &Coord::int(2);
    let mut terms = vec![(Coord::zero(), false), (one.clone(), false)];
    while terms.len() < n {
        let (p2, p1) = (&terms[terms.len() - 2].0, &terms[terms.len() - 1].0);
        let diff = p2 - p1;
        let next = if (diff == one || diff == -&one) && coord_compare(&ls, p1, &limit, tol)? == Ordering::Less {
            (p1 + &one, false)
        } else if diff == qc {
            (p1 - &one, false)
        } else {
            (p1 - &qc, true)
        };
        terms.push(next);
    }
    Ok((ls, FoldingSequence { q: sym, d, terms }))
}

/// Union of the level sets `U_1 + a_i` or `U_q + a_i`: `n²` intervals with span `q + 3`.
///
/// Vertex `w{i}_{j}` is level `j` (from 0) of the `i`-th set (from 1).
pub fn hard_family(q_value: &str, n: usize, tol: f64) -> Result<(IntervalRep, FoldingSequence)> {
    let (ls, seq) = folding_sequence(q_value, n, tol)?;
    let budget = crate::numerics::DEFAULT_LK_BUDGET;
    let m = u32::try_from(n).map_err(|_| Error::TooSmall("n too large".into()))?;
    let smallest = ls.resolve(&min_positive_in(&ls, m, tol, budget)?);
    let smallest = match smallest.exact_sign() {
        Some(_) => smallest.rat,
        None => dyadic_below(smallest.approx - tol)?,
    };
    if smallest >= qi(3) {
        return Err(Error::Invalid("no element of L^(n) below d - q".into()));
    }
    let delta = smallest / qi(2 * n as i64);
    let mut rep = IntervalRep::new(ls);
    rep.span = Some(seq.d.clone());
    for (i, (a, is_q)) in seq.terms.iter().enumerate() {
        for level in 0..n {
            let left = a + &Coord::constant(&delta * qi(level as i64));
            rep.push(format!("w{}_{}", i + 1, level), left, if *is_q { Q_SYMBOL } else { 0 });
        }
    }
    rep.validate(tol)?;
    Ok((rep, seq))
}

/// Number of distinct neighbourhoods outside `part` among the vertices of `part`.
pub fn cut_diversity(g: &Graph, part: &[usize]) -> usize {
    let inside: HashSet<usize> = part.iter().copied().collect();
    let sets: HashSet<Vec<usize>> = inside
        .iter()
        .map(|&v| {
            let mut nb: Vec<usize> = g.neighbors(v).iter().copied().filter(|u| !inside.contains(u)).collect();
            nb.sort_unstable();
            nb
        })
        .collect();
    sets.len()
}

/// First half of the vertices by left end point.
pub fn prefix_cut(rep: &IntervalRep, tol: f64) -> Result<Vec<usize>> {
    let order = left_order(rep, tol)?;
    Ok(order[..order.len() / 2].to_vec())
}

/// `⌈d/a⌉ + 1` for a rational length set and span, with the nudge applied.
pub fn label_bound(lengths: &[Q], d: &Q) -> Option<u32> {
    let a = rational_gcd(lengths)?;
    let mut d = d.clone();
    if (&d / &a).is_integer() {
        d += &a / qi(2);
    }
    (ceil_q(&(&d / &a)) + 1u32).to_u32()
}

pub fn describe(c: &CwConstruction) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "a = {}", crate::numerics::fmt_rational(&c.a));
    let _ = writeln!(s, "d = {}", crate::numerics::fmt_rational(&c.d));
    let _ = writeln!(s, "bound = {}", c.bound);
    let _ = write!(s, "width = {}", c.expression.width());
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::build_graph;
    use crate::numerics::{q, DEFAULT_TOL};

    #[test]
    fn eval_examples() {
        let e = CwExpression::parse("(vtx 1 a)").unwrap();
        let g = eval_cw_expression(&e).unwrap();
        assert_eq!(g.graph.n(), 1);
        assert_eq!(g.graph.edge_count(), 0);
        let e = CwExpression::parse("(join 1 2 (union (vtx 1 a) (relabel 1 2 (vtx 1 b))))").unwrap();
        let g = eval_cw_expression(&e).unwrap();
        assert_eq!(g.graph.edge_ids(), BTreeSet::from([("a".to_string(), "b".to_string())]));
        assert_eq!(g.labels, vec![1, 2]);
    }

    #[test]
    fn join_same_label_makes_a_clique() {
        let e = CwExpression::parse("(join 1 1 (union (vtx 1 a) (union (vtx 1 b) (vtx 1 c))))").unwrap();
        assert_eq!(eval_cw_expression(&e).unwrap().graph.edge_count(), 3);
    }

    #[test]
    fn malformed() {
        let dup = CwExpression::parse("(union (vtx 1 a) (vtx 2 a))").unwrap();
        assert!(matches!(eval_cw_expression(&dup), Err(Error::MalformedExpression(_))));
        let zero = CwExpression::parse("(vtx 0 a)").unwrap();
        assert!(matches!(eval_cw_expression(&zero), Err(Error::MalformedExpression(_))));
        for bad in ["(vtx 1)", "(union (vtx 1 a))", "(vtx 1 a", "(vtx 1 a))", "(frob 1 a)", "(vtx x a)", ""] {
            assert!(CwExpression::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn text_round_trip() {
        let src = "(union (relabel 2 1 (join 1 2 (union (vtx 1 a) (vtx 2 b)))) (vtx 3 c))";
        let e = CwExpression::parse(src).unwrap();
        assert_eq!(e.to_text(), src);
        assert_eq!(CwExpression::parse(&e.to_text()).unwrap(), e);
    }

    #[test]
    fn bounds() {
        assert_eq!(label_bound(&[qi(1)], &q(5, 2)), Some(4));
        assert_eq!(label_bound(&[q(1, 2), q(3, 4)], &q(21, 10)), Some(10));
        // multiple of a: nudged by a/2
        assert_eq!(label_bound(&[qi(1)], &qi(3)), Some(5));
    }

    #[test]
    fn single_vertex() {
        let mut rep = IntervalRep::new(LengthSet::unit());
        rep.push("v", Coord::constant(q(3, 2)), 0);
        rep.span = Some(Coord::int(4));
        let c = build_cw_expression(&rep, DEFAULT_TOL).unwrap();
        assert_eq!(c.expression.to_text(), "(vtx 2 v)");
    }

    #[test]
    fn overhang_from_the_left() {
        // the longer interval starts in an earlier unit cell and covers the shorter one
        let ls = LengthSet::exact(&[("u", qi(1)), ("t", qi(3))]);
        let mut rep = IntervalRep::new(ls);
        rep.push("long", Coord::constant(q(1, 10)), 1);
        rep.push("short", Coord::constant(q(3, 2)), 0);
        rep.span = Some(Coord::constant(q(9, 2)));
        let g = build_graph(&rep, DEFAULT_TOL).unwrap();
        assert_eq!(g.edge_count(), 1);
        let c = build_cw_expression(&rep, DEFAULT_TOL).unwrap();
        assert!(eval_cw_expression(&c.expression).unwrap().graph.same_graph(&g));
        let lit = build_cw_expression_literal(&rep, DEFAULT_TOL).unwrap();
        assert_eq!(eval_cw_expression(&lit).unwrap().graph.edge_count(), 0);
    }

    #[test]
    fn irrational_lengths_rejected() {
        let ls = LengthSet::new(vec![LengthSymbol::approximate("q", q(141, 100))]).unwrap();
        let mut rep = IntervalRep::new(ls);
        rep.push("v", Coord::zero(), 0);
        assert!(matches!(build_cw_expression(&rep, DEFAULT_TOL), Err(Error::IrrationalLength(_))));
    }

    #[test]
    fn cut_diversity_examples() {
        let k4 = Graph::from_edges((0..4).map(|i| i.to_string()).collect(), [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(cut_diversity(&k4, &[]), 0);
        assert_eq!(cut_diversity(&k4, &[0, 3]), 1);
    }

    #[test]
    fn folding_rules() {
        let (_, seq) = folding_sequence("1.41421356237309", 9, DEFAULT_TOL).unwrap();
        let qc = Coord::symbol(Q_SYMBOL);
        let c = |k: i64, m: i64| &Coord::int(k) + &qc.scale(&qi(m));
        let want = [(c(0, 0), false), (c(1, 0), false), (c(2, 0), false), (c(3, 0), false), (c(3, -1), true)];
        assert_eq!(&seq.terms[..5], &want);
        assert_eq!(seq.terms[5], (c(2, -1), false));
        assert_eq!(seq.terms[6], (c(3, -1), false));
        assert_eq!(seq.terms[7], (c(4, -1), false));
        assert_eq!(seq.terms[8], (c(4, -2), true));
    }
}

