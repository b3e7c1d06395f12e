//! Graph interpretations and the two gadget constructions that turn an
//! arbitrary graph into an interval graph from which it can be read back.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::{build_graph, write_rep, Graph, IntervalRep};
use crate::logic::{
    and, deg_eq, dist_eq, dist_le, edge, eq, exists, exists_unique, forall, iff, implies, neq, not, or, rel,
    with_derived_relation, Closure, Evaluator, Formula, RelStructure,
};
use crate::numerics::{fmt_rational, q, qi, LengthSet, LengthSymbol, Q};
use crate::numerics::Coord;

#[derive(Debug, Clone, PartialEq)]
pub struct DerivedRelation {
    pub name: String,
    /// free variables `x` and `y`
    pub base: Formula,
    pub closure: Closure,
}

/// `vertex_formula` has free variable `x`, `edge_formula` has `x` and `y` and is symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpretation {
    pub vertex_formula: Formula,
    pub edge_formula: Formula,
    pub derived_relations: Vec<DerivedRelation>,
}

impl Interpretation {
    pub fn identity() -> Self {
        Interpretation { vertex_formula: Formula::True, edge_formula: edge("x", "y"), derived_relations: Vec::new() }
    }
}

#[derive(Debug, Clone)]
pub struct GadgetOutput {
    /// half-open representation
    pub rep: IntervalRep,
    /// the same intervals before the half-open conversion, read as closed intervals
    pub closed: IntervalRep,
    pub interp: Interpretation,
    /// source vertex id to gadget vertex id, in source order
    pub canonical_map: Vec<(String, String)>,
}

/// Graph on the vertices satisfying the vertex formula, edges where the edge formula holds.
pub fn apply_interpretation(h: &Graph, interp: &Interpretation) -> Result<Graph> {
    for v in interp.vertex_formula.free_vars() {
        if v != "x" {
            return Err(Error::UnboundVariable(v));
        }
    }
    for v in interp.edge_formula.free_vars() {
        if v != "x" && v != "y" {
            return Err(Error::UnboundVariable(v));
        }
    }
    let mut s = RelStructure::from_graph(h);
    for d in &interp.derived_relations {
        s = with_derived_relation(&s, &d.name, &d.base, ("x", "y"), d.closure)?;
    }
    let mut ve = Evaluator::new(&s, &interp.vertex_formula, &["x"], &[])?;
    let keep: Vec<usize> = (0..h.n()).filter(|&v| ve.eval(&[v])).collect();
    let mut ee = Evaluator::new(&s, &interp.edge_formula, &["x", "y"], &[])?;
    let mut edges = Vec::new();
    for i in 0..keep.len() {
        for j in i + 1..keep.len() {
            if ee.eval(&[keep[i], keep[j]]) {
                edges.push((i, j));
            }
        }
    }
    Ok(Graph::from_edges(keep.iter().map(|&v| h.ids()[v].clone()).collect(), edges))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub ok: bool,
    pub diff: Vec<String>,
}

/// Applies the interpretation to the gadget and compares with the image of `g` under the map.
pub fn verify_gadget(g: &Graph, out: &GadgetOutput, tol: f64) -> Verification {
    match verify_inner(g, out, tol) {
        Ok(diff) => Verification { ok: diff.is_empty(), diff },
        Err(e) => Verification { ok: false, diff: vec![format!("error: {e}")] },
    }
}

fn verify_inner(g: &Graph, out: &GadgetOutput, tol: f64) -> Result<Vec<String>> {
    let map: BTreeMap<&str, &str> = out.canonical_map.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let mut diff = Vec::new();
    let mut image = Vec::new();
    for id in g.ids() {
        match map.get(id.as_str()) {
            Some(t) => image.push(t.to_string()),
            None => {
                diff.push(format!("source vertex {id} has no image"));
                image.push(format!("?{id}"));
            }
        }
    }
    let back: BTreeMap<&str, &str> = map.iter().map(|(a, b)| (*b, *a)).collect();
    if back.len() != map.len() {
        diff.push("canonical map is not injective".into());
    }
    let expected = Graph::from_edges(image, g.edges());
    let h = build_graph(&out.rep, tol)?;
    let got = apply_interpretation(&h, &out.interp)?;
    let name = |t: &str| match back.get(t) {
        Some(s) => format!("{t} ({s})"),
        None => t.to_string(),
    };
    let want_v: BTreeSet<&String> = expected.ids().iter().collect();
    let got_v: BTreeSet<&String> = got.ids().iter().collect();
    for v in want_v.difference(&got_v) {
        diff.push(format!("missing vertex {}", name(v)));
    }
    for v in got_v.difference(&want_v) {
        diff.push(format!("extra vertex {}", name(v)));
    }
    let (we, ge) = (expected.edge_ids(), got.edge_ids());
    for (a, b) in we.difference(&ge) {
        diff.push(format!("missing edge {} -- {}", name(a), name(b)));
    }
    for (a, b) in ge.difference(&we) {
        diff.push(format!("extra edge {} -- {}", name(a), name(b)));
    }
    Ok(diff)
}

/// Bound variable names, fresh across one formula library.
struct Names(usize);

impl Names {
    fn next(&mut self, base: &str) -> String {
        self.0 += 1;
        format!("{base}{}", self.0)
    }
}

// --- closed intervals to half-open ---

struct Closed {
    id: String,
    left: Q,
    right: Q,
}

/// Extends every right end by `eta` below half the smallest positive end-point
/// gap (and at most `cap`), then rescales so that unit intervals stay unit.
fn to_half_open(ivs: &[Closed], cap: &Q) -> Result<(IntervalRep, IntervalRep)> {
    let mut pts: Vec<&Q> = ivs.iter().flat_map(|c| [&c.left, &c.right]).collect();
    pts.sort();
    pts.dedup();
    let mut eta = cap.clone();
    for w in pts.windows(2) {
        let half = (w[1] - w[0]) / qi(2);
        if half < eta {
            eta = half;
        }
    }
    let scale = qi(1) + &eta;
    let mut lens: Vec<Q> = Vec::new();
    let mut closed_lens: Vec<Q> = Vec::new();
    for c in ivs {
        let l = &c.right - &c.left;
        if !l.is_positive() {
            return Err(Error::InvalidRep(format!("interval `{}` is empty", c.id)));
        }
        let h = (&l + &eta) / &scale;
        if !lens.contains(&h) {
            lens.push(h);
        }
        if !closed_lens.contains(&l) {
            closed_lens.push(l);
        }
    }
    let named = |vals: &mut Vec<Q>| -> Result<LengthSet> {
        vals.sort();
        let syms = vals
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let name = if v.is_one() { "u".to_string() } else { format!("l{i}") };
                LengthSymbol::exact(&name, v.clone())
            })
            .collect();
        LengthSet::new(syms)
    };
    let (ls, cls) = (named(&mut lens)?, named(&mut closed_lens)?);
    let idx = |set: &LengthSet, v: &Q| set.symbols().iter().position(|s| &s.value == v).expect("length listed");
    let mut rep = IntervalRep::new(ls);
    let mut closed = IntervalRep::new(cls);
    for c in ivs {
        let l = &c.right - &c.left;
        let h = (&l + &eta) / &scale;
        let i = idx(&rep.lengths, &h);
        rep.push(c.id.clone(), Coord::constant(&c.left / &scale), i);
        let j = idx(&closed.lengths, &l);
        closed.push(c.id.clone(), Coord::constant(c.left.clone()), j);
    }
    Ok((rep, closed))
}

// --- first-order gadget ---

struct FoLib {
    names: Names,
}

impl FoLib {
    fn anchor(&mut self, x: &str) -> Formula {
        let a = self.names.next("a");
        let b = self.names.next("b");
        exists(
            &a,
            and([
                neq(x, &a),
                edge(x, &a),
                forall(&b, implies(and([neq(&b, x), neq(&b, &a)]), iff(edge(x, &b), edge(&a, &b)))),
            ]),
        )
    }

    /// some anchor at distance exactly `c` from `x`
    fn adist(&mut self, x: &str, c: u32) -> Formula {
        let a = self.names.next("a");
        let anchor = self.anchor(&a);
        exists(&a, and([dist_eq(x, &a, c), anchor]))
    }

    fn mu(&mut self, x: &str) -> Formula {
        let w = self.names.next("w");
        let anchor = self.anchor(x);
        let a1 = self.adist(x, 1);
        let a2 = self.adist(&w, 2);
        and([not(anchor), a1, exists(&w, and([not(edge(x, &w)), a2]))])
    }

    fn mates(&mut self, x: &str, xp: &str) -> Formula {
        let w = self.names.next("w");
        let mu = self.mu(x);
        let a3 = self.adist(xp, 3);
        let a4 = self.adist(xp, 4);
        let a2 = self.adist(&w, 2);
        and([mu, or([a3, a4]), exists_unique(&w, and([not(edge(x, &w)), not(edge(xp, &w)), a2]))])
    }

    /// `x` is adjacent to `y` and to every other neighbour of `y`
    fn domin(&mut self, x: &str, y: &str) -> Formula {
        let z = self.names.next("z");
        and([neq(x, y), edge(x, y), forall(&z, implies(edge(y, &z), or([eq(&z, x), edge(x, &z)])))])
    }

    fn nu_half(&mut self, x: &str, y: &str) -> Formula {
        let yp = self.names.next("p");
        let z = self.names.next("z");
        let t1 = self.names.next("t");
        let t2 = self.names.next("t");
        let mx = self.mu(x);
        let my = self.mu(y);
        let order = self.domin(y, x);
        let mates = self.mates(y, &yp);
        let dx = self.domin(x, &t1);
        let dy = self.domin(&yp, &t2);
        and([
            neq(x, y),
            mx,
            my,
            order,
            exists(
                &yp,
                and([
                    mates,
                    exists(
                        &z,
                        and([
                            edge(x, &z),
                            edge(&yp, &z),
                            forall(&t1, implies(dx, not(edge(&t1, &z)))),
                            forall(&t2, implies(dy, not(edge(&t2, &z)))),
                        ]),
                    ),
                ]),
            ),
        ])
    }
}

pub fn fo_interpretation() -> Interpretation {
    let mut lib = FoLib { names: Names(0) };
    let vertex_formula = lib.mu("x");
    let a = lib.nu_half("x", "y");
    let b = lib.nu_half("y", "x");
    Interpretation { vertex_formula, edge_formula: or([a, b]), derived_relations: Vec::new() }
}

/// Unit and `[1, 1 + eps]`-length intervals whose graph interprets `g` in first-order logic.
pub fn gadget_fo(g: &Graph, eps: &Q) -> Result<GadgetOutput> {
    let n = g.n();
    if n < 2 {
        return Err(Error::TooSmall(format!("the first-order gadget needs at least 2 vertices, got {n}")));
    }
    if !eps.is_positive() || eps > &q(1, 2) {
        return Err(Error::Invalid(format!("epsilon must lie in (0, 1/2], got {}", fmt_rational(eps))));
    }
    let d = eps / qi(n as i64 + 1);
    let dk = |k: usize| &d * qi(k as i64);
    let mut ivs = Vec::new();
    for i in 1..=3usize {
        for j in 0..=n {
            let left = qi(i as i64 - 1) + dk(i + j);
            ivs.push(Closed { id: format!("t_{i}_{j}"), right: &left + qi(1), left });
        }
    }
    ivs.push(Closed { id: "a".into(), left: Q::zero(), right: qi(1) });
    ivs.push(Closed { id: "b".into(), left: dk(n + 2), right: qi(1) + dk(n + 2) });
    for (j, k) in g.edges() {
        let (j, k) = (j + 1, k + 1);
        ivs.push(Closed { id: format!("e_{j}_{k}"), left: qi(1) + dk(1 + j), right: qi(2) + dk(k + 3) });
    }
    let (rep, closed) = to_half_open(&ivs, &(&d / qi(10 * n as i64)))?;
    let canonical_map = g.ids().iter().enumerate().map(|(j, id)| (id.clone(), format!("t_1_{}", j + 1))).collect();
    Ok(GadgetOutput { rep, closed, interp: fo_interpretation(), canonical_map })
}

// --- monadic second-order gadget ---

pub const MATES_STAR: &str = "mates_star";

struct MsoLib {
    names: Names,
}

impl MsoLib {
    fn twin(&mut self, x: &str, y: &str) -> Formula {
        let z = self.names.next("z");
        and([neq(x, y), forall(&z, implies(and([neq(&z, x), neq(&z, y)]), iff(edge(x, &z), edge(y, &z))))])
    }

    fn anchor(&mut self, x: &str) -> Formula {
        let y = self.names.next("y");
        let z = self.names.next("z");
        let ty = self.twin(x, &y);
        let tz = self.twin(x, &z);
        exists(&y, and([ty, exists(&z, and([edge(&z, &y), neq(&z, &y), tz]))]))
    }

    fn noanch(&mut self, x: &str) -> Formula {
        let z = self.names.next("z");
        let a = self.anchor(&z);
        forall(&z, implies(edge(x, &z), not(a)))
    }

    fn mu(&mut self, x: &str) -> Formula {
        let t = self.names.next("t");
        let na = self.noanch(x);
        let a = self.anchor(&t);
        and([na, exists(&t, and([dist_eq(&t, x, 2), deg_eq(&t, 3), a]))])
    }

    fn psi(x: &str, xp: &str, t: &str, y: &str, z: &str) -> Formula {
        and([
            edge(y, t),
            edge(z, t),
            not(edge(y, z)),
            dist_eq(x, y, 2),
            not(dist_le(xp, y, 2)),
            dist_eq(xp, z, 2),
            not(dist_le(x, z, 2)),
        ])
    }

    fn mates(&mut self, x: &str, xp: &str) -> Formula {
        let t = self.names.next("t");
        let (y, z) = (self.names.next("y"), self.names.next("z"));
        let (y2, z2) = (self.names.next("y"), self.names.next("z"));
        let nx = self.noanch(x);
        let np = self.noanch(xp);
        let a = self.anchor(&t);
        let unique = forall(
            &y2,
            forall(&z2, implies(MsoLib::psi(x, xp, &t, &y2, &z2), and([eq(&y2, &y), eq(&z2, &z)]))),
        );
        and([
            dist_eq(x, xp, 4),
            nx,
            np,
            exists(&t, and([a, exists(&y, exists(&z, and([MsoLib::psi(x, xp, &t, &y, &z), unique])))])),
        ])
    }
}

pub fn mso_interpretation() -> Interpretation {
    let mut lib = MsoLib { names: Names(0) };
    let base = lib.mates("x", "y");
    let mx = lib.mu("x");
    let my = lib.mu("y");
    let (x1, y1, x2, y2) = (lib.names.next("x"), lib.names.next("y"), lib.names.next("x"), lib.names.next("y"));
    let tx = lib.twin(&x1, &x2);
    let ty = lib.twin(&y1, &y2);
    let edge_formula = and([
        neq("x", "y"),
        mx,
        my,
        exists(
            &x1,
            and([
                rel(MATES_STAR, "x", &x1),
                exists(&x2, tx),
                exists(&y1, and([rel(MATES_STAR, "y", &y1), edge(&x1, &y1), exists(&y2, ty)])),
            ]),
        ),
    ]);
    let vertex_formula = lib.mu("x");
    Interpretation {
        vertex_formula,
        edge_formula,
        derived_relations: vec![DerivedRelation {
            name: MATES_STAR.into(),
            base,
            closure: Closure::TransitiveSymmetric,
        }],
    }
}

/// Unit intervals whose graph interprets `g` with the `mates_star` closure relation.
///
/// An edgeless `g` still gets the block and anchor layout of a single edge, without
/// the edge pair: with one block only, its vertices would be twins of each other.
pub fn gadget_mso(g: &Graph) -> Result<GadgetOutput> {
    let n = g.n();
    if n < 4 {
        return Err(Error::TooSmall(format!("the unit gadget needs at least 4 vertices, got {n}")));
    }
    let ids = g.ids();
    let mut edges: Vec<(usize, usize)> = g.edges();
    let key = |&(a, b): &(usize, usize)| {
        let (x, y) = (&ids[a], &ids[b]);
        if x <= y {
            (x.clone(), y.clone())
        } else {
            (y.clone(), x.clone())
        }
    };
    edges.sort_by_key(key);
    let m = edges.len();
    let blocks = m.max(1);
    let d = q(1, 10 * n as i64);
    let step = qi(1) + &d;
    let unit = |id: String, left: Q| Closed { id, right: &left + qi(1), left };
    let mut ivs = Vec::new();
    for k in 1..=3 * blocks + 1 {
        for i in 0..n {
            ivs.push(unit(format!("u_{k}_{i}"), &d * qi(i as i64) + &step * qi(k as i64)));
        }
    }
    for c in 0..3 {
        ivs.push(unit(format!("a_0_{c}"), Q::zero()));
    }
    for i in 1..=blocks {
        let s = &step * (qi(3 * i as i64) - q(1, 2));
        for c in 0..3 {
            ivs.push(unit(format!("a_{i}_{c}"), s.clone()));
        }
    }
    for (l, &(j, k)) in edges.iter().enumerate() {
        let s = &step * qi(3 * (l as i64 + 1) + 1);
        for v in [j, k] {
            ivs.push(unit(format!("p_{}_{}", l + 1, v + 1), &d * qi(v as i64) + &s));
        }
    }
    ivs.push(unit("x".into(), q(1, 2)));
    let (rep, closed) = to_half_open(&ivs, &(&d / qi(10 * n as i64)))?;
    let canonical_map = ids.iter().enumerate().map(|(j, id)| (id.clone(), format!("u_1_{j}"))).collect();
    Ok(GadgetOutput { rep, closed, interp: mso_interpretation(), canonical_map })
}

pub fn fo_vertex_count(n: usize, m: usize) -> usize {
    3 * n + 5 + m
}

pub fn mso_vertex_count(n: usize, m: usize) -> usize {
    3 * m * n + n + 5 * m + 4
}

// --- structural facts ---

fn twins_of(h: &Graph, x: usize) -> Vec<usize> {
    let strip = |v: usize, o: usize| h.neighbors(v).iter().copied().filter(|&z| z != o).collect::<Vec<_>>();
    (0..h.n()).filter(|&y| y != x && strip(x, y) == strip(y, x)).collect()
}

fn idx(h: &Graph, id: &str) -> usize {
    h.index_of(id).unwrap_or_else(|| panic!("gadget vertex `{id}` present"))
}

fn selected(h: &Graph, f: &Formula) -> Result<BTreeSet<String>> {
    let s = RelStructure::from_graph(h);
    let mut e = Evaluator::new(&s, f, &["x"], &[])?;
    Ok((0..h.n()).filter(|&v| e.eval(&[v])).map(|v| h.ids()[v].clone()).collect())
}

fn bfs(h: &Graph, from: &[usize]) -> Vec<Option<usize>> {
    let mut dist = vec![None; h.n()];
    let mut queue = std::collections::VecDeque::new();
    for &s in from {
        dist[s] = Some(0);
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for &w in h.neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(dist[v].unwrap() + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Named structural facts of a first-order gadget, each with whether it holds.
pub fn fo_invariants(g: &Graph, out: &GadgetOutput, tol: f64) -> Result<Vec<(String, bool)>> {
    let h = build_graph(&out.rep, tol)?;
    let n = g.n();
    let mut facts = Vec::new();
    facts.push(("vertex count 3n+5+m".to_string(), h.n() == fo_vertex_count(n, g.edge_count())));
    let twin_pairs: BTreeSet<(String, String)> = (0..h.n())
        .flat_map(|x| twins_of(&h, x).into_iter().filter(move |&y| x < y).map(move |y| (x, y)))
        .map(|(x, y)| {
            let (a, b) = (h.ids()[x].clone(), h.ids()[y].clone());
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    let expect: BTreeSet<(String, String)> = [("a".to_string(), "t_1_0".to_string())].into_iter().collect();
    facts.push(("a and t_1_0 are the only twins".into(), twin_pairs == expect));
    let b = idx(&h, "b");
    let nb: BTreeSet<String> = h.neighbors(b).iter().map(|&v| h.ids()[v].clone()).collect();
    let want: BTreeSet<String> = h
        .ids()
        .iter()
        .filter(|id| id.starts_with("t_1_") || id.starts_with("t_2_") || id.starts_with("e_") || *id == "a")
        .cloned()
        .collect();
    facts.push(("b is adjacent to exactly V1, V2, a and the edge intervals".into(), nb == want));
    let mu = selected(&h, &out.interp.vertex_formula)?;
    let v1: BTreeSet<String> = (1..=n).map(|j| format!("t_1_{j}")).collect();
    facts.push(("the vertex formula selects exactly t_1_1..t_1_n".into(), mu == v1));
    let anchors: Vec<usize> = (0..h.n()).filter(|&x| !twins_of(&h, x).iter().all(|&y| !h.has_edge(x, y))).collect();
    let dist = bfs(&h, &anchors);
    let far: BTreeSet<String> =
        (0..h.n()).filter(|&v| matches!(dist[v], Some(3) | Some(4))).map(|v| h.ids()[v].clone()).collect();
    let v3: BTreeSet<String> = (0..=n).map(|j| format!("t_3_{j}")).collect();
    facts.push(("V3 is the set at anchor distance 3 or 4".into(), far == v3));
    Ok(facts)
}

/// Named structural facts of a unit gadget, each with whether it holds.
pub fn mso_invariants(g: &Graph, out: &GadgetOutput, tol: f64) -> Result<Vec<(String, bool)>> {
    let h = build_graph(&out.rep, tol)?;
    let n = g.n();
    let m = g.edge_count();
    let mut facts = Vec::new();
    facts.push(("vertex count 3mn+n+5m+4".to_string(), h.n() == mso_vertex_count(n, m)));
    let twins: Vec<Vec<usize>> = (0..h.n()).map(|x| twins_of(&h, x)).collect();
    let id = |v: usize| h.ids()[v].clone();
    let two: BTreeSet<String> = (0..h.n()).filter(|&v| twins[v].len() == 2).map(id).collect();
    let anchors: BTreeSet<String> = h.ids().iter().filter(|s| s.starts_with("a_")).cloned().collect();
    facts.push(("the anchors are exactly the vertices with two twins".into(), two == anchors));
    facts.push(("there are 3m+3 anchors".into(), anchors.len() == 3 * m + 3));
    // each pair vertex is a twin of its copy in block 3l+1
    let one: BTreeSet<String> = (0..h.n()).filter(|&v| twins[v].len() == 1).map(id).collect();
    let mut pairs = BTreeSet::new();
    for s in h.ids().iter().filter(|s| s.starts_with("p_")) {
        let mut it = s[2..].split('_').map(|t| t.parse::<usize>().expect("numeric id part"));
        let (l, v) = (it.next().unwrap(), it.next().unwrap());
        pairs.insert(s.clone());
        pairs.insert(format!("u_{}_{}", 3 * l + 1, v - 1));
    }
    facts.push(("the vertices with a unique twin are the edge pairs and their block copies".into(), one == pairs));
    let mu = selected(&h, &out.interp.vertex_formula)?;
    let w0: BTreeSet<String> = (0..n).map(|j| format!("u_1_{j}")).collect();
    facts.push(("the vertex formula selects exactly the first block".into(), mu == w0));
    let a0: BTreeSet<String> = (0..3).map(|c| format!("a_0_{c}")).collect();
    let of_degree = |k: usize| -> BTreeSet<String> {
        (0..h.n()).filter(|&v| twins[v].len() == 2 && h.degree(v) == k).map(id).collect()
    };
    facts.push(("the [0,1] anchors are the only degree-3 anchors".into(), of_degree(3) == a0));
    facts.push(("the [0,1] anchors are the only degree-4 anchors".into(), of_degree(4) == a0));
    Ok(facts)
}

// --- files ---

pub fn write_interpretation(interp: &Interpretation) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "vertex {}", interp.vertex_formula);
    let _ = writeln!(s, "edge {}", interp.edge_formula);
    for d in &interp.derived_relations {
        let mode = match d.closure {
            Closure::None => "plain",
            Closure::TransitiveSymmetric => "closure",
        };
        let _ = writeln!(s, "derived {} {} {}", d.name, mode, d.base);
    }
    s
}

pub fn parse_interpretation(text: &str) -> Result<Interpretation> {
    use crate::logic::{parse_formula, Dialect};
    let mut vertex = None;
    let mut edge_f = None;
    let mut derived = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || crate::error::parse_err(ln + 1, 1, "expected `vertex`, `edge` or `derived`");
        let (head, rest) = line.split_once(' ').ok_or_else(bad)?;
        match head {
            "vertex" => vertex = Some(parse_formula(rest, Dialect::Mso1)?),
            "edge" => edge_f = Some(parse_formula(rest, Dialect::Mso1)?),
            "derived" => {
                let mut parts = rest.splitn(3, ' ');
                let (name, mode, body) = (parts.next(), parts.next(), parts.next());
                let (Some(name), Some(mode), Some(body)) = (name, mode, body) else {
                    return Err(bad());
                };
                let closure = match mode {
                    "plain" => Closure::None,
                    "closure" => Closure::TransitiveSymmetric,
                    _ => return Err(crate::error::parse_err(ln + 1, 1, format!("unknown closure `{mode}`"))),
                };
                derived.push(DerivedRelation { name: name.into(), base: parse_formula(body, Dialect::Mso1)?, closure });
            }
            _ => return Err(bad()),
        }
    }
    Ok(Interpretation {
        vertex_formula: vertex.ok_or_else(|| Error::Invalid("interpretation has no vertex formula".into()))?,
        edge_formula: edge_f.ok_or_else(|| Error::Invalid("interpretation has no edge formula".into()))?,
        derived_relations: derived,
    })
}

pub fn write_canonical_map(out: &GadgetOutput) -> String {
    out.canonical_map.iter().map(|(a, b)| format!("canon {a} -> {b}\n")).collect()
}

pub fn parse_canonical_map(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            ["canon", a, "->", b] => out.push((a.to_string(), b.to_string())),
            _ => return Err(crate::error::parse_err(ln + 1, 1, "expected `canon <source> -> <target>`")),
        }
    }
    Ok(out)
}

/// Representation, interpretation and map files, in that order.
pub fn write_gadget(out: &GadgetOutput) -> (String, String, String) {
    (write_rep(&out.rep), write_interpretation(&out.interp), write_canonical_map(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::build_graph_closed;
    use crate::numerics::DEFAULT_TOL;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges((1..=n).map(|i| format!("v{i}")).collect(), edges.to_vec())
    }

    #[test]
    fn identity_and_empty() {
        let p3 = graph(3, &[(0, 1), (1, 2)]);
        assert!(apply_interpretation(&p3, &Interpretation::identity()).unwrap().same_graph(&p3));
        let none = Interpretation { vertex_formula: Formula::False, ..Interpretation::identity() };
        assert_eq!(apply_interpretation(&p3, &none).unwrap().n(), 0);
    }

    #[test]
    fn fo_small() {
        let k3 = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let out = gadget_fo(&k3, &q(1, 2)).unwrap();
        assert_eq!(out.rep.len(), 17);
        assert!(verify_gadget(&k3, &out, DEFAULT_TOL).ok);
        let p3 = graph(3, &[(0, 1), (1, 2)]);
        let out = gadget_fo(&p3, &q(1, 3)).unwrap();
        assert_eq!(out.rep.len(), 16);
        let v = verify_gadget(&p3, &out, DEFAULT_TOL);
        assert!(v.ok, "{:?}", v.diff);
        let e2 = graph(2, &[]);
        let out = gadget_fo(&e2, &q(1, 2)).unwrap();
        assert_eq!(out.rep.len(), 11);
        let got = apply_interpretation(&build_graph(&out.rep, DEFAULT_TOL).unwrap(), &out.interp).unwrap();
        assert_eq!(got.edge_count(), 0);
        assert!(verify_gadget(&e2, &out, DEFAULT_TOL).ok);
    }

    #[test]
    fn fo_rejects() {
        assert!(matches!(gadget_fo(&graph(1, &[]), &q(1, 2)), Err(Error::TooSmall(_))));
        assert!(gadget_fo(&graph(3, &[]), &qi(0)).is_err());
        assert!(gadget_fo(&graph(3, &[]), &qi(1)).is_err());
    }

    #[test]
    fn fo_lengths_inside_the_band() {
        let k4 = graph(4, &[(0, 1), (0, 3), (2, 3)]);
        let eps = q(2, 5);
        let out = gadget_fo(&k4, &eps).unwrap();
        for s in out.rep.lengths.symbols() {
            assert!(s.value >= qi(1) && s.value <= qi(1) + &eps, "{}", fmt_rational(&s.value));
        }
        let unit = out.rep.lengths.index_of("u").unwrap();
        assert!(out.rep.vertices.iter().filter(|v| v.id.starts_with('t')).all(|v| v.len == unit));
    }

    #[test]
    fn half_open_matches_closed() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        for out in [gadget_fo(&g, &q(1, 2)).unwrap(), gadget_mso(&g).unwrap()] {
            let a = build_graph(&out.rep, DEFAULT_TOL).unwrap();
            let b = build_graph_closed(&out.closed, DEFAULT_TOL).unwrap();
            assert!(a.same_graph(&b));
        }
    }

    #[test]
    fn mso_small() {
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let out = gadget_mso(&c4).unwrap();
        assert_eq!(out.rep.len(), mso_vertex_count(4, 4));
        assert!(out.rep.lengths.symbols().iter().all(|s| s.value.is_one()));
        let v = verify_gadget(&c4, &out, DEFAULT_TOL);
        assert!(v.ok, "{:?}", v.diff);
        assert_eq!(mso_vertex_count(4, 6), 110);
        assert!(matches!(gadget_mso(&graph(3, &[(0, 1)])), Err(Error::TooSmall(_))));
    }

    #[test]
    fn files_round_trip() {
        let g = graph(3, &[(0, 2)]);
        let out = gadget_fo(&g, &q(1, 2)).unwrap();
        let (_, itext, mtext) = write_gadget(&out);
        assert_eq!(parse_interpretation(&itext).unwrap(), out.interp);
        assert_eq!(parse_canonical_map(&mtext).unwrap(), out.canonical_map);
        assert!(mtext.starts_with("canon v1 -> t_1_1\n"));
        let mi = mso_interpretation();
        assert_eq!(parse_interpretation(&write_interpretation(&mi)).unwrap(), mi);
    }
}
