//! Interval representations and the graphs they induce.
//!
//! Intervals are half-open, `[left, left + len)`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{parse_err, Error, Result};
use crate::numerics::{
    compare_resolved, fmt_rational, parse_rational, q_to_f64, qi, sort_by_value, Coord, LengthSet, LengthSymbol, Q,
    Resolved,
};

#[derive(Debug, Clone, PartialEq)]
pub struct RepVertex {
    pub id: String,
    pub left: Coord,
    /// index into the length set
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalRep {
    pub lengths: LengthSet,
    pub vertices: Vec<RepVertex>,
    pub span: Option<Coord>,
}

impl IntervalRep {
    pub fn new(lengths: LengthSet) -> Self {
        IntervalRep { lengths, vertices: Vec::new(), span: None }
    }

    pub fn push(&mut self, id: impl Into<String>, left: Coord, len: usize) {
        self.vertices.push(RepVertex { id: id.into(), left, len });
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn right(&self, i: usize) -> Coord {
        let v = &self.vertices[i];
        &v.left + &Coord::symbol(v.len)
    }

    pub fn resolved_lefts(&self) -> Vec<Resolved> {
        self.vertices.iter().map(|v| self.lengths.resolve(&v.left)).collect()
    }

    pub fn resolved_rights(&self) -> Vec<Resolved> {
        (0..self.len()).map(|i| self.lengths.resolve(&self.right(i))).collect()
    }

    pub fn ids(&self) -> Vec<String> {
        self.vertices.iter().map(|v| v.id.clone()).collect()
    }

    /// Subrepresentation on the given vertex indices, in the given order.
    pub fn induced(&self, keep: &[usize]) -> IntervalRep {
        IntervalRep {
            lengths: self.lengths.clone(),
            vertices: keep.iter().map(|&i| self.vertices[i].clone()).collect(),
            span: self.span.clone(),
        }
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let mut seen = HashSet::new();
        for v in &self.vertices {
            if !seen.insert(v.id.as_str()) {
                return Err(Error::InvalidRep(format!("duplicate vertex id `{}`", v.id)));
            }
            if v.len >= self.lengths.len() {
                return Err(Error::InvalidRep(format!("vertex `{}` uses an undeclared length", v.id)));
            }
            for (i, _) in &v.left.coeffs {
                if *i >= self.lengths.len() {
                    return Err(Error::InvalidRep(format!("vertex `{}` uses an undeclared symbol", v.id)));
                }
            }
        }
        if let Some(d) = &self.span {
            let rd = self.lengths.resolve(d);
            let zero = self.lengths.resolve(&Coord::zero());
            for (i, v) in self.vertices.iter().enumerate() {
                let l = self.lengths.resolve(&v.left);
                let r = self.lengths.resolve(&self.right(i));
                if compare_resolved(&l, &zero, tol)? == Ordering::Less
                    || compare_resolved(&r, &rd, tol)? == Ordering::Greater
                {
                    return Err(Error::SpanViolation(v.id.clone()));
                }
            }
        }
        Ok(())
    }
}

/// Simple undirected graph with string vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    ids: Vec<String>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(ids: Vec<String>) -> Self {
        let n = ids.len();
        Graph { ids, adj: vec![Vec::new(); n] }
    }

    pub fn from_edges(ids: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(ids);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g.normalize();
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert_ne!(a, b, "loops are not allowed");
        self.adj[a].push(b);
        self.adj[b].push(a);
    }

    fn normalize(&mut self) {
        for l in &mut self.adj {
            l.sort_unstable();
            l.dedup();
        }
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, l) in self.adj.iter().enumerate() {
            out.extend(l.iter().filter(|&&b| a < b).map(|&b| (a, b)));
        }
        out
    }

    /// Edge set as ordered id pairs, independent of vertex order.
    pub fn edge_ids(&self) -> BTreeSet<(String, String)> {
        self.edges()
            .into_iter()
            .map(|(a, b)| {
                let (x, y) = (self.ids[a].clone(), self.ids[b].clone());
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect()
    }

    pub fn same_graph(&self, other: &Graph) -> bool {
        let a: BTreeSet<&String> = self.ids.iter().collect();
        let b: BTreeSet<&String> = other.ids.iter().collect();
        a == b && self.edge_ids() == other.edge_ids()
    }

    pub fn induced(&self, keep: &[usize]) -> Graph {
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let ids = keep.iter().map(|&v| self.ids[v].clone()).collect();
        let mut edges = Vec::new();
        for (i, &v) in keep.iter().enumerate() {
            for w in &self.adj[v] {
                if let Some(&j) = pos.get(w) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        Graph::from_edges(ids, edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("vertices");
        for id in &self.ids {
            s.push(' ');
            s.push_str(id);
        }
        s.push('\n');
        for (a, b) in self.edges() {
            let _ = writeln!(s, "edge {} {}", self.ids[a], self.ids[b]);
        }
        s
    }

    pub fn parse(text: &str) -> Result<Graph> {
        let mut ids: Vec<String> = Vec::new();
        let mut index = HashMap::new();
        let mut edges = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = strip_comment(line);
            let mut parts = line.split_whitespace();
            match parts.next() {
                None => continue,
                Some("vertices") => {
                    for id in parts {
                        if index.insert(id.to_string(), ids.len()).is_some() {
                            return Err(parse_err(ln + 1, 1, format!("duplicate vertex `{id}`")));
                        }
                        ids.push(id.to_string());
                    }
                }
                Some("edge") => {
                    let ends: Vec<&str> = parts.collect();
                    if ends.len() != 2 {
                        return Err(parse_err(ln + 1, 1, "edge needs two endpoints"));
                    }
                    let mut ix = [0; 2];
                    for (k, e) in ends.iter().enumerate() {
                        ix[k] = *index
                            .get(*e)
                            .ok_or_else(|| parse_err(ln + 1, 1, format!("unknown vertex `{e}`")))?;
                    }
                    if ix[0] == ix[1] {
                        return Err(parse_err(ln + 1, 1, "loops are not allowed"));
                    }
                    edges.push((ix[0], ix[1]));
                }
                Some(other) => return Err(parse_err(ln + 1, 1, format!("unexpected `{other}`"))),
            }
        }
        Ok(Graph::from_edges(ids, edges))
    }
}

/// Vertex order by left end point, ties by position in the representation.
pub fn left_order(rep: &IntervalRep, tol: f64) -> Result<Vec<usize>> {
    sort_by_value(&rep.resolved_lefts(), tol)
}

pub fn build_graph(rep: &IntervalRep, tol: f64) -> Result<Graph> {
    let lefts = rep.resolved_lefts();
    let rights = rep.resolved_rights();
    let order = sort_by_value(&lefts, tol)?;
    let mut active: Vec<usize> = Vec::new();
    let mut edges = Vec::new();
    for &v in &order {
        let mut keep = Vec::with_capacity(active.len());
        for &u in &active {
            // ℓ(u) <= ℓ(v) already; they meet iff ℓ(v) < r(u)
            if compare_resolved(&lefts[v], &rights[u], tol)? == Ordering::Less {
                keep.push(u);
                edges.push((u, v));
            }
        }
        keep.push(v);
        active = keep;
    }
    Ok(Graph::from_edges(rep.ids(), edges))
}

/// Graph of the same records read as closed intervals `[left, left + len]`.
pub fn build_graph_closed(rep: &IntervalRep, tol: f64) -> Result<Graph> {
    let lefts = rep.resolved_lefts();
    let rights = rep.resolved_rights();
    let order = sort_by_value(&lefts, tol)?;
    let mut active: Vec<usize> = Vec::new();
    let mut edges = Vec::new();
    for &v in &order {
        let mut keep = Vec::with_capacity(active.len());
        for &u in &active {
            if compare_resolved(&lefts[v], &rights[u], tol)? != Ordering::Greater {
                keep.push(u);
                edges.push((u, v));
            }
        }
        keep.push(v);
        active = keep;
    }
    Ok(Graph::from_edges(rep.ids(), edges))
}

/// Rational lower bound on the smallest positive gap between distinct end points.
pub fn min_endpoint_gap(rep: &IntervalRep, tol: f64) -> Result<Option<Q>> {
    let mut pts = rep.resolved_lefts();
    pts.extend(rep.resolved_rights());
    let order = sort_by_value(&pts, tol)?;
    let mut best: Option<Q> = None;
    for w in order.windows(2) {
        let (a, b) = (&pts[w[0]], &pts[w[1]]);
        let d = b.sub(a);
        let gap = match d.exact_sign() {
            Some(Ordering::Equal) => continue,
            Some(_) => d.rat.clone(),
            None => dyadic_below(d.approx - tol)?,
        };
        if best.as_ref().map_or(true, |b| gap < *b) {
            best = Some(gap);
        }
    }
    Ok(best)
}

/// Largest `1/2^t` (or integer power of two) not above `x`.
pub fn dyadic_below(x: f64) -> Result<Q> {
    if !(x > 0.0) {
        return Err(Error::Precision { lhs: format!("{x}"), rhs: "0".into(), tol: 0.0 });
    }
    let mut v = Q::one();
    while q_to_f64(&v) > x {
        v /= qi(2);
    }
    while q_to_f64(&(&v * qi(2))) <= x {
        v *= qi(2);
    }
    Ok(v)
}

/// Shifts the i-th interval (in left-end order) right by `i·δ/(2n)`.
pub fn perturb_distinct(rep: &IntervalRep, tol: f64) -> Result<IntervalRep> {
    let n = rep.len();
    if n == 0 {
        return Ok(rep.clone());
    }
    let delta = min_endpoint_gap(rep, tol)?.expect("an interval has two distinct end points");
    let order = left_order(rep, tol)?;
    let step = delta / qi(2 * n as i64);
    let mut out = rep.clone();
    for (pos, &v) in order.iter().enumerate() {
        let shift = Coord::constant(&step * qi(pos as i64 + 1));
        out.vertices[v].left = &rep.vertices[v].left + &shift;
    }
    Ok(out)
}

/// Maximum number of left end points in a half-open window of the given length.
pub fn density_profile(rep: &IntervalRep, window: &Coord, tol: f64) -> Result<(usize, Coord)> {
    if rep.is_empty() {
        return Ok((0, Coord::zero()));
    }
    let lefts = rep.resolved_lefts();
    let w = rep.lengths.resolve(window);
    let order = sort_by_value(&lefts, tol)?;
    let (mut best, mut at) = (0, order[0]);
    let mut j = 0;
    for i in 0..order.len() {
        let end = lefts[order[i]].add(&w);
        if j < i {
            j = i;
        }
        while j < order.len() && compare_resolved(&lefts[order[j]], &end, tol)? == Ordering::Less {
            j += 1;
        }
        if j - i > best {
            best = j - i;
            at = order[i];
        }
    }
    Ok((best, rep.vertices[at].left.clone()))
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub fn parse_rep(text: &str) -> Result<IntervalRep> {
    let mut lengths: Option<LengthSet> = None;
    let mut span_text: Option<(usize, String)> = None;
    let mut verts: Vec<(usize, String, String, String)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = strip_comment(raw);
        let mut parts = line.split_whitespace();
        let Some(head) = parts.next() else { continue };
        let col = raw.find(head).unwrap_or(0) + 1;
        match head {
            "lengths" => {
                if lengths.is_some() {
                    return Err(parse_err(ln, col, "lengths declared twice"));
                }
                let mut syms = Vec::new();
                for p in parts {
                    let (name, val) =
                        p.split_once('=').ok_or_else(|| parse_err(ln, col, format!("expected name=value, got `{p}`")))?;
                    let (v, decimal) =
                        parse_rational(val).ok_or_else(|| parse_err(ln, col, format!("bad length value `{val}`")))?;
                    syms.push(if decimal { LengthSymbol::approximate(name, v) } else { LengthSymbol::exact(name, v) });
                }
                lengths = Some(LengthSet::new(syms).map_err(|e| parse_err(ln, col, e.to_string()))?);
            }
            "span" => {
                let rest: Vec<&str> = parts.collect();
                if rest.len() != 1 {
                    return Err(parse_err(ln, col, "span takes one value"));
                }
                span_text = Some((ln, rest[0].to_string()));
            }
            "vertex" => {
                let id = parts.next().ok_or_else(|| parse_err(ln, col, "vertex needs an id"))?;
                let (mut len, mut left) = (None, None);
                for p in parts {
                    match p.split_once('=') {
                        Some(("len", v)) => len = Some(v.to_string()),
                        Some(("left", v)) => left = Some(v.to_string()),
                        _ => return Err(parse_err(ln, col, format!("unexpected `{p}`"))),
                    }
                }
                let len = len.ok_or_else(|| parse_err(ln, col, "missing len="))?;
                let left = left.ok_or_else(|| parse_err(ln, col, "missing left="))?;
                verts.push((ln, id.to_string(), len, left));
            }
            other => return Err(parse_err(ln, col, format!("unexpected `{other}`"))),
        }
    }
    let lengths = lengths.ok_or_else(|| parse_err(1, 1, "missing lengths line"))?;
    let mut rep = IntervalRep::new(lengths);
    if let Some((ln, s)) = span_text {
        rep.span = Some(rep.lengths.parse_coord(&s).map_err(|e| parse_err(ln, 1, e.to_string()))?);
    }
    for (ln, id, len, left) in verts {
        let li = rep.lengths.index_of(&len).ok_or_else(|| parse_err(ln, 1, format!("unknown length `{len}`")))?;
        let left = rep.lengths.parse_coord(&left).map_err(|e| parse_err(ln, 1, e.to_string()))?;
        rep.push(id, left, li);
    }
    let mut seen = HashSet::new();
    for v in &rep.vertices {
        if !seen.insert(v.id.clone()) {
            return Err(Error::InvalidRep(format!("duplicate vertex id `{}`", v.id)));
        }
    }
    Ok(rep)
}

fn fmt_decimal(x: &Q) -> String {
    // exact when the value has a terminating expansion of at most 18 digits,
    // rounded to 18 digits otherwise
    let ten = BigInt::from(10u32);
    let mut digits = 1u32;
    while digits < 18 && !(ten.pow(digits) % x.denom()).is_zero() {
        digits += 1;
    }
    let scaled = (x * Q::from_integer(ten.pow(digits))).round().to_integer();
    let neg = scaled.is_negative();
    let s = format!("{:0>width$}", scaled.abs().to_string(), width = digits as usize + 1);
    let (ip, fp) = s.split_at(s.len() - digits as usize);
    format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
}

pub fn write_rep(rep: &IntervalRep) -> String {
    let mut s = String::from("lengths");
    for sym in rep.lengths.symbols() {
        let v = if sym.exact { fmt_rational(&sym.value) } else { fmt_decimal(&sym.value) };
        let _ = write!(s, " {}={}", sym.name, v);
    }
    s.push('\n');
    if let Some(d) = &rep.span {
        let _ = writeln!(s, "span {}", rep.lengths.fmt_coord(d));
    }
    for v in &rep.vertices {
        let _ = writeln!(
            s,
            "vertex {} len={} left={}",
            v.id,
            rep.lengths.symbols()[v.len].name,
            rep.lengths.fmt_coord(&v.left)
        );
    }
    s
}

/// Representation of `count` copies of the unit interval `[0,1)`.
pub fn stacked_unit(count: usize) -> IntervalRep {
    let mut rep = IntervalRep::new(LengthSet::unit());
    for i in 0..count {
        rep.push(format!("v{i}"), Coord::zero(), 0);
    }
    rep
}
