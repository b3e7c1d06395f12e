//! FO and MSO₁ formulas over graphs and finite relational structures.

mod eval;
mod parser;
mod structure;

use std::collections::BTreeSet;
use std::fmt;

pub use eval::{evaluate, with_derived_relation, Assignment, Closure, Evaluator, DEFAULT_SET_CAP};
pub use parser::parse_formula;
pub use structure::{RelStructure, Relation, EDGE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dialect {
    Fo,
    Mso1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistCmp {
    Eq,
    Le,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    /// binary relation atom; the graph edge relation is named [`EDGE`]
    Rel(String, String, String),
    Eq(String, String),
    Label(String, String),
    /// `x in X`
    In(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    ExistsUnique(String, Box<Formula>),
    ExistsSet(String, Box<Formula>),
    ForallSet(String, Box<Formula>),
    Dist(String, String, DistCmp, u32),
    Deg(String, u32),
}

use Formula as F;

pub fn edge(x: &str, y: &str) -> Formula {
    F::Rel(EDGE.into(), x.into(), y.into())
}

pub fn rel(name: &str, x: &str, y: &str) -> Formula {
    F::Rel(name.into(), x.into(), y.into())
}

pub fn eq(x: &str, y: &str) -> Formula {
    F::Eq(x.into(), y.into())
}

pub fn neq(x: &str, y: &str) -> Formula {
    not(eq(x, y))
}

pub fn not(f: Formula) -> Formula {
    F::Not(Box::new(f))
}

pub fn and(fs: impl IntoIterator<Item = Formula>) -> Formula {
    let fs: Vec<Formula> = fs.into_iter().collect();
    fs.into_iter().rev().reduce(|acc, f| F::And(Box::new(f), Box::new(acc))).unwrap_or(F::True)
}

pub fn or(fs: impl IntoIterator<Item = Formula>) -> Formula {
    let fs: Vec<Formula> = fs.into_iter().collect();
    fs.into_iter().rev().reduce(|acc, f| F::Or(Box::new(f), Box::new(acc))).unwrap_or(F::False)
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    F::Implies(Box::new(a), Box::new(b))
}

pub fn iff(a: Formula, b: Formula) -> Formula {
    F::Iff(Box::new(a), Box::new(b))
}

pub fn exists(v: &str, f: Formula) -> Formula {
    F::Exists(v.into(), Box::new(f))
}

pub fn exists_all(vs: &[&str], f: Formula) -> Formula {
    vs.iter().rev().fold(f, |acc, v| exists(v, acc))
}

pub fn forall(v: &str, f: Formula) -> Formula {
    F::Forall(v.into(), Box::new(f))
}

pub fn forall_all(vs: &[&str], f: Formula) -> Formula {
    vs.iter().rev().fold(f, |acc, v| forall(v, acc))
}

pub fn exists_unique(v: &str, f: Formula) -> Formula {
    F::ExistsUnique(v.into(), Box::new(f))
}

pub fn dist_eq(x: &str, y: &str, c: u32) -> Formula {
    F::Dist(x.into(), y.into(), DistCmp::Eq, c)
}

pub fn dist_le(x: &str, y: &str, c: u32) -> Formula {
    F::Dist(x.into(), y.into(), DistCmp::Le, c)
}

pub fn deg_eq(x: &str, c: u32) -> Formula {
    F::Deg(x.into(), c)
}

/// A variable name not in `avoid`, derived from `base`.
pub fn fresh(base: &str, avoid: &[&str]) -> String {
    if !avoid.contains(&base) {
        return base.to_string();
    }
    (1..).map(|i| format!("{base}{i}")).find(|c| !avoid.contains(&c.as_str())).expect("unbounded")
}

impl Formula {
    pub fn quantifier_rank(&self) -> u32 {
        match self {
            F::True | F::False | F::Rel(..) | F::Eq(..) | F::Label(..) | F::In(..) => 0,
            F::Not(a) => a.quantifier_rank(),
            F::And(a, b) | F::Or(a, b) | F::Implies(a, b) | F::Iff(a, b) => a.quantifier_rank().max(b.quantifier_rank()),
            F::Exists(_, a) | F::Forall(_, a) | F::ExistsSet(_, a) | F::ForallSet(_, a) => a.quantifier_rank() + 1,
            F::ExistsUnique(_, a) => a.quantifier_rank() + 2,
            F::Dist(_, _, DistCmp::Le, c) | F::Dist(_, _, DistCmp::Eq, c) => c.saturating_sub(1),
            F::Deg(_, c) => c + 1,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut see = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            F::True | F::False => {}
            F::Rel(_, a, b) | F::Eq(a, b) | F::Dist(a, b, ..) | F::In(a, b) => {
                see(a, bound);
                see(b, bound);
            }
            F::Label(_, a) | F::Deg(a, _) => see(a, bound),
            F::Not(a) => a.collect_free(bound, out),
            F::And(a, b) | F::Or(a, b) | F::Implies(a, b) | F::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            F::Exists(v, a) | F::Forall(v, a) | F::ExistsUnique(v, a) | F::ExistsSet(v, a) | F::ForallSet(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring in the formula, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            F::Rel(_, a, b) | F::Eq(a, b) | F::Dist(a, b, ..) | F::In(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            F::Label(_, a) | F::Deg(a, _) => {
                out.insert(a.clone());
            }
            F::Exists(v, _) | F::Forall(v, _) | F::ExistsUnique(v, _) | F::ExistsSet(v, _) | F::ForallSet(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            F::Not(a)
            | F::Exists(_, a)
            | F::Forall(_, a)
            | F::ExistsUnique(_, a)
            | F::ExistsSet(_, a)
            | F::ForallSet(_, a) => a.visit(f),
            F::And(a, b) | F::Or(a, b) | F::Implies(a, b) | F::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    pub fn uses_sets(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if matches!(f, F::ExistsSet(..) | F::ForallSet(..) | F::In(..)) {
                found = true;
            }
        });
        found
    }

    /// Replaces free occurrences of `from` by `to`; `to` must not be bound anywhere in `self`.
    pub fn rename_free(&self, from: &str, to: &str) -> Formula {
        let r = |v: &String| if v == from { to.to_string() } else { v.clone() };
        let b = |f: &Formula| Box::new(f.rename_free(from, to));
        match self {
            F::True => F::True,
            F::False => F::False,
            F::Rel(n, x, y) => F::Rel(n.clone(), r(x), r(y)),
            F::Eq(x, y) => F::Eq(r(x), r(y)),
            F::Label(n, x) => F::Label(n.clone(), r(x)),
            F::In(x, s) => F::In(r(x), r(s)),
            F::Dist(x, y, c, k) => F::Dist(r(x), r(y), *c, *k),
            F::Deg(x, k) => F::Deg(r(x), *k),
            F::Not(a) => F::Not(b(a)),
            F::And(x, y) => F::And(b(x), b(y)),
            F::Or(x, y) => F::Or(b(x), b(y)),
            F::Implies(x, y) => F::Implies(b(x), b(y)),
            F::Iff(x, y) => F::Iff(b(x), b(y)),
            F::Exists(v, a) | F::Forall(v, a) | F::ExistsUnique(v, a) | F::ExistsSet(v, a) | F::ForallSet(v, a)
                if v == from =>
            {
                let _ = a;
                self.clone()
            }
            F::Exists(v, a) => F::Exists(v.clone(), b(a)),
            F::Forall(v, a) => F::Forall(v.clone(), b(a)),
            F::ExistsUnique(v, a) => F::ExistsUnique(v.clone(), b(a)),
            F::ExistsSet(v, a) => F::ExistsSet(v.clone(), b(a)),
            F::ForallSet(v, a) => F::ForallSet(v.clone(), b(a)),
        }
    }

    /// Rewrites the `dist`, `deg` and `exists!` macros into plain quantifiers.
    pub fn expand(&self) -> Formula {
        let names: Vec<String> = self.all_vars().into_iter().collect();
        let mut counter = 0usize;
        self.expand_with(&names, &mut counter)
    }

    fn expand_with(&self, taken: &[String], counter: &mut usize) -> Formula {
        let mut fresh = || loop {
            *counter += 1;
            let c = format!("_m{counter}");
            if !taken.contains(&c) {
                return c;
            }
        };
        let b = |f: &Formula, c: &mut usize| Box::new(f.expand_with(taken, c));
        match self {
            F::Dist(x, y, cmp, c) => {
                let le = |k: u32, fresh: &mut dyn FnMut() -> String| -> Formula {
                    let step = |a: &str, b: &str| or([eq(a, b), edge(a, b)]);
                    match k {
                        0 => eq(x, y),
                        _ => {
                            let mids: Vec<String> = (1..k).map(|_| fresh()).collect();
                            let mut path = vec![x.clone()];
                            path.extend(mids.iter().cloned());
                            path.push(y.clone());
                            let body = and(path.windows(2).map(|w| step(&w[0], &w[1])));
                            let refs: Vec<&str> = mids.iter().map(String::as_str).collect();
                            exists_all(&refs, body)
                        }
                    }
                };
                match (cmp, c) {
                    (DistCmp::Le, k) => le(*k, &mut fresh),
                    (DistCmp::Eq, 0) => eq(x, y),
                    (DistCmp::Eq, k) => {
                        let upper = le(*k, &mut fresh);
                        let lower = le(k - 1, &mut fresh);
                        and([upper, not(lower)])
                    }
                }
            }
            F::Deg(x, 0) => {
                let z = fresh();
                forall(&z, not(edge(x, &z)))
            }
            F::Deg(x, c) => {
                let ys: Vec<String> = (0..*c).map(|_| fresh()).collect();
                let z = fresh();
                let mut parts = Vec::new();
                for i in 0..ys.len() {
                    for j in i + 1..ys.len() {
                        parts.push(neq(&ys[i], &ys[j]));
                    }
                }
                parts.extend(ys.iter().map(|y| edge(x, y)));
                parts.push(forall(&z, implies(edge(x, &z), or(ys.iter().map(|y| eq(&z, y))))));
                let refs: Vec<&str> = ys.iter().map(String::as_str).collect();
                exists_all(&refs, and(parts))
            }
            F::ExistsUnique(v, a) => {
                let body = a.expand_with(taken, counter);
                let w = loop {
                    *counter += 1;
                    let c = format!("_m{counter}");
                    if !taken.contains(&c) {
                        break c;
                    }
                };
                let other = body.rename_free(v, &w);
                exists(v, and([body, forall(&w, implies(other, eq(&w, v)))]))
            }
            F::True | F::False | F::Rel(..) | F::Eq(..) | F::Label(..) | F::In(..) => self.clone(),
            F::Not(a) => F::Not(b(a, counter)),
            F::And(x, y) => F::And(b(x, counter), b(y, counter)),
            F::Or(x, y) => F::Or(b(x, counter), b(y, counter)),
            F::Implies(x, y) => F::Implies(b(x, counter), b(y, counter)),
            F::Iff(x, y) => F::Iff(b(x, counter), b(y, counter)),
            F::Exists(v, a) => F::Exists(v.clone(), b(a, counter)),
            F::Forall(v, a) => F::Forall(v.clone(), b(a, counter)),
            F::ExistsSet(v, a) => F::ExistsSet(v.clone(), b(a, counter)),
            F::ForallSet(v, a) => F::ForallSet(v.clone(), b(a, counter)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            F::True => write!(f, "true"),
            F::False => write!(f, "false"),
            F::Rel(n, x, y) if n == EDGE => write!(f, "E({x},{y})"),
            F::Rel(n, x, y) => write!(f, "{n}({x},{y})"),
            F::Eq(x, y) => write!(f, "{x} = {y}"),
            F::Label(n, x) => write!(f, "{n}({x})"),
            F::In(x, s) => write!(f, "{x} in {s}"),
            F::Not(a) => match a.as_ref() {
                F::Eq(x, y) => write!(f, "{x} != {y}"),
                _ => write!(f, "!({a})"),
            },
            F::And(a, b) => write!(f, "({a} & {b})"),
            F::Or(a, b) => write!(f, "({a} | {b})"),
            F::Implies(a, b) => write!(f, "({a} -> {b})"),
            F::Iff(a, b) => write!(f, "({a} <-> {b})"),
            F::Exists(v, a) => write!(f, "(exists {v}. {a})"),
            F::Forall(v, a) => write!(f, "(forall {v}. {a})"),
            F::ExistsUnique(v, a) => write!(f, "(exists! {v}. {a})"),
            F::ExistsSet(v, a) => write!(f, "(existsS {v}. {a})"),
            F::ForallSet(v, a) => write!(f, "(forallS {v}. {a})"),
            F::Dist(x, y, DistCmp::Eq, c) => write!(f, "dist({x},{y})={c}"),
            F::Dist(x, y, DistCmp::Le, c) => write!(f, "dist({x},{y})<={c}"),
            F::Deg(x, c) => write!(f, "deg({x})={c}"),
        }
    }
}
