//! Exact coordinates over a finite set of declared interval lengths.
//!
//! A coordinate is a rational constant plus rational multiples of the length
//! symbols. Symbols declared as integers or fractions are exact; symbols
//! declared as decimals stand for (possibly irrational) reals known only to
//! the written precision.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{parse_err, Error, Result};

pub type Q = BigRational;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_LK_BUDGET: u128 = 1_000_000;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // numerator or denominator beyond f64 range: scale down first
        let n = x.numer().to_string().len() as i32;
        let d = x.denom().to_string().len() as i32;
        let shift = BigInt::from(10u32).pow((n.max(d) - 300).max(0) as u32);
        let num = (x.numer() / &shift).to_f64().unwrap_or(0.0);
        let den = (x.denom() / &shift).to_f64().unwrap_or(1.0);
        num / den
    })
}

/// Parses `p/q`, an integer, or a decimal with at most 18 fractional digits.
/// The flag reports whether the text was written as a decimal.
pub fn parse_rational(text: &str) -> Option<(Q, bool)> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some((Q::new(n, d), false));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || fp.len() > 18 || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if !ip.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp).parse().ok()?;
        let v = Q::new(digits, BigInt::from(10u32).pow(fp.len() as u32));
        return Some((if neg { -v } else { v }, true));
    }
    let n: BigInt = t.parse().ok()?;
    Some((Q::from_integer(n), false))
}

pub fn fmt_rational(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LengthSymbol {
    pub name: String,
    /// Declared value. For approximate symbols this is the decimal as written.
    pub value: Q,
    pub exact: bool,
    pub approx: f64,
}

impl LengthSymbol {
    pub fn exact(name: &str, value: Q) -> Self {
        let approx = q_to_f64(&value);
        LengthSymbol { name: name.to_string(), value, exact: true, approx }
    }

    pub fn approximate(name: &str, value: Q) -> Self {
        let approx = q_to_f64(&value);
        LengthSymbol { name: name.to_string(), value, exact: false, approx }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LengthSet {
    symbols: Vec<LengthSymbol>,
    /// position of each approximate symbol in the irrational part of a [`Resolved`]
    irr_slot: Vec<Option<usize>>,
    n_irr: usize,
}

impl LengthSet {
    pub fn new(symbols: Vec<LengthSymbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidRep("length set is empty".into()));
        }
        let mut seen = HashMap::new();
        for s in &symbols {
            if !s.value.is_positive() {
                return Err(Error::InvalidRep(format!("length `{}` is not positive", s.name)));
            }
            if seen.insert(s.name.clone(), ()).is_some() {
                return Err(Error::InvalidRep(format!("length `{}` declared twice", s.name)));
            }
        }
        let mut n_irr = 0;
        let irr_slot = symbols
            .iter()
            .map(|s| {
                if s.exact {
                    None
                } else {
                    n_irr += 1;
                    Some(n_irr - 1)
                }
            })
            .collect();
        Ok(LengthSet { symbols, irr_slot, n_irr })
    }

    /// Shorthand: every `(name, value)` pair exact.
    pub fn exact(pairs: &[(&str, Q)]) -> Self {
        LengthSet::new(pairs.iter().map(|(n, v)| LengthSymbol::exact(n, v.clone())).collect())
            .expect("valid exact length set")
    }

    pub fn unit() -> Self {
        LengthSet::exact(&[("u", qi(1))])
    }

    pub fn symbols(&self) -> &[LengthSymbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn all_exact(&self) -> bool {
        self.n_irr == 0
    }

    pub fn max_approx(&self) -> f64 {
        self.symbols.iter().map(|s| s.approx).fold(f64::MIN, f64::max)
    }

    /// Length of a symbol as a coordinate.
    pub fn length(&self, idx: usize) -> Coord {
        Coord::symbol(idx)
    }

    pub fn resolve(&self, c: &Coord) -> Resolved {
        let mut rat = c.const_part.clone();
        let mut irr = vec![Q::zero(); self.n_irr];
        let mut approx = q_to_f64(&c.const_part);
        for (i, k) in &c.coeffs {
            let s = &self.symbols[*i];
            approx += q_to_f64(k) * s.approx;
            match self.irr_slot[*i] {
                None => rat += k * &s.value,
                Some(slot) => irr[slot] += k,
            }
        }
        Resolved { rat, irr, approx }
    }

    pub fn approx(&self, c: &Coord) -> f64 {
        let mut a = q_to_f64(&c.const_part);
        for (i, k) in &c.coeffs {
            a += q_to_f64(k) * self.symbols[*i].approx;
        }
        a
    }

    pub fn fmt_coord(&self, c: &Coord) -> String {
        let mut out = if c.const_part.is_zero() && !c.coeffs.is_empty() { String::new() } else { fmt_rational(&c.const_part) };
        for (i, k) in &c.coeffs {
            if k.is_negative() {
                out.push_str(&format!("-{}*{}", fmt_rational(&-k), self.symbols[*i].name));
            } else {
                let sep = if out.is_empty() { "" } else { "+" };
                out.push_str(&format!("{sep}{}*{}", fmt_rational(k), self.symbols[*i].name));
            }
        }
        out
    }

    /// Parses `c0 (+|-) c1*sym (+|-) ...` where every `ci` is a rational.
    pub fn parse_coord(&self, text: &str) -> Result<Coord> {
        let bad = |m: String| parse_err(0, 0, m);
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = t.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/' && bytes[i - 1] != b'*' {
                terms.push(&t[start..i]);
                start = i;
            }
        }
        terms.push(&t[start..]);
        let mut c = Coord::zero();
        for term in terms {
            let term = term.strip_prefix('+').unwrap_or(term);
            if term.is_empty() {
                return Err(bad(format!("empty term in `{text}`")));
            }
            if let Some((k, sym)) = term.split_once('*') {
                let (k, _) = parse_rational(k).ok_or_else(|| bad(format!("bad coefficient `{k}`")))?;
                let idx = self.index_of(sym).ok_or_else(|| bad(format!("unknown length `{sym}`")))?;
                c = &c + &Coord::symbol(idx).scale(&k);
            } else if let Some(idx) = self.index_of(term.trim_start_matches('-')) {
                let k = if term.starts_with('-') { qi(-1) } else { qi(1) };
                c = &c + &Coord::symbol(idx).scale(&k);
            } else {
                let (k, _) = parse_rational(term).ok_or_else(|| bad(format!("bad term `{term}`")))?;
                c = &c + &Coord::constant(k);
            }
        }
        Ok(c)
    }
}

/// Rational constant plus sparse rational coefficients over symbol indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coord {
    pub const_part: Q,
    /// sorted by index, no zero entries
    pub coeffs: Vec<(usize, Q)>,
}

impl Coord {
    pub fn zero() -> Self {
        Coord { const_part: Q::zero(), coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        Coord { const_part: c, coeffs: Vec::new() }
    }

    pub fn int(n: i64) -> Self {
        Coord::constant(qi(n))
    }

    pub fn symbol(idx: usize) -> Self {
        Coord { const_part: Q::zero(), coeffs: vec![(idx, Q::one())] }
    }

    pub fn from_parts(const_part: Q, coeffs: impl IntoIterator<Item = (usize, Q)>) -> Self {
        let mut c = Coord::constant(const_part);
        for (i, k) in coeffs {
            c = &c + &Coord { const_part: Q::zero(), coeffs: vec![(i, k)] };
        }
        c.coeffs.retain(|(_, k)| !k.is_zero());
        c
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, idx: usize) -> Q {
        self.coeffs
            .iter()
            .find(|(i, _)| *i == idx)
            .map(|(_, k)| k.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, k: &Q) -> Coord {
        if k.is_zero() {
            return Coord::zero();
        }
        Coord {
            const_part: &self.const_part * k,
            coeffs: self.coeffs.iter().map(|(i, c)| (*i, c * k)).collect(),
        }
    }

    fn combine(&self, other: &Coord, sign: i32) -> Coord {
        let mut out = Vec::with_capacity(self.coeffs.len() + other.coeffs.len());
        let (mut a, mut b) = (self.coeffs.iter().peekable(), other.coeffs.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => match i.cmp(j) {
                    Ordering::Less => {
                        out.push((*i, x.clone()));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((*j, if sign > 0 { y.clone() } else { -y }));
                        b.next();
                    }
                    Ordering::Equal => {
                        let v = if sign > 0 { x + y } else { x - y };
                        if !v.is_zero() {
                            out.push((*i, v));
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, if sign > 0 { y.clone() } else { -y }));
                    b.next();
                }
                (None, None) => break,
            }
        }
        let const_part = if sign > 0 { &self.const_part + &other.const_part } else { &self.const_part - &other.const_part };
        Coord { const_part, coeffs: out }
    }
}

impl Add for &Coord {
    type Output = Coord;
    fn add(self, o: &Coord) -> Coord {
        self.combine(o, 1)
    }
}

impl Sub for &Coord {
    type Output = Coord;
    fn sub(self, o: &Coord) -> Coord {
        self.combine(o, -1)
    }
}

impl Neg for &Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        self.scale(&qi(-1))
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_rational(&self.const_part))?;
        for (i, k) in &self.coeffs {
            write!(f, "{:+}*#{}", q_to_f64(k), i)?;
        }
        Ok(())
    }
}

/// A coordinate with every exact symbol folded into the rational part.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub rat: Q,
    /// coefficients of the approximate symbols, dense
    pub irr: Vec<Q>,
    pub approx: f64,
}

impl Resolved {
    pub fn sub(&self, o: &Resolved) -> Resolved {
        Resolved {
            rat: &self.rat - &o.rat,
            irr: self.irr.iter().zip(&o.irr).map(|(a, b)| a - b).collect(),
            approx: self.approx - o.approx,
        }
    }

    pub fn add(&self, o: &Resolved) -> Resolved {
        Resolved {
            rat: &self.rat + &o.rat,
            irr: self.irr.iter().zip(&o.irr).map(|(a, b)| a + b).collect(),
            approx: self.approx + o.approx,
        }
    }

    pub fn key(&self) -> (Q, Vec<Q>) {
        (self.rat.clone(), self.irr.clone())
    }

    /// Exact sign if the irrational part vanishes.
    pub fn exact_sign(&self) -> Option<Ordering> {
        if self.irr.iter().all(|k| k.is_zero()) {
            Some(self.rat.cmp(&Q::zero()))
        } else {
            None
        }
    }
}

pub fn compare_resolved(x: &Resolved, y: &Resolved, tol: f64) -> Result<Ordering> {
    let diff = x.approx - y.approx;
    if diff.abs() > tol {
        return Ok(if diff > 0.0 { Ordering::Greater } else { Ordering::Less });
    }
    if x.irr == y.irr {
        return Ok(x.rat.cmp(&y.rat));
    }
    Err(Error::Precision { lhs: format!("{:.17}", x.approx), rhs: format!("{:.17}", y.approx), tol })
}

/// Sign of `Σ pos - Σ neg`, computed exactly only when the approximation is inconclusive.
pub fn compare_sums(pos: &[&Resolved], neg: &[&Resolved], tol: f64) -> Result<Ordering> {
    let approx: f64 = pos.iter().map(|r| r.approx).sum::<f64>() - neg.iter().map(|r| r.approx).sum::<f64>();
    if approx.abs() > tol {
        return Ok(if approx > 0.0 { Ordering::Greater } else { Ordering::Less });
    }
    let (mut rat, mut irr) = (Q::zero(), vec![Q::zero(); pos.iter().chain(neg).map(|r| r.irr.len()).max().unwrap_or(0)]);
    for (r, sign) in pos.iter().map(|r| (r, 1)).chain(neg.iter().map(|r| (r, -1))) {
        if sign > 0 {
            rat += &r.rat;
        } else {
            rat -= &r.rat;
        }
        for (acc, k) in irr.iter_mut().zip(&r.irr) {
            if sign > 0 {
                *acc += k;
            } else {
                *acc -= k;
            }
        }
    }
    if irr.iter().all(Zero::is_zero) {
        return Ok(rat.cmp(&Q::zero()));
    }
    Err(Error::Precision { lhs: format!("{approx:.17}"), rhs: "0".into(), tol })
}

pub fn coord_compare(ls: &LengthSet, x: &Coord, y: &Coord, tol: f64) -> Result<Ordering> {
    if x == y {
        return Ok(Ordering::Equal);
    }
    compare_resolved(&ls.resolve(x), &ls.resolve(y), tol)
        .map_err(|_| Error::Precision { lhs: ls.fmt_coord(x), rhs: ls.fmt_coord(y), tol })
}

/// Permutation sorting `keys` by value; exactly equal values keep index order.
pub fn sort_by_value(keys: &[Resolved], tol: f64) -> Result<Vec<usize>> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| keys[a].approx.partial_cmp(&keys[b].approx).expect("finite").then(a.cmp(&b)));
    let mut i = 0;
    while i < idx.len() {
        let mut j = i + 1;
        while j < idx.len() && keys[idx[j]].approx - keys[idx[j - 1]].approx <= tol {
            if keys[idx[j]].irr != keys[idx[j - 1]].irr {
                return Err(Error::Precision {
                    lhs: format!("{:.17}", keys[idx[j - 1]].approx),
                    rhs: format!("{:.17}", keys[idx[j]].approx),
                    tol,
                });
            }
            j += 1;
        }
        idx[i..j].sort_by(|&a, &b| keys[a].rat.cmp(&keys[b].rat).then(a.cmp(&b)));
        i = j;
    }
    Ok(idx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LkElement {
    pub value: Coord,
    pub weight: u32,
}

/// Number of integer vectors of dimension `m` with L1 norm at most `k`.
pub fn count_l1_ball(m: usize, k: u32) -> u128 {
    // ways[j] = vectors in current dimension with norm exactly j
    let k = k as usize;
    let mut ways = vec![0u128; k + 1];
    ways[0] = 1;
    for _ in 0..m {
        let mut next = vec![0u128; k + 1];
        for (j, w) in ways.iter().enumerate() {
            if *w == 0 {
                continue;
            }
            next[j] = next[j].saturating_add(*w);
            for c in 1..=(k - j) {
                next[j + c] = next[j + c].saturating_add(w.saturating_mul(2));
            }
        }
        ways = next;
    }
    ways.iter().fold(0u128, |a, b| a.saturating_add(*b))
}

/// `L^(k)` with exact value merging, sorted by value.
#[derive(Debug, Clone)]
pub struct LkTable {
    pub k: u32,
    pub elements: Vec<LkElement>,
    resolved: Vec<Resolved>,
    by_key: HashMap<(Q, Vec<Q>), usize>,
}

fn for_each_l1_vector(m: usize, k: i64, f: &mut impl FnMut(&[i64])) {
    fn rec(v: &mut Vec<i64>, m: usize, left: i64, f: &mut impl FnMut(&[i64])) {
        if v.len() == m {
            f(v);
            return;
        }
        for c in -left..=left {
            v.push(c);
            rec(v, m, left - c.abs(), f);
            v.pop();
        }
    }
    rec(&mut Vec::with_capacity(m), m, k, f);
}

impl LkTable {
    pub fn build(ls: &LengthSet, k: u32, tol: f64, budget: u128) -> Result<Self> {
        let needed = count_l1_ball(ls.len(), k);
        if needed > budget {
            return Err(Error::Budget { what: "L^(k) enumeration", needed, limit: budget });
        }
        let mut merged: HashMap<(Q, Vec<Q>), (Coord, u32)> = HashMap::new();
        let mut order = Vec::new();
        for_each_l1_vector(ls.len(), k as i64, &mut |v| {
            let weight = v.iter().map(|c| c.unsigned_abs() as u32).sum();
            let value = Coord::from_parts(Q::zero(), v.iter().enumerate().map(|(i, c)| (i, qi(*c))));
            let key = ls.resolve(&value).key();
            match merged.get_mut(&key) {
                Some(e) => {
                    if weight < e.1 {
                        *e = (value, weight);
                    }
                }
                None => {
                    order.push(key.clone());
                    merged.insert(key, (value, weight));
                }
            }
        });
        let mut items: Vec<(Resolved, LkElement)> = order
            .into_iter()
            .map(|key| {
                let (value, weight) = merged.remove(&key).expect("key present");
                (ls.resolve(&value), LkElement { value, weight })
            })
            .collect();
        items.sort_by(|a, b| a.0.approx.partial_cmp(&b.0.approx).expect("finite"));
        // near-ties must be decidable exactly; reorder such runs by the exact value
        let mut i = 0;
        while i < items.len() {
            let mut j = i + 1;
            while j < items.len() && items[j].0.approx - items[j - 1].0.approx <= tol {
                if items[j].0.irr != items[j - 1].0.irr {
                    return Err(Error::Precision {
                        lhs: ls.fmt_coord(&items[j - 1].1.value),
                        rhs: ls.fmt_coord(&items[j].1.value),
                        tol,
                    });
                }
                j += 1;
            }
            items[i..j].sort_by(|a, b| a.0.rat.cmp(&b.0.rat));
            i = j;
        }
        let by_key = items.iter().enumerate().map(|(i, (r, _))| (r.key(), i)).collect();
        let (resolved, elements) = items.into_iter().unzip();
        Ok(LkTable { k, elements, resolved, by_key })
    }

    pub fn resolved(&self) -> &[Resolved] {
        &self.resolved
    }

    /// Index of the element equal to `x`, `None` if `x` is provably not in the table.
    pub fn find(&self, x: &Resolved, tol: f64) -> Result<Option<usize>> {
        if let Some(&i) = self.by_key.get(&x.key()) {
            return Ok(Some(i));
        }
        let p = self.resolved.partition_point(|r| r.approx < x.approx - tol);
        for r in self.resolved[p..].iter().take_while(|r| r.approx <= x.approx + tol) {
            if r.irr != x.irr {
                return Err(Error::Precision { lhs: format!("{}", r.approx), rhs: format!("{}", x.approx), tol });
            }
        }
        Ok(None)
    }

    pub fn min_positive(&self) -> Option<&LkElement> {
        let zero = self.resolved.iter().position(|r| r.rat.is_zero() && r.irr.iter().all(Q::is_zero))?;
        self.elements.get(zero + 1)
    }
}

pub fn enumerate_lk(ls: &LengthSet, k: u32, tol: f64) -> Result<Vec<LkElement>> {
    Ok(LkTable::build(ls, k, tol, DEFAULT_LK_BUDGET)?.elements)
}

/// Minimum weight `k <= cutoff` with `c - a` in `L^(k)`; `None` stands for infinity.
pub fn l_distance(a: &Coord, c: &Coord, ls: &LengthSet, cutoff: u32, tol: f64) -> Result<Option<u32>> {
    let table = LkTable::build(ls, cutoff, tol, DEFAULT_LK_BUDGET)?;
    let diff = ls.resolve(&(c - a));
    Ok(table.find(&diff, tol)?.map(|i| table.elements[i].weight))
}

/// Smallest positive element of `L^(m)`.
pub fn min_positive_in(ls: &LengthSet, m: u32, tol: f64, budget: u128) -> Result<Coord> {
    let table = LkTable::build(ls, m, tol, budget)?;
    table
        .min_positive()
        .map(|e| e.value.clone())
        .ok_or_else(|| Error::Invalid("no positive element".into()))
}

pub fn min_positive_epsilon(ls: &LengthSet, d: u32, tol: f64) -> Result<Coord> {
    let m = 1u32.checked_shl(d + 1).filter(|m| *m < 1 << 20).ok_or(Error::Budget {
        what: "L^(k) enumeration",
        needed: u128::MAX,
        limit: DEFAULT_LK_BUDGET,
    })?;
    min_positive_in(ls, m, tol, DEFAULT_LK_BUDGET)
}

/// Largest rational `a` such that every (rational) value is an integer multiple of `a`.
pub fn rational_gcd(values: &[Q]) -> Option<Q> {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for v in values {
        let v = v.abs();
        num = num.gcd(v.numer());
        den = den.lcm(v.denom());
    }
    if num.is_zero() {
        None
    } else {
        Some(Q::new(num, den))
    }
}

pub fn ceil_q(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

pub fn floor_q(x: &Q) -> BigInt {
    x.floor().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> LengthSet {
        LengthSet::new(vec![
            LengthSymbol::exact("u", qi(1)),
            LengthSymbol::approximate("q", parse_rational("1.41421356").unwrap().0),
        ])
        .unwrap()
    }

    #[test]
    fn compare_examples() {
        let ls = sqrt2();
        let qc = Coord::symbol(1);
        assert_eq!(coord_compare(&ls, &qc, &qc, DEFAULT_TOL).unwrap(), Ordering::Equal);
        let a = Coord::constant(q(3, 2));
        let b = &Coord::int(1) + &Coord::symbol(1).scale(&Q::zero());
        assert_eq!(coord_compare(&ls, &a, &b, DEFAULT_TOL).unwrap(), Ordering::Greater);
        let c = &Coord::int(1) + &qc;
        assert_eq!(coord_compare(&ls, &c, &Coord::constant(q(5, 2)), 1e-9).unwrap(), Ordering::Less);
    }

    #[test]
    fn near_collision_is_an_error() {
        let ls = sqrt2();
        let c = Coord::symbol(1);
        let r = Coord::constant(parse_rational("1.41421356").unwrap().0);
        assert!(matches!(coord_compare(&ls, &c, &r, 1e-9), Err(Error::Precision { .. })));
    }

    #[test]
    fn exact_symbols_fold() {
        let ls = LengthSet::exact(&[("a", qi(1)), ("b", qi(2))]);
        let two_a = Coord::symbol(0).scale(&qi(2));
        assert_eq!(coord_compare(&ls, &two_a, &Coord::symbol(1), 1e-9).unwrap(), Ordering::Equal);
    }

    #[test]
    fn parse_and_format() {
        let ls = sqrt2();
        let c = ls.parse_coord("1/2+1*q").unwrap();
        assert_eq!(c.const_part, q(1, 2));
        assert_eq!(c.coeff(1), qi(1));
        assert_eq!(ls.parse_coord(&ls.fmt_coord(&c)).unwrap(), c);
        let d = ls.parse_coord("-3/4-2*q+u").unwrap();
        assert_eq!(d.coeff(1), qi(-2));
        assert_eq!(d.coeff(0), qi(1));
        assert_eq!(ls.parse_coord(&ls.fmt_coord(&d)).unwrap(), d);
        assert_eq!(parse_rational("0.125").unwrap(), (q(1, 8), true));
        assert_eq!(parse_rational("-7/14").unwrap(), (q(-1, 2), false));
        assert!(parse_rational("1.0000000000000000001").is_none());
    }

    #[test]
    fn lk_examples() {
        let one = LengthSet::unit();
        let l0 = enumerate_lk(&one, 0, DEFAULT_TOL).unwrap();
        assert_eq!(l0.len(), 1);
        assert!(l0[0].value.coeffs.is_empty());
        let l2: Vec<Q> = enumerate_lk(&one, 2, DEFAULT_TOL)
            .unwrap()
            .iter()
            .map(|e| one.resolve(&e.value).rat)
            .collect();
        assert_eq!(l2, (-2..=2).map(qi).collect::<Vec<_>>());
        let ls = LengthSet::exact(&[("u", qi(1)), ("h", q(3, 2))]);
        let vals: Vec<Q> = enumerate_lk(&ls, 2, DEFAULT_TOL)
            .unwrap()
            .iter()
            .map(|e| ls.resolve(&e.value).rat)
            .collect();
        let want: Vec<Q> = (-6..=6).map(|i| q(i, 2)).collect();
        assert_eq!(vals, want);
    }

    #[test]
    fn l_distance_examples() {
        let ls = LengthSet::exact(&[("u", qi(1)), ("h", q(3, 2))]);
        let z = Coord::zero();
        assert_eq!(l_distance(&z, &z, &ls, 4, DEFAULT_TOL).unwrap(), Some(0));
        assert_eq!(l_distance(&z, &Coord::constant(q(5, 2)), &ls, 4, DEFAULT_TOL).unwrap(), Some(2));
        let one = LengthSet::unit();
        assert_eq!(l_distance(&z, &Coord::constant(q(1, 3)), &one, 8, DEFAULT_TOL).unwrap(), None);
    }

    #[test]
    fn epsilon_examples() {
        let one = LengthSet::unit();
        assert_eq!(one.resolve(&min_positive_epsilon(&one, 3, DEFAULT_TOL).unwrap()).rat, qi(1));
        let ls = LengthSet::exact(&[("u", qi(1)), ("h", q(3, 2))]);
        assert_eq!(ls.resolve(&min_positive_epsilon(&ls, 0, DEFAULT_TOL).unwrap()).rat, q(1, 2));
        let ls = LengthSet::exact(&[("a", qi(1)), ("b", qi(2))]);
        assert_eq!(ls.resolve(&min_positive_epsilon(&ls, 1, DEFAULT_TOL).unwrap()).rat, qi(1));
    }

    #[test]
    fn ball_counts() {
        assert_eq!(count_l1_ball(1, 3), 7);
        assert_eq!(count_l1_ball(2, 2), 13);
        assert_eq!(count_l1_ball(0, 5), 1);
        let mut n = 0u128;
        for_each_l1_vector(3, 4, &mut |_| n += 1);
        assert_eq!(n, count_l1_ball(3, 4));
    }

    #[test]
    fn budget_guard() {
        let ls = LengthSet::exact(&[("a", qi(1)), ("b", q(1, 3)), ("c", q(1, 7))]);
        assert!(matches!(LkTable::build(&ls, 200, DEFAULT_TOL, 1000), Err(Error::Budget { .. })));
    }

    #[test]
    fn gcd_of_rationals() {
        assert_eq!(rational_gcd(&[q(1, 2), q(3, 4)]).unwrap(), q(1, 4));
        assert_eq!(rational_gcd(&[qi(1), q(3, 2)]).unwrap(), q(1, 2));
        assert_eq!(rational_gcd(&[qi(4), qi(6)]).unwrap(), qi(2));
    }
}
