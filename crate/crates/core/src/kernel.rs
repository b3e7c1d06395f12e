//! Kernelization of L-interval representations preserving rank-d FO theories.
//!
//! Left end points are made distinct, then the densest run of `k` consecutive
//! left ends (kept in a min-heap) anchors a family of windows `[a+o, a+o+μ)`
//! for `o ∈ L^(2^(d+1))`. A vertex of the anchor window is removed once the
//! ordered window structure `W` provably has the same rank-d type with and
//! without it.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use num_traits::{ToPrimitive, Zero};

use crate::ef::{equivalent_rank_d, TypeInterner, DEFAULT_TYPE_BUDGET};
use crate::error::{Error, Result};
use crate::interval::{build_graph, density_profile, perturb_distinct, IntervalRep};
use crate::logic::{evaluate, Assignment, Formula, RelStructure};
use crate::numerics::{
    ceil_q, compare_resolved, compare_sums, q, sort_by_value, Coord, LkElement, LkTable, Resolved, Q, DEFAULT_LK_BUDGET, DEFAULT_TOL,
};

pub const DEFAULT_K_WORK: usize = 16;
pub const DEFAULT_K_CEILING: usize = 128;
/// Largest window structure whose type is computed before the window is narrowed.
pub const DEFAULT_W_CAP: usize = 160;
pub const PARANOID_MAX_VERTICES: usize = 20;

pub const LEQ: &str = "leq";
pub const TIE: &str = "tie";

#[derive(Debug, Clone)]
pub struct KernelConfig {
    pub d: u32,
    pub k_work: usize,
    pub k_ceiling: usize,
    pub tol: f64,
    pub lk_budget: u128,
    pub type_budget: u64,
    pub w_cap: usize,
    pub paranoid: bool,
}

impl KernelConfig {
    pub fn new(d: u32) -> Self {
        KernelConfig {
            d,
            k_work: DEFAULT_K_WORK,
            k_ceiling: DEFAULT_K_CEILING,
            tol: DEFAULT_TOL,
            lk_budget: DEFAULT_LK_BUDGET,
            type_budget: DEFAULT_TYPE_BUDGET,
            w_cap: DEFAULT_W_CAP,
            paranoid: false,
        }
    }
}

/// Window width used by the kernel: the smallest positive element of `L^(2^(d+2)+1)`.
///
/// Offsets of two windows differ by an element of `L^(2^(d+2))`, so windows are
/// disjoint; and `ℓ(w') + λ' - ℓ(w)` is an offset difference plus a length, so
/// its sign is fixed by the window labels unless that combination is zero, in
/// which case the `leq`/`tie` order decides it.
pub fn kernel_epsilon(ls: &crate::numerics::LengthSet, d: u32, tol: f64, budget: u128) -> Result<Coord> {
    let m = 1u32
        .checked_shl(d + 2)
        .and_then(|m| m.checked_add(1))
        .ok_or(Error::Budget { what: "L^(k) enumeration", needed: u128::MAX, limit: budget })?;
    crate::numerics::min_positive_in(ls, m, tol, budget)
}

fn offsets_weight(d: u32) -> Result<u32> {
    1u32.checked_shl(d + 1)
        .ok_or(Error::Budget { what: "L^(k) enumeration", needed: u128::MAX, limit: DEFAULT_LK_BUDGET })
}

#[derive(Debug, Clone)]
pub struct Window {
    pub offset: LkElement,
    /// members as vertex indices of the representation
    pub members: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct WindowFamily {
    pub anchor: Coord,
    pub width: Coord,
    /// nonempty windows only, by increasing offset
    pub windows: Vec<Window>,
    /// index into `windows` of the window at offset zero, if nonempty
    pub target: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct OrderedWindowStructure {
    /// domain ordered by `leq`
    pub structure: RelStructure,
    /// representation vertex of each element
    pub vertex: Vec<usize>,
    /// window (index into the family) of each element
    pub window: Vec<usize>,
}

impl OrderedWindowStructure {
    pub fn len(&self) -> usize {
        self.vertex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex.is_empty()
    }

    /// Elements in window `w`, highest order position first.
    pub fn members_desc(&self, w: usize) -> Vec<usize> {
        (0..self.len()).rev().filter(|&e| self.window[e] == w).collect()
    }

    pub fn without(&self, e: usize) -> RelStructure {
        let keep: Vec<usize> = (0..self.len()).filter(|&x| x != e).collect();
        self.structure.induced(&keep)
    }
}

fn window_label(rep: &IntervalRep, o: &LkElement) -> String {
    format!("win[{}]", rep.lengths.fmt_coord(&o.value))
}

fn length_label(rep: &IntervalRep, len: usize) -> String {
    format!("len[{}]", rep.lengths.symbols()[len].name)
}

/// First position in `sorted` whose value is `>= Σ shift`.
fn lower_bound(sorted: &[Resolved], shift: &[&Resolved], tol: f64) -> Result<usize> {
    let (mut lo, mut hi) = (0, sorted.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if compare_sums(&[&sorted[mid]], shift, tol)? == Ordering::Less {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Sorted view of the left end points with a removable alive set.
struct Sweep<'r> {
    rep: &'r IntervalRep,
    /// vertex index at each rank
    order: Vec<usize>,
    rank: Vec<usize>,
    sorted: Vec<Resolved>,
    alive: BTreeSet<usize>,
}

/// Window family with its elements in `leq` order, before the structure is built.
struct Draft {
    family: WindowFamily,
    /// (vertex, window) per element
    elems: Vec<(usize, usize)>,
    /// element ties with its predecessor
    tie_prev: Vec<bool>,
    signature: Vec<u64>,
}

impl<'r> Sweep<'r> {
    fn new(rep: &'r IntervalRep, tol: f64) -> Result<Self> {
        let lefts = rep.resolved_lefts();
        let order = sort_by_value(&lefts, tol)?;
        let sorted = order.iter().map(|&v| lefts[v].clone()).collect();
        let alive = (0..order.len()).collect();
        let mut rank = vec![0; order.len()];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        Ok(Sweep { rep, order, rank, sorted, alive })
    }

    fn draft(&self, anchor: &Coord, width: &Coord, offsets: &LkTable, tol: f64) -> Result<Draft> {
        let ls = &self.rep.lengths;
        let a = ls.resolve(anchor);
        let mu = ls.resolve(width);
        let ors = offsets.resolved();
        let mut windows = Vec::new();
        let mut offset_index = Vec::new();
        let mut target = None;
        // (rank, offset index, window)
        let mut elems: Vec<(usize, usize, usize)> = Vec::new();
        for (oi, (o, or)) in offsets.elements.iter().zip(ors).enumerate() {
            let from = lower_bound(&self.sorted, &[&a, or], tol)?;
            let to = lower_bound(&self.sorted, &[&a, or, &mu], tol)?;
            let ranks: Vec<usize> = self.alive.range(from..to).copied().collect();
            if ranks.is_empty() {
                continue;
            }
            let wi = windows.len();
            if o.weight == 0 {
                target = Some(wi);
            }
            elems.extend(ranks.iter().map(|&r| (r, oi, wi)));
            windows.push(Window { offset: o.clone(), members: ranks.iter().map(|&r| self.order[r]).collect() });
            offset_index.push(oi as u64);
        }
        // fraction ℓ(w) - i(w) minus the common anchor; equal fractions go by vertex id
        let id = |e: &(usize, usize, usize)| &self.rep.vertices[self.order[e.0]].id;
        let approx = |e: &(usize, usize, usize)| self.sorted[e.0].approx - ors[e.1].approx;
        elems.sort_by(|x, y| approx(x).partial_cmp(&approx(y)).expect("finite").then_with(|| id(x).cmp(id(y))));
        let n = elems.len();
        let mut tie_prev = vec![false; n];
        let mut i = 0;
        while i < n {
            let mut j = i + 1;
            while j < n && approx(&elems[j]) - approx(&elems[j - 1]) <= tol {
                j += 1;
            }
            if j > i + 1 {
                let exact: Vec<Resolved> = elems[i..j].iter().map(|e| self.sorted[e.0].sub(&ors[e.1])).collect();
                if exact.iter().any(|x| x.irr != exact[0].irr) {
                    return Err(Error::Precision {
                        lhs: format!("{:.17}", approx(&elems[i])),
                        rhs: format!("{:.17}", approx(&elems[j - 1])),
                        tol,
                    });
                }
                let mut run: Vec<(Q, (usize, usize, usize))> =
                    exact.into_iter().map(|x| x.rat).zip(elems[i..j].iter().copied()).collect();
                run.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| id(&x.1).cmp(id(&y.1))));
                for k in 1..run.len() {
                    tie_prev[i + k] = run[k].0 == run[k - 1].0;
                }
                for (k, (_, e)) in run.into_iter().enumerate() {
                    elems[i + k] = e;
                }
            }
            i = j;
        }
        let signature = elems
            .iter()
            .zip(&tie_prev)
            .map(|(e, &t)| offset_index[e.2] << 33 | (self.rep.vertices[self.order[e.0]].len as u64) << 1 | t as u64)
            .collect();
        Ok(Draft {
            family: WindowFamily { anchor: anchor.clone(), width: width.clone(), windows, target },
            elems: elems.iter().map(|e| (self.order[e.0], e.2)).collect(),
            tie_prev,
            signature,
        })
    }

    fn structure(&self, draft: &Draft) -> OrderedWindowStructure {
        let n = draft.elems.len();
        let mut s = RelStructure::new(draft.elems.iter().map(|e| self.rep.vertices[e.0].id.clone()).collect());
        s.add_relation(LEQ, (0..n).flat_map(|i| (i..n).map(move |j| (i, j))));
        let mut ties = Vec::new();
        let mut i = 0;
        while i < n {
            let mut j = i + 1;
            while j < n && draft.tie_prev[j] {
                j += 1;
            }
            ties.extend((i..j).flat_map(|x| (i..j).map(move |y| (x, y))));
            i = j;
        }
        s.add_relation(TIE, ties);
        for (wi, w) in draft.family.windows.iter().enumerate() {
            s.add_label(&window_label(self.rep, &w.offset), (0..n).filter(|&e| draft.elems[e].1 == wi));
        }
        for len in 0..self.rep.lengths.len() {
            let members: Vec<usize> = (0..n).filter(|&e| self.rep.vertices[draft.elems[e].0].len == len).collect();
            if !members.is_empty() {
                s.add_label(&length_label(self.rep, len), members);
            }
        }
        OrderedWindowStructure {
            structure: s,
            vertex: draft.elems.iter().map(|e| e.0).collect(),
            window: draft.elems.iter().map(|e| e.1).collect(),
        }
    }
}

/// Window family anchored at `a` with the kernel width, and its ordered structure.
///
/// Left end points should be distinct (see [`perturb_distinct`]).
pub fn build_window_structure(
    rep: &IntervalRep,
    a: &Coord,
    d: u32,
    tol: f64,
) -> Result<(WindowFamily, OrderedWindowStructure)> {
    let eps = kernel_epsilon(&rep.lengths, d, tol, DEFAULT_LK_BUDGET)?;
    build_window_structure_with_width(rep, a, &eps, d, tol)
}

pub fn build_window_structure_with_width(
    rep: &IntervalRep,
    a: &Coord,
    width: &Coord,
    d: u32,
    tol: f64,
) -> Result<(WindowFamily, OrderedWindowStructure)> {
    let offsets = LkTable::build(&rep.lengths, offsets_weight(d)?, tol, DEFAULT_LK_BUDGET)?;
    let sweep = Sweep::new(rep, tol)?;
    let draft = sweep.draft(a, width, &offsets, tol)?;
    let w = sweep.structure(&draft);
    Ok((draft.family, w))
}

/// First element of window `target`, from the top of the order down, whose removal keeps the rank-d type of `w`.
pub fn find_removable(w: &OrderedWindowStructure, target: usize, d: u32, budget: u64) -> Result<Option<usize>> {
    find_removable_with(w, target, d, budget, |_| Ok(true))
}

fn find_removable_with(
    w: &OrderedWindowStructure,
    target: usize,
    d: u32,
    budget: u64,
    mut accept: impl FnMut(usize) -> Result<bool>,
) -> Result<Option<usize>> {
    let mut types = TypeInterner::new();
    let p = types.prepare(&w.structure);
    let whole = types.rank_type_prepared(&p, &[], d, budget)?;
    for e in w.members_desc(target) {
        let rest = w.without(e);
        let p2 = types.prepare(&rest);
        if types.rank_type_prepared(&p2, &[], d, budget)? == whole && accept(e)? {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

/// Binary min-heap of spans `sorted[end] - sorted[start]`, with stale entries left in place.
struct SpanHeap {
    /// (span, start rank, end rank, version)
    items: Vec<(Resolved, usize, usize, u32)>,
    tol: f64,
}

impl SpanHeap {
    fn less(&self, i: usize, j: usize) -> Result<bool> {
        let (a, b) = (&self.items[i], &self.items[j]);
        Ok(match compare_resolved(&a.0, &b.0, self.tol)? {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => a.1 < b.1,
        })
    }

    fn push(&mut self, sorted: &[Resolved], start: usize, end: usize, version: u32) -> Result<()> {
        self.items.push((sorted[end].sub(&sorted[start]), start, end, version));
        let mut i = self.items.len() - 1;
        while i > 0 {
            let p = (i - 1) / 2;
            if !self.less(i, p)? {
                break;
            }
            self.items.swap(i, p);
            i = p;
        }
        Ok(())
    }

    fn pop(&mut self) -> Result<Option<(Resolved, usize, usize, u32)>> {
        if self.items.is_empty() {
            return Ok(None);
        }
        let top = self.items.swap_remove(0);
        let n = self.items.len();
        let mut i = 0;
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut m = i;
            if l < n && self.less(l, m)? {
                m = l;
            }
            if r < n && self.less(r, m)? {
                m = r;
            }
            if m == i {
                break;
            }
            self.items.swap(i, m);
            i = m;
        }
        Ok(Some(top))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedWindow {
    pub anchor: String,
    pub k_eff: usize,
}

#[derive(Debug, Clone)]
pub struct KernelReport {
    pub config: KernelConfig,
    pub epsilon: String,
    pub epsilon_approx: f64,
    pub input_vertices: usize,
    pub output_vertices: usize,
    pub removed: Vec<String>,
    pub iterations: usize,
    pub narrowed_windows: usize,
    pub marked: Vec<MarkedWindow>,
    /// largest threshold any position ended with
    pub final_k_work: usize,
    pub guarantee_met: bool,
    pub density_eps: usize,
    pub density_unit: usize,
    pub inv_eps_ceil: u128,
    pub max_degree: usize,
    pub degree_bound: u128,
    pub degree_bound_alt: u128,
    pub paranoid_rejections: usize,
    pub elapsed: Duration,
}

impl KernelReport {
    /// `k·⌈1/ε⌉` for the final threshold.
    pub fn k0(&self) -> u128 {
        self.final_k_work as u128 * self.inv_eps_ceil
    }
}

impl fmt::Display for KernelReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(f, "kernel report")?;
        writeln!(
            f,
            "  config: d={} k_work={} k_ceiling={} tol={:e} lk_budget={} type_budget={} w_cap={} paranoid={}",
            c.d, c.k_work, c.k_ceiling, c.tol, c.lk_budget, c.type_budget, c.w_cap, c.paranoid
        )?;
        writeln!(f, "  epsilon: {} (~{:.6e})", self.epsilon, self.epsilon_approx)?;
        writeln!(f, "  vertices: {} -> {}", self.input_vertices, self.output_vertices)?;
        writeln!(f, "  removals: {}", self.removed.len())?;
        writeln!(f, "  iterations: {} (narrowed windows: {})", self.iterations, self.narrowed_windows)?;
        writeln!(f, "  final k_work: {}", self.final_k_work)?;
        for m in &self.marked {
            writeln!(f, "  marked window at {} (k_eff={})", m.anchor, m.k_eff)?;
        }
        writeln!(f, "  guarantee met: {}", self.guarantee_met)?;
        writeln!(f, "  density per epsilon window: {}", self.density_eps)?;
        writeln!(f, "  density per unit window: {} (K0 = {})", self.density_unit, self.k0())?;
        writeln!(
            f,
            "  max degree: {} (bounds {} and {})",
            self.max_degree, self.degree_bound, self.degree_bound_alt
        )?;
        if c.paranoid {
            writeln!(f, "  paranoid rejections: {}", self.paranoid_rejections)?;
        }
        write!(f, "  elapsed: {:.3}s", self.elapsed.as_secs_f64())
    }
}

pub fn kernelize(rep: &IntervalRep, cfg: &KernelConfig) -> Result<(IntervalRep, KernelReport)> {
    if cfg.k_work == 0 {
        return Err(Error::Invalid("k_work must be at least 1".into()));
    }
    let start = Instant::now();
    let tol = cfg.tol;
    let d = cfg.d;
    rep.validate(tol)?;
    let rep = perturb_distinct(rep, tol)?;
    let ls = &rep.lengths;
    let eps = kernel_epsilon(ls, d, tol, cfg.lk_budget)?;
    let eps_r = ls.resolve(&eps);
    let offsets = LkTable::build(ls, offsets_weight(d)?, tol, cfg.lk_budget)?;
    let mut sweep = Sweep::new(&rep, tol)?;
    let n = rep.len();
    let mut k_eff = vec![cfg.k_work; n];
    let mut max_k = cfg.k_work;
    let mut version = vec![0u32; n];
    let mut heap = SpanHeap { items: Vec::new(), tol };
    let mut removed = Vec::new();
    let mut marked = Vec::new();
    let mut stuck = vec![false; n];
    let (mut iterations, mut narrowed, mut rejections) = (0, 0, 0);
    // isomorphic window structures get the same answer
    let mut decided: HashMap<(usize, Vec<u64>), Option<usize>> = HashMap::new();

    let span_end = |sw: &Sweep, r: usize, k: usize| -> Option<usize> { sw.alive.range(r + 1..).nth(k - 1).copied() };
    for r in 0..n {
        if let Some(e) = span_end(&sweep, r, k_eff[r]) {
            heap.push(&sweep.sorted, r, e, 0)?;
        }
    }
    while let Some((lambda, r, end, ver)) = heap.pop()? {
        if !sweep.alive.contains(&r) || ver != version[r] || stuck[r] {
            continue;
        }
        if compare_resolved(&lambda, &eps_r, tol)? != Ordering::Less {
            break;
        }
        iterations += 1;
        let vr = sweep.order[r];
        let anchor = rep.vertices[vr].left.clone();
        let lambda_c = &rep.vertices[sweep.order[end]].left - &anchor;
        let twice = lambda_c.scale(&q(2, 1));
        let mut width = if compare_resolved(&ls.resolve(&twice), &eps_r, tol)? == Ordering::Less { twice } else { eps.clone() };
        let mut attempt = 0;
        let draft = loop {
            let draft = sweep.draft(&anchor, &width, &offsets, tol)?;
            if draft.elems.len() <= cfg.w_cap || attempt >= 12 {
                break draft;
            }
            narrowed += 1;
            attempt += 1;
            // move the width halfway towards λ; the k+1 anchored points stay inside
            width = (&width + &lambda_c).scale(&q(1, 2));
        };
        let target = draft.family.target.expect("anchor window holds its anchor");
        let mut found = None;
        let check_graph = cfg.paranoid && sweep.alive.len() <= PARANOID_MAX_VERTICES;
        let memo_key = (target, draft.signature.clone());
        if draft.elems.len() <= cfg.w_cap && !check_graph && decided.contains_key(&memo_key) {
            found = decided[&memo_key].map(|e| draft.elems[e].0);
        } else if draft.elems.len() <= cfg.w_cap {
            let w = sweep.structure(&draft);
            let alive_now: Vec<usize> =
                if check_graph { sweep.alive.iter().map(|&x| sweep.order[x]).collect() } else { Vec::new() };
            let hit = find_removable_with(&w, target, d, cfg.type_budget, |e| {
                if !check_graph {
                    return Ok(true);
                }
                let v = w.vertex[e];
                let g = build_graph(&rep.induced(&alive_now), tol)?;
                let rest: Vec<usize> = alive_now.iter().copied().filter(|&x| x != v).collect();
                let h = build_graph(&rep.induced(&rest), tol)?;
                let ok = equivalent_rank_d(&RelStructure::from_graph(&g), &RelStructure::from_graph(&h), d)?;
                if !ok {
                    rejections += 1;
                }
                Ok(ok)
            })?;
            if !check_graph {
                decided.insert(memo_key, hit);
            }
            found = hit.map(|e| w.vertex[e]);
        }
        match found {
            Some(v) => {
                let rv = sweep.rank[v];
                sweep.alive.remove(&rv);
                removed.push(rep.vertices[v].id.clone());
                let mut touch: Vec<usize> = sweep.alive.range(..rv).rev().take(max_k).copied().collect();
                if sweep.alive.contains(&r) && !touch.contains(&r) {
                    touch.push(r);
                }
                for p in touch {
                    if stuck[p] {
                        continue;
                    }
                    version[p] += 1;
                    if let Some(e) = span_end(&sweep, p, k_eff[p]) {
                        heap.push(&sweep.sorted, p, e, version[p])?;
                    }
                }
            }
            None => {
                k_eff[r] *= 2;
                if k_eff[r] > cfg.k_ceiling {
                    stuck[r] = true;
                    marked.push(MarkedWindow { anchor: rep.vertices[vr].id.clone(), k_eff: k_eff[r] / 2 });
                } else {
                    max_k = max_k.max(k_eff[r]);
                    version[r] += 1;
                    if let Some(e) = span_end(&sweep, r, k_eff[r]) {
                        heap.push(&sweep.sorted, r, e, version[r])?;
                    }
                }
            }
        }
    }
    let survivors: Vec<usize> = {
        let mut v: Vec<usize> = sweep.alive.iter().map(|&r| sweep.order[r]).collect();
        v.sort_unstable();
        v
    };
    let out = rep.induced(&survivors);
    let (density_eps, _) = density_profile(&out, &eps, tol)?;
    let (density_unit, _) = density_profile(&out, &Coord::int(1), tol)?;
    let max_degree = build_graph(&out, tol)?.max_degree();
    let inv_eps_ceil = inv_ceil(ls, &eps)?;
    let max_len_ceil = (ls.max_approx() - tol).ceil().max(1.0) as u128;
    let k0 = max_k as u128 * inv_eps_ceil;
    let report = KernelReport {
        config: cfg.clone(),
        epsilon: ls.fmt_coord(&eps),
        epsilon_approx: eps_r.approx,
        input_vertices: n,
        output_vertices: out.len(),
        removed,
        iterations,
        narrowed_windows: narrowed,
        guarantee_met: marked.is_empty(),
        marked,
        final_k_work: max_k,
        density_eps,
        density_unit,
        inv_eps_ceil,
        max_degree,
        degree_bound: k0 * (2 * max_len_ceil + 1),
        degree_bound_alt: k0 * (ls.len() as u128 + 1) * max_len_ceil,
        paranoid_rejections: rejections,
        elapsed: start.elapsed(),
    };
    Ok((out, report))
}

/// `⌈1/ε⌉`; exact for rational ε.
fn inv_ceil(ls: &crate::numerics::LengthSet, eps: &Coord) -> Result<u128> {
    let r = ls.resolve(eps);
    if r.irr.iter().all(Zero::is_zero) {
        let inv = r.rat.recip();
        return ceil_q(&inv).to_u128().ok_or(Error::Invalid("1/epsilon out of range".into()));
    }
    let x = 1.0 / r.approx;
    if (x - x.round()).abs() <= 1e-6 {
        return Err(Error::Precision { lhs: format!("1/{}", r.approx), rhs: format!("{}", x.round()), tol: 1e-6 });
    }
    Ok(x.ceil() as u128)
}

fn check_fo(f: &Formula) -> Result<()> {
    if f.uses_sets() {
        return Err(Error::Dialect("modelcheck accepts first-order sentences only".into()));
    }
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(Error::UnboundVariable(v));
    }
    Ok(())
}

/// Evaluates `sentence` on the kernel for its own quantifier rank.
pub fn modelcheck(rep: &IntervalRep, sentence: &Formula, cfg: &KernelConfig) -> Result<(bool, KernelReport)> {
    check_fo(sentence)?;
    let cfg = KernelConfig { d: sentence.quantifier_rank(), ..cfg.clone() };
    let (kernel, report) = kernelize(rep, &cfg)?;
    let g = build_graph(&kernel, cfg.tol)?;
    Ok((evaluate(sentence, &RelStructure::from_graph(&g), &Assignment::default())?, report))
}

/// Evaluates `sentence` on the full graph of `rep`.
pub fn modelcheck_direct(rep: &IntervalRep, sentence: &Formula, tol: f64) -> Result<bool> {
    check_fo(sentence)?;
    let g = build_graph(rep, tol)?;
    evaluate(sentence, &RelStructure::from_graph(&g), &Assignment::default())
}
