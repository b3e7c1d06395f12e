mod common;

use common::*;
use intervalfo::ef::{equivalent_rank_d, DEFAULT_TYPE_BUDGET};
use intervalfo::interval::{build_graph, density_profile, stacked_unit, IntervalRep};
use intervalfo::kernel::{
    build_window_structure, build_window_structure_with_width, find_removable, kernel_epsilon, kernelize, modelcheck,
    modelcheck_direct, KernelConfig, LEQ, TIE,
};
use intervalfo::logic::{parse_formula, Dialect, RelStructure};
use intervalfo::numerics::{parse_rational, q, qi, Coord, LengthSet, DEFAULT_TOL};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn unit_rep(lefts: &[(i64, i64)]) -> IntervalRep {
    let mut rep = IntervalRep::new(LengthSet::unit());
    for (i, (n, d)) in lefts.iter().enumerate() {
        rep.push(format!("v{i}"), Coord::constant(q(*n, *d)), 0);
    }
    rep
}

fn gstruct(rep: &IntervalRep) -> RelStructure {
    RelStructure::from_graph(&build_graph(rep, DEFAULT_TOL).unwrap())
}

#[test]
fn epsilon_for_unit_lengths() {
    let unit = kernel_epsilon(&LengthSet::unit(), 2, DEFAULT_TOL, 1_000_000).unwrap();
    assert_eq!(LengthSet::unit().resolve(&unit).rat, qi(1));
    let half = kernel_epsilon(&LengthSet::exact(&[("u", qi(1)), ("h", q(3, 2))]), 1, DEFAULT_TOL, 1_000_000).unwrap();
    assert_eq!(LengthSet::exact(&[("u", qi(1)), ("h", q(3, 2))]).resolve(&half).rat, q(1, 2));
}

#[test]
fn window_structure_examples() {
    // nothing in any window
    let rep = unit_rep(&[(1, 2)]);
    let (_, w) = build_window_structure_with_width(&rep, &Coord::constant(q(1, 10)), &Coord::constant(q(1, 10)), 0, DEFAULT_TOL).unwrap();
    assert!(w.is_empty());

    // offsets are L^(2) for d = 0, so 5.5 lies in no window
    let rep = unit_rep(&[(1, 10), (12, 10), (55, 10)]);
    let (fam, w) = build_window_structure(&rep, &Coord::zero(), 0, DEFAULT_TOL).unwrap();
    assert_eq!(w.structure.domain, vec!["v0", "v1"]);
    let offs: Vec<String> = fam.windows.iter().map(|x| rep.lengths.fmt_coord(&x.offset.value)).collect();
    assert_eq!(offs, vec!["0", "1*u"]);
    assert!(w.structure.relation(LEQ).unwrap().holds(0, 1));
    // with d = 2 the offsets reach 5
    let (_, w) = build_window_structure(&rep, &Coord::zero(), 2, DEFAULT_TOL).unwrap();
    assert_eq!(w.structure.domain, vec!["v0", "v1", "v2"]);
    assert_eq!(w.structure.labels_of(2), vec!["len[u]", "win[5*u]"]);

    // equal fractions: tie relation, order by id
    let (qv, _) = parse_rational(Q_SQRT2).unwrap();
    let ls = length_set(1);
    let mut rep = IntervalRep::new(ls);
    rep.push("b", Coord::constant(q(3, 10)), 0);
    rep.push("a", Coord::from_parts(q(3, 10), [(1, qi(1))]), 1);
    let _ = qv;
    let (_, w) = build_window_structure(&rep, &Coord::constant(q(3, 10)), 0, DEFAULT_TOL).unwrap();
    assert_eq!(w.structure.domain, vec!["a", "b"]);
    assert!(w.structure.relation(TIE).unwrap().holds(0, 1));
}

#[test]
fn find_removable_examples() {
    // a lone element carries the only window label at offset zero
    let rep = unit_rep(&[(1, 10), (13, 10)]);
    let (fam, w) = build_window_structure(&rep, &Coord::constant(q(1, 10)), 1, DEFAULT_TOL).unwrap();
    assert_eq!(find_removable(&w, fam.target.unwrap(), 1, DEFAULT_TYPE_BUDGET).unwrap(), None);

    // ten points of one window: pure linear orders of sizes 10 and 9 agree at rank 2
    let rep = unit_rep(&(1..=10).map(|i| (i, 100)).collect::<Vec<_>>());
    let (fam, w) = build_window_structure(&rep, &Coord::constant(q(1, 100)), 2, DEFAULT_TOL).unwrap();
    assert_eq!(w.len(), 10);
    let e = find_removable(&w, fam.target.unwrap(), 2, DEFAULT_TYPE_BUDGET).unwrap().expect("removable");
    assert!(equivalent_rank_d(&w.structure, &w.without(e), 2).unwrap());
    // d = 0: the first candidate goes
    let (fam, w) = build_window_structure(&rep, &Coord::constant(q(1, 100)), 0, DEFAULT_TOL).unwrap();
    assert_eq!(find_removable(&w, fam.target.unwrap(), 0, DEFAULT_TYPE_BUDGET).unwrap(), Some(w.len() - 1));
}

#[test]
fn sparse_rep_is_unchanged() {
    let rep = unit_rep(&[(0, 1), (3, 1), (6, 1), (1, 2)]);
    let (out, report) = kernelize(&rep, &KernelConfig::new(2)).unwrap();
    assert_eq!(out.ids(), rep.ids());
    assert!(report.removed.is_empty());
    assert!(report.guarantee_met);
}

#[test]
fn stacked_clique_shrinks() {
    let rep = stacked_unit(100);
    let cfg = KernelConfig { k_work: 8, ..KernelConfig::new(2) };
    let (out, report) = kernelize(&rep, &cfg).unwrap();
    assert!((2..=8).contains(&out.len()), "{report}");
    assert!(report.guarantee_met);
    assert!(equivalent_rank_d(&gstruct(&rep), &gstruct(&out), 2).unwrap());
}

#[test]
fn isolated_vertex_survives() {
    let mut rep = stacked_unit(100);
    rep.push("far", Coord::int(5), 0);
    let cfg = KernelConfig { k_work: 4, ..KernelConfig::new(1) };
    let (out, _) = kernelize(&rep, &cfg).unwrap();
    assert!(out.ids().contains(&"far".to_string()));
    assert!(out.len() < 20);
    assert!(equivalent_rank_d(&gstruct(&rep), &gstruct(&out), 1).unwrap());
}

#[test]
fn modelcheck_examples() {
    let cfg = KernelConfig::new(0);
    let f = parse_formula("exists x. x = x", Dialect::Fo).unwrap();
    assert!(modelcheck(&stacked_unit(3), &f, &cfg).unwrap().0);

    let indep = parse_formula("exists x. exists y. (x != y & !E(x,y))", Dialect::Fo).unwrap();
    let rep = stacked_unit(50);
    assert!(!modelcheck(&rep, &indep, &cfg).unwrap().0);
    assert!(!modelcheck_direct(&rep, &indep, DEFAULT_TOL).unwrap());

    let iso = parse_formula("exists x. forall y. (x = y | !E(x,y))", Dialect::Fo).unwrap();
    let mut rep = stacked_unit(50);
    rep.push("lone", Coord::int(10), 0);
    assert!(modelcheck(&rep, &iso, &cfg).unwrap().0);
    assert!(modelcheck_direct(&rep, &iso, DEFAULT_TOL).unwrap());

    let mso = parse_formula("existsS X. exists x. x in X", Dialect::Mso1).unwrap();
    assert!(matches!(modelcheck(&rep, &mso, &cfg), Err(intervalfo::Error::Dialect(_))));
}

#[test]
fn paranoid_mode_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for kind in 0..3 {
        let rep = random_rep(&mut rng, kind, 18);
        let cfg = KernelConfig { k_work: 2, paranoid: true, ..KernelConfig::new(1) };
        let (out, report) = kernelize(&rep, &cfg).unwrap();
        assert_eq!(report.paranoid_rejections, 0, "{report}");
        assert!(equivalent_rank_d(&gstruct(&rep), &gstruct(&out), 1).unwrap());
    }
}

fn check_invariants(rep: &IntervalRep, d: u32, k: usize) -> Result<(), TestCaseError> {
    let cfg = KernelConfig { k_work: k, ..KernelConfig::new(d) };
    let (out, report) = kernelize(rep, &cfg).unwrap();
    let g = build_graph(rep, DEFAULT_TOL).unwrap();
    let h = build_graph(&out, DEFAULT_TOL).unwrap();
    // induced subgraph on the surviving ids
    let ids = out.ids();
    for (a, b) in h.edge_ids() {
        prop_assert!(g.has_edge(g.index_of(&a).unwrap(), g.index_of(&b).unwrap()));
    }
    for (a, b) in g.edge_ids() {
        if ids.contains(&a) && ids.contains(&b) {
            prop_assert!(h.has_edge(h.index_of(&a).unwrap(), h.index_of(&b).unwrap()));
        }
    }
    prop_assert_eq!(report.removed.len() + out.len(), rep.len());
    prop_assert!(report.iterations <= rep.len() * 8);
    prop_assert!(equivalent_rank_d(&structure(&g), &structure(&h), d).unwrap());
    if report.guarantee_met {
        let eps = kernel_epsilon(&rep.lengths, d, DEFAULT_TOL, 1_000_000).unwrap();
        prop_assert!(density_profile(&out, &eps, DEFAULT_TOL).unwrap().0 <= report.final_k_work);
        prop_assert!(report.max_degree as u128 <= report.degree_bound.max(report.degree_bound_alt));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn kernel_invariants(seed in any::<u64>(), kind in 0usize..3, n in 1usize..=24, d in 1u32..=2, k in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = random_rep(&mut rng, kind, n);
        check_invariants(&rep, d, k)?;
    }
}
