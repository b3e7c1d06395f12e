use intervalfo::ef::{
    build_ef_tree, equivalent_rank_d, find_ef_homomorphism, is_ef_homomorphism, minimize_ef_tree, rank_type,
    trees_ef_equivalent, TypeInterner,
};
use intervalfo::interval::Graph;
use intervalfo::logic::{evaluate, parse_formula, Assignment, Dialect, RelStructure};
use proptest::prelude::*;

/// Partial isomorphism check of two tuples, by relation and label names.
fn partial_iso(s1: &RelStructure, s2: &RelStructure, a: &[usize], b: &[usize]) -> bool {
    let k = a.len();
    for i in 0..k {
        for j in 0..k {
            if (a[i] == a[j]) != (b[i] == b[j]) {
                return false;
            }
        }
    }
    let rels: std::collections::BTreeSet<&String> = s1.relation_names().chain(s2.relation_names()).collect();
    for r in rels {
        let h1 = |x: usize, y: usize| s1.relation(r).is_some_and(|rel| rel.holds(x, y));
        let h2 = |x: usize, y: usize| s2.relation(r).is_some_and(|rel| rel.holds(x, y));
        for i in 0..k {
            for j in 0..k {
                if h1(a[i], a[j]) != h2(b[i], b[j]) {
                    return false;
                }
            }
        }
    }
    let labels: std::collections::BTreeSet<&String> = s1.label_names().chain(s2.label_names()).collect();
    for l in labels {
        for i in 0..k {
            let l1 = s1.label(l).is_some_and(|v| v[a[i]]);
            let l2 = s2.label(l).is_some_and(|v| v[b[i]]);
            if l1 != l2 {
                return false;
            }
        }
    }
    true
}

/// Plays the back-and-forth game directly.
fn duplicator_wins(s1: &RelStructure, s2: &RelStructure, a: &mut Vec<usize>, b: &mut Vec<usize>, r: u32) -> bool {
    if !partial_iso(s1, s2, a, b) {
        return false;
    }
    if r == 0 {
        return true;
    }
    let answer = |spoiler_left: bool, a: &mut Vec<usize>, b: &mut Vec<usize>| {
        let (n_sp, n_dup) = if spoiler_left { (s1.len(), s2.len()) } else { (s2.len(), s1.len()) };
        (0..n_sp).all(|x| {
            (0..n_dup).any(|y| {
                let (xa, yb) = if spoiler_left { (x, y) } else { (y, x) };
                a.push(xa);
                b.push(yb);
                let w = duplicator_wins(s1, s2, a, b, r - 1);
                a.pop();
                b.pop();
                w
            })
        })
    };
    answer(true, a, b) && answer(false, a, b)
}

fn game(s1: &RelStructure, s2: &RelStructure, d: u32) -> bool {
    duplicator_wins(s1, s2, &mut Vec::new(), &mut Vec::new(), d)
}

fn graph(n: usize, edges: &[(usize, usize)]) -> RelStructure {
    RelStructure::from_graph(&Graph::from_edges((0..n).map(|i| i.to_string()).collect(), edges.to_vec()))
}

fn clique(n: usize) -> RelStructure {
    let e: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    graph(n, &e)
}

fn structure(max: usize) -> impl Strategy<Value = RelStructure> {
    (1usize..=max)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(any::<bool>(), n * n), prop::collection::vec(any::<bool>(), n)))
        .prop_map(|(n, bits, red)| {
            let e: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| bits[a * n + b]).collect();
            let mut s = graph(n, &e);
            s.add_label("red", (0..n).filter(|&i| red[i]));
            s
        })
}

const SENTENCES: [&str; 8] = [
    "exists x. exists y. x != y",
    "exists x. forall y. (x = y | E(x,y))",
    "exists x. forall y. !E(x,y)",
    "forall x. exists y. E(x,y)",
    "exists x. exists y. (x != y & !E(x,y))",
    "exists x. red(x)",
    "exists x. (red(x) & exists y. (E(x,y) & !red(y)))",
    "forall x. (red(x) -> exists y. E(x,y))",
];

#[test]
fn clique_examples() {
    assert!(equivalent_rank_d(&clique(2), &clique(3), 2).unwrap());
    assert!(game(&clique(2), &clique(3), 2));
    assert!(!equivalent_rank_d(&clique(1), &clique(2), 2).unwrap());
    let p3 = graph(3, &[(0, 1), (1, 2)]);
    assert!(!equivalent_rank_d(&p3, &clique(3), 2).unwrap());
    let witness = parse_formula("exists x. exists y. (x!=y & !E(x,y))", Dialect::Fo).unwrap();
    assert!(evaluate(&witness, &p3, &Assignment::default()).unwrap());
    assert!(!evaluate(&witness, &clique(3), &Assignment::default()).unwrap());
}

#[test]
fn two_element_edgeless_tree() {
    let mut t = TypeInterner::new();
    let tree = build_ef_tree(&RelStructure::with_size(2), 2, &mut t, 100).unwrap();
    let leaves: Vec<usize> = tree.leaves().collect();
    assert_eq!(leaves.len(), 4);
    let equal = leaves.iter().filter(|&&l| t.atomic(tree.nodes[l].atom).unwrap().eq == vec![0, 0]).count();
    assert_eq!(equal, 2);
}

#[test]
fn mutual_homomorphism_without_game_win() {
    // K2 plus an isolated vertex against two disjoint edges
    let a = graph(3, &[(0, 1)]);
    let b = graph(4, &[(0, 1), (2, 3)]);
    assert!(trees_ef_equivalent(&a, &b, 2).unwrap());
    assert!(!game(&a, &b, 2));
    assert!(!equivalent_rank_d(&a, &b, 2).unwrap());
    let isolated = parse_formula("exists x. forall y. !E(x,y)", Dialect::Fo).unwrap();
    assert_ne!(
        evaluate(&isolated, &a, &Assignment::default()).unwrap(),
        evaluate(&isolated, &b, &Assignment::default()).unwrap()
    );
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 150, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn types_match_game(s1 in structure(4), s2 in structure(4), d in 0u32..=2) {
        prop_assert_eq!(equivalent_rank_d(&s1, &s2, d).unwrap(), game(&s1, &s2, d));
    }

    #[test]
    fn equivalence_is_monotone_and_sound(s1 in structure(5), s2 in structure(5), d in 1u32..=2) {
        if equivalent_rank_d(&s1, &s2, d).unwrap() {
            for d2 in 0..d {
                prop_assert!(equivalent_rank_d(&s1, &s2, d2).unwrap());
            }
            for src in SENTENCES {
                let f = parse_formula(src, Dialect::Fo).unwrap();
                if f.quantifier_rank() <= d {
                    prop_assert_eq!(
                        evaluate(&f, &s1, &Assignment::default()).unwrap(),
                        evaluate(&f, &s2, &Assignment::default()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn equivalence_relation(a in structure(4), b in structure(4), c in structure(4), d in 0u32..=2) {
        let ab = equivalent_rank_d(&a, &b, d).unwrap();
        let bc = equivalent_rank_d(&b, &c, d).unwrap();
        prop_assert!(equivalent_rank_d(&a, &a, d).unwrap());
        prop_assert_eq!(ab, equivalent_rank_d(&b, &a, d).unwrap());
        if ab && bc {
            prop_assert!(equivalent_rank_d(&a, &c, d).unwrap());
        }
    }

    #[test]
    fn minimization_is_ef_equivalent(s in structure(4), d in 1u32..=2) {
        let mut t = TypeInterner::new();
        let full = build_ef_tree(&s, d, &mut t, 10_000).unwrap();
        let (min, origin) = minimize_ef_tree(&full);
        prop_assert!(is_ef_homomorphism(&min, &full, &origin));
        let back = find_ef_homomorphism(&full, &min).unwrap();
        prop_assert!(is_ef_homomorphism(&full, &min, &back));
    }

    #[test]
    fn game_win_gives_tree_equivalence(s1 in structure(4), s2 in structure(4), d in 0u32..=2) {
        // the converse direction does not hold (see mutual_homomorphism_without_game_win)
        if game(&s1, &s2, d) {
            prop_assert!(trees_ef_equivalent(&s1, &s2, d).unwrap());
        }
    }

    #[test]
    fn exported_types_are_canonical(s in structure(4), d in 0u32..=2) {
        let perm: Vec<usize> = (0..s.len()).rev().collect();
        let shuffled = s.induced(&perm);
        prop_assert_eq!(rank_type(&s, &[], d).unwrap(), rank_type(&shuffled, &[], d).unwrap());
    }
}
