#![allow(dead_code)]

use intervalfo::interval::{Graph, IntervalRep};
use intervalfo::logic::RelStructure;
use intervalfo::numerics::{parse_rational, q, qi, Coord, LengthSet, LengthSymbol};
use rand::Rng;

pub const Q_SQRT2: &str = "1.41421356237309";

pub fn length_set(kind: usize) -> LengthSet {
    match kind {
        0 => LengthSet::unit(),
        1 => {
            let (v, _) = parse_rational(Q_SQRT2).unwrap();
            LengthSet::new(vec![LengthSymbol::exact("u", qi(1)), LengthSymbol::approximate("q", v)]).unwrap()
        }
        _ => LengthSet::exact(&[("u", qi(1)), ("h", q(3, 2))]),
    }
}

/// Clustered random representation: left ends on a coarse grid, with an optional
/// integer multiple of the second symbol, so that dense spots and exact ties occur.
pub fn random_rep(rng: &mut impl Rng, kind: usize, n: usize) -> IntervalRep {
    let ls = length_set(kind);
    let m = ls.len();
    let mut rep = IntervalRep::new(ls);
    let hubs: Vec<i64> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..24)).collect();
    for i in 0..n {
        let c = if rng.gen_bool(0.7) { hubs[rng.gen_range(0..hubs.len())] } else { rng.gen_range(0..24) };
        let mut left = Coord::constant(q(c, 4));
        if m > 1 && rng.gen_bool(0.3) {
            left = &left + &Coord::from_parts(qi(0), [(1, qi(rng.gen_range(-1..=1)))]);
        }
        rep.push(format!("v{i}"), left, rng.gen_range(0..m));
    }
    rep
}

pub fn structure(g: &Graph) -> RelStructure {
    RelStructure::from_graph(g)
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges((0..n).map(|i| format!("v{i}")).collect(), edges.to_vec())
}

/// The labeled graph on `n` vertices whose edge set is given by the bits of `mask`.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let edges: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| *p).collect();
    graph(n, &edges)
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(p)).collect::<Vec<_>>();
    graph(n, &edges)
}

pub const BATTERY: [&str; 12] = [
    "exists x. x = x",
    "exists x. exists y. (x != y & !E(x,y))",
    "exists x. forall y. (x = y | E(x,y))",
    "exists x. forall y. !E(x,y)",
    "forall x. exists y. (x != y & E(x,y))",
    "exists x. exists y. exists z. (E(x,y) & E(y,z) & !E(x,z) & x != z)",
    "exists x. exists y. exists z. (x != y & y != z & x != z & !E(x,y) & !E(y,z) & !E(x,z))",
    "forall x. forall y. (E(x,y) -> exists z. (E(x,z) & E(y,z)))",
    "exists x. exists y. (E(x,y) & forall z. (E(x,z) | E(y,z) | z = x | z = y))",
    "forall x. exists y. forall z. (E(x,z) -> (z = y | E(y,z)))",
    "exists x. exists y. exists z. (E(x,y) & E(y,z) & E(x,z) & x != y & y != z & x != z)",
    "forall x. forall y. (x = y | E(x,y) | exists z. (E(x,z) & E(z,y)))",
];
