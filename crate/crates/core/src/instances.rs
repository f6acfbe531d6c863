//! Instance generators: the exhaustive small grid and seeded random
//! instances for fuzzing.
//!
//! Grid vertices are numbered with the base set first: `C = {0..c}` and
//! `b = (c, .., c + r - 1)`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::{ConjFormula, Conjunct, Term};
use crate::graph::{find_clique, random_kn_free_with, Graph, VertexId, VertexSet};

/// One decision instance: does `formula(x, tuple)` divide over `base`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub n: usize,
    pub graph: Graph,
    pub base: VertexSet,
    pub tuple: Vec<VertexId>,
    pub formula: ConjFormula,
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, first);
            out.push(p);
        }
    }
    out
}

/// Vertex relabellings fixing `C` and the tuple setwise.
fn block_permutations(c: usize, r: usize) -> Vec<Vec<usize>> {
    let cs: Vec<usize> = (0..c).collect();
    let bs: Vec<usize> = (c..c + r).collect();
    let mut out = Vec::new();
    for pc in permutations(&cs) {
        for pb in permutations(&bs) {
            out.push(pc.iter().chain(&pb).copied().collect());
        }
    }
    out
}

/// Graphs on `c + r` vertices, one per orbit under relabelling `C` and the
/// tuple separately. With `kn_free = Some(n)` only `K_n`-free graphs are kept.
pub fn grid_ambients(c: usize, r: usize, kn_free: Option<usize>) -> Vec<Graph> {
    let v = c + r;
    let pairs: Vec<(usize, usize)> = (0..v)
        .flat_map(|i| (i + 1..v).map(move |j| (i, j)))
        .collect();
    let index = |a: usize, b: usize| {
        pairs
            .iter()
            .position(|&p| p == (a.min(b), a.max(b)))
            .expect("pair")
    };
    let perms = block_permutations(c, r);
    let relabel: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(a, b)| index(p[a], p[b])).collect())
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let canonical = relabel.iter().all(|map| {
            let image = (0..pairs.len())
                .filter(|&e| mask >> e & 1 == 1)
                .fold(0u32, |acc, e| acc | 1 << map[e]);
            image >= mask
        });
        if !canonical {
            continue;
        }
        let edges = (0..pairs.len())
            .filter(|&e| mask >> e & 1 == 1)
            .map(|e| (pairs[e].0 as VertexId, pairs[e].1 as VertexId));
        let g = Graph::from_edges(0..v as VertexId, edges).expect("valid edges");
        if kn_free.is_none_or(|n| find_clique(&g, n).is_none()) {
            out.push(g);
        }
    }
    out
}

/// Conjunctions over `xa` variables and an `r`-tuple in which every atom
/// mentions a variable: each variable pair, variable-parameter pair and
/// variable-constant pair is absent, an edge or a non-edge (and with
/// `equalities`, a variable may also equal one parameter). Formulas that
/// only differ by renaming the variables are listed once.
pub fn grid_formulas(xa: usize, r: usize, base: &[VertexId], equalities: bool) -> Vec<ConjFormula> {
    #[derive(Clone, Copy)]
    enum Atom {
        Xx(usize, usize),
        Xy(usize, usize),
        Xc(usize, VertexId),
    }
    let mut atoms = Vec::new();
    for i in 0..xa {
        for j in i + 1..xa {
            atoms.push(Atom::Xx(i, j));
        }
        for j in 0..r {
            atoms.push(Atom::Xy(i, j));
        }
        for &c in base {
            atoms.push(Atom::Xc(i, c));
        }
    }
    let states = |a: &Atom| {
        if equalities && matches!(a, Atom::Xy(..)) {
            4
        } else {
            3
        }
    };
    let radix: Vec<u64> = atoms.iter().map(states).collect();
    let total: u64 = radix.iter().product();
    let perms = permutations(&(0..xa).collect::<Vec<_>>());
    let permuted = |p: &[usize], a: Atom| match a {
        Atom::Xx(i, j) => Atom::Xx(p[i].min(p[j]), p[i].max(p[j])),
        Atom::Xy(i, j) => Atom::Xy(p[i], j),
        Atom::Xc(i, c) => Atom::Xc(p[i], c),
    };
    let position = |a: Atom| {
        atoms
            .iter()
            .position(|&b| match (a, b) {
                (Atom::Xx(i, j), Atom::Xx(k, l)) => (i, j) == (k, l),
                (Atom::Xy(i, j), Atom::Xy(k, l)) => (i, j) == (k, l),
                (Atom::Xc(i, c), Atom::Xc(k, d)) => (i, c) == (k, d),
                _ => false,
            })
            .expect("atom")
    };
    let maps: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| atoms.iter().map(|&a| position(permuted(p, a))).collect())
        .collect();

    let mut out = Vec::new();
    let mut digits = vec![0u64; atoms.len()];
    for code in 0..total {
        let mut rest = code;
        for (d, &rad) in digits.iter_mut().zip(&radix) {
            *d = rest % rad;
            rest /= rad;
        }
        let encode = |map: &[usize]| {
            let mut image = vec![0u64; atoms.len()];
            for (k, &d) in digits.iter().enumerate() {
                image[map[k]] = d;
            }
            image
                .iter()
                .zip(&radix)
                .rev()
                .fold(0u64, |acc, (&d, &rad)| acc * rad + d)
        };
        if maps.iter().any(|m| encode(m) < code) {
            continue;
        }
        let conj = atoms.iter().zip(&digits).filter_map(|(&a, &d)| {
            let (l, rt) = match a {
                Atom::Xx(i, j) => (Term::X(i), Term::X(j)),
                Atom::Xy(i, j) => (Term::X(i), Term::Y(j)),
                Atom::Xc(i, c) => (Term::X(i), Term::Const(c)),
            };
            match d {
                0 => None,
                1 => Some(Conjunct::edge(l, rt)),
                2 => Some(Conjunct::non_edge(l, rt)),
                _ => Some(Conjunct::eq(l, rt)),
            }
        });
        out.push(ConjFormula::new(xa, r, conj).expect("grid formula"));
    }
    out
}

/// Shape bounds for random dividing instances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    pub max_base: usize,
    pub max_tuple: usize,
    pub max_x: usize,
    /// Vertices outside `C ∪ b`.
    pub extra: usize,
    pub equalities: bool,
}

impl RandomSpec {
    pub fn new(n: usize) -> Self {
        RandomSpec {
            n,
            max_base: 3,
            max_tuple: 3,
            max_x: 2,
            extra: 0,
            equalities: false,
        }
    }
}

/// A random `K_n`-free graph with a random base set, tuple and formula.
/// Positive variable-parameter atoms are favoured so that dividing
/// instances are common.
pub fn random_instance<R: Rng>(spec: &RandomSpec, rng: &mut R) -> Instance {
    let c = rng.gen_range(0..=spec.max_base);
    let r = rng.gen_range(1..=spec.max_tuple.max(1));
    let xa = rng.gen_range(1..=spec.max_x.max(1));
    let size = c + r + spec.extra;
    let density = rng.gen_range(0.2..0.8);
    let graph = random_kn_free_with(spec.n, size, density, rng);
    let mut ids: Vec<VertexId> = (0..size as VertexId).collect();
    ids.shuffle(rng);
    let base: VertexSet = ids[..c].iter().copied().collect();
    let tuple = ids[c..c + r].to_vec();
    let consts: Vec<VertexId> = base.iter().copied().collect();
    let p_edge = rng.gen_range(0.3..0.9);
    let mut conj = Vec::new();
    for i in 0..xa {
        for j in i + 1..xa {
            match rng.gen_range(0..3) {
                0 => conj.push(Conjunct::edge(Term::X(i), Term::X(j))),
                1 => conj.push(Conjunct::non_edge(Term::X(i), Term::X(j))),
                _ => {}
            }
        }
        for t in (0..r)
            .map(Term::Y)
            .chain(consts.iter().map(|&v| Term::Const(v)))
        {
            let roll: f64 = rng.gen();
            if spec.equalities && matches!(t, Term::Y(_)) && roll < 0.05 {
                conj.push(Conjunct::eq(Term::X(i), t));
            } else if roll < p_edge {
                conj.push(Conjunct::edge(Term::X(i), t));
            } else if roll < p_edge + (1.0 - p_edge) / 2.0 {
                conj.push(Conjunct::non_edge(Term::X(i), t));
            }
        }
    }
    let formula = ConjFormula::new(xa, r, conj).expect("random formula");
    Instance {
        n: spec.n,
        graph,
        base,
        tuple,
        formula,
    }
}

/// A random `K_n`-free graph on `size` vertices with sets `A`, `B`, `C`.
/// `A` and `B` may overlap each other and `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub graph: Graph,
    pub a: VertexSet,
    pub b: VertexSet,
    pub c: VertexSet,
}

pub fn random_triple<R: Rng>(
    n: usize,
    size: usize,
    max_ab: usize,
    max_c: usize,
    rng: &mut R,
) -> Triple {
    let density = rng.gen_range(0.2..0.8);
    let graph = random_kn_free_with(n, size, density, rng);
    let (kc, ka, kb) = (
        rng.gen_range(0..=max_c),
        rng.gen_range(0..=max_ab),
        rng.gen_range(0..=max_ab),
    );
    let mut pick = |k: usize| -> VertexSet {
        let mut ids: Vec<VertexId> = (0..size as VertexId).collect();
        ids.shuffle(rng);
        ids.truncate(k.min(size));
        ids.into_iter().collect()
    };
    let c = pick(kc);
    let a = pick(ka);
    let b = pick(kb);
    Triple { graph, a, b, c }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_kn_free;

    /// Orbit counts checked against a direct canonical-form dedupe.
    #[test]
    fn ambient_orbits() {
        // One vertex in C and two in b: the 8 graphs on three vertices fall
        // into 6 classes under swapping the tuple entries.
        assert_eq!(grid_ambients(1, 2, None).len(), 6);
        assert_eq!(grid_ambients(1, 2, Some(3)).len(), 5);
        assert_eq!(grid_ambients(0, 1, Some(3)).len(), 1);
        for g in grid_ambients(2, 3, Some(3)) {
            assert!(is_kn_free(&g, 3));
        }
    }

    #[test]
    fn formula_counts() {
        // One variable, one parameter: absent, edge, non-edge.
        assert_eq!(grid_formulas(1, 1, &[], false).len(), 3);
        assert_eq!(grid_formulas(1, 1, &[], true).len(), 4);
        // Two variables, one parameter: 3 * 9 codes, 3 * 6 up to swapping.
        assert_eq!(grid_formulas(2, 1, &[], false).len(), 18);
        let fs = grid_formulas(1, 2, &[7], false);
        assert_eq!(fs.len(), 27);
        assert!(fs.iter().all(|f| f.y_arity() == 2 && f.x_arity() == 1));
    }
}
