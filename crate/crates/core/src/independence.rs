//! The bound relations `K_n(B/C)` and `K_n^φ(b/C)`, the graph-theoretic
//! dividing test for formulas, and the ternary independence relations.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{
    instantiate, is_consistent, optimal_candidate, ConjFormula, Conjunct, Formula, FormulaClass,
    FormulaError, Theory,
};
use crate::graph::{first_clique_where, Graph, VertexId, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndependenceError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("vertex {0} lies in both sides of a bound test")]
    Overlap(VertexId),
    #[error("formula contains an equality conjunct; expected one in L_R(C)")]
    NotLR,
    #[error("formula instance is inconsistent")]
    Inconsistent,
}

/// An `n`-set meeting both `B` and `C`, complete except possibly for
/// missing edges inside `B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundWitness {
    pub b0: Vec<VertexId>,
}

/// Lexicographically least witness of `K_n(B/C)`.
///
/// Vertices absent from `g` can never take part in a witness (a witness
/// needs edges between its two sides) and are ignored.
pub fn kn_bound(
    b: &VertexSet,
    c: &VertexSet,
    g: &Graph,
    n: usize,
) -> Result<Option<BoundWitness>, IndependenceError> {
    if let Some(&v) = b.intersection(c).next() {
        return Err(IndependenceError::Overlap(v));
    }
    Ok(kn_bound_disjoint(b, c, g, n))
}

pub(crate) fn kn_bound_disjoint(
    b: &VertexSet,
    c: &VertexSet,
    g: &Graph,
    n: usize,
) -> Option<BoundWitness> {
    if b.is_empty() || c.is_empty() {
        return None;
    }
    // Complete B internally; a witness is then an n-clique meeting both sides.
    let mut h = g.induced(b.iter().chain(c));
    let bs: Vec<VertexId> = b.iter().copied().filter(|v| h.contains(*v)).collect();
    for (i, &u) in bs.iter().enumerate() {
        for &v in &bs[i + 1..] {
            h.add_edge(u, v).expect("distinct vertices present in h");
        }
    }
    let in_b: Vec<bool> = h.vertices().iter().map(|v| b.contains(v)).collect();
    let mask = h.full_mask();
    first_clique_where(&h, &mask, n, &mut |idx| {
        idx.iter().any(|&i| in_b[i]) && idx.iter().any(|&i| !in_b[i])
    })
    .map(|b0| BoundWitness { b0 })
}

/// A subset of the parameters that is not `n`-bound to `C` but becomes
/// `n`-bound once an optimal solution is added.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiBoundWitness {
    pub subset: Vec<VertexId>,
    /// Optimal solution used: variable name to its fresh vertex.
    pub optimal: BTreeMap<String, VertexId>,
    pub against_optimal: BoundWitness,
}

/// Searches for a witness of `K_n^φ(b/C)` against the optimal solution of
/// `f(x, b)`, smallest subsets first, then lexicographically.
pub fn kphi_bound(
    f: &ConjFormula,
    b: &[VertexId],
    g: &Graph,
    base: &VertexSet,
    n: usize,
) -> Result<Option<PhiBoundWitness>, IndependenceError> {
    if f.class() != FormulaClass::LR {
        return Err(IndependenceError::NotLR);
    }
    let p = instantiate(f, b, g, base)?;
    if !is_consistent(&p, g, n, Theory::Tn) {
        return Err(IndependenceError::Inconsistent);
    }
    let cand = optimal_candidate(&p, g)?;
    let mut with_solution = base.clone();
    with_solution.extend(cand.assignment.values());
    let mut params: Vec<VertexId> = b.to_vec();
    params.sort_unstable();

    for size in 1..n.min(params.len() + 1) {
        for subset in combinations(&params, size) {
            let s: VertexSet = subset.iter().copied().collect();
            if kn_bound_disjoint(&s, base, g, n).is_some() {
                continue;
            }
            if let Some(w) = kn_bound_disjoint(&s, &with_solution, &cand.extension, n) {
                return Ok(Some(PhiBoundWitness {
                    subset,
                    optimal: cand
                        .assignment
                        .iter()
                        .map(|(i, v)| (format!("x{}", i + 1), *v))
                        .collect(),
                    against_optimal: w,
                }));
            }
        }
    }
    Ok(None)
}

/// All `k`-subsets of `items` in lexicographic order.
pub(crate) fn combinations<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn rec<T: Copy>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivideReason {
    Inconsistent,
    EqualityConjunct,
    KnPhiBound,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum VerdictWitness {
    Bound(PhiBoundWitness),
    Equality { conjunct: Conjunct },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DividesVerdict {
    pub divides: bool,
    pub reason: DivideReason,
    pub witness: Option<VerdictWitness>,
}

impl DividesVerdict {
    fn no() -> Self {
        DividesVerdict {
            divides: false,
            reason: DivideReason::None,
            witness: None,
        }
    }

    fn inconsistent() -> Self {
        DividesVerdict {
            divides: true,
            reason: DivideReason::Inconsistent,
            witness: None,
        }
    }

    fn equality(f: &ConjFormula) -> Option<Self> {
        f.equalities().next().map(|c| DividesVerdict {
            divides: true,
            reason: DivideReason::EqualityConjunct,
            witness: Some(VerdictWitness::Equality { conjunct: *c }),
        })
    }
}

/// Decides whether `f(x, b)` divides over `base` in the theory of the
/// generic `K_n`-free graph.
///
/// Inconsistent instances divide. Otherwise an equality with a parameter
/// divides, and an `L_R` formula divides exactly when `K_n^φ(b/C)` holds.
pub fn divides_formula(
    f: &ConjFormula,
    b: &[VertexId],
    g: &Graph,
    base: &VertexSet,
    n: usize,
) -> Result<DividesVerdict, IndependenceError> {
    let p = instantiate(f, b, g, base)?;
    if !is_consistent(&p, g, n, Theory::Tn) {
        return Ok(DividesVerdict::inconsistent());
    }
    if let Some(v) = DividesVerdict::equality(f) {
        return Ok(v);
    }
    Ok(match kphi_bound(f, b, g, base, n)? {
        Some(w) => DividesVerdict {
            divides: true,
            reason: DivideReason::KnPhiBound,
            witness: Some(VerdictWitness::Bound(w)),
        },
        None => DividesVerdict::no(),
    })
}

/// [`divides_formula`] lifted to top-level formulas. Disjunctions are not
/// decided here and always report `divides = false`, reason `none`.
pub fn divides(
    f: &Formula,
    b: &[VertexId],
    g: &Graph,
    base: &VertexSet,
    n: usize,
) -> Result<DividesVerdict, IndependenceError> {
    match f {
        Formula::Conj(f) => divides_formula(f, b, g, base, n),
        Formula::Disj { disjuncts } => {
            for d in disjuncts {
                instantiate(d, b, g, base)?;
            }
            Ok(DividesVerdict::no())
        }
    }
}

/// Dividing in the random graph: only equality with a parameter divides.
pub fn divides_formula_t0(
    f: &ConjFormula,
    b: &[VertexId],
    g: &Graph,
    base: &VertexSet,
) -> Result<DividesVerdict, IndependenceError> {
    let p = instantiate(f, b, g, base)?;
    if !is_consistent(&p, g, 0, Theory::T0) {
        return Ok(DividesVerdict::inconsistent());
    }
    Ok(DividesVerdict::equality(f).unwrap_or_else(DividesVerdict::no))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// A vertex of `A ∩ B` outside `C`.
    SharedVertex { vertex: VertexId },
    /// `S ⊆ B \ C` with `K_n(S/AC)` witnessed but `¬K_n(S/C)`.
    Bound {
        subset: Vec<VertexId>,
        witness: BoundWitness,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndepVerdict {
    pub independent: bool,
    pub violation: Option<Violation>,
}

impl IndepVerdict {
    fn yes() -> Self {
        IndepVerdict {
            independent: true,
            violation: None,
        }
    }

    fn no(v: Violation) -> Self {
        IndepVerdict {
            independent: false,
            violation: Some(v),
        }
    }
}

/// Dividing independence `A ⫝^d_C B`.
///
/// Any witness for `K_n(b/AC)` meets `AC`, so its trace on `b` has at most
/// `n - 1` vertices and is itself a violating tuple. Only subsets of
/// `B \ C` of size below `n` are therefore enumerated.
pub fn dividing_indep(
    a: &VertexSet,
    b: &VertexSet,
    c: &VertexSet,
    g: &Graph,
    n: usize,
) -> IndepVerdict {
    if let Some(&v) = a.intersection(b).find(|v| !c.contains(v)) {
        return IndepVerdict::no(Violation::SharedVertex { vertex: v });
    }
    let ac: VertexSet = a.union(c).copied().collect();
    let rest: Vec<VertexId> = b.difference(c).copied().collect();
    for size in 1..n.min(rest.len() + 1) {
        for subset in combinations(&rest, size) {
            let s: VertexSet = subset.iter().copied().collect();
            let Some(witness) = kn_bound_disjoint(&s, &ac, g, n) else {
                continue;
            };
            if kn_bound_disjoint(&s, c, g, n).is_none() {
                return IndepVerdict::no(Violation::Bound { subset, witness });
            }
        }
    }
    IndepVerdict::yes()
}

/// Forking independence; coincides with dividing independence for complete
/// types in this theory.
pub fn forking_indep(
    a: &VertexSet,
    b: &VertexSet,
    c: &VertexSet,
    g: &Graph,
    n: usize,
) -> IndepVerdict {
    dividing_indep(a, b, c, g, n)
}

/// `A ∩ B ⊆ C` and no edge between `A \ C` and `B \ C`.
pub fn edge_indep(a: &VertexSet, b: &VertexSet, c: &VertexSet, g: &Graph) -> bool {
    if a.intersection(b).any(|v| !c.contains(v)) {
        return false;
    }
    let b_out: Vec<VertexId> = b.difference(c).copied().collect();
    a.difference(c)
        .all(|&u| b_out.iter().all(|&v| !g.adjacent(u, v)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullExistence {
    pub graph: Graph,
    /// `A` in ascending order.
    pub original: Vec<VertexId>,
    /// Entry `i` is the copy of `original[i]` (itself when it lies in `C`).
    pub copy: Vec<VertexId>,
}

/// Copies `A` over `C` away from `B`: every vertex of `A \ C` gets a fresh
/// twin with the same edges inside the copy and to `C`, and no other edges.
///
/// The result has the same type as `A` over `C`, is edge-independent from
/// `B` over `C`, and stays `K_n`-free when `g` is: a clique through a twin
/// lives inside `C` plus the twins, which mirrors `A ∪ C`.
pub fn full_existence(a: &VertexSet, b: &VertexSet, c: &VertexSet, g: &Graph) -> FullExistence {
    let _ = b;
    let original: Vec<VertexId> = a.iter().copied().collect();
    let mut graph = g.clone();
    let mut next = g.fresh_id();
    let mut copy = Vec::with_capacity(original.len());
    for &v in &original {
        if c.contains(&v) {
            copy.push(v);
        } else {
            graph.add_vertex(next);
            copy.push(next);
            next += 1;
        }
    }
    for (i, &u) in original.iter().enumerate() {
        if c.contains(&u) {
            continue;
        }
        for (j, &v) in original.iter().enumerate().skip(i + 1) {
            if !c.contains(&v) && g.adjacent(u, v) {
                graph
                    .add_edge(copy[i], copy[j])
                    .expect("fresh copies are distinct");
            }
        }
        for &w in c {
            if g.adjacent(u, w) {
                graph
                    .add_edge(copy[i], w)
                    .expect("copy and base vertex are distinct");
            }
        }
    }
    FullExistence {
        graph,
        original,
        copy,
    }
}

/// One-sided forking test for a disjunction: true when every disjunct
/// divides. A false result means "not determined", never "does not fork".
pub fn forks_disjunction(
    disjuncts: &[ConjFormula],
    b: &[VertexId],
    g: &Graph,
    base: &VertexSet,
    n: usize,
) -> Result<(bool, Vec<DividesVerdict>), IndependenceError> {
    let verdicts = disjuncts
        .iter()
        .map(|d| divides_formula(d, b, g, base, n))
        .collect::<Result<Vec<_>, _>>()?;
    let forks = !verdicts.is_empty() && verdicts.iter().all(|v| v.divides);
    Ok((forks, verdicts))
}
