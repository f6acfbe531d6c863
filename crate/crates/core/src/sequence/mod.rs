//! Uniform indiscernible sequences over a base tuple, realised as finite
//! windows.
//!
//! A sequence `b^0, b^1, ...` with `b^0 = b` is described by a
//! [`SequenceTemplate`]; every copy has the same type over `C` as `b`, and
//! every ordered pair of copies the same cross pattern. A window is the
//! graph on `C` plus the first `L` copies.

mod example62;
mod lemma61;
mod template;

pub use example62::{
    build_example_62, verify_example_62, verify_example_62_on, Example62, Example62Report,
};
pub use lemma61::{classify, lemma61_scan, Branch, Lemma61Report, LEMMA61_COPIES};
pub use template::{SequenceTemplate, TemplateSpace};

use thiserror::Error;

use crate::formula::{instantiate_unchecked, is_consistent, ConjFormula, RType, Theory};
use crate::graph::{is_kn_free, Graph, GraphError, VertexId, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("position {position} out of range for {positions} positions")]
    PositionOutOfRange { position: usize, positions: usize },
    #[error("constant position {0} cannot carry cross edges")]
    CrossOnConstant(usize),
    #[error("template has {template} positions but the tuple has {tuple}")]
    ArityMismatch { template: usize, tuple: usize },
    #[error("vertex {0} of the tuple lies in the base set")]
    TupleMeetsBase(VertexId),
    #[error("vertex {0} is not in the tuple")]
    NotInTuple(VertexId),
    #[error("window of length {len} has no {k} copies")]
    WindowTooShort { len: usize, k: usize },
    #[error("construction needs n >= 3, got {0}")]
    SmallN(usize),
    #[error("instance does not have the required shape: {0}")]
    Precondition(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The graph on `C ∪ b` that every copy is modelled on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceBase {
    graph: Graph,
    base: VertexSet,
    tuple: Vec<VertexId>,
}

impl SequenceBase {
    /// Restricts `g` to `base ∪ tuple`. The tuple must be repetition-free,
    /// present in `g` and disjoint from `base`.
    pub fn new(g: &Graph, base: &VertexSet, tuple: &[VertexId]) -> Result<Self, SequenceError> {
        let mut seen = VertexSet::new();
        for &v in tuple {
            if base.contains(&v) {
                return Err(SequenceError::TupleMeetsBase(v));
            }
            if !seen.insert(v) {
                return Err(GraphError::RepeatedTupleEntry {
                    name: "b".into(),
                    vertex: v,
                }
                .into());
            }
        }
        for &v in tuple.iter().chain(base) {
            if !g.contains(v) {
                return Err(GraphError::UnknownVertex(v).into());
            }
        }
        Ok(SequenceBase {
            graph: g.induced(base.iter().chain(tuple)),
            base: base.clone(),
            tuple: tuple.to_vec(),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn base(&self) -> &VertexSet {
        &self.base
    }

    pub fn tuple(&self) -> &[VertexId] {
        &self.tuple
    }
}

/// `C` plus `copies.len()` copies of the base tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceWindow {
    pub graph: Graph,
    pub base: VertexSet,
    pub copies: Vec<Vec<VertexId>>,
}

impl SequenceWindow {
    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    /// All vertices of column `i` in the window.
    pub fn column(&self, i: usize) -> VertexSet {
        self.copies.iter().map(|c| c[i]).collect()
    }
}

/// Materialises `len` copies. Copy 0 is the base tuple; later copies take
/// fresh identifiers above the base graph, copy by copy, in position order.
pub fn realize_template(
    t: &SequenceTemplate,
    base: &SequenceBase,
    len: usize,
) -> Result<SequenceWindow, SequenceError> {
    let b = &base.tuple;
    if t.positions() != b.len() {
        return Err(SequenceError::ArityMismatch {
            template: t.positions(),
            tuple: b.len(),
        });
    }
    let g = &base.graph;
    let mut graph = g.clone();
    let mut next = g.fresh_id();
    let mut copies = Vec::with_capacity(len);
    for l in 0..len {
        let copy: Vec<VertexId> = (0..b.len())
            .map(|i| {
                if l == 0 || t.is_constant(i) {
                    b[i]
                } else {
                    next += 1;
                    graph.add_vertex(next - 1);
                    next - 1
                }
            })
            .collect();
        copies.push(copy);
    }
    for copy in copies.iter().skip(1) {
        for i in 0..b.len() {
            if t.is_constant(i) {
                continue;
            }
            for j in 0..b.len() {
                if j != i && g.adjacent(b[i], b[j]) {
                    graph.add_edge(copy[i], copy[j])?;
                }
            }
            for &c in &base.base {
                if g.adjacent(b[i], c) {
                    graph.add_edge(copy[i], c)?;
                }
            }
        }
    }
    for k in 0..len {
        for l in k + 1..len {
            for &(i, j) in t.cross() {
                graph.add_edge(copies[k][i], copies[l][j])?;
            }
        }
    }
    Ok(SequenceWindow {
        graph,
        base: base.base.clone(),
        copies,
    })
}

/// Template of the Γ construction for the positions of `bound`.
pub fn gamma_template(
    base: &SequenceBase,
    bound: &VertexSet,
) -> Result<SequenceTemplate, SequenceError> {
    let inside = bound_positions(base, bound)?;
    let cross = inside
        .iter()
        .flat_map(|&i| inside.iter().filter(move |&&j| i < j).map(move |&j| (i, j)));
    SequenceTemplate::new(base.tuple.len(), [], cross)
}

fn bound_positions(base: &SequenceBase, bound: &VertexSet) -> Result<Vec<usize>, SequenceError> {
    if let Some(&v) = bound.iter().find(|v| !base.tuple.contains(v)) {
        return Err(SequenceError::NotInTuple(v));
    }
    Ok((0..base.tuple.len())
        .filter(|&i| bound.contains(&base.tuple[i]))
        .collect())
}

/// Window of length `len` of the Γ sequence: pairwise disjoint copies of
/// `b` over `C`, with `b^l_i R b^m_j` exactly when `l < m`, `i < j` and both
/// positions belong to `bound`.
pub fn gamma(
    base: &SequenceBase,
    bound: &VertexSet,
    len: usize,
) -> Result<SequenceWindow, SequenceError> {
    let inside = bound_positions(base, bound)?;
    let b = &base.tuple;
    let g = &base.graph;
    let mut graph = g.clone();
    let mut copies = if len == 0 {
        Vec::new()
    } else {
        vec![b.clone()]
    };
    let first_fresh = g.fresh_id();
    for l in 1..len {
        let start = first_fresh + ((l - 1) * b.len()) as VertexId;
        copies.push((0..b.len()).map(|i| start + i as VertexId).collect());
    }
    for copy in copies.iter().skip(1) {
        for &v in copy {
            graph.add_vertex(v);
        }
        for (i, &v) in copy.iter().enumerate() {
            for (j, &u) in copy.iter().enumerate() {
                if g.adjacent(b[i], b[j]) {
                    graph.add_edge(v, u)?;
                }
            }
            for &c in &base.base {
                if g.adjacent(b[i], c) {
                    graph.add_edge(v, c)?;
                }
            }
        }
    }
    for (l, earlier) in copies.iter().enumerate() {
        for later in &copies[l + 1..] {
            for &i in &inside {
                for &j in inside.iter().filter(|&&j| j > i) {
                    graph.add_edge(earlier[i], later[j])?;
                }
            }
        }
    }
    Ok(SequenceWindow {
        graph,
        base: base.base.clone(),
        copies,
    })
}

/// The length-`n` window of `t` (with `C`) is `K_n`-free. An `n`-clique
/// meets at most `n` copies and the edge rule only sees their order, so
/// longer windows add nothing.
pub fn is_template_valid(
    t: &SequenceTemplate,
    base: &SequenceBase,
    n: usize,
) -> Result<bool, SequenceError> {
    Ok(is_kn_free(&realize_template(t, base, n)?.graph, n))
}

/// Union of `f(x, b^l)` over the first `k` copies of `w`.
pub fn union_type(f: &ConjFormula, w: &SequenceWindow, k: usize) -> Result<RType, SequenceError> {
    if k > w.len() {
        return Err(SequenceError::WindowTooShort { len: w.len(), k });
    }
    let mut p = RType::new(f.x_arity(), [], []);
    for copy in &w.copies[..k] {
        p = p
            .union(&instantiate_unchecked(f, copy))
            .expect("same arity");
    }
    Ok(p)
}

/// Whether `f(x, b^0) ∧ ... ∧ f(x, b^{k-1})` is inconsistent with the
/// theory of the generic `K_n`-free graph.
pub fn check_k_inconsistent(
    f: &ConjFormula,
    w: &SequenceWindow,
    k: usize,
    n: usize,
) -> Result<bool, SequenceError> {
    check_k_inconsistent_in(f, w, k, n, Theory::Tn)
}

pub fn check_k_inconsistent_in(
    f: &ConjFormula,
    w: &SequenceWindow,
    k: usize,
    n: usize,
    theory: Theory,
) -> Result<bool, SequenceError> {
    let p = union_type(f, w, k)?;
    Ok(!is_consistent(&p, &w.graph, n, theory))
}

/// Templates over `base` in [`TemplateSpace`] order. In `Tn` only templates
/// whose windows stay `K_n`-free are kept; in `T0` every template is.
pub fn enumerate_templates<'a>(
    base: &'a SequenceBase,
    n: usize,
    theory: Theory,
) -> impl Iterator<Item = SequenceTemplate> + 'a {
    TemplateSpace::new(base.tuple.len()).filter(move |t| match theory {
        Theory::T0 => true,
        Theory::Tn => is_template_valid(t, base, n).expect("template matches base arity"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Conjunct, Term::*};
    use crate::graph::{find_clique, qf_type_equal_over, random_kn_free};

    fn set(vs: &[VertexId]) -> VertexSet {
        vs.iter().copied().collect()
    }

    #[test]
    fn empty_bound_gives_disconnected_copies() {
        let g = Graph::from_edges([0, 1, 2], [(0, 1), (1, 2)]).unwrap();
        let base = SequenceBase::new(&g, &set(&[0]), &[1, 2]).unwrap();
        let w = gamma(&base, &set(&[]), 4).unwrap();
        for (k, a) in w.copies.iter().enumerate() {
            for b in &w.copies[k + 1..] {
                for &u in a {
                    for &v in b {
                        assert!(!w.graph.adjacent(u, v));
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_on_non_adjacent_pair() {
        let g = Graph::empty([1, 2]);
        let base = SequenceBase::new(&g, &set(&[]), &[1, 2]).unwrap();
        let w = gamma(&base, &set(&[1, 2]), 3).unwrap();
        let mut cross = Vec::new();
        for (k, a) in w.copies.iter().enumerate() {
            for (l, b) in w.copies.iter().enumerate() {
                for (i, &u) in a.iter().enumerate() {
                    for (j, &v) in b.iter().enumerate() {
                        if k < l && w.graph.adjacent(u, v) {
                            cross.push((k, l, i, j));
                        }
                    }
                }
            }
        }
        assert_eq!(cross, vec![(0, 1, 0, 1), (0, 2, 0, 1), (1, 2, 0, 1)]);
        assert!(is_kn_free(&w.graph, 3));
        for i in 0..2 {
            let col = w.column(i);
            assert!(col
                .iter()
                .all(|&u| col.iter().all(|&v| !w.graph.adjacent(u, v))));
        }
    }

    #[test]
    fn gamma_matches_its_template() {
        for seed in 0..60u64 {
            let g = random_kn_free(3 + (seed % 2) as usize, 7, 0.5, seed);
            let base = SequenceBase::new(&g, &set(&[0, 1]), &[2, 4, 3, 6]).unwrap();
            let bound = set(&[2, 3, 6][..(seed % 4) as usize]);
            let t = gamma_template(&base, &bound).unwrap();
            for len in 1..5 {
                assert_eq!(
                    realize_template(&t, &base, len).unwrap(),
                    gamma(&base, &bound, len).unwrap()
                );
            }
        }
    }

    #[test]
    fn all_constant_template_is_the_base_graph() {
        let g = random_kn_free(3, 6, 0.5, 7);
        let base = SequenceBase::new(&g, &set(&[0]), &[1, 2, 3]).unwrap();
        let t = SequenceTemplate::new(3, [0, 1, 2], []).unwrap();
        let w = realize_template(&t, &base, 5).unwrap();
        assert_eq!(w.graph, *base.graph());
        assert!(w.copies.iter().all(|c| c == base.tuple()));
        let t = SequenceTemplate::new(3, [], [(0, 1), (2, 2)]).unwrap();
        let w = realize_template(&t, &base, 1).unwrap();
        assert_eq!(w.graph, *base.graph());
    }

    #[test]
    fn windows_keep_copies_isomorphic_and_uniform() {
        for seed in 0..40u64 {
            let g = random_kn_free(4, 7, 0.5, seed);
            let base = SequenceBase::new(&g, &set(&[5, 6]), &[0, 1, 2]).unwrap();
            let t = TemplateSpace::new(3)
                .nth((seed * 37 % 567) as usize)
                .unwrap();
            let w = realize_template(&t, &base, 4).unwrap();
            for copy in &w.copies {
                assert!(qf_type_equal_over(&w.graph, copy, base.tuple(), base.base()).unwrap());
            }
            let pattern = |k: usize, l: usize| -> Vec<bool> {
                let mut out = Vec::new();
                for i in 0..3 {
                    for j in 0..3 {
                        out.push(w.graph.adjacent(w.copies[k][i], w.copies[l][j]));
                    }
                }
                out
            };
            let first = pattern(0, 1);
            for k in 0..4 {
                for l in k + 1..4 {
                    assert_eq!(pattern(k, l), first);
                }
            }
        }
    }

    #[test]
    fn vertical_edge_is_invalid() {
        let g = Graph::empty([0]);
        let base = SequenceBase::new(&g, &set(&[]), &[0]).unwrap();
        let t = SequenceTemplate::new(1, [], [(0, 0)]).unwrap();
        assert!(!is_template_valid(&t, &base, 3).unwrap());
        let w = realize_template(&t, &base, 3).unwrap();
        assert_eq!(
            find_clique(&w.graph, 3).unwrap().members,
            w.column(0).into_iter().collect::<Vec<_>>()
        );
        let kept: Vec<_> = enumerate_templates(&base, 3, Theory::Tn).collect();
        assert_eq!(
            kept,
            vec![
                SequenceTemplate::disconnected(1),
                SequenceTemplate::new(1, [0], []).unwrap()
            ]
        );
        assert_eq!(enumerate_templates(&base, 3, Theory::T0).count(), 3);
    }

    #[test]
    fn base_with_clique_makes_every_template_invalid() {
        let g = Graph::from_edges([0, 1, 2], [(0, 1), (0, 2), (1, 2)]).unwrap();
        let base = SequenceBase::new(&g, &set(&[0, 1]), &[2]).unwrap();
        assert_eq!(enumerate_templates(&base, 3, Theory::Tn).count(), 0);
    }

    #[test]
    fn gamma_width_on_dividing_example() {
        let g = Graph::empty([1, 2]);
        let base = SequenceBase::new(&g, &set(&[]), &[1, 2]).unwrap();
        let w = gamma(&base, &set(&[1, 2]), 3).unwrap();
        let f = ConjFormula::new(
            1,
            2,
            [Conjunct::edge(X(0), Y(0)), Conjunct::edge(X(0), Y(1))],
        )
        .unwrap();
        assert!(!check_k_inconsistent(&f, &w, 1, 3).unwrap());
        assert!(check_k_inconsistent(&f, &w, 2, 3).unwrap());
        assert!(check_k_inconsistent(&f, &w, 3, 3).unwrap());
        assert!(matches!(
            check_k_inconsistent(&f, &w, 4, 3),
            Err(SequenceError::WindowTooShort { .. })
        ));
    }

    #[test]
    fn disconnected_template_never_inconsistent() {
        let g = Graph::empty([1, 2, 3]);
        let base = SequenceBase::new(&g, &set(&[]), &[1, 2, 3]).unwrap();
        let w = realize_template(&SequenceTemplate::disconnected(3), &base, 6).unwrap();
        let f = ConjFormula::new(1, 3, [Conjunct::edge(X(0), Y(0))]).unwrap();
        for k in 1..=6 {
            assert!(!check_k_inconsistent(&f, &w, k, 3).unwrap());
        }
    }

    #[test]
    fn base_errors() {
        let g = Graph::empty([1, 2]);
        assert_eq!(
            SequenceBase::new(&g, &set(&[1]), &[1]),
            Err(SequenceError::TupleMeetsBase(1))
        );
        assert!(SequenceBase::new(&g, &set(&[]), &[1, 1]).is_err());
        assert!(SequenceBase::new(&g, &set(&[9]), &[1]).is_err());
        let base = SequenceBase::new(&g, &set(&[]), &[1]).unwrap();
        assert_eq!(
            gamma(&base, &set(&[2]), 2),
            Err(SequenceError::NotInTuple(2))
        );
        let t = SequenceTemplate::disconnected(2);
        assert!(matches!(
            realize_template(&t, &base, 2),
            Err(SequenceError::ArityMismatch { .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn window_lemma(seed in 0u64..10_000, n in 3usize..5, idx in 0usize..567) {
                let g = random_kn_free(n, 6, 0.5, seed);
                let base = SequenceBase::new(&g, &set(&[4, 5]), &[0, 1, 2]).unwrap();
                let t = TemplateSpace::new(3).nth(idx).unwrap();
                let valid = is_template_valid(&t, &base, n).unwrap();
                for len in n..=3 * n {
                    prop_assert_eq!(is_kn_free(&realize_template(&t, &base, len).unwrap().graph, n), valid);
                }
            }

            #[test]
            fn valid_windows_have_no_vertical_edges(seed in 0u64..10_000, n in 3usize..5, idx in 0usize..567) {
                let g = random_kn_free(n, 6, 0.5, seed);
                let base = SequenceBase::new(&g, &set(&[4, 5]), &[0, 1, 2]).unwrap();
                let t = TemplateSpace::new(3).nth(idx).unwrap();
                if is_template_valid(&t, &base, n).unwrap() {
                    let w = realize_template(&t, &base, 2 * n).unwrap();
                    for i in 0..3 {
                        let col = w.column(i);
                        prop_assert!(col.iter().all(|&u| col.iter().all(|&v| !w.graph.adjacent(u, v))));
                    }
                }
            }

            #[test]
            fn short_tuples_give_kn_minus_one_free_windows(seed in 0u64..10_000, idx in 0usize..567) {
                // Tuples shorter than n - 1 at n = 5.
                let g = random_kn_free(5, 6, 0.6, seed);
                let base = SequenceBase::new(&g, &set(&[3, 4, 5]), &[0, 1, 2]).unwrap();
                let t = TemplateSpace::new(3).nth(idx).unwrap();
                if is_template_valid(&t, &base, 5).unwrap() {
                    let w = realize_template(&t, &base, 8).unwrap();
                    let copies: VertexSet = w.copies.iter().flatten().copied().collect();
                    prop_assert!(is_kn_free(&w.graph.induced(&copies), 4));
                }
            }
        }
    }
}
