//! End-to-end examples through the public API, one module after another.

use henson_core::formula::{
    instantiate, is_consistent, optimal_candidate, r_phi_support, ConjFormula, Conjunct,
    FormulaClass, Term, Theory,
};
use henson_core::graph::{
    find_clique, is_kn_free, qf_type_equal_over, random_kn_free, Graph, VertexId, VertexSet,
};
use henson_core::independence::{
    divides_formula, divides_formula_t0, dividing_indep, edge_indep, forking_indep,
    forks_disjunction, full_existence, kn_bound, kphi_bound, DivideReason, Violation,
};
use henson_core::oracle::{
    check_certificate, divides_oracle, divides_oracle_disjunction, divides_oracle_t0,
    dividing_indep_oracle,
};
use henson_core::sequence::{
    build_example_62, check_k_inconsistent, classify, enumerate_templates, gamma, gamma_template,
    realize_template, verify_example_62, Branch, SequenceBase, SequenceTemplate,
};

use Term::{Const, X, Y};

fn set(vs: &[VertexId]) -> VertexSet {
    vs.iter().copied().collect()
}

/// `x` adjacent to both parameters.
fn both() -> ConjFormula {
    ConjFormula::new(
        1,
        2,
        [Conjunct::edge(X(0), Y(0)), Conjunct::edge(X(0), Y(1))],
    )
    .unwrap()
}

#[test]
fn clique_search_basics() {
    let tri = Graph::from_edges([1, 2, 3], [(1, 2), (2, 3), (1, 3)]).unwrap();
    assert_eq!(find_clique(&tri, 3).unwrap().members, vec![1, 2, 3]);
    let square = Graph::from_edges(0..4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    assert!(find_clique(&square, 3).is_none());
    assert!(is_kn_free(&Graph::from_edges([0, 1], [(0, 1)]).unwrap(), 3));
    let g = random_kn_free(3, 50, 0.3, 1);
    assert!(is_kn_free(&g, 3));
    assert_eq!(g, random_kn_free(3, 50, 0.3, 1));
}

#[test]
fn formula_classes_and_support() {
    assert_eq!(
        ConjFormula::new(1, 1, [Conjunct::edge(X(0), Y(0))])
            .unwrap()
            .class(),
        FormulaClass::LR
    );
    let l0 = ConjFormula::new(
        1,
        1,
        [Conjunct::eq(X(0), Y(0)), Conjunct::edge(X(0), Const(5))],
    )
    .unwrap();
    assert_eq!(l0.class(), FormulaClass::L0);
    assert!(ConjFormula::new(2, 0, [Conjunct::eq(X(0), X(1))]).is_err());
    assert_eq!(
        r_phi_support(&both(), &[4, 6]),
        (set(&[4, 6]), [0].into_iter().collect())
    );
    let neg = ConjFormula::new(1, 1, [Conjunct::non_edge(X(0), Y(0))]).unwrap();
    assert_eq!(r_phi_support(&neg, &[4]).0, set(&[]));
}

#[test]
fn optimal_solution_and_consistency() {
    let g = Graph::empty([1, 2]);
    let p = instantiate(&both(), &[1, 2], &g, &set(&[])).unwrap();
    let cand = optimal_candidate(&p, &g).unwrap();
    let x = cand.assignment[&0];
    assert_eq!(cand.extension.neighbors(x), vec![1, 2]);
    assert!(is_consistent(&p, &g, 3, Theory::Tn));
    let joined = Graph::from_edges([1, 2], [(1, 2)]).unwrap();
    assert!(!is_consistent(&p, &joined, 3, Theory::Tn));
    assert!(is_consistent(&p, &joined, 3, Theory::T0));
}

#[test]
fn bound_relations() {
    let g = Graph::from_edges([0, 1, 2], [(0, 1), (0, 2)]).unwrap();
    assert_eq!(
        kn_bound(&set(&[1, 2]), &set(&[0]), &g, 3)
            .unwrap()
            .unwrap()
            .b0,
        vec![0, 1, 2]
    );
    assert!(kn_bound(&set(&[1, 2]), &set(&[]), &g, 3).unwrap().is_none());
    let g = Graph::from_edges([0, 1, 2], [(0, 1), (1, 2)]).unwrap();
    assert!(kn_bound(&set(&[2]), &set(&[0, 1]), &g, 3)
        .unwrap()
        .is_none());
}

#[test]
fn pair_example_divides_through_gamma() {
    let g = Graph::empty([0, 1]);
    let empty = set(&[]);
    let f = both();
    let w = kphi_bound(&f, &[0, 1], &g, &empty, 3).unwrap().unwrap();
    assert_eq!(w.subset, vec![0, 1]);
    let v = divides_formula(&f, &[0, 1], &g, &empty, 3).unwrap();
    assert_eq!((v.divides, v.reason), (true, DivideReason::KnPhiBound));

    let seq = SequenceBase::new(&g, &empty, &[0, 1]).unwrap();
    let t = gamma_template(&seq, &set(&[0, 1])).unwrap();
    let window = gamma(&seq, &set(&[0, 1]), 3).unwrap();
    assert_eq!(realize_template(&t, &seq, 3).unwrap().graph, window.graph);
    assert!(is_kn_free(&window.graph, 3));
    for (l, earlier) in window.copies.iter().enumerate() {
        for later in &window.copies[l + 1..] {
            assert!(window.graph.adjacent(earlier[0], later[1]));
            assert!(!window.graph.adjacent(earlier[1], later[0]));
            assert!(
                !window.graph.adjacent(earlier[0], later[0])
                    && !window.graph.adjacent(earlier[1], later[1])
            );
        }
    }
    assert!(!check_k_inconsistent(&f, &window, 1, 3).unwrap());
    assert!(check_k_inconsistent(&f, &window, 2, 3).unwrap());

    let o = divides_oracle(&f, &[0, 1], &g, &empty, 3, 4).unwrap();
    assert!(o.divides);
    assert_eq!(o.k, Some(2));
    assert!(check_certificate(&f, &[0, 1], &g, &empty, 3, Theory::Tn, &o).unwrap());
}

#[test]
fn bound_base_blocks_dividing() {
    // C = {c} already joined to both parameters.
    let g = Graph::from_edges([0, 1, 2], [(0, 1), (0, 2)]).unwrap();
    let c = set(&[0]);
    assert!(kphi_bound(&both(), &[1, 2], &g, &c, 3).unwrap().is_none());
    assert!(
        !divides_oracle(&both(), &[1, 2], &g, &c, 3, 4)
            .unwrap()
            .divides
    );
}

#[test]
fn no_positive_parameter_edge() {
    let g = Graph::from_edges([0, 1], [(0, 1)]).unwrap();
    let c = set(&[0]);
    let f = ConjFormula::new(
        1,
        1,
        [
            Conjunct::non_edge(X(0), Y(0)),
            Conjunct::edge(X(0), Const(0)),
        ],
    )
    .unwrap();
    assert!(!divides_formula(&f, &[1], &g, &c, 3).unwrap().divides);
    assert!(!divides_oracle(&f, &[1], &g, &c, 3, 4).unwrap().divides);
}

#[test]
fn random_graph_baseline() {
    let g = Graph::empty([0, 1]);
    let e = set(&[]);
    let edge = ConjFormula::new(1, 1, [Conjunct::edge(X(0), Y(0))]).unwrap();
    let eq = ConjFormula::new(1, 1, [Conjunct::eq(X(0), Y(0))]).unwrap();
    assert!(!divides_formula_t0(&edge, &[0], &g, &e).unwrap().divides);
    assert!(!divides_oracle_t0(&edge, &[0], &g, &e, 4).unwrap().divides);
    let v = divides_formula_t0(&eq, &[0], &g, &e).unwrap();
    assert_eq!(v.reason, DivideReason::EqualityConjunct);
    assert!(divides_oracle_t0(&eq, &[0], &g, &e, 4).unwrap().divides);
    let clash =
        ConjFormula::new(1, 2, [Conjunct::eq(X(0), Y(0)), Conjunct::edge(X(0), Y(1))]).unwrap();
    assert_eq!(
        divides_formula_t0(&clash, &[0, 1], &g, &e).unwrap().reason,
        DivideReason::Inconsistent
    );
}

#[test]
fn independence_relations() {
    // a = 0 joined to the non-adjacent pair 1, 2.
    let g = Graph::from_edges(0..3, [(0, 1), (0, 2)]).unwrap();
    let (a, b, c) = (set(&[0]), set(&[1, 2]), set(&[]));
    let v = dividing_indep(&a, &b, &c, &g, 3);
    assert!(!v.independent);
    assert!(
        matches!(v.violation, Some(Violation::Bound { ref subset, .. }) if subset == &vec![1, 2])
    );
    assert!(!dividing_indep_oracle(&a, &b, &c, &g, 3, 4).unwrap());
    assert_eq!(forking_indep(&a, &b, &c, &g, 3), v);
    assert!(!edge_indep(&a, &b, &c, &g));

    let shared = dividing_indep(&set(&[1]), &b, &c, &g, 3);
    assert_eq!(
        shared.violation,
        Some(Violation::SharedVertex { vertex: 1 })
    );
    assert!(dividing_indep(&set(&[]), &b, &c, &g, 3).independent);

    let h = Graph::from_edges(0..4, [(0, 1), (2, 3)]).unwrap();
    assert!(edge_indep(&set(&[0, 1]), &set(&[2, 3]), &c, &h));
    assert!(dividing_indep(&set(&[0, 1]), &set(&[2, 3]), &c, &h, 3).independent);
}

#[test]
fn full_existence_keeps_type_and_avoids_b() {
    for seed in 0..40 {
        let g = random_kn_free(3, 8, 0.5, seed);
        let (a, b, c) = (set(&[0, 1, 2]), set(&[1, 3, 4]), set(&[2, 5]));
        let fe = full_existence(&a, &b, &c, &g);
        assert!(is_kn_free(&fe.graph, 3));
        assert!(qf_type_equal_over(&fe.graph, &fe.original, &fe.copy, &c).unwrap());
        assert!(edge_indep(
            &fe.copy.iter().copied().collect(),
            &b,
            &c,
            &fe.graph
        ));
    }
}

#[test]
fn templates_and_validity() {
    let g = Graph::empty([0, 1]);
    let seq = SequenceBase::new(&g, &set(&[0]), &[1]).unwrap();
    let valid: Vec<SequenceTemplate> = enumerate_templates(&seq, 3, Theory::Tn).collect();
    assert_eq!(
        valid,
        vec![
            SequenceTemplate::disconnected(1),
            SequenceTemplate::new(1, [0], []).unwrap()
        ]
    );
    let vertical = SequenceTemplate::new(1, [], [(0, 0)]).unwrap();
    assert!(find_clique(&realize_template(&vertical, &seq, 3).unwrap().graph, 3).is_some());
    let w = realize_template(&SequenceTemplate::disconnected(1), &seq, 1).unwrap();
    assert_eq!(w.copies, vec![vec![1]]);
}

#[test]
fn four_columns_without_edge_free_pair_have_a_triangle() {
    let cross = (0..4).flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)));
    assert_eq!(
        classify(&SequenceTemplate::new(4, [], cross).unwrap()),
        Branch::Triangle
    );
    assert_eq!(
        classify(&SequenceTemplate::disconnected(4)),
        Branch::EdgeFreePair(0, 1)
    );
}

#[test]
fn disjunction_forks_without_dividing() {
    let ex = build_example_62(3).unwrap();
    let g = &ex.pointed.graph;
    let c = &ex.pointed.base;
    let (forks, verdicts) = forks_disjunction(&ex.disjuncts, &ex.tuple, g, c, 3).unwrap();
    assert!(forks && verdicts.len() == 6);
    assert_eq!(
        r_phi_support(&ex.disjuncts[0], &ex.tuple).0,
        set(&ex.tuple[..2])
    );
    assert!(
        !divides_oracle_disjunction(&ex.disjuncts, &ex.tuple, g, c, 3, 4)
            .unwrap()
            .divides
    );
    let r = verify_example_62(4, 6).unwrap();
    assert!(r.ok(), "{r:?}");
}
