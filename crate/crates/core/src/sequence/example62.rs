//! A formula that forks without dividing: `C` a clique on `n - 3` vertices,
//! four pairwise non-adjacent parameters joined to all of `C`, and the
//! disjunction over pairs `i < j` of "x is adjacent to C, b_i and b_j".

use serde::Serialize;

use super::lemma61::edge_free_pair;
use super::{
    is_template_valid, realize_template, union_type, SequenceBase, SequenceError, SequenceTemplate,
    TemplateSpace,
};
use crate::formula::{is_consistent, ConjFormula, Conjunct, Term, Theory};
use crate::graph::{is_kn_free, Graph, PointedGraph, VertexId};
use crate::independence::{divides_formula, DivideReason};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example62 {
    pub n: usize,
    pub pointed: PointedGraph,
    pub tuple: Vec<VertexId>,
    /// Parameter positions of each disjunct, in the order of `disjuncts`.
    pub pairs: Vec<(usize, usize)>,
    pub disjuncts: Vec<ConjFormula>,
}

pub fn build_example_62(n: usize) -> Result<Example62, SequenceError> {
    if n < 3 {
        return Err(SequenceError::SmallN(n));
    }
    let k = (n - 3) as VertexId;
    let base: Vec<VertexId> = (0..k).collect();
    let tuple: Vec<VertexId> = (k..k + 4).collect();
    let mut edges = Vec::new();
    for (i, &c) in base.iter().enumerate() {
        edges.extend(base[i + 1..].iter().map(|&d| (c, d)));
        edges.extend(tuple.iter().map(|&b| (b, c)));
    }
    let graph = Graph::from_edges(0..k + 4, edges)?;
    let pointed = PointedGraph::with_base(graph, base.iter().copied().collect())?;
    let pairs: Vec<(usize, usize)> = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .collect();
    let disjuncts = pairs
        .iter()
        .map(|&(i, j)| pair_formula(&base, i, j))
        .collect();
    Ok(Example62 {
        n,
        pointed,
        tuple,
        pairs,
        disjuncts,
    })
}

fn pair_formula(base: &[VertexId], i: usize, j: usize) -> ConjFormula {
    let conj = base
        .iter()
        .map(|&c| Conjunct::edge(Term::X(0), Term::Const(c)))
        .chain([
            Conjunct::edge(Term::X(0), Term::Y(i)),
            Conjunct::edge(Term::X(0), Term::Y(j)),
        ]);
    ConjFormula::new(1, 4, conj).expect("well-formed disjunct")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Example62Report {
    pub n: usize,
    pub l_max: usize,
    pub disjuncts: usize,
    pub dividing_disjuncts: usize,
    pub forks: bool,
    pub templates_scanned: u64,
    pub valid_templates: u64,
    pub realized: u64,
    pub violations: u64,
    pub counterexample: Option<SequenceTemplate>,
    pub non_dividing: bool,
}

impl Example62Report {
    pub fn ok(&self) -> bool {
        self.forks && self.non_dividing
    }
}

pub fn verify_example_62(n: usize, l_max: usize) -> Result<Example62Report, SequenceError> {
    verify_example_62_on(&build_example_62(n)?, l_max)
}

fn check_shape(ex: &Example62) -> Result<(), SequenceError> {
    let bad = |msg: &str| Err(SequenceError::Precondition(msg.to_string()));
    let g = &ex.pointed.graph;
    let c: Vec<VertexId> = ex.pointed.base.iter().copied().collect();
    if ex.n < 3 {
        return Err(SequenceError::SmallN(ex.n));
    }
    if c.len() != ex.n - 3 {
        return bad("base set must have n - 3 vertices");
    }
    if c.iter()
        .any(|&u| c.iter().any(|&v| u != v && !g.adjacent(u, v)))
    {
        return bad("base set must be a clique");
    }
    if ex.tuple.len() != 4 {
        return bad("tuple must have four entries");
    }
    let b = &ex.tuple;
    if b.iter().any(|&u| b.iter().any(|&v| g.adjacent(u, v))) {
        return bad("tuple must be edge-free");
    }
    if b.iter().any(|&u| c.iter().any(|&v| !g.adjacent(u, v))) {
        return bad("every tuple entry must be adjacent to the whole base");
    }
    if !is_kn_free(g, ex.n) {
        return bad("ambient graph contains K_n");
    }
    Ok(())
}

/// Checks that every disjunct divides and that no valid sequence template
/// makes the disjunction inconsistent. The second half looks, in each
/// window of length `l_max`, for two columns that are jointly edge-free and
/// realises the matching disjunct along all copies at once.
pub fn verify_example_62_on(
    ex: &Example62,
    l_max: usize,
) -> Result<Example62Report, SequenceError> {
    check_shape(ex)?;
    let n = ex.n;
    let g = &ex.pointed.graph;
    let c = &ex.pointed.base;
    let mut dividing = 0;
    for d in &ex.disjuncts {
        let v = divides_formula(d, &ex.tuple, g, c, n)
            .map_err(|e| SequenceError::Precondition(e.to_string()))?;
        if v.divides && v.reason == DivideReason::KnPhiBound {
            dividing += 1;
        }
    }
    let base = SequenceBase::new(g, c, &ex.tuple)?;
    let mut r = Example62Report {
        n,
        l_max,
        disjuncts: ex.disjuncts.len(),
        dividing_disjuncts: dividing,
        forks: dividing == ex.disjuncts.len() && dividing > 0,
        templates_scanned: 0,
        valid_templates: 0,
        realized: 0,
        violations: 0,
        counterexample: None,
        non_dividing: false,
    };
    for t in TemplateSpace::new(4) {
        r.templates_scanned += 1;
        if !is_template_valid(&t, &base, n)? {
            continue;
        }
        r.valid_templates += 1;
        let w = realize_template(&t, &base, l_max)?;
        let realized = edge_free_pair(&w, 4).is_some_and(|pair| {
            let d = &ex.disjuncts[ex
                .pairs
                .iter()
                .position(|&p| p == pair)
                .expect("pair listed")];
            let p = union_type(d, &w, l_max).expect("window has l_max copies");
            is_consistent(&p, &w.graph, n, Theory::Tn)
        });
        if realized {
            r.realized += 1;
        } else {
            r.violations += 1;
            r.counterexample.get_or_insert(t);
        }
    }
    r.non_dividing = r.violations == 0 && r.valid_templates > 0;
    Ok(r)
}
