//! Invariant checks shared by the fuzz harness and the acceptance suite.
//! Each returns `Err` with a one-line description of the first violation.

use henson_core::formula::{ConjFormula, LiteralKind, Term};
use henson_core::graph::{is_kn_free, qf_type_equal_over, Graph, VertexId, VertexSet};
use henson_core::independence::{
    dividing_indep, edge_indep, full_existence, DivideReason, DividesVerdict, VerdictWitness,
};
use henson_core::sequence::{check_k_inconsistent, gamma, SequenceBase, SequenceWindow};

/// A dividing `L_R` formula mentions edges among at least `n` elements,
/// more than one of them a parameter; a formula with no positive edge
/// from a variable to a parameter does not divide.
pub fn necessary_conditions(
    f: &ConjFormula,
    b: &[VertexId],
    n: usize,
    v: &DividesVerdict,
) -> Result<(), String> {
    if v.reason == DivideReason::KnPhiBound {
        let (support, vars) = henson_core::formula::r_phi_support(f, b);
        let size = support.len() + vars.len();
        if size < n {
            return Err(format!(
                "dividing formula has only {size} elements in its edge support, fewer than n = {n}"
            ));
        }
        let params = b.iter().filter(|v| support.contains(v)).count();
        if params < 2 {
            return Err(format!(
                "dividing formula has {params} parameter in its edge support"
            ));
        }
    }
    let positive_xy = f.conjuncts().any(|c| {
        c.kind == LiteralKind::Edge
            && matches!(
                (c.lhs, c.rhs),
                (Term::X(_), Term::Y(_)) | (Term::Y(_), Term::X(_))
            )
    });
    if !positive_xy && v.reason == DivideReason::KnPhiBound {
        return Err(
            "formula without a positive variable-parameter edge reported as dividing".into(),
        );
    }
    Ok(())
}

/// The Γ window of length `n` is `K_n`-free and its first `n - 1` copies
/// make `f` inconsistent.
pub fn gamma_window(f: &ConjFormula, w: &SequenceWindow, n: usize) -> Result<(), String> {
    if !is_kn_free(&w.graph, n) {
        return Err("gamma window contains K_n".into());
    }
    match check_k_inconsistent(f, w, n - 1, n) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("gamma window is consistent at width {}", n - 1)),
        Err(e) => Err(e.to_string()),
    }
}

/// The Γ window built from the subset in a `K_n^φ` witness.
pub fn gamma_for_verdict(
    f: &ConjFormula,
    b: &[VertexId],
    g: &Graph,
    base: &VertexSet,
    n: usize,
    v: &DividesVerdict,
) -> Result<(), String> {
    let Some(VerdictWitness::Bound(w)) = &v.witness else {
        return Ok(());
    };
    let seq = SequenceBase::new(g, base, b).map_err(|e| e.to_string())?;
    let window = gamma(&seq, &w.subset.iter().copied().collect(), n).map_err(|e| e.to_string())?;
    gamma_window(f, &window, n)
}

/// The copy of `A` has the same type over `C`, is edge-independent from
/// `B` over `C`, and the enlarged graph stays `K_n`-free.
pub fn full_existence_props(
    a: &VertexSet,
    b: &VertexSet,
    c: &VertexSet,
    g: &Graph,
    n: usize,
) -> Result<(), String> {
    let fe = full_existence(a, b, c, g);
    if !qf_type_equal_over(&fe.graph, &fe.original, &fe.copy, c).map_err(|e| e.to_string())? {
        return Err("copy has a different type over C".into());
    }
    let copy: VertexSet = fe.copy.iter().copied().collect();
    if !edge_indep(&copy, b, c, &fe.graph) {
        return Err("copy is not edge-independent from B over C".into());
    }
    if is_kn_free(g, n) && !is_kn_free(&fe.graph, n) {
        return Err("copying created K_n".into());
    }
    Ok(())
}

/// With `A` dividing-independent from `B` over `C` and `D ⊇ B`, the copy of
/// `A` over `B ∪ C` that avoids `D` is dividing-independent from `D` over `C`.
pub fn forking_mechanism(
    a: &VertexSet,
    b: &VertexSet,
    c: &VertexSet,
    d: &VertexSet,
    g: &Graph,
    n: usize,
) -> Result<(), String> {
    if !dividing_indep(a, b, c, g, n).independent {
        return Ok(());
    }
    let bc: VertexSet = b.union(c).copied().collect();
    let fe = full_existence(a, d, &bc, g);
    if !qf_type_equal_over(&fe.graph, &fe.original, &fe.copy, &bc).map_err(|e| e.to_string())? {
        return Err("copy has a different type over B ∪ C".into());
    }
    let copy: VertexSet = fe.copy.iter().copied().collect();
    let bd: VertexSet = b.union(d).copied().collect();
    let v = dividing_indep(&copy, &bd, c, &fe.graph, n);
    if !v.independent {
        return Err(format!(
            "copy is not dividing-independent from B ∪ D over C: {:?}",
            v.violation
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use henson_core::formula::Conjunct;
    use henson_core::independence::divides_formula;

    #[test]
    fn pair_example_passes_every_check() {
        let g = Graph::empty([0, 1]);
        let f = ConjFormula::new(
            1,
            2,
            [
                Conjunct::edge(Term::X(0), Term::Y(0)),
                Conjunct::edge(Term::X(0), Term::Y(1)),
            ],
        )
        .unwrap();
        let base = VertexSet::new();
        let v = divides_formula(&f, &[0, 1], &g, &base, 3).unwrap();
        assert!(v.divides);
        necessary_conditions(&f, &[0, 1], 3, &v).unwrap();
        gamma_for_verdict(&f, &[0, 1], &g, &base, 3, &v).unwrap();
    }

    #[test]
    fn lying_verdict_is_caught() {
        let f = ConjFormula::new(1, 2, [Conjunct::edge(Term::X(0), Term::Y(0))]).unwrap();
        let v = DividesVerdict {
            divides: true,
            reason: DivideReason::KnPhiBound,
            witness: None,
        };
        assert!(necessary_conditions(&f, &[0, 1], 3, &v).is_err());
    }

    #[test]
    fn mechanism_on_path() {
        // Only 0 - 1 is an edge; B = {2} is isolated and D adds 1.
        let g = Graph::from_edges(0..4, [(0, 1)]).unwrap();
        let set = |v: &[VertexId]| v.iter().copied().collect::<VertexSet>();
        forking_mechanism(&set(&[0]), &set(&[2]), &set(&[]), &set(&[1, 2]), &g, 3).unwrap();
        full_existence_props(&set(&[0, 3]), &set(&[1]), &set(&[3]), &g, 3).unwrap();
    }
}
