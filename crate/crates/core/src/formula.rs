//! Conjunctions of (negated) atomic graph formulas, their instances over a
//! parameter tuple, and consistency through optimal candidates.
//!
//! A [`ConjFormula`] lives in variables `x1..xk`, parameter variables
//! `y1..ym` and constants from the base set. Instantiating the `y`s with a
//! tuple turns it into an [`RType`]: constraints on the free `x`s against
//! concrete vertices. Equalities `xi = yj` are eliminated by substitution at
//! that point, so everything downstream works on pure edge constraints.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{find_clique, Graph, VertexId, VertexSet};

/// A variable or constant slot in a formula. Indices are zero-based;
/// the textual form is one-based (`x1`, `y2`, `c:17`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    X(usize),
    Y(usize),
    Const(VertexId),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::X(i) => write!(f, "x{}", i + 1),
            Term::Y(j) => write!(f, "y{}", j + 1),
            Term::Const(c) => write!(f, "c:{c}"),
        }
    }
}

impl FromStr for Term {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FormulaError::BadTerm(s.to_string());
        if let Some(rest) = s.strip_prefix("c:") {
            return rest.parse().map(Term::Const).map_err(|_| bad());
        }
        let (head, digits) = s.split_at(s.len().min(1));
        let idx: usize = digits.parse().map_err(|_| bad())?;
        if idx == 0 {
            return Err(bad());
        }
        match head {
            "x" => Ok(Term::X(idx - 1)),
            "y" => Ok(Term::Y(idx - 1)),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for Term {
    type Error = FormulaError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Term> for String {
    fn from(t: Term) -> String {
        t.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LiteralKind {
    Edge,
    NonEdge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Conjunct {
    pub kind: LiteralKind,
    #[serde(with = "term_string")]
    pub lhs: Term,
    #[serde(with = "term_string")]
    pub rhs: Term,
}

mod term_string {
    use super::Term;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &Term, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(t)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Term, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Conjunct {
    pub fn edge(a: Term, b: Term) -> Self {
        Conjunct {
            kind: LiteralKind::Edge,
            lhs: a,
            rhs: b,
        }
        .canonical()
    }

    pub fn non_edge(a: Term, b: Term) -> Self {
        Conjunct {
            kind: LiteralKind::NonEdge,
            lhs: a,
            rhs: b,
        }
        .canonical()
    }

    pub fn eq(a: Term, b: Term) -> Self {
        Conjunct {
            kind: LiteralKind::Eq,
            lhs: a,
            rhs: b,
        }
        .canonical()
    }

    /// The same literal with its endpoints in ascending order. A literal and
    /// its mirror share one canonical form.
    pub fn canonical(self) -> Self {
        if self.lhs <= self.rhs {
            self
        } else {
            Conjunct {
                kind: self.kind,
                lhs: self.rhs,
                rhs: self.lhs,
            }
        }
    }

    fn terms(&self) -> [Term; 2] {
        [self.lhs, self.rhs]
    }
}

impl fmt::Display for Conjunct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LiteralKind::Edge => write!(f, "{} R {}", self.lhs, self.rhs),
            LiteralKind::NonEdge => write!(f, "¬{} R {}", self.lhs, self.rhs),
            LiteralKind::Eq => write!(f, "{} = {}", self.lhs, self.rhs),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FormulaClass {
    /// Some conjunct is `xi = yj`.
    L0,
    /// No equality conjuncts.
    LR,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("forbidden conjunct `{0}`: only equalities between an x and a y variable are allowed")]
    ForbiddenEquality(Conjunct),
    #[error("term {term} out of range for arities x={x_arity}, y={y_arity}")]
    IndexOutOfRange {
        term: Term,
        x_arity: usize,
        y_arity: usize,
    },
    #[error("formula needs at least one x variable")]
    NoFreeVariables,
    #[error("cannot parse term `{0}`")]
    BadTerm(String),
    #[error("expected {expected} parameters, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("parameter {0} lies in the base set; fold it into the formula as a constant")]
    ParameterInBase(VertexId),
    #[error("constant {0} is not in the base set")]
    ConstantOutsideBase(VertexId),
    #[error("parameter {0} appears twice in the tuple")]
    RepeatedParameter(VertexId),
    #[error("vertex {0} is not in the ambient graph")]
    UnknownVertex(VertexId),
    #[error("type is contradictory: {0}")]
    Contradictory(Contradiction),
    #[error("ambient literal `{0}` does not hold")]
    AmbientLiteralFails(RLiteral),
    #[error("instantiating {0} variables does not match an R-type of arity {1}")]
    UnionArity(usize, usize),
}

/// A conjunction in `L_0(C)`, stored canonically: literals are
/// order-normalised and deduplicated, so symmetric closure is implicit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "FormulaJson", into = "FormulaJson")]
pub struct ConjFormula {
    x_arity: usize,
    y_arity: usize,
    conjuncts: BTreeSet<Conjunct>,
}

impl ConjFormula {
    /// Validates and canonicalises. Rejects equalities other than `xi = yj`
    /// and out-of-range variable indices. Contradictory conjunct sets are
    /// accepted and reported by [`ConjFormula::is_contradictory`].
    pub fn new(
        x_arity: usize,
        y_arity: usize,
        conjuncts: impl IntoIterator<Item = Conjunct>,
    ) -> Result<Self, FormulaError> {
        if x_arity == 0 {
            return Err(FormulaError::NoFreeVariables);
        }
        let mut set = BTreeSet::new();
        for c in conjuncts {
            let c = c.canonical();
            for t in c.terms() {
                let ok = match t {
                    Term::X(i) => i < x_arity,
                    Term::Y(j) => j < y_arity,
                    Term::Const(_) => true,
                };
                if !ok {
                    return Err(FormulaError::IndexOutOfRange {
                        term: t,
                        x_arity,
                        y_arity,
                    });
                }
            }
            if c.kind == LiteralKind::Eq && !matches!((c.lhs, c.rhs), (Term::X(_), Term::Y(_))) {
                return Err(FormulaError::ForbiddenEquality(c));
            }
            set.insert(c);
        }
        Ok(ConjFormula {
            x_arity,
            y_arity,
            conjuncts: set,
        })
    }

    pub fn x_arity(&self) -> usize {
        self.x_arity
    }

    pub fn y_arity(&self) -> usize {
        self.y_arity
    }

    pub fn conjuncts(&self) -> impl Iterator<Item = &Conjunct> {
        self.conjuncts.iter()
    }

    pub fn contains(&self, c: &Conjunct) -> bool {
        self.conjuncts.contains(&c.canonical())
    }

    pub fn class(&self) -> FormulaClass {
        if self.equalities().next().is_some() {
            FormulaClass::L0
        } else {
            FormulaClass::LR
        }
    }

    pub fn equalities(&self) -> impl Iterator<Item = &Conjunct> {
        self.conjuncts.iter().filter(|c| c.kind == LiteralKind::Eq)
    }

    pub fn constants(&self) -> VertexSet {
        self.conjuncts
            .iter()
            .flat_map(|c| c.terms())
            .filter_map(|t| match t {
                Term::Const(c) => Some(c),
                _ => None,
            })
            .collect()
    }

    /// A literal together with its negation, or a positive loop `t R t`.
    pub fn is_contradictory(&self) -> bool {
        self.conjuncts.iter().any(|c| match c.kind {
            LiteralKind::Edge => {
                c.lhs == c.rhs
                    || self.conjuncts.contains(&Conjunct {
                        kind: LiteralKind::NonEdge,
                        ..*c
                    })
            }
            _ => false,
        })
    }

    /// Whether some conjunct is a positive edge between an x and a y.
    pub fn has_positive_xy_edge(&self) -> bool {
        self.conjuncts.iter().any(|c| {
            c.kind == LiteralKind::Edge && matches!((c.lhs, c.rhs), (Term::X(_), Term::Y(_)))
        })
    }
}

impl fmt::Display for ConjFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conjuncts.is_empty() {
            return write!(f, "⊤");
        }
        let parts: Vec<String> = self.conjuncts.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" ∧ "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaJson {
    pub x_arity: usize,
    pub y_arity: usize,
    pub conjuncts: Vec<Conjunct>,
}

impl TryFrom<FormulaJson> for ConjFormula {
    type Error = FormulaError;
    fn try_from(j: FormulaJson) -> Result<Self, Self::Error> {
        ConjFormula::new(j.x_arity, j.y_arity, j.conjuncts)
    }
}

impl From<ConjFormula> for FormulaJson {
    fn from(f: ConjFormula) -> Self {
        FormulaJson {
            x_arity: f.x_arity,
            y_arity: f.y_arity,
            conjuncts: f.conjuncts.into_iter().collect(),
        }
    }
}

/// A single conjunction or a top-level disjunction of conjunctions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Formula {
    Disj { disjuncts: Vec<ConjFormula> },
    Conj(ConjFormula),
}

/// Read off the positive edge conjuncts between an x and a parameter or
/// constant: the parameters/constants they mention, and the x indices.
pub fn r_phi_support(f: &ConjFormula, b: &[VertexId]) -> (VertexSet, BTreeSet<usize>) {
    let mut vertices = VertexSet::new();
    let mut vars = BTreeSet::new();
    for c in f.conjuncts().filter(|c| c.kind == LiteralKind::Edge) {
        let (x, other) = match (c.lhs, c.rhs) {
            (Term::X(i), o @ (Term::Y(_) | Term::Const(_))) => (i, o),
            _ => continue,
        };
        let v = match other {
            Term::Y(j) => b[j],
            Term::Const(c) => c,
            Term::X(_) => unreachable!(),
        };
        vertices.insert(v);
        vars.insert(x);
    }
    (vertices, vars)
}

/// A side of an R-type literal: a free variable or an ambient vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RTerm {
    Var(usize),
    Vertex(VertexId),
}

impl fmt::Display for RTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RTerm::Var(i) => write!(f, "x{}", i + 1),
            RTerm::Vertex(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RLiteral {
    pub lhs: RTerm,
    pub rhs: RTerm,
    pub positive: bool,
}

impl RLiteral {
    pub fn new(positive: bool, a: RTerm, b: RTerm) -> Self {
        let (lhs, rhs) = if a <= b { (a, b) } else { (b, a) };
        RLiteral { lhs, rhs, positive }
    }

    fn negated(self) -> Self {
        RLiteral {
            positive: !self.positive,
            ..self
        }
    }
}

impl fmt::Display for RLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let neg = if self.positive { "" } else { "¬" };
        write!(f, "{neg}{} R {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Contradiction {
    /// One variable identified with two different vertices.
    Binding {
        var: usize,
        first: VertexId,
        second: VertexId,
    },
    /// `t R t` after substitution.
    Loop(RTerm),
    /// A literal and its negation.
    Clash(RLiteral),
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Contradiction::Binding { var, first, second } => {
                write!(f, "x{} = {first} and x{} = {second}", var + 1, var + 1)
            }
            Contradiction::Loop(t) => write!(f, "{t} R {t}"),
            Contradiction::Clash(l) => write!(f, "both {l} and its negation"),
        }
    }
}

/// Edge constraints on variables `x1..xk` against ambient vertices.
///
/// Variables identified with a vertex (from an equality conjunct) are
/// substituted away and no longer count as fresh. The pre-substitution
/// literals are kept so that unions re-substitute correctly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RType {
    arity: usize,
    bindings: BTreeMap<usize, VertexId>,
    raw: BTreeSet<RLiteral>,
    literals: BTreeSet<RLiteral>,
    contradiction: Option<Contradiction>,
}

impl RType {
    /// Builds an R-type over variables `0..arity` from literals and
    /// variable-to-vertex identifications.
    pub fn new(
        arity: usize,
        bindings: impl IntoIterator<Item = (usize, VertexId)>,
        literals: impl IntoIterator<Item = RLiteral>,
    ) -> Self {
        let mut map = BTreeMap::new();
        let mut conflict = None;
        for (var, v) in bindings {
            bind(&mut map, &mut conflict, var, v);
        }
        let raw = literals
            .into_iter()
            .map(|l| RLiteral::new(l.positive, l.lhs, l.rhs))
            .collect();
        RType::normalised(arity, map, raw, conflict)
    }

    fn normalised(
        arity: usize,
        bindings: BTreeMap<usize, VertexId>,
        raw: BTreeSet<RLiteral>,
        mut contradiction: Option<Contradiction>,
    ) -> Self {
        let subst = |t: RTerm| match t {
            RTerm::Var(i) => bindings.get(&i).map_or(t, |&v| RTerm::Vertex(v)),
            t => t,
        };
        let mut literals = BTreeSet::new();
        for l in &raw {
            let (a, b) = (subst(l.lhs), subst(l.rhs));
            if a == b {
                if l.positive && contradiction.is_none() {
                    contradiction = Some(Contradiction::Loop(a));
                }
                continue;
            }
            literals.insert(RLiteral::new(l.positive, a, b));
        }
        if contradiction.is_none() {
            contradiction = literals
                .iter()
                .find(|l| l.positive && literals.contains(&l.negated()))
                .map(|l| Contradiction::Clash(*l));
        }
        RType {
            arity,
            bindings,
            raw,
            literals,
            contradiction,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Unbound variables, in order.
    pub fn fresh_vars(&self) -> Vec<usize> {
        (0..self.arity)
            .filter(|i| !self.bindings.contains_key(i))
            .collect()
    }

    pub fn fresh_var_names(&self) -> Vec<String> {
        self.fresh_vars()
            .into_iter()
            .map(|i| format!("x{}", i + 1))
            .collect()
    }

    pub fn bindings(&self) -> &BTreeMap<usize, VertexId> {
        &self.bindings
    }

    /// Literals after substitution.
    pub fn literals(&self) -> &BTreeSet<RLiteral> {
        &self.literals
    }

    pub fn contradiction(&self) -> Option<&Contradiction> {
        self.contradiction.as_ref()
    }

    pub fn is_contradictory(&self) -> bool {
        self.contradiction.is_some()
    }

    /// Joint constraints of two R-types on the same variables.
    pub fn union(&self, other: &RType) -> Result<RType, FormulaError> {
        if self.arity != other.arity {
            return Err(FormulaError::UnionArity(other.arity, self.arity));
        }
        let mut bindings = self.bindings.clone();
        let mut conflict = self
            .contradiction_of_bindings()
            .or(other.contradiction_of_bindings());
        for (&var, &v) in &other.bindings {
            bind(&mut bindings, &mut conflict, var, v);
        }
        let raw = self.raw.union(&other.raw).copied().collect();
        Ok(RType::normalised(self.arity, bindings, raw, conflict))
    }

    fn contradiction_of_bindings(&self) -> Option<Contradiction> {
        match &self.contradiction {
            Some(c @ Contradiction::Binding { .. }) => Some(c.clone()),
            _ => None,
        }
    }

    /// First literal between two ambient vertices whose truth in `g` differs
    /// from what the type requires.
    pub fn failing_ambient_literal(&self, g: &Graph) -> Option<RLiteral> {
        self.literals
            .iter()
            .copied()
            .find(|l| match (l.lhs, l.rhs) {
                (RTerm::Vertex(u), RTerm::Vertex(v)) => g.adjacent(u, v) != l.positive,
                _ => false,
            })
    }

    fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.literals
            .iter()
            .flat_map(|l| [l.lhs, l.rhs])
            .chain(self.bindings.values().map(|&v| RTerm::Vertex(v)))
            .filter_map(|t| match t {
                RTerm::Vertex(v) => Some(v),
                RTerm::Var(_) => None,
            })
    }
}

fn bind(
    map: &mut BTreeMap<usize, VertexId>,
    conflict: &mut Option<Contradiction>,
    var: usize,
    v: VertexId,
) {
    match map.get(&var) {
        Some(&w) if w != v => {
            if conflict.is_none() {
                *conflict = Some(Contradiction::Binding {
                    var,
                    first: w.min(v),
                    second: w.max(v),
                });
            }
        }
        _ => {
            map.insert(var, v);
        }
    }
}

/// Substitutes the tuple `b` for the `y`s of `f`. `base` is the parameter set
/// `C`; constants must lie in it and `b` must avoid it.
pub fn instantiate(
    f: &ConjFormula,
    b: &[VertexId],
    g: &Graph,
    base: &VertexSet,
) -> Result<RType, FormulaError> {
    if b.len() != f.y_arity() {
        return Err(FormulaError::ArityMismatch {
            expected: f.y_arity(),
            got: b.len(),
        });
    }
    let mut seen = VertexSet::new();
    for &v in b {
        if base.contains(&v) {
            return Err(FormulaError::ParameterInBase(v));
        }
        if !seen.insert(v) {
            return Err(FormulaError::RepeatedParameter(v));
        }
        if !g.contains(v) {
            return Err(FormulaError::UnknownVertex(v));
        }
    }
    for c in f.constants() {
        if !base.contains(&c) {
            return Err(FormulaError::ConstantOutsideBase(c));
        }
        if !g.contains(c) {
            return Err(FormulaError::UnknownVertex(c));
        }
    }
    Ok(instantiate_unchecked(f, b))
}

/// [`instantiate`] without the precondition checks.
pub(crate) fn instantiate_unchecked(f: &ConjFormula, b: &[VertexId]) -> RType {
    let term = |t: Term| match t {
        Term::X(i) => RTerm::Var(i),
        Term::Y(j) => RTerm::Vertex(b[j]),
        Term::Const(c) => RTerm::Vertex(c),
    };
    let mut bindings = Vec::new();
    let mut literals = Vec::new();
    for c in f.conjuncts() {
        match (c.kind, c.lhs, c.rhs) {
            (LiteralKind::Eq, Term::X(i), Term::Y(j)) => bindings.push((i, b[j])),
            (LiteralKind::Eq, ..) => unreachable!("validated formula"),
            (kind, l, r) => {
                literals.push(RLiteral::new(kind == LiteralKind::Edge, term(l), term(r)))
            }
        }
    }
    RType::new(f.x_arity(), bindings, literals)
}

/// A realisation of an R-type by fresh vertices carrying exactly the
/// positive edges the type asks for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalCandidate {
    pub extension: Graph,
    /// Fresh variable index to its new vertex.
    pub assignment: BTreeMap<usize, VertexId>,
}

impl OptimalCandidate {
    /// Vertex realising variable `i`, whether fresh or identified.
    pub fn value_of(&self, p: &RType, i: usize) -> Option<VertexId> {
        self.assignment
            .get(&i)
            .or_else(|| p.bindings.get(&i))
            .copied()
    }
}

/// Extends `g` by one new vertex per fresh variable of `p`; new vertices get
/// identifiers above every vertex of `g`, in variable order.
pub fn optimal_candidate(p: &RType, g: &Graph) -> Result<OptimalCandidate, FormulaError> {
    if let Some(c) = p.contradiction() {
        return Err(FormulaError::Contradictory(c.clone()));
    }
    if let Some(v) = p.vertices().find(|&v| !g.contains(v)) {
        return Err(FormulaError::UnknownVertex(v));
    }
    if let Some(l) = p.failing_ambient_literal(g) {
        return Err(FormulaError::AmbientLiteralFails(l));
    }
    let mut extension = g.clone();
    let mut assignment = BTreeMap::new();
    for (next, i) in (g.fresh_id()..).zip(p.fresh_vars()) {
        extension.add_vertex(next);
        assignment.insert(i, next);
    }
    let resolve = |t: RTerm| match t {
        RTerm::Var(i) => assignment[&i],
        RTerm::Vertex(v) => v,
    };
    for l in p.literals().iter().filter(|l| l.positive) {
        if let (RTerm::Vertex(_), RTerm::Vertex(_)) = (l.lhs, l.rhs) {
            continue;
        }
        extension
            .add_edge(resolve(l.lhs), resolve(l.rhs))
            .expect("candidate endpoints are distinct and present");
    }
    Ok(OptimalCandidate {
        extension,
        assignment,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theory {
    /// The random graph: no freeness constraint.
    T0,
    /// The generic `K_n`-free graph.
    Tn,
}

/// Consistency of `p` over `g`. In `T0` this is non-contradiction plus the
/// ambient literals holding; in `Tn` the optimal candidate must also be
/// `K_n`-free.
pub fn is_consistent(p: &RType, g: &Graph, n: usize, theory: Theory) -> bool {
    match theory {
        Theory::T0 => {
            !p.is_contradictory()
                && p.vertices().all(|v| g.contains(v))
                && p.failing_ambient_literal(g).is_none()
        }
        Theory::Tn => match optimal_candidate(p, g) {
            Ok(cand) => find_clique(&cand.extension, n).is_none(),
            Err(_) => false,
        },
    }
}
