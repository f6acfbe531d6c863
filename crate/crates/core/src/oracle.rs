//! Brute-force dividing straight from the definition: search the uniform
//! indiscernible sequences starting at `b` for one along which the formula
//! becomes inconsistent.
//!
//! Candidate sequences are the templates of [`crate::sequence`]. Each is
//! tried at the largest width first; inconsistency only grows with the
//! number of copies, so the least witnessing width is found afterwards by
//! a short upward scan.

use serde::Serialize;
use thiserror::Error;

use crate::formula::{
    instantiate, is_consistent, ConjFormula, FormulaError, LiteralKind, Term, Theory,
};
use crate::graph::{Graph, VertexId, VertexSet};
use crate::sequence::{
    check_k_inconsistent_in, is_template_valid, realize_template, union_type, SequenceBase,
    SequenceError, SequenceTemplate, SequenceWindow, TemplateSpace,
};

pub const DEFAULT_MAX_POSITIONS: usize = 6;
pub const DEFAULT_MAX_BASE: usize = 4;

/// Default number of copies: one more than the tightest width needed.
pub fn default_l_max(n: usize) -> usize {
    n + 1
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("formula instance is inconsistent")]
    Inconsistent,
    #[error("tuple has {positions} positions, more than the limit of {limit}")]
    TooManyPositions { positions: usize, limit: usize },
    #[error("base set has {size} vertices, more than the limit of {limit}")]
    BaseTooLarge { size: usize, limit: usize },
    #[error("l_max must be at least 1")]
    ZeroWidth,
    #[error("disjunction has no disjuncts")]
    EmptyDisjunction,
    #[error("disjuncts have different arities")]
    MixedArity,
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_positions: usize,
    pub max_base: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_positions: DEFAULT_MAX_POSITIONS,
            max_base: DEFAULT_MAX_BASE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub divides: bool,
    pub template: Option<SequenceTemplate>,
    /// Least number of copies at which the union becomes inconsistent.
    pub k: Option<usize>,
    pub l_max: usize,
}

/// Windows of every admissible template over one base, realised once and
/// reused for many formulas.
#[derive(Debug, Clone)]
pub struct TemplateCatalog {
    base: SequenceBase,
    n: usize,
    l_max: usize,
    theory: Theory,
    entries: Vec<Entry>,
}

#[derive(Debug, Clone)]
struct Entry {
    template: SequenceTemplate,
    window: SequenceWindow,
    masks: Option<MaskWindow>,
}

impl TemplateCatalog {
    /// In `Tn` only templates with `K_n`-free windows are kept.
    pub fn new(
        g: &Graph,
        base: &VertexSet,
        tuple: &[VertexId],
        n: usize,
        l_max: usize,
        theory: Theory,
        limits: OracleLimits,
    ) -> Result<Self, OracleError> {
        if l_max == 0 {
            return Err(OracleError::ZeroWidth);
        }
        if tuple.len() > limits.max_positions {
            return Err(OracleError::TooManyPositions {
                positions: tuple.len(),
                limit: limits.max_positions,
            });
        }
        if base.len() > limits.max_base {
            return Err(OracleError::BaseTooLarge {
                size: base.len(),
                limit: limits.max_base,
            });
        }
        let seq_base = SequenceBase::new(g, base, tuple)?;
        let mut entries = Vec::new();
        for t in TemplateSpace::new(tuple.len()) {
            if theory == Theory::Tn && !is_template_valid(&t, &seq_base, n)? {
                continue;
            }
            let window = realize_template(&t, &seq_base, l_max)?;
            let masks = MaskWindow::new(&window);
            entries.push(Entry {
                template: t,
                window,
                masks,
            });
        }
        Ok(TemplateCatalog {
            base: seq_base,
            n,
            l_max,
            theory,
            entries,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn templates(&self) -> impl Iterator<Item = &SequenceTemplate> {
        self.entries.iter().map(|e| &e.template)
    }

    fn require_consistent(&self, f: &ConjFormula) -> Result<(), OracleError> {
        let p = instantiate(f, self.base.tuple(), self.base.graph(), self.base.base())?;
        if is_consistent(&p, self.base.graph(), self.n, self.theory) {
            Ok(())
        } else {
            Err(OracleError::Inconsistent)
        }
    }

    fn verdict(&self, hit: Option<(&Entry, usize)>) -> OracleVerdict {
        OracleVerdict {
            divides: hit.is_some(),
            template: hit.map(|(e, _)| e.template.clone()),
            k: hit.map(|(_, k)| k),
            l_max: self.l_max,
        }
    }

    /// First template, in enumeration order, along which `f` becomes
    /// inconsistent within `l_max` copies.
    pub fn divides(&self, f: &ConjFormula) -> Result<OracleVerdict, OracleError> {
        self.require_consistent(f)?;
        let mf = MaskFormula::compile(f, self.base.graph());
        let hit = self
            .entries
            .iter()
            .find_map(|e| self.entry_width(e, f, mf.as_ref()).map(|k| (e, k)));
        Ok(self.verdict(hit))
    }

    /// Same search using only the general consistency test.
    pub fn divides_generic(&self, f: &ConjFormula) -> Result<OracleVerdict, OracleError> {
        self.require_consistent(f)?;
        let hit = self
            .entries
            .iter()
            .find_map(|e| self.generic_width(e, f).map(|k| (e, k)));
        Ok(self.verdict(hit))
    }

    /// Least inconsistency width of `f` along `t`, if `t` is in the catalog
    /// and makes `f` inconsistent.
    pub fn width_for(&self, f: &ConjFormula, t: &SequenceTemplate) -> Option<usize> {
        let e = self.entries.iter().find(|e| &e.template == t)?;
        self.entry_width(e, f, MaskFormula::compile(f, self.base.graph()).as_ref())
    }

    fn entry_width(&self, e: &Entry, f: &ConjFormula, mf: Option<&MaskFormula>) -> Option<usize> {
        match (&e.masks, mf) {
            (Some(m), Some(mf)) if m.size + f.x_arity() <= 64 => {
                let bad = |k: usize| {
                    let mut acc = Acc::new(f.x_arity());
                    for l in 0..k {
                        acc.add(mf, m, l);
                    }
                    !acc.consistent(m, self.n, self.theory)
                };
                if !bad(self.l_max) {
                    return None;
                }
                (1..=self.l_max).find(|&k| bad(k))
            }
            _ => self.generic_width(e, f),
        }
    }

    fn generic_width(&self, e: &Entry, f: &ConjFormula) -> Option<usize> {
        let bad = |k: usize| {
            check_k_inconsistent_in(f, &e.window, k, self.n, self.theory).expect("k <= l_max")
        };
        if !bad(self.l_max) {
            return None;
        }
        (1..=self.l_max).find(|&k| bad(k))
    }

    /// Dividing of a disjunction: some template and width at which every
    /// choice of one disjunct per copy is inconsistent. Each disjunct must be
    /// an instance the theory accepts on its own; inconsistent disjuncts are
    /// dropped, and an empty remainder is an error.
    pub fn divides_disjunction(
        &self,
        disjuncts: &[ConjFormula],
    ) -> Result<OracleVerdict, OracleError> {
        let first = disjuncts.first().ok_or(OracleError::EmptyDisjunction)?;
        if disjuncts
            .iter()
            .any(|d| d.x_arity() != first.x_arity() || d.y_arity() != first.y_arity())
        {
            return Err(OracleError::MixedArity);
        }
        let mut live = Vec::new();
        for d in disjuncts {
            match self.require_consistent(d) {
                Ok(()) => live.push(d),
                Err(OracleError::Inconsistent) => {}
                Err(e) => return Err(e),
            }
        }
        if live.is_empty() {
            return Err(OracleError::Inconsistent);
        }
        let compiled: Option<Vec<MaskFormula>> = live
            .iter()
            .map(|d| MaskFormula::compile(d, self.base.graph()))
            .collect();
        let hit = self.entries.iter().find_map(|e| {
            let bad = |k: usize| self.every_choice_inconsistent(e, &live, compiled.as_deref(), k);
            if !bad(self.l_max) {
                return None;
            }
            (1..=self.l_max).find(|&k| bad(k)).map(|k| (e, k))
        });
        Ok(self.verdict(hit))
    }

    fn every_choice_inconsistent(
        &self,
        e: &Entry,
        live: &[&ConjFormula],
        compiled: Option<&[MaskFormula]>,
        k: usize,
    ) -> bool {
        let xa = live[0].x_arity();
        match (&e.masks, compiled) {
            (Some(m), Some(compiled)) if m.size + xa <= 64 => {
                fn rec(
                    cat: &TemplateCatalog,
                    m: &MaskWindow,
                    fs: &[MaskFormula],
                    acc: &Acc,
                    l: usize,
                    k: usize,
                ) -> bool {
                    if !acc.consistent(m, cat.n, cat.theory) {
                        return true;
                    }
                    if l == k {
                        return false;
                    }
                    fs.iter().all(|f| {
                        let mut next = acc.clone();
                        next.add(f, m, l);
                        rec(cat, m, fs, &next, l + 1, k)
                    })
                }
                rec(self, m, compiled, &Acc::new(xa), 0, k)
            }
            _ => {
                fn rec(
                    cat: &TemplateCatalog,
                    e: &Entry,
                    live: &[&ConjFormula],
                    chosen: &mut Vec<usize>,
                    k: usize,
                ) -> bool {
                    if !chosen.is_empty() && !cat.choice_consistent(e, live, chosen) {
                        return true;
                    }
                    if chosen.len() == k {
                        return false;
                    }
                    (0..live.len()).all(|d| {
                        chosen.push(d);
                        let r = rec(cat, e, live, chosen, k);
                        chosen.pop();
                        r
                    })
                }
                rec(self, e, live, &mut Vec::new(), k)
            }
        }
    }

    fn choice_consistent(&self, e: &Entry, live: &[&ConjFormula], chosen: &[usize]) -> bool {
        let mut p = crate::formula::RType::new(live[0].x_arity(), [], []);
        for (l, &d) in chosen.iter().enumerate() {
            let single = SequenceWindow {
                graph: Graph::new(),
                base: VertexSet::new(),
                copies: vec![e.window.copies[l].clone()],
            };
            p = p
                .union(&union_type(live[d], &single, 1).expect("one copy"))
                .expect("same arity");
        }
        is_consistent(&p, &e.window.graph, self.n, self.theory)
    }
}

fn catalog_for(
    b: &[VertexId],
    g: &Graph,
    base: &VertexSet,
    n: usize,
    l_max: usize,
    theory: Theory,
) -> Result<TemplateCatalog, OracleError> {
    TemplateCatalog::new(g, base, b, n, l_max, theory, OracleLimits::default())
}

/// Dividing of `f(x, b)` over `base` in the generic `K_n`-free graph,
/// decided by exhaustive search over templates with at most `l_max` copies.
pub fn divides_oracle(
    f: &ConjFormula,
    b: &[VertexId],
    g: &Graph,
    base: &VertexSet,
    n: usize,
    l_max: usize,
) -> Result<OracleVerdict, OracleError> {
    catalog_for(b, g, base, n, l_max, Theory::Tn)?.divides(f)
}

/// [`divides_oracle`] for the random graph: no freeness constraint on the
/// windows or on solutions.
pub fn divides_oracle_t0(
    f: &ConjFormula,
    b: &[VertexId],
    g: &Graph,
    base: &VertexSet,
    l_max: usize,
) -> Result<OracleVerdict, OracleError> {
    catalog_for(b, g, base, 0, l_max, Theory::T0)?.divides(f)
}

pub fn divides_oracle_disjunction(
    disjuncts: &[ConjFormula],
    b: &[VertexId],
    g: &Graph,
    base: &VertexSet,
    n: usize,
    l_max: usize,
) -> Result<OracleVerdict, OracleError> {
    catalog_for(b, g, base, n, l_max, Theory::Tn)?.divides_disjunction(disjuncts)
}

/// The quantifier-free diagram of `A \ C` over `C ∪ b`, as one conjunction
/// in variables `x1..` (the elements of `A \ C` in ascending order) and
/// parameters `y1..` (the entries of `b`). `None` when `A ⊆ C`.
pub fn full_diagram(
    a: &VertexSet,
    b: &[VertexId],
    c: &VertexSet,
    g: &Graph,
) -> Option<ConjFormula> {
    use crate::formula::Conjunct;
    let xs: Vec<VertexId> = a.difference(c).copied().collect();
    if xs.is_empty() {
        return None;
    }
    let rel = |u: VertexId, v: VertexId, l: Term, r: Term| {
        if g.adjacent(u, v) {
            Conjunct::edge(l, r)
        } else {
            Conjunct::non_edge(l, r)
        }
    };
    let mut conj = Vec::new();
    for (i, &u) in xs.iter().enumerate() {
        for (j, &v) in xs.iter().enumerate().skip(i + 1) {
            conj.push(rel(u, v, Term::X(i), Term::X(j)));
        }
        for (j, &v) in b.iter().enumerate() {
            if u == v {
                conj.push(Conjunct::eq(Term::X(i), Term::Y(j)));
            } else {
                conj.push(rel(u, v, Term::X(i), Term::Y(j)));
            }
        }
        for &v in c {
            conj.push(rel(u, v, Term::X(i), Term::Const(v)));
        }
    }
    Some(ConjFormula::new(xs.len(), b.len(), conj).expect("diagram is well formed"))
}

/// Dividing independence by brute force: the type of `A` over `C ∪ B` does
/// not divide over `C`. A type divides exactly when its strongest formula,
/// the full diagram, does.
pub fn dividing_indep_oracle(
    a: &VertexSet,
    b: &VertexSet,
    c: &VertexSet,
    g: &Graph,
    n: usize,
    l_max: usize,
) -> Result<bool, OracleError> {
    let tuple: Vec<VertexId> = b.difference(c).copied().collect();
    let Some(f) = full_diagram(a, &tuple, c, g) else {
        return Ok(true);
    };
    Ok(!divides_oracle(&f, &tuple, g, c, n, l_max)?.divides)
}

/// Re-checks a positive verdict from scratch: the template is admissible,
/// `k` copies make `f` inconsistent and `k - 1` do not.
pub fn check_certificate(
    f: &ConjFormula,
    b: &[VertexId],
    g: &Graph,
    base: &VertexSet,
    n: usize,
    theory: Theory,
    v: &OracleVerdict,
) -> Result<bool, OracleError> {
    let (Some(t), Some(k)) = (&v.template, v.k) else {
        return Ok(!v.divides);
    };
    if !v.divides || k == 0 || k > v.l_max {
        return Ok(false);
    }
    let seq = SequenceBase::new(g, base, b)?;
    if t.positions() != b.len() || (theory == Theory::Tn && !is_template_valid(t, &seq, n)?) {
        return Ok(false);
    }
    let w = realize_template(t, &seq, k)?;
    Ok(check_k_inconsistent_in(f, &w, k, n, theory)?
        && !check_k_inconsistent_in(f, &w, k - 1, n, theory)?)
}

/// A window of at most 64 vertices as adjacency words.
#[derive(Debug, Clone)]
struct MaskWindow {
    size: usize,
    adj: Vec<u64>,
    /// `cols[l][j]`: index of `b^l_j`.
    cols: Vec<Vec<usize>>,
}

impl MaskWindow {
    fn new(w: &SequenceWindow) -> Option<Self> {
        let g = &w.graph;
        if g.len() > 64 {
            return None;
        }
        let adj = (0..g.len()).map(|i| g.row(i)[0]).collect();
        let cols = w
            .copies
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&v| g.index_of(v).expect("copy vertex in window"))
                    .collect()
            })
            .collect();
        Some(MaskWindow {
            size: g.len(),
            adj,
            cols,
        })
    }
}

/// Most variables the bit-level path handles.
const MAX_X: usize = 8;

fn pair_bit(i: usize, j: usize) -> u64 {
    1 << (i.min(j) * MAX_X + i.max(j))
}

/// A formula's literals that involve a variable, in bit form. Literals
/// between parameters hold in every copy once they hold in the first, so
/// they are left to the caller's consistency check on the instance.
#[derive(Debug, Clone)]
struct MaskFormula {
    eq_y: [u64; MAX_X],
    pos_y: [u64; MAX_X],
    neg_y: [u64; MAX_X],
    pos_c: [u64; MAX_X],
    neg_c: [u64; MAX_X],
    /// Variable pairs `(i, j)`, `i < j`, at bit `i * MAX_X + j`.
    xx_pos: u64,
    xx_neg: u64,
    loop_x: bool,
}

impl MaskFormula {
    /// `None` beyond [`MAX_X`] variables. Constants are looked up by their
    /// index in `g`, which every window over the same base preserves
    /// (copies get larger identifiers).
    fn compile(f: &ConjFormula, g: &Graph) -> Option<Self> {
        if f.x_arity() > MAX_X || f.y_arity() > 64 {
            return None;
        }
        let mut m = MaskFormula {
            eq_y: [0; MAX_X],
            pos_y: [0; MAX_X],
            neg_y: [0; MAX_X],
            pos_c: [0; MAX_X],
            neg_c: [0; MAX_X],
            xx_pos: 0,
            xx_neg: 0,
            loop_x: false,
        };
        for c in f.conjuncts() {
            let (l, r) = match (c.lhs, c.rhs) {
                (a, b @ Term::X(_)) if !matches!(a, Term::X(_)) => (b, a),
                p => p,
            };
            let Term::X(i) = l else { continue };
            let positive = c.kind == LiteralKind::Edge;
            match (c.kind, r) {
                (LiteralKind::Eq, Term::Y(j)) => m.eq_y[i] |= 1 << j,
                (LiteralKind::Eq, _) => unreachable!("validated formula"),
                (_, Term::X(j)) if i == j => m.loop_x |= positive,
                (_, Term::X(j)) => {
                    if positive {
                        m.xx_pos |= pair_bit(i, j)
                    } else {
                        m.xx_neg |= pair_bit(i, j)
                    }
                }
                (_, Term::Y(j)) => {
                    if positive {
                        m.pos_y[i] |= 1 << j
                    } else {
                        m.neg_y[i] |= 1 << j
                    }
                }
                (_, Term::Const(v)) => {
                    let bit = 1u64 << g.index_of(v)?;
                    if positive {
                        m.pos_c[i] |= bit
                    } else {
                        m.neg_c[i] |= bit
                    }
                }
            }
        }
        Some(m)
    }
}

/// Accumulated constraints of several instances on the same variables.
#[derive(Debug, Clone)]
struct Acc {
    xa: usize,
    bound: [Option<usize>; MAX_X],
    conflict: bool,
    pos: [u64; MAX_X],
    neg: [u64; MAX_X],
    xx_pos: u64,
    xx_neg: u64,
}

fn bits(mut w: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (w != 0).then(|| {
            let i = w.trailing_zeros() as usize;
            w &= w - 1;
            i
        })
    })
}

impl Acc {
    fn new(xa: usize) -> Self {
        Acc {
            xa,
            bound: [None; MAX_X],
            conflict: false,
            pos: [0; MAX_X],
            neg: [0; MAX_X],
            xx_pos: 0,
            xx_neg: 0,
        }
    }

    fn add(&mut self, f: &MaskFormula, m: &MaskWindow, l: usize) {
        let col = &m.cols[l];
        let at = |mask: u64| bits(mask).fold(0u64, |acc, j| acc | 1 << col[j]);
        self.conflict |= f.loop_x;
        for i in 0..self.xa {
            for j in bits(f.eq_y[i]) {
                match self.bound[i] {
                    Some(v) if v != col[j] => self.conflict = true,
                    _ => self.bound[i] = Some(col[j]),
                }
            }
            self.pos[i] |= f.pos_c[i] | at(f.pos_y[i]);
            self.neg[i] |= f.neg_c[i] | at(f.neg_y[i]);
        }
        self.xx_pos |= f.xx_pos;
        self.xx_neg |= f.xx_neg;
    }

    fn consistent(&self, m: &MaskWindow, n: usize, theory: Theory) -> bool {
        if self.conflict || self.xx_pos & self.xx_neg != 0 {
            return false;
        }
        let adj = &m.adj;
        let mut pos = self.pos;
        let mut neg = self.neg;
        let mut free_edges = 0u64;
        for p in bits(self.xx_pos) {
            let (i, j) = (p / MAX_X, p % MAX_X);
            match (self.bound[i], self.bound[j]) {
                (Some(a), Some(b)) => {
                    if a == b || adj[a] >> b & 1 == 0 {
                        return false;
                    }
                }
                (Some(a), None) => pos[j] |= 1 << a,
                (None, Some(b)) => pos[i] |= 1 << b,
                (None, None) => free_edges |= 1 << p,
            }
        }
        for p in bits(self.xx_neg) {
            let (i, j) = (p / MAX_X, p % MAX_X);
            match (self.bound[i], self.bound[j]) {
                (Some(a), Some(b)) => {
                    if a != b && adj[a] >> b & 1 == 1 {
                        return false;
                    }
                }
                (Some(a), None) => neg[j] |= 1 << a,
                (None, Some(b)) => neg[i] |= 1 << b,
                (None, None) => {}
            }
        }
        let mut slot = [usize::MAX; MAX_X];
        let mut fresh = 0;
        for i in 0..self.xa {
            match self.bound[i] {
                Some(a) => {
                    let me = 1u64 << a;
                    if pos[i] & me != 0 || pos[i] & !adj[a] & !me != 0 || neg[i] & adj[a] != 0 {
                        return false;
                    }
                }
                None => {
                    if pos[i] & neg[i] != 0 {
                        return false;
                    }
                    slot[i] = m.size + fresh;
                    fresh += 1;
                }
            }
        }
        if theory == Theory::T0 || fresh == 0 {
            return true;
        }
        let mut full = [0u64; 64];
        full[..m.size].copy_from_slice(adj);
        for i in (0..self.xa).filter(|&i| slot[i] != usize::MAX) {
            let x = slot[i];
            full[x] |= pos[i];
            for v in bits(pos[i]) {
                full[v] |= 1 << x;
            }
        }
        for p in bits(free_edges) {
            let (a, b) = (slot[p / MAX_X], slot[p % MAX_X]);
            full[a] |= 1 << b;
            full[b] |= 1 << a;
        }
        // Templates in the catalog have K_n-free windows, so any n-clique
        // goes through a solution vertex.
        let window = (1u64 << m.size) - 1;
        (m.size..m.size + fresh).all(|x| {
            let earlier = ((1u64 << x) - 1) & !window;
            !has_clique(&full, full[x] & !earlier, n - 1)
        })
    }
}

fn has_clique(adj: &[u64], mut cand: u64, need: usize) -> bool {
    if need == 0 {
        return true;
    }
    while cand.count_ones() as usize >= need {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        if has_clique(adj, cand & adj[v], need - 1) {
            return true;
        }
    }
    false
}
