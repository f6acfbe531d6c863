//! Seeded fuzzing: random instances through the criteria, the oracle and
//! the invariant checks. Failing instances are written out as problem
//! files that `henson fuzz <file>` replays.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use henson_core::formula::{ConjFormula, Formula, Theory};
use henson_core::graph::{Graph, PointedGraph, VertexId, VertexSet};
use henson_core::independence::{
    divides_formula, dividing_indep, forking_indep, DivideReason, DividesVerdict,
};
use henson_core::instances::{random_instance, random_triple, RandomSpec};
use henson_core::oracle::{
    check_certificate, default_l_max, divides_oracle, dividing_indep_oracle, OracleError,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::checks::{
    forking_mechanism, full_existence_props, gamma_for_verdict, necessary_conditions,
};
use crate::commands::{Report, EXIT_FAILED, EXIT_MISMATCH, EXIT_OK};
use crate::problem::{input_err, load, InputError, Problem};

/// Deliberate criterion bugs, for checking that the harness notices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Report the opposite dividing verdict.
    Negate,
    /// Ignore `K_n^φ` witnesses.
    DropBound,
}

impl Mutation {
    fn apply(self, v: DividesVerdict) -> DividesVerdict {
        match self {
            Mutation::Negate => DividesVerdict {
                divides: !v.divides,
                ..v
            },
            Mutation::DropBound if v.reason == DivideReason::KnPhiBound => DividesVerdict {
                divides: false,
                reason: DivideReason::None,
                witness: None,
            },
            Mutation::DropBound => v,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FuzzOpts {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub max_vertices: usize,
    pub mutate: Option<Mutation>,
    pub out: PathBuf,
    pub l_max: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    Mismatch,
    Invariant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub formulas: u64,
    pub dividing: u64,
    pub inconsistent: u64,
    pub triples: u64,
    pub independent: u64,
}

/// Runs the checks at fixed `n` and `l_max` and counts what it saw.
#[derive(Debug, Clone)]
pub struct Checker {
    pub n: usize,
    pub l_max: usize,
    pub mutate: Option<Mutation>,
    pub tally: Tally,
}

impl Checker {
    pub fn new(n: usize, l_max: usize, mutate: Option<Mutation>) -> Self {
        Checker {
            n,
            l_max,
            mutate,
            tally: Tally::default(),
        }
    }

    /// Every check on one formula instance, the criterion optionally mutated.
    pub fn formula(
        &mut self,
        f: &ConjFormula,
        b: &[VertexId],
        g: &Graph,
        base: &VertexSet,
    ) -> Vec<Failure> {
        let (n, l_max) = (self.n, self.l_max);
        let tally = &mut self.tally;
        let mut out = Vec::new();
        let mut invariant = |r: Result<(), String>| {
            if let Err(detail) = r {
                out.push(Failure {
                    kind: FailureKind::Invariant,
                    detail,
                });
            }
        };
        tally.formulas += 1;
        let v = match divides_formula(f, b, g, base, n) {
            Ok(v) => v,
            Err(e) => {
                invariant(Err(format!("criterion failed: {e}")));
                return out;
            }
        };
        let v = self.mutate.map_or(v.clone(), |m| m.apply(v));
        if v.reason == DivideReason::Inconsistent {
            tally.inconsistent += 1;
            if !matches!(
                divides_oracle(f, b, g, base, n, l_max),
                Err(OracleError::Inconsistent)
            ) {
                invariant(Err(
                    "criterion calls the instance inconsistent, the oracle does not".into(),
                ));
            }
            return out;
        }
        tally.dividing += u64::from(v.divides);
        invariant(necessary_conditions(f, b, n, &v));
        invariant(gamma_for_verdict(f, b, g, base, n, &v));
        match divides_oracle(f, b, g, base, n, l_max) {
            Ok(o) => {
                match check_certificate(f, b, g, base, n, Theory::Tn, &o) {
                    Ok(true) => {}
                    Ok(false) => invariant(Err("oracle certificate does not re-check".into())),
                    Err(e) => invariant(Err(e.to_string())),
                }
                if o.divides != v.divides {
                    out.push(Failure {
                        kind: FailureKind::Mismatch,
                        detail: format!(
                            "criterion says divides = {}, oracle says {}",
                            v.divides, o.divides
                        ),
                    });
                }
            }
            Err(e) => invariant(Err(format!("oracle failed: {e}"))),
        }
        out
    }

    /// Every check on one triple `A, B, C`, with `D ⊇ B` for the copy test.
    pub fn triple(
        &mut self,
        a: &VertexSet,
        b: &VertexSet,
        c: &VertexSet,
        d: &VertexSet,
        g: &Graph,
    ) -> Vec<Failure> {
        let (n, l_max) = (self.n, self.l_max);
        let tally = &mut self.tally;
        let mut out = Vec::new();
        let mut invariant = |r: Result<(), String>| {
            if let Err(detail) = r {
                out.push(Failure {
                    kind: FailureKind::Invariant,
                    detail,
                });
            }
        };
        tally.triples += 1;
        let v = dividing_indep(a, b, c, g, n);
        tally.independent += u64::from(v.independent);
        if forking_indep(a, b, c, g, n) != v {
            invariant(Err("forking and dividing independence differ".into()));
        }
        invariant(full_existence_props(a, b, c, g, n));
        invariant(forking_mechanism(a, b, c, d, g, n));
        match dividing_indep_oracle(a, b, c, g, n, l_max) {
            Ok(o) if o != v.independent => out.push(Failure {
                kind: FailureKind::Mismatch,
                detail: format!(
                    "criterion says independent = {}, oracle says {o}",
                    v.independent
                ),
            }),
            Ok(_) => {}
            Err(e) => invariant(Err(format!("oracle failed: {e}"))),
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
struct Recorded {
    trial: Option<u64>,
    source: String,
    kind: FailureKind,
    detail: String,
}

fn write_replay(dir: &Path, name: &str, p: &Problem) -> Result<PathBuf, InputError> {
    std::fs::create_dir_all(dir).map_err(|e| InputError(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    let text = serde_json::to_string_pretty(&p.to_file()).map_err(input_err)?;
    std::fs::write(&path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn named(pairs: &[(&str, &VertexSet)]) -> BTreeMap<String, VertexSet> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), (*v).clone()))
        .collect()
}

fn summary(opts: Option<&FuzzOpts>, tally: &Tally, failures: &[Recorded]) -> Report {
    let mismatches = failures
        .iter()
        .filter(|f| f.kind == FailureKind::Mismatch)
        .count();
    let code = if mismatches > 0 {
        EXIT_MISMATCH
    } else if !failures.is_empty() {
        EXIT_FAILED
    } else {
        EXIT_OK
    };
    let mut body = serde_json::json!({
        "tally": tally,
        "mismatches": mismatches,
        "invariant_failures": failures.len() - mismatches,
        "failures": failures,
    });
    if let Some(o) = opts {
        body["n"] = o.n.into();
        body["seed"] = o.seed.into();
        body["trials"] = o.trials.into();
        body["max_vertices"] = o.max_vertices.into();
        body["mutation"] = serde_json::json!(o.mutate);
    }
    Report { code, body }
}

pub fn run(opts: &FuzzOpts) -> Result<Report, InputError> {
    let n = opts.n;
    if n < 3 {
        return Err(InputError(format!("n must be at least 3, got {n}")));
    }
    if opts.max_vertices < 2 {
        return Err(InputError("max-vertices must be at least 2".into()));
    }
    let l_max = opts.l_max.unwrap_or(default_l_max(n));
    let mv = opts.max_vertices;
    let mut ck = Checker::new(n, l_max, opts.mutate);
    let mut failures = Vec::new();
    for trial in 0..opts.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(trial);

        let mut spec = RandomSpec::new(n);
        spec.max_base = 3.min(mv / 2);
        spec.max_tuple = 3.min(mv - spec.max_base);
        spec.extra = rng.gen_range(0..=mv - spec.max_base - spec.max_tuple);
        spec.equalities = true;
        let inst = random_instance(&spec, &mut rng);
        let found = ck.formula(&inst.formula, &inst.tuple, &inst.graph, &inst.base);
        if !found.is_empty() {
            let p = Problem {
                n,
                pointed: PointedGraph::new(
                    inst.graph.clone(),
                    inst.base.clone(),
                    BTreeMap::new(),
                    BTreeMap::from([("b".to_string(), inst.tuple.clone())]),
                )
                .map_err(input_err)?,
                formula: Some(Formula::Conj(inst.formula.clone())),
            };
            let path = write_replay(&opts.out, &format!("trial-{trial:06}-formula.json"), &p)?;
            record(&mut failures, Some(trial), &path, found);
        }

        let size = rng.gen_range(1..=mv.min(7));
        let t = random_triple(n, size, 3, 2, &mut rng);
        let d = superset(&t.b, &t.graph, &mut rng);
        let found = ck.triple(&t.a, &t.b, &t.c, &d, &t.graph);
        if !found.is_empty() {
            let p = Problem {
                n,
                pointed: PointedGraph::new(
                    t.graph.clone(),
                    t.c.clone(),
                    named(&[("A", &t.a), ("B", &t.b), ("D", &d)]),
                    BTreeMap::new(),
                )
                .map_err(input_err)?,
                formula: None,
            };
            let path = write_replay(&opts.out, &format!("trial-{trial:06}-triple.json"), &p)?;
            record(&mut failures, Some(trial), &path, found);
        }
    }
    Ok(summary(Some(opts), &ck.tally, &failures))
}

fn record(failures: &mut Vec<Recorded>, trial: Option<u64>, source: &Path, found: Vec<Failure>) {
    failures.extend(found.into_iter().map(|f| Recorded {
        trial,
        source: source.display().to_string(),
        kind: f.kind,
        detail: f.detail,
    }));
}

/// `B` plus a random selection of the other vertices.
fn superset<R: Rng>(b: &VertexSet, g: &Graph, rng: &mut R) -> VertexSet {
    let mut rest: Vec<VertexId> = g
        .vertices()
        .iter()
        .copied()
        .filter(|v| !b.contains(v))
        .collect();
    rest.shuffle(rng);
    let k = rng.gen_range(0..=rest.len().min(2));
    b.iter().copied().chain(rest.into_iter().take(k)).collect()
}

/// Re-runs the checks on saved problem files. A file with a formula and a
/// tuple `b` gets the formula checks; one with `A` and `B` the triple
/// checks (with `D` defaulting to `B`).
pub fn replay(
    paths: &[PathBuf],
    limit: usize,
    l_max: Option<usize>,
    mutate: Option<Mutation>,
) -> Result<Report, InputError> {
    let mut tally = Tally::default();
    let mut failures = Vec::new();
    for path in paths {
        let p = load(path, limit)?;
        let mut ck = Checker::new(p.n, l_max.unwrap_or(default_l_max(p.n)), mutate);
        ck.tally = std::mem::take(&mut tally);
        let mut ran = false;
        if let Some(Formula::Conj(f)) = &p.formula {
            let found = ck.formula(f, p.tuple_b()?, p.graph(), p.base());
            record(&mut failures, None, path, found);
            ran = true;
        }
        if let (Ok(a), Ok(b)) = (p.set("A"), p.set("B")) {
            let d = p.set("D").unwrap_or(b);
            let found = ck.triple(a, b, p.base(), d, p.graph());
            record(&mut failures, None, path, found);
            ran = true;
        }
        tally = ck.tally;
        if !ran {
            return Err(InputError(format!(
                "{}: nothing to replay (needs a conjunction or sets A and B)",
                path.display()
            )));
        }
    }
    Ok(summary(None, &tally, &failures))
}
