//! One function per subcommand. Each returns the exit code and the JSON
//! report; input problems come back as [`InputError`] (exit code 2).

use henson_core::formula::{Formula, Theory};
use henson_core::independence::{
    divides_formula, divides_formula_t0, dividing_indep, edge_indep, forking_indep,
    forks_disjunction, kphi_bound, DivideReason,
};
use henson_core::oracle::{
    check_certificate, default_l_max, divides_oracle, divides_oracle_disjunction,
    divides_oracle_t0, dividing_indep_oracle,
};
use henson_core::sequence::{gamma, gamma_template, lemma61_scan, verify_example_62, SequenceBase};
use serde_json::{json, Value};

use crate::checks::gamma_window;
use crate::problem::{input_err, InputError, Problem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub code: i32,
    pub body: Value,
}

impl Report {
    fn ok(body: Value) -> Self {
        Report {
            code: EXIT_OK,
            body,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DividesOpts {
    pub t0: bool,
    pub oracle: bool,
    pub l_max: Option<usize>,
}

pub fn divides(p: &Problem, opts: DividesOpts) -> Result<Report, InputError> {
    let b = p.tuple_b()?;
    let (g, base, n) = (p.graph(), p.base(), p.n);
    let l_max = opts.l_max.unwrap_or(default_l_max(n));
    let f = match p.formula()? {
        Formula::Disj { disjuncts } => {
            if opts.t0 {
                return Err(InputError(
                    "disjunctions are only decided for K_n-free graphs".into(),
                ));
            }
            let (forks, verdicts) =
                forks_disjunction(disjuncts, b, g, base, n).map_err(input_err)?;
            let mut body = json!({ "forks": forks, "disjuncts": verdicts });
            if opts.oracle {
                let o = divides_oracle_disjunction(disjuncts, b, g, base, n, l_max)
                    .map_err(input_err)?;
                body["oracle"] = json!(o);
            }
            return Ok(Report::ok(body));
        }
        Formula::Conj(f) => f,
    };
    let verdict = if opts.t0 {
        divides_formula_t0(f, b, g, base)
    } else {
        divides_formula(f, b, g, base, n)
    }
    .map_err(input_err)?;
    if !opts.oracle {
        return Ok(Report::ok(json!(verdict)));
    }
    if verdict.reason == DivideReason::Inconsistent {
        return Ok(Report::ok(
            json!({ "verdict": verdict, "oracle": null, "agree": true }),
        ));
    }
    let (theory, o) = if opts.t0 {
        (Theory::T0, divides_oracle_t0(f, b, g, base, l_max))
    } else {
        (Theory::Tn, divides_oracle(f, b, g, base, n, l_max))
    };
    let o = o.map_err(input_err)?;
    let certified = check_certificate(f, b, g, base, n, theory, &o).map_err(input_err)?;
    let agree = o.divides == verdict.divides;
    let code = if !agree {
        EXIT_MISMATCH
    } else if !certified {
        EXIT_FAILED
    } else {
        EXIT_OK
    };
    Ok(Report {
        code,
        body: json!({ "verdict": verdict, "oracle": o, "certified": certified, "agree": agree }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Dividing,
    Forking,
    Edge,
}

pub fn indep(
    p: &Problem,
    rel: Relation,
    oracle: bool,
    l_max: Option<usize>,
) -> Result<Report, InputError> {
    let (a, b, c) = (p.set("A")?, p.set("B")?, p.set("C")?);
    let (g, n) = (p.graph(), p.n);
    let verdict = match rel {
        Relation::Edge => {
            if oracle {
                return Err(InputError(
                    "the oracle decides dividing independence only".into(),
                ));
            }
            return Ok(Report::ok(json!({ "independent": edge_indep(a, b, c, g) })));
        }
        Relation::Dividing => dividing_indep(a, b, c, g, n),
        Relation::Forking => forking_indep(a, b, c, g, n),
    };
    if !oracle {
        return Ok(Report::ok(json!(verdict)));
    }
    let o = dividing_indep_oracle(a, b, c, g, n, l_max.unwrap_or(default_l_max(n)))
        .map_err(input_err)?;
    let agree = o == verdict.independent;
    Ok(Report {
        code: if agree { EXIT_OK } else { EXIT_MISMATCH },
        body: json!({ "verdict": verdict, "oracle": { "independent": o }, "agree": agree }),
    })
}

/// The Γ sequence for the first `K_n^φ` witness, with its checks.
pub fn gamma_cmd(p: &Problem, len: Option<usize>) -> Result<Report, InputError> {
    let f = p.conjunction()?;
    let b = p.tuple_b()?;
    let (g, base, n) = (p.graph(), p.base(), p.n);
    let Some(w) = kphi_bound(f, b, g, base, n).map_err(input_err)? else {
        return Ok(Report::ok(json!({ "bound": null })));
    };
    let seq = SequenceBase::new(g, base, b).map_err(input_err)?;
    let subset = w.subset.iter().copied().collect();
    let template = gamma_template(&seq, &subset).map_err(input_err)?;
    let window = gamma(&seq, &subset, len.unwrap_or(n).max(n)).map_err(input_err)?;
    let check = gamma_window(f, &window, n);
    let copies: Vec<_> = window.copies.iter().take(len.unwrap_or(n)).collect();
    Ok(Report {
        code: if check.is_ok() { EXIT_OK } else { EXIT_FAILED },
        body: json!({
            "bound": w,
            "template": template,
            "copies": copies,
            "width": n - 1,
            "ok": check.is_ok(),
            "error": check.err(),
        }),
    })
}

/// The brute-force oracle alone.
pub fn oracle_cmd(p: &Problem, t0: bool, l_max: Option<usize>) -> Result<Report, InputError> {
    let b = p.tuple_b()?;
    let (g, base, n) = (p.graph(), p.base(), p.n);
    let l_max = l_max.unwrap_or(default_l_max(n));
    let v = match (p.formula()?, t0) {
        (Formula::Conj(f), false) => divides_oracle(f, b, g, base, n, l_max),
        (Formula::Conj(f), true) => divides_oracle_t0(f, b, g, base, l_max),
        (Formula::Disj { disjuncts }, false) => {
            divides_oracle_disjunction(disjuncts, b, g, base, n, l_max)
        }
        (Formula::Disj { .. }, true) => {
            return Err(InputError(
                "disjunctions are only decided for K_n-free graphs".into(),
            ));
        }
    }
    .map_err(input_err)?;
    Ok(Report::ok(json!(v)))
}

pub fn example62(n: usize, l_max: Option<usize>) -> Result<Report, InputError> {
    let r = verify_example_62(n, l_max.unwrap_or(default_l_max(n))).map_err(input_err)?;
    Ok(Report {
        code: if r.ok() { EXIT_OK } else { EXIT_FAILED },
        body: json!(r),
    })
}

pub fn lemma61() -> Report {
    let r = lemma61_scan();
    Report {
        code: if r.ok() { EXIT_OK } else { EXIT_FAILED },
        body: json!(r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::parse;

    fn pair(extra: &str) -> Problem {
        parse(
            &format!(
                r#"{{"n": 3, "graph": {{"vertices": [0, 1, 2], "edges": []}},
                "sets": {{"C": [], "A": [2], "B": [0, 1]}}, "tuples": {{"b": [0, 1]}},
                "formula": {{"x_arity": 1, "y_arity": 2, "conjuncts": [
                    {{"kind": "edge", "lhs": "x1", "rhs": "y1"}}{extra}]}}}}"#
            ),
            100,
        )
        .unwrap()
    }

    const SECOND: &str = r#", {"kind": "edge", "lhs": "x1", "rhs": "y2"}"#;

    #[test]
    fn divides_on_pair() {
        let r = divides(&pair(SECOND), DividesOpts::default()).unwrap();
        assert_eq!(
            (
                r.code,
                r.body["divides"].as_bool(),
                r.body["reason"].as_str()
            ),
            (0, Some(true), Some("kn-phi-bound"))
        );
        let r = divides(
            &pair(""),
            DividesOpts {
                oracle: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(r.code, 0);
        assert_eq!(r.body["verdict"]["divides"], json!(false));
        let r = divides(
            &pair(SECOND),
            DividesOpts {
                oracle: true,
                t0: true,
                l_max: None,
            },
        )
        .unwrap();
        assert_eq!(r.code, 0);
        assert_eq!(r.body["agree"], json!(true));
    }

    #[test]
    fn gamma_reports_template() {
        let r = gamma_cmd(&pair(SECOND), None).unwrap();
        assert_eq!(r.code, 0);
        assert_eq!(r.body["template"]["cross"], json!([[0, 1]]));
        assert_eq!(
            gamma_cmd(&pair(""), None).unwrap().body["bound"],
            Value::Null
        );
    }

    #[test]
    fn indep_relations_agree() {
        let p = pair("");
        let d = indep(&p, Relation::Dividing, true, None).unwrap();
        let f = indep(&p, Relation::Forking, false, None).unwrap();
        assert_eq!(d.body["verdict"], f.body);
        assert_eq!(
            indep(&p, Relation::Edge, false, None).unwrap().body["independent"],
            json!(true)
        );
        assert!(indep(&p, Relation::Edge, true, None).is_err());
    }

    #[test]
    fn small_n_is_input_error() {
        assert!(example62(2, None).is_err());
    }
}
