//! Problem files: a graph, the base set `C`, optional sets `A`, `B`, an
//! optional tuple `b` and an optional formula.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use henson_core::formula::{ConjFormula, Formula};
use henson_core::graph::{
    is_kn_free, Graph, GraphJson, PointedGraph, VertexId, VertexSet, DEFAULT_MAX_VERTICES,
};
use serde::{Deserialize, Serialize};

/// Environment variable that overrides the vertex bound of the loader.
pub const MAX_VERTICES_VAR: &str = "HENSON_MAX_VERTICES";

/// Bad input: malformed file, failed precondition, unknown name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub(crate) fn input_err(e: impl fmt::Display) -> InputError {
    InputError(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    pub graph: GraphJson,
    pub sets: BTreeMap<String, Vec<VertexId>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tuples: BTreeMap<String, Vec<VertexId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<Formula>,
}

/// A validated problem file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub n: usize,
    pub pointed: PointedGraph,
    pub formula: Option<Formula>,
}

/// The vertex bound from the environment, or the library default.
pub fn max_vertices() -> Result<usize, InputError> {
    match std::env::var(MAX_VERTICES_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| InputError(format!("{MAX_VERTICES_VAR}={s:?} is not a vertex count"))),
        Err(_) => Ok(DEFAULT_MAX_VERTICES),
    }
}

pub fn load(path: &Path, limit: usize) -> Result<Problem, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    parse(&text, limit).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

pub fn parse(text: &str, limit: usize) -> Result<Problem, InputError> {
    let file: ProblemFile = serde_json::from_str(text).map_err(input_err)?;
    Problem::from_file(file, limit)
}

fn disjuncts(f: &Formula) -> &[ConjFormula] {
    match f {
        Formula::Conj(c) => std::slice::from_ref(c),
        Formula::Disj { disjuncts } => disjuncts,
    }
}

impl Problem {
    pub fn from_file(file: ProblemFile, limit: usize) -> Result<Problem, InputError> {
        if file.n < 3 {
            return Err(InputError(format!("n must be at least 3, got {}", file.n)));
        }
        let graph = Graph::from_json(&file.graph, limit).map_err(input_err)?;
        let mut sets: BTreeMap<String, VertexSet> = file
            .sets
            .into_iter()
            .map(|(k, v)| (k, v.into_iter().collect()))
            .collect();
        let base = sets
            .remove("C")
            .ok_or_else(|| InputError("set C is required".into()))?;
        let pointed = PointedGraph::new(graph, base, sets, file.tuples).map_err(input_err)?;
        if !is_kn_free(&pointed.graph, file.n) {
            return Err(InputError(format!("graph contains K_{}", file.n)));
        }
        if let Some(f) = &file.formula {
            let ds = disjuncts(f);
            if ds.is_empty() {
                return Err(InputError("disjunction has no disjuncts".into()));
            }
            let len = pointed.named_tuples.get("b").map_or(0, Vec::len);
            for d in ds {
                if d.y_arity() != len {
                    return Err(InputError(format!(
                        "formula has {} parameters but tuple b has {len} entries",
                        d.y_arity()
                    )));
                }
                if let Some(c) = d
                    .constants()
                    .into_iter()
                    .find(|c| !pointed.base.contains(c))
                {
                    return Err(InputError(format!("constant c:{c} is not in C")));
                }
            }
        }
        Ok(Problem {
            n: file.n,
            pointed,
            formula: file.formula,
        })
    }

    pub fn to_file(&self) -> ProblemFile {
        let mut sets: BTreeMap<String, Vec<VertexId>> = self
            .pointed
            .named_sets
            .iter()
            .map(|(k, v)| (k.clone(), v.iter().copied().collect()))
            .collect();
        sets.insert("C".into(), self.pointed.base.iter().copied().collect());
        ProblemFile {
            n: self.n,
            graph: self.pointed.graph.to_json(),
            sets,
            tuples: self.pointed.named_tuples.clone(),
            formula: self.formula.clone(),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.pointed.graph
    }

    pub fn base(&self) -> &VertexSet {
        &self.pointed.base
    }

    pub fn set(&self, name: &str) -> Result<&VertexSet, InputError> {
        if name == "C" {
            return Ok(&self.pointed.base);
        }
        self.pointed
            .named_sets
            .get(name)
            .ok_or_else(|| InputError(format!("set {name} is required")))
    }

    /// The tuple `b`; may be omitted when the formula has no parameters.
    pub fn tuple_b(&self) -> Result<&[VertexId], InputError> {
        match self.pointed.named_tuples.get("b") {
            Some(b) => Ok(b),
            None if self
                .formula
                .as_ref()
                .is_some_and(|f| disjuncts(f).iter().all(|d| d.y_arity() == 0)) =>
            {
                Ok(&[])
            }
            None => Err(InputError("tuple b is required".into())),
        }
    }

    pub fn formula(&self) -> Result<&Formula, InputError> {
        self.formula
            .as_ref()
            .ok_or_else(|| InputError("formula is required".into()))
    }

    pub fn conjunction(&self) -> Result<&ConjFormula, InputError> {
        match self.formula()? {
            Formula::Conj(c) => Ok(c),
            Formula::Disj { .. } => Err(InputError(
                "expected a single conjunction, found a disjunction".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE_FREE: &str = r#"{
        "n": 3,
        "graph": {"vertices": [0, 1, 2], "edges": [[0, 1]]},
        "sets": {"C": [], "A": [2]},
        "tuples": {"b": [0, 1]},
        "formula": {"x_arity": 1, "y_arity": 2, "conjuncts": [
            {"kind": "edge", "lhs": "x1", "rhs": "y1"}
        ]}
    }"#;

    #[test]
    fn loads_and_round_trips() {
        let p = parse(TRIANGLE_FREE, 100).unwrap();
        assert_eq!(p.tuple_b().unwrap(), &[0, 1]);
        assert_eq!(p.set("A").unwrap().len(), 1);
        assert!(p.set("B").is_err());
        let again = Problem::from_file(p.to_file(), 100).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn rejects_bad_files() {
        let with = |from: &str, to: &str| parse(&TRIANGLE_FREE.replace(from, to), 100);
        assert!(with("[[0, 1]]", "[[0, 1], [1, 2], [0, 2]]")
            .unwrap_err()
            .0
            .contains("K_3"));
        assert!(with("\"n\": 3", "\"n\": 2").is_err());
        assert!(with("\"C\": [], ", "")
            .unwrap_err()
            .0
            .contains("C is required"));
        assert!(with("[[0, 1]]", "[[0, 0]]").is_err());
        assert!(with("[[0, 1]]", "[[0, 1], [1, 0]]").is_err());
        assert!(with("\"b\": [0, 1]", "\"b\": [0]")
            .unwrap_err()
            .0
            .contains("parameters"));
        assert!(with("\"rhs\": \"y1\"", "\"rhs\": \"c:2\"")
            .unwrap_err()
            .0
            .contains("not in C"));
        assert!(with("\"A\": [2]", "\"A\": [9]").is_err());
        assert!(parse(TRIANGLE_FREE, 2).is_err());
        assert!(parse("{", 100).is_err());
    }
}
