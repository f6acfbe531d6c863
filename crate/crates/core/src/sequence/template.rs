use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::SequenceError;

/// A uniform sequence shape over a fixed base tuple.
///
/// Copy `l` of position `i` is written `b^l_i`. Constant positions repeat
/// the base vertex in every copy; a cross pair `(i, j)` puts an edge
/// `b^k_i R b^l_j` for every `k < l`. Positions are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "TemplateJson", into = "TemplateJson")]
pub struct SequenceTemplate {
    positions: usize,
    constant: BTreeSet<usize>,
    cross: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct TemplateJson {
    positions: usize,
    constant: Vec<usize>,
    cross: Vec<[usize; 2]>,
}

impl TryFrom<TemplateJson> for SequenceTemplate {
    type Error = SequenceError;

    fn try_from(j: TemplateJson) -> Result<Self, Self::Error> {
        SequenceTemplate::new(
            j.positions,
            j.constant,
            j.cross.into_iter().map(|[i, k]| (i, k)),
        )
    }
}

impl From<SequenceTemplate> for TemplateJson {
    fn from(t: SequenceTemplate) -> Self {
        TemplateJson {
            positions: t.positions,
            constant: t.constant.into_iter().collect(),
            cross: t.cross.into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }
}

impl SequenceTemplate {
    pub fn new(
        positions: usize,
        constant: impl IntoIterator<Item = usize>,
        cross: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, SequenceError> {
        let constant: BTreeSet<usize> = constant.into_iter().collect();
        if let Some(&p) = constant.iter().find(|&&p| p >= positions) {
            return Err(SequenceError::PositionOutOfRange {
                position: p,
                positions,
            });
        }
        let cross: BTreeSet<(usize, usize)> = cross.into_iter().collect();
        for &(i, j) in &cross {
            for p in [i, j] {
                if p >= positions {
                    return Err(SequenceError::PositionOutOfRange {
                        position: p,
                        positions,
                    });
                }
                if constant.contains(&p) {
                    return Err(SequenceError::CrossOnConstant(p));
                }
            }
        }
        Ok(SequenceTemplate {
            positions,
            constant,
            cross,
        })
    }

    /// Every copy fresh and no edges between copies.
    pub fn disconnected(positions: usize) -> Self {
        SequenceTemplate {
            positions,
            constant: BTreeSet::new(),
            cross: BTreeSet::new(),
        }
    }

    pub fn positions(&self) -> usize {
        self.positions
    }

    pub fn constant(&self) -> &BTreeSet<usize> {
        &self.constant
    }

    pub fn cross(&self) -> &BTreeSet<(usize, usize)> {
        &self.cross
    }

    pub fn is_constant(&self, i: usize) -> bool {
        self.constant.contains(&i)
    }

    /// Non-constant positions, ascending.
    pub fn moving(&self) -> Vec<usize> {
        (0..self.positions)
            .filter(|i| !self.constant.contains(i))
            .collect()
    }
}

impl fmt::Display for SequenceTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "positions={} constant={:?} cross={:?}",
            self.positions, self.constant, self.cross
        )
    }
}

/// Every template over `positions` columns, in a fixed order: constant sets
/// by ascending bitmask, then cross patterns by ascending bitmask over the
/// lexicographically ordered non-constant pairs.
#[derive(Debug, Clone)]
pub struct TemplateSpace {
    positions: usize,
    const_mask: u64,
    pairs: Vec<(usize, usize)>,
    pattern: u64,
    done: bool,
}

impl TemplateSpace {
    /// Panics above 8 positions; the pattern space would not fit a `u64`.
    pub fn new(positions: usize) -> Self {
        assert!(
            positions <= 8,
            "template space over {positions} positions is too large"
        );
        let mut s = TemplateSpace {
            positions,
            const_mask: 0,
            pairs: Vec::new(),
            pattern: 0,
            done: false,
        };
        s.load_pairs();
        s
    }

    fn load_pairs(&mut self) {
        let moving: Vec<usize> = (0..self.positions)
            .filter(|i| self.const_mask >> i & 1 == 0)
            .collect();
        self.pairs = moving
            .iter()
            .flat_map(|&i| moving.iter().map(move |&j| (i, j)))
            .collect();
        self.pattern = 0;
    }

    /// Number of templates in the whole space.
    pub fn count(positions: usize) -> u64 {
        (0..=positions)
            .map(|m| binomial(positions, m) << (m * m))
            .sum()
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

impl Iterator for TemplateSpace {
    type Item = SequenceTemplate;

    fn next(&mut self) -> Option<SequenceTemplate> {
        if self.done {
            return None;
        }
        let constant = (0..self.positions)
            .filter(|i| self.const_mask >> i & 1 == 1)
            .collect();
        let cross = self
            .pairs
            .iter()
            .enumerate()
            .filter(|(b, _)| self.pattern >> b & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let t = SequenceTemplate {
            positions: self.positions,
            constant,
            cross,
        };

        self.pattern += 1;
        if self.pattern >> self.pairs.len() != 0 {
            self.const_mask += 1;
            if self.const_mask >> self.positions != 0 {
                self.done = true;
            } else {
                self.load_pairs();
            }
        }
        Some(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_templates() {
        assert!(matches!(
            SequenceTemplate::new(2, [2], []),
            Err(SequenceError::PositionOutOfRange {
                position: 2,
                positions: 2
            })
        ));
        assert!(matches!(
            SequenceTemplate::new(2, [0], [(0, 1)]),
            Err(SequenceError::CrossOnConstant(0))
        ));
        assert!(SequenceTemplate::new(2, [1], [(0, 0)]).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let t = SequenceTemplate::new(3, [2], [(0, 1), (1, 0)]).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"positions":3,"constant":[2],"cross":[[0,1],[1,0]]}"#);
        assert_eq!(serde_json::from_str::<SequenceTemplate>(&s).unwrap(), t);
        assert!(serde_json::from_str::<SequenceTemplate>(
            r#"{"positions":1,"constant":[0],"cross":[[0,0]]}"#
        )
        .is_err());
    }

    #[test]
    fn space_is_complete_and_ordered() {
        for r in 0..=3 {
            let all: Vec<_> = TemplateSpace::new(r).collect();
            assert_eq!(all.len() as u64, TemplateSpace::count(r));
            let distinct: BTreeSet<_> = all.iter().cloned().collect();
            assert_eq!(distinct.len(), all.len());
        }
        let one: Vec<_> = TemplateSpace::new(1).collect();
        assert_eq!(one.len(), 3);
        assert_eq!(one[0], SequenceTemplate::disconnected(1));
        assert_eq!(one[1], SequenceTemplate::new(1, [], [(0, 0)]).unwrap());
        assert_eq!(one[2], SequenceTemplate::new(1, [0], []).unwrap());
        assert_eq!(TemplateSpace::count(4), 67_689);
    }
}
