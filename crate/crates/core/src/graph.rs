//! Finite simple graphs over opaque integer vertex identifiers.
//!
//! Adjacency is kept as a dense bit matrix whose rows are indexed by the rank
//! of a vertex in ascending identifier order. Every search in this module
//! walks vertices in that order, so "first witness found" and "lexicographically
//! least witness" coincide.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = u32;
pub type VertexSet = BTreeSet<VertexId>;

/// Largest graph accepted by the loaders unless the caller raises the bound.
pub const DEFAULT_MAX_VERTICES: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge {0}-{1} listed more than once")]
    DuplicateEdge(VertexId, VertexId),
    #[error("vertex {0} listed more than once")]
    DuplicateVertex(VertexId),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("graph has {size} vertices, more than the limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("tuples have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("tuple `{name}` repeats vertex {vertex}")]
    RepeatedTupleEntry { name: String, vertex: VertexId },
}

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD).max(1)
}

#[inline]
fn test_bit(bits: &[u64], i: usize) -> bool {
    bits[i / WORD] >> (i % WORD) & 1 == 1
}

#[inline]
fn set_bit(bits: &mut [u64], i: usize) {
    bits[i / WORD] |= 1 << (i % WORD);
}

#[inline]
fn clear_bit(bits: &mut [u64], i: usize) {
    bits[i / WORD] &= !(1 << (i % WORD));
}

#[inline]
fn popcount(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
fn lowest_bit(bits: &[u64]) -> Option<usize> {
    bits.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    ids: Vec<VertexId>,
    words: usize,
    adj: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.ids)
            .field("edges", &self.edges())
            .finish()
    }
}

impl Default for Graph {
    fn default() -> Self {
        Graph::new()
    }
}

impl Graph {
    pub fn new() -> Self {
        Graph {
            ids: Vec::new(),
            words: 1,
            adj: Vec::new(),
        }
    }

    /// Builds a graph from explicit vertex and edge lists, rejecting loops,
    /// repeated vertices, repeated edges (in either orientation) and edges
    /// naming unknown vertices.
    pub fn from_edges(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut ids: Vec<VertexId> = vertices.into_iter().collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0]));
        }
        let words = words_for(ids.len());
        let mut g = Graph {
            adj: vec![0; ids.len() * words],
            ids,
            words,
        };
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let iu = g.index_of(u).ok_or(GraphError::UnknownVertex(u))?;
            let iv = g.index_of(v).ok_or(GraphError::UnknownVertex(v))?;
            if g.adjacent_idx(iu, iv) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.link(iu, iv);
        }
        Ok(g)
    }

    /// Graph on `vertices` with no edges.
    pub fn empty(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let mut g = Graph::new();
        for v in vertices {
            g.add_vertex(v);
        }
        g
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Vertices in ascending order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.ids.iter().copied().collect()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.index_of(v).is_some()
    }

    pub fn max_id(&self) -> Option<VertexId> {
        self.ids.last().copied()
    }

    /// First identifier strictly above every vertex of the graph.
    pub fn fresh_id(&self) -> VertexId {
        self.max_id().map_or(0, |m| m + 1)
    }

    pub(crate) fn index_of(&self, v: VertexId) -> Option<usize> {
        self.ids.binary_search(&v).ok()
    }

    pub(crate) fn id_at(&self, i: usize) -> VertexId {
        self.ids[i]
    }

    pub(crate) fn row(&self, i: usize) -> &[u64] {
        &self.adj[i * self.words..(i + 1) * self.words]
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    #[inline]
    fn adjacent_idx(&self, i: usize, j: usize) -> bool {
        test_bit(self.row(i), j)
    }

    fn link(&mut self, i: usize, j: usize) {
        let w = self.words;
        set_bit(&mut self.adj[i * w..(i + 1) * w], j);
        set_bit(&mut self.adj[j * w..(j + 1) * w], i);
    }

    fn unlink(&mut self, i: usize, j: usize) {
        let w = self.words;
        clear_bit(&mut self.adj[i * w..(i + 1) * w], j);
        clear_bit(&mut self.adj[j * w..(j + 1) * w], i);
    }

    /// Adds an isolated vertex. Returns false if it was already present.
    pub fn add_vertex(&mut self, v: VertexId) -> bool {
        let pos = match self.ids.binary_search(&v) {
            Ok(_) => return false,
            Err(pos) => pos,
        };
        let old_n = self.ids.len();
        let new_words = words_for(old_n + 1);
        if pos == old_n && new_words == self.words {
            self.ids.push(v);
            self.adj.extend(std::iter::repeat_n(0, self.words));
            return true;
        }
        let shift = |i: usize| if i >= pos { i + 1 } else { i };
        let mut adj = vec![0u64; (old_n + 1) * new_words];
        for i in 0..old_n {
            let row = self.row(i);
            let ni = shift(i);
            for j in 0..old_n {
                if test_bit(row, j) {
                    set_bit(&mut adj[ni * new_words..(ni + 1) * new_words], shift(j));
                }
            }
        }
        self.ids.insert(pos, v);
        self.words = new_words;
        self.adj = adj;
        true
    }

    /// Adds the edge `u`-`v`. Both endpoints must already exist.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let iu = self.index_of(u).ok_or(GraphError::UnknownVertex(u))?;
        let iv = self.index_of(v).ok_or(GraphError::UnknownVertex(v))?;
        self.link(iu, iv);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) {
        if let (Some(iu), Some(iv)) = (self.index_of(u), self.index_of(v)) {
            if iu != iv {
                self.unlink(iu, iv);
            }
        }
    }

    /// Edge test; false when either endpoint is absent.
    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(i), Some(j)) => self.adjacent_idx(i, j),
            _ => false,
        }
    }

    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let Some(i) = self.index_of(v) else {
            return Vec::new();
        };
        let row = self.row(i);
        (0..self.len())
            .filter(|&j| test_bit(row, j))
            .map(|j| self.ids[j])
            .collect()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            let row = self.row(i);
            for j in i + 1..self.len() {
                if test_bit(row, j) {
                    out.push((self.ids[i], self.ids[j]));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        (0..self.len())
            .map(|i| popcount(self.row(i)))
            .sum::<usize>()
            / 2
    }

    /// Induced subgraph on the vertices of `keep` that belong to the graph.
    pub fn induced<'a>(&self, keep: impl IntoIterator<Item = &'a VertexId>) -> Graph {
        let mut idx: Vec<usize> = keep.into_iter().filter_map(|v| self.index_of(*v)).collect();
        idx.sort_unstable();
        idx.dedup();
        let words = words_for(idx.len());
        let mut g = Graph {
            ids: idx.iter().map(|&i| self.ids[i]).collect(),
            words,
            adj: vec![0; idx.len() * words],
        };
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate().skip(a + 1) {
                if self.adjacent_idx(i, j) {
                    g.link(a, b);
                }
            }
        }
        g
    }

    /// Bitset of every dense index.
    pub(crate) fn full_mask(&self) -> Vec<u64> {
        let mut m = vec![0; self.words];
        for i in 0..self.len() {
            set_bit(&mut m, i);
        }
        m
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.ids.clone(),
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn from_json(json: &GraphJson, limit: usize) -> Result<Self, GraphError> {
        if json.vertices.len() > limit {
            return Err(GraphError::TooLarge {
                size: json.vertices.len(),
                limit,
            });
        }
        Graph::from_edges(
            json.vertices.iter().copied(),
            json.edges.iter().map(|e| (e[0], e[1])),
        )
    }
}

/// Wire form of a graph: each unordered edge listed once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<[VertexId; 2]>,
}

/// An `m`-clique, members in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueWitness {
    pub members: Vec<VertexId>,
}

/// Depth-first clique search over a bit matrix with a greedy-colouring bound.
///
/// Vertices are branched on in ascending index order, so cliques are reached
/// in lexicographic order and the first one passing `accept` is the least.
pub(crate) struct CliqueSearch<'a> {
    words: usize,
    matrix: &'a [u64],
}

impl<'a> CliqueSearch<'a> {
    /// `matrix` holds one row of `words` words per vertex index.
    pub(crate) fn new(words: usize, matrix: &'a [u64]) -> Self {
        CliqueSearch { words, matrix }
    }

    #[inline]
    fn row(&self, i: usize) -> &[u64] {
        &self.matrix[i * self.words..(i + 1) * self.words]
    }

    pub(crate) fn first(
        &self,
        candidates: &[u64],
        m: usize,
        accept: &mut dyn FnMut(&[usize]) -> bool,
    ) -> Option<Vec<usize>> {
        let mut chosen = Vec::with_capacity(m);
        if self.dfs(candidates, m, &mut chosen, accept) {
            Some(chosen)
        } else {
            None
        }
    }

    fn dfs(
        &self,
        cand: &[u64],
        m: usize,
        chosen: &mut Vec<usize>,
        accept: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if chosen.len() == m {
            return accept(chosen);
        }
        let need = m - chosen.len();
        if popcount(cand) < need || !self.colours_at_least(cand, need) {
            return false;
        }
        let mut rest = cand.to_vec();
        let mut next = vec![0u64; self.words];
        while let Some(v) = lowest_bit(&rest) {
            clear_bit(&mut rest, v);
            let row = self.row(v);
            for (n, (r, a)) in next.iter_mut().zip(rest.iter().zip(row)) {
                *n = r & a;
            }
            chosen.push(v);
            if self.dfs(&next, m, chosen, accept) {
                return true;
            }
            chosen.pop();
            if popcount(&rest) < need {
                break;
            }
        }
        false
    }

    fn colours_at_least(&self, cand: &[u64], need: usize) -> bool {
        if need <= 1 {
            return true;
        }
        let mut rest = cand.to_vec();
        let mut colours = 0;
        let mut class = vec![0u64; self.words];
        while lowest_bit(&rest).is_some() {
            colours += 1;
            if colours >= need {
                return true;
            }
            class.copy_from_slice(&rest);
            while let Some(v) = lowest_bit(&class) {
                clear_bit(&mut class, v);
                clear_bit(&mut rest, v);
                for (c, a) in class.iter_mut().zip(self.row(v)) {
                    *c &= !a;
                }
            }
        }
        false
    }
}

/// Lexicographically least `m`-clique of `g`, if any.
pub fn find_clique(g: &Graph, m: usize) -> Option<CliqueWitness> {
    find_clique_within(g, &g.full_mask(), m)
}

pub(crate) fn find_clique_within(g: &Graph, mask: &[u64], m: usize) -> Option<CliqueWitness> {
    let search = CliqueSearch::new(g.words(), &g.adj);
    search
        .first(mask, m, &mut |_| true)
        .map(|idx| CliqueWitness {
            members: idx.into_iter().map(|i| g.id_at(i)).collect(),
        })
}

/// Least `m`-clique inside `mask` accepted by `accept` (given dense indices).
pub(crate) fn first_clique_where(
    g: &Graph,
    mask: &[u64],
    m: usize,
    accept: &mut dyn FnMut(&[usize]) -> bool,
) -> Option<Vec<VertexId>> {
    CliqueSearch::new(g.words(), &g.adj)
        .first(mask, m, accept)
        .map(|idx| idx.into_iter().map(|i| g.id_at(i)).collect())
}

pub fn is_kn_free(g: &Graph, n: usize) -> bool {
    find_clique(g, n).is_none()
}

/// Compares the quantifier-free types of two equal-length tuples over `base`:
/// same equality pattern, same edge pattern, and the same equalities and
/// edges to every base vertex.
pub fn qf_type_equal_over(
    g: &Graph,
    t1: &[VertexId],
    t2: &[VertexId],
    base: &VertexSet,
) -> Result<bool, GraphError> {
    if t1.len() != t2.len() {
        return Err(GraphError::LengthMismatch {
            left: t1.len(),
            right: t2.len(),
        });
    }
    for i in 0..t1.len() {
        for j in 0..t1.len() {
            if (t1[i] == t1[j]) != (t2[i] == t2[j]) {
                return Ok(false);
            }
            if g.adjacent(t1[i], t1[j]) != g.adjacent(t2[i], t2[j]) {
                return Ok(false);
            }
        }
        for &c in base {
            if (t1[i] == c) != (t2[i] == c) || g.adjacent(t1[i], c) != g.adjacent(t2[i], c) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Seeded random `K_n`-free graph on vertices `0..size`.
///
/// Pairs are visited in lexicographic order; each is proposed with
/// probability `density` and kept unless it would close a `K_n`.
pub fn random_kn_free(n: usize, size: usize, density: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_kn_free_with(n, size, density, &mut rng)
}

pub fn random_kn_free_with<R: Rng>(n: usize, size: usize, density: f64, rng: &mut R) -> Graph {
    let density = density.clamp(0.0, 1.0);
    let mut g = Graph::empty(0..size as VertexId);
    for i in 0..size {
        for j in i + 1..size {
            if !rng.gen_bool(density) {
                continue;
            }
            let common: Vec<u64> = g.row(i).iter().zip(g.row(j)).map(|(a, b)| a & b).collect();
            if n < 2 || find_clique_within(&g, &common, n - 2).is_none() {
                g.link(i, j);
            }
        }
    }
    g
}

/// A graph together with the parameter set `C` and named sets and tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedGraph {
    pub graph: Graph,
    pub base: VertexSet,
    pub named_sets: BTreeMap<String, VertexSet>,
    pub named_tuples: BTreeMap<String, Vec<VertexId>>,
}

impl PointedGraph {
    pub fn new(
        graph: Graph,
        base: VertexSet,
        named_sets: BTreeMap<String, VertexSet>,
        named_tuples: BTreeMap<String, Vec<VertexId>>,
    ) -> Result<Self, GraphError> {
        for &v in base.iter().chain(named_sets.values().flatten()) {
            if !graph.contains(v) {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        for (name, tuple) in &named_tuples {
            let mut seen = VertexSet::new();
            for &v in tuple {
                if !graph.contains(v) {
                    return Err(GraphError::UnknownVertex(v));
                }
                if !seen.insert(v) {
                    return Err(GraphError::RepeatedTupleEntry {
                        name: name.clone(),
                        vertex: v,
                    });
                }
            }
        }
        Ok(PointedGraph {
            graph,
            base,
            named_sets,
            named_tuples,
        })
    }

    /// Pointed graph with only a base set.
    pub fn with_base(graph: Graph, base: VertexSet) -> Result<Self, GraphError> {
        PointedGraph::new(graph, base, BTreeMap::new(), BTreeMap::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_clique(g: &Graph, m: usize) -> Option<Vec<VertexId>> {
        let vs = g.vertices();
        let n = vs.len();
        // Subsets visited as sorted index vectors in lexicographic order.
        fn rec(
            g: &Graph,
            vs: &[VertexId],
            start: usize,
            m: usize,
            cur: &mut Vec<VertexId>,
        ) -> bool {
            if cur.len() == m {
                return cur
                    .iter()
                    .enumerate()
                    .all(|(i, &u)| cur[i + 1..].iter().all(|&v| g.adjacent(u, v)));
            }
            for i in start..vs.len() {
                cur.push(vs[i]);
                if rec(g, vs, i + 1, m, cur) {
                    return true;
                }
                cur.pop();
            }
            false
        }
        let mut cur = Vec::new();
        if m <= n && rec(g, vs, 0, m, &mut cur) {
            Some(cur)
        } else {
            None
        }
    }

    #[test]
    fn triangle_is_its_own_clique() {
        let g = Graph::from_edges([1, 2, 3], [(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(find_clique(&g, 3).unwrap().members, vec![1, 2, 3]);
        assert!(!is_kn_free(&g, 3));
    }

    #[test]
    fn four_cycle_is_triangle_free() {
        let g = Graph::from_edges([1, 2, 3, 4], [(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        assert!(find_clique(&g, 3).is_none());
        let k2 = Graph::from_edges([1, 2], [(1, 2)]).unwrap();
        assert!(is_kn_free(&k2, 3));
    }

    #[test]
    fn seeded_random_graph_matches_subset_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut g = Graph::empty(0..10);
        for i in 0..10 {
            for j in i + 1..10 {
                if rng.gen_bool(0.5) {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        for m in 1..=6 {
            assert_eq!(
                find_clique(&g, m).map(|w| w.members),
                brute_force_clique(&g, m),
                "m = {m}"
            );
        }
    }

    #[test]
    fn loader_rejects_loops_and_duplicates() {
        assert_eq!(
            Graph::from_edges([1], [(1, 1)]),
            Err(GraphError::SelfLoop(1))
        );
        assert_eq!(
            Graph::from_edges([1, 2], [(1, 2), (2, 1)]),
            Err(GraphError::DuplicateEdge(1, 2))
        );
        assert_eq!(
            Graph::from_edges([1, 1], []),
            Err(GraphError::DuplicateVertex(1))
        );
        assert_eq!(
            Graph::from_edges([1], [(1, 5)]),
            Err(GraphError::UnknownVertex(5))
        );
        let json = GraphJson {
            vertices: (0..10).collect(),
            edges: vec![],
        };
        assert_eq!(
            Graph::from_json(&json, 5),
            Err(GraphError::TooLarge { size: 10, limit: 5 })
        );
    }

    #[test]
    fn insertion_out_of_order_keeps_edges() {
        let mut g = Graph::new();
        for v in (0..70).rev() {
            g.add_vertex(v * 3);
        }
        g.add_edge(0, 207).unwrap();
        g.add_edge(3, 6).unwrap();
        g.add_vertex(1);
        g.add_edge(1, 207).unwrap();
        assert!(g.adjacent(0, 207) && g.adjacent(207, 1) && g.adjacent(6, 3));
        assert!(!g.adjacent(0, 1));
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.vertices()[..3], [0, 1, 3]);
    }

    #[test]
    fn random_kn_free_contract() {
        assert!(random_kn_free(3, 0, 0.5, 1).is_empty());
        let g = random_kn_free(3, 50, 0.3, 1);
        assert_eq!(g.len(), 50);
        assert!(is_kn_free(&g, 3));
        assert_eq!(g, random_kn_free(3, 50, 0.3, 1));
        let g4 = random_kn_free(4, 30, 0.8, 9);
        assert!(is_kn_free(&g4, 4));
        assert!(!is_kn_free(&g4, 3));
    }

    #[test]
    fn qf_type_comparison() {
        let g = Graph::from_edges([1, 2, 3, 4, 9], [(1, 2), (1, 9), (3, 9)]).unwrap();
        let none = VertexSet::new();
        assert!(qf_type_equal_over(&g, &[1, 2], &[1, 2], &none).unwrap());
        assert!(!qf_type_equal_over(&g, &[1, 2], &[3, 4], &none).unwrap());
        assert!(qf_type_equal_over(&g, &[1], &[3], &VertexSet::from([9])).unwrap());
        assert!(!qf_type_equal_over(&g, &[1], &[4], &VertexSet::from([9])).unwrap());
        assert!(!qf_type_equal_over(&g, &[9], &[3], &VertexSet::from([9])).unwrap());
        assert!(qf_type_equal_over(&g, &[1], &[1, 2], &none).is_err());
    }

    #[test]
    fn pointed_graph_validation() {
        let g = Graph::empty([1, 2, 3]);
        let tuples = BTreeMap::from([("b".to_string(), vec![1, 1])]);
        assert!(matches!(
            PointedGraph::new(g.clone(), VertexSet::new(), BTreeMap::new(), tuples),
            Err(GraphError::RepeatedTupleEntry { .. })
        ));
        assert!(PointedGraph::with_base(g, VertexSet::from([7])).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph(max: usize) -> impl Strategy<Value = Graph> {
            (0..=max).prop_flat_map(|n| {
                proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(
                    move |bits| {
                        let mut g = Graph::empty(0..n as VertexId);
                        let mut k = 0;
                        for i in 0..n {
                            for j in i + 1..n {
                                if bits[k] {
                                    g.add_edge(i as VertexId, j as VertexId).unwrap();
                                }
                                k += 1;
                            }
                        }
                        g
                    },
                )
            })
        }

        proptest! {
            #[test]
            fn clique_search_agrees_with_enumeration(g in arb_graph(12), m in 1usize..=6) {
                prop_assert_eq!(find_clique(&g, m).map(|w| w.members), brute_force_clique(&g, m));
            }

            #[test]
            fn kn_freeness_is_hereditary(g in arb_graph(10), keep in proptest::collection::vec(any::<bool>(), 10), n in 3usize..5) {
                let sub: Vec<VertexId> = g.vertices().iter().copied().filter(|&v| keep[v as usize]).collect();
                let h = g.induced(&sub);
                if is_kn_free(&g, n) {
                    prop_assert!(is_kn_free(&h, n));
                }
            }

            #[test]
            fn qf_type_equality_is_an_equivalence(g in arb_graph(7), a in proptest::collection::vec(0u32..7, 2), b in proptest::collection::vec(0u32..7, 2), c in proptest::collection::vec(0u32..7, 2), base in proptest::collection::btree_set(0u32..7, 0..3)) {
                let n = g.len() as u32;
                prop_assume!(n > 0);
                let fix = |t: &Vec<u32>| t.iter().map(|v| v % n).collect::<Vec<_>>();
                let (a, b, c) = (fix(&a), fix(&b), fix(&c));
                let eq = |x: &[u32], y: &[u32]| qf_type_equal_over(&g, x, y, &base).unwrap();
                prop_assert!(eq(&a, &a));
                prop_assert_eq!(eq(&a, &b), eq(&b, &a));
                if eq(&a, &b) && eq(&b, &c) {
                    prop_assert!(eq(&a, &c));
                }
            }
        }
    }
}
