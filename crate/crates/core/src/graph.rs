//! Simple undirected graphs with a fixed edge numbering, their matchings, and
//! the simple paths and even simple cycles that generate the matching
//! arrangement.
//!
//! Edges are indexed `0..n` in input order. Edge index `i` is coordinate `i`
//! of every vector in the crate, so renumbering the edges permutes
//! coordinates.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Edge sets are stored as `u64` bitmasks.
pub const MAX_EDGES: usize = 64;

/// Default cap on the number of enumerated paths and even cycles.
pub const DEFAULT_SEQUENCE_CAP: usize = 500_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    labels: Vec<String>,
}

impl Graph {
    /// Builds a graph on vertices `0..vertex_count`, numbering edges in the
    /// given order.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let labels = (0..vertex_count).map(|v| v.to_string()).collect();
        Self::with_labels(vertex_count, edges, labels)
    }

    fn with_labels(vertex_count: usize, edges: Vec<(usize, usize)>, labels: Vec<String>) -> Result<Self> {
        if edges.len() > MAX_EDGES {
            return Err(Error::TooManyEdges { edges: edges.len(), limit: MAX_EDGES });
        }
        let mut seen = std::collections::HashSet::new();
        for (i, &(a, b)) in edges.iter().enumerate() {
            for v in [a, b] {
                if v >= vertex_count {
                    return Err(Error::VertexOutOfRange { vertex: v, vertex_count });
                }
            }
            if a == b {
                return Err(Error::Loop { line: i + 1, label: labels[a].clone() });
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::ParallelEdge { line: i + 1, a: labels[a].clone(), b: labels[b].clone() });
            }
        }
        Ok(Self { vertex_count, edges, labels })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        self.edges[edge]
    }

    /// Input label of a dense vertex id.
    pub fn label(&self, vertex: usize) -> &str {
        &self.labels[vertex]
    }

    /// Mask with one bit per edge.
    pub fn full_mask(&self) -> u64 {
        mask_below(self.edges.len())
    }

    fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((e, b));
            adj[b].push((e, a));
        }
        adj
    }

    fn shares_vertex(&self, e: usize, f: usize) -> bool {
        let (a, b) = self.edges[e];
        let (c, d) = self.edges[f];
        a == c || a == d || b == c || b == d
    }

    /// Returns the graph whose edge `k` is edge `order[k]` of `self`.
    ///
    /// `order` must be a permutation of `0..edge_count`.
    pub fn renumber_edges(&self, order: &[usize]) -> Result<Self> {
        check_permutation(order, self.edges.len())?;
        let edges = order.iter().map(|&k| self.edges[k]).collect();
        Self::with_labels(self.vertex_count, edges, self.labels.clone())
    }

    /// Returns the isomorphic graph with vertex `v` renamed to `mapping[v]`.
    pub fn relabel_vertices(&self, mapping: &[usize]) -> Result<Self> {
        check_permutation(mapping, self.vertex_count)?;
        let edges = self.edges.iter().map(|&(a, b)| (mapping[a], mapping[b])).collect();
        Self::new(self.vertex_count, edges)
    }

    /// Classifies an edge set as a simple path, an even simple cycle, or neither.
    pub fn classify_edge_set(&self, edges: &[usize]) -> Result<EdgeSetKind> {
        let mut mask = 0u64;
        for &e in edges {
            if e >= self.edges.len() {
                return Err(Error::EdgeOutOfRange { index: e, edge_count: self.edges.len() });
            }
            mask |= 1 << e;
        }
        self.classify_mask(mask)
    }

    pub fn classify_mask(&self, mask: u64) -> Result<EdgeSetKind> {
        if mask == 0 {
            return Err(Error::EmptyEdgeSet);
        }
        if mask & !self.full_mask() != 0 {
            let index = 63 - mask.leading_zeros() as usize;
            return Err(Error::EdgeOutOfRange { index, edge_count: self.edges.len() });
        }
        let mut degree: HashMap<usize, u32> = HashMap::new();
        for e in bits(mask) {
            let (a, b) = self.edges[e];
            *degree.entry(a).or_default() += 1;
            *degree.entry(b).or_default() += 1;
        }
        if degree.values().any(|&d| d > 2) {
            return Ok(EdgeSetKind::Neither);
        }
        // connectivity: grow from the lowest edge through shared endpoints
        let mut reached = mask & mask.wrapping_neg();
        loop {
            let mut grown = reached;
            for e in bits(mask & !reached) {
                if bits(reached).any(|f| self.shares_vertex(e, f)) {
                    grown |= 1 << e;
                }
            }
            if grown == reached {
                break;
            }
            reached = grown;
        }
        if reached != mask {
            return Ok(EdgeSetKind::Neither);
        }
        let leaves = degree.values().filter(|&&d| d == 1).count();
        let len = mask.count_ones();
        Ok(match leaves {
            2 => EdgeSetKind::SimplePath,
            0 if len.is_multiple_of(2) => EdgeSetKind::EvenSimpleCycle,
            _ => EdgeSetKind::Neither,
        })
    }
}

fn check_permutation(perm: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    if perm.len() != len {
        return Err(Error::InvalidSequence(format!("permutation of length {} for {len} items", perm.len())));
    }
    for &k in perm {
        if k >= len || std::mem::replace(&mut seen[k], true) {
            return Err(Error::InvalidSequence(format!("{perm:?} is not a permutation")));
        }
    }
    Ok(())
}

pub(crate) fn mask_below(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the set bit positions of a mask in increasing order.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let i = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(i)
    })
}

/// Parses an edge list: one `u v` pair of vertex labels per line.
///
/// Labels are arbitrary whitespace-free tokens mapped to dense ids in order of
/// first appearance. Blank lines and lines starting with `#` are skipped. The
/// order of the edge lines is the edge numbering.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut seen = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = tokens[..] else {
            return Err(Error::MalformedLine { line: line_no, text: raw.to_string() });
        };
        if a == b {
            return Err(Error::Loop { line: line_no, label: a.to_string() });
        }
        let mut id = |label: &str| {
            *ids.entry(label.to_string()).or_insert_with(|| {
                labels.push(label.to_string());
                labels.len() - 1
            })
        };
        let (u, v) = (id(a), id(b));
        if seen.insert((u.min(v), u.max(v)), line_no).is_some() {
            return Err(Error::ParallelEdge { line: line_no, a: a.to_string(), b: b.to_string() });
        }
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Graph::with_labels(labels.len(), edges, labels)
}

/// A set of pairwise non-incident edges, stored as an edge bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Matching(u64);

impl Matching {
    pub const EMPTY: Matching = Matching(0);

    /// Checks the matching property against `g`.
    pub fn from_edges(g: &Graph, edges: &[usize]) -> Option<Self> {
        let mut mask = 0u64;
        let mut used = vec![false; g.vertex_count()];
        for &e in edges {
            if e >= g.edge_count() || mask & (1 << e) != 0 {
                return None;
            }
            let (a, b) = g.endpoints(e);
            if used[a] || used[b] {
                return None;
            }
            used[a] = true;
            used[b] = true;
            mask |= 1 << e;
        }
        Some(Matching(mask))
    }

    pub(crate) fn from_mask(mask: u64) -> Self {
        Matching(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn contains(self, edge: usize) -> bool {
        edge < 64 && self.0 & (1 << edge) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn edges(self) -> Vec<usize> {
        bits(self.0).collect()
    }

    pub fn symmetric_difference(self, other: Matching) -> u64 {
        self.0 ^ other.0
    }

    /// Indicator vector in `{0,1}^n`.
    pub fn indicator(self, n: usize) -> Vec<i64> {
        (0..n).map(|i| i64::from(self.contains(i))).collect()
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in bits(self.0).enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "e{}", e + 1)?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Matching {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(bits(self.0))
    }
}

/// All matchings of `g`, including the empty one, sorted by bitmask.
pub fn enumerate_matchings(g: &Graph) -> Vec<Matching> {
    fn extend(g: &Graph, next: usize, mask: u64, used: &mut [bool], out: &mut Vec<Matching>) {
        out.push(Matching(mask));
        for e in next..g.edge_count() {
            let (a, b) = g.endpoints(e);
            if used[a] || used[b] {
                continue;
            }
            used[a] = true;
            used[b] = true;
            extend(g, e + 1, mask | 1 << e, used, out);
            used[a] = false;
            used[b] = false;
        }
    }
    let mut out = Vec::new();
    extend(g, 0, 0, &mut vec![false; g.vertex_count()], &mut out);
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeSetKind {
    SimplePath,
    EvenSimpleCycle,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SequenceKind {
    SimplePath,
    EvenSimpleCycle,
}

/// An edge sequence forming a simple path or an even simple cycle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeSeq {
    edges: Vec<usize>,
    kind: SequenceKind,
}

impl EdgeSeq {
    /// Validates `edges` as a traversal of a simple path or of an even simple
    /// cycle in `g`. A sequence whose first and last edges meet is read as a
    /// cycle when it has at least four edges.
    pub fn new(g: &Graph, edges: Vec<usize>) -> Result<Self> {
        let len = edges.len();
        if len == 0 {
            return Err(Error::EmptyEdgeSet);
        }
        let mut mask = 0u64;
        for &e in &edges {
            if e >= g.edge_count() {
                return Err(Error::EdgeOutOfRange { index: e, edge_count: g.edge_count() });
            }
            if mask & (1 << e) != 0 {
                return Err(Error::InvalidSequence(format!("edge {e} repeated")));
            }
            mask |= 1 << e;
        }
        let closed = len >= 4 && g.shares_vertex(edges[0], edges[len - 1]);
        for i in 0..len {
            for j in i + 1..len {
                let neighbours = j == i + 1 || (closed && i == 0 && j == len - 1);
                if neighbours != g.shares_vertex(edges[i], edges[j]) {
                    return Err(Error::InvalidSequence(format!(
                        "edges at positions {i} and {j} of {edges:?} break simplicity"
                    )));
                }
            }
        }
        let kind = match (closed, g.classify_mask(mask)?) {
            (false, EdgeSetKind::SimplePath) => SequenceKind::SimplePath,
            (true, EdgeSetKind::EvenSimpleCycle) => SequenceKind::EvenSimpleCycle,
            (_, other) => {
                return Err(Error::InvalidSequence(format!("{edges:?} forms {other:?}")));
            }
        };
        Ok(Self { edges, kind })
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn mask(&self) -> u64 {
        self.edges.iter().fold(0, |m, &e| m | 1 << e)
    }
}

/// Every simple path (single edges included) and every even simple cycle of
/// `g`, one canonical traversal each.
///
/// Paths are kept in the direction whose edge-index sequence is
/// lexicographically smaller; cycles start at their smallest edge and continue
/// towards the smaller of its two neighbours. Output is sorted by length, then
/// by edge sequence.
pub fn enumerate_sequences(g: &Graph, cap: usize) -> Result<Vec<EdgeSeq>> {
    struct Walk<'a> {
        adj: &'a [Vec<(usize, usize)>],
        start: usize,
        visited: Vec<bool>,
        path: Vec<usize>,
        out: Vec<EdgeSeq>,
        cap: usize,
    }

    impl Walk<'_> {
        fn push(&mut self, edges: Vec<usize>, kind: SequenceKind) -> Result<()> {
            if self.out.len() == self.cap {
                return Err(Error::SequenceCapExceeded { limit: self.cap });
            }
            self.out.push(EdgeSeq { edges, kind });
            Ok(())
        }

        fn extend(&mut self, at: usize) -> Result<()> {
            for k in 0..self.adj[at].len() {
                let (e, next) = self.adj[at][k];
                if next == self.start {
                    let len = self.path.len() + 1;
                    if len >= 4 && len.is_multiple_of(2) {
                        let first = self.path[0];
                        if first < e && self.path.iter().all(|&f| f >= first) && self.path[1] < e {
                            let mut edges = self.path.clone();
                            edges.push(e);
                            self.push(edges, SequenceKind::EvenSimpleCycle)?;
                        }
                    }
                    continue;
                }
                if self.visited[next] {
                    continue;
                }
                self.path.push(e);
                let canonical = match self.path.len() {
                    1 => self.start < next,
                    _ => self.path.iter().lt(self.path.iter().rev()),
                };
                if canonical {
                    self.push(self.path.clone(), SequenceKind::SimplePath)?;
                }
                self.visited[next] = true;
                self.extend(next)?;
                self.visited[next] = false;
                self.path.pop();
            }
            Ok(())
        }
    }

    let adj = g.incidence();
    let mut walk =
        Walk { adj: &adj, start: 0, visited: vec![false; g.vertex_count()], path: Vec::new(), out: Vec::new(), cap };
    for start in 0..g.vertex_count() {
        walk.start = start;
        walk.visited[start] = true;
        walk.extend(start)?;
        walk.visited[start] = false;
    }
    let mut out = walk.out;
    out.sort_unstable_by(|a, b| (a.len(), &a.edges).cmp(&(b.len(), &b.edges)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn c4() -> Graph {
        Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn p4() -> Graph {
        Graph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    fn brute_force_matchings(g: &Graph) -> Vec<u64> {
        (0..1u64 << g.edge_count())
            .filter(|&m| {
                let mut deg = vec![0; g.vertex_count()];
                for e in bits(m) {
                    let (a, b) = g.endpoints(e);
                    deg[a] += 1;
                    deg[b] += 1;
                }
                deg.iter().all(|&d| d <= 1)
            })
            .collect()
    }

    #[test]
    fn parses_edges_in_file_order() {
        let g = parse_graph("0 1\n1 2").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn labels_get_dense_ids_by_first_appearance() {
        let g = parse_graph("# triangle\nb a\n\na c\n c b \n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(g.label(0), "b");
        assert_eq!(g.label(2), "c");
    }

    #[test]
    fn rejects_parallel_loops_and_garbage() {
        assert!(matches!(parse_graph("0 1\n0 1"), Err(Error::ParallelEdge { line: 2, .. })));
        assert!(matches!(parse_graph("0 1\n1 0"), Err(Error::ParallelEdge { line: 2, .. })));
        assert!(matches!(parse_graph("0 0"), Err(Error::Loop { line: 1, .. })));
        assert!(matches!(parse_graph("0 1 2"), Err(Error::MalformedLine { line: 1, .. })));
        assert!(matches!(parse_graph("0"), Err(Error::MalformedLine { .. })));
        assert_eq!(parse_graph(""), Err(Error::EmptyGraph));
        assert_eq!(parse_graph("# nothing\n\n"), Err(Error::EmptyGraph));
    }

    #[test]
    fn graph_new_checks_invariants() {
        assert!(matches!(Graph::new(2, vec![(1, 1)]), Err(Error::Loop { .. })));
        assert!(matches!(Graph::new(2, vec![(0, 2)]), Err(Error::VertexOutOfRange { .. })));
        assert!(matches!(Graph::new(3, vec![(0, 1), (1, 0)]), Err(Error::ParallelEdge { .. })));
    }

    #[test]
    fn matchings_of_small_graphs() {
        let single = Graph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(enumerate_matchings(&single), vec![Matching(0), Matching(1)]);

        let masks: Vec<u64> = enumerate_matchings(&k3()).into_iter().map(Matching::mask).collect();
        assert_eq!(masks, brute_force_matchings(&k3()));
        assert_eq!(masks, vec![0, 0b001, 0b010, 0b100]);

        let masks: Vec<u64> = enumerate_matchings(&p4()).into_iter().map(Matching::mask).collect();
        assert_eq!(masks, brute_force_matchings(&p4()));
        assert_eq!(masks, vec![0, 0b001, 0b010, 0b100, 0b101]);
    }

    #[test]
    fn matching_from_edges_rejects_incident_pairs() {
        assert!(Matching::from_edges(&p4(), &[0, 2]).is_some());
        assert!(Matching::from_edges(&p4(), &[0, 1]).is_none());
        assert!(Matching::from_edges(&p4(), &[3]).is_none());
        assert_eq!(Matching::from_edges(&p4(), &[2, 0]).unwrap().to_string(), "{e1,e3}");
    }

    #[test]
    fn sequences_of_two_disjoint_edges() {
        let g = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        let seqs = enumerate_sequences(&g, DEFAULT_SEQUENCE_CAP).unwrap();
        let edges: Vec<&[usize]> = seqs.iter().map(EdgeSeq::edges).collect();
        assert_eq!(edges, vec![&[0][..], &[1]]);
    }

    #[test]
    fn sequences_of_triangle_skip_the_odd_cycle() {
        let seqs = enumerate_sequences(&k3(), DEFAULT_SEQUENCE_CAP).unwrap();
        let edges: Vec<&[usize]> = seqs.iter().map(EdgeSeq::edges).collect();
        assert_eq!(edges, vec![&[0][..], &[1], &[2], &[0, 1], &[0, 2], &[1, 2]]);
        assert!(seqs.iter().all(|s| s.kind() == SequenceKind::SimplePath));
    }

    #[test]
    fn sequences_of_four_cycle() {
        let seqs = enumerate_sequences(&c4(), DEFAULT_SEQUENCE_CAP).unwrap();
        assert_eq!(seqs.len(), 13);
        for len in 1..=3 {
            assert_eq!(seqs.iter().filter(|s| s.len() == len).count(), 4);
        }
        let cycle = seqs.last().unwrap();
        assert_eq!(cycle.kind(), SequenceKind::EvenSimpleCycle);
        assert_eq!(cycle.edges(), &[0, 1, 2, 3]);
    }

    #[test]
    fn sequence_cap_is_enforced() {
        assert_eq!(enumerate_sequences(&c4(), 12), Err(Error::SequenceCapExceeded { limit: 12 }));
        assert!(enumerate_sequences(&c4(), 13).is_ok());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(k3().classify_edge_set(&[0]).unwrap(), EdgeSetKind::SimplePath);
        assert_eq!(k3().classify_edge_set(&[0, 1, 2]).unwrap(), EdgeSetKind::Neither);
        assert_eq!(c4().classify_edge_set(&[0, 1, 2, 3]).unwrap(), EdgeSetKind::EvenSimpleCycle);
        assert_eq!(c4().classify_edge_set(&[0, 2]).unwrap(), EdgeSetKind::Neither);
        assert_eq!(c4().classify_edge_set(&[3, 0, 1]).unwrap(), EdgeSetKind::SimplePath);
        assert_eq!(k3().classify_edge_set(&[]), Err(Error::EmptyEdgeSet));
        assert!(matches!(k3().classify_edge_set(&[3]), Err(Error::EdgeOutOfRange { .. })));
        let star = Graph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.classify_edge_set(&[0, 1, 2]).unwrap(), EdgeSetKind::Neither);
    }

    #[test]
    fn edge_seq_validation() {
        let g = c4();
        assert_eq!(EdgeSeq::new(&g, vec![0, 1, 2, 3]).unwrap().kind(), SequenceKind::EvenSimpleCycle);
        assert_eq!(EdgeSeq::new(&g, vec![1, 0, 3]).unwrap().kind(), SequenceKind::SimplePath);
        assert!(EdgeSeq::new(&g, vec![0, 2]).is_err());
        assert!(EdgeSeq::new(&g, vec![0, 2, 1]).is_err());
        assert!(EdgeSeq::new(&g, vec![0, 0]).is_err());
        assert!(EdgeSeq::new(&k3(), vec![0, 1, 2]).is_err());
        assert!(EdgeSeq::new(&g, vec![]).is_err());
    }

    #[test]
    fn renumbering_and_relabeling() {
        let g = p4();
        let r = g.renumber_edges(&[2, 0, 1]).unwrap();
        assert_eq!(r.edges(), &[(2, 3), (0, 1), (1, 2)]);
        assert!(g.renumber_edges(&[0, 0, 1]).is_err());
        let h = g.relabel_vertices(&[3, 2, 1, 0]).unwrap();
        assert_eq!(h.edges(), &[(3, 2), (2, 1), (1, 0)]);
    }
}
