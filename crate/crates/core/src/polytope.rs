//! The Edmonds matching polytope: its inequality system, its vertices, and
//! its graph.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{enumerate_matchings, EdgeSeq, EdgeSetKind, Graph, Matching};
use crate::Rational;

/// Largest dimension accepted by [`brute_force_vertices`].
pub const MAX_BRUTE_FORCE_DIMENSION: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RowKind {
    NonNeg,
    Degree,
    OddSet,
}

/// One inequality `coeffs · x <= rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub coeffs: Vec<i64>,
    pub rhs: i64,
    pub kind: RowKind,
}

impl Row {
    pub fn satisfied_by(&self, x: &[i64]) -> bool {
        self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() <= self.rhs
    }

    fn satisfied_by_rational(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(x).map(|(&a, b)| Rational::from_integer(a.into()) * b).sum();
        lhs <= Rational::from_integer(self.rhs.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalitySystem {
    pub dimension: usize,
    pub rows: Vec<Row>,
}

impl InequalitySystem {
    pub fn count(&self, kind: RowKind) -> usize {
        self.rows.iter().filter(|r| r.kind == kind).count()
    }
}

/// Indicator vector of a matching in `{0,1}^n`.
pub fn matching_to_vertex(m: Matching, n: usize) -> Vec<i64> {
    m.indicator(n)
}

/// Non-negativity rows for every edge, one degree row per vertex, and one
/// odd-set row per vertex subset of odd size at least three.
pub fn edmonds_inequalities(g: &Graph) -> InequalitySystem {
    let n = g.edge_count();
    let mut rows = Vec::new();
    for i in 0..n {
        let mut coeffs = vec![0; n];
        coeffs[i] = -1;
        rows.push(Row { coeffs, rhs: 0, kind: RowKind::NonNeg });
    }
    for v in 0..g.vertex_count() {
        let coeffs = g.edges().iter().map(|&(a, b)| i64::from(a == v || b == v)).collect();
        rows.push(Row { coeffs, rhs: 1, kind: RowKind::Degree });
    }
    let vertices = g.vertex_count();
    assert!(vertices < 64, "odd-set rows need fewer than 64 vertices");
    for subset in 0u64..1 << vertices {
        let size = subset.count_ones();
        if size < 3 || size % 2 == 0 {
            continue;
        }
        let coeffs = g.edges().iter().map(|&(a, b)| i64::from(subset >> a & 1 == 1 && subset >> b & 1 == 1)).collect();
        rows.push(Row { coeffs, rhs: i64::from((size - 1) / 2), kind: RowKind::OddSet });
    }
    InequalitySystem { dimension: n, rows }
}

/// Every matching's indicator vector satisfies every Edmonds inequality.
pub fn check_matchings_feasible(g: &Graph) -> bool {
    let sys = edmonds_inequalities(g);
    enumerate_matchings(g).into_iter().all(|m| {
        let x = matching_to_vertex(m, g.edge_count());
        sys.rows.iter().all(|r| r.satisfied_by(&x))
    })
}

/// Solves the square system exactly; `None` when it is singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            let pivot_row = a[col].clone();
            for (x, p) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                *x -= &factor * p;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn combinations(len: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut pick = (0..k).collect::<Vec<_>>();
    if k > len {
        return out;
    }
    loop {
        out.push(pick.clone());
        let Some(i) = (0..k).rev().find(|&i| pick[i] != i + len - k) else {
            return out;
        };
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

/// Basic feasible solutions of the system, found by solving every
/// nonsingular `n × n` subsystem of rows as equalities. Sorted and
/// deduplicated.
pub fn brute_force_vertices(sys: &InequalitySystem) -> Result<Vec<Vec<Rational>>> {
    let n = sys.dimension;
    if n > MAX_BRUTE_FORCE_DIMENSION {
        return Err(Error::DimensionTooLarge { dimension: n, limit: MAX_BRUTE_FORCE_DIMENSION });
    }
    let int = |v: i64| Rational::from_integer(v.into());
    let found: BTreeSet<Vec<Rational>> = combinations(sys.rows.len(), n)
        .into_par_iter()
        .filter_map(|pick| {
            let a = pick.iter().map(|&r| sys.rows[r].coeffs.iter().map(|&c| int(c)).collect()).collect();
            let b = pick.iter().map(|&r| int(sys.rows[r].rhs)).collect();
            let x = solve_square(a, b)?;
            sys.rows.iter().all(|r| r.satisfied_by_rational(&x)).then_some(x)
        })
        .collect();
    Ok(found.into_iter().collect())
}

/// The graph of the matching polytope: matchings as vertices, adjacent when
/// their symmetric difference is a simple path or an even simple cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skeleton {
    pub dimension: usize,
    pub vertices: Vec<Matching>,
    pub edges: Vec<(usize, usize)>,
}

impl Skeleton {
    pub fn vertex_index(&self, m: Matching) -> Option<usize> {
        self.vertices.binary_search(&m).ok()
    }

    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        self.edges.binary_search(&(i.min(j), i.max(j))).ok()
    }

    pub fn indicator(&self, vertex: usize) -> Vec<i64> {
        matching_to_vertex(self.vertices[vertex], self.dimension)
    }

    /// `indicator(i) - indicator(j)` for edge `(i, j)`.
    pub fn edge_direction(&self, edge: usize) -> Vec<i8> {
        let (i, j) = self.edges[edge];
        let (a, b) = (self.vertices[i], self.vertices[j]);
        (0..self.dimension).map(|e| i8::from(a.contains(e)) - i8::from(b.contains(e))).collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph skeleton {\n");
        for (i, m) in self.vertices.iter().enumerate() {
            writeln!(out, "  v{i} [label=\"{m}\"];").unwrap();
        }
        for (i, j) in &self.edges {
            writeln!(out, "  v{i} -- v{j};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_skeleton(g: &Graph) -> Skeleton {
    let vertices = enumerate_matchings(g);
    let edges = (0..vertices.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let vertices = &vertices;
            (i + 1..vertices.len()).filter_map(move |j| {
                let diff = vertices[i].symmetric_difference(vertices[j]);
                match g.classify_mask(diff).expect("distinct matchings differ within the graph") {
                    EdgeSetKind::SimplePath | EdgeSetKind::EvenSimpleCycle => Some((i, j)),
                    EdgeSetKind::Neither => None,
                }
            })
        })
        .collect();
    Skeleton { dimension: g.edge_count(), vertices, edges }
}

/// Splits a sequence into its odd-position and even-position edges, two
/// matchings whose polytope vertices are adjacent.
pub fn hyperplane_to_skeleton_edge(seq: &EdgeSeq) -> (Matching, Matching) {
    let (mut odd, mut even) = (0u64, 0u64);
    for (j, &e) in seq.edges().iter().enumerate() {
        if j % 2 == 0 {
            odd |= 1 << e;
        } else {
            even |= 1 << e;
        }
    }
    (Matching::from_mask(odd), Matching::from_mask(even))
}

/// Rational vectors as integer vectors, when every entry is integral.
pub fn integral_points(points: &[Vec<Rational>]) -> Option<Vec<Vec<i64>>> {
    points
        .iter()
        .map(|p| p.iter().map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None }).collect())
        .collect()
}
