//! Central hyperplane arrangements with `{-1,0,+1}` normals, and the matching
//! arrangement of a graph.

pub mod charpoly;
pub(crate) mod lp;
pub mod region;

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{enumerate_sequences, EdgeSeq, Graph};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    pub fn of(value: &Rational) -> Option<Sign> {
        if value.is_positive() {
            Some(Sign::Positive)
        } else if value.is_negative() {
            Some(Sign::Negative)
        } else {
            None
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Positive => 1,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i8(self.as_i8())
    }
}

/// A linear hyperplane `normal · x = 0`, normalized so that its first nonzero
/// coefficient is `+1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    normal: Vec<i8>,
}

impl Hyperplane {
    pub fn new(mut normal: Vec<i8>) -> Result<Self> {
        if let Some(&bad) = normal.iter().find(|c| !(-1..=1).contains(*c)) {
            return Err(Error::InvalidSequence(format!("coefficient {bad} outside {{-1,0,1}}")));
        }
        match normal.iter().find(|&&c| c != 0) {
            None => Err(Error::InvalidSequence("zero normal".into())),
            Some(&lead) => {
                if lead < 0 {
                    normal.iter_mut().for_each(|c| *c = -*c);
                }
                Ok(Self { normal })
            }
        }
    }

    pub fn normal(&self) -> &[i8] {
        &self.normal
    }

    pub fn dimension(&self) -> usize {
        self.normal.len()
    }

    /// Coordinates with a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.normal.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i)
    }

    pub fn dot(&self, point: &[Rational]) -> Rational {
        let mut sum = Rational::zero();
        for (&c, x) in self.normal.iter().zip(point) {
            match c {
                1 => sum += x,
                -1 => sum -= x,
                _ => {}
            }
        }
        sum
    }

    pub fn dot_int(&self, point: &[i64]) -> i64 {
        self.normal.iter().zip(point).map(|(&c, &x)| i64::from(c) * x).sum()
    }

    fn sort_key(&self) -> (usize, Vec<usize>, &[i8]) {
        let support: Vec<usize> = self.support().collect();
        (support.len(), support, &self.normal)
    }
}

impl Serialize for Hyperplane {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.normal.serialize(serializer)
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, i) in self.support().enumerate() {
            let neg = self.normal[i] < 0;
            match (k, neg) {
                (0, _) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "x{}", i + 1)?;
        }
        write!(f, " = 0")
    }
}

/// Coefficient `(-1)^j` on the `j`-th edge of the sequence, then normalized.
pub fn sequence_to_hyperplane(seq: &EdgeSeq, dimension: usize) -> Hyperplane {
    let mut normal = vec![0i8; dimension];
    for (j, &e) in seq.edges().iter().enumerate() {
        normal[e] = if j % 2 == 0 { 1 } else { -1 };
    }
    Hyperplane::new(normal).expect("edge sequences are nonempty")
}

/// A central arrangement: deduplicated hyperplanes sorted by support size,
/// then support, then normal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arrangement {
    dimension: usize,
    hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    pub fn new(dimension: usize, hyperplanes: impl IntoIterator<Item = Hyperplane>) -> Result<Self> {
        let mut hyperplanes: Vec<Hyperplane> = hyperplanes.into_iter().collect();
        if let Some(h) = hyperplanes.iter().find(|h| h.dimension() != dimension) {
            return Err(Error::DimensionMismatch { expected: dimension, got: h.dimension() });
        }
        hyperplanes.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        hyperplanes.dedup();
        Ok(Self { dimension, hyperplanes })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    /// Index of the hyperplane with the given normal, up to sign.
    pub fn position(&self, normal: &[i8]) -> Option<usize> {
        let h = Hyperplane::new(normal.to_vec()).ok()?;
        self.hyperplanes.iter().position(|g| *g == h)
    }

    /// Arrangement with coordinates permuted: coordinate `k` of the result is
    /// coordinate `order[k]` of `self`.
    pub fn permute_coordinates(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, got: order.len() });
        }
        let permuted = self
            .hyperplanes
            .iter()
            .map(|h| Hyperplane::new(order.iter().map(|&k| h.normal[k]).collect()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.dimension, permuted)
    }
}

/// The matching arrangement: one hyperplane per simple path and even simple
/// cycle of `g`.
pub fn build_matching_arrangement(g: &Graph, sequence_cap: usize) -> Result<Arrangement> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let seqs = enumerate_sequences(g, sequence_cap)?;
    Arrangement::new(g.edge_count(), seqs.iter().map(|s| sequence_to_hyperplane(s, g.edge_count())))
}

/// Sign vector of `point` with respect to every hyperplane.
pub fn region_of_point(a: &Arrangement, point: &[Rational]) -> Result<Vec<Sign>> {
    if point.len() != a.dimension {
        return Err(Error::DimensionMismatch { expected: a.dimension, got: point.len() });
    }
    a.hyperplanes
        .iter()
        .enumerate()
        .map(|(index, h)| Sign::of(&h.dot(point)).ok_or(Error::OnHyperplane { index }))
        .collect()
}
