//! LP-orientations of the matching-polytope skeleton and the check that they
//! correspond one to one with the regions of the matching arrangement.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arrangement::region::{enumerate_regions, Region};
use crate::arrangement::{build_matching_arrangement, Arrangement};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::polytope::{build_skeleton, Skeleton};
use crate::Rational;

/// Rejection-sampling attempts per in-region sample.
pub const SAMPLE_RETRIES: usize = 1000;

/// Half-width of the integer noise added to scaled witnesses when sampling.
const SAMPLE_NOISE: i64 = 16;

/// Direction of skeleton edge `(i, j)`, `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    /// `i → j`
    Forward,
    /// `j → i`
    Backward,
}

impl Direction {
    pub fn reverse(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Orientation {
    directions: Vec<Direction>,
}

impl Orientation {
    pub fn new(directions: Vec<Direction>) -> Self {
        Self { directions }
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn reversed(&self) -> Orientation {
        Orientation { directions: self.directions.iter().map(|d| d.reverse()).collect() }
    }

    /// Direction bits in skeleton-edge order, `1` for `Backward`.
    pub fn fingerprint(&self) -> Vec<u64> {
        let mut words = vec![0u64; self.directions.len().div_ceil(64)];
        for (k, d) in self.directions.iter().enumerate() {
            if *d == Direction::Backward {
                words[k / 64] |= 1 << (k % 64);
            }
        }
        words
    }

    pub fn fingerprint_hex(&self) -> String {
        self.fingerprint().iter().map(|w| format!("{w:016x}")).collect()
    }

    /// Tail and head of every skeleton edge.
    pub fn arcs<'a>(&'a self, sk: &'a Skeleton) -> impl Iterator<Item = (usize, usize)> + 'a {
        sk.edges.iter().zip(&self.directions).map(|(&(i, j), d)| match d {
            Direction::Forward => (i, j),
            Direction::Backward => (j, i),
        })
    }

    pub fn to_dot(&self, sk: &Skeleton) -> String {
        let mut out = String::from("digraph orientation {\n");
        for (i, m) in sk.vertices.iter().enumerate() {
            writeln!(out, "  v{i} [label=\"{m}\"];").unwrap();
        }
        for (tail, head) in self.arcs(sk) {
            writeln!(out, "  v{tail} -> v{head};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Orients every skeleton edge towards the endpoint with the larger value.
fn orient_by_values<T: Ord>(sk: &Skeleton, values: &[T]) -> Result<Orientation> {
    sk.edges
        .iter()
        .enumerate()
        .map(|(edge, &(a, b))| match values[a].cmp(&values[b]) {
            std::cmp::Ordering::Less => Ok(Direction::Forward),
            std::cmp::Ordering::Greater => Ok(Direction::Backward),
            std::cmp::Ordering::Equal => Err(Error::TieOnEdge { edge, a, b }),
        })
        .collect::<Result<Vec<_>>>()
        .map(Orientation::new)
}

/// The orientation induced by the linear functional `x ↦ c · x`.
pub fn orient_by_functional(sk: &Skeleton, c: &[Rational]) -> Result<Orientation> {
    if c.len() != sk.dimension {
        return Err(Error::DimensionMismatch { expected: sk.dimension, got: c.len() });
    }
    let values: Vec<Rational> =
        sk.vertices.iter().map(|m| m.edges().into_iter().fold(Rational::zero(), |acc, e| acc + &c[e])).collect();
    orient_by_values(sk, &values)
}

fn orient_by_integer_functional(sk: &Skeleton, c: &[i64]) -> Result<Orientation> {
    let values: Vec<i64> = sk.vertices.iter().map(|m| m.edges().into_iter().map(|e| c[e]).sum()).collect();
    orient_by_values(sk, &values)
}

/// Orientations induced by the witness of every region, in region order.
pub fn orientations_of_regions(sk: &Skeleton, regions: &[Region]) -> Result<Vec<Orientation>> {
    regions.par_iter().map(|r| orient_by_functional(sk, r.witness())).collect()
}

/// All LP-orientations of the matching polytope of `g`, one per region of
/// its matching arrangement, deduplicated in region order.
pub fn enumerate_lp_orientations(g: &Graph, sequence_cap: usize) -> Result<Vec<Orientation>> {
    let arrangement = build_matching_arrangement(g, sequence_cap)?;
    let regions = enumerate_regions(&arrangement)?;
    let sk = build_skeleton(g);
    let mut seen = HashSet::new();
    Ok(orientations_of_regions(&sk, &regions)?.into_iter().filter(|o| seen.insert(o.clone())).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrientationProperties {
    pub acyclic: bool,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
}

impl OrientationProperties {
    pub fn unique_source(&self) -> Option<usize> {
        (self.sources.len() == 1).then(|| self.sources[0])
    }

    pub fn unique_sink(&self) -> Option<usize> {
        (self.sinks.len() == 1).then(|| self.sinks[0])
    }
}

pub fn orientation_properties(o: &Orientation, sk: &Skeleton) -> OrientationProperties {
    let n = sk.vertices.len();
    let mut indegree = vec![0usize; n];
    let mut outdegree = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (tail, head) in o.arcs(sk) {
        outdegree[tail] += 1;
        indegree[head] += 1;
        out[tail].push(head);
    }
    let sources = (0..n).filter(|&v| indegree[v] == 0).collect();
    let sinks = (0..n).filter(|&v| outdegree[v] == 0).collect();
    // Kahn's algorithm
    let mut remaining = indegree;
    let mut ready: Vec<usize> = (0..n).filter(|&v| remaining[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = ready.pop() {
        removed += 1;
        for &w in &out[v] {
            remaining[w] -= 1;
            if remaining[w] == 0 {
                ready.push(w);
            }
        }
    }
    OrientationProperties { acyclic: removed == n, sources, sinks }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionCheck {
    pub fingerprint: String,
    /// Sampled points that landed in the region.
    pub samples: usize,
    /// Samples whose orientation differed from the witness orientation.
    pub mismatches: usize,
    /// Samples not drawn within the retry budget.
    pub sampling_failures: usize,
    /// The witness functional tied on a skeleton edge.
    pub tie: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BijectionReport {
    #[serde(rename = "regions")]
    pub region_count: usize,
    #[serde(rename = "orientations")]
    pub orientation_count: usize,
    pub hyperplanes: usize,
    pub skeleton_vertices: usize,
    pub skeleton_edges: usize,
    pub samples_per_region: usize,
    pub seed: u64,
    pub injective: bool,
    pub well_defined: bool,
    pub total: bool,
    pub verdict: bool,
    pub per_region: Vec<RegionCheck>,
}

/// Integer point on the ray of a rational witness.
fn scaled_witness(witness: &[Rational]) -> Option<Vec<i64>> {
    let lcm = witness.iter().fold(num_bigint::BigInt::from(1), |l, x| l.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = witness.iter().map(|x| (x * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(num_bigint::BigInt::zero(), |g, x| g.gcd(x));
    if gcd.is_zero() {
        return None;
    }
    ints.iter().map(|x| (x / &gcd).to_i64()).collect()
}

/// Draws an integer point with the region's sign vector: noise in
/// `[-SAMPLE_NOISE, SAMPLE_NOISE]^n` plus a growing multiple of the scaled
/// witness, rejected until every sign matches.
fn sample_in_region(a: &Arrangement, region: &Region, base: &[i64], rng: &mut ChaCha8Rng) -> Option<Vec<i64>> {
    for attempt in 1..=SAMPLE_RETRIES as i64 {
        let candidate: Vec<i64> =
            base.iter().map(|&w| rng.random_range(-SAMPLE_NOISE..=SAMPLE_NOISE) + attempt * w).collect();
        let inside = a.hyperplanes().iter().zip(region.signs()).all(|(h, s)| {
            let d = h.dot_int(&candidate);
            d != 0 && (d > 0) == (s.as_i8() > 0)
        });
        if inside {
            return Some(candidate);
        }
    }
    None
}

fn check_region(
    a: &Arrangement,
    sk: &Skeleton,
    region: &Region,
    index: usize,
    samples: usize,
    seed: u64,
) -> RegionCheck {
    let witness_orientation = match orient_by_functional(sk, region.witness()) {
        Ok(o) => o,
        Err(_) => {
            return RegionCheck {
                fingerprint: String::new(),
                samples: 0,
                mismatches: 0,
                sampling_failures: 0,
                tie: true,
            };
        }
    };
    let mut check = RegionCheck {
        fingerprint: witness_orientation.fingerprint_hex(),
        samples: 0,
        mismatches: 0,
        sampling_failures: 0,
        tie: false,
    };
    let Some(base) = scaled_witness(region.witness()) else {
        check.sampling_failures = samples;
        return check;
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    for _ in 0..samples {
        match sample_in_region(a, region, &base, &mut rng) {
            None => check.sampling_failures += 1,
            Some(point) => {
                check.samples += 1;
                match orient_by_integer_functional(sk, &point) {
                    Ok(o) if o == witness_orientation => {}
                    _ => check.mismatches += 1,
                }
            }
        }
    }
    check
}

/// Checks that witness orientations are tie-free and pairwise distinct, and
/// that random points of each region induce that region's orientation.
///
/// Failures are reported through the verdict; only input errors are returned
/// as `Err`.
pub fn verify_bijection(
    g: &Graph,
    samples_per_region: usize,
    seed: u64,
    sequence_cap: usize,
) -> Result<BijectionReport> {
    let arrangement = build_matching_arrangement(g, sequence_cap)?;
    let regions = enumerate_regions(&arrangement)?;
    let sk = build_skeleton(g);
    let per_region: Vec<RegionCheck> = regions
        .par_iter()
        .enumerate()
        .map(|(index, region)| check_region(&arrangement, &sk, region, index, samples_per_region, seed))
        .collect();

    let total = per_region.iter().all(|c| !c.tie);
    let mut distinct: HashMap<&str, usize> = HashMap::new();
    for c in per_region.iter().filter(|c| !c.tie) {
        *distinct.entry(c.fingerprint.as_str()).or_default() += 1;
    }
    let orientation_count = distinct.len();
    let injective = total && orientation_count == regions.len();
    let well_defined =
        samples_per_region >= 1 && per_region.iter().all(|c| c.mismatches == 0 && c.sampling_failures == 0);
    Ok(BijectionReport {
        region_count: regions.len(),
        orientation_count,
        hyperplanes: arrangement.len(),
        skeleton_vertices: sk.vertices.len(),
        skeleton_edges: sk.edges.len(),
        samples_per_region,
        seed,
        injective,
        well_defined,
        total,
        verdict: injective && well_defined && total,
        per_region,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DEFAULT_SEQUENCE_CAP;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x.into())).collect()
    }

    fn k3() -> Graph {
        Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn disjoint() -> Graph {
        Graph::new(4, vec![(0, 1), (2, 3)]).unwrap()
    }

    #[test]
    fn single_edge_orientation() {
        let sk = build_skeleton(&Graph::new(2, vec![(0, 1)]).unwrap());
        let o = orient_by_functional(&sk, &q(&[1])).unwrap();
        assert_eq!(o.arcs(&sk).collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn tie_on_hyperplane() {
        let sk = build_skeleton(&disjoint());
        assert_eq!(orient_by_functional(&sk, &q(&[0, 1])), Err(Error::TieOnEdge { edge: 0, a: 0, b: 1 }));
        assert!(matches!(orient_by_functional(&sk, &q(&[1])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn triangle_total_order() {
        let sk = build_skeleton(&k3());
        let o = orient_by_functional(&sk, &q(&[3, 2, 1])).unwrap();
        // vertices ∅, {e1}, {e2}, {e3} carry values 0, 3, 2, 1
        let arcs: Vec<_> = o.arcs(&sk).collect();
        assert_eq!(arcs, vec![(0, 1), (0, 2), (0, 3), (2, 1), (3, 1), (3, 2)]);
        let props = orientation_properties(&o, &sk);
        assert!(props.acyclic);
        assert_eq!(props.unique_source(), Some(0));
        assert_eq!(props.unique_sink(), Some(1));
    }

    #[test]
    fn square_properties() {
        let sk = build_skeleton(&disjoint());
        let o = orient_by_functional(&sk, &q(&[1, 1])).unwrap();
        let props = orientation_properties(&o, &sk);
        assert!(props.acyclic);
        assert_eq!((props.unique_source(), props.unique_sink()), (Some(0), Some(3)));

        // ∅ → {e1} → {e1,e2} → {e2} → ∅ ; edges are (0,1) (0,2) (1,3) (2,3)
        use Direction::*;
        let cyclic = Orientation::new(vec![Forward, Backward, Forward, Backward]);
        let props = orientation_properties(&cyclic, &sk);
        assert!(!props.acyclic);
        assert!(props.sources.is_empty() && props.sinks.is_empty());
    }

    #[test]
    fn lp_orientation_counts() {
        let single = Graph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(enumerate_lp_orientations(&single, DEFAULT_SEQUENCE_CAP).unwrap().len(), 2);
        assert_eq!(enumerate_lp_orientations(&disjoint(), DEFAULT_SEQUENCE_CAP).unwrap().len(), 4);
        assert_eq!(enumerate_lp_orientations(&k3(), DEFAULT_SEQUENCE_CAP).unwrap().len(), 24);
    }

    #[test]
    fn fingerprints_distinguish_and_reverse() {
        use Direction::*;
        let o = Orientation::new(vec![Forward, Backward, Backward]);
        assert_eq!(o.fingerprint(), vec![0b110]);
        assert_eq!(o.reversed().fingerprint(), vec![0b001]);
        assert_eq!(o.fingerprint_hex(), "0000000000000006");
    }

    #[test]
    fn verify_small_graphs() {
        let single = Graph::new(2, vec![(0, 1)]).unwrap();
        let report = verify_bijection(&single, 3, 7, DEFAULT_SEQUENCE_CAP).unwrap();
        assert!(report.verdict);
        assert_eq!((report.region_count, report.orientation_count), (2, 2));

        let report = verify_bijection(&k3(), 5, 0, DEFAULT_SEQUENCE_CAP).unwrap();
        assert!(report.verdict, "{report:?}");
        assert_eq!((report.region_count, report.orientation_count), (24, 24));
        assert!(report.per_region.iter().all(|c| c.samples == 5));
    }

    #[test]
    fn zero_samples_is_not_a_verification() {
        let single = Graph::new(2, vec![(0, 1)]).unwrap();
        assert!(!verify_bijection(&single, 0, 0, DEFAULT_SEQUENCE_CAP).unwrap().verdict);
    }

    #[test]
    fn scaled_witnesses_are_primitive_integer_points() {
        let w = vec![Rational::new(1.into(), 2.into()), Rational::new((-3).into(), 4.into())];
        assert_eq!(scaled_witness(&w), Some(vec![2, -3]));
        assert_eq!(scaled_witness(&q(&[0, 0])), None);
    }
}
