//! Characteristic polynomial by the finite-field method.
//!
//! For a prime `q` of good reduction, `χ(q)` is the number of points of
//! `F_q^n` on no hyperplane. The count is taken for `n + 1` primes and
//! interpolated; one further prime is held out as a control.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::Arrangement;
use crate::error::{Error, Result};
use crate::Rational;

/// Largest dimension for which points are counted exhaustively.
pub const MAX_COUNT_DIMENSION: usize = 7;

/// Integer polynomial, coefficients listed constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharPoly {
    coefficients: Vec<i64>,
    #[serde(skip)]
    evaluations: Vec<(u64, u128)>,
    #[serde(skip)]
    control: (u64, u128),
}

impl CharPoly {
    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn is_monic(&self) -> bool {
        self.coefficients.last() == Some(&1)
    }

    /// `(prime, count)` pairs used for interpolation.
    pub fn evaluations(&self) -> &[(u64, u128)] {
        &self.evaluations
    }

    /// Held-out `(prime, count)` pair the polynomial was checked against.
    pub fn control(&self) -> (u64, u128) {
        self.control
    }

    pub fn eval(&self, t: i64) -> i128 {
        self.coefficients.iter().rev().fold(0i128, |acc, &c| acc * i128::from(t) + i128::from(c))
    }

    /// Number of regions, `(-1)^n χ(-1)`.
    pub fn region_count(&self) -> u64 {
        let value = self.eval(-1);
        let signed = if self.degree().is_multiple_of(2) { value } else { -value };
        u64::try_from(signed).expect("central arrangements have a positive region count")
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// The `count` smallest primes strictly greater than `bound`.
fn primes_above(bound: u64, count: usize) -> Vec<u64> {
    (bound + 1..).filter(|&p| is_prime(p)).take(count).collect()
}

struct Prepared {
    n: usize,
    m: usize,
    /// `(hyperplane, last coefficient)` for hyperplanes whose support ends at `j`
    ending: Vec<Vec<(usize, i8)>>,
    /// `(hyperplane, coefficient)` for hyperplanes involving `j` but ending later
    updates: Vec<Vec<(usize, i8)>>,
}

/// `sum + c` modulo `q` for `c = ±1`.
fn step(sum: u64, c: i8, q: u64) -> u64 {
    if c > 0 {
        if sum + 1 == q {
            0
        } else {
            sum + 1
        }
    } else if sum == 0 {
        q - 1
    } else {
        sum - 1
    }
}

/// The root of `c·x + sum = 0` for `c = ±1`.
fn root(sum: u64, c: i8, q: u64) -> usize {
    (if c > 0 { (q - sum) % q } else { sum }) as usize
}

/// Scratch space of one counting task: per-level stamps of forbidden values.
struct Marks {
    q: usize,
    stamps: Vec<u64>,
    stamp: u64,
}

impl Marks {
    fn new(n: usize, q: u64) -> Self {
        Self { q: q as usize, stamps: vec![0; n * q as usize], stamp: 0 }
    }
}

impl Prepared {
    fn new(a: &Arrangement) -> Self {
        let n = a.dimension();
        let mut ending = vec![Vec::new(); n];
        let mut updates = vec![Vec::new(); n];
        for (id, h) in a.hyperplanes().iter().enumerate() {
            let support: Vec<usize> = h.support().collect();
            let (&last, rest) = support.split_last().expect("nonzero normal");
            ending[last].push((id, h.normal()[last]));
            for &j in rest {
                updates[j].push((id, h.normal()[j]));
            }
        }
        Self { n, m: a.len(), ending, updates }
    }

    /// Stamps the values of `x[j]` forbidden by hyperplanes ending at `j`;
    /// returns the stamp and how many distinct values are forbidden.
    fn forbid(&self, j: usize, sums: &[u64], q: u64, marks: &mut Marks) -> (u64, u64) {
        marks.stamp += 1;
        let stamp = marks.stamp;
        let row = &mut marks.stamps[j * marks.q..(j + 1) * marks.q];
        let mut forbidden = 0;
        for &(h, c) in &self.ending[j] {
            let r = root(sums[h], c, q);
            if row[r] != stamp {
                row[r] = stamp;
                forbidden += 1;
            }
        }
        (stamp, forbidden)
    }

    /// Advances `x[j]` by one in the partial sums.
    fn advance(&self, j: usize, sums: &mut [u64], q: u64) {
        for &(h, c) in &self.updates[j] {
            sums[h] = step(sums[h], c, q);
        }
    }

    /// Counts values of `x[j..]` avoiding every hyperplane. `sums` holds the
    /// value of every hyperplane on the coordinates before `j`, with `x[j]`
    /// taken as zero, and is restored on return.
    fn count_from(&self, j: usize, sums: &mut [u64], q: u64, marks: &mut Marks) -> u128 {
        let (stamp, forbidden) = self.forbid(j, sums, q, marks);
        if j + 1 == self.n {
            return u128::from(q - forbidden);
        }
        let mut total = 0;
        for v in 0..marks.q {
            if marks.stamps[j * marks.q + v] != stamp {
                total += self.count_from(j + 1, sums, q, marks);
            }
            // after q steps the sums are back where they started
            self.advance(j, sums, q);
        }
        total
    }

    /// Points with first nonzero coordinate `lead` equal to one.
    fn count_orbit(&self, lead: usize, q: u64) -> u128 {
        // every hyperplane supported before `lead` vanishes there
        if self.ending[..lead].iter().any(|e| !e.is_empty()) {
            return 0;
        }
        let mut sums = vec![0u64; self.m];
        for &(h, c) in &self.updates[lead] {
            sums[h] = step(0, c, q);
        }
        // hyperplanes ending at `lead` take the value ±1 there
        if lead + 1 == self.n {
            return 1;
        }
        // split on the next coordinate for parallelism
        let next = lead + 1;
        let mut marks = Marks::new(self.n, q);
        let (stamp, _) = self.forbid(next, &sums, q, &mut marks);
        let allowed: Vec<usize> = (0..q as usize).filter(|&v| marks.stamps[next * marks.q + v] != stamp).collect();
        allowed
            .into_par_iter()
            .map(|v| {
                let mut sums = sums.clone();
                for _ in 0..v {
                    self.advance(next, &mut sums, q);
                }
                if next + 1 == self.n {
                    return 1;
                }
                let mut marks = Marks::new(self.n, q);
                self.count_from(next + 1, &mut sums, q, &mut marks)
            })
            .sum()
    }

    /// Number of points of `F_q^n` on no hyperplane.
    fn count(&self, q: u64) -> u128 {
        // the complement is stable under scaling by F_q^*; count points whose
        // first nonzero coordinate is 1
        let per_orbit: u128 = (0..self.n).map(|lead| self.count_orbit(lead, q)).sum();
        per_orbit * u128::from(q - 1)
    }
}

/// Number of points of `F_q^n` lying on no hyperplane of `a`, for a prime `q`.
pub fn count_complement(a: &Arrangement, q: u64) -> Result<u128> {
    if a.is_empty() {
        return Err(Error::EmptyArrangement);
    }
    if a.dimension() > MAX_COUNT_DIMENSION {
        return Err(Error::DimensionTooLarge { dimension: a.dimension(), limit: MAX_COUNT_DIMENSION });
    }
    Ok(Prepared::new(a).count(q))
}

/// Lagrange interpolation through `(x, y)` pairs, coefficients constant first.
fn interpolate(points: &[(u64, u128)]) -> Vec<Rational> {
    let mut coeffs = vec![Rational::zero(); points.len()];
    for (i, &(xi, yi)) in points.iter().enumerate() {
        // basis polynomial prod_{j != i} (t - x_j) / (x_i - x_j)
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let xj = Rational::from_integer(BigInt::from(xj));
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * &xj;
            }
            basis = next;
            denom *= Rational::from_integer(BigInt::from(xi)) - xj;
        }
        let scale = Rational::from_integer(BigInt::from(yi)) / denom;
        for (c, b) in coeffs.iter_mut().zip(basis) {
            *c += b * &scale;
        }
    }
    coeffs
}

/// Characteristic polynomial of a nonempty arrangement of dimension at most
/// [`MAX_COUNT_DIMENSION`].
///
/// Uses the `n + 1` smallest primes above `max(n, #hyperplanes)` and checks
/// the result against the next prime.
pub fn characteristic_polynomial(a: &Arrangement) -> Result<CharPoly> {
    if a.is_empty() {
        return Err(Error::EmptyArrangement);
    }
    let n = a.dimension();
    if n > MAX_COUNT_DIMENSION {
        return Err(Error::DimensionTooLarge { dimension: n, limit: MAX_COUNT_DIMENSION });
    }
    let prepared = Prepared::new(a);
    let mut primes = primes_above(n.max(a.len()) as u64, n + 2);
    let control_prime = primes.pop().expect("n + 2 primes");
    let evaluations: Vec<(u64, u128)> = primes.iter().map(|&q| (q, prepared.count(q))).collect();

    let coefficients = interpolate(&evaluations)
        .into_iter()
        .map(|c| {
            if !c.is_integer() {
                return Err(Error::InterpolationInconsistent(format!("non-integer coefficient {c}")));
            }
            c.to_integer()
                .to_i64()
                .ok_or_else(|| Error::InterpolationInconsistent(format!("coefficient {c} out of range")))
        })
        .collect::<Result<Vec<i64>>>()?;
    if coefficients.last() != Some(&1) {
        return Err(Error::InterpolationInconsistent(format!(
            "polynomial {coefficients:?} is not monic of degree {n}"
        )));
    }
    let control = (control_prime, prepared.count(control_prime));
    let poly = CharPoly { coefficients, evaluations, control };
    if poly.eval(control_prime as i64) != control.1 as i128 {
        return Err(Error::InterpolationInconsistent(format!(
            "χ({control_prime}) = {} but {} points were counted",
            poly.eval(control_prime as i64),
            control.1
        )));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_matching_arrangement, Hyperplane};
    use crate::graph::Graph;

    /// Direct enumeration of `F_q^n` without any pruning.
    fn naive_count(a: &Arrangement, q: u64) -> u128 {
        let n = a.dimension();
        let mut total = 0;
        let mut x = vec![0i64; n];
        for idx in 0..q.pow(n as u32) {
            let mut r = idx;
            for xi in x.iter_mut() {
                *xi = (r % q) as i64;
                r /= q;
            }
            if a.hyperplanes().iter().all(|h| h.dot_int(&x).rem_euclid(q as i64) != 0) {
                total += 1;
            }
        }
        total
    }

    fn k3() -> Arrangement {
        build_matching_arrangement(&Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap(), 100).unwrap()
    }

    #[test]
    fn primes() {
        assert_eq!(primes_above(6, 4), vec![7, 11, 13, 17]);
        assert_eq!(primes_above(1, 3), vec![2, 3, 5]);
    }

    #[test]
    fn pruned_count_matches_naive_count() {
        let a = k3();
        for q in [2, 3, 5, 7, 11] {
            assert_eq!(count_complement(&a, q).unwrap(), naive_count(&a, q), "q = {q}");
        }
        let c4 =
            build_matching_arrangement(&Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap(), 100).unwrap();
        for q in [13, 17] {
            assert_eq!(count_complement(&c4, q).unwrap(), naive_count(&c4, q));
        }
        let skew = Arrangement::new(3, [Hyperplane::new(vec![0, 1, -1]).unwrap()]).unwrap();
        assert_eq!(count_complement(&skew, 5).unwrap(), naive_count(&skew, 5));
    }

    #[test]
    fn single_edge() {
        let a = build_matching_arrangement(&Graph::new(2, vec![(0, 1)]).unwrap(), 10).unwrap();
        let chi = characteristic_polynomial(&a).unwrap();
        assert_eq!(chi.coefficients(), &[-1, 1]);
        assert_eq!(chi.region_count(), 2);
    }

    #[test]
    fn two_disjoint_edges() {
        let a = build_matching_arrangement(&Graph::new(4, vec![(0, 1), (2, 3)]).unwrap(), 10).unwrap();
        let chi = characteristic_polynomial(&a).unwrap();
        assert_eq!(chi.coefficients(), &[1, -2, 1]);
        assert_eq!(chi.region_count(), 4);
    }

    #[test]
    fn triangle() {
        // (t-1)(t-2)(t-3) = t^3 - 6t^2 + 11t - 6
        let chi = characteristic_polynomial(&k3()).unwrap();
        assert_eq!(chi.coefficients(), &[-6, 11, -6, 1]);
        assert_eq!(chi.region_count(), 24);
        let (q, count) = chi.control();
        assert_eq!(count, u128::from((q - 1) * (q - 2) * (q - 3)));
        // primes above max(3, 6)
        let used: Vec<u64> = chi.evaluations().iter().map(|e| e.0).collect();
        assert_eq!(used, vec![7, 11, 13, 17]);
        assert_eq!(q, 19);
    }

    #[test]
    fn interpolation_recovers_known_polynomial() {
        // t^2 - 3t + 2
        let points: Vec<(u64, u128)> = [5u64, 7, 11].iter().map(|&t| (t, u128::from(t * t - 3 * t + 2))).collect();
        let c: Vec<Rational> = interpolate(&points);
        let expect: Vec<Rational> = [2, -3, 1].iter().map(|&v: &i64| Rational::from_integer(v.into())).collect();
        assert_eq!(c, expect);
    }

    #[test]
    fn guards() {
        assert_eq!(characteristic_polynomial(&Arrangement::new(2, Vec::new()).unwrap()), Err(Error::EmptyArrangement));
        let big = Arrangement::new(8, [Hyperplane::new(vec![1, 0, 0, 0, 0, 0, 0, 0]).unwrap()]).unwrap();
        assert!(matches!(characteristic_polynomial(&big), Err(Error::DimensionTooLarge { .. })));
    }
}
