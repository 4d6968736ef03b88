//! Region enumeration by incremental sign-vector extension.
//!
//! Hyperplanes are added one at a time. Every feasible partial sign vector
//! carries a strictly interior witness; the side of the new hyperplane
//! containing the witness is feasible for free, and the opposite side is
//! decided by the slack program
//!
//! ```text
//! max δ  s.t.  s_i (a_i · x) >= δ,  -1 <= x_j <= 1
//! ```
//!
//! which is realizable iff its optimum is positive. Two exact shortcuts come
//! first: a circuit of three or four normals whose other signs agree forces
//! the new sign, and a witness whose projection onto the new hyperplane stays
//! inside the region proves both sides feasible. Final witnesses are the
//! maximum-margin optima of the slack program.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::lp::max_margin;
use super::{Arrangement, Hyperplane, Sign};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    signs: Vec<Sign>,
    witness: Vec<Rational>,
}

impl Region {
    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn witness(&self) -> &[Rational] {
        &self.witness
    }

    /// The antipodal region, witnessed by the negated point.
    pub fn antipode(&self) -> Region {
        Region {
            signs: self.signs.iter().map(|s| s.negate()).collect(),
            witness: self.witness.iter().map(|x| -x).collect(),
        }
    }
}

impl Serialize for Region {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let witness: Vec<String> = self.witness.iter().map(ToString::to_string).collect();
        let mut s = serializer.serialize_struct("Region", 2)?;
        s.serialize_field("signs", &self.signs)?;
        s.serialize_field("witness", &witness)?;
        s.end()
    }
}

fn signed_rows(hyperplanes: &[Hyperplane], signs: &[Sign]) -> Vec<Vec<i64>> {
    hyperplanes.iter().zip(signs).map(|(h, s)| h.normal().iter().map(|&c| i64::from(c * s.as_i8())).collect()).collect()
}

/// Maximum-margin point of the slack program for the first `signs.len()`
/// hyperplanes, or `None` when the sign vector is not realizable.
fn slack_program(hyperplanes: &[Hyperplane], signs: &[Sign], dimension: usize) -> Option<Vec<Rational>> {
    let margin = max_margin(&signed_rows(hyperplanes, signs), dimension);
    margin.value.is_positive().then_some(margin.point)
}

/// Positive integer multiple of a rational point.
fn integer_multiple(point: &[Rational]) -> Option<Vec<i64>> {
    let lcm = point.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    point.iter().map(|x| (x.numer() * (&lcm / x.denom())).to_i64()).collect()
}

fn reduce(mut point: Vec<i64>) -> Vec<i64> {
    let g = point.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g > 1 {
        point.iter_mut().for_each(|x| *x /= g);
    }
    point
}

/// A point strictly on `side` of `h` keeping the earlier signs of `point`,
/// which must satisfy them strictly: `m·point ± h` for `m` beyond every
/// `|a_i · h|`.
fn push_off(earlier: &[Hyperplane], point: &[i64], h: &Hyperplane, side: Sign) -> Option<Vec<i64>> {
    let normal: Vec<i64> = h.normal().iter().map(|&c| c.into()).collect();
    let m = earlier.iter().map(|g| g.dot_int(&normal).abs()).max().unwrap_or(0) + 1;
    let s = i64::from(side.as_i8());
    let moved =
        point.iter().zip(&normal).map(|(&x, &c)| x.checked_mul(m)?.checked_add(s * c)).collect::<Option<Vec<i64>>>()?;
    Some(reduce(moved))
}

/// The orthogonal projection of `point` onto `h`, scaled to an integer
/// point, when it still lies strictly inside every earlier halfspace.
fn project(earlier: &[Hyperplane], signs: &[Sign], point: &[i64], h: &Hyperplane) -> Option<Vec<i64>> {
    let hh = h.normal().iter().filter(|&&c| c != 0).count() as i64;
    let hw = h.dot_int(point);
    let projected = point
        .iter()
        .zip(h.normal())
        .map(|(&x, &c)| x.checked_mul(hh)?.checked_sub(hw * i64::from(c)))
        .collect::<Option<Vec<i64>>>()?;
    let inside = earlier.iter().zip(signs).all(|(g, s)| g.dot_int(&projected) * i64::from(s.as_i8()) > 0);
    inside.then(|| reduce(projected))
}

/// A minimal linear dependency `Σ λ_i a_i + a_k = 0` among the normals,
/// stored through the indices `i < k` and the signs of their `λ_i`.
struct Circuit {
    terms: Vec<(usize, i8)>,
}

impl Circuit {
    /// The sign forced on `a_k · x` by the earlier signs, if the earlier
    /// terms all agree.
    fn forced(&self, signs: &[Sign]) -> Option<Sign> {
        let mut agreed = None;
        for &(i, l) in &self.terms {
            let t = l * signs[i].as_i8();
            match agreed {
                None => agreed = Some(t),
                Some(a) if a != t => return None,
                _ => {}
            }
        }
        // Σ λ_i (a_i · x) = -(a_k · x)
        agreed.map(|t| if t > 0 { Sign::Negative } else { Sign::Positive })
    }
}

/// Coefficients `c` with `target = Σ c_j basis_j`, if `target` lies in the
/// span of the linearly independent `basis`.
fn express(basis: &[&[i8]], target: &[i8]) -> Option<Vec<Rational64>> {
    let r = basis.len();
    let mut rows: Vec<Vec<Rational64>> = (0..target.len())
        .map(|j| basis.iter().map(|b| b[j]).chain([target[j]]).map(|x| Rational64::from_integer(x.into())).collect())
        .collect();
    let mut pivots = Vec::with_capacity(r);
    let mut top = 0;
    for col in 0..r {
        let p = (top..rows.len()).find(|&i| !rows[i][col].is_zero())?;
        rows.swap(top, p);
        let lead = rows[top][col];
        rows[top].iter_mut().for_each(|x| *x /= lead);
        let pivot_row = rows[top].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != top && !row[col].is_zero() {
                let f = row[col];
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x -= p * f;
                }
            }
        }
        pivots.push(top);
        top += 1;
    }
    if rows[top..].iter().any(|row| !row[r].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&p| rows[p][r]).collect())
}

/// Limits above which the quadratic and cubic circuit searches are skipped.
const TRIPLE_LIMIT: usize = 200;
const QUADRUPLE_LIMIT: usize = 80;

/// Circuits of size three and four, grouped by their largest index.
fn small_circuits(hyperplanes: &[Hyperplane]) -> Vec<Vec<Circuit>> {
    let m = hyperplanes.len();
    let mut by_last: Vec<Vec<Circuit>> = (0..m).map(|_| Vec::new()).collect();
    if m > TRIPLE_LIMIT {
        return by_last;
    }
    let normal = |i: usize| hyperplanes[i].normal();
    let circuit = |others: &[usize], coefficients: Vec<Rational64>| -> Option<Circuit> {
        // a_k = Σ c_j a_j, so λ_j = -c_j
        let terms = others
            .iter()
            .zip(coefficients)
            .map(|(&i, c)| (!c.is_zero()).then(|| (i, if c.is_positive() { -1 } else { 1 })))
            .collect::<Option<Vec<_>>>()?;
        Some(Circuit { terms })
    };
    let mut dependent = std::collections::HashSet::new();
    for (k, circuits) in by_last.iter_mut().enumerate() {
        for j in 0..k {
            for i in 0..j {
                if let Some(c) = express(&[normal(i), normal(j)], normal(k)).and_then(|c| circuit(&[i, j], c)) {
                    dependent.insert([i, j, k]);
                    circuits.push(c);
                }
            }
        }
    }
    if m > QUADRUPLE_LIMIT {
        return by_last;
    }
    for (k, circuits) in by_last.iter_mut().enumerate() {
        for l in 0..k {
            for j in 0..l {
                for i in 0..j {
                    if dependent.contains(&[i, j, l]) {
                        continue;
                    }
                    if let Some(c) =
                        express(&[normal(i), normal(j), normal(l)], normal(k)).and_then(|c| circuit(&[i, j, l], c))
                    {
                        circuits.push(c);
                    }
                }
            }
        }
    }
    by_last
}

struct Partial {
    signs: Vec<Sign>,
    witness: Vec<i64>,
}

/// Children of a partial region when the `k`-th hyperplane is added.
fn extend(hyperplanes: &[Hyperplane], circuits: &[Circuit], k: usize, r: Partial, n: usize) -> Vec<Partial> {
    let (earlier, h) = (&hyperplanes[..k], &hyperplanes[k]);
    let child = |signs: &[Sign], side: Sign, witness: Vec<i64>| {
        let mut signs = signs.to_vec();
        signs.push(side);
        Partial { signs, witness }
    };
    let side = match h.dot_int(&r.witness).cmp(&0) {
        std::cmp::Ordering::Greater => Sign::Positive,
        std::cmp::Ordering::Less => Sign::Negative,
        std::cmp::Ordering::Equal => {
            if let (Some(neg), Some(pos)) =
                (push_off(earlier, &r.witness, h, Sign::Negative), push_off(earlier, &r.witness, h, Sign::Positive))
            {
                return vec![child(&r.signs, Sign::Negative, neg), child(&r.signs, Sign::Positive, pos)];
            }
            return [Sign::Negative, Sign::Positive]
                .into_iter()
                .filter_map(|s| {
                    let signs: Vec<Sign> = r.signs.iter().copied().chain([s]).collect();
                    let point = slack_program(&hyperplanes[..=k], &signs, n)?;
                    Some(Partial { signs, witness: integer_multiple(&point)? })
                })
                .collect();
        }
    };
    let flipped = side.negate();
    let mut children = Vec::with_capacity(2);
    let forced = circuits.iter().any(|c| c.forced(&r.signs) == Some(side));
    if !forced {
        let across = project(earlier, &r.signs, &r.witness, h).and_then(|q| push_off(earlier, &q, h, flipped));
        let witness = across.or_else(|| {
            let signs: Vec<Sign> = r.signs.iter().copied().chain([flipped]).collect();
            slack_program(&hyperplanes[..=k], &signs, n).and_then(|p| integer_multiple(&p))
        });
        if let Some(w) = witness {
            children.push(child(&r.signs, flipped, w));
        }
    }
    children.push(child(&r.signs, side, r.witness));
    children
}

/// All regions of a nonempty arrangement, sorted by sign vector (with
/// `Negative < Positive`).
pub fn enumerate_regions(a: &Arrangement) -> Result<Vec<Region>> {
    let hyperplanes = a.hyperplanes();
    if hyperplanes.is_empty() {
        return Err(Error::EmptyArrangement);
    }
    let n = a.dimension();
    let circuits = small_circuits(hyperplanes);
    let mut partial = vec![Partial { signs: Vec::new(), witness: vec![0; n] }];
    for (k, circuits) in circuits.iter().enumerate() {
        partial = partial.into_par_iter().flat_map_iter(|r| extend(hyperplanes, circuits, k, r, n)).collect();
    }
    let mut regions: Vec<Region> = partial
        .into_par_iter()
        .map(|r| {
            let witness = slack_program(hyperplanes, &r.signs, n).expect("region was realized");
            Region { signs: r.signs, witness }
        })
        .collect();
    regions.sort_by(|x, y| x.signs.cmp(&y.signs));
    Ok(regions)
}
