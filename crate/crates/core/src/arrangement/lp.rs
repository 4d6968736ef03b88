//! Exact simplex for the strict feasibility programs of region enumeration.
//!
//! The system `v_i · x > 0` is decided through the slack program
//!
//! ```text
//! max δ  s.t.  v_i · x >= δ,  -1 <= x_j <= 1
//! ```
//!
//! solved in its dual form: the `ℓ1` distance from the origin to the convex
//! hull of the `v_i`,
//!
//! ```text
//! min Σ (u_j + w_j)  s.t.  Σ λ_i v_i + u - w = 0,  Σ λ_i = 1,  λ, u, w >= 0.
//! ```
//!
//! Both optima equal `δ*`, and the optimal `x` is read off the reduced costs
//! of the `u` columns. The dual has only `n + 1` rows. Pivoting follows
//! Bland's rule.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::One;

use crate::Rational;

pub(crate) struct Margin {
    pub value: Rational,
    pub point: Vec<Rational>,
}

/// Exact field operations; `None` reports overflow.
trait Scalar: Clone + Ord + Sized {
    fn int(v: i64) -> Self;
    fn signum(&self) -> Ordering;
    fn add(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn div(&self, other: &Self) -> Option<Self>;
    fn to_rational(&self) -> Rational;

    fn is_zero(&self) -> bool {
        self.signum() == Ordering::Equal
    }
}

impl Scalar for Rational {
    fn int(v: i64) -> Self {
        Rational::from_integer(v.into())
    }
    fn signum(&self) -> Ordering {
        self.numer().sign().cmp(&num_bigint::Sign::NoSign)
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn div(&self, other: &Self) -> Option<Self> {
        Some(self / other)
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
}

/// Reduced fraction of `i64`s with positive denominator and checked
/// arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct SmallRational {
    num: i64,
    den: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl SmallRational {
    fn new(num: i64, den: i64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        let g = gcd(num, den);
        let (mut num, mut den) = if g > 1 { (num / g, den / g) } else { (num, den) };
        if den < 0 {
            num = num.checked_neg()?;
            den = den.checked_neg()?;
        }
        Some(Self { num, den })
    }
}

impl PartialOrd for SmallRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SmallRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.num.checked_mul(other.den), other.num.checked_mul(self.den)) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => self.to_rational().cmp(&other.to_rational()),
        }
    }
}

impl Scalar for SmallRational {
    fn int(v: i64) -> Self {
        Self { num: v, den: 1 }
    }
    fn signum(&self) -> Ordering {
        self.num.cmp(&0)
    }
    fn add(&self, other: &Self) -> Option<Self> {
        if self.den == other.den {
            return Self::new(self.num.checked_add(other.num)?, self.den);
        }
        let g = gcd(self.den, other.den);
        let (a, b) = (self.den / g, other.den / g);
        let num = self.num.checked_mul(b)?.checked_add(other.num.checked_mul(a)?)?;
        Self::new(num, self.den.checked_mul(b)?)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.add(&Self { num: other.num.checked_neg()?, den: other.den })
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        let g1 = gcd(self.num, other.den).max(1);
        let g2 = gcd(other.num, self.den).max(1);
        let num = (self.num / g1).checked_mul(other.num / g2)?;
        let den = (self.den / g2).checked_mul(other.den / g1)?;
        Some(Self { num, den })
    }
    fn div(&self, other: &Self) -> Option<Self> {
        if other.num == 0 {
            return None;
        }
        let inv = Self::new(other.den, other.num)?;
        self.mul(&inv)
    }
    fn to_rational(&self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

struct Tableau<T> {
    /// `dimension + 1` rows of `columns + 1` entries, rhs last
    rows: Vec<Vec<T>>,
    /// reduced costs, rhs entry holds minus the objective
    costs: Vec<T>,
    basis: Vec<usize>,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) -> Option<()> {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.div(&p)?;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let eliminate = |row: &mut Vec<T>| -> Option<()> {
            if row[c].is_zero() {
                return Some(());
            }
            let factor = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v = v.sub(&factor.mul(p)?)?;
                }
            }
            Some(())
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row)?;
            }
        }
        eliminate(&mut self.costs)?;
        self.rows[r] = pivot_row;
        self.basis[r] = c;
        Some(())
    }

    fn optimize(&mut self) -> Option<()> {
        let width = self.costs.len() - 1;
        while let Some(c) = (0..width).find(|&j| self.costs[j].signum() == Ordering::Less) {
            let mut best: Option<(T, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].signum() != Ordering::Greater {
                    continue;
                }
                let ratio = row[width].div(&row[c])?;
                let better = match &best {
                    None => true,
                    Some((r, b)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*b]),
                };
                if better {
                    best = Some((ratio, i));
                }
            }
            // the objective is bounded below by zero
            let (_, r) = best.expect("bounded program");
            self.pivot(r, c)?;
        }
        Some(())
    }
}

fn solve<T: Scalar>(vectors: &[Vec<i64>], d: usize) -> Option<Margin> {
    let k = vectors.len();
    // columns: λ_0..λ_k, u_0..u_d, w_0..w_d, rhs
    let width = k + 2 * d;
    let mut rows: Vec<Vec<T>> = (0..=d).map(|_| vec![T::int(0); width + 1]).collect();
    for (i, v) in vectors.iter().enumerate() {
        for (r, &x) in v.iter().enumerate() {
            if x != 0 {
                rows[r][i] = T::int(x);
            }
        }
        rows[d][i] = T::int(1);
    }
    for r in 0..d {
        rows[r][k + r] = T::int(1);
        rows[r][k + d + r] = T::int(-1);
    }
    rows[d][width] = T::int(1);
    let mut costs = vec![T::int(0); width + 1];
    for c in &mut costs[k..width] {
        *c = T::int(1);
    }
    let mut t = Tableau { rows, costs, basis: vec![usize::MAX; d + 1] };

    // start from λ_0 = 1, with u or w absorbing each coordinate of v_0
    t.pivot(d, 0)?;
    for r in 0..d {
        let col = if t.rows[r][width].signum() == Ordering::Less { k + d + r } else { k + r };
        t.pivot(r, col)?;
    }
    t.optimize()?;

    let value = -t.costs[width].to_rational();
    // reduced cost of u_j is 1 - y_j and x = -y
    let point = (0..d).map(|j| t.costs[k + j].to_rational() - Rational::one()).collect();
    Some(Margin { value, point })
}

/// Maximum `δ` and a maximizing `x` of the slack program for the rows
/// `vectors`, all of length `dimension`. `vectors` must be nonempty.
pub(crate) fn max_margin(vectors: &[Vec<i64>], dimension: usize) -> Margin {
    debug_assert!(!vectors.is_empty());
    solve::<SmallRational>(vectors, dimension)
        .or_else(|| solve::<Rational>(vectors, dimension))
        .expect("big rationals do not overflow")
}
