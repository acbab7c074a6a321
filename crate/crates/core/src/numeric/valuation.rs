use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, ToPrimitive, Zero};

/// Small exact rationals used for valuations, slopes and precisions.
pub type Q64 = Ratio<i64>;

pub fn q64(n: i64, d: i64) -> Q64 {
    Q64::new(n, d)
}

/// A p-adic valuation, normalised so that `v(p) = 1`, or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(Q64),
    Infinity,
}

impl Valuation {
    pub fn int(n: i64) -> Self {
        Valuation::Finite(Q64::from_integer(n))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn finite(&self) -> Option<Q64> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::Infinity => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Valuation::Finite(v) => *v.numer() as f64 / *v.denom() as f64,
            Valuation::Infinity => f64::INFINITY,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl From<Q64> for Valuation {
    fn from(v: Q64) -> Self {
        Valuation::Finite(v)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
            (Valuation::Infinity, _) => Ordering::Greater,
            (_, Valuation::Infinity) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl Add<Q64> for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Q64) -> Valuation {
        match self {
            Valuation::Finite(a) => Valuation::Finite(a + rhs),
            Valuation::Infinity => Valuation::Infinity,
        }
    }
}

impl Sub<Q64> for Valuation {
    type Output = Valuation;
    fn sub(self, rhs: Q64) -> Valuation {
        self + (-rhs)
    }
}

impl Neg for Valuation {
    type Output = Valuation;
    /// Only meaningful for finite values; `-∞` is not representable.
    fn neg(self) -> Valuation {
        match self {
            Valuation::Finite(a) => Valuation::Finite(-a),
            Valuation::Infinity => panic!("negating an infinite valuation"),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) if v.is_integer() => write!(f, "{}", v.numer()),
            Valuation::Finite(v) => write!(f, "{}/{}", v.numer(), v.denom()),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// `v_p(n)` for a nonzero integer.
pub fn vp_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut m = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return Some(e);
        }
        m = q;
        e += 1;
    }
}

pub fn vp_u64(mut n: u64, p: u64) -> Option<i64> {
    if n == 0 {
        return None;
    }
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    Some(e)
}

pub fn vp_rational(r: &BigRational, p: u64) -> Option<i64> {
    let n = vp_int(r.numer(), p)?;
    let d = vp_int(r.denom(), p).unwrap_or(0);
    Some(n - d)
}

/// `v_p(n!)` by Legendre's formula.
pub fn vp_factorial(n: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut pk = p;
    while pk <= n {
        total += n / pk;
        match pk.checked_mul(p) {
            Some(next) => pk = next,
            None => break,
        }
    }
    total
}

/// `⌈log_p(n)⌉` for `n ≥ 1`.
pub fn ceil_log(n: u64, p: u64) -> u64 {
    let mut k = 0;
    let mut pk: u128 = 1;
    while pk < n as u128 {
        pk *= p as u128;
        k += 1;
    }
    k
}

/// Bracket `[n/(p−1) − ⌈log_p(n+1)⌉, n/(p−1)]` that contains `v_p(n!)`.
pub fn factorial_valuation_bracket(n: u64, p: u64) -> (Q64, Q64) {
    let top = Q64::new(n as i64, p as i64 - 1);
    (top - Q64::from_integer(ceil_log(n + 1, p) as i64), top)
}

/// Smallest integer `k` with `k >= x`.
pub fn ceil_q64(x: Q64) -> i64 {
    x.ceil().to_integer()
}

pub fn floor_q64(x: Q64) -> i64 {
    x.floor().to_integer()
}

/// Decimal rendering for reports, exact rationals as `a/b`.
pub fn q64_to_string(x: Q64) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q64_to_f64(x: Q64) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_puts_infinity_last() {
        let a = Valuation::Finite(q64(1, 2));
        assert!(a < Valuation::Infinity);
        assert_eq!(a.min(Valuation::Infinity), a);
        assert_eq!(Valuation::int(3).max(a), Valuation::int(3));
    }

    #[test]
    fn legendre() {
        assert_eq!(vp_factorial(10, 3), 4);
        assert_eq!(vp_factorial(2, 3), 0);
        assert_eq!(vp_factorial(25, 5), 6);
    }

    #[test]
    fn bracket_edges() {
        assert_eq!(ceil_log(1, 3), 0);
        assert_eq!(ceil_log(9, 3), 2);
        assert_eq!(ceil_log(10, 3), 3);
        // v_3(8!) = 2 against [4 − 2, 4].
        assert_eq!(factorial_valuation_bracket(8, 3), (q64(2, 1), q64(4, 1)));
    }

    #[test]
    fn rational_valuation() {
        let r = BigRational::new(BigInt::from(18), BigInt::from(5));
        assert_eq!(vp_rational(&r, 3), Some(2));
        assert_eq!(vp_rational(&r, 5), Some(-1));
        assert_eq!(vp_rational(&BigRational::zero(), 5), None);
    }
}
