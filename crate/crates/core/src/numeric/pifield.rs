//! The totally ramified extension `K = Q(π)` with `π^(p-1) = -p`.
//!
//! Elements are stored exactly, as rational coordinates in the basis
//! `1, π, …, π^(p-2)` over a common positive denominator. Because the basis
//! vectors have pairwise distinct valuations modulo 1, the valuation of an
//! element is the minimum over its coordinates of `v_p(a_i) + i/(p-1)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ring::RingElem;
use super::valuation::{q64, vp_int, Valuation, Q64};
use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The field `K` for a fixed prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PiField {
    p: u64,
}

impl PiField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PiField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Degree `p - 1` of `K` over `Q`.
    pub fn degree(&self) -> usize {
        (self.p - 1) as usize
    }

    /// `v(π) = 1/(p-1)`.
    pub fn pi_valuation_unit(&self) -> Q64 {
        q64(1, self.p as i64 - 1)
    }

    pub fn zero(&self) -> PiFieldElem {
        PiFieldElem {
            p: self.p,
            num: vec![BigInt::zero(); self.degree()],
            den: BigInt::one(),
        }
    }

    pub fn one(&self) -> PiFieldElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> PiFieldElem {
        self.from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(&self, n: BigInt) -> PiFieldElem {
        let mut e = self.zero();
        e.num[0] = n;
        e
    }

    pub fn from_rational(&self, r: &BigRational) -> PiFieldElem {
        let mut e = self.zero();
        e.num[0] = r.numer().clone();
        e.den = r.denom().clone();
        e.normalize();
        e
    }

    pub fn from_ratio(&self, n: i64, d: i64) -> PiFieldElem {
        self.from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// Element with the given rational coordinates in the basis `π^i`.
    pub fn from_coords(&self, coords: &[BigRational]) -> Result<PiFieldElem> {
        if coords.len() != self.degree() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coordinates, got {}",
                self.degree(),
                coords.len()
            )));
        }
        let mut den = BigInt::one();
        for c in coords {
            den = den.lcm(c.denom());
        }
        let num = coords.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let mut e = PiFieldElem { p: self.p, num, den };
        e.normalize();
        Ok(e)
    }

    pub fn pi(&self) -> PiFieldElem {
        self.pi_pow(1)
    }

    /// `π^k` for any integer `k`.
    pub fn pi_pow(&self, k: i64) -> PiFieldElem {
        self.one().mul_pi_pow(k)
    }

    /// `r · π^k` for a rational `r`.
    pub fn monomial(&self, r: &BigRational, k: i64) -> PiFieldElem {
        self.from_rational(r).mul_pi_pow(k)
    }
}

/// Exact element of `K`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PiFieldElem {
    p: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PiFieldElem {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> PiField {
        PiField { p: self.p }
    }

    fn deg(&self) -> usize {
        self.num.len()
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for n in &mut self.num {
                *n = -&*n;
            }
        }
        if self.num.iter().all(|n| n.is_zero()) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for n in &self.num {
            if g.is_one() {
                break;
            }
            if !n.is_zero() {
                g = g.gcd(n);
            }
        }
        if !g.is_one() {
            self.den = &self.den / &g;
            for n in &mut self.num {
                *n = &*n / &g;
            }
        }
    }

    /// Rational coordinates in the basis `1, π, …, π^(p-2)`.
    pub fn coords(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect()
    }

    pub fn coord(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }

    pub(crate) fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub(crate) fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub(crate) fn from_parts(p: u64, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut e = PiFieldElem { p, num, den };
        e.normalize();
        e
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|n| n.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|n| n.is_zero())
    }

    /// True when the element lies in `Q`.
    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(|n| n.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coord(0))
    }

    /// π-adic valuation normalised by `v(p) = 1`.
    pub fn valuation(&self) -> Valuation {
        let e = self.p as i64 - 1;
        let dv = vp_int(&self.den, self.p).unwrap_or(0);
        let mut best: Option<Q64> = None;
        for (i, n) in self.num.iter().enumerate() {
            if let Some(v) = vp_int(n, self.p) {
                let cand = q64((v - dv) * e + i as i64, e);
                best = Some(match best {
                    Some(b) if b <= cand => b,
                    _ => cand,
                });
            }
        }
        best.map(Valuation::Finite).unwrap_or(Valuation::Infinity)
    }

    /// Multiplication by `π^k`.
    pub fn mul_pi_pow(&self, k: i64) -> PiFieldElem {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        let e = self.deg() as i64;
        // π^k = π^r · (-p)^s with k = s(p-1) + r, 0 <= r < p-1.
        let s = k.div_euclid(e);
        let r = k.rem_euclid(e) as usize;
        let p = BigInt::from(self.p);
        let mut num = vec![BigInt::zero(); self.deg()];
        for (i, c) in self.num.iter().enumerate() {
            let j = i + r;
            if j < self.deg() {
                num[j] += c;
            } else {
                num[j - self.deg()] -= c * &p;
            }
        }
        let mut den = self.den.clone();
        let factor = num_traits::pow(p, s.unsigned_abs() as usize);
        let negate = s.rem_euclid(2) == 1;
        if s >= 0 {
            for n in &mut num {
                *n *= &factor;
            }
        } else {
            den *= &factor;
        }
        if negate {
            for n in &mut num {
                *n = -&*n;
            }
        }
        PiFieldElem::from_parts(self.p, num, den)
    }

    pub fn scale_int(&self, n: &BigInt) -> PiFieldElem {
        let num = self.num.iter().map(|c| c * n).collect();
        PiFieldElem::from_parts(self.p, num, self.den.clone())
    }

    pub fn scale_i64(&self, n: i64) -> PiFieldElem {
        self.scale_int(&BigInt::from(n))
    }

    pub fn scale_rational(&self, r: &BigRational) -> PiFieldElem {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        PiFieldElem::from_parts(self.p, num, &self.den * r.denom())
    }

    pub fn div_int(&self, n: &BigInt) -> Result<PiFieldElem> {
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(PiFieldElem::from_parts(self.p, self.num.clone(), &self.den * n))
    }

    fn check(&self, other: &PiFieldElem) {
        assert_eq!(self.p, other.p, "mixing elements of Q(π) for different primes");
    }

    fn mul_exact(&self, other: &PiFieldElem) -> PiFieldElem {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return self.field().zero();
        }
        let full = mul_coords(self.p, &self.num, &other.num);
        PiFieldElem::from_parts(self.p, full, &self.den * &other.den)
    }

    fn add_exact(&self, other: &PiFieldElem, sign: i8) -> PiFieldElem {
        self.check(other);
        if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if sign > 0 { a + b } else { a - b })
                .collect();
            return PiFieldElem::from_parts(self.p, num, self.den.clone());
        }
        let l = self.den.lcm(&other.den);
        let fa = &l / &self.den;
        let fb = &l / &other.den;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| {
                if sign > 0 {
                    a * &fa + b * &fb
                } else {
                    a * &fa - b * &fb
                }
            })
            .collect();
        PiFieldElem::from_parts(self.p, num, l)
    }

    /// Multiplicative inverse, by solving the linear system `x·y = 1` over `Q`.
    pub fn inv(&self) -> Result<PiFieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            let r = self.coord(0);
            return Ok(self.field().from_rational(&r.recip()));
        }
        let n = self.deg();
        // Column j of the matrix is x·π^j.
        let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n + 1]; n];
        for j in 0..n {
            let col = self.mul_pi_pow(j as i64).coords();
            for i in 0..n {
                m[i][j] = col[i].clone();
            }
        }
        m[0][n] = BigRational::one();
        let sol = solve_rational(m).ok_or(Error::DivisionByZero)?;
        self.field().from_coords(&sol)
    }

    pub fn div(&self, other: &PiFieldElem) -> Result<PiFieldElem> {
        Ok(self.mul_exact(&other.inv()?))
    }

    pub fn pow(&self, mut k: u64) -> PiFieldElem {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_exact(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_exact(&base);
            }
        }
        acc
    }

    pub fn powi(&self, k: i64) -> Result<PiFieldElem> {
        if k >= 0 {
            Ok(self.pow(k as u64))
        } else {
            Ok(self.inv()?.pow(k.unsigned_abs()))
        }
    }
}

/// Gauss–Jordan elimination on an augmented `n × (n+1)` rational system.
/// Product of two integer coordinate vectors in `Z[π]`, `π^{p−1} = −p`.
pub(crate) fn mul_coords(p: u64, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len();
    let mut full = vec![BigInt::zero(); 2 * n - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                full[i + j] += x * y;
            }
        }
    }
    let p = BigInt::from(p);
    for k in (n..2 * n - 1).rev() {
        let c = std::mem::take(&mut full[k]);
        if !c.is_zero() {
            full[k - n] -= c * &p;
        }
    }
    full.truncate(n);
    full
}

pub(crate) fn solve_rational(mut m: Vec<Vec<BigRational>>) -> Option<Vec<BigRational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for c in col..=n {
            m[col][c] = &m[col][c] * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let t = &m[col][c] * &f;
                    m[r][c] = &m[r][c] - t;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

impl<'a> Add<&'a PiFieldElem> for &'a PiFieldElem {
    type Output = PiFieldElem;
    fn add(self, rhs: &PiFieldElem) -> PiFieldElem {
        self.add_exact(rhs, 1)
    }
}

impl<'a> Sub<&'a PiFieldElem> for &'a PiFieldElem {
    type Output = PiFieldElem;
    fn sub(self, rhs: &PiFieldElem) -> PiFieldElem {
        self.add_exact(rhs, -1)
    }
}

impl<'a> Mul<&'a PiFieldElem> for &'a PiFieldElem {
    type Output = PiFieldElem;
    fn mul(self, rhs: &PiFieldElem) -> PiFieldElem {
        self.mul_exact(rhs)
    }
}

impl Neg for &PiFieldElem {
    type Output = PiFieldElem;
    fn neg(self) -> PiFieldElem {
        PiFieldElem {
            p: self.p,
            num: self.num.iter().map(|n| -n).collect(),
            den: self.den.clone(),
        }
    }
}

impl RingElem for PiFieldElem {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn is_zero(&self) -> bool {
        PiFieldElem::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64_like(&self, n: i64) -> Self {
        self.field().from_int(n)
    }
}

impl fmt::Debug for PiFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PiFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = if c.is_integer() {
                c.numer().to_string()
            } else {
                format!("({}/{})", c.numer(), c.denom())
            };
            match i {
                0 => write!(f, "{}", cs)?,
                1 => write!(f, "{}·π", cs)?,
                _ => write!(f, "{}·π^{}", cs, i)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(p: u64) -> PiField {
        PiField::new(p).unwrap()
    }

    #[test]
    fn rejects_composite() {
        assert_eq!(PiField::new(9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn pi_relation_holds() {
        for p in [2u64, 3, 5, 7, 11] {
            let f = k(p);
            let lhs = f.pi().pow(p - 1);
            assert_eq!(lhs, f.from_int(-(p as i64)), "p = {}", p);
        }
    }

    #[test]
    fn p_equals_two_degenerates() {
        let f = k(2);
        assert_eq!(f.pi(), f.from_int(-2));
        assert_eq!(f.pi().valuation(), Valuation::int(1));
    }

    #[test]
    fn valuations_from_examples() {
        let f = k(3);
        assert_eq!(f.pi().valuation(), Valuation::Finite(q64(1, 2)));
        assert_eq!(f.from_int(3).valuation(), Valuation::int(1));
        let x = f.pi().pow(3).div_int(&BigInt::from(3)).unwrap();
        assert_eq!(x.valuation(), Valuation::Finite(q64(1, 2)));
        assert_eq!(f.zero().valuation(), Valuation::Infinity);
    }

    #[test]
    fn negative_pi_powers_invert() {
        for p in [2u64, 3, 5, 7] {
            let f = k(p);
            for e in -7..7 {
                let a = f.pi_pow(e);
                let b = f.pi_pow(-e);
                assert!((&a * &b).is_one(), "p={} e={}", p, e);
                assert_eq!(a.valuation(), Valuation::Finite(q64(e, p as i64 - 1)));
            }
        }
    }

    #[test]
    fn inverse_of_general_element() {
        let f = k(5);
        let x = &(&f.from_int(3) + &f.pi()) + &f.pi_pow(3).scale_i64(7);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert_eq!(f.zero().inv(), Err(Error::DivisionByZero));
    }
}
