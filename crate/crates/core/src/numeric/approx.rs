//! Finite-precision projection of `K`: an exact representative together with
//! the valuation up to which it is asserted.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::pifield::{PiField, PiFieldElem};
use super::ring::RingElem;
use super::valuation::{ceil_q64, q64, vp_int, Valuation, Q64};
use crate::error::{Error, Result};

/// Element of `K` known modulo the ideal `{v ≥ known_mod}`.
///
/// The representative is kept reduced: every coordinate is an integer over a
/// pure power of `p`, taken modulo the power of `p` that the precision
/// allows. An infinite `known_mod` means the value is exact.
#[derive(Clone, PartialEq, Eq)]
pub struct PiAdicApprox {
    value: PiFieldElem,
    known_mod: Valuation,
}

pub(crate) fn modinv(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

fn p_power(p: u64, k: usize) -> BigInt {
    thread_local! {
        static CACHE: std::cell::RefCell<std::collections::HashMap<(u64, usize), BigInt>> =
            std::cell::RefCell::new(std::collections::HashMap::new());
    }
    CACHE.with(|c| {
        c.borrow_mut().entry((p, k)).or_insert_with(|| num_traits::pow(BigInt::from(p), k)).clone()
    })
}

/// Reduce `x` modulo `{v ≥ m}`, returning the canonical representative.
pub fn reduce_mod(x: &PiFieldElem, m: Q64) -> PiFieldElem {
    let p = x.p();
    if x.is_zero() {
        return x.clone();
    }
    let e = p as i64 - 1;
    let den = x.denominator();
    let t = vp_int(den, p).unwrap_or(0);
    let pt = p_power(p, t as usize);
    let unit = den / &pt;
    let top = x
        .numerators()
        .iter()
        .enumerate()
        .map(|(i, _)| ceil_q64(m - q64(i as i64, e)) + t)
        .max()
        .unwrap_or(0);
    if top <= 0 {
        return x.field().zero();
    }
    let big_mod = p_power(p, top as usize);
    let inv = if unit.is_one() {
        BigInt::one()
    } else {
        modinv(&unit, &big_mod).expect("unit part of denominator is prime to p")
    };
    let num = x
        .numerators()
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let k = ceil_q64(m - q64(i as i64, e)) + t;
            if k <= 0 || n.is_zero() {
                return BigInt::zero();
            }
            let md = p_power(p, k as usize);
            (n * &inv).mod_floor(&md)
        })
        .collect();
    PiFieldElem::from_parts(p, num, pt)
}

impl PiAdicApprox {
    pub fn new(value: PiFieldElem, known_mod: Valuation) -> Self {
        let value = match known_mod {
            Valuation::Finite(m) => reduce_mod(&value, m),
            Valuation::Infinity => value,
        };
        PiAdicApprox { value, known_mod }
    }

    pub fn with_precision(value: PiFieldElem, m: Q64) -> Self {
        Self::new(value, Valuation::Finite(m))
    }

    pub fn exact(value: PiFieldElem) -> Self {
        PiAdicApprox { value, known_mod: Valuation::Infinity }
    }

    pub fn zero(field: PiField, m: Valuation) -> Self {
        PiAdicApprox { value: field.zero(), known_mod: m }
    }

    pub fn value(&self) -> &PiFieldElem {
        &self.value
    }

    pub fn known_mod(&self) -> Valuation {
        self.known_mod
    }

    pub fn p(&self) -> u64 {
        self.value.p()
    }

    pub fn field(&self) -> PiField {
        self.value.field()
    }

    /// True when the approximation is compatible with zero.
    pub fn is_zero_mod(&self) -> bool {
        self.value.valuation() >= self.known_mod
    }

    /// `min(v(value), known_mod)`: a valid lower bound for the valuation of
    /// every element this approximation stands for.
    pub fn valuation_lower_bound(&self) -> Valuation {
        self.value.valuation().min(self.known_mod)
    }

    /// The exact valuation when it is determined by the known digits.
    pub fn certified_valuation(&self) -> Option<Valuation> {
        let v = self.value.valuation();
        if v < self.known_mod {
            Some(v)
        } else if self.known_mod.is_infinite() {
            Some(Valuation::Infinity)
        } else {
            None
        }
    }

    /// Lower the asserted precision to `m` (never raises it).
    pub fn truncate(&self, m: Valuation) -> Self {
        Self::new(self.value.clone(), self.known_mod.min(m))
    }

    /// Lower bound for `v(self − other)` given both precisions.
    pub fn discrepancy(&self, other: &PiAdicApprox) -> Valuation {
        let d = (&self.value - &other.value).valuation();
        d.min(self.known_mod).min(other.known_mod)
    }

    /// Lower bound for `v(self − x)` against an exact element.
    pub fn discrepancy_exact(&self, x: &PiFieldElem) -> Valuation {
        (&self.value - x).valuation().min(self.known_mod)
    }

    pub fn add(&self, o: &PiAdicApprox) -> PiAdicApprox {
        let known = self.known_mod.min(o.known_mod);
        if o.value.is_zero() && known == self.known_mod {
            return self.clone();
        }
        if self.value.is_zero() && known == o.known_mod {
            return o.clone();
        }
        Self::new(&self.value + &o.value, known)
    }

    pub fn sub(&self, o: &PiAdicApprox) -> PiAdicApprox {
        Self::new(&self.value - &o.value, self.known_mod.min(o.known_mod))
    }

    pub fn neg(&self) -> PiAdicApprox {
        PiAdicApprox { value: -&self.value, known_mod: self.known_mod }
    }

    pub fn mul(&self, o: &PiAdicApprox) -> PiAdicApprox {
        let va = self.valuation_lower_bound();
        let vb = o.valuation_lower_bound();
        let known = (self.known_mod + vb).min(o.known_mod + va);
        if self.value.is_zero() || o.value.is_zero() {
            return PiAdicApprox { value: self.field().zero(), known_mod: known };
        }
        Self::new(&self.value * &o.value, known)
    }

    pub fn mul_exact(&self, x: &PiFieldElem) -> PiAdicApprox {
        let known = self.known_mod + x.valuation();
        Self::new(&self.value * x, known)
    }

    pub fn scale_int(&self, n: &BigInt) -> PiAdicApprox {
        let known = match vp_int(n, self.p()) {
            Some(v) => self.known_mod + Q64::from_integer(v),
            None => Valuation::Infinity,
        };
        Self::new(self.value.scale_int(n), known)
    }

    /// Inverse; requires the valuation to be certified.
    pub fn inv(&self) -> Result<PiAdicApprox> {
        let v = match self.certified_valuation() {
            Some(Valuation::Finite(v)) => v,
            Some(Valuation::Infinity) => return Err(Error::DivisionByZero),
            None => {
                return Err(Error::InsufficientPrecision {
                    achieved: self.known_mod,
                    requested: self.value.valuation(),
                })
            }
        };
        let known = self.known_mod - v - v;
        Ok(Self::new(self.value.inv()?, known))
    }

    pub fn div(&self, o: &PiAdicApprox) -> Result<PiAdicApprox> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, mut k: u64) -> PiAdicApprox {
        let mut base = self.clone();
        let mut acc = PiAdicApprox::exact(self.field().one());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl RingElem for PiAdicApprox {
    fn zero_like(&self) -> Self {
        PiAdicApprox::exact(self.field().zero())
    }
    fn one_like(&self) -> Self {
        PiAdicApprox::exact(self.field().one())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.known_mod.is_infinite()
    }
    fn add(&self, other: &Self) -> Self {
        PiAdicApprox::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        PiAdicApprox::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        PiAdicApprox::mul(self, other)
    }
    fn neg(&self) -> Self {
        PiAdicApprox::neg(self)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        PiAdicApprox::exact(self.field().from_int(n))
    }
}

impl fmt::Debug for PiAdicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(v ≥ {})", self.value, self.known_mod)
    }
}

/// Teichmüller lift of `a mod p` modulo `p^m`.
pub fn teichmuller_lift(a: u64, p: u64, m: u32) -> BigInt {
    let pb = BigInt::from(p);
    let modulus = num_traits::pow(pb.clone(), m as usize);
    let a = BigInt::from(a % p);
    if a.is_zero() || m == 0 {
        return BigInt::zero();
    }
    let e = num_traits::pow(pb, m.saturating_sub(1) as usize);
    a.modpow(&e, &modulus)
}

/// The p-th root of unity `ζ ≡ 1 + π (mod π²)` in `K`, to precision `m`.
///
/// Written as `ζ = 1 + πu`; Newton's method solves
/// `((1 + πu)^p − 1)/(pπ) = 0`, whose derivative `(1 + πu)^(p−1)` is a unit.
pub fn hensel_zeta_p(field: PiField, m: Q64) -> Result<PiAdicApprox> {
    let p = field.p();
    if p == 2 {
        return Ok(PiAdicApprox::exact(field.from_int(-1)));
    }
    if m <= Q64::zero() {
        return Err(Error::InsufficientPrecision {
            achieved: Valuation::Finite(m),
            requested: Valuation::int(1),
        });
    }
    let pi = field.pi();
    let one = field.one();
    let work = m + Q64::one();
    let p_pi = pi.scale_i64(p as i64);
    let mut u = field.one();
    for _ in 0..64 {
        let z = &one + &(&pi * &u);
        let zp1 = z.pow(p - 1);
        let zp = &zp1 * &z;
        let h = (&zp - &one).div(&p_pi)?;
        if h.valuation() >= Valuation::Finite(work) {
            let zeta = &one + &(&pi * &u);
            return Ok(PiAdicApprox::with_precision(zeta, m));
        }
        let step = h.div(&zp1)?;
        u = reduce_mod(&(&u - &step), work);
    }
    Err(Error::NoConvergence)
}

/// `1 + π` and higher roots-of-unity data used when embedding `Z[ζ_p]`.
#[derive(Debug, Clone)]
pub struct ZetaPowers {
    p: u64,
    precision: Q64,
    powers: Vec<PiAdicApprox>,
}

impl ZetaPowers {
    pub fn new(field: PiField, m: Q64) -> Result<Self> {
        let zeta = hensel_zeta_p(field, m)?;
        let n = field.p() as usize;
        let mut powers = Vec::with_capacity(n);
        powers.push(PiAdicApprox::exact(field.one()));
        for i in 1..n {
            let next = powers[i - 1].mul(&zeta);
            powers.push(next);
        }
        Ok(ZetaPowers { p: field.p(), precision: m, powers })
    }

    pub fn precision(&self) -> Q64 {
        self.precision
    }

    /// `ζ^k` for any integer `k`.
    pub fn power(&self, k: i64) -> &PiAdicApprox {
        &self.powers[k.rem_euclid(self.p as i64) as usize]
    }

    pub fn zeta(&self) -> &PiAdicApprox {
        self.power(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn k(p: u64) -> PiField {
        PiField::new(p).unwrap()
    }

    #[test]
    fn reduction_drops_high_valuation_terms() {
        let f = k(3);
        let x = &f.from_int(1) + &f.from_int(9);
        let r = reduce_mod(&x, Q64::from_integer(2));
        assert_eq!(r, f.one());
        let y = PiAdicApprox::with_precision(f.pi_pow(5), Q64::from_integer(2));
        assert!(y.is_zero_mod());
    }

    #[test]
    fn reduction_handles_unit_denominators() {
        let f = k(5);
        let half = f.from_ratio(1, 2);
        let r = reduce_mod(&half, Q64::from_integer(3));
        assert_eq!(r, f.from_int(63));
        assert!((&r.scale_i64(2) - &f.one()).valuation() >= Valuation::int(3));
    }

    #[test]
    fn precision_propagates_through_products() {
        let f = k(3);
        let a = PiAdicApprox::with_precision(f.pi(), Q64::from_integer(3));
        let b = PiAdicApprox::with_precision(f.from_int(3), Q64::from_integer(4));
        let c = a.mul(&b);
        assert_eq!(c.known_mod(), Valuation::int(4));
    }

    #[test]
    fn zeta_satisfies_its_equation() {
        for p in [3u64, 5, 7, 11] {
            let f = k(p);
            let m = Q64::from_integer(12);
            let z = hensel_zeta_p(f, m).unwrap();
            let zp = z.pow(p);
            assert!(zp.discrepancy_exact(&f.one()) >= Valuation::Finite(m), "p = {}", p);
            let lead = z.discrepancy_exact(&(&f.one() + &f.pi()));
            assert!(lead >= Valuation::Finite(q64(2, p as i64 - 1)));
        }
    }

    #[test]
    fn zeta_low_precision_example() {
        let f = k(3);
        let z = hensel_zeta_p(f, Q64::one()).unwrap();
        assert_eq!(z.value(), &(&f.one() + &f.pi()));
    }

    #[test]
    fn zeta_for_two() {
        let f = k(2);
        let z = hensel_zeta_p(f, Q64::from_integer(5)).unwrap();
        assert_eq!(z.value(), &f.from_int(-1));
        assert!(z.known_mod().is_infinite());
    }

    #[test]
    fn teichmuller_is_root_of_unity() {
        let p = 7u64;
        let m = 10;
        let md = num_traits::pow(BigInt::from(p), m as usize);
        for a in 1..p {
            let w = teichmuller_lift(a, p, m);
            assert_eq!(w.modpow(&BigInt::from(p - 1), &md), BigInt::one());
            assert_eq!((&w - BigInt::from(a)).mod_floor(&BigInt::from(p)), BigInt::zero());
        }
    }

    #[test]
    fn inverse_precision() {
        let f = k(5);
        let a = PiAdicApprox::with_precision(&f.pi() + &f.from_int(5), Q64::from_integer(4));
        let b = a.inv().unwrap();
        let prod = a.mul(&b);
        assert!(prod.discrepancy_exact(&f.one()) >= prod.known_mod());
        let r = BigRational::from_integer(BigInt::from(1));
        assert_eq!(f.from_rational(&r), f.one());
    }
}
