//! Finite fields `F_{p^n}` as `F_p[t]/(f)` with a deterministic modulus.

use std::fmt;
use std::sync::Arc;

use super::pifield::is_prime;
use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq)]
struct FieldData {
    p: u64,
    n: usize,
    /// Monic modulus, ascending, length `n + 1`.
    modulus: Vec<u64>,
    /// `Tr(t^i)` for `i < n`.
    trace_basis: Vec<u64>,
}

/// The field `F_{p^n}`.
///
/// The modulus is the monic irreducible polynomial of degree `n` whose
/// coefficient vector `(c_0, …, c_{n−1})` has the smallest index
/// `Σ c_i p^i`; for `n = 1` that is `t` itself.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteField {
    data: Arc<FieldData>,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FFElem {
    p: u64,
    coeffs: Vec<u64>,
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// Remainder of `a` modulo the nonzero polynomial `b` over `F_p`.
fn poly_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    trim(&mut a);
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p);
    while a.len() > db {
        let da = a.len() - 1;
        let c = a[da] * lead_inv % p;
        if c != 0 {
            for (i, bi) in b.iter().enumerate() {
                let idx = da - db + i;
                a[idx] = (a[idx] + p - c * bi % p) % p;
            }
        }
        a.pop();
        trim(&mut a);
    }
    a
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_rem(out, m, p)
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    // No irreducible factor of degree ≤ n/2: gcd(t^{p^k} − t, f) = 1.
    let mut power = vec![0, 1];
    for _ in 1..=n / 2 {
        let mut acc = vec![1u64];
        let mut base = power.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, f, p);
            }
            base = poly_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        power = acc;
        let mut diff = power.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(f.to_vec(), diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

impl FiniteField {
    pub fn new(p: u64, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::DimensionMismatch("extension degree must be positive".into()));
        }
        let total = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        let mut modulus = None;
        let mut index: u128 = 0;
        while index < total {
            let mut f = Vec::with_capacity(n + 1);
            let mut k = index;
            for _ in 0..n {
                f.push((k % p as u128) as u64);
                k /= p as u128;
            }
            f.push(1);
            if is_irreducible(&f, p) {
                modulus = Some(f);
                break;
            }
            index += 1;
        }
        let modulus = modulus.expect("irreducible polynomials exist in every degree");
        let bare = FiniteField {
            data: Arc::new(FieldData { p, n, modulus: modulus.clone(), trace_basis: Vec::new() }),
        };
        let trace_basis = (0..n)
            .map(|i| {
                let mut c = vec![0u64; n];
                c[i] = 1;
                bare.trace_slow(&FFElem { p, coeffs: c })
            })
            .collect();
        Ok(FiniteField { data: Arc::new(FieldData { p, n, modulus, trace_basis }) })
    }

    pub fn p(&self) -> u64 {
        self.data.p
    }

    pub fn degree(&self) -> usize {
        self.data.n
    }

    pub fn order(&self) -> u128 {
        (self.data.p as u128).pow(self.data.n as u32)
    }

    /// Modulus coefficients, ascending, monic.
    pub fn modulus(&self) -> &[u64] {
        &self.data.modulus
    }

    pub fn zero(&self) -> FFElem {
        FFElem { p: self.p(), coeffs: vec![0; self.degree()] }
    }

    pub fn one(&self) -> FFElem {
        self.from_int(1)
    }

    pub fn from_int(&self, a: i64) -> FFElem {
        let mut e = self.zero();
        e.coeffs[0] = a.rem_euclid(self.p() as i64) as u64;
        e
    }

    /// The class of `t`.
    pub fn generator(&self) -> FFElem {
        if self.degree() == 1 {
            // t ≡ −c_0 in degree one.
            return self.from_int(-(self.data.modulus[0] as i64));
        }
        let mut e = self.zero();
        e.coeffs[1] = 1;
        e
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FFElem> {
        if coeffs.len() > self.degree() {
            return Err(Error::DimensionMismatch(format!(
                "F_{}^{} element needs at most {} coefficients",
                self.p(),
                self.degree(),
                self.degree()
            )));
        }
        let mut e = self.zero();
        for (i, c) in coeffs.iter().enumerate() {
            e.coeffs[i] = c % self.p();
        }
        Ok(e)
    }

    /// Element whose coefficient vector spells `index` in base `p`.
    pub fn element(&self, mut index: u128) -> FFElem {
        let p = self.p() as u128;
        let mut e = self.zero();
        for c in e.coeffs.iter_mut() {
            *c = (index % p) as u64;
            index /= p;
        }
        e
    }

    pub fn elements(&self) -> impl Iterator<Item = FFElem> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    pub fn add(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let p = self.p();
        FFElem { p, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + y) % p).collect() }
    }

    pub fn sub(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let p = self.p();
        FFElem { p, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + p - y) % p).collect() }
    }

    pub fn neg(&self, a: &FFElem) -> FFElem {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let mut out = vec![0u64; self.degree()];
        self.mul_raw(&a.coeffs, &b.coeffs, &mut out);
        FFElem { p: self.p(), coeffs: out }
    }

    /// `out = a·b` on raw coefficient slices of length `n`.
    pub fn mul_raw(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let p = self.p();
        let n = self.degree();
        let mut full = [0u64; 64];
        let full = if 2 * n <= 64 { &mut full[..2 * n] } else { unreachable!("degree above 32") };
        for v in full.iter_mut() {
            *v = 0;
        }
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                full[i + j] = (full[i + j] + a[i] * b[j]) % p;
            }
        }
        let m = &self.data.modulus;
        for k in (n..2 * n - 1).rev() {
            let c = full[k];
            if c == 0 {
                continue;
            }
            for i in 0..n {
                full[k - n + i] = (full[k - n + i] + (p - c) * m[i]) % p;
            }
            full[k] = 0;
        }
        out.copy_from_slice(&full[..n]);
    }

    pub fn pow(&self, a: &FFElem, mut e: u128) -> FFElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn frobenius(&self, a: &FFElem) -> FFElem {
        self.pow(a, self.p() as u128)
    }

    pub fn inv(&self, a: &FFElem) -> Result<FFElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order() - 2))
    }

    fn trace_slow(&self, a: &FFElem) -> u64 {
        let mut acc = self.zero();
        let mut x = a.clone();
        for _ in 0..self.degree() {
            acc = self.add(&acc, &x);
            x = self.frobenius(&x);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        acc.coeffs[0]
    }

    /// Absolute trace to `F_p`, by linearity from the traces of `t^i`.
    pub fn trace(&self, a: &FFElem) -> u64 {
        self.trace_raw(&a.coeffs)
    }

    pub fn trace_raw(&self, a: &[u64]) -> u64 {
        let p = self.p();
        a.iter().zip(&self.data.trace_basis).fold(0, |acc, (x, t)| (acc + x * t) % p)
    }

    /// Value of a polynomial with coefficients in this field.
    pub fn eval(&self, coeffs: &[FFElem], x: &FFElem) -> FFElem {
        let mut acc = self.zero();
        for c in coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    /// Minimal polynomial over `F_p`, ascending and monic.
    pub fn minimal_polynomial(&self, a: &FFElem) -> Vec<u64> {
        let mut conj = vec![a.clone()];
        loop {
            let next = self.frobenius(conj.last().expect("nonempty"));
            if &next == a {
                break;
            }
            conj.push(next);
        }
        // Π (X − c) with coefficients in this field.
        let mut poly = vec![self.one()];
        for c in &conj {
            let mut next = vec![self.zero(); poly.len() + 1];
            for (i, coef) in poly.iter().enumerate() {
                next[i + 1] = self.add(&next[i + 1], coef);
                next[i] = self.sub(&next[i], &self.mul(coef, c));
            }
            poly = next;
        }
        poly.iter()
            .map(|c| {
                debug_assert!(c.coeffs[1..].iter().all(|&x| x == 0));
                c.coeffs[0]
            })
            .collect()
    }

    /// Least-index root of a polynomial over `F_p`.
    pub fn find_root(&self, poly: &[u64]) -> Option<FFElem> {
        let coeffs: Vec<FFElem> = poly.iter().map(|&c| self.from_int(c as i64)).collect();
        self.elements().find(|x| self.eval(&coeffs, x).is_zero())
    }
}

impl FFElem {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// True when the element lies in the prime field.
    pub fn in_prime_field(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn index(&self) -> u128 {
        self.coeffs.iter().rev().fold(0u128, |acc, &c| acc * self.p as u128 + c as u128)
    }
}

/// `Tr_{F_{p^n}/F_p}(x) = Σ_{k<n} x^{p^k}` as an integer in `0..p`.
pub fn ff_trace(field: &FiniteField, x: &FFElem) -> u64 {
    field.trace(x)
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p(), self.degree(), self.modulus())
    }
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moduli_are_least_irreducibles() {
        assert_eq!(FiniteField::new(3, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FiniteField::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FiniteField::new(5, 2).unwrap().modulus(), &[2, 0, 1]);
    }

    #[test]
    fn trace_examples() {
        let f1 = FiniteField::new(5, 1).unwrap();
        for a in 0..5 {
            assert_eq!(ff_trace(&f1, &f1.from_int(a)), a as u64);
        }
        // t² + 1 over F_3: Tr(t) = t + t³ = t − t = 0.
        let f9 = FiniteField::new(3, 2).unwrap();
        let t = f9.generator();
        assert_eq!(ff_trace(&f9, &t), 0);
        assert_eq!(ff_trace(&f9, &f9.one()), 2);
    }

    #[test]
    fn trace_is_frobenius_invariant_and_additive() {
        let f = FiniteField::new(3, 4).unwrap();
        for i in (0..f.order()).step_by(7) {
            let x = f.element(i);
            let y = f.element((i * 13 + 5) % f.order());
            assert_eq!(f.trace(&f.frobenius(&x)), f.trace(&x));
            assert_eq!(f.trace(&f.add(&x, &y)), (f.trace(&x) + f.trace(&y)) % 3);
            assert_eq!(f.trace(&x), f.trace_slow(&x));
        }
    }

    #[test]
    fn multiplicative_group_order() {
        let f = FiniteField::new(5, 3).unwrap();
        for i in 1..f.order() {
            let x = f.element(i);
            assert_eq!(f.pow(&x, f.order() - 1), f.one());
        }
    }

    #[test]
    fn minimal_polynomial_root_round_trip() {
        let f25 = FiniteField::new(5, 2).unwrap();
        let a = f25.generator();
        let mp = f25.minimal_polynomial(&a);
        assert_eq!(mp.len(), 3);
        let big = FiniteField::new(5, 4).unwrap();
        let root = big.find_root(&mp).unwrap();
        assert_eq!(big.minimal_polynomial(&root), mp);
        assert_eq!(f25.element(7).index(), 7);
    }
}
