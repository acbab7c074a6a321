//! The cyclotomic integers `Z[ζ_p]` in the basis `1, ζ, …, ζ^(p−2)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::approx::{PiAdicApprox, ZetaPowers};
use super::pifield::PiField;
use super::ring::RingElem;
use super::valuation::{q64, vp_int, Valuation, Q64};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloElem {
    p: u64,
    coords: Vec<BigInt>,
}

impl CycloElem {
    pub fn zero(p: u64) -> Self {
        CycloElem { p, coords: vec![BigInt::zero(); (p - 1) as usize] }
    }

    pub fn from_int(p: u64, n: i64) -> Self {
        Self::from_bigint(p, BigInt::from(n))
    }

    pub fn from_bigint(p: u64, n: BigInt) -> Self {
        let mut e = Self::zero(p);
        e.coords[0] = n;
        e
    }

    /// `ζ^k`.
    pub fn zeta_pow(p: u64, k: i64) -> Self {
        let mut counts = vec![BigInt::zero(); p as usize];
        counts[k.rem_euclid(p as i64) as usize] = BigInt::one();
        Self::from_exponent_counts(p, counts)
    }

    /// `Σ_k counts[k] ζ^k` for `k` in `0..p`.
    pub fn from_exponent_counts(p: u64, mut counts: Vec<BigInt>) -> Self {
        assert_eq!(counts.len(), p as usize);
        let top = counts.pop().expect("p ≥ 2");
        let coords = counts.into_iter().map(|c| c - &top).collect();
        CycloElem { p, coords }
    }

    pub fn from_coords(p: u64, coords: Vec<BigInt>) -> Result<Self> {
        if coords.len() != (p - 1) as usize {
            return Err(Error::DimensionMismatch(format!(
                "Z[ζ_{}] needs {} coordinates, got {}",
                p,
                p - 1,
                coords.len()
            )));
        }
        Ok(CycloElem { p, coords })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_integer(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// The integer value when the element lies in `Z`.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.coords[0].clone())
    }

    fn check(&self, o: &CycloElem) {
        assert_eq!(self.p, o.p, "mixing cyclotomic rings for different primes");
    }

    fn reduce_full(p: u64, mut full: Vec<BigInt>) -> CycloElem {
        // full holds coefficients of ζ^0..ζ^(p−1) after folding modulo ζ^p = 1.
        full.resize(p as usize, BigInt::zero());
        Self::from_exponent_counts(p, full)
    }

    pub fn scale(&self, n: &BigInt) -> CycloElem {
        CycloElem { p: self.p, coords: self.coords.iter().map(|c| c * n).collect() }
    }

    /// Exact division by an integer, `None` when it does not divide.
    pub fn div_exact_int(&self, n: &BigInt) -> Option<CycloElem> {
        if n.is_zero() {
            return None;
        }
        let mut coords = Vec::with_capacity(self.coords.len());
        for c in &self.coords {
            let (q, r) = c.div_rem(n);
            if !r.is_zero() {
                return None;
            }
            coords.push(q);
        }
        Some(CycloElem { p: self.p, coords })
    }

    pub fn pow(&self, mut k: u64) -> CycloElem {
        let mut base = self.clone();
        let mut acc = CycloElem::from_int(self.p, 1);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The Galois automorphism `ζ ↦ ζ^k`, `p ∤ k`.
    pub fn galois(&self, k: i64) -> CycloElem {
        let p = self.p as i64;
        assert!(k.rem_euclid(p) != 0, "ζ ↦ ζ^k needs p ∤ k");
        let mut full = vec![BigInt::zero(); self.p as usize];
        for (i, c) in self.coords.iter().enumerate() {
            full[(i as i64 * k).rem_euclid(p) as usize] += c;
        }
        Self::reduce_full(self.p, full)
    }

    /// Complex conjugation, `ζ ↦ ζ^(−1)`.
    pub fn conj(&self) -> CycloElem {
        self.galois(-1)
    }

    /// Coordinates in the basis `λ^i`, `λ = ζ − 1`.
    fn lambda_coords(&self) -> Vec<BigInt> {
        let n = self.coords.len();
        let mut out = vec![BigInt::zero(); n];
        // ζ^k = (1 + λ)^k; k ≤ p − 2 so no reduction is needed.
        let mut binom = vec![BigInt::one()];
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                let mut next = vec![BigInt::one(); k + 1];
                for j in 1..k {
                    next[j] = &binom[j - 1] + &binom[j];
                }
                binom = next;
            }
            if c.is_zero() {
                continue;
            }
            for (j, b) in binom.iter().enumerate() {
                out[j] += c * b;
            }
        }
        out
    }

    /// Exact p-adic valuation with `v(p) = 1`, `v(ζ − 1) = 1/(p−1)`.
    pub fn valuation(&self) -> Valuation {
        let e = self.p as i64 - 1;
        let mut best = Valuation::Infinity;
        for (i, b) in self.lambda_coords().iter().enumerate() {
            if let Some(v) = vp_int(b, self.p) {
                best = best.min(Valuation::Finite(q64(v * e + i as i64, e)));
            }
        }
        best
    }

    /// Values under the embeddings `ζ ↦ e^(2πik/p)`, `k = 1..p−1`.
    pub fn complex_embeddings(&self) -> Vec<Complex64> {
        let p = self.p;
        (1..p)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, c) in self.coords.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let angle = 2.0 * std::f64::consts::PI * ((k * i as u64) % p) as f64 / p as f64;
                    let cf = c.to_f64().unwrap_or(f64::NAN);
                    acc += Complex64::from_polar(cf, angle);
                }
                acc
            })
            .collect()
    }

    /// Exact squared modulus under the embedding `ζ ↦ e^(2πik/p)`, as an
    /// element of the real subring (integer when all embeddings agree).
    pub fn norm_squared(&self) -> CycloElem {
        self * &self.conj()
    }

    /// Image in `K` under `ζ ↦ ζ_π`, the root congruent to `1 + π`.
    pub fn embed(&self, zeta: &ZetaPowers) -> PiAdicApprox {
        let field = zeta.power(0).field();
        let mut acc = PiAdicApprox::exact(field.zero());
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&zeta.power(i as i64).scale_int(c));
        }
        acc.truncate(Valuation::Finite(zeta.precision()))
    }
}

impl RingElem for CycloElem {
    fn zero_like(&self) -> Self {
        CycloElem::zero(self.p)
    }
    fn one_like(&self) -> Self {
        CycloElem::from_int(self.p, 1)
    }
    fn is_zero(&self) -> bool {
        CycloElem::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64_like(&self, n: i64) -> Self {
        CycloElem::from_int(self.p, n)
    }
}

/// Embed `x` into `K` at precision `m`.
pub fn embed_cyclo(x: &CycloElem, m: Q64) -> Result<PiAdicApprox> {
    let field = PiField::new(x.p())?;
    let zeta = ZetaPowers::new(field, m)?;
    Ok(x.embed(&zeta))
}

impl<'a> Add<&'a CycloElem> for &'a CycloElem {
    type Output = CycloElem;
    fn add(self, o: &CycloElem) -> CycloElem {
        self.check(o);
        CycloElem { p: self.p, coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a CycloElem> for &'a CycloElem {
    type Output = CycloElem;
    fn sub(self, o: &CycloElem) -> CycloElem {
        self.check(o);
        CycloElem { p: self.p, coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        CycloElem { p: self.p, coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl<'a> Mul<&'a CycloElem> for &'a CycloElem {
    type Output = CycloElem;
    fn mul(self, o: &CycloElem) -> CycloElem {
        self.check(o);
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if !b.is_zero() {
                    full[(i + j) % p] += a * b;
                }
            }
        }
        CycloElem::reduce_full(self.p, full)
    }
}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}*", mag)?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{}", i)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// `v_q` units: valuation divided by `log_p q`.
pub fn in_q_units(v: Valuation, q_exponent: u32) -> Valuation {
    match v {
        Valuation::Finite(x) => Valuation::Finite(x / Q64::from_integer(q_exponent as i64)),
        Valuation::Infinity => Valuation::Infinity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: u64, v: &[i64]) -> CycloElem {
        CycloElem::from_coords(p, v.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
    }

    #[test]
    fn cyclotomic_relation() {
        let p = 5;
        let mut s = CycloElem::zero(p);
        for k in 0..p as i64 {
            s = &s + &CycloElem::zeta_pow(p, k);
        }
        assert!(s.is_zero());
        assert_eq!(CycloElem::zeta_pow(p, 1).pow(5), CycloElem::from_int(p, 1));
    }

    #[test]
    fn gauss_sum_square_for_three() {
        let g = c(3, &[1, 2]);
        assert_eq!(&g * &g, CycloElem::from_int(3, -3));
        assert_eq!(g.valuation(), Valuation::Finite(q64(1, 2)));
    }

    #[test]
    fn valuation_of_lambda_powers() {
        let p = 7;
        let lambda = &CycloElem::zeta_pow(p, 1) - &CycloElem::from_int(p, 1);
        for k in 0..12u64 {
            assert_eq!(lambda.pow(k).valuation(), Valuation::Finite(q64(k as i64, 6)));
        }
    }

    #[test]
    fn embeddings_of_examples() {
        let g = c(3, &[1, 2]);
        let e = g.complex_embeddings();
        assert_eq!(e.len(), 2);
        for z in &e {
            assert!((z.norm() - 3f64.sqrt()).abs() < 1e-12);
            assert!(z.re.abs() < 1e-12);
        }
        assert!((e[0].im + e[1].im).abs() < 1e-12);
        for z in CycloElem::from_int(5, 4).complex_embeddings() {
            assert!((z - Complex64::new(4.0, 0.0)).norm() < 1e-12);
        }
        for z in CycloElem::zeta_pow(7, 1).complex_embeddings() {
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn embedding_examples() {
        let m = Q64::from_integer(10);
        let one = embed_cyclo(&CycloElem::from_int(3, 1), m).unwrap();
        assert!(one.value().is_one());
        let rel = c(3, &[1, 1]);
        let s = &rel + &CycloElem::zeta_pow(3, 2);
        assert!(embed_cyclo(&s, m).unwrap().is_zero_mod());
        let g = embed_cyclo(&c(3, &[1, 2]), m).unwrap();
        assert_eq!(g.certified_valuation(), Some(Valuation::Finite(q64(1, 2))));
    }

    #[test]
    fn galois_action() {
        let z = CycloElem::zeta_pow(5, 1);
        assert_eq!(z.galois(2), CycloElem::zeta_pow(5, 2));
        assert_eq!(z.conj(), CycloElem::zeta_pow(5, 4));
        let x = c(5, &[3, -1, 4, 2]);
        assert_eq!(x.galois(2).galois(3), x);
    }
}
