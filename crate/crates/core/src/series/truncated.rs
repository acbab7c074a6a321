//! Power series over `K` kept up to a fixed degree, with a certificate for
//! the coefficients that were discarded.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly::KPoly;
use crate::error::{Error, Result};
use crate::numeric::pifield::mul_coords;
use crate::numeric::{PiAdicApprox, PiField, PiFieldElem, RingElem, Valuation, Q64};

/// Hard cap on stored degrees, to keep runaway substitutions in check.
pub const MAX_TRUNCATION: usize = 1 << 20;

/// What is known about the coefficients beyond the truncation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    /// All discarded coefficients vanish.
    Exact,
    /// Every discarded coefficient `c_i` has `v(c_i) ≥ slope·i + offset`.
    Bounded { slope: Q64, offset: Q64 },
    Unknown,
}

impl Tail {
    /// Lower bound for `v(c_i)` at a single discarded degree.
    pub fn bound_at(&self, i: usize) -> Valuation {
        match self {
            Tail::Exact => Valuation::Infinity,
            Tail::Bounded { slope, offset } => {
                Valuation::Finite(*slope * Q64::from_integer(i as i64) + *offset)
            }
            Tail::Unknown => Valuation::Finite(Q64::from_integer(i64::MIN / 4)),
        }
    }

    fn combine_additive(a: Tail, b: Tail) -> Tail {
        match (a, b) {
            (Tail::Exact, t) | (t, Tail::Exact) => t,
            (Tail::Unknown, _) | (_, Tail::Unknown) => Tail::Unknown,
            (Tail::Bounded { slope: s1, offset: o1 }, Tail::Bounded { slope: s2, offset: o2 }) => {
                Tail::Bounded { slope: s1.min(s2), offset: o1.min(o2) }
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    field: PiField,
    coeffs: Vec<PiFieldElem>,
    tail: Tail,
}

impl TruncatedSeries {
    pub fn new(field: PiField, mut coeffs: Vec<PiFieldElem>, trunc_order: usize, tail: Tail) -> Self {
        coeffs.resize(trunc_order + 1, field.zero());
        TruncatedSeries { field, coeffs, tail }
    }

    pub fn zero(field: PiField, trunc_order: usize) -> Self {
        Self::new(field, Vec::new(), trunc_order, Tail::Exact)
    }

    pub fn one(field: PiField, trunc_order: usize) -> Self {
        Self::new(field, vec![field.one()], trunc_order, Tail::Exact)
    }

    /// Polynomial viewed as a series; terms above the order are discarded
    /// and summarised by a flat bound.
    pub fn from_poly(poly: &KPoly, trunc_order: usize) -> Self {
        let field = poly.field();
        let coeffs: Vec<PiFieldElem> = poly.coeffs().iter().take(trunc_order + 1).cloned().collect();
        let tail = match poly.degree() {
            Some(d) if d > trunc_order => {
                let floor = poly.coeffs()[trunc_order + 1..]
                    .iter()
                    .map(|c| c.valuation())
                    .fold(Valuation::Infinity, Valuation::min);
                match floor {
                    Valuation::Finite(o) => Tail::Bounded { slope: Q64::zero(), offset: o },
                    Valuation::Infinity => Tail::Exact,
                }
            }
            _ => Tail::Exact,
        };
        Self::new(field, coeffs, trunc_order, tail)
    }

    pub fn field(&self) -> PiField {
        self.field
    }

    pub fn trunc_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn with_tail(mut self, tail: Tail) -> Self {
        self.tail = tail;
        self
    }

    pub fn coeffs(&self) -> &[PiFieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &PiFieldElem {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.tail == Tail::Exact && self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The stored part as a polynomial.
    pub fn to_poly(&self) -> KPoly {
        KPoly::new(self.field, self.coeffs.clone())
    }

    fn check(&self, o: &TruncatedSeries) -> Result<()> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(self.field.p(), o.field.p()));
        }
        if self.trunc_order() != o.trunc_order() {
            return Err(Error::TruncationMismatch(self.trunc_order(), o.trunc_order()));
        }
        Ok(())
    }

    pub fn add(&self, o: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check(o)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        Ok(TruncatedSeries { field: self.field, coeffs, tail: Tail::combine_additive(self.tail, o.tail) })
    }

    pub fn sub(&self, o: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries { field: self.field, coeffs: self.coeffs.iter().map(|c| -c).collect(), tail: self.tail }
    }

    pub fn scale(&self, s: &PiFieldElem) -> TruncatedSeries {
        let tail = match self.tail {
            Tail::Bounded { slope, offset } => match s.valuation() {
                Valuation::Finite(v) => Tail::Bounded { slope, offset: offset + v },
                Valuation::Infinity => Tail::Exact,
            },
            t => t,
        };
        TruncatedSeries { field: self.field, coeffs: self.coeffs.iter().map(|c| c * s).collect(), tail }
    }

    /// Largest `o` with `v(c_i) ≥ slope·i + o` for every coefficient,
    /// stored or discarded. `None` when nothing can be said.
    pub fn global_offset(&self, slope: Q64) -> Option<Q64> {
        let mut best: Option<Q64> = match self.tail {
            Tail::Exact => None,
            Tail::Bounded { slope: s, offset } => {
                if s < slope {
                    return None;
                }
                // s·i + offset ≥ slope·i + offset for i ≥ 0.
                Some(offset)
            }
            Tail::Unknown => return None,
        };
        for (i, c) in self.coeffs.iter().enumerate() {
            if let Valuation::Finite(v) = c.valuation() {
                let o = v - slope * Q64::from_integer(i as i64);
                best = Some(best.map_or(o, |b| b.min(o)));
            }
        }
        Some(best.unwrap_or_else(|| Q64::from_integer(i64::MAX / 4)))
    }

    fn effective_slope(&self) -> Option<Q64> {
        match self.tail {
            Tail::Bounded { slope, .. } => Some(slope),
            _ => None,
        }
    }

    /// Truncated product. The tail certificate of the product uses the
    /// smaller slope and the sum of the global offsets.
    pub fn mul(&self, o: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check(o)?;
        let n = self.trunc_order();
        let mut coeffs = vec![self.field.zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().take(n + 1 - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        let tail = self.product_tail(o);
        Ok(TruncatedSeries { field: self.field, coeffs, tail })
    }

    fn product_tail(&self, o: &TruncatedSeries) -> Tail {
        if self.is_zero() || o.is_zero() {
            return Tail::Exact;
        }
        match (self.tail, o.tail) {
            (Tail::Unknown, _) | (_, Tail::Unknown) => Tail::Unknown,
            (Tail::Exact, Tail::Exact) => {
                // The dropped terms are finitely many and known exactly.
                let n = self.trunc_order();
                let mut floor = Valuation::Infinity;
                for (i, a) in self.coeffs.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for b in o.coeffs.iter().skip(n + 1 - i) {
                        if !b.is_zero() {
                            floor = floor.min(a.valuation() + b.valuation());
                        }
                    }
                }
                match floor {
                    Valuation::Infinity => Tail::Exact,
                    Valuation::Finite(f) => Tail::Bounded { slope: Q64::zero(), offset: f },
                }
            }
            _ => {
                let slope = match (self.effective_slope(), o.effective_slope()) {
                    (Some(a), Some(b)) => a.min(b),
                    (Some(a), None) | (None, Some(a)) => a,
                    (None, None) => unreachable!("handled above"),
                };
                match (self.global_offset(slope), o.global_offset(slope)) {
                    (Some(a), Some(b)) => Tail::Bounded { slope, offset: a + b },
                    _ => Tail::Unknown,
                }
            }
        }
    }

    /// Derivative; the order drops by one because `c_{N+1}` is not stored.
    pub fn derivative(&self) -> TruncatedSeries {
        let n = self.trunc_order();
        let coeffs: Vec<PiFieldElem> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale_i64(i as i64))
            .collect();
        let tail = match self.tail {
            Tail::Bounded { slope, offset } => Tail::Bounded { slope, offset: offset + slope },
            t => t,
        };
        Self::new(self.field, coeffs, n.saturating_sub(1), tail)
    }

    /// Keep fewer terms.
    pub fn truncate(&self, order: usize) -> TruncatedSeries {
        if order >= self.trunc_order() {
            return self.clone();
        }
        let dropped = &self.coeffs[order + 1..];
        let mut tail = self.tail;
        if dropped.iter().any(|c| !c.is_zero()) {
            let drop_tail = match self.effective_slope() {
                Some(s) => self.global_offset(s).map(|o| Tail::Bounded { slope: s, offset: o }),
                None if self.tail == Tail::Exact => {
                    let floor = dropped.iter().map(|c| c.valuation()).fold(Valuation::Infinity, Valuation::min);
                    floor.finite().map(|o| Tail::Bounded { slope: Q64::zero(), offset: o })
                }
                None => None,
            };
            tail = drop_tail.unwrap_or(Tail::Unknown);
        }
        TruncatedSeries { field: self.field, coeffs: self.coeffs[..=order].to_vec(), tail }
    }

    /// `f(x^q)`, keeping all stored information (the order becomes `q·N`).
    pub fn frobenius_substitute(&self, q: u64) -> Result<TruncatedSeries> {
        let n = self.trunc_order();
        let q = q as usize;
        let new_order = n.checked_mul(q).filter(|&m| m <= MAX_TRUNCATION).ok_or(Error::TruncationBudget {
            needed: n.saturating_mul(q),
            cap: MAX_TRUNCATION,
        })?;
        let mut coeffs = vec![self.field.zero(); new_order + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * q] = c.clone();
        }
        let tail = match self.tail {
            Tail::Bounded { slope, offset } => {
                Tail::Bounded { slope: slope / Q64::from_integer(q as i64), offset }
            }
            t => t,
        };
        Ok(TruncatedSeries { field: self.field, coeffs, tail })
    }

    /// `min_i v(c_i) + r·i` over the stored range, combined with the tail
    /// certificate when it decides the infimum.
    pub fn gauss_valuation(&self, r: Q64) -> Valuation {
        let stored = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.valuation() + r * Q64::from_integer(i as i64))
            .fold(Valuation::Infinity, Valuation::min);
        let beyond = match self.tail {
            Tail::Exact => Valuation::Infinity,
            Tail::Bounded { slope, offset } if slope + r >= Q64::zero() => {
                let i = Q64::from_integer(self.trunc_order() as i64 + 1);
                Valuation::Finite((slope + r) * i + offset)
            }
            _ => Valuation::Finite(Q64::from_integer(i64::MIN / 4)),
        };
        stored.min(beyond)
    }

    /// `min v(c_i)/i` over `lo..=hi`, the measured decay rate.
    pub fn measured_slope(&self, lo: usize, hi: usize) -> Option<Q64> {
        (lo.max(1)..=hi.min(self.trunc_order()))
            .filter_map(|i| self.coeffs[i].valuation().finite().map(|v| v / Q64::from_integer(i as i64)))
            .min()
    }

    /// Lower bound for the valuation of the discarded part of the sum at a
    /// point of valuation `vx`.
    pub fn tail_bound_at(&self, vx: Q64) -> Valuation {
        match self.tail {
            Tail::Exact => Valuation::Infinity,
            Tail::Bounded { slope, offset } if slope + vx > Q64::zero() => {
                Valuation::Finite((slope + vx) * Q64::from_integer(self.trunc_order() as i64 + 1) + offset)
            }
            Tail::Bounded { slope, offset } if slope + vx == Q64::zero() => Valuation::Finite(offset),
            _ => Valuation::Finite(Q64::from_integer(i64::MIN / 4)),
        }
    }

    /// Sum the stored terms at `x` by Horner's rule in working precision
    /// `target`; the result's precision also accounts for the tail.
    pub fn eval(&self, x: &PiAdicApprox, target: Q64) -> PiAdicApprox {
        let known = Valuation::Finite(target);
        let mut acc = PiAdicApprox::zero(self.field, Valuation::Infinity);
        let x = x.truncate(known);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&x).add(&PiAdicApprox::new(c.clone(), known));
        }
        let vx = x.valuation_lower_bound().finite().unwrap_or(target);
        acc.truncate(self.tail_bound_at(vx))
    }
}

/// `exp(f)` to order `N` for a polynomial `f` with `f(0) = 0`.
///
/// Uses the recurrence `n·e_n = Σ_k k·f_k·e_{n−k}` obtained from
/// `e′ = f′·e`, which costs `O(N·deg f)` exact operations. The tail is
/// left [`Tail::Unknown`]; see [`exp_poly_with_tail`].
pub fn exp_poly(f: &KPoly, n: usize) -> Result<TruncatedSeries> {
    if !f.coeff(0).is_zero() {
        return Err(Error::NonZeroConstantTerm);
    }
    if n > MAX_TRUNCATION {
        return Err(Error::TruncationBudget { needed: n, cap: MAX_TRUNCATION });
    }
    let field = f.field();
    let p = field.p();
    // With f = g/D and e_n = u_n/(n!·D^n) the recurrence stays in Z[π]:
    // u_n = Σ_k k·g_k·u_{n−k}·(n−1)!/(n−k)!·D^{k−1}.
    let den = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denominator()));
    let weighted: Vec<(usize, Vec<BigInt>)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let scale = &den / c.denominator() * BigInt::from(k);
            (k, c.numerators().iter().map(|x| x * &scale).collect())
        })
        .collect();
    let max_k = weighted.last().map_or(0, |w| w.0);
    let den_pows: Vec<BigInt> = (0..max_k.max(1)).map(|i| num_traits::pow(den.clone(), i)).collect();
    let zero_coords = vec![BigInt::zero(); field.degree()];
    let mut u: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    let mut one = zero_coords.clone();
    one[0] = BigInt::one();
    u.push(one);
    let mut e = Vec::with_capacity(n + 1);
    e.push(field.one());
    let mut fact = BigInt::one();
    let mut den_n = BigInt::one();
    for m in 1..=n {
        let mut acc = zero_coords.clone();
        for (k, g) in &weighted {
            if *k > m {
                break;
            }
            let prev = &u[m - k];
            if prev.iter().all(|x| x.is_zero()) {
                continue;
            }
            let mut factor = den_pows[k - 1].clone();
            for i in (m - k + 1)..m {
                factor *= i;
            }
            for (a, x) in acc.iter_mut().zip(mul_coords(p, g, prev)) {
                *a += x * &factor;
            }
        }
        fact *= m;
        den_n *= &den;
        e.push(PiFieldElem::from_parts(p, acc.clone(), &fact * &den_n));
        u.push(acc);
    }
    let tail = if f.is_zero() { Tail::Exact } else { Tail::Unknown };
    Ok(TruncatedSeries::new(field, e, n, tail))
}

/// `exp(f)` with an externally certified tail bound.
pub fn exp_poly_with_tail(f: &KPoly, n: usize, tail: Tail) -> Result<TruncatedSeries> {
    let s = exp_poly(f, n)?;
    Ok(if s.tail == Tail::Exact { s } else { s.with_tail(tail) })
}

/// Tail certificate for `exp(π(g(x) − g(x^q)))` with `g` of degree `d` and
/// coefficients in `Z_p`: slope `(p−1)/(p·q·d)`, offset 0.
pub fn dwork_tail(p: u64, q: u64, d: usize) -> Tail {
    if d == 0 {
        return Tail::Exact;
    }
    Tail::Bounded {
        slope: Q64::new(p as i64 - 1, (p * q) as i64 * d as i64),
        offset: Q64::zero(),
    }
}

impl RingElem for TruncatedSeries {
    fn zero_like(&self) -> Self {
        TruncatedSeries::zero(self.field, self.trunc_order())
    }
    fn one_like(&self) -> Self {
        TruncatedSeries::one(self.field, self.trunc_order())
    }
    fn is_zero(&self) -> bool {
        TruncatedSeries::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        TruncatedSeries::add(self, o).expect("matching truncation orders")
    }
    fn sub(&self, o: &Self) -> Self {
        TruncatedSeries::sub(self, o).expect("matching truncation orders")
    }
    fn mul(&self, o: &Self) -> Self {
        TruncatedSeries::mul(self, o).expect("matching truncation orders")
    }
    fn neg(&self) -> Self {
        TruncatedSeries::neg(self)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + O(x^{}) [{:?}]", self.to_poly(), self.trunc_order() + 1, self.tail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::q64;

    fn k(p: u64) -> PiField {
        PiField::new(p).unwrap()
    }

    #[test]
    fn exp_of_zero_is_one() {
        let f = k(5);
        let e = exp_poly(&KPoly::zero(f), 10).unwrap();
        assert_eq!(e, TruncatedSeries::one(f, 10));
        assert_eq!(e.tail(), Tail::Exact);
    }

    #[test]
    fn exp_example_for_three() {
        let f = k(3);
        let pi = f.pi();
        let g = KPoly::new(f, vec![f.zero(), pi.clone(), f.zero(), -&pi]);
        let e = exp_poly(&g, 3).unwrap();
        assert_eq!(e.coeff(0), &f.one());
        assert_eq!(e.coeff(1), &pi);
        assert_eq!(e.coeff(2), &f.from_ratio(-3, 2));
        assert_eq!(e.coeff(3), &pi.scale_rational(&num_rational::BigRational::new((-3).into(), 2.into())));
    }

    #[test]
    fn exp_inverse_pair() {
        let f = k(7);
        let g = KPoly::monomial(f.pi(), 1);
        let a = exp_poly(&g, 2).unwrap();
        let b = exp_poly(&g.neg(), 2).unwrap();
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.coeffs(), TruncatedSeries::one(f, 2).coeffs());
    }

    #[test]
    fn frobenius_substitution_examples() {
        let f = k(3);
        let x = TruncatedSeries::from_poly(&KPoly::from_ints(f, &[0, 1]), 4);
        let s = x.frobenius_substitute(3).unwrap();
        assert_eq!(s.to_poly(), KPoly::from_ints(f, &[0, 0, 0, 1]));
        let y = TruncatedSeries::from_poly(&KPoly::from_ints(f, &[1, 1, 1]), 2);
        assert_eq!(y.frobenius_substitute(3).unwrap().to_poly(), KPoly::from_ints(f, &[1, 0, 0, 1, 0, 0, 1]));
    }

    #[test]
    fn budget_is_enforced() {
        let f = k(3);
        let s = TruncatedSeries::one(f, MAX_TRUNCATION / 2);
        assert!(matches!(s.frobenius_substitute(3), Err(Error::TruncationBudget { .. })));
        assert_eq!(
            exp_poly(&KPoly::from_ints(f, &[1, 1]), 3),
            Err(Error::NonZeroConstantTerm)
        );
    }

    #[test]
    fn splitting_series_overconverges() {
        for p in [3u64, 5] {
            let f = k(p);
            let pi = f.pi();
            let g = KPoly::monomial(pi.clone(), 1).sub(&KPoly::monomial(pi, p as usize));
            let e = exp_poly_with_tail(&g, 60, dwork_tail(p, p, 1)).unwrap();
            let slope = e.measured_slope(10, 60).unwrap();
            let floor = q64(p as i64 - 1, (p * p) as i64) - q64(1, 20);
            assert!(slope >= floor, "p = {}: {}", p, slope);
            // The certificate itself holds on the stored range.
            for i in 0..=60 {
                assert!(e.coeff(i).valuation() >= e.tail().bound_at(i));
            }
        }
    }

    #[test]
    fn product_tail_takes_smaller_slope() {
        let f = k(3);
        let a = TruncatedSeries::one(f, 5).with_tail(Tail::Bounded { slope: q64(1, 2), offset: q64(0, 1) });
        let b = TruncatedSeries::one(f, 5).with_tail(Tail::Bounded { slope: q64(1, 3), offset: q64(-1, 1) });
        match a.mul(&b).unwrap().tail() {
            Tail::Bounded { slope, offset } => {
                assert_eq!(slope, q64(1, 3));
                assert_eq!(offset, q64(-1, 1));
            }
            t => panic!("unexpected tail {:?}", t),
        }
    }
}
