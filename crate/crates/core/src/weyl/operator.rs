//! Normal-ordered elements `Σ a_ij x^i ∂^j` of the Weyl algebra with
//! `∂x − x∂ = π^{-1}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::numeric::{PiField, PiFieldElem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gen {
    X,
    D,
}

/// Finite sum `Σ a_ij x^i ∂^j`, keyed by `(i, j)`.
#[derive(Clone, PartialEq, Eq)]
pub struct WeylOperator {
    field: PiField,
    terms: BTreeMap<(usize, usize), PiFieldElem>,
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `j!k!/(s!(j−s)!(k−s)!)`, the integer in front of `π^{-s}` when
/// `∂^j x^k` is normal-ordered.
fn reorder_weight(j: usize, k: usize, s: usize) -> BigInt {
    binomial(j, s) * binomial(k, s) * factorial(s)
}

impl WeylOperator {
    pub fn zero(field: PiField) -> Self {
        WeylOperator { field, terms: BTreeMap::new() }
    }

    pub fn scalar(c: PiFieldElem) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn one(field: PiField) -> Self {
        Self::scalar(field.one())
    }

    pub fn x(field: PiField) -> Self {
        Self::monomial(field.one(), 1, 0)
    }

    pub fn d(field: PiField) -> Self {
        Self::monomial(field.one(), 0, 1)
    }

    pub fn monomial(c: PiFieldElem, i: usize, j: usize) -> Self {
        let mut w = Self::zero(c.field());
        w.add_term(i, j, c);
        w
    }

    pub fn from_terms(field: PiField, terms: impl IntoIterator<Item = ((usize, usize), PiFieldElem)>) -> Self {
        let mut w = Self::zero(field);
        for ((i, j), c) in terms {
            w.add_term(i, j, c);
        }
        w
    }

    pub fn field(&self) -> PiField {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), PiFieldElem> {
        &self.terms
    }

    pub fn coeff(&self, i: usize, j: usize) -> PiFieldElem {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, i: usize, j: usize, c: PiFieldElem) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(|| self.field.zero());
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn add(&self, o: &WeylOperator) -> WeylOperator {
        let mut out = self.clone();
        for (&(i, j), c) in &o.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn neg(&self) -> WeylOperator {
        self.scale(&self.field.from_int(-1))
    }

    pub fn sub(&self, o: &WeylOperator) -> WeylOperator {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &PiFieldElem) -> WeylOperator {
        Self::from_terms(self.field, self.terms.iter().map(|(&k, c)| (k, c * s)))
    }

    /// Right multiplication by a generator, using
    /// `x^i∂^j · x = x^{i+1}∂^j + j·π^{-1}·x^i∂^{j−1}`.
    pub fn mul_gen(&self, g: Gen) -> WeylOperator {
        let mut out = Self::zero(self.field);
        let pi_inv = self.field.pi_pow(-1);
        for (&(i, j), c) in &self.terms {
            match g {
                Gen::D => out.add_term(i, j + 1, c.clone()),
                Gen::X => {
                    out.add_term(i + 1, j, c.clone());
                    if j > 0 {
                        out.add_term(i, j - 1, &c.scale_i64(j as i64) * &pi_inv);
                    }
                }
            }
        }
        out
    }

    /// Substitute `x ↦ ±x`, `∂ ↦ ±∂` with signs `(−1)^{i+j}`.
    pub fn sign_substitution(&self) -> WeylOperator {
        Self::from_terms(
            self.field,
            self.terms.iter().map(|(&(i, j), c)| ((i, j), if (i + j) % 2 == 1 { -c } else { c.clone() })),
        )
    }

    /// Largest `i + j` in the support.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }
}

/// Normal form of `c · g_1 g_2 ⋯ g_n`, by rewriting one generator at a time.
pub fn normal_form(c: PiFieldElem, word: &[Gen]) -> WeylOperator {
    word.iter().fold(WeylOperator::scalar(c), |acc, &g| acc.mul_gen(g))
}

/// The word `x^i ∂^j`.
pub fn monomial_word(i: usize, j: usize) -> Vec<Gen> {
    let mut w = vec![Gen::X; i];
    w.extend(std::iter::repeat_n(Gen::D, j));
    w
}

/// Product using the reordering formula
/// `(x^i∂^j)(x^k∂^l) = Σ_s j!k!/(π^s s!(j−s)!(k−s)!) x^{i+k−s}∂^{j+l−s}`.
pub fn weyl_mul(a: &WeylOperator, b: &WeylOperator) -> WeylOperator {
    let field = a.field;
    let mut out = WeylOperator::zero(field);
    for (&(i, j), ca) in &a.terms {
        for (&(k, l), cb) in &b.terms {
            let c = ca * cb;
            for s in 0..=j.min(k) {
                let w = reorder_weight(j, k, s);
                out.add_term(i + k - s, j + l - s, c.scale_int(&w).mul_pi_pow(-(s as i64)));
            }
        }
    }
    out
}

/// Product as the normal form of the concatenated words, an independent
/// route to [`weyl_mul`].
pub fn weyl_mul_by_words(a: &WeylOperator, b: &WeylOperator) -> WeylOperator {
    let mut out = WeylOperator::zero(a.field);
    for (&(k, l), cb) in &b.terms {
        let prod = monomial_word(k, l).into_iter().fold(a.clone(), |acc, g| acc.mul_gen(g));
        out = out.add(&prod.scale(cb));
    }
    out
}

/// Single coefficient `c_mn` of `a·b` summed over `(i, j, s)`, the indexing
/// used when the factors are infinite series.
pub fn product_coefficient(a: &WeylOperator, b: &WeylOperator, m: usize, n: usize) -> PiFieldElem {
    let field = a.field;
    let mut acc = field.zero();
    for (&(i, j), ca) in &a.terms {
        if i > m {
            continue;
        }
        for s in 0..=j {
            let (k, l) = (m + s - i, n + s);
            if l < j {
                continue;
            }
            let cb = b.coeff(k, l - j);
            if cb.is_zero() {
                continue;
            }
            let w = factorial(j) * factorial(k) / (factorial(s) * factorial(j - s) * factorial(m - i));
            acc = &acc + &(ca * &cb).scale_int(&w).mul_pi_pow(-(s as i64));
        }
    }
    acc
}

/// The automorphism with `x ↦ ∂`, `∂ ↦ −x`, by substitution and normal
/// ordering.
pub fn rho(a: &WeylOperator) -> WeylOperator {
    let mut out = WeylOperator::zero(a.field);
    for (&(i, j), c) in &a.terms {
        let mut word = vec![Gen::D; i];
        word.extend(std::iter::repeat_n(Gen::X, j));
        let sign = if j % 2 == 1 { -c } else { c.clone() };
        out = out.add(&normal_form(sign, &word));
    }
    out
}

/// `ρ` from its coefficient formula: the coefficient at `x^I∂^J` is
/// `Σ_k (−1)^{I+k} (J+k)!(I+k)!/(π^k k! I! J!) · a_{(J+k)(I+k)}`.
pub fn rho_closed_form(a: &WeylOperator) -> WeylOperator {
    let field = a.field;
    let mut out = WeylOperator::zero(field);
    let Some(top) = a.total_degree() else { return out };
    for big_i in 0..=top {
        for big_j in 0..=top - big_i {
            let mut acc = field.zero();
            for k in 0..=top {
                let c = a.coeff(big_j + k, big_i + k);
                if c.is_zero() {
                    continue;
                }
                let w = factorial(big_j + k) * factorial(big_i + k)
                    / (factorial(k) * factorial(big_i) * factorial(big_j));
                let term = c.scale_int(&w).mul_pi_pow(-(k as i64));
                acc = if (big_i + k) % 2 == 1 { &acc - &term } else { &acc + &term };
            }
            out.add_term(big_i, big_j, acc);
        }
    }
    out
}

impl fmt::Display for WeylOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| {
                let mut m = String::new();
                match i {
                    0 => {}
                    1 => m.push('x'),
                    _ => m.push_str(&format!("x^{}", i)),
                }
                match j {
                    0 => {}
                    1 => m.push('∂'),
                    _ => m.push_str(&format!("∂^{}", j)),
                }
                if m.is_empty() {
                    format!("({})", c)
                } else if c.is_one() {
                    m
                } else {
                    format!("({})·{}", c, m)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for WeylOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> PiField {
        PiField::new(5).unwrap()
    }

    #[test]
    fn defining_relation() {
        let f = k();
        let dx = normal_form(f.one(), &[Gen::D, Gen::X]);
        let expected = WeylOperator::monomial(f.one(), 1, 1).add(&WeylOperator::scalar(f.pi_pow(-1)));
        assert_eq!(dx, expected);
        assert_eq!(weyl_mul(&WeylOperator::d(f), &WeylOperator::x(f)), expected);
    }

    #[test]
    fn second_order_reordering() {
        let f = k();
        let got = normal_form(f.one(), &[Gen::D, Gen::D, Gen::X, Gen::X]);
        let expected = WeylOperator::from_terms(
            f,
            [
                ((2, 2), f.one()),
                ((1, 1), f.pi_pow(-1).scale_i64(4)),
                ((0, 0), f.pi_pow(-2).scale_i64(2)),
            ],
        );
        assert_eq!(got, expected);
    }

    #[test]
    fn normal_words_are_fixed() {
        let f = k();
        assert_eq!(normal_form(f.one(), &[Gen::X, Gen::D]), WeylOperator::monomial(f.one(), 1, 1));
        let x2 = WeylOperator::monomial(f.one(), 2, 0);
        let d2 = WeylOperator::monomial(f.one(), 0, 2);
        assert_eq!(weyl_mul(&x2, &d2), WeylOperator::monomial(f.one(), 2, 2));
        let a = WeylOperator::from_terms(f, [((3, 1), f.pi()), ((0, 2), f.from_int(7))]);
        assert_eq!(weyl_mul(&a, &WeylOperator::one(f)), a);
    }

    #[test]
    fn rho_on_generators() {
        let f = k();
        assert_eq!(rho(&WeylOperator::x(f)), WeylOperator::d(f));
        assert_eq!(rho(&WeylOperator::d(f)), WeylOperator::x(f).neg());
        let xd = WeylOperator::monomial(f.one(), 1, 1);
        let expected = xd.neg().sub(&WeylOperator::scalar(f.pi_pow(-1)));
        assert_eq!(rho(&xd), expected);
    }

    #[test]
    fn closed_form_agrees() {
        let f = k();
        let a = WeylOperator::from_terms(
            f,
            [((2, 3), f.pi()), ((1, 0), f.from_int(3)), ((0, 4), f.from_ratio(1, 2)), ((3, 3), f.one())],
        );
        assert_eq!(rho_closed_form(&a), rho(&a));
    }

    #[test]
    fn coefficientwise_product_agrees() {
        let f = k();
        let a = WeylOperator::from_terms(f, [((1, 2), f.pi()), ((0, 1), f.from_int(2))]);
        let b = WeylOperator::from_terms(f, [((2, 1), f.one()), ((3, 0), f.from_int(-1))]);
        let c = weyl_mul(&a, &b);
        for m in 0..6 {
            for n in 0..6 {
                assert_eq!(product_coefficient(&a, &b, m, n), c.coeff(m, n), "({}, {})", m, n);
            }
        }
    }
}
