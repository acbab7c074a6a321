//! Dense polynomials over `K`.

use std::fmt;

use crate::numeric::{PiField, PiFieldElem, RingElem, Valuation};

#[derive(Clone, PartialEq, Eq)]
pub struct KPoly {
    field: PiField,
    coeffs: Vec<PiFieldElem>,
}

impl KPoly {
    pub fn zero(field: PiField) -> Self {
        KPoly { field, coeffs: Vec::new() }
    }

    pub fn constant(c: PiFieldElem) -> Self {
        Self::new(c.field(), vec![c])
    }

    pub fn new(field: PiField, coeffs: Vec<PiFieldElem>) -> Self {
        let mut p = KPoly { field, coeffs };
        p.trim();
        p
    }

    pub fn from_ints(field: PiField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    /// `c·x^k`.
    pub fn monomial(c: PiFieldElem, k: usize) -> Self {
        let field = c.field();
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        Self::new(field, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> PiField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[PiFieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> PiFieldElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, o: &KPoly) -> KPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.field, (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &KPoly) -> KPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.field, (0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn neg(&self) -> KPoly {
        KPoly { field: self.field, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, s: &PiFieldElem) -> KPoly {
        Self::new(self.field, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &KPoly) -> KPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Self::new(self.field, out)
    }

    pub fn mul_x_pow(&self, k: usize) -> KPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        KPoly { field: self.field, coeffs }
    }

    pub fn derivative(&self) -> KPoly {
        Self::new(
            self.field,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale_i64(i as i64)).collect(),
        )
    }

    /// `f(x^q)`.
    pub fn substitute_power(&self, q: usize) -> KPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); (self.coeffs.len() - 1) * q + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * q] = c.clone();
        }
        Self::new(self.field, coeffs)
    }

    pub fn eval(&self, x: &PiFieldElem) -> PiFieldElem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `min_i v(c_i) + r·i`.
    pub fn gauss_valuation(&self, r: crate::numeric::Q64) -> Valuation {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.valuation() + r * crate::numeric::Q64::from_integer(i as i64))
            .fold(Valuation::Infinity, Valuation::min)
    }
}

impl RingElem for KPoly {
    fn zero_like(&self) -> Self {
        KPoly::zero(self.field)
    }
    fn one_like(&self) -> Self {
        KPoly::constant(self.field.one())
    }
    fn is_zero(&self) -> bool {
        KPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        KPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        KPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        KPoly::mul(self, o)
    }
    fn neg(&self) -> Self {
        KPoly::neg(self)
    }
}

impl fmt::Debug for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({})", c),
                1 => format!("({})x", c),
                _ => format!("({})x^{}", c, i),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_basics() {
        let f = PiField::new(3).unwrap();
        let a = KPoly::from_ints(f, &[1, 1]);
        let b = KPoly::from_ints(f, &[-1, 1]);
        assert_eq!(a.mul(&b), KPoly::from_ints(f, &[-1, 0, 1]));
        assert_eq!(a.mul(&b).derivative(), KPoly::from_ints(f, &[0, 2]));
        assert_eq!(a.substitute_power(3), KPoly::from_ints(f, &[1, 0, 0, 1]));
        assert_eq!(a.sub(&a).degree(), None);
        assert_eq!(a.eval(&f.from_int(4)), f.from_int(5));
    }
}
