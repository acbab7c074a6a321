//! Finite pieces of two-sided series, with the valuations `w_r`.

use std::collections::BTreeMap;

use crate::numeric::{PiField, PiFieldElem, Valuation, Q64};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentFragment {
    field: PiField,
    coeffs: BTreeMap<i64, PiFieldElem>,
}

impl LaurentFragment {
    pub fn zero(field: PiField) -> Self {
        LaurentFragment { field, coeffs: BTreeMap::new() }
    }

    /// `c·t^n`.
    pub fn monomial(c: PiFieldElem, n: i64) -> Self {
        let mut f = Self::zero(c.field());
        f.insert(n, c);
        f
    }

    pub fn from_terms(field: PiField, terms: impl IntoIterator<Item = (i64, PiFieldElem)>) -> Self {
        let mut f = Self::zero(field);
        for (n, c) in terms {
            let cur = f.coeffs.remove(&n).unwrap_or_else(|| field.zero());
            f.insert(n, &cur + &c);
        }
        f
    }

    fn insert(&mut self, n: i64, c: PiFieldElem) {
        if !c.is_zero() {
            self.coeffs.insert(n, c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &PiFieldElem)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &LaurentFragment) -> LaurentFragment {
        Self::from_terms(
            self.field,
            self.coeffs.iter().chain(o.coeffs.iter()).map(|(n, c)| (*n, c.clone())),
        )
    }

    pub fn mul(&self, o: &LaurentFragment) -> LaurentFragment {
        let mut out = BTreeMap::<i64, PiFieldElem>::new();
        for (a, x) in &self.coeffs {
            for (b, y) in &o.coeffs {
                let e = out.entry(a + b).or_insert_with(|| self.field.zero());
                *e = &*e + &(x * y);
            }
        }
        Self::from_terms(self.field, out)
    }

    /// `w_r = min_n v(c_n) + r·n`.
    pub fn w_r(&self, r: Q64) -> Valuation {
        self.coeffs
            .iter()
            .map(|(n, c)| c.valuation() + r * Q64::from_integer(*n))
            .fold(Valuation::Infinity, Valuation::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::q64;

    #[test]
    fn examples() {
        let f = PiField::new(5).unwrap();
        let r = q64(2, 7);
        let t5 = LaurentFragment::monomial(f.one(), 5);
        assert_eq!(t5.w_r(r), Valuation::Finite(r * 5));
        let pt = LaurentFragment::monomial(f.from_int(5), -1);
        assert_eq!(pt.w_r(r), Valuation::Finite(q64(1, 1) - r));
        assert_eq!(LaurentFragment::zero(f).w_r(r), Valuation::Infinity);
    }

    #[test]
    fn monomial_products_add_valuations() {
        let f = PiField::new(3).unwrap();
        let a = LaurentFragment::from_terms(f, [(-2, f.from_int(9)), (3, f.pi())]);
        let b = LaurentFragment::from_terms(f, [(1, f.from_int(3)), (-4, f.from_int(27))]);
        for r in [q64(1, 3), q64(1, 1), q64(5, 2)] {
            assert!(a.mul(&b).w_r(r) >= a.w_r(r) + b.w_r(r));
        }
    }
}
