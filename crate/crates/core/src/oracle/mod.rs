//! Ground truth by enumeration: additive character sums in `Z[ζ_p]` and the
//! L-polynomials they determine.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::numeric::{CycloElem, FFElem, FiniteField, RingElem};
use crate::sigma_nabla::DworkTwist;

/// Default cap on the number of field elements enumerated for one sum.
pub const ENUMERATION_CAP: u128 = 10_000_000;

fn check_budget(p: u64, n: usize) -> Result<()> {
    let size = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > ENUMERATION_CAP {
        return Err(Error::EnumerationBudget { size, cap: ENUMERATION_CAP });
    }
    Ok(())
}

/// `Σ_{x ∈ F} ζ^{Tr(f(x))}` for `f` with coefficients in `F`.
pub fn char_sum_in(field: &FiniteField, coeffs: &[FFElem]) -> Result<CycloElem> {
    let p = field.p();
    let n = field.degree();
    check_budget(p, n)?;
    let raw: Vec<&[u64]> = coeffs.iter().map(|c| c.coeffs()).collect();
    let mut counts = vec![0u64; p as usize];
    let mut x = vec![0u64; n];
    let mut acc = vec![0u64; n];
    let mut tmp = vec![0u64; n];
    let total = field.order();
    for idx in 0..total {
        if idx > 0 {
            // Odometer increment in base p.
            for d in x.iter_mut() {
                *d += 1;
                if *d < p {
                    break;
                }
                *d = 0;
            }
        }
        acc.iter_mut().for_each(|a| *a = 0);
        for c in raw.iter().rev() {
            field.mul_raw(&acc, &x, &mut tmp);
            for i in 0..n {
                acc[i] = (tmp[i] + c[i]) % p;
            }
        }
        counts[field.trace_raw(&acc) as usize] += 1;
    }
    Ok(CycloElem::from_exponent_counts(p, counts.into_iter().map(BigInt::from).collect()))
}

/// `S_n(P) = Σ_{x ∈ F_{p^n}} ζ^{Tr(P(x))}` for an integer polynomial.
pub fn char_sum(twist: &DworkTwist, p: u64, n: usize) -> Result<CycloElem> {
    check_budget(p, n)?;
    let field = FiniteField::new(p, n)?;
    let coeffs: Vec<FFElem> = twist.coeffs().iter().map(|&c| field.from_int(c)).collect();
    char_sum_in(&field, &coeffs)
}

/// Sums over `F_{q^n}`, `q = p^k`, for a polynomial with coefficients in
/// `F_q`. The coefficients are carried into `F_{p^{kn}}` through the
/// least-index root of the modulus of `F_q`; any root gives the same sum.
pub fn char_sum_over(base: &FiniteField, coeffs: &[FFElem], n: usize) -> Result<CycloElem> {
    let p = base.p();
    let k = base.degree();
    check_budget(p, k * n)?;
    let big = FiniteField::new(p, k * n)?;
    let alpha = big
        .find_root(base.modulus())
        .ok_or_else(|| Error::DimensionMismatch("base field does not embed".into()))?;
    let mut alpha_pows = vec![big.one()];
    for i in 1..k {
        alpha_pows.push(big.mul(&alpha_pows[i - 1], &alpha));
    }
    let lifted: Vec<FFElem> = coeffs
        .iter()
        .map(|c| {
            let mut acc = big.zero();
            for (i, &ci) in c.coeffs().iter().enumerate() {
                if ci != 0 {
                    acc = big.add(&acc, &big.mul(&big.from_int(ci as i64), &alpha_pows[i]));
                }
            }
            acc
        })
        .collect();
    char_sum_in(&big, &lifted)
}

/// The values `S_1, …, S_D` for one polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct SumSeries {
    pub p: u64,
    /// Size `q` of the field the sums start from.
    pub q: u64,
    pub label: String,
    pub values: Vec<CycloElem>,
}

impl SumSeries {
    pub fn for_twist(twist: &DworkTwist, p: u64, d: usize) -> Result<Self> {
        let values = (1..=d).map(|n| char_sum(twist, p, n)).collect::<Result<Vec<_>>>()?;
        Ok(SumSeries { p, q: p, label: twist.label(), values })
    }

    pub fn for_coeffs_over(base: &FiniteField, coeffs: &[FFElem], d: usize, label: &str) -> Result<Self> {
        let values = (1..=d).map(|n| char_sum_over(base, coeffs, n)).collect::<Result<Vec<_>>>()?;
        Ok(SumSeries { p: base.p(), q: base.order() as u64, label: label.into(), values })
    }

    /// Termwise sum (direct sum of the underlying modules).
    pub fn add(&self, o: &SumSeries) -> SumSeries {
        let n = self.values.len().min(o.values.len());
        SumSeries {
            p: self.p,
            q: self.q,
            label: format!("{} (+) {}", self.label, o.label),
            values: (0..n).map(|i| &self.values[i] + &o.values[i]).collect(),
        }
    }
}

/// Coefficients of `exp(Σ_{n ≤ D} S_n t^n / n)` up to `t^D`, by the exact
/// recurrence `k·a_k = Σ_{n=1}^{k} S_n a_{k−n}`.
pub fn exp_of_sums(values: &[CycloElem]) -> Result<Vec<CycloElem>> {
    let p = values.first().map(|v| v.p()).ok_or(Error::DimensionMismatch("no sums".into()))?;
    let mut a = vec![CycloElem::from_int(p, 1)];
    for k in 1..=values.len() {
        let mut acc = CycloElem::zero(p);
        for n in 1..=k {
            acc = &acc + &(&values[n - 1] * &a[k - n]);
        }
        let ak = acc
            .div_exact_int(&BigInt::from(k))
            .ok_or(Error::InconsistentSums { degree: k, order: k })?;
        a.push(ak);
    }
    Ok(a)
}

/// Power sums `Σ α^n`, `n = 1..=count`, of the inverse roots of
/// `Σ c_k t^k` with `c_0 = 1`:
/// `s_n = −n c_n − Σ_{k=1}^{n−1} c_k s_{n−k}`.
pub fn power_sums<T: RingElem>(coeffs: &[T], count: usize) -> Vec<T> {
    let like = &coeffs[0];
    let c = |k: usize| coeffs.get(k).cloned().unwrap_or_else(|| like.zero_like());
    let mut s: Vec<T> = Vec::with_capacity(count);
    for n in 1..=count {
        let mut acc = c(n).mul(&like.from_i64_like(n as i64)).neg();
        for k in 1..n {
            acc = acc.sub(&c(k).mul(&s[n - k - 1]));
        }
        s.push(acc);
    }
    s
}

/// Exact L-polynomial split by cohomological degree:
/// `L(t) = det(1 − Ft | H¹_c) / det(1 − Ft | H²_c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LPolynomial {
    pub p: u64,
    pub q: u64,
    /// `det(1 − Ft | H¹_c)`, constant term 1.
    pub h1: Vec<CycloElem>,
    /// `det(1 − Ft | H²_c)`, constant term 1.
    pub h2: Vec<CycloElem>,
    /// Orders `n` at which the over-determined identities were checked.
    pub checked_orders: usize,
}

impl LPolynomial {
    pub fn degree(&self) -> usize {
        self.h1.len() - 1
    }

    /// Product (direct sum of the underlying modules).
    pub fn mul(&self, o: &LPolynomial) -> LPolynomial {
        LPolynomial {
            p: self.p,
            q: self.q,
            h1: poly_mul(&self.h1, &o.h1),
            h2: poly_mul(&self.h2, &o.h2),
            checked_orders: self.checked_orders.min(o.checked_orders),
        }
    }
}

pub fn poly_mul(a: &[CycloElem], b: &[CycloElem]) -> Vec<CycloElem> {
    let p = a[0].p();
    let mut out = vec![CycloElem::zero(p); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// The unique polynomial of degree `expected_degree` whose log-derivative
/// reproduces the sums; the orders beyond the degree must give zero
/// coefficients, which is checked exactly.
pub fn l_poly_from_sums(values: &SumSeries, expected_degree: usize) -> Result<LPolynomial> {
    l_poly_with_h2(values, expected_degree, &[CycloElem::from_int(values.p, 1)])
}

/// As [`l_poly_from_sums`], after removing the known `H²_c` factor.
pub fn l_poly_with_h2(values: &SumSeries, expected_degree: usize, h2: &[CycloElem]) -> Result<LPolynomial> {
    let d = values.values.len();
    if d < expected_degree {
        return Err(Error::DimensionMismatch(format!(
            "{} sums cannot determine a polynomial of degree {}",
            d, expected_degree
        )));
    }
    let h2_sums = power_sums(h2, d);
    // S_n = −Σα^n + Σβ^n, so the H¹ part sees S_n − Σβ^n.
    let h1_sums: Vec<CycloElem> = values.values.iter().zip(&h2_sums).map(|(s, b)| s - b).collect();
    let a = exp_of_sums(&h1_sums).map_err(|e| match e {
        Error::InconsistentSums { order, .. } => Error::InconsistentSums { degree: expected_degree, order },
        other => other,
    })?;
    for (k, ak) in a.iter().enumerate().skip(expected_degree + 1) {
        if !ak.is_zero() {
            return Err(Error::InconsistentSums { degree: expected_degree, order: k });
        }
    }
    if expected_degree > 0 && a[expected_degree].is_zero() {
        return Err(Error::InconsistentSums { degree: expected_degree, order: expected_degree });
    }
    Ok(LPolynomial {
        p: values.p,
        q: values.q,
        h1: a[..=expected_degree].to_vec(),
        h2: h2.to_vec(),
        checked_orders: d,
    })
}

/// Oracle L-polynomial of `⊕ L_{P_j}` over `F_p`: trivial summands
/// contribute `1 − pt` to `H²_c`, the others a degree `deg P_j − 1` factor
/// to `H¹_c`. Sums are taken up to one order beyond each factor's degree.
pub fn oracle_l_poly(twists: &[DworkTwist], p: u64) -> Result<LPolynomial> {
    let one = CycloElem::from_int(p, 1);
    let mut acc = LPolynomial { p, q: p, h1: vec![one.clone()], h2: vec![one.clone()], checked_orders: usize::MAX };
    for t in twists {
        let part = if t.is_trivial() {
            let h2 = vec![one.clone(), CycloElem::from_int(p, -(p as i64))];
            let sums = SumSeries::for_twist(t, p, 2)?;
            l_poly_with_h2(&sums, 0, &h2)?
        } else {
            let deg = t.degree() - 1;
            let sums = SumSeries::for_twist(t, p, deg + 1)?;
            l_poly_from_sums(&sums, deg)?
        };
        acc = acc.mul(&part);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: u64, v: &[i64]) -> CycloElem {
        CycloElem::from_coords(p, v.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
    }

    #[test]
    fn gauss_sums_for_three() {
        let x2 = DworkTwist::monomial(1, 2);
        assert_eq!(char_sum(&x2, 3, 1).unwrap(), c(3, &[1, 2]));
        assert_eq!(char_sum(&x2, 3, 2).unwrap(), CycloElem::from_int(3, 3));
        assert_eq!(char_sum(&DworkTwist::zero(), 5, 2).unwrap(), CycloElem::from_int(5, 25));
    }

    #[test]
    fn l_poly_gauss_case() {
        let x2 = DworkTwist::monomial(1, 2);
        let sums = SumSeries::for_twist(&x2, 3, 3).unwrap();
        let l = l_poly_from_sums(&sums, 1).unwrap();
        assert_eq!(l.h1, vec![CycloElem::from_int(3, 1), c(3, &[1, 2])]);
        assert!(matches!(l_poly_from_sums(&sums, 2), Err(Error::InconsistentSums { .. })));
    }

    #[test]
    fn zero_sums_give_one() {
        let sums = SumSeries { p: 5, q: 5, label: "0".into(), values: vec![CycloElem::zero(5); 3] };
        let l = l_poly_from_sums(&sums, 0).unwrap();
        assert_eq!(l.h1, vec![CycloElem::from_int(5, 1)]);
    }

    #[test]
    fn cubic_over_five_has_degree_two() {
        let t = DworkTwist::new(&[0, 1, 0, 1]);
        let sums = SumSeries::for_twist(&t, 5, 4).unwrap();
        let l = l_poly_from_sums(&sums, 2).unwrap();
        assert_eq!(l.degree(), 2);
        assert_eq!(l.checked_orders, 4);
    }

    #[test]
    fn trivial_twist_needs_h2() {
        let l = oracle_l_poly(&[DworkTwist::zero()], 3).unwrap();
        assert_eq!(l.degree(), 0);
        assert_eq!(l.h2[1], CycloElem::from_int(3, -3));
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            char_sum(&DworkTwist::monomial(1, 2), 3, 20),
            Err(Error::EnumerationBudget { .. })
        ));
    }

    #[test]
    fn extension_sums_agree_with_prime_field_sums() {
        // Coefficients from F_p lifted through F_25 give the same sums as
        // the direct computation over F_{5^{2n}}.
        let base = FiniteField::new(5, 2).unwrap();
        let coeffs = vec![base.zero(), base.from_int(1), base.zero(), base.from_int(1)];
        let lifted = char_sum_over(&base, &coeffs, 1).unwrap();
        let direct = char_sum(&DworkTwist::new(&[0, 1, 0, 1]), 5, 2).unwrap();
        assert_eq!(lifted, direct);
    }

    #[test]
    fn power_sums_newton() {
        // (1 − 2t)(1 − 3t) = 1 − 5t + 6t²: power sums 5, 13, 35.
        let coeffs = vec![CycloElem::from_int(3, 1), CycloElem::from_int(3, -5), CycloElem::from_int(3, 6)];
        let s = power_sums(&coeffs, 3);
        assert_eq!(s, vec![CycloElem::from_int(3, 5), CycloElem::from_int(3, 13), CycloElem::from_int(3, 35)]);
    }
}
