//! The Weyl algebra acting on sections of a module, and the series that
//! makes Frobenius commute with the Fourier automorphism.

use crate::cohomology::apply_connection;
use crate::error::Result;
use crate::numeric::PiField;
use crate::series::{dwork_tail, exp_poly_with_tail, KPoly, TruncatedSeries};
use crate::sigma_nabla::SigmaNablaModule;

use super::operator::WeylOperator;

/// `a · v` where `x` multiplies and `∂` acts as `π^{-1}∇_{d/dx}`.
pub fn act(a: &WeylOperator, m: &SigmaNablaModule, v: &[KPoly]) -> Vec<KPoly> {
    let field = m.field();
    let max_j = a.terms().keys().map(|k| k.1).max().unwrap_or(0);
    let mut powers = vec![v.to_vec()];
    for _ in 0..max_j {
        let last = powers.last().expect("nonempty");
        powers.push(apply_connection(m, last));
    }
    let mut out = vec![KPoly::zero(field); m.rank()];
    for (&(i, j), c) in a.terms() {
        let s = c.mul_pi_pow(-(j as i64));
        for (o, comp) in out.iter_mut().zip(&powers[j]) {
            *o = o.add(&comp.scale(&s).mul_x_pow(i));
        }
    }
    out
}

/// `Σ c_i x^i = exp(−πx + πx^q)` to order `n`.
pub fn frobenius_commutation_series(field: PiField, q: u64, n: usize) -> Result<TruncatedSeries> {
    let pi = field.pi();
    let exponent = KPoly::monomial(pi.clone(), q as usize).sub(&KPoly::monomial(pi, 1));
    exp_poly_with_tail(&exponent, n, dwork_tail(field.p(), q, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{q64, Valuation};
    use crate::sigma_nabla::{make_dwork_module, DworkTwist};
    use crate::weyl::operator::{normal_form, weyl_mul, Gen};

    fn lx(p: u64) -> SigmaNablaModule {
        make_dwork_module(PiField::new(p).unwrap(), &DworkTwist::monomial(1, 1), p, 4).unwrap()
    }

    #[test]
    fn derivation_on_linear_twist() {
        let m = lx(3);
        let f = m.field();
        let e = vec![KPoly::constant(f.one())];
        // ∇e = −π e dx with this sign convention.
        assert_eq!(act(&WeylOperator::d(f), &m, &e), vec![KPoly::constant(f.from_int(-1))]);
        let v = vec![KPoly::from_ints(f, &[2, 1])];
        assert_eq!(act(&WeylOperator::x(f), &m, &v), vec![KPoly::from_ints(f, &[0, 2, 1])]);
    }

    #[test]
    fn commutator_acts_as_pi_inverse() {
        let m = make_dwork_module(PiField::new(5).unwrap(), &DworkTwist::new(&[0, 1, 3]), 5, 4).unwrap();
        let f = m.field();
        let comm = normal_form(f.one(), &[Gen::D, Gen::X]).sub(&normal_form(f.one(), &[Gen::X, Gen::D]));
        let v = vec![KPoly::from_ints(f, &[1, -1, 0, 2])];
        assert_eq!(act(&comm, &m, &v), vec![v[0].scale(&f.pi_pow(-1))]);
    }

    #[test]
    fn action_is_multiplicative() {
        let m = make_dwork_module(PiField::new(3).unwrap(), &DworkTwist::new(&[0, 0, 1]), 3, 4).unwrap();
        let f = m.field();
        let a = WeylOperator::from_terms(f, [((1, 2), f.one()), ((0, 1), f.pi())]);
        let b = WeylOperator::from_terms(f, [((2, 1), f.from_int(3)), ((1, 0), f.one())]);
        let v = vec![KPoly::from_ints(f, &[1, 2, 0, 1])];
        assert_eq!(act(&weyl_mul(&a, &b), &m, &v), act(&a, &m, &act(&b, &m, &v)));
    }

    #[test]
    fn frobenius_series_head_and_growth() {
        let f = PiField::new(3).unwrap();
        let s = frobenius_commutation_series(f, 3, 60).unwrap();
        assert!(s.coeff(0).is_one());
        assert_eq!(s.coeff(1), &(-&f.pi()));
        let slope = s.measured_slope(10, 60).unwrap();
        assert!(slope >= q64(2, 9) - q64(1, 20), "slope {}", slope);
        assert!(s.coeff(2).valuation() >= Valuation::int(0));
    }
}
