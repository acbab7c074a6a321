//! Frobenius fibres at Teichmüller points.

use num_traits::Zero;

use super::module::SigmaNablaModule;
use crate::error::{Error, Result};
use crate::numeric::valuation::ceil_q64;
use crate::numeric::{teichmuller_lift, FFElem, FiniteField, Mat, PiAdicApprox, Valuation, Q64};

/// Matrix of `F_x = Φ(ω)·Φ(ω^q)·…·Φ(ω^{q^{n−1}})` at the Teichmüller lift
/// `ω` of a point of `F_{q^n}`, each factor obtained by summing the stored
/// series at `ω`.
///
/// Only points of the prime field are served (there `ω ∈ Z_p` and all the
/// factors coincide); other points would need unramified extensions of `K`.
pub fn fiber_frobenius(
    m: &SigmaNablaModule,
    field: &FiniteField,
    point: &FFElem,
    precision: Q64,
) -> Result<Mat<PiAdicApprox>> {
    let p = m.p();
    if m.q() != p {
        return Err(Error::RegimeViolation(format!("fibres need q = p, got q = {}", m.q())));
    }
    if field.p() != p {
        return Err(Error::FieldMismatch(p, field.p()));
    }
    if !point.in_prime_field() {
        return Err(Error::UnsupportedPoint(format!(
            "{:?} is not in F_{}; its Teichmüller lift is not in K",
            point, p
        )));
    }
    let a = point.coeffs()[0];
    let digits = (ceil_q64(precision).max(1) + 1) as u32;
    let omega = teichmuller_lift(a, p, digits);
    let kf = m.field();
    let x = if omega.is_zero() {
        PiAdicApprox::exact(kf.zero())
    } else {
        PiAdicApprox::new(kf.from_bigint(omega), Valuation::int(digits as i64))
    };
    let phi = m.frobenius();
    let mut entries = Vec::with_capacity(m.rank() * m.rank());
    for s in phi.entries() {
        let v = s.eval(&x, precision);
        if v.known_mod() < Valuation::Finite(precision) {
            return Err(Error::InsufficientTruncation {
                achieved: v.known_mod(),
                requested: Valuation::Finite(precision),
            });
        }
        entries.push(v);
    }
    let r = m.rank();
    let single = Mat::from_fn(r, r, |i, j| entries[i * r + j].clone());
    let mut acc = single.clone();
    for _ in 1..field.degree() {
        acc = acc.mul(&single);
    }
    Ok(acc)
}
