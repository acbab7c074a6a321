//! The compatibility identity between connection and Frobenius.

use super::module::SigmaNablaModule;
use crate::numeric::Valuation;
use crate::series::KPoly;

/// Largest failing coefficient of the residual, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualEntry {
    pub row: usize,
    pub col: usize,
    pub degree: usize,
    pub valuation: Valuation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityReport {
    /// Residual coefficients were checked in degrees `0..checked_below`.
    pub checked_below: usize,
    /// The nonzero residual coefficient of smallest valuation.
    pub worst: Option<ResidualEntry>,
}

impl CompatibilityReport {
    pub fn is_zero(&self) -> bool {
        self.worst.is_none()
    }

    /// How far the worst coefficient falls short of `threshold`; zero when
    /// the residual vanishes.
    pub fn deficit(&self, threshold: Valuation) -> Valuation {
        match &self.worst {
            None => Valuation::int(0),
            Some(e) => match (threshold, e.valuation) {
                (Valuation::Finite(t), Valuation::Finite(v)) if v < t => Valuation::Finite(t - v),
                (Valuation::Infinity, _) => Valuation::Infinity,
                _ => Valuation::int(0),
            },
        }
    }
}

/// Residual `Φ′ + NΦ − q·x^{q−1}·Φ·N(x^q)` of the commuting square, in every
/// degree below the truncation order (where all inputs are stored).
pub fn check_compatibility(m: &SigmaNablaModule) -> CompatibilityReport {
    let r = m.rank();
    let field = m.field();
    let n = m.trunc_order();
    let q = m.q() as usize;
    let phi: Vec<KPoly> = m.frobenius().entries().iter().map(|s| s.to_poly()).collect();
    let conn = m.connection();
    let conn_q: Vec<KPoly> = conn.entries().iter().map(|c| c.substitute_power(q)).collect();
    let qx = KPoly::monomial(field.from_int(q as i64), q - 1);
    let mut worst: Option<ResidualEntry> = None;
    for i in 0..r {
        for j in 0..r {
            let mut res = phi[i * r + j].derivative();
            for k in 0..r {
                let a = conn.get(i, k);
                if !a.is_zero() {
                    res = res.add(&a.mul(&phi[k * r + j]));
                }
                let b = &conn_q[k * r + j];
                if !b.is_zero() {
                    res = res.sub(&qx.mul(&b.mul(&phi[i * r + k])));
                }
            }
            for (deg, c) in res.coeffs().iter().enumerate().take(n) {
                if c.is_zero() {
                    continue;
                }
                let v = c.valuation();
                if worst.as_ref().is_none_or(|w| v < w.valuation) {
                    worst = Some(ResidualEntry { row: i, col: j, degree: deg, valuation: v });
                }
            }
        }
    }
    CompatibilityReport { checked_below: n, worst }
}

