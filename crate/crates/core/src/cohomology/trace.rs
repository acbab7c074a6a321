//! Compactly supported cohomology through duality, and the comparison of
//! Frobenius traces with the enumerated character sums.

use super::charpoly::{dual_poly, CharPoly, Coeffs};
use super::frobenius::{frobenius_on_h1, FrobeniusOnH1};
use super::reduce::dominant_regime;
use crate::error::{Error, Result};
use crate::numeric::{embed_cyclo, CycloElem, PiAdicApprox, Valuation, Q64};
use crate::oracle::{char_sum, oracle_l_poly, LPolynomial};
use crate::sigma_nabla::{dual, SigmaNablaModule};

/// `det(1 − Ft | H¹_c(M))` as the polynomial with inverse roots `q/β`, `β`
/// running over the inverse roots on `H¹(M^∨)`.
pub fn h1c_via_duality(m: &SigmaNablaModule, precision: Q64) -> Result<CharPoly> {
    let md = dual(m)?;
    for x in [m, &md] {
        dominant_regime(x).map_err(|e| Error::HypothesisFailure(format!("{} for {}", e, x.label())))?;
    }
    let h = frobenius_on_h1(&md, precision)?;
    if h.dim == 0 {
        return Ok(h.charpoly);
    }
    dual_poly(&h.charpoly)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub n: usize,
    /// `Σ_x ζ^{Tr P(x)}` summed over the summands.
    pub oracle: CycloElem,
    /// `Σ_i (−1)^i Tr(F^n | H^i_c)`.
    pub cohomological: PiAdicApprox,
    pub discrepancy: Valuation,
}

#[derive(Debug, Clone)]
pub struct LefschetzReport {
    pub precision: Q64,
    pub records: Vec<TraceRecord>,
    pub oracle_l: LPolynomial,
    /// `v(a_k − c_k)` between the oracle `H¹_c` polynomial and the
    /// cohomological one; empty when the degrees differ.
    pub coefficient_discrepancies: Vec<Valuation>,
    pub degree_match: bool,
    pub cohomology: FrobeniusOnH1,
}

impl LefschetzReport {
    pub fn first_failure(&self) -> Option<usize> {
        let bar = Valuation::Finite(self.precision);
        self.records.iter().find(|r| r.discrepancy < bar).map(|r| r.n)
    }

    pub fn pass(&self) -> bool {
        let bar = Valuation::Finite(self.precision);
        self.degree_match
            && self.first_failure().is_none()
            && self.coefficient_discrepancies.iter().all(|v| *v >= bar)
    }
}

fn approx_traces(cp: &CharPoly, count: usize) -> Vec<PiAdicApprox> {
    match cp.traces(count) {
        Coeffs::Approx(v) => v,
        Coeffs::Exact(_) => unreachable!("cohomological polynomials are approximate"),
    }
}

/// Compare enumerated sums with Frobenius traces for `n ≤ n_max`, and the
/// oracle L-polynomial with `det(1 − Ft | H¹)` coefficientwise. Both must
/// agree to `precision` (`v_p` units) for the report to pass.
pub fn lefschetz_verify(m: &SigmaNablaModule, n_max: usize, precision: Q64) -> Result<LefschetzReport> {
    let p = m.p();
    if m.q() != p {
        return Err(Error::HypothesisFailure(format!("trace comparison needs q = p, got q = {}", m.q())));
    }
    let twists = m
        .summands()
        .ok_or_else(|| Error::HypothesisFailure("enumeration needs a sum of Dwork twists".into()))?
        .to_vec();
    let coh = frobenius_on_h1(m, precision)?;
    let h1 = approx_traces(&coh.charpoly, n_max);
    let h2 = approx_traces(&coh.h2c, n_max);
    let zero = PiAdicApprox::exact(m.field().zero());
    let mut records = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut s = CycloElem::zero(p);
        for t in &twists {
            s = &s + &char_sum(t, p, n)?;
        }
        let a = h2.get(n - 1).unwrap_or(&zero);
        let b = h1.get(n - 1).unwrap_or(&zero);
        let coh_n = a.sub(b);
        let e = embed_cyclo(&s, precision + Q64::from_integer(2))?;
        let discrepancy = coh_n.discrepancy(&e);
        records.push(TraceRecord { n, oracle: s, cohomological: coh_n, discrepancy });
    }
    let oracle_l = oracle_l_poly(&twists, p)?;
    let degree_match = oracle_l.degree() == coh.dim;
    let mut coefficient_discrepancies = Vec::new();
    if degree_match {
        let c = coh.charpoly.approx_coeffs(precision)?;
        for (a, x) in oracle_l.h1.iter().zip(&c) {
            coefficient_discrepancies.push(x.discrepancy(&embed_cyclo(a, precision + Q64::from_integer(2))?));
        }
    }
    Ok(LefschetzReport { precision, records, oracle_l, coefficient_discrepancies, degree_match, cohomology: coh })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{default_truncation, newton_slopes};
    use crate::numeric::{q64, PiField};
    use crate::sigma_nabla::{make_dwork_module, trivial_module, DworkTwist};

    fn gauss(p: u64, sign: i64) -> SigmaNablaModule {
        let f = PiField::new(p).unwrap();
        make_dwork_module(f, &DworkTwist::monomial(sign, 2), p, default_truncation(2, p)).unwrap()
    }

    #[test]
    fn gauss_traces_match() {
        let r = lefschetz_verify(&gauss(3, 1), 3, q64(8, 1)).unwrap();
        assert!(r.pass(), "{:?}", r.records);
        assert_eq!(r.records[1].oracle, CycloElem::from_int(3, 3));
    }

    #[test]
    fn trivial_module_counts_points() {
        let f = PiField::new(3).unwrap();
        let r = lefschetz_verify(&trivial_module(f, 3, 10).unwrap(), 3, q64(8, 1)).unwrap();
        assert!(r.pass());
        assert_eq!(r.records[2].oracle, CycloElem::from_int(3, 27));
    }

    #[test]
    fn duality_for_gauss_case() {
        // H¹_c ≅ H¹ here, so the dual construction must reproduce H¹.
        let m = gauss(3, 1);
        let c = h1c_via_duality(&m, q64(8, 1)).unwrap();
        let h = frobenius_on_h1(&m, q64(8, 1)).unwrap();
        let a = c.approx_coeffs(q64(8, 1)).unwrap();
        let b = h.charpoly.approx_coeffs(q64(8, 1)).unwrap();
        assert!(a[1].discrepancy(&b[1]) >= Valuation::int(8));
        assert_eq!(newton_slopes(&c).unwrap(), vec![q64(1, 2)]);
    }

    #[test]
    fn duality_rejects_constant_module() {
        let f = PiField::new(3).unwrap();
        assert!(matches!(
            h1c_via_duality(&trivial_module(f, 3, 10).unwrap(), q64(4, 1)),
            Err(Error::HypothesisFailure(_))
        ));
    }
}
