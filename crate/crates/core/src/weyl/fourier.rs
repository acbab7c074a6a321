//! The naive geometric Fourier transform, one fibre at a time, and the
//! telescoping identity showing that every class of the two-variable
//! cokernel has a representative constant in the dual variable.

use std::fmt;

use crate::cohomology::{
    apply_connection, dominant_regime, frobenius_on_h1, identify, weight_check, CharPoly, WeightVerdict,
};
use crate::error::{Error, Result};
use crate::numeric::{FFElem, FiniteField, PiFieldElem, Valuation, Q64};
use crate::oracle::{l_poly_from_sums, oracle_l_poly, SumSeries};
use crate::series::KPoly;
use crate::sigma_nabla::{make_dwork_module, tensor, DworkTwist, SigmaNablaModule};

/// Where the dual variable is specialised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberParam {
    /// A point of `F_p`, stored reduced.
    Prime(u64),
    /// A point of `F_{p^k}` given by its coordinates in the field's basis.
    Extension { degree: usize, coeffs: Vec<u64> },
}

impl fmt::Display for FiberParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberParam::Prime(a) => write!(f, "{}", a),
            FiberParam::Extension { degree, coeffs } => {
                let c: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                write!(f, "F_p^{}[{}]", degree, c.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberSource {
    /// Frobenius on `H¹` by degree reduction, identified with the oracle
    /// polynomial when they agree.
    Cohomology,
    /// Enumerated character sums only.
    Oracle,
}

#[derive(Debug, Clone)]
pub struct FourierFiberReport {
    pub a: FiberParam,
    pub q: u64,
    pub dim: usize,
    pub charpoly: CharPoly,
    /// `Σ (deg − 1)` over the twisted summands, when known.
    pub predicted_dim: Option<usize>,
    /// Whether `charpoly` was promoted to an exact polynomial.
    pub identified: bool,
    /// Weight-1 check of the exact polynomial.
    pub weight: Option<WeightVerdict>,
    pub source: FiberSource,
}

fn predicted(twists: &[DworkTwist]) -> usize {
    twists.iter().map(|t| t.degree().saturating_sub(1)).sum()
}

/// `H¹(M ⊗ L_{ax})` with its Frobenius for `a ∈ F_p`, to `precision`
/// (`v_p` units).
///
/// For sums of Dwork twists over `F_p` the result is matched against the
/// oracle L-polynomial at the requested precision and, once exact, checked
/// for weight 1 at relative tolerance `tol`.
pub fn fourier_fiber(m: &SigmaNablaModule, a: i64, precision: Q64, tol: f64) -> Result<FourierFiberReport> {
    let p = m.p();
    let a = a.rem_euclid(p as i64);
    let line = make_dwork_module(m.field(), &DworkTwist::monomial(a, 1), m.q(), m.trunc_order())?;
    let twisted = tensor(m, &line)?;
    let h = frobenius_on_h1(&twisted, precision)?;
    let mut report = FourierFiberReport {
        a: FiberParam::Prime(a as u64),
        q: m.q(),
        dim: h.dim,
        charpoly: h.charpoly,
        predicted_dim: twisted.summands().map(predicted),
        identified: false,
        weight: None,
        source: FiberSource::Cohomology,
    };
    if let (Some(twists), true) = (twisted.summands(), m.q() == p) {
        let oracle = oracle_l_poly(twists, p)?;
        if let Some(exact) = identify(&report.charpoly, &oracle.h1, precision)? {
            report.weight = Some(weight_check(&exact, Q64::from_integer(1), tol)?);
            report.charpoly = exact;
            report.identified = true;
        }
    }
    Ok(report)
}

/// The fibre of `⊕ L_{P_j}` at a point `a` of an extension `F_{p^k}`,
/// read off from character sums over `F_{p^k}` and its extensions.
///
/// Frobenius fibres at such points would need unramified extensions of the
/// coefficient field, so this path is oracle-only.
pub fn fourier_fiber_over(
    twists: &[DworkTwist],
    base: &FiniteField,
    a: &FFElem,
    tol: f64,
) -> Result<FourierFiberReport> {
    let p = base.p();
    let q = base.order() as u64;
    let mut h1 = vec![crate::numeric::CycloElem::from_int(p, 1)];
    let mut degrees = Vec::with_capacity(twists.len());
    for t in twists {
        let mut coeffs: Vec<FFElem> = t.coeffs().iter().map(|&c| base.from_int(c)).collect();
        if coeffs.len() < 2 {
            coeffs.resize(2, base.zero());
        }
        coeffs[1] = base.add(&coeffs[1], a);
        let deg = coeffs.iter().rposition(|c| !c.coeffs().iter().all(|&x| x == 0)).unwrap_or(0);
        if deg == 0 {
            return Err(Error::RegimeViolation(format!("fibre of {} at {:?} is untwisted", t.label(), a)));
        }
        if (deg as u64).is_multiple_of(p) {
            return Err(Error::RegimeViolation(format!("p = {} divides the twisted degree {}", p, deg)));
        }
        let sums = SumSeries::for_coeffs_over(base, &coeffs, deg, &t.label())?;
        let l = l_poly_from_sums(&sums, deg - 1)?;
        h1 = crate::oracle::poly_mul(&h1, &l.h1);
        degrees.push(deg);
    }
    let charpoly = CharPoly::exact(q, h1);
    let weight = weight_check(&charpoly, Q64::from_integer(1), tol)?;
    Ok(FourierFiberReport {
        a: FiberParam::Extension { degree: base.degree(), coeffs: a.coeffs().to_vec() },
        q,
        dim: charpoly.degree(),
        charpoly,
        predicted_dim: Some(degrees.iter().map(|d| d - 1).sum()),
        identified: true,
        weight: Some(weight),
        source: FiberSource::Oracle,
    })
}

/// Outcome of the telescoping check.
#[derive(Debug, Clone)]
pub struct SurjectivityProbe {
    pub order: usize,
    /// `w_i` for `i < order`, each a vector of components.
    pub w: Vec<Vec<KPoly>>,
    /// The `s⁰` term `D w₀` written through `D^{j+1} v_{j+1}` directly.
    pub correction: Vec<KPoly>,
    /// `v₀ − correction`: the `s`-constant representative of the class.
    pub representative: Vec<KPoly>,
    /// `∇_x w − (v − v₀) − correction` at each order.
    pub residual: Vec<Vec<KPoly>>,
    pub residual_valuation: Valuation,
    pub bound: Valuation,
}

impl SurjectivityProbe {
    pub fn pass(&self) -> bool {
        self.residual_valuation >= self.bound
    }
}

fn add_scaled(acc: &mut [KPoly], v: &[KPoly], s: &PiFieldElem) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a = a.add(&x.scale(s));
    }
}

/// Check the identity behind `coker ∇_x` on `M ⊗ L_{sx}` for the sample
/// `v = Σ_{i < order} v_i s^i`.
///
/// On this module `∇_x = D + c·s` with `c = −π`, and
/// `w = Σ_i s^i Σ_j (−1)^j c^{−(j+1)} D^j v_{i+j+1}` satisfies
/// `∇_x w = (v − v₀) + Σ_j (−1)^j c^{−(j+1)} D^{j+1} v_{j+1}` modulo
/// `s^order`. The residual is measured by the Gauss norm on the closed unit
/// disc and compared with `bound`.
pub fn surjectivity_probe(
    m: &SigmaNablaModule,
    samples: &[Vec<KPoly>],
    order: usize,
    bound: Q64,
) -> Result<SurjectivityProbe> {
    if m.connection_degree().is_some() {
        dominant_regime(m)?;
    }
    let field = m.field();
    let r = m.rank();
    if let Some(bad) = samples.iter().find(|v| v.len() != r) {
        return Err(Error::DimensionMismatch(format!("sample of length {} for rank {}", bad.len(), r)));
    }
    let zero = vec![KPoly::zero(field); r];
    let v: Vec<Vec<KPoly>> = (0..order).map(|i| samples.get(i).cloned().unwrap_or_else(|| zero.clone())).collect();
    // dpow[k][j] = D^j v_k, with j ≤ k.
    let dpow: Vec<Vec<Vec<KPoly>>> = v
        .iter()
        .enumerate()
        .map(|(k, vk)| {
            let mut out = vec![vk.clone()];
            for _ in 0..k {
                let next = apply_connection(m, out.last().expect("nonempty"));
                out.push(next);
            }
            out
        })
        .collect();
    let c = -&field.pi();
    let cinv = c.inv()?;
    // coef[j] = (−1)^j c^{−(j+1)}
    let coef: Vec<PiFieldElem> = (0..order)
        .map(|j| {
            let t = cinv.pow(j as u64 + 1);
            if j % 2 == 0 {
                t
            } else {
                -&t
            }
        })
        .collect();
    let w: Vec<Vec<KPoly>> = (0..order)
        .map(|i| {
            let mut acc = zero.clone();
            for j in 0..order.saturating_sub(i + 1) {
                add_scaled(&mut acc, &dpow[i + j + 1][j], &coef[j]);
            }
            acc
        })
        .collect();
    let mut correction = zero.clone();
    for j in 0..order.saturating_sub(1) {
        add_scaled(&mut correction, &dpow[j + 1][j + 1], &coef[j]);
    }
    let mut residual = Vec::with_capacity(order);
    for i in 0..order {
        let mut lhs = apply_connection(m, &w[i]);
        if i > 0 {
            add_scaled(&mut lhs, &w[i - 1], &c);
        }
        let target = if i == 0 { &correction } else { &v[i] };
        residual.push(lhs.iter().zip(target).map(|(a, b)| a.sub(b)).collect::<Vec<_>>());
    }
    let residual_valuation = residual
        .iter()
        .flatten()
        .map(|x| x.gauss_valuation(Q64::from_integer(0)))
        .fold(Valuation::Infinity, Valuation::min);
    let representative = v
        .first()
        .map(|v0| v0.iter().zip(&correction).map(|(a, b)| a.sub(b)).collect())
        .unwrap_or_else(|| zero.clone());
    Ok(SurjectivityProbe {
        order,
        w,
        correction,
        representative,
        residual,
        residual_valuation,
        bound: Valuation::Finite(bound),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{default_truncation, Coeffs};
    use crate::numeric::{q64, PiField};
    use crate::oracle::char_sum;
    use crate::sigma_nabla::trivial_module;

    #[test]
    fn quadratic_fibres_match_enumeration() {
        let f = PiField::new(3).unwrap();
        let m = make_dwork_module(f, &DworkTwist::monomial(1, 2), 3, default_truncation(2, 3)).unwrap();
        for a in 0..3 {
            let r = fourier_fiber(&m, a, q64(8, 1), 1e-9).unwrap();
            assert_eq!(r.dim, 1);
            assert!(r.identified);
            let s = char_sum(&DworkTwist::new(&[0, a, 1]), 3, 1).unwrap();
            let Coeffs::Exact(c) = &r.charpoly.coeffs else { panic!() };
            assert_eq!(c[1], s);
            assert!(r.weight.unwrap().pass);
        }
    }

    #[test]
    fn trivial_module_fibres_vanish() {
        let f = PiField::new(5).unwrap();
        let m = trivial_module(f, 5, 50).unwrap();
        for a in [0, 2] {
            assert_eq!(fourier_fiber(&m, a, q64(6, 1), 1e-9).unwrap().dim, 0);
        }
    }

    #[test]
    fn extension_fibre_has_full_rank() {
        let base = FiniteField::new(5, 2).unwrap();
        let a = base.generator();
        let r = fourier_fiber_over(&[DworkTwist::monomial(1, 3)], &base, &a, 1e-6).unwrap();
        assert_eq!((r.dim, r.q), (2, 25));
        assert!(r.weight.unwrap().pass);
    }

    #[test]
    fn probe_constant_sample_is_trivial() {
        let f = PiField::new(3).unwrap();
        let m = make_dwork_module(f, &DworkTwist::monomial(1, 1), 3, 10).unwrap();
        let v0 = vec![KPoly::from_ints(f, &[1, 2])];
        let r = surjectivity_probe(&m, std::slice::from_ref(&v0), 4, q64(20, 1)).unwrap();
        assert!(r.w.iter().flatten().all(|x| x.is_zero()));
        assert_eq!(r.representative, v0);
        assert!(r.residual_valuation.is_infinite());
    }

    #[test]
    fn probe_linear_in_s() {
        let f = PiField::new(5).unwrap();
        let m = make_dwork_module(f, &DworkTwist::monomial(1, 1), 5, 10).unwrap();
        let e = KPoly::constant(f.one());
        let r = surjectivity_probe(&m, &[vec![KPoly::zero(f)], vec![e.clone()]], 2, q64(20, 1)).unwrap();
        // c = −π here, so w₀ = −π^{-1}e and D w₀ = e.
        assert_eq!(r.w[0], vec![e.scale(&-&f.pi_pow(-1))]);
        assert_eq!(r.correction, vec![e.clone()]);
        assert!(r.pass());
    }

    #[test]
    fn probe_rejects_bad_rank() {
        let f = PiField::new(3).unwrap();
        let m = make_dwork_module(f, &DworkTwist::monomial(1, 2), 3, 10).unwrap();
        let v = vec![KPoly::zero(f), KPoly::zero(f)];
        assert!(surjectivity_probe(&m, &[v], 3, q64(1, 1)).is_err());
    }
}
