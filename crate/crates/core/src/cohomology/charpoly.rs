//! Characteristic polynomials `det(1 − Ft)`, their Newton polygons and
//! archimedean weights.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{embed_cyclo, q64, CycloElem, PiAdicApprox, PiField, RingElem, Valuation, Q64};
use crate::oracle::power_sums;

#[derive(Debug, Clone, PartialEq)]
pub enum Coeffs {
    Approx(Vec<PiAdicApprox>),
    Exact(Vec<CycloElem>),
}

/// `det(1 − Ft) = Σ c_k t^k` over a field with `q` elements, `c_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly {
    pub q: u64,
    /// Cumulative Tate twist already applied to the coefficients.
    pub tate_twist: i64,
    pub coeffs: Coeffs,
}

fn log_p(p: u64, q: u64) -> i64 {
    let mut k = 0;
    let mut x = q;
    while x > 1 {
        x /= p;
        k += 1;
    }
    k
}

impl CharPoly {
    pub fn approx(q: u64, coeffs: Vec<PiAdicApprox>) -> Self {
        CharPoly { q, tate_twist: 0, coeffs: Coeffs::Approx(coeffs) }
    }

    pub fn exact(q: u64, coeffs: Vec<CycloElem>) -> Self {
        CharPoly { q, tate_twist: 0, coeffs: Coeffs::Exact(coeffs) }
    }

    /// The constant polynomial 1 over `Q(π)`.
    pub fn one(field: PiField, q: u64) -> Self {
        Self::approx(q, vec![PiAdicApprox::exact(field.one())])
    }

    /// `(1 − qt)^r`, the compactly supported top cohomology of `r` copies of
    /// the constant module.
    pub fn top_degree(field: PiField, q: u64, r: usize) -> Self {
        let mut c = vec![PiAdicApprox::exact(field.one())];
        let factor = PiAdicApprox::exact(field.from_int(-(q as i64)));
        for _ in 0..r {
            let mut next = c.clone();
            next.push(PiAdicApprox::exact(field.zero()));
            for k in 0..c.len() {
                next[k + 1] = next[k + 1].add(&c[k].mul(&factor));
            }
            c = next;
        }
        Self::approx(q, c)
    }

    pub fn degree(&self) -> usize {
        match &self.coeffs {
            Coeffs::Approx(c) => c.len() - 1,
            Coeffs::Exact(c) => c.len() - 1,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.coeffs, Coeffs::Exact(_))
    }

    pub fn p(&self) -> u64 {
        match &self.coeffs {
            Coeffs::Approx(c) => c[0].p(),
            Coeffs::Exact(c) => c[0].p(),
        }
    }

    /// Coefficients in `Q(π)`; exact polynomials are embedded to precision
    /// `m` (in `v_p` units).
    pub fn approx_coeffs(&self, m: Q64) -> Result<Vec<PiAdicApprox>> {
        match &self.coeffs {
            Coeffs::Approx(c) => Ok(c.clone()),
            Coeffs::Exact(c) => c.iter().map(|x| embed_cyclo(x, m)).collect(),
        }
    }

    /// Smallest `known_mod` over the coefficients, in `v_p` units.
    pub fn known_mod(&self) -> Valuation {
        match &self.coeffs {
            Coeffs::Approx(c) => c.iter().map(|x| x.known_mod()).fold(Valuation::Infinity, Valuation::min),
            Coeffs::Exact(_) => Valuation::Infinity,
        }
    }

    /// Multiply every inverse root by `q^i`.
    pub fn tate_twist(&self, i: i64) -> Result<CharPoly> {
        let coeffs = match &self.coeffs {
            Coeffs::Approx(c) => {
                let field = c[0].field();
                let qf = field.from_int(self.q as i64);
                Coeffs::Approx(
                    c.iter()
                        .enumerate()
                        .map(|(k, x)| Ok(x.mul_exact(&qf.powi(i * k as i64)?)))
                        .collect::<Result<_>>()?,
                )
            }
            Coeffs::Exact(c) => {
                if i < 0 {
                    return Err(Error::DimensionMismatch(
                        "negative twist leaves the cyclotomic integers".into(),
                    ));
                }
                let qb = BigInt::from(self.q);
                Coeffs::Exact(
                    c.iter().enumerate().map(|(k, x)| x.scale(&num_traits::pow(qb.clone(), i as usize * k))).collect(),
                )
            }
        };
        Ok(CharPoly { q: self.q, tate_twist: self.tate_twist + i, coeffs })
    }

    /// Product of characteristic polynomials (direct sum of modules).
    pub fn mul(&self, o: &CharPoly) -> Result<CharPoly> {
        if self.q != o.q {
            return Err(Error::NotPowerOfP { p: self.p(), q: o.q });
        }
        let coeffs = match (&self.coeffs, &o.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => Coeffs::Exact(convolve(a, b)),
            _ => {
                let m = self.known_mod().min(o.known_mod()).finite().unwrap_or(Q64::from_integer(64));
                Coeffs::Approx(convolve(&self.approx_coeffs(m)?, &o.approx_coeffs(m)?))
            }
        };
        Ok(CharPoly { q: self.q, tate_twist: 0, coeffs })
    }

    /// `Tr(F^n)` for `n = 1..=count`.
    pub fn traces(&self, count: usize) -> Coeffs {
        match &self.coeffs {
            Coeffs::Approx(c) => Coeffs::Approx(power_sums(c, count)),
            Coeffs::Exact(c) => Coeffs::Exact(power_sums(c, count)),
        }
    }

    /// Per-coefficient valuation information in `v_q` units.
    pub fn valuations(&self) -> Vec<CoeffValuation> {
        let k = Q64::from_integer(log_p(self.p(), self.q));
        let scale = |v: Valuation| match v {
            Valuation::Finite(x) => Valuation::Finite(x / k),
            Valuation::Infinity => Valuation::Infinity,
        };
        match &self.coeffs {
            Coeffs::Approx(c) => c
                .iter()
                .map(|x| match x.certified_valuation() {
                    Some(v) => CoeffValuation::Certified(scale(v)),
                    None => CoeffValuation::AtLeast(scale(x.known_mod())),
                })
                .collect(),
            Coeffs::Exact(c) => c.iter().map(|x| CoeffValuation::Certified(scale(x.valuation()))).collect(),
        }
    }
}

fn convolve<T: RingElem>(a: &[T], b: &[T]) -> Vec<T> {
    let like = &a[0];
    let mut out = vec![like.zero_like(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffValuation {
    Certified(Valuation),
    /// Only a lower bound is known.
    AtLeast(Valuation),
}

/// Slopes of the lower convex hull of `(k, v_q(c_k))`, one entry per unit
/// of horizontal length, in increasing order.
pub fn newton_slopes(cp: &CharPoly) -> Result<Vec<Q64>> {
    let vals = cp.valuations();
    let n = vals.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let pts: Vec<(usize, Q64)> = vals
        .iter()
        .enumerate()
        .filter_map(|(k, v)| match v {
            CoeffValuation::Certified(Valuation::Finite(x)) => Some((k, *x)),
            _ => None,
        })
        .collect();
    if pts.first().map(|p| p.0) != Some(0) {
        return Err(Error::UncertifiedVertex { index: 0 });
    }
    if pts.last().map(|p| p.0) != Some(n) {
        return Err(Error::UncertifiedVertex { index: n });
    }
    // Lower hull by monotone chain.
    let mut hull: Vec<(usize, Q64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let lhs = (y2 - y1) * Q64::from_integer((pt.0 - x1) as i64);
            let rhs = (pt.1 - y1) * Q64::from_integer((x2 - x1) as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let hull_at = |k: usize| -> Q64 {
        let w = hull.windows(2).find(|w| w[0].0 <= k && k <= w[1].0).expect("k inside hull range");
        let (x1, y1) = w[0];
        let (x2, y2) = w[1];
        y1 + (y2 - y1) * q64((k - x1) as i64, (x2 - x1) as i64)
    };
    // An uncertified coefficient must sit provably on or above the hull.
    for (k, v) in vals.iter().enumerate() {
        if let CoeffValuation::AtLeast(lb) = v {
            if *lb < Valuation::Finite(hull_at(k)) {
                return Err(Error::UncertifiedVertex { index: k });
            }
        }
    }
    let mut slopes = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let len = (w[1].0 - w[0].0) as i64;
        let s = (w[1].1 - w[0].1) / Q64::from_integer(len);
        slopes.extend(std::iter::repeat_n(s, len as usize));
    }
    Ok(slopes)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightVerdict {
    pub pass: bool,
    /// Largest `| |α| − q^{w/2} | / q^{w/2}` over roots and embeddings.
    pub worst_deviation: f64,
    /// `|α|` for every inverse root at every embedding, embedding-major.
    pub moduli: Vec<f64>,
}

/// Checks that every inverse root has absolute value `q^{w/2}` at every
/// complex embedding, to relative tolerance `tol`.
pub fn weight_check(cp: &CharPoly, w: Q64, tol: f64) -> Result<WeightVerdict> {
    let coeffs = match &cp.coeffs {
        Coeffs::Exact(c) => c,
        Coeffs::Approx(_) => {
            return Err(Error::HypothesisFailure("weight check needs an exact polynomial".into()))
        }
    };
    let target = (cp.q as f64).powf(*w.numer() as f64 / (2.0 * *w.denom() as f64));
    let embedded: Vec<Vec<Complex64>> = coeffs.iter().map(|c| c.complex_embeddings()).collect();
    let mut worst = 0.0f64;
    let mut moduli = Vec::new();
    for e in 0..embedded[0].len() {
        // Inverse roots of Σ c_k t^k are the roots of Σ c_k z^{n−k}.
        let monic: Vec<Complex64> = embedded.iter().map(|c| c[e]).collect();
        for root in polynomial_roots(&monic)? {
            let m = root.norm();
            moduli.push(m);
            worst = worst.max((m - target).abs() / target);
        }
    }
    Ok(WeightVerdict { pass: worst <= tol, worst_deviation: worst, moduli })
}

/// Roots of `a_0 z^n + a_1 z^{n−1} + … + a_n` by Aberth iteration.
pub fn polynomial_roots(a: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = a.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    if a[0] == Complex64::zero() {
        return Err(Error::DimensionMismatch("leading coefficient vanishes".into()));
    }
    let monic: Vec<Complex64> = a.iter().map(|c| c / a[0]).collect();
    if n == 1 {
        return Ok(vec![-monic[1]]);
    }
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut f = Complex64::one();
        let mut df = Complex64::zero();
        for c in &monic[1..] {
            df = df * z + f;
            f = f * z + c;
        }
        (f, df)
    };
    // Cauchy bound for the starting circle.
    let radius = 1.0 + monic[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius * 0.5, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (f, df) = eval(z[i]);
            if f == Complex64::zero() {
                continue;
            }
            let ratio = f / df;
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| Complex64::one() / (z[i] - z[j])).sum();
            let step = ratio / (Complex64::one() - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1.0));
        }
        if moved < 1e-15 {
            return Ok(z);
        }
    }
    // Accept the iterate if residuals are tiny relative to the coefficient
    // scale; clustered roots converge only linearly.
    let scale: f64 = monic.iter().map(|c| c.norm()).sum();
    if z.iter().all(|&r| eval(r).0.norm() <= 1e-9 * scale * (1.0 + r.norm()).powi(n as i32)) {
        Ok(z)
    } else {
        Err(Error::NoConvergence)
    }
}

/// `R(t) = Σ_j c_{n−j} q^j t^j / c_n`: the polynomial whose inverse roots are
/// `q/β` over the inverse roots `β` of `Σ c_k t^k`.
pub fn dual_poly(cp: &CharPoly) -> Result<CharPoly> {
    let n = cp.degree();
    match &cp.coeffs {
        Coeffs::Approx(c) => {
            let lead = c[n].inv()?;
            let field = c[0].field();
            let out = (0..=n)
                .map(|j| c[n - j].mul_exact(&field.from_int(cp.q as i64).pow(j as u64)).mul(&lead))
                .collect();
            Ok(CharPoly::approx(cp.q, out))
        }
        Coeffs::Exact(_) => Err(Error::HypothesisFailure(
            "exact duals leave Z[ζ]; use duality_holds_exactly".into(),
        )),
    }
}

/// Exact test that `b` has inverse roots `q/β` over those `β` of `a`:
/// `b_j·a_n = a_{n−j}·q^j` for every `j`.
pub fn duality_holds_exactly(a: &[CycloElem], b: &[CycloElem], q: u64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.len() - 1;
    let qb = BigInt::from(q);
    (0..=n).all(|j| &b[j] * &a[n] == a[n - j].scale(&num_traits::pow(qb.clone(), j)))
}

/// Promote an approximate polynomial to the exact `candidate` when every
/// coefficient agrees to at least `threshold` (in `v_q` units).
pub fn identify(cp: &CharPoly, candidate: &[CycloElem], threshold: Q64) -> Result<Option<CharPoly>> {
    let Coeffs::Approx(c) = &cp.coeffs else {
        return Ok(Some(cp.clone()));
    };
    if c.len() != candidate.len() {
        return Ok(None);
    }
    let k = Q64::from_integer(log_p(cp.p(), cp.q));
    let need = threshold * k;
    for (x, y) in c.iter().zip(candidate) {
        let e = embed_cyclo(y, need + Q64::one())?;
        if x.discrepancy(&e) < Valuation::Finite(need) {
            return Ok(None);
        }
    }
    Ok(Some(CharPoly { q: cp.q, tate_twist: cp.tate_twist, coeffs: Coeffs::Exact(candidate.to_vec()) }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::PiField;

    fn cyc(p: u64, v: &[i64]) -> CycloElem {
        CycloElem::from_coords(p, v.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
    }

    fn gauss3() -> CharPoly {
        CharPoly::exact(3, vec![CycloElem::from_int(3, 1), cyc(3, &[1, 2])])
    }

    #[test]
    fn gauss_slope_is_half() {
        assert_eq!(newton_slopes(&gauss3()).unwrap(), vec![q64(1, 2)]);
    }

    #[test]
    fn top_degree_slope_is_one() {
        let cp = CharPoly::top_degree(PiField::new(3).unwrap(), 3, 1);
        assert_eq!(newton_slopes(&cp).unwrap(), vec![q64(1, 1)]);
        let twisted = cp.tate_twist(2).unwrap();
        assert_eq!(newton_slopes(&twisted).unwrap(), vec![q64(3, 1)]);
    }

    #[test]
    fn two_point_polygon() {
        let f = PiField::new(5).unwrap();
        // valuation 1/2 in v_p units: π^2 for p = 5.
        let cp = CharPoly::approx(5, vec![PiAdicApprox::exact(f.one()), PiAdicApprox::exact(f.pi_pow(2))]);
        assert_eq!(newton_slopes(&cp).unwrap(), vec![q64(1, 2)]);
    }

    #[test]
    fn uncertified_last_coefficient_is_rejected() {
        let f = PiField::new(5).unwrap();
        let cp = CharPoly::approx(
            5,
            vec![PiAdicApprox::exact(f.one()), PiAdicApprox::with_precision(f.zero(), q64(3, 1))],
        );
        assert_eq!(newton_slopes(&cp), Err(Error::UncertifiedVertex { index: 1 }));
    }

    #[test]
    fn weights() {
        let v = weight_check(&gauss3(), q64(1, 1), 1e-12).unwrap();
        assert!(v.pass, "{:?}", v);
        for m in v.moduli {
            assert!((m - 3f64.sqrt()).abs() < 1e-12);
        }
        let one_minus_qt = CharPoly::exact(3, vec![CycloElem::from_int(3, 1), CycloElem::from_int(3, -3)]);
        assert!(weight_check(&one_minus_qt, q64(2, 1), 1e-12).unwrap().pass);
        let mixed = CharPoly::exact(
            3,
            vec![CycloElem::from_int(3, 1), CycloElem::from_int(3, -4), CycloElem::from_int(3, 3)],
        );
        assert!(!weight_check(&mixed, q64(1, 1), 1e-3).unwrap().pass);
        assert!(!weight_check(&mixed, q64(2, 1), 1e-3).unwrap().pass);
        assert!(!weight_check(&mixed, q64(0, 1), 1e-3).unwrap().pass);
    }

    #[test]
    fn aberth_finds_known_roots() {
        // (z − 1)(z − 2)(z + 3) = z³ − 7z + 6
        let a: Vec<Complex64> = [1.0, 0.0, -7.0, 6.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut r: Vec<f64> = polynomial_roots(&a).unwrap().iter().map(|z| z.re).collect();
        r.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (x, y) in r.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn gauss_pairing_is_exact() {
        // α = −(1+2ζ), α′ = conj(α) = −(1+2ζ²); polynomials 1 − αt.
        let s = cyc(3, &[1, 2]);
        let a = vec![CycloElem::from_int(3, 1), s.clone()];
        let b = vec![CycloElem::from_int(3, 1), s.conj()];
        assert!(duality_holds_exactly(&a, &b, 3));
        assert!(!duality_holds_exactly(&a, &a, 3));
    }

    #[test]
    fn products_multiply() {
        let p = gauss3().mul(&gauss3()).unwrap();
        assert_eq!(p.degree(), 2);
        assert_eq!(newton_slopes(&p).unwrap(), vec![q64(1, 2), q64(1, 2)]);
    }
}
