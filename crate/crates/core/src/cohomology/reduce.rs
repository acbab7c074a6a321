//! Reduction of `x^m e_j dx` modulo the image of the connection, in the
//! regime where the top coefficient of the connection dominates.

use crate::error::{Error, Result};
use crate::numeric::{Mat, PiField, PiFieldElem, RingElem, Valuation};
use crate::series::KPoly;
use crate::sigma_nabla::{invert_field_matrix, SigmaNablaModule};

/// Data of a connection `N = Σ_{l<d} N_l x^l` whose top coefficient is `π`
/// times an invertible integral matrix.
#[derive(Debug, Clone)]
pub struct DominantRegime {
    pub field: PiField,
    pub rank: usize,
    /// `1 + deg N`; the basis is `x^i e_j` with `i ≤ d − 2`.
    pub d: usize,
    /// `N_top^{-1}`.
    pub w: Mat<PiFieldElem>,
    /// `N_l · N_top^{-1}` for `l < d − 1`.
    pub lower: Vec<Mat<PiFieldElem>>,
}

fn coefficient_matrix(n: &Mat<KPoly>, l: usize) -> Mat<PiFieldElem> {
    Mat::from_fn(n.rows(), n.cols(), |i, j| n.get(i, j).coeff(l))
}

fn integral(m: &Mat<PiFieldElem>) -> bool {
    m.entries().iter().all(|x| x.valuation() >= Valuation::int(0))
}

/// Checks the dominant-twist hypotheses and precomputes the reduction data.
pub fn dominant_regime(m: &SigmaNablaModule) -> Result<DominantRegime> {
    let field = m.field();
    let p = field.p();
    let deg = m
        .connection_degree()
        .ok_or_else(|| Error::RegimeViolation("connection vanishes; no twist dominates".into()))?;
    let d = deg + 1;
    if (d as u64).is_multiple_of(p) {
        return Err(Error::RegimeViolation(format!("p = {} divides the twist degree {}", p, d)));
    }
    let top = coefficient_matrix(m.connection(), deg);
    let pi = field.pi();
    let scaled = top.map(|x| x.div(&pi).expect("π ≠ 0"));
    let w = invert_field_matrix(&top)
        .map_err(|_| Error::RegimeViolation("top coefficient of the connection is singular".into()))?;
    let scaled_inv = w.map(|x| x * &pi);
    if !integral(&scaled) || !integral(&scaled_inv) {
        return Err(Error::RegimeViolation(
            "top coefficient of the connection is not π times a unit matrix".into(),
        ));
    }
    let lower = (0..deg).map(|l| coefficient_matrix(m.connection(), l).mul(&w)).collect();
    Ok(DominantRegime { field, rank: m.rank(), d, w, lower })
}

impl DominantRegime {
    pub fn dim(&self) -> usize {
        (self.d - 1) * self.rank
    }

    /// `(i, j)` for the basis element `x^i e_j`, ordered by `i·rank + j`.
    pub fn basis(&self) -> Vec<(usize, usize)> {
        (0..self.d - 1).flat_map(|i| (0..self.rank).map(move |j| (i, j))).collect()
    }
}

/// Extend `table` so that `table[m]` (a `dim × rank` matrix whose column `j`
/// holds the class of `x^m e_j dx`) exists for every `m ≤ upto`.
///
/// From `∇(x^k e) = k x^{k−1} e + Σ_l x^{k+l} N_l e` one gets
/// `cls[k+d−1] = −(k·cls[k−1] + Σ_{l<d−1} cls[k+l]·N_l)·N_top^{-1}`.
pub(crate) fn extend_class_table<T: RingElem>(
    table: &mut Vec<Mat<T>>,
    w: &Mat<T>,
    lower: &[Mat<T>],
    rank: usize,
    d: usize,
    upto: usize,
    like: &T,
    post: impl Fn(&T) -> T,
) {
    let dim = (d - 1) * rank;
    while table.len() <= upto {
        let m = table.len();
        if m + 1 < d {
            table.push(Mat::from_fn(dim, rank, |b, j| {
                if b == m * rank + j {
                    like.one_like()
                } else {
                    like.zero_like()
                }
            }));
            continue;
        }
        let k = m + 1 - d;
        let mut acc = Mat::zeros(dim, rank, like);
        if k >= 1 {
            acc = acc.add(&table[k - 1].scale(&like.from_i64_like(k as i64)));
        }
        let mut next = acc.mul(w);
        for (l, nl) in lower.iter().enumerate() {
            next = next.add(&table[k + l].mul(nl));
        }
        table.push(next.neg().map(&post));
    }
}

/// Exact presentation of `H¹ = M dx / ∇M` with its reduction map.
#[derive(Debug, Clone)]
pub struct H1Presentation {
    regime: DominantRegime,
    table: Vec<Mat<PiFieldElem>>,
}

impl H1Presentation {
    pub fn new(m: &SigmaNablaModule) -> Result<Self> {
        Ok(H1Presentation { regime: dominant_regime(m)?, table: Vec::new() })
    }

    pub fn regime(&self) -> &DominantRegime {
        &self.regime
    }

    pub fn dim(&self) -> usize {
        self.regime.dim()
    }

    pub fn basis(&self) -> Vec<(usize, usize)> {
        self.regime.basis()
    }

    fn ensure(&mut self, upto: usize) {
        let r = &self.regime;
        let like = r.field.one();
        extend_class_table(&mut self.table, &r.w, &r.lower, r.rank, r.d, upto, &like, |x| x.clone());
    }

    /// Coordinates of the class of `x^m e_j dx`.
    pub fn reduce(&mut self, m: usize, j: usize) -> Vec<PiFieldElem> {
        self.ensure(m);
        let t = &self.table[m];
        (0..t.rows()).map(|b| t.get(b, j).clone()).collect()
    }

    /// Coordinates of the class of `Σ_j v_j e_j dx`.
    pub fn reduce_vector(&mut self, v: &[KPoly]) -> Vec<PiFieldElem> {
        let field = self.regime.field;
        let mut out = vec![field.zero(); self.dim()];
        for (j, poly) in v.iter().enumerate() {
            for (m, c) in poly.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (o, x) in out.iter_mut().zip(self.reduce(m, j)) {
                    *o = &*o + &(&x * c);
                }
            }
        }
        out
    }
}

/// `∇(Σ_j v_j e_j)` as the coefficient vector of `dx`.
pub fn apply_connection(m: &SigmaNablaModule, v: &[KPoly]) -> Vec<KPoly> {
    let n = m.connection();
    (0..m.rank())
        .map(|i| {
            let mut acc = v[i].derivative();
            for (j, vj) in v.iter().enumerate() {
                acc = acc.add(&n.get(i, j).mul(vj));
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma_nabla::{direct_sum, make_dwork_module, trivial_module, DworkTwist};

    fn dwork(p: u64, coeffs: &[i64]) -> SigmaNablaModule {
        let f = PiField::new(p).unwrap();
        make_dwork_module(f, &DworkTwist::new(coeffs), p, 4).unwrap()
    }

    #[test]
    fn quadratic_twist_reduces_x_squared() {
        let m = dwork(3, &[0, 0, 1]);
        let mut h = H1Presentation::new(&m).unwrap();
        assert_eq!(h.dim(), 1);
        // ∇(x e) = (1 − 2πx²) e dx, so x² e dx ≡ (2π)^{-1} e dx.
        let f = m.field();
        let expected = f.pi().scale_i64(2).inv().unwrap();
        assert_eq!(h.reduce(2, 0), vec![expected]);
        assert_eq!(h.reduce(0, 0), vec![f.one()]);
        assert!(h.reduce(1, 0)[0].is_zero());
    }

    #[test]
    fn cubic_basis_has_two_elements() {
        let h = H1Presentation::new(&dwork(5, &[0, 0, 0, 1])).unwrap();
        assert_eq!(h.basis(), vec![(0, 0), (1, 0)]);
    }

    #[test]
    fn image_of_connection_reduces_to_zero() {
        let a = dwork(5, &[0, 1, 2, 1]);
        let b = dwork(5, &[0, 0, 1, 3]);
        let m = direct_sum(&[&a, &b]).unwrap();
        let f = m.field();
        let mut h = H1Presentation::new(&m).unwrap();
        assert_eq!(h.dim(), 4);
        for k in 0..8usize {
            let v = vec![KPoly::from_ints(f, &[1, 0, -2]).mul_x_pow(k), KPoly::from_ints(f, &[0, 3, 1])];
            let image = apply_connection(&m, &v);
            assert!(h.reduce_vector(&image).iter().all(|c| c.is_zero()), "k = {}", k);
        }
    }

    #[test]
    fn regime_violations() {
        let f = PiField::new(3).unwrap();
        assert!(matches!(dominant_regime(&trivial_module(f, 3, 4).unwrap()), Err(Error::RegimeViolation(_))));
        assert!(matches!(dominant_regime(&dwork(3, &[0, 0, 0, 1])), Err(Error::RegimeViolation(_))));
        let mixed = direct_sum(&[&dwork(5, &[0, 0, 1]), &dwork(5, &[0, 0, 0, 1])]).unwrap();
        assert!(matches!(dominant_regime(&mixed), Err(Error::RegimeViolation(_))));
    }
}
