//! The Frobenius matrix on `H¹` and its characteristic polynomial.

use num_traits::{One, Zero};

use super::charpoly::CharPoly;
use super::reduce::{dominant_regime, extend_class_table, DominantRegime};
use crate::error::{Error, Result};
use crate::numeric::{Mat, PiAdicApprox, Valuation, Q64};
use crate::series::Tail;
use crate::sigma_nabla::SigmaNablaModule;

/// Frobenius on `H¹` together with the bookkeeping behind its precision.
#[derive(Debug, Clone)]
pub struct FrobeniusOnH1 {
    pub dim: usize,
    pub basis: Vec<(usize, usize)>,
    /// Matrix at the larger truncation; column `b` is `F(basis_b)`.
    pub matrix: Mat<PiAdicApprox>,
    /// `det(1 − Ft | H¹)`, with `known_mod` intersected over both
    /// truncations.
    pub charpoly: CharPoly,
    /// `det(1 − Ft | H²_c)`.
    pub h2c: CharPoly,
    pub truncations: [usize; 2],
    /// Absolute working precision of the class table (`v_p` units).
    pub working_precision: Q64,
    /// Lower bound for the neglected Frobenius terms at the larger
    /// truncation. Certified on the stored range of the class table,
    /// assumed beyond it.
    pub tail_bound: Valuation,
    /// `min_k v(c_k − c′_k)` between the two truncations.
    pub stability: Valuation,
}

/// Default truncation order for a twist of degree `d`.
pub fn default_truncation(d: usize, q: u64) -> usize {
    25 * d.max(1) * q as usize
}

fn is_identity_exact(m: &SigmaNablaModule) -> bool {
    let f = m.frobenius();
    (0..m.rank()).all(|i| {
        (0..m.rank()).all(|j| {
            let s = f.get(i, j);
            s.tail() == Tail::Exact
                && s.coeffs().iter().enumerate().all(|(t, c)| {
                    if i == j && t == 0 {
                        c.is_one()
                    } else {
                        c.is_zero()
                    }
                })
        })
    })
}

struct Run {
    matrix: Mat<PiAdicApprox>,
    charpoly: Vec<PiAdicApprox>,
    tail: Valuation,
}

/// Class table up to the largest index the truncation `n` touches.
fn class_table(m: &SigmaNablaModule, reg: &DominantRegime, n: usize, wp: Q64) -> Vec<Mat<PiAdicApprox>> {
    let q = m.q() as usize;
    let upto = q * (reg.d - 2) + q - 1 + n;
    let like = PiAdicApprox::exact(m.field().one());
    let w = reg.w.map(|x| PiAdicApprox::exact(x.clone()));
    let lower: Vec<Mat<PiAdicApprox>> = reg.lower.iter().map(|l| l.map(|x| PiAdicApprox::exact(x.clone()))).collect();
    let cap = Valuation::Finite(wp);
    let mut table = Vec::new();
    extend_class_table(&mut table, &w, &lower, reg.rank, reg.d, upto, &like, |x| x.truncate(cap));
    table
}

/// Frobenius coefficients reduced to the precision the table can use: their
/// error times a class must stay below the working precision.
fn reduced_frobenius(m: &SigmaNablaModule, table: &[Mat<PiAdicApprox>], wp: Q64) -> Vec<Vec<Vec<PiAdicApprox>>> {
    let min_class = table
        .iter()
        .flat_map(|t| t.entries().iter().map(|x| x.valuation_lower_bound()))
        .fold(Valuation::Infinity, Valuation::min);
    let prec = match min_class {
        Valuation::Finite(v) if v < Q64::zero() => wp - v + Q64::one(),
        _ => wp + Q64::one(),
    };
    let frob = m.frobenius();
    (0..m.rank())
        .map(|k| {
            (0..m.rank())
                .map(|j| {
                    frob.get(k, j).coeffs().iter().map(|c| PiAdicApprox::with_precision(c.clone(), prec)).collect()
                })
                .collect()
        })
        .collect()
}

fn run(
    m: &SigmaNablaModule,
    reg: &DominantRegime,
    table: &[Mat<PiAdicApprox>],
    phi: &[Vec<Vec<PiAdicApprox>>],
    n: usize,
) -> Run {
    let field = m.field();
    let q = m.q() as usize;
    let r = reg.rank;
    let upto = q * (reg.d - 2) + q - 1 + n;
    let like = PiAdicApprox::exact(field.one());
    let min_class = table[..=upto]
        .iter()
        .flat_map(|t| t.entries().iter().map(|x| x.valuation_lower_bound()))
        .fold(Valuation::Infinity, Valuation::min);
    let frob = m.frobenius();
    let qf = field.from_int(q as i64);
    let dim = reg.dim();
    let mut matrix = Mat::zeros(dim, dim, &like);
    let mut worst_tail = Valuation::Infinity;
    for (b, &(i, j)) in reg.basis().iter().enumerate() {
        let base = q * i + q - 1;
        let mut col: Vec<PiAdicApprox> = vec![PiAdicApprox::exact(field.zero()); dim];
        let mut tail = Valuation::Infinity;
        for k in 0..r {
            tail = tail.min(frob.get(k, j).tail().bound_at(n + 1));
            for (t, c) in phi[k][j].iter().take(n + 1).enumerate() {
                if c.value().is_zero() {
                    continue;
                }
                let cls = &table[base + t];
                for (o, slot) in col.iter_mut().enumerate() {
                    let e = cls.get(o, k);
                    if !e.value().is_zero() || !e.known_mod().is_infinite() {
                        *slot = slot.add(&e.mul(c));
                    }
                }
            }
        }
        let tail = tail + min_class + qf.valuation();
        worst_tail = worst_tail.min(tail);
        for (o, x) in col.into_iter().enumerate() {
            matrix.set(o, b, x.mul_exact(&qf).truncate(tail));
        }
    }
    let charpoly = matrix.char_poly_reversed(&like);
    Run { matrix, charpoly, tail: worst_tail }
}

/// Frobenius on `H¹(M)` and `det(1 − Ft)` with every coefficient known to
/// at least `precision` (`v_p` units).
///
/// The computation is repeated at the module's truncation `N` and at
/// `4N/5`; the reported precision is the intersection of both runs and
/// their mutual agreement.
pub fn frobenius_on_h1(m: &SigmaNablaModule, precision: Q64) -> Result<FrobeniusOnH1> {
    let field = m.field();
    let n2 = m.trunc_order();
    let n1 = (4 * n2 / 5).max(1);
    if m.connection_degree().is_none() {
        if !is_identity_exact(m) {
            return Err(Error::RegimeViolation("zero connection with non-constant Frobenius".into()));
        }
        return Ok(FrobeniusOnH1 {
            dim: 0,
            basis: Vec::new(),
            matrix: Mat::zeros(0, 0, &PiAdicApprox::exact(field.one())),
            charpoly: CharPoly::one(field, m.q()),
            h2c: CharPoly::top_degree(field, m.q(), m.rank()),
            truncations: [n1, n2],
            working_precision: precision,
            tail_bound: Valuation::Infinity,
            stability: Valuation::Infinity,
        });
    }
    let reg = dominant_regime(m)?;
    let one = || CharPoly::one(field, m.q());
    if reg.dim() == 0 {
        return Ok(FrobeniusOnH1 {
            dim: 0,
            basis: Vec::new(),
            matrix: Mat::zeros(0, 0, &PiAdicApprox::exact(field.one())),
            charpoly: one(),
            h2c: one(),
            truncations: [n1, n2],
            working_precision: precision,
            tail_bound: Valuation::Infinity,
            stability: Valuation::Infinity,
        });
    }
    let p = field.p() as i64;
    let upto = m.q() as i64 * (reg.d as i64 - 1) + n2 as i64;
    let target = Valuation::Finite(precision);
    let mut wp = precision + Q64::from_integer(4) + Q64::new(upto, reg.d as i64 * (p - 1));
    let mut achieved = Valuation::Infinity;
    for _ in 0..4 {
        let table = class_table(m, &reg, n2, wp);
        let phi = reduced_frobenius(m, &table, wp);
        let big = run(m, &reg, &table, &phi, n2);
        let small = run(m, &reg, &table, &phi, n1);
        let mut stability = Valuation::Infinity;
        let coeffs: Vec<PiAdicApprox> = big
            .charpoly
            .iter()
            .zip(&small.charpoly)
            .map(|(a, b)| {
                let agree = a.discrepancy(b);
                stability = stability.min(agree);
                a.truncate(agree)
            })
            .collect();
        achieved = coeffs.iter().map(|c| c.known_mod()).fold(Valuation::Infinity, Valuation::min);
        if achieved >= target {
            return Ok(FrobeniusOnH1 {
                dim: reg.dim(),
                basis: reg.basis(),
                matrix: big.matrix,
                charpoly: CharPoly::approx(m.q(), coeffs),
                h2c: one(),
                truncations: [n1, n2],
                working_precision: wp,
                tail_bound: big.tail,
                stability,
            });
        }
        let tail = big.tail.min(small.tail);
        if tail < target {
            return Err(Error::InsufficientTruncation { achieved: tail, requested: target });
        }
        let deficit = match achieved {
            Valuation::Finite(a) => precision - a,
            Valuation::Infinity => Q64::zero(),
        };
        wp = wp + deficit.max(Q64::one()) + Q64::from_integer(4);
    }
    Err(Error::InsufficientPrecision { achieved, requested: target })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::charpoly::Coeffs;
    use crate::numeric::{embed_cyclo, q64, CycloElem, PiField};
    use crate::oracle::char_sum;
    use crate::sigma_nabla::{make_dwork_module, trivial_module, DworkTwist};

    #[test]
    fn gauss_case_matches_oracle() {
        let f = PiField::new(3).unwrap();
        let t = DworkTwist::monomial(1, 2);
        let m = make_dwork_module(f, &t, 3, default_truncation(2, 3)).unwrap();
        let h = frobenius_on_h1(&m, q64(10, 1)).unwrap();
        assert_eq!(h.dim, 1);
        let Coeffs::Approx(c) = &h.charpoly.coeffs else { panic!() };
        let s1 = char_sum(&t, 3, 1).unwrap();
        assert_eq!(s1, CycloElem::from_coords(3, vec![1.into(), 2.into()]).unwrap());
        let e = embed_cyclo(&s1, q64(12, 1)).unwrap();
        assert!(c[1].discrepancy(&e) >= Valuation::int(10), "{:?} vs {:?}", c[1], e);
        assert!(h.stability >= Valuation::int(10));
    }

    #[test]
    fn trivial_module_has_no_h1() {
        let f = PiField::new(5).unwrap();
        let h = frobenius_on_h1(&trivial_module(f, 5, 10).unwrap(), q64(8, 1)).unwrap();
        assert_eq!(h.dim, 0);
        assert_eq!(h.charpoly.degree(), 0);
        assert_eq!(h.h2c.degree(), 1);
    }

    #[test]
    fn short_truncation_is_reported() {
        let f = PiField::new(3).unwrap();
        let m = make_dwork_module(f, &DworkTwist::monomial(1, 2), 3, 6).unwrap();
        assert!(matches!(frobenius_on_h1(&m, q64(10, 1)), Err(Error::InsufficientTruncation { .. })));
    }
}
