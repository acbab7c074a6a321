//! Horizontal sections of a connection on a formal disc.

use crate::numeric::{Mat, PiFieldElem, RingElem};

/// Solve `dU/dt + N·U = 0`, `U(0) = I`, for `N = Σ N_i t^i` given to
/// order `L`. Returns `U_0, …, U_L` from `l·U_l = −Σ_{i<l} N_i U_{l−1−i}`.
pub fn horizontal_basis(n: &[Mat<PiFieldElem>], order: usize) -> Vec<Mat<PiFieldElem>> {
    let r = n.first().map_or(0, |m| m.rows());
    let like = n.first().map(|m| m.get(0, 0).clone()).expect("connection has at least one coefficient");
    let zero = like.zero_like();
    let mut u = vec![Mat::identity(r, &zero)];
    for l in 1..=order {
        let mut acc = Mat::zeros(r, r, &zero);
        for (i, ni) in n.iter().enumerate().take(l) {
            if ni.is_zero() {
                continue;
            }
            acc = acc.add(&ni.mul(&u[l - 1 - i]));
        }
        let scale = zero.field().from_ratio(-1, l as i64);
        u.push(acc.scale(&scale));
    }
    u
}

/// Coefficients of `t^0, …, t^{L−1}` in `dU/dt + N·U`.
pub fn horizontal_residual(n: &[Mat<PiFieldElem>], u: &[Mat<PiFieldElem>], order: usize) -> Vec<Mat<PiFieldElem>> {
    let r = u[0].rows();
    let zero = u[0].get(0, 0).zero_like();
    (0..order)
        .map(|k| {
            let mut acc = match u.get(k + 1) {
                Some(next) => next.scale(&zero.field().from_int(k as i64 + 1)),
                None => Mat::zeros(r, r, &zero),
            };
            for (i, ni) in n.iter().enumerate().take(k + 1) {
                if let Some(uk) = u.get(k - i) {
                    acc = acc.add(&ni.mul(uk));
                }
            }
            acc
        })
        .collect()
}

/// Product of two matrix power series truncated at `t^order`.
pub fn series_matrix_product(a: &[Mat<PiFieldElem>], b: &[Mat<PiFieldElem>], order: usize) -> Vec<Mat<PiFieldElem>> {
    let r = a[0].rows();
    let zero = a[0].get(0, 0).zero_like();
    (0..=order)
        .map(|k| {
            let mut acc = Mat::zeros(r, r, &zero);
            for i in 0..=k {
                if let (Some(x), Some(y)) = (a.get(i), b.get(k - i)) {
                    acc = acc.add(&x.mul(y));
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::PiField;

    #[test]
    fn zero_connection_gives_identity() {
        let f = PiField::new(3).unwrap();
        let n = vec![Mat::zeros(2, 2, &f.zero())];
        let u = horizontal_basis(&n, 5);
        for (l, ul) in u.iter().enumerate() {
            if l == 0 {
                assert_eq!(ul, &Mat::identity(2, &f.zero()));
            } else {
                assert!(ul.is_zero());
            }
        }
    }

    #[test]
    fn constant_rank_one_is_exponential() {
        let f = PiField::new(5).unwrap();
        let c = f.from_ratio(3, 7);
        let n = vec![Mat::from_rows(vec![vec![c.clone()]])];
        let u = horizontal_basis(&n, 8);
        let mut expect = f.one();
        for (l, ul) in u.iter().enumerate() {
            if l > 0 {
                expect = (&expect * &(-&c)).div_int(&(l as i64).into()).unwrap();
            }
            assert_eq!(ul.get(0, 0), &expect);
        }
        assert!(horizontal_residual(&n, &u, 8).iter().all(|m| m.is_zero()));
    }
}
