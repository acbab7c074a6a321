//! Dense matrices over any [`RingElem`].

use super::ring::RingElem;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: RingElem> Mat<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn zeros(rows: usize, cols: usize, like: &T) -> Self {
        Self::from_fn(rows, cols, |_, _| like.zero_like())
    }

    pub fn identity(n: usize, like: &T) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { like.one_like() } else { like.zero_like() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn map<U: RingElem>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.neg()).collect() }
    }

    pub fn scale(&self, s: &T) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(s)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix shapes do not chain");
        let zero = self.data.first().or(o.data.first()).map(|x| x.zero_like());
        Self::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = zero.clone().expect("nonempty matrices");
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(o.get(k, j)));
            }
            acc
        })
    }

    pub fn kronecker(&self, o: &Self) -> Self {
        Self::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            self.get(i / o.rows, j / o.cols).mul(o.get(i % o.rows, j % o.cols))
        })
    }

    pub fn trace(&self) -> Option<T> {
        let first = self.data.first()?;
        let mut acc = first.zero_like();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.add(self.get(i, i));
        }
        Some(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    /// Coefficients of `det(1 − t·A) = Σ c_k t^k`, `c_0 = 1`, computed
    /// without divisions (Berkowitz).
    pub fn char_poly_reversed(&self, like: &T) -> Vec<T> {
        assert_eq!(self.rows, self.cols, "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return vec![like.one_like()];
        }
        // v holds det(tI − A_r) leading coefficient first.
        let mut v = vec![like.one_like(), self.get(0, 0).neg()];
        for r in 1..n {
            let a = self.get(r, r);
            let row: Vec<T> = (0..r).map(|k| self.get(r, k).clone()).collect();
            let mut col: Vec<T> = (0..r).map(|k| self.get(k, r).clone()).collect();
            let mut toeplitz = vec![like.one_like(), a.neg()];
            for _ in 0..r {
                let mut dot = like.zero_like();
                for k in 0..r {
                    dot = dot.add(&row[k].mul(&col[k]));
                }
                toeplitz.push(dot.neg());
                col = (0..r)
                    .map(|i| {
                        let mut acc = like.zero_like();
                        for k in 0..r {
                            acc = acc.add(&self.get(i, k).mul(&col[k]));
                        }
                        acc
                    })
                    .collect();
            }
            let mut next = Vec::with_capacity(r + 2);
            for i in 0..r + 2 {
                let mut acc = like.zero_like();
                for k in 0..=i.min(r) {
                    acc = acc.add(&toeplitz[i - k].mul(&v[k]));
                }
                next.push(acc);
            }
            v = next;
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::pifield::{PiField, PiFieldElem};

    fn m(f: &PiField, rows: &[&[i64]]) -> Mat<PiFieldElem> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect())
    }

    #[test]
    fn berkowitz_small_cases() {
        let f = PiField::new(5).unwrap();
        let a = m(&f, &[&[2, 1], &[3, 4]]);
        let cp = a.char_poly_reversed(&f.zero());
        assert_eq!(cp, vec![f.from_int(1), f.from_int(-6), f.from_int(5)]);
        let b = m(&f, &[&[1, 2, 0], &[0, 3, 1], &[4, 0, 2]]);
        let cp = b.char_poly_reversed(&f.zero());
        // trace 6, principal minors 3 + 2 + 6 = 11, det = 1·6 − 2·(−4) = 14.
        assert_eq!(cp, vec![f.from_int(1), f.from_int(-6), f.from_int(11), f.from_int(-14)]);
    }

    #[test]
    fn kronecker_shape() {
        let f = PiField::new(3).unwrap();
        let a = m(&f, &[&[1, 2], &[3, 4]]);
        let i = Mat::identity(1, &f.zero());
        assert_eq!(a.kronecker(&i), a);
        assert_eq!(a.kronecker(&a).get(3, 3), &f.from_int(16));
    }
}
