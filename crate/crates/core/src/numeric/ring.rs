/// Minimal ring interface shared by the coefficient types, so that matrix
/// code can be written once.
///
/// Every element carries its own context (the prime, a precision, a
/// truncation order), which is why zero and one are produced from an
/// existing element rather than from nothing.
pub trait RingElem: Clone + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn from_i64_like(&self, n: i64) -> Self {
        let one = self.one_like();
        let mut acc = self.zero_like();
        let mut base = if n < 0 { one.neg() } else { one };
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add(&base);
            }
            base = base.add(&base);
            k >>= 1;
        }
        acc
    }
}
