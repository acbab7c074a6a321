//! Break decompositions at infinity and the dimension bookkeeping they
//! determine on the affine line.

use crate::error::{Error, Result};
use crate::numeric::Q64;
use crate::sigma_nabla::DworkTwist;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwanData {
    /// `(break, multiplicity)`, breaks strictly increasing.
    pub breaks: Vec<(Q64, usize)>,
}

impl SwanData {
    pub fn from_breaks(mut list: Vec<Q64>) -> Self {
        list.sort();
        let mut breaks: Vec<(Q64, usize)> = Vec::new();
        for b in list {
            match breaks.last_mut() {
                Some((last, m)) if *last == b => *m += 1,
                _ => breaks.push((b, 1)),
            }
        }
        SwanData { breaks }
    }

    /// A constant module of the given rank.
    pub fn unramified(rank: usize) -> Self {
        SwanData { breaks: vec![(Q64::from_integer(0), rank)] }
    }

    /// Breaks of `⊕ L_{P_j}`: `deg P_j` when `p ∤ deg P_j`, zero for the
    /// constant summands.
    pub fn of_twists(twists: &[DworkTwist], p: u64) -> Result<Self> {
        let mut list = Vec::new();
        for t in twists {
            let d = t.degree();
            if d > 0 && (d as u64).is_multiple_of(p) {
                return Err(Error::RegimeViolation(format!(
                    "break of L[{}] is not its degree since p | {}",
                    t.label(),
                    d
                )));
            }
            list.push(Q64::from_integer(d as i64));
        }
        Ok(Self::from_breaks(list))
    }

    pub fn rank(&self) -> usize {
        self.breaks.iter().map(|b| b.1).sum()
    }

    pub fn swan_total(&self) -> Q64 {
        self.breaks.iter().map(|(b, m)| *b * Q64::from_integer(*m as i64)).sum()
    }

    pub fn max_break(&self) -> Q64 {
        self.breaks.last().map(|b| b.0).unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwanPrediction {
    pub swan: SwanData,
    pub euler_characteristic: i64,
    pub dim_h0: usize,
    pub dim_h1: usize,
    /// Local cohomology at infinity vanishes in this regime.
    pub local_vanishing: bool,
}

/// Breaks and cohomology dimensions of `M₀ ⊗ L_P` with `deg P = d` larger
/// than every break of `M₀`.
pub fn swan_predict(m0: &SwanData, d: usize, p: u64) -> Result<SwanPrediction> {
    let rank = m0.rank();
    let dq = Q64::from_integer(d as i64);
    if d > 0 && m0.max_break() >= dq {
        return Err(Error::RegimeViolation(format!(
            "break {} is not below the twist degree {}",
            m0.max_break(),
            d
        )));
    }
    if d > 0 && (d as u64).is_multiple_of(p) {
        return Err(Error::RegimeViolation(format!("p = {} divides the twist degree {}", p, d)));
    }
    if d == 0 {
        // No twist: only the constant module is in scope.
        if m0.max_break() != Q64::from_integer(0) {
            return Err(Error::RegimeViolation("untwisted module with positive breaks".into()));
        }
        return Ok(SwanPrediction {
            swan: m0.clone(),
            euler_characteristic: rank as i64,
            dim_h0: rank,
            dim_h1: 0,
            local_vanishing: false,
        });
    }
    let swan = SwanData { breaks: vec![(dq, rank)] };
    Ok(SwanPrediction {
        euler_characteristic: rank as i64 - (d * rank) as i64,
        dim_h0: 0,
        dim_h1: (d - 1) * rank,
        swan,
        local_vanishing: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::q64;

    #[test]
    fn constant_module_twisted_by_quadratic() {
        let s = swan_predict(&SwanData::unramified(1), 2, 3).unwrap();
        assert_eq!(s.swan.swan_total(), q64(2, 1));
        assert_eq!(s.dim_h1, 1);
        assert_eq!(s.euler_characteristic, -1);
    }

    #[test]
    fn rank_two_base() {
        let m0 = SwanData::of_twists(&[DworkTwist::monomial(1, 2), DworkTwist::new(&[0, 1, 1])], 5).unwrap();
        assert_eq!(m0.swan_total(), q64(4, 1));
        let s = swan_predict(&m0, 3, 5).unwrap();
        assert_eq!(s.swan.swan_total(), q64(6, 1));
        assert_eq!(s.dim_h1, 4);
        assert_eq!(s.euler_characteristic, 2 - 6);
    }

    #[test]
    fn linear_twist_has_no_cohomology() {
        assert_eq!(swan_predict(&SwanData::unramified(1), 1, 3).unwrap().dim_h1, 0);
    }

    #[test]
    fn refusals_name_the_problem() {
        let m0 = SwanData::from_breaks(vec![q64(3, 1)]);
        assert!(matches!(swan_predict(&m0, 3, 5), Err(Error::RegimeViolation(_))));
        assert!(matches!(swan_predict(&SwanData::unramified(1), 3, 3), Err(Error::RegimeViolation(_))));
    }
}
