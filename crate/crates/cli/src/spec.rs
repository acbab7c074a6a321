//! Module specification files.
//!
//! ```json
//! {
//!   "p": 5,
//!   "twist": [0, 0, 0, 1],
//!   "base": {
//!     "rank": 2,
//!     "frobenius": { "dwork_twists": [[0], [0, 1]] },
//!     "connection": [[[], []], [[], [[["-1", 1]]]]]
//!   },
//!   "trunc": 400,
//!   "precision": 10
//! }
//! ```
//!
//! The module is `B ⊗ L_P`, where `B = ⊕ L_{Q_j}` is the base (rank one
//! and trivial when absent). A connection matrix in the base is optional;
//! when given it must equal the one the Dwork twists determine. Its entries
//! are ascending coefficient lists, each coefficient an integer or a list of
//! `[rational, π-power]` pairs.

use serde::Deserialize;
use weil2::cohomology::default_truncation;
use weil2::numeric::{is_prime, PiField, PiFieldElem, Q64};
use weil2::series::{KPoly, MAX_TRUNCATION};
use weil2::sigma_nabla::{direct_sum, make_dwork_module, DworkTwist, SigmaNablaModule};

use crate::error::CliError;

pub const MAX_RANK: usize = 4;
pub const MAX_DEGREE: usize = 8;
pub const MAX_PRIME: u64 = 13;
pub const MAX_PRECISION: i64 = 40;
pub const DEFAULT_PRECISION: i64 = 10;

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpecFile {
    pub p: u64,
    #[serde(default)]
    pub q: Option<u64>,
    pub twist: Vec<i64>,
    #[serde(default)]
    pub base: Option<BaseSpec>,
    #[serde(default)]
    pub trunc: Option<usize>,
    /// In `v_q` units.
    #[serde(default)]
    pub precision: Option<i64>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    pub rank: usize,
    pub frobenius: FrobeniusDirective,
    #[serde(default)]
    pub connection: Option<Vec<Vec<Vec<Coefficient>>>>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FrobeniusDirective {
    pub dwork_twists: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Coefficient {
    Int(i64),
    Monomials(Vec<(Rational, i64)>),
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Rational {
    Int(i64),
    Text(String),
}

/// Command-line overrides of the file's truncation and precision.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub trunc: Option<usize>,
    pub precision: Option<i64>,
}

/// A validated specification with its module built.
#[derive(Clone)]
pub struct ModuleSpec {
    pub p: u64,
    pub q: u64,
    pub summands: Vec<DworkTwist>,
    pub trunc: usize,
    /// `v_q` units.
    pub precision: i64,
    pub module: SigmaNablaModule,
}

impl ModuleSpec {
    /// Precision in the `v_p` units the library works in.
    pub fn precision_vp(&self) -> Q64 {
        Q64::from_integer(self.precision * log_p(self.p, self.q))
    }
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

fn spec_err(msg: impl Into<String>) -> CliError {
    CliError::Spec(msg.into())
}

fn parse_rational(field: PiField, r: &Rational) -> Result<PiFieldElem, CliError> {
    match r {
        Rational::Int(n) => Ok(field.from_int(*n)),
        Rational::Text(s) => {
            let (n, d) = match s.split_once('/') {
                Some((n, d)) => (n.trim(), d.trim()),
                None => (s.trim(), "1"),
            };
            let n: i64 = n.parse().map_err(|_| spec_err(format!("bad rational {:?}", s)))?;
            let d: i64 = d.parse().map_err(|_| spec_err(format!("bad rational {:?}", s)))?;
            if d == 0 {
                return Err(spec_err(format!("zero denominator in {:?}", s)));
            }
            Ok(field.from_ratio(n, d))
        }
    }
}

fn parse_coefficient(field: PiField, c: &Coefficient) -> Result<PiFieldElem, CliError> {
    match c {
        Coefficient::Int(n) => Ok(field.from_int(*n)),
        Coefficient::Monomials(terms) => {
            let mut acc = field.zero();
            for (r, k) in terms {
                acc = &acc + &parse_rational(field, r)?.mul_pi_pow(*k);
            }
            Ok(acc)
        }
    }
}

fn check_twist(coeffs: &[i64], what: &str) -> Result<DworkTwist, CliError> {
    let t = DworkTwist::new(coeffs);
    if t.degree() > MAX_DEGREE {
        return Err(spec_err(format!("{} has degree {} above the cap {}", what, t.degree(), MAX_DEGREE)));
    }
    Ok(t)
}

impl ModuleSpecFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| spec_err(e.to_string()))
    }

    /// Validate and build. `q ≠ p` is reported as a regime violation: the
    /// enumeration oracle and the fibre Frobenius only serve the prime field.
    pub fn build(&self, o: Overrides) -> Result<ModuleSpec, CliError> {
        let p = self.p;
        if !is_prime(p) || p == 2 || p > MAX_PRIME {
            return Err(spec_err(format!("p = {} must be an odd prime at most {}", p, MAX_PRIME)));
        }
        let q = self.q.unwrap_or(p);
        let field = PiField::new(p)?;
        // Validates that q is a power of p before the regime check.
        make_dwork_module(field, &DworkTwist::zero(), q, 1)?;
        if q != p {
            return Err(CliError::Regime(format!("q = {} is not the prime {}", q, p)));
        }
        let twist = check_twist(&self.twist, "twist")?;
        let base = match &self.base {
            None => vec![DworkTwist::zero()],
            Some(b) => {
                if b.rank == 0 || b.rank > MAX_RANK {
                    return Err(spec_err(format!("rank {} outside 1..={}", b.rank, MAX_RANK)));
                }
                if b.frobenius.dwork_twists.len() != b.rank {
                    return Err(spec_err(format!(
                        "rank {} but {} Dwork twists",
                        b.rank,
                        b.frobenius.dwork_twists.len()
                    )));
                }
                let twists = b
                    .frobenius
                    .dwork_twists
                    .iter()
                    .map(|c| check_twist(c, "base twist"))
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(conn) = &b.connection {
                    check_connection(field, conn, &twists)?;
                }
                twists
            }
        };
        let summands: Vec<DworkTwist> = base.iter().map(|b| b.add(&twist)).collect();
        for s in &summands {
            if s.degree() > MAX_DEGREE {
                return Err(spec_err(format!("twisted summand {} exceeds degree {}", s.label(), MAX_DEGREE)));
            }
        }
        let d = summands.iter().map(|s| s.degree()).max().unwrap_or(0);
        let trunc = o.trunc.or(self.trunc).unwrap_or_else(|| default_truncation(d, q));
        if trunc == 0 || trunc > MAX_TRUNCATION {
            return Err(spec_err(format!("truncation {} outside 1..={}", trunc, MAX_TRUNCATION)));
        }
        let precision = o.precision.or(self.precision).unwrap_or(DEFAULT_PRECISION);
        if !(1..=MAX_PRECISION).contains(&precision) {
            return Err(spec_err(format!("precision {} outside 1..={}", precision, MAX_PRECISION)));
        }
        let parts = summands
            .iter()
            .map(|s| make_dwork_module(field, s, q, trunc))
            .collect::<Result<Vec<_>, _>>()?;
        let refs: Vec<&SigmaNablaModule> = parts.iter().collect();
        let module = direct_sum(&refs)?;
        Ok(ModuleSpec { p, q, summands, trunc, precision, module })
    }
}

/// The stated connection must be `diag(−πQ_j′)`.
fn check_connection(field: PiField, conn: &[Vec<Vec<Coefficient>>], twists: &[DworkTwist]) -> Result<(), CliError> {
    let r = twists.len();
    if conn.len() != r || conn.iter().any(|row| row.len() != r) {
        return Err(spec_err(format!("connection must be {}x{}", r, r)));
    }
    let minus_pi = -&field.pi();
    for (i, row) in conn.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            let coeffs = entry.iter().map(|c| parse_coefficient(field, c)).collect::<Result<Vec<_>, _>>()?;
            let given = KPoly::new(field, coeffs);
            let expected = if i == j {
                twists[i].to_kpoly(field).derivative().scale(&minus_pi)
            } else {
                KPoly::zero(field)
            };
            if given != expected {
                return Err(spec_err(format!(
                    "connection entry ({}, {}) does not match the Dwork twists: expected {:?}",
                    i, j, expected
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(text: &str) -> Result<ModuleSpec, CliError> {
        ModuleSpecFile::from_json(text)?.build(Overrides::default())
    }

    #[test]
    fn minimal_spec() {
        let s = build(r#"{"p": 3, "twist": [0, 0, 1]}"#).unwrap();
        assert_eq!((s.q, s.trunc, s.precision), (3, 150, 10));
        assert_eq!(s.module.rank(), 1);
    }

    #[test]
    fn base_with_connection() {
        let s = build(
            r#"{"p": 5, "twist": [0, 0, 0, 1],
                "base": {"rank": 2, "frobenius": {"dwork_twists": [[0], [0, 1]]},
                         "connection": [[[], []], [[], [[["-1", 1]]]]]}}"#,
        )
        .unwrap();
        assert_eq!(s.module.rank(), 2);
        let bad = build(
            r#"{"p": 5, "twist": [0, 0, 0, 1],
                "base": {"rank": 2, "frobenius": {"dwork_twists": [[0], [0, 1]]},
                         "connection": [[[], []], [[], [1]]]}}"#,
        );
        assert_eq!(bad.err().map(|e| e.exit_code()), Some(2));
    }

    #[test]
    fn rejections() {
        let code = |t: &str| build(t).err().map(|e| e.exit_code());
        assert_eq!(code(r#"{"p": 3, "twist": [0, 1], "extra": 1}"#), Some(2));
        assert_eq!(code(r#"{"p": 17, "twist": [0, 1]}"#), Some(2));
        assert_eq!(code(r#"{"p": 9, "twist": [0, 1]}"#), Some(2));
        assert_eq!(code(r#"{"p": 3, "q": 10, "twist": [0, 1]}"#), Some(2));
        assert_eq!(code(r#"{"p": 3, "q": 9, "twist": [0, 1]}"#), Some(3));
        assert_eq!(code(r#"{"p": 3, "twist": [0, 0, 0, 0, 0, 0, 0, 0, 0, 1]}"#), Some(2));
        assert_eq!(code(r#"{"p": 3, "twist": [0, 1], "precision": 0}"#), Some(2));
    }

    #[test]
    fn overrides_win() {
        let f = ModuleSpecFile::from_json(r#"{"p": 3, "twist": [0, 0, 1], "trunc": 80}"#).unwrap();
        let s = f.build(Overrides { trunc: Some(90), precision: Some(6) }).unwrap();
        assert_eq!((s.trunc, s.precision), (90, 6));
    }
}
