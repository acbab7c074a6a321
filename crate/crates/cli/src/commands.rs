//! The `lfunction` and `fourier` reports.

use serde_json::{json, Value};
use weil2::cohomology::{identify, lefschetz_verify, newton_slopes, weight_check, CharPoly};
use weil2::numeric::{FiniteField, Q64};
use weil2::weyl::{fourier_fiber, fourier_fiber_over, FiberSource, FourierFiberReport};

use crate::encode;
use crate::error::CliError;
use crate::spec::ModuleSpec;

/// Relative tolerance for weights of exact L-polynomial roots.
pub const WEIGHT_TOL: f64 = 1e-9;
/// Relative tolerance for weights of Fourier fibres.
pub const FIBER_WEIGHT_TOL: f64 = 1e-6;

pub fn module_json(spec: &ModuleSpec) -> Value {
    json!({
        "p": spec.p,
        "q": spec.q,
        "rank": spec.summands.len(),
        "summands": spec.summands.iter().map(|s| s.coeffs().to_vec()).collect::<Vec<_>>(),
        "label": spec.module.label(),
    })
}

fn status(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

/// Report and overall verdict for `lfunction`.
pub fn lfunction(spec: &ModuleSpec, n_max: usize) -> Result<(Value, bool), CliError> {
    if n_max == 0 {
        return Err(CliError::Spec("n-max must be at least 1".into()));
    }
    let prec = spec.precision_vp();
    let rep = lefschetz_verify(&spec.module, n_max, prec)?;
    let coh = &rep.cohomology;
    let slopes = match newton_slopes(&coh.charpoly) {
        Ok(v) => json!(v.into_iter().map(encode::q64).collect::<Vec<_>>()),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let threshold = Q64::from_integer(spec.precision);
    let exact = identify(&coh.charpoly, &rep.oracle_l.h1, threshold)?;
    let w1 = match &exact {
        Some(cp) => Some((weight_check(cp, Q64::from_integer(1), WEIGHT_TOL)?, cp.clone())),
        None => None,
    };
    let h2 = CharPoly::exact(spec.q, rep.oracle_l.h2.clone());
    let w2 = weight_check(&h2, Q64::from_integer(2), WEIGHT_TOL)?;
    let pass = rep.pass() && exact.is_some() && w1.as_ref().is_none_or(|(w, _)| w.pass) && w2.pass;
    let doc = json!({
        "command": "lfunction",
        "module": module_json(spec),
        "parameters": {
            "n_max": n_max,
            "trunc": spec.trunc,
            "truncations": coh.truncations,
            "precision_vq": spec.precision,
            "working_precision_vp": encode::q64(coh.working_precision),
        },
        "oracle": {
            "provenance": "oracle-exact",
            "sums": rep.records.iter().map(|r| json!({ "n": r.n, "value": encode::cyclo(&r.oracle) })).collect::<Vec<_>>(),
            "h1c": rep.oracle_l.h1.iter().map(encode::cyclo).collect::<Vec<_>>(),
            "h2c": rep.oracle_l.h2.iter().map(encode::cyclo).collect::<Vec<_>>(),
            "checked_orders": rep.oracle_l.checked_orders,
        },
        "cohomology": {
            "provenance": "precision-bounded",
            "dim": coh.dim,
            "basis": coh.basis,
            "h1": encode::charpoly(&coh.charpoly),
            "h2c": encode::charpoly(&coh.h2c),
            "tail_bound_vp": encode::valuation(coh.tail_bound),
            "stability_vp": encode::valuation(coh.stability),
            "tail_certificate": "certified on the stored range, assumed beyond it",
        },
        "comparison": {
            "traces": rep.records.iter().map(|r| json!({
                "n": r.n,
                "cohomological": encode::approx(&r.cohomological),
                "discrepancy_vp": encode::valuation(r.discrepancy),
            })).collect::<Vec<_>>(),
            "coefficient_discrepancies_vp": rep.coefficient_discrepancies.iter().map(|v| encode::valuation(*v)).collect::<Vec<_>>(),
            "degree_match": rep.degree_match,
            "first_failure": rep.first_failure(),
            "identified": exact.is_some(),
        },
        "newton_slopes": slopes,
        "weights": {
            "h1": w1.as_ref().map(|(w, cp)| encode::weight(w, cp)),
            "h2c": encode::weight(&w2, &h2),
        },
        "status": status(pass),
    });
    Ok((doc, pass))
}

/// A fibre given on the command line: an integer, or dotted coordinates
/// `c0.c1…` of a point of `F_{p^k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberArg {
    Prime(i64),
    Extension(Vec<u64>),
}

pub fn parse_fibers(text: &str) -> Result<Vec<FiberArg>, CliError> {
    let bad = |t: &str| CliError::Spec(format!("bad fibre {:?}", t));
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            if t.contains('.') {
                let coords = t.split('.').map(|c| c.parse::<u64>().map_err(|_| bad(t))).collect::<Result<Vec<_>, _>>()?;
                if coords.len() < 2 {
                    return Err(bad(t));
                }
                Ok(FiberArg::Extension(coords))
            } else {
                t.parse::<i64>().map(FiberArg::Prime).map_err(|_| bad(t))
            }
        })
        .collect()
}

fn fiber_json(r: &FourierFiberReport) -> Value {
    json!({
        "a": r.a.to_string(),
        "q": r.q,
        "dim": r.dim,
        "predicted_dim": r.predicted_dim,
        "source": match r.source { FiberSource::Cohomology => "cohomology", FiberSource::Oracle => "oracle" },
        "identified": r.identified,
        "charpoly": encode::charpoly(&r.charpoly),
        "weight": r.weight.as_ref().map(|w| encode::weight(w, &r.charpoly)),
    })
}

fn fiber_pass(r: &FourierFiberReport) -> bool {
    r.identified && r.weight.as_ref().is_none_or(|w| w.pass) && r.predicted_dim.is_none_or(|d| d == r.dim)
}

/// Report and overall verdict for `fourier`.
pub fn fourier(spec: &ModuleSpec, fibers: &[FiberArg]) -> Result<(Value, bool), CliError> {
    let prec = spec.precision_vp();
    let mut reports = Vec::with_capacity(fibers.len());
    for f in fibers {
        let r = match f {
            FiberArg::Prime(a) => fourier_fiber(&spec.module, *a, prec, FIBER_WEIGHT_TOL)?,
            FiberArg::Extension(coords) => {
                let base = FiniteField::new(spec.p, coords.len())?;
                let a = base.from_coeffs(coords)?;
                fourier_fiber_over(&spec.summands, &base, &a, FIBER_WEIGHT_TOL)?
            }
        };
        reports.push(r);
    }
    let dims: Vec<usize> = reports.iter().map(|r| r.dim).collect();
    let constant = dims.windows(2).all(|w| w[0] == w[1]);
    let pass = constant && reports.iter().all(fiber_pass);
    let doc = json!({
        "command": "fourier",
        "module": module_json(spec),
        "parameters": { "trunc": spec.trunc, "precision_vq": spec.precision, "weight_tolerance": encode::decimal(FIBER_WEIGHT_TOL) },
        "fibers": reports.iter().map(fiber_json).collect::<Vec<_>>(),
        "constant_dimension": constant,
        "dimension": if constant { dims.first().copied() } else { None },
        "status": status(pass),
    });
    Ok((doc, pass))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{ModuleSpecFile, Overrides};

    fn spec(text: &str) -> ModuleSpec {
        ModuleSpecFile::from_json(text).unwrap().build(Overrides::default()).unwrap()
    }

    #[test]
    fn fibre_parsing() {
        assert_eq!(parse_fibers("").unwrap(), vec![]);
        assert_eq!(
            parse_fibers("0, -1,0.1").unwrap(),
            vec![FiberArg::Prime(0), FiberArg::Prime(-1), FiberArg::Extension(vec![0, 1])]
        );
        assert!(parse_fibers("x").is_err());
        assert!(parse_fibers("1.").is_err());
    }

    #[test]
    fn gauss_lfunction() {
        let (doc, pass) = lfunction(&spec(r#"{"p": 3, "twist": [0, 0, 1]}"#), 4).unwrap();
        assert!(pass);
        assert_eq!(doc["oracle"]["h1c"], json!([["1", "0"], ["1", "2"]]));
        assert_eq!(doc["newton_slopes"], json!(["1/2"]));
        assert_eq!(doc["weights"]["h1"]["squared_modulus_exact"], json!("3"));
    }

    #[test]
    fn trivial_lfunction_lives_in_top_degree() {
        let (doc, pass) = lfunction(&spec(r#"{"p": 3, "twist": [0]}"#), 3).unwrap();
        assert!(pass);
        assert_eq!(doc["cohomology"]["dim"], json!(0));
        assert_eq!(doc["oracle"]["h2c"], json!([["1", "0"], ["-3", "0"]]));
    }

    #[test]
    fn regime_violation_code() {
        let e = lfunction(&spec(r#"{"p": 3, "twist": [0, 0, 0, 1]}"#), 2).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn fourier_trivial_and_empty() {
        let s = spec(r#"{"p": 5, "twist": [0]}"#);
        let (doc, pass) = fourier(&s, &[FiberArg::Prime(1)]).unwrap();
        assert!(pass);
        assert_eq!(doc["fibers"][0]["dim"], json!(0));
        let (doc, pass) = fourier(&s, &[]).unwrap();
        assert!(pass);
        assert_eq!(doc["fibers"], json!([]));
    }
}
