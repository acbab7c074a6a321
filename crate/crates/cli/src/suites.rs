//! Verification suites. Every check is tagged with the acceptance criterion
//! it belongs to; suites are groups of criteria.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use weil2::cohomology::{
    default_truncation, duality_holds_exactly, frobenius_on_h1, h1c_via_duality, identify, lefschetz_verify,
    newton_slopes, weight_check, H1Presentation,
};
use weil2::numeric::valuation::{factorial_valuation_bracket, vp_factorial};
use weil2::numeric::{
    embed_cyclo, hensel_zeta_p, q64, CycloElem, FiniteField, Mat, PiAdicApprox, PiField, PiFieldElem, Valuation, Q64,
};
use weil2::oracle::{char_sum, exp_of_sums, oracle_l_poly};
use weil2::series::{dwork_tail, exp_poly_with_tail, KPoly};
use weil2::sigma_nabla::{
    direct_sum, horizontal_basis, horizontal_residual, make_dwork_module, DworkTwist, SigmaNablaModule,
};
use weil2::weyl::{
    fourier_fiber, fourier_fiber_over, frobenius_commutation_series, rho, rho_closed_form, surjectivity_probe,
    weyl_mul, weyl_mul_by_words, WeylOperator,
};

use crate::encode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Weyl,
    Trace,
    Weights,
    Slopes,
    Fourier,
    Duality,
    All,
}

impl Suite {
    pub fn criteria(self) -> Vec<u8> {
        match self {
            Suite::Weights => vec![1],
            Suite::Trace => vec![2, 9],
            Suite::Slopes => vec![3, 6],
            Suite::Fourier => vec![4, 10],
            Suite::Duality => vec![5, 8],
            Suite::Weyl => vec![7],
            Suite::All => (1..=10).collect(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Weyl => "weyl",
            Suite::Trace => "trace",
            Suite::Weights => "weights",
            Suite::Slopes => "slopes",
            Suite::Fourier => "fourier",
            Suite::Duality => "duality",
            Suite::All => "all",
        }
    }
}

/// Short title of each criterion.
pub fn criterion_title(c: u8) -> &'static str {
    match c {
        1 => "Gauss-sum purity",
        2 => "trace formula",
        3 => "dimension formula",
        4 => "Fourier rank constancy",
        5 => "duality",
        6 => "slope bounds",
        7 => "Weyl algebra",
        8 => "horizontal sections",
        9 => "splitting-series bridge",
        10 => "surjectivity probe",
        _ => "unknown",
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Raises (never lowers) the stated precision, in `v_q` units.
    pub precision: Option<i64>,
    /// Replaces the default truncation of cohomology checks.
    pub trunc: Option<usize>,
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 1, precision: None, trunc: None, timings: false }
    }
}

impl SuiteConfig {
    fn precision(&self, stated: i64) -> i64 {
        self.precision.map_or(stated, |p| p.max(stated))
    }

    fn trunc(&self, d: usize, q: u64) -> usize {
        self.trunc.unwrap_or_else(|| default_truncation(d, q))
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub criterion: u8,
    pub inputs: BTreeMap<String, Value>,
    pub status: Status,
    /// `oracle-exact`, `precision-bounded` or `exact-arithmetic`.
    pub provenance: &'static str,
    pub trunc: Option<usize>,
    pub precision_vq: Option<i64>,
    pub worst_deviation: Option<String>,
    pub achieved_precision: Option<String>,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_s: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CheckRecord {
    pub fn pass(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Default)]
struct Outcome {
    pass: bool,
    worst: Option<String>,
    achieved: Option<String>,
    detail: String,
}

struct Check<'a> {
    name: &'a str,
    criterion: u8,
    inputs: Vec<(&'a str, Value)>,
    provenance: &'static str,
    trunc: Option<usize>,
    precision: Option<i64>,
}

impl Check<'_> {
    fn run(self, cfg: &SuiteConfig, f: impl FnOnce() -> weil2::Result<Outcome>) -> CheckRecord {
        let t0 = Instant::now();
        let res = f();
        let elapsed = t0.elapsed();
        let (status, o) = match res {
            Ok(o) => (if o.pass { Status::Pass } else { Status::Fail }, o),
            Err(e) => (Status::Error, Outcome { detail: e.to_string(), ..Outcome::default() }),
        };
        CheckRecord {
            name: self.name.to_string(),
            criterion: self.criterion,
            inputs: self.inputs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            status,
            provenance: self.provenance,
            trunc: self.trunc,
            precision_vq: self.precision,
            worst_deviation: o.worst,
            achieved_precision: o.achieved,
            detail: o.detail,
            runtime_s: cfg.timings.then(|| format!("{:.3}", elapsed.as_secs_f64())),
            elapsed,
        }
    }
}

fn field(p: u64) -> PiField {
    PiField::new(p).expect("suite primes are odd primes")
}

fn dwork(p: u64, twists: &[DworkTwist], n: usize) -> weil2::Result<SigmaNablaModule> {
    let f = field(p);
    let parts = twists.iter().map(|t| make_dwork_module(f, t, p, n)).collect::<weil2::Result<Vec<_>>>()?;
    let refs: Vec<&SigmaNablaModule> = parts.iter().collect();
    direct_sum(&refs)
}

fn qv(n: i64) -> Q64 {
    Q64::from_integer(n)
}

/// Run the checks of one criterion.
pub fn run_criterion(c: u8, cfg: &SuiteConfig) -> Vec<CheckRecord> {
    match c {
        1 => gauss_purity(cfg),
        2 => trace_formula(cfg),
        3 => dimension_formula(cfg),
        4 => fourier_constancy(cfg),
        5 => duality(cfg),
        6 => slope_bounds(cfg),
        7 => weyl_suite(cfg),
        8 => horizontal_sections(cfg),
        9 => splitting_bridge(cfg),
        10 => surjectivity(cfg),
        _ => Vec::new(),
    }
}

/// All checks of a suite, sorted by name and then by inputs.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut out: Vec<CheckRecord> = suite.criteria().into_iter().flat_map(|c| run_criterion(c, cfg)).collect();
    out.sort_by_cached_key(|r| (r.name.clone(), serde_json::to_string(&r.inputs).unwrap_or_default()));
    out
}

pub fn report(suite: Suite, cfg: &SuiteConfig, checks: &[CheckRecord]) -> Value {
    let passed = checks.iter().filter(|c| c.pass()).count();
    json!({
        "command": "verify",
        "suite": suite.name(),
        "seed": cfg.seed,
        "checks": checks,
        "summary": {
            "total": checks.len(),
            "passed": passed,
            "failed": checks.len() - passed,
            "all_pass": passed == checks.len(),
        },
    })
}

fn gauss_purity(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let prec = cfg.precision(10);
    [3u64, 5, 7, 11]
        .into_iter()
        .map(|p| {
            let n = cfg.trunc(2, p);
            Check {
                name: "gauss_purity",
                criterion: 1,
                inputs: vec![("p", json!(p)), ("twist", json!([0, 0, 1]))],
                provenance: "precision-bounded",
                trunc: Some(n),
                precision: Some(prec),
            }
            .run(cfg, || {
                let t = DworkTwist::monomial(1, 2);
                let m = dwork(p, std::slice::from_ref(&t), n)?;
                let h = frobenius_on_h1(&m, qv(prec))?;
                let known = h.charpoly.known_mod();
                let c = h.charpoly.approx_coeffs(qv(prec))?;
                if h.dim != 1 || c.len() != 2 {
                    return Ok(Outcome { detail: format!("dim {}", h.dim), ..Outcome::default() });
                }
                let alpha = c[1].neg();
                let s1 = char_sum(&t, p, 1)?;
                let target = embed_cyclo(&-&s1, qv(prec + 2))?;
                let disc = alpha.discrepancy(&target);
                let mod_pi = disc >= Valuation::Finite(Q64::new(1, p as i64 - 1));
                let oracle = oracle_l_poly(&[t], p)?;
                let exact = identify(&h.charpoly, &oracle.h1, qv(prec))?;
                let weight = match &exact {
                    Some(cp) => Some(weight_check(cp, qv(1), 1e-9)?),
                    None => None,
                };
                let slopes = newton_slopes(&h.charpoly)?;
                let slope_ok = slopes == vec![q64(1, 2)];
                let weight_ok = weight.as_ref().is_some_and(|w| w.pass);
                Ok(Outcome {
                    pass: known >= Valuation::int(10) && mod_pi && weight_ok && slope_ok,
                    worst: weight.as_ref().map(|w| encode::decimal(w.worst_deviation)),
                    achieved: Some(encode::valuation(known)),
                    detail: format!(
                        "dim 1, v(alpha + S1) = {}, slopes {:?}, identified {}, weight {}",
                        disc,
                        slopes.iter().map(|s| encode::q64(*s)).collect::<Vec<_>>(),
                        exact.is_some(),
                        weight_ok
                    ),
                })
            })
        })
        .collect()
}

fn trace_formula(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let prec = cfg.precision(8);
    let cases: [(u64, &[i64]); 4] = [(3, &[0, 0, 1]), (5, &[0, 0, 1]), (3, &[0, 1, 0, 0, 1]), (5, &[0, 1, 0, 1])];
    cases
        .into_iter()
        .map(|(p, coeffs)| {
            let t = DworkTwist::new(coeffs);
            let n = cfg.trunc(t.degree(), p);
            Check {
                name: "trace_formula",
                criterion: 2,
                inputs: vec![("p", json!(p)), ("twist", json!(coeffs)), ("n_max", json!(4))],
                provenance: "precision-bounded",
                trunc: Some(n),
                precision: Some(prec),
            }
            .run(cfg, || {
                let m = dwork(p, std::slice::from_ref(&t), n)?;
                let lef = lefschetz_verify(&m, 4, qv(prec))?;
                let sums: Vec<CycloElem> = lef.records.iter().map(|r| r.oracle.clone()).collect();
                // L(t) to order 4 from the sums; beyond the degree the
                // coefficients must vanish exactly.
                let l = exp_of_sums(&sums)?;
                let deg = lef.oracle_l.degree();
                let consistent = l.iter().skip(deg + 1).all(|c| c.is_zero()) && l[..=deg] == lef.oracle_l.h1[..];
                let h1c = h1c_via_duality(&m, qv(prec))?;
                let c = h1c.approx_coeffs(qv(prec))?;
                let mut worst = Valuation::Infinity;
                if c.len() == deg + 1 {
                    for (x, a) in c.iter().zip(&l) {
                        worst = worst.min(x.discrepancy(&embed_cyclo(a, qv(prec + 2))?));
                    }
                } else {
                    worst = Valuation::int(0);
                }
                let trace_worst =
                    lef.records.iter().map(|r| r.discrepancy).fold(Valuation::Infinity, Valuation::min);
                Ok(Outcome {
                    pass: lef.pass() && consistent && worst >= Valuation::int(8),
                    worst: Some(encode::valuation(worst.min(trace_worst))),
                    achieved: Some(encode::valuation(h1c.known_mod())),
                    detail: format!(
                        "degree {}, newton consistency {}, coefficient discrepancy {}, trace discrepancy {}",
                        deg, consistent, worst, trace_worst
                    ),
                })
            })
        })
        .collect()
}

/// Summands of the rank-`r`, degree-`d` lattice point.
fn lattice_twists(d: usize, rank: usize) -> Vec<DworkTwist> {
    let mut a = vec![0i64; d + 1];
    a[d] = 1;
    a[1] += 1;
    let mut b = vec![0i64; d + 1];
    b[d] = 2;
    b[d - 1] += 1;
    [DworkTwist::new(&a), DworkTwist::new(&b)].into_iter().take(rank).collect()
}

fn lattice() -> Vec<(u64, usize, usize)> {
    let mut out = Vec::new();
    for p in [3u64, 5, 7] {
        for d in 2..=5usize {
            if (d as u64).is_multiple_of(p) {
                continue;
            }
            for rank in 1..=2 {
                out.push((p, d, rank));
            }
        }
    }
    out
}

fn dimension_formula(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    lattice()
        .into_iter()
        .map(|(p, d, rank)| {
            let twists = lattice_twists(d, rank);
            Check {
                name: "dimension_formula",
                criterion: 3,
                inputs: vec![
                    ("p", json!(p)),
                    ("rank", json!(rank)),
                    ("summands", json!(twists.iter().map(|t| t.coeffs().to_vec()).collect::<Vec<_>>())),
                ],
                provenance: "oracle-exact",
                trunc: None,
                precision: None,
            }
            .run(cfg, || {
                let m = dwork(p, &twists, d * p as usize)?;
                let dim = H1Presentation::new(&m)?.dim();
                let oracle = oracle_l_poly(&twists, p)?.degree();
                let expected = (d - 1) * rank;
                Ok(Outcome {
                    pass: dim == expected && oracle == expected,
                    detail: format!("basis {}, oracle degree {}, expected {}", dim, oracle, expected),
                    ..Outcome::default()
                })
            })
        })
        .collect()
}

fn slope_bounds(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let prec = cfg.precision(10);
    lattice()
        .into_iter()
        .map(|(p, d, rank)| {
            let twists = lattice_twists(d, rank);
            let n = cfg.trunc(d, p);
            Check {
                name: "slope_bounds",
                criterion: 6,
                inputs: vec![
                    ("p", json!(p)),
                    ("rank", json!(rank)),
                    ("summands", json!(twists.iter().map(|t| t.coeffs().to_vec()).collect::<Vec<_>>())),
                ],
                provenance: "precision-bounded",
                trunc: Some(n),
                precision: Some(prec),
            }
            .run(cfg, || {
                let m = dwork(p, &twists, n)?;
                let h = frobenius_on_h1(&m, qv(prec))?;
                let slopes = newton_slopes(&h.charpoly)?;
                let in_range = slopes.iter().all(|s| *s >= qv(0) && *s <= qv(1));
                let mut shifts = true;
                for k in [1i64, 2] {
                    let twisted = newton_slopes(&h.charpoly.tate_twist(k)?)?;
                    shifts &= twisted.len() == slopes.len() && twisted.iter().zip(&slopes).all(|(a, b)| *a == *b + qv(k));
                }
                Ok(Outcome {
                    pass: in_range && shifts && slopes.len() == (d - 1) * rank,
                    achieved: Some(encode::valuation(h.charpoly.known_mod())),
                    detail: format!(
                        "slopes {:?}, twist shifts exact {}",
                        slopes.iter().map(|s| encode::q64(*s)).collect::<Vec<_>>(),
                        shifts
                    ),
                    ..Outcome::default()
                })
            })
        })
        .collect()
}

fn fourier_constancy(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let p = 5u64;
    let prec = cfg.precision(8);
    let n = cfg.trunc(3, p);
    let t = DworkTwist::monomial(1, 3);
    let mut out: Vec<CheckRecord> = (0..5i64)
        .map(|a| {
            Check {
                name: "fourier_fiber",
                criterion: 4,
                inputs: vec![("p", json!(p)), ("twist", json!([0, 0, 0, 1])), ("a", json!(a.to_string()))],
                provenance: "precision-bounded",
                trunc: Some(n),
                precision: Some(prec),
            }
            .run(cfg, || {
                let m = dwork(p, std::slice::from_ref(&t), n)?;
                let r = fourier_fiber(&m, a, qv(prec), 1e-6)?;
                let weight_ok = r.weight.as_ref().is_some_and(|w| w.pass);
                Ok(Outcome {
                    pass: r.dim == 2 && r.identified && weight_ok,
                    worst: r.weight.as_ref().map(|w| encode::decimal(w.worst_deviation)),
                    achieved: Some(encode::valuation(r.charpoly.known_mod())),
                    detail: format!("dim {}, identified {}, weight {}", r.dim, r.identified, weight_ok),
                })
            })
        })
        .collect();
    out.push(
        Check {
            name: "fourier_fiber",
            criterion: 4,
            inputs: vec![("p", json!(p)), ("twist", json!([0, 0, 0, 1])), ("a", json!("F_p^2[0,1]"))],
            provenance: "oracle-exact",
            trunc: None,
            precision: None,
        }
        .run(cfg, || {
            let base = FiniteField::new(p, 2)?;
            let a = base.from_coeffs(&[0, 1])?;
            let r = fourier_fiber_over(std::slice::from_ref(&t), &base, &a, 1e-6)?;
            let weight_ok = r.weight.as_ref().is_some_and(|w| w.pass);
            Ok(Outcome {
                pass: r.dim == 2 && weight_ok,
                worst: r.weight.as_ref().map(|w| encode::decimal(w.worst_deviation)),
                detail: format!("dim {} over F_{}, weight {}", r.dim, r.q, weight_ok),
                ..Outcome::default()
            })
        }),
    );
    out
}

fn duality(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let prec = cfg.precision(10);
    [3u64, 5, 7]
        .into_iter()
        .map(|p| {
            let n = cfg.trunc(2, p);
            Check {
                name: "gauss_duality",
                criterion: 5,
                inputs: vec![("p", json!(p))],
                provenance: "precision-bounded",
                trunc: Some(n),
                precision: Some(prec),
            }
            .run(cfg, || {
                let plus = DworkTwist::monomial(1, 2);
                let minus = DworkTwist::monomial(-1, 2);
                let a = oracle_l_poly(std::slice::from_ref(&plus), p)?.h1;
                let b = oracle_l_poly(std::slice::from_ref(&minus), p)?.h1;
                let exact = &(-&a[1]) * &(-&b[1]) == CycloElem::from_int(p, p as i64)
                    && duality_holds_exactly(&a, &b, p);
                let ha = frobenius_on_h1(&dwork(p, &[plus], n)?, qv(prec))?;
                let hb = frobenius_on_h1(&dwork(p, &[minus], n)?, qv(prec))?;
                let ca = ha.charpoly.approx_coeffs(qv(prec))?;
                let cb = hb.charpoly.approx_coeffs(qv(prec))?;
                let prod = ca[1].neg().mul(&cb[1].neg());
                let disc = prod.discrepancy(&PiAdicApprox::exact(field(p).from_int(p as i64)));
                Ok(Outcome {
                    pass: exact && disc >= Valuation::int(8),
                    worst: Some(encode::valuation(disc)),
                    achieved: Some(encode::valuation(prod.known_mod())),
                    detail: format!("exact pairing {}, v(alpha alpha' - p) = {}", exact, disc),
                })
            })
        })
        .collect()
}

fn random_elem(rng: &mut ChaCha8Rng, f: PiField, lo: i64, hi: i64) -> PiFieldElem {
    let c: i64 = rng.gen_range(-4..=4);
    f.from_int(c).mul_pi_pow(rng.gen_range(lo..=hi))
}

fn horizontal_sections(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut rng = cfg.rng(8);
    let order = 40;
    (0..20)
        .map(|sample| {
            let p = [3u64, 5, 7][rng.gen_range(0..3)];
            let rank = rng.gen_range(1..=3usize);
            let deg = rng.gen_range(0..=3usize);
            let f = field(p);
            let n: Vec<Mat<PiFieldElem>> = (0..=deg)
                .map(|_| Mat::from_fn(rank, rank, |_, _| random_elem(&mut rng, f, -1, 2)))
                .collect();
            Check {
                name: "horizontal_sections",
                criterion: 8,
                inputs: vec![
                    ("sample", json!(sample)),
                    ("p", json!(p)),
                    ("rank", json!(rank)),
                    ("degree", json!(deg)),
                ],
                provenance: "exact-arithmetic",
                trunc: Some(order),
                precision: None,
            }
            .run(cfg, || {
                let u = horizontal_basis(&n, order);
                let res = horizontal_residual(&n, &u, order);
                let zero = res.iter().all(|m| m.is_zero());
                Ok(Outcome {
                    pass: zero,
                    detail: format!("residual of (d/dt + N)U vanishes below t^{}: {}", order, zero),
                    ..Outcome::default()
                })
            })
        })
        .collect()
}

fn splitting_bridge(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    [3u64, 5]
        .into_iter()
        .map(|p| {
            let n = cfg.trunc.unwrap_or(120);
            Check {
                name: "splitting_bridge",
                criterion: 9,
                inputs: vec![("p", json!(p))],
                provenance: "precision-bounded",
                trunc: Some(n),
                precision: Some(6),
            }
            .run(cfg, || {
                let f = field(p);
                let pi = f.pi();
                let target = qv(8);
                let exponent = KPoly::monomial(pi.clone(), 1).sub(&KPoly::monomial(pi, p as usize));
                let theta = exp_poly_with_tail(&exponent, n, dwork_tail(p, p, 1))?;
                let one = PiAdicApprox::exact(f.one());
                let zeta = hensel_zeta_p(f, target)?;
                let d1 = theta.eval(&one, target).discrepancy(&zeta);
                let inverse = frobenius_commutation_series(f, p, n)?;
                let d2 = inverse.eval(&one, target).mul(&zeta).discrepancy(&one);
                let bar = q64(p as i64 - 1, (p * p) as i64) - q64(1, 20);
                let short = frobenius_commutation_series(f, p, 60)?;
                let s1 = short.measured_slope(10, 60).unwrap_or(qv(0));
                let s2 = theta.truncate(60).measured_slope(10, 60).unwrap_or(qv(0));
                let six = Valuation::int(6);
                Ok(Outcome {
                    pass: d1 >= six && d2 >= six && s1 >= bar && s2 >= bar,
                    worst: Some(encode::valuation(d1.min(d2))),
                    achieved: Some(encode::q64(s1.min(s2))),
                    detail: format!(
                        "v(theta(1) - zeta) = {}, v(series(1) zeta - 1) = {}, slopes {} and {} against {}",
                        d1,
                        d2,
                        encode::q64(s1),
                        encode::q64(s2),
                        encode::q64(bar)
                    ),
                })
            })
        })
        .collect()
}

fn random_kpoly(rng: &mut ChaCha8Rng, f: PiField, deg: usize) -> KPoly {
    let c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-3..=3)).collect();
    KPoly::from_ints(f, &c)
}

fn surjectivity(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut rng = cfg.rng(10);
    let order = 6;
    let bound = 40;
    (0..20)
        .map(|sample| {
            let p = [3u64, 5, 7][rng.gen_range(0..3)];
            let d = loop {
                let d = rng.gen_range(2..=4usize);
                if !(d as u64).is_multiple_of(p) {
                    break d;
                }
            };
            let mut coeffs: Vec<i64> = (0..=d).map(|_| rng.gen_range(-3..=3)).collect();
            coeffs[d] = [1, 2, -1][rng.gen_range(0..3)];
            let f = field(p);
            let v: Vec<Vec<KPoly>> = (0..order).map(|_| vec![random_kpoly(&mut rng, f, 4)]).collect();
            Check {
                name: "surjectivity_probe",
                criterion: 10,
                inputs: vec![("sample", json!(sample)), ("p", json!(p)), ("twist", json!(coeffs.clone()))],
                provenance: "exact-arithmetic",
                trunc: Some(order),
                precision: Some(bound),
            }
            .run(cfg, || {
                let m = make_dwork_module(f, &DworkTwist::new(&coeffs), p, d * p as usize)?;
                let r = surjectivity_probe(&m, &v, order, qv(bound))?;
                Ok(Outcome {
                    pass: r.pass(),
                    worst: Some(encode::valuation(r.residual_valuation)),
                    achieved: Some(encode::valuation(r.residual_valuation)),
                    detail: format!("residual valuation {} against bound {}", r.residual_valuation, r.bound),
                })
            })
        })
        .collect()
}

fn random_operator(rng: &mut ChaCha8Rng, f: PiField) -> WeylOperator {
    let k = rng.gen_range(1..=3);
    WeylOperator::from_terms(
        f,
        (0..k)
            .map(|_| {
                let c: i64 = [1, 2, 3, -1, -2, -3][rng.gen_range(0..6)];
                ((rng.gen_range(0..=6), rng.gen_range(0..=6)), f.from_int(c).mul_pi_pow(rng.gen_range(-1..=1)))
            })
            .collect::<Vec<_>>(),
    )
}

fn weyl_check(
    cfg: &SuiteConfig,
    name: &str,
    count: usize,
    f: impl FnOnce() -> weil2::Result<(usize, String)>,
) -> CheckRecord {
    Check {
        name,
        criterion: 7,
        inputs: vec![("seed", json!(cfg.seed)), ("samples", json!(count))],
        provenance: "exact-arithmetic",
        trunc: None,
        precision: None,
    }
    .run(cfg, || {
        let (failures, detail) = f()?;
        Ok(Outcome { pass: failures == 0, detail, ..Outcome::default() })
    })
}

fn weyl_suite(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let fields = [field(3), field(5)];
    let mut out = Vec::new();
    let mut rng = cfg.rng(7);
    out.push(weyl_check(cfg, "weyl_associativity", 200, || {
        let mut bad = 0;
        for i in 0..200 {
            let f = fields[i % 2];
            let (a, b, c) = (random_operator(&mut rng, f), random_operator(&mut rng, f), random_operator(&mut rng, f));
            if weyl_mul(&weyl_mul(&a, &b), &c) != weyl_mul(&a, &weyl_mul(&b, &c)) {
                bad += 1;
            }
        }
        Ok((bad, format!("{} of 200 triples fail (ab)c = a(bc)", bad)))
    }));
    let mut rng = cfg.rng(17);
    out.push(weyl_check(cfg, "weyl_two_routes", 200, || {
        let mut bad = 0;
        for i in 0..200 {
            let f = fields[i % 2];
            let (a, b) = (random_operator(&mut rng, f), random_operator(&mut rng, f));
            if weyl_mul(&a, &b) != weyl_mul_by_words(&a, &b) {
                bad += 1;
            }
        }
        Ok((bad, format!("{} of 200 pairs differ between reordering and word rewriting", bad)))
    }));
    let mut rng = cfg.rng(27);
    out.push(weyl_check(cfg, "rho_homomorphism", 200, || {
        let mut bad = 0;
        for i in 0..200 {
            let f = fields[i % 2];
            let (a, b) = (random_operator(&mut rng, f), random_operator(&mut rng, f));
            if rho(&weyl_mul(&a, &b)) != weyl_mul(&rho(&a), &rho(&b)) {
                bad += 1;
            }
        }
        Ok((bad, format!("{} of 200 pairs fail rho(ab) = rho(a)rho(b)", bad)))
    }));
    let mut rng = cfg.rng(37);
    out.push(weyl_check(cfg, "rho_squared", 200, || {
        let mut bad = 0;
        for i in 0..200 {
            let a = random_operator(&mut rng, fields[i % 2]);
            if rho(&rho(&a)) != a.sign_substitution() || rho_closed_form(&a) != rho(&a) {
                bad += 1;
            }
        }
        Ok((bad, format!("{} of 200 fail rho^2 = sign substitution or the closed form", bad)))
    }));
    out.push(weyl_check(cfg, "rho_generators", 2, || {
        let mut bad = 0;
        for f in fields {
            let x = WeylOperator::x(f);
            let d = WeylOperator::d(f);
            let comm = weyl_mul(&d, &x).sub(&weyl_mul(&x, &d));
            bad += usize::from(rho(&x) != d)
                + usize::from(rho(&d) != x.neg())
                + usize::from(rho(&comm) != WeylOperator::scalar(f.pi_pow(-1)));
        }
        Ok((bad, format!("{} generator identities fail", bad)))
    }));
    out.push(weyl_check(cfg, "factorial_bracket", 200, || {
        let mut bad = 0;
        for p in [2u64, 3, 5, 7, 11, 13] {
            for n in 1..=200u64 {
                let (lo, hi) = factorial_valuation_bracket(n, p);
                let v = qv(vp_factorial(n, p) as i64);
                if v < lo || v > hi {
                    bad += 1;
                }
            }
        }
        Ok((bad, format!("{} of 1200 (p, n) fall outside the bracket", bad)))
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_mapping_covers_every_criterion_once() {
        let mut all: Vec<u8> = [Suite::Weyl, Suite::Trace, Suite::Weights, Suite::Slopes, Suite::Fourier, Suite::Duality]
            .into_iter()
            .flat_map(|s| s.criteria())
            .collect();
        all.sort();
        assert_eq!(all, Suite::All.criteria());
    }

    #[test]
    fn lattice_avoids_divisible_degrees() {
        assert!(lattice().iter().all(|(p, d, _)| !(*d as u64).is_multiple_of(*p)));
        assert_eq!(lattice().len(), 20);
        assert_eq!(lattice_twists(2, 2)[1].coeffs(), &[0, 1, 2]);
    }

    #[test]
    fn precision_never_drops() {
        let cfg = SuiteConfig { precision: Some(4), ..SuiteConfig::default() };
        assert_eq!(cfg.precision(10), 10);
    }

    #[test]
    fn weyl_suite_passes() {
        assert!(weyl_suite(&SuiteConfig::default()).iter().all(|r| r.pass()));
    }
}
