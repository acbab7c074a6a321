use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::{Mat, PiField, PiFieldElem, RingElem};
use crate::series::{dwork_tail, exp_poly_with_tail, KPoly, Tail, TruncatedSeries, MAX_TRUNCATION};

/// Integer polynomial `P` defining the rank-one twist `L_P`, ascending.
///
/// The constant term is dropped on construction: constant twists only
/// rescale the Frobenius by a unit and are treated as trivial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DworkTwist {
    coeffs: Vec<i64>,
}

impl DworkTwist {
    pub fn new(coeffs: &[i64]) -> Self {
        let mut c = coeffs.to_vec();
        if let Some(first) = c.first_mut() {
            *first = 0;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        DworkTwist { coeffs: c }
    }

    pub fn zero() -> Self {
        DworkTwist { coeffs: Vec::new() }
    }

    /// `a·x^k`.
    pub fn monomial(a: i64, k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = a;
        Self::new(&c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Degree, 0 for the trivial twist.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> i64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, o: &DworkTwist) -> DworkTwist {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c: Vec<i64> = (0..n)
            .map(|i| self.coeffs.get(i).copied().unwrap_or(0) + o.coeffs.get(i).copied().unwrap_or(0))
            .collect();
        DworkTwist::new(&c)
    }

    pub fn neg(&self) -> DworkTwist {
        DworkTwist { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn to_kpoly(&self, field: PiField) -> KPoly {
        KPoly::from_ints(field, &self.coeffs)
    }

    pub fn label(&self) -> String {
        if self.is_trivial() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{}", i),
            };
            let s = match (c, i) {
                (1, i) if i > 0 => mono,
                (-1, i) if i > 0 => format!("-{}", mono),
                (c, 0) => c.to_string(),
                (c, _) => format!("{}{}", c, mono),
            };
            parts.push(s);
        }
        parts.join("+").replace("+-", "-")
    }
}

/// A (σ,∇)-module of finite rank over the truncated overconvergent algebra
/// in one variable, with Frobenius lift `x ↦ x^q`.
///
/// The connection is `∇e_j = Σ_i N_ij e_i ⊗ dx` and the Frobenius
/// `F e_j = Σ_i Φ_ij e_i`.
#[derive(Clone)]
pub struct SigmaNablaModule {
    field: PiField,
    q: u64,
    connection: Mat<KPoly>,
    frobenius: Mat<TruncatedSeries>,
    label: String,
    /// Present when the module is a direct sum of Dwork twists.
    summands: Option<Vec<DworkTwist>>,
}

pub(crate) fn check_q(p: u64, q: u64) -> Result<u32> {
    let mut k = 0;
    let mut x = q;
    while x > 1 && x.is_multiple_of(p) {
        x /= p;
        k += 1;
    }
    if x != 1 || k == 0 {
        return Err(Error::NotPowerOfP { p, q });
    }
    Ok(k)
}

impl SigmaNablaModule {
    /// Assemble a module from explicit matrices.
    pub fn from_parts(
        field: PiField,
        q: u64,
        connection: Mat<KPoly>,
        frobenius: Mat<TruncatedSeries>,
        label: impl Into<String>,
    ) -> Result<Self> {
        check_q(field.p(), q)?;
        let r = connection.rows();
        if connection.cols() != r || frobenius.rows() != r || frobenius.cols() != r || r == 0 {
            return Err(Error::DimensionMismatch(format!(
                "connection {}x{}, frobenius {}x{}",
                connection.rows(),
                connection.cols(),
                frobenius.rows(),
                frobenius.cols()
            )));
        }
        let n = frobenius.get(0, 0).trunc_order();
        if let Some(bad) = frobenius.entries().iter().find(|s| s.trunc_order() != n) {
            return Err(Error::TruncationMismatch(n, bad.trunc_order()));
        }
        Ok(SigmaNablaModule { field, q, connection, frobenius, label: label.into(), summands: None })
    }

    pub fn field(&self) -> PiField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rank(&self) -> usize {
        self.connection.rows()
    }

    pub fn trunc_order(&self) -> usize {
        self.frobenius.get(0, 0).trunc_order()
    }

    pub fn connection(&self) -> &Mat<KPoly> {
        &self.connection
    }

    pub fn frobenius(&self) -> &Mat<TruncatedSeries> {
        &self.frobenius
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn summands(&self) -> Option<&[DworkTwist]> {
        self.summands.as_deref()
    }

    /// Largest degree occurring in the connection matrix.
    pub fn connection_degree(&self) -> Option<usize> {
        self.connection.entries().iter().filter_map(|e| e.degree()).max()
    }

    /// Replace the Frobenius matrix (used to build deliberately broken
    /// inputs for diagnostics).
    pub fn with_frobenius(mut self, frobenius: Mat<TruncatedSeries>) -> Self {
        self.frobenius = frobenius;
        self.summands = None;
        self
    }

    /// The same module truncated at a lower order.
    pub fn truncate(&self, n: usize) -> SigmaNablaModule {
        let mut m = self.clone();
        m.frobenius = self.frobenius.map(|s| s.truncate(n));
        m
    }
}

/// The rank-one module `L_P`: connection `−πP′(x)`, Frobenius
/// `exp(π(P(x) − P(x^q)))`.
///
/// The sign makes the residual of the compatibility identity vanish exactly,
/// and the fibre at a Teichmüller point `ω` is `ζ^{Tr P(ω̄)}` for the root
/// of unity `ζ ≡ 1 + π`.
pub fn make_dwork_module(field: PiField, twist: &DworkTwist, q: u64, n: usize) -> Result<SigmaNablaModule> {
    check_q(field.p(), q)?;
    let d = twist.degree();
    let needed = d.saturating_mul(q as usize).max(n);
    if needed > MAX_TRUNCATION {
        return Err(Error::TruncationBudget { needed, cap: MAX_TRUNCATION });
    }
    let pi = field.pi();
    let p_poly = twist.to_kpoly(field);
    let connection = p_poly.derivative().scale(&(-&pi));
    let exponent = p_poly.sub(&p_poly.substitute_power(q as usize)).scale(&pi);
    let frob = exp_poly_with_tail(&exponent, n, dwork_tail(field.p(), q, d))?;
    let label = format!("L[{}]", twist.label());
    Ok(SigmaNablaModule {
        field,
        q,
        connection: Mat::from_rows(vec![vec![connection]]),
        frobenius: Mat::from_rows(vec![vec![frob]]),
        label,
        summands: Some(vec![twist.clone()]),
    })
}

pub fn trivial_module(field: PiField, q: u64, n: usize) -> Result<SigmaNablaModule> {
    make_dwork_module(field, &DworkTwist::zero(), q, n)
}

fn compatible(a: &SigmaNablaModule, b: &SigmaNablaModule) -> Result<()> {
    if a.field != b.field {
        return Err(Error::FieldMismatch(a.p(), b.p()));
    }
    if a.q != b.q {
        return Err(Error::NotPowerOfP { p: a.p(), q: b.q });
    }
    if a.trunc_order() != b.trunc_order() {
        return Err(Error::TruncationMismatch(a.trunc_order(), b.trunc_order()));
    }
    Ok(())
}

/// Block-diagonal sum.
pub fn direct_sum(modules: &[&SigmaNablaModule]) -> Result<SigmaNablaModule> {
    let first = modules.first().ok_or_else(|| Error::DimensionMismatch("empty direct sum".into()))?;
    for m in modules {
        compatible(first, m)?;
    }
    let field = first.field;
    let n = first.trunc_order();
    let r: usize = modules.iter().map(|m| m.rank()).sum();
    let mut conn = Mat::zeros(r, r, &KPoly::zero(field));
    let mut frob = Mat::zeros(r, r, &TruncatedSeries::zero(field, n));
    let mut at = 0;
    for m in modules {
        for i in 0..m.rank() {
            for j in 0..m.rank() {
                conn.set(at + i, at + j, m.connection.get(i, j).clone());
                frob.set(at + i, at + j, m.frobenius.get(i, j).clone());
            }
        }
        at += m.rank();
    }
    let summands = modules
        .iter()
        .map(|m| m.summands.clone())
        .collect::<Option<Vec<_>>>()
        .map(|v| v.concat());
    let label = modules.iter().map(|m| m.label.as_str()).collect::<Vec<_>>().join(" (+) ");
    Ok(SigmaNablaModule { field, q: first.q, connection: conn, frobenius: frob, label, summands })
}

/// Tensor product: Kronecker-sum connection, Kronecker-product Frobenius.
///
/// When both factors are sums of Dwork twists the result is rebuilt from
/// the summed twists, whose matrices agree with the generic construction.
pub fn tensor(a: &SigmaNablaModule, b: &SigmaNablaModule) -> Result<SigmaNablaModule> {
    compatible(a, b)?;
    if let (Some(sa), Some(sb)) = (&a.summands, &b.summands) {
        let mut parts = Vec::with_capacity(sa.len() * sb.len());
        for x in sa {
            for y in sb {
                parts.push(make_dwork_module(a.field, &x.add(y), a.q, a.trunc_order())?);
            }
        }
        let refs: Vec<&SigmaNablaModule> = parts.iter().collect();
        let mut m = direct_sum(&refs)?;
        m.label = format!("{} (x) {}", a.label, b.label);
        return Ok(m);
    }
    tensor_generic(a, b)
}

pub fn tensor_generic(a: &SigmaNablaModule, b: &SigmaNablaModule) -> Result<SigmaNablaModule> {
    compatible(a, b)?;
    let field = a.field;
    let ia = Mat::identity(a.rank(), &KPoly::zero(field));
    let ib = Mat::identity(b.rank(), &KPoly::zero(field));
    let conn = a.connection.kronecker(&ib).add(&ia.kronecker(&b.connection));
    let frob = a.frobenius.kronecker(&b.frobenius);
    let label = format!("{} (x) {}", a.label, b.label);
    SigmaNablaModule::from_parts(field, a.q, conn, frob, label)
}

/// Dual: connection `−Nᵀ`, Frobenius `(Φ⁻¹)ᵀ`.
pub fn dual(m: &SigmaNablaModule) -> Result<SigmaNablaModule> {
    if let Some(s) = &m.summands {
        let parts = s
            .iter()
            .map(|t| make_dwork_module(m.field, &t.neg(), m.q, m.trunc_order()))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&SigmaNablaModule> = parts.iter().collect();
        let mut d = direct_sum(&refs)?;
        d.label = format!("dual({})", m.label);
        return Ok(d);
    }
    dual_generic(m)
}

pub fn dual_generic(m: &SigmaNablaModule) -> Result<SigmaNablaModule> {
    let conn = m.connection.transpose().neg();
    let inv = invert_series_matrix(&m.frobenius)?;
    SigmaNablaModule::from_parts(m.field, m.q, conn, inv.transpose(), format!("dual({})", m.label))
}

/// Inverse of a matrix of truncated series whose constant term is
/// invertible, solved degree by degree. Tail certificates are not
/// propagated through the inverse.
pub fn invert_series_matrix(a: &Mat<TruncatedSeries>) -> Result<Mat<TruncatedSeries>> {
    let r = a.rows();
    let first = a.get(0, 0);
    let field = first.field();
    let n = first.trunc_order();
    let zero = field.zero();
    let coeff_mat = |k: usize| Mat::from_fn(r, r, |i, j| a.get(i, j).coeff(k).clone());
    let a0_inv = invert_field_matrix(&coeff_mat(0))?;
    let mut x: Vec<Mat<PiFieldElem>> = Vec::with_capacity(n + 1);
    x.push(a0_inv.clone());
    let blocks: Vec<Mat<PiFieldElem>> = (0..=n).map(coeff_mat).collect();
    for k in 1..=n {
        let mut acc = Mat::zeros(r, r, &zero);
        for j in 1..=k {
            if blocks[j].is_zero() {
                continue;
            }
            acc = acc.add(&blocks[j].mul(&x[k - j]));
        }
        x.push(a0_inv.mul(&acc).neg());
    }
    Ok(Mat::from_fn(r, r, |i, j| {
        let coeffs = x.iter().map(|m| m.get(i, j).clone()).collect();
        TruncatedSeries::new(field, coeffs, n, Tail::Unknown)
    }))
}

/// Gauss–Jordan inverse over `K`.
pub fn invert_field_matrix(a: &Mat<PiFieldElem>) -> Result<Mat<PiFieldElem>> {
    let n = a.rows();
    if n != a.cols() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let like = a.get(0, 0).clone();
    let mut m: Vec<Vec<PiFieldElem>> = (0..n)
        .map(|i| {
            let mut row: Vec<PiFieldElem> = (0..n).map(|j| a.get(i, j).clone()).collect();
            row.extend((0..n).map(|j| if i == j { like.one_like() } else { like.zero_like() }));
            row
        })
        .collect();
    for col in 0..n {
        // Pivot on the smallest valuation for numerical hygiene of later
        // projections; the arithmetic itself is exact.
        let piv = (col..n)
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| m[r][col].valuation())
            .ok_or(Error::DivisionByZero)?;
        m.swap(col, piv);
        let inv = m[col][col].inv()?;
        for c in 0..2 * n {
            m[col][c] = &m[col][c] * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..2 * n {
                    let t = &m[col][c] * &f;
                    m[r][c] = &m[r][c] - &t;
                }
            }
        }
    }
    Ok(Mat::from_fn(n, n, |i, j| m[i][n + j].clone()))
}

impl fmt::Debug for SigmaNablaModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SigmaNablaModule({}, p={}, q={}, rank={}, N={})",
            self.label,
            self.p(),
            self.q,
            self.rank(),
            self.trunc_order()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(p: u64) -> PiField {
        PiField::new(p).unwrap()
    }

    #[test]
    fn twist_normalisation() {
        let t = DworkTwist::new(&[5, 1, 0, 2, 0]);
        assert_eq!(t.coeffs(), &[0, 1, 0, 2]);
        assert_eq!(t.degree(), 3);
        assert_eq!(t.label(), "2x^3+x");
        assert_eq!(DworkTwist::new(&[0, -1, 1]).label(), "x^2-x");
        assert!(DworkTwist::new(&[7]).is_trivial());
    }

    #[test]
    fn dwork_module_shapes() {
        let f = k(3);
        let lx = make_dwork_module(f, &DworkTwist::monomial(1, 1), 3, 20).unwrap();
        assert_eq!(lx.connection().get(0, 0), &KPoly::constant(-&f.pi()));
        let lx2 = make_dwork_module(f, &DworkTwist::monomial(1, 2), 3, 20).unwrap();
        assert_eq!(lx2.connection().get(0, 0), &KPoly::monomial(f.pi().scale_i64(-2), 1));
        let triv = trivial_module(f, 3, 20).unwrap();
        assert!(triv.connection().get(0, 0).is_zero());
        assert_eq!(triv.frobenius().get(0, 0), &TruncatedSeries::one(f, 20));
    }

    #[test]
    fn rejects_bad_q() {
        let f = k(3);
        assert!(matches!(
            make_dwork_module(f, &DworkTwist::monomial(1, 1), 6, 10),
            Err(Error::NotPowerOfP { .. })
        ));
    }

    #[test]
    fn field_matrix_inverse() {
        let f = k(5);
        let a = Mat::from_rows(vec![vec![f.pi(), f.one()], vec![f.from_int(2), f.from_int(3)]]);
        let b = invert_field_matrix(&a).unwrap();
        assert_eq!(a.mul(&b), Mat::identity(2, &f.zero()));
    }
}
