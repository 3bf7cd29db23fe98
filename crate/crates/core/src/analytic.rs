//! The adapted basis φ_k at a numeric β, the identities it satisfies, and
//! determinantal formulas for τ evaluated on a diagonal matrix.
//!
//! φ_k(x) = β x^{1−k} Σ_j ρ_{j−k} (x/β)^j / j!, so the coefficient of
//! x^{1−k+j} is β ρ_{j−k} / (j! β^j). The Laurent prefactor is kept as an
//! exponent offset rather than folded into the coefficients.
//!
//! Everything is exact rational arithmetic. For H_q the infinite product is
//! truncated to M+1 factors; identities that depend on that truncation are
//! reported against [`QUANTUM_TOLERANCE`] instead of exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::algebra::{det, factorial, pow, MultiPoly, Rational};
use crate::error::{Error, Result};
use crate::tau_series::tau_series_poly;
use crate::weights::WeightGen;

/// β-exponent per basis function that turns the literal determinant ratio
/// into τ: the n×n formula is multiplied by β^{−n}.
pub const CALIBRATION_EXPONENT_PER_FUNCTION: i64 = -1;

pub const DEFAULT_QUANTUM_TERMS: usize = 60;
pub const QUANTUM_TOLERANCE: f64 = 1e-9;

/// ρ_j for j in a contiguous range, built by ρ_j = βG(jβ)ρ_{j−1} upward
/// from ρ_0 = 1 and ρ_{−m−1} = ρ_{−m}/(βG(−mβ)) downward from ρ_{−1} = β^{−1}.
#[derive(Clone, Debug, PartialEq)]
pub struct RhoTable {
    beta: Rational,
    lo: i64,
    values: Vec<Rational>,
}

impl RhoTable {
    pub fn new(
        gen: &WeightGen,
        beta: &Rational,
        lo: i64,
        hi: i64,
        quantum_terms: Option<usize>,
    ) -> Result<Self> {
        if beta.is_zero() {
            return Err(Error::SingularParameter("beta must be nonzero".into()));
        }
        if lo > hi {
            return Err(Error::usage(format!("empty rho range [{lo}, {hi}]")));
        }
        let g_at = |i: i64| -> Result<Rational> {
            let z = beta * Rational::from_integer(i.into());
            gen.eval(&z, quantum_terms).map_err(|e| match e {
                Error::SingularParameter(msg) => {
                    Error::SingularParameter(format!("G({i}·beta) is needed for rho: {msg}"))
                }
                other => other,
            })
        };
        let mut negative = Vec::new();
        if lo < 0 {
            let mut cur = beta.recip();
            negative.push(cur.clone());
            for m in 1..-lo {
                let g = g_at(-m)?;
                if g.is_zero() {
                    return Err(Error::SingularParameter(format!(
                        "G(-{m}·beta) = 0, so rho_j is undefined for j <= {}",
                        -m - 1
                    )));
                }
                cur /= beta * g;
                negative.push(cur.clone());
            }
        }
        let mut positive = Vec::new();
        if hi >= 0 {
            let mut cur = Rational::one();
            positive.push(cur.clone());
            for j in 1..=hi {
                cur = cur * beta * g_at(j)?;
                positive.push(cur.clone());
            }
        }
        // negative[m-1] = ρ_{−m}; keep only the requested window.
        let mut values = Vec::with_capacity((hi - lo + 1) as usize);
        for j in lo..=hi {
            let v = if j < 0 {
                negative[(-j - 1) as usize].clone()
            } else {
                positive[j as usize].clone()
            };
            values.push(v);
        }
        Ok(RhoTable {
            beta: beta.clone(),
            lo,
            values,
        })
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.lo + self.values.len() as i64 - 1)
    }

    pub fn get(&self, j: i64) -> Option<&Rational> {
        usize::try_from(j - self.lo)
            .ok()
            .and_then(|i| self.values.get(i))
    }

    fn require(&self, j: i64) -> Result<&Rational> {
        self.get(j).ok_or_else(|| {
            let (lo, hi) = self.range();
            Error::usage(format!("rho_{j} is outside the table range [{lo}, {hi}]"))
        })
    }

    /// Copy with ρ_j shifted by `delta`.
    pub fn perturbed(&self, j: i64, delta: &Rational) -> Result<Self> {
        let mut out = self.clone();
        let i = (j - self.lo) as usize;
        self.require(j)?;
        out.values[i] += delta;
        Ok(out)
    }
}

/// A Laurent series x^{lead_exp} Σ_{j=0}^{J} coeffs[j] x^j.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiSeries {
    k: i64,
    lead_exp: i64,
    coeffs: Vec<Rational>,
    beta: Rational,
}

impl PhiSeries {
    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn lead_exp(&self) -> i64 {
        self.lead_exp
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    /// Truncation order J.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> Rational {
        self.coeffs.get(j).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of x^e.
    pub fn coeff_at_exp(&self, e: i64) -> Rational {
        usize::try_from(e - self.lead_exp)
            .map(|j| self.coeff(j))
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.truncate(order + 1);
        out
    }

    /// x^{shift} times the series, evaluated at x.
    pub fn eval_shifted(&self, x: &Rational, shift: i64) -> Result<Rational> {
        let base = self.lead_exp + shift;
        let mut total = Rational::zero();
        for (j, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                total += a * pow(x, base + j as i64)?;
            }
        }
        Ok(total)
    }

    /// x_var^{shift} times the series as a polynomial; every exponent must be
    /// nonnegative.
    fn to_poly(&self, nvars: usize, var: usize, shift: i64) -> MultiPoly {
        let mut p = MultiPoly::zero(nvars);
        for (j, a) in self.coeffs.iter().enumerate() {
            let e = self.lead_exp + shift + j as i64;
            assert!(
                e >= 0 || a.is_zero(),
                "negative exponent in polynomial entry"
            );
            if !a.is_zero() {
                let mut exps = vec![0u32; nvars];
                exps[var] = e as u32;
                p.add_term(exps, a.clone());
            }
        }
        p
    }
}

/// φ_k with coefficients β ρ_{j−k}/(j! β^j), j = 0..=J, read from `rho`.
pub fn phi_from_rho(rho: &RhoTable, k: i64, order: usize) -> Result<PhiSeries> {
    if k < 1 {
        return Err(Error::usage(format!(
            "phi_k is only built for k >= 1, got {k}"
        )));
    }
    let beta = rho.beta();
    let mut coeffs = Vec::with_capacity(order + 1);
    for j in 0..=order {
        let r = rho.require(j as i64 - k)?;
        let den = Rational::from_integer(factorial(j)) * pow(beta, j as i64)?;
        coeffs.push(beta * r / den);
    }
    Ok(PhiSeries {
        k,
        lead_exp: 1 - k,
        coeffs,
        beta: beta.clone(),
    })
}

pub fn phi_k(
    gen: &WeightGen,
    beta: &Rational,
    k: i64,
    order: usize,
    quantum_terms: Option<usize>,
) -> Result<PhiSeries> {
    if k < 1 {
        return Err(Error::usage(format!(
            "phi_k is only built for k >= 1, got {k}"
        )));
    }
    let rho = RhoTable::new(gen, beta, -k, order as i64 - k, quantum_terms)?;
    phi_from_rho(&rho, k, order)
}

/// D = x d/dx applied termwise.
pub fn euler_apply(p: &PhiSeries) -> PhiSeries {
    let coeffs = p
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, a)| a * Rational::from_integer((p.lead_exp + j as i64).into()))
        .collect();
    PhiSeries {
        coeffs,
        ..p.clone()
    }
}

/// Outcome of a termwise identity check. Residuals are listed by the
/// exponent of x they sit on; only nonzero ones are kept.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub identity: &'static str,
    pub k: i64,
    /// Highest coefficient index (in φ_k's own indexing) that was compared.
    pub checked_through: usize,
    pub residuals: Vec<(i64, Rational)>,
    pub max_abs: f64,
    /// `Some` when the check is approximate (truncated H_q).
    pub tolerance: Option<f64>,
}

impl IdentityReport {
    fn new(identity: &'static str, k: i64, checked_through: usize, tolerance: Option<f64>) -> Self {
        IdentityReport {
            identity,
            k,
            checked_through,
            residuals: Vec::new(),
            max_abs: 0.0,
            tolerance,
        }
    }

    fn record(&mut self, exp: i64, value: Rational) {
        if !value.is_zero() {
            let a = value.abs().to_f64().unwrap_or(f64::INFINITY);
            self.max_abs = self.max_abs.max(a);
            self.residuals.push((exp, value));
        }
    }

    pub fn passed(&self) -> bool {
        match self.tolerance {
            Some(t) => self.max_abs < t,
            None => self.residuals.is_empty(),
        }
    }
}

fn tolerance_for(gen: &WeightGen) -> Option<f64> {
    matches!(gen, WeightGen::Quantum { .. }).then_some(QUANTUM_TOLERANCE)
}

/// β(D+k−1)φ_k − φ_{k−1} from a given ρ table, compared through index J−1
/// of φ_{k−1}.
pub fn recursion_report(rho: &RhoTable, k: i64, order: usize) -> Result<IdentityReport> {
    if k < 2 {
        return Err(Error::usage(format!(
            "the recursion check needs k >= 2, got {k}"
        )));
    }
    if order == 0 {
        return Err(Error::usage("the recursion check needs J >= 1"));
    }
    let hi = phi_from_rho(rho, k, order)?;
    let lo = phi_from_rho(rho, k - 1, order)?;
    Ok(recursion_residual(&hi, &lo))
}

/// β(D+k−1)φ_k − φ_{k−1} for two independently built series. The identity
/// holds for any ρ sequence shared by both sides, so a perturbation test has
/// to feed different tables to the two arguments.
pub fn recursion_residual(hi: &PhiSeries, lo: &PhiSeries) -> IdentityReport {
    let k = hi.k;
    let order = hi.order().min(lo.order());
    let beta = hi.beta.clone();
    let mut shifted = euler_apply(hi);
    for (j, a) in shifted.coeffs.iter_mut().enumerate() {
        *a = (&*a + &hi.coeffs[j] * Rational::from_integer((k - 1).into())) * &beta;
    }
    let mut report = IdentityReport::new("recursion", k, order.saturating_sub(1), None);
    // exponents 1−k .. 1−k+J, i.e. φ_{k−1} indices −1 .. J−1
    for e in hi.lead_exp..=hi.lead_exp + order as i64 {
        report.record(e, shifted.coeff_at_exp(e) - lo.coeff_at_exp(e));
    }
    report
}

pub fn check_recursion(
    gen: &WeightGen,
    beta: &Rational,
    k: i64,
    order: usize,
    quantum_terms: Option<usize>,
) -> Result<IdentityReport> {
    let rho = RhoTable::new(gen, beta, -k, order as i64 - k + 1, quantum_terms)?;
    let mut report = recursion_report(&rho, k, order)?;
    report.tolerance = tolerance_for(gen);
    Ok(report)
}

/// (xG(βD) − D − (k−1))φ_k with φ_k built from `rho`. G(βD) acts on x^m by
/// G(βm); `operator_terms` is the H_q truncation used for the operator.
pub fn spectral_report(
    gen: &WeightGen,
    rho: &RhoTable,
    k: i64,
    order: usize,
    operator_terms: Option<usize>,
) -> Result<IdentityReport> {
    let phi = phi_from_rho(rho, k, order)?;
    let beta = rho.beta();
    let mut report =
        IdentityReport::new("spectral", k, order.saturating_sub(1), tolerance_for(gen));
    for i in 0..order {
        let e = phi.lead_exp + i as i64;
        let mut r = -Rational::from_integer((i as i64).into()) * &phi.coeffs[i];
        if i > 0 {
            let m = e - 1;
            let g = gen.eval(&(beta * Rational::from_integer(m.into())), operator_terms)?;
            r += g * &phi.coeffs[i - 1];
        }
        report.record(e, r);
    }
    Ok(report)
}

/// The quantum spectral curve equation. For H_q the operator uses a product
/// truncated twice as far as the one that built φ_k, so the residual
/// measures the truncation error.
pub fn check_spectral(
    gen: &WeightGen,
    beta: &Rational,
    k: i64,
    order: usize,
    quantum_terms: Option<usize>,
) -> Result<IdentityReport> {
    let rho = RhoTable::new(gen, beta, -k, order as i64 - k, quantum_terms)?;
    let operator_terms = match gen {
        WeightGen::Quantum { .. } => quantum_terms.map(|m| 2 * m + 1),
        _ => None,
    };
    spectral_report(gen, &rho, k, order, operator_terms)
}

/// κ = (−1)^M ∏ βc_l / ∏ βd_m.
pub fn kappa(gen: &WeightGen, beta: &Rational) -> Result<Rational> {
    let (c, d) = rational_params(gen)?;
    let num: Rational = c.iter().map(|cl| beta * cl).product();
    let den: Rational = d.iter().map(|dm| beta * dm).product();
    if den.is_zero() {
        return Err(Error::SingularParameter(
            "kappa: beta * d_m vanishes".into(),
        ));
    }
    let sign = if d.len() % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    };
    Ok(sign * num / den)
}

fn rational_params(gen: &WeightGen) -> Result<(Vec<Rational>, Vec<Rational>)> {
    match gen {
        WeightGen::Trivial => Ok((vec![], vec![])),
        WeightGen::FiniteProduct { c } => Ok((c.clone(), vec![])),
        WeightGen::Rational { c, d } => Ok((c.clone(), d.clone())),
        WeightGen::Quantum { .. } => Err(Error::usage("the rational ODE form needs a rational G")),
    }
}

/// ζ ∏_l (D + 1/(βc_l))φ_k + (D+k−1) ∏_m (D − 1 − 1/(βd_m))φ_k with ζ = −κx.
pub fn check_spectral_ode(
    gen: &WeightGen,
    beta: &Rational,
    k: i64,
    order: usize,
) -> Result<IdentityReport> {
    let (c, d) = rational_params(gen)?;
    if c.iter().any(Zero::is_zero) {
        return Err(Error::usage("the ODE form needs every c_l nonzero"));
    }
    let kap = kappa(gen, beta)?;
    let phi = phi_k(gen, beta, k, order, None)?;
    let mut report = IdentityReport::new("spectral_ode", k, order.saturating_sub(1), None);
    for i in 0..order {
        let e = phi.lead_exp + i as i64;
        let er = Rational::from_integer(e.into());
        let second: Rational = d
            .iter()
            .map(|dm| &er - Rational::one() - (beta * dm).recip())
            .product::<Rational>()
            * Rational::from_integer((e + k - 1).into())
            * &phi.coeffs[i];
        let mut r = second;
        if i > 0 {
            let prev = &er - Rational::one();
            let first: Rational = c
                .iter()
                .map(|cl| &prev + (beta * cl).recip())
                .product::<Rational>()
                * &phi.coeffs[i - 1];
            r -= &kap * first;
        }
        report.record(e, r);
    }
    Ok(report)
}

/// Δ(x) = ∏_{i<j} (x_i − x_j).
pub fn vandermonde(x: &[Rational]) -> Rational {
    let mut out = Rational::one();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            out *= &x[i] - &x[j];
        }
    }
    out
}

/// Which determinant formula to assemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    /// det(φ_i(x_j)) with prefactor ∏x_i^{n−1} / ∏ρ_{−i}.
    Determinant,
    /// det(D^{i−1}φ_n(x_j)) with prefactor γ_n ∏x_i^{n−1}.
    Wronskian,
}

impl Representation {
    /// Sign that turns the literal formula into τ, given the β calibration.
    pub fn sign(self, n: usize) -> i64 {
        match self {
            Representation::Determinant => 1,
            Representation::Wronskian => {
                if (n * (n.saturating_sub(1)) / 2).is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

/// Result of a calibrated determinant evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct DetRep {
    pub value: Rational,
    /// Power of β applied on top of the literal formula.
    pub beta_exponent: i64,
    pub sign: i64,
}

/// Calibrated determinant formula as a polynomial in x_1..x_n.
#[derive(Clone, Debug, PartialEq)]
pub struct DetPoly {
    pub poly: MultiPoly,
    pub beta_exponent: i64,
    pub sign: i64,
    /// Total degree through which every coefficient is unaffected by the
    /// truncation of φ.
    pub guaranteed_degree: usize,
}

/// Rows of the matrix as series already multiplied by x^{n−1}; each is a
/// polynomial of degree J. φ_i is truncated at J − (n − i), which is what
/// the recursion maps D^{n−i}φ_n (truncated at J) onto.
fn matrix_rows(
    gen: &WeightGen,
    beta: &Rational,
    n: usize,
    order: usize,
    quantum_terms: Option<usize>,
    form: Representation,
) -> Result<(Vec<PhiSeries>, Rational)> {
    if n == 0 {
        return Err(Error::usage("determinant size must be at least 1"));
    }
    if order + 1 < n {
        return Err(Error::usage(format!(
            "truncation J = {order} is too small for n = {n}"
        )));
    }
    let ni = n as i64;
    let rho = RhoTable::new(gen, beta, -ni, order as i64 - ni, quantum_terms)?;
    let rho_prod: Rational = (1..=ni)
        .map(|i| rho.require(-i).cloned())
        .product::<Result<_>>()?;
    let rows = match form {
        Representation::Determinant => (1..=ni)
            .map(|i| phi_from_rho(&rho, i, order - (n - i as usize)))
            .collect::<Result<Vec<_>>>()?,
        Representation::Wronskian => {
            let mut row = phi_from_rho(&rho, ni, order)?;
            let mut rows = Vec::with_capacity(n);
            for _ in 0..n {
                let next = euler_apply(&row);
                rows.push(row);
                row = next;
            }
            rows
        }
    };
    let prefactor = match form {
        Representation::Determinant => rho_prod.recip(),
        Representation::Wronskian => pow(beta, ni * (ni - 1) / 2)? / rho_prod,
    };
    Ok((rows, prefactor))
}

fn literal_value(
    gen: &WeightGen,
    beta: &Rational,
    x: &[Rational],
    order: usize,
    quantum_terms: Option<usize>,
    form: Representation,
) -> Result<Rational> {
    let n = x.len();
    let delta = vandermonde(x);
    if delta.is_zero() {
        return Err(Error::SingularInput(
            "matrix eigenvalues must be distinct".into(),
        ));
    }
    let (rows, prefactor) = matrix_rows(gen, beta, n, order, quantum_terms, form)?;
    let matrix = rows
        .iter()
        .map(|row| {
            x.iter()
                .map(|xj| row.eval_shifted(xj, n as i64 - 1))
                .collect()
        })
        .collect::<Result<Vec<Vec<_>>>>()?;
    Ok(prefactor * det(&matrix) / delta)
}

fn calibrated(
    form: Representation,
    n: usize,
    beta: &Rational,
    literal: Rational,
) -> Result<DetRep> {
    let beta_exponent = CALIBRATION_EXPONENT_PER_FUNCTION * n as i64;
    let sign = form.sign(n);
    Ok(DetRep {
        value: literal * pow(beta, beta_exponent)? * Rational::from_integer(sign.into()),
        beta_exponent,
        sign,
    })
}

/// τ([X]) for X = diag(x) from the ratio det(φ_i(x_j))/Δ(x), calibrated.
pub fn tau_det_rep(
    gen: &WeightGen,
    beta: &Rational,
    x: &[Rational],
    order: usize,
    quantum_terms: Option<usize>,
) -> Result<DetRep> {
    let form = Representation::Determinant;
    let literal = literal_value(gen, beta, x, order, quantum_terms, form)?;
    calibrated(form, x.len(), beta, literal)
}

/// τ([X]) from the Eulerian Wronskian of φ_n, calibrated.
pub fn tau_wronskian(
    gen: &WeightGen,
    beta: &Rational,
    x: &[Rational],
    order: usize,
    quantum_terms: Option<usize>,
) -> Result<DetRep> {
    let form = Representation::Wronskian;
    let literal = literal_value(gen, beta, x, order, quantum_terms, form)?;
    calibrated(form, x.len(), beta, literal)
}

/// The literal formula (no calibration) as a polynomial in n variables.
pub fn literal_det_poly(
    gen: &WeightGen,
    beta: &Rational,
    n: usize,
    order: usize,
    quantum_terms: Option<usize>,
    form: Representation,
) -> Result<MultiPoly> {
    literal_det_poly_capped(gen, beta, n, order, quantum_terms, form, None)
}

/// As [`literal_det_poly`], keeping only total degree <= `max_degree`. The
/// Vandermonde is homogeneous, so each homogeneous part of the determinant
/// divides on its own and higher parts can be dropped during the expansion.
fn literal_det_poly_capped(
    gen: &WeightGen,
    beta: &Rational,
    n: usize,
    order: usize,
    quantum_terms: Option<usize>,
    form: Representation,
    max_degree: Option<u32>,
) -> Result<MultiPoly> {
    let (rows, mut prefactor) = matrix_rows(gen, beta, n, order, quantum_terms, form)?;
    let cap = max_degree.map(|d| d + (n * (n - 1) / 2) as u32);
    // Pull each row's content out so the expansion runs over integers.
    let mut matrix: Vec<Vec<IntPoly>> = Vec::with_capacity(n);
    for row in &rows {
        let (content, primitive) = primitive_part(&row.coeffs);
        prefactor *= content;
        let row = PhiSeries {
            coeffs: primitive,
            ..row.clone()
        };
        matrix.push(
            (0..n)
                .map(|j| IntPoly::from_poly(&row.to_poly(n, j, n as i64 - 1)))
                .collect(),
        );
    }
    let mut poly = IntPoly::det(&matrix, cap);
    for a in 0..n {
        for b in a + 1..n {
            poly = poly.div_by_difference(a, b).ok_or_else(|| {
                Error::usage(format!(
                    "determinant is not divisible by x{} - x{}",
                    a + 1,
                    b + 1
                ))
            })?;
        }
    }
    Ok(poly.to_poly(n, &prefactor))
}

/// Integer polynomial for the determinant expansion. Coefficients here run
/// to tens of thousands of bits, and keeping them as integers avoids a gcd
/// on every rational operation.
#[derive(Clone, Debug, Default, PartialEq)]
struct IntPoly(BTreeMap<Vec<u32>, BigInt>);

impl IntPoly {
    fn from_poly(p: &MultiPoly) -> Self {
        IntPoly(
            p.terms()
                .map(|(e, c)| {
                    debug_assert!(c.is_integer());
                    (e.clone(), c.to_integer())
                })
                .collect(),
        )
    }

    fn to_poly(&self, nvars: usize, scale: &Rational) -> MultiPoly {
        let mut out = MultiPoly::zero(nvars);
        for (e, c) in &self.0 {
            out.add_term(e.clone(), Rational::from_integer(c.clone()) * scale);
        }
        out
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        match self.0.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
        }
    }

    fn mul(&self, other: &Self, cap: Option<u32>) -> Self {
        let mut out = IntPoly::default();
        for (ea, ca) in &self.0 {
            let da: u32 = ea.iter().sum();
            for (eb, cb) in &other.0 {
                if cap.is_some_and(|c| da + eb.iter().sum::<u32>() > c) {
                    continue;
                }
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    fn truncated(&self, cap: Option<u32>) -> Self {
        match cap {
            None => self.clone(),
            Some(c) => IntPoly(
                self.0
                    .iter()
                    .filter(|(e, _)| e.iter().sum::<u32>() <= c)
                    .map(|(e, v)| (e.clone(), v.clone()))
                    .collect(),
            ),
        }
    }

    fn det(m: &[Vec<IntPoly>], cap: Option<u32>) -> IntPoly {
        match m.len() {
            0 => unreachable!("determinant size is at least 1"),
            1 => m[0][0].truncated(cap),
            n => {
                let mut acc = IntPoly::default();
                for col in 0..n {
                    let minor: Vec<Vec<IntPoly>> = m[1..]
                        .iter()
                        .map(|row| {
                            row.iter()
                                .enumerate()
                                .filter(|&(j, _)| j != col)
                                .map(|(_, p)| p.clone())
                                .collect()
                        })
                        .collect();
                    let term = m[0][col].mul(&IntPoly::det(&minor, cap), cap);
                    for (e, c) in term.0 {
                        acc.add_term(e, if col % 2 == 0 { c } else { -c });
                    }
                }
                acc
            }
        }
    }

    /// Exact quotient by x_a − x_b, or `None` if there is a remainder.
    /// Works down from the highest power of x_a: the leading part P_top of P
    /// gives the quotient's x_a^{top−1} part, and P − (x_a − x_b)·that is
    /// carried into the next power.
    fn div_by_difference(&self, a: usize, b: usize) -> Option<IntPoly> {
        let mut by_power: BTreeMap<u32, IntPoly> = BTreeMap::new();
        for (e, c) in &self.0 {
            let mut rest = e.clone();
            let k = std::mem::replace(&mut rest[a], 0);
            by_power.entry(k).or_default().add_term(rest, c.clone());
        }
        let top = match by_power.keys().next_back() {
            Some(&k) => k,
            None => return Some(IntPoly::default()),
        };
        let mut quot = IntPoly::default();
        let mut carry = IntPoly::default();
        for k in (0..=top).rev() {
            // next = P_k + x_b · carry
            let mut next = by_power.remove(&k).unwrap_or_default();
            for (e, c) in carry.0 {
                let mut e = e;
                e[b] += 1;
                next.add_term(e, c);
            }
            if k == 0 {
                return next.0.is_empty().then_some(quot);
            }
            for (e, c) in &next.0 {
                let mut e = e.clone();
                e[a] = k - 1;
                quot.add_term(e, c.clone());
            }
            carry = next;
        }
        unreachable!()
    }
}

/// Splits `v` as content × (integer vector with coprime entries).
fn primitive_part(v: &[Rational]) -> (Rational, Vec<Rational>) {
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for c in v.iter().filter(|c| !c.is_zero()) {
        num_gcd = num_gcd.gcd(c.numer());
        den_lcm = den_lcm.lcm(c.denom());
    }
    if num_gcd.is_zero() {
        return (Rational::one(), v.to_vec());
    }
    let content = Rational::new(num_gcd, den_lcm);
    let scaled = v.iter().map(|c| c / &content).collect();
    (content, scaled)
}

/// Degree through which the determinant formulas at truncation J are exact.
pub fn guaranteed_degree(n: usize, order: usize) -> usize {
    (order + 1).saturating_sub(n)
}

pub fn tau_det_poly(
    gen: &WeightGen,
    beta: &Rational,
    n: usize,
    order: usize,
    quantum_terms: Option<usize>,
    form: Representation,
) -> Result<DetPoly> {
    let literal = literal_det_poly(gen, beta, n, order, quantum_terms, form)?;
    let beta_exponent = CALIBRATION_EXPONENT_PER_FUNCTION * n as i64;
    let sign = form.sign(n);
    let scale = pow(beta, beta_exponent)? * Rational::from_integer(sign.into());
    Ok(DetPoly {
        poly: literal.scale(&scale),
        beta_exponent,
        sign,
        guaranteed_degree: guaranteed_degree(n, order),
    })
}

/// Normalization found by comparing the literal formula with the direct
/// Schur series.
#[derive(Clone, Debug, PartialEq)]
pub struct Calibration {
    pub n: usize,
    pub form: Representation,
    /// e with sign·β^e·(literal) matching τ at x = 0, if such e exists.
    pub beta_exponent: Option<i64>,
    pub sign: i64,
    /// Whether the rescaled literal formula agrees with the series on every
    /// coefficient through `guaranteed_degree`.
    pub consistent: bool,
    pub guaranteed_degree: usize,
}

/// Determines the constant relating the literal formula to τ from the x = 0
/// coefficient, then checks it against every other coefficient in range.
pub fn calibrate(
    gen: &WeightGen,
    beta: &Rational,
    n: usize,
    order: usize,
    quantum_terms: Option<usize>,
    form: Representation,
) -> Result<Calibration> {
    let g = guaranteed_degree(n, order);
    let literal =
        literal_det_poly_capped(gen, beta, n, order, quantum_terms, form, Some(g as u32))?;
    let series = tau_series_poly(gen, beta, n, g, quantum_terms)?;
    let zero = vec![0u32; n];
    let c0 = literal.coeff(&zero);
    let mut out = Calibration {
        n,
        form,
        beta_exponent: None,
        sign: 1,
        consistent: false,
        guaranteed_degree: g,
    };
    if c0.is_zero() {
        return Ok(out);
    }
    let ratio = series.coeff(&zero) / &c0;
    let search = 4 * n as i64 + 4;
    for e in -search..=search {
        let p = pow(beta, e)?;
        for sign in [1i64, -1] {
            if p.clone() * Rational::from_integer(sign.into()) == ratio {
                out.beta_exponent = Some(e);
                out.sign = sign;
                out.consistent = literal.scale(&ratio) == series;
                return Ok(out);
            }
        }
    }
    Ok(out)
}
