//! Exact arithmetic substrate: rationals, truncated power series in β,
//! multivariate polynomials and determinants.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical reduced form.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den`, reduced. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer power, negative exponents allowed for nonzero bases.
pub fn pow(base: &Rational, exp: i64) -> Result<Rational> {
    if exp < 0 {
        if base.is_zero() {
            return Err(Error::DivisionByZero(
                "zero raised to a negative power".into(),
            ));
        }
        Ok(num_traits::pow(base.recip(), exp.unsigned_abs() as usize))
    } else {
        Ok(num_traits::pow(base.clone(), exp as usize))
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Renders a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Error produced when a rational literal fails to parse. `position` is the
/// zero-based byte offset of the offending character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for RationalParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at position {}", self.message, self.position)
    }
}

impl std::error::Error for RationalParseError {}

/// Parses `"p"`, `"-p"`, `"p/q"` with decimal integers; surrounding
/// whitespace is not accepted.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, RationalParseError> {
    let err = |position: usize, message: &str| RationalParseError {
        position,
        message: message.to_string(),
    };
    let (num_str, den_str, den_offset) = match s.find('/') {
        Some(i) => (&s[..i], Some(&s[i + 1..]), i + 1),
        None => (s, None, 0),
    };
    let parse_int = |part: &str, offset: usize, allow_sign: bool| {
        if part.is_empty() {
            return Err(err(offset, "expected digits"));
        }
        for (i, ch) in part.char_indices() {
            let sign_ok = allow_sign && i == 0 && (ch == '-' || ch == '+') && part.len() > 1;
            if !ch.is_ascii_digit() && !sign_ok {
                return Err(err(offset + i, &format!("unexpected character '{ch}'")));
            }
        }
        part.parse::<BigInt>()
            .map_err(|_| err(offset, "malformed integer"))
    };
    let num = parse_int(num_str, 0, true)?;
    let den = match den_str {
        Some(d) => parse_int(d, den_offset, false)?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(err(den_offset, "zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Truncated formal power series in β with coefficients of β^0 … β^D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaSeries {
    coeffs: Vec<Rational>,
}

impl BetaSeries {
    /// Builds a series of order `order`, padding with zeros or truncating.
    pub fn new(order: usize, mut coeffs: Vec<Rational>) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        BetaSeries { coeffs }
    }

    pub fn one(order: usize) -> Self {
        Self::new(order, vec![Rational::one()])
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, Vec::new())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Rational {
        self.coeffs.get(j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(order, self.coeffs.iter().take(order + 1).cloned().collect())
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::usage(format!(
                "series orders differ: {} vs {}",
                self.order(),
                other.order()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(BetaSeries { coeffs })
    }

    pub fn scale(&self, s: &Rational) -> Self {
        BetaSeries {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let d = self.order();
        let mut out = vec![Rational::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=d - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(BetaSeries { coeffs: out })
    }

    /// Reciprocal series; requires a nonzero constant term.
    pub fn inv(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::SingularSeries);
        }
        let a0_inv = a0.recip();
        let d = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(d + 1);
        out.push(a0_inv.clone());
        for n in 1..=d {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &out[n - k];
                }
            }
            out.push(-acc * &a0_inv);
        }
        Ok(BetaSeries { coeffs: out })
    }

    /// Σ coeffs[j]·v^j over the stored coefficients.
    pub fn eval(&self, v: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * v + c)
    }
}

/// Sparse polynomial in a fixed number of variables with exact coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// The single variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        MultiPoly {
            nvars: self.nvars,
            terms: acc,
        }
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate_degree(&self, max_degree: u32) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= max_degree)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| {
                    acc * num_traits::pow(x.clone(), k as usize)
                })
            })
            .sum()
    }

    /// Exact quotient by `x_a − x_b`; fails if the division leaves a remainder.
    pub fn div_by_difference(&self, a: usize, b: usize) -> Result<Self> {
        // Synthetic division in x_a: with P = Σ_k P_k x_a^k, the quotient
        // coefficients satisfy Q_{k-1} = P_k + x_b·Q_k.
        let mut by_power: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let k = std::mem::replace(&mut rest[a], 0);
            by_power
                .entry(k)
                .or_insert_with(|| Self::zero(self.nvars))
                .add_term(rest, c.clone());
        }
        let top = match by_power.keys().next_back() {
            Some(&k) => k,
            None => return Ok(Self::zero(self.nvars)),
        };
        let xb = Self::var(self.nvars, b);
        let mut quot = Self::zero(self.nvars);
        let mut carry = Self::zero(self.nvars);
        for k in (0..=top).rev() {
            let pk = by_power
                .remove(&k)
                .unwrap_or_else(|| Self::zero(self.nvars));
            let next = pk.add(&xb.mul(&carry));
            if k == 0 {
                if !next.is_zero() {
                    return Err(Error::usage(format!(
                        "polynomial is not divisible by x{} - x{}",
                        a + 1,
                        b + 1
                    )));
                }
                break;
            }
            for (e, c) in next.terms() {
                let mut e = e.clone();
                e[a] = k - 1;
                quot.add_term(e, c.clone());
            }
            carry = next;
        }
        Ok(quot)
    }
}

/// Determinant by Bareiss fraction-free elimination. Every division is exact.
pub fn det(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    if n == 0 {
        return Rational::one();
    }
    let mut m: Vec<Vec<Rational>> = matrix.to_vec();
    let mut sign = Rational::one();
    let mut prev = Rational::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Determinant of a polynomial matrix by cofactor expansion along the first row.
pub fn det_poly(matrix: &[Vec<MultiPoly>], nvars: usize) -> MultiPoly {
    let n = matrix.len();
    match n {
        0 => MultiPoly::constant(nvars, Rational::one()),
        1 => matrix[0][0].clone(),
        _ => {
            let mut acc = MultiPoly::zero(nvars);
            for col in 0..n {
                if matrix[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MultiPoly>> = matrix[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != col)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = matrix[0][col].mul(&det_poly(&minor, nvars));
                acc = if col % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            acc
        }
    }
}
