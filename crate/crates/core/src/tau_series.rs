//! The hypergeometric τ-function as a truncated formal object.
//!
//! τ(t, s) = Σ_λ β^{|λ|} r_λ s_λ(t) s_λ(s) with content product
//! r_λ = ∏_{(i,j)∈λ} G((j−i)β). Changing both Schur factors to power sums
//! gives a table of coefficients of β^e p_μ(t) p_ν(s), whose entries at
//! e = |μ| + d are the weighted Hurwitz numbers H^d_G(μ, ν).
//!
//! Everything generating-function related works with β formal
//! ([`BetaSeries`]); only [`rho`] and [`tau_eval_at_matrix`] take a numeric β.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{pow, BetaSeries, MultiPoly, Rational};
use crate::characters::CharacterTable;
use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, Partition};
use crate::weights::WeightGen;

/// r_λ as a truncated series in β.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContentProduct {
    pub lam: Partition,
    pub series: BetaSeries,
}

/// G(cβ) = Σ_m g_m c^m β^m, from the Taylor coefficients of G.
fn content_series(g: &[Rational], content: i64, order: usize) -> BetaSeries {
    let c = Rational::from_integer(BigInt::from(content));
    let mut cm = Rational::one();
    let coeffs = g
        .iter()
        .take(order + 1)
        .map(|gm| {
            let term = gm * &cm;
            cm *= &c;
            term
        })
        .collect();
    BetaSeries::new(order, coeffs)
}

fn content_product_from(g: &[Rational], lam: &Partition, order: usize) -> BetaSeries {
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for c in lam.contents() {
        *counts.entry(c).or_default() += 1;
    }
    let mut out = BetaSeries::one(order);
    let mut keys: Vec<_> = counts.into_iter().filter(|&(c, _)| c != 0).collect();
    keys.sort_unstable();
    for (c, m) in keys {
        let f = content_series(g, c, order);
        for _ in 0..m {
            out = out.mul(&f).expect("orders agree");
        }
    }
    out
}

/// r_λ^{(G,β)} truncated at β^D.
pub fn r_lambda(gen: &WeightGen, lam: &Partition, order: usize) -> Result<ContentProduct> {
    let g = gen.g_coeffs(order)?;
    Ok(ContentProduct {
        lam: lam.clone(),
        series: content_product_from(&g, lam, order),
    })
}

/// ρ_j at a numeric β: β^j ∏_{i=1}^{j} G(iβ) for j ≥ 0 and
/// β^j ∏_{i=1}^{|j|−1} G(−iβ)^{-1} for j < 0. `quantum_terms` truncates H_q.
pub fn rho(
    gen: &WeightGen,
    j: i64,
    beta: &Rational,
    quantum_terms: Option<usize>,
) -> Result<Rational> {
    if beta.is_zero() {
        return Err(Error::SingularParameter("beta must be nonzero".into()));
    }
    let mut value = pow(beta, j)?;
    if j >= 0 {
        for i in 1..=j {
            value *= gen.eval(&(beta * Rational::from_integer(i.into())), quantum_terms)?;
        }
    } else {
        for i in 1..-j {
            let z = -(beta * Rational::from_integer(i.into()));
            let g = gen.eval(&z, quantum_terms)?;
            if g.is_zero() {
                return Err(Error::SingularParameter(format!(
                    "G(-{i}·beta) = G({z}) vanishes, so rho_{j} is undefined"
                )));
            }
            value /= g;
        }
    }
    Ok(value)
}

/// ρ_j with β formal: the power β^j split off, and the remaining product of
/// G(±iβ) factors as a unit-constant series.
pub fn rho_formal(gen: &WeightGen, j: i64, order: usize) -> Result<(i64, BetaSeries)> {
    let g = gen.g_coeffs(order)?;
    let mut series = BetaSeries::one(order);
    if j >= 0 {
        for i in 1..=j {
            series = series.mul(&content_series(&g, i, order))?;
        }
    } else {
        for i in 1..-j {
            series = series.mul(&content_series(&g, -i, order).inv()?)?;
        }
    }
    Ok((j, series))
}

/// Coefficients of β^e p_μ(t) p_ν(s) in τ^{(G,β)}(t, s), for |μ| = |ν| ≤ Nmax
/// and |μ| ≤ e ≤ |μ| + D. Zero entries are not stored.
#[derive(Clone, Debug)]
pub struct TauTable {
    gen: WeightGen,
    order: usize,
    nmax: usize,
    entries: HashMap<(Partition, Partition, usize), Rational>,
}

impl TauTable {
    pub fn gen(&self) -> &WeightGen {
        &self.gen
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    /// Coefficient of β^e p_μ p_ν; zero outside the stored support.
    pub fn entry(&self, mu: &Partition, nu: &Partition, e: usize) -> Rational {
        self.entries
            .get(&(mu.clone(), nu.clone(), e))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Every (μ, ν, d, H^d) in canonical order: N ascending, μ and ν
    /// reverse-lexicographic, d ascending.
    pub fn rows(&self) -> Vec<(Partition, Partition, usize, Rational)> {
        let mut out = Vec::new();
        for n in 0..=self.nmax {
            let ps = enumerate_partitions(n);
            for mu in &ps {
                for nu in &ps {
                    for d in 0..=self.order {
                        out.push((mu.clone(), nu.clone(), d, self.entry(mu, nu, n + d)));
                    }
                }
            }
        }
        out
    }
}

/// Expands the double Schur series through the Frobenius character formula.
pub fn tau_double_table(gen: &WeightGen, order: usize, nmax: usize) -> Result<TauTable> {
    let g = gen.g_coeffs(order)?;
    let mut entries = HashMap::new();
    for n in 0..=nmax {
        let table = CharacterTable::get(n)?;
        let ps = table.partitions();
        let z: Vec<BigInt> = ps.iter().map(Partition::z).collect();
        for (li, lam) in ps.iter().enumerate() {
            let r = content_product_from(&g, lam, order);
            let row = table.row(li);
            for (i, mu) in ps.iter().enumerate() {
                for (j, nu) in ps.iter().enumerate() {
                    let chi = row[i] * row[j];
                    if chi == 0 {
                        continue;
                    }
                    let w = Rational::new(BigInt::from(chi), &z[i] * &z[j]);
                    for (m, rm) in r.coeffs().iter().enumerate() {
                        if rm.is_zero() {
                            continue;
                        }
                        *entries
                            .entry((mu.clone(), nu.clone(), n + m))
                            .or_insert_with(Rational::zero) += rm * &w;
                    }
                }
            }
        }
    }
    entries.retain(|_, v: &mut Rational| !v.is_zero());
    Ok(TauTable {
        gen: gen.clone(),
        order,
        nmax,
        entries,
    })
}

/// H^d_G(μ, ν) read off the table at e = |μ| + d.
pub fn extract_h(table: &TauTable, d: usize, mu: &Partition, nu: &Partition) -> Result<Rational> {
    if mu.weight() != nu.weight() {
        return Err(Error::usage(format!("|{mu}| != |{nu}|")));
    }
    if mu.weight() > table.nmax {
        return Err(Error::usage(format!(
            "|{mu}| = {} exceeds the table's Nmax = {}",
            mu.weight(),
            table.nmax
        )));
    }
    if d > table.order {
        return Err(Error::usage(format!(
            "d = {d} exceeds the table's beta order {}",
            table.order
        )));
    }
    Ok(table.entry(mu, nu, mu.weight() + d))
}

/// Coefficients of β^d p_μ(t) in the KP specialization
/// τ(t) = Σ_λ h(λ)^{-1} r_λ s_λ(t).
#[derive(Clone, Debug)]
pub struct SingleTauTable {
    order: usize,
    nmax: usize,
    entries: HashMap<(Partition, usize), Rational>,
}

impl SingleTauTable {
    pub fn entry(&self, mu: &Partition, d: usize) -> Rational {
        self.entries
            .get(&(mu.clone(), d))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }
}

pub fn tau_single_table(gen: &WeightGen, order: usize, nmax: usize) -> Result<SingleTauTable> {
    let g = gen.g_coeffs(order)?;
    let mut entries = HashMap::new();
    for n in 0..=nmax {
        let table = CharacterTable::get(n)?;
        let ps = table.partitions();
        for (li, lam) in ps.iter().enumerate() {
            let r = content_product_from(&g, lam, order);
            let h = lam.hook_product();
            for (i, mu) in ps.iter().enumerate() {
                let chi = table.row(li)[i];
                if chi == 0 {
                    continue;
                }
                let w = Rational::new(BigInt::from(chi), &h * mu.z());
                for (d, rd) in r.coeffs().iter().enumerate() {
                    *entries
                        .entry((mu.clone(), d))
                        .or_insert_with(Rational::zero) += rd * &w;
                }
            }
        }
    }
    entries.retain(|_, v: &mut Rational| !v.is_zero());
    Ok(SingleTauTable {
        order,
        nmax,
        entries,
    })
}

/// r_λ evaluated at a numeric β.
pub fn r_lambda_at(
    gen: &WeightGen,
    lam: &Partition,
    beta: &Rational,
    quantum_terms: Option<usize>,
) -> Result<Rational> {
    lam.contents()
        .into_iter()
        .map(|c| gen.eval(&(beta * Rational::from_integer(c.into())), quantum_terms))
        .product()
}

/// G(cβ) for integer contents, evaluated once each.
struct ContentValues<'a> {
    gen: &'a WeightGen,
    beta: &'a Rational,
    quantum_terms: Option<usize>,
    cache: HashMap<i64, Rational>,
}

impl ContentValues<'_> {
    fn r_lambda(&mut self, lam: &Partition) -> Result<Rational> {
        let mut out = Rational::one();
        for c in lam.contents() {
            if let Some(v) = self.cache.get(&c) {
                out *= v;
                continue;
            }
            let v = self.gen.eval(
                &(self.beta * Rational::from_integer(c.into())),
                self.quantum_terms,
            )?;
            out *= &v;
            self.cache.insert(c, v);
        }
        Ok(out)
    }
}

/// Σ_{|λ| ≤ Nmax} h(λ)^{-1} r_λ(β) s_λ([X]) with t_i = tr X^i / i, i.e.
/// power sums p_j = Σ_i x_i^j.
pub fn tau_eval_at_matrix(
    gen: &WeightGen,
    beta: &Rational,
    x: &[Rational],
    nmax: usize,
) -> Result<Rational> {
    if matches!(gen, WeightGen::Quantum { .. }) {
        return Err(Error::usage(
            "tau_eval_at_matrix needs an exactly evaluable G; use the analytic module for H_q",
        ));
    }
    let power_sums: Vec<Rational> = (0..=nmax)
        .map(|j| x.iter().map(|xi| num_traits::pow(xi.clone(), j)).sum())
        .collect();
    let mut values = ContentValues {
        gen,
        beta,
        quantum_terms: None,
        cache: HashMap::new(),
    };
    let mut total = Rational::zero();
    for n in 0..=nmax {
        let table = CharacterTable::get(n)?;
        let ps = table.partitions();
        let p_mu: Vec<Rational> = ps
            .iter()
            .map(|mu| mu.parts().iter().map(|&j| power_sums[j].clone()).product())
            .collect();
        for (li, lam) in ps.iter().enumerate() {
            if lam.length() > x.len() {
                continue;
            }
            let s: Rational = ps
                .iter()
                .enumerate()
                .map(|(i, mu)| Rational::new(BigInt::from(table.row(li)[i]), mu.z()) * &p_mu[i])
                .sum();
            if s.is_zero() {
                continue;
            }
            let r = values.r_lambda(lam)?;
            total += r * s / Rational::from_integer(lam.hook_product());
        }
    }
    Ok(total)
}

/// The same sum as [`tau_eval_at_matrix`] kept as a symmetric polynomial in
/// `nvars` variables, through total degree `max_degree`.
pub fn tau_series_poly(
    gen: &WeightGen,
    beta: &Rational,
    nvars: usize,
    max_degree: usize,
    quantum_terms: Option<usize>,
) -> Result<MultiPoly> {
    let power_sums: Vec<MultiPoly> = (0..=max_degree)
        .map(|j| {
            let mut p = MultiPoly::zero(nvars);
            for v in 0..nvars {
                let mut e = vec![0u32; nvars];
                e[v] = j as u32;
                p.add_term(e, Rational::one());
            }
            p
        })
        .collect();
    let mut values = ContentValues {
        gen,
        beta,
        quantum_terms,
        cache: HashMap::new(),
    };
    let mut total = MultiPoly::zero(nvars);
    for n in 0..=max_degree {
        let table = CharacterTable::get(n)?;
        let ps = table.partitions();
        let p_mu: Vec<MultiPoly> = ps
            .iter()
            .map(|mu| {
                mu.parts()
                    .iter()
                    .fold(MultiPoly::constant(nvars, Rational::one()), |acc, &j| {
                        acc.mul(&power_sums[j])
                    })
            })
            .collect();
        for (li, lam) in ps.iter().enumerate() {
            if lam.length() > nvars {
                continue;
            }
            let mut s = MultiPoly::zero(nvars);
            for (i, mu) in ps.iter().enumerate() {
                let chi = table.row(li)[i];
                if chi != 0 {
                    s = s.add(&p_mu[i].scale(&Rational::new(BigInt::from(chi), mu.z())));
                }
            }
            let r = values.r_lambda(lam)?;
            total = total.add(&s.scale(&(r / Rational::from_integer(lam.hook_product()))));
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn c1() -> WeightGen {
        WeightGen::rational(vec![int(1)], vec![]).unwrap()
    }

    #[test]
    fn r_lambda_examples() {
        let g = c1();
        assert_eq!(
            r_lambda(&g, &Partition::empty(), 3).unwrap().series,
            BetaSeries::one(3)
        );
        assert_eq!(
            r_lambda(&g, &p(&[1]), 3).unwrap().series,
            BetaSeries::one(3)
        );
        assert_eq!(
            r_lambda(&g, &p(&[2]), 3).unwrap().series,
            BetaSeries::new(3, vec![int(1), int(1)])
        );
        let q = WeightGen::quantum(rat(1, 2)).unwrap();
        for lam in enumerate_partitions(4) {
            assert_eq!(r_lambda(&q, &lam, 4).unwrap().series.coeff(0), int(1));
        }
    }

    #[test]
    fn rho_examples() {
        let g = c1();
        let b = rat(1, 2);
        assert_eq!(rho(&g, 0, &b, None).unwrap(), int(1));
        assert_eq!(rho(&g, -1, &b, None).unwrap(), int(2));
        assert_eq!(rho(&g, 2, &b, None).unwrap(), rat(3, 4));
        assert_eq!(rho_formal(&g, -1, 3).unwrap(), (-1, BetaSeries::one(3)));
        // G(−β) = 0 at β = 1 for c = (1)
        let e = rho(&g, -3, &int(1), None).unwrap_err();
        assert_eq!(e.code(), "singular_parameter");
        assert!(e.to_string().contains("G(-1"));
    }

    #[test]
    fn r_j_is_rho_ratio() {
        let gens = [
            c1(),
            WeightGen::rational(vec![int(1)], vec![rat(1, 3)]).unwrap(),
            WeightGen::Trivial,
        ];
        let b = rat(2, 7);
        for g in &gens {
            for j in -4i64..=6 {
                let lhs = g.eval(&(&b * int(j)), None).unwrap();
                let rhs = rho(g, j, &b, None).unwrap() / (&b * rho(g, j - 1, &b, None).unwrap());
                assert_eq!(lhs, rhs, "{} j={j}", g.name());
            }
        }
    }

    #[test]
    fn rho_formal_matches_numeric() {
        // Evaluating the formal series at β recovers ρ_j up to the truncated tail;
        // for a finite product the positive-index series is a polynomial.
        let g = WeightGen::finite_product(vec![int(1), rat(1, 2)]);
        let b = rat(1, 3);
        for j in 0..=4 {
            let (e, s) = rho_formal(&g, j, 2 * j as usize).unwrap();
            assert_eq!(
                pow(&b, e).unwrap() * s.eval(&b),
                rho(&g, j, &b, None).unwrap()
            );
        }
    }

    #[test]
    fn double_table_examples() {
        let g = c1();
        let t = tau_double_table(&g, 3, 4).unwrap();
        assert_eq!(t.entry(&p(&[2]), &p(&[1, 1]), 3), rat(1, 2));
        for n in 0..=4 {
            for mu in enumerate_partitions(n) {
                for nu in enumerate_partitions(n) {
                    let expect = if mu == nu {
                        Rational::new(BigInt::one(), mu.z())
                    } else {
                        int(0)
                    };
                    assert_eq!(extract_h(&t, 0, &mu, &nu).unwrap(), expect);
                    for e in n..=n + 3 {
                        assert_eq!(t.entry(&mu, &nu, e), t.entry(&nu, &mu, e));
                    }
                }
            }
        }
        let triv = tau_double_table(&WeightGen::Trivial, 3, 3).unwrap();
        for (_, _, d, h) in triv.rows() {
            if d > 0 {
                assert!(h.is_zero());
            }
        }
    }

    #[test]
    fn extract_errors() {
        let t = tau_double_table(&c1(), 2, 3).unwrap();
        assert!(extract_h(&t, 3, &p(&[2]), &p(&[2])).is_err());
        assert!(extract_h(&t, 1, &p(&[4]), &p(&[4])).is_err());
        assert!(extract_h(&t, 1, &p(&[2]), &p(&[3])).is_err());
    }

    #[test]
    fn single_table_examples() {
        let g = c1();
        let s = tau_single_table(&g, 3, 4).unwrap();
        assert_eq!(s.entry(&p(&[1, 1]), 0), rat(1, 2));
        for n in 1..=4 {
            for mu in enumerate_partitions(n) {
                let direct: Rational = enumerate_partitions(n)
                    .iter()
                    .map(|lam| {
                        let chi = crate::characters::character(lam, &mu).unwrap();
                        Rational::new(BigInt::from(chi), lam.hook_product() * mu.z())
                    })
                    .sum();
                assert_eq!(s.entry(&mu, 0), direct);
            }
        }
        let triv = tau_single_table(&WeightGen::Trivial, 3, 4).unwrap();
        for n in 0..=4 {
            for mu in enumerate_partitions(n) {
                for d in 1..=3 {
                    assert!(triv.entry(&mu, d).is_zero());
                }
            }
        }
    }

    #[test]
    fn matrix_evaluation_examples() {
        let g = c1();
        assert_eq!(
            tau_eval_at_matrix(&g, &rat(1, 3), &[int(0), int(0)], 4).unwrap(),
            int(1)
        );
        let x = rat(1, 10);
        let expect = int(1) + &x + &x * &x + &x * &x * &x;
        assert_eq!(
            tau_eval_at_matrix(&g, &int(1), std::slice::from_ref(&x), 3).unwrap(),
            expect
        );
        // G ≡ 1 on one variable: truncated exponential
        let mut exp = Rational::zero();
        let mut term = int(1);
        for m in 0..=5 {
            exp += &term;
            term = term * &x / int(m + 1);
        }
        assert_eq!(
            tau_eval_at_matrix(&WeightGen::Trivial, &rat(1, 2), &[x], 5).unwrap(),
            exp
        );
    }

    #[test]
    fn poly_matches_numeric_evaluation() {
        let g = WeightGen::rational(vec![int(1)], vec![rat(1, 3)]).unwrap();
        let b = rat(1, 7);
        let x = [rat(1, 5), rat(-2, 3)];
        let poly = tau_series_poly(&g, &b, 2, 5, None).unwrap();
        assert_eq!(poly.eval(&x), tau_eval_at_matrix(&g, &b, &x, 5).unwrap());
    }
}
