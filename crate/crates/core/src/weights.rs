//! Weight generating functions and weighted Hurwitz numbers.
//!
//! A [`WeightGen`] describes G(z) = 1 + Σ g_j z^j. The weight factors below
//! are evaluated exactly; the generic ones use a running-sum recursion over
//! ordered index chains instead of enumerating index tuples, which is the
//! same sum reorganised.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{factorial, pow, BetaSeries, Rational};
use crate::error::{Error, Result};
use crate::hurwitz::hurwitz_from_profiles;
use crate::partitions::{enumerate_partitions, Partition};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightGen {
    /// G ≡ 1.
    Trivial,
    /// G(z) = ∏ (1 + c_i z).
    FiniteProduct { c: Vec<Rational> },
    /// G(z) = ∏_l (1 + c_l z) / ∏_m (1 − d_m z).
    Rational { c: Vec<Rational>, d: Vec<Rational> },
    /// G(z) = H_q(z) = ∏_{i≥0} (1 − q^i z)^{-1} = Σ z^n/(q;q)_n.
    Quantum { q: Rational },
}

impl WeightGen {
    pub fn finite_product(c: Vec<Rational>) -> Self {
        WeightGen::FiniteProduct { c }
    }

    pub fn rational(c: Vec<Rational>, d: Vec<Rational>) -> Result<Self> {
        if d.iter().any(Zero::is_zero) {
            return Err(Error::usage(
                "rational weight parameters d_m must be nonzero",
            ));
        }
        Ok(WeightGen::Rational { c, d })
    }

    pub fn quantum(q: Rational) -> Result<Self> {
        if q.is_zero() || q.abs() >= Rational::one() {
            return Err(Error::usage(format!(
                "quantum parameter needs 0 < |q| < 1, got {q}"
            )));
        }
        Ok(WeightGen::Quantum { q })
    }

    pub fn name(&self) -> &'static str {
        match self {
            WeightGen::Trivial => "trivial",
            WeightGen::FiniteProduct { .. } => "finite_product",
            WeightGen::Rational { .. } => "rational",
            WeightGen::Quantum { .. } => "quantum",
        }
    }

    /// Taylor coefficients g_0 = 1, g_1, …, g_J.
    pub fn g_coeffs(&self, j_max: usize) -> Result<Vec<Rational>> {
        let linear = |c: &Rational| BetaSeries::new(j_max, vec![Rational::one(), c.clone()]);
        let series = match self {
            WeightGen::Trivial => BetaSeries::one(j_max),
            WeightGen::FiniteProduct { c } => product(j_max, c.iter().map(linear))?,
            WeightGen::Rational { c, d } => {
                let num = product(j_max, c.iter().map(linear))?;
                let den = product(j_max, d.iter().map(|dm| linear(&-dm)))?;
                num.mul(&den.inv()?)?
            }
            WeightGen::Quantum { q } => {
                let mut coeffs = Vec::with_capacity(j_max + 1);
                let mut poch = Rational::one();
                coeffs.push(Rational::one());
                for n in 1..=j_max {
                    poch *= Rational::one() - pow(q, n as i64)?;
                    if poch.is_zero() {
                        return Err(Error::DivisionByZero(format!(
                            "(q;q)_{n} vanishes at q = {q}"
                        )));
                    }
                    coeffs.push(poch.recip());
                }
                BetaSeries::new(j_max, coeffs)
            }
        };
        Ok(series.coeffs().to_vec())
    }

    /// Numeric value G(z). The quantum product is truncated to
    /// `quantum_terms + 1` factors and is a usage error without it.
    pub fn eval(&self, z: &Rational, quantum_terms: Option<usize>) -> Result<Rational> {
        match self {
            WeightGen::Trivial => Ok(Rational::one()),
            WeightGen::FiniteProduct { c } => {
                Ok(c.iter().map(|ci| Rational::one() + ci * z).product())
            }
            WeightGen::Rational { c, d } => {
                let num: Rational = c.iter().map(|cl| Rational::one() + cl * z).product();
                let den: Rational = d.iter().map(|dm| Rational::one() - dm * z).product();
                if den.is_zero() {
                    return Err(Error::SingularParameter(format!("G has a pole at z = {z}")));
                }
                Ok(num / den)
            }
            WeightGen::Quantum { q } => {
                let m = quantum_terms.ok_or_else(|| {
                    Error::usage("quantum G needs a product truncation to be evaluated")
                })?;
                // With q = a/b and z = u/v, 1 − q^i z = (b^i v − a^i u)/(b^i v);
                // multiply integers and reduce once at the end.
                let (a, b) = (q.numer(), q.denom());
                let (u, v) = (z.numer(), z.denom());
                let mut top = BigInt::one();
                let mut bottom = BigInt::one();
                let mut ai = BigInt::one();
                let mut bi = BigInt::one();
                for _ in 0..=m {
                    let bv = &bi * v;
                    bottom *= &bi * v - &ai * u;
                    top *= bv;
                    ai *= a;
                    bi *= b;
                }
                if bottom.is_zero() {
                    return Err(Error::SingularParameter(format!(
                        "truncated H_q has a pole at z = {z}"
                    )));
                }
                Ok(Rational::new(top, bottom))
            }
        }
    }
}

fn product(order: usize, mut factors: impl Iterator<Item = BetaSeries>) -> Result<BetaSeries> {
    factors.try_fold(BetaSeries::one(order), |acc, f| acc.mul(&f))
}

/// Σ over index chains i_1 < ⋯ < i_k (or ≤ when `weak`) of ∏_m c_{i_m}^{e_m}.
fn chain_sum(c: &[Rational], exps: &[usize], weak: bool) -> Rational {
    if exps.is_empty() {
        return Rational::one();
    }
    // acc[i] = sum over chains of the first m exponents ending at index i.
    let mut acc: Vec<Rational> = c
        .iter()
        .map(|ci| num_traits::pow(ci.clone(), exps[0]))
        .collect();
    for &e in &exps[1..] {
        let mut running = Rational::zero();
        let mut next = Vec::with_capacity(c.len());
        for (i, ci) in c.iter().enumerate() {
            if weak {
                running += &acc[i];
            }
            next.push(&running * num_traits::pow(ci.clone(), e));
            if !weak {
                running += &acc[i];
            }
        }
        acc = next;
    }
    acc.into_iter().sum()
}

fn permutations_of(items: &[usize]) -> Vec<Vec<usize>> {
    crate::hurwitz::all_permutations(items.len())
        .into_iter()
        .map(|p| p.iter().map(|&i| items[i]).collect())
        .collect()
}

fn symmetrized_chain_sum(c: &[Rational], exps: &[usize], weak: bool) -> Rational {
    let k = exps.len();
    let total: Rational = permutations_of(exps)
        .iter()
        .map(|perm| chain_sum(c, perm, weak))
        .sum();
    total / Rational::from_integer(factorial(k))
}

fn colengths(profiles: &[Partition]) -> Vec<usize> {
    profiles.iter().map(Partition::colength).collect()
}

fn sign(exp: i64) -> Rational {
    if exp.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// 𝒲_G for G = ∏(1 + c_i z): (1/k!) Σ_σ Σ_{i_1<⋯<i_k} ∏_j c_{i_σ(j)}^{ℓ*(μ^(j))}.
pub fn weight_factor(c: &[Rational], profiles: &[Partition]) -> Rational {
    symmetrized_chain_sum(c, &colengths(profiles), false)
}

/// 𝒲̃_G̃ for G̃ = ∏(1 − c_i z)^{-1}: non-strict index chains and the sign
/// (−1)^{Σℓ* + k}.
pub fn weight_factor_tilde(c: &[Rational], profiles: &[Partition]) -> Rational {
    let exps = colengths(profiles);
    let s = sign(exps.iter().sum::<usize>() as i64 + exps.len() as i64);
    s * symmetrized_chain_sum(c, &exps, true)
}

/// Closed form of 𝒲̃ for H_q:
/// (−1)^{d−k}/k! Σ_σ ∏_j 1/(1 − q^{ℓ*_σ(1) + ⋯ + ℓ*_σ(j)}).
pub fn quantum_weight_factor(q: &Rational, profiles: &[Partition]) -> Result<Rational> {
    let exps = colengths(profiles);
    let k = exps.len();
    let d: usize = exps.iter().sum();
    let mut total = Rational::zero();
    for perm in permutations_of(&exps) {
        let mut partial = 0usize;
        let mut term = Rational::one();
        for e in perm {
            partial += e;
            let den = Rational::one() - pow(q, partial as i64)?;
            if den.is_zero() {
                return Err(Error::SingularParameter(format!(
                    "1 - q^{partial} vanishes at q = {q}"
                )));
            }
            term /= den;
        }
        total += term;
    }
    Ok(sign(d as i64 - k as i64) * total / Rational::from_integer(factorial(k)))
}

/// 𝒲_{G_{c,d}}: strict chains over the c-list for the μ-block, non-strict
/// chains over the d-list for the ν-block, sign (−1)^{Σℓ*(ν^(j)) − l}.
pub fn rational_weight_factor(
    c: &[Rational],
    d: &[Rational],
    mu_profiles: &[Partition],
    nu_profiles: &[Partition],
) -> Result<Rational> {
    if mu_profiles.is_empty() && nu_profiles.is_empty() {
        return Err(Error::usage("rational weight factor needs k + l >= 1"));
    }
    let nu_exps = colengths(nu_profiles);
    let s = sign(nu_exps.iter().sum::<usize>() as i64 - nu_exps.len() as i64);
    Ok(s * weight_factor(c, mu_profiles) * symmetrized_chain_sum(d, &nu_exps, true))
}

/// One term of the weighted sum: the branch-point profiles, how many
/// ordered arrangements of them the term stands for, the weight factor and
/// the Hurwitz number H(profiles, μ, ν).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    /// Profiles weighted by the c-parameters (all profiles for non-rational G).
    pub profiles: Vec<Partition>,
    /// Profiles weighted by the d-parameters of a rational G.
    pub dual_profiles: Vec<Partition>,
    pub arrangements: BigInt,
    pub weight: Rational,
    pub hurwitz: Rational,
}

impl Contribution {
    pub fn value(&self) -> Rational {
        Rational::from_integer(self.arrangements.clone()) * &self.weight * &self.hurwitz
    }
}

fn nonidentity_profiles(n: usize) -> Vec<Partition> {
    enumerate_partitions(n)
        .into_iter()
        .filter(|p| p.colength() >= 1)
        .collect()
}

/// Multisets of profiles (as non-decreasing index lists into `pool`) with
/// total colength `target`.
fn profile_multisets(pool: &[Partition], target: usize) -> Vec<Vec<usize>> {
    fn rec(
        pool: &[Partition],
        start: usize,
        left: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            let l = pool[i].colength();
            if l <= left {
                cur.push(i);
                rec(pool, i, left - l, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(pool, 0, target, &mut Vec::new(), &mut out);
    out
}

/// Ordered tuples of profiles with total colength `target`.
fn profile_tuples(pool: &[Partition], target: usize) -> Vec<Vec<usize>> {
    fn rec(pool: &[Partition], left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for (i, p) in pool.iter().enumerate() {
            if p.colength() <= left {
                cur.push(i);
                rec(pool, left - p.colength(), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(pool, target, &mut Vec::new(), &mut out);
    out
}

/// k!/∏ m_i! for a sorted index multiset.
fn arrangements(multiset: &[usize]) -> BigInt {
    let mut denom = BigInt::one();
    let mut rest = multiset;
    while let Some(&first) = rest.first() {
        let m = rest.iter().take_while(|&&x| x == first).count();
        denom *= factorial(m);
        rest = &rest[m..];
    }
    factorial(multiset.len()) / denom
}

fn pick(pool: &[Partition], idx: &[usize]) -> Vec<Partition> {
    idx.iter().map(|&i| pool[i].clone()).collect()
}

fn check_pair(mu: &Partition, nu: &Partition) -> Result<usize> {
    if mu.weight() != nu.weight() {
        return Err(Error::usage(format!(
            "|mu| = {} differs from |nu| = {}",
            mu.weight(),
            nu.weight()
        )));
    }
    Ok(mu.weight())
}

fn hurwitz_with(
    n: usize,
    branch: &[Partition],
    mu: &Partition,
    nu: &Partition,
) -> Result<Rational> {
    let mut all: Vec<&Partition> = branch.iter().collect();
    all.push(mu);
    all.push(nu);
    hurwitz_from_profiles(n, &all)
}

/// Every nonzero-weight term of H^d_G(μ, ν), grouped by profile multiset.
/// At d = 0 the single term is the two-point number H(μ, ν).
pub fn weighted_hurwitz_terms(
    gen: &WeightGen,
    d: usize,
    mu: &Partition,
    nu: &Partition,
) -> Result<Vec<Contribution>> {
    let n = check_pair(mu, nu)?;
    if d == 0 {
        return Ok(vec![Contribution {
            profiles: Vec::new(),
            dual_profiles: Vec::new(),
            arrangements: BigInt::one(),
            weight: Rational::one(),
            hurwitz: hurwitz_with(n, &[], mu, nu)?,
        }]);
    }
    let pool = nonidentity_profiles(n);
    let mut out = Vec::new();
    match gen {
        WeightGen::Trivial => {}
        WeightGen::FiniteProduct { .. } | WeightGen::Quantum { .. } => {
            for ms in profile_multisets(&pool, d) {
                let profiles = pick(&pool, &ms);
                let weight = match gen {
                    WeightGen::FiniteProduct { c } => weight_factor(c, &profiles),
                    WeightGen::Quantum { q } => quantum_weight_factor(q, &profiles)?,
                    _ => unreachable!(),
                };
                if weight.is_zero() {
                    continue;
                }
                out.push(Contribution {
                    hurwitz: hurwitz_with(n, &profiles, mu, nu)?,
                    arrangements: arrangements(&ms),
                    profiles,
                    dual_profiles: Vec::new(),
                    weight,
                });
            }
        }
        WeightGen::Rational { c, d: dlist } => {
            for d_mu in 0..=d {
                let d_nu = d - d_mu;
                for ms_mu in profile_multisets(&pool, d_mu) {
                    for ms_nu in profile_multisets(&pool, d_nu) {
                        let profiles = pick(&pool, &ms_mu);
                        let dual_profiles = pick(&pool, &ms_nu);
                        let weight = rational_weight_factor(c, dlist, &profiles, &dual_profiles)?;
                        if weight.is_zero() {
                            continue;
                        }
                        let branch: Vec<Partition> =
                            profiles.iter().chain(&dual_profiles).cloned().collect();
                        out.push(Contribution {
                            hurwitz: hurwitz_with(n, &branch, mu, nu)?,
                            arrangements: arrangements(&ms_mu) * arrangements(&ms_nu),
                            profiles,
                            dual_profiles,
                            weight,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// H^d_G(μ, ν). For d = 0 this is H(μ, ν) = δ_{μν}/z_μ.
pub fn weighted_hurwitz(
    gen: &WeightGen,
    d: usize,
    mu: &Partition,
    nu: &Partition,
) -> Result<Rational> {
    Ok(weighted_hurwitz_terms(gen, d, mu, nu)?
        .iter()
        .map(Contribution::value)
        .sum())
}

/// H^d_G(μ) = H^d_G(μ, (1^{|μ|})).
pub fn weighted_single_hurwitz(gen: &WeightGen, d: usize, mu: &Partition) -> Result<Rational> {
    weighted_hurwitz(gen, d, mu, &Partition::identity(mu.weight()))
}

/// Slow reference for [`weighted_hurwitz`]: sums over every ordered profile
/// tuple with no multiplicity bookkeeping.
pub fn weighted_hurwitz_reference(
    gen: &WeightGen,
    d: usize,
    mu: &Partition,
    nu: &Partition,
) -> Result<Rational> {
    let n = check_pair(mu, nu)?;
    if d == 0 {
        return hurwitz_with(n, &[], mu, nu);
    }
    let pool = nonidentity_profiles(n);
    let mut total = Rational::zero();
    match gen {
        WeightGen::Trivial => {}
        WeightGen::FiniteProduct { .. } | WeightGen::Quantum { .. } => {
            for t in profile_tuples(&pool, d) {
                let profiles = pick(&pool, &t);
                let w = match gen {
                    WeightGen::FiniteProduct { c } => weight_factor(c, &profiles),
                    WeightGen::Quantum { q } => quantum_weight_factor(q, &profiles)?,
                    _ => unreachable!(),
                };
                total += w * hurwitz_with(n, &profiles, mu, nu)?;
            }
        }
        WeightGen::Rational { c, d: dlist } => {
            for d_mu in 0..=d {
                for t_mu in profile_tuples(&pool, d_mu) {
                    for t_nu in profile_tuples(&pool, d - d_mu) {
                        let a = pick(&pool, &t_mu);
                        let b = pick(&pool, &t_nu);
                        let w = rational_weight_factor(c, dlist, &a, &b)?;
                        let branch: Vec<Partition> = a.iter().chain(&b).cloned().collect();
                        total += w * hurwitz_with(n, &branch, mu, nu)?;
                    }
                }
            }
        }
    }
    Ok(total)
}

/// Ordered profile tuples of weight `n` with every ℓ* ≥ 1 and Σℓ* = d.
pub fn branch_profile_tuples(n: usize, d: usize) -> Vec<Vec<Partition>> {
    let pool = nonidentity_profiles(n);
    profile_tuples(&pool, d)
        .iter()
        .map(|t| pick(&pool, t))
        .collect()
}

/// c_i = q^i for i = 0, …, m: the parameters whose G̃ is H_q truncated.
pub fn quantum_parameters(q: &Rational, m: usize) -> Vec<Rational> {
    (0..=m).map(|i| num_traits::pow(q.clone(), i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Literal enumeration of index tuples and permutations, for small c-lists.
    fn literal_weight(c: &[Rational], profiles: &[Partition], weak: bool) -> Rational {
        let k = profiles.len();
        let exps = colengths(profiles);
        let mut chains: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..k {
            let mut next = Vec::new();
            for ch in &chains {
                let lo = match ch.last() {
                    None => 0,
                    Some(&l) if weak => l,
                    Some(&l) => l + 1,
                };
                for i in lo..c.len() {
                    let mut e = ch.clone();
                    e.push(i);
                    next.push(e);
                }
            }
            chains = next;
        }
        let mut total = Rational::zero();
        for sigma in crate::hurwitz::all_permutations(k) {
            for ch in &chains {
                let mut term = Rational::one();
                for j in 0..k {
                    term *= num_traits::pow(c[ch[sigma[j]]].clone(), exps[j]);
                }
                total += term;
            }
        }
        total / Rational::from_integer(factorial(k))
    }

    #[test]
    fn g_coeffs_examples() {
        let g = WeightGen::rational(vec![int(1)], vec![]).unwrap();
        assert_eq!(g.g_coeffs(3).unwrap(), vec![int(1), int(1), int(0), int(0)]);
        let g = WeightGen::quantum(rat(1, 2)).unwrap();
        let gs = g.g_coeffs(2).unwrap();
        assert_eq!((gs[1].clone(), gs[2].clone()), (int(2), rat(8, 3)));
        let g = WeightGen::rational(vec![], vec![rat(1, 2)]).unwrap();
        assert_eq!(
            g.g_coeffs(3).unwrap(),
            vec![int(1), rat(1, 2), rat(1, 4), rat(1, 8)]
        );
        assert_eq!(WeightGen::Trivial.g_coeffs(0).unwrap(), vec![int(1)]);
    }

    #[test]
    fn quantum_q_one_is_division_by_zero() {
        let g = WeightGen::Quantum { q: int(1) };
        assert_eq!(g.g_coeffs(2).unwrap_err().code(), "division_by_zero");
        assert!(WeightGen::quantum(int(1)).is_err());
        assert!(WeightGen::quantum(int(0)).is_err());
        assert!(WeightGen::quantum(rat(-1, 2)).is_ok());
    }

    #[test]
    fn weight_factor_examples() {
        let c = vec![int(2), int(3)];
        assert_eq!(weight_factor(&c, &[p(&[3])]), int(4 + 9));
        assert_eq!(
            weight_factor(&[int(1), int(1)], &[p(&[2]), p(&[2])]),
            int(1)
        );
        assert_eq!(weight_factor(&[int(1)], &[p(&[2]), p(&[2])]), int(0));
    }

    #[test]
    fn weight_factor_tilde_examples() {
        assert_eq!(weight_factor_tilde(&[rat(2, 5)], &[p(&[2])]), rat(2, 5));
        assert_eq!(weight_factor_tilde(&[int(1)], &[p(&[2]), p(&[2])]), int(1));
        let q = rat(1, 2);
        let m = 10;
        let w = weight_factor_tilde(&quantum_parameters(&q, m), &[p(&[2])]);
        let expect = (Rational::one() - pow(&q, m as i64 + 1).unwrap()) / (Rational::one() - &q);
        assert_eq!(w, expect);
    }

    #[test]
    fn chain_recursion_matches_literal_enumeration() {
        let c = vec![rat(1, 2), int(-1), rat(3, 7), int(2)];
        let profiles = [p(&[2, 1]), p(&[3]), p(&[2, 1]), p(&[1, 1, 1])];
        for k in 0..=4 {
            let pr = &profiles[..k];
            assert_eq!(
                symmetrized_chain_sum(&c, &colengths(pr), false),
                literal_weight(&c, pr, false)
            );
            assert_eq!(
                symmetrized_chain_sum(&c, &colengths(pr), true),
                literal_weight(&c, pr, true)
            );
        }
    }

    #[test]
    fn quantum_weight_examples() {
        let q = rat(1, 2);
        assert_eq!(quantum_weight_factor(&q, &[p(&[2])]).unwrap(), int(2));
        assert_eq!(quantum_weight_factor(&q, &[p(&[3])]).unwrap(), rat(-4, 3));
        let e = quantum_weight_factor(&q, &[p(&[1])]).unwrap_err();
        assert_eq!(e.code(), "singular_parameter");
    }

    #[test]
    fn rational_weight_examples() {
        let c = vec![int(1), rat(1, 3)];
        let mus = [p(&[2]), p(&[3])];
        assert_eq!(
            rational_weight_factor(&c, &[rat(1, 2)], &mus, &[]).unwrap(),
            weight_factor(&c, &mus)
        );
        assert_eq!(
            rational_weight_factor(&[], &[rat(2, 7)], &[], &[p(&[2])]).unwrap(),
            rat(2, 7)
        );
        assert_eq!(
            rational_weight_factor(&[int(1)], &[rat(1, 2)], &[p(&[2])], &[p(&[2])]).unwrap(),
            rat(1, 2)
        );
        assert!(rational_weight_factor(&c, &[], &[], &[]).is_err());
    }

    #[test]
    fn weighted_examples() {
        let c1 = rat(3, 5);
        let g = WeightGen::finite_product(vec![c1.clone()]);
        assert_eq!(
            weighted_hurwitz(&g, 1, &p(&[2]), &p(&[1, 1])).unwrap(),
            c1 / int(2)
        );
        assert_eq!(weighted_hurwitz(&g, 1, &p(&[2]), &p(&[2])).unwrap(), int(0));
        for n in 1..=4 {
            for mu in enumerate_partitions(n) {
                for nu in enumerate_partitions(n) {
                    let expect = if mu == nu {
                        Rational::new(BigInt::one(), mu.z())
                    } else {
                        int(0)
                    };
                    assert_eq!(weighted_hurwitz(&g, 0, &mu, &nu).unwrap(), expect);
                }
            }
        }
        assert!(weighted_hurwitz(&g, 1, &p(&[2]), &p(&[1])).is_err());
    }

    #[test]
    fn multiset_path_matches_ordered_reference() {
        let gens = [
            WeightGen::finite_product(vec![int(1), rat(-2, 3)]),
            WeightGen::rational(vec![int(1)], vec![rat(1, 3)]).unwrap(),
            WeightGen::quantum(rat(1, 2)).unwrap(),
            WeightGen::Trivial,
        ];
        for g in &gens {
            for n in 2..=4 {
                let ps = enumerate_partitions(n);
                for mu in &ps {
                    for nu in &ps {
                        for d in 1..=3 {
                            assert_eq!(
                                weighted_hurwitz(g, d, mu, nu).unwrap(),
                                weighted_hurwitz_reference(g, d, mu, nu).unwrap(),
                                "{} d={d} {mu} {nu}",
                                g.name()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn weighted_is_symmetric_in_mu_nu() {
        let g = WeightGen::rational(vec![int(1)], vec![rat(1, 3)]).unwrap();
        let ps = enumerate_partitions(4);
        for mu in &ps {
            for nu in &ps {
                assert_eq!(
                    weighted_hurwitz(&g, 2, mu, nu).unwrap(),
                    weighted_hurwitz(&g, 2, nu, mu).unwrap()
                );
            }
        }
    }

    #[test]
    fn eval_handles_poles_and_truncation() {
        let g = WeightGen::rational(vec![int(1)], vec![rat(1, 3)]).unwrap();
        assert_eq!(g.eval(&int(1), None).unwrap(), int(3));
        assert_eq!(
            g.eval(&int(3), None).unwrap_err().code(),
            "singular_parameter"
        );
        let hq = WeightGen::quantum(rat(1, 2)).unwrap();
        assert_eq!(hq.eval(&int(1), None).unwrap_err().code(), "usage");
        assert_eq!(hq.eval(&rat(1, 3), Some(0)).unwrap(), rat(3, 2));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn profile_list() -> impl Strategy<Value = Vec<Partition>> {
            proptest::collection::vec(0usize..5, 1..4).prop_map(|idx| {
                let ps = enumerate_partitions(3);
                idx.into_iter().map(|i| ps[i % ps.len()].clone()).collect()
            })
        }

        fn params() -> impl Strategy<Value = Vec<Rational>> {
            proptest::collection::vec((-5i64..=5, 1i64..=4).prop_map(|(a, b)| rat(a, b)), 1..4)
        }

        proptest! {
            #[test]
            fn weights_ignore_profile_order(profiles in profile_list(), c in params(), seed in 0usize..6) {
                let mut shuffled = profiles.clone();
                shuffled.rotate_left(seed % profiles.len());
                if seed % 2 == 1 {
                    shuffled.reverse();
                }
                prop_assert_eq!(weight_factor(&c, &profiles), weight_factor(&c, &shuffled));
                prop_assert_eq!(weight_factor_tilde(&c, &profiles), weight_factor_tilde(&c, &shuffled));
            }

            #[test]
            fn weights_ignore_parameter_order(profiles in profile_list(), c in params()) {
                let mut rev = c.clone();
                rev.reverse();
                prop_assert_eq!(weight_factor(&c, &profiles), weight_factor(&rev, &profiles));
                prop_assert_eq!(weight_factor_tilde(&c, &profiles), weight_factor_tilde(&rev, &profiles));
            }
        }
    }
}
