//! Classical (possibly disconnected) Hurwitz numbers.
//!
//! [`hurwitz_number`] is the Frobenius–Schur character sum; [`hurwitz_oracle`]
//! counts factorizations of the identity directly in S_N.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{factorial, pow, Rational};
use crate::characters::CharacterTable;
use crate::error::{Error, Result};
use crate::partitions::Partition;

pub const ORACLE_MAX_SHEETS: usize = 5;
pub const ORACLE_MAX_PROFILES: usize = 4;

/// Sheet count N together with the ramification profiles over the branch
/// points. Every profile has weight N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileTuple {
    n: usize,
    profiles: Vec<Partition>,
}

impl ProfileTuple {
    pub fn new(n: usize, profiles: Vec<Partition>) -> Result<Self> {
        if let Some(bad) = profiles.iter().find(|p| p.weight() != n) {
            return Err(Error::usage(format!(
                "profile {bad} has weight {}, expected {n}",
                bad.weight()
            )));
        }
        Ok(ProfileTuple { n, profiles })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn profiles(&self) -> &[Partition] {
        &self.profiles
    }

    /// d = Σ ℓ*(μ^(i)).
    pub fn total_colength(&self) -> usize {
        self.profiles.iter().map(Partition::colength).sum()
    }
}

/// Σ_{λ⊢N} h(λ)^{k−2} ∏_j χ_λ(μ^(j))/z_{μ^(j)}.
pub fn hurwitz_number(pt: &ProfileTuple) -> Result<Rational> {
    if pt.profiles.is_empty() {
        return Err(Error::usage("at least one profile is required"));
    }
    hurwitz_from_profiles(pt.n, &pt.profiles.iter().collect::<Vec<_>>())
}

/// Character sum over borrowed profiles. All profiles must have weight `n`.
pub(crate) fn hurwitz_from_profiles(n: usize, profiles: &[&Partition]) -> Result<Rational> {
    let table = CharacterTable::get(n)?;
    let cols = profiles
        .iter()
        .map(|p| {
            table
                .index_of(p)
                .ok_or_else(|| Error::usage(format!("{p} is not a partition of {n}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let z_prod: BigInt = profiles.iter().map(|p| p.z()).product();
    let k = profiles.len() as i64;
    let mut total = Rational::zero();
    for (i, lam) in table.partitions().iter().enumerate() {
        let row = table.row(i);
        let chi_prod: BigInt = cols.iter().map(|&j| BigInt::from(row[j])).product();
        if chi_prod.is_zero() {
            continue;
        }
        let h = Rational::from_integer(lam.hook_product());
        total += pow(&h, k - 2)? * Rational::from_integer(chi_prod);
    }
    Ok(total / Rational::from_integer(z_prod))
}

/// All permutations of {0, …, n−1} in lexicographic order.
pub(crate) fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

fn cycle_type(perm: &[usize]) -> Partition {
    let mut seen = vec![false; perm.len()];
    let mut parts = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        parts.push(len);
    }
    Partition::from_unsorted(parts).expect("cycle lengths are positive")
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

/// Number of tuples (σ_1, …, σ_k) with σ_i of cycle type μ^(i) and
/// σ_1⋯σ_k = id, divided by N!.
pub fn hurwitz_oracle(pt: &ProfileTuple) -> Result<Rational> {
    let n = pt.n;
    let k = pt.profiles.len();
    if n > ORACLE_MAX_SHEETS || k > ORACLE_MAX_PROFILES {
        return Err(Error::ScaleGuard(format!(
            "factorization oracle limited to N <= {ORACLE_MAX_SHEETS}, k <= {ORACLE_MAX_PROFILES}; got N = {n}, k = {k}"
        )));
    }
    if k == 0 {
        return Err(Error::usage("at least one profile is required"));
    }
    let mut classes: HashMap<Partition, Vec<Vec<usize>>> = HashMap::new();
    for perm in all_permutations(n) {
        classes.entry(cycle_type(&perm)).or_default().push(perm);
    }
    let identity: Vec<usize> = (0..n).collect();
    let (last, init) = pt.profiles.split_last().expect("k >= 1");
    // Fold the first k−1 factors into a histogram of partial products; the
    // last factor must then be the inverse of the product, which has the same
    // cycle type as the product itself.
    let mut partial: HashMap<Vec<usize>, u64> = HashMap::from([(identity, 1)]);
    for mu in init {
        let class = classes.get(mu).map(Vec::as_slice).unwrap_or(&[]);
        let mut next: HashMap<Vec<usize>, u64> = HashMap::new();
        for (prod, count) in &partial {
            for sigma in class {
                *next.entry(compose(prod, sigma)).or_default() += count;
            }
        }
        partial = next;
    }
    let count: u64 = partial
        .iter()
        .filter(|(prod, _)| &cycle_type(prod) == last)
        .map(|(_, c)| c)
        .sum();
    Ok(Rational::new(BigInt::from(count), factorial(n)))
}

/// Euler characteristic and genus from the Riemann–Hurwitz formula
/// χ = 2N − d. The genus is returned as a rational; a non-integer value means
/// no connected cover has these profiles.
pub fn riemann_hurwitz(pt: &ProfileTuple) -> (i64, Rational) {
    let d = pt.total_colength() as i64;
    let chi = 2 * pt.n as i64 - d;
    let genus = Rational::new(BigInt::from(2 - chi), BigInt::from(2));
    (chi, genus)
}
