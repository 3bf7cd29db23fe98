//! Irreducible characters χ_λ(μ) of the symmetric group and the Schur to
//! power-sum transition they define.
//!
//! Characters are computed with the Murnaghan–Nakayama rule on bead
//! (β-number) configurations: removing a border strip of length r moves one
//! bead r places down, and the strip's height is the number of beads it
//! jumps over.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{MultiPoly, Rational};
use crate::error::{Error, Result};
use crate::hurwitz::all_permutations;
use crate::partitions::{enumerate_partitions, Partition};

/// Largest weight for which characters are guaranteed to fit in an `i64`
/// (|χ| ≤ √N! and partial sums stay below N·√(N−1)!).
pub const MAX_WEIGHT: usize = 32;

/// Largest weight the bialternant oracle will expand.
pub const ORACLE_MAX_WEIGHT: usize = 6;

type Memo = HashMap<(Partition, Vec<usize>), i64>;

/// Full character table of S_n, rows λ and columns μ in canonical order.
#[derive(Debug)]
pub struct CharacterTable {
    n: usize,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    values: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn build(n: usize) -> Result<Self> {
        if n > MAX_WEIGHT {
            return Err(Error::ScaleGuard(format!(
                "character tables are limited to n <= {MAX_WEIGHT}, got {n}"
            )));
        }
        let partitions = enumerate_partitions(n);
        let index = partitions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let mut memo = Memo::new();
        let values = partitions
            .iter()
            .map(|lam| {
                partitions
                    .iter()
                    .map(|mu| murnaghan_nakayama(lam, mu.parts(), &mut memo))
                    .collect()
            })
            .collect();
        Ok(CharacterTable {
            n,
            partitions,
            index,
            values,
        })
    }

    /// Shared table for weight `n`, built on first use. Concurrent callers
    /// may build the same table twice; either copy is identical.
    pub fn get(n: usize) -> Result<Arc<CharacterTable>> {
        static TABLES: OnceLock<Mutex<HashMap<usize, Arc<CharacterTable>>>> = OnceLock::new();
        let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = tables.lock().unwrap().get(&n) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(Self::build(n)?);
        Ok(Arc::clone(tables.lock().unwrap().entry(n).or_insert(table)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Partitions of n in reverse-lexicographic order.
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn value(&self, lam: &Partition, mu: &Partition) -> Result<i64> {
        let not_found =
            |p: &Partition| Error::usage(format!("{p} is not a partition of {}", self.n));
        let i = self.index_of(lam).ok_or_else(|| not_found(lam))?;
        let j = self.index_of(mu).ok_or_else(|| not_found(mu))?;
        Ok(self.values[i][j])
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.values[i]
    }
}

fn murnaghan_nakayama(lam: &Partition, mu: &[usize], memo: &mut Memo) -> i64 {
    let Some((&r, rest)) = mu.split_first() else {
        return if lam.is_empty() { 1 } else { 0 };
    };
    let key = (lam.clone(), mu.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let len = lam.length();
    let beads: Vec<usize> = lam
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| p + len - 1 - i)
        .collect();
    let mut total = 0i64;
    for (idx, &b) in beads.iter().enumerate() {
        if b < r || beads.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let height = beads.iter().filter(|&&c| c > target && c < b).count();
        let mut moved = beads.clone();
        moved[idx] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<usize> = moved
            .iter()
            .enumerate()
            .map(|(i, &c)| c - (len - 1 - i))
            .filter(|&p| p > 0)
            .collect();
        let smaller = Partition::new(parts).expect("bead configuration yields a partition");
        let term = murnaghan_nakayama(&smaller, rest, memo);
        total += if height % 2 == 0 { term } else { -term };
    }
    memo.insert(key, total);
    total
}

/// χ_λ(μ) for |λ| = |μ|.
pub fn character(lam: &Partition, mu: &Partition) -> Result<i64> {
    if lam.weight() != mu.weight() {
        return Err(Error::usage(format!(
            "character weights differ: |{lam}| = {}, |{mu}| = {}",
            lam.weight(),
            mu.weight()
        )));
    }
    CharacterTable::get(lam.weight())?.value(lam, mu)
}

/// Coefficients of s_λ in the power-sum basis: μ ↦ χ_λ(μ)/z_μ, over all μ of
/// the same weight in canonical order.
pub fn schur_in_powersums(lam: &Partition) -> Result<Vec<(Partition, Rational)>> {
    let table = CharacterTable::get(lam.weight())?;
    let i = table.index_of(lam).expect("table covers its own weight");
    Ok(table
        .partitions()
        .iter()
        .zip(table.row(i))
        .map(|(mu, &chi)| (mu.clone(), Rational::new(BigInt::from(chi), mu.z())))
        .collect())
}

/// Independent character computation through alternants: in n variables,
/// p_μ · a_δ = Σ_λ χ_λ(μ) a_{λ+δ}, and x^{λ+δ} occurs in exactly one
/// alternant on the right with coefficient 1. Reading the coefficient of
/// x^{λ+δ} in the expanded product therefore solves the (unitriangular)
/// system for every λ at once.
pub fn character_oracle_column(mu: &Partition) -> Result<Vec<(Partition, BigInt)>> {
    let n = mu.weight();
    if n > ORACLE_MAX_WEIGHT {
        return Err(Error::ScaleGuard(format!(
            "character oracle limited to weight <= {ORACLE_MAX_WEIGHT}, got {n}"
        )));
    }
    let nvars = n.max(1);
    let mut alternant = MultiPoly::zero(nvars);
    for perm in all_permutations(nvars) {
        let exps: Vec<u32> = perm.iter().map(|&p| (nvars - 1 - p) as u32).collect();
        let coeff = if permutation_sign(&perm) > 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        alternant.add_term(exps, coeff);
    }
    let mut product = alternant;
    for &part in mu.parts() {
        let mut power_sum = MultiPoly::zero(nvars);
        for v in 0..nvars {
            let mut e = vec![0u32; nvars];
            e[v] = part as u32;
            power_sum.add_term(e, Rational::one());
        }
        product = product.mul(&power_sum);
    }
    enumerate_partitions(n)
        .into_iter()
        .map(|lam| {
            let exps: Vec<u32> = (0..nvars)
                .map(|i| (lam.parts().get(i).copied().unwrap_or(0) + nvars - 1 - i) as u32)
                .collect();
            let c = product.coeff(&exps);
            debug_assert!(c.is_integer());
            let value = if c.is_zero() {
                BigInt::zero()
            } else {
                c.to_integer()
            };
            Ok((lam, value))
        })
        .collect()
}

/// χ_λ(μ) from [`character_oracle_column`]; refuses weights above 6.
pub fn character_oracle(lam: &Partition, mu: &Partition) -> Result<BigInt> {
    if lam.weight() != mu.weight() {
        return Err(Error::usage("character weights differ"));
    }
    let column = character_oracle_column(mu)?;
    Ok(column
        .into_iter()
        .find(|(l, _)| l == lam)
        .map(|(_, v)| v)
        .expect("column covers all partitions"))
}

fn permutation_sign(perm: &[usize]) -> i32 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}
