//! Integer partitions and the scalar invariants attached to them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::factorial;
use crate::error::{Error, Result};

/// A weakly decreasing list of positive parts. The empty partition is the
/// partition of 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::usage("partition parts must be positive"));
        }
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::usage("partition parts must be weakly decreasing"));
        }
        Ok(Partition { parts })
    }

    /// Sorts arbitrary positive parts into canonical order.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// (1^n), the cycle type of the identity.
    pub fn identity(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// ℓ*(μ) = |μ| − ℓ(μ).
    pub fn colength(&self) -> usize {
        self.weight() - self.length()
    }

    /// m_i(μ), the number of parts equal to `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=first)
            .map(|j| self.parts.iter().take_while(|&&p| p >= j).count())
            .collect();
        Partition { parts }
    }

    /// Order of the centralizer of a permutation of this cycle type:
    /// ∏_i i^{m_i} · m_i!.
    pub fn z(&self) -> BigInt {
        let mut z = BigInt::one();
        let mut rest = &self.parts[..];
        while let Some(&p) = rest.first() {
            let m = rest.iter().take_while(|&&q| q == p).count();
            z *= num_traits::pow(BigInt::from(p), m) * factorial(m);
            rest = &rest[m..];
        }
        z
    }

    /// Product of all hook lengths of the Young diagram.
    pub fn hook_product(&self) -> BigInt {
        let conj = self.conjugate();
        let mut h = BigInt::one();
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                let arm = row - j - 1;
                let leg = conj.parts[j] - i - 1;
                h *= BigInt::from(arm + leg + 1);
            }
        }
        h
    }

    /// Contents j − i of every cell (i, j), row by row.
    pub fn contents(&self) -> Vec<i64> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &row)| (0..row).map(move |j| j as i64 - i as i64))
            .collect()
    }

    /// Next partition of the same weight in reverse-lexicographic order.
    fn next_revlex(&self) -> Option<Partition> {
        let mut parts = self.parts.clone();
        // Strip trailing ones, then decrement the last part > 1 and refill.
        let ones = parts.iter().rev().take_while(|&&p| p == 1).count();
        parts.truncate(parts.len() - ones);
        let last = parts.pop()?;
        let k = last - 1;
        let mut remaining = ones + last;
        while remaining > 0 {
            let take = remaining.min(k);
            parts.push(take);
            remaining -= take;
        }
        Some(Partition { parts })
    }
}

/// All partitions of `n` in reverse-lexicographic order, starting from (n).
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Some(if n == 0 {
        Partition::empty()
    } else {
        Partition { parts: vec![n] }
    });
    while let Some(p) = cur {
        cur = p.next_revlex();
        out.push(p);
    }
    out
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"[3,1,1]"`; `"[]"` is the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::usage(format!("partition must be bracketed: {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::usage(format!("bad partition part {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// Parses a comma-joined list of bracket groups, e.g. `"[2],[2,1]"`.
pub fn parse_profile_list(s: &str) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let close = rest
            .find(']')
            .ok_or_else(|| Error::usage(format!("unterminated partition in {s:?}")))?;
        out.push(rest[..=close].parse()?);
        rest = rest[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err(Error::usage(format!("trailing comma in {s:?}")));
            }
        } else if !rest.is_empty() {
            return Err(Error::usage(format!(
                "expected ',' between partitions in {s:?}"
            )));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Euler's pentagonal-number recurrence, independent of the enumerator.
    fn partition_numbers(max: usize) -> Vec<i64> {
        let mut pn = vec![0i64; max + 1];
        pn[0] = 1;
        for n in 1..=max {
            let mut k = 1i64;
            loop {
                let g1 = (k * (3 * k - 1) / 2) as usize;
                if g1 > n {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                pn[n] += sign * pn[n - g1];
                let g2 = (k * (3 * k + 1) / 2) as usize;
                if g2 <= n {
                    pn[n] += sign * pn[n - g2];
                }
                k += 1;
            }
        }
        pn
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_partitions(0), vec![Partition::empty()]);
        assert_eq!(enumerate_partitions(4).len(), 5);
        assert_eq!(enumerate_partitions(6).len(), 11);
        let pn = partition_numbers(40);
        for (n, &p) in pn.iter().enumerate() {
            assert_eq!(enumerate_partitions(n).len() as i64, p, "n = {n}");
        }
    }

    #[test]
    fn enumeration_order_is_reverse_lex() {
        let ps = enumerate_partitions(5);
        assert_eq!(ps.first(), Some(&p(&[5])));
        assert_eq!(ps.last(), Some(&p(&[1, 1, 1, 1, 1])));
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        let names: Vec<String> = enumerate_partitions(4)
            .iter()
            .map(|q| q.to_string())
            .collect();
        assert_eq!(names, ["[4]", "[3,1]", "[2,2]", "[2,1,1]", "[1,1,1,1]"]);
    }

    #[test]
    fn z_values() {
        assert_eq!(p(&[2]).z(), BigInt::from(2));
        assert_eq!(p(&[1, 1, 1]).z(), BigInt::from(6));
        assert_eq!(p(&[3, 1, 1]).z(), BigInt::from(6));
        assert_eq!(Partition::empty().z(), BigInt::from(1));
    }

    #[test]
    fn class_sizes_sum_to_factorial() {
        for n in 0..=8 {
            let total: BigInt = enumerate_partitions(n)
                .iter()
                .map(|m| factorial(n) / m.z())
                .sum();
            assert_eq!(total, factorial(n));
        }
    }

    #[test]
    fn colength_values() {
        assert_eq!(p(&[1, 1, 1, 1]).colength(), 0);
        assert_eq!(p(&[4]).colength(), 3);
        assert_eq!(p(&[2, 1]).colength(), 1);
    }

    #[test]
    fn hook_products() {
        assert_eq!(p(&[1]).hook_product(), BigInt::from(1));
        assert_eq!(p(&[2, 1]).hook_product(), BigInt::from(3));
        assert_eq!(p(&[2, 2]).hook_product(), BigInt::from(12));
    }

    #[test]
    fn dimension_identity() {
        for n in 0..=8 {
            let total: BigInt = enumerate_partitions(n)
                .iter()
                .map(|l| {
                    let dim = factorial(n) / l.hook_product();
                    &dim * &dim
                })
                .sum();
            assert_eq!(total, factorial(n));
        }
    }

    #[test]
    fn contents_values() {
        assert_eq!(p(&[1]).contents(), vec![0]);
        let mut c = p(&[2, 1]).contents();
        c.sort();
        assert_eq!(c, vec![-1, 0, 1]);
        assert_eq!(p(&[3]).contents(), vec![0, 1, 2]);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("[3,1,1]".parse::<Partition>().unwrap(), p(&[3, 1, 1]));
        assert_eq!("[]".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!(Partition::empty().to_string(), "[]");
        assert!("[1,2]".parse::<Partition>().is_err());
        assert!("3,1".parse::<Partition>().is_err());
        assert_eq!(
            parse_profile_list("[2],[2, 1]").unwrap(),
            vec![p(&[2]), p(&[2, 1])]
        );
        assert!(parse_profile_list("[2][1]").is_err());
    }

    #[test]
    fn colength_zero_iff_identity() {
        for n in 0..=7 {
            for m in enumerate_partitions(n) {
                assert_eq!(m.colength() == 0, m == Partition::identity(n));
            }
        }
    }

    #[test]
    fn hook_product_matches_determinant_formula() {
        // 1/h(λ) = det(1/(λ_i − i + j)!) with 1/m! = 0 for m < 0.
        use crate::algebra::{det, Rational};
        use num_bigint::BigInt;
        for n in 1..=9 {
            for lam in enumerate_partitions(n) {
                let l = lam.length() as i64;
                let m: Vec<Vec<Rational>> = (0..l)
                    .map(|i| {
                        (0..l)
                            .map(|j| {
                                let a = lam.parts()[i as usize] as i64 - i + j;
                                if a < 0 {
                                    Rational::from_integer(BigInt::from(0))
                                } else {
                                    Rational::new(
                                        BigInt::from(1),
                                        crate::algebra::factorial(a as usize),
                                    )
                                }
                            })
                            .collect()
                    })
                    .collect();
                assert_eq!(
                    det(&m),
                    Rational::new(BigInt::from(1), lam.hook_product()),
                    "{lam}"
                );
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn conjugation_is_an_involution(parts in proptest::collection::vec(1usize..7, 0..7)) {
                let lam = Partition::from_unsorted(parts).unwrap();
                prop_assert_eq!(lam.conjugate().conjugate(), lam.clone());
                prop_assert_eq!(lam.conjugate().weight(), lam.weight());
                prop_assert_eq!(lam.conjugate().hook_product(), lam.hook_product());
                let mut neg: Vec<i64> = lam.contents().iter().map(|c| -c).collect();
                let mut conj = lam.conjugate().contents();
                neg.sort_unstable();
                conj.sort_unstable();
                prop_assert_eq!(neg, conj);
            }

            #[test]
            fn display_roundtrip(parts in proptest::collection::vec(1usize..9, 0..6)) {
                let lam = Partition::from_unsorted(parts).unwrap();
                prop_assert_eq!(lam.to_string().parse::<Partition>().unwrap(), lam);
            }
        }
    }
}
