//! Abstract abelian groups `U(1)^r × Z_{d1} × … × Z_{dk}`, optionally with
//! one cyclic factor generated by an antiunitary element (written `Z4*`).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{snf, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSignature {
    /// Invariant factors, each at least 2 and dividing the next.
    pub finite: Vec<u64>,
    pub torus_rank: usize,
    /// Order of the cyclic factor generated by an antiunitary element; one
    /// of the entries of `finite` when present.
    pub star: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupOrder {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for GroupOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupOrder::Finite(n) => write!(f, "{n}"),
            GroupOrder::Infinite => write!(f, "infinite"),
        }
    }
}

fn to_u64(x: &BigInt) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::Unsupported(format!("invariant factor {x} exceeds 64 bits")))
}

/// Invariant factors (≥ 2, divisibility chain) of `Z_{f1} × … × Z_{fk}`.
pub fn invariant_factors(factors: &[u64]) -> Vec<u64> {
    if factors.is_empty() {
        return Vec::new();
    }
    let d: Vec<BigInt> = factors.iter().map(|&f| BigInt::from(f)).collect();
    let m = IntMatrix::diagonal(d.len(), d.len(), &d);
    snf(&m)
        .d
        .iter()
        .filter(|x| **x > BigInt::one())
        .map(|x| to_u64(x).expect("factors of u64 inputs fit"))
        .collect()
}

pub fn canonicalize(factors: &[u64]) -> GroupSignature {
    GroupSignature::finite(factors)
}

/// Group read off a Smith diagonal of an X matrix with `n` columns.
pub fn group_from_snf(d: &[BigInt], n: usize) -> Result<GroupSignature> {
    let rank = d.iter().filter(|x| !x.is_zero()).count();
    let finite = d
        .iter()
        .filter(|x| **x > BigInt::one())
        .map(to_u64)
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupSignature {
        finite,
        torus_rank: n.saturating_sub(rank),
        star: None,
    })
}

fn two_adic(x: u64) -> u32 {
    x.trailing_zeros()
}

impl GroupSignature {
    pub fn trivial() -> Self {
        GroupSignature {
            finite: Vec::new(),
            torus_rank: 0,
            star: None,
        }
    }

    pub fn finite(factors: &[u64]) -> Self {
        GroupSignature {
            finite: invariant_factors(factors),
            torus_rank: 0,
            star: None,
        }
    }

    pub fn with_torus(mut self, rank: usize) -> Self {
        self.torus_rank = rank;
        self
    }

    /// The group with invariant factors `factors` (any form) in which the
    /// antiunitary elements have 2-adic order valuation at least `e`, and
    /// some reach it. The star goes on the largest slot of valuation `e`.
    pub fn with_antiunitary(factors: &[u64], torus_rank: usize, e: u32) -> Result<Self> {
        let finite = invariant_factors(factors);
        let star = finite
            .iter()
            .rev()
            .find(|&&f| two_adic(f) == e)
            .copied()
            .ok_or_else(|| {
                Error::Unsupported(format!("no cyclic factor of 2-adic valuation {e}"))
            })?;
        Ok(GroupSignature {
            finite,
            torus_rank,
            star: Some(star),
        })
    }

    /// `B × Z_q*` for a unitary part `B` (any factor list) and even `q`.
    pub fn starred(unitary: &[u64], q: u64, torus_rank: usize) -> Result<Self> {
        if q == 0 || q % 2 == 1 {
            return Err(Error::GroupName(format!(
                "antiunitary cyclic factor must have even order, got {q}"
            )));
        }
        let mut all = unitary.to_vec();
        all.push(q);
        Self::with_antiunitary(&all, torus_rank, two_adic(q))
    }

    pub fn is_trivial(&self) -> bool {
        self.finite.is_empty() && self.torus_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.torus_rank == 0
    }

    pub fn is_antiunitary(&self) -> bool {
        self.star.is_some()
    }

    pub fn finite_order(&self) -> BigInt {
        self.finite.iter().map(|&f| BigInt::from(f)).product()
    }

    pub fn order(&self) -> GroupOrder {
        if self.torus_rank > 0 {
            GroupOrder::Infinite
        } else {
            GroupOrder::Finite(self.finite_order())
        }
    }

    /// Unitary part with the star dropped.
    pub fn unstarred(&self) -> Self {
        GroupSignature {
            star: None,
            ..self.clone()
        }
    }

    /// ASCII name, e.g. `U(1)xZ2`, `Z4xZ2*`, `Z2xZ2xZ2*`; `1` if trivial.
    pub fn name(&self) -> String {
        let mut parts: Vec<String> = vec!["U(1)".to_string(); self.torus_rank];
        let mut rest = self.finite.clone();
        let starred = self.star.and_then(|s| {
            let i = rest.iter().rposition(|&f| f == s)?;
            Some(rest.remove(i))
        });
        parts.extend(rest.iter().map(|f| format!("Z{f}")));
        if let Some(s) = starred {
            parts.push(format!("Z{s}*"));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("x")
        }
    }
}

impl fmt::Display for GroupSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Ord for GroupSignature {
    fn cmp(&self, other: &Self) -> Ordering {
        self.torus_rank
            .cmp(&other.torus_rank)
            .then_with(|| self.finite_order().cmp(&other.finite_order()))
            .then_with(|| self.finite.len().cmp(&other.finite.len()))
            .then_with(|| self.finite.cmp(&other.finite))
            .then_with(|| self.star.cmp(&other.star))
    }
}

impl PartialOrd for GroupSignature {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Accepts `Z4`, `Z2xZ2`, `Z2×Z4`, `U(1)xZ2`, `Z4*`, `Z4xZ2*`, `1`.
impl FromStr for GroupSignature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::GroupName(s.to_string());
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned == "1" || cleaned.eq_ignore_ascii_case("trivial") {
            return Ok(Self::trivial());
        }
        let mut torus = 0;
        let mut unitary = Vec::new();
        let mut star = None;
        for part in cleaned.split(['x', 'X', '×']) {
            if part.eq_ignore_ascii_case("U(1)") {
                torus += 1;
                continue;
            }
            let (body, starred) = match part.strip_suffix('*') {
                Some(b) => (b, true),
                None => (part, false),
            };
            let n: u64 = body
                .strip_prefix('Z')
                .and_then(|d| d.parse().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(bad)?;
            if starred {
                if star.replace(n).is_some() {
                    return Err(bad());
                }
            } else {
                unitary.push(n);
            }
        }
        match star {
            Some(q) => Self::starred(&unitary, q, torus),
            None => Ok(Self::finite(&unitary).with_torus(torus)),
        }
    }
}

fn prime_powers(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        let mut k = 0;
        while m.is_multiple_of(p) {
            m /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every abelian group of order `m` (up to isomorphism), sorted.
pub fn abelian_groups_of_order(m: u64) -> Vec<GroupSignature> {
    let mut groups = vec![Vec::<u64>::new()];
    for (p, k) in prime_powers(m) {
        let mut next = Vec::new();
        for g in &groups {
            for part in partitions(k, k) {
                let mut h = g.clone();
                h.extend(part.iter().map(|&e| p.pow(e)));
                next.push(h);
            }
        }
        groups = next;
    }
    let mut out: Vec<GroupSignature> = groups.iter().map(|g| GroupSignature::finite(g)).collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn from_smith_diagonal() {
        assert_eq!(group_from_snf(&ints(&[1, 3]), 2).unwrap().name(), "Z3");
        assert_eq!(group_from_snf(&[], 2).unwrap().name(), "U(1)xU(1)");
        assert_eq!(group_from_snf(&ints(&[2, 2]), 2).unwrap().name(), "Z2xZ2");
        assert_eq!(group_from_snf(&ints(&[2, 0]), 2).unwrap().name(), "U(1)xZ2");
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(canonicalize(&[2, 3]).finite, vec![6]);
        assert_eq!(canonicalize(&[4, 2]).finite, vec![2, 4]);
        assert_eq!(canonicalize(&[3, 3]).finite, vec![3, 3]);
        assert_eq!(canonicalize(&[1, 1]).finite, Vec::<u64>::new());
    }

    #[test]
    fn orders() {
        assert_eq!(canonicalize(&[2, 4]).order(), GroupOrder::Finite(8.into()));
        assert_eq!(
            canonicalize(&[2]).with_torus(1).order(),
            GroupOrder::Infinite
        );
    }

    #[test]
    fn parse_and_print() {
        for name in [
            "Z4",
            "Z2xZ2",
            "U(1)xZ2",
            "Z4*",
            "Z4xZ2*",
            "Z2xZ2xZ2*",
            "Z8*",
            "U(1)xZ2*",
            "Z6*",
            "1",
        ] {
            assert_eq!(name.parse::<GroupSignature>().unwrap().name(), name);
        }
        assert_eq!("Z2×Z3".parse::<GroupSignature>().unwrap().name(), "Z6");
        assert_eq!("Z3xZ2*".parse::<GroupSignature>().unwrap().name(), "Z6*");
        assert_eq!("Z2*xZ4".parse::<GroupSignature>().unwrap().name(), "Z4xZ2*");
        assert!("Z3*".parse::<GroupSignature>().is_err());
        assert!("Q8".parse::<GroupSignature>().is_err());
    }

    #[test]
    fn groups_of_small_order() {
        let names = |m| {
            abelian_groups_of_order(m)
                .iter()
                .map(|g| g.name())
                .collect::<Vec<_>>()
        };
        assert_eq!(names(8), vec!["Z8", "Z2xZ4", "Z2xZ2xZ2"]);
        assert_eq!(names(12), vec!["Z12", "Z2xZ6"]);
        assert_eq!(names(7), vec!["Z7"]);
    }
}
