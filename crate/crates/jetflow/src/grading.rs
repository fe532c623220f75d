//! Level-grading combinatorics: integer partitions, level-homogeneous
//! monomials above a base level, and level decomposition of polynomials.
//!
//! The level of a monomial above a base `b` is `sum_j j * m_j` where `m_j`
//! is the exponent of `u_{b+j}`; jets at or below the base and the symbols
//! `a`, `ab` sit at level 0. Total differentiation raises the level of a
//! homogeneous expression by exactly one, and integration by parts
//! preserves it.

use std::collections::BTreeMap;

use num::One;

use crate::error::{Error, Result};
use crate::ring::{DiffPoly, Indet, PowerProduct, Rat};

/// A partition of an integer, stored as part multiplicities:
/// `multiplicities[j-1]` counts occurrences of the part `j`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    multiplicities: Vec<u32>,
}

impl Partition {
    pub fn from_multiplicities(multiplicities: Vec<u32>) -> Self {
        let mut m = multiplicities;
        while m.last() == Some(&0) {
            m.pop();
        }
        Partition { multiplicities: m }
    }

    /// Multiplicity vector padded to length `n`.
    pub fn multiplicities(&self, n: usize) -> Vec<u32> {
        let mut m = self.multiplicities.clone();
        m.resize(n, 0);
        m
    }

    /// The integer being partitioned.
    pub fn total(&self) -> u32 {
        self.multiplicities
            .iter()
            .enumerate()
            .map(|(i, m)| (i as u32 + 1) * m)
            .sum()
    }

    /// Number of parts.
    pub fn num_parts(&self) -> u32 {
        self.multiplicities.iter().sum()
    }

    /// Parts in ascending order, e.g. `1+1+3` gives `[1, 1, 3]`.
    pub fn parts(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (i, m) in self.multiplicities.iter().enumerate() {
            for _ in 0..*m {
                out.push(i as u32 + 1);
            }
        }
        out
    }
}

/// All partitions of `n`, ordered lexicographically by ascending part list
/// (so `1+1+...+1` comes first and `n` itself last).
pub fn partitions(n: u32) -> Result<Vec<Partition>> {
    if n < 1 {
        return Err(Error::InvalidExpression {
            reason: format!("partitions are defined for n >= 1, got {n}"),
        });
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; n as usize];
    enumerate(n, 1, &mut current, &mut out);
    Ok(out)
}

fn enumerate(remaining: u32, min_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition::from_multiplicities(current.clone()));
        return;
    }
    for part in min_part..=remaining {
        current[(part - 1) as usize] += 1;
        enumerate(remaining - part, part, current, out);
        current[(part - 1) as usize] -= 1;
    }
}

/// A level-homogeneous monomial `prod_j u_{b+j}^{m_j}` of level
/// `sum_j j * m_j` above the base `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LevelMonomial {
    base: u32,
    factors: BTreeMap<u32, u32>,
}

impl LevelMonomial {
    pub fn from_partition(base: u32, partition: &Partition) -> Self {
        let factors = partition
            .multiplicities
            .iter()
            .enumerate()
            .filter(|(_, m)| **m > 0)
            .map(|(i, m)| (i as u32 + 1, *m))
            .collect();
        LevelMonomial { base, factors }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Map offset `j >= 1` to the exponent of `u_{b+j}`.
    pub fn factors(&self) -> &BTreeMap<u32, u32> {
        &self.factors
    }

    pub fn level(&self) -> u32 {
        self.factors.iter().map(|(j, m)| j * m).sum()
    }

    /// Number of jet factors counted with multiplicity.
    pub fn num_factors(&self) -> u32 {
        self.factors.values().sum()
    }

    pub fn power_product(&self) -> PowerProduct {
        PowerProduct::from_pairs(
            self.factors
                .iter()
                .map(|(j, m)| (Indet::Jet(self.base + j), *m as i32)),
        )
        .expect("nonnegative exponents")
    }

    pub fn to_poly(&self) -> DiffPoly {
        DiffPoly::monomial(self.power_product(), Rat::one())
    }
}

/// One monomial per partition of `n`, in the same order as [`partitions`].
pub fn level_monomials(base: u32, n: u32) -> Result<Vec<LevelMonomial>> {
    Ok(partitions(n)?
        .iter()
        .map(|p| LevelMonomial::from_partition(base, p))
        .collect())
}

/// Split a polynomial by level above `b`. The parts sum back to the input.
pub fn level_decompose(e: &DiffPoly, b: u32) -> BTreeMap<i64, DiffPoly> {
    let mut buckets: BTreeMap<i64, Vec<(PowerProduct, Rat)>> = BTreeMap::new();
    for (pow, coeff) in e.terms() {
        buckets
            .entry(pow.level_above(b))
            .or_default()
            .push((pow.clone(), coeff.clone()));
    }
    buckets
        .into_iter()
        .map(|(l, terms)| (l, DiffPoly::from_terms(terms)))
        .collect()
}

/// The maximal-level part of a polynomial above `b` (zero for zero input).
pub fn top_level(e: &DiffPoly, b: u32) -> DiffPoly {
    level_decompose(e, b)
        .into_iter()
        .next_back()
        .map(|(_, part)| part)
        .unwrap_or_else(DiffPoly::zero)
}
