//! Exact sparse Laurent-polynomial arithmetic over jet indeterminates.
//!
//! Every expression handled by the engine is a [`DiffPoly`]: a canonically
//! ordered sum of monomials with arbitrary-precision rational coefficients.
//! The indeterminates are the jet variables `u0, u1, u2, ...`, the separant
//! root `a` together with its base-level derivative `ab`, and named constant
//! symbols such as `P` or ansatz unknowns. Negative exponents are permitted
//! on `a`, `ab` and constants only; jet variables always carry nonnegative
//! exponents.
//!
//! Canonical form is unique: equal values have identical term sequences, so
//! equality-to-zero is a syntactic check.

mod parse;
mod print;

pub use parse::parse;
pub use print::{latex, latex_parse};

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational coefficient.
pub type Rat = BigRational;

/// Shorthand for an integer coefficient.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for the fraction `p/q`.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// A ring indeterminate.
///
/// `A` is the m-th root of the separant of a flow and `Ab` its partial
/// derivative with respect to the base-level jet variable; both are functions
/// of the base jet only, which the calculus layer encodes through closure
/// rules. The derived `Ord` (jets by order, then `A`, `Ab`, then symbols by
/// name) fixes the indeterminate enumeration used everywhere.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Indet {
    /// Jet variable `u_k`.
    Jet(u32),
    /// Separant root `a`.
    A,
    /// Derivative of `a` with respect to the base-level jet variable.
    Ab,
    /// Named constant symbol (`P`, ansatz unknowns, ...).
    Sym(Arc<str>),
}

impl Indet {
    pub fn sym(name: &str) -> Indet {
        Indet::Sym(Arc::from(name))
    }

    pub fn is_jet(&self) -> bool {
        matches!(self, Indet::Jet(_))
    }

    /// Text-grammar name of the indeterminate.
    pub fn name(&self) -> String {
        match self {
            Indet::Jet(k) => format!("u{k}"),
            Indet::A => "a".into(),
            Indet::Ab => "ab".into(),
            Indet::Sym(s) => s.to_string(),
        }
    }
}

/// A power product: sorted, duplicate-free list of (indeterminate, exponent)
/// pairs with no zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PowerProduct(Vec<(Indet, i32)>);

impl PowerProduct {
    pub fn one() -> Self {
        PowerProduct(Vec::new())
    }

    /// Build from arbitrary pairs; exponents of repeated indeterminates add.
    pub fn from_pairs<I: IntoIterator<Item = (Indet, i32)>>(pairs: I) -> Result<Self> {
        let mut v: Vec<(Indet, i32)> = pairs.into_iter().filter(|(_, e)| *e != 0).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Indet, i32)> = Vec::with_capacity(v.len());
        for (ind, e) in v {
            match out.last_mut() {
                Some((last, le)) if *last == ind => *le += e,
                _ => out.push((ind, e)),
            }
        }
        out.retain(|(_, e)| *e != 0);
        for (ind, e) in &out {
            if let Indet::Jet(k) = ind {
                if *e < 0 {
                    return Err(Error::NegativeJetExponent { order: *k, exp: *e });
                }
            }
        }
        Ok(PowerProduct(out))
    }

    pub fn var(ind: Indet) -> Self {
        PowerProduct(vec![(ind, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, ind: &Indet) -> i32 {
        self.0
            .iter()
            .find(|(i, _)| i == ind)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn pairs(&self) -> &[(Indet, i32)] {
        &self.0
    }

    pub fn mul(&self, other: &PowerProduct) -> PowerProduct {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let e = self.0[i].1 + other.0[j].1;
                    if e != 0 {
                        out.push((self.0[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        PowerProduct(out)
    }

    /// Multiply by a single indeterminate power (exponent may be negative).
    pub fn mul_var(&self, ind: &Indet, exp: i32) -> PowerProduct {
        if exp == 0 {
            return self.clone();
        }
        self.mul(&PowerProduct(vec![(ind.clone(), exp)]))
    }

    pub fn pow(&self, k: u32) -> PowerProduct {
        PowerProduct(
            self.0
                .iter()
                .map(|(i, e)| (i.clone(), e * k as i32))
                .collect(),
        )
    }

    /// Highest jet order present, if any.
    pub fn max_jet(&self) -> Option<u32> {
        self.0
            .iter()
            .filter_map(|(i, _)| match i {
                Indet::Jet(k) => Some(*k),
                _ => None,
            })
            .max()
    }

    /// Iterator over (jet order, exponent) pairs.
    pub fn jet_powers(&self) -> impl Iterator<Item = (u32, i32)> + '_ {
        self.0.iter().filter_map(|(i, e)| match i {
            Indet::Jet(k) => Some((*k, *e)),
            _ => None,
        })
    }

    /// Level above the base `b`: sum of `(k - b) * exp` over jets with `k > b`.
    pub fn level_above(&self, b: u32) -> i64 {
        self.jet_powers()
            .filter(|(k, _)| *k > b)
            .map(|(k, e)| (k - b) as i64 * e as i64)
            .sum()
    }

    /// True when no jet variable appears.
    pub fn is_jet_free(&self) -> bool {
        self.max_jet().is_none()
    }

    /// Graded comparison used for canonical term ordering.
    ///
    /// Jets are compared from the highest order downward (larger exponent on
    /// the highest differing jet wins), then the exponents of `a`, `ab`, and
    /// finally constants in ascending name order. The leading term of a flow
    /// is therefore its highest-derivative monomial.
    pub fn cmp_graded(&self, other: &PowerProduct) -> Ordering {
        let jets_desc = |p: &PowerProduct| -> Vec<(u32, i32)> {
            let mut v: Vec<(u32, i32)> = p.jet_powers().collect();
            v.sort_by(|a, b| b.0.cmp(&a.0));
            v
        };
        let (sj, oj) = (jets_desc(self), jets_desc(other));
        let (mut i, mut j) = (0, 0);
        loop {
            match (sj.get(i), oj.get(j)) {
                (Some(&(ka, ea)), Some(&(kb, eb))) => {
                    if ka != kb {
                        // the side holding the higher jet order is greater
                        return ka.cmp(&kb);
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (None, None) => break,
            }
        }
        // Jets identical: compare a, then ab exponents.
        let ea = self.exponent(&Indet::A).cmp(&other.exponent(&Indet::A));
        if ea != Ordering::Equal {
            return ea;
        }
        let eb = self.exponent(&Indet::Ab).cmp(&other.exponent(&Indet::Ab));
        if eb != Ordering::Equal {
            return eb;
        }
        // Constants in ascending name order; higher exponent first.
        let syms = |p: &PowerProduct| -> Vec<(Arc<str>, i32)> {
            p.0.iter()
                .filter_map(|(i, e)| match i {
                    Indet::Sym(s) => Some((s.clone(), *e)),
                    _ => None,
                })
                .collect()
        };
        let (sa, sb) = (syms(self), syms(other));
        let (mut i, mut j) = (0, 0);
        loop {
            match (sa.get(i), sb.get(j)) {
                (Some((na, ea)), Some((nb, eb))) => match na.cmp(nb) {
                    // a symbol the other side lacks sorts the owner higher
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (None, None) => return Ordering::Equal,
            }
        }
    }
}

impl Ord for PowerProduct {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_graded(other)
    }
}

impl PartialOrd for PowerProduct {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A differential polynomial in canonical form.
///
/// Terms are stored in strictly decreasing [`PowerProduct::cmp_graded`] order
/// with nonzero coefficients; the zero polynomial is the empty sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DiffPoly {
    terms: Vec<(PowerProduct, Rat)>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        DiffPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            DiffPoly::zero()
        } else {
            DiffPoly {
                terms: vec![(PowerProduct::one(), c)],
            }
        }
    }

    pub fn var(ind: Indet) -> Self {
        DiffPoly {
            terms: vec![(PowerProduct::var(ind), Rat::one())],
        }
    }

    pub fn jet(k: u32) -> Self {
        DiffPoly::var(Indet::Jet(k))
    }

    pub fn monomial(pow: PowerProduct, coeff: Rat) -> Self {
        if coeff.is_zero() {
            DiffPoly::zero()
        } else {
            DiffPoly {
                terms: vec![(pow, coeff)],
            }
        }
    }

    /// Canonicalize an arbitrary term sequence: sort, combine, drop zeros.
    /// The result is independent of the input order, and canonicalizing a
    /// canonical polynomial is the identity.
    pub fn from_terms<I: IntoIterator<Item = (PowerProduct, Rat)>>(terms: I) -> Self {
        let mut v: Vec<(PowerProduct, Rat)> = terms.into_iter().collect();
        v.sort_by(|a, b| b.0.cmp_graded(&a.0));
        let mut out: Vec<(PowerProduct, Rat)> = Vec::with_capacity(v.len());
        for (pow, c) in v {
            match out.last_mut() {
                Some((lp, lc)) if *lp == pow => *lc += c,
                _ => out.push((pow, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        DiffPoly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(PowerProduct, Rat)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The single term of a one-term polynomial.
    pub fn as_monomial(&self) -> Option<(&PowerProduct, &Rat)> {
        match self.terms.as_slice() {
            [(p, c)] => Some((p, c)),
            _ => None,
        }
    }

    /// Rational value of a constant polynomial, if it is one.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        match self.as_monomial() {
            Some((p, c)) if p.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rat) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(p, k)| (p.clone(), k * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, pow: &PowerProduct, c: &Rat) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly::from_terms(
            self.terms
                .iter()
                .map(|(p, k)| (p.mul(pow), k * c)),
        )
    }

    pub fn pow(&self, k: u32) -> DiffPoly {
        let mut acc = DiffPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficient of `v^j`, viewing the polynomial in the variable `v`.
    /// `coefficient_of(e, v, 0)` returns the `v`-free part.
    pub fn coefficient_of(&self, v: &Indet, j: i32) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| p.exponent(v) == j)
                .map(|(p, c)| (p.mul_var(v, -j), c.clone()))
                .collect::<Vec<_>>(),
        }
        .renormalize()
    }

    fn renormalize(self) -> DiffPoly {
        DiffPoly::from_terms(self.terms)
    }

    /// Degree in the variable `v` (highest exponent present; 0 when absent).
    pub fn degree_in(&self, v: &Indet) -> i32 {
        self.terms
            .iter()
            .map(|(p, _)| p.exponent(v))
            .max()
            .unwrap_or(0)
    }

    /// Shift every jet order by `d` (`u_k -> u_{k+d}`); the separant symbols
    /// are anchored to whatever base the surrounding context uses, so they
    /// pass through unchanged.
    pub fn shift_jet(&self, d: i32) -> Result<DiffPoly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (p, c) in &self.terms {
            let mut pairs = Vec::with_capacity(p.pairs().len());
            for (ind, e) in p.pairs() {
                let ind = match ind {
                    Indet::Jet(k) => {
                        let nk = *k as i64 + d as i64;
                        if nk < 0 {
                            return Err(Error::JetOrderUnderflow {
                                order: *k,
                                shift: d,
                            });
                        }
                        Indet::Jet(nk as u32)
                    }
                    other => other.clone(),
                };
                pairs.push((ind, *e));
            }
            terms.push((PowerProduct::from_pairs(pairs)?, c.clone()));
        }
        Ok(DiffPoly::from_terms(terms))
    }

    /// Highest jet order appearing in any term.
    pub fn max_jet_order(&self) -> Option<u32> {
        self.terms.iter().filter_map(|(p, _)| p.max_jet()).max()
    }

    /// Set of indeterminates appearing in the polynomial.
    pub fn support(&self) -> BTreeSet<Indet> {
        self.terms
            .iter()
            .flat_map(|(p, _)| p.pairs().iter().map(|(i, _)| i.clone()))
            .collect()
    }

    /// All jet orders appearing.
    pub fn jet_support(&self) -> BTreeSet<u32> {
        self.terms
            .iter()
            .flat_map(|(p, _)| p.jet_powers().map(|(k, _)| k))
            .collect()
    }

    /// If every term has the same level above `b`, return it.
    pub fn homogeneous_level(&self, b: u32) -> Option<i64> {
        let mut it = self.terms.iter().map(|(p, _)| p.level_above(b));
        let first = it.next()?;
        it.all(|l| l == first).then_some(first)
    }

    /// Leading (greatest) term in the canonical order.
    pub fn leading_term(&self) -> Option<(&PowerProduct, &Rat)> {
        self.terms.first().map(|(p, c)| (p, c))
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        // merge two canonically sorted term lists
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            match self.terms[i].0.cmp_graded(&rhs.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(rhs.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &rhs.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&rhs.terms[j..]);
        DiffPoly { terms: out }
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        self + &(-rhs)
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (p.clone(), -c))
                .collect(),
        }
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        if self.is_zero() || rhs.is_zero() {
            return DiffPoly::zero();
        }
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (pa, ca) in &self.terms {
            for (pb, cb) in &rhs.terms {
                terms.push((pa.mul(pb), ca * cb));
            }
        }
        DiffPoly::from_terms(terms)
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for DiffPoly {
            type Output = DiffPoly;
            fn $method(self, rhs: DiffPoly) -> DiffPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&DiffPoly> for DiffPoly {
            type Output = DiffPoly;
            fn $method(self, rhs: &DiffPoly) -> DiffPoly {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_text(self, f)
    }
}

impl FromStr for DiffPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<DiffPoly> {
        parse(s)
    }
}

/// Exact n-th root of a rational, if one exists. `n` must be positive; for
/// even `n` the input must be nonnegative.
pub fn nth_root_exact(r: &Rat, n: u32) -> Option<Rat> {
    if n == 0 {
        return None;
    }
    if r.is_negative() && n % 2 == 0 {
        return None;
    }
    let root = |x: &BigInt| -> Option<BigInt> {
        let c = x.nth_root(n);
        (c.pow(n) == *x).then_some(c)
    };
    let numer = root(r.numer())?;
    let denom = root(r.denom())?;
    Some(Rat::new(numer, denom))
}

#[cfg(test)]
mod tests;
