//! The differential structure on the ring: partial, total, and time
//! derivatives with the coefficient-field closure rules, Frechet derivative
//! and adjoint, variational derivative, exactness test, and integration by
//! parts.
//!
//! The coefficient field is generated by the separant root `a` and its
//! base-level derivative `ab`. Second derivatives of `a` never appear: each
//! family carries a closure rule rewriting `d(ab)/du_b` back into the field,
//!
//! * cubic-root family (`Skk`):   `d(ab)/du_b = 4 ab^2 / a`
//! * square-root family (`Kdv`):  `d(ab)/du_b = 2 ab^2 / a + (P/4) a^5`
//!
//! corresponding to `a = (lambda u_b + mu)^(-1/3)` and
//! `a = (alpha u_b^2 + beta u_b + gamma)^(-1/2)` with
//! `P = beta^2 - 4 alpha gamma`. The lower-order functions
//! `alpha ... mu` are frozen to constants (top-dependency convention).

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num::One;

use crate::error::{Error, Result};
use crate::ring::{rat, ratio, DiffPoly, Indet, PowerProduct, Rat};
use crate::solver;

/// The two families of separant roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `a = (alpha u_b^2 + beta u_b + gamma)^(-1/2)`; hierarchy at all odd
    /// orders, recursion step 2.
    Kdv,
    /// `a = (lambda u_b + mu)^(-1/3)`; hierarchy at odd orders not divisible
    /// by 3, recursion step 6.
    Skk,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Kdv => "kdv",
            Family::Skk => "skk",
        }
    }

    pub fn supported_bases(&self) -> &'static [u32] {
        match self {
            Family::Kdv => &[3],
            Family::Skk => &[3, 4, 5],
        }
    }

    /// Order step of the family's recursion operator.
    pub fn step(&self) -> u32 {
        match self {
            Family::Kdv => 2,
            Family::Skk => 6,
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        match s {
            "kdv" => Ok(Family::Kdv),
            "skk" => Ok(Family::Skk),
            other => Err(Error::InvalidExpression {
                reason: format!("unknown family '{other}' (expected kdv or skk)"),
            }),
        }
    }
}

pub const DEFAULT_MAX_ORDER: u32 = 40;

/// Differential-field configuration: family, base level, order cap, and the
/// constant symbols expected in expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetContext {
    family: Family,
    base: u32,
    max_order: u32,
    constants: BTreeSet<Arc<str>>,
}

impl JetContext {
    pub fn new(family: Family, base: u32) -> Result<Self> {
        if !family.supported_bases().contains(&base) {
            return Err(Error::UnsupportedCombination {
                family: family.name(),
                supported: match family {
                    Family::Kdv => "{3}",
                    Family::Skk => "{3, 4, 5}",
                },
                base,
            });
        }
        let mut constants = BTreeSet::new();
        if family == Family::Kdv {
            constants.insert(Arc::from("P"));
        }
        Ok(JetContext {
            family,
            base,
            max_order: DEFAULT_MAX_ORDER,
            constants,
        })
    }

    pub fn with_max_order(mut self, max_order: u32) -> Self {
        self.max_order = max_order;
        self
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn constants(&self) -> &BTreeSet<Arc<str>> {
        &self.constants
    }

    /// The closure rule: `d(ab)/du_b` expressed in the coefficient field.
    pub fn closure_rule(&self) -> DiffPoly {
        match self.family {
            Family::Skk => {
                // 4 ab^2 / a
                DiffPoly::monomial(
                    PowerProduct::from_pairs([(Indet::Ab, 2), (Indet::A, -1)]).unwrap(),
                    rat(4),
                )
            }
            Family::Kdv => {
                // 2 ab^2 / a + (P/4) a^5
                &DiffPoly::monomial(
                    PowerProduct::from_pairs([(Indet::Ab, 2), (Indet::A, -1)]).unwrap(),
                    rat(2),
                ) + &DiffPoly::monomial(
                    PowerProduct::from_pairs([(Indet::sym("P"), 1), (Indet::A, 5)]).unwrap(),
                    ratio(1, 4),
                )
            }
        }
    }

    /// Check that an expression stays in the catalog class: jets strictly
    /// above the base, within the order cap.
    pub fn validate_catalog(&self, e: &DiffPoly) -> Result<()> {
        for k in e.jet_support() {
            if k <= self.base {
                return Err(Error::InvalidExpression {
                    reason: format!(
                        "u{k} at or below the base level {}; base dependency must flow through a, ab",
                        self.base
                    ),
                });
            }
            if k > self.max_order {
                return Err(Error::MaxOrderExceeded {
                    order: k,
                    max: self.max_order,
                });
            }
        }
        Ok(())
    }
}

/// Formal partial derivative with respect to a single indeterminate,
/// treating all indeterminates as independent.
fn formal_partial(e: &DiffPoly, v: &Indet) -> DiffPoly {
    DiffPoly::from_terms(e.terms().iter().filter_map(|(pow, coeff)| {
        let exp = pow.exponent(v);
        if exp == 0 {
            return None;
        }
        Some((pow.mul_var(v, -1), coeff * rat(exp as i64)))
    }))
}

/// The chain-rule contribution of `d/du_b` through `a` and `ab`.
fn chain_partial(e: &DiffPoly, ctx: &JetContext) -> DiffPoly {
    let da = formal_partial(e, &Indet::A);
    let dab = formal_partial(e, &Indet::Ab);
    let mut out = da.mul_monomial(&PowerProduct::var(Indet::Ab), &Rat::one());
    if !dab.is_zero() {
        out = &out + &(&dab * &ctx.closure_rule());
    }
    out
}

/// Partial derivative in the differential field. For `v = u_b` this chains
/// through `a` and `ab` (in addition to any explicit `u_b` occurrences);
/// constants differentiate to zero.
pub fn partial_derivative(e: &DiffPoly, v: &Indet, ctx: &JetContext) -> DiffPoly {
    match v {
        Indet::Jet(k) if *k == ctx.base() => {
            &formal_partial(e, v) + &chain_partial(e, ctx)
        }
        Indet::Sym(_) => DiffPoly::zero(),
        other => formal_partial(e, other),
    }
}

/// Total derivative `D = sum_k u_{k+1} d/du_k`, including the chain through
/// `a` and `ab` at the base level.
pub fn total_derivative(e: &DiffPoly, ctx: &JetContext) -> Result<DiffPoly> {
    if let Some(m) = e.max_jet_order() {
        if m + 1 > ctx.max_order() {
            return Err(Error::MaxOrderExceeded {
                order: m + 1,
                max: ctx.max_order(),
            });
        }
    }
    let mut out = DiffPoly::zero();
    for k in e.jet_support() {
        let dk = formal_partial(e, &Indet::Jet(k));
        out = &out + &dk.mul_monomial(&PowerProduct::var(Indet::Jet(k + 1)), &Rat::one());
    }
    let chain = chain_partial(e, ctx);
    if !chain.is_zero() {
        out = &out
            + &chain.mul_monomial(&PowerProduct::var(Indet::Jet(ctx.base() + 1)), &Rat::one());
    }
    Ok(out)
}

/// `D^n e`.
pub fn total_derivative_n(e: &DiffPoly, n: u32, ctx: &JetContext) -> Result<DiffPoly> {
    let mut acc = e.clone();
    for _ in 0..n {
        acc = total_derivative(&acc, ctx)?;
    }
    Ok(acc)
}

/// Time derivative of `e` along the flow `u_t = F`:
/// `sum_i de/du_i D^i(F)`, with `d/du_b` chaining through `a`, `ab`.
pub fn time_derivative(e: &DiffPoly, flow: &DiffPoly, ctx: &JetContext) -> Result<DiffPoly> {
    let mut orders: BTreeSet<u32> = e.jet_support();
    let chain = chain_partial(e, ctx);
    if !chain.is_zero() {
        orders.insert(ctx.base());
    }
    let Some(&max_i) = orders.iter().next_back() else {
        return Ok(DiffPoly::zero());
    };
    let mut out = DiffPoly::zero();
    let mut df = flow.clone();
    let mut i = 0;
    loop {
        if orders.contains(&i) {
            let mut de = formal_partial(e, &Indet::Jet(i));
            if i == ctx.base() {
                de = &de + &chain;
            }
            out = &out + &(&de * &df);
        }
        if i == max_i {
            break;
        }
        df = total_derivative(&df, ctx)?;
        i += 1;
    }
    Ok(out)
}

/// A local differential operator plus nonlocal tails
/// `sum_i sigma_i D^{-1} gamma_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoDiffOperator {
    /// Map from derivative order `k` to the coefficient of `D^k`.
    pub local: BTreeMap<u32, DiffPoly>,
    /// Nonlocal pairs `(sigma, gamma)`.
    pub nonlocal: Vec<(DiffPoly, DiffPoly)>,
}

impl PseudoDiffOperator {
    pub fn local_only(local: BTreeMap<u32, DiffPoly>) -> Self {
        PseudoDiffOperator {
            local,
            nonlocal: Vec::new(),
        }
    }

    pub fn order(&self) -> u32 {
        self.local.keys().next_back().copied().unwrap_or(0)
    }

    pub fn apply(&self, e: &DiffPoly, ctx: &JetContext) -> Result<DiffPoly> {
        apply_operator(self, e, ctx)
    }
}

/// Frechet derivative (linearization) of `F`: the local operator with
/// coefficients `dF/du_i`, the base-level one chaining through `a`, `ab`.
pub fn frechet(flow: &DiffPoly, ctx: &JetContext) -> PseudoDiffOperator {
    let mut local = BTreeMap::new();
    let mut orders = flow.jet_support();
    orders.insert(ctx.base());
    for k in orders {
        let c = partial_derivative(flow, &Indet::Jet(k), ctx);
        if !c.is_zero() {
            local.insert(k, c);
        }
    }
    PseudoDiffOperator::local_only(local)
}

/// Right-hand side of the cosymmetry equation: `-F_*^dagger gamma`, i.e.
/// `sum_i (-1)^{i+1} D^i( dF/du_i * gamma )`.
pub fn adjoint_apply(flow: &DiffPoly, gamma: &DiffPoly, ctx: &JetContext) -> Result<DiffPoly> {
    let fr = frechet(flow, ctx);
    let mut out = DiffPoly::zero();
    for (k, c) in &fr.local {
        let term = total_derivative_n(&(c * gamma), *k, ctx)?;
        if k % 2 == 0 {
            out = &out - &term;
        } else {
            out = &out + &term;
        }
    }
    Ok(out)
}

/// Variational (Euler) derivative `sum_i (-1)^i D^i( d rho / du_i )`.
pub fn variational_derivative(rho: &DiffPoly, ctx: &JetContext) -> Result<DiffPoly> {
    let mut orders = rho.jet_support();
    orders.insert(ctx.base());
    let mut out = DiffPoly::zero();
    for k in orders {
        let dk = partial_derivative(rho, &Indet::Jet(k), ctx);
        if dk.is_zero() {
            continue;
        }
        let term = total_derivative_n(&dk, k, ctx)?;
        if k % 2 == 0 {
            out = &out + &term;
        } else {
            out = &out - &term;
        }
    }
    Ok(out)
}

/// True when the expression is annihilated by the variational derivative,
/// i.e. is a total derivative (up to the constants the grading cannot see).
pub fn is_exact(e: &DiffPoly, ctx: &JetContext) -> Result<bool> {
    Ok(variational_derivative(e, ctx)?.is_zero())
}

/// Antiderivative of the base-level coefficient: solve `dPhi/du_b = phi`
/// for `phi` free of jet variables.
///
/// For the cubic-root family the derivative maps each monomial
/// `a^p ab^q` to `(p + 4q) a^(p-1) ab^(q+1)`, so a term-by-term preimage
/// works whenever `p + 4q != 3`. The square-root family's rule has a second
/// branch producing `P a^(p+5) ab^(q-1)`, so the preimage is found by a
/// bounded span closure and an exact linear solve.
fn coefficient_primitive(phi: &DiffPoly, ctx: &JetContext) -> Result<DiffPoly> {
    if phi.is_zero() {
        return Ok(DiffPoly::zero());
    }
    if phi.max_jet_order().is_some() {
        return Err(Error::InvalidExpression {
            reason: "coefficient primitive applies to jet-free expressions only".into(),
        });
    }
    match ctx.family() {
        Family::Skk => {
            let mut terms = Vec::new();
            for (pow, coeff) in phi.terms() {
                let p = pow.exponent(&Indet::A);
                let q = pow.exponent(&Indet::Ab);
                let denom = p + 4 * q - 3;
                if denom == 0 {
                    return Err(Error::CoefficientPrimitive {
                        expr: phi.to_string(),
                    });
                }
                let npow = pow.mul_var(&Indet::A, 1).mul_var(&Indet::Ab, -1);
                terms.push((npow, coeff / rat(denom as i64)));
            }
            Ok(DiffPoly::from_terms(terms))
        }
        Family::Kdv => {
            // span closure over candidate monomials
            let db = |m: &PowerProduct| -> DiffPoly {
                chain_partial(&DiffPoly::monomial(m.clone(), Rat::one()), ctx)
            };
            let mut targets: BTreeSet<PowerProduct> =
                phi.terms().iter().map(|(p, _)| p.clone()).collect();
            let mut candidates: BTreeSet<PowerProduct> = BTreeSet::new();
            for _round in 0..16 {
                let mut new_candidates = Vec::new();
                for t in &targets {
                    // preimages under the two branches of the closure rule
                    let c1 = t.mul_var(&Indet::A, 1).mul_var(&Indet::Ab, -1);
                    let c2 = t
                        .mul_var(&Indet::A, -5)
                        .mul_var(&Indet::Ab, 1)
                        .mul_var(&Indet::sym("P"), -1);
                    for c in [c1, c2] {
                        if !candidates.contains(&c) && !db(&c).is_zero() {
                            new_candidates.push(c);
                        }
                    }
                }
                if new_candidates.is_empty() {
                    break;
                }
                let mut grew = false;
                for c in new_candidates {
                    // image monomials become cancellation targets
                    for (m, _) in db(&c).terms() {
                        if targets.insert(m.clone()) {
                            grew = true;
                        }
                    }
                    if candidates.insert(c) {
                        grew = true;
                    }
                }
                if !grew {
                    break;
                }
                if candidates.len() > 300 {
                    return Err(Error::CoefficientPrimitive {
                        expr: phi.to_string(),
                    });
                }
            }
            // solve  sum_i d_i * db(candidate_i) = phi  exactly
            let cands: Vec<PowerProduct> = candidates.into_iter().collect();
            if cands.is_empty() {
                return Err(Error::CoefficientPrimitive {
                    expr: phi.to_string(),
                });
            }
            let unknowns: Vec<Arc<str>> = (0..cands.len())
                .map(|i| Arc::from(format!("d{i}").as_str()))
                .collect();
            let mut identity = -phi;
            for (i, c) in cands.iter().enumerate() {
                let coeff = DiffPoly::var(Indet::Sym(unknowns[i].clone()));
                identity = &identity + &(&coeff * &db(c));
            }
            let sys = solver::match_to_system(&identity, &unknowns)?;
            let values = match solver::solve(&sys) {
                solver::Solution::Unique(v) => v,
                solver::Solution::Parametric { particular, .. } => particular,
                solver::Solution::Inconsistent => {
                    return Err(Error::CoefficientPrimitive {
                        expr: phi.to_string(),
                    })
                }
            };
            Ok(DiffPoly::from_terms(
                cands
                    .into_iter()
                    .zip(values)
                    .map(|(pow, v)| (pow, v)),
            ))
        }
    }
}

/// Integration by parts: return `h` with `D(h) = e` exactly, integration
/// constant zero.
///
/// Repeatedly peels the highest jet variable appearing linearly, using
/// `phi u_{s-1}^k u_s -> phi u_{s-1}^{k+1} / (k+1)` and, once only
/// `u_{b+1}` remains, a base-level coefficient primitive. Fails with
/// [`Error::NotExact`] when the input is not a total derivative and with
/// [`Error::NonIntegrableMonomial`] when a nonlinear top-derivative term
/// survives despite a vanishing variational derivative.
pub fn antiderivative(e: &DiffPoly, ctx: &JetContext) -> Result<DiffPoly> {
    ctx.validate_catalog(e)?;
    let b = ctx.base();
    let mut rem = e.clone();
    let mut acc = DiffPoly::zero();
    loop {
        if rem.is_zero() {
            return Ok(acc);
        }
        let Some(s) = rem.max_jet_order() else {
            // jet-free remainder of a would-be total derivative
            return fail(e, &rem, ctx);
        };
        let lin = rem.coefficient_of(&Indet::Jet(s), 1);
        if lin.is_zero() {
            return fail(e, &rem, ctx);
        }
        let part = if s >= b + 2 {
            // group by powers of u_{s-1}
            let prev = Indet::Jet(s - 1);
            let mut part = DiffPoly::zero();
            let top = lin.degree_in(&prev);
            for k in 0..=top {
                let phi = lin.coefficient_of(&prev, k);
                if phi.is_zero() {
                    continue;
                }
                let pow = PowerProduct::from_pairs([(prev.clone(), k + 1)])?;
                part = &part + &phi.mul_monomial(&pow, &ratio(1, (k + 1) as i64));
            }
            part
        } else {
            // s == b + 1: integrate the coefficient with respect to u_b
            coefficient_primitive(&lin, ctx)?
        };
        acc = &acc + &part;
        rem = &rem - &total_derivative(&part, ctx)?;
        // the peel must strictly reduce the top-linear part
        debug_assert!(rem.coefficient_of(&Indet::Jet(s), 1).is_zero());
    }
}

fn fail(e: &DiffPoly, rem: &DiffPoly, ctx: &JetContext) -> Result<DiffPoly> {
    if variational_derivative(e, ctx)?.is_zero() {
        Err(Error::NonIntegrableMonomial {
            term: rem
                .leading_term()
                .map(|(p, c)| DiffPoly::monomial(p.clone(), c.clone()).to_string())
                .unwrap_or_else(|| "0".into()),
        })
    } else {
        Err(Error::NotExact)
    }
}

/// Apply a pseudo-differential operator:
/// `sum_k c_k D^k(e) + sum_i sigma_i D^{-1}(gamma_i e)`.
pub fn apply_operator(
    op: &PseudoDiffOperator,
    e: &DiffPoly,
    ctx: &JetContext,
) -> Result<DiffPoly> {
    let mut out = DiffPoly::zero();
    let mut dk = e.clone();
    let mut k = 0u32;
    for (&ord, coeff) in &op.local {
        while k < ord {
            dk = total_derivative(&dk, ctx)?;
            k += 1;
        }
        out = &out + &(coeff * &dk);
    }
    for (sigma, gamma) in &op.nonlocal {
        let integrand = gamma * e;
        let primitive = antiderivative(&integrand, ctx)?;
        out = &out + &(sigma * &primitive);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
