//! Flows, recursion operators, hierarchy generation, commutators, and
//! potentiation.
//!
//! Flows are normalized so the coefficient of the top derivative `u_m` is
//! `a^m` (the two non-quasilinear seeds keep their closed forms). The
//! square-root family steps by 2 under its recursion operator from the
//! third-order seed; the cubic-root family steps by 6 and therefore carries
//! two seed chains, of orders 5 and 7.

pub mod catalog;
pub mod tables;

use std::collections::BTreeMap;
use std::sync::Arc;

use num::One;

use crate::error::{Error, Result};
use crate::grading::partitions;
use crate::jetcalc::{
    apply_operator, frechet, total_derivative, Family, JetContext, PseudoDiffOperator,
};
use crate::ring::{DiffPoly, Indet, PowerProduct, Rat};
use crate::solver;
use crate::{densities, jetcalc};

/// How a catalog flow came to be.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// Shipped seed (the order-7 cubic-family flows are second seeds).
    Seed,
    /// Produced by the recursion operator from a lower-order flow; `scale`
    /// is the proportionality constant removed during normalization.
    Generated { from_order: u32, scale: Rat },
    /// Independently derived as a commuting flow of the given seed order.
    DerivedSymmetry { seed_order: u32 },
    /// Image of a higher-base flow under potentiation.
    Potentiated { from_base: u32 },
}

/// An evolution equation of the catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowRecord {
    pub family: Family,
    pub base: u32,
    pub order: u32,
    pub rhs: DiffPoly,
    pub provenance: Provenance,
}

impl FlowRecord {
    pub fn context(&self) -> JetContext {
        JetContext::new(self.family, self.base).expect("flow records carry valid bases")
    }
}

/// The published seed flow for a family/base pair.
pub fn seed_flow(family: Family, base: u32) -> Result<FlowRecord> {
    // validates the combination (bases 2 and below are out of scope)
    let _ = JetContext::new(family, base)?;
    let (text, order) = tables::seed_rhs(family, base).ok_or(Error::UnsupportedCombination {
        family: family.name(),
        supported: "{(kdv,3), (skk,3), (skk,4), (skk,5)}",
        base,
    })?;
    Ok(FlowRecord {
        family,
        base,
        order,
        rhs: crate::ring::parse(text).expect("seed table parses"),
        provenance: Provenance::Seed,
    })
}

/// The order-7 second seed of the cubic-root family (its recursion operator
/// steps by 6, so orders congruent to 1 mod 6 descend from this seed).
pub fn second_seed_flow(family: Family, base: u32) -> Result<Option<FlowRecord>> {
    let _ = JetContext::new(family, base)?;
    if family != Family::Skk {
        return Ok(None);
    }
    Ok(Some(FlowRecord {
        family,
        base,
        order: 7,
        rhs: tables::listed_flow(family, base, 7).expect("order-7 listing present"),
        provenance: Provenance::Seed,
    }))
}

/// A recursion operator: local part plus nonlocal tails, stepping the flow
/// order by `step`.
#[derive(Debug, Clone)]
pub struct RecursionOperator {
    pub family: Family,
    pub base: u32,
    pub step: u32,
    pub op: PseudoDiffOperator,
}

/// The shipped (solver-validated) recursion operator.
pub fn recursion_operator(family: Family, base: u32) -> Result<RecursionOperator> {
    let ctx = JetContext::new(family, base)?;
    let local_rows = tables::validated_local_table(family, base).expect("validated table");
    let local: BTreeMap<u32, DiffPoly> = tables::parse_table(&local_rows)?
        .into_iter()
        .collect();
    let sigmas = tables::validated_sigma(family, base).expect("validated sigma");
    let gammas = operator_gammas(&ctx)?;
    assert_eq!(sigmas.len(), gammas.len());
    Ok(RecursionOperator {
        family,
        base,
        step: family.step(),
        op: PseudoDiffOperator {
            local,
            nonlocal: sigmas.into_iter().zip(gammas).collect(),
        },
    })
}

/// The conserved covariants entering the nonlocal tails: variational
/// derivatives of `rho^(-1)` (and, for the cubic family, `rho^(1)`).
pub fn operator_gammas(ctx: &JetContext) -> Result<Vec<DiffPoly>> {
    let gamma1 = jetcalc::variational_derivative(&densities::rho_minus1(), ctx)?;
    match ctx.family() {
        Family::Kdv => Ok(vec![gamma1]),
        Family::Skk => {
            let gamma2 = jetcalc::variational_derivative(&densities::rho1(ctx), ctx)?;
            Ok(vec![gamma1, gamma2])
        }
    }
}

/// Apply the recursion operator to a flow and normalize the result to the
/// next catalog flow (top coefficient `a^{m+step}`).
pub fn apply_recursion(
    r: &RecursionOperator,
    flow: &FlowRecord,
    ctx: &JetContext,
) -> Result<FlowRecord> {
    if r.family != flow.family || r.base != flow.base {
        return Err(Error::InvalidExpression {
            reason: "operator and flow belong to different hierarchies".into(),
        });
    }
    let image = apply_operator(&r.op, &flow.rhs, ctx)?;
    let target = flow.order + r.step;
    let lead = image.coefficient_of(&Indet::Jet(target), 1);
    let Some((pow, coeff)) = lead.as_monomial() else {
        return Err(Error::NotProportional {
            reason: format!("leading coefficient '{lead}' is not a monomial"),
        });
    };
    let expected = PowerProduct::from_pairs([(Indet::A, target as i32)])?;
    if *pow != expected {
        return Err(Error::NotProportional {
            reason: format!("leading coefficient '{lead}' is not a multiple of a^{target}"),
        });
    }
    let scale = coeff.clone();
    let rhs = image.scale(&(Rat::one() / &scale));
    if rhs.homogeneous_level(r.base) != Some((target - r.base) as i64) {
        return Err(Error::NotProportional {
            reason: "operator image is not level homogeneous".into(),
        });
    }
    ctx.validate_catalog(&rhs)?;
    Ok(FlowRecord {
        family: r.family,
        base: r.base,
        order: target,
        rhs,
        provenance: Provenance::Generated {
            from_order: flow.order,
            scale,
        },
    })
}

/// Commutator of two flows: `F_*[G] - G_*[F]`. Zero exactly when the flows
/// commute (each is a symmetry of the other).
pub fn commutator_expr(f: &DiffPoly, g: &DiffPoly, ctx: &JetContext) -> Result<DiffPoly> {
    let fg = apply_operator(&frechet(f, ctx), g, ctx)?;
    let gf = apply_operator(&frechet(g, ctx), f, ctx)?;
    Ok(&fg - &gf)
}

pub fn commutator(f: &FlowRecord, g: &FlowRecord, ctx: &JetContext) -> Result<DiffPoly> {
    if f.family != g.family || f.base != g.base {
        return Err(Error::InvalidExpression {
            reason: "flows belong to different hierarchies".into(),
        });
    }
    commutator_expr(&f.rhs, &g.rhs, ctx)
}

/// Seed plus repeated recursion up to `max_order`; the cubic-root family
/// interleaves its two chains. Orders divisible by 3 never appear there.
pub fn generate_hierarchy(family: Family, base: u32, max_order: u32) -> Result<Vec<FlowRecord>> {
    let ctx = JetContext::new(family, base)?;
    let r = recursion_operator(family, base)?;
    let mut chains: Vec<FlowRecord> = vec![seed_flow(family, base)?];
    if let Some(second) = second_seed_flow(family, base)? {
        chains.push(second);
    }
    let mut flows: Vec<FlowRecord> = Vec::new();
    for seed in chains {
        if seed.order > max_order {
            continue;
        }
        let mut current = seed;
        loop {
            let next = if current.order + r.step <= max_order {
                Some(apply_recursion(&r, &current, &ctx)?)
            } else {
                None
            };
            flows.push(current);
            match next {
                Some(n) => current = n,
                None => break,
            }
        }
    }
    flows.sort_by_key(|f| f.order);
    Ok(flows)
}

/// Potentiation `v = u_1`: the image flow is `D(F)` relabeled one jet down,
/// lowering the base level by one.
pub fn potentiate(flow: &FlowRecord) -> Result<FlowRecord> {
    if flow.base < 4 {
        return Err(Error::UnsupportedCombination {
            family: flow.family.name(),
            supported: "base levels >= 4 (the image base must stay >= 3)",
            base: flow.base,
        });
    }
    let ctx = flow.context();
    let image = total_derivative(&flow.rhs, &ctx)?.shift_jet(-1)?;
    let new_ctx = JetContext::new(flow.family, flow.base - 1)?;
    new_ctx.validate_catalog(&image)?;
    Ok(FlowRecord {
        family: flow.family,
        base: flow.base - 1,
        order: flow.order,
        rhs: image,
        provenance: Provenance::Potentiated {
            from_base: flow.base,
        },
    })
}

/// Level-homogeneous flow ansatz of the given order with fresh unknown
/// coefficients. For the cubic-root family a monomial with `f` jet factors
/// carries `a^(m-f+1) ab^(f-1)`; the square-root family additionally admits
/// `P^d a^(6d)` shifts of that pattern.
pub fn flow_ansatz(
    family: Family,
    base: u32,
    order: u32,
    prefix: &str,
) -> Result<(DiffPoly, Vec<Arc<str>>)> {
    let level = order - base;
    let mut unknowns = Vec::new();
    let mut acc = DiffPoly::zero();
    for part in partitions(level)? {
        let mono = crate::grading::LevelMonomial::from_partition(base, &part);
        let f = mono.num_factors() as i32;
        let m = order as i32;
        let d_max = match family {
            Family::Skk => 0,
            Family::Kdv => (f - 1) / 2,
        };
        for d in 0..=d_max {
            let name: Arc<str> = Arc::from(format!("{prefix}{}", unknowns.len()).as_str());
            unknowns.push(name.clone());
            let pow = mono
                .power_product()
                .mul(&PowerProduct::from_pairs([
                    (Indet::A, m - f + 1 + 6 * d),
                    (Indet::Ab, f - 1 - 2 * d),
                    (Indet::sym("P"), d),
                    (Indet::Sym(name), 1),
                ])?);
            acc = &acc + &DiffPoly::monomial(pow, Rat::one());
        }
    }
    Ok((acc, unknowns))
}

/// Derive the flow of a given order directly as a commuting flow of the
/// seed, without the recursion operator: solve `[seed, X] = 0` over the
/// flow ansatz. The solution space must be one-dimensional; the result is
/// normalized so the top coefficient is `a^order`.
pub fn symmetry_flow(seed: &FlowRecord, order: u32, ctx: &JetContext) -> Result<FlowRecord> {
    let (ansatz, unknowns) = flow_ansatz(seed.family, seed.base, order, "c")?;
    let identity = commutator_expr(&seed.rhs, &ansatz, ctx)?;
    let sys = solver::match_to_system(&identity, &unknowns)?;
    let basis = match solver::solve(&sys) {
        solver::Solution::Unique(_) => Vec::new(),
        solver::Solution::Parametric { nullspace, .. } => nullspace,
        solver::Solution::Inconsistent => unreachable!("homogeneous system"),
    };
    if basis.len() != 1 {
        return Err(Error::SymmetrySpaceDimension {
            order,
            dim: basis.len(),
        });
    }
    // normalize: the unknown multiplying a^order u_order is the one attached
    // to the single-part partition
    let top_pow = PowerProduct::from_pairs([(Indet::A, order as i32), (Indet::Jet(order), 1)])?;
    let mut top_value = None;
    for (i, name) in unknowns.iter().enumerate() {
        let with_unknown = top_pow.mul(&PowerProduct::var(Indet::Sym(name.clone())));
        if ansatz
            .terms()
            .iter()
            .any(|(p, _)| *p == with_unknown)
        {
            top_value = Some(basis[0][i].clone());
            break;
        }
    }
    let top_value = top_value.ok_or_else(|| Error::FitFailed {
        reason: "ansatz lacks the top monomial".into(),
    })?;
    if top_value == Rat::from_integer(0.into()) {
        return Err(Error::FitFailed {
            reason: "commuting flow has zero top coefficient".into(),
        });
    }
    let assignment: BTreeMap<Arc<str>, Rat> = unknowns
        .iter()
        .cloned()
        .zip(basis[0].iter().map(|v| v / &top_value))
        .collect();
    let rhs = solver::substitute(&ansatz, &assignment);
    ctx.validate_catalog(&rhs)?;
    Ok(FlowRecord {
        family: seed.family,
        base: seed.base,
        order,
        rhs,
        provenance: Provenance::DerivedSymmetry {
            seed_order: seed.order,
        },
    })
}

#[cfg(test)]
mod tests;
