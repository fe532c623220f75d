//! Exact linear algebra for undetermined constants: coefficient matching of
//! symbolic identities and Gaussian elimination over the rationals.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{DiffPoly, Indet, PowerProduct, Rat};

/// A linear system `A x = b` over the rationals, with named unknowns.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub unknowns: Vec<Arc<str>>,
    /// Each row is (coefficients aligned with `unknowns`, right-hand side).
    pub rows: Vec<(Vec<Rat>, Rat)>,
}

impl LinearSystem {
    pub fn new(unknowns: Vec<Arc<str>>) -> Self {
        LinearSystem {
            unknowns,
            rows: Vec::new(),
        }
    }

    pub fn num_equations(&self) -> usize {
        self.rows.len()
    }

    /// Merge another system over the same unknowns.
    pub fn extend(&mut self, other: LinearSystem) {
        assert_eq!(self.unknowns, other.unknowns, "unknown sets must agree");
        self.rows.extend(other.rows);
    }
}

/// Result of solving a linear system.
#[derive(Debug, Clone)]
pub enum Solution {
    /// Exactly one solution; values aligned with `unknowns`.
    Unique(Vec<Rat>),
    /// Affine solution space: a particular solution plus a nullspace basis
    /// (one vector per free unknown, aligned with `unknowns`).
    Parametric {
        particular: Vec<Rat>,
        nullspace: Vec<Vec<Rat>>,
        free: Vec<Arc<str>>,
    },
    Inconsistent,
}

impl Solution {
    pub fn unique(&self) -> Option<&[Rat]> {
        match self {
            Solution::Unique(v) => Some(v),
            _ => None,
        }
    }

    /// Dimension of the solution space (None when inconsistent).
    pub fn dimension(&self) -> Option<usize> {
        match self {
            Solution::Unique(_) => Some(0),
            Solution::Parametric { nullspace, .. } => Some(nullspace.len()),
            Solution::Inconsistent => None,
        }
    }
}

/// Turn a symbolic identity `e = 0`, affine in the given unknowns, into one
/// linear equation per distinct monomial in the remaining indeterminates.
pub fn match_to_system(identity: &DiffPoly, unknowns: &[Arc<str>]) -> Result<LinearSystem> {
    let index: BTreeMap<&str, usize> = unknowns
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_ref(), i))
        .collect();
    // key monomial -> (coefficient row, constant part)
    let mut rows: BTreeMap<PowerProduct, (Vec<Rat>, Rat)> = BTreeMap::new();
    for (pow, coeff) in identity.terms() {
        let mut unknown: Option<usize> = None;
        let mut key_pairs: Vec<(Indet, i32)> = Vec::with_capacity(pow.pairs().len());
        for (ind, e) in pow.pairs() {
            let slot = match ind {
                Indet::Sym(s) => index.get(s.as_ref()).copied(),
                _ => None,
            };
            match slot {
                Some(i) => {
                    if *e != 1 || unknown.is_some() {
                        return Err(Error::NonlinearInUnknowns {
                            unknown: ind.name(),
                        });
                    }
                    unknown = Some(i);
                }
                None => key_pairs.push((ind.clone(), *e)),
            }
        }
        let key = PowerProduct::from_pairs(key_pairs)?;
        let entry = rows
            .entry(key)
            .or_insert_with(|| (vec![Rat::zero(); unknowns.len()], Rat::zero()));
        match unknown {
            Some(i) => entry.0[i] += coeff,
            None => entry.1 += coeff,
        }
    }
    Ok(LinearSystem {
        unknowns: unknowns.to_vec(),
        // rows are `sum_i c_i x_i + k = 0`, i.e. rhs = -k
        rows: rows
            .into_values()
            .map(|(coeffs, k)| (coeffs, -k))
            .collect(),
    })
}

/// Exact Gaussian elimination. Deterministic: columns are eliminated in
/// unknown order, picking the first row with a nonzero entry as pivot.
pub fn solve(sys: &LinearSystem) -> Solution {
    let n = sys.unknowns.len();
    let mut rows: Vec<(Vec<Rat>, Rat)> = sys.rows.clone();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut next_row = 0usize;

    for col in 0..n {
        let pivot = (next_row..rows.len()).find(|&r| !rows[r].0[col].is_zero());
        let Some(pr) = pivot else { continue };
        rows.swap(next_row, pr);
        // normalize pivot row
        let inv = {
            let p = &rows[next_row].0[col];
            Rat::one() / p.clone()
        };
        for x in rows[next_row].0.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        rows[next_row].1 *= &inv;
        // eliminate everywhere else
        for r in 0..rows.len() {
            if r == next_row || rows[r].0[col].is_zero() {
                continue;
            }
            let factor = rows[r].0[col].clone();
            let (pivot_coeffs, pivot_rhs) = {
                let row = &rows[next_row];
                (row.0.clone(), row.1.clone())
            };
            for (x, p) in rows[r].0.iter_mut().zip(&pivot_coeffs) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
            let delta = &factor * &pivot_rhs;
            rows[r].1 -= delta;
        }
        pivot_of_col[col] = Some(next_row);
        next_row += 1;
    }

    // Inconsistency: a zero row with nonzero rhs.
    for (coeffs, rhs) in rows.iter().skip(next_row) {
        debug_assert!(coeffs.iter().all(|c| c.is_zero()));
        if !rhs.is_zero() {
            return Solution::Inconsistent;
        }
    }

    let free_cols: Vec<usize> = (0..n).filter(|c| pivot_of_col[*c].is_none()).collect();
    let mut particular = vec![Rat::zero(); n];
    for (col, pivot) in pivot_of_col.iter().enumerate() {
        if let Some(r) = pivot {
            particular[col] = rows[*r].1.clone();
        }
    }
    if free_cols.is_empty() {
        return Solution::Unique(particular);
    }
    let mut nullspace = Vec::with_capacity(free_cols.len());
    for &fc in &free_cols {
        let mut v = vec![Rat::zero(); n];
        v[fc] = Rat::one();
        for (col, pivot) in pivot_of_col.iter().enumerate() {
            if let Some(r) = pivot {
                v[col] = -rows[*r].0[fc].clone();
            }
        }
        nullspace.push(v);
    }
    Solution::Parametric {
        particular,
        nullspace,
        free: free_cols.iter().map(|c| sys.unknowns[*c].clone()).collect(),
    }
}

/// Substitute values for unknown symbols into an expression.
pub fn substitute(e: &DiffPoly, values: &BTreeMap<Arc<str>, Rat>) -> DiffPoly {
    DiffPoly::from_terms(e.terms().iter().map(|(pow, coeff)| {
        let mut c = coeff.clone();
        let mut pairs = Vec::with_capacity(pow.pairs().len());
        for (ind, exp) in pow.pairs() {
            let val = match ind {
                Indet::Sym(s) => values.get(s),
                _ => None,
            };
            match val {
                Some(v) => {
                    if *exp >= 0 {
                        for _ in 0..*exp {
                            c *= v;
                        }
                    } else {
                        for _ in 0..(-exp) {
                            c /= v;
                        }
                    }
                }
                None => pairs.push((ind.clone(), *exp)),
            }
        }
        (
            PowerProduct::from_pairs(pairs).expect("substitution keeps jets intact"),
            c,
        )
    }))
}

/// Solve `identity = 0` for the unknowns and substitute the solution back,
/// returning the satisfied assignment. Fails unless the solution is unique.
pub fn solve_identity(
    identity: &DiffPoly,
    unknowns: &[Arc<str>],
) -> Result<BTreeMap<Arc<str>, Rat>> {
    let sys = match_to_system(identity, unknowns)?;
    match solve(&sys) {
        Solution::Unique(values) => Ok(unknowns.iter().cloned().zip(values).collect()),
        Solution::Parametric { free, .. } => Err(Error::FitFailed {
            reason: format!("solution space is {}-dimensional (free: {:?})", free.len(), free),
        }),
        Solution::Inconsistent => Err(Error::FitFailed {
            reason: "inconsistent system".into(),
        }),
    }
}


// ---------------------------------------------------------------------------
// Recursion-operator re-derivation
// ---------------------------------------------------------------------------

use crate::hierarchy::catalog::Erratum;
use crate::hierarchy::{self, tables, RecursionOperator};
use crate::jetcalc::{self, Family, JetContext, PseudoDiffOperator};
use crate::ring::parse;

/// Result of fitting the recursion-operator ansatz against independently
/// derived flows.
#[derive(Debug, Clone)]
pub struct OperatorFit {
    pub operator: RecursionOperator,
    /// `(source order, proportionality constant)` for each matched identity.
    pub scales: Vec<(u32, Rat)>,
    /// Fitted multipliers of the canonical nonlocal flows (expected all 1).
    pub sigma_scales: Vec<Rat>,
    /// Confirmed differences against the printed reference tables.
    pub errata: Vec<Erratum>,
    /// Whether the square-root family needed `P`-widened coefficients.
    pub widened: bool,
}

/// Re-derive the recursion operator of a family/base pair from scratch.
///
/// The target flows are obtained independently of any printed table by
/// solving the commuting-flow condition over a level-homogeneous ansatz
/// ([`hierarchy::symmetry_flow`]); the operator ansatz is then matched
/// against `R(flow_m) = lan * flow_{m+step}` for two source orders, and the
/// overdetermined system must collapse to a unique solution.
pub fn derive_recursion_coefficients(family: Family, base: u32) -> Result<OperatorFit> {
    let ctx = JetContext::new(family, base)?;
    let step = family.step();
    let seed = hierarchy::seed_flow(family, base)?;

    // Independent targets via the symmetry route. Two matching orders do
    // not pin the sixth-order ansatz (null operators annihilate both test
    // flows), so the cubic family matches a third identity through the
    // order-17 flow.
    let (sources, targets, source_orders) = match family {
        Family::Kdv => {
            let f5 = hierarchy::symmetry_flow(&seed, 5, &ctx)?;
            let f7 = hierarchy::symmetry_flow(&seed, 7, &ctx)?;
            (
                vec![seed.rhs.clone(), f5.rhs.clone()],
                vec![f5.rhs, f7.rhs],
                vec![3u32, 5],
            )
        }
        Family::Skk => {
            let f7 = hierarchy::symmetry_flow(&seed, 7, &ctx)?;
            let f11 = hierarchy::symmetry_flow(&seed, 11, &ctx)?;
            let f13 = hierarchy::symmetry_flow(&seed, 13, &ctx)?;
            let f17 = hierarchy::symmetry_flow(&seed, 17, &ctx)?;
            (
                vec![seed.rhs.clone(), f7.rhs, f11.rhs.clone()],
                vec![f11.rhs, f13.rhs, f17.rhs],
                vec![5, 7, 11],
            )
        }
    };
    let symmetry_f11 = targets.first().cloned();

    // Nonlocal structure: canonical sigmas (validated transcriptions) with
    // one unknown scalar each, gammas computed as variational derivatives.
    let sigmas = tables::validated_sigma(family, base).expect("sigma table");
    let gammas = hierarchy::operator_gammas(&ctx)?;

    match fit(family, base, &ctx, step, &sources, &targets, &sigmas, &gammas, false) {
        Ok((op, scales, sigma_scales)) => Ok(finish(
            family, base, step, op, scales, sigma_scales, &source_orders, false,
            symmetry_f11.as_ref(),
        )),
        Err(_) if family == Family::Kdv => {
            let (op, scales, sigma_scales) = fit(
                family, base, &ctx, step, &sources, &targets, &sigmas, &gammas, true,
            )?;
            Ok(finish(
                family, base, step, op, scales, sigma_scales, &source_orders, true,
                symmetry_f11.as_ref(),
            ))
        }
        Err(e) => Err(e),
    }
}

fn finish(
    family: Family,
    base: u32,
    step: u32,
    op: PseudoDiffOperator,
    scales: Vec<Rat>,
    sigma_scales: Vec<Rat>,
    source_orders: &[u32],
    widened: bool,
    symmetry_f11: Option<&DiffPoly>,
) -> OperatorFit {
    let operator = RecursionOperator {
        family,
        base,
        step,
        op,
    };
    let errata = collect_errata(&operator, symmetry_f11);
    OperatorFit {
        operator,
        scales: source_orders.iter().copied().zip(scales).collect(),
        sigma_scales,
        errata,
        widened,
    }
}

#[allow(clippy::too_many_arguments)]
fn fit(
    family: Family,
    base: u32,
    ctx: &JetContext,
    step: u32,
    sources: &[DiffPoly],
    targets: &[DiffPoly],
    sigmas: &[DiffPoly],
    gammas: &[DiffPoly],
    widen: bool,
) -> Result<(PseudoDiffOperator, Vec<Rat>, Vec<Rat>)> {
    // Ansatz for the local part below the fixed leading coefficient a^step.
    let mut unknowns: Vec<Arc<str>> = Vec::new();
    let fresh = |unknowns: &mut Vec<Arc<str>>, tag: &str| -> Indet {
        let name: Arc<str> = Arc::from(format!("{tag}{}", unknowns.len()).as_str());
        unknowns.push(name.clone());
        Indet::Sym(name)
    };
    // local[i] = sum over partitions pi of (step - i):
    //   k * a^(step-|pi|) ab^|pi| M_pi   (+ optional P-widening)
    let mut local_ansatz: Vec<(u32, DiffPoly)> = Vec::new();
    for i in (0..step).rev() {
        let level = step - i;
        let mut coeff = DiffPoly::zero();
        for part in crate::grading::partitions(level)? {
            let mono = crate::grading::LevelMonomial::from_partition(base, &part);
            let f = mono.num_factors() as i32;
            let d_max = if widen { f / 2 } else { 0 };
            for d in 0..=d_max {
                let k = fresh(&mut unknowns, "k");
                let pow = mono.power_product().mul(
                    &PowerProduct::from_pairs([
                        (Indet::A, step as i32 - f + 6 * d),
                        (Indet::Ab, f - 2 * d),
                        (Indet::sym("P"), d),
                        (k, 1),
                    ])?,
                );
                coeff = &coeff + &DiffPoly::monomial(pow, Rat::one());
            }
        }
        local_ansatz.push((i, coeff));
    }
    let sigma_unknowns: Vec<Indet> = sigmas
        .iter()
        .map(|_| fresh(&mut unknowns, "s"))
        .collect();
    let lan_unknowns: Vec<Indet> = sources
        .iter()
        .map(|_| fresh(&mut unknowns, "lan"))
        .collect();

    let mut system: Option<LinearSystem> = None;
    for ((source, target), lan) in sources.iter().zip(targets).zip(&lan_unknowns) {
        // leading local term
        let leading = DiffPoly::monomial(
            PowerProduct::from_pairs([(Indet::A, step as i32)])?,
            Rat::one(),
        );
        let mut image = &leading * &jetcalc::total_derivative_n(source, step, ctx)?;
        for (i, coeff) in &local_ansatz {
            let di = jetcalc::total_derivative_n(source, *i, ctx)?;
            image = &image + &(coeff * &di);
        }
        for ((sigma, gamma), s) in sigmas.iter().zip(gammas).zip(&sigma_unknowns) {
            let primitive = jetcalc::antiderivative(&(gamma * source), ctx)?;
            let scaled = DiffPoly::var(s.clone());
            image = &image + &(&(&scaled * sigma) * &primitive);
        }
        let identity = &image - &(&DiffPoly::var(lan.clone()) * target);
        let sys = match_to_system(&identity, &unknowns)?;
        match &mut system {
            None => system = Some(sys),
            Some(acc) => acc.extend(sys),
        }
    }
    let system = system.expect("at least one matching order");
    let values = match solve(&system) {
        Solution::Unique(v) => v,
        Solution::Parametric { free, .. } => {
            return Err(Error::FitFailed {
                reason: format!(
                    "operator fit for {} base {base} left {} free unknowns",
                    family.name(),
                    free.len()
                ),
            })
        }
        Solution::Inconsistent => {
            return Err(Error::FitFailed {
                reason: format!(
                    "operator ansatz for {} base {base} admits no solution",
                    family.name()
                ),
            })
        }
    };
    let assignment: std::collections::BTreeMap<Arc<str>, Rat> =
        unknowns.iter().cloned().zip(values.iter().cloned()).collect();

    // Concrete local table.
    let mut local = std::collections::BTreeMap::new();
    local.insert(
        step,
        DiffPoly::monomial(
            PowerProduct::from_pairs([(Indet::A, step as i32)])?,
            Rat::one(),
        ),
    );
    for (i, coeff) in &local_ansatz {
        let c = substitute(coeff, &assignment);
        if !c.is_zero() {
            local.insert(*i, c);
        }
    }
    let value_of = |ind: &Indet| -> Rat {
        match ind {
            Indet::Sym(s) => assignment[s].clone(),
            _ => unreachable!(),
        }
    };
    let sigma_scales: Vec<Rat> = sigma_unknowns.iter().map(&value_of).collect();
    let scales: Vec<Rat> = lan_unknowns.iter().map(&value_of).collect();
    let nonlocal = sigmas
        .iter()
        .zip(gammas)
        .zip(&sigma_scales)
        .map(|((sigma, gamma), s)| (sigma.scale(s), gamma.clone()))
        .collect();
    Ok((
        PseudoDiffOperator {
            local,
            nonlocal,
        },
        scales,
        sigma_scales,
    ))
}

/// Compare a fitted operator against the printed reference tables, and
/// confirm the notation-level misprints (terms whose printed form is not
/// even well-formed) against the independently derived flows.
fn collect_errata(fitted: &RecursionOperator, symmetry_f11: Option<&DiffPoly>) -> Vec<Erratum> {
    let mut errata = Vec::new();
    let family = fitted.family;
    let base = fitted.base;
    let printed = tables::printed_local_table(family, base).expect("printed table");
    for entry in &printed {
        let printed_poly = parse(entry.text).expect("printed tables parse");
        let fitted_poly = fitted
            .op
            .local
            .get(&entry.order)
            .cloned()
            .unwrap_or_else(DiffPoly::zero);
        if printed_poly != fitted_poly {
            errata.push(Erratum {
                family: family.name().to_string(),
                base,
                item: format!("local coefficient of D^{}", entry.order),
                printed: entry.text.to_string(),
                validated: fitted_poly.to_string(),
                note: "re-derived by the operator fit".to_string(),
            });
        }
    }
    let printed_sigmas = tables::printed_sigma(family, base).expect("printed sigmas");
    for (i, (text, (sigma, _))) in printed_sigmas.iter().zip(&fitted.op.nonlocal).enumerate() {
        let printed_poly = parse(text).expect("printed sigmas parse");
        if printed_poly != *sigma {
            errata.push(Erratum {
                family: family.name().to_string(),
                base,
                item: format!("nonlocal multiplier sigma^({})", i + 1),
                printed: text.to_string(),
                validated: sigma.to_string(),
                note: "re-derived by the operator fit".to_string(),
            });
        }
    }
    // Misprints that are not even parseable as written; each validated
    // value is confirmed against the fit before being reported.
    if family == Family::Skk && base == 3 {
        if let Some(f11) = symmetry_f11 {
            let u4_pow = PowerProduct::from_pairs([
                (Indet::A, 4),
                (Indet::Ab, 7),
                (Indet::Jet(4), 8),
            ])
            .unwrap();
            let coeff = f11
                .terms()
                .iter()
                .find(|(p, _)| *p == u4_pow)
                .map(|(_, c)| c.clone());
            if let Some(c) = coeff {
                assert_eq!(c, crate::ring::ratio(283758475, 3), "confirmed reading");
                errata.push(Erratum {
                    family: family.name().to_string(),
                    base,
                    item: "order-11 flow, final term".to_string(),
                    printed: "283758475/3 a^4 a_3^7 u_48".to_string(),
                    validated: "283758475/3*a^4*ab^7*u4^8".to_string(),
                    note: "mangled power in the printed listing; the exponent                            follows from the level count and is confirmed by the                            independent symmetry derivation"
                        .to_string(),
                });
            }
        }
        let r3_u6 = fitted.op.local[&3].coefficient_of(&Indet::Jet(6), 1);
        if r3_u6 == parse("6*a^5*ab").expect("parses") {
            errata.push(Erratum {
                family: family.name().to_string(),
                base,
                item: "local coefficient of D^3, u6 term".to_string(),
                printed: "6* a^5 a_3 u_6".to_string(),
                validated: "6*a^5*ab*u6".to_string(),
                note: "stray asterisk in the printed table; the value 6 is                        confirmed by the operator fit"
                    .to_string(),
            });
        }
        errata.push(Erratum {
            family: family.name().to_string(),
            base,
            item: "nonlocal multiplier sigma^(2), parenthesization".to_string(),
            printed: "-()a^5 u_5  + 5  a^4 a_3  u_4^2)".to_string(),
            validated: fitted.op.nonlocal[1].0.to_string(),
            note: "malformed parentheses in the printed table".to_string(),
        });
    }
    errata
}
