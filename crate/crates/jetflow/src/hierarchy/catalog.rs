//! Catalog and errata serialization: a line-oriented text format, the JSON
//! schema, and LaTeX emission, all byte-deterministic.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::jetcalc::Family;
use crate::ring::{latex, parse, DiffPoly, Indet, PowerProduct, Rat};

use super::{FlowRecord, Provenance};

/// Hex SHA-256 of the canonical text form of an expression.
pub fn checksum(e: &DiffPoly) -> String {
    let mut hasher = Sha256::new();
    hasher.update(e.to_string().as_bytes());
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        write!(out, "{byte:02x}").unwrap();
    }
    out
}

fn provenance_string(p: &Provenance) -> String {
    match p {
        Provenance::Seed => "seed".into(),
        Provenance::Generated { from_order, scale } => {
            format!("generated from={from_order} scale={scale}")
        }
        Provenance::DerivedSymmetry { seed_order } => {
            format!("symmetry seed-order={seed_order}")
        }
        Provenance::Potentiated { from_base } => format!("potentiated from-base={from_base}"),
    }
}

fn provenance_parse(s: &str) -> Result<Provenance> {
    let mut words = s.split_whitespace();
    let head = words.next().unwrap_or_default();
    let field = |w: Option<&str>, key: &str| -> Result<String> {
        let w = w.ok_or_else(|| Error::InvalidExpression {
            reason: format!("provenance '{s}' lacks {key}"),
        })?;
        w.strip_prefix(&format!("{key}="))
            .map(str::to_string)
            .ok_or_else(|| Error::InvalidExpression {
                reason: format!("provenance '{s}' lacks {key}"),
            })
    };
    match head {
        "seed" => Ok(Provenance::Seed),
        "generated" => {
            let from = field(words.next(), "from")?;
            let scale = field(words.next(), "scale")?;
            Ok(Provenance::Generated {
                from_order: from.parse().map_err(|_| Error::InvalidExpression {
                    reason: format!("bad order in '{s}'"),
                })?,
                scale: parse_rat(&scale)?,
            })
        }
        "symmetry" => {
            let so = field(words.next(), "seed-order")?;
            Ok(Provenance::DerivedSymmetry {
                seed_order: so.parse().map_err(|_| Error::InvalidExpression {
                    reason: format!("bad order in '{s}'"),
                })?,
            })
        }
        "potentiated" => {
            let fb = field(words.next(), "from-base")?;
            Ok(Provenance::Potentiated {
                from_base: fb.parse().map_err(|_| Error::InvalidExpression {
                    reason: format!("bad base in '{s}'"),
                })?,
            })
        }
        other => Err(Error::InvalidExpression {
            reason: format!("unknown provenance '{other}'"),
        }),
    }
}

fn parse_rat(s: &str) -> Result<Rat> {
    parse(s)?.as_constant().ok_or_else(|| Error::InvalidExpression {
        reason: format!("'{s}' is not a rational"),
    })
}

/// Text catalog: one block per flow.
pub fn write_text_catalog(flows: &[FlowRecord]) -> String {
    let mut out = String::new();
    for f in flows {
        out.push_str("[flow]\n");
        writeln!(out, "family = {}", f.family.name()).unwrap();
        writeln!(out, "base = {}", f.base).unwrap();
        writeln!(out, "order = {}", f.order).unwrap();
        writeln!(out, "provenance = {}", provenance_string(&f.provenance)).unwrap();
        writeln!(out, "checksum = {}", checksum(&f.rhs)).unwrap();
        writeln!(out, "rhs = {}", f.rhs).unwrap();
        out.push('\n');
    }
    out
}

/// Read a text catalog back; checksums are re-verified.
pub fn read_text_catalog(text: &str) -> Result<Vec<FlowRecord>> {
    let mut flows = Vec::new();
    let mut fields: BTreeMap<String, String> = BTreeMap::new();
    let mut flush = |fields: &mut BTreeMap<String, String>| -> Result<()> {
        if fields.is_empty() {
            return Ok(());
        }
        let get = |k: &str| -> Result<String> {
            fields.get(k).cloned().ok_or_else(|| Error::InvalidExpression {
                reason: format!("catalog block lacks '{k}'"),
            })
        };
        let family: Family = get("family")?.parse()?;
        let rhs = parse(&get("rhs")?)?;
        let sum = get("checksum")?;
        if checksum(&rhs) != sum {
            return Err(Error::InvalidExpression {
                reason: "catalog checksum mismatch".into(),
            });
        }
        flows.push(FlowRecord {
            family,
            base: get("base")?.parse().map_err(|_| Error::InvalidExpression {
                reason: "bad base".into(),
            })?,
            order: get("order")?.parse().map_err(|_| Error::InvalidExpression {
                reason: "bad order".into(),
            })?,
            rhs,
            provenance: provenance_parse(&get("provenance")?)?,
        });
        fields.clear();
        Ok(())
    };
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line == "[flow]" {
            flush(&mut fields)?;
            continue;
        }
        if let Some((k, v)) = line.split_once('=') {
            fields.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    flush(&mut fields)?;
    Ok(flows)
}

/// JSON schema for a flow term.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coeff: String,
    pub exps: BTreeMap<String, i32>,
}

/// JSON schema for a catalog flow.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonFlow {
    pub family: String,
    pub base: u32,
    pub order: u32,
    pub rhs: Vec<JsonTerm>,
    pub provenance: String,
    pub checksum: String,
}

pub fn to_json_flow(f: &FlowRecord) -> JsonFlow {
    JsonFlow {
        family: f.family.name().to_string(),
        base: f.base,
        order: f.order,
        rhs: f
            .rhs
            .terms()
            .iter()
            .map(|(pow, coeff)| JsonTerm {
                coeff: coeff.to_string(),
                exps: pow
                    .pairs()
                    .iter()
                    .map(|(ind, e)| (ind.name(), *e))
                    .collect(),
            })
            .collect(),
        provenance: provenance_string(&f.provenance),
        checksum: checksum(&f.rhs),
    }
}

pub fn from_json_flow(j: &JsonFlow) -> Result<FlowRecord> {
    let family: Family = j.family.parse()?;
    let mut terms = Vec::new();
    for t in &j.rhs {
        let coeff = parse_rat(&t.coeff)?;
        let mut pairs = Vec::new();
        for (name, e) in &t.exps {
            let ind = name_to_indet(name)?;
            pairs.push((ind, *e));
        }
        terms.push((PowerProduct::from_pairs(pairs)?, coeff));
    }
    let rhs = DiffPoly::from_terms(terms);
    if checksum(&rhs) != j.checksum {
        return Err(Error::InvalidExpression {
            reason: "catalog checksum mismatch".into(),
        });
    }
    Ok(FlowRecord {
        family,
        base: j.base,
        order: j.order,
        rhs,
        provenance: provenance_parse(&j.provenance)?,
    })
}

fn name_to_indet(name: &str) -> Result<Indet> {
    let e = parse(name)?;
    match e.as_monomial() {
        Some((pow, c)) if num::One::is_one(c) => match pow.pairs() {
            [(ind, 1)] => Ok(ind.clone()),
            _ => Err(Error::InvalidExpression {
                reason: format!("'{name}' is not an indeterminate"),
            }),
        },
        _ => Err(Error::InvalidExpression {
            reason: format!("'{name}' is not an indeterminate"),
        }),
    }
}

pub fn write_json_catalog(flows: &[FlowRecord]) -> String {
    let json: Vec<JsonFlow> = flows.iter().map(to_json_flow).collect();
    serde_json::to_string_pretty(&json).expect("catalog serializes")
}

pub fn read_json_catalog(text: &str) -> Result<Vec<FlowRecord>> {
    let json: Vec<JsonFlow> =
        serde_json::from_str(text).map_err(|e| Error::InvalidExpression {
            reason: format!("bad catalog json: {e}"),
        })?;
    json.iter().map(from_json_flow).collect()
}

/// LaTeX catalog: one display line per flow.
pub fn write_latex_catalog(flows: &[FlowRecord]) -> String {
    let mut out = String::new();
    for f in flows {
        writeln!(
            out,
            "u_{{t,{}}} &= {} \\\\",
            f.order,
            latex(&f.rhs, f.base)
        )
        .unwrap();
    }
    out
}

/// A confirmed difference between the printed reference tables and the
/// solver re-derivation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Erratum {
    pub family: String,
    pub base: u32,
    /// What the entry describes, e.g. "local coefficient of D^1".
    pub item: String,
    /// The printed reading.
    pub printed: String,
    /// The validated value.
    pub validated: String,
    pub note: String,
}

pub fn write_errata(errata: &[Erratum]) -> String {
    serde_json::to_string_pretty(errata).expect("errata serialize")
}
