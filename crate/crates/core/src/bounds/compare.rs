//! Every bound on one curve side by side, with the `N_r` bounds each implies.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{evaluate, BoundContext, BoundOptions, BoundRecord, Rat, SELECTORS};
use crate::catalog::CurveInstance;
use crate::census::CountTable;
use crate::error::Result;

/// `N_target <= value`, solved from one record by moving the other terms to
/// the right with their actual counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImpliedBound {
    pub target: u32,
    pub formula_id: String,
    pub value: i128,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareReport {
    pub label: String,
    pub records: Vec<BoundRecord>,
    pub implied: Vec<ImpliedBound>,
    /// Smallest implied value per target among verified, unviolated records.
    pub best: BTreeMap<u32, ImpliedBound>,
    pub counts: CountTable,
}

pub fn implied_bounds(rec: &BoundRecord, counts: &CountTable) -> Vec<ImpliedBound> {
    let mut targets: Vec<u32> = rec.terms.iter().map(|t| t.r).collect();
    targets.sort_unstable();
    targets.dedup();
    let mut out = Vec::new();
    for r in targets {
        let coef = rec.term_coef(r);
        if coef <= Rat::from_integer(0) {
            continue;
        }
        let others: Option<Rat> = rec
            .terms
            .iter()
            .filter(|t| t.r != r)
            .map(|t| counts.get(t.r).map(|n| t.coef * Rat::from_integer(n as i128)))
            .sum();
        let Some(others) = others else { continue };
        let value = ((rec.rhs - others) / coef).floor().to_integer();
        out.push(ImpliedBound { target: r, formula_id: rec.formula_id.clone(), value, verified: rec.hypotheses_verified });
    }
    out
}

/// Evaluates every formula for `(u, m)`; `extensions` adds `N_r` for the
/// baselines at further degrees.
pub fn compare_report(
    inst: &CurveInstance,
    morphism: &str,
    u: u32,
    m: u32,
    extensions: &[u32],
    opts: &BoundOptions,
) -> Result<CompareReport> {
    let mut ctx = BoundContext::new(inst, morphism, u, m, opts)?;
    ctx.add_counts(inst, extensions, opts.size_cap)?;
    let mut records = Vec::new();
    for id in SELECTORS {
        records.extend(evaluate(&ctx, id, &opts.engine)?);
    }
    let mut implied = Vec::new();
    let mut best: BTreeMap<u32, ImpliedBound> = BTreeMap::new();
    for rec in &records {
        for b in implied_bounds(rec, &ctx.counts) {
            if b.verified && !rec.violated() && best.get(&b.target).is_none_or(|cur| b.value < cur.value) {
                best.insert(b.target, b.clone());
            }
            implied.push(b);
        }
    }
    Ok(CompareReport { label: inst.label.clone(), records, implied, best, counts: ctx.counts })
}
