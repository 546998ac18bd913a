//! Named verification cases: each rebuilds a worked example from the catalog
//! and checks its published numbers exactly.

use serde::{Deserialize, Serialize};

use crate::bounds::{
    compare_report, evaluate, ihara_bound, weil_bound, BoundContext, BoundOptions, BoundRecord, CompareReport, Rat,
};
use crate::catalog::{make_family, verify_f_mu, CurveInstance, FamilyParams};
use crate::census::count_points;
use crate::error::{Error, Result};
use crate::orders::{Check, EngineOptions};

/// `(name, slow, what it reproduces)`.
pub const CASES: &[(&str, bool, &str)] = &[
    ("fermat_sharp", false, "Fermat d = 8 over F_9: sharp two-line bound 728 = 728"),
    ("y_q3", false, "Y_(2,3) over F_8: quadratic bound implies N_2 <= 119"),
    ("norm_trace", false, "norm-trace q = 2: quadratic bound implies N_2 <= 89"),
    ("hermitian", false, "Hermitian q = 2: counts and equality for m = 2, 3"),
    ("f_mu", false, "F_(3,1) over F_2: construction and nonclassicality"),
    ("filling", false, "N_1 bounds attained by filling curves"),
    ("fermat_conics", true, "x^((q+1)/2) + y^((q+1)/2) + 1 over F_49 with conics: equality"),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseResult {
    pub case: String,
    pub slow: bool,
    pub checks: Vec<Check>,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(name: &str, got: T, want: T) -> Check {
    let holds = got == want;
    Check::new(name, holds, format!("got {got:?}, want {want:?}"))
}

fn eq_rat(name: &str, got: Option<Rat>, want: i128) -> Check {
    let text = got.map_or("-".into(), |g| g.to_string());
    Check::new(name, got == Some(int(want)), format!("got {text}, want {want}"))
}

fn family(name: &str, p: FamilyParams) -> Result<CurveInstance> {
    make_family(name, &p)
}

fn one(ctx: &BoundContext, id: &str) -> Result<BoundRecord> {
    evaluate(ctx, id, &EngineOptions::default())?
        .pop()
        .ok_or_else(|| Error::ReportedViolation(format!("no {id} record")))
}

fn record_checks(rec: &BoundRecord, out: &mut Vec<Check>) {
    let tag = |s: &str| format!("{}_{s}", rec.formula_id);
    out.push(Check::new(
        &tag("hypotheses"),
        rec.hypotheses_verified,
        rec.hypotheses.iter().filter(|c| !c.holds).map(|c| c.name.clone()).collect::<Vec<_>>().join(", "),
    ));
    out.push(Check::new(
        &tag("consistency"),
        rec.checks.iter().all(|c| c.holds),
        rec.checks.iter().filter(|c| !c.holds).map(|c| c.detail.clone()).collect::<Vec<_>>().join("; "),
    ));
}

fn implied(rep: &CompareReport, id: &str, r: u32) -> Option<i128> {
    rep.implied.iter().find(|b| b.formula_id == id && b.target == r && b.verified).map(|b| b.value)
}

fn int(v: i128) -> Rat {
    Rat::from_integer(v)
}

fn fermat_sharp(opts: &BoundOptions) -> Result<Vec<Check>> {
    let inst = family("fermat", FamilyParams { d: Some(8), ..FamilyParams::q(9) })?;
    let ctx = BoundContext::new(&inst, "lines", 1, 2, opts)?;
    let mut out = vec![eq("N_1", ctx.count(1), Some(64)), eq("N_2", ctx.count(2), Some(88))];
    let rec = one(&ctx, "plane_sharp")?;
    record_checks(&rec, &mut out);
    out.push(eq_rat("lhs", rec.lhs, 728));
    out.push(eq_rat("rhs", Some(rec.rhs), 728));
    out.push(eq("corrections", rec.corrections, 0));
    Ok(out)
}

fn y_q3(opts: &BoundOptions) -> Result<Vec<Check>> {
    let inst = family("y_q3", FamilyParams::q(2))?;
    let rep = compare_report(&inst, "lines", 1, 2, &[], opts)?;
    let ctx = BoundContext::new(&inst, "lines", 1, 2, opts)?;
    let mut out = vec![eq("N_1", ctx.count(1), Some(21)), eq("epsilon_2", ctx.seq.epsilon.get(2), 2)];
    let rec = one(&ctx, "quadratic")?;
    record_checks(&rec, &mut out);
    let w1 = rec.terms.iter().map(|t| t.coef).sum::<Rat>();
    let bs: Vec<Rat> = ctx.census.as_ref().map_or(vec![], |c| {
        c.class(1).iter().filter_map(|pd| pd.v).map(|v| int(v as i128) - w1).collect()
    });
    out.push(eq("inflections", bs.len(), 21));
    let shown: Vec<String> = bs.iter().map(|b| b.to_string()).collect();
    out.push(Check::new("b_at_least_4", bs.iter().all(|&b| b >= int(4)), format!("B = [{}]", shown.join(", "))));
    let bound = implied(&rep, "quadratic", 2);
    out.push(eq("implied_N_2", bound, Some(119)));
    out.push(eq("census_N_2", ctx.count(2), Some(119)));
    let g = inst.genus;
    let (weil, ihara) = (weil_bound(g, 64, 1) as i128, ihara_bound(g, 64) as i128);
    out.push(eq("weil_N_2", weil, 305));
    out.push(Check::new("below_ihara", bound.is_some_and(|b| b < ihara), format!("{bound:?} < Ihara = {ihara}")));
    out.push(Check::new("ihara_below_weil", ihara < weil, format!("Ihara = {ihara} < Weil = {weil}")));
    Ok(out)
}

fn norm_trace(opts: &BoundOptions) -> Result<Vec<Check>> {
    let inst = family("norm_trace", FamilyParams::q(2))?;
    let rep = compare_report(&inst, "lines", 1, 2, &[], opts)?;
    let mut out = vec![
        eq("N_1", rep.counts.get(1), Some(33)),
        eq("implied_N_2", implied(&rep, "quadratic", 2), Some(89)),
        eq("census_N_2", rep.counts.get(2), Some(89)),
    ];
    let rec = rep.records.iter().find(|r| r.formula_id == "quadratic").unwrap();
    record_checks(rec, &mut out);
    Ok(out)
}

fn hermitian(opts: &BoundOptions) -> Result<Vec<Check>> {
    let q = 2i64;
    let inst = family("hermitian", FamilyParams::q(q as u64))?;
    let mut out = Vec::new();
    for m in 1..=3u32 {
        let want = q.pow(2 * m) + 1 + (-1i64).pow(m - 1) * q.pow(m + 1) * (q - 1);
        out.push(eq(&format!("N_{m}"), count_points(&inst.curve, m, &inst.places)? as i64, want));
    }
    for (m, value) in [(2u32, 54), (3, 198)] {
        let ctx = BoundContext::new(&inst, "lines", 1, m, opts)?;
        let rec = one(&ctx, "hermitian")?;
        record_checks(&rec, &mut out);
        out.push(eq_rat(&format!("lhs_m{m}"), rec.lhs, value));
        out.push(eq_rat(&format!("rhs_m{m}"), Some(rec.rhs), value));
    }
    Ok(out)
}

fn f_mu() -> Result<Vec<Check>> {
    let inst = family("f_mu", FamilyParams { u: Some(1), m: Some(3), ..FamilyParams::q(2) })?;
    let mut out = vec![eq("degree", inst.degree(), 4)];
    let rep = verify_f_mu(&inst)?;
    let kappa0 = inst.base_order.pow(inst.u);
    out.extend(rep.checks);
    out.push(Check::new("p_divides_kappa_0", kappa0 % 2 == 0, format!("κ_0 = {kappa0}, p = 2")));
    Ok(out)
}

fn filling(opts: &BoundOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let hk = family("hk_filling", FamilyParams { a: Some(1), b: Some(1), c: Some(0), ..FamilyParams::q(2) })?;
    let ctx = BoundContext::new(&hk, "lines", 1, 2, opts)?;
    let rec = one(&ctx, "n1_linear")?;
    record_checks(&rec, &mut out);
    out.push(eq("hk_d", ctx.d, 4));
    out.push(eq("hk_N_1", ctx.count(1), Some(7)));
    out.push(eq("hk_bound", rec.rhs.floor().to_integer(), 7));
    let ti = family("total_inflection", FamilyParams::q(3))?;
    let ctx = BoundContext::new(&ti, "lines", 1, 2, opts)?;
    let rec = one(&ctx, "n1_total_inflection")?;
    record_checks(&rec, &mut out);
    out.push(eq("ti_N_1", ctx.count(1), Some(10)));
    out.push(eq("ti_bound", rec.rhs.floor().to_integer(), 10));
    Ok(out)
}

fn fermat_conics(opts: &BoundOptions) -> Result<Vec<Check>> {
    let q = 7u32;
    let inst = family("fermat_half", FamilyParams::q(q as u64))?;
    let ctx = BoundContext::new(&inst, "conics", 1, 2, opts)?;
    let mut out = vec![eq("epsilon", ctx.seq.epsilon.values.clone(), vec![0, 1, 2, 3, 4, q])];
    let infl = vec![0, 1, 2, q.div_ceil(2), (q + 3) / 2, q + 1];
    let rec = one(&ctx, "fermat_conics")?;
    record_checks(&rec, &mut out);
    let w1 = rec.terms.iter().map(|t| t.coef).sum::<Rat>();
    let f_q = ctx.census.as_ref().map_or(&[][..], |c| c.class(1));
    let n = ctx.n;
    let flexes: Vec<_> = f_q.iter().filter(|pd| pd.j()[..n] != ctx.seq.epsilon.values[..n]).collect();
    out.push(eq("inflections", flexes.len() as u32, 3 * (q + 1) / 2));
    out.push(Check::new(
        "inflection_orders",
        flexes.iter().all(|pd| pd.j() == infl.as_slice()),
        format!("want {infl:?}"),
    ));
    let bmin = int(q as i128 - 5);
    out.push(Check::new(
        "b_at_inflections",
        flexes.iter().all(|pd| pd.v.is_some_and(|v| int(v as i128) - w1 >= bmin)),
        format!("B >= {bmin}"),
    ));
    out.push(Check::new(
        "equality",
        rec.lhs == Some(rec.rhs),
        format!(
            "lhs = {}, rhs = {}, N_1 = {:?}, N_2 = {:?}",
            rec.lhs.map_or("-".into(), |l| l.to_string()),
            rec.rhs,
            ctx.count(1),
            ctx.count(2)
        ),
    ));
    Ok(out)
}

/// Runs one named case. Errors from the library surface unchanged.
pub fn run_case(name: &str, opts: &BoundOptions) -> Result<CaseResult> {
    let Some(&(_, slow, _)) = CASES.iter().find(|c| c.0 == name) else {
        let known: Vec<&str> = CASES.iter().map(|c| c.0).collect();
        return Err(Error::BadParams(format!("unknown case {name}; known: {}", known.join(", "))));
    };
    let checks = match name {
        "fermat_sharp" => fermat_sharp(opts)?,
        "y_q3" => y_q3(opts)?,
        "norm_trace" => norm_trace(opts)?,
        "hermitian" => hermitian(opts)?,
        "f_mu" => f_mu()?,
        "filling" => filling(opts)?,
        _ => fermat_conics(opts)?,
    };
    Ok(CaseResult { case: name.to_string(), slow, checks })
}
