//! Point-count bounds: the two-Frobenius bound and its corollaries, with
//! hypothesis checks, per-point corrections, and the classical baselines.

mod classic;
mod compare;
mod places;
mod selectors;

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::catalog::CurveInstance;
use crate::census::{count_points, CountTable};
use crate::error::{Error, Result};
use crate::local::SequenceData;
use crate::orders::{classicality_report, Check, ClassicalityReport, EngineOptions, Morphism};

pub use classic::{deg_t, ihara_bound, sv_bound, weil_bound};
pub use compare::{compare_report, implied_bounds, CompareReport, ImpliedBound};
pub use places::{place_census, place_data, rational_places, PlaceCensus, PlaceData, PlaceSource, RationalPlace};
pub use selectors::{evaluate, SELECTORS};

pub type Rat = Ratio<i128>;

/// How the per-class minima `c_r` are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CMode {
    /// The floors that hold at every point of the class.
    Analytic,
    /// Minima of `v_P(T_(u,m))` over the enumerated class.
    Exact,
}

#[derive(Clone, Debug)]
pub struct BoundOptions {
    /// `None` picks exact when every class is enumerable within `size_cap`.
    pub c_mode: Option<CMode>,
    /// Subtract `ΣB(P)` over the `F_Q`-places where a formula admits it.
    pub corrections: bool,
    pub engine: EngineOptions,
    /// Largest field order swept for counts and place enumeration.
    pub size_cap: u64,
    pub parallel: bool,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions { c_mode: None, corrections: true, engine: EngineOptions::default(), size_cap: 1 << 16, parallel: true }
    }
}

/// One term `coef · N_r` of a bound's left side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coef: Rat,
    pub r: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub formula_id: String,
    /// Left side `Σ coef · N_r`.
    pub terms: Vec<Term>,
    pub lhs: Option<Rat>,
    pub rhs: Rat,
    /// `ΣB(P)` already subtracted from `rhs`.
    pub corrections: i128,
    pub inputs: BTreeMap<String, String>,
    pub hypotheses_verified: bool,
    pub hypotheses: Vec<Check>,
    /// Consistency checks on the data that produced the record.
    pub checks: Vec<Check>,
    pub slack: Option<Rat>,
    pub notes: Vec<String>,
}

impl BoundRecord {
    /// A verified record whose inequality fails.
    pub fn violated(&self) -> bool {
        self.hypotheses_verified && (self.slack.is_some_and(|s| s < Rat::from_integer(0)) || self.checks.iter().any(|c| !c.holds))
    }

    pub fn term_coef(&self, r: u32) -> Rat {
        self.terms.iter().filter(|t| t.r == r).map(|t| t.coef).sum()
    }
}

/// `Err(ReportedViolation)` naming any verified record that fails.
pub fn check_records(records: &[BoundRecord]) -> Result<()> {
    let bad: Vec<String> = records
        .iter()
        .filter(|r| r.violated())
        .map(|r| {
            let failed: Vec<&str> = r.checks.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect();
            format!("{} (slack {:?}, failed {failed:?})", r.formula_id, r.slack)
        })
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::ReportedViolation(bad.join("; ")))
    }
}

/// Everything the selectors read: sequences, counts and enumerated places
/// for one morphism and Frobenius pair.
#[derive(Clone, Debug)]
pub struct BoundContext {
    pub label: String,
    pub morphism: Morphism,
    /// Order of the base field `F_Q`.
    pub q: u64,
    pub p: u64,
    pub g: u64,
    pub d: u64,
    pub n: usize,
    pub u: u32,
    pub m: u32,
    pub smooth: bool,
    pub report: ClassicalityReport,
    pub seq: SequenceData,
    pub counts: CountTable,
    pub census: Option<PlaceCensus>,
    pub c_mode: CMode,
    pub corrections: bool,
    pub notes: Vec<String>,
}

impl BoundContext {
    pub fn new(inst: &CurveInstance, morphism: &str, u: u32, m: u32, opts: &BoundOptions) -> Result<BoundContext> {
        let mor = inst.morphism(morphism)?;
        let report = classicality_report(&mor, u, m, &opts.engine)?;
        let q = inst.base_order;
        let seq = SequenceData::from_report(&report, q);
        let levels = class_levels(u, m);
        let fits = |r: u32| q.checked_pow(r).is_some_and(|s| s <= opts.size_cap);
        let mut counts = CountTable::default();
        for &r in &levels {
            if !fits(r) {
                return Err(Error::BadParams(format!("F_({q}^{r}) exceeds the census size cap {}", opts.size_cap)));
            }
            counts.counts.insert(r, count_points(&inst.curve, r, &inst.places)?);
        }
        let c_mode = opts.c_mode.unwrap_or(CMode::Exact);
        let census = place_census(inst, &mor, &seq, &levels, c_mode == CMode::Exact, opts.parallel)?;
        let mut notes = Vec::new();
        for &r in &levels {
            let enumerated = census.class(1).len() + if r == 1 { 0 } else { census.class(r).len() };
            if counts.get(r) != Some(enumerated as u64) {
                return Err(Error::ReportedViolation(format!(
                    "census of F_({q}^{r}) found {:?} places but enumeration found {enumerated}",
                    counts.get(r)
                )));
            }
        }
        if inst.genus_source != crate::catalog::GenusSource::SmoothPlane {
            notes.push(format!("genus {} is {:?} metadata", inst.genus, inst.genus_source));
        }
        Ok(BoundContext {
            label: inst.label.clone(),
            q,
            p: mor.characteristic(),
            g: inst.genus,
            d: mor.deg_d as u64,
            n: mor.n(),
            u,
            m,
            smooth: inst.smoothness.smooth,
            morphism: mor,
            report,
            seq,
            counts,
            census: Some(census),
            c_mode,
            corrections: opts.corrections,
            notes,
        })
    }

    /// `Q^e` as an exact integer.
    pub fn qpow(&self, e: u32) -> i128 {
        (self.q as i128).pow(e)
    }

    pub fn count(&self, r: u32) -> Option<u64> {
        self.counts.get(r)
    }

    /// Adds `N_r` for extra extension degrees.
    pub fn add_counts(&mut self, inst: &CurveInstance, rs: &[u32], size_cap: u64) -> Result<()> {
        for &r in rs {
            if self.counts.get(r).is_none() && self.q.checked_pow(r).is_some_and(|s| s <= size_cap) {
                self.counts.counts.insert(r, count_points(&inst.curve, r, &inst.places)?);
            }
        }
        Ok(())
    }

    pub(crate) fn inputs(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("curve".into(), self.label.clone());
        m.insert("morphism".into(), self.morphism.name.clone());
        m.insert("Q".into(), self.q.to_string());
        m.insert("g".into(), self.g.to_string());
        m.insert("d".into(), self.d.to_string());
        m.insert("n".into(), self.n.to_string());
        m.insert("u".into(), self.u.to_string());
        m.insert("m".into(), self.m.to_string());
        m.insert("epsilon".into(), self.seq.epsilon.to_string());
        m.insert("nu".into(), self.seq.nu.to_string());
        m.insert("mu".into(), self.seq.mu.to_string());
        m.insert("kappa".into(), self.seq.kappa.to_string());
        let counts: Vec<String> = self.counts.counts.iter().map(|(r, n)| format!("N_{r}={n}")).collect();
        m.insert("counts".into(), counts.join(" "));
        m.insert("c_mode".into(), format!("{:?}", self.c_mode).to_lowercase());
        m
    }
}

/// The distinct members of `{1, u, m, m - u}`, ascending.
pub fn class_levels(u: u32, m: u32) -> Vec<u32> {
    let mut v = vec![1, u, m, m - u];
    v.sort_unstable();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_family, FamilyParams};

    fn family(name: &str, p: FamilyParams) -> CurveInstance {
        make_family(name, &p).unwrap()
    }

    fn one(ctx: &BoundContext, id: &str) -> BoundRecord {
        let mut recs = evaluate(ctx, id, &EngineOptions::default()).unwrap();
        assert_eq!(recs.len(), 1);
        recs.remove(0)
    }

    fn ctx(inst: &CurveInstance, morphism: &str, u: u32, m: u32) -> BoundContext {
        BoundContext::new(inst, morphism, u, m, &BoundOptions::default()).unwrap()
    }

    #[test]
    fn fermat_degree_q_minus_1_is_sharp() {
        let inst = family("fermat", FamilyParams { d: Some(8), ..FamilyParams::q(9) });
        let c = ctx(&inst, "lines", 1, 2);
        for id in ["plane_sharp", "plane_q2", "main"] {
            let rec = one(&c, id);
            assert!(rec.hypotheses_verified, "{id}: {:?}", rec.hypotheses);
            assert!(rec.checks.iter().all(|c| c.holds), "{id}: {:?}", rec.checks);
            assert!(rec.slack.unwrap() >= Rat::from_integer(0), "{id}");
        }
        let sharp = one(&c, "plane_sharp");
        assert_eq!(sharp.lhs, Some(Rat::from_integer(728)));
        assert_eq!(sharp.rhs, Rat::from_integer(728));
        for pd in c.census.as_ref().unwrap().class(1) {
            assert_eq!(pd.v, Some(11));
        }
    }

    #[test]
    fn y_q3_quadratic_implies_119() {
        let inst = family("y_q3", FamilyParams::q(2));
        let rep = compare_report(&inst, "lines", 1, 2, &[], &BoundOptions::default()).unwrap();
        let quad = rep.records.iter().find(|r| r.formula_id == "quadratic").unwrap();
        assert!(quad.hypotheses_verified, "{:?}", quad.hypotheses);
        assert_eq!(quad.corrections, 84);
        let imp = rep.implied.iter().find(|b| b.formula_id == "quadratic" && b.target == 2).unwrap();
        assert_eq!(imp.value, 119);
        check_records(&rep.records).unwrap();
    }

    #[test]
    fn norm_trace_quadratic_implies_89() {
        let inst = family("norm_trace", FamilyParams::q(2));
        let rep = compare_report(&inst, "lines", 1, 2, &[], &BoundOptions::default()).unwrap();
        let imp = rep.implied.iter().find(|b| b.formula_id == "quadratic" && b.target == 2).unwrap();
        assert!(imp.verified);
        assert_eq!(imp.value, 89);
        check_records(&rep.records).unwrap();
    }

    #[test]
    fn hermitian_meets_its_bound() {
        let inst = family("hermitian", FamilyParams::q(2));
        let c = ctx(&inst, "lines", 1, 2);
        let rec = one(&c, "hermitian");
        assert!(rec.hypotheses_verified, "{:?}", rec.hypotheses);
        assert_eq!(rec.lhs, Some(Rat::from_integer(54)));
        assert_eq!(rec.rhs, Rat::from_integer(54));
    }

    #[test]
    fn filling_curves_meet_n1_bounds() {
        let hk = family("hk_filling", FamilyParams { a: Some(1), b: Some(1), c: Some(0), ..FamilyParams::q(2) });
        let c = ctx(&hk, "lines", 1, 2);
        assert_eq!(c.count(1), Some(7));
        let rec = one(&c, "n1_linear");
        assert!(rec.hypotheses_verified, "{:?}", rec.hypotheses);
        assert_eq!(rec.rhs.floor().to_integer(), 7);

        let ti = family("total_inflection", FamilyParams::q(3));
        let c = ctx(&ti, "lines", 1, 2);
        let rec = one(&c, "n1_total_inflection");
        assert!(rec.hypotheses_verified, "{:?}", rec.hypotheses);
        assert_eq!(c.count(1), Some(10));
        assert_eq!(rec.rhs.floor().to_integer(), 10);
    }

    #[test]
    fn baselines_and_modes() {
        let inst = family("hermitian", FamilyParams::q(2));
        let opts = BoundOptions { c_mode: Some(CMode::Analytic), ..BoundOptions::default() };
        let rep = compare_report(&inst, "lines", 1, 2, &[3], &opts).unwrap();
        let weil: Vec<&BoundRecord> = rep.records.iter().filter(|r| r.formula_id == "weil").collect();
        assert_eq!(weil.len(), 3);
        assert!(rep.records.iter().all(|r| !r.violated()));
        assert!(class_levels(2, 5) == vec![1, 2, 3, 5]);
        assert!(evaluate(&ctx(&inst, "lines", 1, 2), "nope", &EngineOptions::default()).is_err());
    }
}
