//! Report documents and their table, CSV and JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use curvebounds::bounds::{BoundRecord, CompareReport};
use curvebounds::census::CountTable;
use curvebounds::orders::{ClassicalityReport, OrderResult};
use curvebounds::suite::CaseResult;
use serde::{Deserialize, Serialize};

/// Version tag of the JSON document.
pub const REPORT_SCHEMA: &str = "curvebounds.report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Everything that determines a run's output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec_file: Option<String>,
    pub params: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub morphism: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    pub ext: Vec<u32>,
    pub seed: u64,
    pub samples: usize,
    pub rank_mode: String,
    pub size_cap: u64,
    pub threads: usize,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusEntry {
    pub r: u32,
    pub nu: OrderResult,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdersReport {
    pub label: String,
    pub morphism: String,
    pub genus: u64,
    pub classicality: ClassicalityReport,
    pub frobenius: Vec<FrobeniusEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub label: String,
    pub base_order: u64,
    pub genus: u64,
    pub smooth: bool,
    pub counts: CountTable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub cases: Vec<CaseResult>,
    pub skipped_slow: Vec<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyEntry {
    pub name: String,
    pub params: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Report {
    Catalog { families: Vec<FamilyEntry>, cases: Vec<FamilyEntry> },
    Orders(OrdersReport),
    Count(CountReport),
    Bounds(CompareReport),
    Verify(VerifyReport),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub schema: String,
    pub config: RunConfig,
    pub report: Report,
}

impl Document {
    pub fn new(config: RunConfig, report: Report) -> Document {
        Document { schema: REPORT_SCHEMA.to_string(), config, report }
    }

    #[cfg(test)]
    pub fn parse(text: &str) -> Result<Document, String> {
        let doc: Document = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if doc.schema != REPORT_SCHEMA {
            return Err(format!("unknown schema {:?}", doc.schema));
        }
        Ok(doc)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Table => table(self),
            Format::Csv => csv_text(&self.report),
        }
    }
}

fn rat(r: &curvebounds::bounds::Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn lhs_text(rec: &BoundRecord) -> String {
    let terms: Vec<String> = rec.terms.iter().map(|t| format!("{}·N_{}", rat(&t.coef), t.r)).collect();
    if terms.is_empty() {
        "Σv_P".into()
    } else {
        terms.join(" + ")
    }
}

fn table(doc: &Document) -> String {
    let mut s = String::new();
    let c = &doc.config;
    let _ = writeln!(s, "# {} seed={} rank_mode={} samples={}", c.command, c.seed, c.rank_mode, c.samples);
    match &doc.report {
        Report::Catalog { families, cases } => {
            let _ = writeln!(s, "families:");
            for f in families {
                let _ = writeln!(s, "  {:<18} {}", f.name, f.params);
            }
            let _ = writeln!(s, "verification cases:");
            for f in cases {
                let _ = writeln!(s, "  {:<18} {}", f.name, f.params);
            }
        }
        Report::Orders(o) => {
            let r = &o.classicality;
            let _ = writeln!(s, "{} via {} (n = {}, d = {}, g = {}, p = {})", o.label, o.morphism, r.n, r.deg_d, o.genus, r.p);
            let _ = writeln!(s, "epsilon           {}  classical={}", r.epsilon.seq, r.classical_epsilon);
            for f in &o.frobenius {
                let _ = writeln!(s, "nu (r = {:<2})       {}  classical={}", f.r, f.nu.seq, f.nu.seq.is_classical());
            }
            let _ = writeln!(s, "kappa (u={}, m={})  {}  classical={}", r.u, r.m, r.kappa.seq, r.classical_kappa);
            let _ = writeln!(s, "dropped from nu_u: {:?}, from nu_m: {:?}", r.dropped_from_nu, r.dropped_from_mu);
            for chk in &r.checks {
                let _ = writeln!(s, "  [{}] {}: {}", if chk.holds { "ok" } else { "FAIL" }, chk.name, chk.detail);
            }
        }
        Report::Count(cr) => {
            let _ = writeln!(s, "{} over F_{} (g = {}, smooth = {})", cr.label, cr.base_order, cr.genus, cr.smooth);
            for (r, n) in &cr.counts.counts {
                let _ = writeln!(s, "N_{r} = {n}");
            }
        }
        Report::Bounds(b) => {
            let counts: Vec<String> = b.counts.counts.iter().map(|(r, n)| format!("N_{r} = {n}")).collect();
            let _ = writeln!(s, "{}: {}", b.label, counts.join(", "));
            let _ = writeln!(s, "{:<20} {:>4} {:>12} {:>12} {:>10} {:>6}  lhs", "formula", "hyp", "lhs", "rhs", "slack", "ΣB");
            for rec in &b.records {
                let _ = writeln!(
                    s,
                    "{:<20} {:>4} {:>12} {:>12} {:>10} {:>6}  {}{}",
                    rec.formula_id,
                    if rec.hypotheses_verified { "yes" } else { "no" },
                    rec.lhs.as_ref().map(rat).unwrap_or("-".into()),
                    rat(&rec.rhs),
                    rec.slack.as_ref().map(rat).unwrap_or("-".into()),
                    rec.corrections,
                    lhs_text(rec),
                    rec.inputs.get("r").map(|r| format!("  (r = {r})")).unwrap_or_default(),
                );
            }
            let _ = writeln!(s, "best implied bounds:");
            for (r, ib) in &b.best {
                let _ = writeln!(s, "  N_{r} <= {} ({})", ib.value, ib.formula_id);
            }
        }
        Report::Verify(v) => {
            for case in &v.cases {
                let _ = writeln!(s, "{} {}", if case.passed() { "PASS" } else { "FAIL" }, case.case);
                for chk in case.checks.iter().filter(|c| !c.holds) {
                    let _ = writeln!(s, "    {}: {}", chk.name, chk.detail);
                }
            }
            for name in &v.skipped_slow {
                let _ = writeln!(s, "SKIP {name} (slow; pass --slow)");
            }
            let _ = writeln!(s, "{}", if v.passed { "all selected checks passed" } else { "some checks failed" });
        }
    }
    s
}

fn csv_text(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut row = |cells: &[String]| w.write_record(cells).expect("in-memory write");
    let strs = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    match report {
        Report::Catalog { families, cases } => {
            row(&strs(&["kind", "name", "params"]));
            for f in families {
                row(&["family".into(), f.name.clone(), f.params.clone()]);
            }
            for f in cases {
                row(&["case".into(), f.name.clone(), f.params.clone()]);
            }
        }
        Report::Orders(o) => {
            let r = &o.classicality;
            row(&strs(&["sequence", "r", "values", "classical"]));
            row(&["epsilon".into(), String::new(), r.epsilon.seq.to_string(), r.classical_epsilon.to_string()]);
            for f in &o.frobenius {
                row(&["nu".into(), f.r.to_string(), f.nu.seq.to_string(), f.nu.seq.is_classical().to_string()]);
            }
            row(&["kappa".into(), format!("{},{}", r.u, r.m), r.kappa.seq.to_string(), r.classical_kappa.to_string()]);
        }
        Report::Count(cr) => {
            row(&strs(&["label", "r", "N_r"]));
            for (r, n) in &cr.counts.counts {
                row(&[cr.label.clone(), r.to_string(), n.to_string()]);
            }
        }
        Report::Bounds(b) => {
            row(&strs(&["label", "formula", "r", "hypotheses_verified", "lhs_terms", "lhs", "rhs", "slack", "corrections"]));
            for rec in &b.records {
                row(&[
                    b.label.clone(),
                    rec.formula_id.clone(),
                    rec.inputs.get("r").cloned().unwrap_or_default(),
                    rec.hypotheses_verified.to_string(),
                    lhs_text(rec),
                    rec.lhs.as_ref().map(rat).unwrap_or_default(),
                    rat(&rec.rhs),
                    rec.slack.as_ref().map(rat).unwrap_or_default(),
                    rec.corrections.to_string(),
                ]);
            }
        }
        Report::Verify(v) => {
            row(&strs(&["case", "check", "holds", "detail"]));
            for case in &v.cases {
                for chk in &case.checks {
                    row(&[case.case.clone(), chk.name.clone(), chk.holds.to_string(), chk.detail.clone()]);
                }
            }
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use curvebounds::bounds::{compare_report, BoundOptions};
    use curvebounds::catalog::{make_family, FamilyParams};

    fn config() -> RunConfig {
        RunConfig {
            command: "bounds".into(),
            family: Some("hermitian".into()),
            spec_file: None,
            params: BTreeMap::from([("q".to_string(), 2)]),
            morphism: Some("lines".into()),
            u: Some(1),
            m: Some(2),
            ext: vec![3],
            seed: 7,
            samples: 3,
            rank_mode: "auto".into(),
            size_cap: 1 << 16,
            threads: 1,
            format: Format::Json,
        }
    }

    #[test]
    fn json_round_trips() {
        let inst = make_family("hermitian", &FamilyParams::q(2)).unwrap();
        let rep = compare_report(&inst, "lines", 1, 2, &[3], &BoundOptions::default()).unwrap();
        let doc = Document::new(config(), Report::Bounds(rep));
        let text = doc.render(Format::Json);
        let back = Document::parse(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.render(Format::Json), text);
        assert!(Document::parse(&text.replace(REPORT_SCHEMA, "other/1")).is_err());
    }

    #[test]
    fn csv_quotes_fields() {
        let doc = Document::new(
            config(),
            Report::Catalog { families: vec![FamilyEntry { name: "f".into(), params: "a, b".into() }], cases: vec![] },
        );
        assert_eq!(doc.render(Format::Csv), "kind,name,params\nfamily,f,\"a, b\"\n");
    }
}
