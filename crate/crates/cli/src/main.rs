mod report;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use curvebounds::bounds::{check_records, compare_report, BoundOptions, CMode};
use curvebounds::catalog::{from_spec, make_family, CurveInstance, CurveSpecFile, FamilyParams, FAMILIES};
use curvebounds::census::count_table;
use curvebounds::orders::{classicality_report, frobenius_orders, EngineOptions, RankMode};
use curvebounds::suite::{run_case, CASES};
use curvebounds::Error;

use report::{CountReport, Document, FamilyEntry, Format, FrobeniusEntry, OrdersReport, Report, RunConfig, VerifyReport};

#[derive(Parser)]
#[command(name = "curvebounds", version, about = "Order sequences and point-count bounds for plane curves over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,
    /// Seed for randomized rank screening; recorded in every report.
    #[arg(long, default_value_t = EngineOptions::default().seed, global = true)]
    seed: u64,
    /// Random evaluation points per screened rank test.
    #[arg(long, default_value_t = EngineOptions::default().samples, global = true)]
    samples: usize,
    /// Rank decisions: exact, screen, or auto (exact when rows stay small).
    #[arg(long, value_parser = ["auto", "exact", "screen"], default_value = "auto", global = true)]
    rank_mode: String,
    /// Largest field order enumerated by a census.
    #[arg(long, default_value_t = BoundOptions::default().size_cap, global = true)]
    size_cap: u64,
    /// Worker threads for census sweeps; 0 uses every core, 1 runs sequentially.
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,
}

#[derive(Args, Clone, Default)]
struct CurveArgs {
    /// Catalog family (see `catalog`).
    family: Option<String>,
    /// Curve-spec TOML file instead of a catalog family.
    #[arg(long, conflicts_with = "family")]
    spec_file: Option<String>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    d: Option<u64>,
    #[arg(long)]
    a: Option<u64>,
    #[arg(long)]
    b: Option<u64>,
    #[arg(long)]
    c: Option<u64>,
    /// Frobenius pair; defaults to the curve's designated pair.
    #[arg(long)]
    u: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, default_value = "lines")]
    morphism: String,
    /// Extension degrees, comma separated.
    #[arg(long, value_delimiter = ',')]
    ext: Vec<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog families and verification cases.
    Catalog,
    /// Order sequence, Frobenius orders, kappa and classicality checks.
    Orders(CurveArgs),
    /// Rational point counts N_r.
    Count(CurveArgs),
    /// Every bound with hypotheses, corrections, slack and implied N_r bounds.
    Bounds {
        #[command(flatten)]
        curve: CurveArgs,
        /// Per-place corrections from the exact valuation census (default).
        #[arg(long, overrides_with = "no_corrections")]
        with_corrections: bool,
        #[arg(long)]
        no_corrections: bool,
        /// Per-class minima c_r: exact census minima or the analytic floors.
        #[arg(long, value_parser = ["exact", "analytic"])]
        c_mode: Option<String>,
        /// Only these formula ids.
        #[arg(long, value_delimiter = ',')]
        formula: Vec<String>,
    },
    /// Rebuild the worked examples and check their numbers.
    Verify {
        /// Only these cases.
        #[arg(long = "case", value_delimiter = ',')]
        cases: Vec<String>,
        /// Include slow cases.
        #[arg(long)]
        slow: bool,
    },
    /// Print a catalog curve as a curve-spec TOML file.
    Export(CurveArgs),
}

/// A failed run: message and exit code.
struct Failure(String, u8);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::ReportedViolation(_) | Error::KappaMismatch(_) => 3,
            Error::HypothesisFailed(_) | Error::PrecisionExhausted(_) | Error::EmptyClass(_) => 1,
            _ => 2,
        };
        Failure(e.to_string(), code)
    }
}

fn engine(g: &Global) -> EngineOptions {
    let mode = match g.rank_mode.as_str() {
        "exact" => RankMode::Exact,
        "screen" => RankMode::Screen,
        _ => RankMode::Auto,
    };
    EngineOptions { mode, seed: g.seed, samples: g.samples }
}

fn params(a: &CurveArgs) -> FamilyParams {
    FamilyParams { q: a.q, d: a.d, u: a.u, m: a.m, a: a.a, b: a.b, c: a.c }
}

fn load_curve(a: &CurveArgs) -> Result<CurveInstance, Failure> {
    match (&a.family, &a.spec_file) {
        (_, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{path}: {e}"), 2))?;
            Ok(from_spec(&CurveSpecFile::parse(&text)?)?)
        }
        (Some(name), None) => Ok(make_family(name, &params(a))?),
        (None, None) => Err(Failure("give a catalog family or --spec-file".into(), 2)),
    }
}

fn config(command: &str, g: &Global, a: Option<&CurveArgs>) -> RunConfig {
    let mut cfg = RunConfig {
        command: command.to_string(),
        family: None,
        spec_file: None,
        params: BTreeMap::new(),
        morphism: None,
        u: None,
        m: None,
        ext: Vec::new(),
        seed: g.seed,
        samples: g.samples,
        rank_mode: g.rank_mode.clone(),
        size_cap: g.size_cap,
        threads: g.threads,
        format: g.format,
    };
    if let Some(a) = a {
        cfg.family = a.family.clone();
        cfg.spec_file = a.spec_file.clone();
        for (k, v) in [("q", a.q), ("d", a.d), ("a", a.a), ("b", a.b), ("c", a.c)] {
            if let Some(v) = v {
                cfg.params.insert(k.to_string(), v);
            }
        }
        cfg.morphism = Some(a.morphism.clone());
        cfg.u = a.u;
        cfg.m = a.m;
        cfg.ext = a.ext.clone();
    }
    cfg
}

fn pair(a: &CurveArgs, inst: &CurveInstance) -> (u32, u32) {
    (a.u.unwrap_or(inst.u), a.m.unwrap_or(inst.m))
}

fn orders(a: &CurveArgs, g: &Global) -> Result<(Report, bool), Failure> {
    let inst = load_curve(a)?;
    let mor = inst.morphism(&a.morphism)?;
    let (u, m) = pair(a, &inst);
    let opts = engine(g);
    let classicality = classicality_report(&mor, u, m, &opts)?;
    let rs = if a.ext.is_empty() { vec![u, m] } else { a.ext.clone() };
    let mut frobenius = Vec::new();
    for r in rs {
        frobenius.push(FrobeniusEntry { r, nu: frobenius_orders(&mor, r, &opts)? });
    }
    let ok = classicality.all_hold();
    Ok((Report::Orders(OrdersReport { label: inst.label.clone(), morphism: mor.name.clone(), genus: inst.genus, classicality, frobenius }), ok))
}

fn count(a: &CurveArgs, g: &Global) -> Result<(Report, bool), Failure> {
    let inst = load_curve(a)?;
    let rs = if a.ext.is_empty() { vec![1] } else { a.ext.clone() };
    for &r in &rs {
        if inst.base_order.checked_pow(r).is_none_or(|s| s > g.size_cap) {
            return Err(Failure(format!("F_({}^{r}) exceeds --size-cap {}", inst.base_order, g.size_cap), 2));
        }
    }
    let counts = count_table(&inst.curve, &rs, &inst.places)?;
    let rep = CountReport {
        label: inst.label.clone(),
        base_order: inst.base_order,
        genus: inst.genus,
        smooth: inst.smoothness.smooth,
        counts,
    };
    Ok((Report::Count(rep), true))
}

fn bounds(a: &CurveArgs, g: &Global, corrections: bool, c_mode: Option<&str>, formula: &[String]) -> Result<(Report, bool), Failure> {
    let inst = load_curve(a)?;
    let (u, m) = pair(a, &inst);
    let opts = BoundOptions {
        c_mode: c_mode.map(|s| if s == "analytic" { CMode::Analytic } else { CMode::Exact }),
        corrections,
        engine: engine(g),
        size_cap: g.size_cap,
        parallel: g.threads != 1,
    };
    let mut rep = compare_report(&inst, &a.morphism, u, m, &a.ext, &opts)?;
    check_records(&rep.records)?;
    if !formula.is_empty() {
        rep.records.retain(|r| formula.contains(&r.formula_id));
        rep.implied.retain(|b| formula.contains(&b.formula_id));
        rep.best.retain(|_, b| formula.contains(&b.formula_id));
    }
    Ok((Report::Bounds(rep), true))
}

fn verify(cases: &[String], slow: bool, g: &Global) -> Result<(Report, bool), Failure> {
    let selected: Vec<&(&str, bool, &str)> =
        CASES.iter().filter(|c| cases.is_empty() || cases.iter().any(|n| n == c.0)).collect();
    if let Some(bad) = cases.iter().find(|n| !CASES.iter().any(|c| c.0 == n.as_str())) {
        let known: Vec<&str> = CASES.iter().map(|c| c.0).collect();
        return Err(Failure(format!("unknown case {bad}; known: {}", known.join(", ")), 2));
    }
    let opts = BoundOptions { engine: engine(g), size_cap: g.size_cap, parallel: g.threads != 1, ..BoundOptions::default() };
    let mut results = Vec::new();
    let mut skipped_slow = Vec::new();
    for &&(name, is_slow, _) in &selected {
        // An explicitly named slow case runs without --slow.
        if is_slow && !slow && cases.is_empty() {
            skipped_slow.push(name.to_string());
            continue;
        }
        results.push(run_case(name, &opts)?);
    }
    let passed = results.iter().all(|r| r.passed());
    Ok((Report::Verify(VerifyReport { cases: results, skipped_slow, passed }), passed))
}

fn catalog() -> Report {
    let families = FAMILIES.iter().map(|(n, p)| FamilyEntry { name: n.to_string(), params: p.to_string() }).collect();
    let cases = CASES
        .iter()
        .map(|(n, slow, about)| FamilyEntry { name: n.to_string(), params: format!("{about}{}", if *slow { " [slow]" } else { "" }) })
        .collect();
    Report::Catalog { families, cases }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let g = &cli.global;
    if g.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(g.threads)
            .build_global()
            .map_err(|e| Failure(e.to_string(), 2))?;
    }
    let (cfg, (report, ok)) = match &cli.command {
        Command::Catalog => (config("catalog", g, None), (catalog(), true)),
        Command::Orders(a) => (config("orders", g, Some(a)), orders(a, g)?),
        Command::Count(a) => (config("count", g, Some(a)), count(a, g)?),
        Command::Bounds { curve, with_corrections: _, no_corrections, c_mode, formula } => {
            (config("bounds", g, Some(curve)), bounds(curve, g, !no_corrections, c_mode.as_deref(), formula)?)
        }
        Command::Verify { cases, slow } => (config("verify", g, None), verify(cases, *slow, g)?),
        Command::Export(a) => {
            let text = load_curve(a)?.to_spec().to_toml()?;
            print!("{text}");
            return Ok(0);
        }
    };
    print!("{}", Document::new(cfg, report).render(g.format));
    Ok(if ok { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg, code)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
