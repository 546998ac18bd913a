//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to see them.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use curvebounds::bipoly::BiPoly;
use curvebounds::bounds::{deg_t, place_census, BoundContext, BoundOptions};
use curvebounds::catalog::CurveInstance;
use curvebounds::census::count_points_with;
use curvebounds::field::{binom_det_mod_p, binom_mod_p, make_field, Fe, FieldDesc};
use curvebounds::funcfield::{AlgFunc, CurveModel};
use curvebounds::local::{point_bound_report, series_wronskian_valuation_check};
use curvebounds::orders::{classicality_report, EngineOptions};
use curvebounds::series::Series;
use curvebounds::suite::run_case;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random Hasse instances per catalog curve.
const HASSE_INSTANCES: usize = 1000;
/// Synthetic series per characteristic.
const SERIES_PER_P: usize = 200;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, ok_detail: String) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail: ok_detail }
    } else {
        Outcome { pass: false, detail: failures.join("; ") }
    }
}

fn case(name: &str) -> Outcome {
    let res = run_case(name, &BoundOptions::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
    let failed: Vec<String> = res.checks.iter().filter(|c| !c.holds).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    outcome(failed, format!("{} checks", res.checks.len()))
}

fn random_func(c: &CurveModel, rng: &mut ChaCha8Rng) -> AlgFunc {
    let k = c.field();
    let mut terms = Vec::new();
    for i in 0..=3u32 {
        for j in 0..=2u32 {
            if rng.gen_bool(0.5) {
                terms.push(((i, j), k.random(rng)));
            }
        }
    }
    let num = c.from_bipoly(&BiPoly::from_terms(k, terms));
    if rng.gen_bool(0.25) {
        let den = c.from_bipoly(&BiPoly::from_terms(k, [((1, 0), Fe::ONE), ((0, 0), k.random(rng))]));
        if let Ok(q) = c.div(&num, &den) {
            return q;
        }
    }
    num
}

/// (a) Leibniz, composition and `p^e`-power identities.
fn hasse_identities(insts: &[CurveInstance]) -> Outcome {
    let mut failures = Vec::new();
    for inst in insts {
        let c = &inst.curve;
        let k = c.field();
        let p = k.characteristic();
        let mut rng = ChaCha8Rng::seed_from_u64(0xa11ce);
        for t in 0..HASSE_INSTANCES {
            let g = random_func(c, &mut rng);
            let ok = match t % 3 {
                0 => {
                    let h = random_func(c, &mut rng);
                    let r = rng.gen_range(0..=5);
                    let (hg, hh) = (c.hasse_all(&g, r).unwrap(), c.hasse_all(&h, r).unwrap());
                    let want = (0..=r).fold(c.zero(), |acc, i| c.add(&acc, &c.mul(&hg[i], &hh[r - i])));
                    c.hasse(&c.mul(&g, &h), r).unwrap() == want
                }
                1 => {
                    let (i, j) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
                    let b = k.from_int(binom_mod_p((i + j) as u64, i as u64, p) as i64);
                    c.scale(&c.hasse(&g, i + j).unwrap(), b) == c.hasse(&c.hasse(&g, j).unwrap(), i).unwrap()
                }
                _ => {
                    // Largest p^e <= 8: D^(r) kills it for 0 < r < p^e, and D^(p^e) g^(p^e) = (D^(1) g)^(p^e).
                    let pe = (1..).map(|e| p.pow(e)).take_while(|&x| x <= 8).last().unwrap_or(p);
                    let gp = c.pow(&g, pe);
                    let hs = c.hasse_all(&gp, pe as usize).unwrap();
                    hs[1..pe as usize].iter().all(AlgFunc::is_zero) && hs[pe as usize] == c.pow(&c.hasse(&g, 1).unwrap(), pe)
                }
            };
            if !ok {
                failures.push(format!("{} instance {t}", inst.label));
                break;
            }
        }
    }
    outcome(failures, format!("{HASSE_INSTANCES} instances on each of {} curves", insts.len()))
}

type Poly = Vec<Fe>;

fn poly_det(k: &FieldDesc, m: &[Vec<Poly>]) -> Poly {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut out: Poly = Vec::new();
    for col in 0..m.len() {
        let minor: Vec<Vec<Poly>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, x)| x.clone()).collect()).collect();
        let rest = poly_det(k, &minor);
        let mut term = vec![Fe::ZERO; m[0][col].len() + rest.len()];
        for (i, &x) in m[0][col].iter().enumerate() {
            for (j, &y) in rest.iter().enumerate() {
                term[i + j] = k.add(term[i + j], k.mul(x, y));
            }
        }
        if col % 2 == 1 {
            term.iter_mut().for_each(|x| *x = k.neg(*x));
        }
        if term.len() > out.len() {
            out.resize(term.len(), Fe::ZERO);
        }
        for (i, x) in term.into_iter().enumerate() {
            out[i] = k.add(out[i], x);
        }
    }
    out
}

/// (b) The Wronskian valuation bound and its equality criterion on synthetic series.
fn series_valuations() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0xb0b);
    for (p, h) in [(2u64, 2u32), (3, 1), (5, 1)] {
        let k = make_field(p, h, None).unwrap();
        let mut done = 0;
        while done < SERIES_PER_P {
            let size = rng.gen_range(1..=3);
            let mut leads: Vec<u64> = sample(&mut rng, 12, size).into_iter().map(|x| x as u64).collect();
            leads.sort_unstable();
            let mut orders: Vec<u64> = sample(&mut rng, 6, size).into_iter().map(|x| x as u64).collect();
            orders.sort_unstable();
            let polys: Vec<Poly> = leads
                .iter()
                .map(|&j| {
                    (0..=16u64)
                        .map(|e| if e < j { Fe::ZERO } else if e == j { k.random_nonzero(&mut rng) } else { k.random(&mut rng) })
                        .collect()
                })
                .collect();
            let mat: Vec<Vec<Poly>> = polys
                .iter()
                .map(|z| {
                    orders
                        .iter()
                        .map(|&m| {
                            z.iter().enumerate().skip(m as usize).map(|(e, &c)| k.mul(c, k.from_int(binom_mod_p(e as u64, m, p) as i64))).collect()
                        })
                        .collect()
                })
                .collect();
            let Some(want) = poly_det(&k, &mat).iter().position(|x| !x.is_zero()) else {
                continue;
            };
            let z: Vec<Series> = polys.iter().map(|c| Series::from_coeffs(0, c.clone(), 64)).collect();
            let rep = series_wronskian_valuation_check(&k, &z, &orders).unwrap();
            let bound: i64 = leads.iter().zip(&orders).map(|(&j, &m)| j as i64 - m as i64).sum();
            let unit = binom_det_mod_p(&leads, &orders, p) != 0;
            let want = want as i64;
            if rep.valuation != Some(want) || want < bound || (want == bound) != unit || !rep.equality_consistent {
                failures.push(format!("p = {p}, j = {leads:?}, m = {orders:?}: v = {want}, bound {bound}"));
            }
            done += 1;
        }
    }
    outcome(failures, format!("{SERIES_PER_P} series for each p in 2, 3, 5"))
}

fn contexts(insts: &[CurveInstance]) -> Vec<(String, BoundContext)> {
    let opts = BoundOptions::default();
    insts
        .iter()
        .map(|i| (i.label.clone(), BoundContext::new(i, "lines", i.u, i.m, &opts).unwrap_or_else(|e| panic!("{}: {e}", i.label))))
        .collect()
}

/// (c) Per-point valuation cases and equality criteria at every enumerated place.
fn point_cases(ctxs: &[(String, BoundContext)]) -> Outcome {
    let mut failures = Vec::new();
    let mut points = 0;
    let mut names: BTreeMap<String, usize> = BTreeMap::new();
    for (label, ctx) in ctxs {
        let census = ctx.census.as_ref().expect("exact census");
        for pd in census.all() {
            let rep = point_bound_report(&pd.orders, &ctx.seq, pd.v.unwrap());
            points += 1;
            for c in &rep.checks {
                *names.entry(c.name.clone()).or_default() += 1;
                if !c.holds {
                    failures.push(format!("{label} at {}: {} {}", pd.center, c.name, c.detail));
                }
            }
        }
    }
    let shown: Vec<String> = names.iter().map(|(n, c)| format!("{n}×{c}")).collect();
    outcome(failures, format!("{points} places; {}", shown.join(", ")))
}

/// (d) Set relations and the divisibility of the first jump, on every instance and morphism.
fn set_relations(insts: &[CurveInstance]) -> Outcome {
    let mut failures = Vec::new();
    let mut runs = 0;
    for inst in insts {
        for name in common::morphisms(inst) {
            let mm = inst.morphism(&name).unwrap();
            match classicality_report(&mm, inst.u, inst.m, &EngineOptions::default()) {
                Ok(rep) => {
                    runs += 1;
                    let k = &rep.kappa.seq.values;
                    let jump = (0..k.len()).find(|&l| k[l] as usize > l);
                    if let Some(l) = jump.filter(|&l| l > 0 || k[0] > 0) {
                        if !(k[l] as u64).is_multiple_of(rep.p) {
                            failures.push(format!("{} / {name}: κ_{l} = {} not divisible by {}", inst.label, k[l], rep.p));
                        }
                    }
                    for c in rep.checks.iter().filter(|c| !c.holds) {
                        failures.push(format!("{} / {name}: {}", inst.label, c.name));
                    }
                }
                Err(e) => failures.push(format!("{} / {name}: {e}", inst.label)),
            }
        }
    }
    outcome(failures, format!("{runs} morphisms"))
}

/// (e) `Σ v_P(T_(u,m)) <= deg T_(u,m)` over the distinct enumerated places.
fn divisor_degree(ctxs: &[(String, BoundContext)]) -> Outcome {
    let mut failures = Vec::new();
    for (label, ctx) in ctxs {
        let census = ctx.census.as_ref().expect("exact census");
        let mut seen = BTreeSet::new();
        let sum: i64 = census.all().filter(|pd| seen.insert(pd.center.clone())).map(|pd| pd.v.unwrap()).sum();
        let deg = deg_t(ctx.seq.kappa.sum(), ctx.g, ctx.q, ctx.u, ctx.m, ctx.n as u64, ctx.d);
        if sum as i128 > deg {
            failures.push(format!("{label}: Σv = {sum} > deg T = {deg}"));
        }
    }
    outcome(failures, format!("{} curves", ctxs.len()))
}

/// (f) Parallel and sequential sweeps give identical counts and place data.
fn parallel_determinism(insts: &[CurveInstance]) -> Outcome {
    let mut failures = Vec::new();
    for inst in insts {
        for r in (1..=3).filter(|&r| inst.field().order().pow(r) <= 4096) {
            let a = count_points_with(&inst.curve, r, &inst.places, true).unwrap();
            let b = count_points_with(&inst.curve, r, &inst.places, false).unwrap();
            if a != b {
                failures.push(format!("{} N_{r}: {a} vs {b}", inst.label));
            }
        }
        let ctx = BoundContext::new(inst, "lines", inst.u, inst.m, &BoundOptions { parallel: false, ..BoundOptions::default() }).unwrap();
        let mm = inst.morphism("lines").unwrap();
        let levels = [1, inst.u, inst.m, inst.m - inst.u];
        let par = place_census(inst, &mm, &ctx.seq, &levels, true, true).unwrap();
        if Some(&par) != ctx.census.as_ref() {
            failures.push(format!("{} place census differs", inst.label));
        }
    }
    outcome(failures, format!("{} curves", insts.len()))
}

#[test]
fn acceptance() {
    let insts = common::instances();
    let ctxs = contexts(&insts);
    let rows: Vec<(&str, Outcome)> = vec![
        ("1 fermat d = 8 over F_9, 728 = 728", case("fermat_sharp")),
        ("2 Y_(2,3) over F_8, N_2 <= 119 < Ihara < Weil = 305", case("y_q3")),
        ("3 norm-trace q = 2, N_2 <= 89 = census", case("norm_trace")),
        ("4 Hermitian q = 2, counts and equality for m = 2, 3", case("hermitian")),
        ("5 f_mu q = 2, u = 1, m = 3", case("f_mu")),
        ("6 filling curves attain the N_1 bounds", case("filling")),
        ("7 fermat_half(7) with conics, equality", case("fermat_conics")),
        ("8a Hasse identities", hasse_identities(&insts)),
        ("8b series Wronskian valuations", series_valuations()),
        ("8c per-point cases and equality criteria", point_cases(&ctxs)),
        ("8d order set relations and divisibility", set_relations(&insts)),
        ("8e Σ v_P(T) <= deg T", divisor_degree(&ctxs)),
        ("8f parallel census determinism", parallel_determinism(&insts)),
    ];
    for (name, o) in &rows {
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    // Criterion 2 asks for Ihara < Weil, but at g = 15, Q = 64 Ihara gives 356 > 305.
    // Every other part of it holds; see the y_q3 case for the individual checks.
    let expected_fail = ["2 Y_(2,3) over F_8, N_2 <= 119 < Ihara < Weil = 305"];
    for (name, o) in &rows {
        if expected_fail.contains(name) {
            assert!(!o.pass && o.detail.starts_with("ihara_below_weil") && !o.detail.contains("; "), "{name}: {}", o.detail);
        } else {
            assert!(o.pass, "{name}: {}", o.detail);
        }
    }
}
