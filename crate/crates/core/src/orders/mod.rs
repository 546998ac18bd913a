//! Order sequences of a morphism: generic `ε`, Frobenius `ν`, and the
//! two-Frobenius sequence `κ`, found by greedy rank scans.

mod exact;
mod screen;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::funcfield::{AlgFunc, CurveModel};
use crate::local::gcd;

pub use exact::{kdet, ExactOracle};
pub use screen::ScreenOracle;
pub(crate) use screen::rank;

/// What an [`OrderSeq`] measures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrderKind {
    Generic,
    Frobenius { r: u32 },
    Kappa { u: u32, m: u32 },
    Pointwise { center: String },
}

/// A strictly increasing sequence of orders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSeq {
    #[serde(flatten)]
    pub kind: OrderKind,
    pub values: Vec<u32>,
}

impl OrderSeq {
    pub fn new(kind: OrderKind, values: Vec<u32>) -> OrderSeq {
        debug_assert!(values.windows(2).all(|w| w[0] < w[1]), "orders must increase: {values:?}");
        OrderSeq { kind, values }
    }

    /// `values[i] == i` for every `i`.
    pub fn is_classical(&self) -> bool {
        self.values.iter().enumerate().all(|(i, &v)| v as usize == i)
    }

    pub fn sum(&self) -> u64 {
        self.values.iter().map(|&v| v as u64).sum()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl std::fmt::Display for OrderSeq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", v.join(", "))
    }
}

/// A morphism `(f_0 : ... : f_n)` from the curve into `P^n`, defined over `F_Q`.
#[derive(Clone, Debug)]
pub struct Morphism {
    pub name: String,
    pub curve: Arc<CurveModel>,
    pub coords: Vec<AlgFunc>,
    /// Degree `d` of the linear series cut out by hyperplanes.
    pub deg_d: u32,
    /// `Q`, the order of the field the morphism and curve are defined over.
    pub base_order: u64,
}

impl Morphism {
    pub fn new(name: &str, curve: Arc<CurveModel>, coords: Vec<AlgFunc>, deg_d: u32, base_order: u64) -> Result<Morphism> {
        if coords.len() < 3 {
            return Err(Error::BadParams(format!("morphism needs n >= 2, got {} coordinates", coords.len())));
        }
        let k = curve.field().clone();
        let p = k.characteristic();
        let e = log_p(base_order, p).ok_or_else(|| Error::BadParams(format!("base order {base_order} is not a power of {p}")))?;
        if e == 0 || !k.degree().is_multiple_of(e) {
            return Err(Error::BadParams(format!("F_{base_order} is not a subfield of F_{}", k.order())));
        }
        let in_base = |c: Fe| k.in_subfield(c, e);
        if !curve.poly().terms().all(|(_, _, c)| in_base(c)) {
            return Err(Error::BadParams(format!("curve is not defined over F_{base_order}")));
        }
        for g in &coords {
            let ok = g.numerators().iter().chain(std::iter::once(g.denominator())).all(|p| p.coeffs().iter().all(|&c| in_base(c)));
            if !ok {
                return Err(Error::BadParams(format!("morphism is not defined over F_{base_order}")));
            }
        }
        Ok(Morphism { name: name.to_string(), curve, coords, deg_d, base_order })
    }

    /// Coordinates given as polynomials in `x, y`.
    pub fn from_polys(name: &str, curve: Arc<CurveModel>, polys: &[BiPoly], deg_d: u32, base_order: u64) -> Result<Morphism> {
        let coords = polys.iter().map(|b| curve.from_bipoly(b)).collect();
        Morphism::new(name, curve, coords, deg_d, base_order)
    }

    /// `(1 : x : y)`, with `d` the degree of the plane model.
    pub fn lines(curve: Arc<CurveModel>, base_order: u64) -> Result<Morphism> {
        let d = curve.total_degree();
        let polys = [BiPoly::constant(Fe::ONE), BiPoly::x(), BiPoly::y()];
        Morphism::from_polys("lines", curve, &polys, d, base_order)
    }

    /// `(1 : x : y : x^2 : xy : y^2)`, with `d` twice the degree of the plane model.
    pub fn conics(curve: Arc<CurveModel>, base_order: u64) -> Result<Morphism> {
        let d = 2 * curve.total_degree();
        let polys = [
            BiPoly::constant(Fe::ONE),
            BiPoly::x(),
            BiPoly::y(),
            BiPoly::monomial(Fe::ONE, 2, 0),
            BiPoly::monomial(Fe::ONE, 1, 1),
            BiPoly::monomial(Fe::ONE, 0, 2),
        ];
        Morphism::from_polys("conics", curve, &polys, d, base_order)
    }

    /// Projective dimension `n`.
    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn characteristic(&self) -> u64 {
        self.curve.field().characteristic()
    }

    /// `log_p Q`.
    pub fn base_exponent(&self) -> u32 {
        log_p(self.base_order, self.characteristic()).unwrap()
    }

    /// `Q^k`, saturating.
    pub fn frob_exponent(&self, k: u32) -> u64 {
        self.base_order.checked_pow(k).unwrap_or(u64::MAX)
    }

    /// The same morphism with coordinates replaced by `Σ a_ij f_j`.
    pub fn transformed(&self, a: &[Vec<Fe>]) -> Morphism {
        let c = &self.curve;
        let coords = a
            .iter()
            .map(|row| row.iter().zip(&self.coords).fold(c.zero(), |acc, (&s, g)| c.add(&acc, &c.scale(g, s))))
            .collect();
        Morphism { coords, ..self.clone() }
    }

    /// The same morphism with every coordinate multiplied by `h`.
    pub fn scaled(&self, h: &AlgFunc) -> Morphism {
        let coords = self.coords.iter().map(|g| self.curve.mul(g, h)).collect();
        Morphism { coords, ..self.clone() }
    }
}

pub(crate) fn log_p(q: u64, p: u64) -> Option<u32> {
    let mut e = 0;
    let mut r = q;
    while r > 1 {
        if !r.is_multiple_of(p) {
            return None;
        }
        r /= p;
        e += 1;
    }
    (r == 1).then_some(e)
}

/// A row of the Wronskian-type systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowSpec {
    /// `(f_0^(Q^k), ..., f_n^(Q^k))`.
    Frob(u32),
    /// `(D^(e) f_0, ..., D^(e) f_n)`.
    Hasse(u32),
}

/// Incremental rank test over the function field.
pub trait RankOracle {
    /// Appends `row` if it is independent of the rows already kept.
    fn try_push(&mut self, row: RowSpec) -> Result<bool>;
}

/// How rank tests are decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankMode {
    /// Gaussian elimination over `K`.
    Exact,
    /// Evaluation at random places over a large extension. Independence is
    /// proven by a nonzero minor; dependence is only probable.
    Screen,
    /// Exact unless the Frobenius exponents make exact rows too large.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineOptions {
    pub mode: RankMode,
    pub seed: u64,
    pub samples: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { mode: RankMode::Auto, seed: 0x5eed, samples: 3 }
    }
}

/// Largest `Q^k` for which [`RankMode::Auto`] still uses exact rows.
pub const AUTO_EXACT_LIMIT: u64 = 1024;

/// An order sequence together with how it was certified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderResult {
    pub seq: OrderSeq,
    pub mode: RankMode,
    /// False when some rejected order was judged dependent by random evaluation only.
    pub dependence_certified: bool,
    pub seed: Option<u64>,
}

fn resolve_mode(m: &Morphism, seeds: &[RowSpec], opts: &EngineOptions) -> RankMode {
    match opts.mode {
        RankMode::Auto => {
            let worst = seeds
                .iter()
                .map(|r| match r {
                    RowSpec::Frob(k) => m.frob_exponent(*k),
                    RowSpec::Hasse(_) => 1,
                })
                .max()
                .unwrap_or(1);
            if worst <= AUTO_EXACT_LIMIT {
                RankMode::Exact
            } else {
                RankMode::Screen
            }
        }
        mode => mode,
    }
}

fn oracle_for<'a>(m: &'a Morphism, mode: RankMode, opts: &EngineOptions) -> Result<Box<dyn RankOracle + 'a>> {
    Ok(match mode {
        RankMode::Exact | RankMode::Auto => Box::new(ExactOracle::new(m)),
        RankMode::Screen => Box::new(ScreenOracle::new(m, opts.seed, opts.samples)?),
    })
}

/// Greedy scan: push the seed rows, then the least Hasse orders that raise the rank.
fn greedy(m: &Morphism, seeds: &[RowSpec], needed: usize, kind: OrderKind, opts: &EngineOptions) -> Result<OrderResult> {
    let mode = resolve_mode(m, seeds, opts);
    let mut oracle = oracle_for(m, mode, opts)?;
    for &s in seeds {
        if !oracle.try_push(s)? {
            return Err(Error::Degenerate { found: 0, needed, cap: m.deg_d });
        }
    }
    let mut out = Vec::with_capacity(needed);
    let mut rejected = false;
    for e in 0..=m.deg_d {
        if oracle.try_push(RowSpec::Hasse(e))? {
            out.push(e);
            if out.len() == needed {
                return Ok(OrderResult {
                    seq: OrderSeq::new(kind, out),
                    mode,
                    dependence_certified: mode == RankMode::Exact || !rejected,
                    seed: (mode == RankMode::Screen).then_some(opts.seed),
                });
            }
        } else {
            rejected = true;
        }
    }
    Err(Error::Degenerate { found: out.len(), needed, cap: m.deg_d })
}

/// The order sequence `ε_0 < ... < ε_n`.
pub fn generic_orders(m: &Morphism, opts: &EngineOptions) -> Result<OrderResult> {
    greedy(m, &[], m.n() + 1, OrderKind::Generic, opts)
}

/// The `F_(Q^r)`-Frobenius order sequence `ν_0 < ... < ν_(n-1)`.
pub fn frobenius_orders(m: &Morphism, r: u32, opts: &EngineOptions) -> Result<OrderResult> {
    if r == 0 {
        return Err(Error::BadParams("r must be positive".into()));
    }
    greedy(m, &[RowSpec::Frob(r)], m.n(), OrderKind::Frobenius { r }, opts)
}

pub(crate) fn check_pair(u: u32, m: u32) -> Result<()> {
    if !(m > u && u >= 1 && gcd(u, m) == 1) {
        return Err(Error::CoprimalityViolated { u, m });
    }
    Ok(())
}

/// The `(Q^u, Q^m)`-Frobenius order sequence `κ_0 < ... < κ_(n-2)`.
pub fn kappa_orders(mm: &Morphism, u: u32, m: u32, opts: &EngineOptions) -> Result<OrderResult> {
    check_pair(u, m)?;
    greedy(mm, &[RowSpec::Frob(m), RowSpec::Frob(u)], mm.n() - 1, OrderKind::Kappa { u, m }, opts)
}

/// True when the seed rows followed by the given Hasse rows are dependent.
pub fn rows_dependent(m: &Morphism, seeds: &[RowSpec], orders: &[u32], opts: &EngineOptions) -> Result<bool> {
    let mode = resolve_mode(m, seeds, opts);
    let mut oracle = oracle_for(m, mode, opts)?;
    for &s in seeds.iter().chain(orders.iter().map(|e| RowSpec::Hasse(*e)).collect::<Vec<_>>().iter()) {
        if !oracle.try_push(s)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Rows `φ^(Q^m)`, `φ^(Q^u)`, `D^(ρ_i) φ` as exact elements of `K`.
pub fn wronskian_rows(mm: &Morphism, u: u32, m: u32, rho: &[u32]) -> Result<Vec<Vec<AlgFunc>>> {
    let c = &mm.curve;
    let q = mm.base_order;
    let mut rows = vec![
        mm.coords.iter().map(|g| c.qpower(g, m, q)).collect(),
        mm.coords.iter().map(|g| c.qpower(g, u, q)).collect(),
    ];
    let top = rho.iter().copied().max().unwrap_or(0) as usize;
    let all: Vec<Vec<AlgFunc>> = mm.coords.iter().map(|g| c.hasse_all(g, top)).collect::<Result<_>>()?;
    for &r in rho {
        rows.push(all.iter().map(|h| h[r as usize].clone()).collect());
    }
    Ok(rows)
}

/// The determinant `A^(ρ_0, ..., ρ_(n-2))` with rows `φ^(Q^m)`, `φ^(Q^u)`, `D^(ρ_i) φ`.
pub fn wronskian_a(mm: &Morphism, u: u32, m: u32, rho: &[u32]) -> Result<AlgFunc> {
    if rho.len() != mm.n() - 1 {
        return Err(Error::BadParams(format!("need {} orders, got {}", mm.n() - 1, rho.len())));
    }
    kdet(&mm.curve, wronskian_rows(mm, u, m, rho)?)
}

/// One theorem-mandated relation and whether it held.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, holds: bool, detail: String) -> Check {
        Check { name: name.to_string(), holds, detail }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalityReport {
    pub u: u32,
    pub m: u32,
    pub p: u64,
    pub n: usize,
    pub deg_d: u32,
    pub epsilon: OrderResult,
    pub nu: OrderResult,
    pub mu: OrderResult,
    pub kappa: OrderResult,
    pub classical_epsilon: bool,
    pub classical_nu: bool,
    pub classical_mu: bool,
    pub classical_kappa: bool,
    /// Elements of `ν` (resp. `μ`) missing from `κ`.
    pub dropped_from_nu: Vec<u32>,
    pub dropped_from_mu: Vec<u32>,
    pub checks: Vec<Check>,
}

impl ClassicalityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn dropped(big: &OrderSeq, small: &OrderSeq) -> Vec<u32> {
    big.values.iter().copied().filter(|v| !small.values.contains(v)).collect()
}

/// Computes `ε`, `ν` over `F_(Q^u)`, `μ` over `F_(Q^m)` and `κ`, and checks the
/// relations the theory imposes on them. A failed relation is an error.
pub fn classicality_report(mm: &Morphism, u: u32, m: u32, opts: &EngineOptions) -> Result<ClassicalityReport> {
    check_pair(u, m)?;
    let eps = generic_orders(mm, opts)?;
    let nu = frobenius_orders(mm, u, opts)?;
    let mu = frobenius_orders(mm, m, opts)?;
    let kappa = kappa_orders(mm, u, m, opts)?;
    let report = build_report(mm, u, m, eps, nu, mu, kappa);
    if !report.all_hold() {
        let failed: Vec<String> = report.checks.iter().filter(|c| !c.holds).map(|c| format!("{}: {}", c.name, c.detail)).collect();
        return Err(Error::ReportedViolation(failed.join("; ")));
    }
    Ok(report)
}

pub(crate) fn build_report(
    mm: &Morphism,
    u: u32,
    m: u32,
    eps: OrderResult,
    nu: OrderResult,
    mu: OrderResult,
    kappa: OrderResult,
) -> ClassicalityReport {
    let p = mm.characteristic();
    let n = mm.n();
    let (e, v, w, k) = (&eps.seq, &nu.seq, &mu.seq, &kappa.seq);
    let dnu = dropped(v, k);
    let dmu = dropped(w, k);
    let mut checks = Vec::new();
    let sub = |big: &OrderSeq, d: &Vec<u32>| k.values.iter().all(|x| big.values.contains(x)) && d.len() == 1;
    checks.push(Check::new("kappa_in_nu", sub(v, &dnu), format!("κ = {k}, ν = {v}, dropped {dnu:?}")));
    checks.push(Check::new("kappa_in_mu", sub(w, &dmu), format!("κ = {k}, μ = {w}, dropped {dmu:?}")));
    checks.push(Check::new(
        "orders_below_degree",
        k.values.last().is_none_or(|&last| last <= e.values[n]) && e.values[n] <= mm.deg_d,
        format!("κ_(n-2) <= ε_n <= d with ε = {e}, d = {}", mm.deg_d),
    ));
    if k.get(0) > 0 {
        let qu = mm.frob_exponent(u);
        checks.push(Check::new(
            "kappa0_positive_shape",
            k.get(0) as u64 == qu && m as usize > n,
            format!("κ_0 = {} must equal Q^u = {qu}, and m = {m} must exceed n = {n}", k.get(0)),
        ));
    }
    if let Some(l) = (0..k.len()).find(|&l| k.get(l) as usize > l) {
        if l > 0 || k.get(0) > 0 {
            checks.push(Check::new(
                "first_jump_divisible_by_p",
                (k.get(l) as u64).is_multiple_of(p),
                format!("κ_{l} = {} with p = {p}", k.get(l)),
            ));
        }
    }
    if p > mm.deg_d as u64 {
        checks.push(Check::new("large_p_classical", k.is_classical(), format!("p = {p} > d = {}, κ = {k}", mm.deg_d)));
    }
    if !k.is_classical() && p > n as u64 - 1 {
        checks.push(Check::new(
            "nonclassical_kappa_forces_frobenius",
            !v.is_classical() && !w.is_classical(),
            format!("κ = {k}, ν = {v}, μ = {w}"),
        ));
        if p > n as u64 {
            checks.push(Check::new("nonclassical_kappa_forces_epsilon", !e.is_classical(), format!("ε = {e}")));
        }
    }
    ClassicalityReport {
        u,
        m,
        p,
        n,
        deg_d: mm.deg_d,
        classical_epsilon: e.is_classical(),
        classical_nu: v.is_classical(),
        classical_mu: w.is_classical(),
        classical_kappa: k.is_classical(),
        dropped_from_nu: dnu,
        dropped_from_mu: dmu,
        epsilon: eps,
        nu,
        mu,
        kappa,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn plane(p: u64, h: u32, terms: &[(u32, u32, i64)]) -> Arc<CurveModel> {
        let k = make_field(p, h, None).unwrap();
        let f = BiPoly::from_int_terms(&k, terms);
        CurveModel::new(k, f).unwrap()
    }

    fn hermitian(q: u64, p: u64, h: u32) -> Morphism {
        let q1 = q as u32 + 1;
        let c = plane(p, h, &[(q1, 0, 1), (0, q1, 1), (0, 0, -1)]);
        Morphism::lines(c, q * q).unwrap()
    }

    #[test]
    fn conic_is_classical() {
        let c = plane(5, 1, &[(0, 1, 1), (2, 0, -1)]);
        let m = Morphism::lines(c, 5).unwrap();
        let opts = EngineOptions::default();
        assert_eq!(generic_orders(&m, &opts).unwrap().seq.values, vec![0, 1, 2]);
        assert_eq!(frobenius_orders(&m, 1, &opts).unwrap().seq.values, vec![0, 1]);
        let rep = classicality_report(&m, 1, 2, &opts).unwrap();
        assert!(rep.classical_epsilon && rep.classical_nu && rep.classical_mu && rep.classical_kappa);
    }

    #[test]
    fn hermitian_orders() {
        let m = hermitian(3, 3, 2);
        let opts = EngineOptions::default();
        assert_eq!(generic_orders(&m, &opts).unwrap().seq.values, vec![0, 1, 3]);
        assert_eq!(frobenius_orders(&m, 1, &opts).unwrap().seq.values, vec![0, 3]);
        assert_eq!(kappa_orders(&m, 1, 2, &opts).unwrap().seq.values, vec![0]);
    }

    #[test]
    fn y23_orders_exact_and_screened() {
        let c = plane(2, 3, &[(7, 0, 1), (0, 7, 1), (0, 0, 1)]);
        let m = Morphism::lines(c, 8).unwrap();
        for mode in [RankMode::Exact, RankMode::Screen] {
            let opts = EngineOptions { mode, ..Default::default() };
            assert_eq!(generic_orders(&m, &opts).unwrap().seq.values, vec![0, 1, 2]);
            assert_eq!(frobenius_orders(&m, 1, &opts).unwrap().seq.values, vec![0, 2]);
            let k = kappa_orders(&m, 1, 2, &opts).unwrap();
            assert_eq!(k.seq.values, vec![0]);
            assert_eq!(k.seed.is_some(), mode == RankMode::Screen);
        }
    }

    #[test]
    fn coprimality_is_enforced() {
        let m = hermitian(2, 2, 2);
        assert_eq!(
            kappa_orders(&m, 2, 4, &EngineOptions::default()).unwrap_err(),
            Error::CoprimalityViolated { u: 2, m: 4 }
        );
    }

    #[test]
    fn wronskian_vanishes_below_kappa_and_scales() {
        let m = hermitian(2, 2, 2);
        let c = m.curve.clone();
        let a = wronskian_a(&m, 1, 2, &[0]).unwrap();
        assert!(!a.is_zero());
        // scaling by h multiplies A by h^(Q^m + Q^u + n - 1)
        let h = c.add(&c.x(), &c.one());
        let scaled = wronskian_a(&m.scaled(&h), 1, 2, &[0]).unwrap();
        assert_eq!(scaled, c.mul(&a, &c.pow(&h, 16 + 4 + 1)));
    }
}
