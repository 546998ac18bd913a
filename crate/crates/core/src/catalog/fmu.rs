//! The simultaneously `F_(q^u)`- and `F_(q^m)`-Frobenius nonclassical curve
//! `F_(m,u)` and a check of its defining properties.

use serde::{Deserialize, Serialize};

use super::CurveInstance;
use crate::bipoly::BiPoly;
use crate::census::count_points;
use crate::error::{Error, Result};
use crate::field::FieldDesc;
use crate::funcfield::{AlgFunc, CurveModel};
use crate::local::gcd;
use crate::orders::{generic_orders, kappa_orders, Check, EngineOptions};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FmuPolynomial {
    Curve(BiPoly),
    /// The numerator equals the denominator, so there is no curve.
    Degenerate,
}

/// `(x^a - x)(y^b - y) - (x^b - x)(y^a - y)`.
fn wedge(k: &FieldDesc, a: u64, b: u64) -> Result<BiPoly> {
    let to = |e: u64| u32::try_from(e).map_err(|_| Error::BadParams(format!("exponent {e} is too large")));
    let (a, b) = (to(a)?, to(b)?);
    let m1 = k.neg(crate::field::Fe::ONE);
    let one = crate::field::Fe::ONE;
    let xa = BiPoly::from_terms(k, [((a, 0), one), ((1, 0), m1)]);
    let xb = BiPoly::from_terms(k, [((b, 0), one), ((1, 0), m1)]);
    let ya = BiPoly::from_terms(k, [((0, a), one), ((0, 1), m1)]);
    let yb = BiPoly::from_terms(k, [((0, b), one), ((0, 1), m1)]);
    Ok(xa.mul(k, &yb).sub(k, &xb.mul(k, &ya)))
}

/// The polynomial `f` defining `F_(m,u)` over `F_q`, by exact division of
/// the `(q^u, q^m)` wedge by the `(q, q^2)` one.
pub fn f_mu_polynomial(k: &FieldDesc, q: u64, u: u32, m: u32) -> Result<FmuPolynomial> {
    if u < 1 || m <= u || gcd(u, m) != 1 {
        return Err(Error::CoprimalityViolated { u, m });
    }
    if k.order() != q {
        return Err(Error::BadParams(format!("f_mu needs coefficients in F_{q}")));
    }
    let pw = |e: u32| q.checked_pow(e).ok_or_else(|| Error::BadParams(format!("{q}^{e} overflows")));
    let num = wedge(k, pw(u)?, pw(m)?)?;
    let den = wedge(k, q, q * q)?;
    let quo = num.div_exact(k, &den)?;
    if quo == BiPoly::constant(crate::field::Fe::ONE) {
        return Ok(FmuPolynomial::Degenerate);
    }
    Ok(FmuPolynomial::Curve(quo))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FmuReport {
    pub q: u64,
    pub u: u32,
    pub m: u32,
    pub checks: Vec<Check>,
}

impl FmuReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    /// The report, or `ReportedViolation` naming the failed checks.
    pub fn ensure(self) -> Result<FmuReport> {
        if self.all_hold() {
            return Ok(self);
        }
        let failed: Vec<&str> = self.checks.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect();
        Err(Error::ReportedViolation(format!("F_(m,u) checks failed: {}", failed.join(", "))))
    }
}

fn det3(c: &CurveModel, m: &[[AlgFunc; 3]; 3]) -> AlgFunc {
    let minor = |a: usize, b: usize| c.sub(&c.mul(&m[1][a], &m[2][b]), &c.mul(&m[1][b], &m[2][a]));
    let t0 = c.mul(&m[0][0], &minor(1, 2));
    let t1 = c.mul(&m[0][1], &minor(0, 2));
    let t2 = c.mul(&m[0][2], &minor(0, 1));
    c.add(&c.sub(&t0, &t1), &t2)
}

/// Checks that an `f_mu` instance has no `F_q`-points, order sequence
/// `(0, 1, q^u)`, `kappa_0 = q^u`, and the determinant identities in `K`:
/// with rows `(1, x^(q^r), y^(q^r))`, `(1, x, y)` and `D^(i)` of `(1, x, y)`,
/// the determinant vanishes for `i < q^u` and not at `i = q^u`, for `r = u, m`.
pub fn verify_f_mu(inst: &CurveInstance) -> Result<FmuReport> {
    if inst.family.as_deref() != Some("f_mu") {
        return Err(Error::BadParams(format!("{} is not an f_mu instance", inst.label)));
    }
    let (q, u, m) = (inst.base_order, inst.u, inst.m);
    let c = &*inst.curve;
    let mut checks = Vec::new();

    let n1 = count_points(c, 1, &inst.places)?;
    checks.push(Check::new("no_rational_points", n1 == 0, format!("N_1 = {n1}")));

    let lines = inst.morphism("lines")?;
    let opts = EngineOptions::default();
    let qu = q.pow(u);
    let eps = generic_orders(&lines, &opts)?.seq;
    let want = vec![0, 1, qu as u32];
    checks.push(Check::new("order_sequence", eps.values == want, format!("epsilon = {eps}")));
    let kappa = kappa_orders(&lines, u, m, &opts)?.seq;
    checks.push(Check::new("kappa_0", kappa.values.first() == Some(&(qu as u32)), format!("kappa = {kappa}")));

    let (x, y) = (c.x(), c.y());
    let hx = c.hasse_all(&x, qu as usize)?;
    let hy = c.hasse_all(&y, qu as usize)?;
    let h1 = |i: usize| if i == 0 { c.one() } else { c.zero() };
    for (label, r) in [("u", u), ("m", m)] {
        let top = [c.one(), c.qpower(&x, r, q), c.qpower(&y, r, q)];
        let mid = [c.one(), x.clone(), y.clone()];
        let det_at = |i: usize| det3(c, &[top.clone(), mid.clone(), [h1(i), hx[i].clone(), hy[i].clone()]]);
        let nonzero = !det_at(qu as usize).is_zero();
        checks.push(Check::new(&format!("det_at_q^u_nonzero_{label}"), nonzero, format!("i = {qu}")));
        let first_nonzero = (0..qu as usize).find(|&i| !det_at(i).is_zero());
        checks.push(Check::new(
            &format!("det_below_q^u_vanishes_{label}"),
            first_nonzero.is_none(),
            match first_nonzero {
                Some(i) => format!("nonzero at i = {i}"),
                None => format!("zero for i < {qu}"),
            },
        ));
    }
    Ok(FmuReport { q, u, m, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_family, FamilyParams};
    use crate::field::field_of_order;

    fn fmu(q: u64, u: u32, m: u32) -> FamilyParams {
        FamilyParams { u: Some(u), m: Some(m), ..FamilyParams::q(q) }
    }

    #[test]
    fn division_and_degenerate_cases() {
        let k = field_of_order(2).unwrap();
        let FmuPolynomial::Curve(f) = f_mu_polynomial(&k, 2, 1, 3).unwrap() else { panic!("degenerate") };
        assert_eq!(f.total_degree(), 4);
        assert_eq!(f_mu_polynomial(&k, 2, 1, 2).unwrap(), FmuPolynomial::Degenerate);
        assert_eq!(f_mu_polynomial(&k, 2, 2, 4), Err(Error::CoprimalityViolated { u: 2, m: 4 }));
        assert_eq!(f_mu_polynomial(&k, 2, 3, 2), Err(Error::CoprimalityViolated { u: 3, m: 2 }));
        assert!(make_family("f_mu", &fmu(3, 1, 2)).is_err());
    }

    #[test]
    fn f31_over_f2() {
        let inst = make_family("f_mu", &fmu(2, 1, 3)).unwrap();
        let rep = verify_f_mu(&inst).unwrap();
        assert!(rep.all_hold(), "{:?}", rep.checks);
    }
}
