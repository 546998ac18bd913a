//! Truncated Laurent series `Σ c_e t^e` with pessimistic precision tracking.

use crate::error::{Error, Result};
use crate::field::{binom_mod_p_signed, Fe, FieldDesc};
use crate::poly::UniPoly;

/// A Laurent series known modulo `t^prec`.
///
/// `coeffs[i]` is the coefficient of `t^(start + i)`; every exponent below
/// `prec` is exact. A nonzero series has `coeffs[0] != 0`, so `start` is its
/// valuation; a series that vanishes to its precision has no coefficients and
/// `start == prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    start: i64,
    coeffs: Vec<Fe>,
    prec: i64,
}

impl Series {
    fn build(start: i64, mut coeffs: Vec<Fe>, prec: i64) -> Series {
        let keep = (prec - start).max(0) as usize;
        coeffs.truncate(keep);
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Series { start: prec, coeffs: Vec::new(), prec },
            Some(z) => {
                coeffs.drain(..z);
                Series { start: start + z as i64, coeffs, prec }
            }
        }
    }

    /// `O(t^prec)`.
    pub fn zero(prec: i64) -> Series {
        Series { start: prec, coeffs: Vec::new(), prec }
    }

    pub fn constant(c: Fe, prec: i64) -> Series {
        Self::build(0, vec![c], prec)
    }

    /// `c t^e + O(t^prec)`.
    pub fn monomial(c: Fe, e: i64, prec: i64) -> Series {
        Self::build(e, vec![c], prec)
    }

    /// The series with the given coefficients from `t^start` on.
    pub fn from_coeffs(start: i64, coeffs: Vec<Fe>, prec: i64) -> Series {
        Self::build(start, coeffs, prec)
    }

    pub fn from_poly(p: &UniPoly, prec: i64) -> Series {
        Self::build(0, p.coeffs().to_vec(), prec)
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Valuation, or `None` when the series vanishes to its precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^e`; `None` at or beyond the precision.
    pub fn coeff(&self, e: i64) -> Option<Fe> {
        if e >= self.prec {
            return None;
        }
        if e < self.start {
            return Some(Fe::ZERO);
        }
        Some(self.coeffs.get((e - self.start) as usize).copied().unwrap_or(Fe::ZERO))
    }

    /// Coefficients of `t^from .. t^(prec-1)`.
    pub fn coeffs_from(&self, from: i64) -> Vec<Fe> {
        (from..self.prec).map(|e| self.coeff(e).unwrap()).collect()
    }

    pub fn truncate(&self, prec: i64) -> Series {
        if prec >= self.prec {
            return self.clone();
        }
        Self::build(self.start, self.coeffs.clone(), prec)
    }

    /// Multiplication by `t^e`.
    pub fn shift(&self, e: i64) -> Series {
        Series { start: self.start + e, coeffs: self.coeffs.clone(), prec: self.prec + e }
    }

    pub fn add(&self, k: &FieldDesc, o: &Series) -> Series {
        let prec = self.prec.min(o.prec);
        let start = self.start.min(o.start).min(prec);
        let end = [self, o]
            .iter()
            .filter(|s| !s.coeffs.is_empty())
            .map(|s| s.start + s.coeffs.len() as i64)
            .max()
            .unwrap_or(start)
            .min(prec);
        let len = (end - start).max(0) as usize;
        let mut c = vec![Fe::ZERO; len];
        for s in [self, o] {
            for (i, &a) in s.coeffs.iter().enumerate() {
                let idx = s.start + i as i64 - start;
                if (idx as usize) < len {
                    c[idx as usize] = k.add(c[idx as usize], a);
                }
            }
        }
        Self::build(start, c, prec)
    }

    pub fn neg(&self, k: &FieldDesc) -> Series {
        Series { start: self.start, coeffs: self.coeffs.iter().map(|&c| k.neg(c)).collect(), prec: self.prec }
    }

    pub fn sub(&self, k: &FieldDesc, o: &Series) -> Series {
        self.add(k, &o.neg(k))
    }

    pub fn scale(&self, k: &FieldDesc, a: Fe) -> Series {
        Self::build(self.start, self.coeffs.iter().map(|&c| k.mul(a, c)).collect(), self.prec)
    }

    pub fn mul(&self, k: &FieldDesc, o: &Series) -> Series {
        let start = self.start + o.start;
        let prec = (self.start + o.prec).min(o.start + self.prec);
        let full = (self.coeffs.len() + o.coeffs.len()).saturating_sub(1) as i64;
        let len = (prec - start).clamp(0, full) as usize;
        let mut c = vec![Fe::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    c[i + j] = k.add(c[i + j], k.mul(a, b));
                }
            }
        }
        Self::build(start, c, prec)
    }

    pub fn pow(&self, k: &FieldDesc, mut e: u64) -> Series {
        let mut acc = Series::constant(Fe::ONE, i64::MAX / 4);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(k, &b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(k, &b);
            }
        }
        if acc.prec == i64::MAX / 4 {
            acc.prec = self.prec.max(0);
        }
        acc
    }

    /// Multiplicative inverse of a series that is nonzero to its precision.
    pub fn inv(&self, k: &FieldDesc) -> Result<Series> {
        let Some(v) = self.valuation() else {
            return Err(Error::PrecisionExhausted(self.prec));
        };
        let r = (self.prec - v) as usize;
        let u0 = k.inv(self.coeffs[0]).unwrap();
        let mut out = vec![Fe::ZERO; r];
        out[0] = u0;
        for n in 1..r {
            let mut acc = Fe::ZERO;
            for i in 1..=n.min(self.coeffs.len() - 1) {
                acc = k.add(acc, k.mul(self.coeffs[i], out[n - i]));
            }
            out[n] = k.neg(k.mul(acc, u0));
        }
        Ok(Self::build(-v, out, -v + r as i64))
    }

    pub fn div(&self, k: &FieldDesc, o: &Series) -> Result<Series> {
        Ok(self.mul(k, &o.inv(k)?))
    }

    /// `self^(p^e)`, applying the Frobenius to coefficients, truncated at `cap`.
    pub fn frob_power(&self, k: &FieldDesc, e: u32, cap: i64) -> Series {
        let p = k.characteristic() as i128;
        let mult = p.checked_pow(e).unwrap_or(i128::MAX / 8).min(i128::MAX / 8);
        let scale = |x: i64| -> i64 { (x as i128 * mult).clamp(i64::MIN as i128 / 4, i64::MAX as i128 / 4) as i64 };
        let prec = scale(self.prec).min(cap);
        if self.is_zero() {
            return Series::zero(prec);
        }
        let start = scale(self.start);
        if start >= prec {
            return Series::zero(prec);
        }
        let len = (prec - start) as usize;
        let step = mult.min(len as i128 + 1) as usize;
        let mut c = vec![Fe::ZERO; len];
        let j = e % k.degree();
        for (i, &a) in self.coeffs.iter().enumerate() {
            let idx = i.saturating_mul(step);
            if idx >= len {
                break;
            }
            c[idx] = k.frob(a, j);
        }
        Self::build(start, c, prec)
    }

    /// Hasse derivative `D_t^(r)`: `t^e -> C(e, r) t^(e - r)`.
    pub fn hasse(&self, k: &FieldDesc, r: u64) -> Series {
        let p = k.characteristic();
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let b = binom_mod_p_signed(self.start + i as i64, r, p);
                if b == 0 {
                    Fe::ZERO
                } else {
                    k.mul(k.from_int(b as i64), a)
                }
            })
            .collect();
        Self::build(self.start - r as i64, c, self.prec - r as i64)
    }

    /// `p(self)` for a polynomial with coefficients in the series field.
    pub fn compose(&self, k: &FieldDesc, p: &UniPoly) -> Series {
        let mut acc = Series::zero(i64::MAX / 4);
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(k, self).add(k, &Series::constant(c, i64::MAX / 4));
        }
        if acc.prec >= i64::MAX / 8 {
            // a constant polynomial carries no precision loss
            acc = acc.truncate(self.prec.max(0));
        }
        acc
    }
}

/// Lifts a simple root `y0` of `F(Y) = Σ coeffs[j] Y^j mod t` to a series root
/// modulo `t^prec` by Newton iteration. The coefficients must be power series.
pub fn hensel_lift(k: &FieldDesc, coeffs: &[Series], y0: Fe, prec: i64) -> Result<Series> {
    let eval = |y: &Series| -> (Series, Series) {
        let mut f = Series::zero(prec);
        let mut df = Series::zero(prec);
        for c in coeffs.iter().rev() {
            df = df.mul(k, y).add(k, &f);
            f = f.mul(k, y).add(k, c);
        }
        (f.truncate(prec), df.truncate(prec))
    };
    let mut y = Series::constant(y0, prec);
    let (f0, d0) = eval(&y);
    if f0.valuation().is_some_and(|v| v < 1) {
        return Err(Error::NotOnCurve);
    }
    if d0.valuation() != Some(0) {
        return Err(Error::SingularPoint);
    }
    let mut good = 1i64;
    while good < prec {
        let (f, df) = eval(&y);
        if f.is_zero() {
            break;
        }
        y = y.sub(k, &f.div(k, &df)?).truncate(prec);
        good *= 2;
    }
    Ok(y.truncate(prec))
}

/// What elimination could certify about a determinant's valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetValuation {
    Exact(i64),
    /// The determinant vanishes to the working precision; its valuation is
    /// at least this value.
    AtLeast(i64),
}

/// Valuation of the determinant of a square matrix of series, by elimination
/// with a minimal-valuation pivot at each step.
pub fn det_valuation_bound(k: &FieldDesc, mut m: Vec<Vec<Series>>) -> Result<DetValuation> {
    let n = m.len();
    let mut total = 0i64;
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    for left in (1..=n).rev() {
        let mut best: Option<(i64, usize, usize)> = None;
        let mut floor = i64::MAX;
        for &r in &rows {
            for &c in &cols {
                match m[r][c].valuation() {
                    Some(v) => {
                        if best.is_none_or(|(bv, _, _)| v < bv) {
                            best = Some((v, r, c));
                        }
                    }
                    None => floor = floor.min(m[r][c].prec()),
                }
            }
        }
        // every entry of the remaining block has valuation at least `low`
        let low = best.map_or(floor, |(v, _, _)| v.min(floor));
        let Some((v, pr, pc)) = best.filter(|&(v, _, _)| v < floor) else {
            return Ok(DetValuation::AtLeast(total + left as i64 * low));
        };
        total += v;
        let pinv = m[pr][pc].inv(k)?;
        rows.retain(|&r| r != pr);
        cols.retain(|&c| c != pc);
        for &r in &rows {
            let factor = m[r][pc].mul(k, &pinv);
            for &c in &cols {
                let t = factor.mul(k, &m[pr][c]);
                m[r][c] = m[r][c].sub(k, &t);
            }
        }
    }
    Ok(DetValuation::Exact(total))
}

/// Like [`det_valuation_bound`], failing when the valuation is not certified.
pub fn det_valuation(k: &FieldDesc, m: Vec<Vec<Series>>) -> Result<i64> {
    match det_valuation_bound(k, m)? {
        DetValuation::Exact(v) => Ok(v),
        DetValuation::AtLeast(b) => Err(Error::PrecisionExhausted(b)),
    }
}
