use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::field::{embedding, Embedding, Fe, Field, FieldDesc};
use crate::funcfield::{AlgFunc, CurveModel};
use crate::series::{hensel_lift, Series};

/// A truncated local parametrization `(x(t), y(t))` of the curve at a place.
#[derive(Clone, Debug)]
pub struct Branch {
    /// Coefficient field of the series.
    pub field: Field,
    pub emb: Arc<Embedding>,
    pub x: Series,
    pub y: Series,
    pub center: String,
    /// Degree over the prime field of the center's residue field.
    pub center_degree: u32,
    pub prec: i64,
}

/// A point at infinity of the projective closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InfinitePoint {
    /// `(1 : v : 0)`.
    Slope(Fe),
    /// `(0 : 1 : 0)`.
    Vertical,
}

/// Laurent coefficients over the curve's field in wire form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentWire {
    pub start: i64,
    pub coeffs: Vec<Vec<u64>>,
}

/// A place supplied as metadata rather than computed, with its parametrization
/// known modulo `t^prec`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclaredPlace {
    pub name: String,
    /// Degree over the prime field of the residue field.
    pub degree: u32,
    pub x: LaurentWire,
    pub y: LaurentWire,
    pub prec: i64,
}

impl LaurentWire {
    pub fn from_series(k: &FieldDesc, s: &Series) -> LaurentWire {
        let start = s.valuation().unwrap_or(s.prec());
        LaurentWire { start, coeffs: s.coeffs_from(start).iter().map(|&c| k.coeffs(c)).collect() }
    }

    pub fn to_series(&self, k: &FieldDesc, prec: i64) -> Result<Series> {
        let c = self.coeffs.iter().map(|v| k.from_coeffs(v)).collect::<Result<Vec<_>>>()?;
        Ok(Series::from_coeffs(self.start, c, prec))
    }
}

/// Least `s | deg(ext)` with `a` in the subfield of degree `s`.
pub fn subfield_degree(ext: &FieldDesc, a: Fe) -> u32 {
    let h = ext.degree();
    (1..=h).filter(|s| h.is_multiple_of(*s)).find(|&s| ext.in_subfield(a, s)).unwrap()
}

fn degree_of(coord_degrees: &[u32]) -> u32 {
    coord_degrees.iter().fold(1, |acc, &s| lcm(acc, s))
}

pub(crate) fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

pub(crate) fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Branch of a plane polynomial `g` (coefficients in `ext`) at a point where it is
/// smooth. The parameter is `t = X - a` when `∂g/∂Y` is a unit there, else `t = Y - b`.
pub(crate) fn plane_branch(k: &FieldDesc, g: &BiPoly, a: Fe, b: Fe, prec: i64) -> Result<(Series, Series)> {
    if !g.eval(k, a, b).is_zero() {
        return Err(Error::NotOnCurve);
    }
    let gy = g.partial_y(k).eval(k, a, b);
    let gx = g.partial_x(k).eval(k, a, b);
    if !gy.is_zero() {
        let x = Series::from_coeffs(0, vec![a, Fe::ONE], prec);
        let cs: Vec<Series> = g.coeffs_in_y().iter().map(|c| x.compose(k, c).truncate(prec)).collect();
        let y = hensel_lift(k, &cs, b, prec)?;
        Ok((x, y))
    } else if !gx.is_zero() {
        let y = Series::from_coeffs(0, vec![b, Fe::ONE], prec);
        let cs: Vec<Series> = g.swap_vars().coeffs_in_y().iter().map(|c| y.compose(k, c).truncate(prec)).collect();
        let x = hensel_lift(k, &cs, a, prec)?;
        Ok((x, y))
    } else {
        Err(Error::SingularPoint)
    }
}

/// Branch at the affine point `(a, b)` with coordinates in `ext`.
pub fn branch_at(curve: &CurveModel, ext: &Field, a: Fe, b: Fe, prec: i64) -> Result<Branch> {
    let emb = embedding(curve.field(), ext)?;
    let g = curve.poly().embed(&emb);
    let (x, y) = plane_branch(ext, &g, a, b, prec)?;
    let center_degree = degree_of(&[subfield_degree(ext, a), subfield_degree(ext, b)]);
    let center = format!("({}, {})", fmt_elem(ext, a), fmt_elem(ext, b));
    Ok(Branch { field: ext.clone(), emb, x, y, center, center_degree, prec })
}

/// Branch at a point at infinity where the projective closure is smooth.
pub fn branch_at_infinity(curve: &CurveModel, ext: &Field, pt: InfinitePoint, prec: i64) -> Result<Branch> {
    let k: &FieldDesc = ext;
    let emb = embedding(curve.field(), ext)?;
    let f = curve.poly().embed(&emb);
    // chart coordinates are (v, w) with x = 1/w, y = v/w, or (u, w) with x = u/w, y = 1/w
    let (chart, center_pt, center, degs) = match pt {
        InfinitePoint::Slope(v0) => {
            (f.chart_x_one(), (v0, Fe::ZERO), format!("(1 : {} : 0)", fmt_elem(k, v0)), vec![subfield_degree(k, v0)])
        }
        InfinitePoint::Vertical => (f.chart_y_one(), (Fe::ZERO, Fe::ZERO), "(0 : 1 : 0)".to_string(), vec![]),
    };
    // the chart branch loses precision when divided by w
    let (s, w) = plane_branch(k, &chart, center_pt.0, center_pt.1, prec + 2)?;
    let winv = w.inv(k)?;
    let (x, y) = match pt {
        InfinitePoint::Slope(_) => (winv.clone(), s.mul(k, &winv)),
        InfinitePoint::Vertical => (s.mul(k, &winv), winv.clone()),
    };
    let center_degree = degree_of(&degs);
    let prec = x.prec().min(y.prec());
    Ok(Branch { field: ext.clone(), emb, x, y, center, center_degree, prec })
}

/// Branch from a declared parametrization over the curve's field.
pub fn declared_branch(curve: &CurveModel, ext: &Field, place: &DeclaredPlace, prec: i64) -> Result<Branch> {
    let kf = curve.field();
    if prec > place.prec {
        return Err(Error::PrecisionExhausted(place.prec));
    }
    let emb = embedding(kf, ext)?;
    let lift = |w: &LaurentWire| -> Result<Series> {
        let s = w.to_series(kf, prec)?;
        let coeffs = s.coeffs_from(w.start).iter().map(|&c| emb.apply(c)).collect();
        Ok(Series::from_coeffs(w.start, coeffs, prec))
    };
    let x = lift(&place.x)?;
    let y = lift(&place.y)?;
    Ok(Branch { field: ext.clone(), emb, x, y, center: place.name.clone(), center_degree: place.degree, prec })
}

impl Branch {
    /// Whether the center is rational over the field with `p^deg` elements.
    pub fn rational_over(&self, deg: u32) -> bool {
        deg.is_multiple_of(self.center_degree)
    }

    /// `g(x(t), y(t))` as a Laurent series.
    pub fn eval(&self, g: &AlgFunc) -> Result<Series> {
        let k: &FieldDesc = &self.field;
        let mut acc = Series::zero(i64::MAX / 4);
        let mut ypow = Series::constant(Fe::ONE, i64::MAX / 4);
        for (j, n) in g.numerators().iter().enumerate() {
            if j > 0 {
                ypow = ypow.mul(k, &self.y);
            }
            if !n.is_zero() {
                acc = acc.add(k, &self.x.compose(k, &n.embed(&self.emb)).mul(k, &ypow));
            }
        }
        let den = self.x.compose(k, &g.denominator().embed(&self.emb));
        acc.div(k, &den)
    }

    /// Valuation of `f(x(t), y(t))`; `None` when it vanishes to the working precision.
    pub fn residual_valuation(&self, curve: &CurveModel) -> Option<i64> {
        let k: &FieldDesc = &self.field;
        let f = curve.poly().embed(&self.emb);
        let mut acc = Series::zero(i64::MAX / 4);
        for (j, c) in f.coeffs_in_y().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = self.x.compose(k, c).mul(k, &self.y.pow(k, j as u64));
            acc = acc.add(k, &term);
        }
        acc.valuation()
    }
}

pub fn fmt_elem(k: &FieldDesc, a: Fe) -> String {
    if k.degree() == 1 {
        return a.index().to_string();
    }
    let c = k.coeffs(a);
    let terms: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(i, &v)| match (i, v) {
            (0, v) => v.to_string(),
            (1, 1) => "w".to_string(),
            (1, v) => format!("{v}w"),
            (i, 1) => format!("w^{i}"),
            (i, v) => format!("{v}w^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}
