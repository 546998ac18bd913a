//! Exhaustive rational-point counts, smoothness of the projective closure,
//! and the genus of smooth plane curves.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::field::{embedding, make_field, Fe, Field, FieldDesc};
use crate::funcfield::CurveModel;
use crate::local::{fmt_elem, DeclaredPlace, InfinitePoint};
use crate::poly::UniPoly;
use crate::polymat;

/// A singular affine point of the plane model with its branches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPoint {
    /// Coordinates over the curve's field, as coefficient vectors.
    pub x: Vec<u64>,
    pub y: Vec<u64>,
    pub places: Vec<DeclaredPlace>,
}

/// Places the affine smooth model does not see.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceMeta {
    /// `None`: the closure is smooth at infinity and the points there are
    /// found by solving the top form. `Some`: the places at infinity.
    pub infinity: Option<Vec<DeclaredPlace>>,
    pub singular: Vec<SingularPoint>,
}

/// `N_r` for each requested `r`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub counts: BTreeMap<u32, u64>,
}

impl CountTable {
    pub fn get(&self, r: u32) -> Option<u64> {
        self.counts.get(&r).copied()
    }
}

/// The degree-`r` extension of the curve's field.
pub fn extension(curve: &CurveModel, r: u32) -> Result<Field> {
    if r == 0 {
        return Err(Error::BadParams("extension degree must be positive".into()));
    }
    let k = curve.field();
    if r == 1 {
        return Ok(k.clone());
    }
    make_field(k.characteristic(), k.degree() * r, None)
}

/// An affine point of the plane model over some extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AffinePoint {
    pub x: Fe,
    pub y: Fe,
    pub singular: bool,
}

fn sweep(f: &BiPoly, fx: &BiPoly, fy: &BiPoly, ext: &FieldDesc, a: Fe) -> Vec<AffinePoint> {
    f.eval_x(ext, a)
        .roots(ext)
        .into_iter()
        .map(|b| AffinePoint { x: a, y: b, singular: fx.eval(ext, a, b).is_zero() && fy.eval(ext, a, b).is_zero() })
        .collect()
}

/// Every affine point over `ext`, ordered by the indices of `(x, y)`.
/// The parallel and serial sweeps return the same list.
pub fn affine_points(curve: &CurveModel, ext: &Field, parallel: bool) -> Result<Vec<AffinePoint>> {
    let emb = embedding(curve.field(), ext)?;
    let f = curve.poly().embed(&emb);
    let fx = f.partial_x(ext);
    let fy = f.partial_y(ext);
    let xs: Vec<Fe> = ext.elements().collect();
    let chunks: Vec<Vec<AffinePoint>> = if parallel {
        xs.par_iter().map(|&a| sweep(&f, &fx, &fy, ext, a)).collect()
    } else {
        xs.iter().map(|&a| sweep(&f, &fx, &fy, ext, a)).collect()
    };
    Ok(chunks.into_iter().flatten().collect())
}

/// Affine points over the degree-`r` extension of the curve's field.
pub fn rational_points(curve: &CurveModel, r: u32) -> Result<Vec<(Fe, Fe)>> {
    let ext = extension(curve, r)?;
    Ok(affine_points(curve, &ext, true)?.into_iter().map(|p| (p.x, p.y)).collect())
}

/// Points at infinity of the projective closure rational over `ext`.
pub fn infinite_points(curve: &CurveModel, ext: &Field) -> Result<Vec<InfinitePoint>> {
    let emb = embedding(curve.field(), ext)?;
    let f = curve.poly().embed(&emb);
    let top = f.top_form_dehomogenized();
    let mut out: Vec<InfinitePoint> = top.roots(ext).into_iter().map(InfinitePoint::Slope).collect();
    if top.deg() != Some(curve.total_degree() as usize) {
        out.push(InfinitePoint::Vertical);
    }
    Ok(out)
}

fn declared_coords(k: &FieldDesc, s: &SingularPoint) -> Result<(Fe, Fe)> {
    Ok((k.from_coeffs(&s.x)?, k.from_coeffs(&s.y)?))
}

/// `N_r`: places of the nonsingular model rational over the degree-`r`
/// extension of the curve's field.
pub fn count_points(curve: &CurveModel, r: u32, meta: &PlaceMeta) -> Result<u64> {
    count_points_with(curve, r, meta, true)
}

pub fn count_points_with(curve: &CurveModel, r: u32, meta: &PlaceMeta, parallel: bool) -> Result<u64> {
    let ext = extension(curve, r)?;
    let deg = ext.degree();
    let emb = embedding(curve.field(), &ext)?;
    let declared: Vec<((Fe, Fe), &SingularPoint)> = meta
        .singular
        .iter()
        .map(|s| {
            let (a, b) = declared_coords(curve.field(), s)?;
            Ok(((emb.apply(a), emb.apply(b)), s))
        })
        .collect::<Result<_>>()?;
    let mut total = 0u64;
    for pt in affine_points(curve, &ext, parallel)? {
        if !pt.singular {
            total += 1;
            continue;
        }
        let Some((_, s)) = declared.iter().find(|(c, _)| *c == (pt.x, pt.y)) else {
            return Err(Error::UndeclaredSingularity(format!("({}, {})", fmt_elem(&ext, pt.x), fmt_elem(&ext, pt.y))));
        };
        total += s.places.iter().filter(|p| deg % p.degree == 0).count() as u64;
    }
    total += match &meta.infinity {
        Some(places) => places.iter().filter(|p| deg % p.degree == 0).count() as u64,
        None => infinite_points(curve, &ext)?.len() as u64,
    };
    Ok(total)
}

pub fn count_table(curve: &CurveModel, rs: &[u32], meta: &PlaceMeta) -> Result<CountTable> {
    let mut t = CountTable::default();
    for &r in rs {
        t.counts.insert(r, count_points(curve, r, meta)?);
    }
    Ok(t)
}

/// Outcome of the smoothness test, with a singular point when one exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Smoothness {
    pub smooth: bool,
    pub witness: Option<String>,
}

/// Resultant in the second variable of two polynomials given by their
/// coefficient lists in that variable.
pub fn resultant(k: &FieldDesc, a: &[UniPoly], b: &[UniPoly]) -> UniPoly {
    let trim = |v: &[UniPoly]| -> Vec<UniPoly> {
        let mut v = v.to_vec();
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    };
    let (a, b) = (trim(a), trim(b));
    if a.is_empty() || b.is_empty() {
        return UniPoly::zero();
    }
    let (da, db) = (a.len() - 1, b.len() - 1);
    let n = da + db;
    if n == 0 {
        return UniPoly::one();
    }
    let mut m = vec![vec![UniPoly::zero(); n]; n];
    for i in 0..db {
        for (j, c) in a.iter().rev().enumerate() {
            m[i][i + j] = c.clone();
        }
    }
    for i in 0..da {
        for (j, c) in b.iter().rev().enumerate() {
            m[db + i][i + j] = c.clone();
        }
    }
    polymat::det(k, m)
}

/// Roots of a nonzero polynomial over `k` in the algebraic closure, one
/// extension per distinct-degree block: `(extension, roots there)`.
fn closure_roots(k: &Field, g: &UniPoly) -> Result<Vec<(Field, Vec<Fe>)>> {
    if g.deg().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    // strip p-th powers so the squarefree part is honest
    let mut g = g.monic(k);
    let p = k.characteristic() as usize;
    while g.deg().unwrap_or(0) > 0 && g.derivative(k).is_zero() {
        let root = g.coeffs().iter().step_by(p).map(|&c| k.frob(c, k.degree() - 1)).collect();
        g = UniPoly::from_coeffs(root);
    }
    let sf = g.squarefree_part(k);
    let mut out = Vec::new();
    for (s, part) in sf.distinct_degree(k) {
        let ext = make_field(k.characteristic(), k.degree() * s as u32, None)?;
        let emb = embedding(k, &ext)?;
        out.push((ext.clone(), part.embed(&emb).roots(&ext)));
    }
    Ok(out)
}

fn singular_on_chart(k: &Field, g: &BiPoly) -> Result<Option<String>> {
    let gx = g.partial_x(k);
    let gy = g.partial_y(k);
    let cy = g.coeffs_in_y();
    // x-coordinates of singular points are roots of Res_y(g, g_y), or of
    // Res_y(g, g_x) when g_y vanishes identically
    let partner = if gy.is_zero() { &gx } else { &gy };
    let res = resultant(k, &cy, &partner.coeffs_in_y());
    if res.is_zero() {
        return Ok(Some("resultant vanishes identically".into()));
    }
    for (ext, roots) in closure_roots(k, &res)? {
        let emb = embedding(k, &ext)?;
        let (ge, gxe, gye) = (g.embed(&emb), gx.embed(&emb), gy.embed(&emb));
        for a in roots {
            let h = ge.eval_x(&ext, a).gcd(&ext, &gxe.eval_x(&ext, a)).gcd(&ext, &gye.eval_x(&ext, a));
            if h.deg().unwrap_or(0) > 0 {
                let b = h.roots(&ext).first().map(|&b| fmt_elem(&ext, b)).unwrap_or_else(|| "a conjugate root".into());
                return Ok(Some(format!("({}, {})", fmt_elem(&ext, a), b)));
            }
        }
    }
    Ok(None)
}

/// Smoothness of the projective closure of the plane model.
pub fn is_smooth(curve: &CurveModel) -> Result<Smoothness> {
    let k = curve.field();
    let f = curve.poly();
    if let Some(w) = singular_on_chart(k, f)? {
        return Ok(Smoothness { smooth: false, witness: Some(w) });
    }
    // at infinity: (1 : v : 0) on the chart X = 1 and (0 : 1 : 0) on Y = 1
    let cx = f.chart_x_one();
    let (cxv, cxw) = (cx.partial_x(k), cx.partial_y(k));
    let top = cx.coeffs_in_y().into_iter().next().unwrap_or_else(UniPoly::zero);
    for (ext, roots) in closure_roots(k, &top)? {
        let emb = embedding(k, &ext)?;
        let (v_, w_) = (cxv.embed(&emb), cxw.embed(&emb));
        for v0 in roots {
            if v_.eval(&ext, v0, Fe::ZERO).is_zero() && w_.eval(&ext, v0, Fe::ZERO).is_zero() {
                return Ok(Smoothness { smooth: false, witness: Some(format!("(1 : {} : 0)", fmt_elem(&ext, v0))) });
            }
        }
    }
    let cy = f.chart_y_one();
    let o = Fe::ZERO;
    if cy.eval(k, o, o).is_zero() && cy.partial_x(k).eval(k, o, o).is_zero() && cy.partial_y(k).eval(k, o, o).is_zero() {
        return Ok(Smoothness { smooth: false, witness: Some("(0 : 1 : 0)".into()) });
    }
    Ok(Smoothness { smooth: true, witness: None })
}

/// `(d - 1)(d - 2) / 2`, for a plane curve certified smooth.
pub fn genus_smooth_plane(d: u32, smooth: bool) -> Result<u64> {
    if !smooth || d == 0 {
        return Err(Error::NotSmoothCertified);
    }
    let d = d as u64;
    Ok((d - 1) * (d - 2) / 2)
}
