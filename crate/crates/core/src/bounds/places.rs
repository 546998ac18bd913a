//! Rational places by rationality class, with their orders and `v_P(T_(u,m))`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::CurveInstance;
use crate::census::{affine_points, extension, infinite_points};
use crate::error::{Error, Result};
use crate::field::{embedding, Fe, Field};
use crate::funcfield::CurveModel;
use crate::local::{
    branch_at, branch_at_infinity, check_point_bounds, declared_branch, fmt_elem, initial_precision, point_orders, valuation_t, with_precision,
    Branch, DeclaredPlace, InfinitePoint, PointOrders, SequenceData,
};
use crate::orders::Morphism;

/// Largest precision tried for computed branches.
pub const BRANCH_PREC_CAP: i64 = 4096;

/// How to reach a place rational over some extension.
#[derive(Clone, Debug)]
pub enum PlaceSource {
    Affine(Fe, Fe),
    Infinite(InfinitePoint),
    Declared(DeclaredPlace),
}

#[derive(Clone, Debug)]
pub struct RationalPlace {
    pub ext: Field,
    pub source: PlaceSource,
}

impl RationalPlace {
    pub fn branch(&self, curve: &CurveModel, prec: i64) -> Result<Branch> {
        match &self.source {
            PlaceSource::Affine(a, b) => branch_at(curve, &self.ext, *a, *b, prec),
            PlaceSource::Infinite(pt) => branch_at_infinity(curve, &self.ext, *pt, prec),
            PlaceSource::Declared(place) => declared_branch(curve, &self.ext, place, prec),
        }
    }

    pub fn precision_cap(&self) -> i64 {
        match &self.source {
            PlaceSource::Declared(place) => place.prec,
            _ => BRANCH_PREC_CAP,
        }
    }
}

/// Every place of the nonsingular model rational over the degree-`r`
/// extension of the curve's field.
pub fn rational_places(inst: &CurveInstance, r: u32, parallel: bool) -> Result<Vec<RationalPlace>> {
    let curve = &inst.curve;
    let ext = extension(curve, r)?;
    let deg = ext.degree();
    let emb = embedding(curve.field(), &ext)?;
    let k = curve.field();
    let mut out = Vec::new();
    for pt in affine_points(curve, &ext, parallel)? {
        if !pt.singular {
            out.push(RationalPlace { ext: ext.clone(), source: PlaceSource::Affine(pt.x, pt.y) });
            continue;
        }
        let declared = inst.places.singular.iter().find(|s| {
            let (Ok(a), Ok(b)) = (k.from_coeffs(&s.x), k.from_coeffs(&s.y)) else { return false };
            (emb.apply(a), emb.apply(b)) == (pt.x, pt.y)
        });
        let Some(s) = declared else {
            return Err(Error::UndeclaredSingularity(format!("({}, {})", fmt_elem(&ext, pt.x), fmt_elem(&ext, pt.y))));
        };
        for place in s.places.iter().filter(|p| deg % p.degree == 0) {
            out.push(RationalPlace { ext: ext.clone(), source: PlaceSource::Declared(place.clone()) });
        }
    }
    match &inst.places.infinity {
        Some(places) => {
            for place in places.iter().filter(|p| deg % p.degree == 0) {
                out.push(RationalPlace { ext: ext.clone(), source: PlaceSource::Declared(place.clone()) });
            }
        }
        None => {
            for pt in infinite_points(curve, &ext)? {
                out.push(RationalPlace { ext: ext.clone(), source: PlaceSource::Infinite(pt) });
            }
        }
    }
    Ok(out)
}

/// Orders and, when requested, `v_P(T_(u,m))` at one place.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceData {
    pub center: String,
    pub orders: PointOrders,
    pub v: Option<i64>,
}

impl PlaceData {
    pub fn j(&self) -> &[u32] {
        &self.orders.j.values
    }
}

/// Places keyed by rationality class: class 1 holds the `F_Q`-places, class
/// `r > 1` the `F_(Q^r)`-places that are not `F_Q`-places.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceCensus {
    pub classes: BTreeMap<u32, Vec<PlaceData>>,
    pub with_valuations: bool,
}

impl PlaceCensus {
    pub fn class(&self, r: u32) -> &[PlaceData] {
        self.classes.get(&r).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn all(&self) -> impl Iterator<Item = &PlaceData> {
        self.classes.values().flatten()
    }

    /// Σ v_P over every enumerated place, when valuations were computed.
    pub fn valuation_sum(&self) -> Option<i64> {
        self.all().map(|p| p.v).sum()
    }
}

/// Point data at one place, raising the precision until it suffices. With
/// valuations, the per-point lower bounds are asserted as well.
pub fn place_data(
    m: &Morphism,
    place: &RationalPlace,
    seq: &SequenceData,
    valuations: bool,
) -> Result<PlaceData> {
    let start = initial_precision(m).min(place.precision_cap());
    with_precision(start, place.precision_cap(), |prec| {
        let br = place.branch(&m.curve, prec)?;
        let orders = point_orders(m, &br)?;
        let v = if valuations { Some(valuation_t(m, &br, seq.u, seq.m, &seq.kappa)?) } else { None };
        if let Some(v) = v {
            check_point_bounds(&orders, seq, v)?;
        }
        Ok(PlaceData { center: br.center.clone(), orders, v })
    })
}

/// Enumerates the classes in `levels` (1 is always included).
pub fn place_census(
    inst: &CurveInstance,
    m: &Morphism,
    seq: &SequenceData,
    levels: &[u32],
    valuations: bool,
    parallel: bool,
) -> Result<PlaceCensus> {
    let mut levels: Vec<u32> = levels.iter().copied().chain([1]).collect();
    levels.sort_unstable();
    levels.dedup();
    let mut census = PlaceCensus { classes: BTreeMap::new(), with_valuations: valuations };
    for r in levels {
        let places = rational_places(inst, r, parallel)?;
        let data: Vec<PlaceData> = if parallel {
            places.par_iter().map(|pl| place_data(m, pl, seq, valuations)).collect::<Result<_>>()?
        } else {
            places.iter().map(|pl| place_data(m, pl, seq, valuations)).collect::<Result<_>>()?
        };
        let keep: Vec<PlaceData> = data.into_iter().filter(|d| (r == 1) == d.orders.rational_over(1)).collect();
        census.classes.insert(r, keep);
    }
    Ok(census)
}
