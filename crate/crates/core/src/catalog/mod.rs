//! The curve families behind the worked examples, with verified metadata.

mod fmu;
mod specfile;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bipoly::BiPoly;
use crate::census::{is_smooth, genus_smooth_plane, PlaceMeta, Smoothness};
use crate::error::{Error, Result};
use crate::field::{field_of_order, prime_power, Fe, Field, FieldDesc};
use crate::funcfield::CurveModel;
use crate::local::{declared_branch, DeclaredPlace, LaurentWire};
use crate::orders::Morphism;
use crate::poly::UniPoly;
use crate::series::{hensel_lift, Series};

pub use fmu::{f_mu_polynomial, verify_f_mu, FmuPolynomial, FmuReport};
pub use specfile::{CurveSpecFile, MetaBlock, MorphismBlock, SPEC_SCHEMA};

/// Family names accepted by [`make_family`], with their parameters.
pub const FAMILIES: &[(&str, &str)] = &[
    ("fermat", "q d"),
    ("hermitian", "q"),
    ("y_q3", "q"),
    ("norm_trace", "q"),
    ("fermat_half", "q"),
    ("f_mu", "q u m"),
    ("hk_filling", "q a b c"),
    ("total_inflection", "q"),
    ("conic", "q"),
];

/// Parameters of a family. Field elements `a, b, c` are given by their index,
/// i.e. the integer whose base-`p` digits are the coordinates over `F_p`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<u64>,
}

impl FamilyParams {
    pub fn q(q: u64) -> Self {
        FamilyParams { q: Some(q), ..Default::default() }
    }

    fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
        v.ok_or_else(|| Error::BadParams(format!("missing parameter {name}")))
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut push = |n: &str, v: Option<u64>| {
            if let Some(v) = v {
                parts.push(format!("{n}={v}"));
            }
        };
        push("q", self.q);
        push("d", self.d);
        push("u", self.u.map(u64::from));
        push("m", self.m.map(u64::from));
        push("a", self.a);
        push("b", self.b);
        push("c", self.c);
        write!(f, "{}", parts.join(","))
    }
}

/// Where the genus came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenusSource {
    /// `(d-1)(d-2)/2` on a model certified smooth.
    SmoothPlane,
    /// A known value for a family whose plane model is singular.
    Family,
    /// Supplied by a spec file for a singular model.
    Declared,
}

/// A named morphism given by polynomial coordinates, with the degree of its
/// linear series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismDecl {
    pub name: String,
    pub coords: Vec<BiPoly>,
    pub deg_d: u32,
}

#[derive(Clone, Debug)]
pub struct CurveInstance {
    pub label: String,
    pub family: Option<String>,
    pub params: FamilyParams,
    pub curve: Arc<CurveModel>,
    /// Order of the field the curve and its morphisms are defined over.
    pub base_order: u64,
    pub morphisms: Vec<MorphismDecl>,
    pub genus: u64,
    pub genus_source: GenusSource,
    pub places: PlaceMeta,
    pub smoothness: Smoothness,
    /// Designated Frobenius pair.
    pub u: u32,
    pub m: u32,
    pub warnings: Vec<String>,
}

impl CurveInstance {
    pub fn field(&self) -> &Field {
        self.curve.field()
    }

    pub fn degree(&self) -> u32 {
        self.curve.total_degree()
    }

    pub fn morphism_names(&self) -> Vec<&str> {
        self.morphisms.iter().map(|m| m.name.as_str()).collect()
    }

    pub fn morphism(&self, name: &str) -> Result<Morphism> {
        let decl = self
            .morphisms
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| Error::BadParams(format!("{} has no morphism named {name}", self.label)))?;
        Morphism::from_polys(&decl.name, self.curve.clone(), &decl.coords, decl.deg_d, self.base_order)
    }
}

fn lines_decl(d: u32) -> MorphismDecl {
    MorphismDecl { name: "lines".into(), coords: vec![BiPoly::constant(Fe::ONE), BiPoly::x(), BiPoly::y()], deg_d: d }
}

fn conics_decl(d: u32) -> MorphismDecl {
    let mono = |i, j| BiPoly::monomial(Fe::ONE, i, j);
    MorphismDecl {
        name: "conics".into(),
        coords: vec![mono(0, 0), mono(1, 0), mono(0, 1), mono(2, 0), mono(1, 1), mono(0, 2)],
        deg_d: 2 * d,
    }
}

/// Checks that `f(x(t), y(t))` vanishes to the declared precision.
pub fn validate_place(curve: &CurveModel, place: &DeclaredPlace) -> Result<()> {
    let br = declared_branch(curve, curve.field(), place, place.prec)?;
    match br.residual_valuation(curve) {
        None => Ok(()),
        Some(v) => Err(Error::BadParams(format!("declared place {} is off the curve: f has valuation {v}", place.name))),
    }
}

/// Fills genus, smoothness and morphisms, then validates the declared places.
pub(crate) struct Draft {
    pub label: String,
    pub family: Option<String>,
    pub params: FamilyParams,
    pub curve: Arc<CurveModel>,
    pub base_order: u64,
    pub conics: bool,
    pub family_genus: Option<u64>,
    pub places: PlaceMeta,
    pub u: u32,
    pub m: u32,
    pub warnings: Vec<String>,
}

impl Draft {
    fn finish(self) -> Result<CurveInstance> {
        let smoothness = is_smooth(&self.curve)?;
        let d = self.curve.total_degree();
        let (genus, genus_source) = if smoothness.smooth {
            (genus_smooth_plane(d, true)?, GenusSource::SmoothPlane)
        } else {
            match self.family_genus {
                Some(g) => (g, GenusSource::Family),
                None => return Err(Error::NotSmoothCertified),
            }
        };
        for place in self.places.infinity.iter().flatten().chain(self.places.singular.iter().flat_map(|s| &s.places)) {
            validate_place(&self.curve, place)?;
        }
        let mut morphisms = vec![lines_decl(d)];
        if self.conics {
            morphisms.push(conics_decl(d));
        }
        Ok(CurveInstance {
            label: self.label,
            family: self.family,
            params: self.params,
            curve: self.curve,
            base_order: self.base_order,
            morphisms,
            genus,
            genus_source,
            places: self.places,
            smoothness,
            u: self.u,
            m: self.m,
            warnings: self.warnings,
        })
    }
}

fn elem(k: &FieldDesc, idx: u64, name: &str) -> Result<Fe> {
    if idx >= k.order() {
        return Err(Error::BadParams(format!("{name} = {idx} is not an element index of F_{}", k.order())));
    }
    let p = k.characteristic();
    let mut digits = Vec::new();
    let mut r = idx;
    while r > 0 {
        digits.push(r % p);
        r /= p;
    }
    k.from_coeffs(&digits)
}

fn check_q(q: u64) -> Result<(u64, u32)> {
    prime_power(q).ok_or_else(|| Error::BadParams(format!("q = {q} is not a prime power")))
}

fn pow_u32(q: u64, e: u32) -> Result<u64> {
    q.checked_pow(e).ok_or_else(|| Error::BadParams(format!("{q}^{e} overflows")))
}

fn draft(family: &str, params: &FamilyParams, curve: Arc<CurveModel>, base_order: u64) -> Draft {
    Draft {
        label: format!("{family}({params})"),
        family: Some(family.to_string()),
        params: params.clone(),
        curve,
        base_order,
        conics: false,
        family_genus: None,
        places: PlaceMeta::default(),
        u: 1,
        m: 2,
        warnings: Vec::new(),
    }
}

/// Builds a catalog curve from its family name and parameters.
pub fn make_family(name: &str, params: &FamilyParams) -> Result<CurveInstance> {
    let q = FamilyParams::need(params.q, "q")?;
    let (p, _) = check_q(q)?;
    let terms = |k: &FieldDesc, t: &[(u32, u32, i64)]| BiPoly::from_int_terms(k, t);
    match name {
        "fermat" => {
            let d = FamilyParams::need(params.d, "d")?;
            if d < 2 || d % p == 0 || d > u32::MAX as u64 {
                return Err(Error::BadParams(format!("fermat needs d >= 2 prime to p, got d = {d}")));
            }
            let d = d as u32;
            let k = field_of_order(q)?;
            let curve = CurveModel::new(k.clone(), terms(&k, &[(d, 0, 1), (0, d, 1), (0, 0, 1)]))?;
            draft(name, params, curve, q).finish()
        }
        "hermitian" => {
            let qq = pow_u32(q, 2)?;
            let k = field_of_order(qq)?;
            let e = q as u32 + 1;
            let curve = CurveModel::new(k.clone(), terms(&k, &[(e, 0, 1), (0, e, 1), (0, 0, -1)]))?;
            draft(name, params, curve, qq).finish()
        }
        "y_q3" => {
            let qq = pow_u32(q, 3)?;
            let k = field_of_order(qq)?;
            let e = (q * q + q + 1) as u32;
            let curve = CurveModel::new(k.clone(), terms(&k, &[(e, 0, 1), (0, e, 1), (0, 0, -1)]))?;
            draft(name, params, curve, qq).finish()
        }
        "norm_trace" => norm_trace(params, q),
        "fermat_half" => {
            if p == 2 {
                return Err(Error::BadParams("fermat_half needs q odd".into()));
            }
            if q % 5 == 0 {
                return Err(Error::BadParams("fermat_half needs q not divisible by 5".into()));
            }
            let qq = pow_u32(q, 2)?;
            let k = field_of_order(qq)?;
            let e = q.div_ceil(2) as u32;
            let curve = CurveModel::new(k.clone(), terms(&k, &[(e, 0, 1), (0, e, 1), (0, 0, -1)]))?;
            let mut dr = draft(name, params, curve, qq);
            // On the conic q = 3 the six conic monomials are dependent.
            dr.conics = e > 2;
            dr.finish()
        }
        "f_mu" => {
            let u = FamilyParams::need(params.u, "u")?;
            let m = FamilyParams::need(params.m, "m")?;
            let k = field_of_order(q)?;
            match f_mu_polynomial(&k, q, u, m)? {
                FmuPolynomial::Degenerate => {
                    Err(Error::BadParams(format!("f_mu({q}, {u}, {m}) is degenerate: numerator equals denominator")))
                }
                FmuPolynomial::Curve(f) => {
                    let curve = CurveModel::new(k, f)?;
                    let mut dr = draft(name, params, curve, q);
                    dr.u = u;
                    dr.m = m;
                    dr.finish()
                }
            }
        }
        "hk_filling" => {
            let k = field_of_order(q)?;
            let a = elem(&k, FamilyParams::need(params.a, "a")?, "a")?;
            let b = elem(&k, FamilyParams::need(params.b, "b")?, "b")?;
            let c = elem(&k, FamilyParams::need(params.c, "c")?, "c")?;
            // t^3 - (c t^2 + b t + a) is irreducible iff it has no root in F_q
            let cubic = UniPoly::from_coeffs(vec![k.neg(a), k.neg(b), k.neg(c), Fe::ONE]);
            if !cubic.roots(&k).is_empty() {
                return Err(Error::BadParams("t^3 - (c t^2 + b t + a) is reducible over F_q".into()));
            }
            let e = q as u32;
            let one = Fe::ONE;
            let m1 = k.neg(one);
            let mut f = BiPoly::from_terms(&k, [((0, e + 1), one), ((0, 2), m1), ((1, 0), one), ((e, 0), m1)]);
            // (ax + by + c)(x^q y - x y^q)
            let lin = BiPoly::from_terms(&k, [((1, 0), a), ((0, 1), b), ((0, 0), c)]);
            let wedge = BiPoly::from_terms(&k, [((e, 1), one), ((1, e), m1)]);
            f = f.add(&k, &lin.mul(&k, &wedge));
            let curve = CurveModel::new(k, f)?;
            draft(name, params, curve, q).finish()
        }
        "total_inflection" => {
            let k = field_of_order(q)?;
            let e = q as u32;
            let curve = CurveModel::new(k.clone(), terms(&k, &[(e + 1, 0, 1), (2, 0, -1), (0, e, 1), (0, 1, -1)]))?;
            draft(name, params, curve, q).finish()
        }
        "conic" => {
            let k = field_of_order(q)?;
            let curve = CurveModel::new(k.clone(), terms(&k, &[(0, 1, 1), (2, 0, -1)]))?;
            draft(name, params, curve, q).finish()
        }
        _ => Err(Error::BadParams(format!("unknown family {name}"))),
    }
}

/// Precision, in powers of the uniformizer, of the declared place at infinity
/// of the norm-trace curve.
pub const NORM_TRACE_PREC: i64 = 256;

/// `x^N = y^(q^2) + y^q + y` over `F_(q^3)` with `N = q^2 + q + 1`. The model
/// is singular at `(0 : 1 : 0)`, which carries a single rational place.
fn norm_trace(params: &FamilyParams, q: u64) -> Result<CurveInstance> {
    let qq = pow_u32(q, 3)?;
    let k = field_of_order(qq)?;
    let (q2, n) = ((q * q) as u32, (q * q + q + 1) as u32);
    let f = BiPoly::from_int_terms(&k, &[(n, 0, 1), (0, q2, -1), (0, q as u32, -1), (0, 1, -1)]);
    let curve = CurveModel::new(k.clone(), f)?;
    let place = norm_trace_place(&k, q)?;
    let mut dr = draft("norm_trace", params, curve, qq);
    dr.family_genus = Some((q * q + q) * (q * q - 1) / 2);
    dr.places = PlaceMeta { infinity: Some(vec![place]), singular: Vec::new() };
    dr.finish()
}

/// With `y = t^(-N)`, `x = t^(-q^2) w` where `w^N = 1 + t^(N(q^2-q)) + t^(N(q^2-1))`
/// and `w(0) = 1`; `gcd(N, q^2) = 1` makes `t` a uniformizer.
fn norm_trace_place(k: &Field, q: u64) -> Result<DeclaredPlace> {
    let (q2, n) = ((q * q) as i64, (q * q + q + 1) as i64);
    let wprec = NORM_TRACE_PREC + q2;
    let mut g = vec![Fe::ZERO; wprec as usize];
    g[0] = Fe::ONE;
    for e in [n * (q2 - q as i64), n * (q2 - 1)] {
        if e < wprec {
            g[e as usize] = k.add(g[e as usize], Fe::ONE);
        }
    }
    let g = Series::from_coeffs(0, g, wprec);
    let mut coeffs = vec![Series::zero(wprec); n as usize + 1];
    coeffs[0] = g.neg(k);
    coeffs[n as usize] = Series::constant(Fe::ONE, wprec);
    let w = hensel_lift(k, &coeffs, Fe::ONE, wprec)?;
    let x = w.shift(-q2);
    let y = Series::monomial(Fe::ONE, -n, NORM_TRACE_PREC);
    Ok(DeclaredPlace {
        name: "(0 : 1 : 0)".into(),
        degree: 1,
        x: LaurentWire::from_series(k, &x),
        y: LaurentWire::from_series(k, &y),
        prec: NORM_TRACE_PREC,
    })
}

/// The curve from a spec file, with its metadata re-validated.
pub fn from_spec(spec: &CurveSpecFile) -> Result<CurveInstance> {
    specfile::load(spec)
}
