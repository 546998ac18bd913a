//! The TOML curve-spec format: field, curve, morphisms and metadata.

use serde::{Deserialize, Serialize};

use super::{validate_place, CurveInstance, FamilyParams, GenusSource, MorphismDecl};
use crate::bipoly::{BiPoly, BiPolyWire};
use crate::census::{is_smooth, genus_smooth_plane, PlaceMeta, SingularPoint};
use crate::error::{Error, Result};
use crate::field::{make_field_from_spec, FieldSpec};
use crate::funcfield::CurveModel;
use crate::local::DeclaredPlace;

pub const SPEC_SCHEMA: &str = "curvebounds.curve/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpecFile {
    pub schema: String,
    pub field: FieldSpec,
    pub curve: CurveBlock,
    #[serde(default)]
    pub morphisms: Vec<MorphismBlock>,
    pub meta: MetaBlock,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveBlock {
    /// `(i, j, coordinates)` for each term `c x^i y^j`.
    pub terms: BiPolyWire,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismBlock {
    pub name: String,
    pub deg_d: u32,
    pub coords: Vec<BiPolyWire>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaBlock {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default)]
    pub params: FamilyParams,
    pub genus: u64,
    pub genus_source: GenusSource,
    /// Order of the field the curve and morphisms are defined over.
    pub base_order: u64,
    pub u: u32,
    pub m: u32,
    #[serde(default)]
    pub warnings: Vec<String>,
    /// Omitted when the closure is smooth at infinity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infinity: Option<Vec<DeclaredPlace>>,
    #[serde(default)]
    pub singular: Vec<SingularPoint>,
}

impl CurveSpecFile {
    pub fn parse(text: &str) -> Result<CurveSpecFile> {
        let spec: CurveSpecFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if spec.schema != SPEC_SCHEMA {
            return Err(Error::Parse(format!("unknown schema {:?}, expected {SPEC_SCHEMA:?}", spec.schema)));
        }
        Ok(spec)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl CurveInstance {
    pub fn to_spec(&self) -> CurveSpecFile {
        let k = self.field();
        CurveSpecFile {
            schema: SPEC_SCHEMA.into(),
            field: k.spec(),
            curve: CurveBlock { terms: self.curve.poly().to_wire(k) },
            morphisms: self
                .morphisms
                .iter()
                .map(|m| MorphismBlock {
                    name: m.name.clone(),
                    deg_d: m.deg_d,
                    coords: m.coords.iter().map(|c| c.to_wire(k)).collect(),
                })
                .collect(),
            meta: MetaBlock {
                label: self.label.clone(),
                family: self.family.clone(),
                params: self.params.clone(),
                genus: self.genus,
                genus_source: self.genus_source,
                base_order: self.base_order,
                u: self.u,
                m: self.m,
                warnings: self.warnings.clone(),
                infinity: self.places.infinity.clone(),
                singular: self.places.singular.clone(),
            },
        }
    }
}

pub(super) fn load(spec: &CurveSpecFile) -> Result<CurveInstance> {
    let k = make_field_from_spec(&spec.field)?;
    let curve = CurveModel::new(k.clone(), BiPoly::from_wire(&k, &spec.curve.terms)?)?;
    let d = curve.total_degree();
    let meta = &spec.meta;
    let smoothness = is_smooth(&curve)?;
    if smoothness.smooth {
        let g = genus_smooth_plane(d, true)?;
        if meta.genus != g {
            return Err(Error::BadParams(format!("declared genus {} but the smooth model has genus {g}", meta.genus)));
        }
    } else if meta.genus_source == GenusSource::SmoothPlane {
        return Err(Error::NotSmoothCertified);
    }
    let mut morphisms = Vec::new();
    for b in &spec.morphisms {
        let coords = b.coords.iter().map(|w| BiPoly::from_wire(&k, w)).collect::<Result<Vec<_>>>()?;
        morphisms.push(MorphismDecl { name: b.name.clone(), coords, deg_d: b.deg_d });
    }
    if !morphisms.iter().any(|m| m.name == "lines") {
        morphisms.insert(0, super::lines_decl(d));
    }
    let lines = super::lines_decl(d);
    if smoothness.smooth && morphisms.iter().any(|m| m.name == "lines" && m.coords == lines.coords && m.deg_d != d) {
        return Err(Error::BadParams(format!("lines on a smooth curve of degree {d} must have deg_d = {d}")));
    }
    let places = PlaceMeta { infinity: meta.infinity.clone(), singular: meta.singular.clone() };
    for place in places.infinity.iter().flatten().chain(places.singular.iter().flat_map(|s| &s.places)) {
        validate_place(&curve, place)?;
    }
    let inst = CurveInstance {
        label: meta.label.clone(),
        family: meta.family.clone(),
        params: meta.params.clone(),
        curve,
        base_order: meta.base_order,
        morphisms,
        genus: meta.genus,
        genus_source: meta.genus_source,
        places,
        smoothness,
        u: meta.u,
        m: meta.m,
        warnings: meta.warnings.clone(),
    };
    for name in inst.morphism_names() {
        inst.morphism(name)?;
    }
    Ok(inst)
}
