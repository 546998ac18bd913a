#![allow(dead_code)]

use curvebounds::catalog::{make_family, CurveInstance, FamilyParams};

fn p(q: u64) -> FamilyParams {
    FamilyParams::q(q)
}

/// A small instance of every catalog family, each with its designated pair.
pub fn instances() -> Vec<CurveInstance> {
    let list: Vec<(&str, FamilyParams)> = vec![
        ("fermat", FamilyParams { d: Some(3), ..p(4) }),
        ("fermat", FamilyParams { d: Some(4), ..p(5) }),
        ("fermat", FamilyParams { d: Some(8), ..p(9) }),
        ("hermitian", p(2)),
        ("hermitian", p(3)),
        ("y_q3", p(2)),
        ("norm_trace", p(2)),
        ("fermat_half", p(3)),
        ("f_mu", FamilyParams { u: Some(1), m: Some(3), ..p(2) }),
        ("hk_filling", FamilyParams { a: Some(1), b: Some(1), c: Some(0), ..p(2) }),
        ("total_inflection", p(2)),
        ("total_inflection", p(3)),
        ("conic", p(2)),
        ("conic", p(5)),
    ];
    list.into_iter().map(|(name, params)| make_family(name, &params).unwrap()).collect()
}

/// Instances with their morphisms: `lines` everywhere, `conics` where declared.
pub fn morphisms(inst: &CurveInstance) -> Vec<String> {
    inst.morphism_names().into_iter().map(|s| s.to_string()).collect()
}
