mod common;

use curvebounds::catalog::{make_family, validate_place, verify_f_mu, FamilyParams, GenusSource};
use curvebounds::census::extension;
use curvebounds::field::embedding;
use curvebounds::orders::{kappa_orders, EngineOptions};
use curvebounds::Error;

#[test]
fn declared_places_lie_on_their_curves() {
    let mut seen = 0;
    for inst in common::instances() {
        let declared = inst.places.infinity.iter().flatten().chain(inst.places.singular.iter().flat_map(|s| &s.places));
        for place in declared {
            validate_place(&inst.curve, place).unwrap_or_else(|e| panic!("{} {}: {e}", inst.label, place.name));
            seen += 1;
        }
    }
    assert!(seen > 0);
}

/// Smooth models carry the plane genus, and no small extension shows a singular point.
#[test]
fn smooth_models_have_plane_genus() {
    for inst in common::instances() {
        let d = inst.curve.total_degree() as u64;
        if inst.smoothness.smooth {
            assert_eq!(inst.genus_source, GenusSource::SmoothPlane, "{}", inst.label);
            assert_eq!(inst.genus, (d - 1) * (d - 2) / 2, "{}", inst.label);
            for r in (1..=3).filter(|&r| inst.field().order().pow(r) <= 256) {
                let ext = extension(&inst.curve, r).unwrap();
                let f = inst.curve.poly().embed(&embedding(inst.field(), &ext).unwrap());
                let (fx, fy) = (f.partial_x(&ext), f.partial_y(&ext));
                for a in ext.elements() {
                    for b in ext.elements() {
                        let sing = [&f, &fx, &fy].iter().all(|g| g.eval(&ext, a, b).is_zero());
                        assert!(!sing, "{} singular over degree {r}", inst.label);
                    }
                }
            }
        } else {
            assert!(inst.genus < (d - 1) * (d - 2) / 2, "{}: singularities drop the genus", inst.label);
        }
    }
}

/// The twisted curves have no rational points and `κ_0 = q^u`.
#[test]
fn f_mu_kappa_starts_at_q_to_the_u() {
    let mut built = 0;
    for (q, u, m) in [(2u64, 1u32, 2u32), (2, 1, 3), (2, 2, 3), (3, 1, 2), (3, 1, 3), (2, 1, 4)] {
        // Some parameter choices collapse the polynomial or leave a singular model;
        // those are rejected up front.
        let inst = match make_family("f_mu", &FamilyParams { u: Some(u), m: Some(m), ..FamilyParams::q(q) }) {
            Ok(inst) => inst,
            Err(Error::BadParams(_) | Error::NotSmoothCertified) => continue,
            Err(e) => panic!("f_mu({q},{u},{m}): {e}"),
        };
        built += 1;
        let lines = inst.morphism("lines").unwrap();
        let kappa = kappa_orders(&lines, u, m, &EngineOptions::default()).unwrap().seq;
        assert_eq!(kappa.get(0) as u64, q.pow(u), "f_mu({q},{u},{m})");
        let rep = verify_f_mu(&inst).unwrap();
        assert!(rep.all_hold(), "f_mu({q},{u},{m}): {:?}", rep.checks);
    }
    assert!(built >= 2, "only {built} f_mu instances");
}
