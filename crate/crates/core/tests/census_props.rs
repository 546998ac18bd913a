mod common;

use curvebounds::bipoly::BiPoly;
use curvebounds::census::{count_points_with, extension};
use curvebounds::field::{embedding, Fe, FieldDesc};

/// Projective zeros of the homogenized curve by brute force over the whole plane.
fn brute_projective_count(f: &BiPoly, k: &FieldDesc) -> u64 {
    let affine = k.elements().map(|a| k.elements().filter(|&b| f.eval(k, a, b).is_zero()).count() as u64).sum::<u64>();
    // Top form at (x : y : 0): its zeros on y = 1 plus the point (1 : 0 : 0).
    let d = f.total_degree();
    let top = |a: Fe, b: Fe| {
        f.terms().filter(|&(i, j, _)| i + j == d).fold(Fe::ZERO, |acc, (i, j, c)| {
            k.add(acc, k.mul(c, k.mul(k.pow(a, i as u64), k.pow(b, j as u64))))
        })
    };
    let at_infinity = k.elements().filter(|&a| top(a, Fe::ONE).is_zero()).count() as u64 + top(Fe::ONE, Fe::ZERO).is_zero() as u64;
    affine + at_infinity
}

fn sizes(order: u64, cap: u64) -> impl Iterator<Item = u32> {
    (1..=4u32).filter(move |&r| order.checked_pow(r).is_some_and(|s| s <= cap))
}

#[test]
fn parallel_and_serial_counts_agree() {
    for inst in common::instances() {
        for r in sizes(inst.field().order(), 4096) {
            let par = count_points_with(&inst.curve, r, &inst.places, true).unwrap();
            let ser = count_points_with(&inst.curve, r, &inst.places, false).unwrap();
            assert_eq!(par, ser, "{} r = {r}", inst.label);
        }
    }
}

/// On smooth curves every projective point is one place.
#[test]
fn smooth_counts_match_brute_force() {
    let mut seen = 0;
    for inst in common::instances().into_iter().filter(|i| i.smoothness.smooth) {
        for r in sizes(inst.field().order(), 256) {
            let ext = extension(&inst.curve, r).unwrap();
            let f = inst.curve.poly().embed(&embedding(inst.field(), &ext).unwrap());
            let want = brute_projective_count(&f, &ext);
            assert_eq!(count_points_with(&inst.curve, r, &inst.places, false).unwrap(), want, "{} r = {r}", inst.label);
            seen += 1;
        }
    }
    assert!(seen >= 10);
}

/// `|N_r - (Q^r + 1)| <= 2 g sqrt(Q^r)`, checked in integers as `(N_r - Q^r - 1)^2 <= 4 g^2 Q^r`.
#[test]
fn counts_respect_weil() {
    for inst in common::instances() {
        for r in sizes(inst.field().order(), 6561) {
            let n = count_points_with(&inst.curve, r, &inst.places, true).unwrap() as i128;
            let qr = (inst.field().order() as i128).pow(r);
            let g = inst.genus as i128;
            let dev = n - qr - 1;
            assert!(dev * dev <= 4 * g * g * qr, "{} r = {r}: N = {n}", inst.label);
        }
    }
}
