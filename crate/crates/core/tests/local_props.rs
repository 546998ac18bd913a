mod common;

use curvebounds::bounds::rational_places;
use curvebounds::field::{binom_det_mod_p, binom_mod_p, make_field, Fe, FieldDesc};
use curvebounds::local::{initial_precision, point_orders, series_wronskian_valuation_check, with_precision};
use curvebounds::orders::{generic_orders, EngineOptions};
use curvebounds::series::Series;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Poly = Vec<Fe>;

fn poly_mul(k: &FieldDesc, a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Fe::ZERO; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = k.add(out[i + j], k.mul(x, y));
        }
    }
    out
}

fn poly_hasse(k: &FieldDesc, a: &Poly, m: u64) -> Poly {
    let p = k.characteristic();
    a.iter()
        .enumerate()
        .skip(m as usize)
        .map(|(e, &c)| k.mul(c, k.from_int(binom_mod_p(e as u64, m, p) as i64)))
        .collect()
}

/// Determinant of a polynomial matrix by cofactor expansion along the first row.
fn poly_det(k: &FieldDesc, m: &[Vec<Poly>]) -> Poly {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut out: Poly = Vec::new();
    for col in 0..m.len() {
        let minor: Vec<Vec<Poly>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, x)| x.clone()).collect()).collect();
        let mut term = poly_mul(k, &m[0][col], &poly_det(k, &minor));
        if col % 2 == 1 {
            term = term.into_iter().map(|x| k.neg(x)).collect();
        }
        if term.len() > out.len() {
            out.resize(term.len(), Fe::ZERO);
        }
        for (i, x) in term.into_iter().enumerate() {
            out[i] = k.add(out[i], x);
        }
    }
    out
}

fn valuation(a: &Poly) -> Option<i64> {
    a.iter().position(|x| !x.is_zero()).map(|v| v as i64)
}

/// Synthetic polynomials with prescribed leading exponents, checked against a
/// determinant computed exactly over `F[t]`.
#[test]
fn series_wronskian_matches_exact_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (p, h) in [(2u64, 2u32), (3, 1), (5, 1)] {
        let k = make_field(p, h, None).unwrap();
        let mut checked = 0;
        let mut equalities = 0;
        while checked < 200 {
            let size = rng.gen_range(1..=3);
            let mut leads: Vec<u64> = sample(&mut rng, 12, size).into_iter().map(|x| x as u64).collect();
            leads.sort_unstable();
            let mut orders: Vec<u64> = sample(&mut rng, 6, size).into_iter().map(|x| x as u64).collect();
            orders.sort_unstable();
            let deg = 16;
            let polys: Vec<Poly> = leads
                .iter()
                .map(|&j| {
                    (0..=deg)
                        .map(|e| match e.cmp(&(j as usize)) {
                            std::cmp::Ordering::Less => Fe::ZERO,
                            std::cmp::Ordering::Equal => k.random_nonzero(&mut rng),
                            std::cmp::Ordering::Greater => k.random(&mut rng),
                        })
                        .collect()
                })
                .collect();
            let mat: Vec<Vec<Poly>> = polys.iter().map(|z| orders.iter().map(|&m| poly_hasse(&k, z, m)).collect()).collect();
            let Some(want) = valuation(&poly_det(&k, &mat)) else {
                continue;
            };
            let z: Vec<Series> = polys.iter().map(|c| Series::from_coeffs(0, c.clone(), 64)).collect();
            let rep = series_wronskian_valuation_check(&k, &z, &orders).unwrap();
            let bound: i64 = leads.iter().zip(&orders).map(|(&j, &m)| j as i64 - m as i64).sum();
            assert_eq!(rep.valuation, Some(want), "p = {p}, j = {leads:?}, m = {orders:?}");
            assert_eq!(rep.bound, bound);
            assert!(want >= bound && rep.bound_holds);
            let unit = binom_det_mod_p(&leads, &orders, p) != 0;
            assert_eq!(want == bound, unit, "p = {p}, j = {leads:?}, m = {orders:?}");
            assert!(rep.equality_consistent);
            equalities += unit as usize;
            checked += 1;
        }
        assert!(equalities > 0 && equalities < checked, "both outcomes exercised for p = {p}");
    }
}

/// At every rational place the point orders dominate `ε` termwise, start at 0,
/// and do not move when the precision is doubled.
#[test]
fn point_orders_dominate_epsilon_and_are_stable() {
    for inst in common::instances() {
        for name in common::morphisms(&inst) {
            let mm = inst.morphism(&name).unwrap();
            let eps = generic_orders(&mm, &EngineOptions::default()).unwrap().seq.values;
            for r in [1, 2] {
                if inst.curve.field().order().checked_pow(r).is_none_or(|s| s > 6561) {
                    continue;
                }
                for place in rational_places(&inst, r, false).unwrap() {
                    let cap = place.precision_cap();
                    let mut used = 0;
                    let j = with_precision(initial_precision(&mm).min(cap), cap, |prec| {
                        used = prec;
                        point_orders(&mm, &place.branch(&mm.curve, prec)?)
                    })
                    .unwrap()
                    .j
                    .values;
                    assert_eq!(j.len(), eps.len());
                    assert_eq!(j[0], 0, "{} / {name}", inst.label);
                    for (i, (&ji, &ei)) in j.iter().zip(&eps).enumerate() {
                        assert!(ji >= ei, "{} / {name}: j_{i} = {ji} < ε_{i} = {ei}", inst.label);
                    }
                    if 2 * used <= cap {
                        let again = point_orders(&mm, &place.branch(&mm.curve, 2 * used).unwrap()).unwrap().j.values;
                        assert_eq!(again, j, "{} / {name} at precision {}", inst.label, 2 * used);
                    }
                }
            }
        }
    }
}
