mod common;

use curvebounds::bipoly::BiPoly;
use curvebounds::census::rational_points;
use curvebounds::field::{binom_mod_p, Fe, FieldDesc};
use curvebounds::funcfield::{AlgFunc, CurveModel};
use curvebounds::local::branch_at;
use curvebounds::series::Series;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_poly(k: &FieldDesc, rng: &mut ChaCha8Rng, dx: u32, dy: u32) -> BiPoly {
    let mut terms = Vec::new();
    for i in 0..=dx {
        for j in 0..=dy {
            if rng.gen_bool(0.5) {
                terms.push(((i, j), k.random(rng)));
            }
        }
    }
    BiPoly::from_terms(k, terms)
}

/// A random element of `K`, sometimes with a nontrivial denominator.
fn random_func(c: &CurveModel, rng: &mut ChaCha8Rng) -> AlgFunc {
    let k = c.field();
    let num = c.from_bipoly(&random_poly(k, rng, 3, 2));
    if rng.gen_bool(0.3) {
        let den = c.from_bipoly(&random_poly(k, rng, 2, 0));
        if let Ok(q) = c.div(&num, &den) {
            return q;
        }
    }
    num
}

fn curves() -> Vec<std::sync::Arc<CurveModel>> {
    common::instances().into_iter().map(|i| i.curve.clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_rule(seed in any::<u64>(), i in 0usize..=4, j in 0usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for c in curves() {
            let k = c.field();
            let g = random_func(&c, &mut rng);
            let b = binom_mod_p((i + j) as u64, i as u64, k.characteristic());
            let lhs = c.scale(&c.hasse(&g, i + j).unwrap(), k.from_int(b as i64));
            let rhs = c.hasse(&c.hasse(&g, j).unwrap(), i).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn leibniz_and_linearity(seed in any::<u64>(), r in 0usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for c in curves() {
            let k = c.field();
            let (g, h) = (random_func(&c, &mut rng), random_func(&c, &mut rng));
            let (hg, hh) = (c.hasse_all(&g, r).unwrap(), c.hasse_all(&h, r).unwrap());
            let prod = (0..=r).fold(c.zero(), |acc, i| c.add(&acc, &c.mul(&hg[i], &hh[r - i])));
            prop_assert_eq!(c.hasse(&c.mul(&g, &h), r).unwrap(), prod);
            let (a, b) = (k.random(&mut rng), k.random(&mut rng));
            let comb = c.add(&c.scale(&g, a), &c.scale(&h, b));
            prop_assert_eq!(c.hasse(&comb, r).unwrap(), c.add(&c.scale(&hg[r], a), &c.scale(&hh[r], b)));
        }
    }

    #[test]
    fn hasse_kills_p_powers(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for c in curves() {
            let p = c.field().characteristic();
            let g = random_func(&c, &mut rng);
            let gp = c.pow(&g, p);
            let hs = c.hasse_all(&gp, p as usize - 1).unwrap();
            for (r, h) in hs.iter().enumerate().skip(1) {
                prop_assert!(h.is_zero(), "D^({}) of a p-th power", r);
            }
        }
    }

    #[test]
    fn operation_chains_stay_canonical(seed in any::<u64>(), len in 1usize..=20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for c in curves() {
            let mut a = random_func(&c, &mut rng);
            for _ in 0..len {
                let b = random_func(&c, &mut rng);
                a = match rng.gen_range(0..4) {
                    0 => c.add(&a, &b),
                    1 => c.sub(&a, &b),
                    2 => c.mul(&a, &b),
                    _ => c.div(&a, &b).unwrap_or(a),
                };
                // Keep heights small enough for the chain to stay cheap.
                if a.height() > 40 {
                    a = random_func(&c, &mut rng);
                }
            }
            prop_assert!(c.sub(&a, &a).is_zero());
            let b = random_func(&c, &mut rng);
            prop_assert_eq!(c.sub(&c.add(&a, &b), &b), a);
        }
    }
}

/// `D^(r) y` against the Hasse derivative of the local expansion `y(a + t)`.
#[test]
fn hasse_y_matches_series_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for inst in common::instances() {
        let c = &inst.curve;
        let k = c.field();
        let ext = curvebounds::census::extension(c, 2).unwrap();
        let fy = c.poly().partial_y(k).embed(&curvebounds::field::embedding(k, &ext).unwrap());
        let pts: Vec<(Fe, Fe)> =
            rational_points(c, 2).unwrap().into_iter().filter(|&(a, b)| !fy.eval(&ext, a, b).is_zero()).collect();
        assert!(!pts.is_empty(), "{}", inst.label);
        for _ in 0..3 {
            let (a, b) = pts[rng.gen_range(0..pts.len())];
            for r in 0..=8usize {
                let prec = 2 * r as i64 + 4;
                let br = branch_at(c, &ext, a, b, prec).unwrap();
                let t = Series::from_coeffs(0, vec![a, Fe::ONE], prec);
                assert_eq!(br.x, t, "x is the uniformizer shift");
                let want = br.y.hasse(&ext, r as u64);
                let got = br.eval(&c.hasse_y(r).unwrap()).unwrap();
                let keep = want.prec().min(got.prec());
                assert_eq!(got.truncate(keep), want.truncate(keep), "{} r = {r}", inst.label);
            }
        }
    }
}
