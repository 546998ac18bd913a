mod common;

use curvebounds::field::{Fe, FieldDesc};
use curvebounds::orders::{
    classicality_report, frobenius_orders, generic_orders, kappa_orders, rows_dependent, wronskian_a, EngineOptions,
    Morphism, RankMode, RowSpec, AUTO_EXACT_LIMIT,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn exact() -> EngineOptions {
    EngineOptions { mode: RankMode::Exact, ..EngineOptions::default() }
}

/// Determinant over the field by elimination; the oracle for `det(A)`.
fn det(k: &FieldDesc, mut a: Vec<Vec<Fe>>) -> Fe {
    let n = a.len();
    let mut d = Fe::ONE;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Fe::ZERO;
        };
        if piv != col {
            a.swap(piv, col);
            d = k.neg(d);
        }
        d = k.mul(d, a[col][col]);
        let inv = k.inv(a[col][col]).unwrap();
        for r in col + 1..n {
            let f = k.mul(a[r][col], inv);
            for c in col..n {
                let t = k.mul(f, a[col][c]);
                a[r][c] = k.sub(a[r][c], t);
            }
        }
    }
    d
}

/// Elements of `F_Q` inside the curve's field, where `Q` is the base order.
fn base_elements(m: &Morphism) -> Vec<Fe> {
    let k = m.curve.field();
    k.elements().filter(|&a| k.pow(a, m.base_order) == a).collect()
}

fn all_morphisms() -> Vec<(String, u32, u32, Morphism)> {
    let mut out = Vec::new();
    for inst in common::instances() {
        for name in common::morphisms(&inst) {
            let mm = inst.morphism(&name).unwrap();
            out.push((format!("{} / {name}", inst.label), inst.u, inst.m, mm));
        }
    }
    out
}

/// Seeds whose exact rows stay cheap.
fn cheap(mm: &Morphism, seeds: &[RowSpec]) -> bool {
    seeds.iter().all(|s| match s {
        RowSpec::Frob(k) => mm.frob_exponent(*k) <= AUTO_EXACT_LIMIT,
        RowSpec::Hasse(_) => true,
    })
}

/// Every order is the least admissible one: each skipped value makes the rows dependent.
#[test]
fn order_sequences_are_minimal() {
    for (label, u, m, mm) in all_morphisms() {
        let cases: Vec<(Vec<RowSpec>, Vec<u32>)> = vec![
            (vec![], generic_orders(&mm, &exact()).unwrap().seq.values),
            (vec![RowSpec::Frob(u)], frobenius_orders(&mm, u, &EngineOptions::default()).unwrap().seq.values),
            (vec![RowSpec::Frob(m), RowSpec::Frob(u)], kappa_orders(&mm, u, m, &EngineOptions::default()).unwrap().seq.values),
        ];
        for (seeds, seq) in cases {
            if !cheap(&mm, &seeds) {
                continue;
            }
            assert!(!rows_dependent(&mm, &seeds, &seq, &exact()).unwrap(), "{label}: {seeds:?} {seq:?} independent");
            for i in 0..seq.len() {
                let lo = if i == 0 { 0 } else { seq[i - 1] + 1 };
                for skipped in lo..seq[i] {
                    let mut rows = seq[..i].to_vec();
                    rows.push(skipped);
                    assert!(rows_dependent(&mm, &seeds, &rows, &exact()).unwrap(), "{label}: {seeds:?} skipped {skipped}");
                }
            }
        }
    }
}

/// `κ` sits inside both `ν` and `μ`, the Frobenius orders sit inside `ε`, and all
/// structural relations hold on every instance.
#[test]
fn set_relations_hold_everywhere() {
    for (label, u, m, mm) in all_morphisms() {
        let rep = classicality_report(&mm, u, m, &EngineOptions::default()).unwrap_or_else(|e| panic!("{label}: {e}"));
        assert!(rep.all_hold(), "{label}");
        let (e, v, w, k) = (&rep.epsilon.seq.values, &rep.nu.seq.values, &rep.mu.seq.values, &rep.kappa.seq.values);
        assert_eq!((e.len(), v.len(), w.len(), k.len()), (rep.n + 1, rep.n, rep.n, rep.n - 1), "{label}");
        for x in k {
            assert!(v.contains(x) && w.contains(x), "{label}: κ ⊆ ν ∩ μ");
        }
        for x in v.iter().chain(w) {
            assert!(e.contains(x), "{label}: ν, μ ⊆ ε");
        }
        assert_eq!(e[0], 0, "{label}");
        assert_eq!(v[0], 0, "{label}");
        assert_eq!(rep.dropped_from_nu.len(), 1, "{label}");
        assert_eq!(rep.dropped_from_mu.len(), 1, "{label}");
    }
}

/// The rank-decision modes agree on every sequence where exact rows are affordable.
#[test]
fn screen_agrees_with_exact() {
    for (label, u, m, mm) in all_morphisms() {
        for seed in [1u64, 2, 3] {
            let screen = EngineOptions { mode: RankMode::Screen, seed, samples: 3 };
            assert_eq!(
                generic_orders(&mm, &screen).unwrap().seq,
                generic_orders(&mm, &exact()).unwrap().seq,
                "{label} ε seed {seed}"
            );
            for r in [u, m] {
                if mm.frob_exponent(r) <= AUTO_EXACT_LIMIT {
                    assert_eq!(
                        frobenius_orders(&mm, r, &screen).unwrap().seq,
                        frobenius_orders(&mm, r, &exact()).unwrap().seq,
                        "{label} ν_{r} seed {seed}"
                    );
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// An invertible change of coordinates over `F_Q` keeps every order sequence
    /// and multiplies the Wronskian `A` by `det(A)`.
    #[test]
    fn gl_invariance(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (label, u, m, mm) in all_morphisms() {
            // Degree 8 over F_81 takes minutes per transformed morphism.
            if mm.frob_exponent(m) > AUTO_EXACT_LIMIT || mm.curve.total_degree() > 6 {
                continue;
            }
            let k = mm.curve.field();
            let pool = base_elements(&mm);
            let n1 = mm.n() + 1;
            let (a, d) = loop {
                let a: Vec<Vec<Fe>> = (0..n1).map(|_| (0..n1).map(|_| pool[rng.gen_range(0..pool.len())]).collect()).collect();
                let d = det(k, a.clone());
                if !d.is_zero() {
                    break (a, d);
                }
            };
            let tm = mm.transformed(&a);
            let opts = EngineOptions::default();
            let before = classicality_report(&mm, u, m, &opts).unwrap();
            let after = classicality_report(&tm, u, m, &opts).unwrap();
            prop_assert_eq!(&before.epsilon.seq, &after.epsilon.seq, "{}", label);
            prop_assert_eq!(&before.nu.seq, &after.nu.seq, "{}", label);
            prop_assert_eq!(&before.mu.seq, &after.mu.seq, "{}", label);
            prop_assert_eq!(&before.kappa.seq, &after.kappa.seq, "{}", label);
            let rho = &before.kappa.seq.values;
            let w0 = wronskian_a(&mm, u, m, rho).unwrap();
            let w1 = wronskian_a(&tm, u, m, rho).unwrap();
            prop_assert_eq!(w1, mm.curve.scale(&w0, d), "{}", label);
        }
    }
}
