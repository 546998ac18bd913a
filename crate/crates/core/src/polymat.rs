//! Fraction-free linear algebra over `F[x]`.

use crate::field::FieldDesc;
use crate::poly::UniPoly;

/// Determinant by Bareiss elimination; every division is exact.
pub fn det(k: &FieldDesc, mut m: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = m.len();
    if n == 0 {
        return UniPoly::one();
    }
    let mut negate = false;
    let mut prev = UniPoly::one();
    for col in 0..n - 1 {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return UniPoly::zero();
        };
        if piv != col {
            m.swap(piv, col);
            negate = !negate;
        }
        for i in col + 1..n {
            for j in col + 1..n {
                let a = m[i][j].mul(k, &m[col][col]);
                let b = m[i][col].mul(k, &m[col][j]);
                m[i][j] = a.sub(k, &b).div_exact(k, &prev).expect("Bareiss division is exact");
            }
            m[i][col] = UniPoly::zero();
        }
        prev = m[col][col].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg(k)
    } else {
        d
    }
}

/// Solves `m v = b` by Cramer's rule: returns `(numerators, det)` with
/// `v_i = numerators[i] / det`. `det` is zero exactly when `m` is singular.
pub fn solve(k: &FieldDesc, m: &[Vec<UniPoly>], b: &[UniPoly]) -> (Vec<UniPoly>, UniPoly) {
    let d = det(k, m.to_vec());
    if d.is_zero() {
        return (Vec::new(), d);
    }
    let n = m.len();
    let nums = (0..n)
        .map(|c| {
            let mc: Vec<Vec<UniPoly>> = (0..n)
                .map(|r| (0..n).map(|j| if j == c { b[r].clone() } else { m[r][j].clone() }).collect())
                .collect();
            det(k, mc)
        })
        .collect();
    (nums, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, Fe};

    #[test]
    fn small_determinants() {
        let k = make_field(7, 1, None).unwrap();
        let x = UniPoly::x();
        let one = UniPoly::one();
        // [[x, 1], [1, x]] -> x^2 - 1
        let d = det(&k, vec![vec![x.clone(), one.clone()], vec![one.clone(), x.clone()]]);
        assert_eq!(d, UniPoly::from_coeffs(vec![k.from_int(-1), Fe::ZERO, Fe::ONE]));
        // pivot in the second row
        let d = det(&k, vec![vec![UniPoly::zero(), one.clone()], vec![one.clone(), x.clone()]]);
        assert_eq!(d, UniPoly::constant(k.from_int(-1)));
        let (v, d) = solve(&k, &[vec![x.clone(), one.clone()], vec![one.clone(), x.clone()]], &[one.clone(), UniPoly::zero()]);
        // v = (x, -1) / (x^2 - 1)
        assert_eq!(v[0], x);
        assert_eq!(v[1], UniPoly::constant(k.from_int(-1)));
        assert_eq!(d.deg(), Some(2));
    }
}
