use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Morphism, RankOracle, RowSpec};
use crate::error::{Error, Result};
use crate::field::{embedding, make_field, Fe, Field, FieldDesc};
use crate::local::branch_at;

/// Degree over the prime field of the sampling extension: the least multiple
/// of `h` giving at least `2^32` elements.
pub(crate) fn sampling_degree(p: u64, h: u32) -> u32 {
    let mut deg = h;
    while (p as u128).pow(deg) < 1u128 << 32 {
        deg += h;
    }
    deg
}

/// One random place: the coordinates of the morphism expanded in `t = x - a`.
struct Sample {
    coeffs: Vec<Vec<Fe>>,
}

/// Rank test by evaluation at random places over a large extension.
///
/// A set of rows is independent over `K` as soon as one sample gives a
/// nonsingular evaluated matrix, so acceptance is certain. Rejection means
/// every sample was singular, which is wrong with probability about
/// `(deg / |L|)^samples`.
pub struct ScreenOracle<'a> {
    m: &'a Morphism,
    big: Field,
    samples: Vec<Sample>,
    rows: Vec<RowSpec>,
}

impl<'a> ScreenOracle<'a> {
    pub fn new(m: &'a Morphism, seed: u64, count: usize) -> Result<ScreenOracle<'a>> {
        let curve = &m.curve;
        let k = curve.field();
        let h = sampling_degree(k.characteristic(), k.degree());
        let big = make_field(k.characteristic(), h, None)?;
        let emb = embedding(k, &big)?;
        let f = curve.poly().embed(&emb);
        let fy = f.partial_y(&big);
        let lc = curve.leading_coeff().embed(&emb);
        let dens: Vec<_> = m.coords.iter().map(|g| g.denominator().embed(&emb)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let prec = m.deg_d as i64 + 2;
        let mut samples = Vec::with_capacity(count);
        let mut tries = 0;
        while samples.len() < count {
            tries += 1;
            if tries > 200 * count {
                return Err(Error::BadParams("could not find sampling places".into()));
            }
            let a = big.random(&mut rng);
            if lc.eval(&big, a).is_zero() || dens.iter().any(|d| d.eval(&big, a).is_zero()) {
                continue;
            }
            let roots = f.eval_x(&big, a).roots(&big);
            let Some(&b) = roots.iter().find(|&&b| !fy.eval(&big, a, b).is_zero()) else {
                continue;
            };
            let br = branch_at(curve, &big, a, b, prec)?;
            let coeffs = m
                .coords
                .iter()
                .map(|g| {
                    let s = br.eval(g)?;
                    Ok((0..=m.deg_d as i64).map(|e| s.coeff(e).expect("sample precision")).collect())
                })
                .collect::<Result<Vec<Vec<Fe>>>>()?;
            samples.push(Sample { coeffs });
        }
        Ok(ScreenOracle { m, big, samples, rows: Vec::new() })
    }

    fn eval_row(&self, s: &Sample, spec: RowSpec) -> Vec<Fe> {
        let k: &FieldDesc = &self.big;
        match spec {
            RowSpec::Hasse(e) => s.coeffs.iter().map(|c| c[e as usize]).collect(),
            RowSpec::Frob(j) => {
                let steps = (self.m.base_exponent() * j) % k.degree();
                s.coeffs.iter().map(|c| k.frob(c[0], steps)).collect()
            }
        }
    }
}

pub(crate) fn rank(k: &FieldDesc, mut m: Vec<Vec<Fe>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = k.inv(m[r][c]).unwrap();
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = k.mul(m[i][c], inv);
            for j in c..cols {
                m[i][j] = k.sub(m[i][j], k.mul(f, m[r][j]));
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

impl RankOracle for ScreenOracle<'_> {
    fn try_push(&mut self, spec: RowSpec) -> Result<bool> {
        let want = self.rows.len() + 1;
        let independent = self.samples.iter().any(|s| {
            let mat: Vec<Vec<Fe>> = self.rows.iter().chain(std::iter::once(&spec)).map(|&r| self.eval_row(s, r)).collect();
            rank(&self.big, mat) == want
        });
        if independent {
            self.rows.push(spec);
        }
        Ok(independent)
    }
}
