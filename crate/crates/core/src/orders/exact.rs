use super::{Morphism, RankOracle, RowSpec};
use crate::error::Result;
use crate::funcfield::{AlgFunc, CurveModel};

/// Row echelon form over `K` with rows normalized to a leading 1.
pub struct ExactOracle<'a> {
    m: &'a Morphism,
    basis: Vec<(usize, Vec<AlgFunc>)>,
    hasse: Vec<Vec<AlgFunc>>,
}

impl<'a> ExactOracle<'a> {
    pub fn new(m: &'a Morphism) -> ExactOracle<'a> {
        ExactOracle { m, basis: Vec::new(), hasse: Vec::new() }
    }

    fn row(&mut self, spec: RowSpec) -> Result<Vec<AlgFunc>> {
        let c = &self.m.curve;
        match spec {
            RowSpec::Frob(k) => Ok(self.m.coords.iter().map(|g| c.qpower(g, k, self.m.base_order)).collect()),
            RowSpec::Hasse(e) => {
                let e = e as usize;
                if self.hasse.first().is_none_or(|h| h.len() <= e) {
                    let top = e.max(self.m.deg_d as usize);
                    self.hasse = self.m.coords.iter().map(|g| c.hasse_all(g, top)).collect::<Result<_>>()?;
                }
                Ok(self.hasse.iter().map(|h| h[e].clone()).collect())
            }
        }
    }
}

fn reduce(c: &CurveModel, basis: &[(usize, Vec<AlgFunc>)], mut row: Vec<AlgFunc>) -> Vec<AlgFunc> {
    for (piv, b) in basis {
        let a = row[*piv].clone();
        if a.is_zero() {
            continue;
        }
        for (r, bv) in row.iter_mut().zip(b) {
            if !bv.is_zero() {
                *r = c.sub(r, &c.mul(&a, bv));
            }
        }
    }
    row
}

impl RankOracle for ExactOracle<'_> {
    fn try_push(&mut self, spec: RowSpec) -> Result<bool> {
        let row = self.row(spec)?;
        let c = &self.m.curve;
        let row = reduce(c, &self.basis, row);
        let Some(piv) = row.iter().position(|a| !a.is_zero()) else {
            return Ok(false);
        };
        let inv = c.inv(&row[piv])?;
        let row: Vec<AlgFunc> = row.iter().map(|a| c.mul(a, &inv)).collect();
        // keep the basis fully reduced so later reductions stay consistent
        for (_, b) in self.basis.iter_mut() {
            let a = b[piv].clone();
            if !a.is_zero() {
                for (bv, rv) in b.iter_mut().zip(&row) {
                    *bv = c.sub(bv, &c.mul(&a, rv));
                }
            }
        }
        self.basis.push((piv, row));
        Ok(true)
    }
}

/// Determinant over `K` by Gaussian elimination.
pub fn kdet(c: &CurveModel, mut m: Vec<Vec<AlgFunc>>) -> Result<AlgFunc> {
    let n = m.len();
    let mut det = c.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Ok(c.zero());
        };
        if piv != col {
            m.swap(piv, col);
            det = c.neg(&det);
        }
        det = c.mul(&det, &m[col][col]);
        let inv = c.inv(&m[col][col])?;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = c.mul(&m[r][col], &inv);
            for j in col..n {
                let t = c.mul(&factor, &m[col][j]);
                m[r][j] = c.sub(&m[r][j], &t);
            }
        }
    }
    Ok(det)
}
