//! Hasse derivatives with respect to the separating variable `x`.

use super::{AlgFunc, CurveModel};
use crate::error::Result;
use crate::poly::UniPoly;

impl CurveModel {
    /// Makes sure rows `0..=s` of the table `H[s][j] = D^(s)(y^j)`, `j <= D`, exist.
    fn ensure_hasse_rows(&self, s: usize) -> Result<()> {
        let d = self.deg_y;
        let k = self.k();
        let mut h = self.hasse_cache.lock().unwrap();
        if h.is_empty() {
            let mut row = vec![self.one()];
            for j in 1..=d {
                row.push(self.mul(&row[j - 1], &self.y));
            }
            h.push(row);
        }
        if d == 1 {
            // the only basis element is 1, whose higher derivatives vanish
            while h.len() <= s {
                h.push(vec![self.zero(), self.zero()]);
            }
            return Ok(());
        }
        let fy_inv = if h.len() <= s { Some(self.fy_inv()?) } else { None };
        while h.len() <= s {
            let s = h.len();
            // P_j collects the part of D^(s)(y^j) not involving D^(s) y
            let mut p = vec![self.zero(), self.zero()];
            for j in 2..=d {
                let mut acc = self.mul(&self.y, &p[j - 1]);
                for a in 1..s {
                    acc = self.add(&acc, &self.mul(&h[a][1], &h[s - a][j - 1]));
                }
                p.push(acc);
            }
            let mut rest = self.zero();
            for (j, c) in self.fc.iter().enumerate() {
                if !c.is_zero() && j >= 1 {
                    rest = self.add(&rest, &self.scale_poly(&p[j], c));
                }
                for a in 1..=s {
                    let dc = c.hasse(k, a);
                    if !dc.is_zero() {
                        rest = self.add(&rest, &self.scale_poly(&h[s - a][j], &dc));
                    }
                }
            }
            let dy = self.neg(&self.mul(&rest, fy_inv.as_ref().unwrap()));
            let mut row = vec![self.zero()];
            for j in 1..=d {
                let jj = k.from_int(j as i64);
                let lin = if jj.is_zero() { self.zero() } else { self.scale(&self.mul(&h[0][j - 1], &dy), jj) };
                row.push(self.add(&p[j], &lin));
            }
            h.push(row);
        }
        Ok(())
    }

    /// `D^(s) y`.
    pub fn hasse_y(&self, s: usize) -> Result<AlgFunc> {
        if self.deg_y == 1 {
            return Ok(self.hasse_all(&self.y, s)?.pop().unwrap());
        }
        self.ensure_hasse_rows(s)?;
        Ok(self.hasse_cache.lock().unwrap()[s][1].clone())
    }

    /// `[D^(0) g, D^(1) g, ..., D^(r) g]`.
    pub fn hasse_all(&self, g: &AlgFunc, r: usize) -> Result<Vec<AlgFunc>> {
        let k = self.k();
        self.ensure_hasse_rows(r)?;
        let h = self.hasse_cache.lock().unwrap().clone();
        // G = g * den has polynomial coordinates, so D^(c) G follows from Leibniz
        let poly_hasse = |c: usize| -> AlgFunc {
            let mut acc = self.zero();
            for (j, n) in g.num.iter().enumerate() {
                if n.is_zero() {
                    continue;
                }
                for e in 0..=c {
                    let dn = n.hasse(k, c - e);
                    if !dn.is_zero() && !h[e][j].is_zero() {
                        acc = self.add(&acc, &self.scale_poly(&h[e][j], &dn));
                    }
                }
            }
            acc
        };
        let den = &g.den;
        let den_hasse: Vec<UniPoly> = (0..=r).map(|a| den.hasse(k, a)).collect();
        let mut out: Vec<AlgFunc> = Vec::with_capacity(r + 1);
        for c in 0..=r {
            // den * D^(c) g = D^(c) G - Σ_{a>=1} D^(a) den * D^(c-a) g
            let mut acc = poly_hasse(c);
            for a in 1..=c {
                if !den_hasse[a].is_zero() {
                    acc = self.sub(&acc, &self.scale_poly(&out[c - a], &den_hasse[a]));
                }
            }
            out.push(self.scale_ratfun(&acc, &UniPoly::one(), den));
        }
        Ok(out)
    }

    /// `D^(r) g`.
    pub fn hasse(&self, g: &AlgFunc, r: usize) -> Result<AlgFunc> {
        Ok(self.hasse_all(g, r)?.pop().unwrap())
    }
}
