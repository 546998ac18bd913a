//! Sparse bivariate polynomials `Σ c_ij x^i y^j`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Embedding, Fe, FieldDesc};
use crate::poly::UniPoly;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Fe>,
}

/// Wire form of one term: `(i, j, coordinates of c_ij over F_p)`.
pub type Triple = (u32, u32, Vec<u64>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BiPolyWire(pub Vec<Triple>);

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(a: Fe) -> Self {
        Self::monomial(a, 0, 0)
    }

    pub fn monomial(a: Fe, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !a.is_zero() {
            terms.insert((i, j), a);
        }
        BiPoly { terms }
    }

    pub fn x() -> Self {
        Self::monomial(Fe::ONE, 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Fe::ONE, 0, 1)
    }

    /// Builds from `(i, j, c)` terms with integer coefficients reduced mod `p`.
    pub fn from_int_terms(k: &FieldDesc, terms: &[(u32, u32, i64)]) -> Self {
        let mut out = Self::zero();
        for &(i, j, c) in terms {
            out.add_term(k, i, j, k.from_int(c));
        }
        out
    }

    pub fn from_terms(k: &FieldDesc, terms: impl IntoIterator<Item = ((u32, u32), Fe)>) -> Self {
        let mut out = Self::zero();
        for ((i, j), c) in terms {
            out.add_term(k, i, j, c);
        }
        out
    }

    pub fn add_term(&mut self, k: &FieldDesc, i: u32, j: u32, c: Fe) {
        let e = self.terms.entry((i, j)).or_insert(Fe::ZERO);
        *e = k.add(*e, c);
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, Fe)> + '_ {
        self.terms.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    pub fn coeff(&self, i: u32, j: u32) -> Fe {
        self.terms.get(&(i, j)).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn deg_x(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn deg_y(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn add(&self, k: &FieldDesc, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (i, j, c) in o.terms() {
            out.add_term(k, i, j, c);
        }
        out
    }

    pub fn sub(&self, k: &FieldDesc, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (i, j, c) in o.terms() {
            out.add_term(k, i, j, k.neg(c));
        }
        out
    }

    pub fn neg(&self, k: &FieldDesc) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(&e, &c)| (e, k.neg(c))).collect() }
    }

    pub fn scale(&self, k: &FieldDesc, a: Fe) -> BiPoly {
        Self::from_terms(k, self.terms.iter().map(|(&e, &c)| (e, k.mul(a, c))))
    }

    pub fn mul(&self, k: &FieldDesc, o: &BiPoly) -> BiPoly {
        let mut out = Self::zero();
        for (i1, j1, c1) in self.terms() {
            for (i2, j2, c2) in o.terms() {
                out.add_term(k, i1 + i2, j1 + j2, k.mul(c1, c2));
            }
        }
        out
    }

    pub fn pow(&self, k: &FieldDesc, e: u32) -> BiPoly {
        let mut acc = Self::constant(Fe::ONE);
        for _ in 0..e {
            acc = acc.mul(k, self);
        }
        acc
    }

    pub fn partial_x(&self, k: &FieldDesc) -> BiPoly {
        Self::from_terms(
            k,
            self.terms()
                .filter(|&(i, _, _)| i > 0)
                .map(|(i, j, c)| ((i - 1, j), k.mul(k.from_int(i as i64), c))),
        )
    }

    pub fn partial_y(&self, k: &FieldDesc) -> BiPoly {
        Self::from_terms(
            k,
            self.terms()
                .filter(|&(_, j, _)| j > 0)
                .map(|(i, j, c)| ((i, j - 1), k.mul(k.from_int(j as i64), c))),
        )
    }

    /// Swaps the roles of `x` and `y`.
    pub fn swap_vars(&self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(&(i, j), &c)| ((j, i), c)).collect() }
    }

    /// Coefficients as a polynomial in `y`: entry `j` is the coefficient of `y^j` in `F[x]`.
    pub fn coeffs_in_y(&self) -> Vec<UniPoly> {
        let dy = self.deg_y() as usize;
        let mut raw: Vec<Vec<Fe>> = vec![Vec::new(); dy + 1];
        for (i, j, c) in self.terms() {
            let v = &mut raw[j as usize];
            if v.len() <= i as usize {
                v.resize(i as usize + 1, Fe::ZERO);
            }
            v[i as usize] = c;
        }
        raw.into_iter().map(UniPoly::from_coeffs).collect()
    }

    pub fn eval(&self, k: &FieldDesc, a: Fe, b: Fe) -> Fe {
        self.terms()
            .fold(Fe::ZERO, |acc, (i, j, c)| k.add(acc, k.mul(c, k.mul(k.pow(a, i as u64), k.pow(b, j as u64)))))
    }

    /// `f(a, y)` as a polynomial in `y`.
    pub fn eval_x(&self, k: &FieldDesc, a: Fe) -> UniPoly {
        let coeffs: Vec<Fe> = self.coeffs_in_y().iter().map(|p| p.eval(k, a)).collect();
        UniPoly::from_coeffs(coeffs)
    }

    /// Image under a field embedding.
    pub fn embed(&self, e: &Embedding) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(&m, &c)| (m, e.apply(c))).collect() }
    }

    /// The degree-`d` form `F_d(1, v)` as a polynomial in `v`, where `d` is the total degree.
    pub fn top_form_dehomogenized(&self) -> UniPoly {
        let d = self.total_degree();
        let mut c = vec![Fe::ZERO; d as usize + 1];
        for (i, j, a) in self.terms() {
            if i + j == d {
                c[j as usize] = a;
            }
        }
        UniPoly::from_coeffs(c)
    }

    /// The chart `X = 1` of the projective closure: `F(1, v, w)` with `v` as the
    /// first variable and `w` as the second.
    pub fn chart_x_one(&self) -> BiPoly {
        let d = self.total_degree();
        BiPoly { terms: self.terms.iter().map(|(&(i, j), &c)| ((j, d - i - j), c)).collect() }
    }

    /// The chart `Y = 1`: `F(u, 1, w)` in variables `(u, w)`.
    pub fn chart_y_one(&self) -> BiPoly {
        let d = self.total_degree();
        BiPoly { terms: self.terms.iter().map(|(&(i, j), &c)| ((i, d - i - j), c)).collect() }
    }

    /// Exact quotient by multivariate division in graded-lex order.
    pub fn div_exact(&self, k: &FieldDesc, d: &BiPoly) -> Result<BiPoly> {
        let order = |&(i, j): &(u32, u32)| (i + j, i);
        let lead = |p: &BiPoly| p.terms.keys().copied().max_by_key(order);
        let Some((di, dj)) = lead(d) else {
            return Err(Error::DivisionByZero);
        };
        let dinv = k.inv(d.coeff(di, dj)).unwrap();
        let mut r = self.clone();
        let mut q = BiPoly::zero();
        while let Some((ri, rj)) = lead(&r) {
            if ri < di || rj < dj {
                return Err(Error::InexactDivision);
            }
            let c = k.mul(r.coeff(ri, rj), dinv);
            let t = BiPoly::monomial(c, ri - di, rj - dj);
            r = r.sub(k, &t.mul(k, d));
            q = q.add(k, &t);
        }
        Ok(q)
    }

    pub fn to_wire(&self, k: &FieldDesc) -> BiPolyWire {
        BiPolyWire(self.terms().map(|(i, j, c)| (i, j, k.coeffs(c))).collect())
    }

    pub fn from_wire(k: &FieldDesc, w: &BiPolyWire) -> Result<BiPoly> {
        let mut out = BiPoly::zero();
        for (i, j, c) in &w.0 {
            out.add_term(k, *i, *j, k.from_coeffs(c)?);
        }
        Ok(out)
    }

    pub fn display<'a>(&'a self, k: &'a FieldDesc) -> impl fmt::Display + 'a {
        BiPolyDisplay { p: self, k }
    }
}

struct BiPolyDisplay<'a> {
    p: &'a BiPoly,
    k: &'a FieldDesc,
}

impl fmt::Display for BiPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut terms: Vec<_> = self.p.terms().collect();
        terms.sort_by_key(|&(i, j, _)| std::cmp::Reverse((i + j, i)));
        for (i, j, c) in terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = if self.k.degree() == 1 {
                format!("{}", c.index())
            } else {
                format!("{:?}", self.k.coeffs(c))
            };
            let mono = match (i, j) {
                (0, 0) => String::new(),
                _ => {
                    let mut s = String::new();
                    if i > 0 {
                        s += if i == 1 { "x".into() } else { format!("x^{i}") }.as_str();
                    }
                    if j > 0 {
                        s += if j == 1 { "y".into() } else { format!("y^{j}") }.as_str();
                    }
                    s
                }
            };
            match (mono.is_empty(), c == Fe::ONE) {
                (true, _) => write!(f, "{coeff}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{coeff}*{mono}")?,
            }
        }
        Ok(())
    }
}
