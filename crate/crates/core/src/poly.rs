//! Dense univariate polynomials over a [`FieldDesc`].
//!
//! Polynomials do not carry their field; every operation takes it as the
//! first argument, the same way field elements are handled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::field::{binom_mod_p, Embedding, Fe, FieldDesc};

/// Coefficients low-to-high with no trailing zeros; the zero polynomial is
/// empty and has degree `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UniPoly {
    c: Vec<Fe>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly { c: vec![Fe::ONE] }
    }

    pub fn x() -> Self {
        UniPoly { c: vec![Fe::ZERO, Fe::ONE] }
    }

    pub fn constant(a: Fe) -> Self {
        Self::from_coeffs(vec![a])
    }

    pub fn monomial(a: Fe, e: usize) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Fe::ZERO; e + 1];
        c[e] = a;
        UniPoly { c }
    }

    pub fn from_coeffs(mut c: Vec<Fe>) -> Self {
        while c.last().is_some_and(|a| a.is_zero()) {
            c.pop();
        }
        UniPoly { c }
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == Fe::ONE
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lead(&self) -> Fe {
        self.c.last().copied().unwrap_or(Fe::ZERO)
    }

    /// Multiplicity of `x` as a factor.
    pub fn low_order(&self) -> usize {
        self.c.iter().position(|a| !a.is_zero()).unwrap_or(0)
    }

    pub fn add(&self, k: &FieldDesc, o: &UniPoly) -> UniPoly {
        let (long, short) = if self.c.len() >= o.c.len() { (self, o) } else { (o, self) };
        let mut c = long.c.clone();
        for (i, &b) in short.c.iter().enumerate() {
            c[i] = k.add(c[i], b);
        }
        Self::from_coeffs(c)
    }

    pub fn sub(&self, k: &FieldDesc, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| k.sub(self.coeff(i), o.coeff(i))).collect();
        Self::from_coeffs(c)
    }

    pub fn neg(&self, k: &FieldDesc) -> UniPoly {
        UniPoly { c: self.c.iter().map(|&a| k.neg(a)).collect() }
    }

    pub fn scale(&self, k: &FieldDesc, a: Fe) -> UniPoly {
        if a.is_zero() {
            return Self::zero();
        }
        if a == Fe::ONE {
            return self.clone();
        }
        UniPoly { c: self.c.iter().map(|&b| k.mul(a, b)).collect() }
    }

    /// Multiplies by `x^e`.
    pub fn shift(&self, e: usize) -> UniPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Fe::ZERO; e];
        c.extend_from_slice(&self.c);
        UniPoly { c }
    }

    pub fn mul(&self, k: &FieldDesc, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.c.len() == 1 {
            return o.scale(k, self.c[0]);
        }
        if o.c.len() == 1 {
            return self.scale(k, o.c[0]);
        }
        let mut c = vec![Fe::ZERO; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = k.add(c[i + j], k.mul(a, b));
                }
            }
        }
        Self::from_coeffs(c)
    }

    pub fn square(&self, k: &FieldDesc) -> UniPoly {
        self.mul(k, self)
    }

    pub fn pow(&self, k: &FieldDesc, mut e: u64) -> UniPoly {
        let mut acc = Self::one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(k, &b);
            }
            e >>= 1;
            if e > 0 {
                b = b.square(k);
            }
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, k: &FieldDesc, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.deg().expect("polynomial division by zero");
        if self.c.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let inv = k.inv(d.lead()).unwrap();
        let mut r = self.c.clone();
        let mut q = vec![Fe::ZERO; r.len() - dd];
        for top in (dd..r.len()).rev() {
            let coef = r[top];
            if coef.is_zero() {
                continue;
            }
            let f = k.mul(coef, inv);
            q[top - dd] = f;
            for (i, &b) in d.c.iter().enumerate() {
                if !b.is_zero() {
                    let idx = top - dd + i;
                    r[idx] = k.sub(r[idx], k.mul(f, b));
                }
            }
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    pub fn rem(&self, k: &FieldDesc, d: &UniPoly) -> UniPoly {
        self.divrem(k, d).1
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, k: &FieldDesc, d: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.divrem(k, d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self, k: &FieldDesc) -> UniPoly {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(k, k.inv(self.lead()).unwrap())
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Fe::ONE
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, k: &FieldDesc, o: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(k, &b);
            a = b;
            b = r;
        }
        a.monic(k)
    }

    /// `(g, s, t)` with `s*self + t*o = g` and `g` monic.
    pub fn xgcd(&self, k: &FieldDesc, o: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(k, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(k, &q.mul(k, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(k, &q.mul(k, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = k.inv(r0.lead()).unwrap();
        (r0.scale(k, inv), s0.scale(k, inv), t0.scale(k, inv))
    }

    pub fn mul_mod(&self, k: &FieldDesc, o: &UniPoly, m: &UniPoly) -> UniPoly {
        self.mul(k, o).rem(k, m)
    }

    pub fn pow_mod(&self, k: &FieldDesc, mut e: u64, m: &UniPoly) -> UniPoly {
        let mut acc = Self::one().rem(k, m);
        let mut b = self.rem(k, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(k, &b, m);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul_mod(k, &b, m);
            }
        }
        acc
    }

    pub fn eval(&self, k: &FieldDesc, a: Fe) -> Fe {
        self.c.iter().rev().fold(Fe::ZERO, |acc, &b| k.add(k.mul(acc, a), b))
    }

    pub fn derivative(&self, k: &FieldDesc) -> UniPoly {
        let c = self.c.iter().enumerate().skip(1).map(|(i, &a)| k.mul(k.from_int(i as i64), a)).collect();
        Self::from_coeffs(c)
    }

    /// `r`-th Hasse derivative: `x^i -> C(i, r) x^(i-r)`.
    pub fn hasse(&self, k: &FieldDesc, r: usize) -> UniPoly {
        if r == 0 {
            return self.clone();
        }
        let p = k.characteristic();
        let c = (r..self.c.len())
            .map(|i| {
                let b = binom_mod_p(i as u64, r as u64, p);
                if b == 0 {
                    Fe::ZERO
                } else {
                    k.mul(Fe(b), self.c[i])
                }
            })
            .collect();
        Self::from_coeffs(c)
    }

    /// `self(x^e)`.
    pub fn inflate(&self, e: usize) -> UniPoly {
        if self.is_zero() || e == 1 {
            return self.clone();
        }
        let mut c = vec![Fe::ZERO; (self.c.len() - 1) * e + 1];
        for (i, &a) in self.c.iter().enumerate() {
            c[i * e] = a;
        }
        UniPoly { c }
    }

    /// Applies `a -> a^(p^j)` to every coefficient.
    pub fn frob_coeffs(&self, k: &FieldDesc, j: u32) -> UniPoly {
        UniPoly { c: self.c.iter().map(|&a| k.frob(a, j)).collect() }
    }

    /// Composition `self(g)` by Horner's rule.
    pub fn compose(&self, k: &FieldDesc, g: &UniPoly) -> UniPoly {
        self.c.iter().rev().fold(Self::zero(), |acc, &b| acc.mul(k, g).add(k, &Self::constant(b)))
    }

    /// Image under a field embedding.
    pub fn embed(&self, e: &Embedding) -> UniPoly {
        UniPoly { c: self.c.iter().map(|&a| e.apply(a)).collect() }
    }

    /// Distinct roots in `k`, sorted by index.
    pub fn roots(&self, k: &FieldDesc) -> Vec<Fe> {
        if self.deg().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let f = self.monic(k);
        // split off the root 0 so y^Q - y can be replaced by y^(Q-1) - 1 below
        let mut out = Vec::new();
        let low = f.low_order();
        let f = if low > 0 {
            out.push(Fe::ZERO);
            UniPoly { c: f.c[low..].to_vec() }
        } else {
            f
        };
        if f.deg().unwrap_or(0) > 0 {
            let xq = Self::x().pow_mod(k, k.order() - 1, &f);
            let split = f.gcd(k, &xq.sub(k, &Self::one()));
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_7007);
            equal_degree_roots(k, &split, &mut rng, &mut out);
        }
        out.sort();
        out
    }

    /// Distinct-degree factorization of a squarefree monic polynomial:
    /// `(d, g_d)` where `g_d` is the product of the irreducible factors of degree `d`.
    pub fn distinct_degree(&self, k: &FieldDesc) -> Vec<(usize, UniPoly)> {
        let mut f = self.monic(k);
        let mut out = Vec::new();
        let q = k.order();
        let mut h = Self::x();
        let mut d = 0;
        while f.deg().unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = h.pow_mod(k, q, &f);
            let g = f.gcd(k, &h.sub(k, &Self::x()));
            if !g.is_one() {
                f = f.div_exact(k, &g).unwrap();
                h = h.rem(k, &f);
                out.push((d, g));
            }
        }
        if let Some(df) = f.deg() {
            if df > 0 {
                out.push((df, f));
            }
        }
        out
    }

    /// Squarefree part `f / gcd(f, f')` (assumes `f' != 0`).
    pub fn squarefree_part(&self, k: &FieldDesc) -> UniPoly {
        let d = self.derivative(k);
        if d.is_zero() {
            return self.monic(k);
        }
        let g = self.gcd(k, &d);
        self.div_exact(k, &g).unwrap().monic(k)
    }
}

/// Cantor–Zassenhaus splitting of a monic product of distinct linear factors.
fn equal_degree_roots(k: &FieldDesc, f: &UniPoly, rng: &mut ChaCha8Rng, out: &mut Vec<Fe>) {
    match f.deg() {
        None | Some(0) => {}
        Some(1) => out.push(k.neg(f.c[0])),
        Some(_) => loop {
            let a = k.random(rng);
            let probe = if k.characteristic() == 2 {
                // absolute trace of a*y lands in {0, 1} for every root
                let base = UniPoly { c: vec![Fe::ZERO, a] };
                let mut acc = UniPoly::zero();
                let mut cur = base.rem(k, f);
                for _ in 0..(k.order().trailing_zeros()) {
                    acc = acc.add(k, &cur);
                    cur = cur.mul_mod(k, &cur, f);
                }
                acc
            } else {
                let base = UniPoly { c: vec![a, Fe::ONE] };
                base.pow_mod(k, (k.order() - 1) / 2, f).sub(k, &UniPoly::one())
            };
            let g = f.gcd(k, &probe);
            let dg = g.deg().unwrap_or(0);
            if dg > 0 && dg < f.deg().unwrap() {
                let h = f.div_exact(k, &g).unwrap().monic(k);
                equal_degree_roots(k, &g, rng, out);
                equal_degree_roots(k, &h, rng, out);
                return;
            }
        },
    }
}
