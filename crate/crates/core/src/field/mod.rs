//! Finite fields `F_{p^h}` in a power basis over the prime field.
//!
//! An element is stored as the base-`p` integer `c_0 + c_1 p + ... + c_{h-1} p^{h-1}`
//! of its coordinate vector, which is canonical: two elements are equal iff
//! their coordinates are. Fields with at most [`TABLE_LIMIT`] elements carry
//! log/antilog/Zech tables; larger ones multiply coordinate vectors directly.

mod embed;
mod lucas;
mod prime_poly;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use embed::{embed, embedding, Embedding};
pub use lucas::{binom_det_mod_p, binom_mod_p, binom_mod_p_signed};

/// Fields up to this many elements use lookup tables.
pub const TABLE_LIMIT: u64 = 1 << 16;

const NO_LOG: u32 = u32::MAX;

/// A field element: the canonical base-`p` index of its coordinate vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fe(pub(crate) u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn index(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Wire form of a field: `(p, h, modulus)` with the modulus low-to-high.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub h: u32,
    pub modulus: Vec<u64>,
}

enum Repr {
    Table {
        log: Vec<u32>,
        exp: Vec<u64>,
        zech: Vec<u32>,
    },
    Poly,
}

pub struct FieldDesc {
    p: u64,
    h: u32,
    modulus: Vec<u64>,
    order: u64,
    pw: Vec<u64>,
    repr: Repr,
}

pub type Field = Arc<FieldDesc>;

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.h, self.modulus)
    }
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}
impl Eq for FieldDesc {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power `q = p^h`; `None` when `q` is not one.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut h = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        h += 1;
    }
    (r == 1).then_some((p, h))
}

fn field_cache() -> &'static Mutex<HashMap<(u64, u32, Option<Vec<u64>>), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32, Option<Vec<u64>>), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds `F_{p^h}`. Without a modulus, the first irreducible monic polynomial
/// in index order of its lower coefficients is used, so the choice is
/// reproducible across runs.
pub fn make_field(p: u64, h: u32, modulus: Option<&[u64]>) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if h == 0 || (h as f64) * (p as f64).log2() > 62.0 {
        return Err(Error::BadParams(format!("extension degree {h} unsupported over F_{p}")));
    }
    let key = (p, h, modulus.map(|m| m.to_vec()));
    if let Some(f) = field_cache().lock().unwrap().get(&key) {
        return Ok(f.clone());
    }
    let modulus = match modulus {
        Some(m) => {
            let ok = m.len() == h as usize + 1
                && m.iter().all(|&c| c < p)
                && prime_poly::is_irreducible(m, p);
            if !ok {
                return Err(Error::ReducibleModulus(m.to_vec()));
            }
            m.to_vec()
        }
        None => search_modulus(p, h),
    };
    let field = Arc::new(FieldDesc::build(p, h, modulus));
    field_cache().lock().unwrap().insert(key, field.clone());
    Ok(field)
}

pub fn make_field_from_spec(spec: &FieldSpec) -> Result<Field> {
    make_field(spec.p, spec.h, Some(&spec.modulus))
}

/// The field with `q` elements (default modulus).
pub fn field_of_order(q: u64) -> Result<Field> {
    let (p, h) = prime_power(q).ok_or_else(|| Error::BadParams(format!("{q} is not a prime power")))?;
    make_field(p, h, None)
}

fn search_modulus(p: u64, h: u32) -> Vec<u64> {
    let count = p.pow(h);
    for idx in 0..count {
        let mut m = Vec::with_capacity(h as usize + 1);
        let mut r = idx;
        for _ in 0..h {
            m.push(r % p);
            r /= p;
        }
        m.push(1);
        if prime_poly::is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldDesc {
    fn build(p: u64, h: u32, modulus: Vec<u64>) -> FieldDesc {
        let order = p.pow(h);
        let mut pw = Vec::with_capacity(h as usize + 1);
        let mut acc = 1u64;
        for _ in 0..=h {
            pw.push(acc);
            acc = acc.saturating_mul(p);
        }
        let mut f = FieldDesc { p, h, modulus, order, pw, repr: Repr::Poly };
        if order <= TABLE_LIMIT && order > 2 {
            f.repr = f.build_tables();
        }
        f
    }

    fn build_tables(&self) -> Repr {
        let n = self.order - 1;
        let factors = prime_poly::distinct_prime_factors(n);
        let gen = (2..self.order)
            .map(Fe)
            .find(|&g| factors.iter().all(|&l| self.poly_pow(g, n / l) != Fe::ONE))
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(2 * n as usize);
        let mut log = vec![NO_LOG; self.order as usize];
        let mut cur = Fe::ONE;
        for i in 0..n {
            exp.push(cur.0);
            log[cur.0 as usize] = i as u32;
            cur = self.poly_mul(cur, gen);
        }
        for i in 0..n as usize {
            exp.push(exp[i]);
        }
        let zech = if self.p == 2 {
            Vec::new()
        } else {
            (0..n as usize)
                .map(|l| {
                    let s = self.digit_add(Fe::ONE, Fe(exp[l]));
                    if s.is_zero() {
                        NO_LOG
                    } else {
                        log[s.0 as usize]
                    }
                })
                .collect()
        };
        Repr::Table { log, exp, zech }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.h
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.p, h: self.h, modulus: self.modulus.clone() }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.order).map(Fe)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(0..self.order))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(1..self.order))
    }

    /// The prime-field element `n mod p`.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u64)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Fe> {
        if coeffs.len() > self.h as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Parse(format!("{coeffs:?} is not a coordinate vector of {self:?}")));
        }
        Ok(Fe(coeffs.iter().zip(&self.pw).map(|(c, w)| c * w).sum()))
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u64> {
        let mut r = a.0;
        (0..self.h)
            .map(|_| {
                let c = r % self.p;
                r /= self.p;
                c
            })
            .collect()
    }

    /// Is `a` fixed by `z -> z^(p^s)`, i.e. does it lie in the subfield of degree `gcd(s, h)`?
    pub fn in_subfield(&self, a: Fe, s: u32) -> bool {
        self.frob(a, s) == a
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        match &self.repr {
            Repr::Table { log, exp, zech } => {
                if a.is_zero() {
                    return b;
                }
                if b.is_zero() {
                    return a;
                }
                let n = self.order as u32 - 1;
                let la = log[a.0 as usize];
                let lb = log[b.0 as usize];
                let d = if lb >= la { lb - la } else { lb + n - la };
                let z = zech[d as usize];
                if z == NO_LOG {
                    Fe::ZERO
                } else {
                    Fe(exp[(la + z) as usize])
                }
            }
            Repr::Poly => self.digit_add(a, b),
        }
    }

    fn digit_add(&self, a: Fe, b: Fe) -> Fe {
        if self.h == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        for w in &self.pw[..self.h as usize] {
            let s = x % self.p + y % self.p;
            out += if s >= self.p { s - self.p } else { s } * w;
            x /= self.p;
            y /= self.p;
        }
        Fe(out)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 || a.is_zero() {
            return a;
        }
        if self.h == 1 {
            return Fe(self.p - a.0);
        }
        let mut x = a.0;
        let mut out = 0;
        for w in &self.pw[..self.h as usize] {
            let c = x % self.p;
            if c != 0 {
                out += (self.p - c) * w;
            }
            x /= self.p;
        }
        Fe(out)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() || b.is_zero() {
            return Fe::ZERO;
        }
        match &self.repr {
            Repr::Table { log, exp, .. } => Fe(exp[(log[a.0 as usize] + log[b.0 as usize]) as usize]),
            Repr::Poly => self.poly_mul(a, b),
        }
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return None;
        }
        Some(match &self.repr {
            Repr::Table { log, exp, .. } => {
                let n = self.order as u32 - 1;
                let l = log[a.0 as usize];
                Fe(exp[((n - l) % n) as usize])
            }
            Repr::Poly => self.poly_pow(a, self.order - 2),
        })
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        let bi = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, bi))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        match &self.repr {
            Repr::Table { log, exp, .. } => {
                let n = self.order - 1;
                let l = (log[a.0 as usize] as u128 * (e % n) as u128 % n as u128) as usize;
                Fe(exp[l])
            }
            Repr::Poly => self.poly_pow(a, e),
        }
    }

    /// `a^(p^j)`; `j` is reduced modulo the degree first.
    pub fn frob(&self, a: Fe, j: u32) -> Fe {
        let j = j % self.h;
        if j == 0 || a.is_zero() {
            return a;
        }
        match &self.repr {
            Repr::Table { log, exp, .. } => {
                let n = self.order - 1;
                let e = self.pw[j as usize] % n;
                Fe(exp[(log[a.0 as usize] as u64 * e % n) as usize])
            }
            Repr::Poly => {
                let mut r = a;
                for _ in 0..j {
                    r = self.poly_pow(r, self.p);
                }
                r
            }
        }
    }

    /// `a^(q^k)` for `q = p^e`.
    pub fn frobenius_pow(&self, a: Fe, q_exp: u32, k: u32) -> Fe {
        self.frob(a, ((q_exp as u64 * k as u64) % self.h as u64) as u32)
    }

    /// Sum of conjugates down to the prime field (used for Cantor–Zassenhaus in characteristic 2).
    pub fn trace_to_prime(&self, a: Fe) -> Fe {
        let mut acc = Fe::ZERO;
        let mut cur = a;
        for _ in 0..self.h {
            acc = self.add(acc, cur);
            cur = self.frob(cur, 1);
        }
        acc
    }

    fn poly_pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut acc = Fe::ONE;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mul(acc, b);
            }
            b = self.poly_mul(b, b);
            e >>= 1;
        }
        acc
    }

    fn poly_mul(&self, a: Fe, b: Fe) -> Fe {
        let h = self.h as usize;
        if self.p == 2 {
            let mut prod: u128 = 0;
            let (x, mut y) = (a.0 as u128, b.0);
            let mut shift = 0;
            while y != 0 {
                if y & 1 == 1 {
                    prod ^= x << shift;
                }
                y >>= 1;
                shift += 1;
            }
            let m: u128 = self
                .modulus
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &c)| acc | ((c as u128) << i));
            let mut k = 2 * h;
            while k > h {
                k -= 1;
                if (prod >> k) & 1 == 1 {
                    prod ^= m << (k - h);
                }
            }
            return Fe(prod as u64);
        }
        if h == 1 {
            return Fe(a.0 * b.0 % self.p);
        }
        let p = self.p;
        let mut da = [0u64; 64];
        let mut db = [0u64; 64];
        let (mut x, mut y) = (a.0, b.0);
        for i in 0..h {
            da[i] = x % p;
            db[i] = y % p;
            x /= p;
            y /= p;
        }
        let mut prod = [0u64; 128];
        for i in 0..h {
            if da[i] == 0 {
                continue;
            }
            for j in 0..h {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for k in (h..2 * h - 1).rev() {
            let c = prod[k];
            if c != 0 {
                for i in 0..h {
                    let idx = k - h + i;
                    prod[idx] = (prod[idx] + (p - c) * self.modulus[i]) % p;
                }
                prod[k] = 0;
            }
        }
        Fe((0..h).map(|i| prod[i] * self.pw[i]).sum())
    }
}

/// An element tagged with its field, for API boundaries that must reject
/// mixed-field operands.
#[derive(Clone, Debug)]
pub struct FieldElem {
    pub field: Field,
    pub value: Fe,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow(u64),
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.value == other.value
    }
}

impl FieldElem {
    pub fn new(field: &Field, value: Fe) -> Self {
        FieldElem { field: field.clone(), value }
    }

    pub fn arith(&self, other: &FieldElem, op: ArithOp) -> Result<FieldElem> {
        if *self.field != *other.field {
            return Err(Error::FieldMismatch);
        }
        let k = &self.field;
        let value = match op {
            ArithOp::Add => k.add(self.value, other.value),
            ArithOp::Sub => k.sub(self.value, other.value),
            ArithOp::Mul => k.mul(self.value, other.value),
            ArithOp::Div => k.div(self.value, other.value)?,
            ArithOp::Pow(e) => k.pow(self.value, e),
        };
        Ok(FieldElem { field: k.clone(), value })
    }

    /// `a^(q^k)` where `q = p^q_exp` is the order of the designated base field.
    pub fn frobenius_pow(&self, q_exp: u32, k: u32) -> FieldElem {
        FieldElem { field: self.field.clone(), value: self.field.frobenius_pow(self.value, q_exp, k) }
    }
}
