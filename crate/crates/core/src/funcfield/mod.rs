//! The function field `K = F_q(x)[y]/(f)` of a plane curve.

mod hasse;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::field::{Fe, Field, FieldDesc};
use crate::poly::UniPoly;
use crate::polymat;

/// A reduced fraction `num / den` in `F_q(x)` with `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    pub num: UniPoly,
    pub den: UniPoly,
}

impl RatFun {
    pub fn new(k: &FieldDesc, num: UniPoly, den: UniPoly) -> Result<RatFun> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(k, &den);
        let (num, den) = if g.is_one() || num.is_zero() {
            (num, den)
        } else {
            (num.div_exact(k, &g).unwrap(), den.div_exact(k, &g).unwrap())
        };
        let num = if num.is_zero() { num } else { num.scale(k, k.inv(den.lead()).unwrap()) };
        let den = if num.is_zero() { UniPoly::one() } else { den.monic(k) };
        Ok(RatFun { num, den })
    }
}

/// An element of `K`, stored over a common denominator:
/// `(num[0] + num[1] y + ... + num[D-1] y^(D-1)) / den` with `den` monic and
/// the whole tuple gcd-free, which makes the representation canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgFunc {
    num: Vec<UniPoly>,
    den: UniPoly,
}

impl AlgFunc {
    pub fn numerators(&self) -> &[UniPoly] {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|p| p.is_zero())
    }

    /// True when the element lies in `F_q(x)`.
    pub fn is_rational(&self) -> bool {
        self.num.iter().skip(1).all(|p| p.is_zero())
    }

    /// Largest degree among numerators and denominator, a proxy for size.
    pub fn height(&self) -> usize {
        self.num.iter().chain(std::iter::once(&self.den)).filter_map(|p| p.deg()).max().unwrap_or(0)
    }
}

/// Reductions of `y^k` for `D <= k <= 2D - 2`: numerators over `lc^(k-D+1)`.
struct Reductions {
    nums: Vec<Vec<UniPoly>>,
}

/// A plane curve `f(x, y) = 0` with `x` as the separating variable.
pub struct CurveModel {
    field: Field,
    f: BiPoly,
    fc: Vec<UniPoly>,
    deg_y: usize,
    lc: UniPoly,
    red: Reductions,
    y: AlgFunc,
    fy: AlgFunc,
    fy_inv: Mutex<Option<AlgFunc>>,
    hasse_cache: Mutex<Vec<Vec<AlgFunc>>>,
    frob_cache: Mutex<HashMap<u64, Arc<Vec<AlgFunc>>>>,
}

impl std::fmt::Debug for CurveModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CurveModel({} over {:?})", self.f.display(&self.field), self.field)
    }
}

impl CurveModel {
    /// Validates the necessary conditions that are cheap to check: positive
    /// degree in `y`, no factor lying in `F_q[x]`, and `df/dy != 0`.
    pub fn new(field: Field, f: BiPoly) -> Result<Arc<CurveModel>> {
        let k: &FieldDesc = &field;
        let mut fc = f.coeffs_in_y();
        let deg_y = fc.len() - 1;
        if deg_y == 0 {
            return Err(Error::BadParams("curve has no y term".into()));
        }
        let content = fc.iter().fold(UniPoly::zero(), |g, c| g.gcd(k, c));
        let content_y = f.swap_vars().coeffs_in_y().iter().fold(UniPoly::zero(), |g, c| g.gcd(k, c));
        if !content.is_constant() || !content_y.is_constant() {
            return Err(Error::ReducibleCurve);
        }
        let mut lc = fc[deg_y].clone();
        if lc.is_constant() {
            let inv = k.inv(lc.lead()).unwrap();
            fc = fc.iter().map(|c| c.scale(k, inv)).collect();
            lc = UniPoly::one();
        }
        let red = Self::reductions(k, &fc, &lc);
        let mut curve = CurveModel {
            field: field.clone(),
            f,
            fc,
            deg_y,
            lc,
            red,
            y: AlgFunc { num: Vec::new(), den: UniPoly::one() },
            fy: AlgFunc { num: Vec::new(), den: UniPoly::one() },
            fy_inv: Mutex::new(None),
            hasse_cache: Mutex::new(Vec::new()),
            frob_cache: Mutex::new(HashMap::new()),
        };
        curve.y = if deg_y >= 2 {
            curve.y_basis(1)
        } else {
            // f = c1 y + c0, so y = -c0 / c1
            curve.ratfun(&curve.fc[0].neg(k), &curve.fc[1])?
        };
        let fy = f_partial_y(k, &curve.fc);
        curve.fy = curve.from_y_poly(&fy);
        if curve.fy.is_zero() {
            return Err(Error::NotSeparating);
        }
        Ok(Arc::new(curve))
    }

    fn reductions(k: &FieldDesc, fc: &[UniPoly], lc: &UniPoly) -> Reductions {
        let d = fc.len() - 1;
        let mut nums = Vec::new();
        if d >= 2 {
            let mut cur: Vec<UniPoly> = fc[..d].iter().map(|c| c.neg(k)).collect();
            nums.push(cur.clone());
            for _ in d + 1..=2 * d - 2 {
                let top = cur[d - 1].clone();
                let mut next = vec![UniPoly::zero(); d];
                for j in (1..d).rev() {
                    next[j] = cur[j - 1].mul(k, lc);
                }
                for (j, c) in fc[..d].iter().enumerate() {
                    next[j] = next[j].sub(k, &top.mul(k, c));
                }
                cur = next;
                nums.push(cur.clone());
            }
        }
        Reductions { nums }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn poly(&self) -> &BiPoly {
        &self.f
    }

    pub fn deg_y(&self) -> usize {
        self.deg_y
    }

    pub fn total_degree(&self) -> u32 {
        self.f.total_degree()
    }

    /// Coefficients of `f` in `y`, scaled so the leading one is monic when it is constant.
    pub fn y_coeffs(&self) -> &[UniPoly] {
        &self.fc
    }

    pub fn leading_coeff(&self) -> &UniPoly {
        &self.lc
    }

    fn k(&self) -> &FieldDesc {
        &self.field
    }

    pub fn zero(&self) -> AlgFunc {
        AlgFunc { num: vec![UniPoly::zero(); self.deg_y], den: UniPoly::one() }
    }

    pub fn one(&self) -> AlgFunc {
        self.constant(Fe::ONE)
    }

    pub fn constant(&self, a: Fe) -> AlgFunc {
        self.from_x_poly(&UniPoly::constant(a))
    }

    pub fn from_x_poly(&self, p: &UniPoly) -> AlgFunc {
        let mut num = vec![UniPoly::zero(); self.deg_y];
        num[0] = p.clone();
        AlgFunc { num, den: UniPoly::one() }
    }

    pub fn x(&self) -> AlgFunc {
        self.from_x_poly(&UniPoly::x())
    }

    pub fn y(&self) -> AlgFunc {
        self.y.clone()
    }

    fn y_basis(&self, j: usize) -> AlgFunc {
        let mut num = vec![UniPoly::zero(); self.deg_y];
        num[j] = UniPoly::one();
        AlgFunc { num, den: UniPoly::one() }
    }

    /// `num / den` with both in `F_q[x]`.
    pub fn ratfun(&self, num: &UniPoly, den: &UniPoly) -> Result<AlgFunc> {
        let r = RatFun::new(self.k(), num.clone(), den.clone())?;
        let mut out = self.from_x_poly(&r.num);
        out.den = r.den;
        Ok(out)
    }

    /// The `i`-th coordinate in the basis `1, y, ..., y^(D-1)` as a reduced fraction.
    pub fn coord(&self, a: &AlgFunc, i: usize) -> RatFun {
        RatFun::new(self.k(), a.num[i].clone(), a.den.clone()).unwrap()
    }

    /// Maps a bivariate polynomial into `K`.
    pub fn from_bipoly(&self, b: &BiPoly) -> AlgFunc {
        let coeffs = b.coeffs_in_y();
        if coeffs.len() < 2 * self.deg_y && self.deg_y >= 2 {
            return self.reduce(coeffs, UniPoly::one());
        }
        let mut acc = self.zero();
        let mut ypow = self.one();
        for (j, c) in coeffs.iter().enumerate() {
            if j > 0 {
                ypow = self.mul(&ypow, &self.y);
            }
            if !c.is_zero() {
                acc = self.add(&acc, &self.scale_poly(&ypow, c));
            }
        }
        acc
    }

    fn from_y_poly(&self, coeffs: &[UniPoly]) -> AlgFunc {
        let b = BiPoly::from_terms(
            self.k(),
            coeffs
                .iter()
                .enumerate()
                .flat_map(|(j, c)| c.coeffs().iter().enumerate().map(move |(i, &a)| ((i as u32, j as u32), a))),
        );
        self.from_bipoly(&b)
    }

    /// Reduces `Σ p_k y^k / den` (any `k <= 2D - 2`) to canonical form.
    fn reduce(&self, mut p: Vec<UniPoly>, den: UniPoly) -> AlgFunc {
        let k = self.k();
        let d = self.deg_y;
        while p.len() > d && p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        if p.len() <= d {
            p.resize(d, UniPoly::zero());
            return self.normalize(p, den);
        }
        let top = p.len() - 1;
        assert!(top <= 2 * d - 2, "reduce called with y-degree {top} beyond 2D-2");
        let e = top - d + 1;
        let lc_const = self.lc.is_one();
        let lc_pows: Vec<UniPoly> = if lc_const {
            Vec::new()
        } else {
            let mut v = vec![UniPoly::one()];
            for i in 1..=e {
                v.push(v[i - 1].mul(k, &self.lc));
            }
            v
        };
        let mut out: Vec<UniPoly> = p[..d]
            .iter()
            .map(|c| if lc_const { c.clone() } else { c.mul(k, &lc_pows[e]) })
            .collect();
        for (kk, c) in p.iter().enumerate().skip(d) {
            if c.is_zero() {
                continue;
            }
            let red = &self.red.nums[kk - d];
            let factor = if lc_const { c.clone() } else { c.mul(k, &lc_pows[e - (kk - d + 1)]) };
            for (j, r) in red.iter().enumerate() {
                if !r.is_zero() {
                    out[j] = out[j].add(k, &factor.mul(k, r));
                }
            }
        }
        let den = if lc_const { den } else { den.mul(k, &lc_pows[e]) };
        self.normalize(out, den)
    }

    fn normalize(&self, mut num: Vec<UniPoly>, mut den: UniPoly) -> AlgFunc {
        let k = self.k();
        if num.iter().all(|c| c.is_zero()) {
            return self.zero();
        }
        if !den.is_constant() {
            let mut g = den.clone();
            for c in &num {
                if g.is_one() {
                    break;
                }
                if !c.is_zero() {
                    g = g.gcd(k, c);
                }
            }
            if !g.is_one() {
                den = den.div_exact(k, &g).unwrap();
                for c in num.iter_mut() {
                    *c = c.div_exact(k, &g).unwrap();
                }
            }
        }
        if !den.is_monic() {
            let inv = k.inv(den.lead()).unwrap();
            den = den.scale(k, inv);
            for c in num.iter_mut() {
                *c = c.scale(k, inv);
            }
        }
        AlgFunc { num, den }
    }

    pub fn add(&self, a: &AlgFunc, b: &AlgFunc) -> AlgFunc {
        let k = self.k();
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if a.den == b.den {
            let num = a.num.iter().zip(&b.num).map(|(x, y)| x.add(k, y)).collect();
            return self.normalize(num, a.den.clone());
        }
        let g = a.den.gcd(k, &b.den);
        let (ca, cb) = if g.is_one() {
            (b.den.clone(), a.den.clone())
        } else {
            (b.den.div_exact(k, &g).unwrap(), a.den.div_exact(k, &g).unwrap())
        };
        let num = a.num.iter().zip(&b.num).map(|(x, y)| x.mul(k, &ca).add(k, &y.mul(k, &cb))).collect();
        self.normalize(num, a.den.mul(k, &ca))
    }

    pub fn neg(&self, a: &AlgFunc) -> AlgFunc {
        AlgFunc { num: a.num.iter().map(|c| c.neg(self.k())).collect(), den: a.den.clone() }
    }

    pub fn sub(&self, a: &AlgFunc, b: &AlgFunc) -> AlgFunc {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &AlgFunc, c: Fe) -> AlgFunc {
        if c.is_zero() {
            return self.zero();
        }
        AlgFunc { num: a.num.iter().map(|p| p.scale(self.k(), c)).collect(), den: a.den.clone() }
    }

    /// Multiplies by a polynomial in `x`.
    pub fn scale_poly(&self, a: &AlgFunc, p: &UniPoly) -> AlgFunc {
        let k = self.k();
        let num = a.num.iter().map(|c| c.mul(k, p)).collect();
        self.normalize(num, a.den.clone())
    }

    /// Multiplies by `num / den` in `F_q(x)`.
    pub fn scale_ratfun(&self, a: &AlgFunc, num: &UniPoly, den: &UniPoly) -> AlgFunc {
        let k = self.k();
        let nums = a.num.iter().map(|c| c.mul(k, num)).collect();
        self.normalize(nums, a.den.mul(k, den))
    }

    pub fn mul(&self, a: &AlgFunc, b: &AlgFunc) -> AlgFunc {
        let k = self.k();
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        if a.is_rational() {
            return self.scale_ratfun(b, &a.num[0], &a.den);
        }
        if b.is_rational() {
            return self.scale_ratfun(a, &b.num[0], &b.den);
        }
        let d = self.deg_y;
        let mut prod = vec![UniPoly::zero(); 2 * d - 1];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] = prod[i + j].add(k, &x.mul(k, y));
                }
            }
        }
        self.reduce(prod, a.den.mul(k, &b.den))
    }

    pub fn square(&self, a: &AlgFunc) -> AlgFunc {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &AlgFunc, mut e: u64) -> AlgFunc {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.square(&b);
            }
        }
        acc
    }

    /// Multiplicative inverse. The multiplication-by-`a` matrix over `F_q(x)` is
    /// inverted by Cramer's rule; a singular matrix for nonzero `a` means `f`
    /// has a zero divisor, i.e. it is reducible.
    pub fn inv(&self, a: &AlgFunc) -> Result<AlgFunc> {
        let k = self.k();
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if a.is_rational() {
            let num = a.den.clone();
            let mut out = self.from_x_poly(&num);
            out.den = a.num[0].clone();
            return Ok(self.normalize(out.num, out.den));
        }
        let d = self.deg_y;
        // column i holds the coordinates of (num * y^i), scaled to a common denominator
        let numer = AlgFunc { num: a.num.clone(), den: UniPoly::one() };
        let mut cols: Vec<AlgFunc> = Vec::with_capacity(d);
        let mut cur = numer;
        for i in 0..d {
            if i > 0 {
                cur = self.mul(&cur, &self.y);
            }
            cols.push(cur.clone());
        }
        let common = cols.iter().fold(UniPoly::one(), |l, c| {
            let g = l.gcd(k, &c.den);
            l.mul(k, &c.den.div_exact(k, &g).unwrap())
        });
        let m: Vec<Vec<UniPoly>> = (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| cols[c].num[r].mul(k, &common.div_exact(k, &cols[c].den).unwrap()))
                    .collect()
            })
            .collect();
        let mut rhs = vec![UniPoly::zero(); d];
        rhs[0] = common.clone();
        let (sol, det) = polymat::solve(k, &m, &rhs);
        if det.is_zero() {
            return Err(Error::ReducibleCurve);
        }
        // 1/num = Σ sol_i y^i / det, then multiply by den
        let num = sol.iter().map(|s| s.mul(k, &a.den)).collect();
        Ok(self.normalize(num, det))
    }

    pub fn div(&self, a: &AlgFunc, b: &AlgFunc) -> Result<AlgFunc> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `df/dy` as an element of `K`.
    pub fn fy(&self) -> &AlgFunc {
        &self.fy
    }

    pub(crate) fn fy_inv(&self) -> Result<AlgFunc> {
        let mut slot = self.fy_inv.lock().unwrap();
        if let Some(v) = slot.as_ref() {
            return Ok(v.clone());
        }
        let v = self.inv(&self.fy)?;
        *slot = Some(v.clone());
        Ok(v)
    }

    /// Applies `c -> c^(p^j)` to every coefficient and `x -> x^e` in every
    /// coordinate, keeping `y` fixed.
    fn twist_coords(&self, a: &AlgFunc, j: u32, e: usize) -> (Vec<UniPoly>, UniPoly) {
        let k = self.k();
        let num = a.num.iter().map(|c| c.frob_coeffs(k, j).inflate(e)).collect();
        (num, a.den.frob_coeffs(k, j).inflate(e))
    }

    /// Reduction of `Σ p_j y^j` with arbitrary `y`-degree, using cached powers of `y^Q`.
    fn frobenius_step(&self, a: &AlgFunc, q: u64) -> AlgFunc {
        let k = self.k();
        let ylist = self.y_frobenius_powers(q);
        let e = q.trailing_zeros_base(k.characteristic());
        let (num, den) = self.twist_coords(a, e % k.degree(), q as usize);
        let mut acc = self.zero();
        for (j, c) in num.iter().enumerate() {
            if !c.is_zero() {
                acc = self.add(&acc, &self.scale_poly(&ylist[j], c));
            }
        }
        self.scale_ratfun(&acc, &UniPoly::one(), &den)
    }

    /// `(y^Q)^j` for `j < D`.
    fn y_frobenius_powers(&self, q: u64) -> Arc<Vec<AlgFunc>> {
        if let Some(v) = self.frob_cache.lock().unwrap().get(&q) {
            return v.clone();
        }
        let yq = self.pow(&self.y, q);
        let mut v = vec![self.one()];
        for j in 1..self.deg_y {
            v.push(self.mul(&v[j - 1], &yq));
        }
        let v = Arc::new(v);
        self.frob_cache.lock().unwrap().insert(q, v.clone());
        v
    }

    /// `g^(Q^k)` where `Q` is a power of the characteristic.
    pub fn qpower(&self, g: &AlgFunc, k: u32, q: u64) -> AlgFunc {
        let mut out = g.clone();
        for _ in 0..k {
            out = self.frobenius_step(&out, q);
        }
        out
    }

    /// Evaluates at an affine point over an extension; `None` at a pole.
    pub fn eval(&self, a: &AlgFunc, ext: &FieldDesc, emb: &crate::field::Embedding, px: Fe, py: Fe) -> Option<Fe> {
        let den = a.den.embed(emb).eval(ext, px);
        let inv = ext.inv(den)?;
        let mut acc = Fe::ZERO;
        let mut ypow = Fe::ONE;
        for c in &a.num {
            acc = ext.add(acc, ext.mul(c.embed(emb).eval(ext, px), ypow));
            ypow = ext.mul(ypow, py);
        }
        Some(ext.mul(acc, inv))
    }
}

fn f_partial_y(k: &FieldDesc, fc: &[UniPoly]) -> Vec<UniPoly> {
    fc.iter().enumerate().skip(1).map(|(j, c)| c.scale(k, k.from_int(j as i64))).collect()
}

trait LogBase {
    fn trailing_zeros_base(self, p: u64) -> u32;
}

impl LogBase for u64 {
    /// `log_p` of a power of `p`.
    fn trailing_zeros_base(self, p: u64) -> u32 {
        let mut e = 0;
        let mut r = self;
        while r > 1 {
            debug_assert_eq!(r % p, 0, "{self} is not a power of {p}");
            r /= p;
            e += 1;
        }
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn parabola(p: u64) -> Arc<CurveModel> {
        let k = make_field(p, 1, None).unwrap();
        let f = BiPoly::from_int_terms(&k, &[(0, 2, 1), (1, 0, -1)]);
        CurveModel::new(k, f).unwrap()
    }

    pub(crate) fn random_elem(c: &CurveModel, rng: &mut ChaCha8Rng, deg: usize) -> AlgFunc {
        let k = c.field().clone();
        let mut acc = c.zero();
        for j in 0..c.deg_y() {
            let coeffs: Vec<Fe> = (0..=deg).map(|_| k.random(rng)).collect();
            let p = UniPoly::from_coeffs(coeffs);
            let mut basis = c.one();
            for _ in 0..j {
                basis = c.mul(&basis, &c.y());
            }
            acc = c.add(&acc, &c.scale_poly(&basis, &p));
        }
        if rng.gen_bool(0.5) {
            let dcoeffs: Vec<Fe> = (0..=2).map(|_| k.random(rng)).collect();
            let d = UniPoly::from_coeffs(dcoeffs);
            if !d.is_zero() {
                acc = c.scale_ratfun(&acc, &UniPoly::one(), &d);
            }
        }
        acc
    }

    #[test]
    fn defining_relation() {
        let c = parabola(3);
        let y = c.y();
        assert_eq!(c.mul(&y, &y), c.x());
        let inv = c.inv(&y).unwrap();
        // y / x
        assert_eq!(inv, c.scale_ratfun(&y, &UniPoly::one(), &UniPoly::x()));
    }

    #[test]
    fn division_round_trip() {
        let k = make_field(2, 2, None).unwrap();
        // Hermitian x^3 + y^3 = 1 over F_4
        let f = BiPoly::from_int_terms(&k, &[(3, 0, 1), (0, 3, 1), (0, 0, 1)]);
        let c = CurveModel::new(k, f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let a = random_elem(&c, &mut rng, 3);
            let b = random_elem(&c, &mut rng, 2);
            if b.is_zero() {
                continue;
            }
            let prod = c.mul(&a, &b);
            assert_eq!(c.div(&prod, &b).unwrap(), a);
            assert!(c.sub(&prod, &prod).is_zero());
        }
    }

    #[test]
    fn non_monic_leading_coefficient() {
        let k = make_field(5, 1, None).unwrap();
        // x y^2 + y + x^3 + 1
        let f = BiPoly::from_int_terms(&k, &[(1, 2, 1), (0, 1, 1), (3, 0, 1), (0, 0, 1)]);
        let c = CurveModel::new(k.clone(), f.clone()).unwrap();
        // f itself maps to zero
        assert!(c.from_bipoly(&f).is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let a = random_elem(&c, &mut rng, 2);
            if a.is_zero() {
                continue;
            }
            assert_eq!(c.mul(&a, &c.inv(&a).unwrap()), c.one());
        }
    }

    #[test]
    fn reducible_curve_is_detected() {
        let k = make_field(5, 1, None).unwrap();
        // (y - x)(y + x) = y^2 - x^2
        let f = BiPoly::from_int_terms(&k, &[(0, 2, 1), (2, 0, -1)]);
        let c = CurveModel::new(k.clone(), f).unwrap();
        let zd = c.sub(&c.y(), &c.x());
        assert_eq!(c.inv(&zd), Err(Error::ReducibleCurve));
    }

    #[test]
    fn frobenius_of_hermitian_y() {
        let k = make_field(2, 2, None).unwrap();
        let f = BiPoly::from_int_terms(&k, &[(3, 0, 1), (0, 3, 1), (0, 0, 1)]);
        let c = CurveModel::new(k.clone(), f).unwrap();
        // y^4 = y * y^3 = y (1 + x^3)
        let expect = c.scale_poly(&c.y(), &UniPoly::from_coeffs(vec![Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ONE]));
        assert_eq!(c.qpower(&c.y(), 1, 4), expect);
        assert_eq!(c.qpower(&c.y(), 0, 4), c.y());
        // freshman's dream
        let s = c.add(&c.x(), &c.y());
        assert_eq!(c.qpower(&s, 1, 4), c.pow(&s, 4));
        assert_eq!(c.qpower(&s, 2, 4), c.pow(&s, 16));
    }
}
