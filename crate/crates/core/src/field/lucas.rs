/// `C(k, r) mod p` by Lucas' theorem: multiply the digit binomials of `k`
/// and `r` in base `p`.
pub fn binom_mod_p(k: u64, r: u64, p: u64) -> u64 {
    if r > k {
        return 0;
    }
    let (mut k, mut r) = (k, r);
    let mut acc = 1u64;
    while r > 0 || k > 0 {
        let (kd, rd) = (k % p, r % p);
        if rd > kd {
            return 0;
        }
        acc = acc * small_binom(kd, rd, p) % p;
        k /= p;
        r /= p;
    }
    acc
}

/// `C(k, r) mod p` for any integer `k`, using `C(-n, r) = (-1)^r C(n + r - 1, r)`.
/// This is the coefficient rule for Hasse derivatives of Laurent monomials.
pub fn binom_mod_p_signed(k: i64, r: u64, p: u64) -> u64 {
    if k >= 0 {
        return binom_mod_p(k as u64, r, p);
    }
    let n = k.unsigned_abs();
    let b = binom_mod_p(n + r - 1, r, p);
    if r % 2 == 1 && b != 0 {
        p - b
    } else {
        b
    }
}

fn small_binom(k: u64, r: u64, p: u64) -> u64 {
    let r = r.min(k - r);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..r {
        num = num * ((k - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * inv_mod_p(den, p) % p
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    let (mut b, mut e, mut r) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// `det(C(rows[i], cols[j]) mod p)` by elimination over `F_p`.
pub fn binom_det_mod_p(rows: &[u64], cols: &[u64], p: u64) -> u64 {
    assert_eq!(rows.len(), cols.len(), "binomial matrix must be square");
    let n = rows.len();
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|&j| cols.iter().map(|&c| binom_mod_p(j, c, p)).collect())
        .collect();
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            m.swap(piv, col);
            det = (p - det) % p;
        }
        let pv = m[col][col];
        det = det * pv % p;
        let inv = inv_mod_p(pv, p);
        for r in col + 1..n {
            let factor = m[r][col] * inv % p;
            if factor == 0 {
                continue;
            }
            for c in col..n {
                m[r][c] = (m[r][c] + (p - factor) * m[col][c]) % p;
            }
        }
    }
    det
}
