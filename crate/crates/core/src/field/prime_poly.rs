//! Dense polynomials over a prime field, just enough to test candidate
//! moduli for irreducibility.

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        if c != 0 {
            for i in 0..=dm {
                let idx = top - dm + i;
                r[idx] = (r[idx] + (p - c) * m[i]) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem(&out, m, p)
}

fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn distinct_prime_factors(n: u64) -> Vec<u64> {
    prime_factors(n)
}

/// Rabin's test for a monic polynomial (low-to-high coefficients).
pub(crate) fn is_irreducible(m: &[u64], p: u64) -> bool {
    let h = m.len() as u64 - 1;
    if h == 0 || m[h as usize] != 1 {
        return false;
    }
    if h == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // frob[k] = x^(p^k) mod m
    let mut frob = vec![rem(&x, m, p)];
    for k in 1..=h as usize {
        let next = pow_mod(&frob[k - 1], p, m, p);
        frob.push(next);
    }
    let sub_x = |v: &[u64]| {
        let mut w = v.to_vec();
        if w.len() < 2 {
            w.resize(2, 0);
        }
        w[1] = (w[1] + p - 1) % p;
        trim(&mut w);
        w
    };
    if !sub_x(&frob[h as usize]).is_empty() {
        return false;
    }
    for l in prime_factors(h) {
        let g = gcd(&sub_x(&frob[(h / l) as usize]), m, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}
