//! Closed-form baselines and the degree of the two-Frobenius divisor.

use num_rational::Ratio;

/// `1 + q^r + floor(2g sqrt(q^r))`.
pub fn weil_bound(g: u64, q: u64, r: u32) -> u128 {
    let qr = (q as u128).pow(r);
    1 + qr + (4 * (g as u128) * (g as u128) * qr).isqrt()
}

/// `floor(q + 1 + (sqrt((8q + 1) g^2 + 4(q^2 - q) g) - g) / 2)`.
pub fn ihara_bound(g: u64, q: u64) -> u128 {
    let (g, q) = (g as u128, q as u128);
    let disc = (8 * q + 1) * g * g + 4 * (q * q - q) * g;
    // sqrt(disc) >= g, and flooring the root first does not change the floor of the half
    (2 * q + 2 + disc.isqrt() - g) / 2
}

/// Stöhr–Voloch: `N_1 <= (Σν_i (2g - 2) + (q + n) d) / n`.
pub fn sv_bound(nu_sum: u64, g: u64, q: u64, n: u64, d: u64) -> Ratio<i128> {
    let num = nu_sum as i128 * (2 * g as i128 - 2) + (q as i128 + n as i128) * d as i128;
    Ratio::new(num, n as i128)
}

/// `deg T_(u,m) = Σκ_i (2g - 2) + (q^m + q^u + n - 1) d`.
pub fn deg_t(kappa_sum: u64, g: u64, q: u64, u: u32, m: u32, n: u64, d: u64) -> i128 {
    let (q, d) = (q as i128, d as i128);
    kappa_sum as i128 * (2 * g as i128 - 2) + (q.pow(m) + q.pow(u) + n as i128 - 1) * d
}
