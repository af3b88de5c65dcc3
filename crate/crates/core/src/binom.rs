//! Exact binomial coefficients.

/// `C(n, k)` as an exact 128-bit integer; zero when `k > n`.
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `C(n, k)` for a possibly negative top argument, clamped to zero.
pub(crate) fn binom_i(n: i64, k: u64) -> i128 {
    if n < 0 {
        0
    } else {
        binom(n as u64, k) as i128
    }
}
