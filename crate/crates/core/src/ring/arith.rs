//! Integer helpers shared by the carriers: modular arithmetic on `u64`
//! moduli and primality testing for machine-size and big integers.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let ext = (a as i128).extended_gcd(&(m as i128));
    if ext.gcd != 1 {
        return None;
    }
    Some(ext.x.rem_euclid(m as i128) as u64)
}

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Deterministic Miller–Rabin; the first twelve prime bases cover all of `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES[..12] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mr_round(n: &BigUint, d: &BigUint, s: u64, a: u64) -> bool {
    let n_minus_one = n - 1u32;
    let mut x = BigUint::from(a).modpow(d, n);
    if x.is_one() || x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_one {
            return true;
        }
    }
    false
}

/// Bound below which the 13 smallest prime bases make Miller–Rabin exact.
fn mr_proven_bound() -> BigUint {
    BigUint::parse_bytes(b"3317044064679887385961981", 10).expect("literal")
}

/// `Some(true)` / `Some(false)` when primality is decided, `None` when `n` is
/// past the proven deterministic range and no compositeness witness turned up.
pub fn big_primality(n: &BigUint) -> Option<bool> {
    if let Some(small) = n.to_u64() {
        return Some(is_prime_u64(small));
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return Some(false);
        }
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    for &a in &MR_BASES {
        if !mr_round(n, &d, s, a) {
            return Some(false);
        }
    }
    if *n < mr_proven_bound() {
        Some(true)
    } else {
        None
    }
}

/// Smallest nontrivial divisor of `n` below `limit`, by trial division.
pub(crate) fn small_divisor(n: &BigUint, limit: u64) -> Option<BigUint> {
    let mut d = 2u64;
    while d < limit {
        let dd = BigUint::from(d);
        if &dd * &dd > *n {
            return None;
        }
        if (n % d).is_zero() {
            return Some(dd);
        }
        d += 1;
    }
    None
}

/// All positive divisors of `n`, or `None` when `n` exceeds `limit`.
pub(crate) fn divisors(n: &BigUint, limit: u64) -> Option<Vec<BigUint>> {
    let n = n.to_u64().filter(|&v| v <= limit)?;
    if n == 0 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small.into_iter().map(BigUint::from).collect())
}
