//! Arithmetic in the prime field `F_p` for word-size primes.
//!
//! Elements are plain `u32` residues in `[0, p)`. The modulus lives on the
//! ring descriptor, so these helpers take it explicitly.

use crate::error::KernelError;

/// Default characteristic used across the library.
pub const DEFAULT_PRIME: u32 = 32003;

/// Largest modulus accepted; keeps every product inside a `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn check_prime(p: u64) -> Result<u32, KernelError> {
    if p > MAX_PRIME || !is_prime(p) {
        return Err(KernelError::NotPrime(p));
    }
    Ok(p as u32)
}

#[inline]
pub fn add(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    if s >= p as u64 {
        (s - p as u64) as u32
    } else {
        s as u32
    }
}

#[inline]
pub fn sub(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        (a as u64 + p as u64 - b as u64) as u32
    }
}

#[inline]
pub fn neg(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn pow(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1u32 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

/// Multiplicative inverse; `a` must be nonzero.
pub fn inv(a: u32, p: u32) -> u32 {
    debug_assert!(a != 0 && a < p);
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(p as i64) as u32
}

/// Reduce a signed integer into `[0, p)`.
pub fn from_i64(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

/// Symmetric representative in `(-p/2, p/2]`, used when rendering.
pub fn to_signed(a: u32, p: u32) -> i64 {
    if a as u64 > p as u64 / 2 {
        a as i64 - p as i64
    } else {
        a as i64
    }
}
