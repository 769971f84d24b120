//! Small-integer number theory used throughout the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation as `(prime, exponent)` pairs in increasing order.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: i64, m: i64) -> Option<i64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as i64)
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> i32 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if mod_pow(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(d/n)` for n >= 1; used for quadratic characters.
pub fn kronecker(d: i64, n: u64) -> i32 {
    let mut result = 1i32;
    for (q, e) in factor(n) {
        let s = if q == 2 {
            if d % 2 == 0 {
                0
            } else {
                match d.rem_euclid(8) {
                    1 | 7 => 1,
                    _ => -1,
                }
            }
        } else {
            legendre(d, q)
        };
        if e % 2 == 1 {
            result *= s;
        } else if s == 0 {
            result = 0;
        }
    }
    result
}

/// Whether `d` is a fundamental discriminant.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let squarefree = |n: u64| factor(n).iter().all(|&(_, e)| e == 1);
    match d.rem_euclid(4) {
        1 => squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// p-adic valuation of a nonzero big integer.
pub fn val_big(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Splits `n = p^v * m` with `p ∤ m`.
pub fn split_p(n: &BigInt, p: u64) -> (u32, BigInt) {
    let v = val_big(n, p);
    (v, n / BigInt::from(p).pow(v))
}

pub fn big_pow(p: u64, e: u32) -> BigInt {
    BigInt::from(p).pow(e)
}

/// Integer square root test for small signed values.
pub fn is_square_i64(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt() as i64;
    (r.saturating_sub(1)..=r + 1).any(|s| s >= 0 && s * s == n)
}

pub fn big_one() -> BigInt {
    BigInt::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorisation_and_primes() {
        assert_eq!(factor(275), vec![(5, 2), (11, 1)]);
        assert_eq!(primes_up_to(13), vec![2, 3, 5, 7, 11, 13]);
        assert!(!is_prime(1));
        assert!(is_prime(37));
    }

    #[test]
    fn kronecker_symbols() {
        assert_eq!(kronecker(5, 11), 1);
        assert_eq!(kronecker(-3, 11), -1);
        assert_eq!(kronecker(-7, 11), 1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
    }

    #[test]
    fn fundamental_discriminants() {
        let fd: Vec<i64> = (-12..=13).filter(|&d| is_fundamental_discriminant(d)).collect();
        assert_eq!(fd, vec![-11, -8, -7, -4, -3, 5, 8, 12, 13]);
    }

    #[test]
    fn inverse_mod() {
        assert_eq!(mod_inv(2, 5), Some(3));
        assert_eq!(mod_inv(-3, 7), Some(2));
        assert_eq!(mod_inv(5, 10), None);
    }
}
