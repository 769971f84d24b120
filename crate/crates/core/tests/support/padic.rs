//! Independent oracles and randomized cases for the p-adic core.

#![allow(dead_code)]

use linv_core::padic::Padic;
use linv_core::periods::{branch_change_check, Base, FieldSpec, Period};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub const PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

/// `log(x)` by summing the defining series on `x^{p-1}` (or `x^2` for p = 2)
/// in exact rationals, far beyond the target precision.
pub fn series_log(p: u64, x: i64, abs: i64) -> Padic {
    let e: u32 = if p == 2 { 2 } else { (p - 1) as u32 };
    let u = BigRational::from_integer(BigInt::from(x).pow(e));
    let z = u - BigRational::one();
    let mut acc = BigRational::zero();
    let mut zk = BigRational::one();
    for k in 1..(abs as u64 * 4 + 16) {
        zk = &zk * &z;
        let term = &zk / BigRational::from_integer(k.into());
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    let acc = acc / BigRational::from_integer(e.into());
    if acc.is_zero() {
        return Padic::zero(p, abs);
    }
    Padic::from_rational(p, &acc, 64).truncate_abs(abs)
}

pub const PROPERTIES: [&str; 6] = [
    "log matches the series",
    "log is a homomorphism",
    "log_x(x) = 0",
    "change of direction",
    "Teichmuller multiplicativity",
    "precision soundness",
];

/// Draws one instance of property `which` with `next(lo, hi)` (inclusive)
/// and checks it.
pub fn random_case(which: usize, mut next: impl FnMut(i64, i64) -> i64) -> Result<(), String> {
    match which % PROPERTIES.len() {
        0 => {
            let p = prime(&mut next, false);
            let a = unit(&mut next, p, 2000);
            let l = Padic::from_i64(p, a, 8).log().map_err(|e| e.to_string())?;
            let oracle = series_log(p, a, l.abs_precision());
            check(l.eq_to_precision(&oracle), || format!("log {a} at {p}: {l} vs {oracle}"))
        }
        1 => {
            let p = prime(&mut next, false);
            let (a, b, k) = (unit(&mut next, p, 5000), unit(&mut next, p, 5000), next(0, 2) as u32);
            let x = Padic::from_i64(p, a * (p as i64).pow(k), 10);
            let y = Padic::from_i64(p, b, 10);
            let lhs = (&x * &y).log().map_err(|e| e.to_string())?;
            let rhs = &x.log().unwrap() + &y.log().unwrap();
            check(lhs.eq_to_precision(&rhs), || format!("log({a} p^{k} * {b}) at {p}"))
        }
        2 => {
            let p = prime(&mut next, false);
            let x = Padic::from_i64(p, next(1, 5000) * (p as i64).pow(next(1, 3) as u32), 10);
            check(x.branch_log(&x).map_err(|e| e.to_string())?.is_zero(), || format!("log_x(x), x = {x}"))
        }
        3 => {
            let p = prime(&mut next, true);
            let pi = p as i64;
            let (a, b, c) = (unit(&mut next, p, 400), unit(&mut next, p, 400), unit(&mut next, p, 400));
            let e = [-3, -2, -1, 1, 2, 3][next(0, 5) as usize];
            let q = Period::new(FieldSpec::qp(p), vec![(Base::int(a * pi), e), (Base::int(c), 2)])
                .map_err(|e| e.to_string())?;
            let rep =
                branch_change_check(&q, &Base::int(b * pi), &Base::int(c * pi * pi), 10).map_err(|e| e.to_string())?;
            check(rep.comparison.equal, || format!("change of direction at {p}: {rep:?}"))
        }
        4 => {
            let p = prime(&mut next, true);
            let (a, b) = (unit(&mut next, p, 5000), unit(&mut next, p, 5000));
            let w = |x: i64| Padic::teichmuller(p, x, 12).unwrap();
            let one = Padic::from_i64(p, 1, 12);
            let ok =
                (&w(a) * &w(b)).eq_to_precision(&w(a * b)) && w(a).pow(p as i64 - 1).unwrap().eq_to_precision(&one);
            check(ok, || format!("Teichmuller {a}, {b} at {p}"))
        }
        _ => {
            let p = prime(&mut next, false);
            let a = unit(&mut next, p, 5000);
            let n = next(5, 11) as u32;
            let lo = Padic::from_i64(p, a, n).log().map_err(|e| e.to_string())?;
            let hi = Padic::from_i64(p, a, n + 5).log().map_err(|e| e.to_string())?;
            check(hi.truncate_abs(lo.abs_precision()) == lo, || format!("log {a} at {p}, N = {n}"))
        }
    }
}

fn prime(next: &mut impl FnMut(i64, i64) -> i64, odd: bool) -> u64 {
    PRIMES[next(odd as i64, 4) as usize]
}

fn unit(next: &mut impl FnMut(i64, i64) -> i64, p: u64, hi: i64) -> i64 {
    loop {
        let a = next(1, hi);
        if a % p as i64 != 0 {
            return a;
        }
    }
}

fn check(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}
