//! Fixed-precision arithmetic in `Q_p` and its unramified extensions.
//!
//! A nonzero [`Padic`] stores `p^v * u + O(p^(v + N))` where `u` is a unit
//! residue modulo `p^N`. `N` is the number of significant digits. A zero
//! stores only its absolute precision, i.e. it represents `O(p^k)`.
//!
//! Precision follows the usual interval rules:
//! ```text
//! (p^a u + O(p^(a+M))) + (p^b w + O(p^(b+N)))  is known to O(p^min(a+M, b+N))
//! (p^a u + O(p^(a+M))) * (p^b w + O(p^(b+N)))  has min(M, N) significant digits
//! ```
//! so the reported precision never exceeds what the inputs justify.

mod fp_poly;
mod unramified;

pub use fp_poly::FpPoly;
pub use unramified::{UnramifiedElement, UnramifiedField};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{big_pow, split_p};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Padic {
    prime: u64,
    /// Valuation for nonzero values, absolute precision for zero.
    valuation: i64,
    unit: BigInt,
    precision: u32,
}

impl Padic {
    /// `O(p^abs_precision)`.
    pub fn zero(prime: u64, abs_precision: i64) -> Self {
        Padic { prime, valuation: abs_precision, unit: BigInt::zero(), precision: 0 }
    }

    /// Builds `p^valuation * unit` to `precision` significant digits. `unit`
    /// must be prime to `p` (it is reduced here).
    pub fn from_parts(prime: u64, valuation: i64, unit: BigInt, precision: u32) -> Self {
        if precision == 0 {
            return Padic::zero(prime, valuation);
        }
        let m = big_pow(prime, precision);
        let unit = unit.mod_floor(&m);
        debug_assert!(!(&unit % BigInt::from(prime)).is_zero());
        Padic { prime, valuation, unit, precision }
    }

    /// The p-adic number congruent to `value` modulo `p^abs_precision`.
    pub fn from_integer_mod(prime: u64, value: &BigInt, abs_precision: i64) -> Self {
        if abs_precision <= 0 {
            return Padic::zero(prime, abs_precision);
        }
        let m = big_pow(prime, abs_precision as u32);
        let r = value.mod_floor(&m);
        if r.is_zero() {
            return Padic::zero(prime, abs_precision);
        }
        let (v, u) = split_p(&r, prime);
        Padic::from_parts(prime, v as i64, u, (abs_precision - v as i64) as u32)
    }

    /// An exact rational rounded to `precision` significant digits.
    pub fn from_rational(prime: u64, value: &BigRational, precision: u32) -> Self {
        if value.is_zero() {
            return Padic::zero(prime, precision as i64);
        }
        let (a, num) = split_p(value.numer(), prime);
        let (b, den) = split_p(value.denom(), prime);
        let m = big_pow(prime, precision);
        let inv = mod_inverse(&den, &m).expect("denominator is prime to p");
        Padic::from_parts(prime, a as i64 - b as i64, num * inv, precision)
    }

    pub fn from_i64(prime: u64, value: i64, precision: u32) -> Self {
        Padic::from_rational(prime, &BigRational::from_integer(value.into()), precision)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.precision == 0
    }

    /// Valuation, or `None` for (an approximation of) zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.valuation)
    }

    /// Normalized valuation; errors on zero.
    pub fn ord(&self) -> Result<i64> {
        self.valuation().ok_or(Error::ValuationOfZero)
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// Number of significant digits (0 for zero).
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The exponent `k` in the error term `O(p^k)`.
    pub fn abs_precision(&self) -> i64 {
        self.valuation + self.precision as i64
    }

    /// Drops digits so that the absolute precision is at most `abs`.
    pub fn truncate_abs(&self, abs: i64) -> Padic {
        if abs >= self.abs_precision() {
            return self.clone();
        }
        if self.is_zero() || abs <= self.valuation {
            return Padic::zero(self.prime, abs.min(self.abs_precision()));
        }
        let rel = (abs - self.valuation) as u32;
        Padic::from_parts(self.prime, self.valuation, self.unit.clone(), rel)
    }

    /// Integer representative modulo `p^abs_precision()`; requires a
    /// nonnegative valuation.
    pub fn residue(&self) -> Result<BigInt> {
        if self.is_zero() {
            return Ok(BigInt::zero());
        }
        if self.valuation < 0 {
            return Err(Error::Invalid("residue of a non-integral p-adic number".into()));
        }
        Ok(&self.unit * big_pow(self.prime, self.valuation as u32))
    }

    /// The rational `p^v * u` with `0 <= u < p^N`.
    pub fn to_rational(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let scale = big_pow(self.prime, self.valuation.unsigned_abs() as u32);
        let u = BigRational::from_integer(self.unit.clone());
        if self.valuation >= 0 {
            u * BigRational::from_integer(scale)
        } else {
            u / BigRational::from_integer(scale)
        }
    }

    fn check_prime(&self, other: &Padic) {
        assert_eq!(self.prime, other.prime, "mixing p-adic numbers for different primes");
    }

    /// Multiplication by an exact rational; keeps the relative precision.
    pub fn scale(&self, r: &BigRational) -> Padic {
        if r.is_zero() {
            return Padic::zero(self.prime, i64::MAX / 4);
        }
        if self.is_zero() {
            let v = rational_valuation(r, self.prime);
            return Padic::zero(self.prime, self.valuation + v);
        }
        let c = Padic::from_rational(self.prime, r, self.precision);
        Padic::from_parts(self.prime, self.valuation + c.valuation, &self.unit * &c.unit, self.precision)
    }

    pub fn checked_div(&self, other: &Padic) -> Result<Padic> {
        self.check_prime(other);
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Padic::zero(self.prime, self.valuation - other.valuation));
        }
        let rel = self.precision.min(other.precision);
        let m = big_pow(self.prime, rel);
        let inv = mod_inverse(&other.unit, &m).expect("unit");
        Ok(Padic::from_parts(self.prime, self.valuation - other.valuation, &self.unit * inv, rel))
    }

    pub fn inverse(&self) -> Result<Padic> {
        let one = Padic::from_parts(self.prime, 0, BigInt::one(), self.precision.max(1));
        one.checked_div(self)
    }

    pub fn pow(&self, e: i64) -> Result<Padic> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        if self.is_zero() {
            return Ok(if e == 0 {
                Padic::from_i64(self.prime, 1, self.valuation.clamp(1, 64) as u32)
            } else {
                Padic::zero(self.prime, self.valuation.saturating_mul(e))
            });
        }
        let m = big_pow(self.prime, self.precision);
        let u = self.unit.modpow(&BigInt::from(e), &m);
        Ok(Padic::from_parts(self.prime, self.valuation * e, u, self.precision))
    }

    /// Whether the two values agree on every digit both of them know.
    pub fn eq_to_precision(&self, other: &Padic) -> bool {
        (self - other).is_zero()
    }

    /// Absolute precision to which the two values are known to agree:
    /// the valuation of the difference, capped by the common precision.
    pub fn agreement(&self, other: &Padic) -> i64 {
        let d = self - other;
        d.valuation().unwrap_or(d.abs_precision())
    }

    /// Digits of the unit part, least significant first.
    pub fn digits(&self) -> Vec<u64> {
        let p = BigInt::from(self.prime);
        let mut u = self.unit.clone();
        (0..self.precision)
            .map(|_| {
                let (q, r) = u.div_rem(&p);
                u = q;
                r.to_u64().unwrap()
            })
            .collect()
    }

    /// Human-readable expansion, least significant digit first.
    pub fn digit_string(&self) -> String {
        if self.is_zero() {
            return format!("O({}^{})", self.prime, self.valuation);
        }
        let digits: Vec<String> = self.digits().iter().map(u64::to_string).collect();
        format!(
            "{}^{} * ({}) + O({}^{})",
            self.prime,
            self.valuation,
            digits.join(" "),
            self.prime,
            self.abs_precision()
        )
    }

    pub fn to_json(&self) -> PadicJson {
        PadicJson {
            p: self.prime,
            v: if self.is_zero() { "inf".into() } else { self.valuation.to_string() },
            u: self.unit.to_string(),
            n: self.precision,
            abs_precision: self.abs_precision(),
            digits: self.digit_string(),
        }
    }

    /// Teichmüller representative of the residue `a` to `precision` digits.
    pub fn teichmuller(prime: u64, a: i64, precision: u32) -> Result<Padic> {
        if a.rem_euclid(prime as i64) == 0 {
            return Err(Error::NotAUnitResidue);
        }
        let m = big_pow(prime, precision);
        let p = BigInt::from(prime);
        let mut x = BigInt::from(a).mod_floor(&m);
        // x -> x^p gains one digit per step
        for _ in 0..precision {
            let next = x.modpow(&p, &m);
            if next == x {
                break;
            }
            x = next;
        }
        Ok(Padic::from_parts(prime, 0, x, precision))
    }

    /// Iwasawa logarithm: the branch with `log(p) = 0`.
    pub fn log(&self) -> Result<Padic> {
        if self.is_zero() {
            return Err(Error::ValuationOfZero);
        }
        Ok(unit_log(self.prime, &self.unit, self.precision))
    }

    /// The branch of the logarithm with `log_x(x) = 0`, applied to `self`.
    pub fn branch_log(&self, x: &Padic) -> Result<Padic> {
        self.check_prime(x);
        let ox = x.ord()?;
        if ox == 0 {
            return Err(Error::NotABranchDirection);
        }
        let oy = self.ord()?;
        let ratio = BigRational::new(oy.into(), ox.into());
        Ok(&self.log()? - &x.log()?.scale(&ratio))
    }

    /// `a / ω(a)` for a unit `a`; the projection to `1 + pZ_p` (`1 + 4Z_2`).
    pub fn one_unit_part(&self) -> Result<Padic> {
        if self.ord()? != 0 {
            return Err(Error::Invalid("one-unit part of a non-unit".into()));
        }
        let r = (&self.unit % BigInt::from(self.prime)).to_i64().unwrap();
        let w = if self.prime == 2 {
            let s = if (&self.unit % BigInt::from(4)) == BigInt::from(3) { -1 } else { 1 };
            Padic::from_i64(2, s, self.precision)
        } else {
            Padic::teichmuller(self.prime, r, self.precision)?
        };
        self.checked_div(&w)
    }
}

/// `log(u)` for a unit residue `u` mod `p^n`; the result is exact modulo
/// `p^n` for odd `p` and modulo `p^(n-1)` for `p = 2`.
fn unit_log(p: u64, u: &BigInt, n: u32) -> Padic {
    let exponent = if p == 2 { 2u64 } else { p - 1 };
    let target = if p == 2 { n as i64 - 1 } else { n as i64 };
    if target <= 0 {
        return Padic::zero(p, target);
    }
    // room for the p-parts of the k in z^k / k
    let guard = {
        let mut g = 0u32;
        let mut k = 1u64;
        while k <= 4 * n as u64 + 8 {
            k *= p;
            g += 1;
        }
        g
    };
    let work = n + guard + 2;
    let m = big_pow(p, work);
    let w = u.modpow(&BigInt::from(exponent), &m);
    let z = (w - BigInt::one()).mod_floor(&m);
    if z.is_zero() {
        return Padic::zero(p, target);
    }
    let (vz, _) = split_p(&z, p);
    // dividing by the exponent at the end costs its p-part
    let needed = target + if p == 2 { 1 } else { 0 };
    let mut acc = BigRational::zero();
    let mut zk = BigInt::one();
    let mut k: u64 = 0;
    loop {
        k += 1;
        zk = (&zk * &z).mod_floor(&m);
        // k*vz - floor(log_p k) is nondecreasing, so later terms are smaller
        if k as i64 * vz as i64 - ilog(k, p) as i64 >= needed {
            break;
        }
        let term = BigRational::new(zk.clone(), BigInt::from(k));
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc /= BigRational::from_integer(BigInt::from(exponent));
    let value = Padic::from_rational(p, &acc, work + 8);
    value.truncate_abs(target).normalize_abs(target)
}

fn ilog(k: u64, p: u64) -> u32 {
    let mut e = 0;
    let mut q = p;
    while q <= k {
        q = q.saturating_mul(p);
        e += 1;
    }
    e
}

impl Padic {
    /// Re-expresses a value known to absolute precision `abs`.
    fn normalize_abs(self, abs: i64) -> Padic {
        if self.is_zero() {
            return Padic::zero(self.prime, abs.min(self.abs_precision()));
        }
        self.truncate_abs(abs)
    }
}

pub fn rational_valuation(r: &BigRational, p: u64) -> i64 {
    let (a, _) = split_p(r.numer(), p);
    let (b, _) = split_p(r.denom(), p);
    a as i64 - b as i64
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.mod_floor(m).extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

impl Add for &Padic {
    type Output = Padic;
    fn add(self, rhs: &Padic) -> Padic {
        self.check_prime(rhs);
        let abs = self.abs_precision().min(rhs.abs_precision());
        if self.is_zero() && rhs.is_zero() {
            return Padic::zero(self.prime, abs);
        }
        let base = match (self.valuation(), rhs.valuation()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!(),
        };
        if abs <= base {
            return Padic::zero(self.prime, abs);
        }
        let shift = |x: &Padic| -> BigInt {
            if x.is_zero() {
                BigInt::zero()
            } else {
                &x.unit * big_pow(x.prime, (x.valuation - base) as u32)
            }
        };
        let sum = shift(self) + shift(rhs);
        let reduced = Padic::from_integer_mod(self.prime, &sum, abs - base);
        if reduced.is_zero() {
            Padic::zero(self.prime, abs)
        } else {
            Padic { valuation: reduced.valuation + base, ..reduced }
        }
    }
}

impl Neg for &Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        if self.is_zero() {
            return self.clone();
        }
        Padic::from_parts(self.prime, self.valuation, -&self.unit, self.precision)
    }
}

impl Sub for &Padic {
    type Output = Padic;
    fn sub(self, rhs: &Padic) -> Padic {
        self + &(-rhs)
    }
}

impl Mul for &Padic {
    type Output = Padic;
    fn mul(self, rhs: &Padic) -> Padic {
        self.check_prime(rhs);
        match (self.is_zero(), rhs.is_zero()) {
            (true, true) => Padic::zero(self.prime, self.valuation + rhs.valuation),
            (true, false) => Padic::zero(self.prime, self.valuation + rhs.valuation),
            (false, true) => Padic::zero(self.prime, self.valuation + rhs.valuation),
            (false, false) => {
                let rel = self.precision.min(rhs.precision);
                Padic::from_parts(self.prime, self.valuation + rhs.valuation, &self.unit * &rhs.unit, rel)
            }
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Padic {
            type Output = Padic;
            fn $m(self, rhs: Padic) -> Padic {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.digit_string())
    }
}

/// Wire form of a [`Padic`]: the triple `(p, v, u mod p^N)` plus `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicJson {
    pub p: u64,
    /// Decimal valuation, or `"inf"` for zero.
    pub v: String,
    pub u: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub abs_precision: i64,
    pub digits: String,
}

impl PadicJson {
    pub fn to_padic(&self) -> Result<Padic> {
        let parse = |s: &str| -> Result<BigInt> { s.parse().map_err(|_| Error::Parse(format!("bad integer {s:?}"))) };
        if self.v == "inf" {
            return Ok(Padic::zero(self.p, self.abs_precision));
        }
        let v: i64 = self.v.parse().map_err(|_| Error::Parse(format!("bad valuation {:?}", self.v)))?;
        let u = parse(&self.u)?;
        if u.is_negative() || (&u % BigInt::from(self.p)).is_zero() {
            return Err(Error::Parse("unit part must be a positive residue prime to p".into()));
        }
        Ok(Padic::from_parts(self.p, v, u, self.n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pz(p: u64, x: i64, n: u32) -> Padic {
        Padic::from_i64(p, x, n)
    }

    #[test]
    fn ord_examples() {
        assert_eq!(pz(5, 50, 10).ord().unwrap(), 2);
        assert_eq!(pz(11, -161051, 10).ord().unwrap(), 5);
        assert_eq!(pz(7, 3, 10).ord().unwrap(), 0);
        assert_eq!(Padic::zero(7, 10).ord(), Err(Error::ValuationOfZero));
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(Padic::teichmuller(5, 1, 6).unwrap(), pz(5, 1, 6));
        assert_eq!(Padic::teichmuller(5, 2, 2).unwrap().residue().unwrap(), BigInt::from(7));
        assert_eq!(Padic::teichmuller(3, 2, 3).unwrap().residue().unwrap(), BigInt::from(26));
        assert!(Padic::teichmuller(5, 10, 3).is_err());
    }

    #[test]
    fn log_examples() {
        assert!(pz(5, 1, 8).log().unwrap().is_zero());
        assert!(pz(5, 5, 8).log().unwrap().is_zero());
        let l = pz(5, 6, 3).log().unwrap();
        assert_eq!(l.residue().unwrap(), BigInt::from(55));
        assert_eq!(l.abs_precision(), 3);
    }

    #[test]
    fn branch_log_examples() {
        let x = pz(5, 30, 3);
        let y = pz(5, 5, 3);
        let l = y.branch_log(&x).unwrap();
        assert_eq!(l.residue().unwrap(), BigInt::from(70));
        assert!(x.branch_log(&x).unwrap().is_zero());
        assert_eq!(y.branch_log(&pz(5, 3, 3)), Err(Error::NotABranchDirection));
        let p = pz(5, 5, 6);
        let y = pz(5, 7 * 25, 6);
        assert_eq!(y.branch_log(&p).unwrap(), y.log().unwrap());
    }

    #[test]
    fn log_two_adic() {
        // log_2(5) = 4 - 8 + 64/3 - 64 + ... ; known mod 2^6 via the series oracle
        let five = pz(2, 5, 12);
        let l = five.log().unwrap();
        assert_eq!(l.abs_precision(), 11);
        let mut acc = BigRational::zero();
        let z = BigRational::from_integer(4.into());
        for k in 1..60i64 {
            let t = z.pow(k as i32) / BigRational::from_integer(k.into());
            if k % 2 == 1 {
                acc += t
            } else {
                acc -= t
            }
        }
        let oracle = Padic::from_rational(2, &acc, 40).truncate_abs(11);
        assert!(l.eq_to_precision(&oracle));
        // log(-1) = 0
        assert!(pz(2, -1, 10).log().unwrap().is_zero());
    }

    #[test]
    fn precision_rules() {
        let a = pz(5, 1, 4); // 1 + O(5^4)
        let b = Padic::from_parts(5, 1, BigInt::from(1), 6); // 5 + O(5^7)
        let s = &a + &b;
        assert_eq!(s.abs_precision(), 4);
        let d = &a - &a;
        assert!(d.is_zero());
        assert_eq!(d.abs_precision(), 4);
        let m = &a * &b;
        assert_eq!(m.precision(), 4);
        assert_eq!(m.valuation(), Some(1));
        let q = b.checked_div(&pz(5, 25, 3)).unwrap();
        assert_eq!(q.valuation(), Some(-1));
        assert_eq!(q.precision(), 3);
    }

    #[test]
    fn json_round_trip_and_digits() {
        let x = Padic::from_rational(5, &BigRational::new(7.into(), 25.into()), 4);
        let j = x.to_json();
        assert_eq!(j.v, "-2");
        assert_eq!(j.to_padic().unwrap(), x);
        assert_eq!(x.digits(), vec![2, 1, 0, 0]);
        assert_eq!(x.digit_string(), "5^-2 * (2 1 0 0) + O(5^2)");
        let z = Padic::zero(5, 3).to_json();
        assert_eq!(z.v, "inf");
        assert!(z.to_padic().unwrap().is_zero());
        assert_eq!(serde_json::to_string(&j).unwrap(), serde_json::to_string(&x.to_json()).unwrap());
    }
}
