//! Integral Weierstrass models over `Q`, local reduction data and Tate
//! periods at multiplicative primes.

mod table;
mod tate;

pub use table::{bundled_table, parse_ainvs, parse_table, CurveEntry, CurveTable};
pub use tate::{
    cached_j_coefficients, curve_l_invariant, j_coefficients, j_of_q, seed_j_coefficients, tate_l_invariant,
    tate_period, TatePeriod,
};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{factor, is_prime, kronecker, legendre, val_big};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeierstrassCurve {
    a: [BigInt; 5],
}

/// Standard invariants of a Weierstrass model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub b2: BigInt,
    pub b4: BigInt,
    pub b6: BigInt,
    pub b8: BigInt,
    pub c4: BigInt,
    pub c6: BigInt,
    pub discriminant: BigInt,
    pub j: BigRational,
}

impl WeierstrassCurve {
    pub fn new(a: [i64; 5]) -> Result<Self> {
        Self::from_big(a.map(BigInt::from))
    }

    pub fn from_big(a: [BigInt; 5]) -> Result<Self> {
        let e = WeierstrassCurve { a };
        if e.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(e)
    }

    pub fn a_invariants(&self) -> &[BigInt; 5] {
        &self.a
    }

    fn bs(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        let [a1, a2, a3, a4, a6] = &self.a;
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        (b2, b4, b6, b8)
    }

    pub fn c4(&self) -> BigInt {
        let (b2, b4, _, _) = self.bs();
        &b2 * &b2 - 24 * b4
    }

    pub fn c6(&self) -> BigInt {
        let (b2, b4, b6, _) = self.bs();
        -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * b6
    }

    pub fn discriminant(&self) -> BigInt {
        let (b2, b4, b6, b8) = self.bs();
        -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    pub fn j_invariant(&self) -> BigRational {
        let c4 = self.c4();
        BigRational::new(&c4 * &c4 * &c4, self.discriminant())
    }

    pub fn invariants(&self) -> Invariants {
        let (b2, b4, b6, b8) = self.bs();
        Invariants {
            b2,
            b4,
            b6,
            b8,
            c4: self.c4(),
            c6: self.c6(),
            discriminant: self.discriminant(),
            j: self.j_invariant(),
        }
    }

    /// An integral model with the given `c4`, `c6`, normalised so that
    /// `a1, a3 ∈ {0, 1}` and `a2 ∈ {-1, 0, 1}`; `None` if no such model
    /// exists.
    pub fn from_c4c6(c4: &BigInt, c6: &BigInt) -> Option<Self> {
        let c6m = (-c6).mod_floor(&BigInt::from(12)).to_i64().unwrap();
        let first = if c6m > 6 { c6m - 12 } else { c6m };
        let mut candidates: Vec<i64> = vec![first];
        candidates.extend((-5..=6).filter(|&b| b != first));
        for b2 in candidates {
            let b2 = BigInt::from(b2);
            let num4 = &b2 * &b2 - c4;
            if !num4.is_multiple_of(&BigInt::from(24)) {
                continue;
            }
            let b4: BigInt = num4 / 24;
            let num6: BigInt = -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - c6;
            if !num6.is_multiple_of(&BigInt::from(216)) {
                continue;
            }
            let b6: BigInt = num6 / 216;
            let a1 = b2.mod_floor(&BigInt::from(2));
            let a2n = &b2 - &a1;
            let a3 = b6.mod_floor(&BigInt::from(2));
            let a4n = &b4 - &a1 * &a3;
            let a6n = &b6 - &a3;
            if !a2n.is_multiple_of(&BigInt::from(4))
                || !a4n.is_multiple_of(&BigInt::from(2))
                || !a6n.is_multiple_of(&BigInt::from(4))
            {
                continue;
            }
            let e = WeierstrassCurve { a: [a1, a2n / 4, a3, a4n / 2, a6n / 4] };
            if !e.discriminant().is_zero() && e.c4() == *c4 && e.c6() == *c6 {
                return Some(e);
            }
        }
        None
    }

    /// A model with minimal discriminant valuation at `p`, obtained by
    /// rescaling `(c4, c6) -> (c4/p^4, c6/p^6)` while an integral model
    /// exists.
    pub fn minimal_model_at(&self, p: u64) -> WeierstrassCurve {
        let mut cur = self.clone();
        let (p4, p6) = (BigInt::from(p).pow(4), BigInt::from(p).pow(6));
        loop {
            let (c4, c6) = (cur.c4(), cur.c6());
            if !c4.is_multiple_of(&p4) || !c6.is_multiple_of(&p6) {
                return cur;
            }
            match WeierstrassCurve::from_c4c6(&(&c4 / &p4), &(&c6 / &p6)) {
                Some(e) => cur = e,
                None => return cur,
            }
        }
    }

    /// Globally minimal model (minimal at every prime).
    pub fn minimal_model(&self) -> WeierstrassCurve {
        let g = self.c4().gcd(&self.c6());
        let mut cur = self.clone();
        let candidates: Vec<u64> = if g.is_zero() {
            // c4 = c6 = 0 cannot happen for a nonsingular model
            vec![]
        } else {
            let gabs = g.abs();
            small_prime_divisors(&gabs)
        };
        for p in candidates {
            cur = cur.minimal_model_at(p);
        }
        cur
    }

    /// Quadratic twist by `d`: the model with `(c4, c6) = (d^2 c4, d^3 c6)`,
    /// then minimalised.
    pub fn quadratic_twist(&self, d: i64) -> Result<WeierstrassCurve> {
        if d == 0 || d == 1 {
            return Err(Error::Invalid(format!("twist by {d} is trivial or undefined")));
        }
        let d = BigInt::from(d);
        let c4 = &d * &d * self.c4();
        let c6 = &d * &d * &d * self.c6();
        let a4 = -27 * c4;
        let a6 = -54 * c6;
        let short = WeierstrassCurve::from_big([BigInt::zero(), BigInt::zero(), BigInt::zero(), a4, a6])?;
        Ok(short.minimal_model())
    }

    /// Number of points on the reduction mod `p` of this model, including
    /// the point at infinity (and a singular point, if any).
    pub fn count_points(&self, p: u64) -> u64 {
        let reduce = |x: &BigInt| x.mod_floor(&BigInt::from(p)).to_i64().unwrap();
        let [a1, a2, a3, a4, a6] = self.a.clone().map(|x| reduce(&x));
        let pi = p as i64;
        if p == 2 {
            let mut n = 1;
            for x in 0..2i64 {
                for y in 0..2i64 {
                    let lhs = y * y + a1 * x * y + a3 * y;
                    let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                    if (lhs - rhs).rem_euclid(2) == 0 {
                        n += 1;
                    }
                }
            }
            return n;
        }
        let (b2, b4, b6, _) = self.bs();
        let (b2, b4, b6) = (reduce(&b2), reduce(&b4), reduce(&b6));
        let mut n: i64 = 1;
        for x in 0..pi {
            let f = ((4 * x % pi * x % pi * x) % pi + b2 * x % pi * x % pi + 2 * b4 * x % pi + b6) % pi;
            n += 1 + legendre(f, p) as i64;
        }
        n as u64
    }

    /// Trace of Frobenius `p + 1 - #E(F_p)` on the `p`-minimal model; equals
    /// `±1` at multiplicative primes and `0` at additive ones.
    pub fn ap(&self, p: u64) -> i64 {
        let e = self.minimal_model_at(p);
        p as i64 + 1 - e.count_points(p) as i64
    }

    pub fn reduction_type(&self, p: u64) -> Result<ReductionInfo> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let e = self.minimal_model_at(p);
        let disc = e.discriminant();
        let c4 = e.c4();
        let v_delta = val_big(&disc, p);
        let v_j = if c4.is_zero() { None } else { Some(3 * val_big(&c4, p) as i64 - v_delta as i64) };
        let v_c4 = if c4.is_zero() { u32::MAX } else { val_big(&c4, p) };
        let kind = if v_delta == 0 {
            ReductionKind::Good
        } else if v_c4 == 0 {
            if e.is_split_multiplicative(p) {
                ReductionKind::SplitMultiplicative
            } else {
                ReductionKind::NonsplitMultiplicative
            }
        } else {
            ReductionKind::Additive
        };
        let ap = match kind {
            ReductionKind::Good => p as i64 + 1 - e.count_points(p) as i64,
            ReductionKind::SplitMultiplicative => 1,
            ReductionKind::NonsplitMultiplicative => -1,
            ReductionKind::Additive => 0,
        };
        Ok(ReductionInfo { p, kind, v_delta, v_j, ap })
    }

    /// Split-multiplicative test on a `p`-minimal model with multiplicative
    /// reduction: `-c6` a square mod `p` for odd `p`; for `p = 2`, the
    /// tangent slopes `m^2 + m + a2' = 0` at the node are `F_2`-rational.
    fn is_split_multiplicative(&self, p: u64) -> bool {
        if p != 2 {
            return legendre((-self.c6()).mod_floor(&BigInt::from(p)).to_i64().unwrap(), p) == 1;
        }
        let red: Vec<i64> = self.a.iter().map(|x| x.mod_floor(&BigInt::from(2)).to_i64().unwrap()).collect();
        let (a1, a2, a3, a4) = (red[0], red[1], red[2], red[3]);
        for x in 0..2i64 {
            for y in 0..2i64 {
                let on_curve =
                    (y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + red[4])).rem_euclid(2) == 0;
                let dx = (a1 * y - (3 * x * x + 2 * a2 * x + a4)).rem_euclid(2) == 0;
                let dy = (2 * y + a1 * x + a3).rem_euclid(2) == 0;
                if on_curve && dx && dy {
                    // translate (x, y) to the origin: a2' = a2 + 3x
                    return (a2 + 3 * x).rem_euclid(2) == 0;
                }
            }
        }
        false
    }

    /// Conductor: exponent 1 at multiplicative primes, 2 at additive primes
    /// `p >= 5`. Additive reduction at 2 or 3 is reported as an error.
    pub fn conductor(&self) -> Result<u64> {
        let mut n = 1u64;
        for p in small_prime_divisors(&self.discriminant().abs()) {
            let info = self.reduction_type(p)?;
            match info.kind {
                ReductionKind::Good => {}
                ReductionKind::SplitMultiplicative | ReductionKind::NonsplitMultiplicative => n *= p,
                ReductionKind::Additive if p >= 5 => n *= p * p,
                ReductionKind::Additive => return Err(Error::AdditiveConductor(p)),
            }
        }
        Ok(n)
    }

    /// Bad primes of this model.
    pub fn bad_primes(&self) -> Vec<u64> {
        small_prime_divisors(&self.minimal_model().discriminant().abs())
    }

    /// `a_n` for `1 <= n <= count` from the local factors.
    pub fn an_list(&self, count: usize) -> Vec<i64> {
        let mut a = vec![0i64; count + 1];
        if count == 0 {
            return a;
        }
        a[1] = 1;
        let bad = self.bad_primes();
        for p in crate::arith::primes_up_to(count as u64) {
            let ap = self.ap(p);
            let good = !bad.contains(&p);
            // prime powers
            let mut pk = p as usize;
            let (mut prev, mut cur) = (1i64, ap);
            while pk <= count {
                a[pk] = cur;
                let next = if good { ap * cur - p as i64 * prev } else { ap * cur };
                prev = cur;
                cur = next;
                pk = match pk.checked_mul(p as usize) {
                    Some(v) => v,
                    None => break,
                };
            }
        }
        // multiplicativity
        for n in 2..=count {
            let f = factor(n as u64);
            if f.len() > 1 {
                a[n] = f.iter().map(|&(q, e)| a[q.pow(e) as usize]).product();
            }
        }
        a
    }

    /// Quadratic character value `χ_D(p)` used when twisting.
    pub fn twist_character(d: i64, p: u64) -> i32 {
        kronecker(d, p)
    }
}

/// Prime divisors of a positive integer by trial division (desk-scale sizes).
pub(crate) fn small_prime_divisors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while BigInt::from(d) * BigInt::from(d) <= n {
        let bd = BigInt::from(d);
        if (&n % &bd).is_zero() {
            out.push(d);
            while (&n % &bd).is_zero() {
                n /= &bd;
            }
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push(n.to_u64().expect("prime factor fits in u64"));
    }
    out
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionKind {
    Good,
    SplitMultiplicative,
    NonsplitMultiplicative,
    Additive,
}

impl ReductionKind {
    pub fn is_multiplicative(self) -> bool {
        matches!(self, ReductionKind::SplitMultiplicative | ReductionKind::NonsplitMultiplicative)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionInfo {
    pub p: u64,
    pub kind: ReductionKind,
    pub v_delta: u32,
    /// `None` when `j = 0`.
    pub v_j: Option<i64>,
    pub ap: i64,
}
