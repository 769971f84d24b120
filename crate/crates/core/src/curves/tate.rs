use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{ReductionKind, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::padic::{Padic, PadicJson};
use crate::periods::{Base, Branch};

/// `c(n)` for `n >= 1`; memoised per process. The CLI persists it on disk.
static J_CACHE: RwLock<Vec<BigInt>> = RwLock::new(Vec::new());

fn truncated_mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients `c(1..=count)` of `j = q^{-1} + 744 + Σ c(n) q^n`, from
/// `q j = E4^3 / ∏(1 - q^n)^24` in exact integer arithmetic.
fn compute_j_coefficients(count: usize) -> Vec<BigInt> {
    // need q·j up to q^{count+1}
    let len = count + 2;
    let mut eta = vec![BigInt::zero(); len];
    // Euler's pentagonal theorem
    for k in 0i64.. {
        let mut any = false;
        for m in [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2] {
            if (m as usize) < len {
                eta[m as usize] = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                any = true;
            }
        }
        if !any {
            break;
        }
    }
    let mut p24 = vec![BigInt::zero(); len];
    p24[0] = BigInt::one();
    for _ in 0..24 {
        p24 = truncated_mul(&p24, &eta, len);
    }
    let mut e4 = vec![BigInt::zero(); len];
    e4[0] = BigInt::one();
    for (n, c) in e4.iter_mut().enumerate().skip(1) {
        let sigma3: u64 = (1..=n as u64).filter(|d| (n as u64).is_multiple_of(*d)).map(|d| d * d * d).sum();
        *c = BigInt::from(240u64 * sigma3);
    }
    let e4_cubed = truncated_mul(&truncated_mul(&e4, &e4, len), &e4, len);
    // invert p24 (constant term 1)
    let mut inv = vec![BigInt::zero(); len];
    inv[0] = BigInt::one();
    for n in 1..len {
        let mut s = BigInt::zero();
        for k in 1..=n {
            s += &p24[k] * &inv[n - k];
        }
        inv[n] = -s;
    }
    let qj = truncated_mul(&e4_cubed, &inv, len);
    qj[2..].to_vec()
}

/// `c(1..=count)` from the process cache, extending it when necessary.
pub fn j_coefficients(count: usize) -> Vec<BigInt> {
    {
        let cache = J_CACHE.read().expect("j cache poisoned");
        if cache.len() >= count {
            return cache[..count].to_vec();
        }
    }
    let fresh = compute_j_coefficients(count);
    let mut cache = J_CACHE.write().expect("j cache poisoned");
    if cache.len() < fresh.len() {
        *cache = fresh.clone();
    }
    fresh
}

/// Everything computed so far in this process.
pub fn cached_j_coefficients() -> Vec<BigInt> {
    J_CACHE.read().expect("j cache poisoned").clone()
}

/// Preload coefficients read from a persistent cache. Rejected if they do
/// not agree with a freshly computed prefix.
pub fn seed_j_coefficients(coeffs: Vec<BigInt>) -> Result<()> {
    let check = compute_j_coefficients(coeffs.len().min(8));
    if coeffs[..check.len()] != check[..] {
        return Err(Error::Invalid("cached j-coefficients are corrupt".into()));
    }
    let mut cache = J_CACHE.write().expect("j cache poisoned");
    if cache.len() < coeffs.len() {
        *cache = coeffs;
    }
    Ok(())
}

/// `j(q) = q^{-1} + 744 + Σ c(n) q^n` for `ord(q) > 0`, summed far enough
/// to exhaust the precision of `q^{-1}`.
pub fn j_of_q(q: &Padic) -> Result<Padic> {
    let v = q.ord()?;
    if v <= 0 {
        return Err(Error::Invalid("j(q) needs ord(q) > 0".into()));
    }
    let p = q.prime();
    let target = q.abs_precision() - 2 * v;
    let terms = (target.max(0) / v + 2) as usize;
    let coeffs = j_coefficients(terms);
    let mut sum = &q.inverse()? + &Padic::from_i64(p, 744, q.precision() + v as u32);
    let mut qn = q.clone();
    for c in &coeffs {
        sum = &sum + &qn.scale(&BigRational::from_integer(c.clone()));
        qn = &qn * q;
    }
    Ok(sum)
}

#[derive(Clone, Debug)]
pub struct TatePeriod {
    pub q: Padic,
    pub curve: WeierstrassCurve,
    pub prime: u64,
    pub precision: u32,
    pub kind: ReductionKind,
}

impl TatePeriod {
    pub fn ord(&self) -> i64 {
        self.q.ord().expect("Tate periods are nonzero")
    }

    /// `λ(q) / ord(q)`; the cyclotomic and Iwasawa branches coincide on `Q_p`.
    pub fn li(&self, branch: &Branch) -> Result<Padic> {
        let lam = match branch {
            Branch::Cyclotomic | Branch::Iwasawa => self.q.log()?,
            Branch::Element(Base::Rational(x)) => {
                let x = Padic::from_rational(self.prime, x, self.precision + 4);
                self.q.branch_log(&x)?
            }
            Branch::Element(Base::Coords(_)) => return Err(Error::FieldMismatch),
        };
        Ok(lam.scale(&BigRational::new(BigInt::one(), self.ord().into())))
    }

    pub fn to_json(&self) -> TatePeriodJson {
        TatePeriodJson {
            curve: self.curve.to_string(),
            p: self.prime,
            precision: self.precision,
            reduction: self.kind,
            ord: self.ord(),
            q: self.q.to_json(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TatePeriodJson {
    pub curve: String,
    pub p: u64,
    pub precision: u32,
    pub reduction: ReductionKind,
    pub ord: i64,
    pub q: PadicJson,
}

/// Tate parameter at a multiplicative prime, to `precision` significant
/// digits, by the fixed-point iteration `q <- 1/(j - 744 - Σ c(n) q^n)`.
pub fn tate_period(curve: &WeierstrassCurve, p: u64, precision: u32) -> Result<TatePeriod> {
    let info = curve.reduction_type(p)?;
    if !info.kind.is_multiplicative() {
        return Err(Error::NoTatePeriod(p));
    }
    let e = curve.minimal_model_at(p);
    let v = info.v_delta as i64;
    let j = Padic::from_rational(p, &e.j_invariant(), precision);
    let terms = (precision as i64 / v + 2) as usize;
    let coeffs = j_coefficients(terms);
    let shift = Padic::from_i64(p, 744, precision + v as u32);
    let mut q = j.inverse()?;
    for _ in 0..(precision as usize + 4) {
        let mut s = &j - &shift;
        let mut qn = q.clone();
        for c in &coeffs {
            s = &s - &qn.scale(&BigRational::from_integer(c.clone()));
            qn = &qn * &q;
        }
        let next = s.inverse()?;
        let done = next.eq_to_precision(&q) && next.unit() == q.unit();
        q = next;
        if done {
            break;
        }
    }
    debug_assert_eq!(q.ord().ok(), Some(v));
    Ok(TatePeriod { q, curve: e, prime: p, precision, kind: info.kind })
}

/// `log_p(q) / ord_p(q)` for any multiplicative prime.
pub fn tate_l_invariant(curve: &WeierstrassCurve, p: u64, precision: u32) -> Result<Padic> {
    tate_period(curve, p, precision)?.li(&Branch::Iwasawa)
}

/// The arithmetic L-invariant at a split multiplicative prime.
pub fn curve_l_invariant(curve: &WeierstrassCurve, p: u64, precision: u32) -> Result<Padic> {
    let info = curve.reduction_type(p)?;
    match info.kind {
        ReductionKind::SplitMultiplicative => tate_l_invariant(curve, p, precision),
        ReductionKind::NonsplitMultiplicative => Err(Error::NotSplit(p)),
        _ => Err(Error::NoTatePeriod(p)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::val_big;

    fn e11() -> WeierstrassCurve {
        WeierstrassCurve::new([0, -1, 1, -10, -20]).unwrap()
    }

    #[test]
    fn j_coefficients_known() {
        let c = j_coefficients(3);
        assert_eq!(c[0], BigInt::from(196884));
        assert_eq!(c[1], BigInt::from(21493760u64));
        assert_eq!(c[2], BigInt::from(864299970u64));
    }

    #[test]
    fn tate_period_11a1() {
        let t = tate_period(&e11(), 11, 20).unwrap();
        assert_eq!(t.ord(), 5);
        // q j = 1 + 744 q + O(q^2)
        let j = Padic::from_rational(11, &e11().j_invariant(), 20);
        let qj = &t.q * &j;
        let one = Padic::from_i64(11, 1, 20);
        assert_eq!((&qj - &one).valuation(), Some(5));
        let lead = &t.q.scale(&BigRational::from_integer(744.into())) + &one;
        assert!((&qj - &lead).valuation().unwrap() >= 10);
        let back = j_of_q(&t.q).unwrap();
        assert!(back.agreement(&j) >= 20 - 5 - 2);
    }

    #[test]
    fn no_tate_period_at_good_prime() {
        assert_eq!(tate_period(&e11(), 7, 10).unwrap_err(), Error::NoTatePeriod(7));
    }

    #[test]
    fn round_trip_small_primes() {
        for (a, p) in [([1, 0, 1, 4, -6], 2u64), ([1, 0, 1, 4, -6], 7), ([1, 1, 1, -10, -10], 3)] {
            let e = WeierstrassCurve::new(a).unwrap();
            let t = tate_period(&e, p, 16).unwrap();
            let vd = val_big(&e.minimal_model_at(p).discriminant(), p) as i64;
            assert_eq!(t.ord(), vd);
            let j = Padic::from_rational(p, &e.j_invariant(), 16);
            assert!(j_of_q(&t.q).unwrap().agreement(&j) >= 16 - vd - 2, "{a:?} at {p}");
        }
    }

    #[test]
    fn l_invariant_precision_stable() {
        let a = curve_l_invariant(&e11(), 11, 20).unwrap();
        let b = curve_l_invariant(&e11(), 11, 30).unwrap();
        assert!(a.agreement(&b) >= a.abs_precision());
    }

    #[test]
    fn isogenous_curves_share_l_invariant() {
        let e3 = WeierstrassCurve::new([0, -1, 1, 0, 0]).unwrap();
        let a = curve_l_invariant(&e11(), 11, 20).unwrap();
        let b = curve_l_invariant(&e3, 11, 20).unwrap();
        assert!(a.agreement(&b) >= a.abs_precision().min(b.abs_precision()));
        // commensurable periods: ord 5 and 1
        assert_eq!(tate_period(&e3, 11, 20).unwrap().ord(), 1);
    }

    #[test]
    fn split_twist_keeps_tate_period() {
        let t = e11().quadratic_twist(5).unwrap();
        let a = tate_period(&e11(), 11, 20).unwrap();
        let b = tate_period(&t, 11, 20).unwrap();
        assert_eq!(b.kind, ReductionKind::SplitMultiplicative);
        assert!(a.q.eq_to_precision(&b.q));
        let inert = e11().quadratic_twist(-4).unwrap();
        assert_eq!(inert.reduction_type(11).unwrap().kind, ReductionKind::NonsplitMultiplicative);
        assert_eq!(curve_l_invariant(&inert, 11, 10).unwrap_err(), Error::NotSplit(11));
    }
}
