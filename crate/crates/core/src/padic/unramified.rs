//! Unramified extensions `Q_{p^f} = Q_p[t]/(g)` with `g` monic and
//! irreducible modulo `p`.
//!
//! Because `g` stays irreducible mod `p`, the basis `1, t, .., t^(f-1)` is an
//! integral basis and `p` remains a uniformizer, so the valuation of an
//! element is the minimum of the valuations of its coordinates.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::fp_poly::FpPoly;
use super::{mod_inverse, rational_valuation, Padic};
use crate::arith::{big_pow, val_big};
use crate::error::{Error, Result};

#[derive(Debug)]
pub struct UnramifiedField {
    prime: u64,
    degree: usize,
    /// Monic defining polynomial, low degree first, length `degree + 1`.
    modulus: Vec<BigInt>,
    /// Image of `t` under Frobenius, reduced mod `p^precision`.
    frob_t: Vec<BigInt>,
    precision: u32,
}

impl UnramifiedField {
    /// `Q_{p^f}` defined by the smallest monic polynomial irreducible mod `p`.
    pub fn new(prime: u64, degree: usize, precision: u32) -> Result<Arc<Self>> {
        if !crate::arith::is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        let g = FpPoly::smallest_irreducible(prime, degree);
        let coeffs = g.coeffs().iter().map(|&c| c as i64).collect();
        Self::with_modulus(prime, coeffs, precision)
    }

    /// `Q_p[t]/(g)` for a monic integer polynomial `g` (low degree first).
    pub fn with_modulus(prime: u64, modulus: Vec<i64>, precision: u32) -> Result<Arc<Self>> {
        if !crate::arith::is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        let degree = modulus
            .len()
            .checked_sub(1)
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::Invalid("defining polynomial must have degree at least 1".into()))?;
        if modulus[degree] != 1 {
            return Err(Error::Invalid("defining polynomial must be monic".into()));
        }
        if !FpPoly::new(prime, modulus.clone()).is_irreducible() {
            return Err(Error::Reducible(prime));
        }
        let modulus: Vec<BigInt> = modulus.into_iter().map(BigInt::from).collect();
        let mut field = UnramifiedField { prime, degree, modulus, frob_t: Vec::new(), precision };
        field.frob_t = field.compute_frobenius_of_t();
        Ok(Arc::new(field))
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Same prime and defining polynomial (the cached precision may differ).
    pub fn same_as(&self, other: &UnramifiedField) -> bool {
        self.prime == other.prime && self.modulus == other.modulus
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Coefficients of the defining polynomial, low degree first.
    pub fn modulus(&self) -> Vec<String> {
        self.modulus.iter().map(|c| c.to_string()).collect()
    }

    fn work_modulus(&self, n: u32) -> BigInt {
        big_pow(self.prime, n)
    }

    /// `a * b mod (g, m)`.
    fn mul_mod(&self, a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        let f = self.degree;
        let mut prod = vec![BigInt::zero(); 2 * f - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for k in (f..prod.len()).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for j in 0..f {
                prod[k - f + j] -= &c * &self.modulus[j];
            }
        }
        prod.truncate(f);
        prod.iter().map(|c| c.mod_floor(m)).collect()
    }

    fn pow_mod(&self, a: &[BigInt], e: &BigInt, m: &BigInt) -> Vec<BigInt> {
        let mut acc = self.one_vec();
        let mut base = a.to_vec();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = self.mul_mod(&acc, &base, m);
            }
            if i + 1 < bits {
                base = self.mul_mod(&base, &base, m);
            }
        }
        acc
    }

    fn one_vec(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.degree];
        v[0] = BigInt::one();
        v
    }

    /// Inverse of a unit vector modulo `(g, p^n)`: invert mod `p`, then lift.
    fn inv_mod(&self, a: &[BigInt], n: u32) -> Vec<BigInt> {
        let p = self.prime;
        let gbar =
            FpPoly::new(p, self.modulus.iter().map(|c| c.mod_floor(&BigInt::from(p)).to_i64().unwrap()).collect());
        let abar = FpPoly::new(p, a.iter().map(|c| c.mod_floor(&BigInt::from(p)).to_i64().unwrap()).collect());
        let inv = abar.inverse_mod(&gbar).expect("unit in the residue field");
        let mut y: Vec<BigInt> =
            (0..self.degree).map(|i| BigInt::from(inv.coeffs().get(i).copied().unwrap_or(0))).collect();
        let mut k = 1u32;
        let two = {
            let mut v = vec![BigInt::zero(); self.degree];
            v[0] = BigInt::from(2);
            v
        };
        while k < n {
            k = (2 * k).min(n);
            let m = self.work_modulus(k);
            let ay = self.mul_mod(a, &y, &m);
            let corr: Vec<BigInt> = two.iter().zip(&ay).map(|(t, s)| t - s).collect();
            y = self.mul_mod(&y, &corr, &m);
        }
        let m = self.work_modulus(n);
        y.iter().map(|c| c.mod_floor(&m)).collect()
    }

    /// Evaluates the defining polynomial and its derivative at `x`.
    fn eval_g(&self, x: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
        let f = self.degree;
        let mut val = vec![BigInt::zero(); f];
        let mut der = vec![BigInt::zero(); f];
        for k in (0..=f).rev() {
            // Horner on g and g'
            der = self.mul_mod(&der, x, m);
            for (d, v) in der.iter_mut().zip(&val) {
                *d += v;
            }
            val = self.mul_mod(&val, x, m);
            val[0] += &self.modulus[k];
        }
        (val.iter().map(|c| c.mod_floor(m)).collect(), der.iter().map(|c| c.mod_floor(m)).collect())
    }

    /// Newton iteration for the root of `g` congruent to `t^p` mod `p`.
    fn compute_frobenius_of_t(&self) -> Vec<BigInt> {
        let n = self.precision.max(1);
        let m = self.work_modulus(n);
        let mut t = vec![BigInt::zero(); self.degree];
        if self.degree == 1 {
            return vec![(-&self.modulus[0]).mod_floor(&m)];
        }
        t[1] = BigInt::one();
        let mut theta = self.pow_mod(&t, &BigInt::from(self.prime), &m);
        for _ in 0..(2 * (32 - n.leading_zeros()) + 4) {
            let (gv, gd) = self.eval_g(&theta, &m);
            if gv.iter().all(Zero::is_zero) {
                break;
            }
            let inv = self.inv_mod(&gd, n);
            let step = self.mul_mod(&gv, &inv, &m);
            theta = theta.iter().zip(&step).map(|(a, b)| (a - b).mod_floor(&m)).collect();
        }
        theta
    }
}

/// Element `p^v * (c_0 + c_1 t + ... + c_{f-1} t^(f-1)) + O(p^(v+N))` with
/// at least one coordinate a unit.
#[derive(Clone, Debug)]
pub struct UnramifiedElement {
    field: Arc<UnramifiedField>,
    /// Valuation for nonzero values, absolute precision for zero.
    valuation: i64,
    coeffs: Vec<BigInt>,
    precision: u32,
}

impl PartialEq for UnramifiedElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(&other.field)
            && self.valuation == other.valuation
            && self.precision == other.precision
            && self.coeffs == other.coeffs
    }
}

impl UnramifiedElement {
    pub fn zero(field: &Arc<UnramifiedField>, abs_precision: i64) -> Self {
        UnramifiedElement {
            field: field.clone(),
            valuation: abs_precision,
            coeffs: vec![BigInt::zero(); field.degree],
            precision: 0,
        }
    }

    /// Element whose coordinates are congruent to `coords` mod `p^abs`.
    pub fn from_integer_coords(field: &Arc<UnramifiedField>, coords: &[BigInt], abs: i64) -> Self {
        assert_eq!(coords.len(), field.degree);
        if abs <= 0 {
            return Self::zero(field, abs);
        }
        let p = field.prime;
        let m = big_pow(p, abs as u32);
        let reduced: Vec<BigInt> = coords.iter().map(|c| c.mod_floor(&m)).collect();
        let v = reduced.iter().filter(|c| !c.is_zero()).map(|c| val_big(c, p) as i64).min();
        match v {
            None => Self::zero(field, abs),
            Some(v) => {
                let scale = big_pow(p, v as u32);
                let rel = (abs - v) as u32;
                let mm = big_pow(p, rel);
                UnramifiedElement {
                    field: field.clone(),
                    valuation: v,
                    coeffs: reduced.iter().map(|c| (c / &scale).mod_floor(&mm)).collect(),
                    precision: rel,
                }
            }
        }
    }

    /// Element with exact rational coordinates, rounded to `precision`
    /// significant digits.
    pub fn from_rational_coords(field: &Arc<UnramifiedField>, coords: &[BigRational], precision: u32) -> Result<Self> {
        if coords.len() != field.degree {
            return Err(Error::Invalid(format!("expected {} coordinates, got {}", field.degree, coords.len())));
        }
        let p = field.prime;
        let v = coords.iter().filter(|c| !c.is_zero()).map(|c| rational_valuation(c, p)).min();
        let Some(v) = v else {
            return Ok(Self::zero(field, precision as i64));
        };
        let m = big_pow(p, precision);
        let shifted: Vec<BigInt> = coords
            .iter()
            .map(|c| {
                if c.is_zero() {
                    return BigInt::zero();
                }
                let x = Padic::from_rational(p, c, precision + (rational_valuation(c, p) - v) as u32);
                (x.unit() * big_pow(p, (rational_valuation(c, p) - v) as u32)).mod_floor(&m)
            })
            .collect();
        Ok(UnramifiedElement { field: field.clone(), valuation: v, coeffs: shifted, precision })
    }

    pub fn from_padic(field: &Arc<UnramifiedField>, x: &Padic) -> Self {
        if x.is_zero() {
            return Self::zero(field, x.abs_precision());
        }
        let mut coeffs = vec![BigInt::zero(); field.degree];
        coeffs[0] = x.unit().clone();
        UnramifiedElement { field: field.clone(), valuation: x.valuation().unwrap(), coeffs, precision: x.precision() }
    }

    /// The generator `t`.
    pub fn generator(field: &Arc<UnramifiedField>, precision: u32) -> Self {
        let mut c = vec![BigInt::zero(); field.degree];
        if field.degree == 1 {
            c[0] = -&field.modulus[0];
        } else {
            c[1] = BigInt::one();
        }
        Self::from_integer_coords(field, &c, precision as i64)
    }

    pub fn field(&self) -> &Arc<UnramifiedField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.precision == 0
    }

    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.valuation)
    }

    pub fn ord(&self) -> Result<i64> {
        self.valuation().ok_or(Error::ValuationOfZero)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn abs_precision(&self) -> i64 {
        self.valuation + self.precision as i64
    }

    /// Unit-part coordinates (mod `p^N`).
    pub fn unit_coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn same_field(&self, other: &Self) {
        assert!(self.field.same_as(&other.field), "mixing elements of different unramified fields");
    }

    pub fn truncate_abs(&self, abs: i64) -> Self {
        if abs >= self.abs_precision() {
            return self.clone();
        }
        if self.is_zero() {
            return Self::zero(&self.field, abs);
        }
        let shifted: Vec<BigInt> = self.coeffs.iter().map(|c| c * big_pow(self.field.prime, 0)).collect();
        let mut out = Self::from_integer_coords(&self.field, &shifted, abs - self.valuation);
        if out.is_zero() {
            return Self::zero(&self.field, abs);
        }
        out.valuation += self.valuation;
        out
    }

    /// Coordinates scaled by `p^(v - base)` as integers, for `base <= v`.
    fn shifted(&self, base: i64) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![BigInt::zero(); self.field.degree];
        }
        let s = big_pow(self.field.prime, (self.valuation - base) as u32);
        self.coeffs.iter().map(|c| c * &s).collect()
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.same_field(other);
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.field, self.valuation - other.valuation));
        }
        let rel = self.precision.min(other.precision);
        let inv = self.field.inv_mod(&other.coeffs, rel);
        let m = self.field.work_modulus(rel);
        let c = self.field.mul_mod(&self.coeffs, &inv, &m);
        let mut out = Self::from_integer_coords(&self.field, &c, rel as i64);
        out.valuation += self.valuation - other.valuation;
        Ok(out)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            let one = Self::one(&self.field, self.precision.max(1));
            return one.checked_div(self)?.pow(-e);
        }
        if self.is_zero() {
            if e == 0 {
                return Ok(Self::one(&self.field, 1));
            }
            return Ok(Self::zero(&self.field, self.valuation * e));
        }
        let m = self.field.work_modulus(self.precision);
        let c = self.field.pow_mod(&self.coeffs, &BigInt::from(e), &m);
        let mut out = Self::from_integer_coords(&self.field, &c, self.precision as i64);
        out.valuation += self.valuation * e;
        Ok(out)
    }

    pub fn one(field: &Arc<UnramifiedField>, precision: u32) -> Self {
        Self::from_integer_coords(field, &field.one_vec(), precision as i64)
    }

    /// Arithmetic Frobenius, acting trivially on `Q_p`.
    pub fn frobenius(&self) -> Self {
        if self.is_zero() || self.field.degree == 1 {
            return self.clone();
        }
        let rel = self.precision.min(self.field.precision);
        let m = self.field.work_modulus(rel);
        let theta = &self.field.frob_t;
        let mut acc = vec![BigInt::zero(); self.field.degree];
        let mut power = self.field.one_vec();
        for c in &self.coeffs {
            for (a, b) in acc.iter_mut().zip(&power) {
                *a += c * b;
            }
            power = self.field.mul_mod(&power, theta, &m);
        }
        let mut out = Self::from_integer_coords(&self.field, &acc, rel as i64);
        if !out.is_zero() {
            out.valuation += self.valuation;
        } else {
            out.valuation = self.valuation + rel as i64;
        }
        out
    }

    pub fn frobenius_pow(&self, k: usize) -> Self {
        let k = k % self.field.degree;
        (0..k).fold(self.clone(), |acc, _| acc.frobenius())
    }

    /// Relative norm and trace down to the subfield of degree `sub_degree`.
    pub fn norm_trace_to(&self, sub_degree: usize) -> Result<(Self, Self)> {
        let f = self.field.degree;
        if sub_degree == 0 || !f.is_multiple_of(sub_degree) {
            return Err(Error::Invalid(format!("{sub_degree} does not divide {f}")));
        }
        let conjugates: Vec<Self> = (0..f / sub_degree).map(|i| self.frobenius_pow(i * sub_degree)).collect();
        let norm = conjugates[1..].iter().fold(conjugates[0].clone(), |acc, c| &acc * c);
        let trace = conjugates[1..].iter().fold(conjugates[0].clone(), |acc, c| &acc + c);
        Ok((norm, trace))
    }

    /// Norm and trace to `Q_p`.
    pub fn norm_trace(&self) -> Result<(Padic, Padic)> {
        let (n, t) = self.norm_trace_to(1)?;
        Ok((n.to_padic()?, t.to_padic()?))
    }

    /// The value as an element of `Q_p`; errors if a non-constant coordinate
    /// is nonzero at the known precision.
    pub fn to_padic(&self) -> Result<Padic> {
        if self.is_zero() {
            return Ok(Padic::zero(self.field.prime, self.valuation));
        }
        if self.coeffs[1..].iter().any(|c| !c.is_zero()) {
            return Err(Error::FieldMismatch);
        }
        Ok(Padic::from_integer_mod(self.field.prime, &self.coeffs[0], self.precision as i64).shift(self.valuation))
    }

    /// Iwasawa logarithm (`log(p) = 0`).
    pub fn log(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ValuationOfZero);
        }
        let field = &self.field;
        let p = field.prime;
        let n = self.precision;
        let order = BigInt::from(p).pow(field.degree as u32) - BigInt::one();
        let exponent = if p == 2 { order * 2 } else { order };
        let target = if p == 2 { n as i64 - 1 } else { n as i64 };
        if target <= 0 {
            return Ok(Self::zero(field, target));
        }
        let guard = 2 + (64 - (4 * n as u64 + 8).leading_zeros());
        let work = n + guard;
        let m = field.work_modulus(work);
        let w = field.pow_mod(&self.coeffs, &exponent, &m);
        let mut z = w;
        z[0] -= BigInt::one();
        let z: Vec<BigInt> = z.iter().map(|c| c.mod_floor(&m)).collect();
        let vz = match z.iter().filter(|c| !c.is_zero()).map(|c| val_big(c, p)).min() {
            None => return Ok(Self::zero(field, target)),
            Some(v) => v as i64,
        };
        let mut acc = vec![BigInt::zero(); field.degree];
        let mut zk = field.one_vec();
        let mut k: u64 = 0;
        let mk = field.work_modulus(work);
        loop {
            k += 1;
            if k as i64 * vz - super::ilog(k, p) as i64 >= target {
                break;
            }
            zk = field.mul_mod(&zk, &z, &mk);
            let vk = val_big(&BigInt::from(k), p);
            let pk = big_pow(p, vk);
            let kk = BigInt::from(k) / &pk;
            let kinv = mod_inverse(&kk, &mk).unwrap();
            for (a, c) in acc.iter_mut().zip(&zk) {
                let term = (c / &pk) * &kinv;
                if k % 2 == 1 {
                    *a += term;
                } else {
                    *a -= term;
                }
            }
        }
        let (ve, eu) = crate::arith::split_p(&exponent, p);
        let einv = mod_inverse(&eu, &mk).unwrap();
        let acc: Vec<BigInt> = acc.iter().map(|c| (c * &einv).mod_floor(&mk)).collect();
        // divide by p^ve: the series value is divisible by p^vz >= p^ve
        let pe = big_pow(p, ve);
        let acc: Vec<BigInt> = acc.iter().map(|c| c / &pe).collect();
        Ok(Self::from_integer_coords(field, &acc, target))
    }

    pub fn eq_to_precision(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    pub fn agreement(&self, other: &Self) -> i64 {
        let d = self - other;
        d.valuation().unwrap_or(d.abs_precision())
    }

    pub fn to_json(&self) -> UnramifiedJson {
        UnramifiedJson {
            p: self.field.prime,
            modulus: self.field.modulus(),
            v: if self.is_zero() { "inf".into() } else { self.valuation.to_string() },
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
            n: self.precision,
            abs_precision: self.abs_precision(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UnramifiedJson {
    pub p: u64,
    pub modulus: Vec<String>,
    pub v: String,
    pub coeffs: Vec<String>,
    #[serde(rename = "N")]
    pub n: u32,
    pub abs_precision: i64,
}

impl Padic {
    /// Multiplies by `p^k`.
    pub fn shift(&self, k: i64) -> Padic {
        if self.is_zero() {
            return Padic::zero(self.prime(), self.abs_precision() + k);
        }
        Padic::from_parts(self.prime(), self.valuation().unwrap() + k, self.unit().clone(), self.precision())
    }
}

impl Add for &UnramifiedElement {
    type Output = UnramifiedElement;
    fn add(self, rhs: &UnramifiedElement) -> UnramifiedElement {
        self.same_field(rhs);
        let abs = self.abs_precision().min(rhs.abs_precision());
        let base = match (self.valuation(), rhs.valuation()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => return UnramifiedElement::zero(&self.field, abs),
        };
        if abs <= base {
            return UnramifiedElement::zero(&self.field, abs);
        }
        let sum: Vec<BigInt> = self.shifted(base).iter().zip(rhs.shifted(base)).map(|(a, b)| a + b).collect();
        let mut out = UnramifiedElement::from_integer_coords(&self.field, &sum, abs - base);
        if out.is_zero() {
            return UnramifiedElement::zero(&self.field, abs);
        }
        out.valuation += base;
        out
    }
}

impl Neg for &UnramifiedElement {
    type Output = UnramifiedElement;
    fn neg(self) -> UnramifiedElement {
        if self.is_zero() {
            return self.clone();
        }
        let m = self.field.work_modulus(self.precision);
        UnramifiedElement { coeffs: self.coeffs.iter().map(|c| (-c).mod_floor(&m)).collect(), ..self.clone() }
    }
}

impl Sub for &UnramifiedElement {
    type Output = UnramifiedElement;
    fn sub(self, rhs: &UnramifiedElement) -> UnramifiedElement {
        self + &(-rhs)
    }
}

impl Mul for &UnramifiedElement {
    type Output = UnramifiedElement;
    fn mul(self, rhs: &UnramifiedElement) -> UnramifiedElement {
        self.same_field(rhs);
        if self.is_zero() || rhs.is_zero() {
            return UnramifiedElement::zero(&self.field, self.valuation + rhs.valuation);
        }
        let rel = self.precision.min(rhs.precision);
        let m = self.field.work_modulus(rel);
        let c = self.field.mul_mod(&self.coeffs, &rhs.coeffs, &m);
        let mut out = UnramifiedElement::from_integer_coords(&self.field, &c, rel as i64);
        out.valuation += self.valuation + rhs.valuation;
        out
    }
}

impl fmt::Display for UnramifiedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "O({}^{})", self.field.prime, self.valuation);
        }
        let c: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(
            f,
            "{}^{} * [{}] + O({}^{})",
            self.field.prime,
            self.valuation,
            c.join(", "),
            self.field.prime,
            self.abs_precision()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn reducible_modulus_is_rejected() {
        // t^2 - t - 1 has discriminant 5 and is a square mod 5
        assert_eq!(UnramifiedField::with_modulus(5, vec![-1, -1, 1], 10).unwrap_err(), Error::Reducible(5));
    }

    #[test]
    fn frobenius_has_order_f() {
        for (p, f) in [(5u64, 2usize), (3, 3), (2, 2), (7, 2), (2, 3)] {
            let field = UnramifiedField::new(p, f, 12).unwrap();
            let t = UnramifiedElement::generator(&field, 12);
            assert!(t.frobenius_pow(f).eq_to_precision(&t));
            let mut x = t.clone();
            for _ in 0..f {
                x = x.frobenius();
            }
            assert!(x.eq_to_precision(&t), "p={p} f={f}");
            if f > 1 {
                assert!(!t.frobenius().eq_to_precision(&t));
            }
            // Frobenius is congruent to the p-th power mod p
            let tp = t.pow(p as i64).unwrap();
            assert!((&tp - &t.frobenius()).valuation().unwrap_or(99) >= 1);
        }
    }

    #[test]
    fn base_field_norm_and_trace() {
        let field = UnramifiedField::new(5, 2, 10).unwrap();
        let x = UnramifiedElement::from_rational_coords(&field, &[rat(3), rat(0)], 10).unwrap();
        let (n, t) = x.norm_trace().unwrap();
        assert_eq!(n, Padic::from_i64(5, 9, 10));
        assert_eq!(t, Padic::from_i64(5, 6, 10));
        let field1 = UnramifiedField::new(7, 1, 10).unwrap();
        let y = UnramifiedElement::from_padic(&field1, &Padic::from_i64(7, 12, 10));
        let (n, t) = y.norm_trace().unwrap();
        assert_eq!(n, Padic::from_i64(7, 12, 10));
        assert_eq!(t, Padic::from_i64(7, 12, 10));
    }

    #[test]
    fn generator_norm() {
        // Q_25 = Q_5[t]/(t^2 + 2): N(t) = 2, Tr(t) = 0
        let field = UnramifiedField::new(5, 2, 10).unwrap();
        let t = UnramifiedElement::generator(&field, 10);
        let (n, tr) = t.norm_trace().unwrap();
        assert_eq!(n, Padic::from_i64(5, 2, 10));
        assert!(tr.is_zero());
    }

    #[test]
    fn division_and_inverse() {
        let field = UnramifiedField::new(3, 2, 15).unwrap();
        let a = UnramifiedElement::from_rational_coords(&field, &[rat(2), rat(7)], 15).unwrap();
        let b = UnramifiedElement::from_rational_coords(&field, &[rat(9), rat(-4)], 15).unwrap();
        let q = (&a * &b).checked_div(&b).unwrap();
        assert!(q.eq_to_precision(&a));
        let third = UnramifiedElement::from_rational_coords(&field, &[rat(0), rat(3)], 15).unwrap();
        let r = a.checked_div(&third).unwrap();
        assert_eq!(r.valuation(), Some(-1));
    }

    #[test]
    fn log_is_additive_and_matches_base_log() {
        let field = UnramifiedField::new(5, 2, 12).unwrap();
        let a = UnramifiedElement::from_rational_coords(&field, &[rat(2), rat(1)], 12).unwrap();
        let b = UnramifiedElement::from_rational_coords(&field, &[rat(7), rat(3)], 12).unwrap();
        let lhs = (&a * &b).log().unwrap();
        let rhs = &a.log().unwrap() + &b.log().unwrap();
        assert!(lhs.eq_to_precision(&rhs));
        let six = UnramifiedElement::from_rational_coords(&field, &[rat(6), rat(0)], 12).unwrap();
        let l = six.log().unwrap().to_padic().unwrap();
        assert!(l.eq_to_precision(&Padic::from_i64(5, 6, 12).log().unwrap()));
        // log commutes with Frobenius
        assert!(a.log().unwrap().frobenius().eq_to_precision(&a.frobenius().log().unwrap()));
    }
}
