//! Exact arithmetic in `Q(ζ_m) = Q[x]/Φ_m(x)` and Dirichlet characters of
//! prime-power modulus.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{factor, mod_pow};
use crate::error::{Error, Result};
use crate::linalg::Q;

/// Integer polynomial, lowest degree first.
type ZPoly = Vec<BigInt>;

fn trim(mut p: ZPoly) -> ZPoly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// Exact division by a monic polynomial.
fn div_exact_monic(num: &ZPoly, den: &ZPoly) -> ZPoly {
    let mut rem = num.clone();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    trim(quot)
}

/// `Φ_m(x)` with integer coefficients.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    assert!(m >= 1);
    let mut num: ZPoly = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = div_exact_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

/// Element of `Q(ζ_m)` in the power basis `1, ζ, ..., ζ^{φ(m)-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<Q>,
}

impl Cyclotomic {
    /// Reduce `Σ c_e ζ^e` (any length) modulo `Φ_m`.
    pub fn from_exponent_sums(order: u64, raw: Vec<Q>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        let mut c = raw;
        for k in (deg..c.len()).rev() {
            let top = std::mem::replace(&mut c[k], Q::zero());
            if top.is_zero() {
                continue;
            }
            for (i, a) in phi.iter().enumerate().take(deg) {
                let v = &top * Q::from_integer(a.clone());
                c[k - deg + i] -= v;
            }
        }
        c.resize(deg, Q::zero());
        Cyclotomic { order, coeffs: c }
    }

    pub fn zeta_power(order: u64, e: u64) -> Self {
        let mut raw = vec![Q::zero(); order as usize];
        raw[(e % order) as usize] = Q::one();
        Cyclotomic::from_exponent_sums(order, raw)
    }

    pub fn constant(order: u64, c: Q) -> Self {
        Cyclotomic::from_exponent_sums(order, vec![c])
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Q> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs.first().cloned().unwrap_or_else(Q::zero))
        } else {
            None
        }
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.order, other.order);
        let mut raw = vec![Q::zero(); self.coeffs.len() + other.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                raw[i + j] += a * b;
            }
        }
        Cyclotomic::from_exponent_sums(self.order, raw)
    }

    pub fn scale(&self, k: &Q) -> Cyclotomic {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.order, other.order);
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

/// `∏_{i=1}^{n-1} (1 - ζ_n^i)`, computed in `Z[x]/Φ_n`; the result is the
/// rational integer `n`.
pub fn one_minus_zeta_product(n: u64) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::Invalid("one_minus_zeta_product needs n >= 2".into()));
    }
    let mut acc = Cyclotomic::constant(n, Q::one());
    for i in 1..n {
        let term = Cyclotomic::constant(n, Q::one()).sub(&Cyclotomic::zeta_power(n, i));
        acc = acc.mul(&term);
    }
    let r = acc.as_rational().ok_or_else(|| Error::Invalid("product is not rational".into()))?;
    if !r.is_integer() {
        return Err(Error::Invalid("product is not integral".into()));
    }
    Ok(r.to_integer())
}

/// Smallest primitive root modulo `p^n` for odd `p`.
pub fn primitive_root(p: u64, n: u32) -> u64 {
    let modulus = p.pow(n);
    let phi = p.pow(n - 1) * (p - 1);
    let prime_factors: Vec<u64> = factor(phi).into_iter().map(|(q, _)| q).collect();
    (2..modulus)
        .find(|&g| g % p != 0 && prime_factors.iter().all(|&q| mod_pow(g, phi / q, modulus) != 1))
        .expect("(Z/p^n)* is cyclic for odd p")
}

/// The character `g^i ↦ ζ_m^{k i}` of `(Z/p^n)*`, `m = φ(p^n)`, `g` the
/// smallest primitive root. Values are taken in `Q(ζ_{ord χ})`.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    pub p: u64,
    pub n: u32,
    pub k: u64,
    /// Discrete logarithm of each residue, `usize::MAX` for non-units.
    index: Vec<u64>,
    group_order: u64,
}

impl DirichletCharacter {
    pub fn new(p: u64, n: u32, k: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::Invalid("characters modulo powers of 2 are not cyclic".into()));
        }
        let modulus = p.pow(n);
        let m = p.pow(n - 1) * (p - 1);
        let g = primitive_root(p, n);
        let mut index = vec![u64::MAX; modulus as usize];
        let mut x = 1u64;
        for i in 0..m {
            index[x as usize] = i;
            x = x * g % modulus;
        }
        Ok(DirichletCharacter { p, n, k: k % m, index, group_order: m })
    }

    /// Order of the character: the order of `ζ_m^k`.
    pub fn order(&self) -> u64 {
        self.group_order / self.group_order.gcd(&self.k)
    }

    /// Conductor `p^n` exactly.
    pub fn is_primitive(&self) -> bool {
        if self.n == 1 {
            self.k != 0
        } else {
            !self.k.is_multiple_of(self.p)
        }
    }

    /// Exponent `e` with `χ(a) = ζ_{ord χ}^e`, or `None` if `p | a`.
    pub fn exponent(&self, a: u64) -> Option<u64> {
        let i = self.index[(a % self.p.pow(self.n)) as usize];
        if i == u64::MAX {
            return None;
        }
        let ord = self.order();
        let step = self.group_order / ord;
        Some(self.k / step * i % ord)
    }

    /// `Σ_a χ(a) w(a)` over `a` in `residues`.
    pub fn twisted_sum(&self, residues: &[u64], weights: &[Q]) -> Cyclotomic {
        let ord = self.order();
        let mut raw = vec![Q::zero(); ord as usize];
        for (a, w) in residues.iter().zip(weights) {
            if let Some(e) = self.exponent(*a) {
                raw[e as usize] += w;
            }
        }
        Cyclotomic::from_exponent_sums(ord, raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 = |v: Vec<BigInt>| -> Vec<i64> { v.into_iter().map(|x| i64::try_from(x).unwrap()).collect() };
        assert_eq!(as_i64(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(3)), vec![1, 1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn products_of_one_minus_zeta() {
        for n in 2..=12u64 {
            assert_eq!(one_minus_zeta_product(n).unwrap(), BigInt::from(n));
        }
        assert!(one_minus_zeta_product(1).is_err());
    }

    #[test]
    fn character_orthogonality() {
        let chi = DirichletCharacter::new(5, 2, 1).unwrap();
        assert!(chi.is_primitive());
        assert_eq!(chi.order(), 20);
        let residues: Vec<u64> = (1..25).filter(|a| a % 5 != 0).collect();
        let ones = vec![Q::one(); residues.len()];
        assert!(chi.twisted_sum(&residues, &ones).is_zero());
        // sum over a fibre of (Z/25)* -> (Z/5)* vanishes for primitive χ
        let fibre: Vec<u64> = (0..5).map(|j| 2 + 5 * j).collect();
        assert!(chi.twisted_sum(&fibre, &vec![Q::one(); 5]).is_zero());
        let trivial = DirichletCharacter::new(5, 2, 0).unwrap();
        assert_eq!(trivial.twisted_sum(&residues, &ones).as_rational(), Some(Q::from_integer(20.into())));
    }
}
