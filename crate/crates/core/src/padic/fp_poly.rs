//! Dense polynomials over the prime field `F_p`, coefficients low degree first.

use crate::arith::mod_pow;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<i64>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| c.rem_euclid(p as i64) as u64).collect();
        let mut f = FpPoly { p, coeffs };
        f.trim();
        f
    }

    fn from_raw(p: u64, coeffs: Vec<u64>) -> Self {
        let mut f = FpPoly { p, coeffs };
        f.trim();
        f
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn inv(&self, a: u64) -> u64 {
        mod_pow(a, self.p - 2, self.p)
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        FpPoly::from_raw(self.p, c)
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::from_raw(self.p, vec![]);
        }
        let p = self.p as u128;
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = ((c[i + j] as u128 + a as u128 * b as u128) % p) as u64;
            }
        }
        FpPoly::from_raw(self.p, c)
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &FpPoly) -> (FpPoly, FpPoly) {
        let p = self.p as u128;
        let d = divisor.degree().expect("division by zero polynomial");
        let lead_inv = self.inv(divisor.coeffs[d]) as u128;
        let mut r = self.coeffs.clone();
        if r.len() <= d {
            return (FpPoly::from_raw(self.p, vec![]), self.clone());
        }
        let mut q = vec![0u64; r.len() - d];
        for i in (d..r.len()).rev() {
            let c = (r[i] as u128 * lead_inv % p) as u64;
            q[i - d] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let idx = i - d + j;
                r[idx] = ((r[idx] as u128 + p - (c as u128 * b as u128 % p)) % p) as u64;
            }
        }
        (FpPoly::from_raw(self.p, q), FpPoly::from_raw(self.p, r))
    }

    pub fn rem(&self, divisor: &FpPoly) -> FpPoly {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> FpPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&l) => {
                let li = self.inv(l) as u128;
                let p = self.p as u128;
                FpPoly::from_raw(self.p, self.coeffs.iter().map(|&c| (c as u128 * li % p) as u64).collect())
            }
        }
    }

    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s)` with `g = gcd(self, modulus)` and `s * self ≡ g (mod modulus)`.
    pub fn inverse_mod(&self, modulus: &FpPoly) -> Option<FpPoly> {
        let (mut r0, mut r1) = (modulus.clone(), self.rem(modulus));
        let zero = FpPoly::from_raw(self.p, vec![]);
        let (mut s0, mut s1) = (zero, FpPoly::from_raw(self.p, vec![1]));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let c = self.inv(r0.coeffs[0]);
        Some(s0.mul(&FpPoly::from_raw(self.p, vec![c])).rem(modulus))
    }

    fn pow_mod(&self, mut e: u128, modulus: &FpPoly) -> FpPoly {
        let mut base = self.rem(modulus);
        let mut acc = FpPoly::from_raw(self.p, vec![1]);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// Rabin-style test: `gcd(f, x^(p^i) - x) = 1` for all `i <= deg/2`.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(n) => n,
        };
        if n == 1 {
            return true;
        }
        let x = FpPoly::from_raw(self.p, vec![0, 1]);
        let mut xp = x.clone();
        for _ in 1..=n / 2 {
            xp = xp.pow_mod(self.p as u128, self);
            if self.gcd(&xp.sub(&x)).degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// Smallest monic irreducible polynomial of degree `f`, ordering the
    /// non-leading coefficients lexicographically from `t^(f-1)` down to the
    /// constant term.
    pub fn smallest_irreducible(p: u64, f: usize) -> FpPoly {
        assert!(f >= 1);
        let total = (p as u128).pow(f as u32);
        for idx in 0..total {
            // digit i of idx (most significant first) is the coefficient of t^(f-1-i)
            let mut c = vec![0u64; f + 1];
            c[f] = 1;
            let mut rest = idx;
            for ck in c.iter_mut().take(f) {
                *ck = (rest % p as u128) as u64;
                rest /= p as u128;
            }
            let g = FpPoly::from_raw(p, c);
            if g.is_irreducible() {
                return g;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }
}
