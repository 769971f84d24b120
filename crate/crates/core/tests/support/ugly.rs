//! Randomly constructed instances of the quadratic relation between two
//! branch directions `x`, `x'` attached to a fixed period `q^B`.
//!
//! Everything lives in `F = Q_{p^2}`. Given `q^B` and `x` with `ord(x) = 1`,
//! the period `q = (q^B)^{-1} x^{2 ord(q^B)}` satisfies
//! `LI_x(q) = -LI_x(q^B)`. The second direction is either a power of `x`
//! (same norm L-invariant) or the reflection `x' = q^B w^{-ord(q^B)}` with
//! `x = p w`, whose norm L-invariant is `c - t`; both make the squares of
//! `LI_p(N(q))` and `LI_p(N(q'))` agree.

use linv_core::padic::UnramifiedElement;
use linv_core::periods::{ugly_polynomial, Base, Branch, FieldSpec, Period};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Exact arithmetic in `Q[t]/(t^2 + c1 t + c0)`.
#[derive(Clone)]
struct Quad {
    c0: Q,
    c1: Q,
}

impl Quad {
    fn mul(&self, a: &[Q; 2], b: &[Q; 2]) -> [Q; 2] {
        let t2 = &a[1] * &b[1];
        [&a[0] * &b[0] - &t2 * &self.c0, &a[0] * &b[1] + &a[1] * &b[0] - &t2 * &self.c1]
    }

    fn inv(&self, a: &[Q; 2]) -> [Q; 2] {
        let n = &a[0] * &a[0] - &a[0] * &a[1] * &self.c1 + &a[1] * &a[1] * &self.c0;
        [(&a[0] - &a[1] * &self.c1) / &n, -&a[1] / &n]
    }

    fn pow(&self, a: &[Q; 2], e: i64) -> [Q; 2] {
        let base = if e < 0 { self.inv(a) } else { a.clone() };
        let mut acc = [Q::one(), Q::zero()];
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }
}

pub struct Params {
    pub p: u64,
    pub sub_degree: usize,
    /// Unit `u0 + u1 t` entering `q^B`, and its exponent.
    pub u: [i64; 2],
    pub e_u: i64,
    /// Rational factor `p^k m` of `q^B`, and its exponent.
    pub k: u32,
    pub m: i64,
    pub e_m: i64,
    /// `x = p (w0 + w1 t)`.
    pub w: [i64; 2],
    /// `None` for the reflection, `Some(j)` for `x' = x^j`.
    pub power: Option<i64>,
}

pub struct Outcome {
    pub hypotheses_hold: bool,
    pub conclusion_holds: bool,
    /// Absolute precision of `f(t) - f(t')`.
    pub digits: i64,
    /// Whether `t != t'`, i.e. the instance exercises the reflection.
    pub nontrivial: bool,
    /// Whether `f` separates `x` from the unrelated direction `x (1 + p t)`.
    pub control_differs: bool,
}

fn coords(a: &[Q; 2]) -> Base {
    Base::Coords(a.to_vec())
}

pub fn run(params: &Params, precision: u32) -> Outcome {
    let p = params.p as i64;
    let field = FieldSpec::unramified(params.p, 2);
    let quad = Quad { c0: q(field.modulus[0]), c1: q(field.modulus[1]) };
    let u = [q(params.u[0]), q(params.u[1])];
    let w = [q(params.w[0]), q(params.w[1])];
    let x = [&w[0] * q(p), &w[1] * q(p)];
    let b2 = q(p.pow(params.k) * params.m);

    let q_b_factors = vec![(coords(&u), params.e_u), (Base::Rational(b2.clone()), params.e_m)];
    let o_b = params.k as i64 * params.e_m;
    let q_b = Period::new(field.clone(), q_b_factors.clone()).unwrap();

    let period_for = |dir: &[Q; 2], o_dir: i64| -> Period {
        let mut f: Vec<(Base, i64)> = q_b_factors.iter().map(|(b, e)| (b.clone(), -e * o_dir)).collect();
        f.push((coords(dir), 2 * o_b));
        Period::new(field.clone(), f).unwrap()
    };
    let q1 = period_for(&x, 1);

    let (x2, o_x2) = match params.power {
        Some(j) => (quad.pow(&x, j), j),
        None => {
            let ub = quad.pow(&u, params.e_u);
            let qb = [&ub[0] * b2.pow(params.e_m as i32), &ub[1] * b2.pow(params.e_m as i32)];
            (quad.mul(&qb, &quad.pow(&w, -o_b)), o_b)
        }
    };
    let q2 = period_for(&x2, o_x2);

    let bx = Branch::Element(coords(&x));
    let bx2 = Branch::Element(coords(&x2));
    let vanishes = |a: &UnramifiedElement, b: &UnramifiedElement| (a + b).is_zero();
    let h1 = vanishes(&q1.li_in_field(&bx, precision).unwrap(), &q_b.li_in_field(&bx, precision).unwrap());
    let h2 = vanishes(&q2.li_in_field(&bx2, precision).unwrap(), &q_b.li_in_field(&bx2, precision).unwrap());
    let n1 = q1.norm_li(params.sub_degree, precision).unwrap();
    let n2 = q2.norm_li(params.sub_degree, precision).unwrap();
    let h3 = (&(&n1 * &n1) - &(&n2 * &n2)).is_zero();

    let f = ugly_polynomial(&q_b, params.sub_degree, precision).unwrap();
    let t1 = Period::single(field.clone(), coords(&x)).unwrap().norm_li(params.sub_degree, precision).unwrap();
    let x3 = quad.mul(&x, &[Q::one(), q(p)]);
    let t3 = Period::single(field.clone(), coords(&x3)).unwrap().norm_li(params.sub_degree, precision).unwrap();
    let t2 = Period::single(field, coords(&x2)).unwrap().norm_li(params.sub_degree, precision).unwrap();
    let diff = &f.eval(&t1) - &f.eval(&t2);
    Outcome {
        hypotheses_hold: h1 && h2 && h3,
        conclusion_holds: diff.is_zero(),
        digits: diff.abs_precision(),
        nontrivial: !(&t1 - &t2).is_zero(),
        control_differs: !(&f.eval(&t1) - &f.eval(&t3)).is_zero(),
    }
}

/// Draws parameters from a source of uniform integers `next(lo, hi)`
/// (inclusive bounds).
pub fn draw(mut next: impl FnMut(i64, i64) -> i64) -> Params {
    let primes = [3u64, 5, 7];
    let p = primes[next(0, 2) as usize];
    let pi = p as i64;
    let unit = |next: &mut dyn FnMut(i64, i64) -> i64| loop {
        let c = [next(-20, 20), next(-20, 20)];
        if c[0] % pi != 0 || c[1] % pi != 0 {
            return c;
        }
    };
    let u = unit(&mut next);
    let w = unit(&mut next);
    let m = loop {
        let m = next(1, 30);
        if m % pi != 0 {
            break m;
        }
    };
    Params {
        p,
        sub_degree: next(1, 2) as usize,
        u,
        e_u: next(1, 3),
        k: next(1, 2) as u32,
        m,
        e_m: next(1, 2),
        w,
        power: if next(0, 3) == 0 { Some(next(2, 3)) } else { None },
    }
}
