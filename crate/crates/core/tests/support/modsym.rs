//! Independent oracles for modular symbols: the genus of `X_0(N)` and
//! traces of Frobenius by point counting.

#![allow(dead_code)]

use linv_core::arith::{factor, is_prime, kronecker};
use linv_core::curves::{CurveEntry, WeierstrassCurve};
use linv_core::linalg::{Matrix, Q};
use linv_core::modsym::{build_space, Sign};
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Genus of `X_0(N)` from the classical index, elliptic point and cusp counts.
pub fn genus_x0(n: u64) -> usize {
    let primes: Vec<u64> = factor(n).into_iter().map(|(p, _)| p).collect();
    let mu = primes.iter().fold(n as f64, |acc, &p| acc * (1.0 + 1.0 / p as f64));
    let nu = |d: i64, sq: u64| -> f64 {
        if n.is_multiple_of(sq) {
            0.0
        } else {
            primes.iter().map(|&p| 1.0 + kronecker(d, p) as f64).product()
        }
    };
    let nu2 = nu(-4, 4);
    let nu3 = nu(-3, 9);
    let cusps: u64 = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| {
            let g = d.gcd(&(n / d));
            (1..=g).filter(|k| k.gcd(&g) == 1).count() as u64
        })
        .sum();
    let g = 1.0 + mu / 12.0 - nu2 / 4.0 - nu3 / 3.0 - cusps as f64 / 2.0;
    g.round() as usize
}

/// `l + 1 - #E(F_l)` by enumerating affine points of the full Weierstrass
/// equation.
pub fn naive_ap(e: &WeierstrassCurve, l: u64) -> i64 {
    let a: Vec<i64> =
        e.minimal_model().a_invariants().iter().map(|x| x.mod_floor(&l.into()).to_i64().unwrap()).collect();
    let l = l as i64;
    let mut count = 1;
    for x in 0..l {
        for y in 0..l {
            let lhs = y * y + a[0] * x * y + a[2] * y;
            let rhs = x * x * x + a[1] * x * x + a[3] * x + a[4];
            if (lhs - rhs).rem_euclid(l) == 0 {
                count += 1;
            }
        }
    }
    l + 1 - count
}

/// Cuspidal dimension of both sign quotients against the genus.
pub fn check_dimensions(levels: &[u64]) -> Result<(), String> {
    for &n in levels {
        for sign in [Sign::Plus, Sign::Minus] {
            let space = build_space(n, sign).map_err(|e| e.to_string())?;
            if space.cuspidal_dimension() != genus_x0(n) {
                return Err(format!("N = {n}, sign {sign:?}: {} vs genus {}", space.cuspidal_dimension(), genus_x0(n)));
            }
        }
    }
    Ok(())
}

/// The point-count traces `a_l`, good `l <= bound`, cut out a common
/// eigenline in the cuspidal subspace of the plus quotient.
pub fn check_eigenvalues(entry: &CurveEntry, bound: u64) -> Result<(), String> {
    let n = entry.conductor;
    let space = build_space(n, Sign::Plus).map_err(|e| e.to_string())?;
    let mut span = Matrix::from_columns(space.dimension(), &space.cuspidal_subspace());
    for l in (2..=bound).filter(|&l| is_prime(l) && !n.is_multiple_of(l)) {
        let a = naive_ap(&entry.curve, l);
        let t = space.hecke_operator(l).sub_scalar(&Q::from_integer(a.into()));
        let ker = t.mul(&span).kernel();
        if ker.is_empty() {
            return Err(format!("{}: a_{l} = {a} is not an eigenvalue", entry.label));
        }
        span = span.mul(&Matrix::from_columns(span.cols(), &ker));
    }
    Ok(())
}

pub fn check_commutativity(levels: &[u64], primes: &[u64]) -> Result<(), String> {
    for &n in levels {
        let space = build_space(n, Sign::Plus).map_err(|e| e.to_string())?;
        let ops: Vec<(u64, Matrix)> = primes.iter().map(|&l| (l, space.hecke_operator(l))).collect();
        for (l, a) in &ops {
            for (m, b) in &ops {
                if a.mul(b) != b.mul(a) {
                    return Err(format!("N = {n}: T_{l} T_{m} != T_{m} T_{l}"));
                }
            }
        }
    }
    Ok(())
}
