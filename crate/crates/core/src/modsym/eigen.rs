use std::collections::VecDeque;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{build_space, heilbronn_merel, ManinBasis, P1List, Sign};
use crate::arith::primes_up_to;
use crate::curves::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::linalg::{content, Matrix, Q};

/// Primes always probed, even once the eigenspace is a line.
const MIN_PROBE: u64 = 13;
/// Give up if the joint eigenspace is not a line by this prime.
const MAX_PROBE: u64 = 50;

/// Rational modular symbol of a Hecke eigenform: a functional on paths
/// between cusps, stored by its values on all Manin symbols.
#[derive(Clone, Debug)]
pub struct EigenSymbol {
    level: u64,
    sign: Sign,
    p1: Arc<P1List>,
    values: Vec<Q>,
    eigenvalues: Vec<(u64, i64)>,
    denominator: BigInt,
}

impl EigenSymbol {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn eigenvalues(&self) -> &[(u64, i64)] {
        &self.eigenvalues
    }

    /// Common denominator of all values.
    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// Value on the Manin symbol `(c:d)`; zero outside P¹(Z/N).
    pub fn manin_value(&self, c: i64, d: i64) -> Q {
        self.p1.index_of(c, d).map(|i| self.values[i].clone()).unwrap_or_else(Q::zero)
    }

    /// Value on the path `{a/m → ∞}` by Manin's continued-fraction trick.
    pub fn evaluate(&self, a: i64, m: i64) -> Q {
        assert!(m != 0, "cusp ∞ has no finite value");
        let (a, m) = if m < 0 { (-a, -m) } else { (a, m) };
        let g = a.gcd(&m);
        let (a, m) = (a / g, m / g);
        // {∞ → a/m} = Σ_j ((-1)^{j-1} q_j : q_{j-1})
        let mut acc = Q::zero();
        let (mut num, mut den) = (a, m);
        let (mut q_prev, mut q_cur) = (1i64, 0i64); // q_{-2}, q_{-1}
        let mut j = 0u32;
        loop {
            let digit = Integer::div_floor(&num, &den);
            let q_next = digit * q_cur + q_prev;
            q_prev = q_cur;
            q_cur = q_next;
            let c = if j % 2 == 1 { q_cur } else { -q_cur };
            acc += self.manin_value(c, q_prev);
            let rem = num - digit * den;
            if rem == 0 {
                break;
            }
            num = den;
            den = rem;
            j += 1;
        }
        -acc
    }

    pub fn evaluate_rational(&self, r: &Q) -> Q {
        use num_traits::ToPrimitive;
        let a = r.numer().to_i64().expect("numerator fits in i64");
        let m = r.denom().to_i64().expect("denominator fits in i64");
        self.evaluate(a, m)
    }

    /// `Σ_{h} φ((c:d)h)` over Merel's matrices of determinant `l`, for every
    /// Manin symbol; equals `a_l φ` for an eigen-symbol.
    pub fn hecke_image(&self, l: u64) -> Vec<Q> {
        let hs = heilbronn_merel(l);
        (0..self.p1.len())
            .map(|i| {
                let (c, d) = self.p1.get(i);
                let (c, d) = (c as i64, d as i64);
                hs.iter().fold(Q::zero(), |acc, h| acc + self.manin_value(c * h[0] + d * h[2], c * h[1] + d * h[3]))
            })
            .collect()
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn to_json(&self) -> EigenSymbolJson {
        EigenSymbolJson {
            level: self.level,
            sign: self.sign,
            normalization: "closed integral paths map onto Z; value at {0->oo} >= 0".into(),
            eigenvalues: self.eigenvalues.clone(),
            denominator: self.denominator.to_string(),
            value_at_zero: self.evaluate(0, 1).to_string(),
            manin_values: self.p1.list().iter().zip(&self.values).map(|(&(c, d), v)| (c, d, v.to_string())).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenSymbolJson {
    pub level: u64,
    pub sign: Sign,
    pub normalization: String,
    pub eigenvalues: Vec<(u64, i64)>,
    pub denominator: String,
    pub value_at_zero: String,
    pub manin_values: Vec<(u64, u64, String)>,
}

/// The eigen-symbol of an elliptic curve of conductor `level`.
pub fn eigen_symbol(curve: &WeierstrassCurve, level: u64, sign: Sign) -> Result<EigenSymbol> {
    let bad = curve.bad_primes();
    eigen_symbol_with(level, sign, |l| {
        if bad.contains(&l) {
            curve.reduction_type(l).map(|r| r.ap).unwrap_or(0)
        } else {
            curve.ap(l)
        }
    })
}

/// Eigen-symbol with prescribed eigenvalues `a_l`: the joint kernel of
/// `T_l^t - a_l` on the dual of the symbol space, probed prime by prime
/// until it is a line.
pub fn eigen_symbol_with(level: u64, sign: Sign, a_l: impl Fn(u64) -> i64) -> Result<EigenSymbol> {
    let space = build_space(level, sign)?;
    let d = space.dimension();
    let not_found = || Error::CurveNotFound(format!("level {level}"));
    if d == 0 {
        return Err(not_found());
    }
    let mut span = Matrix::identity(d);
    let mut eigenvalues = Vec::new();
    for l in primes_up_to(MAX_PROBE) {
        if span.cols() == 1 && l > MIN_PROBE {
            break;
        }
        let a = a_l(l);
        eigenvalues.push((l, a));
        let t = space.hecke_operator(l).transpose();
        let m = t.sub_scalar(&Q::from_integer(a.into())).mul(&span);
        let ker = m.kernel();
        if ker.is_empty() {
            return Err(not_found());
        }
        let y = Matrix::from_columns(span.cols(), &ker);
        span = span.mul(&y);
    }
    if span.cols() != 1 {
        return Err(Error::CurveNotFound(format!(
            "level {level}: eigenspace of dimension {} after l <= {MAX_PROBE}",
            span.cols()
        )));
    }
    let phi = span.column(0);
    let values: Vec<Q> = (0..space.p1().len())
        .map(|i| space.coordinates(i).iter().fold(Q::zero(), |acc, (k, v)| acc + v * &phi[*k]))
        .collect();
    let values = normalise(&space, values)?;
    let denominator = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    Ok(EigenSymbol { level, sign, p1: space.p1().clone(), values, eigenvalues, denominator })
}

/// Values of the symbol on closed paths: one per independent cycle of the
/// graph whose vertices are cusps and whose edges are Manin symbols.
pub(crate) fn cycle_values(space: &ManinBasis, values: &[Q]) -> Vec<Q> {
    let edges = space.raw_edges();
    let vertices = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertices];
    for (i, &(end, start)) in edges.iter().enumerate() {
        adj[start].push((i, end));
        adj[end].push((i, start));
    }
    let mut pot: Vec<Option<Q>> = vec![None; vertices];
    let mut tree = vec![false; edges.len()];
    for root in 0..vertices {
        if pot[root].is_some() {
            continue;
        }
        pot[root] = Some(Q::zero());
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(e, w) in &adj[u] {
                if pot[w].is_some() {
                    continue;
                }
                let (end, _) = edges[e];
                let pu = pot[u].clone().unwrap();
                // pot(end) = pot(start) + value(edge)
                pot[w] = Some(if w == end { pu + &values[e] } else { pu - &values[e] });
                tree[e] = true;
                queue.push_back(w);
            }
        }
    }
    edges
        .iter()
        .enumerate()
        .filter(|(e, _)| !tree[*e])
        .map(|(e, &(end, start))| pot[start].clone().unwrap() + &values[e] - pot[end].clone().unwrap())
        .collect()
}

fn normalise(space: &ManinBasis, values: Vec<Q>) -> Result<Vec<Q>> {
    let cycles = cycle_values(space, &values);
    let mut g = content(&cycles);
    if g.is_zero() {
        g = content(&values);
    }
    if g.is_zero() {
        return Err(Error::CurveNotFound("eigen-symbol vanishes identically".into()));
    }
    let mut values: Vec<Q> = values.into_iter().map(|v| v / &g).collect();
    let at_zero = space.p1().index_of(0, 1).map(|i| values[i].clone()).unwrap_or_else(Q::zero);
    let negate = if !at_zero.is_zero() {
        at_zero.is_negative()
    } else {
        values.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative())
    };
    if negate {
        values.iter_mut().for_each(|v| *v = -v.clone());
    }
    Ok(values)
}
