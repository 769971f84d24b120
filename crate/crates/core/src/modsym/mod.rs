//! Weight-2 modular symbols for `Γ0(N)` through Manin symbols `(c:d)`.
//!
//! The symbol `(c:d)` stands for the path `g{0 → ∞}` where `g ∈ SL2(Z)` has
//! bottom row `(c, d)`. Relations: `x + xσ = 0`, `x + xτ + xτ² = 0` and, in
//! the sign-`s` quotient, `x = s·x*` with `(c:d)* = (-c:d)`.

mod eigen;
mod p1;

pub use eigen::{eigen_symbol, eigen_symbol_with, EigenSymbol, EigenSymbolJson};
pub use p1::P1List;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{sparse_axpy, sparse_from_pairs, Matrix, SparseEchelon, SparseVec, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" | "+1" | "1" => Ok(Sign::Plus),
            "-" | "minus" | "-1" => Ok(Sign::Minus),
            _ => Err(Error::Parse(format!("bad sign {s:?}"))),
        }
    }
}

/// Presentation of the sign quotient of the weight-2 modular symbols of
/// level `N` over `Q`.
#[derive(Debug)]
pub struct ManinBasis {
    level: u64,
    sign: Sign,
    p1: Arc<P1List>,
    /// P¹ indices of the free generators forming the basis.
    basis: Vec<usize>,
    /// Coordinates of every Manin symbol in that basis.
    coords: Vec<SparseVec>,
    cusps: Cusps,
}

impl ManinBasis {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn p1(&self) -> &Arc<P1List> {
        &self.p1
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_symbols(&self) -> Vec<(u64, u64)> {
        self.basis.iter().map(|&i| self.p1.get(i)).collect()
    }

    /// Coordinates of the Manin symbol with P¹ index `i`.
    pub fn coordinates(&self, i: usize) -> &SparseVec {
        &self.coords[i]
    }

    /// Coordinates of `(c:d)` for arbitrary integers; zero vector when the
    /// pair is not in P¹(Z/N).
    pub fn coordinates_of(&self, c: i64, d: i64) -> Option<&SparseVec> {
        self.p1.index_of(c, d).map(|i| &self.coords[i])
    }

    /// Matrix of `T_l` (`l ∤ N`) or `U_l` (`l | N`), acting on columns.
    pub fn hecke_operator(&self, l: u64) -> Matrix {
        let hs = heilbronn_merel(l);
        let d = self.dimension();
        let mut m = Matrix::zeros(d, d);
        for (j, &g) in self.basis.iter().enumerate() {
            let (c, dd) = self.p1.get(g);
            let (c, dd) = (c as i64, dd as i64);
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for h in &hs {
                let nc = c * h[0] + dd * h[2];
                let nd = c * h[1] + dd * h[3];
                if let Some(idx) = self.p1.index_of(nc, nd) {
                    *acc.entry(idx).or_insert(0) += 1;
                }
            }
            for (idx, mult) in acc {
                for (i, v) in &self.coords[idx] {
                    m[(*i, j)] += v * Q::from_integer(mult.into());
                }
            }
        }
        m
    }

    /// Boundary map to the cusp space of the sign quotient, as a matrix with
    /// one column per basis element.
    pub fn boundary_matrix(&self) -> Matrix {
        let mut cols = Vec::with_capacity(self.dimension());
        for &g in &self.basis {
            let mut col = vec![Q::zero(); self.cusps.count()];
            for (idx, s) in self.cusps.boundary_of(g) {
                col[idx] += Q::from_integer(s.into());
            }
            cols.push(col);
        }
        Matrix::from_columns(self.cusps.count(), &cols)
    }

    pub fn cuspidal_dimension(&self) -> usize {
        self.dimension() - self.boundary_matrix().rank()
    }

    /// Basis (in symbol coordinates) of the cuspidal subspace.
    pub fn cuspidal_subspace(&self) -> Vec<Vec<Q>> {
        self.boundary_matrix().kernel()
    }

    /// Unsigned boundary of each Manin symbol: `(end cusp, start cusp)` as
    /// indices into the full (sign-free) cusp list.
    pub fn raw_edges(&self) -> &[(usize, usize)] {
        &self.cusps.edges
    }

    pub fn to_json(&self, hecke_primes: &[u64]) -> ManinJson {
        ManinJson {
            level: self.level,
            sign: self.sign,
            p1: self.p1.list().to_vec(),
            basis: self.basis_symbols(),
            coordinates: self.coords.iter().map(|v| v.iter().map(|(i, x)| (*i, x.to_string())).collect()).collect(),
            cuspidal_dimension: self.cuspidal_dimension(),
            hecke: hecke_primes.iter().map(|&l| HeckeJson { l, matrix: self.hecke_operator(l).to_strings() }).collect(),
        }
    }
}

/// The data needed to rebuild a [`ManinBasis`] without elimination.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceData {
    pub level: u64,
    pub sign: Sign,
    /// P¹ indices of the basis symbols.
    pub basis: Vec<usize>,
    /// Sparse coordinates of every P¹ element, values as exact rationals.
    pub coords: Vec<Vec<(usize, String)>>,
}

impl ManinBasis {
    pub fn to_data(&self) -> SpaceData {
        SpaceData {
            level: self.level,
            sign: self.sign,
            basis: self.basis.clone(),
            coords: self.coords.iter().map(|v| v.iter().map(|(i, x)| (*i, x.to_string())).collect()).collect(),
        }
    }

    /// Rebuilds a space from stored data, checking every defining relation
    /// so that damaged data is rejected rather than used.
    pub fn from_data(data: &SpaceData) -> Result<ManinBasis> {
        let bad = |why: &str| Error::Invalid(format!("stored space of level {}: {why}", data.level));
        if data.level == 0 {
            return Err(bad("level 0"));
        }
        let p1 = Arc::new(P1List::new(data.level));
        if data.coords.len() != p1.len() {
            return Err(bad("wrong number of symbols"));
        }
        let dim = data.basis.len();
        let mut coords = Vec::with_capacity(p1.len());
        for row in &data.coords {
            let mut pairs = Vec::with_capacity(row.len());
            for (i, x) in row {
                if *i >= dim {
                    return Err(bad("coordinate index out of range"));
                }
                let x: Q = x.parse().map_err(|_| bad("unparsable rational"))?;
                pairs.push((*i, x));
            }
            coords.push(sparse_from_pairs(pairs));
        }
        for (k, &g) in data.basis.iter().enumerate() {
            if g >= p1.len() || coords[g] != vec![(k, Q::one())] {
                return Err(bad("basis symbol is not a unit vector"));
            }
        }
        let s = Q::from_integer(data.sign.as_i64().into());
        let at = |c: i64, d: i64| &coords[p1.index_of(c, d).expect("P¹ is closed under the relations")];
        for (i, own) in coords.iter().enumerate() {
            let (c, d) = p1.get(i);
            let (c, d) = (c as i64, d as i64);
            let sigma = sparse_axpy(own, &Q::one(), at(d, -c));
            let tau = sparse_axpy(&sparse_axpy(own, &Q::one(), at(d, -c - d)), &Q::one(), at(-c - d, c));
            let star = sparse_axpy(own, &-s.clone(), at(-c, d));
            if !sigma.is_empty() || !tau.is_empty() || !star.is_empty() {
                return Err(bad("relations fail"));
            }
        }
        let cusps = Cusps::new(&p1, data.sign);
        Ok(ManinBasis { level: data.level, sign: data.sign, p1, basis: data.basis.clone(), coords, cusps })
    }
}

/// Registers a space (e.g. one loaded from disk) in the process memo.
pub fn insert_space(space: ManinBasis) -> Arc<ManinBasis> {
    let key = (space.level, space.sign);
    let mut guard = SPACE_CACHE.write().expect("space cache poisoned");
    let map = guard.get_or_insert_with(HashMap::new);
    map.entry(key).or_insert_with(|| Arc::new(space)).clone()
}

#[derive(Clone, Debug, Serialize)]
pub struct HeckeJson {
    pub l: u64,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ManinJson {
    pub level: u64,
    pub sign: Sign,
    pub p1: Vec<(u64, u64)>,
    pub basis: Vec<(u64, u64)>,
    pub coordinates: Vec<Vec<(usize, String)>>,
    pub cuspidal_dimension: usize,
    pub hecke: Vec<HeckeJson>,
}

/// Merel's set of matrices `[[a, b], [c, d]]` with determinant `n`,
/// `a > b ≥ 0` and `d > c ≥ 0`, stored as `[a, b, c, d]`.
pub fn heilbronn_merel(n: u64) -> Vec<[i64; 4]> {
    let n = n as i64;
    let mut out = Vec::new();
    for a in 1..=n {
        for d in 1..=(n + 1 - a) {
            let t = a * d - n;
            if t < 0 {
                continue;
            }
            if t == 0 {
                for c in 0..d {
                    out.push([a, 0, c, d]);
                }
                for b in 1..a {
                    out.push([a, b, 0, d]);
                }
                continue;
            }
            for b in 1..a.min(t + 1) {
                if t % b == 0 && t / b < d {
                    out.push([a, b, t / b, d]);
                }
            }
        }
    }
    out
}

/// Weighted union-find for two-term relations `x_i = s·x_j`.
struct SignedUnion {
    parent: Vec<usize>,
    sign: Vec<i8>,
    zero: Vec<bool>,
}

impl SignedUnion {
    fn new(n: usize) -> Self {
        SignedUnion { parent: (0..n).collect(), sign: vec![1; n], zero: vec![false; n] }
    }

    /// Root of `i` and the sign `s` with `x_i = s·x_root`.
    fn find(&mut self, i: usize) -> (usize, i8) {
        let p = self.parent[i];
        if p == i {
            return (i, 1);
        }
        let (r, s) = self.find(p);
        self.parent[i] = r;
        self.sign[i] *= s;
        (r, self.sign[i])
    }

    fn union(&mut self, i: usize, j: usize, s: i8) {
        let (ri, si) = self.find(i);
        let (rj, sj) = self.find(j);
        if ri == rj {
            if si != s * sj {
                self.zero[ri] = true;
            }
            return;
        }
        // x_ri = si x_i = si s x_j = si s sj x_rj
        self.parent[ri] = rj;
        self.sign[ri] = si * s * sj;
        let z = self.zero[ri];
        self.zero[rj] |= z;
    }
}

type SpaceMap = HashMap<(u64, Sign), Arc<ManinBasis>>;

static SPACE_CACHE: RwLock<Option<SpaceMap>> = RwLock::new(None);

/// The sign quotient of level `n`, memoised per process.
pub fn build_space(n: u64, sign: Sign) -> Result<Arc<ManinBasis>> {
    if n == 0 {
        return Err(Error::Invalid("level must be positive".into()));
    }
    if let Some(map) = SPACE_CACHE.read().expect("space cache poisoned").as_ref() {
        if let Some(b) = map.get(&(n, sign)) {
            return Ok(b.clone());
        }
    }
    let built = Arc::new(build_space_uncached(n, sign));
    let mut guard = SPACE_CACHE.write().expect("space cache poisoned");
    let map = guard.get_or_insert_with(HashMap::new);
    Ok(map.entry((n, sign)).or_insert(built).clone())
}

pub fn build_space_uncached(n: u64, sign: Sign) -> ManinBasis {
    let p1 = Arc::new(P1List::new(n));
    let len = p1.len();
    let mut uf = SignedUnion::new(len);
    let s = sign.as_i64() as i8;
    for i in 0..len {
        let (c, d) = p1.get(i);
        let (c, d) = (c as i64, d as i64);
        let j = p1.index_of(d, -c).expect("σ permutes P¹");
        uf.union(i, j, -1);
        let k = p1.index_of(-c, d).expect("η permutes P¹");
        uf.union(i, k, s);
    }
    // free generators: non-zero roots
    let mut root_col: HashMap<usize, usize> = HashMap::new();
    let mut roots = Vec::new();
    let mut class: Vec<Option<(usize, i8)>> = Vec::with_capacity(len);
    for i in 0..len {
        let (r, sg) = uf.find(i);
        if uf.zero[r] {
            class.push(None);
            continue;
        }
        let col = *root_col.entry(r).or_insert_with(|| {
            roots.push(r);
            roots.len() - 1
        });
        class.push(Some((col, sg)));
    }
    // three-term relations
    let mut ech = SparseEchelon::new();
    for i in 0..len {
        let (c, d) = p1.get(i);
        let (c, d) = (c as i64, d as i64);
        let t1 = p1.index_of(d, -c - d).expect("τ permutes P¹");
        let t2 = p1.index_of(-c - d, c).expect("τ² permutes P¹");
        let mut pairs = Vec::new();
        for k in [i, t1, t2] {
            if let Some((col, sg)) = class[k] {
                pairs.push((col, Q::from_integer(sg.into())));
            }
        }
        let row = sparse_from_pairs(pairs);
        if !row.is_empty() {
            ech.insert(&row);
        }
    }
    let free: Vec<usize> = (0..roots.len()).filter(|&c| !ech.is_pivot(c)).collect();
    let mut free_index = vec![usize::MAX; roots.len()];
    for (k, &c) in free.iter().enumerate() {
        free_index[c] = k;
    }
    let col_coords: Vec<SparseVec> = (0..roots.len())
        .map(|c| {
            if !ech.is_pivot(c) {
                vec![(free_index[c], Q::one())]
            } else {
                let row = ech.pivot_row(c).unwrap();
                sparse_from_pairs(
                    row.iter().filter(|(cc, _)| *cc != c).map(|(cc, v)| (free_index[*cc], -v.clone())).collect(),
                )
            }
        })
        .collect();
    let coords: Vec<SparseVec> = class
        .iter()
        .map(|cl| match cl {
            None => Vec::new(),
            Some((col, sg)) => col_coords[*col].iter().map(|(i, v)| (*i, v * Q::from_integer((*sg).into()))).collect(),
        })
        .collect();
    let basis = free.iter().map(|&c| roots[c]).collect();
    let cusps = Cusps::new(&p1, sign);
    ManinBasis { level: n, sign, p1, basis, coords, cusps }
}

/// `(a, b)` with `a·d - b·c = 1` for a coprime lift `(c, d)` of the P¹
/// element, together with that lift.
pub(crate) fn lift_to_sl2(c: u64, d: u64, n: u64) -> [i64; 4] {
    let n = n as i64;
    let c = if c == 0 { n } else { c as i64 };
    let mut d = d as i64;
    while c.gcd(&d) != 1 {
        d += n;
    }
    let e = c.extended_gcd(&d);
    // e.x c + e.y d = 1 → a = e.y, b = -e.x
    [e.y, -e.x, c, d]
}

/// Cusps of `Γ0(N)`, with their identification in the sign quotient.
#[derive(Debug)]
struct Cusps {
    level: u64,
    /// `(a, c)` with `c ≥ 0`, one per `Γ0(N)`-class.
    reps: Vec<(i64, i64)>,
    /// Per class: index of its class in the sign quotient and the sign,
    /// or `None` when it is forced to zero.
    signed: Vec<Option<(usize, i64)>>,
    signed_count: usize,
    /// For each Manin symbol: (class of g∞, class of g0).
    edges: Vec<(usize, usize)>,
}

impl Cusps {
    fn new(p1: &P1List, sign: Sign) -> Self {
        let mut cusps =
            Cusps { level: p1.level(), reps: Vec::new(), signed: Vec::new(), signed_count: 0, edges: Vec::new() };
        for i in 0..p1.len() {
            let (c, d) = p1.get(i);
            let [a, b, c, d] = lift_to_sl2(c, d, p1.level());
            let end = cusps.class_of(a, c);
            let start = cusps.class_of(b, d);
            cusps.edges.push((end, start));
        }
        let s = sign.as_i64();
        let n = cusps.reps.len();
        let mut signed = vec![None; n];
        let mut count = 0;
        for k in 0..n {
            if signed[k].is_some() {
                continue;
            }
            let (a, c) = cusps.reps[k];
            let neg = cusps.find(-a, c).expect("negated cusp is a cusp");
            if neg == k {
                if s == 1 {
                    signed[k] = Some((count, 1));
                    count += 1;
                }
                // sign −: [α] = −[α] forces zero
                continue;
            }
            signed[k] = Some((count, 1));
            signed[neg] = Some((count, s));
            count += 1;
        }
        // classes forced to zero are marked with a sentinel
        cusps.signed = signed;
        cusps.signed_count = count;
        cusps
    }

    fn count(&self) -> usize {
        self.signed_count
    }

    fn normalise(a: i64, c: i64) -> (i64, i64) {
        if c < 0 || (c == 0 && a < 0) {
            (-a, -c)
        } else {
            (a, c)
        }
    }

    fn equivalent(&self, (a1, c1): (i64, i64), (a2, c2): (i64, i64)) -> bool {
        let n = self.level as i64;
        let s_of = |a: i64, c: i64| -> i64 {
            if c == 0 {
                return a.signum();
            }
            let e = a.extended_gcd(&c);
            e.x.rem_euclid(c)
        };
        let (s1, s2) = (s_of(a1, c1), s_of(a2, c2));
        let m = (c1 * c2).gcd(&n);
        (s1 * c2 - s2 * c1).rem_euclid(m) == 0
    }

    fn find(&self, a: i64, c: i64) -> Option<usize> {
        let x = Cusps::normalise(a, c);
        self.reps.iter().position(|&r| self.equivalent(r, x))
    }

    fn class_of(&mut self, a: i64, c: i64) -> usize {
        if let Some(k) = self.find(a, c) {
            return k;
        }
        self.reps.push(Cusps::normalise(a, c));
        self.reps.len() - 1
    }

    /// `∂(x_i) = [g∞] - [g0]` in the sign quotient's cusp space.
    fn boundary_of(&self, i: usize) -> Vec<(usize, i64)> {
        let (end, start) = self.edges[i];
        let mut out = Vec::new();
        if let Some((k, s)) = self.signed[end] {
            out.push((k, s));
        }
        if let Some((k, s)) = self.signed[start] {
            out.push((k, -s));
        }
        out
    }
}

/// Number of cusps of `X0(N)`: `Σ_{d | N} φ(gcd(d, N/d))`.
pub fn cusp_count(n: u64) -> usize {
    let phi = |m: u64| (1..=m).filter(|k| k.gcd(&m) == 1).count();
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| phi(d.gcd(&(n / d)))).sum()
}
