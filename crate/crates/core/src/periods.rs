//! Periods `q = ∏ b_i^{e_i}` in `F* ⊗ Z` for `F = Q_p` or an unramified
//! `Q_{p^f}`, and their L-invariants
//!
//! ```text
//! LI_λ(q) = (Σ e_i λ(b_i)) / (Σ e_i ord(b_i))
//! ```
//!
//! Bases are stored exactly and only rounded to p-adic precision when an
//! L-invariant is evaluated, so any period can be re-evaluated at a higher
//! precision.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{rational_valuation, Padic, UnramifiedElement, UnramifiedField};

/// Number of extra digits carried internally by the identity checks.
const GUARD_DIGITS: u32 = 4;

/// Slack allowed between the working precision and the provable precision
/// when two L-invariants are declared equal.
pub const EQUALITY_SLACK: i64 = 2;

/// The local field a period lives in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    pub prime: u64,
    /// Monic defining polynomial of the unramified extension, low degree
    /// first; `[0, 1]` stands for `Q_p` itself.
    pub modulus: Vec<i64>,
}

impl FieldSpec {
    pub fn qp(prime: u64) -> Self {
        FieldSpec { prime, modulus: vec![0, 1] }
    }

    /// `Q_{p^f}` with the deterministic default defining polynomial.
    pub fn unramified(prime: u64, degree: usize) -> Self {
        let g = crate::padic::FpPoly::smallest_irreducible(prime, degree);
        FieldSpec { prime, modulus: g.coeffs().iter().map(|&c| c as i64).collect() }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn build(&self, precision: u32) -> Result<Arc<UnramifiedField>> {
        UnramifiedField::with_modulus(self.prime, self.modulus.clone(), precision)
    }
}

/// An exactly known nonzero field element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Base {
    Rational(BigRational),
    /// Rational coordinates in the power basis of the field.
    Coords(Vec<BigRational>),
}

impl Base {
    pub fn int(n: i64) -> Self {
        Base::Rational(BigRational::from_integer(n.into()))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Base::Rational(r) => r.is_zero(),
            Base::Coords(c) => c.iter().all(Zero::is_zero),
        }
    }

    /// Exact valuation.
    pub fn ord(&self, prime: u64) -> Result<i64> {
        match self {
            Base::Rational(r) if r.is_zero() => Err(Error::ValuationOfZero),
            Base::Rational(r) => Ok(rational_valuation(r, prime)),
            Base::Coords(c) => c
                .iter()
                .filter(|x| !x.is_zero())
                .map(|x| rational_valuation(x, prime))
                .min()
                .ok_or(Error::ValuationOfZero),
        }
    }

    fn coords(&self, degree: usize) -> Result<Vec<BigRational>> {
        match self {
            Base::Rational(r) => {
                let mut c = vec![BigRational::zero(); degree];
                c[0] = r.clone();
                Ok(c)
            }
            Base::Coords(c) if c.len() == degree => Ok(c.clone()),
            Base::Coords(c) => {
                Err(Error::Invalid(format!("base has {} coordinates, field degree is {degree}", c.len())))
            }
        }
    }

    /// Rounds the base to `precision` significant digits in `field`.
    pub fn evaluate(&self, field: &Arc<UnramifiedField>, precision: u32) -> Result<UnramifiedElement> {
        if self.is_zero() {
            return Err(Error::ValuationOfZero);
        }
        if field.degree() == 1 {
            if let Base::Rational(r) = self {
                return Ok(UnramifiedElement::from_padic(field, &Padic::from_rational(field.prime(), r, precision)));
            }
        }
        UnramifiedElement::from_rational_coords(field, &self.coords(field.degree())?, precision)
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Rational(r) => write!(f, "{r}"),
            Base::Coords(c) => {
                let s: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "[{}]", s.join(","))
            }
        }
    }
}

/// Which homomorphism `λ: F* → Ω` an L-invariant is taken with respect to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `log_p ∘ N_{F/Q_p}`, valued in `Q_p`.
    Cyclotomic,
    /// The Iwasawa logarithm on `F` (`log(p) = 0`), valued in `F`.
    Iwasawa,
    /// `log_x`, the branch with `log_x(x) = 0`; requires `ord(x) != 0`.
    Element(Base),
}

/// A formal product `∏ b_i^{e_i}` with nonzero total valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Period {
    field: FieldSpec,
    factors: Vec<(Base, i64)>,
}

impl Period {
    /// Builds the normal form: equal bases merged, zero exponents dropped.
    /// Errors if the total valuation vanishes.
    pub fn new(field: FieldSpec, factors: Vec<(Base, i64)>) -> Result<Self> {
        let mut merged: Vec<(Base, i64)> = Vec::new();
        for (b, e) in factors {
            if b.is_zero() {
                return Err(Error::ValuationOfZero);
            }
            if let Base::Coords(c) = &b {
                if c.len() != field.degree() {
                    return Err(Error::FieldMismatch);
                }
            }
            let b = normalize_base(b);
            match merged.iter_mut().find(|(x, _)| *x == b) {
                Some((_, acc)) => *acc += e,
                None => merged.push((b, e)),
            }
        }
        merged.retain(|(_, e)| *e != 0);
        let q = Period { field, factors: merged };
        if q.total_ord()? == 0 {
            return Err(Error::NotAPeriod);
        }
        Ok(q)
    }

    pub fn single(field: FieldSpec, base: Base) -> Result<Self> {
        Period::new(field, vec![(base, 1)])
    }

    pub fn rational(prime: u64, value: BigRational) -> Result<Self> {
        Period::single(FieldSpec::qp(prime), Base::Rational(value))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn prime(&self) -> u64 {
        self.field.prime
    }

    pub fn factors(&self) -> &[(Base, i64)] {
        &self.factors
    }

    /// `Σ e_i ord(b_i)`.
    pub fn total_ord(&self) -> Result<i64> {
        let p = self.field.prime;
        self.factors.iter().try_fold(0i64, |acc, (b, e)| Ok(acc + e * b.ord(p)?))
    }

    /// `q^n` for `n != 0`.
    pub fn pow(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotAPeriod);
        }
        Period::new(self.field.clone(), self.factors.iter().map(|(b, e)| (b.clone(), e * n)).collect())
    }

    /// The product `self * other` (must live in the same field).
    pub fn mul(&self, other: &Period) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let mut f = self.factors.clone();
        f.extend(other.factors.iter().cloned());
        Period::new(self.field.clone(), f)
    }

    /// `λ(q) = Σ e_i λ(b_i)` in `F`.
    fn lambda(&self, branch: &Branch, field: &Arc<UnramifiedField>, precision: u32) -> Result<UnramifiedElement> {
        let p = self.field.prime;
        let log_of = |b: &Base| -> Result<UnramifiedElement> {
            let y = b.evaluate(field, precision)?;
            match branch {
                Branch::Iwasawa | Branch::Cyclotomic => y.log(),
                Branch::Element(x) => {
                    let ox = x.ord(p)?;
                    if ox == 0 {
                        return Err(Error::NotABranchDirection);
                    }
                    let xe = x.evaluate(field, precision)?;
                    let ratio = BigRational::new(b.ord(p)?.into(), ox.into());
                    Ok(&y.log()? - &scale_ext(&xe.log()?, &ratio))
                }
            }
        };
        let mut acc: Option<UnramifiedElement> = None;
        for (b, e) in &self.factors {
            let term = scale_ext(&log_of(b)?, &BigRational::from_integer((*e).into()));
            acc = Some(match acc {
                None => term,
                Some(a) => &a + &term,
            });
        }
        Ok(acc.expect("periods have at least one factor"))
    }

    /// L-invariant with values in `F`. For the cyclotomic branch the value
    /// lies in `Q_p ⊂ F`.
    pub fn li_in_field(&self, branch: &Branch, precision: u32) -> Result<UnramifiedElement> {
        if let Branch::Element(x) = branch {
            if x.ord(self.field.prime)? == 0 {
                return Err(Error::NotABranchDirection);
            }
        }
        let total = self.total_ord()?;
        let field = self.field.build(precision)?;
        match branch {
            Branch::Cyclotomic => {
                let lam = self.lambda(&Branch::Iwasawa, &field, precision)?;
                let (_, tr) = lam.norm_trace_to(1)?;
                Ok(scale_ext(&tr, &BigRational::new(BigInt::one(), total.into())))
            }
            _ => {
                let lam = self.lambda(branch, &field, precision)?;
                Ok(scale_ext(&lam, &BigRational::new(BigInt::one(), total.into())))
            }
        }
    }

    /// `Q_p`-valued L-invariant: any branch for `F = Q_p`, the cyclotomic
    /// branch otherwise.
    pub fn li(&self, branch: &Branch, precision: u32) -> Result<Padic> {
        if self.field.degree() > 1 && *branch != Branch::Cyclotomic {
            return Err(Error::FieldMismatch);
        }
        self.li_in_field(branch, precision)?.to_padic()
    }

    /// `LI_p(N_{F/K}(q))` for the unramified subfield `K` of degree
    /// `sub_degree`, as an element of `K ⊂ F`.
    ///
    /// Since `λ ∘ N = Tr ∘ λ` and `ord_K ∘ N = [F:K] ord_F` for unramified
    /// extensions this equals `Tr_{F/K}(LI_p(q)) / [F:K]`.
    pub fn norm_li(&self, sub_degree: usize, precision: u32) -> Result<UnramifiedElement> {
        let f = self.field.degree();
        if sub_degree == 0 || !f.is_multiple_of(sub_degree) {
            return Err(Error::Invalid(format!("{sub_degree} does not divide {f}")));
        }
        let field = self.field.build(precision)?;
        let mut acc: Option<UnramifiedElement> = None;
        let mut ord = 0i64;
        for (b, e) in &self.factors {
            let y = b.evaluate(&field, precision)?;
            let (n, _) = y.norm_trace_to(sub_degree)?;
            ord += e * n.ord()?;
            let term = scale_ext(&n.log()?, &BigRational::from_integer((*e).into()));
            acc = Some(match acc {
                None => term,
                Some(a) => &a + &term,
            });
        }
        if ord == 0 {
            return Err(Error::NotAPeriod);
        }
        Ok(scale_ext(&acc.unwrap(), &BigRational::new(BigInt::one(), ord.into())))
    }

    pub fn to_json(&self) -> PeriodJson {
        PeriodJson {
            p: self.field.prime,
            modulus: self.field.modulus.clone(),
            factors: self.factors.iter().map(|(b, e)| FactorJson { base: b.to_string(), exponent: *e }).collect(),
            total_ord: self.total_ord().unwrap_or(0),
            normal_form: self.to_string(),
        }
    }
}

fn normalize_base(b: Base) -> Base {
    match b {
        Base::Coords(c) if c.len() == 1 => Base::Rational(c[0].clone()),
        other => other,
    }
}

/// Multiplication of an extension element by an exact rational.
pub(crate) fn scale_ext(x: &UnramifiedElement, r: &BigRational) -> UnramifiedElement {
    let field = x.field();
    let p = field.prime();
    if r.is_zero() {
        return UnramifiedElement::zero(field, i64::MAX / 4);
    }
    let v = rational_valuation(r, p);
    if x.is_zero() {
        return UnramifiedElement::zero(field, x.abs_precision() + v);
    }
    let n = x.precision();
    let c = UnramifiedElement::from_padic(field, &Padic::from_rational(p, r, n));
    &c * x
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(b, e)| match b {
                Base::Rational(r) if r.is_negative() => format!("({b})^{e}"),
                _ => format!("{b}^{e}"),
            })
            .collect();
        f.write_str(&parts.join(" * "))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorJson {
    pub base: String,
    pub exponent: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodJson {
    pub p: u64,
    pub modulus: Vec<i64>,
    pub factors: Vec<FactorJson>,
    pub total_ord: i64,
    pub normal_form: String,
}

/// Parses the factor list of a period literal.
///
/// ```text
/// period   := factor ( '*' factor )*
/// factor   := base ( '^' integer )?
/// base     := rational | '(' rational ')'
/// rational := integer ( '/' integer )?
/// integer  := '-'? digit+
/// ```
///
/// Whitespace is ignored. A missing exponent means 1.
pub fn parse_factors(literal: &str) -> Result<Vec<(Base, i64)>> {
    let compact: String = literal.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty period literal".into()));
    }
    let mut out = Vec::new();
    for factor in split_top_level(&compact)? {
        let (base, exp) = match factor.rfind('^') {
            Some(i) if !factor[i..].contains(')') => (&factor[..i], &factor[i + 1..]),
            _ => (factor.as_str(), "1"),
        };
        let base = base.strip_prefix('(').and_then(|b| b.strip_suffix(')')).unwrap_or(base);
        let exp: i64 = exp.parse().map_err(|_| Error::Parse(format!("bad exponent {exp:?} in {factor:?}")))?;
        let value = parse_rational(base)?;
        if value.is_zero() {
            return Err(Error::Parse(format!("zero base in {factor:?}")));
        }
        out.push((Base::Rational(value), exp));
    }
    Ok(out)
}

fn split_top_level(s: &str) -> Result<Vec<String>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse("unbalanced parentheses".into()));
        }
        if ch == '*' && depth == 0 {
            if cur.is_empty() {
                return Err(Error::Parse("empty factor".into()));
            }
            parts.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    if depth != 0 || cur.is_empty() {
        return Err(Error::Parse("malformed period literal".into()));
    }
    parts.push(cur);
    Ok(parts)
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let valid_int = |t: &str| {
        let d = t.strip_prefix('-').unwrap_or(t);
        !d.is_empty() && d.chars().all(|c| c.is_ascii_digit())
    };
    match s.split_once('/') {
        None if valid_int(s) => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
        Some((n, d)) if valid_int(n) && valid_int(d) => {
            let d = BigInt::from_str(d).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(BigInt::from_str(n).map_err(|_| bad())?, d))
        }
        _ => Err(bad()),
    }
}

/// Result of comparing two L-invariants.
#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub equal: bool,
    /// Absolute precision to which the two values agree.
    pub agreement: i64,
    /// Absolute precision both values are provably known to.
    pub provable: i64,
}

/// "All provable digits agree, and at least `n - EQUALITY_SLACK` digits are
/// provable."
pub fn compare(a: &UnramifiedElement, b: &UnramifiedElement, precision: u32) -> Comparison {
    let d = a - b;
    let provable = a.abs_precision().min(b.abs_precision());
    Comparison {
        equal: d.is_zero() && provable >= precision as i64 - EQUALITY_SLACK,
        agreement: d.valuation().unwrap_or(d.abs_precision()),
        provable,
    }
}

fn guard_for(values: &[i64], p: u64) -> u32 {
    let vp = values.iter().filter(|&&v| v != 0).map(|&v| crate::arith::val_big(&BigInt::from(v), p)).sum::<u32>();
    GUARD_DIGITS + vp
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchChangeReport {
    /// `LI_y(q)`.
    pub lhs: String,
    /// `LI_x(q) - LI_x(y)`.
    pub rhs: String,
    #[serde(flatten)]
    pub comparison: Comparison,
}

/// Evaluates both sides of `LI_y(q) = LI_x(q) - LI_x(y)`.
pub fn branch_change_check(q: &Period, x: &Base, y: &Base, precision: u32) -> Result<BranchChangeReport> {
    let p = q.prime();
    let (ox, oy) = (x.ord(p)?, y.ord(p)?);
    if ox == 0 || oy == 0 {
        return Err(Error::NotABranchDirection);
    }
    let work = precision + guard_for(&[ox, oy, q.total_ord()?], p);
    let lhs = q.li_in_field(&Branch::Element(y.clone()), work)?;
    let y_period = Period::single(q.field().clone(), y.clone())?;
    let rhs = &q.li_in_field(&Branch::Element(x.clone()), work)?
        - &y_period.li_in_field(&Branch::Element(x.clone()), work)?;
    let lhs = lhs.truncate_abs(precision as i64);
    let rhs = rhs.truncate_abs(precision as i64);
    Ok(BranchChangeReport { comparison: compare(&lhs, &rhs, precision), lhs: lhs.to_string(), rhs: rhs.to_string() })
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    /// `(n, m) = (total_ord(q̃), total_ord(q))`, so that `q^n` and `q̃^m`
    /// have the same valuation.
    pub witness: (i64, i64),
    /// For rational bases: whether `q^n / q̃^m` is exactly a root of unity.
    pub witness_exact: Option<bool>,
    #[serde(flatten)]
    pub comparison: Comparison,
}

/// Tests whether `LI_x(q) = LI_x(q̃)`, which holds iff `q^n = q̃^m` (up to
/// torsion) for some nonzero `n`, `m`.
pub fn equivalence_check(q: &Period, q2: &Period, x: &Base, precision: u32) -> Result<EquivalenceReport> {
    if q.field() != q2.field() {
        return Err(Error::FieldMismatch);
    }
    let p = q.prime();
    let ox = x.ord(p)?;
    if ox == 0 {
        return Err(Error::NotABranchDirection);
    }
    let (n, m) = (q2.total_ord()?, q.total_ord()?);
    let work = precision + guard_for(&[ox, n, m], p);
    let branch = Branch::Element(x.clone());
    let a = q.li_in_field(&branch, work)?.truncate_abs(precision as i64);
    let b = q2.li_in_field(&branch, work)?.truncate_abs(precision as i64);
    let witness_exact = exact_ratio(q, n).zip(exact_ratio(q2, m)).map(|(u, w)| {
        let r = u / w;
        r.abs().is_one()
    });
    let comparison = compare(&a, &b, precision);
    Ok(EquivalenceReport { equivalent: comparison.equal, witness: (n, m), witness_exact, comparison })
}

fn exact_ratio(q: &Period, n: i64) -> Option<BigRational> {
    let mut acc = BigRational::one();
    for (b, e) in q.factors() {
        let Base::Rational(r) = b else { return None };
        let k = e * n;
        let pw = r.pow(k.unsigned_abs() as i32);
        acc = if k >= 0 { acc * pw } else { acc / pw };
    }
    Some(acc)
}

/// The monic quadratic `T^2 - c T`, `c = LI_p(N_{F/K}(q^B))`.
#[derive(Clone, Debug)]
pub struct UglyPolynomial {
    pub c: UnramifiedElement,
    pub sub_degree: usize,
}

impl UglyPolynomial {
    pub fn eval(&self, t: &UnramifiedElement) -> UnramifiedElement {
        &(t * t) - &(&self.c * t)
    }

    /// Coefficients `[constant, linear, quadratic]` of the polynomial.
    pub fn coefficients(&self) -> [String; 3] {
        let zero = "0".to_string();
        [zero, (-&self.c).to_string(), "1".to_string()]
    }
}

pub fn ugly_polynomial(q_b: &Period, sub_degree: usize, precision: u32) -> Result<UglyPolynomial> {
    Ok(UglyPolynomial { c: q_b.norm_li(sub_degree, precision)?, sub_degree })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn qp(lit: &str, p: u64) -> Period {
        Period::new(FieldSpec::qp(p), parse_factors(lit).unwrap()).unwrap()
    }

    #[test]
    fn li_examples() {
        let q = qp("5^1", 5);
        assert!(q.li(&Branch::Iwasawa, 10).unwrap().is_zero());
        let q = qp("30", 5);
        let l = q.li(&Branch::Cyclotomic, 3).unwrap();
        assert_eq!(l.residue().unwrap(), BigInt::from(55));
        let q2 = q.pow(2).unwrap();
        assert_eq!(q2.li(&Branch::Iwasawa, 10).unwrap(), q.li(&Branch::Iwasawa, 10).unwrap());
    }

    #[test]
    fn not_a_period() {
        assert_eq!(Period::new(FieldSpec::qp(5), parse_factors("6^1").unwrap()), Err(Error::NotAPeriod));
        assert_eq!(Period::new(FieldSpec::qp(5), parse_factors("5^2 * 25^-1").unwrap()), Err(Error::NotAPeriod));
    }

    #[test]
    fn normal_form_merges() {
        let q = qp("30^2 * 2 * 30^-1 * 7^0", 5);
        assert_eq!(q.factors().len(), 2);
        assert_eq!(q.to_string(), "30^1 * 2^1");
        let j = q.to_json();
        assert_eq!(j.total_ord, 1);
        let q = qp("(-3/5)^-2", 5);
        assert_eq!(q.to_string(), "(-3/5)^-2");
        assert_eq!(q.total_ord().unwrap(), 2);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_factors("").is_err());
        assert!(parse_factors("5^").is_err());
        assert!(parse_factors("5 ** 2").is_err());
        assert!(parse_factors("0^1").is_err());
        assert!(parse_factors("a/b").is_err());
        assert!(parse_factors("1/0").is_err());
        assert_eq!(parse_factors(" 5 ^ 3 * 2/3 ").unwrap().len(), 2);
    }

    #[test]
    fn branch_change_examples() {
        let q = qp("30^1 * 7^2", 5);
        let x = Base::int(30);
        let rep = branch_change_check(&q, &x, &x, 10).unwrap();
        assert!(rep.comparison.equal);
        let rep = branch_change_check(&q, &Base::int(5), &Base::int(25), 10).unwrap();
        assert!(rep.comparison.equal);
        let rep = branch_change_check(&q, &Base::int(30), &Base::int(50), 10).unwrap();
        assert!(rep.comparison.equal, "{rep:?}");
        assert!(branch_change_check(&q, &Base::int(3), &Base::int(50), 10).is_err());
    }

    #[test]
    fn equivalence_examples() {
        let q = qp("30^1 * 7^2", 5);
        let rep = equivalence_check(&q, &q.pow(3).unwrap(), &Base::int(30), 10).unwrap();
        assert!(rep.equivalent);
        assert_eq!(rep.witness_exact, Some(true));
        assert!(Period::rational(5, r(6)).is_err());
        let qu = q.mul(&Period::new(FieldSpec::qp(5), vec![(Base::int(6), 1)]).unwrap_or_else(|_| {
            // 6 alone is not a period; append it as a factor instead
            Period::new(FieldSpec::qp(5), vec![(Base::int(6), 1), (Base::int(5), 1)]).unwrap()
        }));
        let qu = qu.unwrap();
        let rep = equivalence_check(&q, &qu, &Base::int(30), 10).unwrap();
        assert!(!rep.equivalent);
        assert_eq!(rep.witness_exact, Some(false));
    }

    #[test]
    fn unit_times_period_changes_li() {
        let q = qp("30", 5);
        let qu = Period::new(FieldSpec::qp(5), vec![(Base::int(30), 1), (Base::int(6), 1)]).unwrap();
        let a = q.li(&Branch::Element(Base::int(5)), 8).unwrap();
        let b = qu.li(&Branch::Element(Base::int(5)), 8).unwrap();
        // LI differs by log(6)/ord(q) = log(6)
        let six = Padic::from_i64(5, 6, 8).log().unwrap();
        assert!((&b - &a).eq_to_precision(&six));
    }

    #[test]
    fn ugly_polynomial_examples() {
        let q = qp("5", 5);
        let f = ugly_polynomial(&q, 1, 8).unwrap();
        assert!(f.c.is_zero());
        // q = p^3 * 6 : c = log(6)/3
        let q = Period::new(FieldSpec::qp(5), vec![(Base::int(125 * 6), 1)]).unwrap();
        let f = ugly_polynomial(&q, 1, 8).unwrap();
        let expected = Padic::from_i64(5, 6, 8).log().unwrap().scale(&BigRational::new(1.into(), 3.into()));
        assert!(f.c.to_padic().unwrap().eq_to_precision(&expected));
    }

    #[test]
    fn cyclotomic_branch_on_extension() {
        let field = FieldSpec::unramified(5, 2);
        let b = Base::Coords(vec![r(2), r(5)]);
        let q = Period::new(field.clone(), vec![(b, 1), (Base::int(5), 1)]).unwrap();
        let li = q.li(&Branch::Cyclotomic, 10).unwrap();
        // N(2 + 5t) = 4 + 50 with t^2 = -2
        let expected = Padic::from_i64(5, 54, 10).log().unwrap();
        assert!(li.eq_to_precision(&expected), "{li} vs {expected}");
        assert_eq!(q.li(&Branch::Iwasawa, 10), Err(Error::FieldMismatch));
    }
}
