//! Mazur-Tate measures on `Z_p*` built from eigen-symbols, their
//! Stickelberger elements, and cyclotomic p-adic L-values.
//!
//! At a good ordinary prime the measure is
//! `μ(a + p^n) = α^{-n}[a/p^n] - α^{-n-1}[a/p^{n-1}]`; at a multiplicative
//! prime `U_p` acts on the symbol by `a_p = α`, so the one-term form
//! `μ(a + p^n) = α^{-n}[a/p^n]` is the one satisfying the distribution law.

mod checks;
mod cyclotomic;

pub use checks::{
    exceptional_zero_check, ezc_compare, find_admissible_discriminant, search_twist_check, twist_product_check,
    Conventions, EzcReport, TwistCase, TwistReport, REQUIRED_DIGITS,
};
pub use cyclotomic::{cyclotomic_polynomial, one_minus_zeta_product, primitive_root, Cyclotomic, DirichletCharacter};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::mod_inv;
use crate::curves::{ReductionKind, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::modsym::EigenSymbol;
use crate::padic::{rational_valuation, Padic, PadicJson};
use crate::parallel::Exec;

/// The unit root `α` of `x^2 - a_p x + p` (good ordinary), or `α = a_p`
/// (multiplicative).
#[derive(Clone, Debug, PartialEq)]
pub enum Alpha {
    Exact(i64),
    Padic(Padic),
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitRootData {
    pub p: u64,
    pub a_p: i64,
    pub alpha: Alpha,
    pub ordinary: bool,
    pub multiplicative: bool,
}

impl UnitRootData {
    pub fn new(curve: &WeierstrassCurve, p: u64, precision: u32) -> Result<Self> {
        let info = curve.reduction_type(p)?;
        match info.kind {
            ReductionKind::Additive => Err(Error::AdditiveNotSupported(p)),
            ReductionKind::SplitMultiplicative | ReductionKind::NonsplitMultiplicative => {
                UnitRootData::from_ap(p, info.ap, true, precision)
            }
            ReductionKind::Good => UnitRootData::from_ap(p, info.ap, false, precision),
        }
    }

    pub fn from_ap(p: u64, a_p: i64, multiplicative: bool, precision: u32) -> Result<Self> {
        if multiplicative {
            if a_p.abs() != 1 {
                return Err(Error::Invalid(format!("a_p = {a_p} at a multiplicative prime")));
            }
            return Ok(UnitRootData { p, a_p, alpha: Alpha::Exact(a_p), ordinary: true, multiplicative });
        }
        if a_p.rem_euclid(p as i64) == 0 {
            return Err(Error::Supersingular(p));
        }
        // α = a_p - p/α contracts by p on units
        let work = precision + 2;
        let ap = Padic::from_i64(p, a_p, work);
        let pp = Padic::from_i64(p, p as i64, work);
        let mut alpha = ap.clone();
        for _ in 0..=work {
            alpha = &ap - &pp.checked_div(&alpha)?;
        }
        Ok(UnitRootData { p, a_p, alpha: Alpha::Padic(alpha), ordinary: true, multiplicative })
    }

    pub fn alpha_padic(&self, precision: u32) -> Padic {
        match &self.alpha {
            Alpha::Exact(a) => Padic::from_i64(self.p, *a, precision),
            Alpha::Padic(a) => a.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.alpha, Alpha::Exact(_))
    }
}

/// Value of `χ` at `p` entering the Euler factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiAtP {
    Ramified,
    /// `χ(p)` for an unramified quadratic or trivial character.
    Unramified(i64),
}

/// Modified Euler factor: `1 - χ(p)α^{-1}` at a multiplicative prime,
/// `(1 - χ(p)α^{-1})^2` at a good ordinary prime for real `χ`, and `1` for
/// ramified `χ`.
pub fn euler_factor(unit_root: &UnitRootData, chi: ChiAtP, precision: u32) -> Scalar {
    let ChiAtP::Unramified(c) = chi else {
        return Scalar::Exact(Q::one());
    };
    match &unit_root.alpha {
        Alpha::Exact(a) => {
            let one_minus = Q::one() - Q::new(c.into(), (*a).into());
            if unit_root.multiplicative {
                Scalar::Exact(one_minus)
            } else {
                Scalar::Exact(&one_minus * &one_minus)
            }
        }
        Alpha::Padic(a) => {
            let p = unit_root.p;
            let one = Padic::from_i64(p, 1, precision);
            let t = &one - &Padic::from_i64(p, c, precision).checked_div(a).expect("unit root");
            Scalar::Padic(if unit_root.multiplicative { t } else { &t * &t })
        }
    }
}

/// An exact rational or a p-adic approximation.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Q),
    Padic(Padic),
}

impl Scalar {
    pub fn to_padic(&self, p: u64, precision: u32) -> Padic {
        match self {
            Scalar::Exact(q) if q.is_zero() => Padic::zero(p, precision as i64),
            Scalar::Exact(q) => Padic::from_rational(p, q, precision),
            Scalar::Padic(x) => x.clone(),
        }
    }

    pub fn exact(&self) -> Option<&Q> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Padic(_) => None,
        }
    }

    /// Exactly zero (only decidable for rationals).
    pub fn is_exact_zero(&self) -> bool {
        matches!(self, Scalar::Exact(q) if q.is_zero())
    }

    pub fn add(&self, other: &Scalar, p: u64, precision: u32) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => Scalar::Padic(&self.to_padic(p, precision) + &other.to_padic(p, precision)),
        }
    }

    pub fn to_json(&self) -> ScalarJson {
        match self {
            Scalar::Exact(q) => ScalarJson::Exact { exact: q.to_string() },
            Scalar::Padic(x) => ScalarJson::Padic { padic: x.to_json() },
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Padic(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum ScalarJson {
    Exact { exact: String },
    Padic { padic: PadicJson },
}

fn sum_scalars(values: &[Scalar], p: u64, precision: u32) -> Scalar {
    if values.iter().all(|v| v.exact().is_some()) {
        Scalar::Exact(values.iter().fold(Q::zero(), |acc, v| acc + v.exact().unwrap()))
    } else {
        let mut acc = Padic::zero(p, precision as i64 + 64);
        for v in values {
            acc = &acc + &v.to_padic(p, precision);
        }
        Scalar::Padic(acc)
    }
}

/// Residues `1 <= a < p^n` prime to `p`.
pub fn unit_residues(p: u64, n: u32) -> Vec<u64> {
    (1..p.pow(n)).filter(|a| a % p != 0).collect()
}

/// Table `a ↦ μ(a + p^n Z_p)` for `a` prime to `p`.
#[derive(Clone, Debug)]
pub struct PadicMeasure {
    pub p: u64,
    pub depth: u32,
    pub precision: u32,
    pub unit_root: UnitRootData,
    pub residues: Vec<u64>,
    pub values: Vec<Scalar>,
    /// `[0]`, the symbol's value on `{0 → ∞}`.
    pub value_at_zero: Q,
    /// Common denominator of the symbol's values.
    pub symbol_denominator: BigInt,
}

pub fn build_measure(
    symbol: &EigenSymbol,
    unit_root: &UnitRootData,
    depth: u32,
    precision: u32,
    exec: Exec,
) -> Result<PadicMeasure> {
    let p = unit_root.p;
    if depth == 0 {
        return Err(Error::Invalid("measure depth must be at least 1".into()));
    }
    if !unit_root.ordinary {
        return Err(Error::Supersingular(p));
    }
    if unit_root.multiplicative && !symbol.level().is_multiple_of(p) {
        return Err(Error::Invalid(format!("{p} does not divide the level")));
    }
    let pn = p.pow(depth) as i64;
    let pn1 = p.pow(depth - 1) as i64;
    let residues = unit_residues(p, depth);
    let values: Vec<Scalar> = match &unit_root.alpha {
        Alpha::Exact(alpha) if unit_root.multiplicative => {
            // α = ±1, so α^{-n} = α^n
            let sign = if depth % 2 == 1 { *alpha } else { 1 };
            let sign = Q::from_integer(sign.into());
            exec.map(residues.len(), |i| Scalar::Exact(symbol.evaluate(residues[i] as i64, pn) * &sign))
        }
        _ => {
            let alpha = unit_root.alpha_padic(precision);
            let inv_n = alpha.pow(-(depth as i64))?;
            let inv_n1 = alpha.pow(-(depth as i64) - 1)?;
            exec.map(residues.len(), |i| {
                let a = residues[i] as i64;
                let s_n = symbol.evaluate(a, pn);
                let s_n1 = symbol.evaluate(a, pn1);
                let t1 = scale_padic(&inv_n, &s_n, precision);
                let t2 = scale_padic(&inv_n1, &s_n1, precision);
                Scalar::Padic(&t1 - &t2)
            })
        }
    };
    Ok(PadicMeasure {
        p,
        depth,
        precision,
        unit_root: unit_root.clone(),
        residues,
        values,
        value_at_zero: symbol.evaluate(0, 1),
        symbol_denominator: symbol.denominator().clone(),
    })
}

fn scale_padic(x: &Padic, r: &Q, precision: u32) -> Padic {
    if r.is_zero() {
        Padic::zero(x.prime(), precision as i64)
    } else {
        x.scale(r)
    }
}

impl PadicMeasure {
    pub fn is_exact(&self) -> bool {
        self.values.iter().all(|v| v.exact().is_some())
    }

    /// `μ(Z_p*)`.
    pub fn total_mass(&self) -> Scalar {
        sum_scalars(&self.values, self.p, self.precision)
    }

    pub fn value(&self, a: u64) -> Option<&Scalar> {
        let pn = self.p.pow(self.depth);
        let a = a % pn;
        self.residues.binary_search(&a).ok().map(|i| &self.values[i])
    }

    pub fn stickelberger(&self) -> StickelbergerElement {
        StickelbergerElement {
            p: self.p,
            depth: self.depth,
            precision: self.precision,
            residues: self.residues.clone(),
            coeffs: self.values.clone(),
        }
    }

    /// Digits of `L_p'(0)` guaranteed by the Riemann sum: the integrand is
    /// constant modulo `p^n` on each ball and the measure is bounded by the
    /// symbol's denominator.
    pub fn provable_derivative_digits(&self) -> i64 {
        let dv = rational_valuation(&BigRational::from_integer(self.symbol_denominator.clone()), self.p);
        self.depth as i64 - dv
    }

    /// `(L_p(0), L_p'(0))`: the total mass and `Σ_a log_p⟨a⟩ μ(a + p^n)`.
    pub fn lp_value_and_derivative(&self, exec: Exec) -> Result<LpValues> {
        let logs = log_table(self.p, &self.residues, self.precision, exec)?;
        let theta = self.stickelberger();
        let derivative = theta.moment_with(&logs, 1)?;
        let provable = self.provable_derivative_digits().min(derivative.abs_precision());
        Ok(LpValues {
            value: self.total_mass(),
            derivative: derivative.truncate_abs(provable),
            provable_digits: provable,
        })
    }

    /// Exact distribution law against the measure one level deeper.
    pub fn distribution_holds(&self, deeper: &PadicMeasure) -> bool {
        deeper.depth == self.depth + 1 && deeper.stickelberger().pushforward().coeffs == self.values
    }

    pub fn to_json(&self, include_table: bool) -> MeasureJson {
        MeasureJson {
            p: self.p,
            depth: self.depth,
            alpha: match &self.unit_root.alpha {
                Alpha::Exact(a) => a.to_string(),
                Alpha::Padic(a) => a.digit_string(),
            },
            formula: if self.unit_root.multiplicative {
                "mu(a + p^n) = alpha^-n [a/p^n]".into()
            } else {
                "mu(a + p^n) = alpha^-n [a/p^n] - alpha^-(n+1) [a/p^(n-1)]".into()
            },
            total_mass: self.total_mass().to_json(),
            table: include_table
                .then(|| self.residues.iter().zip(&self.values).map(|(a, v)| (*a, v.to_string())).collect()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasureJson {
    pub p: u64,
    pub depth: u32,
    pub alpha: String,
    pub formula: String,
    pub total_mass: ScalarJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<(u64, String)>>,
}

#[derive(Clone, Debug)]
pub struct LpValues {
    pub value: Scalar,
    pub derivative: Padic,
    pub provable_digits: i64,
}

/// `log_p⟨a⟩` for each residue, `⟨a⟩ = a/ω(a)`.
pub fn log_table(p: u64, residues: &[u64], precision: u32, exec: Exec) -> Result<Vec<Padic>> {
    let out = exec.map(residues.len(), |i| {
        Padic::from_i64(p, residues[i] as i64, precision + 2).one_unit_part().and_then(|u| u.log())
    });
    out.into_iter().collect()
}

/// `Θ_n = Σ_a μ(a + p^n) σ_a` in the group algebra of `(Z/p^n)*`.
#[derive(Clone, Debug, PartialEq)]
pub struct StickelbergerElement {
    pub p: u64,
    pub depth: u32,
    pub precision: u32,
    pub residues: Vec<u64>,
    pub coeffs: Vec<Scalar>,
}

impl StickelbergerElement {
    /// Image in the group algebra of `(Z/p^{n-1})*`.
    pub fn pushforward(&self) -> StickelbergerElement {
        assert!(self.depth >= 2, "pushforward below depth 1");
        let m = self.p.pow(self.depth - 1);
        let residues = unit_residues(self.p, self.depth - 1);
        let mut coeffs: Vec<Option<Scalar>> = vec![None; residues.len()];
        for (a, c) in self.residues.iter().zip(&self.coeffs) {
            let k = residues.binary_search(&(a % m)).expect("unit residue");
            coeffs[k] = Some(match coeffs[k].take() {
                None => c.clone(),
                Some(acc) => acc.add(c, self.p, self.precision),
            });
        }
        StickelbergerElement {
            p: self.p,
            depth: self.depth - 1,
            precision: self.precision,
            residues,
            coeffs: coeffs.into_iter().map(|c| c.expect("non-empty fibre")).collect(),
        }
    }

    /// The augmentation `ε(Θ) = Σ_a μ(a)`.
    pub fn augmentation(&self) -> Scalar {
        sum_scalars(&self.coeffs, self.p, self.precision)
    }

    /// Apply the involution `σ_a ↦ σ_{a^{-1}}`.
    pub fn dual(&self) -> StickelbergerElement {
        let m = self.p.pow(self.depth) as i64;
        let mut coeffs = self.coeffs.clone();
        for (i, a) in self.residues.iter().enumerate() {
            let inv = mod_inv(*a as i64, m).expect("unit") as u64;
            let k = self.residues.binary_search(&inv).expect("unit residue");
            coeffs[k] = self.coeffs[i].clone();
        }
        StickelbergerElement { coeffs, ..self.clone() }
    }

    /// `Σ_a χ(a) μ(a)` in `Q(ζ_{ord χ})`; requires exact coefficients.
    pub fn twisted_sum(&self, chi: &DirichletCharacter) -> Result<Cyclotomic> {
        let exact: Option<Vec<Q>> = self.coeffs.iter().map(|c| c.exact().cloned()).collect();
        let exact = exact.ok_or_else(|| Error::Invalid("twisted sums need exact coefficients".into()))?;
        Ok(chi.twisted_sum(&self.residues, &exact))
    }

    /// `Σ_a μ(a) ℓ(a)^k` for a table of logarithms `ℓ`.
    pub(crate) fn moment_with(&self, logs: &[Padic], k: u32) -> Result<Padic> {
        let mut acc = Padic::zero(self.p, self.precision as i64 + 64);
        for (c, l) in self.coeffs.iter().zip(logs) {
            if c.is_exact_zero() {
                continue;
            }
            let term = match c {
                Scalar::Exact(q) => l.pow(k as i64)?.scale(q),
                Scalar::Padic(x) => &l.pow(k as i64)? * x,
            };
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Moments `m_0, ..., m_r` against powers of `log_p⟨a⟩`.
    pub fn moments(&self, r: u32, exec: Exec) -> Result<Vec<Padic>> {
        let logs = log_table(self.p, &self.residues, self.precision, exec)?;
        (0..=r).map(|k| self.moment_with(&logs, k)).collect()
    }

    /// Leading term in `I^r/I^{r+1}`, reported through `log_p⟨·⟩`:
    /// `m_r / r!`. Fails unless `m_0 = 0` exactly and `m_1..m_{r-1}` vanish
    /// to their precision.
    pub fn leading_term(&self, r: u32, exec: Exec) -> Result<LeadingTerm> {
        if r == 0 {
            return Err(Error::Invalid("leading term order must be positive".into()));
        }
        let aug = self.augmentation();
        let in_ideal = match &aug {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Padic(x) => x.is_zero(),
        };
        if !in_ideal {
            return Err(Error::OrderOfVanishing(r));
        }
        let moments = self.moments(r, exec)?;
        if moments[1..r as usize].iter().any(|m| !m.is_zero()) {
            return Err(Error::OrderOfVanishing(r));
        }
        let fact: u64 = (1..=r as u64).product();
        let value = moments[r as usize].scale(&Q::new(BigInt::one(), fact.into()));
        Ok(LeadingTerm { r, value, group_element: self.group_element() })
    }

    /// For exact coefficients with common denominator `δ`: the element
    /// `∏ a^{δ μ(a)}` of `(Z/p^n)*`, the image of `δ Θ` in `I/I^2 ≅ G_n`.
    pub fn group_element(&self) -> Option<(BigInt, u64)> {
        let exact: Option<Vec<&Q>> = self.coeffs.iter().map(Scalar::exact).collect();
        let exact = exact?;
        let delta = exact.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let m = self.p.pow(self.depth);
        let order = m / self.p * (self.p - 1);
        let mut acc = BigInt::one();
        let mm = BigInt::from(m);
        for (a, q) in self.residues.iter().zip(exact) {
            let e = (q.numer() * (&delta / q.denom())).mod_floor(&BigInt::from(order));
            acc = acc * BigInt::from(*a).modpow(&e, &mm) % &mm;
        }
        Some((delta, acc.to_u64().expect("residue")))
    }

    pub fn to_json(&self) -> StickelbergerJson {
        StickelbergerJson {
            p: self.p,
            depth: self.depth,
            augmentation: self.augmentation().to_json(),
            group_element: self.group_element().map(|(d, g)| (d.to_string(), g)),
            coefficients: self.residues.iter().zip(&self.coeffs).map(|(a, c)| (*a, c.to_string())).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LeadingTerm {
    pub r: u32,
    pub value: Padic,
    pub group_element: Option<(BigInt, u64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StickelbergerJson {
    pub p: u64,
    pub depth: u32,
    pub augmentation: ScalarJson,
    pub group_element: Option<(String, u64)>,
    pub coefficients: Vec<(u64, String)>,
}
