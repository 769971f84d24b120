//! Verifiers comparing the automorphic side (`L_p'(0)/[0]`) with the
//! arithmetic side (L-invariants of Tate periods).

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::{build_measure, PadicMeasure, Scalar, ScalarJson, UnitRootData};
use crate::arith::{is_fundamental_discriminant, kronecker};
use crate::curves::{curve_l_invariant, ReductionKind, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::modsym::{eigen_symbol, Sign};
use crate::padic::{rational_valuation, Padic, PadicJson};
use crate::parallel::Exec;

/// p-adic digits of agreement demanded by the verifiers.
pub const REQUIRED_DIGITS: i64 = 2;

/// Normalisations in force, echoed in every report.
#[derive(Clone, Debug, Serialize)]
pub struct Conventions {
    pub symbol_normalization: String,
    pub sigma_convention: String,
    pub euler_factor: String,
    pub derivative_integrand: String,
}

impl Conventions {
    pub fn new(dual: bool) -> Self {
        Conventions {
            symbol_normalization: "plus symbol; closed integral paths map onto Z; [0] >= 0".into(),
            sigma_convention: if dual { "sigma_a <-> a^-1".into() } else { "sigma_a <-> a".into() },
            euler_factor: "1 - chi(p)/alpha (multiplicative); (1 - chi(p)/alpha)^2 (good ordinary)".into(),
            derivative_integrand: "log_p(a / omega(a))".into(),
        }
    }
}

/// `(sign, digits)`: the sign `s ∈ {+1, -1}` maximising the agreement of
/// `ratio` with `s·li`, and that agreement capped at `provable`.
pub fn ezc_compare(ratio: &Padic, li: &Padic, provable: i64) -> (i32, i64) {
    let plus = ratio.agreement(li).min(provable);
    let minus = ratio.agreement(&-li).min(provable);
    if plus >= minus {
        (1, plus)
    } else {
        (-1, minus)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EzcReport {
    pub curve: String,
    pub conductor: u64,
    pub p: u64,
    pub depth: u32,
    pub precision: u32,
    pub value_at_zero: String,
    pub lp_value: ScalarJson,
    pub lp_derivative: PadicJson,
    pub ratio: PadicJson,
    pub l_invariant: PadicJson,
    pub sign: i32,
    pub agreement: i64,
    pub provable_digits: i64,
    pub required_digits: i64,
    pub exceptional_zero_exact: bool,
    pub passed: bool,
    pub conventions: Conventions,
}

/// `L_p'(0) / [0]` with its provable absolute precision.
struct AutomorphicRatio {
    measure: PadicMeasure,
    derivative: Padic,
    ratio: Padic,
    provable: i64,
}

fn automorphic_ratio(
    curve: &WeierstrassCurve,
    conductor: u64,
    p: u64,
    depth: u32,
    precision: u32,
    dual: bool,
    exec: Exec,
) -> Result<AutomorphicRatio> {
    let symbol = eigen_symbol(curve, conductor, Sign::Plus)?;
    let unit_root = UnitRootData::new(curve, p, precision)?;
    let measure = build_measure(&symbol, &unit_root, depth, precision, exec)?;
    let mut theta = measure.stickelberger();
    if dual {
        theta = theta.dual();
    }
    let zero = measure.value_at_zero.clone();
    if zero.is_zero() {
        return Err(Error::CentralValueVanishes(conductor));
    }
    let logs = super::log_table(p, &theta.residues, precision, exec)?;
    let derivative = theta.moment_with(&logs, 1)?;
    let provable_der = measure.provable_derivative_digits().min(derivative.abs_precision());
    let derivative = derivative.truncate_abs(provable_der);
    let ratio = derivative.scale(&zero.recip());
    let provable = provable_der - rational_valuation(&zero, p);
    Ok(AutomorphicRatio { measure, derivative, ratio, provable })
}

/// Exceptional-zero check at a split multiplicative prime: compares
/// `L_p'(0)/[0]` with `±LI_p(q_E)`.
pub fn exceptional_zero_check(
    curve: &WeierstrassCurve,
    conductor: u64,
    p: u64,
    depth: u32,
    precision: u32,
    dual: bool,
    exec: Exec,
) -> Result<EzcReport> {
    let li = curve_l_invariant(curve, p, precision)?;
    let auto = automorphic_ratio(curve, conductor, p, depth, precision, dual, exec)?;
    let total = auto.measure.total_mass();
    let exceptional = total.is_exact_zero();
    let provable = auto.provable.min(li.abs_precision());
    let (sign, agreement) = ezc_compare(&auto.ratio, &li, provable);
    Ok(EzcReport {
        curve: curve.to_string(),
        conductor,
        p,
        depth,
        precision,
        value_at_zero: auto.measure.value_at_zero.to_string(),
        lp_value: total.to_json(),
        lp_derivative: auto.derivative.to_json(),
        ratio: auto.ratio.to_json(),
        l_invariant: li.to_json(),
        sign,
        agreement,
        provable_digits: provable,
        required_digits: REQUIRED_DIGITS,
        exceptional_zero_exact: exceptional,
        passed: exceptional && agreement >= REQUIRED_DIGITS,
        conventions: Conventions::new(dual),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TwistCase {
    Split,
    Inert,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistReport {
    pub curve: String,
    pub discriminant: i64,
    pub p: u64,
    pub chi_p: i32,
    pub case: TwistCase,
    pub twist_curve: String,
    pub twist_conductor: u64,
    pub depth: u32,
    pub precision: u32,
    pub curve_augmentation: String,
    pub twist_augmentation: String,
    /// Lower bound for the order of vanishing of `L_p(E) L_p(E^D)` at 0
    /// read off from exactly vanishing augmentations.
    pub product_vanishing_order: u32,
    pub twist_value_at_zero: String,
    /// Split case: automorphic ratios and Tate-period L-invariants.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve_ratio: Option<PadicJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twist_ratio: Option<PadicJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve_l_invariant: Option<PadicJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twist_l_invariant: Option<PadicJson>,
    /// Digits to which the two Tate-period L-invariants agree.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tate_agreement: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tate_full_precision: Option<bool>,
    /// Twist: automorphic ratio against its own Tate L-invariant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twist_agreement: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twist_sign: Option<i32>,
    /// Automorphic ratios of curve and twist against each other.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_agreement: Option<i64>,
    /// Inert case: `L_p(E^D, 0) / [0]_{E^D}`, expected to be exactly 2.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler_ratio: Option<String>,
    pub required_digits: i64,
    pub passed: bool,
    pub conventions: Conventions,
}

/// Fundamental discriminants `D ≠ 1` prime to `p N` with `χ_D(p) = ±1` as
/// requested, ordered by `|D|` (negative first).
pub fn find_admissible_discriminant(conductor: u64, p: u64, split: bool, skip: usize) -> Option<i64> {
    let want = if split { 1 } else { -1 };
    (3i64..10_000)
        .flat_map(|m| [-m, m])
        .filter(|&d| is_fundamental_discriminant(d))
        .filter(|&d| (d.unsigned_abs()).gcd(&(p * conductor)) == 1)
        .filter(|&d| kronecker(d, p) == want)
        .nth(skip)
}

/// Runs the twist check on the first admissible discriminants of the
/// requested kind, skipping twists whose symbol vanishes on `{0 -> oo}`
/// (odd functional equation).
pub fn search_twist_check(
    curve: &WeierstrassCurve,
    conductor: u64,
    p: u64,
    split: bool,
    depth: u32,
    precision: u32,
    exec: Exec,
) -> Result<TwistReport> {
    const ATTEMPTS: usize = 12;
    for skip in 0..ATTEMPTS {
        let d = find_admissible_discriminant(conductor, p, split, skip)
            .ok_or_else(|| Error::Invalid("no admissible discriminant".into()))?;
        match twist_product_check(curve, conductor, d, p, depth, precision, exec) {
            Err(Error::CentralValueVanishes(_)) => continue,
            other => return other,
        }
    }
    Err(Error::Invalid(format!("no usable discriminant among the first {ATTEMPTS}")))
}

pub fn twist_product_check(
    curve: &WeierstrassCurve,
    conductor: u64,
    d: i64,
    p: u64,
    depth: u32,
    precision: u32,
    exec: Exec,
) -> Result<TwistReport> {
    if d == 1 {
        return Err(Error::Invalid("D = 1 gives the trivial character".into()));
    }
    if !is_fundamental_discriminant(d) {
        return Err(Error::Invalid(format!("{d} is not a fundamental discriminant")));
    }
    if d.unsigned_abs().gcd(&(p * conductor)) != 1 {
        return Err(Error::Invalid(format!("D = {d} is not prime to p N = {}", p * conductor)));
    }
    let info = curve.reduction_type(p)?;
    if info.kind != ReductionKind::SplitMultiplicative {
        return Err(Error::NotSplit(p));
    }
    let chi_p = kronecker(d, p);
    let case = if chi_p == 1 { TwistCase::Split } else { TwistCase::Inert };
    let twist = curve.quadratic_twist(d)?;
    let twist_conductor = conductor * d.unsigned_abs().pow(2);
    let exact_str = |s: &Scalar| s.to_string();

    let base = automorphic_ratio(curve, conductor, p, depth, precision, false, exec)?;
    let curve_aug = base.measure.total_mass();
    let mut report = TwistReport {
        curve: curve.to_string(),
        discriminant: d,
        p,
        chi_p,
        case,
        twist_curve: twist.to_string(),
        twist_conductor,
        depth,
        precision,
        curve_augmentation: exact_str(&curve_aug),
        twist_augmentation: String::new(),
        product_vanishing_order: 0,
        twist_value_at_zero: String::new(),
        curve_ratio: None,
        twist_ratio: None,
        curve_l_invariant: None,
        twist_l_invariant: None,
        tate_agreement: None,
        tate_full_precision: None,
        twist_agreement: None,
        twist_sign: None,
        ratio_agreement: None,
        euler_ratio: None,
        required_digits: REQUIRED_DIGITS,
        passed: false,
        conventions: Conventions::new(false),
    };
    match case {
        TwistCase::Split => {
            let tw = automorphic_ratio(&twist, twist_conductor, p, depth, precision, false, exec)?;
            let twist_aug = tw.measure.total_mass();
            report.twist_augmentation = exact_str(&twist_aug);
            report.twist_value_at_zero = tw.measure.value_at_zero.to_string();
            report.product_vanishing_order =
                u32::from(curve_aug.is_exact_zero()) + u32::from(twist_aug.is_exact_zero());
            let li_e = curve_l_invariant(curve, p, precision)?;
            let li_d = curve_l_invariant(&twist, p, precision)?;
            let full = li_e.abs_precision().min(li_d.abs_precision());
            let tate = li_e.agreement(&li_d).min(full);
            let (sign, twist_digits) = ezc_compare(&tw.ratio, &li_d, tw.provable.min(full));
            let (_, ratio_digits) = ezc_compare(&base.ratio, &tw.ratio, base.provable.min(tw.provable));
            report.curve_ratio = Some(base.ratio.to_json());
            report.twist_ratio = Some(tw.ratio.to_json());
            report.curve_l_invariant = Some(li_e.to_json());
            report.twist_l_invariant = Some(li_d.to_json());
            report.tate_agreement = Some(tate);
            report.tate_full_precision = Some(tate >= full);
            report.twist_agreement = Some(twist_digits);
            report.twist_sign = Some(sign);
            report.ratio_agreement = Some(ratio_digits);
            report.passed = report.product_vanishing_order == 2
                && tate >= full
                && twist_digits >= REQUIRED_DIGITS
                && ratio_digits >= REQUIRED_DIGITS;
        }
        TwistCase::Inert => {
            let symbol = eigen_symbol(&twist, twist_conductor, Sign::Plus)?;
            let unit_root = UnitRootData::new(&twist, p, precision)?;
            let m = build_measure(&symbol, &unit_root, depth, precision, exec)?;
            if m.value_at_zero.is_zero() {
                return Err(Error::CentralValueVanishes(twist_conductor));
            }
            let twist_aug = m.total_mass();
            report.twist_augmentation = exact_str(&twist_aug);
            report.twist_value_at_zero = m.value_at_zero.to_string();
            report.product_vanishing_order =
                u32::from(curve_aug.is_exact_zero()) + u32::from(twist_aug.is_exact_zero());
            let ratio = twist_aug.exact().map(|t| t / &m.value_at_zero);
            let two = Q::from_integer(2.into());
            report.passed = curve_aug.is_exact_zero() && ratio.as_ref() == Some(&two);
            report.euler_ratio = ratio.map(|r| r.to_string());
        }
    }
    Ok(report)
}
