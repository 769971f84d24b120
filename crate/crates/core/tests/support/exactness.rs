//! Exact identities of Mazur-Tate measures at multiplicative primes,
//! checked against values read straight off the modular symbol.

#![allow(dead_code)]

use linv_core::curves::{bundled_table, ReductionKind};
use linv_core::linalg::Q;
use linv_core::measures::{build_measure, Cyclotomic, DirichletCharacter, PadicMeasure, Scalar, UnitRootData};
use linv_core::modsym::{eigen_symbol, EigenSymbol, Sign};
use linv_core::parallel::Exec;

pub struct Pair {
    pub label: String,
    pub p: u64,
    pub split: bool,
    pub alpha: i64,
    pub symbol: EigenSymbol,
    pub unit_root: UnitRootData,
}

/// Every multiplicative (curve, prime) pair in the bundled table.
pub fn multiplicative_pairs() -> Vec<Pair> {
    let table = bundled_table();
    let mut out = Vec::new();
    for entry in table.entries() {
        let mut symbol = None;
        for p in entry.curve.bad_primes() {
            let info = entry.curve.reduction_type(p).unwrap();
            if !info.kind.is_multiplicative() {
                continue;
            }
            let symbol =
                symbol.get_or_insert_with(|| eigen_symbol(&entry.curve, entry.conductor, Sign::Plus).unwrap()).clone();
            out.push(Pair {
                label: entry.label.clone(),
                p,
                split: info.kind == ReductionKind::SplitMultiplicative,
                alpha: info.ap,
                symbol,
                unit_root: UnitRootData::new(&entry.curve, p, 12).unwrap(),
            });
        }
    }
    out
}

/// `α^{-n} Σ_a χ(a) [a/p^n]` straight from the symbol.
fn symbol_twisted_sum(pair: &Pair, chi: &DirichletCharacter, n: u32) -> Cyclotomic {
    let pn = pair.p.pow(n);
    let residues: Vec<u64> = (1..pn).filter(|a| a % pair.p != 0).collect();
    let values: Vec<Q> = residues.iter().map(|&a| pair.symbol.evaluate(a as i64, pn as i64)).collect();
    let sign = if n % 2 == 1 { pair.alpha } else { 1 };
    chi.twisted_sum(&residues, &values).scale(&Q::from_integer(sign.into()))
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// Depths `1..=max_depth`: exactness, total mass `(1 - α)[0]`, the
/// augmentation criterion, distribution and pushforward compatibility, and
/// for odd `p` the character sums against primitive characters with their
/// vanishing fibre sums. Returns the number of identities checked.
pub fn check_pair(pair: &Pair, max_depth: u32, exec: Exec) -> Result<usize, String> {
    let measures: Vec<PadicMeasure> = (1..=max_depth)
        .map(|n| build_measure(&pair.symbol, &pair.unit_root, n, 12, exec).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let at_zero = pair.symbol.evaluate(0, 1);
    let mut checked = 0;
    for (i, m) in measures.iter().enumerate() {
        let n = i as u32 + 1;
        let ctx = || format!("{} @ {} depth {n}", pair.label, pair.p);
        ensure(m.is_exact(), || format!("{}: inexact values", ctx()))?;
        // total mass (1 - α^{-1})[0], zero exactly in the split case
        let mass = Q::from_integer((1 - pair.alpha).into()) * &at_zero;
        ensure(m.total_mass() == Scalar::Exact(mass), || format!("{}: total mass", ctx()))?;
        let theta = m.stickelberger();
        ensure(theta.augmentation().is_exact_zero() == pair.split, || format!("{}: augmentation", ctx()))?;
        checked += 3;
        if let Some(deeper) = measures.get(i + 1) {
            ensure(m.distribution_holds(deeper), || format!("{}: distribution", ctx()))?;
            ensure(deeper.stickelberger().pushforward() == theta, || format!("{}: projection", ctx()))?;
            checked += 2;
        }
        if pair.p == 2 {
            continue;
        }
        let group = pair.p.pow(n - 1) * (pair.p - 1);
        // the smallest-order primitive character and a faithful one when cheap
        let mut ks = vec![if n == 1 { 1 } else { pair.p - 1 }];
        if group <= 400 {
            ks.push(1);
        }
        for k in ks {
            let chi = DirichletCharacter::new(pair.p, n, k).map_err(|e| e.to_string())?;
            ensure(chi.is_primitive(), || format!("{}: k = {k} not primitive", ctx()))?;
            let lhs = theta.twisted_sum(&chi).map_err(|e| e.to_string())?;
            ensure(lhs == symbol_twisted_sum(pair, &chi, n), || format!("{}, k = {k}: character sum", ctx()))?;
            // inner sums over the fibres above p^{n-1} vanish
            let coarse: Vec<Q> =
                m.residues.iter().map(|&a| pair.symbol.evaluate(a as i64, pair.p.pow(n - 1) as i64)).collect();
            ensure(chi.twisted_sum(&m.residues, &coarse).is_zero(), || format!("{}, k = {k}: fibre sums", ctx()))?;
            checked += 2;
        }
    }
    Ok(checked)
}
