//! Plaintext curve tables: one row per curve, tab or whitespace separated,
//! `label  [a1,a2,a3,a4,a6]  conductor`. The conductor column may be
//! omitted for imported rows; it is then recomputed.

use super::WeierstrassCurve;
use crate::error::{Error, Result};

const BUNDLED: &str = include_str!("../../data/curves.tsv");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveEntry {
    pub label: String,
    pub curve: WeierstrassCurve,
    pub conductor: u64,
}

#[derive(Clone, Debug, Default)]
pub struct CurveTable {
    entries: Vec<CurveEntry>,
}

impl CurveTable {
    pub fn entries(&self) -> &[CurveEntry] {
        &self.entries
    }

    pub fn get(&self, label: &str) -> Result<&CurveEntry> {
        self.entries.iter().find(|e| e.label == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Rows of `other` whose labels are new are appended.
    pub fn extend(&mut self, other: CurveTable) {
        for e in other.entries {
            if self.get(&e.label).is_err() {
                self.entries.push(e);
            }
        }
    }
}

/// Parse `a1,a2,a3,a4,a6`, with or without brackets and spaces.
pub fn parse_ainvs(s: &str) -> Result<[i64; 5]> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(Error::Parse(format!("expected five a-invariants, got {s:?}")));
    }
    let mut a = [0i64; 5];
    for (slot, part) in a.iter_mut().zip(&parts) {
        *slot = part.parse().map_err(|_| Error::Parse(format!("bad a-invariant {part:?}")))?;
    }
    Ok(a)
}

/// Parse a table. Every row is validated: the model must be nonsingular,
/// and a stated conductor must agree with the recomputed one whenever the
/// latter is available (it is not at additive primes 2 and 3).
pub fn parse_table(text: &str) -> Result<CurveTable> {
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() < 2 || cols.len() > 3 {
            return Err(Error::Parse(format!("line {}: expected 2 or 3 columns", lineno + 1)));
        }
        let curve = WeierstrassCurve::new(parse_ainvs(cols[1])?)?;
        let computed = curve.conductor();
        let conductor = match (cols.get(2), computed) {
            (Some(c), computed) => {
                let c: u64 = c.parse().map_err(|_| Error::Parse(format!("line {}: bad conductor", lineno + 1)))?;
                if let Ok(n) = computed {
                    if n != c {
                        return Err(Error::Parse(format!("line {}: stated conductor {c}, computed {n}", lineno + 1)));
                    }
                }
                c
            }
            (None, computed) => computed?,
        };
        entries.push(CurveEntry { label: cols[0].to_string(), curve, conductor });
    }
    Ok(CurveTable { entries })
}

pub fn bundled_table() -> CurveTable {
    parse_table(BUNDLED).expect("bundled curve table is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_rows() {
        let t = bundled_table();
        for label in ["11a1", "11a2", "11a3", "14a1", "15a1", "17a1", "21a1", "37b1"] {
            assert!(t.get(label).is_ok(), "{label}");
        }
        let e11 = &t.get("11a1").unwrap().curve;
        for d in [5i64, -7, -4] {
            let row = t.get(&format!("11a1-tw{d}")).unwrap();
            assert_eq!(row.curve, e11.quadratic_twist(d).unwrap());
        }
        assert_eq!(t.get("99z9"), Err(Error::UnknownLabel("99z9".into())));
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(parse_table("x [0,0,0,0,0] 1").is_err());
        assert!(parse_table("x [0,-1,1,-10,-20] 12").is_err());
        assert!(parse_table("x [0,-1,1,-10] 11").is_err());
        let t = parse_table("x 0,-1,1,-10,-20").unwrap();
        assert_eq!(t.get("x").unwrap().conductor, 11);
    }
}
