use std::fs;
use std::path::Path;

use linv_core::curves::{bundled_table, parse_ainvs, parse_table, CurveEntry, CurveTable, WeierstrassCurve};

use crate::error::CliError;

const USER_TABLE: &str = "curves.user.tsv";

/// The bundled table extended by previously imported rows.
pub fn load_table(cache_dir: &Path) -> Result<CurveTable, CliError> {
    let mut table = bundled_table();
    let path = cache_dir.join(USER_TABLE);
    if path.exists() {
        let text = fs::read_to_string(&path)?;
        let user = parse_table(&text).map_err(|e| CliError::CacheCorrupt(format!("{}: {e}", path.display())))?;
        table.extend(user);
    }
    Ok(table)
}

/// A curve chosen by label or by a-invariants.
pub struct Resolved {
    pub name: String,
    pub curve: WeierstrassCurve,
    pub conductor: u64,
}

pub fn resolve(
    table: &CurveTable,
    label: Option<&str>,
    ainvs: Option<&str>,
    conductor: Option<u64>,
) -> Result<Resolved, CliError> {
    match (label, ainvs) {
        (Some(l), None) => {
            let e = table.get(l)?;
            if let Some(n) = conductor {
                if n != e.conductor {
                    return Err(CliError::Config(format!("{l} has conductor {}, not {n}", e.conductor)));
                }
            }
            Ok(Resolved { name: e.label.clone(), curve: e.curve.clone(), conductor: e.conductor })
        }
        (None, Some(a)) => {
            let curve = WeierstrassCurve::new(parse_ainvs(a)?)?;
            let conductor = match (conductor, curve.conductor()) {
                (Some(n), Ok(m)) if n != m => {
                    return Err(CliError::Config(format!("stated conductor {n}, computed {m}")))
                }
                (Some(n), _) => n,
                (None, computed) => computed?,
            };
            Ok(Resolved { name: curve.to_string(), curve, conductor })
        }
        _ => Err(CliError::Parse("give exactly one of --label and --curve".into())),
    }
}

/// Rewrites one input row into `label<TAB>[a1,...]<TAB>conductor?`.
///
/// Accepted: the bundled layout (`label ainvs [conductor]`) and the
/// public `allcurves` layout (`N class number ainvs rank torsion`).
fn normalise_row(line: &str) -> Result<Option<String>, CliError> {
    let line = line.trim();
    if line.is_empty() || line.starts_with('#') {
        return Ok(None);
    }
    let cols: Vec<&str> = line.split_whitespace().collect();
    let numeric = |s: &str| !s.is_empty() && s.chars().all(|c| c.is_ascii_digit());
    if cols.len() >= 4 && numeric(cols[0]) && numeric(cols[2]) && cols[3].starts_with('[') {
        parse_ainvs(cols[3])?;
        return Ok(Some(format!("{}{}{}\t{}\t{}", cols[0], cols[1], cols[2], cols[3], cols[0])));
    }
    if (2..=3).contains(&cols.len()) && cols[1].starts_with('[') {
        parse_ainvs(cols[1])?;
        return Ok(Some(cols.join("\t")));
    }
    Err(CliError::Parse(format!("unrecognised curve row {line:?}")))
}

/// Validates `text` and appends its rows to the user table. Labels that
/// already exist must describe the same curve.
pub fn import(cache_dir: &Path, text: &str, dry_run: bool) -> Result<Vec<CurveEntry>, CliError> {
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(r) = normalise_row(line)? {
            rows.push(r);
        }
    }
    let fresh = parse_table(&rows.join("\n"))?;
    let existing = load_table(cache_dir)?;
    let mut added = Vec::new();
    for e in fresh.entries() {
        match existing.get(&e.label) {
            Ok(old) if old.curve == e.curve => {}
            Ok(_) => return Err(CliError::Config(format!("label {} already names another curve", e.label))),
            Err(_) => added.push(e.clone()),
        }
    }
    if !dry_run && !added.is_empty() {
        fs::create_dir_all(cache_dir)?;
        let path = cache_dir.join(USER_TABLE);
        let mut out = fs::read_to_string(&path).unwrap_or_else(|_| "# label\ta-invariants\tconductor\n".into());
        for e in &added {
            out.push_str(&format!("{}\t{}\t{}\n", e.label, e.curve, e.conductor));
        }
        let tmp = cache_dir.join(format!(".{USER_TABLE}.{}.tmp", std::process::id()));
        fs::write(&tmp, out)?;
        fs::rename(&tmp, &path)?;
    }
    Ok(added)
}
