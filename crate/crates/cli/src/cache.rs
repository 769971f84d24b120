//! Versioned on-disk caches for j-coefficients and symbol spaces.
//!
//! Each file is a JSON envelope `{format, kind, version, checksum, payload}`.
//! A different `version` is a miss (the file is rewritten); a bad checksum
//! or a payload that fails validation is corruption. Writes go through a
//! temporary file and a rename while holding an exclusive lock on
//! `<dir>/.lock`.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use linv_core::curves::{cached_j_coefficients, seed_j_coefficients};
use linv_core::modsym::{build_space, insert_space, ManinBasis, Sign, SpaceData};
use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

const FORMAT: &str = "linv-cache";
pub const J_VERSION: u32 = 1;
pub const SPACE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Envelope {
    format: String,
    kind: String,
    version: u32,
    checksum: String,
    payload: Value,
}

#[derive(Serialize, Deserialize)]
struct JPayload {
    coefficients: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: Vec<String>,
    pub misses: Vec<String>,
}

pub struct Cache {
    dir: PathBuf,
    pub stats: CacheStats,
    j_loaded: usize,
}

fn checksum(payload: &Value) -> String {
    let bytes = serde_json::to_vec(payload).expect("JSON values serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn sign_tag(sign: Sign) -> &'static str {
    match sign {
        Sign::Plus => "plus",
        Sign::Minus => "minus",
    }
}

impl Cache {
    pub fn new(dir: &Path) -> Self {
        Cache { dir: dir.to_path_buf(), stats: CacheStats::default(), j_loaded: 0 }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn j_path(&self) -> PathBuf {
        self.dir.join("j-coefficients.json")
    }

    fn space_path(&self, level: u64, sign: Sign) -> PathBuf {
        self.dir.join("spaces").join(format!("{level}-{}.json", sign_tag(sign)))
    }

    fn lock(&self, exclusive: bool) -> Result<Option<File>, CliError> {
        if !self.dir.exists() {
            if !exclusive {
                return Ok(None);
            }
            fs::create_dir_all(&self.dir)?;
        }
        let f = OpenOptions::new().create(true).truncate(false).write(true).open(self.dir.join(".lock"))?;
        if exclusive {
            f.lock()?;
        } else {
            f.lock_shared()?;
        }
        Ok(Some(f))
    }

    /// Reads an envelope of the given kind; `Ok(None)` on a miss or a stale
    /// version.
    fn read<T: DeserializeOwned>(&self, path: &Path, kind: &str, version: u32) -> Result<Option<T>, CliError> {
        let _guard = self.lock(false)?;
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let corrupt = |why: &str| CliError::CacheCorrupt(format!("{}: {why}", path.display()));
        let env: Envelope = serde_json::from_str(&text).map_err(|_| corrupt("not a cache envelope"))?;
        if env.format != FORMAT || env.kind != kind {
            return Err(corrupt("unexpected format or kind"));
        }
        if env.version != version {
            return Ok(None);
        }
        if checksum(&env.payload) != env.checksum {
            return Err(corrupt("checksum mismatch"));
        }
        serde_json::from_value(env.payload).map(Some).map_err(|_| corrupt("malformed payload"))
    }

    fn write<T: Serialize>(&self, path: &Path, kind: &str, version: u32, payload: &T) -> Result<(), CliError> {
        let _guard = self.lock(true)?;
        let payload = serde_json::to_value(payload).expect("payload serializes");
        let env = Envelope { format: FORMAT.into(), kind: kind.into(), version, checksum: checksum(&payload), payload };
        let parent = path.parent().expect("cache files live in a directory");
        fs::create_dir_all(parent)?;
        let tmp = parent.join(format!(".{}.{}.tmp", path.file_name().unwrap().to_string_lossy(), std::process::id()));
        {
            let mut f = File::create(&tmp)?;
            f.write_all(&serde_json::to_vec(&env).expect("envelope serializes"))?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Seeds the process-wide j-coefficient memo from disk.
    pub fn load_j(&mut self) -> Result<(), CliError> {
        let path = self.j_path();
        match self.read::<JPayload>(&path, "j-coefficients", J_VERSION)? {
            Some(p) => {
                let coeffs: Result<Vec<BigInt>, _> = p.coefficients.iter().map(|s| s.parse()).collect();
                let coeffs = coeffs.map_err(|_| CliError::CacheCorrupt("unparsable j-coefficient".into()))?;
                self.j_loaded = coeffs.len();
                if !coeffs.is_empty() {
                    seed_j_coefficients(coeffs)
                        .map_err(|e| CliError::CacheCorrupt(format!("{}: {e}", path.display())))?;
                }
                self.stats.hits.push("j-coefficients".into());
            }
            None => self.stats.misses.push("j-coefficients".into()),
        }
        Ok(())
    }

    /// Writes the memo back if this run extended it.
    pub fn store_j(&self) -> Result<(), CliError> {
        let coeffs = cached_j_coefficients();
        if coeffs.len() <= self.j_loaded {
            return Ok(());
        }
        let payload = JPayload { coefficients: coeffs.iter().map(|c| c.to_string()).collect() };
        self.write(&self.j_path(), "j-coefficients", J_VERSION, &payload)
    }

    /// Loads the space from disk, or builds and stores it.
    pub fn ensure_space(&mut self, level: u64, sign: Sign) -> Result<(), CliError> {
        let path = self.space_path(level, sign);
        let tag = format!("space {level}{}", sign_symbol(sign));
        match self.read::<SpaceData>(&path, "space", SPACE_VERSION)? {
            Some(data) => {
                if data.level != level || data.sign != sign {
                    return Err(CliError::CacheCorrupt(format!("{}: wrong key", path.display())));
                }
                let space = ManinBasis::from_data(&data)
                    .map_err(|e| CliError::CacheCorrupt(format!("{}: {e}", path.display())))?;
                insert_space(space);
                self.stats.hits.push(tag);
            }
            None => {
                let space = build_space(level, sign)?;
                self.write(&path, "space", SPACE_VERSION, &space.to_data())?;
                self.stats.misses.push(tag);
            }
        }
        Ok(())
    }
}

fn sign_symbol(sign: Sign) -> &'static str {
    match sign {
        Sign::Plus => "+",
        Sign::Minus => "-",
    }
}
