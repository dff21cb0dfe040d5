//! On-disk cache of measurements, one JSON file per (kind, field, cutoff),
//! each carrying a SHA-256 of its payload.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::report::Measurement;
use crate::spec::Kind;

#[derive(Serialize, Deserialize)]
struct Entry {
    checksum: String,
    measurement: Measurement,
}

pub struct Cache {
    dir: PathBuf,
}

fn checksum(m: &Measurement) -> Result<String, CliError> {
    let bytes = serde_json::to_vec(m).map_err(|e| CliError::Encode(e.to_string()))?;
    Ok(Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect())
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn path(&self, kind: Kind, disc: i64, b: f64, seed: Option<u64>) -> PathBuf {
        let seed = seed.map(|s| format!("-s{s}")).unwrap_or_default();
        let name = format!("v{}-{}-d{}-b{:016x}{}.json", env!("CARGO_PKG_VERSION"), kind.name(), disc, b.to_bits(), seed);
        self.dir.join(name)
    }

    /// None when absent; an error when present but unreadable or tampered with.
    pub fn load(&self, path: &Path) -> Result<Option<Measurement>, CliError> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let corrupt = |reason: String| CliError::CacheCorrupt { path: path.to_path_buf(), reason };
        let entry: Entry = serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
        if checksum(&entry.measurement)? != entry.checksum {
            return Err(corrupt("checksum mismatch".into()));
        }
        Ok(Some(entry.measurement))
    }

    pub fn store(&self, path: &Path, m: &Measurement) -> Result<(), CliError> {
        fs::create_dir_all(&self.dir)?;
        let entry = Entry { checksum: checksum(m)?, measurement: m.clone() };
        let text = serde_json::to_string(&entry).map_err(|e| CliError::Encode(e.to_string()))?;
        // write then rename, so a crash never leaves a half-written entry
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text)?;
        fs::rename(tmp, path)?;
        Ok(())
    }
}
