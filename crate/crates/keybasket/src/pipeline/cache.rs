//! Content-addressed caching of pipeline intermediates. Each artifact file
//! carries a `<name>.fp` sidecar holding a hex SHA-256 fingerprint of
//! everything that went into it (input file hashes plus the config
//! subsections affecting the stage); any mismatch forces a rebuild and is
//! recorded as an event.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Hex SHA-256 of a file's contents, streamed.
pub fn file_fingerprint(path: &Path) -> Result<String> {
    let mut file = fs::File::open(path).map_err(|e| Error::file(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = file.read(&mut buf).map_err(|e| Error::file(path, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

/// Hex SHA-256 of a config subsection's JSON serialization.
pub fn config_fingerprint<T: Serialize>(cfg: &T) -> Result<String> {
    let json = serde_json::to_string(cfg)?;
    Ok(hex::encode(Sha256::digest(json.as_bytes())))
}

/// Fold labeled fingerprint parts into one fingerprint. Labels keep
/// accidental collisions between differently-shaped inputs impossible.
pub fn combine_fingerprints(parts: &[(&str, &str)]) -> String {
    let mut hasher = Sha256::new();
    for (label, value) in parts {
        hasher.update(label.as_bytes());
        hasher.update([0u8]);
        hasher.update(value.as_bytes());
        hasher.update([0u8]);
    }
    hex::encode(hasher.finalize())
}

/// A directory of fingerprinted artifacts.
#[derive(Debug)]
pub struct Cache {
    dir: PathBuf,
    events: Vec<String>,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::file(&dir, e))?;
        Ok(Cache { dir, events: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Why artifacts were (re)built this run, in order. Reuse is silent.
    pub fn events(&self) -> &[String] {
        &self.events
    }

    /// Return the artifact `name` from cache when its sidecar matches
    /// `fingerprint`; otherwise build, persist, and record why.
    pub fn load_or_build<T>(
        &mut self,
        name: &str,
        fingerprint: &str,
        load: impl FnOnce(&Path) -> Result<T>,
        build: impl FnOnce() -> Result<T>,
        store: impl FnOnce(&T, &Path) -> Result<()>,
    ) -> Result<T> {
        let artifact = self.dir.join(name);
        let sidecar = self.dir.join(format!("{name}.fp"));
        if artifact.is_file() {
            match fs::read_to_string(&sidecar) {
                Ok(stored) if stored.trim() == fingerprint => match load(&artifact) {
                    Ok(value) => return Ok(value),
                    Err(err) => self
                        .events
                        .push(format!("cache: {name} failed to load ({err}); rebuilding")),
                },
                Ok(_) => self
                    .events
                    .push(format!("cache: {name} fingerprint mismatch; rebuilding")),
                Err(_) => self
                    .events
                    .push(format!("cache: {name} has no fingerprint sidecar; rebuilding")),
            }
        } else {
            self.events.push(format!("cache: building {name}"));
        }
        let value = build()?;
        store(&value, &artifact)?;
        fs::write(&sidecar, format!("{fingerprint}\n")).map_err(|e| Error::file(&sidecar, e))?;
        Ok(value)
    }
}
