//! JSON file cache for solved factorizations and character tables.
//!
//! The cache is purely an optimization and never authoritative: files that
//! fail to open, parse, or validate are ignored and recomputed. Writes are
//! atomic (write to a temp file in the same directory, then rename).

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

pub const CACHE_ENV_VAR: &str = "NILRAT_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".nilrat-cache";

/// Schema tag embedded in file names; bump when serialized layouts change.
const SCHEMA: &str = "v1";

#[derive(Debug, Clone, Default)]
pub enum CacheChoice {
    /// NILRAT_CACHE if set, else ./.nilrat-cache.
    #[default]
    EnvOrDefault,
    Disabled,
    Dir(PathBuf),
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(choice: CacheChoice) -> Cache {
        let dir = match choice {
            CacheChoice::Disabled => None,
            CacheChoice::Dir(d) => Some(d),
            CacheChoice::EnvOrDefault => Some(
                std::env::var_os(CACHE_ENV_VAR)
                    .map(PathBuf::from)
                    .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR)),
            ),
        };
        Cache { dir }
    }

    pub fn disabled() -> Cache {
        Cache { dir: None }
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path(&self, stem: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| {
            d.join(format!(
                "{stem}-{SCHEMA}-{}.json",
                env!("CARGO_PKG_VERSION")
            ))
        })
    }

    /// Best-effort load; any failure is a cache miss.
    pub fn load<T: DeserializeOwned>(&self, stem: &str) -> Option<T> {
        let path = self.path(stem)?;
        let bytes = fs::read(&path).ok()?;
        serde_json::from_slice(&bytes).ok()
    }

    /// Best-effort atomic store; failures are silently ignored.
    pub fn store<T: Serialize>(&self, stem: &str, value: &T) {
        let Some(path) = self.path(stem) else {
            return;
        };
        let Some(parent) = path.parent() else {
            return;
        };
        if fs::create_dir_all(parent).is_err() {
            return;
        }
        let Ok(json) = serde_json::to_vec(value) else {
            return;
        };
        let tmp = path.with_extension("json.tmp");
        if fs::write(&tmp, &json).is_ok() {
            let _ = fs::rename(&tmp, &path);
        }
    }

    /// Removes every cache file in the directory. Returns the number removed.
    pub fn clear(&self) -> std::io::Result<usize> {
        let Some(dir) = &self.dir else {
            return Ok(0);
        };
        let mut removed = 0;
        if !dir.exists() {
            return Ok(0);
        }
        for entry in fs::read_dir(dir)? {
            let entry = entry?;
            let name = entry.file_name();
            let name = name.to_string_lossy();
            if name.ends_with(".json") || name.ends_with(".json.tmp") {
                fs::remove_file(entry.path())?;
                removed += 1;
            }
        }
        Ok(removed)
    }
}
