//! Content-addressed artifact cache.
//!
//! Entries live at `<dir>/<key>/<file>`. Every file is written to a
//! temporary file in the same directory and renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::CliError;

/// Environment variable overriding the default cache directory.
pub const CACHE_DIR_VAR: &str = "ARCMODEL_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".arcmodel-cache";

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn entry(&self, key: &str, file: &str) -> PathBuf {
        self.dir.join(key).join(file)
    }

    pub fn get(&self, key: &str, file: &str) -> Result<Option<String>, CliError> {
        let p = self.entry(key, file);
        match std::fs::read_to_string(&p) {
            Ok(s) => Ok(Some(s)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(CliError::io(&p, e)),
        }
    }

    pub fn put(&self, key: &str, file: &str, bytes: &str) -> Result<(), CliError> {
        write_atomic(&self.entry(key, file), bytes)
    }
}

pub fn write_atomic(path: &Path, bytes: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes.as_bytes()).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}
