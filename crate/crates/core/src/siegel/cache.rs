//! On-disk JSON cache of Fourier expansions.
//!
//! One file per `(kind, weight, bound)` holding
//! `{"kind", "weight", "bound", "schema", "coeffs": [[b, a, c, "num/den"], ...]}`.
//! Files with a different schema version, or that fail to parse, are rebuilt.
//! Writes go through a temporary file and an atomic rename, so concurrent
//! readers never observe a partial file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::expansion::FourierExpansion;
use super::halfint::{HalfIntMatrix, KeySet};
use crate::arith::{fmt_q, parse_q, Q};
use crate::error::{Error, Result};

/// Current cache schema version.
pub const SCHEMA: u32 = 1;

/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "EQUIDIST_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    kind: String,
    weight: i64,
    bound: i64,
    #[serde(default)]
    schema: u32,
    coeffs: Vec<(i64, i64, i64, String)>,
}

/// Serialises an expansion.
pub fn to_json(kind: &str, f: &FourierExpansion) -> Result<String> {
    let coeffs = f
        .keys()
        .iter()
        .zip(f.coeffs())
        .map(|(t, v)| (t.b, t.a, t.c, fmt_q(&v)))
        .collect();
    let file = CacheFile { kind: kind.to_string(), weight: f.weight, bound: f.bound(), schema: SCHEMA, coeffs };
    Ok(serde_json::to_string(&file)?)
}

/// Parses an expansion, returning its kind.
pub fn from_json(s: &str) -> Result<(String, FourierExpansion)> {
    let file: CacheFile = serde_json::from_str(s)?;
    if file.schema != SCHEMA {
        return Err(Error::Cache(format!("schema {} (expected {SCHEMA})", file.schema)));
    }
    let keys = KeySet::get(file.bound);
    if file.coeffs.len() != keys.len() {
        return Err(Error::Cache(format!("{} coefficients for {} keys", file.coeffs.len(), keys.len())));
    }
    let mut values: Vec<Option<Q>> = vec![None; keys.len()];
    for (b, a, c, v) in &file.coeffs {
        let t = HalfIntMatrix::new(*b, *a, *c);
        let i = keys.position(&t).ok_or_else(|| Error::Cache(format!("key {t} outside the bound")))?;
        let x = parse_q(v).ok_or_else(|| Error::Cache(format!("bad rational {v:?}")))?;
        values[i] = Some(x);
    }
    let values = values
        .into_iter()
        .collect::<Option<Vec<Q>>>()
        .ok_or_else(|| Error::Cache("duplicate key".into()))?;
    Ok((file.kind, FourierExpansion::from_rationals(file.weight, file.bound, values)))
}

/// How a cached expansion was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Built,
    /// The file existed but was stale or corrupt; the reason is attached.
    Rebuilt(String),
}

/// A directory of cached expansions.
#[derive(Clone, Debug)]
pub struct ExpansionCache {
    dir: PathBuf,
}

impl ExpansionCache {
    pub fn new(dir: impl AsRef<Path>) -> Self {
        ExpansionCache { dir: dir.as_ref().to_path_buf() }
    }

    /// Cache in `$EQUIDIST_CACHE_DIR`, or `.equidist-cache` in the working directory.
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".equidist-cache"));
        Self::new(dir)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, kind: &str, weight: i64, bound: i64) -> PathBuf {
        self.dir.join(format!("{kind}-w{weight}-n{bound}.json"))
    }

    /// Loads a cached expansion, or builds and stores it.
    pub fn load_or_build<F>(&self, kind: &str, weight: i64, bound: i64, build: F) -> Result<(FourierExpansion, CacheStatus)>
    where
        F: FnOnce() -> Result<FourierExpansion>,
    {
        let path = self.path(kind, weight, bound);
        let mut status = CacheStatus::Built;
        if path.exists() {
            match fs::read_to_string(&path).map_err(Error::from).and_then(|s| from_json(&s)) {
                Ok((k, f)) if k == kind && f.weight == weight && f.bound() == bound => return Ok((f, CacheStatus::Hit)),
                Ok(_) => status = CacheStatus::Rebuilt("header does not match the file name".into()),
                Err(e) => status = CacheStatus::Rebuilt(e.to_string()),
            }
        }
        let f = build()?;
        self.store(kind, &f)?;
        Ok((f, status))
    }

    /// Writes an expansion atomically.
    pub fn store(&self, kind: &str, f: &FourierExpansion) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(kind, f.weight, f.bound());
        let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
        fs::write(&tmp, to_json(kind, f)?)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}
