//! On-disk memo cache for Bernoulli numbers and Cohen's H-values.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{bernoulli_seed, bernoulli_snapshot, cohen_seed, cohen_snapshot, fmt_rat, parse_rat};
use crate::error::{Error, Result};

pub const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize, Default)]
struct CacheFile {
    version: u32,
    bernoulli: BTreeMap<String, String>,
    #[serde(rename = "cohenH")]
    cohen_h: BTreeMap<String, String>,
}

/// Seed the in-memory tables from `path`. A missing file is not an error;
/// a file with a different version is ignored. Returns the number of entries read.
pub fn load_cache(path: &Path) -> Result<usize> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
        Err(e) => return Err(e.into()),
    };
    let file: CacheFile = serde_json::from_str(&text)?;
    if file.version != CACHE_VERSION {
        return Ok(0);
    }
    let bad = |what: &str| Error::Format(format!("bad cache entry {what}"));
    let mut bern: Vec<(usize, _)> = Vec::new();
    for (k, v) in &file.bernoulli {
        let n: usize = k.parse().map_err(|_| bad(k))?;
        bern.push((n, parse_rat(v).ok_or_else(|| bad(v))?));
    }
    bern.sort_by_key(|(n, _)| *n);
    // only a gap-free prefix can seed the recurrence table
    let mut prefix = Vec::new();
    for (i, (n, v)) in bern.into_iter().enumerate() {
        if n != i {
            break;
        }
        prefix.push(v);
    }
    let nb = prefix.len();
    bernoulli_seed(prefix);
    let mut h = HashMap::new();
    for (k, v) in &file.cohen_h {
        let (r, n) = k.split_once(',').ok_or_else(|| bad(k))?;
        let r: u32 = r.parse().map_err(|_| bad(k))?;
        let n: u64 = n.parse().map_err(|_| bad(k))?;
        h.insert((r, n), parse_rat(v).ok_or_else(|| bad(v))?);
    }
    let nh = h.len();
    cohen_seed(h);
    Ok(nb + nh)
}

/// Write the current tables to `path` atomically (temp file + rename).
pub fn save_cache(path: &Path) -> Result<()> {
    let mut file = CacheFile { version: CACHE_VERSION, ..Default::default() };
    for (n, b) in bernoulli_snapshot().iter().enumerate() {
        file.bernoulli.insert(n.to_string(), fmt_rat(b));
    }
    for ((r, n), v) in cohen_snapshot() {
        file.cohen_h.insert(format!("{r},{n}"), fmt_rat(&v));
    }
    let text = serde_json::to_string(&file)?;
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}
