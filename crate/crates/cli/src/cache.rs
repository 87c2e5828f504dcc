//! On-disk cache of decompositions, one JSON file per `(space, seed)`.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use symtan::symspace::{schema, SpaceId, SymmetricSpace};

/// Environment variable overriding the default cache location.
pub const CACHE_ENV: &str = "SYMTAN_CACHE_DIR";

/// Flag, then config, then `SYMTAN_CACHE_DIR`, then the system temp dir.
pub fn resolve_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| std::env::temp_dir().join("symtan-cache"))
}

pub fn entry_path(dir: &Path, id: SpaceId, seed: u64) -> PathBuf {
    dir.join(format!("{id}-seed{seed}-v{}.json", schema::SCHEMA_VERSION))
}

/// Decomposition JSON and the space it encodes, built on a miss.
pub fn load_or_build(dir: &Path, id: SpaceId, seed: u64) -> Result<(String, SymmetricSpace)> {
    let path = entry_path(dir, id, seed);
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(space) = schema::from_json(&text) {
            return Ok((text, space));
        }
    }
    let space = SymmetricSpace::build(id, seed)?;
    let text = schema::to_json(&space)?;
    std::fs::create_dir_all(dir).with_context(|| format!("creating cache dir {}", dir.display()))?;
    // Write then rename so a concurrent reader never sees a partial file.
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, &text).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, &path).with_context(|| format!("writing {}", path.display()))?;
    Ok((text, space))
}
