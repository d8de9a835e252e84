//! Result cache: one JSON file per entry under the cache directory. The
//! key hashes the engine version, the command, normalized inputs, and
//! every flag that can change the printed bytes; a hit replays recorded
//! standard output and the recorded exit code verbatim.
//!
//! Scalar counting commands key on canonical certificates, so isomorphic
//! inputs share an entry. Commands whose output mentions vertex or copy
//! indices key on the exact normalized input encoding instead; sharing
//! across relabelings would replay answers about the wrong labeling.

use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::{CliError, Outcome};

const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn entry_key(material: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(ENGINE_VERSION.as_bytes());
    hasher.update([0]);
    hasher.update(material.as_bytes());
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Unreadable or stale entries are misses, never errors.
pub fn lookup(dir: &Path, key: &str) -> Option<Outcome> {
    let text = fs::read_to_string(dir.join(format!("{key}.json"))).ok()?;
    let entry: serde_json::Value = serde_json::from_str(&text).ok()?;
    if entry.get("engine_version")?.as_str()? != ENGINE_VERSION {
        return None;
    }
    Some(Outcome {
        stdout: entry.get("stdout")?.as_str()?.to_string(),
        exit: u8::try_from(entry.get("exit")?.as_u64()?).ok()?,
    })
}

pub fn store(dir: &Path, key: &str, material: &str, outcome: &Outcome) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::invalid(format!("creating cache directory: {e}")))?;
    let entry = serde_json::json!({
        "engine_version": ENGINE_VERSION,
        "key_material": material,
        "exit": outcome.exit,
        "stdout": outcome.stdout,
    });
    let path = dir.join(format!("{key}.json"));
    fs::write(&path, entry.to_string())
        .map_err(|e| CliError::invalid(format!("writing cache entry {}: {e}", path.display())))
}
