//! Writes run outputs and the JSON provenance sidecar.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::descriptor::ExperimentDescriptor;
use crate::run::OutputFile;

/// Provenance record written next to the outputs as `<id>.json`.
#[derive(Debug, Clone, Serialize)]
pub struct Sidecar<'a> {
    pub descriptor: &'a ExperimentDescriptor,
    pub descriptor_sha256: String,
    pub toolkit_version: &'static str,
    pub seed: Option<u64>,
    /// file name -> sha256 of its contents
    pub files: BTreeMap<String, String>,
    pub wall_clock_seconds: f64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash of the descriptor's canonical JSON form, so formatting and key
/// order in the TOML source do not matter.
pub fn descriptor_hash(desc: &ExperimentDescriptor) -> String {
    let canonical = serde_json::to_string(desc).expect("descriptor serialises");
    sha256_hex(canonical.as_bytes())
}

/// Writes `files` under `dir` plus the sidecar; returns the sidecar path.
pub fn write_outputs(
    dir: &Path,
    desc: &ExperimentDescriptor,
    seed: Option<u64>,
    files: &[OutputFile],
    wall_clock_seconds: f64,
) -> anyhow::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let mut hashes = BTreeMap::new();
    for f in files {
        std::fs::write(dir.join(&f.name), &f.contents)?;
        hashes.insert(f.name.clone(), sha256_hex(f.contents.as_bytes()));
    }
    let sidecar = Sidecar {
        descriptor: desc,
        descriptor_sha256: descriptor_hash(desc),
        toolkit_version: env!("CARGO_PKG_VERSION"),
        seed,
        files: hashes,
        wall_clock_seconds,
    };
    let path = dir.join(format!("{}.json", desc.id));
    std::fs::write(&path, serde_json::to_string_pretty(&sidecar)? + "\n")?;
    Ok(path)
}
