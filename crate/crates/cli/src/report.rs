use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use linkhom::corpus;
use linkhom::diagram::LinkDiagram;
use serde::Serialize;
use sha2::{Digest, Sha256};
use walkdir::WalkDir;

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(name: impl Into<String>, bytes: &[u8]) -> Self {
        InputDigest { name: name.into(), sha256: hex::encode(Sha256::digest(bytes)) }
    }
}

/// Everything a run prints with `--json`. Only `timing_ms` depends on the
/// machine, and it is left out unless asked for.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub version: &'static str,
    pub inputs: Vec<InputDigest>,
    pub rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
    pub passed: bool,
    pub payload: serde_json::Value,
}

/// A diagram argument: a file, a diagram of the shipped corpus, or PD text.
pub fn read_diagram(arg: &str) -> Result<(LinkDiagram, InputDigest)> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        let pd: String = text.lines().map(|l| l.split('#').next().unwrap_or("")).collect::<Vec<_>>().join(" ");
        let d = LinkDiagram::parse(&pd).with_context(|| format!("parsing {arg}"))?;
        return Ok((d, InputDigest::of(arg, text.as_bytes())));
    }
    if let Some(d) = corpus::diagram(arg) {
        let digest = InputDigest::of(arg, d.to_pd_string().as_bytes());
        return Ok((d, digest));
    }
    let d = LinkDiagram::parse(arg).with_context(|| format!("'{arg}' is neither a file, a corpus diagram nor a PD code"))?;
    Ok((d, InputDigest::of("pd", arg.as_bytes())))
}

pub fn read_file(path: &Path) -> Result<(String, InputDigest)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let digest = InputDigest::of(path.display().to_string(), text.as_bytes());
    Ok((text, digest))
}

/// Digest over every file below `root`, in sorted path order.
pub fn digest_dir(root: &Path) -> Result<InputDigest> {
    let mut files = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.with_context(|| format!("reading {}", root.display()))?;
        if entry.file_type().is_file() {
            files.push(entry.into_path());
        }
    }
    let mut h = Sha256::new();
    for f in &files {
        h.update(f.strip_prefix(root).unwrap_or(f).to_string_lossy().as_bytes());
        h.update([0]);
        h.update(fs::read(f)?);
        h.update([0]);
    }
    Ok(InputDigest { name: root.display().to_string(), sha256: hex::encode(h.finalize()) })
}
