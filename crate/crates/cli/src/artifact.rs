//! Artifact files: a header line followed by one JSON record per line.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const TOOL: &str = "chitchat";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
const LOCK_NAME: &str = ".chitchat.lock";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
    pub params: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct HeaderLine {
    header: Header,
}

/// Input files read by a command, hashed as they are loaded.
#[derive(Debug, Default)]
pub struct Inputs {
    digests: Vec<InputDigest>,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        let raw = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        self.digests.push(InputDigest { name, sha256: hex::encode(Sha256::digest(&raw)) });
        Ok(raw)
    }

    pub fn read_records<T: DeserializeOwned>(&mut self, path: &Path) -> Result<Vec<T>> {
        let raw = self.read(path)?;
        parse_records(&raw).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn header(&self, command: &str, seed: u64, params: serde_json::Value) -> Header {
        Header {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            command: command.to_string(),
            seed,
            inputs: self.digests.clone(),
            params,
        }
    }
}

pub fn is_header(line: &[u8]) -> bool {
    line.starts_with(br#"{"header":"#)
}

/// Records of an artifact, skipping the header and blank lines.
pub fn parse_records<T: DeserializeOwned>(raw: &[u8]) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (i, line) in raw.split(|&b| b == b'\n').enumerate() {
        if line.iter().all(u8::is_ascii_whitespace) || is_header(line) {
            continue;
        }
        out.push(serde_json::from_slice(line).with_context(|| format!("line {}", i + 1))?);
    }
    Ok(out)
}

#[cfg(test)]
pub fn read_header(raw: &[u8]) -> Option<Header> {
    let first = raw.split(|&b| b == b'\n').next()?;
    serde_json::from_slice::<HeaderLine>(first).ok().map(|h| h.header)
}

/// Serialize header and records, then move the file into place.
pub fn write_artifact<T: Serialize>(path: &Path, header: &Header, records: &[T]) -> Result<()> {
    let mut body = serde_json::to_vec(&HeaderLine { header: header.clone() })?;
    body.push(b'\n');
    for r in records {
        serde_json::to_writer(&mut body, r)?;
        body.push(b'\n');
    }
    if let Some(dir) = parent_dir(path) {
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let tmp = path.with_extension("partial");
    fs::write(&tmp, &body).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("moving {} into place", path.display()))?;
    Ok(())
}

fn parent_dir(path: &Path) -> Option<PathBuf> {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => Some(p.to_path_buf()),
        _ => Some(PathBuf::from(".")),
    }
}

/// Exclusive hold on an artifact directory for the life of a command.
#[derive(Debug)]
pub struct DirLock {
    path: PathBuf,
    _file: File,
}

impl DirLock {
    pub fn acquire(artifact: &Path) -> Result<Self> {
        let dir = parent_dir(artifact).expect("parent dir");
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join(LOCK_NAME);
        let file = match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                let holder = fs::read_to_string(&path).unwrap_or_default();
                bail!(
                    "artifact directory {} is locked by another run ({}); remove {} if that run is gone",
                    dir.display(),
                    holder.trim(),
                    path.display()
                );
            }
            Err(e) => return Err(e).with_context(|| format!("creating {}", path.display())),
        };
        let mut file = file;
        writeln!(file, "pid {}", std::process::id())?;
        Ok(Self { path, _file: file })
    }
}

impl Drop for DirLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.jsonl");
        let mut inputs = Inputs::default();
        fs::write(dir.path().join("in.txt"), b"abc").unwrap();
        inputs.read(&dir.path().join("in.txt")).unwrap();
        let header = inputs.header("test", 7, serde_json::json!({"k": 1}));
        write_artifact(&path, &header, &[1, 2, 3]).unwrap();
        let raw = fs::read(&path).unwrap();
        assert_eq!(read_header(&raw).unwrap(), header);
        assert_eq!(parse_records::<i32>(&raw).unwrap(), vec![1, 2, 3]);
        assert_eq!(header.inputs[0].sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn second_lock_fails() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("x.jsonl");
        let lock = DirLock::acquire(&a).unwrap();
        assert!(DirLock::acquire(&a).is_err());
        drop(lock);
        DirLock::acquire(&a).unwrap();
    }
}
