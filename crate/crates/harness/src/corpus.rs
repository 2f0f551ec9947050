//! Test corpus: `.mk` sources with expected-answer sidecars named
//! `<stem>.<semantics>.json`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidecar {
    pub semantics: String,
    /// Reified answers in data notation, in production order.
    pub answers: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule_trace: Option<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub path: PathBuf,
    pub source: String,
    pub expectations: Vec<Sidecar>,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}

pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_owned(),
        source,
    })
}

/// All entries in `dir`, sorted by name.
pub fn load(dir: &Path) -> Result<Vec<Entry>, CorpusError> {
    let listing = fs::read_dir(dir).map_err(|source| CorpusError::Io {
        path: dir.to_owned(),
        source,
    })?;
    let mut files: Vec<PathBuf> = listing
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    files.sort();

    let mut out = Vec::new();
    for path in files.iter().filter(|p| p.extension().is_some_and(|e| e == "mk")) {
        let name = path.file_stem().unwrap().to_string_lossy().into_owned();
        let prefix = format!("{name}.");
        let mut expectations = Vec::new();
        for side in &files {
            let fname = side.file_name().unwrap().to_string_lossy();
            if fname.starts_with(&prefix) && fname.ends_with(".json") {
                let text = read(side)?;
                let sc: Sidecar =
                    serde_json::from_str(&text).map_err(|source| CorpusError::Json {
                        path: side.clone(),
                        source,
                    })?;
                expectations.push(sc);
            }
        }
        out.push(Entry {
            name,
            source: read(path)?,
            path: path.clone(),
            expectations,
        });
    }
    Ok(out)
}
