//! JSON documents, atomic output, fixtures and the command-line front end.
//!
//! Every file the tool writes is a [`Document`]: a schema tag, the tool
//! version, the seed (for randomized outputs), digests of the inputs, the
//! payload, and the reduction report when there is one. Big integers are
//! decimal strings throughout.

mod cli;
pub mod fixtures;

pub use cli::run;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reductions::ReductionReport;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document<T> {
    pub schema: String,
    pub tool_version: String,
    pub seed: Option<u64>,
    /// Input name to hex SHA-256 of its canonical JSON.
    pub inputs: BTreeMap<String, String>,
    pub body: T,
    pub report: Option<ReductionReport>,
}

impl<T: Serialize> Document<T> {
    pub fn new(schema: &str, seed: Option<u64>, body: T) -> Self {
        Document {
            schema: schema.into(),
            tool_version: crate::reductions::tool_version(),
            seed,
            inputs: BTreeMap::new(),
            body,
            report: None,
        }
    }

    pub fn with_input(mut self, name: &str, digest: String) -> Self {
        self.inputs.insert(name.into(), digest);
        self
    }

    pub fn with_report(mut self, report: ReductionReport) -> Self {
        self.report = Some(report);
        self
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut v = serde_json::to_vec_pretty(self).expect("serializable");
        v.push(b'\n');
        v
    }
}

impl Document<serde_json::Value> {
    /// Decodes the payload, checking the schema tag first.
    pub fn body_as<T: DeserializeOwned>(&self, schema: &str) -> Result<T> {
        if self.schema != schema {
            return Err(Error::Schema(format!("expected a {schema} document, got {}", self.schema)));
        }
        serde_json::from_value(self.body.clone()).map_err(|e| Error::Schema(format!("{schema} body: {e}")))
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory
/// and a rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn write_document<T: Serialize>(path: &Path, doc: &Document<T>) -> Result<()> {
    write_atomic(path, &doc.to_bytes())
}

pub fn read_document(path: &Path) -> Result<Document<serde_json::Value>> {
    let bytes = std::fs::read(path)?;
    Ok(serde_json::from_slice(&bytes)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_whole_files() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.json");
        write_document(&p, &Document::new("t", Some(3), vec![1, 2])).unwrap();
        write_document(&p, &Document::new("t", Some(4), vec![5])).unwrap();
        let d = read_document(&p).unwrap();
        assert_eq!(d.seed, Some(4));
        assert_eq!(d.body_as::<Vec<i32>>("t").unwrap(), vec![5]);
        assert!(d.body_as::<Vec<i32>>("u").is_err());
        // only the target file remains
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
