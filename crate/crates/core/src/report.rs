//! Machine-readable reports: input digests, parameters, and the result.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub name: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub inputs: Vec<InputDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub parameters: BTreeMap<String, String>,
    pub result: serde_json::Value,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            inputs: Vec::new(),
            seed: None,
            parameters: BTreeMap::new(),
            result: serde_json::Value::Null,
        }
    }

    /// Records an input by content; `name` is the file name without its
    /// directory so that reports do not depend on the working directory.
    pub fn input(&mut self, role: &str, path: &Path, bytes: &[u8]) {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        self.inputs.push(InputDigest {
            role: role.into(),
            name,
            sha256: sha256_hex(bytes),
        });
    }

    pub fn inline_input(&mut self, role: &str, name: &str, bytes: &[u8]) {
        self.inputs.push(InputDigest {
            role: role.into(),
            name: name.into(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.into(), value.to_string());
    }

    pub fn set_result<T: Serialize>(&mut self, value: &T) -> Result<()> {
        self.result = serde_json::to_value(value)?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn rendering_is_stable() {
        let mut r = Report::new("demo");
        r.param("b", 2);
        r.param("a", 1);
        r.set_result(&vec!["x"]).unwrap();
        let s = r.to_json();
        assert_eq!(s, r.clone().to_json());
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
    }
}
