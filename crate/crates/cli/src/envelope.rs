use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Machine-readable result of one command.
///
/// Timings are only filled in with `--timings`, so that output is byte-stable
/// by default.
#[derive(Debug, Serialize)]
pub struct ResultEnvelope {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub verdicts: BTreeMap<String, String>,
    pub timings_ms: BTreeMap<String, u128>,
    pub certificates: Vec<String>,
    pub version: String,
    pub seed: u64,
}

impl ResultEnvelope {
    pub fn new(command: &str, seed: u64) -> Self {
        ResultEnvelope {
            command: command.to_string(),
            inputs: Vec::new(),
            verdicts: BTreeMap::new(),
            timings_ms: BTreeMap::new(),
            certificates: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
        }
    }

    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        });
    }

    pub fn verdict(&mut self, key: &str, value: impl ToString) {
        self.verdicts.insert(key.to_string(), value.to_string());
    }

    /// `key: value` lines: verdicts, then certificate paths.
    pub fn lines(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.verdicts {
            s.push_str(&format!("{k}: {v}\n"));
        }
        for c in &self.certificates {
            s.push_str(&format!("certificate: {c}\n"));
        }
        for (k, v) in &self.timings_ms {
            s.push_str(&format!("time.{k}: {v}ms\n"));
        }
        s
    }
}
