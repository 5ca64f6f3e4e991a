use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Header carried by every JSON document the tool prints.
#[derive(Clone, Debug, Serialize)]
pub struct RunMetadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    pub elapsed_seconds: f64,
    /// Ingested file path to its sha256.
    pub artifacts: BTreeMap<String, String>,
}

/// Collects metadata while a command runs.
#[derive(Debug)]
pub struct RunClock {
    command: String,
    config: Value,
    artifacts: BTreeMap<String, String>,
    start: Instant,
}

impl RunClock {
    pub fn start(command: &str, config: Value) -> Self {
        RunClock {
            command: command.into(),
            config,
            artifacts: BTreeMap::new(),
            start: Instant::now(),
        }
    }

    pub fn artifact(&mut self, path: &str, sha256: &str) {
        self.artifacts.insert(path.into(), sha256.into());
    }

    pub fn finish(self) -> RunMetadata {
        RunMetadata {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: self.command,
            config: self.config,
            elapsed_seconds: self.start.elapsed().as_secs_f64(),
            artifacts: self.artifacts,
        }
    }
}

/// `{"metadata": …, "result": …}`
pub fn envelope<T: Serialize>(meta: RunMetadata, result: &T) -> Value {
    serde_json::json!({ "metadata": meta, "result": result })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
