use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
struct FileDigest {
    path: String,
    sha256: String,
}

/// Machine-readable record of one invocation: arguments, inputs and outputs
/// with digests, seed and versions. Holds nothing time-dependent, so
/// identical invocations give identical manifests.
#[derive(Debug, Serialize)]
pub struct Manifest {
    tool: &'static str,
    version: &'static str,
    command: String,
    args: Vec<String>,
    seed: Option<u64>,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    #[serde(flatten)]
    extra: Map<String, Value>,
    pub exit_code: i32,
    #[serde(skip)]
    pub write_to: Option<PathBuf>,
}

fn digest(path: &Path, bytes: &[u8]) -> FileDigest {
    FileDigest {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(bytes)),
    }
}

impl Manifest {
    pub fn new(command: &str, args: Vec<String>, seed: Option<u64>) -> Self {
        Manifest {
            tool: "perturbed",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            args,
            seed,
            inputs: Vec::new(),
            outputs: Vec::new(),
            extra: Map::new(),
            exit_code: 0,
            write_to: None,
        }
    }

    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(digest(path, bytes));
    }

    pub fn output(&mut self, path: &Path, bytes: &[u8]) {
        self.outputs.push(digest(path, bytes));
    }

    pub fn extra(&mut self, key: &str, value: Value) {
        self.extra.insert(key.to_string(), value);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("manifest serializes")
    }
}
