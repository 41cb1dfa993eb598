use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub code_version: String,
    pub seed: Option<u64>,
    pub elapsed_ms: u128,
    pub cache_hits: usize,
    pub records: usize,
    /// sha256 of the emitted JSON lines.
    pub result_digest: String,
}

pub fn digest(output: &[u8]) -> String {
    format!("{:x}", Sha256::digest(output))
}
