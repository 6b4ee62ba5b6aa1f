use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::domain::SeedSpec;
use crate::error::Result;

/// Bumped whenever a field of [`RunReport`] changes meaning or goes away.
pub const SCHEMA_VERSION: u32 = 1;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Where the run happened. Carries no clock so reports stay byte-stable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Environment {
    pub tool: String,
    pub version: String,
    pub os: String,
    pub arch: String,
}

impl Environment {
    pub fn current() -> Self {
        Environment {
            tool: "qsmote".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
        }
    }
}

/// One JSON document per CLI run: the resolved configuration, digests of
/// every input, and the command's result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub seed: SeedSpec,
    /// Every flag after defaults, environment and config file were applied.
    pub config: BTreeMap<String, String>,
    pub inputs: Vec<InputDigest>,
    pub environment: Environment,
    pub result: serde_json::Value,
}

impl RunReport {
    pub fn new(command: impl Into<String>, seed: SeedSpec, config: BTreeMap<String, String>) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            seed,
            config,
            inputs: Vec::new(),
            environment: Environment::current(),
            result: serde_json::Value::Null,
        }
    }

    pub fn add_input(&mut self, path: impl Into<String>, bytes: &[u8]) {
        self.inputs.push(InputDigest {
            path: path.into(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len(),
        });
    }

    pub fn set_result<T: Serialize>(&mut self, value: &T) -> Result<()> {
        self.result = serde_json::to_value(value)?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}
