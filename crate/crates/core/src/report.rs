//! Versioned JSON envelope around every command result.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::rng::RNG_ALGORITHM;

pub const SCHEMA_VERSION: u32 = 1;

/// Resolved invocation: the command path and every argument after defaults
/// were applied, so an implicit seed is still written out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: Value,
}

impl CommandEcho {
    pub fn new(name: impl Into<String>, args: impl Serialize) -> Self {
        Self {
            name: name.into(),
            args: serde_json::to_value(args).expect("arguments serialize"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<R> {
    pub schema_version: u32,
    pub command: CommandEcho,
    pub rng: String,
    pub seed: Option<u64>,
    pub pass: bool,
    pub result: R,
    /// Excluded from [`Report::payload_json`]; the only field allowed to
    /// differ between identical invocations.
    pub timing: Timing,
}

#[derive(Serialize)]
struct Payload<'a, R> {
    schema_version: u32,
    command: &'a CommandEcho,
    rng: &'a str,
    seed: Option<u64>,
    pass: bool,
    result: &'a R,
}

impl<R: Serialize + DeserializeOwned> Report<R> {
    pub fn new(command: CommandEcho, seed: Option<u64>, pass: bool, result: R, elapsed_ms: f64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            rng: RNG_ALGORITHM.to_owned(),
            seed,
            pass,
            result,
            timing: Timing { elapsed_ms },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Everything except timing.
    pub fn payload_json(&self) -> String {
        serde_json::to_string_pretty(&Payload {
            schema_version: self.schema_version,
            command: &self.command,
            rng: &self.rng,
            seed: self.seed,
            pass: self.pass,
            result: &self.result,
        })
        .expect("reports serialize")
    }
}
