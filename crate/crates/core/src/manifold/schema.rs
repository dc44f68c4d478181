//! Raw serde mirror of the scenario document.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::Value;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct RawScenario {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub description: Option<String>,
    pub group: Value,
    pub pi3: RawPi3,
    pub closure: RawClosure,
    #[serde(default)]
    pub stabilizer: Option<RawStabilizer>,
    #[serde(default)]
    pub lambda3_table: Option<BTreeMap<String, Value>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct RawPi3 {
    pub generators: Vec<RawGenerator>,
    pub complete: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct RawGenerator {
    pub label: String,
    pub mu3: Value,
    #[serde(rename = "lambda_U")]
    pub lambda_u: Value,
}

#[derive(Deserialize)]
#[serde(tag = "mode")]
pub(super) enum RawClosure {
    #[serde(rename = "all")]
    All,
    #[serde(rename = "explicit")]
    Explicit { elements: Vec<String> },
    #[serde(rename = "ball")]
    Ball { radius: u32 },
}

#[derive(Deserialize)]
#[serde(tag = "mode")]
pub(super) enum RawStabilizer {
    #[serde(rename = "full-trivial")]
    FullTrivial {
        #[serde(default)]
        radius: Option<u32>,
    },
    #[serde(rename = "table")]
    Table { complete: bool, entries: Vec<RawEntry> },
    #[serde(rename = "generated")]
    Generated {
        depth: u32,
        generators: Vec<RawEntry>,
        #[serde(default)]
        complete: bool,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct RawEntry {
    pub s: String,
    #[serde(rename = "U_s")]
    pub u_s: Value,
}
