//! Run configuration: a TOML file whose keys mirror the command-line flags.
//!
//! ```toml
//! model = "z2"
//! n = 128
//! k = "cross1"            # or an explicit list: k = [[0, 0], [1, 0]]
//! delta = "1/5"
//! policy = "verified"
//!
//! [search]
//! folner_cap = 256
//! u_cap = 64
//! ```

use anyhow::{Context, Result};
use serde::Deserialize;

use folner_core::group_model::{GroupModel, Rational, Shape};
use folner_core::report::Policy;

use crate::presets::KSpec;

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Option<GroupModel>,
    pub n: Option<usize>,
    pub k: Option<KSpec>,
    pub delta: Option<Rational>,
    pub beta: Option<Rational>,
    pub eps: Option<Rational>,
    pub policy: Option<Policy>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub search: SearchCaps,
    #[serde(default)]
    pub output: Outputs,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchCaps {
    pub folner_cap: Option<usize>,
    pub u_cap: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub json: Option<String>,
    pub svg: Option<String>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| anyhow::anyhow!("{}", e.to_string().replace('\n', " ")))
    }

    pub fn load(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        Self::parse(&text).with_context(|| format!("config {path}"))
    }

    pub fn k_shape(&self, model: &GroupModel) -> Result<Option<Shape>> {
        self.k.as_ref().map(|k| k.resolve(model)).transpose()
    }
}
