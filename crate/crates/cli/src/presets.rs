//! Named `K` sets.

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use folner_core::group_model::{GroupModel, GroupPoint, Shape};

/// A `K` given by preset name or by explicit coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum KSpec {
    Preset(String),
    Points(Vec<Vec<i64>>),
}

impl KSpec {
    /// Flag form: a preset name, or a JSON list such as `[[0,0],[1,0]]`.
    pub fn parse_flag(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('[') {
            let pts: Vec<Vec<i64>> = serde_json::from_str(s).context("K must be a JSON list of coordinate lists")?;
            Ok(KSpec::Points(pts))
        } else {
            Ok(KSpec::Preset(s.to_string()))
        }
    }

    pub fn resolve(&self, model: &GroupModel) -> Result<Shape> {
        let shape = match self {
            KSpec::Points(pts) => Shape::from_coords(pts),
            KSpec::Preset(name) => preset(name, model)?,
        };
        if shape.is_empty() {
            bail!("K is empty");
        }
        for p in &shape {
            model.validate(p).with_context(|| format!("K element {:?}", p.coords()))?;
        }
        Ok(shape)
    }
}

/// - `cross1`: identity and the unit steps of a lattice;
/// - `box1`: the 3×3 box `[-1, 1]²` of `Z²` (the cube `[-1, 1]^d` in general);
/// - `gen`: the model's standard generators with the identity;
/// - `center1`: `{e, z, z⁻¹}` for the central `z = (0, 0, 1)` of the
///   Heisenberg group.
pub fn preset(name: &str, model: &GroupModel) -> Result<Shape> {
    match (name, model) {
        ("cross1", GroupModel::Lattice { .. }) | ("gen", _) => Ok(model.generators()),
        ("box1", GroupModel::Lattice { .. }) => Ok(model.symmetric_folner_set(1)?),
        ("center1", GroupModel::Heisenberg) => Ok(Shape::from_points(
            [[0, 0, -1], [0, 0, 0], [0, 0, 1]]
                .iter()
                .map(|c| GroupPoint::new(c))
                .collect(),
        )),
        _ => bail!("preset {name:?} is not defined for model {model}"),
    }
}
