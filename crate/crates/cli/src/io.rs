//! Versioned JSON artifacts: tilings, atlases, matchings and point sets.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use folner_core::action_space::{ActionWindow, PointSet};
use folner_core::exact_tiling::{Tiling, TilingRun};
use folner_core::group_model::{GroupModel, Rational, Shape};
use folner_core::quasitiling::TileAtlas;

pub const SCHEMA_VERSION: u32 = 1;

/// A carrier subset, either as sorted indices or as `[start, len]` runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "fmt", deny_unknown_fields)]
pub enum PointSetJson {
    #[serde(rename = "sorted-v1")]
    Sorted { size: usize, points: Vec<usize> },
    #[serde(rename = "rle-v1")]
    Runs { size: usize, runs: Vec<(usize, usize)> },
}

impl PointSetJson {
    /// Picks whichever encoding is shorter.
    pub fn encode(set: &PointSet) -> Self {
        let runs = set.runs();
        if runs.len() * 2 < set.len() {
            PointSetJson::Runs {
                size: set.universe(),
                runs: runs.into_iter().map(|(s, e)| (s, e - s)).collect(),
            }
        } else {
            PointSetJson::Sorted {
                size: set.universe(),
                points: set.iter().collect(),
            }
        }
    }

    pub fn decode(&self) -> Result<PointSet> {
        let (size, indices): (usize, Vec<usize>) = match self {
            PointSetJson::Sorted { size, points } => {
                if !points.windows(2).all(|w| w[0] < w[1]) {
                    bail!("sorted-v1 point list is not strictly increasing");
                }
                (*size, points.clone())
            }
            PointSetJson::Runs { size, runs } => (*size, runs.iter().flat_map(|&(s, l)| s..s + l).collect()),
        };
        if let Some(&bad) = indices.iter().find(|&&p| p >= size) {
            bail!("point {bad} outside a universe of {size}");
        }
        Ok(PointSet::from_indices(size, indices))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeEntry {
    pub id: usize,
    pub elements: Shape,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CenterEntry {
    pub shape: usize,
    pub at: Vec<i64>,
    /// Ladder level (atlases only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArtifactKind {
    Tiling,
    Atlas,
}

/// The interchange format for `tile`, `quasitile`, `check` and `render`.
///
/// Shape ids are 1-based. Centers are listed by shape id, then by carrier
/// order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TilingFile {
    pub version: u32,
    pub kind: ArtifactKind,
    pub model: GroupModel,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: Shape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder: Option<Vec<Shape>>,
    pub shapes: Vec<ShapeEntry>,
    pub centers: Vec<CenterEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leftover: Option<PointSetJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slots: Option<PointSetJson>,
    /// Matched pairs as carrier coordinates, leftover point first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matching: Option<Vec<(Vec<i64>, Vec<i64>)>>,
    pub report: Value,
}

impl TilingFile {
    pub fn from_run(window: &ActionWindow, k: &Shape, delta: &Rational, run: &TilingRun) -> Result<Self> {
        let (shapes, centers) = tiling_entries(window, &run.tiling);
        Ok(TilingFile {
            version: SCHEMA_VERSION,
            kind: ArtifactKind::Tiling,
            model: *window.model(),
            n: window.side(),
            k: k.clone(),
            delta: Some(delta.clone()),
            eps: Some(run.report.eps.clone()),
            ladder: None,
            shapes,
            centers,
            leftover: Some(PointSetJson::encode(&run.leftover)),
            slots: Some(PointSetJson::encode(&run.slots)),
            matching: Some(
                run.arrows
                    .iter()
                    .map(|&(y, z)| (window.coords(y), window.coords(z)))
                    .collect(),
            ),
            report: serde_json::to_value(&run.report)?,
        })
    }

    pub fn from_atlas(window: &ActionWindow, k: &Shape, atlas: &TileAtlas, report: Value) -> Self {
        let tiling = Tiling::from_tiles(atlas.tiles());
        let (shapes, mut centers) = tiling_entries(window, &tiling);
        let level: std::collections::HashMap<usize, usize> =
            atlas.entries.iter().map(|e| (e.center, e.level)).collect();
        for c in &mut centers {
            let x = window.index(&c.at).expect("coordinates come from the window");
            c.level = level.get(&x).copied();
        }
        TilingFile {
            version: SCHEMA_VERSION,
            kind: ArtifactKind::Atlas,
            model: *window.model(),
            n: window.side(),
            k: k.clone(),
            delta: None,
            eps: Some(atlas.eps.clone()),
            ladder: Some(atlas.ladder.clone()),
            shapes,
            centers,
            leftover: Some(PointSetJson::encode(&atlas.leftover)),
            slots: None,
            matching: None,
            report,
        }
    }

    pub fn window(&self) -> Result<ActionWindow> {
        Ok(ActionWindow::new(self.model, self.n)?)
    }

    /// Rebuilds the tiling, resolving 1-based shape ids and center
    /// coordinates against the window.
    pub fn tiling(&self, window: &ActionWindow) -> Result<Tiling> {
        let mut shapes = Vec::with_capacity(self.shapes.len());
        for (i, s) in self.shapes.iter().enumerate() {
            if s.id != i + 1 {
                bail!("shape ids must be 1..m in order; found {} at position {}", s.id, i + 1);
            }
            for p in &s.elements {
                self.model.validate(p).with_context(|| format!("shape {}", s.id))?;
            }
            shapes.push(s.elements.clone());
        }
        let mut centers = vec![Vec::new(); shapes.len()];
        for c in &self.centers {
            if c.shape == 0 || c.shape > shapes.len() {
                bail!("center {:?} names unknown shape {}", c.at, c.shape);
            }
            let x = window
                .index(&c.at)
                .with_context(|| format!("center {:?}", c.at))?;
            centers[c.shape - 1].push(x);
        }
        Ok(Tiling { shapes, centers })
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TilingFile = serde_json::from_str(text).context("malformed tiling JSON")?;
        if file.version != SCHEMA_VERSION {
            bail!("unsupported schema version {}", file.version);
        }
        Ok(file)
    }
}

fn tiling_entries(window: &ActionWindow, tiling: &Tiling) -> (Vec<ShapeEntry>, Vec<CenterEntry>) {
    let shapes = tiling
        .shapes
        .iter()
        .enumerate()
        .map(|(i, s)| ShapeEntry {
            id: i + 1,
            elements: s.clone(),
        })
        .collect();
    let centers = tiling
        .centers
        .iter()
        .enumerate()
        .flat_map(|(i, cs)| {
            cs.iter().map(move |&c| CenterEntry {
                shape: i + 1,
                at: window.coords(c),
                level: None,
            })
        })
        .collect();
    (shapes, centers)
}

/// Output of the `match` subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchingFile {
    pub version: u32,
    pub left: usize,
    pub right: usize,
    pub pairs: Vec<(usize, usize)>,
    pub saturated: bool,
    pub report: Value,
}

impl MatchingFile {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Parses an edge list: one `left right` pair of 0-based indices per line;
/// blank lines and `#` comments are skipped. Sizes default to one past the
/// largest index seen.
pub fn parse_edge_list(text: &str) -> Result<(usize, usize, Vec<(usize, usize)>)> {
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            bail!("line {}: expected two indices", lineno + 1);
        };
        let x = a.parse().with_context(|| format!("line {}: bad left index {a:?}", lineno + 1))?;
        let y = b.parse().with_context(|| format!("line {}: bad right index {b:?}", lineno + 1))?;
        edges.push((x, y));
    }
    let left = edges.iter().map(|e| e.0 + 1).max().unwrap_or(0);
    let right = edges.iter().map(|e| e.1 + 1).max().unwrap_or(0);
    Ok((left, right, edges))
}
