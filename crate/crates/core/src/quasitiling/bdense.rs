use serde::Serialize;

use super::bepack::bepack;
use super::params::{check_epsilon, first_cross_failure, ladder_length, recursion_bound, slack_delta};
use super::QuasitileError;
use crate::action_space::{banach_density, ActionWindow, Carrier, PointSet};
use crate::group_model::{is_invariant, Rational, Shape};
use crate::report::{Check, Policy};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtlasEntry {
    pub center: usize,
    /// 1-based ladder level.
    pub level: usize,
    pub shape: Shape,
}

/// Density after one descent stage, against the recursion bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageRecord {
    pub level: usize,
    pub centers: usize,
    pub covered: usize,
    pub lower_density: Rational,
    pub recursion_bound: Rational,
    pub dominates: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TileAtlas {
    pub eps: Rational,
    pub delta: Rational,
    pub ladder: Vec<Shape>,
    pub entries: Vec<AtlasEntry>,
    #[serde(skip)]
    pub covered: PointSet,
    #[serde(skip)]
    pub leftover: PointSet,
    pub stages: Vec<StageRecord>,
    pub windows: Vec<Shape>,
    pub lower_density: Rational,
    pub hypotheses: Vec<Check>,
}

impl TileAtlas {
    /// Disjoint-core witnesses. The translates `F_c c` are exactly disjoint,
    /// so every tile is its own core.
    pub fn witnesses(&self) -> Vec<Shape> {
        self.entries.iter().map(|e| e.shape.clone()).collect()
    }

    /// `(F_c, c)` pairs in entry order.
    pub fn tiles(&self) -> Vec<(Shape, usize)> {
        self.entries.iter().map(|e| (e.shape.clone(), e.center)).collect()
    }

    pub fn center_set(&self, size: usize) -> PointSet {
        PointSet::from_indices(size, self.entries.iter().map(|e| e.center))
    }
}

#[derive(Clone, Debug, Default)]
pub struct BdenseOptions {
    pub policy: Policy,
    /// Density windows; [`default_windows`] when `None`.
    pub windows: Option<Vec<Shape>>,
}

/// The top ladder shape, plus on a torus the largest centered box that still
/// acts freely.
pub fn default_windows(window: &ActionWindow, top: &Shape) -> Vec<Shape> {
    let mut windows = vec![top.clone()];
    if let Carrier::Torus { side, .. } = window.carrier() {
        if let Ok(b) = window.model().symmetric_folner_set((side - 1) / 2) {
            if b != *top {
                windows.push(b);
            }
        }
    }
    windows
}

/// Quasitiles the window by subshapes of the ladder `F_1, .., F_n`.
///
/// Descends `i = n, .., 1`, packing translates of `F_i` against everything
/// already covered. Each stage's lower density is measured on the window list
/// and compared with the recursion bound.
pub fn bdense(
    window: &ActionWindow,
    k: &Shape,
    eps: &Rational,
    ladder: &[Shape],
    options: &BdenseOptions,
) -> Result<TileAtlas, QuasitileError> {
    check_epsilon(eps)?;
    if ladder.is_empty() {
        return Err(QuasitileError::EmptyLadder);
    }
    if k.is_empty() {
        return Err(QuasitileError::EmptyShape("K"));
    }
    for (i, f) in ladder.iter().enumerate() {
        if f.is_empty() {
            return Err(QuasitileError::EmptyShape("ladder"));
        }
        window.check_shape(&format!("F_{}", i + 1), f)?;
    }
    let windows = match &options.windows {
        Some(w) => w.clone(),
        None => default_windows(window, &ladder[ladder.len() - 1]),
    };
    let model = window.model();
    let n = ladder.len();
    let one = Rational::one();
    let keep = &one - eps;

    let mut hypotheses = Vec::new();
    let required = ladder_length(eps)?;
    hypotheses.push(Check::new(
        "(1-eps)^n < eps",
        n >= required,
        format!("n = {n}, need {required}"),
    ));
    let delta = match slack_delta(eps, n) {
        Ok(d) => d,
        Err(_) => slack_delta(eps, required)?,
    };
    let loose = (0..n).find(|&i| !is_invariant(model, k, eps, &ladder[i]));
    hypotheses.push(Check::new(
        "ladder (K, eps)-invariant",
        loose.is_none(),
        loose.map_or(String::new(), |i| format!("F_{}", i + 1)),
    ));
    let tau = &delta * &keep;
    let cross = first_cross_failure(model, ladder, &tau);
    hypotheses.push(Check::new(
        "cross-invariance F_i (F_j^-1, delta(1-eps))",
        cross.is_none(),
        cross.map_or(String::new(), |(i, j)| format!("F_{} against F_{}", i + 1, j + 1)),
    ));
    if options.policy == Policy::Strict {
        if let Some((i, j)) = cross {
            return Err(QuasitileError::CrossInvariance {
                i: i + 1,
                j: j + 1,
                tau,
            });
        }
        if let Some(h) = hypotheses.iter().find(|h| !h.holds) {
            return Err(QuasitileError::Hypothesis {
                name: h.name.clone(),
                detail: h.detail.clone(),
            });
        }
    }

    let mut covered = window.empty_set();
    let mut entries = Vec::new();
    let mut stages = Vec::with_capacity(n);
    for level in (1..=n).rev() {
        let f = &ladder[level - 1];
        let packing = bepack(window, &covered, f, eps)?;
        for (c, s) in packing.centers.iter().zip(&packing.subshapes) {
            for g in s {
                covered.insert(window.act(g, *c));
            }
        }
        let count = packing.centers.len();
        entries.extend(
            packing
                .centers
                .into_iter()
                .zip(packing.subshapes)
                .map(|(center, shape)| AtlasEntry { center, level, shape }),
        );
        let density = banach_density(window, &covered, &windows)?.lower;
        let bound = recursion_bound(eps, &delta, n, level);
        log::debug!("stage {level}: {count} centers, density {density} vs {bound}");
        stages.push(StageRecord {
            level,
            centers: count,
            covered: covered.len(),
            dominates: density >= bound,
            lower_density: density,
            recursion_bound: bound,
        });
    }
    let lower_density = stages.last().map(|s| s.lower_density.clone()).unwrap_or_else(Rational::zero);
    let leftover = covered.complement();
    Ok(TileAtlas {
        eps: eps.clone(),
        delta,
        ladder: ladder.to_vec(),
        entries,
        covered,
        leftover,
        stages,
        windows,
        lower_density,
        hypotheses,
    })
}

/// Re-derives the atlas clauses: tile sizes, exact disjointness, the covered
/// and leftover sets, final density and stage dominance.
pub fn verify_atlas(window: &ActionWindow, atlas: &TileAtlas) -> Result<Vec<Check>, QuasitileError> {
    let keep = Rational::one() - atlas.eps.clone();
    let mut checks = Vec::new();

    let bad = atlas.entries.iter().position(|e| {
        let f = &atlas.ladder[e.level - 1];
        !e.shape.is_subset(f) || !keep.below_count(e.shape.len(), f.len())
    });
    checks.push(Check::new(
        "|F_c| > (1-eps)|F_i|",
        bad.is_none(),
        bad.map_or(String::new(), |i| format!("entry {i}")),
    ));

    let mut seen = window.empty_set();
    let mut clash = None;
    for e in &atlas.entries {
        for g in &e.shape {
            let p = window.act(g, e.center);
            if seen.contains(p) {
                clash.get_or_insert(p);
            }
            seen.insert(p);
        }
    }
    checks.push(Check::new(
        "tiles pairwise disjoint",
        clash.is_none(),
        clash.map_or(String::new(), |p| format!("point {p}")),
    ));

    let partition = seen == atlas.covered && atlas.leftover == atlas.covered.complement();
    checks.push(Check::new("covered and leftover partition the carrier", partition, ""));

    let density = banach_density(window, &seen, &atlas.windows)?.lower;
    checks.push(Check::new(
        "covered density > 1-eps",
        density > keep,
        format!("{density}"),
    ));

    let lagging = atlas.stages.iter().find(|s| s.lower_density < s.recursion_bound);
    checks.push(Check::new(
        "stage densities dominate the recursion",
        lagging.is_none(),
        lagging.map_or(String::new(), |s| {
            format!("level {}: {} < {}", s.level, s.lower_density, s.recursion_bound)
        }),
    ));
    Ok(checks)
}
