use rustc_hash::FxHashMap as HashMap;

use serde::Serialize;

use super::params::{check_beta, group_ladder_length};
use super::QuasitileError;
use crate::group_model::{boundary, invariance_defect_count, GroupModel, GroupPoint, Rational, Shape};
use crate::report::{Check, Policy};

/// One right translate `T_i c` with its core witness `T'_c ⊆ T_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupTile {
    pub level: usize,
    pub center: GroupPoint,
    pub core: Shape,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupQuasitiling {
    pub beta: Rational,
    pub ladder: Vec<Shape>,
    pub tiles: Vec<GroupTile>,
    pub covered: usize,
    pub target: usize,
    pub hypotheses: Vec<Check>,
}

impl GroupQuasitiling {
    /// Centers of level `i` (1-based).
    pub fn centers(&self, level: usize) -> Vec<GroupPoint> {
        self.tiles
            .iter()
            .filter(|t| t.level == level)
            .map(|t| t.center.clone())
            .collect()
    }
}

/// Quasitiles the finite set `E ⊂ G` by right translates of `T_1 ⊆ .. ⊆ T_n`.
///
/// Descends the ladder; at level `i` a center `c ∈ E` with `T_i c ⊆ E` is taken
/// when at most `β|T_i|` of `T_i c` is already covered. The uncovered part is
/// its core.
pub fn group_quasitile(
    model: &GroupModel,
    e: &Shape,
    ladder: &[Shape],
    beta: &Rational,
    policy: Policy,
) -> Result<GroupQuasitiling, QuasitileError> {
    check_beta(beta)?;
    if e.is_empty() {
        return Err(QuasitileError::EmptyShape("E"));
    }
    if ladder.is_empty() {
        return Err(QuasitileError::EmptyLadder);
    }
    for p in e.iter().chain(ladder.iter().flat_map(|t| t.iter())) {
        model.validate(p)?;
    }
    if !ladder[0].contains(&model.identity()) {
        return Err(QuasitileError::Precondition {
            name: "identity in T_1".into(),
            detail: String::new(),
        });
    }
    if let Some(i) = (1..ladder.len()).find(|&i| !ladder[i - 1].is_subset(&ladder[i])) {
        return Err(QuasitileError::NotNested(i + 1));
    }

    let hypotheses = group_hypotheses(model, e, ladder, beta);
    if policy == Policy::Strict {
        if let Some(h) = hypotheses.iter().find(|h| !h.holds) {
            return Err(QuasitileError::Hypothesis {
                name: h.name.clone(),
                detail: h.detail.clone(),
            });
        }
    }

    let index: HashMap<&GroupPoint, usize> = e.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut covered = vec![false; e.len()];
    let mut tiles = Vec::new();
    let mut slots = Vec::new();
    for level in (1..=ladder.len()).rev() {
        let t = &ladder[level - 1];
        for c in e {
            slots.clear();
            let mut inside = true;
            let mut hits = 0;
            for g in t {
                match index.get(&model.multiply(g, c)) {
                    Some(&j) => {
                        hits += covered[j] as usize;
                        slots.push(j);
                    }
                    None => {
                        inside = false;
                        break;
                    }
                }
            }
            if !inside || beta.below_count(hits, t.len()) {
                continue;
            }
            let core = t
                .iter()
                .zip(&slots)
                .filter(|(_, &j)| !covered[j])
                .map(|(g, _)| g.clone())
                .collect();
            for &j in &slots {
                covered[j] = true;
            }
            tiles.push(GroupTile {
                level,
                center: c.clone(),
                core: Shape::from_points(core),
            });
        }
    }
    Ok(GroupQuasitiling {
        beta: beta.clone(),
        ladder: ladder.to_vec(),
        covered: covered.iter().filter(|&&b| b).count(),
        target: e.len(),
        tiles,
        hypotheses,
    })
}

fn group_hypotheses(model: &GroupModel, e: &Shape, ladder: &[Shape], beta: &Rational) -> Vec<Check> {
    let mut out = Vec::new();
    let n = ladder.len();
    let required = group_ladder_length(beta).unwrap_or(usize::MAX);
    out.push(Check::new(
        "(1-beta/2)^n < beta",
        n >= required,
        format!("n = {n}, need {required}"),
    ));
    let eighth = beta.clone() / Rational::from_integer(8);
    let thick = (1..n).find(|&i| {
        let b = boundary(model, &ladder[i - 1], &ladder[i]).len();
        eighth.below_count(b, ladder[i].len())
    });
    out.push(Check::new(
        "|boundary_{T_(i-1)} T_i| <= (beta/8)|T_i|",
        thick.is_none(),
        thick.map_or(String::new(), |i| format!("level {}", i + 1)),
    ));
    let quarter = beta.clone() / Rational::from_integer(4);
    let defect = invariance_defect_count(model, &ladder[n - 1], e);
    out.push(Check::new(
        "E (T_n, beta/4)-invariant",
        quarter.exceeds_count(defect, e.len()),
        format!("|T_n E △ E| = {defect}, |E| = {}", e.len()),
    ));
    out
}

/// Re-derives containment, β-disjointness of the cores and coverage.
pub fn verify_group_quasitiling(model: &GroupModel, e: &Shape, q: &GroupQuasitiling) -> Vec<Check> {
    let keep = Rational::one() - q.beta.clone();
    let mut checks = Vec::new();
    let mut union = Vec::new();
    let mut cores = Vec::new();
    let mut escaped = None;
    let mut thin = None;
    for (i, tile) in q.tiles.iter().enumerate() {
        let t = &q.ladder[tile.level - 1];
        for g in t {
            let p = model.multiply(g, &tile.center);
            if !e.contains(&p) {
                escaped.get_or_insert(i);
            }
            union.push(p);
        }
        if !tile.core.is_subset(t) || keep.exceeds_count(tile.core.len(), t.len()) {
            thin.get_or_insert(i);
        }
        cores.extend(tile.core.iter().map(|g| model.multiply(g, &tile.center)));
    }
    checks.push(Check::new(
        "union inside E",
        escaped.is_none(),
        escaped.map_or(String::new(), |i| format!("tile {i}")),
    ));
    checks.push(Check::new(
        "|core| >= (1-beta)|T_i|",
        thin.is_none(),
        thin.map_or(String::new(), |i| format!("tile {i}")),
    ));
    let total = cores.len();
    let distinct = Shape::from_points(cores).len();
    checks.push(Check::new(
        "cores pairwise disjoint",
        distinct == total,
        format!("{} repeated points", total - distinct),
    ));
    let union = Shape::from_points(union);
    let covered = union.intersection(e).len();
    checks.push(Check::new(
        "|E ∩ union| >= (1-beta)|E|",
        !keep.exceeds_count(covered, e.len()),
        format!("{covered} of {}", e.len()),
    ));
    checks
}
