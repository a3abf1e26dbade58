use serde::Serialize;

use super::ExactTilingError;
use crate::action_space::{ActionWindow, PointSet};
use crate::group_model::{invariance_defect_count, multiply_set, Rational, Shape};
use crate::matching::BipartiteRelation;
use crate::quasitiling::TileAtlas;
use crate::report::Check;

/// Per-entry slots `Z_c ⊆ F_c` and their union `Z = ⋃ Z_c c`.
#[derive(Clone, Debug)]
pub struct Slots {
    pub per_entry: Vec<Shape>,
    pub set: PointSet,
}

/// Slot size for a tile of `size` points: `⌊4.5 ε size⌋`, nudged into
/// `(4ε size, 5ε size)`.
pub fn slot_size(eps: &Rational, size: usize) -> Option<usize> {
    let four = eps.scale(4);
    let five = eps.scale(5);
    let mid = (&eps.scale(9) * &Rational::new(1, 2)).scale(size).floor();
    let mid: usize = mid.try_into().ok()?;
    let fits = |s: usize| four.below_count(s, size) && five.exceeds_count(s, size);
    [mid, mid + 1, mid.saturating_sub(1)]
        .into_iter()
        .find(|&s| s <= size && fits(s))
}

/// `Z_c` = the first `|Z_c|` elements of `F_c` in canonical order.
pub fn carve_slots(window: &ActionWindow, atlas: &TileAtlas, eps: &Rational) -> Result<Slots, ExactTilingError> {
    let mut per_entry = Vec::with_capacity(atlas.entries.len());
    let mut set = window.empty_set();
    for entry in &atlas.entries {
        let size = entry.shape.len();
        if !eps.exceeds_count(1, size) {
            return Err(ExactTilingError::ShapeTooSmall {
                center: entry.center,
                size,
                eps: eps.clone(),
            });
        }
        let s = slot_size(eps, size).ok_or_else(|| ExactTilingError::ShapeTooSmall {
            center: entry.center,
            size,
            eps: eps.clone(),
        })?;
        let z = Shape::from_points(entry.shape.points()[..s].to_vec());
        for g in &z {
            set.insert(window.act(g, entry.center));
        }
        per_entry.push(z);
    }
    Ok(Slots { per_entry, set })
}

/// The chosen `U` with the record of every condition evaluated on it.
#[derive(Clone, Debug, Serialize)]
pub struct UChoice {
    pub index: usize,
    pub shape: Shape,
    pub checks: Vec<Check>,
}

/// First symmetric Følner set `U` (indices `1..=cap`, within the radius) with
/// `|Y ∩ Ux| < ε|U|` at every `x` and `|Z ∩ Uy| ≥ 2ε|U|` at every `y ∈ Y`.
///
/// `(W′, (1/2 − ε)/|W′|)`-invariance is recorded on the result when `W′` is
/// given; it does not gate the search.
pub fn choose_u(
    window: &ActionWindow,
    w_prime: Option<&Shape>,
    eps: &Rational,
    y: &PointSet,
    z: &PointSet,
    cap: usize,
) -> Result<UChoice, ExactTilingError> {
    let model = window.model();
    let two = eps.scale(2);
    let mut last = String::from("no candidate inside the radius");
    for index in 1..=cap {
        let u = match model.symmetric_folner_set(index) {
            Ok(u) => u,
            Err(_) => break,
        };
        if u.len() > window.size() || window.check_shape("U", &u).is_err() {
            break;
        }
        if u.inverse(model) != u {
            return Err(ExactTilingError::USearch(format!("U_{index} is not symmetric")));
        }
        let counts = window.window_counts(y, &u);
        if let Some(x) = counts.iter().position(|&c| !eps.exceeds_count(c as usize, u.len())) {
            last = format!("U_{index}: |Y ∩ Ux| >= eps|U| at point {x}");
            continue;
        }
        let ts = window.translators(&u);
        let thin = y.iter().find(|&p| {
            let mut hits = 0;
            window.for_each_image(&ts, p, |q| hits += z.contains(q) as usize);
            two.exceeds_count(hits, u.len())
        });
        if let Some(p) = thin {
            last = format!("U_{index}: |Z ∩ Uy| < 2 eps|U| at point {p}");
            continue;
        }
        let mut checks = vec![
            Check::new("U symmetric", true, ""),
            Check::new("inf |(X∖Y) ∩ Ux| > (1-eps)|U|", true, ""),
            Check::new("|Z ∩ Uy| >= 2 eps|U| on Y", true, ""),
        ];
        if let Some(wp) = w_prime {
            let tol = (Rational::new(1, 2) - eps.clone()) / Rational::ratio(wp.len(), 1);
            let defect = invariance_defect_count(model, wp, &u);
            checks.push(Check::new(
                "U (W', (1/2-eps)/|W'|)-invariant",
                tol.exceeds_count(defect, u.len()),
                format!("|W'U △ U| = {defect}, |U| = {}", u.len()),
            ));
        }
        return Ok(UChoice {
            index,
            shape: u,
            checks,
        });
    }
    Err(ExactTilingError::USearch(last))
}

/// `W′ = W W⁻¹`, skipped when `|W|²` exceeds `limit`.
pub fn difference_set(window: &ActionWindow, w: &Shape, limit: usize) -> Option<Shape> {
    let model = window.model();
    (w.len().saturating_mul(w.len()) <= limit).then(|| multiply_set(model, w, &w.inverse(model)))
}

/// The leftover-to-slot relation with, per edge, the index in `U` of the
/// element `u` with `z = u y`.
#[derive(Clone, Debug)]
pub struct SlotRelation {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub relation: BipartiteRelation,
    /// Aligned with `relation.neighbors(x)`.
    pub via: Vec<Vec<u32>>,
}

/// `(y, z) ∈ R ⇔ z ∈ U y` for `y ∈ Y`, `z ∈ Z`, with the right-degree bound
/// `|Y ∩ Uz| < ε|U|` and the left-degree bound `|Z ∩ Uy| ≥ 2ε|U|` checked at
/// every point.
pub fn build_relation(
    window: &ActionWindow,
    y: &PointSet,
    z: &PointSet,
    u: &Shape,
    eps: &Rational,
) -> Result<SlotRelation, ExactTilingError> {
    let model = window.model();
    if u.inverse(model) != *u {
        return Err(ExactTilingError::USearch("U is not symmetric".into()));
    }
    let left: Vec<usize> = y.iter().collect();
    let right: Vec<usize> = z.iter().collect();
    let mut slot = vec![u32::MAX; window.size()];
    for (j, &p) in right.iter().enumerate() {
        slot[p] = j as u32;
    }
    let ts = window.translators(u);
    let mut adj = Vec::with_capacity(left.len());
    let mut via = Vec::with_capacity(left.len());
    for &p in &left {
        let mut row: Vec<(u32, u32)> = Vec::new();
        let mut k = 0u32;
        window.for_each_image(&ts, p, |q| {
            if slot[q] != u32::MAX {
                row.push((slot[q], k));
            }
            k += 1;
        });
        row.sort_unstable();
        row.dedup_by_key(|e| e.0);
        if eps.scale(2).exceeds_count(row.len(), u.len()) {
            return Err(ExactTilingError::DegreeBound {
                side: "left",
                point: p,
            });
        }
        adj.push(row.iter().map(|e| e.0).collect());
        via.push(row.iter().map(|e| e.1).collect());
    }
    let relation = BipartiteRelation::from_adjacency(right.len(), adj)?;
    if let Some(j) = (0..right.len()).find(|&j| !eps.exceeds_count(relation.left_neighbors(j).len(), u.len())) {
        return Err(ExactTilingError::DegreeBound {
            side: "right",
            point: right[j],
        });
    }
    Ok(SlotRelation {
        left,
        right,
        relation,
        via,
    })
}
