use rustc_hash::FxHashMap as HashMap;

use serde::Serialize;

use super::slots::{SlotRelation, Slots};
use super::ExactTilingError;
use crate::action_space::{ActionWindow, PointSet};
use crate::group_model::{multiply_set, GroupPoint, Rational, Shape};
use crate::matching::MatchingState;
use crate::quasitiling::TileAtlas;
use crate::report::Check;

/// Final shape classes and their centers. Class `i` (0-based here, 1-based in
/// serialized form) places `shapes[i]` at every point of `centers[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tiling {
    pub shapes: Vec<Shape>,
    pub centers: Vec<Vec<usize>>,
}

impl Tiling {
    pub fn class_count(&self) -> usize {
        self.shapes.len()
    }

    pub fn tile_count(&self) -> usize {
        self.centers.iter().map(Vec::len).sum()
    }

    /// Groups `(shape, center)` pairs by literal shape, classes numbered in
    /// order of first appearance along ascending centers.
    pub fn from_tiles(mut tiles: Vec<(Shape, usize)>) -> Self {
        tiles.sort_by_key(|t| t.1);
        let mut ids: HashMap<Shape, usize> = HashMap::default();
        let mut shapes = Vec::new();
        let mut centers: Vec<Vec<usize>> = Vec::new();
        for (shape, c) in tiles {
            let id = *ids.entry(shape.clone()).or_insert_with(|| {
                shapes.push(shape);
                centers.push(Vec::new());
                shapes.len() - 1
            });
            centers[id].push(c);
        }
        Tiling { shapes, centers }
    }
}

/// Augments every atlas tile with the leftover points matched into its slots:
/// `y` matched to `z = f c`, `f ∈ Z_c`, with `z = u y`, contributes
/// `u⁻¹ f` (so that `u⁻¹ f c = y`).
///
/// Returns the tiling and, per atlas entry, `|F_new △ F′_j|` checked against
/// `6ε|F′_j|` for the entry's ladder shape.
pub fn assemble_shapes(
    window: &ActionWindow,
    atlas: &TileAtlas,
    slots: &Slots,
    relation: Option<(&SlotRelation, &MatchingState)>,
    u: Option<&Shape>,
    eps: &Rational,
) -> Result<(Tiling, Check), ExactTilingError> {
    let model = window.model();
    let mut added: Vec<Vec<GroupPoint>> = vec![Vec::new(); atlas.entries.len()];
    if let Some((rel, rho)) = relation {
        let u = u.ok_or_else(|| ExactTilingError::USearch("relation without U".into()))?;
        let mut owner: HashMap<usize, (usize, &GroupPoint)> = HashMap::default();
        for (i, (entry, z)) in atlas.entries.iter().zip(&slots.per_entry).enumerate() {
            for f in z {
                owner.insert(window.act(f, entry.center), (i, f));
            }
        }
        for (x, &y) in rel.left.iter().enumerate() {
            let j = rho.get(x).ok_or(ExactTilingError::Unmatched(y))?;
            let pos = rel
                .relation
                .neighbors(x)
                .binary_search(&(j as u32))
                .map_err(|_| ExactTilingError::Unmatched(y))?;
            let g = &u.points()[rel.via[x][pos] as usize];
            let z = rel.right[j];
            let &(i, f) = owner.get(&z).ok_or(ExactTilingError::Unmatched(y))?;
            added[i].push(model.multiply(&model.invert(g), f));
        }
    }

    let six = eps.scale(6);
    let mut worst: Option<(usize, usize, usize)> = None;
    let mut tiles = Vec::with_capacity(atlas.entries.len());
    for (i, (entry, extra)) in atlas.entries.iter().zip(added).enumerate() {
        let shape = if extra.is_empty() {
            entry.shape.clone()
        } else {
            entry.shape.union(&Shape::from_points(extra))
        };
        let ancestor = &atlas.ladder[entry.level - 1];
        let diff = shape.symmetric_difference_len(ancestor);
        if six.below_count(diff, ancestor.len()) && worst.is_none() {
            worst = Some((i, diff, ancestor.len()));
        }
        tiles.push((shape, entry.center));
    }
    let bound = Check::new(
        "|F_i △ F'_j| <= 6 eps |F'_j|",
        worst.is_none(),
        worst.map_or(String::new(), |(i, d, n)| format!("entry {i}: {d} against {n}")),
    );
    Ok((Tiling::from_tiles(tiles), bound))
}

/// Independent re-check of a tiling: every carrier point covered exactly once
/// and every shape `(K, δ)`-invariant.
pub fn verify_tiling(window: &ActionWindow, tiling: &Tiling, k: &Shape, delta: &Rational) -> Vec<Check> {
    let model = window.model();
    let mut checks = Vec::new();

    let mut hits = vec![0u8; window.size()];
    let mut twice = None;
    let mut bad_center = None;
    for (shape, centers) in tiling.shapes.iter().zip(&tiling.centers) {
        for &c in centers {
            if c >= window.size() {
                bad_center.get_or_insert(c);
                continue;
            }
            for g in shape {
                let p = window.act(g, c);
                hits[p] = hits[p].saturating_add(1);
                if hits[p] > 1 {
                    twice.get_or_insert(p);
                }
            }
        }
    }
    let missed = hits.iter().position(|&h| h == 0);
    checks.push(Check::new(
        "centers inside the carrier",
        bad_center.is_none(),
        bad_center.map_or(String::new(), |c| format!("center {c}")),
    ));
    checks.push(Check::new(
        "no point covered twice",
        twice.is_none(),
        twice.map_or(String::new(), |p| format!("point {:?}", window.coords(p))),
    ));
    checks.push(Check::new(
        "every point covered",
        missed.is_none(),
        missed.map_or(String::new(), |p| format!("point {:?}", window.coords(p))),
    ));
    let total: usize = tiling
        .shapes
        .iter()
        .zip(&tiling.centers)
        .map(|(s, c)| s.len() * c.len())
        .sum();
    checks.push(Check::new(
        "sum |F_i||C_i| = |X|",
        total == window.size(),
        format!("{total} vs {}", window.size()),
    ));

    // Sorted-merge evaluation of |KF △ F|, independent of the hashing path
    // used while building.
    let mut loose = None;
    for (i, shape) in tiling.shapes.iter().enumerate() {
        let kf = multiply_set(model, k, shape);
        let diff = kf.symmetric_difference_len(shape);
        if shape.is_empty() || !delta.exceeds_count(diff, shape.len()) {
            loose.get_or_insert((i, diff, shape.len()));
        }
    }
    checks.push(Check::new(
        "every shape (K, delta)-invariant",
        loose.is_none(),
        loose.map_or(String::new(), |(i, d, n)| format!("shape {}: |KF △ F| = {d}, |F| = {n}", i + 1)),
    ));
    checks
}

/// The set `F C` covered by one class.
pub fn class_cover(window: &ActionWindow, tiling: &Tiling, class: usize) -> PointSet {
    let centers = PointSet::from_indices(window.size(), tiling.centers[class].iter().copied());
    window.translate_points(&tiling.shapes[class], &centers)
}
