use super::params::check_epsilon;
use super::QuasitileError;
use crate::action_space::{ActionWindow, PointSet};
use crate::graph_color::translate_overlap_partition;
use crate::group_model::{Rational, Shape};
use crate::report::Check;

/// Centers `C` in carrier order with their subshapes `T_c ⊆ T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packing {
    pub centers: Vec<usize>,
    pub subshapes: Vec<Shape>,
    /// Number of overlap classes processed.
    pub classes: usize,
}

impl Packing {
    pub fn center_set(&self, window: &ActionWindow) -> PointSet {
        PointSet::from_indices(window.size(), self.centers.iter().copied())
    }
}

/// Greedy ε-packing of translates of `T` against the occupied set `Y`.
///
/// Classes `P_1, .., P_m` of the translate-overlap partition are processed
/// in order; `c ∈ P_i` is taken when `|Y_{i−1} ∩ Tc| < ε|T|`, with
/// `T_c = {t : tc ∉ Y_{i−1}}` and `Y_i = Y_{i−1} ∪ T C_i`. Within a class the
/// translates are disjoint, so `Y` is updated in place.
pub fn bepack(window: &ActionWindow, y: &PointSet, t: &Shape, eps: &Rational) -> Result<Packing, QuasitileError> {
    check_epsilon(eps)?;
    if t.is_empty() {
        return Err(QuasitileError::EmptyShape("T"));
    }
    let classes = translate_overlap_partition(window, t)?;
    let ts = window.translators(t);
    let cutoff = eps.strict_cutoff(t.len());
    let mut occupied = y.clone();
    let mut chosen: Vec<(usize, Shape)> = Vec::new();
    let mut image = Vec::with_capacity(ts.len());
    for class in &classes {
        for c in class.iter() {
            image.clear();
            window.for_each_image(&ts, c, |p| image.push(p));
            let hits = image.iter().filter(|&&p| occupied.contains(p)).count();
            if hits >= cutoff {
                continue;
            }
            let sub: Vec<_> = t
                .iter()
                .zip(&image)
                .filter(|(_, &p)| !occupied.contains(p))
                .map(|(g, _)| g.clone())
                .collect();
            for &p in &image {
                occupied.insert(p);
            }
            chosen.push((c, Shape::from_points(sub)));
        }
    }
    chosen.sort_by_key(|(c, _)| *c);
    let (centers, subshapes) = chosen.into_iter().unzip();
    Ok(Packing {
        centers,
        subshapes,
        classes: classes.len(),
    })
}

/// Re-derives the four packing properties from the output alone.
pub fn verify_packing(
    window: &ActionWindow,
    y: &PointSet,
    t: &Shape,
    eps: &Rational,
    packing: &Packing,
) -> Vec<Check> {
    let keep = Rational::one() - eps.clone();
    let mut checks = Vec::new();

    let small = packing
        .subshapes
        .iter()
        .position(|s| !s.is_subset(t) || !keep.below_count(s.len(), t.len()));
    checks.push(Check::new(
        "subshape size",
        small.is_none(),
        small.map_or(String::new(), |i| format!("center {}", packing.centers[i])),
    ));

    let mut union = window.empty_set();
    let mut clash = None;
    for (c, s) in packing.centers.iter().zip(&packing.subshapes) {
        for g in s {
            let p = window.act(g, *c);
            if union.contains(p) || y.contains(p) {
                clash.get_or_insert(p);
            }
            union.insert(p);
        }
    }
    checks.push(Check::new(
        "disjoint from each other and from Y",
        clash.is_none(),
        clash.map_or(String::new(), |p| format!("point {p}")),
    ));

    let with_y = union.union(y);
    let full = y.union(&window.translate_points(t, &packing.center_set(window)));
    checks.push(Check::new("Y ∪ ⋃T_c c = Y ∪ TC", with_y == full, ""));

    let counts = window.window_counts(&full, t);
    let starved = counts.iter().position(|&n| eps.exceeds_count(n as usize, t.len()));
    checks.push(Check::new(
        "saturation |(Y ∪ TC) ∩ Tx| ≥ ε|T|",
        starved.is_none(),
        starved.map_or(String::new(), |x| format!("point {x}")),
    ));
    checks
}
