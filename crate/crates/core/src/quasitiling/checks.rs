use serde::Serialize;

use super::bdense::TileAtlas;
use super::QuasitileError;
use crate::action_space::{banach_density, is_star_invariant, ActionWindow, PointCheck, PointSet};
use crate::group_model::{is_invariant, multiply_set, Rational, Shape};
use crate::report::Check;

/// Star-invariance of the covered set of `atlas` with respect to `F`.
///
/// The returned hypotheses record whether every tile `F_c` is
/// `(K, δ(1−ε))`-invariant; the outcome is evaluated regardless.
pub fn starinv_check(
    window: &ActionWindow,
    atlas: &TileAtlas,
    k: &Shape,
    delta: &Rational,
    eps: &Rational,
    f: &Shape,
) -> Result<(Vec<Check>, PointCheck), QuasitileError> {
    let tau = delta * &(Rational::one() - eps.clone());
    let loose = atlas
        .entries
        .iter()
        .position(|e| !is_invariant(window.model(), k, &tau, &e.shape));
    let hypotheses = vec![Check::new(
        "tiles (K, delta(1-eps))-invariant",
        loose.is_none(),
        loose.map_or(String::new(), |i| format!("entry {i}")),
    )];
    let outcome = is_star_invariant(window, &atlas.covered, k, delta, f)?;
    Ok((hypotheses, outcome))
}

/// Both sides of `lBD(B) ≥ (1 − ε(1+δ)) lBD(A) + ε` on the window `TU`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PackBound {
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

/// Evaluates the packing density bound after checking its preconditions:
/// `A` is nonempty and `(T⁻¹, δ)*`-invariant with respect to `U`, `B ⊇ A`,
/// `|B ∩ Tx| ≥ ε|T|` everywhere and `ε(1+δ) < 1`.
pub fn pack_bound_check(
    window: &ActionWindow,
    a: &PointSet,
    b: &PointSet,
    t: &Shape,
    eps: &Rational,
    delta: &Rational,
    u: &Shape,
) -> Result<PackBound, QuasitileError> {
    let one = Rational::one();
    let grow = eps * &(&one + delta);
    if grow >= one {
        return Err(precondition("eps(1+delta) < 1", format!("{grow}")));
    }
    if a.is_empty() {
        return Err(precondition("A nonempty", String::new()));
    }
    if !a.is_subset(b) {
        return Err(precondition("B contains A", String::new()));
    }
    let counts = window.window_counts(b, t);
    if let Some(x) = counts.iter().position(|&n| eps.exceeds_count(n as usize, t.len())) {
        return Err(precondition("|B ∩ Tx| >= eps|T|", format!("point {x}")));
    }
    let model = window.model();
    let star = is_star_invariant(window, a, &t.inverse(model), delta, u)?;
    if let Some(x) = star.witness {
        return Err(precondition("A (T^-1, delta)*-invariant w.r.t. U", format!("point {x}")));
    }
    let tu = [multiply_set(model, t, u)];
    let da = banach_density(window, a, &tu)?.lower;
    let db = banach_density(window, b, &tu)?.lower;
    let rhs = &(&(&one - &grow) * &da) + eps;
    Ok(PackBound {
        holds: db >= rhs,
        lhs: db,
        rhs,
    })
}

fn precondition(name: &str, detail: String) -> QuasitileError {
    QuasitileError::Precondition {
        name: name.to_string(),
        detail,
    }
}
