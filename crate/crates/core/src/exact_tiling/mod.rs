//! Exact tilings of action windows: quasitile, carve slots, match the
//! leftover into the slots and reassemble.

mod assemble;
mod params;
mod pipeline;
mod slots;

pub use assemble::{assemble_shapes, class_cover, verify_tiling, Tiling};
pub use params::{build_ladder, choose_epsilon, epsilon_inequality_holds, LadderRung};
pub use pipeline::{tile_exactly, Attempt, TileConfig, TilingReport, TilingRun, EPSILON_CANDIDATES};
pub use slots::{build_relation, carve_slots, choose_u, difference_set, slot_size, SlotRelation, Slots, UChoice};

use crate::action_space::ActionError;
use crate::group_model::{GroupError, Rational};
use crate::matching::MatchingError;
use crate::quasitiling::QuasitileError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactTilingError {
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Quasitile(#[from] QuasitileError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error("delta {0} is not in (0, 1)")]
    InvalidDelta(Rational),
    #[error("invalid K: {0}")]
    InvalidK(String),
    #[error("shape too small for slot carving: center {center}, |F_c| = {size}, eps = {eps}")]
    ShapeTooSmall { center: usize, size: usize, eps: Rational },
    #[error("no ladder: {0}")]
    NoLadder(String),
    #[error("no admissible U: {0}")]
    USearch(String),
    #[error("{side} degree bound fails at point {point}")]
    DegreeBound { side: &'static str, point: usize },
    #[error("leftover point {0} is unmatched")]
    Unmatched(usize),
    #[error("hypothesis failed: {name}: {detail}")]
    Hypothesis { name: String, detail: String },
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        source: Box<ExactTilingError>,
    },
    #[error("no working eps produced a verified tiling: {}", .0.join("; "))]
    Infeasible(Vec<String>),
}

impl ExactTilingError {
    /// Strips stage tags.
    pub fn root(&self) -> &ExactTilingError {
        match self {
            ExactTilingError::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    /// Whether the failure comes from the parameters being unattainable rather
    /// than from malformed input.
    pub fn is_infeasible(&self) -> bool {
        match self.root() {
            ExactTilingError::Action(_)
            | ExactTilingError::Group(_)
            | ExactTilingError::InvalidDelta(_)
            | ExactTilingError::InvalidK(_) => false,
            ExactTilingError::Quasitile(q) => !matches!(
                q,
                QuasitileError::Action(_) | QuasitileError::Group(_) | QuasitileError::InvalidEpsilon(_)
            ),
            _ => true,
        }
    }
}
